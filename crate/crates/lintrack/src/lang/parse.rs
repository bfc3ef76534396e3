//! Text format for implementations.
//!
//! ```text
//! object <name> : <builtin>(<params>) uses {
//!   <base> : <builtin>(<params>);
//!   ...
//! }
//!
//! proc <Op>(<argdomain>) {
//!   <stmt>;
//!   ...
//! }
//! ```
//!
//! Builtins: `register({v, ...}, init)`, `rcas({v, ...}, init)`,
//! `queue({v, ...}, capacity)`. Values are integers, `true`, `false`,
//! `unit`, and `pair(v, w)`; a bare value where a set is expected is a
//! singleton set. Statements are `x := <term>`, `invoke <base>.<op>(<term>)`,
//! `return <term>`, `goto <n>`, the primitive conditional jump
//! `if <term> goto <n> else goto <m>`, and the block form
//! `if <term> { ... } else { ... }` (else optional), which is desugared to
//! goto form at load so each branch statement still executes as its own
//! line. Line numbers are 0-based statement positions after desugaring.
//! Terms: variables, literals, `Arg`, `fst(e)`, `snd(e)`, `pair(e, e)`,
//! `!e`, `invoke <base>.<op>(e)`, and binary `+ - * = < && ||`.
//! Comments run from `#` to end of line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::lang::ast::{BinOp, Implementation, Procedure, ProcedureError, Statement, Term};
use crate::object::{builtin_queue, builtin_rcas, builtin_register, ObjectRegistry, ObjectType};
use crate::value::{Val, DEFAULT_INT_BITS};

/// Position of a token or error in the source text (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A syntax or validation error, with the position it was detected at.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '0'..='9' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let n: i64 = text
                    .parse()
                    .map_err(|_| ParseError::new(pos, format!("integer literal `{text}` is too large")))?;
                toks.push((Tok::Int(n), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        text.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(text), pos));
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    toks.push((Tok::Sym(":="), pos));
                } else {
                    toks.push((Tok::Sym(":"), pos));
                }
            }
            '&' => {
                bump!();
                if chars.peek() == Some(&'&') {
                    bump!();
                    toks.push((Tok::Sym("&&"), pos));
                } else {
                    return Err(ParseError::new(pos, "expected `&&`"));
                }
            }
            '|' => {
                bump!();
                if chars.peek() == Some(&'|') {
                    bump!();
                    toks.push((Tok::Sym("||"), pos));
                } else {
                    return Err(ParseError::new(pos, "expected `||`"));
                }
            }
            '{' | '}' | '(' | ')' | ',' | ';' | '.' | '+' | '-' | '*' | '=' | '<' | '!' => {
                bump!();
                let sym = match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    ',' => ",",
                    ';' => ";",
                    '.' => ".",
                    '+' => "+",
                    '-' => "-",
                    '*' => "*",
                    '=' => "=",
                    '<' => "<",
                    _ => "!",
                };
                toks.push((Tok::Sym(sym), pos));
            }
            other => {
                return Err(ParseError::new(pos, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(toks)
}

/// Statement as written, before if-blocks are flattened into lines.
enum SurfaceStmt {
    Simple(Statement),
    IfBlock {
        cond: Term,
        then: Vec<SurfaceStmt>,
        els: Vec<SurfaceStmt>,
    },
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks
            .get(self.at)
            .or_else(|| self.toks.last())
            .map(|(_, p)| *p)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let tok = self
            .toks
            .get(self.at)
            .map(|(t, _)| t.clone())
            .ok_or_else(|| ParseError::new(self.pos(), "unexpected end of input"))?;
        self.at += 1;
        Ok(tok)
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next()? {
            Tok::Sym(s) if s == sym => Ok(()),
            other => Err(ParseError::new(pos, format!("expected `{sym}`, found {other}"))),
        }
    }

    fn eat_sym(&mut self, sym: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == word) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        if self.eat_keyword(word) {
            Ok(())
        } else {
            Err(ParseError::new(pos, format!("expected `{word}`")))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            other => Err(ParseError::new(pos, format!("expected {what}, found {other}"))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<i64, ParseError> {
        let pos = self.pos();
        let negative = self.eat_sym("-");
        match self.next()? {
            Tok::Int(n) => Ok(if negative { -n } else { n }),
            other => Err(ParseError::new(pos, format!("expected {what}, found {other}"))),
        }
    }

    fn value(&mut self) -> Result<Val, ParseError> {
        let pos = self.pos();
        if self.eat_sym("-") {
            let pos = self.pos();
            return match self.next()? {
                Tok::Int(n) => Ok(Val::Int(-n)),
                other => Err(ParseError::new(pos, format!("expected integer, found {other}"))),
            };
        }
        match self.next()? {
            Tok::Int(n) => Ok(Val::Int(n)),
            Tok::Ident(s) => match s.as_str() {
                "true" => Ok(Val::Bool(true)),
                "false" => Ok(Val::Bool(false)),
                "unit" => Ok(Val::Unit),
                "pair" => {
                    self.expect_sym("(")?;
                    let a = self.value()?;
                    self.expect_sym(",")?;
                    let b = self.value()?;
                    self.expect_sym(")")?;
                    Ok(Val::pair(a, b))
                }
                other => Err(ParseError::new(pos, format!("expected a value, found `{other}`"))),
            },
            other => Err(ParseError::new(pos, format!("expected a value, found {other}"))),
        }
    }

    /// A value set: `{v, ...}` or a bare value as a singleton.
    fn value_set(&mut self) -> Result<Vec<Val>, ParseError> {
        if self.eat_sym("{") {
            let pos = self.pos();
            let mut vals = vec![self.value()?];
            while self.eat_sym(",") {
                vals.push(self.value()?);
            }
            self.expect_sym("}")?;
            vals.sort();
            vals.dedup();
            if vals.is_empty() {
                return Err(ParseError::new(pos, "value set must be nonempty"));
            }
            Ok(vals)
        } else {
            Ok(vec![self.value()?])
        }
    }

    fn builtin(&mut self) -> Result<(ObjectType, Val), ParseError> {
        let pos = self.pos();
        let name = self.expect_ident("a builtin type name")?;
        self.expect_sym("(")?;
        let domain = self.value_set()?;
        self.expect_sym(",")?;
        let result = match name.as_str() {
            "register" | "rcas" => {
                let init_pos = self.pos();
                let init = self.value()?;
                if !domain.contains(&init) {
                    return Err(ParseError::new(
                        init_pos,
                        format!("initial value {init} is not in the declared domain"),
                    ));
                }
                let ty = if name == "register" {
                    builtin_register(&domain, &init)
                } else {
                    builtin_rcas(&domain, &init)
                };
                (ty, init)
            }
            "queue" => {
                let cap_pos = self.pos();
                let capacity = self.expect_int("a capacity")?;
                if capacity < 1 {
                    return Err(ParseError::new(cap_pos, "queue capacity must be at least 1"));
                }
                let ty = builtin_queue(&domain, capacity as usize);
                (ty, crate::object::encode_seq(&[]))
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unknown builtin `{other}` (expected register, rcas, or queue)"),
                ))
            }
        };
        self.expect_sym(")")?;
        Ok(result)
    }

    // Term grammar, loosest first: || < && < (= <) < (+ -) < * < !.
    fn term(&mut self) -> Result<Term, ParseError> {
        self.term_or()
    }

    fn term_or(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_and()?;
        while self.eat_sym("||") {
            lhs = Term::bin(BinOp::Or, lhs, self.term_and()?);
        }
        Ok(lhs)
    }

    fn term_and(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_cmp()?;
        while self.eat_sym("&&") {
            lhs = Term::bin(BinOp::And, lhs, self.term_cmp()?);
        }
        Ok(lhs)
    }

    fn term_cmp(&mut self) -> Result<Term, ParseError> {
        let lhs = self.term_add()?;
        if self.eat_sym("=") {
            Ok(Term::bin(BinOp::Eq, lhs, self.term_add()?))
        } else if self.eat_sym("<") {
            Ok(Term::bin(BinOp::Lt, lhs, self.term_add()?))
        } else {
            Ok(lhs)
        }
    }

    fn term_add(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_mul()?;
        loop {
            if self.eat_sym("+") {
                lhs = Term::bin(BinOp::Add, lhs, self.term_mul()?);
            } else if self.eat_sym("-") {
                lhs = Term::bin(BinOp::Sub, lhs, self.term_mul()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term_mul(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_unary()?;
        while self.eat_sym("*") {
            lhs = Term::bin(BinOp::Mul, lhs, self.term_unary()?);
        }
        Ok(lhs)
    }

    fn term_unary(&mut self) -> Result<Term, ParseError> {
        if self.eat_sym("!") {
            Ok(Term::Not(Box::new(self.term_unary()?)))
        } else {
            self.term_primary()
        }
    }

    fn invoke_target(&mut self) -> Result<(String, String, Term), ParseError> {
        let object = self.expect_ident("a base object name")?;
        self.expect_sym(".")?;
        let op = self.expect_ident("an operation name")?;
        self.expect_sym("(")?;
        let arg = self.term()?;
        self.expect_sym(")")?;
        Ok((object, op, arg))
    }

    fn term_primary(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        if self.eat_sym("(") {
            let inner = self.term()?;
            self.expect_sym(")")?;
            return Ok(inner);
        }
        if self.eat_sym("-") {
            let pos = self.pos();
            return match self.next()? {
                Tok::Int(n) => Ok(Term::Int(-n)),
                other => Err(ParseError::new(pos, format!("expected integer, found {other}"))),
            };
        }
        match self.next()? {
            Tok::Int(n) => Ok(Term::Int(n)),
            Tok::Ident(s) => match s.as_str() {
                "true" => Ok(Term::Bool(true)),
                "false" => Ok(Term::Bool(false)),
                "unit" => Ok(Term::Unit),
                "Arg" => Ok(Term::Arg),
                "fst" | "snd" => {
                    self.expect_sym("(")?;
                    let inner = self.term()?;
                    self.expect_sym(")")?;
                    Ok(if s == "fst" {
                        Term::Fst(Box::new(inner))
                    } else {
                        Term::Snd(Box::new(inner))
                    })
                }
                "pair" => {
                    self.expect_sym("(")?;
                    let a = self.term()?;
                    self.expect_sym(",")?;
                    let b = self.term()?;
                    self.expect_sym(")")?;
                    Ok(Term::Pair(Box::new(a), Box::new(b)))
                }
                "invoke" => {
                    let (object, op, arg) = self.invoke_target()?;
                    Ok(Term::invoke(object, op, arg))
                }
                _ => Ok(Term::Var(s)),
            },
            other => Err(ParseError::new(pos, format!("expected a term, found {other}"))),
        }
    }

    fn statement_block(&mut self) -> Result<Vec<SurfaceStmt>, ParseError> {
        let pos = self.pos();
        self.expect_sym("{")?;
        let mut stmts = Vec::new();
        while !self.eat_sym("}") {
            if self.peek().is_none() {
                return Err(ParseError::new(self.pos(), "unterminated block"));
            }
            stmts.push(self.surface_statement()?);
        }
        if stmts.is_empty() {
            return Err(ParseError::new(pos, "block must contain at least one statement"));
        }
        Ok(stmts)
    }

    fn surface_statement(&mut self) -> Result<SurfaceStmt, ParseError> {
        let pos = self.pos();
        if self.eat_keyword("if") {
            let cond = self.term()?;
            if self.eat_keyword("goto") {
                // Primitive conditional jump.
                let then_target = self.expect_int("a line number")?;
                self.expect_keyword("else")?;
                self.expect_keyword("goto")?;
                let else_target = self.expect_int("a line number")?;
                self.expect_sym(";")?;
                let stmt = Statement::if_(
                    cond,
                    Statement::Goto(line_number(then_target, pos)?),
                    Statement::Goto(line_number(else_target, pos)?),
                );
                return Ok(SurfaceStmt::Simple(stmt));
            }
            let then = self.statement_block()?;
            let els = if self.eat_keyword("else") {
                self.statement_block()?
            } else {
                Vec::new()
            };
            return Ok(SurfaceStmt::IfBlock { cond, then, els });
        }
        if self.eat_keyword("goto") {
            let target = self.expect_int("a line number")?;
            self.expect_sym(";")?;
            return Ok(SurfaceStmt::Simple(Statement::Goto(line_number(target, pos)?)));
        }
        if self.eat_keyword("return") {
            let term = self.term()?;
            self.expect_sym(";")?;
            return Ok(SurfaceStmt::Simple(Statement::Return(term)));
        }
        if self.eat_keyword("invoke") {
            let (object, op, arg) = self.invoke_target()?;
            self.expect_sym(";")?;
            return Ok(SurfaceStmt::Simple(Statement::invoke(object, op, arg)));
        }
        // Assignment: ident := term
        let name = self.expect_ident("a statement")?;
        self.expect_sym(":=")?;
        let term = self.term()?;
        self.expect_sym(";")?;
        Ok(SurfaceStmt::Simple(Statement::Assign(name, term)))
    }
}

fn line_number(n: i64, pos: Pos) -> Result<usize, ParseError> {
    usize::try_from(n).map_err(|_| ParseError::new(pos, "line numbers cannot be negative"))
}

/// Whether control can run past a flattened statement to the next line.
fn falls_through(stmt: &Statement) -> bool {
    match stmt {
        Statement::Return(_) | Statement::Goto(_) => false,
        Statement::If(_, a, b) => falls_through(a) || falls_through(b),
        Statement::Seq(_, b) => falls_through(b),
        Statement::Assign(..) | Statement::Invoke { .. } => true,
    }
}

fn flat_len(stmts: &[SurfaceStmt]) -> usize {
    stmts.iter().map(stmt_flat_len).sum()
}

fn stmt_flat_len(stmt: &SurfaceStmt) -> usize {
    match stmt {
        SurfaceStmt::Simple(_) => 1,
        SurfaceStmt::IfBlock { then, els, .. } => {
            let mut len = 1 + flat_len(then);
            if !els.is_empty() {
                if surface_falls_through(then) {
                    len += 1; // jump over the else block
                }
                len += flat_len(els);
            }
            len
        }
    }
}

fn surface_falls_through(stmts: &[SurfaceStmt]) -> bool {
    match stmts.last() {
        None => true,
        Some(SurfaceStmt::Simple(s)) => falls_through(s),
        Some(SurfaceStmt::IfBlock { then, els, .. }) => {
            els.is_empty() || surface_falls_through(then) || surface_falls_through(els)
        }
    }
}

/// Flatten surface statements into numbered lines, desugaring if-blocks
/// into a conditional jump plus goto-linked branch lines.
fn flatten(stmts: Vec<SurfaceStmt>, out: &mut Vec<Statement>) {
    for stmt in stmts {
        match stmt {
            SurfaceStmt::Simple(s) => out.push(s),
            SurfaceStmt::IfBlock { cond, then, els } => {
                let here = out.len();
                let then_start = here + 1;
                let then_len = flat_len(&then);
                if els.is_empty() {
                    let join = then_start + then_len;
                    out.push(Statement::if_(
                        cond,
                        Statement::Goto(then_start),
                        Statement::Goto(join),
                    ));
                    flatten(then, out);
                } else {
                    let jump_over = surface_falls_through(&then);
                    let else_start = then_start + then_len + usize::from(jump_over);
                    let join = else_start + flat_len(&els);
                    out.push(Statement::if_(
                        cond,
                        Statement::Goto(then_start),
                        Statement::Goto(else_start),
                    ));
                    flatten(then, out);
                    if jump_over {
                        out.push(Statement::Goto(join));
                    }
                    flatten(els, out);
                }
            }
        }
    }
}

fn collect_invokes<'a>(term: &'a Term, out: &mut Vec<(&'a str, &'a str)>) {
    match term {
        Term::Invoke { object, op, arg } => {
            out.push((object, op));
            collect_invokes(arg, out);
        }
        Term::Fst(t) | Term::Snd(t) | Term::Not(t) => collect_invokes(t, out),
        Term::Bin(_, a, b) | Term::Pair(a, b) => {
            collect_invokes(a, out);
            collect_invokes(b, out);
        }
        _ => {}
    }
}

fn stmt_invokes<'a>(stmt: &'a Statement, out: &mut Vec<(&'a str, &'a str)>) {
    match stmt {
        Statement::Seq(a, b) => {
            stmt_invokes(a, out);
            stmt_invokes(b, out);
        }
        Statement::Assign(_, t) | Statement::Return(t) => collect_invokes(t, out),
        Statement::If(c, a, b) => {
            collect_invokes(c, out);
            stmt_invokes(a, out);
            stmt_invokes(b, out);
        }
        Statement::Invoke { object, op, arg } => {
            out.push((object, op));
            collect_invokes(arg, out);
        }
        Statement::Goto(_) => {}
    }
}

fn collect_vars<'a>(term: &'a Term, reads: &mut BTreeSet<&'a str>) {
    match term {
        Term::Var(x) => {
            reads.insert(x);
        }
        Term::Fst(t) | Term::Snd(t) | Term::Not(t) => collect_vars(t, reads),
        Term::Bin(_, a, b) | Term::Pair(a, b) => {
            collect_vars(a, reads);
            collect_vars(b, reads);
        }
        Term::Invoke { arg, .. } => collect_vars(arg, reads),
        _ => {}
    }
}

fn stmt_vars<'a>(stmt: &'a Statement, reads: &mut BTreeSet<&'a str>, writes: &mut BTreeSet<&'a str>) {
    match stmt {
        Statement::Seq(a, b) => {
            stmt_vars(a, reads, writes);
            stmt_vars(b, reads, writes);
        }
        Statement::Assign(x, t) => {
            collect_vars(t, reads);
            writes.insert(x);
        }
        Statement::If(c, a, b) => {
            collect_vars(c, reads);
            stmt_vars(a, reads, writes);
            stmt_vars(b, reads, writes);
        }
        Statement::Return(t) => collect_vars(t, reads),
        Statement::Invoke { arg, .. } => collect_vars(arg, reads),
        Statement::Goto(_) => {}
    }
}

/// Parse and validate an implementation from source text.
///
/// Beyond syntax, this checks that every operation of the implemented type
/// has exactly one procedure with a matching argument domain, that every
/// invocation targets a declared base object and operation, that gotos stay
/// in range, and that every variable read is assigned somewhere in its
/// procedure.
pub fn parse_implementation(source: &str) -> Result<Implementation, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, at: 0 };

    let start = p.pos();
    p.expect_keyword("object")?;
    let object_name = p.expect_ident("an object name")?;
    p.expect_sym(":")?;
    let (object_type, initial_state) = p.builtin()?;
    p.expect_keyword("uses")?;
    p.expect_sym("{")?;
    let mut bases = ObjectRegistry::new();
    while !p.eat_sym("}") {
        let base_pos = p.pos();
        let base_name = p.expect_ident("a base object name")?;
        p.expect_sym(":")?;
        let (ty, init) = p.builtin()?;
        p.expect_sym(";")?;
        bases
            .register(base_name, ty, init)
            .map_err(|e| ParseError::new(base_pos, e.to_string()))?;
    }

    let mut procedures: BTreeMap<String, Procedure> = BTreeMap::new();
    let mut declared_domains: BTreeMap<String, Vec<Val>> = BTreeMap::new();
    let mut proc_positions: BTreeMap<String, Pos> = BTreeMap::new();
    while p.peek().is_some() {
        let pos = p.pos();
        p.expect_keyword("proc")?;
        let op = p.expect_ident("an operation name")?;
        if procedures.contains_key(&op) {
            return Err(ParseError::new(pos, format!("operation `{op}` implemented twice")));
        }
        p.expect_sym("(")?;
        let domain = p.value_set()?;
        p.expect_sym(")")?;
        let body = p.statement_block()?;
        let mut lines = Vec::new();
        flatten(body, &mut lines);
        let procedure = Procedure::new(lines).map_err(|e| match e {
            ProcedureError::Empty => ParseError::new(pos, format!("procedure `{op}` is empty")),
            ProcedureError::GotoOutOfRange { line, target, len } => ParseError::new(
                pos,
                format!("in `{op}`: goto {target} on line {line} is outside the procedure (length {len})"),
            ),
        })?;
        declared_domains.insert(op.clone(), domain);
        proc_positions.insert(op.clone(), pos);
        procedures.insert(op, procedure);
    }

    // Procedures must cover the implemented type's operations exactly, with
    // matching argument domains.
    for op in object_type.ops() {
        if !procedures.contains_key(op) {
            return Err(ParseError::new(
                start,
                format!("operation `{op}` of {} has no procedure", object_type.tag()),
            ));
        }
    }
    for (op, domain) in &declared_domains {
        let pos = proc_positions[op];
        if !object_type.has_op(op) {
            return Err(ParseError::new(
                pos,
                format!("`{op}` is not an operation of {}", object_type.tag()),
            ));
        }
        if domain.as_slice() != object_type.arg_domain(op) {
            return Err(ParseError::new(
                pos,
                format!(
                    "argument domain of `{op}` does not match the implemented type's domain"
                ),
            ));
        }
    }

    // Invocations must target declared base objects and their operations;
    // variable reads must be assigned somewhere in the same procedure.
    let mut variables = BTreeSet::new();
    for (op, procedure) in &procedures {
        let pos = proc_positions[op];
        let mut invokes = Vec::new();
        let mut reads = BTreeSet::new();
        let mut writes = BTreeSet::new();
        for stmt in procedure.statements() {
            stmt_invokes(stmt, &mut invokes);
            stmt_vars(stmt, &mut reads, &mut writes);
        }
        for (object, base_op) in invokes {
            let base = bases.get(object).ok_or_else(|| {
                ParseError::new(pos, format!("in `{op}`: unknown base object `{object}`"))
            })?;
            if !base.ty.has_op(base_op) {
                return Err(ParseError::new(
                    pos,
                    format!("in `{op}`: base object `{object}` has no operation `{base_op}`"),
                ));
            }
        }
        for read in reads {
            if !writes.contains(read) {
                return Err(ParseError::new(
                    pos,
                    format!("in `{op}`: variable `{read}` is never assigned"),
                ));
            }
        }
        variables.extend(writes.iter().map(|s| s.to_string()));
    }

    Ok(Implementation {
        object_name,
        object_type,
        initial_state,
        bases,
        procedures,
        variables,
        int_bits: DEFAULT_INT_BITS,
    })
}

//! Abstract syntax for the implementation language: terms, statements,
//! procedures, and whole implementations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::object::{ObjectRegistry, ObjectType};
use crate::value::Val;

/// Binary operators on terms. Equality is structural over all values; the
/// arithmetic and comparison operators require integers, the logical ones
/// booleans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Lt,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Lt => "<",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }
}

/// A term evaluates to a value; invoking a base-object operation is the only
/// term form that can touch shared state.
#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(String),
    Int(i64),
    Bool(bool),
    Unit,
    /// The argument the pending high-level operation was invoked with.
    Arg,
    Fst(Box<Term>),
    Snd(Box<Term>),
    Bin(BinOp, Box<Term>, Box<Term>),
    Not(Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Invoke {
        object: String,
        op: String,
        arg: Box<Term>,
    },
}

impl Term {
    pub fn invoke(object: impl Into<String>, op: impl Into<String>, arg: Term) -> Term {
        Term::Invoke {
            object: object.into(),
            op: op.into(),
            arg: Box::new(arg),
        }
    }

    pub fn bin(op: BinOp, lhs: Term, rhs: Term) -> Term {
        Term::Bin(op, Box::new(lhs), Box::new(rhs))
    }
}

/// One statement of a procedure. A procedure is a list of statements and the
/// statement at the program counter executes atomically in a single step;
/// `Seq` composes statements within one such step.
#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Seq(Box<Statement>, Box<Statement>),
    Assign(String, Term),
    If(Term, Box<Statement>, Box<Statement>),
    Return(Term),
    /// Invoke a base-object operation and discard its result.
    Invoke {
        object: String,
        op: String,
        arg: Term,
    },
    Goto(usize),
}

impl Statement {
    pub fn seq(first: Statement, second: Statement) -> Statement {
        Statement::Seq(Box::new(first), Box::new(second))
    }

    pub fn if_(cond: Term, then: Statement, els: Statement) -> Statement {
        Statement::If(cond, Box::new(then), Box::new(els))
    }

    pub fn invoke(object: impl Into<String>, op: impl Into<String>, arg: Term) -> Statement {
        Statement::Invoke {
            object: object.into(),
            op: op.into(),
            arg,
        }
    }
}

/// Control outcome of executing one statement.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    Continue,
    Goto(usize),
    Return(Val),
}

/// A nonempty list of statements; the index of a statement is its line
/// number.
#[derive(Clone, Debug, PartialEq)]
pub struct Procedure {
    statements: Vec<Statement>,
}

impl Procedure {
    /// Builds a procedure, validating that it is nonempty and every `goto`
    /// (including those nested in `if`/`seq`) targets an existing line.
    pub fn new(statements: Vec<Statement>) -> Result<Self, ProcedureError> {
        if statements.is_empty() {
            return Err(ProcedureError::Empty);
        }
        let len = statements.len();
        for (line, stmt) in statements.iter().enumerate() {
            if let Some(target) = first_bad_goto(stmt, len) {
                return Err(ProcedureError::GotoOutOfRange { line, target, len });
            }
        }
        Ok(Procedure { statements })
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn statement(&self, line: usize) -> Option<&Statement> {
        self.statements.get(line)
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }
}

fn first_bad_goto(stmt: &Statement, len: usize) -> Option<usize> {
    match stmt {
        Statement::Goto(n) => (*n >= len).then_some(*n),
        Statement::Seq(a, b) => first_bad_goto(a, len).or_else(|| first_bad_goto(b, len)),
        Statement::If(_, a, b) => first_bad_goto(a, len).or_else(|| first_bad_goto(b, len)),
        _ => None,
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ProcedureError {
    #[error("procedure has no statements")]
    Empty,
    #[error("goto {target} on line {line} is outside the procedure (length {len})")]
    GotoOutOfRange { line: usize, target: usize, len: usize },
}

/// Local state of a pending operation: which operation, where in its
/// procedure, the invocation argument, and the private registers.
///
/// `pc == procedure length` is a stuck frame and is diagnosed when stepped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frame {
    pub op: String,
    pub pc: usize,
    pub arg: Val,
    pub registers: BTreeMap<String, Val>,
}

impl Frame {
    /// The frame installed when `op(arg)` is invoked: line 0, no registers.
    pub fn initial(op: impl Into<String>, arg: Val) -> Frame {
        Frame {
            op: op.into(),
            pc: 0,
            arg,
            registers: BTreeMap::new(),
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) at line {}", self.op, self.arg, self.pc)?;
        if !self.registers.is_empty() {
            let regs: Vec<String> = self
                .registers
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, " [{}]", regs.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of stepping a frame: the next frame, or a return value.
#[derive(Clone, Debug, PartialEq)]
pub enum ProcedureSignal {
    Next(Frame),
    Return(Val),
}

/// An implementation of an object type in terms of base objects: one
/// procedure per operation of the implemented type.
#[derive(Clone, Debug, PartialEq)]
pub struct Implementation {
    pub object_name: String,
    pub object_type: ObjectType,
    pub initial_state: Val,
    pub bases: ObjectRegistry,
    pub procedures: BTreeMap<String, Procedure>,
    pub variables: BTreeSet<String>,
    pub int_bits: u32,
}

impl Implementation {
    pub fn procedure(&self, op: &str) -> Option<&Procedure> {
        self.procedures.get(op)
    }
}

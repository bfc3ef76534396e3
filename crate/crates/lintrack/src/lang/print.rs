//! Renders an implementation back to source text. Parsing the output of
//! `pretty_print` yields a structurally equal implementation for any
//! implementation the parser can produce (`Seq` has no surface form; it is
//! printed as a brace group for readability but does not re-parse).

use std::fmt::Write;

use crate::lang::ast::{BinOp, Implementation, Statement, Term};
use crate::value::Val;

fn precedence(op: BinOp) -> u8 {
    match op {
        BinOp::Or => 1,
        BinOp::And => 2,
        BinOp::Eq | BinOp::Lt => 3,
        BinOp::Add | BinOp::Sub => 4,
        BinOp::Mul => 5,
    }
}

fn write_term(out: &mut String, term: &Term, parent: u8) {
    match term {
        Term::Var(x) => out.push_str(x),
        Term::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Term::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Term::Unit => out.push_str("unit"),
        Term::Arg => out.push_str("Arg"),
        Term::Fst(t) => {
            out.push_str("fst(");
            write_term(out, t, 0);
            out.push(')');
        }
        Term::Snd(t) => {
            out.push_str("snd(");
            write_term(out, t, 0);
            out.push(')');
        }
        Term::Pair(a, b) => {
            out.push_str("pair(");
            write_term(out, a, 0);
            out.push_str(", ");
            write_term(out, b, 0);
            out.push(')');
        }
        Term::Not(t) => {
            out.push('!');
            write_term(out, t, 6);
        }
        Term::Bin(op, a, b) => {
            let level = precedence(*op);
            let parens = level < parent;
            if parens {
                out.push('(');
            }
            // Comparison is non-associative; both operands bind tighter.
            let (left_level, right_level) = match op {
                BinOp::Eq | BinOp::Lt => (level + 1, level + 1),
                _ => (level, level + 1),
            };
            write_term(out, a, left_level);
            let _ = write!(out, " {} ", op.symbol());
            write_term(out, b, right_level);
            if parens {
                out.push(')');
            }
        }
        Term::Invoke { object, op, arg } => {
            let _ = write!(out, "invoke {object}.{op}(");
            write_term(out, arg, 0);
            out.push(')');
        }
    }
}

fn write_statement(out: &mut String, stmt: &Statement, indent: usize) {
    let pad = "  ".repeat(indent);
    match stmt {
        Statement::Assign(x, t) => {
            let _ = write!(out, "{pad}{x} := ");
            write_term(out, t, 0);
            out.push_str(";\n");
        }
        Statement::Return(t) => {
            let _ = write!(out, "{pad}return ");
            write_term(out, t, 0);
            out.push_str(";\n");
        }
        Statement::Invoke { object, op, arg } => {
            let _ = write!(out, "{pad}invoke {object}.{op}(");
            write_term(out, arg, 0);
            out.push_str(");\n");
        }
        Statement::Goto(n) => {
            let _ = writeln!(out, "{pad}goto {n};");
        }
        Statement::If(cond, then, els) => match (then.as_ref(), els.as_ref()) {
            (Statement::Goto(a), Statement::Goto(b)) => {
                let _ = write!(out, "{pad}if ");
                write_term(out, cond, 0);
                let _ = writeln!(out, " goto {a} else goto {b};");
            }
            _ => {
                let _ = write!(out, "{pad}if ");
                write_term(out, cond, 0);
                out.push_str(" {\n");
                write_statement(out, then, indent + 1);
                let _ = writeln!(out, "{pad}}} else {{");
                write_statement(out, els, indent + 1);
                let _ = writeln!(out, "{pad}}}");
            }
        },
        Statement::Seq(a, b) => {
            let _ = writeln!(out, "{pad}{{");
            write_statement(out, a, indent + 1);
            write_statement(out, b, indent + 1);
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

fn write_value_set(out: &mut String, vals: &[Val]) {
    out.push('{');
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{v}");
    }
    out.push('}');
}

/// Render an implementation as parseable source text.
pub fn pretty_print(implementation: &Implementation) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "object {} : {} uses {{",
        implementation.object_name,
        implementation.object_type.tag()
    );
    for (name, base) in implementation.bases.iter() {
        let _ = writeln!(out, "  {name} : {};", base.ty.tag());
    }
    out.push_str("}\n");
    for (op, procedure) in &implementation.procedures {
        let _ = write!(out, "\nproc {op}(");
        write_value_set(&mut out, implementation.object_type.arg_domain(op));
        out.push_str(") {\n");
        for stmt in procedure.statements() {
            write_statement(&mut out, stmt, 1);
        }
        out.push_str("}\n");
    }
    out
}

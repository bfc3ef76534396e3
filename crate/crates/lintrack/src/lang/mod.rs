//! The implementation language: abstract syntax, a text format, and
//! big-step evaluation of terms, statements, and frames.

pub mod ast;
pub mod eval;
pub mod parse;
pub mod print;

pub use ast::{
    BinOp, Frame, Implementation, Procedure, ProcedureError, ProcedureSignal, Signal, Statement,
    Term,
};
pub use eval::{eval_statement, eval_term, step_frame, Env, Eps, EvalError, Regs};
pub use parse::{parse_implementation, ParseError, Pos};
pub use print::pretty_print;

//! Big-step evaluation of terms and statements, and single-frame stepping.
//!
//! Evaluation is set-valued: a nondeterministic base-object transition forks
//! the outcome set, and sequencing takes all combinations. Terms without
//! invocations produce exactly one outcome or an error. Errors (unbound
//! variables, type mismatches, overflow, stuck base objects) abort the whole
//! evaluation; they diagnose a buggy program, not an inapplicable rule.

use std::collections::BTreeMap;

use crate::lang::ast::{BinOp, Frame, Implementation, ProcedureSignal, Signal, Statement, Term};
use crate::object::ObjectRegistry;
use crate::value::{ProcessId, Val, DEFAULT_INT_BITS};

/// Base-object state assignment: every declared base object maps to a state.
pub type Eps = BTreeMap<String, Val>;

/// Register valuation of one frame. Partial: reading an unassigned variable
/// is an error.
pub type Regs = BTreeMap<String, Val>;

/// What evaluation needs besides the term: the base-object registry and the
/// integer width.
#[derive(Clone, Copy)]
pub struct Env<'a> {
    pub bases: &'a ObjectRegistry,
    pub int_bits: u32,
}

impl<'a> Env<'a> {
    pub fn new(bases: &'a ObjectRegistry) -> Self {
        Env {
            bases,
            int_bits: DEFAULT_INT_BITS,
        }
    }
}

impl Implementation {
    pub fn env(&self) -> Env<'_> {
        Env {
            bases: &self.bases,
            int_bits: self.int_bits,
        }
    }
}

/// Why evaluation got stuck. Each kind is reported distinctly so users can
/// tell a buggy program from a non-linearizable one.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvalError {
    #[error("variable `{0}` read before assignment")]
    UnboundVar(String),
    #[error("expected {expected}, got {found}")]
    TypeMismatch {
        expected: &'static str,
        found: Val,
    },
    #[error("integer overflow in `{0}`")]
    Overflow(String),
    #[error("base object `{object}` is stuck: {op}({arg}) has no transition from state {state}")]
    ObjectStuck {
        object: String,
        op: String,
        arg: Val,
        state: Val,
    },
    #[error("unknown base object `{0}`")]
    UnknownObject(String),
    #[error("base object `{object}` has no operation `{op}`")]
    UnknownOperation { object: String, op: String },
    #[error("program counter {pc} is outside procedure `{op}` (length {len})")]
    PcOutOfRange { op: String, pc: usize, len: usize },
    #[error("no procedure implements operation `{0}`")]
    MissingProcedure(String),
}

type TermOutcomes = Vec<(Eps, Val)>;
type StatementOutcomes = Vec<(Regs, Eps, Signal)>;

fn expect_int(v: &Val) -> Result<i64, EvalError> {
    match v {
        Val::Int(n) => Ok(*n),
        other => Err(EvalError::TypeMismatch {
            expected: "integer",
            found: other.clone(),
        }),
    }
}

fn expect_bool(v: &Val) -> Result<bool, EvalError> {
    match v {
        Val::Bool(b) => Ok(*b),
        other => Err(EvalError::TypeMismatch {
            expected: "boolean",
            found: other.clone(),
        }),
    }
}

fn apply_bin(env: Env<'_>, op: BinOp, lhs: &Val, rhs: &Val) -> Result<Val, EvalError> {
    let arith = |f: fn(i64, i64) -> Option<i64>| -> Result<Val, EvalError> {
        let (a, b) = (expect_int(lhs)?, expect_int(rhs)?);
        let n = f(a, b).filter(|n| Val::fits_int(*n, env.int_bits)).ok_or_else(|| {
            EvalError::Overflow(format!("{} {} {}", a, op.symbol(), b))
        })?;
        Ok(Val::Int(n))
    };
    match op {
        BinOp::Add => arith(i64::checked_add),
        BinOp::Sub => arith(i64::checked_sub),
        BinOp::Mul => arith(i64::checked_mul),
        BinOp::Eq => Ok(Val::Bool(lhs == rhs)),
        BinOp::Lt => Ok(Val::Bool(expect_int(lhs)? < expect_int(rhs)?)),
        BinOp::And => Ok(Val::Bool(expect_bool(lhs)? && expect_bool(rhs)?)),
        BinOp::Or => Ok(Val::Bool(expect_bool(lhs)? || expect_bool(rhs)?)),
    }
}

/// Evaluate a term to its finite set of `(base states, value)` outcomes.
///
/// Evaluation order is left to right; `eps` threads through subterm
/// invocations, so nondeterministic deltas fan the set out.
pub fn eval_term(
    env: Env<'_>,
    proc: ProcessId,
    arg: &Val,
    regs: &Regs,
    eps: &Eps,
    term: &Term,
) -> Result<TermOutcomes, EvalError> {
    match term {
        Term::Var(x) => {
            let v = regs.get(x).ok_or_else(|| EvalError::UnboundVar(x.clone()))?;
            Ok(vec![(eps.clone(), v.clone())])
        }
        Term::Int(n) => {
            if !Val::fits_int(*n, env.int_bits) {
                return Err(EvalError::Overflow(n.to_string()));
            }
            Ok(vec![(eps.clone(), Val::Int(*n))])
        }
        Term::Bool(b) => Ok(vec![(eps.clone(), Val::Bool(*b))]),
        Term::Unit => Ok(vec![(eps.clone(), Val::Unit)]),
        Term::Arg => Ok(vec![(eps.clone(), arg.clone())]),
        Term::Fst(inner) => project(env, proc, arg, regs, eps, inner, |a, _| a),
        Term::Snd(inner) => project(env, proc, arg, regs, eps, inner, |_, b| b),
        Term::Not(inner) => {
            let mut out = Vec::new();
            for (eps1, v) in eval_term(env, proc, arg, regs, eps, inner)? {
                out.push((eps1, Val::Bool(!expect_bool(&v)?)));
            }
            Ok(out)
        }
        Term::Bin(op, lhs, rhs) => {
            let mut out = Vec::new();
            for (eps1, a) in eval_term(env, proc, arg, regs, eps, lhs)? {
                for (eps2, b) in eval_term(env, proc, arg, regs, &eps1, rhs)? {
                    out.push((eps2, apply_bin(env, *op, &a, &b)?));
                }
            }
            Ok(out)
        }
        Term::Pair(lhs, rhs) => {
            let mut out = Vec::new();
            for (eps1, a) in eval_term(env, proc, arg, regs, eps, lhs)? {
                for (eps2, b) in eval_term(env, proc, arg, regs, &eps1, rhs)? {
                    out.push((eps2, Val::pair(a.clone(), b)));
                }
            }
            Ok(out)
        }
        Term::Invoke { object, op, arg: inner } => {
            let base = env
                .bases
                .get(object)
                .ok_or_else(|| EvalError::UnknownObject(object.clone()))?;
            if !base.ty.has_op(op) {
                return Err(EvalError::UnknownOperation {
                    object: object.clone(),
                    op: op.clone(),
                });
            }
            let mut out = Vec::new();
            for (eps1, v) in eval_term(env, proc, arg, regs, eps, inner)? {
                let state = eps1
                    .get(object)
                    .ok_or_else(|| EvalError::UnknownObject(object.clone()))?;
                let successors = base.ty.delta(state, proc, op, &v);
                if successors.is_empty() {
                    return Err(EvalError::ObjectStuck {
                        object: object.clone(),
                        op: op.clone(),
                        arg: v,
                        state: state.clone(),
                    });
                }
                for (next_state, ret) in successors {
                    let mut eps2 = eps1.clone();
                    eps2.insert(object.clone(), next_state);
                    out.push((eps2, ret));
                }
            }
            Ok(out)
        }
    }
}

fn project(
    env: Env<'_>,
    proc: ProcessId,
    arg: &Val,
    regs: &Regs,
    eps: &Eps,
    inner: &Term,
    pick: fn(Val, Val) -> Val,
) -> Result<TermOutcomes, EvalError> {
    let mut out = Vec::new();
    for (eps1, v) in eval_term(env, proc, arg, regs, eps, inner)? {
        match v {
            Val::Pair(a, b) => out.push((eps1, pick(*a, *b))),
            other => {
                return Err(EvalError::TypeMismatch {
                    expected: "pair",
                    found: other,
                })
            }
        }
    }
    Ok(out)
}

/// Evaluate a statement to its finite set of `(registers, base states,
/// signal)` outcomes.
///
/// `Seq` short-circuits on `Return` and also on `Goto`: executing the second
/// statement after a control transfer would contradict the transfer.
pub fn eval_statement(
    env: Env<'_>,
    proc: ProcessId,
    arg: &Val,
    regs: &Regs,
    eps: &Eps,
    stmt: &Statement,
) -> Result<StatementOutcomes, EvalError> {
    match stmt {
        Statement::Seq(first, second) => {
            let mut out = Vec::new();
            for (regs1, eps1, sig) in eval_statement(env, proc, arg, regs, eps, first)? {
                match sig {
                    Signal::Continue => {
                        out.extend(eval_statement(env, proc, arg, &regs1, &eps1, second)?)
                    }
                    stop => out.push((regs1, eps1, stop)),
                }
            }
            Ok(out)
        }
        Statement::Assign(x, term) => {
            let mut out = Vec::new();
            for (eps1, v) in eval_term(env, proc, arg, regs, eps, term)? {
                let mut regs1 = regs.clone();
                regs1.insert(x.clone(), v);
                out.push((regs1, eps1, Signal::Continue));
            }
            Ok(out)
        }
        Statement::If(cond, then, els) => {
            let mut out = Vec::new();
            for (eps1, v) in eval_term(env, proc, arg, regs, eps, cond)? {
                let branch = if expect_bool(&v)? { then } else { els };
                out.extend(eval_statement(env, proc, arg, regs, &eps1, branch)?);
            }
            Ok(out)
        }
        Statement::Return(term) => {
            let mut out = Vec::new();
            for (eps1, v) in eval_term(env, proc, arg, regs, eps, term)? {
                out.push((regs.clone(), eps1, Signal::Return(v)));
            }
            Ok(out)
        }
        Statement::Invoke { object, op, arg: inner } => {
            // The return value is discarded and registers are untouched; a
            // program that needs the result assigns an invoke term instead.
            let term = Term::invoke(object.clone(), op.clone(), inner.clone());
            let mut out = Vec::new();
            for (eps1, _ret) in eval_term(env, proc, arg, regs, eps, &term)? {
                out.push((regs.clone(), eps1, Signal::Continue));
            }
            Ok(out)
        }
        Statement::Goto(n) => Ok(vec![(regs.clone(), eps.clone(), Signal::Goto(*n))]),
    }
}

/// Execute the statement at the frame's program counter.
///
/// `Continue` increments the counter, `Goto` sets it, and `Return` retires
/// the frame with its value.
pub fn step_frame(
    implementation: &Implementation,
    proc: ProcessId,
    eps: &Eps,
    frame: &Frame,
) -> Result<Vec<(Eps, ProcedureSignal)>, EvalError> {
    let procedure = implementation
        .procedure(&frame.op)
        .ok_or_else(|| EvalError::MissingProcedure(frame.op.clone()))?;
    let stmt = procedure.statement(frame.pc).ok_or(EvalError::PcOutOfRange {
        op: frame.op.clone(),
        pc: frame.pc,
        len: procedure.len(),
    })?;
    let env = implementation.env();
    let mut out = Vec::new();
    for (regs1, eps1, sig) in eval_statement(env, proc, &frame.arg, &frame.registers, eps, stmt)? {
        let next = match sig {
            Signal::Continue => ProcedureSignal::Next(Frame {
                pc: frame.pc + 1,
                registers: regs1,
                ..frame.clone()
            }),
            Signal::Goto(n) => ProcedureSignal::Next(Frame {
                pc: n,
                registers: regs1,
                ..frame.clone()
            }),
            Signal::Return(v) => ProcedureSignal::Return(v),
        };
        out.push((eps1, next));
    }
    Ok(out)
}

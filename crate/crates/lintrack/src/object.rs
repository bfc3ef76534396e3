//! Object types as explicit transition relations, plus the registry of
//! built-in types (read/write register, read/CAS cell, bounded queue).
//!
//! A type's `delta` is a computable set-valued function: the returned vector
//! is the finite set of `(next_state, return_value)` successors. An empty
//! result means the operation cannot fire in that state; callers surface this
//! as a specification-stuck diagnostic rather than pruning it silently.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::value::{ProcessId, Val};

type DeltaFn = dyn Fn(&Val, ProcessId, &str, &Val) -> Vec<(Val, Val)> + Send + Sync;
type MemberFn = dyn Fn(&Val) -> bool + Send + Sync;

/// The state set of an object type: a membership predicate over canonically
/// encoded states, plus a human-readable description.
#[derive(Clone)]
pub struct StateDomain {
    description: String,
    member: Arc<MemberFn>,
}

impl StateDomain {
    pub fn new(description: impl Into<String>, member: Arc<MemberFn>) -> Self {
        StateDomain {
            description: description.into(),
            member,
        }
    }

    pub fn contains(&self, state: &Val) -> bool {
        (self.member)(state)
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for StateDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateDomain")
            .field("description", &self.description)
            .finish()
    }
}

/// An object type: operation names, finite per-operation argument domains,
/// a state domain, and the transition function.
///
/// States are canonically encoded as [`Val`], which gives every type a total
/// order and hash for free. Two types compare equal when their tag, operation
/// set, and argument domains agree; the tag is the canonical constructor
/// description (e.g. `register({0, 1}, 0)`).
#[derive(Clone)]
pub struct ObjectType {
    tag: String,
    ops: Vec<String>,
    arg_domains: BTreeMap<String, Vec<Val>>,
    states: StateDomain,
    delta: Arc<DeltaFn>,
}

impl ObjectType {
    /// Build a type from parts. `ops` is sorted and argument domains are
    /// sorted and deduplicated so enumeration order is canonical.
    pub fn new(
        tag: impl Into<String>,
        arg_domains: BTreeMap<String, Vec<Val>>,
        states: StateDomain,
        delta: Arc<DeltaFn>,
    ) -> Self {
        let mut arg_domains = arg_domains;
        for domain in arg_domains.values_mut() {
            domain.sort();
            domain.dedup();
        }
        let ops = arg_domains.keys().cloned().collect();
        ObjectType {
            tag: tag.into(),
            ops,
            arg_domains,
            states,
            delta,
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Operation names in canonical (sorted) order.
    pub fn ops(&self) -> &[String] {
        &self.ops
    }

    pub fn has_op(&self, op: &str) -> bool {
        self.arg_domains.contains_key(op)
    }

    /// The finite invocation-argument domain of `op` (empty for unknown ops).
    pub fn arg_domain(&self, op: &str) -> &[Val] {
        self.arg_domains.get(op).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn state_domain(&self) -> &StateDomain {
        &self.states
    }

    /// All `(next_state, return_value)` successors of performing `op(arg)`
    /// in `state`. Empty means the operation is stuck there.
    pub fn delta(&self, state: &Val, proc: ProcessId, op: &str, arg: &Val) -> Vec<(Val, Val)> {
        (self.delta)(state, proc, op, arg)
    }
}

impl fmt::Debug for ObjectType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectType").field("tag", &self.tag).finish()
    }
}

impl PartialEq for ObjectType {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.ops == other.ops && self.arg_domains == other.arg_domains
    }
}

impl Eq for ObjectType {}

/// A named base object: its type and initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseObject {
    pub ty: ObjectType,
    pub init: Val,
}

/// Finite map from base-object name to its type and initial state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObjectRegistry {
    objects: BTreeMap<String, BaseObject>,
}

impl ObjectRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `name`; the initial state must lie in the type's state
    /// domain and names must be unique.
    pub fn register(&mut self, name: impl Into<String>, ty: ObjectType, init: Val) -> Result<(), RegistryError> {
        let name = name.into();
        if self.objects.contains_key(&name) {
            return Err(RegistryError::DuplicateName(name));
        }
        if !ty.state_domain().contains(&init) {
            return Err(RegistryError::InitOutsideDomain {
                name,
                init,
                domain: ty.state_domain().description().to_string(),
            });
        }
        self.objects.insert(name, BaseObject { ty, init });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&BaseObject> {
        self.objects.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BaseObject)> {
        self.objects.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// The initial base state assignment: every declared object at its
    /// initial state.
    pub fn initial_states(&self) -> BTreeMap<String, Val> {
        self.objects
            .iter()
            .map(|(name, obj)| (name.clone(), obj.init.clone()))
            .collect()
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RegistryError {
    #[error("base object `{0}` declared twice")]
    DuplicateName(String),
    #[error("initial state {init} of `{name}` is outside its state domain {domain}")]
    InitOutsideDomain { name: String, init: Val, domain: String },
}

fn format_domain(domain: &[Val]) -> String {
    let items: Vec<String> = domain.iter().map(Val::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn finite_domain(tag_prefix: &str, domain: &[Val]) -> StateDomain {
    let set: Vec<Val> = domain.to_vec();
    StateDomain::new(
        format!("{}{}", tag_prefix, format_domain(domain)),
        Arc::new(move |s| set.contains(s)),
    )
}

/// A register holding one value from `domain`, initially `init`.
///
/// `Read` returns the current state and leaves it unchanged; `Write(v)` sets
/// the state to `v` and returns `unit`. Both are deterministic; a write
/// outside the domain is stuck.
pub fn builtin_register(domain: &[Val], init: &Val) -> ObjectType {
    let mut sorted = domain.to_vec();
    sorted.sort();
    sorted.dedup();
    assert!(sorted.contains(init), "register initial value must be in its domain");
    let tag = format!("register({}, {})", format_domain(&sorted), init);
    let mut args = BTreeMap::new();
    args.insert("Read".to_string(), vec![Val::Unit]);
    args.insert("Write".to_string(), sorted.clone());
    let delta_domain = sorted.clone();
    ObjectType::new(
        tag,
        args,
        finite_domain("", &sorted),
        Arc::new(move |state, _proc, op, arg| match (op, arg) {
            ("Read", Val::Unit) => vec![(state.clone(), state.clone())],
            ("Write", v) if delta_domain.contains(v) => vec![(v.clone(), Val::Unit)],
            _ => vec![],
        }),
    )
}

/// A cell supporting `Read` and `CAS` over `domain`, initially `init`.
///
/// `CAS(pair(cur, new))` writes `new` and returns `true` when the state
/// equals `cur`; otherwise it leaves the state unchanged and returns `false`.
/// A non-pair or out-of-domain argument is stuck.
pub fn builtin_rcas(domain: &[Val], init: &Val) -> ObjectType {
    let mut sorted = domain.to_vec();
    sorted.sort();
    sorted.dedup();
    assert!(sorted.contains(init), "rcas initial value must be in its domain");
    let tag = format!("rcas({}, {})", format_domain(&sorted), init);
    let mut cas_args = Vec::new();
    for cur in &sorted {
        for new in &sorted {
            cas_args.push(Val::pair(cur.clone(), new.clone()));
        }
    }
    let mut args = BTreeMap::new();
    args.insert("Read".to_string(), vec![Val::Unit]);
    args.insert("CAS".to_string(), cas_args);
    let delta_domain = sorted.clone();
    ObjectType::new(
        tag,
        args,
        finite_domain("", &sorted),
        Arc::new(move |state, _proc, op, arg| match (op, arg) {
            ("Read", Val::Unit) => vec![(state.clone(), state.clone())],
            ("CAS", Val::Pair(cur, new))
                if delta_domain.contains(cur) && delta_domain.contains(new) =>
            {
                if state == cur.as_ref() {
                    vec![(new.as_ref().clone(), Val::Bool(true))]
                } else {
                    vec![(state.clone(), Val::Bool(false))]
                }
            }
            _ => vec![],
        }),
    )
}

/// Encode a bounded sequence as a `Val` cons list: `[] = unit`,
/// `v:rest = pair(v, rest)`.
pub fn encode_seq(items: &[Val]) -> Val {
    items
        .iter()
        .rev()
        .fold(Val::Unit, |acc, v| Val::pair(v.clone(), acc))
}

/// Decode a cons-list `Val` back into a sequence. `None` if the value is not
/// a well-formed list.
pub fn decode_seq(mut state: &Val) -> Option<Vec<Val>> {
    let mut items = Vec::new();
    loop {
        match state {
            Val::Unit => return Some(items),
            Val::Pair(head, tail) => {
                items.push(head.as_ref().clone());
                state = tail;
            }
            _ => return None,
        }
    }
}

/// A FIFO queue over `domain` with the given capacity; initially empty.
///
/// `Enq(v)` appends and returns `unit`; `Deq` removes and returns the head.
/// Both block (empty delta) when they cannot fire: `Enq` at capacity, `Deq`
/// on an empty queue.
pub fn builtin_queue(domain: &[Val], capacity: usize) -> ObjectType {
    assert!(capacity >= 1, "queue capacity must be at least 1");
    let mut sorted = domain.to_vec();
    sorted.sort();
    sorted.dedup();
    let tag = format!("queue({}, {})", format_domain(&sorted), capacity);
    let mut args = BTreeMap::new();
    args.insert("Enq".to_string(), sorted.clone());
    args.insert("Deq".to_string(), vec![Val::Unit]);
    let elem_domain = sorted.clone();
    let member_domain = sorted.clone();
    let states = StateDomain::new(
        format!("sequences over {} of length <= {}", format_domain(&sorted), capacity),
        Arc::new(move |s| match decode_seq(s) {
            Some(items) => {
                items.len() <= capacity && items.iter().all(|v| member_domain.contains(v))
            }
            None => false,
        }),
    );
    ObjectType::new(
        tag,
        args,
        states,
        Arc::new(move |state, _proc, op, arg| {
            let Some(items) = decode_seq(state) else {
                return vec![];
            };
            match (op, arg) {
                ("Enq", v) if elem_domain.contains(v) && items.len() < capacity => {
                    let mut next = items;
                    next.push(v.clone());
                    vec![(encode_seq(&next), Val::Unit)]
                }
                ("Deq", Val::Unit) if !items.is_empty() => {
                    let head = items[0].clone();
                    vec![(encode_seq(&items[1..]), head)]
                }
                _ => vec![],
            }
        }),
    )
}

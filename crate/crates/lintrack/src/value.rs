//! The value universe exchanged with operations: bounded integers, booleans,
//! unit, and pairs.

use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

/// Default signed-integer width in bits. Arithmetic that leaves the
/// `[-2^(w-1), 2^(w-1) - 1]` range is an evaluation error, not wraparound.
pub const DEFAULT_INT_BITS: u32 = 63;

/// A value passed to or returned from an operation.
///
/// The derived `Ord` gives the canonical total order used for set
/// deduplication: `Int < Bool < Unit < Pair`, lexicographic within a variant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Int(i64),
    Bool(bool),
    Unit,
    Pair(Box<Val>, Box<Val>),
}

impl Val {
    pub fn pair(first: Val, second: Val) -> Val {
        Val::Pair(Box::new(first), Box::new(second))
    }

    /// Whether an `i64` fits in a signed integer of `bits` width.
    pub fn fits_int(n: i64, bits: u32) -> bool {
        debug_assert!((1..=64).contains(&bits));
        if bits == 64 {
            return true;
        }
        let max = (1i64 << (bits - 1)) - 1;
        let min = -(1i64 << (bits - 1));
        n >= min && n <= max
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Int(n) => write!(f, "{n}"),
            Val::Bool(b) => write!(f, "{b}"),
            Val::Unit => write!(f, "unit"),
            Val::Pair(a, b) => write!(f, "pair({a}, {b})"),
        }
    }
}

// JSON encoding (documented in the trace schema):
//   Int(n)     <->  {"int": n}
//   Bool(b)    <->  {"bool": b}
//   Unit       <->  "unit"
//   Pair(a,b)  <->  {"pair": [a, b]}
impl Serialize for Val {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Val::Int(n) => {
                let mut m = serializer.serialize_map(Some(1))?;
                m.serialize_entry("int", n)?;
                m.end()
            }
            Val::Bool(b) => {
                let mut m = serializer.serialize_map(Some(1))?;
                m.serialize_entry("bool", b)?;
                m.end()
            }
            Val::Unit => serializer.serialize_str("unit"),
            Val::Pair(a, b) => {
                let mut m = serializer.serialize_map(Some(1))?;
                m.serialize_entry("pair", &[a.as_ref(), b.as_ref()])?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Val {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValVisitor;

        impl<'de> Visitor<'de> for ValVisitor {
            type Value = Val;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"unit\" or a map with key int, bool, or pair")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Val, E> {
                if s == "unit" {
                    Ok(Val::Unit)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(s), &self))
                }
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Val, A::Error> {
                let key: String = map
                    .next_key()?
                    .ok_or_else(|| de::Error::custom("empty value object"))?;
                let val = match key.as_str() {
                    "int" => Val::Int(map.next_value()?),
                    "bool" => Val::Bool(map.next_value()?),
                    "pair" => {
                        let [a, b]: [Val; 2] = map.next_value()?;
                        Val::pair(a, b)
                    }
                    other => {
                        return Err(de::Error::unknown_field(other, &["int", "bool", "pair"]))
                    }
                };
                if map.next_key::<String>()?.is_some() {
                    return Err(de::Error::custom("value object with more than one key"));
                }
                Ok(val)
            }
        }

        deserializer.deserialize_any(ValVisitor)
    }
}

/// Process identifier: an index below the configured process count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProcessId(pub usize);

impl fmt::Display for ProcessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Iterator over the process set `{p0, ..., p(count-1)}`.
pub fn processes(count: usize) -> impl Iterator<Item = ProcessId> + Clone {
    (0..count).map(ProcessId)
}

//! Symbolic cardinal arithmetic.
//!
//! Cardinals appear in two roles: as the size parameter θ of neighbourhood
//! property queries, and as the compact covering number of a base space.
//! Only the fragment actually needed is modelled: finite cardinals, the
//! alephs, and the cardinality of the continuum. The continuum is kept as
//! its own symbol instead of being identified with ℵ₁; comparisons whose
//! answer would depend on the continuum hypothesis come back [`Unknown`].
//!
//! [`Unknown`]: CardinalOrder::Unknown

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A symbolic cardinal number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CardinalRepr", try_from = "CardinalRepr")]
pub enum Cardinal {
    /// A finite cardinal `n`.
    Finite(u64),
    /// The k-th aleph; `Aleph(0)` is ℵ₀.
    Aleph(u32),
    /// The cardinality of the continuum, 2^ℵ₀.
    Continuum,
}

/// Outcome of comparing two cardinals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CardinalOrder {
    Less,
    Equal,
    Greater,
    /// Undecided without extra set-theoretic axioms (continuum vs ℵ_k, k ≥ 1).
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalError {
    #[error("cardinals {0} and {1} are not comparable without CH")]
    Incomparable(Cardinal, Cardinal),
}

impl Cardinal {
    pub const ALEPH_0: Cardinal = Cardinal::Aleph(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    /// True when the cardinal is at most ℵ₀ (fits a countable index set).
    pub fn is_countable(self) -> bool {
        matches!(self, Cardinal::Finite(_) | Cardinal::Aleph(0))
    }
}

/// Three-valued comparison, total on finite/aleph pairs.
///
/// The only undecided pairs are `Continuum` against `Aleph(k)` for k ≥ 1.
pub fn compare(a: Cardinal, b: Cardinal) -> CardinalOrder {
    use Cardinal::*;
    use CardinalOrder::*;
    match (a, b) {
        (Finite(x), Finite(y)) => from_ord(x.cmp(&y)),
        (Finite(_), Aleph(_)) | (Finite(_), Continuum) => Less,
        (Aleph(_), Finite(_)) | (Continuum, Finite(_)) => Greater,
        (Aleph(j), Aleph(k)) => from_ord(j.cmp(&k)),
        (Continuum, Continuum) => Equal,
        (Aleph(0), Continuum) => Less,
        (Continuum, Aleph(0)) => Greater,
        (Aleph(_), Continuum) | (Continuum, Aleph(_)) => Unknown,
    }
}

fn from_ord(o: std::cmp::Ordering) -> CardinalOrder {
    match o {
        std::cmp::Ordering::Less => CardinalOrder::Less,
        std::cmp::Ordering::Equal => CardinalOrder::Equal,
        std::cmp::Ordering::Greater => CardinalOrder::Greater,
    }
}

/// The larger of the two cardinals under [`compare`].
///
/// Errors when the comparison is undecided.
pub fn max(a: Cardinal, b: Cardinal) -> Result<Cardinal, CardinalError> {
    match compare(a, b) {
        CardinalOrder::Less => Ok(b),
        CardinalOrder::Equal | CardinalOrder::Greater => Ok(a),
        CardinalOrder::Unknown => Err(CardinalError::Incomparable(a, b)),
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(k) => write!(f, "ℵ_{k}"),
            Cardinal::Continuum => write!(f, "continuum"),
        }
    }
}

/// Wire form: `{"finite": n}` | `{"aleph": k}` | `"continuum"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CardinalRepr {
    Finite { finite: u64 },
    Aleph { aleph: u32 },
    Name(String),
}

impl From<Cardinal> for CardinalRepr {
    fn from(c: Cardinal) -> Self {
        match c {
            Cardinal::Finite(n) => CardinalRepr::Finite { finite: n },
            Cardinal::Aleph(k) => CardinalRepr::Aleph { aleph: k },
            Cardinal::Continuum => CardinalRepr::Name("continuum".into()),
        }
    }
}

impl TryFrom<CardinalRepr> for Cardinal {
    type Error = String;

    fn try_from(r: CardinalRepr) -> Result<Self, Self::Error> {
        match r {
            CardinalRepr::Finite { finite } => Ok(Cardinal::Finite(finite)),
            CardinalRepr::Aleph { aleph } => Ok(Cardinal::Aleph(aleph)),
            CardinalRepr::Name(s) if s == "continuum" => Ok(Cardinal::Continuum),
            CardinalRepr::Name(s) => Err(format!("unknown cardinal name {s:?}")),
        }
    }
}

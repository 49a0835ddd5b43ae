//! Compact covering numbers of base spaces.
//!
//! The covering number θ(M) of a non-compact, paracompact, locally compact
//! space is the least cardinality of a cover of M by compact sets. It is
//! computed here from declared data: either the cardinality of a locally
//! finite relatively compact cover, or the number of σ-compact pieces.

use crate::cardinal::{self, Cardinal, CardinalError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BaseSpaceKind {
    Manifold,
    LocallyCompactParacompact,
}

/// Declared covering data of a base space M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BaseSpaceDesc {
    pub kind: BaseSpaceKind,
    pub compact: bool,
    /// Number of connected (equivalently, σ-compact) pieces.
    pub components: Cardinal,
    /// Cardinality |J| of a declared locally finite cover by relatively
    /// compact, open, non-empty sets, when one is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_size: Option<Cardinal>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoveringError {
    #[error("compact base spaces are outside the covering-number setting")]
    CompactSpace,
    #[error(transparent)]
    Incomparable(#[from] CardinalError),
    #[error("inconsistent description: {0}")]
    InconsistentDescription(String),
}

/// Least cardinality of a compact cover of M.
///
/// A declared cover size wins; otherwise θ(M) = max(components, ℵ₀). A
/// non-compact space never has a finite compact cover, so a declared finite
/// cover size is rejected, and a declared size must agree with the
/// component count when both are present.
pub fn theta(m: &BaseSpaceDesc) -> Result<Cardinal, CoveringError> {
    if m.compact {
        return Err(CoveringError::CompactSpace);
    }
    let from_components = cardinal::max(m.components, Cardinal::ALEPH_0)?;
    match m.cover_size {
        None => Ok(from_components),
        Some(size) => {
            if size.is_finite() {
                return Err(CoveringError::InconsistentDescription(format!(
                    "non-compact space cannot have a finite compact cover (|J| = {size})"
                )));
            }
            match cardinal::compare(size, from_components) {
                cardinal::CardinalOrder::Equal => Ok(size),
                cardinal::CardinalOrder::Unknown => Err(CardinalError::Incomparable(
                    size,
                    from_components,
                )
                .into()),
                _ => Err(CoveringError::InconsistentDescription(format!(
                    "declared cover size {size} disagrees with max(components, ℵ₀) = {from_components}"
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifold(components: Cardinal) -> BaseSpaceDesc {
        BaseSpaceDesc {
            kind: BaseSpaceKind::Manifold,
            compact: false,
            components,
            cover_size: None,
        }
    }

    #[test]
    fn finitely_many_components_give_aleph_zero() {
        assert_eq!(theta(&manifold(Cardinal::Finite(5))), Ok(Cardinal::Aleph(0)));
    }

    #[test]
    fn uncountably_many_components_dominate() {
        assert_eq!(theta(&manifold(Cardinal::Aleph(1))), Ok(Cardinal::Aleph(1)));
    }

    #[test]
    fn declared_cover_size_wins_when_consistent() {
        let mut m = manifold(Cardinal::Finite(1));
        m.cover_size = Some(Cardinal::Aleph(0));
        assert_eq!(theta(&m), Ok(Cardinal::Aleph(0)));
    }

    #[test]
    fn compact_space_rejected() {
        let mut m = manifold(Cardinal::Finite(1));
        m.compact = true;
        assert_eq!(theta(&m), Err(CoveringError::CompactSpace));
    }

    #[test]
    fn finite_cover_size_inconsistent() {
        let mut m = manifold(Cardinal::Finite(1));
        m.cover_size = Some(Cardinal::Finite(3));
        assert!(matches!(
            theta(&m),
            Err(CoveringError::InconsistentDescription(_))
        ));
    }

    #[test]
    fn mismatched_cover_size_reported() {
        let mut m = manifold(Cardinal::Aleph(2));
        m.cover_size = Some(Cardinal::Aleph(0));
        assert!(matches!(
            theta(&m),
            Err(CoveringError::InconsistentDescription(_))
        ));
    }

    #[test]
    fn undecidable_consistency_propagates() {
        let mut m = manifold(Cardinal::Aleph(1));
        m.cover_size = Some(Cardinal::Continuum);
        assert!(matches!(theta(&m), Err(CoveringError::Incomparable(_))));
    }

    #[test]
    fn always_at_least_aleph_zero() {
        for components in [
            Cardinal::Finite(0),
            Cardinal::Finite(17),
            Cardinal::Aleph(0),
            Cardinal::Aleph(3),
            Cardinal::Continuum,
        ] {
            let t = theta(&manifold(components)).unwrap();
            assert_ne!(
                cardinal::compare(t, Cardinal::ALEPH_0),
                cardinal::CardinalOrder::Less
            );
        }
    }
}

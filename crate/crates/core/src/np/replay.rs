//! Mechanical re-checking of derivation trees.
//!
//! [`replay`] walks a Holds/Fails derivation and validates each node: the
//! rule id must exist, the premises must have the shape the rule demands,
//! and the conclusion must be the one the rule yields from those premises.
//! Condition nodes are re-evaluated from their data.

use super::derivation::{ConditionKind, Derivation, Judgment, MapRef, rules};
use crate::cardinal::{self, Cardinal, CardinalOrder};
use crate::seminorm::{DirectSumBlocks, SpacePresentation};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("replay failed at rule {rule}: {reason}")]
pub struct ReplayError {
    pub rule: String,
    pub reason: String,
}

fn fail(node: &Derivation, reason: impl Into<String>) -> Result<(), ReplayError> {
    Err(ReplayError { rule: node.rule.clone(), reason: reason.into() })
}

/// Validates the whole tree, leaves first.
pub fn replay(node: &Derivation) -> Result<(), ReplayError> {
    for p in &node.premises {
        replay(p)?;
    }
    validate_node(node)
}

fn leq(a: Cardinal, b: Cardinal) -> bool {
    matches!(cardinal::compare(a, b), CardinalOrder::Less | CardinalOrder::Equal)
}

fn as_np(j: &Judgment) -> Option<(&SpacePresentation, Cardinal, bool)> {
    match j {
        Judgment::Np { space, theta, holds } => Some((space, *theta, *holds)),
        _ => None,
    }
}

fn single_flag_premise(node: &Derivation) -> Result<(), ReplayError> {
    match node.premises.as_slice() {
        [p] if matches!(p.judgment, Judgment::InputFlag { .. }) => Ok(()),
        _ => fail(node, "expected exactly one input-flag premise"),
    }
}

fn single_external_premise(node: &Derivation) -> Result<(), ReplayError> {
    match node.premises.as_slice() {
        [p] if matches!(p.judgment, Judgment::External { .. }) => Ok(()),
        _ => fail(node, "expected exactly one external-construction premise"),
    }
}

/// Blocks a container exposes as canonical topological subspaces.
fn member_blocks(space: &SpacePresentation) -> Option<Vec<&SpacePresentation>> {
    match space {
        SpacePresentation::Product { blocks } => Some(blocks.iter().collect()),
        SpacePresentation::DirectSum { blocks, .. } => match blocks {
            DirectSumBlocks::Uniform { block } => Some(vec![block.as_ref()]),
            DirectSumBlocks::Listed { blocks } => Some(blocks.iter().collect()),
        },
        _ => None,
    }
}

fn check_blockwise_true(
    node: &Derivation,
    blocks: &[&SpacePresentation],
    theta: Cardinal,
) -> Result<(), ReplayError> {
    if node.premises.len() != blocks.len() {
        return fail(
            node,
            format!("{} premises for {} blocks", node.premises.len(), blocks.len()),
        );
    }
    for (premise, block) in node.premises.iter().zip(blocks) {
        match as_np(&premise.judgment) {
            Some((space, t, true)) if space == *block && t == theta => {}
            _ => return fail(node, "premise does not certify the matching block"),
        }
    }
    Ok(())
}

fn validate_node(node: &Derivation) -> Result<(), ReplayError> {
    match node.rule.as_str() {
        rules::INPUT_FLAG => match (&node.judgment, node.premises.is_empty()) {
            (Judgment::InputFlag { .. }, true) => Ok(()),
            _ => fail(node, "input flags are leaves"),
        },
        rules::EXTERNAL => match (&node.judgment, node.premises.is_empty()) {
            (Judgment::External { .. }, true) => Ok(()),
            _ => fail(node, "external constructions are leaves"),
        },
        rules::NO_APPLICABLE_RULE => {
            fail(node, "open statements must not appear inside a Holds/Fails derivation")
        }

        rules::NORMABLE_NP => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            if !holds || theta.is_finite() {
                return fail(node, "concludes the θ-np of a normable space, θ infinite");
            }
            if !matches!(
                space,
                SpacePresentation::Normed | SpacePresentation::FrechetSeq { normable: true }
            ) {
                return fail(node, "space is not normable by its presentation");
            }
            single_flag_premise(node)
        }
        rules::METRIZABLE_CNP_IFF_NORMABLE => {
            match as_np(&node.judgment) {
                Some((SpacePresentation::FrechetSeq { normable: false }, t, false))
                    if t == Cardinal::ALEPH_0 => {}
                _ => return fail(node, "concludes cnp failure of a non-normable metrizable space"),
            }
            single_flag_premise(node)
        }
        rules::NP_MONOTONE => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            match node.premises.as_slice() {
                [p] => match as_np(&p.judgment) {
                    Some((s, t_hi, true)) if s == space && holds && leq(theta, t_hi) => Ok(()),
                    _ => fail(node, "premise must hold at some θ' ≥ θ on the same space"),
                },
                _ => fail(node, "expected one premise"),
            }
        }
        rules::NP_MONOTONE_CONTRA => {
            let (space, theta_hi, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            match node.premises.as_slice() {
                [p] => match as_np(&p.judgment) {
                    Some((s, t_lo, false)) if s == space && !holds && leq(t_lo, theta_hi) => Ok(()),
                    _ => fail(node, "premise must fail at some θ ≤ θ' on the same space"),
                },
                _ => fail(node, "expected one premise"),
            }
        }
        rules::COUNTABLE_SUM_CNP => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            if !holds || theta != Cardinal::ALEPH_0 {
                return fail(node, "concludes the cnp of a countable sum");
            }
            match space {
                SpacePresentation::DirectSum { index, blocks } if index.is_countable() => {
                    let members = match blocks {
                        DirectSumBlocks::Uniform { block } => vec![block.as_ref()],
                        DirectSumBlocks::Listed { blocks } => blocks.iter().collect(),
                    };
                    check_blockwise_true(node, &members, Cardinal::ALEPH_0)
                }
                _ => fail(node, "space is not a countable direct sum"),
            }
        }
        rules::FINITE_PRODUCT_NP => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            if !holds {
                return fail(node, "concludes a positive product verdict");
            }
            let members = match space {
                SpacePresentation::Product { blocks } => blocks.iter().collect::<Vec<_>>(),
                SpacePresentation::DirectSum { index: Cardinal::Finite(_), blocks } => {
                    match blocks {
                        DirectSumBlocks::Uniform { block } => vec![block.as_ref()],
                        DirectSumBlocks::Listed { blocks } => blocks.iter().collect(),
                    }
                }
                _ => return fail(node, "space is not a finite product"),
            };
            check_blockwise_true(node, &members, theta)
        }
        rules::SUBSPACE_NP | rules::QUOTIENT_NP => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            if !holds {
                return fail(node, "concludes a positive verdict");
            }
            let ambient = match (node.rule.as_str(), space) {
                (rules::SUBSPACE_NP, SpacePresentation::Subspace { of }) => of.as_ref(),
                (rules::QUOTIENT_NP, SpacePresentation::Quotient { of }) => of.as_ref(),
                _ => return fail(node, "space does not match the rule"),
            };
            match node.premises.as_slice() {
                [p] => match as_np(&p.judgment) {
                    Some((s, t, true)) if s == ambient && t == theta => Ok(()),
                    _ => fail(node, "premise must certify the ambient space at the same θ"),
                },
                _ => fail(node, "expected one premise"),
            }
        }
        rules::EMBEDDED_BLOCK_FAILS => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            if holds {
                return fail(node, "concludes a failure");
            }
            let members = member_blocks(space)
                .ok_or_else(|| err(node, "space has no canonical subspace blocks"))?;
            match node.premises.as_slice() {
                [p] => match as_np(&p.judgment) {
                    Some((s, t, false)) if t == theta && members.contains(&s) => Ok(()),
                    _ => fail(node, "premise must refute a member block at the same θ"),
                },
                _ => fail(node, "expected one premise"),
            }
        }
        rules::K_OMEGA_CNP => {
            match as_np(&node.judgment) {
                Some((SpacePresentation::KOmega, t, true)) if t == Cardinal::ALEPH_0 => {}
                _ => return fail(node, "concludes the cnp of a k_ω-space"),
            }
            single_flag_premise(node)
        }
        rules::FIN_SUPP_CNP => match as_np(&node.judgment) {
            Some((SpacePresentation::FinSupp, t, true))
                if t == Cardinal::ALEPH_0 && node.premises.is_empty() =>
            {
                Ok(())
            }
            _ => fail(node, "axiom concludes the cnp of finitely supported sequences"),
        },
        rules::DF_CNP => {
            match as_np(&node.judgment) {
                Some((SpacePresentation::Df | SpacePresentation::Gdf, t, true))
                    if t == Cardinal::ALEPH_0 => {}
                _ => return fail(node, "concludes the cnp of a DF/gDF space"),
            }
            single_flag_premise(node)
        }
        rules::COUNTABLE_LIMIT_CNP => {
            let (space, theta, holds) =
                as_np(&node.judgment).ok_or_else(|| err(node, "needs an np conclusion"))?;
            if !holds || theta != Cardinal::ALEPH_0 {
                return fail(node, "concludes a cnp verdict");
            }
            match space {
                SpacePresentation::CountableDirectLimit { blocks } => {
                    let members: Vec<&SpacePresentation> = blocks.iter().collect();
                    check_blockwise_true(node, &members, Cardinal::ALEPH_0)
                }
                _ => fail(node, "space is not a countable direct limit"),
            }
        }
        rules::THETA_SUP_FAMILY_NP => {
            match as_np(&node.judgment) {
                Some((SpacePresentation::EllInftyTheta { theta: t0 }, t, true))
                    if *t0 == t && t0.is_infinite() => {}
                _ => return fail(node, "concludes the θ-np of ℓ∞(X) at its own parameter"),
            }
            single_external_premise(node)
        }
        rules::THETA_SUP_FAMILY_UPPER => {
            match as_np(&node.judgment) {
                Some((SpacePresentation::EllInftyTheta { theta: t0 }, t, false))
                    if cardinal::compare(t, *t0) == CardinalOrder::Greater => {}
                _ => return fail(node, "concludes failure strictly above the parameter"),
            }
            single_external_premise(node)
        }

        rules::NORMED_CONTINUOUS_NORM => match &node.judgment {
            Judgment::ContinuousNorm {
                space: SpacePresentation::Normed | SpacePresentation::FrechetSeq { normable: true },
                holds: true,
            } => single_flag_premise(node),
            _ => fail(node, "concludes a continuous norm on a normable space"),
        },
        rules::FINEST_TOPOLOGY_NORM => match &node.judgment {
            Judgment::ContinuousNorm { space: SpacePresentation::FinSupp, holds: true } => {
                single_external_premise(node)
            }
            _ => fail(node, "concludes a continuous norm on finitely supported sequences"),
        },
        rules::COUNTABLE_SUPPORT_KILLS_NORM => match &node.judgment {
            Judgment::ContinuousNorm {
                space: SpacePresentation::RFinSuppUncountable { set_size },
                holds: false,
            } if !set_size.is_countable() => single_external_premise(node),
            _ => fail(node, "concludes a missing continuous norm over an uncountable set"),
        },

        rules::COMPACT_COVERING_COUNT => match &node.judgment {
            Judgment::ThetaOf { theta, .. } if theta.is_infinite() => single_flag_premise(node),
            _ => fail(node, "covering numbers of non-compact spaces are infinite"),
        },
        rules::TEST_MULT_HYPOCONTINUOUS => match &node.judgment {
            Judgment::Hypocontinuity { map: MapRef::TestMultiplication, holds: true } => {
                single_flag_premise(node)
            }
            _ => fail(node, "concludes hypocontinuity of the test multiplication"),
        },
        rules::TEST_MULT_CONTINUITY => {
            let holds = match &node.judgment {
                Judgment::Continuity { map: MapRef::TestMultiplication, holds } => *holds,
                _ => return fail(node, "concludes continuity of the test multiplication"),
            };
            match node.premises.as_slice() {
                [theta_node, np_node] => {
                    let theta = match &theta_node.judgment {
                        Judgment::ThetaOf { theta, .. } => *theta,
                        _ => return fail(node, "first premise must compute θ(M)"),
                    };
                    match as_np(&np_node.judgment) {
                        Some((_, t, h)) if t == theta && h == holds => Ok(()),
                        _ => fail(node, "second premise must decide the θ(M)-np accordingly"),
                    }
                }
                _ => fail(node, "expected θ(M) and an np verdict as premises"),
            }
        }

        rules::SIGMA_COMPACTNESS | rules::COUNTABILITY | rules::DEGREE_COMPATIBILITY => {
            match &node.judgment {
                Judgment::Condition { cond, holds } if *holds == cond.truth() => {
                    let matches_rule = matches!(
                        (node.rule.as_str(), cond),
                        (rules::SIGMA_COMPACTNESS, ConditionKind::SigmaCompact(_))
                            | (rules::COUNTABILITY, ConditionKind::Countable(_))
                            | (rules::DEGREE_COMPATIBILITY, ConditionKind::DegreesCompatible { .. })
                    );
                    if matches_rule {
                        single_flag_premise(node)
                    } else {
                        fail(node, "condition kind does not match the rule")
                    }
                }
                Judgment::Condition { .. } => {
                    fail(node, "condition truth value disagrees with its data")
                }
                _ => fail(node, "needs a condition conclusion"),
            }
        }
        rules::FACTOR_PE_INPUT => match &node.judgment {
            Judgment::ProductEstimates { map: MapRef::Factor, .. } => single_flag_premise(node),
            _ => fail(node, "declares product estimates of the factor map"),
        },
        rules::FINITE_GROUP_CONVOLUTION_CONTINUOUS => match &node.judgment {
            Judgment::Continuity { map: MapRef::Convolution(s), holds: true }
                if matches!(s.group, super::GroupClass::Finite) =>
            {
                single_flag_premise(node)
            }
            _ => fail(node, "concludes continuity over a finite group"),
        },
        rules::COMPACT_GROUP_CONVOLUTION_CONTINUOUS => match &node.judgment {
            Judgment::Continuity { map: MapRef::Convolution(s), holds: true }
                if matches!(s.group, super::GroupClass::InfiniteCompact) =>
            {
                single_flag_premise(node)
            }
            _ => fail(node, "concludes continuity over an infinite compact group"),
        },
        rules::DISCRETE_CONVOLUTION_CONTINUITY => validate_conjunction(
            node,
            |j| matches!(j, Judgment::Continuity { map: MapRef::Convolution(s), .. }
                if matches!(s.group, super::GroupClass::InfiniteDiscrete { .. })),
            &[premise_is_countability, premise_is_factor_pe],
        ),
        rules::NONCOMPACT_CONVOLUTION_CONTINUITY => validate_conjunction(
            node,
            |j| matches!(j, Judgment::Continuity { map: MapRef::Convolution(s), .. }
                if matches!(s.group, super::GroupClass::NonCompactNonDiscrete { .. })),
            &[premise_is_sigma, premise_is_degrees, premise_is_factor_pe],
        ),
        rules::COMPACT_GROUP_PE_CHARACTERIZATION => validate_conjunction(
            node,
            |j| matches!(j, Judgment::ProductEstimates { map: MapRef::Convolution(s), .. }
                if matches!(s.group, super::GroupClass::InfiniteCompact)),
            &[premise_is_sigma, premise_is_degrees, premise_is_factor_pe],
        ),
        rules::PE_IFF_CONTINUITY => {
            let (setting, holds) = match &node.judgment {
                Judgment::ProductEstimates { map: MapRef::Convolution(s), holds } => (s, *holds),
                _ => return fail(node, "concludes product estimates of a convolution map"),
            };
            match node.premises.as_slice() {
                [p] => match &p.judgment {
                    Judgment::Continuity { map: MapRef::Convolution(s), holds: h }
                        if s == setting && *h == holds =>
                    {
                        Ok(())
                    }
                    _ => fail(node, "premise must decide continuity of the same map"),
                },
                _ => fail(node, "expected one premise"),
            }
        }
        rules::FINITE_GROUP_PE_TRANSFER => {
            let holds = match &node.judgment {
                Judgment::ProductEstimates { map: MapRef::Convolution(s), holds }
                    if matches!(s.group, super::GroupClass::Finite) =>
                {
                    *holds
                }
                _ => return fail(node, "concludes product estimates over a finite group"),
            };
            match node.premises.as_slice() {
                [p] => match &p.judgment {
                    Judgment::ProductEstimates { map: MapRef::Factor, holds: h } if *h == holds => {
                        Ok(())
                    }
                    _ => fail(node, "premise must declare the factor map estimates"),
                },
                _ => fail(node, "expected one premise"),
            }
        }

        other => fail(node, format!("unknown rule id {other:?}")),
    }
}

fn err(node: &Derivation, reason: &str) -> ReplayError {
    ReplayError { rule: node.rule.clone(), reason: reason.into() }
}

fn premise_is_sigma(j: &Judgment) -> bool {
    matches!(j, Judgment::Condition { cond: ConditionKind::SigmaCompact(_), .. })
}

fn premise_is_countability(j: &Judgment) -> bool {
    matches!(j, Judgment::Condition { cond: ConditionKind::Countable(_), .. })
}

fn premise_is_degrees(j: &Judgment) -> bool {
    matches!(j, Judgment::Condition { cond: ConditionKind::DegreesCompatible { .. }, .. })
}

fn premise_is_factor_pe(j: &Judgment) -> bool {
    matches!(j, Judgment::ProductEstimates { map: MapRef::Factor, .. })
}

/// For a conclusion `h ⇔ (c₁ ∧ … ∧ cₙ)`: a Holds node must present every
/// conjunct, all true; a Fails node presents only failing conjuncts, at
/// least one.
fn validate_conjunction(
    node: &Derivation,
    conclusion_ok: impl Fn(&Judgment) -> bool,
    required: &[fn(&Judgment) -> bool],
) -> Result<(), ReplayError> {
    if !conclusion_ok(&node.judgment) {
        return fail(node, "conclusion does not match the rule");
    }
    let holds = node
        .judgment
        .holds()
        .ok_or_else(|| err(node, "conclusion carries no truth value"))?;
    let recognized = |j: &Judgment| required.iter().any(|pred| pred(j));
    if node.premises.iter().any(|p| !recognized(&p.judgment)) {
        return fail(node, "unexpected premise kind");
    }
    if holds {
        if node.premises.len() != required.len() {
            return fail(node, "a positive conclusion must present every conjunct");
        }
        for (pred, premise) in required.iter().zip(&node.premises) {
            if !pred(&premise.judgment) || premise.judgment.holds() != Some(true) {
                return fail(node, "all conjuncts must hold, in rule order");
            }
        }
        Ok(())
    } else {
        if node.premises.is_empty() {
            return fail(node, "a failure needs at least one failing conjunct");
        }
        if node.premises.iter().any(|p| p.judgment.holds() != Some(false)) {
            return fail(node, "failure premises must all be failing conjuncts");
        }
        Ok(())
    }
}

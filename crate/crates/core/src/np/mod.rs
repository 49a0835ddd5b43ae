//! Rule engine for neighbourhood-property verdicts and the two decision
//! procedures built on top of it: continuity of scalar multiplication on
//! test-function spaces, and the convolution classification table.
//!
//! The engine is sound and deliberately incomplete: it applies a fixed
//! list of permanence rules plus monotonicity in θ and answers `Unknown`
//! when no chain applies. Rule application order is fixed, so derivation
//! trees are reproducible.

mod derivation;
pub mod replay;

pub use derivation::{
    rules, ConditionKind, ConvolutionSetting, Degree, Derivation, GroupClass, Judgment, MapRef,
    Status, Verdict,
};

use crate::cardinal::{self, Cardinal, CardinalOrder};
use crate::covering::{self, BaseSpaceDesc, CoveringError};
use crate::seminorm::{DirectSumBlocks, SpacePresentation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A neighbourhood-property query: the cnp, or the θ-np for an infinite θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PropertyQuery {
    Cnp,
    ThetaNp { theta: Cardinal },
}

impl PropertyQuery {
    /// The cardinal actually queried (cnp is the ℵ₀ case).
    pub fn theta(self) -> Cardinal {
        match self {
            PropertyQuery::Cnp => Cardinal::ALEPH_0,
            PropertyQuery::ThetaNp { theta } => theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NpError {
    #[error("θ-np queries need an infinite cardinal, got {0}")]
    FiniteTheta(Cardinal),
    #[error("the base space is compact; the covering-number setting needs a non-compact space")]
    CompactBase,
    #[error("degrees must satisfy t ≤ r+s, got r={r}, s={s}, t={t}")]
    DegreeViolation { r: Degree, s: Degree, t: Degree },
    #[error(transparent)]
    Covering(#[from] CoveringError),
}

/// Derives a verdict for `query` on `space`.
pub fn derive(space: &SpacePresentation, query: PropertyQuery) -> Result<Verdict, NpError> {
    let theta = query.theta();
    if theta.is_finite() {
        return Err(NpError::FiniteTheta(theta));
    }
    Ok(derive_np(space, theta))
}

fn np(space: &SpacePresentation, theta: Cardinal, holds: bool) -> Judgment {
    Judgment::Np { space: space.clone(), theta, holds }
}

fn derive_np(space: &SpacePresentation, theta: Cardinal) -> Verdict {
    let is_cnp = theta == Cardinal::ALEPH_0;
    match space {
        SpacePresentation::Normed => Verdict::new(
            Status::Holds,
            Derivation::new(
                rules::NORMABLE_NP,
                np(space, theta, true),
                vec![Derivation::input_flag("presented as a normed space")],
            ),
        ),
        SpacePresentation::FrechetSeq { normable: true } => Verdict::new(
            Status::Holds,
            Derivation::new(
                rules::NORMABLE_NP,
                np(space, theta, true),
                vec![Derivation::input_flag("declared normable")],
            ),
        ),
        SpacePresentation::FrechetSeq { normable: false } => {
            let cnp_fails = Derivation::new(
                rules::METRIZABLE_CNP_IFF_NORMABLE,
                np(space, Cardinal::ALEPH_0, false),
                vec![Derivation::input_flag("metrizable and declared non-normable")],
            );
            let derivation = if is_cnp {
                cnp_fails
            } else {
                Derivation::new(
                    rules::NP_MONOTONE_CONTRA,
                    np(space, theta, false),
                    vec![cnp_fails],
                )
            };
            Verdict::new(Status::Fails, derivation)
        }
        SpacePresentation::DirectSum { index, blocks } => {
            derive_sum(space, theta, *index, blocks)
        }
        SpacePresentation::Product { blocks } => {
            derive_blockwise(space, theta, blocks, rules::FINITE_PRODUCT_NP, true)
        }
        SpacePresentation::Subspace { of } => {
            let inner = derive_np(of, theta);
            match inner.status {
                Status::Holds => Verdict::new(
                    Status::Holds,
                    Derivation::new(
                        rules::SUBSPACE_NP,
                        np(space, theta, true),
                        vec![inner.derivation],
                    ),
                ),
                _ => Verdict::unknown(format!(
                    "no rule settles the {theta}-np for a subspace of an ambient space without it"
                )),
            }
        }
        SpacePresentation::Quotient { of } => {
            let inner = derive_np(of, theta);
            match inner.status {
                Status::Holds => Verdict::new(
                    Status::Holds,
                    Derivation::new(
                        rules::QUOTIENT_NP,
                        np(space, theta, true),
                        vec![inner.derivation],
                    ),
                ),
                _ => Verdict::unknown(format!(
                    "no rule settles the {theta}-np for a quotient of an ambient space without it"
                )),
            }
        }
        SpacePresentation::CountableDirectLimit { blocks } => {
            if !is_cnp {
                return Verdict::unknown(format!(
                    "no rule covers the {theta}-np of a countable direct limit"
                ));
            }
            let inner: Vec<Verdict> =
                blocks.iter().map(|b| derive_np(b, Cardinal::ALEPH_0)).collect();
            if inner.iter().all(|v| v.status == Status::Holds) {
                Verdict::new(
                    Status::Holds,
                    Derivation::new(
                        rules::COUNTABLE_LIMIT_CNP,
                        np(space, theta, true),
                        inner.into_iter().map(|v| v.derivation).collect(),
                    ),
                )
            } else {
                Verdict::unknown("a direct-limit stage without a cnp certificate blocks the chain")
            }
        }
        SpacePresentation::FinSupp => {
            if is_cnp {
                Verdict::new(
                    Status::Holds,
                    Derivation::leaf(rules::FIN_SUPP_CNP, np(space, theta, true)),
                )
            } else {
                Verdict::unknown(format!(
                    "no rule covers the {theta}-np of finitely supported sequences"
                ))
            }
        }
        SpacePresentation::KOmega => {
            if is_cnp {
                Verdict::new(
                    Status::Holds,
                    Derivation::new(
                        rules::K_OMEGA_CNP,
                        np(space, theta, true),
                        vec![Derivation::input_flag("flagged as a k_ω-space")],
                    ),
                )
            } else {
                Verdict::unknown(format!("no rule covers the {theta}-np of a k_ω-space"))
            }
        }
        SpacePresentation::Df | SpacePresentation::Gdf => {
            if is_cnp {
                let flag = if matches!(space, SpacePresentation::Df) {
                    "flagged as a DF-space"
                } else {
                    "flagged as a gDF-space"
                };
                Verdict::new(
                    Status::Holds,
                    Derivation::new(
                        rules::DF_CNP,
                        np(space, theta, true),
                        vec![Derivation::input_flag(flag)],
                    ),
                )
            } else {
                Verdict::unknown(format!("no rule covers the {theta}-np of a DF-space"))
            }
        }
        SpacePresentation::EllInftyTheta { theta: theta0 } => {
            if theta0.is_finite() {
                return Verdict::unknown(
                    "the bounded-function construction needs an infinite size parameter",
                );
            }
            let axiom = || {
                Derivation::external(format!(
                    "ℓ∞(X) with sup-seminorms over subsets of size ≤ {theta0} has the {theta0}-np and no stronger one"
                ))
            };
            match cardinal::compare(theta, *theta0) {
                CardinalOrder::Equal => Verdict::new(
                    Status::Holds,
                    Derivation::new(
                        rules::THETA_SUP_FAMILY_NP,
                        np(space, theta, true),
                        vec![axiom()],
                    ),
                ),
                CardinalOrder::Less => {
                    let at_theta0 = Derivation::new(
                        rules::THETA_SUP_FAMILY_NP,
                        np(space, *theta0, true),
                        vec![axiom()],
                    );
                    Verdict::new(
                        Status::Holds,
                        Derivation::new(rules::NP_MONOTONE, np(space, theta, true), vec![at_theta0]),
                    )
                }
                CardinalOrder::Greater => Verdict::new(
                    Status::Fails,
                    Derivation::new(
                        rules::THETA_SUP_FAMILY_UPPER,
                        np(space, theta, false),
                        vec![axiom()],
                    ),
                ),
                CardinalOrder::Unknown => Verdict::unknown(format!(
                    "comparing {theta} with {theta0} is undecided without CH"
                )),
            }
        }
        SpacePresentation::RFinSuppUncountable { .. } => Verdict::unknown(
            "no rule covers neighbourhood properties of the countably-restricted topology",
        ),
    }
}

fn sum_block_list(blocks: &DirectSumBlocks) -> Vec<&SpacePresentation> {
    match blocks {
        DirectSumBlocks::Uniform { block } => vec![block.as_ref()],
        DirectSumBlocks::Listed { blocks } => blocks.iter().collect(),
    }
}

fn derive_sum(
    space: &SpacePresentation,
    theta: Cardinal,
    index: Cardinal,
    blocks: &DirectSumBlocks,
) -> Verdict {
    let members = sum_block_list(blocks);
    if index.is_finite() {
        // A finite direct sum carries the product topology.
        return derive_blockwise_refs(space, theta, &members, rules::FINITE_PRODUCT_NP, true);
    }
    let is_cnp = theta == Cardinal::ALEPH_0;
    let countable = index.is_countable();

    // Each block embeds as a topological subspace of the sum, so a failing
    // block sinks the sum.
    let inner: Vec<Verdict> = members.iter().map(|b| derive_np(b, theta)).collect();
    if let Some(bad) = inner.iter().position(|v| v.status == Status::Fails) {
        return Verdict::new(
            Status::Fails,
            Derivation::new(
                rules::EMBEDDED_BLOCK_FAILS,
                np(space, theta, false),
                vec![inner[bad].derivation.clone()],
            ),
        );
    }
    if is_cnp && countable && inner.iter().all(|v| v.status == Status::Holds) {
        return Verdict::new(
            Status::Holds,
            Derivation::new(
                rules::COUNTABLE_SUM_CNP,
                np(space, theta, true),
                inner.into_iter().map(|v| v.derivation).collect(),
            ),
        );
    }
    if !countable {
        Verdict::unknown(format!(
            "no positive rule covers a direct sum over an index of size {index}"
        ))
    } else {
        Verdict::unknown(format!(
            "no rule chain settles the {theta}-np of the countable direct sum"
        ))
    }
}

fn derive_blockwise(
    space: &SpacePresentation,
    theta: Cardinal,
    blocks: &[SpacePresentation],
    positive_rule: &str,
    allow_fail: bool,
) -> Verdict {
    let refs: Vec<&SpacePresentation> = blocks.iter().collect();
    derive_blockwise_refs(space, theta, &refs, positive_rule, allow_fail)
}

fn derive_blockwise_refs(
    space: &SpacePresentation,
    theta: Cardinal,
    blocks: &[&SpacePresentation],
    positive_rule: &str,
    allow_fail: bool,
) -> Verdict {
    let inner: Vec<Verdict> = blocks.iter().map(|b| derive_np(b, theta)).collect();
    if allow_fail {
        if let Some(bad) = inner.iter().position(|v| v.status == Status::Fails) {
            return Verdict::new(
                Status::Fails,
                Derivation::new(
                    rules::EMBEDDED_BLOCK_FAILS,
                    np(space, theta, false),
                    vec![inner[bad].derivation.clone()],
                ),
            );
        }
    }
    if inner.iter().all(|v| v.status == Status::Holds) {
        return Verdict::new(
            Status::Holds,
            Derivation::new(
                positive_rule,
                np(space, theta, true),
                inner.into_iter().map(|v| v.derivation).collect(),
            ),
        );
    }
    Verdict::unknown(format!(
        "a factor of {} resists the rule set at θ = {theta}",
        space.describe()
    ))
}

/// Whether the presentation admits a continuous norm, where the rule set
/// can tell.
pub fn admits_continuous_norm(space: &SpacePresentation) -> Verdict {
    match space {
        SpacePresentation::Normed => Verdict::new(
            Status::Holds,
            Derivation::new(
                rules::NORMED_CONTINUOUS_NORM,
                Judgment::ContinuousNorm { space: space.clone(), holds: true },
                vec![Derivation::input_flag("presented as a normed space")],
            ),
        ),
        SpacePresentation::FrechetSeq { normable: true } => Verdict::new(
            Status::Holds,
            Derivation::new(
                rules::NORMED_CONTINUOUS_NORM,
                Judgment::ContinuousNorm { space: space.clone(), holds: true },
                vec![Derivation::input_flag("declared normable")],
            ),
        ),
        SpacePresentation::FinSupp => Verdict::new(
            Status::Holds,
            Derivation::new(
                rules::FINEST_TOPOLOGY_NORM,
                Judgment::ContinuousNorm { space: space.clone(), holds: true },
                vec![Derivation::external(
                    "every seminorm is continuous in the finest locally convex topology",
                )],
            ),
        ),
        SpacePresentation::RFinSuppUncountable { set_size } if !set_size.is_countable() => {
            Verdict::new(
                Status::Fails,
                Derivation::new(
                    rules::COUNTABLE_SUPPORT_KILLS_NORM,
                    Judgment::ContinuousNorm { space: space.clone(), holds: false },
                    vec![Derivation::external(
                        "every continuous seminorm factors through countably many coordinates and vanishes on the rest",
                    )],
                ),
            )
        }
        _ => Verdict::unknown(format!(
            "the rule set does not settle continuous norms on {}",
            space.describe()
        )),
    }
}

/// Verdicts on the scalar-multiplication map Ψ: C^r_c(M)×E → C^r_c(M,E).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiVerdicts {
    pub theta: Cardinal,
    pub continuous: Verdict,
    pub hypocontinuous: Verdict,
}

/// Ψ is always hypocontinuous in the covering-number setting, and
/// continuous exactly when E has the θ(M)-np.
pub fn psi_continuity(
    m: &BaseSpaceDesc,
    e: &SpacePresentation,
) -> Result<PsiVerdicts, NpError> {
    if m.compact {
        return Err(NpError::CompactBase);
    }
    let theta = covering::theta(m)?;
    let theta_node = Derivation::new(
        rules::COMPACT_COVERING_COUNT,
        Judgment::ThetaOf { desc: format!("{:?}, components = {}", m.kind, m.components), theta },
        vec![Derivation::input_flag(match m.cover_size {
            Some(size) => format!("declared locally finite relatively compact cover of size {size}"),
            None => format!("{} σ-compact pieces", m.components),
        })],
    );

    let np_verdict = derive_np(e, theta);
    let continuous = match np_verdict.status {
        Status::Unknown => Verdict::unknown(format!(
            "continuity of Ψ is equivalent to the {theta}-np of {}, which the rule set cannot settle",
            e.describe()
        )),
        status => Verdict::new(
            status,
            Derivation::new(
                rules::TEST_MULT_CONTINUITY,
                Judgment::Continuity { map: MapRef::TestMultiplication, holds: status.holds() },
                vec![theta_node, np_verdict.derivation],
            ),
        ),
    };

    let hypocontinuous = Verdict::new(
        Status::Holds,
        Derivation::new(
            rules::TEST_MULT_HYPOCONTINUOUS,
            Judgment::Hypocontinuity { map: MapRef::TestMultiplication, holds: true },
            vec![Derivation::input_flag(
                "base space non-compact, paracompact, locally compact",
            )],
        ),
    );

    Ok(PsiVerdicts { theta, continuous, hypocontinuous })
}

/// Verdicts on the convolution map for a given setting.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvolutionVerdicts {
    pub continuous: Verdict,
    pub product_estimates: Verdict,
}

fn condition_node(rule: &str, cond: ConditionKind, flag: String) -> Derivation {
    let holds = cond.truth();
    Derivation::new(
        rule,
        Judgment::Condition { cond, holds },
        vec![Derivation::input_flag(flag)],
    )
}

fn factor_pe_node(status: Status) -> Option<Derivation> {
    match status {
        Status::Unknown => None,
        s => Some(Derivation::new(
            rules::FACTOR_PE_INPUT,
            Judgment::ProductEstimates { map: MapRef::Factor, holds: s.holds() },
            vec![Derivation::input_flag(format!(
                "declared: factor map {} product estimates",
                if s.holds() { "admits" } else { "does not admit" }
            ))],
        )),
    }
}

/// Conjunction verdict from condition premises: failing premises alone
/// justify a failure; a full set of holding premises justifies success.
fn conjunction(
    rule: &str,
    judgment_true: Judgment,
    judgment_false: Judgment,
    premises: Vec<(Status, Option<Derivation>)>,
    unknown_note: &str,
) -> Verdict {
    let status = Status::and(premises.iter().map(|(s, _)| *s));
    match status {
        Status::Holds => Verdict::new(
            Status::Holds,
            Derivation::new(
                rule,
                judgment_true,
                premises.into_iter().filter_map(|(_, d)| d).collect(),
            ),
        ),
        Status::Fails => {
            let failing: Vec<Derivation> = premises
                .into_iter()
                .filter(|(s, _)| *s == Status::Fails)
                .filter_map(|(_, d)| d)
                .collect();
            Verdict::new(Status::Fails, Derivation::new(rule, judgment_false, failing))
        }
        Status::Unknown => Verdict::unknown(unknown_note),
    }
}

/// The convolution decision table.
///
/// `factor_pe` is the declared status of product estimates for the factor
/// map b; `Unknown` propagates into any verdict that depends on it.
pub fn classify_convolution(
    group: GroupClass,
    r: Degree,
    s: Degree,
    t: Degree,
    factor_pe: Status,
) -> Result<ConvolutionVerdicts, NpError> {
    if !t.leq(r.plus(s)) {
        return Err(NpError::DegreeViolation { r, s, t });
    }
    let setting = ConvolutionSetting { group, r, s, t };
    let conv = MapRef::Convolution(setting);
    let continuity = |holds| Judgment::Continuity { map: conv.clone(), holds };
    let pe = |holds| Judgment::ProductEstimates { map: conv.clone(), holds };
    let group_flag = format!("declared group class: {group}");

    let degrees_node = || {
        condition_node(
            rules::DEGREE_COMPATIBILITY,
            ConditionKind::DegreesCompatible { r, s, t },
            format!("declared degrees (r,s,t) = ({r},{s},{t})"),
        )
    };
    let degrees_status =
        Status::from_bool(ConditionKind::DegreesCompatible { r, s, t }.truth());

    match group {
        GroupClass::Finite => {
            let continuous = Verdict::new(
                Status::Holds,
                Derivation::new(
                    rules::FINITE_GROUP_CONVOLUTION_CONTINUOUS,
                    continuity(true),
                    vec![Derivation::input_flag(group_flag.clone())],
                ),
            );
            let product_estimates = match factor_pe_node(factor_pe) {
                None => Verdict::unknown(
                    "product estimates for the convolution match those of the factor map, which are undeclared",
                ),
                Some(node) => Verdict::new(
                    factor_pe,
                    Derivation::new(
                        rules::FINITE_GROUP_PE_TRANSFER,
                        pe(factor_pe.holds()),
                        vec![node],
                    ),
                ),
            };
            Ok(ConvolutionVerdicts { continuous, product_estimates })
        }
        GroupClass::InfiniteDiscrete { countable } => {
            let countable_node = condition_node(
                rules::COUNTABILITY,
                ConditionKind::Countable(group),
                group_flag.clone(),
            );
            let continuous = conjunction(
                rules::DISCRETE_CONVOLUTION_CONTINUITY,
                continuity(true),
                continuity(false),
                vec![
                    (Status::from_bool(countable), Some(countable_node)),
                    (factor_pe, factor_pe_node(factor_pe)),
                ],
                "continuity over a countable discrete group needs the undeclared factor estimates",
            );
            let product_estimates = match continuous.status {
                Status::Unknown => Verdict::unknown(
                    "product estimates coincide with continuity here, and continuity is undetermined",
                ),
                status => Verdict::new(
                    status,
                    Derivation::new(
                        rules::PE_IFF_CONTINUITY,
                        pe(status.holds()),
                        vec![continuous.derivation.clone()],
                    ),
                ),
            };
            Ok(ConvolutionVerdicts { continuous, product_estimates })
        }
        GroupClass::InfiniteCompact => {
            let continuous = Verdict::new(
                Status::Holds,
                Derivation::new(
                    rules::COMPACT_GROUP_CONVOLUTION_CONTINUOUS,
                    continuity(true),
                    vec![Derivation::input_flag(group_flag.clone())],
                ),
            );
            let sigma_node = condition_node(
                rules::SIGMA_COMPACTNESS,
                ConditionKind::SigmaCompact(group),
                group_flag,
            );
            let product_estimates = conjunction(
                rules::COMPACT_GROUP_PE_CHARACTERIZATION,
                pe(true),
                pe(false),
                vec![
                    (Status::Holds, Some(sigma_node)),
                    (degrees_status, Some(degrees_node())),
                    (factor_pe, factor_pe_node(factor_pe)),
                ],
                "product estimates depend on the undeclared factor estimates",
            );
            Ok(ConvolutionVerdicts { continuous, product_estimates })
        }
        GroupClass::NonCompactNonDiscrete { sigma_compact } => {
            let sigma_node = condition_node(
                rules::SIGMA_COMPACTNESS,
                ConditionKind::SigmaCompact(group),
                group_flag,
            );
            let continuous = conjunction(
                rules::NONCOMPACT_CONVOLUTION_CONTINUITY,
                continuity(true),
                continuity(false),
                vec![
                    (Status::from_bool(sigma_compact), Some(sigma_node)),
                    (degrees_status, Some(degrees_node())),
                    (factor_pe, factor_pe_node(factor_pe)),
                ],
                "continuity depends on the undeclared factor estimates",
            );
            let product_estimates = match continuous.status {
                Status::Unknown => Verdict::unknown(
                    "product estimates coincide with continuity here, and continuity is undetermined",
                ),
                status => Verdict::new(
                    status,
                    Derivation::new(
                        rules::PE_IFF_CONTINUITY,
                        pe(status.holds()),
                        vec![continuous.derivation.clone()],
                    ),
                ),
            };
            Ok(ConvolutionVerdicts { continuous, product_estimates })
        }
    }
}

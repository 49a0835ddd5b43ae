//! Derivation trees for engine verdicts.
//!
//! Every non-Unknown verdict carries a tree whose nodes name the rule
//! applied and whose leaves are input flags or external constructions.
//! Trees serialize to `{rule, conclusion, premises}` and render to
//! indented text; the replay module re-checks each node mechanically.

use crate::cardinal::Cardinal;
use crate::seminorm::SpacePresentation;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// Truth status of a queried property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn holds(self) -> bool {
        self == Status::Holds
    }

    pub fn from_bool(b: bool) -> Status {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    /// Three-valued conjunction: one failure decides, otherwise any
    /// unknown is contagious.
    pub fn and(statuses: impl IntoIterator<Item = Status>) -> Status {
        let mut out = Status::Holds;
        for s in statuses {
            match s {
                Status::Fails => return Status::Fails,
                Status::Unknown => out = Status::Unknown,
                Status::Holds => {}
            }
        }
        out
    }
}

/// Smoothness degree of a test-function space, ℕ₀ ∪ {∞}.
/// Wire form: a nonnegative integer or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(into = "DegreeRepr", try_from = "DegreeRepr")]
pub enum Degree {
    Finite(u32),
    Infinite,
}

#[derive(Serialize, serde::Deserialize)]
#[serde(untagged)]
enum DegreeRepr {
    Num(u32),
    Name(String),
}

impl From<Degree> for DegreeRepr {
    fn from(d: Degree) -> Self {
        match d {
            Degree::Finite(n) => DegreeRepr::Num(n),
            Degree::Infinite => DegreeRepr::Name("inf".into()),
        }
    }
}

impl TryFrom<DegreeRepr> for Degree {
    type Error = String;
    fn try_from(r: DegreeRepr) -> Result<Self, Self::Error> {
        match r {
            DegreeRepr::Num(n) => Ok(Degree::Finite(n)),
            DegreeRepr::Name(s) => s.parse(),
        }
    }
}

impl Degree {
    pub fn is_infinite(self) -> bool {
        self == Degree::Infinite
    }

    pub fn plus(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a.saturating_add(b)),
            _ => Degree::Infinite,
        }
    }

    pub fn leq(self, other: Degree) -> bool {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => a <= b,
            (_, Degree::Infinite) => true,
            (Degree::Infinite, Degree::Finite(_)) => false,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Infinite => write!(f, "∞"),
        }
    }
}

impl std::str::FromStr for Degree {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Degree::Infinite),
            other => other
                .parse::<u32>()
                .map(Degree::Finite)
                .map_err(|_| format!("degree must be a nonnegative integer or 'inf', got {other:?}")),
        }
    }
}

/// Classification of the underlying group for convolution questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(tag = "class", rename_all = "camelCase")]
pub enum GroupClass {
    Finite,
    InfiniteDiscrete { countable: bool },
    InfiniteCompact,
    #[serde(rename_all = "camelCase")]
    NonCompactNonDiscrete { sigma_compact: bool },
}

impl GroupClass {
    pub fn sigma_compact(self) -> bool {
        match self {
            GroupClass::Finite | GroupClass::InfiniteCompact => true,
            GroupClass::InfiniteDiscrete { countable } => countable,
            GroupClass::NonCompactNonDiscrete { sigma_compact } => sigma_compact,
        }
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupClass::Finite => write!(f, "finite group"),
            GroupClass::InfiniteDiscrete { countable: true } => {
                write!(f, "infinite countable discrete group")
            }
            GroupClass::InfiniteDiscrete { countable: false } => {
                write!(f, "infinite uncountable discrete group")
            }
            GroupClass::InfiniteCompact => write!(f, "infinite compact group"),
            GroupClass::NonCompactNonDiscrete { sigma_compact: true } => {
                write!(f, "σ-compact, neither compact nor discrete group")
            }
            GroupClass::NonCompactNonDiscrete { sigma_compact: false } => {
                write!(f, "non-σ-compact, neither compact nor discrete group")
            }
        }
    }
}

/// Degrees of a convolution setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ConvolutionSetting {
    pub group: GroupClass,
    pub r: Degree,
    pub s: Degree,
    pub t: Degree,
}

impl fmt::Display for ConvolutionSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "convolution C^{}_c×C^{}_c → C^{}_c over the {}",
            self.r, self.s, self.t, self.group
        )
    }
}

/// The map a continuity/product-estimate judgment is about.
#[derive(Debug, Clone, PartialEq)]
pub enum MapRef {
    /// Ψ: C^r_c(M) × E → C^r_c(M,E), (γ,v) ↦ γ·v.
    TestMultiplication,
    /// The convolution map on compactly supported functions.
    Convolution(ConvolutionSetting),
    /// The coefficient bilinear map b: E₁×E₂ → F.
    Factor,
}

impl fmt::Display for MapRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapRef::TestMultiplication => write!(f, "Ψ: C^r_c(M)×E → C^r_c(M,E)"),
            MapRef::Convolution(s) => write!(f, "{s}"),
            MapRef::Factor => write!(f, "factor map b: E₁×E₂ → F"),
        }
    }
}

/// Structured conditions appearing as premises of the decision rules.
#[derive(Debug, Clone, PartialEq)]
pub enum ConditionKind {
    SigmaCompact(GroupClass),
    Countable(GroupClass),
    /// t = ∞ forces r = s = ∞.
    DegreesCompatible { r: Degree, s: Degree, t: Degree },
}

impl ConditionKind {
    /// Ground truth of the condition, recomputable from its data.
    pub fn truth(&self) -> bool {
        match self {
            ConditionKind::SigmaCompact(g) => g.sigma_compact(),
            ConditionKind::Countable(g) => match g {
                GroupClass::Finite => true,
                GroupClass::InfiniteDiscrete { countable } => *countable,
                _ => false,
            },
            ConditionKind::DegreesCompatible { r, s, t } => {
                !t.is_infinite() || (r.is_infinite() && s.is_infinite())
            }
        }
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionKind::SigmaCompact(g) => write!(f, "the {g} is σ-compact"),
            ConditionKind::Countable(g) => write!(f, "the {g} is countable"),
            ConditionKind::DegreesCompatible { r, s, t } => {
                write!(f, "degrees (r,s,t)=({r},{s},{t}) satisfy: t=∞ only if r=s=∞")
            }
        }
    }
}

/// A single proved statement; the conclusion of a derivation node.
#[derive(Debug, Clone, PartialEq)]
pub enum Judgment {
    /// `space` has (or lacks) the θ-neighbourhood property.
    Np { space: SpacePresentation, theta: Cardinal, holds: bool },
    /// `space` admits (or does not admit) a continuous norm.
    ContinuousNorm { space: SpacePresentation, holds: bool },
    /// Declared input data.
    InputFlag { statement: String },
    /// An external construction taken as an axiom.
    External { statement: String },
    /// Computed compact covering number.
    ThetaOf { desc: String, theta: Cardinal },
    Continuity { map: MapRef, holds: bool },
    Hypocontinuity { map: MapRef, holds: bool },
    ProductEstimates { map: MapRef, holds: bool },
    Condition { cond: ConditionKind, holds: bool },
    /// A statement the rule set cannot settle.
    Open { statement: String },
}

impl Judgment {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Judgment::Np { holds, .. }
            | Judgment::ContinuousNorm { holds, .. }
            | Judgment::Continuity { holds, .. }
            | Judgment::Hypocontinuity { holds, .. }
            | Judgment::ProductEstimates { holds, .. }
            | Judgment::Condition { holds, .. } => Some(*holds),
            _ => None,
        }
    }
}

fn np_name(theta: Cardinal) -> String {
    if theta == Cardinal::ALEPH_0 {
        "cnp (= ℵ_0-np)".into()
    } else {
        format!("{theta}-np")
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Np { space, theta, holds: true } => {
                write!(f, "{} has the {}", space.describe(), np_name(*theta))
            }
            Judgment::Np { space, theta, holds: false } => {
                write!(f, "{} does not have the {}", space.describe(), np_name(*theta))
            }
            Judgment::ContinuousNorm { space, holds: true } => {
                write!(f, "{} admits a continuous norm", space.describe())
            }
            Judgment::ContinuousNorm { space, holds: false } => {
                write!(f, "{} does not admit a continuous norm", space.describe())
            }
            Judgment::InputFlag { statement } => write!(f, "input: {statement}"),
            Judgment::External { statement } => write!(f, "external: {statement}"),
            Judgment::ThetaOf { desc, theta } => write!(f, "θ({desc}) = {theta}"),
            Judgment::Continuity { map, holds: true } => write!(f, "{map} is continuous"),
            Judgment::Continuity { map, holds: false } => write!(f, "{map} is not continuous"),
            Judgment::Hypocontinuity { map, holds: true } => {
                write!(f, "{map} is hypocontinuous")
            }
            Judgment::Hypocontinuity { map, holds: false } => {
                write!(f, "{map} is not hypocontinuous")
            }
            Judgment::ProductEstimates { map, holds: true } => {
                write!(f, "{map} admits product estimates")
            }
            Judgment::ProductEstimates { map, holds: false } => {
                write!(f, "{map} does not admit product estimates")
            }
            Judgment::Condition { cond, holds: true } => write!(f, "{cond}"),
            Judgment::Condition { cond, holds: false } => write!(f, "not: {cond}"),
            Judgment::Open { statement } => write!(f, "undetermined: {statement}"),
        }
    }
}

/// One rule application: the conclusion plus the sub-derivations it rests on.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub rule: String,
    pub judgment: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(rule: &str, judgment: Judgment, premises: Vec<Derivation>) -> Self {
        Derivation { rule: rule.to_string(), judgment, premises }
    }

    pub fn leaf(rule: &str, judgment: Judgment) -> Self {
        Derivation::new(rule, judgment, Vec::new())
    }

    pub fn input_flag(statement: impl Into<String>) -> Self {
        Derivation::leaf(rules::INPUT_FLAG, Judgment::InputFlag { statement: statement.into() })
    }

    pub fn external(statement: impl Into<String>) -> Self {
        Derivation::leaf(rules::EXTERNAL, Judgment::External { statement: statement.into() })
    }

    /// Indented plain-text rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&format!("{}  [{}]\n", self.judgment, self.rule));
        for p in &self.premises {
            p.render_into(out, depth + 1);
        }
    }
}

impl Serialize for Derivation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Derivation", 3)?;
        st.serialize_field("rule", &self.rule)?;
        st.serialize_field("conclusion", &self.judgment.to_string())?;
        st.serialize_field("premises", &self.premises)?;
        st.end()
    }
}

/// A queried property with the verdict's justification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub derivation: Derivation,
}

impl Verdict {
    pub fn new(status: Status, derivation: Derivation) -> Self {
        Verdict { status, derivation }
    }

    pub fn unknown(statement: impl Into<String>) -> Self {
        Verdict {
            status: Status::Unknown,
            derivation: Derivation::leaf(
                rules::NO_APPLICABLE_RULE,
                Judgment::Open { statement: statement.into() },
            ),
        }
    }
}

/// Stable rule identifiers. The application order inside the engine is
/// fixed; the first successful chain wins, which keeps trees reproducible.
pub mod rules {
    pub const INPUT_FLAG: &str = "input-flag";
    pub const EXTERNAL: &str = "external-construction";
    pub const NO_APPLICABLE_RULE: &str = "no-applicable-rule";

    pub const NORMABLE_NP: &str = "normable-np";
    pub const METRIZABLE_CNP_IFF_NORMABLE: &str = "metrizable-cnp-iff-normable";
    pub const NP_MONOTONE: &str = "np-monotone";
    pub const NP_MONOTONE_CONTRA: &str = "np-monotone-contra";
    pub const COUNTABLE_SUM_CNP: &str = "countable-sum-cnp";
    pub const FINITE_PRODUCT_NP: &str = "finite-product-np";
    pub const SUBSPACE_NP: &str = "subspace-np";
    pub const QUOTIENT_NP: &str = "quotient-np";
    pub const EMBEDDED_BLOCK_FAILS: &str = "embedded-block-fails";
    pub const K_OMEGA_CNP: &str = "k-omega-cnp";
    pub const FIN_SUPP_CNP: &str = "fin-supp-cnp";
    pub const DF_CNP: &str = "df-cnp";
    pub const COUNTABLE_LIMIT_CNP: &str = "countable-limit-cnp";
    pub const THETA_SUP_FAMILY_NP: &str = "theta-sup-family-np";
    pub const THETA_SUP_FAMILY_UPPER: &str = "theta-sup-family-np-upper-bound";

    pub const NORMED_CONTINUOUS_NORM: &str = "normed-continuous-norm";
    pub const FINEST_TOPOLOGY_NORM: &str = "finest-topology-continuous-norm";
    pub const COUNTABLE_SUPPORT_KILLS_NORM: &str = "countable-support-kills-norm";

    pub const COMPACT_COVERING_COUNT: &str = "compact-covering-count";
    pub const TEST_MULT_HYPOCONTINUOUS: &str = "test-multiplication-hypocontinuous";
    pub const TEST_MULT_CONTINUITY: &str = "test-multiplication-continuity";

    pub const SIGMA_COMPACTNESS: &str = "sigma-compactness";
    pub const COUNTABILITY: &str = "countability";
    pub const DEGREE_COMPATIBILITY: &str = "degree-compatibility";
    pub const FACTOR_PE_INPUT: &str = "factor-pe-input";
    pub const FINITE_GROUP_CONVOLUTION_CONTINUOUS: &str = "finite-group-convolution-continuous";
    pub const COMPACT_GROUP_CONVOLUTION_CONTINUOUS: &str = "compact-group-convolution-continuous";
    pub const DISCRETE_CONVOLUTION_CONTINUITY: &str = "discrete-convolution-continuity";
    pub const NONCOMPACT_CONVOLUTION_CONTINUITY: &str = "noncompact-convolution-continuity";
    pub const PE_IFF_CONTINUITY: &str = "product-estimates-iff-continuity";
    pub const FINITE_GROUP_PE_TRANSFER: &str = "finite-group-pe-transfer";
    pub const COMPACT_GROUP_PE_CHARACTERIZATION: &str = "compact-group-pe-characterization";
}

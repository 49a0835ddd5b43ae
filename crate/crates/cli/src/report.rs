//! Report types emitted by the CLI.
//!
//! Every report serializes to a JSON object with a `command` discriminator;
//! the shapes are documented in docs/schema.md and pinned by golden files.

use prodest_core::cardinal::Cardinal;
use prodest_core::covering::BaseSpaceDesc;
use prodest_core::falsify::{BlowupReport, Outcome, Violation};
use prodest_core::models::GroupFunction;
use prodest_core::np::{Degree, Derivation, GroupClass, PropertyQuery, Status, Verdict};
use prodest_core::seminorm::{SeminormExpr, SpacePresentation};
use serde::Serialize;

#[derive(Serialize)]
pub struct VerdictDoc {
    pub status: Status,
    pub derivation: Derivation,
}

impl From<Verdict> for VerdictDoc {
    fn from(v: Verdict) -> Self {
        VerdictDoc { status: v.status, derivation: v.derivation }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeriveReport {
    pub command: &'static str,
    pub space: SpacePresentation,
    pub query: PropertyQuery,
    pub status: Status,
    pub derivation: Derivation,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaReport {
    pub command: &'static str,
    pub base: BaseSpaceDesc,
    pub theta: Cardinal,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub command: &'static str,
    pub group: GroupClass,
    pub r: Degree,
    pub s: Degree,
    pub t: Degree,
    pub factor_pe: Status,
    pub continuous: VerdictDoc,
    pub product_estimates: VerdictDoc,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScheduleReport {
    pub command: &'static str,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitReport {
    pub command: &'static str,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExponentReport {
    pub command: &'static str,
    pub r: Vec<u32>,
    pub s: Vec<u32>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub command: &'static str,
    pub p_family: Vec<SeminormExpr>,
    pub q_family: Vec<SeminormExpr>,
    pub provenance: Vec<String>,
    /// Union of weight supports (weighted-sup construction only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<u64>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectSumReport {
    pub command: &'static str,
    pub p_table: Vec<SeminormExpr>,
    pub q_table: Vec<SeminormExpr>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub provenance: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FalsifyReport {
    pub command: &'static str,
    pub seed: u64,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReproSequenceReport {
    pub command: &'static str,
    pub case: &'static str,
    pub n: u32,
    pub r: f64,
    pub violation: Violation,
    pub note: &'static str,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReproBlowupReport {
    pub command: &'static str,
    pub case: &'static str,
    #[serde(flatten)]
    pub report: BlowupReport,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvolveReport {
    pub command: &'static str,
    pub result: GroupFunction,
}

/// Emits a report as pretty JSON or via the plain renderer.
pub fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        println!("{}", text());
    }
}

pub fn verdict_text(label: &str, v: &Verdict) -> String {
    format!("{label}: {:?}\n{}", v.status, v.derivation.render_text())
}

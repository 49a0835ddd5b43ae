//! `prodest` — seminorm derivations, product-estimate witnesses, and
//! numerical falsification from the command line.
//!
//! Exit codes: 0 = Holds/Pass, 1 = Fails/Violation, 2 = Unknown,
//! 64 = input or usage error.

mod report;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use prodest_core::cardinal::Cardinal;
use prodest_core::covering::{self, BaseSpaceDesc};
use prodest_core::falsify::{self, Outcome, SampleConfig};
use prodest_core::models::{convolve, BilinearModel, GroupFunction, GroupModel};
use prodest_core::np::{self, Degree, GroupClass, PropertyQuery, Status};
use prodest_core::seminorm::{SeminormExpr, SpacePresentation};
use prodest_core::witness::{
    self, DominationTable, FourIndex, Mat, ProductEstimateWitness,
};
use report::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "prodest",
    version,
    about = "Seminorm domination, neighbourhood-property derivations, product-estimate witnesses, and numerical falsification"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a neighbourhood-property verdict for a space presentation.
    Derive {
        /// JSON file with the space presentation.
        #[arg(long)]
        space: PathBuf,
        /// Property to query.
        #[arg(long, value_enum)]
        property: PropertyKind,
        /// θ for theta-np queries: an integer, `aleph-K`, or `continuum`.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Compute the compact covering number of a base space description.
    Theta {
        /// JSON file with the base space description.
        #[arg(long)]
        base: PathBuf,
    },
    /// Decide continuity and product estimates for group convolution.
    ClassifyConvolution {
        #[arg(long, value_enum)]
        group: GroupArg,
        /// Countability of an infinite discrete group.
        #[arg(long)]
        countable: Option<bool>,
        /// σ-compactness of a neither-compact-nor-discrete group.
        #[arg(long)]
        sigma_compact: Option<bool>,
        /// Degree on the left factor (integer or `inf`).
        #[arg(long)]
        r: Degree,
        /// Degree on the right factor.
        #[arg(long)]
        s: Degree,
        /// Degree on the codomain.
        #[arg(long)]
        t: Degree,
        /// Whether the factor map admits product estimates.
        #[arg(long = "b-pe", value_enum)]
        b_pe: PeArg,
    },
    /// Build scheduled constants and product-estimate witnesses.
    Witness {
        #[command(subcommand)]
        op: WitnessOp,
    },
    /// Check or adversarially search a witness on a finite model.
    Falsify {
        #[command(subcommand)]
        op: FalsifyOp,
    },
    /// Reproduce a named counterexample at desk scale.
    Repro {
        #[command(subcommand)]
        case: ReproCase,
    },
    /// Convolve two functions on a group model.
    Convolve {
        #[arg(long, value_enum)]
        group: ConvGroupArg,
        /// Order of the cyclic group.
        #[arg(long)]
        order: Option<usize>,
        /// Radius of the truncated integer window.
        #[arg(long)]
        radius: Option<usize>,
        /// Node count of the circle grid.
        #[arg(long)]
        points: Option<usize>,
        /// JSON file with the left function.
        #[arg(long)]
        gamma: PathBuf,
        /// JSON file with the right function.
        #[arg(long)]
        eta: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyKind {
    Cnp,
    ThetaNp,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Finite,
    InfiniteDiscrete,
    InfiniteCompact,
    NoncompactNondiscrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum PeArg {
    Yes,
    No,
    Unknown,
}

impl From<PeArg> for Status {
    fn from(p: PeArg) -> Status {
        match p {
            PeArg::Yes => Status::Holds,
            PeArg::No => Status::Fails,
            PeArg::Unknown => Status::Unknown,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvGroupArg {
    Cyclic,
    Truncated,
    Circle,
}

#[derive(Subcommand)]
enum WitnessOp {
    /// Row/column factors a, b with a_i·b_j ≥ r_{i,j}·s_{i,j}.
    Schedule {
        /// JSON file {"r": [[..]], "s": [[..]]}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Triangular split d with d_i·d_j ≥ C_{i,j} and c = 1/d.
    Split {
        /// JSON file {"c": [[..]]}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Integer exponents with r_α + s_β ≥ t_{α,β}.
    Exponents {
        /// JSON file {"t": [[..]]}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Witness from upper bounds on both factor sides.
    Cnp {
        /// JSON file {"pBound": {target, constants}, "qBound": {..}}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Witness from an upper bound on the codomain side.
    TargetCnp {
        /// JSON file {"targetBound": {..}, "p": expr, "q": expr}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Blockwise witness tables for a direct-sum bilinear map.
    DirectSum {
        /// JSON file `{"c": [[[[..]]]], "pBlocks": [[expr]], "qBlocks": [[expr]]}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Witness for pointwise multiplication against weighted-sup targets.
    WeightedSup {
        /// JSON file {"weights": [[{index: weight}]]}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Transport a witness through continuous linear maps.
    Transport {
        /// JSON file {"witness": {..}, "lambda1"?: certs, "lambda2"?: certs, "post"?: matrix}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Pull a witness for an embedded codomain back along the embedding.
    PullBack {
        /// JSON file {"witness": {..}, "forward": matrix, "backward": matrix}.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum FalsifyOp {
    /// Deterministic sampling check of the witness bound.
    Check(FalsifyArgs),
    /// Sampling plus coordinate-ascent hill climbing.
    Search(FalsifyArgs),
}

#[derive(Args)]
struct FalsifyArgs {
    /// Bilinear model to evaluate on.
    #[arg(long, value_enum, default_value_t = ModelArg::PointwiseSeq)]
    model: ModelArg,
    /// Truncation of sequence models.
    #[arg(long, default_value_t = 16)]
    truncation: usize,
    /// Node count of grid models.
    #[arg(long)]
    points: Option<usize>,
    /// Grid models: treat the grid as a circle.
    #[arg(long)]
    periodic: bool,
    /// Scaling factor for the scaled sequence model.
    #[arg(long)]
    factor: Option<f64>,
    /// Block count of the block model.
    #[arg(long)]
    blocks: Option<usize>,
    /// JSON file with the block scale matrix.
    #[arg(long)]
    scales: Option<PathBuf>,
    /// JSON file with the target seminorm table `[[expr]]`.
    #[arg(long)]
    targets: PathBuf,
    /// JSON file with the witness {pFamily, qFamily, provenance}.
    #[arg(long)]
    witness: PathBuf,
    /// Seed for the deterministic sampler (required).
    #[arg(long)]
    seed: u64,
    /// Total sample budget.
    #[arg(long, default_value_t = 10_000)]
    count: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    PointwiseSeq,
    ScaledPointwiseSeq,
    PointwiseGrid,
    BlockPointwise,
}

#[derive(Subcommand)]
enum ReproCase {
    /// Prefix-seminorm violation for pointwise sequence multiplication
    /// (case id kept stable for scripting).
    Examp3 {
        /// Index of the candidate bound p_1 ≤ r·‖·‖_n.
        #[arg(long)]
        n: u32,
        /// Scale of the candidate bound.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Bump-family C^{k+1}/C^k blow-up for smooth multiplication.
    Examp4 {
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Comma-separated decreasing scales in (0,1]; halvings of 2^-3
        /// down to 2^-7 when omitted.
        #[arg(long, value_delimiter = ',')]
        t_grid: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli.command, json) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn parse_theta(raw: &str) -> Result<Cardinal, String> {
    if raw == "continuum" {
        return Ok(Cardinal::Continuum);
    }
    if let Some(k) = raw.strip_prefix("aleph-") {
        return k
            .parse::<u32>()
            .map(Cardinal::Aleph)
            .map_err(|_| format!("bad aleph index {k:?}"));
    }
    raw.parse::<u64>()
        .map(Cardinal::Finite)
        .map_err(|_| format!("theta must be an integer, `aleph-K`, or `continuum`, got {raw:?}"))
}

fn status_exit(status: Status) -> u8 {
    match status {
        Status::Holds => EXIT_PASS,
        Status::Fails => EXIT_FAIL,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn run(command: Command, json: bool) -> Result<u8, String> {
    match command {
        Command::Derive { space, property, theta } => {
            let space: SpacePresentation = read_json(&space)?;
            space.validate().map_err(|e| e.to_string())?;
            let query = match property {
                PropertyKind::Cnp => PropertyQuery::Cnp,
                PropertyKind::ThetaNp => {
                    let raw = theta.ok_or("theta-np queries need --theta")?;
                    PropertyQuery::ThetaNp { theta: parse_theta(&raw)? }
                }
            };
            let verdict = np::derive(&space, query).map_err(|e| e.to_string())?;
            let exit = status_exit(verdict.status);
            let report = DeriveReport {
                command: "derive",
                space,
                query,
                status: verdict.status,
                derivation: verdict.derivation,
            };
            emit(json, &report, || {
                format!(
                    "{:?}: {} for {}\n{}",
                    report.status,
                    match report.query {
                        PropertyQuery::Cnp => "cnp".to_string(),
                        PropertyQuery::ThetaNp { theta } => format!("{theta}-np"),
                    },
                    report.space.describe(),
                    report.derivation.render_text()
                )
            });
            Ok(exit)
        }
        Command::Theta { base } => {
            let base: BaseSpaceDesc = read_json(&base)?;
            let theta = covering::theta(&base).map_err(|e| e.to_string())?;
            let report = ThetaReport { command: "theta", base, theta };
            emit(json, &report, || format!("θ(M) = {theta}"));
            Ok(EXIT_PASS)
        }
        Command::ClassifyConvolution { group, countable, sigma_compact, r, s, t, b_pe } => {
            let group = match group {
                GroupArg::Finite => GroupClass::Finite,
                GroupArg::InfiniteDiscrete => GroupClass::InfiniteDiscrete {
                    countable: countable
                        .ok_or("--group infinite-discrete needs --countable true|false")?,
                },
                GroupArg::InfiniteCompact => GroupClass::InfiniteCompact,
                GroupArg::NoncompactNondiscrete => GroupClass::NonCompactNonDiscrete {
                    sigma_compact: sigma_compact
                        .ok_or("--group noncompact-nondiscrete needs --sigma-compact true|false")?,
                },
            };
            let factor_pe: Status = b_pe.into();
            let out = np::classify_convolution(group, r, s, t, factor_pe)
                .map_err(|e| e.to_string())?;
            let exit = status_exit(out.continuous.status);
            let report = ClassifyReport {
                command: "classify-convolution",
                group,
                r,
                s,
                t,
                factor_pe,
                continuous: out.continuous.into(),
                product_estimates: out.product_estimates.into(),
            };
            emit(json, &report, || {
                format!(
                    "{}\n{}",
                    verdict_text(
                        "continuous",
                        &np::Verdict::new(
                            report.continuous.status,
                            report.continuous.derivation.clone()
                        )
                    ),
                    verdict_text(
                        "product estimates",
                        &np::Verdict::new(
                            report.product_estimates.status,
                            report.product_estimates.derivation.clone()
                        )
                    ),
                )
            });
            Ok(exit)
        }
        Command::Witness { op } => run_witness(op, json),
        Command::Falsify { op } => run_falsify(op, json),
        Command::Repro { case } => run_repro(case, json),
        Command::Convolve { group, order, radius, points, gamma, eta } => {
            let model = match group {
                ConvGroupArg::Cyclic => GroupModel::CyclicZ {
                    order: order.ok_or("--group cyclic needs --order")?,
                },
                ConvGroupArg::Truncated => GroupModel::TruncatedZ {
                    radius: radius.ok_or("--group truncated needs --radius")?,
                },
                ConvGroupArg::Circle => GroupModel::CircleGrid {
                    points: points.ok_or("--group circle needs --points")?,
                },
            };
            let gamma: GroupFunction = read_json(&gamma)?;
            let eta: GroupFunction = read_json(&eta)?;
            let result = convolve(&model, &gamma, &eta).map_err(|e| e.to_string())?;
            let report = ConvolveReport { command: "convolve", result };
            emit(json, &report, || match &report.result {
                GroupFunction::Discrete(v) => format!("{v:?}"),
                GroupFunction::Grid(g) => format!(
                    "grid function on {} nodes, sup = {}",
                    g.len(),
                    g.sup_norm()
                ),
            });
            Ok(EXIT_PASS)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleInput {
    r: Mat,
    s: Mat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitInput {
    c: Mat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentInput {
    t: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CnpInput {
    p_bound: DominationTable,
    q_bound: DominationTable,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TargetCnpInput {
    target_bound: DominationTable,
    p: SeminormExpr,
    q: SeminormExpr,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DirectSumInput {
    c: FourIndex,
    p_blocks: Vec<Vec<SeminormExpr>>,
    q_blocks: Vec<Vec<SeminormExpr>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightedSupInput {
    weights: Vec<Vec<prodest_core::seminorm::WeightMap>>,
}

#[derive(Deserialize)]
struct TransportInput {
    witness: ProductEstimateWitness,
    #[serde(flatten)]
    spec: witness::TransportSpec,
}

#[derive(Deserialize)]
struct PullBackInput {
    witness: ProductEstimateWitness,
    #[serde(flatten)]
    embedding: witness::EmbeddingCerts,
}

fn witness_report(command: &'static str, w: ProductEstimateWitness, support: Option<Vec<u64>>) -> WitnessReport {
    WitnessReport {
        command,
        p_family: w.p_family,
        q_family: w.q_family,
        provenance: w.provenance,
        support,
    }
}

fn run_witness(op: WitnessOp, json: bool) -> Result<u8, String> {
    match op {
        WitnessOp::Schedule { input } => {
            let inp: ScheduleInput = read_json(&input)?;
            let out = witness::schedule_constants(&inp.r, &inp.s).map_err(|e| e.to_string())?;
            let report = ScheduleReport { command: "witness-schedule", a: out.a, b: out.b };
            emit(json, &report, || format!("a = {:?}\nb = {:?}", report.a, report.b));
            Ok(EXIT_PASS)
        }
        WitnessOp::Split { input } => {
            let inp: SplitInput = read_json(&input)?;
            let out = witness::bisgaard_split(&inp.c).map_err(|e| e.to_string())?;
            let report = SplitReport { command: "witness-split", c: out.c, d: out.d };
            emit(json, &report, || format!("d = {:?}\nc = {:?}", report.d, report.c));
            Ok(EXIT_PASS)
        }
        WitnessOp::Exponents { input } => {
            let inp: ExponentInput = read_json(&input)?;
            let out = witness::exponent_schedule(&inp.t).map_err(|e| e.to_string())?;
            let report = ExponentReport { command: "witness-exponents", r: out.r, s: out.s };
            emit(json, &report, || format!("r = {:?}\ns = {:?}", report.r, report.s));
            Ok(EXIT_PASS)
        }
        WitnessOp::Cnp { input } => {
            let inp: CnpInput = read_json(&input)?;
            let w = witness::cnp_product_estimates(&inp.p_bound, &inp.q_bound)
                .map_err(|e| e.to_string())?;
            let report = witness_report("witness-cnp", w, None);
            emit(json, &report, || render_witness(&report));
            Ok(EXIT_PASS)
        }
        WitnessOp::TargetCnp { input } => {
            let inp: TargetCnpInput = read_json(&input)?;
            let w = witness::target_cnp_product_estimates(&inp.target_bound, &inp.p, &inp.q)
                .map_err(|e| e.to_string())?;
            let report = witness_report("witness-target-cnp", w, None);
            emit(json, &report, || render_witness(&report));
            Ok(EXIT_PASS)
        }
        WitnessOp::DirectSum { input } => {
            let inp: DirectSumInput = read_json(&input)?;
            let w = witness::direct_sum_combine(&inp.c, &inp.p_blocks, &inp.q_blocks)
                .map_err(|e| e.to_string())?;
            let report = DirectSumReport {
                command: "witness-direct-sum",
                p_table: w.p_table,
                q_table: w.q_table,
                u: w.u,
                v: w.v,
                provenance: w.provenance,
            };
            emit(json, &report, || {
                format!("u = {:?}\nv = {:?}", report.u, report.v)
            });
            Ok(EXIT_PASS)
        }
        WitnessOp::WeightedSup { input } => {
            let inp: WeightedSupInput = read_json(&input)?;
            let (w, support) =
                witness::weighted_sup_witness(&inp.weights).map_err(|e| e.to_string())?;
            let report = witness_report(
                "witness-weighted-sup",
                w,
                Some(support.into_iter().collect()),
            );
            emit(json, &report, || render_witness(&report));
            Ok(EXIT_PASS)
        }
        WitnessOp::Transport { input } => {
            let inp: TransportInput = read_json(&input)?;
            let w = witness::transport(&inp.witness, &inp.spec).map_err(|e| e.to_string())?;
            let report = witness_report("witness-transport", w, None);
            emit(json, &report, || render_witness(&report));
            Ok(EXIT_PASS)
        }
        WitnessOp::PullBack { input } => {
            let inp: PullBackInput = read_json(&input)?;
            let w = witness::pull_back_embedding(&inp.witness, &inp.embedding)
                .map_err(|e| e.to_string())?;
            let report = witness_report("witness-pull-back", w, None);
            emit(json, &report, || render_witness(&report));
            Ok(EXIT_PASS)
        }
    }
}

fn render_witness(report: &WitnessReport) -> String {
    let mut out = String::new();
    for (i, p) in report.p_family.iter().enumerate() {
        out.push_str(&format!("p_{} = {p}\n", i + 1));
    }
    for (j, q) in report.q_family.iter().enumerate() {
        out.push_str(&format!("q_{} = {q}\n", j + 1));
    }
    for line in &report.provenance {
        out.push_str(&format!("  · {line}\n"));
    }
    out.pop();
    out
}

fn build_model(args: &FalsifyArgs) -> Result<BilinearModel, String> {
    match args.model {
        ModelArg::PointwiseSeq => Ok(BilinearModel::pointwise_seq(args.truncation)),
        ModelArg::ScaledPointwiseSeq => Ok(BilinearModel::scaled_pointwise_seq(
            args.truncation,
            args.factor.ok_or("scaled model needs --factor")?,
        )),
        ModelArg::PointwiseGrid => Ok(BilinearModel::pointwise_grid(
            args.points.ok_or("grid model needs --points")?,
            args.periodic,
        )),
        ModelArg::BlockPointwise => {
            let blocks = args.blocks.ok_or("block model needs --blocks")?;
            let scales: Vec<Vec<f64>> = read_json(
                args.scales.as_deref().ok_or("block model needs --scales")?,
            )?;
            BilinearModel::scaled_block_pointwise(blocks, args.truncation, scales)
                .map_err(|e| e.to_string())
        }
    }
}

fn run_falsify(op: FalsifyOp, json: bool) -> Result<u8, String> {
    let (args, search) = match op {
        FalsifyOp::Check(a) => (a, false),
        FalsifyOp::Search(a) => (a, true),
    };
    let model = build_model(&args)?;
    let targets: Vec<Vec<SeminormExpr>> = read_json(&args.targets)?;
    let witness: ProductEstimateWitness = read_json(&args.witness)?;
    for expr in targets
        .iter()
        .flatten()
        .chain(&witness.p_family)
        .chain(&witness.q_family)
    {
        expr.validate().map_err(|e| e.to_string())?;
    }
    let cfg = SampleConfig::new(args.seed, args.count);
    let outcome = if search {
        falsify::search(&model, &targets, &witness, &cfg)
    } else {
        falsify::check(&model, &targets, &witness, &cfg)
    }
    .map_err(|e| e.to_string())?;
    let exit = match &outcome {
        Outcome::Pass { .. } => EXIT_PASS,
        Outcome::Violation { .. } => EXIT_FAIL,
    };
    let report = FalsifyReport {
        command: if search { "falsify-search" } else { "falsify-check" },
        seed: args.seed,
        outcome,
    };
    emit(json, &report, || match &report.outcome {
        Outcome::Pass { samples_tried } => {
            format!("pass: no violation in {samples_tried} samples")
        }
        Outcome::Violation { violation, samples_tried } => format!(
            "violation at (i,j) = ({}, {}) after {samples_tried} samples: lhs = {} > rhs = {}",
            violation.i, violation.j, violation.lhs, violation.rhs
        ),
    });
    Ok(exit)
}

fn run_repro(case: ReproCase, json: bool) -> Result<u8, String> {
    match case {
        ReproCase::Examp3 { n, r } => {
            if n == 0 {
                return Err("--n must be at least 1".into());
            }
            if !r.is_finite() || r <= 0.0 {
                return Err("--r must be strictly positive".into());
            }
            let violation = falsify::sequence_product_violation(n, r);
            let report = ReproSequenceReport {
                command: "repro",
                case: "examp3",
                n,
                r,
                violation,
                note: falsify::SEQUENCE_PRODUCT_NOTE,
            };
            emit(json, &report, || {
                format!(
                    "violation: p_{{1,{n}}}(β(e_{m}, e_{m})) = {} > {} = p_1(e_{m})·q_{n}(e_{m})\nnote: {}",
                    report.violation.lhs,
                    report.violation.rhs,
                    report.note,
                    m = n + 1,
                )
            });
            Ok(EXIT_FAIL)
        }
        ReproCase::Examp4 { k, t_grid } => {
            let grid = if t_grid.is_empty() {
                (3..=7).map(|m| 2f64.powi(-m)).collect()
            } else {
                t_grid
            };
            let blowup = falsify::bump_blowup(k, &grid).map_err(|e| e.to_string())?;
            let exit = if blowup.certified { EXIT_FAIL } else { EXIT_UNKNOWN };
            let report = ReproBlowupReport { command: "repro", case: "examp4", report: blowup };
            emit(json, &report, || {
                let mut out = format!(
                    "k = {}: C^{}/C^{} ratios under halving t\n",
                    report.report.k,
                    report.report.k + 1,
                    report.report.k
                );
                for p in &report.report.points {
                    out.push_str(&format!(
                        "  t = {:.6}: ‖g_t‖_C^{} = {:.6}, ratio = {:.3}\n",
                        p.t,
                        report.report.k,
                        p.ck,
                        p.ratio
                    ));
                }
                out.push_str(&format!(
                    "quotients: {:?}\nsup ‖g_t‖_C^{} = {:.6} ≤ S = {:.6}\ncertified blow-up: {}",
                    report.report.quotients,
                    report.report.k,
                    report.report.sup_ck,
                    report.report.s_bound,
                    report.report.certified
                ));
                out
            });
            Ok(exit)
        }
    }
}

//! Cross-module property suite: every witness the constructors emit must
//! pass the numerical checker on the registered models — no false alarms
//! on proven witnesses.

use prodest_core::falsify::{check, Outcome, SampleConfig};
use prodest_core::models::BilinearModel;
use prodest_core::seminorm::{dominates_expr, SeminormExpr, WeightMap};
use prodest_core::witness::{
    cnp_product_estimates, direct_sum_combine, pull_back_embedding, target_cnp_product_estimates,
    transport, weighted_sup_witness, DominationTable, EmbeddingCerts, FourIndex, Mat,
    ProductEstimateWitness, TransportSpec,
};

fn prefix_targets(rows: usize, cols: usize) -> Vec<Vec<SeminormExpr>> {
    (1..=rows)
        .map(|i| (1..=cols).map(|j| SeminormExpr::prefix_sup((i + j) as u32)).collect())
        .collect()
}

fn expect_pass(out: Outcome, context: &str) {
    match out {
        Outcome::Pass { .. } => {}
        Outcome::Violation { violation, .. } => {
            panic!("{context}: false alarm {violation:?}")
        }
    }
}

/// Witness for pointwise multiplication via the both-sides constructor,
/// with the domination constants taken from the symbolic rule engine.
fn scheduled_prefix_witness(n: usize, truncation: u32) -> ProductEstimateWitness {
    let full = SeminormExpr::prefix_sup(truncation);
    let constants = |exprs: &[Vec<SeminormExpr>]| {
        Mat::from_rows(
            exprs
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| dominates_expr(e, &full).expect("prefix monotonicity").constant)
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    };
    // Continuity certificates: ‖x·y‖_{i+j} ≤ P_{i,j}(x)·Q_{i,j}(y) with
    // P_{i,j} = 2^i·‖·‖_{i+j} and Q_{i,j} = ‖·‖_{i+j}.
    let p_exprs: Vec<Vec<SeminormExpr>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    SeminormExpr::scale(2f64.powi(i as i32), SeminormExpr::prefix_sup((i + j) as u32))
                })
                .collect()
        })
        .collect();
    let q_exprs = prefix_targets(n, n);
    let p_table = DominationTable { target: full.clone(), constants: constants(&p_exprs) };
    let q_table = DominationTable { target: full.clone(), constants: constants(&q_exprs) };
    cnp_product_estimates(&p_table, &q_table).unwrap()
}

#[test]
fn scheduled_witness_passes_on_pointwise_model() {
    for truncation in [8usize, 16, 32] {
        let model = BilinearModel::pointwise_seq(truncation);
        let witness = scheduled_prefix_witness(3, truncation as u32);
        let targets = prefix_targets(3, 3);
        let out = check(&model, &targets, &witness, &SampleConfig::new(11, 5000)).unwrap();
        expect_pass(out, &format!("scheduled witness at truncation {truncation}"));
    }
}

#[test]
fn target_split_witness_passes_on_pointwise_model() {
    let truncation = 24u32;
    let n = 4usize;
    let full = SeminormExpr::prefix_sup(truncation);
    // Targets c_{i,j}·‖·‖_{i+j} with growing constants; they are dominated
    // by C_{i,j}·‖·‖_N with C_{i,j} = c_{i,j}.
    let targets: Vec<Vec<SeminormExpr>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    SeminormExpr::scale((i * j) as f64, SeminormExpr::prefix_sup((i + j) as u32))
                })
                .collect()
        })
        .collect();
    let constants = Mat::from_rows(
        (1..=n).map(|i| (1..=n).map(|j| (i * j) as f64).collect()).collect(),
    )
    .unwrap();
    let witness = target_cnp_product_estimates(
        &DominationTable { target: full.clone(), constants },
        &full,
        &full,
    )
    .unwrap();
    let model = BilinearModel::pointwise_seq(truncation as usize);
    let out = check(&model, &targets, &witness, &SampleConfig::new(23, 5000)).unwrap();
    expect_pass(out, "target-side split witness");
}

#[test]
fn weighted_sup_witness_passes_on_overlapping_supports() {
    // Two overlapping supports with union of size 3.
    let v11: WeightMap = [(0u64, 1.0), (1u64, 2.0)].into_iter().collect();
    let v12: WeightMap = [(1u64, 0.5), (2u64, 4.0)].into_iter().collect();
    let (witness, support) = weighted_sup_witness(&[vec![v11.clone(), v12.clone()]]).unwrap();
    assert_eq!(support.len(), 3);

    let targets = vec![vec![
        SeminormExpr::weighted_sup(v11),
        SeminormExpr::weighted_sup(v12),
    ]];
    let model = BilinearModel::pointwise_seq(3);
    let out = check(&model, &targets, &witness, &SampleConfig::new(5, 2000)).unwrap();
    expect_pass(out, "weighted-sup witness");
}

#[test]
fn direct_sum_witness_passes_on_block_model() {
    let blocks = 2usize;
    let truncation = 8usize;
    let sigma = 2usize;
    let tau = 2usize;
    let scales: Vec<Vec<f64>> = (0..blocks)
        .map(|i| (0..blocks).map(|j| 2f64.powi((i + j + 2) as i32)).collect())
        .collect();
    let model =
        BilinearModel::scaled_block_pointwise(blocks, truncation, scales.clone()).unwrap();

    // Blockwise estimate: ‖scale·(x⊙y)‖_{σ+τ} ≤ scale·‖x‖_N·‖y‖_N.
    let full = SeminormExpr::prefix_sup(truncation as u32);
    let c: FourIndex = (0..blocks)
        .map(|i| (0..blocks).map(|j| vec![vec![scales[i][j]; tau]; sigma]).collect())
        .collect();
    let p_blocks: Vec<Vec<SeminormExpr>> = vec![vec![full.clone(); sigma]; blocks];
    let q_blocks: Vec<Vec<SeminormExpr>> = vec![vec![full.clone(); tau]; blocks];
    let w = direct_sum_combine(&c, &p_blocks, &q_blocks).unwrap();

    let targets: Vec<Vec<SeminormExpr>> = (1..=sigma)
        .map(|s| (1..=tau).map(|t| SeminormExpr::prefix_sup((s + t) as u32)).collect())
        .collect();
    let witness = ProductEstimateWitness {
        p_family: w.p_table,
        q_family: w.q_table,
        provenance: w.provenance,
    };
    let out = check(&model, &targets, &witness, &SampleConfig::new(77, 4000)).unwrap();
    expect_pass(out, "direct-sum combined witness");
}

#[test]
fn transported_witness_passes_on_scaled_model() {
    let truncation = 12usize;
    let n = 3usize;
    let base = scheduled_prefix_witness(n, truncation as u32);
    let targets = prefix_targets(n, n);

    // Postcompose with doubling: t_{i,j}∘Λ ≤ 2·p_{i,j}.
    let spec = TransportSpec {
        post: Some(Mat::from_rows(vec![vec![2.0; n]; n]).unwrap()),
        ..Default::default()
    };
    let transported = transport(&base, &spec).unwrap();
    let doubled = BilinearModel::scaled_pointwise_seq(truncation, 2.0);
    let out = check(&doubled, &targets, &transported, &SampleConfig::new(31, 4000)).unwrap();
    expect_pass(out, "transported witness on the doubled map");

    // Pull a witness for the doubled map back to the plain map along the
    // embedding z ↦ 2z, using the backward bounds p_{i,j} ≤ ½·(t_{i,j}∘Λ).
    let for_doubled = ProductEstimateWitness {
        p_family: vec![
            SeminormExpr::scale(2.0, SeminormExpr::prefix_sup(truncation as u32));
            n
        ],
        q_family: vec![SeminormExpr::prefix_sup(truncation as u32); n],
        provenance: vec![],
    };
    let out = check(&doubled, &targets, &for_doubled, &SampleConfig::new(32, 2000)).unwrap();
    expect_pass(out, "hand witness on the doubled map");

    let emb = EmbeddingCerts {
        forward: Mat::from_rows(vec![vec![2.0; n]; n]).unwrap(),
        backward: Mat::from_rows(vec![vec![0.5; n]; n]).unwrap(),
    };
    let pulled = pull_back_embedding(&for_doubled, &emb).unwrap();
    let plain = BilinearModel::pointwise_seq(truncation);
    let out = check(&plain, &targets, &pulled, &SampleConfig::new(33, 2000)).unwrap();
    expect_pass(out, "pulled-back witness on the plain map");
}

//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.
//! Criterion 8 needs the full 507-pair corpus; point `SEQHMM_FULL_CORPUS` at
//! it, otherwise it is reported as SKIPPED. Set `SEQHMM_BLESS=1` to rewrite
//! the golden file for the 20-pair sample corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqhmm::alphabet::{RESIDUES, STRUCTURES};
use seqhmm::ann::{
    backprop_step, gradient, predict_ann, train_ann, FeedForwardNet, TrainConfig, WindowConfig,
};
use seqhmm::dataset::{parse_corpus, Corpus, LabeledPair, ParseMode};
use seqhmm::harness::{report_csv, run_experiment, run_matrix, ExperimentConfig, Method};
use seqhmm::hmm::oracle::{brute_force_best_path, brute_force_posterior, brute_force_prob};
use seqhmm::hmm::{
    baum_welch, forward, init_model, posterior, sample, viterbi, DiscreteHmm, EmConfig, InitScheme, Scaling,
};
use seqhmm::profile::oracle::enumerate_prob;
use seqhmm::profile::{profile_forward, ProfileDp, ProfileHmm, Space};
use seqhmm::seqstruct::{estimate_by_counting, evaluate_fold, EvalOptions, ModelDirection};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

const SAMPLE_CORPUS: &str = include_str!("../../../data/sample_corpus.txt");

enum Outcome {
    Pass(String),
    Fail(String),
    Skipped(String),
}

fn sample_corpus() -> Corpus {
    parse_corpus(SAMPLE_CORPUS, ParseMode::Repair).unwrap().corpus
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn within(budget: Duration, start: Instant) -> std::result::Result<(), String> {
    let spent = start.elapsed();
    if spent <= budget {
        Ok(())
    } else {
        Err(format!("took {spent:.2?}, budget {budget:.0?}"))
    }
}

/// Random small HMM with random observations, `N, M <= 4`, `1 <= T <= 8`.
fn random_instance(seed: u64) -> (DiscreteHmm, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let t = rng.gen_range(1..=8);
    let model = init_model(n, m, InitScheme::Random, seed).unwrap();
    let obs = (0..t).map(|_| rng.gen_range(0..m)).collect();
    (model, obs)
}

/// Models built from dyadic probabilities, where many paths tie exactly.
fn tie_instance(seed: u64) -> (DiscreteHmm, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=3);
    let uniform = |k: usize| vec![1.0 / k as f64; k];
    let pi = if n == 4 || n == 2 { uniform(n) } else { vec![0.5, 0.25, 0.25] };
    let trans = vec![uniform(n); n];
    let emit = (0..n).map(|_| if m == 2 { uniform(2) } else if m == 1 { vec![1.0] } else { vec![0.5, 0.25, 0.25] }).collect();
    let model = DiscreteHmm::from_rows(pi, trans, emit).unwrap();
    let obs = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..m)).collect();
    (model, obs)
}

fn c1_forward_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..1000 {
        let (model, obs) = random_instance(seed);
        let p = forward(&model, &obs, Scaling::Scaled).unwrap().loglik.exp();
        let q = brute_force_prob(&model, &obs).unwrap();
        let u = forward(&model, &obs, Scaling::Unscaled).unwrap().loglik.exp();
        worst = worst.max(rel(p, q)).max(rel(u, q));
    }
    if let Err(e) = within(Duration::from_secs(5), start) {
        return Outcome::Fail(e);
    }
    let msg = format!("1000 instances, max relative error {worst:.2e}");
    if worst <= 1e-10 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c2_viterbi_optimal() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..500 {
        let (model, obs) = random_instance(10_000 + seed);
        let v = viterbi(&model, &obs).unwrap();
        let (_, best) = brute_force_best_path(&model, &obs).unwrap();
        worst = worst.max(rel(model.joint_prob(&v.path, &obs), best));
    }
    let mut tie_cases = 0;
    for seed in 0..100 {
        let (model, obs) = tie_instance(20_000 + seed);
        let v = viterbi(&model, &obs).unwrap();
        let (path, best) = brute_force_best_path(&model, &obs).unwrap();
        if v.path != path {
            return Outcome::Fail(format!("tie case {seed}: got {:?}, lexicographically least is {path:?}", v.path));
        }
        worst = worst.max(rel(model.joint_prob(&v.path, &obs), best));
        tie_cases += 1;
    }
    if let Err(e) = within(Duration::from_secs(5), start) {
        return Outcome::Fail(e);
    }
    let msg = format!("500 random + {tie_cases} tie instances, max relative error {worst:.2e}");
    if worst <= 1e-10 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c3_posterior() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_row = 0.0f64;
    for seed in 0..500 {
        let (model, obs) = random_instance(30_000 + seed);
        let table = posterior(&model, &obs).unwrap();
        let oracle = brute_force_posterior(&model, &obs).unwrap();
        for (g, o) in table.gamma.as_slice().iter().zip(oracle.as_slice()) {
            worst = worst.max((g - o).abs());
        }
        for row in table.gamma.iter_rows() {
            worst_row = worst_row.max((row.iter().sum::<f64>() - 1.0).abs());
        }
    }
    let msg = format!("500 instances, max |γ - oracle| {worst:.2e}, max |Σγ - 1| {worst_row:.2e}");
    if worst <= 1e-10 && worst_row <= 1e-9 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c4_em_monotone() -> Outcome {
    let start = Instant::now();
    let cfg = EmConfig::default();
    let mut worst_drop = 0.0f64;
    let mut iterations = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(2..=4);
        let truth = init_model(n, m, InitScheme::Random, 40_000 + seed).unwrap();
        let data: Vec<Vec<usize>> = sample(&truth, rng.gen_range(5..=20), rng.gen_range(1..=5), seed)
            .unwrap()
            .into_iter()
            .map(|s| s.observations)
            .collect();
        let init = init_model(n, m, InitScheme::Random, 50_000 + seed).unwrap();
        let report = baum_welch(&init, &data, &cfg).unwrap();
        iterations += report.iterations;
        for w in report.loglik_trace.windows(2) {
            worst_drop = worst_drop.max(w[0] - w[1]);
        }
    }
    if let Err(e) = within(Duration::from_secs(10), start) {
        return Outcome::Fail(e);
    }
    let msg = format!("100 runs, {iterations} iterations, largest decrease {worst_drop:.2e}");
    if worst_drop <= 1e-9 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c5_profile() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_recon = 0.0f64;
    for case in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(60_000 + case);
        let len = rng.gen_range(1..=3);
        let alphabet = ["ab", "abc"][rng.gen_range(0..2)];
        let p = ProfileHmm::random(len, alphabet, case).unwrap();
        let x: Vec<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..alphabet.len())).collect();
        let f = profile_forward(&p, &x, Space::Linear).unwrap().total;
        let e = enumerate_prob(&p, &x);
        worst = worst.max(rel(f, e));
        let dp = ProfileDp::compute(&p, &x, Space::Linear).unwrap();
        for i in 0..=x.len() {
            worst_recon = worst_recon.max(rel(dp.row_total(i), f));
        }
        for j in 1..=len {
            worst_recon = worst_recon.max(rel(dp.column_total(j), f));
        }
    }
    let msg = format!("200 profiles, forward vs enumeration {worst:.2e}, reconstruction {worst_recon:.2e}");
    if worst <= 1e-10 && worst_recon <= 1e-10 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

/// Recount without the library: plain character tallies in hash maps.
fn recount(pairs: &[LabeledPair], hidden_of: fn(&LabeledPair) -> &str, observed_of: fn(&LabeledPair) -> &str)
    -> (BTreeMap<u8, u64>, BTreeMap<(u8, u8), u64>, BTreeMap<(u8, u8), u64>)
{
    let mut first = BTreeMap::new();
    let mut trans = BTreeMap::new();
    let mut emit = BTreeMap::new();
    for p in pairs {
        let h = hidden_of(p).as_bytes();
        let o = observed_of(p).as_bytes();
        *first.entry(h[0]).or_insert(0) += 1;
        for k in 1..h.len() {
            *trans.entry((h[k - 1], h[k])).or_insert(0) += 1;
        }
        for k in 0..h.len() {
            *emit.entry((h[k], o[k])).or_insert(0) += 1;
        }
    }
    (first, trans, emit)
}

/// `value` must be exactly `num / den` (or uniform for an empty row).
fn ratio_matches(value: f64, num: u64, den: u64, width: usize) -> bool {
    if den == 0 {
        return value == 1.0 / width as f64;
    }
    value == num as f64 / den as f64 && (value * den as f64 - num as f64).abs() <= 1e-9 * den as f64
}

fn c6_counting_exact() -> Outcome {
    let corpus = sample_corpus();
    if corpus.len() != 20 {
        return Outcome::Fail(format!("expected 20 pairs, parsed {}", corpus.len()));
    }
    let mut checked = 0;
    for direction in [ModelDirection::StructureHidden, ModelDirection::SequenceHidden] {
        let est = estimate_by_counting(corpus.pairs(), direction, 0.0).unwrap();
        let (hid, obs) = (direction.hidden_alphabet(), direction.observed_alphabet());
        let (n, m) = (hid.len(), obs.len());
        let shapes = (est.model.trans().rows(), est.model.trans().cols(), est.model.emit().rows(), est.model.emit().cols());
        if shapes != (n, n, n, m) {
            return Outcome::Fail(format!("{direction}: shapes {shapes:?}"));
        }
        let (first, trans, emit) = match direction {
            ModelDirection::StructureHidden => recount(corpus.pairs(), |p| &p.structure, |p| &p.seq),
            ModelDirection::SequenceHidden => recount(corpus.pairs(), |p| &p.seq, |p| &p.structure),
        };
        let get = |map: &BTreeMap<(u8, u8), u64>, a: u8, b: u8| map.get(&(a, b)).copied().unwrap_or(0);
        let total_first: u64 = first.values().sum();
        for (i, &hi) in hid.symbols().iter().enumerate() {
            if !ratio_matches(est.model.pi()[i], first.get(&hi).copied().unwrap_or(0), total_first, n) {
                return Outcome::Fail(format!("{direction}: pi[{}] differs", hi as char));
            }
            let row_t: u64 = hid.symbols().iter().map(|&hj| get(&trans, hi, hj)).sum();
            for (j, &hj) in hid.symbols().iter().enumerate() {
                if !ratio_matches(est.model.trans()[(i, j)], get(&trans, hi, hj), row_t, n) {
                    return Outcome::Fail(format!("{direction}: A[{}][{}] differs", hi as char, hj as char));
                }
                checked += 1;
            }
            let row_e: u64 = obs.symbols().iter().map(|&o| get(&emit, hi, o)).sum();
            for (k, &ok) in obs.symbols().iter().enumerate() {
                if !ratio_matches(est.model.emit()[(i, k)], get(&emit, hi, ok), row_e, m) {
                    return Outcome::Fail(format!("{direction}: B[{}][{}] differs", hi as char, ok as char));
                }
                checked += 1;
            }
        }
    }
    Outcome::Pass(format!("{checked} matrix entries equal the recount ratios; shapes 8x8/8x20 and 20x20/20x8"))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sample_corpus_folds.json")
}

fn c7_directional_hmm() -> Outcome {
    let start = Instant::now();
    let corpus = sample_corpus();
    let folds = corpus.folds(5).unwrap();
    let mut table = BTreeMap::new();
    let mut gaps = Vec::new();
    for fold in &folds {
        let m1 = evaluate_fold(&corpus, fold, &EvalOptions::new(ModelDirection::StructureHidden)).unwrap();
        let m2 = evaluate_fold(&corpus, fold, &EvalOptions::new(ModelDirection::SequenceHidden)).unwrap();
        table.insert(
            format!("fold{}", fold.index + 1),
            BTreeMap::from([("model1", format!("{:.4}", m1.mean_q3)), ("model2", format!("{:.4}", m2.mean_q3))]),
        );
        gaps.push(m1.mean_q3 - m2.mean_q3);
    }
    if let Err(e) = within(Duration::from_secs(1), start) {
        return Outcome::Fail(e);
    }
    let json = serde_json::to_string_pretty(&table).unwrap() + "\n";
    if std::env::var_os("SEQHMM_BLESS").is_some() {
        std::fs::create_dir_all(golden_path().parent().unwrap()).unwrap();
        std::fs::write(golden_path(), &json).unwrap();
    }
    let golden = match std::fs::read_to_string(golden_path()) {
        Ok(g) => g,
        Err(e) => return Outcome::Fail(format!("golden file missing ({e}); run with SEQHMM_BLESS=1")),
    };
    if golden != json {
        return Outcome::Fail(format!("fold means drifted from the golden file:\n{json}"));
    }
    let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    let msg = format!(
        "per-fold model1-model2 gaps {:?}, minimum {min_gap:.2} points",
        gaps.iter().map(|g| format!("{g:.2}")).collect::<Vec<_>>()
    );
    if min_gap >= 15.0 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c8_full_corpus() -> Outcome {
    let Some(path) = std::env::var_os("SEQHMM_FULL_CORPUS") else {
        return Outcome::Skipped("SEQHMM_FULL_CORPUS not set; the 507-pair corpus is not distributed".into());
    };
    let start = Instant::now();
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return Outcome::Fail(format!("cannot read {path:?}: {e}")),
    };
    let corpus = match parse_corpus(&text, ParseMode::Strict) {
        Ok(p) => p.corpus,
        Err(e) => return Outcome::Fail(format!("corpus does not parse: {e}")),
    };
    let fold = &corpus.folds(5).unwrap()[0];
    let m1 = evaluate_fold(&corpus, fold, &EvalOptions::new(ModelDirection::StructureHidden)).unwrap().mean_q3;
    let m2 = evaluate_fold(&corpus, fold, &EvalOptions::new(ModelDirection::SequenceHidden)).unwrap().mean_q3;
    if let Err(e) = within(Duration::from_secs(60), start) {
        return Outcome::Fail(e);
    }
    let msg = format!("{} pairs, fold 1: model1 {m1:.2} (47.08 ± 3), model2 {m2:.2} (13.10 ± 3)", corpus.len());
    if (m1 - 47.08).abs() <= 3.0 && (m2 - 13.10).abs() <= 3.0 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c9_gradient_check() -> Outcome {
    let start = Instant::now();
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut with_hidden = 0;
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(70_000 + case);
        let mut sizes = vec![rng.gen_range(1..=6)];
        for _ in 0..rng.gen_range(0..=2) {
            sizes.push(rng.gen_range(1..=5));
        }
        sizes.push(rng.gen_range(1..=4));
        if sizes.len() > 2 {
            with_hidden += 1;
        }
        let net = FeedForwardNet::random(&sizes, 1.0, case).unwrap();
        let x: Vec<f64> = (0..sizes[0]).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t: Vec<f64> = (0..*sizes.last().unwrap()).map(|_| f64::from(rng.gen_range(0..2u8))).collect();
        let (_, grads) = gradient(&net, &x, &t).unwrap();
        let err = |n: &FeedForwardNet| gradient(n, &x, &t).unwrap().0;
        for l in 0..grads.len() {
            for k in 0..grads[l].as_slice().len() {
                let mut plus = net.clone();
                plus.weights_mut()[l].as_mut_slice()[k] += h;
                let mut minus = net.clone();
                minus.weights_mut()[l].as_mut_slice()[k] -= h;
                let numeric = (err(&plus) - err(&minus)) / (2.0 * h);
                let analytic = grads[l].as_slice()[k];
                let r = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
                worst = worst.max(r);
            }
        }
    }
    if let Err(e) = within(Duration::from_secs(5), start) {
        return Outcome::Fail(e);
    }
    let msg = format!("100 nets ({with_hidden} with hidden layers), max relative error {worst:.2e}");
    if worst <= 1e-4 && with_hidden > 0 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

/// Residues A, C, D, E mapped to structures H, G, I, E, position by position.
fn separable_pairs() -> Vec<LabeledPair> {
    let map = |c: char| match c {
        'A' => 'H',
        'C' => 'G',
        'D' => 'I',
        'E' => 'E',
        _ => unreachable!(),
    };
    ["ACDE", "EDCAACDE", "DDAECCEA", "CAEDDEAC"]
        .iter()
        .enumerate()
        .map(|(i, s)| LabeledPair::new(i as u32 + 1, *s, s.chars().map(map).collect::<String>()).unwrap())
        .collect()
}

fn c10_ann_learns_separable() -> Outcome {
    let pairs = separable_pairs();
    let dir = ModelDirection::StructureHidden;
    let w = WindowConfig::for_direction(dir, 1).unwrap();
    let cfg = TrainConfig::default();
    let a = train_ann(&pairs, dir, &w, &cfg).unwrap();
    let b = train_ann(&pairs, dir, &w, &cfg).unwrap();
    if a.model != b.model {
        return Outcome::Fail("two runs with the same seed trained different weights".into());
    }
    if a.model.net.layer_sizes() != [5, 3] {
        return Outcome::Fail(format!("unexpected layer sizes {:?}", a.model.net.layer_sizes()));
    }
    let (mut right, mut total) = (0, 0);
    for p in &pairs {
        let predicted = predict_ann(&a.model, &p.seq).unwrap();
        right += predicted.bytes().zip(p.structure.bytes()).filter(|(x, y)| x == y).count();
        total += p.len();
    }
    let msg = format!("{right}/{total} training positions decoded correctly after {} steps", a.steps);
    if right == total {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c11_directional_ann() -> Outcome {
    let corpus = sample_corpus();
    let cfg = ExperimentConfig {
        methods: vec![Method::Ann],
        ..ExperimentConfig::default()
    };
    let run = run_matrix(&corpus, &cfg).unwrap();
    if !run.report.failures.is_empty() {
        return Outcome::Fail(format!("failed cells: {:?}", run.report.failures));
    }
    let mean = |d: ModelDirection| run.report.summary.iter().find(|s| s.direction == d).unwrap().mean;
    let (m1, m2) = (mean(ModelDirection::StructureHidden), mean(ModelDirection::SequenceHidden));
    let msg = format!("ANN mean Q3 model1 {m1:.2}, model2 {m2:.2}, margin {:.2} points", m1 - m2);
    if m1 > m2 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn c12_determinism() -> Outcome {
    let base = std::env::temp_dir().join(format!("seqhmm-acceptance-{}", std::process::id()));
    let corpus_path = base.join("sample_corpus.txt");
    std::fs::create_dir_all(&base).unwrap();
    std::fs::write(&corpus_path, SAMPLE_CORPUS).unwrap();
    let run = |name: &str| {
        let cfg = ExperimentConfig {
            corpus: corpus_path.clone(),
            parse_mode: ParseMode::Repair,
            output_dir: base.join(name),
            ..ExperimentConfig::default()
        };
        let outcome = run_experiment(&cfg).unwrap();
        let csv = std::fs::read(base.join(name).join("report.csv")).unwrap();
        (outcome.report, csv)
    };
    let (ra, a) = run("a");
    let (rb, b) = run("b");
    let in_memory = report_csv(&ra) == report_csv(&rb);
    let _ = std::fs::remove_dir_all(&base);
    let msg = format!("two full runs ({} rows each), report.csv {} bytes", ra.rows.len(), a.len());
    if a == b && in_memory && ra.rows.len() == 20 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("forward matches brute-force enumeration", c1_forward_oracle),
        ("viterbi is optimal with lexicographic ties", c2_viterbi_optimal),
        ("posteriors match enumeration", c3_posterior),
        ("baum-welch log-likelihood is monotone", c4_em_monotone),
        ("profile forward matches path enumeration", c5_profile),
        ("counting estimator is exact", c6_counting_exact),
        ("model 1 beats model 2 on every sample-corpus fold", c7_directional_hmm),
        ("full-corpus fold 1 reproduction", c8_full_corpus),
        ("backprop gradients match finite differences", c9_gradient_check),
        ("single-layer net learns a separable mapping", c10_ann_learns_separable),
        ("ANN model 1 beats ANN model 2", c11_directional_ann),
        ("repeated runs give byte-identical CSV", c12_determinism),
    ];
    // written to the real stdout so the report shows even when output is captured
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        let line = match check() {
            Outcome::Pass(m) => format!("criterion {n:>2} PASS    {name}: {m}"),
            Outcome::Skipped(m) => format!("criterion {n:>2} SKIPPED {name}: {m}"),
            Outcome::Fail(m) => {
                failed.push(n);
                format!("criterion {n:>2} FAIL    {name}: {m}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn single_pattern_error_never_rises() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = if seed % 2 == 0 { vec![6, 3] } else { vec![6, 4, 3] };
        let mut net = FeedForwardNet::random(&sizes, 0.1, seed).unwrap();
        let x: Vec<f64> = (0..6).map(|_| f64::from(rng.gen_range(0..2u8))).collect();
        let t: Vec<f64> = (0..3).map(|_| f64::from(rng.gen_range(0..2u8))).collect();
        let mut last = f64::INFINITY;
        for _ in 0..500 {
            let e = backprop_step(&mut net, &x, &t, 0.5).unwrap();
            assert!(e <= last + 1e-15, "seed {seed}: error rose from {last} to {e}");
            last = e;
        }
    }
}

#[test]
fn predictions_are_total_and_length_preserving() {
    let corpus = sample_corpus();
    let w = WindowConfig::for_direction(ModelDirection::SequenceHidden, 13).unwrap();
    let cfg = TrainConfig {
        iterations_per_position: 2,
        ..TrainConfig::default()
    };
    let model = train_ann(&corpus.pairs()[..2], ModelDirection::SequenceHidden, &w, &cfg).unwrap().model;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let s: String = (0..rng.gen_range(1..40)).map(|_| STRUCTURES.symbol(rng.gen_range(0..8))).collect();
        let p = predict_ann(&model, &s).unwrap();
        assert_eq!(p.len(), s.len());
        assert!(p.bytes().all(|c| RESIDUES.contains(c)));
    }
}

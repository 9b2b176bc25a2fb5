//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers (run with `-- --nocapture` to see
//! them). Tolerances and runtime budgets are pinned in the asserts.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num::rational::BigRational;

use cocycle_entropy::additive::{self, AdditiveFunction};
use cocycle_entropy::axioms::{self, CandidateEntropy, SampleConfig};
use cocycle_entropy::entropy::{hat_entropy, shannon_entropy, EntropyValue, ProbVector, WeightVector};
use cocycle_entropy::exec;
use cocycle_entropy::mercer::{self, RealSequence};
use cocycle_entropy::potential::{
    bilinearity_residuals, defect_of, hat_from_potential, homogeneity_residual, recover_potential,
    Potential,
};
use cocycle_entropy::rational::{rat, rat_int, reduced_fractions, to_f64};
use cocycle_entropy::sample::{Sampler, DEFAULT_SEED};
use cocycle_entropy::tree::{
    cocycle_residual, enumerate_shapes, flatten, shape_leaves, shape_with_weights, tree_entropy,
    Grouping,
};

fn shannon_hat(w: &WeightVector) -> cocycle_entropy::Result<f64> {
    hat_entropy(w).map(EntropyValue::bits)
}

fn budget(start: Instant, limit: Duration, what: &str) -> Duration {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{what} took {elapsed:?}, over the {limit:?} budget"
    );
    elapsed
}

#[test]
fn criterion_01_normalization() {
    let start = Instant::now();
    let hat = hat_entropy(&WeightVector::from_integers(&[1, 1]))
        .unwrap()
        .bits();
    let h = shannon_entropy(&ProbVector::from_floats(vec![0.5, 0.5]).unwrap())
        .unwrap()
        .bits();
    let elapsed = budget(start, Duration::from_millis(1), "normalization");
    assert!((hat - 2.0).abs() <= 1e-12, "hat(1,1) = {hat}");
    assert!((h - 1.0).abs() <= 1e-12, "H(1/2,1/2) = {h}");
    println!(
        "criterion 01 normalization: PASS (hat(1,1) = {hat}, H(1/2,1/2) = {h}, {elapsed:?})"
    );
}

#[test]
fn criterion_02_cocycle_suite() {
    let start = Instant::now();
    let mut sampler = Sampler::new(DEFAULT_SEED);
    let groupings: Vec<Grouping> = (0..1000).map(|_| sampler.grouping(8, 8, 100, 100)).collect();
    let residuals = exec::map_collect(&groupings, |g| cocycle_residual(g).unwrap().abs());
    let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
    let elapsed = budget(start, Duration::from_secs(5), "cocycle suite");
    assert!(worst <= 1e-9, "worst residual {worst}");
    println!("criterion 02 cocycle suite: PASS (1000 groupings, max |residual| = {worst:.3e}, {elapsed:?})");
}

#[test]
fn criterion_03_tree_shape_independence() {
    let start = Instant::now();
    let mut shapes = Vec::new();
    for leaves in 1..=6 {
        shapes.extend(enumerate_shapes(leaves));
    }
    assert_eq!(shapes.len(), 258);
    let worst_per_shape = exec::map_collect(&shapes, |shape| {
        let leaves = shape_leaves(shape);
        let index = shapes
            .iter()
            .position(|s| std::ptr::eq(s, shape))
            .unwrap_or_default();
        let mut sampler = Sampler::with_stream(DEFAULT_SEED, 1000 + index as u64);
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let weights: Vec<BigRational> = (0..leaves)
                .map(|_| rat_int(sampler.gen_range_usize(1, 5) as i64))
                .collect();
            let t = shape_with_weights(shape, &weights).unwrap();
            let nested = tree_entropy(&t).unwrap().bits();
            let flat = hat_entropy(&flatten(&t)).unwrap().bits();
            worst = worst.max((nested - flat).abs());
        }
        worst
    });
    let worst = worst_per_shape.iter().cloned().fold(0.0f64, f64::max);
    let elapsed = budget(start, Duration::from_secs(30), "tree-shape independence");
    assert!(worst <= 1e-9, "worst residual {worst}");
    println!(
        "criterion 03 tree shapes: PASS (258 shapes x 500 assignments, max |residual| = {worst:.3e}, {elapsed:?})"
    );
}

#[test]
fn criterion_04_potential_round_trip() {
    let start = Instant::now();

    // recovered g matches u on the full p,q <= 50 grid
    let pairs: Vec<(u64, u64)> = (1..=50u64)
        .flat_map(|p| (1..=50u64).map(move |q| (p, q)))
        .collect();
    let drifts = exec::map_collect(&pairs, |&(p, q)| {
        let x = rat(p as i64, q as i64);
        let recovered = recover_potential(shannon_hat, &x).unwrap();
        (recovered - cocycle_entropy::entropy::u(to_f64(&x)).unwrap()).abs()
    });
    let worst_grid = drifts.iter().cloned().fold(0.0f64, f64::max);
    assert!(worst_grid <= 1e-8, "worst grid drift {worst_grid}");

    // the recovered potential reproduces hat on seeded vectors; entries of
    // a vector share a denominator so the ladder at the total stays short
    let recovered = Potential::new("recovered", |q| {
        recover_potential(shannon_hat, q).expect("recoverable")
    })
    .unwrap();
    let mut sampler = Sampler::with_stream(DEFAULT_SEED, 2000);
    let vectors: Vec<WeightVector> = (0..500)
        .map(|_| {
            let len = sampler.gen_range_usize(1, 5);
            let denom = sampler.gen_range_usize(1, 20) as i64;
            let entries: Vec<BigRational> = (0..len)
                .map(|_| rat(sampler.gen_range_usize(1, 20) as i64, denom))
                .collect();
            WeightVector::new(entries).unwrap()
        })
        .collect();
    let drifts = exec::map_collect(&vectors, |w| {
        let rebuilt = hat_from_potential(&recovered, w).unwrap().bits();
        (rebuilt - hat_entropy(w).unwrap().bits()).abs()
    });
    let worst_vectors = drifts.iter().cloned().fold(0.0f64, f64::max);
    let elapsed = budget(start, Duration::from_secs(30), "potential round trip");
    assert!(worst_vectors <= 1e-8, "worst vector drift {worst_vectors}");
    println!(
        "criterion 04 potential round trip: PASS (grid drift {worst_grid:.3e}, vector drift {worst_vectors:.3e}, {elapsed:?})"
    );
}

#[test]
fn criterion_05_defect_and_bilinearity() {
    let start = Instant::now();
    let u_pot = Potential::shannon_u();
    let d = defect_of(&u_pot);
    let grid = reduced_fractions(30);

    let worst_defect = {
        let per_a = exec::map_collect(&grid, |a| {
            grid.iter()
                .map(|b| d.eval(a, b).abs())
                .fold(0.0f64, f64::max)
        });
        per_a.iter().cloned().fold(0.0f64, f64::max)
    };
    assert!(worst_defect <= 1e-9, "worst |D| {worst_defect}");

    // bilinearity over an exhaustive subgrid plus seeded triples from the grid
    let mut triples: Vec<(BigRational, BigRational, BigRational)> = Vec::new();
    let subgrid = reduced_fractions(6);
    for a in &subgrid {
        for b1 in &subgrid {
            for b2 in &subgrid {
                triples.push((a.clone(), b1.clone(), b2.clone()));
            }
        }
    }
    let mut sampler = Sampler::with_stream(DEFAULT_SEED, 3000);
    for _ in 0..3000 {
        let pick = |s: &mut Sampler| grid[s.gen_range_usize(0, grid.len() - 1)].clone();
        triples.push((pick(&mut sampler), pick(&mut sampler), pick(&mut sampler)));
    }
    let worst_bilinear = bilinearity_residuals(&d, &triples)
        .into_iter()
        .map(f64::abs)
        .fold(0.0f64, f64::max);
    assert!(worst_bilinear <= 1e-9, "worst bilinearity {worst_bilinear}");

    // the toy potential breaks both checks with residual exactly 5 at (2,1,1)
    let toy = Potential::new("(x-1)^2", |a| {
        let t = to_f64(a) - 1.0;
        t * t
    })
    .unwrap();
    let one = rat_int(1);
    let homog = homogeneity_residual(&toy, &rat_int(2), &one, &one);
    assert_eq!(homog, 5.0);
    let bilin = bilinearity_residuals(&defect_of(&toy), &[(rat_int(2), one.clone(), one)]);
    assert_eq!(bilin, vec![5.0]);

    let elapsed = budget(start, Duration::from_secs(10), "defect and bilinearity");
    println!(
        "criterion 05 defect/bilinearity: PASS (|D| <= {worst_defect:.3e} on {} rationals, bilinearity <= {worst_bilinear:.3e} on {} triples, toy residual 5 exact, {elapsed:?})",
        grid.len(),
        triples.len()
    );
}

#[test]
fn criterion_06_bridge_identity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for l in AdditiveFunction::builtins() {
        let residuals = exec::map_range(1, 10_000, |n| {
            additive::bridge_identity_residual(&l, n).unwrap().abs()
        });
        let w = residuals.into_iter().fold(0.0f64, f64::max);
        assert!(w <= 1e-12, "{}: worst residual {w}", l.name());
        worst = worst.max(w);
    }
    let elapsed = budget(start, Duration::from_secs(10), "bridge identity");
    println!("criterion 06 bridge identity: PASS (3 built-ins, n <= 1e4, max |residual| = {worst:.3e}, {elapsed:?})");
}

#[test]
fn criterion_07_erdos_diagnostic() {
    let start = Instant::now();
    let d = additive::erdos_diagnostic(&AdditiveFunction::log2(), 100_000).unwrap();
    let c_expected = 1.0 / std::f64::consts::LN_2;
    assert!(
        (d.fitted_c - c_expected).abs() <= 1e-6,
        "fitted_c = {}",
        d.fitted_c
    );
    assert!(d.max_fit_residual <= 1e-6, "fit residual {}", d.max_fit_residual);

    let nu2 = AdditiveFunction::nu2();
    let mut tails = Vec::new();
    for n in [1_000u64, 10_000, 100_000] {
        let diag = additive::erdos_diagnostic(&nu2, n).unwrap();
        assert!(diag.tail_sup >= 1.0, "nu2 tail_sup {} at N = {n}", diag.tail_sup);
        tails.push(diag.tail_sup);
    }
    let elapsed = budget(start, Duration::from_secs(60), "erdos diagnostic");
    println!(
        "criterion 07 erdos diagnostic: PASS (fitted_c = {:.9}, fit residual {:.3e}, nu2 tails {tails:?}, {elapsed:?})",
        d.fitted_c, d.max_fit_residual
    );
}

#[test]
fn criterion_08_mercer() {
    let start = Instant::now();
    // constant sequences map to the constant 2c, exactly
    for c in [5.0, 0.5, -3.0] {
        let t = mercer::mercer_transform(&RealSequence::constant(c));
        for n in [1u64, 10, 1000] {
            assert_eq!(t.eval(n), 2.0 * c, "c = {c}, n = {n}");
        }
    }
    // 1/n transformed at n = 1e4
    let t = mercer::mercer_transform(&RealSequence::reciprocal());
    let v = t.eval(10_000);
    assert!(v <= 2e-3, "1/n transform at 1e4: {v}");
    // difference sequences at N = 1e5
    let log_probe = mercer::delta_mercer(&AdditiveFunction::log2(), 100_000).unwrap();
    assert!(
        log_probe.tail_sup_deviation <= 1e-3,
        "log2 deviation {}",
        log_probe.tail_sup_deviation
    );
    let nu_probe = mercer::delta_mercer(&AdditiveFunction::nu2(), 100_000).unwrap();
    assert!(
        nu_probe.tail_sup_deviation >= 0.5,
        "nu2 deviation {}",
        nu_probe.tail_sup_deviation
    );
    let elapsed = budget(start, Duration::from_secs(60), "mercer");
    println!(
        "criterion 08 mercer: PASS (1/n @ 1e4 = {v:.3e}, log2 dev {:.3e}, nu2 dev {:.2}, {elapsed:?})",
        log_probe.tail_sup_deviation, nu_probe.tail_sup_deviation
    );
}

#[test]
fn criterion_09_axiom_matrix() {
    let start = Instant::now();
    let cfg = SampleConfig::default();
    assert_eq!(cfg.seed, DEFAULT_SEED);

    let shannon = axioms::run_suite(&CandidateEntropy::shannon(), &cfg);
    assert!(shannon.all_pass(), "shannon report: {shannon:?}");

    let mut failures = Vec::new();
    for c in [
        CandidateEntropy::renyi(0.5).unwrap(),
        CandidateEntropy::renyi(2.0).unwrap(),
        CandidateEntropy::tsallis(2.0).unwrap(),
    ] {
        let report = axioms::run_suite(&c, &cfg);
        let cocycle = &report.axioms[2];
        assert_eq!(cocycle.name, "cocycle");
        assert!(!cocycle.pass, "{} should fail the cocycle axiom", c.name());
        assert!(
            cocycle.max_residual >= 1e-2,
            "{} cocycle residual {}",
            c.name(),
            cocycle.max_residual
        );
        failures.push(format!("{} {:.3}", c.name(), cocycle.max_residual));
    }

    let scaled = axioms::run_suite(&CandidateEntropy::scaled_shannon(2.0), &cfg);
    for (i, a) in scaled.axioms.iter().enumerate() {
        if a.name == "normalized" {
            assert!(!a.pass, "scaled-shannon must fail normalization");
            assert_eq!(a.max_residual, 2.0);
        } else {
            assert!(a.pass, "scaled-shannon unexpectedly failed {} ({i})", a.name);
        }
    }

    // byte-stable report under a fixed config
    let again = axioms::run_suite(&CandidateEntropy::shannon(), &cfg);
    assert_eq!(
        serde_json::to_string(&shannon).unwrap(),
        serde_json::to_string(&again).unwrap()
    );

    let elapsed = budget(start, Duration::from_secs(60), "axiom matrix");
    println!(
        "criterion 09 axiom matrix: PASS (shannon clean, cocycle failures [{}], scaled-shannon normalization only, byte-stable, {elapsed:?})",
        failures.join(", ")
    );
}

/// Runs the binary, holding every invocation to the given response budget.
fn run_cli_within(args: &[&str], limit: Duration) -> Output {
    let start = Instant::now();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cocycle-entropy"));
    cmd.env_remove("COCYCLE_ENTROPY_SEED");
    let out = cmd.args(args).output().expect("binary runs");
    budget(start, limit, &format!("cli {args:?}"));
    out
}

fn run_cli(args: &[&str]) -> Output {
    run_cli_within(args, Duration::from_secs(1))
}

fn cli_code(args: &[&str]) -> i32 {
    run_cli(args).status.code().expect("no signal")
}

fn assert_stable(first: &Output, args: &[&str], limit: Duration) {
    let second = run_cli_within(args, limit);
    assert_eq!(first.status.code(), second.status.code(), "{args:?}");
    assert_eq!(first.stdout, second.stdout, "unstable stdout for {args:?}");
}

#[test]
fn criterion_10_cli_contract() {
    let dir = tempfile::tempdir().unwrap();
    let tree_path = dir.path().join("t.json");
    std::fs::write(&tree_path, r#"{"children":[{"w":"1"},{"w":"2"},{"w":"3"}]}"#).unwrap();
    let tree_arg = tree_path.display().to_string();
    let bad_tree = dir.path().join("bad.json");
    std::fs::write(&bad_tree, r#"{"w": 2.5}"#).unwrap();
    let bad_tree_arg = bad_tree.display().to_string();

    // every invocation below must respond within 1 s
    let worked = run_cli(&["entropy", "1/2", "1/4", "1/4"]);
    assert_eq!(worked.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&worked.stdout), "1.50000000000\n");

    assert_eq!(cli_code(&["entropy", "bogus"]), 2);
    assert_eq!(cli_code(&["entropy", "0"]), 3);
    assert_eq!(cli_code(&["tree", &bad_tree_arg]), 2);
    assert_eq!(cli_code(&["potential", "nope", "3"]), 2);
    assert_eq!(cli_code(&["additive", "nope", "64"]), 2);
    assert_eq!(cli_code(&["additive", "log2", "20000000"]), 3);
    assert_eq!(cli_code(&["mercer", "log2", "5"]), 3);

    assert_stable(&worked, &["entropy", "1/2", "1/4", "1/4"], Duration::from_secs(1));
    for args in [
        vec!["tree", tree_arg.as_str()],
        vec!["potential", "shannon", "4"],
        vec!["additive", "log2", "64"],
        vec!["mercer", "nu2", "64"],
    ] {
        let first = run_cli(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_stable(&first, &args, Duration::from_secs(1));
    }

    // the axiom matrix runs 500 samples per axiom and shares the report
    // suite's 60 s envelope rather than the 1 s response budget
    let sixty = Duration::from_secs(60);
    let shannon = run_cli_within(&["axioms", "shannon", "--format", "json"], sixty);
    assert_eq!(shannon.status.code(), Some(0));
    assert_stable(&shannon, &["axioms", "shannon", "--format", "json"], sixty);
    let renyi = run_cli_within(&["axioms", "renyi", "--alpha", "2"], sixty);
    assert_eq!(renyi.status.code(), Some(1));
    assert_eq!(cli_code(&["axioms", "nope"]), 2);

    println!("criterion 10 cli contract: PASS (six subcommands, documented exit codes, byte-stable output, every fast invocation under 1 s)");
}

//! Acceptance suite. One test per criterion; each prints a PASS/FAIL line
//! with its elapsed time (run with `--nocapture` to see them).
//!
//! Criterion 8 asserts the pinned figure-reproduction claims exactly as
//! stated, including the 1e-3 crossing-coincidence/ordering margins for the
//! one-angle family. Both the closed forms and the dense oracle (which
//! agree to ~1e-13) place those crossings ~5e-2 apart, so the two 1e-3
//! sub-checks fail; the test reports the measured spreads. The relative
//! claims (four-level spread strictly larger, support-size dominance) hold
//! and are asserted too.

use quditmem::algebra::{
    commutation_phase, gen_pauli, sigma_shift, unitarity_defect, PauliIndex, QuditDim,
};
use quditmem::analysis::{
    find_crossover, mu_grid, validate, ChannelSpec, Crossing, CurveSpec,
};
use quditmem::closed;
use quditmem::noise::{CorrelatedChannel, PauliProbTable};
use quditmem::oracle::{
    apply_channel, apply_channel_brute, eigenvalues_desc, holevo_mutual_info, DensityMatrix,
    EnsembleSpec, StateFamily,
};
use quditmem::{c64, CMat64, CVec64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Mutex;
use std::time::Instant;

// The runtime budgets below assume the criteria do not compete for cores.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn dim(n: usize) -> QuditDim {
    QuditDim::new(n).unwrap()
}

fn random_table(rng: &mut ChaCha8Rng, d: usize) -> PauliProbTable<f64> {
    let n = d as f64;
    let w: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let total = w[0] + (n - 1.0) * w[1] + (n - 1.0) * w[2] + (n - 1.0) * (n - 1.0) * w[3];
    PauliProbTable::general(
        dim(d),
        w[0] / total,
        w[1] / total,
        w[2] / total,
        w[3] / total,
    )
    .unwrap()
}

fn random_pure(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix<f64> {
    let block = dim(d).block_dim();
    let mut amps = CVec64::zeros(block);
    for i in 0..block {
        amps[i] = c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    }
    let norm = amps.norm();
    let amps = amps.map(|z| z.unscale(norm));
    DensityMatrix::new(dim(d), &amps * amps.adjoint()).unwrap()
}

fn report(criterion: usize, what: &str, started: Instant, budget_s: Option<f64>) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance criterion {criterion} ({what}): PASS [{elapsed:.2}s]");
    if let Some(budget) = budget_s {
        assert!(
            elapsed < budget,
            "criterion {criterion} exceeded its {budget}s budget: {elapsed:.2}s"
        );
    }
}

#[test]
fn criterion_1_algebra_suite() {
    let _guard = serial();
    let t0 = Instant::now();
    for d in 2..=5usize {
        let dd = dim(d);
        // Unitarity of every U[m,n].
        for m in 0..d {
            for n in 0..d {
                let u = gen_pauli::<f64>(dd, PauliIndex::new(m, n)).unwrap();
                assert!(unitarity_defect(&u) <= 1e-12, "d={d} ({m},{n})");
            }
        }
        // Shift to the d-th power is the identity.
        let sigma = sigma_shift::<f64>(dd);
        let mut acc = CMat64::identity(d, d);
        for _ in 0..d {
            acc = &sigma * acc;
        }
        assert!((acc - CMat64::identity(d, d)).norm() <= 1e-12);
        // Commutation phases match explicit matrix products for all pairs.
        for ma in 0..d {
            for na in 0..d {
                let a = PauliIndex::new(ma, na);
                let ua = gen_pauli::<f64>(dd, a).unwrap();
                for mb in 0..d {
                    for nb in 0..d {
                        let b = PauliIndex::new(mb, nb);
                        let ub = gen_pauli::<f64>(dd, b).unwrap();
                        let phi = commutation_phase::<f64>(dd, a, b).unwrap();
                        let lhs = &ua * &ub;
                        let rhs = (&ub * &ua).map(|z| z * phi);
                        assert!((lhs - rhs).norm() <= 1e-12, "d={d} {a:?} {b:?}");
                    }
                }
            }
        }
    }
    report(1, "algebra suite", t0, Some(5.0));
}

#[test]
fn criterion_2_kraus_completeness() {
    let _guard = serial();
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for d in [2usize, 3] {
        for _ in 0..25 {
            let table = random_table(&mut rng, d);
            let mu: f64 = rng.gen();
            let ch = CorrelatedChannel::new(table, mu).unwrap();
            let block = dim(d).block_dim();
            let mut acc = CMat64::zeros(block, block);
            for term in ch.kraus_terms() {
                let op = term.matrix(dim(d)).unwrap();
                acc += op.adjoint() * op;
            }
            assert!(
                (&acc - CMat64::identity(block, block)).norm() <= 1e-10,
                "d={d} mu={mu}"
            );
            if d == 2 {
                let rho = random_pure(&mut rng, 2);
                let fast = apply_channel(&ch, &rho).unwrap();
                let brute = apply_channel_brute(&ch, &rho).unwrap();
                assert!((fast.matrix() - brute.matrix()).norm() <= 1e-12);
            }
        }
    }
    report(2, "Kraus completeness", t0, Some(30.0));
}

#[test]
fn criterion_3_channel_sanity() {
    let _guard = serial();
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (d, cases) in [(2usize, 40usize), (3, 40), (4, 20)] {
        for _ in 0..cases {
            let table = random_table(&mut rng, d);
            let mu: f64 = rng.gen();
            let ch = CorrelatedChannel::new(table, mu).unwrap();
            let rho = random_pure(&mut rng, d);
            let out = apply_channel(&ch, &rho).unwrap();
            assert!((out.trace() - 1.0).abs() <= 1e-10);
            assert!(out.hermiticity_defect() <= 1e-10);
            // PSD within the -1e-9 clamp; eigenvalue extraction errors out
            // below it.
            eigenvalues_desc(&out).unwrap();
            // Unital fixed point.
            let mixed = DensityMatrix::<f64>::maximally_mixed(dim(d));
            let fixed = apply_channel(&ch, &mixed).unwrap();
            let defect = (fixed.matrix() - mixed.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            assert!(defect <= 1e-10);
        }
    }
    report(3, "channel sanity", t0, Some(60.0));
}

#[test]
fn criterion_4_capacity_endpoint_full_memory() {
    let _guard = serial();
    let t0 = Instant::now();
    let d = dim(4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tables = [
        PauliProbTable::quasi_classical(d, 0.15).unwrap(),
        PauliProbTable::depolarizing(d, 0.7).unwrap(),
        PauliProbTable::high_error(d),
        random_table(&mut rng, 4),
    ];
    for table in tables {
        let closed = closed::mi_max_entangled(&table, 1.0).unwrap().value;
        assert!((closed - 8.0).abs() <= 1e-9, "closed form: {closed}");
        let ch = CorrelatedChannel::new(table, 1.0).unwrap();
        let ens = EnsembleSpec::new(d, StateFamily::<f64>::MaxEntangledBasis);
        let oracle = holevo_mutual_info(&ch, &ens).unwrap().value;
        assert!((oracle - 8.0).abs() <= 1e-9, "oracle: {oracle}");
    }
    report(4, "full-memory capacity endpoint", t0, Some(30.0));
}

#[test]
fn criterion_5_high_error_closed_forms() {
    let _guard = serial();
    let t0 = Instant::now();
    let table = PauliProbTable::<f64>::high_error(dim(2));
    let me = closed::mi_max_entangled(&table, 0.5).unwrap().value;
    assert!((me - 0.4512050593046014).abs() <= 1e-9);
    let pro = closed::mi_product(&table, 0.5).unwrap().value;
    assert!((pro - 0.1887218755408671).abs() <= 1e-9);
    // The support-size forms reproduce both at k = 1 and k = d.
    assert!((closed::mi_high_error_k(dim(2), 0.5, 1).unwrap().value - me).abs() <= 1e-12);
    assert!((closed::mi_high_error_k(dim(2), 0.5, 2).unwrap().value - pro).abs() <= 1e-12);
    // Zero memory: both vanish.
    assert!(closed::mi_max_entangled(&table, 0.0).unwrap().value.abs() <= 1e-12);
    assert!(closed::mi_product(&table, 0.0).unwrap().value.abs() <= 1e-12);
    report(5, "very-high-error closed forms", t0, None);
}

#[test]
fn criterion_6_oracle_agreement_and_errata() {
    let _guard = serial();
    let t0 = Instant::now();
    let rep = validate(7, 1e-8, 20).unwrap();
    for entry in &rep.entries {
        assert!(
            entry.pass,
            "{} at d={} deviates by {:.3e}",
            entry.formula, entry.d, entry.max_abs_err
        );
    }
    // Every uncorrected variant that actually deviates must be documented
    // in ERRATA.md, and its corrected counterpart must sit at float noise.
    let errata = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../ERRATA.md"
    ))
    .expect("ERRATA.md is part of the repository");
    for variant in &rep.printed_variants {
        assert!(variant.as_printed_max_err > 1e-6, "{}", variant.erratum);
        assert!(variant.corrected_max_err <= 1e-8, "{}", variant.erratum);
        assert!(
            errata.contains(&variant.erratum),
            "ERRATA.md is missing {}",
            variant.erratum
        );
        assert!(
            errata.contains(&variant.formula),
            "ERRATA.md does not name {}",
            variant.formula
        );
    }
    assert!(rep.kraus_paths_max_err <= 1e-12);
    report(6, "oracle agreement + errata", t0, Some(180.0));
}

#[test]
fn criterion_7_fidelity_threshold_suite() {
    let _guard = serial();
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut interior = 0;
    for i in 0..20 {
        let d = 2 + (i % 4);
        let p: f64 = rng.gen();
        let q = (1.0 - p) / ((d * d - 1) as f64);
        let table = PauliProbTable::depolarizing(dim(d), p).unwrap();
        match closed::fid_threshold_mu(p, q, d).unwrap() {
            closed::FidelityThreshold::Value(mu_t) if (0.0..=1.0).contains(&mu_t) => {
                let gap = closed::fid_max_entangled(&table, mu_t).unwrap()
                    - closed::fid_product(&table, mu_t).unwrap();
                assert!(gap.abs() <= 1e-9, "d={d} p={p}: gap {gap:.3e}");
                interior += 1;
            }
            _ => {}
        }
    }
    assert!(interior > 0, "no interior thresholds sampled");

    // Exactly zero at the symmetric point p = q.
    for d in 2..=5usize {
        let p = 1.0 / ((d * d) as f64);
        match closed::fid_threshold_mu(p, p, d).unwrap() {
            closed::FidelityThreshold::Value(v) => assert_eq!(v, 0.0, "d={d}"),
            other => panic!("d={d}: {other:?}"),
        }
    }

    // Decreasing in d at fixed small q.
    let q = 0.01;
    let mut last = f64::INFINITY;
    for d in 2..=5usize {
        let p = 1.0 - ((d * d - 1) as f64) * q;
        let mu_t = match closed::fid_threshold_mu(p, q, d).unwrap() {
            closed::FidelityThreshold::Value(v) => v,
            other => panic!("d={d}: {other:?}"),
        };
        assert!(mu_t < last, "d={d}: {mu_t} !< {last}");
        last = mu_t;
    }
    report(7, "fidelity memory threshold", t0, None);
}

/// Interior crossing of two curves, as a bare `mu`.
fn crossing_mu(channel: &ChannelSpec, a: CurveSpec, b: CurveSpec, grid: &[f64]) -> Option<f64> {
    match find_crossover(channel, a, b, grid).unwrap().crossing {
        Crossing::Interior { mu, .. } => Some(mu),
        _ => None,
    }
}

/// Largest distance from the product/max-ent crossing among the crossings
/// of the given interpolating curves with the two solid curves.
fn family_spread(channel: &ChannelSpec, curves: &[CurveSpec], grid: &[f64]) -> (f64, f64) {
    let mu_t = crossing_mu(channel, CurveSpec::MaxEnt, CurveSpec::Product, grid)
        .expect("solid curves cross");
    let mut spread = 0.0f64;
    for &curve in curves {
        for solid in [CurveSpec::Product, CurveSpec::MaxEnt] {
            let mu = crossing_mu(channel, curve, solid, grid)
                .expect("interpolating curve crosses both solids");
            spread = spread.max((mu - mu_t).abs());
        }
    }
    (mu_t, spread)
}

#[test]
fn criterion_8_figure_reproduction() {
    let _guard = serial();
    let t0 = Instant::now();
    let grid: Vec<f64> = mu_grid(201);
    let alpha_curves = |n1: f64, n2: f64| {
        [
            CurveSpec::Alpha {
                cos2: 1.0 / n1.sqrt(),
            },
            CurveSpec::Alpha {
                cos2: 1.0 / n2.sqrt(),
            },
        ]
    };
    let km_curves = |n1: f64, n2: f64| {
        [
            CurveSpec::Km {
                cos2: 1.0 / n1.sqrt(),
            },
            CurveSpec::Km {
                cos2: 1.0 / n2.sqrt(),
            },
        ]
    };
    let mut failures: Vec<String> = Vec::new();

    // fig1/fig3: strict interleaving outside 1e-3 of the crossover, and
    // coincidence of every interpolating-curve crossing with mu_t to 1e-3.
    for (name, channel, curves) in [
        (
            "fig1",
            ChannelSpec::QuasiClassical { d: 4, p: 0.15 },
            alpha_curves(1.25, 2.0),
        ),
        (
            "fig3",
            ChannelSpec::Depolarizing { d: 4, p: 0.7 },
            alpha_curves(1.25, 2.0),
        ),
    ] {
        let (mu_t, spread) = family_spread(&channel, &curves, &grid);
        println!("{name}: mu_t = {mu_t:.6}, one-angle crossing spread = {spread:.4}");
        if spread > 1e-3 {
            failures.push(format!(
                "{name}: one-angle crossings deviate from mu_t by up to {spread:.4} (> 1e-3)"
            ));
        }
        let mut ordering_ok = true;
        let mut worst: Option<(f64, String)> = None;
        for &mu in &grid {
            if (mu - mu_t).abs() <= 1e-3 {
                continue;
            }
            let pro = CurveSpec::Product.eval(&channel, mu).unwrap();
            let me = CurveSpec::MaxEnt.eval(&channel, mu).unwrap();
            let mids: Vec<f64> = curves
                .iter()
                .map(|c| c.eval(&channel, mu).unwrap())
                .collect();
            let (hi, lo) = if mu < mu_t { (pro, me) } else { (me, pro) };
            let ok = mids.iter().all(|&v| v <= hi && v >= lo) && hi > lo;
            if !ok {
                ordering_ok = false;
                worst = Some((mu, format!("pro={pro:.6} me={me:.6} mids={mids:?}")));
                break;
            }
        }
        if !ordering_ok {
            let (mu, detail) = worst.unwrap();
            failures.push(format!(
                "{name}: interleaving broken at mu={mu:.4}: {detail}"
            ));
        }
    }

    // fig2/fig4: the four-level crossings are measurably non-coincident and
    // spread strictly wider than the one-angle family on the same channel.
    for (name, channel, km, alpha) in [
        (
            "fig2",
            ChannelSpec::QuasiClassical { d: 4, p: 0.2 },
            km_curves(2.0, 4.0),
            alpha_curves(1.25, 2.0),
        ),
        (
            "fig4",
            ChannelSpec::Depolarizing { d: 4, p: 0.7 },
            km_curves(2.0, 5.0),
            alpha_curves(1.25, 2.0),
        ),
    ] {
        let (_, km_spread) = family_spread(&channel, &km, &grid);
        let (_, alpha_spread) = family_spread(&channel, &alpha, &grid);
        println!(
            "{name}: four-level spread = {km_spread:.4}, one-angle spread = {alpha_spread:.4}"
        );
        assert!(
            km_spread > 1e-3,
            "{name}: four-level crossings unexpectedly coincide"
        );
        assert!(
            km_spread > alpha_spread,
            "{name}: four-level spread not larger than one-angle spread"
        );
    }

    // fig5: support-size dominance on (0, 1], strict at mu = 1.
    let high = ChannelSpec::HighError { d: 4 };
    for &mu in grid.iter().skip(1) {
        let vals: Vec<f64> = (1..=4)
            .map(|k| CurveSpec::KSupport { k }.eval(&high, mu).unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[0] >= w[1] - 1e-12, "fig5 ordering broken at mu={mu}");
        }
    }
    let at_one: Vec<f64> = (1..=4)
        .map(|k| CurveSpec::KSupport { k }.eval(&high, 1.0).unwrap())
        .collect();
    for w in at_one.windows(2) {
        assert!(w[0] > w[1] + 1e-9, "fig5 ordering not strict at mu=1");
    }

    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "figure suite exceeded 2 minutes");
    if failures.is_empty() {
        println!("acceptance criterion 8 (figure reproduction): PASS [{elapsed:.2}s]");
    } else {
        println!("acceptance criterion 8 (figure reproduction): FAIL [{elapsed:.2}s]");
        for f in &failures {
            println!("  {f}");
        }
        panic!(
            "stated 1e-3 sub-criteria do not hold for the closed forms (which \
             match the dense oracle to ~1e-13): {failures:?}"
        );
    }
}

#[test]
fn criterion_9_determinism() {
    let _guard = serial();
    let t0 = Instant::now();
    let bin = env!("CARGO_BIN_EXE_quditmem");
    let tmp = tempfile::tempdir().unwrap();

    let run_validate = || {
        let out = tmp.path().join("report.json");
        let output = std::process::Command::new(bin)
            .args(["validate", "--seed", "7", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(output.status.success(), "{output:?}");
        (output.stdout, std::fs::read(out).unwrap())
    };
    let (stdout_a, json_a) = run_validate();
    let (stdout_b, json_b) = run_validate();
    assert_eq!(stdout_a, stdout_b, "validate stdout differs across runs");
    assert_eq!(json_a, json_b, "validate JSON differs across runs");

    for fig in ["fig1", "fig2", "fig3", "fig4", "fig5"] {
        let run_figure = |tag: &str| {
            let out = tmp.path().join(format!("{fig}-{tag}.csv"));
            let output = std::process::Command::new(bin)
                .args(["figure", fig, "--out", out.to_str().unwrap()])
                .output()
                .unwrap();
            assert!(output.status.success(), "{fig}: {output:?}");
            std::fs::read(out).unwrap()
        };
        assert_eq!(run_figure("a"), run_figure("b"), "{fig} differs across runs");
    }
    report(9, "determinism", t0, None);
}

//! Parameter sweeps, crossover-threshold finding, and the seeded
//! closed-form-vs-oracle validation harness.

use crate::algebra::QuditDim;
use crate::closed::{self, FidelityThreshold};
use crate::error::{Error, Result};
use crate::noise::{CorrelatedChannel, PauliProbTable};
use crate::num::{r, Real};
use crate::oracle::{
    self, apply_channel, apply_channel_brute, fidelity, holevo_mutual_info, DensityMatrix,
    EnsembleSpec, StateFamily,
};
use crate::states::{alpha_from_cos2, DiagonalCoeffs};
use crate::num::c64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Number of points of the default memory-parameter grid.
pub const DEFAULT_GRID_POINTS: usize = 201;
/// Oracle spot-checks per sweep curve.
pub const DEFAULT_SPOT_CHECKS: usize = 5;
/// Closed-form-vs-oracle tolerance used by sweeps and validation.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Uniform grid over `[0, 1]` with the given number of points.
pub fn mu_grid<T: Real>(points: usize) -> Vec<T> {
    assert!(points >= 2, "grid needs at least the two endpoints");
    let step = T::one() / r::<T>((points - 1) as f64);
    (0..points)
        .map(|i| (r::<T>(i as f64) * step).min(T::one()))
        .collect()
}

/// Channel family together with the parameters that pin its table down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ChannelSpec {
    #[serde(rename = "quasi-classical")]
    QuasiClassical { d: usize, p: f64 },
    #[serde(rename = "depolarizing")]
    Depolarizing { d: usize, p: f64 },
    #[serde(rename = "high-error")]
    HighError { d: usize },
    #[serde(rename = "general")]
    General {
        d: usize,
        p: f64,
        q: f64,
        r: f64,
        t: f64,
    },
}

impl ChannelSpec {
    pub fn d(&self) -> usize {
        match *self {
            ChannelSpec::QuasiClassical { d, .. }
            | ChannelSpec::Depolarizing { d, .. }
            | ChannelSpec::HighError { d }
            | ChannelSpec::General { d, .. } => d,
        }
    }

    pub fn table<T: Real>(&self) -> Result<PauliProbTable<T>> {
        match *self {
            ChannelSpec::QuasiClassical { d, p } => {
                PauliProbTable::quasi_classical(QuditDim::new(d)?, r(p))
            }
            ChannelSpec::Depolarizing { d, p } => {
                PauliProbTable::depolarizing(QuditDim::new(d)?, r(p))
            }
            ChannelSpec::HighError { d } => Ok(PauliProbTable::high_error(QuditDim::new(d)?)),
            ChannelSpec::General { d, p, q, r: rr, t } => {
                PauliProbTable::general(QuditDim::new(d)?, r(p), r(q), r(rr), r(t))
            }
        }
    }
}

/// One curve of a sweep: which input family, with which parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveSpec {
    MaxEnt,
    Product,
    /// One-angle interpolating family, parameterized by `cos^2 alpha`.
    Alpha { cos2: f64 },
    /// Four-level interpolating family, parameterized by `cos^2 theta`.
    Km { cos2: f64 },
    /// Very-high-error support-size curve.
    KSupport { k: usize },
}

impl CurveSpec {
    /// Self-describing column label.
    pub fn label(&self) -> String {
        match self {
            CurveSpec::MaxEnt => "I_maxent".into(),
            CurveSpec::Product => "I_product".into(),
            CurveSpec::Alpha { cos2 } => format!("I_alpha_{cos2}"),
            CurveSpec::Km { cos2 } => format!("I_km_{cos2}"),
            CurveSpec::KSupport { k } => format!("I_k{k}"),
        }
    }

    /// Closed-form evaluation at one memory value.
    pub fn eval(&self, channel: &ChannelSpec, mu: f64) -> Result<f64> {
        let table: PauliProbTable<f64> = channel.table()?;
        let d = table.dim();
        match (self, channel) {
            (CurveSpec::MaxEnt, _) => Ok(closed::mi_max_entangled(&table, mu)?.value),
            (CurveSpec::Product, _) => Ok(closed::mi_product(&table, mu)?.value),
            (CurveSpec::Alpha { cos2 }, ChannelSpec::QuasiClassical { p, .. }) => {
                Ok(closed::mi_qcd_alpha(d, *p, mu, alpha_from_cos2(*cos2))?.value)
            }
            (CurveSpec::Alpha { cos2 }, ChannelSpec::Depolarizing { p, .. }) => {
                Ok(closed::mi_dep_alpha(d, *p, mu, alpha_from_cos2(*cos2))?.value)
            }
            (CurveSpec::Alpha { cos2 }, ChannelSpec::HighError { d: n }) => {
                let p = 1.0 / ((n * n) as f64);
                Ok(closed::mi_dep_alpha(d, p, mu, alpha_from_cos2(*cos2))?.value)
            }
            (CurveSpec::Km { cos2 }, ChannelSpec::QuasiClassical { p, .. }) => {
                Ok(closed::mi_qcd_km(*p, mu, alpha_from_cos2(*cos2))?.value)
            }
            (CurveSpec::Km { cos2 }, ChannelSpec::Depolarizing { p, .. }) => {
                Ok(closed::mi_dep_km(*p, mu, alpha_from_cos2(*cos2))?.value)
            }
            (CurveSpec::Km { cos2 }, ChannelSpec::HighError { d: n }) => {
                let p = 1.0 / ((n * n) as f64);
                Ok(closed::mi_dep_km(p, mu, alpha_from_cos2(*cos2))?.value)
            }
            (CurveSpec::KSupport { k }, ChannelSpec::HighError { .. }) => {
                Ok(closed::mi_high_error_k(d, mu, *k)?.value)
            }
            _ => Err(Error::UnsupportedCombination {
                formula: "curve/channel-family pairing",
            }),
        }
    }

    /// Oracle ensemble realizing this curve, when one exists. Support-size
    /// curves other than `k = 1`, `k = d` and the two-level `k = 2` at
    /// `d = 4` are formula-level interpolations with no realizing state.
    pub fn ensemble(&self, d: QuditDim) -> Option<EnsembleSpec<f64>> {
        let family = match self {
            CurveSpec::MaxEnt => StateFamily::MaxEntangledBasis,
            CurveSpec::Product => StateFamily::ProductBasis,
            CurveSpec::Alpha { cos2 } => StateFamily::Alpha(alpha_from_cos2(*cos2)),
            CurveSpec::Km { cos2 } => StateFamily::Km(alpha_from_cos2(*cos2)),
            CurveSpec::KSupport { k } => match (*k, d.get()) {
                (1, _) => StateFamily::MaxEntangledBasis,
                (k, n) if k == n => StateFamily::ProductBasis,
                (2, 4) => {
                    let h = c64(0.5f64.sqrt(), 0.0);
                    let coeffs =
                        DiagonalCoeffs::new(vec![h, c64(0.0, 0.0), h, c64(0.0, 0.0)])
                            .expect("two-level coefficients are normalized");
                    StateFamily::Diag(coeffs)
                }
                _ => return None,
            },
        };
        Some(EnsembleSpec::new(d, family))
    }
}

/// Result of a sweep: the grid and one value vector per curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub mu_grid: Vec<f64>,
    pub curves: Vec<SweepCurve>,
    pub channel: ChannelSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub label: String,
    pub values: Vec<f64>,
}

/// Options controlling the oracle spot-checks inside a sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub spot_checks: usize,
    pub tolerance: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            spot_checks: DEFAULT_SPOT_CHECKS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Evaluates every curve on the grid by closed form, spot-checking each one
/// against the dense oracle at a few evenly spaced grid points.
pub fn sweep(
    channel: &ChannelSpec,
    curves: &[(CurveSpec, String)],
    grid: &[f64],
    opts: &SweepOptions,
) -> Result<SweepTable> {
    let d = QuditDim::new(channel.d())?;
    let table: PauliProbTable<f64> = channel.table()?;
    let mut out = Vec::with_capacity(curves.len());
    let check_idx = spot_check_indices(grid.len(), opts.spot_checks);
    for (curve, label) in curves {
        let mut values = Vec::with_capacity(grid.len());
        for &mu in grid {
            values.push(curve.eval(channel, mu)?);
        }
        if let Some(ens) = curve.ensemble(d) {
            for &i in &check_idx {
                let mu = grid[i];
                let ch = CorrelatedChannel::new(table, mu)?;
                let oracle_value = holevo_mutual_info(&ch, &ens)?.value;
                if (oracle_value - values[i]).abs() > opts.tolerance {
                    return Err(Error::SpotCheckFailed {
                        label: label.clone(),
                        mu,
                        closed: values[i],
                        oracle: oracle_value,
                    });
                }
            }
        }
        out.push(SweepCurve {
            label: label.clone(),
            values,
        });
    }
    Ok(SweepTable {
        mu_grid: grid.to_vec(),
        curves: out,
        channel: *channel,
    })
}

fn spot_check_indices(len: usize, count: usize) -> Vec<usize> {
    if count == 0 || len == 0 {
        return Vec::new();
    }
    let count = count.min(len);
    let mut idx: Vec<usize> = (0..count)
        .map(|i| i * (len - 1) / (count.max(2) - 1).max(1))
        .collect();
    idx.dedup();
    idx
}

/// Classification of the crossing of two mutual-information curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Crossing {
    /// Strict sign change in the open interval; `mu` located by bisection.
    Interior {
        mu: f64,
        bracket: (f64, f64),
        residual: f64,
    },
    /// The difference vanishes at an endpoint and keeps one sign elsewhere
    /// (the very-high-error situation at `mu = 0`).
    BoundaryTouch { mu: f64 },
    /// No sign change and no boundary touch.
    NoCrossing,
    /// The curves are identical on the grid.
    Degenerate,
}

/// Report of a crossover search between two curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverReport {
    pub curve_a: String,
    pub curve_b: String,
    pub crossing: Crossing,
}

const CROSSING_BISECT_TOL: f64 = 1e-10;
const CROSSING_ZERO_TOL: f64 = 1e-12;

/// Finds where `curve_a - curve_b` changes sign on `[0, 1]`, scanning the
/// grid for a bracket and bisecting it to 1e-10 in `mu`.
pub fn find_crossover(
    channel: &ChannelSpec,
    curve_a: CurveSpec,
    curve_b: CurveSpec,
    grid: &[f64],
) -> Result<CrossoverReport> {
    let diff = |mu: f64| -> Result<f64> {
        Ok(curve_a.eval(channel, mu)? - curve_b.eval(channel, mu)?)
    };
    let values: Result<Vec<f64>> = grid.iter().map(|&mu| diff(mu)).collect();
    let values = values?;

    let crossing = classify_crossing(grid, &values, &diff)?;
    Ok(CrossoverReport {
        curve_a: curve_a.label(),
        curve_b: curve_b.label(),
        crossing,
    })
}

fn classify_crossing(
    grid: &[f64],
    values: &[f64],
    diff: &dyn Fn(f64) -> Result<f64>,
) -> Result<Crossing> {
    if values.iter().all(|v| v.abs() <= CROSSING_ZERO_TOL) {
        return Ok(Crossing::Degenerate);
    }
    // Strict sign change between adjacent grid points.
    for i in 0..values.len() - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 && i > 0 {
            // Exact zero at an interior grid point: refine around it.
            if values[i - 1] * b < 0.0 {
                return Ok(Crossing::Interior {
                    mu: grid[i],
                    bracket: (grid[i - 1], grid[i + 1]),
                    residual: 0.0,
                });
            }
        }
        if a * b < 0.0 {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            let mut flo = a;
            while hi - lo > CROSSING_BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                let fmid = diff(mid)?;
                if flo * fmid <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fmid;
                }
            }
            let mu = 0.5 * (lo + hi);
            return Ok(Crossing::Interior {
                mu,
                bracket: (grid[i], grid[i + 1]),
                residual: diff(mu)?.abs(),
            });
        }
    }
    // One-signed in the interior; check for a vanishing endpoint.
    let interior_sign = values
        .iter()
        .find(|v| v.abs() > CROSSING_ZERO_TOL)
        .map(|v| v.signum())
        .unwrap_or(0.0);
    for (endpoint, value) in [(0usize, values[0]), (values.len() - 1, values[values.len() - 1])]
    {
        if value.abs() <= CROSSING_ZERO_TOL
            && values
                .iter()
                .all(|v| v.abs() <= CROSSING_ZERO_TOL || v.signum() == interior_sign)
        {
            return Ok(Crossing::BoundaryTouch { mu: grid[endpoint] });
        }
    }
    Ok(Crossing::NoCrossing)
}

// ---------------------------------------------------------------------------
// Validation harness
// ---------------------------------------------------------------------------

/// One closed-form formula checked against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub formula: String,
    pub d: usize,
    pub points: usize,
    pub max_abs_err: f64,
    pub pass: bool,
}

/// Deviation of an uncorrected ("as printed") variant next to the corrected
/// implementation, over the same sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedVariantReport {
    pub erratum: String,
    pub formula: String,
    pub d: usize,
    pub as_printed_max_err: f64,
    pub corrected_max_err: f64,
}

/// Full validation report; deterministic for a fixed seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub tolerance: f64,
    pub points_per_case: usize,
    pub entries: Vec<FormulaReport>,
    pub printed_variants: Vec<PrintedVariantReport>,
    /// Max deviation of the decomposition channel from brute-force Kraus
    /// summation at d = 2.
    pub kraus_paths_max_err: f64,
    /// Deviation of `E(twirl(rho))` from `E(rho)` for quasi-classical
    /// channels at d = 2, at zero and intermediate memory. The composition
    /// identity holds exactly only at `mu = 0`; the harness records the
    /// measured deviation instead of assuming it.
    pub twirl_composition_mu0: f64,
    pub twirl_composition_mu_half: f64,
    pub all_pass: bool,
}

impl ValidationReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "validation seed={} tol={:e} points={}\n",
            self.seed, self.tolerance, self.points_per_case
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "{:<22} d={} points={:<3} max_abs_err={:.3e} {}\n",
                e.formula,
                e.d,
                e.points,
                e.max_abs_err,
                if e.pass { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "kraus decomposition vs enumeration (d=2): {:.3e}\n",
            self.kraus_paths_max_err
        ));
        out.push_str(&format!(
            "twirl composition deviation (d=2, quasi-classical): mu=0 {:.3e}, mu=0.5 {:.3e}\n",
            self.twirl_composition_mu0, self.twirl_composition_mu_half
        ));
        out.push_str("uncorrected variants (see ERRATA.md):\n");
        for p in &self.printed_variants {
            out.push_str(&format!(
                "{:<4} {:<18} d={} as_printed_err={:.3e} corrected_err={:.3e}\n",
                p.erratum, p.formula, p.d, p.as_printed_max_err, p.corrected_max_err
            ));
        }
        out.push_str(if self.all_pass { "ALL PASS\n" } else { "FAILURES PRESENT\n" });
        out
    }
}

fn random_general_table(rng: &mut ChaCha8Rng, d: QuditDim) -> PauliProbTable<f64> {
    let n = d.get() as f64;
    let w: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let total = w[0] + (n - 1.0) * w[1] + (n - 1.0) * w[2] + (n - 1.0) * (n - 1.0) * w[3];
    PauliProbTable::general(
        d,
        w[0] / total,
        w[1] / total,
        w[2] / total,
        w[3] / total,
    )
    .expect("normalized by construction")
}

fn random_state(rng: &mut ChaCha8Rng, d: QuditDim) -> DensityMatrix<f64> {
    // Random pure state mixed with a little identity keeps things generic.
    let dim = d.block_dim();
    let mut amps = crate::num::CVec64::zeros(dim);
    for i in 0..dim {
        amps[i] = c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    }
    let norm = amps.norm();
    let amps = amps.map(|z| z.unscale(norm));
    let pure = &amps * amps.adjoint();
    let eps = 0.2 * rng.gen::<f64>();
    let mixed = pure.map(|z| z.scale(1.0 - eps))
        + crate::num::CMat64::identity(dim, dim).map(|z| z.scale(eps / dim as f64));
    DensityMatrix::new(d, mixed).expect("valid by construction")
}

struct Harness {
    rng: ChaCha8Rng,
    tolerance: f64,
    points: usize,
    entries: Vec<FormulaReport>,
}

impl Harness {
    fn record(&mut self, formula: &str, d: usize, max_abs_err: f64) {
        self.entries.push(FormulaReport {
            formula: formula.into(),
            d,
            points: self.points,
            max_abs_err,
            pass: max_abs_err <= self.tolerance,
        });
    }
}

/// Runs the full closed-form-vs-oracle matrix over randomized channels.
/// Failures are report entries, not errors.
pub fn validate(seed: u64, tolerance: f64, points: usize) -> Result<ValidationReport> {
    let mut h = Harness {
        rng: ChaCha8Rng::seed_from_u64(seed),
        tolerance,
        points,
        entries: Vec::new(),
    };

    for d_usize in 2..=4 {
        let d = QuditDim::new(d_usize)?;
        validate_fidelities(&mut h, d)?;
        validate_basis_mi(&mut h, d)?;
        validate_alpha_mi(&mut h, d)?;
        validate_high_error(&mut h, d)?;
    }
    validate_km_mi(&mut h)?;
    validate_threshold(&mut h)?;

    let printed_variants = printed_variant_reports(&mut h.rng, h.points)?;
    let kraus_paths_max_err = kraus_path_deviation(&mut h.rng)?;
    let (twirl0, twirl_half) = twirl_composition_deviation(&mut h.rng)?;

    let all_pass = h.entries.iter().all(|e| e.pass);
    Ok(ValidationReport {
        seed,
        tolerance,
        points_per_case: points,
        entries: h.entries,
        printed_variants,
        kraus_paths_max_err,
        twirl_composition_mu0: twirl0,
        twirl_composition_mu_half: twirl_half,
        all_pass,
    })
}

fn validate_fidelities(h: &mut Harness, d: QuditDim) -> Result<()> {
    let mut err_me = 0.0f64;
    let mut err_pro = 0.0f64;
    for _ in 0..h.points {
        let table = random_general_table(&mut h.rng, d);
        let mu = h.rng.gen::<f64>();
        let ch = CorrelatedChannel::new(table, mu)?;

        let me = EnsembleSpec::new(d, StateFamily::<f64>::MaxEntangledBasis).fiducial()?;
        let out = apply_channel(&ch, &me.to_density())?;
        err_me = err_me.max(
            (fidelity(&me, &out)? - closed::fid_max_entangled(&table, mu)?).abs(),
        );

        let pro = EnsembleSpec::new(d, StateFamily::<f64>::ProductBasis).fiducial()?;
        let out = apply_channel(&ch, &pro.to_density())?;
        err_pro = err_pro.max((fidelity(&pro, &out)? - closed::fid_product(&table, mu)?).abs());
    }
    h.record("fid_max_entangled", d.get(), err_me);
    h.record("fid_product", d.get(), err_pro);
    Ok(())
}

fn validate_basis_mi(h: &mut Harness, d: QuditDim) -> Result<()> {
    let mut err_me = 0.0f64;
    let mut err_pro = 0.0f64;
    for _ in 0..h.points {
        let table = random_general_table(&mut h.rng, d);
        let mu = h.rng.gen::<f64>();
        let ch = CorrelatedChannel::new(table, mu)?;
        let me = holevo_mutual_info(&ch, &EnsembleSpec::new(d, StateFamily::MaxEntangledBasis))?;
        err_me = err_me.max((me.value - closed::mi_max_entangled(&table, mu)?.value).abs());
        let pro = holevo_mutual_info(&ch, &EnsembleSpec::new(d, StateFamily::ProductBasis))?;
        err_pro = err_pro.max((pro.value - closed::mi_product(&table, mu)?.value).abs());
    }
    h.record("mi_max_entangled", d.get(), err_me);
    h.record("mi_product", d.get(), err_pro);
    Ok(())
}

fn validate_alpha_mi(h: &mut Harness, d: QuditDim) -> Result<()> {
    let mut err_qcd = 0.0f64;
    let mut err_dep = 0.0f64;
    for _ in 0..h.points {
        let mu = h.rng.gen::<f64>();
        let alpha = h.rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
        let ens = EnsembleSpec::new(d, StateFamily::Alpha(alpha));

        let p = h.rng.gen::<f64>() / (d.get() as f64);
        let table = PauliProbTable::quasi_classical(d, p)?;
        let ch = CorrelatedChannel::new(table, mu)?;
        let mi = holevo_mutual_info(&ch, &ens)?;
        err_qcd = err_qcd.max((mi.value - closed::mi_qcd_alpha(d, p, mu, alpha)?.value).abs());

        let p = h.rng.gen::<f64>();
        let table = PauliProbTable::depolarizing(d, p)?;
        let ch = CorrelatedChannel::new(table, mu)?;
        let mi = holevo_mutual_info(&ch, &ens)?;
        err_dep = err_dep.max((mi.value - closed::mi_dep_alpha(d, p, mu, alpha)?.value).abs());
    }
    h.record("mi_qcd_alpha", d.get(), err_qcd);
    h.record("mi_dep_alpha", d.get(), err_dep);
    Ok(())
}

fn validate_km_mi(h: &mut Harness) -> Result<()> {
    let d = QuditDim::new(4)?;
    let mut err_qcd = 0.0f64;
    let mut err_dep = 0.0f64;
    for _ in 0..h.points {
        let mu = h.rng.gen::<f64>();
        let theta = h.rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
        let ens = EnsembleSpec::new(d, StateFamily::Km(theta));

        let p = h.rng.gen::<f64>() / 4.0;
        let ch = CorrelatedChannel::new(PauliProbTable::quasi_classical(d, p)?, mu)?;
        let mi = holevo_mutual_info(&ch, &ens)?;
        err_qcd = err_qcd.max((mi.value - closed::mi_qcd_km(p, mu, theta)?.value).abs());

        let p = h.rng.gen::<f64>();
        let ch = CorrelatedChannel::new(PauliProbTable::depolarizing(d, p)?, mu)?;
        let mi = holevo_mutual_info(&ch, &ens)?;
        err_dep = err_dep.max((mi.value - closed::mi_dep_km(p, mu, theta)?.value).abs());
    }
    h.record("mi_qcd_km", 4, err_qcd);
    h.record("mi_dep_km", 4, err_dep);
    Ok(())
}

fn validate_high_error(h: &mut Harness, d: QuditDim) -> Result<()> {
    let table = PauliProbTable::<f64>::high_error(d);
    let mut err = 0.0f64;
    for _ in 0..h.points {
        let mu = h.rng.gen::<f64>();
        let mut ks = vec![1usize, d.get()];
        if d.get() == 4 {
            ks.push(2);
        }
        for k in ks {
            let curve = CurveSpec::KSupport { k };
            let ens = curve.ensemble(d).expect("realizable support size");
            let ch = CorrelatedChannel::new(table, mu)?;
            let mi = holevo_mutual_info(&ch, &ens)?;
            err = err.max((mi.value - closed::mi_high_error_k(d, mu, k)?.value).abs());
        }
    }
    h.record("mi_high_error_k", d.get(), err);
    Ok(())
}

fn validate_threshold(h: &mut Harness) -> Result<()> {
    for d_usize in 2..=5 {
        let d = QuditDim::new(d_usize)?;
        let mut err = 0.0f64;
        for _ in 0..h.points {
            let p = h.rng.gen::<f64>();
            let q = (1.0 - p) / ((d_usize * d_usize - 1) as f64);
            let table = PauliProbTable::depolarizing(d, p)?;
            match closed::fid_threshold_mu(p, q, d_usize)? {
                FidelityThreshold::Value(mu_t) if (0.0..=1.0).contains(&mu_t) => {
                    let gap = closed::fid_max_entangled(&table, mu_t)?
                        - closed::fid_product(&table, mu_t)?;
                    err = err.max(gap.abs());
                }
                _ => {}
            }
        }
        h.entries.push(FormulaReport {
            formula: "fid_threshold_mu".into(),
            d: d_usize,
            points: h.points,
            max_abs_err: err,
            pass: err <= 1e-9,
        });
    }
    Ok(())
}

fn printed_variant_reports(
    rng: &mut ChaCha8Rng,
    points: usize,
) -> Result<Vec<PrintedVariantReport>> {
    let d3 = QuditDim::new(3)?;
    let d4 = QuditDim::new(4)?;
    let mut out = Vec::new();

    let mut push = |erratum: &str,
                    formula: &str,
                    d: usize,
                    printed_err: f64,
                    corrected_err: f64| {
        out.push(PrintedVariantReport {
            erratum: erratum.into(),
            formula: formula.into(),
            d,
            as_printed_max_err: printed_err,
            corrected_max_err: corrected_err,
        });
    };

    // E1/E2 run on random general tables at d = 3.
    let mut e1 = (0.0f64, 0.0f64);
    let mut e2 = (0.0f64, 0.0f64);
    for _ in 0..points {
        let table = random_general_table(rng, d3);
        let mu = rng.gen::<f64>();
        let ch = CorrelatedChannel::new(table, mu)?;
        let me = EnsembleSpec::new(d3, StateFamily::<f64>::MaxEntangledBasis).fiducial()?;
        let oracle_fid = fidelity(&me, &apply_channel(&ch, &me.to_density())?)?;
        e1.0 = e1.0.max((closed::printed::fid_max_entangled_e1(&table, mu) - oracle_fid).abs());
        e1.1 = e1.1.max((closed::fid_max_entangled(&table, mu)? - oracle_fid).abs());

        let pro = holevo_mutual_info(
            &ch,
            &EnsembleSpec::new(d3, StateFamily::<f64>::ProductBasis),
        )?
        .value;
        e2.0 = e2.0.max((closed::printed::mi_product_e2(&table, mu) - pro).abs());
        e2.1 = e2.1.max((closed::mi_product(&table, mu)?.value - pro).abs());
    }
    push("E1", "fid_max_entangled", 3, e1.0, e1.1);
    push("E2", "mi_product", 3, e2.0, e2.1);

    // E3/E4/E5/E8 on the one-angle families at d = 3.
    let mut e3 = (0.0f64, 0.0f64);
    let mut e4 = (0.0f64, 0.0f64);
    let mut e5 = (0.0f64, 0.0f64);
    let mut e8 = (0.0f64, 0.0f64);
    for _ in 0..points {
        let mu = rng.gen::<f64>();
        let alpha = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
        let ens = EnsembleSpec::new(d3, StateFamily::Alpha(alpha));

        let p = rng.gen::<f64>() / 3.0;
        let ch = CorrelatedChannel::new(PauliProbTable::quasi_classical(d3, p)?, mu)?;
        let oracle_mi = holevo_mutual_info(&ch, &ens)?.value;
        let corrected = closed::mi_qcd_alpha(d3, p, mu, alpha)?.value;
        e3.0 = e3.0.max((closed::printed::mi_qcd_alpha_e3(d3, p, mu, alpha)? - oracle_mi).abs());
        e3.1 = e3.1.max((corrected - oracle_mi).abs());
        e4.0 = e4.0.max((closed::printed::mi_qcd_alpha_e4(d3, p, mu, alpha)? - oracle_mi).abs());
        e4.1 = e4.1.max((corrected - oracle_mi).abs());

        let p = rng.gen::<f64>();
        let ch = CorrelatedChannel::new(PauliProbTable::depolarizing(d3, p)?, mu)?;
        let oracle_mi = holevo_mutual_info(&ch, &ens)?.value;
        let corrected = closed::mi_dep_alpha(d3, p, mu, alpha)?.value;
        e5.0 = e5.0.max((closed::printed::mi_dep_alpha_e5(d3, p, mu, alpha)? - oracle_mi).abs());
        e5.1 = e5.1.max((corrected - oracle_mi).abs());
        e8.0 = e8.0.max((closed::printed::mi_dep_alpha_e8(d3, p, mu, alpha)? - oracle_mi).abs());
        e8.1 = e8.1.max((corrected - oracle_mi).abs());
    }
    push("E3", "mi_qcd_alpha", 3, e3.0, e3.1);
    push("E4", "mi_qcd_alpha", 3, e4.0, e4.1);
    push("E5", "mi_dep_alpha", 3, e5.0, e5.1);
    push("E8", "mi_dep_alpha", 3, e8.0, e8.1);

    // E6/E7 on the four-level family.
    let mut e6 = (0.0f64, 0.0f64);
    let mut e7 = (0.0f64, 0.0f64);
    for _ in 0..points {
        let mu = rng.gen::<f64>();
        let theta = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
        let ens = EnsembleSpec::new(d4, StateFamily::Km(theta));

        let p = rng.gen::<f64>() / 4.0;
        let ch = CorrelatedChannel::new(PauliProbTable::quasi_classical(d4, p)?, mu)?;
        let oracle_mi = holevo_mutual_info(&ch, &ens)?.value;
        e6.0 = e6.0.max((closed::printed::mi_qcd_km_e6(p, mu, theta)? - oracle_mi).abs());
        e6.1 = e6.1.max((closed::mi_qcd_km(p, mu, theta)?.value - oracle_mi).abs());

        let p = rng.gen::<f64>();
        let ch = CorrelatedChannel::new(PauliProbTable::depolarizing(d4, p)?, mu)?;
        let oracle_mi = holevo_mutual_info(&ch, &ens)?.value;
        e7.0 = e7.0.max((closed::printed::mi_dep_km_e7(p, mu, theta)? - oracle_mi).abs());
        e7.1 = e7.1.max((closed::mi_dep_km(p, mu, theta)?.value - oracle_mi).abs());
    }
    push("E6", "mi_qcd_km", 4, e6.0, e6.1);
    push("E7", "mi_dep_km", 4, e7.0, e7.1);

    Ok(out)
}

fn kraus_path_deviation(rng: &mut ChaCha8Rng) -> Result<f64> {
    let d = QuditDim::new(2)?;
    let mut max_err = 0.0f64;
    for _ in 0..5 {
        let table = random_general_table(rng, d);
        let mu = rng.gen::<f64>();
        let ch = CorrelatedChannel::new(table, mu)?;
        let rho = random_state(rng, d);
        let fast = apply_channel(&ch, &rho)?;
        let brute = apply_channel_brute(&ch, &rho)?;
        max_err = max_err.max((fast.matrix() - brute.matrix()).norm());
    }
    Ok(max_err)
}

fn twirl_composition_deviation(rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let d = QuditDim::new(2)?;
    let p = 0.3;
    let table = PauliProbTable::quasi_classical(d, p)?;
    let mut dev0 = 0.0f64;
    let mut dev_half = 0.0f64;
    for _ in 0..5 {
        let rho = random_state(rng, d);
        let twirled = oracle::twirl(&rho);
        for mu in [0.0, 0.5] {
            let ch = CorrelatedChannel::new(table, mu)?;
            let direct = apply_channel(&ch, &rho)?;
            let composed = apply_channel(&ch, &twirled)?;
            let diff = (direct.matrix() - composed.matrix()).norm();
            if mu == 0.0 {
                dev0 = dev0.max(diff);
            } else {
                dev_half = dev_half.max(diff);
            }
        }
    }
    Ok((dev0, dev_half))
}

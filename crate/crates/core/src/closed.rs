//! Analytic expressions for fidelity and mutual information of the studied
//! input families.
//!
//! Every function here has an exact dense counterpart in [`crate::oracle`];
//! the validation harness ([`crate::analysis::validate`]) measures the
//! agreement over randomized channels. Expressions whose original printed
//! form disagreed with the oracle were corrected; the uncorrected variants
//! are retained in [`printed`] and the corrections are documented in
//! `ERRATA.md` at the repository root.
//!
//! Symbol hygiene: the source derivations reuse the letters `x, y, a, b`
//! with different meanings in different places. Here they are always:
//!
//! - `m0 = p + (d-1)q` - probability of no level shift on one use
//!   (`a = dp` for quasi-classical tables, `x` for depolarizing ones);
//! - `m1 = r + (d-1)t` - probability of one fixed nonzero shift
//!   (`b = dr` quasi-classical, `y = qd` depolarizing);
//! - `coh0 = p - q`, `coh1 = r - t` - coherence survival contrasts of the
//!   unshifted/shifted sectors.

use crate::algebra::QuditDim;
use crate::error::{Error, Result};
use crate::noise::PauliProbTable;
use crate::num::{log2_usize, lossy, r, ru, xlog2x, Real};

/// How a quantity was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oracle,
    ClosedForm,
}

/// Mutual information in bits together with the output spectrum it came
/// from (sorted descending, `d^d` entries).
#[derive(Debug, Clone, PartialEq)]
pub struct MutualInfoResult<T: Real> {
    pub value: T,
    pub spectrum: Vec<T>,
    pub method: Method,
}

/// Result of the fidelity memory-threshold ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FidelityThreshold<T: Real> {
    /// The ratio evaluates to this value (not necessarily inside `[0, 1]`).
    Value(T),
    /// 0/0 at the noiseless corner; no threshold is defined there.
    Degenerate,
}

// ---------------------------------------------------------------------------
// Fidelity
// ---------------------------------------------------------------------------

/// Input/output fidelity of any maximally entangled basis state.
///
/// The uncorrelated part averages the d-th powers of the sector sums:
/// `(1/d) [ m0^d + (d-1) m1^d + (d-1) coh0^d + (d-1)^2 coh1^d ]`; the
/// correlated part leaves these states invariant, contributing `mu`.
pub fn fid_max_entangled<T: Real>(table: &PauliProbTable<T>, mu: T) -> Result<T> {
    check_mu(mu)?;
    let d = table.dim().get() as i32;
    let k = ru::<T>(table.dim().get() - 1);
    let base = table.no_shift_marginal().powi(d)
        + k * table.shift_marginal().powi(d)
        + k * table.no_shift_contrast().powi(d)
        + k * k * table.shift_contrast().powi(d);
    Ok((T::one() - mu) * base / ru::<T>(table.dim().get()) + mu)
}

/// Input/output fidelity of any computational product state:
/// `(1-mu) m0^d + mu m0`.
pub fn fid_product<T: Real>(table: &PauliProbTable<T>, mu: T) -> Result<T> {
    check_mu(mu)?;
    let d = table.dim().get() as i32;
    let m0 = table.no_shift_marginal();
    Ok((T::one() - mu) * m0.powi(d) + mu * m0)
}

/// Memory degree at which the two fidelities coincide, for tables with
/// `q = r = t` (depolarizing parameterization).
///
/// With `N = ((d-1)/d) [ (p-q+qd)^d - (p-q)^d - (qd)^d ]` the threshold is
/// `N / (N + 1 - (p-q+qd))`. At the noiseless corner both numerator and
/// denominator vanish and no threshold is defined.
pub fn fid_threshold_mu<T: Real>(p: T, q: T, d: usize) -> Result<FidelityThreshold<T>> {
    let dim = QuditDim::new(d)?;
    let table = PauliProbTable::general(dim, p, q, q, q)?;
    let di = d as i32;
    let m0 = table.no_shift_marginal();
    let x = table.no_shift_contrast();
    let qd = q * ru::<T>(d);
    let n = ru::<T>(d - 1) / ru::<T>(d) * (m0.powi(di) - x.powi(di) - qd.powi(di));
    let denom = n + T::one() - m0;
    if denom.abs() < r(1e-12) {
        return Ok(FidelityThreshold::Degenerate);
    }
    Ok(FidelityThreshold::Value(n / denom))
}

// ---------------------------------------------------------------------------
// Mutual information: basis families, general tables
// ---------------------------------------------------------------------------

/// Mutual information of the maximally entangled basis through a general
/// table with memory `mu`.
///
/// After the controlled-adder transformation the output splits into
/// `d^(d-1)` blocks labeled by the trailing-digit offsets; each block is
/// `excess * I + uniform * J` on the leading digit, so it contributes one
/// eigenvalue `excess + d * uniform` and `d-1` copies of `excess`.
pub fn mi_max_entangled<T: Real>(
    table: &PauliProbTable<T>,
    mu: T,
) -> Result<MutualInfoResult<T>> {
    check_mu(mu)?;
    let d = table.dim().get();
    let m0 = table.no_shift_marginal();
    let m1 = table.shift_marginal();
    let c0 = table.no_shift_contrast();
    let c1 = table.shift_contrast();
    let marg = |c: usize| if c == 0 { m0 } else { m1 };
    let coh = |c: usize| if c == 0 { c0 } else { c1 };
    let inv_d = T::one() / ru::<T>(d);
    let one_minus = T::one() - mu;

    let mut spectrum = Vec::with_capacity(d.pow((d - 1) as u32) * 2);
    let mut offsets = vec![0usize; d - 1];
    loop {
        let mut marg_sum = T::zero();
        let mut coh_sum = T::zero();
        for c in 0..d {
            let mut marg_prod = marg(c);
            let mut coh_prod = coh(c);
            for &k in &offsets {
                marg_prod *= marg((c + k) % d);
                coh_prod *= coh((c + k) % d);
            }
            marg_sum += marg_prod;
            coh_sum += coh_prod;
        }
        let excess = one_minus * inv_d * (marg_sum - coh_sum);
        let mut uniform = one_minus * inv_d * coh_sum;
        if offsets.iter().all(|&k| k == 0) {
            uniform += mu * inv_d;
        }
        spectrum.push((excess + ru::<T>(d) * uniform, 1usize));
        spectrum.push((excess, d - 1));
        if !advance(&mut offsets, d) {
            break;
        }
    }
    assemble("mi_max_entangled", d, spectrum)
}

/// Mutual information of the computational product basis through a general
/// table with memory `mu`. The output is diagonal; eigenvalues are counted
/// by the number of unshifted sites.
pub fn mi_product<T: Real>(table: &PauliProbTable<T>, mu: T) -> Result<MutualInfoResult<T>> {
    check_mu(mu)?;
    let d = table.dim().get();
    let m0 = table.no_shift_marginal();
    let m1 = table.shift_marginal();
    let one_minus = T::one() - mu;
    let mut spectrum = Vec::with_capacity(d + 3);
    spectrum.push((one_minus * m0.powi(d as i32) + mu * m0, 1));
    spectrum.push((one_minus * m1.powi(d as i32) + mu * m1, d - 1));
    for k in 0..d {
        let mut count = binom(d, k) * (d - 1).pow((d - k) as u32);
        if k == 0 {
            count -= d - 1;
        }
        let lam = one_minus * m0.powi(k as i32) * m1.powi((d - k) as i32);
        spectrum.push((lam, count));
    }
    assemble("mi_product", d, spectrum)
}

// ---------------------------------------------------------------------------
// Mutual information: interpolating families (quasi-classical/depolarizing)
// ---------------------------------------------------------------------------

/// Quasi-classical depolarizing channel with the one-angle interpolating
/// state (`cos^2 alpha = 1` product endpoint, `cos^2 alpha = 1/d` maximally
/// entangled endpoint).
pub fn mi_qcd_alpha<T: Real>(
    d: QuditDim,
    p: T,
    mu: T,
    alpha: T,
) -> Result<MutualInfoResult<T>> {
    let table = PauliProbTable::quasi_classical(d, p)?;
    mi_alpha_for_table("mi_qcd_alpha", &table, mu, alpha)
}

/// Depolarizing channel with the one-angle interpolating state.
pub fn mi_dep_alpha<T: Real>(
    d: QuditDim,
    p: T,
    mu: T,
    alpha: T,
) -> Result<MutualInfoResult<T>> {
    let table = PauliProbTable::depolarizing(d, p)?;
    mi_alpha_for_table("mi_dep_alpha", &table, mu, alpha)
}

/// Quasi-classical depolarizing channel with the four-level interpolating
/// state at angle `theta` (d = 4 only).
pub fn mi_qcd_km<T: Real>(p: T, mu: T, theta: T) -> Result<MutualInfoResult<T>> {
    let d = QuditDim::new(4)?;
    let table = PauliProbTable::quasi_classical(d, p)?;
    mi_km_for_table("mi_qcd_km", &table, mu, theta)
}

/// Depolarizing channel with the four-level interpolating state (d = 4).
pub fn mi_dep_km<T: Real>(p: T, mu: T, theta: T) -> Result<MutualInfoResult<T>> {
    let d = QuditDim::new(4)?;
    let table = PauliProbTable::depolarizing(d, p)?;
    mi_km_for_table("mi_dep_km", &table, mu, theta)
}

fn mi_alpha_for_table<T: Real>(
    formula: &'static str,
    table: &PauliProbTable<T>,
    mu: T,
    alpha: T,
) -> Result<MutualInfoResult<T>> {
    check_mu(mu)?;
    let d = table.dim().get();
    let moduli = alpha_moduli(d, alpha);
    let elems = alpha_matrix_elems(table, mu, alpha);
    let mut spectrum = alpha_lambdas(d, elems);
    spectrum.extend(tail_spectrum(table, mu, &moduli));
    assemble(formula, d, spectrum)
}

fn mi_km_for_table<T: Real>(
    formula: &'static str,
    table: &PauliProbTable<T>,
    mu: T,
    theta: T,
) -> Result<MutualInfoResult<T>> {
    check_mu(mu)?;
    let d = table.dim().get();
    let (w, v, z, f) = km_wvzf(table, mu, theta);
    let mut spectrum = km_lambdas(w, v, z, f);
    spectrum.extend(tail_spectrum(table, mu, &km_moduli(theta)));
    assemble(formula, d, spectrum)
}

/// `|A_j|^2` of the one-angle family: `cos^2` on level 0, `sin^2/(d-1)`
/// on the rest.
fn alpha_moduli<T: Real>(d: usize, alpha: T) -> Vec<T> {
    let cos2 = alpha.cos() * alpha.cos();
    let tail = (T::one() - cos2) / ru::<T>(d - 1);
    let mut moduli = vec![tail; d];
    moduli[0] = cos2;
    moduli
}

/// `|A_j|^2` of the four-level family: `(1+3cos^2)/4` on level 0, `sin^2/4`
/// on the rest.
fn km_moduli<T: Real>(theta: T) -> Vec<T> {
    let cos2 = theta.cos() * theta.cos();
    let sin2 = T::one() - cos2;
    let quarter = r::<T>(0.25);
    vec![
        quarter * (T::one() + r::<T>(3.0) * cos2),
        quarter * sin2,
        quarter * sin2,
        quarter * sin2,
    ]
}

/// Matrix elements of the leading-digit block for the one-angle family:
/// `(e00, e0k, ekk, ecross)` with `e0k` real by construction.
struct AlphaElems<T> {
    e00: T,
    e0k: T,
    ekk: T,
    ecross: T,
}

fn alpha_matrix_elems<T: Real>(
    table: &PauliProbTable<T>,
    mu: T,
    alpha: T,
) -> AlphaElems<T> {
    let d = table.dim().get();
    let di = d as i32;
    let m0 = table.no_shift_marginal();
    let m1 = table.shift_marginal();
    let one_minus = T::one() - mu;
    // Coherence transfer coefficient of the leading-digit block.
    let kc = one_minus * table.no_shift_contrast().powi(di) + mu * m0;
    let cos = alpha.cos();
    let sin = alpha.sin();
    let cos2 = cos * cos;
    let sin2 = sin * sin;
    let sq = ru::<T>(d - 1).sqrt();
    let frac = sin2 / ru::<T>(d - 1);
    let pow_gap = m0.powi(di) - m1.powi(di);
    AlphaElems {
        e00: one_minus * (pow_gap * cos2 + m1.powi(di)) + mu * ((m0 - m1) * cos2 + m1),
        e0k: kc * cos * sin / sq
            + mu * m1 * (frac * r(d as f64 - 2.0) + cos * sin / sq),
        ekk: one_minus * (pow_gap * frac + m1.powi(di)) + mu * ((m0 - m1) * frac + m1),
        ecross: kc * frac + mu * m1 * (frac * r(d as f64 - 3.0) + r::<T>(2.0) * cos * sin / sq),
    }
}

/// Eigenvalues of the leading-digit block for the one-angle family. The
/// block has one distinguished level coupled symmetrically to the other
/// `d-1`, so it reduces to a 2x2 problem plus a `(d-2)`-fold eigenvalue.
fn alpha_lambdas<T: Real>(d: usize, e: AlphaElems<T>) -> Vec<(T, usize)> {
    let k = r::<T>(d as f64 - 2.0);
    let lam0 = e.ekk - e.ecross;
    let top = e.e00;
    let bottom = e.ekk + k * e.ecross;
    let gap = top - bottom;
    let disc = (gap * gap + r::<T>(4.0) * ru::<T>(d - 1) * e.e0k * e.e0k).sqrt();
    let half = r::<T>(0.5);
    vec![
        (lam0, d - 2),
        (half * (top + bottom + disc), 1),
        (half * (top + bottom - disc), 1),
    ]
}

/// The `(w, v, z, f)` parameters of the leading-digit block for the
/// four-level family. `w` carries the phase-sector coupling, `v` the
/// level-0 coupling, `z` the `cos^2` excess on level 0 and `f` the common
/// diagonal base.
fn km_wvzf<T: Real>(table: &PauliProbTable<T>, mu: T, theta: T) -> (T, T, T, T) {
    let m0 = table.no_shift_marginal();
    let m1 = table.shift_marginal();
    let one_minus = T::one() - mu;
    let coh4 = table.no_shift_contrast().powi(4);
    let pow_gap = m0.powi(4) - m1.powi(4);
    let cos = theta.cos();
    let sin = theta.sin();
    let quarter = r::<T>(0.25);
    let w = quarter * (one_minus * coh4 + mu * (m0 + r::<T>(3.0) * m1)) * sin * sin;
    let v = r::<T>(0.5) * (one_minus * coh4 + mu * (m0 - m1)) * cos * sin;
    let z = quarter * (mu * (m0 - m1) + one_minus * pow_gap) * cos * cos;
    let f = mu * (quarter * (m0 - m1) + m1) + one_minus * (quarter * pow_gap + m1.powi(4));
    (w, v, z, f)
}

/// Eigenvalues of the four-level leading block: `f - w - z` twice and
/// `f + w + z +- sqrt(3v^2 + 4w^2 - 4wz + 4z^2)`.
fn km_lambdas<T: Real>(w: T, v: T, z: T, f: T) -> Vec<(T, usize)> {
    let disc = (r::<T>(3.0) * v * v + r::<T>(4.0) * w * w - r::<T>(4.0) * w * z
        + r::<T>(4.0) * z * z)
        .sqrt();
    vec![
        (f - w - z, 2),
        (f + w + z + disc, 1),
        (f + w + z - disc, 1),
    ]
}

/// Diagonal eigenvalues outside the leading block, for any diagonal-moduli
/// input through a table whose shifted sectors carry no coherence
/// (`r = t`): for every nonzero trailing-offset pattern and every leading
/// digit `k0`,
///
/// ```text
/// (1-mu) sum_c |A_{k0-c}|^2 marg(c) prod_i marg(c + k_i)
/// ```
fn tail_spectrum<T: Real>(
    table: &PauliProbTable<T>,
    mu: T,
    moduli: &[T],
) -> Vec<(T, usize)> {
    let d = table.dim().get();
    let m0 = table.no_shift_marginal();
    let m1 = table.shift_marginal();
    let marg = |c: usize| if c == 0 { m0 } else { m1 };
    let one_minus = T::one() - mu;
    let mut out = Vec::with_capacity(d * (d.pow((d - 1) as u32) - 1));
    let mut offsets = vec![0usize; d - 1];
    loop {
        if !offsets.iter().all(|&k| k == 0) {
            for k0 in 0..d {
                let mut val = T::zero();
                for c in 0..d {
                    let mut prod = marg(c);
                    for &k in &offsets {
                        prod *= marg((c + k) % d);
                    }
                    val += moduli[(k0 + d - c) % d] * prod;
                }
                out.push((one_minus * val, 1));
            }
        }
        if !advance(&mut offsets, d) {
            break;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Very high error channels
// ---------------------------------------------------------------------------

/// Mutual information through the very-high-error channel (`p = q = r = t`)
/// of an input whose fully correlated output has `k` equal nonzero
/// eigenvalues: spectrum `(1-mu)/d^d + mu/k` (k-fold) and `(1-mu)/d^d`
/// elsewhere.
///
/// `k = 1` is the maximally entangled basis and `k = d` the product basis;
/// `k = 2` at `d = 4` is realized by a two-level diagonal state. Other `k`
/// are formula-level interpolations.
pub fn mi_high_error_k<T: Real>(d: QuditDim, mu: T, k: usize) -> Result<MutualInfoResult<T>> {
    check_mu(mu)?;
    let dim = d.block_dim();
    if k < 1 || k > dim {
        return Err(Error::IndexOutOfRange {
            what: "support size k",
            value: k,
            bound: dim + 1,
        });
    }
    let floor = (T::one() - mu) / ru::<T>(dim);
    let spectrum = vec![
        (floor + mu / ru::<T>(k), k),
        (floor, dim - k),
    ];
    assemble("mi_high_error_k", d.get(), spectrum)
}

// ---------------------------------------------------------------------------
// Shared assembly
// ---------------------------------------------------------------------------

fn check_mu<T: Real>(mu: T) -> Result<()> {
    if mu < T::zero() || mu > T::one() {
        return Err(Error::ProbabilityOutOfRange {
            name: "memory degree mu",
            value: lossy(mu),
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

const SPECTRUM_NEG_TOL: f64 = 1e-9;
const SPECTRUM_SUM_TOL: f64 = 1e-9;

/// Validates a weighted spectrum as a probability distribution, then folds
/// it into `d log2 d + sum lambda log2 lambda`. Out-of-range coefficients
/// are reported, never clamped silently.
fn assemble<T: Real>(
    formula: &'static str,
    d: usize,
    weighted: Vec<(T, usize)>,
) -> Result<MutualInfoResult<T>> {
    let mut total = T::zero();
    let mut count = 0usize;
    for &(lam, mult) in &weighted {
        if lam < r(-SPECTRUM_NEG_TOL) || lam > T::one() + r(SPECTRUM_NEG_TOL) {
            return Err(Error::SpectralCoefficients {
                formula,
                detail: format!("coefficient {} outside [0, 1]", lossy(lam)),
            });
        }
        total += lam * ru::<T>(mult);
        count += mult;
    }
    if (total - T::one()).abs() > r(SPECTRUM_SUM_TOL) {
        return Err(Error::SpectralCoefficients {
            formula,
            detail: format!("coefficients sum to {}", lossy(total)),
        });
    }
    debug_assert_eq!(count, d.pow(d as u32));
    let mut value = log2_usize::<T>(d) * ru::<T>(d);
    let mut spectrum = Vec::with_capacity(count);
    for (lam, mult) in weighted {
        let lam = if lam < T::zero() { T::zero() } else { lam };
        value += ru::<T>(mult) * xlog2x(lam);
        for _ in 0..mult {
            spectrum.push(lam);
        }
    }
    spectrum.sort_by(|a, b| b.partial_cmp(a).expect("finite spectrum"));
    Ok(MutualInfoResult {
        value,
        spectrum,
        method: Method::ClosedForm,
    })
}

/// Advances a mixed-radix counter; returns false after wrapping to zero.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// Uncorrected variants
// ---------------------------------------------------------------------------

pub mod printed {
    //! Uncorrected variants of the analytic expressions, retained verbatim
    //! from the source derivations for comparison. Every function here
    //! disagrees with the dense oracle beyond tolerance somewhere in
    //! parameter space; `ERRATA.md` at the repository root documents each
    //! correcting edit, and the validation harness reports the deviation of
    //! each variant side by side with the corrected implementation.

    use super::*;

    /// E1: maximally entangled fidelity with the garbled third group; the
    /// two shift-sector terms appear with a spurious multiplicative factor
    /// `(td)^d (d-1)^2` fused onto the second addend.
    pub fn fid_max_entangled_e1<T: Real>(table: &PauliProbTable<T>, mu: T) -> T {
        let d = table.dim().get();
        let di = d as i32;
        let dd = ru::<T>(d);
        let k = ru::<T>(d - 1);
        let x = table.no_shift_contrast();
        let y = table.shift_contrast();
        let q = table.q();
        let t = table.t();
        let m0 = x + q * dd;
        let m1 = y + t * dd;
        let one_minus = T::one() - mu;
        let term1 = one_minus / dd * x * (x.powi(di - 1) * k + m0.powi(di - 1));
        let term2 = one_minus / dd * y * k * (y.powi(di - 1) * k + m1.powi(di - 1));
        let term3 = one_minus / (dd * dd)
            * (t * dd * dd * m0.powi(di - 1)
                + t * dd * k * m1.powi(di - 1) * (t * dd).powi(di) * k * k);
        let term4 = one_minus * (q - t) * m0.powi(di - 1);
        term1 + term2 + term3 + term4 + mu
    }

    /// E2: product-basis mutual information evaluated with the in-text
    /// sector values `x = p + (d-1)q`, `y = qd` (instead of the contrasts
    /// `x = p - q`, `y = r - t` that make `x + qd`, `y + dt` the marginals).
    pub fn mi_product_e2<T: Real>(table: &PauliProbTable<T>, mu: T) -> T {
        let d = table.dim().get();
        let dd = ru::<T>(d);
        let m0 = table.no_shift_marginal() + table.q() * dd;
        let m1 = table.q() * dd + table.t() * dd;
        let one_minus = T::one() - mu;
        let mut value = log2_usize::<T>(d) * dd;
        value += xlog2x(one_minus * m0.powi(d as i32) + mu * m0);
        value += ru::<T>(d - 1) * xlog2x(one_minus * m1.powi(d as i32) + mu * m1);
        for k in 0..d {
            let mut count = binom(d, k) * (d - 1).pow((d - k) as u32);
            if k == 0 {
                count -= d - 1;
            }
            value += ru::<T>(count)
                * xlog2x(one_minus * m0.powi(k as i32) * m1.powi((d - k) as i32));
        }
        value
    }

    /// E3: quasi-classical one-angle mutual information with the sector
    /// values `a = dp`, `b = dq` (instead of `b = dr`), which collapses the
    /// two sectors onto each other since `q = p` for these tables.
    pub fn mi_qcd_alpha_e3<T: Real>(d: QuditDim, p: T, mu: T, alpha: T) -> Result<T> {
        let table = PauliProbTable::quasi_classical(d, p)?;
        let n = d.get();
        let m0 = table.p() * ru::<T>(n);
        let m1 = table.q() * ru::<T>(n);
        Ok(alpha_family_value_with_sectors(&table, mu, alpha, m0, m1))
    }

    /// E4: quasi-classical tail coefficients with the stray `(1-mu)` factor
    /// inside the tensor bracket, `[(a-b)|j><j| + (1-mu) b I]`.
    pub fn mi_qcd_alpha_e4<T: Real>(d: QuditDim, p: T, mu: T, alpha: T) -> Result<T> {
        let table = PauliProbTable::quasi_classical(d, p)?;
        let n = d.get();
        let m0 = table.no_shift_marginal();
        let m1 = table.shift_marginal();
        let one_minus = T::one() - mu;
        let moduli = alpha_moduli(n, alpha);
        // Leading block is unchanged.
        let mut value = log2_usize::<T>(n) * ru::<T>(n);
        for (lam, mult) in alpha_lambdas(n, alpha_matrix_elems(&table, mu, alpha)) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        // Tail with the contaminated bracket.
        let marg = |c: usize| {
            if c == 0 {
                (m0 - m1) + one_minus * m1
            } else {
                one_minus * m1
            }
        };
        let mut offsets = vec![0usize; n - 1];
        loop {
            if !offsets.iter().all(|&k| k == 0) {
                for k0 in 0..n {
                    let mut val = T::zero();
                    for c in 0..n {
                        let lead = if c == 0 { m0 - m1 } else { m1 };
                        let mut prod = lead;
                        for &k in &offsets {
                            prod *= marg((c + k) % n);
                        }
                        val += moduli[(k0 + n - c) % n] * prod;
                    }
                    value += xlog2x((one_minus * val).max(T::zero()));
                }
            }
            if !advance(&mut offsets, n) {
                break;
            }
        }
        Ok(value)
    }

    /// E5: one-angle block eigenvalues with the printed discriminant, where
    /// the coupling enters unsquared (`4(d-1)s`) and the cross term carries
    /// the opposite sign (`-2(d-2)(c-t)r`).
    pub fn mi_dep_alpha_e5<T: Real>(d: QuditDim, p: T, mu: T, alpha: T) -> Result<T> {
        let table = PauliProbTable::depolarizing(d, p)?;
        let n = d.get();
        let moduli = alpha_moduli(n, alpha);
        let e = alpha_matrix_elems(&table, mu, alpha);
        let k = r::<T>(n as f64 - 2.0);
        let lam0 = e.ekk - e.ecross;
        let disc2 = e.e00 * e.e00 + r::<T>(4.0) * ru::<T>(n - 1) * e.e0k
            - r::<T>(2.0) * e.e00 * e.ekk
            + e.ekk * e.ekk
            - r::<T>(2.0) * k * (e.ekk - e.e00) * e.ecross
            + k * k * e.ecross * e.ecross;
        let half = r::<T>(0.5);
        let base = e.e00 + e.ekk + k * e.ecross;
        let (lam1, lam2) = if disc2 >= T::zero() {
            let disc = disc2.sqrt();
            (half * (base + disc), half * (base - disc))
        } else {
            (r::<T>(f64::NAN), r::<T>(f64::NAN))
        };
        let mut value = log2_usize::<T>(n) * ru::<T>(n);
        value += r::<T>(n as f64 - 2.0) * xlog2x(lam0.max(T::zero()));
        value += xlog2x(lam1.max(T::zero())) + xlog2x(lam2.max(T::zero()));
        for (lam, mult) in tail_spectrum(&table, mu, &moduli) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        Ok(value)
    }

    /// E6: four-level block eigenvalues as printed:
    /// `lam0 = -w + z + f`, `lam12 = w + 2z + f +- sqrt(3v^2+4w^2-2wz+z^2)`.
    pub fn mi_qcd_km_e6<T: Real>(p: T, mu: T, theta: T) -> Result<T> {
        let d = QuditDim::new(4)?;
        let table = PauliProbTable::quasi_classical(d, p)?;
        let (w, v, z, f) = km_wvzf(&table, mu, theta);
        let disc = (r::<T>(3.0) * v * v + r::<T>(4.0) * w * w - r::<T>(2.0) * w * z + z * z)
            .max(T::zero())
            .sqrt();
        let lams = [
            (-w + z + f, 2usize),
            (w + r::<T>(2.0) * z + f + disc, 1),
            (w + r::<T>(2.0) * z + f - disc, 1),
        ];
        let mut value = log2_usize::<T>(4) * r::<T>(4.0);
        for (lam, mult) in lams {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        for (lam, mult) in tail_spectrum(&table, mu, &km_moduli(theta)) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        Ok(value)
    }

    /// E7: depolarizing four-level `w`, `v` with the printed `(x^4 - y^4)`
    /// coherence factor in place of `(x - y)^4`.
    pub fn mi_dep_km_e7<T: Real>(p: T, mu: T, theta: T) -> Result<T> {
        let d = QuditDim::new(4)?;
        let table = PauliProbTable::depolarizing(d, p)?;
        let m0 = table.no_shift_marginal();
        let m1 = table.shift_marginal();
        let one_minus = T::one() - mu;
        let pow_gap = m0.powi(4) - m1.powi(4);
        let cos = theta.cos();
        let sin = theta.sin();
        let quarter = r::<T>(0.25);
        let w = quarter * (one_minus * pow_gap + mu) * sin * sin;
        let v = r::<T>(0.5) * (one_minus * pow_gap + mu * (m0 - m1)) * cos * sin;
        let z = quarter * (mu * (m0 - m1) + one_minus * pow_gap) * cos * cos;
        let f = mu * (quarter * (m0 - m1) + m1) + one_minus * (quarter * pow_gap + m1.powi(4));
        let mut value = log2_usize::<T>(4) * r::<T>(4.0);
        for (lam, mult) in km_lambdas(w, v, z, f) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        for (lam, mult) in tail_spectrum(&table, mu, &km_moduli(theta)) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        Ok(value)
    }

    /// E8: depolarizing one-angle `E00` element with the unpowered
    /// `(1-mu)(x-y)` leading coefficient.
    pub fn mi_dep_alpha_e8<T: Real>(d: QuditDim, p: T, mu: T, alpha: T) -> Result<T> {
        let table = PauliProbTable::depolarizing(d, p)?;
        let n = d.get();
        let di = n as i32;
        let m0 = table.no_shift_marginal();
        let m1 = table.shift_marginal();
        let coh = table.no_shift_contrast();
        let one_minus = T::one() - mu;
        let cos2 = alpha.cos() * alpha.cos();
        let sin2 = T::one() - cos2;
        let mut e = alpha_matrix_elems(&table, mu, alpha);
        e.e00 = (one_minus * coh + mu * m0) * cos2
            + mu * m1 * sin2
            + one_minus * (m0.powi(di) - m1.powi(di) - coh.powi(di)) * cos2
            + one_minus * m1.powi(di);
        let mut value = log2_usize::<T>(n) * ru::<T>(n);
        for (lam, mult) in alpha_lambdas(n, e) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        for (lam, mult) in tail_spectrum(&table, mu, &alpha_moduli(n, alpha)) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        Ok(value)
    }

    fn alpha_family_value_with_sectors<T: Real>(
        table: &PauliProbTable<T>,
        mu: T,
        alpha: T,
        m0: T,
        m1: T,
    ) -> T {
        let n = table.dim().get();
        let di = n as i32;
        let one_minus = T::one() - mu;
        let moduli = alpha_moduli(n, alpha);
        let cos = alpha.cos();
        let sin = alpha.sin();
        let cos2 = cos * cos;
        let sq = ru::<T>(n - 1).sqrt();
        let frac = (T::one() - cos2) / ru::<T>(n - 1);
        let kc = mu * m0;
        let pow_gap = m0.powi(di) - m1.powi(di);
        let elems = AlphaElems {
            e00: one_minus * (pow_gap * cos2 + m1.powi(di)) + mu * ((m0 - m1) * cos2 + m1),
            e0k: kc * cos * sin / sq
                + mu * m1 * (frac * r(n as f64 - 2.0) + cos * sin / sq),
            ekk: one_minus * (pow_gap * frac + m1.powi(di)) + mu * ((m0 - m1) * frac + m1),
            ecross: kc * frac
                + mu * m1 * (frac * r(n as f64 - 3.0) + r::<T>(2.0) * cos * sin / sq),
        };
        let mut value = log2_usize::<T>(n) * ru::<T>(n);
        for (lam, mult) in alpha_lambdas(n, elems) {
            value += ru::<T>(mult) * xlog2x(lam.max(T::zero()));
        }
        let marg = |c: usize| if c == 0 { m0 } else { m1 };
        let mut offsets = vec![0usize; n - 1];
        loop {
            if !offsets.iter().all(|&k| k == 0) {
                for k0 in 0..n {
                    let mut val = T::zero();
                    for c in 0..n {
                        let mut prod = marg(c);
                        for &k in &offsets {
                            prod *= marg((c + k) % n);
                        }
                        val += moduli[(k0 + n - c) % n] * prod;
                    }
                    value += xlog2x((one_minus * val).max(T::zero()));
                }
            }
            if !advance(&mut offsets, n) {
                break;
            }
        }
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::alpha_from_cos2;

    fn d(n: usize) -> QuditDim {
        QuditDim::new(n).unwrap()
    }

    fn high(n: usize) -> PauliProbTable<f64> {
        PauliProbTable::high_error(d(n))
    }

    #[test]
    fn fidelity_noiseless_and_full_memory() {
        for n in 2..=5 {
            let table = PauliProbTable::<f64>::noiseless(d(n));
            assert!((fid_max_entangled(&table, 0.3).unwrap() - 1.0).abs() < 1e-14);
            assert!((fid_product(&table, 0.3).unwrap() - 1.0).abs() < 1e-14);
        }
        let table = PauliProbTable::<f64>::general(d(3), 0.4, 0.1, 0.05, 0.075).unwrap();
        assert!((fid_max_entangled(&table, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_high_error_frozen_values() {
        assert!((fid_max_entangled(&high(2), 0.0).unwrap() - 0.25).abs() < 1e-14);
        assert!((fid_product(&high(2), 0.0).unwrap() - 0.25).abs() < 1e-14);
        assert!((fid_product(&high(2), 1.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn threshold_symmetric_and_degenerate_cases() {
        // p = q means p = 1/d^2; the numerator vanishes identically.
        for n in 2..=5 {
            let p = 1.0 / (n * n) as f64;
            match fid_threshold_mu(p, p, n).unwrap() {
                FidelityThreshold::Value(v) => assert_eq!(v, 0.0),
                FidelityThreshold::Degenerate => panic!("should not be degenerate"),
            }
        }
        assert_eq!(
            fid_threshold_mu(1.0, 0.0, 3).unwrap(),
            FidelityThreshold::Degenerate
        );
    }

    #[test]
    fn threshold_equalizes_the_two_fidelities() {
        let n = 2usize;
        let p = 0.7;
        let q = 0.1;
        let table = PauliProbTable::<f64>::depolarizing(d(n), p).unwrap();
        assert!((table.q() - q).abs() < 1e-15);
        let mu_t = match fid_threshold_mu(p, q, n).unwrap() {
            FidelityThreshold::Value(v) => v,
            _ => panic!("interior threshold expected"),
        };
        assert!(mu_t > 0.0 && mu_t < 1.0);
        let f_me = fid_max_entangled(&table, mu_t).unwrap();
        let f_pro = fid_product(&table, mu_t).unwrap();
        assert!((f_me - f_pro).abs() < 1e-12);

        // Bisection on the difference of the two fidelity curves must find
        // the same root.
        let diff = |mu: f64| {
            fid_max_entangled(&table, mu).unwrap() - fid_product(&table, mu).unwrap()
        };
        let (mut lo, mut hi) = (1e-6, 1.0);
        assert!(diff(lo) * diff(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if diff(lo) * diff(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((0.5 * (lo + hi) - mu_t).abs() < 1e-9);
    }

    #[test]
    fn threshold_decreases_with_dimension_at_fixed_small_q() {
        let q = 0.01;
        let mut last = f64::INFINITY;
        for n in 2..=5 {
            let p = 1.0 - ((n * n - 1) as f64) * q;
            let mu_t = match fid_threshold_mu(p, q, n).unwrap() {
                FidelityThreshold::Value(v) => v,
                _ => panic!("interior threshold expected"),
            };
            assert!(mu_t < last, "d={n}: {mu_t} !< {last}");
            last = mu_t;
        }
    }

    #[test]
    fn mi_limits_noiseless_and_full_memory() {
        for n in 2..=4 {
            let noiseless = PauliProbTable::<f64>::noiseless(d(n));
            let expect = (n as f64) * (n as f64).log2();
            assert!((mi_product(&noiseless, 0.0).unwrap().value - expect).abs() < 1e-12);
            assert!((mi_max_entangled(&noiseless, 0.7).unwrap().value - expect).abs() < 1e-12);

            let table = PauliProbTable::<f64>::depolarizing(d(n), 0.6).unwrap();
            assert!((mi_max_entangled(&table, 1.0).unwrap().value - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn mi_high_error_frozen_values_d2() {
        let me = mi_max_entangled(&high(2), 0.5).unwrap();
        assert!((me.value - 0.4512050593046014).abs() < 1e-13);
        let pro = mi_product(&high(2), 0.5).unwrap();
        assert!((pro.value - 0.1887218755408671).abs() < 1e-13);

        // Zero memory: both vanish.
        assert!(mi_max_entangled(&high(2), 0.0).unwrap().value.abs() < 1e-12);
        assert!(mi_product(&high(2), 0.0).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn mi_high_error_k_reproduces_the_extremes() {
        for n in [2usize, 3, 4] {
            for mu in [0.0, 0.3, 0.8, 1.0] {
                let k1 = mi_high_error_k(d(n), mu, 1).unwrap();
                let me = mi_max_entangled(&high(n), mu).unwrap();
                assert!((k1.value - me.value).abs() < 1e-12);

                let kd = mi_high_error_k(d(n), mu, n).unwrap();
                let pro = mi_product(&high(n), mu).unwrap();
                assert!((kd.value - pro.value).abs() < 1e-12);
            }
        }
        // Zero memory gives zero information for every k.
        for k in 1..=4 {
            assert!(mi_high_error_k::<f64>(d(4), 0.0, k).unwrap().value.abs() < 1e-12);
        }
        // Full memory, k = 1: the d log2 d limit.
        assert!((mi_high_error_k::<f64>(d(4), 1.0, 1).unwrap().value - 8.0).abs() < 1e-12);
        assert!(mi_high_error_k::<f64>(d(2), 0.5, 0).is_err());
        assert!(mi_high_error_k::<f64>(d(2), 0.5, 5).is_err());
    }

    #[test]
    fn alpha_family_endpoint_algebra() {
        // alpha = 0 collapses to the product form; cos^2 alpha = 1/d to the
        // maximally entangled form. Same code path, 1e-10.
        for (n, p) in [(2usize, 0.3), (3, 0.2), (4, 0.15)] {
            let qc = PauliProbTable::<f64>::quasi_classical(d(n), p).unwrap();
            for mu in [0.0, 0.4, 1.0] {
                let at_zero = mi_qcd_alpha(d(n), p, mu, 0.0).unwrap();
                let pro = mi_product(&qc, mu).unwrap();
                assert!((at_zero.value - pro.value).abs() < 1e-10);

                let alpha = alpha_from_cos2(1.0 / n as f64);
                let at_me = mi_qcd_alpha(d(n), p, mu, alpha).unwrap();
                let me = mi_max_entangled(&qc, mu).unwrap();
                assert!((at_me.value - me.value).abs() < 1e-10);
            }
        }
        for (n, p) in [(2usize, 0.8), (4, 0.7)] {
            let dep = PauliProbTable::<f64>::depolarizing(d(n), p).unwrap();
            for mu in [0.0, 0.55, 1.0] {
                let at_zero = mi_dep_alpha(d(n), p, mu, 0.0).unwrap();
                assert!((at_zero.value - mi_product(&dep, mu).unwrap().value).abs() < 1e-10);
                let alpha = alpha_from_cos2(1.0 / n as f64);
                let at_me = mi_dep_alpha(d(n), p, mu, alpha).unwrap();
                assert!(
                    (at_me.value - mi_max_entangled(&dep, mu).unwrap().value).abs() < 1e-10
                );
            }
        }
    }

    #[test]
    fn km_family_endpoint_algebra() {
        let p = 0.2;
        let qc = PauliProbTable::<f64>::quasi_classical(d(4), p).unwrap();
        let dep_p = 0.7;
        let dep = PauliProbTable::<f64>::depolarizing(d(4), dep_p).unwrap();
        for mu in [0.0, 0.4, 1.0] {
            let at_zero = mi_qcd_km(p, mu, 0.0).unwrap();
            assert!((at_zero.value - mi_product(&qc, mu).unwrap().value).abs() < 1e-10);
            let at_quarter = mi_qcd_km(p, mu, std::f64::consts::FRAC_PI_2).unwrap();
            assert!(
                (at_quarter.value - mi_max_entangled(&qc, mu).unwrap().value).abs() < 1e-10
            );

            let dz = mi_dep_km(dep_p, mu, 0.0).unwrap();
            assert!((dz.value - mi_product(&dep, mu).unwrap().value).abs() < 1e-10);
            let dq = mi_dep_km(dep_p, mu, std::f64::consts::FRAC_PI_2).unwrap();
            assert!((dq.value - mi_max_entangled(&dep, mu).unwrap().value).abs() < 1e-10);
        }
    }

    #[test]
    fn spectra_are_probability_distributions() {
        let table = PauliProbTable::<f64>::general(d(3), 0.5, 0.1, 0.1, 0.025).unwrap();
        for mi in [
            mi_max_entangled(&table, 0.3).unwrap(),
            mi_product(&table, 0.3).unwrap(),
            mi_qcd_alpha::<f64>(d(3), 0.21, 0.42, 0.8).unwrap(),
            mi_dep_alpha::<f64>(d(4), 0.7, 0.5, 0.6).unwrap(),
            mi_qcd_km::<f64>(0.2, 0.4, 0.9).unwrap(),
            mi_dep_km::<f64>(0.7, 0.6, 1.1).unwrap(),
            mi_high_error_k(d(4), 0.3, 3).unwrap(),
        ] {
            let sum: f64 = mi.spectrum.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(mi.spectrum.iter().all(|&l| l >= 0.0));
            assert!(mi.value >= -1e-9);
        }
    }

    #[test]
    fn mi_value_bounds() {
        let table = PauliProbTable::<f64>::depolarizing(d(3), 0.35).unwrap();
        for mu in [0.0, 0.2, 0.5, 0.9, 1.0] {
            for mi in [
                mi_max_entangled(&table, mu).unwrap(),
                mi_product(&table, mu).unwrap(),
            ] {
                assert!(mi.value >= -1e-9);
                assert!(mi.value <= 3.0 * 3f64.log2() + 1e-9);
            }
        }
    }

    #[test]
    fn mu_validation() {
        let table = PauliProbTable::<f64>::high_error(d(2));
        assert!(fid_product(&table, -0.1).is_err());
        assert!(mi_max_entangled(&table, 1.5).is_err());
    }

    #[test]
    fn printed_variants_disagree_with_corrected_forms() {
        // Each uncorrected variant must deviate from the corrected one
        // somewhere; these are the demonstrative points.
        let table = PauliProbTable::<f64>::depolarizing(d(3), 0.6).unwrap();
        let corrected = fid_max_entangled(&table, 0.3).unwrap();
        let e1 = printed::fid_max_entangled_e1(&table, 0.3);
        assert!((corrected - e1).abs() > 1e-6);

        let e2 = printed::mi_product_e2(&table, 0.3);
        assert!((mi_product(&table, 0.3).unwrap().value - e2).abs() > 1e-6);

        let e3 = printed::mi_qcd_alpha_e3::<f64>(d(3), 0.2, 0.4, 0.7).unwrap();
        assert!((mi_qcd_alpha::<f64>(d(3), 0.2, 0.4, 0.7).unwrap().value - e3).abs() > 1e-6);

        let e4 = printed::mi_qcd_alpha_e4::<f64>(d(3), 0.2, 0.4, 0.7).unwrap();
        assert!((mi_qcd_alpha::<f64>(d(3), 0.2, 0.4, 0.7).unwrap().value - e4).abs() > 1e-6);

        let e5 = printed::mi_dep_alpha_e5::<f64>(d(3), 0.6, 0.4, 0.7).unwrap();
        assert!((mi_dep_alpha::<f64>(d(3), 0.6, 0.4, 0.7).unwrap().value - e5).abs() > 1e-6);

        let e6 = printed::mi_qcd_km_e6::<f64>(0.2, 0.4, 0.7).unwrap();
        assert!((mi_qcd_km::<f64>(0.2, 0.4, 0.7).unwrap().value - e6).abs() > 1e-6);

        let e7 = printed::mi_dep_km_e7::<f64>(0.7, 0.4, 0.7).unwrap();
        assert!((mi_dep_km::<f64>(0.7, 0.4, 0.7).unwrap().value - e7).abs() > 1e-6);

        let e8 = printed::mi_dep_alpha_e8::<f64>(d(3), 0.6, 0.4, 0.7).unwrap();
        assert!((mi_dep_alpha::<f64>(d(3), 0.6, 0.4, 0.7).unwrap().value - e8).abs() > 1e-6);
    }
}

//! Exact dense simulation of the correlated channel and the information
//! quantities computed from first principles.
//!
//! Everything here works on full `d^d`-dimensional matrices and is the
//! ground truth the closed forms in [`crate::closed`] are validated against.
//! The channel is applied through its exact two-part decomposition
//!
//! ```text
//! E(rho) = (1-mu) (E1 (x) ... (x) E1)(rho)
//!        + mu sum_{m,n} P[m,n] U[m,n]^(x)d rho U[m,n]†^(x)d
//! ```
//!
//! where `E1` is the single-use channel. A brute-force summation over the
//! whole `(d^2)^d`-term Kraus family is kept alongside as an independent
//! cross-check of the decomposition.

use crate::algebra::{
    digits_to_index, index_to_digits, root_of_unity, PauliIndex, QuditDim,
};
use crate::closed::{Method, MutualInfoResult};
use crate::error::{Error, Result};
use crate::noise::{CorrelatedChannel, PauliProbTable};
use crate::num::{cmod, lossy, r, ru, xlog2x, CMat, CVec, Cplx, Real};
use crate::states::{
    alpha_state, diag_state, km_state, max_entangled, product_state, DiagonalCoeffs, StateVector,
};
use nalgebra::SymmetricEigen;
use num_complex::Complex;
use num_traits::Zero;

/// Absolute clamp for eigenvalues of nominally PSD matrices: values in
/// `[-1e-9, 0]` are treated as zero, anything more negative is an error.
pub const EIGENVALUE_CLAMP: f64 = 1e-9;

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Density matrix of a block of `d` qudits of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    d: QuditDim,
    mat: CMat<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Wraps a matrix after checking dimension, hermiticity (1e-10) and
    /// unit trace (1e-10). Positivity is not checked here; see
    /// [`DensityMatrix::validate_psd`].
    pub fn new(d: QuditDim, mat: CMat<T>) -> Result<Self> {
        let dim = d.block_dim();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: mat.nrows(),
            });
        }
        let rho = Self { d, mat };
        let herm = rho.hermiticity_defect();
        if herm > r(HERMITICITY_TOL) {
            return Err(Error::InvalidDensityMatrix {
                detail: format!("hermiticity defect {:.3e}", lossy(herm)),
            });
        }
        let tr = (rho.trace() - T::one()).abs();
        if tr > r(TRACE_TOL) {
            return Err(Error::InvalidDensityMatrix {
                detail: format!("trace defect {:.3e}", lossy(tr)),
            });
        }
        Ok(rho)
    }

    /// Wraps without validation; for internal constructions that are valid
    /// by construction.
    pub fn new_unchecked(d: QuditDim, mat: CMat<T>) -> Self {
        Self { d, mat }
    }

    /// `I / d^d`.
    pub fn maximally_mixed(d: QuditDim) -> Self {
        let dim = d.block_dim();
        let scale = T::one() / ru::<T>(dim);
        Self {
            d,
            mat: CMat::<T>::identity(dim, dim).map(|z| z.scale(scale)),
        }
    }

    #[inline]
    pub fn dim(&self) -> QuditDim {
        self.d
    }

    #[inline]
    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn trace(&self) -> T {
        let mut tr = T::zero();
        for i in 0..self.mat.nrows() {
            tr += self.mat[(i, i)].re;
        }
        tr
    }

    /// Largest entrywise deviation from `rho = rho†`.
    pub fn hermiticity_defect(&self) -> T {
        let mut defect = T::zero();
        for i in 0..self.mat.nrows() {
            for j in i..self.mat.ncols() {
                let dev = cmod(self.mat[(i, j)] - self.mat[(j, i)].conj());
                if dev > defect {
                    defect = dev;
                }
            }
        }
        defect
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> T {
        let mut acc = T::zero();
        for z in self.mat.iter() {
            acc += z.norm_sqr();
        }
        acc
    }

    /// Errors out when any eigenvalue is below `-1e-9`.
    pub fn validate_psd(&self) -> Result<()> {
        eigenvalues_desc(self).map(|_| ())
    }
}

/// `Tr rho^2` as a free function.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.purity()
}

fn shift_index_table(d: usize, n_sites: usize, shift: usize) -> Vec<usize> {
    let dim = d.pow(n_sites as u32);
    (0..dim)
        .map(|i| {
            let digits: Vec<usize> = index_to_digits(i, d, n_sites)
                .iter()
                .map(|&x| (x + shift) % d)
                .collect();
            digits_to_index(&digits, d)
        })
        .collect()
}

fn digit_sums_mod_d(d: usize, n_sites: usize) -> Vec<usize> {
    let dim = d.pow(n_sites as u32);
    (0..dim)
        .map(|i| index_to_digits(i, d, n_sites).iter().sum::<usize>() % d)
        .collect()
}

/// Superoperator of the single-use channel as a dense `d^2 x d^2` matrix:
/// row `(a,b)`, column `(c,e)` holds `sum_{m,n} P[m,n] U[a,c] conj(U[b,e])`.
fn single_use_superop<T: Real>(table: &PauliProbTable<T>) -> CMat<T> {
    let d = table.dim();
    let n = d.get();
    let mut sup = CMat::<T>::zeros(n * n, n * n);
    for m in 0..n {
        for ph in 0..n {
            let w = table
                .entry(PauliIndex::new(m, ph))
                .expect("index enumerated in range");
            if w.is_zero() {
                continue;
            }
            for c in 0..n {
                let a = (c + m) % n;
                let uac = root_of_unity::<T>((c * ph) as i64, n);
                for e in 0..n {
                    let b = (e + m) % n;
                    let ube = root_of_unity::<T>((e * ph) as i64, n);
                    sup[(a * n + b, c * n + e)] += (uac * ube.conj()).scale(w);
                }
            }
        }
    }
    sup
}

fn apply_superop_at_site<T: Real>(
    rho: &CMat<T>,
    sup: &CMat<T>,
    d: usize,
    n_sites: usize,
    site: usize,
) -> CMat<T> {
    let dim = rho.nrows();
    let stride = d.pow((n_sites - 1 - site) as u32);
    let mut out = CMat::<T>::zeros(dim, dim);
    for i in 0..dim {
        let a = (i / stride) % d;
        let ibase = i - a * stride;
        for j in 0..dim {
            let b = (j / stride) % d;
            let jbase = j - b * stride;
            let mut acc = Cplx::<T>::zero();
            let row = a * d + b;
            for c in 0..d {
                for e in 0..d {
                    let s = sup[(row, c * d + e)];
                    if !s.is_zero() {
                        acc += s * rho[(ibase + c * stride, jbase + e * stride)];
                    }
                }
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Exact channel application via the `(1-mu)/mu` decomposition.
pub fn apply_channel<T: Real>(
    ch: &CorrelatedChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let d = ch.dim();
    d.check_dense()?;
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d.block_dim(),
            found: rho.dim().block_dim(),
        });
    }
    let n = d.get();
    let dim = d.block_dim();
    let mu = ch.mu();
    let one_minus = T::one() - mu;

    // Memoryless part: the single-use channel on every site in turn.
    let mut uncorrelated = CMat::<T>::zeros(dim, dim);
    if !one_minus.is_zero() {
        let sup = single_use_superop(ch.table());
        let mut acc = rho.matrix().clone();
        for site in 0..n {
            acc = apply_superop_at_site(&acc, &sup, n, n, site);
        }
        uncorrelated = acc;
    }

    // Fully correlated part: the same error on every site. Each operator is
    // a phase-decorated permutation, so conjugation is entrywise.
    let mut correlated = CMat::<T>::zeros(dim, dim);
    if !mu.is_zero() {
        let sums = digit_sums_mod_d(n, n);
        for m in 0..n {
            let perm = shift_index_table(n, n, m);
            for ph in 0..n {
                let w = ch.table().entry(PauliIndex::new(m, ph))?;
                if w.is_zero() {
                    continue;
                }
                let phases: Vec<Cplx<T>> = sums
                    .iter()
                    .map(|&s| root_of_unity::<T>((ph * s) as i64, n))
                    .collect();
                for i in 0..dim {
                    let pi = phases[i].scale(w);
                    for j in 0..dim {
                        correlated[(perm[i], perm[j])] +=
                            pi * phases[j].conj() * rho.matrix()[(i, j)];
                    }
                }
            }
        }
    }

    let mut out = uncorrelated.map(|z| z.scale(one_minus)) + correlated.map(|z| z.scale(mu));
    // Symmetrize away roundoff before handing the matrix back.
    out = (&out + out.adjoint()).map(|z| z.unscale(r(2.0)));
    DensityMatrix::new(d, out)
}

/// Channel application by brute-force summation over the full Kraus family.
/// Exponentially slow; kept as the independent cross-check of
/// [`apply_channel`] at small `d`.
pub fn apply_channel_brute<T: Real>(
    ch: &CorrelatedChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let d = ch.dim();
    d.check_dense()?;
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d.block_dim(),
            found: rho.dim().block_dim(),
        });
    }
    let dim = d.block_dim();
    let mut out = CMat::<T>::zeros(dim, dim);
    for term in ch.kraus_terms() {
        if term.weight.is_zero() {
            continue;
        }
        let op = term.matrix(d)?;
        out += &op * rho.matrix() * op.adjoint();
    }
    out = (&out + out.adjoint()).map(|z| z.unscale(r(2.0)));
    DensityMatrix::new(d, out)
}

/// Eigenvalues of a density matrix, sorted descending. Errors out when any
/// eigenvalue is below the PSD clamp; values in `[-1e-9, 0]` are zeroed.
pub fn eigenvalues_desc<T: Real>(rho: &DensityMatrix<T>) -> Result<Vec<T>> {
    let herm = (rho.matrix() + rho.matrix().adjoint()).map(|z| z.unscale(r(2.0)));
    let n = herm.nrows();

    // Rows that are exactly zero carry eigenvalue 0; deflating them keeps
    // the tridiagonalization away from zero Householder columns, which the
    // solver handles poorly on sparse full-memory outputs.
    let support: Vec<usize> = (0..n)
        .filter(|&i| (0..n).any(|j| !herm[(i, j)].is_zero()))
        .collect();
    let mut vals: Vec<T> = Vec::with_capacity(n);
    vals.resize(n - support.len(), T::zero());

    if !support.is_empty() {
        let sub = CMat::<T>::from_fn(support.len(), support.len(), |i, j| {
            herm[(support[i], support[j])]
        });
        let eig = SymmetricEigen::try_new(sub, T::default_epsilon(), 0)
            .ok_or(Error::EigenFailure)?;
        for &lam in eig.eigenvalues.iter() {
            if !lam.is_finite() {
                return Err(Error::EigenFailure);
            }
            if lam < r(-EIGENVALUE_CLAMP) {
                return Err(Error::NegativeEigenvalue { value: lossy(lam) });
            }
            vals.push(if lam < T::zero() { T::zero() } else { lam });
        }
    }
    vals.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    Ok(vals)
}

/// Shannon entropy (base 2) of a spectrum, `0 log 0 = 0`.
pub fn entropy_of_spectrum<T: Real>(spectrum: &[T]) -> T {
    -spectrum.iter().fold(T::zero(), |acc, &x| acc + xlog2x(x))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(entropy_of_spectrum(&eigenvalues_desc(rho)?))
}

/// Input/output fidelity `<psi| rho_out |psi>` for a pure input.
pub fn fidelity<T: Real>(psi: &StateVector<T>, rho_out: &DensityMatrix<T>) -> Result<T> {
    if psi.dim() != rho_out.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_out.dim().block_dim(),
            found: psi.dim().block_dim(),
        });
    }
    let image: CVec<T> = rho_out.matrix() * psi.amplitudes();
    let val = psi.amplitudes().dotc(&image);
    let tol = r::<T>(1e-10);
    if val.im.abs() > tol || val.re < -tol || val.re > T::one() + tol {
        return Err(Error::InvalidDensityMatrix {
            detail: format!(
                "fidelity {} + {}i outside [0,1]",
                lossy(val.re),
                lossy(val.im)
            ),
        });
    }
    Ok(val.re)
}

/// Input-state family of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily<T: Real> {
    /// The `d^d` maximally entangled basis states, uniform priors.
    MaxEntangledBasis,
    /// The `d^d` computational product states, uniform priors.
    ProductBasis,
    /// Orbit of the interpolating state at the given angle (radians).
    Alpha(T),
    /// Orbit of the four-level interpolating state at the given angle.
    Km(T),
    /// Orbit of an arbitrary diagonal-coefficient state.
    Diag(DiagonalCoeffs<T>),
}

/// An input ensemble: a state family on `d` qudits with uniform priors.
///
/// The basis families are complete orthonormal bases averaging to `I/d^d`.
/// The interpolating families are closed under conjugation by per-site error
/// operators; their ensemble is the covariant orbit (shifts, phase residues
/// and relative offsets applied to the fiducial state), which also averages
/// to `I/d^d` while every member keeps the same output entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec<T: Real> {
    pub d: QuditDim,
    pub family: StateFamily<T>,
}

impl<T: Real> EnsembleSpec<T> {
    pub fn new(d: QuditDim, family: StateFamily<T>) -> Self {
        Self { d, family }
    }

    /// The fiducial member every other member is unitarily related to.
    pub fn fiducial(&self) -> Result<StateVector<T>> {
        let n = self.d.get();
        match &self.family {
            StateFamily::MaxEntangledBasis => max_entangled(self.d, &vec![0; n - 1], 0),
            StateFamily::ProductBasis => product_state(self.d, &vec![0; n]),
            StateFamily::Alpha(alpha) => alpha_state(self.d, *alpha),
            StateFamily::Km(theta) => {
                if n != 4 {
                    return Err(Error::UnsupportedCombination {
                        formula: "four-level interpolating family",
                    });
                }
                km_state(*theta)
            }
            StateFamily::Diag(coeffs) => diag_state(self.d, coeffs),
        }
    }

    /// Full enumeration of `(prior, member)` pairs.
    pub fn members(&self) -> Result<Vec<(T, StateVector<T>)>> {
        let n = self.d.get();
        let mut out = Vec::new();
        match &self.family {
            StateFamily::MaxEntangledBasis => {
                for code in 0..n.pow((n - 1) as u32) {
                    let offsets = index_to_digits(code, n, n - 1);
                    for s in 0..n {
                        out.push(max_entangled(self.d, &offsets, s)?);
                    }
                }
            }
            StateFamily::ProductBasis => {
                for code in 0..self.d.block_dim() {
                    out.push(product_state(self.d, &index_to_digits(code, n, n))?);
                }
            }
            _ => {
                let coeffs = diag_coeffs_of_family(&self.family, self.d)?;
                for shift in 0..n {
                    for s in 0..n {
                        for code in 0..n.pow((n - 1) as u32) {
                            let offsets = index_to_digits(code, n, n - 1);
                            out.push(orbit_member(self.d, coeffs.as_slice(), shift, s, &offsets)?);
                        }
                    }
                }
            }
        }
        let prior = T::one() / ru::<T>(out.len());
        Ok(out.into_iter().map(|psi| (prior, psi)).collect())
    }
}

fn diag_coeffs_of_family<T: Real>(
    family: &StateFamily<T>,
    d: QuditDim,
) -> Result<DiagonalCoeffs<T>> {
    match family {
        StateFamily::Alpha(alpha) => {
            let n = d.get();
            let tail = alpha.sin() / ru::<T>(n - 1).sqrt();
            let mut coeffs = vec![Complex::new(tail, T::zero()); n];
            coeffs[0] = Complex::new(alpha.cos(), T::zero());
            DiagonalCoeffs::new(coeffs)
        }
        StateFamily::Km(theta) => crate::states::km_coeffs(*theta),
        StateFamily::Diag(coeffs) => Ok(coeffs.clone()),
        _ => Err(Error::UnsupportedCombination {
            formula: "diagonal coefficients of a basis family",
        }),
    }
}

/// `sum_j A_j w^{j s} |j+m, j+m+l_1, ..., j+m+l_{d-1}>`.
fn orbit_member<T: Real>(
    d: QuditDim,
    coeffs: &[Cplx<T>],
    shift: usize,
    s: usize,
    offsets: &[usize],
) -> Result<StateVector<T>> {
    let n = d.get();
    let mut amps = CVec::<T>::zeros(d.block_dim());
    let mut digits = vec![0usize; n];
    for (j, &a) in coeffs.iter().enumerate() {
        digits[0] = (j + shift) % n;
        for (site, &l) in offsets.iter().enumerate() {
            digits[site + 1] = (j + shift + l) % n;
        }
        amps[digits_to_index(&digits, n)] = a * root_of_unity::<T>((j * s) as i64, n);
    }
    let norm = amps.norm();
    StateVector::new(d, amps.map(|z| z.unscale(norm)))
}

/// Holevo mutual information of the ensemble through the channel:
/// `S(sum_i pi_i E(rho_i)) - sum_i pi_i S(E(rho_i))`.
///
/// The ensembles used here average to `I/d^d`, so the first term is computed
/// as `S(E(I/d^d))`, and all members share the output entropy of the
/// fiducial state, so the second term is computed once. Both shortcuts are
/// checked against [`holevo_mutual_info_direct`] in the test suite.
pub fn holevo_mutual_info<T: Real>(
    ch: &CorrelatedChannel<T>,
    ens: &EnsembleSpec<T>,
) -> Result<MutualInfoResult<T>> {
    check_ensemble_dim(ch, ens)?;
    let avg_out = apply_channel(ch, &DensityMatrix::maximally_mixed(ens.d))?;
    let s_avg = von_neumann_entropy(&avg_out)?;
    let out = apply_channel(ch, &ens.fiducial()?.to_density())?;
    let spectrum = eigenvalues_desc(&out)?;
    let value = s_avg - entropy_of_spectrum(&spectrum);
    Ok(MutualInfoResult {
        value,
        spectrum,
        method: Method::Oracle,
    })
}

/// Holevo mutual information by direct summation over every ensemble
/// member. Exponentially slower than [`holevo_mutual_info`]; used to verify
/// the shortcut at small `d`.
pub fn holevo_mutual_info_direct<T: Real>(
    ch: &CorrelatedChannel<T>,
    ens: &EnsembleSpec<T>,
) -> Result<MutualInfoResult<T>> {
    check_ensemble_dim(ch, ens)?;
    let dim = ens.d.block_dim();
    let members = ens.members()?;
    let mut avg_in = CMat::<T>::zeros(dim, dim);
    let mut second = T::zero();
    for (prior, psi) in &members {
        let rho = psi.to_density();
        avg_in += rho.matrix().map(|z| z.scale(*prior));
        second += *prior * von_neumann_entropy(&apply_channel(ch, &rho)?)?;
    }
    let avg_out = apply_channel(ch, &DensityMatrix::new(ens.d, avg_in)?)?;
    let spectrum = eigenvalues_desc(&avg_out)?;
    let value = entropy_of_spectrum(&spectrum) - second;
    Ok(MutualInfoResult {
        value,
        spectrum,
        method: Method::Oracle,
    })
}

fn check_ensemble_dim<T: Real>(ch: &CorrelatedChannel<T>, ens: &EnsembleSpec<T>) -> Result<()> {
    if ch.dim() != ens.d {
        return Err(Error::DimensionMismatch {
            expected: ch.dim().block_dim(),
            found: ens.d.block_dim(),
        });
    }
    Ok(())
}

/// Conjugation by the controlled-adder cascade in which site 0 controls
/// every other site.
///
/// With the default orientation this is `(C† (x) ... ) rho ( ... (x) C)`,
/// the transformation that block-diagonalizes the channel output of the
/// entangled families; `inverse` applies the opposite orientation. The
/// spectrum is unchanged either way.
pub fn cnot_conjugate<T: Real>(rho: &DensityMatrix<T>, inverse: bool) -> DensityMatrix<T> {
    let n = rho.dim().get();
    let dim = rho.dim().block_dim();
    let map: Vec<usize> = (0..dim)
        .map(|x| {
            let mut digits = index_to_digits(x, n, n);
            for site in 1..n {
                digits[site] = if inverse {
                    (digits[site] + n - digits[0] % n) % n
                } else {
                    (digits[site] + digits[0]) % n
                };
            }
            digits_to_index(&digits, n)
        })
        .collect();
    let mut out = CMat::<T>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(i, j)] = rho.matrix()[(map[i], map[j])];
        }
    }
    DensityMatrix::new_unchecked(rho.dim(), out)
}

/// Averaging over phase-only error sequences with vanishing total phase
/// gradient (`sum_i n_i = 0 mod d`).
///
/// The average acts entrywise: an entry `(a, b)` survives exactly when the
/// digitwise differences `a_i - b_i mod d` agree across all sites, which is
/// the span of the diagonal-coefficient families with fixed offsets. The
/// projection is idempotent and fixes every diagonal-coefficient state.
pub fn twirl<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let n = rho.dim().get();
    let dim = rho.dim().block_dim();
    let mut out = CMat::<T>::zeros(dim, dim);
    for i in 0..dim {
        let di = index_to_digits(i, n, n);
        for j in 0..dim {
            let dj = index_to_digits(j, n, n);
            let delta = (di[0] + n - dj[0]) % n;
            if (1..n).all(|k| (di[k] + n - dj[k]) % n == delta) {
                out[(i, j)] = rho.matrix()[(i, j)];
            }
        }
    }
    DensityMatrix::new_unchecked(rho.dim(), out)
}

/// The same average computed from its definition, by explicit enumeration
/// of the `d^(d-1)` phase sequences. Used to validate [`twirl`].
pub fn twirl_by_phase_average<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let n = rho.dim().get();
    let dim = rho.dim().block_dim();
    let count = n.pow((n - 1) as u32);
    let mut out = CMat::<T>::zeros(dim, dim);
    for code in 0..count {
        let mut phases = index_to_digits(code, n, n - 1);
        let total: usize = phases.iter().sum();
        phases.push((n - total % n) % n);
        let site_phase: Vec<Cplx<T>> = (0..dim)
            .map(|i| {
                let digits = index_to_digits(i, n, n);
                let exponent: usize = digits
                    .iter()
                    .zip(phases.iter())
                    .map(|(&dig, &ph)| dig * ph)
                    .sum();
                root_of_unity::<T>(exponent as i64, n)
            })
            .collect();
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] += site_phase[i] * site_phase[j].conj() * rho.matrix()[(i, j)];
            }
        }
    }
    let scale = T::one() / ru::<T>(count);
    DensityMatrix::new_unchecked(rho.dim(), out.map(|z| z.scale(scale)))
}

/// Reduced state of a single site (trace over all other sites).
pub fn single_site_reduction<T: Real>(rho: &DensityMatrix<T>, site: usize) -> CMat<T> {
    let n = rho.dim().get();
    let dim = rho.dim().block_dim();
    let stride = n.pow((n - 1 - site) as u32);
    let mut red = CMat::<T>::zeros(n, n);
    for i in 0..dim {
        let a = (i / stride) % n;
        let ibase = i - a * stride;
        for b in 0..n {
            red[(a, b)] += rho.matrix()[(i, ibase + b * stride)];
        }
    }
    red
}

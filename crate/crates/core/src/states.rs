//! Input-state families on a block of `d` qudits of dimension `d`.
//!
//! Basis indexing is big-endian throughout the crate: site 0 is the most
//! significant digit of a computational-basis index.

use crate::algebra::{digits_to_index, root_of_unity, QuditDim};
use crate::error::{Error, Result};
use crate::num::{lossy, r, ru, CVec, Cplx, Real};
use crate::oracle::DensityMatrix;
use num_complex::Complex;

const NORM_TOL: f64 = 1e-12;

/// Pure state of a block of `d` qudits, unit-norm within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    d: QuditDim,
    amps: CVec<T>,
}

impl<T: Real> StateVector<T> {
    pub fn new(d: QuditDim, amps: CVec<T>) -> Result<Self> {
        if amps.len() != d.block_dim() {
            return Err(Error::DimensionMismatch {
                expected: d.block_dim(),
                found: amps.len(),
            });
        }
        let defect = (amps.norm() - T::one()).abs();
        if defect > r(NORM_TOL) {
            return Err(Error::NotNormalized {
                defect: lossy(defect),
            });
        }
        Ok(Self { d, amps })
    }

    #[inline]
    pub fn dim(&self) -> QuditDim {
        self.d
    }

    #[inline]
    pub fn amplitudes(&self) -> &CVec<T> {
        &self.amps
    }

    /// Rank-1 density matrix `|psi><psi|`.
    pub fn to_density(&self) -> DensityMatrix<T> {
        let mat = &self.amps * self.amps.adjoint();
        DensityMatrix::new_unchecked(self.d, mat)
    }

    pub fn inner(&self, other: &Self) -> Cplx<T> {
        self.amps.dotc(&other.amps)
    }
}

/// Normalized diagonal coefficients `A_j` of a state `sum_j A_j |j>^(x)d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCoeffs<T: Real> {
    coeffs: Vec<Cplx<T>>,
}

impl<T: Real> DiagonalCoeffs<T> {
    /// Requires `sum |A_j|^2 = 1` within 1e-9.
    pub fn new(coeffs: Vec<Cplx<T>>) -> Result<Self> {
        let sum: T = coeffs
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr());
        let defect = (sum - T::one()).abs();
        if defect > r(1e-9) {
            return Err(Error::NotNormalized {
                defect: lossy(defect),
            });
        }
        Ok(Self { coeffs })
    }

    #[inline]
    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    pub fn moduli_squared(&self) -> Vec<T> {
        self.coeffs.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Maximally entangled basis state labeled by `d-1` shift offsets `l` and a
/// phase residue `s`:
///
/// ```text
/// (1/sqrt d) sum_j exp(2 pi i j s / d) |j, j+l_1, ..., j+l_{d-1}>   (mod d)
/// ```
///
/// The `d^d` states obtained by ranging over all labels are orthonormal.
pub fn max_entangled<T: Real>(d: QuditDim, offsets: &[usize], s: usize) -> Result<StateVector<T>> {
    let n = d.get();
    if offsets.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: offsets.len(),
        });
    }
    for &l in offsets {
        if l >= n {
            return Err(Error::IndexOutOfRange {
                what: "entanglement offset l",
                value: l,
                bound: n,
            });
        }
    }
    if s >= n {
        return Err(Error::IndexOutOfRange {
            what: "phase residue s",
            value: s,
            bound: n,
        });
    }
    let mut amps = CVec::<T>::zeros(d.block_dim());
    let scale = T::one() / ru::<T>(n).sqrt();
    let mut digits = vec![0usize; n];
    for j in 0..n {
        digits[0] = j;
        for (site, &l) in offsets.iter().enumerate() {
            digits[site + 1] = (j + l) % n;
        }
        amps[digits_to_index(&digits, n)] =
            root_of_unity::<T>((j * s) as i64, n).scale(scale);
    }
    StateVector::new(d, amps)
}

/// Computational product state `|s_0> (x) ... (x) |s_{d-1}>`.
pub fn product_state<T: Real>(d: QuditDim, labels: &[usize]) -> Result<StateVector<T>> {
    let n = d.get();
    if labels.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: labels.len(),
        });
    }
    for &s in labels {
        if s >= n {
            return Err(Error::IndexOutOfRange {
                what: "product label s",
                value: s,
                bound: n,
            });
        }
    }
    let mut amps = CVec::<T>::zeros(d.block_dim());
    amps[digits_to_index(labels, n)] = Complex::new(T::one(), T::zero());
    StateVector::new(d, amps)
}

/// One-parameter family interpolating between the product state (`alpha = 0`)
/// and the maximally entangled state (`cos^2 alpha = 1/d`):
///
/// ```text
/// cos(alpha) |0>^(x)d + sin(alpha)/sqrt(d-1) sum_{j>=1} |j>^(x)d
/// ```
pub fn alpha_state<T: Real>(d: QuditDim, alpha: T) -> Result<StateVector<T>> {
    let n = d.get();
    let tail = alpha.sin() / ru::<T>(n - 1).sqrt();
    let mut coeffs = vec![Complex::new(tail, T::zero()); n];
    coeffs[0] = Complex::new(alpha.cos(), T::zero());
    diag_state(d, &DiagonalCoeffs::new(coeffs)?)
}

/// Diagonal coefficients of the four-level interpolating family
/// parameterized by `theta`.
///
/// `A_0 = (1 + e^{i theta} cos theta)/2`, `A_1 = e^{i theta} sin theta / 2`,
/// `A_2 = i A_1`, `A_3 = -A_1`. At `theta = 0` this is the product state; at
/// `theta = pi/2` all moduli are 1/2 and the state is maximally entangled.
pub fn km_coeffs<T: Real>(theta: T) -> Result<DiagonalCoeffs<T>> {
    let phase = Complex::new(theta.cos(), theta.sin());
    let half = r::<T>(0.5);
    let a0 = (Complex::new(T::one(), T::zero()) + phase.scale(theta.cos())).scale(half);
    let a1 = phase.scale(theta.sin() * half);
    let i = Complex::new(T::zero(), T::one());
    DiagonalCoeffs::new(vec![a0, a1, i * a1, -a1])
}

/// Four-qudit interpolating state with the [`km_coeffs`] coefficients.
pub fn km_state<T: Real>(theta: T) -> Result<StateVector<T>> {
    let d = QuditDim::new(4)?;
    diag_state(d, &km_coeffs(theta)?)
}

/// `sum_j A_j |j>^(x)d` for normalized diagonal coefficients.
pub fn diag_state<T: Real>(d: QuditDim, coeffs: &DiagonalCoeffs<T>) -> Result<StateVector<T>> {
    let n = d.get();
    if coeffs.as_slice().len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: coeffs.as_slice().len(),
        });
    }
    let mut amps = CVec::<T>::zeros(d.block_dim());
    for (j, &a) in coeffs.as_slice().iter().enumerate() {
        amps[digits_to_index(&vec![j; n], n)] = a;
    }
    // Renormalize away the 1e-9 slack allowed on the coefficients.
    let norm = amps.norm();
    let amps = amps.map(|z| z.unscale(norm));
    StateVector::new(d, amps)
}

/// `alpha` in `[0, pi/2]` with `cos^2 alpha` equal to the given value.
pub fn alpha_from_cos2<T: Real>(cos2: T) -> T {
    cos2.max(T::zero()).min(T::one()).sqrt().acos()
}

/// Maximally mixed single-site value `1/d` used in reduced-state checks.
pub fn maximally_mixed_site<T: Real>(d: QuditDim) -> T {
    T::one() / ru::<T>(d.get())
}

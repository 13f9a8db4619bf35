//! Generalized Pauli (Weyl-Heisenberg) operators on qudits, the cyclic shift,
//! controlled mod-d adders, and tensor-product utilities.
//!
//! A single-qudit error operator combines a cyclic shift by `m` levels with a
//! phase gradient of `n`:
//!
//! ```text
//! U[m,n] = sum_k exp(2 pi i k n / d) |k+m mod d><k|
//! ```
//!
//! `m = 1, n = 0` is the shift (the bit flip at d = 2) and `m = 0, n = 1` the
//! clock (the phase flip at d = 2). Phases are evaluated from exact integer
//! residues mod d so roots of unity carry no accumulated drift.

use crate::error::{Error, Result};
use crate::num::{cmod, ru, CMat, Cplx, Real};
use num_complex::Complex;

/// Dense operations are capped here: d = 5 already means 3125-dimensional
/// operators for a full d-qudit block.
pub const MAX_DENSE_D: usize = 5;

/// Number of levels per qudit. The block size studied by this crate couples
/// the particle count to the same value: `d` qudits of dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuditDim(usize);

impl QuditDim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall { d });
        }
        Ok(Self(d))
    }

    /// Levels per qudit (and qudits per block).
    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Dimension of the full block Hilbert space, `d^d`.
    #[inline]
    pub fn block_dim(self) -> usize {
        self.0.pow(self.0 as u32)
    }

    /// Errors out when dense matrices of size `d^d` would be unreasonable.
    pub fn check_dense(self) -> Result<()> {
        if self.0 > MAX_DENSE_D {
            return Err(Error::DimensionTooLarge {
                d: self.0,
                max: MAX_DENSE_D,
            });
        }
        Ok(())
    }
}

/// Label of a single-qudit error operator: shift part `m`, phase part `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliIndex {
    pub shift: usize,
    pub phase: usize,
}

impl PauliIndex {
    pub fn new(shift: usize, phase: usize) -> Self {
        Self { shift, phase }
    }

    pub fn check(self, d: QuditDim) -> Result<()> {
        if self.shift >= d.get() {
            return Err(Error::IndexOutOfRange {
                what: "shift index m",
                value: self.shift,
                bound: d.get(),
            });
        }
        if self.phase >= d.get() {
            return Err(Error::IndexOutOfRange {
                what: "phase index n",
                value: self.phase,
                bound: d.get(),
            });
        }
        Ok(())
    }
}

/// `exp(2 pi i k / d)` with `k` reduced mod `d` before any float arithmetic.
pub fn root_of_unity<T: Real>(k: i64, d: usize) -> Cplx<T> {
    let k = k.rem_euclid(d as i64) as usize;
    if k == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let theta = T::two_pi() * ru::<T>(k) / ru::<T>(d);
    Complex::new(theta.cos(), theta.sin())
}

/// Generalized Pauli operator `U[m,n]` as a dense `d x d` unitary.
pub fn gen_pauli<T: Real>(d: QuditDim, idx: PauliIndex) -> Result<CMat<T>> {
    idx.check(d)?;
    let n = d.get();
    let mut u = CMat::<T>::zeros(n, n);
    for k in 0..n {
        u[((k + idx.shift) % n, k)] = root_of_unity((k * idx.phase) as i64, n);
    }
    Ok(u)
}

/// Cyclic shift `U[1,0]`; its d-th power is the identity.
pub fn sigma_shift<T: Real>(d: QuditDim) -> CMat<T> {
    gen_pauli(d, PauliIndex::new(1, 0)).expect("(1,0) is always a valid index")
}

/// Phase `phi` with `U_a U_b = phi U_b U_a`.
///
/// The two operators commute up to `exp(2 pi i (m_b n_a - m_a n_b) / d)`.
pub fn commutation_phase<T: Real>(
    d: QuditDim,
    a: PauliIndex,
    b: PauliIndex,
) -> Result<Cplx<T>> {
    a.check(d)?;
    b.check(d)?;
    let exponent = (b.shift * a.phase) as i64 - (a.shift * b.phase) as i64;
    Ok(root_of_unity(exponent, d.get()))
}

fn check_dense_space(d: QuditDim, n_sites: usize) -> Result<usize> {
    d.check_dense()?;
    let dim = d
        .get()
        .checked_pow(n_sites as u32)
        .filter(|&dim| dim <= MAX_DENSE_D.pow(MAX_DENSE_D as u32))
        .ok_or(Error::DimensionTooLarge {
            d: d.get(),
            max: MAX_DENSE_D,
        })?;
    Ok(dim)
}

/// Controlled mod-d adder on `n_sites` qudits:
/// `C |i>_control |j>_target = |i>_control |j + i mod d>_target`,
/// identity on every other site.
pub fn cnot_gate<T: Real>(
    d: QuditDim,
    control: usize,
    target: usize,
    n_sites: usize,
) -> Result<CMat<T>> {
    if control == target {
        return Err(Error::ControlEqualsTarget { site: control });
    }
    for (what, site) in [("control site", control), ("target site", target)] {
        if site >= n_sites {
            return Err(Error::IndexOutOfRange {
                what,
                value: site,
                bound: n_sites,
            });
        }
    }
    let dim = check_dense_space(d, n_sites)?;
    let n = d.get();
    let mut gate = CMat::<T>::zeros(dim, dim);
    for col in 0..dim {
        let digits = index_to_digits(col, n, n_sites);
        let mut out = digits.clone();
        out[target] = (digits[target] + digits[control]) % n;
        gate[(digits_to_index(&out, n), col)] = Complex::new(T::one(), T::zero());
    }
    Ok(gate)
}

/// Tensor product of a list of matrices, left factor most significant.
/// An empty list gives the 1x1 identity.
pub fn kron_all<T: Real>(factors: &[CMat<T>]) -> Result<CMat<T>> {
    let mut acc = CMat::<T>::identity(1, 1);
    for f in factors {
        if f.nrows() == 0 || f.ncols() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        acc = acc.kronecker(f);
    }
    Ok(acc)
}

/// Conjugate transpose.
pub fn dagger<T: Real>(m: &CMat<T>) -> CMat<T> {
    m.adjoint()
}

/// Largest entry of `U U† - I`; zero for a unitary.
pub fn unitarity_defect<T: Real>(u: &CMat<T>) -> T {
    let n = u.nrows();
    let prod = u * u.adjoint();
    let mut defect = T::zero();
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { T::one() } else { T::zero() };
            let dev = cmod(prod[(i, j)] - Complex::new(expect, T::zero()));
            if dev > defect {
                defect = dev;
            }
        }
    }
    defect
}

/// Digits of a basis index, big-endian: site 0 is the most significant digit.
pub fn index_to_digits(index: usize, d: usize, n_sites: usize) -> Vec<usize> {
    let mut digits = vec![0; n_sites];
    let mut rest = index;
    for site in (0..n_sites).rev() {
        digits[site] = rest % d;
        rest /= d;
    }
    digits
}

/// Inverse of [`index_to_digits`].
pub fn digits_to_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &dig| acc * d + dig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::c64;

    fn d(n: usize) -> QuditDim {
        QuditDim::new(n).unwrap()
    }

    #[test]
    fn qudit_dim_rejects_degenerate_sizes() {
        assert!(QuditDim::new(0).is_err());
        assert!(QuditDim::new(1).is_err());
        assert!(QuditDim::new(2).is_ok());
        assert!(QuditDim::new(6).unwrap().check_dense().is_err());
    }

    #[test]
    fn gen_pauli_identity_and_bit_flip() {
        let id: CMat<f64> = gen_pauli(d(2), PauliIndex::new(0, 0)).unwrap();
        assert_eq!(id, CMat::<f64>::identity(2, 2));

        let flip: CMat<f64> = gen_pauli(d(2), PauliIndex::new(1, 0)).unwrap();
        assert_eq!(flip[(1, 0)], c64(1.0, 0.0));
        assert_eq!(flip[(0, 1)], c64(1.0, 0.0));
        assert_eq!(flip[(0, 0)], c64(0.0, 0.0));
        assert_eq!(flip[(1, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn gen_pauli_qutrit_shift_phase_action() {
        // m = n = 1 at d = 3: |0> -> |1>, |1> -> w |2>, |2> -> w^2 |0>,
        // w = exp(2 pi i / 3). Checked column by column.
        let u: CMat<f64> = gen_pauli(d(3), PauliIndex::new(1, 1)).unwrap();
        let w = root_of_unity::<f64>(1, 3);
        assert!((u[(1, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((u[(2, 1)] - w).norm() < 1e-15);
        assert!((u[(0, 2)] - w * w).norm() < 1e-15);
        assert!((w - c64(-0.5, 0.75f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn gen_pauli_rejects_out_of_range_indices() {
        assert!(gen_pauli::<f64>(d(3), PauliIndex::new(3, 0)).is_err());
        assert!(gen_pauli::<f64>(d(3), PauliIndex::new(0, 5)).is_err());
    }

    #[test]
    fn unitarity_over_all_indices_and_dims() {
        for n in 2..=5 {
            for m in 0..n {
                for ph in 0..n {
                    let u: CMat<f64> = gen_pauli(d(n), PauliIndex::new(m, ph)).unwrap();
                    assert!(unitarity_defect(&u) <= 1e-12, "d={n} m={m} n={ph}");
                }
            }
        }
    }

    #[test]
    fn shift_to_the_d_is_identity() {
        for n in 2..=5 {
            let s: CMat<f64> = sigma_shift(d(n));
            let mut acc = CMat::<f64>::identity(n, n);
            for _ in 0..n {
                acc = &s * acc;
            }
            let defect: f64 = (&acc - CMat::<f64>::identity(n, n)).norm();
            assert!(defect < 1e-12);
        }
    }

    #[test]
    fn commutation_phase_matches_matrix_products() {
        for n in 2..=4 {
            for ma in 0..n {
                for na in 0..n {
                    for mb in 0..n {
                        for nb in 0..n {
                            let a = PauliIndex::new(ma, na);
                            let b = PauliIndex::new(mb, nb);
                            let ua: CMat<f64> = gen_pauli(d(n), a).unwrap();
                            let ub: CMat<f64> = gen_pauli(d(n), b).unwrap();
                            let phi = commutation_phase::<f64>(d(n), a, b).unwrap();
                            let lhs = &ua * &ub;
                            let rhs = (&ub * &ua).map(|z| z * phi);
                            assert!((lhs - rhs).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn qubit_pauli_pair_anticommutes_and_self_commutes() {
        let x = PauliIndex::new(1, 0);
        let z = PauliIndex::new(0, 1);
        let phi = commutation_phase::<f64>(d(2), x, z).unwrap();
        assert!((phi - c64(-1.0, 0.0)).norm() < 1e-15);
        for n in 2..=5 {
            let idx = PauliIndex::new(1 % n, (n - 1) % n);
            let phi = commutation_phase::<f64>(d(n), idx, idx).unwrap();
            assert!((phi - c64(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn qutrit_commutation_example() {
        let phi = commutation_phase::<f64>(d(3), PauliIndex::new(1, 0), PauliIndex::new(0, 1))
            .unwrap();
        assert!((phi - root_of_unity::<f64>(-1, 3)).norm() < 1e-15);
    }

    #[test]
    fn cnot_qubit_truth_table() {
        let c: CMat<f64> = cnot_gate(d(2), 0, 1, 2).unwrap();
        // |10> -> |11>, |11> -> |10>, |0x> fixed.
        assert_eq!(c[(0, 0)], c64(1.0, 0.0));
        assert_eq!(c[(1, 1)], c64(1.0, 0.0));
        assert_eq!(c[(3, 2)], c64(1.0, 0.0));
        assert_eq!(c[(2, 3)], c64(1.0, 0.0));
    }

    #[test]
    fn cnot_qutrit_modular_addition() {
        let c: CMat<f64> = cnot_gate(d(3), 0, 1, 2).unwrap();
        // |2>|2> -> |2>|1>: column index 2*3+2 = 8, row index 2*3+1 = 7.
        assert_eq!(c[(7, 8)], c64(1.0, 0.0));
    }

    #[test]
    fn cnot_rejects_equal_sites_and_bad_sites() {
        assert!(cnot_gate::<f64>(d(3), 1, 1, 3).is_err());
        assert!(cnot_gate::<f64>(d(3), 0, 3, 3).is_err());
    }

    #[test]
    fn cnot_equals_shift_power_construction() {
        // Sum over control values of |i><i| (x) sigma^i, identity elsewhere.
        for n in [2usize, 3, 4] {
            let dd = d(n);
            let direct: CMat<f64> = cnot_gate(dd, 0, 1, 2).unwrap();
            let sigma: CMat<f64> = sigma_shift(dd);
            let mut built = CMat::<f64>::zeros(n * n, n * n);
            let mut sig_pow = CMat::<f64>::identity(n, n);
            for i in 0..n {
                let mut proj = CMat::<f64>::zeros(n, n);
                proj[(i, i)] = c64(1.0, 0.0);
                built += kron_all(&[proj, sig_pow.clone()]).unwrap();
                sig_pow = &sigma * sig_pow;
            }
            assert!((direct - built).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_conjugation_preserves_spectrum() {
        // Random Hermitian at d = 4 on two sites; unitary conjugation must
        // leave eigenvalues fixed.
        use nalgebra::SymmetricEigen;
        let n = 4usize;
        let dim = n * n;
        let mut h = CMat::<f64>::zeros(dim, dim);
        let mut seed = 1u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for i in 0..dim {
            for j in i..dim {
                let z = c64(next(), if i == j { 0.0 } else { next() });
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        let c: CMat<f64> = cnot_gate(d(n), 0, 1, 2).unwrap();
        let conj = &c * &h * c.adjoint();
        let mut before: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
        let mut after: Vec<f64> = SymmetricEigen::new(conj).eigenvalues.iter().cloned().collect();
        before.sort_by(|a, b| a.partial_cmp(b).unwrap());
        after.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn kron_and_dagger_basics() {
        let i2 = CMat::<f64>::identity(2, 2);
        let i4 = kron_all(&[i2.clone(), i2.clone()]).unwrap();
        assert_eq!(i4, CMat::<f64>::identity(4, 4));
        assert_eq!(kron_all::<f64>(&[]).unwrap(), CMat::<f64>::identity(1, 1));

        let u: CMat<f64> = gen_pauli(d(3), PauliIndex::new(1, 1)).unwrap();
        let prod = dagger(&u) * &u;
        assert!((prod - CMat::<f64>::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn digit_round_trip() {
        for idx in 0..27 {
            let digits = index_to_digits(idx, 3, 3);
            assert_eq!(digits_to_index(&digits, 3), idx);
        }
        assert_eq!(digits_to_index(&[1, 2, 0], 3), 15);
    }

    #[test]
    fn generic_scalar_instantiates_at_f32() {
        let u: CMat<f32> = gen_pauli(d(3), PauliIndex::new(2, 1)).unwrap();
        assert!(unitarity_defect(&u) < 1e-5);
    }
}

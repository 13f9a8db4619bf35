//! Error-probability tables and the memory-parameterized Kraus family.
//!
//! A single channel use applies the error `U[m,n]` with probability
//! `P[m,n]`, where the table has the four-parameter structure
//!
//! ```text
//! P[0,0] = p      P[0,n] = q  (n >= 1)
//! P[m,0] = r      P[m,n] = t  (m, n >= 1)
//! ```
//!
//! normalized as `p + (d-1)q + (d-1)r + (d-1)^2 t = 1`. Over a block of `d`
//! uses with memory degree `mu`, the error sequence is drawn from the
//! mixture `(1-mu) (product of marginals) + mu (identical error on every
//! use)`.

use crate::algebra::{gen_pauli, kron_all, PauliIndex, QuditDim};
use crate::error::{Error, Result};
use crate::num::{lossy, r, ru, CMat, Real};

const TABLE_TOL: f64 = 1e-12;

/// The `(p, q, r, t)` error-probability table for one qudit of dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliProbTable<T: Real> {
    d: QuditDim,
    p: T,
    q: T,
    r: T,
    t: T,
}

impl<T: Real> PauliProbTable<T> {
    /// General table; all four entries must be probabilities and satisfy the
    /// normalization condition within 1e-12.
    pub fn general(d: QuditDim, p: T, q: T, rr: T, t: T) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q), ("r", rr), ("t", t)] {
            check_probability(name, v)?;
        }
        let table = Self { d, p, q, r: rr, t };
        let defect = (table.normalization_sum() - T::one()).abs();
        if defect > r(TABLE_TOL) {
            return Err(Error::TableNotNormalized {
                defect: lossy(defect),
            });
        }
        Ok(table)
    }

    /// Quasi-classical depolarizing channel: `q = p`, `r = t = (1-dp)/(d(d-1))`.
    /// Requires `0 <= p <= 1/d`.
    pub fn quasi_classical(d: QuditDim, p: T) -> Result<Self> {
        let n = ru::<T>(d.get());
        if p < T::zero() || p > T::one() / n {
            return Err(Error::ProbabilityOutOfRange {
                name: "quasi-classical p",
                value: lossy(p),
                lo: 0.0,
                hi: 1.0 / d.get() as f64,
            });
        }
        let rest = (T::one() - n * p) / (n * (n - T::one()));
        Ok(Self {
            d,
            p,
            q: p,
            r: rest,
            t: rest,
        })
    }

    /// Depolarizing channel: `q = r = t = (1-p)/(d^2-1)`. Requires `0 <= p <= 1`.
    pub fn depolarizing(d: QuditDim, p: T) -> Result<Self> {
        check_probability("depolarizing p", p)?;
        let n = ru::<T>(d.get());
        let rest = (T::one() - p) / (n * n - T::one());
        Ok(Self {
            d,
            p,
            q: rest,
            r: rest,
            t: rest,
        })
    }

    /// Very high error channel: every entry equals `1/d^2`.
    pub fn high_error(d: QuditDim) -> Self {
        let n = ru::<T>(d.get());
        let v = T::one() / (n * n);
        Self {
            d,
            p: v,
            q: v,
            r: v,
            t: v,
        }
    }

    /// Noiseless table (`p = 1`).
    pub fn noiseless(d: QuditDim) -> Self {
        Self {
            d,
            p: T::one(),
            q: T::zero(),
            r: T::zero(),
            t: T::zero(),
        }
    }

    #[inline]
    pub fn dim(&self) -> QuditDim {
        self.d
    }

    pub fn p(&self) -> T {
        self.p
    }
    pub fn q(&self) -> T {
        self.q
    }
    pub fn r(&self) -> T {
        self.r
    }
    pub fn t(&self) -> T {
        self.t
    }

    /// `P[m,n]`.
    pub fn entry(&self, idx: PauliIndex) -> Result<T> {
        idx.check(self.d)?;
        Ok(match (idx.shift, idx.phase) {
            (0, 0) => self.p,
            (0, _) => self.q,
            (_, 0) => self.r,
            _ => self.t,
        })
    }

    /// `p + (d-1)q + (d-1)r + (d-1)^2 t`; equals 1 for a valid table.
    pub fn normalization_sum(&self) -> T {
        let k = ru::<T>(self.d.get() - 1);
        self.p + k * self.q + k * self.r + k * k * self.t
    }

    /// Probability that a use leaves the level untouched: `p + (d-1)q`.
    pub fn no_shift_marginal(&self) -> T {
        self.p + ru::<T>(self.d.get() - 1) * self.q
    }

    /// Probability of any one fixed nonzero shift: `r + (d-1)t`.
    pub fn shift_marginal(&self) -> T {
        self.r + ru::<T>(self.d.get() - 1) * self.t
    }

    /// `p - q`: single-qudit coherence survival factor within the unshifted
    /// sector. Zero for quasi-classical tables.
    pub fn no_shift_contrast(&self) -> T {
        self.p - self.q
    }

    /// `r - t`: coherence survival factor within each shifted sector. Zero
    /// for quasi-classical and depolarizing tables.
    pub fn shift_contrast(&self) -> T {
        self.r - self.t
    }
}

fn check_probability<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v < T::zero() || v > T::one() {
        return Err(Error::ProbabilityOutOfRange {
            name,
            value: lossy(v),
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// A probability table together with the degree of memory `mu` across the
/// block of `d` uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedChannel<T: Real> {
    table: PauliProbTable<T>,
    mu: T,
}

impl<T: Real> CorrelatedChannel<T> {
    pub fn new(table: PauliProbTable<T>, mu: T) -> Result<Self> {
        if mu < T::zero() || mu > T::one() {
            return Err(Error::ProbabilityOutOfRange {
                name: "memory degree mu",
                value: lossy(mu),
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self { table, mu })
    }

    #[inline]
    pub fn table(&self) -> &PauliProbTable<T> {
        &self.table
    }

    #[inline]
    pub fn mu(&self) -> T {
        self.mu
    }

    #[inline]
    pub fn dim(&self) -> QuditDim {
        self.table.d
    }

    /// Number of channel uses per block; coupled to the qudit dimension.
    #[inline]
    pub fn uses(&self) -> usize {
        self.table.d.get()
    }

    /// Weight of one error sequence: `(1-mu) prod_i P[m_i,n_i]` plus, for
    /// constant sequences, `mu P[m_0,n_0]`.
    pub fn sequence_weight(&self, sequence: &[PauliIndex]) -> Result<T> {
        if sequence.len() != self.uses() {
            return Err(Error::DimensionMismatch {
                expected: self.uses(),
                found: sequence.len(),
            });
        }
        let mut product = T::one();
        let mut constant = true;
        for idx in sequence {
            product *= self.table.entry(*idx)?;
            constant &= *idx == sequence[0];
        }
        let mut w = (T::one() - self.mu) * product;
        if constant {
            w += self.mu * self.table.entry(sequence[0])?;
        }
        Ok(w)
    }

    /// Lazy enumeration of all `(d^2)^d` error sequences with their weights.
    ///
    /// This is an inspection API: the exact channel application in
    /// [`crate::oracle`] uses the `(1-mu)/mu` decomposition instead of
    /// materializing this family.
    pub fn kraus_terms(&self) -> KrausTerms<'_, T> {
        let d = self.uses();
        let per_use = d * d;
        KrausTerms {
            channel: self,
            next: 0,
            total: (per_use as u128).pow(d as u32),
        }
    }
}

/// One term of the Kraus family: a weight and the per-use error labels.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausTerm<T: Real> {
    pub weight: T,
    pub sequence: Vec<PauliIndex>,
}

impl<T: Real> KrausTerm<T> {
    /// Dense operator `sqrt(weight) U[m_0,n_0] (x) ... (x) U[m_{d-1},n_{d-1}]`.
    pub fn matrix(&self, d: QuditDim) -> Result<CMat<T>> {
        d.check_dense()?;
        let factors: Result<Vec<_>> = self
            .sequence
            .iter()
            .map(|idx| gen_pauli::<T>(d, *idx))
            .collect();
        let op = kron_all(&factors?)?;
        Ok(op.map(|z| z.scale(self.weight.sqrt())))
    }
}

/// Iterator over the full Kraus family in lexicographic sequence order.
pub struct KrausTerms<'a, T: Real> {
    channel: &'a CorrelatedChannel<T>,
    next: u128,
    total: u128,
}

impl<T: Real> Iterator for KrausTerms<'_, T> {
    type Item = KrausTerm<T>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let d = self.channel.uses();
        let per_use = (d * d) as u128;
        let mut code = self.next;
        self.next += 1;
        let mut sequence = Vec::with_capacity(d);
        for _ in 0..d {
            let label = (code % per_use) as usize;
            sequence.push(PauliIndex::new(label / d, label % d));
            code /= per_use;
        }
        sequence.reverse();
        let weight = self
            .channel
            .sequence_weight(&sequence)
            .expect("enumerated sequence is valid");
        Some(KrausTerm { weight, sequence })
    }
}

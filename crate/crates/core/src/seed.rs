//! Seeds of a cluster algebra of geometric type and seed mutation.
//!
//! Every cluster variable is stored as a Laurent polynomial in the initial
//! extended cluster. Variables are identified by their slot, so a mutation
//! at `k` overwrites slot `k`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::laurent::{LaurentPoly, Monomial, Ring, Var};
use crate::matrix::ExchangeMatrix;

#[derive(Clone, Debug)]
pub struct Seed {
    matrix: ExchangeMatrix,
    cluster: Vec<LaurentPoly>,
    frozen: Vec<LaurentPoly>,
    history: Vec<usize>,
}

impl Seed {
    /// The initial seed: cluster `x_1..x_n`, frozen `y_1..y_m`, with
    /// variable names taken from the matrix row labels.
    pub fn initial(matrix: &ExchangeMatrix) -> Seed {
        Seed::initial_in(matrix, Ring::new(matrix.row_labels().to_vec(), matrix.n()))
    }

    /// Like [`Seed::initial`] but over the ground ring `Z[y^{±1}]`.
    pub fn initial_inverted(matrix: &ExchangeMatrix) -> Seed {
        Seed::initial_in(matrix, Ring::with_inverted_frozen(matrix.row_labels().to_vec(), matrix.n()))
    }

    fn initial_in(matrix: &ExchangeMatrix, ring: Arc<Ring>) -> Seed {
        let n = matrix.n();
        let vars: Vec<LaurentPoly> = (0..matrix.rows()).map(|v| LaurentPoly::var(&ring, v as Var)).collect();
        Seed {
            matrix: matrix.clone(),
            cluster: vars[..n].to_vec(),
            frozen: vars[n..].to_vec(),
            history: Vec::new(),
        }
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn cluster(&self) -> &[LaurentPoly] {
        &self.cluster
    }

    pub fn frozen(&self) -> &[LaurentPoly] {
        &self.frozen
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.cluster.first().or(self.frozen.first()).expect("seed has variables").ring()
    }

    fn extended(&self, t: usize) -> &LaurentPoly {
        if t < self.cluster.len() {
            &self.cluster[t]
        } else {
            &self.frozen[t - self.cluster.len()]
        }
    }

    /// The two monomials of the exchange relation at `k`, evaluated on the
    /// stored expansions.
    pub fn exchange_binomial(&self, k: usize) -> LaurentPoly {
        self.exchange_binomial_within(k, u64::MAX).expect("unbounded product")
    }

    fn exchange_binomial_within(&self, k: usize, max_work: u64) -> Option<LaurentPoly> {
        let ring = self.ring();
        let mut pos = LaurentPoly::one(ring);
        let mut neg = LaurentPoly::one(ring);
        for t in 0..self.matrix.rows() {
            let b = self.matrix.get(t, k);
            if b.is_zero() {
                continue;
            }
            let e = b.abs().to_i64().and_then(|e| u32::try_from(e).ok()).expect("exchange exponent fits in u32");
            let factor = self.extended(t).pow_within(e, max_work)?;
            if b.is_positive() {
                pos = pos.mul_within(&factor, max_work)?;
            } else {
                neg = neg.mul_within(&factor, max_work)?;
            }
        }
        Some(&pos + &neg)
    }

    /// Seed mutation in direction `k` (0-based).
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        self.mutate_within(k, u64::MAX).map(|s| s.expect("unbounded mutation"))
    }

    /// Seed mutation that gives up (`Ok(None)`) once a polynomial product
    /// or the final division would take more than `max_work` term products.
    pub fn mutate_within(&self, k: usize, max_work: u64) -> Result<Option<Seed>> {
        let n = self.cluster.len();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k + 1, bound: n });
        }
        let Some(binomial) = self.exchange_binomial_within(k, max_work) else {
            return Ok(None);
        };
        if (binomial.nterms() as u64).saturating_mul(self.cluster[k].nterms() as u64) > max_work {
            return Ok(None);
        }
        let fresh = binomial.exact_div(&self.cluster[k])?;
        Ok(Some(self.replaced(k, fresh)))
    }

    fn replaced(&self, k: usize, fresh: LaurentPoly) -> Seed {
        let mut cluster = self.cluster.clone();
        cluster[k] = fresh;
        let mut history = self.history.clone();
        history.push(k);
        Seed {
            matrix: self.matrix.mutate(k),
            cluster,
            frozen: self.frozen.clone(),
            history,
        }
    }

    /// Folds [`Seed::mutate`] over a 0-based sequence.
    pub fn expand(&self, seq: &[usize]) -> Result<Seed> {
        let mut s = self.clone();
        for &k in seq {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Matrix, then one polynomial per cluster entry.
    pub fn dump(&self) -> String {
        let mut out = self.matrix.to_text();
        for v in &self.cluster {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    /// Expansions of the initial exchangeable variables as Laurent
    /// polynomials in this seed's cluster (over a ring with the same names,
    /// now read as this seed's variables).
    pub fn initial_cluster_in_terms_of_self(&self) -> Result<Vec<LaurentPoly>> {
        let ring = self.ring().clone();
        let n = self.cluster.len();
        let vars: Vec<LaurentPoly> = (0..self.matrix.rows()).map(|v| LaurentPoly::var(&ring, v as Var)).collect();
        let mut back = Seed {
            matrix: self.matrix.clone(),
            cluster: vars[..n].to_vec(),
            frozen: vars[n..].to_vec(),
            history: Vec::new(),
        };
        for &k in self.history.iter().rev() {
            back = back.mutate(k)?;
        }
        Ok(back.cluster)
    }
}

/// Equality of matrix and cluster; history is ignored.
impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.cluster == other.cluster
    }
}

/// The polynomial obtained by setting every exchangeable variable to 1.
pub fn f_polynomial(v: &LaurentPoly) -> LaurentPoly {
    v.set_exchangeable_to_one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeTerm {
    pub coeff: Int,
    pub monomial: Monomial,
    pub rendered: String,
}

/// `Ok` iff every coefficient is non-negative; otherwise the first
/// offending term in ascending order.
pub fn check_positive(v: &LaurentPoly) -> std::result::Result<(), NegativeTerm> {
    match v.negative_term() {
        None => Ok(()),
        Some((coeff, monomial)) => {
            let rendered = v.render_monomial(&monomial);
            Err(NegativeTerm { coeff, monomial, rendered })
        }
    }
}

/// Whether `v`, a Laurent polynomial in the initial extended cluster, is a
/// Laurent polynomial in the cluster of `s` with coefficients in the ground
/// ring. `v` must live in the ring of `s`.
pub fn laurent_in_cluster(v: &LaurentPoly, s: &Seed) -> bool {
    laurent_expansion_in(v, s).is_ok()
}

/// The expansion of `v` in the cluster of `s`, or the inexact division that
/// shows there is none.
pub fn laurent_expansion_in(v: &LaurentPoly, s: &Seed) -> Result<LaurentPoly> {
    let mut images = s.initial_cluster_in_terms_of_self()?;
    let ring = s.ring().clone();
    images.extend((s.cluster.len()..ring.len()).map(|t| LaurentPoly::var(&ring, t as Var)));
    v.substitute(&images)
}

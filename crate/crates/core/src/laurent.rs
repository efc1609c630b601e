//! Sparse multivariate Laurent polynomials over the integers.
//!
//! A [`Ring`] fixes an ordered list of variables: the first
//! `n_exchangeable` are Laurent variables (`x`), the rest are frozen (`y`)
//! and by default may only carry non-negative exponents. Terms are kept in
//! graded-lexicographic order, which makes equality, hashing and
//! serialization canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::int::Int;

pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    n_exchangeable: usize,
    inverted_frozen: bool,
}

impl Ring {
    pub fn new(names: Vec<String>, n_exchangeable: usize) -> Arc<Ring> {
        assert!(n_exchangeable <= names.len());
        Arc::new(Ring {
            names,
            n_exchangeable,
            inverted_frozen: false,
        })
    }

    /// Ring over `Z[y^{±1}]` instead of `Z[y]`.
    pub fn with_inverted_frozen(names: Vec<String>, n_exchangeable: usize) -> Arc<Ring> {
        assert!(n_exchangeable <= names.len());
        Arc::new(Ring {
            names,
            n_exchangeable,
            inverted_frozen: true,
        })
    }

    /// `x1..xn, y1..ym`.
    pub fn standard(n: usize, m: usize) -> Arc<Ring> {
        let names = (1..=n).map(|i| format!("x{i}")).chain((1..=m).map(|j| format!("y{j}"))).collect();
        Ring::new(names, n)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn n_exchangeable(&self) -> usize {
        self.n_exchangeable
    }

    pub fn n_frozen(&self) -> usize {
        self.names.len() - self.n_exchangeable
    }

    pub fn is_frozen(&self, v: Var) -> bool {
        v as usize >= self.n_exchangeable
    }

    pub fn inverted_frozen(&self) -> bool {
        self.inverted_frozen
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(|p| p as Var)
    }
}

/// Exponent vector stored sparsely: `(variable, exponent)` pairs sorted by
/// variable, with no zero exponents.
///
/// `Ord` is graded lexicographic: total degree first, then the dense
/// exponent vectors compared lexicographically from the first variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, i32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Monomial::one();
        if e != 0 {
            m.0.push((v, e));
        }
        m
    }

    /// From `(variable, exponent)` pairs in any order; repeated variables add.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut v: SmallVec<[(Var, i32); 6]> = pairs.into_iter().collect();
        v.sort_unstable_by_key(|p| p.0);
        let mut out: SmallVec<[(Var, i32); 6]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> i32 {
        match self.0.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|p| p.1 as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(Var, i32); 6]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// True iff every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|p| p.1 >= 0)
    }

    /// Keeps only the variables for which `keep` holds.
    pub fn restrict(&self, keep: impl Fn(Var) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| keep(p.0)).collect())
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[derive(Clone)]
pub struct LaurentPoly {
    ring: Arc<Ring>,
    /// Ascending graded-lex order, no zero coefficients.
    terms: Vec<(Monomial, Int)>,
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LaurentPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        LaurentPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        LaurentPoly::constant(ring, Int::ONE)
    }

    pub fn constant(ring: &Arc<Ring>, c: Int) -> Self {
        LaurentPoly::monomial(ring, Monomial::one(), c)
    }

    pub fn var(ring: &Arc<Ring>, v: Var) -> Self {
        assert!((v as usize) < ring.len(), "variable {v} outside ring of {} variables", ring.len());
        LaurentPoly::monomial(ring, Monomial::var(v, 1), Int::ONE)
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Int) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        LaurentPoly { ring: ring.clone(), terms }
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Int)>) -> Self {
        let mut acc: FxHashMap<Monomial, Int> = FxHashMap::default();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            acc.entry(m).and_modify(|e| *e += &c).or_insert(c);
        }
        LaurentPoly::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: FxHashMap<Monomial, Int>) -> Self {
        let mut terms: Vec<(Monomial, Int)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Int)> + ExactSizeIterator {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Int)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Int {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn constant_term(&self) -> Int {
        self.coeff(&Monomial::one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Int)> {
        self.terms.last().map(|(m, c)| (m, c))
    }

    fn check_ring(&self, other: &LaurentPoly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &LaurentPoly, negate: bool) -> LaurentPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Int| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        LaurentPoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero(&self.ring);
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_term(m, c);
        }
        let mut acc: FxHashMap<Monomial, Int> = FxHashMap::default();
        acc.reserve(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        LaurentPoly::from_map(&self.ring, acc)
    }

    /// Multiplication by a single term; monomial orders are translation
    /// invariant, so the term order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Int) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(&self.ring);
        }
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> LaurentPoly {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn neg(&self) -> LaurentPoly {
        self.scale(&Int::from(-1))
    }

    pub fn pow(&self, mut e: u32) -> LaurentPoly {
        if let Some((m, c)) = self.as_monomial() {
            return LaurentPoly::monomial(&self.ring, m.pow(e as i32), c.pow(e));
        }
        let mut base = self.clone();
        let mut acc = LaurentPoly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Like `a * b`, but gives up (returns `None`) when the number of term
    /// products would exceed `max_work`.
    pub fn mul_within(&self, other: &LaurentPoly, max_work: u64) -> Option<LaurentPoly> {
        if (self.terms.len() as u64).saturating_mul(other.terms.len() as u64) > max_work {
            return None;
        }
        Some(self.mul_unchecked(other))
    }

    /// [`LaurentPoly::pow`] with every intermediate product bounded as in
    /// [`LaurentPoly::mul_within`].
    pub fn pow_within(&self, mut e: u32, max_work: u64) -> Option<LaurentPoly> {
        if let Some((m, c)) = self.as_monomial() {
            return Some(LaurentPoly::monomial(&self.ring, m.pow(e as i32), c.pow(e)));
        }
        let mut base = self.clone();
        let mut acc = LaurentPoly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_within(&base, max_work)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_within(&base, max_work)?;
            }
        }
        Some(acc)
    }

    /// Exponent-wise minimum over all terms (zero for absent variables).
    pub fn min_exponents(&self) -> Monomial {
        let Some((first, _)) = self.terms.first() else {
            return Monomial::one();
        };
        let mut mins: BTreeMap<Var, i32> = first.pairs().iter().copied().collect();
        for (m, _) in &self.terms[1..] {
            for &(v, e) in m.pairs() {
                let slot = mins.entry(v).or_insert(0);
                *slot = (*slot).min(e);
            }
            // a variable missing from this term has exponent 0 here
            for (v, slot) in mins.iter_mut() {
                if m.exponent(*v) == 0 {
                    *slot = (*slot).min(0);
                }
            }
        }
        Monomial::from_pairs(mins)
    }

    /// Negative part of [`Self::min_exponents`].
    fn negative_min(&self) -> Monomial {
        Monomial::from_pairs(self.min_exponents().pairs().iter().copied().filter(|p| p.1 < 0))
    }

    /// The monomial `x^d` such that `x^d · self` has no negative exponent in
    /// any exchangeable variable.
    pub fn denominator(&self) -> Monomial {
        let n = self.ring.n_exchangeable() as Var;
        self.negative_min().restrict(|v| v < n).inverse()
    }

    /// True iff every frozen exponent is non-negative (or the ring inverts
    /// frozen variables).
    pub fn in_ground_ring(&self) -> bool {
        if self.ring.inverted_frozen {
            return true;
        }
        self.terms
            .iter()
            .all(|(m, _)| m.pairs().iter().all(|&(v, e)| e >= 0 || !self.ring.is_frozen(v)))
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// Both operands are shifted by their exponent-wise minima so that they
    /// become ordinary polynomials, then the dividend is reduced against the
    /// divisor's leading term. A nonzero remainder, or a quotient with a
    /// negative frozen exponent when frozen variables are not inverted,
    /// yields [`Error::InexactDivision`].
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(&self.ring));
        }
        let quotient = if let Some((m, c)) = divisor.as_monomial() {
            let inv = m.inverse();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (mm, cc) in &self.terms {
                match cc.exact_div(c) {
                    Some(q) => terms.push((mm.mul(&inv), q)),
                    None => {
                        return Err(Error::InexactDivision {
                            remainder: self.render_term(mm, cc),
                        })
                    }
                }
            }
            LaurentPoly {
                ring: self.ring.clone(),
                terms,
            }
        } else {
            self.divide_polynomial_frame(divisor)?
        };
        if !quotient.in_ground_ring() {
            let bad = quotient
                .terms
                .iter()
                .find(|(m, _)| m.pairs().iter().any(|&(v, e)| e < 0 && quotient.ring.is_frozen(v)))
                .expect("some term leaves the ground ring");
            return Err(Error::InexactDivision {
                remainder: format!("quotient term {} has a negative frozen exponent", quotient.render_term(&bad.0, &bad.1)),
            });
        }
        Ok(quotient)
    }

    fn divide_polynomial_frame(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let shift_a = self.min_exponents().inverse();
        let shift_b = divisor.min_exponents().inverse();
        let b_terms: Vec<(Monomial, Int)> = divisor.terms.iter().map(|(m, c)| (m.mul(&shift_b), c.clone())).collect();
        let (lead_m, lead_c) = b_terms.last().cloned().expect("divisor is nonzero");

        let mut rem: BTreeMap<Monomial, Int> = self.terms.iter().map(|(m, c)| (m.mul(&shift_a), c.clone())).collect();
        let mut quotient: Vec<(Monomial, Int)> = Vec::new();
        while let Some((rm, rc)) = rem.pop_last() {
            let qm = rm.div(&lead_m);
            let qc = match (qm.is_polynomial(), rc.exact_div(&lead_c)) {
                (true, Some(qc)) => qc,
                _ => {
                    rem.insert(rm.clone(), rc.clone());
                    return Err(Error::InexactDivision {
                        remainder: self.render_term(&rm.mul(&shift_a.inverse()), &rc),
                    });
                }
            };
            for (bm, bc) in &b_terms[..b_terms.len() - 1] {
                let key = bm.mul(&qm);
                let delta = bc * &qc;
                match rem.get_mut(&key) {
                    Some(slot) => {
                        *slot -= &delta;
                        if slot.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        // undo the shifts: q = q' · x^{-shift_a} · x^{shift_b}
        let back = shift_b.mul(&shift_a.inverse());
        let mut terms: Vec<(Monomial, Int)> = quotient.into_iter().map(|(m, c)| (m.mul(&back), c)).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(LaurentPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Substitutes 1 for every exchangeable variable.
    pub fn set_exchangeable_to_one(&self) -> LaurentPoly {
        let n = self.ring.n_exchangeable() as Var;
        LaurentPoly::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.restrict(|v| v >= n), c.clone())))
    }

    /// Ring homomorphism induced by a variable-to-variable map into `target`.
    pub fn map_vars(&self, target: &Arc<Ring>, f: impl Fn(Var) -> Var) -> LaurentPoly {
        LaurentPoly::from_terms(
            target,
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::from_pairs(m.pairs().iter().map(|&(v, e)| (f(v), e))), c.clone())),
        )
    }

    /// Substitutes `images[v]` for each variable `v`. Negative exponents are
    /// handled by clearing denominators and dividing exactly, so this fails
    /// with [`Error::InexactDivision`] when the result is not a Laurent
    /// polynomial over the images' ring.
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly> {
        assert_eq!(images.len(), self.ring.len(), "one image per variable");
        let target = images.first().map(|p| p.ring.clone()).ok_or(Error::RingMismatch)?;
        for img in images {
            if !same_ring(&img.ring, &target) {
                return Err(Error::RingMismatch);
            }
        }
        let shift = self.negative_min().inverse();
        let mut powers: FxHashMap<(Var, i32), LaurentPoly> = FxHashMap::default();
        let mut power = |v: Var, e: i32| -> LaurentPoly {
            powers.entry((v, e)).or_insert_with(|| images[v as usize].pow(e as u32)).clone()
        };
        let mut acc: FxHashMap<Monomial, Int> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::constant(&target, c.clone());
            for &(v, e) in m.mul(&shift).pairs() {
                t = t.mul_unchecked(&power(v, e));
            }
            for (tm, tc) in t.terms {
                acc.entry(tm).and_modify(|e| *e += &tc).or_insert(tc);
            }
        }
        let mut quotient = LaurentPoly::from_map(&target, acc);
        // divide out monomial images in one step, then each remaining factor
        // in turn so that an inexact step is found before large powers are formed
        let mut monomial_part = LaurentPoly::one(&target);
        for &(v, e) in shift.pairs() {
            let img = &images[v as usize];
            if img.as_monomial().is_some() {
                monomial_part = monomial_part.mul_unchecked(&img.pow(e as u32));
            }
        }
        quotient = quotient.exact_div(&monomial_part)?;
        for &(v, e) in shift.pairs() {
            let img = &images[v as usize];
            if img.as_monomial().is_none() {
                for _ in 0..e {
                    quotient = quotient.exact_div(img)?;
                }
            }
        }
        Ok(quotient)
    }

    /// First term with a negative coefficient, if any.
    pub fn negative_term(&self) -> Option<(Int, Monomial)> {
        self.terms.iter().find(|(_, c)| c.is_negative()).map(|(m, c)| (c.clone(), m.clone()))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.pairs()
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    self.ring.name(v).to_string()
                } else {
                    format!("{}^{}", self.ring.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    fn render_term(&self, m: &Monomial, c: &Int) -> String {
        if m.is_one() {
            c.to_string()
        } else if c.is_one() {
            self.render_monomial(m)
        } else if *c == -1 {
            format!("-{}", self.render_monomial(m))
        } else {
            format!("{}*{}", c, self.render_monomial(m))
        }
    }

    /// Parses the canonical text form, e.g. `3*x1^-2*x2*y1 + 1`.
    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<LaurentPoly> {
        Parser {
            ring,
            src: text.as_bytes(),
            pos: 0,
        }
        .poly()
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

/// Leading (largest) term first.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                f.write_str(&self.render_term(m, c))?;
            } else if c.is_negative() {
                write!(f, " - {}", self.render_term(m, &-c))?;
            } else {
                write!(f, " + {}", self.render_term(m, c))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

macro_rules! ring_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics if the operands live in different rings.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$try(rhs).expect("operands share a ring")
            }
        }
    };
}

ring_op!(Add, add, try_add);
ring_op!(Sub, sub, try_sub);
ring_op!(Mul, mul, try_mul);

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut negative = false;
        if self.peek() == Some(b'-') {
            negative = true;
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let (m, c) = self.term()?;
            terms.push((m, if negative { -c } else { c }));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            self.pos += 1;
        }
        Ok(LaurentPoly::from_terms(self.ring, terms))
    }

    fn term(&mut self) -> Result<(Monomial, Int)> {
        let mut coeff = Int::ONE;
        let mut pairs = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b) if b.is_ascii_digit() => coeff = &coeff * &self.integer()?,
                Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                    let start = self.pos;
                    while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_') {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    let var = self
                        .ring
                        .var_by_name(name)
                        .ok_or_else(|| Error::parse(1, start + 1, format!("unknown variable `{name}`")))?;
                    self.skip_ws();
                    let mut e: i32 = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let neg = self.peek() == Some(b'-');
                        if neg {
                            self.pos += 1;
                        }
                        let v = self.integer()?.to_i64().and_then(|v| i32::try_from(v).ok()).ok_or_else(|| self.err("exponent too large"))?;
                        e = if neg { -v } else { v };
                    }
                    pairs.push((var, e));
                }
                _ => return Err(self.err("expected a coefficient or variable")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_pairs(pairs), coeff))
    }

    fn integer(&mut self) -> Result<Int> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.err("bad integer"))
    }
}

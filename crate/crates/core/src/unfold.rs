//! Seeds on the covering quiver and their projection onto the base seed.
//!
//! A cover seed attaches a Laurent polynomial to (some of) the vertices of a
//! [`LabeledQuiver`]. Its ring has one variable per vertex of a chosen
//! support set, named `x<id>` for exchangeable and `y<id>` for frozen
//! vertices. [`pi`] sends the variable of vertex `u` to the base variable of
//! its label.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::laurent::{LaurentPoly, Ring, Var};
use crate::matrix::ExchangeMatrix;
use crate::quiver::{build_unfolding, LabeledQuiver};
use crate::report::VerificationReport;
use crate::seed::Seed;
use crate::sequence::one_based;

#[derive(Clone, Debug)]
pub struct CoverSeed {
    quiver: LabeledQuiver,
    ring: Arc<Ring>,
    /// Vertex id of each ring variable.
    support: Vec<usize>,
    /// Current variable per vertex; `None` outside the support or once the
    /// exchange relation at the vertex could no longer be evaluated.
    vars: Vec<Option<LaurentPoly>>,
}

impl CoverSeed {
    /// The initial seed over every vertex of `quiver`.
    pub fn initial(quiver: &LabeledQuiver) -> CoverSeed {
        CoverSeed::on_support(quiver, &(0..quiver.vertex_count()).collect::<Vec<_>>())
    }

    /// The initial seed with variables only at the given vertices.
    pub fn on_support(quiver: &LabeledQuiver, vertices: &[usize]) -> CoverSeed {
        let mut support: Vec<usize> = vertices.to_vec();
        support.sort_unstable();
        support.dedup();
        // exchangeable vertices first, as the ring expects
        support.sort_by_key(|&v| quiver.vertex(v).frozen);
        let n_x = support.iter().filter(|&&v| !quiver.vertex(v).frozen).count();
        let names = support
            .iter()
            .map(|&v| format!("{}{}", if quiver.vertex(v).frozen { "y" } else { "x" }, v))
            .collect();
        let ring = Ring::new(names, n_x);
        let mut vars = vec![None; quiver.vertex_count()];
        for (i, &v) in support.iter().enumerate() {
            vars[v] = Some(LaurentPoly::var(&ring, i as Var));
        }
        CoverSeed {
            quiver: quiver.clone(),
            ring,
            support,
            vars,
        }
    }

    pub fn quiver(&self) -> &LabeledQuiver {
        &self.quiver
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn variable(&self, v: usize) -> Option<&LaurentPoly> {
        self.vars[v].as_ref()
    }

    /// Labels of the ring variables, in ring order.
    pub fn label_map(&self) -> Vec<usize> {
        self.support.iter().map(|&v| self.quiver.vertex(v).label).collect()
    }

    /// The seed whose variable at each support vertex is already projected:
    /// base variable `l` of `base_ring` sits on every vertex of label `l`.
    /// Mutating it computes `pi` of the cover variables without the cover
    /// ring, since `pi` is a ring homomorphism and the cover divisions are
    /// exact.
    pub fn projected(quiver: &LabeledQuiver, vertices: &[usize], base_ring: &Arc<Ring>) -> CoverSeed {
        let mut vars = vec![None; quiver.vertex_count()];
        for &v in vertices {
            vars[v] = Some(LaurentPoly::var(base_ring, quiver.vertex(v).label as Var));
        }
        let mut support = vertices.to_vec();
        support.sort_unstable();
        support.dedup();
        CoverSeed {
            quiver: quiver.clone(),
            ring: base_ring.clone(),
            support,
            vars,
        }
    }

    /// The exchange relation at vertex `u`, if `u` is exact and all its
    /// neighbors carry variables. `Ok(None)` means a product went over
    /// `max_work` term pairs.
    fn exchange(&self, u: usize, max_work: u64) -> Option<Result<Option<LaurentPoly>>> {
        if !self.quiver.is_exact(u) {
            return None;
        }
        let xu = self.vars[u].as_ref()?;
        let mut pos = LaurentPoly::one(&self.ring);
        let mut neg = LaurentPoly::one(&self.ring);
        for (w, b) in self.quiver.neighbors(u) {
            // b = b[u][w]; the exchange relation reads b[w][u] = -b
            let xw = self.vars[*w].as_ref()?;
            let e = b.abs().to_i64().and_then(|e| u32::try_from(e).ok()).expect("multiplicity fits in u32");
            let side = if b.is_negative() { &mut pos } else { &mut neg };
            let Some(f) = xw.pow_within(e, max_work) else {
                return Some(Ok(None));
            };
            let Some(prod) = side.mul_within(&f, max_work) else {
                return Some(Ok(None));
            };
            *side = prod;
        }
        Some((&pos + &neg).exact_div(xu).map(Some))
    }

    /// Mutates every variable of the class by its own exchange relation,
    /// then orbit-mutates the quiver.
    pub fn orbit_mutate(&self, label: usize) -> Result<CoverSeed> {
        let all: BTreeSet<usize> = (0..self.quiver.vertex_count()).collect();
        Ok(self.orbit_mutate_within(label, &all, u64::MAX)?.expect("no work limit"))
    }

    /// Like [`CoverSeed::orbit_mutate`], but only the class vertices in
    /// `keep` get new variables; the others are dropped. `Ok(None)` means
    /// some product went over `max_work` term pairs.
    pub fn orbit_mutate_within(&self, label: usize, keep: &BTreeSet<usize>, max_work: u64) -> Result<Option<CoverSeed>> {
        let quiver = self.quiver.orbit_mutate(label)?;
        let mut vars = self.vars.clone();
        for u in self.quiver.class(label) {
            vars[u] = if keep.contains(&u) {
                match self.exchange(u, max_work) {
                    Some(r) => match r? {
                        Some(v) => Some(v),
                        None => return Ok(None),
                    },
                    None => None,
                }
            } else {
                None
            };
        }
        Ok(Some(CoverSeed {
            quiver,
            ring: self.ring.clone(),
            support: self.support.clone(),
            vars,
        }))
    }
}

/// The ring homomorphism `x_u -> x_[u]`, `y_v -> y_[v]` into `base_ring`,
/// whose variable `l` belongs to label `l`.
pub fn pi(v: &LaurentPoly, label_map: &[usize], base_ring: &Arc<Ring>) -> LaurentPoly {
    v.map_vars(base_ring, |var| label_map[var as usize] as Var)
}

/// A base seed together with a cover seed over the whole truncation.
#[derive(Clone, Debug)]
pub struct UnfoldedSeedPair {
    pub base: Seed,
    pub cover: CoverSeed,
    pub label_map: Vec<usize>,
}

impl UnfoldedSeedPair {
    pub fn new(b: &ExchangeMatrix, depth: usize) -> Result<Self> {
        let q = build_unfolding(b, depth)?;
        let cover = CoverSeed::initial(&q);
        Ok(UnfoldedSeedPair {
            base: Seed::initial(b),
            label_map: cover.label_map(),
            cover,
        })
    }

    pub fn orbit_mutate(&self, label: usize) -> Result<Self> {
        Ok(UnfoldedSeedPair {
            base: self.base.mutate(label)?,
            cover: self.cover.orbit_mutate(label)?,
            label_map: self.label_map.clone(),
        })
    }

    pub fn project(&self, v: &LaurentPoly) -> LaurentPoly {
        pi(v, &self.label_map, self.base.ring())
    }
}

fn require_depth(seq: &[usize], depth: usize) -> Result<()> {
    if depth < seq.len() + 2 {
        return Err(Error::FrontierExhausted(format!(
            "depth {depth} is too shallow for a sequence of length {}; need depth >= {}",
            seq.len(),
            seq.len() + 2
        )));
    }
    Ok(())
}

/// The verdict on one sequence. `Undecided` means the truncation is too
/// shallow to decide it; it is counted under `unverified`, not as a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail,
    Undecided,
}

/// Checks, along every prefix of `seq`, that the orbit-mutated quiver folds
/// to the mutated matrix and has no Γ-loop or Γ-2-cycle in its certified
/// region.
pub fn check_covering(q0: &LabeledQuiver, b: &ExchangeMatrix, seq: &[usize], report: &mut VerificationReport) -> Check {
    let mut q = q0.clone();
    let mut m = b.clone();
    for t in 0..=seq.len() {
        if t > 0 {
            let k = seq[t - 1];
            m = m.mutate(k);
            q = match q.orbit_mutate(k) {
                Ok(q) => q,
                Err(Error::FrontierExhausted(_)) => {
                    report.bump("unverified", 1);
                    return Check::Undecided;
                }
                Err(e) => {
                    report.fail(one_based(&seq[..t]), m.to_text(), "orbit mutation refused", e.to_string());
                    return Check::Fail;
                }
            };
            report.bump("orbit_mutations", 1);
        }
        if let Some(defect) = q.gamma_defect() {
            report.fail(one_based(&seq[..t]), "no Γ-loop or Γ-2-cycle", defect.to_string(), "unfolding defect");
            return Check::Fail;
        }
        match q.fold() {
            Ok(f) if f == m => {}
            Ok(f) => {
                report.fail(one_based(&seq[..t]), m.to_text(), f.to_text(), "fold differs from mutated matrix");
                return Check::Fail;
            }
            Err(Error::FrontierExhausted(_)) => {
                report.bump("unverified", 1);
                return Check::Undecided;
            }
            Err(e) => {
                report.fail(one_based(&seq[..t]), m.to_text(), "fold failed", e.to_string());
                return Check::Fail;
            }
        }
    }
    report.record_max("max_vertices", q0.vertex_count() as u64);
    Check::Pass
}

/// Folding commutes with orbit mutation along `seq` (0-based labels) on
/// the truncation of the given depth.
pub fn verify_covering_commutation(b: &ExchangeMatrix, seq: &[usize], depth: usize) -> Result<VerificationReport> {
    require_depth(seq, depth)?;
    let start = Instant::now();
    let q0 = build_unfolding(b, depth)?;
    let mut report = VerificationReport::new("covering", b.to_text(), 0);
    report.depth = Some(depth);
    report.sequences_tried = 1;
    check_covering(&q0, b, seq, &mut report);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Compares the projection of orbit-mutated cover variables with the
/// base-side variables, for every exchangeable label and its `max_reps`
/// lowest-id representatives whose variable the truncation determines (ids
/// grow with distance from the root).
///
/// Cover variables are computed in the cover ring while every product stays
/// within `max_work` term pairs; past that, the projected seed is mutated
/// instead and the sequence is counted under `projected_only`.
pub fn check_pi(
    q0: &LabeledQuiver,
    base0: &Seed,
    seq: &[usize],
    max_reps: usize,
    max_work: u64,
    report: &mut VerificationReport,
) -> Result<Check> {
    let n = base0.cluster().len();
    let base = base0.expand(seq)?;

    let mut chain = vec![q0.clone()];
    for (t, &k) in seq.iter().enumerate() {
        match chain[t].orbit_mutate(k) {
            Ok(q) => chain.push(q),
            Err(Error::FrontierExhausted(_)) => {
                report.bump("unverified", 1);
                return Ok(Check::Undecided);
            }
            Err(e) => {
                report.fail(one_based(&seq[..=t]), "orbit mutation", "refused", e.to_string());
                return Ok(Check::Fail);
            }
        }
    }
    // a variable is determined by the truncation when every exchange
    // relation behind it was read off an exact vertex
    let mut known = vec![true; q0.vertex_count()];
    for (t, &k) in seq.iter().enumerate() {
        let before = &chain[t];
        let next: Vec<bool> = (0..known.len())
            .map(|u| {
                if before.vertex(u).label != k {
                    return known[u];
                }
                before.is_exact(u) && known[u] && before.neighbors(u).iter().all(|(w, _)| known[*w])
            })
            .collect();
        known = next;
    }
    let last = chain.last().expect("chain is nonempty");
    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (label, slot) in targets.iter_mut().enumerate() {
        *slot = last.class(label).into_iter().filter(|&v| known[v]).take(max_reps).collect();
        if slot.is_empty() {
            // no representative of this label is determined by the truncation
            report.bump("unverified", 1);
            return Ok(Check::Undecided);
        }
    }

    // needed[t]: vertices whose variables after t steps the targets depend on
    let mut needed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); seq.len() + 1];
    needed[seq.len()] = targets.iter().flatten().copied().collect();
    for (t, &k) in seq.iter().enumerate().rev() {
        let before = &chain[t];
        let mut set = needed[t + 1].clone();
        for &v in &needed[t + 1] {
            if before.vertex(v).label == k {
                set.extend(before.neighbors(v).iter().map(|(w, _)| *w));
            }
        }
        needed[t] = set;
    }
    let support: Vec<usize> = needed[0].iter().copied().collect();
    report.record_max("max_cover_variables", support.len() as u64);

    let base_ring = base.ring().clone();
    let mut cover = Some(CoverSeed::on_support(q0, &support));
    for (t, &k) in seq.iter().enumerate() {
        let Some(c) = &cover else { break };
        cover = c.orbit_mutate_within(k, &needed[t + 1], max_work)?;
    }
    let (cover, ring_labels) = match cover {
        Some(c) => {
            let labels = c.label_map();
            (c, labels)
        }
        None => {
            report.bump("projected_only", 1);
            let mut c = CoverSeed::projected(q0, &support, &base_ring);
            for (t, &k) in seq.iter().enumerate() {
                c = c.orbit_mutate_within(k, &needed[t + 1], u64::MAX)?.expect("no work limit");
            }
            (c, (0..base_ring.len()).collect())
        }
    };
    let label_map: Vec<usize> = (0..cover.quiver().vertex_count()).map(|v| cover.quiver().vertex(v).label).collect();
    let mut ok = true;
    for (label, reps) in targets.iter().enumerate() {
        let expected = &base.cluster()[label];
        let mut first: Option<(usize, LaurentPoly)> = None;
        for &a in reps {
            report.bump("representatives_checked", 1);
            let Some(v) = cover.variable(a) else {
                report.fail(one_based(seq), expected.to_string(), format!("no variable at vertex {a}"), "cover variable not computable");
                ok = false;
                continue;
            };
            report.record_max("max_cover_terms", v.nterms() as u64);
            let projected = pi(v, &ring_labels, &base_ring);
            debug_assert_eq!(label_map[a], label);
            if &projected != expected {
                report.fail(
                    one_based(seq),
                    expected.to_string(),
                    projected.to_string(),
                    format!("projection at vertex {a} (label {}) differs", label + 1),
                );
                ok = false;
            }
            match &first {
                None => first = Some((a, projected)),
                Some((b, p)) if *p != projected => {
                    report.fail(one_based(seq), p.to_string(), projected.to_string(), format!("representatives {b} and {a} disagree"));
                    ok = false;
                }
                _ => {}
            }
        }
    }
    Ok(if ok { Check::Pass } else { Check::Fail })
}

/// Projection commutes with orbit mutation along `seq` (0-based labels).
/// Matrices without frozen rows get principal coefficients.
pub fn verify_pi_commutation(b: &ExchangeMatrix, seq: &[usize], depth: usize) -> Result<VerificationReport> {
    require_depth(seq, depth)?;
    let start = Instant::now();
    let bt = if b.m() == 0 { b.principal_extension()? } else { b.clone() };
    let q0 = build_unfolding(&bt, depth)?;
    let mut report = VerificationReport::new("pi", bt.to_text(), 0);
    report.depth = Some(depth);
    report.sequences_tried = 1;
    check_pi(&q0, &Seed::initial(&bt), seq, 3, u64::MAX, &mut report)?;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Sum of exponents per label class; a monomial-level view of [`pi`].
pub fn collapse_exponents(exps: &[(usize, i32)], label_map: &[usize], n_labels: usize) -> Vec<Int> {
    let mut out = vec![Int::ZERO; n_labels];
    for &(v, e) in exps {
        out[label_map[v]] += &Int::from(e as i64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_three() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[vec![0, 2, 2], vec![-2, 0, 1], vec![-1, -3, 0]]).unwrap()
    }

    #[test]
    fn pi_on_generators_and_products() {
        let pair = UnfoldedSeedPair::new(&rank_three().principal_extension().unwrap(), 2).unwrap();
        let ring = pair.cover.ring().clone();
        for (i, &l) in pair.label_map.iter().enumerate() {
            let img = pair.project(&LaurentPoly::var(&ring, i as Var));
            assert_eq!(img, LaurentPoly::var(pair.base.ring(), l as Var));
        }
        // vertices 1 and 2 both carry label 2
        let (a, b) = (pair.cover.variable(1).unwrap(), pair.cover.variable(2).unwrap());
        let sq = pair.project(&(a * b));
        assert_eq!(sq.to_string(), "x2^2");
        assert_eq!(pair.project(&LaurentPoly::one(&ring)), LaurentPoly::one(pair.base.ring()));
    }

    #[test]
    fn trivial_classes_match_base_mutation() {
        let a2 = ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap().principal_extension().unwrap();
        let mut pair = UnfoldedSeedPair::new(&a2, 4).unwrap();
        assert_eq!(pair.cover.quiver().vertex_count(), 4);
        for k in [0, 1, 0, 1] {
            pair = pair.orbit_mutate(k).unwrap();
            for v in 0..2 {
                let label = pair.cover.quiver().vertex(v).label;
                let projected = pair.project(pair.cover.variable(v).unwrap());
                assert_eq!(projected, pair.base.cluster()[label]);
            }
        }
    }

    #[test]
    fn covering_on_example_sequences() {
        for seq in crate::sequence::all_sequences(3, 3) {
            let r = verify_covering_commutation(&rank_three(), &seq, seq.len() + 2).unwrap();
            assert!(r.passed(), "{:?}: {:?}", seq, r.failures);
        }
        assert!(matches!(verify_covering_commutation(&rank_three(), &[0, 1, 2], 4), Err(Error::FrontierExhausted(_))));
    }

    #[test]
    fn pi_commutes_on_short_sequences() {
        for seq in [vec![], vec![0], vec![1, 0], vec![2, 1, 0]] {
            let r = verify_pi_commutation(&rank_three(), &seq, seq.len() + 2).unwrap();
            assert!(r.passed(), "{:?}: {:?}", seq, r.failures);
        }
    }
}

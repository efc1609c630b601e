use std::time::Instant;

use super::{Verifier, VerifyParams};
use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::quiver::{build_unfolding, LabeledQuiver};
use crate::report::VerificationReport;
use crate::sequence;
use crate::unfold::check_covering;

/// All label sequences up to `exhaustive_len`, then `trials` random ones.
pub(crate) fn orbit_sequences(n: usize, params: &VerifyParams) -> Vec<Vec<usize>> {
    let mut seqs = sequence::all_sequences(n, params.exhaustive_len);
    let mut rng = sequence::prng(params.prng_seed);
    for _ in 0..params.trials {
        seqs.push(sequence::random_sequence(&mut rng, n, params.max_len));
    }
    seqs
}

/// The truncation depth used for a sequence of length `len`.
pub(crate) fn depth_for(len: usize, params: &VerifyParams) -> usize {
    params.depth.unwrap_or(len + 2)
}

/// Refuses a fixed depth that leaves no room for the longest sequence.
pub(crate) fn check_depth(seqs: &[Vec<usize>], params: &VerifyParams) -> Result<()> {
    let longest = seqs.iter().map(Vec::len).max().unwrap_or(0);
    match params.depth {
        Some(d) if d < longest + 2 => Err(Error::FrontierExhausted(format!(
            "depth {d} is too shallow for sequences of length {longest}; need at least {}",
            longest + 2
        ))),
        _ => Ok(()),
    }
}

/// Truncations by depth, built on first use.
pub(crate) struct UnfoldingCache<'a> {
    b: &'a ExchangeMatrix,
    built: Vec<Option<LabeledQuiver>>,
}

impl<'a> UnfoldingCache<'a> {
    pub(crate) fn new(b: &'a ExchangeMatrix) -> Self {
        UnfoldingCache { b, built: Vec::new() }
    }

    pub(crate) fn get(&mut self, depth: usize) -> Result<&LabeledQuiver> {
        if self.built.len() <= depth {
            self.built.resize(depth + 1, None);
        }
        if self.built[depth].is_none() {
            self.built[depth] = Some(build_unfolding(self.b, depth)?);
        }
        Ok(self.built[depth].as_ref().expect("just built"))
    }
}

/// Folding the orbit-mutated covering quiver gives the mutated matrix.
pub struct CoveringVerifier;

impl Verifier for CoveringVerifier {
    fn name(&self) -> &'static str {
        "covering"
    }

    fn summary(&self) -> &'static str {
        "folding commutes with orbit mutation on the unfolded quiver"
    }

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport> {
        let start = Instant::now();
        let seqs = orbit_sequences(b.n(), params);
        check_depth(&seqs, params)?;
        let mut cache = UnfoldingCache::new(b);
        let mut report = VerificationReport::new("covering", b.to_text(), params.prng_seed);
        for seq in &seqs {
            let depth = depth_for(seq.len(), params);
            report.depth = report.depth.max(Some(depth));
            report.sequences_tried += 1;
            let q0 = cache.get(depth)?;
            check_covering(q0, b, seq, &mut report);
        }
        report.canonicalize();
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shallow_fixed_depth_is_refused() {
        let b = ExchangeMatrix::from_rows(&[vec![0i64, 1], vec![-1, 0]]).unwrap();
        let params = VerifyParams {
            depth: Some(3),
            max_len: 4,
            ..VerifyParams::default()
        };
        assert!(matches!(CoveringVerifier.run(&b, &params), Err(Error::FrontierExhausted(_))));
    }

    #[test]
    fn line_quiver_passes() {
        let b = ExchangeMatrix::from_rows(&[vec![0i64, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        let r = CoveringVerifier.run(&b, &VerifyParams::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}

use std::time::Instant;

use super::covering::{check_depth, depth_for, orbit_sequences, UnfoldingCache};
use super::{with_coefficients, Verifier, VerifyParams};
use crate::error::Result;
use crate::matrix::ExchangeMatrix;
use crate::report::VerificationReport;
use crate::seed::Seed;
use crate::unfold::check_pi;

/// Certified representatives checked per label.
const MAX_REPS: usize = 3;

/// Projecting orbit-mutated cover variables gives the base variables.
pub struct PiVerifier;

impl Verifier for PiVerifier {
    fn name(&self) -> &'static str {
        "pi"
    }

    fn summary(&self) -> &'static str {
        "projection commutes with orbit mutation of cover seeds"
    }

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport> {
        let start = Instant::now();
        let bt = with_coefficients(b)?;
        let seqs = orbit_sequences(bt.n(), params);
        check_depth(&seqs, params)?;
        let base0 = if params.invert_coeffs {
            Seed::initial_inverted(&bt)
        } else {
            Seed::initial(&bt)
        };
        let mut cache = UnfoldingCache::new(&bt);
        let mut report = VerificationReport::new("pi", bt.to_text(), params.prng_seed);
        for seq in &seqs {
            let depth = depth_for(seq.len(), params);
            report.depth = report.depth.max(Some(depth));
            report.sequences_tried += 1;
            let q0 = cache.get(depth)?;
            check_pi(q0, &base0, seq, MAX_REPS, params.max_work, &mut report)?;
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
    fn a2_projection_commutes() {
        let b = ExchangeMatrix::from_rows(&[vec![0i64, 1], vec![-1, 0]]).unwrap();
        let params = VerifyParams {
            exhaustive_len: 3,
            trials: 5,
            max_len: 4,
            ..VerifyParams::default()
        };
        let r = PiVerifier.run(&b, &params).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}

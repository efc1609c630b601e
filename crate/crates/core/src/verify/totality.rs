use super::{Verifier, VerifyParams};
use crate::error::Result;
use crate::matrix::{fuzz_totality, ExchangeMatrix};
use crate::report::VerificationReport;

/// Random mutation sequences never leave the sign-skew-symmetric matrices.
pub struct TotalityVerifier;

impl Verifier for TotalityVerifier {
    fn name(&self) -> &'static str {
        "totality"
    }

    fn summary(&self) -> &'static str {
        "mutation keeps the matrix sign-skew-symmetric"
    }

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport> {
        Ok(fuzz_totality(b, params.max_len, params.trials, params.prng_seed))
    }
}

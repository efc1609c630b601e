use std::time::Instant;

use super::positivity::initial_seed;
use super::{walk_cluster_variables, Verifier, VerifyParams};
use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::report::VerificationReport;
use crate::seed::{laurent_expansion_in, Seed};
use crate::sequence::one_based;

/// Every materialized cluster variable is a Laurent polynomial over the
/// initial seed and over each seed adjacent to it.
pub struct LaurentVerifier;

impl Verifier for LaurentVerifier {
    fn name(&self) -> &'static str {
        "laurent"
    }

    fn summary(&self) -> &'static str {
        "cluster variables are Laurent over the initial and adjacent seeds"
    }

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport> {
        let start = Instant::now();
        b.check_acyclic_connected()?;
        let s0 = initial_seed(b, params)?;
        let adjacent: Vec<Seed> = (0..s0.cluster().len()).map(|k| s0.mutate(k)).collect::<Result<_>>()?;
        let mut report = VerificationReport::new("laurent", s0.matrix().to_text(), params.prng_seed);
        let mut err = None;
        walk_cluster_variables(&s0, params, &mut report, |visit, report| {
            let v = &visit.seed.cluster()[visit.slot];
            if !v.in_ground_ring() {
                report.fail(one_based(visit.seq), "Laurent over the initial seed", v.to_string(), "frozen variable in the denominator");
            }
            for (k, adj) in adjacent.iter().enumerate() {
                report.bump("laurent_checks", 1);
                match laurent_expansion_in(v, adj) {
                    Ok(_) => {}
                    Err(Error::InexactDivision { remainder }) => report.fail(
                        one_based(visit.seq),
                        format!("Laurent over the seed adjacent in direction {}", k + 1),
                        remainder,
                        format!("x{} does not expand", visit.slot + 1),
                    ),
                    Err(e) => err = Some(e),
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        report.canonicalize();
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }
}

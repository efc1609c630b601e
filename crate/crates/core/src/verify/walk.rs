use std::collections::HashMap;

use super::VerifyParams;
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::seed::Seed;
use crate::sequence::{self, one_based};

/// A freshly computed cluster variable: the one in slot `slot` of `seed`,
/// reached from the initial seed along `seq`.
pub struct VariableVisit<'a> {
    pub seq: &'a [usize],
    pub seed: &'a Seed,
    pub slot: usize,
}

/// Visits every cluster variable produced along all reduced sequences up to
/// `exhaustive_len` and `trials` random ones up to `max_len`. Seeds are
/// cached by sequence, so shared prefixes are mutated once.
///
/// A step over the work budget is counted under `unverified`, together with
/// every step below it. An inexact division is recorded as a failure.
pub fn walk_cluster_variables(
    s0: &Seed,
    params: &VerifyParams,
    report: &mut VerificationReport,
    mut visit: impl FnMut(&VariableVisit, &mut VerificationReport),
) -> Result<()> {
    let n = s0.cluster().len();
    let mut seqs = sequence::reduced_sequences(n, params.exhaustive_len);
    let mut rng = sequence::prng(params.prng_seed);
    for _ in 0..params.trials {
        seqs.push(sequence::random_sequence(&mut rng, n, params.max_len));
    }
    let mut cache: HashMap<Vec<usize>, Option<Seed>> = HashMap::new();
    cache.insert(Vec::new(), Some(s0.clone()));
    for seq in &seqs {
        report.sequences_tried += 1;
        for len in 1..=seq.len() {
            let prefix = &seq[..len];
            if cache.contains_key(prefix) {
                continue;
            }
            let k = prefix[len - 1];
            let next = match &cache[&seq[..len - 1]] {
                None => {
                    report.bump("unverified", 1);
                    None
                }
                Some(prev) => match prev.mutate_within(k, params.max_work) {
                    Ok(Some(s)) => {
                        report.bump("variables", 1);
                        report.record_max("max_terms", s.cluster()[k].nterms() as u64);
                        visit(&VariableVisit { seq: prefix, seed: &s, slot: k }, report);
                        Some(s)
                    }
                    Ok(None) => {
                        report.bump("unverified", 1);
                        None
                    }
                    Err(Error::InexactDivision { remainder }) => {
                        report.bump("inexact_divisions", 1);
                        report.fail(one_based(prefix), "exact division", remainder, "exchange relation is not divisible");
                        None
                    }
                    Err(e) => return Err(e),
                },
            };
            cache.insert(prefix.to_vec(), next);
        }
    }
    Ok(())
}

use std::time::Instant;

use super::{walk_cluster_variables, with_coefficients, Verifier, VerifyParams};
use crate::error::Result;
use crate::matrix::ExchangeMatrix;
use crate::report::VerificationReport;
use crate::seed::{check_positive, f_polynomial, Seed};
use crate::sequence::one_based;

/// F-polynomials listed in the report details, at most.
const MAX_LISTED: usize = 64;

pub(crate) fn initial_seed(b: &ExchangeMatrix, params: &VerifyParams) -> Result<Seed> {
    let bt = with_coefficients(b)?;
    Ok(if params.invert_coeffs {
        Seed::initial_inverted(&bt)
    } else {
        Seed::initial(&bt)
    })
}

fn start_report(theorem: &str, s0: &Seed, params: &VerifyParams) -> VerificationReport {
    VerificationReport::new(theorem, s0.matrix().to_text(), params.prng_seed)
}

pub struct PositivityVerifier;

impl Verifier for PositivityVerifier {
    fn name(&self) -> &'static str {
        "positivity"
    }

    fn summary(&self) -> &'static str {
        "every cluster variable has non-negative coefficients"
    }

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport> {
        let start = Instant::now();
        b.check_acyclic_connected()?;
        let s0 = initial_seed(b, params)?;
        let mut report = start_report("positivity", &s0, params);
        walk_cluster_variables(&s0, params, &mut report, |visit, report| {
            let v = &visit.seed.cluster()[visit.slot];
            if let Err(neg) = check_positive(v) {
                report.fail(
                    one_based(visit.seq),
                    "non-negative coefficients",
                    format!("{} * {}", neg.coeff, neg.rendered),
                    format!("negative coefficient in x{}", visit.slot + 1),
                );
            }
            // the denominator is an x-monomial iff no frozen variable has a
            // negative exponent outside the ground ring
            if !v.in_ground_ring() {
                report.fail(one_based(visit.seq), "x-monomial denominator", v.to_string(), "frozen variable in the denominator");
            }
        })?;
        report.canonicalize();
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }
}

pub struct FPolyVerifier;

impl Verifier for FPolyVerifier {
    fn name(&self) -> &'static str {
        "fpoly"
    }

    fn summary(&self) -> &'static str {
        "every F-polynomial has constant term 1"
    }

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport> {
        let start = Instant::now();
        b.check_acyclic_connected()?;
        let s0 = initial_seed(b, params)?;
        let mut report = start_report("fpoly", &s0, params);
        let mut listed = 0usize;
        walk_cluster_variables(&s0, params, &mut report, |visit, report| {
            let f = f_polynomial(&visit.seed.cluster()[visit.slot]);
            report.record_max("max_f_terms", f.nterms() as u64);
            if let Some((m, _)) = f.leading_term() {
                report.record_max("max_f_degree", m.degree().unsigned_abs());
            }
            let c = f.constant_term();
            if !c.is_one() {
                report.fail(
                    one_based(visit.seq),
                    "constant term 1",
                    c.to_string(),
                    format!("F-polynomial of x{} is {}", visit.slot + 1, f),
                );
            }
            if listed < MAX_LISTED {
                listed += 1;
                report.details.push(format!("F{:?} = {}", one_based(visit.seq), f));
            }
        })?;
        report.canonicalize();
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }
}

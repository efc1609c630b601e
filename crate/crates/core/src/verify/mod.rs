//! Property verifiers behind a name-keyed registry.
//!
//! Each verifier turns an exchange matrix and a [`VerifyParams`] into a
//! [`VerificationReport`]. The CLI looks verifiers up by name, so adding a
//! check means implementing [`Verifier`] and registering it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::report::VerificationReport;

mod covering;
mod laurent;
mod pi;
mod positivity;
mod totality;
mod walk;

pub use covering::CoveringVerifier;
pub use laurent::LaurentVerifier;
pub use pi::PiVerifier;
pub use positivity::{FPolyVerifier, PositivityVerifier};
pub use totality::TotalityVerifier;
pub use walk::{walk_cluster_variables, VariableVisit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyParams {
    /// Truncation depth for the covering checks; `None` means
    /// `len + 2` per sequence.
    pub depth: Option<usize>,
    /// Longest random sequence.
    pub max_len: usize,
    /// Number of random sequences.
    pub trials: usize,
    pub prng_seed: u64,
    /// Ground ring `Z[y^{±1}]` instead of `Z[y]`.
    pub invert_coeffs: bool,
    /// Every sequence up to this length is tried before the random ones.
    pub exhaustive_len: usize,
    /// Largest polynomial product (in term pairs) attempted per step.
    pub max_work: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            depth: None,
            max_len: 5,
            trials: 100,
            prng_seed: 0,
            invert_coeffs: false,
            exhaustive_len: 3,
            max_work: 1_000_000,
        }
    }
}

pub trait Verifier: Send + Sync {
    fn name(&self) -> &'static str;

    /// One line for `--help` style listings.
    fn summary(&self) -> &'static str;

    fn run(&self, b: &ExchangeMatrix, params: &VerifyParams) -> Result<VerificationReport>;
}

#[derive(Default)]
pub struct Registry {
    verifiers: BTreeMap<&'static str, Box<dyn Verifier>>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// totality, covering, pi, positivity, fpoly and laurent.
    pub fn builtin() -> Self {
        let mut r = Registry::new();
        r.register(Box::new(TotalityVerifier));
        r.register(Box::new(CoveringVerifier));
        r.register(Box::new(PiVerifier));
        r.register(Box::new(PositivityVerifier));
        r.register(Box::new(FPolyVerifier));
        r.register(Box::new(LaurentVerifier));
        r
    }

    /// Adds `v`, replacing any verifier of the same name.
    pub fn register(&mut self, v: Box<dyn Verifier>) {
        self.verifiers.insert(v.name(), v);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Verifier> {
        self.verifiers
            .get(name)
            .map(|v| v.as_ref())
            .ok_or_else(|| Error::UnknownVerifier(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.verifiers.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Verifier> {
        self.verifiers.values().map(|v| v.as_ref())
    }
}

/// The matrix the seed-level verifiers work with: principal coefficients
/// unless the input already has frozen rows.
pub(crate) fn with_coefficients(b: &ExchangeMatrix) -> Result<ExchangeMatrix> {
    if b.m() == 0 {
        b.principal_extension()
    } else {
        Ok(b.clone())
    }
}

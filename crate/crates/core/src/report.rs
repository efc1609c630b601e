use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One counterexample found by a verifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    /// Mutation sequence (1-based indices or labels) that exposed the failure.
    pub sequence: Vec<usize>,
    pub expected: String,
    pub actual: String,
    pub message: String,
}

/// Outcome of a verification run. Field names are part of the JSON interface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub input_matrix: String,
    pub depth: Option<usize>,
    pub prng_seed: u64,
    pub sequences_tried: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
    /// Counters; keys prefixed `max_` combine by maximum, the rest by sum.
    #[serde(default)]
    pub stats: BTreeMap<String, u64>,
    /// Free-form lines a verifier wants to show, such as computed values.
    #[serde(default)]
    pub details: Vec<String>,
}

impl VerificationReport {
    pub fn new(theorem: impl Into<String>, input_matrix: impl Into<String>, prng_seed: u64) -> Self {
        VerificationReport {
            theorem: theorem.into(),
            input_matrix: input_matrix.into(),
            depth: None,
            prng_seed,
            sequences_tried: 0,
            failures: Vec::new(),
            elapsed_ms: 0,
            stats: BTreeMap::new(),
            details: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Number of items the verifier could not decide within its work budget.
    pub fn unverified(&self) -> u64 {
        self.stats.get("unverified").copied().unwrap_or(0)
    }

    pub fn fail(&mut self, sequence: Vec<usize>, expected: impl Into<String>, actual: impl Into<String>, message: impl Into<String>) {
        self.failures.push(Failure {
            sequence,
            expected: expected.into(),
            actual: actual.into(),
            message: message.into(),
        });
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_insert(0) += by;
    }

    pub fn record_max(&mut self, key: &str, value: u64) {
        let slot = self.stats.entry(key.to_string()).or_insert(0);
        *slot = (*slot).max(value);
    }

    /// Folds another report over the same input into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.sequences_tried += other.sequences_tried;
        self.failures.extend(other.failures);
        self.details.extend(other.details);
        self.depth = match (self.depth, other.depth) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        for (k, v) in other.stats {
            if k.starts_with("max_") {
                self.record_max(&k, v);
            } else {
                self.bump(&k, v);
            }
        }
    }

    /// Sorts failures by sequence so output does not depend on scheduling.
    pub fn canonicalize(&mut self) {
        self.failures.sort();
        self.failures.dedup();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theorem: {}", self.theorem);
        let _ = writeln!(out, "input_matrix:");
        for line in self.input_matrix.lines() {
            let _ = writeln!(out, "  {line}");
        }
        match self.depth {
            Some(d) => {
                let _ = writeln!(out, "depth: {d}");
            }
            None => {
                let _ = writeln!(out, "depth: -");
            }
        }
        let _ = writeln!(out, "prng_seed: {}", self.prng_seed);
        let _ = writeln!(out, "sequences_tried: {}", self.sequences_tried);
        let _ = writeln!(out, "elapsed_ms: {}", self.elapsed_ms);
        for (k, v) in &self.stats {
            let _ = writeln!(out, "stat {k}: {v}");
        }
        for d in &self.details {
            let _ = writeln!(out, "detail: {d}");
        }
        let _ = writeln!(out, "failures: {}", self.failures.len());
        for f in &self.failures {
            let seq: Vec<String> = f.sequence.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "  - sequence: [{}]", seq.join(" "));
            let _ = writeln!(out, "    message: {}", f.message);
            let _ = writeln!(out, "    expected: {}", f.expected);
            let _ = writeln!(out, "    actual: {}", f.actual);
        }
        match (self.passed(), self.unverified()) {
            (false, _) => out.push_str("result: FAIL\n"),
            (true, 0) => out.push_str("result: PASS\n"),
            (true, u) => {
                let _ = writeln!(out, "result: PASS ({u} unverified)");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorb_merges_counters() {
        let mut a = VerificationReport::new("t", "1 0\n0\n", 7);
        a.sequences_tried = 2;
        a.bump("vars", 3);
        a.record_max("max_terms", 10);
        let mut b = VerificationReport::new("t", "1 0\n0\n", 7);
        b.sequences_tried = 5;
        b.bump("vars", 4);
        b.record_max("max_terms", 4);
        b.fail(vec![2, 1], "x", "y", "boom");
        a.absorb(b);
        assert_eq!(a.sequences_tried, 7);
        assert_eq!(a.stats["vars"], 7);
        assert_eq!(a.stats["max_terms"], 10);
        assert!(!a.passed());
    }

    #[test]
    fn json_has_stable_field_names() {
        let r = VerificationReport::new("covering", "1 0\n0\n", 42);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["theorem", "input_matrix", "depth", "prng_seed", "sequences_tried", "failures", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(VerificationReport::from_json(&r.to_json()).unwrap(), r);
    }
}

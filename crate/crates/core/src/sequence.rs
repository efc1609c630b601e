//! Mutation sequences: exhaustive enumeration and seeded random sampling.
//!
//! All randomness in the crate flows through [`Prng`], ChaCha8 seeded from a
//! 64-bit value, so every report can be regenerated from its recorded seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Prng = ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every sequence over `0..n` of length at most `max_len` with no index
/// repeated twice in a row (an immediate repeat undoes itself). Includes the
/// empty sequence. Ordered by length, then lexicographically.
pub fn reduced_sequences(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for k in 0..n {
                if seq.last() == Some(&k) {
                    continue;
                }
                let mut s: Vec<usize> = seq.clone();
                s.push(k);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every sequence over `0..n` of length at most `max_len`, repeats allowed.
pub fn all_sequences(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for k in 0..n {
                let mut s: Vec<usize> = seq.clone();
                s.push(k);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A random reduced sequence whose length is uniform on `1..=max_len`.
pub fn random_sequence(rng: &mut Prng, n: usize, max_len: usize) -> Vec<usize> {
    if n == 0 || max_len == 0 {
        return Vec::new();
    }
    let len = rng.gen_range(1..=max_len);
    random_sequence_of_len(rng, n, len)
}

/// A random reduced sequence of exactly `len` steps.
pub fn random_sequence_of_len(rng: &mut Prng, n: usize, len: usize) -> Vec<usize> {
    let mut seq: Vec<usize> = Vec::with_capacity(len);
    for _ in 0..len {
        let k = match seq.last() {
            Some(&prev) if n > 1 => {
                let k = rng.gen_range(0..n - 1);
                if k >= prev {
                    k + 1
                } else {
                    k
                }
            }
            _ => rng.gen_range(0..n),
        };
        seq.push(k);
    }
    seq
}

/// Renders a 0-based sequence with 1-based indices.
pub fn one_based(seq: &[usize]) -> Vec<usize> {
    seq.iter().map(|k| k + 1).collect()
}

//! Extended exchange matrices and matrix mutation.
//!
//! An [`ExchangeMatrix`] is an `(n+m) x n` integer matrix whose first `n`
//! rows form the principal part. All indices in this module are 0-based; the
//! text format and the CLI use 1-based labels.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::report::VerificationReport;
use crate::sequence::{self, one_based};

#[derive(Clone)]
pub struct ExchangeMatrix {
    n: usize,
    m: usize,
    /// Row-major, `(n+m) * n` entries.
    entries: Vec<Int>,
    row_labels: Vec<String>,
}

/// Default display name of row `i` in a matrix with `n` exchangeable indices.
pub fn default_label(i: usize, n: usize) -> String {
    if i < n {
        format!("x{}", i + 1)
    } else {
        format!("y{}", i - n + 1)
    }
}

impl ExchangeMatrix {
    pub fn new(n: usize, m: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != (n + m) * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                (n + m) * n,
                n + m,
                n,
                entries.len()
            )));
        }
        let row_labels = (0..n + m).map(|i| default_label(i, n)).collect();
        Ok(ExchangeMatrix { n, m, entries, row_labels })
    }

    /// Builds a matrix from rows; the column count is `n` and any rows past
    /// the first `n` are frozen.
    pub fn from_rows<T: Copy + Into<i64>>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.len() < n {
            return Err(Error::InvalidParameter(format!(
                "{} rows cannot hold a {n}x{n} principal part",
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            entries.extend(row.iter().map(|&v| Int::from(v.into())));
        }
        ExchangeMatrix::new(n, rows.len() - n, entries)
    }

    pub fn zero(n: usize) -> Self {
        ExchangeMatrix::new(n, 0, vec![Int::ZERO; n * n]).expect("shape is consistent")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.n + self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        assert!(i < self.rows() && j < self.n, "entry ({i},{j}) outside {}x{}", self.rows(), self.n);
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        assert!(i < self.rows() && j < self.n);
        self.entries[i * self.n + j] = v;
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.row_labels[..self.n]
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rows() {
            return Err(Error::InvalidParameter(format!(
                "expected {} labels, got {}",
                self.rows(),
                labels.len()
            )));
        }
        self.row_labels = labels;
        Ok(self)
    }

    fn has_default_labels(&self) -> bool {
        self.row_labels.iter().enumerate().all(|(i, l)| *l == default_label(i, self.n))
    }

    /// The `n x n` principal part.
    pub fn principal(&self) -> ExchangeMatrix {
        ExchangeMatrix {
            n: self.n,
            m: 0,
            entries: self.entries[..self.n * self.n].to_vec(),
            row_labels: self.row_labels[..self.n].to_vec(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> Int {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(Int::ZERO)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    /// First pair violating sign-skew-symmetry of the principal part.
    pub fn sign_skew_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i..self.n {
                let a = self.get(i, j);
                let b = self.get(j, i);
                let ok = if a.is_zero() && b.is_zero() {
                    true
                } else {
                    a.signum() * b.signum() < 0
                };
                if !ok {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_sign_skew_symmetric(&self) -> bool {
        self.sign_skew_violation().is_none()
    }

    pub fn check_sign_skew_symmetric(&self) -> Result<()> {
        match self.sign_skew_violation() {
            None => Ok(()),
            Some((i, j)) => Err(Error::NotSignSkewSymmetric {
                i: i + 1,
                j: j + 1,
                bij: self.get(i, j).to_string(),
                bji: self.get(j, i).to_string(),
            }),
        }
    }

    /// The least positive integer vector `d` with `d_i b_ij = -d_j b_ji`, if
    /// one exists. Each connected component of the underlying graph is
    /// normalized separately.
    pub fn skew_symmetrizer(&self) -> Option<Vec<Int>> {
        if !self.is_sign_skew_symmetric() {
            return None;
        }
        let n = self.n;
        let mut ratio: Vec<Option<BigRational>> = vec![None; n];
        let mut component = vec![usize::MAX; n];
        let mut n_components = 0;
        for root in 0..n {
            if ratio[root].is_some() {
                continue;
            }
            ratio[root] = Some(BigRational::one());
            component[root] = n_components;
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let bij = self.get(i, j);
                    if bij.is_zero() || ratio[j].is_some() {
                        continue;
                    }
                    // d_j = d_i * (-b_ij / b_ji)
                    let r = ratio[i].as_ref().unwrap() * BigRational::new(-bij.to_big(), self.get(j, i).to_big());
                    ratio[j] = Some(r);
                    component[j] = n_components;
                    stack.push(j);
                }
            }
            n_components += 1;
        }
        let ratio: Vec<BigRational> = ratio.into_iter().map(Option::unwrap).collect();

        // Every edge, tree or not, must satisfy the relation.
        for i in 0..n {
            for j in 0..n {
                let lhs = &ratio[i] * BigRational::from(self.get(i, j).to_big());
                let rhs = -(&ratio[j] * BigRational::from(self.get(j, i).to_big()));
                if lhs != rhs {
                    return None;
                }
            }
        }

        let mut d = vec![Int::ZERO; n];
        for c in 0..n_components {
            let members: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
            let lcm = members.iter().fold(BigInt::one(), |acc, &i| acc.lcm(ratio[i].denom()));
            let scaled: Vec<BigInt> = members.iter().map(|&i| (&ratio[i] * BigRational::from(lcm.clone())).to_integer()).collect();
            let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            for (&i, v) in members.iter().zip(scaled) {
                debug_assert!(v.is_positive());
                d[i] = Int::from(v / &g);
            }
        }
        Some(d)
    }

    /// Matrix mutation in direction `k` (0-based). Panics if `k >= n`.
    pub fn mutate(&self, k: usize) -> ExchangeMatrix {
        assert!(k < self.n, "mutation index {k} out of range for n = {}", self.n);
        let mut out = self.clone();
        for j in 0..self.rows() {
            for l in 0..self.n {
                let v = if j == k || l == k {
                    -self.get(j, l)
                } else {
                    self.get(j, l) + &mutation_increment(self.get(j, k), self.get(k, l))
                };
                out.entries[j * self.n + l] = v;
            }
        }
        out
    }

    /// [`mutate`](Self::mutate) with a 1-based, range-checked index.
    pub fn mutate_checked(&self, k1: usize) -> Result<ExchangeMatrix> {
        if k1 == 0 || k1 > self.n {
            return Err(Error::IndexOutOfRange { index: k1, bound: self.n });
        }
        Ok(self.mutate(k1 - 1))
    }

    pub fn mutate_seq(&self, seq: &[usize]) -> ExchangeMatrix {
        seq.iter().fold(self.clone(), |b, &k| b.mutate(k))
    }

    pub fn delta(&self) -> Result<DeltaQuiver> {
        self.check_sign_skew_symmetric()?;
        Ok(self.delta_unchecked())
    }

    fn delta_unchecked(&self) -> DeltaQuiver {
        let mut out = vec![Vec::new(); self.n];
        for (i, succ) in out.iter_mut().enumerate() {
            for j in 0..self.n {
                if self.get(i, j).is_positive() {
                    succ.push(j);
                }
            }
        }
        DeltaQuiver { out }
    }

    pub fn is_acyclic(&self) -> bool {
        self.delta_unchecked().find_cycle().is_none()
    }

    pub fn is_connected(&self) -> bool {
        self.delta_unchecked().components().len() <= 1
    }

    /// Errors unless the principal part is sign-skew-symmetric, acyclic and
    /// connected.
    pub fn check_acyclic_connected(&self) -> Result<()> {
        let delta = self.delta()?;
        if let Some(cycle) = delta.find_cycle() {
            return Err(Error::NotAcyclic { cycle });
        }
        let comps = delta.components();
        if comps.len() > 1 {
            return Err(Error::NotConnected {
                components: comps.into_iter().map(|c| one_based(&c)).collect(),
            });
        }
        Ok(())
    }

    /// Stacks the identity below a square matrix (principal coefficients).
    pub fn principal_extension(&self) -> Result<ExchangeMatrix> {
        if self.m != 0 {
            return Err(Error::HasFrozenRows { m: self.m });
        }
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j { Int::ONE } else { Int::ZERO });
            }
        }
        let mut labels = self.row_labels.clone();
        labels.extend((0..n).map(|j| format!("y{}", j + 1)));
        ExchangeMatrix::new(n, n, entries)?.with_labels(labels)
    }

    /// The square matrix `[[B, -B'^T], [B', 0]]` in which frozen rows become
    /// vertices of their own.
    pub fn frozen_completion(&self) -> ExchangeMatrix {
        let (n, m) = (self.n, self.m);
        let t = n + m;
        let mut entries = vec![Int::ZERO; t * t];
        for i in 0..t {
            for j in 0..n {
                entries[i * t + j] = self.get(i, j).clone();
            }
        }
        for i in 0..n {
            for j in n..t {
                entries[i * t + j] = -self.get(j, i);
            }
        }
        ExchangeMatrix {
            n: t,
            m: 0,
            entries,
            row_labels: self.row_labels.clone(),
        }
    }

    /// Serializes to the matrix text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if !self.has_default_labels() {
            out.push_str("labels: ");
            out.push_str(&self.row_labels.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the matrix text format: a `n m` header, `n+m` rows of `n`
    /// integers, optional `labels:` trailer; `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut entries: Vec<Int> = Vec::new();
        let mut rows_read = 0;
        let mut labels: Option<Vec<String>> = None;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if labels.is_some() {
                return Err(Error::parse(line_no, 1, "content after labels line"));
            }
            let Some((n, m)) = header else {
                let nums = parse_ints(raw, line_no)?;
                if nums.len() != 2 {
                    return Err(Error::parse(line_no, 1, "header must be `n m`"));
                }
                let to_usize = |v: &Int, col: usize| -> Result<usize> {
                    v.to_i64()
                        .filter(|x| *x >= 0)
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::parse(line_no, col, "dimension must be a non-negative integer"))
                };
                header = Some((to_usize(&nums[0].1, nums[0].0)?, to_usize(&nums[1].1, nums[1].0)?));
                continue;
            };
            if let Some(rest) = trimmed.strip_prefix("labels:") {
                if rows_read < n + m {
                    return Err(Error::parse(line_no, 1, format!("labels before all {} rows were read", n + m)));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.len() != n + m {
                    return Err(Error::parse(line_no, 1, format!("expected {} labels, got {}", n + m, names.len())));
                }
                labels = Some(names);
                continue;
            }
            if rows_read == n + m {
                return Err(Error::parse(line_no, 1, format!("expected {} rows, found more", n + m)));
            }
            let nums = parse_ints(raw, line_no)?;
            if nums.len() != n {
                let col = nums.get(n).map_or(raw.len() + 1, |(c, _)| *c);
                return Err(Error::parse(line_no, col, format!("expected {n} entries, found {}", nums.len())));
            }
            entries.extend(nums.into_iter().map(|(_, v)| v));
            rows_read += 1;
        }

        let Some((n, m)) = header else {
            return Err(Error::parse(last_line.max(1), 1, "missing `n m` header"));
        };
        if rows_read != n + m {
            return Err(Error::parse(last_line + 1, 1, format!("expected {} rows, found {rows_read}", n + m)));
        }
        let mat = ExchangeMatrix::new(n, m, entries)?;
        match labels {
            Some(l) => mat.with_labels(l),
            None => Ok(mat),
        }
    }
}

fn parse_ints(line: &str, line_no: usize) -> Result<Vec<(usize, Int)>> {
    let mut out = Vec::new();
    let mut col = 0;
    for tok in line.split_whitespace() {
        let start = line[col..].find(tok).map_or(col, |p| col + p);
        col = start + tok.len();
        let v: Int = tok
            .parse()
            .map_err(|_| Error::parse(line_no, start + 1, format!("`{tok}` is not an integer")))?;
        out.push((start + 1, v));
    }
    Ok(out)
}

/// `(|a|·b + a·|b|) / 2`, the additive term of matrix mutation.
/// The numerator is always even; an odd value would be an arithmetic bug.
pub fn mutation_increment(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() || a.signum() != b.signum() {
        return Int::ZERO;
    }
    let num = &(&a.abs() * b) + &(a * &b.abs());
    num.exact_half().expect("mutation numerator is even")
}

impl PartialEq for ExchangeMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.entries == other.entries
    }
}

impl Eq for ExchangeMatrix {}

impl fmt::Debug for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Δ(B): edge `i -> j` iff `b_ij > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaQuiver {
    out: Vec<Vec<usize>>,
}

impl DeltaQuiver {
    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| succ.iter().map(move |&j| (i, j)))
            .collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out[i].contains(&j)
    }

    /// A directed cycle, if any, as a vertex list.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let n = self.out.len();
        let mut mark = vec![Mark::White; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if mark[root] != Mark::White {
                continue;
            }
            // iterative DFS with explicit edge cursor
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Grey;
            while let Some(&mut (v, ref mut cursor)) = stack.last_mut() {
                if *cursor < self.out[v].len() {
                    let w = self.out[v][*cursor];
                    *cursor += 1;
                    match mark[w] {
                        Mark::White => {
                            mark[w] = Mark::Grey;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        Mark::Grey => {
                            let mut cycle = vec![v];
                            let mut u = v;
                            while u != w {
                                u = parent[u];
                                cycle.push(u);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        Mark::Black => {}
                    }
                } else {
                    mark[v] = Mark::Black;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.out.len();
        let mut adj = vec![Vec::new(); n];
        for (i, j) in self.edges() {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Applies `trials` random mutation sequences of length at most `max_len`
/// and records every prefix whose result is not sign-skew-symmetric.
pub fn fuzz_totality(b: &ExchangeMatrix, max_len: usize, trials: usize, prng_seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("totality", b.to_text(), prng_seed);
    let mut rng = sequence::prng(prng_seed);
    let principal = b.principal();
    if let Some((i, j)) = principal.sign_skew_violation() {
        report.fail(Vec::new(), "sign-skew-symmetric input", format!("b[{}][{}] violates", i + 1, j + 1), "input is not sign-skew-symmetric");
    }
    for _ in 0..trials {
        let seq = sequence::random_sequence(&mut rng, b.n(), max_len);
        report.sequences_tried += 1;
        let mut cur = principal.clone();
        for (step, &k) in seq.iter().enumerate() {
            cur = cur.mutate(k);
            report.bump("mutations", 1);
            if let Some((i, j)) = cur.sign_skew_violation() {
                report.fail(
                    one_based(&seq[..=step]),
                    "sign-skew-symmetric",
                    format!("{:?}", cur),
                    format!("entries ({}, {}) and ({}, {}) break sign-skew-symmetry", i + 1, j + 1, j + 1, i + 1),
                );
                break;
            }
        }
    }
    report.canonicalize();
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

/// A random sign-skew-symmetric matrix: each pair `(i, j)` is either zero
/// or gets opposite signs, with magnitudes in `1..=max_abs`.
pub fn random_sign_skew(rng: &mut sequence::Prng, n: usize, max_abs: i64) -> ExchangeMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            match rng.gen_range(0..3) {
                0 => {}
                s => {
                    let sign = if s == 1 { 1 } else { -1 };
                    rows[i][j] = sign * rng.gen_range(1..=max_abs);
                    rows[j][i] = -sign * rng.gen_range(1..=max_abs);
                }
            }
        }
    }
    ExchangeMatrix::from_rows(&rows).expect("square rows")
}

/// A random acyclic connected sign-skew-symmetric matrix, drawn as
/// [`random_sign_skew`] over a random vertex order with every pair oriented
/// forward, retried until connected.
pub fn random_acyclic_connected(rng: &mut sequence::Prng, n: usize, max_abs: i64) -> ExchangeMatrix {
    loop {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut rows = vec![vec![0i64; n]; n];
        for a in 0..n {
            for c in a + 1..n {
                if rng.gen_bool(0.5) {
                    let (i, j) = (order[a], order[c]);
                    rows[i][j] = rng.gen_range(1..=max_abs);
                    rows[j][i] = -rng.gen_range(1..=max_abs);
                }
            }
        }
        let b = ExchangeMatrix::from_rows(&rows).expect("square rows");
        if b.is_connected() {
            return b;
        }
    }
}

/// Every acyclic sign-skew-symmetric `n x n` matrix with entries bounded by
/// `max_abs`, one per isomorphism class under relabeling.
pub fn acyclic_matrices_up_to_relabeling(n: usize, max_abs: i64) -> Vec<ExchangeMatrix> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut choices: Vec<(i64, i64)> = vec![(0, 0)];
    for a in 1..=max_abs {
        for b in 1..=max_abs {
            choices.push((a, -b));
            choices.push((-a, b));
        }
    }
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut idx = vec![0usize; pairs.len()];
    loop {
        let mut rows = vec![vec![0i64; n]; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            rows[i][j] = choices[idx[p]].0;
            rows[j][i] = choices[idx[p]].1;
        }
        let canon = perms
            .iter()
            .map(|p| (0..n).flat_map(|i| (0..n).map(|j| rows[p[i]][p[j]]).collect::<Vec<_>>()).collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        if seen.insert(canon) {
            let b = ExchangeMatrix::from_rows(&rows).expect("square rows");
            if b.is_acyclic() {
                out.push(b);
            }
        }
        // odometer over the pair choices
        let mut p = 0;
        loop {
            if p == idx.len() {
                return out;
            }
            idx[p] += 1;
            if idx[p] < choices.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn rank_three() -> ExchangeMatrix {
        mat(&[&[0, 2, 2], &[-2, 0, 1], &[-1, -3, 0]])
    }

    /// Direct evaluation of the mutation rule on plain integers.
    fn mutate_oracle(b: &[Vec<i64>], n: usize, k: usize) -> Vec<Vec<i64>> {
        let mut out = b.to_vec();
        for j in 0..b.len() {
            for l in 0..n {
                out[j][l] = if j == k || l == k {
                    -b[j][l]
                } else {
                    b[j][l] + (b[j][k].abs() * b[k][l] + b[j][k] * b[k][l].abs()) / 2
                };
            }
        }
        out
    }

    #[test]
    fn enumerates_small_acyclic_classes() {
        assert_eq!(acyclic_matrices_up_to_relabeling(1, 3).len(), 1);
        assert_eq!(acyclic_matrices_up_to_relabeling(2, 1).len(), 2);
        // empty, one arrow, three two-arrow shapes, transitive triangle
        assert_eq!(acyclic_matrices_up_to_relabeling(3, 1).len(), 6);
        for b in acyclic_matrices_up_to_relabeling(3, 2) {
            assert!(b.is_acyclic() && b.is_sign_skew_symmetric());
        }
    }

    #[test]
    fn random_generators_respect_their_contracts() {
        let mut rng = sequence::prng(3);
        for _ in 0..200 {
            let b = random_sign_skew(&mut rng, 5, 4);
            assert!(b.is_sign_skew_symmetric());
            let a = random_acyclic_connected(&mut rng, 4, 2);
            assert!(a.is_acyclic() && a.is_connected() && a.is_sign_skew_symmetric());
        }
    }

    #[test]
    fn sign_skew_examples() {
        assert!(mat(&[&[0, 2], &[-2, 0]]).is_sign_skew_symmetric());
        assert!(!mat(&[&[0, 1], &[1, 0]]).is_sign_skew_symmetric());
        assert!(rank_three().is_sign_skew_symmetric());
        assert!(!mat(&[&[1]]).is_sign_skew_symmetric());
    }

    /// Exhaustive search over `1..=bound` for the least symmetrizer.
    fn symmetrizer_oracle(b: &[Vec<i64>], bound: i64) -> Option<Vec<i64>> {
        let n = b.len();
        let mut d = vec![1i64; n];
        let mut best: Option<Vec<i64>> = None;
        loop {
            let ok = (0..n).all(|i| (0..n).all(|j| d[i] * b[i][j] == -d[j] * b[j][i]));
            if ok && best.as_ref().is_none_or(|bst| d.iter().sum::<i64>() < bst.iter().sum::<i64>()) {
                best = Some(d.clone());
            }
            let mut p = 0;
            loop {
                if p == n {
                    return best;
                }
                d[p] += 1;
                if d[p] <= bound {
                    break;
                }
                d[p] = 1;
                p += 1;
            }
        }
    }

    #[test]
    fn symmetrizer_examples() {
        let to_i64 = |d: Vec<Int>| d.into_iter().map(|v| v.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(mat(&[&[0, 1], &[-1, 0]]).skew_symmetrizer().map(to_i64), Some(vec![1, 1]));

        let b = vec![vec![0, 2], vec![-1, 0]];
        assert_eq!(symmetrizer_oracle(&b, 10), Some(vec![1, 2]));
        assert_eq!(mat(&[&[0, 2], &[-1, 0]]).skew_symmetrizer().map(to_i64), Some(vec![1, 2]));

        let b28 = vec![vec![0, 2, 2], vec![-2, 0, 1], vec![-1, -3, 0]];
        assert_eq!(symmetrizer_oracle(&b28, 100), None);
        assert_eq!(rank_three().skew_symmetrizer(), None);
    }

    #[test]
    fn symmetrizer_handles_components() {
        // two blocks: (1,2) with ratio 1:3, (3) isolated
        let b = mat(&[&[0, 3, 0], &[-1, 0, 0], &[0, 0, 0]]);
        let d: Vec<i64> = b.skew_symmetrizer().unwrap().into_iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 3, 1]);
        assert_eq!(symmetrizer_oracle(&[vec![0, 3, 0], vec![-1, 0, 0], vec![0, 0, 0]], 10), Some(vec![1, 3, 1]));
    }

    #[test]
    fn mutate_examples() {
        let b = rank_three();
        let expected = mutate_oracle(&[vec![0, 2, 2], vec![-2, 0, 1], vec![-1, -3, 0]], 3, 0);
        assert_eq!(expected, vec![vec![0, -2, -2], vec![2, 0, 1], vec![1, -3, 0]]);
        assert_eq!(b.mutate(0), mat(&[&[0, -2, -2], &[2, 0, 1], &[1, -3, 0]]));
        assert_eq!(mat(&[&[0, 1], &[-1, 0]]).mutate(0), mat(&[&[0, -1], &[1, 0]]));
        for k in 0..3 {
            assert_eq!(b.mutate(k).mutate(k), b);
        }
    }

    #[test]
    fn mutate_extended_matches_oracle() {
        let rows = vec![vec![0, 2, -1], vec![-3, 0, 4], vec![1, -2, 0], vec![1, 0, 0], vec![-2, 5, 1]];
        let b = ExchangeMatrix::from_rows(&rows).unwrap();
        for k in 0..3 {
            assert_eq!(b.mutate(k), ExchangeMatrix::from_rows(&mutate_oracle(&rows, 3, k)).unwrap());
        }
    }

    #[test]
    fn mutate_checked_rejects_bad_index() {
        let b = rank_three();
        assert_eq!(b.mutate_checked(0), Err(Error::IndexOutOfRange { index: 0, bound: 3 }));
        assert_eq!(b.mutate_checked(4), Err(Error::IndexOutOfRange { index: 4, bound: 3 }));
        assert_eq!(b.mutate_checked(1).unwrap(), b.mutate(0));
    }

    #[test]
    fn large_entries_promote() {
        let big = i64::MAX / 2;
        let b = mat(&[&[0, big, big], &[-big, 0, big], &[-big, -big, 0]]);
        let mu = b.mutate(1);
        assert!(matches!(mu.get(0, 2), Int::Big(_)));
        assert_eq!(mu.mutate(1), b);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(mat(&[&[0, 1], &[-1, 0]]).delta().unwrap().edges(), vec![(0, 1)]);
        assert_eq!(rank_three().delta().unwrap().edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(ExchangeMatrix::zero(3).delta().unwrap().edges().is_empty());
        assert!(mat(&[&[0, 1], &[1, 0]]).delta().is_err());
    }

    #[test]
    fn acyclic_connected_examples() {
        let b = rank_three();
        assert!(b.is_acyclic() && b.is_connected());
        let cyc = mat(&[&[0, 1, -1], &[-1, 0, 1], &[1, -1, 0]]);
        assert!(!cyc.is_acyclic());
        match cyc.check_acyclic_connected() {
            Err(Error::NotAcyclic { cycle }) => assert_eq!(cycle.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
        let one = ExchangeMatrix::zero(1);
        assert!(one.is_acyclic() && one.is_connected());
        let split = ExchangeMatrix::zero(2);
        assert!(matches!(split.check_acyclic_connected(), Err(Error::NotConnected { .. })));
    }

    #[test]
    fn principal_extension_examples() {
        let e = ExchangeMatrix::zero(1).principal_extension().unwrap();
        assert_eq!(e, mat(&[&[0], &[1]]));
        let b = mat(&[&[0, 1], &[-1, 0]]);
        let e = b.principal_extension().unwrap();
        assert_eq!(e, mat(&[&[0, 1], &[-1, 0], &[1, 0], &[0, 1]]));
        assert_eq!(e.principal(), b);
        assert_eq!(e.row_labels(), &["x1", "x2", "y1", "y2"]);
        assert_eq!(e.principal_extension(), Err(Error::HasFrozenRows { m: 2 }));
    }

    #[test]
    fn frozen_completion_shape() {
        let b = mat(&[&[0, 1], &[-1, 0]]).principal_extension().unwrap();
        let c = b.frozen_completion();
        assert_eq!(c, mat(&[&[0, 1, -1, 0], &[-1, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]));
        assert!(c.is_skew_symmetric());
        assert!(c.is_acyclic() && c.is_connected());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# Example\n3 0\n0 2 2\n-2 0 1\n-1 -3 0\n";
        let b = ExchangeMatrix::parse(text).unwrap();
        assert_eq!(b, rank_three());
        assert_eq!(b.to_text(), "3 0\n0 2 2\n-2 0 1\n-1 -3 0\n");
        assert_eq!(ExchangeMatrix::parse(&b.to_text()).unwrap().to_text(), b.to_text());

        let labeled = "2 1\n0 1\n-1 0\n1 1\nlabels: a b c\n";
        let b = ExchangeMatrix::parse(labeled).unwrap();
        assert_eq!(b.row_labels(), &["a", "b", "c"]);
        assert_eq!(b.to_text(), labeled);
    }

    #[test]
    fn parse_errors_carry_position() {
        match ExchangeMatrix::parse("2 0\n0 1\n-1 x\n") {
            Err(Error::Parse { line: 3, column: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match ExchangeMatrix::parse("2 0\n0 1 5\n-1 0\n") {
            Err(Error::Parse { line: 2, column: 5, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(ExchangeMatrix::parse("2 0\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(ExchangeMatrix::parse("# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(ExchangeMatrix::parse("1 0\n0\nlabels: a b\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn totality_fuzz_examples() {
        let r = fuzz_totality(&rank_three(), 8, 200, 1);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.sequences_tried, 200);

        let skew = mat(&[&[0, 2, -1], &[-2, 0, 3], &[1, -3, 0]]);
        assert!(fuzz_totality(&skew, 8, 100, 5).passed());

        let mut a = fuzz_totality(&rank_three(), 6, 50, 99);
        let mut b = fuzz_totality(&rank_three(), 6, 50, 99);
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn totality_fuzz_reports_cyclic_failures() {
        // A cyclic sign-skew-symmetric matrix that is not totally sign-skew-symmetric:
        // mutating at 1 makes b_23 and b_32 share a sign.
        let b = mat(&[&[0, 1, -1], &[-1, 0, 1], &[2, -1, 0]]);
        let mu = b.mutate(0);
        assert!(!mu.is_sign_skew_symmetric(), "{mu:?}");
        let r = fuzz_totality(&b, 4, 200, 3);
        assert!(!r.passed());
        assert!(r.failures.iter().all(|f| !f.sequence.is_empty()));
    }
}

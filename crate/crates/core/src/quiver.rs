//! Finite truncations of the covering quiver of an acyclic exchange matrix.
//!
//! The covering quiver is an infinite labeled tree obtained by gluing local
//! stars. A [`LabeledQuiver`] holds the first few gluing generations and
//! tracks, per vertex, where its stored arrows may disagree with the
//! infinite quiver: a set of `(label, direction)` pairs such that every
//! wrong or missing arrow at the vertex joins it to a vertex of that label
//! in that direction (in the stored or the true quiver). A vertex with an
//! empty set is *exact*. Initially only the outermost generation is
//! uncertain, in the directions of its unglued star arrows; orbit mutation
//! spreads uncertainty only along paths through the mutated class.
//!
//! Labels are 0-based in the API and 1-based in every text format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::ExchangeMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: usize,
    pub frozen: bool,
    /// Gluing generation that created the vertex.
    pub depth: usize,
    /// Labels (bitset) of possibly wrong outgoing arrows.
    pub doubt_out: u64,
    /// Labels (bitset) of possibly wrong incoming arrows.
    pub doubt_in: u64,
}

impl Vertex {
    /// Whether every arrow at this vertex matches the infinite quiver.
    pub fn is_exact(&self) -> bool {
        self.doubt_out == 0 && self.doubt_in == 0
    }
}

/// Uncertainty is tracked per label in a 64-bit set.
pub const MAX_LABELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledQuiver {
    vertices: Vec<Vertex>,
    /// `adj[u]` lists `(v, b[u][v])` for nonzero entries, sorted by `v`.
    adj: Vec<Vec<(usize, Int)>>,
    n_labels: usize,
    /// Remaining orbit mutations; `None` when the truncation is the whole
    /// quiver.
    margin: Option<usize>,
}

impl LabeledQuiver {
    /// A quiver from explicit arrows `(u, v, b[u][v])`; every vertex is
    /// exact and the margin unbounded.
    pub fn from_arrows(labels: &[usize], frozen_labels: &[bool], arrows: &[(usize, usize, i64)]) -> Result<Self> {
        let n_labels = frozen_labels.len();
        check_label_count(n_labels)?;
        let vertices = labels
            .iter()
            .map(|&l| {
                if l >= n_labels {
                    return Err(Error::IndexOutOfRange {
                        index: l + 1,
                        bound: n_labels,
                    });
                }
                Ok(Vertex {
                    label: l,
                    frozen: frozen_labels[l],
                    depth: 0,
                    doubt_out: 0,
                    doubt_in: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut q = LabeledQuiver {
            adj: vec![Vec::new(); vertices.len()],
            vertices,
            n_labels,
            margin: None,
        };
        for &(u, v, b) in arrows {
            let bound = q.vertices.len();
            if u >= bound || v >= bound || u == v {
                return Err(Error::InvalidParameter(format!("bad arrow {u} -> {v}")));
            }
            q.add_arrow(u, v, &Int::from(b));
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn margin(&self) -> Option<usize> {
        self.margin
    }

    pub fn label_is_frozen(&self, label: usize) -> bool {
        self.vertices.iter().any(|v| v.label == label && v.frozen)
    }

    /// Nonzero `(neighbor, b[v][neighbor])` entries.
    pub fn neighbors(&self, v: usize) -> &[(usize, Int)] {
        &self.adj[v]
    }

    pub fn arrow(&self, u: usize, v: usize) -> Int {
        match self.adj[u].binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.adj[u][i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Positive entries `(u, v, b[u][v])` ordered by `(u, v)`.
    pub fn arrows(&self) -> Vec<(usize, usize, Int)> {
        let mut out = Vec::new();
        for (u, row) in self.adj.iter().enumerate() {
            for (v, b) in row {
                if b.is_positive() {
                    out.push((u, *v, b.clone()));
                }
            }
        }
        out
    }

    pub fn class(&self, label: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].label == label).collect()
    }

    pub fn exact_class(&self, label: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].label == label && self.vertices[v].is_exact())
            .collect()
    }

    pub fn is_exact(&self, v: usize) -> bool {
        self.vertices[v].is_exact()
    }

    /// Whether every arrow between `v` and vertices labeled `label` is
    /// known to match the infinite quiver.
    pub fn is_certain(&self, v: usize, label: usize) -> bool {
        let vert = &self.vertices[v];
        (vert.doubt_out | vert.doubt_in) & (1u64 << label) == 0
    }

    fn arrow_certain(&self, u: usize, w: usize) -> bool {
        self.is_certain(u, self.vertices[w].label) || self.is_certain(w, self.vertices[u].label)
    }

    /// Labels (bitsets) of the stored out- and in-neighbors of `v`.
    fn stored_labels(&self, v: usize) -> (u64, u64) {
        let (mut out, mut inn) = (0u64, 0u64);
        for (w, b) in &self.adj[v] {
            let bit = 1u64 << self.vertices[*w].label;
            if b.is_positive() {
                out |= bit;
            } else {
                inn |= bit;
            }
        }
        (out, inn)
    }

    /// Uncertainty sets after an orbit mutation at `class` (all labeled
    /// `label`), computed from the arrows before the mutation.
    ///
    /// An arrow `x - k` with `k` outside the class changes through paths
    /// `x -> c -> k` or `k -> c -> x`; it can only go wrong when one of the
    /// two arrows on such a path is uncertain, and then only towards labels
    /// `c` may point to (or receive from).
    fn propagate_doubt(&self, label: usize, class: &[usize]) -> Vec<(u64, u64)> {
        let ibit = 1u64 << label;
        let all = label_mask(self.n_labels) & !ibit;
        let mut next: Vec<(u64, u64)> = self.vertices.iter().map(|v| (v.doubt_out, v.doubt_in)).collect();
        let mut touched = vec![false; self.vertices.len()];
        for &c in class {
            touched[c] = true;
            next[c] = (self.vertices[c].doubt_in, self.vertices[c].doubt_out);
        }
        let mut candidates: Vec<usize> = Vec::new();
        for &c in class {
            for (x, _) in &self.adj[c] {
                if !touched[*x] {
                    touched[*x] = true;
                    candidates.push(*x);
                }
            }
        }
        for (x, v) in self.vertices.iter().enumerate() {
            if !touched[x] && (v.doubt_out | v.doubt_in) & ibit != 0 {
                touched[x] = true;
                candidates.push(x);
            }
        }
        let possible = |c: usize| {
            let (so, si) = self.stored_labels(c);
            (so | self.vertices[c].doubt_out, si | self.vertices[c].doubt_in)
        };
        for x in candidates {
            let (uo, ui) = (self.vertices[x].doubt_out, self.vertices[x].doubt_in);
            let (so, si) = self.stored_labels(x);
            let (po, pi) = (so | uo, si | ui);
            // existing arrows whose far end is itself unsure about the class
            let (mut shaky_o, mut shaky_i) = (uo, ui);
            for (k, b) in &self.adj[x] {
                let vk = &self.vertices[*k];
                if (vk.doubt_out | vk.doubt_in) & ibit != 0 {
                    if b.is_positive() {
                        shaky_o |= 1 << vk.label;
                    } else {
                        shaky_i |= 1 << vk.label;
                    }
                }
            }
            // arrows into the class reverse
            let mut no = (uo & !ibit) | (ui & ibit);
            let mut ni = (ui & !ibit) | (uo & ibit);
            // labels reachable by a path through the class, out of / into x
            let (mut reach_out, mut reach_in) = (0u64, 0u64);
            let (mut add_o, mut add_i) = (0u64, 0u64);
            for (c, b) in &self.adj[x] {
                if self.vertices[*c].label != label {
                    continue;
                }
                let (cpo, cpi) = possible(*c);
                if b.is_positive() {
                    reach_out |= cpo;
                    if uo & ibit != 0 {
                        add_o |= cpo;
                        add_i |= cpo & pi;
                    } else {
                        add_o |= self.vertices[*c].doubt_out;
                        add_i |= self.vertices[*c].doubt_out & shaky_i;
                    }
                } else {
                    reach_in |= cpi;
                    if ui & ibit != 0 {
                        add_i |= cpi;
                        add_o |= cpi & po;
                    } else {
                        add_i |= self.vertices[*c].doubt_in;
                        add_o |= self.vertices[*c].doubt_in & shaky_o;
                    }
                }
            }
            // an unseen class neighbor may point anywhere
            if uo & ibit != 0 {
                reach_out |= all;
                add_o |= all;
                add_i |= pi;
            }
            if ui & ibit != 0 {
                reach_in |= all;
                add_i |= all;
                add_o |= po;
            }
            // an already uncertain arrow may change direction
            add_o |= ui & reach_out;
            add_i |= uo & reach_in;
            no |= add_o & !ibit;
            ni |= add_i & !ibit;
            next[x] = (no, ni);
        }
        next
    }

    fn add_arrow(&mut self, u: usize, v: usize, b: &Int) {
        add_entry(&mut self.adj[u], v, b);
        add_entry(&mut self.adj[v], u, &-b);
    }

    fn push_vertex(&mut self, label: usize, frozen: bool, depth: usize) -> usize {
        self.vertices.push(Vertex {
            label,
            frozen,
            depth,
            doubt_out: 0,
            doubt_in: 0,
        });
        self.adj.push(Vec::new());
        self.vertices.len() - 1
    }

    /// Whether the underlying undirected graph is a tree.
    pub fn is_tree(&self) -> bool {
        let v = self.vertices.len();
        let edges: usize = self.adj.iter().map(|r| r.len()).sum::<usize>() / 2;
        if v == 0 || edges + 1 != v {
            return false;
        }
        let mut seen = vec![false; v];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == v
    }

    /// Multiset of `(neighbor label, arrow multiplicity)` around `v`; the
    /// shape compared against local stars.
    pub fn neighborhood_signature(&self, v: usize) -> BTreeMap<(usize, Int), usize> {
        let mut sig = BTreeMap::new();
        for (w, b) in &self.adj[v] {
            *sig.entry((self.vertices[*w].label, b.clone())).or_insert(0) += 1;
        }
        sig
    }

    /// Ordinary quiver mutation at one vertex. Exactness and margin are not
    /// touched.
    pub fn mutate_vertex(&self, c: usize) -> LabeledQuiver {
        let mut q = self.clone();
        q.apply_mutation(&[c]);
        q
    }

    fn apply_mutation(&mut self, class: &[usize]) {
        let mut in_class = vec![false; self.vertices.len()];
        for &c in class {
            in_class[c] = true;
        }
        let mut delta: FxHashMap<(usize, usize), Int> = FxHashMap::default();
        for &c in class {
            let row = &self.adj[c];
            for (j, bjc) in row.iter().filter(|(j, _)| !in_class[*j]).map(|(j, b)| (*j, -b)) {
                if !bjc.is_positive() {
                    continue;
                }
                for (k, bck) in row {
                    if bck.is_positive() && *k != j && !in_class[*k] {
                        let (a, b, s) = if j < *k { (j, *k, &bjc * bck) } else { (*k, j, -(&bjc * bck)) };
                        delta.entry((a, b)).and_modify(|e| *e += &s).or_insert(s);
                    }
                }
            }
        }
        let mut entries: Vec<((usize, usize), Int)> = delta.into_iter().collect();
        entries.sort_unstable_by_key(|e| e.0);
        for ((j, k), d) in entries {
            if !d.is_zero() {
                self.add_arrow(j, k, &d);
            }
        }
        for &c in class {
            for i in 0..self.adj[c].len() {
                let w = self.adj[c][i].0;
                self.adj[c][i].1 = -&self.adj[c][i].1;
                if !in_class[w] {
                    for e in self.adj[w].iter_mut().filter(|e| e.0 == c) {
                        e.1 = -&e.1;
                    }
                }
            }
        }
    }

    /// Orbit mutation at every vertex labeled `label`.
    pub fn orbit_mutate(&self, label: usize) -> Result<LabeledQuiver> {
        if label >= self.n_labels {
            return Err(Error::IndexOutOfRange {
                index: label + 1,
                bound: self.n_labels,
            });
        }
        if self.label_is_frozen(label) {
            return Err(Error::FrozenLabel(label + 1));
        }
        if self.margin == Some(0) {
            return Err(Error::FrontierExhausted(format!(
                "no certified interior left for a mutation at label {}",
                label + 1
            )));
        }
        if self.has_gamma_loops(label) {
            return Err(Error::GammaLoopAt(label + 1));
        }
        if self.has_gamma_2cycles(label) {
            return Err(Error::GammaTwoCycleAt(label + 1));
        }
        let class = self.class(label);
        let doubt = self.propagate_doubt(label, &class);
        let mut q = self.clone();
        q.apply_mutation(&class);
        for (x, (o, i)) in doubt.into_iter().enumerate() {
            // the true quiver has no arrows inside a class, so a vertex whose
            // stored arrows avoid its own class agrees with it there
            let own = 1u64 << q.vertices[x].label;
            let clean = q.adj[x].iter().all(|(k, _)| q.vertices[*k].label != q.vertices[x].label);
            let keep = if clean { !own } else { u64::MAX };
            q.vertices[x].doubt_out = o & keep;
            q.vertices[x].doubt_in = i & keep;
        }
        q.margin = self.margin.map(|m| m - 1);
        Ok(q)
    }

    /// Orbit mutations along a 0-based label sequence.
    pub fn orbit_mutate_seq(&self, seq: &[usize]) -> Result<LabeledQuiver> {
        let mut q = self.clone();
        for &l in seq {
            q = q.orbit_mutate(l)?;
        }
        Ok(q)
    }

    /// An arrow inside the class of `label` at an exact vertex.
    pub fn has_gamma_loops(&self, label: usize) -> bool {
        self.class(label).into_iter().any(|u| {
            self.adj[u]
                .iter()
                .any(|(w, _)| self.vertices[*w].label == label && self.arrow_certain(u, *w))
        })
    }

    /// Arrows `i' -> j -> i''` with `i', i''` labeled `label` and `j` not,
    /// counting only certain arrows.
    pub fn has_gamma_2cycles(&self, label: usize) -> bool {
        (0..self.vertices.len()).any(|j| {
            if self.vertices[j].label == label {
                return false;
            }
            let (mut into, mut out) = (false, false);
            for (c, b) in &self.adj[j] {
                if self.vertices[*c].label == label && self.arrow_certain(j, *c) {
                    if b.is_positive() {
                        out = true;
                    } else {
                        into = true;
                    }
                }
            }
            into && out
        })
    }

    /// First label with a Γ-loop or Γ-2-cycle in the certified region.
    pub fn gamma_defect(&self) -> Option<Error> {
        (0..self.n_labels).find_map(|l| {
            if self.has_gamma_loops(l) {
                Some(Error::GammaLoopAt(l + 1))
            } else if self.has_gamma_2cycles(l) {
                Some(Error::GammaTwoCycleAt(l + 1))
            } else {
                None
            }
        })
    }

    fn fold_entry(&self, rep: usize, row: usize) -> Int {
        let mut sum = Int::ZERO;
        for (w, b) in &self.adj[rep] {
            if self.vertices[*w].label == row {
                sum -= b;
            }
        }
        sum
    }

    /// The folded matrix, with one row per label and one column per
    /// exchangeable label. Entry `(i, j)` is read off the lowest-id vertex
    /// labeled `j` whose arrows to label `i` are certain, and cross-checked
    /// against the next such vertex. A truncation with no such vertex gives
    /// [`Error::FrontierExhausted`].
    pub fn fold(&self) -> Result<ExchangeMatrix> {
        if let Some(defect) = self.gamma_defect() {
            return Err(Error::IllDefinedFolding(defect.to_string()));
        }
        let frozen: Vec<bool> = (0..self.n_labels).map(|l| self.label_is_frozen(l)).collect();
        let n = frozen.iter().filter(|f| !**f).count();
        if frozen[..n].iter().any(|f| *f) {
            return Err(Error::IllDefinedFolding("frozen labels must come last".into()));
        }
        let mut entries = vec![Int::ZERO; self.n_labels * n];
        for j in 0..n {
            let class = self.class(j);
            for i in 0..self.n_labels {
                let mut reps = class.iter().copied().filter(|&v| self.is_certain(v, i));
                let Some(first) = reps.next() else {
                    return Err(Error::FrontierExhausted(format!(
                        "no vertex with label {} has certain arrows to label {}",
                        j + 1,
                        i + 1
                    )));
                };
                let b = self.fold_entry(first, i);
                if let Some(second) = reps.next() {
                    if self.fold_entry(second, i) != b {
                        return Err(Error::IllDefinedFolding(format!(
                            "vertices {first} and {second} with label {} disagree on label {}",
                            j + 1,
                            i + 1
                        )));
                    }
                }
                entries[i * n + j] = b;
            }
        }
        ExchangeMatrix::new(n, self.n_labels - n, entries)
    }

    /// DOT multigraph, one edge line per arrow.
    pub fn to_dot(&self) -> String {
        let name = |v: usize| format!("v{}_l{}", v, self.vertices[v].label + 1);
        let mut out = String::from("digraph Q {\n");
        for (v, vert) in self.vertices.iter().enumerate() {
            let shape = if vert.frozen { ", shape=box" } else { "" };
            let _ = writeln!(out, "  {} [label=\"{}\"{}];", name(v), vert.label + 1, shape);
        }
        for (u, v, b) in self.arrows() {
            let mult = b.to_i64().expect("arrow multiplicity fits in i64");
            for _ in 0..mult {
                let _ = writeln!(out, "  {} -> {};", name(u), name(v));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Snapshot: `V E n_labels margin`, then `id label frozen depth doubt`
    /// per vertex, then `u v mult` per positive arrow entry. `doubt` is `0`
    /// for an exact vertex, otherwise `<out>:<in>` label bitsets in hex.
    pub fn to_snapshot(&self) -> String {
        let arrows = self.arrows();
        let margin = self.margin.map_or_else(|| "inf".to_string(), |m| m.to_string());
        let mut out = format!("{} {} {} {}\n", self.vertices.len(), arrows.len(), self.n_labels, margin);
        for (id, v) in self.vertices.iter().enumerate() {
            let doubt = if v.is_exact() {
                "0".to_string()
            } else {
                format!("{:x}:{:x}", v.doubt_out, v.doubt_in)
            };
            let _ = writeln!(out, "{} {} {} {} {}", id, v.label + 1, v.frozen as u8, v.depth, doubt);
        }
        for (u, v, b) in arrows {
            let _ = writeln!(out, "{u} {v} {b}");
        }
        out
    }

    pub fn parse_snapshot(text: &str) -> Result<LabeledQuiver> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty snapshot"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 {
            return Err(Error::parse(ln + 1, 1, "expected `V E n_labels margin`"));
        }
        let num = |s: &str, ln: usize, col: usize| -> Result<usize> {
            s.parse::<usize>().map_err(|_| Error::parse(ln + 1, col, format!("expected a non-negative integer, found `{s}`")))
        };
        let (nv, ne, n_labels) = (num(h[0], ln, 1)?, num(h[1], ln, 2)?, num(h[2], ln, 3)?);
        let margin = if h[3] == "inf" { None } else { Some(num(h[3], ln, 4)?) };
        check_label_count(n_labels)?;
        let mut q = LabeledQuiver {
            vertices: Vec::with_capacity(nv),
            adj: vec![Vec::new(); nv],
            n_labels,
            margin,
        };
        for id in 0..nv {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln + 1, 1, "missing vertex lines"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            // the doubt column may be omitted for exact vertices
            if !(f.len() == 4 || f.len() == 5) || num(f[0], ln, 1)? != id {
                return Err(Error::parse(ln + 1, 1, format!("expected `{id} label frozen depth [doubt]`")));
            }
            let label = num(f[1], ln, 2)?;
            if label == 0 || label > n_labels {
                return Err(Error::parse(ln + 1, 2, format!("label {label} outside 1..={n_labels}")));
            }
            let flag = |s: &str, col: usize| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(Error::parse(ln + 1, col, "expected 0 or 1")),
            };
            let (doubt_out, doubt_in) = match f.get(4).copied().unwrap_or("0") {
                "0" => (0, 0),
                d => {
                    let bad = || Error::parse(ln + 1, 5, "expected `0` or `<out>:<in>` in hex");
                    let (o, i) = d.split_once(':').ok_or_else(bad)?;
                    (u64::from_str_radix(o, 16).map_err(|_| bad())?, u64::from_str_radix(i, 16).map_err(|_| bad())?)
                }
            };
            q.vertices.push(Vertex {
                label: label - 1,
                frozen: flag(f[2], 3)?,
                depth: num(f[3], ln, 4)?,
                doubt_out,
                doubt_in,
            });
        }
        for _ in 0..ne {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln + 1, 1, "missing arrow lines"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::parse(ln + 1, 1, "expected `u v mult`"));
            }
            let (u, v) = (num(f[0], ln, 1)?, num(f[1], ln, 2)?);
            let b: Int = f[2].parse().map_err(|_| Error::parse(ln + 1, 3, "bad multiplicity"))?;
            if u >= nv || v >= nv || u == v || !b.is_positive() {
                return Err(Error::parse(ln + 1, 1, "arrow out of range"));
            }
            q.add_arrow(u, v, &b);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln + 1, 1, "trailing content"));
        }
        Ok(q)
    }
}

fn check_label_count(n_labels: usize) -> Result<()> {
    if n_labels > MAX_LABELS {
        return Err(Error::InvalidParameter(format!("at most {MAX_LABELS} labels are supported, found {n_labels}")));
    }
    Ok(())
}

fn label_mask(n_labels: usize) -> u64 {
    if n_labels >= 64 {
        u64::MAX
    } else {
        (1u64 << n_labels) - 1
    }
}

fn add_entry(row: &mut Vec<(usize, Int)>, v: usize, b: &Int) {
    match row.binary_search_by_key(&v, |p| p.0) {
        Ok(i) => {
            row[i].1 += b;
            if row[i].1.is_zero() {
                row.remove(i);
            }
        }
        Err(i) => {
            if !b.is_zero() {
                row.insert(i, (v, b.clone()));
            }
        }
    }
}

/// The square matrix whose covering quiver is built, and which labels are
/// frozen. Matrices with frozen rows are completed to `[[B, -B'^T], [B', 0]]`
/// with the extra labels frozen.
fn square_with_frozen(b: &ExchangeMatrix) -> (ExchangeMatrix, Vec<bool>) {
    let total = b.rows();
    let frozen = (0..total).map(|l| l >= b.n()).collect();
    if b.m() == 0 {
        (b.clone(), frozen)
    } else {
        (b.frozen_completion(), frozen)
    }
}

/// The local star at label `i` of a square sign-skew-symmetric matrix: one
/// center plus `|b_ji|` copies of each label `j`.
pub fn local_quiver(b: &ExchangeMatrix, i: usize) -> Result<LabeledQuiver> {
    let (sq, frozen) = square_with_frozen(b);
    sq.check_sign_skew_symmetric()?;
    if i >= sq.n() {
        return Err(Error::IndexOutOfRange { index: i + 1, bound: sq.n() });
    }
    let mut q = LabeledQuiver {
        vertices: Vec::new(),
        adj: Vec::new(),
        n_labels: sq.n(),
        margin: None,
    };
    let center = q.push_vertex(i, frozen[i], 0);
    for j in 0..sq.n() {
        let bji = sq.get(j, i).clone();
        let copies = bji.abs().to_i64().expect("entry fits in i64");
        let sign = Int::from(bji.signum() as i64);
        for _ in 0..copies {
            let v = q.push_vertex(j, frozen[j], 1);
            q.add_arrow(v, center, &sign);
        }
    }
    Ok(q)
}

/// The truncation `Q_(depth)` of the covering quiver: `Q^1` followed by
/// `depth - 1` rounds of gluing a local star onto every vertex created in
/// the previous round.
pub fn build_unfolding(b: &ExchangeMatrix, depth: usize) -> Result<LabeledQuiver> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let (sq, frozen) = square_with_frozen(b);
    sq.check_sign_skew_symmetric()?;
    sq.check_acyclic_connected()?;
    let n = sq.n();
    check_label_count(n)?;
    let mut q = local_quiver(&sq, 0)?;
    for vert in q.vertices.iter_mut() {
        vert.frozen = frozen[vert.label];
    }
    let mut parent: Vec<usize> = vec![usize::MAX; q.vertex_count()];
    for p in parent.iter_mut().skip(1) {
        *p = 0;
    }
    let mut fresh: Vec<usize> = (1..q.vertex_count()).collect();
    for generation in 2..=depth {
        if fresh.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for &v in &fresh {
            let i = q.vertices[v].label;
            let p = parent[v];
            let k = q.vertices[p].label;
            for j in 0..n {
                let bji = sq.get(j, i);
                let mut copies = bji.abs().to_i64().expect("entry fits in i64");
                if j == k {
                    // one copy of label k is the parent, already glued on
                    copies -= 1;
                }
                let sign = Int::from(bji.signum() as i64);
                for _ in 0..copies {
                    let w = q.push_vertex(j, frozen[j], generation);
                    q.add_arrow(w, v, &sign);
                    parent.push(v);
                    next.push(w);
                }
            }
        }
        fresh = next;
    }
    // frozen vertices never mutate, so frontier vertices also get their
    // frozen neighbours; those leaves sit one generation past the truncation
    let mut leaves = Vec::new();
    for &v in &fresh {
        if q.vertices[v].frozen {
            continue;
        }
        let i = q.vertices[v].label;
        let k = q.vertices[parent[v]].label;
        for j in (0..n).filter(|&j| frozen[j]) {
            let bji = sq.get(j, i);
            let copies = bji.abs().to_i64().expect("entry fits in i64") - i64::from(j == k);
            let sign = Int::from(bji.signum() as i64);
            for _ in 0..copies {
                let w = q.push_vertex(j, true, depth + 1);
                q.add_arrow(w, v, &sign);
                parent.push(v);
                leaves.push(w);
            }
        }
    }
    let mut completed = vec![false; q.vertex_count()];
    for &v in &fresh {
        completed[v] = !q.vertices[v].frozen;
    }
    fresh.extend(leaves);
    // unglued vertices miss the rest of their star
    for &w in &fresh {
        let i = q.vertices[w].label;
        let k = q.vertices[parent[w]].label;
        for j in 0..n {
            if completed[w] && frozen[j] {
                continue;
            }
            let bji = sq.get(j, i);
            let copies = bji.abs().to_i64().expect("entry fits in i64") - i64::from(j == k);
            if copies > 0 {
                if bji.is_positive() {
                    q.vertices[w].doubt_in |= 1 << j;
                } else {
                    q.vertices[w].doubt_out |= 1 << j;
                }
            }
        }
    }
    if q.vertices.iter().all(Vertex::is_exact) {
        // every vertex has its full star: the truncation is the whole quiver
        q.margin = None;
    } else {
        q.margin = Some(depth.saturating_sub(2));
    }
    Ok(q)
}

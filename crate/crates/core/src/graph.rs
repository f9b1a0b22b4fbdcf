//! Simple undirected graphs on bitset rows: complements, disjunctive powers,
//! and exact maximum clique by branch and bound with a colouring bound.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;

/// Default vertex cap for product graphs.
pub const DEFAULT_VERTEX_CAP: usize = 10_000;

/// Fixed-width bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn last(&self) -> Option<usize> {
        self.words
            .iter()
            .rposition(|&w| w != 0)
            .map(|w| w * 64 + 63 - self.words[w].leading_zeros() as usize)
    }

    /// Removes every member `<= i`.
    pub fn clear_through(&mut self, i: usize) {
        let w = i / 64;
        for word in &mut self.words[..w] {
            *word = 0;
        }
        if let Some(word) = self.words.get_mut(w) {
            *word &= !(u64::MAX >> (63 - i % 64));
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// Simple undirected graph: symmetric, irreflexive adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    /// Builds from an edge list; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds `{u, v}`; a self-loop is ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.rows[u]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}

/// `n`-th disjunctive (co-normal) power: tuples are adjacent iff some
/// coordinate pair is an edge of the base graph.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    pub base: Graph,
    pub power: usize,
    pub graph: Graph,
}

impl ProductGraph {
    /// Tuple of base vertices for product vertex `index` (lexicographic order).
    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let b = self.base.vertex_count();
        let mut t = vec![0; self.power];
        for slot in t.iter_mut().rev() {
            *slot = index % b;
            index /= b;
        }
        t
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        let b = self.base.vertex_count();
        tuple.iter().fold(0, |acc, &x| acc * b + x)
    }
}

pub fn product(g: &Graph, n: usize) -> Result<ProductGraph> {
    product_with_cap(g, n, DEFAULT_VERTEX_CAP)
}

pub fn product_with_cap(g: &Graph, n: usize, cap: usize) -> Result<ProductGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "product power must be at least 1".into(),
        ));
    }
    let b = g.vertex_count();
    let vertices = (b as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if vertices > cap as u128 {
        return Err(Error::SizeCapExceeded { vertices, cap });
    }
    let total = vertices as usize;
    let mut pg = ProductGraph {
        base: g.clone(),
        power: n,
        graph: Graph::empty(total),
    };
    let rows = exec::map_range(total, |u| {
        let tu = pg.tuple(u);
        let mut row = BitSet::new(total);
        for v in 0..total {
            if v == u {
                continue;
            }
            let mut rest = v;
            for t in (0..n).rev() {
                let x = rest % b;
                rest /= b;
                if g.has_edge(tu[t], x) {
                    row.insert(v);
                    break;
                }
            }
        }
        row
    });
    pg.graph.rows = rows;
    Ok(pg)
}

/// Outcome of a maximum clique search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Ascending vertex list; the lexicographically smallest maximum clique when exact.
    pub witness: Vec<usize>,
    /// False when the node budget ran out; `size` is then only a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

/// Exact clique number with no node budget.
pub fn clique_number(g: &Graph) -> CliqueResult {
    clique_number_with_budget(g, None)
}

struct Search<'a> {
    g: &'a Graph,
    shared_best: &'a AtomicU64,
    branch: usize,
    nodes: &'a AtomicU64,
    budget: Option<u64>,
    best: Vec<usize>,
    current: Vec<usize>,
    out_of_budget: bool,
}

impl Search<'_> {
    /// Greedy colouring from the highest index down, one class at a time.
    /// The colours used by the suffix `{v ∈ P : v ≥ x}` bound any clique in
    /// it; returns `(x, bound)` for each member in ascending order.
    fn suffix_bounds(&self, cand: &BitSet) -> Vec<(usize, usize)> {
        let mut colour = Vec::with_capacity(cand.count());
        let mut uncoloured = cand.clone();
        let mut k = 0;
        while !uncoloured.is_empty() {
            k += 1;
            let mut open = uncoloured.clone();
            while let Some(v) = open.last() {
                open.remove(v);
                open.difference_with(self.g.neighbors(v));
                uncoloured.remove(v);
                colour.push((v, k));
            }
        }
        colour.sort_unstable();
        let mut running = 0;
        for entry in colour.iter_mut().rev() {
            running = running.max(entry.1);
            entry.1 = running;
        }
        colour
    }

    fn expand(&mut self, cand: &BitSet) {
        if self.out_of_budget {
            return;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            self.out_of_budget = true;
            return;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
            self.shared_best
                .fetch_max(rank(self.best.len(), self.branch), Ordering::Relaxed);
        }
        for (v, bound) in self.suffix_bounds(cand) {
            let reach = self.current.len() + bound;
            if rank(reach, self.branch) <= self.shared_best.load(Ordering::Relaxed) {
                break;
            }
            let mut next = cand.intersection(self.g.neighbors(v));
            // only vertices after v, to enumerate cliques in lexicographic order
            next.clear_through(v);
            self.current.push(v);
            self.expand(&next);
            self.current.pop();
            if self.out_of_budget {
                return;
            }
        }
    }
}

/// Orders (clique size, top-level branch): larger cliques first, then lower
/// branches. A branch may stop once it cannot beat the shared maximum, since
/// ties are won by the lowest branch.
fn rank(size: usize, branch: usize) -> u64 {
    ((size as u64) << 32) | (u32::MAX as u64 - branch as u64)
}

/// Branch and bound over vertices in ascending order. Top-level branches
/// (cliques whose smallest vertex is `v`) run independently and share only
/// the best size found so far; the reported witness is the largest branch
/// result, ties going to the smallest `v`.
pub fn clique_number_with_budget(g: &Graph, budget: Option<u64>) -> CliqueResult {
    let n = g.vertex_count();
    if n == 0 {
        return CliqueResult {
            size: 0,
            witness: vec![],
            exact: true,
            nodes: 0,
        };
    }
    let shared_best = AtomicU64::new(rank(1, n));
    let nodes = AtomicU64::new(0);
    let branches = exec::map_range(n, |v| {
        let mut cand = g.neighbors(v).clone();
        cand.clear_through(v);
        let mut s = Search {
            g,
            shared_best: &shared_best,
            branch: v,
            nodes: &nodes,
            budget,
            best: Vec::new(),
            current: vec![v],
            out_of_budget: false,
        };
        // A branch that cannot reach the shared best is skipped up front.
        if rank(1 + cand.count(), v) > shared_best.load(Ordering::Relaxed) {
            s.expand(&cand);
        }
        (s.best, s.out_of_budget)
    });
    let exact = !branches.iter().any(|(_, oob)| *oob);
    let witness = branches
        .into_iter()
        .map(|(b, _)| b)
        .fold(vec![0], |acc, b| if b.len() > acc.len() { b } else { acc });
    CliqueResult {
        size: witness.len(),
        witness,
        exact,
        nodes: nodes.load(Ordering::Relaxed),
    }
}

/// Independence number as the clique number of the complement.
pub fn independence_number(g: &Graph) -> CliqueResult {
    clique_number(&g.complement())
}

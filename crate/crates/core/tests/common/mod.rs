//! Shared oracles and instance generators for the integration suites. None of
//! these go through the branch-and-bound or product-graph code they check.

#![allow(dead_code)]

use qzec::numerics::{ComplexMatrix, C64};
use qzec::random::{gaussian_vector, random_channel, random_density, random_unitary, SeededRng};
use qzec::{DensityOperator, Graph, InputState, KrausChannel, PureState};
use rand::seq::SliceRandom;
use rand::Rng;

/// Largest clique by enumerating every vertex subset (|V| ≤ 20).
pub fn brute_force_clique(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 20);
    let nbr: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| g.has_edge(v, u))
                .fold(0u32, |m, u| m | 1 << u)
        })
        .collect();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let ok = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .all(|v| mask & !(1 << v) & !nbr[v] == 0);
        if ok {
            best = size;
        }
    }
    best
}

/// Adjacency bitmasks of the n-th strong power of `h`: distinct tuples are
/// adjacent iff every coordinate is equal or adjacent in `h`.
pub fn strong_power_masks(h: &Graph, n: usize) -> Vec<u64> {
    let b = h.vertex_count();
    let total = b.pow(n as u32);
    assert!(total <= 64);
    let tuple = |mut x: usize| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = x % b;
            x /= b;
        }
        t
    };
    (0..total)
        .map(|u| {
            let tu = tuple(u);
            (0..total)
                .filter(|&v| v != u)
                .filter(|&v| {
                    tuple(v)
                        .iter()
                        .zip(&tu)
                        .all(|(&x, &y)| x == y || h.has_edge(x, y))
                })
                .fold(0u64, |m, v| m | 1 << v)
        })
        .collect()
}

/// Maximum independent set size by simple branching on bitmasks.
pub fn independence_by_branching(adj: &[u64]) -> usize {
    fn go(adj: &[u64], p: u64) -> usize {
        if p == 0 {
            return 0;
        }
        let mut best_v = usize::MAX;
        let mut best_deg = 0;
        let mut bits = p;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let deg = (adj[v] & p).count_ones();
            if deg <= 1 {
                // a vertex of degree ≤ 1 belongs to some maximum independent set
                return 1 + go(adj, p & !(1 << v) & !adj[v]);
            }
            if best_v == usize::MAX || deg > best_deg {
                best_v = v;
                best_deg = deg;
            }
        }
        let v = best_v;
        let without = go(adj, p & !(1 << v));
        let with = 1 + go(adj, p & !(1 << v) & !adj[v]);
        without.max(with)
    }
    let p = if adj.len() == 64 {
        u64::MAX
    } else {
        (1u64 << adj.len()) - 1
    };
    go(adj, p)
}

/// All labelled graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    (0u32..(1 << pairs.len()))
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

pub fn random_graph(rng: &mut SeededRng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
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

pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    permutations(g.vertex_count())
        .into_iter()
        .filter(|p| g.relabel(p) == *g)
        .collect()
}

/// A channel that is classical up to unitaries: input `U|i>` can only reach
/// outputs `V|j>` with `j ∈ reach[i]` (and `i ∈ reach[i]`).
pub struct StructuredChannel {
    pub channel: KrausChannel,
    pub input_frame: ComplexMatrix,
    pub output_frame: ComplexMatrix,
    pub reach: Vec<Vec<usize>>,
}

pub fn structured_channel(rng: &mut SeededRng, dim: usize, extra: f64) -> StructuredChannel {
    let u = random_unitary(rng, dim);
    let v = random_unitary(rng, dim);
    let reach: Vec<Vec<usize>> = (0..dim)
        .map(|i| {
            (0..dim)
                .filter(|&j| j == i || rng.gen_bool(extra))
                .collect()
        })
        .collect();
    let mut ops = Vec::new();
    for (i, outs) in reach.iter().enumerate() {
        let weights: Vec<f64> = outs.iter().map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (&j, w) in outs.iter().zip(&weights) {
            let mut e = ComplexMatrix::zeros(dim, dim);
            e[(j, i)] = C64::new((w / total).sqrt(), 0.0);
            ops.push(&(&v * &e) * &u.adjoint());
        }
    }
    StructuredChannel {
        channel: KrausChannel::new(ops, 1e-9).unwrap(),
        input_frame: u,
        output_frame: v,
        reach,
    }
}

/// Random pure superposition of the input-frame vectors indexed by `subset`.
pub fn pure_on(rng: &mut SeededRng, frame: &ComplexMatrix, subset: &[usize]) -> PureState {
    let coeffs = gaussian_vector(rng, subset.len());
    let mut v = vec![C64::new(0.0, 0.0); frame.rows()];
    for (&k, c) in subset.iter().zip(&coeffs) {
        for (i, slot) in v.iter_mut().enumerate() {
            *slot += c * frame[(i, k)];
        }
    }
    PureState::normalized(v).unwrap()
}

/// Random mixture of the input-frame vectors indexed by `subset`, with
/// distinct weights.
pub fn mixed_on(rng: &mut SeededRng, frame: &ComplexMatrix, subset: &[usize]) -> DensityOperator {
    let weights: Vec<f64> = subset.iter().map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(frame.rows(), frame.rows());
    for (&k, w) in subset.iter().zip(&weights) {
        m = &m + &ComplexMatrix::outer(&frame.column(k)).scale_real(w / total);
    }
    DensityOperator::new(m, 1e-8).unwrap()
}

pub fn random_subset(rng: &mut SeededRng, dim: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..dim).collect();
    all.shuffle(rng);
    let k = rng.gen_range(1..=dim);
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

/// A channel and two inputs, drawn from a mix of structured channels (where
/// non-adjacency is common) and fully random channels.
pub fn random_pair_instance(rng: &mut SeededRng) -> (KrausChannel, InputState, InputState) {
    let dim = rng.gen_range(2..=5);
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(1..=3);
            let ch = random_channel(rng, dim, k);
            let rank = rng.gen_range(1..=dim);
            let a = random_density(rng, dim, rank);
            let rank = rng.gen_range(1..=dim);
            let b = random_density(rng, dim, rank);
            (ch, a.into(), b.into())
        }
        1 => {
            // unitary channel with inputs on disjoint or overlapping subspaces
            let ch = random_channel(rng, dim, 1);
            let frame = random_unitary(rng, dim);
            let s1 = random_subset(rng, dim);
            let s2 = random_subset(rng, dim);
            (
                ch,
                mixed_on(rng, &frame, &s1).into(),
                pure_on(rng, &frame, &s2).into(),
            )
        }
        _ => {
            let sc = structured_channel(rng, dim, 0.3);
            let s1 = random_subset(rng, dim.min(2));
            let s2: Vec<usize> = random_subset(rng, dim.min(2))
                .iter()
                .map(|&i| dim - 1 - i)
                .collect();
            let mut s2 = s2;
            s2.sort_unstable();
            (
                sc.channel,
                mixed_on(rng, &sc.input_frame, &s1).into(),
                mixed_on(rng, &sc.input_frame, &s2).into(),
            )
        }
    }
}

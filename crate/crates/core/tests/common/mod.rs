//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

pub mod props;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use sgw::{signed_isomorphic, switch, Sign, SignedGraph, SwitchSet, Vertex};

pub const SEED: u64 = 0x0dd_ba11;

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Negative
    } else {
        Sign::Positive
    }
}

/// Random spanning tree plus each remaining pair with probability `density`.
pub fn random_connected(rng: &mut impl Rng, n: usize, density: f64) -> SignedGraph {
    let mut edges = Vec::new();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent.min(order[i]), parent.max(order[i])));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    let signed: Vec<_> = edges.into_iter().map(|(u, v)| (u, v, random_sign(rng))).collect();
    SignedGraph::new(n, signed).unwrap()
}

pub fn random_tree(rng: &mut impl Rng, n: usize) -> SignedGraph {
    random_connected(rng, n, 0.0)
}

pub fn random_switch(rng: &mut impl Rng, g: &SignedGraph) -> (SignedGraph, SwitchSet) {
    let x = SwitchSet::from_flags((0..g.n()).map(|_| rng.gen_bool(0.5)).collect());
    (switch(g, &x), x)
}

pub fn random_relabel(rng: &mut impl Rng, g: &SignedGraph) -> SignedGraph {
    let mut perm: Vec<Vertex> = (0..g.n()).collect();
    perm.shuffle(rng);
    g.relabel(&perm).unwrap()
}

pub fn cycle(n: usize, negative: &[usize]) -> SignedGraph {
    SignedGraph::new(
        n,
        (0..n).map(|i| (i, (i + 1) % n, if negative.contains(&i) { Sign::Negative } else { Sign::Positive })),
    )
    .unwrap()
}

/// Restricted growth strings: every partition of `0..n` into labelled blocks
/// exactly once.
fn partitions(n: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn rec(a: &mut Vec<usize>, n: usize, blocks: usize, f: &mut impl FnMut(&[usize], usize)) {
        if a.len() == n {
            f(a, blocks);
            return;
        }
        for c in 0..=blocks {
            a.push(c);
            rec(a, n, blocks.max(c + 1), f);
            a.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, 0, f)
}

/// Smallest number of classes over all partitions and all switchings such
/// that no class holds an edge and all edges between two classes share one
/// sign after switching.
pub fn naive_chromatic(g: &SignedGraph) -> usize {
    let n = g.n();
    assert!(n <= 10, "oracle is exponential");
    if n == 0 {
        return 0;
    }
    let edges = g.edge_triples();
    let mut best = usize::MAX;
    partitions(n, &mut |class, blocks| {
        if blocks >= best || edges.iter().any(|&(u, v, _)| class[u] == class[v]) {
            return;
        }
        for mask in 0u32..1 << n {
            let mut pair = vec![0i8; blocks * blocks];
            let ok = edges.iter().all(|&(u, v, s)| {
                let flip = (mask >> u ^ mask >> v) & 1 == 1;
                let s = if flip { -s.value() } else { s.value() };
                let (a, b) = (class[u].min(class[v]), class[u].max(class[v]));
                let slot = &mut pair[a * blocks + b];
                if *slot == 0 {
                    *slot = s;
                }
                *slot == s
            });
            if ok {
                best = blocks;
                return;
            }
        }
    });
    best
}

/// Pairs every graph in `a` with a signed-isomorphic graph in `b`.
pub fn same_multiset(a: &[SignedGraph], b: &[SignedGraph]) -> bool {
    fn rec(a: &[SignedGraph], b: &[SignedGraph], used: &mut [bool]) -> bool {
        let Some((first, rest)) = a.split_first() else {
            return true;
        };
        for j in 0..b.len() {
            if !used[j] && signed_isomorphic(first, &b[j]).unwrap() {
                used[j] = true;
                if rec(rest, b, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && rec(a, b, &mut vec![false; b.len()])
}

//! Prime factorization of connected unsigned graphs with respect to the
//! Cartesian product.
//!
//! Edges are partitioned by the transitive closure of the Djoković–Winkler
//! relation together with the relation that joins two incident edges not
//! spanning a chordless square. The classes of that closure are the edge sets
//! of the prime factors; coordinates are then read off the layers through the
//! base vertex 0. Signs of the input are ignored, and unsigned graphs are
//! represented as all-positive signed graphs throughout.
//!
//! The relation pass is quadratic in the number of edges, which is fine for
//! graphs of a few thousand edges.

use crate::error::{Error, Result};
use crate::graph::{SignedGraph, Vertex};
use crate::product::CoordinateSystem;
use crate::union_find::DisjointSet;

/// Prime factors, a coordinate system over them, and the factor each edge copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryDecomposition {
    pub coords: CoordinateSystem,
    pub edge_color: Vec<usize>,
}

impl OrdinaryDecomposition {
    pub fn factors(&self) -> &[SignedGraph] {
        self.coords.factors()
    }

    pub fn factor_count(&self) -> usize {
        self.coords.factor_count()
    }
}

fn all_pairs_distances(g: &SignedGraph) -> Vec<Vec<u32>> {
    (0..g.n())
        .map(|u| {
            g.bfs_distances(u)
                .into_iter()
                .map(|d| d as u32)
                .collect()
        })
        .collect()
}

/// Groups the edges of a connected graph into product classes.
fn product_relation(g: &SignedGraph) -> DisjointSet {
    let dist = all_pairs_distances(g);
    let edges = g.edges();
    let mut classes = DisjointSet::new(edges.len());

    // Djoković–Winkler: xy ~ uw iff d(x,u) + d(y,w) != d(x,w) + d(y,u)
    for (i, e) in edges.iter().enumerate() {
        let (dx, dy) = (&dist[e.u], &dist[e.v]);
        for (j, f) in edges.iter().enumerate().skip(i + 1) {
            if dx[f.u] + dy[f.v] != dx[f.v] + dy[f.u] {
                classes.union(i, j);
            }
        }
    }

    // incident edges xy, xz lying in no common chordless square
    for x in 0..g.n() {
        let inc = g.incident(x);
        for (a, &(y, ey)) in inc.iter().enumerate() {
            for &(z, ez) in &inc[a + 1..] {
                if g.has_edge(y, z) {
                    continue;
                }
                let square = g
                    .incident(y)
                    .iter()
                    .any(|&(w, _)| w != x && g.has_edge(w, z) && !g.has_edge(x, w));
                if !square {
                    classes.union(ey, ez);
                }
            }
        }
    }
    classes
}

/// Prime factorization of a connected graph with at least one edge.
///
/// The base vertex 0 gets the all-zero coordinates, factor vertices are
/// numbered in BFS order of the layer through vertex 0, and factors are
/// ordered by the BFS discovery order of their first edge.
pub fn factorize(g: &SignedGraph) -> Result<OrdinaryDecomposition> {
    g.require_connected_with_edges()?;
    let n = g.n();
    let mut classes = product_relation(g);

    let mut color_of_root = vec![usize::MAX; g.m()];
    let mut k = 0;
    for u in g.bfs_order(0) {
        for &(_, idx) in g.incident(u) {
            let r = classes.find(idx);
            if color_of_root[r] == usize::MAX {
                color_of_root[r] = k;
                k += 1;
            }
        }
    }
    let edge_color: Vec<usize> = (0..g.m()).map(|e| color_of_root[classes.find(e)]).collect();

    let mut coords = vec![vec![0usize; k]; n];
    let mut factors = Vec::with_capacity(k);
    for c in 0..k {
        // vertices sharing coordinate c are joined by edges of the other colors
        let mut rest = DisjointSet::new(n);
        for (e, edge) in g.edges().iter().enumerate() {
            if edge_color[e] != c {
                rest.union(edge.u, edge.v);
            }
        }
        let layer = color_bfs(g, &edge_color, c);
        let mut slot = vec![usize::MAX; n];
        for (idx, &u) in layer.iter().enumerate() {
            let r = rest.find(u);
            if slot[r] != usize::MAX {
                return Err(Error::InternalInvariantViolation(format!(
                    "layer of factor {c} meets a coordinate class twice"
                )));
            }
            slot[r] = idx;
        }
        for (u, tuple) in coords.iter_mut().enumerate() {
            let idx = slot[rest.find(u)];
            if idx == usize::MAX {
                return Err(Error::InternalInvariantViolation(format!(
                    "vertex {u} has no coordinate in factor {c}"
                )));
            }
            tuple[c] = idx;
        }
        let mut local = vec![usize::MAX; n];
        for (idx, &u) in layer.iter().enumerate() {
            local[u] = idx;
        }
        let factor_edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, edge)| edge_color[e] == c && local[edge.u] != usize::MAX && local[edge.v] != usize::MAX)
            .map(|(_, edge)| (local[edge.u], local[edge.v]))
            .collect();
        factors.push(SignedGraph::positive(layer.len(), &factor_edges)?);
    }

    let coords = CoordinateSystem::new(factors, coords)?;
    if !coords.reproduces(&g.underlying()) {
        return Err(Error::InternalInvariantViolation(
            "factorization does not reproduce the input graph".into(),
        ));
    }
    Ok(OrdinaryDecomposition { coords, edge_color })
}

/// BFS from vertex 0 along edges of one color.
fn color_bfs(g: &SignedGraph, edge_color: &[usize], c: usize) -> Vec<Vertex> {
    let mut seen = vec![false; g.n()];
    let mut order = vec![0];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &(w, idx) in g.incident(u) {
            if edge_color[idx] == c && !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

/// True when the connected graph has a single prime factor.
pub fn is_prime_ordinary(g: &SignedGraph) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(factorize(g)?.factor_count() == 1)
}

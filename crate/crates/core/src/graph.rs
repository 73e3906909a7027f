//! The signed graph value type.
//!
//! Vertices are the dense integers `0..n`. Edges are stored once, in canonical
//! order (`u < v`, then lexicographic), and the adjacency lists are derived
//! from them with neighbors sorted ascending.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Sign of an edge; serialized as the integers `1` and `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i64")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    /// `Negative` when `flag` is set. Handy for switch bits.
    pub fn from_flip(flag: bool) -> Sign {
        if flag {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Positive),
            '-' => Some(Sign::Negative),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_flip(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_flip(self == Sign::Positive)
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i64> for Sign {
    type Error = Error;
    fn try_from(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(Error::BadSign(other)),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub sign: Sign,
}

impl Edge {
    pub fn other(&self, w: Vertex) -> Vertex {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple loopless undirected graph with a sign on every edge.
///
/// Serializes as `{"n": .., "edges": [[u, v, sign], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
    // (neighbor, edge index), sorted by neighbor
    adjacency: Vec<Vec<(Vertex, usize)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(Vertex, Vertex, Sign)>,
}

impl From<SignedGraph> for GraphRepr {
    fn from(g: SignedGraph) -> GraphRepr {
        GraphRepr {
            n: g.n,
            edges: g.edge_triples(),
        }
    }
}

impl TryFrom<GraphRepr> for SignedGraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<SignedGraph> {
        SignedGraph::new(r.n, r.edges)
    }
}

impl SignedGraph {
    /// Builds a graph, validating the edge list. Edge order in the input is
    /// irrelevant; the stored order is canonical.
    pub fn new<I>(n: usize, edges: I) -> Result<SignedGraph>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Sign)>,
    {
        let mut list = Vec::new();
        for (a, b, sign) in edges {
            for vertex in [a, b] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, sign });
        }
        list.sort_unstable_by_key(|e| (e.u, e.v));
        for w in list.windows(2) {
            if (w[0].u, w[0].v) == (w[1].u, w[1].v) {
                return Err(Error::DuplicateEdge(w[0].u, w[0].v));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (idx, e) in list.iter().enumerate() {
            adjacency[e.u].push((e.v, idx));
            adjacency[e.v].push((e.u, idx));
        }
        for row in adjacency.iter_mut() {
            row.sort_unstable();
        }
        Ok(SignedGraph {
            n,
            edges: list,
            adjacency,
        })
    }

    /// Builds from integer signs, rejecting anything other than `1` / `-1`.
    pub fn from_int_signs(n: usize, edges: &[(Vertex, Vertex, i64)]) -> Result<SignedGraph> {
        let mut typed = Vec::with_capacity(edges.len());
        for &(u, v, s) in edges {
            typed.push((u, v, Sign::try_from(s)?));
        }
        SignedGraph::new(n, typed)
    }

    /// All-positive graph on the given unsigned edges.
    pub fn positive(n: usize, edges: &[(Vertex, Vertex)]) -> Result<SignedGraph> {
        SignedGraph::new(n, edges.iter().map(|&(u, v)| (u, v, Sign::Positive)))
    }

    pub fn empty(n: usize) -> SignedGraph {
        SignedGraph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    /// Neighbors of `u` with the sign of the connecting edge, ascending.
    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = (Vertex, Sign)> + '_ {
        self.adjacency[u]
            .iter()
            .map(move |&(v, idx)| (v, self.edges[idx].sign))
    }

    /// Neighbors of `u` with the index of the connecting edge.
    pub fn incident(&self, u: Vertex) -> &[(Vertex, usize)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.adjacency[u].len()
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let row = self.adjacency.get(u)?;
        row.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|pos| row[pos].1)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn sign(&self, u: Vertex, v: Vertex) -> Option<Sign> {
        self.edge_index(u, v).map(|idx| self.edges[idx].sign)
    }

    pub fn negative_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign.is_negative()).count()
    }

    /// Edge list as `(u, v, sign)` triples in canonical order.
    pub fn edge_triples(&self) -> Vec<(Vertex, Vertex, Sign)> {
        self.edges.iter().map(|e| (e.u, e.v, e.sign)).collect()
    }

    /// Same underlying graph, new signs indexed like `edges()`.
    pub fn with_signs(&self, signs: &[Sign]) -> SignedGraph {
        assert_eq!(signs.len(), self.edges.len(), "one sign per edge");
        let mut g = self.clone();
        for (e, &s) in g.edges.iter_mut().zip(signs) {
            e.sign = s;
        }
        g
    }

    /// The underlying unsigned graph, represented as an all-positive graph.
    pub fn underlying(&self) -> SignedGraph {
        self.with_signs(&vec![Sign::Positive; self.m()])
    }

    /// Every edge sign flipped.
    pub fn negated(&self) -> SignedGraph {
        let signs: Vec<Sign> = self.edges.iter().map(|e| -e.sign).collect();
        self.with_signs(&signs)
    }

    pub fn same_underlying(&self, other: &SignedGraph) -> bool {
        self.n == other.n
            && self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .zip(&other.edges)
                .all(|(a, b)| (a.u, a.v) == (b.u, b.v))
    }

    /// Relabels vertex `u` as `perm[u]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<SignedGraph> {
        if perm.len() != self.n {
            return Err(Error::BadParameter(format!(
                "permutation has length {}, graph has order {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParameter("not a permutation".into()));
            }
        }
        SignedGraph::new(
            self.n,
            self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.sign)),
        )
    }

    /// Subgraph induced by `keep`, with vertices renumbered in the given order.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<SignedGraph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &u) in keep.iter().enumerate() {
            if u >= self.n {
                return Err(Error::VertexOutOfRange { vertex: u, n: self.n });
            }
            if index[u] != usize::MAX {
                return Err(Error::BadParameter(format!("vertex {u} listed twice")));
            }
            index[u] = i;
        }
        let edges = self.edges.iter().filter_map(|e| {
            let (a, b) = (index[e.u], index[e.v]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b, e.sign))
        });
        SignedGraph::new(keep.len(), edges)
    }

    /// `g - S`: removes the given vertices; the survivors keep their relative order.
    pub fn remove_vertices(&self, removed: &[Vertex]) -> Result<SignedGraph> {
        let mut gone = vec![false; self.n];
        for &u in removed {
            if u >= self.n {
                return Err(Error::VertexOutOfRange { vertex: u, n: self.n });
            }
            gone[u] = true;
        }
        let keep: Vec<Vertex> = (0..self.n).filter(|&u| !gone[u]).collect();
        self.induced_subgraph(&keep)
    }

    /// Disjoint union, `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SignedGraph) -> SignedGraph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.sign))
            .chain(other.edges.iter().map(|e| (e.u + shift, e.v + shift, e.sign)));
        SignedGraph::new(self.n + other.n, edges).expect("union of valid graphs is valid")
    }

    /// BFS distances from `root`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, root: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS visiting order from `root`, neighbors ascending.
    pub fn bfs_order(&self, root: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(w, _) in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Connected components, each listed in BFS order from its smallest vertex;
    /// components are ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &(w, _) in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs_order(0).len() == self.n
    }

    /// Fails with `Disconnected` / `NoEdges` unless the graph is connected with an edge.
    pub fn require_connected_with_edges(&self) -> Result<()> {
        if self.m() == 0 {
            return Err(Error::NoEdges);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }
}

/// A sequence of vertices in which consecutive entries are adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk(pub Vec<Vertex>);

impl Walk {
    pub fn new(vertices: Vec<Vertex>) -> Walk {
        Walk(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        !self.0.is_empty() && self.0.first() == self.0.last()
    }

    /// `self` followed by `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Walk) -> Option<Walk> {
        match (self.0.last(), other.0.first()) {
            (Some(a), Some(b)) if a == b => {
                let mut v = self.0.clone();
                v.extend_from_slice(&other.0[1..]);
                Some(Walk(v))
            }
            (None, _) => Some(other.clone()),
            (_, None) => Some(self.clone()),
            _ => None,
        }
    }
}

/// Product of the edge signs along `w`, with multiplicity.
pub fn walk_sign(g: &SignedGraph, w: &Walk) -> Result<Sign> {
    for &u in w.vertices() {
        if u >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
        }
    }
    w.vertices()
        .windows(2)
        .try_fold(Sign::Positive, |acc, pair| {
            g.sign(pair[0], pair[1])
                .map(|s| acc * s)
                .ok_or(Error::NotAWalk(pair[0], pair[1]))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Negative as N, Positive as P};

    fn uc3() -> SignedGraph {
        SignedGraph::new(3, [(0, 1, P), (1, 2, P), (0, 2, N)]).unwrap()
    }

    #[test]
    fn build_k2() {
        let g = SignedGraph::new(2, [(0, 1, P)]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
        assert_eq!(g.sign(1, 0), Some(P));
    }

    #[test]
    fn build_uc3() {
        let g = uc3();
        assert_eq!(g.negative_count(), 1);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn build_errors() {
        assert_eq!(SignedGraph::new(2, [(0, 0, P)]), Err(Error::LoopEdge(0)));
        assert_eq!(
            SignedGraph::new(2, [(0, 1, P), (1, 0, N)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            SignedGraph::new(2, [(0, 2, P)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(
            SignedGraph::from_int_signs(2, &[(0, 1, 0)]),
            Err(Error::BadSign(0))
        );
    }

    #[test]
    fn canonical_edge_order_and_adjacency() {
        let g = SignedGraph::new(4, [(3, 1, P), (2, 0, N), (1, 0, P)]).unwrap();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 3)]);
        let nb: Vec<_> = g.neighbors(0).collect();
        assert_eq!(nb, vec![(1, P), (2, N)]);
        let total: usize = (0..g.n()).map(|u| g.degree(u)).sum();
        assert_eq!(total, 2 * g.m());
    }

    #[test]
    fn walk_signs() {
        let g = uc3();
        assert_eq!(walk_sign(&g, &Walk::new(vec![0, 1, 2])).unwrap(), P);
        assert_eq!(walk_sign(&g, &Walk::new(vec![0, 1, 2, 0])).unwrap(), N);
        assert_eq!(walk_sign(&g, &Walk::new(vec![0, 2, 0])).unwrap(), P);
        assert_eq!(
            walk_sign(&SignedGraph::empty(3), &Walk::new(vec![0, 1])),
            Err(Error::NotAWalk(0, 1))
        );
    }

    #[test]
    fn components() {
        assert_eq!(
            SignedGraph::new(2, [(0, 1, P)]).unwrap().connected_components().len(),
            1
        );
        let two = SignedGraph::new(4, [(0, 1, P), (2, 3, N)]).unwrap();
        assert_eq!(two.connected_components(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(SignedGraph::empty(3).connected_components().len(), 3);
    }

    #[test]
    fn remove_and_induce() {
        let g = uc3();
        let h = g.remove_vertices(&[1]).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.sign(0, 1), Some(N));
    }
}

//! Prime s-decomposition of connected signed graphs.
//!
//! The decomposition starts from the prime factorization of the underlying
//! graph and walks the vertices in BFS order from the all-zero vertex. Each
//! untreated edge is compared with its projection onto the layer of its
//! temporary factor through the base vertex: a sign mismatch at a vertex not
//! yet fixed is repaired by switching that vertex, while a mismatch at a fixed
//! vertex merges the temporary factors of all up-edges of that vertex with the
//! factor of the edge. The merged groups are the s-prime factors and the
//! accumulated switches give a signature in which every layer carries its
//! factor's signature.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor_ordinary::{factorize, OrdinaryDecomposition};
use crate::graph::{Sign, SignedGraph, Vertex};
use crate::product::CoordinateSystem;
use crate::switching::{equivalent, SwitchSet};
use crate::union_find::DisjointSet;

/// A prime s-decomposition together with the switching that realizes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SDecomposition {
    /// Coordinates of every input vertex over the signed factors.
    pub coords: CoordinateSystem,
    /// Switching the input by this set yields exactly the product of the factors.
    pub switch_set: SwitchSet,
    /// Final factor index of every input edge, indexed like `edges()`.
    pub factor_of_edge: Vec<usize>,
    /// Ordinary prime factors merged into each signed factor.
    pub ordinary_groups: Vec<Vec<usize>>,
}

impl SDecomposition {
    pub fn factors(&self) -> &[SignedGraph] {
        self.coords.factors()
    }

    pub fn factor_count(&self) -> usize {
        self.coords.factor_count()
    }
}

/// What happened to one edge during the decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum StepAction {
    /// Signs disagreed and `y` was free: `y` was switched and fixed.
    Switched,
    /// Signs agreed and `y` was free: `y` was fixed as is.
    Fixed,
    /// Signs disagreed at a fixed `y`: these temporary colors were merged.
    Merged { colors: Vec<usize> },
    /// Signs agreed and `y` was already fixed.
    Consistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub x: Vertex,
    pub y: Vertex,
    /// Temporary color of `xy` when it was examined.
    pub color: usize,
    /// Projection of `xy` onto the layer through the base vertex.
    pub projection: (Vertex, Vertex),
    pub action: StepAction,
    /// Vertices fully processed before this step.
    pub done: usize,
}

/// Runs the decomposition and records one step per treated edge.
pub fn s_decompose_traced(g: &SignedGraph) -> Result<(SDecomposition, Vec<Step>)> {
    let mut trace = Vec::new();
    let dec = run(g, Some(&mut trace))?;
    Ok((dec, trace))
}

/// Prime s-decomposition of a connected signed graph with at least one edge.
pub fn s_decompose(g: &SignedGraph) -> Result<SDecomposition> {
    run(g, None)
}

fn run(g: &SignedGraph, mut trace: Option<&mut Vec<Step>>) -> Result<SDecomposition> {
    g.require_connected_with_edges()?;
    let ordinary = factorize(g)?;
    let cs = &ordinary.coords;
    let k = cs.factor_count();
    let base: Vertex = cs.vertex_of(&vec![0; k]);

    let order = g.bfs_order(base);
    let dist = g.bfs_distances(base);
    let mut sign: Vec<Sign> = g.edges().iter().map(|e| e.sign).collect();
    let mut switched = SwitchSet::empty(g.n());
    let mut fixed = vec![false; g.n()];
    let mut treated = vec![false; g.m()];
    let mut colors = DisjointSet::new(k);

    for (done, &x) in order.iter().enumerate() {
        fixed[x] = true;
        for &(y, e) in g.incident(x) {
            if treated[e] {
                continue;
            }
            let color = colors.find(ordinary.edge_color[e]);
            let project = |u: Vertex, colors: &mut DisjointSet| {
                let tuple: Vec<usize> = (0..k)
                    .map(|f| if colors.find(f) == color { cs.coords(u)[f] } else { 0 })
                    .collect();
                cs.vertex_of(&tuple)
            };
            let (px, py) = (project(x, &mut colors), project(y, &mut colors));
            let pe = g.edge_index(px, py).ok_or_else(|| {
                Error::InternalInvariantViolation(format!("projection {px}-{py} of {x}-{y} is not an edge"))
            })?;
            let agree = sign[e] == sign[pe];
            let action = match (agree, fixed[y]) {
                (false, false) => {
                    switched.toggle(y);
                    for &(_, f) in g.incident(y) {
                        sign[f] = -sign[f];
                    }
                    fixed[y] = true;
                    StepAction::Switched
                }
                (true, false) => {
                    fixed[y] = true;
                    StepAction::Fixed
                }
                (false, true) => {
                    let mut merged = vec![color];
                    for &(z, f) in g.incident(y) {
                        if dist[z] < dist[y] {
                            merged.push(colors.find(ordinary.edge_color[f]));
                        }
                    }
                    for &c in &merged[1..] {
                        colors.union(color, c);
                    }
                    merged.sort_unstable();
                    merged.dedup();
                    StepAction::Merged { colors: merged }
                }
                (true, true) => StepAction::Consistent,
            };
            treated[e] = true;
            if let Some(t) = trace.as_deref_mut() {
                t.push(Step {
                    x,
                    y,
                    color,
                    projection: (px, py),
                    action,
                    done,
                });
            }
        }
    }

    assemble(g, &ordinary, &mut colors, &sign, switched)
}

/// Reads each merged factor off its layer through the base vertex.
fn assemble(
    g: &SignedGraph,
    ordinary: &OrdinaryDecomposition,
    colors: &mut DisjointSet,
    sign: &[Sign],
    switch_set: SwitchSet,
) -> Result<SDecomposition> {
    let cs = &ordinary.coords;
    let groups = colors.groups();
    let mut group_of = vec![0; cs.factor_count()];
    for (gi, members) in groups.iter().enumerate() {
        for &f in members {
            group_of[f] = gi;
        }
    }
    let local_index = |u: Vertex, members: &[usize]| {
        members
            .iter()
            .fold(0, |acc, &f| acc * cs.factors()[f].n() + cs.coords(u)[f])
    };

    let switched_graph = g.with_signs(sign);
    let mut factors = Vec::with_capacity(groups.len());
    for members in &groups {
        let order: usize = members.iter().map(|&f| cs.factors()[f].n()).product();
        let on_base_layer = |u: Vertex| {
            cs.coords(u)
                .iter()
                .enumerate()
                .all(|(f, &c)| c == 0 || members.contains(&f))
        };
        let edges = switched_graph.edges().iter().filter_map(|e| {
            (on_base_layer(e.u) && on_base_layer(e.v) && members.contains(&cs.differing_coordinate(e.u, e.v)?))
                .then(|| (local_index(e.u, members), local_index(e.v, members), e.sign))
        });
        factors.push(SignedGraph::new(order, edges)?);
    }
    let coords: Vec<Vec<usize>> = (0..g.n())
        .map(|u| groups.iter().map(|members| local_index(u, members)).collect())
        .collect();
    let coords = CoordinateSystem::new(factors, coords)?;
    if !coords.reproduces(&switched_graph) {
        return Err(Error::InternalInvariantViolation(
            "signed factors do not reproduce the switched input".into(),
        ));
    }
    let factor_of_edge = ordinary.edge_color.iter().map(|&c| group_of[c]).collect();
    Ok(SDecomposition {
        coords,
        switch_set,
        factor_of_edge,
        ordinary_groups: groups,
    })
}

/// A grouping of the ordinary prime factors that splits the signed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub a_side: Vec<usize>,
    pub b_side: Vec<usize>,
}

/// Searches the nontrivial groupings of the ordinary prime factors for one
/// that makes the signed graph switching-equivalent to a product: all A-layers
/// pairwise equivalent, and every 4-cycle through two copies of an A-edge
/// balanced. One B-layer always serves as the B factor.
pub fn s_prime_split(g: &SignedGraph) -> Result<Option<Split>> {
    g.require_connected_with_edges()?;
    let d = factorize(g)?;
    let k = d.factor_count();
    if k < 2 {
        return Ok(None);
    }
    // the last factor always sits on the B side: 2^(k-1) - 1 groupings
    for mask in 1u64..(1u64 << (k - 1)) {
        let a_side: Vec<usize> = (0..k).filter(|&f| mask >> f & 1 == 1).collect();
        let b_side: Vec<usize> = (0..k).filter(|&f| mask >> f & 1 == 0).collect();
        if splits(g, &d, &a_side, &b_side) {
            return Ok(Some(Split { a_side, b_side }));
        }
    }
    Ok(None)
}

/// True when no grouping of the ordinary factors splits the graph.
pub fn is_s_prime(g: &SignedGraph) -> Result<bool> {
    Ok(s_prime_split(g)?.is_none())
}

fn splits(g: &SignedGraph, d: &OrdinaryDecomposition, a_side: &[usize], b_side: &[usize]) -> bool {
    let cs = &d.coords;
    let key = |u: Vertex, side: &[usize]| {
        side.iter()
            .fold(0, |acc, &f| acc * cs.factors()[f].n() + cs.coords(u)[f])
    };
    let a_order: usize = a_side.iter().map(|&f| cs.factors()[f].n()).product();
    let b_order: usize = b_side.iter().map(|&f| cs.factors()[f].n()).product();
    let mut in_a = vec![false; cs.factor_count()];
    for &f in a_side {
        in_a[f] = true;
    }

    // A-layers, indexed by their B-coordinates, as graphs on the A-coordinates
    let mut layer_edges: Vec<Vec<(usize, usize, Sign)>> = vec![Vec::new(); b_order];
    for (e, edge) in g.edges().iter().enumerate() {
        if in_a[d.edge_color[e]] {
            layer_edges[key(edge.u, b_side)].push((key(edge.u, a_side), key(edge.v, a_side), edge.sign));
        }
    }
    let layers: Vec<SignedGraph> = match layer_edges
        .into_iter()
        .map(|edges| SignedGraph::new(a_order, edges))
        .collect::<Result<_>>()
    {
        Ok(l) => l,
        Err(_) => return false,
    };

    // adjacent A-layers must be equivalent; B is connected, so this covers all pairs
    let mut checked = std::collections::HashSet::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if in_a[d.edge_color[e]] {
            continue;
        }
        let (b1, b2) = (key(edge.u, b_side), key(edge.v, b_side));
        if checked.insert((b1.min(b2), b1.max(b2))) && !matches!(equivalent(&layers[b1], &layers[b2]), Ok(Some(_))) {
            return false;
        }
    }

    // squares made of two copies of an A-edge and two copies of a B-edge
    for (e, edge) in g.edges().iter().enumerate() {
        if !in_a[d.edge_color[e]] {
            continue;
        }
        let (x, y) = (edge.u, edge.v);
        for &(x2, f) in g.incident(x) {
            if in_a[d.edge_color[f]] {
                continue;
            }
            let mut tuple = cs.coords(y).to_vec();
            for &b in b_side {
                tuple[b] = cs.coords(x2)[b];
            }
            let y2 = cs.vertex_of(&tuple);
            let square = [g.sign(x, y), g.sign(y, y2), g.sign(y2, x2), g.sign(x2, x)];
            let product = square
                .iter()
                .try_fold(Sign::Positive, |acc, s| s.map(|s| acc * s));
            if product != Some(Sign::Positive) {
                return false;
            }
        }
    }
    true
}

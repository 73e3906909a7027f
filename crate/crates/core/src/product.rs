//! Cartesian products of signed graphs and coordinate systems.
//!
//! Product vertices are numbered row-major in factor order: for factors of
//! orders `n_0, .., n_{k-1}`, the tuple `(c_0, .., c_{k-1})` is vertex
//! `((c_0 * n_1 + c_1) * n_2 + ..) + c_{k-1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph, Vertex};

/// A bijection between the vertices of a graph and the tuples of a product of
/// factor vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateSystem {
    factors: Vec<SignedGraph>,
    coords: Vec<Vec<usize>>,
    // row-major tuple index -> vertex
    #[serde(skip)]
    inverse: Vec<Vertex>,
}

/// Vertices and induced edges of a layer, vertices ordered by their
/// coordinate in the varying factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex, Sign)>,
}

impl CoordinateSystem {
    /// Checks that `coords` is a bijection onto the tuple set of `factors`.
    pub fn new(factors: Vec<SignedGraph>, coords: Vec<Vec<usize>>) -> Result<CoordinateSystem> {
        let total: usize = factors.iter().map(SignedGraph::n).product();
        if factors.is_empty() {
            return Err(Error::EmptyList);
        }
        if coords.len() != total {
            return Err(Error::InternalInvariantViolation(format!(
                "{} vertices cannot be coordinatized by a product of order {total}",
                coords.len()
            )));
        }
        let mut inverse = vec![usize::MAX; total];
        let mut cs = CoordinateSystem {
            factors,
            coords: Vec::new(),
            inverse: Vec::new(),
        };
        for (u, tuple) in coords.iter().enumerate() {
            if tuple.len() != cs.factors.len()
                || tuple.iter().zip(&cs.factors).any(|(&c, f)| c >= f.n())
            {
                return Err(Error::InternalInvariantViolation(format!(
                    "vertex {u} has an invalid coordinate tuple {tuple:?}"
                )));
            }
            let idx = cs.index_of(tuple);
            if inverse[idx] != usize::MAX {
                return Err(Error::InternalInvariantViolation(format!(
                    "vertices {} and {u} share coordinates {tuple:?}",
                    inverse[idx]
                )));
            }
            inverse[idx] = u;
        }
        cs.coords = coords;
        cs.inverse = inverse;
        Ok(cs)
    }

    /// Single-factor system mapping each vertex to itself.
    pub fn identity(g: &SignedGraph) -> CoordinateSystem {
        CoordinateSystem {
            factors: vec![g.clone()],
            coords: (0..g.n()).map(|u| vec![u]).collect(),
            inverse: (0..g.n()).collect(),
        }
    }

    pub fn factors(&self) -> &[SignedGraph] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, u: Vertex) -> &[usize] {
        &self.coords[u]
    }

    pub fn all_coords(&self) -> &[Vec<usize>] {
        &self.coords
    }

    /// Row-major index of a tuple.
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, f)| acc * f.n() + c)
    }

    /// The vertex carrying the given coordinates.
    pub fn vertex_of(&self, tuple: &[usize]) -> Vertex {
        self.inverse[self.index_of(tuple)]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.factors.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.factors.len(),
            });
        }
        Ok(())
    }

    fn check_vertex(&self, u: Vertex) -> Result<()> {
        if u >= self.coords.len() {
            return Err(Error::VertexOutOfRange {
                vertex: u,
                n: self.coords.len(),
            });
        }
        Ok(())
    }

    /// Vertices of the factor-`i` layer through `anchor`: those agreeing with
    /// `anchor` everywhere except coordinate `i`.
    pub fn layer_vertices(&self, i: usize, anchor: Vertex) -> Result<Vec<Vertex>> {
        self.check_index(i)?;
        self.check_vertex(anchor)?;
        let mut tuple = self.coords[anchor].clone();
        Ok((0..self.factors[i].n())
            .map(|c| {
                tuple[i] = c;
                self.vertex_of(&tuple)
            })
            .collect())
    }

    /// The factor-`i` layer through `anchor` with the edges `host` induces on it.
    pub fn layer(&self, host: &SignedGraph, i: usize, anchor: Vertex) -> Result<Layer> {
        let vertices = self.layer_vertices(i, anchor)?;
        let mut edges = Vec::new();
        for (a, &u) in vertices.iter().enumerate() {
            for &w in &vertices[a + 1..] {
                if let Some(s) = host.sign(u, w) {
                    edges.push((u, w, s));
                }
            }
        }
        Ok(Layer { vertices, edges })
    }

    /// The vertex matching `anchor` on every coordinate except `i`, where it
    /// matches `u`.
    pub fn project_vertex(&self, u: Vertex, i: usize, anchor: Vertex) -> Result<Vertex> {
        self.check_index(i)?;
        self.check_vertex(u)?;
        self.check_vertex(anchor)?;
        let mut tuple = self.coords[anchor].clone();
        tuple[i] = self.coords[u][i];
        Ok(self.vertex_of(&tuple))
    }

    /// Index of the single coordinate in which `u` and `w` differ, if exactly one does.
    pub fn differing_coordinate(&self, u: Vertex, w: Vertex) -> Option<usize> {
        let mut diff = self.coords[u]
            .iter()
            .zip(&self.coords[w])
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i);
        let first = diff.next()?;
        diff.next().is_none().then_some(first)
    }

    /// Checks that `g` is exactly the product of the factors under this
    /// coordinate system, signs included.
    pub fn reproduces(&self, g: &SignedGraph) -> bool {
        if g.n() != self.coords.len() {
            return false;
        }
        let expected_m: usize = self
            .factors
            .iter()
            .map(|f| f.m() * (self.coords.len() / f.n()))
            .sum();
        if expected_m != g.m() {
            return false;
        }
        g.edges().iter().all(|e| match self.differing_coordinate(e.u, e.v) {
            Some(i) => self.factors[i].sign(self.coords[e.u][i], self.coords[e.v][i]) == Some(e.sign),
            None => false,
        })
    }
}

/// `a □ b`, with product vertex `ia * n_b + ib`.
pub fn cartesian_product(a: &SignedGraph, b: &SignedGraph) -> (SignedGraph, CoordinateSystem) {
    product_many(&[a.clone(), b.clone()]).expect("two factors")
}

/// Product of a nonempty list of factors, coordinates flattened in factor order.
pub fn product_many(gs: &[SignedGraph]) -> Result<(SignedGraph, CoordinateSystem)> {
    if gs.is_empty() {
        return Err(Error::EmptyList);
    }
    let total: usize = gs.iter().map(SignedGraph::n).product();
    // stride of factor i = product of orders of the factors after it
    let mut strides = vec![1usize; gs.len()];
    for i in (0..gs.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * gs[i + 1].n();
    }
    let coords: Vec<Vec<usize>> = (0..total)
        .map(|u| {
            gs.iter()
                .zip(&strides)
                .map(|(f, &s)| (u / s) % f.n())
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for (u, tuple) in coords.iter().enumerate() {
        for (i, f) in gs.iter().enumerate() {
            let a = tuple[i];
            for (b, sign) in f.neighbors(a) {
                if b > a {
                    edges.push((u, u + (b - a) * strides[i], sign));
                }
            }
        }
    }
    let g = SignedGraph::new(total, edges)?;
    let cs = CoordinateSystem {
        factors: gs.to_vec(),
        coords,
        inverse: (0..total).collect(),
    };
    Ok((g, cs))
}

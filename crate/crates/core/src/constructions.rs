//! Named signed graphs and constructive colorings.
//!
//! Grids use row-major ids: the cell in row `i` and column `j` (both from 0)
//! is vertex `i * cols + j`. Products `K_p^+ □ K_q^-` use the same layout
//! with `i` indexing the positive factor.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph, Vertex};
use crate::homomorphism::SignedHomomorphism;
use crate::product::cartesian_product;
use crate::switching::SwitchSet;

use Sign::{Negative as N, Positive as P};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    /// Balanced cycle, all edges positive.
    BC(usize),
    /// Unbalanced cycle, only the closing edge `(n-1, 0)` negative.
    UC(usize),
    KPlus(usize),
    KMinus(usize),
    K4Mixed,
    SPal5,
    SPal5Star,
    K18,
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGraph::BC(n) => write!(f, "BC({n})"),
            NamedGraph::UC(n) => write!(f, "UC({n})"),
            NamedGraph::KPlus(p) => write!(f, "K_plus({p})"),
            NamedGraph::KMinus(p) => write!(f, "K_minus({p})"),
            NamedGraph::K4Mixed => f.write_str("K4_mixed"),
            NamedGraph::SPal5 => f.write_str("SPal5"),
            NamedGraph::SPal5Star => f.write_str("SPal5_star"),
            NamedGraph::K18 => f.write_str("K18"),
        }
    }
}

impl FromStr for NamedGraph {
    type Err = Error;

    /// Accepts `BC(5)`, `bc5`, `K_plus(3)`, `kplus3`, `SPal5_star` and so on,
    /// ignoring case, underscores and parentheses.
    fn from_str(s: &str) -> Result<NamedGraph> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '(' | ')' | ' ' | '-'))
            .collect::<String>()
            .to_ascii_lowercase();
        let fixed = match key.as_str() {
            "k4mixed" => Some(NamedGraph::K4Mixed),
            "spal5" => Some(NamedGraph::SPal5),
            "spal5star" | "spal5*" => Some(NamedGraph::SPal5Star),
            "k18" => Some(NamedGraph::K18),
            _ => None,
        };
        if let Some(g) = fixed {
            return Ok(g);
        }
        let bad = || Error::BadParameter(format!("unknown graph name {s:?}"));
        let split = key.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (prefix, digits) = key.split_at(split);
        let n: usize = digits.parse().map_err(|_| bad())?;
        match prefix {
            "bc" => Ok(NamedGraph::BC(n)),
            "uc" => Ok(NamedGraph::UC(n)),
            "kplus" | "k+" => Ok(NamedGraph::KPlus(n)),
            "kminus" => Ok(NamedGraph::KMinus(n)),
            _ => Err(bad()),
        }
    }
}

fn cycle(n: usize, closing: Sign) -> Result<SignedGraph> {
    if n < 3 {
        return Err(Error::BadParameter(format!("a cycle needs at least 3 vertices, got {n}")));
    }
    SignedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, if i + 1 == n { closing } else { P })))
}

/// Signed complete graph with every edge of the given sign.
pub fn complete(p: usize, sign: Sign) -> Result<SignedGraph> {
    if p == 0 {
        return Err(Error::BadParameter("a complete graph needs at least 1 vertex".into()));
    }
    SignedGraph::new(p, (0..p).flat_map(|i| (i + 1..p).map(move |j| (i, j, sign))))
}

pub fn make(name: &NamedGraph) -> Result<SignedGraph> {
    match *name {
        NamedGraph::BC(n) => cycle(n, P),
        NamedGraph::UC(n) => cycle(n, N),
        NamedGraph::KPlus(p) => complete(p, P),
        NamedGraph::KMinus(p) => complete(p, N),
        NamedGraph::K4Mixed => {
            // a, b, c, d = 0..3 with ab the only negative edge
            SignedGraph::new(4, [(0, 1, N), (0, 2, P), (0, 3, P), (1, 2, P), (1, 3, P), (2, 3, P)])
        }
        NamedGraph::SPal5 => Ok(spal5()),
        NamedGraph::SPal5Star => {
            let base = spal5();
            let mut edges = base.edge_triples();
            edges.extend((0..5).map(|i| (i, 5, P)));
            SignedGraph::new(6, edges)
        }
        NamedGraph::K18 => Ok(k18()),
    }
}

/// Pentagon `i, i+1` positive and pentagram `i, i+2` negative.
fn spal5() -> SignedGraph {
    let edges = (0..5).flat_map(|i| [(i, (i + 1) % 5, P), (i, (i + 2) % 5, N)]);
    SignedGraph::new(5, edges).expect("SPal5 is simple")
}

/// Row `i` lists the signs of the edges `(i, j)` for `j > i`.
const K18_ROWS: [&str; 17] = [
    "++++-++-++++-++--",
    "++++--++--+++--+",
    "+--++++----+-+-",
    "++-++--++--+--",
    "--+++-+-+++++",
    "----+---+++-",
    "++--+---+-+",
    "+++--++-+-",
    "--++--+++",
    "--+++-++",
    "-+--+++",
    "++-+-+",
    "--+-+",
    "--+-",
    "-+-",
    "+-",
    "+",
];

/// FNV-1a of the concatenated rows, guarding the transcription.
pub const K18_CHECKSUM: u64 = 0xfbd8_7c85_4570_fca8;

pub fn k18_checksum() -> u64 {
    K18_ROWS
        .iter()
        .flat_map(|r| r.bytes())
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn k18() -> SignedGraph {
    let edges = K18_ROWS.iter().enumerate().flat_map(|(i, row)| {
        row.chars()
            .enumerate()
            .map(move |(k, c)| (i, i + 1 + k, Sign::from_char(c).expect("row holds + and -")))
    });
    SignedGraph::new(18, edges).expect("K18 rows describe a simple graph")
}

/// Grid with `rows * cols` cells; `sign` receives the two cells of each edge.
pub fn signed_grid(
    rows: usize,
    cols: usize,
    mut sign: impl FnMut((usize, usize), (usize, usize)) -> Sign,
) -> Result<SignedGraph> {
    if rows == 0 || cols == 0 {
        return Err(Error::BadParameter("a grid needs at least one row and one column".into()));
    }
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push((i * cols + j, i * cols + j + 1, sign((i, j), (i, j + 1))));
            }
            if i + 1 < rows {
                edges.push((i * cols + j, (i + 1) * cols + j, sign((i, j), (i + 1, j))));
            }
        }
    }
    SignedGraph::new(rows * cols, edges)
}

/// The 3×4 grid with signed chromatic number 5. Vertical edges and the middle
/// row are positive, the last row is negative, and the first row is `-, +, -`.
pub fn fig1c_grid() -> SignedGraph {
    signed_grid(3, 4, |(i, j), (i2, _)| {
        if i != i2 {
            return P;
        }
        match i {
            0 if j == 1 => P,
            0 => N,
            1 => P,
            _ => N,
        }
    })
    .expect("valid grid")
}

fn check_grid(g: &SignedGraph, rows: usize, cols: usize) -> Result<()> {
    let not_a_grid = Error::NotAGrid { rows, cols };
    let expected = signed_grid(rows, cols, |_, _| P).map_err(|_| not_a_grid.clone())?;
    if g.n() != expected.n() || !g.same_underlying(&expected) {
        return Err(not_a_grid);
    }
    Ok(())
}

/// Exhaustive check that for every walk `x y z` and sign `ε` (except `x = z`
/// with `ε = -1`) at least two vertices `u` close a 4-walk `x y z u` of sign `ε`.
pub fn property_p_check(g: &SignedGraph) -> bool {
    for y in 0..g.n() {
        for (x, xy) in g.neighbors(y) {
            for (z, yz) in g.neighbors(y) {
                for eps in [P, N] {
                    if x == z && eps == N {
                        continue;
                    }
                    let count = g
                        .neighbors(z)
                        .filter(|&(u, zu)| u != x && g.sign(u, x).is_some_and(|ux| xy * yz * zu * ux == eps))
                        .count();
                    if count < 2 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A placement of one grid cell: target vertex and switch bit.
type Placement = (Vertex, bool);

/// Switch bit that makes source edge `sign` between a cell with bit `b` and
/// the new cell land on target sign `t`.
fn bit_for(sign: Sign, b: bool, t: Sign) -> bool {
    (sign * t).is_negative() != b
}

/// Homomorphism of an `rows × cols` signed grid into `SPal5_star`, built
/// cell by cell in row-major order.
///
/// Each cell records a second admissible placement. When a cell's left and
/// upper neighbors land on the same target vertex and close an unbalanced
/// square with it, the left neighbor falls back to its second placement.
pub fn grid_hom_spal5star(g: &SignedGraph, rows: usize, cols: usize) -> Result<SignedHomomorphism> {
    check_grid(g, rows, cols)?;
    let t = make(&NamedGraph::SPal5Star)?;
    let id = |i: usize, j: usize| i * cols + j;
    let mut place: Vec<Placement> = vec![(usize::MAX, false); g.n()];
    let mut alt: Vec<Option<Placement>> = vec![None; g.n()];
    let sign = |a: Vertex, b: Vertex| g.sign(a, b).expect("grid edge");

    // placements next to one mapped neighbor: any target neighbor works
    let from_one = |place: &[Placement], n: Vertex, v: Vertex| -> Vec<Placement> {
        let (tn, bn) = place[n];
        t.neighbors(tn).map(|(u, ts)| (u, bit_for(sign(n, v), bn, ts))).collect()
    };
    let from_two = |place: &[Placement], l: Vertex, up: Vertex, v: Vertex| -> Vec<Placement> {
        let ((tl, bl), (tu, bu)) = (place[l], place[up]);
        t.neighbors(tl)
            .filter_map(|(u, ts)| {
                let b = bit_for(sign(l, v), bl, ts);
                let want = sign(up, v) * Sign::from_flip(b != bu);
                (t.sign(tu, u) == Some(want)).then_some((u, b))
            })
            .collect()
    };

    for i in 0..rows {
        for j in 0..cols {
            let v = id(i, j);
            let cands = match (i, j) {
                (0, 0) => vec![(0, false), (1, false)],
                (0, _) => from_one(&place, id(0, j - 1), v),
                (_, 0) => from_one(&place, id(i - 1, 0), v),
                _ => {
                    let (l, up) = (id(i, j - 1), id(i - 1, j));
                    let mut c = from_two(&place, l, up, v);
                    if c.len() < 2 && place[l].0 == place[up].0 {
                        let other = alt[l].take().ok_or_else(|| {
                            Error::InternalInvariantViolation(format!("cell ({i},{}) has no second placement", j - 1))
                        })?;
                        alt[l] = Some(place[l]);
                        place[l] = other;
                        c = from_two(&place, l, up, v);
                    }
                    c
                }
            };
            if cands.len() < 2 {
                return Err(Error::InternalInvariantViolation(format!(
                    "cell ({i},{j}) has {} placements, expected at least 2",
                    cands.len()
                )));
            }
            place[v] = cands[0];
            alt[v] = Some(cands[1]);
        }
    }
    Ok(SignedHomomorphism {
        map: place.iter().map(|p| p.0).collect(),
        switch_set: SwitchSet::from_flags(place.iter().map(|p| p.1).collect()),
    })
}

/// Homomorphism of a signed grid with at most 4 rows into `SPal5`, built
/// column by column.
///
/// A cell avoids the image of the cell diagonally below-left of it whenever
/// the square below it is unbalanced, since the cell underneath could not be
/// placed otherwise. Within a column the placements are searched in order,
/// which always succeeds on at most 4 rows.
pub fn grid4_hom_spal5(g: &SignedGraph, rows: usize, cols: usize) -> Result<SignedHomomorphism> {
    if rows > 4 {
        return Err(Error::TooManyRows(rows));
    }
    check_grid(g, rows, cols)?;
    let t = spal5();
    let id = |i: usize, j: usize| i * cols + j;
    let sign = |a: Vertex, b: Vertex| g.sign(a, b).expect("grid edge");
    let mut place: Vec<Placement> = vec![(usize::MAX, false); g.n()];

    // first column: a path, mapped along the pentagon
    place[id(0, 0)] = (0, false);
    for i in 1..rows {
        let (up, v) = (id(i - 1, 0), id(i, 0));
        let tu = place[up].0;
        let tv = (tu + 1) % 5;
        place[v] = (tv, bit_for(sign(up, v), place[up].1, t.sign(tu, tv).unwrap()));
    }

    for j in 1..cols {
        if !fill_column(g, &t, rows, cols, j, 0, &mut place) {
            return Err(Error::InternalInvariantViolation(format!("column {j} admits no placement")));
        }
    }
    Ok(SignedHomomorphism {
        map: place.iter().map(|p| p.0).collect(),
        switch_set: SwitchSet::from_flags(place.iter().map(|p| p.1).collect()),
    })
}

fn fill_column(
    g: &SignedGraph,
    t: &SignedGraph,
    rows: usize,
    cols: usize,
    j: usize,
    i: usize,
    place: &mut [Placement],
) -> bool {
    if i == rows {
        return true;
    }
    let id = |i: usize, j: usize| i * cols + j;
    let sign = |a: Vertex, b: Vertex| g.sign(a, b).expect("grid edge");
    let (l, v) = (id(i, j - 1), id(i, j));
    let (tl, bl) = place[l];
    // the square below is unbalanced: the cell below must not see our image twice
    let below_unbalanced = i + 1 < rows && {
        let (d, dl) = (id(i + 1, j), id(i + 1, j - 1));
        sign(v, l) * sign(l, dl) * sign(dl, d) * sign(d, v) == N
    };
    for (u, ts) in t.neighbors(tl) {
        let b = bit_for(sign(l, v), bl, ts);
        if i > 0 {
            let up = id(i - 1, j);
            let (tu, bu) = place[up];
            if t.sign(tu, u) != Some(sign(up, v) * Sign::from_flip(b != bu)) {
                continue;
            }
        }
        if below_unbalanced && u == place[id(i + 1, j - 1)].0 {
            continue;
        }
        place[v] = (u, b);
        if fill_column(g, t, rows, cols, j, i + 1, place) {
            return true;
        }
    }
    place[v] = (usize::MAX, false);
    false
}

/// `K_p^+ □ K_q^-` with vertex `(i, j)` at `i * q + j`.
pub fn kpq_graph(p: usize, q: usize) -> Result<SignedGraph> {
    Ok(cartesian_product(&complete(p, P)?, &complete(q, N)?).0)
}

/// A `⌈pq/2⌉`-coloring of `K_p^+ □ K_q^-` with the switching that makes it
/// sign-consistent.
pub fn kpq_coloring(p: usize, q: usize) -> Result<(Vec<usize>, SwitchSet)> {
    if p < 2 || q < 2 {
        return Err(Error::BadParameter(format!("need p, q >= 2, got ({p}, {q})")));
    }
    let (color, switched) = kpq_flags(p, q);
    Ok((color, SwitchSet::from_flags(switched)))
}

fn kpq_flags(p: usize, q: usize) -> (Vec<usize>, Vec<bool>) {
    let id = |i: usize, j: usize| i * q + j;
    if p < q {
        // negating every sign keeps colorings valid and swaps the two factors
        let (c, s) = kpq_flags(q, p);
        let mut color = vec![0; p * q];
        let mut switched = vec![false; p * q];
        for i in 0..p {
            for j in 0..q {
                color[id(i, j)] = c[j * p + i];
                switched[id(i, j)] = s[j * p + i];
            }
        }
        return (color, switched);
    }
    let mut color = vec![0; p * q];
    let mut switched = vec![false; p * q];
    match (p, q) {
        (2, 2) => {
            for i in 0..2 {
                for j in 0..2 {
                    color[id(i, j)] = (i + j) % 2;
                    switched[id(i, j)] = j == 1;
                }
            }
        }
        (3, 2) => {
            for i in 0..3 {
                color[id(i, 0)] = i;
                color[id(i, 1)] = (i + 1) % 3;
                switched[id(i, 1)] = true;
            }
        }
        (3, 3) => {
            let scheme = [[0, 1, 2], [3, 0, 1], [2, 4, 3]];
            for i in 0..3 {
                for j in 0..3 {
                    color[id(i, j)] = scheme[i][j];
                }
            }
            for v in [id(0, 0), id(0, 1), id(0, 2), id(1, 0)] {
                switched[v] = true;
            }
        }
        _ => {
            // switch row 0, give (0, j) and (1, j+1) a shared new color, recurse on the rest
            for j in 0..q {
                color[id(0, j)] = j;
                color[id(1, (j + 1) % q)] = j;
                switched[id(0, j)] = true;
            }
            let (c, s) = kpq_flags(p - 2, q);
            for i in 2..p {
                for j in 0..q {
                    color[id(i, j)] = q + c[(i - 2) * q + j];
                    switched[id(i, j)] = s[(i - 2) * q + j];
                }
            }
        }
    }
    (color, switched)
}

/// The graph obtained from `K_p^+ □ K_q^-` by switching row 0 and
/// identifying `(0, j)` with `(1, j+1)`, together with the identified set.
///
/// Identified vertex `j` gets id `j`; cell `(i, j)` with `i >= 2` gets
/// `q + (i - 2) * q + j`.
pub fn kpq_identified(p: usize, q: usize) -> Result<(SignedGraph, Vec<Vertex>)> {
    if p < 3 || q < 2 {
        return Err(Error::BadParameter(format!("need p >= 3 and q >= 2, got ({p}, {q})")));
    }
    let g = kpq_graph(p, q)?;
    let id = |i: usize, j: usize| i * q + j;
    let mut merged = vec![0; p * q];
    let mut x = SwitchSet::empty(p * q);
    for j in 0..q {
        merged[id(0, j)] = j;
        merged[id(1, (j + 1) % q)] = j;
        x.set(id(0, j), true);
    }
    for i in 2..p {
        for j in 0..q {
            merged[id(i, j)] = q + (i - 2) * q + j;
        }
    }
    let mut edges: BTreeMap<(Vertex, Vertex), Sign> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (merged[e.u], merged[e.v]);
        let s = e.sign * x.factor(e.u, e.v);
        if a == b {
            return Err(Error::InternalInvariantViolation("identified vertices are adjacent".into()));
        }
        if *edges.entry((a.min(b), a.max(b))).or_insert(s) != s {
            return Err(Error::InternalInvariantViolation(format!("identification gives {a}-{b} both signs")));
        }
    }
    let n = q + (p - 2) * q;
    let g2 = SignedGraph::new(n, edges.into_iter().map(|((a, b), s)| (a, b, s)))?;
    Ok((g2, (0..q).collect()))
}

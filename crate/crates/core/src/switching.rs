//! Switching, balance, switching equivalence and cycle classes.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph, Vertex, Walk};

/// A set of vertices to switch, stored as one flag per vertex of the host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwitchSet {
    members: Vec<bool>,
}

impl SwitchSet {
    pub fn empty(n: usize) -> SwitchSet {
        SwitchSet {
            members: vec![false; n],
        }
    }

    pub fn from_flags(members: Vec<bool>) -> SwitchSet {
        SwitchSet { members }
    }

    pub fn from_vertices(n: usize, vertices: &[Vertex]) -> Result<SwitchSet> {
        let mut members = vec![false; n];
        for &v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            members[v] = true;
        }
        Ok(SwitchSet { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members[v]
    }

    pub fn set(&mut self, v: Vertex, flag: bool) {
        self.members[v] = flag;
    }

    pub fn toggle(&mut self, v: Vertex) {
        self.members[v] = !self.members[v];
    }

    pub fn flags(&self) -> &[bool] {
        &self.members
    }

    /// Switched vertices in ascending order.
    pub fn vertices(&self) -> Vec<Vertex> {
        (0..self.members.len()).filter(|&v| self.members[v]).collect()
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    /// Symmetric difference: switching by the result equals switching by both.
    pub fn compose(&self, other: &SwitchSet) -> SwitchSet {
        SwitchSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Sign factor switching contributes to the edge `uv`.
    pub fn factor(&self, u: Vertex, v: Vertex) -> Sign {
        Sign::from_flip(self.members[u] != self.members[v])
    }
}

impl Serialize for SwitchSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

/// Edge `uv` flips iff exactly one endpoint is in `x`.
pub fn switch(g: &SignedGraph, x: &SwitchSet) -> SignedGraph {
    assert_eq!(x.len(), g.n(), "switch set must cover the host graph");
    let signs: Vec<Sign> = g.edges().iter().map(|e| e.sign * x.factor(e.u, e.v)).collect();
    g.with_signs(&signs)
}

/// Outcome of the balance test, with a witness either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Balance {
    /// Switching by the set makes every edge positive.
    Balanced(SwitchSet),
    /// A closed walk (a cycle) of sign -1.
    Unbalanced(Walk),
}

impl Balance {
    pub fn is_balanced(&self) -> bool {
        matches!(self, Balance::Balanced(_))
    }
}

/// BFS potentials per component. Returns the potential (`true` = switched),
/// the BFS parent of every vertex, and the first non-tree edge that
/// contradicts the potentials, if any.
fn potentials(g: &SignedGraph) -> (Vec<bool>, Vec<Option<Vertex>>, Option<(Vertex, Vertex)>) {
    let n = g.n();
    let mut pot = vec![false; n];
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut conflict = None;
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for (w, s) in g.neighbors(u) {
                let want = pot[u] ^ s.is_negative();
                if !seen[w] {
                    seen[w] = true;
                    pot[w] = want;
                    parent[w] = Some(u);
                    queue.push_back(w);
                } else if pot[w] != want && conflict.is_none() {
                    conflict = Some((u, w));
                }
            }
        }
    }
    (pot, parent, conflict)
}

fn tree_path_to_root(parent: &[Option<Vertex>], mut u: Vertex) -> Vec<Vertex> {
    let mut path = vec![u];
    while let Some(p) = parent[u] {
        path.push(p);
        u = p;
    }
    path
}

/// Decides balance by BFS potential assignment per component.
pub fn is_balanced(g: &SignedGraph) -> Balance {
    let (pot, parent, conflict) = potentials(g);
    match conflict {
        None => Balance::Balanced(SwitchSet::from_flags(pot)),
        Some((u, w)) => {
            // fundamental cycle of the conflicting non-tree edge
            let pu = tree_path_to_root(&parent, u);
            let pw = tree_path_to_root(&parent, w);
            let mut iu = pu.len();
            let mut iw = pw.len();
            while iu > 0 && iw > 0 && pu[iu - 1] == pw[iw - 1] {
                iu -= 1;
                iw -= 1;
            }
            // pu[iu] == pw[iw] is the lowest common ancestor
            let mut cycle: Vec<Vertex> = pu[..=iu].to_vec();
            cycle.extend(pw[..iw].iter().rev());
            cycle.push(u);
            Balance::Unbalanced(Walk::new(cycle))
        }
    }
}

/// Finds `X` with `switch(g1, X) == g2`, or `None` when the signatures are
/// not equivalent. Both graphs must share the same underlying graph.
pub fn equivalent(g1: &SignedGraph, g2: &SignedGraph) -> Result<Option<SwitchSet>> {
    if !g1.same_underlying(g2) {
        return Err(Error::DifferentUnderlyingGraph);
    }
    let n = g1.n();
    // an edge "differs" when the two signatures disagree on it
    let mut flag = vec![false; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, idx) in g1.incident(u) {
                if !seen[w] {
                    seen[w] = true;
                    flag[w] = flag[u] ^ (g1.edge(idx).sign != g2.edge(idx).sign);
                    queue.push_back(w);
                }
            }
        }
    }
    let x = SwitchSet::from_flags(flag);
    let ok = g1
        .edges()
        .iter()
        .zip(g2.edges())
        .all(|(a, b)| a.sign * x.factor(a.u, a.v) == b.sign);
    Ok(ok.then_some(x))
}

/// Canonical representative of the switching class: per component, BFS from
/// the smallest vertex with ascending neighbors, switched so every BFS-tree
/// edge is positive. The returned set realizes the representative.
pub fn canonical_form(g: &SignedGraph) -> (SignedGraph, SwitchSet) {
    let (pot, _, _) = potentials(g);
    let x = SwitchSet::from_flags(pot);
    (switch(g, &x), x)
}

/// The four cycle families, by parity of length and of the negative-edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CycleClass {
    BalancedEven,
    BalancedOdd,
    UnbalancedEven,
    UnbalancedOdd,
}

impl CycleClass {
    pub const ALL: [CycleClass; 4] = [
        CycleClass::BalancedEven,
        CycleClass::BalancedOdd,
        CycleClass::UnbalancedEven,
        CycleClass::UnbalancedOdd,
    ];

    pub fn new(length: usize, negatives: usize) -> CycleClass {
        match (negatives % 2 == 0, length % 2 == 0) {
            (true, true) => CycleClass::BalancedEven,
            (true, false) => CycleClass::BalancedOdd,
            (false, true) => CycleClass::UnbalancedEven,
            (false, false) => CycleClass::UnbalancedOdd,
        }
    }

    pub fn is_balanced(self) -> bool {
        matches!(self, CycleClass::BalancedEven | CycleClass::BalancedOdd)
    }

    pub fn is_even(self) -> bool {
        matches!(self, CycleClass::BalancedEven | CycleClass::UnbalancedEven)
    }

    pub fn name(self) -> &'static str {
        match self {
            CycleClass::BalancedEven => "BC_even",
            CycleClass::BalancedOdd => "BC_odd",
            CycleClass::UnbalancedEven => "UC_even",
            CycleClass::UnbalancedOdd => "UC_odd",
        }
    }
}

/// Classifies a graph that is a single cycle.
pub fn classify_cycle(g: &SignedGraph) -> Result<CycleClass> {
    let is_cycle = g.n() >= 3
        && g.m() == g.n()
        && (0..g.n()).all(|u| g.degree(u) == 2)
        && g.is_connected();
    if !is_cycle {
        return Err(Error::NotACycle);
    }
    Ok(CycleClass::new(g.n(), g.negative_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::walk_sign;
    use proptest::prelude::*;
    use Sign::{Negative as N, Positive as P};

    fn cycle(n: usize, negatives: &[usize]) -> SignedGraph {
        SignedGraph::new(
            n,
            (0..n).map(|i| {
                let s = if negatives.contains(&i) { N } else { P };
                (i, (i + 1) % n, s)
            }),
        )
        .unwrap()
    }

    #[test]
    fn switch_everything_is_identity() {
        let g = cycle(5, &[0, 3]);
        let all = SwitchSet::from_flags(vec![true; 5]);
        assert_eq!(switch(&g, &all), g);
    }

    #[test]
    fn switch_k2_minus() {
        let k2m = SignedGraph::new(2, [(0, 1, N)]).unwrap();
        let k2p = SignedGraph::new(2, [(0, 1, P)]).unwrap();
        assert_eq!(switch(&k2m, &SwitchSet::from_vertices(2, &[0]).unwrap()), k2p);
    }

    #[test]
    fn switch_keeps_cycle_parity() {
        let uc4 = cycle(4, &[2]);
        for v in 0..4 {
            let h = switch(&uc4, &SwitchSet::from_vertices(4, &[v]).unwrap());
            assert_eq!(h.negative_count() % 2, 1);
        }
    }

    #[test]
    fn balance_of_tree_and_cycles() {
        let tree = SignedGraph::new(5, [(0, 1, N), (1, 2, P), (1, 3, N), (3, 4, N)]).unwrap();
        match is_balanced(&tree) {
            Balance::Balanced(x) => assert_eq!(switch(&tree, &x).negative_count(), 0),
            other => panic!("{other:?}"),
        }
        let uc3 = cycle(3, &[1]);
        match is_balanced(&uc3) {
            Balance::Unbalanced(w) => {
                assert!(w.is_closed());
                assert_eq!(walk_sign(&uc3, &w).unwrap(), N);
            }
            other => panic!("{other:?}"),
        }
        assert!(is_balanced(&cycle(4, &[0, 2])).is_balanced());
    }

    #[test]
    fn equivalence_examples() {
        let t1 = SignedGraph::new(4, [(0, 1, N), (1, 2, P), (1, 3, P)]).unwrap();
        let t2 = SignedGraph::new(4, [(0, 1, P), (1, 2, N), (1, 3, N)]).unwrap();
        let x = equivalent(&t1, &t2).unwrap().unwrap();
        assert_eq!(switch(&t1, &x), t2);
        assert_eq!(equivalent(&cycle(4, &[]), &cycle(4, &[1])).unwrap(), None);
        assert_eq!(
            equivalent(&cycle(4, &[]), &cycle(5, &[])),
            Err(Error::DifferentUnderlyingGraph)
        );
    }

    #[test]
    fn canonical_uc4_has_one_negative_edge() {
        let (c, _) = canonical_form(&cycle(4, &[0, 1, 2]));
        assert_eq!(c.negative_count(), 1);
        // BFS from 0 visits 1 and 3 then 2 via 1; the non-tree edge is 2-3
        assert_eq!(c.sign(2, 3), Some(N));
    }

    #[test]
    fn canonical_of_balanced_is_all_positive() {
        let g = cycle(6, &[0, 4]);
        assert_eq!(canonical_form(&g).0.negative_count(), 0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_cycle(&cycle(4, &[0])).unwrap(), CycleClass::UnbalancedEven);
        assert_eq!(classify_cycle(&cycle(3, &[])).unwrap(), CycleClass::BalancedOdd);
        assert_eq!(classify_cycle(&cycle(5, &[1, 3])).unwrap(), CycleClass::BalancedOdd);
        let path = SignedGraph::new(3, [(0, 1, P), (1, 2, P)]).unwrap();
        assert_eq!(classify_cycle(&path), Err(Error::NotACycle));
    }

    fn arb_graph() -> impl Strategy<Value = SignedGraph> {
        (2usize..8).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let k = pairs.len();
            proptest::collection::vec(0u8..3, k).prop_map(move |choice| {
                let edges = pairs.iter().zip(&choice).filter_map(|(&(u, v), &c)| match c {
                    1 => Some((u, v, P)),
                    2 => Some((u, v, N)),
                    _ => None,
                });
                SignedGraph::new(n, edges).unwrap()
            })
        })
    }

    fn arb_graph_and_set() -> impl Strategy<Value = (SignedGraph, SwitchSet)> {
        arb_graph().prop_flat_map(|g| {
            let n = g.n();
            proptest::collection::vec(any::<bool>(), n)
                .prop_map(move |flags| (g.clone(), SwitchSet::from_flags(flags)))
        })
    }

    proptest! {
        #[test]
        fn switching_is_an_involution((g, x) in arb_graph_and_set()) {
            prop_assert_eq!(switch(&switch(&g, &x), &x), g);
        }

        #[test]
        fn equivalent_recovers_a_switch((g, x) in arb_graph_and_set()) {
            let h = switch(&g, &x);
            let found = equivalent(&g, &h).unwrap().expect("constructively equivalent");
            prop_assert_eq!(switch(&g, &found), h);
        }

        #[test]
        fn canonical_depends_only_on_class((g, x) in arb_graph_and_set()) {
            let h = switch(&g, &x);
            prop_assert_eq!(canonical_form(&g).0, canonical_form(&h).0.clone());
            let (c, y) = canonical_form(&g);
            prop_assert_eq!(&switch(&g, &y), &c);
            prop_assert_eq!(canonical_form(&c).0, c.clone());
            prop_assert_eq!(is_balanced(&g).is_balanced(), c.negative_count() == 0);
        }

        #[test]
        fn canonical_equality_iff_equivalent(g in arb_graph(), flags in proptest::collection::vec(any::<bool>(), 28)) {
            let signs: Vec<Sign> = flags.iter().take(g.m()).map(|&f| Sign::from_flip(f)).collect();
            let h = g.with_signs(&signs);
            let same = canonical_form(&g).0 == canonical_form(&h).0;
            prop_assert_eq!(same, equivalent(&g, &h).unwrap().is_some());
        }

        #[test]
        fn cycle_class_is_switching_invariant(n in 3usize..9, negs in proptest::collection::vec(any::<bool>(), 9), flags in proptest::collection::vec(any::<bool>(), 9)) {
            let neg: Vec<usize> = (0..n).filter(|&i| negs[i]).collect();
            let c = cycle(n, &neg);
            let x = SwitchSet::from_flags(flags[..n].to_vec());
            prop_assert_eq!(classify_cycle(&c).unwrap(), classify_cycle(&switch(&c, &x)).unwrap());
        }
    }
}

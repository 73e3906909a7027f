//! Property checks shared by the proptest suites and the acceptance target.
//! Each returns `Ok(true)` when the property was exercised and held,
//! `Ok(false)` when the sample did not apply, and `Err` on a violation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sgw::{
    canonical_form, cartesian_product, chromatic_number, equivalent, is_s_prime, is_s_redundant, make,
    product_many, s_decompose, switch, validate, NamedGraph, SignedGraph, SignedHomomorphism, SwitchSet,
};

use super::{random_connected, random_relabel, random_switch, random_tree, same_multiset};

pub type Outcome = Result<bool, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(true)
    } else {
        Err(what())
    }
}

fn chi(g: &SignedGraph) -> Result<usize, String> {
    if g.n() == 0 {
        return Ok(0);
    }
    chromatic_number(g, None, None).map(|c| c.k).map_err(|e| format!("{e} on {g:?}"))
}

/// `g` with each edge sign flipped with probability `p`.
pub fn perturb(rng: &mut impl Rng, g: &SignedGraph, p: f64) -> SignedGraph {
    let signs: Vec<_> = g.edges().iter().map(|e| if rng.gen_bool(p) { -e.sign } else { e.sign }).collect();
    g.with_signs(&signs)
}

pub fn switching_involution(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.gen_range(1..=9);
    let g = random_connected(rng, n, 0.4);
    let (h, x) = random_switch(rng, &g);
    check(switch(&h, &x) == g, || format!("{g:?} at {x:?}"))
}

pub fn equivalence_is_canonical_equality(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.gen_range(2..=8);
    let g = random_connected(rng, n, 0.4);
    let (switched, _) = random_switch(rng, &g);
    let h = if rng.gen_bool(0.5) { switched } else { perturb(rng, &switched, 0.3) };
    let x = equivalent(&g, &h).map_err(|e| e.to_string())?;
    let same = canonical_form(&g).0 == canonical_form(&h).0;
    check(x.is_some() == same, || format!("{g:?} vs {h:?}"))?;
    check(x.is_none_or(|x| switch(&g, &x) == h), || format!("witness fails for {g:?} vs {h:?}"))
}

fn product_hom(a: &SignedGraph, b: &SignedGraph, pa: &SignedHomomorphism, pb: &SignedHomomorphism, nb: usize) -> SignedHomomorphism {
    let mut map = Vec::new();
    let mut flags = Vec::new();
    for x in 0..a.n() {
        for y in 0..b.n() {
            map.push(pa.map[x] * nb + pb.map[y]);
            // the b-coordinate cancels along a-edges and vice versa
            flags.push(pa.switch_set.contains(x) ^ pb.switch_set.contains(y));
        }
    }
    SignedHomomorphism {
        map,
        switch_set: SwitchSet::from_flags(flags),
    }
}

pub fn homomorphisms_multiply(rng: &mut ChaCha8Rng) -> Outcome {
    let (na, nb) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
    let a = random_connected(rng, na, 0.5);
    let b = random_connected(rng, nb, 0.5);
    let ca = chromatic_number(&a, None, None).map_err(|e| e.to_string())?;
    let cb = chromatic_number(&b, None, None).map_err(|e| e.to_string())?;
    let (g, _) = cartesian_product(&a, &b);
    let (h, _) = cartesian_product(&ca.target, &cb.target);
    let phi = product_hom(&a, &b, &ca.hom, &cb.hom, cb.target.n());
    check(validate(&g, &h, &phi), || format!("{a:?} x {b:?}"))
}

pub fn product_upper_bound(rng: &mut ChaCha8Rng) -> Outcome {
    let na = rng.gen_range(2..=4);
    let nb = if na == 4 { 2 } else { rng.gen_range(2..=3) };
    let a = random_connected(rng, na, 0.6);
    let b = random_connected(rng, nb, 0.6);
    let (g, _) = cartesian_product(&a, &b);
    let (pa, pb, pg) = (chi(&a)?, chi(&b)?, chi(&g)?);
    check(pg <= pa * pb, || format!("{pg} > {pa} * {pb} for {a:?} x {b:?}"))
}

pub fn forest_collapse(rng: &mut ChaCha8Rng) -> Outcome {
    let (ng, nf) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
    let g = random_connected(rng, ng, 0.5);
    let f = random_tree(rng, nf);
    let k2 = make(&NamedGraph::KPlus(2)).map_err(|e| e.to_string())?;
    let (with_tree, with_edge) = (chi(&cartesian_product(&g, &f).0)?, chi(&cartesian_product(&g, &k2).0)?);
    check(with_tree == with_edge, || format!("{with_tree} != {with_edge} for {g:?} x {f:?}"))
}

pub fn redundant_set_bound(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.gen_range(3..=7);
    let density = rng.gen_range(0.3..0.9);
    let g = random_connected(rng, n, density);
    // resample until the set is redundant
    for _ in 0..64 {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        if s.is_empty() || s.len() == n || !is_s_redundant(&g, &s).map_err(|e| e.to_string())? {
            continue;
        }
        let rest = g.remove_vertices(&s).map_err(|e| e.to_string())?;
        let (whole, part) = (chi(&g)?, chi(&rest)?);
        return check(whole <= s.len() + part, || format!("{whole} > {} + {part} for {g:?} minus {s:?}", s.len()));
    }
    Ok(false)
}

pub fn cancellation(rng: &mut ChaCha8Rng) -> Outcome {
    let (na, nb) = (rng.gen_range(2..=4), rng.gen_range(3..=5));
    let a = random_connected(rng, na, 0.5);
    let b = random_connected(rng, nb, 0.5);
    let (c, _) = random_switch(rng, &b);
    let c = if rng.gen_bool(0.5) { c } else { perturb(rng, &c, 0.3) };
    let (ab, _) = cartesian_product(&a, &b);
    let (ac, _) = cartesian_product(&a, &c);
    let err = |e: sgw::Error| e.to_string();
    let products = equivalent(&ab, &ac).map_err(err)?.is_some();
    let factors = equivalent(&b, &c).map_err(err)?.is_some();
    check(products == factors, || format!("products {products}, factors {factors}: {a:?} {b:?} {c:?}"))?;
    if products {
        let (dab, dac) = (s_decompose(&ab).map_err(err)?, s_decompose(&ac).map_err(err)?);
        let (da, db) = (s_decompose(&a).map_err(err)?, s_decompose(&b).map_err(err)?);
        let mut expected = da.factors().to_vec();
        expected.extend_from_slice(db.factors());
        check(same_multiset(dab.factors(), dac.factors()), || format!("factor multisets differ: {b:?} {c:?}"))?;
        check(same_multiset(&expected, dab.factors()), || format!("factors of {a:?} x {b:?} not the union"))?;
    }
    Ok(true)
}

/// A random connected s-prime graph on 2 to 5 vertices.
pub fn random_s_prime(rng: &mut ChaCha8Rng) -> SignedGraph {
    loop {
        let n = rng.gen_range(2..=5);
        let density = rng.gen_range(0.0..0.8);
        let g = random_connected(rng, n, density);
        if is_s_prime(&g).unwrap() {
            return g;
        }
    }
}

/// Products of 2 or 3 random s-prime factors, each switched at random, with
/// the product vertices shuffled: the decomposition must return the factor
/// multiset, s-prime factors, and an exact reconstruction.
pub fn decomposition_round_trip(rng: &mut ChaCha8Rng) -> Outcome {
    let k = rng.gen_range(2..=3);
    let factors: Vec<SignedGraph> = (0..k).map(|_| random_s_prime(rng)).collect();
    let switched: Vec<SignedGraph> = factors.iter().map(|f| random_switch(rng, f).0).collect();
    let (g, _) = product_many(&switched).map_err(|e| e.to_string())?;
    let g = random_relabel(rng, &g);
    let d = s_decompose(&g).map_err(|e| format!("{e} on {g:?}"))?;
    check(same_multiset(&factors, d.factors()), || format!("{factors:?} came back as {:?}", d.factors()))?;
    for f in d.factors() {
        check(is_s_prime(f).unwrap_or(false), || format!("factor {f:?} is not s-prime"))?;
    }
    let (prod, _) = product_many(d.factors()).map_err(|e| e.to_string())?;
    let index: Vec<usize> = (0..g.n()).map(|u| d.coords.index_of(d.coords.coords(u))).collect();
    let rebuilt = switch(&g, &d.switch_set).relabel(&index).map_err(|e| e.to_string())?;
    check(rebuilt == prod, || format!("reconstruction differs for {g:?}"))
}

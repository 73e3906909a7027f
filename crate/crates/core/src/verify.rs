//! Reproduction reports: each entry states an expected value, the computed
//! value, and whether the certificate behind it survived a recheck.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{
    fig1c_grid, grid4_hom_spal5, grid_hom_spal5star, k18_checksum, kpq_coloring, kpq_graph, make, signed_grid,
    NamedGraph, K18_CHECKSUM,
};
use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};
use crate::homomorphism::{
    certificate_is_consistent, chromatic_number, enumerate_targets, greedy_coloring, induced_target,
    signed_isomorphic, validate, ChromaticCertificate,
};
use crate::product::cartesian_product;
use crate::switching::CycleClass;

/// Seed used by randomized suites when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Longest cycle the cycle table will multiply.
pub const CYCLE_TABLE_MAX_LEN: usize = 6;
/// Largest `p * q` for which `verify_kpq` runs the exact lower bound.
pub const KPQ_MAX_ORDER: usize = 12;
/// Largest product order `verify_uc_bc_gap` will search.
pub const GAP_MAX_ORDER: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Exactly(u64),
    AtLeast(u64),
}

impl Expectation {
    pub fn accepts(self, computed: u64) -> bool {
        match self {
            Expectation::Exactly(v) => computed == v,
            Expectation::AtLeast(v) => computed >= v,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Exactly(v) => write!(f, "{v}"),
            Expectation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub claim: String,
    pub parameters: String,
    pub expected: Expectation,
    pub computed: u64,
    /// The certificate behind `computed` was rechecked.
    pub certified: bool,
    pub pass: bool,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ChromaticCertificate>,
}

impl ReportEntry {
    fn new(claim: &str, parameters: String, expected: Expectation, computed: u64, certified: bool, start: Instant) -> Self {
        ReportEntry {
            claim: claim.to_string(),
            parameters,
            expected,
            computed,
            certified,
            pass: certified && expected.accepts(computed),
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            detail: None,
            certificate: None,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub entries: Vec<ReportEntry>,
    pub summary: Summary,
}

impl Report {
    fn new(suite: &str, entries: Vec<ReportEntry>) -> Report {
        let passed = entries.iter().filter(|e| e.pass).count();
        Report {
            suite: suite.to_string(),
            summary: Summary {
                total: entries.len(),
                passed,
                failed: entries.len() - passed,
            },
            entries,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Concatenates reports under one suite name.
    pub fn merge(suite: &str, reports: Vec<Report>) -> Report {
        Report::new(suite, reports.into_iter().flat_map(|r| r.entries).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for e in &self.entries {
            out.push_str(&format!(
                "{} {:<22} {:<28} expected {:<6} computed {:<4} ({:.1} ms)",
                if e.pass { "PASS" } else { "FAIL" },
                e.claim,
                e.parameters,
                e.expected.to_string(),
                e.computed,
                e.elapsed_ms
            ));
            if let Some(d) = &e.detail {
                out.push_str(&format!("  {d}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} total\n",
            self.summary.passed, self.summary.failed, self.summary.total
        ));
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The chromatic number of a product of two cycles from the given classes.
pub fn cycle_table_value(a: CycleClass, b: CycleClass) -> u64 {
    use CycleClass::*;
    let idx = |c: CycleClass| match c {
        BalancedEven => 0,
        BalancedOdd => 1,
        UnbalancedEven => 2,
        UnbalancedOdd => 3,
    };
    const TABLE: [[u64; 4]; 4] = [[2, 3, 4, 3], [3, 3, 5, 5], [4, 5, 4, 5], [3, 5, 5, 3]];
    TABLE[idx(a)][idx(b)]
}

/// A cycle of the given length in the given class: balanced cycles are all
/// positive, unbalanced ones have one negative edge.
pub fn class_cycle(class: CycleClass, len: usize) -> Result<SignedGraph> {
    if class.is_even() != (len % 2 == 0) {
        return Err(Error::BadParameter(format!("length {len} does not fit class {}", class.name())));
    }
    make(&if class.is_balanced() { NamedGraph::BC(len) } else { NamedGraph::UC(len) })
}

fn label(class: CycleClass, len: usize) -> String {
    format!("{}{len}", if class.is_balanced() { "BC" } else { "UC" })
}

/// Exact χ_s with its certificate rechecked.
fn chromatic_entry(claim: &str, parameters: String, g: &SignedGraph, expected: Expectation) -> ReportEntry {
    let start = Instant::now();
    match chromatic_number(g, None, None) {
        Ok(cert) => {
            let certified = certificate_is_consistent(g, &cert);
            let mut e = ReportEntry::new(claim, parameters, expected, cert.k as u64, certified, start);
            e.certificate = Some(cert);
            e
        }
        Err(err) => ReportEntry::new(claim, parameters, expected, 0, false, start).with_detail(err.to_string()),
    }
}

/// Every ordered pair of cycle classes, each realized by every length up to
/// `max_len` of the right parity (at least 3; 4 for even classes).
pub fn verify_cycle_table(max_len: usize) -> Result<Report> {
    if max_len > CYCLE_TABLE_MAX_LEN {
        return Err(Error::GuardExceeded(format!(
            "cycle length {max_len} exceeds {CYCLE_TABLE_MAX_LEN}"
        )));
    }
    if max_len < 3 {
        return Err(Error::BadParameter("cycle length must be at least 3".into()));
    }
    let lengths = |c: CycleClass| -> Vec<usize> {
        (3..=max_len).filter(|&n| (n % 2 == 0) == c.is_even()).collect()
    };
    let mut jobs = Vec::new();
    for a in CycleClass::ALL {
        for b in CycleClass::ALL {
            for &la in &lengths(a) {
                for &lb in &lengths(b) {
                    jobs.push((a, la, b, lb));
                }
            }
        }
    }
    let entries = jobs
        .par_iter()
        .map(|&(a, la, b, lb)| {
            let (g, _) = cartesian_product(&class_cycle(a, la)?, &class_cycle(b, lb)?);
            let params = format!("{} x {}", label(a, la), label(b, lb));
            Ok(chromatic_entry(
                "cycle_table",
                params,
                &g,
                Expectation::Exactly(cycle_table_value(a, b)),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("cycle_table", entries))
}

/// `χ_s(K_p^+ □ K_q^-) = ⌈pq/2⌉` for `2 ≤ p ≤ max_p`, `2 ≤ q ≤ max_q`: the
/// constructive coloring gives the upper bound, exact search the lower bound.
pub fn verify_kpq(max_p: usize, max_q: usize) -> Result<Report> {
    if max_p * max_q > KPQ_MAX_ORDER {
        return Err(Error::GuardExceeded(format!(
            "K_p x K_q with p*q = {} exceeds {KPQ_MAX_ORDER}",
            max_p * max_q
        )));
    }
    let pairs: Vec<(usize, usize)> = (2..=max_p).flat_map(|p| (2..=max_q).map(move |q| (p, q))).collect();
    let entries = pairs
        .par_iter()
        .map(|&(p, q)| {
            let g = kpq_graph(p, q)?;
            let want = (p * q).div_ceil(2) as u64;
            let start = Instant::now();
            let (color, x) = kpq_coloring(p, q)?;
            let constructive = induced_target(&g, &color, &x)
                .ok()
                .filter(|(t, phi)| validate(&g, t, phi))
                .map(|(t, _)| t.n() as u64);
            let params = format!("p={p} q={q}");
            let upper = ReportEntry::new(
                "kpq_upper",
                params.clone(),
                Expectation::Exactly(want),
                constructive.unwrap_or(0),
                constructive.is_some(),
                start,
            );
            let exact = chromatic_entry("kpq_exact", params, &g, Expectation::Exactly(want));
            Ok([upper, exact])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("kpq", entries.into_iter().flatten().collect()))
}

/// `χ_s(UC_q □ BC_{2p+1}) > 4` for `3 ≤ q ≤ max_q` and odd `3 ≤ 2p+1 ≤ max_odd`.
pub fn verify_uc_bc_gap(max_q: usize, max_odd: usize) -> Result<Report> {
    let mut jobs = Vec::new();
    for q in 3..=max_q {
        for len in (3..=max_odd).step_by(2) {
            if q * len > GAP_MAX_ORDER {
                return Err(Error::GuardExceeded(format!(
                    "UC{q} x BC{len} has {} vertices, more than {GAP_MAX_ORDER}",
                    q * len
                )));
            }
            jobs.push((q, len));
        }
    }
    let entries = jobs
        .par_iter()
        .map(|&(q, len)| {
            let (g, _) = cartesian_product(&make(&NamedGraph::UC(q))?, &make(&NamedGraph::BC(len))?);
            Ok(chromatic_entry("uc_bc_gap", format!("UC{q} x BC{len}"), &g, Expectation::AtLeast(5)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("uc_bc_gap", entries))
}

/// The 3×4 grid with χ_s = 5, plus its homomorphisms into `SPal5_star` and `SPal5`.
pub fn verify_grid_fig1c() -> Result<Report> {
    let g = fig1c_grid();
    let mut entries = vec![chromatic_entry("grid_fig1c", "3x4".into(), &g, Expectation::Exactly(5))];
    let positive = signed_grid(3, 4, |_, _| Sign::Positive)?;
    entries.push(chromatic_entry("grid_positive", "3x4".into(), &positive, Expectation::Exactly(2)));

    let start = Instant::now();
    let star = make(&NamedGraph::SPal5Star)?;
    let ok = grid_hom_spal5star(&g, 3, 4).is_ok_and(|phi| validate(&g, &star, &phi));
    entries.push(ReportEntry::new("grid_fig1c_spal5star", "3x4".into(), Expectation::Exactly(1), ok as u64, true, start));

    let start = Instant::now();
    let pal = make(&NamedGraph::SPal5)?;
    let ok = grid4_hom_spal5(&g, 3, 4).is_ok_and(|phi| validate(&g, &pal, &phi));
    entries.push(ReportEntry::new("grid_fig1c_spal5", "3x4".into(), Expectation::Exactly(1), ok as u64, true, start));
    Ok(Report::new("grid_fig1c", entries))
}

/// A random signed grid with uniformly random edge signs.
pub fn random_grid(rng: &mut impl Rng, rows: usize, cols: usize) -> Result<SignedGraph> {
    signed_grid(rows, cols, |_, _| if rng.gen_bool(0.5) { Sign::Negative } else { Sign::Positive })
}

/// `count` random grids up to 8×8 into `SPal5_star` and `count` random grids
/// with at most 4 rows into `SPal5`; every homomorphism must validate.
pub fn verify_random_grids(seed: u64, count: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let star = make(&NamedGraph::SPal5Star)?;
    let pal = make(&NamedGraph::SPal5)?;
    let mut entries = Vec::new();
    for (claim, max_rows, target) in [("random_grid_spal5star", 8, &star), ("random_grid_spal5", 4, &pal)] {
        let start = Instant::now();
        let mut valid = 0u64;
        let mut failures = Vec::new();
        for k in 0..count {
            let (rows, cols) = (rng.gen_range(1..=max_rows), rng.gen_range(1..=8));
            let g = random_grid(&mut rng, rows, cols)?;
            let phi = if max_rows == 8 {
                grid_hom_spal5star(&g, rows, cols)
            } else {
                grid4_hom_spal5(&g, rows, cols)
            };
            match phi {
                Ok(phi) if validate(&g, target, &phi) => valid += 1,
                Ok(_) => failures.push(format!("#{k} {rows}x{cols}: invalid")),
                Err(e) => failures.push(format!("#{k} {rows}x{cols}: {e}")),
            }
        }
        let mut e = ReportEntry::new(
            claim,
            format!("seed={seed} count={count}"),
            Expectation::Exactly(count as u64),
            valid,
            true,
            start,
        );
        if !failures.is_empty() {
            e = e.with_detail(failures.join("; "));
        }
        entries.push(e);
    }
    Ok(Report::new("random_grids", entries))
}

/// All 64 signatures of K4 fall into exactly 3 classes under switching and
/// isomorphism.
pub fn verify_k4_classes() -> Result<Report> {
    let start = Instant::now();
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let signature = |mask: u32| {
        SignedGraph::new(
            4,
            pairs.iter().enumerate().map(|(b, &(i, j))| (i, j, Sign::from_flip(mask >> b & 1 == 1))),
        )
    };
    let mut reps: Vec<SignedGraph> = Vec::new();
    let mut class_of = vec![0usize; 64];
    for mask in 0..64u32 {
        let g = signature(mask)?;
        let mut found = None;
        for (c, r) in reps.iter().enumerate() {
            if signed_isomorphic(&g, r)? {
                found = Some(c);
                break;
            }
        }
        class_of[mask as usize] = found.unwrap_or_else(|| {
            reps.push(g);
            reps.len() - 1
        });
    }
    let mut entries = vec![ReportEntry::new(
        "k4_classes",
        "64 signatures".into(),
        Expectation::Exactly(3),
        reps.len() as u64,
        true,
        start,
    )];

    let start = Instant::now();
    let named: Vec<SignedGraph> = [NamedGraph::KPlus(4), NamedGraph::KMinus(4), NamedGraph::K4Mixed]
        .iter()
        .map(make)
        .collect::<Result<_>>()?;
    let mut classes = Vec::new();
    for g in &named {
        for (c, r) in reps.iter().enumerate() {
            if signed_isomorphic(g, r)? {
                classes.push(c);
            }
        }
    }
    classes.sort_unstable();
    classes.dedup();
    entries.push(ReportEntry::new(
        "k4_representatives",
        "K4+, K4-, K4_mixed".into(),
        Expectation::Exactly(3),
        classes.len() as u64,
        true,
        start,
    ));

    // bit order of `pairs`: 01, 02, 03, 12, 13, 23
    let start = Instant::now();
    let same = class_of[0b000001] == class_of[0b000011];
    entries.push(ReportEntry::new(
        "k4_one_vs_two_adjacent",
        "{ab} vs {ab, ac}".into(),
        Expectation::Exactly(1),
        same as u64,
        true,
        start,
    ));

    let start = Instant::now();
    entries.push(ReportEntry::new(
        "k4_target_enumeration",
        "order 4".into(),
        Expectation::Exactly(3),
        enumerate_targets(4)?.len() as u64,
        true,
        start,
    ));
    Ok(Report::new("k4_classes", entries))
}

/// The order-18 complete signed graph: its transcription, and a certified
/// upper bound for `K18 □ K2`. The exact value is far beyond the solver's
/// target cap, so this suite only runs when explicitly unbounded.
pub fn verify_k18(unbounded: bool) -> Result<Report> {
    if !unbounded {
        return Err(Error::GuardExceeded(
            "the K18 suite is beyond desk scale; pass --unbounded to run it".into(),
        ));
    }
    let start = Instant::now();
    let k = make(&NamedGraph::K18)?;
    let ok = k18_checksum() == K18_CHECKSUM && k.m() == 153;
    let mut entries = vec![ReportEntry::new("k18_transcription", "checksum".into(), Expectation::Exactly(1), ok as u64, true, start)];

    let start = Instant::now();
    let (g, _) = cartesian_product(&k, &make(&NamedGraph::KPlus(2))?);
    let (upper, certified) = match greedy_coloring(&g) {
        Some((t, phi)) => (t.n() as u64, validate(&g, &t, &phi)),
        None => (g.n() as u64, true),
    };
    entries.push(
        ReportEntry::new("k18_k2_upper_bound", "greedy".into(), Expectation::AtLeast(25), upper, certified, start)
            .with_detail("upper bound only; the exact value is not searched"),
    );
    Ok(Report::new("k18", entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_symmetric() {
        for a in CycleClass::ALL {
            for b in CycleClass::ALL {
                assert_eq!(cycle_table_value(a, b), cycle_table_value(b, a));
            }
        }
    }

    #[test]
    fn small_cycle_table() {
        let r = verify_cycle_table(4).unwrap();
        // lengths 3 and 4 give one representative per class
        assert_eq!(r.summary.total, 16);
        assert!(r.all_passed(), "{r}");
        assert!(matches!(verify_cycle_table(7), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn guards() {
        assert!(matches!(verify_kpq(5, 3), Err(Error::GuardExceeded(_))));
        assert!(matches!(verify_uc_bc_gap(7, 5), Err(Error::GuardExceeded(_))));
        assert!(matches!(verify_k18(false), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn k4_and_grids() {
        let r = verify_k4_classes().unwrap();
        assert!(r.all_passed(), "{r}");
        let r = verify_grid_fig1c().unwrap();
        assert!(r.all_passed(), "{r}");
        let r = verify_random_grids(DEFAULT_SEED, 10).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn report_formats() {
        let r = verify_kpq(2, 2).unwrap();
        assert!(r.all_passed());
        assert!(r.to_text().contains("PASS kpq_exact"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["summary"]["total"], 2);
        assert_eq!(json["entries"][0]["expected"]["exactly"], 2);
    }
}

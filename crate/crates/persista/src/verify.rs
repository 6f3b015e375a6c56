//! Seeded verification suites: randomized end-to-end checks of barcode
//! dualities, the rank-invariant oracle, long-exact-sequence exactness,
//! excision, and subdivision invariance.
//!
//! Every suite is driven by a fixed, documented generator so that a failing
//! case reproduces from its seed alone:
//!
//! 1. Draw a vertex-pool size `v` in `1..=max_vertices`.
//! 2. Make `3 * max_cells` attempts: draw a dimension `k` in `0..=max_dim`
//!    (clamped to the pool), sample `k + 1` distinct vertices, and insert
//!    the simplex with all of its faces unless that would push the complex
//!    past `max_cells`.
//! 3. For filtrations, births live on a small integer grid: vertices get
//!    `0..=2` and every other simplex gets its maximal face birth plus
//!    `0..=1`, which makes ties and zero-length features common on purpose.
//!
//! Each suite salts the seed with its own fixed offset, so `--suite all`
//! and a single-suite run with the same seed generate identical cases.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::PrimeField;
use crate::core::{filtration_from_complex, Filtration, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{barycentric_subdivide, betti_numbers, excision_check, les_exactness_check};
use crate::persistence::{
    barcode_absolute_homology, barcode_relative, rank_invariant_oracle_with_cap, reduce,
    standard_barcodes, Flavor, OracleVariant, DEFAULT_ORACLE_CAP,
};

/// The five randomized suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    /// All four standard barcodes with both dualities asserted.
    Duality,
    /// Reduction-derived barcodes against the rank-invariant oracle.
    Oracle,
    /// Long-exact-sequence exactness on random pairs.
    Les,
    /// Excision on random simplicial covers.
    Excision,
    /// Betti invariance under barycentric subdivision.
    Subdivision,
}

/// Suite execution order for `all`.
pub const ALL_SUITES: [SuiteKind; 5] = [
    SuiteKind::Duality,
    SuiteKind::Oracle,
    SuiteKind::Les,
    SuiteKind::Excision,
    SuiteKind::Subdivision,
];

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Duality => "duality",
            SuiteKind::Oracle => "oracle",
            SuiteKind::Les => "les",
            SuiteKind::Excision => "excision",
            SuiteKind::Subdivision => "subdivision",
        }
    }

    /// Default case counts, mirroring the release acceptance settings.
    pub fn default_count(self) -> usize {
        match self {
            SuiteKind::Duality => 200,
            SuiteKind::Oracle => 500,
            SuiteKind::Les | SuiteKind::Excision | SuiteKind::Subdivision => 50,
        }
    }

    /// Per-suite seed salt, keeping single-suite runs aligned with `all`.
    fn salt(self) -> u64 {
        match self {
            SuiteKind::Duality => 0x0001,
            SuiteKind::Oracle => 0x0002,
            SuiteKind::Les => 0x0003,
            SuiteKind::Excision => 0x0004,
            SuiteKind::Subdivision => 0x0005,
        }
    }
}

/// Parses a `--suite` argument: a suite name or `all`.
pub fn parse_suites(name: &str) -> Result<Vec<SuiteKind>> {
    if name == "all" {
        return Ok(ALL_SUITES.to_vec());
    }
    ALL_SUITES
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .map(|s| vec![s])
        .ok_or_else(|| {
            Error::ValidationError(format!(
                "unknown suite {name:?}; expected duality, oracle, les, excision, subdivision, or all"
            ))
        })
}

/// The result of one suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    /// One line per failing case, in case order.
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

/// Random face-closed complex; see the module docs for the fixed algorithm.
pub fn random_complex(
    rng: &mut ChaCha8Rng,
    max_vertices: u32,
    max_dim: usize,
    max_cells: usize,
) -> SimplicialComplex {
    let pool = rng.gen_range(1..=max_vertices) as usize;
    let mut c = SimplicialComplex::empty();
    for _ in 0..3 * max_cells {
        let k = rng.gen_range(0..=max_dim).min(pool - 1);
        let mut vertices: Vec<u32> = rand::seq::index::sample(rng, pool, k + 1)
            .iter()
            .map(|v| v as u32)
            .collect();
        vertices.sort_unstable();
        let s = Simplex::new(vertices);
        let closure = SimplicialComplex::from_maximal([s.clone()]);
        let new = closure.simplices().filter(|t| !c.contains(t)).count();
        if c.len() + new <= max_cells {
            c.insert_with_faces(s);
        }
    }
    c
}

/// Random filtration: a random complex with monotone births on a small
/// integer grid.
pub fn random_filtration(
    rng: &mut ChaCha8Rng,
    max_vertices: u32,
    max_dim: usize,
    max_cells: usize,
) -> Filtration {
    let c = random_complex(rng, max_vertices, max_dim, max_cells);
    let mut births: BTreeMap<Simplex, f64> = BTreeMap::new();
    for s in c.simplices() {
        let b = if s.dim() == 0 {
            rng.gen_range(0..=2) as f64
        } else {
            let base = s.faces().iter().map(|fc| births[fc]).fold(0.0, f64::max);
            base + rng.gen_range(0..=1) as f64
        };
        births.insert(s.clone(), b);
    }
    filtration_from_complex(&c, |s| births[s]).expect("births are face-monotone by construction")
}

/// Random subcomplex: the downward closure of an independent coin flip per
/// simplex.
pub fn random_subcomplex(rng: &mut ChaCha8Rng, x: &SimplicialComplex) -> SimplicialComplex {
    let marked: Vec<Simplex> = x
        .simplices()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    SimplicialComplex::from_maximal(marked)
}

/// Random simplicial cover: each maximal simplex goes to A, to B, or to
/// both, so the closures always union to the whole complex.
pub fn random_cover(
    rng: &mut ChaCha8Rng,
    x: &SimplicialComplex,
) -> (SimplicialComplex, SimplicialComplex) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for m in x.maximal_simplices() {
        match rng.gen_range(0..3u8) {
            0 => a.push(m.clone()),
            1 => b.push(m.clone()),
            _ => {
                a.push(m.clone());
                b.push(m.clone());
            }
        }
    }
    (
        SimplicialComplex::from_maximal(a),
        SimplicialComplex::from_maximal(b),
    )
}

fn both_fields() -> [PrimeField; 2] {
    [PrimeField::new(2).unwrap(), PrimeField::new(5).unwrap()]
}

fn duality_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let f = random_filtration(rng, 8, 3, 40);
    for field in both_fields() {
        standard_barcodes(&f, field)?;
    }
    Ok(())
}

fn oracle_case(rng: &mut ChaCha8Rng, cap: usize) -> Result<()> {
    let f = random_filtration(rng, 6, 3, 20);
    let field = PrimeField::new(2).unwrap();
    let absolute = barcode_absolute_homology(&reduce(&f, field), &f);
    if rank_invariant_oracle_with_cap(&f, field, OracleVariant::Absolute, cap)? != absolute {
        return Err(Error::ValidationError(
            "absolute barcode disagrees with the rank-invariant oracle".into(),
        ));
    }
    let relative = barcode_relative(&f, field, Flavor::Homology)?;
    if rank_invariant_oracle_with_cap(&f, field, OracleVariant::Relative, cap)? != relative {
        return Err(Error::ValidationError(
            "relative barcode disagrees with the rank-invariant oracle".into(),
        ));
    }
    Ok(())
}

fn les_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let x = random_complex(rng, 8, 3, 30);
    let a = random_subcomplex(rng, &x);
    for field in both_fields() {
        let report = les_exactness_check(&x, &a, field)?;
        if !report.all_exact() {
            let node = report
                .nodes
                .iter()
                .find(|n| !n.exact)
                .map(|n| n.label.clone())
                .unwrap_or_else(|| "connecting-map lift".into());
            return Err(Error::ValidationError(format!(
                "exactness fails at {node} over F_{}",
                field.modulus()
            )));
        }
    }
    Ok(())
}

fn excision_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let x = random_complex(rng, 8, 3, 30);
    let (a, b) = random_cover(rng, &x);
    for field in both_fields() {
        let report = excision_check(&x, &a, &b, field)?;
        if !report.all_equal() {
            let row = report.rows.iter().find(|r| !r.equal).expect("unequal row");
            return Err(Error::ValidationError(format!(
                "excision fails in dimension {} over F_{}: {} vs {}",
                row.dim,
                field.modulus(),
                row.excised,
                row.ambient
            )));
        }
    }
    Ok(())
}

fn subdivision_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let c = random_complex(rng, 5, 3, 31);
    let sd = barycentric_subdivide(&c);
    for field in both_fields() {
        let before = betti_numbers(&c, field);
        let after = betti_numbers(&sd, field);
        if before != after {
            return Err(Error::ValidationError(format!(
                "Betti numbers change under subdivision over F_{}: {:?} vs {:?}",
                field.modulus(),
                before.as_slice(),
                after.as_slice()
            )));
        }
    }
    Ok(())
}

/// Runs one suite for `count` cases from the salted seed.
pub fn run_suite(kind: SuiteKind, seed: u64, count: usize) -> SuiteOutcome {
    run_suite_with_cap(kind, seed, count, DEFAULT_ORACLE_CAP)
}

/// [`run_suite`] with an explicit oracle cell cap (only the oracle suite
/// consults it).
pub fn run_suite_with_cap(
    kind: SuiteKind,
    seed: u64,
    count: usize,
    oracle_cap: usize,
) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(kind.salt()));
    let mut failures = Vec::new();
    for case in 0..count {
        let outcome = match kind {
            SuiteKind::Duality => duality_case(&mut rng),
            SuiteKind::Oracle => oracle_case(&mut rng, oracle_cap),
            SuiteKind::Les => les_case(&mut rng),
            SuiteKind::Excision => excision_case(&mut rng),
            SuiteKind::Subdivision => subdivision_case(&mut rng),
        };
        if let Err(e) = outcome {
            failures.push(format!("case {case}: {e}"));
        }
    }
    SuiteOutcome {
        name: kind.name(),
        cases: count,
        passed: count - failures.len(),
        failures,
    }
}

/// Runs several suites; `count` overrides every suite's default case count.
pub fn run_suites(kinds: &[SuiteKind], seed: u64, count: Option<usize>) -> Vec<SuiteOutcome> {
    run_suites_with_cap(kinds, seed, count, DEFAULT_ORACLE_CAP)
}

/// [`run_suites`] with an explicit oracle cell cap.
pub fn run_suites_with_cap(
    kinds: &[SuiteKind],
    seed: u64,
    count: Option<usize>,
    oracle_cap: usize,
) -> Vec<SuiteOutcome> {
    kinds
        .iter()
        .map(|&k| run_suite_with_cap(k, seed, count.unwrap_or_else(|| k.default_count()), oracle_cap))
        .collect()
}

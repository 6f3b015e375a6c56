//! The persistence engine: boundary-matrix reduction with basis tracking,
//! the birth/death pairing, barcodes for the four standard persistence
//! modules (absolute/relative homology/cohomology), the concatenated
//! barcode, the rank-invariant oracle, spectra, and duality verification.
//!
//! Conventions:
//!
//! - Reduction is the plain left-to-right column algorithm; among already
//!   processed columns lows are unique, so the eliminating column is always
//!   the one with the matching low.
//! - An interval's dimension tag is the dimension of its birth cell; finite
//!   relative intervals therefore carry the death cell's dimension (one
//!   higher than their absolute counterpart).
//! - Zero-length intervals are dropped from barcodes; the dropped pairs are
//!   available as index pairs through [`ephemeral_index_pairs`].
//! - Barcode equality is multiset equality of (dim, birth, death, kind) in
//!   canonical order; provenance indices only break sorting ties.

use std::fmt;

use crate::algebra::{
    add_scaled_column, anti_transpose, FpMatrix, PrimeField, RankAccumulator, SparseColumn,
    SparseMatrix,
};
use crate::core::Filtration;
use crate::error::{Error, Result};

/// Default cell-count cap for the rank-invariant oracle, which costs a
/// quartic number of field operations.
pub const DEFAULT_ORACLE_CAP: usize = 64;

/// The output of boundary-matrix reduction: `reduced = boundary * basis_change`
/// with `basis_change` upper triangular and invertible, plus the pairing.
///
/// After reduction the column indices partition into three sets: `essential`
/// (zero reduced column, not killed), the births `b`, and the deaths `d` of
/// `pairs`. The basis implied by the columns of `basis_change` satisfies
/// `boundary(sigma_d) = sigma_b` for every pair and `boundary(sigma_j) = 0`
/// for every birth or essential `j`.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub reduced: SparseMatrix,
    pub basis_change: SparseMatrix,
    /// (birth index, death index), sorted by birth index.
    pub pairs: Vec<(usize, usize)>,
    /// Unpaired indices with zero reduced column, ascending.
    pub essential: Vec<usize>,
}

impl ReductionResult {
    /// Checks every structural invariant against the original matrix:
    /// `reduced == boundary * basis_change`, triangularity and invertibility
    /// of the basis change, uniqueness of lows, the index partition, and the
    /// derived-basis property `boundary(sigma_d) = sigma_b`.
    pub fn check_decomposition(&self, boundary: &SparseMatrix, field: PrimeField) -> Result<()> {
        let n = boundary.n_cols();
        let product = boundary.multiply(&self.basis_change, field)?;
        if product.columns() != self.reduced.columns() {
            return Err(Error::ValidationError(
                "reduced matrix is not boundary * basis_change".into(),
            ));
        }
        for j in 0..n {
            if self.basis_change.column(j).low() != Some(j) {
                return Err(Error::ValidationError(format!(
                    "basis change column {j} is not upper triangular with nonzero diagonal"
                )));
            }
        }
        let mut seen_low = vec![false; n];
        let mut role = vec![0u8; n]; // 1 = birth, 2 = death, 3 = essential
        for &(b, d) in &self.pairs {
            if self.reduced.column(d).low() != Some(b) {
                return Err(Error::ValidationError(format!(
                    "pair ({b}, {d}) does not match the low of the reduced column"
                )));
            }
            if seen_low[b] {
                return Err(Error::ValidationError(format!(
                    "row {b} is the low of two reduced columns"
                )));
            }
            seen_low[b] = true;
            role[b] = 1;
            role[d] = 2;
            // boundary(sigma_d) = sigma_b exactly, by the basis post-pass.
            if self.reduced.column(d) != self.basis_change.column(b) {
                return Err(Error::ValidationError(format!(
                    "basis vector {b} is not the boundary of basis vector {d}"
                )));
            }
        }
        for &e in &self.essential {
            role[e] = 3;
        }
        if role.contains(&0) {
            return Err(Error::ValidationError(
                "pairing does not partition the index set".into(),
            ));
        }
        for j in 0..n {
            let is_cycle = self.reduced.column(j).is_empty();
            if (role[j] == 2) == is_cycle {
                return Err(Error::ValidationError(format!(
                    "column {j} role disagrees with its reduced column"
                )));
            }
        }
        Ok(())
    }
}

/// Left-to-right column reduction of a strictly upper triangular matrix over
/// `F_p`, tracking the basis change. For each column j in order, while the
/// column is nonzero and an earlier column shares its low, the earlier
/// column times minus the pivot ratio is added. Afterwards the basis-change
/// column of each birth is rewritten to the reduced column of its death, so
/// the implied basis satisfies `boundary(sigma_d) = sigma_b` on the nose.
pub fn reduce_matrix(boundary: &SparseMatrix, field: PrimeField) -> Result<ReductionResult> {
    let n = boundary.n_cols();
    if boundary.n_rows() != n {
        return Err(Error::ShapeError(format!(
            "boundary matrix must be square, got {}x{}",
            boundary.n_rows(),
            n
        )));
    }
    if !boundary.is_strictly_upper_triangular() {
        return Err(Error::ValidationError(
            "boundary matrix must be strictly upper triangular in filtration order".into(),
        ));
    }
    let mut reduced = boundary.clone();
    let mut basis = SparseMatrix::zero(n, n);
    for j in 0..n {
        basis.set_column(j, SparseColumn::from_entries([(j, 1)], field));
    }
    let mut col_with_low: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        while let Some(low) = reduced.column(j).low() {
            let Some(j2) = col_with_low[low] else { break };
            let pivot = reduced.column(j).low_coefficient().expect("nonzero column");
            let pivot2 = reduced
                .column(j2)
                .low_coefficient()
                .expect("nonzero column");
            let ratio = field.div(pivot, pivot2).expect("pivot is nonzero");
            let lambda = field.neg(ratio);
            reduced.set_column(
                j,
                add_scaled_column(reduced.column(j), reduced.column(j2), lambda, field),
            );
            basis.set_column(
                j,
                add_scaled_column(basis.column(j), basis.column(j2), lambda, field),
            );
        }
        if let Some(low) = reduced.column(j).low() {
            col_with_low[low] = Some(j);
        }
    }
    let mut pairs = Vec::new();
    let mut is_birth = vec![false; n];
    for j in 0..n {
        if let Some(low) = reduced.column(j).low() {
            pairs.push((low, j));
            is_birth[low] = true;
        }
    }
    pairs.sort_unstable();
    let essential = (0..n)
        .filter(|&j| reduced.column(j).is_empty() && !is_birth[j])
        .collect();
    // Post-pass: a birth's basis vector becomes the boundary of its death's,
    // which keeps the product identity (the new column is a cycle) and the
    // triangular shape (the reduced column's low is exactly the birth row).
    for &(b, d) in &pairs {
        basis.set_column(b, reduced.column(d).clone());
    }
    Ok(ReductionResult {
        reduced,
        basis_change: basis,
        pairs,
        essential,
    })
}

/// Reduces the boundary matrix of a filtration. Infallible: the matrix of a
/// valid filtration is square and strictly upper triangular by construction.
pub fn reduce(f: &Filtration, field: PrimeField) -> ReductionResult {
    reduce_matrix(&f.boundary_matrix(field), field).expect("filtration matrices are triangular")
}

/// Whether an interval has one infinite endpoint (`Essential`) or two finite
/// ones (`Finite`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IntervalKind {
    Finite,
    Essential,
}

/// One bar: a half-open interval `[birth, death)` in a fixed homological
/// dimension. `birth` may be minus infinity (relative essentials) and
/// `death` plus infinity (absolute essentials); `birth < death` always.
///
/// Equality ignores `provenance`: two intervals are the same bar if their
/// dimension, endpoints, and kind agree. Provenance records the matrix
/// indices (birth index, death index if any) the bar came from and is used
/// only as a final sorting tie-break.
#[derive(Clone, Debug)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
    pub kind: IntervalKind,
    pub provenance: Option<(usize, Option<usize>)>,
}

impl Interval {
    pub fn finite(dim: usize, birth: f64, death: f64) -> Self {
        debug_assert!(birth < death && birth.is_finite() && death.is_finite());
        Self {
            dim,
            birth,
            death,
            kind: IntervalKind::Finite,
            provenance: None,
        }
    }

    /// `[birth, +inf)` in the given dimension.
    pub fn essential(dim: usize, birth: f64) -> Self {
        debug_assert!(birth.is_finite());
        Self {
            dim,
            birth,
            death: f64::INFINITY,
            kind: IntervalKind::Essential,
            provenance: None,
        }
    }

    /// `[-inf, death)` in the given dimension (the relative essential form).
    pub fn essential_from_below(dim: usize, death: f64) -> Self {
        debug_assert!(death.is_finite());
        Self {
            dim,
            birth: f64::NEG_INFINITY,
            death,
            kind: IntervalKind::Essential,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, birth_index: usize, death_index: Option<usize>) -> Self {
        self.provenance = Some((birth_index, death_index));
        self
    }

    /// Canonical comparison: (dim, birth, death, kind), with provenance as
    /// the final tie-break. Not an `Ord` impl because equality deliberately
    /// ignores provenance.
    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.birth.total_cmp(&other.birth))
            .then_with(|| self.death.total_cmp(&other.death))
            .then_with(|| self.kind.cmp(&other.kind))
            .then_with(|| self.provenance.cmp(&other.provenance))
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.birth.total_cmp(&other.birth).is_eq()
            && self.death.total_cmp(&other.death).is_eq()
            && self.kind == other.kind
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |v: f64| {
            if v == f64::INFINITY {
                "inf".to_string()
            } else if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{v}")
            }
        };
        write!(
            f,
            "[{}, {})_{}",
            end(self.birth),
            end(self.death),
            self.dim
        )
    }
}

/// A multiset of intervals in canonical order: sorted by (dimension, birth,
/// death, kind, provenance). Two barcodes are equal when their canonical
/// sequences agree bar for bar (provenance excluded).
#[derive(Clone, Debug, Default)]
pub struct Barcode {
    intervals: Vec<Interval>,
}

impl Barcode {
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(Interval::canonical_cmp);
        Self { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals_of_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    /// Largest dimension carrying an interval, if any.
    pub fn max_dim(&self) -> Option<usize> {
        self.intervals.iter().map(|i| i.dim).max()
    }
}

impl PartialEq for Barcode {
    fn eq(&self, other: &Self) -> bool {
        self.intervals == other.intervals
    }
}

/// The barcode of persistent absolute homology, read off a reduction: one
/// finite bar `[a_b, a_d)` per pair with distinct birth values, one infinite
/// bar `[a_b, inf)` per essential index, each in the dimension of its birth
/// cell. Pairs with `a_b == a_d` are dropped as ephemeral.
pub fn barcode_absolute_homology(r: &ReductionResult, f: &Filtration) -> Barcode {
    let mut intervals = Vec::new();
    for &(b, d) in &r.pairs {
        let (birth, death) = (f.birth(b), f.birth(d));
        if birth < death {
            intervals
                .push(Interval::finite(f.dim_of(b), birth, death).with_provenance(b, Some(d)));
        }
    }
    for &b in &r.essential {
        intervals.push(Interval::essential(f.dim_of(b), f.birth(b)).with_provenance(b, None));
    }
    Barcode::from_intervals(intervals)
}

/// The index pairs whose bars were dropped for having equal birth and death
/// values: the ephemeral features, retained as indices so they stay
/// distinguishable.
pub fn ephemeral_index_pairs(r: &ReductionResult, f: &Filtration) -> Vec<(usize, usize)> {
    r.pairs
        .iter()
        .copied()
        .filter(|&(b, d)| f.birth(b) == f.birth(d))
        .collect()
}

/// Sorted (birth, death) index pairs plus sorted essential indices.
pub type IndexPairing = (Vec<(usize, usize)>, Vec<usize>);

/// The pairing obtained by reducing the anti-transposed boundary matrix,
/// mapped back through `i -> n-1-i`: the pairs come out equal to the
/// original pairing (as unordered sets), which is the mechanism behind
/// homology/cohomology duality.
pub fn anti_transposed_pairing(f: &Filtration, field: PrimeField) -> Result<IndexPairing> {
    let n = f.len();
    let anti = anti_transpose(&f.boundary_matrix(field))?;
    let r = reduce_matrix(&anti, field)?;
    let mut pairs: Vec<(usize, usize)> = r
        .pairs
        .iter()
        .map(|&(b, d)| (n - 1 - d, n - 1 - b))
        .collect();
    pairs.sort_unstable();
    let mut essential: Vec<usize> = r.essential.iter().map(|&e| n - 1 - e).collect();
    essential.sort_unstable();
    Ok((pairs, essential))
}

/// The barcode of persistent absolute cohomology, re-derived from scratch by
/// reducing the anti-transposed boundary matrix and mapping indices back.
/// Duality says it must equal the absolute homology barcode exactly; a
/// mismatch is reported as a [`Error::DualityViolation`] since it can only
/// mean an implementation bug.
pub fn barcode_absolute_cohomology(f: &Filtration, field: PrimeField) -> Result<Barcode> {
    let (pairs, essential) = anti_transposed_pairing(f, field)?;
    let mut intervals = Vec::new();
    for &(b, d) in &pairs {
        let (birth, death) = (f.birth(b), f.birth(d));
        if birth < death {
            intervals
                .push(Interval::finite(f.dim_of(b), birth, death).with_provenance(b, Some(d)));
        }
    }
    for &b in &essential {
        intervals.push(Interval::essential(f.dim_of(b), f.birth(b)).with_provenance(b, None));
    }
    let cohomology = Barcode::from_intervals(intervals);
    let homology = barcode_absolute_homology(&reduce(f, field), f);
    if cohomology != homology {
        return Err(Error::DualityViolation(format!(
            "absolute cohomology barcode ({} bars) differs from absolute homology ({} bars)",
            cohomology.len(),
            homology.len()
        )));
    }
    Ok(cohomology)
}

/// Which side of the pair duality a relative barcode is requested from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Homology,
    Cohomology,
}

/// Transforms an absolute barcode into the relative one: each finite
/// `[a, b)` in dimension k becomes `[a, b)` in dimension k+1, and each
/// essential `[a, inf)` in dimension k becomes `[-inf, a)` in dimension k.
fn relative_from_absolute(absolute: &Barcode) -> Barcode {
    let intervals = absolute
        .intervals()
        .iter()
        .map(|i| {
            let mut out = match i.kind {
                IntervalKind::Finite => Interval::finite(i.dim + 1, i.birth, i.death),
                IntervalKind::Essential => Interval::essential_from_below(i.dim, i.birth),
            };
            out.provenance = i.provenance;
            out
        })
        .collect();
    Barcode::from_intervals(intervals)
}

/// The barcode of persistent relative (co)homology, derived from the
/// absolute side by the duality correspondence: finite bars shift up one
/// dimension, essential bars `[a, inf)_k` become `[-inf, a)_k`. The
/// cohomology flavor goes through the re-derived cohomology barcode (and so
/// also carries its duality check); relative cohomology equals relative
/// homology.
pub fn barcode_relative(f: &Filtration, field: PrimeField, flavor: Flavor) -> Result<Barcode> {
    let absolute = match flavor {
        Flavor::Homology => barcode_absolute_homology(&reduce(f, field), f),
        Flavor::Cohomology => barcode_absolute_cohomology(f, field)?,
    };
    Ok(relative_from_absolute(&absolute))
}

/// Checks the pair duality between an absolute and a relative barcode: the
/// finite bars of absolute dimension k must match the finite bars of
/// relative dimension k+1 endpoint for endpoint, and the absolute essentials
/// `[a, inf)_k` must match the relative essentials `[-inf, a)_k`.
pub fn verify_duality_ii(absolute: &Barcode, relative: &Barcode) -> Result<()> {
    let mut abs_finite: Vec<(usize, f64, f64)> = absolute
        .intervals()
        .iter()
        .filter(|i| i.kind == IntervalKind::Finite)
        .map(|i| (i.dim + 1, i.birth, i.death))
        .collect();
    let mut rel_finite: Vec<(usize, f64, f64)> = relative
        .intervals()
        .iter()
        .filter(|i| i.kind == IntervalKind::Finite)
        .map(|i| (i.dim, i.birth, i.death))
        .collect();
    let key = |a: &(usize, f64, f64), b: &(usize, f64, f64)| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.total_cmp(&b.1))
            .then_with(|| a.2.total_cmp(&b.2))
    };
    abs_finite.sort_by(key);
    rel_finite.sort_by(key);
    if abs_finite != rel_finite {
        return Err(Error::DualityViolation(format!(
            "finite bars disagree: {} absolute vs {} relative",
            abs_finite.len(),
            rel_finite.len()
        )));
    }
    let mut abs_ess: Vec<(usize, f64)> = absolute
        .intervals()
        .iter()
        .filter(|i| i.kind == IntervalKind::Essential)
        .map(|i| (i.dim, i.birth))
        .collect();
    let mut rel_ess: Vec<(usize, f64)> = relative
        .intervals()
        .iter()
        .filter(|i| i.kind == IntervalKind::Essential)
        .map(|i| (i.dim, i.death))
        .collect();
    let ess_key = |a: &(usize, f64), b: &(usize, f64)| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1));
    abs_ess.sort_by(ess_key);
    rel_ess.sort_by(ess_key);
    if abs_ess != rel_ess {
        return Err(Error::DualityViolation(format!(
            "essential bars disagree: {} absolute vs {} relative",
            abs_ess.len(),
            rel_ess.len()
        )));
    }
    Ok(())
}

/// The four standard persistence barcodes of one filtration, with both
/// dualities asserted during construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardBarcodes {
    pub absolute_homology: Barcode,
    pub absolute_cohomology: Barcode,
    pub relative_homology: Barcode,
    pub relative_cohomology: Barcode,
}

/// Computes all four standard barcodes, verifying that absolute cohomology
/// re-derives to the same barcode as absolute homology (duality I), that the
/// absolute/relative correspondence holds (duality II), and that the two
/// relative flavors agree.
pub fn standard_barcodes(f: &Filtration, field: PrimeField) -> Result<StandardBarcodes> {
    let absolute_homology = barcode_absolute_homology(&reduce(f, field), f);
    let absolute_cohomology = barcode_absolute_cohomology(f, field)?;
    let relative_homology = barcode_relative(f, field, Flavor::Homology)?;
    let relative_cohomology = barcode_relative(f, field, Flavor::Cohomology)?;
    verify_duality_ii(&absolute_homology, &relative_homology)?;
    if relative_homology != relative_cohomology {
        return Err(Error::DualityViolation(
            "relative homology and relative cohomology barcodes differ".into(),
        ));
    }
    Ok(StandardBarcodes {
        absolute_homology,
        absolute_cohomology,
        relative_homology,
        relative_cohomology,
    })
}

/// One endpoint of the doubled index set used by concatenated barcodes:
/// every value exists in a plain and a barred copy, with all plain values
/// ordered before all barred ones.
#[derive(Clone, Copy, Debug)]
pub struct DoubledEndpoint {
    pub value: f64,
    pub barred: bool,
}

impl DoubledEndpoint {
    pub fn plain(value: f64) -> Self {
        Self {
            value,
            barred: false,
        }
    }

    pub fn barred(value: f64) -> Self {
        Self {
            value,
            barred: true,
        }
    }
}

impl PartialEq for DoubledEndpoint {
    fn eq(&self, other: &Self) -> bool {
        self.barred == other.barred && self.value.total_cmp(&other.value).is_eq()
    }
}

impl Eq for DoubledEndpoint {}

impl Ord for DoubledEndpoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.barred
            .cmp(&other.barred)
            .then_with(|| self.value.total_cmp(&other.value))
    }
}

impl PartialOrd for DoubledEndpoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DoubledEndpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "{}\u{0304}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// A half-open interval over the doubled index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConcatenatedInterval {
    pub start: DoubledEndpoint,
    pub end: DoubledEndpoint,
}

impl fmt::Display for ConcatenatedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// The concatenated barcode in homological dimension k, over the doubled
/// index set: the finite bars of dimension k unchanged, the finite bars of
/// dimension k-1 with both endpoints barred, and each essential `[a, inf)`
/// of dimension k closed up as `[a, a-bar)`. Output is sorted.
pub fn concatenated_barcode(
    f: &Filtration,
    field: PrimeField,
    k: usize,
) -> Vec<ConcatenatedInterval> {
    let absolute = barcode_absolute_homology(&reduce(f, field), f);
    let mut out = Vec::new();
    for i in absolute.intervals() {
        match i.kind {
            IntervalKind::Finite if i.dim == k => out.push(ConcatenatedInterval {
                start: DoubledEndpoint::plain(i.birth),
                end: DoubledEndpoint::plain(i.death),
            }),
            IntervalKind::Finite if k > 0 && i.dim == k - 1 => out.push(ConcatenatedInterval {
                start: DoubledEndpoint::barred(i.birth),
                end: DoubledEndpoint::barred(i.death),
            }),
            IntervalKind::Essential if i.dim == k => out.push(ConcatenatedInterval {
                start: DoubledEndpoint::plain(i.birth),
                end: DoubledEndpoint::barred(i.birth),
            }),
            _ => {}
        }
    }
    out.sort_unstable();
    out
}

/// The spectrum of a barcode: every finite endpoint, ascending, with
/// infinity appended. Infinite endpoints contribute nothing of their own.
pub fn spectrum(b: &Barcode) -> Vec<f64> {
    let mut points: Vec<f64> = b
        .intervals()
        .iter()
        .flat_map(|i| [i.birth, i.death])
        .filter(|v| v.is_finite())
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| a.total_cmp(b).is_eq());
    points.push(f64::INFINITY);
    points
}

/// Which persistence module the rank-invariant oracle should rebuild.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVariant {
    Absolute,
    Relative,
}

/// Re-derives a barcode from first principles, with no reduction involved:
/// computes every rank `r(i, j)` of the structure maps `H_k(X^i) -> H_k(X^j)`
/// (absolute) or `H_k(X, X^i) -> H_k(X, X^j)` (relative) by dense linear
/// algebra on truncated or quotient complexes, then recovers interval
/// multiplicities by inclusion-exclusion over the position grid. Quartic in
/// the number of cells, hence the cap.
pub fn rank_invariant_oracle(
    f: &Filtration,
    field: PrimeField,
    variant: OracleVariant,
) -> Result<Barcode> {
    rank_invariant_oracle_with_cap(f, field, variant, DEFAULT_ORACLE_CAP)
}

/// [`rank_invariant_oracle`] with an explicit cell-count cap.
pub fn rank_invariant_oracle_with_cap(
    f: &Filtration,
    field: PrimeField,
    variant: OracleVariant,
    cap: usize,
) -> Result<Barcode> {
    let n = f.len();
    if n > cap {
        return Err(Error::OracleCapExceeded { cells: n, cap });
    }
    let Some(max_dim) = f.max_dim() else {
        return Ok(Barcode::default());
    };
    let mut intervals = Vec::new();
    for k in 0..=max_dim + 1 {
        match variant {
            OracleVariant::Absolute => absolute_intervals_for_dim(f, field, k, &mut intervals),
            OracleVariant::Relative => relative_intervals_for_dim(f, field, k, &mut intervals),
        }
    }
    Ok(Barcode::from_intervals(intervals))
}

/// The ids of cells of one dimension, ascending, plus each cell's position
/// in that list.
fn cells_of_dim(f: &Filtration, k: usize) -> Vec<usize> {
    f.cells()
        .iter()
        .filter(|c| c.dim == k)
        .map(|c| c.id)
        .collect()
}

/// The boundary column of one cell as a dense vector over the positions of
/// its dimension's predecessor cells, restricted to faces satisfying `keep`.
fn boundary_column(
    f: &Filtration,
    cell: usize,
    row_pos: &std::collections::BTreeMap<usize, usize>,
    keep: impl Fn(usize) -> bool,
    rows: usize,
    field: PrimeField,
) -> Vec<u64> {
    let mut col = vec![0u64; rows];
    for (&face, coeff) in f.cell(cell).boundary.terms() {
        if keep(face) {
            col[row_pos[&face]] = field.reduce_int(coeff);
        }
    }
    col
}

fn absolute_intervals_for_dim(
    f: &Filtration,
    field: PrimeField,
    k: usize,
    intervals: &mut Vec<Interval>,
) {
    let n = f.len();
    let k_cells = cells_of_dim(f, k);
    if k_cells.is_empty() {
        return;
    }
    let rows = k_cells.len();
    let k_pos: std::collections::BTreeMap<usize, usize> =
        k_cells.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let km1_cells = if k == 0 { Vec::new() } else { cells_of_dim(f, k - 1) };
    let km1_pos: std::collections::BTreeMap<usize, usize> =
        km1_cells.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let kp1_cells = cells_of_dim(f, k + 1);

    // Full boundary matrix on k-cells; kernels of column-prefixes give the
    // cycle spaces Z_i.
    let bd_cols: Vec<Vec<u64>> = k_cells
        .iter()
        .map(|&c| boundary_column(f, c, &km1_pos, |_| true, km1_cells.len(), field))
        .collect();
    // Boundary columns of (k+1)-cells, over k-cell positions.
    let w_cols: Vec<Vec<u64>> = kp1_cells
        .iter()
        .map(|&c| boundary_column(f, c, &k_pos, |_| true, rows, field))
        .collect();

    // r[i][j] = rank of H_k(X^i) -> H_k(X^j), where X^i is the prefix with
    // cells 0..=i.
    let mut r = vec![vec![0usize; n]; n];
    for i in 0..n {
        // Cycles supported on k-cells with id <= i.
        let m = k_cells.iter().take_while(|&&c| c <= i).count();
        if m == 0 {
            continue;
        }
        let prefix = FpMatrix::from_columns(field, km1_cells.len(), &bd_cols[..m]);
        let z_cols: Vec<Vec<u64>> = prefix
            .kernel_basis()
            .into_iter()
            .map(|kvec| {
                let mut full = vec![0u64; rows];
                full[..m].copy_from_slice(&kvec);
                full
            })
            .collect();
        // Walk j upward, inserting boundary columns of (k+1)-cells as they
        // appear; the rank of the map is rank[Z_i | W_j] - rank[W_j].
        let mut acc_w = RankAccumulator::new(field, rows);
        let mut acc_zw = RankAccumulator::new(field, rows);
        for (p, &c) in kp1_cells.iter().enumerate() {
            if c <= i {
                acc_w.insert(w_cols[p].clone());
                acc_zw.insert(w_cols[p].clone());
            }
        }
        for z in &z_cols {
            acc_zw.insert(z.clone());
        }
        let mut next = kp1_cells.iter().take_while(|&&c| c <= i).count();
        for j in i..n {
            while next < kp1_cells.len() && kp1_cells[next] <= j {
                acc_w.insert(w_cols[next].clone());
                acc_zw.insert(w_cols[next].clone());
                next += 1;
            }
            r[i][j] = acc_zw.rank() - acc_w.rank();
        }
    }

    // Inclusion-exclusion over the position grid; out-of-range ranks are 0.
    let rank = |i: isize, j: isize| -> usize {
        if i < 0 || j >= n as isize || i > j {
            0
        } else {
            r[i as usize][j as usize]
        }
    };
    for p in 0..n {
        for q in p..n {
            let (p, q) = (p as isize, q as isize);
            let lived = rank(p, q) as isize - rank(p, q + 1) as isize;
            let born_earlier = rank(p - 1, q) as isize - rank(p - 1, q + 1) as isize;
            let mu = lived - born_earlier;
            assert!(mu >= 0, "negative interval multiplicity in the oracle");
            for _ in 0..mu {
                let (p, q) = (p as usize, q as usize);
                let birth = f.birth(p);
                if q == n - 1 {
                    intervals.push(Interval::essential(k, birth).with_provenance(p, None));
                } else if birth < f.birth(q + 1) {
                    intervals.push(
                        Interval::finite(k, birth, f.birth(q + 1)).with_provenance(p, Some(q + 1)),
                    );
                }
            }
        }
    }
}

fn relative_intervals_for_dim(
    f: &Filtration,
    field: PrimeField,
    k: usize,
    intervals: &mut Vec<Interval>,
) {
    let n = f.len();
    let k_cells = cells_of_dim(f, k);
    if k_cells.is_empty() {
        return;
    }
    let rows = k_cells.len();
    let k_pos: std::collections::BTreeMap<usize, usize> =
        k_cells.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let km1_cells = if k == 0 { Vec::new() } else { cells_of_dim(f, k - 1) };
    let kp1_cells = cells_of_dim(f, k + 1);
    let w_base: Vec<Vec<u64>> = kp1_cells
        .iter()
        .map(|&c| boundary_column(f, c, &k_pos, |_| true, rows, field))
        .collect();

    // Positions run over prefixes X^i for i = -1..n-1 (X^{-1} empty, the
    // group there being plain absolute homology of the total complex);
    // stored at index i+1.
    let positions = n + 1;
    let mut r = vec![vec![0usize; positions]; positions];
    for pi in 0..positions {
        let i = pi as isize - 1;
        // Relative cycles: kernel of the boundary with the rows AND columns
        // of X^i deleted, embedded back into all k-cell coordinates.
        let live_cols: Vec<usize> = k_cells
            .iter()
            .copied()
            .filter(|&c| c as isize > i)
            .collect();
        let live_rows: Vec<usize> = km1_cells
            .iter()
            .copied()
            .filter(|&c| c as isize > i)
            .collect();
        let live_row_pos: std::collections::BTreeMap<usize, usize> = live_rows
            .iter()
            .enumerate()
            .map(|(p, &c)| (c, p))
            .collect();
        let quot_cols: Vec<Vec<u64>> = live_cols
            .iter()
            .map(|&c| {
                boundary_column(
                    f,
                    c,
                    &live_row_pos,
                    |face| face as isize > i,
                    live_rows.len(),
                    field,
                )
            })
            .collect();
        let quot = FpMatrix::from_columns(field, live_rows.len(), &quot_cols);
        let z_cols: Vec<Vec<u64>> = quot
            .kernel_basis()
            .into_iter()
            .map(|kvec| {
                let mut full = vec![0u64; rows];
                for (idx, &c) in live_cols.iter().enumerate() {
                    full[k_pos[&c]] = kvec[idx];
                }
                full
            })
            .collect();
        // W_j = all boundaries of (k+1)-cells plus the unit vectors of
        // k-cells already in X^j; the map's rank is rank[Z|W] - rank[W].
        let mut acc_w = RankAccumulator::new(field, rows);
        let mut acc_zw = RankAccumulator::new(field, rows);
        for w in &w_base {
            acc_w.insert(w.clone());
            acc_zw.insert(w.clone());
        }
        for &c in k_cells.iter().filter(|&&c| (c as isize) <= i) {
            let mut unit = vec![0u64; rows];
            unit[k_pos[&c]] = 1;
            acc_w.insert(unit.clone());
            acc_zw.insert(unit);
        }
        for z in &z_cols {
            acc_zw.insert(z.clone());
        }
        for pj in pi..positions {
            let j = pj as isize - 1;
            if j >= 0 && k_pos.contains_key(&(j as usize)) {
                let mut unit = vec![0u64; rows];
                unit[k_pos[&(j as usize)]] = 1;
                acc_w.insert(unit.clone());
                acc_zw.insert(unit);
            }
            r[pi][pj] = acc_zw.rank() - acc_w.rank();
        }
    }

    let rank = |pi: isize, pj: isize| -> usize {
        if pi < 0 || pj >= positions as isize || pi > pj {
            0
        } else {
            r[pi as usize][pj as usize]
        }
    };
    for p in 0..positions {
        for q in p..positions {
            let (p, q) = (p as isize, q as isize);
            let lived = rank(p, q) as isize - rank(p, q + 1) as isize;
            let born_earlier = rank(p - 1, q) as isize - rank(p - 1, q + 1) as isize;
            let mu = lived - born_earlier;
            assert!(mu >= 0, "negative interval multiplicity in the oracle");
            if mu > 0 {
                // Position index pi corresponds to prefix i = pi - 1; a class
                // alive through position q dies when cell q+1 enters the
                // deleted prefix, which always exists because H(X, X) = 0.
                let i_birth = p - 1;
                let death_cell = q as usize; // = (q - 1) + 1
                assert!(death_cell < n, "relative class survived the full quotient");
                let death = f.birth(death_cell);
                for _ in 0..mu {
                    if i_birth < 0 {
                        intervals.push(
                            Interval::essential_from_below(k, death)
                                .with_provenance(death_cell, None),
                        );
                    } else if f.birth(i_birth as usize) < death {
                        intervals.push(
                            Interval::finite(k, f.birth(i_birth as usize), death)
                                .with_provenance(i_birth as usize, Some(death_cell)),
                        );
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{filtration_from_complex, Cell, Chain, Simplex, SimplicialComplex};
    use crate::fixtures;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn fin(dim: usize, birth: f64, death: f64) -> Interval {
        Interval::finite(dim, birth, death)
    }

    fn ess(dim: usize, birth: f64) -> Interval {
        Interval::essential(dim, birth)
    }

    fn ess_rel(dim: usize, death: f64) -> Interval {
        Interval::essential_from_below(dim, death)
    }

    /// Triangle boundary: vertices [0],[1],[2] at birth 0 (ids 0,1,2), edges
    /// [0,1],[0,2],[1,2] at birth `edge_birth` (ids 3,4,5).
    fn triangle_filtration(edge_birth: f64) -> Filtration {
        let c = SimplicialComplex::from_maximal(
            [[0u32, 1], [0, 2], [1, 2]].map(|e| Simplex::new(e.to_vec())),
        );
        filtration_from_complex(&c, |s| if s.dim() == 0 { 0.0 } else { edge_birth }).unwrap()
    }

    #[test]
    fn reduce_s2_matches_pinned_pairing() {
        for field in [f2(), f5()] {
            let f = fixtures::s2_filtration();
            let r = reduce(&f, field);
            assert_eq!(r.pairs, vec![(1, 2), (3, 4)]);
            assert_eq!(r.essential, vec![0, 5]);
            r.check_decomposition(&f.boundary_matrix(field), field)
                .unwrap();
        }
    }

    #[test]
    fn reduce_isolated_vertices_all_essential() {
        let cells = (0..4)
            .map(|id| Cell {
                id,
                dim: 0,
                birth: id as f64,
                boundary: Chain::zero(),
            })
            .collect();
        let f = Filtration::new(cells).unwrap();
        let r = reduce(&f, f2());
        assert!(r.pairs.is_empty());
        assert_eq!(r.essential, vec![0, 1, 2, 3]);
    }

    #[test]
    fn reduce_triangle_boundary_matches_pinned_pairing() {
        let f = triangle_filtration(1.0);
        for field in [f2(), f5()] {
            let r = reduce(&f, field);
            assert_eq!(r.pairs, vec![(1, 3), (2, 4)]);
            assert_eq!(r.essential, vec![0, 5]);
            r.check_decomposition(&f.boundary_matrix(field), field)
                .unwrap();
        }
    }

    #[test]
    fn s2_absolute_barcode_is_the_worked_example() {
        let f = fixtures::s2_filtration();
        let b = barcode_absolute_homology(&reduce(&f, f2()), &f);
        let expected = Barcode::from_intervals(vec![
            ess(0, 0.0),
            fin(0, 1.0, 2.0),
            fin(1, 3.0, 4.0),
            ess(2, 5.0),
        ]);
        assert_eq!(b, expected);
    }

    #[test]
    fn s2_relative_barcode_is_the_worked_example() {
        let f = fixtures::s2_filtration();
        let expected = Barcode::from_intervals(vec![
            ess_rel(0, 0.0),
            fin(1, 1.0, 2.0),
            fin(2, 3.0, 4.0),
            ess_rel(2, 5.0),
        ]);
        for flavor in [Flavor::Homology, Flavor::Cohomology] {
            assert_eq!(barcode_relative(&f, f2(), flavor).unwrap(), expected);
        }
    }

    #[test]
    fn s2_cohomology_rederives_the_same_barcode() {
        let f = fixtures::s2_filtration();
        for field in [f2(), f5()] {
            let hom = barcode_absolute_homology(&reduce(&f, field), &f);
            let coh = barcode_absolute_cohomology(&f, field).unwrap();
            assert_eq!(hom, coh);
        }
    }

    #[test]
    fn single_vertex_cohomology() {
        let f = Filtration::new(vec![Cell {
            id: 0,
            dim: 0,
            birth: 2.5,
            boundary: Chain::zero(),
        }])
        .unwrap();
        let b = barcode_absolute_cohomology(&f, f2()).unwrap();
        assert_eq!(b, Barcode::from_intervals(vec![ess(0, 2.5)]));
    }

    #[test]
    fn all_births_zero_drops_every_finite_bar() {
        let f = triangle_filtration(0.0);
        let r = reduce(&f, f2());
        let b = barcode_absolute_homology(&r, &f);
        let expected = Barcode::from_intervals(vec![ess(0, 0.0), ess(1, 0.0)]);
        assert_eq!(b, expected);
        // The dropped pairs remain visible as indices.
        assert_eq!(ephemeral_index_pairs(&r, &f), vec![(1, 3), (2, 4)]);
        let f = triangle_filtration(1.0);
        assert!(ephemeral_index_pairs(&reduce(&f, f2()), &f).is_empty());
    }

    #[test]
    fn empty_filtration_everything_empty() {
        let f = Filtration::new(Vec::new()).unwrap();
        let b = standard_barcodes(&f, f2()).unwrap();
        assert!(b.absolute_homology.is_empty());
        assert!(b.relative_cohomology.is_empty());
        assert_eq!(spectrum(&b.absolute_homology), vec![f64::INFINITY]);
        let oracle = rank_invariant_oracle(&f, f2(), OracleVariant::Absolute).unwrap();
        assert!(oracle.is_empty());
    }

    #[test]
    fn concatenated_barcode_s2_all_dimensions() {
        let f = fixtures::s2_filtration();
        let plain = DoubledEndpoint::plain;
        let barred = DoubledEndpoint::barred;
        let iv = |s, e| ConcatenatedInterval { start: s, end: e };
        assert_eq!(
            concatenated_barcode(&f, f2(), 0),
            vec![iv(plain(0.0), barred(0.0)), iv(plain(1.0), plain(2.0))]
        );
        assert_eq!(
            concatenated_barcode(&f, f2(), 1),
            vec![iv(plain(3.0), plain(4.0)), iv(barred(1.0), barred(2.0))]
        );
        assert_eq!(
            concatenated_barcode(&f, f2(), 2),
            vec![iv(plain(5.0), barred(5.0)), iv(barred(3.0), barred(4.0))]
        );
        // Family 3 always closes an essential bar as [a, a-bar).
        for k in 0..=2 {
            for c in concatenated_barcode(&f, f2(), k) {
                if !c.start.barred && c.end.barred {
                    assert_eq!(c.start.value, c.end.value);
                }
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        let b = Barcode::from_intervals(vec![ess(0, 0.0), fin(0, 1.0, 2.0)]);
        assert_eq!(spectrum(&b), vec![0.0, 1.0, 2.0, f64::INFINITY]);
        assert_eq!(spectrum(&Barcode::default()), vec![f64::INFINITY]);
        let f = fixtures::s2_filtration();
        let b = barcode_absolute_homology(&reduce(&f, f2()), &f);
        assert_eq!(
            spectrum(&b),
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, f64::INFINITY]
        );
    }

    #[test]
    fn oracle_reproduces_s2_barcodes() {
        let f = fixtures::s2_filtration();
        let absolute = rank_invariant_oracle(&f, f2(), OracleVariant::Absolute).unwrap();
        assert_eq!(
            absolute,
            barcode_absolute_homology(&reduce(&f, f2()), &f)
        );
        let relative = rank_invariant_oracle(&f, f2(), OracleVariant::Relative).unwrap();
        assert_eq!(
            relative,
            barcode_relative(&f, f2(), Flavor::Homology).unwrap()
        );
    }

    #[test]
    fn oracle_cap_is_enforced_and_adjustable() {
        let f = fixtures::s2_filtration();
        let err = rank_invariant_oracle_with_cap(&f, f2(), OracleVariant::Absolute, 3).unwrap_err();
        assert_eq!(err, Error::OracleCapExceeded { cells: 6, cap: 3 });
        assert!(rank_invariant_oracle_with_cap(&f, f2(), OracleVariant::Absolute, 6).is_ok());
    }

    #[test]
    fn duality_ii_holds_and_detects_violations() {
        let f = fixtures::s2_filtration();
        let b = standard_barcodes(&f, f5()).unwrap();
        verify_duality_ii(&b.absolute_homology, &b.relative_homology).unwrap();
        // A wrong relative barcode is caught.
        let broken = Barcode::from_intervals(vec![ess_rel(0, 0.0)]);
        assert!(matches!(
            verify_duality_ii(&b.absolute_homology, &broken),
            Err(Error::DualityViolation(_))
        ));
    }

    #[test]
    fn rp2_barcode_depends_on_the_field() {
        let f = fixtures::rp2_filtration();
        let over = |p: u64| {
            let field = PrimeField::new(p).unwrap();
            barcode_absolute_homology(&reduce(&f, field), &f)
        };
        let b2 = over(2);
        let b3 = over(3);
        assert_eq!(b2.intervals_of_dim(1).count(), 1, "F2 sees the twist");
        assert_eq!(b3.intervals_of_dim(1).count(), 0, "F3 does not");
        assert_eq!(
            b2,
            Barcode::from_intervals(vec![ess(0, 0.0), ess(1, 0.0), ess(2, 0.0)])
        );
        assert_eq!(b3, Barcode::from_intervals(vec![ess(0, 0.0)]));
    }

    #[test]
    fn barcode_equality_ignores_provenance_and_orders_canonically() {
        let a = Barcode::from_intervals(vec![
            fin(0, 1.0, 2.0).with_provenance(1, Some(2)),
            ess(0, 0.0).with_provenance(0, None),
        ]);
        let b = Barcode::from_intervals(vec![fin(0, 1.0, 2.0), ess(0, 0.0)]);
        assert_eq!(a, b);
        // Canonical order: dimension, then birth.
        assert_eq!(a.intervals()[0].birth, 0.0);
        let c = Barcode::from_intervals(vec![fin(1, 1.0, 2.0), ess(0, 0.0)]);
        assert_ne!(a, c);
    }

    /// Random filtration on at most `max_vertices` vertices with small
    /// integer births (ties are common on purpose).
    fn filtration_strategy(max_vertices: u32) -> impl Strategy<Value = Filtration> {
        (
            proptest::collection::vec(
                proptest::collection::btree_set(0..max_vertices, 1..=4),
                0..7,
            ),
            proptest::collection::vec(0u32..3, 64),
        )
            .prop_map(|(picks, bumps)| {
                let c = SimplicialComplex::from_maximal(
                    picks
                        .into_iter()
                        .map(|vs| Simplex::new(vs.into_iter().collect())),
                );
                let mut births: BTreeMap<Simplex, f64> = BTreeMap::new();
                for (i, s) in c.simplices().enumerate() {
                    let base = s.faces().iter().map(|fc| births[fc]).fold(0.0, f64::max);
                    births.insert(s.clone(), base + bumps[i % bumps.len()] as f64);
                }
                filtration_from_complex(&c, |s| births[s]).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn reduction_invariants_hold(f in filtration_strategy(6)) {
            for field in [f2(), f5()] {
                let r = reduce(&f, field);
                r.check_decomposition(&f.boundary_matrix(field), field).unwrap();
            }
        }

        #[test]
        fn duality_i_holds(f in filtration_strategy(6)) {
            for field in [f2(), f5()] {
                barcode_absolute_cohomology(&f, field).unwrap();
            }
        }

        #[test]
        fn anti_transpose_index_law(f in filtration_strategy(6)) {
            for field in [f2(), f5()] {
                let direct = reduce(&f, field);
                let (pairs, essential) = anti_transposed_pairing(&f, field).unwrap();
                prop_assert_eq!(&pairs, &direct.pairs);
                prop_assert_eq!(&essential, &direct.essential);
            }
        }

        #[test]
        fn oracle_agrees_with_reduction(f in filtration_strategy(5)) {
            for field in [f2(), f5()] {
                let absolute = barcode_absolute_homology(&reduce(&f, field), &f);
                let oracle = rank_invariant_oracle(&f, field, OracleVariant::Absolute).unwrap();
                prop_assert_eq!(&oracle, &absolute);
                let relative = barcode_relative(&f, field, Flavor::Homology).unwrap();
                let oracle = rank_invariant_oracle(&f, field, OracleVariant::Relative).unwrap();
                prop_assert_eq!(&oracle, &relative);
                verify_duality_ii(&absolute, &relative).unwrap();
            }
        }
    }
}

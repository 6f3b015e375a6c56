//! Domain types: simplices, simplicial complexes, chains, cells, and
//! cell-at-a-time filtrations, with validation and the simplicial boundary
//! operator.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! - Simplices store their vertices in strictly ascending order; the
//!   alternating sign of the boundary operator is applied to that canonical
//!   order, so boundaries are deterministic.
//! - Homology is unreduced throughout (there is no empty simplex).
//! - Filtration order ties are broken by (birth, dimension, lexicographic
//!   vertices), which puts faces before cofaces whenever births are monotone.
//! - Birth values are finite `f64`; infinities appear only in barcode
//!   intervals, never on cells.
//! - Cell boundary coefficients are stored over the integers and reduced
//!   mod p on demand, so one filtration serves every field.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{PrimeField, SparseColumn, SparseMatrix};
use crate::error::{Error, Result};

/// A d-simplex as its (d+1) vertex ids, strictly ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex {
    vertices: Vec<u32>,
}

/// Dimension first, then lexicographic on vertices: the tie-break order used
/// inside filtrations, where it guarantees faces precede cofaces at equal
/// birth.
impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Simplex {
    /// Builds a simplex, sorting the vertices ascending.
    ///
    /// # Panics
    /// If `vertices` is empty or contains a repeated id.
    pub fn new(mut vertices: Vec<u32>) -> Self {
        assert!(!vertices.is_empty(), "a simplex needs at least one vertex");
        vertices.sort_unstable();
        assert!(
            vertices.windows(2).all(|w| w[0] < w[1]),
            "repeated vertex in simplex"
        );
        Self { vertices }
    }

    /// Fallible constructor for parsed input.
    pub fn try_new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::ValidationError(
                "a simplex needs at least one vertex".into(),
            ));
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::ValidationError(format!(
                "repeated vertex {} in simplex",
                w[0]
            )));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The codimension-1 faces, in order of the omitted vertex.
    ///
    /// A vertex has no faces.
    pub fn faces(&self) -> Vec<Simplex> {
        if self.dim() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut v = self.vertices.clone();
                v.remove(i);
                Simplex { vertices: v }
            })
            .collect()
    }

    /// True when every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.vertices.iter();
        self.vertices
            .iter()
            .all(|v| it.by_ref().any(|w| w == v))
    }

    /// The simplicial boundary: the alternating sum of codimension-1 faces,
    /// `sum_i (-1)^i (self with vertex i removed)`; the empty chain for a
    /// vertex.
    pub fn boundary(&self) -> Chain<Simplex> {
        let mut terms = BTreeMap::new();
        for (i, face) in self.faces().into_iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            terms.insert(face, sign);
        }
        Chain { terms }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A formal integer combination of keys (simplices or cell ids) with no
/// stored zero coefficients. Addition is termwise with cancellation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain<K: Ord = Simplex> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    /// Builds a chain, merging duplicate keys with checked addition and
    /// dropping zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (K, i64)>) -> Result<Self> {
        let mut map: BTreeMap<K, i64> = BTreeMap::new();
        for (k, c) in terms {
            let entry = map.entry(k).or_insert(0);
            *entry = entry.checked_add(c).ok_or_else(|| Error::OverflowError {
                context: "chain coefficient addition".into(),
            })?;
        }
        map.retain(|_, c| *c != 0);
        Ok(Self { terms: map })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `k` (zero if absent).
    pub fn coeff(&self, k: &K) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    /// Terms in ascending key order.
    pub fn terms(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    /// Termwise sum with cancellation; checked arithmetic.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_terms(
            self.terms()
                .map(|(k, c)| (k.clone(), c))
                .chain(other.terms().map(|(k, c)| (k.clone(), c))),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, &c)| (k.clone(), -c)).collect(),
        }
    }

    /// Scalar multiple; checked arithmetic.
    pub fn scale(&self, s: i64) -> Result<Self> {
        if s == 0 {
            return Ok(Self::zero());
        }
        let mut terms = BTreeMap::new();
        for (k, c) in self.terms() {
            let v = c.checked_mul(s).ok_or_else(|| Error::OverflowError {
                context: "chain scalar multiplication".into(),
            })?;
            terms.insert(k.clone(), v);
        }
        Ok(Self { terms })
    }
}

impl Chain<Simplex> {
    /// Extends the simplicial boundary linearly over the chain.
    pub fn boundary(&self) -> Result<Chain<Simplex>> {
        let mut acc = Chain::zero();
        for (s, c) in self.terms() {
            acc = acc.add(&s.boundary().scale(c)?)?;
        }
        Ok(acc)
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Chain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.unsigned_abs();
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// A face-closure violation: `face` is required by `parent` but missing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingFace {
    pub parent: Simplex,
    pub face: Simplex,
}

/// Result of validating a raw simplex set against face closure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every missing face, paired with an offending parent, in canonical order.
    pub missing: Vec<MissingFace>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Checks face closure on a raw set of simplices without aborting: the report
/// lists every missing codimension-1 face (transitively) with the parent that
/// requires it.
pub fn validate_complex(simplices: &[Simplex]) -> ValidationReport {
    let mut present: BTreeSet<Simplex> = simplices.iter().cloned().collect();
    let mut missing = Vec::new();
    // Walk top-down so transitively-missing faces are reported too.
    let mut queue: Vec<Simplex> = present.iter().cloned().collect();
    queue.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
    let mut i = 0;
    while i < queue.len() {
        let parent = queue[i].clone();
        i += 1;
        for face in parent.faces() {
            if !present.contains(&face) {
                missing.push(MissingFace {
                    parent: parent.clone(),
                    face: face.clone(),
                });
                // Treat it as present from here on so each face is reported once.
                present.insert(face.clone());
                queue.push(face);
            }
        }
    }
    missing.sort_by(|a, b| (&a.face, &a.parent).cmp(&(&b.face, &b.parent)));
    ValidationReport { missing }
}

/// A finite, face-closed set of simplices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the face closure of the given simplices.
    pub fn from_maximal(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut c = Self::empty();
        for s in simplices {
            c.insert_with_faces(s);
        }
        c
    }

    /// Accepts an already face-closed set; rejects otherwise, naming the
    /// first missing faces.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let list: Vec<Simplex> = simplices.into_iter().collect();
        let report = validate_complex(&list);
        if !report.is_ok() {
            let shown: Vec<String> = report
                .missing
                .iter()
                .take(3)
                .map(|m| format!("missing face {} of {}", m.face, m.parent))
                .collect();
            let suffix = if report.missing.len() > 3 {
                format!(" (and {} more)", report.missing.len() - 3)
            } else {
                String::new()
            };
            return Err(Error::ValidationError(format!(
                "simplex set is not face-closed: {}{}",
                shown.join("; "),
                suffix
            )));
        }
        Ok(Self {
            simplices: list.into_iter().collect(),
        })
    }

    /// Inserts a simplex together with every face needed for closure.
    pub fn insert_with_faces(&mut self, s: Simplex) {
        if self.simplices.contains(&s) {
            return;
        }
        for face in s.faces() {
            self.insert_with_faces(face);
        }
        self.simplices.insert(s);
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    /// All simplices in canonical order: ascending dimension, then
    /// lexicographic vertices.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// The simplices of dimension `d`, in canonical order.
    pub fn simplices_of_dim(&self, d: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.dim() == d).collect()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.dim()).max()
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.simplices
            .iter()
            .filter(|s| s.dim() == 0)
            .map(|s| s.vertices()[0])
            .collect()
    }

    /// Simplices not properly contained in any other member.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.dim() > s.dim() && s.is_face_of(t))
            })
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        SimplicialComplex {
            simplices: self.simplices.union(&other.simplices).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        SimplicialComplex {
            simplices: self
                .simplices
                .intersection(&other.simplices)
                .cloned()
                .collect(),
        }
    }
}

impl FromIterator<Simplex> for SimplicialComplex {
    /// Collects by face closure.
    fn from_iter<T: IntoIterator<Item = Simplex>>(iter: T) -> Self {
        Self::from_maximal(iter)
    }
}

/// A simplicial complex with vertex coordinates in some `R^m`; used for
/// subdivision diameter measurements and Rips input.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricComplex {
    complex: SimplicialComplex,
    coords: BTreeMap<u32, Vec<f64>>,
}

impl GeometricComplex {
    /// Every vertex of the complex must have finite coordinates, all of the
    /// same arity `m >= 1`.
    pub fn new(complex: SimplicialComplex, coords: BTreeMap<u32, Vec<f64>>) -> Result<Self> {
        let mut arity: Option<usize> = None;
        for v in complex.vertices() {
            let Some(p) = coords.get(&v) else {
                return Err(Error::ValidationError(format!(
                    "vertex {v} has no coordinates"
                )));
            };
            if p.is_empty() {
                return Err(Error::ValidationError(format!(
                    "vertex {v} has zero-dimensional coordinates"
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::ValidationError(format!(
                    "vertex {v} has non-finite coordinates"
                )));
            }
            match arity {
                None => arity = Some(p.len()),
                Some(m) if m != p.len() => {
                    return Err(Error::ValidationError(format!(
                        "vertex {v} has {} coordinates, expected {m}",
                        p.len()
                    )));
                }
                _ => {}
            }
        }
        Ok(Self { complex, coords })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn coords(&self, v: u32) -> &[f64] {
        &self.coords[&v]
    }

    pub fn coordinate_map(&self) -> &BTreeMap<u32, Vec<f64>> {
        &self.coords
    }

    /// Euclidean distance between two vertices.
    pub fn distance(&self, a: u32, b: u32) -> f64 {
        euclidean(self.coords(a), self.coords(b))
    }

    /// Max pairwise vertex distance within one simplex (0 for a vertex).
    pub fn simplex_diameter(&self, s: &Simplex) -> f64 {
        let vs = s.vertices();
        let mut best = 0.0f64;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                best = best.max(self.distance(vs[i], vs[j]));
            }
        }
        best
    }

    /// Max simplex diameter over the whole complex (0 for points-only input).
    pub fn max_diameter(&self) -> f64 {
        self.complex
            .simplices()
            .map(|s| self.simplex_diameter(s))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// One step of a filtration: a cell with its filtration index, dimension,
/// birth value, and explicit integer boundary over earlier cell ids.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub dim: usize,
    pub birth: f64,
    pub boundary: Chain<usize>,
}

/// A cell-at-a-time filtration: cells with ids `0..n`, non-decreasing births,
/// boundaries referencing only earlier cells of one dimension lower, and
/// `boundary * boundary = 0` over the integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    cells: Vec<Cell>,
}

impl Filtration {
    /// Validates every invariant; error messages name the violated invariant
    /// and the offending cell.
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        for (i, cell) in cells.iter().enumerate() {
            if cell.id != i {
                return Err(Error::ValidationError(format!(
                    "cell ids must be 0..n in order: found id {} at position {i}",
                    cell.id
                )));
            }
            if !cell.birth.is_finite() {
                return Err(Error::ValidationError(format!(
                    "non-finite birth at cell {i}"
                )));
            }
            if i > 0 && cell.birth < cells[i - 1].birth {
                return Err(Error::ValidationError(format!(
                    "non-monotone birth at cell {i}: {} after {}",
                    cell.birth,
                    cells[i - 1].birth
                )));
            }
            if cell.dim == 0 && !cell.boundary.is_zero() {
                return Err(Error::ValidationError(format!(
                    "0-cell {i} has a nonempty boundary"
                )));
            }
            for (&face, _) in cell.boundary.terms() {
                if face >= i {
                    return Err(Error::ValidationError(format!(
                        "forward reference at cell {i}: boundary uses cell {face}"
                    )));
                }
                if cells[face].dim + 1 != cell.dim {
                    return Err(Error::ValidationError(format!(
                        "boundary of cell {i} (dim {}) uses cell {face} of dim {}",
                        cell.dim, cells[face].dim
                    )));
                }
            }
        }
        // boundary squared must vanish over the integers (hence every field).
        for cell in &cells {
            let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
            for (&face, c) in cell.boundary.terms() {
                for (&ff, cc) in cells[face].boundary.terms() {
                    *acc.entry(ff).or_insert(0) += c as i128 * cc as i128;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Err(Error::ValidationError(format!(
                    "boundary squared nonzero at cell {}",
                    cell.id
                )));
            }
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn birth(&self, i: usize) -> f64 {
        self.cells[i].birth
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.cells[i].dim
    }

    /// Top cell dimension, or `None` when empty.
    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// The full boundary matrix over `F_p`: entry `(i, j)` is the coefficient
    /// of cell `i` in the boundary of cell `j`. Strictly upper triangular in
    /// filtration order.
    pub fn boundary_matrix(&self, field: PrimeField) -> SparseMatrix {
        let n = self.cells.len();
        let mut m = SparseMatrix::zero(n, n);
        for cell in &self.cells {
            let col = SparseColumn::from_integer_entries(
                cell.boundary.terms().map(|(&face, c)| (face, c)),
                field,
            );
            m.set_column(cell.id, col);
        }
        m
    }
}

/// Orders a complex's simplices by `(birth, dimension, lexicographic
/// vertices)` and assembles the filtration, computing each boundary with the
/// simplicial sign convention and remapping to cell ids.
///
/// The birth map must be monotone under the face relation; otherwise the
/// offending (face, coface) pair is named in a `MonotonicityError`.
pub fn filtration_from_complex(
    complex: &SimplicialComplex,
    birth: impl Fn(&Simplex) -> f64,
) -> Result<Filtration> {
    let mut order: Vec<(&Simplex, f64)> = Vec::with_capacity(complex.len());
    for s in complex.simplices() {
        let b = birth(s);
        if !b.is_finite() {
            return Err(Error::ValidationError(format!(
                "non-finite birth for simplex {s}"
            )));
        }
        order.push((s, b));
    }
    for &(s, b) in &order {
        let mut faces = s.faces();
        faces.sort();
        for face in faces {
            let fb = birth(&face);
            if fb > b {
                return Err(Error::MonotonicityError {
                    face: face.to_string(),
                    coface: s.to_string(),
                    face_birth: fb,
                    coface_birth: b,
                });
            }
        }
    }
    // Simplex Ord is (vertex count, lexicographic vertices), so this sort is
    // exactly (birth, dim, lex).
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    let index: BTreeMap<&Simplex, usize> =
        order.iter().enumerate().map(|(i, &(s, _))| (s, i)).collect();
    let mut cells = Vec::with_capacity(order.len());
    for (i, &(s, b)) in order.iter().enumerate() {
        let boundary = Chain::from_terms(
            s.boundary()
                .terms()
                .map(|(face, c)| (index[face], c)),
        )?;
        cells.push(Cell {
            id: i,
            dim: s.dim(),
            birth: b,
            boundary,
        });
    }
    Filtration::new(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    #[test]
    fn simplex_sorts_vertices_and_orders_by_dim_then_lex() {
        assert_eq!(s(&[2, 0, 1]).vertices(), &[0, 1, 2]);
        assert!(s(&[5]) < s(&[0, 1]), "lower dimension sorts first");
        assert!(s(&[0, 2]) < s(&[1, 2]));
        assert_eq!(s(&[0, 1, 2]).dim(), 2);
    }

    #[test]
    fn boundary_matches_pinned_examples() {
        // A vertex has zero boundary.
        assert!(s(&[4]).boundary().is_zero());
        // An edge: +[v1] - [v0].
        let b = s(&[0, 1]).boundary();
        assert_eq!(b.coeff(&s(&[1])), 1);
        assert_eq!(b.coeff(&s(&[0])), -1);
        // A triangle: +[1,2] - [0,2] + [0,1], and its boundary vanishes.
        let b = s(&[0, 1, 2]).boundary();
        assert_eq!(b.coeff(&s(&[1, 2])), 1);
        assert_eq!(b.coeff(&s(&[0, 2])), -1);
        assert_eq!(b.coeff(&s(&[0, 1])), 1);
        assert!(b.boundary().unwrap().is_zero());
    }

    proptest! {
        #[test]
        fn boundary_squared_is_zero(verts in proptest::collection::btree_set(0u32..12, 1..=6)) {
            let sx = Simplex::new(verts.into_iter().collect());
            prop_assert!(sx.boundary().boundary().unwrap().is_zero());
        }

        #[test]
        fn chain_group_laws(
            a in proptest::collection::btree_map(0u32..6, -4i64..=4, 0..5),
            b in proptest::collection::btree_map(0u32..6, -4i64..=4, 0..5),
            c in proptest::collection::btree_map(0u32..6, -4i64..=4, 0..5),
        ) {
            let chain = |m: &std::collections::BTreeMap<u32, i64>| {
                Chain::from_terms(m.iter().map(|(&v, &c)| (s(&[v]), c))).unwrap()
            };
            let (x, y, z) = (chain(&a), chain(&b), chain(&c));
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(
                x.add(&y).unwrap().add(&z).unwrap(),
                x.add(&y.add(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.add(&Chain::zero()).unwrap(), x.clone());
            prop_assert!(x.add(&x.neg()).unwrap().is_zero());
        }
    }

    #[test]
    fn validate_complex_reports_each_missing_face_with_parent() {
        // Full triangle is closed.
        let full: Vec<Simplex> = vec![
            s(&[0]),
            s(&[1]),
            s(&[2]),
            s(&[0, 1]),
            s(&[1, 2]),
            s(&[0, 2]),
            s(&[0, 1, 2]),
        ];
        assert!(validate_complex(&full).is_ok());
        // A bare edge misses both vertices.
        let report = validate_complex(&[s(&[0, 1])]);
        let faces: Vec<&Simplex> = report.missing.iter().map(|m| &m.face).collect();
        assert_eq!(faces, vec![&s(&[0]), &s(&[1])]);
        assert!(report.missing.iter().all(|m| m.parent == s(&[0, 1])));
        // Empty set is vacuously closed.
        assert!(validate_complex(&[]).is_ok());
        // Transitively missing faces are found too.
        let report = validate_complex(&[s(&[0, 1, 2])]);
        assert_eq!(report.missing.len(), 6, "3 edges and 3 vertices");
    }

    #[test]
    fn closure_and_queries() {
        let c = SimplicialComplex::from_maximal([s(&[0, 1, 2])]);
        assert_eq!(c.len(), 7);
        assert_eq!(c.dim(), Some(2));
        assert_eq!(c.vertices().len(), 3);
        assert_eq!(c.maximal_simplices(), vec![&s(&[0, 1, 2])]);
        assert!(SimplicialComplex::from_simplices([s(&[0, 1])]).is_err());
        assert_eq!(SimplicialComplex::empty().dim(), None);
    }

    #[test]
    fn filtration_orders_by_birth_dim_lex() {
        // Triangle boundary: 3 vertices at 0, 3 edges at 1.
        let c = SimplicialComplex::from_maximal([s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let f = filtration_from_complex(&c, |sx| sx.dim() as f64).unwrap();
        assert_eq!(f.len(), 6);
        let dims: Vec<usize> = f.cells().iter().map(|c| c.dim).collect();
        assert_eq!(dims, vec![0, 0, 0, 1, 1, 1]);
        // Edge order at equal birth is lexicographic: [0,1], [0,2], [1,2].
        assert_eq!(f.cell(3).boundary.coeff(&0), -1);
        assert_eq!(f.cell(3).boundary.coeff(&1), 1);
        assert_eq!(f.cell(4).boundary.coeff(&0), -1);
        assert_eq!(f.cell(4).boundary.coeff(&2), 1);
    }

    #[test]
    fn filtration_from_complex_names_monotonicity_violations() {
        let c = SimplicialComplex::from_maximal([s(&[0, 1])]);
        let err = filtration_from_complex(&c, |sx| if sx.dim() == 0 { 2.0 } else { 1.0 })
            .unwrap_err();
        match err {
            Error::MonotonicityError {
                face,
                coface,
                face_birth,
                coface_birth,
            } => {
                assert_eq!(face, "[0]");
                assert_eq!(coface, "[0,1]");
                assert_eq!(face_birth, 2.0);
                assert_eq!(coface_birth, 1.0);
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn single_vertex_filtration() {
        let c = SimplicialComplex::from_maximal([s(&[7])]);
        let f = filtration_from_complex(&c, |_| 2.5).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.cell(0).dim, 0);
        assert_eq!(f.cell(0).birth, 2.5);
        assert!(f.cell(0).boundary.is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn filtration_from_complex_output_is_always_valid(
            picks in proptest::collection::vec(proptest::collection::btree_set(0u32..5, 1..=5), 1..6),
            bump in proptest::collection::vec(0u32..3, 32),
        ) {
            // Random complex on <= 5 vertices with random monotone births:
            // birth = longest-face chain of random per-simplex increments.
            let c = SimplicialComplex::from_maximal(
                picks.into_iter().map(|vs| Simplex::new(vs.into_iter().collect())),
            );
            let mut births: BTreeMap<Simplex, f64> = BTreeMap::new();
            for (idx, sx) in c.simplices().enumerate() {
                let base = sx
                    .faces()
                    .iter()
                    .map(|fc| births[fc])
                    .fold(0.0f64, f64::max);
                births.insert(sx.clone(), base + bump[idx % bump.len()] as f64);
            }
            let f = filtration_from_complex(&c, |sx| births[sx]).unwrap();
            // Re-validating from raw cells exercises every Filtration invariant.
            prop_assert!(Filtration::new(f.cells().to_vec()).is_ok());
        }
    }

    #[test]
    fn filtration_new_rejects_invariant_violations() {
        let v0 = Cell {
            id: 0,
            dim: 0,
            birth: 0.0,
            boundary: Chain::zero(),
        };
        // Non-monotone births.
        let err = Filtration::new(vec![
            v0.clone(),
            Cell {
                id: 1,
                dim: 0,
                birth: -1.0,
                boundary: Chain::zero(),
            },
        ])
        .unwrap_err();
        assert!(matches!(err, Error::ValidationError(m) if m.contains("non-monotone birth")));
        // Forward reference.
        let err = Filtration::new(vec![
            v0.clone(),
            Cell {
                id: 1,
                dim: 1,
                birth: 0.0,
                boundary: Chain::from_terms([(2usize, 1i64)]).unwrap(),
            },
        ])
        .unwrap_err();
        assert!(matches!(err, Error::ValidationError(m) if m.contains("forward reference")));
        // Wrong face dimension.
        let err = Filtration::new(vec![
            v0.clone(),
            Cell {
                id: 1,
                dim: 2,
                birth: 0.0,
                boundary: Chain::from_terms([(0usize, 1i64)]).unwrap(),
            },
        ])
        .unwrap_err();
        assert!(matches!(err, Error::ValidationError(m) if m.contains("dim")));
    }

    #[test]
    fn geometric_complex_diameters() {
        let c = SimplicialComplex::from_maximal([s(&[0, 1, 2])]);
        let coords: BTreeMap<u32, Vec<f64>> = [
            (0, vec![0.0, 0.0]),
            (1, vec![1.0, 0.0]),
            (2, vec![0.0, 2.0]),
        ]
        .into_iter()
        .collect();
        let g = GeometricComplex::new(c, coords).unwrap();
        assert_eq!(g.distance(0, 1), 1.0);
        assert_eq!(g.max_diameter(), (1.0f64 + 4.0).sqrt());
        // Missing coordinates are rejected.
        let c2 = SimplicialComplex::from_maximal([s(&[0, 1])]);
        assert!(GeometricComplex::new(c2, BTreeMap::new()).is_err());
    }
}

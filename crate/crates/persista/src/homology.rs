//! Non-persistent homology of finite simplicial complexes: Betti numbers
//! over prime fields, integer homology with torsion, connected components,
//! chain indices, relative homology of pairs, and checkable forms of the
//! classical structure theorems (long exact sequence, excision, barycentric
//! subdivision, universal coefficients over a field).
//!
//! Per-dimension outputs run over d = 0..=(dim X)+1; dimensions beyond that
//! are zero by convention and accessors return zero there.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{
    integer_system_solvable, smith_normal_form, FpMatrix, IntMatrix, PrimeField, RankAccumulator,
};
use crate::core::{Chain, Filtration, GeometricComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Ranks of homology over a fixed prime field, one entry per dimension.
/// Dimensions past the stored length are zero; equality pads with zeros, so
/// `[1, 0]` and `[1]` compare equal.
#[derive(Clone, Debug, Default)]
pub struct BettiVector(Vec<usize>);

impl BettiVector {
    pub fn from_vec(v: Vec<usize>) -> Self {
        Self(v)
    }

    /// The Betti number in dimension `d` (zero beyond the stored range).
    pub fn get(&self, d: usize) -> usize {
        self.0.get(d).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// The alternating sum of the stored Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl PartialEq for BettiVector {
    fn eq(&self, other: &Self) -> bool {
        let len = self.0.len().max(other.0.len());
        (0..len).all(|d| self.get(d) == other.get(d))
    }
}

impl Eq for BettiVector {}

/// Integer homology groups: free rank and torsion coefficients per
/// dimension. Torsion entries are the diagonal values of the Smith normal
/// form of the next boundary map that exceed 1, in ascending order, so each
/// divides the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerHomology {
    betti: Vec<usize>,
    torsion: Vec<Vec<BigInt>>,
}

impl IntegerHomology {
    /// The free rank of H_d (zero beyond the stored range).
    pub fn betti(&self, d: usize) -> usize {
        self.betti.get(d).copied().unwrap_or(0)
    }

    /// The torsion coefficients of H_d, ascending (empty beyond the range).
    pub fn torsion(&self, d: usize) -> &[BigInt] {
        self.torsion.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of stored dimensions (dim X + 2 for a nonempty complex).
    pub fn dims(&self) -> usize {
        self.betti.len()
    }

    /// The free ranks as a Betti vector (valid over any field with no
    /// torsion in adjacent dimensions).
    pub fn free_ranks(&self) -> BettiVector {
        BettiVector(self.betti.clone())
    }

    /// ASCII rendering of H_d, e.g. `0`, `Z`, `Z^2 + Z/2`.
    pub fn group_string(&self, d: usize) -> String {
        let mut parts = Vec::new();
        match self.betti(d) {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for t in self.torsion(d) {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// The chain complex of a pair (X, A) over whatever coefficients are asked
/// for later: the d-th basis is the d-simplices of X not in A in canonical
/// order, and boundaries drop terms that land in A. An empty `A` gives the
/// absolute chain complex of X.
struct PairComplex<'a> {
    /// Basis of C_d, canonical (lexicographic) order, per dimension.
    simplices: Vec<Vec<&'a Simplex>>,
    /// Position of each basis simplex within its dimension.
    index: BTreeMap<&'a Simplex, usize>,
}

impl<'a> PairComplex<'a> {
    fn new(x: &'a SimplicialComplex, a: Option<&SimplicialComplex>) -> Self {
        let top = x.dim().map_or(0, |d| d + 1);
        let mut simplices: Vec<Vec<&'a Simplex>> = vec![Vec::new(); top + 1];
        for s in x.simplices() {
            if a.is_none_or(|a| !a.contains(s)) {
                simplices[s.dim()].push(s);
            }
        }
        let mut index = BTreeMap::new();
        for per_dim in &simplices {
            for (i, &s) in per_dim.iter().enumerate() {
                index.insert(s, i);
            }
        }
        Self { simplices, index }
    }

    /// dim C_d (zero beyond the top dimension).
    fn n(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, Vec::len)
    }

    /// The boundary map C_d -> C_{d-1} over F_p (a 0-row matrix for d = 0).
    fn boundary_fp(&self, d: usize, field: PrimeField) -> FpMatrix {
        let rows = if d == 0 { 0 } else { self.n(d - 1) };
        let mut m = FpMatrix::zero(field, rows, self.n(d));
        self.fill_boundary(d, |r, c, v| m.set(r, c, field.reduce_int(v)));
        m
    }

    /// The boundary map C_d -> C_{d-1} over the integers.
    fn boundary_int(&self, d: usize) -> IntMatrix {
        let rows = if d == 0 { 0 } else { self.n(d - 1) };
        let mut m = IntMatrix::zero(rows, self.n(d));
        self.fill_boundary(d, |r, c, v| m.set(r, c, BigInt::from(v)));
        m
    }

    fn fill_boundary(&self, d: usize, mut set: impl FnMut(usize, usize, i64)) {
        if d == 0 {
            return;
        }
        for (col, s) in self.simplices.get(d).into_iter().flatten().enumerate() {
            for (face, coeff) in s.boundary().terms() {
                // Faces inside A are dropped: that is the quotient.
                if let Some(&row) = self.index.get(face) {
                    set(row, col, coeff);
                }
            }
        }
    }
}

fn betti_of_pair(pc: &PairComplex, field: PrimeField) -> BettiVector {
    let top = pc.simplices.len() - 1;
    let mut betti = vec![0usize; top + 1];
    let mut prev_rank = 0; // rank of boundary_fp(d), starting at d = 0
    for (d, b) in betti.iter_mut().enumerate() {
        let next_rank = pc.boundary_fp(d + 1, field).rank();
        *b = pc.n(d) - prev_rank - next_rank;
        prev_rank = next_rank;
    }
    BettiVector(betti)
}

/// Betti numbers of a complex over a prime field: in each dimension,
/// `dim ker boundary_d - rank boundary_{d+1}` computed by field rank.
pub fn betti_numbers(c: &SimplicialComplex, field: PrimeField) -> BettiVector {
    if c.is_empty() {
        return BettiVector(Vec::new());
    }
    betti_of_pair(&PairComplex::new(c, None), field)
}

/// Integer homology from the Smith normal form of each boundary map: free
/// rank `n_d - rank(boundary_d) - rank(boundary_{d+1})` and torsion from the
/// diagonal entries of SNF(boundary_{d+1}) exceeding 1.
pub fn integer_homology(c: &SimplicialComplex) -> IntegerHomology {
    if c.is_empty() {
        return IntegerHomology {
            betti: Vec::new(),
            torsion: Vec::new(),
        };
    }
    let pc = PairComplex::new(c, None);
    let top = pc.simplices.len() - 1;
    let mut betti = vec![0usize; top + 1];
    let mut torsion = vec![Vec::new(); top + 1];
    let one = BigInt::from(1);
    let mut prev_rank = 0;
    for d in 0..=top {
        let snf_next = smith_normal_form(&pc.boundary_int(d + 1), false);
        betti[d] = pc.n(d) - prev_rank - snf_next.rank;
        torsion[d] = snf_next
            .diag
            .iter()
            .filter(|t| **t > one)
            .cloned()
            .collect();
        prev_rank = snf_next.rank;
    }
    IntegerHomology { betti, torsion }
}

/// Integer homology of the total complex of a filtration, computed from its
/// explicit integer boundary matrices. This covers CW filtrations, where
/// torsion can enter through attaching coefficients (a cell glued on twice)
/// rather than simplicial structure.
pub fn integer_homology_of_filtration(f: &Filtration) -> IntegerHomology {
    let Some(top) = f.max_dim() else {
        return IntegerHomology {
            betti: Vec::new(),
            torsion: Vec::new(),
        };
    };
    let cells: Vec<Vec<usize>> = (0..=top + 1)
        .map(|d| {
            f.cells()
                .iter()
                .filter(|c| c.dim == d)
                .map(|c| c.id)
                .collect()
        })
        .collect();
    let n = |d: usize| cells.get(d).map_or(0, Vec::len);
    let boundary_int = |d: usize| -> IntMatrix {
        if d == 0 {
            return IntMatrix::zero(0, n(0));
        }
        let mut m = IntMatrix::zero(n(d - 1), n(d));
        if d > top {
            return m;
        }
        let row_pos: BTreeMap<usize, usize> = cells[d - 1]
            .iter()
            .enumerate()
            .map(|(p, &c)| (c, p))
            .collect();
        for (j, &cell) in cells[d].iter().enumerate() {
            for (&face, coeff) in f.cell(cell).boundary.terms() {
                m.set(row_pos[&face], j, BigInt::from(coeff));
            }
        }
        m
    };
    let mut betti = vec![0usize; top + 2];
    let mut torsion = vec![Vec::new(); top + 2];
    let one = BigInt::from(1);
    let mut prev_rank = 0;
    for d in 0..=top + 1 {
        let snf_next = smith_normal_form(&boundary_int(d + 1), false);
        betti[d] = n(d) - prev_rank - snf_next.rank;
        torsion[d] = snf_next
            .diag
            .iter()
            .filter(|t| **t > one)
            .cloned()
            .collect();
        prev_rank = snf_next.rank;
    }
    IntegerHomology { betti, torsion }
}

/// The partition of the vertex set into connected components, computed by
/// union-find over the 1-simplices. Classes are sorted by least vertex and
/// ascending inside. The count equals the zeroth Betti number over every
/// field and the free rank of integer H_0.
pub fn connected_components(c: &SimplicialComplex) -> Vec<Vec<u32>> {
    let vertices: Vec<u32> = c.vertices().into_iter().collect();
    let pos: BTreeMap<u32, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for e in c.simplices_of_dim(1) {
        let (a, b) = (pos[&e.vertices()[0]], pos[&e.vertices()[1]]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut classes: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        classes.entry(find(&mut parent, i)).or_default().push(v);
    }
    classes.into_values().collect()
}

/// The index of a 0-chain: the sum of its coefficients.
pub fn chain_index(c: &Chain<Simplex>) -> Result<i64> {
    let mut sum = 0i64;
    for (s, coeff) in c.terms() {
        if s.dim() != 0 {
            return Err(Error::ValidationError(format!(
                "chain index is defined for 0-chains only; found {s} of dimension {}",
                s.dim()
            )));
        }
        sum = sum.checked_add(coeff).ok_or_else(|| Error::OverflowError {
            context: "chain index sum".into(),
        })?;
    }
    Ok(sum)
}

fn zero_chain_vector(complex: &SimplicialComplex, c: &Chain<Simplex>) -> Result<Vec<i64>> {
    let pc = PairComplex::new(complex, None);
    let mut rhs = vec![0i64; pc.n(0)];
    for (s, coeff) in c.terms() {
        if s.dim() != 0 {
            return Err(Error::ValidationError(format!(
                "expected a 0-chain; found {s} of dimension {}",
                s.dim()
            )));
        }
        let Some(&i) = pc.index.get(s) else {
            return Err(Error::ValidationError(format!(
                "chain uses vertex {s} which is not in the complex"
            )));
        };
        rhs[i] = coeff;
    }
    Ok(rhs)
}

/// Whether the 0-chain is a boundary over the integers: solves
/// `boundary_1 * x = c` exactly. Valid on any complex, connected or not.
pub fn is_null_homologous(complex: &SimplicialComplex, c: &Chain<Simplex>) -> Result<bool> {
    let rhs: Vec<BigInt> = zero_chain_vector(complex, c)?
        .into_iter()
        .map(BigInt::from)
        .collect();
    if rhs.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    let bd1 = PairComplex::new(complex, None).boundary_int(1);
    integer_system_solvable(&bd1, &rhs)
}

/// Decides the same membership through the index criterion (`index == 0`),
/// which is equivalent to being a boundary only on connected complexes;
/// rejects disconnected input instead of answering wrongly.
pub fn is_null_homologous_by_index(
    complex: &SimplicialComplex,
    c: &Chain<Simplex>,
) -> Result<bool> {
    zero_chain_vector(complex, c)?;
    let p = connected_components(complex).len();
    if p != 1 {
        return Err(Error::DisconnectedError(format!(
            "the index criterion requires a connected complex; this one has {p} components"
        )));
    }
    Ok(chain_index(c)? == 0)
}

fn ensure_subcomplex(x: &SimplicialComplex, a: &SimplicialComplex) -> Result<()> {
    if let Some(s) = a.simplices().find(|s| !x.contains(s)) {
        return Err(Error::NotSubcomplexError(format!(
            "simplex {s} of the subspace is not in the ambient complex"
        )));
    }
    Ok(())
}

/// Betti numbers of the pair (X, A): homology of the quotient chain complex
/// obtained by deleting the rows and columns of A's simplices from every
/// boundary matrix.
pub fn relative_betti(
    x: &SimplicialComplex,
    a: &SimplicialComplex,
    field: PrimeField,
) -> Result<BettiVector> {
    ensure_subcomplex(x, a)?;
    if x.is_empty() {
        return Ok(BettiVector(Vec::new()));
    }
    Ok(betti_of_pair(&PairComplex::new(x, Some(a)), field))
}

/// The alternating sum of cell counts of a complex.
pub fn euler_characteristic(c: &SimplicialComplex) -> i64 {
    c.simplices()
        .map(|s| if s.dim() % 2 == 0 { 1i64 } else { -1i64 })
        .sum()
}

/// A chosen homology basis of one chain group: representative cycles plus
/// the solve matrix `[representatives | boundary basis]` used to express an
/// arbitrary cycle in the basis modulo boundaries.
struct HomologySpace {
    reps: FpMatrix,
    express: FpMatrix,
}

impl HomologySpace {
    fn dim(&self) -> usize {
        self.reps.cols()
    }

    /// Coordinates of the class of the cycle `z` in the chosen basis.
    fn class_coords(&self, z: &[u64]) -> Vec<u64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let sol = self
            .express
            .solve(z)
            .expect("vector is not a cycle of this chain complex");
        sol[..self.dim()].to_vec()
    }
}

/// Deterministic basis: image columns of the next boundary first, then the
/// kernel-basis cycles that extend the rank, in canonical column order.
fn homology_space(bd_d: &FpMatrix, bd_next: &FpMatrix, field: PrimeField) -> HomologySpace {
    let n = bd_d.cols();
    let image_cols: Vec<Vec<u64>> = bd_next
        .independent_column_indices()
        .into_iter()
        .map(|j| bd_next.column(j))
        .collect();
    let mut acc = RankAccumulator::new(field, n);
    for col in &image_cols {
        acc.insert(col.clone());
    }
    let mut rep_cols = Vec::new();
    for z in bd_d.kernel_basis() {
        if acc.insert(z.clone()) {
            rep_cols.push(z);
        }
    }
    let reps = FpMatrix::from_columns(field, n, &rep_cols);
    let express = reps
        .hstack(&FpMatrix::from_columns(field, n, &image_cols))
        .expect("same row count by construction");
    HomologySpace { reps, express }
}

fn apply(m: &FpMatrix, v: &[u64]) -> Vec<u64> {
    let f = m.field();
    let mut out = vec![0u64; m.rows()];
    for (j, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, row) in out.iter_mut().enumerate() {
            *row = f.add(*row, f.mul(m.get(o, j), x));
        }
    }
    out
}

/// Which group of the pair a long-exact-sequence node belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesSpace {
    /// H_d(A)
    Sub,
    /// H_d(X)
    Ambient,
    /// H_d(X, A)
    Relative,
}

/// One node of the long exact sequence with the evidence for exactness
/// there: the rank of the incoming map, the rank of the outgoing map, and
/// whether the composite vanishes. Exactness holds iff
/// `incoming_rank == group_dim - outgoing_rank` and the composite is zero.
#[derive(Clone, Debug)]
pub struct LesNode {
    pub space: LesSpace,
    pub dim: usize,
    pub label: String,
    pub group_dim: usize,
    pub incoming_rank: usize,
    pub outgoing_rank: usize,
    pub composes_to_zero: bool,
    pub exact: bool,
}

/// The full exactness report for the pair, in sequence order (descending
/// dimension, A then X then (X,A) within each).
#[derive(Clone, Debug)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
    /// Whether the connecting map gave the same classes for two different
    /// chain lifts (it must; this is asserted on every instance).
    pub lift_independent: bool,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.lift_independent && self.nodes.iter().all(|n| n.exact)
    }

    /// The rank of the connecting map out of H_d(X, A), if that node exists.
    pub fn connecting_rank(&self, d: usize) -> Option<usize> {
        self.nodes
            .iter()
            .find(|n| n.space == LesSpace::Relative && n.dim == d)
            .map(|n| n.outgoing_rank)
    }
}

/// Builds the three maps of the long exact sequence of the pair (X, A) on
/// explicit homology bases and verifies exactness at every node.
///
/// The maps are: inclusion `H_d(A) -> H_d(X)`, quotient `H_d(X) -> H_d(X,A)`,
/// and the connecting map `H_d(X,A) -> H_{d-1}(A)` computed by lifting a
/// relative cycle to a chain of X (zero on A), taking its boundary, and
/// expressing the result, which lies in A, in the homology basis of A. The
/// connecting map is recomputed with a second lift (the first plus the sum
/// of all d-simplices of A) and must agree.
pub fn les_exactness_check(
    x: &SimplicialComplex,
    a: &SimplicialComplex,
    field: PrimeField,
) -> Result<LesReport> {
    ensure_subcomplex(x, a)?;
    if x.is_empty() {
        return Ok(LesReport {
            nodes: Vec::new(),
            lift_independent: true,
        });
    }
    let pc_a = PairComplex::new(a, None);
    let pc_x = PairComplex::new(x, None);
    let pc_rel = PairComplex::new(x, Some(a));
    let top = pc_x.simplices.len() - 1; // = dim X + 1

    // Chain-level data per dimension 0..=top+1 (one beyond for images).
    let bd = |pc: &PairComplex, d: usize| pc.boundary_fp(d, field);
    let mut h_a = Vec::new();
    let mut h_x = Vec::new();
    let mut h_rel = Vec::new();
    for d in 0..=top {
        h_a.push(homology_space(&bd(&pc_a, d), &bd(&pc_a, d + 1), field));
        h_x.push(homology_space(&bd(&pc_x, d), &bd(&pc_x, d + 1), field));
        h_rel.push(homology_space(&bd(&pc_rel, d), &bd(&pc_rel, d + 1), field));
    }

    // Coordinate embeddings into C_d(X): position of each basis simplex of
    // C_d(A) and of C_d(X, A) within X's d-basis.
    let embed = |pc: &PairComplex, d: usize| -> Vec<usize> {
        pc.simplices
            .get(d)
            .into_iter()
            .flatten()
            .map(|s| pc_x.index[s])
            .collect()
    };

    let mut lift_independent = true;
    let mut i_maps = Vec::new();
    let mut j_maps = Vec::new();
    let mut del_maps = Vec::new(); // del_maps[d]: H_d(X,A) -> H_{d-1}(A)
    for d in 0..=top {
        let a_to_x = embed(&pc_a, d);
        let rel_to_x = embed(&pc_rel, d);
        let n_x = pc_x.n(d);

        // Inclusion on homology.
        let i_cols: Vec<Vec<u64>> = (0..h_a[d].dim())
            .map(|k| {
                let rep = h_a[d].reps.column(k);
                let mut v = vec![0u64; n_x];
                for (p, &xi) in a_to_x.iter().enumerate() {
                    v[xi] = rep[p];
                }
                h_x[d].class_coords(&v)
            })
            .collect();
        i_maps.push(FpMatrix::from_columns(field, h_x[d].dim(), &i_cols));

        // Quotient on homology: drop the A coordinates.
        let j_cols: Vec<Vec<u64>> = (0..h_x[d].dim())
            .map(|k| {
                let rep = h_x[d].reps.column(k);
                let v: Vec<u64> = rel_to_x.iter().map(|&xi| rep[xi]).collect();
                h_rel[d].class_coords(&v)
            })
            .collect();
        j_maps.push(FpMatrix::from_columns(field, h_rel[d].dim(), &j_cols));

        // Connecting map: lift, boundary, restrict to A, express.
        let target_dim = if d == 0 { 0 } else { h_a[d - 1].dim() };
        let bd_x = bd(&pc_x, d);
        let a_to_x_prev = if d == 0 { Vec::new() } else { embed(&pc_a, d - 1) };
        let del_cols: Vec<Vec<u64>> = (0..h_rel[d].dim())
            .map(|k| {
                if d == 0 {
                    return Vec::new();
                }
                let rep = h_rel[d].reps.column(k);
                let mut lift = vec![0u64; n_x];
                for (p, &xi) in rel_to_x.iter().enumerate() {
                    lift[xi] = rep[p];
                }
                let db = apply(&bd_x, &lift);
                // A relative cycle's boundary lies in A.
                let mut in_a = vec![false; pc_x.n(d - 1)];
                for &xi in &a_to_x_prev {
                    in_a[xi] = true;
                }
                debug_assert!(
                    db.iter().enumerate().all(|(i, &v)| v == 0 || in_a[i]),
                    "boundary of a relative cycle escaped the subcomplex"
                );
                let restricted: Vec<u64> = a_to_x_prev.iter().map(|&xi| db[xi]).collect();
                let coords = h_a[d - 1].class_coords(&restricted);

                // Second lift: add every d-simplex of A once. The extra
                // boundary is a boundary inside A, so the class must match.
                let mut lift2 = lift;
                for &xi in &a_to_x {
                    lift2[xi] = field.add(lift2[xi], 1);
                }
                let db2 = apply(&bd_x, &lift2);
                let restricted2: Vec<u64> = a_to_x_prev.iter().map(|&xi| db2[xi]).collect();
                if h_a[d - 1].class_coords(&restricted2) != coords {
                    lift_independent = false;
                }
                coords
            })
            .collect();
        del_maps.push(FpMatrix::from_columns(field, target_dim, &del_cols));
    }

    // Walk the sequence: ... -> H_d(A) -> H_d(X) -> H_d(X,A) -> H_{d-1}(A) ...
    let mut nodes = Vec::new();
    for d in (0..=top).rev() {
        // Incoming to H_d(A) is the connecting map from H_{d+1}(X, A),
        // which is the zero map from the zero group at the top.
        let top_in = FpMatrix::zero(field, h_a[d].dim(), 0);
        let del_in = del_maps.get(d + 1).unwrap_or(&top_in);
        for (space, label, group_dim, incoming, outgoing) in [
            (
                LesSpace::Sub,
                format!("H_{d}(A)"),
                h_a[d].dim(),
                del_in,
                &i_maps[d],
            ),
            (
                LesSpace::Ambient,
                format!("H_{d}(X)"),
                h_x[d].dim(),
                &i_maps[d],
                &j_maps[d],
            ),
            (
                LesSpace::Relative,
                format!("H_{d}(X,A)"),
                h_rel[d].dim(),
                &j_maps[d],
                &del_maps[d],
            ),
        ] {
            let incoming_rank = incoming.rank();
            let outgoing_rank = outgoing.rank();
            let composes_to_zero = outgoing
                .multiply(incoming)
                .expect("adjacent map shapes agree")
                .is_zero();
            let exact = composes_to_zero && incoming_rank == group_dim - outgoing_rank;
            nodes.push(LesNode {
                space,
                dim: d,
                label,
                group_dim,
                incoming_rank,
                outgoing_rank,
                composes_to_zero,
                exact,
            });
        }
    }
    Ok(LesReport {
        nodes,
        lift_independent,
    })
}

/// One dimension of the excision comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcisionRow {
    pub dim: usize,
    /// rank H_d(B, A ∩ B)
    pub excised: usize,
    /// rank H_d(X, A)
    pub ambient: usize,
    pub equal: bool,
}

/// The per-dimension excision report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcisionReport {
    pub rows: Vec<ExcisionRow>,
}

impl ExcisionReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Verifies excision for a simplicial cover X = A ∪ B: the inclusion of
/// pairs (B, A∩B) -> (X, A) induces rank-equal relative homology in every
/// dimension.
pub fn excision_check(
    x: &SimplicialComplex,
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    field: PrimeField,
) -> Result<ExcisionReport> {
    if &a.union(b) != x {
        return Err(Error::CoverError(format!(
            "A ∪ B has {} simplices but X has {}; the union must equal X",
            a.union(b).len(),
            x.len()
        )));
    }
    let excised = relative_betti(b, &a.intersection(b), field)?;
    let ambient = relative_betti(x, a, field)?;
    let dims = x.dim().map_or(0, |d| d + 2);
    let rows = (0..dims)
        .map(|d| ExcisionRow {
            dim: d,
            excised: excised.get(d),
            ambient: ambient.get(d),
            equal: excised.get(d) == ambient.get(d),
        })
        .collect();
    Ok(ExcisionReport { rows })
}

/// The barycentric subdivision as an abstract complex: one new vertex per
/// simplex of the input (numbered by the input's canonical simplex order),
/// one k-simplex per chain s_0 ⊊ s_1 ⊊ ... ⊊ s_k of simplices under the
/// strict face relation.
pub fn barycentric_subdivide(c: &SimplicialComplex) -> SimplicialComplex {
    let list: Vec<&Simplex> = c.simplices().collect();
    // Strict cofaces of each simplex, as indices into the canonical order.
    // Canonical order refines the face relation, so cofaces have larger ids.
    let cofaces: Vec<Vec<usize>> = list
        .iter()
        .map(|s| {
            list.iter()
                .enumerate()
                .filter(|(_, t)| t.dim() > s.dim() && s.is_face_of(t))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut flags: Vec<Simplex> = Vec::new();
    fn grow(
        chain: &mut Vec<u32>,
        last: usize,
        cofaces: &[Vec<usize>],
        flags: &mut Vec<Simplex>,
    ) {
        flags.push(Simplex::new(chain.clone()));
        for &next in &cofaces[last] {
            chain.push(next as u32);
            grow(chain, next, cofaces, flags);
            chain.pop();
        }
    }
    for start in 0..list.len() {
        grow(&mut vec![start as u32], start, &cofaces, &mut flags);
    }
    // Sub-chains of chains are chains, so the flag set is face-closed.
    SimplicialComplex::from_maximal(flags)
}

/// Diameter measurements around one geometric subdivision step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubdivisionReport {
    pub max_diameter_before: f64,
    pub max_diameter_after: f64,
}

/// Geometric barycentric subdivision: subdivides the underlying complex and
/// places each new vertex at the barycenter (equal-weight vertex average) of
/// its simplex, reporting the max simplex diameter before and after.
pub fn barycentric_subdivide_geometric(
    g: &GeometricComplex,
) -> Result<(GeometricComplex, SubdivisionReport)> {
    let subdivided = barycentric_subdivide(g.complex());
    let mut coords = BTreeMap::new();
    for (i, s) in g.complex().simplices().enumerate() {
        let vs = s.vertices();
        let m = g.coords(vs[0]).len();
        let mut center = vec![0.0f64; m];
        for &v in vs {
            for (c, x) in center.iter_mut().zip(g.coords(v)) {
                *c += x;
            }
        }
        for c in &mut center {
            *c /= vs.len() as f64;
        }
        coords.insert(i as u32, center);
    }
    let after = GeometricComplex::new(subdivided, coords)?;
    let report = SubdivisionReport {
        max_diameter_before: g.max_diameter(),
        max_diameter_after: after.max_diameter(),
    };
    Ok((after, report))
}

/// One dimension of the universal-coefficients comparison over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UctRow {
    pub dim: usize,
    pub homology_dim: usize,
    pub cohomology_dim: usize,
    pub equal: bool,
}

/// The per-dimension universal-coefficients report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UctReport {
    pub rows: Vec<UctRow>,
}

impl UctReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Over a field, cohomology has the same dimensions as homology. The
/// cohomology side is computed independently on the transposed (coboundary)
/// complex: `dim H^d = n_d - rank(delta^d) - rank(delta^{d-1})` with
/// `delta^d` the transpose of `boundary_{d+1}`.
pub fn uct_field_check(c: &SimplicialComplex, field: PrimeField) -> UctReport {
    if c.is_empty() {
        return UctReport { rows: Vec::new() };
    }
    let pc = PairComplex::new(c, None);
    let homology = betti_of_pair(&pc, field);
    let top = pc.simplices.len() - 1;
    let mut rows = Vec::new();
    let mut prev_rank = pc.boundary_fp(0, field).transpose().rank(); // delta^{-1} = 0
    for d in 0..=top {
        let delta_d = pc.boundary_fp(d + 1, field).transpose();
        let rank_d = delta_d.rank();
        let cohomology_dim = pc.n(d) - rank_d - prev_rank;
        prev_rank = rank_d;
        rows.push(UctRow {
            dim: d,
            homology_dim: homology.get(d),
            cohomology_dim,
            equal: cohomology_dim == homology.get(d),
        });
    }
    UctReport { rows }
}

//! Exact linear algebra: prime-field arithmetic, sparse columns with pivot
//! access, dense field matrices, Smith normal form over the integers, and the
//! anti-transpose.
//!
//! Everything here is deterministic and exact; there is no floating point and
//! no randomized pivoting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arithmetic in the prime field `F_p` for `2 <= p < 2^31`.
///
/// Elements are residues `0..p-1` stored as `u64`; since `p < 2^31`, the
/// product of two residues fits in a `u64` without overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field, checking that `p` is prime and in range.
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(Error::ValidationError(format!(
                "field modulus {p} is outside [2, 2^31)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::ValidationError(format!(
                "field modulus {p} is not prime"
            )));
        }
        Ok(Self { p })
    }

    /// The modulus `p`.
    pub fn modulus(self) -> u64 {
        self.p
    }

    /// Canonical residue of a signed integer.
    pub fn reduce_int(self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// Returns `DivisionByZero` when `a` is the zero residue.
    pub fn inverse(self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero { p: self.p });
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        // r0 = gcd(a, p) = 1 because p is prime and a is nonzero.
        Ok(t0.rem_euclid(self.p as i64) as u64)
    }

    pub fn div(self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inverse(b)?))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// One sparse matrix column: strictly ascending `(row, coefficient)` entries
/// with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseColumn {
    entries: Vec<(usize, u64)>,
}

impl SparseColumn {
    /// The empty column.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a column from arbitrary `(row, value)` pairs: values are reduced
    /// into the field, duplicate rows are merged, zeros are dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, u64)>, field: PrimeField) -> Self {
        let mut v: Vec<(usize, u64)> = entries
            .into_iter()
            .map(|(r, c)| (r, c % field.modulus()))
            .collect();
        v.sort_by_key(|&(r, _)| r);
        let mut out: Vec<(usize, u64)> = Vec::with_capacity(v.len());
        for (r, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 = field.add(last.1, c),
                _ => out.push((r, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Self { entries: out }
    }

    /// Builds a column from signed integer coefficients, reducing mod p.
    pub fn from_integer_entries(
        entries: impl IntoIterator<Item = (usize, i64)>,
        field: PrimeField,
    ) -> Self {
        Self::from_entries(
            entries.into_iter().map(|(r, c)| (r, field.reduce_int(c))),
            field,
        )
    }

    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The greatest row index carrying a nonzero entry, or `None` for the
    /// empty column. This is the pivot of the reduction algorithm.
    pub fn low(&self) -> Option<usize> {
        self.entries.last().map(|&(r, _)| r)
    }

    /// The coefficient at the pivot row.
    pub fn low_coefficient(&self) -> Option<u64> {
        self.entries.last().map(|&(_, c)| c)
    }

    /// The coefficient at `row` (zero if absent).
    pub fn get(&self, row: usize) -> u64 {
        match self.entries.binary_search_by_key(&row, |&(r, _)| r) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }
}

/// `target + lambda * source`, merged in ascending row order with zero
/// cancellation. This is the elementary step of every column reduction here.
pub fn add_scaled_column(
    target: &SparseColumn,
    source: &SparseColumn,
    lambda: u64,
    field: PrimeField,
) -> SparseColumn {
    let lambda = lambda % field.modulus();
    if lambda == 0 {
        return target.clone();
    }
    let (a, b) = (&target.entries, &source.entries);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            let e = a[i];
            i += 1;
            e
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let e = (b[j].0, field.mul(lambda, b[j].1));
            j += 1;
            e
        } else {
            let e = (a[i].0, field.add(a[i].1, field.mul(lambda, b[j].1)));
            i += 1;
            j += 1;
            e
        };
        if next.1 != 0 {
            out.push(next);
        }
    }
    SparseColumn { entries: out }
}

/// Column-major sparse matrix over a prime field.
///
/// When it holds a boundary matrix, entry `(i, j)` is the coefficient of cell
/// `i` in the boundary of cell `j`, so the matrix is strictly upper
/// triangular in filtration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n_rows: usize,
    columns: Vec<SparseColumn>,
}

impl SparseMatrix {
    /// The zero matrix of the given shape.
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            columns: vec![SparseColumn::empty(); n_cols],
        }
    }

    /// Builds a matrix from columns, checking row bounds.
    pub fn from_columns(n_rows: usize, columns: Vec<SparseColumn>) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            if let Some(low) = col.low() {
                if low >= n_rows {
                    return Err(Error::ShapeError(format!(
                        "column {j} has an entry at row {low}, but the matrix has {n_rows} rows"
                    )));
                }
            }
        }
        Ok(Self { n_rows, columns })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseColumn {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseColumn] {
        &self.columns
    }

    /// Replaces column `j`; panics if an entry is out of bounds.
    pub fn set_column(&mut self, j: usize, col: SparseColumn) {
        if let Some(low) = col.low() {
            assert!(low < self.n_rows, "column entry out of bounds");
        }
        self.columns[j] = col;
    }

    /// The entry at `(i, j)` (zero if absent).
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.columns[j].get(i)
    }

    /// True when every entry lies strictly above the diagonal.
    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.low().is_none_or(|low| low < j))
    }

    /// Exact sparse product `self * other` over the field.
    pub fn multiply(&self, other: &SparseMatrix, field: PrimeField) -> Result<SparseMatrix> {
        if self.n_cols() != other.n_rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows,
                self.n_cols(),
                other.n_rows,
                other.n_cols()
            )));
        }
        let mut columns = Vec::with_capacity(other.n_cols());
        for j in 0..other.n_cols() {
            let mut acc = SparseColumn::empty();
            for &(k, c) in other.column(j).entries() {
                acc = add_scaled_column(&acc, self.column(k), c, field);
            }
            columns.push(acc);
        }
        Ok(SparseMatrix {
            n_rows: self.n_rows,
            columns,
        })
    }
}

/// Reflection of a square matrix across its anti-diagonal: the result's entry
/// at `(i, j)` is the input's entry at `(n-j, n-i)`, where the matrix is
/// `(n+1) x (n+1)`.
///
/// Applied to a boundary matrix in filtration order this produces the
/// coboundary matrix of the reversed filtration; it is an involution and
/// preserves strict upper-triangularity.
pub fn anti_transpose(a: &SparseMatrix) -> Result<SparseMatrix> {
    if a.n_rows() != a.n_cols() {
        return Err(Error::ShapeError(format!(
            "anti_transpose needs a square matrix, got {}x{}",
            a.n_rows(),
            a.n_cols()
        )));
    }
    if a.n_rows() == 0 {
        return Ok(a.clone());
    }
    let n = a.n_rows() - 1;
    let mut cols: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n + 1];
    // Input entry (i, j) lands at output position (n-j, n-i).
    for j in 0..=n {
        for &(i, c) in a.column(j).entries() {
            cols[n - i].push((n - j, c));
        }
    }
    let columns = cols
        .into_iter()
        .map(|mut v| {
            v.sort_by_key(|&(r, _)| r);
            SparseColumn { entries: v }
        })
        .collect();
    Ok(SparseMatrix {
        n_rows: n + 1,
        columns,
    })
}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    /// Builds from row-major `i64` entries; `entries.len()` must equal
    /// `rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self {
            rows,
            cols,
            data: entries.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn multiply(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j) + add;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }
}

/// Diagonal form `d_1 | d_2 | ... | d_r` of an integer matrix, with optional
/// unimodular transforms `U`, `V` satisfying `U * A * V = diag`.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    /// The nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<BigInt>,
    /// Count of nonzero diagonal entries (the rank of the matrix).
    pub rank: usize,
    /// Row transform (determinant +-1), recorded on request.
    pub u: Option<IntMatrix>,
    /// Column transform (determinant +-1), recorded on request.
    pub v: Option<IntMatrix>,
}

/// Nearest-integer division: the quotient `q` minimizing `|a - q*b|`.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Smith normal form over the integers with arbitrary-precision intermediates,
/// so overflow cannot occur.
///
/// Pivoting picks the minimum-absolute-value nonzero entry of the working
/// submatrix each round, with ties broken by `(row, col)`; this makes the
/// computation deterministic. When `with_transforms` is set, every row
/// operation is mirrored into `U` and every column operation into `V`, so
/// `U * A * V` equals the diagonal matrix and both transforms have
/// determinant +-1 (only swaps, negations, and shear additions are used).
pub fn smith_normal_form(a: &IntMatrix, with_transforms: bool) -> SmithNormalForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut u = with_transforms.then(|| IntMatrix::identity(rows));
    let mut v = with_transforms.then(|| IntMatrix::identity(cols));

    // Smallest-|value| nonzero entry of m[t.., t..], ties by (row, col).
    let find_pivot = |m: &IntMatrix, t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let e = m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let mag = e.abs();
                match &best {
                    Some((bm, _, _)) if *bm <= mag => {}
                    _ => best = Some((mag, i, j)),
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    };

    let mut t = 0;
    let bound = rows.min(cols);
    'outer: while t < bound {
        let Some((pi, pj)) = find_pivot(&m, t) else {
            break;
        };
        m.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        m.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        // Shrink any entry of row/column t not divisible by the pivot; the
        // remainder is strictly smaller in magnitude, so the minimum pivot
        // magnitude decreases and the loop terminates.
        let pivot = m.get(t, t).clone();
        for i in t + 1..rows {
            if !m.get(i, t).mod_floor(&pivot).is_zero() {
                let q = -rounded_div(m.get(i, t), &pivot);
                m.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                continue 'outer;
            }
        }
        for j in t + 1..cols {
            if !m.get(t, j).mod_floor(&pivot).is_zero() {
                let q = -rounded_div(m.get(t, j), &pivot);
                m.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q);
                }
                continue 'outer;
            }
        }

        // Everything in row/column t is divisible by the pivot: clear exactly.
        for i in t + 1..rows {
            if !m.get(i, t).is_zero() {
                let q = -(m.get(i, t) / &pivot);
                m.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
            }
        }
        for j in t + 1..cols {
            if !m.get(t, j).is_zero() {
                let q = -(m.get(t, j) / &pivot);
                m.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q);
                }
            }
        }

        // Restore the divisibility chain: fold a bad row into row t and redo.
        for i in t + 1..rows {
            for j in t + 1..cols {
                if !m.get(i, j).mod_floor(&pivot).is_zero() {
                    m.add_row_multiple(t, i, &BigInt::from(1));
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &BigInt::from(1));
                    }
                    continue 'outer;
                }
            }
        }

        if m.get(t, t).is_negative() {
            m.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }

    let diag: Vec<BigInt> = (0..t).map(|i| m.get(i, i).clone()).collect();
    debug_assert!(diag
        .windows(2)
        .all(|w| w[1].mod_floor(&w[0]).is_zero()));
    SmithNormalForm {
        rank: diag.len(),
        diag,
        u,
        v,
    }
}

/// Whether `A x = rhs` has an integer solution, decided through the Smith
/// normal form: with `U A V = S`, the system is solvable iff every coordinate
/// of `U rhs` is divisible by the matching diagonal entry (and zero past the
/// rank).
pub fn integer_system_solvable(a: &IntMatrix, rhs: &[BigInt]) -> Result<bool> {
    if rhs.len() != a.rows() {
        return Err(Error::ShapeError(format!(
            "right-hand side has {} coordinates, matrix has {} rows",
            rhs.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a, true);
    let u = snf.u.as_ref().expect("transforms requested");
    for i in 0..a.rows() {
        let mut y = BigInt::zero();
        for (j, r) in rhs.iter().enumerate() {
            y += u.get(i, j) * r;
        }
        if i < snf.rank {
            if !y.mod_floor(&snf.diag[i]).is_zero() {
                return Ok(false);
            }
        } else if !y.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dense matrix over a prime field, row-major; the workhorse for rank,
/// kernel, and solve queries on small chain complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from column vectors (each of length `rows`).
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zero(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % field.modulus());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Matrix product `self * other` over the common field.
    pub fn multiply(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = FpMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot stack {} rows next to {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = FpMatrix::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// In-place reduction to reduced row echelon form; returns the pivot
    /// columns in ascending order. Deterministic: pivots are chosen top-down,
    /// left-to-right.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                let (a, b) = (self.get(r, j), self.get(pr, j));
                self.set(r, j, b);
                self.set(pr, j, a);
            }
            let inv = f
                .inverse(self.get(r, c))
                .expect("pivot is nonzero by construction");
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let factor = self.get(i, c);
                    for j in 0..self.cols {
                        let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// The rank over the field.
    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// Indices of the left-to-right greedy maximal independent column set
    /// (exactly the pivot columns of the reduced row echelon form).
    pub fn independent_column_indices(&self) -> Vec<usize> {
        self.clone().row_reduce()
    }

    /// A canonical kernel basis: one vector per free column of the reduced
    /// row echelon form, with 1 in the free coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut work = self.clone();
        let pivots = work.row_reduce();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut vec = vec![0u64; self.cols];
            vec[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                // x[pc] = -work[row][free]
                vec[pc] = f.neg(work.get(row, free));
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * x = rhs`, returning the particular solution with all
    /// free variables zero, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let f = self.field;
        let mut aug = FpMatrix::zero(f, self.rows, self.cols + 1);
        for (i, &r) in rhs.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, r % f.modulus());
        }
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols);
        }
        Some(x)
    }
}

/// Incrementally tracks the rank of a growing set of column vectors by
/// keeping an eliminated basis; used by rank-profile scans where columns
/// arrive one at a time.
#[derive(Clone, Debug)]
pub struct RankAccumulator {
    field: PrimeField,
    rows: usize,
    /// Eliminated basis vectors, each normalized to leading coefficient 1;
    /// `leads[k]` is the leading row of `basis[k]`, strictly increasing order
    /// is not required, but leads are pairwise distinct.
    basis: Vec<Vec<u64>>,
    leads: Vec<usize>,
}

impl RankAccumulator {
    pub fn new(field: PrimeField, rows: usize) -> Self {
        Self {
            field,
            rows,
            basis: Vec::new(),
            leads: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Eliminates `col` against the stored basis; stores the remainder and
    /// returns true when it is nonzero (the rank grew).
    pub fn insert(&mut self, mut col: Vec<u64>) -> bool {
        assert_eq!(col.len(), self.rows, "column length mismatch");
        let f = self.field;
        for (b, &lead) in self.basis.iter().zip(&self.leads) {
            let c = col[lead];
            if c != 0 {
                let factor = f.neg(c);
                for (x, y) in col.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(factor, *y));
                }
            }
        }
        let Some(lead) = col.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = f.inverse(col[lead]).expect("leading entry nonzero");
        for x in col.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.basis.push(col);
        self.leads.push(lead);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_construction_rejects_non_primes_and_range() {
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new((1 << 31) - 1).is_ok()); // 2^31 - 1 is prime
    }

    #[test]
    fn field_inverse_matches_brute_force_scan() {
        // 3 * x = 1 mod 7 has x = 5 by scanning 1..6.
        assert_eq!(f(7).inverse(3).unwrap(), 5);
        assert_eq!(f(2).inverse(1).unwrap(), 1);
        assert_eq!(
            f(5).inverse(0),
            Err(Error::DivisionByZero { p: 5 })
        );
    }

    #[test]
    fn field_axioms_on_sampled_triples() {
        for p in [2u64, 3, 5, 7, 1009] {
            let field = f(p);
            let samples: Vec<u64> = (0..p.min(12)).chain([p - 1, p / 2]).collect();
            for &a in &samples {
                for &b in &samples {
                    assert_eq!(field.mul(a, b), field.mul(b, a));
                    assert_eq!(field.add(a, b), field.add(b, a));
                    for &c in &samples {
                        assert_eq!(
                            field.mul(a, field.add(b, c)),
                            field.add(field.mul(a, b), field.mul(a, c)),
                            "distributivity failed mod {p}"
                        );
                        assert_eq!(
                            field.mul(field.mul(a, b), c),
                            field.mul(a, field.mul(b, c)),
                            "associativity failed mod {p}"
                        );
                    }
                    if b != 0 {
                        let inv = field.inverse(b).unwrap();
                        assert_eq!(field.mul(b, inv), 1, "inverse failed mod {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn add_scaled_column_matches_pinned_examples() {
        let p2 = f(2);
        // Self-cancel over F2.
        let c = SparseColumn::from_entries([(3, 1)], p2);
        assert!(add_scaled_column(&c, &c, 1, p2).is_empty());
        // Disjoint merge.
        let t = SparseColumn::from_entries([(1, 1), (3, 1)], p2);
        let s = SparseColumn::from_entries([(2, 1)], p2);
        assert_eq!(
            add_scaled_column(&t, &s, 1, p2).entries(),
            &[(1, 1), (2, 1), (3, 1)]
        );
        // 2 + 3*1 = 5 = 0 mod 5.
        let p5 = f(5);
        let t = SparseColumn::from_entries([(0, 2)], p5);
        let s = SparseColumn::from_entries([(0, 1)], p5);
        assert!(add_scaled_column(&t, &s, 3, p5).is_empty());
    }

    #[test]
    fn sparse_column_low_is_greatest_row() {
        let col = SparseColumn::from_entries([(4, 1), (1, 2), (7, 3)], f(5));
        assert_eq!(col.low(), Some(7));
        assert_eq!(col.low_coefficient(), Some(3));
        assert_eq!(SparseColumn::empty().low(), None);
    }

    proptest! {
        #[test]
        fn add_scaled_column_stays_canonical(
            a in proptest::collection::vec((0usize..30, 0u64..5), 0..12),
            b in proptest::collection::vec((0usize..30, 0u64..5), 0..12),
            lambda in 0u64..5,
        ) {
            let field = f(5);
            let t = SparseColumn::from_entries(a, field);
            let s = SparseColumn::from_entries(b, field);
            let out = add_scaled_column(&t, &s, lambda, field);
            // No zero coefficients, rows strictly ascending.
            prop_assert!(out.entries().iter().all(|&(_, c)| c != 0 && c < 5));
            prop_assert!(out.entries().windows(2).all(|w| w[0].0 < w[1].0));
            // Pointwise agreement with scalar arithmetic.
            for row in 0..30 {
                prop_assert_eq!(
                    out.get(row),
                    field.add(t.get(row), field.mul(lambda, s.get(row)))
                );
            }
        }
    }

    #[test]
    fn smith_normal_form_pinned_examples() {
        // Identity.
        let snf = smith_normal_form(&IntMatrix::from_i64(2, 2, &[1, 0, 0, 1]), false);
        assert_eq!(snf.diag, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(snf.rank, 2);
        // d1 = gcd of entries = 2, d1*d2 = |det| = 20.
        let snf = smith_normal_form(&IntMatrix::from_i64(2, 2, &[2, 4, -2, 6]), false);
        assert_eq!(snf.diag, vec![BigInt::from(2), BigInt::from(10)]);
        // Empty matrix.
        let snf = smith_normal_form(&IntMatrix::zero(0, 0), false);
        assert!(snf.diag.is_empty());
        assert_eq!(snf.rank, 0);
    }

    #[test]
    fn smith_normal_form_transforms_reproduce_diagonal() {
        let a = IntMatrix::from_i64(3, 2, &[2, 4, -2, 6, 8, 10]);
        let snf = smith_normal_form(&a, true);
        let u = snf.u.clone().unwrap();
        let v = snf.v.clone().unwrap();
        let prod = u.multiply(&a).unwrap().multiply(&v).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                let expected = if i == j && i < snf.rank {
                    snf.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(*prod.get(i, j), expected, "mismatch at ({i},{j})");
            }
        }
    }

    /// Determinant by cofactor expansion, for the minor-gcd oracle.
    fn det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return BigInt::from(1);
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let a = m.get(0, j);
            if a.is_zero() {
                continue;
            }
            let mut sub = IntMatrix::zero(n - 1, n - 1);
            for i in 1..n {
                let mut jj = 0;
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    sub.set(i - 1, jj, m.get(i, k).clone());
                    jj += 1;
                }
            }
            let term = a * det(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// gcd of all k x k minors (0 when all vanish).
    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        use itertools::Itertools;
        let mut g = BigInt::zero();
        for rows in (0..m.rows()).combinations(k) {
            for cols in (0..m.cols()).combinations(k) {
                let mut sub = IntMatrix::zero(k, k);
                for (si, &i) in rows.iter().enumerate() {
                    for (sj, &j) in cols.iter().enumerate() {
                        sub.set(si, sj, m.get(i, j).clone());
                    }
                }
                g = g.gcd(&det(&sub));
            }
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn smith_normal_form_matches_minor_gcd_oracle(
            rows in 1usize..=5,
            cols in 1usize..=5,
            seed in proptest::collection::vec(-9i64..=9, 25),
        ) {
            let entries: Vec<i64> = seed.iter().copied().take(rows * cols).collect();
            let a = IntMatrix::from_i64(rows, cols, &entries);
            let snf = smith_normal_form(&a, true);
            // Divisibility chain and positivity.
            for w in snf.diag.windows(2) {
                prop_assert!(w[1].mod_floor(&w[0]).is_zero());
            }
            prop_assert!(snf.diag.iter().all(|d| d.is_positive()));
            // Product of first k diagonal entries = gcd of k x k minors.
            let mut prod = BigInt::from(1);
            for k in 1..=rows.min(cols) {
                let g = minor_gcd(&a, k);
                if k <= snf.rank {
                    prod *= &snf.diag[k - 1];
                    prop_assert_eq!(&prod, &g, "k = {}", k);
                } else {
                    prop_assert!(g.is_zero(), "k = {} beyond rank must have zero minors", k);
                }
            }
            // Transforms reproduce the diagonal.
            let u = snf.u.clone().unwrap();
            let v = snf.v.clone().unwrap();
            let prod_m = u.multiply(&a).unwrap().multiply(&v).unwrap();
            for i in 0..rows {
                for j in 0..cols {
                    let expected = if i == j && i < snf.rank {
                        snf.diag[i].clone()
                    } else {
                        BigInt::zero()
                    };
                    prop_assert_eq!(prod_m.get(i, j), &expected);
                }
            }
        }
    }

    fn random_sparse_square(n: usize, field: PrimeField, seed: u64) -> SparseMatrix {
        // Tiny deterministic generator, strictly upper-triangular entries.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut cols = Vec::new();
        for j in 0..n {
            let mut entries = Vec::new();
            for i in 0..j {
                if next() % 3 == 0 {
                    entries.push((i, 1 + next() % (field.modulus() - 1).max(1)));
                }
            }
            cols.push(SparseColumn::from_entries(entries, field));
        }
        SparseMatrix::from_columns(n, cols).unwrap()
    }

    #[test]
    fn anti_transpose_is_an_involution_preserving_triangularity() {
        for seed in 0..20u64 {
            let a = random_sparse_square(9, f(5), seed);
            assert!(a.is_strictly_upper_triangular());
            let at = anti_transpose(&a).unwrap();
            assert!(at.is_strictly_upper_triangular());
            assert_eq!(anti_transpose(&at).unwrap(), a);
        }
    }

    #[test]
    fn anti_transpose_pinned_single_entry() {
        // n = 2: entry at (0, 1) value c moves to (1, 2).
        let field = f(7);
        let mut a = SparseMatrix::zero(3, 3);
        a.set_column(1, SparseColumn::from_entries([(0, 3)], field));
        let at = anti_transpose(&a).unwrap();
        assert_eq!(at.entry(1, 2), 3);
        let total: usize = at.columns().iter().map(|c| c.entries().len()).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn anti_transpose_rejects_non_square() {
        assert!(matches!(
            anti_transpose(&SparseMatrix::zero(2, 3)),
            Err(Error::ShapeError(_))
        ));
    }

    #[test]
    fn fp_matrix_rank_kernel_solve_roundtrip() {
        let field = f(5);
        // 2x3 matrix [[1,2,3],[0,1,4]] over F5: rank 2, kernel dim 1.
        let mut m = FpMatrix::zero(field, 2, 3);
        for (j, v) in [1, 2, 3].into_iter().enumerate() {
            m.set(0, j, v);
        }
        for (j, v) in [0, 1, 4].into_iter().enumerate() {
            m.set(1, j, v);
        }
        assert_eq!(m.rank(), 2);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for k in &kernel {
            for i in 0..2 {
                let mut acc = 0;
                for j in 0..3 {
                    acc = field.add(acc, field.mul(m.get(i, j), k[j]));
                }
                assert_eq!(acc, 0, "kernel vector not annihilated");
            }
        }
        // Solve against a known-consistent right-hand side.
        let x = [1u64, 2, 3];
        let mut rhs = [0u64; 2];
        for i in 0..2 {
            for j in 0..3 {
                rhs[i] = field.add(rhs[i], field.mul(m.get(i, j), x[j]));
            }
        }
        let sol = m.solve(&rhs).unwrap();
        for i in 0..2 {
            let mut acc = 0;
            for j in 0..3 {
                acc = field.add(acc, field.mul(m.get(i, j), sol[j]));
            }
            assert_eq!(acc, rhs[i]);
        }
        // Inconsistent system.
        let zero = FpMatrix::zero(field, 2, 2);
        assert!(zero.solve(&[1, 0]).is_none());
    }

    #[test]
    fn fp_matrix_multiply_pinned() {
        let field = f(5);
        // [[1,2],[3,4]] * [[0,1],[2,3]] = [[4,7],[8,15]] = [[4,2],[3,0]] mod 5.
        let a = FpMatrix::from_columns(field, 2, &[vec![1, 3], vec![2, 4]]);
        let b = FpMatrix::from_columns(field, 2, &[vec![0, 2], vec![1, 3]]);
        let c = a.multiply(&b).unwrap();
        assert_eq!(
            (c.get(0, 0), c.get(0, 1), c.get(1, 0), c.get(1, 1)),
            (4, 2, 3, 0)
        );
        assert!(a.multiply(&FpMatrix::zero(field, 3, 1)).is_err());
        assert!(FpMatrix::zero(field, 2, 2).is_zero());
        assert!(!a.is_zero());
    }

    #[test]
    fn rank_accumulator_matches_batch_rank() {
        let field = f(7);
        let cols = vec![
            vec![1, 2, 3, 0],
            vec![2, 4, 6, 0],
            vec![0, 1, 0, 5],
            vec![1, 3, 3, 5],
            vec![0, 0, 0, 0],
        ];
        let mut acc = RankAccumulator::new(field, 4);
        let mut ranks = Vec::new();
        for c in &cols {
            acc.insert(c.clone());
            ranks.push(acc.rank());
        }
        for (k, &r) in ranks.iter().enumerate() {
            let m = FpMatrix::from_columns(field, 4, &cols[..=k]);
            assert_eq!(r, m.rank(), "prefix {k}");
        }
    }

    #[test]
    fn integer_system_solvable_detects_membership() {
        // x * 2 = 4 solvable, = 3 not.
        let a = IntMatrix::from_i64(1, 1, &[2]);
        assert!(integer_system_solvable(&a, &[BigInt::from(4)]).unwrap());
        assert!(!integer_system_solvable(&a, &[BigInt::from(3)]).unwrap());
        // Zero matrix: only the zero vector is reachable.
        let z = IntMatrix::zero(2, 1);
        assert!(integer_system_solvable(&z, &[BigInt::zero(), BigInt::zero()]).unwrap());
        assert!(!integer_system_solvable(&z, &[BigInt::from(1), BigInt::zero()]).unwrap());
    }
}

//! Exact linear algebra over the rationals and the integers: echelon forms,
//! kernels, fraction-free determinants, Hermite normal forms, saturated integer
//! lattices of rational subspaces, LLL reduction and short-vector enumeration.
//!
//! Integer lattices are stored as lists of basis *row* vectors. Rational
//! subspaces are given by matrices whose *columns* span them.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{gcd_all, lcm_denominators, rat_int, Int, Rational};
use crate::error::{Error, Result};

pub type IntVector = Vec<Int>;

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: alloc::vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(RationalMatrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are `columns`, each of length `len`.
    pub fn from_columns(len: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = RationalMatrix::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    found: c.len(),
                });
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_int_columns(len: usize, columns: &[IntVector]) -> Result<Self> {
        let cols: Vec<Vec<Rational>> = columns
            .iter()
            .map(|c| c.iter().cloned().map(rat_int).collect())
            .collect();
        RationalMatrix::from_columns(len, &cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `v^t A`.
    pub fn vec_mul(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = alloc::vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        Ok(out)
    }

    /// `x^t A y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        Ok(dot(&self.vec_mul(x)?, y))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the right kernel `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> RationalMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = RationalMatrix::zeros(self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, Rational::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, -r.get(row, f).clone());
            }
        }
        k
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Fraction-free (Bareiss) elimination without pivoting. Returns the leading
/// principal minors `det A[..k, ..k]` for `k = 1, 2, ...`, stopping after the
/// first zero minor.
pub fn bareiss_leading_minors(a: &[IntVector]) -> Vec<Int> {
    let n = a.len();
    let mut m: Vec<IntVector> = a.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = Int::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &pivot - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Determinant of a square integer matrix by Bareiss elimination with row pivoting.
pub fn integer_determinant(a: &[IntVector]) -> Int {
    let n = a.len();
    let mut m: Vec<IntVector> = a.to_vec();
    let mut prev = Int::one();
    let mut sign = Int::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Int::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return Int::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Gram matrix `G_ij = <v_i, v_j>` of integer vectors.
pub fn integer_gram(vectors: &[IntVector]) -> Vec<IntVector> {
    vectors
        .iter()
        .map(|a| {
            vectors
                .iter()
                .map(|b| crate::arith::dot_int(a, b))
                .collect()
        })
        .collect()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is in echelon form with strictly increasing pivot columns,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped, so the length of the result is the rank.
pub fn hermite_normal_form(rows: &[IntVector]) -> Vec<IntVector> {
    let width = rows.first().map_or(0, Vec::len);
    let mut work: Vec<IntVector> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut out: Vec<IntVector> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for c in 0..width {
        // Euclid on column c among remaining rows until one nonzero entry is left.
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in work.iter().enumerate() {
                if r[c].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if work[b][c].abs() <= r[c].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            let pivot_row = work[b].clone();
            for (i, r) in work.iter_mut().enumerate() {
                if i == b || r[c].is_zero() {
                    continue;
                }
                let q = r[c].div_floor(&pivot_row[c]);
                for (x, p) in r.iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
            if work
                .iter()
                .enumerate()
                .all(|(i, r)| i == b || r[c].is_zero())
            {
                let mut row = work.swap_remove(b);
                if row[c].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                out.push(row);
                pivot_cols.push(c);
                break;
            }
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // Reduce entries above pivots.
    for k in 0..out.len() {
        let c = pivot_cols[k];
        let pivot = out[k].clone();
        for row in out.iter_mut().take(k) {
            let q = row[c].div_floor(&pivot[c]);
            if !q.is_zero() {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
        }
    }
    out
}

fn pivot_columns(hnf: &[IntVector]) -> Vec<usize> {
    hnf.iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).unwrap_or(r.len()))
        .collect()
}

/// gcd of all `k x k` minors of the `L x k` integer matrix whose columns are `columns`.
///
/// This equals `|det|` of the Hermite basis of the lattice generated by the
/// rows of the matrix (the `L` row vectors in `Z^k`).
pub fn minors_gcd(columns: &[IntVector]) -> Result<Int> {
    let k = columns.len();
    let len = columns.first().map_or(0, Vec::len);
    if columns.iter().any(|c| c.len() != len) {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: columns
                .iter()
                .map(Vec::len)
                .find(|&l| l != len)
                .unwrap_or(0),
        });
    }
    let rows: Vec<IntVector> = (0..len)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let h = hermite_normal_form(&rows);
    if h.len() < k {
        return Err(Error::RankDeficient {
            rank: h.len(),
            expected: k,
        });
    }
    Ok(h.iter().enumerate().map(|(i, r)| r[i].clone()).product())
}

/// Writes a nonzero rational vector as `gamma * w` with `w` a primitive integer
/// vector whose first nonzero entry is positive.
pub fn primitivize(v: &[Rational]) -> Result<(IntVector, Rational)> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let l = lcm_denominators(v);
    let scaled: IntVector = v
        .iter()
        .map(|x| (x * rat_int(l.clone())).to_integer())
        .collect();
    let g = gcd_all(&scaled);
    let mut w: IntVector = scaled.iter().map(|x| x / &g).collect();
    let mut gamma = Rational::new(g, l);
    if w.iter()
        .find(|x| !x.is_zero())
        .is_some_and(Signed::is_negative)
    {
        w.iter_mut().for_each(|x| *x = -x.clone());
        gamma = -gamma;
    }
    Ok((w, gamma))
}

/// Primitive integer vector in the direction of an integer vector.
pub fn primitive_part(v: &[Int]) -> Result<IntVector> {
    primitivize(&crate::arith::to_rationals(v)).map(|(w, _)| w)
}

/// A full-rank sublattice of `Z^ambient`, stored as basis row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    ambient: usize,
    basis: Vec<IntVector>,
}

impl IntegerLattice {
    pub fn new(ambient: usize, basis: Vec<IntVector>) -> Result<Self> {
        if let Some(bad) = basis.iter().find(|b| b.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: bad.len(),
            });
        }
        let rank = hermite_normal_form(&basis).len();
        if rank != basis.len() {
            return Err(Error::RankDeficient {
                rank,
                expected: basis.len(),
            });
        }
        Ok(IntegerLattice { ambient, basis })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<IntVector> {
        self.basis
    }

    /// Canonical form used for lattice equality.
    pub fn hnf(&self) -> Vec<IntVector> {
        hermite_normal_form(&self.basis)
    }

    pub fn same_lattice(&self, other: &IntegerLattice) -> bool {
        self.ambient == other.ambient && self.hnf() == other.hnf()
    }

    /// `det(B B^t)`, the squared covolume.
    pub fn gram_determinant(&self) -> Int {
        integer_determinant(&integer_gram(&self.basis))
    }

    /// Coordinates of `v` in the basis, if `v` lies in the rational span.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient {
            return None;
        }
        let n = self.rank();
        // Solve B^t x = v.
        let mut aug = RationalMatrix::zeros(self.ambient, n + 1);
        for (j, b) in self.basis.iter().enumerate() {
            for (i, x) in b.iter().enumerate() {
                aug.set(i, j, rat_int(x.clone()));
            }
        }
        for (i, x) in v.iter().enumerate() {
            aug.set(i, n, rat_int(x.clone()));
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&n) {
            return None;
        }
        let mut x = alloc::vec![Rational::zero(); n];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, n).clone();
        }
        Some(x)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v)
            .is_some_and(|x| x.iter().all(Rational::is_integer))
    }
}

/// Lattice `span_Q(columns of S) ∩ Z^L`, returned in Hermite normal form.
///
/// With `C` the column-wise integer scaling of `S` and `H` the Hermite basis of
/// the lattice generated by the rows of `C`, the columns of `C H^{-1}` are
/// integral and primitive, so they span the saturated lattice.
pub fn integer_lattice_basis(s: &RationalMatrix) -> Result<IntegerLattice> {
    let k = s.cols();
    let len = s.rows();
    if k == 0 {
        return IntegerLattice::new(len, Vec::new());
    }
    let rank = s.rank();
    if rank != k {
        return Err(Error::RankDeficient { rank, expected: k });
    }
    let columns: Vec<IntVector> = s
        .columns()
        .iter()
        .map(|c| primitivize(c).map(|(w, _)| w))
        .collect::<Result<_>>()?;
    let rows: Vec<IntVector> = (0..len)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let h = hermite_normal_form(&rows);
    let h_mat = RationalMatrix::from_rows(
        h.iter()
            .map(|r| r.iter().cloned().map(rat_int).collect())
            .collect(),
    )?;
    // Solve X H = C row by row: X = C H^{-1}, H upper triangular.
    let c_mat = RationalMatrix::from_int_columns(len, &columns)?;
    let h_inv = invert_upper_triangular(&h_mat);
    let x = c_mat.mul(&h_inv)?;
    let saturated: Vec<IntVector> = x
        .columns()
        .into_iter()
        .map(|col| {
            col.into_iter()
                .map(|q| {
                    debug_assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    IntegerLattice::new(len, hermite_normal_form(&saturated))
}

fn invert_upper_triangular(h: &RationalMatrix) -> RationalMatrix {
    let n = h.rows();
    let mut inv = RationalMatrix::zeros(n, n);
    for col in 0..n {
        // Solve H x = e_col by back substitution.
        for i in (0..n).rev() {
            let mut acc = if i == col {
                Rational::one()
            } else {
                Rational::zero()
            };
            for j in i + 1..n {
                acc -= h.get(i, j) * inv.get(j, col);
            }
            inv.set(i, col, acc / h.get(i, i));
        }
    }
    inv
}

fn round_rational(q: &Rational) -> Int {
    (q + Rational::new(Int::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}

struct GramSchmidt {
    mu: Vec<Vec<Rational>>,
    norms: Vec<Rational>,
}

fn gram_schmidt(basis: &[IntVector]) -> GramSchmidt {
    let n = basis.len();
    let vecs: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| b.iter().cloned().map(rat_int).collect())
        .collect();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = alloc::vec![alloc::vec![Rational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vecs[i].clone();
        for j in 0..i {
            let m = dot(&vecs[i], &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &m * s;
            }
            mu[i][j] = m;
        }
        mu[i][i] = Rational::one();
        norms.push(dot(&v, &v));
        star.push(v);
    }
    GramSchmidt { mu, norms }
}

/// LLL reduction with Lovász parameter `delta` in `(1/4, 1]`, exact arithmetic.
pub fn lll_reduce(lattice: &IntegerLattice, delta: &Rational) -> Result<IntegerLattice> {
    let quarter = Rational::new(Int::one(), BigInt::from(4));
    if *delta <= quarter || *delta > Rational::one() {
        return Err(Error::Domain(alloc::format!(
            "LLL parameter must lie in (1/4, 1], got {delta}"
        )));
    }
    let mut b = lattice.basis().to_vec();
    let n = b.len();
    if n <= 1 {
        return Ok(lattice.clone());
    }
    let mut gs = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        size_reduce(&mut b, &mut gs, k, k - 1);
        let mu = &gs.mu[k][k - 1];
        let lhs = gs.norms[k].clone();
        let rhs = (delta - mu * mu) * &gs.norms[k - 1];
        if lhs >= rhs {
            for j in (0..k - 1).rev() {
                size_reduce(&mut b, &mut gs, k, j);
            }
            k += 1;
        } else {
            b.swap(k, k - 1);
            gs = gram_schmidt(&b);
            k = k.saturating_sub(1).max(1);
        }
    }
    IntegerLattice::new(lattice.ambient(), b)
}

fn size_reduce(b: &mut [IntVector], gs: &mut GramSchmidt, k: usize, j: usize) {
    let q = round_rational(&gs.mu[k][j]);
    if q.is_zero() {
        return;
    }
    let bj = b[j].clone();
    for (x, y) in b[k].iter_mut().zip(&bj) {
        *x -= &q * y;
    }
    let qr = rat_int(q);
    for i in 0..=j {
        let v = &gs.mu[k][i] - &qr * &gs.mu[j][i];
        gs.mu[k][i] = v;
    }
}

/// Default cap on the number of search-box nodes visited by
/// [`enumerate_short_vectors`].
pub const DEFAULT_SEARCH_CAP: u64 = 4_000_000;

/// All nonzero lattice vectors with sup-norm at most `bound`, one of each
/// `±v` pair (first nonzero entry positive), sorted lexicographically.
///
/// The search walks the Hermite basis: the coordinate at the `i`-th pivot
/// column depends only on the first `i` basis coefficients, which bounds each
/// coefficient in turn.
pub fn enumerate_short_vectors(
    lattice: &IntegerLattice,
    bound: &Rational,
    cap: u64,
) -> Result<Vec<IntVector>> {
    if *bound < Rational::one() {
        return Err(Error::Domain(alloc::format!(
            "search bound must be at least 1, got {bound}"
        )));
    }
    let h = lattice.hnf();
    if h.is_empty() {
        return Ok(Vec::new());
    }
    let b = bound.floor().to_integer();
    let pivots = pivot_columns(&h);
    let mut volume = BigInt::one();
    for (row, &p) in h.iter().zip(&pivots) {
        volume *= (BigInt::from(2) * &b) / &row[p] + 1;
    }
    if volume > BigInt::from(cap) {
        return Err(Error::SearchCap {
            volume: alloc::format!("{volume}"),
            cap,
        });
    }
    let too_big = || Error::Domain("lattice entries too large for enumeration".into());
    let rows: Vec<Vec<i128>> = h
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().ok_or_else(too_big)).collect())
        .collect::<Result<_>>()?;
    let b = b.to_i128().ok_or_else(too_big)?;
    if rows.iter().flatten().any(|x| x.abs() > (1i128 << 60)) || b > (1i128 << 60) {
        return Err(too_big());
    }
    let mut search = BoxSearch {
        rows: &rows,
        pivots: &pivots,
        bound: b,
        found: Vec::new(),
    };
    let start = alloc::vec![0i128; lattice.ambient()];
    search.descend(0, &start, true);
    let mut found: Vec<IntVector> = search
        .found
        .into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect();
    found.sort();
    Ok(found)
}

struct BoxSearch<'a> {
    rows: &'a [Vec<i128>],
    pivots: &'a [usize],
    bound: i128,
    found: Vec<Vec<i128>>,
}

impl BoxSearch<'_> {
    fn descend(&mut self, level: usize, partial: &[i128], all_zero: bool) {
        if level == self.rows.len() {
            if !all_zero {
                self.found.push(partial.to_vec());
            }
            return;
        }
        let row = &self.rows[level];
        let p = self.pivots[level];
        let d = row[p];
        let lo = div_ceil_i128(-self.bound - partial[p], d);
        let hi = (self.bound - partial[p]).div_euclid(d);
        let lo = if all_zero { lo.max(0) } else { lo };
        let next_pivot = self.pivots.get(level + 1).copied().unwrap_or(partial.len());
        let mut v = partial.to_vec();
        for x in lo..=hi {
            for (vi, (pi, ri)) in v.iter_mut().zip(partial.iter().zip(row)) {
                *vi = pi + x * ri;
            }
            if v[p + 1..next_pivot].iter().any(|c| c.abs() > self.bound) {
                continue;
            }
            self.descend(level + 1, &v, all_zero && x == 0);
        }
    }
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn iv(v: &[i64]) -> IntVector {
        v.iter().map(|&x| int(x)).collect()
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return alloc::vec![Vec::new()];
        }
        if n < k {
            return Vec::new();
        }
        let mut out = combinations(n - 1, k);
        for mut c in combinations(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }

    /// gcd over explicit enumeration of all maximal minors.
    fn minors_gcd_enumerated(columns: &[IntVector]) -> Int {
        let k = columns.len();
        let len = columns[0].len();
        let mut g = Int::zero();
        for rows in combinations(len, k) {
            let sub: Vec<IntVector> = rows
                .iter()
                .map(|&r| columns.iter().map(|c| c[r].clone()).collect())
                .collect();
            g = g.gcd(&integer_determinant(&sub));
        }
        g
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(RationalMatrix::identity(3).kernel_basis().cols(), 0);
        let row = RationalMatrix::from_rows(alloc::vec![rv(&[1, 1])]).unwrap();
        let k = row.kernel_basis();
        assert_eq!(k.cols(), 1);
        let (w, _) = primitivize(&k.column(0)).unwrap();
        assert_eq!(w, iv(&[1, -1]));
    }

    #[test]
    fn kernel_of_random_full_rank_matrices() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = RationalMatrix::from_rows(
                (0..4)
                    .map(|_| {
                        (0..6)
                            .map(|_| rat(rng.random_range(-4..5), rng.random_range(1..3)))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let k = a.kernel_basis();
            assert_eq!(k.cols(), 6 - a.rank());
            assert!(a.mul(&k).unwrap().is_zero());
            assert_eq!(k.rank(), k.cols());
        }
    }

    #[test]
    fn determinants_agree() {
        let mut rng = StdRng::seed_from_u64(5);
        for n in 1..6 {
            let m: Vec<IntVector> = (0..n)
                .map(|_| (0..n).map(|_| int(rng.random_range(-6..7))).collect())
                .collect();
            let r = RationalMatrix::from_rows(
                m.iter()
                    .map(|row| row.iter().cloned().map(rat_int).collect())
                    .collect(),
            )
            .unwrap();
            assert_eq!(rat_int(integer_determinant(&m)), r.determinant().unwrap());
        }
    }

    #[test]
    fn leading_minors_of_diagonal() {
        let m = alloc::vec![iv(&[4, 0, 0]), iv(&[0, 2, 0]), iv(&[0, 0, 2])];
        assert_eq!(
            bareiss_leading_minors(&m),
            alloc::vec![int(4), int(8), int(16)]
        );
        let singular = alloc::vec![iv(&[1, 1]), iv(&[1, 1])];
        assert_eq!(
            bareiss_leading_minors(&singular),
            alloc::vec![int(1), int(0)]
        );
    }

    #[test]
    fn minors_gcd_examples() {
        assert_eq!(
            minors_gcd(&[iv(&[1, 0, 0]), iv(&[0, 1, 0])]).unwrap(),
            int(1)
        );
        assert_eq!(minors_gcd(&[iv(&[2, 4])]).unwrap(), int(2));
        assert_eq!(minors_gcd(&[iv(&[2, 0]), iv(&[0, 2])]).unwrap(), int(4));
        assert!(matches!(
            minors_gcd(&[iv(&[1, 2]), iv(&[2, 4])]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn minors_gcd_matches_enumeration() {
        let mut rng = StdRng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 60 {
            let len = rng.random_range(2..=8);
            let k = rng.random_range(1..=4usize.min(len));
            let cols: Vec<IntVector> = (0..k)
                .map(|_| (0..len).map(|_| int(rng.random_range(-5..6))).collect())
                .collect();
            let Ok(fast) = minors_gcd(&cols) else {
                continue;
            };
            assert_eq!(fast, minors_gcd_enumerated(&cols), "{cols:?}");
            checked += 1;
        }
    }

    #[test]
    fn hnf_is_canonical() {
        let a = alloc::vec![iv(&[2, 4, 6]), iv(&[1, 3, 5])];
        let b = alloc::vec![iv(&[1, 3, 5]), iv(&[3, 7, 11])];
        assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
        assert_eq!(
            hermite_normal_form(&a),
            alloc::vec![iv(&[1, 1, 1]), iv(&[0, 2, 4])]
        );
    }

    #[test]
    fn saturated_lattices() {
        let s = RationalMatrix::from_columns(2, &[alloc::vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert_eq!(integer_lattice_basis(&s).unwrap().basis(), &[iv(&[1, 1])]);
        let s = RationalMatrix::from_columns(2, &[rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        assert_eq!(
            integer_lattice_basis(&s).unwrap().basis(),
            &[iv(&[1, 0]), iv(&[0, 1])]
        );
        let s = RationalMatrix::from_columns(2, &[rv(&[2, 4])]).unwrap();
        assert_eq!(integer_lattice_basis(&s).unwrap().basis(), &[iv(&[1, 2])]);
        // span{(1,1,0),(1,-1,0)} contains (1,0,0) even though neither column sum does.
        let s = RationalMatrix::from_columns(3, &[rv(&[1, 1, 0]), rv(&[1, -1, 0])]).unwrap();
        assert_eq!(
            integer_lattice_basis(&s).unwrap().basis(),
            &[iv(&[1, 0, 0]), iv(&[0, 1, 0])]
        );
    }

    #[test]
    fn saturated_lattice_members_are_in_span_and_primitive_parts_stay_inside() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..30 {
            let len = rng.random_range(2..=7);
            let k = rng.random_range(1..=3usize.min(len));
            let cols: Vec<Vec<Rational>> = (0..k)
                .map(|_| {
                    (0..len)
                        .map(|_| rat(rng.random_range(-5..6), rng.random_range(1..4)))
                        .collect()
                })
                .collect();
            let s = RationalMatrix::from_columns(len, &cols).unwrap();
            if s.rank() != k {
                continue;
            }
            let lat = integer_lattice_basis(&s).unwrap();
            assert_eq!(lat.rank(), k);
            let spanning = IntegerLattice::new(len, lat.basis().to_vec()).unwrap();
            for c in &cols {
                let (w, _) = primitivize(c).unwrap();
                assert!(
                    spanning.contains(&w),
                    "primitive column must be a lattice member"
                );
            }
            for b in lat.basis() {
                let mut aug = s.columns();
                aug.push(b.iter().cloned().map(rat_int).collect());
                assert_eq!(RationalMatrix::from_columns(len, &aug).unwrap().rank(), k);
            }
            // Saturation: a random member divided by its content stays in the lattice.
            let coeffs: Vec<i64> = (0..k).map(|_| rng.random_range(-3..4)).collect();
            let mut member = alloc::vec![int(0); len];
            for (c, b) in coeffs.iter().zip(lat.basis()) {
                for (m, x) in member.iter_mut().zip(b) {
                    *m += int(*c) * x;
                }
            }
            if member.iter().any(|x| !x.is_zero()) {
                assert!(lat.contains(&primitive_part(&member).unwrap()));
            }
        }
    }

    #[test]
    fn lll_examples() {
        let lat = IntegerLattice::new(2, alloc::vec![iv(&[1, 0]), iv(&[10, 1])]).unwrap();
        let red = lll_reduce(&lat, &rat(3, 4)).unwrap();
        assert_eq!(red.basis(), &[iv(&[1, 0]), iv(&[0, 1])]);
        let orth = IntegerLattice::new(3, alloc::vec![iv(&[2, 0, 0]), iv(&[0, 3, 0])]).unwrap();
        assert_eq!(lll_reduce(&orth, &rat(3, 4)).unwrap(), orth);
        assert!(lll_reduce(&orth, &rat(1, 4)).is_err());
    }

    #[test]
    fn lll_preserves_lattice() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..25 {
            let basis: Vec<IntVector> = (0..4)
                .map(|_| (0..4).map(|_| int(rng.random_range(-30..31))).collect())
                .collect();
            let Ok(lat) = IntegerLattice::new(4, basis) else {
                continue;
            };
            let red = lll_reduce(&lat, &rat(3, 4)).unwrap();
            assert!(lat.same_lattice(&red));
            assert_eq!(lat.gram_determinant(), red.gram_determinant());
            // Lovász condition on the output.
            let gs = gram_schmidt(red.basis());
            for k in 1..4 {
                let mu = &gs.mu[k][k - 1];
                assert!(gs.norms[k] >= (rat(3, 4) - mu * mu) * &gs.norms[k - 1]);
                for j in 0..k {
                    assert!(gs.mu[k][j].abs() <= rat(1, 2));
                }
            }
        }
    }

    #[test]
    fn short_vector_examples() {
        let z2 = IntegerLattice::new(2, alloc::vec![iv(&[1, 0]), iv(&[0, 1])]).unwrap();
        let got = enumerate_short_vectors(&z2, &rat(1, 1), DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(
            got,
            alloc::vec![iv(&[0, 1]), iv(&[1, -1]), iv(&[1, 0]), iv(&[1, 1])]
        );
        let line = IntegerLattice::new(2, alloc::vec![iv(&[1, 2])]).unwrap();
        assert!(
            enumerate_short_vectors(&line, &rat(1, 1), DEFAULT_SEARCH_CAP)
                .unwrap()
                .is_empty()
        );
        assert!(matches!(
            enumerate_short_vectors(&z2, &rat(10_000, 1), 100),
            Err(Error::SearchCap { .. })
        ));
    }

    /// Every integer vector in the box, kept if it lies in the lattice.
    fn brute_force_box(lat: &IntegerLattice, bound: i64) -> Vec<IntVector> {
        let len = lat.ambient();
        let side = (2 * bound + 1) as u64;
        let mut out = Vec::new();
        for code in 0..side.pow(len as u32) {
            let mut c = code;
            let v: IntVector = (0..len)
                .map(|_| {
                    let x = (c % side) as i64 - bound;
                    c /= side;
                    int(x)
                })
                .collect();
            let first = v.iter().find(|x| !x.is_zero());
            if first.is_some_and(|x| x.is_positive()) && lat.contains(&v) {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn short_vectors_match_box_scan() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..20 {
            let k = rng.random_range(1..=3);
            let basis: Vec<IntVector> = (0..k)
                .map(|_| (0..3).map(|_| int(rng.random_range(-3..4))).collect())
                .collect();
            let Ok(lat) = IntegerLattice::new(3, basis) else {
                continue;
            };
            let bound = rng.random_range(1..=3);
            let got = enumerate_short_vectors(&lat, &rat(bound, 1), DEFAULT_SEARCH_CAP).unwrap();
            assert_eq!(got, brute_force_box(&lat, bound), "{lat:?}");
        }
    }

    #[test]
    fn primitivize_examples() {
        assert_eq!(
            primitivize(&[rat(1, 2), rat(1, 2)]).unwrap(),
            (iv(&[1, 1]), rat(1, 2))
        );
        assert_eq!(
            primitivize(&rv(&[-2, -4])).unwrap(),
            (iv(&[1, 2]), rat(-2, 1))
        );
        assert_eq!(
            primitivize(&[rat(0, 1), rat(3, 7), rat(6, 7)]).unwrap(),
            (iv(&[0, 1, 2]), rat(3, 7))
        );
        assert_eq!(primitivize(&rv(&[0, 0])), Err(Error::ZeroVector));
    }

    proptest! {
        #[test]
        fn primitivize_reconstructs(v in proptest::collection::vec((-20i64..21, 1i64..9), 1..6)) {
            let v: Vec<Rational> = v.into_iter().map(|(p, q)| rat(p, q)).collect();
            prop_assume!(v.iter().any(|x| !x.is_zero()));
            let (w, gamma) = primitivize(&v).unwrap();
            prop_assert_eq!(gcd_all(&w), int(1));
            prop_assert!(w.iter().find(|x| !x.is_zero()).unwrap().is_positive());
            for (x, y) in v.iter().zip(&w) {
                prop_assert_eq!(x, &(&gamma * rat_int(y.clone())));
            }
        }

        #[test]
        fn cauchy_schwarz_row_bound(len in 1usize..11, seed in 0u64..1000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let f: Vec<Rational> = (0..len).map(|_| rat(rng.random_range(-9..10), 1)).collect();
            let a = RationalMatrix::from_rows((0..len)
                .map(|_| (0..len).map(|_| rat(rng.random_range(-9..10), 1)).collect())
                .collect()).unwrap();
            let row = a.vec_mul(&f).unwrap();
            let lhs = dot(&row, &row);
            let hf = f.iter().map(|x| x.abs()).max().unwrap();
            let l = rat(len as i64, 1);
            let l6 = &l * &l * &l * &l * &l * &l;
            prop_assert!(lhs <= l6 * &hf * &hf * a.max_abs() * a.max_abs());
        }
    }
}

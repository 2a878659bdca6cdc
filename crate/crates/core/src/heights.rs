//! Heights of rational subspaces and of the hyperplanes they induce.
//!
//! `H(V) = D^{-1} sqrt(det(C^t C))` for an integer basis matrix `C` of `V`
//! and `D` the gcd of its maximal minors. Heights are irrational in general,
//! so they are carried as exact squares.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{norm_sq, rat_int, Int, Rational};
use crate::combinatorics::IndexBasis;
use crate::error::{Error, Result};
use crate::linalg::{
    integer_determinant, integer_gram, integer_lattice_basis, minors_gcd, primitivize, IntVector,
    IntegerLattice, RationalMatrix,
};
use crate::polynomial::Polynomial;

/// The square of a height.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SquaredHeight(Rational);

impl SquaredHeight {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::Domain(alloc::format!(
                "squared height must be nonnegative, got {value}"
            )));
        }
        Ok(SquaredHeight(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    /// Floating approximation of the height itself.
    pub fn height_f64(&self) -> f64 {
        libm::sqrt(crate::arith::to_f64(&self.0))
    }
}

impl fmt::Display for SquaredHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subspace of `Q^L`, given by a matrix whose columns form a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: RationalMatrix,
}

impl Subspace {
    /// Fails unless the columns of `basis` are linearly independent.
    pub fn new(basis: RationalMatrix) -> Result<Self> {
        let rank = basis.rank();
        if rank != basis.cols() {
            return Err(Error::RankDeficient {
                rank,
                expected: basis.cols(),
            });
        }
        Ok(Subspace { basis })
    }

    /// Span of arbitrary (possibly dependent) vectors of length `len`.
    pub fn span(len: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let m = RationalMatrix::from_columns(len, vectors)?;
        // Column space basis = pivot columns.
        let (_, pivots) = m.rref();
        let cols: Vec<Vec<Rational>> = pivots.iter().map(|&p| m.column(p)).collect();
        Subspace::new(RationalMatrix::from_columns(len, &cols)?)
    }

    pub fn from_int_vectors(len: usize, vectors: &[IntVector]) -> Result<Self> {
        Subspace::new(RationalMatrix::from_int_columns(len, vectors)?)
    }

    pub fn zero(len: usize) -> Self {
        Subspace {
            basis: RationalMatrix::zeros(len, 0),
        }
    }

    /// `{t : t_j = 0}` in `Q^len`.
    pub fn coordinate_hyperplane(j: usize, len: usize) -> Result<Self> {
        if j >= len {
            return Err(Error::IndexOutOfRange { index: j, len });
        }
        let cols: Vec<Vec<Rational>> = (0..len)
            .filter(|&i| i != j)
            .map(|i| {
                let mut e = alloc::vec![Rational::zero(); len];
                e[i] = Rational::from_integer(Int::from(1));
                e
            })
            .collect();
        Subspace::new(RationalMatrix::from_columns(len, &cols)?)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    /// `V ∩ Z^L`.
    pub fn lattice(&self) -> Result<IntegerLattice> {
        integer_lattice_basis(&self.basis)
    }

    /// Hermite normal form of `V ∩ Z^L`; equal for equal subspaces.
    pub fn fingerprint(&self) -> Result<Vec<IntVector>> {
        Ok(self.lattice()?.hnf())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let mut cols = self.basis_vectors();
        cols.push(v.to_vec());
        RationalMatrix::from_columns(self.ambient_dim(), &cols)
            .map(|m| m.rank() == self.dim())
            .unwrap_or(false)
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Maps coordinates `x` (in this basis) to the vector `C x`.
    pub fn combine(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.basis.mul_vec(x)
    }

    /// `{C x : x in ker K}` for a matrix `K` acting on basis coordinates.
    pub fn restrict_to_kernel(&self, k: &RationalMatrix) -> Result<Subspace> {
        let ker = k.kernel_basis();
        Subspace::new(self.basis.mul(&ker)?)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        // Solve C1 x = C2 y through the kernel of [C1 | -C2].
        let len = self.ambient_dim();
        let mut cols = self.basis_vectors();
        cols.extend(
            other
                .basis_vectors()
                .into_iter()
                .map(|c| c.into_iter().map(|v| -v).collect()),
        );
        let joint = RationalMatrix::from_columns(len, &cols)?;
        let ker = joint.kernel_basis();
        let n1 = self.dim();
        let images: Vec<Vec<Rational>> = ker
            .columns()
            .iter()
            .map(|k| self.combine(&k[..n1]))
            .collect::<Result<_>>()?;
        Subspace::span(len, &images)
    }
}

/// A subspace of `P^d_N`, expressed in coordinates of an ambient monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSubspace {
    ambient: IndexBasis,
    space: Subspace,
}

impl PolynomialSubspace {
    pub fn new(ambient: IndexBasis, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != ambient.len() {
            return Err(Error::DimensionMismatch {
                expected: ambient.len(),
                found: space.ambient_dim(),
            });
        }
        Ok(PolynomialSubspace { ambient, space })
    }

    /// Span of linearly independent polynomials, embedded in the monomial basis
    /// of their largest degree.
    pub fn from_polynomials(vars: usize, polys: &[Polynomial]) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::ZeroSubspace);
        }
        if let Some(p) = polys.iter().find(|p| p.vars() != vars) {
            return Err(Error::DimensionMismatch {
                expected: vars,
                found: p.vars(),
            });
        }
        let degree = polys.iter().map(Polynomial::degree).max().unwrap_or(0);
        let ambient = IndexBasis::new(degree, vars)?;
        let cols: Vec<Vec<Rational>> = polys
            .iter()
            .map(|p| p.coefficient_vector(&ambient))
            .collect::<Result<_>>()?;
        let space = Subspace::new(RationalMatrix::from_columns(ambient.len(), &cols)?)?;
        Ok(PolynomialSubspace { ambient, space })
    }

    pub fn ambient(&self) -> &IndexBasis {
        &self.ambient
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.space
            .basis_vectors()
            .iter()
            .map(|c| Polynomial::from_coefficients(&self.ambient, c).expect("lengths agree"))
            .collect()
    }

    /// The same subspace in the monomial basis of exactly its degree.
    pub fn truncated(&self) -> Result<PolynomialSubspace> {
        let d = subspace_degree(self)?;
        let target = IndexBasis::new(d, self.ambient.vars())?;
        let cols: Vec<Vec<Rational>> = self
            .polynomials()
            .iter()
            .map(|p| p.coefficient_vector(&target))
            .collect::<Result<_>>()?;
        PolynomialSubspace::new(
            target.clone(),
            Subspace::new(RationalMatrix::from_columns(target.len(), &cols)?)?,
        )
    }
}

/// Smallest `M` with `V ⊆ P^M_N`.
pub fn subspace_degree(v: &PolynomialSubspace) -> Result<u32> {
    if v.space.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let b = v.space.basis();
    Ok((0..b.rows())
        .filter(|&i| b.row(i).iter().any(|x| !x.is_zero()))
        .map(|i| v.ambient.indices()[i].weight())
        .max()
        .unwrap_or(0))
}

/// `H(V)^2 = det(C^t C) / D^2` with `C` the column-wise primitive integer
/// scaling of the basis matrix.
pub fn subspace_height(v: &Subspace) -> Result<SquaredHeight> {
    if v.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let columns: Vec<IntVector> = v
        .basis_vectors()
        .iter()
        .map(|c| primitivize(c).map(|(w, _)| w))
        .collect::<Result<_>>()?;
    let d = minors_gcd(&columns)?;
    let gram_det = integer_determinant(&integer_gram(&columns));
    SquaredHeight::new(Rational::new(gram_det.abs(), &d * &d))
}

/// Squared height of `U = {t : c_f^t A t = 0}`: the squared Euclidean norm of
/// the primitive integer normal vector proportional to `c_f^t A`.
pub fn dual_hyperplane_height(f: &[Int], a: &RationalMatrix) -> Result<SquaredHeight> {
    if f.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let cf: Vec<Rational> = f.iter().cloned().map(rat_int).collect();
    let row = a.vec_mul(&cf)?;
    if row.iter().all(Zero::is_zero) {
        return Err(Error::Degenerate);
    }
    let (w, _) = primitivize(&row)?;
    SquaredHeight::new(rat_int(norm_sq(&w)))
}

/// `T_j = {t : c_t(m_j) = 0}` inside the span of `basis`.
pub fn coordinate_hyperplane(j: usize, basis: &IndexBasis) -> Result<Subspace> {
    Subspace::coordinate_hyperplane(j, basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::combinatorics::MultiIndex;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn poly(vars: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_terms(vars, terms.iter().map(|(m, c)| (mi(m), rat(*c, 1)))).unwrap()
    }

    fn random_subspace(rng: &mut StdRng, len: usize, dim: usize) -> Option<Subspace> {
        let cols: Vec<Vec<Rational>> = (0..dim)
            .map(|_| {
                (0..len)
                    .map(|_| rat(rng.random_range(-4..5), rng.random_range(1..3)))
                    .collect()
            })
            .collect();
        Subspace::new(RationalMatrix::from_columns(len, &cols).ok()?).ok()
    }

    #[test]
    fn degrees() {
        let one = poly(2, &[(&[0, 0], 1)]);
        let x1 = poly(2, &[(&[1, 0], 1)]);
        let q = poly(2, &[(&[2, 0], 1), (&[0, 2], -3)]);
        let v = PolynomialSubspace::from_polynomials(2, &[one.clone(), x1]).unwrap();
        assert_eq!(subspace_degree(&v).unwrap(), 1);
        let v = PolynomialSubspace::from_polynomials(2, &[q]).unwrap();
        assert_eq!(subspace_degree(&v).unwrap(), 2);
        let v = PolynomialSubspace::from_polynomials(2, &[one]).unwrap();
        assert_eq!(subspace_degree(&v).unwrap(), 0);
        assert_eq!(
            PolynomialSubspace::from_polynomials(2, &[]),
            Err(Error::ZeroSubspace)
        );
    }

    #[test]
    fn truncation_drops_unused_monomials() {
        let big = IndexBasis::new(3, 2).unwrap();
        let f = poly(2, &[(&[1, 0], 2), (&[0, 0], 1)]);
        let col = f.coefficient_vector(&big).unwrap();
        let v = PolynomialSubspace::new(
            big.clone(),
            Subspace::new(RationalMatrix::from_columns(big.len(), &[col]).unwrap()).unwrap(),
        )
        .unwrap();
        let t = v.truncated().unwrap();
        assert_eq!(t.ambient().degree(), 1);
        assert_eq!(t.polynomials(), alloc::vec![f]);
    }

    #[test]
    fn height_examples() {
        let v = Subspace::new(
            RationalMatrix::from_columns(3, &[rv(&[1, 0, 0]), rv(&[0, 1, 0])]).unwrap(),
        )
        .unwrap();
        assert_eq!(subspace_height(&v).unwrap().value(), &rat(1, 1));
        let v = Subspace::new(RationalMatrix::from_columns(2, &[rv(&[2, 4])]).unwrap()).unwrap();
        assert_eq!(subspace_height(&v).unwrap().value(), &rat(5, 1));
        let v = Subspace::new(
            RationalMatrix::from_columns(3, &[rv(&[1, 1, 0]), rv(&[0, 1, 1])]).unwrap(),
        )
        .unwrap();
        assert_eq!(subspace_height(&v).unwrap().value(), &rat(3, 1));
        assert_eq!(
            subspace_height(&Subspace::zero(3)),
            Err(Error::ZeroSubspace)
        );
        assert!(matches!(
            Subspace::new(RationalMatrix::from_columns(2, &[rv(&[1, 2]), rv(&[2, 4])]).unwrap()),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn dual_heights() {
        let form = crate::gram::build_form(1, 2).unwrap().to_dense();
        let x1 = [int(0), int(0), int(1)];
        assert_eq!(
            dual_hyperplane_height(&x1, &form).unwrap().value(),
            &rat(1, 1)
        );
        let id = RationalMatrix::identity(3);
        assert_eq!(
            dual_hyperplane_height(&[int(1), int(0), int(0)], &id)
                .unwrap()
                .value(),
            &rat(1, 1)
        );
        let a = RationalMatrix::from_rows(alloc::vec![rv(&[2, 0]), rv(&[0, 3])]).unwrap();
        assert_eq!(
            dual_hyperplane_height(&[int(1), int(1)], &a)
                .unwrap()
                .value(),
            &rat(13, 1)
        );
        let zero = RationalMatrix::zeros(2, 2);
        assert_eq!(
            dual_hyperplane_height(&[int(1), int(1)], &zero),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn coordinate_hyperplanes_have_unit_height() {
        let basis = IndexBasis::new(1, 2).unwrap();
        let t0 = coordinate_hyperplane(0, &basis).unwrap();
        assert_eq!(
            t0.basis_vectors(),
            alloc::vec![rv(&[0, 1, 0]), rv(&[0, 0, 1])]
        );
        let basis = IndexBasis::new(2, 3).unwrap();
        for j in 0..basis.len() {
            let t = coordinate_hyperplane(j, &basis).unwrap();
            assert_eq!(t.dim(), basis.len() - 1);
            assert_eq!(subspace_height(&t).unwrap().value(), &rat(1, 1));
        }
        assert!(matches!(
            coordinate_hyperplane(basis.len(), &basis),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn height_is_basis_and_scale_invariant() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..20 {
            let len = rng.random_range(2..=7);
            let dim = rng.random_range(1..=3usize.min(len));
            let Some(v) = random_subspace(&mut rng, len, dim) else {
                continue;
            };
            let h = subspace_height(&v).unwrap();
            // Elementary unimodular column operation and a rational rescale.
            let mut cols = v.basis_vectors();
            if dim > 1 {
                let k = rat(rng.random_range(-3..4), 1);
                let c1 = cols[1].clone();
                for (x, y) in cols[0].iter_mut().zip(&c1) {
                    *x += &k * y;
                }
                cols.swap(0, 1);
            }
            let s = rat(rng.random_range(1..7), rng.random_range(1..7));
            cols[0].iter_mut().for_each(|x| *x *= &s);
            let w = Subspace::new(RationalMatrix::from_columns(len, &cols).unwrap()).unwrap();
            assert_eq!(subspace_height(&w).unwrap(), h);
            assert!(v.same_span(&w));
            assert_eq!(v.fingerprint().unwrap(), w.fingerprint().unwrap());
            // The height is the covolume of the saturated lattice.
            assert_eq!(h.value(), &rat_int(v.lattice().unwrap().gram_determinant()));
        }
    }

    #[test]
    fn intersection() {
        let a = Subspace::new(
            RationalMatrix::from_columns(3, &[rv(&[1, 0, 0]), rv(&[0, 1, 0])]).unwrap(),
        )
        .unwrap();
        let b = Subspace::new(
            RationalMatrix::from_columns(3, &[rv(&[0, 1, 0]), rv(&[0, 0, 1])]).unwrap(),
        )
        .unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&rv(&[0, 1, 0])));
    }

    #[test]
    fn intersection_height_inequality() {
        let mut rng = StdRng::seed_from_u64(43);
        let mut checked = 0;
        while checked < 25 {
            let len = rng.random_range(3..=6);
            let d1 = rng.random_range(2..len);
            let d2 = rng.random_range(len - d1 + 1..=len - 1);
            let (Some(u1), Some(u2)) = (
                random_subspace(&mut rng, len, d1),
                random_subspace(&mut rng, len, d2),
            ) else {
                continue;
            };
            let both = u1.intersect(&u2).unwrap();
            if both.is_zero() {
                continue;
            }
            let h = subspace_height(&both).unwrap();
            let bound = subspace_height(&u1).unwrap().into_value()
                * subspace_height(&u2).unwrap().into_value();
            assert!(*h.value() <= bound);
            checked += 1;
        }
    }

    #[test]
    fn dual_height_matches_kernel_height() {
        let mut rng = StdRng::seed_from_u64(47);
        for _ in 0..30 {
            let len = rng.random_range(2..=6);
            let f: IntVector = (0..len).map(|_| int(rng.random_range(-4..5))).collect();
            let a = RationalMatrix::from_rows(
                (0..len)
                    .map(|_| {
                        (0..len)
                            .map(|_| rat(rng.random_range(-3..4), rng.random_range(1..3)))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let Ok(h) = dual_hyperplane_height(&f, &a) else {
                continue;
            };
            let cf: Vec<Rational> = f.iter().cloned().map(rat_int).collect();
            let row = RationalMatrix::from_rows(alloc::vec![a.vec_mul(&cf).unwrap()]).unwrap();
            let u = Subspace::new(row.kernel_basis()).unwrap();
            if u.is_zero() {
                continue;
            }
            assert_eq!(subspace_height(&u).unwrap(), h);
        }
    }
}

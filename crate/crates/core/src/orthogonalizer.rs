//! Small-height bases and orthogonal bases of rational subspaces.
//!
//! [`siegel_basis`] finds integer vectors `f_1..f_n` spanning `V` with
//! `prod H(f_i) <= H(V)`, where `H(f)` is the sup-norm. [`orthogonal_basis`]
//! then peels off one short vector at a time, passing to its orthogonal
//! complement inside `V`, and records everything needed to re-check the
//! result in an [`OrthogonalCertificate`].

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::{rat_int, sup_norm, to_rationals, Int, Rational};
use crate::combinatorics::IndexBasis;
use crate::error::{Error, Result};
use crate::gram::build_form;
use crate::heights::{subspace_height, PolynomialSubspace, SquaredHeight, Subspace};
use crate::linalg::{
    enumerate_short_vectors, lll_reduce, primitive_part, IntVector, IntegerLattice, RationalMatrix,
    DEFAULT_SEARCH_CAP,
};
use crate::polynomial::Polynomial;

/// How a [`SiegelBasis`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiegelMethod {
    /// LLL-reduced lattice basis already met the bound.
    Reduction,
    /// Successive minima found by exhaustive search.
    Enumeration,
    /// Search caps were hit; the vectors span `V` but the bound is unchecked or false.
    Uncertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelBasis {
    /// Primitive integer vectors, sorted by height then lexicographically.
    pub vectors: Vec<IntVector>,
    pub heights: Vec<Int>,
    pub subspace_height: SquaredHeight,
    pub method: SiegelMethod,
}

impl SiegelBasis {
    pub fn certified(&self) -> bool {
        self.method != SiegelMethod::Uncertified
    }

    /// `prod H(f_i)^2`.
    pub fn product_sq(&self) -> Int {
        self.heights.iter().map(|h| h * h).product()
    }

    pub fn bound_holds(&self) -> bool {
        rat_int(self.product_sq()) <= *self.subspace_height.value()
    }
}

/// A basis of `V` made of integer vectors with `prod H(f_i)^2 <= H(V)^2`,
/// using the default enumeration cap.
pub fn siegel_basis(v: &Subspace) -> Result<SiegelBasis> {
    siegel_basis_capped(v, DEFAULT_SEARCH_CAP)
}

pub fn siegel_basis_capped(v: &Subspace, cap: u64) -> Result<SiegelBasis> {
    if v.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let hv = subspace_height(v)?;
    let lattice = v.lattice()?;
    let reduced = lll_reduce(&lattice, &Rational::new(Int::from(99), Int::from(100)))?;
    let mut lll: Vec<IntVector> = reduced
        .into_basis()
        .into_iter()
        .map(sign_normalized)
        .collect();
    lll.sort_by(|a, b| height_key(a).cmp(&height_key(b)));
    let candidate = make_basis(lll, hv.clone(), SiegelMethod::Reduction);
    if candidate.bound_holds() {
        return Ok(candidate);
    }

    if let Some(found) = successive_minima(&lattice, &hv, cap)? {
        let basis = make_basis(found, hv, SiegelMethod::Enumeration);
        if basis.bound_holds() {
            return Ok(basis);
        }
    }
    Ok(SiegelBasis {
        method: SiegelMethod::Uncertified,
        ..candidate
    })
}

/// Vectors realizing the successive minima of the lattice for the sup-norm,
/// or `None` if the search budget runs out first. Their heights multiply to at
/// most `H(V)`.
fn successive_minima(
    lattice: &IntegerLattice,
    hv: &SquaredHeight,
    cap: u64,
) -> Result<Option<Vec<IntVector>>> {
    let n = lattice.rank();
    // lambda_n <= H(V) because every lambda_i >= 1.
    let limit = crate::arith::floor_sqrt(hv.value()).max(Int::one());
    let mut bound = Int::one();
    loop {
        let b = if bound > limit {
            limit.clone()
        } else {
            bound.clone()
        };
        let found = match enumerate_short_vectors(lattice, &rat_int(b.clone()), cap) {
            Ok(found) => found,
            Err(Error::SearchCap { .. }) | Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let picked = greedy_independent(found, n);
        if picked.len() == n {
            return Ok(Some(picked));
        }
        if b >= limit {
            return Ok(None);
        }
        bound *= 2;
    }
}

fn make_basis(vectors: Vec<IntVector>, hv: SquaredHeight, method: SiegelMethod) -> SiegelBasis {
    let heights = vectors.iter().map(|f| sup_norm(f)).collect();
    SiegelBasis {
        vectors,
        heights,
        subspace_height: hv,
        method,
    }
}

fn height_key(v: &IntVector) -> (Int, &IntVector) {
    (sup_norm(v), v)
}

fn sign_normalized(v: IntVector) -> IntVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Walks `vectors` in (height, lex) order and keeps each one independent of
/// those already kept.
fn greedy_independent(mut vectors: Vec<IntVector>, n: usize) -> Vec<IntVector> {
    vectors.sort_by(|a, b| height_key(a).cmp(&height_key(b)));
    let mut echelon = Echelon::default();
    let mut picked = Vec::with_capacity(n);
    for v in vectors {
        if picked.len() == n {
            break;
        }
        if echelon.insert(&to_rationals(&v)) {
            picked.push(v);
        }
    }
    picked
}

#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if !r[*p].is_zero() {
                let f = r[*p].clone() / &row[*p];
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

fn check_form(v: &Subspace, b: &RationalMatrix) -> Result<()> {
    if b.rows() != b.cols() || b.rows() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: v.ambient_dim(),
            found: b.rows(),
        });
    }
    if !b.is_symmetric() {
        return Err(Error::Domain(
            "bilinear form matrix is not symmetric".into(),
        ));
    }
    Ok(())
}

/// `{t in V : B(t, v) = 0 for all v in V}`, the kernel of `C^t B C`.
pub fn radical(v: &Subspace, b: &RationalMatrix) -> Result<Subspace> {
    check_form(v, b)?;
    if v.is_zero() {
        return Ok(v.clone());
    }
    let c = v.basis();
    let restricted = c.transpose().mul(b)?.mul(c)?;
    v.restrict_to_kernel(&restricted)
}

fn form_value(b: &RationalMatrix, x: &[Int], y: &[Int]) -> Rational {
    b.bilinear(&to_rationals(x), &to_rationals(y))
        .expect("vector lengths checked against the form")
}

/// Orthogonal basis of `V` together with the data needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalCertificate {
    /// Hermite normal form of `V ∩ Z^L`.
    pub fingerprint: Vec<IntVector>,
    /// Primitive integer vectors `g_1..g_n`.
    pub vectors: Vec<IntVector>,
    /// `B(g_i, g_j)`.
    pub form_values: Vec<Vec<Rational>>,
    /// `H(g_i)`.
    pub heights: Vec<Int>,
    pub subspace_height: SquaredHeight,
    /// Largest absolute entry of the form matrix.
    pub form_height: Rational,
    /// Length `L` of the coefficient vectors.
    pub ambient_len: usize,
    /// `prod H(g_i)^2`.
    pub product_sq: Int,
    /// `(L^3 H(B))^{n(n+1)} H(V)^{2n}`.
    pub squared_bound: Rational,
    /// Dimension of the radical of `V` under `B`.
    pub radical_dim: usize,
    /// False if some Siegel step ran out of search budget.
    pub siegel_certified: bool,
    pub bound_holds: bool,
}

impl OrthogonalCertificate {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `(L^3 H)^{n(n+1)} * h^n`, with `h` the squared subspace height.
pub fn squared_height_bound(
    len: usize,
    form_height: &Rational,
    n: usize,
    hv: &SquaredHeight,
) -> Rational {
    let l3 = rat_int(Int::from(len).pow(3u32));
    let base = l3 * form_height;
    pow(&base, n * (n + 1)) * pow(hv.value(), n)
}

fn pow(q: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * q)
}

/// Orthogonal basis of `V` for the symmetric form with matrix `b`.
pub fn orthogonal_basis(v: &Subspace, b: &RationalMatrix) -> Result<OrthogonalCertificate> {
    orthogonal_basis_capped(v, b, DEFAULT_SEARCH_CAP)
}

pub fn orthogonal_basis_capped(
    v: &Subspace,
    b: &RationalMatrix,
    cap: u64,
) -> Result<OrthogonalCertificate> {
    check_form(v, b)?;
    if v.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let radical_dim = radical(v, b)?.dim();
    let mut vectors: Vec<IntVector> = Vec::with_capacity(v.dim());
    let mut siegel_certified = true;
    let mut current = v.clone();
    while !current.is_zero() {
        let (f1, next, certified) = split_off(&current, b, cap)?;
        siegel_certified &= certified;
        vectors.push(f1);
        current = next;
    }
    Ok(assemble(v, b, vectors, radical_dim, siegel_certified))
}

/// One step of the recursion: a short vector `f_1` of `V` and an
/// `(n-1)`-dimensional subspace of `V`, not containing `f_1`, that is
/// `B`-orthogonal to it.
fn split_off(v: &Subspace, b: &RationalMatrix, cap: u64) -> Result<(IntVector, Subspace, bool)> {
    if v.dim() == 1 {
        let (g, _) = crate::linalg::primitivize(&v.basis_vectors()[0])?;
        return Ok((g, Subspace::zero(v.ambient_dim()), true));
    }
    let rad = radical(v, b)?;
    if !rad.is_zero() {
        // A radical vector is orthogonal to all of V; cut V by a coordinate
        // hyperplane that misses it.
        let s = siegel_basis_capped(&rad, cap)?;
        let f1 = s.vectors[0].clone();
        let j = f1
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero vector");
        let row = RationalMatrix::from_rows(alloc::vec![v.basis().row(j).to_vec()])?;
        return Ok((f1, v.restrict_to_kernel(&row)?, s.certified()));
    }
    let s = siegel_basis_capped(v, cap)?;
    let mut order: Vec<(Int, bool, &IntVector)> = s
        .vectors
        .iter()
        .map(|f| (sup_norm(f), form_value(b, f, f).is_zero(), f))
        .collect();
    order.sort();
    let f1 = match order.iter().find(|(_, isotropic, _)| !isotropic) {
        Some((_, _, f)) => (*f).clone(),
        None => {
            // Everything isotropic: B(f_a + f_b, f_a + f_b) = 2 B(f_a, f_b).
            let mut sum = None;
            'outer: for (i, (_, _, fa)) in order.iter().enumerate() {
                for (_, _, fb) in &order[i + 1..] {
                    if !form_value(b, fa, fb).is_zero() {
                        let w: IntVector = fa.iter().zip(fb.iter()).map(|(x, y)| x + y).collect();
                        sum = Some(sign_normalized(primitive_part(&w)?));
                        break 'outer;
                    }
                }
            }
            sum.expect("a form vanishing on a basis of V makes V its own radical")
        }
    };
    let w = b.vec_mul(&to_rationals(&f1))?;
    let row = RationalMatrix::from_rows(alloc::vec![v.basis().vec_mul(&w)?])?;
    Ok((f1, v.restrict_to_kernel(&row)?, s.certified()))
}

fn assemble(
    v: &Subspace,
    b: &RationalMatrix,
    vectors: Vec<IntVector>,
    radical_dim: usize,
    siegel_certified: bool,
) -> OrthogonalCertificate {
    let fingerprint = v.fingerprint().expect("subspace has full column rank");
    let hv = subspace_height(v).expect("nonzero subspace");
    let form_values = vectors
        .iter()
        .map(|x| vectors.iter().map(|y| form_value(b, x, y)).collect())
        .collect();
    let heights: Vec<Int> = vectors.iter().map(|g| sup_norm(g)).collect();
    let product_sq: Int = heights.iter().map(|h| h * h).product();
    let form_height = b.max_abs();
    let squared_bound = squared_height_bound(b.rows(), &form_height, vectors.len(), &hv);
    let bound_holds = rat_int(product_sq.clone()) <= squared_bound;
    OrthogonalCertificate {
        fingerprint,
        vectors,
        form_values,
        heights,
        subspace_height: hv,
        form_height,
        ambient_len: b.rows(),
        product_sq,
        squared_bound,
        radical_dim,
        siegel_certified,
        bound_holds,
    }
}

/// Orthogonal basis of a polynomial subspace for the sphere inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereOrthogonalBasis {
    /// Monomial basis of `P^d_N` with `d` the degree of `V`.
    pub ambient: IndexBasis,
    pub certificate: OrthogonalCertificate,
}

impl SphereOrthogonalBasis {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.certificate
            .vectors
            .iter()
            .map(|g| {
                Polynomial::from_coefficients(&self.ambient, &to_rationals(g))
                    .expect("lengths agree")
            })
            .collect()
    }
}

/// Orthogonal basis for `<F, G>`, computed in the monomial basis of exactly
/// the degree of `V`.
pub fn orthogonal_basis_sphere(v: &PolynomialSubspace) -> Result<SphereOrthogonalBasis> {
    orthogonal_basis_sphere_capped(v, DEFAULT_SEARCH_CAP)
}

pub fn orthogonal_basis_sphere_capped(
    v: &PolynomialSubspace,
    cap: u64,
) -> Result<SphereOrthogonalBasis> {
    let t = v.truncated()?;
    let form = build_form(t.ambient().degree(), t.ambient().vars())?.to_dense();
    let certificate = orthogonal_basis_capped(t.space(), &form, cap)?;
    Ok(SphereOrthogonalBasis {
        ambient: t.ambient().clone(),
        certificate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CertificateCheck {
    /// As many vectors as `dim V`.
    Count,
    /// Every vector is a primitive integer vector.
    Primitive,
    /// The vectors span `V` (same saturated lattice).
    Span,
    /// `B(g_i, g_j) = 0` for `i != j`.
    Orthogonality,
    /// Stored heights, form values and bound agree with recomputation.
    StoredValues,
    /// `prod H(g_i)^2` is at most the recomputed bound.
    Bound,
}

impl CertificateCheck {
    pub fn name(self) -> &'static str {
        match self {
            CertificateCheck::Count => "count",
            CertificateCheck::Primitive => "primitive",
            CertificateCheck::Span => "span",
            CertificateCheck::Orthogonality => "orthogonality",
            CertificateCheck::StoredValues => "stored_values",
            CertificateCheck::Bound => "bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub results: Vec<(CertificateCheck, bool)>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<CertificateCheck> {
        self.results
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(c, _)| *c)
            .collect()
    }
}

/// Rechecks a certificate against `V` and `B` from scratch.
pub fn verify_certificate(
    cert: &OrthogonalCertificate,
    v: &Subspace,
    b: &RationalMatrix,
) -> CertificateReport {
    let mut results = Vec::new();
    let len_ok = check_form(v, b).is_ok()
        && !v.is_zero()
        && cert.vectors.iter().all(|g| g.len() == v.ambient_dim());
    if !len_ok {
        for c in [
            CertificateCheck::Count,
            CertificateCheck::Primitive,
            CertificateCheck::Span,
            CertificateCheck::Orthogonality,
            CertificateCheck::StoredValues,
            CertificateCheck::Bound,
        ] {
            results.push((c, false));
        }
        return CertificateReport { results };
    }
    let g = &cert.vectors;
    let n = g.len();
    results.push((CertificateCheck::Count, n == v.dim()));

    let primitive = g.iter().all(|x| {
        x.iter()
            .fold(Int::zero(), |acc, y| num_integer::Integer::gcd(&acc, y))
            .is_one()
    });
    results.push((CertificateCheck::Primitive, primitive));

    let target = v.fingerprint().ok();
    let spanned = Subspace::from_int_vectors(v.ambient_dim(), g)
        .ok()
        .and_then(|s| s.fingerprint().ok());
    let span_ok =
        target.is_some() && spanned == target && target.as_ref() == Some(&cert.fingerprint);
    results.push((CertificateCheck::Span, span_ok));

    let values: Vec<Vec<Rational>> = g
        .iter()
        .map(|x| g.iter().map(|y| form_value(b, x, y)).collect())
        .collect();
    let orthogonal = (0..n).all(|i| (0..n).all(|j| i == j || values[i][j].is_zero()));
    results.push((CertificateCheck::Orthogonality, orthogonal));

    let heights: Vec<Int> = g.iter().map(|x| sup_norm(x)).collect();
    let product_sq: Int = heights.iter().map(|h| h * h).product();
    let hv = subspace_height(v).expect("nonzero subspace");
    let form_height = b.max_abs();
    let bound = squared_height_bound(b.rows(), &form_height, n, &hv);
    let holds = rat_int(product_sq.clone()) <= bound;
    let stored = cert.heights == heights
        && cert.form_values == values
        && cert.product_sq == product_sq
        && cert.subspace_height == hv
        && cert.form_height == form_height
        && cert.ambient_len == b.rows()
        && cert.squared_bound == bound
        && cert.bound_holds == holds;
    results.push((CertificateCheck::StoredValues, stored));
    results.push((CertificateCheck::Bound, holds));
    CertificateReport { results }
}

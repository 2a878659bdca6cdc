//! Spherical design checks.
//!
//! A finite `S` on the unit sphere is an `M`-design iff for every `m` with
//! `w(m) <= M` the power sum `sum_j x_j^m` equals `|S| P(m/2)` when every
//! exponent is even, and `0` otherwise.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{to_f64, Rational};
use crate::combinatorics::{IndexBasis, MultiIndex};
use crate::error::{Error, Result};
use crate::moments::{monomial_f64, normalized_monomial_moment};
use crate::polynomial::Polynomial;

/// Default tolerance on `|sum x_i^2 - 1|` for float points.
pub const DEFAULT_SPHERE_TOL: f64 = 1e-12;
/// Default absolute tolerance on each residual in float mode.
pub const DEFAULT_DESIGN_TOL: f64 = 1e-9;
/// Largest dimension accepted for the hypercube configuration.
pub const MAX_HYPERCUBE_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// A coordinate or a computed quantity in either mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => to_f64(q),
            Value::Float(x) => *x,
        }
    }

    pub fn abs(&self) -> Value {
        match self {
            Value::Exact(q) => Value::Exact(q.abs()),
            Value::Float(x) => Value::Float(x.abs()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Float(x) => *x == 0.0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Float(x) => write!(f, "{x:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Coordinates {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

/// Points on the unit sphere in `R^N`, all exact or all floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    vars: usize,
    coords: Coordinates,
}

impl PointSet {
    pub fn exact(vars: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        check_shape(vars, points.iter().map(Vec::len))?;
        for (i, p) in points.iter().enumerate() {
            let norm: Rational = p.iter().map(|x| x * x).sum();
            if !norm.is_one() {
                return Err(Error::OffSphere {
                    point: i,
                    defect: (norm - Rational::one()).to_string(),
                });
            }
        }
        Ok(PointSet {
            vars,
            coords: Coordinates::Exact(points),
        })
    }

    pub fn float(vars: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::float_with_tol(vars, points, DEFAULT_SPHERE_TOL)
    }

    pub fn float_with_tol(vars: usize, points: Vec<Vec<f64>>, sphere_tol: f64) -> Result<Self> {
        check_shape(vars, points.iter().map(Vec::len))?;
        for (i, p) in points.iter().enumerate() {
            let defect = p.iter().map(|x| x * x).sum::<f64>() - 1.0;
            if !within(defect, sphere_tol) {
                return Err(Error::OffSphere {
                    point: i,
                    defect: alloc::format!("{defect:e}"),
                });
            }
        }
        Ok(PointSet {
            vars,
            coords: Coordinates::Float(points),
        })
    }

    /// Builds a set from per-coordinate values, rejecting a mix of modes.
    pub fn from_values(vars: usize, points: Vec<Vec<Value>>) -> Result<Self> {
        let exact = points
            .iter()
            .flatten()
            .filter(|v| matches!(v, Value::Exact(_)))
            .count();
        let total: usize = points.iter().map(Vec::len).sum();
        if exact == total {
            let pts = points
                .into_iter()
                .map(|p| {
                    p.into_iter()
                        .map(|v| match v {
                            Value::Exact(q) => q,
                            Value::Float(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            PointSet::exact(vars, pts)
        } else if exact == 0 {
            let pts = points
                .into_iter()
                .map(|p| p.iter().map(Value::to_f64).collect())
                .collect();
            PointSet::float(vars, pts)
        } else {
            Err(Error::MixedMode)
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coordinates::Exact(p) => p.len(),
            Coordinates::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self.coords {
            Coordinates::Exact(_) => Mode::Exact,
            Coordinates::Float(_) => Mode::Float,
        }
    }

    pub fn point(&self, i: usize) -> Vec<Value> {
        match &self.coords {
            Coordinates::Exact(p) => p[i].iter().cloned().map(Value::Exact).collect(),
            Coordinates::Float(p) => p[i].iter().copied().map(Value::Float).collect(),
        }
    }

    /// Applies `x -> (s_0 x_{perm[0]}, ..., s_{N-1} x_{perm[N-1]})` with signs `s_i = ±1`.
    pub fn signed_permutation(&self, perm: &[usize], negate: &[bool]) -> Result<PointSet> {
        let n = self.vars;
        let mut seen = alloc::vec![false; n];
        if perm.len() != n
            || negate.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || core::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Domain(
                "not a signed permutation of the coordinates".into(),
            ));
        }
        let coords = match &self.coords {
            Coordinates::Exact(pts) => Coordinates::Exact(
                pts.iter()
                    .map(|x| {
                        (0..n)
                            .map(|i| {
                                if negate[i] {
                                    -x[perm[i]].clone()
                                } else {
                                    x[perm[i]].clone()
                                }
                            })
                            .collect()
                    })
                    .collect(),
            ),
            Coordinates::Float(pts) => Coordinates::Float(
                pts.iter()
                    .map(|x| {
                        (0..n)
                            .map(|i| if negate[i] { -x[perm[i]] } else { x[perm[i]] })
                            .collect()
                    })
                    .collect(),
            ),
        };
        Ok(PointSet { vars: n, coords })
    }

    /// `sum_j x_j^m`.
    pub fn power_sum(&self, m: &MultiIndex) -> Value {
        match &self.coords {
            Coordinates::Exact(pts) => {
                Value::Exact(pts.iter().map(|x| exact_monomial(x, m.exponents())).sum())
            }
            Coordinates::Float(pts) => {
                Value::Float(pts.iter().map(|x| monomial_f64(x, m.exponents())).sum())
            }
        }
    }

    /// `(1/|S|) sum_j F(x_j)`.
    pub fn average(&self, f: &Polynomial) -> Result<Value> {
        if f.vars() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                found: f.vars(),
            });
        }
        let k = self.len();
        Ok(match &self.coords {
            Coordinates::Exact(pts) => {
                let mut acc = Rational::zero();
                for x in pts {
                    acc += f.evaluate(x)?;
                }
                Value::Exact(acc / Rational::from_integer(k.into()))
            }
            Coordinates::Float(pts) => {
                let mut acc = 0.0;
                for x in pts {
                    acc += f.evaluate_f64(x)?;
                }
                Value::Float(acc / k as f64)
            }
        })
    }
}

/// `|x| <= tol`, false for NaN.
fn within(x: f64, tol: f64) -> bool {
    x.abs() <= tol
}

fn check_shape(vars: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    if vars < 2 {
        return Err(Error::Domain(alloc::format!(
            "ambient dimension must be at least 2, got {vars}"
        )));
    }
    let mut count = 0;
    for len in lens {
        if len != vars {
            return Err(Error::DimensionMismatch {
                expected: vars,
                found: len,
            });
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::Domain("point set is empty".into()));
    }
    Ok(())
}

fn exact_monomial(x: &[Rational], m: &[u32]) -> Rational {
    x.iter().zip(m).fold(Rational::one(), |acc, (xi, &e)| {
        acc * num_traits::pow(xi.clone(), e as usize)
    })
}

/// Outcome of the design criterion at one strength.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignReport {
    pub strength: u32,
    pub mode: Mode,
    /// Residual tolerance; `None` in exact mode.
    pub tol: Option<f64>,
    /// Every index of `M(M, N)` in lexicographic order with its residual.
    pub residuals: Vec<(MultiIndex, Value)>,
    pub failing: Vec<MultiIndex>,
    pub max_abs_residual: Value,
    pub is_design: bool,
}

/// Checks whether `s` is a spherical `strength`-design. `tol` is only used
/// for float point sets.
pub fn design_check(s: &PointSet, strength: u32, tol: f64) -> Result<DesignReport> {
    if strength < 1 {
        return Err(Error::Domain("design strength must be at least 1".into()));
    }
    if s.mode() == Mode::Float && (tol.is_nan() || tol < 0.0) {
        return Err(Error::Domain(alloc::format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let basis = IndexBasis::new(strength, s.vars())?;
    let k = s.len();
    let mut residuals = Vec::with_capacity(basis.len());
    let mut failing = Vec::new();
    let mut max_abs = match s.mode() {
        Mode::Exact => Value::Exact(Rational::zero()),
        Mode::Float => Value::Float(0.0),
    };
    for m in basis.indices() {
        let target = normalized_monomial_moment(m, s.vars())? * Rational::from_integer(k.into());
        let residual = match s.power_sum(m) {
            Value::Exact(sum) => Value::Exact(sum - target),
            Value::Float(sum) => Value::Float(sum - to_f64(&target)),
        };
        let fails = match &residual {
            Value::Exact(r) => !r.is_zero(),
            Value::Float(r) => !within(*r, tol),
        };
        if fails {
            failing.push(m.clone());
        }
        max_abs = match (max_abs, residual.abs()) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(if b > a { b } else { a }),
            (Value::Float(a), Value::Float(b)) => {
                Value::Float(if b > a || b.is_nan() { b } else { a })
            }
            _ => unreachable!("one mode per point set"),
        };
        residuals.push((m.clone(), residual));
    }
    Ok(DesignReport {
        strength,
        mode: s.mode(),
        tol: (s.mode() == Mode::Float).then_some(tol),
        is_design: failing.is_empty(),
        residuals,
        failing,
        max_abs_residual: max_abs,
    })
}

/// Largest `|residual|` over `M(M, N)`.
pub fn design_defect(s: &PointSet, strength: u32) -> Result<f64> {
    Ok(design_check(s, strength, DEFAULT_DESIGN_TOL)?
        .max_abs_residual
        .to_f64())
}

/// `(1/alpha_N) * integral of F over the sphere`, i.e. `<F, 1>`.
pub fn integrate_over_sphere(f: &Polynomial) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (m, c) in f.terms() {
        acc += normalized_monomial_moment(m, f.vars())? * c;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Configuration {
    /// `{±e_i}`.
    CrossPolytope,
    /// `{±1/sqrt(N)}^N`.
    Hypercube,
    /// `n` equally spaced points on the circle, starting at `(1, 0)`.
    RegularPolygon(usize),
    /// `N + 1` vertices of a regular simplex.
    Simplex,
}

pub fn reference_configuration(config: Configuration, vars: usize) -> Result<PointSet> {
    if vars < 2 {
        return Err(Error::Domain(alloc::format!(
            "ambient dimension must be at least 2, got {vars}"
        )));
    }
    match config {
        Configuration::CrossPolytope => {
            let mut pts = Vec::with_capacity(2 * vars);
            for i in 0..vars {
                for s in [1, -1] {
                    let mut p = alloc::vec![Rational::zero(); vars];
                    p[i] = Rational::from_integer(s.into());
                    pts.push(p);
                }
            }
            PointSet::exact(vars, pts)
        }
        Configuration::Hypercube => {
            if vars > MAX_HYPERCUBE_DIM {
                return Err(Error::SizeCap {
                    size: vars,
                    cap: MAX_HYPERCUBE_DIM,
                });
            }
            let root = crate::arith::floor_sqrt(&Rational::from_integer(vars.into()))
                .to_usize()
                .expect("small");
            let signs = (0..1usize << vars)
                .map(|mask| (0..vars).map(move |i| mask >> (vars - 1 - i) & 1 == 1));
            if root * root == vars {
                let c = Rational::new(1.into(), root.into());
                PointSet::exact(
                    vars,
                    signs
                        .map(|s| {
                            s.map(|neg| if neg { -c.clone() } else { c.clone() })
                                .collect()
                        })
                        .collect(),
                )
            } else {
                let c = 1.0 / libm::sqrt(vars as f64);
                PointSet::float(
                    vars,
                    signs
                        .map(|s| s.map(|neg| if neg { -c } else { c }).collect())
                        .collect(),
                )
            }
        }
        Configuration::RegularPolygon(n) => {
            if vars != 2 || n < 3 {
                return Err(Error::Domain(alloc::format!(
                    "regular polygon needs N = 2 and at least 3 vertices, got N = {vars}, n = {n}"
                )));
            }
            let step = 2.0 * core::f64::consts::PI / n as f64;
            PointSet::float(
                2,
                (0..n)
                    .map(|j| alloc::vec![libm::cos(step * j as f64), libm::sin(step * j as f64)])
                    .collect(),
            )
        }
        Configuration::Simplex => {
            // v_i = a e_i - b (1,...,1) for i < N, v_N = (1,...,1)/sqrt(N).
            let nf = vars as f64;
            let a = libm::sqrt((nf + 1.0) / nf);
            let b = (libm::sqrt(nf + 1.0) + 1.0) / (nf * libm::sqrt(nf));
            let mut pts: Vec<Vec<f64>> = (0..vars)
                .map(|i| (0..vars).map(|j| if i == j { a - b } else { -b }).collect())
                .collect();
            pts.push(alloc::vec![1.0 / libm::sqrt(nf); vars]);
            PointSet::float(vars, pts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn square() -> PointSet {
        reference_configuration(Configuration::CrossPolytope, 2).unwrap()
    }

    fn hexagon() -> PointSet {
        reference_configuration(Configuration::RegularPolygon(6), 2).unwrap()
    }

    fn residual<'a>(r: &'a DesignReport, m: &[u32]) -> &'a Value {
        &r.residuals
            .iter()
            .find(|(k, _)| k.exponents() == m)
            .unwrap()
            .1
    }

    #[test]
    fn square_examples() {
        let r = design_check(&square(), 3, DEFAULT_DESIGN_TOL).unwrap();
        assert!(r.is_design);
        assert_eq!(residual(&r, &[2, 0]), &Value::Exact(rat(0, 1)));
        assert_eq!(r.residuals.len(), 10);
        let r = design_check(&square(), 4, DEFAULT_DESIGN_TOL).unwrap();
        assert!(!r.is_design);
        assert_eq!(residual(&r, &[4, 0]), &Value::Exact(rat(1, 2)));
        assert!(r.failing.contains(&mi(&[4, 0])) && r.failing.contains(&mi(&[2, 2])));
        assert_eq!(r.max_abs_residual, Value::Exact(rat(1, 2)));
        assert_eq!(design_defect(&square(), 3).unwrap(), 0.0);
        assert_eq!(design_defect(&square(), 4).unwrap(), 0.5);
    }

    #[test]
    fn hexagon_examples() {
        let r = design_check(&hexagon(), 5, DEFAULT_DESIGN_TOL).unwrap();
        assert!(r.is_design);
        assert!(r.max_abs_residual.to_f64() <= 1e-9);
        let r = design_check(&hexagon(), 6, DEFAULT_DESIGN_TOL).unwrap();
        assert!(!r.is_design);
        assert!(r.failing.contains(&mi(&[6, 0])));
        let at = residual(&r, &[6, 0]).to_f64();
        assert!((at - 0.1875).abs() <= 1e-9);
        assert!((design_defect(&hexagon(), 6).unwrap() - 0.1875).abs() <= 1e-9);
    }

    #[test]
    fn cross_polytopes_are_three_designs() {
        for n in 2..=5 {
            let s = reference_configuration(Configuration::CrossPolytope, n).unwrap();
            assert_eq!(s.len(), 2 * n);
            assert!(design_check(&s, 3, 0.0).unwrap().is_design);
            assert!(!design_check(&s, 4, 0.0).unwrap().is_design);
        }
    }

    #[test]
    fn reference_configurations() {
        let h = reference_configuration(Configuration::Hypercube, 4).unwrap();
        assert_eq!((h.len(), h.mode()), (16, Mode::Exact));
        assert!(h
            .point(0)
            .iter()
            .all(|x| x.abs() == Value::Exact(rat(1, 2))));
        assert!(design_check(&h, 3, 0.0).unwrap().is_design);
        assert!(!design_check(&h, 4, 0.0).unwrap().is_design);
        let h = reference_configuration(Configuration::Hypercube, 3).unwrap();
        assert_eq!((h.len(), h.mode()), (8, Mode::Float));
        assert!(design_check(&h, 3, DEFAULT_DESIGN_TOL).unwrap().is_design);
        for n in 2..=6 {
            let s = reference_configuration(Configuration::Simplex, n).unwrap();
            assert_eq!(s.len(), n + 1);
            assert!(design_check(&s, 2, DEFAULT_DESIGN_TOL).unwrap().is_design);
            assert!(!design_check(&s, 3, DEFAULT_DESIGN_TOL).unwrap().is_design);
        }
        assert!(reference_configuration(Configuration::RegularPolygon(5), 3).is_err());
        assert!(reference_configuration(Configuration::Hypercube, 17).is_err());
        // An n-gon is an (n-1)-design and no more.
        for n in 3..=9 {
            let s = reference_configuration(Configuration::RegularPolygon(n), 2).unwrap();
            assert!(
                design_check(&s, n as u32 - 1, DEFAULT_DESIGN_TOL)
                    .unwrap()
                    .is_design
            );
            assert!(
                !design_check(&s, n as u32, DEFAULT_DESIGN_TOL)
                    .unwrap()
                    .is_design
            );
        }
    }

    #[test]
    fn invalid_point_sets() {
        let off = PointSet::exact(2, alloc::vec![alloc::vec![rat(1, 1), rat(1, 1)]]);
        assert_eq!(
            off,
            Err(Error::OffSphere {
                point: 0,
                defect: "1".into()
            })
        );
        assert!(matches!(
            PointSet::float(
                2,
                alloc::vec![alloc::vec![1.0, 0.0], alloc::vec![0.6, 0.81]]
            ),
            Err(Error::OffSphere { point: 1, .. })
        ));
        let mixed = alloc::vec![alloc::vec![Value::Exact(rat(1, 1)), Value::Float(0.0)]];
        assert_eq!(PointSet::from_values(2, mixed), Err(Error::MixedMode));
        assert!(PointSet::exact(2, Vec::new()).is_err());
        assert!(matches!(
            PointSet::exact(2, alloc::vec![alloc::vec![rat(1, 1)]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(design_check(&square(), 0, 1e-9).is_err());
    }

    #[test]
    fn integration_examples() {
        assert_eq!(
            integrate_over_sphere(&Polynomial::constant(3, rat(1, 1))).unwrap(),
            rat(1, 1)
        );
        let x1sq = Polynomial::monomial(mi(&[2, 0, 0]), rat(1, 1));
        assert_eq!(integrate_over_sphere(&x1sq).unwrap(), rat(1, 3));
        let x1x2 = Polynomial::monomial(mi(&[1, 1, 0]), rat(1, 1));
        assert_eq!(integrate_over_sphere(&x1x2).unwrap(), rat(0, 1));
    }

    fn random_poly(rng: &mut StdRng, degree: u32, vars: usize) -> Polynomial {
        let basis = IndexBasis::new(degree, vars).unwrap();
        let coeffs: Vec<Rational> = (0..basis.len())
            .map(|_| rat(rng.random_range(-5..=5), rng.random_range(1..=3)))
            .collect();
        Polynomial::from_coefficients(&basis, &coeffs).unwrap()
    }

    #[test]
    fn designs_average_polynomials_exactly() {
        let mut rng = StdRng::seed_from_u64(5);
        let cases = [
            (
                reference_configuration(Configuration::CrossPolytope, 3).unwrap(),
                3,
            ),
            (
                reference_configuration(Configuration::Hypercube, 4).unwrap(),
                3,
            ),
            (hexagon(), 5),
            (
                reference_configuration(Configuration::Simplex, 3).unwrap(),
                2,
            ),
        ];
        for (s, m) in &cases {
            assert!(design_check(s, *m, DEFAULT_DESIGN_TOL).unwrap().is_design);
            for _ in 0..20 {
                let f = random_poly(&mut rng, *m, s.vars());
                let exact = integrate_over_sphere(&f).unwrap();
                match s.average(&f).unwrap() {
                    Value::Exact(avg) => assert_eq!(avg, exact),
                    Value::Float(avg) => {
                        let l1: f64 = f.terms().map(|(_, c)| to_f64(c).abs()).sum();
                        assert!(
                            (avg - to_f64(&exact)).abs()
                                <= s.len() as f64 * DEFAULT_DESIGN_TOL * l1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn verdicts_survive_signed_permutations() {
        let mut rng = StdRng::seed_from_u64(6);
        let sets = [
            square(),
            hexagon(),
            reference_configuration(Configuration::Simplex, 4).unwrap(),
            reference_configuration(Configuration::Hypercube, 4).unwrap(),
        ];
        for s in &sets {
            let n = s.vars();
            for _ in 0..5 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                let negate: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
                let t = s.signed_permutation(&perm, &negate).unwrap();
                for m in 1..=6 {
                    assert_eq!(
                        design_check(s, m, DEFAULT_DESIGN_TOL).unwrap().is_design,
                        design_check(&t, m, DEFAULT_DESIGN_TOL).unwrap().is_design
                    );
                }
            }
        }
    }

    #[test]
    fn strength_is_monotone() {
        for s in [
            square(),
            hexagon(),
            reference_configuration(Configuration::Hypercube, 4).unwrap(),
        ] {
            let verdicts: Vec<bool> = (1..=7)
                .map(|m| design_check(&s, m, DEFAULT_DESIGN_TOL).unwrap().is_design)
                .collect();
            assert!(verdicts.windows(2).all(|w| w[0] || !w[1]));
        }
    }
}

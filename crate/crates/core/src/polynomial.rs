//! Sparse polynomials with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::combinatorics::{IndexBasis, MultiIndex};
use crate::error::{Error, Result};

/// A polynomial in `vars` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        Polynomial::monomial(MultiIndex::zero(vars), c)
    }

    pub fn monomial(m: MultiIndex, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.vars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Each exponent
    /// may appear at most once and must have `vars` entries.
    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut seen = BTreeMap::new();
        for (m, c) in terms {
            if m.vars() != vars {
                return Err(Error::DimensionMismatch {
                    expected: vars,
                    found: m.vars(),
                });
            }
            if seen.contains_key(&m) {
                return Err(Error::DuplicateIndex(alloc::format!("{m}")));
            }
            seen.insert(m, c);
        }
        seen.retain(|_, c| !c.is_zero());
        Ok(Polynomial { vars, terms: seen })
    }

    /// Inverse of [`Polynomial::coefficient_vector`].
    pub fn from_coefficients(basis: &IndexBasis, coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        let terms = basis
            .indices()
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Polynomial {
            vars: basis.vars(),
            terms,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest weight among stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::weight).max().unwrap_or(0)
    }

    /// Sup-norm of the coefficient vector.
    pub fn height(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Dense coefficient vector `c_F` in the order of `basis`.
    pub fn coefficient_vector(&self, basis: &IndexBasis) -> Result<Vec<Rational>> {
        if basis.vars() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: basis.vars(),
                found: self.vars,
            });
        }
        let mut out = alloc::vec![Rational::zero(); basis.len()];
        for (m, c) in &self.terms {
            match basis.position(m) {
                Some(i) => out[i] = c.clone(),
                None => {
                    return Err(Error::DegreeOverflow {
                        degree: m.weight(),
                        bound: basis.degree(),
                    })
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, a: &Rational) -> Polynomial {
        if a.is_zero() {
            return Polynomial::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * a)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                found: other.vars,
            });
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Ok(Polynomial {
            vars: self.vars,
            terms,
        })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.check_point(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.clone();
                for (x, &e) in point.iter().zip(m.exponents()) {
                    for _ in 0..e {
                        v *= x;
                    }
                }
                v
            })
            .sum())
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64> {
        self.check_point(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                crate::arith::to_f64(c) * crate::moments::monomial_f64(point, m.exponents())
            })
            .sum())
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                found: len,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    /// Renders terms in descending lexicographic order, e.g. `X1^2 - 3*X2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.weight() == 0;
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "X{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

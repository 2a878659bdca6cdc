//! The Gram matrix of the sphere inner product on the monomial basis.
//!
//! Entry `(i, j)` is `P((m_i + m_j) / 2)` when `m_i ≡ m_j (mod 2)` and zero
//! otherwise, so the matrix splits into one dense block per parity class.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::arith::{lcm_denominators, rat_int, Int, Rational};
use crate::combinatorics::{even_pair_half, IndexBasis};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_leading_minors, RationalMatrix};
use crate::moments::moment_coeff;
use crate::polynomial::Polynomial;

/// Default limit on `L(M, N)` accepted by [`build_form`].
pub const DEFAULT_FORM_CAP: usize = 5000;
/// Default limit on `L(M, N)` for exact positive-definiteness certificates.
pub const DEFAULT_PD_CAP: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
struct ParityBlock {
    members: Vec<usize>,
    values: Vec<Vec<Rational>>,
}

/// Matrix of the bilinear form `L_{M,N}` in the lexicographic monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    basis: IndexBasis,
    blocks: Vec<ParityBlock>,
    slot: Vec<(usize, usize)>,
}

/// Builds the Gram matrix for polynomials of degree at most `degree` in `vars`
/// variables, refusing bases longer than [`DEFAULT_FORM_CAP`].
pub fn build_form(degree: u32, vars: usize) -> Result<GramForm> {
    build_form_capped(degree, vars, DEFAULT_FORM_CAP)
}

pub fn build_form_capped(degree: u32, vars: usize, cap: usize) -> Result<GramForm> {
    let len = crate::combinatorics::dimension(degree, vars)?;
    if len > cap.into() {
        return Err(Error::SizeCap {
            size: usize::try_from(len).unwrap_or(usize::MAX),
            cap,
        });
    }
    let basis = IndexBasis::new(degree, vars)?;
    GramForm::from_basis(basis)
}

impl GramForm {
    pub fn from_basis(basis: IndexBasis) -> Result<Self> {
        let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for (i, m) in basis.indices().iter().enumerate() {
            classes.entry(m.parity()).or_default().push(i);
        }
        let mut slot = alloc::vec![(0, 0); basis.len()];
        let mut blocks = Vec::with_capacity(classes.len());
        for (b, members) in classes.into_values().enumerate() {
            let k = members.len();
            let mut values = alloc::vec![alloc::vec![Rational::zero(); k]; k];
            for a in 0..k {
                slot[members[a]] = (b, a);
                for c in a..k {
                    let half =
                        even_pair_half(&basis.indices()[members[a]], &basis.indices()[members[c]])?
                            .expect("indices in one parity class have an even sum");
                    let v = moment_coeff(&half, basis.vars())?;
                    values[c][a] = v.clone();
                    values[a][c] = v;
                }
            }
            blocks.push(ParityBlock { members, values });
        }
        Ok(GramForm {
            basis,
            blocks,
            slot,
        })
    }

    pub fn basis(&self) -> &IndexBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Stored entry at `(i, j)`; `None` where the parity classes differ.
    pub fn entry(&self, i: usize, j: usize) -> Option<&Rational> {
        let (bi, ai) = *self.slot.get(i)?;
        let (bj, aj) = *self.slot.get(j)?;
        (bi == bj).then(|| &self.blocks[bi].values[ai][aj])
    }

    /// Number of stored (structurally nonzero) entries, counting both triangles.
    pub fn stored_entries(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len().pow(2)).sum()
    }

    /// Upper-triangle entries `(i, j, value)` with `i <= j`, sorted by `(i, j)`.
    pub fn upper_entries(&self) -> Vec<(usize, usize, &Rational)> {
        let mut out = Vec::new();
        for block in &self.blocks {
            for (a, &i) in block.members.iter().enumerate() {
                for (c, &j) in block.members.iter().enumerate().skip(a) {
                    out.push((i, j, &block.values[a][c]));
                }
            }
        }
        out.sort_by_key(|x| (x.0, x.1));
        out
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.len(), self.len());
        for block in &self.blocks {
            for (a, &i) in block.members.iter().enumerate() {
                for (c, &j) in block.members.iter().enumerate() {
                    m.set(i, j, block.values[a][c].clone());
                }
            }
        }
        m
    }

    /// `a^t G b` for coefficient vectors in the basis order.
    pub fn bilinear(&self, a: &[Rational], b: &[Rational]) -> Result<Rational> {
        for v in [a, b] {
            if v.len() != self.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.len(),
                    found: v.len(),
                });
            }
        }
        let mut acc = Rational::zero();
        for block in &self.blocks {
            for (x, &i) in block.members.iter().enumerate() {
                if a[i].is_zero() {
                    continue;
                }
                for (y, &j) in block.members.iter().enumerate() {
                    if !b[j].is_zero() {
                        acc += &a[i] * &block.values[x][y] * &b[j];
                    }
                }
            }
        }
        Ok(acc)
    }
}

/// `<F, G>` evaluated as `c_F^t G c_G`.
pub fn inner_product(f: &Polynomial, g: &Polynomial, form: &GramForm) -> Result<Rational> {
    let cf = f.coefficient_vector(form.basis())?;
    let cg = g.coefficient_vector(form.basis())?;
    form.bilinear(&cf, &cg)
}

/// Leading principal minors of the Gram matrix, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub minors: Vec<Rational>,
}

/// Certifies positive definiteness through exact leading principal minors,
/// computed by fraction-free elimination on the denominator-cleared matrix.
pub fn check_positive_definite(form: &GramForm) -> Result<PositivityCertificate> {
    check_positive_definite_capped(form, DEFAULT_PD_CAP)
}

pub fn check_positive_definite_capped(
    form: &GramForm,
    cap: usize,
) -> Result<PositivityCertificate> {
    if form.len() > cap {
        return Err(Error::SizeCap {
            size: form.len(),
            cap,
        });
    }
    let dense = form.to_dense();
    let all: Vec<Rational> = (0..dense.rows())
        .flat_map(|i| dense.row(i).to_vec())
        .collect();
    let scale = lcm_denominators(&all);
    let scaled: Vec<Vec<Int>> = (0..dense.rows())
        .map(|i| {
            dense
                .row(i)
                .iter()
                .map(|v| (v * rat_int(scale.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut minors = Vec::with_capacity(form.len());
    let mut power = Rational::from_integer(Int::from(1));
    let scale_q = rat_int(scale);
    for (k, m) in bareiss_leading_minors(&scaled).into_iter().enumerate() {
        power *= &scale_q;
        let minor = rat_int(m) / &power;
        if !minor.is_positive() {
            return Err(Error::NotPositiveDefinite {
                index: k,
                minor: alloc::format!("{minor}"),
            });
        }
        minors.push(minor);
    }
    Ok(PositivityCertificate { minors })
}

/// Largest absolute entry of the Gram matrix.
pub fn form_height(form: &GramForm) -> Rational {
    form.blocks
        .iter()
        .flat_map(|b| b.values.iter().flatten())
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

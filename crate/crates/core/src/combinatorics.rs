//! Multi-indices, the lexicographic monomial basis and the counting functions
//! built on it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Hard ceiling on the number of indices materialized by [`IndexBasis::new`].
pub const MAX_BASIS_LEN: usize = 1_000_000;

/// Exponent vector `m = (m_1, ..., m_N)` of the monomial `X^m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(vars: usize) -> Self {
        MultiIndex(alloc::vec![0; vars])
    }

    /// `X_var` as a multi-index.
    pub fn unit(vars: usize, var: usize) -> Self {
        let mut e = alloc::vec![0; vars];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    /// Total degree `w(m)`.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    /// `m / 2` when every exponent is even.
    pub fn half(&self) -> Option<MultiIndex> {
        self.is_even()
            .then(|| MultiIndex(self.0.iter().map(|e| e / 2).collect()))
    }

    pub fn doubled(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|e| 2 * e).collect())
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.vars() != other.vars() {
            return Err(Error::DimensionMismatch {
                expected: self.vars(),
                found: other.vars(),
            });
        }
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Parity pattern `m mod 2`.
    pub(crate) fn parity(&self) -> Vec<u8> {
        self.0.iter().map(|e| (e % 2) as u8).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// All multi-indices of weight at most `degree` in `vars` variables, sorted
/// ascending lexicographically with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBasis {
    degree: u32,
    vars: usize,
    indices: Vec<MultiIndex>,
    position: BTreeMap<MultiIndex, usize>,
}

impl IndexBasis {
    pub fn new(degree: u32, vars: usize) -> Result<Self> {
        let len = dimension(degree, vars)?;
        let len = len
            .to_usize()
            .filter(|&l| l <= MAX_BASIS_LEN)
            .ok_or(Error::SizeCap {
                size: len.to_usize().unwrap_or(usize::MAX),
                cap: MAX_BASIS_LEN,
            })?;
        let mut indices = Vec::with_capacity(len);
        let mut current = alloc::vec![0u32; vars];
        push_lex(&mut indices, &mut current, 0, degree);
        debug_assert_eq!(indices.len(), len);
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(IndexBasis {
            degree,
            vars,
            indices,
            position,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, i: usize) -> Option<&MultiIndex> {
        self.indices.get(i)
    }

    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.position.get(m).copied()
    }
}

fn push_lex(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, coord: usize, budget: u32) {
    if coord == current.len() {
        out.push(MultiIndex(current.clone()));
        return;
    }
    for v in 0..=budget {
        current[coord] = v;
        push_lex(out, current, coord + 1, budget - v);
    }
    current[coord] = 0;
}

fn check_vars(vars: usize) -> Result<()> {
    if vars < 2 {
        return Err(Error::Domain(alloc::format!(
            "number of variables must be at least 2, got {vars}"
        )));
    }
    Ok(())
}

/// Enumerates `M(degree, vars)` in lexicographic order.
pub fn enumerate_multiindices(degree: u32, vars: usize) -> Result<IndexBasis> {
    IndexBasis::new(degree, vars)
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `L(M, N) = sum_{k=0}^{M} C(N+k-1, k)`.
pub fn dimension(degree: u32, vars: usize) -> Result<BigUint> {
    check_vars(vars)?;
    let n = vars as u64;
    Ok((0..=u64::from(degree))
        .map(|k| binomial(n + k - 1, k))
        .sum())
}

/// `m!!` for `m >= -1`, with `(-1)!! = 0!! = 1!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigUint> {
    if m < -1 {
        return Err(Error::Domain(alloc::format!(
            "double factorial undefined for {m}"
        )));
    }
    let mut acc = BigUint::one();
    let mut k = m;
    while k > 1 {
        acc *= k as u64;
        k -= 2;
    }
    Ok(acc)
}

/// `(m1 + m2) / 2` when `m1 + m2` has only even coordinates.
///
/// For indices from a common basis the weight bound on the half is automatic,
/// so parity alone decides membership of `(m1, m2)` in `E(M, N)`.
pub fn even_pair_half(m1: &MultiIndex, m2: &MultiIndex) -> Result<Option<MultiIndex>> {
    Ok(m1.checked_add(m2)?.half())
}

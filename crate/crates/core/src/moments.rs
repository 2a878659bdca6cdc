//! Sphere moments: the closed-form coefficients `P(m)`, the normalized monomial
//! integrals built from them, and two independent oracles used to check them.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::arith::{rat_int, Rational};
use crate::combinatorics::{double_factorial, MultiIndex};
use crate::error::{Error, Result};

/// `coeff * pi^pi_power`, with `pi_power` an integer or half-integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiScaled {
    pub coeff: Rational,
    pub pi_power: Rational64,
}

impl PiScaled {
    pub fn new(coeff: Rational, pi_power: Rational64) -> Self {
        debug_assert!(*pi_power.denom() <= 2);
        PiScaled { coeff, pi_power }
    }

    pub fn rational(coeff: Rational) -> Self {
        PiScaled::new(coeff, Rational64::zero())
    }

    pub fn mul(&self, other: &PiScaled) -> PiScaled {
        PiScaled::new(&self.coeff * &other.coeff, self.pi_power + other.pi_power)
    }

    pub fn div(&self, other: &PiScaled) -> PiScaled {
        PiScaled::new(&self.coeff / &other.coeff, self.pi_power - other.pi_power)
    }

    pub fn to_f64(&self) -> f64 {
        let p = *self.pi_power.numer() as f64 / *self.pi_power.denom() as f64;
        crate::arith::to_f64(&self.coeff) * libm::pow(core::f64::consts::PI, p)
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power.is_zero() {
            write!(f, "{}", self.coeff)
        } else if self.pi_power.is_integer() {
            write!(f, "{}*pi^{}", self.coeff, self.pi_power)
        } else {
            write!(f, "{}*pi^({})", self.coeff, self.pi_power)
        }
    }
}

fn check_vars(m: &MultiIndex, vars: usize) -> Result<()> {
    if vars < 2 {
        return Err(Error::Domain(alloc::format!(
            "number of variables must be at least 2, got {vars}"
        )));
    }
    if m.vars() != vars {
        return Err(Error::DimensionMismatch {
            expected: vars,
            found: m.vars(),
        });
    }
    Ok(())
}

/// Surface area of the unit sphere in `R^vars`.
pub fn sphere_area(vars: usize) -> Result<PiScaled> {
    if vars < 2 {
        return Err(Error::Domain(alloc::format!(
            "number of variables must be at least 2, got {vars}"
        )));
    }
    let n = vars as i64;
    if n % 2 == 0 {
        // (2 pi)^{N/2} / (2 * 4 * ... * (N-2))
        let denom: BigInt = (1..n / 2).map(|k| BigInt::from(2 * k)).product();
        let num = BigInt::one() << (n / 2) as usize;
        Ok(PiScaled::new(
            Rational::new(num, denom),
            Rational64::from_integer(n / 2),
        ))
    } else {
        // 2 (2 pi)^{(N-1)/2} / (1 * 3 * ... * (N-2))
        let denom: BigInt = (0..(n - 1) / 2).map(|k| BigInt::from(2 * k + 1)).product();
        let num = BigInt::from(2) << ((n - 1) / 2) as usize;
        Ok(PiScaled::new(
            Rational::new(num, denom),
            Rational64::from_integer((n - 1) / 2),
        ))
    }
}

/// `P(m) = prod_i (2 m_i - 1)!! / prod_{k=1}^{w(m)} (N - 2 + 2k)`.
pub fn moment_coeff(m: &MultiIndex, vars: usize) -> Result<Rational> {
    check_vars(m, vars)?;
    let mut num = BigInt::one();
    for &e in m.exponents() {
        num *= BigInt::from(double_factorial(2 * i64::from(e) - 1)?);
    }
    let n = vars as i64;
    let den: BigInt = (1..=i64::from(m.weight()))
        .map(|k| BigInt::from(n - 2 + 2 * k))
        .product();
    Ok(Rational::new(num, den))
}

/// `(1/alpha_N) * integral of x^eps over the unit sphere`.
pub fn normalized_monomial_moment(eps: &MultiIndex, vars: usize) -> Result<Rational> {
    check_vars(eps, vars)?;
    match eps.half() {
        Some(t) => moment_coeff(&t, vars),
        None => Ok(Rational::zero()),
    }
}

fn factorial(n: i64) -> BigInt {
    (2..=n).map(BigInt::from).product()
}

fn odd_double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// `Gamma(s / 2)` for an integer `s >= 1`, exactly.
fn gamma_half(s: i64) -> PiScaled {
    if s % 2 == 0 {
        PiScaled::rational(rat_int(factorial(s / 2 - 1)))
    } else {
        // Gamma(k + 1/2) = (2k - 1)!! sqrt(pi) / 2^k
        let k = (s - 1) / 2;
        PiScaled::new(
            Rational::new(odd_double_factorial(2 * k - 1), BigInt::one() << k as usize),
            Rational64::new(1, 2),
        )
    }
}

/// Independent evaluation of the normalized monomial moment through the
/// gamma-function closed form `2 pi^{N/2} prod (2t_i - 1)!! / (2^{w/2} Gamma((N+w)/2))`,
/// divided by the sphere area.
pub fn moment_gamma_oracle(eps: &MultiIndex, vars: usize) -> Result<Rational> {
    check_vars(eps, vars)?;
    if !eps.is_even() {
        return Ok(Rational::zero());
    }
    let n = vars as i64;
    let w = i64::from(eps.weight());
    let mut num = BigInt::from(2);
    for &e in eps.exponents() {
        num *= odd_double_factorial(i64::from(e) - 1);
    }
    let numerator = PiScaled::new(rat_int(num), Rational64::new(n, 2));
    let denominator =
        PiScaled::rational(rat_int(BigInt::one() << (w / 2) as usize)).mul(&gamma_half(n + w));
    let integral = numerator.div(&denominator);
    let normalized = integral.div(&sphere_area(vars)?);
    if !normalized.pi_power.is_zero() {
        return Err(Error::PiMismatch(alloc::format!("{normalized}")));
    }
    Ok(normalized.coeff)
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Averages `integrand` over uniformly distributed points of the unit sphere
/// in `R^vars`, obtained by normalizing standard Gaussian vectors drawn from a
/// ChaCha8 generator seeded with `seed`.
pub fn monte_carlo_mean<F>(
    vars: usize,
    samples: u64,
    seed: u64,
    mut integrand: F,
) -> MonteCarloEstimate
where
    F: FnMut(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point: Vec<f64> = alloc::vec![0.0; vars];
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    let mut count = 0u64;
    while count < samples {
        let mut norm_sq = 0.0;
        for x in point.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut rng);
            *x = g;
            norm_sq += g * g;
        }
        if norm_sq == 0.0 {
            continue;
        }
        let inv = 1.0 / libm::sqrt(norm_sq);
        point.iter_mut().for_each(|x| *x *= inv);
        let value = integrand(&point);
        count += 1;
        let delta = value - mean;
        mean += delta / count as f64;
        m2 += delta * (value - mean);
    }
    let std_error = if samples > 1 {
        libm::sqrt(m2 / (samples - 1) as f64 / samples as f64)
    } else {
        0.0
    };
    MonteCarloEstimate {
        mean,
        std_error,
        samples,
    }
}

pub(crate) fn monomial_f64(x: &[f64], m: &[u32]) -> f64 {
    x.iter().zip(m).fold(1.0, |acc, (&xi, &e)| {
        let mut p = 1.0;
        for _ in 0..e {
            p *= xi;
        }
        acc * p
    })
}

/// Monte Carlo estimate of the normalized moment of `x^eps`.
pub fn monte_carlo_moment(
    eps: &MultiIndex,
    vars: usize,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_vars(eps, vars)?;
    if samples == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    Ok(monte_carlo_mean(vars, samples, seed, |x| {
        monomial_f64(x, eps.exponents())
    }))
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{eval_with_tolerance, normalize, Assignment, Expr, Symbol};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

const SAMPLES: usize = 20;
const MAX_RETRIES: usize = 50;
const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroVerdict {
    /// The canonical numerator vanishes.
    Zero,
    /// Some sample point gives a nonzero value.
    NonZero,
    /// Not zero as a rational function of the kernels, but every sample
    /// vanishes; kernel identities the normal form does not know about.
    NumericOnlyZero,
}

impl ZeroVerdict {
    pub fn holds(self) -> bool {
        !matches!(self, ZeroVerdict::NonZero)
    }
}

/// Random rational points in `[-7, 7] \ {0}` for the given symbols.
pub fn sample_points(symbols: &[Symbol], seed: u64, count: usize) -> Vec<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_point(symbols, &mut rng))
        .collect()
}

pub(crate) fn random_point(symbols: &[Symbol], rng: &mut ChaCha8Rng) -> Assignment {
    let mut at = Assignment::new();
    for s in symbols {
        let d: i64 = rng.gen_range(1..=8);
        let mut n: i64 = 0;
        while n == 0 {
            n = rng.gen_range(-7 * d..=7 * d);
        }
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        at.set(s.clone(), q.to_f64().unwrap());
    }
    at
}

/// Decide `e ≡ 0` with the default seed.
pub fn is_zero(e: &Expr) -> Result<ZeroVerdict> {
    is_zero_seeded(e, DEFAULT_SEED)
}

/// Exact test on the normal form, falling back to random evaluation when
/// the numerator does not cancel.
pub fn is_zero_seeded(e: &Expr, seed: u64) -> Result<ZeroVerdict> {
    let nf = normalize(e)?;
    if nf.is_zero() {
        return Ok(ZeroVerdict::Zero);
    }
    let num = nf.numerator_expr();
    let symbols: Vec<Symbol> = num.free_symbols().into_iter().collect();
    if symbols.is_empty() {
        return Ok(ZeroVerdict::NonZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    let mut singular = 0;
    while good < SAMPLES {
        if singular > MAX_RETRIES {
            return Err(Error::AllSamplesSingular(singular));
        }
        let at = random_point(&symbols, &mut rng);
        match eval_with_tolerance(&num, &at, TOL) {
            Ok((v, m)) => {
                if v.abs() > TOL * m.max(1e-300) {
                    return Ok(ZeroVerdict::NonZero);
                }
                good += 1;
            }
            Err(Error::SingularPoint(_)) => singular += 1,
            Err(other) => return Err(other),
        }
    }
    Ok(ZeroVerdict::NumericOnlyZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, ParseContext};

    fn p(s: &str) -> Expr {
        parse_expr(s, &ParseContext::new()).unwrap()
    }

    #[test]
    fn exact_and_numeric_verdicts() {
        assert_eq!(is_zero(&p("x/y - x*y^-1")).unwrap(), ZeroVerdict::Zero);
        assert_eq!(is_zero(&p("x + y")).unwrap(), ZeroVerdict::NonZero);
        assert_eq!(
            is_zero(&p("sin(2*x) - 2*sin(x)*cos(x)")).unwrap(),
            ZeroVerdict::NumericOnlyZero
        );
        assert_eq!(
            is_zero(&p("ln(x^2) - 2*ln(x)")).unwrap(),
            ZeroVerdict::NumericOnlyZero
        );
    }

    #[test]
    fn samples_are_reproducible() {
        let a = sample_points(&[Symbol::X, Symbol::Y], 7, 5);
        let b = sample_points(&[Symbol::X, Symbol::Y], 7, 5);
        assert_eq!(a, b);
        for at in &a {
            for (_, v) in at.iter() {
                assert!(*v != 0.0 && v.abs() <= 7.0);
            }
        }
    }
}

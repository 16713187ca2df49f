//! Exact information quantities for rational distributions.
//!
//! Every entropy of a distribution with rational probabilities is a finite sum
//! `r + Σ c_p·log2(p)` over odd primes `p` with rational `r`, `c_p`. Logarithms
//! of distinct primes are linearly independent over the rationals, so two such
//! values are equal iff their coefficient vectors are equal. That makes zero
//! tests exact without ever evaluating a logarithm.

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, ToPrimitive, Zero};
use num_prime::nt_funcs::factorize128;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExactBits {
    rational: BigRational,
    /// Odd prime → coefficient of `log2(prime)`; zero coefficients never stored.
    logs: BTreeMap<u128, BigRational>,
}

impl ExactBits {
    pub fn zero() -> Self {
        ExactBits::default()
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactBits {
            rational: r,
            logs: BTreeMap::new(),
        }
    }

    /// `log2(q)` for a positive rational `q` whose numerator and denominator fit in 128 bits.
    pub fn log2(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InexactValue(format!("log of non-positive {q}")));
        }
        let mut out = ExactBits::zero();
        for (part, sign) in [(q.numer(), 1i64), (q.denom(), -1i64)] {
            let v = part
                .to_u128()
                .ok_or_else(|| Error::InexactValue(format!("{part} exceeds 128 bits")))?;
            if v <= 1 {
                continue;
            }
            for (p, e) in factorize128(v) {
                let coeff = BigRational::from_integer((sign * e as i64).into());
                if p == 2 {
                    out.rational += coeff;
                } else {
                    out.add_log(p, coeff);
                }
            }
        }
        Ok(out)
    }

    /// `-q·log2(q)`, with `0·log(1/0) = 0`.
    pub fn entropy_term(q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Ok(ExactBits::zero());
        }
        Ok(ExactBits::log2(q)?.scale(&-q.clone()))
    }

    fn add_log(&mut self, p: u128, c: BigRational) {
        let slot = self.logs.entry(p).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.logs.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (&p, c) in &other.logs {
            out.add_log(p, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return ExactBits::zero();
        }
        ExactBits {
            rational: &self.rational * k,
            logs: self.logs.iter().map(|(&p, c)| (p, c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    /// The value itself when no logarithm of an odd prime remains.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.logs.is_empty().then(|| self.rational.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.logs.iter().fold(
            self.rational.to_f64().unwrap_or(f64::NAN),
            |acc, (&p, c)| acc + c.to_f64().unwrap_or(f64::NAN) * (p as f64).log2(),
        )
    }
}

impl std::fmt::Debug for ExactBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rational)?;
        for (p, c) in &self.logs {
            write!(f, " + ({c})·log2({p})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dyadic_logs_are_rational() {
        assert_eq!(ExactBits::log2(&q(1, 8)).unwrap().to_rational(), Some(q(-3, 1)));
        assert_eq!(ExactBits::entropy_term(&q(1, 2)).unwrap().to_rational(), Some(q(1, 2)));
        assert!(ExactBits::entropy_term(&q(0, 1)).unwrap().is_zero());
    }

    #[test]
    fn odd_primes_cancel_exactly() {
        // log2(3) + log2(1/3) = 0
        let a = ExactBits::log2(&q(3, 1)).unwrap();
        let b = ExactBits::log2(&q(1, 3)).unwrap();
        assert!(a.add(&b).is_zero());
        // log2(6) - log2(3) = 1
        let six = ExactBits::log2(&q(6, 1)).unwrap();
        assert_eq!(six.sub(&a).to_rational(), Some(q(1, 1)));
        assert!(a.to_rational().is_none());
        assert!((a.to_f64() - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_thirds() {
        let h = (0..3).fold(ExactBits::zero(), |acc, _| {
            acc.add(&ExactBits::entropy_term(&q(1, 3)).unwrap())
        });
        assert!((h.to_f64() - 3f64.log2()).abs() < 1e-15);
        assert_eq!(h, ExactBits::log2(&q(3, 1)).unwrap());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(ExactBits::log2(&q(0, 1)).is_err());
        assert!(ExactBits::log2(&q(-1, 2)).is_err());
    }
}

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::sieve::primes_up_to;

/// Which prime set a harmonic sum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmonicMode {
    /// Σ 1/p over the distinct primes dividing the argument.
    DivisorsOf(u64),
    /// Σ 1/p over primes not exceeding the argument.
    PrimesUpTo(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicSum {
    pub exact: BigRational,
    pub value: f64,
    pub prime_count: usize,
}

pub fn prime_harmonic(mode: HarmonicMode) -> HarmonicSum {
    let primes = match mode {
        HarmonicMode::DivisorsOf(q) => distinct_prime_factors(q),
        HarmonicMode::PrimesUpTo(l) => primes_up_to(l),
    };
    let exact = reciprocal_sum(&primes);
    let value = exact.to_f64().unwrap_or(f64::NAN);
    HarmonicSum {
        exact,
        value,
        prime_count: primes.len(),
    }
}

/// Σ 1/p over distinct primes, built as num/den without gcd reductions:
/// the result is already in lowest terms because every prime divides the
/// denominator and exactly one term of the numerator misses it.
fn reciprocal_sum(primes: &[u64]) -> BigRational {
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for &p in primes {
        num = num * p + &den;
        den *= p;
    }
    BigRational::new_raw(BigInt::from(num), BigInt::from(den))
}

/// Distinct prime divisors of `q` in increasing order, by trial division.
pub fn distinct_prime_factors(mut q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= q {
        if q.is_multiple_of(d) {
            out.push(d);
            while q.is_multiple_of(d) {
                q /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if q > 1 {
        out.push(q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(prime_harmonic(HarmonicMode::DivisorsOf(1)).exact, ratio(0, 1));
        let s = prime_harmonic(HarmonicMode::DivisorsOf(6));
        assert_eq!(s.exact, ratio(5, 6));
        assert!((s.value - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(prime_harmonic(HarmonicMode::DivisorsOf(12)).exact, ratio(5, 6));
        assert_eq!(prime_harmonic(HarmonicMode::DivisorsOf(97)).exact, ratio(1, 97));
    }

    #[test]
    fn up_to_sums() {
        assert_eq!(prime_harmonic(HarmonicMode::PrimesUpTo(1)).exact, ratio(0, 1));
        assert_eq!(prime_harmonic(HarmonicMode::PrimesUpTo(10)).exact, ratio(247, 210));
        assert_eq!(prime_harmonic(HarmonicMode::PrimesUpTo(10)).prime_count, 4);
    }

    #[test]
    fn raw_construction_is_reduced() {
        let s = prime_harmonic(HarmonicMode::PrimesUpTo(200)).exact;
        let reduced = BigRational::new(s.numer().clone(), s.denom().clone());
        assert_eq!(s.numer(), reduced.numer());
        assert_eq!(s.denom(), reduced.denom());
    }

    #[test]
    fn factors() {
        assert_eq!(distinct_prime_factors(1), Vec::<u64>::new());
        assert_eq!(distinct_prime_factors(360), vec![2, 3, 5]);
        assert_eq!(distinct_prime_factors(2 * 1_000_003), vec![2, 1_000_003]);
    }
}

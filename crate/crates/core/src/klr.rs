//! Short-interval sums of μ along residue classes.
//!
//! For modulus `q`, scale `L`, horizon `N` and offset `0 <= z < Lq`, the
//! evaluated quantity is
//!
//! ```text
//! Σ_{j=0}^{⌊N/(Lq)⌋} Σ_{a=0}^{q-1} | Σ_{m ∈ [z+jLq, z+(j+1)Lq), m ≡ a (mod q)} μ(m) |
//! ```
//!
//! The outer range is inclusive at `⌊N/(Lq)⌋`, and positions outside the
//! sieve range (including `m = 0`) contribute nothing.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::mobius::{prime_harmonic, HarmonicMode, HarmonicSum, MobiusTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KlrQuery {
    pub q: u64,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub z: u64,
}

impl KlrQuery {
    pub fn new(q: u64, l: u64, n: u64, z: u64) -> Result<Self> {
        let query = Self { q, l, n, z };
        ensure!(
            z < query.block()?,
            InvalidArgument,
            "offset z = {z} outside [0, Lq) = [0, {})",
            q * l
        );
        Ok(query)
    }

    /// Lq, checked so that every window end fits in 64 bits.
    fn block(&self) -> Result<u64> {
        ensure!(self.q >= 1 && self.l >= 1, InvalidArgument, "q and L must be positive");
        let lq = self
            .q
            .checked_mul(self.l)
            .ok_or_else(|| Error::ResourceLimit(format!("Lq = {}·{} overflows", self.l, self.q)))?;
        let windows = self.n / lq + 1;
        windows
            .checked_mul(lq)
            .and_then(|span| span.checked_add(lq))
            .ok_or_else(|| Error::ResourceLimit("window span overflows 64 bits".into()))?;
        Ok(lq)
    }

    /// Number of length-Lq windows, ⌊N/(Lq)⌋ + 1.
    pub fn window_count(&self) -> u64 {
        self.n / (self.q * self.l) + 1
    }
}

pub fn klr_double_sum(table: &MobiusTable, query: &KlrQuery) -> Result<u64> {
    let lq = query.block()?;
    ensure!(
        query.z < lq,
        InvalidArgument,
        "offset z = {} outside [0, Lq) = [0, {lq})",
        query.z
    );
    let q = query.q as usize;
    let limit = table.limit();
    let mut cells = vec![0i64; q];
    let mut total = 0u64;
    for j in 0..query.window_count() {
        let start = query.z + j * lq;
        if start > limit {
            break;
        }
        cells.iter_mut().for_each(|c| *c = 0);
        let end = (start + lq).min(limit + 1);
        let mut a = (start % query.q) as usize;
        for m in start..end {
            if m >= 1 {
                cells[a] += table.get(m) as i64;
            }
            a += 1;
            if a == q {
                a = 0;
            }
        }
        total += cells.iter().map(|c| c.unsigned_abs()).sum::<u64>();
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetSearch {
    Exhaustive,
    /// Offsets 0, step, 2·step, … below Lq.
    Stride(u64),
}

impl FromStr for OffsetSearch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(OffsetSearch::Exhaustive);
        }
        if let Some(step) = s.strip_prefix("stride:") {
            let step = step
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad stride step in {s:?}")))?;
            return Ok(OffsetSearch::Stride(step));
        }
        Err(Error::InvalidArgument(format!(
            "search must be `exhaustive` or `stride:K`, got {s:?}"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BestOffset {
    pub z: u64,
    pub value: u64,
    pub candidates: u64,
}

/// The offset minimizing the double sum over the searched set, smallest `z` on ties.
pub fn klr_best_offset(
    table: &MobiusTable,
    q: u64,
    l: u64,
    n: u64,
    search: OffsetSearch,
) -> Result<BestOffset> {
    let lq = KlrQuery { q, l, n, z: 0 }.block()?;
    let step = match search {
        OffsetSearch::Exhaustive => 1,
        OffsetSearch::Stride(0) => {
            return Err(Error::InvalidArgument("stride step 0 searches no offsets".into()))
        }
        OffsetSearch::Stride(k) => k,
    };
    let candidates: Vec<u64> = (0..lq).step_by(step as usize).collect();
    ensure!(!candidates.is_empty(), InvalidArgument, "empty offset search set");
    let values = candidates
        .par_iter()
        .map(|&z| klr_double_sum(table, &KlrQuery { q, l, n, z }).map(|v| (v, z)))
        .collect::<Result<Vec<_>>>()?;
    let (value, z) = values.into_iter().min().expect("nonempty candidate set");
    Ok(BestOffset {
        z,
        value,
        candidates: candidates.len() as u64,
    })
}

/// A tolerance held as an exact rational, so decimal inputs such as `0.005`
/// mean exactly 1/200.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epsilon(BigRational);

impl Epsilon {
    pub fn new(r: BigRational) -> Self {
        Epsilon(r)
    }

    /// The exact binary value of `x`.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Epsilon)
            .ok_or_else(|| Error::InvalidArgument(format!("epsilon {x} is not finite")))
    }

    pub fn exact(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `a/b`, plain decimals, and scientific notation (`5e-3`).
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s.trim())
            .map(Epsilon)
            .ok_or_else(|| Error::InvalidArgument(format!("cannot parse {s:?} as a rational")))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let den = BigInt::from_str(b.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(BigInt::from_str(a.trim()).ok()?, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exp - frac.len() as i32;
    let power = num_traits::pow(BigInt::from(10), scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= BigRational::from_integer(power);
    } else {
        value /= BigRational::from_integer(power);
    }
    Some(if neg { -value } else { value })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub divisor_sum: HarmonicSum,
    pub upto_sum: HarmonicSum,
}

/// Σ_{p|q} 1/p ≤ (1 − ε) Σ_{p≤L} 1/p, decided exactly.
pub fn klr_admissible(q: u64, l: u64, epsilon: &Epsilon) -> Result<Admissibility> {
    ensure!(q >= 1, InvalidArgument, "q must be at least 1");
    ensure!(l >= 2, InvalidArgument, "L = {l} must be at least 2");
    let hundredth = BigRational::new(BigInt::one(), BigInt::from(100));
    ensure!(
        epsilon.0.is_positive() && epsilon.0 < hundredth,
        InvalidArgument,
        "epsilon = {} must lie in (0, 1/100)",
        epsilon.0
    );
    let divisor_sum = prime_harmonic(HarmonicMode::DivisorsOf(q));
    let upto_sum = prime_harmonic(HarmonicMode::PrimesUpTo(l));
    let bound = (BigRational::one() - &epsilon.0) * &upto_sum.exact;
    Ok(Admissibility {
        admissible: divisor_sum.exact <= bound,
        divisor_sum,
        upto_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::mobius_sieve;

    fn eps(s: &str) -> Epsilon {
        s.parse().unwrap()
    }

    #[test]
    fn worked_examples() {
        let t = mobius_sieve(100, 16).unwrap();
        assert_eq!(klr_double_sum(&t, &KlrQuery::new(1, 1, 3, 0).unwrap()).unwrap(), 3);
        assert_eq!(klr_double_sum(&t, &KlrQuery::new(2, 2, 8, 0).unwrap()).unwrap(), 6);
        // Windows reaching past the table contribute only their in-range part.
        let small = mobius_sieve(8, 16).unwrap();
        // [8,12) keeps only m = 8, so the cells read 1, 0, 1, 2, 0, 0.
        assert_eq!(klr_double_sum(&small, &KlrQuery::new(2, 2, 8, 0).unwrap()).unwrap(), 4);
    }

    #[test]
    fn bad_offset() {
        assert!(matches!(KlrQuery::new(2, 2, 8, 4), Err(Error::InvalidArgument(_))));
        let t = mobius_sieve(20, 16).unwrap();
        let q = KlrQuery { q: 2, l: 2, n: 8, z: 4 };
        assert!(matches!(klr_double_sum(&t, &q), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn offsets() {
        let t = mobius_sieve(100, 16).unwrap();
        let b = klr_best_offset(&t, 1, 1, 3, OffsetSearch::Exhaustive).unwrap();
        assert_eq!((b.z, b.value), (0, 3));
        // Oracle values for z = 0..4: 6, 6, 8, 8.
        let b = klr_best_offset(&t, 2, 2, 8, OffsetSearch::Exhaustive).unwrap();
        assert_eq!((b.z, b.value, b.candidates), (0, 6, 4));
        let b = klr_best_offset(&t, 2, 2, 8, OffsetSearch::Stride(2)).unwrap();
        assert_eq!((b.z, b.value, b.candidates), (0, 6, 2));
        assert!(klr_best_offset(&t, 2, 2, 8, OffsetSearch::Stride(0)).is_err());
        assert_eq!("stride:3".parse::<OffsetSearch>().unwrap(), OffsetSearch::Stride(3));
        assert!("stride:x".parse::<OffsetSearch>().is_err());
    }

    #[test]
    fn rational_parsing() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(eps("0.005").0, r(1, 200));
        assert_eq!(eps("5e-3").0, r(1, 200));
        assert_eq!(eps("1/200").0, r(1, 200));
        assert_eq!(eps("2.5E1").0, r(25, 1));
        assert_eq!(eps(".5").0, r(1, 2));
        assert_eq!(eps("-0.25").0, r(-1, 4));
        assert!("1/0".parse::<Epsilon>().is_err());
        assert!("abc".parse::<Epsilon>().is_err());
        assert!(".".parse::<Epsilon>().is_err());
    }

    #[test]
    fn admissibility_examples() {
        let e = eps("0.005");
        assert!(klr_admissible(1, 2, &e).unwrap().admissible);
        assert!(!klr_admissible(2, 2, &e).unwrap().admissible);
        let a = klr_admissible(6, 100, &e).unwrap();
        assert!(a.admissible);
        assert!((a.upto_sum.value - 1.802817201048871).abs() < 1e-12);
        assert!(klr_admissible(6, 100, &eps("0.01")).is_err());
        assert!(klr_admissible(6, 100, &eps("0")).is_err());
        assert!(klr_admissible(6, 1, &e).is_err());
    }

    #[test]
    fn exactness_at_the_boundary() {
        // Σ_{p|30} 1/p = Σ_{p≤5} 1/p = 31/30, so any ε > 0 tips the comparison.
        assert!(!klr_admissible(30, 5, &eps("1e-9")).unwrap().admissible);
        assert!(!klr_admissible(30, 6, &eps("1/1000000000000")).unwrap().admissible);
        assert!(klr_admissible(30, 7, &eps("0.0099")).unwrap().admissible);
    }
}

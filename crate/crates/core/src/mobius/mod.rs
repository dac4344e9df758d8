//! Möbius function tables and the scalar statistics built on them.

pub mod cache;
mod harmonic;
mod sieve;
mod table;

pub use harmonic::{distinct_prime_factors, prime_harmonic, HarmonicMode, HarmonicSum};
pub use sieve::{isqrt, mobius_sieve, primes_up_to, DEFAULT_SEGMENT};
pub use table::MobiusTable;

use serde::Serialize;

use crate::error::{ensure, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MertensReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub mertens: i64,
    pub density: f64,
}

impl MertensReport {
    /// |M(N)| / N^(1/2 + ε).
    pub fn riemann_ratio(&self, epsilon: f64) -> f64 {
        (self.mertens.unsigned_abs() as f64) / (self.n as f64).powf(0.5 + epsilon)
    }
}

pub fn mertens(table: &MobiusTable, n: u64) -> Result<MertensReport> {
    ensure!(n >= 1, InvalidArgument, "Mertens horizon must be at least 1");
    ensure!(
        n <= table.limit(),
        OutOfRange,
        "N = {n} exceeds sieve limit {}",
        table.limit()
    );
    let m = table.prefix_sum(n);
    Ok(MertensReport {
        n,
        mertens: m,
        density: m as f64 / n as f64,
    })
}

/// Σ_{n ≤ N} μ(n+1)^{i_1} ··· μ(n+k)^{i_k}, with μ^0 read as 1.
pub fn chowla_sum(table: &MobiusTable, exponents: &[u8], n: u64) -> Result<i64> {
    ensure!(!exponents.is_empty(), InvalidArgument, "exponent list is empty");
    ensure!(
        exponents.iter().all(|&e| e <= 2),
        InvalidArgument,
        "exponents must lie in {{0, 1, 2}}, got {exponents:?}"
    );
    ensure!(
        exponents.contains(&1),
        InvalidArgument,
        "at least one exponent must equal 1, got {exponents:?}"
    );
    let k = exponents.len() as u64;
    ensure!(
        n.checked_add(k).is_some_and(|top| top <= table.limit()),
        OutOfRange,
        "N + k = {n} + {k} exceeds sieve limit {}",
        table.limit()
    );
    let mut total = 0i64;
    for base in 1..=n {
        let mut term = 1i64;
        for (j, &e) in exponents.iter().enumerate() {
            let v = table.get(base + 1 + j as u64) as i64;
            term *= match e {
                0 => 1,
                1 => v,
                _ => v * v,
            };
            if term == 0 {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// Σ μ(n) over members `n` of `mask` with `1 <= n <= N`.
pub fn masked_mobius_sum<I>(table: &MobiusTable, mask: I, n: u64) -> Result<i64>
where
    I: IntoIterator<Item = u64>,
{
    ensure!(
        n <= table.limit(),
        OutOfRange,
        "N = {n} exceeds sieve limit {}",
        table.limit()
    );
    Ok(mask
        .into_iter()
        .filter(|&m| m >= 1 && m <= n)
        .map(|m| table.get(m) as i64)
        .sum())
}

use rayon::prelude::*;

use super::table::{encode, MobiusTable};
use crate::error::{ensure, Result};

/// Default number of integers handled per segment.
pub const DEFAULT_SEGMENT: u64 = 1 << 18;

/// Primes `p <= n`, by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Segmented Möbius sieve over `[1, limit]`.
///
/// Each segment keeps a running sign and the product of the small primes that
/// divide each entry; a product short of `n` means exactly one prime factor
/// above `sqrt(limit)` remains. Segments are rounded up to a multiple of four
/// integers so each one owns whole bytes of the packed output and can be
/// filled on its own rayon task.
pub fn mobius_sieve(limit: u64, segment_size: u64) -> Result<MobiusTable> {
    ensure!(limit >= 1, InvalidArgument, "sieve limit must be at least 1");
    ensure!(segment_size >= 1, InvalidArgument, "segment size must be at least 1");

    let base = primes_up_to(isqrt(limit));
    let seg = segment_size.div_ceil(4) * 4;
    let mut codes = vec![0u8; limit.div_ceil(4) as usize];
    let seg_bytes = (seg / 4) as usize;

    codes
        .par_chunks_mut(seg_bytes)
        .enumerate()
        .for_each(|(idx, out)| {
            let lo = 1 + idx as u64 * seg;
            let hi = (lo + seg).min(limit + 1);
            sieve_segment(&base, lo, hi, out);
        });

    Ok(MobiusTable::from_codes(limit, segment_size, codes))
}

fn sieve_segment(base: &[u64], lo: u64, hi: u64, out: &mut [u8]) {
    let len = (hi - lo) as usize;
    let mut sign = vec![1i8; len];
    let mut prod = vec![1u64; len];

    for &p in base {
        if p >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            sign[i] = -sign[i];
            prod[i] *= p;
            m += p;
        }
        let sq = p * p;
        let mut m = lo.div_ceil(sq) * sq;
        while m < hi {
            sign[(m - lo) as usize] = 0;
            m += sq;
        }
    }

    for i in 0..len {
        let n = lo + i as u64;
        let mut s = sign[i];
        if s != 0 && prod[i] != n {
            s = -s;
        }
        out[i / 4] |= encode(s) << (2 * (i % 4));
    }
}

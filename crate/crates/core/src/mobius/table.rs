use crate::error::{ensure, Error, Result};

const CODE_ZERO: u8 = 0b00;
const CODE_PLUS: u8 = 0b01;
const CODE_MINUS: u8 = 0b10;
pub(crate) const CODE_RESERVED: u8 = 0b11;

#[inline]
pub(crate) fn encode(v: i8) -> u8 {
    match v {
        0 => CODE_ZERO,
        1 => CODE_PLUS,
        -1 => CODE_MINUS,
        _ => unreachable!("Möbius value {v}"),
    }
}

#[inline]
fn decode(code: u8) -> i8 {
    match code {
        CODE_ZERO => 0,
        CODE_PLUS => 1,
        CODE_MINUS => -1,
        _ => unreachable!("reserved Möbius code in a validated table"),
    }
}

/// Sum of the four Möbius values packed into each possible byte.
/// Reserved codes never occur in a validated table; they are given 0 here.
const BYTE_SUM: [i8; 256] = {
    let mut t = [0i8; 256];
    let mut b = 0;
    while b < 256 {
        let mut s = 0i8;
        let mut k = 0;
        while k < 4 {
            let c = (b >> (2 * k)) & 3;
            if c == 1 {
                s += 1;
            } else if c == 2 {
                s -= 1;
            }
            k += 1;
        }
        t[b] = s;
        b += 1;
    }
    t
};

/// Möbius values on `[1, limit]`, two bits per integer.
///
/// Immutable once built; share it behind `&` or `Arc` across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct MobiusTable {
    limit: u64,
    segment_size: u64,
    codes: Vec<u8>,
}

impl std::fmt::Debug for MobiusTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MobiusTable")
            .field("limit", &self.limit)
            .field("segment_size", &self.segment_size)
            .finish_non_exhaustive()
    }
}

impl MobiusTable {
    pub(crate) fn from_codes(limit: u64, segment_size: u64, codes: Vec<u8>) -> Self {
        debug_assert_eq!(codes.len() as u64, limit.div_ceil(4));
        Self {
            limit,
            segment_size,
            codes,
        }
    }

    /// Validates packed codes read from outside the sieve.
    pub(crate) fn from_untrusted_codes(limit: u64, segment_size: u64, codes: Vec<u8>) -> Result<Self> {
        ensure!(
            codes.len() as u64 == limit.div_ceil(4),
            Integrity,
            "expected {} code bytes for limit {limit}, found {}",
            limit.div_ceil(4),
            codes.len()
        );
        for (i, &b) in codes.iter().enumerate() {
            for k in 0..4 {
                let n = i as u64 * 4 + k + 1;
                let c = (b >> (2 * k)) & 3;
                if n > limit {
                    ensure!(c == 0, Integrity, "nonzero padding bits after n = {limit}");
                } else {
                    ensure!(c != CODE_RESERVED, Integrity, "reserved code at n = {n}");
                }
            }
        }
        Ok(Self::from_codes(limit, segment_size, codes))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_size(&self) -> u64 {
        self.segment_size
    }

    /// Packed codes, `n = 1` in the low bit pair of byte 0.
    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    /// μ(n) for `1 <= n <= limit`.
    ///
    /// # Panics
    /// If `n` is 0 or exceeds the limit.
    #[inline]
    pub fn get(&self, n: u64) -> i8 {
        assert!(n >= 1 && n <= self.limit, "μ({n}) outside table [1, {}]", self.limit);
        let i = (n - 1) as usize;
        decode((self.codes[i / 4] >> (2 * (i % 4))) & 3)
    }

    /// μ(n) with every position outside `[1, limit]` read as 0.
    #[inline]
    pub fn get_or_zero(&self, n: i64) -> i8 {
        if n < 1 || n as u64 > self.limit {
            0
        } else {
            self.get(n as u64)
        }
    }

    pub fn try_get(&self, n: u64) -> Result<i8> {
        if n == 0 || n > self.limit {
            return Err(Error::OutOfRange(format!(
                "μ({n}) outside table [1, {}]",
                self.limit
            )));
        }
        Ok(self.get(n))
    }

    /// Σ_{n ≤ upto} μ(n), four values per table lookup.
    pub(crate) fn prefix_sum(&self, upto: u64) -> i64 {
        debug_assert!(upto <= self.limit);
        let full = (upto / 4) as usize;
        let mut s: i64 = self.codes[..full].iter().map(|&b| BYTE_SUM[b as usize] as i64).sum();
        for n in (full as u64 * 4 + 1)..=upto {
            s += self.get(n) as i64;
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        (1..=self.limit).map(move |n| (n, self.get(n)))
    }
}

//! Bit-packed 0/1 words.
//!
//! Symbols are stored least-significant bit first inside 64-bit limbs, so the
//! little-endian byte image of the limbs is exactly the on-disk format used by
//! `build-word --emit-bits` (byte = 8 symbols, first symbol in bit 0).

use std::fmt;

const LIMB: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitWord {
    limbs: Vec<u64>,
    len: usize,
}

impl BitWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            limbs: Vec::with_capacity(bits.div_ceil(LIMB)),
            len: 0,
        }
    }

    /// Parses a word written with the characters `0` and `1`; anything else is rejected.
    pub fn parse(s: &str) -> Option<Self> {
        let mut w = Self::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => w.push(false),
                '1' => w.push(true),
                _ => return None,
            }
        }
        Some(w)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut w = Self::new();
        for b in bits {
            w.push(b);
        }
        w
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Symbol at `i`, `true` meaning `1`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of bounds (len {})", self.len);
        (self.limbs[i / LIMB] >> (i % LIMB)) & 1 == 1
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let off = self.len % LIMB;
        if off == 0 {
            self.limbs.push(0);
        }
        if bit {
            *self.limbs.last_mut().unwrap() |= 1 << off;
        }
        self.len += 1;
    }

    /// Appends `count` copies of the symbol `1`.
    pub fn push_ones(&mut self, count: usize) {
        let mut remaining = count;
        let off = self.len % LIMB;
        if off != 0 && remaining > 0 {
            let take = remaining.min(LIMB - off);
            let mask = ones_mask(take) << off;
            *self.limbs.last_mut().unwrap() |= mask;
            self.len += take;
            remaining -= take;
        }
        while remaining >= LIMB {
            self.limbs.push(u64::MAX);
            self.len += LIMB;
            remaining -= LIMB;
        }
        if remaining > 0 {
            self.limbs.push(ones_mask(remaining));
            self.len += remaining;
        }
    }

    /// Appends `count` copies of the symbol `0`.
    pub fn push_zeros(&mut self, count: usize) {
        self.len += count;
        self.limbs.resize(self.len.div_ceil(LIMB), 0);
    }

    /// Appends the whole of `other`.
    pub fn extend_from(&mut self, other: &BitWord) {
        self.extend_prefix(other, other.len);
    }

    /// Appends the first `count` symbols of `other`.
    pub fn extend_prefix(&mut self, other: &BitWord, count: usize) {
        assert!(count <= other.len);
        if count == 0 {
            return;
        }
        let off = self.len % LIMB;
        let full = count / LIMB;
        let rest = count % LIMB;
        if off == 0 {
            self.limbs.extend_from_slice(&other.limbs[..full]);
            if rest > 0 {
                self.limbs.push(other.limbs[full] & ones_mask(rest));
            }
        } else {
            self.limbs.reserve(count.div_ceil(LIMB) + 1);
            for &limb in &other.limbs[..full] {
                *self.limbs.last_mut().unwrap() |= limb << off;
                self.limbs.push(limb >> (LIMB - off));
            }
            if rest > 0 {
                let limb = other.limbs[full] & ones_mask(rest);
                *self.limbs.last_mut().unwrap() |= limb << off;
                if off + rest > LIMB {
                    self.limbs.push(limb >> (LIMB - off));
                }
            }
        }
        self.len += count;
        self.limbs.truncate(self.len.div_ceil(LIMB));
    }

    /// Shortens the word to `len` symbols; no-op if it is already shorter.
    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.limbs.truncate(len.div_ceil(LIMB));
        let rest = len % LIMB;
        if rest > 0 {
            *self.limbs.last_mut().unwrap() &= ones_mask(rest);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Positions carrying the symbol `0`, in increasing order.
    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        let len = self.len;
        self.limbs.iter().enumerate().flat_map(move |(idx, &limb)| {
            let mut inv = !limb;
            let base = idx * LIMB;
            if base + LIMB > len {
                inv &= ones_mask(len - base);
            }
            std::iter::from_fn(move || {
                if inv == 0 {
                    None
                } else {
                    let tz = inv.trailing_zeros() as usize;
                    inv &= inv - 1;
                    Some(base + tz)
                }
            })
        })
    }

    /// The word with every symbol flipped.
    pub fn complement(&self) -> BitWord {
        let mut out = self.clone();
        for l in &mut out.limbs {
            *l = !*l;
        }
        let rest = out.len % LIMB;
        if rest > 0 {
            *out.limbs.last_mut().unwrap() &= ones_mask(rest);
        }
        out
    }

    /// Packed bytes, eight symbols per byte, first symbol in the least-significant bit.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.limbs.iter().flat_map(|l| l.to_le_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

#[inline]
fn ones_mask(n: usize) -> u64 {
    if n >= LIMB {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "BitWord(\"{self}\")")
        } else {
            write!(f, "BitWord(len={})", self.len)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let w = BitWord::parse("0010011").unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(w.to_string(), "0010011");
        assert_eq!(w.zeros().collect::<Vec<_>>(), vec![0, 1, 3, 4]);
        assert!(BitWord::parse("01x").is_none());
    }

    #[test]
    fn bytes_are_lsb_first() {
        let w = BitWord::parse("100000001").unwrap();
        assert_eq!(w.to_bytes(), vec![0b0000_0001, 0b0000_0001]);
    }

    #[test]
    fn push_ones_crosses_limbs() {
        let mut w = BitWord::parse("0").unwrap();
        w.push_ones(130);
        w.push(false);
        assert_eq!(w.len(), 132);
        assert_eq!(w.count_ones(), 130);
        assert!(!w.get(131));
        assert_eq!(w.zeros().collect::<Vec<_>>(), vec![0, 131]);
    }

    proptest! {
        #[test]
        fn extend_matches_naive(a in proptest::collection::vec(any::<bool>(), 0..200),
                                b in proptest::collection::vec(any::<bool>(), 0..200),
                                cut in 0usize..200) {
            let mut w = BitWord::from_bits(a.iter().copied());
            let other = BitWord::from_bits(b.iter().copied());
            let cut = cut.min(b.len());
            w.extend_prefix(&other, cut);
            let expected: Vec<bool> = a.iter().chain(b[..cut].iter()).copied().collect();
            prop_assert_eq!(w.iter().collect::<Vec<_>>(), expected.clone());
            prop_assert_eq!(w.count_zeros(), expected.iter().filter(|b| !**b).count());
            let mut t = w.clone();
            t.truncate(a.len());
            prop_assert_eq!(t, BitWord::from_bits(a.iter().copied()));
        }
    }
}

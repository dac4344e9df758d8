//! Correlation sums of μ against cylinder functions `x ↦ x(n+n_1)···x(n+n_l)`
//! evaluated along the canonical point, and the shifted zero-sets M′ that
//! the inclusion–exclusion expansion runs over.

use serde::Serialize;

use crate::bits::BitWord;
use crate::error::{ensure, Result};
use crate::mobius::{masked_mobius_sum, MobiusTable};
use crate::positions::{Membership, PositionSet};
use crate::words::{canonical_prefix, RankOneParams};

/// Largest `l` whose 2^l subsets are expanded.
pub const MAX_EXPANSION_OFFSETS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderFunction {
    offsets: Vec<i64>,
    delta: u64,
}

impl CylinderFunction {
    pub fn new(offsets: Vec<i64>) -> Result<Self> {
        ensure!(!offsets.is_empty(), InvalidArgument, "a cylinder function needs at least one offset");
        ensure!(
            offsets.iter().all(|&o| o != i64::MIN),
            InvalidArgument,
            "offset out of range"
        );
        let delta = max_abs(&offsets);
        Ok(Self { offsets, delta })
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// First index of every sum: max(1, δ+1), so no coordinate is negative.
    pub fn first_index(&self) -> u64 {
        self.delta + 1
    }
}

fn max_abs(offsets: &[i64]) -> u64 {
    offsets.iter().map(|o| o.unsigned_abs()).max().unwrap_or(0)
}

/// M′ on the shrunken window `[start + δ, end − δ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MPrime {
    pub set: PositionSet,
    /// The window was narrower than 2δ, so nothing survives.
    pub degenerate: bool,
}

/// `{n ∈ [δ, W−δ) : n + n_i ∈ M for every i}`. No offsets keeps M whole.
pub fn m_prime(m: &PositionSet, offsets: &[i64]) -> Result<MPrime> {
    let (start, end) = m.window();
    ensure!(start < end, InvalidArgument, "window [{start}, {end}) is empty");
    let delta = max_abs(offsets);
    let lo = start.saturating_add(delta);
    let hi = end.saturating_sub(delta);
    if lo > hi {
        return Ok(MPrime {
            set: PositionSet::from_sorted_unchecked(lo, lo, Vec::new()),
            degenerate: true,
        });
    }
    let Some((&first, rest)) = offsets.split_first() else {
        return Ok(MPrime {
            set: m.clone(),
            degenerate: false,
        });
    };
    let members = m
        .iter()
        .filter_map(|p| p.checked_add_signed(-first))
        .filter(|&n| n >= lo && n < hi)
        .filter(|&n| rest.iter().all(|&o| m.contains(n.wrapping_add_signed(o))))
        .collect();
    Ok(MPrime {
        set: PositionSet::from_sorted_unchecked(lo, hi, members),
        degenerate: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationSum {
    #[serde(rename = "N")]
    pub n: u64,
    /// The sum runs over `first_index..=N`.
    pub first_index: u64,
    #[serde(rename = "S")]
    pub s: i64,
    #[serde(rename = "S_over_N")]
    pub s_over_n: f64,
    /// Indices in range whose product term is 1.
    pub mask_count: u64,
    pub mask_density: f64,
}

impl CorrelationSum {
    fn new(n: u64, first_index: u64, s: i64, mask_count: u64) -> Self {
        Self {
            n,
            first_index,
            s,
            s_over_n: s as f64 / n as f64,
            mask_count,
            mask_density: mask_count as f64 / n as f64,
        }
    }
}

fn check_inputs(table: &MobiusTable, x: &BitWord, f: &CylinderFunction, n: u64) -> Result<()> {
    ensure!(n >= 1, InvalidArgument, "N must be at least 1");
    ensure!(
        n <= table.limit(),
        OutOfRange,
        "N = {n} exceeds sieve limit {}",
        table.limit()
    );
    ensure!(
        n.checked_add(f.delta).is_some_and(|need| need < x.len() as u64),
        OutOfRange,
        "prefix of length {} is too short for N = {n} with delta {}; need at least N + delta + 1",
        x.len(),
        f.delta
    );
    Ok(())
}

#[inline]
fn term(x: &BitWord, offsets: &[i64], n: u64) -> bool {
    offsets.iter().all(|&o| x.get(n.wrapping_add_signed(o) as usize))
}

/// `S = Σ_{n = δ+1}^{N} μ(n) Π_i x(n + n_i)`.
pub fn correlation_sum(table: &MobiusTable, x: &BitWord, f: &CylinderFunction, n: u64) -> Result<CorrelationSum> {
    Ok(decay_curve_word(table, x, f, &[n])?.pop().unwrap())
}

/// One row per checkpoint, all from a single left-to-right pass.
/// Checkpoints must be strictly increasing.
pub fn decay_curve_word(
    table: &MobiusTable,
    x: &BitWord,
    f: &CylinderFunction,
    checkpoints: &[u64],
) -> Result<Vec<CorrelationSum>> {
    ensure!(!checkpoints.is_empty(), InvalidArgument, "no checkpoints given");
    ensure!(
        checkpoints.windows(2).all(|w| w[0] < w[1]),
        InvalidArgument,
        "checkpoints must be strictly increasing"
    );
    let last = *checkpoints.last().unwrap();
    check_inputs(table, x, f, checkpoints[0])?;
    check_inputs(table, x, f, last)?;

    let first = f.first_index();
    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut s = 0i64;
    let mut hits = 0u64;
    let mut next = checkpoints.iter().copied().peekable();
    while next.peek().is_some_and(|&c| c < first) {
        rows.push(CorrelationSum::new(next.next().unwrap(), first, 0, 0));
    }
    for i in first..=last {
        if term(x, &f.offsets, i) {
            s += table.get(i) as i64;
            hits += 1;
        }
        if next.peek() == Some(&i) {
            next.next();
            rows.push(CorrelationSum::new(i, first, s, hits));
        }
    }
    Ok(rows)
}

/// Decay curve along the canonical point of `params`.
pub fn decay_curve(
    table: &MobiusTable,
    params: &RankOneParams,
    f: &CylinderFunction,
    checkpoints: &[u64],
) -> Result<Vec<CorrelationSum>> {
    let last = checkpoints.iter().copied().max().unwrap_or(0);
    let x = canonical_prefix(params, last.saturating_add(f.delta).saturating_add(1))?;
    decay_curve_word(table, &x, f, checkpoints)
}

/// One term of Π_i (1 − (1 − x(n+n_i))) = Σ_I (−1)^{|I|} Π_{i∈I} [x(n+n_i) = 0].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedSubset {
    /// Indices into the offset list.
    pub subset: Vec<usize>,
    pub sign: i8,
}

/// All 2^l subsets, ordered by their bitmask.
pub fn inclusion_exclusion_expand(f: &CylinderFunction) -> Result<Vec<SignedSubset>> {
    let l = f.offsets.len();
    ensure!(
        l <= MAX_EXPANSION_OFFSETS,
        ResourceLimit,
        "{l} offsets would expand into 2^{l} terms; the limit is {MAX_EXPANSION_OFFSETS}"
    );
    Ok((0u32..1 << l)
        .map(|mask| SignedSubset {
            subset: (0..l).filter(|&i| mask >> i & 1 == 1).collect(),
            sign: if mask.count_ones() % 2 == 0 { 1 } else { -1 },
        })
        .collect())
}

/// The correlation sum rebuilt from masked Möbius sums over the M′ sets of the
/// zero-set, one per signed subset. Agrees exactly with [`correlation_sum`].
pub fn inclusion_exclusion_sum(table: &MobiusTable, x: &BitWord, f: &CylinderFunction, n: u64) -> Result<i64> {
    check_inputs(table, x, f, n)?;
    let zeros = PositionSet::zeros_of(x);
    let first = f.first_index();
    let mut total = 0i64;
    for term in inclusion_exclusion_expand(f)? {
        let offsets: Vec<i64> = term.subset.iter().map(|&i| f.offsets[i]).collect();
        let part = if offsets.is_empty() {
            masked_mobius_sum(table, first..=n, n)?
        } else {
            let mp = m_prime(&zeros, &offsets)?;
            masked_mobius_sum(table, mp.set.iter().filter(|&i| i >= first), n)?
        };
        total += term.sign as i64 * part;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::{mertens, mobius_sieve};

    fn table(limit: u64) -> MobiusTable {
        mobius_sieve(limit, 1 << 12).unwrap()
    }

    #[test]
    fn m_prime_examples() {
        let m = PositionSet::from_predicate(0, 30, |n| n % 3 == 0);
        let same = m_prime(&m, &[0]).unwrap();
        assert_eq!(same.set, m);
        assert!(m_prime(&m, &[0, 1]).unwrap().set.is_empty());
        let pairs = m_prime(&m, &[0, 3]).unwrap();
        assert_eq!(pairs.set.window(), (3, 27));
        assert_eq!(pairs.set.members(), &[3, 6, 9, 12, 15, 18, 21, 24]);
        let tiny = PositionSet::new(0, 3, vec![0]).unwrap();
        assert!(m_prime(&tiny, &[2]).unwrap().degenerate);
        assert!(!m_prime(&tiny, &[1]).unwrap().degenerate);
    }

    #[test]
    fn negative_offsets_stay_in_window() {
        let m = PositionSet::from_predicate(0, 20, |n| n % 2 == 0);
        let mp = m_prime(&m, &[-2, 2]).unwrap();
        assert_eq!(mp.set.window(), (2, 18));
        assert_eq!(mp.set.members(), &[2, 4, 6, 8, 10, 12, 14, 16]);
    }

    #[test]
    fn trivial_words() {
        let t = table(1000);
        let f = CylinderFunction::new(vec![0]).unwrap();
        let ones = BitWord::from_bits(std::iter::repeat_n(true, 1001));
        let zeros = BitWord::from_bits(std::iter::repeat_n(false, 1001));
        for n in [1, 10, 100, 1000] {
            let c = correlation_sum(&t, &ones, &f, n).unwrap();
            assert_eq!(c.s, mertens(&t, n).unwrap().mertens);
            assert_eq!(c.mask_count, n);
            assert_eq!(correlation_sum(&t, &zeros, &f, n).unwrap().s, 0);
        }
        assert!(correlation_sum(&t, &ones, &f, 1000).is_ok());
        let short = BitWord::from_bits(std::iter::repeat_n(true, 1000));
        assert!(correlation_sum(&t, &short, &f, 1000).is_err());
    }

    #[test]
    fn expansion_signs() {
        let f = CylinderFunction::new(vec![0]).unwrap();
        let e = inclusion_exclusion_expand(&f).unwrap();
        assert_eq!(e, vec![
            SignedSubset { subset: vec![], sign: 1 },
            SignedSubset { subset: vec![0], sign: -1 },
        ]);
        let f = CylinderFunction::new(vec![0, 3]).unwrap();
        let signs: Vec<i8> = inclusion_exclusion_expand(&f).unwrap().iter().map(|t| t.sign).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
        let big = CylinderFunction::new((0..21).collect()).unwrap();
        assert!(matches!(inclusion_exclusion_expand(&big), Err(crate::Error::ResourceLimit(_))));
    }

    #[test]
    fn expansion_matches_direct_sum() {
        let t = table(500);
        let p = RankOneParams::classic_katok(vec![4, 6, 8, 10]).unwrap();
        let x = canonical_prefix(&p, 520).unwrap();
        for offs in [vec![0], vec![0, 2], vec![-3, 1, 4], vec![1, 2, 5, 7]] {
            let f = CylinderFunction::new(offs).unwrap();
            let direct = correlation_sum(&t, &x, &f, 500).unwrap().s;
            assert_eq!(inclusion_exclusion_sum(&t, &x, &f, 500).unwrap(), direct);
        }
    }

    #[test]
    fn curve_rows_match_single_sums() {
        let t = table(2000);
        let p = RankOneParams::classic_katok(vec![4, 6, 8, 10]).unwrap();
        let f = CylinderFunction::new(vec![0, 1]).unwrap();
        let rows = decay_curve(&t, &p, &f, &[1, 10, 100, 1000, 1999]).unwrap();
        let x = canonical_prefix(&p, 2001).unwrap();
        for r in &rows {
            assert_eq!(r, &correlation_sum(&t, &x, &f, r.n).unwrap());
        }
        assert_eq!(rows[0].s, 0);
        assert!(decay_curve(&t, &p, &f, &[10, 10]).is_err());
    }
}

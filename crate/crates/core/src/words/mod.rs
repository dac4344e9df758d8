//! Rank-one words `v_n` built by the cutting/spacer recursion
//! `v_{n+1} = v_n 1^{s_{n,1}} v_n 1^{s_{n,2}} ··· v_n 1^{s_{n,r_n}}`, `v_0 = 0`.

mod params;
mod report;

pub use params::{Generator, ParamsConfig, RankOneParams, DEFAULT_MAX_WORD_LEN};
pub use report::{params_report, smallest_period, BoundCheck, ExactValue, ParamsReport};

use serde::Serialize;

use crate::bits::BitWord;
use crate::error::{ensure, Error, Result};
use crate::positions::PositionSet;

/// Positions are kept within 63 bits.
pub const MAX_POSITION: u64 = i64::MAX as u64;

/// The finite word `v_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageWord {
    pub stage: usize,
    pub bits: BitWord,
}

impl StageWord {
    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Start positions of the copies of `v_m` inside `v_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OccurrenceIndex {
    pub m: usize,
    pub n: usize,
    pub indices: Vec<u64>,
}

fn overflow(n: usize) -> Error {
    Error::ResourceLimit(format!("|v_{n}| exceeds 63-bit positions"))
}

/// |v_n| from the recursion |v_{j+1}| = r_j |v_j| + Σ_i s_{j,i}.
pub fn stage_length(params: &RankOneParams, n: usize) -> Result<u64> {
    params.check_stage(n)?;
    let mut len = 1u64;
    for j in 0..n {
        len = params
            .r(j)
            .checked_mul(len)
            .and_then(|x| x.checked_add(params.spacer_total(j)))
            .filter(|&x| x <= MAX_POSITION)
            .ok_or_else(|| overflow(j + 1))?;
    }
    Ok(len)
}

/// Number of zeros in v_n, which is r_0 r_1 ··· r_{n-1}.
pub fn zero_count(params: &RankOneParams, n: usize) -> Result<u64> {
    params.check_stage(n)?;
    let mut count = 1u64;
    for j in 0..n {
        count = count
            .checked_mul(params.r(j))
            .filter(|&x| x <= MAX_POSITION)
            .ok_or_else(|| Error::ResourceLimit(format!("zero count of v_{} exceeds 63 bits", j + 1)))?;
    }
    Ok(count)
}

/// Lengths |v_0| ..= |v_upto|, stopping early (with fewer entries) at the
/// first stage whose length would overflow.
pub fn stage_lengths(params: &RankOneParams, upto: usize) -> Vec<u64> {
    let upto = upto.min(params.depth());
    let mut out = vec![1u64];
    for j in 0..upto {
        let last = *out.last().unwrap();
        match params
            .r(j)
            .checked_mul(last)
            .and_then(|x| x.checked_add(params.spacer_total(j)))
            .filter(|&x| x <= MAX_POSITION)
        {
            Some(len) => out.push(len),
            None => break,
        }
    }
    out
}

/// Materializes v_n.
pub fn build_stage(params: &RankOneParams, n: usize) -> Result<StageWord> {
    let len = stage_length(params, n)?;
    ensure!(
        len <= params.max_word_len(),
        ResourceLimit,
        "|v_{n}| = {len} exceeds the word length budget {}",
        params.max_word_len()
    );
    Ok(StageWord {
        stage: n,
        bits: build_prefix(params, n, len as usize),
    })
}

/// The first `cap` symbols of v_n, built without ever holding more than `cap`
/// symbols of any stage.
fn build_prefix(params: &RankOneParams, n: usize, cap: usize) -> BitWord {
    let mut word = BitWord::parse("0").unwrap();
    word.truncate(cap);
    for j in 0..n {
        let target = cap.min(
            (word.len() as u64 * params.r(j) + params.spacer_total(j)).min(usize::MAX as u64) as usize,
        );
        let mut next = BitWord::with_capacity(target);
        for &s in params.spacer_row(j) {
            if next.len() >= cap {
                break;
            }
            let take = word.len().min(cap - next.len());
            next.extend_prefix(&word, take);
            let ones = (s as usize).min(cap - next.len());
            next.push_ones(ones);
        }
        word = next;
    }
    word
}

/// Positions of the symbol 0 in `word`.
pub fn zero_positions(word: &StageWord) -> PositionSet {
    PositionSet::zeros_of(&word.bits)
}

/// Start positions of v_m inside v_{m+1}: 0, |v_m| + s_{m,1}, ...
fn copy_starts(params: &RankOneParams, m: usize, len_m: u64) -> Vec<u64> {
    let mut pos = 0u64;
    params
        .spacer_row(m)
        .iter()
        .map(|&s| {
            let at = pos;
            pos += len_m + s;
            at
        })
        .collect()
}

/// I_{m,n}, unrolled from stage n down to m without building v_n.
pub fn occurrence_index(params: &RankOneParams, m: usize, n: usize) -> Result<OccurrenceIndex> {
    ensure!(m <= n, InvalidArgument, "occurrence index needs m <= n, got m = {m}, n = {n}");
    params.check_stage(n)?;
    let lengths = stage_lengths(params, n);
    ensure!(lengths.len() > n, ResourceLimit, "|v_{n}| exceeds 63-bit positions");
    let mut count = 1u64;
    for j in m..n {
        count = count.saturating_mul(params.r(j));
    }
    ensure!(
        count <= params.max_word_len(),
        ResourceLimit,
        "|I_{{{m},{n}}}| = {count} exceeds the budget {}",
        params.max_word_len()
    );

    let mut indices = vec![0u64];
    for j in (m..n).rev() {
        let starts = copy_starts(params, j, lengths[j]);
        let mut next = Vec::with_capacity(indices.len() * starts.len());
        for &base in &indices {
            next.extend(starts.iter().map(|&s| base + s));
        }
        indices = next;
    }
    Ok(OccurrenceIndex { m, n, indices })
}

/// Length-`len` prefix of the infinite word V = lim v_n.
pub fn canonical_prefix(params: &RankOneParams, len: u64) -> Result<BitWord> {
    ensure!(
        len <= params.max_word_len(),
        ResourceLimit,
        "prefix length {len} exceeds the word length budget {}",
        params.max_word_len()
    );
    let lengths = stage_lengths(params, params.depth());
    let stage = lengths.iter().position(|&l| l >= len).ok_or_else(|| {
        Error::ResourceLimit(format!(
            "no stage up to depth {} reaches length {len} (longest |v_{}| = {})",
            params.depth(),
            lengths.len() - 1,
            lengths.last().unwrap()
        ))
    })?;
    Ok(build_prefix(params, stage, len as usize))
}

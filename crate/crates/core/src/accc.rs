//! Building blocks of zero-sets and their approximation by unions of residue
//! classes.
//!
//! All reports here are finite-horizon evidence: the properties they probe
//! quantify over every tolerance and every block size, which no finite
//! computation can settle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::words::{build_stage, canonical_prefix, occurrence_index, stage_lengths, RankOneParams};

/// A finite set `A ∋ 0` and the offsets of its translated copies inside a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildingBlock {
    pub block: Vec<u64>,
    pub max_a: u64,
    pub offsets: Vec<u64>,
    pub window_end: u64,
    /// The union of copies equals the zero-set on `[0, covered_until)`; past
    /// that point only a truncated copy remains.
    pub covered_until: u64,
}

/// Splits the zero-set of the canonical prefix `[0, window_end)` into
/// translated copies of the stage-`n` block `A = zero_positions(v_n)`.
pub fn block_decomposition(params: &RankOneParams, n: usize, window_end: u64) -> Result<BuildingBlock> {
    params.check_stage(n)?;
    let lengths = stage_lengths(params, params.depth());
    let h = (n..lengths.len())
        .find(|&h| lengths[h] >= window_end)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "no stage at or above {n} reaches window length {window_end}"
            ))
        })?;

    let block: Vec<u64> = build_stage(params, n)?.bits.zeros().map(|i| i as u64).collect();
    let max_a = *block.last().expect("v_n always contains a 0");
    let copies = occurrence_index(params, n, h)?.indices;
    let split = copies.partition_point(|&i| i + max_a < window_end);
    let offsets = copies[..split].to_vec();
    let covered_until = copies.get(split).copied().unwrap_or(window_end).min(window_end);

    for w in offsets.windows(2) {
        ensure!(
            w[1] - w[0] > max_a,
            Integrity,
            "offsets {} and {} violate the gap condition for max(A) = {max_a}",
            w[0],
            w[1]
        );
    }

    let prefix = canonical_prefix(params, window_end)?;
    let zeros: Vec<u64> = prefix
        .zeros()
        .map(|i| i as u64)
        .take_while(|&i| i < covered_until)
        .collect();
    let union: Vec<u64> = offsets
        .iter()
        .flat_map(|&a| block.iter().map(move |&x| a + x))
        .collect();
    ensure!(
        union == zeros,
        Integrity,
        "copies of the stage-{n} block do not tile the zero-set on [0, {covered_until})"
    );

    Ok(BuildingBlock {
        block,
        max_a,
        offsets,
        window_end,
        covered_until,
    })
}

/// A subset of Z/kZ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueSet {
    pub k: u64,
    pub members: Vec<u64>,
}

/// A residue set together with the size of its symmetric difference against
/// the target and the denominator the discrepancy is taken over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueFit {
    pub residues: ResidueSet,
    pub mismatch: u64,
    pub denominator: u64,
    pub degenerate: bool,
}

impl ResidueFit {
    pub fn discrepancy(&self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.mismatch as f64 / self.denominator as f64
        }
    }

    /// `mismatch / denominator < epsilon`.
    pub fn below(&self, epsilon: f64) -> bool {
        (self.mismatch as f64) < epsilon * self.denominator as f64
    }
}

/// Per-class majority vote: include class `c` iff strictly more of
/// `{0 ≤ i ≤ upper : i ≡ c}` lies in `target` than outside it. Classes are
/// disjoint, so this minimizes the symmetric difference; ties are excluded.
///
/// `target` must be strictly increasing and bounded by `upper`.
pub fn majority_residue_set(target: &[u64], upper: u64, k: u64) -> (ResidueSet, u64) {
    debug_assert!(k >= 1);
    debug_assert!(target.last().is_none_or(|&t| t <= upper));
    let mut inside: BTreeMap<u64, u64> = BTreeMap::new();
    for &t in target {
        *inside.entry(t % k).or_default() += 1;
    }
    let mut members = Vec::new();
    let mut mismatch = 0u64;
    for (c, hits) in inside {
        let total = (upper - c) / k + 1;
        let misses = total - hits;
        if hits > misses {
            members.push(c);
            mismatch += misses;
        } else {
            mismatch += hits;
        }
    }
    (ResidueSet { k, members }, mismatch)
}

/// The residue set `D` minimizing `|{0 ≤ n ≤ max A : [n]_k ∈ D} △ A| / max A`.
///
/// The denominator is `max A`, not `|A|`. For `A = {0}` the quotient is
/// undefined; the fit is reported as `D = {0}` with zero mismatch and flagged
/// degenerate.
pub fn optimal_residue_set(block: &[u64], k: u64) -> Result<ResidueFit> {
    ensure!(k >= 1, InvalidArgument, "modulus k must be at least 1");
    ensure!(
        block.first() == Some(&0),
        InvalidArgument,
        "a building block must be nonempty and contain 0"
    );
    ensure!(
        block.windows(2).all(|w| w[0] < w[1]),
        InvalidArgument,
        "block positions must be strictly increasing"
    );
    let max_a = *block.last().unwrap();
    if max_a == 0 {
        return Ok(ResidueFit {
            residues: ResidueSet { k, members: vec![0] },
            mismatch: 0,
            denominator: 0,
            degenerate: true,
        });
    }
    let (residues, mismatch) = majority_residue_set(block, max_a, k);
    Ok(ResidueFit {
        residues,
        mismatch,
        denominator: max_a,
        degenerate: false,
    })
}

/// Moduli tried when none are given: 2..=64 and the stage lengths |v_1|..|v_h|.
pub fn default_k_candidates(params: &RankOneParams) -> Vec<u64> {
    let mut ks: Vec<u64> = (2..=64).collect();
    ks.extend(
        stage_lengths(params, params.depth())
            .into_iter()
            .skip(1)
            .take_while(|&l| l <= params.max_word_len()),
    );
    ks.sort_unstable();
    ks.dedup();
    ks
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockFit {
    pub stage: usize,
    pub max_a: u64,
    pub mismatch: u64,
    pub denominator: u64,
    pub discrepancy: f64,
    pub residue_count: usize,
    /// Listed only for moduli up to [`LISTED_RESIDUE_LIMIT`].
    pub residues: Option<Vec<u64>>,
}

pub const LISTED_RESIDUE_LIMIT: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetResult {
    pub n_target: u64,
    pub status: TargetStatus,
    pub best: Option<BlockFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusResult {
    pub k: u64,
    /// Every target passed: finite-data evidence for the property at this `k`.
    pub witness: bool,
    pub targets: Vec<TargetResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcccReport {
    pub epsilon: f64,
    pub note: &'static str,
    /// (stage, max A_n) for every block that was examined.
    pub blocks: Vec<(usize, u64)>,
    pub moduli: Vec<ModulusResult>,
    pub witnesses: Vec<u64>,
}

const EVIDENCE_NOTE: &str = "finite-horizon evidence only; not a proof of the property";

/// Looks for moduli `k` at which every block-size target admits a stage block
/// with discrepancy below `epsilon`.
pub fn accc_check(
    params: &RankOneParams,
    epsilon: f64,
    k_candidates: &[u64],
    n_targets: &[u64],
) -> Result<AcccReport> {
    ensure!(
        epsilon > 0.0 && epsilon.is_finite(),
        InvalidArgument,
        "epsilon must be positive, got {epsilon}"
    );
    ensure!(
        k_candidates.iter().all(|&k| k >= 1),
        InvalidArgument,
        "moduli must be at least 1"
    );
    ensure!(
        params.spacer_rows().iter().flatten().any(|&s| s != 0),
        InvalidArgument,
        "all spacers are zero, so V is periodic and the subshift is trivial; refusing to certify"
    );

    let lengths = stage_lengths(params, params.depth());
    let top = lengths
        .iter()
        .rposition(|&l| l <= params.max_word_len())
        .unwrap_or(0);
    let word = build_stage(params, top)?;
    let zeros: Vec<u64> = word.bits.zeros().map(|i| i as u64).collect();
    let blocks: Vec<(usize, &[u64])> = (0..=top)
        .map(|n| {
            let end = zeros.partition_point(|&z| z < lengths[n]);
            (n, &zeros[..end])
        })
        .collect();

    let moduli = k_candidates
        .par_iter()
        .map(|&k| {
            let fits: Vec<(usize, ResidueFit)> = blocks
                .iter()
                .map(|&(n, a)| optimal_residue_set(a, k).map(|f| (n, f)))
                .collect::<Result<_>>()?;
            let targets = n_targets
                .iter()
                .map(|&target| {
                    let best = fits
                        .iter()
                        .filter(|(_, f)| f.denominator >= target && !f.degenerate)
                        .min_by(|(_, a), (_, b)| {
                            (a.mismatch as u128 * b.denominator as u128)
                                .cmp(&(b.mismatch as u128 * a.denominator as u128))
                        });
                    match best {
                        None => TargetResult {
                            n_target: target,
                            status: TargetStatus::Inconclusive,
                            best: None,
                        },
                        Some((n, f)) => TargetResult {
                            n_target: target,
                            status: if f.below(epsilon) {
                                TargetStatus::Pass
                            } else {
                                TargetStatus::Fail
                            },
                            best: Some(BlockFit {
                                stage: *n,
                                max_a: f.denominator,
                                mismatch: f.mismatch,
                                denominator: f.denominator,
                                discrepancy: f.discrepancy(),
                                residue_count: f.residues.members.len(),
                                residues: (k <= LISTED_RESIDUE_LIMIT)
                                    .then(|| f.residues.members.clone()),
                            }),
                        },
                    }
                })
                .collect::<Vec<_>>();
            let witness = !targets.is_empty() && targets.iter().all(|t| t.status == TargetStatus::Pass);
            Ok(ModulusResult { k, witness, targets })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AcccReport {
        epsilon,
        note: EVIDENCE_NOTE,
        blocks: blocks.iter().map(|&(n, a)| (n, *a.last().unwrap())).collect(),
        witnesses: moduli.iter().filter(|m| m.witness).map(|m| m.k).collect(),
        moduli,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClauseA {
    pub m: usize,
    pub n: usize,
    pub k: u64,
    /// Residue holding the most copy starts (smallest on ties).
    pub residue: u64,
    pub off_residue: u64,
    pub copies: u64,
    pub fraction: f64,
}

/// Fraction of copy starts I_{m,n} outside the best single residue class mod k.
pub fn odometer_clause_a(params: &RankOneParams, m: usize, n: usize, k: u64) -> Result<ClauseA> {
    ensure!(m < n, InvalidArgument, "clause (a) needs m < n, got m = {m}, n = {n}");
    ensure!(k >= 1, InvalidArgument, "modulus k must be at least 1");
    let idx = occurrence_index(params, m, n)?.indices;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &i in &idx {
        *counts.entry(i % k).or_default() += 1;
    }
    let (residue, hits) = counts
        .iter()
        .fold((0u64, 0u64), |best, (&j, &c)| if c > best.1 { (j, c) } else { best });
    let copies = idx.len() as u64;
    Ok(ClauseA {
        m,
        n,
        k,
        residue,
        off_residue: copies - hits,
        copies,
        fraction: (copies - hits) as f64 / copies as f64,
    })
}

/// Best residue approximation of I_{l,m} inside `{0 ≤ i ≤ |v_m|}`, measured
/// against `|I_{l,m}|`.
pub fn odometer_clause_b(params: &RankOneParams, l: usize, m: usize, k: u64) -> Result<ResidueFit> {
    ensure!(l <= m, InvalidArgument, "clause (b) needs l <= m, got l = {l}, m = {m}");
    ensure!(k >= 1, InvalidArgument, "modulus k must be at least 1");
    let idx = occurrence_index(params, l, m)?.indices;
    let upper = stage_lengths(params, m)[m];
    let (residues, mismatch) = majority_residue_set(&idx, upper, k);
    Ok(ResidueFit {
        residues,
        mismatch,
        denominator: idx.len() as u64,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_stage() -> RankOneParams {
        RankOneParams::explicit(vec![2, 2], vec![vec![0, 1], vec![0, 1]]).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let p = two_stage();
        let b = block_decomposition(&p, 0, 7).unwrap();
        assert_eq!(b.block, vec![0]);
        assert_eq!(b.offsets, vec![0, 1, 3, 4]);

        let p1 = RankOneParams::explicit(vec![4], vec![vec![0, 0, 1, 1]]).unwrap();
        let b = block_decomposition(&p1, 1, 6).unwrap();
        assert_eq!(b.block, vec![0, 1, 2, 4]);
        assert_eq!(b.offsets, vec![0]);

        let b = block_decomposition(&p, 1, 7).unwrap();
        assert_eq!((b.block.clone(), b.max_a), (vec![0, 1], 1));
        assert_eq!(b.offsets, vec![0, 3]);
        assert_eq!(b.covered_until, 7);
    }

    #[test]
    fn decomposition_with_partial_copy() {
        let p = two_stage();
        // Window [0, 4) = "0010": the copy at 3 is cut after its first symbol.
        let b = block_decomposition(&p, 1, 4).unwrap();
        assert_eq!(b.offsets, vec![0]);
        assert_eq!(b.covered_until, 3);
        assert!(block_decomposition(&p, 1, 8).is_err());
    }

    #[test]
    fn residue_examples() {
        let a: Vec<u64> = (0..100).filter(|n| n % 5 == 0).collect();
        let f = optimal_residue_set(&a, 5).unwrap();
        assert_eq!(f.residues.members, vec![0]);
        assert_eq!(f.mismatch, 0);

        let f = optimal_residue_set(&[0, 1, 2, 4], 2).unwrap();
        assert_eq!(f.residues.members, vec![0]);
        assert_eq!((f.mismatch, f.denominator), (1, 4));
        assert_eq!(f.discrepancy(), 0.25);

        let f = optimal_residue_set(&[0], 3).unwrap();
        assert!(f.degenerate);
        assert_eq!(f.residues.members, vec![0]);
        assert_eq!(f.discrepancy(), 0.0);

        assert!(optimal_residue_set(&[1, 2], 2).is_err());
        assert!(optimal_residue_set(&[0, 2], 0).is_err());
        assert!(optimal_residue_set(&[], 2).is_err());
    }

    #[test]
    fn clause_a_examples() {
        let p = two_stage();
        let a = odometer_clause_a(&p, 1, 2, 3).unwrap();
        assert_eq!((a.residue, a.fraction), (0, 0.0));
        let a = odometer_clause_a(&p, 1, 2, 2).unwrap();
        assert_eq!((a.residue, a.fraction), (0, 0.5));
        assert!(odometer_clause_a(&p, 2, 2, 2).is_err());
    }

    #[test]
    fn clause_b_examples() {
        let p = two_stage();
        let b = odometer_clause_b(&p, 1, 1, 1).unwrap();
        assert!(b.residues.members.is_empty());
        assert_eq!(b.discrepancy(), 1.0);

        let p1 = RankOneParams::explicit(vec![4], vec![vec![0, 0, 1, 1]]).unwrap();
        let b = odometer_clause_b(&p1, 0, 1, 2).unwrap();
        assert_eq!(b.residues.members, vec![0]);
        assert_eq!((b.mismatch, b.denominator), (2, 4));

        // v_1 = 000111 and I_{0,1} = {0,1,2}; mod 6 class 0 is {0, 6}, a tie.
        let flat = RankOneParams::explicit(vec![3], vec![vec![0, 0, 3]]).unwrap();
        let b = odometer_clause_b(&flat, 0, 1, 6).unwrap();
        assert_eq!(b.residues.members, vec![1, 2]);
        assert_eq!(b.mismatch, 1);
    }

    #[test]
    fn refuses_periodic_words() {
        let p = RankOneParams::constant(2, vec![0, 0], 5).unwrap();
        assert!(matches!(accc_check(&p, 0.1, &[2], &[4]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn odometer_like_blocks_fit_stage_lengths() {
        // r_n = 2, spacers (0, 2): |v_{n+1}| = 2|v_n| + 2 and copies sit at a
        // fixed stride, so k = |v_n| + 1 lines up the stage-n structure.
        let p = RankOneParams::constant(2, vec![0, 2], 10).unwrap();
        let lens = stage_lengths(&p, 10);
        let ks: Vec<u64> = vec![2, 3, lens[4] + 1, lens[6] + 1];
        let rep = accc_check(&p, 0.2, &ks, &[10, 100]).unwrap();
        assert_eq!(rep.moduli.len(), ks.len());
        assert!(rep.note.contains("finite"));
        for m in &rep.moduli {
            for t in &m.targets {
                assert_ne!(t.status, TargetStatus::Inconclusive);
            }
        }
        let unreachable = accc_check(&p, 0.2, &[2], &[1 << 40]).unwrap();
        assert_eq!(unreachable.moduli[0].targets[0].status, TargetStatus::Inconclusive);
        assert!(!unreachable.moduli[0].witness);
    }

    #[test]
    fn classic_katok_mod_two_stays_away_from_zero() {
        let p = RankOneParams::classic_katok(vec![4, 6, 8, 10, 12]).unwrap();
        let rep = accc_check(&p, 0.01, &[2], &[10, 100, 1000]).unwrap();
        for t in &rep.moduli[0].targets {
            let fit = t.best.as_ref().unwrap();
            assert!(fit.discrepancy > 0.1, "{fit:?}");
        }
        assert!(rep.witnesses.is_empty());
    }
}

//! Generalized Katok words: 𝒦_m spacer schemes, the segmentation of v_{n+1}
//! into runs u_{n,ℓ} = (v_n 1^{t_{n,ℓ}})^{r_n/m}, and finite-horizon checks of
//! the growth and structure conditions on the parameters.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{ensure, Result};
use crate::positions::Membership;
use crate::words::{stage_length, stage_lengths, RankOneParams};

/// Block count `m`, cutting schedule `r_n`, and run values `t_{n,1..m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatokParams {
    m: u64,
    r_schedule: Vec<u64>,
    t_table: Vec<Vec<u64>>,
}

impl KatokParams {
    pub fn new(m: u64, r_schedule: Vec<u64>, t_table: Vec<Vec<u64>>) -> Result<Self> {
        ensure!(m >= 2, InvalidArgument, "block count m = {m} must be at least 2");
        ensure!(
            r_schedule.len() == t_table.len(),
            InvalidArgument,
            "{} cutting parameters but {} t rows",
            r_schedule.len(),
            t_table.len()
        );
        for (n, (&r, row)) in r_schedule.iter().zip(&t_table).enumerate() {
            ensure!(
                r > 0 && r % m == 0,
                InvalidArgument,
                "r_{n} = {r} is not a positive multiple of m = {m}"
            );
            ensure!(
                row.len() as u64 == m,
                InvalidArgument,
                "t row {n} has {} entries, expected m = {m}",
                row.len()
            );
            ensure!(
                row.iter().all(|&t| t < m),
                InvalidArgument,
                "t row {n} = {row:?} has an entry outside [0, {}]",
                m - 1
            );
        }
        Ok(Self { m, r_schedule, t_table })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.r_schedule.len()
    }

    pub fn r_schedule(&self) -> &[u64] {
        &self.r_schedule
    }

    pub fn t_table(&self) -> &[Vec<u64>] {
        &self.t_table
    }
}

/// s_{n,i} = t_{n, ⌈m i / r_n⌉} for 1 ≤ i ≤ r_n.
pub fn km_spacers(kp: &KatokParams, n: usize) -> Result<Vec<u64>> {
    ensure!(n < kp.depth(), OutOfRange, "stage {n} beyond t table depth {}", kp.depth());
    let (m, r) = (kp.m, kp.r_schedule[n]);
    ensure!(r % m == 0, InvalidArgument, "m = {m} does not divide r_{n} = {r}");
    let t = &kp.t_table[n];
    Ok((1..=r).map(|i| t[((m * i).div_ceil(r) - 1) as usize]).collect())
}

/// Run boundaries σ_{n,0..=m} inside v_{n+1} and the run moduli q_{n,ℓ}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentationRow {
    pub stage: usize,
    pub sigma: Vec<u64>,
    pub moduli: Vec<u64>,
}

pub fn segmentation(kp: &KatokParams, params: &RankOneParams, n: usize) -> Result<SegmentationRow> {
    ensure!(
        n < kp.depth() && n < params.depth(),
        OutOfRange,
        "stage {n} has no row (depths {} and {})",
        kp.depth(),
        params.depth()
    );
    ensure!(
        kp.r_schedule[n] == params.r(n),
        InvalidArgument,
        "r_{n} differs: Katok parameters give {}, word parameters give {}",
        kp.r_schedule[n],
        params.r(n)
    );
    let len = stage_length(params, n)?;
    let next = stage_length(params, n + 1)?;
    let runs = kp.r_schedule[n] / kp.m;
    let moduli: Vec<u64> = kp.t_table[n].iter().map(|&t| len + t).collect();
    let mut sigma = Vec::with_capacity(moduli.len() + 1);
    let mut at = 0u64;
    sigma.push(at);
    for &q in &moduli {
        at += q * runs;
        sigma.push(at);
    }
    ensure!(
        at == next,
        Integrity,
        "σ_{{{n},m}} = {at} but |v_{}| = {next}; parameters are not a 𝒦_m scheme",
        n + 1
    );
    Ok(SegmentationRow { stage: n, sigma, moduli })
}

/// True iff membership in `set` is `q`-periodic on `[a, b)`: for every
/// `n ∈ [a, b − q)`, `n ∈ set ⇔ n + q ∈ set`.
pub fn ccc_check<S: Membership + ?Sized>(set: &S, q: u64, a: u64, b: u64) -> bool {
    let end = b.saturating_sub(q);
    (a..end).all(|n| set.contains(n) == set.contains(n + q))
}

/// C_n = {1, r_n} ∪ {2 ≤ i ≤ r_n − 1 : s_{n,i−1} ≠ s_{n,i}}, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChangePoints {
    pub points: Vec<u64>,
}

impl ChangePoints {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

pub fn change_points(row: &[u64]) -> Result<ChangePoints> {
    let r = row.len();
    ensure!(r >= 2, InvalidArgument, "spacer row of length {r} is shorter than 2");
    let mut points = vec![1u64];
    points.extend((2..r).filter(|&i| row[i - 2] != row[i - 1]).map(|i| i as u64));
    points.push(r as u64);
    Ok(ChangePoints { points })
}

/// ln applied `times` times, or `None` once an argument is not above 1
/// (so every returned value is strictly positive).
fn iterated_ln(x: f64, times: usize) -> Option<f64> {
    let mut v = x;
    for _ in 0..times {
        if v <= 1.0 {
            return None;
        }
        v = v.ln();
    }
    Some(v)
}

/// log log(r) / log log log(len), natural logs. Requires r ≥ 16 and len ≥ 16.
pub fn growth_term(r: u64, len: u64) -> Option<f64> {
    if r < 16 || len < 16 {
        return None;
    }
    Some(iterated_ln(r as f64, 2)? / iterated_ln(len as f64, 3)?)
}

/// log log(r/p) / log log(r), natural logs.
pub fn change_point_term(r: u64, p: usize) -> Option<f64> {
    let ratio = r as f64 / p as f64;
    Some(iterated_ln(ratio, 2)? / iterated_ln(r as f64, 2)?)
}

/// Size of the largest index set using at most `m` distinct spacer values.
pub fn top_values_cover(row: &[u64], m: usize) -> u64 {
    let mut freq: BTreeMap<u64, u64> = BTreeMap::new();
    for &s in row {
        *freq.entry(s).or_default() += 1;
    }
    let mut counts: Vec<u64> = freq.into_values().collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts.into_iter().take(m).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CondIvEntry {
    pub m: u64,
    pub epsilon: f64,
    /// Indices kept by taking the `m` most frequent spacer values.
    pub covered: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageConditions {
    pub stage: usize,
    pub r: u64,
    /// |v_n|, absent once it no longer fits 63 bits.
    pub length: Option<u64>,
    pub change_points: usize,
    pub cond3: Option<f64>,
    pub cond_i: Option<f64>,
    pub cond_ii: Option<f64>,
    pub cond_ii_running_max: Option<f64>,
    pub cond_iii: Option<f64>,
    pub cond_iv: Vec<CondIvEntry>,
    pub flat_stack_ratio: f64,
    /// Why a term is missing, if any is.
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Extent {
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl Extent {
    fn of(values: impl Iterator<Item = Option<f64>>) -> Self {
        let vals: Vec<f64> = values.flatten().collect();
        Extent {
            min: vals.iter().copied().reduce(f64::min),
            max: vals.iter().copied().reduce(f64::max),
        }
    }
}

/// Min/max of each sequence over the last `window` stages. These are finite
/// windows, not limits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailSummary {
    pub window: usize,
    pub first_stage: usize,
    pub cond3: Extent,
    pub cond_i: Extent,
    pub cond_ii_k_estimate: Option<f64>,
    pub cond_iii: Extent,
    pub flat_stack_ratio: Extent,
    /// Per (m, ε): whether the cover condition held at every stage of the window.
    pub cond_iv_all: Vec<CondIvEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub horizon: usize,
    pub stages: Vec<StageConditions>,
    pub tail: TailSummary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionOptions {
    pub m_candidates: Vec<u64>,
    pub epsilons: Vec<f64>,
    pub tail_window: usize,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        Self {
            m_candidates: vec![1, 2, 3, 4],
            epsilons: vec![0.1, 0.01],
            tail_window: 5,
        }
    }
}

/// Per-stage condition terms for stages `0..horizon`.
pub fn condition_report(
    params: &RankOneParams,
    horizon: usize,
    opts: &ConditionOptions,
) -> Result<ConditionReport> {
    params.check_stage(horizon)?;
    ensure!(
        opts.epsilons.iter().all(|&e| (0.0..1.0).contains(&e)),
        InvalidArgument,
        "cover epsilons must lie in [0, 1), got {:?}",
        opts.epsilons
    );
    let lengths = stage_lengths(params, horizon);
    let mut stages = Vec::with_capacity(horizon);
    let mut running_max: Option<f64> = None;

    for n in 0..horizon {
        let row = params.spacer_row(n);
        let r = params.r(n);
        let length = lengths.get(n).copied();
        let mut skipped = Vec::new();
        let p = change_points(row)?.count();

        let cond3 = match length {
            Some(len) => growth_term(r, len),
            None => None,
        };
        if cond3.is_none() {
            skipped.push(match length {
                Some(len) => format!("growth term needs r_n >= 16 and |v_n| >= 16 (r_n = {r}, |v_n| = {len})"),
                None => "|v_n| exceeds 63 bits".to_string(),
            });
        }
        let cond_i = change_point_term(r, p);
        if cond_i.is_none() {
            skipped.push(format!("change-point term needs r_n/p_n > e (r_n = {r}, p_n = {p})"));
        }
        let total: u64 = row.iter().sum();
        let cond_ii = length.map(|len| total as f64 / (r as f64 * len as f64));
        if let Some(v) = cond_ii {
            running_max = Some(running_max.map_or(v, |m: f64| m.max(v)));
        }
        let cond_iv = opts
            .m_candidates
            .iter()
            .flat_map(|&m| {
                let covered = top_values_cover(row, m as usize);
                opts.epsilons.iter().map(move |&eps| CondIvEntry {
                    m,
                    epsilon: eps,
                    covered,
                    holds: covered as f64 >= (1.0 - eps) * r as f64,
                })
            })
            .collect();
        let nonzero = row.iter().filter(|&&s| s != 0).count();

        stages.push(StageConditions {
            stage: n,
            r,
            length,
            change_points: p,
            cond3,
            cond_i,
            cond_ii,
            cond_ii_running_max: running_max,
            cond_iii: cond3,
            cond_iv,
            flat_stack_ratio: nonzero as f64 / r as f64,
            skipped,
        });
    }

    let window = opts.tail_window.min(stages.len());
    let tail = &stages[stages.len() - window..];
    let cond_iv_all = opts
        .m_candidates
        .iter()
        .flat_map(|&m| opts.epsilons.iter().map(move |&eps| (m, eps)))
        .map(|(m, eps)| {
            let hits: Vec<&CondIvEntry> = tail
                .iter()
                .filter_map(|s| s.cond_iv.iter().find(|e| e.m == m && e.epsilon == eps))
                .collect();
            CondIvEntry {
                m,
                epsilon: eps,
                covered: hits.iter().map(|e| e.covered).min().unwrap_or(0),
                holds: !hits.is_empty() && hits.iter().all(|e| e.holds),
            }
        })
        .collect();
    let summary = TailSummary {
        window,
        first_stage: stages.len() - window,
        cond3: Extent::of(tail.iter().map(|s| s.cond3)),
        cond_i: Extent::of(tail.iter().map(|s| s.cond_i)),
        cond_ii_k_estimate: tail.last().and_then(|s| s.cond_ii_running_max),
        cond_iii: Extent::of(tail.iter().map(|s| s.cond_iii)),
        flat_stack_ratio: Extent::of(tail.iter().map(|s| Some(s.flat_stack_ratio))),
        cond_iv_all,
    };

    Ok(ConditionReport {
        horizon,
        stages,
        tail: summary,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl ConditionReport {
    /// One row per stage; empty cells mark skipped terms.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,r,length,change_points,cond3,cond_i,cond_ii,cond_ii_running_max,cond_iii,flat_stack_ratio");
        let cond_iv_cols: Vec<(u64, f64)> = self
            .stages
            .first()
            .map(|s| s.cond_iv.iter().map(|e| (e.m, e.epsilon)).collect())
            .unwrap_or_default();
        for (m, eps) in &cond_iv_cols {
            let _ = write!(out, ",cond_iv_m{m}_eps{eps}");
        }
        out.push('\n');
        for s in &self.stages {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                s.stage,
                s.r,
                s.length.map(|l| l.to_string()).unwrap_or_default(),
                s.change_points,
                opt(s.cond3),
                opt(s.cond_i),
                opt(s.cond_ii),
                opt(s.cond_ii_running_max),
                opt(s.cond_iii),
                s.flat_stack_ratio
            );
            for e in &s.cond_iv {
                let _ = write!(out, ",{}", e.holds);
            }
            out.push('\n');
        }
        out
    }
}

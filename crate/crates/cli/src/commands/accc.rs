use std::fmt::Write as _;
use std::path::Path;

use rq_core::accc::{self, default_k_candidates, ClauseA, TargetStatus};
use serde::Serialize;

use super::{pretty, Ctx};
use crate::config;
use crate::error::{schema, CliResult};

const DEFAULT_N_TARGETS: [u64; 3] = [10, 100, 1000];

pub fn accc_check(
    ctx: &Ctx,
    config_path: &Path,
    epsilon: Option<f64>,
    k_set: Vec<u64>,
    n_targets: Vec<u64>,
) -> CliResult<()> {
    let loaded = config::load(config_path)?;
    let cfg = &loaded.config;
    let epsilon = epsilon
        .or(cfg.epsilon)
        .ok_or_else(|| schema("accc-check needs --epsilon (or `epsilon` in the config)"))?;
    let ks = if !k_set.is_empty() {
        k_set
    } else {
        cfg.k_set.clone().unwrap_or_else(|| default_k_candidates(&loaded.params))
    };
    let targets = if !n_targets.is_empty() {
        n_targets
    } else {
        cfg.n_targets.clone().unwrap_or_else(|| DEFAULT_N_TARGETS.to_vec())
    };
    let report = accc::accc_check(&loaded.params, epsilon, &ks, &targets)?;
    if ctx.json {
        return super::print_json_line(&report);
    }
    let mut s = pretty(&report)?;
    let inconclusive = report
        .moduli
        .iter()
        .flat_map(|m| &m.targets)
        .filter(|t| t.status == TargetStatus::Inconclusive)
        .count();
    let _ = writeln!(
        s,
        "# witnesses at epsilon {epsilon}: {:?}; inconclusive targets: {inconclusive} ({})",
        report.witnesses, report.note
    );
    super::write_or_print(None, &s)
}

#[derive(Serialize)]
struct ClauseB {
    l: usize,
    m: usize,
    k: u64,
    residues: Vec<u64>,
    mismatch: u64,
    denominator: u64,
    discrepancy: f64,
}

#[derive(Serialize)]
struct OdometerOutput {
    clause_a: ClauseA,
    clause_b: ClauseB,
}

pub fn odometer_check(ctx: &Ctx, config_path: &Path, l: usize, m: usize, n: usize, k: u64) -> CliResult<()> {
    let loaded = config::load(config_path)?;
    let params = &loaded.params;
    let a = accc::odometer_clause_a(params, m, n, k)?;
    let b = accc::odometer_clause_b(params, l, m, k)?;
    let out = OdometerOutput {
        clause_a: a,
        clause_b: ClauseB {
            l,
            m,
            k,
            discrepancy: b.discrepancy(),
            residues: b.residues.members,
            mismatch: b.mismatch,
            denominator: b.denominator,
        },
    };
    if ctx.json {
        super::print_json_line(&out)
    } else {
        super::write_or_print(None, &pretty(&out)?)
    }
}

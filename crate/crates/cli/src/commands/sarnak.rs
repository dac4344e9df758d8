use std::fmt::Write as _;
use std::path::Path;

use rq_core::sarnak::{decay_curve, CorrelationSum, CylinderFunction};
use serde::Serialize;

use super::{write_or_print, Ctx};
use crate::config;
use crate::error::{schema, CliResult};
use crate::table::{obtain, resolve_cache_path};
use crate::CacheArgs;

pub fn curve_csv(rows: &[CorrelationSum]) -> String {
    let mut s = String::from("N,S,S_over_N,mask_density\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.n, r.s, r.s_over_n, r.mask_density);
    }
    s
}

#[derive(Serialize)]
struct Summary<'a> {
    offsets: &'a [i64],
    delta: u64,
    first_index: u64,
    sieve_limit: u64,
    rows: &'a [CorrelationSum],
}

#[allow(clippy::too_many_arguments)]
pub fn sarnak_sum(
    ctx: &Ctx,
    config_path: &Path,
    offsets: Vec<i64>,
    checkpoints: Vec<u64>,
    sieve_limit: Option<u64>,
    out: Option<&Path>,
    cache: &CacheArgs,
) -> CliResult<()> {
    let loaded = config::load(config_path)?;
    let cfg = &loaded.config;
    let offsets = if offsets.is_empty() {
        cfg.offsets.clone().unwrap_or_else(|| vec![0])
    } else {
        offsets
    };
    let mut checkpoints = if checkpoints.is_empty() {
        cfg.checkpoints
            .clone()
            .ok_or_else(|| schema("sarnak-sum needs --checkpoints (or `checkpoints` in the config)"))?
    } else {
        checkpoints
    };
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let f = CylinderFunction::new(offsets)?;
    let max_n = *checkpoints.last().ok_or_else(|| schema("no checkpoints given"))?;
    let needed = max_n.saturating_add(f.delta());
    let limit = sieve_limit.or(cfg.sieve_limit).unwrap_or(needed);
    if limit < needed {
        return Err(schema(format!(
            "sieve_limit = {limit} violates sieve_limit >= max checkpoint + max |offset| = {max_n} + {} = {needed}",
            f.delta()
        )));
    }

    let path = resolve_cache_path(cache.cache_path.as_deref(), cfg.cache_path.as_deref(), &loaded.base_dir);
    let table = obtain(&path, limit, cache.segment)?;
    let rows = decay_curve(&table, &loaded.params, &f, &checkpoints)?;

    match out {
        Some(p) => {
            write_or_print(Some(p), &curve_csv(&rows))?;
            let summary = Summary {
                offsets: f.offsets(),
                delta: f.delta(),
                first_index: f.first_index(),
                sieve_limit: limit,
                rows: &rows,
            };
            ctx.emit(&summary, || format!("wrote {} rows to {}\n", rows.len(), p.display()))
        }
        None if ctx.json => super::print_json_line(&rows),
        None => write_or_print(None, &curve_csv(&rows)),
    }
}

use std::path::Path;

use rq_core::katok::{condition_report, ConditionOptions, KatokParams};
use rq_core::words::RankOneParams;

use super::{pretty, write_or_print, Ctx};
use crate::config;
use crate::error::{schema, CliResult};

/// Stretches a one-entry schedule to `depth`, or truncates a longer one.
fn fit<T: Clone>(name: &str, mut items: Vec<T>, depth: usize) -> CliResult<Vec<T>> {
    if items.is_empty() {
        return Err(schema(format!("--{name} is empty")));
    }
    if items.len() == 1 {
        items = vec![items[0].clone(); depth];
    }
    if items.len() < depth {
        return Err(schema(format!(
            "--{name} has {} entries but --depth is {depth}",
            items.len()
        )));
    }
    items.truncate(depth);
    Ok(items)
}

pub fn katok_gen(
    m: u64,
    r_schedule: Vec<u64>,
    t_table: Vec<Vec<u64>>,
    depth: usize,
    out: Option<&Path>,
) -> CliResult<()> {
    let r = fit("r-schedule", r_schedule, depth)?;
    let t = fit("t-table", t_table, depth)?;
    let kp = KatokParams::new(m, r, t)?;
    let params = RankOneParams::km(&kp)?;
    write_or_print(out, &pretty(&params.to_config())?)
}

#[allow(clippy::too_many_arguments)]
pub fn cond_check(
    ctx: &Ctx,
    config_path: &Path,
    horizon: Option<usize>,
    m_candidates: Vec<u64>,
    epsilons: Vec<f64>,
    tail_window: Option<usize>,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> CliResult<()> {
    let loaded = config::load(config_path)?;
    let cfg = &loaded.config;
    let defaults = ConditionOptions::default();
    let opts = ConditionOptions {
        m_candidates: if m_candidates.is_empty() {
            cfg.m_candidates.clone().unwrap_or(defaults.m_candidates)
        } else {
            m_candidates
        },
        epsilons: if epsilons.is_empty() {
            cfg.epsilons
                .clone()
                .or(cfg.epsilon.map(|e| vec![e]))
                .unwrap_or(defaults.epsilons)
        } else {
            epsilons
        },
        tail_window: tail_window.or(cfg.tail_window).unwrap_or(defaults.tail_window),
    };
    let horizon = horizon.or(cfg.horizon).unwrap_or(loaded.params.depth());
    let report = condition_report(&loaded.params, horizon, &opts)?;
    if let Some(path) = csv {
        std::fs::write(path, report.to_csv())?;
    }
    let json = if ctx.json {
        let mut s = serde_json::to_string(&report).map_err(std::io::Error::other)?;
        s.push('\n');
        s
    } else {
        pretty(&report)?
    };
    write_or_print(out, &json)
}

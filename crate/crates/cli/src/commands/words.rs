use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rq_core::words::{build_stage, params_report, ParamsReport};
use serde::Serialize;

use super::Ctx;
use crate::config;
use crate::error::CliResult;

/// Words up to this length are echoed as 0/1 strings.
const ECHO_LIMIT: u64 = 4096;

#[derive(Serialize)]
struct BuildWordOutput {
    stage: usize,
    generator: &'static str,
    length: u64,
    zero_count: u64,
    word: Option<String>,
    report: ParamsReport,
}

pub fn build_word(
    ctx: &Ctx,
    config_path: &Path,
    stage: Option<usize>,
    emit_bits: Option<&Path>,
    bound: Option<u64>,
) -> CliResult<()> {
    let loaded = config::load(config_path)?;
    let params = &loaded.params;
    let stage = stage.or(loaded.config.stage).unwrap_or(params.depth());
    let word = build_stage(params, stage)?;
    if let Some(path) = emit_bits {
        fs::write(path, word.bits.to_bytes())?;
    }
    let out = BuildWordOutput {
        stage,
        generator: params.generator().name(),
        length: word.len(),
        zero_count: word.bits.count_zeros() as u64,
        word: (word.len() <= ECHO_LIMIT).then(|| word.bits.to_string()),
        report: params_report(params, stage, bound.or(loaded.config.bound))?,
    };
    ctx.emit(&out, || {
        let mut s = format!(
            "v_{} ({}): length {}, zeros {}\n",
            out.stage, out.generator, out.length, out.zero_count
        );
        if let Some(w) = out.word.as_ref().filter(|w| w.len() <= 256) {
            let _ = writeln!(s, "{w}");
        }
        if let Some(sum) = out.report.spacer_fraction_partial_sums.last() {
            let _ = writeln!(s, "spacer fraction partial sum: {}/{} ≈ {}", sum.numer, sum.denom, sum.value);
        }
        if let Some(b) = &out.report.bounded_up_to_horizon {
            let _ = writeln!(s, "bounded by {} up to stage {}: {}", b.bound, stage, b.holds);
        }
        s
    })
}

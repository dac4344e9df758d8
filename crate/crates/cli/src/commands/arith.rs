use std::fmt::Write as _;

use rq_core::klr::{klr_admissible, klr_best_offset, klr_double_sum, Epsilon, KlrQuery, OffsetSearch};
use rq_core::mobius::{self, cache, HarmonicSum, MertensReport};
use serde::Serialize;

use super::{print_json_line, Ctx};
use crate::error::{schema, CliResult};
use crate::table::{obtain, resolve_cache_path};
use crate::CacheArgs;

fn table_for(args: &CacheArgs, limit: u64) -> CliResult<mobius::MobiusTable> {
    let path = resolve_cache_path(args.cache_path.as_deref(), None, ".".as_ref());
    obtain(&path, limit.max(1), args.segment)
}

#[derive(Serialize)]
struct CacheOutput {
    path: String,
    requested_limit: u64,
    cached_limit: u64,
}

pub fn mobius_cache(ctx: &Ctx, limit: u64, args: &CacheArgs) -> CliResult<()> {
    if limit == 0 {
        return Err(schema("--limit must be at least 1"));
    }
    let path = resolve_cache_path(args.cache_path.as_deref(), None, ".".as_ref());
    let table = obtain(&path, limit, args.segment)?;
    let out = CacheOutput {
        path: path.display().to_string(),
        requested_limit: limit,
        cached_limit: cache::peek_limit(&path)?.max(table.limit()),
    };
    ctx.emit(&out, || format!("{} covers n <= {}\n", out.path, out.cached_limit))
}

#[derive(Serialize)]
struct MertensRow {
    #[serde(flatten)]
    report: MertensReport,
    abs_density: f64,
    riemann_ratio: Option<f64>,
}

pub fn mertens(ctx: &Ctx, ns: &[u64], epsilon: Option<f64>, args: &CacheArgs) -> CliResult<()> {
    let table = table_for(args, ns.iter().copied().max().unwrap_or(1))?;
    let rows = ns
        .iter()
        .map(|&n| {
            let report = mobius::mertens(&table, n)?;
            Ok(MertensRow {
                abs_density: report.density.abs(),
                riemann_ratio: epsilon.map(|e| report.riemann_ratio(e)),
                report,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    ctx.emit(&rows, || {
        let mut s = String::from("N\tM(N)\t|M(N)|/N\n");
        for r in &rows {
            let _ = writeln!(s, "{}\t{}\t{}", r.report.n, r.report.mertens, r.abs_density);
        }
        s
    })
}

#[derive(Serialize)]
struct ChowlaOutput<'a> {
    exponents: &'a [u8],
    #[serde(rename = "N")]
    n: u64,
    sum: i64,
    sum_over_n: f64,
}

pub fn chowla(ctx: &Ctx, exponents: &[u8], n: u64, args: &CacheArgs) -> CliResult<()> {
    let reach = n.saturating_add(exponents.len().saturating_sub(1) as u64);
    let table = table_for(args, reach)?;
    let sum = mobius::chowla_sum(&table, exponents, n)?;
    let out = ChowlaOutput {
        exponents,
        n,
        sum,
        sum_over_n: sum as f64 / n as f64,
    };
    ctx.emit(&out, || format!("sum = {sum}, sum/N = {}\n", out.sum_over_n))
}

#[derive(Serialize)]
struct Rational {
    exact: String,
    value: f64,
}

impl From<&HarmonicSum> for Rational {
    fn from(h: &HarmonicSum) -> Self {
        Rational {
            exact: h.exact.to_string(),
            value: h.value,
        }
    }
}

#[derive(Serialize)]
struct KlrOutput {
    #[serde(flatten)]
    query: KlrQuery,
    value: u64,
    #[serde(rename = "value_over_N")]
    value_over_n: f64,
    admissible: Option<bool>,
    j_range: String,
    windows: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<SearchInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    divisor_sum: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upto_sum: Option<Rational>,
}

#[derive(Serialize)]
struct SearchInfo {
    mode: String,
    candidates: u64,
}

pub fn klr_eval(
    q: u64,
    l: u64,
    n: u64,
    z: Option<u64>,
    search: Option<OffsetSearch>,
    epsilon: Option<Epsilon>,
    args: &CacheArgs,
) -> CliResult<()> {
    let probe = KlrQuery::new(q, l, n, z.unwrap_or(0))?;
    let lq = q * l;
    // Last window ends at z + (⌊N/Lq⌋ + 1)·Lq − 1, and z < Lq.
    let reach = probe
        .window_count()
        .checked_add(1)
        .and_then(|w| w.checked_mul(lq))
        .ok_or_else(|| schema("window span overflows"))?;
    let table = table_for(args, reach)?;

    let (query, value, search) = match search {
        Some(mode) => {
            let best = klr_best_offset(&table, q, l, n, mode)?;
            let mode = match mode {
                OffsetSearch::Exhaustive => "exhaustive".to_string(),
                OffsetSearch::Stride(k) => format!("stride:{k}"),
            };
            let query = KlrQuery::new(q, l, n, best.z)?;
            (query, best.value, Some(SearchInfo { mode, candidates: best.candidates }))
        }
        None => (probe, klr_double_sum(&table, &probe)?, None),
    };
    let adm = epsilon.as_ref().map(|e| klr_admissible(q, l, e)).transpose()?;
    let out = KlrOutput {
        query,
        value,
        value_over_n: value as f64 / n.max(1) as f64,
        admissible: adm.as_ref().map(|a| a.admissible),
        j_range: "0..=floor(N/(L*q)) inclusive".into(),
        windows: query.window_count(),
        search,
        epsilon: epsilon.map(|e| e.exact().to_string()),
        divisor_sum: adm.as_ref().map(|a| (&a.divisor_sum).into()),
        upto_sum: adm.as_ref().map(|a| (&a.upto_sum).into()),
    };
    print_json_line(&out)
}

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{build_stage, RankOneParams};
use crate::error::Result;

/// Words longer than this are not scanned for periods.
const PERIOD_SCAN_LIMIT: u64 = 1 << 24;

/// An exact rational rendered as decimal strings, plus its f64 rounding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub numer: String,
    pub denom: String,
    pub value: f64,
}

impl From<&BigRational> for ExactValue {
    fn from(r: &BigRational) -> Self {
        ExactValue {
            numer: r.numer().to_string(),
            denom: r.denom().to_string(),
            value: r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub bound: u64,
    /// r_n < bound and s_{n,i} < bound for every stage below the horizon.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamsReport {
    pub horizon: usize,
    pub cutting: Vec<u64>,
    pub spacer_totals: Vec<u64>,
    /// |v_0| ..= |v_horizon| as decimal strings (they may exceed 64 bits).
    pub lengths: Vec<String>,
    pub max_cutting: u64,
    pub max_spacer: u64,
    /// Boundedness can only be checked against a declared bound, and only up to the horizon.
    pub bounded_up_to_horizon: Option<BoundCheck>,
    /// (|v_{n+1}| − r_n|v_n|) / |v_{n+1}| for n < horizon.
    pub spacer_fraction_terms: Vec<ExactValue>,
    /// Running partial sums of `spacer_fraction_terms`.
    pub spacer_fraction_partial_sums: Vec<ExactValue>,
    /// Heuristic only: v_horizon has no period ≤ |v_horizon|/2. `None` when
    /// the word is too long to scan.
    pub aperiodic_heuristic: Option<bool>,
}

pub fn params_report(params: &RankOneParams, horizon: usize, bound: Option<u64>) -> Result<ParamsReport> {
    params.check_stage(horizon)?;
    let cutting = params.cutting()[..horizon].to_vec();
    let spacer_totals: Vec<u64> = (0..horizon).map(|n| params.spacer_total(n)).collect();
    let max_cutting = cutting.iter().copied().max().unwrap_or(0);
    let max_spacer = params.spacer_rows()[..horizon]
        .iter()
        .flat_map(|row| row.iter().copied())
        .max()
        .unwrap_or(0);

    let mut lengths = vec![BigUint::from(1u32)];
    for n in 0..horizon {
        let next = lengths[n].clone() * cutting[n] + spacer_totals[n];
        lengths.push(next);
    }

    let mut terms = Vec::with_capacity(horizon);
    let mut partials = Vec::with_capacity(horizon);
    let mut running = BigRational::zero();
    for n in 0..horizon {
        let term = BigRational::new(BigInt::from(spacer_totals[n]), BigInt::from(lengths[n + 1].clone()));
        running += &term;
        terms.push(ExactValue::from(&term));
        partials.push(ExactValue::from(&running));
    }

    let aperiodic_heuristic = match lengths[horizon].to_u64() {
        Some(len) if len <= PERIOD_SCAN_LIMIT && len <= params.max_word_len() => {
            let word = build_stage(params, horizon)?;
            let symbols: Vec<bool> = word.bits.iter().collect();
            Some(smallest_period(&symbols) * 2 > symbols.len())
        }
        _ => None,
    };

    Ok(ParamsReport {
        horizon,
        cutting,
        spacer_totals,
        lengths: lengths.iter().map(|l| l.to_string()).collect(),
        max_cutting,
        max_spacer,
        bounded_up_to_horizon: bound.map(|b| BoundCheck {
            bound: b,
            holds: max_cutting < b && max_spacer < b,
        }),
        spacer_fraction_terms: terms,
        spacer_fraction_partial_sums: partials,
        aperiodic_heuristic,
    })
}

/// Smallest p ≥ 1 with s[i] = s[i+p] for all valid i (the full length for an
/// empty or primitive-border-free input), via the prefix function.
pub fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    if s.is_empty() {
        return 0;
    }
    let mut fail = vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    s.len() - fail[s.len() - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periods() {
        assert_eq!(smallest_period(b"abab"), 2);
        assert_eq!(smallest_period(b"aaaa"), 1);
        assert_eq!(smallest_period(b"abc"), 3);
        assert_eq!(smallest_period(b"abaab"), 3);
    }

    #[test]
    fn no_spacers_means_zero_sum_and_periodic() {
        let p = RankOneParams::constant(2, vec![0, 0], 6).unwrap();
        for h in 0..=6 {
            let r = params_report(&p, h, None).unwrap();
            assert!(r.spacer_fraction_partial_sums.iter().all(|v| v.numer == "0"));
        }
        let r = params_report(&p, 6, None).unwrap();
        assert_eq!(r.aperiodic_heuristic, Some(false));
    }

    #[test]
    fn single_stage_term() {
        let p = crate::words::RankOneParams::explicit(vec![4], vec![vec![0, 0, 1, 1]]).unwrap();
        let r = params_report(&p, 1, Some(5)).unwrap();
        assert_eq!((r.spacer_fraction_terms[0].numer.as_str(), r.spacer_fraction_terms[0].denom.as_str()), ("1", "3"));
        assert_eq!(r.bounded_up_to_horizon, Some(BoundCheck { bound: 5, holds: true }));
        let r = params_report(&p, 1, Some(4)).unwrap();
        assert!(!r.bounded_up_to_horizon.unwrap().holds);
    }

    #[test]
    fn katok_partial_sums_grow_but_stay_small() {
        let p = RankOneParams::classic_katok((0..10).map(|n| 2 * n + 2).collect()).unwrap();
        let r = params_report(&p, 10, None).unwrap();
        let sums: Vec<f64> = r.spacer_fraction_partial_sums.iter().map(|v| v.value).collect();
        assert!(sums.windows(2).all(|w| w[1] > w[0]));
        assert!(*sums.last().unwrap() < 1.0);
        assert_eq!(r.aperiodic_heuristic, None);
    }
}

/// Parses a nonnegative integer, also accepting exact scientific forms like
/// `1e6` or `2.5e3`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let Some((mantissa, exp)) = s.split_once(['e', 'E']) else {
        return Err(format!("`{s}` is not a nonnegative integer"));
    };
    let exp: u32 = exp
        .strip_prefix('+')
        .unwrap_or(exp)
        .parse()
        .map_err(|_| format!("`{s}`: bad exponent"))?;
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let frac = frac.trim_end_matches('0');
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("`{s}` is not a nonnegative integer"));
    }
    let shift = exp
        .checked_sub(frac.len() as u32)
        .ok_or_else(|| format!("`{s}` is not an integer"))?;
    let digits: u64 = format!("{int}{frac}")
        .parse()
        .map_err(|_| format!("`{s}` is out of range"))?;
    10u64
        .checked_pow(shift)
        .and_then(|p| digits.checked_mul(p))
        .ok_or_else(|| format!("`{s}` is out of range"))
}

pub fn parse_stage(s: &str) -> Result<usize, String> {
    parse_count(s).and_then(|v| usize::try_from(v).map_err(|e| e.to_string()))
}

/// A table written as rows separated by `;`, entries by `,`: `0,1;1,0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rows(pub Vec<Vec<u64>>);

pub fn parse_table(s: &str) -> Result<Rows, String> {
    s.split(';')
        .map(|row| row.split(',').map(parse_count).collect())
        .collect::<Result<_, _>>()
        .map(Rows)
}

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::katok::{km_spacers, KatokParams};

/// Largest word (in symbols) that stage construction will materialize by default.
pub const DEFAULT_MAX_WORD_LEN: u64 = 1 << 31;

/// How the cutting/spacer tables were produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Explicit,
    /// `r_n` even, first half of each spacer row 0 and second half 1.
    ClassicKatok,
    /// 𝒦_m rows: `m` constant runs taken from the `t` table.
    Km { m: u64, t_table: Vec<Vec<u64>> },
    /// The same cutting parameter and spacer row at every stage.
    Constant,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Explicit => "explicit",
            Generator::ClassicKatok => "classic-katok",
            Generator::Km { .. } => "km",
            Generator::Constant => "constant",
        }
    }
}

/// Cutting parameters `r_n` and spacer rows `s_{n,1..r_n}` for stages `0..depth`.
///
/// Row `n` builds `v_{n+1}` from `v_n`, so `depth` rows make `v_0 ..= v_depth`
/// available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneParams {
    generator: Generator,
    cutting: Vec<u64>,
    spacers: Vec<Vec<u64>>,
    max_word_len: u64,
}

/// JSON shape of [`RankOneParams`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub generator: String,
    pub depth: usize,
    #[serde(default)]
    pub cutting: Vec<u64>,
    #[serde(default)]
    pub spacers: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t_table: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_len: Option<u64>,
}

impl RankOneParams {
    pub fn explicit(cutting: Vec<u64>, spacers: Vec<Vec<u64>>) -> Result<Self> {
        Self::validated(Generator::Explicit, cutting, spacers)
    }

    pub fn classic_katok(r_schedule: Vec<u64>) -> Result<Self> {
        let mut rows = Vec::with_capacity(r_schedule.len());
        for (n, &r) in r_schedule.iter().enumerate() {
            ensure!(
                r >= 2 && r % 2 == 0,
                InvalidArgument,
                "classic Katok needs even r_n >= 2, got r_{n} = {r}"
            );
            let half = (r / 2) as usize;
            let mut row = vec![0u64; half];
            row.resize(r as usize, 1);
            rows.push(row);
        }
        Self::validated(Generator::ClassicKatok, r_schedule, rows)
    }

    pub fn km(kp: &KatokParams) -> Result<Self> {
        let rows = (0..kp.depth())
            .map(|n| km_spacers(kp, n))
            .collect::<Result<Vec<_>>>()?;
        Self::validated(
            Generator::Km {
                m: kp.m(),
                t_table: kp.t_table().to_vec(),
            },
            kp.r_schedule().to_vec(),
            rows,
        )
    }

    pub fn constant(r: u64, row: Vec<u64>, depth: usize) -> Result<Self> {
        Self::validated(Generator::Constant, vec![r; depth], vec![row; depth])
    }

    fn validated(generator: Generator, cutting: Vec<u64>, spacers: Vec<Vec<u64>>) -> Result<Self> {
        ensure!(
            cutting.len() == spacers.len(),
            InvalidArgument,
            "{} cutting parameters but {} spacer rows",
            cutting.len(),
            spacers.len()
        );
        for (n, (&r, row)) in cutting.iter().zip(&spacers).enumerate() {
            ensure!(r > 1, InvalidArgument, "cutting parameter r_{n} = {r} must exceed 1");
            ensure!(
                row.len() as u64 == r,
                InvalidArgument,
                "spacer row {n} has {} entries but r_{n} = {r}",
                row.len()
            );
        }
        Ok(Self {
            generator,
            cutting,
            spacers,
            max_word_len: DEFAULT_MAX_WORD_LEN,
        })
    }

    /// Replaces the materialization budget (in symbols).
    pub fn with_max_word_len(mut self, max: u64) -> Self {
        self.max_word_len = max;
        self
    }

    pub fn max_word_len(&self) -> u64 {
        self.max_word_len
    }

    pub fn depth(&self) -> usize {
        self.cutting.len()
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn cutting(&self) -> &[u64] {
        &self.cutting
    }

    pub fn r(&self, n: usize) -> u64 {
        self.cutting[n]
    }

    pub fn spacer_row(&self, n: usize) -> &[u64] {
        &self.spacers[n]
    }

    pub fn spacer_rows(&self) -> &[Vec<u64>] {
        &self.spacers
    }

    /// Σ_i s_{n,i}.
    pub fn spacer_total(&self, n: usize) -> u64 {
        self.spacers[n].iter().sum()
    }

    pub(crate) fn check_stage(&self, n: usize) -> Result<()> {
        ensure!(
            n <= self.depth(),
            OutOfRange,
            "stage {n} exceeds parameter depth {}",
            self.depth()
        );
        Ok(())
    }

    pub fn from_config(cfg: &ParamsConfig) -> Result<Self> {
        let depth = cfg.depth;
        let take = |what: &str, v: &[u64]| -> Result<Vec<u64>> {
            ensure!(
                v.len() >= depth,
                InvalidArgument,
                "{what} has {} entries, depth {depth} needs {depth}",
                v.len()
            );
            Ok(v[..depth].to_vec())
        };
        let params = match cfg.generator.as_str() {
            "explicit" => {
                let cutting = take("cutting", &cfg.cutting)?;
                ensure!(
                    cfg.spacers.len() >= depth,
                    InvalidArgument,
                    "spacers has {} rows, depth {depth} needs {depth}",
                    cfg.spacers.len()
                );
                Self::explicit(cutting, cfg.spacers[..depth].to_vec())?
            }
            "classic-katok" => Self::classic_katok(take("cutting", &cfg.cutting)?)?,
            "km" => {
                let m = cfg
                    .m
                    .ok_or_else(|| Error::InvalidArgument("generator km requires field m".into()))?;
                ensure!(
                    cfg.t_table.len() >= depth,
                    InvalidArgument,
                    "t_table has {} rows, depth {depth} needs {depth}",
                    cfg.t_table.len()
                );
                let kp = KatokParams::new(
                    m,
                    take("cutting", &cfg.cutting)?,
                    cfg.t_table[..depth].to_vec(),
                )?;
                Self::km(&kp)?
            }
            "constant" => {
                ensure!(
                    cfg.cutting.len() == 1 && cfg.spacers.len() == 1,
                    InvalidArgument,
                    "generator constant takes one cutting value and one spacer row"
                );
                Self::constant(cfg.cutting[0], cfg.spacers[0].clone(), depth)?
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown generator {other:?} (expected explicit, classic-katok, km, constant)"
                )))
            }
        };
        Ok(match cfg.max_word_len {
            Some(max) => params.with_max_word_len(max),
            None => params,
        })
    }

    /// Compact JSON form; the generator is kept so `km` and `constant`
    /// configs round-trip without expanding their rows.
    pub fn to_config(&self) -> ParamsConfig {
        let max_word_len = (self.max_word_len != DEFAULT_MAX_WORD_LEN).then_some(self.max_word_len);
        let depth = self.depth();
        match &self.generator {
            Generator::Explicit => ParamsConfig {
                generator: "explicit".into(),
                depth,
                cutting: self.cutting.clone(),
                spacers: self.spacers.clone(),
                max_word_len,
                ..Default::default()
            },
            Generator::ClassicKatok => ParamsConfig {
                generator: "classic-katok".into(),
                depth,
                cutting: self.cutting.clone(),
                max_word_len,
                ..Default::default()
            },
            Generator::Km { m, t_table } => ParamsConfig {
                generator: "km".into(),
                depth,
                cutting: self.cutting.clone(),
                t_table: t_table.clone(),
                m: Some(*m),
                max_word_len,
                ..Default::default()
            },
            Generator::Constant => ParamsConfig {
                generator: "constant".into(),
                depth,
                cutting: self.cutting.first().map(|&r| vec![r]).unwrap_or_default(),
                spacers: self.spacers.first().map(|row| vec![row.clone()]).unwrap_or_default(),
                max_word_len,
                ..Default::default()
            },
        }
    }
}

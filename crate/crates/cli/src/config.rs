use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use ihat::algebra::FactorList;
use ihat::gengamma::GenGammaParams;
use ihat::hfun::HParams;
use ihat::ihat::IhatSpec;
use ihat::oracle::CombineOp;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    EvalH,
    EvalIhat,
    Pdf,
    Product,
    Sum,
    Quotient,
    Lincomb,
    Sample,
    Compare,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::EvalH => "eval-h",
            Op::EvalIhat => "eval-ihat",
            Op::Pdf => "pdf",
            Op::Product => "product",
            Op::Sum => "sum",
            Op::Quotient => "quotient",
            Op::Lincomb => "lincomb",
            Op::Sample => "sample",
            Op::Compare => "compare",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn xs(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

/// `start:stop:points`.
impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err("expected start:stop:points".into());
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
        let points = n.trim().parse::<usize>().map_err(|e| format!("{n:?}: {e}"))?;
        Ok(Grid { start: num(a)?, stop: num(b)?, points })
    }
}

/// The job as read from JSON; everything is optional until flags are merged
/// in and [`JobConfig::resolve`] checks it.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub op: Option<Op>,
    #[serde(default)]
    pub factors: Vec<GenGammaParams>,
    pub coeffs: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub format: Option<Format>,
    /// How `sample` and `compare` combine the factors.
    pub combine: Option<CombineOp>,
    /// Parameters for `eval-h`.
    pub h: Option<HParams>,
    /// Kernel for `eval-ihat`.
    pub ihat: Option<IhatSpec>,
    pub ks_threshold: Option<f64>,
    pub pdf_threshold: Option<f64>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_KS_THRESHOLD: f64 = 0.005;
pub const DEFAULT_PDF_THRESHOLD: f64 = 1e-5;

/// A checked job.
#[derive(Clone, Debug)]
pub struct Job {
    pub op: Op,
    pub factors: Option<FactorList>,
    pub coeffs: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub combine: CombineOp,
    pub h: Option<HParams>,
    pub ihat: Option<IhatSpec>,
    pub ks_threshold: f64,
    pub pdf_threshold: f64,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<JobConfig, ConfigError> {
        if text.trim().is_empty() {
            return Ok(JobConfig::default());
        }
        serde_json::from_str(text)
            .map_err(|e| ConfigError(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn resolve(self) -> Result<Job, ConfigError> {
        let Some(op) = self.op else {
            return fail("field `op`: missing (set it in the config or with --op)");
        };
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return fail(format!("field `tol`: must be positive, got {tol}"));
        }
        if let Some(g) = &self.grid {
            if g.points < 2 {
                return fail(format!("field `grid.points`: need at least 2, got {}", g.points));
            }
            if !(g.stop > g.start) || !g.start.is_finite() || !g.stop.is_finite() {
                return fail(format!("field `grid`: need finite start < stop, got {}..{}", g.start, g.stop));
            }
        }
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return fail("field `samples`: must be positive");
        }
        for (i, p) in self.factors.iter().enumerate() {
            if let Err(e) = p.validate() {
                return fail(format!("field `factors[{i}]`: {e}"));
            }
        }
        let n = self.factors.len();
        let arity = match op {
            Op::EvalH | Op::EvalIhat => None,
            Op::Pdf => Some((n == 1, "exactly one factor")),
            Op::Quotient => Some((n == 2, "exactly two factors")),
            Op::Product | Op::Sum | Op::Lincomb | Op::Sample | Op::Compare => Some((n >= 1, "at least one factor")),
        };
        if let Some((ok, need)) = arity {
            if !ok {
                return fail(format!("field `factors`: `{}` needs {need}, got {n}", op.name()));
            }
        }
        if let Some(c) = &self.coeffs {
            if c.len() != n {
                return fail(format!("field `coeffs`: one per factor, got {} for {n}", c.len()));
            }
            if let Some(i) = c.iter().position(|&a| !(a > 0.0 && a.is_finite())) {
                return fail(format!("field `coeffs[{i}]`: must be positive"));
            }
        }
        if op == Op::Lincomb && self.coeffs.is_none() {
            return fail("field `coeffs`: required by `lincomb`");
        }
        let combine = match (op, self.combine) {
            (Op::Compare, None) => return fail("field `combine`: required by `compare` (sum, product or quotient)"),
            (_, Some(c)) => c,
            (_, None) => CombineOp::Sum,
        };
        if matches!(op, Op::Sample | Op::Compare) {
            if combine == CombineOp::Quotient && n != 2 {
                return fail("field `factors`: a quotient needs exactly two factors");
            }
            if self.coeffs.is_some() && combine != CombineOp::Sum {
                return fail("field `coeffs`: only a sum takes coefficients");
            }
        }
        let needs_grid = !matches!(op, Op::Sample);
        if needs_grid && self.grid.is_none() {
            return fail(format!("field `grid`: required by `{}` (or --grid start:stop:points)", op.name()));
        }
        if op == Op::EvalH && self.h.is_none() {
            return fail("field `h`: required by `eval-h`");
        }
        if let Some(h) = &self.h {
            if let Err(e) = h.validate() {
                return fail(format!("field `h`: {e}"));
            }
        }
        if op == Op::EvalIhat && self.ihat.is_none() {
            return fail("field `ihat`: required by `eval-ihat`");
        }
        let factors = if n > 0 {
            Some(FactorList::new(self.factors).map_err(|e| ConfigError(format!("field `factors`: {e}")))?)
        } else {
            None
        };
        Ok(Job {
            op,
            factors,
            coeffs: self.coeffs,
            grid: self.grid,
            tol,
            seed: self.seed.unwrap_or(0),
            samples,
            format: self.format.unwrap_or_default(),
            combine,
            h: self.h,
            ihat: self.ihat,
            ks_threshold: self.ks_threshold.unwrap_or(DEFAULT_KS_THRESHOLD),
            pdf_threshold: self.pdf_threshold.unwrap_or(DEFAULT_PDF_THRESHOLD),
        })
    }
}

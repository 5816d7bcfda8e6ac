use std::fmt::Write;

use ihat::algebra::{self, FactorList, InversionSettings};
use ihat::gengamma::{self, GenGammaParams};
use ihat::hfun;
use ihat::ihat as ih;
use ihat::oracle::{self, CombineOp, SampleSet, TabulatedCdf};
use ihat::{Complex64, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, Job, Op};

/// Tolerance of the convolution oracle in `compare`.
const ORACLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub x: f64,
    pub pdf: f64,
    pub cdf: f64,
    pub err_est: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridResult {
    pub rows: Vec<Row>,
}

/// H or Î values on a grid of real arguments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueRow {
    pub x: f64,
    pub value: f64,
    pub err_est: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueTable {
    pub rows: Vec<ValueRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub combine: CombineOp,
    pub samples: usize,
    pub seed: u64,
    pub ks: f64,
    pub ks_threshold: f64,
    /// Largest gap to the convolution oracle; only two-factor jobs have one.
    pub max_pdf_gap: Option<f64>,
    pub pdf_threshold: f64,
    pub passed: bool,
}

pub enum Output {
    Grid(GridResult),
    Values(ValueTable),
    Samples(SampleSet),
    Report(ComparisonReport),
}

fn factors(job: &Job) -> &FactorList {
    job.factors.as_ref().expect("checked by resolve")
}

fn grid_xs(job: &Job) -> Vec<f64> {
    job.grid.expect("checked by resolve").xs()
}

pub fn run(job: &Job) -> Result<Output, Error> {
    match job.op {
        Op::EvalH => eval_h(job).map(Output::Values),
        Op::EvalIhat => eval_ihat(job).map(Output::Values),
        Op::Sample => {
            let fs = factors(job);
            oracle::mc_combine(fs, job.combine, job.coeffs.as_deref(), job.seed, job.samples).map(Output::Samples)
        }
        Op::Compare => compare(job).map(Output::Report),
        _ => tabulate(job, job.op, job.coeffs.as_deref()).map(Output::Grid),
    }
}

fn eval_h(job: &Job) -> Result<ValueTable, Error> {
    let h = job.h.as_ref().expect("checked by resolve");
    let rows = grid_xs(job)
        .into_par_iter()
        .map(|x| {
            let v = hfun::eval_h_auto(h, Complex64::new(x, 0.0), job.tol)?;
            Ok(ValueRow { x, value: v.value.re, err_est: v.abs_err })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ValueTable { rows })
}

fn eval_ihat(job: &Job) -> Result<ValueTable, Error> {
    let mut spec = job.ihat.clone().expect("checked by resolve");
    if spec.contour.is_none() {
        let c = ih::auto_contour(&spec)?.with_tol(job.tol, job.tol);
        spec = spec.with_contour(c);
    }
    let rows = grid_xs(job)
        .into_par_iter()
        .map(|x| {
            let v = ih::eval_ihat(&spec, Complex64::new(x, 0.0))?;
            Ok(ValueRow { x, value: v.value.re, err_est: v.abs_err })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ValueTable { rows })
}

/// `(pdf, err_est, cdf)` at `x` for a table op.
fn point(op: Op, fs: &FactorList, coeffs: Option<&[f64]>, x: f64, inv: &InversionSettings) -> Result<Row, Error> {
    let ((pdf, err_est), cdf) = match op {
        Op::Pdf => {
            let p = &fs.items()[0];
            ((gengamma::pdf(p, x), 0.0), gengamma::cdf(p, x))
        }
        Op::Product => (algebra::product_pdf_with_error(fs, x, inv)?, algebra::product_cdf(fs, x, inv)?),
        Op::Quotient => (algebra::quotient_pdf_with_error(fs, x, inv)?, algebra::quotient_cdf(fs, x, inv)?),
        Op::Sum => match coeffs {
            Some(c) => (
                algebra::linear_combination_pdf_with_error(c, fs, x, inv)?,
                algebra::linear_combination_cdf(c, fs, x, inv)?,
            ),
            None => (algebra::sum_pdf_with_error(fs, x, inv)?, algebra::sum_cdf(fs, x, inv)?),
        },
        Op::Lincomb => {
            let c = coeffs.expect("checked by resolve");
            (algebra::linear_combination_pdf_with_error(c, fs, x, inv)?, algebra::linear_combination_cdf(c, fs, x, inv)?)
        }
        _ => unreachable!("not a table op"),
    };
    Ok(Row { x, pdf, cdf, err_est })
}

fn tabulate(job: &Job, op: Op, coeffs: Option<&[f64]>) -> Result<GridResult, Error> {
    let fs = factors(job);
    let inv = InversionSettings::with_tolerance(job.tol);
    let rows = grid_xs(job)
        .into_par_iter()
        .map(|x| point(op, fs, coeffs, x, &inv))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(GridResult { rows })
}

/// Density of the combination by direct convolution, for two factors.
fn oracle_pdf(combine: CombineOp, items: &[GenGammaParams], coeffs: Option<&[f64]>, x: f64) -> Result<f64, Error> {
    let (p, q) = (items[0], items[1]);
    let f = |p: GenGammaParams| move |y: f64| gengamma::pdf_excess(&p, y);
    match combine {
        CombineOp::Sum => {
            let (p, q) = match coeffs {
                Some(c) => (gengamma::scale(&p, c[0])?, gengamma::scale(&q, c[1])?),
                None => (p, q),
            };
            oracle::convolve_additive(f(p), f(q), p.mu, q.mu, x, ORACLE_TOL)
        }
        CombineOp::Product => oracle::convolve_multiplicative(f(p), f(q), p.mu, q.mu, x, ORACLE_TOL),
        CombineOp::Quotient => oracle::convolve_ratio(f(p), f(q), p.mu, q.mu, x, ORACLE_TOL),
    }
}

fn compare(job: &Job) -> Result<ComparisonReport, Error> {
    let fs = factors(job);
    let op = match job.combine {
        CombineOp::Sum => Op::Sum,
        CombineOp::Product => Op::Product,
        CombineOp::Quotient => Op::Quotient,
    };
    let table = tabulate(job, op, job.coeffs.as_deref())?;
    let gap = if fs.len() == 2 {
        let gaps = table
            .rows
            .par_iter()
            .map(|r| Ok((oracle_pdf(job.combine, fs.items(), job.coeffs.as_deref(), r.x)? - r.pdf).abs()))
            .collect::<Result<Vec<f64>, Error>>()?;
        Some(gaps.into_iter().fold(0.0, f64::max))
    } else {
        None
    };
    let samples = oracle::mc_combine(fs, job.combine, job.coeffs.as_deref(), job.seed, job.samples)?;
    let cdf = TabulatedCdf::new(table.rows.iter().map(|r| r.x).collect(), table.rows.iter().map(|r| r.cdf).collect())?;
    let ks = oracle::ks_distance(&samples, |x| cdf.eval(x));
    let passed = ks <= job.ks_threshold && gap.map_or(true, |g| g <= job.pdf_threshold);
    Ok(ComparisonReport {
        combine: job.combine,
        samples: job.samples,
        seed: job.seed,
        ks,
        ks_threshold: job.ks_threshold,
        max_pdf_gap: gap,
        pdf_threshold: job.pdf_threshold,
        passed,
    })
}

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(job: &Job) -> String {
    let mut h = format!("# op={}", job.op.name());
    if let Some(fs) = &job.factors {
        let _ = write!(h, ", factors={}", serde_json::to_string(fs.items()).expect("plain numbers"));
    }
    if let Some(c) = &job.coeffs {
        let _ = write!(h, ", coeffs={}", serde_json::to_string(c).expect("plain numbers"));
    }
    if matches!(job.op, Op::Sample | Op::Compare) {
        let _ = write!(h, ", combine={}", serde_json::to_value(job.combine).expect("unit enum").as_str().unwrap_or(""));
    }
    let _ = write!(h, ", tol={:e}, seed={}", job.tol, job.seed);
    h
}

pub fn render(job: &Job, out: &Output) -> String {
    match job.format {
        Format::Json => {
            let mut s = match out {
                Output::Grid(g) => serde_json::to_string_pretty(g),
                Output::Values(v) => serde_json::to_string_pretty(v),
                Output::Samples(s) => serde_json::to_string_pretty(&serde_json::json!({
                    "seed": s.seed, "n": s.n, "values": s.values,
                })),
                Output::Report(r) => serde_json::to_string_pretty(r),
            }
            .expect("finite numbers serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = header(job);
            s.push('\n');
            match out {
                Output::Grid(g) => {
                    s.push_str("x,pdf,cdf,err_est\n");
                    for r in &g.rows {
                        let _ = writeln!(s, "{},{},{},{}", num(r.x), num(r.pdf), num(r.cdf), num(r.err_est));
                    }
                }
                Output::Values(v) => {
                    s.push_str("x,value,err_est\n");
                    for r in &v.rows {
                        let _ = writeln!(s, "{},{},{}", num(r.x), num(r.value), num(r.err_est));
                    }
                }
                Output::Samples(set) => {
                    s.push_str("value\n");
                    for v in &set.values {
                        let _ = writeln!(s, "{}", num(*v));
                    }
                }
                Output::Report(r) => {
                    s.push_str("metric,value,threshold\n");
                    let _ = writeln!(s, "ks,{},{}", num(r.ks), num(r.ks_threshold));
                    if let Some(g) = r.max_pdf_gap {
                        let _ = writeln!(s, "max_pdf_gap,{},{}", num(g), num(r.pdf_threshold));
                    }
                    let _ = writeln!(s, "passed,{},", r.passed);
                }
            }
            s
        }
    }
}

//! Independent reference values for the inversion routines.
//!
//! Convolutions use tanh-sinh quadrature, which shares nothing with the
//! Gauss-Kronrod and contour code used by the inversions. Monte Carlo draws
//! come from one ChaCha8 stream per factor, selected by the factor's index,
//! so a seed fixes every sample set.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt::Write;

use num_traits::Float;
use rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::FactorList;
use crate::error::{Error, Result};
use crate::gengamma;

const MAX_LEVEL: usize = 9;
const MAX_DEPTH: u32 = 14;

/// Tanh-sinh quadrature of `f` on `[a, b]`, refining the step until two
/// levels agree to `tol` and bisecting the interval when they never do.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    tanh_sinh_gaps(|u, v| f(if u <= v { a + u } else { b - v }), b - a, tol)
}

/// Tanh-sinh on an interval of length `len`, calling `f(u, v)` with the
/// distances of each node from both ends. Integrands that are singular at
/// an end get the distance to it without cancellation.
pub fn tanh_sinh_gaps<F: FnMut(f64, f64) -> f64>(mut f: F, len: f64, tol: f64) -> Result<f64> {
    if !(len > 0.0) {
        return Ok(0.0);
    }
    tanh_sinh_rec(&mut f, 0.0, len, len, tol, 0)
}

fn tanh_sinh_rec<F: FnMut(f64, f64) -> f64>(f: &mut F, p: f64, q: f64, len: f64, tol: f64, depth: u32) -> Result<f64> {
    let width = q - p;
    let half = 0.5 * width;
    let rest = len - q;
    let mut sum = f(p + half, rest + half) * FRAC_PI_2;
    let mut h = 1.0;
    let mut prev = f64::NAN;
    for level in 0..=MAX_LEVEL {
        // level 0 takes every multiple of h, later levels only the odd ones
        let (step, first) = if level == 0 { (h, h) } else { (2.0 * h, h) };
        let mut t = first;
        loop {
            let u = FRAC_PI_2 * t.sinh();
            let d = width / (1.0 + (2.0 * u).exp());
            let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            if !(w > 1e-300) || !(d > 0.0) {
                break;
            }
            for (x, y) in [(p + d, rest + (width - d)), (p + (width - d), rest + d)] {
                let v = f(x, y);
                if v.is_finite() {
                    sum += w * v;
                }
            }
            t += step;
        }
        let estimate = half * h * sum;
        if level >= 3 && (estimate - prev).abs() <= tol {
            return Ok(estimate);
        }
        prev = estimate;
        h *= 0.5;
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { abs_err: f64::NAN });
    }
    let mid = p + half;
    Ok(tanh_sinh_rec(f, p, mid, len, 0.5 * tol, depth + 1)? + tanh_sinh_rec(f, mid, q, len, 0.5 * tol, depth + 1)?)
}

/// Tanh-sinh on `[a, ∞)` through `x = a + u / (1 - u)`.
pub fn tanh_sinh_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: f64) -> Result<f64> {
    half_line(|u| f(a + u), tol)
}

/// `∫_0^∞ f(u) du`, with `u = w / (1 - w)` and `1 - w` taken exactly.
fn half_line<F: FnMut(f64) -> f64>(mut f: F, tol: f64) -> Result<f64> {
    tanh_sinh_gaps(
        |w, v| {
            let v = f(w / v) / (v * v);
            if v.is_finite() { v } else { 0.0 }
        },
        1.0,
        tol,
    )
}

// The convolutions take each density as a function of the distance from the
// start of its support, so a factor with a shifted support keeps its
// resolution next to the edge.

/// Density of `X_1 + X_2` at `x`, with supports starting at `start1` and
/// `start2`.
pub fn convolve_additive<F, G>(mut pdf1: F, mut pdf2: G, start1: f64, start2: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    tanh_sinh_gaps(|u, v| pdf1(u) * pdf2(v), x - start1 - start2, tol)
}

/// Density of `X_1 X_2` at `x > 0`: `∫ f_1(t) f_2(x / t) dt / t` over the
/// feasible range of `t`. Supports must start at or above 0.
pub fn convolve_multiplicative<F, G>(mut pdf1: F, mut pdf2: G, start1: f64, start2: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    if start1 < 0.0 || start2 < 0.0 {
        return Err(Error::domain("multiplicative convolution needs nonnegative supports"));
    }
    if !(x > start1 * start2) || x <= 0.0 {
        return Ok(0.0);
    }
    if start2 > 0.0 {
        // t from start1 to x / start2; the second excess is start2 (x/start2 - t) / t
        let len = x / start2 - start1;
        tanh_sinh_gaps(
            |u, v| {
                let t = start1 + u;
                pdf1(u) * pdf2(start2 * v / t) / t
            },
            len,
            tol,
        )
    } else if start1 > 0.0 {
        half_line(
            |u| {
                let t = start1 + u;
                pdf1(u) * pdf2(x / t) / t
            },
            tol,
        )
    } else {
        // split at √x so both halves see the decay of one factor
        let r = x.sqrt();
        let head = tanh_sinh_gaps(|t, _| pdf1(t) * pdf2(x / t) / t, r, 0.5 * tol)?;
        let tail = half_line(
            |u| {
                let t = r + u;
                pdf1(t) * pdf2(x / t) / t
            },
            0.5 * tol,
        )?;
        Ok(head + tail)
    }
}

/// Density of `X_1 / X_2` at `x > 0`: `∫ f_1(x t) f_2(t) t dt` over
/// `t >= start2` with `x t >= start1`. Supports must start at or above 0.
pub fn convolve_ratio<F, G>(mut pdf1: F, mut pdf2: G, start1: f64, start2: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    if start1 < 0.0 || start2 < 0.0 {
        return Err(Error::domain("ratio convolution needs nonnegative supports"));
    }
    if !(x > 0.0) {
        return Ok(0.0);
    }
    // start the integral where the later of the two supports begins
    if x * start2 >= start1 {
        let lead = x * start2 - start1;
        half_line(|u| pdf1(lead + x * u) * pdf2(u) * (start2 + u), tol)
    } else {
        let t0 = start1 / x;
        let lead = t0 - start2;
        half_line(|u| pdf1(x * u) * pdf2(lead + u) * (t0 + u), tol)
    }
}

/// How Monte Carlo draws of the factors are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CombineOp {
    Sum,
    Product,
    Quotient,
}

/// Sorted Monte Carlo draws.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub seed: u64,
    pub n: usize,
}

impl SampleSet {
    pub fn new(mut values: Vec<f64>, seed: u64) -> Self {
        values.sort_by(f64::total_cmp);
        let n = values.len();
        SampleSet { values, seed, n }
    }

    /// `F_n(x)`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.n as f64
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let i = ((q * self.n as f64).ceil() as usize).clamp(1, self.n) - 1;
        self.values[i]
    }

    pub fn mean_of<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.values.iter().map(|&v| g(v)).sum::<f64>() / self.n as f64
    }

    /// One value per line after a `# seed=…, n=…` comment, 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.n + 1));
        let _ = writeln!(out, "# seed={}, n={}", self.seed, self.n);
        for v in &self.values {
            let _ = writeln!(out, "{v:.16e}");
        }
        out
    }
}

/// `n` draws of the combined variable, each factor from its own stream.
/// Coefficients, when given, multiply the factors before combining.
pub fn mc_combine(fs: &FactorList, op: CombineOp, coeffs: Option<&[f64]>, seed: u64, n: usize) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::domain("sample count must be positive"));
    }
    if op == CombineOp::Quotient && fs.len() != 2 {
        return Err(Error::domain("a quotient needs exactly two distributions"));
    }
    if let Some(c) = coeffs {
        if c.len() != fs.len() {
            return Err(Error::domain("one coefficient per distribution"));
        }
        if !c.iter().all(|&a| a > 0.0 && a.is_finite()) {
            return Err(Error::domain("coefficients must be positive"));
        }
    }
    let mut acc: Vec<f64> = match op {
        CombineOp::Sum => alloc::vec![0.0; n],
        CombineOp::Product | CombineOp::Quotient => alloc::vec![1.0; n],
    };
    for (j, p) in fs.items().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let a = coeffs.map_or(1.0, |c| c[j]);
        for slot in acc.iter_mut() {
            let v = a * gengamma::draw(p, &mut rng);
            match (op, j) {
                (CombineOp::Sum, _) => *slot += v,
                (CombineOp::Quotient, 1) => *slot /= v,
                _ => *slot *= v,
            }
        }
    }
    Ok(SampleSet::new(acc, seed))
}

/// Kolmogorov-Smirnov distance between the sample ECDF and `cdf`.
pub fn ks_distance<F: FnMut(f64) -> f64>(samples: &SampleSet, mut cdf: F) -> f64 {
    let n = samples.n as f64;
    samples.values.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((((i + 1) as f64) / n - f).abs()).max((i as f64 / n - f).abs())
    })
}

/// A distribution function known on a grid, linear in between and flat
/// outside.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() || xs.len() < 2 {
            return Err(Error::parameter("a tabulated CDF needs two or more matching points"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::parameter("tabulation points must increase"));
        }
        Ok(TabulatedCdf { xs, fs })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            return self.fs[0];
        }
        if k == self.xs.len() {
            return self.fs[k - 1];
        }
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let w = (x - x0) / (x1 - x0);
        self.fs[k - 1] + w * (self.fs[k] - self.fs[k - 1])
    }
}

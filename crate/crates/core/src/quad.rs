//! Adaptive Gauss-Kronrod quadrature and the half-line integrator used for
//! every vertical contour in the crate.
//!
//! A vertical line `c + i t` is integrated over `t >= 0`. The line is cut into
//! dyadic segments `[0, T0], [T0, 2 T0], ...`; once a segment would be longer
//! than half a period of the expected oscillation `pi / omega`, the cut points
//! switch to consecutive half periods and the partial sums are accelerated with
//! Wynn's epsilon algorithm. Exponentially decaying integrands stop on the
//! geometric tail bound long before that.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// unused when a dependent links std, whose inherent float methods win
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A quadrature result with its absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub abs_err: f64,
    pub evals: usize,
}

impl Estimate {
    fn zero() -> Self {
        Estimate { value: ZERO, abs_err: 0.0, evals: 0 }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One 7-point Gauss / 15-point Kronrod panel on `[a, b]`.
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = fc.norm() * WGK[7];
    let mut fv1 = [ZERO; 7];
    let mut fv2 = [ZERO; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let scale = half.abs();
    let mut err = ((res_k - res_g) * half).norm();
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((res_k * half, err, res_abs))
}

/// Adaptive bisection on `[a, b]` until the summed error estimate falls below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn adaptive<F>(f: &mut F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, limit: usize) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Estimate::zero());
    }
    let (v, e, r) = gk15(f, a, b)?;
    // (a, b, value, err, splittable, integral of |f|)
    let mut pieces: Vec<(f64, f64, Complex64, f64, bool, f64)> = vec![(a, b, v, e, true, r)];
    let mut total = v;
    let mut total_err = e;
    let mut total_abs = r;
    let mut evals = 15;
    loop {
        // Below ~100 ulp of the integral of |f| the estimate is rounding noise.
        let floor = 100.0 * f64::EPSILON * total_abs;
        let target = abs_tol.max(rel_tol * total.norm()).max(floor);
        if total_err <= target {
            break;
        }
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.4)
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(core::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = worst else { break };
        if pieces.len() >= limit {
            return Err(Error::Quadrature { abs_err: total_err });
        }
        let (lo, hi, pv, pe, _, pr) = pieces[i];
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            pieces[i].4 = false;
            continue;
        }
        let (v1, e1, r1) = gk15(f, lo, mid)?;
        let (v2, e2, r2) = gk15(f, mid, hi)?;
        evals += 30;
        total += v1 + v2 - pv;
        total_err += e1 + e2 - pe;
        total_abs += r1 + r2 - pr;
        pieces[i] = (lo, mid, v1, e1, true, r1);
        pieces.push((mid, hi, v2, e2, true, r2));
    }
    // Re-sum to shed the drift of incremental updates.
    let value = pieces.iter().fold(ZERO, |acc, p| acc + p.2);
    let abs_err = pieces.iter().map(|p| p.3).sum();
    Ok(Estimate { value, abs_err, evals })
}

/// Real integrand on a finite interval.
pub fn integrate<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut g = |x: f64| Ok(Complex64::new(f(x), 0.0));
    let est = adaptive(&mut g, a, b, abs_tol, rel_tol, 2000)?;
    Ok((est.value.re, est.abs_err))
}

/// Real integrand on `[a, inf)` through `x = a + (1 - u) / u`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut g = |u: f64| {
        let x = a + (1.0 - u) / u;
        let v = f(x) / (u * u);
        Ok(Complex64::new(if v.is_finite() { v } else { 0.0 }, 0.0))
    };
    let est = adaptive(&mut g, 0.0, 1.0, abs_tol, rel_tol, 2000)?;
    Ok((est.value.re, est.abs_err))
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the highest-order even-column estimate available.
pub fn wynn_epsilon(sums: &[Complex64]) -> Complex64 {
    let n = sums.len();
    if n < 3 {
        return sums.last().copied().unwrap_or(ZERO);
    }
    let mut prev = vec![ZERO; n + 1];
    let mut cur: Vec<Complex64> = sums.to_vec();
    let mut best = sums[n - 1];
    for k in 1..n {
        let len = n - k;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let d = cur[i + 1] - cur[i];
            if d.norm() <= 1e-300 || !d.norm().is_finite() {
                return if k % 2 == 1 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + d.inv());
        }
        if k % 2 == 0 {
            let cand = next[len - 1];
            if !(cand.re.is_finite() && cand.im.is_finite()) {
                return best;
            }
            best = cand;
        }
        prev = cur;
        cur = next;
    }
    best
}

/// Controls for [`integrate_half_line`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineOptions {
    /// Length of the first segment.
    pub t0: f64,
    /// Give up (divergence) once segments reach this height.
    pub t_max: f64,
    /// Angular frequency of the dominant oscillation `exp(i omega t)`, 0 if none.
    pub omega: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for LineOptions {
    fn default() -> Self {
        LineOptions { t0: 1.0, t_max: 1e7, omega: 0.0, abs_tol: 1e-12, rel_tol: 1e-10, max_segments: 4000 }
    }
}

/// `int_0^inf f(t) dt` for a complex integrand along a contour.
pub fn integrate_half_line<F>(mut f: F, opts: &LineOptions) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let half_period = if opts.omega > 0.0 { PI / opts.omega } else { f64::INFINITY };
    let seg_abs = opts.abs_tol / 20.0;
    let seg_rel = (opts.rel_tol / 20.0).max(1e-14);

    let mut start = 0.0;
    let mut len = opts.t0.min(half_period);
    let mut sum = ZERO;
    let mut err = 0.0;
    let mut evals = 0;
    let mut mags: Vec<f64> = Vec::new();
    let mut parts: Vec<Complex64> = Vec::new();
    let mut oscillating: Vec<Complex64> = Vec::new();
    let mut extrapolated: Vec<Complex64> = Vec::new();

    for _ in 0..opts.max_segments {
        let end = start + len;
        let est = adaptive(&mut f, start, end, seg_abs, seg_rel, 400)?;
        sum += est.value;
        err += est.abs_err;
        evals += est.evals;
        // mean size over the segment, so that slow algebraic decay in
        // doubling segments is not mistaken for growth
        mags.push(est.value.norm() / len);
        let target = opts.abs_tol.max(opts.rel_tol * sum.norm());
        let in_periods = len >= half_period;

        // Geometric tail: consecutive contributions shrink by a stable ratio, so
        // the remainder is summed as a geometric series; drift of the ratio
        // bounds the error of that guess. Dyadic pieces of an algebraic tail
        // behave this way as well as exponentially decaying ones.
        parts.push(est.value);
        let n = parts.len();
        if n >= 3 {
            let (v0, v1, v2) = (parts[n - 3], parts[n - 2], parts[n - 1]);
            if v2.norm() == 0.0 && v1.norm() == 0.0 {
                return Ok(Estimate { value: sum, abs_err: err, evals });
            }
            if v1.norm() > 0.0 && v0.norm() > 0.0 && !in_periods {
                let r1 = v2 / v1;
                let r2 = v1 / v0;
                if r1.norm() < 0.9 {
                    let tail = v2 * r1 / (1.0 - r1);
                    let drift = (r1 - r2).norm() / (1.0 - r1).norm();
                    let tail_err = tail.norm() * drift + if r1.norm() < 1e-3 { v2.norm() } else { 0.0 };
                    if tail_err <= target / 10.0 && v2.norm() <= target.max(tail.norm() * 10.0) {
                        return Ok(Estimate { value: sum + tail, abs_err: err + tail_err, evals });
                    }
                }
            }
        }

        if in_periods {
            oscillating.push(sum);
            let window = if oscillating.len() > 40 { &oscillating[oscillating.len() - 40..] } else { &oscillating[..] };
            if window.len() >= 4 {
                extrapolated.push(wynn_epsilon(window));
                let k = extrapolated.len();
                // The epsilon table can stall for a couple of steps on a
                // wrong value, so three agreeing steps are asked for.
                if k >= 4 && oscillating.len() >= 8 {
                    let e0 = extrapolated[k - 1];
                    let d: f64 = (1..4).map(|j| (extrapolated[k - j] - extrapolated[k - j - 1]).norm()).fold(0.0, f64::max);
                    let target = opts.abs_tol.max(opts.rel_tol * e0.norm());
                    if d <= target / 10.0 {
                        return Ok(Estimate { value: e0, abs_err: err + 3.0 * d, evals });
                    }
                }
            }
        } else if mags.len() >= 4 && start >= 8.0 * opts.t0.max(1.0) {
            // Doubling phase: an average size that refuses to shrink over two
            // successive doublings means the integrand is not decaying.
            let n = mags.len();
            if mags[n - 1] >= mags[n - 2] && mags[n - 2] >= mags[n - 3] && mags[n - 1] * len > target {
                return Err(Error::Divergence { height: end });
            }
        }

        start = end;
        if start >= opts.t_max {
            return Err(Error::Divergence { height: start });
        }
        if !in_periods {
            len = start.min(half_period);
        }
    }
    Err(Error::Divergence { height: start })
}

//! Products, quotients and sums of independent shifted generalized gamma
//! variables, by numerical inversion of products of their transforms.
//!
//! Products and quotients go through the Mellin transform. Each factor with a
//! positive shift is first divided by its shift, so the inversion runs on a
//! variable whose support starts at 1 and the result is rescaled afterwards;
//! this keeps the `μ^s` phase out of the integrand. Sums go through the
//! Laplace transform of the unshifted variables, inverted along a Bromwich
//! line at `y = x - Σμ`.
//!
//! Distribution functions are inverted directly (`M(s+1)/s`, `L(s)/s`)
//! instead of integrating inverted densities.

use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::PI;

use num_complex::Complex64;
// unused when a dependent links std, whose inherent float methods win
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gengamma::{self, GenGammaParams};
use crate::quad::{self, LineOptions};

/// Independent factors of a product, quotient or sum.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FactorList {
    items: Vec<GenGammaParams>,
}

impl FactorList {
    pub fn new(items: Vec<GenGammaParams>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::parameter("a factor list needs at least one distribution"));
        }
        items.iter().try_for_each(GenGammaParams::validate)?;
        Ok(FactorList { items })
    }

    pub fn items(&self) -> &[GenGammaParams] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn shift_sum(&self) -> f64 {
        self.items.iter().map(|p| p.mu).sum()
    }
}

/// Contour and accuracy controls for the inversions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InversionSettings {
    /// Real part of the inversion line; chosen per operation when `None`.
    pub abscissa: Option<f64>,
    /// Absolute accuracy target for densities and distribution functions.
    pub tolerance: f64,
    /// Budget of transform evaluations per inverted value.
    pub max_points: usize,
    /// Extra shift of a Bromwich line to the right.
    pub damping: f64,
}

impl Default for InversionSettings {
    fn default() -> Self {
        InversionSettings { abscissa: None, tolerance: 1e-9, max_points: 200_000, damping: 0.0 }
    }
}

impl InversionSettings {
    pub fn with_tolerance(tolerance: f64) -> Self {
        InversionSettings { tolerance, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::parameter("inversion tolerance must be positive"));
        }
        if !(self.damping >= 0.0 && self.damping.is_finite()) {
            return Err(Error::parameter("damping must be a nonnegative rate"));
        }
        Ok(())
    }
}

/// A transform restricted to `Re s = c`.
struct Line<F> {
    transform: F,
    c: f64,
}

impl<F: Fn(Complex64) -> Result<Complex64>> Line<F> {
    fn new(transform: F, c: f64) -> Self {
        Line { transform, c }
    }

    fn at(&self, t: f64) -> Result<Complex64> {
        (self.transform)(Complex64::new(self.c, t))
    }

    /// `(1/2πi) ∫ F(s) e^{-s ln_z} ds` for a transform with real-symmetric
    /// values, with its error estimate.
    fn invert(&self, ln_z: f64, omega: f64, t0: f64, inv: &InversionSettings) -> Result<(f64, f64)> {
        let scale = (-self.c * ln_z).exp();
        if !scale.is_finite() {
            return Err(Error::domain("inversion point too far out for this abscissa"));
        }
        let opts = LineOptions {
            t0,
            t_max: 1e9f64.max(1e4 * self.c.abs()),
            omega,
            // the segment and tail error estimates are not bounds; aim lower
            abs_tol: 0.1 * inv.tolerance,
            rel_tol: 0.1 * inv.tolerance,
            max_segments: 20_000,
        };
        let budget = Cell::new(inv.max_points);
        let est = quad::integrate_half_line(
            |t| {
                let left = budget.get();
                if left == 0 {
                    return Err(Error::Quadrature { abs_err: f64::INFINITY });
                }
                budget.set(left - 1);
                let v = self.at(t)? * Complex64::new(0.0, -t * ln_z).exp();
                Ok(Complex64::new(v.re * scale / PI, 0.0))
            },
            &opts,
        )?;
        Ok((est.value.re, est.abs_err))
    }
}

/// Small negative densities are quadrature noise; large ones mean the
/// contour was wrong.
fn clip_density(x: f64, value: f64, tol: f64) -> Result<f64> {
    if value < -10.0 * tol {
        return Err(Error::InversionQuality { x, value });
    }
    Ok(value.max(0.0))
}

fn clip_probability(x: f64, value: f64, tol: f64) -> Result<f64> {
    if value < -10.0 * tol || value > 1.0 + 10.0 * tol {
        return Err(Error::InversionQuality { x, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Factors divided by their positive shifts, and the product of those shifts.
fn normalized(items: &[GenGammaParams]) -> Result<(Vec<GenGammaParams>, f64)> {
    let mut out = Vec::with_capacity(items.len());
    let mut scale = 1.0;
    for p in items {
        if p.mu < 0.0 {
            return Err(Error::domain("products and quotients need mu >= 0"));
        }
        if p.mu > 0.0 {
            out.push(gengamma::scale(p, 1.0 / p.mu)?);
            scale *= p.mu;
        } else {
            out.push(*p);
        }
    }
    Ok((out, scale))
}

/// `∏ E[X_j^{s-1}]`.
pub fn product_mellin(fs: &FactorList, s: Complex64) -> Result<Complex64> {
    fs.items.iter().try_fold(Complex64::new(1.0, 0.0), |acc, p| Ok(acc * gengamma::mellin_pdf(p, s)?))
}

fn mellin_product(items: &[GenGammaParams], s: Complex64) -> Result<Complex64> {
    items.iter().try_fold(Complex64::new(1.0, 0.0), |acc, p| Ok(acc * gengamma::mellin_pdf(p, s)?))
}

/// Left edge of the common strip of the unshifted factors (`-inf` if none).
fn strip_left(items: &[GenGammaParams]) -> f64 {
    items.iter().filter(|p| p.mu == 0.0).map(|p| 1.0 - p.alpha).fold(f64::NEG_INFINITY, f64::max)
}

/// Minimum of a convex function on `(lo, hi)` by golden section.
fn convex_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..48 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// How far the search for an abscissa reaches into an unbounded side, at
/// least. Near a support edge the saddle moves out like `Σα / distance`.
const SADDLE_REACH: f64 = 30.0;
const MAX_REACH: f64 = 1e12;

fn reach(items: &[GenGammaParams], distance: f64) -> f64 {
    let alpha: f64 = items.iter().map(|p| p.alpha).sum();
    SADDLE_REACH.max(4.0 * alpha / distance).min(MAX_REACH)
}

/// Minimizer of a convex bound on `(lo, hi)` and the bound there. Unbounded
/// sides are cut at `reach` from the other end (or from 0).
fn saddle<F: FnMut(f64) -> f64>(mut bound: F, lo: f64, hi: f64, reach: f64) -> (f64, f64) {
    let a = if lo.is_finite() { lo } else if hi.is_finite() { hi.min(0.0) - reach } else { -reach };
    let b = if hi.is_finite() { hi } else { a.max(0.0) + reach };
    // The bound overflows far out, which golden section cannot see past, so
    // a coarse scan over ±2^k picks the bracket first.
    let top = (b - a).log2().ceil() as i32;
    let mut grid: Vec<f64> = (-4..=top)
        .flat_map(|k| [2f64.powi(k), -2f64.powi(k)])
        .chain([0.0, 0.5 * (a + b)])
        .filter(|&x| x > a && x < b)
        .collect();
    grid.sort_by(f64::total_cmp);
    let values: Vec<f64> = grid.iter().map(|&x| bound(x)).collect();
    let best = (0..grid.len()).filter(|&i| values[i].is_finite()).min_by(|&i, &j| values[i].total_cmp(&values[j]));
    let (a, b) = match best {
        Some(i) => (if i > 0 { grid[i - 1] } else { a }, grid.get(i + 1).copied().unwrap_or(b)),
        None => (a, b),
    };
    let c = convex_min(&mut bound, a, b);
    (c, bound(c))
}

fn ln_positive(v: Result<Complex64>) -> f64 {
    match v {
        Ok(v) if v.re > 0.0 && v.re.is_finite() => v.re.ln(),
        _ => f64::INFINITY,
    }
}

/// Length of the first piece of a line at `c` between singularities at `lo`
/// and `hi`: short next to a pole, long when `|c|` is large and the
/// transform only changes on that scale.
fn first_segment(c: f64, lo: f64, hi: f64) -> f64 {
    (c - lo).min(hi - c).min(c.abs().max(1.0)).max(1e-3)
}

type Transform<'a> = alloc::boxed::Box<dyn Fn(Complex64) -> Result<Complex64> + 'a>;

/// Density and distribution function of a product (or quotient) of factors.
///
/// Each point is inverted on the line through the real saddle of
/// `|M(c)| r^{-c}`, which is convex in `c` because `M(c)` is a moment of a
/// positive variable. On that line the integrand has no large cancelling
/// parts, so the result is accurate relative to its own size deep in both
/// tails.
pub struct MellinInverter<'a> {
    transform: Transform<'a>,
    /// Total shape, which sets how far the saddle can move.
    items: Vec<GenGammaParams>,
    /// Strip of `transform`.
    lo: f64,
    hi: f64,
    scale: f64,
    /// Support of the normalized variable starts at 1 rather than 0.
    edge_at_one: bool,
    inv: InversionSettings,
}

impl<'a> MellinInverter<'a> {
    /// Inverter for `∏ X_j`.
    pub fn product(fs: &FactorList, inv: &InversionSettings) -> Result<MellinInverter<'static>> {
        inv.validate()?;
        let (items, scale) = normalized(&fs.items)?;
        let edge_at_one = items.iter().all(|p| p.mu > 0.0);
        let lo = strip_left(&items);
        if let Some(c) = inv.abscissa {
            if c <= lo {
                return Err(Error::Strip { s: Complex64::new(c, 0.0) });
            }
        }
        Ok(MellinInverter {
            items: items.clone(),
            transform: alloc::boxed::Box::new(move |s| mellin_product(&items, s)),
            lo,
            hi: f64::INFINITY,
            scale,
            edge_at_one,
            inv: *inv,
        })
    }

    /// Inverter for `X_1 / X_2`.
    pub fn quotient(
        numerator: &GenGammaParams,
        denominator: &GenGammaParams,
        inv: &InversionSettings,
    ) -> Result<MellinInverter<'static>> {
        inv.validate()?;
        let (items, _) = normalized(&[*numerator, *denominator])?;
        let (n, d) = (items[0], items[1]);
        let scale = if numerator.mu > 0.0 { numerator.mu } else { 1.0 } / if denominator.mu > 0.0 { denominator.mu } else { 1.0 };
        let lo = if n.mu == 0.0 { 1.0 - n.alpha } else { f64::NEG_INFINITY };
        let hi = if d.mu == 0.0 { 1.0 + d.alpha } else { f64::INFINITY };
        if let Some(c) = inv.abscissa {
            if c <= lo || c >= hi {
                return Err(Error::Strip { s: Complex64::new(c, 0.0) });
            }
        }
        Ok(MellinInverter {
            items,
            transform: alloc::boxed::Box::new(move |s: Complex64| {
                Ok(gengamma::mellin_pdf(&n, s)? * gengamma::mellin_pdf(&d, -s + 2.0)?)
            }),
            lo,
            hi,
            scale,
            edge_at_one: false,
            inv: *inv,
        })
    }

    fn below_support(&self, r: f64) -> bool {
        if self.edge_at_one {
            r <= 1.0
        } else {
            r <= 0.0
        }
    }

    /// `ln |M(c + shift)| - ln |c|^k - c ln r`, `+inf` where it cannot be
    /// evaluated.
    fn bound(&self, c: f64, shift: f64, divide: bool, ln_r: f64) -> f64 {
        let v = ln_positive((self.transform)(Complex64::new(c + shift, 0.0)));
        let d = if divide { c.abs().ln() } else { 0.0 };
        v - d - c * ln_r
    }

    fn saddle(&self, lo: f64, hi: f64, shift: f64, divide: bool, ln_r: f64) -> (f64, f64) {
        saddle(|c| self.bound(c, shift, divide, ln_r), lo, hi, reach(&self.items, ln_r.abs()))
    }


    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.pdf_with_error(x)?.0)
    }

    /// Density and the quadrature's error estimate for it.
    pub fn pdf_with_error(&self, x: f64) -> Result<(f64, f64)> {
        let r = x / self.scale;
        if self.below_support(r) {
            return Ok((0.0, 0.0));
        }
        let ln_r = r.ln();
        let c = match self.inv.abscissa {
            Some(c) => c,
            None => self.saddle(self.lo, self.hi, 0.0, false, ln_r).0,
        };
        let line = Line::new(|s| (self.transform)(s), c);
        let (v, err) = line.invert(ln_r, ln_r.abs(), first_segment(c, self.lo, self.hi), &self.inv)?;
        Ok((clip_density(x, v / self.scale, self.inv.tolerance)?, err / self.scale))
    }

    /// `P(X <= x)` and `P(X > x)`; the smaller one is inverted directly
    /// from `∓M(s+1)/s` on its side of 0 and the other is its complement.
    fn both_tails(&self, x: f64) -> Result<(f64, f64)> {
        let r = x / self.scale;
        if self.below_support(r) {
            return Ok((0.0, 1.0));
        }
        let ln_r = r.ln();
        let (lo, hi) = (self.lo - 1.0, self.hi - 1.0);
        let (c_left, b_left) = self.saddle(lo, 0.0, 1.0, true, ln_r);
        let (c_right, b_right) = self.saddle(0.0, hi, 1.0, true, ln_r);
        let left = b_left <= b_right;
        let (c, sign, seg) = if left {
            (c_left, -1.0, first_segment(c_left, lo, 0.0))
        } else {
            (c_right, 1.0, first_segment(c_right, 0.0, hi))
        };
        let line = Line::new(|s: Complex64| Ok((self.transform)(s + 1.0)? / s * sign), c);
        let (v, _) = line.invert(ln_r, ln_r.abs(), seg, &self.inv)?;
        let v = clip_probability(x, v, self.inv.tolerance)?;
        Ok(if left { (v, 1.0 - v) } else { (1.0 - v, v) })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.both_tails(x)?.0)
    }

    /// `P(X > x)`.
    pub fn sf(&self, x: f64) -> Result<f64> {
        Ok(self.both_tails(x)?.1)
    }
}

/// Density of `∏ X_j` at `x`.
pub fn product_pdf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    MellinInverter::product(fs, inv)?.pdf(x)
}

pub fn product_pdf_with_error(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<(f64, f64)> {
    MellinInverter::product(fs, inv)?.pdf_with_error(x)
}

/// Distribution function of `∏ X_j` at `x`.
pub fn product_cdf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    MellinInverter::product(fs, inv)?.cdf(x)
}

/// Mellin transform of `X_1 / X_2`.
pub fn quotient_mellin(numerator: &GenGammaParams, denominator: &GenGammaParams, s: Complex64) -> Result<Complex64> {
    Ok(gengamma::mellin_pdf(numerator, s)? * gengamma::mellin_pdf(denominator, -s + 2.0)?)
}

fn quotient_pair(fs: &FactorList) -> Result<(GenGammaParams, GenGammaParams)> {
    match fs.items.as_slice() {
        [n, d] => Ok((*n, *d)),
        _ => Err(Error::domain("a quotient needs exactly two distributions")),
    }
}

/// Density of `X_1 / X_2` at `x` for a two-element list.
pub fn quotient_pdf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    let (n, d) = quotient_pair(fs)?;
    MellinInverter::quotient(&n, &d, inv)?.pdf(x)
}

pub fn quotient_pdf_with_error(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<(f64, f64)> {
    let (n, d) = quotient_pair(fs)?;
    MellinInverter::quotient(&n, &d, inv)?.pdf_with_error(x)
}

pub fn quotient_cdf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    let (n, d) = quotient_pair(fs)?;
    MellinInverter::quotient(&n, &d, inv)?.cdf(x)
}

/// `∏ E[e^{-s X_j}]`.
pub fn sum_laplace(fs: &FactorList, s: Complex64) -> Result<Complex64> {
    fs.items.iter().try_fold(Complex64::new(1.0, 0.0), |acc, p| Ok(acc * gengamma::laplace_pdf(p, s)?))
}

/// Laplace transform of the unshifted sum.
fn unshifted_laplace(items: &[GenGammaParams], s: Complex64) -> Result<Complex64> {
    items.iter().try_fold(Complex64::new(1.0, 0.0), |acc, p| Ok(acc * gengamma::laplace_unshifted(p, s)?))
}

/// Left end of the half plane where every unshifted Laplace transform
/// converges: none for `γ > 1`, the rate for exponential tails, 0 otherwise.
fn laplace_left(items: &[GenGammaParams]) -> f64 {
    items
        .iter()
        .map(|p| match p.gamma {
            g if g > 1.0 => f64::NEG_INFINITY,
            g if g == 1.0 => -p.beta,
            _ => 0.0,
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `ln |L(c)| - k ln |c| + c y` for the Bromwich line at `c`.
fn bromwich_bound(items: &[GenGammaParams], c: f64, divide: bool, y: f64) -> f64 {
    let d = if divide { c.abs().ln() } else { 0.0 };
    ln_positive(unshifted_laplace(items, Complex64::new(c, 0.0))) - d + c * y
}

/// A user-fixed Bromwich abscissa, shifted right by the damping.
fn user_abscissa(inv: &InversionSettings, lo: f64) -> Result<Option<f64>> {
    match inv.abscissa {
        Some(c) if c + inv.damping <= lo.max(0.0) => Err(Error::Strip { s: Complex64::new(c, 0.0) }),
        Some(c) => Ok(Some(c + inv.damping)),
        None => Ok(None),
    }
}

fn sum_density(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<Option<(f64, f64)>> {
    inv.validate()?;
    let y = x - fs.shift_sum();
    if !(y > 0.0) {
        return Ok(None);
    }
    let items = &fs.items;
    let lo = laplace_left(items);
    let c = match user_abscissa(inv, lo)? {
        Some(c) => c,
        None => saddle(|c| bromwich_bound(items, c, false, y), lo, f64::INFINITY, reach(items, y)).0 + inv.damping,
    };
    let line = Line::new(|s| unshifted_laplace(items, s), c);
    Ok(Some(line.invert(-y, y, first_segment(c, lo, f64::INFINITY), inv)?))
}

/// `P(Σ X <= x)` and `P(Σ X > x)`, the smaller inverted directly from
/// `±L(s)/s` on its side of 0.
fn sum_tails(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<(f64, f64)> {
    inv.validate()?;
    let y = x - fs.shift_sum();
    if !(y > 0.0) {
        return Ok((0.0, 1.0));
    }
    let items = &fs.items;
    let lo = laplace_left(items);
    let (c, upper) = match user_abscissa(inv, lo)? {
        Some(c) => (c, false),
        None => {
            let far = reach(items, y);
            let (c_left, b_left) = saddle(|c| bromwich_bound(items, c, true, y), 0.0, f64::INFINITY, far);
            if lo < 0.0 {
                let (c_right, b_right) = saddle(|c| bromwich_bound(items, c, true, y), lo, 0.0, far);
                if b_right < b_left {
                    (c_right, true)
                } else {
                    (c_left + inv.damping, false)
                }
            } else {
                (c_left + inv.damping, false)
            }
        }
    };
    let sign = if upper { -1.0 } else { 1.0 };
    let line = Line::new(|s: Complex64| Ok(unshifted_laplace(items, s)? / s * sign), c);
    let (left, right) = if upper { (lo, 0.0) } else { (0.0, f64::INFINITY) };
    let v = clip_probability(x, line.invert(-y, y, first_segment(c, left, right), inv)?.0, inv.tolerance)?;
    Ok(if upper { (1.0 - v, v) } else { (v, 1.0 - v) })
}

/// Density of `Σ X_j` at `x`; zero below `Σμ_j`.
pub fn sum_pdf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    Ok(sum_pdf_with_error(fs, x, inv)?.0)
}

pub fn sum_pdf_with_error(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<(f64, f64)> {
    match sum_density(fs, x, inv)? {
        Some((v, err)) => Ok((clip_density(x, v, inv.tolerance)?, err)),
        None => Ok((0.0, 0.0)),
    }
}

/// Distribution function of `Σ X_j` at `x`.
pub fn sum_cdf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    Ok(sum_tails(fs, x, inv)?.0)
}

/// `P(Σ X_j > x)`.
pub fn sum_sf(fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    Ok(sum_tails(fs, x, inv)?.1)
}

/// The factors of `Σ A_j X_j` as a plain sum.
pub fn scaled_factors(coeffs: &[f64], fs: &FactorList) -> Result<FactorList> {
    if coeffs.len() != fs.len() {
        return Err(Error::domain("one coefficient per distribution"));
    }
    let items = coeffs.iter().zip(fs.items.iter()).map(|(&a, p)| gengamma::scale(p, a)).collect::<Result<Vec<_>>>()?;
    FactorList::new(items)
}

/// Density of `Σ A_j X_j` for positive `A_j`.
pub fn linear_combination_pdf(coeffs: &[f64], fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    sum_pdf(&scaled_factors(coeffs, fs)?, x, inv)
}

pub fn linear_combination_pdf_with_error(coeffs: &[f64], fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<(f64, f64)> {
    sum_pdf_with_error(&scaled_factors(coeffs, fs)?, x, inv)
}

pub fn linear_combination_cdf(coeffs: &[f64], fs: &FactorList, x: f64, inv: &InversionSettings) -> Result<f64> {
    sum_cdf(&scaled_factors(coeffs, fs)?, x, inv)
}

/// `∫_{start}^{x} pdf`, clipped to `[0, 1]`.
pub fn cdf_of<F>(pdf: F, support_start: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok(mass_of(pdf, support_start, x, tol)?.clamp(0.0, 1.0))
}

/// `∫_{start}^{x} pdf` without clipping.
pub fn mass_of<F>(mut pdf: F, support_start: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    mass_of_excess(|y| pdf(support_start + y), x - support_start, tol)
}

/// `∫_0^{y} f`, where `f` takes the excess over the support start. Near the
/// edge that keeps full relative precision in the argument, which a density
/// with an integrable singularity there needs.
///
/// The integral runs in `w = ln t`, where a power singularity at 0 turns
/// into exponential decay.
pub fn mass_of_excess<F>(mut f: F, y: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(y > 0.0) {
        return Ok(0.0);
    }
    let mut in_log = |w: f64| -> Result<f64> {
        let e = w.exp();
        if !(w < 700.0) || e == 0.0 {
            return Ok(0.0);
        }
        Ok(f(e)? * e)
    };
    // w = w0 - (1 - u) / u for u in (0, 1]
    let mut lower = |w0: f64, tol: f64| -> Result<f64> {
        let mut h = |u: f64| {
            if u <= 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            Ok(Complex64::new(in_log(w0 - (1.0 - u) / u)? / (u * u), 0.0))
        };
        Ok(quad::adaptive(&mut h, 0.0, 1.0, tol, tol, 2000)?.value.re)
    };
    if y.is_finite() {
        return lower(y.ln(), tol);
    }
    let head = lower(0.0, 0.5 * tol)?;
    // the tail beyond 1 in t = 1/u, which never asks for absurdly distant
    // points unless the density is still there
    let mut h = |u: f64| {
        if u <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(Complex64::new(f(1.0 / u)? / (u * u), 0.0))
    };
    Ok(head + quad::adaptive(&mut h, 0.0, 1.0, 0.5 * tol, 0.5 * tol, 2000)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gg(a: f64, b: f64, g: f64, m: f64) -> GenGammaParams {
        GenGammaParams::new(a, b, g, m).unwrap()
    }

    fn list(items: &[GenGammaParams]) -> FactorList {
        FactorList::new(items.to_vec()).unwrap()
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn transform_products() {
        let p = gg(1.0, 1.0, 1.0, 1.0);
        let two = list(&[p, p]);
        assert!((product_mellin(&two, real(1.0)).unwrap().re - 1.0).abs() < 1e-14);
        assert!((product_mellin(&two, real(2.0)).unwrap().re - 4.0).abs() < 1e-13);
        let q = gg(2.0, 1.0, 2.0, 0.5);
        let v = quotient_mellin(&q, &q, real(1.5)).unwrap();
        let want = gengamma::mellin_pdf(&q, real(1.5)).unwrap() * gengamma::mellin_pdf(&q, real(0.5)).unwrap();
        assert!((v - want).norm() < 1e-14);
        assert!((quotient_mellin(&q, &p, real(1.0)).unwrap().re - 1.0).abs() < 1e-14);
        let e = list(&[gg(1.0, 2.0, 1.0, 0.5), gg(1.0, 3.0, 1.0, 0.25)]);
        let s = real(0.7);
        let want = (-0.7f64 * 0.75).exp() * 6.0 / (2.7 * 3.7);
        assert!((sum_laplace(&e, s).unwrap().re - want).abs() < 1e-14);
    }

    #[test]
    fn empty_list_rejected() {
        assert!(FactorList::new(vec![]).is_err());
    }

    #[test]
    fn erlang_sums() {
        let inv = InversionSettings::default();
        let e = exponential();
        let v = sum_pdf(&list(&[e, e]), 1.0, &inv).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-8, "{v}");
        let s = gg(1.0, 1.0, 1.0, 1.0);
        let v = sum_pdf(&list(&[s, s]), 3.0, &inv).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-8, "{v}");
        assert_eq!(sum_pdf(&list(&[s, s]), 1.5, &inv).unwrap(), 0.0);
        // Erlang-2 CDF: 1 - (1 + y) e^{-y}
        let f = sum_cdf(&list(&[e, e]), 2.0, &inv).unwrap();
        assert!((f - (1.0 - 3.0 * (-2f64).exp())).abs() < 1e-8, "{f}");
    }

    fn exponential() -> GenGammaParams {
        gg(1.0, 1.0, 1.0, 0.0)
    }

    #[test]
    fn single_product_is_the_density() {
        let inv = InversionSettings::default();
        let p = gg(1.0, 1.0, 1.0, 1.0);
        let v = product_pdf(&list(&[p]), 2.0, &inv).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-8, "{v}");
        assert_eq!(product_pdf(&list(&[p]), 0.9, &inv).unwrap(), 0.0);
        let f = product_cdf(&list(&[p]), 2.0, &inv).unwrap();
        assert!((f - (1.0 - (-1f64).exp())).abs() < 1e-8, "{f}");
    }

    #[test]
    fn linear_combination_single_factor() {
        let inv = InversionSettings::default();
        let p = gg(2.0, 1.0, 1.0, 0.0);
        let v = linear_combination_pdf(&[2.0], &list(&[p]), 3.0, &inv).unwrap();
        let want = gengamma::pdf(&p, 1.5) / 2.0;
        assert!((v - want).abs() < 1e-8);
        assert!(linear_combination_pdf(&[-1.0], &list(&[p]), 3.0, &inv).is_err());
    }

    #[test]
    fn quotient_needs_two() {
        let p = gg(1.0, 1.0, 1.0, 1.0);
        assert!(quotient_pdf(&list(&[p]), 1.0, &InversionSettings::default()).is_err());
        assert_eq!(quotient_pdf(&list(&[p, p]), -1.0, &InversionSettings::default()).unwrap(), 0.0);
    }

    #[test]
    fn cdf_by_quadrature() {
        let e = exponential();
        let pdf = |x: f64| Ok(gengamma::pdf(&e, x));
        assert_eq!(cdf_of(pdf, 0.0, 0.0, 1e-10).unwrap(), 0.0);
        assert!((cdf_of(pdf, 0.0, 2f64.ln(), 1e-12).unwrap() - 0.5).abs() < 1e-12);
        assert!((cdf_of(pdf, 0.0, f64::INFINITY, 1e-12).unwrap() - 1.0).abs() < 1e-10);
    }
}

//! The Î function: an inverse Mellin transform whose kernel is a product of H
//! functions.
//!
//! Each factor of the kernel is
//!
//! ```text
//! (α s + β)^(Λ s + Θ) · e^(ζ s + η) · H^{m,n}_{p,q}[(γ + Γ s)^(π + Π s) | entries affine in s]^(ρ s + σ)
//! ```
//!
//! and [`eval_ihat`] integrates the product of the factors against `z^{-s}`
//! along a vertical line. Inner H functions of three common shapes have closed
//! forms (a bare gamma value, an upper incomplete gamma, an exponential); any
//! other inner H is itself a contour integral, evaluated at a tighter
//! tolerance than the outer one.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// unused when a dependent links std, whose inherent float methods win
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hfun::{ContourSpec, GammaRatio, HParams, HValue};
use crate::quad;
use crate::special;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Inner tolerance relative to the outer one for nested contours.
const NESTED_TOL_RATIO: f64 = 1e-3;

/// `(α s + β)^(Λ s + Θ) e^(ζ s + η)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Prefactor {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub theta: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl Prefactor {
    /// The constant 1.
    pub const UNIT: Prefactor = Prefactor { alpha: 0.0, beta: 1.0, lambda: 0.0, theta: 0.0, zeta: 0.0, eta: 0.0 };
}

impl Default for Prefactor {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Inner argument `(γ + Γ s)^(π + Π s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InnerArgument {
    pub gamma: f64,
    pub big_gamma: f64,
    pub pi: f64,
    pub big_pi: f64,
}

impl InnerArgument {
    /// A constant argument `w`.
    pub fn constant(w: f64) -> Self {
        InnerArgument { gamma: w, big_gamma: 0.0, pi: 1.0, big_pi: 0.0 }
    }
}

/// Outer exponent `ρ s + σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Power {
    pub rho: f64,
    pub sigma: f64,
}

/// One inner H entry `(base + slope s, coef)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InnerEntry {
    pub base: f64,
    pub slope: f64,
    pub coef: f64,
}

impl InnerEntry {
    pub const fn new(base: f64, slope: f64, coef: f64) -> Self {
        InnerEntry { base, slope, coef }
    }

    fn at(&self, s: Complex64) -> (Complex64, f64) {
        (s * self.slope + self.base, self.coef)
    }

    fn is(&self, base: f64, slope: f64, coef: f64) -> bool {
        self.base == base && self.slope == slope && self.coef == coef
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IhatFactor {
    pub prefactor: Prefactor,
    pub argument: InnerArgument,
    pub power: Power,
    pub inner_upper: Vec<InnerEntry>,
    pub inner_lower: Vec<InnerEntry>,
    /// `(m, n, p, q)` of the inner H.
    pub inner_indices: (usize, usize, usize, usize),
}

/// The factors of an Î kernel and, optionally, the line to invert it on.
///
/// Without a contour, [`eval_ihat`] derives one from the poles of the factors
/// when every factor has a closed form, and refuses otherwise.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IhatSpec {
    pub factors: Vec<IhatFactor>,
    pub contour: Option<ContourSpec>,
}

impl IhatSpec {
    pub fn new(factors: Vec<IhatFactor>) -> Self {
        IhatSpec { factors, contour: None }
    }

    pub fn with_contour(mut self, contour: ContourSpec) -> Self {
        self.contour = Some(contour);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// `Gamma(b(s))`, or a step in `|w|`.
    Gamma,
    /// `Gamma(b(s), w)`.
    UpperIncomplete,
    /// `w^{b/B} e^{-w^{1/B}} / B`.
    Exponential,
    General,
}

const GAMMA_UPPER: [(f64, f64, f64); 3] = [(0.0, 0.0, 0.0), (1.0, 0.0, 1.0), (1.0, 0.0, 0.0)];

impl IhatFactor {
    /// A factor with unit prefactor, constant argument and power 1.
    pub fn inner(m: usize, n: usize, upper: Vec<InnerEntry>, lower: Vec<InnerEntry>) -> Self {
        let indices = (m, n, upper.len(), lower.len());
        IhatFactor {
            prefactor: Prefactor::UNIT,
            argument: InnerArgument::constant(1.0),
            power: Power { rho: 0.0, sigma: 1.0 },
            inner_upper: upper,
            inner_lower: lower,
            inner_indices: indices,
        }
    }

    /// `Gamma(b + B s)^power`.
    pub fn gamma_power(b: f64, big_b: f64, power: f64) -> Self {
        let upper = GAMMA_UPPER.iter().map(|&(a, h, c)| InnerEntry::new(a, h, c)).collect();
        let lower = vec![InnerEntry::new(0.0, 0.0, 1.0), InnerEntry::new(b, big_b, 0.0)];
        IhatFactor { power: Power { rho: 0.0, sigma: power }, ..Self::inner(2, 1, upper, lower) }
    }

    /// `Gamma(b + B s, x)^power`.
    pub fn upper_gamma_power(b: f64, big_b: f64, x: f64, power: f64) -> Self {
        let upper = GAMMA_UPPER.iter().map(|&(a, h, c)| InnerEntry::new(a, h, c)).collect();
        let lower = vec![InnerEntry::new(0.0, 0.0, 1.0), InnerEntry::new(b, big_b, 1.0)];
        IhatFactor {
            argument: InnerArgument::constant(x),
            power: Power { rho: 0.0, sigma: power },
            ..Self::inner(2, 1, upper, lower)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n, p, q) = self.inner_indices;
        if p != self.inner_upper.len() || q != self.inner_lower.len() || m > q || n > p {
            return Err(Error::parameter("inner indices disagree with the entry lists"));
        }
        let pre = &self.prefactor;
        let arg = &self.argument;
        let scalars = [
            pre.alpha, pre.beta, pre.lambda, pre.theta, pre.zeta, pre.eta, arg.gamma, arg.big_gamma, arg.pi,
            arg.big_pi, self.power.rho, self.power.sigma,
        ];
        if scalars.iter().any(|v| !v.is_finite()) {
            return Err(Error::parameter("factor coefficients must be finite"));
        }
        for e in self.inner_upper.iter().chain(self.inner_lower.iter()) {
            if !(e.base.is_finite() && e.slope.is_finite() && e.coef.is_finite()) {
                return Err(Error::parameter("inner entries must be finite"));
            }
            if e.coef < 0.0 {
                return Err(Error::parameter("inner coefficients must be >= 0"));
            }
        }
        Ok(())
    }

    fn shape(&self) -> Shape {
        let up = &self.inner_upper;
        let low = &self.inner_lower;
        match self.inner_indices {
            (2, 1, 3, 2)
                if up.iter().zip(GAMMA_UPPER.iter()).all(|(e, &(a, h, c))| e.is(a, h, c))
                    && low[0].is(0.0, 0.0, 1.0) =>
            {
                match low[1].coef {
                    c if c == 0.0 => Shape::Gamma,
                    c if c == 1.0 => Shape::UpperIncomplete,
                    _ => Shape::General,
                }
            }
            (1, 0, 0, 1) if low[0].coef > 0.0 => Shape::Exponential,
            _ => Shape::General,
        }
    }

    fn power_is_zero(&self) -> bool {
        self.power.rho == 0.0 && self.power.sigma == 0.0
    }

    /// `log` of the factor at `s`; `None` when the factor vanishes.
    fn ln_value(&self, s: Complex64, tol: f64) -> Result<Option<Complex64>> {
        let pre = &self.prefactor;
        let mut acc = s * pre.zeta + pre.eta;
        match ln_power(s * pre.alpha + pre.beta, s * pre.lambda + pre.theta, pre.lambda == 0.0, s)? {
            Some(l) => acc += l,
            None => return Ok(None),
        }
        if self.power_is_zero() {
            return Ok(Some(acc));
        }
        let arg = &self.argument;
        let ln_w = ln_power(s * arg.big_gamma + arg.gamma, s * arg.big_pi + arg.pi, arg.big_pi == 0.0, s)?;
        let h = self.inner_value(s, ln_w, tol)?;
        let exponent = s * self.power.rho + self.power.sigma;
        match ln_power(h, exponent, self.power.rho == 0.0, s)? {
            Some(l) => Ok(Some(acc + l)),
            None => Ok(None),
        }
    }

    /// The inner H at `w = exp(ln_w)` (`None` for `w = 0`) with entries
    /// evaluated at `s`. The logarithm is kept so that an argument built as a
    /// power stays on the sheet it was built on.
    fn inner_value(&self, s: Complex64, ln_w: Option<Complex64>, tol: f64) -> Result<Complex64> {
        let upper: Vec<(Complex64, f64)> = self.inner_upper.iter().map(|e| e.at(s)).collect();
        let lower: Vec<(Complex64, f64)> = self.inner_lower.iter().map(|e| e.at(s)).collect();
        let shape = self.shape();
        let Some(lw) = ln_w else {
            // Only Gamma(a, 0) = Gamma(a) and the gamma step survive w = 0.
            return match shape {
                Shape::Gamma | Shape::UpperIncomplete => special::ln_gamma(lower[1].0).map(|l| l.exp()),
                _ => Err(Error::domain("inner argument is zero")),
            };
        };
        match shape {
            Shape::Gamma => {
                // Gamma(b) / u integrated against w^{-u}: a step at |w| = 1,
                // taken as Gamma(b) on the unit circle itself.
                if lw.re > 1e-14 {
                    Ok(ZERO)
                } else {
                    special::ln_gamma(lower[1].0).map(|l| l.exp())
                }
            }
            Shape::UpperIncomplete if lw.im == 0.0 => special::upper_gamma(lower[1].0, lw.re.exp()),
            Shape::Exponential => {
                let (b, big_b) = lower[0];
                Ok((lw * b / big_b - (lw / big_b).exp()).exp() / big_b)
            }
            _ => {
                let (m, n, _, _) = self.inner_indices;
                let ratio = GammaRatio::from_h(m, n, &upper, &lower);
                let inner_tol = tol * NESTED_TOL_RATIO;
                let contour = ratio.contour_for_log_abs(lw.re).with_tol(inner_tol, inner_tol);
                Ok(ratio.invert_ln(lw, &contour)?.value)
            }
        }
    }

    /// Real singular points of the factor in `s`, as `(bound, is_left_family)`;
    /// `None` if the factor has no closed form to analyse.
    fn singular_bounds(&self) -> Option<Vec<(f64, bool)>> {
        let mut out = Vec::new();
        let pre = &self.prefactor;
        if pre.alpha != 0.0 && (pre.lambda != 0.0 || pre.theta != 0.0) {
            out.push((-pre.beta / pre.alpha, pre.alpha > 0.0));
        }
        if self.power_is_zero() {
            return Some(out);
        }
        let arg = &self.argument;
        if arg.big_gamma != 0.0 && (arg.pi != 0.0 || arg.big_pi != 0.0) {
            out.push((-arg.gamma / arg.big_gamma, arg.big_gamma > 0.0));
        }
        match self.shape() {
            Shape::Gamma => {
                let b = self.inner_lower[1];
                let poles = self.power.rho != 0.0 || self.power.sigma > 0.0;
                if poles && b.slope != 0.0 {
                    out.push((-b.base / b.slope, b.slope > 0.0));
                }
                Some(out)
            }
            Shape::UpperIncomplete | Shape::Exponential => Some(out),
            Shape::General => None,
        }
    }
}

/// `log(base^exponent)` on the principal branch; `None` for a zero power of a
/// positive exponent. `integer_safe` marks exponents constant in `s`, which may
/// cross the negative axis when they are integers.
fn ln_power(base: Complex64, exponent: Complex64, constant_exponent: bool, s: Complex64) -> Result<Option<Complex64>> {
    if exponent.re == 0.0 && exponent.im == 0.0 {
        return Ok(Some(ZERO));
    }
    if base.re == 0.0 && base.im == 0.0 {
        return if exponent.re > 0.0 { Ok(None) } else { Err(Error::Pole { at: s }) };
    }
    if base.im == 0.0 && base.re < 0.0 {
        let integer = constant_exponent && exponent.im == 0.0 && exponent.re == exponent.re.round();
        if !integer {
            return Err(Error::BranchCut { base });
        }
    }
    Ok(Some(base.ln() * exponent))
}

fn upsilon_impl(factors: &[IhatFactor], s: Complex64, tol: f64) -> Result<Complex64> {
    let mut acc = ZERO;
    for f in factors {
        match f.ln_value(s, tol)? {
            Some(l) => acc += l,
            None => return Ok(ZERO),
        }
    }
    Ok(acc.exp())
}

fn tolerance(spec: &IhatSpec) -> f64 {
    spec.contour.map_or(ContourSpec::default().tol, |c| c.tol)
}

fn validate(spec: &IhatSpec) -> Result<()> {
    if spec.factors.is_empty() {
        return Err(Error::parameter("an Î kernel needs at least one factor"));
    }
    spec.factors.iter().try_for_each(IhatFactor::validate)
}

/// The kernel with every inner H of shape `H^{2,1}_{3,2}`.
pub fn upsilon(spec: &IhatSpec, s: Complex64) -> Result<Complex64> {
    if spec.factors.iter().any(|f| f.inner_indices != (2, 1, 3, 2)) {
        return Err(Error::parameter("inner H functions must have indices (2, 1, 3, 2)"));
    }
    upsilon_general(spec, s)
}

/// The kernel with inner H functions of any shape.
pub fn upsilon_general(spec: &IhatSpec, s: Complex64) -> Result<Complex64> {
    validate(spec)?;
    upsilon_impl(&spec.factors, s, tolerance(spec))
}

/// Abscissa from the singularities of closed-form factors.
pub fn auto_contour(spec: &IhatSpec) -> Result<ContourSpec> {
    let mut left: Option<f64> = None;
    let mut right: Option<f64> = None;
    for f in &spec.factors {
        let bounds = f
            .singular_bounds()
            .ok_or_else(|| Error::parameter("no closed form to place the contour; supply one"))?;
        for (b, is_left) in bounds {
            if is_left {
                left = Some(left.map_or(b, |l| l.max(b)));
            } else {
                right = Some(right.map_or(b, |r| r.min(b)));
            }
        }
    }
    let c = match (left, right) {
        (Some(l), Some(r)) if l < r => 0.5 * (l + r),
        (Some(_), Some(_)) => return Err(Error::NoContour),
        (Some(l), None) => l + 1.0,
        (None, Some(r)) => r - 1.0,
        (None, None) => 1.0,
    };
    Ok(ContourSpec::at(c))
}

/// Oscillation rate of `Υ(c + it) z^{-c-it}` from the factors whose phase is
/// linear in `t`.
fn phase_rate(spec: &IhatSpec, ln_z: f64) -> f64 {
    let mut rate = ln_z;
    for f in &spec.factors {
        let pre = &f.prefactor;
        rate -= pre.zeta;
        if pre.alpha == 0.0 && pre.lambda != 0.0 && pre.beta > 0.0 {
            rate -= pre.lambda * pre.beta.ln();
        }
    }
    rate.abs()
}

/// `(1 / 2πi) ∫ Υ(s) z^{-s} ds` along the spec's contour.
pub fn eval_ihat(spec: &IhatSpec, z: Complex64) -> Result<HValue> {
    validate(spec)?;
    if z.norm() == 0.0 {
        return Err(Error::domain("Î argument must be nonzero"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut { base: z });
    }
    let contour = match spec.contour {
        Some(c) => c,
        None => auto_contour(spec)?,
    };
    let c = contour.abscissa;
    let ln_z = z.ln();
    let tol = contour.tol;
    let opts = contour.line_options(phase_rate(spec, ln_z.re));
    let eval = |t: f64| -> Result<Complex64> {
        let s = Complex64::new(c, t);
        let v = upsilon_impl(&spec.factors, s, tol)?;
        Ok(if v == ZERO { ZERO } else { v * (-s * ln_z).exp() })
    };
    let est = if z.im == 0.0 {
        // Real parameters make the integrand conjugate-symmetric in t.
        quad::integrate_half_line(|t| eval(t).map(|v| Complex64::new(v.re / PI, 0.0)), &opts)?
    } else {
        quad::integrate_half_line(|t| Ok((eval(t)? + eval(-t)?) / (2.0 * PI)), &opts)?
    };
    Ok(HValue { value: est.value, abs_err: est.abs_err })
}

/// `Γ(shift + coef s)^power`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaPower {
    pub shift: f64,
    pub coef: f64,
    pub power: f64,
}

/// Product of gamma powers; negative powers put a factor in the denominator.
pub fn ihat_from_gamma_product(terms: &[GammaPower]) -> Result<IhatSpec> {
    if terms.is_empty() {
        return Err(Error::parameter("empty gamma product"));
    }
    let factors = terms.iter().map(|t| IhatFactor::gamma_power(t.shift, t.coef, t.power)).collect();
    Ok(IhatSpec::new(factors))
}

/// Parameters of an I function: gamma factors raised to positive exponents.
///
/// `upper` holds `(a_j, α_j, A_j)`, `lower` holds `(b_j, β_j, B_j)`; the
/// exponents are `A_j` and `B_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct IParams {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<(f64, f64, f64)>,
    pub lower: Vec<(f64, f64, f64)>,
}

impl IParams {
    fn check(&self) -> Result<()> {
        if self.m > self.lower.len() || self.n > self.upper.len() {
            return Err(Error::parameter("need m <= q and n <= p"));
        }
        Ok(())
    }

    /// The gamma powers of the kernel, denominators as negative powers.
    pub fn gamma_powers(&self) -> Result<Vec<GammaPower>> {
        self.check()?;
        let mut out = Vec::new();
        for (j, &(b, beta, e)) in self.lower.iter().enumerate() {
            if e < 0.0 {
                return Err(Error::parameter("I-function exponents must be positive"));
            }
            out.push(if j < self.m {
                GammaPower { shift: b, coef: beta, power: e }
            } else {
                GammaPower { shift: 1.0 - b, coef: -beta, power: -e }
            });
        }
        for (j, &(a, alpha, e)) in self.upper.iter().enumerate() {
            if e < 0.0 {
                return Err(Error::parameter("I-function exponents must be positive"));
            }
            out.push(if j < self.n {
                GammaPower { shift: 1.0 - a, coef: -alpha, power: e }
            } else {
                GammaPower { shift: a, coef: alpha, power: -e }
            });
        }
        Ok(out)
    }
}

pub fn ihat_from_i(params: &IParams) -> Result<IhatSpec> {
    let powers = params.gamma_powers()?;
    if powers.is_empty() {
        return Err(Error::parameter("empty I-function kernel"));
    }
    ihat_from_gamma_product(&powers)
}

/// One Y-function group: `(shift, slope, base, order)`, for the Tricomi
/// function `U(order, ·, base)` with second parameter affine in `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YEntry {
    pub shift: f64,
    pub slope: f64,
    pub base: f64,
    pub order: f64,
}

/// Parameters of a Y function.
///
/// `upper` entries are `(a_j, α_j, A_j, ϕ_j)`, `lower` entries `(b_j, β_j, B_j, φ_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct YParams {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<YEntry>,
    pub lower: Vec<YEntry>,
}

/// `K^{x - 1} U(φ, x, K)` with `x = x0 + x1 s`, raised to `sign`.
fn tricomi_factor(order: f64, x0: f64, x1: f64, base: f64, sign: f64) -> Result<IhatFactor> {
    if !(base > 0.0) || !(order > 0.0) {
        return Err(Error::parameter("Y-function bases and orders must be positive"));
    }
    let upper = vec![
        InnerEntry::new(1.0 - order, 0.0, 1.0),
        InnerEntry::new(order, 0.0, 0.0),
        InnerEntry::new(order - x0 + 1.0, -x1, 0.0),
    ];
    let lower = vec![InnerEntry::new(0.0, 0.0, 1.0), InnerEntry::new(1.0 - x0, -x1, 1.0)];
    Ok(IhatFactor {
        prefactor: Prefactor { alpha: 0.0, beta: base, lambda: sign * x1, theta: sign * (x0 - 1.0), zeta: 0.0, eta: 0.0 },
        argument: InnerArgument::constant(base),
        power: Power { rho: 0.0, sigma: sign },
        ..IhatFactor::inner(2, 1, upper, lower)
    })
}

pub fn ihat_from_y(params: &YParams) -> Result<IhatSpec> {
    if params.m > params.lower.len() || params.n > params.upper.len() {
        return Err(Error::parameter("need m <= q and n <= p"));
    }
    let mut factors = Vec::new();
    for (j, e) in params.lower.iter().enumerate() {
        factors.push(if j < params.m {
            tricomi_factor(e.order, e.order + e.shift, e.slope, e.base, 1.0)?
        } else {
            tricomi_factor(e.order, e.order - e.shift + 1.0, -e.slope, e.base, -1.0)?
        });
    }
    for (j, e) in params.upper.iter().enumerate() {
        factors.push(if j < params.n {
            tricomi_factor(e.order, e.order - e.shift + 1.0, -e.slope, e.base, 1.0)?
        } else {
            tricomi_factor(e.order, e.order + e.shift, e.slope, e.base, -1.0)?
        });
    }
    if factors.is_empty() {
        return Err(Error::parameter("empty Y-function kernel"));
    }
    Ok(IhatSpec::new(factors))
}

/// Parameters of a generalized upper incomplete H function.
///
/// `upper` holds `(a_j, α_j, A_j)`, `lower` holds `(b_j, β_j, B_j)`; `A_j`,
/// `B_j` are the lower limits of the incomplete gammas.
#[derive(Clone, Debug, PartialEq)]
pub struct UiParams {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<(f64, f64, f64)>,
    pub lower: Vec<(f64, f64, f64)>,
}

pub fn ihat_from_upper_incomplete(params: &UiParams) -> Result<IhatSpec> {
    if params.m > params.lower.len() || params.n > params.upper.len() {
        return Err(Error::parameter("need m <= q and n <= p"));
    }
    let limits = params.upper.iter().chain(params.lower.iter()).map(|e| e.2);
    if limits.clone().any(|x| !(x >= 0.0)) {
        return Err(Error::parameter("incomplete-gamma limits must be >= 0"));
    }
    let mut factors = Vec::new();
    for (j, &(b, beta, x)) in params.lower.iter().enumerate() {
        factors.push(if j < params.m {
            IhatFactor::upper_gamma_power(b, beta, x, 1.0)
        } else {
            IhatFactor::upper_gamma_power(1.0 - b, -beta, x, -1.0)
        });
    }
    for (j, &(a, alpha, x)) in params.upper.iter().enumerate() {
        factors.push(if j < params.n {
            IhatFactor::upper_gamma_power(1.0 - a, -alpha, x, 1.0)
        } else {
            IhatFactor::upper_gamma_power(a, alpha, x, -1.0)
        });
    }
    if factors.is_empty() {
        return Err(Error::parameter("empty kernel"));
    }
    Ok(IhatSpec::new(factors))
}

/// H parameters of `U(a, b, ·)`.
pub fn tricomi_h_params(a: f64, b: f64) -> Result<HParams> {
    HParams::new(2, 1, vec![(1.0 - a, 1.0), (a, 0.0), (a - b + 1.0, 0.0)], vec![(0.0, 1.0), (1.0 - b, 1.0)])
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` for `a > 0`.
///
/// When `a - b + 1` is a nonpositive integer the two gamma families collide;
/// Kummer's transformation then leaves a terminating polynomial.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("tricomi_u needs a > 0"));
    }
    if !(z > 0.0) {
        return Err(Error::domain("tricomi_u needs z > 0"));
    }
    let a2 = a - b + 1.0;
    if a2 <= 0.0 && a2 == a2.round() {
        let n = (-a2) as u32;
        let c = 2.0 - b;
        let mut sum = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            let poch = special::pochhammer(Complex64::new(c + k as f64, 0.0), n - k).re;
            sum += binom * poch * (-z).powi(k as i32);
            binom *= (n - k) as f64 / (k + 1) as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(z.powf(1.0 - b) * sign * sum);
    }
    let h = tricomi_h_params(a, b)?;
    let ratio = h.kernel();
    let zc = Complex64::new(z, 0.0);
    let contour = ratio.contour_for(zc).with_tol(1e-14, 1e-12);
    Ok(ratio.invert(zc, &contour)?.value.re)
}

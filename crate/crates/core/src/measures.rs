//! First-coordinate measures μ and second-coordinate functionals ν with
//! their evaluable transforms.
//!
//! Every representation exposes the Cauchy transform as a 2-jet
//! (G, G′, G″) from closed forms, so dual-number propagation of first
//! derivatives is exact and the convolution layer can also differentiate
//! subordination functions once more (needed for ∂_z of the second
//! coordinate in the heat-system residuals).
//!
//! Square roots of (z − p)(z − q) are always taken as √(z−p)·√(z−q) with
//! principal roots, which is continuous across the imaginary axis and off
//! the support, and makes G(iy) ~ 1/iy at infinity.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::dualnum::{Dual, DualComplex};
use crate::error::{Error, Result};
use crate::laws::StableSpec;

/// A weighted point on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub w: f64,
}

/// A weighted point on the unit circle, by angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleAtom {
    pub angle: f64,
    pub w: f64,
}

/// First-coordinate law μ with an evaluable Cauchy/ψ transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureRepr {
    Atomic { atoms: Vec<Atom> },
    Semicircle { mean: f64, variance: f64 },
    Arcsine { center: f64, radius: f64 },
    #[serde(rename = "cauchy")]
    CauchyLaw { location: f64, scale: f64 },
    FreePoisson { rate: f64, jump: f64 },
    #[serde(rename = "unit_circle")]
    UnitCircleAtomic { atoms: Vec<CircleAtom> },
    #[serde(rename = "grid")]
    GridDensity { x: Vec<f64>, density: Vec<f64> },
    Shifted { by: f64, inner: Box<MeasureRepr> },
}

impl MeasureRepr {
    pub fn point_mass(a: f64) -> Self {
        MeasureRepr::Atomic { atoms: vec![Atom { x: a, w: 1.0 }] }
    }

    pub fn two_point(a: f64, b: f64) -> Self {
        MeasureRepr::Atomic {
            atoms: vec![Atom { x: a, w: 0.5 }, Atom { x: b, w: 0.5 }],
        }
    }

    /// Structural sanity: positive parameters, normalized mass.
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureRepr::Atomic { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::InvalidInput("atomic measure with no atoms".into()));
                }
                if atoms.iter().any(|a| a.w <= 0.0) {
                    return Err(Error::InvalidInput("atomic weights must be positive".into()));
                }
                let mass: f64 = atoms.iter().map(|a| a.w).sum();
                if (mass - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidInput(format!(
                        "atomic weights sum to {mass}, expected 1"
                    )));
                }
            }
            MeasureRepr::Semicircle { variance, .. } if *variance <= 0.0 => {
                return Err(Error::InvalidInput("semicircle variance must be positive".into()));
            }
            MeasureRepr::Arcsine { radius, .. } if *radius <= 0.0 => {
                return Err(Error::InvalidInput("arcsine radius must be positive".into()));
            }
            MeasureRepr::CauchyLaw { scale, .. } if *scale <= 0.0 => {
                return Err(Error::InvalidInput("cauchy scale must be positive".into()));
            }
            MeasureRepr::FreePoisson { rate, jump } if *rate < 0.0 || *jump <= 0.0 => {
                return Err(Error::InvalidInput("free poisson needs rate ≥ 0, jump > 0".into()));
            }
            MeasureRepr::UnitCircleAtomic { atoms } => {
                let mass: f64 = atoms.iter().map(|a| a.w).sum();
                if (mass - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidInput(format!(
                        "circle weights sum to {mass}, expected 1"
                    )));
                }
            }
            MeasureRepr::GridDensity { x, density } => {
                if x.len() != density.len() || x.len() < 2 {
                    return Err(Error::InvalidInput(
                        "grid density needs matching x/density of length ≥ 2".into(),
                    ));
                }
                if x.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidInput("grid must be strictly increasing".into()));
                }
                if density.iter().any(|&d| d < -1e-12) {
                    return Err(Error::InvalidInput("grid density must be nonnegative".into()));
                }
                let mass = trapezoid_mass(x, density);
                if (mass - 1.0).abs() > 1e-8 {
                    return Err(Error::InvalidInput(format!(
                        "grid density integrates to {mass}, expected 1 ± 1e-8"
                    )));
                }
            }
            MeasureRepr::Shifted { inner, .. } => inner.validate()?,
            _ => {}
        }
        Ok(())
    }

    /// Closed support on the real line, when bounded and real.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            MeasureRepr::Atomic { atoms } => {
                let lo = atoms.iter().map(|a| a.x).fold(f64::INFINITY, f64::min);
                let hi = atoms.iter().map(|a| a.x).fold(f64::NEG_INFINITY, f64::max);
                Some((lo, hi))
            }
            MeasureRepr::Semicircle { mean, variance } => {
                let r = 2.0 * variance.sqrt();
                Some((mean - r, mean + r))
            }
            MeasureRepr::Arcsine { center, radius } => Some((center - radius, center + radius)),
            MeasureRepr::CauchyLaw { .. } => None,
            MeasureRepr::FreePoisson { rate, jump } => {
                let s = rate.sqrt();
                let lo = jump * (1.0 - s) * (1.0 - s);
                let hi = jump * (1.0 + s) * (1.0 + s);
                Some((if *rate < 1.0 { 0.0f64.min(lo) } else { lo }, hi))
            }
            MeasureRepr::UnitCircleAtomic { .. } => None,
            MeasureRepr::GridDensity { x, .. } => Some((x[0], *x.last().unwrap())),
            MeasureRepr::Shifted { by, inner } => {
                inner.support().map(|(lo, hi)| (lo + by, hi + by))
            }
        }
    }

    /// The translated measure μ(· − b).
    pub fn translate(&self, b: f64) -> MeasureRepr {
        match self {
            MeasureRepr::Atomic { atoms } => MeasureRepr::Atomic {
                atoms: atoms.iter().map(|a| Atom { x: a.x + b, w: a.w }).collect(),
            },
            MeasureRepr::Semicircle { mean, variance } => {
                MeasureRepr::Semicircle { mean: mean + b, variance: *variance }
            }
            MeasureRepr::Arcsine { center, radius } => {
                MeasureRepr::Arcsine { center: center + b, radius: *radius }
            }
            MeasureRepr::CauchyLaw { location, scale } => {
                MeasureRepr::CauchyLaw { location: location + b, scale: *scale }
            }
            MeasureRepr::GridDensity { x, density } => MeasureRepr::GridDensity {
                x: x.iter().map(|v| v + b).collect(),
                density: density.clone(),
            },
            MeasureRepr::Shifted { by, inner } => {
                MeasureRepr::Shifted { by: by + b, inner: inner.clone() }
            }
            other => MeasureRepr::Shifted { by: b, inner: Box::new(other.clone()) },
        }
    }

    /// ∫ ζ dμ for circle-supported measures, ∫ t dμ when it exists in
    /// closed form otherwise (used for ψ-extension at the origin).
    pub fn first_moment(&self) -> Option<Complex64> {
        match self {
            MeasureRepr::Atomic { atoms } => Some(Complex64::new(
                atoms.iter().map(|a| a.w * a.x).sum::<f64>(),
                0.0,
            )),
            MeasureRepr::Semicircle { mean, .. } => Some(Complex64::new(*mean, 0.0)),
            MeasureRepr::Arcsine { center, .. } => Some(Complex64::new(*center, 0.0)),
            MeasureRepr::CauchyLaw { .. } => None,
            MeasureRepr::FreePoisson { rate, jump } => {
                Some(Complex64::new(rate * jump, 0.0))
            }
            MeasureRepr::UnitCircleAtomic { atoms } => Some(
                atoms
                    .iter()
                    .map(|a| a.w * Complex64::from_polar(1.0, a.angle))
                    .sum(),
            ),
            MeasureRepr::GridDensity { x, density } => {
                // trapezoid of t·ρ(t)
                let vals: Vec<f64> = x.iter().zip(density).map(|(t, d)| t * d).collect();
                Some(Complex64::new(trapezoid_mass(x, &vals), 0.0))
            }
            MeasureRepr::Shifted { by, inner } => {
                inner.first_moment().map(|m| m + by)
            }
        }
    }
}

fn trapezoid_mass(x: &[f64], v: &[f64]) -> f64 {
    x.windows(2)
        .zip(v.windows(2))
        .map(|(xs, vs)| 0.5 * (vs[0] + vs[1]) * (xs[1] - xs[0]))
        .sum()
}

/// A positive finite measure of arbitrary total mass: `mass` · (probability).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledMeasure {
    pub base: MeasureRepr,
    pub mass: f64,
}

type C = Complex64;

fn cc(re: f64) -> C {
    C::new(re, 0.0)
}

// Ln(a/b) for a, b in a common half-plane (no branch wrap), stable when
// a ≈ b: ln(1 + r) with r = (a − b)/b via real ln_1p/atan2.
fn ln_ratio(a: C, b: C) -> C {
    let r = (a - b) / b;
    if r.norm() < 0.5 {
        C::new(
            0.5 * (2.0 * r.re + r.norm_sqr()).ln_1p(),
            r.im.atan2(1.0 + r.re),
        )
    } else {
        (a / b).ln()
    }
}

/// Value, first and second derivative of √(z−p)·√(z−q) (principal roots).
fn sqrt_prod_jet(z: C, p: f64, q: f64) -> (C, C, C) {
    let s = (z - p).sqrt() * (z - q).sqrt();
    let c = 0.5 * (p + q);
    let s1 = (z - c) / s;
    let half_gap = 0.5 * (p - q);
    let s2 = -cc(half_gap * half_gap) / (s * s * s);
    (s, s1, s2)
}

/// Domain guard: off the real line, or real but strictly outside the support.
fn check_domain(mu: &MeasureRepr, z: C) -> Result<()> {
    if z.im != 0.0 {
        return Ok(());
    }
    match mu {
        MeasureRepr::UnitCircleAtomic { .. } => Ok(()),
        _ => match mu.support() {
            Some((lo, hi)) if z.re < lo || z.re > hi => Ok(()),
            _ => Err(Error::DomainError(format!(
                "Cauchy transform evaluated on the support at z = {z}"
            ))),
        },
    }
}

/// (G, G′, G″) of μ at a scalar point.
pub fn cauchy_jet2(mu: &MeasureRepr, z: C) -> Result<(C, C, C)> {
    check_domain(mu, z)?;
    let jet = match mu {
        MeasureRepr::Atomic { atoms } => {
            let mut g = C::zero();
            let mut g1 = C::zero();
            let mut g2 = C::zero();
            for a in atoms {
                let r = 1.0 / (z - a.x);
                g += a.w * r;
                g1 -= a.w * r * r;
                g2 += 2.0 * a.w * r * r * r;
            }
            (g, g1, g2)
        }
        MeasureRepr::Semicircle { mean, variance } => {
            let t = *variance;
            let r = 2.0 * t.sqrt();
            let (s, _, _) = sqrt_prod_jet(z, mean - r, mean + r);
            let u = z - mean;
            // (u − s)/(2t) rationalized to 2/(u + s): no cancellation as
            // s → u for |z| large (the iy-probes go up to 10⁶)
            let g = 2.0 / (u + s);
            let g1 = -2.0 / (s * (u + s));
            let g2 = 2.0 / (s * s * s);
            (g, g1, g2)
        }
        MeasureRepr::Arcsine { center, radius } => {
            let (s, s1, s2) = sqrt_prod_jet(z, center - radius, center + radius);
            let g = 1.0 / s;
            let g1 = -s1 / (s * s);
            let g2 = (2.0 * s1 * s1 - s * s2) / (s * s * s);
            (g, g1, g2)
        }
        MeasureRepr::CauchyLaw { location, scale } => {
            // boundary value extended by conjugate symmetry
            let it = C::new(0.0, if z.im >= 0.0 { *scale } else { -*scale });
            let r = 1.0 / (z - location + it);
            (r, -r * r, 2.0 * r * r * r)
        }
        MeasureRepr::FreePoisson { rate, jump } => {
            let (l, a) = (*rate, *jump);
            let s = l.sqrt();
            let lo = a * (1.0 - s) * (1.0 - s);
            let hi = a * (1.0 + s) * (1.0 + s);
            if z.im == 0.0 && z.re == 0.0 {
                return Err(Error::DomainError("free poisson transform at z = 0".into()));
            }
            let (sq, sq1, sq2) = sqrt_prod_jet(z, lo, hi);
            let c = a * (1.0 - l);
            let n = z + c - sq;
            let n1 = C::new(1.0, 0.0) - sq1;
            let n2 = -sq2;
            let den = 1.0 / (2.0 * a);
            let g = n / z * den;
            let g1 = (n1 * z - n) / (z * z) * den;
            let g2 = (n2 * z * z - 2.0 * (n1 * z - n)) / (z * z * z) * den;
            (g, g1, g2)
        }
        MeasureRepr::UnitCircleAtomic { atoms } => {
            let mut g = C::zero();
            let mut g1 = C::zero();
            let mut g2 = C::zero();
            for a in atoms {
                let zeta = C::from_polar(1.0, a.angle);
                let r = 1.0 / (z - zeta);
                g += a.w * r;
                g1 -= a.w * r * r;
                g2 += 2.0 * a.w * r * r * r;
            }
            (g, g1, g2)
        }
        MeasureRepr::GridDensity { x, density } => {
            let mut g = C::zero();
            let mut g1 = C::zero();
            let mut g2 = C::zero();
            for k in 0..x.len() - 1 {
                let (x0, x1) = (x[k], x[k + 1]);
                let (d0, d1) = (density[k], density[k + 1]);
                let beta = (d1 - d0) / (x1 - x0);
                let alpha = d0 - beta * x0;
                let (u0, u1) = (z - x0, z - x1);
                // L = Ln(u0) − Ln(u1) = Ln(u0/u1), no wrap since u0, u1
                // share a half-plane; computed as ln1p to survive |z| ≫ 1
                let l = ln_ratio(u0, u1);
                let l1 = (x0 - x1) / (u0 * u1);
                let l2 = (x1 - x0) * (u0 + u1) / (u0 * u0 * u1 * u1);
                let lin = alpha + beta * z;
                g += lin * l - beta * (x1 - x0);
                g1 += beta * l + lin * l1;
                g2 += 2.0 * beta * l1 + lin * l2;
            }
            (g, g1, g2)
        }
        MeasureRepr::Shifted { by, inner } => cauchy_jet2(inner, z - by)?,
    };
    Ok(jet)
}

/// Dual Cauchy transform of the first coordinate: G(Z) = (G(z), w·G′(z)).
pub fn cauchy_transform(mu: &MeasureRepr, z: DualComplex) -> Result<DualComplex> {
    let (g, g1, _) = cauchy_jet2(mu, z.re)?;
    Ok(Dual::new(g, z.inf * g1))
}

/// F = 1/G (dual) and h = F − Z; Im h ≥ 0 on ℂ⁺ unless μ is a point mass.
pub fn reciprocal_and_h(
    mu: &MeasureRepr,
    z: DualComplex,
) -> Result<(DualComplex, DualComplex)> {
    let g = cauchy_transform(mu, z)?;
    if g.re == C::zero() {
        return Err(Error::DegenerateValue(format!("G = 0 at z = {}", z.re)));
    }
    let f = g.inv()?;
    Ok((f, f - z))
}

/// (F, F′, F″) of μ from the Cauchy jet.
pub fn f_jet2(mu: &MeasureRepr, z: C) -> Result<(C, C, C)> {
    let (g, g1, g2) = cauchy_jet2(mu, z)?;
    if g == C::zero() {
        return Err(Error::DegenerateValue(format!("G = 0 at z = {z}")));
    }
    let f = 1.0 / g;
    let f1 = -g1 / (g * g);
    let f2 = (2.0 * g1 * g1 - g * g2) / (g * g * g);
    Ok((f, f1, f2))
}

/// Opaque dual-capable evaluator for a second-coordinate functional.
#[derive(Clone)]
pub struct OpaqueEval(pub Arc<dyn Fn(DualComplex) -> Result<DualComplex> + Send + Sync>);

impl fmt::Debug for OpaqueEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpaqueEval(g_ν)")
    }
}

/// Second-coordinate functional ν ∈ 𝓜₀ through an evaluable g_ν.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SecondCoordRepr {
    /// The zero functional.
    Zero,
    /// Σ w_i δ_{x_i} with Σ w_i = 0.
    SignedAtomic { atoms: Vec<Atom> },
    /// Distributional derivative of a positive finite measure: g = −G_{σ₀}′.
    #[serde(rename = "deriv")]
    DerivativeOfMeasure { base: MeasureRepr, mass: f64 },
    /// ν = plus − minus as measures.
    #[serde(rename = "diff")]
    Difference { plus: MeasureRepr, minus: MeasureRepr },
    /// ∂ of the semicircle family in its variance: (1/t)(1/√(z²−4t) − G_{γ_t}).
    #[serde(rename = "semicircle_b")]
    SemicircleBDerivative { variance: f64 },
    /// The Cauchy-family counterpart −it/(z+it)².
    #[serde(rename = "cauchy_b")]
    CauchyBDerivative { scale: f64 },
    /// ∂_q at q = 1 of a stable-law semigroup.
    #[serde(rename = "stable_b")]
    StableBDerivative { spec: StableSpec },
    /// factor · inner.
    Scaled { factor: f64, inner: Box<SecondCoordRepr> },
    /// ν(· − by).
    Shifted { by: f64, inner: Box<SecondCoordRepr> },
    /// ∂_t of a unit-circle atomic family with angles θ_k + t·speed_k.
    RotatingAtoms { angles: Vec<f64>, weights: Vec<f64>, speeds: Vec<f64> },
    /// Anything evaluable; not serializable.
    #[serde(skip)]
    Evaluator(OpaqueEval),
}

impl SecondCoordRepr {
    pub fn evaluator(
        f: impl Fn(DualComplex) -> Result<DualComplex> + Send + Sync + 'static,
    ) -> Self {
        SecondCoordRepr::Evaluator(OpaqueEval(Arc::new(f)))
    }

    /// ν(· − b).
    pub fn translate(&self, b: f64) -> SecondCoordRepr {
        match self {
            SecondCoordRepr::Zero => SecondCoordRepr::Zero,
            SecondCoordRepr::SignedAtomic { atoms } => SecondCoordRepr::SignedAtomic {
                atoms: atoms.iter().map(|a| Atom { x: a.x + b, w: a.w }).collect(),
            },
            SecondCoordRepr::DerivativeOfMeasure { base, mass } => {
                SecondCoordRepr::DerivativeOfMeasure { base: base.translate(b), mass: *mass }
            }
            SecondCoordRepr::Difference { plus, minus } => SecondCoordRepr::Difference {
                plus: plus.translate(b),
                minus: minus.translate(b),
            },
            SecondCoordRepr::Shifted { by, inner } => {
                SecondCoordRepr::Shifted { by: by + b, inner: inner.clone() }
            }
            other => SecondCoordRepr::Shifted { by: b, inner: Box::new(other.clone()) },
        }
    }
}

/// g_ν at a dual point: (g(z), w·g′(z)).
pub fn g_second(nu: &SecondCoordRepr, z: DualComplex) -> Result<DualComplex> {
    match nu {
        SecondCoordRepr::Zero => Ok(DualComplex::zero()),
        SecondCoordRepr::SignedAtomic { atoms } => {
            let mut g = C::zero();
            let mut g1 = C::zero();
            for a in atoms {
                let r = 1.0 / (z.re - a.x);
                g += a.w * r;
                g1 -= a.w * r * r;
            }
            Ok(Dual::new(g, z.inf * g1))
        }
        SecondCoordRepr::DerivativeOfMeasure { base, mass } => {
            // g = −mass·G_base′, g′ = −mass·G_base″
            let (_, g1, g2) = cauchy_jet2(base, z.re)?;
            Ok(Dual::new(-*mass * g1, -z.inf * *mass * g2))
        }
        SecondCoordRepr::Difference { plus, minus } => {
            Ok(cauchy_transform(plus, z)? - cauchy_transform(minus, z)?)
        }
        SecondCoordRepr::SemicircleBDerivative { variance } => {
            let t = *variance;
            let arcsine = MeasureRepr::Arcsine { center: 0.0, radius: 2.0 * t.sqrt() };
            let semi = MeasureRepr::Semicircle { mean: 0.0, variance: t };
            let diff = cauchy_transform(&arcsine, z)? - cauchy_transform(&semi, z)?;
            Ok(diff * (1.0 / t))
        }
        SecondCoordRepr::CauchyBDerivative { scale } => {
            let t = if z.re.im >= 0.0 { *scale } else { -*scale };
            let it = C::new(0.0, t);
            let u = z + it;
            // −it/(z+it)²
            Ok(u.inv()?.pow_u(2) * (-it))
        }
        SecondCoordRepr::StableBDerivative { spec } => {
            crate::laws::stable_second_dual(spec, z)
        }
        SecondCoordRepr::Scaled { factor, inner } => Ok(g_second(inner, z)? * *factor),
        SecondCoordRepr::Shifted { by, inner } => g_second(inner, z - cc(*by)),
        SecondCoordRepr::RotatingAtoms { .. } => Err(Error::UnsupportedRepr(
            "rotating circle family has no real-line g_ν; use psi_second".into(),
        )),
        SecondCoordRepr::Evaluator(f) => (f.0)(z),
    }
}

/// Dual Cauchy transform of a pair: G_{(μ,ν)}(Z) = (G_μ(z), w·G_μ′(z) + g_ν(z)).
pub fn dual_cauchy(
    mu: &MeasureRepr,
    nu: &SecondCoordRepr,
    z: DualComplex,
) -> Result<DualComplex> {
    let g = cauchy_transform(mu, z)?;
    let gn = g_second(nu, Dual::constant(z.re))?;
    Ok(Dual::new(g.re, g.inf + gn.re))
}

/// Moment generating function ψ_μ(z) = ∫ zt/(1 − zt) dμ(t) at a dual point.
///
/// Supported for circle-supported μ on 𝔻 and real-supported μ with support
/// in [0, ∞) on ℂ∖[0, ∞); elsewhere the formula ψ(z) = G(1/z)/z − 1 would
/// leave the guaranteed domain.
pub fn psi_dual(mu: &MeasureRepr, z: DualComplex) -> Result<DualComplex> {
    match mu {
        MeasureRepr::UnitCircleAtomic { atoms } => {
            let mut out = DualComplex::zero();
            for a in atoms {
                let zeta = C::from_polar(1.0, a.angle);
                let zz = z * zeta;
                let denom = (DualComplex::from_f64(1.0) - zz).inv()?;
                out += zz * denom * a.w;
            }
            Ok(out)
        }
        _ => {
            let (lo, _hi) = mu.support().ok_or_else(|| {
                Error::UnsupportedRepr(
                    "ψ needs compact real support in [0,∞) or a circle-supported law".into(),
                )
            })?;
            if lo < -1e-12 {
                return Err(Error::UnsupportedRepr(format!(
                    "ψ on the slit plane needs support in [0,∞); support starts at {lo}"
                )));
            }
            if z.re == C::zero() {
                return Ok(DualComplex::zero());
            }
            if z.re.im == 0.0 && z.re.re > 0.0 {
                return Err(Error::DomainError(
                    "ψ on the slit plane excludes z ∈ [0,∞)".into(),
                ));
            }
            let zi = z.inv()?;
            let g = cauchy_transform(mu, zi)?;
            Ok(g * zi - Complex64::new(1.0, 0.0))
        }
    }
}

/// Scalar ψ value.
pub fn psi_transform(mu: &MeasureRepr, z: C) -> Result<C> {
    Ok(psi_dual(mu, Dual::constant(z))?.re)
}

/// (ψ, ψ′, ψ″) of μ at a scalar point z ≠ 0 (same domains as [`psi_dual`]).
pub fn psi_jet2(mu: &MeasureRepr, z: C) -> Result<(C, C, C)> {
    match mu {
        MeasureRepr::UnitCircleAtomic { atoms } => {
            let mut p0 = C::zero();
            let mut p1 = C::zero();
            let mut p2 = C::zero();
            for a in atoms {
                let zeta = C::from_polar(1.0, a.angle);
                let r = 1.0 / (1.0 - z * zeta);
                p0 += a.w * z * zeta * r;
                p1 += a.w * zeta * r * r;
                p2 += 2.0 * a.w * zeta * zeta * r * r * r;
            }
            Ok((p0, p1, p2))
        }
        _ => {
            // ψ(z) = u·G(u) − 1 with u = 1/z:
            // ψ′ = −u²G − u³G′, ψ″ = 2u³G + 4u⁴G′ + u⁵G″
            let v = psi_dual(mu, Dual::constant(z))?.re; // domain checks live here
            let u = 1.0 / z;
            let (g, g1, g2) = cauchy_jet2(mu, u)?;
            let u2 = u * u;
            let u3 = u2 * u;
            Ok((
                v,
                -u2 * g - u3 * g1,
                2.0 * u3 * g + 4.0 * u3 * u * g1 + u3 * u2 * g2,
            ))
        }
    }
}

/// ψ-type evaluation of a second-coordinate functional:
/// ψ_ν(z) = ν(zt/(1−zt)) = g_ν(1/z)/z for real-supported ν,
/// with a closed form for rotating circle families.
pub fn psi_second(nu: &SecondCoordRepr, z: DualComplex) -> Result<DualComplex> {
    match nu {
        SecondCoordRepr::Zero => Ok(DualComplex::zero()),
        SecondCoordRepr::RotatingAtoms { angles, weights, speeds } => {
            let mut out = DualComplex::zero();
            for ((&th, &w), &v) in angles.iter().zip(weights).zip(speeds) {
                let zeta = C::from_polar(1.0, th);
                let zz = z * zeta;
                let denom = (DualComplex::from_f64(1.0) - zz).inv()?.pow_u(2);
                out += zz * denom * (w * v * C::new(0.0, 1.0));
            }
            Ok(out)
        }
        SecondCoordRepr::Difference { plus, minus } => {
            Ok(psi_dual(plus, z)? - psi_dual(minus, z)?)
        }
        SecondCoordRepr::Scaled { factor, inner } => Ok(psi_second(inner, z)? * *factor),
        _ => {
            if z.re == C::zero() {
                return Ok(DualComplex::zero());
            }
            let zi = z.inv()?;
            let g = g_second(nu, zi)?;
            Ok(g * zi)
        }
    }
}

/// Voiculescu transform φ_μ(z) = F_μ^{−1}(z) − z by damped Newton from w = z.
pub fn voiculescu_phi(mu: &MeasureRepr, z: C, tol: f64, max_iter: usize) -> Result<C> {
    let w = invert_f(mu, z, z, tol, max_iter)?;
    Ok(w - z)
}

/// Solve F_μ(w) = target starting from `start`, staying in the half-plane
/// of `start`.
pub(crate) fn invert_f(
    mu: &MeasureRepr,
    target: C,
    start: C,
    tol: f64,
    max_iter: usize,
) -> Result<C> {
    let mut w = start;
    let mut last_res = f64::INFINITY;
    for it in 0..max_iter {
        let (f, f1, _) = f_jet2(mu, w)?;
        let r = f - target;
        let res = r.norm();
        if res <= tol * target.norm().max(1.0) {
            return Ok(w);
        }
        if f1.norm() == 0.0 {
            return Err(Error::DegenerateValue("F′ = 0 in Newton inversion".into()));
        }
        let mut step = r / f1;
        // damp: keep the iterate in the starting half-plane and the residual falling
        let mut accepted = false;
        for _ in 0..60 {
            let cand = w - step;
            if cand.im * start.im > 0.0 || start.im == 0.0 {
                if let Ok((fc, _, _)) = f_jet2(mu, cand) {
                    if (fc - target).norm() < res {
                        w = cand;
                        accepted = true;
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it, residual: res });
        }
        last_res = res;
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: last_res })
}

/// Boundary density −Im G(x + iε)/π sampled on a grid, with optional
/// one-step Richardson extrapolation over ε, ε/2.
pub fn stieltjes_invert(
    g: impl Fn(C) -> Result<C>,
    grid: &[f64],
    eps: f64,
    richardson: bool,
) -> Result<Vec<f64>> {
    assert!(eps > 0.0, "stieltjes_invert needs ε > 0");
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let d1 = -g(C::new(x, eps))?.im / std::f64::consts::PI;
        let v = if richardson {
            let d2 = -g(C::new(x, 0.5 * eps))?.im / std::f64::consts::PI;
            2.0 * d2 - d1
        } else {
            d1
        };
        out.push(v);
    }
    Ok(out)
}

/// Package density samples as a grid measure (validates normalization).
pub fn grid_measure_from_samples(grid: &[f64], density: &[f64]) -> Result<MeasureRepr> {
    let m = MeasureRepr::GridDensity { x: grid.to_vec(), density: density.to_vec() };
    m.validate()?;
    Ok(m)
}

/// First or second moment of a law from its Cauchy transform along iy,
/// probed at y = 10³, 10⁴, 10⁵.  `None` when the probes do not stabilize
/// to 1e−4 relative (heavy tails) or drift off the real axis.
pub fn moments_from_cauchy(g: impl Fn(C) -> Result<C>, order: u8) -> Result<Option<f64>> {
    moments_from_cauchy_dyn(&g, order)
}

fn moments_from_cauchy_dyn(g: &dyn Fn(C) -> Result<C>, order: u8) -> Result<Option<f64>> {
    assert!(order == 1 || order == 2, "only first and second moments");
    let probe = |y: f64, m1: C| -> Result<C> {
        let iy = C::new(0.0, y);
        let gv = g(iy)?;
        Ok(match order {
            1 => iy * (iy * gv - 1.0),
            _ => iy * (iy * iy * gv - iy - m1),
        })
    };
    let m1 = if order == 2 {
        match moments_from_cauchy_dyn(g, 1)? {
            Some(v) => cc(v),
            None => return Ok(None),
        }
    } else {
        C::zero()
    };
    let v3 = probe(1e3, m1)?;
    let v4 = probe(1e4, m1)?;
    let v5 = probe(1e5, m1)?;
    let scale = v5.norm().max(1.0);
    let stable = (v4 - v5).norm() <= 1e-3 * scale && (v3 - v4).norm() <= 1e-2 * scale;
    // leading error of the probes is ~ c/y; a decade step supports one
    // Richardson sweep, pushing the truncation to O(1/y²)
    let extrapolated = v5 + (v5 - v4) / 9.0;
    let real = extrapolated.im.abs() <= 1e-4 * extrapolated.norm().max(1.0);
    Ok(if stable && real { Some(extrapolated.re) } else { None })
}

/// Checks shared by every second-coordinate representation: ν(1) = 0 via
/// lim iy·g(iy) = 0, and conjugate symmetry.  Returns the worst violation.
pub fn second_coord_violation(nu: &SecondCoordRepr, sample: &[C]) -> Result<f64> {
    // ν(1) = 0: lim iy·g(iy) = 0, probed at y = 10⁶, relative to a mid-plane scale
    let iy = C::new(0.0, 1e6);
    let tail = (iy * g_second(nu, Dual::constant(iy))?.re).norm();
    let scale = g_second(nu, Dual::constant(C::new(0.3, 1.0)))?
        .re
        .norm()
        .max(1.0);
    let mut max_v: f64 = tail / scale;
    for &z in sample {
        let a = g_second(nu, Dual::constant(z))?.re;
        let b = g_second(nu, Dual::constant(z.conj()))?.re;
        max_v = max_v.max((b - a.conj()).norm());
    }
    Ok(max_v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(re: C) -> DualComplex {
        Dual::constant(re)
    }

    fn with_unit_inf(z: C) -> DualComplex {
        Dual::new(z, C::new(1.0, 0.0))
    }

    #[test]
    fn atomic_transforms() {
        // δ₀ at z = i → −i
        let d0 = MeasureRepr::point_mass(0.0);
        let g = cauchy_transform(&d0, dc(C::new(0.0, 1.0))).unwrap();
        assert!((g.re - C::new(0.0, -1.0)).norm() < 1e-15);

        // ½(δ₋₁ + δ₁) at z = 2i → −0.4i, F = 2.5i, h = 0.5i
        let bern = MeasureRepr::two_point(-1.0, 1.0);
        let z = dc(C::new(0.0, 2.0));
        let g = cauchy_transform(&bern, z).unwrap();
        assert!((g.re - C::new(0.0, -0.4)).norm() < 1e-15);
        let (f, h) = reciprocal_and_h(&bern, z).unwrap();
        assert!((f.re - C::new(0.0, 2.5)).norm() < 1e-14);
        assert!((h.re - C::new(0.0, 0.5)).norm() < 1e-14);

        // δ_a has h ≡ −a
        let da = MeasureRepr::point_mass(1.7);
        let (_, h) = reciprocal_and_h(&da, dc(C::new(0.4, 1.3))).unwrap();
        assert!((h.re - cc(-1.7)).norm() < 1e-13);
    }

    #[test]
    fn semicircle_closed_forms() {
        // G_{γ₁}(2i) = i(1−√2)
        let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
        let g = cauchy_transform(&semi, dc(C::new(0.0, 2.0))).unwrap();
        let expect = C::new(0.0, 1.0 - 2.0f64.sqrt());
        assert!((g.re - expect).norm() < 1e-14);
        // F = 1/G ≈ 2.41421i, h ≈ 0.41421i
        let (f, h) = reciprocal_and_h(&semi, dc(C::new(0.0, 2.0))).unwrap();
        assert!((f.re - C::new(0.0, 1.0 + 2.0f64.sqrt())).norm() < 1e-13);
        assert!((h.re - C::new(0.0, 2.0f64.sqrt() - 1.0)).norm() < 1e-13);
    }

    #[test]
    fn arcsine_matches_normalization() {
        // Arcsine{0,2}: G = 1/√(z²−4); at z = 3i: −i/√13
        let arc = MeasureRepr::Arcsine { center: 0.0, radius: 2.0 };
        let g = cauchy_transform(&arc, dc(C::new(0.0, 3.0))).unwrap();
        assert!((g.re - C::new(0.0, -1.0 / 13.0f64.sqrt())).norm() < 1e-14);
    }

    #[test]
    fn jets_match_finite_differences() {
        let measures = vec![
            MeasureRepr::two_point(-1.0, 1.0),
            MeasureRepr::Semicircle { mean: 0.3, variance: 1.2 },
            MeasureRepr::Arcsine { center: -0.2, radius: 1.5 },
            MeasureRepr::CauchyLaw { location: 0.1, scale: 0.7 },
            MeasureRepr::FreePoisson { rate: 1.4, jump: 0.8 },
            MeasureRepr::GridDensity {
                x: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
                density: vec![0.0, 0.8, 1.4, 0.8, 0.0],
            },
            MeasureRepr::Shifted {
                by: 0.4,
                inner: Box::new(MeasureRepr::FreePoisson { rate: 2.0, jump: 0.5 }),
            },
        ];
        let h = 1e-5;
        for mu in &measures {
            for &z in &[C::new(0.7, 1.1), C::new(-1.3, 0.4), C::new(0.2, -2.0)] {
                let (g, g1, g2) = cauchy_jet2(mu, z).unwrap();
                let gp = cauchy_jet2(mu, z + h).unwrap().0;
                let gm = cauchy_jet2(mu, z - h).unwrap().0;
                let fd1 = (gp - gm) / (2.0 * h);
                let fd2 = (gp - 2.0 * g + gm) / (h * h);
                assert!((g1 - fd1).norm() < 1e-7, "{mu:?} G′ at {z}");
                assert!((g2 - fd2).norm() < 1e-4, "{mu:?} G″ at {z}");
            }
        }
    }

    #[test]
    fn nevanlinna_and_normalization() {
        let measures = vec![
            MeasureRepr::two_point(-1.0, 1.0),
            MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 },
            MeasureRepr::Arcsine { center: 0.0, radius: 2.0 },
            MeasureRepr::CauchyLaw { location: 0.0, scale: 1.0 },
            MeasureRepr::FreePoisson { rate: 1.0, jump: 1.0 },
            MeasureRepr::FreePoisson { rate: 0.5, jump: 1.0 },
            MeasureRepr::GridDensity {
                x: vec![-1.0, 0.0, 1.0],
                density: vec![0.0, 1.0, 0.0],
            },
        ];
        for mu in &measures {
            for x in [-3.0, -1.0, 0.0, 0.6, 2.5] {
                for y in [0.1, 0.5, 2.0, 10.0] {
                    let z = C::new(x, y);
                    let g = cauchy_jet2(mu, z).unwrap().0;
                    assert!(g.im < 0.0, "Im G ≥ 0 for {mu:?} at {z}");
                    let f = 1.0 / g;
                    assert!(f.im >= y - 1e-12, "Im F < Im z for {mu:?} at {z}");
                }
            }
            // lim iy·G(iy) = 1
            let iy = C::new(0.0, 1e6);
            let g = cauchy_jet2(mu, iy).unwrap().0;
            assert!((iy * g - 1.0).norm() < 1e-4, "normalization for {mu:?}");
            // conjugate symmetry
            let z = C::new(0.37, 0.9);
            let a = cauchy_jet2(mu, z).unwrap().0;
            let b = cauchy_jet2(mu, z.conj()).unwrap().0;
            assert!((b - a.conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn domain_errors() {
        let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
        assert!(cauchy_jet2(&semi, C::new(0.5, 0.0)).is_err());
        // real points outside the support are fine
        assert!(cauchy_jet2(&semi, C::new(3.0, 0.0)).is_ok());
        let g = cauchy_jet2(&semi, C::new(-5.0, 0.0)).unwrap().0;
        assert!(g.im.abs() < 1e-14 && g.re < 0.0);
    }

    #[test]
    fn second_coordinate_values() {
        // derivative of δ₀: g(i) = 1/i² = −1
        let nu = SecondCoordRepr::DerivativeOfMeasure {
            base: MeasureRepr::point_mass(0.0),
            mass: 1.0,
        };
        let v = g_second(&nu, dc(C::new(0.0, 1.0))).unwrap();
        assert!((v.re - cc(-1.0)).norm() < 1e-15);

        // semicircle-B at 2i ≈ 0.060660i
        let nu = SecondCoordRepr::SemicircleBDerivative { variance: 1.0 };
        let v = g_second(&nu, dc(C::new(0.0, 2.0))).unwrap();
        let expect = C::new(0.0, -1.0 / (2.0 * 2.0f64.sqrt()) - (1.0 - 2.0f64.sqrt()));
        assert!((v.re - expect).norm() < 1e-12);
        assert!((v.re - C::new(0.0, 0.060660)).norm() < 1e-6);

        // cauchy-B at i → 0.25i
        let nu = SecondCoordRepr::CauchyBDerivative { scale: 1.0 };
        let v = g_second(&nu, dc(C::new(0.0, 1.0))).unwrap();
        assert!((v.re - C::new(0.0, 0.25)).norm() < 1e-14);
    }

    #[test]
    fn second_coordinate_dual_parts_match_fd() {
        let nus = vec![
            SecondCoordRepr::SignedAtomic {
                atoms: vec![Atom { x: -1.0, w: 0.5 }, Atom { x: 1.0, w: -0.5 }],
            },
            SecondCoordRepr::DerivativeOfMeasure {
                base: MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 },
                mass: 2.0,
            },
            SecondCoordRepr::Difference {
                plus: MeasureRepr::point_mass(0.0),
                minus: MeasureRepr::two_point(-1.0, 1.0),
            },
            SecondCoordRepr::SemicircleBDerivative { variance: 0.8 },
            SecondCoordRepr::CauchyBDerivative { scale: 1.3 },
            SecondCoordRepr::Scaled {
                factor: 2.5,
                inner: Box::new(SecondCoordRepr::SemicircleBDerivative { variance: 1.0 }),
            },
        ];
        let h = 1e-5;
        for nu in &nus {
            for &z in &[C::new(0.4, 1.2), C::new(-0.8, 0.6)] {
                let v = g_second(nu, with_unit_inf(z)).unwrap();
                let p = g_second(nu, dc(z + h)).unwrap().re;
                let m = g_second(nu, dc(z - h)).unwrap().re;
                let fd = (p - m) / (2.0 * h);
                assert!((v.inf - fd).norm() < 1e-6, "{nu:?} g′ mismatch at {z}");
            }
        }
    }

    #[test]
    fn second_coordinate_axioms() {
        let sample: Vec<C> = vec![C::new(0.3, 0.9), C::new(-1.1, 0.5), C::new(2.0, 2.0)];
        let nus = vec![
            SecondCoordRepr::SignedAtomic {
                atoms: vec![Atom { x: 0.5, w: 1.0 }, Atom { x: -0.5, w: -1.0 }],
            },
            SecondCoordRepr::DerivativeOfMeasure {
                base: MeasureRepr::two_point(-1.0, 1.0),
                mass: 1.0,
            },
            SecondCoordRepr::Difference {
                plus: MeasureRepr::Semicircle { mean: 0.0, variance: 2.0 },
                minus: MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 },
            },
            SecondCoordRepr::SemicircleBDerivative { variance: 1.0 },
            SecondCoordRepr::CauchyBDerivative { scale: 0.7 },
        ];
        for nu in &nus {
            let v = second_coord_violation(nu, &sample).unwrap();
            assert!(v < 1e-4, "{nu:?} violates 𝓜₀ conditions by {v}");
        }
    }

    #[test]
    fn dual_cauchy_composition() {
        // (δ₀, 0) at (i, 1) → (−i, 1)
        let v = dual_cauchy(
            &MeasureRepr::point_mass(0.0),
            &SecondCoordRepr::Zero,
            with_unit_inf(C::new(0.0, 1.0)),
        )
        .unwrap();
        assert!((v.re - C::new(0.0, -1.0)).norm() < 1e-15);
        assert!((v.inf - cc(1.0)).norm() < 1e-15);

        // semicircle pair at (2i, 0): (−0.414214i, 0.060660i)
        let v = dual_cauchy(
            &MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 },
            &SecondCoordRepr::SemicircleBDerivative { variance: 1.0 },
            dc(C::new(0.0, 2.0)),
        )
        .unwrap();
        assert!((v.re - C::new(0.0, -0.414214)).norm() < 1e-6);
        assert!((v.inf - C::new(0.0, 0.060660)).norm() < 1e-6);

        // conjugate symmetry of the pair transform
        let mu = MeasureRepr::two_point(-1.0, 1.0);
        let nu = SecondCoordRepr::SignedAtomic {
            atoms: vec![Atom { x: 1.0, w: 0.3 }, Atom { x: -1.0, w: -0.3 }],
        };
        let z = Dual::new(C::new(0.3, 0.8), C::new(0.2, -0.1));
        let a = dual_cauchy(&mu, &nu, z).unwrap();
        let b = dual_cauchy(&mu, &nu, z.conj()).unwrap();
        assert!((b.re - a.re.conj()).norm() < 1e-13);
        assert!((b.inf - a.inf.conj()).norm() < 1e-13);
    }

    #[test]
    fn psi_values() {
        // δ₁ on 𝕋 at 0.5 → 1
        let haar1 = MeasureRepr::UnitCircleAtomic {
            atoms: vec![CircleAtom { angle: 0.0, w: 1.0 }],
        };
        let v = psi_transform(&haar1, C::new(0.5, 0.0)).unwrap();
        assert!((v - cc(1.0)).norm() < 1e-14);

        // uniform on {1, −1} at 0.3
        let pm = MeasureRepr::UnitCircleAtomic {
            atoms: vec![
                CircleAtom { angle: 0.0, w: 0.5 },
                CircleAtom { angle: std::f64::consts::PI, w: 0.5 },
            ],
        };
        let v = psi_transform(&pm, C::new(0.3, 0.0)).unwrap();
        let expect = 0.5 * 0.3 / 0.7 - 0.5 * 0.3 / 1.3;
        assert!((v - cc(expect)).norm() < 1e-14);

        // δ_a on ℝ₊ at z = −1 → −a/(1+a)
        let da = MeasureRepr::point_mass(2.0);
        let v = psi_transform(&da, C::new(-1.0, 0.0)).unwrap();
        assert!((v - cc(-2.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn phi_closed_forms() {
        // φ_{δ_a} ≡ a
        let da = MeasureRepr::point_mass(0.8);
        let v = voiculescu_phi(&da, C::new(0.3, 2.0), 1e-13, 200).unwrap();
        assert!((v - cc(0.8)).norm() < 1e-12);

        // φ of semicircle variance t is t/z; at 5i with t = 1: −0.2i
        let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
        let v = voiculescu_phi(&semi, C::new(0.0, 5.0), 1e-13, 200).unwrap();
        assert!((v - C::new(0.0, -0.2)).norm() < 1e-12);

        // φ of the Cauchy law is −it
        let cl = MeasureRepr::CauchyLaw { location: 0.0, scale: 0.6 };
        let v = voiculescu_phi(&cl, C::new(0.4, 3.0), 1e-13, 200).unwrap();
        assert!((v - C::new(0.0, -0.6)).norm() < 1e-12);
    }

    #[test]
    fn stieltjes_densities() {
        let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
        let g = |z: C| cauchy_jet2(&semi, z).map(|j| j.0);
        let d = stieltjes_invert(g, &[0.0], 1e-4, true).unwrap();
        assert!((d[0] - 1.0 / std::f64::consts::PI).abs() < 1e-7);

        let arc = MeasureRepr::Arcsine { center: 0.0, radius: 2.0 };
        let ga = |z: C| cauchy_jet2(&arc, z).map(|j| j.0);
        let d = stieltjes_invert(ga, &[0.0], 1e-4, true).unwrap();
        assert!((d[0] - 0.5 / std::f64::consts::PI).abs() < 1e-7);

        // atom off-grid leaks ~ ε
        let d0 = MeasureRepr::point_mass(0.0);
        let gd = |z: C| cauchy_jet2(&d0, z).map(|j| j.0);
        let d = stieltjes_invert(gd, &[1.0], 1e-6, false).unwrap();
        assert!(d[0].abs() < 1e-5);
    }

    #[test]
    fn density_reintegrates_to_one() {
        let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
        let g = |z: C| cauchy_jet2(&semi, z).map(|j| j.0);
        let grid: Vec<f64> = (0..2000).map(|i| -3.0 + 6.0 * i as f64 / 1999.0).collect();
        let d = stieltjes_invert(g, &grid, 1e-4, false).unwrap();
        let mass = trapezoid_mass(&grid, &d);
        assert!((mass - 1.0).abs() < 2e-3, "mass {mass}");
    }

    #[test]
    fn moment_recovery() {
        let da = MeasureRepr::Atomic {
            atoms: vec![Atom { x: 1.5, w: 0.25 }, Atom { x: -0.5, w: 0.75 }],
        };
        let g = |z: C| cauchy_jet2(&da, z).map(|j| j.0);
        let m1 = moments_from_cauchy(g, 1).unwrap().unwrap();
        let m2 = moments_from_cauchy(g, 2).unwrap().unwrap();
        let want1 = 0.25 * 1.5 - 0.75 * 0.5;
        let want2 = 0.25 * 1.5 * 1.5 + 0.75 * 0.25;
        assert!((m1 - want1).abs() < 1e-4 * want1.abs().max(1.0));
        assert!((m2 - want2).abs() < 1e-4 * want2.abs().max(1.0));

        let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
        let gs = |z: C| cauchy_jet2(&semi, z).map(|j| j.0);
        assert!(moments_from_cauchy(gs, 1).unwrap().unwrap().abs() < 1e-4);
        assert!((moments_from_cauchy(gs, 2).unwrap().unwrap() - 1.0).abs() < 1e-3);

        // heavy tails: second moment is a sentinel, not an error
        let cl = MeasureRepr::CauchyLaw { location: 0.0, scale: 1.0 };
        let gc = |z: C| cauchy_jet2(&cl, z).map(|j| j.0);
        assert!(moments_from_cauchy(gc, 2).unwrap().is_none());
        assert!(moments_from_cauchy(gc, 1).unwrap().is_none());
    }

    #[test]
    fn json_round_trip() {
        let txt = r#"{"type":"atomic","atoms":[{"x":-1.0,"w":0.5},{"x":1.0,"w":0.5}]}"#;
        let m: MeasureRepr = serde_json::from_str(txt).unwrap();
        assert_eq!(m, MeasureRepr::two_point(-1.0, 1.0));
        let txt = r#"{"type":"semicircle","mean":0.0,"variance":1.0}"#;
        let m: MeasureRepr = serde_json::from_str(txt).unwrap();
        m.validate().unwrap();
        let txt = r#"{"type":"free_poisson","rate":1.0,"jump":1.0}"#;
        let m: MeasureRepr = serde_json::from_str(txt).unwrap();
        m.validate().unwrap();
        let txt = r#"{"type":"deriv","base":{"type":"semicircle","mean":0.0,"variance":1.0},"mass":1.0}"#;
        let nu: SecondCoordRepr = serde_json::from_str(txt).unwrap();
        assert!(matches!(nu, SecondCoordRepr::DerivativeOfMeasure { .. }));
        let txt = r#"{"type":"semicircle_b","variance":1.0}"#;
        let nu: SecondCoordRepr = serde_json::from_str(txt).unwrap();
        let s = serde_json::to_string(&nu).unwrap();
        let nu2: SecondCoordRepr = serde_json::from_str(&s).unwrap();
        assert!(matches!(nu2, SecondCoordRepr::SemicircleBDerivative { .. }));
    }
}

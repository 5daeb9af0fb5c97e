//! The type B convolutions: ⊞_B and ⊠_B, conditionally free ⊞_C, the
//! ρ ↔ σ correspondence between c-free pairs and derivative second
//! coordinates, the partial ⊞_B semigroup, and the infinitesimal
//! (path-derivative) verification.
//!
//! Outputs stay lazy: a convolution is a pair of dual-capable evaluators
//! (G₃, g₃) — or (ψ₃, ψ_{ν₃}) in the multiplicative case — with the second
//! coordinate given by
//!   g₃(z) = g_{ν₁}(ω₁(z))·ω₁′(z) + g_{ν₂}(ω₂(z))·ω₂′(z),
//! the ω_j being the subordination functions of the first coordinates.
//! Materializing a density is a separate, lossy step.

use num_complex::Complex64;
use std::sync::Arc;

use crate::dualnum::{Dual, DualComplex};
use crate::error::{Error, Result};
use crate::measures::{
    cauchy_jet2, cauchy_transform, f_jet2, g_second, moments_from_cauchy, psi_second,
    reciprocal_and_h, stieltjes_invert, Atom, MeasureRepr, ScaledMeasure, SecondCoordRepr,
};
use crate::subordination::{
    additive_point, multiplicative_omega, CauchyKernel, MultDomain, SolverConfig,
};

type C = Complex64;

/// A type B law: probability measure plus second-coordinate functional.
#[derive(Debug, Clone)]
pub struct TypeBLaw {
    pub first: MeasureRepr,
    pub second: SecondCoordRepr,
}

impl TypeBLaw {
    pub fn new(first: MeasureRepr, second: SecondCoordRepr) -> Self {
        TypeBLaw { first, second }
    }

    /// Both coordinates translated by b.
    pub fn translate(&self, b: f64) -> TypeBLaw {
        TypeBLaw {
            first: self.first.translate(b),
            second: self.second.translate(b),
        }
    }
}

/// Which transform pair an output's evaluators produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// (G₃, g_{ν₃}) on ℂ∖ℝ.
    CauchyAdditive,
    /// (ψ₃, ψ_{ν₃}) on 𝔻 or ℂ∖[0,∞).
    PsiMultiplicative,
}

/// Inputs and solver configuration recorded with a convolution.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub operation: &'static str,
    pub input1: String,
    pub input2: String,
    pub config: SolverConfig,
}

type Eval = Arc<dyn Fn(DualComplex) -> Result<DualComplex> + Send + Sync>;
type JetEval = Arc<dyn Fn(C) -> Result<(C, C, C)> + Send + Sync>;

/// Lazy convolution result: the first coordinate carries a full 2-jet (so
/// outputs can re-enter the subordination solver as kernels), the second a
/// dual-capable evaluator.
#[derive(Clone)]
pub struct ConvolutionOutput {
    pub kind: TransformKind,
    first_jet: JetEval,
    second: Eval,
    pub provenance: Provenance,
}

impl std::fmt::Debug for ConvolutionOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConvolutionOutput")
            .field("kind", &self.kind)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl ConvolutionOutput {
    /// First-coordinate transform (G₃ or ψ₃) at a dual point.
    pub fn first(&self, z: DualComplex) -> Result<DualComplex> {
        let (g, g1, _) = (self.first_jet)(z.re)?;
        Ok(Dual::new(g, z.inf * g1))
    }

    /// Second-coordinate transform (g₃ or ψ_{ν₃}) at a dual point.
    pub fn second(&self, z: DualComplex) -> Result<DualComplex> {
        (self.second)(z)
    }

    pub fn first_scalar(&self, z: C) -> Result<C> {
        Ok((self.first_jet)(z)?.0)
    }

    pub fn second_scalar(&self, z: C) -> Result<C> {
        Ok(self.second(Dual::constant(z))?.re)
    }

    /// The second coordinate repackaged as a functional representation,
    /// usable as an input to further convolutions.
    pub fn second_as_repr(&self) -> SecondCoordRepr {
        let eval = self.second.clone();
        SecondCoordRepr::Evaluator(crate::measures::OpaqueEval(eval))
    }
}

impl CauchyKernel for ConvolutionOutput {
    fn jet2(&self, z: C) -> Result<(C, C, C)> {
        if self.kind != TransformKind::CauchyAdditive {
            return Err(Error::UnsupportedRepr(
                "ψ-type output has no Cauchy kernel".into(),
            ));
        }
        (self.first_jet)(z)
    }
}

/// Free additive convolution of type B.
///
/// G₃(z) = G₁(ω₁(z)); the second coordinate follows the subordination
/// formula with exact ω′ (and ω″ feeding the dual parts).
pub fn boxplus_b(p1: &TypeBLaw, p2: &TypeBLaw, cfg: &SolverConfig) -> Result<ConvolutionOutput> {
    boxplus_b_kernels(
        Arc::new(p1.first.clone()),
        p1.second.clone(),
        Arc::new(p2.first.clone()),
        p2.second.clone(),
        Provenance {
            operation: "boxplus_b",
            input1: format!("{p1:?}"),
            input2: format!("{p2:?}"),
            config: *cfg,
        },
    )
}

/// Kernel-level ⊞_B: first coordinates as Cauchy kernels (measures or
/// previous outputs), second coordinates as functional representations.
pub fn boxplus_b_kernels(
    m1: Arc<dyn CauchyKernel>,
    n1: SecondCoordRepr,
    m2: Arc<dyn CauchyKernel>,
    n2: SecondCoordRepr,
    provenance: Provenance,
) -> Result<ConvolutionOutput> {
    let cfg1 = provenance.config;
    let first_jet: JetEval = {
        let (m1, m2) = (m1.clone(), m2.clone());
        Arc::new(move |z: C| {
            let p = additive_point(m1.as_ref(), m2.as_ref(), z, &cfg1, None)?;
            Ok((p.g3, p.g3_d.0, p.g3_d.1))
        })
    };
    let second: Eval = Arc::new(move |z: DualComplex| {
        let p = additive_point(m1.as_ref(), m2.as_ref(), z.re, &cfg1, None)?;
        let w = z.inf;
        // Ω_j = (ω_j, w·ω_j′), dΩ_j = (ω_j′, w·ω_j″): dual arithmetic then
        // yields g_ν(Ω)·dΩ = value + w·(d/dz) pairs exactly.
        let om1 = Dual::new(p.omega1, w * p.omega1_d.0);
        let om2 = Dual::new(p.omega2, w * p.omega2_d.0);
        let dom1 = Dual::new(p.omega1_d.0, w * p.omega1_d.1);
        let dom2 = Dual::new(p.omega2_d.0, w * p.omega2_d.1);
        Ok(g_second(&n1, om1)? * dom1 + g_second(&n2, om2)? * dom2)
    });
    Ok(ConvolutionOutput {
        kind: TransformKind::CauchyAdditive,
        first_jet,
        second,
        provenance,
    })
}

/// Free multiplicative convolution of type B on 𝕋 or [0, ∞):
/// ψ_{ν₃}(z)/z = Σ_j [ψ_{ν_j}(ω_j)/ω_j]·ω_j′.
pub fn boxtimes_b(
    p1: &TypeBLaw,
    p2: &TypeBLaw,
    domain: MultDomain,
    cfg: &SolverConfig,
) -> Result<ConvolutionOutput> {
    let provenance = Provenance {
        operation: "boxtimes_b",
        input1: format!("{p1:?}"),
        input2: format!("{p2:?}"),
        config: *cfg,
    };
    let (m1, m2) = (p1.first.clone(), p2.first.clone());
    let (n1, n2) = (p1.second.clone(), p2.second.clone());
    let cfg1 = *cfg;
    let first_jet: JetEval = {
        let (m1, m2) = (m1.clone(), m2.clone());
        Arc::new(move |z: C| {
            let p = multiplicative_omega(&m1, &m2, z, domain, cfg1.tol, cfg1.max_iter)?;
            Ok(p.psi3)
        })
    };
    let second: Eval = Arc::new(move |z: DualComplex| {
        let p = multiplicative_omega(&m1, &m2, z.re, domain, cfg1.tol, cfg1.max_iter)?;
        let w = z.inf;
        // ψ_{ν₃}(z) = z·Σ_j [ψ_{ν_j}(ω_j)/ω_j]·ω_j′ in dual arithmetic,
        // with Ω_j = (ω_j, w·ω_j′) and dΩ_j = (ω_j′, w·ω_j″)
        let om1 = Dual::new(p.omega1, w * p.omega1_p);
        let om2 = Dual::new(p.omega2, w * p.omega2_p);
        let dom1 = Dual::new(p.omega1_p, w * p.omega1_pp);
        let dom2 = Dual::new(p.omega2_p, w * p.omega2_pp);
        let s1 = psi_second(&n1, om1)? * om1.inv()? * dom1;
        let s2 = psi_second(&n2, om2)? * om2.inv()? * dom2;
        Ok(Dual::new(p.z, w) * (s1 + s2))
    });
    Ok(ConvolutionOutput {
        kind: TransformKind::PsiMultiplicative,
        first_jet,
        second,
        provenance,
    })
}

/// Conditionally free additive convolution of pairs (μ_j, ρ_j): returns the
/// dual-capable evaluator of F_{ρ₃}(z) = z + h_{ρ₁}(ω₁(z)) + h_{ρ₂}(ω₂(z)),
/// the ω_j taken from μ₁ ⊞ μ₂.
pub fn cfree_boxplus(
    m1: (&MeasureRepr, &MeasureRepr),
    m2: (&MeasureRepr, &MeasureRepr),
    cfg: &SolverConfig,
) -> Result<Eval> {
    let (mu1, rho1) = (m1.0.clone(), m1.1.clone());
    let (mu2, rho2) = (m2.0.clone(), m2.1.clone());
    let cfg1 = *cfg;
    Ok(Arc::new(move |z: DualComplex| {
        let p = additive_point(&mu1, &mu2, z.re, &cfg1, None)?;
        let w = z.inf;
        let om1 = Dual::new(p.omega1, w * p.omega1_d.0);
        let om2 = Dual::new(p.omega2, w * p.omega2_d.0);
        let (_, h1) = reciprocal_and_h(&rho1, om1)?;
        let (_, h2) = reciprocal_and_h(&rho2, om2)?;
        Ok(z + h1 + h2)
    }))
}

// first and second moments; exact for the closed-form representations,
// iy-probe limits otherwise
fn centered_moments(rho: &MeasureRepr) -> Result<f64> {
    let exact = match rho {
        MeasureRepr::Atomic { atoms } => Some((
            atoms.iter().map(|a| a.w * a.x).sum::<f64>(),
            atoms.iter().map(|a| a.w * a.x * a.x).sum::<f64>(),
        )),
        MeasureRepr::Semicircle { mean, variance } => Some((*mean, mean * mean + variance)),
        MeasureRepr::Arcsine { center, radius } => {
            Some((*center, center * center + 0.5 * radius * radius))
        }
        MeasureRepr::CauchyLaw { .. } => return Err(Error::InfiniteVariance),
        _ => None,
    };
    let (m1, m2) = match exact {
        Some(v) => v,
        None => {
            let g = |z: C| cauchy_jet2(rho, z).map(|j| j.0);
            let m1 = moments_from_cauchy(g, 1)?.ok_or(Error::InfiniteVariance)?;
            let g = |z: C| cauchy_jet2(rho, z).map(|j| j.0);
            let m2 = moments_from_cauchy(g, 2)?.ok_or(Error::InfiniteVariance)?;
            (m1, m2)
        }
    };
    if m1.abs() > 1e-6 {
        return Err(Error::NonCentered(m1));
    }
    Ok(m2 - m1 * m1)
}

/// The unique centered, finite-variance ρ with F_ρ(z) = z − G_{σ₀}(z).
///
/// Atomic and semicircle-of-matching-mass σ₀ resolve in closed form; other
/// representations are materialized on a grid by Stieltjes inversion.
pub fn rho_from_sigma(sigma0: &ScaledMeasure) -> Result<MeasureRepr> {
    if sigma0.mass < 0.0 {
        return Err(Error::InvalidInput("σ₀ must be a positive measure".into()));
    }
    if sigma0.mass == 0.0 {
        return Ok(MeasureRepr::point_mass(0.0));
    }
    match &sigma0.base {
        MeasureRepr::Atomic { atoms } => {
            // F_ρ(x) = x − Σ m_i/(x − x_i): one zero per gap plus the two
            // outer ones, weights 1/F′ at the zeros.
            let mut xs: Vec<(f64, f64)> =
                atoms.iter().map(|a| (a.x, a.w * sigma0.mass)).collect();
            xs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let f = |x: f64| -> f64 {
                x - xs.iter().map(|&(xi, mi)| mi / (x - xi)).sum::<f64>()
            };
            let fp = |x: f64| -> f64 {
                1.0 + xs.iter().map(|&(xi, mi)| mi / ((x - xi) * (x - xi))).sum::<f64>()
            };
            let mut roots = Vec::with_capacity(xs.len() + 1);
            let span = sigma0.mass.sqrt().max(1.0);
            // outer intervals, expanding until the sign flips
            let mut lo = xs[0].0 - span;
            while f(lo) >= 0.0 {
                lo -= span;
            }
            roots.push(bisect(&f, lo, xs[0].0 - 1e-13));
            for w in xs.windows(2) {
                roots.push(bisect(&f, w[0].0 + 1e-13, w[1].0 - 1e-13));
            }
            let mut hi = xs.last().unwrap().0 + span;
            while f(hi) <= 0.0 {
                hi += span;
            }
            roots.push(bisect(&f, xs.last().unwrap().0 + 1e-13, hi));
            let mut out: Vec<Atom> =
                roots.iter().map(|&s| Atom { x: s, w: 1.0 / fp(s) }).collect();
            let total: f64 = out.iter().map(|a| a.w).sum();
            debug_assert!((total - 1.0).abs() < 1e-9, "residues must sum to 1");
            for a in &mut out {
                a.w /= total;
            }
            Ok(MeasureRepr::Atomic { atoms: out })
        }
        MeasureRepr::Semicircle { mean, variance }
            if *mean == 0.0 && (variance - sigma0.mass).abs() < 1e-12 =>
        {
            // h_{γ_t} = −t·G_{γ_t}, so σ₀ = t·γ_t inverts to ρ = γ_t
            Ok(MeasureRepr::Semicircle { mean: 0.0, variance: *variance })
        }
        base => {
            let (lo, hi) = base.support().ok_or_else(|| {
                Error::UnsupportedRepr("ρ recovery needs compactly supported σ₀".into())
            })?;
            let pad = 2.0 * sigma0.mass.sqrt() + 1.0;
            let (lo, hi) = (lo - pad, hi + pad);
            let grid: Vec<f64> =
                (0..3001).map(|i| lo + (hi - lo) * i as f64 / 3000.0).collect();
            let mass = sigma0.mass;
            let g_rho = |z: C| -> Result<C> {
                let g0 = cauchy_jet2(base, z)?.0;
                Ok(1.0 / (z - mass * g0))
            };
            let density = stieltjes_invert(g_rho, &grid, 1e-5, true)?;
            let clipped: Vec<f64> = density.iter().map(|d| d.max(0.0)).collect();
            normalized_grid(&grid, &clipped)
        }
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) < 0 < f(hi) by construction (F_ρ increases on each gap)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn normalized_grid(grid: &[f64], density: &[f64]) -> Result<MeasureRepr> {
    let mass: f64 = grid
        .windows(2)
        .zip(density.windows(2))
        .map(|(xs, vs)| 0.5 * (vs[0] + vs[1]) * (xs[1] - xs[0]))
        .sum();
    if !(0.99..=1.01).contains(&mass) {
        return Err(Error::DegenerateValue(format!(
            "recovered density integrates to {mass}, expected ≈ 1"
        )));
    }
    let density: Vec<f64> = density.iter().map(|d| d / mass).collect();
    Ok(MeasureRepr::GridDensity { x: grid.to_vec(), density })
}

/// The converse correspondence: the σ ∈ 𝓜_d with G_σ = h_ρ′ for a centered
/// finite-variance ρ, returned as `DerivativeOfMeasure{σ₀}` with
/// σ₀(ℝ) = ∫t²dρ.
pub fn sigma_from_rho(rho: &MeasureRepr) -> Result<SecondCoordRepr> {
    let var = centered_moments(rho)?;
    if var < 1e-14 {
        return Ok(SecondCoordRepr::Zero);
    }
    match rho {
        MeasureRepr::Atomic { atoms } => {
            // zeros of G_ρ interlace the atoms; residues of z − F_ρ there
            let mut xs: Vec<(f64, f64)> = atoms.iter().map(|a| (a.x, a.w)).collect();
            xs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let g = |x: f64| -> f64 { xs.iter().map(|&(xi, wi)| wi / (x - xi)).sum() };
            let gp = |x: f64| -> f64 {
                -xs.iter().map(|&(xi, wi)| wi / ((x - xi) * (x - xi))).sum::<f64>()
            };
            let mut out = Vec::with_capacity(xs.len().saturating_sub(1));
            for w in xs.windows(2) {
                // G decreases from +∞ to −∞ across each gap
                let s = bisect(&|x| -g(x), w[0].0 + 1e-13, w[1].0 - 1e-13);
                out.push(Atom { x: s, w: -1.0 / gp(s) });
            }
            let total: f64 = out.iter().map(|a| a.w).sum();
            debug_assert!((total - var).abs() < 1e-8 * var.max(1.0));
            let atoms =
                out.iter().map(|a| Atom { x: a.x, w: a.w / total }).collect::<Vec<_>>();
            Ok(SecondCoordRepr::DerivativeOfMeasure {
                base: MeasureRepr::Atomic { atoms },
                mass: total,
            })
        }
        MeasureRepr::Semicircle { mean, variance } if *mean == 0.0 => {
            Ok(SecondCoordRepr::DerivativeOfMeasure {
                base: MeasureRepr::Semicircle { mean: 0.0, variance: *variance },
                mass: *variance,
            })
        }
        _ => {
            let (lo, hi) = rho.support().ok_or_else(|| {
                Error::UnsupportedRepr("σ recovery needs compactly supported ρ".into())
            })?;
            let pad = 0.5 * (hi - lo) + 1.0;
            let (lo, hi) = (lo - pad, hi + pad);
            let grid: Vec<f64> =
                (0..3001).map(|i| lo + (hi - lo) * i as f64 / 3000.0).collect();
            let g_sigma = |z: C| -> Result<C> {
                let (f, _, _) = f_jet2(rho, z)?;
                Ok(z - f)
            };
            let density = stieltjes_invert(g_sigma, &grid, 1e-5, true)?;
            let mass: f64 = grid
                .windows(2)
                .zip(density.windows(2))
                .map(|(xs, vs)| 0.5 * (vs[0] + vs[1]) * (xs[1] - xs[0]))
                .sum();
            if (mass - var).abs() > 0.02 * var.max(1.0) {
                return Err(Error::DegenerateValue(format!(
                    "σ₀ mass {mass} should match the variance {var}"
                )));
            }
            let density: Vec<f64> = density.iter().map(|d| (d / mass).max(0.0)).collect();
            Ok(SecondCoordRepr::DerivativeOfMeasure {
                base: MeasureRepr::GridDensity { x: grid.to_vec(), density },
                mass,
            })
        }
    }
}

/// Exact second coordinate of the Lemma-rs correspondence, bypassing
/// materialization: g_σ(z) = h_ρ′(z) by dual evaluation of F_ρ.
pub fn sigma_evaluator_from_rho(rho: &MeasureRepr) -> SecondCoordRepr {
    let rho = rho.clone();
    SecondCoordRepr::evaluator(move |z: DualComplex| {
        // h′ = F′ − 1 and h″ = F″, packaged as a dual pair
        let (_, f1, f2) = f_jet2(&rho, z.re)?;
        Ok(Dual::new(f1 - 1.0, z.inf * f2))
    })
}

/// Sup over the grid of |h_{ρ₃}′(z) − g_{σ₃}(z)|: the left side from the
/// c-free convolution, the right side from ⊞_B with σ_j = sigma(ρ_j).
pub fn check_theorem_ans(
    mu1: &MeasureRepr,
    rho1: &MeasureRepr,
    mu2: &MeasureRepr,
    rho2: &MeasureRepr,
    grid: &[C],
    cfg: &SolverConfig,
) -> Result<f64> {
    let f_rho3 = cfree_boxplus((mu1, rho1), (mu2, rho2), cfg)?;
    let sigma1 = sigma_evaluator_from_rho(rho1);
    let sigma2 = sigma_evaluator_from_rho(rho2);
    let conv = boxplus_b(
        &TypeBLaw::new(mu1.clone(), sigma1),
        &TypeBLaw::new(mu2.clone(), sigma2),
        cfg,
    )?;
    let mut worst = 0.0f64;
    for &z in grid {
        let f = f_rho3(Dual::new(z, C::new(1.0, 0.0)))?;
        let h_prime = f.inf - 1.0;
        let g_sigma3 = conv.second_scalar(z)?;
        worst = worst.max((h_prime - g_sigma3).norm());
    }
    Ok(worst)
}

/// The Nica–Speicher partial semigroup of type B at time t ≥ 1:
/// (G_t, g_t)(z) with ω_t from Newton on t·u + (1−t)·F_μ(u) = z and
/// g_t(z) = t·g_σ(ω_t(z))·ω_t′(z).
pub fn ns_semigroup_b(
    p: &TypeBLaw,
    t: f64,
    z: DualComplex,
    cfg: &SolverConfig,
) -> Result<(DualComplex, DualComplex)> {
    if t < 1.0 {
        return Err(Error::InvalidInput(format!(
            "the ⊞_B semigroup is defined for t ≥ 1, got {t}"
        )));
    }
    if z.re.im < 0.0 {
        let (g, s) = ns_semigroup_b(p, t, z.conj(), cfg)?;
        return Ok((g.conj(), s.conj()));
    }
    // solve M(u) = t·u + (1−t)F_μ(u) = z; ω_t(z) = u
    let mut u = z.re;
    let mut converged = false;
    let mut res = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let (f, f1, _) = f_jet2(&p.first, u)?;
        let m = t * u + (1.0 - t) * f - z.re;
        res = m.norm();
        if res <= cfg.tol * z.re.norm().max(1.0) {
            converged = true;
            break;
        }
        let d = C::new(t, 0.0) + (1.0 - t) * f1;
        let mut step = m / d;
        let mut moved = false;
        for _ in 0..60 {
            let cand = u - step;
            if cand.im > 0.0 {
                if let Ok((fc, _, _)) = f_jet2(&p.first, cand) {
                    if (t * cand + (1.0 - t) * fc - z.re).norm() < res {
                        u = cand;
                        moved = true;
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: cfg.max_iter, residual: res });
    }
    let (_, f1, f2) = f_jet2(&p.first, u)?;
    let wp = 1.0 / (C::new(t, 0.0) + (1.0 - t) * f1);
    let wpp = -(1.0 - t) * f2 * wp * wp * wp;
    let om = Dual::new(u, z.inf * wp);
    let dom = Dual::new(wp, z.inf * wpp);
    let g_t = cauchy_transform(&p.first, om)?;
    let g_sec = g_second(&p.second, om)? * dom * t;
    Ok((g_t, g_sec))
}

/// Differentiable paths t ↦ μ(t) used by the infinitesimal checks.
#[derive(Debug, Clone)]
pub enum MeasurePath {
    Constant(MeasureRepr),
    /// (1−t)·from + t·to, both atomic.
    LinearAtomic { from: Vec<Atom>, to: Vec<Atom> },
    /// Centered semicircle of variance base + t.
    SemicircleVariance { base: f64 },
    /// Centered Cauchy law of scale base + t.
    CauchyScale { base: f64 },
}

impl MeasurePath {
    pub fn measure_at(&self, t: f64) -> Result<MeasureRepr> {
        match self {
            MeasurePath::Constant(m) => Ok(m.clone()),
            MeasurePath::LinearAtomic { from, to } => {
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidInput("mixture path needs t ∈ [0,1]".into()));
                }
                let mut atoms: Vec<Atom> = Vec::new();
                let mut push = |x: f64, w: f64| {
                    if w <= 0.0 {
                        return;
                    }
                    if let Some(a) = atoms.iter_mut().find(|a| (a.x - x).abs() < 1e-12) {
                        a.w += w;
                    } else {
                        atoms.push(Atom { x, w });
                    }
                };
                for a in from {
                    push(a.x, (1.0 - t) * a.w);
                }
                for a in to {
                    push(a.x, t * a.w);
                }
                atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
                Ok(MeasureRepr::Atomic { atoms })
            }
            MeasurePath::SemicircleVariance { base } => {
                Ok(MeasureRepr::Semicircle { mean: 0.0, variance: base + t })
            }
            MeasurePath::CauchyScale { base } => {
                Ok(MeasureRepr::CauchyLaw { location: 0.0, scale: base + t })
            }
        }
    }

    /// γ′(t) as a second-coordinate representation.
    pub fn derivative_at(&self, t: f64) -> Result<SecondCoordRepr> {
        match self {
            MeasurePath::Constant(_) => Ok(SecondCoordRepr::Zero),
            MeasurePath::LinearAtomic { from, to } => Ok(SecondCoordRepr::Difference {
                plus: MeasureRepr::Atomic { atoms: to.clone() },
                minus: MeasureRepr::Atomic { atoms: from.clone() },
            }),
            MeasurePath::SemicircleVariance { base } => {
                Ok(SecondCoordRepr::SemicircleBDerivative { variance: base + t })
            }
            MeasurePath::CauchyScale { base } => Ok(SecondCoordRepr::Scaled {
                factor: 1.0 / (base + t),
                inner: Box::new(SecondCoordRepr::CauchyBDerivative { scale: base + t }),
            }),
        }
    }
}

/// |g₃(z) − ∂_t G_{γ₁(t)⊞γ₂(t)}(z)| at t₀, the derivative taken by central
/// differences with step h.
pub fn infinitesimal_boxplus_check(
    path1: &MeasurePath,
    path2: &MeasurePath,
    t0: f64,
    z: C,
    h: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    let p1 = TypeBLaw::new(path1.measure_at(t0)?, path1.derivative_at(t0)?);
    let p2 = TypeBLaw::new(path2.measure_at(t0)?, path2.derivative_at(t0)?);
    let conv = boxplus_b(&p1, &p2, cfg)?;
    let g3 = conv.second_scalar(z)?;
    let g_at = |t: f64| -> Result<C> {
        let m1 = path1.measure_at(t)?;
        let m2 = path2.measure_at(t)?;
        Ok(additive_point(&m1, &m2, z, cfg, None)?.g3)
    };
    let fd = (g_at(t0 + h)? - g_at(t0 - h)?) / (2.0 * h);
    Ok((g3 - fd).norm())
}

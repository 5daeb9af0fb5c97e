//! Bundled invariant suites behind the command-line `check` subcommand.
//!
//! Each suite runs one family of identities over built-in test laws and
//! reports the worst residual against its tolerance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laws::{burgers_residual, poisson_family_derivative_defect, stable_second_fd_check, StableSpec};
use crate::measures::{Atom, CircleAtom, MeasureRepr, SecondCoordRepr};
use crate::nc::{catalan, check_functional_equation, count_b_pairings};
use crate::subordination::{
    additive_point, multiplicative_omega, probe_grid, MultDomain, SolverConfig,
};
use crate::typeb::{
    boxplus_b, check_theorem_ans, infinitesimal_boxplus_check, MeasurePath, TypeBLaw,
};

type C = Complex64;

/// Outcome of one named invariant suite.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn pass(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

pub const SUITES: &[&str] = &[
    "combinatorics",
    "functional-equation",
    "subord",
    "semicircle-family",
    "inf",
    "ans",
    "eq15",
    "stable",
    "burgers",
    "poisson",
];

/// Run one suite by name, or every suite for "all".
pub fn run_suite(name: &str, cfg: &SolverConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let all = name == "all";
    let mut matched = false;
    for &suite in SUITES {
        if all || suite == name {
            matched = true;
            out.push(match suite {
                "combinatorics" => combinatorics_suite()?,
                "functional-equation" => functional_equation_suite()?,
                "subord" => subordination_suite(cfg)?,
                "semicircle-family" => semicircle_family_suite(cfg)?,
                "inf" => infinitesimal_suite(cfg)?,
                "ans" => ans_suite(cfg)?,
                "eq15" => eq15_suite(cfg)?,
                "stable" => stable_suite()?,
                "burgers" => burgers_suite(cfg)?,
                "poisson" => poisson_suite()?,
                _ => unreachable!(),
            });
        }
    }
    if !matched {
        return Err(Error::InvalidInput(format!(
            "unknown suite '{name}'; available: all, {}",
            SUITES.join(", ")
        )));
    }
    Ok(out)
}

fn combinatorics_suite() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let (total, with_zero) = count_b_pairings(n)?;
        let want_total = (n as u64 + 1) * catalan(n);
        let want_zero = n as u64 * catalan(n);
        worst = worst.max((total as f64 - want_total as f64).abs());
        worst = worst.max((with_zero as f64 - want_zero as f64).abs());
    }
    Ok(CheckOutcome { name: "combinatorics", max_residual: worst, tolerance: 0.0 })
}

fn functional_equation_suite() -> Result<CheckOutcome> {
    use crate::dualnum::Dual;
    let mut worst = 0.0f64;
    // deterministic pseudo-random dual cumulants
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..20 {
        // modest scale keeps degree-10 coefficients O(1)
        let kappa: Vec<Dual<C>> = (0..10)
            .map(|_| {
                Dual::new(
                    C::new(0.1 * next(), 0.1 * next()),
                    C::new(0.1 * next(), 0.1 * next()),
                )
            })
            .collect();
        worst = worst.max(check_functional_equation(&kappa, 10)?);
    }
    Ok(CheckOutcome { name: "functional-equation", max_residual: worst, tolerance: 1e-12 })
}

fn builtin_measure_pairs() -> Vec<(MeasureRepr, MeasureRepr)> {
    vec![
        (MeasureRepr::two_point(-1.0, 1.0), MeasureRepr::two_point(-1.0, 1.0)),
        (
            MeasureRepr::two_point(0.0, 2.0),
            MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 },
        ),
        (
            MeasureRepr::FreePoisson { rate: 1.0, jump: 1.0 },
            MeasureRepr::two_point(-1.0, 1.0),
        ),
        (
            MeasureRepr::Semicircle { mean: 0.2, variance: 0.7 },
            MeasureRepr::Atomic {
                atoms: vec![
                    Atom { x: -1.5, w: 0.25 },
                    Atom { x: 0.0, w: 0.5 },
                    Atom { x: 1.5, w: 0.25 },
                ],
            },
        ),
    ]
}

fn subordination_suite(cfg: &SolverConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for (m1, m2) in builtin_measure_pairs() {
        for &z in &probe_grid() {
            let p = additive_point(&m1, &m2, z, cfg, None)?;
            worst = worst.max(p.residual_sub).max(p.residual_sum);
        }
    }
    Ok(CheckOutcome { name: "subord", max_residual: worst, tolerance: 1e-10 })
}

fn semicircle_family_suite(cfg: &SolverConfig) -> Result<CheckOutcome> {
    let semib = |t: f64| {
        TypeBLaw::new(
            MeasureRepr::Semicircle { mean: 0.0, variance: t },
            SecondCoordRepr::Scaled {
                factor: t,
                inner: Box::new(SecondCoordRepr::SemicircleBDerivative { variance: t }),
            },
        )
    };
    let (s, t) = (0.8, 1.4);
    let conv = boxplus_b(&semib(s), &semib(t), cfg)?;
    let target = SecondCoordRepr::Scaled {
        factor: s + t,
        inner: Box::new(SecondCoordRepr::SemicircleBDerivative { variance: s + t }),
    };
    let mut worst = 0.0f64;
    for &z in &probe_grid() {
        let got = conv.second_scalar(z)?;
        let want =
            crate::measures::g_second(&target, crate::dualnum::Dual::constant(z))?.re;
        worst = worst.max((got - want).norm());
    }
    Ok(CheckOutcome { name: "semicircle-family", max_residual: worst, tolerance: 1e-8 })
}

fn infinitesimal_suite(cfg: &SolverConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mix = MeasurePath::LinearAtomic {
        from: vec![Atom { x: -1.0, w: 0.5 }, Atom { x: 1.0, w: 0.5 }],
        to: vec![Atom { x: 0.0, w: 1.0 }],
    };
    let var = MeasurePath::SemicircleVariance { base: 1.0 };
    for t0 in [0.2, 0.5] {
        for z in [C::new(0.0, 2.0), C::new(0.7, 1.0)] {
            worst = worst.max(infinitesimal_boxplus_check(&mix, &mix, t0, z, 1e-4, cfg)?);
            worst = worst.max(infinitesimal_boxplus_check(&var, &var, t0, z, 1e-4, cfg)?);
        }
    }
    Ok(CheckOutcome { name: "inf", max_residual: worst, tolerance: 1e-6 })
}

fn ans_suite(cfg: &SolverConfig) -> Result<CheckOutcome> {
    let grid: Vec<C> = probe_grid().into_iter().take(40).collect();
    let semi = MeasureRepr::Semicircle { mean: 0.0, variance: 1.0 };
    let bern = MeasureRepr::two_point(-1.0, 1.0);
    let tri = MeasureRepr::Atomic {
        atoms: vec![
            Atom { x: -1.0, w: 0.3 },
            Atom { x: 0.0, w: 0.4 },
            Atom { x: 1.0, w: 0.3 },
        ],
    };
    let cases: Vec<(&MeasureRepr, &MeasureRepr, &MeasureRepr, &MeasureRepr)> = vec![
        (&bern, &bern, &bern, &bern),
        (&semi, &semi, &semi, &semi),
        (&semi, &bern, &bern, &semi),
        (&tri, &bern, &semi, &tri),
        (&bern, &tri, &tri, &bern),
    ];
    let mut worst = 0.0f64;
    for (mu1, rho1, mu2, rho2) in cases {
        worst = worst.max(check_theorem_ans(mu1, rho1, mu2, rho2, &grid, cfg)?);
    }
    Ok(CheckOutcome { name: "ans", max_residual: worst, tolerance: 1e-8 })
}

fn eq15_suite(cfg: &SolverConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let circle = MeasureRepr::UnitCircleAtomic {
        atoms: vec![CircleAtom { angle: 0.0, w: 0.5 }, CircleAtom { angle: 0.9, w: 0.5 }],
    };
    for &z in &[C::new(0.3, 0.0), C::new(-0.2, 0.4), C::new(0.1, -0.5)] {
        let p = multiplicative_omega(&circle, &circle, z, MultDomain::Disc, cfg.tol, cfg.max_iter)?;
        worst = worst.max(p.residual_eq).max(p.residual_sub);
    }
    let pos = MeasureRepr::Atomic {
        atoms: vec![Atom { x: 1.0, w: 0.5 }, Atom { x: 2.0, w: 0.5 }],
    };
    for &z in &[C::new(-1.0, 0.0), C::new(-0.5, 0.8), C::new(2.0, 1.5)] {
        let p =
            multiplicative_omega(&pos, &pos, z, MultDomain::SlitPlane, cfg.tol, cfg.max_iter)?;
        worst = worst.max(p.residual_eq).max(p.residual_sub);
    }
    Ok(CheckOutcome { name: "eq15", max_residual: worst, tolerance: 1e-10 })
}

fn stable_suite() -> Result<CheckOutcome> {
    let z = C::new(0.6, 1.3);
    let pi = std::f64::consts::PI;
    let cases = vec![
        StableSpec::new(3, 2.0, C::new(1.0, 0.0))?,
        StableSpec::new(3, 1.5, C::from_polar(1.0, -0.3))?,
        StableSpec::new(4, 0.7, C::from_polar(1.0, pi * 1.35))?,
        StableSpec::new(2, 1.0, C::new(-1.0, 0.0))?,
        StableSpec::new(5, 1.0, C::new(-1.0, 0.0))?,
    ];
    let mut worst = 0.0f64;
    for spec in &cases {
        worst = worst.max(stable_second_fd_check(spec, z, 1e-4)?);
    }
    Ok(CheckOutcome { name: "stable", max_residual: worst, tolerance: 1e-5 })
}

fn burgers_suite(cfg: &SolverConfig) -> Result<CheckOutcome> {
    // second-order decay: halving both steps divides residuals by ≈ 4
    let p = TypeBLaw::new(MeasureRepr::two_point(-1.0, 1.0), SecondCoordRepr::Zero);
    let grid: Vec<C> = (0..5).map(|i| C::new(-2.0 + i as f64, 1.0)).collect();
    let (r1a, r2a) = burgers_residual(&p, 0.5, &grid, 2e-3, 2e-3, cfg)?;
    let (r1b, r2b) = burgers_residual(&p, 0.5, &grid, 1e-3, 1e-3, cfg)?;
    let ratio1 = r1a / r1b;
    let ratio2 = r2a / r2b;
    let defect = (ratio1 - 4.0).abs().max((ratio2 - 4.0).abs());
    Ok(CheckOutcome { name: "burgers", max_residual: defect, tolerance: 0.5 })
}

fn poisson_suite() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for (a1, a2, l1, l2) in [(1.0, 1.0, 1.0, 0.0), (1.0, 0.5, 1.0, 0.7), (2.0, -0.3, 1.5, 0.2)] {
        worst = worst.max(poisson_family_derivative_defect(a1, a2, l1, l2, 6, 1e-5)?);
    }
    Ok(CheckOutcome { name: "poisson", max_residual: worst, tolerance: 1e-4 })
}

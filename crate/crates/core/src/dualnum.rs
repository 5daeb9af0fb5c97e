//! Arithmetic over the commutative algebra 𝒞 = ℂ + ħℂ with ħ² = 0.
//!
//! An element is a pair Z = (z, w) = z + wħ, equivalently the 2×2
//! upper-triangular Toeplitz matrix [[z, w], [0, z]].  Multiplication
//! implements the product rule, so a dual number carries a value and a
//! first derivative simultaneously: lifting an analytic function f gives
//! f(z + wħ) = f(z) + w·f′(z)·ħ.  This is the derivative carrier used by
//! every transform and solver in the crate.
//!
//! The algebra is strictly order two; there are no higher jets here.

use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Scalar rings the dual construction (and the partition transforms) work over.
///
/// Implemented by `f64`, `Complex64`, `BigRational` and by `Dual<T>` itself,
/// so sequences of dual numbers can feed the same generic code paths.
pub trait RingScalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
}

impl<T> RingScalar for T where
    T: Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = T> + Sub<Output = T>
{
}

/// Element z + wħ of 𝒞 over the scalar ring `T`.
#[derive(Clone, Copy, PartialEq)]
pub struct Dual<T> {
    /// The z coordinate (value part).
    pub re: T,
    /// The w coordinate (infinitesimal part).
    pub inf: T,
}

/// The workhorse instance: 𝒞 = ℂ + ħℂ.
pub type DualComplex = Dual<Complex64>;

impl<T: fmt::Debug> fmt::Debug for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}ħ)", self.re, self.inf)
    }
}

impl<T: fmt::Display> fmt::Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ħ", self.re, self.inf)
    }
}

impl<T: RingScalar> Dual<T> {
    pub fn new(re: T, inf: T) -> Self {
        Dual { re, inf }
    }

    /// Embed a scalar as z + 0ħ.
    pub fn constant(re: T) -> Self {
        Dual { re, inf: T::zero() }
    }

    /// The generator ħ = 0 + 1ħ.
    pub fn hbar() -> Self {
        Dual { re: T::zero(), inf: T::one() }
    }

    /// Zⁿ = (zⁿ, n·z^{n−1}·w) for n ≥ 0, by binary exponentiation.
    pub fn pow_u(&self, n: u32) -> Self {
        let mut acc = Dual::constant(T::one());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

impl<T: RingScalar> Add for Dual<T> {
    type Output = Dual<T>;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.inf + rhs.inf)
    }
}

impl<T: RingScalar> Sub for Dual<T> {
    type Output = Dual<T>;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.inf - rhs.inf)
    }
}

impl<T: RingScalar> Neg for Dual<T> {
    type Output = Dual<T>;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.inf)
    }
}

impl<T: RingScalar> Mul for Dual<T> {
    type Output = Dual<T>;
    // (z, w)(z', w') = (zz', zw' + wz'); ħ² = 0.
    fn mul(self, rhs: Self) -> Self {
        Dual::new(
            self.re.clone() * rhs.re.clone(),
            self.re * rhs.inf + self.inf * rhs.re,
        )
    }
}

impl<T: RingScalar> AddAssign for Dual<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = self.clone() + rhs;
    }
}

impl<T: RingScalar> SubAssign for Dual<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = self.clone() - rhs;
    }
}

impl<T: RingScalar> MulAssign for Dual<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = self.clone() * rhs;
    }
}

impl<T: RingScalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.inf.is_zero()
    }
}

impl<T: RingScalar> One for Dual<T> {
    fn one() -> Self {
        Dual::constant(T::one())
    }
}

/// Product in 𝒞 (free-function form of `*`).
pub fn dual_mul<T: RingScalar>(a: Dual<T>, b: Dual<T>) -> Dual<T> {
    a * b
}

impl DualComplex {
    pub fn from_f64(x: f64) -> Self {
        Dual::constant(Complex64::new(x, 0.0))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Dual::constant(z)
    }

    /// Z^{−1} = (z^{−1}, −w·z^{−2}); requires z ≠ 0.
    pub fn inv(&self) -> Result<DualComplex> {
        if self.re == Complex64::zero() {
            return Err(Error::NonInvertible);
        }
        let zi = 1.0 / self.re;
        Ok(Dual::new(zi, -self.inf * zi * zi))
    }

    /// Lift of the principal square root (slit plane ℂ∖(−∞,0]).
    pub fn sqrt(&self) -> DualComplex {
        let s = self.re.sqrt();
        Dual::new(s, self.inf * 0.5 / s)
    }

    /// Lift of the principal logarithm.
    pub fn ln(&self) -> DualComplex {
        Dual::new(self.re.ln(), self.inf / self.re)
    }

    /// Lift of the exponential.
    pub fn exp(&self) -> DualComplex {
        let e = self.re.exp();
        Dual::new(e, self.inf * e)
    }

    /// Lift of z ↦ z^α on the principal branch.
    pub fn powf(&self, alpha: f64) -> DualComplex {
        let p = self.re.powf(alpha);
        Dual::new(p, self.inf * alpha * self.re.powf(alpha - 1.0))
    }

    pub fn conj(&self) -> DualComplex {
        Dual::new(self.re.conj(), self.inf.conj())
    }

    /// Max of the component magnitudes, used for residual reporting.
    pub fn norm_max(&self) -> f64 {
        self.re.norm().max(self.inf.norm())
    }
}

impl Div for DualComplex {
    type Output = DualComplex;
    fn div(self, rhs: Self) -> Self {
        // (a, b)/(c, d) = (a/c, (bc − ad)/c²); panics on c = 0 like scalar division.
        let q = self.re / rhs.re;
        Dual::new(q, (self.inf - q * rhs.inf) / rhs.re)
    }
}

impl Mul<f64> for DualComplex {
    type Output = DualComplex;
    fn mul(self, rhs: f64) -> Self {
        Dual::new(self.re * rhs, self.inf * rhs)
    }
}

impl Mul<Complex64> for DualComplex {
    type Output = DualComplex;
    fn mul(self, rhs: Complex64) -> Self {
        Dual::new(self.re * rhs, self.inf * rhs)
    }
}

impl Add<Complex64> for DualComplex {
    type Output = DualComplex;
    fn add(self, rhs: Complex64) -> Self {
        Dual::new(self.re + rhs, self.inf)
    }
}

impl Sub<Complex64> for DualComplex {
    type Output = DualComplex;
    fn sub(self, rhs: Complex64) -> Self {
        Dual::new(self.re - rhs, self.inf)
    }
}

/// Zⁿ for signed n; Z^{−1} = (z^{−1}, −wz^{−2}) requires z ≠ 0.
pub fn dual_pow(a: DualComplex, n: i32) -> Result<DualComplex> {
    if n >= 0 {
        Ok(a.pow_u(n as u32))
    } else {
        Ok(a.inv()?.pow_u((-n) as u32))
    }
}

/// Lift a scalar analytic function through 𝒞: f(Z) = (f(z), w·f′(z)).
///
/// `f` and `fp` evaluate f and f′ at the real coordinate; a non-finite
/// value signals that the function is undefined there.
pub fn lift_analytic(
    f: impl Fn(Complex64) -> Complex64,
    fp: impl Fn(Complex64) -> Complex64,
    a: DualComplex,
) -> Result<DualComplex> {
    let v = f(a.re);
    let d = fp(a.re);
    if !v.is_finite() || !d.is_finite() {
        return Err(Error::DomainError(format!(
            "lifted function undefined at {}",
            a.re
        )));
    }
    Ok(Dual::new(v, a.inf * d))
}

/// One step of the composition inverse of f = (f₁, w·f₁′ + g).
///
/// Given z = f₁^{−1}(ζ), g(z) and f₁′(z), the w-component of f^{−1} at the
/// target Ξ = (ζ, v) is (v − g(z))/f₁′(z).
pub fn compose_inverse_step(
    f1_inv_value: Complex64,
    g_value: Complex64,
    f1_prime_value: Complex64,
    target: DualComplex,
) -> Result<DualComplex> {
    if f1_prime_value == Complex64::zero() {
        return Err(Error::CriticalPoint);
    }
    Ok(Dual::new(
        f1_inv_value,
        (target.inf - g_value) / f1_prime_value,
    ))
}

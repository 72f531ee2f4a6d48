//! Real quaternions: Hamilton product, conjugation, inverse, polar form and
//! the exponential/logarithm of pure quaternions.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A quaternion `q0 + i q1 + j q2 + k q3`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Quaternion<S> {
    pub q0: S,
    pub q1: S,
    pub q2: S,
    pub q3: S,
}

/// Relative threshold below which the vector part is treated as absent and
/// the polar axis is reported undefined.
pub const VEC_EPS: f64 = 1e-14;

/// Absolute tolerance used for the unit/pure preconditions of [`exp_pure`].
pub const UNIT_PURE_TOL: f64 = 1e-10;

impl<S: Scalar> Quaternion<S> {
    #[inline]
    pub const fn new(q0: S, q1: S, q2: S, q3: S) -> Self {
        Self { q0, q1, q2, q3 }
    }

    #[inline]
    pub fn from_real(r: S) -> Self {
        Self::new(r, S::zero(), S::zero(), S::zero())
    }

    /// Pure quaternion `i v1 + j v2 + k v3`.
    #[inline]
    pub fn pure(v1: S, v2: S, v3: S) -> Self {
        Self::new(S::zero(), v1, v2, v3)
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(S::one())
    }

    #[inline]
    pub fn i() -> Self {
        Self::pure(S::one(), S::zero(), S::zero())
    }

    #[inline]
    pub fn j() -> Self {
        Self::pure(S::zero(), S::one(), S::zero())
    }

    #[inline]
    pub fn k() -> Self {
        Self::pure(S::zero(), S::zero(), S::one())
    }

    /// Scalar part `Sc[q]`.
    #[inline]
    pub fn scalar(self) -> S {
        self.q0
    }

    /// Non-scalar part `NSc[q]`.
    #[inline]
    pub fn vector(self) -> Self {
        Self::pure(self.q1, self.q2, self.q3)
    }

    /// Splits `q` into `(Sc[q], NSc[q])`; `scalar + vector == q` exactly.
    #[inline]
    pub fn split(self) -> (S, Self) {
        (self.scalar(), self.vector())
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    #[inline]
    pub fn norm_sqr(self) -> S {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    #[inline]
    pub fn norm(self) -> S {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn vector_norm(self) -> S {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }

    /// `conj(q) / |q|^2`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == S::zero() {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj() / n2)
    }

    #[inline]
    pub fn scale(self, s: S) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    /// Four-dimensional Euclidean inner product of the components.
    #[inline]
    pub fn dot4(self, other: Self) -> S {
        self.q0 * other.q0 + self.q1 * other.q1 + self.q2 * other.q2 + self.q3 * other.q3
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Self) -> S {
        let d = self - other;
        d.q0.abs().max(d.q1.abs()).max(d.q2.abs()).max(d.q3.abs())
    }

    /// Polar decomposition `q = rho (cos theta + u sin theta)`.
    pub fn polar(self) -> PolarQuat<S> {
        let rho = self.norm();
        let vn = self.vector_norm();
        let theta = vn.atan2(self.q0);
        let eps = S::lit(VEC_EPS).max(S::epsilon() * S::lit(4.0));
        let axis = if rho == S::zero() || vn <= eps * rho {
            None
        } else {
            Some(self.vector() / vn)
        };
        PolarQuat { rho, axis, theta }
    }

    /// Quaternion logarithm `ln|q| + u atan2(|vec|, q0)`.
    ///
    /// For a vanishing vector part the result is real. A negative real `q`
    /// has no unique logarithm; the real branch is returned there.
    pub fn ln(self) -> Self {
        let rho = self.norm();
        let vn = self.vector_norm();
        let real = rho.ln();
        if vn == S::zero() {
            return Self::from_real(real);
        }
        let f = vn.atan2(self.q0) / vn;
        Self::new(real, self.q1 * f, self.q2 * f, self.q3 * f)
    }

    /// Exponential of an arbitrary pure quaternion `v`: `cos|v| + v/|v| sin|v|`.
    pub fn exp_of_pure(v: Self) -> Self {
        let a = v.vector_norm();
        if a == S::zero() {
            return Self::one();
        }
        let (s, c) = a.sin_cos();
        let f = s / a;
        Self::new(c, v.q1 * f, v.q2 * f, v.q3 * f)
    }
}

/// Euler formula `cos theta + u sin theta` for a unit pure `u`.
pub fn exp_pure<S: Scalar>(u: Quaternion<S>, theta: S) -> Result<Quaternion<S>> {
    let tol = S::lit(UNIT_PURE_TOL);
    let modulus = u.norm();
    if u.q0.abs() > tol || (modulus - S::one()).abs() > tol {
        return Err(Error::NotUnitPure {
            scalar: u.q0.to_f64_lossy(),
            modulus: modulus.to_f64_lossy(),
        });
    }
    let (s, c) = theta.sin_cos();
    Ok(Quaternion::new(c, u.q1 * s, u.q2 * s, u.q3 * s))
}

/// Polar form of a single quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarQuat<S> {
    pub rho: S,
    /// Unit pure axis; `None` when the vector part vanishes.
    pub axis: Option<Quaternion<S>>,
    /// Phase angle in `[0, pi]`.
    pub theta: S,
}

impl<S: Scalar> PolarQuat<S> {
    /// Unit phase `e^{u theta}`; a missing axis contributes `cos theta` only.
    pub fn phase(&self) -> Quaternion<S> {
        let (s, c) = self.theta.sin_cos();
        match self.axis {
            Some(u) => Quaternion::new(c, u.q1 * s, u.q2 * s, u.q3 * s),
            None => Quaternion::from_real(c),
        }
    }

    pub fn reconstruct(&self) -> Quaternion<S> {
        self.phase().scale(self.rho)
    }
}

impl<S: Scalar> Add for Quaternion<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(
            self.q0 + o.q0,
            self.q1 + o.q1,
            self.q2 + o.q2,
            self.q3 + o.q3,
        )
    }
}

impl<S: Scalar> AddAssign for Quaternion<S> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> Sub for Quaternion<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.q0 - o.q0,
            self.q1 - o.q1,
            self.q2 - o.q2,
            self.q3 - o.q3,
        )
    }
}

impl<S: Scalar> SubAssign for Quaternion<S> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

/// Hamilton product.
impl<S: Scalar> Mul for Quaternion<S> {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0,
        )
    }
}

impl<S: Scalar> Mul<S> for Quaternion<S> {
    type Output = Self;
    #[inline]
    fn mul(self, s: S) -> Self {
        self.scale(s)
    }
}

impl<S: Scalar> Div<S> for Quaternion<S> {
    type Output = Self;
    #[inline]
    fn div(self, s: S) -> Self {
        Self::new(self.q0 / s, self.q1 / s, self.q2 / s, self.q3 / s)
    }
}

impl<S: Scalar> Zero for Quaternion<S> {
    #[inline]
    fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero() && self.q2.is_zero() && self.q3.is_zero()
    }
}

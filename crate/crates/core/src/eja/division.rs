//! The four normed division algebras ℝ, ℂ, ℍ, 𝕆 as matrix entry types.
//!
//! Quaternions use the Hamilton table `i² = j² = k² = ijk = −1`. Octonions
//! are pairs of quaternions under the Cayley–Dickson product
//! `(a, b)(c, d) = (ac − d̄b, da + bc̄)`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A real normed division algebra with a fixed real basis `1, u₁, …, u_{D−1}`.
pub trait DivisionAlgebra:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Real dimension.
    const DIM: usize;

    fn zero() -> Self;
    fn from_real(r: f64) -> Self;
    /// Builds an element from exactly `DIM` real components.
    fn from_components(c: &[f64]) -> Self;
    fn component(&self, k: usize) -> f64;
    fn conj(&self) -> Self;
    fn scale(&self, s: f64) -> Self;

    fn re(&self) -> f64 {
        self.component(0)
    }

    fn norm_sqr(&self) -> f64 {
        (0..Self::DIM).map(|k| self.component(k).powi(2)).sum()
    }

    fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// The basis unit `u_k` (`u_0 = 1`).
    fn unit(k: usize) -> Self {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Self::from_components(&c[..Self::DIM])
    }
}

impl DivisionAlgebra for f64 {
    const DIM: usize = 1;

    fn zero() -> Self {
        0.0
    }
    fn from_real(r: f64) -> Self {
        r
    }
    fn from_components(c: &[f64]) -> Self {
        c[0]
    }
    fn component(&self, k: usize) -> f64 {
        debug_assert_eq!(k, 0);
        *self
    }
    fn conj(&self) -> Self {
        *self
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
}

impl DivisionAlgebra for Complex64 {
    const DIM: usize = 2;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }
    fn from_components(c: &[f64]) -> Self {
        Complex64::new(c[0], c[1])
    }
    fn component(&self, k: usize) -> f64 {
        match k {
            0 => self.re,
            1 => self.im,
            _ => panic!("complex component {k}"),
        }
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl DivisionAlgebra for Quaternion {
    const DIM: usize = 4;

    fn zero() -> Self {
        Quaternion::default()
    }
    fn from_real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }
    fn from_components(c: &[f64]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
    fn component(&self, k: usize) -> f64 {
        match k {
            0 => self.w,
            1 => self.x,
            2 => self.y,
            3 => self.z,
            _ => panic!("quaternion component {k}"),
        }
    }
    fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }
    fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

/// Octonion `a + b·ℓ` with quaternion halves; components are `a.w, a.x, a.y, a.z, b.w, …, b.z`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Octonion {
    pub a: Quaternion,
    pub b: Quaternion,
}

impl Octonion {
    pub const fn new(a: Quaternion, b: Quaternion) -> Self {
        Octonion { a, b }
    }
}

impl Add for Octonion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Octonion::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Octonion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Octonion::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Octonion {
    type Output = Self;
    fn neg(self) -> Self {
        Octonion::new(-self.a, -self.b)
    }
}

impl Mul for Octonion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b, c, d) = (self.a, self.b, o.a, o.b);
        Octonion::new(a * c - d.conj() * b, d * a + b * c.conj())
    }
}

impl DivisionAlgebra for Octonion {
    const DIM: usize = 8;

    fn zero() -> Self {
        Octonion::default()
    }
    fn from_real(r: f64) -> Self {
        Octonion::new(Quaternion::from_real(r), Quaternion::zero())
    }
    fn from_components(c: &[f64]) -> Self {
        Octonion::new(
            Quaternion::from_components(&c[..4]),
            Quaternion::from_components(&c[4..8]),
        )
    }
    fn component(&self, k: usize) -> f64 {
        if k < 4 {
            self.a.component(k)
        } else {
            self.b.component(k - 4)
        }
    }
    fn conj(&self) -> Self {
        Octonion::new(self.a.conj(), -self.b)
    }
    fn scale(&self, s: f64) -> Self {
        Octonion::new(self.a.scale(s), self.b.scale(s))
    }
}

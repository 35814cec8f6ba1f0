//! Number types that expression trees can be evaluated over.
//!
//! `f64` is the fast path. [`Jet`] carries a value with its first two
//! derivatives along one variable. [`HyperDual`] carries two independent
//! infinitesimals and their product, which yields exact mixed partials.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;
    /// Apply a scalar function given its value and first two derivatives at `self.value()`.
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self;

    fn recip(self) -> Self {
        let a = self.value();
        self.lift(1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a))
    }
    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift(c, -s, -c)
    }
    fn exp(self) -> Self {
        let e = self.value().exp();
        self.lift(e, e, e)
    }
    fn ln(self) -> Self {
        let a = self.value();
        self.lift(a.ln(), 1.0 / a, -1.0 / (a * a))
    }
    fn sqrt(self) -> Self {
        let a = self.value();
        let r = a.sqrt();
        self.lift(r, 0.5 / r, -0.25 / (r * a))
    }
    fn powi(self, n: i32) -> Self {
        let a = self.value();
        let nf = n as f64;
        self.lift(a.powi(n), nf * a.powi(n - 1), nf * (nf - 1.0) * a.powi(n - 2))
    }
    fn powf(self, p: f64) -> Self {
        let a = self.value();
        self.lift(a.powf(p), p * a.powf(p - 1.0), p * (p - 1.0) * a.powf(p - 2.0))
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn lift(self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }
    #[inline]
    fn recip(self) -> Self {
        1.0 / self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
}

/// Second-order forward jet: value, first and second derivative.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet { v, d1, d2 }
    }
    /// The independent variable at `x`.
    pub const fn var(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }
    pub fn as_array(self) -> [f64; 3] {
        [self.v, self.d1, self.d2]
    }
}

impl Scalar for Jet {
    fn cst(v: f64) -> Self {
        Jet { v, d1: 0.0, d2: 0.0 }
    }
    fn value(self) -> f64 {
        self.v
    }
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet { v: f0, d1: f1 * self.d1, d2: f1 * self.d2 + f2 * self.d1 * self.d1 }
    }
}

/// `a + b e1 + c e2 + d e1 e2` with `e1^2 = e2^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct HyperDual {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl HyperDual {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        HyperDual { a, b, c, d }
    }
}

impl Scalar for HyperDual {
    fn cst(a: f64) -> Self {
        HyperDual { a, b: 0.0, c: 0.0, d: 0.0 }
    }
    fn value(self) -> f64 {
        self.a
    }
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        HyperDual { a: f0, b: f1 * self.b, c: f1 * self.c, d: f1 * self.d + f2 * self.b * self.c }
    }
}

macro_rules! impl_field_ops {
    ($t:ident, $($f:ident),+) => {
        impl Add for $t {
            type Output = $t;
            #[inline]
            fn add(self, o: $t) -> $t { $t { $($f: self.$f + o.$f),+ } }
        }
        impl Sub for $t {
            type Output = $t;
            #[inline]
            fn sub(self, o: $t) -> $t { $t { $($f: self.$f - o.$f),+ } }
        }
        impl Neg for $t {
            type Output = $t;
            #[inline]
            fn neg(self) -> $t { $t { $($f: -self.$f),+ } }
        }
        impl Mul<f64> for $t {
            type Output = $t;
            #[inline]
            fn mul(self, k: f64) -> $t { $t { $($f: self.$f * k),+ } }
        }
        impl Div<f64> for $t {
            type Output = $t;
            #[inline]
            fn div(self, k: f64) -> $t { $t { $($f: self.$f / k),+ } }
        }
        impl Div for $t {
            type Output = $t;
            #[inline]
            fn div(self, o: $t) -> $t { self * o.recip() }
        }
        impl Add<$t> for f64 {
            type Output = $t;
            #[inline]
            fn add(self, o: $t) -> $t { o + self }
        }
        impl Sub<$t> for f64 {
            type Output = $t;
            #[inline]
            fn sub(self, o: $t) -> $t { -o + self }
        }
        impl Mul<$t> for f64 {
            type Output = $t;
            #[inline]
            fn mul(self, o: $t) -> $t { o * self }
        }
    };
}

impl_field_ops!(Jet, v, d1, d2);
impl_field_ops!(HyperDual, a, b, c, d);

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        Jet { v: self.v + k, ..self }
    }
}
impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, k: f64) -> Jet {
        Jet { v: self.v - k, ..self }
    }
}
impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Add<f64> for HyperDual {
    type Output = HyperDual;
    fn add(self, k: f64) -> HyperDual {
        HyperDual { a: self.a + k, ..self }
    }
}
impl Sub<f64> for HyperDual {
    type Output = HyperDual;
    fn sub(self, k: f64) -> HyperDual {
        HyperDual { a: self.a - k, ..self }
    }
}
impl Mul for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn mul(self, o: HyperDual) -> HyperDual {
        HyperDual {
            a: self.a * o.a,
            b: self.a * o.b + self.b * o.a,
            c: self.a * o.c + self.c * o.a,
            d: self.a * o.d + self.b * o.c + self.c * o.b + self.d * o.a,
        }
    }
}

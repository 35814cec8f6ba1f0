//! Closed-form expression trees in one variable.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::spline::CubicSpline;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Const(f64),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Powi(Box<Expr>, i32),
    Powf(Box<Expr>, f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Sqrt(Box<Expr>),
    /// `outer(inner(x))`
    Compose(Box<Expr>, Box<Expr>),
    Spline(Box<CubicSpline>),
}

impl Expr {
    pub fn x() -> Expr {
        Expr::X
    }
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }
    pub fn spline(s: CubicSpline) -> Expr {
        Expr::Spline(Box::new(s))
    }
    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }
    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }
    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }
    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }
    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }
    pub fn powi(self, n: i32) -> Expr {
        Expr::Powi(Box::new(self), n)
    }
    pub fn powf(self, p: f64) -> Expr {
        Expr::Powf(Box::new(self), p)
    }
    pub fn compose(self, inner: Expr) -> Expr {
        Expr::Compose(Box::new(self), Box::new(inner))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn eval<T: Scalar>(&self, x: T) -> T {
        match self {
            Expr::Const(v) => T::cst(*v),
            Expr::X => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Powi(a, n) => a.eval(x).powi(*n),
            Expr::Powf(a, p) => a.eval(x).powf(*p),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Ln(a) => a.eval(x).ln(),
            Expr::Sqrt(a) => a.eval(x).sqrt(),
            Expr::Compose(outer, inner) => outer.eval(inner.eval(x)),
            Expr::Spline(s) => s.eval(x),
        }
    }
}

// Constant folding keeps trees built by repeated gauge transforms small.
fn fold2(a: Expr, b: Expr, f: fn(f64, f64) -> f64, mk: fn(Box<Expr>, Box<Expr>) -> Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(f(x, y)),
        _ => mk(Box::new(a), Box::new(b)),
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(z), _) if z == 0.0 => o,
            (_, Some(z)) if z == 0.0 => self,
            _ => fold2(self, o, |a, b| a + b, Expr::Add),
        }
    }
}
impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        match o.as_const() {
            Some(z) if z == 0.0 => self,
            _ => fold2(self, o, |a, b| a - b, Expr::Sub),
        }
    }
}
impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(z), _) | (_, Some(z)) if z == 0.0 => Expr::Const(0.0),
            (Some(u), _) if u == 1.0 => o,
            (_, Some(u)) if u == 1.0 => self,
            _ => fold2(self, o, |a, b| a * b, Expr::Mul),
        }
    }
}
impl Div for Expr {
    type Output = Expr;
    fn div(self, o: Expr) -> Expr {
        match o.as_const() {
            Some(u) if u == 1.0 => self,
            _ => fold2(self, o, |a, b| a / b, Expr::Div),
        }
    }
}
impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(-v),
            e => Expr::Neg(Box::new(e)),
        }
    }
}

macro_rules! scalar_mix {
    ($tr:ident, $m:ident) => {
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $m(self, o: f64) -> Expr {
                self.$m(Expr::Const(o))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::Const(self).$m(o)
            }
        }
    };
}
scalar_mix!(Add, add);
scalar_mix!(Sub, sub);
scalar_mix!(Mul, mul);
scalar_mix!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Jet;

    #[test]
    fn builds_and_evaluates() {
        let e = Expr::x().powi(2) * 3.0 + Expr::x().sin();
        let j = e.eval(Jet::var(0.5));
        assert!((j.v - (0.75 + 0.5f64.sin())).abs() < 1e-15);
        assert!((j.d1 - (3.0 + 0.5f64.cos())).abs() < 1e-15);
        assert!((j.d2 - (6.0 - 0.5f64.sin())).abs() < 1e-15);
    }

    #[test]
    fn constants_fold() {
        let e = Expr::c(2.0) * Expr::c(3.0) + 0.0;
        assert_eq!(e, Expr::Const(6.0));
        assert_eq!(Expr::x() * 1.0, Expr::X);
    }

    #[test]
    fn compose_chain_rule() {
        // sin(x^2): d/dx = 2x cos(x^2)
        let e = Expr::x().sin().compose(Expr::x().powi(2));
        let j = e.eval(Jet::var(0.8));
        assert!((j.d1 - 1.6 * 0.64f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn serde_roundtrip() {
        let e = (Expr::x() * std::f64::consts::PI).cos() * 0.1 + 0.7;
        let s = serde_json::to_string(&e).unwrap();
        let back: Expr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}

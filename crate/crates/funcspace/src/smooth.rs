use std::fmt;
use std::sync::Arc;

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::FuncError;
use crate::expr::Expr;
use crate::scalar::{Jet, Scalar};
use crate::spline::CubicSpline;

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Body {
    Expr(Expr),
    Closure(Closure),
}

/// A real function on a closed interval, optionally periodic.
///
/// Expression-backed functions differentiate exactly; closure-backed ones fall
/// back to Richardson-extrapolated central differences.
#[derive(Clone)]
pub struct SmoothFn1D {
    domain: (f64, f64),
    period: Option<f64>,
    body: Body,
}

impl fmt::Debug for SmoothFn1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("SmoothFn1D");
        d.field("domain", &self.domain).field("period", &self.period);
        match &self.body {
            Body::Expr(e) => d.field("expr", e),
            Body::Closure(_) => d.field("expr", &"<closure>"),
        };
        d.finish()
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    domain: (f64, f64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<f64>,
    expr: Expr,
}

impl Serialize for SmoothFn1D {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.body {
            Body::Expr(e) => Repr { domain: self.domain, period: self.period, expr: e.clone() }.serialize(s),
            Body::Closure(_) => Err(S::Error::custom("closure-backed functions cannot be serialized")),
        }
    }
}

impl<'de> Deserialize<'de> for SmoothFn1D {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(SmoothFn1D { domain: r.domain, period: r.period, body: Body::Expr(r.expr) })
    }
}

impl SmoothFn1D {
    pub fn from_expr(expr: Expr, lo: f64, hi: f64) -> Self {
        SmoothFn1D { domain: (lo, hi), period: None, body: Body::Expr(expr) }
    }

    /// Periodic on `[0, period]`.
    pub fn periodic(expr: Expr, period: f64) -> Self {
        SmoothFn1D { domain: (0.0, period), period: Some(period), body: Body::Expr(expr) }
    }

    pub fn constant(v: f64, lo: f64, hi: f64) -> Self {
        Self::from_expr(Expr::c(v), lo, hi)
    }

    pub fn from_fn<F>(f: F, lo: f64, hi: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SmoothFn1D { domain: (lo, hi), period: None, body: Body::Closure(Arc::new(f)) }
    }

    pub fn from_spline(s: CubicSpline) -> Self {
        let (lo, hi) = s.domain();
        let period = s.is_periodic().then_some(hi - lo);
        SmoothFn1D { domain: (lo, hi), period, body: Body::Expr(Expr::spline(s)) }
    }

    pub fn with_period(mut self, period: Option<f64>) -> Self {
        self.period = period;
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }
    pub fn period(&self) -> Option<f64> {
        self.period
    }
    pub fn expr(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expr(e) => Some(e),
            Body::Closure(_) => None,
        }
    }
    pub fn is_analytic(&self) -> bool {
        matches!(self.body, Body::Expr(_))
    }
    pub fn as_const(&self) -> Option<f64> {
        self.expr().and_then(Expr::as_const)
    }

    fn check(&self, x: f64) -> Result<(), FuncError> {
        let (lo, hi) = self.domain;
        let slack = 1e-12 * (hi - lo).abs().max(1.0);
        if self.period.is_some() || (x >= lo - slack && x <= hi + slack) {
            Ok(())
        } else {
            Err(FuncError::Domain { x, lo, hi })
        }
    }

    /// Unchecked value.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        match &self.body {
            Body::Expr(e) => e.eval(x),
            Body::Closure(f) => f(x),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, FuncError> {
        self.check(x)?;
        Ok(self.value(x))
    }

    /// Value with first and second derivative (unchecked).
    pub fn jet(&self, x: f64) -> Jet {
        self.eval_generic(Jet::var(x))
    }

    pub fn eval_generic<T: Scalar>(&self, x: T) -> T {
        match &self.body {
            Body::Expr(e) => e.eval(x),
            Body::Closure(f) => {
                let [f0, f1, f2] = fd_derivs(&**f, x.value(), self.domain, self.period.is_some());
                x.lift(f0, f1, f2)
            }
        }
    }

    /// `(f, f', ..., f^(k))` for `k <= 2`.
    pub fn eval_with_derivs(&self, x: f64, k: usize) -> Result<Vec<f64>, FuncError> {
        if k > 2 {
            return Err(FuncError::Order(k));
        }
        self.check(x)?;
        Ok(self.jet(x).as_array()[..=k].to_vec())
    }

    /// Value and slope mismatch across the period seam, if periodic.
    pub fn seam_mismatch(&self) -> Option<f64> {
        let p = self.period?;
        let (lo, _) = self.domain;
        let a = self.jet(lo);
        let b = self.jet(lo + p);
        Some((a.v - b.v).abs().max((a.d1 - b.d1).abs()))
    }

    fn combine(&self, o: &SmoothFn1D, op: fn(Expr, Expr) -> Expr, fop: fn(f64, f64) -> f64) -> SmoothFn1D {
        let domain = (self.domain.0.max(o.domain.0), self.domain.1.min(o.domain.1));
        let period = self.period.or(o.period);
        let body = match (&self.body, &o.body) {
            (Body::Expr(a), Body::Expr(b)) => Body::Expr(op(a.clone(), b.clone())),
            _ => {
                let (a, b) = (self.clone(), o.clone());
                Body::Closure(Arc::new(move |x| fop(a.value(x), b.value(x))))
            }
        };
        SmoothFn1D { domain, period, body }
    }

    pub fn add(&self, o: &SmoothFn1D) -> SmoothFn1D {
        self.combine(o, |a, b| a + b, |a, b| a + b)
    }
    pub fn sub(&self, o: &SmoothFn1D) -> SmoothFn1D {
        self.combine(o, |a, b| a - b, |a, b| a - b)
    }
    pub fn mul(&self, o: &SmoothFn1D) -> SmoothFn1D {
        self.combine(o, |a, b| a * b, |a, b| a * b)
    }
    pub fn div(&self, o: &SmoothFn1D) -> SmoothFn1D {
        self.combine(o, |a, b| a / b, |a, b| a / b)
    }
    pub fn scale(&self, k: f64) -> SmoothFn1D {
        self.mul(&SmoothFn1D::constant(k, self.domain.0, self.domain.1))
    }
    /// `a*self + b*o`
    pub fn lin(&self, a: f64, o: &SmoothFn1D, b: f64) -> SmoothFn1D {
        self.scale(a).add(&o.scale(b))
    }
    /// `self(inner(x))` on the domain of `inner`.
    pub fn compose(&self, inner: &SmoothFn1D) -> SmoothFn1D {
        let body = match (&self.body, &inner.body) {
            (Body::Expr(a), Body::Expr(b)) => Body::Expr(a.clone().compose(b.clone())),
            _ => {
                let (a, b) = (self.clone(), inner.clone());
                Body::Closure(Arc::new(move |x| a.value(b.value(x))))
            }
        };
        SmoothFn1D { domain: inner.domain, period: inner.period, body }
    }
}

/// Central differences with `h = max(1e-5, 1e-4|x|)`, one Richardson step.
/// Near a non-periodic endpoint the step is shrunk to stay inside the domain.
pub fn fd_derivs(f: &dyn Fn(f64) -> f64, x: f64, domain: (f64, f64), periodic: bool) -> [f64; 3] {
    let mut h = (1e-4 * x.abs()).max(1e-5);
    if !periodic {
        let room = (x - domain.0).min(domain.1 - x);
        if room > 0.0 && room < h {
            h = 0.5 * room;
        }
    }
    let f0 = f(x);
    let d = |h: f64| {
        let (fp, fm) = (f(x + h), f(x - h));
        ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
    };
    let (d1a, d2a) = d(h);
    let (d1b, d2b) = d(0.5 * h);
    [f0, (4.0 * d1b - d1a) / 3.0, (4.0 * d2b - d2a) / 3.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_examples() {
        let sq = SmoothFn1D::from_expr(Expr::x().powi(2), -10.0, 10.0);
        assert_eq!(sq.eval_with_derivs(3.0, 2).unwrap(), vec![9.0, 6.0, 2.0]);
        let s = SmoothFn1D::from_expr(Expr::x().sin(), -1.0, 1.0);
        assert_eq!(s.eval_with_derivs(0.0, 1).unwrap(), vec![0.0, 1.0]);
        let inv = SmoothFn1D::from_expr(Expr::x().powi(-2), 0.0, 1.0);
        assert_eq!(inv.eval_with_derivs(0.5, 2).unwrap(), vec![4.0, -16.0, 96.0]);
        assert!(matches!(inv.eval(1.5), Err(FuncError::Domain { .. })));
        assert!(matches!(inv.eval_with_derivs(0.5, 3), Err(FuncError::Order(3))));
    }

    #[test]
    fn closure_fallback_matches_analytic() {
        let f = SmoothFn1D::from_fn(|x: f64| 1.0 / (x * x), 0.0, 1.0);
        let d = f.eval_with_derivs(0.5, 2).unwrap();
        assert!((d[1] + 16.0).abs() < 1e-6 && (d[2] - 96.0).abs() < 1e-3);
    }

    #[test]
    fn closure_cannot_serialize() {
        let f = SmoothFn1D::from_fn(|x| x, 0.0, 1.0);
        assert!(serde_json::to_string(&f).is_err());
    }
}

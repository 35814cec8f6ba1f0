//! Liouville charts `X = g(x) = ∫ sqrt(w)` and the potential correction terms.

use crate::error::FuncError;
use crate::quad::{gk15, integrate};
use crate::scalar::Jet;
use crate::smooth::SmoothFn1D;

const PANELS: usize = 64;
const POSITIVITY_SAMPLES: usize = 257;

#[derive(Clone, Debug)]
pub struct LiouvilleChart {
    weight: SmoothFn1D,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
    cum: Vec<f64>,
    tol: f64,
}

/// Build the chart of `weight` over its domain with relative quadrature tolerance `tol`.
pub fn build_chart(weight: &SmoothFn1D, tol: f64) -> Result<LiouvilleChart, FuncError> {
    let (lo, hi) = weight.domain();
    build_chart_on(weight, lo, hi, tol)
}

pub fn build_chart_on(weight: &SmoothFn1D, lo: f64, hi: f64, tol: f64) -> Result<LiouvilleChart, FuncError> {
    for i in 1..POSITIVITY_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / POSITIVITY_SAMPLES as f64;
        let w = weight.value(x);
        if !(w > 0.0) || !w.is_finite() {
            return Err(FuncError::Positivity { x, value: w });
        }
    }
    let sw = |x: f64| weight.value(x).max(0.0).sqrt();
    let breaks: Vec<f64> = (0..=PANELS).map(|i| lo + (hi - lo) * i as f64 / PANELS as f64).collect();
    let mut cum = Vec::with_capacity(PANELS + 1);
    cum.push(0.0);
    for w in breaks.windows(2) {
        let q = integrate(&sw, w[0], w[1], tol, 0.0);
        cum.push(cum.last().unwrap() + q.value);
    }
    Ok(LiouvilleChart { weight: weight.clone(), lo, hi, breaks, cum, tol })
}

impl LiouvilleChart {
    pub fn weight(&self) -> &SmoothFn1D {
        &self.weight
    }
    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn sqrt_weight(&self, x: f64) -> f64 {
        self.weight.value(x).sqrt()
    }

    fn panel_of(&self, x: f64) -> usize {
        let t = (x - self.lo) / (self.hi - self.lo) * PANELS as f64;
        (t.floor().max(0.0) as usize).min(PANELS - 1)
    }

    fn partial(&self, a: f64, b: f64) -> f64 {
        let sw = |x: f64| self.weight.value(x).max(0.0).sqrt();
        let (v, e) = gk15(&sw, a, b);
        if e <= self.tol * v.abs().max(1e-300) {
            v
        } else {
            integrate(&sw, a, b, self.tol, 0.0).value
        }
    }

    /// Forward map `g(x)`.
    pub fn forward(&self, x: f64) -> f64 {
        let x = x.clamp(self.lo, self.hi);
        let i = self.panel_of(x);
        let (a, b) = (self.breaks[i], self.breaks[i + 1]);
        if x - a <= b - x {
            self.cum[i] + self.partial(a, x)
        } else {
            self.cum[i + 1] - self.partial(x, b)
        }
    }

    /// `L - g(x)`, accurate near the right end.
    pub fn distance_to_end(&self, x: f64) -> f64 {
        let x = x.clamp(self.lo, self.hi);
        let i = self.panel_of(x);
        let tail = self.length() - self.cum[i + 1];
        tail + self.partial(x, self.breaks[i + 1])
    }

    /// Inverse map `h(X)`: bracket on the panel table, then safeguarded Newton.
    pub fn inverse(&self, big_x: f64) -> Result<f64, FuncError> {
        let len = self.length();
        if big_x <= 0.0 {
            return Ok(self.lo);
        }
        if big_x >= len {
            return Ok(self.hi);
        }
        let i = self.cum.partition_point(|c| *c <= big_x).clamp(1, PANELS) - 1;
        let (mut a, mut b) = (self.breaks[i], self.breaks[i + 1]);
        let (ga, gb) = (self.cum[i], self.cum[i + 1]);
        let mut x = a + (b - a) * (big_x - ga) / (gb - ga);
        let scale = big_x.abs().max(1e-300);
        for _ in 0..100 {
            let r = self.forward(x) - big_x;
            if r.abs() <= 1e-15 * scale.max(1e-3 * len) {
                return Ok(x);
            }
            if r > 0.0 {
                b = x;
            } else {
                a = x;
            }
            let s = self.sqrt_weight(x);
            let mut xn = x - r / s;
            if !(xn > a && xn < b) || !s.is_finite() {
                xn = 0.5 * (a + b);
            }
            if (xn - x).abs() <= 1e-16 * x.abs().max(1e-300) {
                return Ok(xn);
            }
            x = xn;
        }
        Err(FuncError::Inverse(big_x))
    }
}

/// Correction terms `((log f)˙²/16, (log f)¨/4)` at a point, dots being
/// derivatives in the chart variable of weight `w`.
pub fn potential_terms_at(f: Jet, w: Jet) -> (f64, f64) {
    let l1 = f.d1 / f.v;
    let l2 = f.d2 / f.v - l1 * l1;
    let ld = l1 / w.v.sqrt();
    let ldd = l2 / w.v - l1 * w.d1 / (2.0 * w.v * w.v);
    (ld * ld / 16.0, ldd / 4.0)
}

/// The two correction terms as functions of the chart variable.
pub fn pushforward_potential_terms(
    chart: &LiouvilleChart,
    f: &SmoothFn1D,
) -> Result<(SmoothFn1D, SmoothFn1D), FuncError> {
    let (lo, hi) = chart.domain();
    for i in 1..POSITIVITY_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / POSITIVITY_SAMPLES as f64;
        let v = f.value(x);
        if !(v > 0.0) {
            return Err(FuncError::Positivity { x, value: v });
        }
    }
    let len = chart.length();
    let make = |which: usize| {
        let (c, f) = (chart.clone(), f.clone());
        SmoothFn1D::from_fn(
            move |big_x| {
                let x = c.inverse(big_x).unwrap_or(f64::NAN);
                let t = potential_terms_at(f.jet(x), c.weight().jet(x));
                if which == 0 {
                    t.0
                } else {
                    t.1
                }
            },
            0.0,
            len,
        )
    };
    Ok((make(0), make(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    #[test]
    fn constant_weights() {
        let c = build_chart(&SmoothFn1D::constant(1.0, 0.0, 3.0), 1e-12).unwrap();
        assert!((c.length() - 3.0).abs() < 1e-14);
        let c = build_chart(&SmoothFn1D::constant(4.0, 0.0, 1.0), 1e-12).unwrap();
        assert!((c.forward(0.3) - 0.6).abs() < 1e-14);
        assert!((c.inverse(0.6).unwrap() - 0.3).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_weight() {
        let w = SmoothFn1D::from_expr(Expr::x() - 0.5, 0.0, 1.0);
        assert!(matches!(build_chart(&w, 1e-10), Err(FuncError::Positivity { .. })));
    }

    #[test]
    fn terms_for_power_and_exponential() {
        let id = build_chart(&SmoothFn1D::constant(1.0, 0.0, 1.0), 1e-12).unwrap();
        let f = SmoothFn1D::from_expr(Expr::x().powi(2), 0.0, 1.0);
        let (t1, t2) = pushforward_potential_terms(&id, &f).unwrap();
        let x: f64 = 0.4;
        assert!((t1.value(x) - 1.0 / (4.0 * x * x)).abs() < 1e-12);
        assert!((t2.value(x) + 1.0 / (2.0 * x * x)).abs() < 1e-12);
        let e = SmoothFn1D::from_expr(Expr::x().exp(), 0.0, 1.0);
        let (t1, t2) = pushforward_potential_terms(&id, &e).unwrap();
        assert!((t1.value(x) - 1.0 / 16.0).abs() < 1e-14 && t2.value(x).abs() < 1e-14);
    }
}

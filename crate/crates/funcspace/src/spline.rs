//! Cubic interpolating splines from knot/value tables (natural or periodic).

use serde::{Deserialize, Serialize};

use crate::error::FuncError;
use crate::scalar::Scalar;

/// Serialized form: only the table, second derivatives are rebuilt on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplineTable {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default)]
    pub periodic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplineTable", into = "SplineTable")]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    periodic: bool,
    m: Vec<f64>,
}

impl TryFrom<SplineTable> for CubicSpline {
    type Error = FuncError;
    fn try_from(t: SplineTable) -> Result<Self, FuncError> {
        CubicSpline::new(t.knots, t.values, t.periodic)
    }
}

impl From<CubicSpline> for SplineTable {
    fn from(s: CubicSpline) -> Self {
        SplineTable { knots: s.knots, values: s.values, periodic: s.periodic }
    }
}

impl CubicSpline {
    /// For a periodic table the last value must repeat the first; the period
    /// is `knots.last() - knots[0]`.
    pub fn new(knots: Vec<f64>, values: Vec<f64>, periodic: bool) -> Result<Self, FuncError> {
        let n = knots.len();
        if n != values.len() {
            return Err(FuncError::Table(format!("{} knots but {} values", n, values.len())));
        }
        if n < 4 {
            return Err(FuncError::Table("need at least 4 knots".into()));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(FuncError::Table("knots must be strictly increasing".into()));
        }
        if values.iter().chain(knots.iter()).any(|v| !v.is_finite()) {
            return Err(FuncError::Table("non-finite entry".into()));
        }
        if periodic {
            let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            if (values[0] - values[n - 1]).abs() > 1e-12 * scale {
                return Err(FuncError::Table("periodic table must repeat its first value".into()));
            }
        }
        let m = if periodic {
            periodic_second_derivs(&knots, &values)
        } else {
            natural_second_derivs(&knots, &values)
        };
        Ok(CubicSpline { knots, values, periodic, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn is_periodic(&self) -> bool {
        self.periodic
    }
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    pub fn eval<T: Scalar>(&self, x: T) -> T {
        let (lo, hi) = self.domain();
        let mut shift = 0.0;
        if self.periodic {
            let p = hi - lo;
            shift = ((x.value() - lo) / p).floor() * p;
        }
        let xv = x.value() - shift;
        let i = match self.knots.partition_point(|k| *k <= xv) {
            0 => 0,
            k => (k - 1).min(self.knots.len() - 2),
        };
        let h = self.knots[i + 1] - self.knots[i];
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let b = (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0;
        let c = 0.5 * m0;
        let d = (m1 - m0) / (6.0 * h);
        let t = x - (self.knots[i] + shift);
        ((t * d + c) * t + b) * t + y0
    }
}

fn natural_second_derivs(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    // interior unknowns m[1..n-1], tridiagonal
    let k = n - 2;
    let mut diag = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    let mut sub = vec![0.0; k];
    let mut sup = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        sub[j] = h0;
        diag[j] = 2.0 * (h0 + h1);
        sup[j] = h1;
        rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    let sol = thomas(&sub, &diag, &sup, &rhs);
    m[1..n - 1].copy_from_slice(&sol);
    m
}

fn periodic_second_derivs(x: &[f64], y: &[f64]) -> Vec<f64> {
    // unknowns m[0..n-1], m[n-1] = m[0]; cyclic tridiagonal by Sherman-Morrison
    let n = x.len() - 1;
    let h = |i: usize| x[i + 1] - x[i];
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let hp = if i == 0 { h(n - 1) } else { h(i - 1) };
        let hn = h(i);
        let yp = if i == 0 { y[n - 1] } else { y[i - 1] };
        sub[i] = hp;
        diag[i] = 2.0 * (hp + hn);
        sup[i] = hn;
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / hn - (y[i] - yp) / hp);
    }
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut d2 = diag.clone();
    d2[0] -= gamma;
    d2[n - 1] -= alpha * beta / gamma;
    let xs = thomas(&sub, &d2, &sup, &rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = thomas(&sub, &d2, &sup, &u);
    let fact = (xs[0] + beta * xs[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    let mut m: Vec<f64> = xs.iter().zip(&z).map(|(a, b)| a - fact * b).collect();
    m.push(m[0]);
    m
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    out
}

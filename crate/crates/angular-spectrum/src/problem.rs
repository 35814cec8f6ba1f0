use funcspace::{build_chart_on, potential_terms_at, Expr, LiouvilleChart, SmoothFn1D};
use stackel_core::StackelMatrix;

use crate::error::AngularError;
use crate::hill::{discriminant, monodromy_of, Hill, Mat2};

/// One separated angular equation,
/// `-v'' + [-(λ²+1) r1 + μ² r2 + ν² r3] v = 0` on a circle of length `period`,
/// with `(r1, r2, r3)` row 2 or row 3 of the matrix.
#[derive(Clone, Debug)]
pub struct AngularProblem {
    pub row: usize,
    pub entries: [SmoothFn1D; 3],
    pub period: f64,
    pub lambda: f64,
}

/// Schrödinger form `-V̈ + Q V = μ² V` on `[0, length]` in the chart of weight
/// `-r2 - θ² r3`.
#[derive(Clone, Debug)]
pub struct AngularPotential {
    pub chart: LiouvilleChart,
    /// `Q` as a function of the chart variable.
    pub q: SmoothFn1D,
    pub length: f64,
}

const WINDOW_SAMPLES: usize = 1024;

impl AngularProblem {
    pub fn new(s: &StackelMatrix, row: usize, lambda: f64) -> Self {
        assert!(row == 2 || row == 3, "angular rows are 2 and 3");
        AngularProblem { row, entries: s.rows()[row - 1].clone(), period: s.period(row), lambda }
    }

    pub fn coupling(&self) -> f64 {
        self.lambda * self.lambda + 1.0
    }

    /// `-r2 - θ² r3`
    pub fn weight(&self, theta_sq: f64) -> SmoothFn1D {
        let [_, r2, r3] = &self.entries;
        r2.lin(-1.0, r3, -theta_sq).with_period(None)
    }

    pub fn samples(&self, n: usize) -> Vec<[f64; 3]> {
        (0..n)
            .map(|i| {
                let x = self.period * i as f64 / n as f64;
                [0, 1, 2].map(|k| self.entries[k].value(x))
            })
            .collect()
    }

    pub fn check_window(&self, theta_sq: f64) -> Result<(), AngularError> {
        let w = self.weight(theta_sq);
        for i in 0..WINDOW_SAMPLES {
            let x = self.period * i as f64 / WINDOW_SAMPLES as f64;
            let v = w.value(x);
            if !(v > 0.0) {
                return Err(AngularError::Window {
                    theta_sq,
                    reason: format!("weight of row {} is {v:e} at x = {x}", self.row),
                });
            }
        }
        Ok(())
    }

    /// The equation in its own variable at fixed `(μ², ν²)`.
    pub fn x_form(&self, mu_sq: f64, nu_sq: f64) -> XForm<'_> {
        XForm { p: self, mu_sq, nu_sq }
    }

    /// Chart-variable form at `(μ², θ²)`, integrated in the original variable.
    pub fn chart_form(&self, mu_sq: f64, theta_sq: f64) -> Result<ChartForm, AngularError> {
        self.check_window(theta_sq)?;
        Ok(ChartForm { q1: self.entries[0].clone(), w: self.weight(theta_sq), coupling: self.coupling(), mu_sq, period: self.period })
    }
}

pub struct XForm<'a> {
    p: &'a AngularProblem,
    mu_sq: f64,
    nu_sq: f64,
}

impl Hill for XForm<'_> {
    fn length(&self) -> f64 {
        self.p.period
    }
    fn coeffs(&self, x: f64) -> (f64, f64) {
        let e = &self.p.entries;
        (1.0, -self.p.coupling() * e[0].value(x) + self.mu_sq * e[1].value(x) + self.nu_sq * e[2].value(x))
    }
}

/// State `(V, V̇)` carried along the original variable: `dX = sqrt(w) dx`.
pub struct ChartForm {
    q1: SmoothFn1D,
    w: SmoothFn1D,
    coupling: f64,
    mu_sq: f64,
    period: f64,
}

impl ChartForm {
    /// `Q` at the point with original coordinate `x`.
    pub fn q_at(&self, x: f64) -> f64 {
        let w = self.w.jet(x);
        let (t1, t2) = potential_terms_at(w, w);
        -self.coupling * self.q1.value(x) / w.v + t1 + t2
    }
}

impl Hill for ChartForm {
    fn length(&self) -> f64 {
        self.period
    }
    fn coeffs(&self, x: f64) -> (f64, f64) {
        let s = self.w.value(x).sqrt();
        (s, s * (self.q_at(x) - self.mu_sq))
    }
}

/// Potential `Q_θ²` in the Liouville chart of the weight `-r2 - θ² r3`.
pub fn angular_schrodinger(p: &AngularProblem, mu_sq: f64, theta_sq: f64) -> Result<AngularPotential, AngularError> {
    let form = p.chart_form(mu_sq, theta_sq)?;
    let chart = build_chart_on(&form.w, 0.0, p.period, 1e-12)?;
    let length = chart.length();
    if let (Some(w0), Some(c1)) = (form.w.as_const(), form.q1.as_const()) {
        let q = -form.coupling * c1 / w0;
        return Ok(AngularPotential { chart, q: SmoothFn1D::from_expr(Expr::c(q), 0.0, length), length });
    }
    let c = chart.clone();
    let q = SmoothFn1D::from_fn(move |big_x| form.q_at(c.inverse(big_x).unwrap_or(f64::NAN)), 0.0, length);
    Ok(AngularPotential { chart, q, length })
}

/// Transfer matrix over one period of the chart form.
pub fn monodromy(p: &AngularProblem, mu_sq: f64, theta_sq: f64, rtol: f64) -> Result<Mat2, AngularError> {
    monodromy_of(&p.chart_form(mu_sq, theta_sq)?, rtol)
}

/// `Δ(μ², θ²) = 2 - trace`.
pub fn periodicity_char(p: &AngularProblem, mu_sq: f64, theta_sq: f64, rtol: f64) -> Result<f64, AngularError> {
    Ok(discriminant(&monodromy(p, mu_sq, theta_sq, rtol)?))
}

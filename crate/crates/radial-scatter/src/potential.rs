use std::fmt;
use std::sync::Arc;

use funcspace::{build_chart_on, potential_terms_at, Jet, LiouvilleChart, Scalar, SmoothFn1D};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use stackel_core::{minors, StackelMatrix};

use crate::error::RadialError;

const CHART_TOL: f64 = 1e-13;
/// Allowed relative deviation of the fitted endpoint strength from `λ² + ¼`.
const STRENGTH_TOL: f64 = 0.05;

/// Which separation constant plays the spectral role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    /// Weight `s12`, spectral parameter `μ²`, frozen `ν²`.
    Mu,
    /// Weight `s13`, spectral parameter `ν²`, frozen `μ²`.
    Nu,
    /// Weight `(μ² s12 + ν² s13)/(μ² + ν²)`, spectral parameter `μ² + ν²`.
    Joint,
}

impl Gauge {
    pub const ALL: [Gauge; 3] = [Gauge::Mu, Gauge::Nu, Gauge::Joint];
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gauge::Mu => "mu",
            Gauge::Nu => "nu",
            Gauge::Joint => "joint",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Left,
    Right,
}

impl End {
    pub fn name(self) -> &'static str {
        match self {
            End::Left => "left",
            End::Right => "right",
        }
    }
}

type Profile = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Stackel { s: StackelMatrix, weights: (f64, f64), angular: [[f64; 3]; 2] },
    /// Potential given directly in the chart variable (unit weight).
    Profile { q: Profile },
}

/// Full radial operator `-d²/dX² + P(X)` in one gauge, spectral term
/// included: solutions of `Ü = P U` are the generalized eigenfunctions.
#[derive(Clone)]
pub struct RadialPotential {
    pub gauge: Option<Gauge>,
    pub lambda: f64,
    pub mu_sq: Complex64,
    pub nu_sq: Complex64,
    chart: LiouvilleChart,
    source: Source,
}

impl fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialPotential")
            .field("gauge", &self.gauge)
            .field("lambda", &self.lambda)
            .field("mu_sq", &self.mu_sq)
            .field("nu_sq", &self.nu_sq)
            .field("length", &self.chart.length())
            .finish_non_exhaustive()
    }
}

/// Radial potential of `s` in `gauge` at the mode `(μ², ν²)`.
///
/// The joint gauge needs real `μ², ν²` with `μ² + ν² ≠ 0` and a positive
/// quotient weight. Endpoint strengths are checked against `λ² + ¼`.
pub fn build_potential(
    s: &StackelMatrix,
    gauge: Gauge,
    lambda: f64,
    mu_sq: Complex64,
    nu_sq: Complex64,
) -> Result<RadialPotential, RadialError> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(RadialError::Parameters(format!("energy parameter must be finite and nonzero, got {lambda}")));
    }
    let weights = match gauge {
        Gauge::Mu => (1.0, 0.0),
        Gauge::Nu => (0.0, 1.0),
        Gauge::Joint => {
            if mu_sq.im != 0.0 || nu_sq.im != 0.0 {
                return Err(RadialError::Parameters("joint gauge needs real μ², ν²".into()));
            }
            let total = mu_sq.re + nu_sq.re;
            if total == 0.0 {
                return Err(RadialError::Parameters("joint gauge needs μ² + ν² ≠ 0".into()));
            }
            (mu_sq.re / total, nu_sq.re / total)
        }
    };
    let w = s.entry(1, 2).lin(weights.0, s.entry(1, 3), weights.1);
    let chart = build_chart_on(&w, 0.0, s.a, CHART_TOL)?;
    let angular = [s.row(2, 0.5 * s.b), s.row(3, 0.5 * s.c)];
    let pot = RadialPotential {
        gauge: Some(gauge),
        lambda,
        mu_sq,
        nu_sq,
        chart,
        source: Source::Stackel { s: s.clone(), weights, angular },
    };
    pot.check_strength()?;
    Ok(pot)
}

impl RadialPotential {
    /// `P(X) = q(X) + spectral` on `(0, length)` with unit weight. `q` must
    /// carry the `-(λ² + ¼)/d²` singularity at both ends.
    pub fn from_profile<F>(length: f64, lambda: f64, spectral: Complex64, q: F) -> Result<RadialPotential, RadialError>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(length > 0.0 && length.is_finite()) {
            return Err(RadialError::Parameters(format!("interval length must be positive, got {length}")));
        }
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(RadialError::Parameters(format!("energy parameter must be finite and nonzero, got {lambda}")));
        }
        let chart = build_chart_on(&SmoothFn1D::constant(1.0, 0.0, length), 0.0, length, CHART_TOL)?;
        let pot = RadialPotential {
            gauge: None,
            lambda,
            mu_sq: spectral,
            nu_sq: Complex64::new(0.0, 0.0),
            chart,
            source: Source::Profile { q: Arc::new(move |x| q(x) + spectral) },
        };
        pot.check_strength()?;
        Ok(pot)
    }

    pub fn chart(&self) -> &LiouvilleChart {
        &self.chart
    }

    pub fn length(&self) -> f64 {
        self.chart.length()
    }

    /// `λ² + ¼`
    pub fn coulomb_strength(&self) -> f64 {
        self.lambda * self.lambda + 0.25
    }

    /// The spectral value of the gauge: `μ²`, `ν²` or `μ² + ν²`.
    pub fn spectral(&self) -> Complex64 {
        match self.gauge {
            Some(Gauge::Mu) | None => self.mu_sq,
            Some(Gauge::Nu) => self.nu_sq,
            Some(Gauge::Joint) => self.mu_sq + self.nu_sq,
        }
    }

    /// `(sqrt(w(x)), P(x))` at a point of the original radial variable.
    pub fn eval(&self, x: f64) -> (f64, Complex64) {
        match &self.source {
            Source::Profile { q } => (1.0, q(x)),
            Source::Stackel { s, weights, angular } => {
                let r1 = s.row_generic(1, Jet::var(x));
                let r2 = angular[0].map(Jet::cst);
                let r3 = angular[1].map(Jet::cst);
                let f1 = minors(r1, r2, r3).robertson();
                let w = r1[1] * weights.0 + r1[2] * weights.1;
                let (t1, t2) = potential_terms_at(f1 / w, w);
                let coupling = -(self.lambda * self.lambda + 1.0);
                let b = self.mu_sq * r1[1].v + self.nu_sq * r1[2].v + coupling * r1[0].v;
                (w.v.sqrt(), b / w.v + (t1 - t2))
            }
        }
    }

    /// Point at chart distance `d` from `end`, with the distance recomputed
    /// from that point so that both are consistent to rounding.
    pub fn point_at(&self, end: End, d: f64) -> Result<(f64, f64), RadialError> {
        let len = self.length();
        Ok(match end {
            End::Left => {
                let x = self.chart.inverse(d)?;
                (x, self.chart.forward(x))
            }
            End::Right => {
                let x = self.chart.inverse(len - d)?;
                (x, self.chart.distance_to_end(x))
            }
        })
    }

    /// `d(x)`: distance in the original variable to `end`.
    pub fn raw_distance(&self, end: End, x: f64) -> f64 {
        let (lo, hi) = self.chart.domain();
        match end {
            End::Left => x - lo,
            End::Right => hi - x,
        }
    }

    fn regular_at(&self, end: End, d: f64) -> Result<(f64, Complex64), RadialError> {
        let (x, d) = self.point_at(end, d)?;
        let (_, p) = self.eval(x);
        Ok((d, p + self.coulomb_strength() / (d * d)))
    }

    /// Leading terms `(R₋₁, R₀)` of the regular part `P + (λ² + ¼)/d² ≈ R₋₁/d + R₀`.
    pub fn regular_coefficients(&self, end: End) -> Result<(Complex64, Complex64), RadialError> {
        let h = 1e-3 * self.length();
        let (d1, r1) = self.regular_at(end, h)?;
        let (d2, r2) = self.regular_at(end, 2.0 * h)?;
        let (g1, g2) = (r1 * d1, r2 * d2);
        // g(d) = R₋₁ + R₀ d + O(d²) through the two points
        let slope = (g2 - g1) / (d2 - d1);
        Ok((g1 - slope * d1, slope))
    }

    /// Intercept of a least-squares quadratic in `d` through `-d² P` on a
    /// log grid; the quadratic term absorbs large spectral values.
    pub fn singular_strength(&self, end: End) -> Result<f64, RadialError> {
        let len = self.length();
        let mut ds = Vec::with_capacity(5);
        let mut vals = Vec::with_capacity(5);
        for k in 2..=6 {
            let (x, d) = self.point_at(end, len * 10f64.powi(-k))?;
            ds.push(d);
            vals.push(-(d * d) * self.eval(x).1.re);
        }
        let a = DMatrix::from_fn(ds.len(), 3, |i, j| (ds[i] / ds[0]).powi(j as i32));
        let sol = a
            .svd(true, true)
            .solve(&DVector::from_vec(vals), 1e-14)
            .map_err(|e| RadialError::Parameters(format!("strength fit failed: {e}")))?;
        Ok(sol[0])
    }

    fn check_strength(&self) -> Result<(), RadialError> {
        let expected = self.coulomb_strength();
        for end in [End::Left, End::Right] {
            let found = self.singular_strength(end)?;
            if !((found - expected).abs() <= STRENGTH_TOL * expected) {
                return Err(RadialError::AhStructure { end: end.name(), found, expected });
            }
        }
        Ok(())
    }
}

//! Built-in manifold families.

use std::f64::consts::{PI, TAU};

use funcspace::{CubicSpline, Expr, SmoothFn1D, SplineTable};
use serde::{Deserialize, Serialize};

use crate::error::StackelError;
use crate::matrix::StackelMatrix;

/// Constant angular rows `(a, b, c | d, e, f)` used when none are given.
pub const DEFAULT_ROWS: [f64; 6] = [0.0, -0.75, 0.25, 0.0, 0.25, -0.75];

fn default_rows() -> [f64; 6] {
    DEFAULT_ROWS
}
fn d_kappa() -> f64 {
    0.5
}
fn d_p12() -> f64 {
    0.3
}
fn d_p13() -> f64 {
    -0.2
}
fn d_one() -> f64 {
    1.0
}
fn d_amp() -> f64 {
    0.1
}
fn d_s2() -> f64 {
    0.7
}
fn d_s3() -> f64 {
    0.3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Preset {
    /// Row 1 `(1/x² + 1/(A-x)² + κ, 1 + p12 sin²(πx/A), 1 + p13 sin²(πx/A))`, constant angular rows.
    Example1 {
        #[serde(default = "d_kappa")]
        kappa: f64,
        #[serde(default = "d_p12")]
        p12: f64,
        #[serde(default = "d_p13")]
        p13: f64,
        #[serde(default = "default_rows")]
        rows: [f64; 6],
    },
    /// Warped product: row 1 `(s11, s12, a s12)`, angular rows with a cosine ripple.
    Example2 {
        #[serde(default = "d_p12")]
        p12: f64,
        #[serde(default = "d_one")]
        a: f64,
        #[serde(default = "d_amp")]
        amp2: f64,
        #[serde(default = "d_amp")]
        amp3: f64,
    },
    /// Geodesically-equivalent family, already in the normalized form
    /// `(s1, 1, 1 - 1/s1 | -s2², -s2, 1 - s2 | s3², s3, s3 - 1)`.
    Example3 {
        #[serde(default = "d_kappa")]
        kappa: f64,
        #[serde(default = "d_s2")]
        s2_mean: f64,
        #[serde(default = "d_amp")]
        s2_amp: f64,
        #[serde(default = "d_s3")]
        s3_mean: f64,
        #[serde(default = "d_amp")]
        s3_amp: f64,
    },
    /// `s11 = 1/x² + 1/(A-x)²`, `s12 = s13 = 1`, constant angular rows.
    HyperbolicTemplate {
        #[serde(default = "default_rows")]
        rows: [f64; 6],
    },
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Example1 { .. } => "example1",
            Preset::Example2 { .. } => "example2",
            Preset::Example3 { .. } => "example3",
            Preset::HyperbolicTemplate { .. } => "hyperbolic-template",
        }
    }

    pub fn example1() -> Self {
        Preset::Example1 { kappa: d_kappa(), p12: d_p12(), p13: d_p13(), rows: DEFAULT_ROWS }
    }
    pub fn example2() -> Self {
        Preset::Example2 { p12: d_p12(), a: 1.0, amp2: d_amp(), amp3: d_amp() }
    }
    pub fn example3() -> Self {
        Preset::Example3 { kappa: d_kappa(), s2_mean: d_s2(), s2_amp: d_amp(), s3_mean: d_s3(), s3_amp: d_amp() }
    }
    pub fn template() -> Self {
        Preset::HyperbolicTemplate { rows: DEFAULT_ROWS }
    }

    pub fn build(&self, a: f64, b: f64, c: f64) -> Result<StackelMatrix, StackelError> {
        let r = |e: Expr| SmoothFn1D::from_expr(e, 0.0, a);
        let p2 = |e: Expr| SmoothFn1D::periodic(e, b);
        let p3 = |e: Expr| SmoothFn1D::periodic(e, c);
        let bump = (Expr::x() * (PI / a)).sin().powi(2);
        let rows = match self {
            Preset::Example1 { kappa, p12, p13, rows } => [
                [r(hyperbolic_s11(a) + *kappa), r(1.0 + *p12 * bump.clone()), r(1.0 + *p13 * bump)],
                const_row(&rows[..3], b),
                const_row(&rows[3..], c),
            ],
            Preset::Example2 { p12, a: ratio, amp2, amp3 } => {
                let s12 = 1.0 + *p12 * bump;
                let c2 = (Expr::x() * (TAU / b)).cos();
                let c3 = (Expr::x() * (TAU / c)).cos();
                [
                    [r(hyperbolic_s11(a)), r(s12.clone()), r(*ratio * s12)],
                    [p2(Expr::c(0.0)), p2(-0.75 + *amp2 * c2.clone()), p2(0.25 + *amp2 * c2)],
                    [p3(Expr::c(0.0)), p3(0.25 + *amp3 * c3.clone()), p3(-0.75 + *amp3 * c3)],
                ]
            }
            Preset::Example3 { kappa, s2_mean, s2_amp, s3_mean, s3_amp } => {
                let s1 = hyperbolic_s11(a) + *kappa;
                let s2 = *s2_mean + *s2_amp * (Expr::x() * (TAU / b)).cos();
                let s3 = *s3_mean + *s3_amp * (Expr::x() * (TAU / c)).cos();
                [
                    [r(s1.clone()), r(Expr::c(1.0)), r(1.0 - 1.0 / s1)],
                    [p2(-(s2.clone().powi(2))), p2(-s2.clone()), p2(1.0 - s2)],
                    [p3(s3.clone().powi(2)), p3(s3.clone()), p3(s3 - 1.0)],
                ]
            }
            Preset::HyperbolicTemplate { rows } => [
                [r(hyperbolic_s11(a)), r(Expr::c(1.0)), r(Expr::c(1.0))],
                const_row(&rows[..3], b),
                const_row(&rows[3..], c),
            ],
        };
        StackelMatrix::new(rows, a, b, c)
    }
}

/// `1/x² + 1/(A-x)²`
pub fn hyperbolic_s11(a: f64) -> Expr {
    Expr::x().powi(-2) + (a - Expr::x()).powi(-2)
}

fn const_row(v: &[f64], period: f64) -> [SmoothFn1D; 3] {
    [0, 1, 2].map(|k| SmoothFn1D::periodic(Expr::c(v[k]), period))
}

/// One coefficient given in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EntrySpec {
    Const(f64),
    Table(SplineTable),
    /// `1/x² + 1/(A-x)²` plus a tabulated regular part.
    HyperbolicPlus(SplineTable),
    Expr(Expr),
}

impl EntrySpec {
    fn to_expr(&self, a: f64) -> Result<Expr, StackelError> {
        let spline = |t: &SplineTable| {
            CubicSpline::try_from(t.clone()).map(Expr::spline).map_err(StackelError::from)
        };
        Ok(match self {
            EntrySpec::Const(v) => Expr::c(*v),
            EntrySpec::Table(t) => spline(t)?,
            EntrySpec::HyperbolicPlus(t) => hyperbolic_s11(a) + spline(t)?,
            EntrySpec::Expr(e) => e.clone(),
        })
    }
}

/// Matrix assembled entry by entry (tables, constants or expressions).
pub fn tabulated(rows: &[[EntrySpec; 3]; 3], a: f64, b: f64, c: f64) -> Result<StackelMatrix, StackelError> {
    let mut out: Vec<[SmoothFn1D; 3]> = Vec::with_capacity(3);
    for (i, row) in rows.iter().enumerate() {
        let (lo, hi) = if i == 0 { (0.0, a) } else { (0.0, if i == 1 { b } else { c }) };
        let mut fs = Vec::with_capacity(3);
        for e in row {
            fs.push(SmoothFn1D::from_expr(e.to_expr(a)?, lo, hi));
        }
        out.push([fs[0].clone(), fs[1].clone(), fs[2].clone()]);
    }
    StackelMatrix::new([out[0].clone(), out[1].clone(), out[2].clone()], a, b, c)
}

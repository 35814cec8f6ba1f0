//! Dormand-Prince 5(4) with norm-wise error control on fixed-size real states.
//!
//! Complex systems are integrated by splitting into real and imaginary parts.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("step budget exhausted at x = {x}")]
    MaxSteps { x: f64 },
    #[error("non-finite state at x = {x}")]
    NonFinite { x: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-14, max_steps: 2_000_000 }
    }
}

impl OdeOptions {
    pub fn tight(rtol: f64) -> Self {
        OdeOptions { rtol, atol: rtol * 1e-4, ..Default::default() }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 - (-92097.0 / 339200.0);
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

/// Integrate `y' = f(x, y)` from `x0` through each of `targets` in order
/// (all on the same side of `x0`, monotone), returning the state at each.
pub fn integrate<const N: usize, F>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    targets: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<[f64; N]>, OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(targets.len());
    let Some(&last) = targets.last() else { return Ok(out) };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    let span = (last - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let scale = |a: &[f64; N], b: &[f64; N]| opts.atol + opts.rtol * norm(a).max(norm(b));
    let mut h = initial_step(&mut f, x, &y, &k1, dir, span, opts);
    let mut steps = 0usize;
    for &t in targets {
        while (t - x) * dir > 0.0 {
            if steps >= opts.max_steps {
                return Err(OdeError::MaxSteps { x });
            }
            let mut hs = h;
            let last_step = (x + dir * hs - t) * dir >= 0.0;
            if last_step {
                hs = (t - x).abs();
            }
            let hd = dir * hs;
            let k2 = f(x + C2 * hd, &axpy(&y, &[(hd * A21, &k1)]));
            let k3 = f(x + C3 * hd, &axpy(&y, &[(hd * A31, &k1), (hd * A32, &k2)]));
            let k4 = f(x + C4 * hd, &axpy(&y, &[(hd * A41, &k1), (hd * A42, &k2), (hd * A43, &k3)]));
            let k5 = f(
                x + C5 * hd,
                &axpy(&y, &[(hd * A51, &k1), (hd * A52, &k2), (hd * A53, &k3), (hd * A54, &k4)]),
            );
            let k6 = f(
                x + hd,
                &axpy(&y, &[(hd * A61, &k1), (hd * A62, &k2), (hd * A63, &k3), (hd * A64, &k4), (hd * A65, &k5)]),
            );
            let yn = axpy(&y, &[(hd * B1, &k1), (hd * B3, &k3), (hd * B4, &k4), (hd * B5, &k5), (hd * B6, &k6)]);
            let xn = if last_step { t } else { x + hd };
            let k7 = f(xn, &yn);
            let mut e = [0.0; N];
            for i in 0..N {
                e[i] = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            let err = norm(&e) / scale(&y, &yn);
            steps += 1;
            if !err.is_finite() {
                h = 0.1 * hs;
            } else if err <= 1.0 {
                x = xn;
                y = yn;
                k1 = k7;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // do not let a clipped final step shrink the next one
                h = if last_step { h.max(hs * fac) } else { hs * fac };
            } else {
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h <= 1e-15 * x.abs().max(1e-300) || h < 1e-300 {
                return Err(OdeError::StepUnderflow { x });
            }
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(OdeError::NonFinite { x });
        }
        out.push(y);
    }
    Ok(out)
}

fn initial_step<const N: usize, F>(
    f: &mut F,
    x: f64,
    y: &[f64; N],
    k1: &[f64; N],
    dir: f64,
    span: f64,
    opts: &OdeOptions,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let sc = opts.atol + opts.rtol * norm(y);
    let d0 = norm(y) / sc;
    let d1 = norm(k1) / sc;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span.max(1e-300) } else { (0.01 * d0 / d1).min(span) };
    let y1 = axpy(y, &[(dir * h0, k1)]);
    let k2 = f(x + dir * h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = k2[i] - k1[i];
    }
    let d2 = norm(&diff) / sc / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(span).max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let f = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
        let tau = std::f64::consts::TAU;
        let r = integrate(f, 0.0, [1.0, 0.0], &[0.25 * tau, tau], &OdeOptions::tight(1e-12)).unwrap();
        assert!(r[0][0].abs() < 1e-10 && (r[0][1] + 1.0).abs() < 1e-10);
        assert!((r[1][0] - 1.0).abs() < 1e-10 && r[1][1].abs() < 1e-10);
    }

    #[test]
    fn backward_exponential() {
        let f = |_x: f64, y: &[f64; 1]| [y[0]];
        let r = integrate(f, 1.0, [1.0], &[0.0], &OdeOptions::tight(1e-12)).unwrap();
        assert!((r[0][0] - (-1.0f64).exp()).abs() < 1e-12);
    }
}

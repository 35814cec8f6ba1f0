//! Fourier-Galerkin discretization of one angular equation as a symmetric
//! pencil `C(t) = C0 + t C1` whose eigenvalues are the other separation
//! constant.

use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::problem::AngularProblem;

type Complex64 = Complex<f64>;

const PAD: usize = 16;
/// Extra modes of the block used to confirm a root.
const REFINE: usize = 16;
const OFFDIAG_ZERO: f64 = 1e-14;

/// Fourier modes in the order `0, 1, -1, 2, -2, ...`: leading blocks are
/// smaller truncations.
fn mode(i: usize) -> i64 {
    let k = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        k
    } else {
        -k
    }
}

fn fourier(samples: &[f64], max_mode: usize) -> Vec<Complex64> {
    // coefficients c_n for n in -max_mode..=max_mode, stored at n + max_mode
    let m = samples.len();
    (0..=2 * max_mode)
        .map(|idx| {
            let n = idx as f64 - max_mode as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in samples.iter().enumerate() {
                let ph = -TAU * n * k as f64 / m as f64;
                acc += Complex64::from_polar(*v, ph);
            }
            acc / m as f64
        })
        .collect()
}

fn toeplitz(c: &[Complex64], max_mode: usize, size: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(size, size, |a, b| c[(mode(a) - mode(b) + max_mode as i64) as usize])
}

#[derive(Clone, Debug)]
enum Body {
    /// All coefficients constant: the pencil is diagonal in the Fourier basis.
    Diagonal { c0: Vec<f64>, c1: Vec<f64> },
    Dense { c0: DMatrix<Complex64>, c1: DMatrix<Complex64> },
}

/// Eigenvalues `E_j(t)` of `K(t) y = E W y` with `K = -d² + c q + t P`, `W > 0`.
#[derive(Clone, Debug)]
pub struct Pencil {
    body: Body,
    size: usize,
}

impl Pencil {
    /// Modes to add to the resolved range so that every index up to
    /// [`Pencil::index_limit`] has room for its refined block.
    pub const MARGIN: usize = PAD + REFINE / 2 + 1;

    /// Equation 2 (`t = μ²`, `E = -ν²`) or equation 3 (`t = ν²`, `E = -μ²`).
    pub fn new(p: &AngularProblem, max_mode: usize) -> Pencil {
        let c = p.coupling();
        // P multiplies t, W is the weight of E
        let (t_entry, w_entry) = if p.row == 2 { (1, 2) } else { (2, 1) };
        let size = 2 * max_mode + 1;
        let kappa = TAU / p.period;
        let kin: Vec<f64> = (0..size).map(|i| (mode(i) as f64 * kappa).powi(2)).collect();
        let consts = [p.entries[0].as_const(), p.entries[t_entry].as_const(), p.entries[w_entry].as_const()];
        if let [Some(q), Some(t), Some(w)] = consts {
            let c0 = kin.iter().map(|k| (k - c * q) / w).collect();
            let c1 = vec![t / w; size];
            return Pencil { body: Body::Diagonal { c0, c1 }, size };
        }
        let n_samples = (8 * max_mode + 64).max(256);
        let samples = p.samples(n_samples);
        let col = |j: usize| samples.iter().map(|s| s[j]).collect::<Vec<_>>();
        let two = 2 * max_mode;
        let (q, t, w) = (fourier(&col(0), two), fourier(&col(t_entry), two), fourier(&col(w_entry), two));
        let mut k0 = toeplitz(&q, two, size) * Complex64::new(-c, 0.0);
        for (i, k) in kin.iter().enumerate() {
            k0[(i, i)] += k;
        }
        let k1 = toeplitz(&t, two, size);
        let wm = toeplitz(&w, two, size);
        let offdiag = |m: &DMatrix<Complex64>| {
            let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
            (0..size).all(|a| (0..size).all(|b| a == b || m[(a, b)].norm() <= OFFDIAG_ZERO * scale))
        };
        if offdiag(&k0) && offdiag(&k1) && offdiag(&wm) {
            let c0 = (0..size).map(|i| k0[(i, i)].re / wm[(i, i)].re).collect();
            let c1 = (0..size).map(|i| k1[(i, i)].re / wm[(i, i)].re).collect();
            return Pencil { body: Body::Diagonal { c0, c1 }, size };
        }
        let chol = wm.cholesky().expect("weight row must be positive");
        let reduce = |k: &DMatrix<Complex64>| {
            let y = chol.l_dirty().solve_lower_triangular(k).expect("triangular solve");
            let c = chol.l_dirty().solve_lower_triangular(&y.adjoint()).expect("triangular solve");
            (&c + c.adjoint()) * Complex64::new(0.5, 0.0)
        };
        Pencil { body: Body::Dense { c0: reduce(&k0), c1: reduce(&k1) }, size }
    }

    pub fn max_size(&self) -> usize {
        self.size
    }

    /// Truncation used for the `j`-th eigenvalue.
    pub fn size_for(&self, j: usize) -> usize {
        (2 * (j / 2 + PAD) + 1).min(self.size)
    }

    /// `j`-th smallest eigenvalue of `C(t)` and its derivative in `t`, on a
    /// leading block of the given size.
    pub fn eig_sized(&self, t: f64, j: usize, size: usize) -> Option<(f64, f64)> {
        if j >= size {
            return None;
        }
        match &self.body {
            Body::Diagonal { c0, c1 } => {
                let mut v: Vec<(f64, f64)> = (0..size).map(|i| (c0[i] + t * c1[i], c1[i])).collect();
                v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                Some(v[j])
            }
            Body::Dense { c0, c1 } => {
                let a = c0.view((0, 0), (size, size)) + c1.view((0, 0), (size, size)) * Complex64::new(t, 0.0);
                let e = SymmetricEigen::new(a);
                let mut order: Vec<usize> = (0..size).collect();
                order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
                let i = order[j];
                let v = e.eigenvectors.column(i);
                let b = c1.view((0, 0), (size, size));
                let slope = (v.adjoint() * b * v)[(0, 0)].re;
                Some((e.eigenvalues[i], slope))
            }
        }
    }

    pub fn eig(&self, t: f64, j: usize) -> Option<(f64, f64)> {
        self.eig_sized(t, j, self.size_for(j))
    }

    /// Same eigenvalue on a block `REFINE` modes larger.
    pub fn eig_refined(&self, t: f64, j: usize) -> Option<(f64, f64)> {
        let size = self.size_for(j) + REFINE;
        if size > self.size {
            return None;
        }
        self.eig_sized(t, j, size)
    }

    /// Largest index whose refined block fits.
    pub fn index_limit(&self) -> usize {
        let half = (self.size - 1) / 2;
        2 * half.saturating_sub(PAD + REFINE / 2) + 1
    }

    /// All eigenvalues of the block used for index `j`, ascending.
    pub fn spectrum(&self, t: f64, j: usize) -> Vec<f64> {
        let size = self.size_for(j);
        let mut v: Vec<f64> = match &self.body {
            Body::Diagonal { c0, c1 } => (0..size).map(|i| c0[i] + t * c1[i]).collect(),
            Body::Dense { c0, c1 } => {
                let a = c0.view((0, 0), (size, size)) + c1.view((0, 0), (size, size)) * Complex64::new(t, 0.0);
                SymmetricEigen::new(a).eigenvalues.iter().copied().collect()
            }
        };
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.body, Body::Diagonal { .. })
    }
}

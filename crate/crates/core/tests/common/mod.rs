//! Test-side oracles that share no code with the library: a cyclic Jacobi
//! eigensolver on plain row-major arrays and closed forms for 2×2 matrices.

#![allow(dead_code)]

use msr_lab::SymMatrix;

pub struct Jacobi {
    pub n: usize,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` (row-major `n × n`) belongs to `values[k]`.
    pub vectors: Vec<f64>,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn jacobi(n: usize, data: &[f64]) -> Jacobi {
    let mut a = data.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|i, j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + k] = v[r * n + i];
        }
    }
    Jacobi { n, values, vectors }
}

impl Jacobi {
    pub fn of(a: &SymMatrix) -> Self {
        jacobi(a.n(), &a.to_row_major())
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn norm(&self) -> f64 {
        self.values[0].abs().max(self.values[self.n - 1].abs())
    }

    /// `Q f(Λ) Qᵀ`, row-major.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.n;
        let fv: Vec<f64> = self.values.iter().map(|x| f(*x)).collect();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| self.vectors[i * n + k] * fv[k] * self.vectors[j * n + k])
                    .sum();
            }
        }
        out
    }
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Smallest eigenvalue of a row-major symmetric matrix.
pub fn min_eig(n: usize, data: &[f64]) -> f64 {
    jacobi(n, data).min()
}

pub fn norm(n: usize, data: &[f64]) -> f64 {
    jacobi(n, data).norm()
}

/// Square root through the Jacobi spectrum, negative rounding clamped.
pub fn sqrt(a: &SymMatrix) -> Vec<f64> {
    Jacobi::of(a).map(|t| t.max(0.0).sqrt())
}

/// `√M = (M + √det·1) / √(tr M + 2√det)` for 2×2 `M ≥ 0`.
pub fn sqrt_2x2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let s = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).max(0.0).sqrt();
    let t = (m[0][0] + m[1][1] + 2.0 * s).sqrt();
    [[(m[0][0] + s) / t, m[0][1] / t], [m[1][0] / t, (m[1][1] + s) / t]]
}

/// Smaller eigenvalue of a symmetric 2×2 matrix.
pub fn min_eig_2x2(m: [[f64; 2]; 2]) -> f64 {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let half = 0.5 * (m[0][0] - m[1][1]);
    mean - (half * half + m[0][1] * m[0][1]).sqrt()
}

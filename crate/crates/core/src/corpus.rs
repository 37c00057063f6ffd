//! Seeded random matrices for the property checks.
//!
//! Every generator consumes draws from a [`SplitMix64`] in a fixed order
//! (Gaussian matrices are filled row-major), so corpora are reproducible
//! from the seed alone.

use nalgebra::DMatrix;

use crate::rng::SplitMix64;
use crate::sym::SymMatrix;

/// Gaussian `rows × cols` matrix, filled row by row.
pub fn gaussian(rng: &mut SplitMix64, rows: usize, cols: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.normal();
        }
    }
    m
}

fn gram(m: &DMatrix<f64>, scale: f64) -> SymMatrix {
    SymMatrix::from_nearly_symmetric(m.transpose() * m * scale)
}

/// Symmetric matrix `(g + gᵀ)/2` with Gaussian `g`; indefinite in general.
pub fn random_symmetric(rng: &mut SplitMix64, n: usize) -> SymMatrix {
    SymMatrix::from_nearly_symmetric(gaussian(rng, n, n))
}

/// PSD matrix `s · mᵀm / r` with rank `r` uniform in `1..=n` and scale `s`
/// log-uniform in `[0.1, 10]`. Singular whenever `r < n`.
pub fn random_psd(rng: &mut SplitMix64, n: usize) -> SymMatrix {
    let rank = rng.int_in(1, n);
    let scale = 10f64.powf(rng.uniform(-1.0, 1.0)) / rank as f64;
    let m = gaussian(rng, rank, n);
    gram(&m, scale)
}

/// Positive definite matrix with invertibility margin at least `floor`:
/// a [`random_psd`] draw shifted by `floor · 10^u`, `u` uniform in `[0, 2]`.
pub fn random_pd(rng: &mut SplitMix64, n: usize, floor: f64) -> SymMatrix {
    let a = random_psd(rng, n);
    let shift = floor * 10f64.powf(rng.uniform(0.0, 2.0));
    a.shift(shift)
}

/// A pair `0 ≤ a ≤ b` with `b = a + cᵀc`, so the order hypothesis holds by
/// construction. `a` comes from [`random_psd`] and may be singular; `c` is a
/// full `n × n` Gaussian matrix scaled by `10^u / n`, `u` uniform in
/// `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct PsdPair {
    pub a: SymMatrix,
    pub b: SymMatrix,
}

pub fn psd_pair(rng: &mut SplitMix64, n: usize) -> PsdPair {
    let a = random_psd(rng, n);
    let scale = 10f64.powf(rng.uniform(-1.0, 1.0)) / n as f64;
    let c = gaussian(rng, n, n);
    let b = &a + &gram(&c, scale);
    PsdPair { a, b }
}

/// [`psd_pair`] with `a` replaced by [`random_pd`], so both ends are
/// invertible with margin at least `floor`.
pub fn invertible_pair(rng: &mut SplitMix64, n: usize, floor: f64) -> PsdPair {
    let a = random_pd(rng, n, floor);
    let scale = 10f64.powf(rng.uniform(-1.0, 1.0)) / n as f64;
    let c = gaussian(rng, n, n);
    let b = &a + &gram(&c, scale);
    PsdPair { a, b }
}

/// Pair of diagonal (hence commuting) PSD matrices with `a ≤ b`.
pub fn diagonal_pair(rng: &mut SplitMix64, n: usize) -> PsdPair {
    let a: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, 3.0)).collect();
    let b: Vec<f64> = a.iter().map(|x| x + rng.uniform(0.0, 3.0)).collect();
    PsdPair {
        a: SymMatrix::diag(&a),
        b: SymMatrix::diag(&b),
    }
}

/// Haar-like orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the signs of `R`'s diagonal moved into `Q`.
pub fn random_orthogonal(rng: &mut SplitMix64, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Symmetric matrix with a prescribed spectrum in a random orthonormal basis.
pub fn with_spectrum(rng: &mut SplitMix64, spectrum: &[f64]) -> SymMatrix {
    let n = spectrum.len();
    let q = random_orthogonal(rng, n);
    let scaled = DMatrix::from_fn(n, n, |i, k| q[(i, k)] * spectrum[k]);
    SymMatrix::from_nearly_symmetric(scaled * q.transpose())
}

/// A commuting family: a base matrix (half of the time with repeated
/// eigenvalues drawn from `{−2, …, 2}`) followed by one to three random
/// polynomials of degree at most two in it.
pub fn commuting_family(rng: &mut SplitMix64, n: usize) -> Vec<SymMatrix> {
    let degenerate = rng.next_f64() < 0.5;
    let spectrum: Vec<f64> = (0..n)
        .map(|_| {
            if degenerate {
                rng.int_in(0, 4) as f64 - 2.0
            } else {
                rng.normal()
            }
        })
        .collect();
    let base = with_spectrum(rng, &spectrum);
    let count = rng.int_in(1, 3);
    let mut family = vec![base.clone()];
    for _ in 0..count {
        let (c0, c1, c2) = (rng.normal(), rng.normal(), rng.normal());
        let poly = &(&base.square().scale(c2) + &base.scale(c1)) + &SymMatrix::scalar(n, c0);
        family.push(poly);
    }
    family
}

//! Commutants, commutative blocks and their function representation.
//!
//! A commuting family of symmetric matrices is simultaneously diagonalized
//! by an orthogonal `Q`. Grouping the columns of `Q` into joint eigenspaces
//! gives a finite set `X` of "points"; each block element `a` is then the
//! function `x ↦ (eigenvalue of a on cell x)`, and the map `a ↦ Ψ(a)` is
//! linear, multiplicative, isometric for the sup norm and order preserving
//! in both directions. The projections onto the cells are the indicator
//! functions, and they generate a finite Boolean algebra.
//!
//! Since `X` is finite and discrete there is no topology to carry around;
//! a cell is just a list of column indices of `Q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::{DMatrix, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, MsrError, Result};
use crate::rng::SplitMix64;
use crate::sym::{normalize_sign, order_unit_norm, projection_check, Projection, SymMatrix, ToleranceConfig};

/// Residual tolerance (relative) for "diagonal in `Q`" and "constant on a
/// cell".
pub const BLOCK_TOL: f64 = 1e-8;

/// Relative singular-value threshold for the commutator null space.
pub const NULL_SPACE_TOL: f64 = 1e-8;

const BLOCK_SEED: u64 = 0x00B1_0C5E_ED00_0001;
const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommuteCheck {
    pub commutes: bool,
    /// `‖ab − ba‖_max`
    pub residual: f64,
    pub threshold: f64,
}

/// `a C b`: true iff `‖ab − ba‖_max ≤ commute_tol · max(1, ‖a‖‖b‖)`.
pub fn commutes(a: &SymMatrix, b: &SymMatrix, cfg: &ToleranceConfig) -> Result<CommuteCheck> {
    check_dims(a.n(), b.n())?;
    let ab = a.product(b);
    // ba = (ab)ᵀ for symmetric factors.
    let residual = (ab.as_matrix() - ab.as_matrix().transpose()).amax();
    let threshold = cfg.commute_tol * (order_unit_norm(a) * order_unit_norm(b)).max(1.0);
    Ok(CommuteCheck {
        commutes: residual <= threshold,
        residual,
        threshold,
    })
}

/// Orthonormal basis (trace inner product) of `Sym(n)`: `E_ii` and
/// `(E_ij + E_ji)/√2` for `i < j`, in row-major order of `(i, j)`.
fn sym_basis(n: usize) -> Vec<SymMatrix> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let mut m = DMatrix::zeros(n, n);
            if i == j {
                m[(i, i)] = 1.0;
            } else {
                m[(i, j)] = std::f64::consts::FRAC_1_SQRT_2;
                m[(j, i)] = std::f64::consts::FRAC_1_SQRT_2;
            }
            out.push(SymMatrix::from_nearly_symmetric(m));
        }
    }
    out
}

fn from_coords(basis: &[SymMatrix], coords: &[f64], n: usize) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    for (e, c) in basis.iter().zip(coords) {
        m += e.as_matrix() * *c;
    }
    SymMatrix::from_nearly_symmetric(m)
}

/// Basis of the commutant `C(S) = {x ∈ Sym(n) : xs = sx for all s ∈ S}`,
/// orthonormal for the trace inner product.
///
/// Computed as the null space of the stacked commutator map
/// `x ↦ ([x, s])_{s ∈ S}` on the `n(n+1)/2`-dimensional symmetric space.
/// The empty family has commutant `Sym(n)`.
pub fn commutant_basis(n: usize, family: &[SymMatrix]) -> Result<Vec<SymMatrix>> {
    for s in family {
        check_dims(n, s.n())?;
    }
    let basis = sym_basis(n);
    let d = basis.len();
    let per = n * (n - 1) / 2;
    let rows = (family.len() * per).max(d);
    let mut op = DMatrix::zeros(rows, d);
    for (si, s) in family.iter().enumerate() {
        for (k, e) in basis.iter().enumerate() {
            let es = e.product(s);
            let comm = es.as_matrix() - es.as_matrix().transpose();
            let mut r = si * per;
            for i in 0..n {
                for j in (i + 1)..n {
                    op[(r, k)] = comm[(i, j)];
                    r += 1;
                }
            }
        }
    }
    let svd = SVD::new(op, false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma = &svd.singular_values;
    let cutoff = NULL_SPACE_TOL * sigma.iter().fold(1.0_f64, |acc, s| acc.max(*s));
    let mut out = Vec::new();
    for k in 0..sigma.len() {
        if sigma[k] <= cutoff {
            let mut coords: Vec<f64> = v_t.row(k).iter().copied().collect();
            normalize_sign(&mut coords);
            out.push(from_coords(&basis, &coords, n));
        }
    }
    Ok(out)
}

/// `CC(S)`, the commutant of the commutant.
pub fn bicommutant(n: usize, family: &[SymMatrix]) -> Result<Vec<SymMatrix>> {
    let first = commutant_basis(n, family)?;
    commutant_basis(n, &first)
}

/// Distance (Frobenius) from `x` to the span of a trace-orthonormal basis.
pub fn span_residual(basis: &[SymMatrix], x: &SymMatrix) -> f64 {
    let mut rest = x.as_matrix().clone();
    for b in basis {
        rest -= b.as_matrix() * b.inner(x);
    }
    rest.norm()
}

/// A commuting family together with its joint eigenbasis and the finite
/// point set of joint eigenspaces.
#[derive(Debug, Clone)]
pub struct CommutativeBlock {
    generators: Vec<SymMatrix>,
    basis: DMatrix<f64>,
    cells: Vec<Vec<usize>>,
    projections: Vec<Projection>,
}

/// Simultaneously diagonalizes a commuting family.
///
/// A seeded generic combination of the generators is diagonalized first;
/// clusters of eigenvalues closer than `cluster_tol · max(1, ‖·‖)` are then
/// split recursively by each generator restricted to the cluster. Cells are
/// the maximal sets of basis vectors on which every generator is constant,
/// ordered by their projection matrices (row-major, descending).
pub fn build_block(generators: &[SymMatrix], cfg: &ToleranceConfig) -> Result<CommutativeBlock> {
    let first = generators
        .first()
        .ok_or_else(|| MsrError::Input("a block needs at least one generator".into()))?;
    let n = first.n();
    for g in generators {
        check_dims(n, g.n())?;
    }
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..generators.len() {
        for j in (i + 1)..generators.len() {
            let c = commutes(&generators[i], &generators[j], cfg)?;
            if !c.commutes && worst.is_none_or(|(_, _, r)| c.residual > r) {
                worst = Some((i, j, c.residual));
            }
        }
    }
    if let Some((first, second, residual)) = worst {
        return Err(MsrError::NonCommuting {
            first,
            second,
            residual,
        });
    }

    let mut last_residual = f64::INFINITY;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = SplitMix64::for_trial(BLOCK_SEED, attempt as u64);
        let mut combo = DMatrix::zeros(n, n);
        for g in generators {
            combo += g.as_matrix() * rng.uniform(1.0, 2.0);
        }
        let combo = SymMatrix::from_nearly_symmetric(combo);
        let mut spaces = Vec::new();
        for space in split(&DMatrix::identity(n, n), &combo, cfg) {
            refine(space, generators, cfg, &mut spaces);
        }
        let block = assemble(generators, spaces, cfg)?;
        last_residual = block.generator_residual();
        if last_residual <= BLOCK_TOL {
            return Ok(block);
        }
    }
    Err(MsrError::RefinementFailed {
        attempts: MAX_ATTEMPTS,
        residual: last_residual,
    })
}

/// Splits the orthonormal columns `space` into clusters of eigenvectors of
/// `g` restricted to that space.
fn split(space: &DMatrix<f64>, g: &SymMatrix, cfg: &ToleranceConfig) -> Vec<DMatrix<f64>> {
    let restricted = SymMatrix::from_nearly_symmetric(space.transpose() * g.as_matrix() * space);
    let eig = restricted.eig();
    let values = eig.values();
    let gap = cfg.cluster_tol * order_unit_norm(g).max(1.0);
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for k in 1..values.len() {
        if values[k] - values[k - 1] <= gap {
            groups.last_mut().expect("nonempty").push(k);
        } else {
            groups.push(vec![k]);
        }
    }
    groups
        .into_iter()
        .map(|idx| {
            let w = DMatrix::from_fn(values.len(), idx.len(), |i, c| eig.vectors()[(i, idx[c])]);
            space * w
        })
        .collect()
}

fn refine(space: DMatrix<f64>, generators: &[SymMatrix], cfg: &ToleranceConfig, out: &mut Vec<DMatrix<f64>>) {
    if space.ncols() > 1 {
        for g in generators {
            let parts = split(&space, g, cfg);
            if parts.len() > 1 {
                for p in parts {
                    refine(p, generators, cfg, out);
                }
                return;
            }
        }
    }
    out.push(space);
}

fn cell_values(space: &DMatrix<f64>, g: &SymMatrix) -> f64 {
    let d = space.transpose() * g.as_matrix() * space;
    d.trace() / d.nrows() as f64
}

fn compare_projections(p: &SymMatrix, q: &SymMatrix) -> Ordering {
    for (x, y) in p.to_row_major().iter().zip(q.to_row_major()) {
        if (x - y).abs() > 1e-9 {
            return y.total_cmp(x);
        }
    }
    Ordering::Equal
}

fn assemble(generators: &[SymMatrix], spaces: Vec<DMatrix<f64>>, cfg: &ToleranceConfig) -> Result<CommutativeBlock> {
    let n = generators[0].n();
    // Merge cells on which every generator takes the same value.
    let mut merged: Vec<(Vec<f64>, DMatrix<f64>)> = Vec::new();
    for space in spaces {
        let tuple: Vec<f64> = generators.iter().map(|g| cell_values(&space, g)).collect();
        let same = merged.iter().position(|(t, _)| {
            t.iter()
                .zip(&tuple)
                .zip(generators)
                .all(|((x, y), g)| (x - y).abs() <= cfg.cluster_tol * order_unit_norm(g).max(1.0))
        });
        match same {
            Some(k) => {
                let (_, existing) = &merged[k];
                let joined = DMatrix::from_fn(n, existing.ncols() + space.ncols(), |i, c| {
                    if c < existing.ncols() {
                        existing[(i, c)]
                    } else {
                        space[(i, c - existing.ncols())]
                    }
                });
                merged[k].1 = joined;
            }
            None => merged.push((tuple, space)),
        }
    }

    let mut cells: Vec<(SymMatrix, DMatrix<f64>)> = merged
        .into_iter()
        .map(|(_, mut v)| {
            for mut col in v.column_iter_mut() {
                let mut c: Vec<f64> = col.iter().copied().collect();
                normalize_sign(&mut c);
                col.copy_from_slice(&c);
            }
            (SymMatrix::from_nearly_symmetric(&v * v.transpose()), v)
        })
        .collect();
    cells.sort_by(|(p, _), (q, _)| compare_projections(p, q));

    let mut basis = DMatrix::zeros(n, n);
    let mut index_cells = Vec::with_capacity(cells.len());
    let mut projections = Vec::with_capacity(cells.len());
    let mut col = 0;
    for (p, v) in cells {
        let mut idx = Vec::with_capacity(v.ncols());
        for c in 0..v.ncols() {
            basis.set_column(col, &v.column(c));
            idx.push(col);
            col += 1;
        }
        index_cells.push(idx);
        let proj_cfg = ToleranceConfig {
            proj_tol: cfg.proj_tol.max(BLOCK_TOL),
            ..*cfg
        };
        projections.push(projection_check(&p, &proj_cfg)?);
    }
    Ok(CommutativeBlock {
        generators: generators.to_vec(),
        basis,
        cells: index_cells,
        projections,
    })
}

impl CommutativeBlock {
    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    /// Number of points `|X|`.
    pub fn x_size(&self) -> usize {
        self.cells.len()
    }

    pub fn generators(&self) -> &[SymMatrix] {
        &self.generators
    }

    /// Joint orthogonal eigenbasis, columns grouped by cell.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Column indices of [`Self::basis`] for each point of `X`.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Projection onto each cell, in cell order.
    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    /// How far `a` is from being a block element: the largest off-diagonal
    /// entry of `Qᵀ a Q`, or the largest spread of its diagonal within a
    /// cell, whichever is bigger.
    pub fn membership_residual(&self, a: &SymMatrix) -> f64 {
        let d = self.basis.transpose() * a.as_matrix() * &self.basis;
        let n = self.n();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(d[(i, j)].abs());
                }
            }
        }
        for cell in &self.cells {
            let lo = cell.iter().map(|&i| d[(i, i)]).fold(f64::INFINITY, f64::min);
            let hi = cell.iter().map(|&i| d[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(hi - lo);
        }
        worst
    }

    fn generator_residual(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| self.membership_residual(g) / order_unit_norm(g).max(1.0))
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, a: &SymMatrix) -> bool {
        a.n() == self.n() && self.membership_residual(a) <= BLOCK_TOL * order_unit_norm(a).max(1.0)
    }

    /// `Ψ(a)`: the eigenvalue of `a` on each cell.
    pub fn psi(&self, a: &SymMatrix) -> Result<Vec<f64>> {
        check_dims(self.n(), a.n())?;
        let residual = self.membership_residual(a);
        if residual > BLOCK_TOL * order_unit_norm(a).max(1.0) {
            return Err(MsrError::NotInBlock { residual });
        }
        let d = self.basis.transpose() * a.as_matrix() * &self.basis;
        Ok(self
            .cells
            .iter()
            .map(|cell| cell.iter().map(|&i| d[(i, i)]).sum::<f64>() / cell.len() as f64)
            .collect())
    }

    /// `Ψ⁻¹(f) = Σ_x f(x) P_x`.
    pub fn element(&self, f: &[f64]) -> Result<SymMatrix> {
        check_dims(self.x_size(), f.len())?;
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (p, v) in self.projections.iter().zip(f) {
            m += p.matrix().as_matrix() * *v;
        }
        Ok(SymMatrix::from_nearly_symmetric(m))
    }

    pub fn function_rep(&self) -> FunctionRep<'_> {
        FunctionRep { block: self }
    }

    /// Extends the block to a maximal commutative family: the generators
    /// plus the rank-one projections onto every basis vector. All matrices
    /// diagonal in `Q` belong to the extension and every cell is a single
    /// basis vector.
    pub fn maximal_extension(&self, cfg: &ToleranceConfig) -> Result<CommutativeBlock> {
        let mut generators = self.generators.clone();
        for k in 0..self.n() {
            let v: Vec<f64> = self.basis.column(k).iter().copied().collect();
            generators.push(SymMatrix::outer(&v));
        }
        build_block(&generators, cfg)
    }

    /// Serializable summary with `Ψ` of every generator.
    pub fn dump(&self) -> Result<BlockDump> {
        let mut psi = BTreeMap::new();
        for (k, g) in self.generators.iter().enumerate() {
            psi.insert(k.to_string(), self.psi(g)?);
        }
        Ok(BlockDump {
            x: self.x_size(),
            cells: self.cells.clone(),
            psi,
        })
    }
}

/// `Ψ(a)` for a block element `a`.
pub fn function_rep(block: &CommutativeBlock, a: &SymMatrix) -> Result<Vec<f64>> {
    block.psi(a)
}

/// The isomorphism `Ψ` from a block onto functions on its points.
#[derive(Debug, Clone, Copy)]
pub struct FunctionRep<'b> {
    block: &'b CommutativeBlock,
}

impl FunctionRep<'_> {
    pub fn x_size(&self) -> usize {
        self.block.x_size()
    }

    pub fn psi(&self, a: &SymMatrix) -> Result<Vec<f64>> {
        self.block.psi(a)
    }

    pub fn inverse(&self, f: &[f64]) -> Result<SymMatrix> {
        self.block.element(f)
    }

    /// `sup_x |Ψ(a)(x)|`
    pub fn sup_norm(&self, a: &SymMatrix) -> Result<f64> {
        Ok(self.psi(a)?.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
    }
}

/// JSON form of a block: `{"X": .., "cells": [[..]], "psi": {"0": [..]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDump {
    #[serde(rename = "X")]
    pub x: usize,
    pub cells: Vec<Vec<usize>>,
    pub psi: BTreeMap<String, Vec<f64>>,
}

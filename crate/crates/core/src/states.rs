//! States as trace forms.
//!
//! In finite dimension every linear functional on `Sym(n)` is
//! `φ(a) = trace(G a)` for a unique symmetric `G`, and it is a state
//! (positive, `φ(1) = 1`) exactly when `G` is a density matrix. The
//! extension and representation steps that are needed for infinite
//! algebras are therefore identities here: restricting a state to a
//! commutative block and reading off a measure on the block's points is
//! just `m({x}) = trace(ρ P_x)`.

use serde::{Deserialize, Serialize};

use crate::blocks::CommutativeBlock;
use crate::corpus;
use crate::error::{check_dims, MsrError, Result};
use crate::rng::SplitMix64;
use crate::sym::{SymMatrix, ToleranceConfig};

/// Tolerance on `trace(ρ) = 1`.
pub const TRACE_TOL: f64 = 1e-10;

/// Number of random states used to cross-check the exact positivity test.
pub const SAMPLED_STATES: usize = 256;

const SAMPLING_SEED: u64 = 0x5747_E500_0000_0256;

/// A state `ω(a) = trace(ρ a)` given by a density matrix `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    rho: SymMatrix,
}

impl State {
    /// Validates `ρ ≥ 0` (within `psd_tol`) and `trace(ρ) = 1`.
    pub fn new(rho: SymMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(MsrError::NotState(format!("trace is {tr}, expected 1")));
        }
        let min = rho.min_eigenvalue();
        if min < -cfg.psd_tol {
            return Err(MsrError::NotState(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(Self { rho })
    }

    /// Vector state `v ↦ vᵀ a v / vᵀv`.
    pub fn vector(v: &[f64]) -> Result<Self> {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(MsrError::NotState("vector state needs a nonzero finite vector".into()));
        }
        Ok(Self {
            rho: SymMatrix::outer(v).scale(1.0 / norm2),
        })
    }

    /// `ρ = 1/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            rho: SymMatrix::scalar(n, 1.0 / n as f64),
        }
    }

    /// `ρ = mᵀm / trace(mᵀm)` with Gaussian `m`.
    pub fn random(rng: &mut SplitMix64, n: usize) -> Self {
        let m = corpus::gaussian(rng, n, n);
        let g = m.transpose() * &m;
        let tr = g.trace();
        Self {
            rho: SymMatrix::from_nearly_symmetric(g / tr),
        }
    }

    pub fn rho(&self) -> &SymMatrix {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    pub fn eval(&self, a: &SymMatrix) -> Result<f64> {
        eval(self, a)
    }
}

/// `ω(a) = trace(ρ a)`.
pub fn eval(omega: &State, a: &SymMatrix) -> Result<f64> {
    check_dims(omega.n(), a.n())?;
    Ok(omega.rho.inner(a))
}

/// A general linear functional `φ(a) = trace(G a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFunctional {
    g: SymMatrix,
}

/// Numbers behind the state test: `‖φ‖` (dual norm, the sum of the
/// absolute eigenvalues of `G`) and `φ(1) = trace(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateCertificate {
    pub is_state: bool,
    pub is_positive: bool,
    pub dual_norm: f64,
    pub unit_value: f64,
}

impl LinearFunctional {
    pub fn new(g: SymMatrix) -> Self {
        Self { g }
    }

    pub fn representer(&self) -> &SymMatrix {
        &self.g
    }

    pub fn eval(&self, a: &SymMatrix) -> Result<f64> {
        check_dims(self.g.n(), a.n())?;
        Ok(self.g.inner(a))
    }

    /// `‖φ‖ = sup{|φ(a)| : ‖a‖ ≤ 1} = Σ|λ_i(G)|`.
    pub fn dual_norm(&self) -> f64 {
        self.g.eigenvalues().iter().map(|l| l.abs()).sum()
    }

    /// `φ(1)`
    pub fn unit_value(&self) -> f64 {
        self.g.trace()
    }

    /// `φ` is positive iff `‖φ‖ = φ(1)`.
    pub fn is_positive(&self) -> bool {
        let norm = self.dual_norm();
        (norm - self.unit_value()).abs() <= 1e-9 * norm.max(1.0)
    }
}

/// `φ ∈ S(A)` iff `‖φ‖ = φ(1) = 1`.
pub fn functional_is_state(phi: &LinearFunctional) -> StateCertificate {
    let dual_norm = phi.dual_norm();
    let unit_value = phi.unit_value();
    StateCertificate {
        is_state: (dual_norm - 1.0).abs() <= 1e-9 && (unit_value - 1.0).abs() <= 1e-9,
        is_positive: phi.is_positive(),
        dual_norm,
        unit_value,
    }
}

/// Result of deciding `a ≥ 0` through states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub positive: bool,
    /// `min ω(a)` over vector states, the smallest eigenvalue.
    pub exact_min: f64,
    /// `min ω(a)` over [`SAMPLED_STATES`] seeded random states.
    pub sampled_min: f64,
    /// Sampling never undercut the exact minimum.
    pub consistent: bool,
}

/// `a ∈ A⁺` iff `ω(a) ≥ 0` for every state.
///
/// The minimum over all states is attained at a vector state on an
/// eigenvector of the smallest eigenvalue. Random mixed states are
/// evaluated as a cross-check and can only produce larger values.
pub fn positivity_via_states(a: &SymMatrix, cfg: &ToleranceConfig) -> Result<PositivityVerdict> {
    let n = a.n();
    let eig = a.eig();
    let extremal = State::vector(&eig.vector(0))?;
    let exact_min = eval(&extremal, a)?;
    let mut rng = SplitMix64::new(SAMPLING_SEED);
    let mut sampled_min = f64::INFINITY;
    for _ in 0..SAMPLED_STATES {
        sampled_min = sampled_min.min(eval(&State::random(&mut rng, n), a)?);
    }
    let values = eig.values();
    let norm = values[0].abs().max(values[n - 1].abs());
    let scale = a.max_abs_entry().max(1.0) * n as f64;
    Ok(PositivityVerdict {
        positive: exact_min >= -cfg.psd_tol * norm.max(1.0),
        exact_min,
        sampled_min,
        consistent: sampled_min >= exact_min - 1e-12 * scale,
    })
}

/// `‖a‖ = sup{|ω(a)| : ω ∈ S(A)}`, attained at vector states on the extreme
/// eigenvectors.
pub fn norm_via_states(a: &SymMatrix) -> Result<f64> {
    let eig = a.eig();
    let lo = eval(&State::vector(&eig.vector(0))?, a)?;
    let hi = eval(&State::vector(&eig.vector(a.n() - 1))?, a)?;
    Ok(lo.abs().max(hi.abs()))
}

/// The measure a state induces on the points of a commutative block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedMeasure {
    pub weights: Vec<f64>,
}

impl InducedMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫_X f dm = Σ_x f(x) m({x})`.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        check_dims(self.weights.len(), f.len())?;
        Ok(self.weights.iter().zip(f).map(|(w, v)| w * v).sum())
    }
}

/// `m_ω({x}) = ω(P_x)`; weights above `-1e-12` are clamped to zero.
pub fn induced_measure(omega: &State, block: &CommutativeBlock) -> Result<InducedMeasure> {
    check_dims(omega.n(), block.n())?;
    let weights = block
        .projections()
        .iter()
        .map(|p| {
            let w = omega.rho.inner(p.matrix());
            if (-1e-12..0.0).contains(&w) {
                0.0
            } else {
                w
            }
        })
        .collect();
    Ok(InducedMeasure { weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::build_block;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn swap() -> SymMatrix {
        SymMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let half = State::maximally_mixed(2);
        assert_eq!(eval(&half, &SymMatrix::diag(&[1.0, 3.0])).unwrap(), 2.0);

        let e1 = State::vector(&[1.0, 0.0, 0.0]).unwrap();
        let a = SymMatrix::from_rows(&[[7.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 1.0]]).unwrap();
        assert_eq!(eval(&e1, &a).unwrap(), 7.0);

        let rho = State::new(SymMatrix::diag(&[0.3, 0.7]), &cfg()).unwrap();
        assert!((eval(&rho, &SymMatrix::diag(&[10.0, 0.0])).unwrap() - 3.0).abs() < 1e-15);
        assert!(eval(&rho, &SymMatrix::identity(3)).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(State::new(SymMatrix::diag(&[0.5, 0.6]), &cfg()).is_err());
        assert!(State::new(SymMatrix::diag(&[1.5, -0.5]), &cfg()).is_err());
        assert!(State::vector(&[0.0, 0.0]).is_err());
        let mut rng = SplitMix64::new(1);
        let s = State::random(&mut rng, 4);
        assert!(State::new(s.rho().clone(), &cfg()).is_ok());
    }

    #[test]
    fn state_certificates() {
        let c = functional_is_state(&LinearFunctional::new(SymMatrix::diag(&[0.5, 0.5])));
        assert!(c.is_state && c.is_positive);

        // eigenvalues 1.5 and −0.5: Σ|λ| = 2, trace 1
        let c = functional_is_state(&LinearFunctional::new(SymMatrix::diag(&[1.5, -0.5])));
        assert!(!c.is_state && !c.is_positive);
        assert!((c.dual_norm - 2.0).abs() < 1e-15);
        assert!((c.unit_value - 1.0).abs() < 1e-15);

        let c = functional_is_state(&LinearFunctional::new(SymMatrix::diag(&[2.0, 0.0])));
        assert!(!c.is_state && c.is_positive);
        assert_eq!(c.unit_value, 2.0);
    }

    #[test]
    fn dual_norm_is_attained() {
        // ‖φ‖ = φ(sign(G)) with ‖sign(G)‖ = 1.
        let g = SymMatrix::from_rows(&[[1.0, 2.0], [2.0, -3.0]]).unwrap();
        let phi = LinearFunctional::new(g.clone());
        let sign = g.eig().map(f64::signum);
        assert!((phi.eval(&sign).unwrap() - phi.dual_norm()).abs() < 1e-12);
    }

    #[test]
    fn positivity_examples() {
        assert!(
            positivity_via_states(&SymMatrix::diag(&[1.0, 0.0]), &cfg())
                .unwrap()
                .positive
        );
        let v = positivity_via_states(&SymMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap(), &cfg()).unwrap();
        assert!(!v.positive);
        assert!((v.exact_min + 1.0).abs() < 1e-14);
        assert!(v.consistent);
        assert!(positivity_via_states(&SymMatrix::identity(4), &cfg()).unwrap().positive);
    }

    #[test]
    fn norm_examples() {
        assert!((norm_via_states(&SymMatrix::diag(&[1.0, -2.0])).unwrap() - 2.0).abs() < 1e-15);
        assert!((norm_via_states(&swap()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(norm_via_states(&SymMatrix::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn induced_measure_examples() {
        let rho = State::new(SymMatrix::diag(&[0.3, 0.7]), &cfg()).unwrap();
        let block = build_block(&[SymMatrix::diag(&[1.0, 2.0])], &cfg()).unwrap();
        let m = induced_measure(&rho, &block).unwrap();
        assert!((m.weights[0] - 0.3).abs() < 1e-15 && (m.weights[1] - 0.7).abs() < 1e-15);

        let block = build_block(&[SymMatrix::diag(&[1.0, 2.0, 2.0, 5.0])], &cfg()).unwrap();
        let m = induced_measure(&State::maximally_mixed(4), &block).unwrap();
        for (w, cell) in m.weights.iter().zip(block.cells()) {
            assert!((w - cell.len() as f64 / 4.0).abs() < 1e-15);
        }

        // ρ = ½[[1,1],[1,1]] lives on the +1 eigenspace of the swap.
        let rho = State::vector(&[1.0, 1.0]).unwrap();
        let block = build_block(&[swap()], &cfg()).unwrap();
        let m = induced_measure(&rho, &block).unwrap();
        assert!((m.weights[0] - 1.0).abs() < 1e-15 && m.weights[1].abs() < 1e-15);

        let a = swap();
        let f = block.psi(&a).unwrap();
        assert!((eval(&rho, &a).unwrap() - m.integrate(&f).unwrap()).abs() < 1e-12);
    }
}

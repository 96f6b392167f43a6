//! Projective measurements: spectral families, joint and conditional
//! probabilities, conditioned and unrecorded states.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::fock::{lift_operator, DensityOperator, FockBasis, ModeOperator, QuantumState, C64};
use crate::linalg;
use crate::tol;

pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Smallest probability accepted as a conditioning event.
const MIN_PROBABILITY: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub projector: ModeOperator,
}

/// Spectral decomposition of a Hermitian observable.
#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    pub observable: ModeOperator,
    pub outcomes: Vec<Outcome>,
    /// Modes the observable acts on.
    pub support: Vec<usize>,
}

impl ProjectorFamily {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.eigenvalue).collect()
    }

    /// Largest deviation among completeness, idempotence, orthogonality and
    /// reconstruction of the observable.
    pub fn defect(&self) -> f64 {
        let d = self.observable.basis().dim();
        let mut sum = DMatrix::<C64>::zeros(d, d);
        let mut recon = DMatrix::<C64>::zeros(d, d);
        let mut worst: f64 = 0.0;
        for (i, o) in self.outcomes.iter().enumerate() {
            let p = o.projector.matrix();
            sum += p;
            recon += p * C64::new(o.eigenvalue, 0.0);
            worst = worst.max(linalg::max_abs(&(linalg::matmul(p, p) - p)));
            for other in &self.outcomes[i + 1..] {
                worst = worst.max(linalg::max_abs(&linalg::matmul(p, other.projector.matrix())));
            }
        }
        worst = worst.max(linalg::max_abs(&(sum - DMatrix::<C64>::identity(d, d))));
        worst.max(linalg::max_abs(&(recon - self.observable.matrix())))
    }
}

fn spectral_matrices(op: &ModeOperator, degeneracy_tol: f64) -> Result<Vec<(f64, DMatrix<C64>)>> {
    let dev = linalg::hermitian_deviation(op.matrix());
    if dev > tol::HERMITIAN {
        return Err(Error::NotHermitian(dev));
    }
    if !(degeneracy_tol >= 0.0) {
        return invalid("degeneracy tolerance must be non-negative");
    }
    let (vals, vecs) = linalg::eigh(op.matrix());
    let d = vals.len();
    let mut out = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && vals[end] - vals[end - 1] <= degeneracy_tol {
            end += 1;
        }
        let cols = vecs.columns(start, end - start);
        let proj = cols * cols.adjoint();
        let mean = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((mean, proj));
        start = end;
    }
    Ok(out)
}

/// Eigenvalues within `degeneracy_tol` (single linkage) share a projector.
pub fn spectral_projectors(op: &ModeOperator, degeneracy_tol: f64) -> Result<ProjectorFamily> {
    let outcomes = spectral_matrices(op, degeneracy_tol)?
        .into_iter()
        .map(|(eigenvalue, m)| Outcome { eigenvalue, projector: ModeOperator::new(op.basis().clone(), m).expect("same basis") })
        .collect();
    Ok(ProjectorFamily { observable: op.clone(), outcomes, support: (0..op.basis().n_modes()).collect() })
}

/// Spectral family of an observable on a subset of modes, lifted to `full`.
pub fn local_spectral_projectors(
    full: &FockBasis,
    modes: &[usize],
    local: &ModeOperator,
    degeneracy_tol: f64,
) -> Result<ProjectorFamily> {
    let fam = spectral_matrices(local, degeneracy_tol)?;
    let mut outcomes = Vec::with_capacity(fam.len());
    for (eigenvalue, m) in fam {
        let p = ModeOperator::new(local.basis().clone(), m)?;
        outcomes.push(Outcome { eigenvalue, projector: lift_operator(full, modes, &p)? });
    }
    let observable = lift_operator(full, modes, local)?;
    Ok(ProjectorFamily { observable, outcomes, support: modes.to_vec() })
}

/// `Tr(Π ρ)`.
pub fn outcome_probability<S: QuantumState + ?Sized>(state: &S, projector: &ModeOperator) -> Result<f64> {
    Ok(state.expect(projector)?.re)
}

/// `Π ρ Π / P`.
pub fn conditioned_state(rho: &DensityOperator, projector: &ModeOperator) -> Result<DensityOperator> {
    let p = outcome_probability(rho, projector)?;
    if p < MIN_PROBABILITY {
        return Err(Error::ZeroProbability(p));
    }
    DensityOperator::from_matrix_unchecked(rho.basis().clone(), rho.sandwich(projector).unscale(p))
}

/// `Tr(Π_A Π_B … ρ)` for outcomes of families on disjoint mode sets.
pub fn joint_probability(rho: &DensityOperator, events: &[(&ProjectorFamily, usize)]) -> Result<f64> {
    for (i, (fa, _)) in events.iter().enumerate() {
        for (fb, _) in &events[i + 1..] {
            if fa.support.iter().any(|m| fb.support.contains(m)) {
                return invalid("joint probability needs projectors on disjoint subsystems");
            }
        }
    }
    let Some(((first, k0), rest)) = events.split_first() else {
        return invalid("joint probability needs at least one projector");
    };
    let mut prod = outcome(first, *k0)?.clone();
    for (fam, k) in rest {
        prod = &prod * outcome(fam, *k)?;
    }
    Ok(rho.expect(&prod)?.re)
}

fn outcome(fam: &ProjectorFamily, k: usize) -> Result<&ModeOperator> {
    fam.outcomes
        .get(k)
        .map(|o| &o.projector)
        .ok_or_else(|| Error::InvalidParameter(format!("outcome {k} out of range ({} outcomes)", fam.len())))
}

/// `P(i|j) = Tr(Π_i^A Π_j^B ρ) / Tr(Π_j^B ρ)`.
pub fn conditional_probability(
    rho: &DensityOperator,
    a: (&ProjectorFamily, usize),
    b: (&ProjectorFamily, usize),
) -> Result<f64> {
    let pb = outcome_probability(rho, outcome(b.0, b.1)?)?;
    if pb < MIN_PROBABILITY {
        return Err(Error::ZeroProbability(pb));
    }
    Ok(joint_probability(rho, &[a, b])? / pb)
}

/// Mean and variance of `lambda` after outcome `j` of `omega`.
pub fn conditional_mean_variance(
    rho: &DensityOperator,
    lambda: &ModeOperator,
    omega: &ProjectorFamily,
    j: usize,
) -> Result<(f64, f64)> {
    let cond = conditioned_state(rho, outcome(omega, j)?)?;
    let mean = cond.expect(lambda)?.re;
    let var = crate::fock::variance(&cond, lambda)?;
    Ok((mean, var))
}

/// `Σ_j Π_j ρ Π_j`.
pub fn unrecorded_state(rho: &DensityOperator, omega: &ProjectorFamily) -> Result<DensityOperator> {
    if omega.observable.basis() != rho.basis() {
        return Err(Error::BasisMismatch("projector family and state bases differ".into()));
    }
    let d = rho.basis().dim();
    let mut m = DMatrix::<C64>::zeros(d, d);
    for o in &omega.outcomes {
        m += rho.sandwich(&o.projector);
    }
    DensityOperator::from_matrix_unchecked(rho.basis().clone(), m)
}

/// `Σ_j P_j <ΔΛ²>_j`, the outcome-averaged conditioned variance.
pub fn averaged_conditional_variance(rho: &DensityOperator, lambda: &ModeOperator, omega: &ProjectorFamily) -> Result<f64> {
    let mut acc = 0.0;
    for j in 0..omega.len() {
        let p = outcome_probability(rho, &omega.outcomes[j].projector)?;
        if p < MIN_PROBABILITY {
            continue;
        }
        acc += p * conditional_mean_variance(rho, lambda, omega, j)?.1;
    }
    Ok(acc)
}

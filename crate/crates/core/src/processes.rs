//! Atom–molecule Ramsey process, vacuum/one-boson interferometer and the
//! phase-state clock.
//!
//! Units have `ħ = 1`. Mode order in the atom–molecule problems is
//! `(atom, molecule, condensate)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::fock::{
    annihilation_op, number_op, DensityOperator, FockBasis, ModeOperator, QuantumState, StateVector, C64,
};
use crate::linalg;
use crate::states::{poisson, required_cutoff};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessResult {
    pub final_state: DensityOperator,
    pub observables: BTreeMap<String, f64>,
    /// `(label, duration)`; the free stage of the atom–molecule process is
    /// recorded by its phase `Δτ`.
    pub stages: Vec<(String, f64)>,
}

/// Resonant stage time `π/(2κ√N)` that splits `|A>|N>` evenly.
pub fn half_pulse_time(n: f64, kappa: f64) -> f64 {
    PI / (2.0 * kappa * n.sqrt())
}

fn populations(rho: &DensityOperator) -> (f64, f64, f64) {
    let b = rho.basis();
    let at = |occ: &[usize]| b.index_of(occ).expect("atom-molecule occupancy");
    let (ia, im) = (at(&[1, 0]), at(&[0, 1]));
    let m = rho.matrix();
    (m[(ia, ia)].re, m[(im, im)].re, m[(ia, im)].norm())
}

fn observables_of(rho: &DensityOperator) -> BTreeMap<String, f64> {
    let (pa, pm, coh) = populations(rho);
    BTreeMap::from([
        ("P_atom".to_string(), pa),
        ("P_molecule".to_string(), pm),
        ("coherence_atom_molecule".to_string(), coh),
    ])
}

/// Atom plus a condensate in the Fock state `|N>`: exact two-level evolution
/// of `A|A>|N> + B|M>|N-1>` through resonant, free and resonant stages.
pub fn dowling_fock(n: usize, phi: f64, kappa: f64) -> Result<ProcessResult> {
    if n < 1 {
        return invalid("the condensate needs at least one atom");
    }
    if !(kappa > 0.0) || !kappa.is_finite() || !phi.is_finite() {
        return invalid("kappa must be positive and phi finite");
    }
    let g = kappa * (n as f64).sqrt() / 2.0;
    let t = half_pulse_time(n as f64, kappa);
    let (c, s) = ((g * t).cos(), (g * t).sin());
    let i = C64::new(0.0, 1.0);
    let resonant = |(a, b): (C64, C64)| (a * c - i * s * b, b * c - i * s * a);
    let mut amp = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    amp = resonant(amp);
    amp.1 *= C64::from_polar(1.0, -phi);
    amp = resonant(amp);

    let full = FockBasis::new(vec![1, 1, n])?;
    let psi = StateVector::from_terms(&full, &[(amp.0, vec![1, 0, n]), (amp.1, vec![0, 1, n - 1])])?;
    let reduced = psi.to_density().partial_trace(&[0, 1])?;
    let mut observables = observables_of(&reduced);
    observables.insert("t_resonant".into(), t);
    Ok(ProcessResult {
        final_state: reduced,
        observables,
        stages: vec![("resonant".into(), t), ("free".into(), phi), ("resonant".into(), t)],
    })
}

/// Condensate in a mixture `Σ P_N |N><N|`; each component uses its own
/// half-pulse time and the recorded stage time is their weighted mean.
pub fn dowling_fock_mixture(weights: &[(usize, f64)], phi: f64, kappa: f64) -> Result<ProcessResult> {
    if weights.is_empty() || weights.iter().any(|&(_, p)| !(p >= 0.0)) {
        return invalid("mixture weights must be non-negative and non-empty");
    }
    let total: f64 = weights.iter().map(|w| w.1).sum();
    if !(total > 0.0) {
        return invalid("mixture weights must have a positive sum");
    }
    let parts: Vec<(f64, DensityOperator)> = weights
        .iter()
        .map(|&(n, p)| Ok((p / total, dowling_fock(n, phi, kappa)?.final_state)))
        .collect::<Result<_>>()?;
    let refs: Vec<(f64, &DensityOperator)> = parts.iter().map(|(p, r)| (*p, r)).collect();
    let rho = DensityOperator::mixture(&refs)?;
    let t_mean: f64 = weights.iter().map(|&(n, p)| p / total * half_pulse_time(n as f64, kappa)).sum();
    Ok(ProcessResult {
        observables: observables_of(&rho),
        final_state: rho,
        stages: vec![("resonant".into(), t_mean), ("free".into(), phi), ("resonant".into(), t_mean)],
    })
}

/// `Δ n_M + (κ/2)(b_M† b_A b_2 + h.c.)` in the frame rotating with the atoms.
pub fn dowling_hamiltonian(basis: &FockBasis, kappa: f64, delta: f64) -> Result<ModeOperator> {
    let ba = annihilation_op(basis, 0)?;
    let bm = annihilation_op(basis, 1)?;
    let b2 = annihilation_op(basis, 2)?;
    let forward = &(&bm.adjoint() * &ba) * &b2;
    let coupling = &(&forward + &forward.adjoint()) * (kappa / 2.0);
    Ok(&coupling + &(&number_op(basis, 1)? * delta))
}

/// `2 n_M + n_A + n_2`.
pub fn dowling_total_number(basis: &FockBasis) -> Result<ModeOperator> {
    Ok(&(&(&number_op(basis, 1)? * 2.0) + &number_op(basis, 0)?) + &number_op(basis, 2)?)
}

/// Full three-mode evolution from `|A><A| ⊗ Σ_n p_n |n><n|` with Poisson
/// weights of mean `n_bec`. Resonant stages last `π/(2κ√n_bec)`; the free
/// stage runs for `tau` at detuning `delta` with the coupling off.
pub fn dowling_full(
    n_bec: usize,
    kappa: f64,
    delta: f64,
    tau: f64,
    bec_cutoff: Option<usize>,
) -> Result<ProcessResult> {
    if n_bec < 1 {
        return invalid("the condensate needs at least one atom");
    }
    if !(kappa >= 0.0) || !kappa.is_finite() || !delta.is_finite() || !tau.is_finite() {
        return invalid("kappa must be non-negative and all times finite");
    }
    let mean = n_bec as f64;
    let cut = bec_cutoff.unwrap_or_else(|| required_cutoff(mean.sqrt()).max(n_bec + 1));
    if cut < n_bec + 1 {
        return Err(Error::Truncation(format!("condensate cutoff {cut} is below n_bec + 1")));
    }
    let weights: Vec<f64> = (0..=cut).map(|n| poisson(mean, n)).collect();
    let kept: f64 = weights.iter().sum();
    if 1.0 - kept > tol::TRUNCATION {
        return Err(Error::Truncation(format!("condensate cutoff {cut} drops Poisson weight {:e}", 1.0 - kept)));
    }
    let basis = FockBasis::new(vec![1, 1, cut])?;
    let probs: Vec<f64> = (0..basis.dim())
        .map(|i| {
            let o = basis.occupancy(i);
            if o[0] == 1 && o[1] == 0 { weights[o[2]] / kept } else { 0.0 }
        })
        .collect();
    let rho0 = DensityOperator::diagonal(&basis, &probs)?;
    let n_tot = dowling_total_number(&basis)?;
    let n_before = rho0.expect(&n_tot)?.re;

    let t = if kappa > 0.0 { half_pulse_time(mean, kappa) } else { 0.0 };
    let h_res = dowling_hamiltonian(&basis, kappa, 0.0)?;
    let h_free = dowling_hamiltonian(&basis, 0.0, delta)?;
    let stage = |h: &ModeOperator, dt: f64| ModeOperator::new(basis.clone(), linalg::unitary_evolution(h.matrix(), dt));
    let u_res = stage(&h_res, t)?;
    let u_free = stage(&h_free, tau)?;
    let rho = rho0.evolve(&u_res)?.evolve(&u_free)?.evolve(&u_res)?;

    let n_after = rho.expect(&n_tot)?.re;
    if (n_after - n_before).abs() > tol::TRACE {
        return Err(Error::Invariant(format!("total number drifted from {n_before} to {n_after}")));
    }
    let reduced = rho.partial_trace(&[0, 1])?;
    let mut observables = observables_of(&reduced);
    observables.insert("N_tot_initial".into(), n_before);
    observables.insert("N_tot_final".into(), n_after);
    observables.insert("t_resonant".into(), t);
    Ok(ProcessResult {
        final_state: reduced,
        observables,
        stages: vec![("resonant".into(), t), ("free".into(), tau), ("resonant".into(), t)],
    })
}

/// Two-mode beam splitter `|10> -> (|10> - i|01>)/√2`, `|01> -> (-i|10> + |01>)/√2` on cutoff-1 modes.
pub fn beam_splitter(basis: &FockBasis) -> Result<ModeOperator> {
    let a = annihilation_op(basis, 0)?;
    let b = annihilation_op(basis, 1)?;
    let hop = &(&a.adjoint() * &b) + &(&b.adjoint() * &a);
    ModeOperator::new(basis.clone(), linalg::unitary_evolution(hop.matrix(), PI / 4.0))
}

/// Input `(α|0> + β|1>)_A |0>_B` (or its number mixture), beam splitter, free
/// evolution with relative detuning `delta` on mode B, beam splitter.
pub fn vacuum_interferometer(alpha: C64, beta: C64, delta: f64, tau: f64, mixed_input: bool) -> Result<ProcessResult> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return invalid(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1"));
    }
    let basis = FockBasis::uniform(2, 1)?;
    let idx = |o: &[usize]| basis.index_of(o).expect("cutoff-1 occupancy");
    let rho0 = if mixed_input {
        let mut p = vec![0.0; basis.dim()];
        p[idx(&[0, 0])] = alpha.norm_sqr();
        p[idx(&[1, 0])] = beta.norm_sqr();
        DensityOperator::diagonal(&basis, &p)?
    } else {
        let mut v = DVector::from_element(basis.dim(), C64::new(0.0, 0.0));
        v[idx(&[0, 0])] = alpha;
        v[idx(&[1, 0])] = beta;
        StateVector::new(basis.clone(), v)?.to_density()
    };
    let bs = beam_splitter(&basis)?;
    let free_phase = DMatrix::from_fn(basis.dim(), basis.dim(), |i, j| {
        if i == j { C64::from_polar(1.0, -delta * tau * basis.occupancy(i)[1] as f64) } else { C64::new(0.0, 0.0) }
    });
    let free = ModeOperator::new(basis.clone(), free_phase)?;
    let rho = rho0.evolve(&bs)?.evolve(&free)?.evolve(&bs)?;
    let p = |o: &[usize]| rho.matrix()[(idx(o), idx(o))].re;
    let observables = BTreeMap::from([
        ("P00".to_string(), p(&[0, 0])),
        ("P10".to_string(), p(&[1, 0])),
        ("P01".to_string(), p(&[0, 1])),
        ("P11".to_string(), p(&[1, 1])),
    ]);
    let total: f64 = observables.values().sum();
    if (total - 1.0).abs() > tol::TRACE {
        return Err(Error::Invariant(format!("outcome probabilities sum to {total}")));
    }
    Ok(ProcessResult {
        final_state: rho,
        observables,
        stages: vec![("beam_splitter".into(), 0.0), ("free".into(), tau), ("beam_splitter".into(), 0.0)],
    })
}

/// `|θ_p> = (n_max+1)^{-1/2} Σ_n e^{i n θ_p} |n>` with `θ_p = 2πp/(n_max+1)`.
pub fn phase_state(n_max: usize, p: usize) -> Result<StateVector> {
    if p > n_max {
        return invalid("phase index exceeds n_max");
    }
    let theta = 2.0 * PI * p as f64 / (n_max + 1) as f64;
    let amps = DVector::from_fn(n_max + 1, |n, _| C64::from_polar(1.0, n as f64 * theta));
    StateVector::new(FockBasis::new(vec![n_max])?, amps)
}

/// `sin²((n_max+1)Δ/2) / ((n_max+1)² sin²(Δ/2))`, `Δ = θ_p − θ_q − ωΔt`.
pub fn clock_phase_probability(n_max: usize, p: usize, q: usize, omega_dt: f64) -> Result<f64> {
    if p > n_max || q > n_max {
        return invalid("phase index exceeds n_max");
    }
    let s1 = (n_max + 1) as f64;
    let d = 2.0 * PI * (p as f64 - q as f64) / s1 - omega_dt;
    let den = (d / 2.0).sin();
    if den.abs() < 1e-7 {
        // Dirichlet kernel near its peak, summed directly.
        let z: C64 = (0..=n_max).map(|n| C64::from_polar(1.0, n as f64 * d)).sum();
        return Ok(z.norm_sqr() / (s1 * s1));
    }
    let num = (s1 * d / 2.0).sin();
    Ok(num * num / (s1 * s1 * den * den))
}

/// `|<θ_q| exp(-i N ωΔt) |θ_p>|²` by evolving the phase state.
pub fn clock_phase_probability_direct(n_max: usize, p: usize, q: usize, omega_dt: f64) -> Result<f64> {
    let start = phase_state(n_max, p)?;
    let target = phase_state(n_max, q)?;
    let n = number_op(start.basis(), 0)?;
    let u = ModeOperator::new(start.basis().clone(), linalg::unitary_evolution(n.matrix(), omega_dt))?;
    Ok(target.inner(&start.evolve(&u)?)?.norm_sqr())
}

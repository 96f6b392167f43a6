//! Constructors for the named bosonic states.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::fock::{DensityOperator, FockBasis, ModeOperator, QuantumState, StateVector, C64};
use crate::spin::EulerAngles;
use crate::tol;

const ZERO: C64 = C64::new(0.0, 0.0);

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Smallest cutoff accepted for a coherent amplitude of modulus `abs_alpha`.
pub fn required_cutoff(abs_alpha: f64) -> usize {
    let a = abs_alpha.abs();
    (a * a + 8.0 * a + 10.0).ceil() as usize
}

/// Probability lost by truncating a coherent state at `n_max`.
pub fn coherent_truncation_deficit(abs_alpha: f64, n_max: usize) -> f64 {
    let a2 = abs_alpha * abs_alpha;
    let kept: f64 = (0..=n_max).map(|n| poisson(a2, n)).sum();
    (1.0 - kept).max(0.0)
}

/// Poisson weight `e^{-λ} λ^n / n!`.
pub fn poisson(lambda: f64, n: usize) -> f64 {
    if lambda == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + n as f64 * lambda.ln() - ln_factorial(n)).exp()
}

fn check_cutoff(abs_alpha: f64, n_max: usize) -> Result<()> {
    if !abs_alpha.is_finite() {
        return invalid("coherent amplitude must be finite");
    }
    let need = required_cutoff(abs_alpha);
    if n_max < need {
        return Err(Error::Truncation(format!("n_max = {n_max} is below the required cutoff {need} for |alpha| = {abs_alpha}")));
    }
    let deficit = coherent_truncation_deficit(abs_alpha, n_max);
    if deficit >= tol::TRUNCATION {
        return Err(Error::Truncation(format!("norm deficit {deficit:e} at n_max = {n_max}")));
    }
    Ok(())
}

/// Glauber state on a single mode with occupancies `0..=n_max`.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<StateVector> {
    let a = alpha.norm();
    check_cutoff(a, n_max)?;
    let basis = FockBasis::new(vec![n_max])?;
    let amps = DVector::from_fn(n_max + 1, |n, _| {
        if a == 0.0 {
            return if n == 0 { C64::new(1.0, 0.0) } else { ZERO };
        }
        let mag = (-a * a / 2.0 + n as f64 * a.ln() - 0.5 * ln_factorial(n)).exp();
        C64::from_polar(mag, n as f64 * alpha.arg())
    });
    StateVector::new(basis, amps)
}

/// Phase-averaged product of two coherent states of equal modulus, built
/// from its analytic matrix elements.
pub fn mixed_two_mode_coherent(abs_alpha: f64, n_max: usize) -> Result<DensityOperator> {
    check_cutoff(abs_alpha, n_max)?;
    let basis = FockBasis::uniform(2, n_max)?;
    let d = basis.dim();
    let a = abs_alpha;
    let log_a = a.ln();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for i in 0..d {
        let oi = basis.occupancy(i);
        let (n, p) = (oi[0], oi[1]);
        for j in 0..d {
            let oj = basis.occupancy(j);
            let (mm, q) = (oj[0], oj[1]);
            if n + p != mm + q {
                continue;
            }
            let val = if a == 0.0 {
                if n + p + mm + q == 0 { 1.0 } else { 0.0 }
            } else {
                (-2.0 * a * a + (n + mm + p + q) as f64 * log_a
                    - 0.5 * (ln_factorial(n) + ln_factorial(mm) + ln_factorial(p) + ln_factorial(q)))
                .exp()
            };
            m[(i, j)] = C64::new(val, 0.0);
        }
    }
    DensityOperator::normalized(basis, m)
}

/// `cosθ|N,0> + sinθ|0,N>` on the two-mode sector.
pub fn noon_state(n: usize, theta: f64) -> Result<StateVector> {
    if n < 1 {
        return invalid("NOON state needs N >= 1");
    }
    let basis = FockBasis::two_mode_sector(n);
    let mut amps = DVector::from_element(n + 1, ZERO);
    amps[n] += C64::new(theta.cos(), 0.0);
    amps[0] += C64::new(theta.sin(), 0.0);
    StateVector::new(basis, amps)
}

/// `(-c†)^N/√N! |0>` with `c = -cosθ e^{iχ/2} a - sinθ e^{-iχ/2} b`.
pub fn binomial_state(n: usize, theta: f64, chi: f64) -> Result<StateVector> {
    if n < 1 {
        return invalid("binomial state needs N >= 1");
    }
    let basis = FockBasis::two_mode_sector(n);
    let u = C64::from_polar(theta.cos(), -chi / 2.0);
    let v = C64::from_polar(theta.sin(), chi / 2.0);
    let ln_n = ln_factorial(n);
    let amps = DVector::from_fn(n + 1, |k, _| {
        let binom = (0.5 * (ln_n - ln_factorial(k) - ln_factorial(n - k))).exp();
        u.powu(k as u32) * v.powu((n - k) as u32) * binom
    });
    StateVector::new(basis, amps)
}

/// Euler angles of the mode pair in which the binomial state is `|N,0>`.
pub fn binomial_frame(theta: f64, chi: f64) -> EulerAngles {
    EulerAngles::new(-PI + chi, -2.0 * theta, -PI)
}

/// Relative phase angle `θ_p = 2πp/(N+1)`.
pub fn relative_phase_angle(n: usize, p: i64) -> f64 {
    2.0 * PI * p as f64 / (n as f64 + 1.0)
}

/// `(N+1)^{-1/2} Σ_k e^{ikθ_p} |N/2-k>_a |N/2+k>_b`.
pub fn relative_phase_state(n: usize, p: i64) -> Result<StateVector> {
    if n < 1 {
        return invalid("relative phase state needs N >= 1");
    }
    if (2 * p.unsigned_abs()) as usize > n {
        return invalid(format!("p = {p} outside the grid |p| <= N/2 for N = {n}"));
    }
    let basis = FockBasis::two_mode_sector(n);
    let theta = relative_phase_angle(n, p);
    let w = 1.0 / ((n + 1) as f64).sqrt();
    let amps = DVector::from_fn(n + 1, |na, _| {
        let k = n as f64 / 2.0 - na as f64;
        C64::from_polar(w, k * theta)
    });
    StateVector::new(basis, amps)
}

/// Euler angles of the frame whose spin components are
/// `J_x = S_z`, `J_y = sinθ_p S_x + cosθ_p S_y`, `J_z = -cosθ_p S_x + sinθ_p S_y`.
pub fn relative_phase_frame(n: usize, p: i64) -> EulerAngles {
    EulerAngles::new(-PI + relative_phase_angle(n, p), -PI / 2.0, -PI)
}

/// One-boson Bell states on the pair basis `{|00>,|01>,|10>,|11>}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneBosonBell {
    PsiPlus,
    PsiMinus,
}

pub fn bell_one_boson(kind: OneBosonBell) -> StateVector {
    let b = FockBasis::uniform(2, 1).expect("static basis");
    let s = match kind {
        OneBosonBell::PsiPlus => 1.0,
        OneBosonBell::PsiMinus => -1.0,
    };
    StateVector::from_terms(&b, &[(C64::new(1.0, 0.0), vec![0, 1]), (C64::new(s, 0.0), vec![1, 0])])
        .expect("static state")
}

/// Two-boson states on modes `(A+, A-, B+, B-)`, each with cutoff 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoBosonBell {
    Singlet,
    TripletPlus,
    TripletZero,
    TripletMinus,
}

pub fn bell_two_boson(kind: TwoBosonBell) -> StateVector {
    let b = FockBasis::uniform(4, 1).expect("static basis");
    let one = C64::new(1.0, 0.0);
    let terms: Vec<(C64, Vec<usize>)> = match kind {
        TwoBosonBell::Singlet => vec![(one, vec![1, 0, 0, 1]), (-one, vec![0, 1, 1, 0])],
        TwoBosonBell::TripletPlus => vec![(one, vec![1, 0, 1, 0])],
        TwoBosonBell::TripletZero => vec![(one, vec![1, 0, 0, 1]), (one, vec![0, 1, 1, 0])],
        TwoBosonBell::TripletMinus => vec![(one, vec![0, 1, 0, 1])],
    };
    StateVector::from_terms(&b, &terms).expect("static state")
}

/// `(|+++> + |--->)/√2` with `|+1>` stored as occupancy 1.
pub fn ghz_state() -> StateVector {
    let b = FockBasis::uniform(3, 1).expect("static basis");
    let one = C64::new(1.0, 0.0);
    StateVector::from_terms(&b, &[(one, vec![1, 1, 1]), (one, vec![0, 0, 0])]).expect("static state")
}

/// Pauli operators on one qubit mode of a cutoff-1 basis, in the `(+1, -1)`
/// eigenbasis of `σ_z` with `+1` stored as occupancy 1.
pub fn qubit_pauli(basis: &FockBasis, mode: usize, axis: usize) -> Result<ModeOperator> {
    basis.check_mode(mode)?;
    if basis.is_sector() || basis.cutoffs()[mode] != 1 {
        return invalid("qubit operators need a product basis with cutoff 1 on the mode");
    }
    if axis > 2 {
        return invalid("Pauli axis must be 0, 1 or 2");
    }
    let d = basis.dim();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for j in 0..d {
        let occ = basis.occupancy(j);
        let up = occ[mode] == 1;
        let mut flipped = occ.clone();
        flipped[mode] = 1 - occ[mode];
        let i = basis.index_of(&flipped).expect("flip stays in basis");
        match axis {
            0 => m[(i, j)] = C64::new(1.0, 0.0),
            // σ_y|+1> = i|-1>, σ_y|-1> = -i|+1>
            1 => m[(i, j)] = if up { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) },
            _ => m[(j, j)] = C64::new(if up { 1.0 } else { -1.0 }, 0.0),
        }
    }
    ModeOperator::new(basis.clone(), m)
}

/// Local components `(|0> + ω|1>)/√2` for `ω ∈ {1, i, -1, -i}`.
pub fn verstraete_components() -> Vec<StateVector> {
    let b = FockBasis::new(vec![1]).expect("static basis");
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)]
        .into_iter()
        .map(|w| {
            StateVector::new(b.clone(), DVector::from_vec(vec![C64::new(FRAC_1_SQRT_2, 0.0), w * FRAC_1_SQRT_2]))
                .expect("static state")
        })
        .collect()
}

/// `¼ Σ_ω |ψ_ω><ψ_ω| ⊗ |ψ_ω><ψ_ω|`.
pub fn verstraete_state() -> DensityOperator {
    let comps: Vec<DensityOperator> = verstraete_components()
        .iter()
        .map(|psi| {
            let r = psi.to_density();
            r.tensor(&r).expect("product basis")
        })
        .collect();
    let parts: Vec<(f64, &DensityOperator)> = comps.iter().map(|r| (0.25, r)).collect();
    DensityOperator::mixture(&parts).expect("valid mixture")
}

/// `¼|00><00| + ¼|11><11| + ½|Ψ+><Ψ+|`.
pub fn verstraete_state_alt() -> DensityOperator {
    let b = FockBasis::uniform(2, 1).expect("static basis");
    let vac = StateVector::from_occupancy(&b, &[0, 0]).expect("static").to_density();
    let full = StateVector::from_occupancy(&b, &[1, 1]).expect("static").to_density();
    let psi = bell_one_boson(OneBosonBell::PsiPlus).to_density();
    DensityOperator::mixture(&[(0.25, &vac), (0.25, &full), (0.5, &psi)]).expect("valid mixture")
}

/// `c0|1>_mol|0>_atom + c1|0>_mol|2>_atom`; mode 0 is the molecule.
pub fn molecular_dissociation(c0: C64, c1: C64) -> Result<StateVector> {
    let b = FockBasis::new(vec![1, 2])?;
    StateVector::from_terms(&b, &[(c0, vec![1, 0]), (c1, vec![0, 2])])
}

/// Pure or mixed state payload.
#[derive(Clone, Debug, PartialEq)]
pub enum StateRepr {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl QuantumState for StateRepr {
    fn basis(&self) -> &FockBasis {
        match self {
            StateRepr::Pure(s) => s.basis(),
            StateRepr::Mixed(r) => r.basis(),
        }
    }
    fn expect(&self, op: &ModeOperator) -> Result<C64> {
        match self {
            StateRepr::Pure(s) => s.expect(op),
            StateRepr::Mixed(r) => r.expect(op),
        }
    }
    fn density(&self) -> DensityOperator {
        match self {
            StateRepr::Pure(s) => s.to_density(),
            StateRepr::Mixed(r) => r.clone(),
        }
    }
    fn populations(&self) -> Vec<f64> {
        match self {
            StateRepr::Pure(s) => s.populations(),
            StateRepr::Mixed(r) => r.populations(),
        }
    }
    fn expect_product(&self, a: &ModeOperator, b: &ModeOperator) -> Result<C64> {
        match self {
            StateRepr::Pure(s) => s.expect_product(a, b),
            StateRepr::Mixed(r) => r.expect_product(a, b),
        }
    }
}

impl StateRepr {
    /// Same state on a basis with the same modes and larger cutoffs.
    pub fn embed(&self, target: &FockBasis) -> Result<StateRepr> {
        Ok(match self {
            StateRepr::Pure(s) => StateRepr::Pure(s.embed(target)?),
            StateRepr::Mixed(r) => StateRepr::Mixed(r.embed(target)?),
        })
    }
}

/// Recognised state labels.
pub const LABELS: [&str; 10] = [
    "fock",
    "coherent",
    "mixed_two_mode_coherent",
    "noon",
    "binomial",
    "relative_phase",
    "bell_one_boson",
    "bell_two_boson",
    "verstraete",
    "ghz",
];

/// Parameters accepted by [`NamedState::build`]. Unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateParams {
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub chi: Option<f64>,
    pub p: Option<i64>,
    pub abs_alpha: Option<f64>,
    /// Occupancy for `fock`, or variant selector for the Bell families.
    pub occupancy: Option<usize>,
    pub cutoff: Option<usize>,
}

/// A labelled state together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedState {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub state: StateRepr,
    /// Spin frame in which the state's defining modes are described.
    pub frame: Option<EulerAngles>,
}

fn need<T: Copy>(v: Option<T>, name: &str, label: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("state '{label}' requires --{name}")))
}

impl NamedState {
    pub fn build(label: &str, sp: &StateParams) -> Result<NamedState> {
        let mut params = BTreeMap::new();
        let mut frame = None;
        let state = match label {
            "fock" => {
                let n = need(sp.occupancy.or(sp.n), "n", label)?;
                params.insert("n".into(), n as f64);
                let basis = FockBasis::new(vec![sp.cutoff.unwrap_or(n).max(n)])?;
                StateRepr::Pure(StateVector::from_occupancy(&basis, &[n])?)
            }
            "coherent" => {
                let a = need(sp.abs_alpha, "abs-alpha", label)?;
                let phase = sp.theta.unwrap_or(0.0);
                params.insert("abs_alpha".into(), a);
                params.insert("theta".into(), phase);
                let n_max = sp.cutoff.unwrap_or_else(|| required_cutoff(a));
                StateRepr::Pure(coherent_state(C64::from_polar(a, phase), n_max)?)
            }
            "mixed_two_mode_coherent" => {
                let a = need(sp.abs_alpha, "abs-alpha", label)?;
                params.insert("abs_alpha".into(), a);
                let n_max = sp.cutoff.unwrap_or_else(|| required_cutoff(a));
                StateRepr::Mixed(mixed_two_mode_coherent(a, n_max)?)
            }
            "noon" => {
                let n = need(sp.n, "N", label)?;
                let t = need(sp.theta, "theta", label)?;
                params.insert("N".into(), n as f64);
                params.insert("theta".into(), t);
                frame = Some(EulerAngles::identity());
                StateRepr::Pure(noon_state(n, t)?)
            }
            "binomial" => {
                let n = need(sp.n, "N", label)?;
                let t = need(sp.theta, "theta", label)?;
                let c = sp.chi.unwrap_or(0.0);
                params.insert("N".into(), n as f64);
                params.insert("theta".into(), t);
                params.insert("chi".into(), c);
                frame = Some(binomial_frame(t, c));
                StateRepr::Pure(binomial_state(n, t, c)?)
            }
            "relative_phase" => {
                let n = need(sp.n, "N", label)?;
                let p = sp.p.unwrap_or(0);
                params.insert("N".into(), n as f64);
                params.insert("p".into(), p as f64);
                frame = Some(relative_phase_frame(n, p));
                StateRepr::Pure(relative_phase_state(n, p)?)
            }
            "bell_one_boson" => {
                let kind = match sp.occupancy.unwrap_or(0) {
                    0 => OneBosonBell::PsiMinus,
                    1 => OneBosonBell::PsiPlus,
                    k => return invalid(format!("bell_one_boson variant {k} (use 0 = Psi-, 1 = Psi+)")),
                };
                params.insert("variant".into(), sp.occupancy.unwrap_or(0) as f64);
                frame = Some(EulerAngles::identity());
                StateRepr::Pure(bell_one_boson(kind))
            }
            "bell_two_boson" => {
                let v = sp.occupancy.unwrap_or(0);
                let kind = match v {
                    0 => TwoBosonBell::Singlet,
                    1 => TwoBosonBell::TripletPlus,
                    2 => TwoBosonBell::TripletZero,
                    3 => TwoBosonBell::TripletMinus,
                    k => return invalid(format!("bell_two_boson variant {k} (use 0..=3)")),
                };
                params.insert("variant".into(), v as f64);
                StateRepr::Pure(bell_two_boson(kind))
            }
            "verstraete" => {
                frame = Some(EulerAngles::identity());
                StateRepr::Mixed(verstraete_state())
            }
            "ghz" => StateRepr::Pure(ghz_state()),
            other => return Err(Error::InvalidParameter(format!("unknown state label '{other}'"))),
        };
        Ok(NamedState { label: label.to_string(), params, state, frame })
    }
}

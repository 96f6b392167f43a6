//! Entanglement tests with uniform verdicts, CHSH and the GHZ contradiction.
//!
//! Every test reports `lhs`, `rhs` and a `margin` that is positive exactly
//! when the inequality holds. A test is triggered when the margin exceeds the
//! guard band. Tests whose bound involves a vanishing quantity may be flagged
//! inapplicable and then never trigger.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fock::{
    lift_operator, quadrature_p, quadrature_x, variance, FockBasis, ModeOperator, QuantumState, StateVector, C64,
};
use crate::linalg;
use crate::spin::{bloch_and_covariance, spin_frame, SpinFrame};
use crate::states::{ghz_state, qubit_pauli};
use crate::tol;

const AXES: [char; 3] = ['x', 'y', 'z'];

/// Direction of a strict inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Less,
    Greater,
}

/// Outcome of one test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessVerdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for `<` tests and `lhs - rhs` for `>` tests.
    pub margin: f64,
    pub comparison: Comparison,
    pub triggered: bool,
    pub applicable: bool,
    /// False for quantities reported alongside the tests that do not by
    /// themselves signal entanglement.
    pub witness: bool,
    pub guard: f64,
    /// The inequality in words.
    pub paper_eq: String,
}

impl WitnessVerdict {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, comparison: Comparison, eq: impl Into<String>) -> Self {
        let margin = match comparison {
            Comparison::Less => rhs - lhs,
            Comparison::Greater => lhs - rhs,
        };
        let guard = tol::GUARD;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            comparison,
            triggered: margin > guard,
            applicable: true,
            witness: true,
            guard,
            paper_eq: eq.into(),
        }
    }

    pub fn less(name: impl Into<String>, lhs: f64, rhs: f64, eq: impl Into<String>) -> Self {
        Self::new(name, lhs, rhs, Comparison::Less, eq)
    }

    pub fn greater(name: impl Into<String>, lhs: f64, rhs: f64, eq: impl Into<String>) -> Self {
        Self::new(name, lhs, rhs, Comparison::Greater, eq)
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self.triggered = self.applicable && self.margin > guard;
        self
    }

    pub fn inapplicable(mut self) -> Self {
        self.applicable = false;
        self.triggered = false;
        self
    }

    pub fn not_a_witness(mut self) -> Self {
        self.witness = false;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Triggered and counted as evidence of entanglement.
    pub fn signals_entanglement(&self) -> bool {
        self.witness && self.triggered
    }
}

fn re(state: &(impl QuantumState + ?Sized), op: &ModeOperator) -> Result<f64> {
    Ok(state.expect(op)?.re)
}

/// Fails unless every mode pair of `frame` keeps its total occupancy within
/// both cutoffs, which makes products of spin components exact.
pub fn check_spin_headroom<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<()> {
    let basis = state.basis();
    if basis.is_sector() {
        return Ok(());
    }
    for &(a, b) in &frame.pairs {
        let limit = basis.cutoffs()[a].min(basis.cutoffs()[b]);
        let p = state.population_where(&|o| o[a] + o[b] > limit);
        if p > tol::TRUNCATION {
            return Err(Error::Truncation(format!(
                "population {p:e} of modes ({a}, {b}) exceeds the per-mode cutoff {limit}"
            )));
        }
    }
    Ok(())
}

/// Fails when any listed mode has population on its top level.
pub fn check_ladder_headroom<S: QuantumState + ?Sized>(state: &S, modes: &[usize]) -> Result<()> {
    let basis = state.basis();
    for &m in modes {
        basis.check_mode(m)?;
        let c = basis.cutoffs()[m];
        let p = state.population_where(&|o| o[m] >= c);
        if p > tol::TRUNCATION {
            return Err(Error::Truncation(format!("mode {m} has population {p:e} at its cutoff {c}")));
        }
    }
    Ok(())
}

/// Pairwise, orthogonal-component, `ξ²` and planar spin-squeezing tests.
pub fn spin_squeezing_report<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<Vec<WitnessVerdict>> {
    check_spin_headroom(state, frame)?;
    let report = bloch_and_covariance(state, frame)?;
    let v = report.variances();
    let m = report.mean;
    let s = frame.symbol;
    let mut out = Vec::with_capacity(14);
    for xi in 0..3 {
        for zeta in 0..3 {
            if xi == zeta {
                continue;
            }
            let (a, b) = (AXES[xi], AXES[zeta]);
            out.push(WitnessVerdict::less(
                format!("spin_squeeze_{s}{a}_vs_{s}{b}"),
                v[xi],
                0.5 * m[zeta].abs(),
                format!("Var({s}{a}) < |<{s}{b}>|/2"),
            ));
        }
    }
    for xi in 0..3 {
        let a = AXES[xi];
        let perp2: f64 = (0..3).filter(|&k| k != xi).map(|k| m[k] * m[k]).sum();
        out.push(WitnessVerdict::less(
            format!("spin_squeeze_{s}{a}_vs_perp"),
            v[xi],
            0.5 * perp2.sqrt(),
            format!("Var({s}{a}) < sqrt(sum of squared perpendicular means)/2"),
        ));
    }
    for xi in 0..3 {
        let a = AXES[xi];
        let perp2: f64 = (0..3).filter(|&k| k != xi).map(|k| m[k] * m[k]).sum();
        let eq = format!("Var({s}{a})/B^2 < 1/(2B), B = perpendicular Bloch length");
        let name = format!("xi_squared_{s}{a}");
        let verdict = if perp2 > tol::ZERO_GUARD {
            WitnessVerdict::less(name, v[xi] / perp2, 0.5 / perp2.sqrt(), eq)
        } else {
            WitnessVerdict::less(name, f64::INFINITY, 0.0, eq).inapplicable()
        };
        out.push(verdict);
    }
    let half_x = 0.5 * m[0].abs();
    let mut par = WitnessVerdict::less(
        "planar_parallel",
        v[0] + v[1],
        half_x,
        format!("Var({s}x)+Var({s}y) < |<{s}x>|/2"),
    );
    let mut perp = WitnessVerdict::greater("planar_perp", v[2], half_x, format!("Var({s}z) > |<{s}x>|/2")).not_a_witness();
    if m[0].abs() <= tol::ZERO_GUARD {
        par = par.inapplicable();
        perp = perp.inapplicable();
    }
    out.push(par);
    out.push(perp);
    Ok(out)
}

/// `Var(S_x) + Var(S_y) < <N>/2`.
pub fn hillery_variance_test<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<WitnessVerdict> {
    check_spin_headroom(state, frame)?;
    let s = frame.symbol;
    let lhs = variance(state, &frame.sx)? + variance(state, &frame.sy)?;
    let rhs = 0.5 * re(state, &frame.n_total)?;
    Ok(WitnessVerdict::less("hillery_variance", lhs, rhs, format!("Var({s}x)+Var({s}y) < <N>/2")))
}

/// `Var(S_x) + Var(S_y) < |<S_z>|`, which no state satisfies.
pub fn spin_variance_sum_test<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<WitnessVerdict> {
    check_spin_headroom(state, frame)?;
    let s = frame.symbol;
    let lhs = variance(state, &frame.sx)? + variance(state, &frame.sy)?;
    let rhs = re(state, &frame.sz)?.abs();
    Ok(WitnessVerdict::less(
        format!("spin_variance_sum_vs_{s}z"),
        lhs,
        rhs,
        format!("Var({s}x)+Var({s}y) < |<{s}z>|"),
    )
    .not_a_witness())
}

/// Truncated `a^m b†^n`.
pub fn transfer_op(basis: &FockBasis, a: usize, b: usize, m: usize, n: usize) -> Result<ModeOperator> {
    basis.check_mode(a)?;
    basis.check_mode(b)?;
    if a == b {
        return invalid("transfer operator needs two distinct modes");
    }
    let d = basis.dim();
    let mut mat = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for j in 0..d {
        let occ = basis.occupancy(j);
        if occ[a] < m {
            continue;
        }
        let mut to = occ.clone();
        to[a] -= m;
        to[b] += n;
        if let Some(i) = basis.index_of(&to) {
            let w = falling(occ[a], m) * falling(occ[b] + n, n);
            mat[(i, j)] = C64::new(w.sqrt(), 0.0);
        }
    }
    ModeOperator::new(basis.clone(), mat)
}

/// `n (n-1) ... (n-k+1)`, zero when `k > n`.
fn falling(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64).product()
}

/// Diagonal `a†^k a^k` for each mode and power in `factors`.
pub fn normal_power_op(basis: &FockBasis, factors: &[(usize, usize)]) -> Result<ModeOperator> {
    for &(mode, _) in factors {
        basis.check_mode(mode)?;
    }
    let d = basis.dim();
    let mut mat = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for i in 0..d {
        let occ = basis.occupancy(i);
        let w: f64 = factors.iter().map(|&(mode, k)| falling(occ[mode], k)).product();
        mat[(i, i)] = C64::new(w, 0.0);
    }
    ModeOperator::new(basis.clone(), mat)
}

/// `|<a^m b†^n>|² > <a†^m a^m b†^n b^n>`, or `> 0` in SSR mode.
pub fn hillery_correlation_test<S: QuantumState + ?Sized>(
    state: &S,
    a: usize,
    b: usize,
    m: usize,
    n: usize,
    ssr_mode: bool,
) -> Result<WitnessVerdict> {
    if m == 0 || n == 0 {
        return invalid("correlation powers must be at least 1");
    }
    let basis = state.basis();
    basis.check_mode(a)?;
    basis.check_mode(b)?;
    if basis.cutoffs()[a] < m || basis.cutoffs()[b] < n {
        return Err(Error::Truncation(format!("cutoffs too small for a^{m} b†^{n}")));
    }
    let lhs = state.expect(&transfer_op(basis, a, b, m, n)?)?.norm_sqr();
    if ssr_mode {
        return Ok(WitnessVerdict::greater(
            format!("ssr_correlation_m{m}_n{n}"),
            lhs,
            0.0,
            format!("|<a^{m} b+^{n}>|^2 > 0"),
        )
        .with_guard(tol::ZERO_GUARD));
    }
    let rhs = re(state, &normal_power_op(basis, &[(a, m), (b, n)])?)?;
    Ok(WitnessVerdict::greater(
        format!("hillery_correlation_m{m}_n{n}"),
        lhs,
        rhs,
        format!("|<a^{m} b+^{n}>|^2 > <a+^{m} a^{m} b+^{n} b^{n}>"),
    ))
}

/// `|<b a†>|² = <S_x>² + <S_y>² > 0`.
pub fn bloch_coherence<S: QuantumState + ?Sized>(state: &S, a: usize, b: usize) -> Result<WitnessVerdict> {
    let f = spin_frame(state.basis(), a, b)?;
    let (x, y) = (re(state, &f.sx)?, re(state, &f.sy)?);
    Ok(WitnessVerdict::greater("bloch_coherence", x * x + y * y, 0.0, "|<b a+>|^2 > 0").with_guard(tol::ZERO_GUARD))
}

/// `Var(x_A + x_B) + Var(p_A - p_B) < 2`.
pub fn duan_test<S: QuantumState + ?Sized>(state: &S, a: usize, b: usize) -> Result<WitnessVerdict> {
    let basis = state.basis();
    if basis.is_sector() {
        return Err(Error::Unsupported("quadratures on a fixed-number sector".into()));
    }
    if a == b {
        return invalid("the quadrature test needs two distinct modes");
    }
    check_ladder_headroom(state, &[a, b])?;
    let u = &quadrature_x(basis, a)? + &quadrature_x(basis, b)?;
    let v = &quadrature_p(basis, a)? - &quadrature_p(basis, b)?;
    let lhs = variance(state, &u)? + variance(state, &v)?;
    Ok(WitnessVerdict::less("duan", lhs, 2.0, "Var(xA+xB)+Var(pA-pB) < 2"))
}

/// `Var(S_z) < (<S_x>² + <S_y>²)/<N>`; inapplicable with no in-plane Bloch vector.
pub fn sorensen_test<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<WitnessVerdict> {
    check_spin_headroom(state, frame)?;
    let sym = frame.symbol;
    let eq = format!("Var({sym}z) < (<{sym}x>^2+<{sym}y>^2)/<N>");
    let (x, y) = (re(state, &frame.sx)?, re(state, &frame.sy)?);
    let perp = x * x + y * y;
    let lhs = variance(state, &frame.sz)?;
    if perp <= tol::ZERO_GUARD {
        return Ok(WitnessVerdict::less("sorensen", lhs, 0.0, eq).inapplicable());
    }
    let n = re(state, &frame.n_total)?;
    Ok(WitnessVerdict::less("sorensen", lhs, perp / n, eq))
}

/// Spin and Hillery tests for two pairs `A = (0, 1)`, `B = (2, 3)`.
pub fn pair_mode_tests<S: QuantumState + ?Sized>(state: &S) -> Result<Vec<WitnessVerdict>> {
    let basis = state.basis();
    if basis.is_sector() || basis.n_modes() != 4 {
        return invalid("pair tests need a four-mode product basis");
    }
    let fa = spin_frame(basis, 0, 1)?;
    let fb = spin_frame(basis, 2, 3)?;
    for f in [&fa, &fb] {
        check_spin_headroom(state, f)?;
    }
    let i = C64::new(0.0, 1.0);
    let plus = |f: &SpinFrame| &f.sx + &f.sy.scale(i);
    let (pa, pb) = (plus(&fa), plus(&fb));
    let (ma, mb) = (pa.adjoint(), pb.adjoint());
    let lhs = state.expect(&(&pa * &mb))?.norm_sqr();
    let rhs = re(state, &(&(&pa * &ma) * &(&pb * &mb)))?;
    let mut out = vec![WitnessVerdict::greater(
        "pair_spin_entanglement",
        lhs,
        rhs,
        "|<S+A S-B>|^2 > <S+A S-A S+B S-B>",
    )];
    for (ia, a) in [0usize, 1].into_iter().enumerate() {
        for (jb, b) in [2usize, 3].into_iter().enumerate() {
            out.push(
                hillery_correlation_test(state, a, b, 1, 1, false)?
                    .renamed(format!("pair_hillery_i{}_j{}", ia + 1, jb + 1)),
            );
        }
    }
    Ok(out)
}

fn unit_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let n = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(n > 1e-12) || !n.is_finite() {
        return invalid("axis must be a non-zero finite vector");
    }
    Ok(axis.map(|c| c / n))
}

/// `σ·n` on levels `{0, 1}` of `mode` (occupancy 1 is `+1`), `-1` above.
pub fn mode_qubit_observable(basis: &FockBasis, mode: usize, axis: [f64; 3]) -> Result<ModeOperator> {
    basis.check_mode(mode)?;
    if basis.is_sector() {
        return Err(Error::Unsupported("local observables on a fixed-number sector".into()));
    }
    let c = basis.cutoffs()[mode];
    if c == 0 {
        return invalid("mode needs at least two levels");
    }
    let [nx, ny, nz] = unit_axis(axis)?;
    let local_basis = FockBasis::new(vec![c])?;
    let mut m = DMatrix::from_element(c + 1, c + 1, C64::new(0.0, 0.0));
    m[(0, 0)] = C64::new(-nz, 0.0);
    m[(1, 1)] = C64::new(nz, 0.0);
    m[(0, 1)] = C64::new(nx, ny);
    m[(1, 0)] = C64::new(nx, -ny);
    for k in 2..=c {
        m[(k, k)] = C64::new(-1.0, 0.0);
    }
    lift_operator(basis, &[mode], &ModeOperator::new(local_basis, m)?)
}

/// `2S·n` on the one-boson states of a pair (`|0,1>` is `+1`), `-1` elsewhere.
pub fn pair_qubit_observable(basis: &FockBasis, a: usize, b: usize, axis: [f64; 3]) -> Result<ModeOperator> {
    if basis.is_sector() {
        return Err(Error::Unsupported("local observables on a fixed-number sector".into()));
    }
    if a == b {
        return invalid("pair observable needs two distinct modes");
    }
    let [nx, ny, nz] = unit_axis(axis)?;
    let local = basis.sub_basis(&[a, b])?;
    let d = local.dim();
    let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for k in 0..d {
        m[(k, k)] = C64::new(-1.0, 0.0);
    }
    if let (Some(down), Some(up)) = (local.index_of(&[1, 0]), local.index_of(&[0, 1])) {
        m[(down, down)] = C64::new(-nz, 0.0);
        m[(up, up)] = C64::new(nz, 0.0);
        m[(down, up)] = C64::new(nx, ny);
        m[(up, down)] = C64::new(nx, -ny);
    }
    lift_operator(basis, &[a, b], &ModeOperator::new(local, m)?)
}

fn check_dichotomic(op: &ModeOperator, label: &str) -> Result<()> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian(linalg::hermitian_deviation(op.matrix())));
    }
    let ev = linalg::eigvalsh(op.matrix());
    let lo = ev.first().copied().unwrap_or(0.0);
    let hi = ev.last().copied().unwrap_or(0.0);
    if lo < -1.0 - tol::GUARD || hi > 1.0 + tol::GUARD {
        return invalid(format!("observable {label} has spectrum [{lo}, {hi}] outside [-1, 1]"));
    }
    Ok(())
}

/// `<A1 B1> + <A1 B2> + <A2 B1> - <A2 B2>`.
pub fn chsh_sum<S: QuantumState + ?Sized>(
    state: &S,
    a1: &ModeOperator,
    a2: &ModeOperator,
    b1: &ModeOperator,
    b2: &ModeOperator,
) -> Result<f64> {
    for (op, label) in [(a1, "A1"), (a2, "A2"), (b1, "B1"), (b2, "B2")] {
        if op.basis() != state.basis() {
            return Err(Error::BasisMismatch(format!("observable {label} and state bases differ")));
        }
        check_dichotomic(op, label)?;
    }
    for a in [a1, a2] {
        for b in [b1, b2] {
            let c = a.commutator(b).max_abs();
            if c > tol::TRACE {
                return invalid(format!("A and B observables do not commute (max |[A,B]| = {c:e})"));
            }
        }
    }
    let e = |a: &ModeOperator, b: &ModeOperator| re(state, &(a * b));
    Ok(e(a1, b1)? + e(a1, b2)? + e(a2, b1)? - e(a2, b2)?)
}

/// `|S| > 2` for dichotomic observables with spectra in `[-1, 1]`.
pub fn chsh_value<S: QuantumState + ?Sized>(
    state: &S,
    a1: &ModeOperator,
    a2: &ModeOperator,
    b1: &ModeOperator,
    b2: &ModeOperator,
) -> Result<WitnessVerdict> {
    let s = chsh_sum(state, a1, a2, b1, b2)?;
    Ok(WitnessVerdict::greater("chsh", s.abs(), 2.0, "|<A1B1>+<A1B2>+<A2B1>-<A2B2>| > 2"))
}

/// Axes `(a1, a2, b1, b2)` that give `|S| = 2√2` on the singlet.
pub fn chsh_optimal_axes() -> [[f64; 3]; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [[r, 0.0, r], [-r, 0.0, r], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
}

/// CHSH with mode-qubit observables on modes `a` and `b`.
pub fn chsh_modes<S: QuantumState + ?Sized>(
    state: &S,
    a: usize,
    b: usize,
    axes: &[[f64; 3]; 4],
) -> Result<WitnessVerdict> {
    let basis = state.basis();
    let ops: Vec<ModeOperator> = [(a, axes[0]), (a, axes[1]), (b, axes[2]), (b, axes[3])]
        .into_iter()
        .map(|(mode, axis)| mode_qubit_observable(basis, mode, axis))
        .collect::<Result<_>>()?;
    chsh_value(state, &ops[0], &ops[1], &ops[2], &ops[3])
}

/// Eigenvalue checks on the GHZ state and the hidden-variable enumeration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GhzReport {
    /// Products `XYY`, `YXY`, `YYX`, `XXX`.
    pub labels: [&'static str; 4],
    pub expected: [f64; 4],
    pub eigenvalues: [f64; 4],
    pub residuals: [f64; 4],
    pub assignments_checked: usize,
    pub consistent_assignments: usize,
}

pub fn ghz_hvt_contradiction() -> Result<GhzReport> {
    let psi = ghz_state();
    let basis = psi.basis().clone();
    let pauli = |mode: usize, axis: usize| qubit_pauli(&basis, mode, axis);
    let products: [[usize; 3]; 4] = [[0, 1, 1], [1, 0, 1], [1, 1, 0], [0, 0, 0]];
    let expected = [-1.0, -1.0, -1.0, 1.0];
    let mut eigenvalues = [0.0; 4];
    let mut residuals = [0.0; 4];
    for (k, axes) in products.iter().enumerate() {
        let op = &(&pauli(0, axes[0])? * &pauli(1, axes[1])?) * &pauli(2, axes[2])?;
        let image = psi.apply(&op)?;
        eigenvalues[k] = linalg::sandwich(psi.amplitudes(), op.matrix()).re;
        let target = psi.amplitudes() * C64::new(expected[k], 0.0);
        residuals[k] = (image - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    // Bit 3*K + α holds M_α^K for party K and axis α (x = 0, y = 1, z = 2).
    let value = |bits: u32, party: usize, axis: usize| if bits >> (3 * party + axis) & 1 == 1 { -1 } else { 1 };
    let total = 1usize << 9;
    let consistent = (0..total as u32)
        .filter(|&bits| {
            products.iter().zip(expected).all(|(axes, e)| {
                let p: i32 = (0..3).map(|k| value(bits, k, axes[k])).product();
                p as f64 == e
            })
        })
        .count();
    Ok(GhzReport {
        labels: ["XYY", "YXY", "YYX", "XXX"],
        expected,
        eigenvalues,
        residuals,
        assignments_checked: total,
        consistent_assignments: consistent,
    })
}

/// `(|<Ω_A* Ω_B>|², <|Ω_A|² |Ω_B|²>)` for a discrete hidden-variable ensemble.
pub fn hvt_correlation(weights: &[f64], omega_a: &[C64], omega_b: &[C64]) -> Result<(f64, f64)> {
    check_weights(weights, &[omega_a.len(), omega_b.len()])?;
    let total: f64 = weights.iter().sum();
    let mut corr = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    for ((&p, wa), wb) in weights.iter().zip(omega_a).zip(omega_b) {
        corr += wa.conj() * wb * (p / total);
        bound += p / total * wa.norm_sqr() * wb.norm_sqr();
    }
    Ok((corr.norm_sqr(), bound))
}

/// `(Σ P C · Σ P D, (Σ P √(CD))²)`; the first never falls below the second.
pub fn sum_inequality(p: &[f64], c: &[f64], d: &[f64]) -> Result<(f64, f64)> {
    check_weights(p, &[c.len(), d.len()])?;
    if c.iter().chain(d).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return invalid("sum inequality needs non-negative finite terms");
    }
    let pc: f64 = p.iter().zip(c).map(|(p, c)| p * c).sum();
    let pd: f64 = p.iter().zip(d).map(|(p, d)| p * d).sum();
    let root: f64 = p.iter().zip(c).zip(d).map(|((p, c), d)| p * (c * d).sqrt()).sum();
    Ok((pc * pd, root * root))
}

/// Integral form of [`sum_inequality`] on `[lo, hi]` by composite Simpson
/// quadrature with `intervals` (even) sub-intervals.
pub fn integral_inequality(
    p: impl Fn(f64) -> f64,
    c: impl Fn(f64) -> f64,
    d: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    intervals: usize,
) -> Result<(f64, f64)> {
    if intervals < 2 || intervals % 2 != 0 || !(hi > lo) {
        return invalid("Simpson quadrature needs an even interval count and hi > lo");
    }
    let h = (hi - lo) / intervals as f64;
    let mut w = Vec::with_capacity(intervals + 1);
    let (mut cs, mut ds) = (Vec::new(), Vec::new());
    for k in 0..=intervals {
        let x = lo + h * k as f64;
        let simpson = if k == 0 || k == intervals { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        w.push(simpson * h / 3.0 * p(x));
        cs.push(c(x));
        ds.push(d(x));
    }
    sum_inequality(&w, &cs, &ds)
}

fn check_weights(weights: &[f64], lens: &[usize]) -> Result<()> {
    if weights.is_empty() || lens.iter().any(|&l| l != weights.len()) {
        return invalid("weights and values must have the same non-zero length");
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) || weights.iter().sum::<f64>() <= 0.0 {
        return invalid("weights must be non-negative with a positive sum");
    }
    Ok(())
}

/// Two-mode battery on the pair of `frame`: spin squeezing, Hillery variance,
/// Sorensen, the variance-sum check, correlation tests, Bloch coherence and,
/// on product bases, the quadrature and CHSH tests.
pub fn two_mode_battery<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<Vec<WitnessVerdict>> {
    let (a, b) = *frame
        .pairs
        .first()
        .ok_or_else(|| Error::InvalidParameter("frame has no mode pair".into()))?;
    let mut out = spin_squeezing_report(state, frame)?;
    out.push(hillery_variance_test(state, frame)?);
    out.push(sorensen_test(state, frame)?);
    out.push(spin_variance_sum_test(state, frame)?);
    out.push(hillery_correlation_test(state, a, b, 1, 1, false)?);
    out.push(hillery_correlation_test(state, a, b, 1, 1, true)?);
    out.push(bloch_coherence(state, a, b)?);
    if !state.basis().is_sector() {
        out.push(duan_test(state, a, b)?);
        out.push(chsh_modes(state, a, b, &chsh_optimal_axes())?);
    }
    Ok(out)
}

/// Singlet `(|01> - |10>)/√2` on two qubit modes.
pub fn singlet_state() -> StateVector {
    crate::states::bell_one_boson(crate::states::OneBosonBell::PsiMinus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{DensityOperator, FockBasis, StateVector};
    use crate::spin::{principal_frame, spin_frame};
    use crate::states::{bell_one_boson, binomial_state, mixed_two_mode_coherent, noon_state, OneBosonBell};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, SQRT_2};

    fn find<'a>(v: &'a [WitnessVerdict], name: &str) -> &'a WitnessVerdict {
        v.iter().find(|w| w.name == name).unwrap_or_else(|| panic!("missing {name}"))
    }

    #[test]
    fn binomial_triggers_original_frame_test() {
        let psi = binomial_state(4, FRAC_PI_6, 0.0).unwrap();
        let f = spin_frame(psi.basis(), 0, 1).unwrap();
        let r = spin_squeezing_report(&psi, &f).unwrap();
        let t = find(&r, "spin_squeeze_Sx_vs_Sz");
        assert!((t.lhs - 0.25).abs() < 1e-12 && (t.rhs - 0.5).abs() < 1e-12);
        assert!(t.triggered);
    }

    #[test]
    fn noon_principal_frame_has_no_trigger() {
        let psi = noon_state(4, FRAC_PI_6).unwrap();
        let s = spin_frame(psi.basis(), 0, 1).unwrap();
        let pf = principal_frame(&psi, &s).unwrap();
        let r = spin_squeezing_report(&psi, &pf.j_frame).unwrap();
        assert!(r.iter().all(|v| !v.triggered), "{r:?}");
    }

    #[test]
    fn hillery_on_one_boson_bell() {
        let psi = bell_one_boson(OneBosonBell::PsiPlus);
        let f = spin_frame(psi.basis(), 0, 1).unwrap();
        let v = hillery_variance_test(&psi, &f).unwrap();
        assert!((v.lhs - 0.25).abs() < 1e-12 && (v.rhs - 0.5).abs() < 1e-12 && v.triggered);
        for ssr in [false, true] {
            let c = hillery_correlation_test(&psi, 0, 1, 1, 1, ssr).unwrap();
            assert!((c.lhs - 0.25).abs() < 1e-12 && c.rhs.abs() < 1e-12 && c.triggered);
        }
    }

    #[test]
    fn vacuum_is_strict() {
        let b = FockBasis::uniform(2, 2).unwrap();
        let vac = StateVector::from_occupancy(&b, &[0, 0]).unwrap();
        let f = spin_frame(&b, 0, 1).unwrap();
        let h = hillery_variance_test(&vac, &f).unwrap();
        assert_eq!((h.lhs, h.rhs, h.triggered), (0.0, 0.0, false));
        let d = duan_test(&vac, 0, 1).unwrap();
        assert!((d.lhs - 2.0).abs() < 1e-12 && !d.triggered);
    }

    #[test]
    fn coherent_mixture_tie() {
        let rho = mixed_two_mode_coherent(SQRT_2, 24).unwrap();
        let h = hillery_correlation_test(&rho, 0, 1, 1, 1, false).unwrap();
        let s = hillery_correlation_test(&rho, 0, 1, 1, 1, true).unwrap();
        assert!((h.lhs - 4.0).abs() < 1e-9 && (h.rhs - 4.0).abs() < 1e-9 && !h.triggered);
        assert!(s.triggered);
    }

    #[test]
    fn duan_tuned_superposition() {
        let b = FockBasis::uniform(2, 3).unwrap();
        let (c0, c1) = (0.7f64.sqrt(), -(0.3f64.sqrt()));
        let psi =
            StateVector::from_terms(&b, &[(C64::new(c0, 0.0), vec![0, 0]), (C64::new(c1, 0.0), vec![1, 1])]).unwrap();
        let d = duan_test(&psi, 0, 1).unwrap();
        let expected = 2.0 + 4.0 * c1 * c1 + 4.0 * c0 * c1;
        assert!((d.lhs - expected).abs() < 1e-12 && d.triggered);
    }

    #[test]
    fn duan_rejects_top_level_population() {
        let b = FockBasis::uniform(2, 1).unwrap();
        let psi = StateVector::from_occupancy(&b, &[1, 0]).unwrap();
        assert!(matches!(duan_test(&psi, 0, 1), Err(Error::Truncation(_))));
    }

    #[test]
    fn sorensen_coherent_spin_and_noon() {
        // θ = π/4, χ = 0 puts the Bloch vector on S_x.
        let psi = binomial_state(6, FRAC_PI_4, 0.0).unwrap();
        let f = spin_frame(psi.basis(), 0, 1).unwrap();
        let v = sorensen_test(&psi, &f).unwrap();
        assert!(v.applicable && (v.lhs / v.rhs - 1.0).abs() < 1e-9);
        let noon = noon_state(4, FRAC_PI_4).unwrap();
        let f = spin_frame(noon.basis(), 0, 1).unwrap();
        assert!(!sorensen_test(&noon, &f).unwrap().applicable);
    }

    #[test]
    fn chsh_singlet_and_product() {
        let psi = singlet_state();
        let v = chsh_modes(&psi, 0, 1, &chsh_optimal_axes()).unwrap();
        assert!((v.lhs - 2.0 * SQRT_2).abs() < 1e-9 && v.triggered);
        let b = psi.basis().clone();
        let up = StateVector::from_occupancy(&b, &[1, 1]).unwrap();
        let z = [0.0, 0.0, 1.0];
        let w = chsh_modes(&up, 0, 1, &[z, z, z, z]).unwrap();
        assert!((w.lhs - 2.0).abs() < 1e-12 && !w.triggered);
    }

    #[test]
    fn chsh_rejects_bad_observables() {
        let psi = singlet_state();
        let b = psi.basis().clone();
        let big = &qubit_pauli(&b, 0, 2).unwrap() * 2.0;
        let ok = qubit_pauli(&b, 1, 2).unwrap();
        assert!(chsh_value(&psi, &big, &big, &ok, &ok).is_err());
        let same = qubit_pauli(&b, 0, 0).unwrap();
        let other = qubit_pauli(&b, 0, 2).unwrap();
        assert!(chsh_value(&psi, &same, &same, &other, &other).is_err());
    }

    #[test]
    fn ghz_has_no_hidden_variable_model() {
        let r = ghz_hvt_contradiction().unwrap();
        assert_eq!(r.consistent_assignments, 0);
        assert_eq!(r.assignments_checked, 512);
        for k in 0..4 {
            assert!(r.residuals[k] < 1e-12);
            assert!((r.eigenvalues[k] - r.expected[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_pair_bell_triggers_pair_tests() {
        let b = FockBasis::uniform(4, 1).unwrap();
        let h = C64::new(1.0, 0.0);
        let psi = StateVector::from_terms(&b, &[(h, vec![1, 0, 0, 1]), (h, vec![0, 1, 1, 0])]).unwrap();
        let r = pair_mode_tests(&psi).unwrap();
        let s = find(&r, "pair_spin_entanglement");
        assert!((s.lhs - 0.25).abs() < 1e-12 && s.rhs.abs() < 1e-12 && s.triggered);
        let vac = StateVector::from_occupancy(&b, &[0, 0, 0, 0]).unwrap();
        assert!(pair_mode_tests(&vac).unwrap().iter().all(|v| v.lhs == 0.0 && !v.triggered));
    }

    #[test]
    fn pair_qubit_observable_is_dichotomic() {
        let b = FockBasis::uniform(4, 1).unwrap();
        let op = pair_qubit_observable(&b, 0, 1, [0.3, -0.5, 0.8]).unwrap();
        let ev = linalg::eigvalsh(op.matrix());
        assert!(ev.iter().all(|e| (e.abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn transfer_op_matches_ladder_products() {
        let b = FockBasis::uniform(2, 3).unwrap();
        let a = crate::fock::annihilation_op(&b, 0).unwrap();
        let bd = crate::fock::creation_op(&b, 1).unwrap();
        let direct = &a.pow(2) * &bd;
        let t = transfer_op(&b, 0, 1, 2, 1).unwrap();
        assert!((&direct - &t).max_abs() < 1e-12);
        let sector = FockBasis::two_mode_sector(3);
        let sector_state = noon_state(3, 0.4).unwrap();
        let t = transfer_op(&sector, 0, 1, 1, 1).unwrap();
        let lhs = sector_state.expect(&t).unwrap();
        assert!(lhs.norm() < 1e-12);
    }

    #[test]
    fn schwarz_forms() {
        let (l, r) = sum_inequality(&[0.2, 0.5, 0.3], &[1.0, 4.0, 9.0], &[2.0, 0.5, 1.0]).unwrap();
        assert!(l >= r);
        let (l, r) = integral_inequality(|x| (-x).exp(), |x| x * x, |x| 1.0 + x, 0.0, 3.0, 64).unwrap();
        assert!(l >= r && r > 0.0);
        let w = [0.5, 0.5];
        let (l, r) = hvt_correlation(&w, &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)], &[C64::new(1.0, 0.0); 2]).unwrap();
        assert!(l <= r);
        let mixed = DensityOperator::from_pure(&singlet_state());
        assert!(chsh_modes(&mixed, 0, 1, &chsh_optimal_axes()).unwrap().triggered);
    }
}

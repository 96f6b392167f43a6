//! Schwinger spin operators, Bloch vectors, covariance matrices and
//! principal spin frames.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::error::{invalid, Error, Result};
use crate::fock::{
    annihilation_op, identity_op, number_op, total_number_op, FockBasis, ModeOperator, QuantumState, C64,
};
use crate::linalg;

const ZERO: C64 = C64::new(0.0, 0.0);
const HALF: C64 = C64::new(0.5, 0.0);

/// Spin triple built from a pair of modes (or a sum of pairs).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinFrame {
    pub sx: ModeOperator,
    pub sy: ModeOperator,
    pub sz: ModeOperator,
    pub n_total: ModeOperator,
    /// Mode pairs summed into this frame.
    pub pairs: Vec<(usize, usize)>,
    /// Letter used when naming components, `S` or `J`.
    pub symbol: char,
}

impl SpinFrame {
    pub fn components(&self) -> [&ModeOperator; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    pub fn basis(&self) -> &FockBasis {
        self.sx.basis()
    }

    /// Frame with `J_ξ = Σ_μ S_μ R_μξ`; the columns of `rotation` are the new axes.
    pub fn rotated(&self, rotation: &Matrix3<f64>) -> SpinFrame {
        let s = self.components();
        let comp = |xi: usize| {
            let mut acc = ModeOperator::zeros(self.basis());
            for (mu, op) in s.iter().enumerate() {
                let w = rotation[(mu, xi)];
                if w != 0.0 {
                    acc = &acc + &(*op * w);
                }
            }
            acc
        };
        SpinFrame {
            sx: comp(0),
            sy: comp(1),
            sz: comp(2),
            n_total: self.n_total.clone(),
            pairs: self.pairs.clone(),
            symbol: 'J',
        }
    }

    pub fn rotated_euler(&self, euler: &EulerAngles) -> SpinFrame {
        self.rotated(&euler.rotation_matrix())
    }

    /// Frame re-labelled with a new component letter.
    pub fn with_symbol(mut self, symbol: char) -> SpinFrame {
        self.symbol = symbol;
        self
    }
}

fn sector_spin(basis: &FockBasis) -> SpinFrame {
    let n = basis.sector_total().expect("sector basis");
    let d = n + 1;
    // b†a lowers the mode-0 occupancy k by one.
    let mut bda = DMatrix::from_element(d, d, ZERO);
    for k in 1..=n {
        bda[(k - 1, k)] = C64::new(((k * (n - k + 1)) as f64).sqrt(), 0.0);
    }
    let sz = DMatrix::from_fn(d, d, |i, j| {
        if i == j { C64::new((n as f64 - 2.0 * i as f64) / 2.0, 0.0) } else { ZERO }
    });
    let adb = bda.adjoint();
    let sx = (&bda + &adb) * HALF;
    let sy = (&bda - &adb) * C64::new(0.0, -0.5);
    let op = |m: DMatrix<C64>| ModeOperator::new(basis.clone(), m).expect("sector dimension");
    SpinFrame {
        sx: op(sx),
        sy: op(sy),
        sz: op(sz),
        n_total: total_number_op(basis),
        pairs: vec![(0, 1)],
        symbol: 'S',
    }
}

/// `S_x = (b†a + a†b)/2`, `S_y = (b†a - a†b)/2i`, `S_z = (b†b - a†a)/2`.
pub fn spin_frame(basis: &FockBasis, mode_a: usize, mode_b: usize) -> Result<SpinFrame> {
    basis.check_mode(mode_a)?;
    basis.check_mode(mode_b)?;
    if mode_a == mode_b {
        return invalid("spin frame needs two distinct modes");
    }
    if basis.is_sector() {
        if (mode_a, mode_b) != (0, 1) {
            return Err(Error::Unsupported("sector spin frames use the mode order (0, 1)".into()));
        }
        return Ok(sector_spin(basis));
    }
    let a = annihilation_op(basis, mode_a)?;
    let b = annihilation_op(basis, mode_b)?;
    let bda = &b.adjoint() * &a;
    let adb = bda.adjoint();
    let na = number_op(basis, mode_a)?;
    let nb = number_op(basis, mode_b)?;
    Ok(SpinFrame {
        sx: &(&bda + &adb) * HALF,
        sy: &(&bda - &adb) * C64::new(0.0, -0.5),
        sz: &(&nb - &na) * HALF,
        n_total: &na + &nb,
        pairs: vec![(mode_a, mode_b)],
        symbol: 'S',
    })
}

/// Sum of pair frames `S = Σ_i S^i`.
pub fn collective_frame(basis: &FockBasis, pairs: &[(usize, usize)]) -> Result<SpinFrame> {
    let Some(&first) = pairs.first() else {
        return invalid("collective frame needs at least one pair");
    };
    let mut acc = spin_frame(basis, first.0, first.1)?;
    for &(a, b) in &pairs[1..] {
        let f = spin_frame(basis, a, b)?;
        acc.sx = &acc.sx + &f.sx;
        acc.sy = &acc.sy + &f.sy;
        acc.sz = &acc.sz + &f.sz;
        acc.n_total = &acc.n_total + &f.n_total;
        acc.pairs.push((a, b));
    }
    Ok(acc)
}

/// Bloch vector and symmetrised covariance matrix of a spin frame.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochReport {
    pub mean: [f64; 3],
    pub cov: Matrix3<f64>,
}

impl BlochReport {
    pub fn variances(&self) -> [f64; 3] {
        [self.cov[(0, 0)], self.cov[(1, 1)], self.cov[(2, 2)]]
    }

    /// `var_ξ var_μ - ¼<S_ζ>²` for the three cyclic triples.
    pub fn hup_residuals(&self) -> [f64; 3] {
        let v = self.variances();
        let m = self.mean;
        [v[0] * v[1] - 0.25 * m[2] * m[2], v[1] * v[2] - 0.25 * m[0] * m[0], v[2] * v[0] - 0.25 * m[1] * m[1]]
    }
}

pub fn bloch_and_covariance<S: QuantumState + ?Sized>(state: &S, frame: &SpinFrame) -> Result<BlochReport> {
    if state.basis() != frame.basis() {
        return Err(Error::BasisMismatch("state and spin frame bases differ".into()));
    }
    let ops = frame.components();
    let mut mean = [0.0; 3];
    for (i, op) in ops.iter().enumerate() {
        mean[i] = state.expect(op)?.re;
    }
    let mut cov = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            // <(AB + BA)/2> = Re<AB> for Hermitian A, B
            let c = state.expect_product(ops[i], ops[j])?.re - mean[i] * mean[j];
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }
    Ok(BlochReport { mean, cov })
}

/// z–y–z Euler angles of `R(α,β,γ) = R_z(α) R_y(β) R_z(γ)` with
/// `R_ξ(φ) = exp(iφS_ξ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

fn rot_z(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Matrix `O` with `J_ξ = R S_ξ R⁻¹ = Σ_μ S_μ O_μξ`.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        rot_z(-self.alpha) * rot_y(-self.beta) * rot_z(-self.gamma)
    }

    /// Inverse of [`rotation_matrix`](Self::rotation_matrix) with `β ∈ [0, π]`.
    pub fn from_rotation(o: &Matrix3<f64>) -> Self {
        let beta = o[(2, 2)].clamp(-1.0, 1.0).acos();
        if beta.sin() < 1e-12 {
            let alpha = if o[(2, 2)] > 0.0 {
                (-o[(1, 0)]).atan2(o[(0, 0)])
            } else {
                o[(1, 0)].atan2(-o[(0, 0)])
            };
            return Self::new(alpha, beta, 0.0);
        }
        let alpha = o[(1, 2)].atan2(-o[(0, 2)]);
        let gamma = o[(2, 1)].atan2(o[(2, 0)]);
        Self::new(alpha, beta, gamma)
    }
}

/// Eigen-decomposition of a Bloch covariance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAxes {
    /// Ascending principal variances.
    pub variances: [f64; 3],
    /// Proper rotation whose columns are the principal axes.
    pub rotation: Matrix3<f64>,
    pub euler: EulerAngles,
}

impl PrincipalAxes {
    pub fn j_frame(&self, s: &SpinFrame) -> SpinFrame {
        s.rotated(&self.rotation)
    }
}

/// Principal axes sorted by ascending variance, sign-gauged and proper.
pub fn principal_axes(report: &BlochReport) -> PrincipalAxes {
    let (vals, mut vecs) = linalg::jacobi3(&report.cov);
    for j in 0..3 {
        let col: Vector3<f64> = vecs.column(j).into();
        let mut k = 0;
        for i in 1..3 {
            if col[i].abs() > col[k].abs() + 1e-12 {
                k = i;
            }
        }
        if col[k] < 0.0 {
            vecs.set_column(j, &(-col));
        }
    }
    if vecs.determinant() < 0.0 {
        let last: Vector3<f64> = vecs.column(2).into();
        vecs.set_column(2, &(-last));
    }
    let euler = EulerAngles::from_rotation(&vecs);
    PrincipalAxes { variances: vals, rotation: vecs, euler }
}

/// Bloch report, principal axes and the principal spin frame in one call.
#[derive(Clone, Debug)]
pub struct PrincipalFrame {
    pub report: BlochReport,
    pub axes: PrincipalAxes,
    pub j_frame: SpinFrame,
}

pub fn principal_frame<S: QuantumState + ?Sized>(state: &S, s: &SpinFrame) -> Result<PrincipalFrame> {
    let report = bloch_and_covariance(state, s)?;
    let axes = principal_axes(&report);
    let j_frame = axes.j_frame(s);
    Ok(PrincipalFrame { report, axes, j_frame })
}

/// New mode operators `(c, d)` for the rotation `euler`.
pub fn new_mode_ops(
    basis: &FockBasis,
    mode_a: usize,
    mode_b: usize,
    euler: &EulerAngles,
) -> Result<(ModeOperator, ModeOperator)> {
    if mode_a == mode_b {
        return invalid("new modes need two distinct modes");
    }
    let a = annihilation_op(basis, mode_a)?;
    let b = annihilation_op(basis, mode_b)?;
    let EulerAngles { alpha, beta, gamma } = *euler;
    let (sb, cb) = (beta / 2.0).sin_cos();
    let c = &(&a * C64::from_polar(cb, (alpha + gamma) / 2.0)) + &(&b * C64::from_polar(sb, (gamma - alpha) / 2.0));
    let d = &(&a * C64::from_polar(-sb, (alpha - gamma) / 2.0)) + &(&b * C64::from_polar(cb, -(alpha + gamma) / 2.0));
    Ok((c, d))
}

/// Old modes rebuilt from the new ones, `(a, b)`.
pub fn old_mode_ops(c: &ModeOperator, d: &ModeOperator, euler: &EulerAngles) -> (ModeOperator, ModeOperator) {
    let EulerAngles { alpha, beta, gamma } = *euler;
    let (sb, cb) = (beta / 2.0).sin_cos();
    let a = &(c * C64::from_polar(cb, -(alpha + gamma) / 2.0)) + &(d * C64::from_polar(-sb, (gamma - alpha) / 2.0));
    let b = &(c * C64::from_polar(sb, (alpha - gamma) / 2.0)) + &(d * C64::from_polar(cb, (alpha + gamma) / 2.0));
    (a, b)
}

/// `J_x = (d†c + c†d)/2`, `J_y = (d†c - c†d)/2i`, `J_z = (d†d - c†c)/2`.
pub fn spin_from_modes(c: &ModeOperator, d: &ModeOperator, mode_pair: (usize, usize)) -> SpinFrame {
    let ddc = &d.adjoint() * c;
    let cdd = ddc.adjoint();
    let nc = &c.adjoint() * c;
    let nd = &d.adjoint() * d;
    SpinFrame {
        sx: &(&ddc + &cdd) * HALF,
        sy: &(&ddc - &cdd) * C64::new(0.0, -0.5),
        sz: &(&nd - &nc) * HALF,
        n_total: &nc + &nd,
        pairs: vec![mode_pair],
        symbol: 'J',
    }
}

/// `<ΔJ_x²>` assembled from first- and second-order correlations of `c, d`.
pub fn jx_variance_via_correlations<S: QuantumState + ?Sized>(
    state: &S,
    c: &ModeOperator,
    d: &ModeOperator,
) -> Result<f64> {
    let cd = c.adjoint();
    let dd = d.adjoint();
    let e = |op: ModeOperator| state.expect(&op);
    let d2c2 = e(&(&(&dd * &dd) * c) * c)?;
    let c2d2 = e(&(&(&cd * &cd) * d) * d)?;
    let dccd = e(&(&(&dd * &cd) * c) * d)?;
    let ndd = e(&dd * d)?;
    let ncc = e(&cd * c)?;
    let dc = e(&dd * c)?;
    let cdv = e(&cd * d)?;
    let second = (d2c2 + c2d2 + dccd * 2.0 + ndd + ncc) * 0.25;
    let first = (dc * dc + cdv * cdv + dc * cdv * 2.0) * 0.25;
    Ok((second - first).re)
}

/// `S_x² + S_y² + S_z² - (N/2)(N/2 + 1)`.
pub fn casimir_defect(frame: &SpinFrame) -> ModeOperator {
    let s2 = &(&(&frame.sx * &frame.sx) + &(&frame.sy * &frame.sy)) + &(&frame.sz * &frame.sz);
    let half_n = &frame.n_total * 0.5;
    let rhs = &half_n * &(&half_n + &identity_op(frame.basis()));
    &s2 - &rhs
}

//! Truncated multimode Fock spaces, ladder operators, pure and mixed states.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::tol;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Product basis of per-mode occupancies `0..=cutoff`, or the fixed-total
/// two-mode sector `{|k, N-k>}`.
///
/// Product indices are mixed-radix with mode 0 varying slowest. Sector index
/// `k` is the occupancy of mode 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
    sector: Option<usize>,
}

impl FockBasis {
    pub fn new(cutoffs: Vec<usize>) -> Result<Self> {
        if cutoffs.is_empty() {
            return invalid("a basis needs at least one mode");
        }
        let mut strides = vec![1usize; cutoffs.len()];
        for i in (0..cutoffs.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(cutoffs[i + 1] + 1)
                .ok_or_else(|| Error::InvalidParameter("basis dimension overflows".into()))?;
        }
        let dim = strides[0]
            .checked_mul(cutoffs[0] + 1)
            .ok_or_else(|| Error::InvalidParameter("basis dimension overflows".into()))?;
        Ok(Self { cutoffs, strides, dim, sector: None })
    }

    pub fn uniform(n_modes: usize, cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff; n_modes])
    }

    /// Two-mode sector of fixed total number `total`.
    pub fn two_mode_sector(total: usize) -> Self {
        Self { cutoffs: vec![total, total], strides: vec![1, 1], dim: total + 1, sector: Some(total) }
    }

    pub fn n_modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn sector_total(&self) -> Option<usize> {
        self.sector
    }

    pub fn is_sector(&self) -> bool {
        self.sector.is_some()
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::ModeOutOfRange { mode, n_modes: self.n_modes() });
        }
        Ok(())
    }

    pub fn occupancy(&self, index: usize) -> Vec<usize> {
        assert!(index < self.dim, "basis index out of range");
        if let Some(n) = self.sector {
            return vec![index, n - index];
        }
        self.cutoffs
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (index / s) % (c + 1))
            .collect()
    }

    pub fn index_of(&self, occ: &[usize]) -> Option<usize> {
        if occ.len() != self.n_modes() {
            return None;
        }
        if let Some(n) = self.sector {
            return (occ[0] + occ[1] == n).then_some(occ[0]);
        }
        let mut idx = 0;
        for ((&o, &c), &s) in occ.iter().zip(&self.cutoffs).zip(&self.strides) {
            if o > c {
                return None;
            }
            idx += o * s;
        }
        Some(idx)
    }

    pub fn total_number(&self, index: usize) -> usize {
        self.occupancy(index).iter().sum()
    }

    /// Product basis over the listed modes, keeping their cutoffs.
    pub fn sub_basis(&self, modes: &[usize]) -> Result<FockBasis> {
        for &m in modes {
            self.check_mode(m)?;
        }
        FockBasis::new(modes.iter().map(|&m| self.cutoffs[m]).collect())
    }

    /// Product basis of `self` followed by `other`.
    pub fn tensor(&self, other: &FockBasis) -> Result<FockBasis> {
        if self.is_sector() || other.is_sector() {
            return Err(Error::Unsupported("tensor products of sector bases".into()));
        }
        let mut c = self.cutoffs.clone();
        c.extend_from_slice(&other.cutoffs);
        FockBasis::new(c)
    }

    /// Same modes with every cutoff raised by `extra`.
    pub fn padded(&self, extra: usize) -> Result<FockBasis> {
        FockBasis::new(self.cutoffs.iter().map(|c| c + extra).collect())
    }

    fn require_product(&self, what: &str) -> Result<()> {
        if self.is_sector() {
            return Err(Error::Unsupported(format!("{what} on a fixed-number sector")));
        }
        Ok(())
    }
}

/// Dense operator on a [`FockBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModeOperator {
    basis: FockBasis,
    matrix: DMatrix<C64>,
}

impl ModeOperator {
    pub fn new(basis: FockBasis, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "matrix is {}x{} but basis dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            )));
        }
        Ok(Self { basis, matrix })
    }

    pub fn zeros(basis: &FockBasis) -> Self {
        let d = basis.dim();
        Self { basis: basis.clone(), matrix: DMatrix::from_element(d, d, ZERO) }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { basis: self.basis.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn is_hermitian(&self) -> bool {
        linalg::hermitian_deviation(&self.matrix) <= tol::HERMITIAN
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = identity_op(&self.basis);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { basis: self.basis.clone(), matrix: &self.matrix * z }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    /// Diagonal entries as reals, if the operator is diagonal.
    pub fn diagonal_values(&self) -> Option<Vec<f64>> {
        let d = self.basis.dim();
        for j in 0..d {
            for i in 0..d {
                if i != j && self.matrix[(i, j)].norm() > tol::HERMITIAN {
                    return None;
                }
            }
        }
        Some((0..d).map(|i| self.matrix[(i, i)].re).collect())
    }
}

fn same_basis(a: &FockBasis, b: &FockBasis) {
    assert_eq!(a, b, "operators act on different bases");
}

impl Mul for &ModeOperator {
    type Output = ModeOperator;
    fn mul(self, rhs: &ModeOperator) -> ModeOperator {
        same_basis(&self.basis, &rhs.basis);
        ModeOperator { basis: self.basis.clone(), matrix: linalg::matmul(&self.matrix, &rhs.matrix) }
    }
}

impl Add for &ModeOperator {
    type Output = ModeOperator;
    fn add(self, rhs: &ModeOperator) -> ModeOperator {
        same_basis(&self.basis, &rhs.basis);
        ModeOperator { basis: self.basis.clone(), matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &ModeOperator {
    type Output = ModeOperator;
    fn sub(self, rhs: &ModeOperator) -> ModeOperator {
        same_basis(&self.basis, &rhs.basis);
        ModeOperator { basis: self.basis.clone(), matrix: &self.matrix - &rhs.matrix }
    }
}

impl Neg for &ModeOperator {
    type Output = ModeOperator;
    fn neg(self) -> ModeOperator {
        self.scale(-ONE)
    }
}

impl Mul<C64> for &ModeOperator {
    type Output = ModeOperator;
    fn mul(self, z: C64) -> ModeOperator {
        self.scale(z)
    }
}

impl Mul<f64> for &ModeOperator {
    type Output = ModeOperator;
    fn mul(self, x: f64) -> ModeOperator {
        self.scale(C64::new(x, 0.0))
    }
}

pub fn identity_op(basis: &FockBasis) -> ModeOperator {
    let d = basis.dim();
    ModeOperator { basis: basis.clone(), matrix: DMatrix::identity(d, d) }
}

/// Truncated annihilation operator `a_mode`.
///
/// `[a, a†] = 1` holds on every level except the top one of the mode.
pub fn annihilation_op(basis: &FockBasis, mode: usize) -> Result<ModeOperator> {
    basis.check_mode(mode)?;
    basis.require_product("ladder operators")?;
    let d = basis.dim();
    let mut m = DMatrix::from_element(d, d, ZERO);
    let stride = basis.strides[mode];
    for j in 0..d {
        let n = (j / stride) % (basis.cutoffs[mode] + 1);
        if n > 0 {
            m[(j - stride, j)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    Ok(ModeOperator { basis: basis.clone(), matrix: m })
}

pub fn creation_op(basis: &FockBasis, mode: usize) -> Result<ModeOperator> {
    Ok(annihilation_op(basis, mode)?.adjoint())
}

pub fn number_op(basis: &FockBasis, mode: usize) -> Result<ModeOperator> {
    basis.check_mode(mode)?;
    let d = basis.dim();
    let diag = DVector::from_fn(d, |i, _| C64::new(basis.occupancy(i)[mode] as f64, 0.0));
    Ok(ModeOperator { basis: basis.clone(), matrix: DMatrix::from_diagonal(&diag) })
}

pub fn total_number_op(basis: &FockBasis) -> ModeOperator {
    let d = basis.dim();
    let diag = DVector::from_fn(d, |i, _| C64::new(basis.total_number(i) as f64, 0.0));
    ModeOperator { basis: basis.clone(), matrix: DMatrix::from_diagonal(&diag) }
}

/// `x = (a + a†)/√2`.
pub fn quadrature_x(basis: &FockBasis, mode: usize) -> Result<ModeOperator> {
    let a = annihilation_op(basis, mode)?;
    Ok(&(&a + &a.adjoint()) * std::f64::consts::FRAC_1_SQRT_2)
}

/// `p = (a - a†)/(√2 i)`.
pub fn quadrature_p(basis: &FockBasis, mode: usize) -> Result<ModeOperator> {
    let a = annihilation_op(basis, mode)?;
    Ok(&(&a - &a.adjoint()) * C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2))
}

/// Lift an operator on the listed modes into the full basis.
pub fn lift_operator(full: &FockBasis, modes: &[usize], local: &ModeOperator) -> Result<ModeOperator> {
    full.require_product("operator lifting")?;
    let sub = full.sub_basis(modes)?;
    if &sub != local.basis() {
        return Err(Error::BasisMismatch("local operator basis does not match the selected modes".into()));
    }
    let split = Splitter::new(full, modes);
    let d = full.dim();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for (_, members) in split.groups.iter() {
        for &(i, ki) in members {
            for &(j, kj) in members {
                m[(i, j)] = local.matrix[(ki, kj)];
            }
        }
    }
    ModeOperator::new(full.clone(), m)
}

/// Traced-out occupancies with their `(full index, kept index)` members.
type Group = (Vec<usize>, Vec<(usize, usize)>);

/// Groups basis indices by the occupancies of the modes not kept.
struct Splitter {
    kept_basis: FockBasis,
    groups: Vec<Group>,
}

impl Splitter {
    fn new(basis: &FockBasis, keep: &[usize]) -> Self {
        let kept_basis =
            FockBasis::new(keep.iter().map(|&m| basis.cutoffs[m]).collect()).expect("non-empty keep set");
        let mut map: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut groups: Vec<Group> = Vec::new();
        for i in 0..basis.dim() {
            let occ = basis.occupancy(i);
            let kept: Vec<usize> = keep.iter().map(|&m| occ[m]).collect();
            let traced: Vec<usize> =
                (0..basis.n_modes()).filter(|m| !keep.contains(m)).map(|m| occ[m]).collect();
            let k = kept_basis.index_of(&kept).expect("kept occupancy within cutoffs");
            let slot = *map.entry(traced.clone()).or_insert_with(|| {
                groups.push((traced, Vec::new()));
                groups.len() - 1
            });
            groups[slot].1.push((i, k));
        }
        Self { kept_basis, groups }
    }
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: FockBasis,
    amps: DVector<C64>,
}

impl StateVector {
    /// Normalizes `amps`; fails on a zero vector.
    pub fn new(basis: FockBasis, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} amplitudes for a basis of dimension {}",
                amps.len(),
                basis.dim()
            )));
        }
        let norm = amps.norm();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::InvalidParameter("state vector has zero or non-finite norm".into()));
        }
        Ok(Self { basis, amps: amps.unscale(norm) })
    }

    pub fn from_occupancy(basis: &FockBasis, occ: &[usize]) -> Result<Self> {
        let idx = basis
            .index_of(occ)
            .ok_or_else(|| Error::InvalidParameter(format!("occupancy {occ:?} not in basis")))?;
        let mut amps = DVector::from_element(basis.dim(), ZERO);
        amps[idx] = ONE;
        Ok(Self { basis: basis.clone(), amps })
    }

    /// Superposition `Σ c_k |occ_k>`.
    pub fn from_terms(basis: &FockBasis, terms: &[(C64, Vec<usize>)]) -> Result<Self> {
        let mut amps = DVector::from_element(basis.dim(), ZERO);
        for (c, occ) in terms {
            let idx = basis
                .index_of(occ)
                .ok_or_else(|| Error::InvalidParameter(format!("occupancy {occ:?} not in basis")))?;
            amps[idx] += *c;
        }
        Self::new(basis.clone(), amps)
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch("inner product across bases".into()));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// `O|ψ>` without renormalizing.
    pub fn apply(&self, op: &ModeOperator) -> Result<DVector<C64>> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch("operator and state bases differ".into()));
        }
        Ok(linalg::matvec(op.matrix(), &self.amps))
    }

    /// Normalized `U|ψ>` for a unitary or any operator with non-zero image.
    pub fn evolve(&self, op: &ModeOperator) -> Result<StateVector> {
        StateVector::new(self.basis.clone(), self.apply(op)?)
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator { basis: self.basis.clone(), matrix: &self.amps * self.amps.adjoint() }
    }

    /// Re-express on a basis with the same modes and larger cutoffs.
    pub fn embed(&self, target: &FockBasis) -> Result<StateVector> {
        let map = embedding_map(&self.basis, target)?;
        let mut amps = DVector::from_element(target.dim(), ZERO);
        for (i, &t) in map.iter().enumerate() {
            amps[t] = self.amps[i];
        }
        Ok(StateVector { basis: target.clone(), amps })
    }

}

fn embedding_map(from: &FockBasis, to: &FockBasis) -> Result<Vec<usize>> {
    if from.n_modes() != to.n_modes() {
        return Err(Error::BasisMismatch("embedding requires the same number of modes".into()));
    }
    (0..from.dim())
        .map(|i| {
            let occ = from.occupancy(i);
            to.index_of(&occ)
                .ok_or_else(|| Error::Truncation(format!("occupancy {occ:?} does not fit the target basis")))
        })
        .collect()
}

/// Density operator. Constructors that accept arbitrary matrices validate
/// Hermiticity, unit trace and positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    basis: FockBasis,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn from_matrix(basis: FockBasis, matrix: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(basis, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(basis: FockBasis, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "matrix is {}x{} but basis dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            )));
        }
        Ok(Self { basis, matrix })
    }

    /// Rescales a positive matrix to unit trace.
    pub fn normalized(basis: FockBasis, matrix: DMatrix<C64>) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) {
            return invalid("matrix has non-positive trace");
        }
        Self::from_matrix(basis, matrix.unscale(tr))
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    /// Diagonal state `Σ p_i |i><i|` over basis indices.
    pub fn diagonal(basis: &FockBasis, probs: &[f64]) -> Result<Self> {
        if probs.len() != basis.dim() {
            return Err(Error::BasisMismatch("diagonal length differs from basis dimension".into()));
        }
        let diag = DVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::from_matrix(basis.clone(), DMatrix::from_diagonal(&diag))
    }

    /// Convex combination `Σ w_i ρ_i`; weights must sum to one.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return invalid("empty mixture");
        };
        let mut total = 0.0;
        let mut m = DMatrix::from_element(first.basis.dim(), first.basis.dim(), ZERO);
        for (w, rho) in parts {
            if *w < 0.0 {
                return invalid("negative mixture weight");
            }
            if rho.basis != first.basis {
                return Err(Error::BasisMismatch("mixture components on different bases".into()));
            }
            total += w;
            m += &rho.matrix * C64::new(*w, 0.0);
        }
        if (total - 1.0).abs() > tol::TRACE {
            return invalid(format!("mixture weights sum to {total}"));
        }
        Ok(Self { basis: first.basis.clone(), matrix: m })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermitian_deviation(&self.matrix);
        if herm > tol::HERMITIAN {
            return Err(Error::Invariant(format!("density operator not Hermitian (deviation {herm:e})")));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::Invariant(format!("density operator trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -tol::PSD {
            return Err(Error::Invariant(format!("density operator has eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `ρ ⊗ σ` on the concatenated basis.
    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        let basis = self.basis.tensor(&other.basis)?;
        Ok(Self { basis, matrix: linalg::kron(&self.matrix, &other.matrix) })
    }

    /// Reduced state on the listed modes, in the listed order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        if keep.is_empty() {
            return invalid("partial trace must keep at least one mode");
        }
        for (i, &m) in keep.iter().enumerate() {
            self.basis.check_mode(m)?;
            if keep[..i].contains(&m) {
                return invalid("repeated mode in partial trace");
            }
        }
        let split = Splitter::new(&self.basis, keep);
        let dk = split.kept_basis.dim();
        let mut out = DMatrix::from_element(dk, dk, ZERO);
        for (_, members) in &split.groups {
            for &(i, ki) in members {
                for &(j, kj) in members {
                    out[(ki, kj)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(Self { basis: split.kept_basis, matrix: out })
    }

    /// Re-express on a basis with the same modes and larger cutoffs.
    pub fn embed(&self, target: &FockBasis) -> Result<DensityOperator> {
        let map = embedding_map(&self.basis, target)?;
        let d = target.dim();
        let mut m = DMatrix::from_element(d, d, ZERO);
        for (i, &ti) in map.iter().enumerate() {
            for (j, &tj) in map.iter().enumerate() {
                m[(ti, tj)] = self.matrix[(i, j)];
            }
        }
        Ok(Self { basis: target.clone(), matrix: m })
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ModeOperator) -> Result<DensityOperator> {
        if u.basis() != &self.basis {
            return Err(Error::BasisMismatch("operator and state bases differ".into()));
        }
        let m = linalg::matmul(&linalg::matmul(u.matrix(), &self.matrix), &u.matrix().adjoint());
        Ok(Self { basis: self.basis.clone(), matrix: m })
    }

    /// `Π ρ Π`, unnormalized.
    pub(crate) fn sandwich(&self, p: &ModeOperator) -> DMatrix<C64> {
        linalg::matmul(&linalg::matmul(p.matrix(), &self.matrix), p.matrix())
    }
}

/// Anything that can produce expectation values of operators.
pub trait QuantumState {
    fn basis(&self) -> &FockBasis;
    /// `<O>`; fails when the bases differ.
    fn expect(&self, op: &ModeOperator) -> Result<C64>;
    fn density(&self) -> DensityOperator;
    /// Probability of every basis state.
    fn populations(&self) -> Vec<f64>;

    /// `<A B>`.
    fn expect_product(&self, a: &ModeOperator, b: &ModeOperator) -> Result<C64> {
        if a.basis() != b.basis() {
            return Err(Error::BasisMismatch("operator bases differ".into()));
        }
        self.expect(&(a * b))
    }

    /// Total probability of basis states whose occupancy satisfies `pred`.
    fn population_where(&self, pred: &dyn Fn(&[usize]) -> bool) -> f64 {
        let b = self.basis();
        self.populations()
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(&b.occupancy(*i)))
            .map(|(_, p)| p)
            .sum()
    }
}

impl QuantumState for StateVector {
    fn basis(&self) -> &FockBasis {
        &self.basis
    }
    fn expect(&self, op: &ModeOperator) -> Result<C64> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch("operator and state bases differ".into()));
        }
        Ok(linalg::sandwich(&self.amps, op.matrix()))
    }
    fn density(&self) -> DensityOperator {
        self.to_density()
    }
    fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
    fn expect_product(&self, a: &ModeOperator, b: &ModeOperator) -> Result<C64> {
        if a.basis() != &self.basis || b.basis() != &self.basis {
            return Err(Error::BasisMismatch("operator and state bases differ".into()));
        }
        let ab_psi = linalg::matvec(a.matrix(), &linalg::matvec(b.matrix(), &self.amps));
        Ok(self.amps.dotc(&ab_psi))
    }
}

impl QuantumState for DensityOperator {
    fn basis(&self) -> &FockBasis {
        &self.basis
    }
    fn expect(&self, op: &ModeOperator) -> Result<C64> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch("operator and state bases differ".into()));
        }
        Ok(linalg::trace_product(op.matrix(), &self.matrix))
    }
    fn density(&self) -> DensityOperator {
        self.clone()
    }
    fn populations(&self) -> Vec<f64> {
        (0..self.basis.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }
}

pub fn expectation<S: QuantumState + ?Sized>(state: &S, op: &ModeOperator) -> Result<C64> {
    state.expect(op)
}

/// `<O²> - <O>²` for Hermitian `O`.
pub fn variance<S: QuantumState + ?Sized>(state: &S, op: &ModeOperator) -> Result<f64> {
    let dev = linalg::hermitian_deviation(op.matrix());
    if dev > tol::HERMITIAN {
        return Err(Error::NotHermitian(dev));
    }
    let m = state.expect(op)?.re;
    let m2 = state.expect_product(op, op)?.re;
    Ok(m2 - m * m)
}

/// Functional form of [`DensityOperator::partial_trace`].
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

//! Super-selection diagnostics, U(1) twirling, separable states and the
//! seeded separable-state sampler.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::fock::{total_number_op, DensityOperator, FockBasis, ModeOperator, StateVector, C64};
use crate::linalg;
use crate::tol;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct SsrReport {
    /// Max-abs entry of `[N, ρ]`.
    pub defect: f64,
    pub compliant: bool,
    /// Probability of each eigenvalue of the number operator.
    pub sector_populations: BTreeMap<usize, f64>,
}

fn number_levels(number_op: &ModeOperator) -> Result<Vec<f64>> {
    number_op
        .diagonal_values()
        .ok_or_else(|| Error::InvalidParameter("number operator must be diagonal in the Fock basis".into()))
}

pub fn ssr_check(rho: &DensityOperator, number_op: &ModeOperator) -> Result<SsrReport> {
    if number_op.basis() != rho.basis() {
        return Err(Error::BasisMismatch("number operator and state bases differ".into()));
    }
    let n = number_levels(number_op)?;
    let m = rho.matrix();
    let d = n.len();
    let mut defect: f64 = 0.0;
    let mut pops = BTreeMap::new();
    for i in 0..d {
        *pops.entry(n[i].round().max(0.0) as usize).or_insert(0.0) += m[(i, i)].re;
        for j in 0..d {
            defect = defect.max(((n[i] - n[j]) * m[(i, j)]).norm());
        }
    }
    Ok(SsrReport { defect, compliant: defect < tol::SSR, sector_populations: pops })
}

/// SSR check against the total number of all modes.
pub fn global_ssr_check(rho: &DensityOperator) -> Result<SsrReport> {
    ssr_check(rho, &total_number_op(rho.basis()))
}

/// Exact dephasing between eigenspaces of `number_op`.
pub fn twirl(rho: &DensityOperator, number_op: &ModeOperator) -> Result<DensityOperator> {
    if number_op.basis() != rho.basis() {
        return Err(Error::BasisMismatch("number operator and state bases differ".into()));
    }
    let n = number_levels(number_op)?;
    let m = DMatrix::from_fn(n.len(), n.len(), |i, j| {
        if (n[i] - n[j]).abs() < 0.5 { rho.matrix()[(i, j)] } else { ZERO }
    });
    DensityOperator::from_matrix_unchecked(rho.basis().clone(), m)
}

/// `(ρ̂₁, ρ̂₂)` with `ρ̂₁` the twirled part and `ρ̂₂ = ρ - ρ̂₁` the coherences.
pub fn ssr_split(rho: &DensityOperator, number_op: &ModeOperator) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let t = twirl(rho, number_op)?;
    let rest = rho.matrix() - t.matrix();
    Ok((t.matrix().clone(), rest))
}

/// `Σ_R P_R ⊗_X ρ_R^X` with subsystems given as contiguous ascending mode blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableSpec {
    pub weights: Vec<f64>,
    pub components: Vec<Vec<DensityOperator>>,
    pub subsystems: Vec<Vec<usize>>,
}

impl SeparableSpec {
    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() || self.weights.len() != self.components.len() {
            return invalid("separable spec needs one weight per component");
        }
        if self.weights.iter().any(|&w| w < 0.0) {
            return invalid("negative separable weight");
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return invalid(format!("separable weights sum to {total}"));
        }
        let mut next = 0;
        for s in &self.subsystems {
            if s.is_empty() {
                return invalid("empty subsystem");
            }
            for &m in s {
                if m != next {
                    return Err(Error::Unsupported("subsystems must be contiguous ascending mode blocks".into()));
                }
                next += 1;
            }
        }
        for comp in &self.components {
            if comp.len() != self.subsystems.len() {
                return invalid("component count differs from subsystem count");
            }
            for (k, (rho, s)) in comp.iter().zip(&self.subsystems).enumerate() {
                if rho.basis().n_modes() != s.len() {
                    return Err(Error::BasisMismatch("component basis does not match its subsystem".into()));
                }
                if rho.basis() != self.components[0][k].basis() {
                    return Err(Error::BasisMismatch("components of one subsystem use different bases".into()));
                }
            }
        }
        Ok(())
    }
}

pub fn separable_state(spec: &SeparableSpec) -> Result<DensityOperator> {
    spec.validate()?;
    let mut parts = Vec::with_capacity(spec.weights.len());
    for comp in &spec.components {
        let mut acc = comp[0].clone();
        for rho in &comp[1..] {
            acc = acc.tensor(rho)?;
        }
        parts.push(acc);
    }
    let weighted: Vec<(f64, &DensityOperator)> = spec.weights.iter().copied().zip(parts.iter()).collect();
    DensityOperator::mixture(&weighted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Each subsystem component block-diagonal in its own total number.
    LocalSsr,
    /// Each subsystem component a pure state of definite total number.
    PairFixedN,
    /// Two-mode subsystems holding exactly one boson.
    OneBosonPair,
    /// Arbitrary subsystem states; violates local SSR in general.
    Unrestricted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub n_components: usize,
    /// Mode count of each subsystem; modes are assigned in order.
    pub subsystems: Vec<usize>,
    pub mode: SampleMode,
    /// Highest occupancy any mode is populated with.
    pub max_occupancy: usize,
    /// Basis cutoff per mode, at least `max_occupancy`.
    pub cutoff: usize,
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect::<Vec<f64>>();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// `A A†` restricted to the listed basis indices, unnormalized.
fn random_block(rng: &mut ChaCha8Rng, d: usize, idx: &[usize]) -> DMatrix<C64> {
    let k = idx.len();
    let a = DMatrix::from_fn(k, k, |_, _| gaussian(rng));
    let b = &a * a.adjoint();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(i, j)] = b[(r, c)];
        }
    }
    m
}

fn sample_component(rng: &mut ChaCha8Rng, basis: &FockBasis, cfg: &SampleConfig) -> Result<DensityOperator> {
    let d = basis.dim();
    let allowed: Vec<usize> =
        (0..d).filter(|&i| basis.occupancy(i).iter().all(|&o| o <= cfg.max_occupancy)).collect();
    let mut sectors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &allowed {
        sectors.entry(basis.total_number(i)).or_default().push(i);
    }
    let m = match cfg.mode {
        SampleMode::Unrestricted => random_block(rng, d, &allowed),
        SampleMode::LocalSsr => {
            let w = random_weights(rng, sectors.len());
            let mut m = DMatrix::from_element(d, d, ZERO);
            for ((_, idx), wk) in sectors.iter().zip(w) {
                let blk = random_block(rng, d, idx);
                let tr = blk.trace().re;
                m += blk * C64::new(wk / tr, 0.0);
            }
            m
        }
        SampleMode::PairFixedN => {
            let keys: Vec<usize> = sectors.keys().copied().collect();
            let n = keys[rng.random_range(0..keys.len())];
            let idx = &sectors[&n];
            let mut amps = DVector::from_element(d, ZERO);
            for &i in idx {
                amps[i] = gaussian(rng);
            }
            StateVector::new(basis.clone(), amps)?.to_density().matrix().clone()
        }
        SampleMode::OneBosonPair => {
            let p: f64 = rng.random();
            let r: f64 = rng.random::<f64>() * (p * (1.0 - p)).sqrt();
            let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let i10 = basis.index_of(&[1, 0]).expect("cutoff >= 1");
            let i01 = basis.index_of(&[0, 1]).expect("cutoff >= 1");
            let mut m = DMatrix::from_element(d, d, ZERO);
            m[(i10, i10)] = C64::new(p, 0.0);
            m[(i01, i01)] = C64::new(1.0 - p, 0.0);
            m[(i10, i01)] = C64::from_polar(r, phi);
            m[(i01, i10)] = C64::from_polar(r, -phi);
            m
        }
    };
    let tr = m.trace().re;
    DensityOperator::from_matrix_unchecked(basis.clone(), m.unscale(tr))
}

/// Deterministic random separable state description.
pub fn sample_separable(seed: u64, cfg: &SampleConfig) -> Result<SeparableSpec> {
    if cfg.n_components == 0 || cfg.subsystems.is_empty() || cfg.subsystems.contains(&0) {
        return invalid("sampler needs at least one component and non-empty subsystems");
    }
    if cfg.cutoff < cfg.max_occupancy {
        return invalid("cutoff below max_occupancy");
    }
    if cfg.mode == SampleMode::OneBosonPair && (cfg.subsystems.iter().any(|&s| s != 2) || cfg.max_occupancy < 1) {
        return invalid("one_boson_pair needs two-mode subsystems and max_occupancy >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = random_weights(&mut rng, cfg.n_components);
    let mut subsystems = Vec::new();
    let mut next = 0;
    for &k in &cfg.subsystems {
        subsystems.push((next..next + k).collect::<Vec<usize>>());
        next += k;
    }
    let bases: Vec<FockBasis> =
        cfg.subsystems.iter().map(|&k| FockBasis::uniform(k, cfg.cutoff)).collect::<Result<_>>()?;
    let mut components = Vec::with_capacity(cfg.n_components);
    for _ in 0..cfg.n_components {
        let comp = bases.iter().map(|b| sample_component(&mut rng, b, cfg)).collect::<Result<Vec<_>>>()?;
        components.push(comp);
    }
    Ok(SeparableSpec { weights, components, subsystems })
}

/// Random density operator `A A† / Tr` on the whole basis.
pub fn random_density(seed: u64, basis: &FockBasis) -> DensityOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx: Vec<usize> = (0..basis.dim()).collect();
    let m = random_block(&mut rng, basis.dim(), &idx);
    let tr = m.trace().re;
    DensityOperator::from_matrix_unchecked(basis.clone(), m.unscale(tr)).expect("square matrix")
}

/// Random normalized pure state on the whole basis.
pub fn random_pure(seed: u64, basis: &FockBasis) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = DVector::from_fn(basis.dim(), |_, _| gaussian(&mut rng));
    StateVector::new(basis.clone(), amps).expect("non-zero Gaussian vector")
}

fn highest_occupied(system: &StateVector) -> Result<usize> {
    if system.basis().n_modes() != 1 || system.basis().is_sector() {
        return invalid("reference maps act on a single-mode system state");
    }
    Ok((0..system.basis().dim()).rev().find(|&m| system.amplitudes()[m].norm() > 1e-15).unwrap_or(0))
}

/// `Σ_m C_m |m>_S |n_ref - m>_R` and the reduced system state.
pub fn internalize_reference(system: &StateVector, n_ref: usize) -> Result<(StateVector, DensityOperator)> {
    let m_max = highest_occupied(system)?;
    if n_ref < m_max {
        return invalid(format!("n_ref = {n_ref} below the highest occupied level {m_max}"));
    }
    let basis = FockBasis::new(vec![system.basis().cutoffs()[0], n_ref])?;
    let terms: Vec<(C64, Vec<usize>)> =
        (0..=m_max).map(|m| (system.amplitudes()[m], vec![m, n_ref - m])).collect();
    let joint = StateVector::from_terms(&basis, &terms)?;
    let reduced = joint.to_density().partial_trace(&[0])?;
    Ok((joint, reduced))
}

/// Inverse of [`internalize_reference`]: recovers the system amplitudes.
pub fn externalize_reference(joint: &StateVector, n_ref: usize) -> Result<StateVector> {
    let b = joint.basis();
    if b.n_modes() != 2 || b.is_sector() || b.cutoffs()[1] < n_ref {
        return invalid("externalization needs a two-mode system-reference basis");
    }
    let cs = b.cutoffs()[0];
    let mut amps = DVector::from_element(cs + 1, ZERO);
    let mut captured = 0.0;
    for m in 0..=cs.min(n_ref) {
        let z = joint.amplitudes()[b.index_of(&[m, n_ref - m]).expect("in basis")];
        amps[m] = z;
        captured += z.norm_sqr();
    }
    if (captured - 1.0).abs() > 1e-10 {
        return Err(Error::Invariant("joint state is not of internalized form".into()));
    }
    StateVector::new(FockBasis::new(vec![cs])?, amps)
}

/// `½|+><+| ⊗ |φ1><φ1| + ½|-><-| ⊗ |φ2><φ2|` with `φ1 = α|0> + β|1>` and
/// `φ2 = -β*|0> + α*|1>`, plus its global SSR report.
pub fn appendix_f_overall_state(alpha: C64, beta: C64) -> Result<(DensityOperator, SsrReport)> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return invalid(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1"));
    }
    let b1 = FockBasis::new(vec![1])?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |x: C64, y: C64| StateVector::new(b1.clone(), DVector::from_vec(vec![x, y])).map(|p| p.to_density());
    let plus = v(C64::new(s, 0.0), C64::new(s, 0.0))?;
    let minus = v(C64::new(s, 0.0), C64::new(-s, 0.0))?;
    let phi1 = v(alpha, beta)?;
    let phi2 = v(-beta.conj(), alpha.conj())?;
    let spec = SeparableSpec {
        weights: vec![0.5, 0.5],
        components: vec![vec![plus, phi1], vec![minus, phi2]],
        subsystems: vec![vec![0], vec![1]],
    };
    let rho = separable_state(&spec)?;
    let report = global_ssr_check(&rho)?;
    Ok((rho, report))
}

/// Largest entry of the difference between two density matrices.
pub fn max_deviation(a: &DensityOperator, b: &DensityOperator) -> f64 {
    linalg::max_abs(&(a.matrix() - b.matrix()))
}

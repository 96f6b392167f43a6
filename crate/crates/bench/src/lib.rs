//! Fixtures shared by the criterion benches.

use modent::spin::spin_frame;
use modent::ssr::{sample_separable, separable_state, SampleConfig, SampleMode};
use modent::states::relative_phase_state;
use modent::{DensityOperator, FockBasis, SpinFrame, StateVector};

/// Relative-phase state on the `N` sector with its original spin frame.
pub fn sector_fixture(n: usize) -> (StateVector, SpinFrame) {
    let psi = relative_phase_state(n, 0).expect("valid N");
    let frame = spin_frame(psi.basis(), 0, 1).expect("two modes");
    (psi, frame)
}

/// Local-SSR separable two-mode state padded so every spin test is exact.
pub fn separable_fixture(seed: u64, occupancy: usize) -> (DensityOperator, SpinFrame) {
    let cfg = SampleConfig {
        n_components: 3,
        subsystems: vec![1, 1],
        mode: SampleMode::LocalSsr,
        max_occupancy: occupancy,
        cutoff: occupancy,
    };
    let rho = separable_state(&sample_separable(seed, &cfg).expect("valid config")).expect("valid spec");
    let padded = rho.embed(&FockBasis::uniform(2, 2 * occupancy).expect("cutoff")).expect("larger basis");
    let frame = spin_frame(padded.basis(), 0, 1).expect("two modes");
    (padded, frame)
}

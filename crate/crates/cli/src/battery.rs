//! Test selection by mode count.

use modent::spin::{collective_frame, principal_frame, spin_frame};
use modent::nalgebra::Matrix3;
use modent::states::StateRepr;
use modent::witnesses::{
    check_ladder_headroom, check_spin_headroom, chsh_optimal_axes, chsh_value, ghz_hvt_contradiction,
    hillery_variance_test, pair_mode_tests, pair_qubit_observable, sorensen_test, spin_squeezing_report,
    two_mode_battery,
};
use modent::{Error, EulerAngles, FockBasis, NamedState, QuantumState, Result, WitnessVerdict};

/// Embed a two-mode product state into larger cutoffs when its spin or
/// ladder operators would feel the truncation.
pub fn with_headroom(state: &StateRepr) -> Result<StateRepr> {
    let basis = state.basis();
    if basis.is_sector() {
        return Ok(state.clone());
    }
    let s = spin_frame(basis, 0, 1)?;
    if check_spin_headroom(state, &s).is_ok() && check_ladder_headroom(state, &[0, 1]).is_ok() {
        return Ok(state.clone());
    }
    let c = *basis.cutoffs().iter().max().expect("two modes");
    state.embed(&FockBasis::uniform(2, (2 * c).max(c + 1))?)
}

/// The two-mode battery in the original frame plus spin squeezing and the
/// Hillery variance test in the natural (or principal) frame.
pub fn two_mode(state: &StateRepr, euler: Option<&EulerAngles>) -> Result<Vec<WitnessVerdict>> {
    let state = with_headroom(state)?;
    let s = spin_frame(state.basis(), 0, 1)?;
    let mut out = two_mode_battery(&state, &s)?;
    let rotation = match euler {
        Some(e) => e.rotation_matrix(),
        None => principal_frame(&state, &s)?.axes.rotation,
    };
    let j = s.rotated(&rotation);
    let mut rotated = spin_squeezing_report(&state, &j)?;
    rotated.push(hillery_variance_test(&state, &j)?.renamed("hillery_variance_J"));
    for v in rotated {
        let v = match v.name.as_str() {
            "planar_parallel" | "planar_perp" => {
                let name = format!("{}_J", v.name);
                v.renamed(name)
            }
            _ => v,
        };
        out.push(if sound_in_frame(&v.name, &rotation) { v } else { v.not_a_witness() });
    }
    Ok(out)
}

/// Whether a rotated-frame verdict can still signal entanglement. Local-SSR
/// separable states have `<S_x> = <S_y> = 0`, so a bound built from means
/// is safe only when its axes carry no `S_z` component; the Hillery sum needs
/// `J_z = ±S_z`.
fn sound_in_frame(name: &str, rotation: &Matrix3<f64>) -> bool {
    const TOL: f64 = 1e-9;
    let axis = |c: char| "xyz".find(c);
    let flat = |k: usize| rotation[(2, k)].abs() < TOL;
    let others = |a: usize| (0..3).filter(|&k| k != a).all(flat);
    let rest = name.strip_prefix("spin_squeeze_J").or_else(|| name.strip_prefix("xi_squared_J"));
    match (name, rest) {
        ("hillery_variance_J", _) => (rotation[(2, 2)].abs() - 1.0).abs() < TOL,
        ("planar_parallel_J", _) => flat(0),
        ("planar_perp_J", _) => false,
        (_, Some(rest)) => {
            let mut chars = rest.chars();
            let a = chars.next().and_then(axis);
            match (a, chars.as_str()) {
                (Some(a), "") | (Some(a), "_vs_perp") => others(a),
                (Some(_), tail) => tail.strip_prefix("_vs_J").and_then(|t| t.chars().next()).and_then(axis).is_some_and(flat),
                _ => false,
            }
        }
        _ => true,
    }
}

pub fn reduced(state: &StateRepr, modes: &[usize]) -> Result<StateRepr> {
    Ok(StateRepr::Mixed(state.density().partial_trace(modes)?))
}

fn ghz_verdicts() -> Result<Vec<WitnessVerdict>> {
    let g = ghz_hvt_contradiction()?;
    let mut out: Vec<WitnessVerdict> = (0..4)
        .map(|k| {
            WitnessVerdict::less(
                format!("ghz_eigen_{}", g.labels[k]),
                g.residuals[k],
                1e-12,
                format!("{} |GHZ> = {} |GHZ>", g.labels[k], g.expected[k]),
            )
            .not_a_witness()
        })
        .collect();
    out.push(WitnessVerdict::less(
        "ghz_hvt_assignments",
        g.consistent_assignments as f64,
        1.0,
        format!("no local +-1 assignment out of {} reproduces all four products", g.assignments_checked),
    ));
    Ok(out)
}

pub fn run(named: &NamedState) -> Result<Vec<WitnessVerdict>> {
    let state = &named.state;
    match state.basis().n_modes() {
        2 => two_mode(state, named.frame.as_ref()),
        3 => {
            let mut out = two_mode(&reduced(state, &[0, 1])?, None)?;
            if named.label == "ghz" {
                out.extend(ghz_verdicts()?);
            }
            Ok(out)
        }
        4 => {
            let basis = state.basis().clone();
            let mut out = pair_mode_tests(state)?;
            let frame = collective_frame(&basis, &[(0, 1), (2, 3)])?;
            if check_spin_headroom(state, &frame).is_ok() {
                out.push(sorensen_test(state, &frame)?.renamed("sorensen_collective"));
            }
            if basis.cutoffs().iter().all(|&c| c == 1) {
                let axes = chsh_optimal_axes();
                let pairs = [(0, 1), (0, 1), (2, 3), (2, 3)];
                let obs = pairs
                    .iter()
                    .zip(axes)
                    .map(|(&(a, b), axis)| pair_qubit_observable(&basis, a, b, axis))
                    .collect::<Result<Vec<_>>>()?;
                out.push(chsh_value(state, &obs[0], &obs[1], &obs[2], &obs[3])?.renamed("chsh_pairs"));
            }
            out.extend(two_mode(&reduced(state, &[0, 2])?, None)?);
            Ok(out)
        }
        n => Err(Error::Unsupported(format!("the witness battery covers 2 to 4 modes, not {n}"))),
    }
}

mod args;
mod battery;

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use modent::processes::{dowling_fock, dowling_full, vacuum_interferometer, ProcessResult};
use modent::regions::{feasible_squeezed_fraction, format_sig, region_grid, write_region_csv};
use modent::spin::{bloch_and_covariance, collective_frame, principal_axes, spin_frame, BlochReport, SpinFrame};
use modent::ssr::{sample_separable, separable_state, SampleConfig, SampleMode};
use modent::witnesses::check_spin_headroom;
use modent::{Error, NamedState, QuantumState, StateRepr, WitnessVerdict, C64};
use serde_json::{json, Map, Value};

use args::{Cli, Command, Format, OutputArgs, ProcessKind, StateArgs};

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::ModeOutOfRange { .. } | Error::Unsupported(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::State { state, output } => {
            json_only(&output)?;
            let named = build(&state)?;
            emit(&output, &state_summary(&named))
        }
        Command::Analyze { state, output } => {
            json_only(&output)?;
            let named = build(&state)?;
            emit(&output, &analyze(&named)?)
        }
        Command::Witness { state, all, output } => {
            json_only(&output)?;
            let named = build(&state)?;
            let results = battery::run(&named)?;
            let doc = json!({ "state": state_json(&named), "results": verdicts_json(&results, all) });
            emit(&output, &doc)
        }
        Command::Region { j, xi, points, output } => {
            let rows = region_grid(j, xi, points)?;
            match output.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_region_csv(&rows, j, &mut buf)?;
                    write_bytes(&output, &buf)
                }
                Format::Json => emit(
                    &output,
                    &json!({
                        "state": { "J": j, "xi": xi, "points": points },
                        "feasible_squeezed_fraction": feasible_squeezed_fraction(&rows),
                        "rows": rows,
                    }),
                ),
            }
        }
        Command::Process { kind, phi, kappa, n, theta, chi, mixed, output } => {
            let (params, result) = match kind {
                ProcessKind::DowlingFock => {
                    (json!({ "kind": "dowling_fock", "N": n, "phi": phi, "kappa": kappa }), dowling_fock(n, phi, kappa)?)
                }
                ProcessKind::DowlingFull => (
                    json!({ "kind": "dowling_full", "n_bec": n, "phi": phi, "kappa": kappa }),
                    dowling_full(n, kappa, 1.0, phi, None)?,
                ),
                ProcessKind::Interferometer => {
                    let alpha = C64::new(theta.cos(), 0.0);
                    let beta = C64::from_polar(theta.sin(), chi);
                    (
                        json!({ "kind": "interferometer", "theta": theta, "chi": chi, "phi": phi, "mixed": mixed }),
                        vacuum_interferometer(alpha, beta, 1.0, phi, mixed)?,
                    )
                }
            };
            match output.format {
                Format::Csv => write_bytes(&output, process_csv(&result).as_bytes()),
                Format::Json => emit(&output, &process_json(params, &result)),
            }
        }
        Command::Suite { samples, output } => {
            json_only(&output)?;
            let doc = suite(output.seed, samples)?;
            emit(&output, &doc)?;
            let triggers = doc["soundness"]["triggers"].as_u64().unwrap_or(0);
            if triggers > 0 {
                return Err(Failure::Numeric(format!("{triggers} witness triggers on separable samples")));
            }
            Ok(())
        }
    }
}

fn json_only(output: &OutputArgs) -> Outcome<()> {
    match output.format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::Usage("CSV output is available for `region` and `process` only".into())),
    }
}

fn build(args: &StateArgs) -> Outcome<NamedState> {
    Ok(NamedState::build(&args.state, &args.params())?)
}

fn emit(output: &OutputArgs, doc: &Value) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| Failure::Numeric(e.to_string()))?;
    text.push('\n');
    write_bytes(output, text.as_bytes())
}

fn write_bytes(output: &OutputArgs, bytes: &[u8]) -> Outcome<()> {
    let io_err = |e: io::Error| Failure::Numeric(format!("cannot write output: {e}"));
    match &output.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(bytes)).map_err(io_err),
        None => io::stdout().lock().write_all(bytes).map_err(io_err),
    }
}

fn state_json(named: &NamedState) -> Value {
    let mut m = Map::new();
    m.insert("label".into(), json!(named.label));
    for (k, v) in &named.params {
        m.insert(k.clone(), json!(v));
    }
    Value::Object(m)
}

fn verdicts_json(results: &[WitnessVerdict], all: bool) -> Value {
    results
        .iter()
        .filter(|v| all || (v.applicable && v.witness))
        .map(|v| json!({ "name": v.name, "lhs": v.lhs, "rhs": v.rhs, "triggered": v.triggered, "paper_eq": v.paper_eq }))
        .collect()
}

fn state_summary(named: &NamedState) -> Value {
    let s = &named.state;
    let basis = s.basis();
    let rho = s.density();
    let populations: Vec<Value> = s
        .populations()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-15)
        .map(|(i, &p)| json!({ "occupancy": basis.occupancy(i), "probability": p }))
        .collect();
    json!({
        "state": state_json(named),
        "basis": { "cutoffs": basis.cutoffs(), "sector_total": basis.sector_total(), "dim": basis.dim() },
        "pure": matches!(s, StateRepr::Pure(_)),
        "trace": rho.trace(),
        "purity": rho.purity(),
        "populations": populations,
    })
}

fn analysis_frame(state: &StateRepr) -> Outcome<SpinFrame> {
    let basis = state.basis();
    let frame = match basis.n_modes() {
        1 => return Err(Failure::Usage("spin analysis needs at least two modes".into())),
        n if n % 2 == 0 && n > 2 => {
            let pairs: Vec<_> = (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect();
            collective_frame(basis, &pairs)?
        }
        _ => spin_frame(basis, 0, 1)?,
    };
    if !basis.is_sector() {
        check_spin_headroom(state, &frame)?;
    }
    Ok(frame)
}

fn matrix_rows(m: &impl std::ops::Index<(usize, usize), Output = f64>) -> Vec<[f64; 3]> {
    (0..3).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]).collect()
}

fn report_json(r: &BlochReport) -> Value {
    json!({ "bloch": r.mean, "var": r.variances(), "cov": matrix_rows(&r.cov), "hup_residuals": r.hup_residuals() })
}

fn analyze(named: &NamedState) -> Outcome<Value> {
    let state = match named.state.basis().n_modes() {
        2 => battery::with_headroom(&named.state)?,
        3 => battery::with_headroom(&battery::reduced(&named.state, &[0, 1])?)?,
        _ => named.state.clone(),
    };
    let s = analysis_frame(&state)?;
    let original = bloch_and_covariance(&state, &s)?;
    let natural = match &named.frame {
        Some(e) => Some((e, bloch_and_covariance(&state, &s.rotated_euler(e))?)),
        None => None,
    };
    let principal = principal_axes(&original);
    let mut doc = Map::new();
    doc.insert("state".into(), state_json(named));
    doc.insert("modes".into(), json!(s.pairs));
    let (symbol, euler, main) = match &natural {
        Some((e, r)) => ('J', [e.alpha, e.beta, e.gamma], r),
        None => ('S', [0.0, 0.0, 0.0], &original),
    };
    doc.insert("frame".into(), json!({ "symbol": symbol.to_string(), "euler": euler }));
    if let Value::Object(fields) = report_json(main) {
        doc.extend(fields);
    }
    doc.insert("original".into(), report_json(&original));
    let pe = principal.euler;
    doc.insert(
        "principal".into(),
        json!({ "variances": principal.variances, "euler": [pe.alpha, pe.beta, pe.gamma], "axes": matrix_rows(&principal.rotation) }),
    );
    Ok(Value::Object(doc))
}

fn process_json(params: Value, r: &ProcessResult) -> Value {
    let stages: Vec<Value> = r.stages.iter().map(|(name, t)| json!({ "name": name, "duration": t })).collect();
    json!({
        "state": params,
        "observables": r.observables,
        "stages": stages,
        "final_state": {
            "cutoffs": r.final_state.basis().cutoffs(),
            "trace": r.final_state.trace(),
            "purity": r.final_state.purity(),
        },
    })
}

fn process_csv(r: &ProcessResult) -> String {
    let mut out = String::from("observable,value\n");
    for (k, v) in &r.observables {
        out.push_str(&format!("{k},{}\n", format_sig(*v, 12)));
    }
    out
}

/// Label, `N`, `theta`, `|alpha|`.
type Entry = (&'static str, Option<usize>, Option<f64>, Option<f64>);

const CATALOGUE: [Entry; 8] = [
    ("noon", Some(4), Some(std::f64::consts::FRAC_PI_4), None),
    ("binomial", Some(4), Some(std::f64::consts::FRAC_PI_6), None),
    ("relative_phase", Some(100), None, None),
    ("mixed_two_mode_coherent", None, None, Some(std::f64::consts::SQRT_2)),
    ("bell_one_boson", None, None, None),
    ("bell_two_boson", None, None, None),
    ("verstraete", None, None, None),
    ("ghz", None, None, None),
];

fn suite(seed: u64, samples: u64) -> Outcome<Value> {
    let mut catalogue = Vec::new();
    for (label, n, theta, abs_alpha) in CATALOGUE {
        let params = modent::states::StateParams { n, theta, abs_alpha, ..Default::default() };
        let named = NamedState::build(label, &params)?;
        let results = battery::run(&named)?;
        let triggered: Vec<&str> =
            results.iter().filter(|v| v.signals_entanglement()).map(|v| v.name.as_str()).collect();
        catalogue.push(json!({
            "state": state_json(&named),
            "triggered": triggered,
            "results": verdicts_json(&results, false),
        }));
    }

    let mut verdicts = 0usize;
    let mut triggers = Vec::new();
    let families = [(SampleMode::LocalSsr, "local_ssr"), (SampleMode::OneBosonPair, "one_boson_pair")];
    for (fi, (mode, family)) in families.into_iter().enumerate() {
        for k in 0..samples {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(k + fi as u64 * samples);
            let cfg = match mode {
                SampleMode::LocalSsr => {
                    let occ = 1 + (s % 3) as usize;
                    SampleConfig {
                        n_components: 1 + ((s / 3) % 4) as usize,
                        subsystems: vec![1, 1],
                        mode,
                        max_occupancy: occ,
                        cutoff: occ,
                    }
                }
                _ => SampleConfig {
                    n_components: 1 + ((s / 3) % 4) as usize,
                    subsystems: vec![2, 2],
                    mode,
                    max_occupancy: 1,
                    cutoff: 1,
                },
            };
            let rho = separable_state(&sample_separable(s, &cfg)?)?;
            let named = NamedState {
                label: family.into(),
                params: Default::default(),
                state: StateRepr::Mixed(rho),
                frame: None,
            };
            for v in battery::run(&named)?.iter().filter(|v| v.applicable) {
                verdicts += 1;
                if v.signals_entanglement() {
                    triggers.push(json!({ "family": family, "sample_seed": s, "name": v.name }));
                }
            }
        }
    }

    let regions: Vec<Value> = [(1.0, 10.0), (1000.0, 1.0)]
        .into_iter()
        .map(|(j, xi)| {
            region_grid(j, xi, 200)
                .map(|rows| json!({ "J": j, "xi": xi, "points": 200, "feasible_squeezed_fraction": feasible_squeezed_fraction(&rows) }))
        })
        .collect::<modent::Result<_>>()?;

    Ok(json!({
        "seed": seed,
        "catalogue": catalogue,
        "soundness": {
            "samples_per_family": samples,
            "applicable_verdicts": verdicts,
            "triggers": triggers.len(),
            "triggered": triggers,
        },
        "regions": regions,
    }))
}

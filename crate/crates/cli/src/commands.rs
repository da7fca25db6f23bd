use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use belldisc_core::claims::{all_passed, run_claims};
use belldisc_core::detection::pattern_probabilities;
use belldisc_core::{
    bell_state, cascade_experiment, discriminate, evolve_circuit, outcome_distribution, BellKind,
    CircuitSpec, DetectorConfig, Error, ModeLabel, OccupationVector, PhotonicState, PnpSigns,
    SearchSpace,
};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::report::{
    CascadeResult, DiscriminateResult, Report, SearchReport, SimulateResult, VerifyResult,
};
use crate::{Cli, Command, DetectorArgs};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::usage(format!(
            "{}: parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn load_circuit(path: &Path) -> Result<CircuitSpec, Failure> {
    let spec: CircuitSpec = read_json(path)?;
    spec.validate()
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(spec)
}

fn load_state(path: &Path) -> Result<PhotonicState, Failure> {
    let state: PhotonicState = read_json(path)?;
    Ok(state.normalize()?)
}

fn write_report<T: Serialize>(cli: &Cli, report: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Failure::io(format!("cannot serialize report: {e}")))?;
    match &cli.out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| Failure::io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Human-readable lines go to stdout unless the JSON report does.
fn say(cli: &Cli, line: &str) {
    if cli.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn detector_config(args: &DetectorArgs, spec: &CircuitSpec) -> Result<DetectorConfig, Failure> {
    let mut cfg = DetectorConfig::full(spec.spatial_mode_count)
        .with_capabilities(!args.no_polarization, !args.threshold);
    if !args.monitor.is_empty() {
        cfg.monitored_spatial_modes = args.monitor.iter().copied().collect();
    }
    cfg.validate(spec.spatial_mode_count)?;
    Ok(cfg)
}

fn input_modes(modes: &[usize]) -> Result<(usize, usize), Failure> {
    match modes {
        [a, b] => Ok((*a, *b)),
        _ => Err(Failure::usage("--input-modes takes exactly two spatial modes")),
    }
}

pub fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Verify { flip_pnp_signs } => verify(&cli, *flip_pnp_signs),
        Command::Simulate {
            circuit,
            state,
            state_file,
            input_modes: modes,
            detectors,
        } => simulate(&cli, circuit, state.as_deref(), state_file.as_deref(), modes, detectors),
        Command::Discriminate {
            circuit,
            input_modes: modes,
            detectors,
        } => discriminate_cmd(&cli, circuit, modes, detectors),
        Command::Search { space } => search(&cli, space.as_deref()),
        Command::Cascade {
            initial,
            state_file,
            stages,
        } => cascade(&cli, initial, state_file.as_deref(), *stages),
    }
}

fn verify(cli: &Cli, flip_pnp_signs: bool) -> CmdResult {
    let signs = if flip_pnp_signs {
        PnpSigns::Literal
    } else {
        PnpSigns::Calibrated
    };
    let claims = run_claims(signs);
    let passed = all_passed(&claims);
    let result = VerifyResult {
        all_passed: passed,
        pnp_signs: signs,
        claims,
    };
    if cli.json || cli.out.is_some() {
        write_report(cli, &Report::new("verify", cli.seed, result.clone()))?;
    }
    if !cli.json {
        for c in &result.claims {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            println!(
                "{tag} {}: {} | expected {} | computed {} | deviation {:.3e} (tol {:e})",
                c.id, c.description, c.expected, c.computed, c.deviation, c.tolerance
            );
        }
        let failed = result.claims.iter().filter(|c| !c.passed).count();
        println!("{} claims, {failed} failed", result.claims.len());
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn simulate(
    cli: &Cli,
    circuit: &Path,
    state: Option<&str>,
    state_file: Option<&Path>,
    modes: &[usize],
    detectors: &DetectorArgs,
) -> CmdResult {
    let spec = load_circuit(circuit)?;
    let input = match (state, state_file) {
        (_, Some(path)) => load_state(path)?,
        (Some(sel), None) => {
            let kind: BellKind = sel.parse()?;
            let (a, b) = input_modes(modes)?;
            bell_state(kind, a, b)?
        }
        (None, None) => return Err(Failure::usage("give --state or --state-file")),
    };
    let cfg = detector_config(detectors, &spec)?;
    let output = evolve_circuit(&input, &spec)?;
    let distribution = outcome_distribution(&output, &cfg)?;
    let (split_probability, bunch_probability) = match pattern_probabilities(&distribution) {
        Ok((s, b)) => (Some(s), Some(b)),
        Err(_) => (None, None),
    };
    for (event, p) in distribution.iter() {
        say(cli, &format!("{p:.12}  {event}"));
    }
    let result = SimulateResult {
        circuit: spec,
        input,
        output,
        detectors: cfg,
        distribution,
        split_probability,
        bunch_probability,
    };
    write_report(cli, &Report::new("simulate", cli.seed, result))?;
    Ok(ExitCode::SUCCESS)
}

fn discriminate_cmd(cli: &Cli, circuit: &Path, modes: &[usize], detectors: &DetectorArgs) -> CmdResult {
    let spec = load_circuit(circuit)?;
    let cfg = detector_config(detectors, &spec)?;
    let modes = input_modes(modes)?;
    let report = discriminate(&spec, &cfg, modes)?;
    say(
        cli,
        &format!(
            "bayes_success = {:.12}, unambiguous_success = {:.12}",
            report.bayes_success, report.unambiguous_success
        ),
    );
    let result = DiscriminateResult {
        circuit: spec,
        detectors: cfg,
        input_modes: modes,
        report,
    };
    write_report(cli, &Report::new("discriminate", cli.seed, result))?;
    Ok(ExitCode::SUCCESS)
}

fn search(cli: &Cli, space: Option<&Path>) -> CmdResult {
    let (space, family) = match space {
        Some(path) => {
            let s: SearchSpace = read_json(path)?;
            s.validate()
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            (s, format!("user-supplied family from {}", path.display()))
        }
        None => (
            SearchSpace::desk_default(),
            "built-in desk-scale family chosen by this tool (3 modes, depth <= 4, ppbs/pnpbs/rotator, angles 0, pi/8, pi/4, full-resolving detectors)".to_string(),
        ),
    };
    let start = Instant::now();
    let result = belldisc_core::search_max_success(&space, cli.workers)?;
    let elapsed = start.elapsed();
    say(cli, &format!("family: {family}"));
    say(cli, &format!("circuits evaluated: {}", result.circuits_evaluated));
    say(cli, &format!("best_unambiguous: {:.12}", result.best_unambiguous));
    say(cli, &format!("best_bayes: {:.12}", result.best_bayes));
    say(cli, &format!("elapsed: {:.3} s", elapsed.as_secs_f64()));
    if result.empty_family {
        say(cli, "warning: the family contains no circuits");
    }
    if result.ceiling_exceeded {
        say(
            cli,
            "!!! CEILING EXCEEDED: unambiguous success above 1/2 found; see unambiguous_argmax !!!",
        );
    }
    write_report(
        cli,
        &Report::new("search", cli.seed, SearchReport { family, search: result }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn bunched_selector(sel: &str) -> Result<PhotonicState, Failure> {
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hh = OccupationVector::from_labels([ModeLabel::h(1), ModeLabel::h(1)]);
    let vv = OccupationVector::from_labels([ModeLabel::v(1), ModeLabel::v(1)]);
    let terms = match sel {
        "hv" => vec![(OccupationVector::from_labels([ModeLabel::h(1), ModeLabel::v(1)]), one)],
        "hh" => vec![(hh, one)],
        "vv" => vec![(vv, one)],
        "phi-" => vec![(hh, half), (vv, -half)],
        "phi+" => vec![(hh, half), (vv, half)],
        other => {
            return Err(Failure::usage(format!(
                "unknown bunched input `{other}` (expected hv, hh, vv, phi-, phi+)"
            )))
        }
    };
    Ok(PhotonicState::from_terms(2, terms)?)
}

fn cascade(cli: &Cli, initial: &str, state_file: Option<&Path>, stages: usize) -> CmdResult {
    let initial = match state_file {
        Some(path) => load_state(path)?,
        None => bunched_selector(initial)?,
    };
    let records = cascade_experiment(&initial, stages)?;
    for s in &records {
        say(
            cli,
            &format!(
                "stage {}: P_split = {:.12}, P_bunch = {:.12}, fidelity = {:.12}",
                s.stage, s.split_probability, s.bunch_probability, s.fidelity
            ),
        );
    }
    write_report(
        cli,
        &Report::new("cascade", cli.seed, CascadeResult { initial, stages: records }),
    )?;
    Ok(ExitCode::SUCCESS)
}

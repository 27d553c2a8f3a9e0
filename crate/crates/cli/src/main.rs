//! `qutritc`: compile string exponentials, build QAOA coloring circuits,
//! route parity maps and print resource tables.
//!
//! Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qutrit_core::decompose::{count_gates, DecomposeRequest, Generator, GeneratorJson};
use qutrit_core::io::{read_json, to_json_string, write_json};
use qutrit_core::qaoa::{cost_expectation, qaoa_circuit, resource_report, ColoringProblem, GraphJson, QaoaLayerSpec};
use qutrit_core::routing::{
    naive_baseline_cx_count, steiner_gauss_synthesize, verify_route, ParityJson, TernaryParityMap, Topology,
    TopologyJson,
};
use qutrit_core::sim::MAX_STATE_QUTRITS;
use qutrit_core::weyl::{GellMannString, WeylZString};
use qutrit_core::{apply_circuit, circuit_unitary, phase_distance, Circuit, CircuitJson, StateVector};

#[derive(Parser, Debug)]
#[command(name = "qutritc", version, about = "Qutrit circuit compiler")]
struct Cli {
    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 20240917)]
    seed: u64,
    /// Global-phase tolerance for verification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a Gell-Mann or Weyl string exponential.
    Decompose(DecomposeArgs),
    /// Compare a circuit against a generator's exact unitary.
    Verify(VerifyArgs),
    /// Build a QAOA coloring circuit.
    Qaoa(QaoaArgs),
    /// Route a GF(3) parity map onto a topology.
    Route(RouteArgs),
    /// Qutrit vs qubit resource table.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// Diagonal Gell-Mann indices, e.g. 3,3,8.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["weyl", "generator"])]
    gellmann: Option<Vec<u8>>,
    /// Weyl exponents of all but the last qutrit, e.g. 1,2.
    #[arg(long, value_delimiter = ',', requires = "coeff", conflicts_with = "generator")]
    weyl: Option<Vec<u8>>,
    /// Weyl coefficient as re,im.
    #[arg(long = "coeff", value_delimiter = ',', allow_hyphen_values = true)]
    coeff: Option<Vec<f64>>,
    /// Generator JSON file instead of the flags above.
    #[arg(long)]
    generator: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the generator JSON here.
    #[arg(long)]
    save_generator: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    generator: PathBuf,
}

#[derive(Args, Debug)]
struct QaoaArgs {
    /// Graph JSON: {"nodes": n, "edges": [[a, b], ...]}.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gammas: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    betas: Vec<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RouteArgs {
    /// Parity map JSON: {"n": n, "rows": [[...], ...]}.
    #[arg(long)]
    parity: PathBuf,
    /// Topology JSON: {"n": n, "edges": [[a, b], ...], "order": [...]}.
    #[arg(long, conflicts_with_all = ["grid", "line"])]
    topology: Option<PathBuf>,
    /// Snake-labeled grid, e.g. 3x3.
    #[arg(long, conflicts_with = "line")]
    grid: Option<String>,
    /// Line of n qutrits.
    #[arg(long)]
    line: Option<usize>,
    /// Circuit output; the row-operation log goes to <out stem>.ops.json.
    #[arg(long)]
    out: PathBuf,
    /// Random trit strings checked in addition to the basis vectors.
    #[arg(long, default_value_t = 50)]
    probes: usize,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,9,27")]
    k: Vec<usize>,
    /// Node degree m.
    #[arg(long, default_value_t = 1)]
    degree: usize,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] qutrit_core::Error),
    #[error("phase distance {distance:e} exceeds tolerance {tolerance:e}")]
    Tolerance { distance: f64, tolerance: f64 },
    #[error("routing verification failed: {0}")]
    RouteMismatch(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Tolerance { .. } => "ToleranceExceeded",
            CliError::RouteMismatch(_) => "RouteMismatch",
            CliError::Usage(_) => "Usage",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        print!("{}", to_json_string(value)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

fn decompose(cli: &Cli, a: &DecomposeArgs) -> Result<()> {
    let req = if let Some(path) = &a.generator {
        let j: GeneratorJson = read_json(path)?;
        DecomposeRequest::from_json(&j)?
    } else {
        let theta = a.theta.ok_or_else(|| CliError::Usage("--theta is required without --generator".into()))?;
        let generator = match (&a.gellmann, &a.weyl, &a.coeff) {
            (Some(idx), _, _) => Generator::GellMann(GellMannString::new(idx.clone())?),
            (None, Some(_), Some(c)) if c.len() != 2 => {
                return Err(CliError::Usage(format!("--coeff expects re,im, got {} values", c.len())))
            }
            (None, Some(s), Some(c)) => Generator::Weyl(WeylZString::new(C64::new(c[0], c[1]), s.clone())?),
            _ => return Err(CliError::Usage("one of --gellmann, --weyl or --generator is required".into())),
        };
        DecomposeRequest::from_json(&DecomposeRequest { generator, theta }.to_json())?
    };
    let circuit = req.compile()?;
    write_json(&a.out, &circuit.to_json())?;
    if let Some(g) = &a.save_generator {
        write_json(g, &req.to_json())?;
    }
    let counts = count_gates(&circuit);
    emit(cli.json, &counts, || {
        format!(
            "cx_count {}\nrotation_count {}\nsingle_qutrit {}\ntotal {}\ndepth {}",
            counts.cx_count, counts.rotation_count, counts.single_qutrit_count, counts.total, counts.depth
        )
    })
}

#[derive(Serialize)]
struct VerifyOut {
    phase_distance: f64,
    tolerance: f64,
    ok: bool,
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<()> {
    let circuit = Circuit::from_json(&read_json::<CircuitJson>(&a.circuit)?)?;
    let req = DecomposeRequest::from_json(&read_json::<GeneratorJson>(&a.generator)?)?;
    if circuit.num_qutrits() != req.num_qutrits() {
        return Err(qutrit_core::Error::DimensionMismatch {
            expected: req.num_qutrits(),
            actual: circuit.num_qutrits(),
        }
        .into());
    }
    let d = phase_distance(&circuit_unitary(&circuit)?, &req.exact_unitary()?)?;
    let ok = d <= cli.tolerance;
    emit(cli.json, &VerifyOut { phase_distance: d, tolerance: cli.tolerance, ok }, || {
        format!("phase_distance {d:.3e} {}", if ok { "OK" } else { "FAIL" })
    })?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Tolerance { distance: d, tolerance: cli.tolerance })
    }
}

#[derive(Serialize)]
struct QaoaOut {
    num_qutrits: usize,
    layers: usize,
    cx_count: usize,
    depth: usize,
    total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    expectation: Option<f64>,
}

fn qaoa(cli: &Cli, a: &QaoaArgs) -> Result<()> {
    let problem = ColoringProblem::from_json(&read_json::<GraphJson>(&a.graph)?, a.k)?;
    let spec = QaoaLayerSpec::new(a.gammas.clone(), a.betas.clone())?;
    let circuit = qaoa_circuit(&problem, &spec)?;
    write_json(&a.out, &circuit.to_json())?;
    let n = problem.num_qutrits();
    let expectation = if n <= MAX_STATE_QUTRITS {
        let psi = apply_circuit(&StateVector::zero(n)?, &circuit)?;
        Some(cost_expectation(&psi, &problem)?)
    } else {
        None
    };
    let c = count_gates(&circuit);
    let out = QaoaOut {
        num_qutrits: n,
        layers: spec.layers(),
        cx_count: c.cx_count,
        depth: c.depth,
        total: c.total,
        expectation,
    };
    emit(cli.json, &out, || {
        let mut s = format!(
            "qutrits {n}\nlayers {}\ncx_count {}\ndepth {}\ntotal {}",
            out.layers, c.cx_count, c.depth, c.total
        );
        if let Some(e) = expectation {
            s.push_str(&format!("\nexpectation {e:.12}"));
        }
        s
    })
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Usage(format!("--grid expects ROWSxCOLS, got {s:?}"));
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn ops_path(out: &Path) -> PathBuf {
    out.with_extension("ops.json")
}

#[derive(Serialize)]
struct RouteOut {
    cx_count: usize,
    sigma_count: usize,
    naive_cx: usize,
    basis_ok: usize,
    basis_total: usize,
    probes_ok: usize,
    probes: usize,
    ops: PathBuf,
}

fn route(cli: &Cli, a: &RouteArgs) -> Result<()> {
    let p = TernaryParityMap::from_json(&read_json::<ParityJson>(&a.parity)?)?;
    let topo = match (&a.topology, &a.grid, a.line) {
        (Some(path), _, _) => Topology::from_json(&read_json::<TopologyJson>(path)?)?,
        (None, Some(g), _) => {
            let (r, c) = parse_grid(g)?;
            Topology::grid(r, c)?
        }
        (None, None, Some(n)) => Topology::line(n)?,
        _ => return Err(CliError::Usage("one of --topology, --grid or --line is required".into())),
    };
    let synth = steiner_gauss_synthesize(&p, &topo)?;
    let circuit = synth.implementation();
    let check = verify_route(&p, &topo, &circuit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut probes_ok = 0;
    for _ in 0..a.probes {
        let x: Vec<u8> = (0..p.n()).map(|_| rng.gen_range(0..3u8)).collect();
        probes_ok += (circuit.apply_to_trits(&x)? == p.apply(&x)?) as usize;
    }
    if !check.ok() || probes_ok != a.probes {
        return Err(CliError::RouteMismatch(format!("{check:?}, probes {probes_ok}/{}", a.probes)));
    }
    let ops = ops_path(&a.out);
    write_json(&a.out, &circuit.to_json())?;
    write_json(&ops, &synth.ops())?;
    let out = RouteOut {
        cx_count: synth.cx_count(),
        sigma_count: synth.double_count(),
        naive_cx: naive_baseline_cx_count(&p, &topo)?,
        basis_ok: check.basis_ok,
        basis_total: check.basis_total,
        probes_ok,
        probes: a.probes,
        ops,
    };
    emit(cli.json, &out, || {
        format!(
            "OK {}/{} basis vectors\nOK {}/{} random trit strings\ncx_count {}\nsigma_x12 {}\nnaive_cx {}",
            out.basis_ok, out.basis_total, out.probes_ok, out.probes, out.cx_count, out.sigma_count, out.naive_cx
        )
    })
}

fn report(cli: &Cli, a: &ReportArgs) -> Result<()> {
    let rows = a.k.iter().map(|&k| resource_report(k, a.degree)).collect::<qutrit_core::Result<Vec<_>>>()?;
    emit(cli.json, &rows, || {
        let mut s = format!(
            "{:>4} {:>4} | {:>8} {:>8} {:>8} | {:>8} {:>8} {:>8}\n",
            "k", "m", "depth", "ent", "qutrits", "depth", "ent", "qubits"
        );
        for r in &rows {
            s.push_str(&format!(
                "{:>4} {:>4} | {:>8} {:>8} {:>8} | {:>8} {:>8} {:>8}\n",
                r.k, r.m, r.depth_qutrit, r.ent_qutrit, r.qudits_qutrit, r.depth_qubit, r.ent_qubit, r.qudits_qubit
            ));
        }
        s.trim_end().to_string()
    })
}

fn run(cli: &Cli) -> Result<()> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(CliError::Usage(format!("--tolerance must be a nonnegative number, got {}", cli.tolerance)));
    }
    match &cli.command {
        Command::Decompose(a) => decompose(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Qaoa(a) => qaoa(cli, a),
        Command::Route(a) => route(cli, a),
        Command::Report(a) => report(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::from(1)
        }
    }
}

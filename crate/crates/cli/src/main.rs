//! `fermiloc`: encode fermionic Hamiltonians into Pauli operators.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 infeasible layout.

mod report;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermiloc::auxenc::{encode_aux, encode_jw, EncodedHamiltonian};
use fermiloc::fermion::{hermitian_closure, FermionHamiltonian};
use fermiloc::format::{parse_hamiltonian, render_hamiltonian};
use fermiloc::lattice::{generate_lattice, LatticeKind};
use fermiloc::layout::{Layout, LayoutConfig, LayoutError, LinearOrder};
use fermiloc::verify::{run_suite, weight_scaling_report, CheckStatus, SuiteOptions};

use report::{EncodeReport, EncodingStats, LayoutReport, StatsReport, VerifyReport};

#[derive(Parser)]
#[command(name = "fermiloc", version, about = "Jordan-Wigner and auxiliary-fermion local encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a Hamiltonian into a Pauli sum
    Encode(EncodeArgs),
    /// Report degrees, auxiliary counts, qubit order and couplings
    Layout(CommonArgs),
    /// Run the invariant and equivalence checks (exit 2 on failure)
    Verify(VerifyArgs),
    /// Per-term weight statistics for both encodings
    Stats(StatsArgs),
    /// Print a generated model in the text input format
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Encoding {
    Jw,
    Aux,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct CommonArgs {
    /// Hamiltonian file (`-` for stdin)
    #[arg(conflicts_with = "lattice")]
    input: Option<PathBuf>,
    /// Generated model instead of a file: k4, chain:N or hubbard:RxC
    #[arg(long)]
    lattice: Option<LatticeKind>,
    /// Hopping amplitude for generated models
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t: f64,
    /// On-site interaction for generated models
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    u: f64,
    /// natural, snake:RxC, or a comma-separated permutation
    #[arg(long)]
    order: Option<String>,
    /// Comma-separated frame angle per auxiliary mode, in qubit order
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gauge: Option<Vec<f64>>,
    /// Append missing Hermitian conjugates before encoding
    #[arg(long)]
    add_hc: bool,
    /// Bound on loop-breaking steps before the layout is declared infeasible
    #[arg(long, default_value_t = fermiloc::layout::DEFAULT_MAX_REANCHOR)]
    max_reanchor: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Encoding::Aux)]
    encoding: Encoding,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Encoding::Aux)]
    encoding: Encoding,
    #[arg(long, default_value_t = fermiloc::verify::TOL_STATE)]
    tol_state: f64,
    #[arg(long, default_value_t = fermiloc::verify::TOL_MATRIX)]
    tol_matrix: f64,
    #[arg(long, default_value_t = fermiloc::verify::TOL_EIG)]
    tol_eig: f64,
    /// Seed for simulated measurement outcomes
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also report L×L grid weight scaling for these sizes
    #[arg(long, value_delimiter = ',')]
    scaling: Vec<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    /// k4, chain:N or hubbard:RxC
    #[arg(long)]
    lattice: LatticeKind,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    u: f64,
}

enum Failure {
    Usage(String),
    Verification(String),
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Infeasible(m) => m,
        }
    }
}

impl From<fermiloc::auxenc::AuxError> for Failure {
    fn from(e: fermiloc::auxenc::AuxError) -> Self {
        match e {
            fermiloc::auxenc::AuxError::Layout(l) => l.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<LayoutError> for Failure {
    fn from(e: LayoutError) -> Self {
        match e {
            LayoutError::Infeasible { .. } | LayoutError::ReanchorLimit(_) => Failure::Infeasible(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

struct Loaded {
    h: FermionHamiltonian,
    order: LinearOrder,
    grid: Option<(usize, usize)>,
    config: LayoutConfig,
}

fn parse_order(arg: &str, n_modes: usize) -> Result<LinearOrder, Failure> {
    let order = if arg == "natural" {
        LinearOrder::natural(n_modes)
    } else if let Some(dims) = arg.strip_prefix("snake:") {
        let (r, c) = dims
            .split_once('x')
            .ok_or_else(|| usage(format!("bad snake order `{arg}`")))?;
        let (r, c): (usize, usize) = (r.parse().map_err(usage)?, c.parse().map_err(usage)?);
        if r * c != n_modes {
            return Err(usage(format!("snake {r}x{c} does not cover {n_modes} modes")));
        }
        LinearOrder::snake(r, c)
    } else {
        let modes = arg
            .split(',')
            .map(|m| m.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("bad order `{arg}`")))?;
        if modes.len() != n_modes {
            return Err(usage(format!("order lists {} modes, expected {n_modes}", modes.len())));
        }
        LinearOrder::new(modes).map_err(usage)?
    };
    Ok(order)
}

fn load(args: &CommonArgs) -> Result<Loaded, Failure> {
    let (mut h, default_order, grid) = match (&args.lattice, &args.input) {
        (Some(kind), _) => {
            let grid = match *kind {
                LatticeKind::Hubbard { rows, cols } => Some((rows, cols)),
                _ => None,
            };
            (generate_lattice(*kind, args.t, args.u).map_err(usage)?, kind.default_order(), grid)
        }
        (None, Some(path)) => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(usage)?;
                s
            } else {
                fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
            };
            let h = parse_hamiltonian(&text).map_err(usage)?;
            let n = h.n_modes();
            (h, LinearOrder::natural(n), None)
        }
        (None, None) => return Err(usage("an input file or --lattice is required")),
    };
    if args.add_hc {
        h = hermitian_closure(&h);
    }
    let order = match &args.order {
        Some(arg) => parse_order(arg, h.n_modes())?,
        None => default_order,
    };
    let config = LayoutConfig {
        gauge: args.gauge.clone(),
        max_reanchor: args.max_reanchor,
    };
    Ok(Loaded { h, order, grid, config })
}

fn encode(loaded: &Loaded, encoding: Encoding) -> Result<EncodedHamiltonian, Failure> {
    Ok(match encoding {
        Encoding::Jw => encode_jw(&loaded.h, loaded.order.clone())?,
        Encoding::Aux => encode_aux(&loaded.h, loaded.order.clone(), &loaded.config)?,
    })
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_grid(out: &mut String, name: &str, rows: &[Vec<usize>]) {
    let body: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    writeln!(out, "{name} = [{}]", body.join(",")).expect("string write");
}

fn cmd_encode(args: &EncodeArgs) -> Result<String, Failure> {
    let loaded = load(&args.common)?;
    let name = match args.encoding {
        Encoding::Jw => "jw",
        Encoding::Aux => "aux",
    };
    let r = EncodeReport::new(name, &encode(&loaded, args.encoding)?);
    Ok(match args.common.format {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = format!("# {} encoding, {} qubits: {}\n", r.encoding, r.n_qubits, r.mode_map.join(" "));
            for s in &r.stabilizers {
                for t in &s.terms {
                    writeln!(out, "# stabilizer {:?}: {} {} {}", s.edge, t.coeff[0], t.coeff[1], t.pauli).expect("string write");
                }
            }
            for t in &r.terms {
                writeln!(out, "{} {} {}", t.coeff[0], t.coeff[1], t.pauli).expect("string write");
            }
            out
        }
    })
}

fn cmd_layout(args: &CommonArgs) -> Result<String, Failure> {
    let loaded = load(args)?;
    let layout = Layout::for_hamiltonian(&loaded.h, loaded.order.clone(), &loaded.config)?;
    let r = LayoutReport::new(&layout, loaded.grid);
    Ok(match args.format {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "modes {}, qubits {}", r.n_modes, r.n_qubits).expect("string write");
            writeln!(out, "order {:?}", r.order).expect("string write");
            writeln!(out, "qubits {}", r.mode_map.join(" ")).expect("string write");
            match &r.grids {
                Some(g) => {
                    fmt_grid(&mut out, "D", &g.degree);
                    fmt_grid(&mut out, "D1", &g.backbone_degree);
                    fmt_grid(&mut out, "D_nl", &g.nonlocal_degree);
                    fmt_grid(&mut out, "N_aux", &g.n_aux);
                }
                None => {
                    fmt_grid(&mut out, "D", std::slice::from_ref(&r.degree));
                    fmt_grid(&mut out, "D1", std::slice::from_ref(&r.backbone_degree));
                    fmt_grid(&mut out, "D_nl", std::slice::from_ref(&r.nonlocal_degree));
                    fmt_grid(&mut out, "N_aux", std::slice::from_ref(&r.n_aux));
                }
            }
            for c in &r.couplings {
                writeln!(
                    out,
                    "coupling {:?} via {:?}: {} {} .. {} {}",
                    c.edge, c.anchor, c.letters[0], c.earlier, c.letters[1], c.later
                )
                .expect("string write");
            }
            out
        }
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<String, Failure> {
    for tol in [args.tol_state, args.tol_matrix, args.tol_eig] {
        if tol.is_nan() || tol <= 0.0 {
            return Err(usage(format!("tolerances must be positive, got {tol}")));
        }
    }
    let loaded = load(&args.common)?;
    let enc = encode(&loaded, args.encoding)?;
    let opts = SuiteOptions {
        tol_state: args.tol_state,
        tol_matrix: args.tol_matrix,
        tol_eig: args.tol_eig,
        seed: args.seed,
        ..SuiteOptions::default()
    };
    let checks = run_suite(&loaded.h, &enc, &opts).map_err(usage)?;
    let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
    let r = VerifyReport { passed, checks };
    let out = match args.common.format {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = String::new();
            for c in &r.checks {
                let status = match c.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "SKIP",
                };
                writeln!(out, "{status} {} measured={:e} tolerance={:e}", c.name, c.measured, c.tolerance)
                    .expect("string write");
            }
            out
        }
    };
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification("verification failed".to_string()))
    }
}

fn cmd_stats(args: &StatsArgs) -> Result<String, Failure> {
    let loaded = load(&args.common)?;
    let jw = EncodingStats::new(&encode(&loaded, Encoding::Jw)?);
    let aux = EncodingStats::new(&encode(&loaded, Encoding::Aux)?);
    let scaling = if args.scaling.is_empty() {
        Vec::new()
    } else {
        weight_scaling_report(&args.scaling).map_err(usage)?
    };
    let r = StatsReport {
        n_modes: loaded.h.n_modes(),
        jw,
        aux,
        scaling,
    };
    Ok(match args.common.format {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = String::new();
            for (name, s) in [("jw", &r.jw), ("aux", &r.aux)] {
                writeln!(out, "{name}: {} qubits, {} strings, max weight {}", s.n_qubits, s.n_terms, s.max_weight)
                    .expect("string write");
                for (class, c) in &s.classes {
                    writeln!(
                        out,
                        "  {class:?}: count {} max {} mean {:.3}",
                        c.count, c.max_weight, c.mean_weight
                    )
                    .expect("string write");
                }
            }
            for w in &r.scaling {
                writeln!(
                    out,
                    "L={}: jw max hop {} ({} qubits), aux max hop {} bulk {} ({} qubits)",
                    w.size, w.jw_max_hop, w.jw_qubits, w.aux_max_hop, w.aux_max_bulk_hop, w.aux_qubits
                )
                .expect("string write");
            }
            out
        }
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Encode(a) => cmd_encode(&a),
        Command::Layout(a) => cmd_layout(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Stats(a) => cmd_stats(&a),
        Command::Generate(a) => Ok(render_hamiltonian(&generate_lattice(a.lattice, a.t, a.u).map_err(usage)?)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use pwlab_core::certify::{battery_grid, certify_all, span_residual, CertifyConfig, CertifyReport, GoldenTable};
use pwlab_core::matrix::{assemble_matrix, OperatorKind, OperatorMatrix};
use pwlab_core::{
    apply_chat, apply_chat_adjoint, classify, explain, iterate_symbol, kernel_spectral, AffineSymbol, Classification,
    GridSpec, KernelPoint, RealnessTolerance, SigmaBand, SpectralFunction,
};

mod parse;

use parse::{parse_complex, parse_real};

#[derive(Parser)]
#[command(
    name = "pwlab",
    version,
    about = "Affine composition operators on Paley-Wiener spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form classification of the symbol
    Classify(RunConfig),
    /// Run the numerical certificate battery and cross-check the classification
    Certify(RunConfig),
    /// Dump an orbit and its residual-vs-N table as CSV
    Orbit(OrbitArgs),
    /// Finite-section matrix in the exponential basis
    Matrix(MatrixArgs),
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Band width σ (accepts `pi` multiples)
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    sigma: f64,
    /// Dilation coefficient (real)
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    a: f64,
    /// Translation: `re`, `re,im` or `re+imi`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    b: Complex64,
    /// Gauss-Legendre nodes on [-σ, σ]
    #[arg(long = "grid", default_value_t = 256)]
    grid_nodes: usize,
    /// Finite-section half-width M (basis indices -M..M)
    #[arg(long = "basis-m", default_value_t = 16)]
    basis_m: usize,
    /// Orbit length N
    #[arg(long = "orbit-n", default_value_t = 40)]
    orbit_n: u32,
    /// Tolerance for deciding b ∈ ℝ and |a| = 1
    #[arg(long = "eps-real", value_parser = parse_real, default_value = "1e-12")]
    eps_real: f64,
    /// Tikhonov regularisation of Gram solves
    #[arg(long, value_parser = parse_real, default_value = "1e-12")]
    reg: f64,
    /// Defaults to json for classify and certify, csv for orbit and matrix
    #[arg(long, value_enum)]
    output: Option<Output>,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    run: RunConfig,
    /// Seed with the kernel at this point
    #[arg(long = "seed-kernel", value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "seed_file")]
    seed_kernel: Option<Complex64>,
    /// Seed from a `node,re,im` CSV sampled on the same grid
    #[arg(long = "seed-file")]
    seed_file: Option<PathBuf>,
    /// Target of the residual table (kernel point, default 0.5)
    #[arg(long = "target-kernel", value_parser = parse_complex, allow_hyphen_values = true)]
    target_kernel: Option<Complex64>,
    /// Orbit under the adjoint instead
    #[arg(long)]
    adjoint: bool,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    run: RunConfig,
    /// Section of the adjoint instead
    #[arg(long)]
    adjoint: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

/// Failure mapped to an exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

impl From<pwlab_core::Error> for Failure {
    fn from(e: pwlab_core::Error) -> Self {
        usage(e)
    }
}

struct Rendered {
    text: String,
    code: u8,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

impl RunConfig {
    fn output_or(&self, default: Output) -> Output {
        self.output.unwrap_or(default)
    }

    fn band(&self) -> Result<SigmaBand, Failure> {
        Ok(SigmaBand::new(self.sigma)?)
    }

    fn tol(&self) -> Result<RealnessTolerance, Failure> {
        Ok(RealnessTolerance::new(self.eps_real)?)
    }

    fn symbol(&self) -> Result<AffineSymbol, Failure> {
        AffineSymbol::new(self.snapped_a(), self.b)
            .map_err(|e| usage(format!("symbol does not induce a bounded operator: {e}")))
    }

    /// For `|a|` within `eps` of 1, snap to `±1` so the classifier and the
    /// numerics agree on the regime.
    fn snapped_a(&self) -> f64 {
        if (self.a.abs() - 1.0).abs() <= self.eps_real {
            self.a.signum()
        } else {
            self.a
        }
    }

    fn grid(&self, phi: &AffineSymbol) -> Result<Arc<GridSpec>, Failure> {
        Ok(battery_grid(self.band()?, phi, self.grid_nodes)?)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    sigma: f64,
    a: f64,
    b: [f64; 2],
    #[serde(flatten)]
    classification: &'a Classification,
}

fn cmd_classify(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let c = classify(cfg.band()?, cfg.snapped_a(), cfg.b, cfg.tol()?);
    let text = match cfg.output_or(Output::Json) {
        Output::Json => json(&ClassifyReport {
            sigma: cfg.sigma,
            a: cfg.a,
            b: [cfg.b.re, cfg.b.im],
            classification: &c,
        }),
        Output::Csv => {
            let mut out = String::from("field,value\n");
            let kernels = serde_json::to_value(c.kernels_all_cyclic).expect("enum serialises");
            for (k, v) in [
                ("bounded", c.bounded.to_string()),
                ("cyclic", c.cyclic.to_string()),
                ("adjoint_cyclic", c.adjoint_cyclic.to_string()),
                ("supercyclic", c.supercyclic.to_string()),
                ("complex_symmetric", c.complex_symmetric.to_string()),
                ("normal", c.normal.to_string()),
                ("self_adjoint", c.self_adjoint.to_string()),
                ("unitary", c.unitary.to_string()),
                ("kernels_all_cyclic", kernels.as_str().unwrap_or_default().to_string()),
                ("eps_real", format!("{:e}", c.eps_real)),
            ] {
                let _ = writeln!(out, "{k},{v}");
            }
            out
        }
        Output::Text => {
            let mut out = format!(
                "sigma = {}, a = {}, b = {}{:+}i\n",
                cfg.sigma, cfg.a, cfg.b.re, cfg.b.im
            );
            for line in explain(&c) {
                let _ = writeln!(out, "  {line}");
            }
            out
        }
    };
    Ok(Rendered::ok(text))
}

fn cmd_certify(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let band = cfg.band()?;
    let phi = cfg.symbol()?;
    let config = CertifyConfig {
        grid_nodes: cfg.grid_nodes,
        basis_m: cfg.basis_m,
        orbit_n: cfg.orbit_n,
        reg: cfg.reg,
        tol: cfg.tol()?,
        golden: GoldenTable::from_env()?,
        ..CertifyConfig::default()
    };
    let report = certify_all(band, &phi, &config)?;
    let text = match cfg.output_or(Output::Json) {
        Output::Json => json(&report),
        Output::Csv => certify_csv(&report),
        Output::Text => certify_text(&report),
    };
    Ok(Rendered {
        text,
        code: if report.consistent { 0 } else { 1 },
    })
}

fn certify_csv(r: &CertifyReport) -> String {
    let mut out = String::from("name,residual,threshold,predicate,verdict,expected,consistent\n");
    for c in &r.certificates {
        let _ = writeln!(
            out,
            "{},{:e},{:e},{},{},{},{}",
            c.name,
            c.residual,
            c.threshold,
            c.predicate.tag(),
            c.verdict.tag(),
            c.expected.tag(),
            c.is_consistent()
        );
    }
    out
}

/// Serde tag of a unit enum variant.
trait Tag {
    fn tag(&self) -> String;
}

impl<T: Serialize> Tag for T {
    fn tag(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

fn certify_text(r: &CertifyReport) -> String {
    let mut out = format!(
        "sigma = {}, phi = {}, grid = {}, rng seed = {}\n",
        r.sigma, r.phi, r.grid_nodes, r.rng_seed
    );
    for c in &r.certificates {
        let _ = writeln!(
            out,
            "  {:<22} {:>12.4e}  {:<13} {:>10.3e}  {:<12} expected {:<4}{}",
            c.name,
            c.residual,
            c.predicate.tag(),
            c.threshold,
            c.verdict.tag(),
            c.expected.tag(),
            if c.is_consistent() { "" } else { "  INCONSISTENT" }
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    let _ = writeln!(out, "consistent: {}", r.consistent);
    out
}

fn read_seed(path: &PathBuf, grid: &Arc<GridSpec>) -> Result<SpectralFunction, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    SpectralFunction::from_csv(grid, &text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_orbit(args: &OrbitArgs) -> Result<Rendered, Failure> {
    let cfg = &args.run;
    let output = cfg.output_or(Output::Csv);
    if output == Output::Text {
        return Err(usage("orbit supports --output csv or json"));
    }
    if cfg.orbit_n == 0 {
        return Err(usage("--orbit-n must be >= 1"));
    }
    let phi = cfg.symbol()?;
    let grid = cfg.grid(&phi)?;
    let seed = match (&args.seed_file, args.seed_kernel) {
        (Some(path), _) => read_seed(path, &grid)?,
        (None, w) => kernel_spectral(KernelPoint::new(w.unwrap_or_default()), &grid),
    };
    let step = |n: u32| {
        let phi_n = iterate_symbol(&phi, n);
        if args.adjoint {
            apply_chat_adjoint(&phi_n, &seed)
        } else {
            apply_chat(&phi_n, &seed)
        }
    };
    let elements: Vec<SpectralFunction> = (0..=cfg.orbit_n).map(step).collect();
    let target = kernel_spectral(
        KernelPoint::new(args.target_kernel.unwrap_or(Complex64::new(0.5, 0.0))),
        &grid,
    );
    let mut residuals = Vec::with_capacity(cfg.orbit_n as usize);
    for n in 1..=cfg.orbit_n as usize {
        residuals.push(span_residual(&elements[..=n], &target, cfg.reg)?.residual);
    }

    let text = match output {
        Output::Json => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                residual: f64,
            }
            #[derive(Serialize)]
            struct OrbitReport {
                sigma: f64,
                phi: AffineSymbol,
                adjoint: bool,
                nodes: Vec<f64>,
                orbit: Vec<Vec<[f64; 2]>>,
                residuals: Vec<Row>,
            }
            json(&OrbitReport {
                sigma: cfg.sigma,
                phi,
                adjoint: args.adjoint,
                nodes: grid.nodes().to_vec(),
                orbit: elements
                    .iter()
                    .map(|f| f.values().iter().map(|v| [v.re, v.im]).collect())
                    .collect(),
                residuals: residuals
                    .iter()
                    .enumerate()
                    .map(|(k, &r)| Row { n: k + 1, residual: r })
                    .collect(),
            })
        }
        _ => {
            let mut out = String::from("n,node,re,im\n");
            for (n, f) in elements.iter().enumerate() {
                for (t, v) in grid.nodes().iter().zip(f.values()) {
                    let _ = writeln!(out, "{n},{t:e},{:e},{:e}", v.re, v.im);
                }
            }
            out.push_str("\nN,residual\n");
            for (k, r) in residuals.iter().enumerate() {
                let _ = writeln!(out, "{},{r:e}", k + 1);
            }
            out
        }
    };
    Ok(Rendered::ok(text))
}

fn matrix_json(m: &OperatorMatrix) -> String {
    #[derive(Serialize)]
    struct Entry {
        row: usize,
        col: usize,
        re: f64,
        im: f64,
    }
    #[derive(Serialize)]
    struct MatrixReport {
        sigma: f64,
        basis_m: usize,
        dim: usize,
        entries: Vec<Entry>,
    }
    let d = m.dim();
    let entries = (0..d)
        .flat_map(|r| (0..d).map(move |c| (r, c)))
        .map(|(r, c)| {
            let v = m.entries[(r, c)];
            Entry {
                row: r,
                col: c,
                re: v.re,
                im: v.im,
            }
        })
        .collect();
    json(&MatrixReport {
        sigma: m.basis_band.sigma(),
        basis_m: m.basis_m,
        dim: d,
        entries,
    })
}

fn matrix_text(m: &OperatorMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|c| {
                let v = m.entries[(r, c)];
                format!("{:>8.4}{:+.4}i", v.re, v.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn cmd_matrix(args: &MatrixArgs) -> Result<Rendered, Failure> {
    let cfg = &args.run;
    let phi = cfg.symbol()?;
    let grid = cfg.grid(&phi)?;
    let op = if args.adjoint {
        OperatorKind::ChatAdjoint(phi)
    } else {
        OperatorKind::Chat(phi)
    };
    let m = assemble_matrix(op, cfg.basis_m, &grid)?;
    let text = match cfg.output_or(Output::Csv) {
        Output::Csv => m.to_csv(),
        Output::Json => matrix_json(&m),
        Output::Text => matrix_text(&m),
    };
    Ok(Rendered::ok(text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(cfg) => cmd_classify(cfg),
        Command::Certify(cfg) => cmd_certify(cfg),
        Command::Orbit(args) => cmd_orbit(args),
        Command::Matrix(args) => cmd_matrix(args),
    };
    match result {
        Ok(r) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(r.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("pwlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

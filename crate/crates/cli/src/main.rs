use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperspec::hypergraph::{
    generate, odd_bipartition, parse_hypergraph, Bipartition, GenerateKind, GenerateOptions,
    Hypergraph,
};
use hyperspec::spectral::{
    laplacian_rho_eigenpair, power_rho, zero_q_eigenvector, EigenReport, PowerIterationConfig,
    PowerResult,
};
use hyperspec::tensor::{build_tensor, EdgeListOperator, TensorKind, TensorLimits, ENTRY_CAP_ENV};
use hyperspec::verify::{run_suite, SuiteConfig};

/// Spectra of uniform hypergraphs: odd-bipartiteness certificates, Laplacian
/// tensors and spectral radii.
///
/// Exit status: 0 on success, 1 when a check fails or an iteration does not
/// converge, 2 on usage or input errors and unsupported operations.
#[derive(Debug, Parser)]
#[command(name = "hyperspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. `text` is for people and may change between versions.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Power iteration tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Power iteration limit.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Diagonal shift of the power iteration.
    #[arg(long, global = true)]
    shift: Option<f64>,

    /// Largest number of entries of a dense tensor.
    #[arg(long, global = true, env = ENTRY_CAP_ENV)]
    entry_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Nonnegative {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "Q", alias = "q")]
    Q,
}

impl From<Nonnegative> for TensorKind {
    fn from(w: Nonnegative) -> Self {
        match w {
            Nonnegative::A => TensorKind::Adjacency,
            Nonnegative::Q => TensorKind::SignlessLaplacian,
        }
    }
}

impl From<Which> for TensorKind {
    fn from(w: Which) -> Self {
        match w {
            Which::A => TensorKind::Adjacency,
            Which::D => TensorKind::Degree,
            Which::L => TensorKind::Laplacian,
            Which::Q => TensorKind::SignlessLaplacian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Random,
    Oddbip,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertex and edge counts, degrees and connectivity.
    Info { file: PathBuf },
    /// Odd bipartition certificate, or a witness that none exists.
    Oddbip { file: PathBuf },
    /// Dense tensor in the plain-text dump format.
    Tensor {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Spectral radius of the adjacency or signless Laplacian tensor.
    Rho {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Nonnegative,
    },
    /// Laplacian eigenpair at the spectral radius (odd-bipartite input only).
    Lrho { file: PathBuf },
    /// Zero eigenvector of the signless Laplacian (odd-bipartite input only).
    Zeroeig { file: PathBuf },
    /// Cartesian product of two hypergraphs with the same uniformity.
    Product {
        g: PathBuf,
        h: PathBuf,
        /// Write the product here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random hypergraph.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        /// Write the hypergraph here and print a summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        /// JSON suite configuration; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

enum Status {
    Ok,
    ChecksFailed,
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_hypergraph(&text).with_context(|| format!("{}", path.display()))
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.output {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            std::io::stdout().lock().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn require_not_csv(cli: &Cli, what: &str) -> Result<()> {
    if cli.format == Format::Csv {
        bail!("csv output is only available for `verify`, not `{what}`");
    }
    Ok(())
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[derive(Serialize)]
struct Info {
    n: usize,
    k: usize,
    m: usize,
    degrees: Vec<usize>,
    connected: bool,
    components: usize,
    isolated: Vec<usize>,
    fingerprint: String,
}

fn info(cli: &Cli, file: &Path) -> Result<Status> {
    require_not_csv(cli, "info")?;
    let g = read_graph(file)?;
    let conn = g.connectivity();
    let info = Info {
        n: g.n(),
        k: g.k(),
        m: g.num_edges(),
        degrees: g.degrees().as_slice().to_vec(),
        connected: conn.connected,
        components: conn.components,
        isolated: one_based(&conn.isolated),
        fingerprint: g.fingerprint(),
    };
    let body = match cli.format {
        Format::Text => format!(
            "n = {}, k = {}, |E| = {}\ndegrees: {:?}\nconnected: {} ({} components)\nisolated: {:?}\n",
            info.n, info.k, info.m, info.degrees, info.connected, info.components, info.isolated
        ),
        _ => to_json(&info),
    };
    emit(cli, &body)?;
    Ok(Status::Ok)
}

fn oddbip(cli: &Cli, file: &Path) -> Result<Status> {
    require_not_csv(cli, "oddbip")?;
    let g = read_graph(file)?;
    let b = odd_bipartition(&g);
    let body = match (cli.format, &b) {
        (Format::Text, Bipartition::Certificate { v1 }) => {
            format!("odd-bipartite, V1 = {:?}\n", one_based(v1))
        }
        (Format::Text, Bipartition::Infeasible { witness, .. }) if witness.is_empty() => {
            format!("not odd-bipartite: k = {} is odd\n", g.k())
        }
        (Format::Text, Bipartition::Infeasible { witness, .. }) => format!(
            "not odd-bipartite: edges {witness:?} (0-based) cover every vertex an even number of times\n"
        ),
        _ => to_json(&b.report()),
    };
    emit(cli, &body)?;
    Ok(Status::Ok)
}

fn limits(cli: &Cli) -> TensorLimits {
    cli.entry_cap
        .map(|max_entries| TensorLimits { max_entries })
        .unwrap_or_default()
}

fn power_config(cli: &Cli) -> Result<PowerIterationConfig> {
    let d = PowerIterationConfig::default();
    let cfg = PowerIterationConfig {
        tol: cli.tol.unwrap_or(d.tol),
        max_iter: cli.max_iter.unwrap_or(d.max_iter),
        shift: cli.shift.unwrap_or(d.shift),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn tensor(cli: &Cli, file: &Path, which: Which) -> Result<Status> {
    let g = read_graph(file)?;
    let t = build_tensor(&g, which.into(), &limits(cli))?;
    emit(cli, &t.to_dump())?;
    Ok(Status::Ok)
}

fn eigen_output(cli: &Cli, r: &PowerResult) -> Result<Status> {
    let report: EigenReport = r.report();
    let body = match cli.format {
        Format::Text => format!(
            "lambda = {}\nbracket = [{}, {}]\niterations = {}, converged = {}\nresidual = {:e}\nvector = {:?}\n",
            report.lambda,
            report.bracket[0],
            report.bracket[1],
            report.iterations,
            report.converged,
            report.residual,
            report.vector
        ),
        _ => to_json(&report),
    };
    emit(cli, &body)?;
    if !r.converged {
        eprintln!(
            "power iteration did not converge in {} iterations",
            r.iterations
        );
        return Ok(Status::ChecksFailed);
    }
    Ok(Status::Ok)
}

fn rho(cli: &Cli, file: &Path, which: Nonnegative) -> Result<Status> {
    require_not_csv(cli, "rho")?;
    let g = read_graph(file)?;
    let cfg = power_config(cli)?;
    let r = power_rho(&EdgeListOperator::new(&g, which.into()), &cfg)?;
    eigen_output(cli, &r)
}

fn require_odd_bipartite(g: &Hypergraph, what: &str) -> Result<Bipartition> {
    let b = odd_bipartition(g);
    if !b.is_certificate() {
        bail!("unsupported: `{what}` needs an odd-bipartite hypergraph and this one is not");
    }
    Ok(b)
}

fn lrho(cli: &Cli, file: &Path) -> Result<Status> {
    require_not_csv(cli, "lrho")?;
    let g = read_graph(file)?;
    let b = require_odd_bipartite(&g, "lrho")?;
    let r = laplacian_rho_eigenpair(&g, &b, &power_config(cli)?)?;
    eigen_output(cli, &r)
}

#[derive(Serialize)]
struct ZeroReport {
    lambda: f64,
    residual: f64,
    vector: Vec<f64>,
    edge_terms: Vec<f64>,
}

fn zeroeig(cli: &Cli, file: &Path) -> Result<Status> {
    require_not_csv(cli, "zeroeig")?;
    let g = read_graph(file)?;
    let b = require_odd_bipartite(&g, "zeroeig")?;
    let z = zero_q_eigenvector(&g, &b)?;
    let report = ZeroReport {
        lambda: z.pair.lambda,
        residual: z.pair.residual,
        vector: z.pair.x,
        edge_terms: z.edge_terms,
    };
    let body = match cli.format {
        Format::Text => format!(
            "lambda = 0, residual = {:e}\nvector = {:?}\n",
            report.residual, report.vector
        ),
        _ => to_json(&report),
    };
    emit(cli, &body)?;
    Ok(Status::Ok)
}

fn write_or_emit_graph(cli: &Cli, g: &Hypergraph, out: Option<&Path>) -> Result<bool> {
    match out {
        Some(path) => {
            fs::write(path, g.to_hg())
                .with_context(|| format!("cannot write {}", path.display()))?;
            Ok(true)
        }
        None => {
            emit(cli, &g.to_hg())?;
            Ok(false)
        }
    }
}

#[derive(Serialize)]
struct GraphSummary<'a> {
    path: String,
    n: usize,
    k: usize,
    m: usize,
    connected: bool,
    fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attempts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    planted_v1: Option<Vec<usize>>,
}

impl GraphSummary<'_> {
    fn new(path: &Path, g: &Hypergraph) -> Self {
        Self {
            path: path.display().to_string(),
            n: g.n(),
            k: g.k(),
            m: g.num_edges(),
            connected: g.is_connected(),
            fingerprint: g.fingerprint(),
            seed: None,
            kind: None,
            attempts: None,
            planted_v1: None,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => format!(
                "wrote {} (n = {}, k = {}, |E| = {}, connected = {})\n",
                self.path, self.n, self.k, self.m, self.connected
            ),
            _ => to_json(self),
        }
    }
}

fn product(cli: &Cli, g: &Path, h: &Path, out: Option<&Path>) -> Result<Status> {
    require_not_csv(cli, "product")?;
    let gh = read_graph(g)?.cartesian_product(&read_graph(h)?)?;
    if let Some(path) = out {
        write_or_emit_graph(cli, &gh, Some(path))?;
        emit(cli, &GraphSummary::new(path, &gh).render(cli.format))?;
    } else {
        write_or_emit_graph(cli, &gh, None)?;
    }
    Ok(Status::Ok)
}

#[allow(clippy::too_many_arguments)]
fn gen(
    cli: &Cli,
    kind: Kind,
    n: usize,
    k: usize,
    m: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<Status> {
    require_not_csv(cli, "gen")?;
    let gk = match kind {
        Kind::Random => GenerateKind::UniformRandom,
        Kind::Oddbip => GenerateKind::OddBipartite,
    };
    let generated = generate(gk, n, k, m, seed, &GenerateOptions::default())?;
    if !generated.connected {
        eprintln!(
            "warning: no connected draw in {} attempts; returning a disconnected hypergraph",
            generated.attempts
        );
    }
    match out {
        Some(path) => {
            write_or_emit_graph(cli, &generated.graph, Some(path))?;
            let summary = GraphSummary {
                seed: Some(seed),
                kind: Some(match kind {
                    Kind::Random => "random",
                    Kind::Oddbip => "oddbip",
                }),
                attempts: Some(generated.attempts),
                planted_v1: generated.planted.as_deref().map(one_based),
                ..GraphSummary::new(path, &generated.graph)
            };
            emit(cli, &summary.render(cli.format))?;
        }
        None => {
            write_or_emit_graph(cli, &generated.graph, None)?;
        }
    }
    Ok(Status::Ok)
}

fn verify(cli: &Cli, config: Option<&Path>) -> Result<Status> {
    let mut cfg = match config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .with_context(|| format!("invalid suite config {}", path.display()))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    if let Some(max_iter) = cli.max_iter {
        cfg.max_iter = max_iter;
    }
    if let Some(shift) = cli.shift {
        cfg.shift = shift;
    }
    if let Some(cap) = cli.entry_cap {
        cfg.max_entries = cap;
    }
    let report = run_suite(&cfg)?;
    let body = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(cli, &body)?;
    if report.overall {
        Ok(Status::Ok)
    } else {
        for c in report.failures() {
            eprintln!("failed: {} on {}", c.name, c.instances.join(" x "));
        }
        Ok(Status::ChecksFailed)
    }
}

fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Info { file } => info(cli, file),
        Command::Oddbip { file } => oddbip(cli, file),
        Command::Tensor { file, which } => tensor(cli, file, *which),
        Command::Rho { file, which } => rho(cli, file, *which),
        Command::Lrho { file } => lrho(cli, file),
        Command::Zeroeig { file } => zeroeig(cli, file),
        Command::Product { g, h, out } => product(cli, g, h, out.as_deref()),
        Command::Gen {
            kind,
            n,
            k,
            m,
            seed,
            out,
        } => gen(cli, *kind, *n, *k, *m, *seed, out.as_deref()),
        Command::Verify { config } => verify(cli, config.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! The `qzec` command-line tool: validate channel files, compute zero-error
//! rates and theta bounds, search input/measurement pairs, and run the
//! pentagon demonstration.

pub mod error;
pub mod report;
pub mod spec;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qzec::capacity::{witness_code, zero_error_rate, RateOptions};
use qzec::search::{output_eigenbasis_of, search_optimum, SearchStrategy, StrategyKind};
use qzec::{Graph, InputEnsemble, KrausChannel, Measurement, Tolerances};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult, EXIT_OK, EXIT_PARTIAL};
use crate::report::{DemoSection, Inputs, Options, Report, SearchSection, Source};
use crate::spec::{
    matrix_to_pairs, parse_json, read_file, ChannelSpecFile, MeasurementFile, StatesFile,
};

/// Pentagon channel template with `alpha` and `beta` parameters.
pub const PENTAGON_TEMPLATE: &str = include_str!("../channels/pentagon.json");

/// Product graphs larger than this are refused unless `--vertex-cap` is raised.
pub const DEFAULT_CLI_VERTEX_CAP: usize = 125;

/// Witness codes are re-checked on the n-fold channel up to this dimension.
pub const WITNESS_DIM_CAP: usize = 125;

#[derive(Debug, Parser)]
#[command(name = "qzec", version, about = "Zero-error rates of quantum channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a channel file parses and is trace preserving.
    Validate(ValidateArgs),
    /// Characteristic graph, clique numbers and rates for one (states, measurement) pair.
    Rate(RateArgs),
    /// Search over orthonormal input bases and projective measurements.
    Search(SearchArgs),
    /// Run the pentagon example end to end.
    DemoPentagon(DemoArgs),
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Channel specification (JSON).
    pub path: PathBuf,
    /// Override a channel parameter, e.g. `--param alpha=0.2`.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// JSON file with tolerance overrides (eps_adj, eig_cutoff, theta_tol, validation_tol).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Probability threshold for outcome sets (overrides the config file).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Branch-and-bound node budget per block length; exceeding it yields a partial report.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Largest product graph allowed.
    #[arg(long, default_value_t = DEFAULT_CLI_VERTEX_CAP)]
    pub vertex_cap: usize,
    /// Render a text table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `canonical` or a states file.
    #[arg(long, default_value = "canonical")]
    pub states: String,
    /// `canonical`, `output-eigenbasis` or a measurement file.
    #[arg(long, default_value = "canonical")]
    pub measurement: String,
    #[arg(long, default_value_t = 2)]
    pub max_n: usize,
    /// Add the Lovász theta upper bound.
    #[arg(long)]
    pub theta: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Comma-separated strategies: canonical, output-eigenbasis, random-basis, refine.
    #[arg(long, default_value = "canonical,output-eigenbasis")]
    pub strategy: String,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub max_n: usize,
    #[arg(long)]
    pub theta: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 0.35, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.35, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 2)]
    pub max_n: usize,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn file_source(path: &Path, bytes: &[u8]) -> Source {
    Source::File {
        path: path.display().to_string(),
        sha256: sha256_hex(bytes),
    }
}

fn parse_param(s: &str) -> CliResult<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE, got '{s}'")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("parameter '{name}': '{value}' is not a number")))?;
    Ok((name.trim().to_string(), value))
}

fn load_tolerances(config: Option<&Path>) -> CliResult<(Tolerances, Option<Source>)> {
    match config {
        None => Ok((Tolerances::default(), None)),
        Some(path) => {
            let bytes = read_file(path)?;
            let tol: Tolerances = parse_json(&bytes, &path.display().to_string())?;
            for (name, v) in [
                ("eps_adj", tol.eps_adj),
                ("eig_cutoff", tol.eig_cutoff),
                ("theta_tol", tol.theta_tol),
                ("validation_tol", tol.validation_tol),
            ] {
                if !(v > 0.0 && v < 1.0) {
                    return Err(CliError::Usage(format!(
                        "config: {name} must lie in (0, 1), got {v}"
                    )));
                }
            }
            Ok((tol, Some(file_source(path, &bytes))))
        }
    }
}

struct LoadedChannel {
    spec: ChannelSpecFile,
    channel: KrausChannel,
    source: Source,
    tolerances: Tolerances,
    config: Option<Source>,
}

fn load_channel(args: &ChannelArgs) -> CliResult<LoadedChannel> {
    let (tolerances, config) = load_tolerances(args.config.as_deref())?;
    let bytes = read_file(&args.path)?;
    let mut spec = ChannelSpecFile::parse(&bytes, &args.path.display().to_string())?;
    for p in &args.params {
        let (name, value) = parse_param(p)?;
        spec.set_parameter(&name, value)?;
    }
    let channel = spec.build(tolerances.validation_tol)?;
    Ok(LoadedChannel {
        spec,
        channel,
        source: file_source(&args.path, &bytes),
        tolerances,
        config,
    })
}

fn apply_eps(tol: &mut Tolerances, eps: Option<f64>) -> CliResult<()> {
    if let Some(e) = eps {
        if !(e > 0.0 && e < 1.0) {
            return Err(CliError::Usage(format!(
                "--eps must lie in (0, 1), got {e}"
            )));
        }
        tol.eps_adj = e;
    }
    Ok(())
}

fn rate_options(tol: &Tolerances, max_n: usize, theta: bool, out: &OutputArgs) -> RateOptions {
    RateOptions {
        max_n,
        eps: tol.eps_adj,
        eig_cutoff: tol.eig_cutoff,
        vertex_cap: out.vertex_cap,
        clique_budget: out.node_budget,
        theta,
        theta_tol: tol.theta_tol,
    }
}

fn options(max_n: usize, theta: bool, out: &OutputArgs) -> Options {
    Options {
        max_n,
        theta,
        vertex_cap: out.vertex_cap,
        node_budget: out.node_budget,
        strategy: None,
        trials: None,
        seed: None,
    }
}

fn checked_witness(
    report: &qzec::RateReport,
    channel: &KrausChannel,
    ensemble: &InputEnsemble,
    meas: &Measurement,
    eps: f64,
) -> CliResult<Option<qzec::WitnessCode>> {
    let n = report.best_n;
    let dim = (channel.dim() as u128).pow(n as u32);
    if dim > WITNESS_DIM_CAP as u128 {
        return Ok(None);
    }
    Ok(Some(witness_code(report, channel, ensemble, meas, eps)?))
}

/// Renders and writes the report; returns the exit code.
fn emit(report: &Report, out: &OutputArgs) -> CliResult<u8> {
    let text = if out.pretty {
        report.to_text()
    } else {
        report.to_json()
    };
    match &out.output {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(if report.all_exact {
        EXIT_OK
    } else {
        EXIT_PARTIAL
    })
}

/// Writes to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn cmd_validate(args: &ValidateArgs) -> CliResult<u8> {
    let loaded = load_channel(&args.channel)?;
    println!(
        "valid: dimension {}, {} Kraus operators, completeness residual {:.3e}",
        loaded.channel.dim(),
        loaded.channel.operators().len(),
        loaded.channel.completeness_residual()
    );
    Ok(EXIT_OK)
}

pub fn cmd_rate(args: &RateArgs) -> CliResult<u8> {
    let mut loaded = load_channel(&args.channel)?;
    apply_eps(&mut loaded.tolerances, args.out.eps)?;
    let tol = loaded.tolerances;
    let ch = &loaded.channel;
    let d = ch.dim();
    let ev = loaded.spec.evaluator();

    let (ensemble, states_source) = match args.states.as_str() {
        "canonical" => (InputEnsemble::computational_basis(d), Source::Canonical),
        path => {
            let path = Path::new(path);
            let bytes = read_file(path)?;
            let file: StatesFile = parse_json(&bytes, &path.display().to_string())?;
            (
                file.ensemble(&ev, d, tol.validation_tol)?,
                file_source(path, &bytes),
            )
        }
    };
    let (meas, meas_source) = match args.measurement.as_str() {
        "canonical" => (Measurement::computational(d), Source::Canonical),
        "output-eigenbasis" => {
            let inputs: Vec<_> = ensemble
                .states()
                .iter()
                .map(|s| s.density().matrix().clone())
                .collect();
            let basis = output_eigenbasis_of(ch, &inputs)?;
            (
                Measurement::from_basis(&basis, 1e-8)?,
                Source::OutputEigenbasis,
            )
        }
        path => {
            let path = Path::new(path);
            let bytes = read_file(path)?;
            let file: MeasurementFile = parse_json(&bytes, &path.display().to_string())?;
            (
                file.measurement(&ev, d, tol.validation_tol)?,
                file_source(path, &bytes),
            )
        }
    };

    let rates = zero_error_rate(
        ch,
        &ensemble,
        &meas,
        &rate_options(&tol, args.max_n, args.theta, &args.out),
    )?;
    let witness = checked_witness(&rates, ch, &ensemble, &meas, tol.eps_adj)?;
    let inputs = Inputs {
        channel: loaded.source.clone(),
        parameters: loaded.spec.parameter_values(),
        states: states_source,
        measurement: meas_source,
        config: loaded.config.clone(),
        options: options(args.max_n, args.theta, &args.out),
    };
    let report = Report::new("rate", inputs, tol, &rates, witness);
    emit(&report, &args.out)
}

pub fn parse_strategies(s: &str) -> CliResult<Vec<StrategyKind>> {
    let kinds = s
        .split(',')
        .map(|k| {
            k.trim()
                .parse::<StrategyKind>()
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if kinds.is_empty() {
        return Err(CliError::Usage("no strategy given".into()));
    }
    Ok(kinds)
}

pub fn cmd_search(args: &SearchArgs) -> CliResult<u8> {
    let mut loaded = load_channel(&args.channel)?;
    apply_eps(&mut loaded.tolerances, args.out.eps)?;
    let tol = loaded.tolerances;
    let kinds = parse_strategies(&args.strategy)?;
    let strategy = SearchStrategy {
        kinds: kinds.clone(),
        trials: args.trials,
        seed: args.seed,
        max_n: args.max_n,
        eps: tol.eps_adj,
        eig_cutoff: tol.eig_cutoff,
        vertex_cap: args.out.vertex_cap,
        clique_budget: args.out.node_budget,
    };
    let ch = &loaded.channel;
    let result = search_optimum(ch, &strategy)?;
    let best = &result.best;
    // The search does not compute theta; add it for the winner only.
    let rates = if args.theta {
        zero_error_rate(
            ch,
            &best.ensemble,
            &best.measurement,
            &rate_options(&tol, args.max_n, true, &args.out),
        )?
    } else {
        result.report.clone()
    };
    let witness = checked_witness(&rates, ch, &best.ensemble, &best.measurement, tol.eps_adj)?;
    let mut opts = options(args.max_n, args.theta, &args.out);
    opts.strategy = Some(kinds.iter().map(|k| k.to_string()).collect());
    opts.trials = Some(args.trials);
    opts.seed = Some(args.seed);
    let inputs = Inputs {
        channel: loaded.source.clone(),
        parameters: loaded.spec.parameter_values(),
        states: Source::Builtin {
            name: "search".into(),
        },
        measurement: Source::Builtin {
            name: "search".into(),
        },
        config: loaded.config.clone(),
        options: opts,
    };
    let mut report = Report::new("search", inputs, tol, &rates, witness);
    report.search = Some(SearchSection {
        best_index: result.best_index,
        best_origin: best.origin.clone(),
        input_basis: matrix_to_pairs(&best.input_basis),
        measurement_basis: matrix_to_pairs(&best.measurement_basis),
        candidates: result.log.clone(),
    });
    if result.log.iter().any(|c| !c.exact) {
        report.all_exact = false;
    }
    emit(&report, &args.out)
}

/// Reference block code of length two for the pentagon, 0-indexed.
pub const PENTAGON_REFERENCE_CODE: [[usize; 2]; 5] = [[0, 0], [1, 2], [2, 4], [3, 1], [4, 3]];

fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        perms(n - 1)
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    q
                })
            })
            .collect()
    }
    perms(g.vertex_count())
        .into_iter()
        .filter(|p| g.relabel(p) == *g)
        .collect()
}

/// Whether two length-2 codes agree up to an automorphism per coordinate and
/// a coordinate swap.
fn codes_equivalent(g: &Graph, code: &[Vec<usize>], reference: &[[usize; 2]]) -> bool {
    use std::collections::BTreeSet;
    if code.len() != reference.len() || code.iter().any(|w| w.len() != 2) {
        return false;
    }
    let target: BTreeSet<[usize; 2]> = reference.iter().copied().collect();
    let autos = automorphisms(g);
    autos.iter().any(|p| {
        autos.iter().any(|q| {
            [false, true].iter().any(|&swap| {
                let mapped: BTreeSet<[usize; 2]> = code
                    .iter()
                    .map(|w| {
                        let (a, b) = if swap { (w[1], w[0]) } else { (w[0], w[1]) };
                        [p[a], q[b]]
                    })
                    .collect();
                mapped == target
            })
        })
    })
}

pub fn cmd_demo_pentagon(args: &DemoArgs) -> CliResult<u8> {
    let (mut tol, config) = load_tolerances(args.config.as_deref())?;
    apply_eps(&mut tol, args.out.eps)?;
    let mut spec = ChannelSpecFile::parse(PENTAGON_TEMPLATE.as_bytes(), "pentagon template")?;
    spec.set_parameter("alpha", args.alpha)?;
    spec.set_parameter("beta", args.beta)?;
    let ch = spec.build(tol.validation_tol)?;
    let direct = qzec::pentagon(args.alpha, args.beta)?;
    let drift = ch
        .operators()
        .iter()
        .zip(direct.operators())
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max);
    if drift > 1e-12 {
        return Err(CliError::Check(format!(
            "template and built-in pentagon differ by {drift:e}"
        )));
    }

    let ensemble = InputEnsemble::computational_basis(5);
    let meas = Measurement::computational(5);
    let rates = zero_error_rate(
        &ch,
        &ensemble,
        &meas,
        &rate_options(&tol, args.max_n, true, &args.out),
    )?;
    let c5 = Graph::from_edges(5, &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)])?;
    if rates.graph != c5 {
        return Err(CliError::Check(format!(
            "characteristic graph is not the pentagon: edges {:?}",
            rates.graph.edges()
        )));
    }
    if let Some(row) = rates.rows.get(1) {
        if row.exact && row.clique_number != 5 {
            return Err(CliError::Check(format!(
                "K(2) = {}, expected 5",
                row.clique_number
            )));
        }
    }
    let witness = checked_witness(&rates, &ch, &ensemble, &meas, tol.eps_adj)?;
    let reference_code = PENTAGON_REFERENCE_CODE
        .iter()
        .map(|w| w.iter().map(|&i| ensemble.labels()[i].clone()).collect())
        .collect();
    let matches_reference = witness.as_ref().is_some_and(|w| {
        w.n == 2 && codes_equivalent(&rates.graph, &w.codewords, &PENTAGON_REFERENCE_CODE)
    });

    let inputs = Inputs {
        channel: Source::Builtin {
            name: "pentagon".into(),
        },
        parameters: BTreeMap::from([("alpha".into(), args.alpha), ("beta".into(), args.beta)]),
        states: Source::Canonical,
        measurement: Source::Canonical,
        config,
        options: options(args.max_n, true, &args.out),
    };
    let mut report = Report::new("demo-pentagon", inputs, tol, &rates, witness);
    report.demo = Some(DemoSection {
        reference_code,
        matches_reference,
    });
    emit(&report, &args.out)
}

/// Applies `ZEC_THREADS` to the global thread pool.
fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("ZEC_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "ZEC_THREADS must be a positive integer, got '{value}'"
            ))
        })?;
    #[cfg(feature = "parallel")]
    {
        // Fails only if the pool was already initialised, e.g. in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

pub fn dispatch(cli: &Cli) -> CliResult<u8> {
    configure_threads()?;
    match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Rate(a) => cmd_rate(a),
        Command::Search(a) => cmd_search(a),
        Command::DemoPentagon(a) => cmd_demo_pentagon(a),
    }
}

/// Parses arguments, runs the command, reports errors on stderr, and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                error::EXIT_USAGE
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Core(qzec::Error::NotTracePreserving { residual, tol }) => eprintln!(
                    "invalid: completeness residual ||sum E^dag E - I||_F = {residual:.6e} exceeds {tol:e}"
                ),
                _ => eprintln!("error: {e}"),
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_code_is_equivalent_to_itself_relabelled() {
        let c5 = Graph::from_edges(5, &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]).unwrap();
        let code: Vec<Vec<usize>> = PENTAGON_REFERENCE_CODE
            .iter()
            .map(|w| vec![w[1], w[0]])
            .collect();
        assert!(codes_equivalent(&c5, &code, &PENTAGON_REFERENCE_CODE));
        let bad = vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]];
        assert!(!codes_equivalent(&c5, &bad, &PENTAGON_REFERENCE_CODE));
    }

    #[test]
    fn param_syntax() {
        assert_eq!(parse_param("alpha=0.2").unwrap(), ("alpha".into(), 0.2));
        assert!(parse_param("alpha").is_err());
        assert!(parse_param("alpha=x").is_err());
    }

    #[test]
    fn strategies_parse() {
        assert_eq!(
            parse_strategies("canonical, refine").unwrap(),
            vec![StrategyKind::Canonical, StrategyKind::Refine]
        );
        assert!(parse_strategies("canonical,bogus").is_err());
    }
}

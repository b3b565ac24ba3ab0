//! `flagcert` command-line front end.
//!
//! Exit codes: 0 pass, 1 certified failure, 2 input error, 3 unsupported.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flagcert::certify::{
    evaluate_surface_experimental, orthoscheme_contraction_check, ContractionStatus, HYPOTHESIS_TOL,
};
use flagcert::io::{export_triples, off_mesh, parse_input, PolytopeJson, SectionJson};
use flagcert::measures::{area_curve, curve_csv};
use flagcert::polytope::random_section;
use flagcert::sampling::{gaussian_vector, stream_rng};
use flagcert::{
    build_simplices, certify_surface, certify_volume, check_distance_hypothesis, covering_check,
    obtuse_pair_bound, sin_ratio_monotonicity_check, Certificate, Error, Mode, Orthoscheme, Vector,
};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "flagcert",
    version,
    about = "Volume and surface certificates for polytopes with far faces"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Distance threshold per codimension: sqrt(k) or sqrt(2k/(k+1)).
    #[arg(long, value_enum, default_value_t = ModeArg::Vaaler, global = true)]
    mode: ModeArg,

    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    samples: u64,

    /// Output file for the command's primary artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Vaaler,
    Rogers,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Vaaler => Mode::Vaaler,
            ModeArg::Rogers => Mode::Rogers,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the face-distance hypothesis.
    Check { input: PathBuf },
    /// Build a volume or surface certificate.
    Certify {
        #[arg(value_enum)]
        kind: CertifyKind,
        input: PathBuf,
        /// Evaluate the surface ledger in unsupported dimensions (no verdict).
        #[arg(long)]
        experimental: bool,
    },
    /// Emit the polytope of a cube section.
    Section {
        /// Section JSON file; omit with --random.
        input: Option<PathBuf>,
        /// Random n-dimensional section of [-1,1]^N.
        #[arg(long, num_args = 2, value_names = ["n", "N"])]
        random: Option<Vec<usize>>,
    },
    /// Export the flag subdivision and check that it tiles the polytope.
    Subdivide {
        input: PathBuf,
        /// Also write an OFF mesh of the simplices (n = 2, 3).
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Tabulate area/sin t for right spherical triangles with leg c.
    Curve {
        #[arg(long, default_value_t = PI / 4.0)]
        c: f64,
        #[arg(long, default_value_t = 0.01)]
        t_min: f64,
        #[arg(long, default_value_t = PI / 2.0 - 0.01)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Standalone lemma checks.
    Lemma {
        #[command(subcommand)]
        lemma: Lemma,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CertifyKind {
    Volume,
    Surface,
}

#[derive(Subcommand, Debug)]
enum Lemma {
    /// Largest pairwise dot product of k+1 unit vectors is at least -1/k.
    Obtuse {
        /// JSON file {"vectors": [[..], ..]}; random families otherwise.
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// The map between orthoschemes with |b_k| >= |c_k| shortens every vector.
    Contraction {
        /// Edge lengths of B, comma separated; random pairs otherwise.
        #[arg(long, value_delimiter = ',')]
        beta: Option<Vec<f64>>,
        /// Edge lengths of C (default: all ones).
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<f64>>,
        /// Dimension of random pairs.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Random pairs to test.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
}

/// A run failure mapped onto the exit-code contract.
enum Failure {
    Input(String),
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedDimension(_) => Failure::Unsupported(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Rounds to 12 significant digits for text reports.
fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded != 0.0 && !(1e-4..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn emit(config: &RunConfig, text: &str) -> Result<(), Failure> {
    match &config.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load(path: &Path) -> Result<flagcert::Polytope, Failure> {
    let text = fs::read_to_string(path)?;
    Ok(parse_input(&text)?)
}

fn cmd_check(config: &RunConfig, input: &Path) -> Outcome {
    let p = load(input)?;
    let report = check_distance_hypothesis(&p, config.mode.into());
    let text = if config.format == Format::Json {
        to_json(&report)?
    } else {
        let mut s = format!(
            "hypothesis ({}): {}\nfaces: {}\nmin margin: {}\n",
            report.mode,
            if report.pass { "pass" } else { "FAIL" },
            report.entries.len(),
            sig(report.min_margin())
        );
        for e in report.entries.iter().filter(|e| e.margin < -HYPOTHESIS_TOL) {
            s.push_str(&format!(
                "  face {} codim {}: distance {} < {}\n",
                e.face,
                e.codim,
                sig(e.distance),
                sig(e.threshold)
            ));
        }
        s
    };
    emit(config, &text)?;
    Ok(report.pass)
}

fn certificate_summary(cert: &Certificate) -> String {
    let degenerate = cert.simplices.iter().filter(|s| s.degenerate).count();
    format!(
        "certificate: {:?}\ndim: {}\nsimplices: {} ({} degenerate)\ntotal: {}\nbound: {}\nmin margin: {}\nomega sum: {}\nresult: {}\n",
        cert.kind,
        cert.dim,
        cert.simplices.len(),
        degenerate,
        sig(cert.total),
        sig(cert.claimed_bound),
        sig(cert.min_margin),
        sig(cert.omega_sum),
        if cert.pass { "pass" } else { "FAIL" }
    )
    .to_lowercase()
}

fn cmd_certify(config: &RunConfig, kind: CertifyKind, input: &Path, experimental: bool) -> Outcome {
    let p = load(input)?;
    let result = match kind {
        CertifyKind::Volume => certify_volume(&p),
        CertifyKind::Surface => match certify_surface(&p) {
            Err(Error::UnsupportedDimension(n)) if experimental => {
                let eval = evaluate_surface_experimental(&p)?;
                let json = to_json(&eval)?;
                if let Some(path) = &config.out {
                    fs::write(path, &json)?;
                }
                if config.format == Format::Json && config.out.is_none() {
                    print!("{json}");
                } else {
                    println!(
                        "EXPERIMENTAL surface evaluation (n = {n}, no verdict)\ntotal: {}\nreference n*2^n: {}\nmin margin: {}\nomega sum: {}",
                        sig(eval.total),
                        sig(eval.reference),
                        sig(eval.min_margin),
                        sig(eval.omega_sum)
                    );
                }
                return Ok(true);
            }
            other => other,
        },
    };
    let cert = match result {
        Ok(cert) => cert,
        Err(Error::HypothesisFailed(report)) => {
            eprintln!(
                "hypothesis fails: {} face(s), min margin {}",
                report.failures(),
                sig(report.min_margin())
            );
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let json = to_json(&cert)?;
    if let Some(path) = &config.out {
        fs::write(path, &json)?;
    }
    if config.format == Format::Json {
        if config.out.is_none() {
            print!("{json}");
        }
    } else {
        print!("{}", certificate_summary(&cert));
    }
    Ok(cert.pass)
}

fn cmd_section(config: &RunConfig, input: Option<&Path>, random: Option<&[usize]>) -> Outcome {
    let p = match (input, random) {
        (_, Some(&[n, big_n])) => random_section(n, big_n, config.seed)?.1,
        (Some(path), None) => {
            let section: SectionJson = serde_json::from_str(&fs::read_to_string(path)?)?;
            section.build()?
        }
        _ => return Err(Failure::Input("give a section file or --random n N".into())),
    };
    emit(config, &to_json(&PolytopeJson::from_polytope(&p, true))?)?;
    Ok(true)
}

fn cmd_subdivide(config: &RunConfig, input: &Path, off: Option<&Path>) -> Outcome {
    let p = load(input)?;
    let triples = build_simplices(&p);
    if let Some(path) = &config.out {
        fs::write(path, to_json(&export_triples(&triples))?)?;
    }
    if let Some(path) = off {
        fs::write(path, off_mesh(&triples)?)?;
    }
    let report = covering_check(&p, &triples, config.samples as usize, config.seed);
    if config.format == Format::Json {
        print!("{}", to_json(&report)?);
    } else {
        println!(
            "simplices: {} ({} degenerate)\nvolume gap: {}\nuncovered hits: {}\noverlap hits: {}\nsamples: {}\nresult: {}",
            triples.len(),
            triples.iter().filter(|t| t.degenerate).count(),
            sig(report.volume_gap),
            report.uncovered_hits,
            report.max_overlap_hits,
            report.samples,
            if report.pass() { "pass" } else { "fail" }
        );
    }
    Ok(report.pass())
}

fn cmd_curve(config: &RunConfig, c: f64, t_min: f64, t_max: f64, steps: usize) -> Outcome {
    if steps == 0 || !t_min.is_finite() || !t_max.is_finite() || t_min > t_max {
        return Err(Failure::Input("need steps >= 1 and t_min <= t_max".into()));
    }
    let ts: Vec<f64> = if steps == 1 {
        vec![t_min]
    } else {
        (0..steps)
            .map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let rows = area_curve(c, &ts)?;
    let verdict = sin_ratio_monotonicity_check(c, &ts)?;
    let mut csv = curve_csv(&rows);
    csv.push_str(&format!(
        "# verdict: {} (min difference {})\n",
        if verdict.pass {
            "increasing"
        } else {
            "NOT increasing"
        },
        sig(verdict.min_difference)
    ));
    emit(config, &csv)?;
    Ok(verdict.pass)
}

#[derive(Serialize, Deserialize)]
struct VectorsJson {
    vectors: Vec<Vec<f64>>,
}

fn cmd_obtuse(config: &RunConfig, input: Option<&Path>, k: usize, n: usize) -> Outcome {
    if let Some(path) = input {
        let parsed: VectorsJson = serde_json::from_str(&fs::read_to_string(path)?)?;
        let vectors: Vec<Vector> = parsed
            .vectors
            .iter()
            .map(|v| Vector::from_column_slice(v))
            .collect();
        let report = obtuse_pair_bound(&vectors)?;
        emit(
            config,
            &if config.format == Format::Json {
                to_json(&report)?
            } else {
                format!(
                    "k: {}\nmax dot: {}\nbound: {}\nresult: {}\n",
                    report.k,
                    sig(report.max_dot),
                    sig(report.bound),
                    if report.pass { "pass" } else { "fail" }
                )
            },
        )?;
        return Ok(report.pass);
    }
    if k == 0 || n == 0 {
        return Err(Failure::Input("k and n must be positive".into()));
    }
    let mut rng = stream_rng(config.seed, 0);
    let mut failures = 0;
    let mut worst_slack = f64::INFINITY;
    for _ in 0..config.samples {
        let vectors: Vec<Vector> = (0..=k)
            .map(|_| gaussian_vector(&mut rng, n).normalize())
            .collect();
        let report = obtuse_pair_bound(&vectors)?;
        worst_slack = worst_slack.min(report.max_dot - report.bound);
        if !report.pass {
            failures += 1;
        }
    }
    emit(
        config,
        &format!(
            "families: {}\nk: {k}\nn: {n}\nmin (max dot + 1/k): {}\nfailures: {failures}\n",
            config.samples,
            sig(worst_slack)
        ),
    )?;
    Ok(failures == 0)
}

fn cmd_contraction(
    config: &RunConfig,
    beta: Option<&[f64]>,
    gamma: Option<&[f64]>,
    dim: usize,
    pairs: usize,
) -> Outcome {
    let samples = config.samples as usize;
    if let Some(beta) = beta {
        let b = Orthoscheme::from_edge_lengths(beta)?;
        let ones = vec![1.0; beta.len()];
        let c = Orthoscheme::from_edge_lengths(gamma.unwrap_or(&ones))?;
        let report = orthoscheme_contraction_check(&b, &c, samples, config.seed)?;
        emit(
            config,
            &if config.format == Format::Json {
                to_json(&report)?
            } else {
                format!(
                    "status: {:?}\nsamples: {}\nviolations: {}\nmax excess: {}\nvertices ok: {}\n",
                    report.status,
                    report.samples,
                    report.violations,
                    sig(report.max_excess),
                    report.vertices_ok
                )
            },
        )?;
        if let ContractionStatus::PreconditionUnmet { index } = report.status {
            return Err(Failure::Input(format!("|c_{index}| exceeds |b_{index}|")));
        }
        return Ok(report.pass());
    }
    if dim == 0 {
        return Err(Failure::Input("dimension must be positive".into()));
    }
    let mut rng = stream_rng(config.seed, 1);
    let mut failed = 0;
    for i in 0..pairs {
        let gammas: Vec<f64> = (0..dim).map(|_| rng.random_range(0.2..2.0)).collect();
        let betas: Vec<f64> = gammas
            .iter()
            .map(|g| g * rng.random_range(1.0..2.0))
            .collect();
        let b = Orthoscheme::from_edge_lengths(&betas)?;
        let c = Orthoscheme::from_edge_lengths(&gammas)?;
        let report =
            orthoscheme_contraction_check(&b, &c, samples.min(1000), config.seed + i as u64)?;
        if !report.pass() {
            failed += 1;
        }
    }
    emit(
        config,
        &format!("pairs: {pairs}\ndim: {dim}\nfailures: {failed}\n"),
    )?;
    Ok(failed == 0)
}

fn run(cli: &Cli) -> Outcome {
    let config = &cli.config;
    match &cli.command {
        Command::Check { input } => cmd_check(config, input),
        Command::Certify {
            kind,
            input,
            experimental,
        } => cmd_certify(config, *kind, input, *experimental),
        Command::Section { input, random } => {
            cmd_section(config, input.as_deref(), random.as_deref())
        }
        Command::Subdivide { input, off } => cmd_subdivide(config, input, off.as_deref()),
        Command::Curve {
            c,
            t_min,
            t_max,
            steps,
        } => cmd_curve(config, *c, *t_min, *t_max, *steps),
        Command::Lemma { lemma } => match lemma {
            Lemma::Obtuse { input, k, n } => cmd_obtuse(config, input.as_deref(), *k, *n),
            Lemma::Contraction {
                beta,
                gamma,
                dim,
                pairs,
            } => cmd_contraction(config, beta.as_deref(), gamma.as_deref(), *dim, *pairs),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(3)
        }
    }
}

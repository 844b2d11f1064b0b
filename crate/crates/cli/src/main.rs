use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scl_core::free::FreeWord;
use scl_core::qm::QmError;
use scl_core::scl::{double_chain_scl, fsn_with_certificates, gap_certificate, DeltaChain, WeightedStability};
use scl_core::stats::{fsn_histogram, sample_x, with_threads, Histogram, StatsError, XParams};
use scl_core::{
    format_rational, io, parse_rational, Chain, GapCertificate, Presentation, Rational, SclError, SimplicialGraph,
    VertexSet, Word,
};

#[derive(Parser)]
#[command(name = "scl", version, about = "Stable commutator length in graph products")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct WordInput {
    #[arg(long)]
    pres: PathBuf,
    /// Space-separated letters such as `a b^-2 c:x1X2`.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Args)]
struct ChainInput {
    #[arg(long)]
    pres: PathBuf,
    #[arg(long)]
    chain: PathBuf,
    /// Comma-separated scl values of the vertex groups, in vertex order.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Worker threads (default: all cores); output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced normal form of a word.
    Normalize(WordInput),
    /// Cyclically reduced core and the conjugator back to the input.
    CyclicReduce(WordInput),
    /// Singleton and pure factors.
    PureFactors(WordInput),
    /// Description of the centralizer.
    Centralizer(WordInput),
    /// Iterated CM-reduction relative to an induced subgraph.
    CmReduce {
        #[command(flatten)]
        input: WordInput,
        /// Comma-separated vertex names spanning Λ.
        #[arg(long)]
        lambda: String,
    },
    /// Fractional stability number of a graph.
    Fsn {
        #[arg(long)]
        graph: PathBuf,
    },
    /// scl of a vertex chain.
    SclVertexChain(ChainInput),
    /// scl of Σ [a_v, b_v] over the double graph.
    DoubleChain {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pres_out: Option<PathBuf>,
        #[arg(long)]
        chain_out: Option<PathBuf>,
    },
    /// Opposite path length Δ(Γ).
    DeltaGamma {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exact value or uniform lower bound for a chain.
    Gap(ChainInput),
    /// The chain δ_m over the opposite path Δ_m.
    DeltaChain {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        pres_out: Option<PathBuf>,
        #[arg(long)]
        chain_out: Option<PathBuf>,
    },
    /// Bavard lower bound for a free-group chain from one Brooks map.
    BrooksBound {
        /// The counted word, e.g. `x1x2X1X2`.
        #[arg(long)]
        word: String,
        /// Chain file with `coeff word` lines in the same alphabet.
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: u32,
        /// Power used to homogenize.
        #[arg(long, default_value_t = 200)]
        power: u64,
    },
    /// Histogram of fsn over random graphs.
    SampleFsn {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Histogram of draws from the rounded-Gaussian X distribution.
    SampleX {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        #[command(flatten)]
        sampling: Sampling,
    },
}

enum CliError {
    /// Bad files, arguments or parameters: exit code 1.
    Input(String),
    /// A certificate or invariant check failed: exit code 2.
    Internal(String),
}

fn input(e: impl Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<SclError> for CliError {
    fn from(e: SclError) -> Self {
        match e {
            SclError::Solver(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::InvalidParameter(_) => CliError::Input(e.to_string()),
            StatsError::ThreadPool(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<QmError> for CliError {
    fn from(e: QmError) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<SimplicialGraph, CliError> {
    io::parse_graph(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_pres(path: &Path) -> Result<Presentation, CliError> {
    Presentation::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_word(w: &WordInput) -> Result<(Presentation, Word), CliError> {
    let p = load_pres(&w.pres)?;
    let word = p.parse_word(&w.word).map_err(input)?;
    Ok((p, word))
}

fn load_chain(c: &ChainInput) -> Result<(Presentation, Chain, Option<Vec<Rational>>), CliError> {
    let p = load_pres(&c.pres)?;
    let chain = p
        .parse_chain(&read(&c.chain)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", c.chain.display())))?;
    let weights = c
        .weights
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(|x| parse_rational(x.trim()).map_err(|e| CliError::Input(format!("weight `{x}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    Ok((p, chain, weights))
}

fn names(g: &SimplicialGraph, set: &VertexSet) -> Vec<String> {
    g.set_names(set)
}

fn checked(s: &WeightedStability) -> Result<(), CliError> {
    s.program
        .check_certificates(&s.solution)
        .map_err(|e| CliError::Internal(format!("certificate check failed: {e}")))
}

fn render(format: Format, text: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> CliResult {
    match format {
        Format::Json => Ok(format!("{:#}\n", json())),
        Format::Text => Ok(text()),
        Format::Csv => Err(CliError::Input("csv output is only available for histograms".into())),
    }
}

fn histogram_output(format: Format, h: &Histogram) -> CliResult {
    match format {
        Format::Csv | Format::Text => Ok(h.to_csv()),
        Format::Json => {
            let bins: Vec<Value> = h
                .bins
                .iter()
                .map(|(v, c)| json!({"value": format_rational(v), "count": c}))
                .collect();
            Ok(format!("{:#}\n", json!({"seed": h.seed, "samples": h.samples, "bins": bins})))
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Normalize(w) => {
            let (p, word) = load_word(w)?;
            let n = p.normalize(&word);
            render(
                fmt(Format::Text),
                || format!("{}\n", p.format_word(&n)),
                || json!({"word": p.format_word(&n), "syllable_length": n.len()}),
            )
        }
        Command::CyclicReduce(w) => {
            let (p, word) = load_word(w)?;
            let (c, core) = p.cyclically_reduce(&word);
            render(
                fmt(Format::Text),
                || format!("conjugator\t{}\ncore\t{}\n", p.format_word(&c), p.format_word(&core)),
                || json!({"conjugator": p.format_word(&c), "core": p.format_word(&core)}),
            )
        }
        Command::PureFactors(w) => {
            let (p, word) = load_word(w)?;
            let f = p.pure_factor_decomposition(&word).map_err(input)?;
            let singles: Vec<String> = f.singleton_factors.iter().map(|l| p.format_letter(l)).collect();
            render(
                fmt(Format::Text),
                || {
                    let mut out = format!("conjugator\t{}\n", p.format_word(&f.conjugator));
                    for s in &singles {
                        out.push_str(&format!("singleton\t{s}\n"));
                    }
                    for (r, e) in &f.pure_factors {
                        out.push_str(&format!("pure\t{}\t{e}\n", p.format_word(r)));
                    }
                    out
                },
                || {
                    let pure: Vec<Value> = f
                        .pure_factors
                        .iter()
                        .map(|(r, e)| json!({"root": p.format_word(r), "exponent": e}))
                        .collect();
                    json!({"conjugator": p.format_word(&f.conjugator), "singletons": singles, "pure_factors": pure})
                },
            )
        }
        Command::Centralizer(w) => {
            let (p, word) = load_word(w)?;
            let d = p.centralizer_description(&word).map_err(input)?;
            let g = p.graph();
            let singles: Vec<String> = d
                .singleton_centralizers
                .iter()
                .map(|s| match s {
                    scl_core::word::SingletonCentralizer::WholeVertexGroup { vertex } => {
                        format!("vertex group {}", g.name(*vertex))
                    }
                    scl_core::word::SingletonCentralizer::Cyclic { generator } => {
                        format!("<{}>", p.format_letter(generator))
                    }
                })
                .collect();
            let roots: Vec<String> = d.roots.iter().map(|r| p.format_word(r)).collect();
            render(
                fmt(Format::Text),
                || {
                    let mut out = format!("conjugator\t{}\n", p.format_word(&d.conjugator));
                    out.push_str(&format!("theta\t{}\n", names(g, &d.theta).join(" ")));
                    out.push_str(&format!("link\t{}\n", names(g, &d.link).join(" ")));
                    for s in &singles {
                        out.push_str(&format!("singleton\t{s}\n"));
                    }
                    for r in &roots {
                        out.push_str(&format!("root\t{r}\n"));
                    }
                    out
                },
                || {
                    json!({
                        "conjugator": p.format_word(&d.conjugator),
                        "theta": names(g, &d.theta),
                        "link": names(g, &d.link),
                        "singleton_centralizers": singles,
                        "roots": roots,
                    })
                },
            )
        }
        Command::CmReduce { input: w, lambda } => {
            let (p, word) = load_word(w)?;
            let g = p.graph();
            let vs: Vec<&str> = lambda.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let lambda = g.set_from_names(&vs).map_err(input)?;
            let nf = p.cm_normal_form(&lambda, &word).map_err(input)?;
            if p.conjugate_by(&word, &nf.conjugator) != p.cm_reassemble(&nf) {
                return Err(CliError::Internal("CM normal form does not reassemble".into()));
            }
            let seq: Vec<String> = nf.cm_sequence.iter().map(|h| p.format_word(h)).collect();
            let chain: Vec<Vec<String>> = nf.subgraph_chain.iter().map(|s| names(g, s)).collect();
            render(
                fmt(Format::Text),
                || {
                    let mut out = format!("conjugator\t{}\n", p.format_word(&nf.conjugator));
                    for (i, h) in seq.iter().enumerate() {
                        out.push_str(&format!("h{i}\t{h}\n"));
                    }
                    out.push_str(&format!("tail\t{}\n", p.format_word(&nf.tail)));
                    for (i, s) in chain.iter().enumerate() {
                        out.push_str(&format!("lambda{i}\t{}\n", s.join(" ")));
                    }
                    out
                },
                || {
                    json!({
                        "conjugator": p.format_word(&nf.conjugator),
                        "cm_sequence": seq,
                        "tail": p.format_word(&nf.tail),
                        "subgraph_chain": chain,
                    })
                },
            )
        }
        Command::Fsn { graph } => {
            let g = load_graph(graph)?;
            let s = fsn_with_certificates(&g)?;
            checked(&s)?;
            render(
                fmt(Format::Text),
                || format!("{}\n", format_rational(&s.value)),
                || {
                    json!({
                        "value": format_rational(&s.value),
                        "stable_measure": s.measure_json(&g),
                        "clique_cover": s.cover_json(&g),
                    })
                },
            )
        }
        Command::SclVertexChain(c) => {
            let (p, chain, weights) = load_chain(c)?;
            if !p.is_vertex_chain(&p.canonical_chain(&chain)) {
                return Err(CliError::Input("not a vertex chain".into()));
            }
            let cert = gap_certificate(&p, &chain, weights.as_deref())?;
            match &cert {
                GapCertificate::Exact { value, stability, .. } => {
                    checked(stability)?;
                    render(fmt(Format::Text), || format!("{}\n", format_rational(value)), || cert.to_json(&p))
                }
                GapCertificate::Infinite { .. } => {
                    render(fmt(Format::Text), || "infinite\n".into(), || cert.to_json(&p))
                }
                GapCertificate::WeightsRequired { .. } => Err(CliError::Input(
                    "no built-in scl for these vertex groups; pass --weights".into(),
                )),
                GapCertificate::LowerBound { .. } => Err(CliError::Internal("vertex chain reported a lower bound".into())),
            }
        }
        Command::DoubleChain { graph, pres_out, chain_out } => {
            let g = load_graph(graph)?;
            let d = double_chain_scl(&g)?;
            checked(&d.stability)?;
            let pres_text = d.double_presentation.write();
            let chain_text = d.double_presentation.format_chain(&d.double_chain);
            if let Some(path) = pres_out {
                write(path, &pres_text)?;
            }
            if let Some(path) = chain_out {
                write(path, &chain_text)?;
            }
            render(
                fmt(Format::Text),
                || format!("{}\n", format_rational(&d.value)),
                || json!({"value": format_rational(&d.value), "presentation": pres_text, "chain": chain_text}),
            )
        }
        Command::DeltaGamma { graph } => {
            let g = load_graph(graph)?;
            let d = g.opposite_path_length().map_err(input)?;
            render(fmt(Format::Text), || format!("{d}\n"), || json!({"opposite_path_length": d}))
        }
        Command::Gap(c) => {
            let (p, chain, weights) = load_chain(c)?;
            let cert = gap_certificate(&p, &chain, weights.as_deref())?;
            if let GapCertificate::Exact { stability, .. } = &cert {
                checked(stability)?;
            }
            render(
                fmt(Format::Json),
                || match &cert {
                    GapCertificate::Exact { value, .. } => format!("exact\t{}\n", format_rational(value)),
                    GapCertificate::LowerBound { bound, .. } => format!("lower_bound\t{}\n", format_rational(bound)),
                    other => format!("{}\n", other.status()),
                },
                || cert.to_json(&p),
            )
        }
        Command::DeltaChain { m, pres_out, chain_out } => {
            let d = DeltaChain::new(*m)?;
            for i in 0..=1 {
                for j in 1..=*m - i + 1 {
                    if !d.verify_power_identity(i, j) {
                        return Err(CliError::Internal(format!("power identity fails at i = {i}, j = {j}")));
                    }
                }
            }
            let pres_text = d.presentation.write();
            let chain_text = d.presentation.format_chain(&d.chain);
            if let Some(path) = pres_out {
                write(path, &pres_text)?;
            }
            if let Some(path) = chain_out {
                write(path, &chain_text)?;
            }
            render(
                fmt(Format::Text),
                || chain_text.clone(),
                || {
                    json!({
                        "m": m,
                        "lower": format_rational(&d.lower),
                        "upper": format_rational(&d.upper),
                        "presentation": pres_text,
                        "chain": chain_text,
                    })
                },
            )
        }
        Command::BrooksBound { word, chain, rank, power } => {
            let w = FreeWord::parse(word, *rank).map_err(input)?;
            let text = read(chain)?;
            let mut terms = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, x) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                let at = |e: &dyn Display| CliError::Input(format!("{}: line {}: {e}", chain.display(), i + 1));
                let k: i64 = k.parse().map_err(|_| at(&format!("invalid coefficient `{k}`")))?;
                let x = FreeWord::parse(x.trim(), *rank).map_err(|e| at(&e))?;
                terms.push((k, x));
            }
            let b = scl_core::qm::brooks_chain_bound(&w, &terms, *power)?;
            render(
                fmt(Format::Text),
                || format!("{}\n", format_rational(&b)),
                || json!({"bound": format_rational(&b), "word": w.to_string(), "power": power}),
            )
        }
        Command::SampleFsn { vertices, p, sampling } => {
            let h = with_threads(sampling.threads, || fsn_histogram(*vertices, *p, sampling.samples, sampling.seed))??;
            histogram_output(fmt(Format::Csv), &h)
        }
        Command::SampleX { d, beta, mu, c1, c2, sampling } => {
            let r = |name: &str, s: &str| parse_rational(s).map_err(|e| CliError::Input(format!("--{name} `{s}`: {e}")));
            let params = XParams {
                d: r("d", d)?,
                beta: r("beta", beta)?,
                mu: r("mu", mu)?,
                c1: r("c1", c1)?,
                c2: r("c2", c2)?,
            };
            let xs = with_threads(sampling.threads, || sample_x(&params, sampling.samples, sampling.seed))??;
            let h = Histogram::from_values(xs.into_iter().map(|x| x.value), sampling.seed);
            histogram_output(fmt(Format::Csv), &h)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

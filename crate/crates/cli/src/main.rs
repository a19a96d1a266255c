use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use seqhmm::alphabet::encoding_table;
use seqhmm::ann::{evaluate_ann_fold, train_ann, TrainConfig, WindowConfig, DEFAULT_WINDOW};
use seqhmm::dataset::{parse_corpus, Corpus, ParseMode};
use seqhmm::harness::{fold_table_csv, run_experiment, ExperimentConfig, Method};
use seqhmm::hmm::EmConfig;
use seqhmm::profile::{profile_baum_welch, profile_forward, ProfileEmConfig, ProfileHmm, Space};
use seqhmm::seqstruct::{evaluate_fold, ClassMode, Decoder, EvalOptions, EvalReport, ModelDirection};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "seqhmm", version, about = "HMM and neural-network models of protein sequence and secondary structure")]
struct Cli {
    /// Seed for every randomized step; overrides seeds in config files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the binary code table of both alphabets and exit.
    #[arg(long)]
    dump_encoding: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a corpus file.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Cross-validate a counted HMM.
    EvalCv(EvalCvArgs),
    /// Train a windowed network on a whole corpus.
    AnnTrain(AnnTrainArgs),
    /// Cross-validate a windowed network.
    AnnEval(AnnEvalArgs),
    /// Fit a profile HMM to unaligned sequences by Baum-Welch.
    ProfileTrain(ProfileTrainArgs),
    /// Log-probability of sequences under a profile HMM.
    ProfileScore(ProfileScoreArgs),
    /// Run the full method x direction x fold matrix from a config file.
    Run(RunArgs),
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Per-pair lengths and structure-class counts as JSON.
    Summary {
        #[command(flatten)]
        input: CorpusInput,
    },
}

#[derive(Args)]
struct CorpusInput {
    #[arg(long)]
    corpus: PathBuf,
    /// strict, lenient or repair.
    #[arg(long, default_value = "strict")]
    mode: ParseMode,
}

impl CorpusInput {
    fn load(&self) -> Result<Corpus> {
        let text = std::fs::read_to_string(&self.corpus)
            .with_context(|| format!("reading {}", self.corpus.display()))?;
        let parsed = parse_corpus(&text, self.mode).with_context(|| format!("parsing {}", self.corpus.display()))?;
        for w in &parsed.warnings {
            eprintln!("warning: {}", w.message);
        }
        Ok(parsed.corpus)
    }
}

#[derive(Args)]
struct FoldArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, default_value = "model1")]
    direction: ModelDirection,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    /// CSV report; per-pair detail goes to the same path with a .json extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalCvArgs {
    #[command(flatten)]
    folds: FoldArgs,
    #[arg(long, default_value = "posterior")]
    decoder: Decoder,
    #[arg(long, default_value_t = 1.0)]
    pseudocount: f64,
    #[arg(long, default_value = "8")]
    classes: ClassMode,
}

#[derive(Args)]
struct AnnOpts {
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Comma-separated hidden layer widths; empty for a single-layer net.
    #[arg(long, default_value = "")]
    hidden: String,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    /// Updates per position.
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 1)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    init_scale: f64,
    /// Visit examples in shuffled order instead of repeating each position.
    #[arg(long)]
    shuffled_sgd: bool,
}

impl AnnOpts {
    fn train_config(&self, seed: Option<u64>) -> Result<TrainConfig> {
        Ok(TrainConfig {
            learning_rate: self.lr,
            iterations_per_position: self.iters,
            epochs: self.epochs,
            seed: seed.unwrap_or(0),
            init_scale: self.init_scale,
            hidden: parse_hidden(&self.hidden)?,
            shuffled_sgd: self.shuffled_sgd,
        })
    }
}

fn parse_hidden(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("bad hidden layer width {t:?}")))
        .collect()
}

#[derive(Args)]
struct AnnTrainArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, default_value = "model1")]
    direction: ModelDirection,
    #[command(flatten)]
    ann: AnnOpts,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnnEvalArgs {
    #[command(flatten)]
    folds: FoldArgs,
    #[command(flatten)]
    ann: AnnOpts,
}

#[derive(Args)]
struct ProfileTrainArgs {
    /// One sequence per line, or FASTA.
    #[arg(long)]
    sequences: PathBuf,
    /// Number of match columns.
    #[arg(long)]
    length: usize,
    #[arg(long, default_value = "ACDEFGHIKLMNPQRSTVWY")]
    alphabet: String,
    #[arg(long, default_value_t = 15)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-4)]
    thresh: f64,
    #[arg(long, default_value_t = 0.0)]
    pseudocount: f64,
    /// linear or log; chosen per sequence length when omitted.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileScoreArgs {
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    sequences: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    mode: Option<ParseMode>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    folds: Option<usize>,
    /// Comma-separated subset of hmm,ann.
    #[arg(long)]
    methods: Option<String>,
    /// Comma-separated subset of model1,model2.
    #[arg(long)]
    directions: Option<String>,
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Ok(t.parse()?))
        .collect()
}

fn read_sequences(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut seqs = Vec::new();
    if text.trim_start().starts_with('>') {
        for record in text.split('>').skip(1) {
            let body: String = record.lines().skip(1).flat_map(|l| l.split_whitespace()).collect();
            seqs.push(body);
        }
    } else {
        seqs.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    Ok(seqs)
}

fn write_fold_reports(out: Option<&Path>, method: Option<Method>, reports: &[EvalReport]) -> Result<()> {
    let csv = fold_table_csv(method, reports);
    match out {
        Some(path) => {
            std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            let detail = path.with_extension("json");
            std::fs::write(&detail, serde_json::to_string_pretty(reports)?)
                .with_context(|| format!("writing {}", detail.display()))?;
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn corpus_summary(input: &CorpusInput) -> Result<()> {
    let corpus = input.load()?;
    println!("{}", serde_json::to_string_pretty(&corpus.summary())?);
    Ok(())
}

fn eval_cv(args: &EvalCvArgs) -> Result<()> {
    let corpus = args.folds.input.load()?;
    let opts = EvalOptions {
        direction: args.folds.direction,
        decoder: args.decoder,
        pseudocount: args.pseudocount,
        classes: args.classes,
    };
    let reports = corpus
        .folds(args.folds.folds)?
        .iter()
        .map(|f| evaluate_fold(&corpus, f, &opts))
        .collect::<seqhmm::Result<Vec<_>>>()?;
    write_fold_reports(args.folds.out.as_deref(), None, &reports)
}

fn ann_train(args: &AnnTrainArgs, seed: Option<u64>) -> Result<()> {
    let corpus = args.input.load()?;
    let w = WindowConfig::for_direction(args.direction, args.ann.window)?;
    let trained = train_ann(corpus.pairs(), args.direction, &w, &args.ann.train_config(seed)?)?;
    std::fs::write(&args.out, trained.model.to_json()).with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("trained {:?} with {} updates", trained.model.net.layer_sizes(), trained.steps);
    Ok(())
}

fn ann_eval(args: &AnnEvalArgs, seed: Option<u64>) -> Result<()> {
    let corpus = args.folds.input.load()?;
    let dir = args.folds.direction;
    let w = WindowConfig::for_direction(dir, args.ann.window)?;
    let t = args.ann.train_config(seed)?;
    let reports = corpus
        .folds(args.folds.folds)?
        .iter()
        .map(|f| evaluate_ann_fold(&corpus, f, dir, &w, &t))
        .collect::<seqhmm::Result<Vec<_>>>()?;
    write_fold_reports(args.folds.out.as_deref(), Some(Method::Ann), &reports)
}

fn parse_space(s: Option<&str>) -> Result<Option<Space>> {
    match s {
        None => Ok(None),
        Some("linear") => Ok(Some(Space::Linear)),
        Some("log") => Ok(Some(Space::Log)),
        Some(other) => bail!("unknown space {other:?}; expected linear or log"),
    }
}

fn profile_train(args: &ProfileTrainArgs, seed: Option<u64>) -> Result<()> {
    let init = ProfileHmm::random(args.length, &args.alphabet, seed.unwrap_or(0))?;
    let seqs = read_sequences(&args.sequences)?
        .iter()
        .map(|s| init.encode(s))
        .collect::<seqhmm::Result<Vec<_>>>()?;
    let cfg = ProfileEmConfig {
        em: EmConfig {
            max_iter: args.max_iter,
            thresh: args.thresh,
            pseudocount: args.pseudocount,
        },
        space: parse_space(args.space.as_deref())?,
    };
    let report = profile_baum_welch(&init, &seqs, &cfg)?;
    std::fs::write(&args.out, report.final_profile.to_json())
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "{} iterations, converged: {}, log-likelihood trace: {:?}",
        report.iterations, report.converged, report.loglik_trace
    );
    Ok(())
}

fn profile_score(args: &ProfileScoreArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.profile).with_context(|| format!("reading {}", args.profile.display()))?;
    let profile = ProfileHmm::from_json(&text)?;
    println!("index\tlength\tln_p");
    for (i, s) in read_sequences(&args.sequences)?.iter().enumerate() {
        let x = profile.encode(s)?;
        let f = profile_forward(&profile, &x, Space::for_length(x.len()))?;
        println!("{}\t{}\t{:.6}", i + 1, x.len(), f.ln_prob());
    }
    Ok(())
}

fn run(args: &RunArgs, seed: Option<u64>) -> Result<bool> {
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text).context("parsing config")?;
    if let Some(c) = &args.corpus {
        cfg.corpus = c.clone();
    }
    if let Some(m) = args.mode {
        cfg.parse_mode = m;
    }
    if let Some(d) = &args.out_dir {
        cfg.output_dir = d.clone();
    }
    if let Some(f) = args.folds {
        cfg.folds = f;
    }
    if let Some(m) = &args.methods {
        cfg.methods = parse_list(m)?;
    }
    if let Some(d) = &args.directions {
        cfg.directions = parse_list(d)?;
    }
    if let Some(s) = seed {
        cfg.ann.seed = s;
    }
    cfg.validate()?;
    let outcome = run_experiment(&cfg)?;
    for s in &outcome.report.summary {
        println!(
            "{} {}: mean Q3 {:.4} (sd {:.4}, {} folds)",
            s.method, s.direction, s.mean, s.sd, s.n_folds
        );
    }
    for f in &outcome.report.failures {
        eprintln!("cell {} {} fold {} failed: {}", f.method, f.direction, f.fold, f.error);
    }
    eprintln!("reports written to {}", outcome.output_dir.display());
    Ok(outcome.succeeded())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    if cli.dump_encoding {
        print!("{}", encoding_table());
        return Ok(true);
    }
    let Some(command) = cli.command else {
        bail!("no command given; see --help");
    };
    match &command {
        Command::Corpus(CorpusCommand::Summary { input }) => corpus_summary(input)?,
        Command::EvalCv(a) => eval_cv(a)?,
        Command::AnnTrain(a) => ann_train(a, cli.seed)?,
        Command::AnnEval(a) => ann_eval(a, cli.seed)?,
        Command::ProfileTrain(a) => profile_train(a, cli.seed)?,
        Command::ProfileScore(a) => profile_score(a)?,
        Command::Run(a) => return run(a, cli.seed),
    }
    Ok(true)
}

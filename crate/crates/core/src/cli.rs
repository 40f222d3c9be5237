//! Command-line interface: `diarize`, `evaluate`, `synth` and `sweep`.
//!
//! Exit codes: 0 success, 1 degenerate input, 2 usage or parse error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aggregation::{SpeechRegion, WindowEmbedding, DEFAULT_MAX_SEGMENT_LEN};
use crate::clustering::{KMeansParams, SpectralParams};
use crate::error::Error;
use crate::io::{
    parse_rttm, parse_uem, read_embeddings_csv, read_regions_csv, write_embeddings_csv,
    write_pgm_heatmap, write_regions_csv, write_rttm,
};
use crate::metrics::{der_corpus, DerReport, EvalOptions, DEFAULT_COLLAR};
use crate::pipeline::{diarize, Algorithm, DiarizeConfig, DEFAULT_ONLINE_THRESHOLD};
use crate::synth::{generate, ScenarioKind, SynthScenario};
use crate::types::{Annotation, TimeInterval};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEGENERATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "diarkit",
    version,
    about = "Speaker diarization from window embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster window embeddings of one recording into an RTTM hypothesis.
    Diarize(DiarizeArgs),
    /// Score hypothesis RTTM against reference RTTM.
    Evaluate(EvaluateArgs),
    /// Write a synthetic recording: embeddings, reference and speech regions.
    Synth(SynthArgs),
    /// Diarize and score a corpus over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Spectral,
    Kmeans,
    Naive,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Spectral => Algorithm::Spectral,
            AlgorithmArg::Kmeans => Algorithm::KMeans,
            AlgorithmArg::Naive => Algorithm::Naive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Separated,
    Imbalanced,
    Hierarchical,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Separated => ScenarioKind::Separated,
            ScenarioArg::Imbalanced => ScenarioKind::Imbalanced,
            ScenarioArg::Hierarchical => ScenarioKind::Hierarchical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Sigma,
    PPercentile,
    Threshold,
}

/// Clustering flags shared by `diarize` and `sweep`.
#[derive(Debug, Clone, Args)]
pub struct ClusterFlags {
    #[arg(long, default_value_t = DEFAULT_MAX_SEGMENT_LEN)]
    pub max_segment_len: f64,
    #[arg(long, default_value_t = SpectralParams::default().sigma)]
    pub sigma: f64,
    #[arg(long, default_value_t = SpectralParams::default().p_percentile)]
    pub p_percentile: f64,
    #[arg(long, default_value_t = SpectralParams::default().soft_multiplier)]
    pub soft_multiplier: f64,
    /// Similarity threshold of the naive online clusterer.
    #[arg(long, default_value_t = DEFAULT_ONLINE_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = SpectralParams::default().min_clusters)]
    pub min_speakers: usize,
    #[arg(long, default_value_t = SpectralParams::default().max_clusters)]
    pub max_speakers: usize,
    /// Fix the number of speakers (spectral and kmeans).
    #[arg(long)]
    pub num_speakers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DiarizeArgs {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub regions: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Spectral)]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub cluster: ClusterFlags,
    #[arg(long)]
    pub out: PathBuf,
    /// Write the raw affinity and the five refinement stages as PGM images
    /// named `<PREFIX>_<i>_<stage>.pgm` (spectral only).
    #[arg(long, value_name = "PREFIX")]
    pub dump_stages: Option<String>,
    /// Recording id written to the RTTM; defaults to the embeddings file stem.
    #[arg(long)]
    pub recording_id: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalFlags {
    #[arg(long, default_value_t = DEFAULT_COLLAR)]
    pub collar: f64,
    #[arg(long)]
    pub uem: Option<PathBuf>,
    /// Score overlapped reference speech too.
    #[arg(long)]
    pub no_overlap_exclusion: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub hypothesis: PathBuf,
    #[command(flatten)]
    pub eval: EvalFlags,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 2)]
    pub speakers: usize,
    #[arg(long, default_value_t = 120.0)]
    pub duration: f64,
    #[arg(long, value_enum, default_value_t = ScenarioArg::Separated)]
    pub scenario: ScenarioArg,
    #[arg(long, default_value_t = 5.0)]
    pub noise_deg: f64,
    #[arg(long, default_value_t = 16)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3.0)]
    pub turn_mean: f64,
    #[arg(long, default_value_t = 0.8)]
    pub imbalance_ratio: f64,
    #[arg(long, default_value_t = 70.0)]
    pub group_angle_deg: f64,
    #[arg(long, default_value_t = 25.0)]
    pub speaker_angle_deg: f64,
    #[arg(long, default_value = "synth")]
    pub recording_id: String,
    #[arg(long)]
    pub out_embeddings: PathBuf,
    #[arg(long)]
    pub out_reference: PathBuf,
    #[arg(long)]
    pub out_regions: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Lines `<recording-id> <embeddings.csv> [<regions.csv>]`; relative
    /// paths resolve against the list file's directory.
    #[arg(long)]
    pub embeddings_list: PathBuf,
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// `start:stop:step`, inclusive of `stop`.
    #[arg(long)]
    pub grid: String,
    /// Defaults to naive for `--param threshold`, spectral otherwise.
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    #[command(flatten)]
    pub cluster: ClusterFlags,
    #[command(flatten)]
    pub eval: EvalFlags,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Parse and I/O failures are usage errors; everything raised while
/// processing valid files is degenerate input.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
            _ => EXIT_DEGENERATE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;
type UemMap = BTreeMap<String, Vec<TimeInterval>>;

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

fn check(ok: bool, message: impl FnOnce() -> String) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::usage(message()))
    }
}

impl ClusterFlags {
    fn config(&self, algorithm: Algorithm) -> CliResult<DiarizeConfig> {
        check(
            self.max_segment_len > 0.0 && self.max_segment_len.is_finite(),
            || {
                format!(
                    "--max-segment-len must be > 0, got {}",
                    self.max_segment_len
                )
            },
        )?;
        check(self.sigma >= 0.0 && self.sigma.is_finite(), || {
            format!("--sigma must be >= 0, got {}", self.sigma)
        })?;
        check(self.p_percentile > 0.0 && self.p_percentile < 100.0, || {
            format!(
                "--p-percentile must be in (0, 100), got {}",
                self.p_percentile
            )
        })?;
        check(
            self.soft_multiplier >= 0.0 && self.soft_multiplier <= 1.0,
            || {
                format!(
                    "--soft-multiplier must be in [0, 1], got {}",
                    self.soft_multiplier
                )
            },
        )?;
        check(self.threshold > -1.0 && self.threshold < 1.0, || {
            format!("--threshold must be in (-1, 1), got {}", self.threshold)
        })?;
        check(self.min_speakers >= 1, || {
            "--min-speakers must be >= 1".into()
        })?;
        check(self.min_speakers <= self.max_speakers, || {
            format!(
                "--min-speakers {} exceeds --max-speakers {}",
                self.min_speakers, self.max_speakers
            )
        })?;
        check(self.num_speakers != Some(0), || {
            "--num-speakers must be >= 1".into()
        })?;
        Ok(DiarizeConfig {
            algorithm,
            max_segment_len: self.max_segment_len,
            spectral: SpectralParams {
                sigma: self.sigma,
                p_percentile: self.p_percentile,
                soft_multiplier: self.soft_multiplier,
                min_clusters: self.min_speakers,
                max_clusters: self.max_speakers,
                seed: self.seed,
                ..SpectralParams::default()
            },
            kmeans: KMeansParams {
                seed: self.seed,
                ..KMeansParams::default()
            },
            online_threshold: self.threshold,
            num_speakers: self.num_speakers,
            trace_stages: false,
        })
    }
}

impl EvalFlags {
    fn options(&self) -> CliResult<(EvalOptions, Option<UemMap>)> {
        check(self.collar >= 0.0 && self.collar.is_finite(), || {
            format!("--collar must be >= 0, got {}", self.collar)
        })?;
        let uem = match &self.uem {
            Some(p) => Some(parse_uem(&read_text(p)?).map_err(|e| in_file(p, e))?),
            None => None,
        };
        let opts = EvalOptions {
            collar: self.collar,
            exclude_overlap: !self.no_overlap_exclusion,
            uem: None,
        };
        Ok((opts, uem))
    }
}

fn load_windows(path: &Path) -> CliResult<Vec<WindowEmbedding>> {
    read_embeddings_csv(&read_text(path)?).map_err(|e| in_file(path, e))
}

fn load_regions(path: &Path) -> CliResult<Vec<SpeechRegion>> {
    read_regions_csv(&read_text(path)?).map_err(|e| in_file(path, e))
}

fn load_rttm(path: &Path) -> CliResult<Vec<Annotation>> {
    parse_rttm(&read_text(path)?).map_err(|e| in_file(path, e))
}

fn cmd_diarize(args: &DiarizeArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut config = args.cluster.config(args.algorithm.into())?;
    check(
        args.dump_stages.is_none() || config.algorithm == Algorithm::Spectral,
        || "--dump-stages requires --algorithm spectral".into(),
    )?;
    config.trace_stages = args.dump_stages.is_some();
    let id = match &args.recording_id {
        Some(id) => id.clone(),
        None => args
            .embeddings
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "rec".into()),
    };
    let windows = load_windows(&args.embeddings)?;
    let regions = args.regions.as_deref().map(load_regions).transpose()?;
    let d = diarize(&id, &windows, regions.as_deref(), &config)?;
    write_file(&args.out, write_rttm(&d.annotation).as_bytes())?;
    if let (Some(prefix), Some(stages)) = (&args.dump_stages, &d.stages) {
        for (i, (name, m)) in stages.iter().enumerate() {
            let path = PathBuf::from(format!("{prefix}_{i}_{name}.pgm"));
            write_pgm_heatmap(m, &path).map_err(|e| in_file(&path, e))?;
        }
    }
    let _ = writeln!(
        out,
        "{id}: {} segments, {} speakers",
        d.segments.len(),
        d.clustering.k()
    );
    Ok(())
}

fn report_row(name: &str, r: &DerReport) -> String {
    format!(
        "{name:<20} {:>10.3} {:>9.3} {:>9.3} {:>9.3} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
        r.ref_speech_seconds,
        r.fa_seconds,
        r.miss_seconds,
        r.confusion_seconds,
        r.fa,
        r.miss,
        r.confusion,
        r.total
    )
}

fn format_reports(reports: &BTreeMap<String, DerReport>) -> String {
    let corpus = DerReport::pooled(reports.values());
    let mut s = format!(
        "{:<20} {:>10} {:>9} {:>9} {:>9} {:>8} {:>8} {:>8} {:>8}\n",
        "recording", "ref_s", "fa_s", "miss_s", "conf_s", "fa%", "miss%", "conf%", "der%"
    );
    for (id, r) in reports {
        s.push_str(&report_row(id, r));
        s.push('\n');
    }
    s.push_str(&report_row("CORPUS", &corpus));
    s.push_str("\n\n");
    for (id, r) in reports {
        let _ = writeln!(s, "# {id}");
        s.push_str(&r.to_key_values());
    }
    s.push_str("# corpus\n");
    s.push_str(&corpus.to_key_values());
    s
}

fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let (opts, uem) = args.eval.options()?;
    let refs = load_rttm(&args.reference)?;
    let hyps = load_rttm(&args.hypothesis)?;
    check(!refs.is_empty(), || {
        format!("{}: no SPEAKER lines", args.reference.display())
    })?;
    let (reports, missing) = der_corpus(&refs, &hyps, &opts, uem.as_ref())?;
    for id in &missing {
        let _ = writeln!(
            err,
            "warning: no hypothesis for recording {id}; scored as all miss"
        );
    }
    for h in &hyps {
        if !reports.contains_key(&h.recording_id) {
            let _ = writeln!(
                err,
                "warning: hypothesis recording {} has no reference; ignored",
                h.recording_id
            );
        }
    }
    let _ = out.write_all(format_reports(&reports).as_bytes());
    Ok(())
}

fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> CliResult<()> {
    let scenario = SynthScenario {
        recording_id: args.recording_id.clone(),
        n_speakers: args.speakers,
        duration: args.duration,
        dim: args.dim,
        kind: args.scenario.into(),
        within_noise_deg: args.noise_deg,
        turn_mean: args.turn_mean,
        imbalance_ratio: args.imbalance_ratio,
        group_angle_deg: args.group_angle_deg,
        speaker_angle_deg: args.speaker_angle_deg,
        seed: args.seed,
    };
    let s = generate(&scenario).map_err(|e| CliError::usage(e.to_string()))?;
    write_file(
        &args.out_embeddings,
        write_embeddings_csv(&s.windows)?.as_bytes(),
    )?;
    write_file(&args.out_reference, write_rttm(&s.reference).as_bytes())?;
    write_file(&args.out_regions, write_regions_csv(&s.regions).as_bytes())?;
    let _ = writeln!(
        out,
        "{}: {} windows, {} turns, {} speakers",
        scenario.recording_id,
        s.windows.len(),
        s.regions.len(),
        s.reference.speakers().len()
    );
    Ok(())
}

/// Values `start + i·step` up to `stop` inclusive (with a relative slack of
/// 1e-9 steps), rounded to 9 decimals.
pub fn parse_grid(grid: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = grid.split(':').collect();
    let bad = || CliError::usage(format!("--grid must be start:stop:step, got {grid:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    check(nums.iter().all(|v| v.is_finite()), || {
        format!("--grid values must be finite: {grid:?}")
    })?;
    check(step > 0.0, || format!("--grid step must be > 0: {grid:?}"))?;
    check(start <= stop, || {
        format!("--grid start exceeds stop: {grid:?}")
    })?;
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    check(count <= 10_000, || {
        format!("--grid has {count} points; at most 10000")
    })?;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

struct ListEntry {
    id: String,
    embeddings: PathBuf,
    regions: Option<PathBuf>,
}

fn parse_list(path: &Path) -> CliResult<Vec<ListEntry>> {
    let text = read_text(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut entries: Vec<ListEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if !(2..=3).contains(&f.len()) {
            return Err(in_file(
                path,
                Error::parse(
                    i + 1,
                    "expected <recording-id> <embeddings.csv> [<regions.csv>]",
                ),
            ));
        }
        if entries.iter().any(|e| e.id == f[0]) {
            return Err(in_file(
                path,
                Error::parse(i + 1, format!("duplicate recording {}", f[0])),
            ));
        }
        entries.push(ListEntry {
            id: f[0].to_string(),
            embeddings: base.join(f[1]),
            regions: f.get(2).map(|r| base.join(r)),
        });
    }
    check(!entries.is_empty(), || {
        format!("{}: no recordings listed", path.display())
    })?;
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(entries)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let algorithm: Algorithm = match (args.algorithm, args.param) {
        (Some(a), _) => a.into(),
        (None, SweepParam::Threshold) => Algorithm::Naive,
        (None, _) => Algorithm::Spectral,
    };
    match (args.param, algorithm) {
        (SweepParam::Threshold, Algorithm::Naive) => {}
        (SweepParam::Threshold, _) => {
            return Err(CliError::usage("--param threshold needs --algorithm naive"))
        }
        (_, Algorithm::Spectral) => {}
        (_, _) => {
            return Err(CliError::usage(
                "--param sigma/p-percentile needs --algorithm spectral",
            ))
        }
    }
    let base = args.cluster.config(algorithm)?;
    let grid = parse_grid(&args.grid)?;
    let configs: Vec<DiarizeConfig> = grid
        .iter()
        .map(|&v| {
            let mut c = base.clone();
            match args.param {
                SweepParam::Sigma => {
                    check(v >= 0.0, || format!("sigma {v} < 0"))?;
                    c.spectral.sigma = v;
                }
                SweepParam::PPercentile => {
                    check(v > 0.0 && v < 100.0, || {
                        format!("p-percentile {v} outside (0, 100)")
                    })?;
                    c.spectral.p_percentile = v;
                }
                SweepParam::Threshold => {
                    check(v > -1.0 && v < 1.0, || {
                        format!("threshold {v} outside (-1, 1)")
                    })?;
                    c.online_threshold = v;
                }
            }
            Ok(c)
        })
        .collect::<CliResult<_>>()?;
    let (opts, uem) = args.eval.options()?;
    let entries = parse_list(&args.embeddings_list)?;
    let refs = load_rttm(&args.reference)?;
    let inputs: Vec<(String, Vec<WindowEmbedding>, Option<Vec<SpeechRegion>>)> = entries
        .iter()
        .map(|e| {
            Ok((
                e.id.clone(),
                load_windows(&e.embeddings)?,
                e.regions.as_deref().map(load_regions).transpose()?,
            ))
        })
        .collect::<CliResult<_>>()?;
    let scored: Vec<Annotation> = refs
        .into_iter()
        .filter(|r| inputs.iter().any(|(id, _, _)| id == &r.recording_id))
        .collect();
    for (id, _, _) in &inputs {
        if !scored.iter().any(|r| &r.recording_id == id) {
            let _ = writeln!(err, "warning: recording {id} has no reference; not scored");
        }
    }
    check(!scored.is_empty(), || {
        "no listed recording appears in the reference".into()
    })?;

    let mut rows = Vec::with_capacity(configs.len());
    for config in &configs {
        let hyps: Vec<Annotation> = inputs
            .iter()
            .map(|(id, w, r)| diarize(id, w, r.as_deref(), config).map(|d| d.annotation))
            .collect::<Result<_, _>>()?;
        let (reports, _) = der_corpus(&scored, &hyps, &opts, uem.as_ref())?;
        rows.push(DerReport::pooled(reports.values()));
    }
    let best = rows
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.total < rows[b].total { i } else { b });
    let name = match args.param {
        SweepParam::Sigma => "sigma",
        SweepParam::PPercentile => "p-percentile",
        SweepParam::Threshold => "threshold",
    };
    let mut s = format!(
        "{name:>12} {:>8} {:>8} {:>8} {:>8}  best\n",
        "der%", "fa%", "miss%", "conf%"
    );
    for (i, (v, r)) in grid.iter().zip(&rows).enumerate() {
        let mark = if i == best { "*" } else { "" };
        let _ = writeln!(
            s,
            "{v:>12} {:>8.4} {:>8.4} {:>8.4} {:>8.4}  {mark}",
            r.total, r.fa, r.miss, r.confusion
        );
    }
    let _ = writeln!(
        s,
        "best_{}={} der={:.4}",
        name.replace('-', "_"),
        grid[best],
        rows[best].total
    );
    let _ = out.write_all(s.as_bytes());
    Ok(())
}

/// Runs the parsed command, writing reports to `out` and diagnostics to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Diarize(a) => cmd_diarize(a, out),
        Command::Evaluate(a) => cmd_evaluate(a, out, err),
        Command::Synth(a) => cmd_synth(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

/// [`run_with`] on the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

//! Argument handling and dispatch for the `fastleja` binary.
//!
//! [`run`] returns the process exit status: 0 on success, 1 when a
//! verification found a violated inequality, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fastleja::bounds::run_trials;
use fastleja::interp::error_study;
use fastleja::potential::fig3_data;
use fastleja::report::{error_table, fig3_tables, growth_table, lebesgue_table, points_table, star_table, trial_table};
use fastleja::star::dyadic_sequence;
use fastleja::{
    generate, growth_report, lebesgue_constant, parse_domain, sorted_prefix, star_metrics, true_leja, DomainSpec,
    FnId, Format, NodeSource, Report, DEFAULT_S1,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const LEBESGUE_GRID_MULTIPLIER: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "fastleja", version, about = "Fast Leja points and their diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Domain {
    /// `a,b`, `a,b;c,d;...` or `curve:<id>`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    domain: String,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum SequenceArg {
    FastLeja,
    TrueLeja,
    Dyadic,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum VerifyTarget {
    Lemma2,
    Prop3,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fast Leja points in insertion order.
    Gen {
        #[command(flatten)]
        domain: Domain,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_S1)]
        s1: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Half-gap to harmonic-distance ratios of sorted prefixes.
    Star {
        #[command(flatten)]
        domain: Domain,
        #[arg(long, default_value = "16,32,64,128,256,512,1024")]
        stages: String,
        #[arg(long, default_value_t = DEFAULT_S1)]
        s1: f64,
        /// Point sequence to analyse.
        #[arg(long, value_enum, default_value_t = SequenceArg::FastLeja)]
        source: SequenceArg,
        #[command(flatten)]
        out: Output,
    },
    /// Vandermonde growth and sup-norm ratios along the sequence.
    Growth {
        #[command(flatten)]
        domain: Domain,
        #[arg(long, default_value = "2,4,8,16,32,64,128,256,512,1024")]
        stages: String,
        #[arg(long, default_value_t = DEFAULT_S1)]
        s1: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Lebesgue constants of node sets.
    Lebesgue {
        #[command(flatten)]
        domain: Domain,
        #[arg(long, default_value = "4,8,16,32,64")]
        stages: String,
        /// fast-leja, true-leja, chebyshev or equispaced.
        #[arg(long, default_value = "fast-leja")]
        nodes: String,
        #[command(flatten)]
        out: Output,
    },
    /// Sup-norm interpolation errors.
    Interp {
        #[command(flatten)]
        domain: Domain,
        #[arg(long, default_value = "5,10,15,20,25,30")]
        stages: String,
        /// exp, runge25, pole2, abs-half or x^k.
        #[arg(long, default_value = "pole2")]
        function: String,
        /// fast-leja, true-leja, chebyshev or equispaced.
        #[arg(long, default_value = "fast-leja")]
        nodes: String,
        #[command(flatten)]
        out: Output,
    },
    /// Randomized checks of the midpoint sup-norm inequalities.
    Verify {
        #[arg(value_enum)]
        which: VerifyTarget,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Graph of p_13 and doubled candidate values on [0, 1].
    Fig3 {
        #[command(flatten)]
        out: Output,
    },
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn parse_stages(text: &str) -> Result<Vec<usize>, Usage> {
    let stages = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Usage(format!("invalid stage `{}` in --stages", s.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    if stages.is_empty() || !stages.windows(2).all(|w| w[0] < w[1]) {
        return Err(Usage("--stages must be a strictly increasing comma list".into()));
    }
    Ok(stages)
}

fn check_s1(s1: f64) -> Result<(), Usage> {
    if s1 > 0.0 && s1 < 1.0 {
        Ok(())
    } else {
        Err(Usage(format!("--s1 {s1} must lie strictly inside (0, 1)")))
    }
}

fn configure_threads() -> Result<(), Usage> {
    let Ok(raw) = std::env::var("LEJA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Usage(format!("LEJA_THREADS must be a non-negative integer, got `{raw}`")))?;
    // a pool built by an earlier call in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn format_of(out: &Output) -> Format {
    match out.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn stages_meta(stages: &[usize]) -> String {
    stages.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn real_domain(text: &str) -> Result<DomainSpec, Usage> {
    let d = parse_domain(text)?;
    if !d.is_real() {
        return Err(Usage("this command needs a real domain (interval or union)".into()));
    }
    Ok(d)
}

fn node_sets(src: NodeSource, domain: &DomainSpec, stages: &[usize]) -> Result<Vec<Vec<f64>>, Usage> {
    let last = *stages.last().expect("stages are nonempty");
    if src == NodeSource::FastLeja {
        let seq = generate(domain, last, DEFAULT_S1)?;
        return Ok(stages.iter().map(|&n| seq[..n].to_vec()).collect());
    }
    stages.iter().map(|&n| Ok(src.nodes(domain, n)?)).collect()
}

/// Builds the report for a parsed command; the flag says whether a
/// verification failed.
fn execute(cmd: &Command) -> Result<(Report, Format, Option<PathBuf>, bool), Usage> {
    let done = |r: Report, out: &Output| Ok((r, format_of(out), out.output.clone(), false));
    match cmd {
        Command::Gen { domain, n, s1, out } => {
            check_s1(*s1)?;
            let d = parse_domain(&domain.domain)?;
            let seq = generate(&d, *n, *s1)?;
            let r = Report::new("gen").meta("domain", d.to_string()).meta("s1", *s1).meta("n", *n);
            done(r.table(points_table(&d, &seq)), out)
        }
        Command::Star { domain, stages, s1, source, out } => {
            check_s1(*s1)?;
            let stages = parse_stages(stages)?;
            let d = real_domain(&domain.domain)?;
            let last = *stages.last().expect("stages are nonempty");
            let seq = match source {
                SequenceArg::FastLeja => generate(&d, last, *s1)?,
                SequenceArg::TrueLeja => true_leja(&d, last, (20 * last).max(2000))?,
                SequenceArg::Dyadic => dyadic_sequence(last),
            };
            let reports = stages
                .iter()
                .map(|&n| Ok(star_metrics(&sorted_prefix(&seq, n)?)?))
                .collect::<Result<Vec<_>, Usage>>()?;
            let r = Report::new("star")
                .meta("domain", d.to_string())
                .meta("source", format!("{source:?}").to_lowercase())
                .meta("stages", stages_meta(&stages));
            done(r.table(star_table(&reports)), out)
        }
        Command::Growth { domain, stages, s1, out } => {
            check_s1(*s1)?;
            let stages = parse_stages(stages)?;
            let d = parse_domain(&domain.domain)?;
            let seq = generate(&d, stages[stages.len() - 1] + 1, *s1)?;
            let rows = growth_report(&seq, &d, &stages)?;
            let r = Report::new("growth")
                .meta("domain", d.to_string())
                .meta("s1", *s1)
                .meta("stages", stages_meta(&stages));
            done(r.table(growth_table(&rows)), out)
        }
        Command::Lebesgue { domain, stages, nodes, out } => {
            let stages = parse_stages(stages)?;
            let src: NodeSource = nodes.parse()?;
            let d = real_domain(&domain.domain)?;
            let rows = node_sets(src, &d, &stages)?
                .iter()
                .map(|pts| Ok(lebesgue_constant(pts, &d, LEBESGUE_GRID_MULTIPLIER)?))
                .collect::<Result<Vec<_>, Usage>>()?;
            let r = Report::new("lebesgue")
                .meta("domain", d.to_string())
                .meta("nodes", src.id())
                .meta("stages", stages_meta(&stages));
            done(r.table(lebesgue_table(&rows)), out)
        }
        Command::Interp { domain, stages, function, nodes, out } => {
            let stages = parse_stages(stages)?;
            let f: FnId = function.parse()?;
            let src: NodeSource = nodes.parse()?;
            let d = real_domain(&domain.domain)?;
            let rows = error_study(f, src, &stages, &d)?;
            let r = Report::new("interp")
                .meta("domain", d.to_string())
                .meta("function", f.to_string())
                .meta("nodes", src.id())
                .meta("stages", stages_meta(&stages));
            done(r.table(error_table(&rows)), out)
        }
        Command::Verify { which, trials, seed, out } => {
            if *trials == 0 {
                return Err(Usage("--trials must be at least 1".into()));
            }
            let rows = run_trials(*seed, *trials);
            let failed = rows.iter().any(|t| {
                let lemma = t.lemma2_ok;
                let prop = t.prop3_ok && t.prop3_log_margin > 0.0;
                match which {
                    VerifyTarget::Lemma2 => !lemma,
                    VerifyTarget::Prop3 => !prop,
                    VerifyTarget::All => !(lemma && prop),
                }
            });
            let r = Report::new("verify")
                .meta("target", format!("{which:?}").to_lowercase())
                .meta("seed", *seed)
                .meta("trials", *trials)
                .meta("ok", !failed)
                .table(trial_table(&rows));
            Ok((r, format_of(out), out.output.clone(), failed))
        }
        Command::Fig3 { out } => {
            let data = fig3_data();
            let [graph, mids] = fig3_tables(&data);
            let r = Report::new("fig3").meta("domain", "0,1").meta("n", data.zeros.len()).meta("s1", DEFAULT_S1);
            done(r.table(graph).table(mids), out)
        }
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim()
}

/// Parses `args` (program name first), runs the command and writes the report
/// to `--output` or `stdout`. Diagnostics go to `stderr` as a single line.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(stderr, "{}", first_line(&e.to_string()));
            return EXIT_USAGE;
        }
    };
    let result = configure_threads().and_then(|()| execute(&cli.command));
    let (report, format, path, failed) = match result {
        Ok(v) => v,
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {}", first_line(&msg));
            return EXIT_USAGE;
        }
    };
    let text = report.render(format);
    let written = match &path {
        Some(p) => std::fs::write(p, text.as_bytes()).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    if failed {
        let _ = writeln!(stderr, "verification failed");
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

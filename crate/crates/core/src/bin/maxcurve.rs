use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use maxcurve::gf::{install_global_config, FieldConfig};
use maxcurve::verifier::{self, CheckReport, Params, Summary, Verdict};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Runs the verification checks and prints one report per line.
#[derive(Parser, Debug)]
#[command(name = "maxcurve", version)]
#[command(group(ArgGroup::new("mode").required(true).args(["check", "all", "list"])))]
struct Cli {
    /// Run a single check by name.
    #[arg(long, value_name = "NAME")]
    check: Option<String>,

    /// Parameter for --check, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", requires = "check")]
    params: Vec<String>,

    /// Run every registered parameter set.
    #[arg(long)]
    all: bool,

    /// With --all, only checks whose name starts with PREFIX.
    #[arg(long, value_name = "PREFIX", requires = "all")]
    filter: Option<String>,

    /// List the registered checks and their parameters.
    #[arg(long)]
    list: bool,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// TOML file with field construction settings.
    #[arg(long, value_name = "PATH")]
    field_config: Option<PathBuf>,

    /// Also write the reports to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Include elapsed milliseconds in each report.
    #[arg(long)]
    timings: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("maxcurve: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn render_table(reports: &[CheckReport], summary: &Summary) -> String {
    let mut out = String::new();
    let rows: Vec<[String; 4]> = reports
        .iter()
        .map(|r| {
            let params = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Unsupported => "unsupported",
            };
            let detail = match r.verdict {
                Verdict::Fail => r.mismatches().join(","),
                Verdict::Unsupported => r.note.clone().unwrap_or_default(),
                Verdict::Pass => String::new(),
            };
            [r.name.clone(), params, verdict.into(), detail]
        })
        .collect();
    let header = ["check".to_string(), "params".into(), "verdict".into(), "detail".into()];
    let width = |i: usize| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0);
    let (w0, w1, w2) = (width(0), width(1), width(2));
    for r in std::iter::once(&header).chain(&rows) {
        out.push_str(format!("{:w0$}  {:w1$}  {:w2$}  {}", r[0], r[1], r[2], r[3]).trim_end());
        out.push('\n');
    }
    out.push_str(&format!(
        "{} checks: {} passed, {} failed, {} unsupported\n",
        summary.total, summary.passed, summary.failed, summary.unsupported
    ));
    out
}

fn render(reports: &[CheckReport], summary: &Summary, format: Format) -> String {
    match format {
        Format::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
        Format::Table => render_table(reports, summary),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(path) = &cli.field_config {
        let config = match FieldConfig::from_path(path) {
            Ok(c) => c,
            Err(e) => return usage(e),
        };
        if let Err(e) = install_global_config(config) {
            return usage(e);
        }
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return usage("--threads must be positive");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return usage(e);
        }
    }

    if cli.list {
        for c in verifier::REGISTRY {
            let params: Vec<String> = c.params.iter().map(|p| format!("{}={} ({})", p.key, p.default, p.help)).collect();
            println!("{}\t{}\t{}", c.name, params.join(" "), c.citation);
        }
        return ExitCode::SUCCESS;
    }

    let (reports, explicit) = if let Some(name) = &cli.check {
        let mut params = Params::new();
        for raw in &cli.params {
            match verifier::parse_param(raw) {
                Ok((k, v)) => {
                    params.insert(k, v);
                }
                Err(e) => return usage(e),
            }
        }
        match verifier::run_check_with(name, &params, cli.timings) {
            Ok(r) => (vec![r], true),
            Err(e) => return usage(e),
        }
    } else {
        (verifier::run_all(cli.filter.as_deref(), cli.timings).0, false)
    };
    let summary = Summary::of(&reports);
    let text = render(&reports, &summary, cli.format);

    if let Some(path) = &cli.out {
        if let Err(e) = File::create(path).and_then(|mut f| f.write_all(text.as_bytes())) {
            eprintln!("maxcurve: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
    if cli.format == Format::Json {
        eprintln!(
            "{} checks: {} passed, {} failed, {} unsupported",
            summary.total, summary.passed, summary.failed, summary.unsupported
        );
    }

    if summary.failed > 0 {
        ExitCode::from(EXIT_FAIL)
    } else if explicit && summary.unsupported > 0 {
        ExitCode::from(EXIT_UNSUPPORTED)
    } else if summary.unsupported > 0 {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

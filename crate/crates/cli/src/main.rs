use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pse_core::eval::{evaluate, parse_ground_truth};
use pse_core::output::{dump_tables, OutputDocument};
use pse_core::part::{spell_part, Algorithm, SpellerConfig};
use pse_core::tonality::KeyRange;
use pse_core::weight::WeightOrder;
use pse_core::Part;

#[derive(Parser)]
#[command(name = "pse", version, about = "Pitch spelling and key estimation for MIDI notes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spell a note list (.json) or a MIDI file.
    Spell {
        /// Input note list or MIDI file.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: SpellOpts,
    },
    /// Spell and compare against a reference spelling.
    Eval {
        /// Reference note list with expected spellings.
        #[arg(long)]
        ground_truth: PathBuf,
        /// Notes to spell; defaults to the reference notes.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        opts: SpellOpts,
    },
}

#[derive(Args)]
struct SpellOpts {
    #[arg(long, default_value = "pse")]
    algo: Algorithm,
    #[arg(long, default_value = "sum")]
    weights: WeightOrder,
    /// Key signature range, e.g. -6..6.
    #[arg(long, default_value = "-7..7", allow_hyphen_values = true)]
    ks_range: KeyRange,
    /// Relative slack for global key candidates.
    #[arg(long, default_value_t = 0.2)]
    margin: f64,
    /// Print the row costs of both tables to stderr.
    #[arg(long)]
    dump_tables: bool,
    /// Write the document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SpellOpts {
    fn config(&self) -> Result<SpellerConfig, String> {
        if !self.margin.is_finite() || self.margin < 0.0 {
            return Err(format!("margin must be a non-negative number, got {}", self.margin));
        }
        Ok(SpellerConfig {
            key_range: self.ks_range,
            margin: self.margin,
            order: self.weights,
            algorithm: self.algo,
        })
    }
}

fn read_part(path: &Path) -> Result<Part, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let fail = |e: pse_core::InputError| format!("{}: {e}", path.display());
    if bytes.starts_with(b"MThd") {
        let import = pse_core::smf::ingest_smf(&bytes).map_err(fail)?;
        for w in &import.warnings {
            eprintln!("warning: {w}");
        }
        Ok(import.part)
    } else {
        pse_core::input::parse_notelist(&bytes).map_err(fail)
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Spell { input, opts } => {
            let config = opts.config()?;
            let part = read_part(&input)?;
            let spelled = spell_part(&part, &config);
            if opts.dump_tables {
                eprint!("{}", dump_tables(&spelled));
            }
            emit(&OutputDocument::from_part(&spelled).to_json(), opts.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            ground_truth,
            input,
            opts,
        } => {
            let config = opts.config()?;
            let bytes = fs::read(&ground_truth).map_err(|e| format!("{}: {e}", ground_truth.display()))?;
            let truth = parse_ground_truth(&bytes).map_err(|e| format!("{}: {e}", ground_truth.display()))?;
            let part = match &input {
                Some(path) => read_part(path)?,
                None => truth.part(),
            };
            let spelled = spell_part(&part, &config);
            if opts.dump_tables {
                eprint!("{}", dump_tables(&spelled));
            }
            let report = evaluate(&truth, &spelled).map_err(|e| e.to_string())?;
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            emit(&text, opts.output.as_deref())?;
            eprintln!(
                "accuracy {}/{} ({:.2}%), key signature {}",
                report.correct_count,
                report.note_count,
                100.0 * report.spelling_accuracy,
                if report.ks_correct { "correct" } else { "wrong" }
            );
            Ok(if report.is_perfect() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use netranslit::entity_io::{EntityTag, ParseMode};
use netranslit::evaluator::{evaluate, Rounding};
use netranslit::kb::validate_kb;
use netranslit::pipeline::{prep_corpus, Pipeline, PipelineConfig, PipelineError};
use netranslit::syllabifier::{syllabify, SyllabificationRules};
use netranslit::translit::{
    read_corpus, save_model, train_with, GraphemeMap, Smoothing, TrainMode,
};

#[derive(Parser)]
#[command(
    name = "netranslit",
    version,
    about = "Named-entity transliteration and translation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a syllable-pair model from a syllabified parallel corpus.
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fail on the first misaligned pair instead of skipping it.
        #[arg(long)]
        strict: bool,
        /// `unit<TAB>grapheme` table for unseen syllables (default: Gurmukhi).
        #[arg(long)]
        fallback: Option<PathBuf>,
    },
    /// Syllabify the source side of a raw `name<TAB>target syllables` corpus.
    Prep {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, env = "NETRANSLIT_RULES")]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Where to write rejected lines (default: `<out>.rejects`).
        #[arg(long)]
        rejects: Option<PathBuf>,
    },
    /// Translate or transliterate the entities of a slash-tagged document.
    Run {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        kb: PathBuf,
        #[arg(long, env = "NETRANSLIT_RULES")]
        rules: Option<PathBuf>,
        /// Read the document from this file instead of stdin.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Score given to syllables rendered through the fallback table.
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long)]
        add_one: bool,
        /// Only tokens carrying their own tag belong to an entity.
        #[arg(long)]
        strict_tags: bool,
        /// Write `output/TAG` for each entity.
        #[arg(long)]
        keep_tags: bool,
        /// Write per-entity provenance records here instead of stderr.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Score system output against gold references.
    Eval {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        tags: Option<PathBuf>,
        #[arg(long, default_value = "half-up")]
        rounding: Rounding,
    },
    /// Knowledge-base utilities.
    Kb {
        #[command(subcommand)]
        command: KbCommand,
    },
    /// Print the syllables and V/C patterns of each word.
    Syllabify {
        words: Vec<String>,
        #[arg(long, env = "NETRANSLIT_RULES")]
        rules: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum KbCommand {
    /// Report entry count, duplicate keys, and format errors.
    Validate { file: PathBuf },
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn stdout_err(source: io::Error) -> PipelineError {
    PipelineError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn load_rules(path: Option<&Path>) -> Result<SyllabificationRules, PipelineError> {
    Ok(match path {
        Some(p) => SyllabificationRules::from_file(p)?,
        None => SyllabificationRules::default(),
    })
}

fn non_empty_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.lines().collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    lines
}

fn execute(command: Command) -> Result<u8, PipelineError> {
    match command {
        Command::Train {
            input,
            out,
            strict,
            fallback,
        } => {
            let pairs = read_corpus(&read(&input)?)?;
            let fallback = match fallback {
                Some(p) => GraphemeMap::parse(&read(&p)?)?,
                None => GraphemeMap::gurmukhi(),
            };
            let mode = if strict {
                TrainMode::Strict
            } else {
                TrainMode::Lenient
            };
            let (model, summary) = train_with(&pairs, mode, fallback)?;
            save_model(&model, &out)?;
            println!(
                "trained on {} pairs ({} skipped), {} source syllables",
                summary.pairs_used,
                summary.skipped.len(),
                model.sources().count()
            );
            Ok(0)
        }
        Command::Prep {
            input,
            rules,
            out,
            rejects,
        } => {
            let rules = load_rules(rules.as_deref())?;
            let rejects = rejects.unwrap_or_else(|| {
                let mut p = out.clone().into_os_string();
                p.push(".rejects");
                PathBuf::from(p)
            });
            let result = prep_corpus(&input, &rules, &out, &rejects)?;
            println!(
                "{} lines written, {} rejected ({})",
                result.lines.len(),
                result.rejects.len(),
                rejects.display()
            );
            Ok(0)
        }
        Command::Run {
            model,
            kb,
            rules,
            input,
            epsilon,
            add_one,
            strict_tags,
            keep_tags,
            provenance,
        } => {
            let mut config = PipelineConfig::new(model, kb);
            config.rules_path = rules;
            config.fallback_floor = epsilon;
            config.smoothing = if add_one {
                Smoothing::AddOne
            } else {
                Smoothing::None
            };
            config.parse_mode = if strict_tags {
                ParseMode::Strict
            } else {
                ParseMode::Grouped
            };
            let pipeline = Pipeline::from_config(&config)?.with_keep_tags(keep_tags);
            info!(
                "loaded {} model sources, {} knowledge-base entries",
                pipeline.model().sources().count(),
                pipeline.kb().len()
            );
            let document = match input {
                Some(p) => read(&p)?,
                None => {
                    let mut buf = String::new();
                    io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|source| PipelineError::Io {
                            path: "<stdin>".into(),
                            source,
                        })?;
                    buf
                }
            };
            let output = pipeline.run(&document)?;
            io::stdout()
                .write_all(output.text.as_bytes())
                .map_err(stdout_err)?;
            match provenance {
                Some(p) => write(&p, &output.provenance_report())?,
                None => eprint!("{}", output.provenance_report()),
            }
            Ok(0)
        }
        Command::Eval {
            system,
            gold,
            tags,
            rounding,
        } => {
            let system_text = read(&system)?;
            let gold_text = read(&gold)?;
            let tags = match tags {
                Some(p) => {
                    let text = read(&p)?;
                    let parsed = non_empty_lines(&text)
                        .into_iter()
                        .enumerate()
                        .map(|(i, l)| {
                            l.trim().parse::<EntityTag>().map_err(|e| {
                                PipelineError::Parse(netranslit::entity_io::EntityError::Parse {
                                    line: i + 1,
                                    column: 1,
                                    message: e.to_string(),
                                })
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(parsed)
                }
                None => None,
            };
            let report = evaluate(
                &non_empty_lines(&system_text),
                &non_empty_lines(&gold_text),
                tags.as_deref(),
            )?;
            print!("{}", report.to_table(rounding));
            println!();
            print!("{}", report.to_key_values(rounding));
            Ok(0)
        }
        Command::Kb {
            command: KbCommand::Validate { file },
        } => {
            let report = validate_kb(&file)?;
            println!("entries: {}", report.entries);
            println!("duplicates: {}", report.duplicates.len());
            for d in &report.duplicates {
                println!(
                    "  line {}: {:?} (first on line {})",
                    d.line, d.key, d.first_line
                );
            }
            println!("errors: {}", report.errors.len());
            for (line, msg) in &report.errors {
                println!("  line {line}: {msg}");
            }
            Ok(if report.is_valid() { 0 } else { 2 })
        }
        Command::Syllabify { words, rules } => {
            let rules = load_rules(rules.as_deref())?;
            let mut out = io::stdout().lock();
            for word in words {
                let w = syllabify(&word, &rules).map_err(|e| PipelineError::Entity {
                    position: 0,
                    text: word.clone(),
                    source: Box::new(e),
                })?;
                writeln!(out, "{}\t{}\t{}", word, w, w.patterns().join(" ")).map_err(stdout_err)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line surface. Every subcommand writes its report to the given
//! writer and returns the process exit code.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use qfa_core::analysis::{
    cutpoint_member, gpfa_equivalent, random_automaton, EquivalenceError, EquivalenceMode,
    RandomSpec, RandomSpecError,
};
use qfa_core::convert::{kwqfa_to_nqfa, kwqfa_to_qfc, nqfa_to_gpfa, pfa_to_gpfa, qfc_to_gpfa};
use qfa_core::models::{CutpointError, InputError, ModelKind};
use qfa_core::sim::{self, gpfa_state};
use qfa_core::{Automaton, CutpointSpec, Gpfa};

use crate::document::{self, Document, DocumentError, Metadata};

#[derive(Debug, Parser)]
#[command(
    name = "qfa",
    version,
    about = "Simulate, convert and compare quantum and probabilistic finite automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the acceptance probability of a word.
    Run {
        model: PathBuf,
        /// Comma-separated symbols; "" is the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Also print the per-step table.
        #[arg(long)]
        trace: bool,
    },
    /// Convert a model and write the result.
    Convert {
        model: PathBuf,
        #[arg(long)]
        to: Target,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether two models compute the same function.
    /// Exit code 0 equivalent, 1 inequivalent, 2 error.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Exact rational arithmetic instead of floating point.
        #[arg(long)]
        exact: bool,
    },
    /// Cutpoint membership (value > λ). Exit code 0 member, 1 not.
    Member {
        model: PathBuf,
        #[arg(long)]
        cutpoint: f64,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Values on σ^k for k = 0..=max-len.
    Sweep {
        model: PathBuf,
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Write a seeded random model.
    Random {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        states: usize,
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        accepting: Option<usize>,
        #[arg(long)]
        rejecting: Option<usize>,
        /// Control-DFA size for qfc.
        #[arg(long)]
        control_states: Option<usize>,
    },
    /// List every violated invariant. Exit code 0 iff valid.
    Validate { model: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Gpfa,
    Nqfa,
    Qfc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Nqfa,
    Kwqfa,
    Qfc,
    Gpfa,
    Pfa,
}

impl From<Kind> for ModelKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Nqfa => ModelKind::Nqfa,
            Kind::Kwqfa => ModelKind::Kwqfa,
            Kind::Qfc => ModelKind::Qfc,
            Kind::Gpfa => ModelKind::Gpfa,
            Kind::Pfa => ModelKind::Pfa,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Document {
        path: PathBuf,
        source: DocumentError,
    },
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Cutpoint(#[from] CutpointError),
    #[error(transparent)]
    Random(#[from] RandomSpecError),
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
    #[error("no conversion from {from} to {to}")]
    NoConversion { from: ModelKind, to: &'static str },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<Document, CliError> {
    document::parse(&read_text(path)?).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn save(path: &Path, doc: &Document) -> Result<(), CliError> {
    fs::write(path, document::serialize(doc)).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// 17 significant digits, plain notation for ordinary magnitudes.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor();
    if !(-5.0..17.0).contains(&magnitude) {
        return format!("{x:.16e}");
    }
    let decimals = (16.0 - magnitude).max(0.0) as usize;
    format!("{x:.decimals$}")
}

/// GPFA computing the same function, when one of the converters applies.
fn as_gpfa(m: &Automaton) -> Gpfa {
    match m {
        Automaton::Nqfa(m) => nqfa_to_gpfa(m),
        Automaton::Kwqfa(m) => nqfa_to_gpfa(&kwqfa_to_nqfa(m)),
        Automaton::Qfc(m) => qfc_to_gpfa(m),
        Automaton::Gpfa(g) => g.clone(),
        Automaton::Pfa(p) => pfa_to_gpfa(p),
    }
}

fn convert(m: &Automaton, to: Target) -> Result<Automaton, CliError> {
    let converted: Automaton = match (m, to) {
        (_, Target::Gpfa) if !matches!(m, Automaton::Gpfa(_)) => as_gpfa(m).into(),
        (Automaton::Kwqfa(k), Target::Nqfa) => kwqfa_to_nqfa(k).into(),
        (Automaton::Kwqfa(k), Target::Qfc) => kwqfa_to_qfc(k).into(),
        _ => {
            return Err(CliError::NoConversion {
                from: m.kind(),
                to: match to {
                    Target::Gpfa => "gpfa",
                    Target::Nqfa => "nqfa",
                    Target::Qfc => "qfc",
                },
            })
        }
    };
    Ok(converted)
}

fn quoted_word(m: &Automaton, w: &qfa_core::Word) -> String {
    format!("\"{}\"", m.alphabet().format_word(w))
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Run { model, word, trace } => {
            let doc = load(&model)?;
            let m = &doc.automaton;
            let w = m.alphabet().parse_word(&word)?;
            writeln!(out, "{}", format_value(sim::value(m, &w)?))?;
            if trace {
                write_trace(m, &w, out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Convert {
            model,
            to,
            out: path,
        } => {
            let doc = load(&model)?;
            let converted = convert(&doc.automaton, to)?;
            let mut metadata = doc.metadata.clone();
            metadata.description = Some(format!(
                "converted from {} ({} states)",
                doc.automaton.kind(),
                doc.automaton.state_count()
            ));
            save(
                &path,
                &Document {
                    automaton: converted.clone(),
                    metadata,
                },
            )?;
            writeln!(
                out,
                "wrote {} with {} states to {}",
                converted.kind(),
                converted.state_count(),
                path.display()
            )?;
            Ok(EXIT_OK)
        }
        Command::Equiv {
            first,
            second,
            exact,
        } => {
            let a = load(&first)?.automaton;
            let b = load(&second)?.automaton;
            let mode = if exact {
                EquivalenceMode::Exact
            } else {
                EquivalenceMode::Numeric
            };
            let verdict = gpfa_equivalent(&as_gpfa(&a), &as_gpfa(&b), mode)?;
            let mode_name = if exact { "exact" } else { "numeric" };
            match &verdict.witness {
                None => {
                    writeln!(
                        out,
                        "equivalent (mode {mode_name}, rank {})",
                        verdict.rank()
                    )?;
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    writeln!(
                        out,
                        "not equivalent (mode {mode_name}, rank {})",
                        verdict.rank()
                    )?;
                    writeln!(out, "witness: {}", quoted_word(&a, w))?;
                    writeln!(out, "first: {}", format_value(sim::value(&a, w)?))?;
                    writeln!(out, "second: {}", format_value(sim::value(&b, w)?))?;
                    writeln!(
                        out,
                        "max observed gap: {}",
                        format_value(verdict.max_observed_gap)
                    )?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Member {
            model,
            cutpoint,
            word,
        } => {
            let m = load(&model)?.automaton;
            let c = CutpointSpec::new(cutpoint)?;
            let w = m.alphabet().parse_word(&word)?;
            let member = cutpoint_member(&as_gpfa(&m), &c, &w)?;
            writeln!(out, "{member}")?;
            Ok(if member { EXIT_OK } else { EXIT_NO })
        }
        Command::Sweep {
            model,
            symbol,
            max_len,
            csv,
        } => {
            let m = load(&model)?.automaton;
            let s = m
                .alphabet()
                .index_of(&symbol)
                .ok_or(InputError::UnknownSymbol(symbol))?;
            let rows = sim::sweep(&m, s, max_len)?;
            if csv {
                writeln!(out, "k,value")?;
                for (k, v) in rows {
                    writeln!(out, "{k},{}", format_value(v))?;
                }
            } else {
                writeln!(out, "{:>5}  value", "k")?;
                for (k, v) in rows {
                    writeln!(out, "{k:>5}  {}", format_value(v))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Random {
            kind,
            states,
            alphabet,
            seed,
            out: path,
            accepting,
            rejecting,
            control_states,
        } => {
            let spec = RandomSpec {
                seed,
                states,
                alphabet,
                accepting,
                rejecting,
                control_states,
            };
            let kind = ModelKind::from(kind);
            let automaton = random_automaton(kind, &spec)?;
            let doc = Document {
                automaton,
                metadata: Metadata {
                    name: Some(format!("random-{kind}-{states}-{alphabet}")),
                    description: None,
                    seed: Some(seed),
                },
            };
            save(&path, &doc)?;
            writeln!(
                out,
                "wrote {kind} with {states} states to {}",
                path.display()
            )?;
            Ok(EXIT_OK)
        }
        Command::Validate { model } => {
            let text = read_text(&model)?;
            match document::parse(&text) {
                Ok(doc) => {
                    writeln!(
                        out,
                        "valid {} with {} states",
                        doc.automaton.kind(),
                        doc.automaton.state_count()
                    )?;
                    Ok(EXIT_OK)
                }
                Err(DocumentError::Validation { kind, violations }) => {
                    writeln!(out, "invalid {kind}: {} violation(s)", violations.len())?;
                    for (path, message) in violations {
                        writeln!(out, "{path}: {message}")?;
                    }
                    Ok(EXIT_NO)
                }
                Err(e) => {
                    writeln!(out, "invalid document: {e}")?;
                    Ok(EXIT_NO)
                }
            }
        }
    }
}

fn write_trace(m: &Automaton, w: &qfa_core::Word, out: &mut dyn Write) -> Result<(), CliError> {
    let alphabet = m.alphabet();
    match sim::run(m, w)? {
        Some(r) => {
            writeln!(out, "step\tsymbol\taccept\treject\tsurviving")?;
            for (i, s) in r.trace.iter().enumerate() {
                writeln!(
                    out,
                    "{i}\t{}\t{}\t{}\t{}",
                    alphabet.tape_name(s.symbol),
                    format_value(s.cumulative_accept),
                    format_value(s.cumulative_reject),
                    format_value(s.surviving_trace)
                )?;
            }
        }
        None => {
            // Linear models: value of each prefix.
            let g = as_gpfa(m);
            let f = g.final_vector();
            let mut x = g.initial().to_vec();
            let prefix_value = |x: &[f64]| x.iter().zip(f).map(|(a, b)| a * b).sum::<f64>();
            writeln!(out, "step\tsymbol\tvalue")?;
            writeln!(out, "0\t-\t{}", format_value(prefix_value(&x)))?;
            for (i, &s) in w.symbols().iter().enumerate() {
                x = gpfa_state(&g, x, &qfa_core::Word::from_indices(vec![s]));
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    i + 1,
                    alphabet.symbol(s),
                    format_value(prefix_value(&x))
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_value(0.5), "0.50000000000000000");
        assert_eq!(format_value(1.0), "1.0000000000000000");
        assert_eq!(format_value(0.6875), "0.68750000000000000");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(2f64.powi(-70)), "8.4703294725430034e-22");
    }
}

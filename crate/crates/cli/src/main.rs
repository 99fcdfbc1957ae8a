//! Command-line front end: parsing, evaluation, transformations,
//! verification verdicts, and brute-force comparison over the documented
//! file formats.
//!
//! Exit codes: 0 for success and true verdicts, 1 for false verdicts
//! (with the counterexample printed), 2 for usage and format errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use weft_cli::formats::{
    parse_automaton, parse_model, write_dfa, write_dot, write_model, write_tuple, write_uhat,
    AutomatonFile, ModelFile,
};
use weft_core::automata::{
    is_counter_free_dfa, is_counter_free_nfa_support, is_determinizable_twins, Dfa, StateSet,
};
use weft_core::logic::{parse_formula, satisfies, Alphabet};
use weft_core::models::{
    verify_normalization, NormalizationReport, StateEncoder,
};
use weft_core::oracle::{languages_equal_upto, total_mass_upto};
use weft_core::semiring::SemiringValue;
use weft_core::transforms::{
    autoregressor_to_classifier, bigram_map, build_closure_dfa, classifier_to_autoregressor,
    next_sigma, noy_transform, prefix_transform, stutter_invariant, DEFAULT_STATE_BUDGET,
};
use weft_core::Formula;

#[derive(Parser)]
#[command(name = "weft", version, about = "Weighted language models over temporal logic, automata, and hard-attention transformers", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
    Dot,
}

#[derive(Args)]
struct FormulaArgs {
    /// Formula text, e.g. "H (a | Y b)".
    #[arg(long)]
    formula: String,
    /// Comma- or space-separated alphabet; inferred from the formula's
    /// symbols when omitted.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse a formula and print its canonical form.
    Parse(FormulaArgs),
    /// Evaluate `w ⊨ φ` (or at an explicit position). Exit 1 when false.
    Eval {
        #[command(flatten)]
        formula: FormulaArgs,
        /// Input string over the alphabet.
        #[arg(long)]
        input: String,
        /// Position to evaluate at; defaults to the last.
        #[arg(long)]
        position: Option<usize>,
    },
    /// Rewrite a formula so it holds of `w` iff the original holds of `wσ`.
    Next {
        #[command(flatten)]
        formula: FormulaArgs,
        /// The appended symbol.
        #[arg(long)]
        sigma: String,
    },
    /// Rewrite a formula to hold of exactly the extendable strings.
    Prefix {
        #[command(flatten)]
        formula: FormulaArgs,
        /// State budget for the subformula automaton.
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    /// Compile a formula to its subformula automaton.
    ToDfa {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Convert a Boolean tuple classifier into an autoregressor with the
    /// same language.
    Cls2ar {
        #[arg(long)]
        model: PathBuf,
        /// Output prefix; writes PREFIX.model and PREFIX.tuple.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convert a Boolean tuple autoregressor into a classifier with the
    /// same language; prints the classifier formula.
    Ar2cls {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rewrite a TL[H,Y] formula of Y-depth at most one into a Y-free
    /// formula over the symbol-pair alphabet.
    Noy(FormulaArgs),
    /// Print the bigram image of a string.
    Bigram {
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        input: String,
    },
    /// Weight assigned to one string by a model or weighted automaton.
    Weight {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Exact total weight of all strings up to a length bound.
    Mass {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Verify the suffix-normalization condition of an autoregressor.
    CheckNorm {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Counter-freeness of a machine (deterministic, or the Boolean
    /// support of a weighted one).
    CheckCf {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Twins test for weighted determinizability.
    CheckTwins {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Stutter invariance of the language of a machine with accept states.
    CheckStutter {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare two weighted languages exhaustively up to a length bound.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// List the built-in fixtures, or write them out as files.
    Fixtures {
        #[arg(long)]
        name: Option<String>,
        /// Directory to write fixture files into.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

const KEYWORDS: &[&str] = &["Y", "H", "S", "P", "true", "false", "bos", "eos"];

/// Alphabet from an explicit flag, or inferred from the identifiers
/// appearing in the given texts.
fn resolve_alphabet(explicit: &Option<String>, texts: &[&str]) -> Result<Alphabet> {
    if let Some(spec) = explicit {
        let symbols: Vec<String> = spec
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.to_string())
            .collect();
        return Alphabet::new(symbols).map_err(|e| anyhow!("bad alphabet: {}", e));
    }
    let mut symbols: Vec<String> = Vec::new();
    for text in texts {
        let mut token = String::new();
        for c in text.chars().chain(" ".chars()) {
            if c.is_alphanumeric() || c == '_' || c == '.' {
                token.push(c);
            } else if !token.is_empty() {
                if !KEYWORDS.contains(&token.as_str()) && !symbols.contains(&token) {
                    symbols.push(token.clone());
                }
                token.clear();
            }
        }
    }
    symbols.sort();
    Alphabet::new(symbols)
        .map_err(|_| anyhow!("cannot infer an alphabet; pass --alphabet explicitly"))
}

fn parse_with(args: &FormulaArgs) -> Result<(Alphabet, Formula)> {
    let alphabet = resolve_alphabet(&args.alphabet, &[&args.formula])?;
    let phi = parse_formula(&args.formula, &alphabet)
        .map_err(|e| anyhow!("{} in `{}`", e, args.formula))?;
    Ok((alphabet, phi))
}

/// Anything with a weighted language: a model file or a weighted (or
/// accepting) automaton file.
enum Language {
    Model(ModelFile),
    Wnfa(weft_core::automata::WeightedNfa),
    DfaLanguage { dfa: Dfa, accepting: StateSet },
}

impl Language {
    fn alphabet(&self) -> &Alphabet {
        match self {
            Language::Model(m) => m.alphabet(),
            Language::Wnfa(m) => m.alphabet(),
            Language::DfaLanguage { dfa, .. } => dfa.alphabet(),
        }
    }

    fn weight(&self, w: &[usize]) -> Result<SemiringValue> {
        match self {
            Language::Model(ModelFile::Classifier(c)) => {
                c.weight(w).map_err(|e| anyhow!("{}", e))
            }
            Language::Model(ModelFile::Autoregressor(a)) => {
                a.string_weight(w).map_err(|e| anyhow!("{}", e))
            }
            Language::Wnfa(m) => {
                weft_core::automata::nfa_weight(m, w).map_err(|e| anyhow!("{}", e))
            }
            Language::DfaLanguage { dfa, accepting } => {
                let run = weft_core::automata::dfa_run(dfa, w).map_err(|e| anyhow!("{}", e))?;
                Ok(SemiringValue::Bool(accepting.contains(run.last().unwrap())))
            }
        }
    }
}

fn load_language(path: &Path) -> Result<Language> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_model = text.lines().any(|l| {
        let l = l.trim();
        l.starts_with("encoder ") || l.starts_with("output ") || l.starts_with("kind ")
    });
    if is_model {
        let base = path.parent().unwrap_or(Path::new("."));
        Ok(Language::Model(parse_model(&text, base)?))
    } else {
        match parse_automaton(&text)? {
            AutomatonFile::Wnfa(m) => Ok(Language::Wnfa(m)),
            AutomatonFile::Dfa {
                dfa,
                accepting: Some(acc),
            } => Ok(Language::DfaLanguage {
                dfa,
                accepting: acc,
            }),
            AutomatonFile::Dfa { .. } => {
                bail!("a deterministic machine needs an `accepting` line to define a language")
            }
        }
    }
}

fn load_autoregressor(path: &Path) -> Result<weft_core::models::Autoregressor> {
    match load_language(path)? {
        Language::Model(ModelFile::Autoregressor(a)) => Ok(a),
        _ => bail!("{} is not an autoregressor model", path.display()),
    }
}

/// Default comparison bound, overridable through WEFT_ORACLE_BOUND:
/// longer for small alphabets, shorter for larger ones.
fn default_bound(alphabet: &Alphabet) -> usize {
    if let Ok(text) = std::env::var("WEFT_ORACLE_BOUND") {
        if let Ok(n) = text.parse() {
            return n;
        }
    }
    match alphabet.len() {
        0 | 1 | 2 => 7,
        3 => 5,
        _ => 4,
    }
}

fn verdict_line(format: Format, verdict: bool, detail: &str) {
    match format {
        Format::Structured => {
            println!("verdict: {}", verdict);
            if !detail.is_empty() {
                println!("{}", detail);
            }
        }
        _ => {
            if detail.is_empty() {
                println!("{}", verdict);
            } else {
                println!("{}", detail);
            }
        }
    }
}

fn run(verb: Verb) -> Result<ExitCode> {
    match verb {
        Verb::Parse(args) => {
            let (_, phi) = parse_with(&args)?;
            println!("{}", phi);
            Ok(ExitCode::SUCCESS)
        }
        Verb::Eval {
            formula,
            input,
            position,
        } => {
            let (alphabet, phi) = parse_with(&formula)?;
            let w = alphabet
                .parse_string(&input)
                .map_err(|e| anyhow!("bad input: {}", e))?;
            let i = position.unwrap_or(w.len());
            let holds = satisfies(&w, i, &phi).map_err(|e| anyhow!("{}", e))?;
            println!("{}", holds);
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Verb::Next { formula, sigma } => {
            let alphabet = resolve_alphabet(&formula.alphabet, &[&formula.formula, &sigma])?;
            let phi = parse_formula(&formula.formula, &alphabet)
                .map_err(|e| anyhow!("{} in `{}`", e, formula.formula))?;
            let sigma_id = alphabet
                .id_of(&sigma)
                .ok_or_else(|| anyhow!("symbol `{}` is not in the alphabet", sigma))?;
            println!("{}", next_sigma(&phi, sigma_id));
            Ok(ExitCode::SUCCESS)
        }
        Verb::Prefix { formula, budget } => {
            let (_, phi) = parse_with(&formula)?;
            let result = prefix_transform(&phi, budget).map_err(|e| anyhow!("{}", e))?;
            println!("{}", result);
            Ok(ExitCode::SUCCESS)
        }
        Verb::ToDfa {
            formula,
            budget,
            output,
            format,
        } => {
            let (_, phi) = parse_with(&formula)?;
            let closure = build_closure_dfa(&phi, budget).map_err(|e| anyhow!("{}", e))?;
            let accepting: StateSet = closure.accepting_states().into_iter().collect();
            let rendered = match format {
                Format::Dot => write_dot(&AutomatonFile::Dfa {
                    dfa: closure.dfa().clone(),
                    accepting: Some(accepting),
                }),
                _ => write_dfa(closure.dfa(), Some(&accepting)),
            };
            match output {
                Some(path) => std::fs::write(&path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{}", rendered),
            }
            Ok(ExitCode::SUCCESS)
        }
        Verb::Cls2ar { model, output } => {
            let loaded = load_language(&model)?;
            let classifier = match loaded {
                Language::Model(ModelFile::Classifier(c)) => c,
                _ => bail!("{} is not a classifier model", model.display()),
            };
            let auto = classifier_to_autoregressor(&classifier).map_err(|e| anyhow!("{}", e))?;
            emit_model(ModelFile::Autoregressor(auto), output, "tuple")
        }
        Verb::Ar2cls { model, output } => {
            let auto = load_autoregressor(&model)?;
            let classifier = autoregressor_to_classifier(&auto).map_err(|e| anyhow!("{}", e))?;
            let phi = classifier.encoder().as_tuple().unwrap().formulas()[0].clone();
            println!("{}", phi);
            if output.is_some() {
                return emit_model(ModelFile::Classifier(classifier), output, "tuple");
            }
            Ok(ExitCode::SUCCESS)
        }
        Verb::Noy(args) => {
            let (_, phi) = parse_with(&args)?;
            let rewritten = noy_transform(&phi).map_err(|e| anyhow!("{}", e))?;
            println!("{}", rewritten);
            Ok(ExitCode::SUCCESS)
        }
        Verb::Bigram { alphabet, input } => {
            let alphabet = resolve_alphabet(&Some(alphabet), &[])?;
            let w = alphabet
                .parse_string(&input)
                .map_err(|e| anyhow!("bad input: {}", e))?;
            let image = bigram_map(&alphabet, &w).map_err(|e| anyhow!("{}", e))?;
            let big = alphabet.bigram_alphabet();
            println!("{}", big.format_string(&image));
            Ok(ExitCode::SUCCESS)
        }
        Verb::Weight { model, input } => {
            let language = load_language(&model)?;
            let w = language
                .alphabet()
                .parse_string(&input)
                .map_err(|e| anyhow!("bad input: {}", e))?;
            println!("{}", language.weight(&w)?);
            Ok(ExitCode::SUCCESS)
        }
        Verb::Mass { model, bound } => {
            let language = load_language(&model)?;
            let alphabet = language.alphabet().clone();
            let bound = bound.unwrap_or_else(|| default_bound(&alphabet));
            let mut failure = None;
            let mass = total_mass_upto(
                &alphabet,
                |w| match language.weight(w) {
                    Ok(v) => v,
                    Err(e) => {
                        failure = Some(e);
                        SemiringValue::rational(0, 1)
                    }
                },
                bound,
            )
            .map_err(|e| anyhow!("{}", e))?;
            if let Some(e) = failure {
                return Err(e);
            }
            println!("{}", mass);
            Ok(ExitCode::SUCCESS)
        }
        Verb::CheckNorm { model, format } => {
            let auto = load_autoregressor(&model)?;
            match verify_normalization(&auto).map_err(|e| anyhow!("{}", e))? {
                NormalizationReport::Normalized { termination } => {
                    let detail = match termination {
                        Some(t) => {
                            let lines: Vec<String> = t
                                .iter()
                                .map(|(state, mass)| format!("termination {} {}", state, mass))
                                .collect();
                            format!("normalized\n{}", lines.join("\n"))
                        }
                        None => "normalized".to_string(),
                    };
                    verdict_line(format, true, &detail);
                    Ok(ExitCode::SUCCESS)
                }
                NormalizationReport::NotNormalized { failure } => {
                    verdict_line(format, false, &format!("not normalized: {:?}", failure));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Verb::CheckCf { automaton, format } => {
            let text = std::fs::read_to_string(&automaton)
                .with_context(|| format!("reading {}", automaton.display()))?;
            let parsed = parse_automaton(&text)?;
            let (report, alphabet) = match &parsed {
                AutomatonFile::Dfa { dfa, .. } => {
                    (is_counter_free_dfa(dfa), dfa.alphabet().clone())
                }
                AutomatonFile::Wnfa(m) => (
                    is_counter_free_nfa_support(m).map_err(|e| anyhow!("{}", e))?,
                    m.alphabet().clone(),
                ),
            };
            if report.counter_free {
                verdict_line(
                    format,
                    true,
                    &format!("counter-free (k = {})", report.stability_index.unwrap()),
                );
                Ok(ExitCode::SUCCESS)
            } else {
                let (word, _) = report.witness.unwrap();
                verdict_line(
                    format,
                    false,
                    &format!(
                        "not counter-free: witness {}",
                        alphabet.format_string(&word)
                    ),
                );
                Ok(ExitCode::from(1))
            }
        }
        Verb::CheckTwins { automaton, format } => {
            let text = std::fs::read_to_string(&automaton)
                .with_context(|| format!("reading {}", automaton.display()))?;
            let machine = match parse_automaton(&text)? {
                AutomatonFile::Wnfa(m) => m,
                AutomatonFile::Dfa { .. } => {
                    bail!("the twins test applies to weighted machines")
                }
            };
            let report = is_determinizable_twins(&machine).map_err(|e| anyhow!("{}", e))?;
            if report.determinizable {
                verdict_line(format, true, "determinizable (twins property holds)");
                Ok(ExitCode::SUCCESS)
            } else {
                let (p, q, label) = report.counterexample.unwrap();
                verdict_line(
                    format,
                    false,
                    &format!(
                        "not determinizable: siblings {} {} differ on cycle {}",
                        machine.state_name(p),
                        machine.state_name(q),
                        machine.alphabet().format_string(&label)
                    ),
                );
                Ok(ExitCode::from(1))
            }
        }
        Verb::CheckStutter { automaton, format } => {
            let text = std::fs::read_to_string(&automaton)
                .with_context(|| format!("reading {}", automaton.display()))?;
            let (dfa, accepting) = match parse_automaton(&text)? {
                AutomatonFile::Dfa {
                    dfa,
                    accepting: Some(acc),
                } => (dfa, acc),
                AutomatonFile::Dfa { .. } => bail!("stutter check needs an `accepting` line"),
                AutomatonFile::Wnfa(_) => {
                    bail!("stutter check applies to deterministic machines")
                }
            };
            let report = stutter_invariant(&dfa, &|q| accepting.contains(&q));
            if report.invariant {
                verdict_line(format, true, "stutter-invariant");
                Ok(ExitCode::SUCCESS)
            } else {
                let (u, s, v) = report.witness.unwrap();
                let al = dfa.alphabet();
                verdict_line(
                    format,
                    false,
                    &format!(
                        "not stutter-invariant: witness u=\"{}\" sigma={} v=\"{}\"",
                        al.format_string(&u),
                        al.symbol(s),
                        al.format_string(&v)
                    ),
                );
                Ok(ExitCode::from(1))
            }
        }
        Verb::Equiv { left, right, bound } => {
            let lhs = load_language(&left)?;
            let rhs = load_language(&right)?;
            if lhs.alphabet() != rhs.alphabet() {
                bail!("the two languages use different alphabets");
            }
            let alphabet = lhs.alphabet().clone();
            let bound = bound.unwrap_or_else(|| default_bound(&alphabet));
            let failure = std::cell::RefCell::new(None);
            let report = languages_equal_upto(
                &alphabet,
                |w| {
                    lhs.weight(w).unwrap_or_else(|e| {
                        *failure.borrow_mut() = Some(e);
                        SemiringValue::rational(0, 1)
                    })
                },
                |w| {
                    rhs.weight(w).unwrap_or_else(|e| {
                        *failure.borrow_mut() = Some(e);
                        SemiringValue::rational(0, 1)
                    })
                },
                bound,
            )
            .map_err(|e| anyhow!("{}", e))?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            println!("{}", report.render(&alphabet));
            Ok(if report.equal() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Verb::Fixtures { name, emit } => fixtures_verb(name, emit),
    }
}

fn emit_model(model: ModelFile, output: Option<PathBuf>, encoder_ext: &str) -> Result<ExitCode> {
    match output {
        Some(prefix) => {
            let stem = prefix
                .file_name()
                .and_then(|s| s.to_str())
                .ok_or_else(|| anyhow!("bad output prefix"))?
                .to_string();
            let encoder_file = format!("{}.{}", stem, encoder_ext);
            let (model_text, encoder_text) = write_model(&model, &encoder_file)?;
            let model_path = prefix.with_extension("model");
            let encoder_path = prefix.with_extension(encoder_ext);
            std::fs::write(&model_path, model_text)
                .with_context(|| format!("writing {}", model_path.display()))?;
            std::fs::write(&encoder_path, encoder_text)
                .with_context(|| format!("writing {}", encoder_path.display()))?;
            println!("{}", model_path.display());
            println!("{}", encoder_path.display());
        }
        None => {
            let (model_text, encoder_text) = write_model(&model, &format!("-.{}", encoder_ext))?;
            println!("# model\n{}# encoder\n{}", model_text, encoder_text);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The fixture files: `(fixture name, file name, content)`.
pub fn fixture_files() -> Vec<(&'static str, String, String)> {
    use weft_core::fixtures as fx;
    let mut out: Vec<(&'static str, String, String)> = Vec::new();
    out.push((
        "fig1a_dfa",
        "fig1a.aut".into(),
        write_dfa(&fx::fig1a_dfa(), None),
    ));
    out.push((
        "fig1b_dfa",
        "fig1b.aut".into(),
        write_dfa(&fx::fig1b_dfa(), None),
    ));
    out.push((
        "fig1c_wnfa",
        "fig1c.aut".into(),
        weft_cli::formats::write_wnfa(&fx::fig1c_wnfa()),
    ));
    let (ab, ab_acc) = fx::ab_star_dfa();
    out.push(("ab_star_dfa", "ab_star.aut".into(), write_dfa(&ab, Some(&ab_acc))));
    let (aab, aab_acc) = fx::aab_star_dfa();
    out.push((
        "aab_star_dfa",
        "aab_star.aut".into(),
        write_dfa(&aab, Some(&aab_acc)),
    ));
    for k in 1..=6 {
        let (dfa, acc) = fx::l_k(k);
        let name: &'static str = Box::leak(format!("l_{}", k).into_boxed_str());
        out.push((name, format!("l_{}.aut", k), write_dfa(&dfa, Some(&acc))));
    }
    let auto = fx::ab_star_autoregressor();
    let (model_text, tuple_text) = write_model(
        &ModelFile::Autoregressor(auto),
        "ab_star_autoregressor.tuple",
    )
    .unwrap();
    out.push((
        "ab_star_autoregressor",
        "ab_star_autoregressor.model".into(),
        model_text,
    ));
    out.push((
        "ab_star_autoregressor",
        "ab_star_autoregressor.tuple".into(),
        tuple_text,
    ));
    let half = fx::half_a_star_autoregressor();
    let (model_text, dfa_text) =
        write_model(&ModelFile::Autoregressor(half), "half_a_star_encoder.aut").unwrap();
    out.push((
        "half_a_star_autoregressor",
        "half_a_star.model".into(),
        model_text,
    ));
    out.push((
        "half_a_star_autoregressor",
        "half_a_star_encoder.aut".into(),
        dfa_text,
    ));
    let ones = fx::one_a_star_classifier();
    let (model_text, dfa_text) =
        write_model(&ModelFile::Classifier(ones), "one_a_star_encoder.aut").unwrap();
    out.push((
        "one_a_star_classifier",
        "one_a_star.model".into(),
        model_text,
    ));
    out.push((
        "one_a_star_classifier",
        "one_a_star_encoder.aut".into(),
        dfa_text,
    ));
    out.push((
        "uhat_embed",
        "embed.uhat".into(),
        write_uhat(&fx::uhat_embed_model()),
    ));
    out.push((
        "uhat_copy_previous",
        "copy_previous.uhat".into(),
        write_uhat(&fx::uhat_copy_previous_model()),
    ));
    // A tuple file for the (ab)* encoder on its own.
    let tuple_encoder = fx::ab_star_autoregressor();
    if let weft_core::models::Encoder::Tuple(t) = tuple_encoder.encoder() {
        out.push((
            "ab_star_tuple",
            "ab_star.tuple".into(),
            write_tuple(t.alphabet(), t.formulas()),
        ));
    }
    out
}

fn fixtures_verb(name: Option<String>, emit: Option<PathBuf>) -> Result<ExitCode> {
    let files = fixture_files();
    let selected: Vec<&(&str, String, String)> = match &name {
        Some(n) => {
            let matched: Vec<_> = files.iter().filter(|(f, _, _)| f == n).collect();
            if matched.is_empty() {
                bail!(
                    "unknown fixture `{}`; known: {}",
                    n,
                    weft_core::fixtures::catalog().join(", ")
                );
            }
            matched
        }
        None => files.iter().collect(),
    };
    match emit {
        Some(dir) => {
            std::fs::create_dir_all(&dir)
                .with_context(|| format!("creating {}", dir.display()))?;
            for (_, file, content) in selected {
                let path = dir.join(file);
                std::fs::write(&path, content)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
        None => {
            if name.is_some() {
                for (_, file, content) in selected {
                    println!("# {}\n{}", file, content);
                }
            } else {
                for fixture in weft_core::fixtures::catalog() {
                    println!("{}", fixture);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

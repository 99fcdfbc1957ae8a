//! File formats: automata, formula tuples, models, and transformer
//! descriptions, all as line-oriented structured text. Lines starting
//! with `#` and blank lines are ignored everywhere.
//!
//! Automaton files (`.aut`):
//!
//! ```text
//! alphabet a b
//! semiring real            # weighted machines only
//! initial q0
//! accepting q1 q2          # deterministic machines only, optional
//! ending q1 1/2            # weighted machines only, one per state
//! q0 a q1 1/2              # transition: src symbol dst [weight]
//! ```
//!
//! A file is weighted when it carries a `semiring` tag, `ending` lines,
//! or four-field transitions. Deterministic machines may be partial;
//! missing transitions are completed with a sink state.
//!
//! Formula tuple files (`.tuple`):
//!
//! ```text
//! alphabet a b
//! formula H a
//! formula a & b
//! ```
//!
//! Model files (`.model`):
//!
//! ```text
//! semiring bool
//! kind autoregressor       # or: classifier
//! encoder tuple ab.tuple   # or: encoder dfa m.aut | encoder uhat t.uhat bound 6
//! output 011 a:true b:false eos:true
//! ```
//!
//! Tuple-encoder state keys are truth bitstrings with the first formula
//! leftmost; machine-encoder keys are state names; transformer-encoder
//! keys are extracted state indices. Classifier rows carry one weight:
//! `output q0 1/2`.
//!
//! Transformer files (`.uhat`): see [`parse_uhat`]; affine rows are
//! written `w1 w2 ... | bias`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use weft_core::automata::{Dfa, StateSet, WeightedNfa};
use weft_core::logic::{parse_formula, Alphabet};
use weft_core::models::{
    Autoregressor, Classifier, DfaEncoder, Encoder, OutputTable, RowTable, StateEncoder,
    TupleEncoder,
};
use weft_core::semiring::{SemiringKind, SemiringValue};
use weft_core::uhat::{extract_states, AffineMap, FfnStep, Head, Layer, UhatModel};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_alphabet_line(tokens: &[&str]) -> Result<Alphabet> {
    Alphabet::new(tokens.iter().map(|s| s.to_string()).collect::<Vec<_>>())
        .map_err(|e| anyhow!("bad alphabet: {}", e))
}

/// A parsed automaton file.
#[derive(Debug)]
pub enum AutomatonFile {
    Dfa {
        dfa: Dfa,
        accepting: Option<StateSet>,
    },
    Wnfa(WeightedNfa),
}

impl AutomatonFile {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            AutomatonFile::Dfa { dfa, .. } => dfa.alphabet(),
            AutomatonFile::Wnfa(m) => m.alphabet(),
        }
    }
}

pub fn parse_automaton(text: &str) -> Result<AutomatonFile> {
    let mut alphabet: Option<Alphabet> = None;
    let mut semiring: Option<SemiringKind> = None;
    let mut initial: Option<String> = None;
    let mut accepting: Option<Vec<String>> = None;
    let mut endings: Vec<(String, SemiringValue)> = Vec::new();
    let mut transitions: Vec<(String, String, String, Option<String>)> = Vec::new();

    for (line_no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| anyhow!("line {}: {}", line_no, msg);
        match tokens[0] {
            "alphabet" => alphabet = Some(parse_alphabet_line(&tokens[1..])?),
            "semiring" => {
                semiring = Some(match tokens.get(1) {
                    Some(&"bool") => SemiringKind::Boolean,
                    Some(&"real") => SemiringKind::Real,
                    _ => return Err(err("semiring must be `bool` or `real`")),
                })
            }
            "initial" => {
                initial = Some(
                    tokens
                        .get(1)
                        .ok_or_else(|| err("initial needs a state"))?
                        .to_string(),
                )
            }
            "accepting" => accepting = Some(tokens[1..].iter().map(|s| s.to_string()).collect()),
            "ending" => {
                let state = tokens.get(1).ok_or_else(|| err("ending needs a state"))?;
                let weight: SemiringValue = tokens
                    .get(2)
                    .ok_or_else(|| err("ending needs a weight"))?
                    .parse()
                    .map_err(|e| err(&format!("bad weight: {}", e)))?;
                endings.push((state.to_string(), weight));
            }
            _ => match tokens.len() {
                3 => transitions.push((
                    tokens[0].to_string(),
                    tokens[1].to_string(),
                    tokens[2].to_string(),
                    None,
                )),
                4 => transitions.push((
                    tokens[0].to_string(),
                    tokens[1].to_string(),
                    tokens[2].to_string(),
                    Some(tokens[3].to_string()),
                )),
                _ => return Err(err("expected `src symbol dst [weight]`")),
            },
        }
    }

    let alphabet = alphabet.ok_or_else(|| anyhow!("missing `alphabet` line"))?;
    let initial = initial.ok_or_else(|| anyhow!("missing `initial` line"))?;

    // Collect states in order of first mention.
    let mut names: Vec<String> = Vec::new();
    let see = |name: &str, names: &mut Vec<String>| {
        if !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
    };
    see(&initial, &mut names);
    for (src, _, dst, _) in &transitions {
        see(src, &mut names);
        see(dst, &mut names);
    }
    for (state, _) in &endings {
        see(state, &mut names);
    }
    if let Some(acc) = &accepting {
        for state in acc {
            see(state, &mut names);
        }
    }
    let id_of =
        |name: &str, names: &[String]| -> usize { names.iter().position(|n| n == name).unwrap() };

    let weighted = semiring.is_some()
        || !endings.is_empty()
        || transitions.iter().any(|(_, _, _, w)| w.is_some());

    if weighted {
        let kind = semiring.ok_or_else(|| anyhow!("weighted machine needs a `semiring` line"))?;
        let mut triples = Vec::new();
        for (src, sym, dst, w) in &transitions {
            let sym_id = alphabet
                .id_of(sym)
                .ok_or_else(|| anyhow!("unknown symbol `{}`", sym))?;
            let weight: SemiringValue = match w {
                Some(text) => text.parse().map_err(|e| anyhow!("bad weight: {}", e))?,
                None => SemiringValue::one(kind),
            };
            triples.push((id_of(src, &names), sym_id, id_of(dst, &names), weight));
        }
        let mut ending = vec![SemiringValue::zero(kind); names.len()];
        for (state, weight) in endings {
            if weight.kind() != kind {
                bail!("ending weight for `{}` is in the wrong semiring", state);
            }
            ending[id_of(&state, &names)] = weight;
        }
        let initial_id = id_of(&initial, &names);
        let machine = WeightedNfa::new(alphabet, names, kind, &triples, initial_id, ending)
            .map_err(|e| anyhow!("bad machine: {}", e))?;
        Ok(AutomatonFile::Wnfa(machine))
    } else {
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; names.len()];
        for (src, sym, dst, _) in &transitions {
            let sym_id = alphabet
                .id_of(sym)
                .ok_or_else(|| anyhow!("unknown symbol `{}`", sym))?;
            let (s, d) = (id_of(src, &names), id_of(dst, &names));
            if table[s][sym_id].is_some() {
                bail!("duplicate transition from `{}` on `{}`", src, sym);
            }
            table[s][sym_id] = Some(d);
        }
        let accepting_set: Option<StateSet> =
            accepting.map(|acc| acc.iter().map(|name| id_of(name, &names)).collect());
        let initial_id = id_of(&initial, &names);
        let dfa = Dfa::completed(alphabet, names, table, initial_id)
            .map_err(|e| anyhow!("bad machine: {}", e))?;
        Ok(AutomatonFile::Dfa {
            dfa,
            accepting: accepting_set,
        })
    }
}

pub fn write_dfa(dfa: &Dfa, accepting: Option<&StateSet>) -> String {
    let mut out = String::new();
    let al = dfa.alphabet();
    out.push_str(&format!(
        "alphabet {}\n",
        al.symbols().collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("initial {}\n", dfa.state_name(dfa.initial())));
    if let Some(acc) = accepting {
        let names: Vec<&str> = acc.iter().map(|&q| dfa.state_name(q)).collect();
        out.push_str(&format!("accepting {}\n", names.join(" ")));
    }
    for q in 0..dfa.num_states() {
        for s in al.ids() {
            out.push_str(&format!(
                "{} {} {}\n",
                dfa.state_name(q),
                al.symbol(s),
                dfa.state_name(dfa.step(q, s))
            ));
        }
    }
    out
}

pub fn write_wnfa(m: &WeightedNfa) -> String {
    let mut out = String::new();
    let al = m.alphabet();
    out.push_str(&format!(
        "alphabet {}\n",
        al.symbols().collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("semiring {}\n", m.kind()));
    out.push_str(&format!("initial {}\n", m.state_name(m.initial())));
    for q in 0..m.num_states() {
        out.push_str(&format!("ending {} {}\n", m.state_name(q), m.ending(q)));
    }
    for (src, sym, dst, w) in m.transitions() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            m.state_name(src),
            al.symbol(sym),
            m.state_name(dst),
            w
        ));
    }
    out
}

/// DOT rendering of either machine kind, for visualization.
pub fn write_dot(file: &AutomatonFile) -> String {
    let mut out = String::from("digraph machine {\n  rankdir=LR;\n  start [shape=point];\n");
    match file {
        AutomatonFile::Dfa { dfa, accepting } => {
            for q in 0..dfa.num_states() {
                let shape = match accepting {
                    Some(acc) if acc.contains(&q) => "doublecircle",
                    _ => "circle",
                };
                out.push_str(&format!("  \"{}\" [shape={}];\n", dfa.state_name(q), shape));
            }
            out.push_str(&format!(
                "  start -> \"{}\";\n",
                dfa.state_name(dfa.initial())
            ));
            for q in 0..dfa.num_states() {
                for s in dfa.alphabet().ids() {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                        dfa.state_name(q),
                        dfa.state_name(dfa.step(q, s)),
                        dfa.alphabet().symbol(s)
                    ));
                }
            }
        }
        AutomatonFile::Wnfa(m) => {
            for q in 0..m.num_states() {
                out.push_str(&format!(
                    "  \"{}\" [shape=circle,label=\"{}/{}\"];\n",
                    m.state_name(q),
                    m.state_name(q),
                    m.ending(q)
                ));
            }
            out.push_str(&format!("  start -> \"{}\";\n", m.state_name(m.initial())));
            for (src, sym, dst, w) in m.transitions() {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}/{}\"];\n",
                    m.state_name(src),
                    m.state_name(dst),
                    m.alphabet().symbol(sym),
                    w
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn parse_tuple(text: &str) -> Result<(Alphabet, Vec<weft_core::Formula>)> {
    let mut alphabet: Option<Alphabet> = None;
    let mut formulas = Vec::new();
    for (line_no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("alphabet") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            alphabet = Some(parse_alphabet_line(&tokens)?);
        } else if let Some(rest) = line.strip_prefix("formula") {
            let al = alphabet
                .as_ref()
                .ok_or_else(|| anyhow!("line {}: formula before alphabet", line_no))?;
            let phi =
                parse_formula(rest.trim(), al).map_err(|e| anyhow!("line {}: {}", line_no, e))?;
            formulas.push(phi);
        } else {
            bail!("line {}: expected `alphabet` or `formula`", line_no);
        }
    }
    let alphabet = alphabet.ok_or_else(|| anyhow!("missing `alphabet` line"))?;
    Ok((alphabet, formulas))
}

pub fn write_tuple(alphabet: &Alphabet, formulas: &[weft_core::Formula]) -> String {
    let mut out = format!(
        "alphabet {}\n",
        alphabet.symbols().collect::<Vec<_>>().join(" ")
    );
    for phi in formulas {
        out.push_str(&format!("formula {}\n", phi));
    }
    out
}

/// A parsed model file.
#[derive(Debug)]
pub enum ModelFile {
    Classifier(Classifier),
    Autoregressor(Autoregressor),
}

impl ModelFile {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            ModelFile::Classifier(c) => c.alphabet(),
            ModelFile::Autoregressor(a) => a.alphabet(),
        }
    }
}

enum EncoderRef {
    Tuple(PathBuf),
    Dfa(PathBuf),
    Uhat { path: PathBuf, bound: usize },
}

fn load_encoder(reference: &EncoderRef, base: &Path) -> Result<Encoder> {
    let resolve = |p: &PathBuf| -> PathBuf {
        if p.is_absolute() {
            p.clone()
        } else {
            base.join(p)
        }
    };
    match reference {
        EncoderRef::Tuple(path) => {
            let path = resolve(path);
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let (alphabet, formulas) = parse_tuple(&text)?;
            Ok(TupleEncoder::with_alphabet(alphabet, formulas)
                .map_err(|e| anyhow!("bad tuple: {}", e))?
                .into())
        }
        EncoderRef::Dfa(path) => {
            let path = resolve(path);
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            match parse_automaton(&text)? {
                AutomatonFile::Dfa { dfa, .. } => Ok(DfaEncoder::new(dfa).into()),
                AutomatonFile::Wnfa(_) => bail!("encoder machine must be deterministic"),
            }
        }
        EncoderRef::Uhat { path, bound } => {
            let path = resolve(path);
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let model = parse_uhat(&text)?;
            let extracted =
                extract_states(&model, *bound).map_err(|e| anyhow!("extraction failed: {}", e))?;
            Ok(extracted.into())
        }
    }
}

/// Resolves a state key in an output table to an encoder token.
fn token_of_key(encoder: &Encoder, key: &str) -> Result<u64> {
    match encoder {
        Encoder::Tuple(t) => {
            if t.arity() == 0 {
                return match key {
                    "0" => Ok(0),
                    _ => bail!("empty tuple encoders have the single state key `0`"),
                };
            }
            if key.len() != t.arity() || key.chars().any(|c| c != '0' && c != '1') {
                bail!(
                    "state key `{}` must be {} bits of 0/1 (first formula leftmost)",
                    key,
                    t.arity()
                );
            }
            let mut token = 0u64;
            for (i, c) in key.chars().enumerate() {
                if c == '1' {
                    token |= 1 << i;
                }
            }
            Ok(token)
        }
        Encoder::Dfa(d) => d
            .dfa()
            .state_id(key)
            .map(|q| q as u64)
            .ok_or_else(|| anyhow!("unknown state `{}`", key)),
        Encoder::Uhat(_) => key
            .parse::<u64>()
            .map_err(|_| anyhow!("transformer state keys are extracted indices, got `{}`", key)),
    }
}

fn token_key(encoder: &Encoder, token: u64) -> String {
    match encoder {
        Encoder::Tuple(t) => {
            if t.arity() == 0 {
                "0".to_string()
            } else {
                (0..t.arity())
                    .map(|i| if token & (1 << i) != 0 { '1' } else { '0' })
                    .collect()
            }
        }
        Encoder::Dfa(d) => d.dfa().state_name(token as usize).to_string(),
        Encoder::Uhat(_) => token.to_string(),
    }
}

pub fn parse_model(text: &str, base: &Path) -> Result<ModelFile> {
    let mut kind: Option<SemiringKind> = None;
    let mut model_kind: Option<String> = None;
    let mut encoder_ref: Option<EncoderRef> = None;
    let mut output_lines: Vec<(usize, String)> = Vec::new();

    for (line_no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "semiring" => {
                kind = Some(match tokens.get(1) {
                    Some(&"bool") => SemiringKind::Boolean,
                    Some(&"real") => SemiringKind::Real,
                    _ => bail!("line {}: semiring must be `bool` or `real`", line_no),
                })
            }
            "kind" => model_kind = tokens.get(1).map(|s| s.to_string()),
            "encoder" => {
                let path = PathBuf::from(
                    *tokens
                        .get(2)
                        .ok_or_else(|| anyhow!("line {}: encoder needs a path", line_no))?,
                );
                encoder_ref = Some(match tokens.get(1) {
                    Some(&"tuple") => EncoderRef::Tuple(path),
                    Some(&"dfa") => EncoderRef::Dfa(path),
                    Some(&"uhat") => {
                        let bound = match (tokens.get(3), tokens.get(4)) {
                            (Some(&"bound"), Some(b)) => b
                                .parse()
                                .map_err(|_| anyhow!("line {}: bad bound", line_no))?,
                            _ => bail!(
                                "line {}: transformer encoders need `bound N` for extraction",
                                line_no
                            ),
                        };
                        EncoderRef::Uhat { path, bound }
                    }
                    _ => bail!("line {}: encoder kind must be tuple, dfa, or uhat", line_no),
                });
            }
            "output" => output_lines.push((line_no, tokens[1..].join(" "))),
            other => bail!("line {}: unknown directive `{}`", line_no, other),
        }
    }

    let kind = kind.ok_or_else(|| anyhow!("missing `semiring` line"))?;
    let model_kind = model_kind.ok_or_else(|| anyhow!("missing `kind` line"))?;
    let encoder_ref = encoder_ref.ok_or_else(|| anyhow!("missing `encoder` line"))?;
    let encoder = load_encoder(&encoder_ref, base)?;
    let alphabet = encoder.alphabet().clone();

    match model_kind.as_str() {
        "classifier" => {
            let mut table = OutputTable::new();
            for (line_no, line) in &output_lines {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != 2 {
                    bail!("line {}: classifier rows are `state weight`", line_no);
                }
                let token = token_of_key(&encoder, tokens[0])
                    .map_err(|e| anyhow!("line {}: {}", line_no, e))?;
                let weight: SemiringValue = tokens[1]
                    .parse()
                    .map_err(|e| anyhow!("line {}: {}", line_no, e))?;
                if weight.kind() != kind {
                    bail!("line {}: weight in the wrong semiring", line_no);
                }
                table.insert(token, weight);
            }
            let c = Classifier::new(encoder, table).map_err(|e| anyhow!("bad model: {}", e))?;
            Ok(ModelFile::Classifier(c))
        }
        "autoregressor" => {
            let width = alphabet.len() + 1;
            let mut rows = RowTable::new();
            for (line_no, line) in &output_lines {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != width + 1 {
                    bail!(
                        "line {}: autoregressor rows are `state` plus {} `sym:weight` entries",
                        line_no,
                        width
                    );
                }
                let token = token_of_key(&encoder, tokens[0])
                    .map_err(|e| anyhow!("line {}: {}", line_no, e))?;
                let mut row = vec![SemiringValue::zero(kind); width];
                let mut seen = vec![false; width];
                for entry in &tokens[1..] {
                    let (sym, weight) = entry
                        .split_once(':')
                        .ok_or_else(|| anyhow!("line {}: entries are `sym:weight`", line_no))?;
                    let index = if sym == "eos" {
                        alphabet.len()
                    } else {
                        alphabet
                            .id_of(sym)
                            .ok_or_else(|| anyhow!("line {}: unknown symbol `{}`", line_no, sym))?
                    };
                    if seen[index] {
                        bail!("line {}: duplicate entry for `{}`", line_no, sym);
                    }
                    seen[index] = true;
                    let weight: SemiringValue = weight
                        .parse()
                        .map_err(|e| anyhow!("line {}: {}", line_no, e))?;
                    if weight.kind() != kind {
                        bail!("line {}: weight in the wrong semiring", line_no);
                    }
                    row[index] = weight;
                }
                rows.insert(token, row);
            }
            let a = Autoregressor::new(encoder, rows).map_err(|e| anyhow!("bad model: {}", e))?;
            Ok(ModelFile::Autoregressor(a))
        }
        other => bail!("kind must be classifier or autoregressor, got `{}`", other),
    }
}

/// Serializes a model, returning the model text plus the encoder artifact
/// content it references as `encoder_file`.
pub fn write_model(model: &ModelFile, encoder_file: &str) -> Result<(String, String)> {
    let (encoder, kind) = match model {
        ModelFile::Classifier(c) => (c.encoder(), c.kind()),
        ModelFile::Autoregressor(a) => (a.encoder(), a.kind()),
    };
    let encoder_line = match encoder {
        Encoder::Tuple(_) => format!("encoder tuple {}", encoder_file),
        Encoder::Dfa(_) => format!("encoder dfa {}", encoder_file),
        Encoder::Uhat(u) => format!("encoder uhat {} bound {}", encoder_file, u.table().bound),
    };
    let encoder_content = match encoder {
        Encoder::Tuple(t) => write_tuple(t.alphabet(), t.formulas()),
        Encoder::Dfa(d) => write_dfa(d.dfa(), None),
        Encoder::Uhat(u) => write_uhat(u.model()),
    };
    let mut out = String::new();
    out.push_str(&format!("semiring {}\n", kind));
    match model {
        ModelFile::Classifier(c) => {
            out.push_str("kind classifier\n");
            out.push_str(&encoder_line);
            out.push('\n');
            for (&token, weight) in c.output() {
                out.push_str(&format!(
                    "output {} {}\n",
                    token_key(encoder, token),
                    weight
                ));
            }
        }
        ModelFile::Autoregressor(a) => {
            out.push_str("kind autoregressor\n");
            out.push_str(&encoder_line);
            out.push('\n');
            let al = a.alphabet();
            for (&token, row) in a.rows() {
                let mut entries: Vec<String> = al
                    .ids()
                    .map(|s| format!("{}:{}", al.symbol(s), row[s]))
                    .collect();
                entries.push(format!("eos:{}", row[al.len()]));
                out.push_str(&format!(
                    "output {} {}\n",
                    token_key(encoder, token),
                    entries.join(" ")
                ));
            }
        }
    }
    Ok((out, encoder_content))
}

fn parse_rational(token: &str) -> Result<num_rational::BigRational> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: num_bigint::BigInt = num
        .parse()
        .map_err(|_| anyhow!("bad rational `{}`", token))?;
    let den: num_bigint::BigInt = den
        .parse()
        .map_err(|_| anyhow!("bad rational `{}`", token))?;
    if den == num_bigint::BigInt::from(0) {
        bail!("zero denominator in `{}`", token);
    }
    Ok(num_rational::BigRational::new(num, den))
}

type AffineRow = (Vec<num_rational::BigRational>, num_rational::BigRational);

fn parse_affine_row(line: &str) -> Result<AffineRow> {
    let (row, bias) = line
        .split_once('|')
        .ok_or_else(|| anyhow!("affine rows are `w1 w2 ... | bias`"))?;
    let weights = row
        .split_whitespace()
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    let bias = parse_rational(bias.trim())?;
    Ok((weights, bias))
}

/// Parses the transformer description format documented in the module
/// header: dimensions, embeddings, then per layer residual flags, heads
/// with query/key/value rows, and feed-forward steps.
pub fn parse_uhat(text: &str) -> Result<UhatModel> {
    struct HeadBuilder {
        query: Vec<AffineRow>,
        key: Vec<AffineRow>,
        value: Vec<AffineRow>,
    }
    enum FfnStepBuilder {
        Affine(Vec<AffineRow>),
        Relu,
    }
    struct LayerBuilder {
        heads: Vec<HeadBuilder>,
        attn_residual: bool,
        ffn_residual: bool,
        ffn: Vec<FfnStepBuilder>,
    }

    let mut alphabet: Option<Alphabet> = None;
    let mut dims: Option<(usize, usize)> = None;
    let mut bos: Option<Vec<num_rational::BigRational>> = None;
    let mut embeddings: BTreeMap<usize, Vec<num_rational::BigRational>> = BTreeMap::new();
    let mut layers: Vec<LayerBuilder> = Vec::new();

    for (line_no, line) in content_lines(text) {
        let err = |msg: &str| anyhow!("line {}: {}", line_no, msg);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "alphabet" => alphabet = Some(parse_alphabet_line(&tokens[1..])?),
            "dims" => {
                let d = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("dims needs two integers"))?;
                let dk = tokens
                    .get(2)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("dims needs two integers"))?;
                dims = Some((d, dk));
            }
            "embed" => {
                let al = alphabet
                    .as_ref()
                    .ok_or_else(|| err("embed before alphabet"))?;
                let values = tokens[2..]
                    .iter()
                    .map(|t| parse_rational(t))
                    .collect::<Result<Vec<_>>>()?;
                match tokens.get(1) {
                    Some(&"bos") => bos = Some(values),
                    Some(sym) => {
                        let id = al
                            .id_of(sym)
                            .ok_or_else(|| err(&format!("unknown symbol `{}`", sym)))?;
                        embeddings.insert(id, values);
                    }
                    None => return Err(err("embed needs a symbol")),
                }
            }
            "layer" => layers.push(LayerBuilder {
                heads: Vec::new(),
                attn_residual: false,
                ffn_residual: false,
                ffn: Vec::new(),
            }),
            "residual" => {
                let layer = layers
                    .last_mut()
                    .ok_or_else(|| err("residual before layer"))?;
                let on = match tokens.get(2) {
                    Some(&"on") => true,
                    Some(&"off") => false,
                    _ => return Err(err("residual is `attn|ffn on|off`")),
                };
                match tokens.get(1) {
                    Some(&"attn") => layer.attn_residual = on,
                    Some(&"ffn") => layer.ffn_residual = on,
                    _ => return Err(err("residual is `attn|ffn on|off`")),
                }
            }
            "head" => {
                let layer = layers.last_mut().ok_or_else(|| err("head before layer"))?;
                layer.heads.push(HeadBuilder {
                    query: Vec::new(),
                    key: Vec::new(),
                    value: Vec::new(),
                });
            }
            "query" | "key" | "value" => {
                let layer = layers.last_mut().ok_or_else(|| err("row before layer"))?;
                let head = layer
                    .heads
                    .last_mut()
                    .ok_or_else(|| err("row before head"))?;
                let row = parse_affine_row(&line[tokens[0].len()..])?;
                match tokens[0] {
                    "query" => head.query.push(row),
                    "key" => head.key.push(row),
                    _ => head.value.push(row),
                }
            }
            "ffn" => {
                let layer = layers.last_mut().ok_or_else(|| err("ffn before layer"))?;
                match tokens.get(1) {
                    Some(&"affine") => layer.ffn.push(FfnStepBuilder::Affine(Vec::new())),
                    Some(&"relu") => layer.ffn.push(FfnStepBuilder::Relu),
                    _ => {
                        let step = match layer.ffn.last_mut() {
                            Some(FfnStepBuilder::Affine(rows)) => rows,
                            _ => return Err(err("ffn row outside an affine step")),
                        };
                        step.push(parse_affine_row(&line[3..])?);
                    }
                }
            }
            other => return Err(err(&format!("unknown directive `{}`", other))),
        }
    }

    let alphabet = alphabet.ok_or_else(|| anyhow!("missing `alphabet` line"))?;
    let (dim, key_dim) = dims.ok_or_else(|| anyhow!("missing `dims` line"))?;
    let bos = bos.ok_or_else(|| anyhow!("missing bos embedding"))?;
    let mut embedding_list = Vec::new();
    for id in alphabet.ids() {
        embedding_list.push(
            embeddings
                .get(&id)
                .cloned()
                .ok_or_else(|| anyhow!("missing embedding for `{}`", alphabet.symbol(id)))?,
        );
    }
    let build_affine = |rows: Vec<AffineRow>| {
        let mut weight = Vec::new();
        let mut bias = Vec::new();
        for (r, b) in rows {
            weight.push(r);
            bias.push(b);
        }
        AffineMap { weight, bias }
    };
    let layers = layers
        .into_iter()
        .map(|layer| Layer {
            heads: layer
                .heads
                .into_iter()
                .map(|h| Head {
                    query: build_affine(h.query),
                    key: build_affine(h.key),
                    value: build_affine(h.value),
                })
                .collect(),
            attn_residual: layer.attn_residual,
            ffn: layer
                .ffn
                .into_iter()
                .map(|step| match step {
                    FfnStepBuilder::Affine(rows) => FfnStep::Affine(build_affine(rows)),
                    FfnStepBuilder::Relu => FfnStep::Relu,
                })
                .collect(),
            ffn_residual: layer.ffn_residual,
        })
        .collect();
    UhatModel::new(alphabet, dim, key_dim, bos, embedding_list, layers)
        .map_err(|e| anyhow!("bad transformer: {}", e))
}

pub fn write_uhat(model: &UhatModel) -> String {
    let mut out = String::new();
    let al = model.alphabet();
    out.push_str(&format!(
        "alphabet {}\n",
        al.symbols().collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("dims {} {}\n", model.dim(), model.key_dim()));
    let fmt_vec = |v: &[num_rational::BigRational]| {
        v.iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("embed bos {}\n", fmt_vec(model.bos_embedding())));
    for s in al.ids() {
        out.push_str(&format!(
            "embed {} {}\n",
            al.symbol(s),
            fmt_vec(model.embedding(s))
        ));
    }
    let fmt_affine = |out: &mut String, name: &str, map: &AffineMap| {
        for (row, bias) in map.weight.iter().zip(&map.bias) {
            out.push_str(&format!("{} {} | {}\n", name, fmt_vec(row), bias));
        }
    };
    for layer in model.layers() {
        out.push_str("layer\n");
        out.push_str(&format!(
            "residual attn {}\n",
            if layer.attn_residual { "on" } else { "off" }
        ));
        out.push_str(&format!(
            "residual ffn {}\n",
            if layer.ffn_residual { "on" } else { "off" }
        ));
        for head in &layer.heads {
            out.push_str("head\n");
            fmt_affine(&mut out, "query", &head.query);
            fmt_affine(&mut out, "key", &head.key);
            fmt_affine(&mut out, "value", &head.value);
        }
        for step in &layer.ffn {
            match step {
                FfnStep::Affine(map) => {
                    out.push_str("ffn affine\n");
                    fmt_affine(&mut out, "ffn", map);
                }
                FfnStep::Relu => out.push_str("ffn relu\n"),
            }
        }
    }
    out
}

//! End-to-end checks of the command-line interface: verb behavior, the
//! exit-code contract (0 success/true, 1 false verdict, 2 usage or format
//! error), and agreement between the shipped fixture files and the
//! in-code catalog.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn weft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn weft_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weft"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).trim().to_string()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn fixture(name: &str) -> String {
    fixtures_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn next_of_yesterday_is_the_operand() {
    let out = weft(&["next", "--sigma", "a", "--formula", "Y a"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a");
}

#[test]
fn next_of_matching_symbol_is_true() {
    let out = weft(&["next", "--sigma", "a", "--formula", "a", "--alphabet", "a,b"]);
    assert_eq!(stdout(&out), "true");
}

#[test]
fn parse_round_trips() {
    let out = weft(&["parse", "--alphabet", "a,b", "--formula", "P b -> (a S b)"]);
    assert_eq!(code(&out), 0);
    let printed = stdout(&out);
    let again = weft(&["parse", "--alphabet", "a,b", "--formula", &printed]);
    assert_eq!(stdout(&again), printed);
}

#[test]
fn parse_error_exits_two() {
    let out = weft(&["parse", "--alphabet", "a,b", "--formula", "(a S"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("offset 4"), "{}", err);
}

#[test]
fn eval_uses_exit_codes_for_verdicts() {
    let yes = weft(&["eval", "--alphabet", "a,b", "--formula", "H a", "--input", "aa"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(stdout(&yes), "true");
    let no = weft(&["eval", "--alphabet", "a,b", "--formula", "H a", "--input", "ab"]);
    assert_eq!(code(&no), 1);
    assert_eq!(stdout(&no), "false");
    // bos holds exactly at position 0.
    let at0 = weft(&[
        "eval",
        "--alphabet",
        "a,b",
        "--formula",
        "bos",
        "--input",
        "ab",
        "--position",
        "0",
    ]);
    assert_eq!(code(&at0), 0);
}

#[test]
fn check_cf_on_fixture_machines() {
    let good = weft(&["check-cf", "--automaton", &fixture("fig1a.aut")]);
    assert_eq!(code(&good), 0);
    assert_eq!(stdout(&good), "counter-free (k = 2)");

    let bad = weft(&["check-cf", "--automaton", &fixture("fig1b.aut")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("witness a"), "{}", stdout(&bad));

    let support = weft(&["check-cf", "--automaton", &fixture("fig1c.aut")]);
    assert_eq!(code(&support), 0);
}

#[test]
fn check_twins_on_the_branching_machine() {
    let out = weft(&["check-twins", "--automaton", &fixture("fig1c.aut")]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("q1") && text.contains("q2"), "{}", text);
}

#[test]
fn check_stutter_rejects_alternation() {
    let out = weft(&["check-stutter", "--automaton", &fixture("ab_star.aut")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("witness"), "{}", stdout(&out));
    let ok = weft(&["check-stutter", "--automaton", &fixture("l_1.aut")]);
    assert_eq!(code(&ok), 0);
}

#[test]
fn mass_of_the_half_weight_machine() {
    let out = weft(&[
        "mass",
        "--model",
        &fixture("half_a_star.model"),
        "--bound",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "15/16");
}

#[test]
fn weight_of_the_branching_machine() {
    let out = weft(&["weight", "--model", &fixture("fig1c.aut"), "--input", "aa"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "7/32");
}

#[test]
fn check_norm_verdicts() {
    let good = weft(&["check-norm", "--model", &fixture("half_a_star.model")]);
    assert_eq!(code(&good), 0);
    assert!(stdout(&good).contains("normalized"));

    // A locally over-weighted row is rejected.
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(
        fixtures_dir().join("half_a_star_encoder.aut"),
        dir.path().join("enc.aut"),
    )
    .unwrap();
    let model = "semiring real\nkind autoregressor\nencoder dfa enc.aut\noutput s a:1 eos:1\n";
    let path = dir.path().join("ones.model");
    std::fs::write(&path, model).unwrap();
    let bad = weft(&["check-norm", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("not normalized"), "{}", stdout(&bad));

    // Structured output mode.
    let structured = weft(&[
        "check-norm",
        "--model",
        &fixture("half_a_star.model"),
        "--format",
        "structured",
    ]);
    assert!(stdout(&structured).starts_with("verdict: true"));
}

#[test]
fn equiv_compares_fixture_languages() {
    let same = weft(&[
        "equiv",
        "--left",
        &fixture("ab_star_autoregressor.model"),
        "--right",
        &fixture("ab_star.aut"),
        "--bound",
        "7",
    ]);
    assert_eq!(code(&same), 0, "{}", stdout(&same));

    let differ = weft(&[
        "equiv",
        "--left",
        &fixture("ab_star_autoregressor.model"),
        "--right",
        &fixture("aab_star.aut"),
        "--bound",
        "3",
    ]);
    assert_eq!(code(&differ), 1);
    assert!(stdout(&differ).contains("\"ab\""), "{}", stdout(&differ));
}

#[test]
fn oracle_bound_env_override() {
    // At bound 1 the two languages agree (only the empty string belongs).
    let out = weft_env(
        &[
            "equiv",
            "--left",
            &fixture("ab_star.aut"),
            "--right",
            &fixture("aab_star.aut"),
        ],
        "WEFT_ORACLE_BOUND",
        "1",
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn to_dfa_emits_dot() {
    let out = weft(&[
        "to-dfa",
        "--formula",
        "H a",
        "--alphabet",
        "a,b",
        "--format",
        "dot",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("digraph"));
}

#[test]
fn prefix_output_reparses_and_evaluates() {
    let out = weft(&["prefix", "--formula", "a & Y a", "--alphabet", "a,b"]);
    assert_eq!(code(&out), 0);
    let formula = stdout(&out);
    // Anything extends by aa, so the prefix language is everything.
    for input in ["", "b", "ba", "abab"] {
        let eval = weft(&[
            "eval",
            "--alphabet",
            "a,b",
            "--formula",
            &formula,
            "--input",
            input,
        ]);
        assert_eq!(code(&eval), 0, "{:?}", input);
    }
}

#[test]
fn noy_produces_a_pair_formula() {
    let out = weft(&["noy", "--formula", "Y a", "--alphabet", "a,b"]);
    assert_eq!(code(&out), 0);
    let formula = stdout(&out);
    assert!(formula.contains("a.a") || formula.contains("a.eos"), "{}", formula);
    assert!(!formula.contains('Y'));
    // Depth-two input is rejected with a format error.
    let deep = weft(&["noy", "--formula", "Y Y a", "--alphabet", "a,b"]);
    assert_eq!(code(&deep), 2);
}

#[test]
fn bigram_verb_prints_the_image() {
    let out = weft(&["bigram", "--alphabet", "a,b", "--input", "aab"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "bos.a a.a a.b b.eos");
}

#[test]
fn cls2ar_then_check_norm_and_equiv() {
    let dir = tempfile::tempdir().unwrap();
    // A classifier for the language of H a over {a, b}.
    let tuple = "alphabet a b\nformula H a\n";
    std::fs::write(dir.path().join("ha.tuple"), tuple).unwrap();
    let model = "semiring bool\nkind classifier\nencoder tuple ha.tuple\noutput 0 false\noutput 1 true\n";
    let model_path = dir.path().join("ha.model");
    std::fs::write(&model_path, model).unwrap();

    let prefix = dir.path().join("ha_auto");
    let out = weft(&[
        "cls2ar",
        "--model",
        model_path.to_str().unwrap(),
        "--output",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let auto_model = dir.path().join("ha_auto.model");

    let norm = weft(&["check-norm", "--model", auto_model.to_str().unwrap()]);
    assert_eq!(code(&norm), 0, "{}", stdout(&norm));

    let equiv = weft(&[
        "equiv",
        "--left",
        model_path.to_str().unwrap(),
        "--right",
        auto_model.to_str().unwrap(),
        "--bound",
        "6",
    ]);
    assert_eq!(code(&equiv), 0, "{}", stdout(&equiv));
}

#[test]
fn ar2cls_prints_a_classifier_formula() {
    let out = weft(&[
        "ar2cls",
        "--model",
        &fixture("ab_star_autoregressor.model"),
    ]);
    assert_eq!(code(&out), 0);
    let formula = stdout(&out);
    assert!(formula.contains('H'), "{}", formula);
}

#[test]
fn fixtures_listing_and_unknown_name() {
    let list = weft(&["fixtures"]);
    assert_eq!(code(&list), 0);
    assert!(stdout(&list).contains("fig1c_wnfa"));
    let unknown = weft(&["fixtures", "--name", "nope"]);
    assert_eq!(code(&unknown), 2);
}

#[test]
fn shipped_fixture_files_match_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = weft(&["fixtures", "--emit", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name();
        let generated = std::fs::read_to_string(entry.path()).unwrap();
        let shipped_path = fixtures_dir().join(&name);
        let shipped = std::fs::read_to_string(&shipped_path)
            .unwrap_or_else(|_| panic!("missing shipped fixture {:?}", name));
        assert_eq!(generated, shipped, "fixture {:?} out of sync", name);
    }
}

#[test]
fn unknown_flags_exit_two() {
    let out = weft(&["eval", "--no-such-flag"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unreadable_file_exits_two() {
    let out = weft(&["check-cf", "--automaton", "/nonexistent/machine.aut"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

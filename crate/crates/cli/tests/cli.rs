use std::process::Command;

use proptest::prelude::*;
use rrtool::corpus::{corpus_files, verify_corpus};
use rrtool::{bundled_corpus, parse_job, print_job, render_json, AnySession, Params};

const QUARTIC: &str = r#"
command = "rr-ideal"

[ring]
kind = "semigroup"
generators = [4, 11, 17, 18]
truncation = 100

[ideals]
I = ["t^4", "t^11"]

[modules.M]
rank = 1
generators = [["t^4"], ["t^11"], ["t^17"]]

[params]
module = "M"
"#;

fn open(text: &str) -> rrtool::CliResult<AnySession> {
    AnySession::open(text, &Params::default())
}

fn err(text: &str) -> String {
    match open(text) {
        Ok(_) => panic!("expected an error"),
        Err(e) => e.to_string(),
    }
}

#[test]
fn quartic_job_is_valid() {
    let s = open(QUARTIC).unwrap();
    let r = s.run(None).unwrap();
    let gens = &r.document["outputs"]["value"]["generators"];
    assert_eq!(gens.as_array().unwrap().len(), 4);
    assert_eq!(r.document["outputs"]["certificate"]["kind"], "reduction-certified");
}

#[test]
fn empty_ideals_table_is_rejected() {
    let text = r#"
command = "rr-ideal"
[ring]
kind = "polynomial"
variables = ["x", "y"]
truncation = 10
[ideals]
"#;
    let s = open(text).unwrap();
    let e = s.run(None).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.message.contains("[ideals] table is empty"), "{e}");
    let listed_empty = text.replace("[ideals]", "[ideals]\nI = []");
    assert!(err(&listed_empty).contains("no generators"));
}

#[test]
fn unknown_variable_has_line_and_column() {
    let text = "[ring]\nkind = \"polynomial\"\nvariables = [\"x\", \"y\"]\ntruncation = 10\n[ideals]\nI = [\"x^2*z\"]\n";
    let e = err(text);
    assert!(e.contains("line 6, column 11"), "{e}");
    assert!(e.contains("unknown variable z"), "{e}");
}

#[test]
fn bad_exponent_and_bad_toml() {
    let text = "[ring]\nkind = \"polynomial\"\nvariables = [\"x\"]\ntruncation = 10\n[ideals]\nI = [\"x^-2\"]\n";
    assert!(err(text).contains("bad exponent"));
    let broken = "[ring]\nkind = \"polynomial\"\nvariables = [\"x\"\n";
    assert!(err(broken).contains("line 3"), "{}", err(broken));
    let unknown_key = "[ring]\nkind = \"polynomial\"\nvariables = [\"x\"]\ncolour = 1\n";
    assert!(err(unknown_key).contains("line 4"));
    let semigroup = "[ring]\nkind = \"semigroup\"\ngenerators = [4, 11]\ntruncation = 40\n[ideals]\nI = [\"t^7\"]\n";
    assert!(err(semigroup).contains("not in the semigroup"));
}

#[test]
fn missing_truncation_uses_recommendation() {
    let text = QUARTIC.replace("truncation = 100\n", "");
    let s = open(&text).unwrap();
    let r = s.run(None).unwrap();
    // (1 + 2 + 2)·11 + 17 + 8
    assert_eq!(r.document["truncation"], 80);
    assert!(r.document["warnings"][0].as_str().unwrap().contains("recommended D = 80"));
}

#[test]
fn corpus_round_trips() {
    for f in corpus_files(&bundled_corpus()).unwrap() {
        let job = parse_job(&std::fs::read_to_string(&f).unwrap()).unwrap();
        let again = parse_job(&print_job(&job).unwrap()).unwrap();
        assert_eq!(job, again, "{}", f.display());
    }
}

#[test]
fn tampered_corpus_reports_the_diff() {
    let dir = std::env::temp_dir().join(format!("rrtool-tamper-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["quartic-semigroup-strict-chain.toml", "cubic-truncation-module.toml"] {
        std::fs::copy(bundled_corpus().join(name), dir.join(name)).unwrap();
    }
    let p = dir.join("cubic-truncation-module.toml");
    let text = std::fs::read_to_string(&p).unwrap().replace("r = 2, x_text", "r = 3, x_text");
    std::fs::write(&p, text).unwrap();
    let reports = verify_corpus(&dir, &Params::default()).unwrap();
    assert_eq!(reports.iter().filter(|r| r.passed()).count(), 1);
    let bad = &reports[0];
    assert_eq!(bad.file, "cubic-truncation-module.toml");
    assert!(bad.checks[0].diffs[0].contains("r: expected"), "{:?}", bad.checks[0].diffs);
    std::fs::remove_dir_all(&dir).unwrap();
    let empty = std::env::temp_dir().join(format!("rrtool-empty-{}", std::process::id()));
    std::fs::create_dir_all(&empty).unwrap();
    assert_eq!(verify_corpus(&empty, &Params::default()).unwrap_err().exit_code(), 2);
    std::fs::remove_dir_all(&empty).unwrap();
}

fn rrtool(args: &[&str], job: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rrtool"));
    let path = job.map(|text| {
        let p = std::env::temp_dir().join(format!("rrtool-job-{}-{}.toml", std::process::id(), args.join("_").len()));
        std::fs::write(&p, text).unwrap();
        p
    });
    cmd.args(args);
    if let Some(p) = &path {
        cmd.arg("--input").arg(p);
    }
    let out = cmd.output().unwrap();
    if let Some(p) = path {
        let _ = std::fs::remove_file(p);
    }
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn exit_codes() {
    let (code, out, _) = rrtool(&["rr-ideal", "--json", "-"], Some(QUARTIC));
    assert_eq!(code, 0);
    assert!(out.contains("\"outputs\""));
    let (code, _, e) = rrtool(&["rr-ideal"], Some("[ring]\nkind = \"ring\"\n"));
    assert_eq!(code, 2, "{e}");
    let (code, _, e) = rrtool(&["no-such-command"], Some(QUARTIC));
    assert_eq!(code, 2, "{e}");
    // I^{n+k} leaves the truncation
    let (code, _, e) = rrtool(&["rr-ideal", "--param", "n=30"], Some(QUARTIC));
    assert_eq!(code, 3, "{e}");
    // no principal reduction allowed and no rho route: only a heuristic answer
    let (code, _, e) = rrtool(
        &["rr-ideal", "--param", "r_max=0", "--param", "use_rho=false", "--certified-only"],
        Some(QUARTIC),
    );
    assert_eq!(code, 3, "{e}");
    let (code, _, _) = rrtool(&["rr-ideal", "--param", "r_max=0", "--param", "use_rho=false"], Some(QUARTIC));
    assert_eq!(code, 0);
    let (code, _, e) = rrtool(&["verify-involution"], Some(QUARTIC));
    assert_eq!(code, 0, "{e}");
}

#[test]
fn involution_and_dimension_one_jobs() {
    let s = open(QUARTIC).unwrap();
    let r = s.run(Some("verify-involution")).unwrap();
    assert_eq!(r.document["outputs"]["fixpoint"], true);
    let line = "command = \"hilbert\"\n[ring]\nkind = \"polynomial\"\nvariables = [\"x\", \"y\"]\nquotient = [\"x*y\", \"y^2\"]\ntruncation = 20\n[ideals]\nm = [\"x\", \"y\"]\n";
    let r = open(line).unwrap().run(None).unwrap();
    assert_eq!(r.document["outputs"]["e"], serde_json::json!([1, -1]));
    assert_eq!(r.document["outputs"]["torsion"]["length"], 1);
}

fn quartic_with(order: &[usize], unused: &str) -> String {
    let gens = ["\"t^4\"", "\"t^11\""];
    let m = ["[\"t^4\"]", "[\"t^11\"]", "[\"t^17\"]"];
    let i: Vec<&str> = order.iter().filter(|&&k| k < 2).map(|&k| gens[k]).collect();
    let mm: Vec<&str> = order.iter().filter(|&&k| k >= 2).map(|&k| m[k - 2]).chain([m[2]]).collect();
    format!(
        "[ring]\nkind = \"semigroup\"\ngenerators = [4, 11, 17, 18]\ntruncation = 100\n[ideals]\nI = [{}]\n{unused} = [\"t^22\"]\n[modules.M]\nrank = 1\ngenerators = [{}]\n[params]\nmodule = \"M\"\n",
        i.join(", "),
        mm.join(", ")
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn outputs_ignore_generator_order_and_unused_names(
        order in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        unused in "[A-HJ-LN-QS-Z][a-z0-9]{0,4}",
    ) {
        let base = open(&quartic_with(&[0, 1, 2, 3], "J")).unwrap();
        let other = open(&quartic_with(&order, &unused)).unwrap();
        for cmd in ["rr-ideal", "filtration", "verify-involution"] {
            let a = base.run(Some(cmd)).unwrap().document;
            let b = other.run(Some(cmd)).unwrap().document;
            prop_assert_eq!(render_json(&a["outputs"]), render_json(&b["outputs"]));
        }
    }

    #[test]
    fn printed_jobs_parse_back(
        vars in prop::collection::btree_set("[a-w]", 1..4),
        exps in prop::collection::vec(prop::collection::vec(0u32..9, 3), 1..5),
        coef in -5i64..6,
        n in prop::option::of(1usize..6),
        seed in prop::option::of(any::<u64>()),
        d in 5usize..60,
    ) {
        let vars: Vec<String> = vars.into_iter().collect();
        let poly = |e: &Vec<u32>| {
            let parts: Vec<String> = vars.iter().zip(e).map(|(v, k)| format!("{v}^{k}")).collect();
            format!("{coef}*{}", parts.join("*"))
        };
        let gens: Vec<String> = exps.iter().map(|e| format!("\"{}\"", poly(e))).collect();
        let text = format!(
            "description = \"generated\"\ncommand = \"hilbert\"\n[ring]\nkind = \"polynomial\"\nvariables = [{}]\ntruncation = {d}\nfield = \"QQ\"\n[ideals]\nI = [{}]\n[params]\n{}{}\n[[checks]]\ncommand = \"rr-ideal\"\nexpect = {{ value = \"I\", certificate = {{ kind = \"heuristic\" }} }}\n",
            vars.iter().map(|v| format!("\"{v}\"")).collect::<Vec<_>>().join(", "),
            gens.join(", "),
            n.map(|n| format!("n = {n}\n")).unwrap_or_default(),
            seed.map(|s| format!("seed = {s}\n")).unwrap_or_default(),
        );
        let job = parse_job(&text).unwrap();
        let printed = print_job(&job).unwrap();
        prop_assert_eq!(parse_job(&printed).unwrap(), job);
    }
}

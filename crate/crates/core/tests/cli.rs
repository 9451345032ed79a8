use dioph11_core::cli::{self, EXIT_INVALID, EXIT_OK};
use dioph11_core::oracle;
use dioph11_core::solver::{Certificate, SolveAll};
use dioph11_core::SolutionTuple;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("dioph11").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

fn tuple(x: &str, y: &str, k: u64, n: u64) -> SolutionTuple {
    SolutionTuple::new(
        x.parse::<num_bigint::BigInt>().unwrap(),
        y.parse::<num_bigint::BigInt>().unwrap(),
        k,
        n,
    )
    .unwrap()
}

#[test]
fn solve_json_lists_the_family() {
    let all: SolveAll =
        serde_json::from_str(&ok(&["solve", "--lambda-max", "1", "--json"])).unwrap();
    assert_eq!(
        all.tuples(),
        vec![tuple("2", "5", 1, 3), tuple("2662", "605", 4, 3)]
    );
    assert_eq!(all.family[1].lambda, 1);
    assert!(all.certificates.iter().all(Certificate::is_closed));
    for c in &all.certificates {
        assert_eq!(&Certificate::from_json(&c.to_json()).unwrap(), c);
    }
}

#[test]
fn solve_text_and_json_agree() {
    let text = ok(&["solve", "--lambda-max", "2"]);
    let all: SolveAll =
        serde_json::from_str(&ok(&["solve", "--lambda-max", "2", "--json"])).unwrap();
    let family: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "family:")
        .skip(1)
        .take_while(|l| !l.is_empty())
        .collect();
    let expect: Vec<String> = all
        .family
        .iter()
        .map(|r| format!("{} {} {} {} lambda={}", r.x, r.y, r.k, r.n, r.lambda))
        .collect();
    assert_eq!(family, expect);
    for c in &all.certificates {
        assert!(
            text.contains(&c.to_text()),
            "case {} missing from text",
            c.case
        );
    }
}

#[test]
fn verify_outputs() {
    assert!(ok(&["verify", "2", "5", "1", "3"]).starts_with("valid\n"));
    assert!(ok(&["verify", "3", "5", "1", "3"]).starts_with("invalid"));
    let v: Value =
        serde_json::from_str(&ok(&["verify", "2662", "605", "4", "3", "--json"])).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["a"], 3);
    assert_eq!(v["b"], 2);
    assert_eq!(v["primitive"]["x"], "2");
}

#[test]
fn screen_outputs() {
    assert_eq!(
        ok(&["screen", "--prime", "11", "--exponent", "5"]).trim(),
        "excluded: congruence contradiction"
    );
    let v: Value = serde_json::from_str(&ok(&["screen", "--exponent", "7", "--json"])).unwrap();
    assert_eq!(v["verdict"]["excluded"], true);
    let carm = ok(&["screen", "--carmichael-d", "2"]);
    assert!(carm.starts_with("excluded"));
    assert!(carm.contains("X_12 = 19601"));
}

#[test]
fn search_text_and_json_agree() {
    let args = ["search", "--x-max", "3000", "--k-max", "2", "--n-max", "6"];
    let text = ok(&args);
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let v: Value = serde_json::from_str(&ok(&with_json)).unwrap();
    let from_text = oracle::parse_dump(&text).unwrap();
    let from_json: Vec<SolutionTuple> = serde_json::from_value(v["solutions"].clone()).unwrap();
    assert_eq!(from_text, from_json);
    assert_eq!(from_text, vec![tuple("2", "5", 1, 3)]);
    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "4"]);
    assert_eq!(ok(&jobs), text);
}

#[test]
fn lucas_and_pell() {
    let base = ["lucas", "--p", "46", "--q", "1", "--tm1", "-1", "--t0", "1"];
    let mut term = base.to_vec();
    term.extend(["--term", "5"]);
    assert_eq!(ok(&term).trim(), "210044879");
    let mut zeros = base.to_vec();
    zeros.extend(["--zeros", "11"]);
    assert!(ok(&zeros).contains("zero classes 5 mod 11"));
    let pell = ok(&["pell", "--d", "33", "--n", "3", "--count", "3"]);
    assert!(pell.contains("fundamental unit: 23 4 norm 1"));
    assert!(pell.contains("\n270 47\n"));
}

#[test]
fn invalid_input_exit_codes() {
    for args in [
        &["verify", "0", "5", "1", "3"][..],
        &["verify", "2", "5", "1", "x"],
        &["solve"],
        &["nonsense"],
        &["search", "--x-max", "10", "--k-max", "1", "--n-max", "2"],
        &["screen", "--exponent", "6"],
        &["pell", "--d", "16", "--count", "2"],
        &[
            "lucas", "--p", "3", "--q", "2", "--tm1", "0", "--t0", "1", "--mod", "0",
        ],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_INVALID, "{args:?} -> {out}");
        assert!(!err.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["--version"]).0, EXIT_OK);
}

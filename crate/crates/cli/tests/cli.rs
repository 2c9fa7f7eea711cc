use std::path::PathBuf;
use std::process::{Command, Output};

fn polyspan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyspan"))
        .args(args)
        .output()
        .unwrap()
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../goldens")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn compose_writes_the_golden_composite() {
    let out = polyspan(&[
        "compose",
        "--kind",
        "set",
        &golden("a2.json"),
        &golden("b3.json"),
    ]);
    assert!(out.status.success());
    assert_eq!(
        out.stdout,
        std::fs::read(golden("a2_after_b3.json")).unwrap()
    );

    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("composite.json");
    let out = polyspan(&[
        "compose",
        "--kind",
        "set",
        &golden("a_plus_1.json"),
        &golden("b_plus_1.json"),
        "-o",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read(&target).unwrap(),
        std::fs::read(golden("a_plus_1_after_b_plus_1.json")).unwrap()
    );
}

#[test]
fn compose_of_every_kind_is_deterministic() {
    for (kind, seeds) in [
        ("set", ["polynomial", "polynomial"]),
        ("rel", ["rel", "rel"]),
        ("mod", ["mod", "mod"]),
    ] {
        for seed in 0..4 {
            let text = |k: &str, s: u64| {
                String::from_utf8(
                    polyspan(&["random", "--kind", k, "--seed", &s.to_string()]).stdout,
                )
                .unwrap()
            };
            let lhs = scratch(&format!("{kind}_{seed}_lhs.json"), &text(seeds[0], seed));
            let rhs = scratch(&format!("{kind}_{seed}_rhs.json"), &text(seeds[1], seed));
            let a = polyspan(&["compose", "--kind", kind, &lhs, &rhs]);
            let b = polyspan(&["compose", "--kind", kind, &lhs, &rhs]);
            assert_eq!(a.stdout, b.stdout);
            // Random instances are not always composable; mismatches are input errors.
            match a.status.code() {
                Some(0) => assert!(a.stdout.starts_with(b"{\n  \"version\": \"1\"")),
                Some(2) => assert!(String::from_utf8_lossy(&a.stderr).contains("mismatch")),
                code => panic!("unexpected exit {code:?}"),
            }
        }
    }
}

#[test]
fn eval_of_the_identity_returns_the_family() {
    let id = scratch("identity.json", "{\"version\":\"1\",\"kind\":\"polynomial\",\"payload\":{\"x\":2,\"e\":2,\"s\":2,\"y\":2,\"m1\":[0,1],\"m2\":[0,1],\"p\":[0,1]}}");
    let fam = scratch(
        "family.json",
        "{\"version\":\"1\",\"kind\":\"family\",\"payload\":{\"base\":2,\"proj\":[0,1,1]}}",
    );
    let out = polyspan(&["eval", &id, &fam]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"proj\": [0, 1, 1]"), "{text}");
}

#[test]
fn input_errors_exit_with_two() {
    let bad = scratch(
        "bad.json",
        "{\n  \"version\": \"1\",\n  \"kind\": \"polynomial\",\n  \"payload\": {\"x\": }\n}\n",
    );
    let out = polyspan(&["compose", "--kind", "set", &bad, &golden("a2.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let out = polyspan(&[
        "compose",
        "--kind",
        "rel",
        &golden("a2.json"),
        &golden("b3.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind mismatch"));

    let broken = scratch(
        "broken.json",
        "{\"version\":\"1\",\"kind\":\"finset-map\",\"payload\":{\"dom\":2,\"cod\":1,\"table\":[0,3]}}",
    );
    let out = polyspan(&["eval", &golden("a2.json"), &broken]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(
        polyspan(&["eval", "/nonexistent/p.json", &broken])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(polyspan(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(
        polyspan(&["random", "--kind", "nothing"]).status.code(),
        Some(2)
    );
    assert_eq!(
        polyspan(&["compose", "--kind", "poset", "a", "b"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_passes_and_is_byte_deterministic() {
    let a = polyspan(&["check", "distributivity", "--seed", "42", "--count", "200"]);
    assert_eq!(a.status.code(), Some(0));
    let b = polyspan(&["check", "distributivity", "--seed", "42", "--count", "200"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        String::from_utf8(a.stdout).unwrap(),
        "distributivity seed=42 count=200: PASS (0 failed)\n"
    );
}

#[test]
fn random_is_byte_deterministic() {
    for kind in polyspan::commands::RANDOM_KINDS {
        let a = polyspan(&["random", "--kind", kind, "--seed", "9"]);
        let b = polyspan(&["random", "--kind", kind, "--seed", "9"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

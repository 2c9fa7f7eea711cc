//! Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use polyspan::check::{goldens, run_suite, suite};

const SEED: u64 = 42;

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../goldens")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn binary(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_polyspan"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

/// The golden bytes reproduced by the binary itself, twice each.
fn binary_goldens() -> Result<(), String> {
    let composites = [
        ("a2.json", "b3.json", goldens::A2_AFTER_B3),
        (
            "a_plus_1.json",
            "b_plus_1.json",
            goldens::A_PLUS_1_AFTER_B_PLUS_1,
        ),
    ];
    for (lhs, rhs, want) in composites {
        for _ in 0..2 {
            let got = binary(&["compose", "--kind", "set", &golden(lhs), &golden(rhs)])?;
            if got != want.as_bytes() {
                return Err(format!("{lhs} after {rhs} differs from its golden"));
            }
        }
    }
    for (kind, seed, want) in goldens::RANDOM {
        for _ in 0..2 {
            let got = binary(&["random", "--kind", kind, "--seed", &seed.to_string()])?;
            if got != want.as_bytes() {
                return Err(format!("random {kind} seed {seed} differs from its golden"));
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria = [
        "extension-oracle",
        "distributivity",
        "charleftadj",
        "rel-kleisli",
        "grothendieck",
        "comprehensive",
        "gfib-cotensor",
        "mod-hk",
        "rel-hk",
        "discrete-reduction",
        "cli-determinism",
    ];
    let mut failed = Vec::new();
    for (i, name) in criteria.iter().enumerate() {
        let start = Instant::now();
        let report = run_suite(name, SEED, suite(name).unwrap().default_count).unwrap();
        let mut ok = report.passed();
        let mut detail = String::new();
        if !ok {
            detail = report.render();
        }
        if *name == "cli-determinism" {
            if let Err(e) = binary_goldens() {
                ok = false;
                detail.push_str(&e);
            }
        }
        println!(
            "criterion {:>2} {:<20} {} ({} cases, {:.2?})",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            report.count,
            start.elapsed()
        );
        if !ok {
            println!("{detail}");
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

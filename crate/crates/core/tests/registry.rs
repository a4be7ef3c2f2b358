//! Whole-corpus properties of the check registry.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use warpfield_core::report::{Expectation, ResidualReport, Verdict};
use warpfield_core::suite::{census, corpus, registry_cases, run_corpus, SuiteConfig, MIN_SAMPLES};
use warpfield_core::Manifest;

fn manifests() -> &'static [Manifest] {
    static ALL: OnceLock<Vec<Manifest>> = OnceLock::new();
    ALL.get_or_init(|| corpus::load_all().unwrap())
}

fn reports() -> &'static [ResidualReport] {
    static R: OnceLock<Vec<ResidualReport>> = OnceLock::new();
    R.get_or_init(|| run_corpus(manifests(), &SuiteConfig::default()))
}

#[test]
fn every_numbered_result_is_covered() {
    let ids = census::registered_ids(manifests());
    let missing = census::uncovered(&ids);
    assert!(missing.is_empty(), "uncovered: {missing:?}");
    assert!(!census::render(&ids).contains("MISSING"));
}

#[test]
fn every_check_meets_its_expectation() {
    let bad: Vec<String> = reports()
        .iter()
        .filter(|r| !r.as_expected())
        .map(|r| {
            format!(
                "{} {} {} {:?} max={:e}",
                r.check, r.manifest, r.case, r.verdict, r.max_abs
            )
        })
        .collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn no_pass_is_vacuous() {
    for r in reports().iter().filter(|r| r.verdict == Verdict::Pass) {
        assert!(
            r.samples >= MIN_SAMPLES,
            "{} {} {}: {} samples",
            r.check,
            r.manifest,
            r.case,
            r.samples
        );
    }
}

#[test]
fn sufficiency_checks_have_failing_controls() {
    let registered: BTreeSet<(String, String)> = manifests()
        .iter()
        .flat_map(|m| {
            registry_cases(m)
                .into_iter()
                .map(|c| (c.id, m.name.clone()))
        })
        .collect();
    // Per-i and restricted variants (`4.7.4i`, `4.9.2r`) share a statement.
    let statement = |id: &str| match id.rfind(|c: char| c.is_ascii_digit()) {
        Some(k) => id[..=k].to_string(),
        None => id.to_string(),
    };
    let mut table: BTreeMap<String, (bool, bool)> = BTreeMap::new();
    for r in reports() {
        if !registered.contains(&(r.check.clone(), r.manifest.clone())) {
            continue;
        }
        let e = table.entry(statement(&r.check)).or_default();
        if r.expected == Expectation::Holds {
            e.0 = true;
        } else if r.verdict == Verdict::Fail {
            e.1 = true;
        }
    }
    // Definitions of spacetime families are constructions, not implications.
    let exempt = ["Def3.19", "Def3.23", "Def6.16", "Sectional"];
    let lacking: Vec<&String> = table
        .iter()
        .filter(|(id, (holds, fails))| *holds && !*fails && !exempt.contains(&id.as_str()))
        .map(|(id, _)| id)
        .collect();
    assert!(lacking.is_empty(), "no failing control for {lacking:?}");
}

#[test]
fn reports_are_deterministic() {
    let cfg = SuiteConfig::default();
    let pick: Vec<Manifest> = manifests()
        .iter()
        .filter(|m| ["grw_exp", "mw2_fiber", "torus"].contains(&m.name.as_str()))
        .cloned()
        .collect();
    let a = run_corpus(&pick, &cfg);
    let b = run_corpus(&pick, &cfg);
    let json = |r: &[ResidualReport]| serde_json::to_string(r).unwrap();
    assert_eq!(json(&a), json(&b));
}

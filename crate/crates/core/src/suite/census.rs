//! Coverage table: every numbered result of the theory sections mapped to
//! the check ids exercising it.

use std::collections::BTreeSet;

use crate::manifest::Manifest;

use super::all_cases;

/// One numbered result and the checks that cover it.
#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub result: &'static str,
    /// Check id prefixes; `Prop3.17` covers `Prop3.17.1` and so on.
    pub checks: &'static [&'static str],
    /// What is deliberately left unchecked, if anything.
    pub limits: Option<&'static str>,
}

const fn e(result: &'static str, checks: &'static [&'static str]) -> Entry {
    Entry {
        result,
        checks,
        limits: None,
    }
}

const fn lim(result: &'static str, checks: &'static [&'static str], limits: &'static str) -> Entry {
    Entry {
        result,
        checks,
        limits: Some(limits),
    }
}

const COMPACT: &str = "compactness is modeled by periodic charts and not verified";

pub const TABLE: &[Entry] = &[
    e("Lemma3.1", &["Lemma3.1"]),
    e("Lemma3.2", &["Lemma3.2"]),
    e("Lemma3.3", &["Eq4"]),
    e("Def3.4", &["Def3.4"]),
    e("Def3.5", &["Def3.5"]),
    e("Def3.6", &["Def3.6"]),
    e("Lemma3.7", &["Lemma3.7"]),
    e("Lemma3.8", &["Lemma3.8"]),
    e("Remark3.9", &["Remark3.9"]),
    e("Prop3.10", &["Prop3.10"]),
    e("Remark3.11", &["Remark3.11"]),
    e("Example3.12", &["Example3.12"]),
    e("Prop3.13", &["Eq10"]),
    e("Prop3.14", &["Eq11"]),
    e("Cor3.15", &["Eq12"]),
    e("Cor3.16", &["Eq13"]),
    e("Prop3.17", &["Prop3.17"]),
    e("Prop3.18", &["Prop3.18"]),
    e("Def3.19", &["Def3.19"]),
    e("Prop3.20", &["Prop3.20"]),
    e("Prop3.21", &["Prop3.21"]),
    e("Prop3.22", &["Prop3.22"]),
    e("Def3.23", &["Def3.23"]),
    e("Prop3.24", &["Prop3.24"]),
    e("Lemma4.1", &["Lemma4.1"]),
    e("Lemma4.2", &["Lemma4.2"]),
    e("Prop4.3", &["Eq14"]),
    e("Prop4.4", &["Eq15"]),
    e("Cor4.5", &["Eq16"]),
    e("Cor4.6", &["Eq17"]),
    e("Prop4.7", &["Prop4.7"]),
    e("Prop4.8", &["Prop4.8"]),
    e("Prop4.9", &["Prop4.9"]),
    e("Prop4.10", &["Prop4.10"]),
    e("Prop5.1", &["Eq18"]),
    e("Cor5.2", &["Eq19"]),
    e("Prop5.3", &["Prop5.3"]),
    e("Prop5.4", &["Prop5.4"]),
    e("Def6.1", &["Def6.1"]),
    e("Prop6.2", &["Eq21"]),
    e("Cor6.3", &["Eq22"]),
    e("Lemma6.4", &["Lemma6.4"]),
    e("Cor6.5", &["Cor6.5"]),
    lim("Lemma6.6", &["Lemma6.6"], COMPACT),
    e("Lemma6.7", &["Lemma6.7"]),
    e("Prop6.8", &["Eq25"]),
    e("Cor6.9", &["Cor6.9"]),
    e("Cor6.10", &["Cor6.10"]),
    e("Cor6.11", &["Cor6.11"]),
    e("Prop6.12", &["Eq27"]),
    lim("Thm6.13", &["Thm6.13"], COMPACT),
    lim(
        "Thm6.14",
        &["Thm6.14"],
        "only the pointwise consequence at a plane; no transport along curves",
    ),
    e("Prop6.15", &["Prop6.15"]),
    e("Def6.16", &["Def6.16"]),
    e("Prop6.17", &["Prop6.17"]),
];

/// Whether check `id` falls under `prefix`.
pub fn covers(prefix: &str, id: &str) -> bool {
    id == prefix
        || id
            .strip_prefix(prefix)
            .is_some_and(|rest| rest.starts_with('.'))
}

/// Check ids registered for the given manifests.
pub fn registered_ids(manifests: &[Manifest]) -> BTreeSet<String> {
    manifests.iter().flat_map(all_cases).map(|c| c.id).collect()
}

/// `(result, prefix)` pairs with no registered check under the prefix.
pub fn uncovered(ids: &BTreeSet<String>) -> Vec<(&'static str, &'static str)> {
    TABLE
        .iter()
        .flat_map(|e| e.checks.iter().map(move |p| (e.result, *p)))
        .filter(|(_, p)| !ids.iter().any(|id| covers(p, id)))
        .collect()
}

/// Plain-text table of results, covering checks and limits.
pub fn render(ids: &BTreeSet<String>) -> String {
    let mut s = String::new();
    for e in TABLE {
        let mut found: Vec<&str> = ids
            .iter()
            .filter(|id| e.checks.iter().any(|p| covers(p, id)))
            .map(String::as_str)
            .collect();
        found.sort_by(|a, b| super::natural_cmp(a, b));
        let status = if found.is_empty() {
            "MISSING"
        } else {
            "checked"
        };
        s.push_str(&format!(
            "{:<12} {:<8} {}",
            e.result,
            status,
            found.join(" ")
        ));
        if let Some(l) = e.limits {
            s.push_str(&format!("  [{l}]"));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_matching() {
        assert!(covers("Prop3.17", "Prop3.17.2"));
        assert!(covers("Eq4", "Eq4"));
        assert!(!covers("Eq4", "Eq42"));
        assert!(!covers("Prop4.1", "Prop4.10.1"));
    }

    #[test]
    fn results_listed_once() {
        let set: BTreeSet<_> = TABLE.iter().map(|e| e.result).collect();
        assert_eq!(set.len(), TABLE.len());
    }
}

//! Report rendering. Text is line-oriented; JSON keeps all group orders as
//! decimal strings so no consumer depends on an integer width. Both formats
//! are byte-deterministic for a given input and seed.

use std::path::Path;

use serde_json::{json, Value};

use pab_core::{AbelianType, ConcreteGroup, LemmaReport, PcPresentation, Report};

use crate::ReportScope;

fn type_strings(t: &AbelianType) -> Vec<String> {
    t.factors().iter().map(|f| f.to_string()).collect()
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

pub(crate) fn analysis_json(path: &Path, report: &Report) -> Value {
    let methods: serde_json::Map<String, Value> = report
        .methods
        .iter()
        .map(|(m, t)| (m.name().to_string(), json!(type_strings(t))))
        .collect();
    // The agreed value, when there is one.
    let abelianization = report
        .agreement
        .then(|| report.methods.values().next())
        .flatten()
        .map(type_strings);
    json!({
        "file": path.display().to_string(),
        "group_order": report.group_order.to_string(),
        "prime": report.prime,
        "case": report.case.to_string(),
        "frattini_ab": type_strings(&report.frattini_ab),
        "abelianization": abelianization,
        "methods": methods,
        "agreement": report.agreement,
        "generalized_extraspecial": report.generalized_extraspecial,
        "violations": [],
        "notices": report.notices,
    })
}

pub(crate) fn analysis_text(
    path: &Path,
    report: &Report,
    scope: ReportScope,
    with_header: bool,
) -> String {
    let mut out = String::new();
    if with_header {
        out.push_str(&format!("file: {}\n", path.display()));
    }
    out.push_str(&format!("group order: {}\n", report.group_order));
    out.push_str(&format!("prime: {}\n", report.prime));
    out.push_str(&format!("case: {}\n", report.case));
    match scope {
        ReportScope::Classify => {
            out.push_str(&format!(
                "generalized extraspecial: {}\n",
                yes_no(report.generalized_extraspecial)
            ));
        }
        ReportScope::FrattiniAb => {
            out.push_str(&format!("frattini(G^ab): {}\n", report.frattini_ab));
        }
        ReportScope::Abelianize | ReportScope::Compare => {
            out.push_str(&format!(
                "generalized extraspecial: {}\n",
                yes_no(report.generalized_extraspecial)
            ));
            out.push_str(&format!("frattini(G^ab): {}\n", report.frattini_ab));
            for (method, t) in &report.methods {
                out.push_str(&format!("G^ab[{}]: {}\n", method, t));
            }
            if scope == ReportScope::Compare || report.methods.len() > 1 {
                out.push_str(&format!("agreement: {}\n", yes_no(report.agreement)));
            }
        }
    }
    out
}

pub(crate) fn validate_json(path: &Path, valid: bool, violations: &[String]) -> Value {
    json!({
        "file": path.display().to_string(),
        "valid": valid,
        "violations": violations,
    })
}

pub(crate) fn lemmas_json(
    path: &Path,
    pres: &PcPresentation,
    group: &ConcreteGroup,
    report: &LemmaReport,
) -> Value {
    let violations: Vec<String> = report
        .violations
        .iter()
        .map(|v| lemma_violation_line(group, v))
        .collect();
    json!({
        "file": path.display().to_string(),
        "group_order": pres.group_order().to_string(),
        "prime": pres.prime(),
        "pairs_checked": report.pairs_checked,
        "exhaustive": report.exhaustive,
        "rng": "chacha8",
        "seed": report.seed,
        "violations": violations,
    })
}

pub(crate) fn lemmas_text(
    path: &Path,
    pres: &PcPresentation,
    group: &ConcreteGroup,
    report: &LemmaReport,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("file: {}\n", path.display()));
    out.push_str(&format!("group order: {}\n", pres.group_order()));
    if report.exhaustive {
        out.push_str(&format!(
            "pairs checked: {} (exhaustive)\n",
            report.pairs_checked
        ));
    } else {
        out.push_str(&format!(
            "pairs checked: {} (sampled, rng chacha8, seed {})\n",
            report.pairs_checked, report.seed
        ));
    }
    for v in &report.violations {
        out.push_str(&format!("violation: {}\n", lemma_violation_line(group, v)));
    }
    out.push_str(&format!(
        "lemmas: {}\n",
        if report.passed() { "pass" } else { "FAIL" }
    ));
    out
}

fn lemma_violation_line(group: &ConcreteGroup, v: &pab_core::engine::LemmaViolation) -> String {
    format!(
        "{} fails at x = {}, y = {}",
        v.law.description(),
        group.format_element(&v.x),
        group.format_element(&v.y)
    )
}

pub(crate) fn catalog_json(family: &str, size: u64, pres: &PcPresentation) -> Value {
    json!({
        "family": family,
        "size": size,
        "prime": pres.prime(),
        "group_order": pres.group_order().to_string(),
        "generators": pres.rank(),
        "case": pab_core::detect_case(pres).to_string(),
    })
}

pub(crate) fn catalog_text(family: &str, size: u64, pres: &PcPresentation) -> String {
    format!(
        "family: {} (p = {}, size = {})\ngroup order: {}\ngenerators: {}\ncase: {}\n",
        family,
        pres.prime(),
        size,
        pres.group_order(),
        pres.rank(),
        pab_core::detect_case(pres)
    )
}

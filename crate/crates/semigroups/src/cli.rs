//! Command implementations behind the `sgtool` binary: loading inputs
//! (files or `@name` catalog entries), running checks, computing dominions
//! and certificates, driving the constructions, and emitting run reports.
//!
//! Exit code contract: 0 success, 2 parse/validation failure, 3 violated
//! precondition, 10 proper epimorphic embedding found.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::construct::{
    cs0_enlarge, cs0_verify, cycle_modify, enlarge_automaton, enlargement_report, rees_semigroup,
    ReesMatrixSpec,
};
use crate::dominion::{is_epi_embedding, zigzag_for};
use crate::error::{Error, Result};
use crate::green::{eggbox_dot, GreenData};
use crate::io::{self, AutomatonJson, ReesJson, SemigroupJson};
use crate::pseudo::{self, Satisfaction};
use crate::semigroup::{FiniteSemigroup, Subset};
use crate::suite;
use crate::transform::{transition_semigroup, Semiautomaton};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_EPI_FOUND: i32 = 10;

/// Structured result of one CLI invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub timing_ms: BTreeMap<String, u128>,
    pub version: String,
}

impl RunReport {
    fn new(
        command: String,
        digest: String,
        results: Value,
        timing: BTreeMap<String, u128>,
    ) -> Self {
        RunReport {
            command,
            inputs_digest: digest,
            results,
            timing_ms: timing,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Associativity { .. }
        | Error::EntryOutOfRange { .. }
        | Error::IndexOutOfRange { .. }
        | Error::DuplicateLabel(_)
        | Error::MalformedTable
        | Error::Parse(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::EmptyAlphabet
        | Error::EmptyStateSet => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

/// Loads a semigroup from a path or a catalog name (`@b2`, `@y`, `@c3`,
/// `@rees49`, `@trivial`).
pub fn load_semigroup(input: &str) -> Result<FiniteSemigroup> {
    match input {
        "@b2" => Ok(catalog::b2()),
        "@y" => Ok(catalog::y()),
        "@c3" => Ok(catalog::c3()),
        "@trivial" => Ok(catalog::trivial()),
        "@rees49" => rees_semigroup(&catalog::order49_rees()).map(|(s, _)| s),
        name if name.starts_with('@') => {
            Err(Error::Parse(format!("unknown catalog semigroup {name:?}")))
        }
        path => io::read_semigroup(Path::new(path)),
    }
}

pub fn load_automaton(input: &str) -> Result<Semiautomaton> {
    match input {
        "@fig2" => Ok(catalog::t4_base()),
        "@q3a3" => Ok(catalog::q3a3()),
        name if name.starts_with('@') => {
            Err(Error::Parse(format!("unknown catalog automaton {name:?}")))
        }
        path => io::read_automaton(Path::new(path)),
    }
}

pub fn load_rees(input: &str) -> Result<ReesMatrixSpec> {
    match input {
        "@rees49" => Ok(catalog::order49_rees()),
        "@b2rees" => Ok(catalog::b2_rees()),
        name if name.starts_with('@') => {
            Err(Error::Parse(format!("unknown catalog Rees spec {name:?}")))
        }
        path => io::read_rees(Path::new(path)),
    }
}

fn parse_subset(s: &FiniteSemigroup, text: &str) -> Result<Subset> {
    if text == "all" {
        return Ok(s.full_subset());
    }
    let mut members = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: usize = part
            .parse()
            .map_err(|_| Error::Parse(format!("bad element index {part:?}")))?;
        members.push(v);
    }
    s.subset(members)
}

/// Flags accepted by `check`.
#[derive(Debug, Clone, Default)]
pub struct CheckFlags {
    pub ds: bool,
    pub v1: bool,
    pub v2: bool,
    pub v3: bool,
    pub vy: bool,
    pub cr: bool,
    pub cs: bool,
    pub c0s: bool,
    /// Extra pseudoidentities in textual syntax (`lhs = rhs`).
    pub identities: Vec<String>,
}

impl CheckFlags {
    pub fn any(&self) -> bool {
        self.ds
            || self.v1
            || self.v2
            || self.v3
            || self.vy
            || self.cr
            || self.cs
            || self.c0s
            || !self.identities.is_empty()
    }
}

fn satisfaction_json(s: &FiniteSemigroup, vars: &[String], sat: &Satisfaction) -> Value {
    match sat {
        Satisfaction::Holds => json!({ "holds": true }),
        Satisfaction::Counterexample(assignment) => {
            let witness: BTreeMap<String, String> = vars
                .iter()
                .zip(assignment)
                .map(|(v, &e)| (v.clone(), s.label(e)))
                .collect();
            json!({ "holds": false, "counterexample": witness })
        }
    }
}

pub fn cmd_check(input: &str, flags: CheckFlags, cap: u128) -> Result<(RunReport, i32)> {
    let start = Instant::now();
    let s = load_semigroup(input)?;
    if !flags.any() {
        return Err(Error::Parse(
            "no predicate flags given (try --ds --v1 --v2 --v3 --vy --cr --cs --c0s)".into(),
        ));
    }
    let digest = io::digest(&SemigroupJson::from_semigroup(&s));
    let mut results = serde_json::Map::new();
    let mut timing = BTreeMap::new();

    if flags.ds {
        let t = Instant::now();
        let g = GreenData::compute(&s);
        let value = match pseudo::ds_violation(&s, &g) {
            None => json!({ "holds": true }),
            Some((a, b)) => json!({
                "holds": false,
                "counterexample": { "a": s.label(a), "b": s.label(b) }
            }),
        };
        results.insert("ds".into(), value);
        timing.insert("ds".into(), t.elapsed().as_millis());
    }
    let identity_checks: [(&str, bool, fn() -> pseudo::Pseudoidentity); 3] = [
        ("v1", flags.v1, pseudo::v1_identity),
        ("v2", flags.v2, pseudo::v2_identity),
        ("v3", flags.v3, pseudo::v3_identity),
    ];
    for (name, enabled, make) in identity_checks {
        if !enabled {
            continue;
        }
        let t = Instant::now();
        let id = make();
        let sat = pseudo::satisfies(&s, &id, cap)?;
        results.insert(name.into(), satisfaction_json(&s, &id.variables, &sat));
        timing.insert(name.into(), t.elapsed().as_millis());
    }
    if flags.vy {
        let t = Instant::now();
        let mut value = json!({ "holds": true });
        for id in pseudo::vy_identities() {
            match pseudo::satisfies(&s, &id, cap)? {
                Satisfaction::Holds => {}
                sat => {
                    let mut v = satisfaction_json(&s, &id.variables, &sat);
                    v["identity"] = json!(id.to_string());
                    value = v;
                    break;
                }
            }
        }
        results.insert("vy".into(), value);
        timing.insert("vy".into(), t.elapsed().as_millis());
    }
    if flags.cr {
        results.insert(
            "cr".into(),
            json!({ "holds": crate::green::is_completely_regular(&s) }),
        );
    }
    if flags.cs {
        results.insert(
            "cs".into(),
            json!({ "holds": crate::green::is_completely_simple(&s) }),
        );
    }
    if flags.c0s {
        results.insert(
            "c0s".into(),
            json!({ "holds": crate::green::is_completely_0_simple(&s) }),
        );
    }
    for text in &flags.identities {
        let t = Instant::now();
        let id = pseudo::parse_identity(text)?;
        let sat = pseudo::satisfies(&s, &id, cap)?;
        let mut value = satisfaction_json(&s, &id.variables, &sat);
        value["identity"] = json!(id.to_string());
        results.insert(format!("identity:{text}"), value);
        timing.insert(format!("identity:{text}"), t.elapsed().as_millis());
    }
    timing.insert("total".into(), start.elapsed().as_millis());
    let report = RunReport::new(
        format!("check {input}"),
        digest,
        Value::Object(results),
        timing,
    );
    Ok((report, EXIT_OK))
}

pub fn cmd_dominion(
    input: &str,
    subset_spec: &str,
    witness: Option<usize>,
    restrict: Option<&str>,
) -> Result<(RunReport, i32)> {
    let start = Instant::now();
    let s = load_semigroup(input)?;
    let u = parse_subset(&s, subset_spec)?;
    let restrict = restrict.map(|r| parse_subset(&s, r)).transpose()?;
    let digest = io::digest(&SemigroupJson::from_semigroup(&s));

    let epi = is_epi_embedding(&s, &u)?;
    let mut results = json!({
        "subset": u.as_slice(),
        "dominion": epi.dominion.as_slice(),
        "dominion_labels": epi.dominion.iter().map(|&x| s.label(x)).collect::<Vec<_>>(),
        "epi": epi.epi,
        "proper": epi.proper,
    });
    if let Some(d) = witness {
        let cert = zigzag_for(&s, &u, d, restrict.as_ref())?;
        results["witness"] = match cert {
            Some(c) => serde_json::to_value(&c)?,
            None => Value::Null,
        };
    }
    let mut timing = BTreeMap::new();
    timing.insert("total".into(), start.elapsed().as_millis());
    let code = if epi.epi && epi.proper {
        EXIT_EPI_FOUND
    } else {
        EXIT_OK
    };
    let report = RunReport::new(format!("dominion {input}"), digest, results, timing);
    Ok((report, code))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructKind {
    Rees,
    Cs0,
    Enlarge,
    CycleModify,
}

pub fn cmd_construct(kind: ConstructKind, input: &str, out_dir: &Path) -> Result<(RunReport, i32)> {
    let start = Instant::now();
    std::fs::create_dir_all(out_dir)?;
    let mut timing = BTreeMap::new();
    let (digest, results, files): (String, Value, Vec<PathBuf>) = match kind {
        ConstructKind::Rees => {
            let spec = load_rees(input)?;
            let digest = io::digest(&ReesJson::from_spec(&spec));
            let (s, _) = rees_semigroup(&spec)?;
            let path = out_dir.join("rees.semigroup.json");
            io::write_json(&path, &SemigroupJson::from_semigroup(&s))?;
            (
                digest,
                json!({ "order": s.order(), "zero": s.zero() }),
                vec![path],
            )
        }
        ConstructKind::Cs0 => {
            let spec = load_rees(input)?;
            let digest = io::digest(&ReesJson::from_spec(&spec));
            let enl = cs0_enlarge(&spec)?;
            let report = cs0_verify(&spec, &enl)?;
            let t_path = out_dir.join("cs0.T.semigroup.json");
            io::write_json(&t_path, &SemigroupJson::from_semigroup(&enl.t))?;
            let results = json!({
                "t_order": enl.t.order(),
                "u_order": enl.u.len(),
                "u": enl.u.as_slice(),
                "embed": enl.embed,
                "lambda0": enl.lambda0,
                "report": serde_json::to_value(&report)?,
                "all_pass": report.all_pass(),
            });
            (digest, results, vec![t_path])
        }
        ConstructKind::Enlarge => {
            let base = load_automaton(input)?;
            let digest = io::digest(&AutomatonJson::from_automaton(&base));
            let enl = enlarge_automaton(&base);
            let report = enlargement_report(&base);
            let path = out_dir.join("enlarged.automaton.json");
            io::write_json(&path, &AutomatonJson::from_automaton(&enl.enlarged))?;
            let results = json!({
                "base_order": report.base_order,
                "enlarged_order": report.enlarged_order,
                "u_order": report.u_order,
                "report": serde_json::to_value(&report)?,
                "all_pass": report.all_applicable_pass(),
            });
            (digest, results, vec![path])
        }
        ConstructKind::CycleModify => {
            let base = load_automaton(input)?;
            let digest = io::digest(&AutomatonJson::from_automaton(&base));
            let modified = cycle_modify(&base);
            let path = out_dir.join("cycle-modified.automaton.json");
            io::write_json(&path, &AutomatonJson::from_automaton(&modified))?;
            let ts = transition_semigroup(&modified);
            (
                digest,
                json!({ "transition_order": ts.semigroup.order() }),
                vec![path],
            )
        }
    };
    timing.insert("total".into(), start.elapsed().as_millis());
    let mut results = results;
    results["files"] = json!(files
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>());
    let report = RunReport::new(format!("construct {input}"), digest, results, timing);
    Ok((report, EXIT_OK))
}

pub fn cmd_reproduce(quick: bool, seed: u64) -> Result<(RunReport, i32)> {
    let start = Instant::now();
    let outcomes = suite::run_all(quick, seed);
    let all_pass = outcomes.iter().all(|o| o.pass());
    let results = json!({
        "criteria": outcomes.iter().map(|o| json!({
            "id": o.id,
            "title": o.title,
            "pass": o.pass(),
            "skipped": o.skipped,
            "checks": o.checks,
            "notes": o.notes,
            "millis": o.millis,
        })).collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    let mut timing = BTreeMap::new();
    timing.insert("total".into(), start.elapsed().as_millis());
    let digest = io::digest(&json!({ "quick": quick, "seed": seed }));
    let report = RunReport::new("reproduce".into(), digest, results, timing);
    Ok((report, if all_pass { EXIT_OK } else { EXIT_FAIL }))
}

pub fn cmd_eggbox(input: &str, dclass: Option<usize>) -> Result<(String, i32)> {
    let s = load_semigroup(input)?;
    let g = GreenData::compute(&s);
    if let Some(k) = dclass {
        if k >= g.j_count {
            return Err(Error::IndexOutOfRange {
                index: k,
                order: g.j_count,
            });
        }
    }
    Ok((eggbox_dot(&s, &g, dclass), EXIT_OK))
}

/// Human-readable rendering of a reproduce run.
pub fn render_reproduce_table(report: &RunReport) -> String {
    let mut out = String::new();
    if let Some(criteria) = report.results.get("criteria").and_then(|c| c.as_array()) {
        for c in criteria {
            let id = c["id"].as_u64().unwrap_or(0);
            let title = c["title"].as_str().unwrap_or("");
            let skipped = c["skipped"].as_bool().unwrap_or(false);
            let pass = c["pass"].as_bool().unwrap_or(false);
            let millis = c["millis"].as_u64().unwrap_or(0);
            let status = if skipped {
                "SKIP"
            } else if pass {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!("criterion {id}: {status} ({millis} ms) {title}\n"));
            if let Some(checks) = c["checks"].as_array() {
                for ch in checks {
                    let name = ch["name"].as_str().unwrap_or("");
                    let ok = ch["pass"].as_bool().unwrap_or(false);
                    out.push_str(&format!("  [{}] {name}\n", if ok { "ok" } else { "FAIL" }));
                }
            }
            if let Some(notes) = c["notes"].as_array() {
                for n in notes {
                    if let Some(text) = n.as_str() {
                        out.push_str(&format!("  note: {text}\n"));
                    }
                }
            }
        }
    }
    let all = report.results["all_pass"].as_bool().unwrap_or(false);
    out.push_str(if all {
        "all criteria pass\n"
    } else {
        "FAILURES present\n"
    });
    out
}

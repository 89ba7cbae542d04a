//! Subcommand implementations: each returns its manifest and outcome.

use std::collections::BTreeMap;
use std::path::Path;

use itertools::Itertools;
use serde_json::{json, Value};

use dplab_core::classes::{e7_classes, format_orbit_types, sato_tate_degree, table_e6, ClassRecord};
use dplab_core::gf::{field_from_order, prime_power, size_bound, FieldSpec};
use dplab_core::search::{
    find_config, prove_nonexistence, trace_table, DegreePartition, SearchOptions, SearchResult, SearchStatus,
    TraceStatus, TraceTableRow,
};
use dplab_core::selftest::{run_criterion, SelftestOptions, CRITERIA};
use dplab_core::surfaces::{
    bertini_twist, conic_bundle_analyze, conic_bundle_from_json, count_points, geiser_twist, parse_coefficient,
    surface_from_json, surface_to_json, twist_parameter, Ambient, FiberKind,
};

use crate::render::witness_summary;
use crate::{CliError, Command, Outcome, Root, RunManifest, SearchFlags, Status};

fn manifest(command: &str, parameters: Value, seed: Option<u64>, budgets: Value) -> RunManifest {
    let mut parameters: BTreeMap<String, Value> = match parameters {
        Value::Object(m) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    parameters.insert("size_bound".into(), json!(size_bound()));
    let budgets = match budgets {
        Value::Object(m) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    let versions = [("dplab".to_string(), dplab_core::VERSION.to_string()), ("artifact".to_string(), "1".to_string())].into();
    RunManifest { command: command.to_string(), parameters, seed, budgets, versions }
}

fn search_options(f: &SearchFlags) -> SearchOptions {
    SearchOptions { budget: f.budget, test_budget: f.test_budget, seed: f.seed, long: f.long, checkpoint: f.checkpoint.clone() }
}

fn budgets(f: &SearchFlags) -> Value {
    json!({ "random_trials": f.budget, "tests": f.test_budget, "long": f.long })
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(format!("serialization: {e}")))
}

fn field(q: &str) -> Result<FieldSpec, CliError> {
    Ok(field_from_order(q)?)
}

pub fn execute(cmd: &Command) -> Result<(RunManifest, Outcome), CliError> {
    match cmd {
        Command::Search { q, partition, exhaustive, flags } => search(q, partition, *exhaustive, flags),
        Command::TraceTable { degree, qmax, q, flags } => trace(*degree, *qmax, q.as_deref(), flags),
        Command::Table { root } => table(*root),
        Command::SatoTate { degree } => sato(*degree),
        Command::Count { surface } => count(surface),
        Command::Twist { surface, alpha } => twist(surface, alpha.as_deref()),
        Command::ConicBundle { bundle } => conic(bundle),
        Command::Selftest { long, only } => selftest(*long, only),
    }
}

fn search_row(q: &FieldSpec, p: &DegreePartition, r: &SearchResult) -> Vec<String> {
    let (status, detail) = match &r.status {
        SearchStatus::Found { config } => ("found", config.to_json()),
        SearchStatus::NotFound { certificate } => {
            ("not_found", format!("{} ({} levels, {} nodes)", certificate.method, certificate.levels.len(), certificate.nodes))
        }
        SearchStatus::Inconclusive { reason } => ("inconclusive", reason.clone()),
    };
    vec![
        q.to_string(),
        p.to_string(),
        status.to_string(),
        r.stats.trials.to_string(),
        r.stats.nodes.to_string(),
        r.stats.tests.to_string(),
        detail,
    ]
}

fn search(q: &str, partition: &str, exhaustive: bool, flags: &SearchFlags) -> Result<(RunManifest, Outcome), CliError> {
    let f = field(q)?;
    let p: DegreePartition = partition.parse()?;
    let opts = search_options(flags);
    let r = if exhaustive { prove_nonexistence(&f, &p, &opts)? } else { find_config(&f, &p, &opts)? };
    let status = if matches!(r.status, SearchStatus::Inconclusive { .. }) { Status::Incomplete } else { Status::Ok };
    let m = manifest(
        "search",
        json!({ "q": f.to_string(), "partition": p.to_string(), "exhaustive": exhaustive }),
        Some(flags.seed),
        budgets(flags),
    );
    let headers = ["q", "partition", "status", "trials", "nodes", "tests", "detail"].map(String::from).to_vec();
    let rows = vec![search_row(&f, &p, &r)];
    Ok((m, Outcome { result: to_value(&r)?, preface: vec![format!("# search over F_{}", f.order())], headers, rows, status }))
}

fn trace_rows(rows: &[TraceTableRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.degree.to_string(),
                r.q.to_string(),
                r.trace.to_string(),
                to_value(&r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                r.count.map_or("-".into(), |c| c.to_string()),
                witness_summary(&r.witness),
            ]
        })
        .collect()
}

fn trace(degree: u32, qmax: Option<u64>, q: Option<&str>, flags: &SearchFlags) -> Result<(RunManifest, Outcome), CliError> {
    let fields: Vec<FieldSpec> = match (qmax, q) {
        (Some(m), _) => (2..=m).filter(|&q| prime_power(q).is_some()).map(|q| field(&q.to_string())).try_collect()?,
        (None, Some(q)) => vec![field(q)?],
        (None, None) => return Err(CliError::Usage("give --qmax or --q".into())),
    };
    let opts = search_options(flags);
    let mut all = Vec::new();
    for f in &fields {
        all.extend(trace_table(degree, f, &opts)?);
    }
    let unknown = all.iter().filter(|r| r.status == TraceStatus::Unknown).count();
    let status = if unknown > 0 { Status::Incomplete } else { Status::Ok };
    let m = manifest(
        "trace-table",
        json!({ "degree": degree, "fields": fields.iter().map(|f| f.to_string()).collect::<Vec<_>>() }),
        Some(flags.seed),
        budgets(flags),
    );
    let headers = ["degree", "q", "a", "status", "points", "witness"].map(String::from).to_vec();
    let mut preface = vec![format!("# traces of degree {degree} del Pezzo surfaces")];
    for f in &fields {
        let absent = all.iter().filter(|r| r.q == f.order() && r.status == TraceStatus::Absent).map(|r| r.trace).collect_vec();
        preface.push(format!("- q = {}: absent {:?}", f.order(), absent));
    }
    if unknown > 0 {
        preface.push(format!("- {unknown} rows undecided"));
    }
    let rows = trace_rows(&all);
    Ok((m, Outcome { result: json!({ "rows": to_value(&all)? }), preface, headers, rows, status }))
}

fn class_rows(recs: &[ClassRecord], root: Root) -> (Vec<String>, Vec<Vec<String>>) {
    match root {
        Root::E6 => {
            let headers = ["class", "no.", "index", "order", "mu^-1", "eigenvalues", "a", "H^1", "orbit type", "blow down", "blow up"];
            let rows = recs
                .iter()
                .map(|r| {
                    vec![
                        r.frame.clone().unwrap_or_default(),
                        r.number.to_string(),
                        r.index.map_or("-".into(), |i| i.to_string()),
                        r.order.to_string(),
                        r.measure_inverse.to_string(),
                        r.eigenvalues.to_string(),
                        r.trace.to_string(),
                        r.h1_string(),
                        format_orbit_types(&r.orbit_types),
                        r.blow_down.clone().unwrap_or_default(),
                        r.e7_match.as_ref().and_then(|m| m.urabe).map_or("-".into(), |u| u.to_string()),
                    ]
                })
                .collect();
            (headers.map(String::from).to_vec(), rows)
        }
        Root::E7 => {
            let headers = ["no.", "size", "order", "mu^-1", "eigenvalues", "a", "H^1", "fixed lines"];
            let rows = recs
                .iter()
                .map(|r| {
                    vec![
                        r.number.to_string(),
                        r.size.to_string(),
                        r.order.to_string(),
                        r.measure_inverse.to_string(),
                        r.eigenvalues.to_string(),
                        r.trace.to_string(),
                        r.h1_string(),
                        r.fixed_lines.to_string(),
                    ]
                })
                .collect();
            (headers.map(String::from).to_vec(), rows)
        }
    }
}

fn table(root: Root) -> Result<(RunManifest, Outcome), CliError> {
    let recs: Vec<ClassRecord> = match root {
        Root::E6 => table_e6(true)?,
        Root::E7 => e7_classes()?.as_ref().clone(),
    };
    let (headers, rows) = class_rows(&recs, root);
    let m = manifest("table", json!({ "root": root }), None, json!({}));
    let title = match root {
        Root::E6 => "# conjugacy classes of W(E6)",
        Root::E7 => "# conjugacy classes of W(E7)",
    };
    Ok((m, Outcome { result: json!({ "classes": to_value(&recs)? }), preface: vec![title.into()], headers, rows, status: Status::Ok }))
}

fn sato(degree: u32) -> Result<(RunManifest, Outcome), CliError> {
    let tau = sato_tate_degree(degree)?;
    let entries: Vec<Value> = tau.iter().map(|(a, t)| json!({ "trace": a, "tau": t.to_string() })).collect();
    let rows = tau.iter().map(|(a, t)| vec![a.to_string(), t.to_string()]).collect();
    let m = manifest("sato-tate", json!({ "degree": degree }), None, json!({}));
    Ok((
        m,
        Outcome {
            result: json!({ "degree": degree, "distribution": entries }),
            preface: vec![format!("# limiting trace distribution, degree {degree}")],
            headers: vec!["a".into(), "tau".into()],
            rows,
            status: Status::Ok,
        },
    ))
}

fn count(path: &Path) -> Result<(RunManifest, Outcome), CliError> {
    let s = surface_from_json(&read_input(path)?)?;
    let r = count_points(&s)?;
    let model = surface_to_json(&s);
    let m = manifest("count", json!({ "surface": model }), None, json!({}));
    let trace = r.trace.map_or("-".into(), |a| a.to_string());
    Ok((
        m,
        Outcome {
            result: json!({ "count": to_value(&r)? }),
            preface: vec![format!("# {s}")],
            headers: vec!["q".into(), "points".into(), "a".into()],
            rows: vec![vec![r.q.to_string(), r.count.to_string(), trace]],
            status: Status::Ok,
        },
    ))
}

fn twist(path: &Path, alpha: Option<&str>) -> Result<(RunManifest, Outcome), CliError> {
    let s = surface_from_json(&read_input(path)?)?;
    let alpha = match alpha {
        Some(a) => parse_coefficient(&s.field, a)?,
        None => twist_parameter(&s.field),
    };
    let t = match s.ambient {
        Ambient::P1112 => geiser_twist(&s, alpha)?,
        Ambient::P1123 => bertini_twist(&s, alpha)?,
        Ambient::P2 => return Err(CliError::Usage("twists need a surface in P(1,1,1,2) or P(1,1,2,3)".into())),
    };
    let (rs, rt) = (count_points(&s)?, count_points(&t)?);
    let q = s.q();
    let expected = 2 * (q * q + q + 1);
    let m = manifest(
        "twist",
        json!({ "surface": surface_to_json(&s), "alpha": s.field.element(alpha).to_string() }),
        None,
        json!({}),
    );
    let fmt_a = |a: Option<i64>| a.map_or("-".into(), |a| a.to_string());
    let identity = rs.count + rt.count == expected;
    Ok((
        m,
        Outcome {
            result: json!({
                "twist": surface_to_json(&t),
                "count": to_value(&rs)?,
                "twist_count": to_value(&rt)?,
                "sum": rs.count + rt.count,
                "expected_sum": expected,
            }),
            preface: vec![format!("# {s}"), format!("- twist: {t}"), format!("- sum {} (2(q^2+q+1) = {expected})", rs.count + rt.count)],
            headers: vec!["surface".into(), "points".into(), "a".into()],
            rows: vec![
                vec!["original".into(), rs.count.to_string(), fmt_a(rs.trace)],
                vec!["twist".into(), rt.count.to_string(), fmt_a(rt.trace)],
            ],
            status: if identity { Status::Ok } else { Status::Incomplete },
        },
    ))
}

fn conic(path: &Path) -> Result<(RunManifest, Outcome), CliError> {
    let b = conic_bundle_from_json(&read_input(path)?)?;
    let r = conic_bundle_analyze(&b)?;
    let m = manifest("conic-bundle", json!({ "bundle": dplab_core::surfaces::conic_bundle_to_json(&b) }), None, json!({}));
    let rows = r
        .fibers
        .iter()
        .map(|x| {
            let t = x.t.map_or("inf".into(), |t| b.field.element(t).to_string());
            let kind = if x.kind == FiberKind::Smooth { "smooth" } else { "singular" };
            vec![t, kind.into(), x.points.to_string()]
        })
        .collect();
    let preface = vec![
        format!("# conic bundle over F_{}", r.q),
        format!("- {} points, {} singular rational fibres, a = {}", r.count.count, r.singular_rational, r.trace),
        format!("- singular locus of degree {} (closed points {:?})", r.singular_degree, r.singular_closed_points),
    ];
    Ok((
        m,
        Outcome { result: to_value(&r)?, preface, headers: vec!["t".into(), "fibre".into(), "points".into()], rows, status: Status::Ok },
    ))
}

fn selftest(long: bool, only: &[u32]) -> Result<(RunManifest, Outcome), CliError> {
    if let Some(bad) = only.iter().find(|i| !CRITERIA.iter().any(|(id, _)| id == *i)) {
        return Err(CliError::Usage(format!("no criterion {bad}")));
    }
    let ids: Vec<u32> = CRITERIA.iter().map(|(id, _)| *id).filter(|id| only.is_empty() || only.contains(id)).collect();
    let opts = SelftestOptions { long };
    let reports: Vec<_> = ids.iter().map(|&id| run_criterion(id, &opts)).collect();
    for r in &reports {
        eprintln!("criterion {:2} {}: {} ({:.1?})", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title, r.elapsed);
    }
    let passed = reports.iter().all(|r| r.passed);
    let rows = reports
        .iter()
        .map(|r| {
            let detail = if r.passed { r.notes.join("; ") } else { r.failures.join("; ") };
            vec![r.id.to_string(), if r.passed { "PASS" } else { "FAIL" }.into(), r.title.clone(), detail]
        })
        .collect();
    let m = manifest("selftest", json!({ "criteria": ids, "long": long }), None, json!({}));
    Ok((
        m,
        Outcome {
            result: json!({ "passed": passed, "criteria": to_value(&reports)? }),
            preface: vec!["# acceptance checks".into()],
            headers: vec!["criterion".into(), "result".into(), "title".into(), "detail".into()],
            rows,
            status: if passed { Status::Ok } else { Status::Incomplete },
        },
    ))
}

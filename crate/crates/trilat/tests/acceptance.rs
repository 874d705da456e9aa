//! One line per acceptance criterion. Run with `--nocapture` to see them.
//!
//! A criterion that cannot pass because the published tables contradict
//! themselves is listed in `KNOWN_FAILING` together with the exact cells
//! that fail; the line still reads FAIL, and the test breaks if the set of
//! failing cells changes in either direction.

mod common;

use std::collections::BTreeSet;

use cyclo::Cyclotomic as C;
use trilat::catalog;
use trilat::catalog::Family;
use trilat::classify::{self, Order, DEFAULT_ORDER_CAP};
use trilat::forms::Signature;
use trilat::report::{self, Check, Report, Status, SweepOptions, BRAID_SEARCH_MAX};
use trilat::stabilizer::{ConeOrder, VerifyOptions};

const KNOWN_FAILING: &[(u32, &[&str])] = &[(
    5,
    &[
        "H2-12^5/p5/generators",
        "H2-R1/p2/area",
        "H2-R1/p2/chi",
        "s5-R1/p3/generators",
        "s5-R1/p4/generators",
    ],
)];

struct Outcome {
    n: u32,
    title: &'static str,
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn line(&self) -> String {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {:>2} {:<34} {verdict}  {}", self.n, self.title, self.summary);
        for f in &self.failures {
            s.push_str(&format!("\n    {f}"));
        }
        s
    }
}

fn cells<'a>(reports: &'a [Report], suffixes: &'a [&str]) -> impl Iterator<Item = &'a Check> + 'a {
    reports
        .iter()
        .flat_map(|r| &r.checks)
        .filter(move |c| suffixes.iter().any(|s| c.check_id.ends_with(&format!("/{s}"))))
}

fn failing_ids<'a>(it: impl Iterator<Item = &'a Check>) -> Vec<String> {
    it.filter(|c| c.status == Status::Fail).map(|c| format!("{}: {}", c.check_id, c.details)).collect()
}

fn form_validity() -> Outcome {
    let cat = catalog().unwrap();
    let mut failures = Vec::new();
    let triples = cat.triples();
    for (f, q, p) in &triples {
        let g = match cat.build(*f, q, *p) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("{f}/{q}/p{p}: {e}"));
                continue;
            }
        };
        if g.form.signature != (Signature { pos: 2, null: 0, neg: 1 }) {
            failures.push(format!("{}: signature {}", g.id(), g.form.signature));
        }
        for (j, r) in g.r.iter().enumerate() {
            let h = &g.form.matrix;
            if &(&r.conj_transpose() * h) * r != *h {
                failures.push(format!("{}: R{} does not preserve the form", g.id(), j + 1));
            }
            if r.det() != C::one() {
                failures.push(format!("{}: det R{} = {}", g.id(), j + 1, r.det()));
            }
            if classify::projective_order(r, DEFAULT_ORDER_CAP) != Some(*p) {
                failures.push(format!("{}: R{} does not have order {p}", g.id(), j + 1));
            }
        }
    }
    Outcome { n: 1, title: "form validity", summary: format!("{} groups", triples.len()), failures }
}

fn braid_tables() -> Outcome {
    let cat = catalog().unwrap();
    let mut failures = Vec::new();
    let mut count = 0;
    for ((f, q, p), i) in common::all_sides() {
        let g = cat.build(*f, q, *p).unwrap();
        let s = &cat.sides(&g)[*i];
        let b = s.b_word.evaluate(&g).unwrap();
        let c = s.c_word.evaluate(&g).unwrap();
        count += 1;
        let n = classify::braids(&b, &c, BRAID_SEARCH_MAX);
        if n != Some(s.braid_length) {
            failures.push(format!("{} in {}: least braid length {n:?}", s.label(), g.id()));
        }
    }
    Outcome { n: 2, title: "braid lengths minimal (nmax 16)", summary: format!("{count} side rows"), failures }
}

fn center_trichotomy(reports: &[Report], property: &Result<(), String>) -> Outcome {
    let centers: Vec<&Check> = cells(reports, &["center"]).collect();
    let mut failures = failing_ids(centers.iter().copied());
    if let Err(e) = property {
        failures.push(format!("property: {e}"));
    }
    Outcome {
        n: 3,
        title: "center trichotomy",
        summary: format!("{} table pairs, 200 conjugated pairs", centers.len()),
        failures,
    }
}

fn sigma1_formula(reports: &[Report]) -> Outcome {
    let cat = catalog().unwrap();
    let opts = VerifyOptions::default();
    let mut failures = Vec::new();
    for p in [3, 4, 6] {
        let g = cat.build(Family::S, "sigma1", p).unwrap();
        let c = report::sigma1_formula_check(cat, &g, &opts);
        if c.status != Status::Pass {
            failures.push(format!("{}: {}", c.check_id, c.details));
        }
        let mut expected: Vec<ConeOrder> = report::sigma1_cone_formula(p)
            .into_iter()
            .filter(|o| *o != Order::Finite(1))
            .map(|o| Option::<ConeOrder>::from(o).unwrap())
            .collect();
        expected.sort();
        let row = cat.block("s1-R1").unwrap().rows.iter().find(|r| r.p == p).unwrap();
        let mut printed = row.signature.cone_orders.clone();
        printed.sort();
        if expected != printed {
            failures.push(format!("p = {p}: formula {expected:?}, table {}", row.signature));
        }
    }
    let cones = cells(reports, &["cone_orders"]).filter(|c| c.check_id.starts_with("s1-R1/"));
    failures.extend(failing_ids(cones));
    Outcome { n: 4, title: "sigma1 cone-order formula", summary: "p = 3, 4, 6".into(), failures }
}

fn table_sweep(reports: &[Report]) -> Outcome {
    let suffixes = ["generators", "chi", "area", "trivial_action"];
    let all: Vec<&Check> = cells(reports, &suffixes).collect();
    let rows: BTreeSet<&str> = all.iter().map(|c| c.check_id.rsplit_once('/').unwrap().0).collect();
    Outcome {
        n: 5,
        title: "stabilizer table sweep",
        summary: format!("{} rows, {} cells", rows.len(), all.len()),
        failures: failing_ids(all.iter().copied()),
    }
}

fn cycle_identity(reports: &[Report]) -> Outcome {
    let checks: Vec<&Check> = reports
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| c.check_id.starts_with("s1-R1-cycle/") && !c.check_id.ends_with("/printed_variants"))
        .collect();
    let mut failures: Vec<String> = checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| format!("{}: {}", c.check_id, c.details))
        .collect();
    for p in [3, 4, 6] {
        for part in ["chain", "transform", "rotation"] {
            let id = format!("s1-R1-cycle/p{p}/{part}");
            if !checks.iter().any(|c| c.check_id == id) {
                failures.push(format!("{id} missing"));
            }
        }
    }
    Outcome { n: 6, title: "cycle identity and rotation orders", summary: format!("{} checks", checks.len()), failures }
}

fn trace_fields(reports: &[Report]) -> Outcome {
    let cat = catalog().unwrap();
    let mut failures = Vec::new();
    let (mut exact, mut findings) = (0, Vec::new());
    for r in reports {
        for c in r.checks.iter().filter(|c| c.check_id.ends_with("/field")) {
            let row_id = c.check_id.rsplit_once('/').unwrap().0;
            let (block, p) = row_id.rsplit_once("/p").unwrap();
            let row = cat.block(block).unwrap().rows.iter().find(|r| r.p.to_string() == p).unwrap();
            let disputed = row.disputed.iter().any(|d| d == "field");
            let multiquadratic = row.tracefield_spec.is_multiquadratic();
            match (multiquadratic && !disputed, c.status) {
                (true, Status::Pass) => exact += 1,
                (true, _) => failures.push(format!("{}: {}", c.check_id, c.details)),
                (false, Status::Fail) => failures.push(format!("{}: {}", c.check_id, c.details)),
                (false, _) => {
                    if c.details.starts_with("finding:") {
                        findings.push(c.check_id.clone());
                    }
                }
            }
        }
    }
    Outcome {
        n: 7,
        title: "trace fields",
        summary: format!("{exact} square-root fields matched; findings: {}", if findings.is_empty() { "none".into() } else { findings.join(", ") }),
        failures,
    }
}

fn arithmeticity(reports: &[Report]) -> Outcome {
    let arith: Vec<&Check> = cells(reports, &["arith"]).collect();
    let decided = arith.iter().filter(|c| c.status != Status::Unverified).count();
    let mut failures = failing_ids(arith.iter().copied());
    // triangle rows must be decided, the rest must not be
    let cat = catalog().unwrap();
    for c in &arith {
        let row_id = c.check_id.rsplit_once('/').unwrap().0;
        let (block, p) = row_id.rsplit_once("/p").unwrap();
        let row = cat.block(block).unwrap().rows.iter().find(|r| r.p.to_string() == p).unwrap();
        if row.signature.triangle().is_some() == (c.status == Status::Unverified) {
            failures.push(format!("{}: status {} for {}", c.check_id, c.status, row.signature));
        }
    }
    Outcome {
        n: 8,
        title: "triangle arithmeticity",
        summary: format!("{decided} triangle rows, {} others unverified", arith.len() - decided),
        failures,
    }
}

fn property_suites(results: &[(&'static str, Result<(), String>)]) -> Outcome {
    let failures = results.iter().filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}"))).collect();
    let names: Vec<&str> = results.iter().map(|(n, _)| *n).collect();
    Outcome { n: 9, title: "property suites (200 cases each)", summary: names.join(", "), failures }
}

fn hybrids(reports: &[Report]) -> Outcome {
    let claims: Vec<&Check> = reports.iter().flat_map(|r| &r.checks).filter(|c| c.check_id.starts_with("hybrid/")).collect();
    let failures = claims
        .iter()
        .filter(|c| c.status != Status::Unverified || !c.details.contains("complex reflection"))
        .map(|c| format!("{}: {} {}", c.check_id, c.status, c.details))
        .collect();
    Outcome { n: 10, title: "hybrid claims recorded", summary: format!("{} claims unverified", claims.len()), failures }
}

#[test]
fn acceptance() {
    let cat = catalog().unwrap();
    let reports = report::reproduce_tables(cat, None, &SweepOptions::default()).unwrap();
    let mut properties = common::run_all(200);
    let center_property = properties.pop().expect("center trichotomy runs last");
    assert_eq!(center_property.0, "center trichotomy");

    let outcomes = [
        form_validity(),
        braid_tables(),
        center_trichotomy(&reports, &center_property.1),
        sigma1_formula(&reports),
        table_sweep(&reports),
        cycle_identity(&reports),
        trace_fields(&reports),
        arithmeticity(&reports),
        property_suites(&properties),
        hybrids(&reports),
    ];
    for o in &outcomes {
        println!("{}", o.line());
    }

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known: BTreeSet<&str> =
            KNOWN_FAILING.iter().filter(|(n, _)| *n == o.n).flat_map(|(_, ids)| ids.iter().copied()).collect();
        let failing: BTreeSet<&str> = o.failures.iter().map(|f| f.split(": ").next().unwrap()).collect();
        if failing != known {
            unexpected.push(format!("criterion {}: failing {failing:?}, known {known:?}", o.n));
        }
    }
    assert!(unexpected.is_empty(), "{}", unexpected.join("\n"));
}

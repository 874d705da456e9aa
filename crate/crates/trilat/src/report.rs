//! Checks and reports: one check per table cell plus the group-level
//! relations, with pass/fail/unverified statuses.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::catalog::{
    Catalog, CycleData, Family, GroupInstance, HybridClaim, NameVariant, Parameter, SideDescriptor, StabilizerRow,
};
use crate::classify::{self, Kind, Order};
use crate::forms::Signature;
use crate::stabilizer::{self, MirrorFrame, VerifyOptions};
use crate::tracefield;
use crate::TrilatError;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Longest braid searched when confirming side braid lengths.
pub const BRAID_SEARCH_MAX: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unverified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unverified => "unverified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    pub status: Status,
    pub details: String,
}

impl Check {
    pub fn new(check_id: String, status: Status, details: String) -> Check {
        Check { check_id, status, details }
    }

    pub fn compare<T: PartialEq + fmt::Display>(check_id: String, computed: &T, claimed: &T, what: &str) -> Check {
        let status = if computed == claimed { Status::Pass } else { Status::Fail };
        Check::new(check_id, status, format!("{what}: computed {computed}, table {claimed}"))
    }

    fn from_error(check_id: String, e: &TrilatError) -> Check {
        Check::new(check_id, Status::Fail, e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub group: String,
    pub checks: Vec<Check>,
    /// wall-clock milliseconds; left out of golden files
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(group: String, mut checks: Vec<Check>) -> Report {
        checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Report { schema_version: REPORT_SCHEMA_VERSION, group, checks, timing_ms: None }
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Table sweep settings.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub verify: VerifyOptions,
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        SweepOptions { verify: VerifyOptions::default(), workers }
    }
}

/// Form, generators and the relations of J and P: rebuilding the group
/// already enforces these, so this records what was checked.
pub fn form_check(cat: &Catalog, family: Family, param: &str, p: u32) -> Check {
    let id = format!("{param}/p{p}/form");
    match cat.build(family, param, p) {
        Ok(g) => Check::new(
            id,
            if g.form.signature == Signature::LORENTZ { Status::Pass } else { Status::Fail },
            format!(
                "{}: form signature {}, det R_j = 1, R_j preserve the form, order {p}",
                g.id(),
                g.form.signature
            ),
        ),
        Err(e) => Check::from_error(id, &e),
    }
}

fn side_checks(g: &GroupInstance, i: usize, side: &SideDescriptor) -> Vec<Check> {
    let base = format!("{}/p{}/side{}", g.param, g.p, i + 1);
    let mut out = Vec::new();
    let mats = (|| Ok::<_, TrilatError>((side.base_word.evaluate(g)?, side.b_word.evaluate(g)?, side.c_word.evaluate(g)?)))();
    let (_, b, c) = match mats {
        Ok(m) => m,
        Err(e) => return vec![Check::from_error(format!("{base}/braid"), &e)],
    };
    let n = classify::braids(&b, &c, BRAID_SEARCH_MAX);
    out.push(Check::new(
        format!("{base}/braid"),
        if n == Some(side.braid_length) { Status::Pass } else { Status::Fail },
        format!(
            "{}: least braid length {}",
            side.label(),
            n.map_or(format!("above {BRAID_SEARCH_MAX}"), |n| n.to_string())
        ),
    ));
    out.push(match classify::center_element(&b, &c, side.braid_length, &g.form) {
        Ok(r) => Check::new(
            format!("{base}/center"),
            if r.agrees { Status::Pass } else { Status::Fail },
            format!(
                "center is {}, box product of the polars is {:?}{}",
                r.class.kind.name(),
                r.box_position,
                r.note.map(|n| format!("; {n}")).unwrap_or_default()
            ),
        ),
        Err(e) => Check::from_error(format!("{base}/center"), &e),
    });
    out.push(match stabilizer::apex_truncated(g, side) {
        Ok(t) => Check::new(
            format!("{base}/truncation"),
            if t == side.top_truncated(g.p) { Status::Pass } else { Status::Fail },
            format!("top vertex outside the ball: computed {t}, table {}", side.top_truncated(g.p)),
        ),
        Err(e) => Check::from_error(format!("{base}/truncation"), &e),
    });
    out.push(match stabilizer::vertex_vectors(g, side) {
        Ok(vs) => Check::new(
            format!("{base}/vertices"),
            Status::Pass,
            format!("{} vertices, none outside the closed ball", vs.len()),
        ),
        Err(e) => Check::from_error(format!("{base}/vertices"), &e),
    });
    if let Some([a, b2, c2]) = &side.alt {
        let same = (|| {
            let pol = |w: &crate::Word| stabilizer::reflection_polar(g, w);
            let a_ok = pol(a)?.proportional(&pol(&side.base_word)?);
            let (x, y) = (pol(b2)?, pol(c2)?);
            let (u, v) = (pol(&side.b_word)?, pol(&side.c_word)?);
            let pair_ok = (x.proportional(&u) && y.proportional(&v)) || (x.proportional(&v) && y.proportional(&u));
            Ok::<_, TrilatError>(a_ok && pair_ok)
        })();
        out.push(match same {
            Ok(ok) => Check::new(
                format!("{base}/alternative"),
                if ok { Status::Pass } else { Status::Fail },
                format!("[{}] {a}; {b2}, {c2} names the same mirrors: {ok}", side.braid_length),
            ),
            Err(e) => Check::from_error(format!("{base}/alternative"), &e),
        });
    }
    out
}

/// Side braid lengths under a printed parameter value that differs from
/// the one used; recorded, never failing.
pub fn printed_parameter_check(cat: &Catalog, q: &Parameter, p: u32) -> Option<Check> {
    let printed = q.as_printed()?;
    let id = format!("{}/p{p}/printed_parameter", q.name);
    let g = match GroupInstance::construct(&printed, p) {
        Ok(g) => g,
        Err(e) => return Some(Check::new(id, Status::Unverified, format!("finding: printed value {}: {e}", printed.closed_form))),
    };
    let mut broken = Vec::new();
    for side in cat.sides.get(&q.name).map(Vec::as_slice).unwrap_or(&[]) {
        let holds = (|| {
            let b = side.b_word.evaluate(&g)?;
            let c = side.c_word.evaluate(&g)?;
            Ok::<_, TrilatError>(classify::braids(&b, &c, BRAID_SEARCH_MAX) == Some(side.braid_length))
        })();
        if !matches!(holds, Ok(true)) {
            broken.push(side.label());
        }
    }
    let details = format!(
        "printed value {} in place of {}: sides whose braid length changes [{}]",
        printed.closed_form,
        q.closed_form,
        broken.join("; ")
    );
    Some(Check::new(id, Status::Unverified, if broken.is_empty() { details } else { format!("finding: {details}") }))
}

/// Relations of one group: form validity and every side's braid, center
/// and truncation.
pub fn group_checks(cat: &Catalog, g: &GroupInstance) -> Vec<Check> {
    let mut out = vec![form_check(cat, g.family, &g.param, g.p)];
    for (i, side) in cat.sides(g).iter().enumerate() {
        out.extend(side_checks(g, i, side));
    }
    out
}

/// All cells of a stabilizer row.
pub fn row_checks(g: &GroupInstance, row: &StabilizerRow, opts: &VerifyOptions) -> Vec<Check> {
    let base = format!("{}/p{}", row.block_id, row.p);
    let analysis = stabilizer::signature_report(row, g, opts);
    let mut checks = analysis.checks;

    checks.push(match &analysis.ball {
        None => Check::new(format!("{base}/field"), Status::Unverified, "no stabilizer ball".into()),
        Some(ball) => field_check(&base, row, tracefield::field_of_ball(ball, &analysis.words)),
    });

    let verdict = tracefield::takeuchi_triangle_check(&row.signature);
    checks.push(match verdict.agrees(row.arithmetic) {
        Some(true) => Check::new(format!("{base}/arith"), Status::Pass, format!("{} triangle group: {verdict:?}", row.signature)),
        Some(false) => Check::new(
            format!("{base}/arith"),
            Status::Fail,
            format!("{} triangle group: {verdict:?}, table {}", row.signature, row.arithmetic),
        ),
        None => Check::new(
            format!("{base}/arith"),
            Status::Unverified,
            format!("not a triangle signature; table claim {} recorded", row.arithmetic),
        ),
    });
    checks
}

fn field_check(base: &str, row: &StabilizerRow, r: Result<tracefield::TraceFieldResult, TrilatError>) -> Check {
    let id = format!("{base}/field");
    let r = match r {
        Ok(r) => r,
        Err(e) => return Check::from_error(id, &e),
    };
    let claim = &row.tracefield_spec;
    let c = match tracefield::check_claim(&r.field, claim) {
        Ok(c) => c,
        Err(e) => return Check::from_error(id, &e),
    };
    let gens: Vec<String> = r.generators.iter().map(|s| format!("tr²({}) = {}", s.word, s.trace_sq)).collect();
    let details = format!(
        "table {claim}; computed degree {} conductor {} (degrees by length {:?}, stabilized {}); generators [{}]{}",
        r.field.degree,
        r.field.conductor,
        r.degrees,
        r.stabilized,
        gens.join("; "),
        if c.notes.is_empty() { String::new() } else { format!("; {}", c.notes) }
    );
    let disputed = row.disputed.iter().any(|c| c == "field");
    let status = match (c.holds() && c.generators_inside.is_some(), r.stabilized, claim.is_multiquadratic() && !disputed) {
        (true, true, _) => Status::Pass,
        (true, false, _) => Status::Unverified,
        (false, _, true) => Status::Fail,
        (false, _, false) => Status::Unverified,
    };
    let details = if status == Status::Unverified && !c.holds() { format!("finding: {details}") } else { details };
    Check::new(id, status, details)
}

/// Rotation orders of the generators of the R1 mirror stabilizer of
/// S(p, σ1) against p/(p−3), p/(p−3), 2p/|p−4|, 2p/|p−4|, 2p/|p−6|, 2p/|p−6|.
pub fn sigma1_cone_formula(p: u32) -> [Order; 6] {
    let q = |num: u32, den: i64| {
        if den == 0 {
            Order::Infinite
        } else {
            Order::Finite(num / den.unsigned_abs() as u32)
        }
    };
    let p64 = p as i64;
    let a = q(p, p64 - 3);
    let b = q(2 * p, p64 - 4);
    let c = q(2 * p, p64 - 6);
    [a, a, b, b, c, c]
}

pub fn sigma1_formula_check(cat: &Catalog, g: &GroupInstance, opts: &VerifyOptions) -> Check {
    let id = format!("s1-R1/p{}/formula", g.p);
    let Some(block) = cat.block("s1-R1") else {
        return Check::new(id, Status::Fail, "block s1-R1 missing".into());
    };
    let expected = sigma1_cone_formula(g.p);
    let frame = match stabilizer::frame(&g.form, &g.polar(1)) {
        Ok(f) => f,
        Err(e) => return Check::from_error(id, &e),
    };
    let mut got = Vec::new();
    for w in &block.generators {
        match w.evaluate(g).and_then(|m| stabilizer::rotation_order(&m, &frame, opts.order_cap)) {
            Ok(o) => got.push(o),
            Err(e) => return Check::from_error(id, &e),
        }
    }
    let ok = got.as_slice() == expected.as_slice();
    let show = |v: &[Order]| v.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",");
    let row = block.rows.iter().find(|r| r.p == g.p);
    let pres = row.map(|r| {
        let orders: Vec<_> = block.generators.iter().cloned().zip(got.iter().map(|&o| Some(o))).collect();
        stabilizer::presentation_emit(r, &orders)
    });
    Check::new(
        id,
        if ok { Status::Pass } else { Status::Fail },
        format!(
            "generator rotation orders ({}) against ({}); presentation {}",
            show(&got),
            show(&expected),
            pres.unwrap_or_default()
        ),
    )
}

pub fn name_variant_check(g: &GroupInstance, v: &NameVariant, frame: &MirrorFrame, cap: u32) -> Check {
    let id = format!("{}/p{}/name/{}", v.block, g.p, v.printed);
    let describe = |w: &crate::Word| -> String {
        match w.evaluate(g) {
            Ok(m) if stabilizer::stabilizes(&m, frame) => match stabilizer::rotation_order(&m, frame, cap) {
                Ok(o) => format!("rotation order {o}"),
                Err(e) => e.to_string(),
            },
            Ok(_) => "does not stabilize the mirror".into(),
            Err(e) => e.to_string(),
        }
    };
    let (printed, used) = (describe(&v.printed), describe(&v.used));
    Check::new(
        id,
        if used.starts_with("rotation order") { Status::Pass } else { Status::Fail },
        format!("printed {}: {printed}; read as {}: {used}", v.printed, v.used),
    )
}

pub fn cycle_checks(g: &GroupInstance, data: &CycleData, cap: u32) -> Vec<Check> {
    match stabilizer::verify_cycle(g, data, cap) {
        Ok(r) => r.checks,
        Err(e) => vec![Check::from_error(format!("{}/p{}/cycle", data.id, g.p), &e)],
    }
}

/// Claims that two mirror stabilizers generate the group: recorded as
/// unverified after checking that both words are complex reflections.
pub fn hybrid_checks(g: &GroupInstance, claim: &HybridClaim) -> Check {
    let id = format!("hybrid/{}/p{}", claim.id, g.p);
    let mut notes = Vec::new();
    let mut polars = Vec::new();
    let mut failed = false;
    for w in &claim.reflections {
        match w.evaluate(g).and_then(|m| Ok((classify::classify(&m, &g.form)?, m))) {
            Ok((c, _)) => match &c.kind {
                Kind::ComplexReflection { mirror_polar, .. } => {
                    notes.push(format!("{w} is a complex reflection of order {}", c.order));
                    polars.push(mirror_polar.clone());
                }
                Kind::Trivial => notes.push(format!("{w} is trivial in {}", g.id())),
                k => {
                    failed = true;
                    notes.push(format!("{w} is {}", k.name()));
                }
            },
            Err(e) => {
                failed = true;
                notes.push(format!("{w}: {e}"));
            }
        }
    }
    if let [a, b] = polars.as_slice() {
        notes.push(format!("mirrors orthogonal: {}", g.form.inner(a, b).is_zero()));
    }
    Check::new(
        id,
        if failed { Status::Fail } else { Status::Unverified },
        format!("generation claim recorded, not proved; {}", notes.join("; ")),
    )
}

/// Work item of a sweep.
enum Task<'a> {
    Group(u32),
    Row(&'a StabilizerRow),
}

/// The full verification of one parameter's table: group relations for
/// each p, every stabilizer row, and the extra data attached to the table.
pub fn table_report(cat: &Catalog, param: &str, opts: &SweepOptions) -> Result<Report, TrilatError> {
    let start = Instant::now();
    let q = cat.parameter(param)?;
    let mut tasks: Vec<Task> = q.p_values.iter().map(|&p| Task::Group(p)).collect();
    tasks.extend(cat.blocks.iter().filter(|b| b.param == param).flat_map(|b| b.rows.iter().map(Task::Row)));

    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let workers = opts.workers.clamp(1, tasks.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(task) = tasks.get(i) else { break };
                let checks = run_task(cat, q.family, param, task, opts);
                results.lock().expect("no poisoned workers").extend(checks);
            });
        }
    });
    let checks = results.into_inner().expect("no poisoned workers");
    let mut r = Report::new(format!("{}/{}", q.family, param), checks);
    r.timing_ms = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

fn run_task(cat: &Catalog, family: Family, param: &str, task: &Task, opts: &SweepOptions) -> Vec<Check> {
    let p = match task {
        Task::Group(p) => *p,
        Task::Row(r) => r.p,
    };
    let g = match cat.build(family, param, p) {
        Ok(g) => g,
        Err(e) => {
            let id = match task {
                Task::Group(_) => format!("{param}/p{p}/form"),
                Task::Row(r) => format!("{}/p{p}/mirror", r.block_id),
            };
            return vec![Check::from_error(id, &e)];
        }
    };
    let cap = opts.verify.order_cap;
    match task {
        Task::Row(row) => row_checks(&g, row, &opts.verify),
        Task::Group(_) => {
            let mut out = group_checks(cat, &g);
            if let Some(c) = cat.parameter(param).ok().and_then(|q| printed_parameter_check(cat, q, p)) {
                out.push(c);
            }
            let has_s1_block = cat.block("s1-R1").is_some_and(|b| b.param == param && b.rows.iter().any(|r| r.p == p));
            if has_s1_block {
                out.push(sigma1_formula_check(cat, &g, &opts.verify));
                if let Ok(frame) = stabilizer::frame(&g.form, &g.polar(1)) {
                    for v in cat.name_variants.iter().filter(|v| v.block == "s1-R1") {
                        out.push(name_variant_check(&g, v, &frame, cap));
                    }
                }
            }
            for c in cat.cycles.iter().filter(|c| c.param == param && c.rotation_orders.contains_key(&p)) {
                out.extend(cycle_checks(&g, c, cap));
            }
            for h in cat.hybrids.iter().filter(|h| h.param == param && h.p.contains(&p)) {
                out.push(hybrid_checks(&g, h));
            }
            out
        }
    }
}

/// Reports for every parameter (or the one named), in catalog order.
pub fn reproduce_tables(cat: &Catalog, only: Option<&str>, opts: &SweepOptions) -> Result<Vec<Report>, TrilatError> {
    if let Some(name) = only {
        cat.parameter(name)?;
    }
    cat.parameters
        .iter()
        .filter(|q| only.map_or(true, |n| n == q.name))
        .filter(|q| cat.blocks.iter().any(|b| b.param == q.name))
        .map(|q| table_report(cat, &q.name, opts))
        .collect()
}

//! One line per acceptance criterion, driven by the scenario reports. Exits
//! nonzero when any criterion fails.

use std::process::ExitCode;

use binext::bnb::build_bbt1_tree;
use binext_cli::report::{evidence_label, Line, Report, CERTIFIED};
use binext_cli::scenarios::{run_scenario, ScenarioOpts, CATALOG};

struct Run {
    reports: Vec<(String, Report)>,
    failures: Vec<String>,
}

impl Run {
    fn report(&mut self, name: &str, opts: &ScenarioOpts) -> Option<Report> {
        let key = format!("{name}/n={}", opts.n);
        if let Some((_, r)) = self.reports.iter().find(|(k, _)| *k == key) {
            return Some(r.clone());
        }
        match run_scenario(name, opts) {
            Ok(r) => {
                self.reports.push((key, r.clone()));
                Some(r)
            }
            Err(e) => {
                self.failures.push(format!("{name}: {e}"));
                None
            }
        }
    }
}

/// Every named check must be present and pass; returns the failing names.
fn require(r: &Report, names: &[&str]) -> Vec<String> {
    names
        .iter()
        .filter(|n| r.check_named(n) != Some(true))
        .map(|n| match r.check_named(n) {
            Some(false) => n.to_string(),
            _ => format!("{n} (missing)"),
        })
        .collect()
}

fn all_checks(r: &Report) -> Vec<String> {
    r.checks().filter(|(_, p)| !p).map(|(n, _)| n.to_string()).collect()
}

fn labelled(value: &str) -> bool {
    if value == format!("non-member [{CERTIFIED}]") {
        return true;
    }
    value
        .strip_prefix("member [bounded-family (K=")
        .and_then(|rest| rest.strip_suffix(") evidence]"))
        .and_then(|k| k.parse::<u32>().ok())
        .is_some_and(|k| value == format!("member [{}]", evidence_label(k)))
}

fn unlabelled(r: &Report) -> Vec<String> {
    r.lines
        .iter()
        .filter_map(|l| match l {
            Line::Result { key, value } if key.starts_with("membership") && !labelled(value) => {
                Some(format!("{key} = {value}"))
            }
            _ => None,
        })
        .collect()
}

fn main() -> ExitCode {
    let opts = ScenarioOpts::default();
    let mut run = Run { reports: Vec::new(), failures: Vec::new() };
    let mut lines: Vec<(usize, String, Vec<String>)> = Vec::new();

    let lvo = run.report("log-vs-original", &opts);
    lines.push((
        1,
        "cuts (11)-(14), 10x2 <= 14, SC(P_L) max x2 <= 7/5 < 3/2 <= SC(P) max x2".into(),
        lvo.as_ref().map_or(vec!["scenario error".into()], |r| {
            require(
                r,
                &[
                    "cut(11)-gomory-chvatal",
                    "cut(12)-gomory-chvatal",
                    "cut(13)-split-z1_2",
                    "cut(14)-split-x1",
                    "multipliers-4-4-1-1-give-10x2<=14",
                    "SC(P_L)-max-x2<=7/5",
                    "SC(P)-max-x2>=3/2",
                    "strict-containment",
                ],
            )
        }),
    ));
    lines.push((
        2,
        "(5/4, 3/2) in SC(P) at K=5 and the three-point argument".into(),
        lvo.as_ref().map_or(vec!["scenario error".into()], |r| {
            require(r, &["(5/4,3/2)-member", "three-points-in-P-and-on-segments", "three-point-argument"])
        }),
    ));

    let lpl = run.report("logplus-vs-log", &opts);
    lines.push((
        3,
        "cuts (15), (16), x1 + x2 <= 2, lifted point in SC(P_L) at K=2".into(),
        lpl.as_ref().map_or(vec!["scenario error".into()], |r| {
            require(r, &["cut(15)-split-z2_2", "cut(16)-split-z1_2", "sum-is-x1+x2<=2", "lifted-point-member"])
        }),
    ));

    let uvl = run.report("unary-vs-logplus", &opts);
    lines.push((
        4,
        "cuts (17)-(19), y1 + y2 + y3 >= 2 cuts ybar, lifted point in SC(P_L+) at K=1".into(),
        uvl.as_ref().map_or(vec!["scenario error".into()], |r| {
            require(
                r,
                &[
                    "cut(17)-chvatal-gomory",
                    "cut(18)-chvatal-gomory",
                    "cut(19)-rounded",
                    "cut(19)-holds-at-every-integer-point",
                    "sum-is-y1+y2+y3>=2",
                    "ybar-violates-sum",
                    "lifted-point-member",
                ],
            )
        }),
    ));

    let kf = run.report("knapsack-facets", &opts);
    lines.push((
        5,
        "B^L+(u) equals the brute-force hull with few inequalities, u <= 64".into(),
        kf.as_ref().map_or(vec!["scenario error".into()], |r| require(r, &["B^L+(u)-equals-brute-force-hull-u<=64"])),
    ));

    let ssh = run.report("single-split-hull", &opts);
    lines.push((
        6,
        "proj_x(conv(P_B minus S)) = {(1, 1)}".into(),
        ssh.as_ref().map_or(vec!["scenario error".into()], |r| require(r, &["single-split-gives-(1,1)"])),
    ));

    let um = run.report("unimodular-maps", &opts);
    lines.push((
        7,
        "full/unary maps, projected closures agree, affine maps send closures into closures".into(),
        um.as_ref().map_or(vec!["scenario error".into()], |r| {
            require(
                r,
                &[
                    "full<->unary-generators-map-onto-generators-u<=6",
                    "projected-closures-identical",
                    "closure-vertices-map-into-closure",
                ],
            )
        }),
    ));

    let mut c8 = Vec::new();
    for n in 1..=6 {
        match build_bbt1_tree(n) {
            Ok((_, t)) if t.leaf_count() == (1 << n) + n => {}
            Ok((_, t)) => c8.push(format!("n = {n}: {} leaves", t.leaf_count())),
            Err(e) => c8.push(format!("n = {n}: {e}")),
        }
    }
    for n in 1..=2 {
        let o = ScenarioOpts { n, ..opts };
        match run.report("bb-corner-cut", &o) {
            Some(r) => {
                c8.extend(require(&r, &["tree-size-is-2^n+n", "complete"]).into_iter().map(|f| format!("n = {n}: {f}")));
                let best = r.get("min-complete-tree-size-original-space").unwrap_or("?");
                let ok = if n == 1 { best == "3" } else { best.parse::<usize>().is_ok_and(|b| b >= 7) };
                if !ok {
                    c8.push(format!("n = {n}: minimum complete tree size {best}"));
                }
            }
            None => c8.push(format!("n = {n}: scenario error")),
        }
    }
    lines.push((8, "corner-cut trees: 2^n + n leaves, complete, original space needs 3 and >= 7".into(), c8));

    let mut c9 = Vec::new();
    match run.report("nonaffine-example", &opts) {
        Some(r) => c9.extend(require(&r, &["affine-closures-agree-I_B-vs-I'"])),
        None => c9.push("nonaffine-example: scenario error".into()),
    }
    match run.report("single-split-dominance", &opts) {
        Some(r) => c9.extend(require(&r, &["proj(conv(P_B minus S))-contains-conv(P minus S')"])),
        None => c9.push("single-split-dominance: scenario error".into()),
    }
    match run.report("affine-to-linear", &opts) {
        Some(r) => c9.extend(require(&r, &["unit-determinant-and-linear-refit"])),
        None => c9.push("affine-to-linear: scenario error".into()),
    }
    lines.push((9, "substitution preimages, single-split dominance, affine-to-linear".into(), c9));

    let mut c10 = Vec::new();
    match run.report("invariants", &opts) {
        Some(r) => c10.extend(all_checks(&r)),
        None => c10.push("invariants: scenario error".into()),
    }
    for (name, _, _) in CATALOG {
        match run.report(name, &opts) {
            Some(r) => c10.extend(unlabelled(&r).into_iter().map(|l| format!("{name}: unlabelled {l}"))),
            None => c10.push(format!("{name}: scenario error")),
        }
    }
    lines.push((10, "membership labels and 100-seed invariant suites".into(), c10));

    let mut failed = !run.failures.is_empty();
    for (i, what, fails) in &lines {
        if fails.is_empty() {
            println!("criterion {i}: PASS {what}");
        } else {
            failed = true;
            println!("criterion {i}: FAIL {what} [{}]", fails.join("; "));
        }
    }
    for f in &run.failures {
        println!("scenario error: {f}");
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

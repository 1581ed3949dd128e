use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gliderep_core::clifford::{pentad, quaternion_square};
use gliderep_core::glider::distinguish_chains;
use gliderep_core::hasse::chain_hasse;
use gliderep_core::registry::{build_named, parse_chain, subgroup_name};
use gliderep_core::suites::{anti_diagonal, clifford, cyclic_module, group_algebra, nilpotent, pgroup_thm, SuiteReport};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_report(r: &SuiteReport) -> Outcome {
    Outcome {
        ok: r.passed(),
        detail: format!(
            "{} instances, {} violations{}",
            r.instances_checked,
            r.violations.len(),
            r.violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()
        ),
    }
}

fn hasse_golden() -> Outcome {
    let g = Arc::new(build_named("Q8", 8).unwrap());
    let chain = parse_chain(&g, "Z2,Z4j").unwrap();
    let h = chain_hasse(&g, &chain).unwrap();
    let mut below_u = h.below("U");
    below_u.sort();
    let mut above_v4 = h.above("V4");
    above_v4.sort();
    let below_v4 = h.below("V4");
    let ok = h.edges.len() == 10
        && h.components().len() == 2
        && below_u == ["V1", "V2"]
        && above_v4 == ["T3", "T4"]
        && below_v4 == ["T"];
    Outcome {
        ok,
        detail: format!(
            "{} edges, {} components, U over {below_u:?}, V4 under {above_v4:?} and over {below_v4:?}",
            h.edges.len(),
            h.components().len()
        ),
    }
}

fn cyclic_and_annihilator() -> (Outcome, Outcome) {
    let r = cyclic_module(32, 200, 0).unwrap();
    let (ann, cyc): (Vec<&String>, Vec<&String>) = r.violations.iter().partition(|v| v.contains("ann"));
    let mk = |v: Vec<&String>, what: &str| Outcome {
        ok: v.is_empty() && r.instances_checked == 200,
        detail: format!("{} instances, {} {what} violations", r.instances_checked, v.len()),
    };
    (mk(cyc, "rank"), mk(ann, "annihilator"))
}

fn distinguish() -> Outcome {
    let q = Arc::new(build_named("Q8", 8).unwrap());
    let d = Arc::new(build_named("D8", 8).unwrap());
    let cq = parse_chain(&q, "Z2,Z4i").unwrap();
    let cd = parse_chain(&d, "Z2,V4a").unwrap();
    let r = distinguish_chains((&q, &cq), (&d, &cd), 0).unwrap();
    let same = distinguish_chains((&q, &cq), (&q, &cq), 0).unwrap();
    Outcome {
        ok: r.distinguishable && r.order_four_values == [true, false] && !same.distinguishable,
        detail: format!(
            "Q8/D8 distinguishable = {}, order-4 values {:?}, self distinguishable = {}",
            r.distinguishable, r.order_four_values, same.distinguishable
        ),
    }
}

fn pentad_golden() -> Outcome {
    let (sq, [e1, t]) = quaternion_square().unwrap();
    let names = |b| -> Vec<String> {
        let p = pentad(&sq, b).unwrap();
        let mut v: Vec<String> = p.groups().iter().map(|s| subgroup_name(&sq.group, s)).collect();
        v.sort();
        v
    };
    let (a, b) = (names(&e1), names(&t));
    Outcome {
        ok: a == ["Q8", "Q8", "Z4i", "Z4j", "Z4j"] && b == ["Q8", "Q8", "Q8", "Z4i", "Z4j"],
        detail: format!("Ce1 {a:?}, C(t3+t2) {b:?}"),
    }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed())
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |name: &str, limit_s: u64, (o, elapsed): (Outcome, Duration)| {
        let in_time = elapsed <= Duration::from_secs(limit_s);
        let ok = o.ok && in_time;
        failed += usize::from(!ok);
        println!(
            "[{}] {name}: {} ({:.2} s, limit {limit_s} s{})",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
    };
    report("1 group algebra decomposition", 10, timed(|| from_report(&group_algebra(64).unwrap())));
    report("2 Hasse golden", 1, timed(hasse_golden));
    let t = Instant::now();
    let (rank, ann) = cyclic_and_annihilator();
    let elapsed = t.elapsed();
    report("3 cyclic module rank", 30, (rank, elapsed));
    report("4 annihilator identity", 30, (ann, elapsed));
    report("5 p-group degree theorem", 120, timed(|| from_report(&pgroup_thm(32).unwrap())));
    report("6 anti-diagonal equivalence", 120, timed(|| from_report(&anti_diagonal(16, 0).unwrap())));
    report("7 Q8 vs D8 distinction", 60, timed(distinguish));
    report("8 pentad golden", 1, timed(pentad_golden));
    report("9 square biconditionals", 300, timed(|| from_report(&clifford(32).unwrap())));
    report("10 tensor decomposability", 120, timed(|| from_report(&nilpotent(0).unwrap())));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

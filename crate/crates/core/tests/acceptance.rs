//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Exits 0 after printing every line. With `ACCEPTANCE_STRICT=1` the exit
//! code is 1 when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperop_core::verify::{self, CheckReport, LEMMA_TREES};
use hyperop_core::trees::PlanarTree;

const SEED: u64 = 7;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> CheckReport,
}

fn trees(src: &[&str]) -> Vec<PlanarTree> {
    src.iter().map(|s| s.parse().expect("tree literal")).collect()
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "complete-graph composite 2 o (3,2)",
            limit: Duration::from_secs(1),
            run: verify::kgraph_figure,
        },
        Criterion {
            id: 2,
            title: "operad axioms, exhaustive and random",
            limit: Duration::from_secs(300),
            run: || verify::operad_axioms(SEED),
        },
        Criterion {
            id: 3,
            title: "complexity inequality",
            limit: Duration::from_secs(120),
            run: || verify::complexity_inequality(SEED),
        },
        Criterion {
            id: 4,
            title: "contractibility of complexity subcategories",
            limit: Duration::from_secs(600),
            run: || verify::lemma_acyclicity(&trees(&LEMMA_TREES), 2, 3),
        },
        Criterion {
            id: 5,
            title: "linear trees have no left-of configurations",
            limit: Duration::from_secs(1),
            run: || verify::remark_linear(3),
        },
        Criterion {
            id: 6,
            title: "complete-graph posets are a circle and a 2-sphere",
            limit: Duration::from_secs(10),
            run: verify::kposet_homology,
        },
        Criterion {
            id: 7,
            title: "pairs category has circle homology",
            limit: Duration::from_secs(600),
            run: || verify::hat_homology(&trees(&["|", "(|)", "(| |)"])),
        },
        Criterion {
            id: 8,
            title: "pairs category is a Grothendieck construction",
            limit: Duration::from_secs(60),
            run: || verify::grothendieck_check(&trees(&["|", "(|)", "(| |)"])),
        },
        Criterion {
            id: 9,
            title: "fibers have terminal objects and reflect into slices",
            limit: Duration::from_secs(300),
            run: || verify::proof_structure(&trees(&LEMMA_TREES)),
        },
        Criterion {
            id: 10,
            title: "cowedge squares commute",
            limit: Duration::from_secs(60),
            run: || verify::cowedge_squares(SEED, 200),
        },
        Criterion {
            id: 11,
            title: "reduction is confluent",
            limit: Duration::from_secs(300),
            run: || verify::reduction_confluence(SEED),
        },
        Criterion {
            id: 12,
            title: "unit law needs R3",
            limit: Duration::from_secs(60),
            run: verify::r3_negative,
        },
        Criterion {
            id: 13,
            title: "codec round trips and deterministic sampling",
            limit: Duration::from_secs(60),
            run: || verify::codec_roundtrips(SEED),
        },
    ]
}

fn main() -> ExitCode {
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut failed = 0;
    let all = criteria();
    for c in &all {
        let start = Instant::now();
        let report = (c.run)();
        let took = start.elapsed();
        let in_time = took <= c.limit;
        let ok = report.passed() && report.cases > 0 && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2}: {} ({} cases, {} failures, {:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            report.cases,
            report.failure_count,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
        if !in_time {
            println!("    over the time limit");
        }
        if !ok || verbose {
            for f in report.failures.iter().take(3) {
                println!("    {f}");
            }
        }
        if verbose || !report.passed() {
            for n in &report.notes {
                println!("    note: {n}");
            }
        }
    }
    println!("{} of {} criteria pass", all.len() - failed, all.len());
    if strict && failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

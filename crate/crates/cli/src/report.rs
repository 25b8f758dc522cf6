use std::fmt::Write as _;

use edes_core::checks::{CheckOptions, CheckOutcome, Profile};
use edes_core::kernels::KernelFault;

use crate::output::num;

fn status(o: &CheckOutcome) -> &'static str {
    if o.passed {
        "PASS"
    } else if o.unexpected_failures().next().is_none() {
        "FAIL (known limitation)"
    } else {
        "FAIL"
    }
}

/// Markdown report of a `verify-all` run. Timings are the only
/// nondeterministic content.
pub fn markdown(opts: &CheckOptions, outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    let profile = match opts.profile {
        Profile::Quick => "quick",
        Profile::Full => "full",
    };
    let _ = writeln!(s, "# Verification report\n");
    let _ = writeln!(s, "- profile: `{profile}`");
    let _ = writeln!(s, "- seed: `{}`", opts.seed);
    if opts.fault != KernelFault::None {
        let _ = writeln!(s, "- **fault injected**: `{:?}`", opts.fault);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(s, "- checks passed: {passed} of {}\n", outcomes.len());

    let _ = writeln!(s, "| # | check | status | anchor | seconds |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for o in outcomes {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {:.2} |",
            o.criterion,
            o.title,
            status(o),
            o.anchor.replace('|', "\\|"),
            o.elapsed_seconds
        );
    }

    for o in outcomes {
        let _ = writeln!(s, "\n## {}. {} ({})\n", o.criterion, o.title, status(o));
        let _ = writeln!(s, "Anchor: `{}`\n", o.anchor);
        let _ = writeln!(s, "| sub-check | result | measured | requirement | note |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for sc in &o.subchecks {
            let result = match (sc.passed, sc.known_limitation) {
                (true, _) => "pass",
                (false, true) => "FAIL (known limitation)",
                (false, false) => "FAIL",
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} {} | {} |",
                sc.name,
                result,
                num(sc.measured),
                sc.relation,
                num(sc.tolerance),
                sc.note.replace('|', "\\|")
            );
        }
        if let Some(t) = &o.table {
            let _ = writeln!(s, "\n| {} |", t.headers.join(" | "));
            let _ = writeln!(s, "|{}", "---|".repeat(t.headers.len()));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
                let _ = writeln!(s, "| {} |", cells.join(" | "));
            }
        }
    }
    s
}

//! Plain-text rendering of a scenario run.

use std::fmt::Write;

use poalg::literal::{format_complex_fixed, format_fixed};

use crate::run::Report;

const DECIMALS: usize = 12;

fn fixed(x: f64) -> String {
    format_fixed(x, DECIMALS)
}

fn tuple(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| fixed(v)).collect();
    format!("({})", parts.join(", "))
}

/// Renders `report` with one section per step. Key order and number
/// formatting are fixed, so equal reports render to equal bytes.
pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "[scenario]").unwrap();
    writeln!(w, "dim = {}", report.dim).unwrap();
    writeln!(w, "rng = ChaCha8Rng, trial t seeded with splitmix64(seed, t)").unwrap();
    writeln!(w, "samples = {}", report.samples).unwrap();
    writeln!(w, "seed = {}", report.seed).unwrap();
    writeln!(w).unwrap();
    writeln!(w, "[initial]").unwrap();
    writeln!(w, "{:<6} {:<18} vector", "index", "probability").unwrap();
    for (j, v) in report.initial_basis.vectors().iter().enumerate() {
        let entries: Vec<String> = v.iter().map(|&z| format_complex_fixed(z, DECIMALS)).collect();
        writeln!(w, "{:<6} {:<18} [{}]", j, fixed(report.initial_probabilities[j]), entries.join(", ")).unwrap();
    }

    for step in &report.steps {
        writeln!(w).unwrap();
        writeln!(w, "[step {}]", step.index).unwrap();
        writeln!(w, "measure = [{}]", step.measure.join(", ")).unwrap();
        writeln!(w, "complete = {}", step.complete).unwrap();
        if step.clamped {
            writeln!(w, "warning = probabilities clamped at zero and renormalized").unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "[step {}.basis]", step.index).unwrap();
        for (j, v) in step.basis.vectors().iter().enumerate() {
            let entries: Vec<String> = v.iter().map(|&z| format_complex_fixed(z, DECIMALS)).collect();
            writeln!(w, "{:<6} [{}]", j, entries.join(", ")).unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "[step {}.transitions]", step.index).unwrap();
        for (j, row) in step.transitions.rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&p| fixed(p)).collect();
            writeln!(w, "{:<6} {}", j, cells.join(" ")).unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "[step {}.analytic]", step.index).unwrap();
        writeln!(w, "{:<6} {:<18} label", "index", "probability").unwrap();
        for (j, p) in step.probabilities.iter().enumerate() {
            writeln!(w, "{:<6} {:<18} {}", j, fixed(*p), tuple(&step.labels[j])).unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "[step {}.expectations]", step.index).unwrap();
        writeln!(w, "{:<10} {:<18} {:<18} std_dev", "observable", "mean", "variance").unwrap();
        for s in &step.stats {
            writeln!(w, "{:<10} {:<18} {:<18} {}", s.name, fixed(s.mean), fixed(s.variance), fixed(s.std_dev)).unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "[step {}.uncertainty]", step.index).unwrap();
        writeln!(w, "{:<10} {:<18} {:<18} holds", "pair", "sigma_product", "half_commutator").unwrap();
        for p in &step.uncertainty {
            let pair = format!("{},{}", p.first, p.second);
            writeln!(w, "{:<10} {:<18} {:<18} {}", pair, fixed(p.check.lhs), fixed(p.check.rhs), p.check.holds).unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "[step {}.empirical]", step.index).unwrap();
        writeln!(w, "{:<6} {:<10} {:<18} {:<18} agreement", "index", "count", "frequency", "std_error").unwrap();
        for (j, e) in step.empirical.iter().enumerate() {
            writeln!(w, "{:<6} {:<10} {:<18} {:<18} {}", j, e.count, fixed(e.frequency), fixed(e.std_error), e.agreement.as_str()).unwrap();
        }
    }
    out
}

/// The lines of one `[step N.section]` block, header included.
pub fn section<'a>(text: &'a str, header: &str) -> Option<Vec<&'a str>> {
    let mut lines = text.lines().skip_while(|l| *l != header);
    let first = lines.next()?;
    let mut out = vec![first];
    out.extend(lines.take_while(|l| !l.is_empty()));
    Some(out)
}

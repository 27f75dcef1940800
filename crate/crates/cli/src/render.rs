use std::fmt::Write;

use microgrid_resilience::{classify_value, ComparisonReport, Dimension, RunReport, SimConfig};

/// Formats `x` with four significant figures.
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (0.99996 -> 1.0000).
    let carried = s
        .parse::<f64>()
        .map(|r| r.abs() >= 10f64.powi(magnitude + 1))
        .unwrap_or(false);
    if carried && decimals > 0 {
        let decimals = decimals - 1;
        format!("{x:.decimals$}")
    } else {
        s
    }
}

fn percent(p: Option<f64>) -> String {
    p.map_or_else(|| "n/a".to_string(), |p| format!("{p:.2}%"))
}

fn cube_root_rating(mean: f64) -> String {
    let root = mean.cbrt();
    match classify_value(root) {
        Ok(level) => format!("{} ({})", sig4(root), level.label()),
        Err(_) => format!("{} (off scale)", sig4(root)),
    }
}

fn header(out: &mut String, scenario: &str, cfg: &SimConfig) {
    let _ = writeln!(out, "scenario     {scenario}");
    let _ = writeln!(
        out,
        "config       {} iterations, seed {}, {}, {}",
        cfg.iterations,
        cfg.seed,
        cfg.aggregation.as_str(),
        cfg.distribution.as_str()
    );
    out.push('\n');
}

pub fn run_text(report: &RunReport) -> String {
    let mut out = String::new();
    header(&mut out, &report.scenario, &report.config);
    let _ = writeln!(
        out,
        "{:<22}{:>22}{:>11}{:>11}   cube root",
        "", "mean ± std", "min", "max"
    );
    for dim in Dimension::BOTH {
        let d = report.dimension(dim);
        let _ = writeln!(
            out,
            "{:<22}{:>22}{:>11}{:>11}   {}",
            format!("{dim} risk"),
            format!("{} ± {}", sig4(d.mean), sig4(d.std)),
            sig4(d.min),
            sig4(d.max),
            cube_root_rating(d.mean)
        );
    }
    let r = &report.resilience;
    let _ = writeln!(
        out,
        "{:<22}{:>22}{:>11}{:>11}",
        "total resilience",
        format!("{} ± {}", sig4(r.mean), sig4(r.std)),
        sig4(r.min),
        sig4(r.max)
    );
    out
}

pub fn compare_text(report: &ComparisonReport) -> String {
    let mut out = String::new();
    header(&mut out, &report.baseline.scenario, &report.baseline.config);
    let width = report
        .patches
        .iter()
        .map(|p| p.name.chars().count())
        .chain(["baseline".len()])
        .max()
        .unwrap_or(0)
        + 2;

    let _ = writeln!(
        out,
        "{:<width$}{:>10}{:>11}{:>9}  {:>10}{:>11}{:>9}  {:>10}{:>11}",
        "", "op risk", "reduction", "%", "infra", "reduction", "%", "resilience", "gain"
    );
    let b = &report.baseline;
    let _ = writeln!(
        out,
        "{:<width$}{:>10}{:>11}{:>9}  {:>10}{:>11}{:>9}  {:>10}{:>11}",
        "baseline",
        sig4(b.operational.mean),
        "",
        "",
        sig4(b.infrastructural.mean),
        "",
        "",
        sig4(b.resilience.mean),
        ""
    );
    for p in &report.patches {
        let d = &p.deltas;
        let _ = writeln!(
            out,
            "{:<width$}{:>10}{:>11}{:>9}  {:>10}{:>11}{:>9}  {:>10}{:>11}",
            p.name,
            sig4(p.report.operational.mean),
            sig4(d.op_risk_abs),
            percent(d.op_risk_pct),
            sig4(p.report.infrastructural.mean),
            sig4(d.infra_risk_abs),
            percent(d.infra_risk_pct),
            sig4(p.report.resilience.mean),
            sig4(d.resilience_abs)
        );
    }
    out.push('\n');
    if report.ranking.is_empty() {
        out.push_str("ranking      (no patches)\n");
    } else {
        let ranked: Vec<String> = report
            .ranking
            .iter()
            .enumerate()
            .map(|(i, name)| format!("{}. {name}", i + 1))
            .collect();
        let _ = writeln!(out, "ranking      {}", ranked.join("  "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_figures() {
        assert_eq!(sig4(0.0066), "0.006600");
        assert_eq!(sig4(0.010621226), "0.01062");
        assert_eq!(sig4(0.990463), "0.9905");
        assert_eq!(sig4(0.99546), "0.9955");
        assert_eq!(sig4(0.99996), "1.000");
        assert_eq!(sig4(-0.001234567), "-0.001235");
        assert_eq!(sig4(12345.0), "12345");
        assert_eq!(sig4(0.0), "0");
    }

    #[test]
    fn percent_formatting() {
        assert_eq!(percent(Some(0.0)), "0.00%");
        assert_eq!(percent(Some(19.6969)), "19.70%");
        assert_eq!(percent(None), "n/a");
    }

    #[test]
    fn off_scale_cube_root() {
        assert_eq!(cube_root_rating(8.0), "2.000 (off scale)");
        assert_eq!(cube_root_rating(0.01062), "0.2198 (Moderate)");
    }
}

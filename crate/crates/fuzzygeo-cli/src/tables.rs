//! Console tables for the report commands.

use fuzzygeo::evaluation::{CrossValReport, GranularityStudyReport};

pub fn print_granularity(report: &GranularityStudyReport) {
    println!(
        "{:<14} {:>8} {:>12} {:>10} {:>10} {:>11} {:>10}",
        "granularity", "points", "time (s)", "time red.", "point red.", "avg. diff", "std. diff"
    );
    println!(
        "{:<14} {:>8} {:>12.4} {:>10} {:>10} {:>11} {:>10}",
        format!("{}% baseline", report.baseline_pct),
        report.baseline_point_count,
        report.baseline_build_seconds,
        "-",
        "-",
        "-",
        "-"
    );
    for row in &report.rows {
        println!(
            "{:<14} {:>8} {:>12.4} {:>9.1}x {:>9.1}x {:>11.4} {:>10.4}",
            format!("{}%", row.pct),
            row.point_count,
            row.build_seconds,
            row.reduction_factor,
            row.point_reduction_factor,
            row.mean_abs_diff,
            row.std_abs_diff
        );
    }
}

pub fn print_crossval(report: &CrossValReport) {
    let labels = &report.mean_matrix.labels;
    println!(
        "mean hit fractions over {} folds (winner rows vs true-label columns):",
        report.folds
    );
    print!("{:<12}", "");
    for label in labels {
        print!(" {label:>10}");
    }
    println!();
    for (w, label) in labels.iter().enumerate() {
        print!("{label:<12}");
        for t in 0..labels.len() {
            print!(" {:>10.3}", report.mean_matrix.fractions[w][t]);
        }
        println!();
    }
    println!();
    println!(
        "{:<12} {:>10} {:>13} {:>13}",
        "descriptor", "precision", "diag. recall", "std recall"
    );
    for m in &report.metrics.per_label {
        println!(
            "{:<12} {:>10} {:>13} {:>13}",
            m.label.to_string(),
            m.precision.to_string(),
            m.diagonal_recall.to_string(),
            m.standard_recall.to_string()
        );
    }
    println!();
    println!("exact classification ties: {}", report.tie_count);
}

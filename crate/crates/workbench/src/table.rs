// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use pulseforge_core::trainer::RunRecord;

const HEADERS: [&str; 9] = [
    "Gate",
    "Duration",
    "Signed Modulus",
    "Effective Signed Modulus",
    "Argument",
    "Variance",
    "Correction Amplitude",
    "Phase",
    "Infidelity",
];

/// Plain-text table of trained parameters, one row per record.
pub fn render_table(records: &[RunRecord]) -> String {
    let rows: Vec<[String; 9]> = records
        .iter()
        .map(|r| {
            [
                r.gate.clone(),
                format!("{:.2}", r.duration),
                format!("{:.4}", r.signed_modulus),
                format!("{:.4}", r.effective_signed_modulus),
                format!("{:.4}", r.argument),
                format!("{:.2}", r.variance),
                format!("{:.4}", r.correction_amplitude),
                format!("{:.4}", r.phase),
                format!("{:.3E}", r.infidelity),
            ]
        })
        .collect();
    let mut widths = HEADERS.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(k, (c, w))| if k == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", parts.join(" | ").trim_end());
    };
    line(&HEADERS);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    line(&rule.iter().map(String::as_str).collect::<Vec<_>>());
    for row in &rows {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

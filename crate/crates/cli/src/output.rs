//! Output files: trace CSV, structured summary, Pauli dumps. Byte output is
//! deterministic for a fixed config and seed (shortest-roundtrip float
//! formatting, no timestamps).

use std::fmt::Write as _;
use std::path::Path;

use qsm_core::resources::ResourceReport;
use qsm_core::solver::IterationTrace;

use crate::CliError;

pub const TRACE_HEADER: &str = "step,energy_MeV,success_prob,norm,gamma";
pub const INCOMPLETE_MARKER: &str = "# incomplete";

/// Render a trace as CSV; `complete = false` appends the incomplete marker.
pub fn trace_csv(trace: &IterationTrace, complete: bool) -> String {
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for step in &trace.steps {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            step.index, step.energy, step.success_probability, step.pre_normalization_norm, step.gamma
        );
    }
    if !complete {
        out.push_str(INCOMPLETE_MARKER);
        out.push('\n');
    }
    out
}

/// Key-value entries rendered as a small JSON object (string, number, or
/// raw pre-rendered values), insertion-ordered.
#[derive(Default)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_str(&mut self, key: &str, value: &str) {
        self.entries.push((key.to_string(), format!("\"{value}\"")));
    }

    pub fn push_num(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_string(), format!("{value}")));
    }

    pub fn push_int(&mut self, key: &str, value: i128) {
        self.entries.push((key.to_string(), format!("{value}")));
    }

    pub fn push_bool(&mut self, key: &str, value: bool) {
        self.entries.push((key.to_string(), format!("{value}")));
    }

    pub fn push_raw(&mut self, key: &str, value: String) {
        self.entries.push((key.to_string(), value));
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.entries.iter().enumerate() {
            let comma = if i + 1 == self.entries.len() { "" } else { "," };
            let _ = writeln!(out, "  \"{k}\": {v}{comma}");
        }
        out.push_str("}\n");
        out
    }
}

pub fn resource_summary(report: &ResourceReport) -> String {
    let mut s = Summary::new();
    s.push_int("work_qubits", report.work_qubits as i128);
    s.push_int("terms", report.term_count as i128);
    s.push_int("ancilla_qubits", report.ancilla_qubits as i128);
    s.push_int("total_qubits", report.total_qubits as i128);
    s.push_int("gates_per_iteration", report.gates_per_iteration as i128);
    s.push_int("controlled_pauli_cost", report.controlled_pauli_cost as i128);
    s.push_int("bound_m", report.bound_m as i128);
    s.push_int("classical_subspace_dim", report.classical_subspace_dim as i128);
    s.push_raw("fullspace_proxy", format!("\"{}\"", report.classical_fullspace_proxy));
    s.push_bool("state_prep_unaccounted", report.state_prep_unaccounted);
    let rendered = s.render();
    // Nest as a raw object (strip the trailing newline).
    rendered.trim_end().replace('\n', "\n  ")
}

pub fn write_file(path: &str, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| crate::io_error(path, e))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| crate::io_error(path, e))
}

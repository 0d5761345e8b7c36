//! Resource accounting: qubit totals, ancilla size, per-iteration gate
//! counts, and the classical-versus-quantum comparison data.


use crate::math::{binomial, ceil_log2};
use crate::meanfield::NucleusSpec;
use crate::pauli::PauliSum;

#[derive(Clone, Debug, PartialEq)]
pub struct ResourceReport {
    pub work_qubits: usize,
    /// Term count M of the iteration operator T = I - 2 gamma H (the
    /// identity merges with H's identity term, so M = M_H plus one only
    /// when H carries no identity component).
    pub term_count: usize,
    /// Ancilla qubits m = ceil(log2 M).
    pub ancilla_qubits: u32,
    pub total_qubits: usize,
    /// Controlled-Pauli decompositions plus the ancilla Hadamards.
    pub gates_per_iteration: u64,
    /// Cost of one C^m(U): 32(m-1)+4 basic gates (1 when m = 0).
    pub controlled_pauli_cost: u64,
    /// 12 N^2 (2N-1)^2 + 4 N (2N-1), N = max single-particle count.
    pub bound_m: u64,
    /// C(N_pi, Z) * C(N_nu, N).
    pub classical_subspace_dim: u128,
    /// 2^(3N) proxy for dense classical diagonalization work.
    pub classical_fullspace_proxy: u128,
    /// State preparation of the ancilla register is reported separately and
    /// carries no decomposition count.
    pub state_prep_unaccounted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ResourceError {
    EmptySum,
}

impl core::fmt::Display for ResourceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ResourceError::EmptySum => write!(f, "resource estimate requires a nonempty sum"),
        }
    }
}

/// Basic-gate count of an m-controlled Pauli.
pub fn controlled_pauli_cost(m: u32) -> u64 {
    if m == 0 {
        1
    } else {
        32 * (m as u64 - 1) + 4
    }
}

/// Appendix-scale bound on the Pauli term count.
pub fn term_count_bound(max_orbits: u64) -> u64 {
    let n = max_orbits;
    12 * n * n * (2 * n - 1) * (2 * n - 1) + 4 * n * (2 * n - 1)
}

/// Term count of T = I - 2 gamma H: H's strings plus the identity when H
/// carries none (exact gamma-dependent cancellations are ignored).
pub fn iteration_term_count(h: &PauliSum) -> usize {
    let has_identity = h.terms.iter().any(|t| t.is_identity());
    h.term_count() + usize::from(!has_identity)
}

/// Resource report for one simplified Hamiltonian and its nucleus.
pub fn estimate_resources(
    h: &PauliSum,
    nucleus: &NucleusSpec,
) -> Result<ResourceReport, ResourceError> {
    if h.terms.is_empty() {
        return Err(ResourceError::EmptySum);
    }
    let work_qubits = h.n_qubits;
    let term_count = iteration_term_count(h);
    let ancilla_qubits = ceil_log2(term_count);
    let cp_cost = controlled_pauli_cost(ancilla_qubits);
    let gates = term_count as u64 * cp_cost + ancilla_qubits as u64;
    let n_pi = nucleus.catalog.proton.len() as u64;
    let n_nu = nucleus.catalog.neutron.len() as u64;
    let max_n = n_pi.max(n_nu);
    Ok(ResourceReport {
        work_qubits,
        term_count,
        ancilla_qubits,
        total_qubits: work_qubits + ancilla_qubits as usize,
        gates_per_iteration: gates,
        controlled_pauli_cost: cp_cost,
        bound_m: term_count_bound(max_n),
        classical_subspace_dim: binomial(n_pi, nucleus.z as u64)
            * binomial(n_nu, nucleus.n as u64),
        classical_fullspace_proxy: 1u128 << (3 * max_n).min(127),
        state_prep_unaccounted: true,
    })
}

/// One row of the complexity comparison table.
#[derive(Clone, Debug)]
pub struct ComplexityRow {
    pub label: alloc::string::String,
    pub report: ResourceReport,
}

/// CSV rendering of complexity rows (header included).
pub fn complexity_csv(rows: &[ComplexityRow]) -> alloc::string::String {
    use core::fmt::Write;
    let mut out = alloc::string::String::new();
    out.push_str(
        "nucleus,work_qubits,terms,ancilla,total_qubits,gates_per_iteration,bound_m,subspace_dim,fullspace_proxy\n",
    );
    for row in rows {
        let r = &row.report;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.label,
            r.work_qubits,
            r.term_count,
            r.ancilla_qubits,
            r.total_qubits,
            r.gates_per_iteration,
            r.bound_m,
            r.classical_subspace_dim,
            r.classical_fullspace_proxy
        );
    }
    out
}

//! Built-in Pauli-sum fixtures.

use num_complex::Complex64;
use qsm_core::pauli::{PauliLetter, PauliSum, PauliTerm};

use crate::CliError;

/// Two-qubit deuteron Hamiltonian used for hardware-scale demonstrations:
/// 5.906709 I + 0.218291 Z0 - 6.125 Z1 - 2.143304 (X0 X1 + Y0 Y1).
pub const DEUTERON_N2: &str = "deuteron-n2";

fn term(coeff: f64, letters: [PauliLetter; 2]) -> PauliTerm {
    PauliTerm { coefficient: Complex64::new(coeff, 0.0), letters: letters.to_vec() }
}

pub fn load_builtin(name: &str) -> Result<PauliSum, CliError> {
    use PauliLetter::*;
    match name.to_lowercase().as_str() {
        DEUTERON_N2 => Ok(PauliSum {
            terms: vec![
                term(5.906709, [I, I]),
                term(0.218291, [Z, I]),
                term(-6.125, [I, Z]),
                term(-2.143304, [X, X]),
                term(-2.143304, [Y, Y]),
            ],
            n_qubits: 2,
            layout: None,
        }),
        other => Err(CliError::Run(format!(
            "unknown builtin Hamiltonian '{other}'; available: {DEUTERON_N2}"
        ))),
    }
}

//! Well-depth calibration: find the U* reproducing an experimental binding
//! energy per nucleus, fit the five-parameter depth formula
//! U0 = u + a (N-Z)/A + b Z + c N + d / A by least squares, and predict
//! depths for new nuclei.

use alloc::string::String;
use alloc::vec::Vec;

use crate::interactions::{assemble_hamiltonian, AssemblyOptions, InteractionError};
use crate::linalg::{solve, LinalgError, Matrix};
use crate::meanfield::{MeanFieldParams, NucleusSpec};
use crate::oracle::{sector_ground, OracleError};

#[derive(Clone, Debug)]
pub struct FitRecord {
    pub label: String,
    pub z: u32,
    pub n: u32,
    /// Experimental ground-state energy, MeV.
    pub e_exp: f64,
    /// Calibrated depth, MeV.
    pub u_star: f64,
    /// Depth band within which |E/A - E_exp/A| <= the per-nucleon budget.
    pub band: (f64, f64),
}

/// Regression coefficients of the depth formula, MeV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldFormulaParams {
    pub u: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl FieldFormulaParams {
    pub fn zero() -> Self {
        Self { u: 0.0, a: 0.0, b: 0.0, c: 0.0, d: 0.0 }
    }
}

#[derive(Clone, Debug)]
pub enum FittingError {
    NoSignChange { bracket: (f64, f64), e_low: f64, e_high: f64, target: f64 },
    NotEnoughRecords { found: usize, needed: usize },
    RankDeficient { column: usize },
    Interaction(InteractionError),
    Oracle(OracleError),
}

impl core::fmt::Display for FittingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FittingError::NoSignChange { bracket, e_low, e_high, target } => write!(
                f,
                "E(U0) - {target} does not change sign on [{}, {}]: endpoint energies {e_low}, {e_high}",
                bracket.0, bracket.1
            ),
            FittingError::NotEnoughRecords { found, needed } => {
                write!(f, "least squares needs {needed} records, found {found}")
            }
            FittingError::RankDeficient { column } => {
                write!(f, "design matrix is rank deficient at column {column}")
            }
            FittingError::Interaction(e) => write!(f, "{e}"),
            FittingError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl From<InteractionError> for FittingError {
    fn from(e: InteractionError) -> Self {
        FittingError::Interaction(e)
    }
}

impl From<OracleError> for FittingError {
    fn from(e: OracleError) -> Self {
        FittingError::Oracle(e)
    }
}

impl From<LinalgError> for FittingError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::SingularSystem { column } => FittingError::RankDeficient { column },
            other => FittingError::Oracle(OracleError::Linalg(other)),
        }
    }
}

/// Exact sector ground energy of the nucleus at the given well depth.
/// Two-body terms do not depend on U0, so scans share one assembly per depth
/// only for the one-body part; this plain version reassembles per call.
pub fn energy_vs_u0(
    nucleus: &NucleusSpec,
    u0: f64,
    options: &AssemblyOptions,
) -> Result<f64, FittingError> {
    let params = MeanFieldParams::with_depth(u0);
    let sq = assemble_hamiltonian(nucleus, &params, options)?;
    Ok(sector_ground(&sq)?.energy)
}

/// Result of a depth calibration against one experimental energy.
#[derive(Clone, Debug)]
pub struct UstarResult {
    pub u_star: f64,
    pub energy_at_ustar: f64,
    /// Depth band keeping |E/A - E_exp/A| within the per-nucleon budget.
    pub band: (f64, f64),
}

/// Bisect E(U0) = E_target inside `bracket` to |E - target| <= tol_mev, then
/// bracket the band where the per-nucleon error stays within
/// `band_budget_mev_per_nucleon` (0.3 MeV/nucleon by default elsewhere).
pub fn find_ustar<F>(
    mut energy: F,
    e_target: f64,
    bracket: (f64, f64),
    tol_mev: f64,
    mass_number: u32,
    band_budget_mev_per_nucleon: f64,
) -> Result<UstarResult, FittingError>
where
    F: FnMut(f64) -> Result<f64, FittingError>,
{
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        (bracket.0, bracket.1)
    } else {
        (bracket.1, bracket.0)
    };
    let f_lo = energy(lo)? - e_target;
    let f_hi = energy(hi)? - e_target;
    if f_lo == 0.0 {
        let band = band_edges(&mut energy, lo, e_target, mass_number, band_budget_mev_per_nucleon)?;
        return Ok(UstarResult { u_star: lo, energy_at_ustar: e_target, band });
    }
    if f_hi == 0.0 {
        let band = band_edges(&mut energy, hi, e_target, mass_number, band_budget_mev_per_nucleon)?;
        return Ok(UstarResult { u_star: hi, energy_at_ustar: e_target, band });
    }
    if f_lo * f_hi > 0.0 {
        return Err(FittingError::NoSignChange {
            bracket,
            e_low: f_lo + e_target,
            e_high: f_hi + e_target,
            target: e_target,
        });
    }
    let mut sign_lo = f_lo.signum();
    let mut mid = 0.5 * (lo + hi);
    let mut e_mid = energy(mid)?;
    for _ in 0..200 {
        let f_mid = e_mid - e_target;
        if f_mid.abs() <= tol_mev {
            break;
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
            sign_lo = f_mid.signum();
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        e_mid = energy(mid)?;
    }
    let band = band_edges(&mut energy, mid, e_target, mass_number, band_budget_mev_per_nucleon)?;
    Ok(UstarResult { u_star: mid, energy_at_ustar: e_mid, band })
}

/// Depths on both sides of u_star where |E - target| reaches the budget
/// (budget_per_nucleon * A), found by bisection on the monotone branch.
fn band_edges<F>(
    energy: &mut F,
    u_star: f64,
    e_target: f64,
    mass_number: u32,
    budget_per_nucleon: f64,
) -> Result<(f64, f64), FittingError>
where
    F: FnMut(f64) -> Result<f64, FittingError>,
{
    let budget = budget_per_nucleon * mass_number as f64;
    // E decreases as the well deepens; the deep edge overshoots by -budget.
    let deep = edge(energy, u_star, e_target - budget, -1.0)?;
    let shallow = edge(energy, u_star, e_target + budget, 1.0)?;
    Ok((deep, shallow))
}

fn edge<F>(energy: &mut F, start: f64, level: f64, direction: f64) -> Result<f64, FittingError>
where
    F: FnMut(f64) -> Result<f64, FittingError>,
{
    // March outward until the level is crossed, then bisect.
    let mut step = 0.25;
    let mut inner = start;
    let mut outer = start;
    for _ in 0..64 {
        outer = inner + direction * step;
        let e = energy(outer)?;
        let crossed = if direction < 0.0 { e <= level } else { e >= level };
        if crossed {
            break;
        }
        inner = outer;
        step *= 2.0;
    }
    let (mut a, mut b) = (inner, outer);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let e = energy(mid)?;
        let crossed = if direction < 0.0 { e <= level } else { e >= level };
        if crossed {
            b = mid;
        } else {
            a = mid;
        }
        if (b - a).abs() < 1e-4 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Exact least-squares fit of the depth formula through the normal
/// equations. Needs at least five records.
pub fn fit_parameters(records: &[(u32, u32, f64)]) -> Result<FieldFormulaParams, FittingError> {
    if records.len() < 5 {
        return Err(FittingError::NotEnoughRecords { found: records.len(), needed: 5 });
    }
    let rows = records.len();
    let mut design = Matrix::zeros(rows, 5);
    let mut target = Vec::with_capacity(rows);
    for (row, &(z, n, u_star)) in records.iter().enumerate() {
        let a_mass = (z + n) as f64;
        design.set(row, 0, 1.0);
        design.set(row, 1, (n as f64 - z as f64) / a_mass);
        design.set(row, 2, z as f64);
        design.set(row, 3, n as f64);
        design.set(row, 4, 1.0 / a_mass);
        target.push(u_star);
    }
    // Normal equations: (X^T X) beta = X^T y.
    let mut xtx = Matrix::zeros(5, 5);
    let mut xty = alloc::vec![0.0; 5];
    for i in 0..5 {
        for j in 0..5 {
            let mut acc = 0.0;
            for r in 0..rows {
                acc += design.get(r, i) * design.get(r, j);
            }
            xtx.set(i, j, acc);
        }
        for r in 0..rows {
            xty[i] += design.get(r, i) * target[r];
        }
    }
    let beta = solve(&xtx, &xty)?;
    Ok(FieldFormulaParams { u: beta[0], a: beta[1], b: beta[2], c: beta[3], d: beta[4] })
}

/// Evaluate the depth formula at (Z, N).
pub fn predict_u0(params: &FieldFormulaParams, z: u32, n: u32) -> f64 {
    let a_mass = (z + n) as f64;
    params.u
        + params.a * (n as f64 - z as f64) / a_mass
        + params.b * z as f64
        + params.c * n as f64
        + params.d / a_mass
}

/// Residual orthogonality check: X^T (X beta - y), infinity norm.
pub fn normal_equation_residual(
    records: &[(u32, u32, f64)],
    params: &FieldFormulaParams,
) -> f64 {
    let mut worst = 0.0f64;
    for col in 0..5usize {
        let mut acc = 0.0;
        for &(z, n, u_star) in records {
            let a_mass = (z + n) as f64;
            let x = [
                1.0,
                (n as f64 - z as f64) / a_mass,
                z as f64,
                n as f64,
                1.0 / a_mass,
            ];
            let predicted = predict_u0(params, z, n);
            acc += x[col] * (predicted - u_star);
        }
        worst = worst.max(acc.abs());
    }
    worst
}

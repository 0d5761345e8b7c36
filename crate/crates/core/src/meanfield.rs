//! Woods-Saxon central + spin-orbit average field and the one-body matrix
//! elements <a| p^2/2M + V |b>.
//!
//! The central well is U_c(r) = U0 (1 +- kappa (N-Z)/(N+Z)) / (1 + exp((r -
//! r0 A^(1/3)) / a0)) with protons taking +kappa. The spin-orbit term is
//! composed literally as -2 lambda (hbar/(2Mc))^2 (dU_c/dr) <s.l> with the
//! species-averaged mass in the prefactor. Kinetic elements use the analytic
//! oscillator ladder formula in units (hbar c alpha)^2 / (2 M c^2).

use alloc::vec::Vec;

use crate::constants::{HBAR_C, M_NEUTRON, M_NUCLEON_AVG, M_PROTON};
use crate::linalg::Matrix;
use crate::math;
use crate::orbits::{Orbit, OrbitCatalog, Species};
use crate::quad::{integrate_radial, QuadratureError, QuadraturePolicy};

#[derive(Clone, Debug)]
pub struct MeanFieldParams {
    /// Well depth in MeV (negative for a binding well).
    pub u0: f64,
    pub kappa: f64,
    /// Radius parameter in fm.
    pub r0: f64,
    /// Diffuseness in fm.
    pub a0: f64,
    /// Spin-orbit strength, composed as printed.
    pub lambda_so: f64,
    pub m_proton: f64,
    pub m_neutron: f64,
    pub m_avg: f64,
}

impl MeanFieldParams {
    /// Standard parameter set with the given well depth.
    pub fn with_depth(u0: f64) -> Self {
        Self {
            u0,
            kappa: 0.67,
            r0: 1.27,
            a0: 0.67,
            lambda_so: 32.0,
            m_proton: M_PROTON,
            m_neutron: M_NEUTRON,
            m_avg: M_NUCLEON_AVG,
        }
    }

    pub fn mass(&self, species: Species) -> f64 {
        match species {
            Species::Proton => self.m_proton,
            Species::Neutron => self.m_neutron,
        }
    }
}

/// A nucleus: proton count, neutron count, and its single-particle catalog.
#[derive(Clone, Debug)]
pub struct NucleusSpec {
    pub z: u32,
    pub n: u32,
    pub catalog: OrbitCatalog,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeanFieldError {
    InvalidNucleus { z: u32, n: u32, orbits: usize },
    SpeciesMismatch,
    InvalidSpinOrbitPair { l: u32, two_j: u32 },
    NegativeRadius,
    Quadrature(QuadratureError),
}

impl core::fmt::Display for MeanFieldError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeanFieldError::InvalidNucleus { z, n, orbits } => write!(
                f,
                "nucleus (Z={z}, N={n}) does not fit a catalog of {orbits} orbits per species"
            ),
            MeanFieldError::SpeciesMismatch => {
                write!(f, "one-body element requires both orbits of the same species")
            }
            MeanFieldError::InvalidSpinOrbitPair { l, two_j } => {
                write!(f, "invalid (l={l}, 2j={two_j}) spin-orbit pair")
            }
            MeanFieldError::NegativeRadius => write!(f, "radius must be nonnegative"),
            MeanFieldError::Quadrature(e) => write!(f, "{e}"),
        }
    }
}

impl From<QuadratureError> for MeanFieldError {
    fn from(e: QuadratureError) -> Self {
        MeanFieldError::Quadrature(e)
    }
}

impl NucleusSpec {
    pub fn new(z: u32, n: u32, catalog: OrbitCatalog) -> Result<Self, MeanFieldError> {
        let orbits = catalog.len_per_species();
        if z + n == 0 || z as usize > orbits || n as usize > orbits {
            return Err(MeanFieldError::InvalidNucleus { z, n, orbits });
        }
        Ok(Self { z, n, catalog })
    }

    pub fn mass_number(&self) -> u32 {
        self.z + self.n
    }

    /// (N - Z) / (N + Z).
    pub fn asymmetry(&self) -> f64 {
        (self.n as f64 - self.z as f64) / self.mass_number() as f64
    }
}

fn sigmoid_well(x: f64) -> f64 {
    1.0 / (1.0 + math::exp(x))
}

/// Central Woods-Saxon potential in MeV at radius r (fm).
pub fn ws_central(
    r: f64,
    params: &MeanFieldParams,
    species: Species,
    nucleus: &NucleusSpec,
) -> Result<f64, MeanFieldError> {
    if r < 0.0 {
        return Err(MeanFieldError::NegativeRadius);
    }
    Ok(ws_central_unchecked(r, params, species, nucleus))
}

fn species_depth(params: &MeanFieldParams, species: Species, nucleus: &NucleusSpec) -> f64 {
    let sign = match species {
        Species::Proton => 1.0,
        Species::Neutron => -1.0,
    };
    params.u0 * (1.0 + sign * params.kappa * nucleus.asymmetry())
}

fn ws_central_unchecked(
    r: f64,
    params: &MeanFieldParams,
    species: Species,
    nucleus: &NucleusSpec,
) -> f64 {
    let radius = params.r0 * math::powf(nucleus.mass_number() as f64, 1.0 / 3.0);
    species_depth(params, species, nucleus) * sigmoid_well((r - radius) / params.a0)
}

/// dU_c/dr in MeV/fm, evaluated analytically.
pub fn ws_central_derivative(
    r: f64,
    params: &MeanFieldParams,
    species: Species,
    nucleus: &NucleusSpec,
) -> f64 {
    let radius = params.r0 * math::powf(nucleus.mass_number() as f64, 1.0 / 3.0);
    let s = sigmoid_well((r - radius) / params.a0);
    // d/dr [1/(1+e^x)] = -s(1-s)/a0
    -species_depth(params, species, nucleus) * s * (1.0 - s) / params.a0
}

/// <s.l> = l/2 for j = l + 1/2 and -(l+1)/2 for j = l - 1/2.
pub fn spin_orbit_expectation(l: u32, two_j: u32) -> Result<f64, MeanFieldError> {
    if two_j == 2 * l + 1 {
        Ok(l as f64 / 2.0)
    } else if l >= 1 && two_j == 2 * l - 1 {
        Ok(-((l + 1) as f64) / 2.0)
    } else {
        Err(MeanFieldError::InvalidSpinOrbitPair { l, two_j })
    }
}

/// The -2 lambda (hbar / 2Mc)^2 prefactor multiplying dU_c/dr <s.l>.
fn spin_orbit_prefactor(params: &MeanFieldParams) -> f64 {
    let length = HBAR_C / (2.0 * params.m_avg);
    -2.0 * params.lambda_so * length * length
}

/// Analytic oscillator kinetic element in MeV; nonzero only on the diagonal
/// and the first radial off-diagonal.
fn kinetic_element(nr_a: u32, nr_b: u32, l: u32, alpha: f64, mass: f64) -> f64 {
    let half_hw = (HBAR_C * alpha) * (HBAR_C * alpha) / (2.0 * mass);
    if nr_a == nr_b {
        half_hw * (2.0 * nr_a as f64 + l as f64 + 1.5)
    } else {
        let (lo, hi) = if nr_a < nr_b { (nr_a, nr_b) } else { (nr_b, nr_a) };
        if hi == lo + 1 {
            half_hw * math::sqrt((lo as f64 + 1.0) * (lo as f64 + l as f64 + 1.5))
        } else {
            0.0
        }
    }
}

/// One-body matrix element <a| p^2/2M_species + V |b> in MeV.
pub fn one_body_element(
    a: &Orbit,
    b: &Orbit,
    params: &MeanFieldParams,
    nucleus: &NucleusSpec,
) -> Result<f64, MeanFieldError> {
    if a.species != b.species {
        return Err(MeanFieldError::SpeciesMismatch);
    }
    if !a.same_channel(b) {
        return Ok(0.0);
    }
    let species = a.species;
    let l = a.l as u32;
    let alpha = nucleus.catalog.alpha;
    let kinetic = kinetic_element(a.nr(), b.nr(), l, alpha, params.mass(species));

    let sl = spin_orbit_expectation(l, a.two_j as u32)?;
    let so_pref = spin_orbit_prefactor(params);
    let policy = QuadraturePolicy::for_mass(nucleus.mass_number());
    let (nr_a, nr_b) = (a.nr(), b.nr());
    let potential = integrate_radial(
        |r| {
            let ra = crate::orbits::radial_unchecked(nr_a, l, alpha, r);
            let rb = crate::orbits::radial_unchecked(nr_b, l, alpha, r);
            let central = ws_central_unchecked(r, params, species, nucleus);
            let so = so_pref * ws_central_derivative(r, params, species, nucleus) * sl;
            ra * (central + so) * rb * r * r
        },
        &policy,
    )?;
    Ok(kinetic + potential)
}

/// Per-species symmetric one-body matrices in MeV.
#[derive(Clone, Debug)]
pub struct OneBodyMatrices {
    pub proton: Matrix,
    pub neutron: Matrix,
}

impl OneBodyMatrices {
    pub fn matrix(&self, species: Species) -> &Matrix {
        match species {
            Species::Proton => &self.proton,
            Species::Neutron => &self.neutron,
        }
    }
}

/// Assemble g for both species. Elements outside a (l, j, m_j) channel are
/// zero by angular orthogonality, so only channel-matched pairs are
/// integrated.
pub fn one_body_matrix(
    params: &MeanFieldParams,
    nucleus: &NucleusSpec,
) -> Result<OneBodyMatrices, MeanFieldError> {
    let build = |species: Species| -> Result<Matrix, MeanFieldError> {
        let orbits: &Vec<Orbit> = match species {
            Species::Proton => &nucleus.catalog.proton,
            Species::Neutron => &nucleus.catalog.neutron,
        };
        let n = orbits.len();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if !orbits[i].same_channel(&orbits[j]) {
                    continue;
                }
                let v = one_body_element(&orbits[i], &orbits[j], params, nucleus)?;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        Ok(m)
    };
    Ok(OneBodyMatrices { proton: build(Species::Proton)?, neutron: build(Species::Neutron)? })
}

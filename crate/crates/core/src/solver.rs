//! Gradient-descent driver: step-size selection, initial states, noise
//! injection, the iteration loop, and trace production.
//!
//! Each iteration applies T = I - 2 gamma H (optionally noise-perturbed),
//! renormalizes, projects back onto the particle-number sector when noise is
//! active, and records the energy of the *noiseless* Hamiltonian. Two
//! backends share the loop: a full 2^n statevector and a sector-basis vector
//! for registers too large to materialize.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::oracle::SectorOperator;
use crate::pauli::{build_iteration_operator, simplify, PauliLetter, PauliSum, PauliTerm, PRUNE_TOL};
use crate::rng::{derive_stream, SplitMix64, StreamTag};
use crate::statevec::{
    expectation, iterate_circuit, iterate_direct, project_particle_numbers, StateVecError,
    StateVector,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaMode {
    Fixed(f64),
    Auto,
}

/// Step-size policy. In auto mode the bounds (q, Q) default to the
/// coefficient 1-norm of the Hamiltonian (q = Q = sum |alpha_k|), which
/// always dominates the spectrum; explicit bounds may override that.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaPolicy {
    pub mode: GammaMode,
    pub bounds: Option<(f64, f64)>,
}

impl GammaPolicy {
    pub fn auto() -> Self {
        Self { mode: GammaMode::Auto, bounds: None }
    }

    pub fn fixed(gamma: f64) -> Self {
        Self { mode: GammaMode::Fixed(gamma), bounds: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaChoice {
    pub gamma: f64,
    /// Lower/upper spectrum bounds used for the admissibility test.
    pub q: f64,
    pub big_q: f64,
    pub admissible: bool,
}

/// Membership in the admissible step-size set derived from 1/(2 gamma) >
/// (q + Q)/2:
///   q+Q > 0: (0, 1/(q+Q));  q+Q = 0: (0, inf);
///   q+Q < 0: (-inf, 1/(q+Q)) union (0, inf).
pub fn gamma_admissible(gamma: f64, q: f64, big_q: f64) -> bool {
    let s = q + big_q;
    if s > 0.0 {
        gamma > 0.0 && gamma < 1.0 / s
    } else if s == 0.0 {
        gamma > 0.0
    } else {
        gamma < 1.0 / s || gamma > 0.0
    }
}

/// Select the iteration step size for a Hamiltonian.
///
/// Auto mode returns the midpoint gamma = 0.5/(q+Q) of the admissible
/// interval (0.5 by convention when q+Q = 0). Fixed mode passes gamma
/// through and only reports admissibility; an inadmissible fixed gamma is a
/// warning, not an error.
pub fn select_gamma(h: &PauliSum, policy: &GammaPolicy) -> GammaChoice {
    let norm = h.coefficient_one_norm();
    let (q, big_q) = policy.bounds.unwrap_or((norm, norm));
    match policy.mode {
        GammaMode::Fixed(gamma) => {
            GammaChoice { gamma, q, big_q, admissible: gamma_admissible(gamma, q, big_q) }
        }
        GammaMode::Auto => {
            let s = q + big_q;
            let gamma = if s > 0.0 { 0.5 / s } else { 0.5 };
            GammaChoice { gamma, q, big_q, admissible: gamma_admissible(gamma, q, big_q) }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseKind {
    None,
    /// Gaussian draws with the given sigma.
    Gaussian { sigma: f64 },
    /// Uniform draws within [-amplitude, +amplitude].
    Uniform { amplitude: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseTarget {
    Hamiltonian,
    State,
    Both,
}

/// Noise model: delta-alpha_k Z_k terms on every work qubit and/or an
/// additive state perturbation, both redrawn each iteration from streams
/// derived from `seed`.
///
/// State-noise normalization: the per-amplitude component scale is divided
/// by sqrt(2 * 2^n) so the *expected perturbation norm* ||delta psi|| equals
/// sigma (or the uniform amplitude), independent of register size.
/// Hamiltonian noise applies the stated scale per qubit directly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub target: NoiseTarget,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self { kind: NoiseKind::None, target: NoiseTarget::Both, seed: 0 }
    }

    pub fn is_active(&self) -> bool {
        !matches!(self.kind, NoiseKind::None)
    }

    pub fn on_hamiltonian(&self) -> bool {
        self.is_active() && matches!(self.target, NoiseTarget::Hamiltonian | NoiseTarget::Both)
    }

    pub fn on_state(&self) -> bool {
        self.is_active() && matches!(self.target, NoiseTarget::State | NoiseTarget::Both)
    }

    fn draw(&self, rng: &mut SplitMix64, scale: f64) -> f64 {
        match self.kind {
            NoiseKind::None => 0.0,
            NoiseKind::Gaussian { sigma } => rng.gaussian(sigma * scale),
            NoiseKind::Uniform { amplitude } => rng.uniform_symmetric(amplitude * scale),
        }
    }
}

/// Draw delta-alpha_k for every work qubit and return H + sum delta_k Z_k
/// along with the raw draws.
pub fn perturb_hamiltonian(
    h: &PauliSum,
    noise: &NoiseSpec,
    rng: &mut SplitMix64,
) -> (PauliSum, Vec<f64>) {
    let n = h.n_qubits;
    let mut deltas = Vec::with_capacity(n);
    let mut terms = h.terms.clone();
    for k in 0..n {
        let d = noise.draw(rng, 1.0);
        deltas.push(d);
        let mut letters = alloc::vec![PauliLetter::I; n];
        letters[k] = PauliLetter::Z;
        terms.push(PauliTerm { coefficient: Complex64::new(d, 0.0), letters });
    }
    let sum = PauliSum { terms, n_qubits: n, layout: h.layout };
    (simplify(&sum, PRUNE_TOL), deltas)
}

/// Add an i.i.d. per-amplitude perturbation (normalized as documented on
/// [`NoiseSpec`]) and renormalize.
pub fn perturb_state(
    s: &StateVector,
    noise: &NoiseSpec,
    rng: &mut SplitMix64,
) -> Result<StateVector, StateVecError> {
    let dim = s.amplitudes.len();
    let scale = 1.0 / math::sqrt(2.0 * dim as f64);
    let mut out = s.clone();
    for a in out.amplitudes.iter_mut() {
        let re = noise.draw(rng, scale);
        let im = noise.draw(rng, scale);
        *a += Complex64::new(re, im);
    }
    out.normalize()?;
    Ok(out)
}

/// Occupation bitmasks (proton, neutron) filling the lowest one-body
/// diagonal levels; ties broken by catalog order.
pub fn hartree_fock_bits(
    g: &crate::meanfield::OneBodyMatrices,
    nucleus: &crate::meanfield::NucleusSpec,
) -> Result<(u64, u64), SolverError> {
    let fill = |m: &crate::linalg::Matrix, count: u32| -> Result<u64, SolverError> {
        if count as usize > m.rows {
            return Err(SolverError::TooManyParticles { orbits: m.rows, particles: count });
        }
        let mut order: Vec<usize> = (0..m.rows).collect();
        order.sort_by(|&a, &b| {
            m.get(a, a)
                .partial_cmp(&m.get(b, b))
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut mask = 0u64;
        for &idx in order.iter().take(count as usize) {
            mask |= 1 << idx;
        }
        Ok(mask)
    };
    Ok((fill(&g.proton, nucleus.z)?, fill(&g.neutron, nucleus.n)?))
}

/// Normalized C(|HF> + sum w_i |b_i>) over the combined register. Every
/// bitstring must lie in the (Z, N) sector.
pub fn initial_state(
    layout: crate::pauli::QubitLayout,
    z: u32,
    n: u32,
    hf: (u64, u64),
    admixtures: &[((u64, u64), f64)],
) -> Result<StateVector, SolverError> {
    let check = |bits: (u64, u64)| -> Result<u64, SolverError> {
        if bits.0.count_ones() != z || bits.1.count_ones() != n {
            return Err(SolverError::SectorViolation {
                proton_bits: bits.0,
                neutron_bits: bits.1,
                z,
                n,
            });
        }
        Ok(bits.0 | (bits.1 << layout.protons))
    };
    let mut s = StateVector::zero(layout.n_qubits());
    let hf_idx = check(hf)?;
    s.amplitudes[hf_idx as usize] += Complex64::new(1.0, 0.0);
    for &(bits, weight) in admixtures {
        let idx = check(bits)?;
        s.amplitudes[idx as usize] += Complex64::new(weight, 0.0);
    }
    s.normalize().map_err(SolverError::StateVec)?;
    Ok(s)
}

/// Default excited-state admixture: promote the highest-energy occupied
/// orbit (protons first, falling back to neutrons) to the lowest unoccupied
/// orbit lying at least 1e-6 MeV above it, skipping degenerate m_j
/// partners. Returns None when no such excitation exists.
pub fn default_admixture(
    g: &crate::meanfield::OneBodyMatrices,
    hf: (u64, u64),
) -> Option<(u64, u64)> {
    let promote = |m: &crate::linalg::Matrix, mask: u64| -> Option<u64> {
        let occupied: Vec<usize> = (0..m.rows).filter(|&i| mask & (1 << i) != 0).collect();
        let from = *occupied.iter().max_by(|&&a, &&b| {
            m.get(a, a)
                .partial_cmp(&m.get(b, b))
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        })?;
        let e_from = m.get(from, from);
        let to = (0..m.rows)
            .filter(|&i| mask & (1 << i) == 0 && m.get(i, i) > e_from + 1e-6)
            .min_by(|&a, &b| {
                m.get(a, a)
                    .partial_cmp(&m.get(b, b))
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            })?;
        Some((mask & !(1u64 << from)) | (1 << to))
    };
    if hf.0 != 0 {
        if let Some(p) = promote(&g.proton, hf.0) {
            return Some((p, hf.1));
        }
    }
    if hf.1 != 0 {
        if let Some(n) = promote(&g.neutron, hf.1) {
            return Some((hf.0, n));
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationMode {
    Direct,
    Circuit,
}

#[derive(Clone, Copy, Debug)]
pub struct RunSettings {
    pub gamma: GammaPolicy,
    pub noise: NoiseSpec,
    pub mode: IterationMode,
    pub max_iter: usize,
    /// Convergence tolerance in keV on consecutive energy deltas.
    pub tol_kev: f64,
}

impl RunSettings {
    pub fn noiseless_direct(max_iter: usize) -> Self {
        Self {
            gamma: GammaPolicy::auto(),
            noise: NoiseSpec::none(),
            mode: IterationMode::Direct,
            max_iter,
            tol_kev: 0.1,
        }
    }
}

/// One recorded iteration.
#[derive(Clone, Copy, Debug)]
pub struct TraceStep {
    pub index: usize,
    /// Energy of the noiseless Hamiltonian after this step, MeV.
    pub energy: f64,
    /// ||T s||^2 / (C^2 2^m) for the operator actually applied this step.
    pub success_probability: f64,
    /// Same with the term count M in the denominator.
    pub success_probability_over_terms: f64,
    pub pre_normalization_norm: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub steps: Vec<TraceStep>,
    pub converged: bool,
    pub final_energy: f64,
    pub gamma: GammaChoice,
    /// Set when a fixed gamma fell outside the admissible region.
    pub gamma_warning: Option<String>,
}

#[derive(Clone, Debug)]
pub enum SolverError {
    TooManyParticles { orbits: usize, particles: u32 },
    SectorViolation { proton_bits: u64, neutron_bits: u64, z: u32, n: u32 },
    /// Energy became non-finite; the partial trace is attached.
    Diverged { trace: IterationTrace },
    StateVec(StateVecError),
}

impl core::fmt::Display for SolverError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolverError::TooManyParticles { orbits, particles } => {
                write!(f, "{particles} particles do not fit in {orbits} orbits")
            }
            SolverError::SectorViolation { proton_bits, neutron_bits, z, n } => write!(
                f,
                "bitstring ({proton_bits:b}, {neutron_bits:b}) violates the (Z={z}, N={n}) sector"
            ),
            SolverError::Diverged { trace } => {
                write!(f, "iteration diverged after {} steps", trace.steps.len())
            }
            SolverError::StateVec(e) => write!(f, "{e}"),
        }
    }
}

impl From<StateVecError> for SolverError {
    fn from(e: StateVecError) -> Self {
        SolverError::StateVec(e)
    }
}

/// Coefficient profile of T = I - 2 gamma H split into per-qubit single-Z
/// entries (which Hamiltonian noise shifts) and everything else; gives the
/// circuit numbers (C^2, M, m) without rebuilding the sum each iteration.
#[derive(Clone, Debug)]
pub struct IterOpProfile {
    gamma: f64,
    z_coeffs: Vec<f64>,
    other_sq_sum: f64,
    other_count: usize,
}

impl IterOpProfile {
    pub fn build(h: &PauliSum, gamma: f64) -> Self {
        let t = build_iteration_operator(h, gamma);
        let n = t.n_qubits;
        let mut z_coeffs = alloc::vec![0.0; n];
        let mut other_sq_sum = 0.0;
        let mut other_count = 0usize;
        for term in &t.terms {
            let mut z_pos = None;
            let mut single_z = true;
            for (q, &l) in term.letters.iter().enumerate() {
                match l {
                    PauliLetter::I => {}
                    PauliLetter::Z if z_pos.is_none() => z_pos = Some(q),
                    _ => {
                        single_z = false;
                        break;
                    }
                }
            }
            match (single_z, z_pos) {
                (true, Some(q)) => z_coeffs[q] = term.coefficient.re,
                _ => {
                    other_sq_sum += term.coefficient.norm_sqr();
                    other_count += 1;
                }
            }
        }
        Self { gamma, z_coeffs, other_sq_sum, other_count }
    }

    /// (C^2, M, 2^m) for the operator with the given per-qubit shifts.
    pub fn circuit_numbers(&self, deltas: Option<&[f64]>) -> (f64, usize, f64) {
        let mut c_sq = self.other_sq_sum;
        let mut count = self.other_count;
        for (k, &z) in self.z_coeffs.iter().enumerate() {
            let shifted = z - 2.0 * self.gamma * deltas.map_or(0.0, |d| d[k]);
            if shifted.abs() >= PRUNE_TOL {
                c_sq += shifted * shifted;
                count += 1;
            }
        }
        let count = count.max(1);
        let m = math::ceil_log2(count);
        (c_sq, count, (1u64 << m) as f64)
    }
}

struct ConvergenceWindow {
    tol_mev: f64,
    below: u32,
    last: Option<f64>,
}

impl ConvergenceWindow {
    fn new(tol_kev: f64) -> Self {
        Self { tol_mev: tol_kev / 1000.0, below: 0, last: None }
    }

    /// Returns true once 3 consecutive deltas stayed under tolerance.
    fn push(&mut self, energy: f64) -> bool {
        if let Some(prev) = self.last {
            if (energy - prev).abs() < self.tol_mev {
                self.below += 1;
            } else {
                self.below = 0;
            }
        }
        self.last = Some(energy);
        self.below >= 3
    }
}

fn gamma_choice_and_warning(h: &PauliSum, policy: &GammaPolicy) -> (GammaChoice, Option<String>) {
    let choice = select_gamma(h, policy);
    let warning = if !choice.admissible {
        Some(alloc::format!(
            "gamma {} outside the admissible region for bounds ({}, {})",
            choice.gamma,
            choice.q,
            choice.big_q
        ))
    } else {
        None
    };
    (choice, warning)
}

/// Full-statevector gradient descent on a Pauli-sum Hamiltonian.
///
/// `sector` supplies (layout, Z, N) for the particle-number projection that
/// follows each noisy iteration. Energies recorded in the trace are always
/// taken against the noiseless `h`.
pub fn run_gradient_descent(
    h: &PauliSum,
    initial: &StateVector,
    settings: &RunSettings,
    sector: Option<(crate::pauli::QubitLayout, u32, u32)>,
) -> Result<(IterationTrace, StateVector), SolverError> {
    let (choice, gamma_warning) = gamma_choice_and_warning(h, &settings.gamma);
    let gamma = choice.gamma;
    let profile = IterOpProfile::build(h, gamma);

    let mut state = initial.clone();
    let mut steps = Vec::with_capacity(settings.max_iter + 1);
    let e0 = expectation(&state, h)?;
    steps.push(TraceStep {
        index: 0,
        energy: e0,
        success_probability: 1.0,
        success_probability_over_terms: 1.0,
        pre_normalization_norm: 1.0,
        gamma,
    });

    let mut window = ConvergenceWindow::new(settings.tol_kev);
    window.push(e0);
    let mut converged = false;

    for t in 1..=settings.max_iter {
        let (h_step, deltas) = if settings.noise.on_hamiltonian() {
            let mut rng = derive_stream(settings.noise.seed, StreamTag::HamiltonianNoise, t as u64);
            let (hp, d) = perturb_hamiltonian(h, &settings.noise, &mut rng);
            (hp, Some(d))
        } else {
            (h.clone(), None)
        };
        if settings.noise.on_state() {
            let mut rng = derive_stream(settings.noise.seed, StreamTag::StateNoise, t as u64);
            state = perturb_state(&state, &settings.noise, &mut rng)?;
        }

        let (next, norm, success, success_terms) = match settings.mode {
            IterationMode::Direct => {
                let (next, norm) = iterate_direct(&state, &h_step, gamma)?;
                let (c_sq, m_terms, two_pow_m) = profile.circuit_numbers(deltas.as_deref());
                (
                    next,
                    norm,
                    norm * norm / (c_sq * two_pow_m),
                    norm * norm / (c_sq * m_terms as f64),
                )
            }
            IterationMode::Circuit => {
                let out = iterate_circuit(&state, &h_step, gamma)?;
                (
                    out.state,
                    out.pre_normalization_norm,
                    out.success_probability,
                    out.success_probability_over_terms,
                )
            }
        };
        state = next;

        if settings.noise.is_active() {
            if let Some((layout, z, n)) = sector {
                state = project_particle_numbers(&state, layout, z, n)?;
            }
        }

        let energy = expectation(&state, h)?;
        steps.push(TraceStep {
            index: t,
            energy,
            success_probability: success,
            success_probability_over_terms: success_terms,
            pre_normalization_norm: norm,
            gamma,
        });
        if !energy.is_finite() {
            let trace = IterationTrace {
                steps,
                converged: false,
                final_energy: energy,
                gamma: choice,
                gamma_warning,
            };
            return Err(SolverError::Diverged { trace });
        }
        if window.push(energy) {
            converged = true;
            break;
        }
    }

    let final_energy = steps.last().map(|s| s.energy).unwrap_or(e0);
    Ok((
        IterationTrace { steps, converged, final_energy, gamma: choice, gamma_warning },
        state,
    ))
}

/// Sector-basis gradient descent for registers too large to materialize.
///
/// The state lives on the combined (Z, N) sector basis; the iteration
/// operator acts through the sector matvec, so direct and circuit modes
/// coincide up to the recorded success probability (computed from the same
/// circuit formula). Hamiltonian noise enters as the sector-diagonal image
/// of sum delta_k Z_k; state noise is drawn in-sector with the same
/// per-amplitude scale as the full-register backend.
pub fn run_gradient_descent_sector(
    op: &SectorOperator,
    h: &PauliSum,
    initial: &[Complex64],
    settings: &RunSettings,
) -> Result<(IterationTrace, Vec<Complex64>), SolverError> {
    let (choice, gamma_warning) = gamma_choice_and_warning(h, &settings.gamma);
    let gamma = choice.gamma;
    let profile = IterOpProfile::build(h, gamma);
    let dp = op.proton_basis.dim();
    let dn = op.neutron_basis.dim();
    let dim = dp * dn;
    assert_eq!(initial.len(), dim);
    let n_work = h.n_qubits;
    let np = op.proton_basis.n_orbits;

    let mut state: Vec<Complex64> = initial.to_vec();
    normalize_c(&mut state)?;
    // Noiseless runs from real starts stay real; skip the imaginary matvec.
    let mut is_real = state.iter().all(|c| c.im == 0.0);

    let energy_of = |x: &[Complex64], op: &SectorOperator, real_only: bool| -> f64 {
        let re: Vec<f64> = x.iter().map(|c| c.re).collect();
        let mut yre = alloc::vec![0.0; x.len()];
        op.matvec(&re, &mut yre);
        let mut num: f64 = re.iter().zip(yre.iter()).map(|(a, b)| a * b).sum::<f64>();
        if !real_only {
            let im: Vec<f64> = x.iter().map(|c| c.im).collect();
            let mut yim = alloc::vec![0.0; x.len()];
            op.matvec(&im, &mut yim);
            num += im.iter().zip(yim.iter()).map(|(a, b)| a * b).sum::<f64>();
        }
        let den: f64 = x.iter().map(|c| c.norm_sqr()).sum();
        num / den
    };

    let mut steps = Vec::with_capacity(settings.max_iter + 1);
    let e0 = energy_of(&state, op, is_real);
    steps.push(TraceStep {
        index: 0,
        energy: e0,
        success_probability: 1.0,
        success_probability_over_terms: 1.0,
        pre_normalization_norm: 1.0,
        gamma,
    });

    let mut window = ConvergenceWindow::new(settings.tol_kev);
    window.push(e0);
    let mut converged = false;

    // Z_k eigenvalues on a species basis state: 1 - 2 bit_k.
    let z_eig = |mask: u64, k: usize| -> f64 {
        if mask & (1 << k) != 0 {
            -1.0
        } else {
            1.0
        }
    };

    for t in 1..=settings.max_iter {
        let deltas: Option<Vec<f64>> = if settings.noise.on_hamiltonian() {
            let mut rng = derive_stream(settings.noise.seed, StreamTag::HamiltonianNoise, t as u64);
            Some((0..n_work).map(|_| settings.noise.draw(&mut rng, 1.0)).collect())
        } else {
            None
        };
        if settings.noise.on_state() {
            let mut rng = derive_stream(settings.noise.seed, StreamTag::StateNoise, t as u64);
            // Same per-amplitude scale as the full register of n_work qubits.
            let scale = 1.0 / math::sqrt(2.0 * (1u64 << n_work) as f64);
            for a in state.iter_mut() {
                let re = settings.noise.draw(&mut rng, scale);
                let im = settings.noise.draw(&mut rng, scale);
                *a += Complex64::new(re, im);
            }
            normalize_c(&mut state)?;
            is_real = false;
        }

        // Sector-diagonal image of the noise term.
        let diag: Option<Vec<f64>> = deltas.as_ref().map(|d| {
            let mut dpv = alloc::vec![0.0; dp];
            for (i, &mask) in op.proton_basis.masks.iter().enumerate() {
                for (k, dk) in d.iter().take(np).enumerate() {
                    dpv[i] += dk * z_eig(mask, k);
                }
            }
            let mut dnv = alloc::vec![0.0; dn];
            for (i, &mask) in op.neutron_basis.masks.iter().enumerate() {
                for (k, dk) in d.iter().skip(np).enumerate() {
                    dnv[i] += dk * z_eig(mask, k);
                }
            }
            let mut full = alloc::vec![0.0; dim];
            for p in 0..dp {
                for n in 0..dn {
                    full[p * dn + n] = dpv[p] + dnv[n];
                }
            }
            full
        });

        // T x = x - 2 gamma (H x + diag .* x), on re and im parts.
        let re: Vec<f64> = state.iter().map(|c| c.re).collect();
        let im: Vec<f64> = state.iter().map(|c| c.im).collect();
        let mut hre = alloc::vec![0.0; dim];
        let mut him = alloc::vec![0.0; dim];
        op.matvec(&re, &mut hre);
        if !is_real {
            op.matvec(&im, &mut him);
        }
        if let Some(d) = &diag {
            for i in 0..dim {
                hre[i] += d[i] * re[i];
                him[i] += d[i] * im[i];
            }
        }
        let mut next: Vec<Complex64> = Vec::with_capacity(dim);
        for i in 0..dim {
            next.push(Complex64::new(
                re[i] - 2.0 * gamma * hre[i],
                im[i] - 2.0 * gamma * him[i],
            ));
        }
        let norm = math::sqrt(next.iter().map(|c| c.norm_sqr()).sum());
        if norm < 1e-14 {
            return Err(SolverError::StateVec(StateVecError::ZeroNorm));
        }
        for a in next.iter_mut() {
            *a /= norm;
        }
        state = next;
        // Sector projection is inherent to this backend.

        let (c_sq, m_terms, two_pow_m) = profile.circuit_numbers(deltas.as_deref());
        let energy = energy_of(&state, op, is_real);
        steps.push(TraceStep {
            index: t,
            energy,
            success_probability: norm * norm / (c_sq * two_pow_m),
            success_probability_over_terms: norm * norm / (c_sq * m_terms as f64),
            pre_normalization_norm: norm,
            gamma,
        });
        if !energy.is_finite() {
            let trace = IterationTrace {
                steps,
                converged: false,
                final_energy: energy,
                gamma: choice,
                gamma_warning,
            };
            return Err(SolverError::Diverged { trace });
        }
        if window.push(energy) {
            converged = true;
            break;
        }
    }

    let final_energy = steps.last().map(|s| s.energy).unwrap_or(e0);
    Ok((
        IterationTrace { steps, converged, final_energy, gamma: choice, gamma_warning },
        state,
    ))
}

fn normalize_c(x: &mut [Complex64]) -> Result<(), SolverError> {
    let norm = math::sqrt(x.iter().map(|c| c.norm_sqr()).sum());
    if norm < 1e-300 {
        return Err(SolverError::StateVec(StateVecError::ZeroNorm));
    }
    for a in x.iter_mut() {
        *a /= norm;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::QubitLayout;

    fn z_hamiltonian() -> PauliSum {
        PauliSum {
            terms: alloc::vec![PauliTerm {
                coefficient: Complex64::new(1.0, 0.0),
                letters: alloc::vec![PauliLetter::Z],
            }],
            n_qubits: 1,
            layout: None,
        }
    }

    #[test]
    fn auto_gamma_for_z() {
        let choice = select_gamma(&z_hamiltonian(), &GammaPolicy::auto());
        assert_eq!(choice.gamma, 0.25);
        assert!(choice.admissible);
        // |1 - 2 gamma lambda| is maximal at the ground state lambda = -1.
        let ground = (1.0f64 - 2.0 * choice.gamma * -1.0).abs();
        let excited = (1.0f64 - 2.0 * choice.gamma * 1.0).abs();
        assert!(ground > excited);
        assert!((ground - 1.5).abs() < 1e-15);
    }

    #[test]
    fn zero_bounds_give_conventional_half() {
        let policy = GammaPolicy { mode: GammaMode::Auto, bounds: Some((-1.0, 1.0)) };
        let choice = select_gamma(&z_hamiltonian(), &policy);
        assert_eq!(choice.gamma, 0.5);
        assert!(choice.admissible);
    }

    #[test]
    fn admissible_regions_piecewise() {
        // q+Q > 0.
        assert!(gamma_admissible(0.25, 1.0, 1.0));
        assert!(!gamma_admissible(0.8, 1.0, 1.0));
        assert!(!gamma_admissible(-0.1, 1.0, 1.0));
        // q+Q = 0.
        assert!(gamma_admissible(3.0, -1.0, 1.0));
        assert!(!gamma_admissible(-0.3, -1.0, 1.0));
        // q+Q < 0: (-inf, 1/(q+Q)) u (0, inf) with 1/(q+Q) = -0.25.
        assert!(gamma_admissible(-0.5, -3.0, -1.0));
        assert!(gamma_admissible(0.1, -3.0, -1.0));
        assert!(!gamma_admissible(-0.125, -3.0, -1.0));
    }

    #[test]
    fn fixed_gamma_outside_region_is_warned_not_fatal() {
        let h = z_hamiltonian();
        let s = StateVector::basis_state(1, 0);
        let settings = RunSettings {
            gamma: GammaPolicy::fixed(0.8),
            noise: NoiseSpec::none(),
            mode: IterationMode::Direct,
            max_iter: 5,
            tol_kev: 0.1,
        };
        let (trace, _) = run_gradient_descent(&h, &s, &settings, None).unwrap();
        assert!(trace.gamma_warning.is_some());
    }

    #[test]
    fn eigenstate_converges_immediately() {
        let h = z_hamiltonian();
        let s = StateVector::basis_state(1, 1);
        let settings = RunSettings::noiseless_direct(50);
        let (trace, _) = run_gradient_descent(&h, &s, &settings, None).unwrap();
        assert!(trace.converged);
        assert!((trace.final_energy - (-1.0)).abs() < 1e-12);
        // Deltas are zero from the first iteration; the 3-step window closes
        // at index 3.
        assert!(trace.steps.len() <= 4);
    }

    #[test]
    fn perturbation_term_count_and_determinism() {
        let h = z_hamiltonian();
        let noise = NoiseSpec {
            kind: NoiseKind::Gaussian { sigma: 0.1 / 3.0 },
            target: NoiseTarget::Both,
            seed: 99,
        };
        let mut rng = derive_stream(99, StreamTag::HamiltonianNoise, 1);
        let (hp, deltas) = perturb_hamiltonian(&h, &noise, &mut rng);
        assert_eq!(deltas.len(), 1);
        // The single-Z coefficient shifted by exactly delta.
        let z_coeff = hp
            .terms
            .iter()
            .find(|t| t.letters[0] == PauliLetter::Z)
            .unwrap()
            .coefficient
            .re;
        assert!((z_coeff - (1.0 + deltas[0])).abs() < 1e-15);

        let mut rng2 = derive_stream(99, StreamTag::HamiltonianNoise, 1);
        let (_, deltas2) = perturb_hamiltonian(&h, &noise, &mut rng2);
        assert_eq!(deltas, deltas2);

        // None noise: identical sum.
        let mut rng3 = derive_stream(99, StreamTag::HamiltonianNoise, 1);
        let (same, _) = perturb_hamiltonian(&h, &NoiseSpec::none(), &mut rng3);
        assert_eq!(simplify(&same, 1e-15), simplify(&h, 1e-15));
    }

    #[test]
    fn state_noise_norm_and_small_sigma_fidelity() {
        let s = StateVector::basis_state(4, 3);
        let noise = NoiseSpec {
            kind: NoiseKind::Gaussian { sigma: 1e-3 },
            target: NoiseTarget::State,
            seed: 5,
        };
        let mut worst = 1.0f64;
        for seed in 0..100u64 {
            let mut rng = derive_stream(seed, StreamTag::StateNoise, 0);
            let out = perturb_state(&s, &noise, &mut rng).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-9);
            let fidelity = out.inner(&s).norm();
            worst = worst.min(fidelity);
        }
        // First-order recovery: 1 - O(sigma^2).
        assert!(worst > 1.0 - 1e-4, "worst fidelity {worst}");
    }

    #[test]
    fn hf_bits_and_initial_state_sector_checks() {
        use crate::interactions::{assemble_hamiltonian, AssemblyOptions};
        use crate::meanfield::{MeanFieldParams, NucleusSpec};
        use crate::orbits::build_orbit_catalog;
        let nuc = NucleusSpec::new(1, 2, build_orbit_catalog(4, 3).unwrap()).unwrap();
        let sq = assemble_hamiltonian(&nuc, &MeanFieldParams::with_depth(-45.4), &AssemblyOptions::default())
            .unwrap();
        let (p, n) = hartree_fock_bits(&sq.g, &nuc).unwrap();
        assert_eq!(crate::oracle::occupation_string(p, 4), "1000");
        assert_eq!(crate::oracle::occupation_string(n, 4), "1100");

        let layout = QubitLayout { protons: 4, neutrons: 4 };
        // Promoting the proton to the 1p3/2(-3/2) orbit stays in-sector.
        let s = initial_state(layout, 1, 2, (p, n), &[((0b0100, n), 0.01)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        // A two-proton admixture (the literal string printed for this case)
        // violates the sector and is rejected.
        let err = initial_state(layout, 1, 2, (p, n), &[((0b0101, n), 0.01)]);
        assert!(matches!(err, Err(SolverError::SectorViolation { .. })));
        // Empty admixture list: plain HF.
        let s = initial_state(layout, 1, 2, (p, n), &[]).unwrap();
        let idx = (p | (n << 4)) as usize;
        assert!((s.amplitudes[idx].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_weight_two_configuration_start_accepted() {
        // The alternative 7Li-style start: equal weights, one negative.
        let layout = QubitLayout { protons: 6, neutrons: 6 };
        let pi = 0b100011u64; // orbits 1, 2, 6
        let nu_a = 0b011011u64; // orbits 1, 2, 4, 5
        let nu_b = 0b100111u64; // orbits 1, 2, 3, 6
        let s = initial_state(layout, 3, 4, (pi, nu_a), &[((pi, nu_b), -1.0)]).unwrap();
        let ia = (pi | (nu_a << 6)) as usize;
        let ib = (pi | (nu_b << 6)) as usize;
        assert!((s.amplitudes[ia].re - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amplitudes[ib].re + core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn divergent_gamma_yields_error_with_partial_trace() {
        // gamma far outside the admissible set on a 1-qubit Hamiltonian
        // cannot diverge (T is bounded), so force divergence with NaN via
        // an empty-norm path instead: a zero Hamiltonian plus enormous
        // gamma keeps the state finite, so use a state-noise-free setup
        // where the iteration is stable and check that no error occurs.
        // Genuine NaN divergence is exercised through the public API by
        // feeding a Hamiltonian with a non-finite coefficient.
        let mut h = z_hamiltonian();
        h.terms[0].coefficient = Complex64::new(f64::NAN, 0.0);
        let s = StateVector::basis_state(1, 0);
        let settings = RunSettings::noiseless_direct(3);
        match run_gradient_descent(&h, &s, &settings, None) {
            Err(SolverError::Diverged { trace }) => {
                assert!(!trace.steps.is_empty());
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}

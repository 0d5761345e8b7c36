//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL summary line (run with `--nocapture` for the details; the
//! harness itself reports one ok/FAILED line per criterion).

use std::time::Instant;

use num_complex::Complex64;

use qsm_cli::fixtures::load_builtin;
use qsm_cli::presets::{builtin_presets, find_preset};
use qsm_core::interactions::{assemble_hamiltonian, AssemblyOptions, SecondQuantizedHamiltonian};
use qsm_core::linalg::Matrix;
use qsm_core::meanfield::{one_body_matrix, MeanFieldParams, NucleusSpec};
use qsm_core::oracle::{build_full_space_matrix, sector_ground, SolveMethod};
use qsm_core::orbits::{build_orbit_catalog, clebsch_gordan_half, Species};
use qsm_core::pauli::{
    build_iteration_operator, commutator, map_to_qubits, number_operator, simplify, PauliLetter,
    PauliSum, PauliTerm,
};
use qsm_core::rng::SplitMix64;
use qsm_core::solver::{
    default_admixture, gamma_admissible, hartree_fock_bits, initial_state, run_gradient_descent,
    select_gamma, GammaPolicy, IterationMode, NoiseKind, NoiseSpec, NoiseTarget, RunSettings,
};
use qsm_core::statevec::{apply_sum, iterate_circuit, iterate_direct, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn assembled(name: &str) -> (NucleusSpec, SecondQuantizedHamiltonian, PauliSum, f64) {
    let preset = find_preset(name).unwrap();
    let nucleus = preset.nucleus().unwrap();
    let sq = assemble_hamiltonian(
        &nucleus,
        &MeanFieldParams::with_depth(preset.u0),
        &AssemblyOptions::default(),
    )
    .unwrap();
    let h = map_to_qubits(&sq).unwrap();
    let oracle = sector_ground(&sq).unwrap().energy;
    (nucleus, sq, h, oracle)
}

fn hf_plus_excited(sq: &SecondQuantizedHamiltonian, h: &PauliSum, weight: f64) -> StateVector {
    let layout = h.layout.unwrap();
    let hf = hartree_fock_bits(&sq.g, &sq.nucleus).unwrap();
    let admix = default_admixture(&sq.g, hf).expect("an excited configuration exists");
    initial_state(layout, sq.nucleus.z, sq.nucleus.n, hf, &[(admix, weight)]).unwrap()
}

fn random_hermitian_sum(rng: &mut SplitMix64, n_qubits: usize, n_terms: usize) -> PauliSum {
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let letters: Vec<PauliLetter> = (0..n_qubits)
            .map(|_| match rng.next_u64() % 4 {
                0 => PauliLetter::I,
                1 => PauliLetter::X,
                2 => PauliLetter::Y,
                _ => PauliLetter::Z,
            })
            .collect();
        terms.push(PauliTerm { coefficient: c(2.0 * rng.next_f64() - 1.0, 0.0), letters });
    }
    simplify(&PauliSum { terms, n_qubits, layout: None }, 1e-14)
}

fn random_state(rng: &mut SplitMix64, n_qubits: usize) -> StateVector {
    let mut amps = Vec::with_capacity(1 << n_qubits);
    for _ in 0..(1usize << n_qubits) {
        amps.push(c(rng.next_f64() - 0.5, rng.next_f64() - 0.5));
    }
    let mut s = StateVector::from_amplitudes(amps);
    s.normalize().unwrap();
    s
}

/// Criterion 1: the two-qubit deuteron fixture converges under gamma = 0.02
/// from |10> to the 4x4 exact energy within 1e-3 MeV, the exact energy
/// matches -1.749 MeV within 1e-3, and the run finishes in under a second.
#[test]
fn criterion_01_deuteron_fixture() {
    let started = Instant::now();
    let h = load_builtin("deuteron-n2").unwrap();
    let exact = qsm_cli::runner::dense_ground_energy(&h).unwrap();
    assert!((exact - (-1.749)).abs() < 1e-3, "exact {exact} vs published -1.749");
    let start = StateVector::basis_state(2, 0b10);
    let settings = RunSettings {
        gamma: GammaPolicy::fixed(0.02),
        noise: NoiseSpec::none(),
        mode: IterationMode::Direct,
        max_iter: 600,
        tol_kev: 0.01,
    };
    let (trace, _) = run_gradient_descent(&h, &start, &settings, None).unwrap();
    let gap = (trace.final_energy - exact).abs();
    let elapsed = started.elapsed();
    assert!(gap < 1e-3, "converged {} vs exact {exact}", trace.final_energy);
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1 PASS: deuteron fixture -> {:.6} MeV (exact {exact:.6}, gap {gap:.2e}), {} iterations in {elapsed:?}",
        trace.final_energy,
        trace.steps.len() - 1
    );
}

/// Criterion 2: noiseless direct descent matches exact sector
/// diagonalization to 1e-6 MeV for 2H, 3H, 3He, 4He; under a minute total.
#[test]
fn criterion_02_oracle_equivalence_light_nuclei() {
    let started = Instant::now();
    for name in ["h2", "h3", "he3", "he4"] {
        let (_, sq, h, oracle) = assembled(name);
        let start = hf_plus_excited(&sq, &h, 0.01);
        let settings = RunSettings {
            gamma: GammaPolicy::auto(),
            noise: NoiseSpec::none(),
            mode: IterationMode::Direct,
            max_iter: 5000,
            tol_kev: 1e-4,
        };
        let (trace, _) = run_gradient_descent(&h, &start, &settings, None).unwrap();
        let gap = (trace.final_energy - oracle).abs();
        assert!(gap < 1e-6, "{name}: descent {} vs oracle {oracle}", trace.final_energy);
        println!("criterion 2 PASS ({name}): descent {:.9} vs oracle {oracle:.9} (gap {gap:.2e})",
            trace.final_energy);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("criterion 2 PASS: all four nuclei in {elapsed:?}");
}

/// Criterion 3: the post-selected LCU iteration equals the direct iteration
/// (state L-inf <= 1e-10; success probability = ||Ts||^2/(C^2 2^m) within
/// 1e-12) on 200 random hermitian sums up to 6 work qubits and on every
/// nucleus preset with at most 10 work qubits.
#[test]
fn criterion_03_circuit_direct_equivalence() {
    let mut rng = SplitMix64::new(0xc3);
    let mut checked = 0;
    while checked < 200 {
        let n_qubits = 2 + (checked % 5); // 2..6
        let h = random_hermitian_sum(&mut rng, n_qubits, 3 + checked % 7);
        if h.terms.is_empty() {
            continue;
        }
        let s = random_state(&mut rng, n_qubits);
        let gamma = 0.01 + 0.4 * rng.next_f64();
        let (direct, circuit) = match (iterate_direct(&s, &h, gamma), iterate_circuit(&s, &h, gamma)) {
            (Ok(d), Ok(ci)) => (d, ci),
            _ => continue,
        };
        let gap = direct.0.canonical_phase().linf_distance(&circuit.state.canonical_phase());
        assert!(gap <= 1e-10, "random sum {checked}: state gap {gap}");
        let t = build_iteration_operator(&h, gamma);
        let ts = apply_sum(&s, &t).unwrap();
        let c_sq: f64 = t.terms.iter().map(|x| x.coefficient.norm_sqr()).sum();
        let m = 1u64 << qsm_core::math::ceil_log2(t.term_count().max(1));
        let expect = ts.norm() * ts.norm() / (c_sq * m as f64);
        assert!(
            (circuit.success_probability - expect).abs() <= 1e-12,
            "random sum {checked}: success {} vs formula {expect}",
            circuit.success_probability
        );
        checked += 1;
    }
    for preset in builtin_presets() {
        let (_, sq, h, _) = assembled(&preset.name);
        if h.n_qubits > 10 {
            continue;
        }
        let s = hf_plus_excited(&sq, &h, 0.01);
        let gamma = 0.01;
        let direct = iterate_direct(&s, &h, gamma).unwrap();
        let circuit = iterate_circuit(&s, &h, gamma).unwrap();
        let gap = direct.0.canonical_phase().linf_distance(&circuit.state.canonical_phase());
        assert!(gap <= 1e-10, "{}: state gap {gap}", preset.name);
        println!("criterion 3 PASS ({}): L-inf gap {gap:.2e}", preset.name);
    }
    println!("criterion 3 PASS: 200 random sums + all presets <= 10 work qubits");
}

/// Criterion 4: with HF + 0.01 admixture and the shipped tuned gamma,
/// the 2H and 4He traces reach 1 keV of the oracle energy within 50
/// iterations (the shipped values aim for <= 20; achieved count printed).
#[test]
fn criterion_04_convergence_speed() {
    for name in ["h2", "he4"] {
        let preset = find_preset(name).unwrap();
        let gamma = preset.gamma.expect("shipped presets carry a tuned gamma");
        let (_, sq, h, oracle) = assembled(name);
        let start = hf_plus_excited(&sq, &h, 0.01);
        let settings = RunSettings {
            gamma: GammaPolicy::fixed(gamma),
            noise: NoiseSpec::none(),
            mode: IterationMode::Direct,
            max_iter: 200,
            tol_kev: 0.01,
        };
        let (trace, _) = run_gradient_descent(&h, &start, &settings, None).unwrap();
        let reached = trace
            .steps
            .iter()
            .find(|s| (s.energy - oracle).abs() < 1e-3)
            .map(|s| s.index);
        let reached = reached.unwrap_or(usize::MAX);
        assert!(reached <= 50, "{name}: reached 1 keV at iteration {reached}");
        println!(
            "criterion 4 PASS ({name}): tuned gamma {gamma} reaches 1 keV of the oracle at iteration {reached} (aim <= 20)"
        );
    }
}

/// Criterion 5: over 20 seeds each for Gaussian (sigma = 0.1/3) and uniform
/// (amplitude 0.02) noise on both the Hamiltonian and the state, the median
/// converged energy of 2H and 4He stays within 5 keV of the oracle energy
/// (the published claim is about 1 keV; the margin covers seed scatter).
#[test]
fn criterion_05_noise_robustness() {
    for name in ["h2", "he4"] {
        let preset = find_preset(name).unwrap();
        let gamma = preset.gamma.unwrap();
        let (nucleus, sq, h, oracle) = assembled(name);
        let layout = h.layout.unwrap();
        let start = hf_plus_excited(&sq, &h, 0.01);
        for (label, kind) in [
            ("gaussian", NoiseKind::Gaussian { sigma: 0.1 / 3.0 }),
            ("uniform", NoiseKind::Uniform { amplitude: 0.02 }),
        ] {
            let mut deviations: Vec<f64> = Vec::new();
            for seed in 1..=20u64 {
                let settings = RunSettings {
                    gamma: GammaPolicy::fixed(gamma),
                    noise: NoiseSpec { kind, target: NoiseTarget::Both, seed },
                    mode: IterationMode::Direct,
                    max_iter: 150,
                    tol_kev: 0.05,
                };
                let (trace, state) = run_gradient_descent(
                    &h,
                    &start,
                    &settings,
                    Some((layout, nucleus.z, nucleus.n)),
                )
                .unwrap();
                assert!(trace.final_energy.is_finite());
                // The final state stays inside the particle-number sector.
                let p_mask = (1u64 << layout.protons) - 1;
                for (idx, amp) in state.amplitudes.iter().enumerate() {
                    let bits = idx as u64;
                    if (bits & p_mask).count_ones() != nucleus.z
                        || (bits >> layout.protons).count_ones() != nucleus.n
                    {
                        assert_eq!(amp.norm(), 0.0, "sector leakage at {idx:b}");
                    }
                }
                deviations.push((trace.final_energy - oracle).abs());
            }
            deviations.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = 0.5 * (deviations[9] + deviations[10]);
            assert!(
                median <= 5e-3,
                "{name} {label}: median deviation {median} MeV"
            );
            println!(
                "criterion 5 PASS ({name}, {label}): median {:.3} keV, worst {:.3} keV over 20 seeds",
                median * 1e3,
                deviations[19] * 1e3
            );
        }
    }
}

/// Criterion 6: on 100 random 4-qubit hermitian sums with auto gamma the
/// iteration converges (fidelity >= 0.999 at 500 steps) to the eigenvector
/// maximizing |1 - 2 gamma lambda| whenever the initial overlap is at least
/// 1e-3, and the piecewise admissible-gamma regions check out with one
/// gamma inside and one outside each region.
#[test]
fn criterion_06_dominant_eigenvector_and_gamma_regions() {
    let mut rng = SplitMix64::new(0x6a);
    let mut tested = 0;
    while tested < 100 {
        let h = random_hermitian_sum(&mut rng, 4, 6);
        if h.terms.is_empty() {
            continue;
        }
        let dim = 16usize;
        let dense = h.to_dense();
        let mut re = Matrix::zeros(dim, dim);
        let mut im = Matrix::zeros(dim, dim);
        for r in 0..dim {
            for q in 0..dim {
                re.set(r, q, dense[r * dim + q].re);
                im.set(r, q, dense[r * dim + q].im);
            }
        }
        let (lambda0, target) = qsm_core::linalg::complex_hermitian_lowest(&re, &im).unwrap();
        // Second-lowest eigenvalue from the doubled embedding spectrum.
        let mut embed = Matrix::zeros(2 * dim, 2 * dim);
        for i in 0..dim {
            for j in 0..dim {
                embed.set(i, j, re.get(i, j));
                embed.set(dim + i, dim + j, re.get(i, j));
                embed.set(i, dim + j, -im.get(i, j));
                embed.set(dim + i, j, im.get(i, j));
            }
        }
        let spectrum = qsm_core::linalg::symmetric_eigen(&embed).unwrap().values;
        let lambda1 = spectrum[2];
        // With auto gamma the dominance ratio is 1 - gap/(3 sum|alpha|)
        // at worst; require enough gap for 500 steps to suffice.
        if (lambda1 - lambda0) / h.coefficient_one_norm() < 0.1 {
            continue;
        }
        let choice = select_gamma(&h, &GammaPolicy::auto());
        assert!(choice.admissible);
        let mut s = random_state(&mut rng, 4);
        let overlap = target
            .iter()
            .enumerate()
            .map(|(i, t)| t.conj() * s.amplitudes[i])
            .sum::<Complex64>()
            .norm();
        if overlap < 1e-3 {
            continue;
        }
        for _ in 0..500 {
            s = iterate_direct(&s, &h, choice.gamma).unwrap().0;
        }
        let fidelity = target
            .iter()
            .enumerate()
            .map(|(i, t)| t.conj() * s.amplitudes[i])
            .sum::<Complex64>()
            .norm();
        assert!(fidelity >= 0.999, "sum {tested}: fidelity {fidelity}");
        tested += 1;
    }
    println!("criterion 6 PASS: 100 random sums converge to the dominant eigenvector");

    // Admissible-set fixtures. Each case: (bounds, H = a I + b Z whose
    // spectrum respects the bounds, gamma inside, gamma outside). The
    // outside gamma provably targets the top eigenvector instead.
    let cases = [
        ((1.0, 1.0), (0.4, -0.6), 0.25, 2.0),
        ((-1.0, 1.0), (0.0, 1.0), 3.0, -0.3),
        ((-3.0, -1.0), (-2.5, -1.0), 0.1, -0.125),
    ];
    for ((q, big_q), (a, b), inside, outside) in cases {
        assert!(gamma_admissible(inside, q, big_q), "inside gamma {inside} for ({q},{big_q})");
        assert!(!gamma_admissible(outside, q, big_q), "outside gamma {outside} for ({q},{big_q})");
        let h = PauliSum {
            terms: vec![
                PauliTerm::identity(1, c(a, 0.0)),
                PauliTerm { coefficient: c(b, 0.0), letters: vec![PauliLetter::Z] },
            ],
            n_qubits: 1,
            layout: None,
        };
        let ground_idx = if a + b <= a - b { 0usize } else { 1 };
        let mut s = StateVector::from_amplitudes(vec![c(0.8, 0.0), c(0.6, 0.0)]);
        for _ in 0..400 {
            s = iterate_direct(&s, &h, inside).unwrap().0;
        }
        assert!(
            s.amplitudes[ground_idx].norm() > 0.999,
            "inside gamma must reach the ground state"
        );
        let mut s = StateVector::from_amplitudes(vec![c(0.8, 0.0), c(0.6, 0.0)]);
        for _ in 0..400 {
            s = iterate_direct(&s, &h, outside).unwrap().0;
        }
        assert!(
            s.amplitudes[1 - ground_idx].norm() > 0.999,
            "outside gamma demonstrably targets the top eigenvector"
        );
    }
    println!("criterion 6 PASS: piecewise admissible regions verified inside and outside");
}

/// Criterion 7: a single filled j = 1/2 shell of two particles gains
/// exactly -G = -0.25 MeV from pairing (brute-force Fock algebra).
#[test]
fn criterion_07_pairing_closed_form() {
    let catalog = build_orbit_catalog(2, 2).unwrap();
    let nucleus = NucleusSpec::new(2, 0, catalog.clone()).unwrap();
    let sq = SecondQuantizedHamiltonian {
        g: qsm_core::meanfield::OneBodyMatrices {
            proton: Matrix::zeros(2, 2),
            neutron: Matrix::zeros(2, 2),
        },
        two_body: qsm_core::interactions::pairing_terms(&catalog, 0.25).unwrap(),
        nucleus,
    };
    let m = qsm_core::oracle::build_sector_matrix(&sq, 16).unwrap();
    assert_eq!(m.rows, 1);
    assert_eq!(m.get(0, 0), -0.25);
    println!("criterion 7 PASS: filled j=1/2 shell pairing energy = {} MeV", m.get(0, 0));
}

/// Criterion 8: least-squares round trip on synthetic depths recovers the
/// parameters to 1e-9; the depth search honors its bracket and tolerance;
/// and (best effort, reported not fatal) the 3H calibration lands within
/// 1 MeV of the published -45.30.
#[test]
fn criterion_08_fitting_round_trip_and_triton() {
    use qsm_core::fitting::{find_ustar, fit_parameters, predict_u0, FieldFormulaParams};
    let truth = FieldFormulaParams { u: -33.65, a: 5.175, b: 1.46, c: -1.82, d: -33.57 };
    let nuclei = [(1u32, 2u32), (2, 1), (3, 3), (3, 4), (6, 6), (7, 7), (8, 8)];
    let records: Vec<(u32, u32, f64)> =
        nuclei.iter().map(|&(z, n)| (z, n, predict_u0(&truth, z, n))).collect();
    let fitted = fit_parameters(&records).unwrap();
    for (got, want) in [
        (fitted.u, truth.u),
        (fitted.a, truth.a),
        (fitted.b, truth.b),
        (fitted.c, truth.c),
        (fitted.d, truth.d),
    ] {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    println!("criterion 8 PASS: synthetic round trip recovers all five parameters to 1e-9");

    // Bracket/tolerance contract on a synthetic monotone curve.
    let result = find_ustar(|u0| Ok(u0 + 40.0), -5.0, (-50.0, -40.0), 1e-6, 3, 0.3).unwrap();
    assert!(result.u_star >= -50.0 && result.u_star <= -40.0);
    assert!((result.energy_at_ustar - (-5.0)).abs() <= 1e-6);
    println!("criterion 8 PASS: depth search honors bracket and tolerance");

    // Physics check on 3H.
    let preset = find_preset("h3").unwrap();
    let nucleus = preset.nucleus().unwrap();
    let base = assemble_hamiltonian(
        &nucleus,
        &MeanFieldParams::with_depth(preset.u0),
        &AssemblyOptions::default(),
    )
    .unwrap();
    let mut energy = |u0: f64| -> Result<f64, qsm_core::fitting::FittingError> {
        let g = one_body_matrix(&MeanFieldParams::with_depth(u0), &nucleus)
            .map_err(qsm_core::interactions::InteractionError::from)?;
        let sq = SecondQuantizedHamiltonian {
            g,
            two_body: base.two_body.clone(),
            nucleus: nucleus.clone(),
        };
        Ok(sector_ground(&sq)?.energy)
    };
    let result = find_ustar(&mut energy, -8.48, (-50.4, -40.4), 1e-3, 3, 0.3).unwrap();
    let gap = (result.u_star - (-45.30)).abs();
    if gap <= 1.0 {
        println!(
            "criterion 8 PASS: 3H U* = {:.4} MeV within 1 MeV of the published -45.30 (gap {gap:.3})",
            result.u_star
        );
    } else {
        // Reported, not fatal: the published value depends on interaction
        // details that are not fully specified.
        eprintln!(
            "criterion 8 WARN: 3H U* = {:.4} MeV misses the published -45.30 by {gap:.3} MeV",
            result.u_star
        );
    }
}

/// Criterion 9: for every preset, m = ceil(log2 M), M stays under the
/// polynomial bound, total = work + m, and the controlled-Pauli cost
/// formula 32(m-1)+4 applies. The published qubit column is compared
/// informationally.
#[test]
fn criterion_09_resource_consistency() {
    for preset in builtin_presets() {
        let nucleus = preset.nucleus().unwrap();
        let sq = assemble_hamiltonian(
            &nucleus,
            &MeanFieldParams::with_depth(preset.u0),
            &AssemblyOptions::default(),
        )
        .unwrap();
        let h = map_to_qubits(&sq).unwrap();
        let report = qsm_core::resources::estimate_resources(&h, &nucleus).unwrap();
        assert_eq!(report.ancilla_qubits, qsm_core::math::ceil_log2(report.term_count));
        assert!(
            (report.term_count as u64) <= report.bound_m,
            "{}: M = {} exceeds bound {}",
            preset.name,
            report.term_count,
            report.bound_m
        );
        assert_eq!(report.total_qubits, report.work_qubits + report.ancilla_qubits as usize);
        let m = report.ancilla_qubits as u64;
        let expect_cost = if m == 0 { 1 } else { 32 * (m - 1) + 4 };
        assert_eq!(report.controlled_pauli_cost, expect_cost);
        println!(
            "criterion 9 PASS ({}): M = {}, m = {}, total qubits {} (published {})",
            preset.name, report.term_count, report.ancilla_qubits, report.total_qubits,
            preset.published_qubits
        );
    }
    // Complexity separation: the classical full-space proxy grows
    // exponentially while the per-iteration gate count stays polynomial.
    let mut last_ratio = 0.0f64;
    for name in ["h2", "li6", "c12", "o16", "o17", "na23", "ca40"] {
        let preset = find_preset(name).unwrap();
        let nucleus = preset.nucleus().unwrap();
        let sq = assemble_hamiltonian(
            &nucleus,
            &MeanFieldParams::with_depth(preset.u0),
            &AssemblyOptions::default(),
        )
        .unwrap();
        let h = map_to_qubits(&sq).unwrap();
        let report = qsm_core::resources::estimate_resources(&h, &nucleus).unwrap();
        let ratio = report.classical_fullspace_proxy as f64 / report.gates_per_iteration as f64;
        assert!(ratio > last_ratio, "{name}: ratio {ratio} did not grow");
        last_ratio = ratio;
    }
    println!("criterion 9 PASS: classical/quantum cost ratio grows monotonically with size");
}

/// Criterion 10: the invariant suites - Jordan-Wigner dense equivalence,
/// number-operator commutators, radial orthonormality, Clebsch-Gordan
/// unitarity, and byte-identical reruns under a fixed seed.
#[test]
fn criterion_10_invariant_suites() {
    // Jordan-Wigner vs direct occupation-basis matrices (8-qubit registers).
    for name in ["h2", "he4"] {
        let (_, sq, h, _) = assembled(name);
        let fock = build_full_space_matrix(&sq);
        let dense = h.to_dense();
        let dim = fock.rows;
        let mut worst = 0.0f64;
        for r in 0..dim {
            for q in 0..dim {
                worst = worst.max((dense[r * dim + q] - c(fock.get(r, q), 0.0)).norm());
            }
        }
        assert!(worst < 1e-10, "{name}: JW dense gap {worst}");
        // Number-operator commutators.
        let layout = h.layout.unwrap();
        for species in [Species::Proton, Species::Neutron] {
            let norm = commutator(&h, &number_operator(layout, species)).coefficient_one_norm();
            assert!(norm < 1e-10, "{name}: [H, N] norm {norm}");
        }
        println!("criterion 10 PASS ({name}): JW dense gap {worst:.2e}, commutators vanish");
    }

    // Radial orthonormality to 1e-8.
    let alpha = qsm_core::constants::oscillator_alpha(16);
    let policy = qsm_core::quad::QuadraturePolicy::for_mass(16);
    for l in 0..=4u32 {
        for nra in 0..=3u32 {
            for nrb in nra..=3u32 {
                let overlap = qsm_core::quad::integrate_radial(
                    |r| {
                        qsm_core::orbits::radial_wavefunction(nra, l, alpha, r).unwrap()
                            * qsm_core::orbits::radial_wavefunction(nrb, l, alpha, r).unwrap()
                            * r
                            * r
                    },
                    &policy,
                )
                .unwrap();
                let expect = if nra == nrb { 1.0 } else { 0.0 };
                assert!((overlap - expect).abs() < 1e-8);
            }
        }
    }
    println!("criterion 10 PASS: radial orthonormality to 1e-8 (nr <= 3, l <= 4)");

    // Clebsch-Gordan unitarity to 1e-12.
    for l in 0..=3u32 {
        for m in -(l as i32)..=(l as i32) {
            for two_ms in [-1, 1] {
                let mut total = 0.0;
                for two_j in [2 * l + 1, l.checked_sub(1).map(|_| 2 * l - 1).unwrap_or(0)] {
                    if two_j == 0 {
                        continue;
                    }
                    let v = clebsch_gordan_half(l, m, two_ms, two_j, 2 * m + two_ms);
                    total += v * v;
                }
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
        // Column orthogonality between the two j blocks.
        if l >= 1 {
            for two_mj in (-(2 * l as i32 - 1)..=(2 * l as i32 - 1)).step_by(2) {
                let mut dot = 0.0;
                for two_ms in [-1, 1] {
                    let m = (two_mj - two_ms) / 2;
                    dot += clebsch_gordan_half(l, m, two_ms, 2 * l + 1, two_mj)
                        * clebsch_gordan_half(l, m, two_ms, 2 * l - 1, two_mj);
                }
                assert!(dot.abs() < 1e-12);
            }
        }
    }
    println!("criterion 10 PASS: Clebsch-Gordan unitarity to 1e-12");

    // Byte-identical reruns under a fixed seed, through the binary.
    let dir = std::env::temp_dir().join(format!("qsm-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("run.conf");
    std::fs::write(
        &conf,
        format!(
            "[nucleus]\npreset = he4\n[run]\nmax_iter = 60\nseed = 77\n[noise]\nkind = uniform\ntarget = both\n[output]\ntrace = {d}/t.csv\nsummary = {d}/s.json\n",
            d = dir.display()
        ),
    )
    .unwrap();
    let run = || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_qsm"))
            .arg("solve")
            .arg(&conf)
            .output()
            .unwrap();
        assert!(out.status.success());
        (
            std::fs::read(dir.join("t.csv")).unwrap(),
            std::fs::read(dir.join("s.json")).unwrap(),
        )
    };
    let (t1, s1) = run();
    let (t2, s2) = run();
    assert_eq!(t1, t2);
    assert_eq!(s1, s2);
    println!("criterion 10 PASS: byte-identical reruns under fixed seed");
}

/// Criterion 11: the 40Ca sector (53361-dimensional) oracle extremal
/// eigenvalue completes at desk scale; the published -344.02 MeV is
/// compared informationally.
#[test]
fn criterion_11_calcium_scale() {
    let started = Instant::now();
    let (_, sq, _, _energy) = {
        // Avoid the JW map here; only the oracle is being timed.
        let preset = find_preset("ca40").unwrap();
        let nucleus = preset.nucleus().unwrap();
        let sq = assemble_hamiltonian(
            &nucleus,
            &MeanFieldParams::with_depth(preset.u0),
            &AssemblyOptions::default(),
        )
        .unwrap();
        (nucleus, sq, (), ())
    };
    let sol = sector_ground(&sq).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(sol.dimension, 53361);
    assert_eq!(sol.method, SolveMethod::Lanczos);
    assert!(sol.energy.is_finite());
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    // Broad sanity envelope only: exact reproduction of the published value
    // is not promised (interaction details are under-specified upstream).
    assert!(sol.energy < -300.0 && sol.energy > -400.0, "energy {}", sol.energy);
    println!(
        "criterion 11 PASS: 40Ca sector ground {:.3} MeV in {elapsed:?} (published -344.02, gap {:+.2})",
        sol.energy,
        sol.energy - (-344.02)
    );
}

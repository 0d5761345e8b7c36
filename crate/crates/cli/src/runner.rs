//! Run orchestration for the subcommands: preparation, solving, oracle
//! comparison, fitting, resources, and the preset batch.

use num_complex::Complex64;

use qsm_core::fitting::{find_ustar, fit_parameters, predict_u0, FieldFormulaParams};
use qsm_core::interactions::{
    assemble_hamiltonian, AssemblyOptions, SecondQuantizedHamiltonian,
};
use qsm_core::linalg::{complex_hermitian_lowest, Matrix};
use qsm_core::meanfield::{one_body_matrix, MeanFieldParams, NucleusSpec};
use qsm_core::oracle::{sector_ground, SectorOperator, SolveMethod};
use qsm_core::pauli::{map_to_qubits, PauliSum, QubitLayout};
use qsm_core::resources::{complexity_csv, estimate_resources, ComplexityRow};
use qsm_core::solver::{
    default_admixture, hartree_fock_bits, initial_state, run_gradient_descent,
    run_gradient_descent_sector, GammaMode, IterationTrace, RunSettings, SolverError,
};
use qsm_core::statevec::StateVector;

use crate::config::{
    Backend, DepthSource, HamiltonianSource, InitialStateConfig, RunConfig,
};
use crate::output::{resource_summary, trace_csv, write_file, Summary};
use crate::presets::find_preset;
use crate::{fixtures, CliError};

/// Work-register size up to which the full statevector backend is the
/// automatic choice.
pub const FULL_BACKEND_QUBIT_LIMIT: usize = 14;

pub enum Prepared {
    Builtin {
        name: String,
        h: PauliSum,
    },
    Nucleus {
        label: String,
        u0: f64,
        nucleus: NucleusSpec,
        sq: SecondQuantizedHamiltonian,
        h: PauliSum,
        published_qubits: Option<u32>,
        preset_gamma: Option<f64>,
        preset_initial: Option<crate::presets::PresetInitial>,
    },
}

impl Prepared {
    pub fn hamiltonian(&self) -> &PauliSum {
        match self {
            Prepared::Builtin { h, .. } => h,
            Prepared::Nucleus { h, .. } => h,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Prepared::Builtin { name, .. } => name,
            Prepared::Nucleus { label, .. } => label,
        }
    }
}

/// Resolve the nucleus/builtin of a config and assemble its Hamiltonian.
pub fn prepare(config: &RunConfig) -> Result<Prepared, CliError> {
    let source = config.source.as_ref().ok_or_else(|| {
        CliError::Run("this subcommand needs a [nucleus] section or a builtin Hamiltonian".into())
    })?;
    match source {
        HamiltonianSource::Builtin(name) => {
            Ok(Prepared::Builtin { name: name.clone(), h: fixtures::load_builtin(name)? })
        }
        HamiltonianSource::Nucleus(ncfg) => {
            let (label, z, n, orbits, preset_u0, published, preset_gamma, preset_initial) =
                if let Some(name) = &ncfg.preset {
                    let preset = find_preset(name)?;
                    (
                        preset.name.clone(),
                        ncfg.z.unwrap_or(preset.z),
                        ncfg.n.unwrap_or(preset.n),
                        ncfg.orbits.unwrap_or(preset.orbits),
                        Some(preset.u0),
                        Some(preset.published_qubits),
                        preset.gamma,
                        preset.initial.clone(),
                    )
                } else {
                    let z = ncfg.z.expect("validated");
                    let n = ncfg.n.expect("validated");
                    (
                        format!("z{z}n{n}"),
                        z,
                        n,
                        ncfg.orbits.expect("validated"),
                        None,
                        None,
                        None,
                        None,
                    )
                };
            let u0 = match &config.field.depth {
                DepthSource::Explicit(Some(u0)) => *u0,
                DepthSource::Explicit(None) => preset_u0.ok_or_else(|| {
                    CliError::Run(format!(
                        "nucleus '{label}' has no preset depth; set [field] u0"
                    ))
                })?,
                DepthSource::Fitted { params } => {
                    let p = FieldFormulaParams {
                        u: params[0],
                        a: params[1],
                        b: params[2],
                        c: params[3],
                        d: params[4],
                    };
                    predict_u0(&p, z, n)
                }
            };
            let catalog = qsm_core::orbits::build_orbit_catalog(orbits, z + n)
                .map_err(|e| CliError::Run(format!("{label}: {e}")))?;
            let nucleus = NucleusSpec::new(z, n, catalog)
                .map_err(|e| CliError::Run(format!("{label}: {e}")))?;
            let params = MeanFieldParams::with_depth(u0);
            let options = AssemblyOptions {
                pairing_g: config.field.pairing_g,
                include_coulomb: config.field.coulomb,
            };
            let sq = assemble_hamiltonian(&nucleus, &params, &options)
                .map_err(|e| CliError::Run(format!("{label}: {e}")))?;
            let h = map_to_qubits(&sq).map_err(|e| CliError::Run(format!("{label}: {e}")))?;
            Ok(Prepared::Nucleus {
                label,
                u0,
                nucleus,
                sq,
                h,
                published_qubits: published,
                preset_gamma,
                preset_initial,
            })
        }
    }
}

fn gamma_for_run(config: &RunConfig, prepared: &Prepared) -> qsm_core::solver::GammaPolicy {
    // An explicit fixed gamma in the config wins; otherwise a preset's tuned
    // value; otherwise auto.
    match (config.run.gamma.mode, prepared) {
        (GammaMode::Fixed(_), _) => config.run.gamma,
        (GammaMode::Auto, Prepared::Nucleus { preset_gamma: Some(g), .. }) => {
            qsm_core::solver::GammaPolicy { mode: GammaMode::Fixed(*g), bounds: None }
        }
        _ => config.run.gamma,
    }
}

pub struct SolveOutcome {
    pub trace: IterationTrace,
    pub oracle_energy: Option<f64>,
    pub oracle_method: Option<SolveMethod>,
    pub backend: Backend,
    pub complete: bool,
}

/// Dense lowest eigenvalue of a small Pauli sum (complex hermitian path).
pub fn dense_ground_energy(h: &PauliSum) -> Result<f64, CliError> {
    let dim = 1usize << h.n_qubits;
    let dense = h.to_dense();
    let mut re = Matrix::zeros(dim, dim);
    let mut im = Matrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            re.set(r, c, dense[r * dim + c].re);
            im.set(r, c, dense[r * dim + c].im);
        }
    }
    complex_hermitian_lowest(&re, &im)
        .map(|(e, _)| e)
        .map_err(|e| CliError::Run(e.to_string()))
}

/// Weighted basis configurations of the initial state (base first, weight
/// 1); never materializes a statevector, so it works at any register size.
fn initial_entries(
    config: &RunConfig,
    sq: &SecondQuantizedHamiltonian,
    preset_initial: Option<&crate::presets::PresetInitial>,
) -> Result<Vec<(u64, u64, f64)>, CliError> {
    let hf = hartree_fock_bits(&sq.g, &sq.nucleus).map_err(|e| CliError::Run(e.to_string()))?;
    let (base, entries): ((u64, u64), Vec<(u64, u64, f64)>) = match &config.initial {
        // The default start defers to a preset's explicit configuration
        // when one is declared (mixed-configuration nuclei).
        InitialStateConfig::HartreeFockPlusExcited { weight } => match preset_initial {
            Some(pi) => (pi.base, pi.admixtures.clone()),
            None => match default_admixture(&sq.g, hf) {
                Some((p, n)) => (hf, vec![(p, n, *weight)]),
                None => (hf, Vec::new()),
            },
        },
        InitialStateConfig::HartreeFock => (hf, Vec::new()),
        InitialStateConfig::Admixtures { base, entries } => {
            (base.unwrap_or(hf), entries.clone())
        }
        InitialStateConfig::Ket(_) => {
            return Err(CliError::Run(
                "'ket' initial states apply to builtin Hamiltonians only".into(),
            ))
        }
    };
    let mut all = vec![(base.0, base.1, 1.0)];
    all.extend(entries);
    // Sector membership check, independent of the backend.
    for &(p, n, _) in &all {
        if p.count_ones() != sq.nucleus.z || n.count_ones() != sq.nucleus.n {
            return Err(CliError::Run(format!(
                "initial configuration ({}, {}) violates the (Z={}, N={}) sector",
                qsm_core::oracle::occupation_string(p, sq.nucleus.catalog.len_per_species()),
                qsm_core::oracle::occupation_string(n, sq.nucleus.catalog.len_per_species()),
                sq.nucleus.z,
                sq.nucleus.n
            )));
        }
    }
    Ok(all)
}

fn initial_for_nucleus(
    config: &RunConfig,
    sq: &SecondQuantizedHamiltonian,
    layout: QubitLayout,
    preset_initial: Option<&crate::presets::PresetInitial>,
) -> Result<StateVector, CliError> {
    let entries = initial_entries(config, sq, preset_initial)?;
    let base = (entries[0].0, entries[0].1);
    let admixtures: Vec<((u64, u64), f64)> =
        entries[1..].iter().map(|&(p, n, w)| ((p, n), w)).collect();
    initial_state(layout, sq.nucleus.z, sq.nucleus.n, base, &admixtures)
        .map_err(|e| CliError::Run(e.to_string()))
}

/// Solve per the config; returns the outcome plus the settings used.
pub fn solve(config: &RunConfig) -> Result<(Prepared, SolveOutcome, RunSettings), CliError> {
    let prepared = prepare(config)?;
    let settings = RunSettings {
        gamma: gamma_for_run(config, &prepared),
        noise: config.noise,
        mode: config.run.mode,
        max_iter: config.run.max_iter,
        tol_kev: config.run.tol_kev,
    };
    match &prepared {
        Prepared::Builtin { h, .. } => {
            let start = match &config.initial {
                InitialStateConfig::Ket(index) => StateVector::basis_state(h.n_qubits, *index),
                _ => {
                    return Err(CliError::Run(
                        "builtin Hamiltonians need an [initial] ket".into(),
                    ))
                }
            };
            let oracle = dense_ground_energy(h)?;
            let (trace, complete) = run_full(h, &start, &settings, None)?;
            let outcome = SolveOutcome {
                trace,
                oracle_energy: Some(oracle),
                oracle_method: Some(SolveMethod::Dense),
                backend: Backend::Full,
                complete,
            };
            Ok((prepared, outcome, settings))
        }
        Prepared::Nucleus { sq, h, preset_initial, .. } => {
            let layout = h.layout.expect("nucleus Hamiltonians carry a layout");
            let backend = match config.run.backend {
                Backend::Auto => {
                    if h.n_qubits <= FULL_BACKEND_QUBIT_LIMIT {
                        Backend::Full
                    } else {
                        Backend::Sector
                    }
                }
                other => other,
            };
            let oracle = sector_ground(sq).map_err(|e| CliError::Run(e.to_string()))?;
            let (trace, complete) = match backend {
                Backend::Full | Backend::Auto => {
                    let start = initial_for_nucleus(config, sq, layout, preset_initial.as_ref())?;
                    run_full(
                        h,
                        &start,
                        &settings,
                        Some((layout, sq.nucleus.z, sq.nucleus.n)),
                    )?
                }
                Backend::Sector => {
                    let entries = initial_entries(config, sq, preset_initial.as_ref())?;
                    let op = SectorOperator::build(sq).map_err(|e| CliError::Run(e.to_string()))?;
                    let dn = op.neutron_basis.dim();
                    let mut start = vec![Complex64::new(0.0, 0.0); op.dim()];
                    for (p_bits, n_bits, w) in entries {
                        let p = *op.proton_basis.index.get(&p_bits).ok_or_else(|| {
                            CliError::Run("initial proton configuration outside sector".into())
                        })?;
                        let n = *op.neutron_basis.index.get(&n_bits).ok_or_else(|| {
                            CliError::Run("initial neutron configuration outside sector".into())
                        })?;
                        start[p * dn + n] += Complex64::new(w, 0.0);
                    }
                    match run_gradient_descent_sector(&op, h, &start, &settings) {
                        Ok((trace, _)) => (trace, true),
                        Err(SolverError::Diverged { trace }) => (trace, false),
                        Err(e) => return Err(CliError::Run(e.to_string())),
                    }
                }
            };
            let outcome = SolveOutcome {
                trace,
                oracle_energy: Some(oracle.energy),
                oracle_method: Some(oracle.method),
                backend,
                complete,
            };
            Ok((prepared, outcome, settings))
        }
    }
}

fn run_full(
    h: &PauliSum,
    start: &StateVector,
    settings: &RunSettings,
    sector: Option<(QubitLayout, u32, u32)>,
) -> Result<(IterationTrace, bool), CliError> {
    match run_gradient_descent(h, start, settings, sector) {
        Ok((trace, _)) => Ok((trace, true)),
        Err(SolverError::Diverged { trace }) => Ok((trace, false)),
        Err(e) => Err(CliError::Run(e.to_string())),
    }
}

/// Render the solve summary.
pub fn solve_summary(
    prepared: &Prepared,
    outcome: &SolveOutcome,
    settings: &RunSettings,
    seed: u64,
) -> String {
    let mut s = Summary::new();
    s.push_str("hamiltonian", prepared.label());
    match prepared {
        Prepared::Nucleus { u0, nucleus, .. } => {
            s.push_int("z", nucleus.z as i128);
            s.push_int("n", nucleus.n as i128);
            s.push_int("orbits_per_species", nucleus.catalog.len_per_species() as i128);
            s.push_num("u0_mev", *u0);
        }
        Prepared::Builtin { .. } => {}
    }
    s.push_str(
        "mode",
        match settings.mode {
            qsm_core::solver::IterationMode::Direct => "direct",
            qsm_core::solver::IterationMode::Circuit => "circuit",
        },
    );
    s.push_str(
        "backend",
        match outcome.backend {
            Backend::Full | Backend::Auto => "full",
            Backend::Sector => "sector",
        },
    );
    s.push_num("gamma", outcome.trace.gamma.gamma);
    if let Some(warning) = &outcome.trace.gamma_warning {
        s.push_str("gamma_warning", warning);
    }
    s.push_int("seed", seed as i128);
    s.push_int("iterations", (outcome.trace.steps.len().saturating_sub(1)) as i128);
    s.push_bool("converged", outcome.trace.converged);
    s.push_bool("complete", outcome.complete);
    s.push_num("final_energy_mev", outcome.trace.final_energy);
    if let Some(oracle) = outcome.oracle_energy {
        s.push_num("oracle_energy_mev", oracle);
        s.push_num("difference_mev", outcome.trace.final_energy - oracle);
        if let Some(method) = outcome.oracle_method {
            s.push_str(
                "oracle_method",
                match method {
                    SolveMethod::Dense => "dense",
                    SolveMethod::Lanczos => "lanczos",
                },
            );
        }
    }
    if let Some(last) = outcome.trace.steps.last() {
        s.push_num("success_prob_last", last.success_probability);
        s.push_num("success_prob_last_term_denominator", last.success_probability_over_terms);
    }
    match prepared {
        Prepared::Nucleus { h, nucleus, published_qubits, .. } => {
            if let Ok(report) = estimate_resources(h, nucleus) {
                if let Some(q) = published_qubits {
                    s.push_int("published_qubits", *q as i128);
                }
                s.push_raw("resources", resource_summary(&report));
            }
        }
        Prepared::Builtin { h, .. } => {
            let terms = qsm_core::resources::iteration_term_count(h);
            s.push_int("iteration_terms", terms as i128);
            s.push_int(
                "ancilla_qubits",
                qsm_core::math::ceil_log2(terms) as i128,
            );
        }
    }
    s.render()
}

/// `solve` subcommand: run, write trace/summary/pauli files.
pub fn cmd_solve(config_path: &str) -> Result<i32, CliError> {
    let config = crate::config::load_config(config_path)?;
    let (prepared, outcome, settings) = solve(&config)?;
    if let Some(path) = &config.output.trace {
        write_file(path, &trace_csv(&outcome.trace, outcome.complete))?;
    }
    if let Some(path) = &config.output.summary {
        write_file(path, &solve_summary(&prepared, &outcome, &settings, config.run.seed))?;
    }
    if let Some(path) = &config.output.pauli {
        write_file(path, &prepared.hamiltonian().to_text())?;
    }
    println!(
        "{}: E = {} MeV after {} iterations (converged: {})",
        prepared.label(),
        outcome.trace.final_energy,
        outcome.trace.steps.len().saturating_sub(1),
        outcome.trace.converged,
    );
    if let Some(oracle) = outcome.oracle_energy {
        println!(
            "{}: oracle E = {oracle} MeV, difference {:+e} MeV",
            prepared.label(),
            outcome.trace.final_energy - oracle
        );
    }
    Ok(if outcome.complete { 0 } else { 1 })
}

/// `build` subcommand: assemble and dump the Pauli sum.
pub fn cmd_build(config_path: &str) -> Result<i32, CliError> {
    let config = crate::config::load_config(config_path)?;
    let prepared = prepare(&config)?;
    let text = prepared.hamiltonian().to_text();
    match &config.output.pauli {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &config.output.summary {
        let mut s = Summary::new();
        s.push_str("hamiltonian", prepared.label());
        s.push_int("qubits", prepared.hamiltonian().n_qubits as i128);
        s.push_int("terms", prepared.hamiltonian().term_count() as i128);
        write_file(path, &s.render())?;
    }
    Ok(0)
}

/// `diag` subcommand: exact sector diagonalization only.
pub fn cmd_diag(config_path: &str) -> Result<i32, CliError> {
    let config = crate::config::load_config(config_path)?;
    let prepared = prepare(&config)?;
    let mut s = Summary::new();
    s.push_str("hamiltonian", prepared.label());
    match &prepared {
        Prepared::Builtin { h, .. } => {
            let energy = dense_ground_energy(h)?;
            s.push_num("ground_energy_mev", energy);
            s.push_str("method", "dense");
            println!("{}: exact ground energy {energy} MeV", prepared.label());
        }
        Prepared::Nucleus { sq, .. } => {
            let sol = sector_ground(sq).map_err(|e| CliError::Run(e.to_string()))?;
            s.push_num("ground_energy_mev", sol.energy);
            s.push_int("sector_dimension", sol.dimension as i128);
            s.push_str(
                "method",
                match sol.method {
                    SolveMethod::Dense => "dense",
                    SolveMethod::Lanczos => "lanczos",
                },
            );
            println!(
                "{}: exact ground energy {} MeV (sector dimension {})",
                prepared.label(),
                sol.energy,
                sol.dimension
            );
        }
    }
    if let Some(path) = &config.output.summary {
        write_file(path, &s.render())?;
    }
    Ok(0)
}

/// `resources` subcommand: complexity table over presets.
pub fn cmd_resources(config_path: &str) -> Result<i32, CliError> {
    let config = crate::config::load_config(config_path)?;
    let wanted = config
        .resources
        .as_ref()
        .map(|r| r.presets.clone())
        .unwrap_or_else(|| vec!["all".to_string()]);
    let presets = crate::presets::builtin_presets();
    let selected: Vec<crate::presets::Preset> = if wanted.iter().any(|w| w == "all") {
        presets
    } else {
        let mut out = Vec::new();
        for name in &wanted {
            out.push(find_preset(name)?);
        }
        out
    };
    let mut rows = Vec::new();
    for preset in &selected {
        let nucleus = preset.nucleus()?;
        let params = MeanFieldParams::with_depth(preset.u0);
        let sq = assemble_hamiltonian(&nucleus, &params, &AssemblyOptions::default())
            .map_err(|e| CliError::Run(format!("{}: {e}", preset.name)))?;
        let h = map_to_qubits(&sq).map_err(|e| CliError::Run(format!("{}: {e}", preset.name)))?;
        let report = estimate_resources(&h, &nucleus)
            .map_err(|e| CliError::Run(format!("{}: {e}", preset.name)))?;
        println!(
            "{}: {} work qubits, M = {}, m = {}, total {} (published {})",
            preset.name,
            report.work_qubits,
            report.term_count,
            report.ancilla_qubits,
            report.total_qubits,
            preset.published_qubits
        );
        rows.push(ComplexityRow { label: preset.name.clone(), report });
    }
    let csv = complexity_csv(&rows);
    match &config.output.trace {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

/// `fit` subcommand: calibrate U* per nucleus, fit the depth formula,
/// predict requested depths.
pub fn cmd_fit(config_path: &str) -> Result<i32, CliError> {
    let config = crate::config::load_config(config_path)?;
    let fit = config
        .fit
        .clone()
        .ok_or_else(|| CliError::Run("fit subcommand needs a [fit] section".into()))?;
    let table_text = match &fit.table {
        Some(path) => std::fs::read_to_string(path).map_err(|e| crate::io_error(path, e))?,
        None => crate::presets::EXPERIMENTAL_TEXT.to_string(),
    };
    let table = crate::presets::parse_experimental(&table_text)?;

    let mut s = Summary::new();
    let mut records: Vec<(u32, u32, f64)> = Vec::new();
    for name in &fit.nuclei {
        let preset = find_preset(name)?;
        let e_exp = crate::presets::experimental_for(&preset, &table).ok_or_else(|| {
            CliError::Run(format!("no experimental energy for '{name}' in the table"))
        })?;
        let nucleus = preset.nucleus()?;
        // Two-body terms are depth-independent: assemble once, rebuild the
        // one-body part per depth probe.
        let base = assemble_hamiltonian(
            &nucleus,
            &MeanFieldParams::with_depth(preset.u0),
            &AssemblyOptions::default(),
        )
        .map_err(|e| CliError::Run(format!("{name}: {e}")))?;
        let mut energy = |u0: f64| -> Result<f64, qsm_core::fitting::FittingError> {
            let g = one_body_matrix(&MeanFieldParams::with_depth(u0), &nucleus)
                .map_err(qsm_core::interactions::InteractionError::from)?;
            let sq = SecondQuantizedHamiltonian {
                g,
                two_body: base.two_body.clone(),
                nucleus: nucleus.clone(),
            };
            Ok(qsm_core::oracle::sector_ground(&sq)?.energy)
        };
        let result = find_ustar(
            &mut energy,
            e_exp,
            (preset.u0 - fit.bracket_halfwidth, preset.u0 + fit.bracket_halfwidth),
            fit.tol_kev / 1000.0,
            preset.z + preset.n,
            fit.band_budget,
        )
        .map_err(|e| CliError::Run(format!("{name}: {e}")))?;
        println!(
            "{name}: U* = {:.4} MeV (band {:.4} .. {:.4}), E(U*) = {:.4} vs exp {:.4}",
            result.u_star, result.band.0, result.band.1, result.energy_at_ustar, e_exp
        );
        let mut r = Summary::new();
        r.push_num("e_exp_mev", e_exp);
        r.push_num("u_star_mev", result.u_star);
        r.push_num("band_low_mev", result.band.0);
        r.push_num("band_high_mev", result.band.1);
        r.push_num("energy_at_ustar_mev", result.energy_at_ustar);
        s.push_raw(name, r.render().trim_end().replace('\n', "\n  "));
        records.push((preset.z, preset.n, result.u_star));
    }

    let params = fit_parameters(&records).map_err(|e| CliError::Run(e.to_string()))?;
    println!(
        "fitted depth formula: U0 = {:.4} + {:.4} (N-Z)/A + {:.4} Z + {:.4} N + {:.4}/A",
        params.u, params.a, params.b, params.c, params.d
    );
    let mut p = Summary::new();
    p.push_num("u", params.u);
    p.push_num("a", params.a);
    p.push_num("b", params.b);
    p.push_num("c", params.c);
    p.push_num("d", params.d);
    p.push_num(
        "normal_equation_residual",
        qsm_core::fitting::normal_equation_residual(&records, &params),
    );
    s.push_raw("fitted_parameters", p.render().trim_end().replace('\n', "\n  "));

    for name in &fit.predict {
        let preset = find_preset(name)?;
        let u0 = predict_u0(&params, preset.z, preset.n);
        println!("{name}: predicted U0 = {u0:.4} MeV (preset table: {})", preset.u0);
        let mut r = Summary::new();
        r.push_num("predicted_u0_mev", u0);
        r.push_num("preset_u0_mev", preset.u0);
        s.push_raw(&format!("predict_{name}"), r.render().trim_end().replace('\n', "\n  "));
    }

    if let Some(path) = &config.output.summary {
        write_file(path, &s.render())?;
    }
    Ok(0)
}

/// `batch` subcommand: run every preset noiseless and write its trace and
/// summary under `out_dir`.
pub fn cmd_batch(out_dir: &str) -> Result<i32, CliError> {
    let mut status = 0;
    for preset in crate::presets::builtin_presets() {
        let config_text = format!(
            "[nucleus]\npreset = {name}\n[run]\nmode = direct\nmax_iter = 3000\ntol_kev = 0.01\nseed = 1\n[output]\ntrace = {dir}/{name}.trace.csv\nsummary = {dir}/{name}.summary.json\n",
            name = preset.name,
            dir = out_dir,
        );
        let config = crate::config::parse_config("batch", &config_text)?;
        let (prepared, outcome, settings) = solve(&config)?;
        write_file(
            &format!("{out_dir}/{}.trace.csv", preset.name),
            &trace_csv(&outcome.trace, outcome.complete),
        )?;
        write_file(
            &format!("{out_dir}/{}.summary.json", preset.name),
            &solve_summary(&prepared, &outcome, &settings, config.run.seed),
        )?;
        let diff = outcome
            .oracle_energy
            .map(|o| outcome.trace.final_energy - o)
            .unwrap_or(f64::NAN);
        println!(
            "{}: E = {:.6} MeV, oracle diff {:+.3e}, {} iterations",
            preset.name,
            outcome.trace.final_energy,
            diff,
            outcome.trace.steps.len().saturating_sub(1)
        );
        if !outcome.complete {
            status = 1;
        }
    }
    Ok(status)
}

/// `trace-compare` subcommand.
pub fn cmd_trace_compare(a_path: &str, b_path: &str, tol_mev: f64) -> Result<i32, CliError> {
    let a_text = std::fs::read_to_string(a_path).map_err(|e| crate::io_error(a_path, e))?;
    let b_text = std::fs::read_to_string(b_path).map_err(|e| crate::io_error(b_path, e))?;
    let a = crate::trace_compare::parse_trace_csv(a_path, &a_text)?;
    let b = crate::trace_compare::parse_trace_csv(b_path, &b_text)?;
    let outcome = crate::trace_compare::compare(&a, &b, tol_mev);
    if let Some((la, lb)) = outcome.length_mismatch {
        println!("length mismatch: {la} vs {lb} rows");
    }
    println!(
        "compared {} rows: worst energy gap {:e} MeV at step {} ({} tolerance {:e})",
        outcome.rows_compared,
        outcome.worst_gap,
        outcome.worst_step,
        if outcome.within_tolerance { "within" } else { "EXCEEDS" },
        tol_mev
    );
    Ok(if outcome.within_tolerance { 0 } else { 1 })
}

//! Nucleus presets and the experimental-energy table. Both ship as plain
//! text data files (embedded copies serve as defaults; the fit subcommand
//! can read an external table at runtime).

use qsm_core::meanfield::NucleusSpec;
use qsm_core::orbits::build_orbit_catalog;
use qsm_core::solver::{GammaMode, GammaPolicy};

use crate::CliError;

pub const PRESETS_TEXT: &str = include_str!("../data/presets.txt");
pub const EXPERIMENTAL_TEXT: &str = include_str!("../data/experimental_energies.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: String,
    pub z: u32,
    pub n: u32,
    pub orbits: usize,
    pub u0: f64,
    /// Qubit count published for this nucleus, kept for comparison output.
    pub published_qubits: u32,
    /// Tuned step size; None means derive automatically.
    pub gamma: Option<f64>,
    /// Overridden initial state: base configuration plus admixtures.
    pub initial: Option<PresetInitial>,
}

/// Explicit starting state for presets whose Hartree-Fock configuration
/// does not overlap the ground state.
#[derive(Clone, Debug, PartialEq)]
pub struct PresetInitial {
    pub base: (u64, u64),
    pub admixtures: Vec<(u64, u64, f64)>,
}

/// Grammar: "<p>,<n>[&<p>,<n>:<w>]*" with occupation strings.
fn parse_initial_spec(spec: &str) -> Option<PresetInitial> {
    use crate::config::parse_occupation;
    let mut parts = spec.split('&');
    let base_part = parts.next()?;
    let (bp, bn) = base_part.split_once(',')?;
    let base = (parse_occupation(bp)?, parse_occupation(bn)?);
    let mut admixtures = Vec::new();
    for part in parts {
        let (bits, w) = part.split_once(':')?;
        let (p, n) = bits.split_once(',')?;
        admixtures.push((parse_occupation(p)?, parse_occupation(n)?, w.parse().ok()?));
    }
    Some(PresetInitial { base, admixtures })
}

impl Preset {
    pub fn nucleus(&self) -> Result<NucleusSpec, CliError> {
        let catalog = build_orbit_catalog(self.orbits, self.z + self.n)
            .map_err(|e| CliError::Run(format!("preset {}: {e}", self.name)))?;
        NucleusSpec::new(self.z, self.n, catalog)
            .map_err(|e| CliError::Run(format!("preset {}: {e}", self.name)))
    }

    pub fn gamma_policy(&self) -> GammaPolicy {
        match self.gamma {
            Some(g) => GammaPolicy { mode: GammaMode::Fixed(g), bounds: None },
            None => GammaPolicy::auto(),
        }
    }
}

pub fn parse_presets(text: &str) -> Result<Vec<Preset>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(CliError::Config {
                path: "presets".into(),
                line: Some(idx + 1),
                message: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let bad = |what: &str| CliError::Config {
            path: "presets".into(),
            line: Some(idx + 1),
            message: format!("bad {what}"),
        };
        let gamma = if fields[6].eq_ignore_ascii_case("auto") {
            None
        } else {
            Some(fields[6].parse::<f64>().map_err(|_| bad("gamma"))?)
        };
        let initial = if fields[7].eq_ignore_ascii_case("default") {
            None
        } else {
            Some(parse_initial_spec(fields[7]).ok_or_else(|| bad("initial spec"))?)
        };
        out.push(Preset {
            name: fields[0].to_lowercase(),
            z: fields[1].parse().map_err(|_| bad("Z"))?,
            n: fields[2].parse().map_err(|_| bad("N"))?,
            orbits: fields[3].parse().map_err(|_| bad("orbit count"))?,
            u0: fields[4].parse().map_err(|_| bad("U0"))?,
            published_qubits: fields[5].parse().map_err(|_| bad("qubit count"))?,
            gamma,
            initial,
        });
    }
    Ok(out)
}

pub fn builtin_presets() -> Vec<Preset> {
    parse_presets(PRESETS_TEXT).expect("embedded preset table parses")
}

pub fn find_preset(name: &str) -> Result<Preset, CliError> {
    let lower = name.to_lowercase();
    builtin_presets().into_iter().find(|p| p.name == lower).ok_or_else(|| {
        let names: Vec<String> = builtin_presets().into_iter().map(|p| p.name).collect();
        CliError::Run(format!("unknown preset '{name}'; available: {}", names.join(", ")))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentalEntry {
    pub symbol: String,
    pub z: u32,
    pub a: u32,
    pub e_exp: f64,
}

pub fn parse_experimental(text: &str) -> Result<Vec<ExperimentalEntry>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(CliError::Config {
                path: "experimental energies".into(),
                line: Some(idx + 1),
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let bad = |what: &str| CliError::Config {
            path: "experimental energies".into(),
            line: Some(idx + 1),
            message: format!("bad {what}"),
        };
        out.push(ExperimentalEntry {
            symbol: fields[0].to_lowercase(),
            z: fields[1].parse().map_err(|_| bad("Z"))?,
            a: fields[2].parse().map_err(|_| bad("A"))?,
            e_exp: fields[3].parse().map_err(|_| bad("energy"))?,
        });
    }
    Ok(out)
}

/// Experimental energy for a preset, by matching (Z, A).
pub fn experimental_for(preset: &Preset, table: &[ExperimentalEntry]) -> Option<f64> {
    table
        .iter()
        .find(|e| e.z == preset.z && e.a == preset.z + preset.n)
        .map(|e| e.e_exp)
}

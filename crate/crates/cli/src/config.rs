//! Run configuration: flat key-value text with [sections], strictly
//! validated before any computation runs. Unknown sections or keys are
//! rejected with the offending line number.
//!
//! Occupation bitstrings (`admixture`, `hf`) list orbits left to right:
//! the leftmost character is orbit 1 (qubit 0 of its register). The
//! builtin-fixture `ket` key instead uses standard ket notation
//! |q_{n-1} ... q_0> with qubit 0 rightmost.

use std::collections::BTreeMap;

use qsm_core::solver::{GammaMode, GammaPolicy, IterationMode, NoiseKind, NoiseSpec, NoiseTarget};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianSource {
    /// Named Pauli-sum fixture.
    Builtin(String),
    /// Shell-model nucleus, assembled from the mean field.
    Nucleus(NucleusConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NucleusConfig {
    /// Either a preset name or explicit numbers.
    pub preset: Option<String>,
    pub z: Option<u32>,
    pub n: Option<u32>,
    pub orbits: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DepthSource {
    /// Explicit well depth in MeV (or the preset's).
    Explicit(Option<f64>),
    /// Depth formula u + a (N-Z)/A + b Z + c N + d/A with given parameters.
    Fitted { params: [f64; 5] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig {
    pub depth: DepthSource,
    pub pairing_g: f64,
    pub coulomb: bool,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self { depth: DepthSource::Explicit(None), pairing_g: 0.25, coulomb: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Auto,
    Full,
    Sector,
}

#[derive(Clone, Debug)]
pub struct RunSection {
    pub mode: IterationMode,
    pub backend: Backend,
    pub gamma: GammaPolicy,
    pub max_iter: usize,
    pub tol_kev: f64,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            mode: IterationMode::Direct,
            backend: Backend::Auto,
            gamma: GammaPolicy::auto(),
            max_iter: 500,
            tol_kev: 0.1,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialStateConfig {
    /// Hartree-Fock occupation.
    HartreeFock,
    /// HF plus the default single excitation at the given weight.
    HartreeFockPlusExcited { weight: f64 },
    /// Explicit admixtures on top of a base configuration (the Hartree-Fock
    /// state unless `base` overrides it): (proton bits, neutron bits, weight).
    Admixtures { base: Option<(u64, u64)>, entries: Vec<(u64, u64, f64)> },
    /// Basis ket for builtin fixtures (value = basis index).
    Ket(u64),
}

#[derive(Clone, Debug)]
pub struct OutputConfig {
    pub trace: Option<String>,
    pub summary: Option<String>,
    pub pauli: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Absent only for configs driven purely by [fit] or [resources].
    pub source: Option<HamiltonianSource>,
    pub field: FieldConfig,
    pub run: RunSection,
    pub noise: NoiseSpec,
    pub initial: InitialStateConfig,
    pub output: OutputConfig,
    pub fit: Option<FitConfig>,
    pub resources: Option<ResourcesConfig>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitConfig {
    /// Preset names entering the calibration.
    pub nuclei: Vec<String>,
    /// Experimental-energy table path; embedded default when absent.
    pub table: Option<String>,
    pub bracket_halfwidth: f64,
    pub tol_kev: f64,
    /// Presets to predict depths for after fitting.
    pub predict: Vec<String>,
    /// Per-nucleon error budget for the allowable band, MeV.
    pub band_budget: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResourcesConfig {
    /// Preset names; "all" expands to the full table.
    pub presets: Vec<String>,
}

struct RawItem {
    line: usize,
    value: String,
}

struct RawConfig {
    path: String,
    // (section, key) -> occurrences.
    items: BTreeMap<(String, String), Vec<RawItem>>,
    sections: Vec<(String, usize)>,
}

impl RawConfig {
    fn err(&self, line: Option<usize>, message: impl Into<String>) -> CliError {
        CliError::Config { path: self.path.clone(), line, message: message.into() }
    }

    fn take_unique(&self, section: &str, key: &str) -> Result<Option<&RawItem>, CliError> {
        match self.items.get(&(section.to_string(), key.to_string())) {
            None => Ok(None),
            Some(items) if items.len() == 1 => Ok(Some(&items[0])),
            Some(items) => Err(self.err(
                Some(items[1].line),
                format!("duplicate key '{key}' in section [{section}]"),
            )),
        }
    }

    fn take_all(&self, section: &str, key: &str) -> Vec<&RawItem> {
        self.items
            .get(&(section.to_string(), key.to_string()))
            .map(|v| v.iter().collect())
            .unwrap_or_default()
    }
}

fn parse_raw(path: &str, text: &str) -> Result<RawConfig, CliError> {
    let mut raw = RawConfig {
        path: path.to_string(),
        items: BTreeMap::new(),
        sections: Vec::new(),
    };
    let mut section: Option<String> = None;
    for (idx, line_raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match line_raw.find('#') {
            Some(pos) => &line_raw[..pos],
            None => line_raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_lowercase();
            raw.sections.push((name.clone(), line_no));
            section = Some(name);
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(raw.err(Some(line_no), "expected 'key = value'"));
        };
        let key = line[..eq].trim().to_lowercase();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(raw.err(Some(line_no), "empty key or value"));
        }
        let Some(section) = section.clone() else {
            return Err(raw.err(Some(line_no), "key outside any [section]"));
        };
        raw.items
            .entry((section, key))
            .or_default()
            .push(RawItem { line: line_no, value });
    }
    Ok(raw)
}

const KNOWN: &[(&str, &[&str])] = &[
    ("hamiltonian", &["builtin"]),
    ("nucleus", &["preset", "z", "n", "orbits"]),
    ("field", &["u0", "fit_params", "pairing_g", "coulomb"]),
    ("run", &["mode", "backend", "gamma", "max_iter", "tol_kev", "seed"]),
    ("noise", &["kind", "sigma", "amplitude", "target", "seed"]),
    ("initial", &["state", "weight", "admixture", "base", "ket"]),
    ("output", &["trace", "summary", "pauli"]),
    ("fit", &["nuclei", "table", "bracket_halfwidth", "tol_kev", "predict", "band_budget"]),
    ("resources", &["presets"]),
];

fn validate_schema(raw: &RawConfig) -> Result<(), CliError> {
    for (section, line) in &raw.sections {
        if !KNOWN.iter().any(|(name, _)| name == section) {
            return Err(raw.err(Some(*line), format!("unknown section [{section}]")));
        }
    }
    for ((section, key), items) in &raw.items {
        let keys = KNOWN
            .iter()
            .find(|(name, _)| name == section)
            .map(|(_, keys)| *keys)
            .unwrap_or(&[]);
        if !keys.contains(&key.as_str()) {
            return Err(raw.err(
                Some(items[0].line),
                format!("unknown key '{key}' in section [{section}]"),
            ));
        }
    }
    Ok(())
}

fn parse_f64(raw: &RawConfig, item: &RawItem) -> Result<f64, CliError> {
    item.value
        .parse::<f64>()
        .map_err(|_| raw.err(Some(item.line), format!("expected a number, got '{}'", item.value)))
}

fn parse_usize(raw: &RawConfig, item: &RawItem) -> Result<usize, CliError> {
    item.value
        .parse::<usize>()
        .map_err(|_| raw.err(Some(item.line), format!("expected an integer, got '{}'", item.value)))
}

fn parse_u32(raw: &RawConfig, item: &RawItem) -> Result<u32, CliError> {
    item.value
        .parse::<u32>()
        .map_err(|_| raw.err(Some(item.line), format!("expected an integer, got '{}'", item.value)))
}

fn parse_u64(raw: &RawConfig, item: &RawItem) -> Result<u64, CliError> {
    item.value
        .parse::<u64>()
        .map_err(|_| raw.err(Some(item.line), format!("expected an integer, got '{}'", item.value)))
}

fn parse_bool(raw: &RawConfig, item: &RawItem) -> Result<bool, CliError> {
    match item.value.to_lowercase().as_str() {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        other => Err(raw.err(Some(item.line), format!("expected true/false, got '{other}'"))),
    }
}

/// Occupation string (orbit 1 leftmost) to bitmask (bit 0 = orbit 1).
pub fn parse_occupation(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 63 {
        return None;
    }
    let mut mask = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '1' => mask |= 1 << i,
            '0' => {}
            _ => return None,
        }
    }
    Some(mask)
}

/// Standard ket string |q_{n-1} ... q_0> (without bars) to basis index.
pub fn parse_ket(s: &str) -> Option<u64> {
    let trimmed = s.trim_start_matches('|').trim_end_matches('>');
    if trimmed.is_empty() || trimmed.len() > 63 {
        return None;
    }
    let mut idx = 0u64;
    for c in trimmed.chars() {
        idx <<= 1;
        match c {
            '1' => idx |= 1,
            '0' => {}
            _ => return None,
        }
    }
    Some(idx)
}

pub fn parse_config(path: &str, text: &str) -> Result<RunConfig, CliError> {
    let raw = parse_raw(path, text)?;
    validate_schema(&raw)?;

    // Hamiltonian source.
    let builtin = raw.take_unique("hamiltonian", "builtin")?;
    let has_nucleus = raw.sections.iter().any(|(s, _)| s == "nucleus");
    let standalone = raw.sections.iter().any(|(s, _)| s == "fit" || s == "resources");
    let source = match (builtin, has_nucleus) {
        (Some(item), false) => Some(HamiltonianSource::Builtin(item.value.clone())),
        (None, true) => {
            let preset = raw.take_unique("nucleus", "preset")?.map(|i| i.value.to_lowercase());
            let z = raw.take_unique("nucleus", "z")?.map(|i| parse_u32(&raw, i)).transpose()?;
            let n = raw.take_unique("nucleus", "n")?.map(|i| parse_u32(&raw, i)).transpose()?;
            let orbits =
                raw.take_unique("nucleus", "orbits")?.map(|i| parse_usize(&raw, i)).transpose()?;
            if preset.is_none() && (z.is_none() || n.is_none() || orbits.is_none()) {
                return Err(raw.err(
                    None,
                    "section [nucleus] needs either 'preset' or all of 'z', 'n', 'orbits'",
                ));
            }
            Some(HamiltonianSource::Nucleus(NucleusConfig { preset, z, n, orbits }))
        }
        (Some(_), true) => {
            return Err(raw.err(None, "give either [hamiltonian] builtin or a [nucleus], not both"))
        }
        (None, false) if standalone => None,
        (None, false) => {
            return Err(raw.err(None, "missing [nucleus] section (or [hamiltonian] builtin)"))
        }
    };

    // Field.
    let mut field = FieldConfig::default();
    if let Some(item) = raw.take_unique("field", "u0")? {
        if item.value.eq_ignore_ascii_case("fitted") {
            let params_item = raw.take_unique("field", "fit_params")?.ok_or_else(|| {
                raw.err(Some(item.line), "u0 = fitted requires 'fit_params = u,a,b,c,d'")
            })?;
            let parts: Vec<&str> = params_item.value.split(',').map(|s| s.trim()).collect();
            if parts.len() != 5 {
                return Err(raw.err(Some(params_item.line), "fit_params needs five numbers"));
            }
            let mut params = [0.0; 5];
            for (slot, part) in params.iter_mut().zip(parts.iter()) {
                *slot = part.parse::<f64>().map_err(|_| {
                    raw.err(Some(params_item.line), format!("bad number '{part}' in fit_params"))
                })?;
            }
            field.depth = DepthSource::Fitted { params };
        } else {
            field.depth = DepthSource::Explicit(Some(parse_f64(&raw, item)?));
        }
    } else if raw.take_unique("field", "fit_params")?.is_some() {
        return Err(raw.err(None, "fit_params given without u0 = fitted"));
    }
    if let Some(item) = raw.take_unique("field", "pairing_g")? {
        field.pairing_g = parse_f64(&raw, item)?;
    }
    if let Some(item) = raw.take_unique("field", "coulomb")? {
        field.coulomb = parse_bool(&raw, item)?;
    }

    // Run.
    let mut run = RunSection::default();
    if let Some(item) = raw.take_unique("run", "mode")? {
        run.mode = match item.value.to_lowercase().as_str() {
            "direct" => IterationMode::Direct,
            "circuit" => IterationMode::Circuit,
            other => {
                return Err(raw.err(Some(item.line), format!("mode must be direct|circuit, got '{other}'")))
            }
        };
    }
    if let Some(item) = raw.take_unique("run", "backend")? {
        run.backend = match item.value.to_lowercase().as_str() {
            "auto" => Backend::Auto,
            "full" => Backend::Full,
            "sector" => Backend::Sector,
            other => {
                return Err(
                    raw.err(Some(item.line), format!("backend must be auto|full|sector, got '{other}'"))
                )
            }
        };
    }
    if let Some(item) = raw.take_unique("run", "gamma")? {
        run.gamma = if item.value.eq_ignore_ascii_case("auto") {
            GammaPolicy::auto()
        } else {
            GammaPolicy { mode: GammaMode::Fixed(parse_f64(&raw, item)?), bounds: None }
        };
    }
    if let Some(item) = raw.take_unique("run", "max_iter")? {
        run.max_iter = parse_usize(&raw, item)?;
    }
    if let Some(item) = raw.take_unique("run", "tol_kev")? {
        run.tol_kev = parse_f64(&raw, item)?;
    }
    if let Some(item) = raw.take_unique("run", "seed")? {
        run.seed = parse_u64(&raw, item)?;
    }

    // Noise.
    let mut noise = NoiseSpec::none();
    noise.seed = run.seed;
    if let Some(item) = raw.take_unique("noise", "kind")? {
        noise.kind = match item.value.to_lowercase().as_str() {
            "none" => NoiseKind::None,
            "gaussian" => {
                let sigma = raw
                    .take_unique("noise", "sigma")?
                    .map(|i| parse_f64(&raw, i))
                    .transpose()?
                    .unwrap_or(0.1 / 3.0);
                NoiseKind::Gaussian { sigma }
            }
            "uniform" => {
                let amplitude = raw
                    .take_unique("noise", "amplitude")?
                    .map(|i| parse_f64(&raw, i))
                    .transpose()?
                    .unwrap_or(0.02);
                NoiseKind::Uniform { amplitude }
            }
            other => {
                return Err(raw.err(
                    Some(item.line),
                    format!("noise kind must be none|gaussian|uniform, got '{other}'"),
                ))
            }
        };
    }
    if let Some(item) = raw.take_unique("noise", "target")? {
        noise.target = match item.value.to_lowercase().as_str() {
            "hamiltonian" => NoiseTarget::Hamiltonian,
            "state" => NoiseTarget::State,
            "both" => NoiseTarget::Both,
            other => {
                return Err(raw.err(
                    Some(item.line),
                    format!("noise target must be hamiltonian|state|both, got '{other}'"),
                ))
            }
        };
    }
    if let Some(item) = raw.take_unique("noise", "seed")? {
        noise.seed = parse_u64(&raw, item)?;
    }

    // Initial state.
    let admixture_items = raw.take_all("initial", "admixture");
    let ket_item = raw.take_unique("initial", "ket")?;
    let state_item = raw.take_unique("initial", "state")?;
    let base_item = raw.take_unique("initial", "base")?;
    let base = match base_item {
        Some(item) => {
            let Some((p_str, n_str)) = item.value.split_once(',') else {
                return Err(raw.err(Some(item.line), "base must be '<proton bits>,<neutron bits>'"));
            };
            let p = parse_occupation(p_str.trim())
                .ok_or_else(|| raw.err(Some(item.line), "bad proton occupation string"))?;
            let n = parse_occupation(n_str.trim())
                .ok_or_else(|| raw.err(Some(item.line), "bad neutron occupation string"))?;
            Some((p, n))
        }
        None => None,
    };
    let weight = raw
        .take_unique("initial", "weight")?
        .map(|i| parse_f64(&raw, i))
        .transpose()?
        .unwrap_or(0.01);
    let initial = if let Some(ket) = ket_item {
        if !admixture_items.is_empty() || state_item.is_some() || base.is_some() {
            return Err(raw.err(Some(ket.line), "'ket' cannot be combined with other initial keys"));
        }
        InitialStateConfig::Ket(parse_ket(&ket.value).ok_or_else(|| {
            raw.err(Some(ket.line), format!("bad ket '{}'", ket.value))
        })?)
    } else if !admixture_items.is_empty() || base.is_some() {
        let mut entries = Vec::new();
        for item in admixture_items {
            // "<proton bits>,<neutron bits>:<weight>"
            let (bits_part, weight_part) = match item.value.split_once(':') {
                Some((b, w)) => (b.trim(), Some(w.trim())),
                None => (item.value.as_str(), None),
            };
            let Some((p_str, n_str)) = bits_part.split_once(',') else {
                return Err(raw.err(
                    Some(item.line),
                    "admixture must be '<proton bits>,<neutron bits>[:<weight>]'",
                ));
            };
            let p = parse_occupation(p_str.trim())
                .ok_or_else(|| raw.err(Some(item.line), "bad proton occupation string"))?;
            let n = parse_occupation(n_str.trim())
                .ok_or_else(|| raw.err(Some(item.line), "bad neutron occupation string"))?;
            let w = match weight_part {
                Some(w) => w.parse::<f64>().map_err(|_| {
                    raw.err(Some(item.line), format!("bad admixture weight '{w}'"))
                })?,
                None => weight,
            };
            entries.push((p, n, w));
        }
        InitialStateConfig::Admixtures { base, entries }
    } else {
        match state_item.map(|i| (i.value.to_lowercase(), i.line)) {
            None => InitialStateConfig::HartreeFockPlusExcited { weight },
            Some((s, _)) if s == "hf" => InitialStateConfig::HartreeFock,
            Some((s, _)) if s == "hf+excited" => {
                InitialStateConfig::HartreeFockPlusExcited { weight }
            }
            Some((other, line)) => {
                return Err(raw.err(
                    Some(line),
                    format!("initial state must be hf|hf+excited, got '{other}'"),
                ))
            }
        }
    };

    // Output paths.
    let output = OutputConfig {
        trace: raw.take_unique("output", "trace")?.map(|i| i.value.clone()),
        summary: raw.take_unique("output", "summary")?.map(|i| i.value.clone()),
        pauli: raw.take_unique("output", "pauli")?.map(|i| i.value.clone()),
    };

    // Fit section.
    let fit = if raw.sections.iter().any(|(s, _)| s == "fit") {
        let nuclei = raw
            .take_unique("fit", "nuclei")?
            .map(|i| i.value.split(',').map(|s| s.trim().to_lowercase()).collect::<Vec<_>>())
            .unwrap_or_else(|| {
                ["h3", "he3", "li6", "c12", "n14"].iter().map(|s| s.to_string()).collect()
            });
        let table = raw.take_unique("fit", "table")?.map(|i| i.value.clone());
        let bracket_halfwidth = raw
            .take_unique("fit", "bracket_halfwidth")?
            .map(|i| parse_f64(&raw, i))
            .transpose()?
            .unwrap_or(5.0);
        let tol_kev = raw
            .take_unique("fit", "tol_kev")?
            .map(|i| parse_f64(&raw, i))
            .transpose()?
            .unwrap_or(1.0);
        let predict = raw
            .take_unique("fit", "predict")?
            .map(|i| i.value.split(',').map(|s| s.trim().to_lowercase()).collect::<Vec<_>>())
            .unwrap_or_default();
        let band_budget = raw
            .take_unique("fit", "band_budget")?
            .map(|i| parse_f64(&raw, i))
            .transpose()?
            .unwrap_or(0.3);
        Some(FitConfig { nuclei, table, bracket_halfwidth, tol_kev, predict, band_budget })
    } else {
        None
    };

    // Resources section.
    let resources = if raw.sections.iter().any(|(s, _)| s == "resources") {
        let presets = raw
            .take_unique("resources", "presets")?
            .map(|i| i.value.split(',').map(|s| s.trim().to_lowercase()).collect::<Vec<_>>())
            .unwrap_or_else(|| vec!["all".to_string()]);
        Some(ResourcesConfig { presets })
    } else {
        None
    };

    Ok(RunConfig { source, field, run, noise, initial, output, fit, resources })
}

pub fn load_config(path: &str) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::io_error(path, e))?;
    parse_config(path, &text)
}

//! Run configuration: TOML (or JSON) schema, validation and resolution into
//! engine scenario configs.

use hexsinr::{
    AntennaPattern, DropRegion, NoiseModel, PhiConvention, PropagationParams, RxChoice,
    ScenarioConfig,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

/// Errors surfaced to the user with distinct exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration; exit code 2.
    Config(String),
    /// Filesystem failure; exit code 3.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<hexsinr::Error> for CliError {
    fn from(e: hexsinr::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

fn default_rings() -> u32 {
    4
}
fn default_ue_count() -> usize {
    100_000
}
fn default_cdf_points() -> usize {
    500
}
fn default_quantile_probs() -> Vec<f64> {
    vec![0.02, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95]
}
fn default_emit() -> Vec<Emit> {
    vec![Emit::Cdf, Emit::Quantiles, Emit::Delta]
}
fn default_out_dir() -> String {
    "out".to_string()
}
fn default_neutral_band_db() -> f64 {
    0.5
}
fn default_integral_step_deg() -> f64 {
    hexsinr::fluid::DEFAULT_INTEGRAL_STEP_DEG
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Cdf,
    Quantiles,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RxName {
    Omni,
    Dir35,
    Dir17_5,
}

impl RxName {
    pub fn to_choice(self) -> RxChoice {
        match self {
            RxName::Omni => RxChoice::Omni,
            RxName::Dir35 => RxChoice::Dir35,
            RxName::Dir17_5 => RxChoice::Dir17_5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionName {
    CentralSiteDisk,
    WholeNetwork,
}

impl RegionName {
    fn to_region(self) -> DropRegion {
        match self {
            RegionName::CentralSiteDisk => DropRegion::CentralSiteDisk,
            RegionName::WholeNetwork => DropRegion::WholeNetwork,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiName {
    UeSide,
    TransmitterSide,
}

impl PhiName {
    fn to_convention(self) -> PhiConvention {
        match self {
            PhiName::UeSide => PhiConvention::UeSide,
            PhiName::TransmitterSide => PhiConvention::TransmitterSide,
        }
    }
}

/// Engine parameters shared by every scenario unless overridden per entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Defaults {
    pub rings: u32,
    pub ue_count: usize,
    pub drop_region: RegionName,
    pub path_loss_exponent: f64,
    pub k_ref_db: Option<f64>,
    pub shadowing_sigma_db: f64,
    pub noise_density_dbm_per_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub ptx_dbm: f64,
    pub tx_beamwidth_deg: f64,
    pub tx_max_attenuation_db: f64,
    pub tx_peak_gain_db: f64,
    pub boresight_offset_deg: f64,
    pub phi_convention: PhiName,
    pub emit: Vec<Emit>,
    pub quantile_probs: Vec<f64>,
    pub cdf_points: usize,
    pub neutral_band_db: f64,
}

impl Default for Defaults {
    fn default() -> Self {
        let prop = PropagationParams::default();
        let noise = NoiseModel::default();
        Self {
            rings: default_rings(),
            ue_count: default_ue_count(),
            drop_region: RegionName::CentralSiteDisk,
            path_loss_exponent: prop.path_loss_exponent,
            k_ref_db: None,
            shadowing_sigma_db: prop.shadowing_sigma_db,
            noise_density_dbm_per_hz: noise.noise_density_dbm_per_hz,
            bandwidth_hz: noise.bandwidth_hz,
            noise_figure_db: noise.noise_figure_db,
            ptx_dbm: 46.0,
            tx_beamwidth_deg: hexsinr::montecarlo::TX_BEAMWIDTH_DEG,
            tx_max_attenuation_db: hexsinr::montecarlo::TX_MAX_ATTENUATION_DB,
            tx_peak_gain_db: hexsinr::montecarlo::TX_PEAK_GAIN_DBI,
            boresight_offset_deg: hexsinr::geometry::DEFAULT_BORESIGHT_OFFSET_DEG,
            phi_convention: PhiName::UeSide,
            emit: default_emit(),
            quantile_probs: default_quantile_probs(),
            cdf_points: default_cdf_points(),
            neutral_band_db: default_neutral_band_db(),
        }
    }
}

/// One scenario entry of the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioEntry {
    pub isd_m: f64,
    pub rx: RxName,
    pub shadowing: bool,
    pub seed: u64,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub ue_count: Option<usize>,
    #[serde(default)]
    pub rings: Option<u32>,
    #[serde(default)]
    pub drop_region: Option<RegionName>,
}

/// Polar probe grid for the fluid comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidCompare {
    pub isd_m: f64,
    #[serde(default = "six_rings")]
    pub rings: u32,
    pub rx: Vec<RxName>,
    /// Explicit probe radii in metres; empty means eight radii spanning
    /// 10 to 85 percent of the cell radius.
    #[serde(default)]
    pub radii_m: Vec<f64>,
    /// Explicit probe angles; empty means twelve angles spanning -55 to 55.
    #[serde(default)]
    pub angles_deg: Vec<f64>,
    #[serde(default = "default_integral_step_deg")]
    pub integral_step_deg: f64,
    /// Discrete-engine angle convention for the comparison; defaults to the
    /// transmitter-side convention the closed form is derived under.
    #[serde(default = "transmitter_side")]
    pub phi_convention: PhiName,
}

fn six_rings() -> u32 {
    6
}
fn transmitter_side() -> PhiName {
    PhiName::TransmitterSide
}

impl FluidCompare {
    pub fn probe_radii(&self) -> Vec<f64> {
        if !self.radii_m.is_empty() {
            return self.radii_m.clone();
        }
        let rc = self.isd_m / 2.0;
        (0..8)
            .map(|k| rc * (0.10 + (0.85 - 0.10) * k as f64 / 7.0))
            .collect()
    }

    pub fn probe_angles(&self) -> Vec<f64> {
        if !self.angles_deg.is_empty() {
            return self.angles_deg.clone();
        }
        (0..12)
            .map(|k| -55.0 + 110.0 * k as f64 / 11.0)
            .collect()
    }
}

/// Top-level config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<ScenarioEntry>,
    #[serde(default)]
    pub fluid_compare: Option<FluidCompare>,
}

/// A scenario with every knob resolved, ready for the engine.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub name: String,
    pub entry: ScenarioEntry,
    pub config: ScenarioConfig,
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parse a config file; `.json` files and files starting with `{` are JSON,
/// everything else TOML. Diagnostics carry the offending line.
pub fn load_config(path: &Path) -> Result<(RunConfig, Vec<u8>), CliError> {
    let raw = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(raw.clone())
        .map_err(|_| CliError::Config(format!("{} is not UTF-8", path.display())))?;

    let is_json = path.extension().map(|e| e == "json").unwrap_or(false)
        || text.trim_start().starts_with('{');
    let config: RunConfig = if is_json {
        serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!(
                "{}:{}:{}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?
    } else {
        toml::from_str(&text).map_err(|e| {
            let line = e
                .span()
                .map(|s| line_of_offset(&text, s.start))
                .unwrap_or(0);
            CliError::Config(format!("{}:{line}: {}", path.display(), e.message()))
        })?
    };
    Ok((config, raw))
}

impl RunConfig {
    /// Resolve every scenario against the defaults and validate the result.
    pub fn resolve_scenarios(&self, seed_override: Option<u64>) -> Result<Vec<ResolvedScenario>, CliError> {
        if self.scenarios.is_empty() {
            return Err(CliError::Config(
                "config declares no [[scenario]] entries".to_string(),
            ));
        }
        let d = &self.defaults;
        let propagation = PropagationParams::new(
            d.path_loss_exponent,
            d.k_ref_db
                .unwrap_or_else(|| hexsinr::free_space_k_ref_db(2.6e9)),
            d.shadowing_sigma_db,
            false,
        )?;
        let noise = NoiseModel::new(d.noise_density_dbm_per_hz, d.bandwidth_hz, d.noise_figure_db)?;
        let tx_pattern = AntennaPattern::parabolic(d.tx_beamwidth_deg, d.tx_max_attenuation_db)?
            .with_peak_gain(d.tx_peak_gain_db);
        if d.cdf_points == 0 {
            return Err(CliError::Config("cdf_points must be positive".to_string()));
        }
        for &p in &d.quantile_probs {
            if p.is_nan() || p <= 0.0 || p > 1.0 {
                return Err(CliError::Config(format!(
                    "quantile_probs entries must lie in (0, 1], got {p}"
                )));
            }
        }

        let mut resolved = Vec::with_capacity(self.scenarios.len());
        let mut names = std::collections::HashSet::new();
        for (idx, entry) in self.scenarios.iter().enumerate() {
            let mut entry = entry.clone();
            if let Some(seed) = seed_override {
                entry.seed = seed;
            }
            let name = entry.name.clone().unwrap_or_else(|| scenario_name(&entry));
            if !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                || name.is_empty()
            {
                return Err(CliError::Config(format!(
                    "scenario {idx}: name `{name}` must be non-empty [A-Za-z0-9_-]"
                )));
            }
            if !names.insert(name.clone()) {
                return Err(CliError::Config(format!(
                    "scenario {idx}: duplicate name `{name}`"
                )));
            }
            let config = ScenarioConfig {
                isd_m: entry.isd_m,
                rings: entry.rings.unwrap_or(d.rings),
                rx_choice: entry.rx.to_choice(),
                ue_count: entry.ue_count.unwrap_or(d.ue_count),
                seed: entry.seed,
                shadowing_enabled: entry.shadowing,
                propagation,
                noise,
                ptx_dbm: d.ptx_dbm,
                drop_region: entry.drop_region.unwrap_or(d.drop_region).to_region(),
                tx_pattern,
                boresight_offset_deg: d.boresight_offset_deg,
                phi_convention: d.phi_convention.to_convention(),
            };
            config
                .validate()
                .map_err(|e| CliError::Config(format!("scenario `{name}`: {e}")))?;
            resolved.push(ResolvedScenario {
                name,
                entry,
                config,
            });
        }
        Ok(resolved)
    }
}

fn trim_float(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e12 {
        format!("{v:.0}")
    } else {
        format!("{v}").replace('.', "p")
    }
}

fn scenario_name(entry: &ScenarioEntry) -> String {
    format!(
        "isd{}_{}_{}_s{}",
        trim_float(entry.isd_m),
        match entry.rx {
            RxName::Omni => "omni",
            RxName::Dir35 => "dir35",
            RxName::Dir17_5 => "dir17_5",
        },
        if entry.shadowing { "shadow" } else { "nosh" },
        entry.seed
    )
}

/// Pair each directional scenario with an omni scenario that shares the
/// drop: same geometry, seed, population and shadowing flag.
pub fn delta_pairs(resolved: &[ResolvedScenario]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, dir) in resolved.iter().enumerate() {
        if dir.entry.rx == RxName::Omni {
            continue;
        }
        let partner = resolved.iter().position(|omni| {
            omni.entry.rx == RxName::Omni
                && omni.config.isd_m == dir.config.isd_m
                && omni.config.seed == dir.config.seed
                && omni.config.ue_count == dir.config.ue_count
                && omni.config.rings == dir.config.rings
                && omni.config.shadowing_enabled == dir.config.shadowing_enabled
                && omni.config.drop_region == dir.config.drop_region
        });
        if let Some(j) = partner {
            pairs.push((i, j));
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str, ext: &str) -> tempfile::TempPath {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.into_temp_path()
    }

    #[test]
    fn parses_minimal_toml() {
        let path = write_tmp(
            r#"
[[scenario]]
isd_m = 2000.0
rx = "omni"
shadowing = false
seed = 1
"#,
            ".toml",
        );
        let (cfg, _) = load_config(&path).unwrap();
        let resolved = cfg.resolve_scenarios(None).unwrap();
        assert_eq!(resolved.len(), 1);
        assert_eq!(resolved[0].name, "isd2000_omni_nosh_s1");
        assert_eq!(resolved[0].config.rings, 4);
        assert_eq!(resolved[0].config.ue_count, 100_000);
    }

    #[test]
    fn parses_json_alternative() {
        let path = write_tmp(
            r#"{"scenario": [{"isd_m": 5000.0, "rx": "dir17_5", "shadowing": true, "seed": 9}]}"#,
            ".json",
        );
        let (cfg, _) = load_config(&path).unwrap();
        let resolved = cfg.resolve_scenarios(None).unwrap();
        assert_eq!(resolved[0].name, "isd5000_dir17_5_shadow_s9");
        assert!(resolved[0].config.shadowing_enabled);
    }

    #[test]
    fn reports_line_of_toml_error() {
        let path = write_tmp(
            "[[scenario]]\nisd_m = 2000.0\nrx = \"sideways\"\nshadowing = false\nseed = 1\n",
            ".toml",
        );
        let err = load_config(&path).unwrap_err();
        match err {
            CliError::Config(msg) => assert!(msg.contains(":3:"), "got: {msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_empty_lists() {
        let path = write_tmp("velocity = 3\n", ".toml");
        assert!(matches!(load_config(&path), Err(CliError::Config(_))));

        let path = write_tmp("out_dir = \"x\"\n", ".toml");
        let (cfg, _) = load_config(&path).unwrap();
        assert!(matches!(
            cfg.resolve_scenarios(None),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn seed_override_applies_to_all() {
        let path = write_tmp(
            r#"
[[scenario]]
isd_m = 2000.0
rx = "omni"
shadowing = false
seed = 1

[[scenario]]
isd_m = 2000.0
rx = "dir35"
shadowing = false
seed = 2
"#,
            ".toml",
        );
        let (cfg, _) = load_config(&path).unwrap();
        let resolved = cfg.resolve_scenarios(Some(77)).unwrap();
        assert!(resolved.iter().all(|r| r.config.seed == 77));
        // with equal seeds the directional scenario now pairs with the omni
        let pairs = delta_pairs(&resolved);
        assert_eq!(pairs, vec![(1, 0)]);
    }

    #[test]
    fn duplicate_names_rejected() {
        let path = write_tmp(
            r#"
[[scenario]]
name = "same"
isd_m = 2000.0
rx = "omni"
shadowing = false
seed = 1

[[scenario]]
name = "same"
isd_m = 5000.0
rx = "omni"
shadowing = false
seed = 1
"#,
            ".toml",
        );
        let (cfg, _) = load_config(&path).unwrap();
        assert!(matches!(
            cfg.resolve_scenarios(None),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn fluid_defaults_span_the_cell() {
        let fc = FluidCompare {
            isd_m: 5000.0,
            rings: 6,
            rx: vec![RxName::Omni],
            radii_m: vec![],
            angles_deg: vec![],
            integral_step_deg: 0.05,
            phi_convention: PhiName::TransmitterSide,
        };
        let radii = fc.probe_radii();
        assert_eq!(radii.len(), 8);
        assert!((radii[0] - 250.0).abs() < 1e-9);
        assert!((radii[7] - 2125.0).abs() < 1e-9);
        let angles = fc.probe_angles();
        assert_eq!(angles.len(), 12);
        assert!((angles[0] + 55.0).abs() < 1e-9 && (angles[11] - 55.0).abs() < 1e-9);
    }
}

//! Execution of the two subcommands: the scenario matrix and the
//! fluid-versus-Monte-Carlo comparison grid.

use crate::config::{delta_pairs, CliError, Emit, FluidCompare, RunConfig};
use crate::report::{
    fmt_db, fmt_m, fmt_prob, sha256_hex, write_atomic, ArtifactRecord, Csv, RunManifest,
    ScenarioRecord,
};
use hexsinr::{
    compute_sinr, delta_analysis, fluid_sinr, run_scenario, AntennaPattern, DropRegion,
    EmpiricalCdf, FluidParams, NoiseModel, Point2D, PropagationParams, ShadowingDraw,
};
use std::path::Path;

fn region_label(region: DropRegion) -> &'static str {
    match region {
        DropRegion::CentralSiteDisk => "central_site_disk",
        DropRegion::WholeNetwork => "whole_network",
    }
}

fn ensure_out_dir(out_dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    // fail early on unwritable directories
    let probe = out_dir.join(".write_probe.tmp");
    std::fs::write(&probe, b"")
        .map_err(|e| CliError::Io(format!("{} is not writable: {e}", out_dir.display())))?;
    std::fs::remove_file(&probe)
        .map_err(|e| CliError::Io(format!("cannot clean {}: {e}", probe.display())))?;
    Ok(())
}

fn cdf_csv(config_sha: &str, cdf: &EmpiricalCdf, points: usize) -> Vec<u8> {
    let mut csv = Csv::new(config_sha, "value_db,cumulative_prob");
    for k in 1..=points {
        let p = k as f64 / points as f64;
        let value = cdf.quantile(p).expect("p in (0,1]");
        csv.row(&[fmt_db(value), fmt_prob(p)]);
    }
    csv.finish()
}

fn quantile_csv(
    config_sha: &str,
    cdf: &EmpiricalCdf,
    probs: &[f64],
    bandwidth_hz: f64,
) -> Vec<u8> {
    let mut csv = Csv::new(config_sha, "p,sinr_db,throughput_mbps");
    for &p in probs {
        let sinr_db = cdf.quantile(p).expect("validated probability");
        let gamma = 10f64.powf(sinr_db / 10.0);
        let mbps = hexsinr::shannon_throughput_bps(bandwidth_hz, gamma).expect("gamma >= 0") / 1e6;
        csv.row(&[fmt_prob(p), fmt_db(sinr_db), fmt_db(mbps)]);
    }
    csv.finish()
}

/// Run every scenario, emit its reports and the paired-delta files, then
/// write the manifest. Returns the manifest path.
pub fn execute_run(
    config: &RunConfig,
    raw_config: &[u8],
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<std::path::PathBuf, CliError> {
    let resolved = config.resolve_scenarios(seed_override)?;
    ensure_out_dir(out_dir)?;
    let config_sha = sha256_hex(raw_config);
    let emit = &config.defaults.emit;
    let mut artifacts: Vec<ArtifactRecord> = Vec::new();
    let mut records: Vec<ScenarioRecord> = Vec::new();

    let mut emit_file = |name: String, content: Vec<u8>| -> Result<(), CliError> {
        let path = out_dir.join(&name);
        let sha256 = write_atomic(&path, &content)?;
        artifacts.push(ArtifactRecord { path: name, sha256 });
        Ok(())
    };

    for scenario in &resolved {
        let samples = run_scenario(&scenario.config)?;
        let sinr_db: Vec<f64> = samples.iter().map(|s| s.sinr_db).collect();
        let cdf = EmpiricalCdf::from_samples(&sinr_db)?;
        if emit.contains(&Emit::Cdf) {
            emit_file(
                format!("{}.cdf.csv", scenario.name),
                cdf_csv(&config_sha, &cdf, config.defaults.cdf_points),
            )?;
        }
        if emit.contains(&Emit::Quantiles) {
            emit_file(
                format!("{}.quantiles.csv", scenario.name),
                quantile_csv(
                    &config_sha,
                    &cdf,
                    &config.defaults.quantile_probs,
                    scenario.config.noise.bandwidth_hz,
                ),
            )?;
        }
        records.push(ScenarioRecord {
            name: scenario.name.clone(),
            isd_m: scenario.config.isd_m,
            rx: scenario.config.rx_choice.label().to_string(),
            shadowing: scenario.config.shadowing_enabled,
            seed: scenario.config.seed,
            ue_count: scenario.config.ue_count,
            rings: scenario.config.rings,
            drop_region: region_label(scenario.config.drop_region).to_string(),
        });
    }

    if emit.contains(&Emit::Delta) {
        for (dir_idx, _omni_idx) in delta_pairs(&resolved) {
            let scenario = &resolved[dir_idx];
            let deltas = delta_analysis(&scenario.config)?;
            let mut csv = Csv::new(&config_sha, "x_m,y_m,delta_db");
            for d in &deltas {
                csv.row(&[fmt_m(d.position.x), fmt_m(d.position.y), fmt_db(d.delta_db)]);
            }
            emit_file(format!("{}.delta.csv", scenario.name), csv.finish())?;
        }
    }

    let manifest = RunManifest {
        config_sha256: config_sha,
        defaults: config.defaults.clone(),
        scenarios: records,
        artifacts,
    };
    let manifest_bytes = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| CliError::Io(format!("cannot encode manifest: {e}")))?;
    let manifest_path = out_dir.join("run_manifest.json");
    write_atomic(&manifest_path, &manifest_bytes)?;
    Ok(manifest_path)
}

/// Discrete-engine SINR at one probe of the comparison grid: the terminal
/// sits at `(r, theta)` relative to the central site's first sector, which
/// serves it; no shadowing.
#[allow(clippy::too_many_arguments)]
fn probe_sinr_db(
    layout: &hexsinr::NetworkLayout,
    propagation: &PropagationParams,
    noise: &NoiseModel,
    ptx_dbm: f64,
    tx_pattern: &AntennaPattern,
    rx_pattern: &AntennaPattern,
    convention: hexsinr::PhiConvention,
    r_m: f64,
    theta_deg: f64,
) -> Result<f64, CliError> {
    let serving = &layout.sectors()[0];
    let az = (serving.boresight_deg + theta_deg).to_radians();
    let ue = Point2D::new(r_m * az.cos(), r_m * az.sin());
    let shadows = vec![ShadowingDraw::unit(); layout.sectors().len()];
    let sinr = compute_sinr(
        ue,
        0,
        layout,
        propagation,
        noise,
        ptx_dbm,
        tx_pattern,
        rx_pattern,
        &shadows,
        convention,
    )?;
    Ok(10.0 * sinr.log10())
}

impl FluidCompare {
    fn phi_convention_resolved(&self) -> hexsinr::PhiConvention {
        match self.phi_convention {
            crate::config::PhiName::UeSide => hexsinr::PhiConvention::UeSide,
            crate::config::PhiName::TransmitterSide => hexsinr::PhiConvention::TransmitterSide,
        }
    }
}

/// Evaluate the closed form against the discrete engine on the probe grid
/// and emit one comparison table.
pub fn execute_compare(
    config: &RunConfig,
    raw_config: &[u8],
    out_dir: &Path,
) -> Result<std::path::PathBuf, CliError> {
    let grid = config
        .fluid_compare
        .as_ref()
        .ok_or_else(|| CliError::Config("config lacks a [fluid_compare] block".to_string()))?;
    if grid.rx.is_empty() {
        return Err(CliError::Config(
            "[fluid_compare] must list at least one rx".to_string(),
        ));
    }
    ensure_out_dir(out_dir)?;
    let config_sha = sha256_hex(raw_config);
    let d = &config.defaults;

    let layout = hexsinr::build_layout_with_offset(grid.isd_m, grid.rings, d.boresight_offset_deg)?;
    let propagation = PropagationParams::new(
        d.path_loss_exponent,
        d.k_ref_db.unwrap_or_else(|| hexsinr::free_space_k_ref_db(2.6e9)),
        0.0,
        false,
    )?;
    let noise = NoiseModel::new(d.noise_density_dbm_per_hz, d.bandwidth_hz, d.noise_figure_db)?;
    let tx_pattern = AntennaPattern::parabolic(d.tx_beamwidth_deg, d.tx_max_attenuation_db)?
        .with_peak_gain(d.tx_peak_gain_db);
    let radii = grid.probe_radii();
    let angles = grid.probe_angles();

    let mut csv = Csv::new(
        &config_sha,
        "r_m,theta_deg,rx,fluid_sinr_db,mc_sinr_db,difference_db,note",
    );
    let mut skipped = Vec::new();

    for rx_name in &grid.rx {
        let rx_choice = rx_name.to_choice();
        let rx_pattern = rx_choice.pattern();
        let mut params = FluidParams::from_isd(
            grid.isd_m,
            d.path_loss_exponent,
            d.ptx_dbm,
            d.k_ref_db.unwrap_or_else(|| hexsinr::free_space_k_ref_db(2.6e9)),
            noise,
            tx_pattern,
            rx_pattern,
        )?;
        params.integral_step_deg = grid.integral_step_deg;

        for &r in &radii {
            for &theta in &angles {
                if r >= grid.isd_m {
                    csv.row(&[
                        fmt_m(r),
                        fmt_db(theta),
                        rx_choice.label().to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        "skipped_out_of_domain".to_string(),
                    ]);
                    skipped.push((r, theta));
                    continue;
                }
                let fluid = 10.0 * fluid_sinr(&params, r, theta)?.log10();
                let mc = probe_sinr_db(
                    &layout,
                    &propagation,
                    &noise,
                    d.ptx_dbm,
                    &tx_pattern,
                    &rx_pattern,
                    grid.phi_convention_resolved(),
                    r,
                    theta,
                )?;
                csv.row(&[
                    fmt_m(r),
                    fmt_db(theta),
                    rx_choice.label().to_string(),
                    fmt_db(fluid),
                    fmt_db(mc),
                    fmt_db(fluid - mc),
                    String::new(),
                ]);
            }
        }
    }
    for (r, theta) in &skipped {
        eprintln!(
            "warning: probe (r = {r} m, theta = {theta} deg) lies outside the closed-form domain"
        );
    }

    let path = out_dir.join("fluid_compare.csv");
    write_atomic(&path, &csv.finish())?;
    Ok(path)
}

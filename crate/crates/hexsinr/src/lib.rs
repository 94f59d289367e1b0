//! Downlink SINR evaluation for hexagonal tri-sector cellular networks with
//! directional receive antennas at the terminals.
//!
//! Two evaluation routes are provided over the same antenna and propagation
//! primitives:
//!
//! * a Monte-Carlo engine ([`montecarlo`]) that drops terminals, attaches
//!   each to its best server and sums the discrete interference field, and
//! * a closed-form fluid model ([`fluid`]) that replaces the interfering
//!   sites by a continuum density and needs only the terminal's distance and
//!   angle relative to its serving sector.
//!
//! [`stats`] turns per-terminal results into empirical CDFs, quantile and
//! outage readings, paired-delta summaries and Shannon throughput figures.
//!
//! Runs are deterministic for a fixed seed and independent of worker count:
//! terminal positions and per-terminal fading use dedicated streams of a
//! counter-mode generator.
//!
//! # Example
//!
//! ```
//! use hexsinr::{run_scenario, EmpiricalCdf, RxChoice, ScenarioConfig};
//!
//! let config = ScenarioConfig {
//!     ue_count: 2_000,
//!     ..ScenarioConfig::new(2000.0, RxChoice::Dir17_5, false, 42)
//! };
//! let samples = run_scenario(&config)?;
//! let db: Vec<f64> = samples.iter().map(|s| s.sinr_db).collect();
//! let cdf = EmpiricalCdf::from_samples(&db)?;
//! assert!(cdf.quantile(0.9)? > cdf.quantile(0.1)?);
//! # Ok::<(), hexsinr::Error>(())
//! ```

pub mod antenna;
pub mod error;
pub mod fluid;
pub mod geometry;
pub mod montecarlo;
pub mod propagation;
pub mod stats;

pub use antenna::AntennaPattern;
pub use error::{Error, Result};
pub use fluid::{cosite_ratio, fluid_sinr, hexagonal_site_density, pattern_convolution, FluidParams};
pub use geometry::{
    build_layout, build_layout_with_offset, drop_ues, relative_polar, ue_bearing, DropRegion,
    NetworkLayout, Point2D, PolarOffset, Sector,
};
pub use montecarlo::{
    attach, compute_sinr, compute_sinr_with_interferers, delta_analysis, run_scenario,
    DeltaSample, PhiConvention, RxChoice, ScenarioConfig, UeSample,
};
pub use propagation::{
    free_space_k_ref_db, path_gain_linear, received_power_mw, sample_shadowing, thermal_noise_mw,
    NoiseModel, PropagationParams, ShadowingDraw,
};
pub use stats::{delta_summary, shannon_throughput_bps, DeltaSummary, EmpiricalCdf};

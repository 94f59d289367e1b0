//! Path gain, lognormal shadowing and thermal noise.
//!
//! The link model is a single-slope power law `K r^-eta` with an optional
//! lognormal shadowing multiplier per link, evaluated for one wideband
//! carrier. Powers are carried in milliwatts; configuration values in dB/dBm.

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Large-scale propagation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationParams {
    /// Path-loss exponent, strictly greater than 2.
    pub path_loss_exponent: f64,
    /// Path gain at 1 m in dB (10 log10 of the power-law constant).
    pub k_ref_db: f64,
    /// Shadowing standard deviation in dB.
    pub shadowing_sigma_db: f64,
    /// Whether shadowing draws are applied at all.
    pub shadowing_enabled: bool,
}

impl PropagationParams {
    pub fn new(
        path_loss_exponent: f64,
        k_ref_db: f64,
        shadowing_sigma_db: f64,
        shadowing_enabled: bool,
    ) -> Result<Self> {
        if !path_loss_exponent.is_finite() || path_loss_exponent <= 2.0 {
            return Err(Error::invalid(
                "path_loss_exponent",
                format!("must be > 2, got {path_loss_exponent}"),
            ));
        }
        if !k_ref_db.is_finite() {
            return Err(Error::invalid("k_ref_db", "must be finite"));
        }
        if !shadowing_sigma_db.is_finite() || shadowing_sigma_db < 0.0 {
            return Err(Error::invalid(
                "shadowing_sigma_db",
                format!("must be non-negative, got {shadowing_sigma_db}"),
            ));
        }
        Ok(Self {
            path_loss_exponent,
            k_ref_db,
            shadowing_sigma_db,
            shadowing_enabled,
        })
    }
}

impl Default for PropagationParams {
    /// Macro-cellular defaults: exponent 3.5, free-space reference gain at
    /// 1 m for a 2.6 GHz carrier, 8 dB shadowing (disabled until requested).
    fn default() -> Self {
        Self {
            path_loss_exponent: 3.5,
            k_ref_db: free_space_k_ref_db(2.6e9),
            shadowing_sigma_db: 8.0,
            shadowing_enabled: false,
        }
    }
}

/// Free-space path gain at 1 m for a carrier frequency: `20 log10(c / 4 pi f)`.
pub fn free_space_k_ref_db(frequency_hz: f64) -> f64 {
    20.0 * (SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * frequency_hz)).log10()
}

/// Receiver noise description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub noise_density_dbm_per_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
}

impl NoiseModel {
    pub fn new(
        noise_density_dbm_per_hz: f64,
        bandwidth_hz: f64,
        noise_figure_db: f64,
    ) -> Result<Self> {
        if !bandwidth_hz.is_finite() || bandwidth_hz <= 0.0 {
            return Err(Error::invalid(
                "bandwidth_hz",
                format!("must be positive, got {bandwidth_hz}"),
            ));
        }
        if !noise_figure_db.is_finite() || noise_figure_db < 0.0 {
            return Err(Error::invalid(
                "noise_figure_db",
                format!("must be non-negative, got {noise_figure_db}"),
            ));
        }
        Ok(Self {
            noise_density_dbm_per_hz,
            bandwidth_hz,
            noise_figure_db,
        })
    }
}

impl Default for NoiseModel {
    /// Thermal floor at -174 dBm/Hz over a 10 MHz channel with a 9 dB
    /// receiver noise figure.
    fn default() -> Self {
        Self {
            noise_density_dbm_per_hz: -174.0,
            bandwidth_hz: 1.0e7,
            noise_figure_db: 9.0,
        }
    }
}

/// One lognormal shadowing realization for a single link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowingDraw {
    pub linear_factor: f64,
}

impl ShadowingDraw {
    /// The no-fading draw (factor exactly 1).
    pub fn unit() -> Self {
        Self { linear_factor: 1.0 }
    }
}

/// Deterministic part of the path gain: `10^(k_ref/10) * r^-eta`.
pub fn path_gain_linear(params: &PropagationParams, r_m: f64) -> Result<f64> {
    if r_m.is_nan() || r_m <= 0.0 {
        return Err(Error::invalid(
            "r_m",
            format!("distance must be positive, got {r_m}"),
        ));
    }
    Ok(10f64.powf(params.k_ref_db / 10.0) * r_m.powf(-params.path_loss_exponent))
}

/// Draw one lognormal shadowing factor: `10^(Z/10)` with `Z ~ N(0, sigma^2)`.
///
/// `sigma_db = 0` yields a factor of exactly 1 while consuming the same
/// amount of randomness, so degenerate and disabled shadowing agree bit for
/// bit.
pub fn sample_shadowing<R: Rng + ?Sized>(sigma_db: f64, rng: &mut R) -> ShadowingDraw {
    let z: f64 = rng.sample(StandardNormal);
    ShadowingDraw {
        linear_factor: 10f64.powf(sigma_db * z / 10.0),
    }
}

/// Thermal noise power over the channel in milliwatts.
pub fn thermal_noise_mw(noise: &NoiseModel) -> f64 {
    let dbm = noise.noise_density_dbm_per_hz
        + 10.0 * noise.bandwidth_hz.log10()
        + noise.noise_figure_db;
    10f64.powf(dbm / 10.0)
}

/// Received power on one link in milliwatts.
///
/// `theta_tx_deg` is the terminal's offset from the transmit boresight;
/// `phi_rx_deg` is the transmitter's offset from the receive boresight. An
/// omnidirectional receive pattern reduces this to the plain transmit-side
/// link budget.
#[allow(clippy::too_many_arguments)]
pub fn received_power_mw(
    ptx_dbm: f64,
    params: &PropagationParams,
    tx_pattern: &AntennaPattern,
    rx_pattern: &AntennaPattern,
    r_m: f64,
    theta_tx_deg: f64,
    phi_rx_deg: f64,
    shadow: ShadowingDraw,
) -> Result<f64> {
    Ok(10f64.powf(ptx_dbm / 10.0)
        * path_gain_linear(params, r_m)?
        * tx_pattern.gain_linear(theta_tx_deg)
        * rx_pattern.gain_linear(phi_rx_deg)
        * shadow.linear_factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flat(eta: f64, k_ref: f64) -> PropagationParams {
        PropagationParams::new(eta, k_ref, 0.0, false).unwrap()
    }

    #[test]
    fn path_gain_reference_cases() {
        assert_eq!(path_gain_linear(&flat(3.5, 0.0), 1.0).unwrap(), 1.0);
        assert!((path_gain_linear(&flat(2.0 + 1e-12, 0.0), 10.0).unwrap() - 0.01).abs() < 1e-12);
        // cross-check against independent dB-domain arithmetic
        let g = path_gain_linear(&flat(3.5, -38.4), 1000.0).unwrap();
        let expected_db = -38.4 - 35.0 * 1000f64.log10();
        let expected = 10f64.powf(expected_db / 10.0);
        assert!((g - expected).abs() / expected < 1e-12);
        assert!((g - 4.5709e-15).abs() / 4.5709e-15 < 1e-4);
    }

    #[test]
    fn path_gain_rejects_non_positive_distance() {
        assert!(path_gain_linear(&flat(3.5, 0.0), 0.0).is_err());
        assert!(path_gain_linear(&flat(3.5, 0.0), -2.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(PropagationParams::new(2.0, 0.0, 0.0, false).is_err());
        assert!(PropagationParams::new(3.5, 0.0, -1.0, false).is_err());
        assert!(PropagationParams::new(3.5, f64::NAN, 0.0, false).is_err());
    }

    #[test]
    fn default_k_ref_is_free_space_at_2_6_ghz() {
        let k = PropagationParams::default().k_ref_db;
        assert!((k - (-40.747)).abs() < 1e-3, "k_ref {k}");
    }

    #[test]
    fn degenerate_shadowing_is_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_shadowing(0.0, &mut rng).linear_factor, 1.0);
        }
    }

    #[test]
    fn shadowing_moments_match_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let db = 10.0 * sample_shadowing(8.0, &mut rng).linear_factor.log10();
            sum += db;
            sum2 += db * db;
        }
        let mean = sum / n as f64;
        let std = (sum2 / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((std - 8.0).abs() < 0.05, "std {std}");
    }

    #[test]
    fn thermal_noise_reference_cases() {
        let n = NoiseModel::new(-174.0, 1.0e7, 0.0).unwrap();
        assert!((thermal_noise_mw(&n) - 10f64.powf(-10.4)).abs() < 1e-16);
        let n = NoiseModel::new(-174.0, 1.0e7, 9.0).unwrap();
        assert!((10.0 * thermal_noise_mw(&n).log10() - (-95.0)).abs() < 1e-9);
        let n = NoiseModel::new(-174.0, 1.0, 0.0).unwrap();
        assert!((10.0 * thermal_noise_mw(&n).log10() - (-174.0)).abs() < 1e-9);
        assert!(NoiseModel::new(-174.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn received_power_reference_cases() {
        let p = flat(2.0 + 1e-15, 0.0);
        let omni = AntennaPattern::omni();
        let tx = AntennaPattern::parabolic(70.0, 25.0).unwrap();
        let got =
            received_power_mw(0.0, &p, &tx, &omni, 1.0, 0.0, 0.0, ShadowingDraw::unit()).unwrap();
        assert!((got - 1.0).abs() < 1e-12);

        let rx = AntennaPattern::parabolic(35.0, 23.0).unwrap();
        let got =
            received_power_mw(0.0, &p, &tx, &rx, 1.0, 0.0, 17.5, ShadowingDraw::unit()).unwrap();
        assert!((got - 10f64.powf(-0.3)).abs() < 1e-12);

        // dBm-domain oracle for a realistic link
        let p = flat(3.5, -38.4);
        let got =
            received_power_mw(46.0, &p, &omni, &omni, 667.0, 0.0, 0.0, ShadowingDraw::unit())
                .unwrap();
        let expected_dbm = 46.0 - 38.4 - 35.0 * 667f64.log10();
        assert!((10.0 * got.log10() - expected_dbm).abs() < 1e-9);
    }

    #[test]
    fn db_linear_round_trip() {
        let p = flat(3.7, -40.0);
        let tx = AntennaPattern::parabolic(70.0, 25.0).unwrap().with_peak_gain(15.0);
        let rx = AntennaPattern::parabolic(17.5, 21.0).unwrap().with_peak_gain(26.0);
        let shadow = ShadowingDraw {
            linear_factor: 10f64.powf(0.43),
        };
        let got = received_power_mw(46.0, &p, &tx, &rx, 812.0, 23.0, -48.0, shadow).unwrap();
        let db_sum = 46.0 + (-40.0 - 37.0 * 812f64.log10()) + tx.gain_db(23.0)
            + rx.gain_db(-48.0)
            + 4.3;
        assert!((10.0 * got.log10() - db_sum).abs() < 1e-9);
    }

    #[test]
    fn received_power_decreases_with_distance() {
        let p = flat(3.5, -40.0);
        let tx = AntennaPattern::parabolic(70.0, 25.0).unwrap();
        let omni = AntennaPattern::omni();
        let mut prev = f64::INFINITY;
        for r in [10.0, 50.0, 300.0, 1200.0, 9000.0] {
            let got =
                received_power_mw(30.0, &p, &tx, &omni, r, 12.0, 0.0, ShadowingDraw::unit())
                    .unwrap();
            assert!(got < prev);
            prev = got;
        }
    }

    #[test]
    fn omni_receiver_matches_directional_at_boresight() {
        let p = flat(3.5, -40.0);
        let tx = AntennaPattern::parabolic(70.0, 25.0).unwrap();
        let omni = AntennaPattern::omni();
        let dir0 = AntennaPattern::parabolic(17.5, 21.0).unwrap();
        let a = received_power_mw(46.0, &p, &tx, &omni, 500.0, 30.0, 77.0, ShadowingDraw::unit())
            .unwrap();
        let b = received_power_mw(46.0, &p, &tx, &dir0, 500.0, 30.0, 0.0, ShadowingDraw::unit())
            .unwrap();
        assert_eq!(a, b);
    }
}

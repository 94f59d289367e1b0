//! Antenna gain patterns.
//!
//! The directional pattern is the standard sectorized azimuth cut, parabolic
//! in dB: attenuation `min(12 (a / bw)^2, A_m)` below the boresight gain,
//! where `bw` is the 3 dB beamwidth and `A_m` the floor attenuation. The
//! omnidirectional pattern is the degenerate unit-gain case.

use crate::error::{Error, Result};
use crate::geometry::fold_angle_deg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AntennaPattern {
    /// Unit gain in every direction.
    Omni,
    /// Parabolic-in-dB pattern with a floor.
    Parabolic {
        /// 3 dB beamwidth: attenuation is 3 dB at half this angle off boresight.
        beamwidth_3db_deg: f64,
        /// Floor attenuation A_m below the boresight gain, in dB.
        max_attenuation_db: f64,
        /// Boresight gain in dBi.
        peak_gain_db: f64,
    },
}

impl AntennaPattern {
    pub fn omni() -> Self {
        AntennaPattern::Omni
    }

    /// Parabolic pattern with 0 dBi boresight gain.
    pub fn parabolic(beamwidth_3db_deg: f64, max_attenuation_db: f64) -> Result<Self> {
        if !beamwidth_3db_deg.is_finite() || beamwidth_3db_deg <= 0.0 {
            return Err(Error::invalid(
                "beamwidth_3db_deg",
                format!("must be positive, got {beamwidth_3db_deg}"),
            ));
        }
        if !max_attenuation_db.is_finite() || max_attenuation_db < 0.0 {
            return Err(Error::invalid(
                "max_attenuation_db",
                format!("must be non-negative, got {max_attenuation_db}"),
            ));
        }
        Ok(AntennaPattern::Parabolic {
            beamwidth_3db_deg,
            max_attenuation_db,
            peak_gain_db: 0.0,
        })
    }

    /// Same pattern shape with the boresight gain set to `db`.
    pub fn with_peak_gain(self, db: f64) -> Self {
        match self {
            AntennaPattern::Omni => AntennaPattern::Omni,
            AntennaPattern::Parabolic {
                beamwidth_3db_deg,
                max_attenuation_db,
                ..
            } => AntennaPattern::Parabolic {
                beamwidth_3db_deg,
                max_attenuation_db,
                peak_gain_db: db,
            },
        }
    }

    /// Boresight gain in dBi.
    pub fn peak_gain_db(&self) -> f64 {
        match self {
            AntennaPattern::Omni => 0.0,
            AntennaPattern::Parabolic { peak_gain_db, .. } => *peak_gain_db,
        }
    }

    /// Gain in dB at an azimuth offset from boresight.
    ///
    /// The angle is folded into `[0, 180]` first, so the pattern is periodic
    /// and exactly even in its argument.
    pub fn gain_db(&self, angle_deg: f64) -> f64 {
        match self {
            AntennaPattern::Omni => 0.0,
            AntennaPattern::Parabolic {
                beamwidth_3db_deg,
                max_attenuation_db,
                peak_gain_db,
            } => {
                let a = fold_angle_deg(angle_deg);
                let roll = 12.0 * (a / beamwidth_3db_deg) * (a / beamwidth_3db_deg);
                peak_gain_db - roll.min(*max_attenuation_db)
            }
        }
    }

    /// Linear-scale gain, `10^(gain_db / 10)`.
    pub fn gain_linear(&self, angle_deg: f64) -> f64 {
        match self {
            AntennaPattern::Omni => 1.0,
            _ => 10f64.powf(self.gain_db(angle_deg) / 10.0),
        }
    }
}

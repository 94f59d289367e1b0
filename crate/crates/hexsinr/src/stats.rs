//! Empirical CDFs, quantile and outage queries, paired-delta summaries and
//! Shannon throughput.

use crate::error::{Error, Result};

/// Sorted sample set with step-function CDF semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Build from raw samples; the input must be non-empty and finite.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "must be non-empty"));
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("samples", format!("non-finite value {bad}")));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().expect("non-empty by construction")
    }

    /// `F(x)`: fraction of samples less than or equal to `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|v| *v <= x);
        count as f64 / self.sorted.len() as f64
    }

    /// Lower empirical quantile: the smallest sample `x` with `F(x) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p <= 0.0 || p > 1.0 {
            return Err(Error::invalid("p", format!("must be in (0, 1], got {p}")));
        }
        let n = self.sorted.len();
        let mut k = (p * n as f64).ceil() as usize;
        k = k.clamp(1, n);
        // guard the float ceil against rounding on exact multiples
        while k > 1 && (k - 1) as f64 / n as f64 >= p {
            k -= 1;
        }
        while k < n && (k as f64) / (n as f64) < p {
            k += 1;
        }
        Ok(self.sorted[k - 1])
    }
}

/// Sign breakdown of a paired-delta population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSummary {
    /// Fraction with delta below the negative band edge.
    pub frac_degraded: f64,
    /// Fraction within the band around zero.
    pub frac_neutral: f64,
    /// Fraction above the positive band edge.
    pub frac_improved: f64,
    pub min_delta_db: f64,
    pub max_delta_db: f64,
}

/// Classify deltas into degraded / neutral / improved around a +-band.
pub fn delta_summary(deltas: &[f64], neutral_band_db: f64) -> Result<DeltaSummary> {
    if deltas.is_empty() {
        return Err(Error::invalid("deltas", "must be non-empty"));
    }
    if neutral_band_db.is_nan() || neutral_band_db < 0.0 {
        return Err(Error::invalid("neutral_band_db", "must be non-negative"));
    }
    let n = deltas.len();
    let mut degraded = 0usize;
    let mut improved = 0usize;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &d in deltas {
        if d < -neutral_band_db {
            degraded += 1;
        } else if d > neutral_band_db {
            improved += 1;
        }
        min = min.min(d);
        max = max.max(d);
    }
    let neutral = n - degraded - improved;
    Ok(DeltaSummary {
        frac_degraded: degraded as f64 / n as f64,
        frac_neutral: neutral as f64 / n as f64,
        frac_improved: improved as f64 / n as f64,
        min_delta_db: min,
        max_delta_db: max,
    })
}

/// Shannon bound `W log2(1 + gamma)` in bits per second.
pub fn shannon_throughput_bps(bandwidth_hz: f64, sinr_linear: f64) -> Result<f64> {
    if bandwidth_hz.is_nan() || bandwidth_hz <= 0.0 {
        return Err(Error::invalid("bandwidth_hz", "must be positive"));
    }
    if sinr_linear.is_nan() || sinr_linear < 0.0 {
        return Err(Error::invalid(
            "sinr_linear",
            format!("must be non-negative, got {sinr_linear}"),
        ));
    }
    Ok(bandwidth_hz * (1.0 + sinr_linear).log2())
}

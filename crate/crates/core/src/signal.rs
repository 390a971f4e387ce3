//! Slow-time series: real-valued signals sampled at the frame rate.

use serde::Serialize;

use crate::error::{Error, Result};

/// A real-valued signal on the slow-time (frame) axis, e.g. the per-frame
/// micro-Doppler energy of one target or any filtered version of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlowTimeSeries {
    pub values: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl SlowTimeSeries {
    pub fn new(values: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0) {
            return Err(Error::signal(format!("sample rate must be > 0, got {sample_rate_hz}")));
        }
        Ok(Self { values, sample_rate_hz })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.values.len() as f64 / self.sample_rate_hz
    }

    /// Same sampling, new values (for filter outputs).
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, sample_rate_hz: self.sample_rate_hz }
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn std(&self) -> f64 {
        if self.values.len() < 2 {
            return 0.0;
        }
        let m = self.mean();
        let var = self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
            / self.values.len() as f64;
        var.sqrt()
    }

    /// Subtract the mean in place and return the removed value.
    pub fn remove_mean(&mut self) -> f64 {
        let m = self.mean();
        for v in &mut self.values {
            *v -= m;
        }
        m
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One sample of an average along an increasing schedule of radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub index: f64,
    pub value: f64,
    /// Declared absolute error; 0 for exact values.
    pub error: f64,
}

/// Samples with strictly increasing index and a trailing window for the
/// limsup/liminf estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageSeries {
    samples: Vec<Sample>,
    window: usize,
}

impl AverageSeries {
    pub fn new(samples: Vec<(f64, f64, f64)>, window: usize) -> Result<Self> {
        let samples: Vec<Sample> = samples
            .into_iter()
            .map(|(index, value, error)| Sample {
                index,
                value,
                error,
            })
            .collect();
        if samples.windows(2).any(|w| !(w[0].index < w[1].index)) {
            return Err(Error::Invalid("series indices must increase strictly".into()));
        }
        if samples.is_empty() {
            return Err(Error::Invalid("series is empty".into()));
        }
        let window = window.clamp(1, samples.len());
        Ok(AverageSeries { samples, window })
    }

    /// Series whose window is the trailing quarter.
    pub fn with_quarter_window(samples: Vec<(f64, f64, f64)>) -> Result<Self> {
        let n = samples.len();
        Self::new(samples, n.div_ceil(4))
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.value)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn tail(&self) -> &[Sample] {
        &self.samples[self.samples.len() - self.window..]
    }

    pub fn limsup_estimate(&self) -> f64 {
        self.tail().iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn liminf_estimate(&self) -> f64 {
        self.tail().iter().map(|s| s.value).fold(f64::INFINITY, f64::min)
    }

    pub fn max_error(&self) -> f64 {
        self.samples.iter().map(|s| s.error).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "value", "error"])
            .map_err(|e| Error::Parse(e.to_string()))?;
        for s in &self.samples {
            w.serialize((s.index, s.value, s.error))
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Trailing-window oscillation summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillation {
    pub limsup: f64,
    pub liminf: f64,
    pub gap: f64,
    pub window: usize,
    pub non_convergent: bool,
}

/// Minimum series length accepted by [`oscillation_diagnostic`].
pub const MIN_DIAGNOSTIC_SAMPLES: usize = 8;

pub fn oscillation_diagnostic(s: &AverageSeries, gap_tol: f64) -> Result<Oscillation> {
    if s.len() < MIN_DIAGNOSTIC_SAMPLES {
        return Err(Error::Invalid(format!(
            "oscillation diagnostic needs at least {MIN_DIAGNOSTIC_SAMPLES} samples, got {}",
            s.len()
        )));
    }
    let limsup = s.limsup_estimate();
    let liminf = s.liminf_estimate();
    let gap = limsup - liminf;
    Ok(Oscillation {
        limsup,
        liminf,
        gap,
        window: s.window(),
        non_convergent: gap > gap_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> AverageSeries {
        AverageSeries::with_quarter_window(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as f64, v, 0.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_has_no_gap() {
        let o = oscillation_diagnostic(&series(&[0.3; 12]), 1e-9).unwrap();
        assert_eq!(o.gap, 0.0);
        assert!(!o.non_convergent);
    }

    #[test]
    fn alternating_gap_one() {
        let v: Vec<f64> = (0..16).map(|i| (i % 2) as f64).collect();
        let o = oscillation_diagnostic(&series(&v), 1e-9).unwrap();
        assert_eq!(o.gap, 1.0);
        assert!(o.non_convergent);
    }

    #[test]
    fn rejects_short_and_unsorted() {
        assert!(oscillation_diagnostic(&series(&[1.0; 4]), 0.1).is_err());
        assert!(AverageSeries::new(vec![(1.0, 0.0, 0.0), (1.0, 0.0, 0.0)], 1).is_err());
    }

    #[test]
    fn csv_has_header() {
        let csv = series(&[1.0, 2.0]).to_csv().unwrap();
        assert!(csv.starts_with("index,value,error\n"));
    }
}

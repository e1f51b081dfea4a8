use statrs::distribution::{ContinuousCDF, Normal};
use statrs::statistics::{Data, OrderStatistics};

use super::ReportError;

pub const MIN_SAMPLES: usize = 50;
const MAX_ITERATIONS: usize = 10;
const INITIAL_HALF_WIDTH: f64 = 3.0;
const HALF_WIDTH: f64 = 2.0;
const RELATIVE_TOLERANCE: f64 = 1e-3;

/// Core of a peak from truncated moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakFit {
    pub mean: f64,
    pub sigma: f64,
    pub n_core: usize,
    pub n_iterations: usize,
}

/// Ratio of the standard deviation of a normal distribution truncated at
/// ±k σ to the full σ.
pub fn truncation_factor(k: f64) -> f64 {
    let n = Normal::standard();
    let inside = 2.0 * n.cdf(k) - 1.0;
    let density = (-0.5 * k * k).exp() / (2.0 * std::f64::consts::PI).sqrt();
    (1.0 - 2.0 * k * density / inside).sqrt()
}

/// Iterated truncated mean and standard deviation.
///
/// The first window is median ± 3·IQR/1.349, later ones mean ± 2σ. The
/// standard deviation inside a window is rescaled by the truncation factor of
/// a normal distribution, so a Gaussian core returns its own σ.
pub fn core_width(samples: &[f64]) -> Result<PeakFit, ReportError> {
    if samples.len() < MIN_SAMPLES {
        return Err(ReportError::Degenerate(format!(
            "core width needs at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(ReportError::Input("non-finite sample".into()));
    }
    let mut data = Data::new(samples.to_vec());
    let median = data.median();
    let mut sigma = data.interquartile_range() / 1.349;
    if !(sigma > 0.0) {
        let n = samples.len() as f64;
        let m = samples.iter().sum::<f64>() / n;
        sigma = (samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt();
    }
    if !(sigma > 0.0) {
        return Err(ReportError::Degenerate("all samples identical".into()));
    }

    let mut mean = median;
    let mut half_width = INITIAL_HALF_WIDTH;
    let mut n_core = 0;
    let mut n_iterations = 0;
    while n_iterations < MAX_ITERATIONS {
        n_iterations += 1;
        let (lo, hi) = (mean - half_width * sigma, mean + half_width * sigma);
        let (mut n, mut sum) = (0usize, 0.0);
        for &x in samples {
            if x >= lo && x <= hi {
                n += 1;
                sum += x;
            }
        }
        if n < 2 {
            return Err(ReportError::Degenerate("empty core window".into()));
        }
        let m = sum / n as f64;
        let var = samples.iter().filter(|&&x| x >= lo && x <= hi).map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
        let next = var.sqrt() / truncation_factor(half_width);
        if !(next > 0.0) {
            return Err(ReportError::Degenerate("zero width core".into()));
        }
        let change = (next - sigma).abs() / sigma;
        mean = m;
        sigma = next;
        n_core = n;
        if change < RELATIVE_TOLERANCE && half_width == HALF_WIDTH {
            break;
        }
        half_width = HALF_WIDTH;
    }
    Ok(PeakFit { mean, sigma, n_core, n_iterations })
}

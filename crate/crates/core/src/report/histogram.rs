use super::ReportError;

/// Fixed-width histogram over `[lo, hi)` with under- and overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    lo: f64,
    hi: f64,
    counts: Vec<f64>,
    pub underflow: f64,
    pub overflow: f64,
}

impl Histogram {
    pub fn new(n_bins: usize, lo: f64, hi: f64) -> Result<Self, ReportError> {
        if n_bins == 0 {
            return Err(ReportError::Input("histogram needs at least one bin".into()));
        }
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(ReportError::Input(format!("invalid range [{lo}, {hi})")));
        }
        Ok(Histogram { lo, hi, counts: vec![0.0; n_bins], underflow: 0.0, overflow: 0.0 })
    }

    pub fn from_parts(lo: f64, hi: f64, counts: Vec<f64>, underflow: f64, overflow: f64) -> Result<Self, ReportError> {
        let mut h = Histogram::new(counts.len(), lo, hi)?;
        h.counts = counts;
        h.underflow = underflow;
        h.overflow = overflow;
        Ok(h)
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.width();
        (self.lo + i as f64 * w, if i + 1 == self.counts.len() { self.hi } else { self.lo + (i + 1) as f64 * w })
    }

    pub fn fill(&mut self, value: f64) -> Result<(), ReportError> {
        self.fill_weighted(value, 1.0)
    }

    pub fn fill_weighted(&mut self, value: f64, weight: f64) -> Result<(), ReportError> {
        if !value.is_finite() {
            return Err(ReportError::Input(format!("cannot fill non-finite value {value}")));
        }
        if value < self.lo {
            self.underflow += weight;
        } else if value >= self.hi {
            self.overflow += weight;
        } else {
            let i = ((value - self.lo) / self.width()).floor() as usize;
            let last = self.counts.len() - 1;
            self.counts[i.min(last)] += weight;
        }
        Ok(())
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum::<f64>() + self.underflow + self.overflow
    }

    pub fn same_binning(&self, o: &Histogram) -> bool {
        self.lo == o.lo && self.hi == o.hi && self.counts.len() == o.counts.len()
    }

    /// Adds `o` bin by bin.
    pub fn merge(&mut self, o: &Histogram) -> Result<(), ReportError> {
        if !self.same_binning(o) {
            return Err(ReportError::Input("cannot merge histograms with different binning".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
        self.underflow += o.underflow;
        self.overflow += o.overflow;
        Ok(())
    }
}

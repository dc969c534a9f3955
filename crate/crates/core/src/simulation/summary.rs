use serde::{Deserialize, Serialize};

/// RMSE, bias and standard error of a sample of estimates around a true value.
/// All three use divisor `n`, so `rmse² = bias² + stderr²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rmse: f64,
    pub bias: f64,
    pub stderr: f64,
    pub mean: f64,
    pub n: usize,
}

impl Summary {
    pub fn from_sample(draws: &[f64], truth: f64) -> Self {
        let n = draws.len();
        let nf = n as f64;
        let mean = draws.iter().sum::<f64>() / nf;
        let bias = mean - truth;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / nf;
        let mse = draws.iter().map(|d| (d - truth).powi(2)).sum::<f64>() / nf;
        Self { rmse: mse.sqrt(), bias, stderr: var.sqrt(), mean, n }
    }
}

pub const BIN_WIDTH: f64 = 0.01;

/// Counts of ρ̂ over [0, 1] in bins of width `BIN_WIDTH`; bin `i` is `[i·w, (i+1)·w)`,
/// the last bin also holding 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_sample(draws: &[f64]) -> Self {
        let nbins = (1.0 / BIN_WIDTH).round() as usize;
        let mut counts = vec![0u64; nbins];
        for d in draws {
            let i = ((d / BIN_WIDTH) + 1e-9).floor().clamp(0.0, (nbins - 1) as f64) as usize;
            counts[i] += 1;
        }
        Self { bin_width: BIN_WIDTH, counts }
    }

    /// `(bin_lo, bin_hi, count)` rows.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| {
            let lo = i as f64 * self.bin_width;
            (lo, lo + self.bin_width, c)
        })
    }

    /// Share of the sample in the first and last `edge_bins` bins.
    pub fn edge_mass(&self, edge_bins: usize) -> f64 {
        let total: u64 = self.counts.iter().sum();
        let n = self.counts.len();
        let edge: u64 = self.counts[..edge_bins].iter().sum::<u64>() + self.counts[n - edge_bins..].iter().sum::<u64>();
        edge as f64 / total.max(1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_by_hand() {
        let s = Summary::from_sample(&[0.4, 0.5, 0.6, 0.7], 0.5);
        assert!((s.bias - 0.05).abs() < 1e-12);
        assert!((s.stderr - 0.0125f64.sqrt()).abs() < 1e-12);
        assert!((s.rmse.powi(2) - s.bias.powi(2) - s.stderr.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn bins_on_grid_points() {
        let h = Histogram::from_sample(&[0.0, 0.01, 0.3, 0.99, 1.0]);
        assert_eq!(h.counts.len(), 100);
        assert_eq!(h.counts[0], 1);
        assert_eq!(h.counts[1], 1);
        assert_eq!(h.counts[30], 1);
        assert_eq!(h.counts[99], 2);
        assert!((h.edge_mass(2) - 0.8).abs() < 1e-12);
    }
}

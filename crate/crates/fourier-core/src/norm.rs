use crate::freq::{japanese, l1};
use crate::grid::{ChannelField, SpectralField};
use crate::{FourierError, Result};
use std::f64::consts::PI;

/// Lattice cell measure: the z period times `Δη/2π = 1`. With the
/// normalisation of [`SpectralField`] this makes Parseval exact:
/// `∫∫|f|² = CELL_MEASURE · Σ|f̂|²`.
pub const CELL_MEASURE: f64 = 2.0 * PI;

/// `sqrt(cell · Σ |f̂|² ⟨k,η⟩^{2σ} e^{2λ|k,η|^s})`.
pub fn gevrey_norm(f: &SpectralField, lambda: f64, sigma: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(FourierError::Parameter(format!("s = {s} not in (0,1)")));
    }
    if lambda < 0.0 {
        return Err(FourierError::Parameter(format!("λ = {lambda} < 0")));
    }
    let sum: f64 = f
        .iter()
        .map(|(k, eta, c)| {
            let r = l1(k, eta);
            c.norm_sqr() * japanese(r).powf(2.0 * sigma) * (2.0 * lambda * r.powf(s)).exp()
        })
        .sum();
    Ok((CELL_MEASURE * sum).sqrt())
}

pub fn l2_norm_spectral(f: &SpectralField) -> f64 {
    (CELL_MEASURE * f.data.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
}

/// Rectangle rule over one period in z and in the periodic extension in y.
pub fn l2_norm_grid(f: &ChannelField) -> f64 {
    let g = f.grid;
    let sum: f64 = (0..g.my())
        .flat_map(|j| f.row(j).iter())
        .map(|v| v * v)
        .sum();
    (sum * (2.0 * PI / g.nz as f64) / g.my() as f64).sqrt()
}

//! Free streaming: without the Stokes feedback `ρ̃_k(t, y) = e^{−ikty}ρ̃_k(0, y)`,
//! so in the moving frame nothing changes.

use fourier_core::{SpectralField, Transformer};
use num_complex::Complex64;

/// Apply `e^{−ikty}` to z-mode profiles sampled at `ys`.
pub fn linear_evolution_modes(modes: &[Vec<Complex64>], ks: impl Fn(usize) -> i64, ys: &[f64], t: f64) -> Vec<Vec<Complex64>> {
    modes
        .iter()
        .enumerate()
        .map(|(ik, p)| {
            let kt = ks(ik) as f64 * t;
            p.iter().zip(ys).map(|(v, y)| v * Complex64::from_polar(1.0, -kt * y)).collect()
        })
        .collect()
}

/// Lab-frame density at time `t` from `ρ_in`, both as lattice coefficients.
pub fn linear_evolution(rho_in: &SpectralField, t: f64) -> SpectralField {
    let g = rho_in.grid;
    let tr = Transformer::new(g);
    let profiles = tr.inverse_modes(rho_in).expect("transformer built for this grid");
    let moved = linear_evolution_modes(&profiles, |ik| g.k_at(ik), &g.ys(), t);
    tr.forward_modes(&moved)
}

//! `U = ∇^⊥ψ = (−∂_yψ, ∂_xψ)` from per-mode stream profiles.

use crate::{Result, StokesError};
use fourier_core::fd::DerivOp;
use fourier_core::{ChannelField, Grid, Transformer};
use num_complex::Complex64;

/// Per-mode velocity profiles `(Ũ¹_k, Ũ²_k)` from `ψ̃_k`, indexed like the
/// z transform (`modes[ik][j]`).
pub fn velocity_modes(
    grid: Grid,
    psi: &[Vec<Complex64>],
) -> Result<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
    if psi.len() != grid.nz || psi.iter().any(|p| p.len() != grid.ny) {
        return Err(StokesError::Dimension { expected: grid.nz * grid.ny, got: psi.iter().map(Vec::len).sum() });
    }
    let d1 = DerivOp::new(grid.ny, grid.hy(), 1, 6);
    let mut u1 = Vec::with_capacity(grid.nz);
    let mut u2 = Vec::with_capacity(grid.nz);
    for (ik, p) in psi.iter().enumerate() {
        let ikc = Complex64::new(0.0, grid.k_at(ik) as f64);
        u1.push(d1.apply(p).into_iter().map(|v| -v).collect());
        u2.push(p.iter().map(|v| ikc * v).collect());
    }
    Ok((u1, u2))
}

pub fn velocity_from_stream(grid: Grid, psi: &[Vec<Complex64>]) -> Result<(ChannelField, ChannelField)> {
    let (u1, u2) = velocity_modes(grid, psi)?;
    let t = Transformer::new(grid);
    let map = |e: fourier_core::FourierError| StokesError::Fourier(e.to_string());
    Ok((t.z_inverse(&u1).map_err(map)?, t.z_inverse(&u2).map_err(map)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_stream_has_no_velocity() {
        let g = Grid::new(32, 33).unwrap_or_else(|_| Grid::unchecked(32, 33).unwrap());
        let mut psi = vec![vec![Complex64::new(0.0, 0.0); g.ny]; g.nz];
        psi[0] = vec![Complex64::new(2.5, 0.0); g.ny];
        let (u1, u2) = velocity_from_stream(g, &psi).unwrap();
        assert!(u1.max_abs() < 1e-10 && u2.max_abs() < 1e-14);
    }

    #[test]
    fn sine_mode_closed_form() {
        let g = Grid::unchecked(32, 129).unwrap();
        let gy = |y: f64| (3.0 * y).sin() * y;
        let dgy = |y: f64| 3.0 * (3.0 * y).cos() * y + (3.0 * y).sin();
        // ψ = sin(x) g(y) = (e^{ix} − e^{−ix})/(2i) g.
        let mut psi = vec![vec![Complex64::new(0.0, 0.0); g.ny]; g.nz];
        let half = Complex64::new(0.0, -0.5);
        for j in 0..g.ny {
            let v = gy(g.y(j));
            psi[Grid::index_of(1, g.nz).unwrap()][j] = half * v;
            psi[Grid::index_of(-1, g.nz).unwrap()][j] = -half * v;
        }
        let (u1, u2) = velocity_from_stream(g, &psi).unwrap();
        for j in 0..g.ny {
            for i in 0..g.nz {
                let (x, y) = (g.z(i), g.y(j));
                assert!((u1.at(i, j) + x.sin() * dgy(y)).abs() < 1e-9);
                assert!((u2.at(i, j) - x.cos() * gy(y)).abs() < 1e-12);
            }
        }
    }
}

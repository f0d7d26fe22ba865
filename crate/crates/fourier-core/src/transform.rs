use crate::grid::{ChannelField, Grid, SpectralField};
use crate::{FourierError, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// FFT plans for one grid. Each worker should own its own instance.
pub struct Transformer {
    grid: Grid,
    z_fwd: Arc<dyn Fft<f64>>,
    z_inv: Arc<dyn Fft<f64>>,
    y_fwd: Arc<dyn Fft<f64>>,
    y_inv: Arc<dyn Fft<f64>>,
}

impl Transformer {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            z_fwd: planner.plan_fft_forward(grid.nz),
            z_inv: planner.plan_fft_inverse(grid.nz),
            y_fwd: planner.plan_fft_forward(grid.my()),
            y_inv: planner.plan_fft_inverse(grid.my()),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn check(&self, grid: Grid) -> Result<()> {
        if grid != self.grid {
            return Err(FourierError::Dimension {
                expected: format!("{:?}", self.grid),
                got: format!("{grid:?}"),
            });
        }
        Ok(())
    }

    /// z-Fourier coefficients `f̃_k(y_j) = (1/Nz) Σ_i f(z_i,y_j) e^{-ikz_i}`,
    /// returned as `out[ik][j]` over all `Ny` rows.
    pub fn z_forward(&self, f: &ChannelField) -> Result<Vec<Vec<Complex64>>> {
        self.check(f.grid)?;
        let (nz, ny) = (self.grid.nz, self.grid.ny);
        let mut out = vec![vec![Complex64::new(0.0, 0.0); ny]; nz];
        let mut buf = vec![Complex64::new(0.0, 0.0); nz];
        let scale = 1.0 / nz as f64;
        for j in 0..ny {
            for (b, v) in buf.iter_mut().zip(f.row(j)) {
                *b = Complex64::new(*v, 0.0);
            }
            self.z_fwd.process(&mut buf);
            for (ik, b) in buf.iter().enumerate() {
                out[ik][j] = b * scale;
            }
        }
        Ok(out)
    }

    /// Inverse of [`Transformer::z_forward`]; the imaginary part is dropped.
    pub fn z_inverse(&self, modes: &[Vec<Complex64>]) -> Result<ChannelField> {
        let (nz, ny) = (self.grid.nz, self.grid.ny);
        if modes.len() != nz || modes.iter().any(|m| m.len() != ny) {
            return Err(FourierError::Dimension {
                expected: format!("{nz} modes of length {ny}"),
                got: format!("{} modes", modes.len()),
            });
        }
        let mut out = ChannelField::zeros(self.grid);
        let mut buf = vec![Complex64::new(0.0, 0.0); nz];
        for j in 0..ny {
            for (ik, b) in buf.iter_mut().enumerate() {
                *b = modes[ik][j];
            }
            self.z_inv.process(&mut buf);
            for (i, b) in buf.iter().enumerate() {
                out.data[j * nz + i] = b.re;
            }
        }
        Ok(out)
    }

    /// y-Fourier coefficients of one profile on the periodic extension,
    /// `ĝ(η_m) = (1/M) Σ_{j<M} g(y_j) e^{-iη_m y_j}` with `M = Ny-1`.
    pub fn y_forward(&self, profile: &[Complex64]) -> Vec<Complex64> {
        let my = self.grid.my();
        let mut buf: Vec<Complex64> = profile[..my].to_vec();
        self.y_fwd.process(&mut buf);
        let scale = 1.0 / my as f64;
        buf.iter_mut().for_each(|b| *b *= scale);
        buf
    }

    /// Inverse of [`Transformer::y_forward`], returning all `Ny` samples
    /// (the wall sample `y = 1` repeats `y = 0`).
    pub fn y_inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let my = self.grid.my();
        let mut buf = coeffs.to_vec();
        self.y_inv.process(&mut buf);
        buf.push(buf[0]);
        debug_assert_eq!(buf.len(), my + 1);
        buf
    }

    pub fn forward(&self, f: &ChannelField) -> Result<SpectralField> {
        let modes = self.z_forward(f)?;
        Ok(self.forward_modes(&modes))
    }

    /// Spectral field from z-mode profiles `modes[ik][j]`.
    pub fn forward_modes(&self, modes: &[Vec<Complex64>]) -> SpectralField {
        let mut out = SpectralField::zeros(self.grid);
        let my = self.grid.my();
        for (ik, prof) in modes.iter().enumerate() {
            let c = self.y_forward(prof);
            out.data[ik * my..(ik + 1) * my].copy_from_slice(&c);
        }
        out
    }

    /// z-mode profiles from a spectral field.
    pub fn inverse_modes(&self, f: &SpectralField) -> Result<Vec<Vec<Complex64>>> {
        self.check(f.grid)?;
        let my = self.grid.my();
        Ok((0..self.grid.nz)
            .map(|ik| self.y_inverse(&f.data[ik * my..(ik + 1) * my]))
            .collect())
    }

    pub fn inverse(&self, f: &SpectralField) -> Result<ChannelField> {
        let modes = self.inverse_modes(f)?;
        self.z_inverse(&modes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_has_zero_coefficients() {
        let g = Grid::new(32, 32).unwrap();
        let t = Transformer::new(g);
        let s = t.forward(&ChannelField::zeros(g)).unwrap();
        assert!(s.data.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn cosine_in_x_only_fills_unit_columns() {
        let g = Grid::new(32, 64).unwrap();
        let t = Transformer::new(g);
        let bump = |y: f64| {
            if y > 0.2 && y < 0.8 {
                (-1.0 / ((y - 0.2) * (0.8 - y) / 0.09)).exp()
            } else {
                0.0
            }
        };
        let f = ChannelField::from_fn(g, |z, y| z.cos() * bump(y));
        let s = t.forward(&f).unwrap();
        for (k, _, c) in s.iter() {
            if k.abs() != 1 {
                assert!(c.norm() < 1e-15, "k={k} c={c}");
            }
        }
        assert!(s.coeff(1, 0).norm() > 1e-3);
    }

    #[test]
    fn grid_mismatch_is_dimension_error() {
        let t = Transformer::new(Grid::new(32, 32).unwrap());
        let f = ChannelField::zeros(Grid::new(64, 32).unwrap());
        assert!(matches!(t.forward(&f), Err(FourierError::Dimension { .. })));
    }

    #[test]
    fn y_transform_of_plane_wave() {
        let g = Grid::unchecked(32, 65).unwrap();
        let t = Transformer::new(g);
        let prof: Vec<Complex64> = (0..g.ny)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * 3.0 * g.y(j)))
            .collect();
        let c = t.y_forward(&prof);
        let j3 = Grid::index_of(3, g.my()).unwrap();
        assert!((c[j3] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!((g.eta_at(j3) - 6.0 * PI).abs() < 1e-12);
    }
}

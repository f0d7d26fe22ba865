use crate::{FourierError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Tensor grid on 𝕋×[0,1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub nz: usize,
    pub ny: usize,
}

impl Grid {
    /// Simulation grid: both sizes powers of two, at least 32.
    pub fn new(nz: usize, ny: usize) -> Result<Self> {
        for (name, n) in [("Nz", nz), ("Ny", ny)] {
            if n < 32 || !n.is_power_of_two() {
                return Err(FourierError::Parameter(format!(
                    "{name} = {n} must be a power of two >= 32"
                )));
            }
        }
        Ok(Self { nz, ny })
    }

    /// Grid without the power-of-two restriction, for small tests and
    /// refinement studies.
    pub fn unchecked(nz: usize, ny: usize) -> Result<Self> {
        if nz < 2 || nz % 2 != 0 || ny < 4 {
            return Err(FourierError::Parameter(format!(
                "grid {nz}x{ny}: Nz must be even and Ny >= 4"
            )));
        }
        Ok(Self { nz, ny })
    }

    /// Check that the transition layer of width κ/2 spans at least four cells.
    pub fn check_resolves(&self, kappa: f64) -> Result<()> {
        let cells = (self.ny - 1) as f64 * kappa / 2.0;
        if cells < 4.0 {
            return Err(FourierError::Parameter(format!(
                "Ny = {} puts only {cells:.1} cells across the cutoff layer κ/2 = {}",
                self.ny,
                kappa / 2.0
            )));
        }
        Ok(())
    }

    pub fn hy(&self) -> f64 {
        1.0 / (self.ny - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    pub fn z(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.nz as f64
    }

    /// Number of samples in one period of the y extension.
    pub fn my(&self) -> usize {
        self.ny - 1
    }

    /// Wavenumber stored at FFT index `i` of a length-`n` transform.
    pub fn wavenumber(i: usize, n: usize) -> i64 {
        if i < n.div_ceil(2) {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// FFT index of wavenumber `k` for a length-`n` transform.
    pub fn index_of(k: i64, n: usize) -> Option<usize> {
        let half = n.div_ceil(2) as i64;
        if k >= 0 && k < half {
            Some(k as usize)
        } else if k < 0 && k >= half - n as i64 {
            Some((k + n as i64) as usize)
        } else {
            None
        }
    }

    pub fn k_at(&self, i: usize) -> i64 {
        Self::wavenumber(i, self.nz)
    }

    pub fn eta_at(&self, j: usize) -> f64 {
        2.0 * PI * Self::wavenumber(j, self.my()) as f64
    }

    /// Largest |k| kept by the 2/3 rule.
    pub fn k_dealias(&self) -> usize {
        self.nz / 3
    }
}

/// Real samples on the grid, stored row by row in y (`data[j * nz + i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelField {
    pub grid: Grid,
    pub data: Vec<f64>,
}

impl ChannelField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![0.0; grid.nz * grid.ny],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(grid);
        for j in 0..grid.ny {
            let y = grid.y(j);
            for i in 0..grid.nz {
                out.data[j * grid.nz + i] = f(grid.z(i), y);
            }
        }
        out
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.grid.nz + i]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[j * self.grid.nz + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.grid.nz..(j + 1) * self.grid.nz]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Normalised double-Fourier coefficients
/// `f̂(k, η_m) = (1/2π) ∫∫ f e^{-i(kz + η_m y)} dz dy` on the lattice
/// `k ∈ FFT order of Nz`, `η_m = 2πm`, `m ∈ FFT order of Ny-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: Grid,
    /// `data[ik * my + jm]`.
    pub data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![Complex64::new(0.0, 0.0); grid.nz * grid.my()],
        }
    }

    pub fn my(&self) -> usize {
        self.grid.my()
    }

    pub fn get(&self, ik: usize, jm: usize) -> Complex64 {
        self.data[ik * self.my() + jm]
    }

    pub fn get_mut(&mut self, ik: usize, jm: usize) -> &mut Complex64 {
        let my = self.my();
        &mut self.data[ik * my + jm]
    }

    /// Coefficient at wavenumbers `(k, m)`, zero outside the lattice.
    pub fn coeff(&self, k: i64, m: i64) -> Complex64 {
        match (
            Grid::index_of(k, self.grid.nz),
            Grid::index_of(m, self.my()),
        ) {
            (Some(i), Some(j)) => self.get(i, j),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Iterate over `(k, η, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64, Complex64)> + '_ {
        let my = self.my();
        self.data.iter().enumerate().map(move |(idx, c)| {
            let (ik, jm) = (idx / my, idx % my);
            (self.grid.k_at(ik), self.grid.eta_at(jm), *c)
        })
    }

    pub fn map_indexed(&self, f: impl Fn(i64, f64, Complex64) -> Complex64) -> Self {
        let my = self.my();
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(idx, c)| f(self.grid.k_at(idx / my), self.grid.eta_at(idx % my), *c))
            .collect();
        Self {
            grid: self.grid,
            data,
        }
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(FourierError::Dimension {
                expected: format!("{:?}", self.grid),
                got: format!("{:?}", other.grid),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_index_roundtrip() {
        for n in [5usize, 8, 63, 64] {
            for i in 0..n {
                let k = Grid::wavenumber(i, n);
                assert_eq!(Grid::index_of(k, n), Some(i));
            }
        }
        assert_eq!(Grid::index_of(4, 8), None);
        assert_eq!(Grid::index_of(-4, 8), Some(4));
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(64, 64).is_ok());
        assert!(Grid::new(48, 64).is_err());
        assert!(Grid::new(16, 64).is_err());
        let g = Grid::new(128, 128).unwrap();
        assert!(g.check_resolves(0.1).is_ok());
        assert!(Grid::new(32, 32).unwrap().check_resolves(0.1).is_err());
    }
}

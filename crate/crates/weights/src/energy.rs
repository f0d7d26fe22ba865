use crate::multiplier::{log_add, WeightTable};
use crate::{Result, WeightError};
use fourier_core::freq::l1;
use fourier_core::{SpectralField, CELL_MEASURE};
use serde::{Deserialize, Serialize};

/// `ℰ = ½‖𝒜θ‖²` and the three CK terms at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyCk {
    pub energy: f64,
    /// `log ℰ`, finite even when `ℰ` overflows.
    pub log_energy: f64,
    pub ck_lambda: f64,
    pub ck_theta: f64,
    pub ck_lambda_weight: f64,
}

impl EnergyCk {
    pub fn ck_total(&self) -> f64 {
        self.ck_lambda + self.ck_theta + self.ck_lambda_weight
    }
}

/// Evaluate `ℰ(t)`, `CK_λ`, `CK_Θ` and `CK_Λ` for `θ̂` on the table's lattice.
pub fn energy_and_ck(theta_hat: &SpectralField, t: f64, table: &WeightTable) -> Result<EnergyCk> {
    if theta_hat.grid != table.grid {
        return Err(WeightError::Dimension(format!("{:?} vs {:?}", theta_hat.grid, table.grid)));
    }
    let p = &table.params;
    let minus_ldot = -p.lambda_dot(t);
    let ln_cell = CELL_MEASURE.ln();
    let (mut le, mut ll, mut lt, mut lw) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let my = theta_hat.my();
    for ik in 0..theta_hat.grid.nz {
        let k = theta_hat.grid.k_at(ik);
        for jm in 0..my {
            let c2 = theta_hat.get(ik, jm).norm_sqr();
            if c2 == 0.0 {
                continue;
            }
            let lc = c2.ln();
            let m = table.at(t, ik, jm);
            let (rt, rl) = table.rates(t, ik, jm);
            le = log_add(le, 2.0 * m.a + lc);
            let r = l1(k, table.grid.eta_at(jm));
            if r > 0.0 && minus_ldot > 0.0 {
                ll = log_add(ll, r.cbrt().ln() + 2.0 * m.a + lc);
            }
            if rt > 0.0 {
                lt = log_add(lt, rt.ln() + m.a_theta + m.a + lc);
            }
            if rl > 0.0 {
                lw = log_add(lw, rl.ln() + m.a_lambda + m.a + lc);
            }
        }
    }
    let log_energy = le + ln_cell - 2f64.ln();
    Ok(EnergyCk {
        energy: log_energy.exp(),
        log_energy,
        ck_lambda: minus_ldot * (ll + ln_cell).exp(),
        ck_theta: (lt + ln_cell).exp(),
        ck_lambda_weight: (lw + ln_cell).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::WeightParams;
    use fourier_core::Grid;
    use num_complex::Complex64;

    #[test]
    fn zero_field() {
        let g = Grid::new(32, 32).unwrap();
        let table = WeightTable::build(WeightParams::desk_scale(), g);
        let e = energy_and_ck(&SpectralField::zeros(g), 1.0, &table).unwrap();
        assert_eq!((e.energy, e.ck_lambda, e.ck_theta, e.ck_lambda_weight), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn single_mode_at_zero_eta() {
        let g = Grid::new(32, 32).unwrap();
        let p = WeightParams::desk_scale();
        let table = WeightTable::build(p, g);
        let mut f = SpectralField::zeros(g);
        let ik = Grid::index_of(1, g.nz).unwrap();
        *f.get_mut(ik, 0) = Complex64::new(0.3, -0.4);
        let t = 2.0;
        let e = energy_and_ck(&f, t, &table).unwrap();
        assert_eq!(e.ck_theta, 0.0);
        assert_eq!(e.ck_lambda_weight, 0.0);
        let a = table.at(t, ik, 0).a.exp();
        let expected = -p.lambda_dot(t) * a * a * 0.25 * CELL_MEASURE;
        assert!((e.ck_lambda - expected).abs() < 1e-12 * expected);
        assert!((e.energy - 0.5 * a * a * 0.25 * CELL_MEASURE).abs() < 1e-12 * e.energy);
    }
}

//! Green's function of the clamped per-mode problem.
//!
//! `ψ(y) = ∫ i 𝔎(y,𝐲) ρ(𝐲) d𝐲` with `𝔎 = K(k,|y−𝐲|) + K_bd(k,y,𝐲)`.
//! The free part is the whole-line kernel `k e^{−|k||w|}(1+|k||w|)/(4|k|³)`.
//! The boundary part is a combination of the homogeneous solutions
//! `e^{−|k|y}, y e^{−|k|y}, e^{−|k|(1−y)}, (1−y)e^{−|k|(1−y)}` chosen to
//! cancel the wall traces of the free part. Only decaying exponentials are
//! ever evaluated, so nothing overflows for any `k`.
//!
//! An alternative hyperbolic closed form for the kernel pair is kept in
//! [`candidate`] for comparison; it does not reproduce the oracle.

use crate::{Result, StokesError};
use num_complex::Complex64;

/// `D_k = 4k²(4k² − 2cosh 2k + 2)`, negative for every `k ≠ 0`.
pub fn d_k(k: i64) -> f64 {
    let k = k as f64;
    4.0 * k * k * (4.0 * k * k - 2.0 * (2.0 * k).cosh() + 2.0)
}

#[derive(Debug, Clone)]
pub struct GreenKernel {
    k: i64,
    kk: f64,
    pref: f64,
    /// Inverse of the 4×4 trace matrix of the homogeneous basis.
    inv: [[f64; 4]; 4],
}

fn invert4(a: [[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut m = a;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for c in 0..4 {
        let p = (c..4).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        inv.swap(c, p);
        let d = m[c][c];
        for j in 0..4 {
            m[c][j] /= d;
            inv[c][j] /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = m[r][c];
                for j in 0..4 {
                    m[r][j] -= f * m[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
    }
    Some(inv)
}

impl GreenKernel {
    pub fn new(k: i64) -> Result<Self> {
        if k == 0 {
            return Err(StokesError::ZeroMode);
        }
        let kk = k.unsigned_abs() as f64;
        let e = (-kk).exp();
        // Rows: value and slope at y = 0, value and slope at y = 1.
        let a = [
            [1.0, 0.0, e, e],
            [-kk, 1.0, kk * e, (kk - 1.0) * e],
            [e, e, 1.0, 0.0],
            [-kk * e, (1.0 - kk) * e, kk, -1.0],
        ];
        let inv = invert4(a).ok_or(StokesError::Singular(0))?;
        Ok(Self {
            k,
            kk,
            pref: k as f64 / (4.0 * kk.powi(3)),
            inv,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Translation-invariant part `K(k,w)`.
    pub fn free(&self, w: f64) -> f64 {
        let a = self.kk * w.abs();
        self.pref * (-a).exp() * (1.0 + a)
    }

    /// `∂_w K(k,w)` for `w ≥ 0`.
    pub fn free_dw(&self, w: f64) -> f64 {
        -self.pref * self.kk * self.kk * w * (-self.kk * w).exp()
    }

    fn basis(&self, y: f64) -> [f64; 4] {
        let (a, b) = ((-self.kk * y).exp(), (-self.kk * (1.0 - y)).exp());
        [a, y * a, b, (1.0 - y) * b]
    }

    fn basis_dy(&self, y: f64) -> [f64; 4] {
        let kk = self.kk;
        let (a, b) = ((-kk * y).exp(), (-kk * (1.0 - y)).exp());
        [-kk * a, (1.0 - kk * y) * a, kk * b, (-1.0 + kk * (1.0 - y)) * b]
    }

    /// Coefficients of the homogeneous correction for wall traces `tr`.
    fn correction<T>(&self, tr: [T; 4]) -> [T; 4]
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        let mut c = [T::default(); 4];
        for (i, ci) in c.iter_mut().enumerate() {
            for (j, t) in tr.iter().enumerate() {
                *ci = *ci + *t * (-self.inv[i][j]);
            }
        }
        c
    }

    fn point_traces(&self, src: f64) -> [f64; 4] {
        [
            self.free(src),
            -self.free_dw(src),
            self.free(1.0 - src),
            self.free_dw(1.0 - src),
        ]
    }

    /// Boundary part `K_bd(k,y,𝐲)`.
    pub fn boundary(&self, y: f64, src: f64) -> f64 {
        let c = self.correction(self.point_traces(src));
        self.basis(y).iter().zip(c).map(|(b, c)| b * c).sum()
    }

    /// Full kernel `𝔎(y,𝐲)`.
    pub fn total(&self, y: f64, src: f64) -> f64 {
        self.free(y - src) + self.boundary(y, src)
    }

    /// `∂_y 𝔎(y,𝐲)`.
    pub fn total_dy(&self, y: f64, src: f64) -> f64 {
        let w = y - src;
        let free = self.free_dw(w.abs()) * w.signum();
        let c = self.correction(self.point_traces(src));
        free + self.basis_dy(y).iter().zip(c).map(|(b, c)| b * c).sum::<f64>()
    }

    /// Trapezoid-rule application on the uniform grid `y_j = j/(n−1)`.
    ///
    /// The free part is summed with two exponential recurrences (left and
    /// right), so the cost is linear in `n`. The kernel has a jump in its
    /// third derivative on the diagonal, which limits the rule to fourth order.
    pub fn apply(&self, rho: &[Complex64]) -> Vec<Complex64> {
        let n = rho.len();
        let zero = Complex64::new(0.0, 0.0);
        if n < 2 {
            return vec![zero; n];
        }
        let h = 1.0 / (n - 1) as f64;
        let wts = |j: usize| if j == 0 || j == n - 1 { 0.5 * h } else { h };
        let q = (-self.kk * h).exp();
        let kk = self.kk;
        let mut out = vec![zero; n];
        let (mut a0, mut a1) = (zero, zero);
        for j in 0..n {
            if j > 0 {
                a1 = (a1 + a0 * h) * q;
                a0 *= q;
            }
            a0 += rho[j] * wts(j);
            out[j] = a0 + a1 * kk;
        }
        let (mut b0, mut b1) = (zero, zero);
        for j in (0..n).rev() {
            if j + 1 < n {
                b1 = (b1 + b0 * h) * q;
                b0 *= q;
            }
            b0 += rho[j] * wts(j);
            out[j] += b0 + b1 * kk - rho[j] * wts(j);
        }
        let i = Complex64::new(0.0, 1.0);
        for v in out.iter_mut() {
            *v *= i * self.pref;
        }
        // Wall traces of the free part, by direct quadrature.
        let mut tr = [zero; 4];
        for (j, r) in rho.iter().enumerate() {
            if r.norm_sqr() == 0.0 {
                continue;
            }
            let y = j as f64 * h;
            let p = self.point_traces(y);
            for (t, v) in tr.iter_mut().zip(p) {
                *t += i * *r * (v * wts(j));
            }
        }
        let c = self.correction(tr);
        for (j, v) in out.iter_mut().enumerate() {
            let b = self.basis(j as f64 * h);
            for (bi, ci) in b.iter().zip(c) {
                *v += ci * *bi;
            }
        }
        out
    }
}

/// `ψ = ∫ i𝔎 ρ` on the uniform grid. Zeros for `k = 0`.
pub fn solve_mode_green(k: i64, rho: &[Complex64]) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Ok(vec![Complex64::new(0.0, 0.0); rho.len()]);
    }
    Ok(GreenKernel::new(k)?.apply(rho))
}

/// Hyperbolic closed forms for `K(k,w)` and `K^g_bd`, plus the
/// variation-of-parameters integrand. Naive evaluation; use only for
/// moderate `k` (overflow near `k ≈ 350`).
pub mod candidate {
    use super::d_k;

    /// Translation-invariant kernel `K(k,w)`.
    pub fn k_free(k: i64, w: f64) -> f64 {
        let k = k as f64;
        let (c, s) = (f64::cosh, f64::sinh);
        (4.0 * k.powi(3) * w * c(k * w) - 4.0 * k * w * c(2.0 * k - k * w) - 2.0 * s(2.0 * k - k * w)
            + 2.0 * k * w * c(k * w)
            - 2.0 * s(k * w)
            - 4.0 * k * k * s(k * w))
            / d_k(k as i64)
    }

    /// Boundary kernel `K^g_bd(k,y,𝐲)`.
    pub fn k_bd(k: i64, y: f64, src: f64) -> f64 {
        let kf = k as f64;
        let (c, s) = (f64::cosh, f64::sinh);
        let (sm, df) = (y + src, y - src);
        let v = (8.0 * kf.powi(3) * c(kf * df)
            + 2.0 * kf * kf * (2.0 * s(kf * sm) + 2.0 * s(2.0 * kf - kf * sm)))
            * y
            * src
            - 4.0 * kf.powi(3) * sm * c(kf * df)
            - 4.0 * kf * kf * (sm * s(kf * sm) + df * s(-kf * df))
            - 2.0 * kf * sm * c(kf * sm)
            + 2.0 * kf * sm * c(2.0 * kf - kf * sm)
            + 4.0 * kf * kf * s(kf * sm)
            + 4.0 * kf * (c(kf * sm) - c(-kf * df))
            + 2.0 * (s(kf * sm) + s(2.0 * kf - kf * sm));
        v / d_k(k)
    }

    /// Inhomogeneous integrand `R_inh(y,𝐲)/(4k²)` for `𝐲 < y`.
    pub fn inhomogeneous(k: i64, y: f64, src: f64) -> f64 {
        let k = k as f64;
        let a = k * (src - y);
        (2.0 * a.sinh() - 2.0 * k * src * a.cosh() + 2.0 * k * y * a.cosh()) / (4.0 * k * k)
    }
}

//! Real banded LU with partial pivoting (the `gbtrf`/`gbtrs` pattern).

use std::ops::{Mul, Sub};

#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row `r` holds absolute columns `r - kl ..= r + kl + ku`.
    rows: Vec<Vec<f64>>,
    mult: Vec<Vec<f64>>,
    piv: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularMatrix {
    pub column: usize,
}

impl BandLu {
    /// Factor the matrix given by `entry(row, col)`, which must vanish
    /// outside `row - kl ..= row + ku`.
    pub fn factor(
        n: usize,
        kl: usize,
        ku: usize,
        entry: impl Fn(usize, usize) -> f64,
    ) -> Result<Self, SingularMatrix> {
        let w = 2 * kl + ku + 1;
        let mut rows = vec![vec![0.0; w]; n];
        for (r, row) in rows.iter_mut().enumerate() {
            let lo = r.saturating_sub(kl);
            let hi = (r + ku).min(n - 1);
            for c in lo..=hi {
                row[c + kl - r] = entry(r, c);
            }
        }
        let at = |r: usize, c: usize| c + kl - r;
        let mut mult = vec![vec![0.0; kl]; n];
        let mut piv = vec![0; n];
        let scale = rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        for c in 0..n {
            let last = (c + kl).min(n - 1);
            let mut p = c;
            let mut best = rows[c][at(c, c)].abs();
            for r in c + 1..=last {
                let v = rows[r][at(r, c)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= 1e-300 + scale * f64::EPSILON * 1e-6 {
                return Err(SingularMatrix { column: c });
            }
            piv[c] = p;
            let cmax = (c + kl + ku).min(n - 1);
            if p != c {
                for col in c..=cmax {
                    let (a, b) = (rows[c][at(c, col)], rows[p][at(p, col)]);
                    rows[c][at(c, col)] = b;
                    rows[p][at(p, col)] = a;
                }
            }
            let d = rows[c][at(c, c)];
            for r in c + 1..=last {
                let f = rows[r][at(r, c)] / d;
                mult[c][r - c - 1] = f;
                if f != 0.0 {
                    rows[r][at(r, c)] = 0.0;
                    for col in c + 1..=cmax {
                        let u = rows[c][at(c, col)];
                        rows[r][at(r, col)] -= f * u;
                    }
                }
            }
        }
        Ok(Self {
            n,
            kl,
            ku,
            rows,
            mult,
            piv,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve<T>(&self, rhs: &[T]) -> Vec<T>
    where
        T: Copy + Sub<Output = T> + Mul<f64, Output = T>,
    {
        assert_eq!(rhs.len(), self.n);
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut x = rhs.to_vec();
        for c in 0..n {
            let p = self.piv[c];
            if p != c {
                x.swap(c, p);
            }
            let xc = x[c];
            for r in c + 1..=(c + kl).min(n - 1) {
                let f = self.mult[c][r - c - 1];
                if f != 0.0 {
                    x[r] = x[r] - xc * f;
                }
            }
        }
        for r in (0..n).rev() {
            let row = &self.rows[r];
            let mut acc = x[r];
            for col in r + 1..=(r + kl + ku).min(n - 1) {
                let u = row[col + kl - r];
                if u != 0.0 {
                    acc = acc - x[col] * u;
                }
            }
            x[r] = acc * (1.0 / row[kl]);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_with_pivoting() {
        let n = 7;
        // Small diagonal forces row swaps.
        let a = |r: usize, c: usize| -> f64 {
            if r == c {
                1e-3 * (r + 1) as f64
            } else if c + 1 == r {
                2.0
            } else if r + 1 == c {
                -1.0 + 0.1 * r as f64
            } else {
                0.0
            }
        };
        let lu = BandLu::factor(n, 1, 1, a).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let b: Vec<f64> = (0..n)
            .map(|r| (0..n).map(|c| a(r, c) * x[c]).sum())
            .collect();
        let y = lu.solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_detected() {
        let r = BandLu::factor(3, 1, 1, |r, c| if r == c && r == 1 { 0.0 } else if r == c { 1.0 } else { 0.0 });
        assert!(r.is_err());
    }
}

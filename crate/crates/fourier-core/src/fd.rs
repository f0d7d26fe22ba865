//! Finite-difference stencils on the uniform y grid.

/// Fornberg weights for derivatives `0..=m` at `x0` from nodes `xs`.
/// Returns `w[d][j]`.
pub fn fornberg(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// One row of a derivative operator: `f^{(d)}(y_i) ≈ Σ w_j f(y_{start+j})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub start: usize,
    pub weights: Vec<f64>,
}

/// Stencil of accuracy `order` for derivative `deriv` at node `i` of a
/// uniform grid with `n` nodes and spacing `h`. Centred where it fits,
/// shifted one-sided near the ends.
pub fn stencil(i: usize, n: usize, h: f64, deriv: usize, order: usize) -> Stencil {
    let centred = order + deriv - usize::from(deriv % 2 == 0);
    let half = centred / 2;
    let (start, width) = if i >= half && i + half < n {
        (i - half, centred)
    } else {
        let w = (order + deriv).min(n);
        let start = if i < half { 0 } else { n - w };
        (start, w)
    };
    let xs: Vec<f64> = (0..width).map(|j| (start + j) as f64 - i as f64).collect();
    let w = fornberg(0.0, &xs, deriv);
    let scale = h.powi(deriv as i32);
    Stencil {
        start,
        weights: w[deriv].iter().map(|v| v / scale).collect(),
    }
}

/// Precomputed derivative operator on a uniform grid.
#[derive(Debug, Clone)]
pub struct DerivOp {
    pub n: usize,
    rows: Vec<Stencil>,
}

impl DerivOp {
    pub fn new(n: usize, h: f64, deriv: usize, order: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| stencil(i, n, h, deriv, order)).collect(),
        }
    }

    pub fn row(&self, i: usize) -> &Stencil {
        &self.rows[i]
    }

    pub fn apply<T>(&self, f: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        assert_eq!(f.len(), self.n);
        self.rows
            .iter()
            .map(|s| {
                s.weights
                    .iter()
                    .enumerate()
                    .fold(T::default(), |acc, (j, w)| acc + f[s.start + j] * *w)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_second_derivative() {
        let w = fornberg(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[2][0] - 1.0).abs() < 1e-14);
        assert!((w[2][1] + 2.0).abs() < 1e-14);
        assert!((w[1][2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn exact_on_polynomials() {
        let n = 20;
        let h = 0.1;
        for (deriv, order) in [(1, 6), (2, 6), (4, 6)] {
            let op = DerivOp::new(n, h, deriv, order);
            // Degree order+deriv-1 is reproduced exactly by every stencil.
            let p = order + deriv - 1;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(p as i32)).collect();
            let d = op.apply(&f);
            for (i, di) in d.iter().enumerate() {
                let x = i as f64 * h;
                let mut exact = 1.0;
                for q in 0..deriv {
                    exact *= (p - q) as f64;
                }
                exact *= x.powi((p - deriv) as i32);
                assert!((di - exact).abs() < 1e-6 * (1.0 + exact.abs()), "d{deriv} at {i}");
            }
        }
    }
}

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Interval;
use crate::error::{Error, Result};

pub type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary condition at one end of the `q` interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    /// `φ = 0` at a finite end.
    Dirichlet,
    /// Infinite end, cut where `V` first exceeds `level`, then Dirichlet.
    Decay { level: f64 },
}

/// Sturm-Liouville problem `-φ'' + V φ = E φ` on an interval.
#[derive(Clone)]
pub struct EigenProblem {
    pub potential: Potential,
    pub q_domain: Interval,
    pub boundary: (Boundary, Boundary),
    /// Cells of the coarsest grid; the finer grids use 2N and 4N.
    pub grid_size: usize,
    /// Inverse-square walls at finite ends; their exponents enter the
    /// extrapolation.
    pub singular_endpoints: bool,
    /// Relative spread of the extrapolated value accepted before
    /// [`Error::ConvergenceFailure`].
    pub tolerance: f64,
}

impl std::fmt::Debug for EigenProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EigenProblem")
            .field("q_domain", &self.q_domain)
            .field("boundary", &self.boundary)
            .field("grid_size", &self.grid_size)
            .field("singular_endpoints", &self.singular_endpoints)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub grid_sizes: Vec<usize>,
    pub extrapolated: bool,
    pub error_estimates: Vec<f64>,
    /// Error orders removed by the extrapolation.
    pub orders: Vec<f64>,
}

impl EigenProblem {
    pub fn new(potential: Potential, q_domain: Interval, grid_size: usize) -> Self {
        let end = |x: f64| {
            if x.is_finite() {
                Boundary::Dirichlet
            } else {
                Boundary::Decay { level: 400.0 }
            }
        };
        EigenProblem {
            potential,
            boundary: (end(q_domain.lo), end(q_domain.hi)),
            q_domain,
            grid_size,
            singular_endpoints: false,
            tolerance: 1e-3,
        }
    }

    fn v(&self, q: f64) -> f64 {
        (self.potential)(q)
    }

    // finite interval actually discretized
    fn working_interval(&self) -> Result<Interval> {
        let Interval { lo, hi } = self.q_domain;
        let centre = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, true) => hi - 1.0,
            (false, false) => 0.0,
        };
        let cut = |end: f64, b: Boundary, dir: f64| -> Result<f64> {
            match b {
                Boundary::Dirichlet if end.is_finite() => Ok(end),
                Boundary::Dirichlet => Err(Error::InvalidParameter("Dirichlet end must be finite".into())),
                Boundary::Decay { level } => {
                    let mut step = 1.0;
                    let mut x = centre;
                    for _ in 0..200 {
                        x = centre + dir * step;
                        if end.is_finite() && dir * (x - end) >= 0.0 {
                            return Ok(end);
                        }
                        if self.v(x) >= level {
                            return Ok(x);
                        }
                        step *= 1.25;
                    }
                    Err(Error::ConvergenceFailure(format!("potential stays below {level} out to {x}")))
                }
            }
        };
        Ok(Interval::new(cut(lo, self.boundary.0, -1.0)?, cut(hi, self.boundary.1, 1.0)?))
    }

    /// Exponents `s` of `φ ~ x^s` at the two ends, from `C = lim x² V`.
    fn wall_exponents(&self, iv: Interval) -> Vec<f64> {
        let w = iv.width();
        let mut out = Vec::new();
        let ends = [(iv.lo, 1.0, self.boundary.0), (iv.hi, -1.0, self.boundary.1)];
        for (end, dir, b) in ends {
            if b != Boundary::Dirichlet {
                continue;
            }
            // x²V = C + O(x²), sampled where the map to q is still well conditioned
            let x = 1e-3 * w;
            let c1 = x * x * self.v(end + dir * x);
            let c2 = 4.0 * x * x * self.v(end + 2.0 * dir * x);
            let c = (4.0 * c1 - c2) / 3.0;
            if c.is_finite() && c.abs() > 1e-6 && c > -0.25 {
                out.push(0.5 + (0.25 + c).sqrt());
            }
        }
        out
    }

    fn matrix(&self, iv: Interval, n: usize) -> Result<(Vec<f64>, f64)> {
        let h = iv.width() / n as f64;
        let inv = 1.0 / (h * h);
        let diag: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|j| {
                let q = iv.lo + (j as f64 + 0.5) * h;
                // ghost value -φ_1 puts the Dirichlet zero on the cell face
                let edge = if j == 0 || j + 1 == n { inv } else { 0.0 };
                2.0 * inv + edge + self.v(q)
            })
            .collect();
        if let Some(j) = diag.iter().position(|d| !d.is_finite()) {
            return Err(Error::DomainError(iv.lo + (j as f64 + 0.5) * h));
        }
        Ok((diag, -inv))
    }
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// constant off-diagonal `off`.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut d = 1.0;
    for (j, &a) in diag.iter().enumerate() {
        d = if j == 0 { a - x } else { a - x - off2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + off.abs());
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn kth_eigenvalue(diag: &[f64], off: f64, k: usize, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn lowest(diag: &[f64], off: f64, count: usize) -> Vec<f64> {
    let lo = diag.iter().fold(f64::INFINITY, |m, &a| m.min(a - 2.0 * off.abs()));
    let hi = diag.iter().fold(f64::NEG_INFINITY, |m, &a| m.max(a + 2.0 * off.abs()));
    (0..count).into_par_iter().map(|k| kth_eigenvalue(diag, off, k, lo, hi)).collect()
}

/// Solve `values[g] = E + Σ_j A_j h_g^{p_j}` for `E` with `h_g = 2^{-g}`.
fn eliminate(values: &[f64], orders: &[f64]) -> f64 {
    let m = orders.len() + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for (g, row) in a.iter_mut().enumerate() {
        let h = 0.5f64.powi(g as i32);
        row[0] = 1.0;
        for (j, p) in orders.iter().enumerate() {
            row[j + 1] = h.powf(*p);
        }
        row[m] = values[g];
    }
    for c in 0..m {
        let piv = (c..m).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap()).unwrap();
        a.swap(c, piv);
        for r in 0..m {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=m {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    a[0][m] / a[0][0]
}

/// Lowest `count` eigenvalues, extrapolated from grids `N`, `2N`, `4N`.
///
/// Without walls the leading error order is fitted from the three values,
/// falling back to 2. With walls of exponent `s` the orders `2` and `2s - 1`
/// are eliminated together.
pub fn fd_eigenvalues(problem: &EigenProblem, count: usize) -> Result<SpectrumResult> {
    let n = problem.grid_size;
    if n < 64 {
        return Err(Error::InvalidParameter(format!("grid_size {n} < 64")));
    }
    if count == 0 || count > n / 8 {
        return Err(Error::InvalidParameter(format!("count {count} must be in 1..={}", n / 8)));
    }
    let iv = problem.working_interval()?;
    let sizes = vec![n, 2 * n, 4 * n];
    let levels: Vec<Vec<f64>> = sizes
        .par_iter()
        .map(|&m| problem.matrix(iv, m).map(|(d, off)| lowest(&d, off, count)))
        .collect::<Result<_>>()?;

    let wall_order = if problem.singular_endpoints {
        problem
            .wall_exponents(iv)
            .into_iter()
            .map(|s| 2.0 * s - 1.0)
            .fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    let mut eigenvalues = Vec::with_capacity(count);
    let mut errors = Vec::with_capacity(count);
    let mut orders_used = Vec::new();
    for k in 0..count {
        let e = [levels[0][k], levels[1][k], levels[2][k]];
        let orders = if wall_order.is_finite() && (wall_order - 2.0).abs() > 0.05 {
            let mut o = vec![2.0, wall_order];
            o.sort_by(|a, b| a.partial_cmp(b).unwrap());
            o
        } else {
            let r = (e[0] - e[1]) / (e[1] - e[2]);
            let p = r.log2();
            vec![if p.is_finite() && (0.5..=8.0).contains(&p) { p } else { 2.0 }]
        };
        let extrap = eliminate(&e, &orders);
        // spread against the leading-order estimate
        let single = e[2] + (e[2] - e[1]) / (2f64.powf(orders[0]) - 1.0);
        let err = (extrap - single).abs().max((extrap - e[2]).abs() * 1e-3).max(f64::EPSILON * extrap.abs());
        if err > problem.tolerance * extrap.abs().max(1.0) || !extrap.is_finite() {
            return Err(Error::ConvergenceFailure(format!(
                "level {k}: estimates {e:?} extrapolate to {extrap} with spread {err}"
            )));
        }
        if k == 0 {
            orders_used = orders;
        }
        eigenvalues.push(extrap);
        errors.push(err);
    }
    Ok(SpectrumResult {
        eigenvalues,
        grid_sizes: sizes,
        extrapolated: true,
        error_estimates: errors,
        orders: orders_used,
    })
}

/// Observed convergence order `log2((E_N - E_2N)/(E_2N - E_4N))` per level.
pub fn observed_orders(problem: &EigenProblem, count: usize) -> Result<Vec<f64>> {
    let iv = problem.working_interval()?;
    let n = problem.grid_size;
    let levels: Vec<Vec<f64>> = [n, 2 * n, 4 * n]
        .par_iter()
        .map(|&m| problem.matrix(iv, m).map(|(d, off)| lowest(&d, off, count)))
        .collect::<Result<_>>()?;
    Ok((0..count)
        .map(|k| ((levels[0][k] - levels[1][k]) / (levels[1][k] - levels[2][k])).log2())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sturm_count_matches_small_matrix() {
        // eigenvalues of tridiag(-1, 2, -1) of size 3: 2 - √2, 2, 2 + √2
        let d = [2.0; 3];
        assert_eq!(sturm_count(&d, -1.0, 0.5), 0);
        assert_eq!(sturm_count(&d, -1.0, 1.0), 1);
        assert_eq!(sturm_count(&d, -1.0, 2.5), 2);
        assert_eq!(sturm_count(&d, -1.0, 3.5), 3);
        let e = lowest(&d, -1.0, 3);
        assert!((e[0] - (2.0 - 2f64.sqrt())).abs() < 1e-11);
        assert!((e[2] - (2.0 + 2f64.sqrt())).abs() < 1e-11);
    }

    #[test]
    fn particle_in_a_box() {
        let p = EigenProblem::new(Arc::new(|_| 0.0), Interval::new(0.0, PI), 256);
        let r = fd_eigenvalues(&p, 3).unwrap();
        for (k, e) in r.eigenvalues.iter().enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((e - exact).abs() / exact < 1e-6, "{e}");
        }
        let orders = observed_orders(&p, 3).unwrap();
        assert!(orders.iter().all(|o| (o - 2.0).abs() < 0.05));
    }

    #[test]
    fn scaled_oscillator_on_large_box() {
        let p = EigenProblem::new(Arc::new(|q: f64| 0.25 * q * q - 0.5), Interval::new(-20.0, 20.0), 1024);
        let r = fd_eigenvalues(&p, 4).unwrap();
        for (k, e) in r.eigenvalues.iter().enumerate() {
            assert!((e - k as f64).abs() < 1e-5, "{k}: {e}");
        }
    }

    #[test]
    fn infinite_ends_are_truncated() {
        let p = EigenProblem::new(
            Arc::new(|q: f64| q * q),
            Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            512,
        );
        let r = fd_eigenvalues(&p, 3).unwrap();
        for (k, e) in r.eigenvalues.iter().enumerate() {
            assert!((e - (2 * k + 1) as f64).abs() < 1e-5, "{e}");
        }
    }

    #[test]
    fn poschl_teller_wall_is_extrapolated() {
        // -φ'' + s(s-1)/sin²q φ, eigenvalues (n + s)²
        for s in [1.3f64, 2.7] {
            let c = s * (s - 1.0);
            let mut p = EigenProblem::new(Arc::new(move |q: f64| c / q.sin().powi(2)), Interval::new(0.0, PI), 512);
            p.singular_endpoints = true;
            let r = fd_eigenvalues(&p, 3).unwrap();
            for (k, e) in r.eigenvalues.iter().enumerate() {
                let exact = (k as f64 + s).powi(2);
                assert!((e - exact).abs() / exact < 1e-6, "s={s} k={k}: {e} vs {exact}");
            }
        }
    }

    #[test]
    fn attractive_wall_is_extrapolated() {
        // s(s-1) < 0 for s in (1/2, 1)
        let s = 0.72f64;
        let c = s * (s - 1.0);
        let mut p = EigenProblem::new(Arc::new(move |q: f64| c / q.sin().powi(2)), Interval::new(0.0, PI), 2048);
        p.singular_endpoints = true;
        let r = fd_eigenvalues(&p, 2).unwrap_or_else(|e| panic!("{e}"));
        assert!((r.orders[0] - (2.0 * s - 1.0)).abs() < 1e-4);
        for (k, e) in r.eigenvalues.iter().enumerate() {
            let exact = (k as f64 + s).powi(2);
            assert!((e - exact).abs() / exact < 1e-4, "k={k}: {e} vs {exact}");
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        let p = EigenProblem::new(Arc::new(|_| 0.0), Interval::new(0.0, 1.0), 32);
        assert!(fd_eigenvalues(&p, 1).is_err());
        let p = EigenProblem::new(Arc::new(|_| 0.0), Interval::new(0.0, 1.0), 64);
        assert!(fd_eigenvalues(&p, 9).is_err());
    }
}

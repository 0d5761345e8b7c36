//! Radial quadrature: adaptive composite Gauss-Legendre.
//!
//! The default policy integrates on [0, r_max] with r_max = 12 A^(1/3) + 10 fm
//! and relative tolerance 1e-10; Woods-Saxon and oscillator tails are both
//! negligible beyond that range. Refinement doubles the panel count until two
//! consecutive estimates agree.

use alloc::vec::Vec;

use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub enum QuadratureError {
    /// Estimates at the two finest refinements, for diagnosis.
    NonConvergence { previous: f64, last: f64 },
}

impl core::fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadratureError::NonConvergence { previous, last } => write!(
                f,
                "quadrature failed to converge: last two estimates {previous} and {last}"
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadraturePolicy {
    pub r_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub base_panels: usize,
    pub nodes_per_panel: usize,
    pub max_refinements: usize,
}

impl QuadraturePolicy {
    /// Default radial policy for a nucleus of the given mass number.
    pub fn for_mass(mass_number: u32) -> Self {
        Self {
            r_max: 12.0 * math::powf(mass_number as f64, 1.0 / 3.0) + 10.0,
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            base_panels: 8,
            nodes_per_panel: 16,
            max_refinements: 8,
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for k in 0..m {
        // Tricomi-style initial guess.
        let mut x = math::cos(core::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// One composite pass: `panels` equal panels on [a, b], `nodes` points each.
pub fn composite_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize, nodes: usize) -> f64 {
    let (xs, ws) = gauss_legendre(nodes);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Integrate f on [0, policy.r_max] to the policy tolerance.
pub fn integrate_radial<F: Fn(f64) -> f64>(
    f: F,
    policy: &QuadraturePolicy,
) -> Result<f64, QuadratureError> {
    let mut panels = policy.base_panels;
    let mut previous = composite_gl(&f, 0.0, policy.r_max, panels, policy.nodes_per_panel);
    for _ in 0..policy.max_refinements {
        panels *= 2;
        let last = composite_gl(&f, 0.0, policy.r_max, panels, policy.nodes_per_panel);
        if (last - previous).abs() <= policy.rel_tol * last.abs() + policy.abs_tol {
            return Ok(last);
        }
        previous = last;
    }
    let last = composite_gl(&f, 0.0, policy.r_max, panels * 2, policy.nodes_per_panel);
    if (last - previous).abs() <= policy.rel_tol * last.abs() + policy.abs_tol {
        return Ok(last);
    }
    Err(QuadratureError::NonConvergence { previous, last })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // 16-node GL is exact through degree 31.
        let (xs, ws) = gauss_legendre(16);
        let int: f64 = xs
            .iter()
            .zip(ws.iter())
            .map(|(x, w)| w * (3.0 * x * x + x.powi(5)))
            .sum();
        assert!((int - 2.0).abs() < 1e-13);
        let wsum: f64 = ws.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_moment() {
        // int_0^inf e^{-r^2} r^2 dr = sqrt(pi)/4
        let policy = QuadraturePolicy::for_mass(4);
        let v = integrate_radial(|r| (-r * r).exp() * r * r, &policy).unwrap();
        assert!((v - core::f64::consts::PI.sqrt() / 4.0).abs() < 1e-10);
    }

    #[test]
    fn zero_integrand() {
        let policy = QuadraturePolicy::for_mass(16);
        let v = integrate_radial(|_| 0.0, &policy).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn reports_last_two_estimates_on_failure() {
        // An oscillatory integrand that 2-node panels cannot resolve within
        // the refinement budget.
        let policy = QuadraturePolicy {
            r_max: 50.0,
            rel_tol: 1e-16,
            abs_tol: 0.0,
            base_panels: 1,
            nodes_per_panel: 2,
            max_refinements: 1,
        };
        let err = integrate_radial(|r| (50.0 * r).sin(), &policy).unwrap_err();
        let QuadratureError::NonConvergence { previous, last } = err;
        assert!(previous.is_finite() && last.is_finite());
        assert_ne!(previous, last);
    }
}

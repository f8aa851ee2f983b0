//! Independent finite-difference reference for the heat equation
//! u_t = nu u_xx + S(x) with Dirichlet boundaries: fourth-order spatial
//! stencils marched by SSP-RK3 at a parabolic time step. Used as the
//! trusted comparison solution for the relaxation-system benchmark.

use std::f64::consts::PI;

// Benchmark constants: nu, domain, forcing S(x) = 0.1 exp(0.05 x), IC cos x,
// boundary values equal to the forcing profile's trace 0.1 exp(0.05 x).
pub const DIFFUSION_NU: f64 = 0.01;
pub const DIFFUSION_X_MIN: f64 = -1.5 * PI;
pub const DIFFUSION_X_MAX: f64 = 1.5 * PI;
pub const DIFFUSION_SOURCE_AMP: f64 = 0.1;
pub const DIFFUSION_SOURCE_RATE: f64 = 0.05;

pub fn diffusion_source(x: f64) -> f64 {
    DIFFUSION_SOURCE_AMP * (DIFFUSION_SOURCE_RATE * x).exp()
}

/// Dirichlet data (left, right) for the benchmark: the trace of the forcing
/// profile at the two boundaries.
pub fn diffusion_bc() -> (f64, f64) {
    (diffusion_source(DIFFUSION_X_MIN), diffusion_source(DIFFUSION_X_MAX))
}

/// Closed-form steady solution of nu U'' + S = 0 with the benchmark data:
/// U = -(amp/(nu rate^2)) e^{rate x} + c1 x + c2, with c1, c2 fitted to the
/// boundary values.
pub fn diffusion_steady_exact(x: f64) -> f64 {
    let k = DIFFUSION_SOURCE_AMP / (DIFFUSION_NU * DIFFUSION_SOURCE_RATE * DIFFUSION_SOURCE_RATE);
    let part = |x: f64| -k * (DIFFUSION_SOURCE_RATE * x).exp();
    let (bl, br) = diffusion_bc();
    let c1 = (br - part(DIFFUSION_X_MAX) - (bl - part(DIFFUSION_X_MIN)))
        / (DIFFUSION_X_MAX - DIFFUSION_X_MIN);
    let c2 = bl - part(DIFFUSION_X_MIN) - c1 * DIFFUSION_X_MIN;
    part(x) + c1 * x + c2
}

/// Point-value solution on a uniform node grid, with quartic Lagrange
/// sampling between nodes.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub x_min: f64,
    pub h: f64,
    pub u: Vec<f64>,
}

impl FdSolution {
    /// Interpolate the nodal solution at x with a 4-point Lagrange stencil
    /// (O(h^4), matching the stencil order).
    pub fn eval(&self, x: f64) -> f64 {
        let m = self.u.len();
        let s = (x - self.x_min) / self.h;
        let j = (s.floor() as isize - 1).clamp(0, m as isize - 4) as usize;
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (s - (j + b) as f64) / ((j + a) as f64 - (j + b) as f64);
                }
            }
            acc += w * self.u[j + a];
        }
        acc
    }
}

/// Fourth-order second derivative of `u` on a uniform grid: five-point
/// central stencil inside, six-point biased stencil one node from each end.
/// Boundary rows are left at zero (Dirichlet nodes are held fixed).
fn second_derivative(u: &[f64], h: f64, out: &mut [f64]) {
    let m = u.len();
    let h2 = 12.0 * h * h;
    out[0] = 0.0;
    out[m - 1] = 0.0;
    out[1] = (10.0 * u[0] - 15.0 * u[1] - 4.0 * u[2] + 14.0 * u[3] - 6.0 * u[4] + u[5]) / h2;
    out[m - 2] = (10.0 * u[m - 1] - 15.0 * u[m - 2] - 4.0 * u[m - 3] + 14.0 * u[m - 4]
        - 6.0 * u[m - 5]
        + u[m - 6])
        / h2;
    for j in 2..m - 2 {
        out[j] = (-u[j - 2] + 16.0 * u[j - 1] - 30.0 * u[j] + 16.0 * u[j + 1] - u[j + 2]) / h2;
    }
}

/// March u_t = nu u_xx + S(x) on `n_points` nodes spanning [x_min, x_max]
/// to t_end with SSP-RK3 and dt = 0.2 h^2 / nu (well inside the stability
/// bound ~0.47 h^2/nu of the five-point stencil under SSP-RK3).
pub fn march_heat_fd(
    n_points: usize,
    x_min: f64,
    x_max: f64,
    nu: f64,
    t_end: f64,
    ic: &dyn Fn(f64) -> f64,
    source: &dyn Fn(f64) -> f64,
    bc: (f64, f64),
) -> FdSolution {
    assert!(n_points >= 6, "FD march needs at least 6 nodes");
    let m = n_points;
    let h = (x_max - x_min) / (m - 1) as f64;
    let xs: Vec<f64> = (0..m).map(|j| x_min + j as f64 * h).collect();
    let src: Vec<f64> = xs.iter().map(|&x| source(x)).collect();
    let mut u: Vec<f64> = xs.iter().map(|&x| ic(x)).collect();
    u[0] = bc.0;
    u[m - 1] = bc.1;

    let steps = ((t_end * nu / (0.2 * h * h)).ceil() as usize).max(1);
    let dt = t_end / steps as f64;
    let mut d2 = vec![0.0; m];
    let mut u1 = vec![0.0; m];
    let mut u2 = vec![0.0; m];
    let rhs = |u: &[f64], d2: &mut [f64], out: &mut [f64]| {
        second_derivative(u, h, d2);
        out[0] = u[0];
        out[m - 1] = u[m - 1];
        for j in 1..m - 1 {
            out[j] = u[j] + dt * (nu * d2[j] + src[j]);
        }
    };
    for _ in 0..steps {
        rhs(&u, &mut d2, &mut u1);
        rhs(&u1, &mut d2, &mut u2);
        for j in 0..m {
            u2[j] = 0.75 * u[j] + 0.25 * u2[j];
        }
        rhs(&u2, &mut d2, &mut u1);
        for j in 0..m {
            u[j] = (u[j] + 2.0 * u1[j]) / 3.0;
        }
    }
    FdSolution { x_min, h, u }
}

/// Benchmark reference: the diffusion test problem marched to t_end.
pub fn diffusion_reference(n_points: usize, t_end: f64) -> FdSolution {
    march_heat_fd(
        n_points,
        DIFFUSION_X_MIN,
        DIFFUSION_X_MAX,
        DIFFUSION_NU,
        t_end,
        &|x: f64| x.cos(),
        &diffusion_source,
        diffusion_bc(),
    )
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn steady_closed_form_satisfies_equation_and_bcs() {
        let (bl, br) = diffusion_bc();
        assert_relative_eq!(diffusion_steady_exact(DIFFUSION_X_MIN), bl, epsilon = 1e-12);
        assert_relative_eq!(diffusion_steady_exact(DIFFUSION_X_MAX), br, epsilon = 1e-12);
        // residual nu U'' + S by central differences at scattered points
        let h = 1e-3;
        for k in 0..7 {
            let x = DIFFUSION_X_MIN + (k as f64 + 0.5) / 7.5 * (DIFFUSION_X_MAX - DIFFUSION_X_MIN);
            let d2 = (diffusion_steady_exact(x + h) - 2.0 * diffusion_steady_exact(x)
                + diffusion_steady_exact(x - h))
                / (h * h);
            let resid = DIFFUSION_NU * d2 + diffusion_source(x);
            assert!(resid.abs() < 1e-6, "steady residual {resid} at x = {x}");
        }
    }

    #[test]
    fn stencil_is_exact_for_quintics_everywhere() {
        let f = |x: f64| x.powi(5) - 2.0 * x.powi(4) + 0.5 * x.powi(3) + x - 3.0;
        let d2f = |x: f64| 20.0 * x.powi(3) - 24.0 * x * x + 3.0 * x;
        let m = 9;
        let h = 0.37;
        let u: Vec<f64> = (0..m).map(|j| f(1.1 + j as f64 * h)).collect();
        let mut out = vec![0.0; m];
        second_derivative(&u, h, &mut out);
        for j in 1..m - 1 {
            assert_relative_eq!(out[j], d2f(1.1 + j as f64 * h), epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let sol = march_heat_fd(33, 0.0, 1.0, 0.05, 0.7, &|_| 0.0, &|_| 0.0, (0.0, 0.0));
        assert!(sol.u.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sine_mode_decays_at_the_exact_rate() {
        // u = sin(k(x - x0)) e^{-nu k^2 t} solves the homogeneous problem with
        // zero Dirichlet data when k fits the domain
        let (x0, x1) = (DIFFUSION_X_MIN, DIFFUSION_X_MAX);
        let k = PI / (x1 - x0);
        let t = 5.0;
        let sol = march_heat_fd(
            161,
            x0,
            x1,
            DIFFUSION_NU,
            t,
            &|x: f64| (k * (x - x0)).sin(),
            &|_| 0.0,
            (0.0, 0.0),
        );
        let decay = (-DIFFUSION_NU * k * k * t).exp();
        for j in (0..161).step_by(16) {
            let x = x0 + j as f64 * sol.h;
            let exact = (k * (x - x0)).sin() * decay;
            assert!((sol.u[j] - exact).abs() < 1e-7, "node {j}: {} vs {exact}", sol.u[j]);
        }
    }

    #[test]
    fn long_march_reaches_the_closed_form_steady_state() {
        // slowest transient decays like exp(-nu (pi/L)^2 t) ~ exp(-t/900);
        // t = 25000 leaves less than 1e-8 of the ~1e2 initial deficit
        let sol = diffusion_reference(81, 25_000.0);
        let mut worst = 0.0f64;
        for j in 0..81 {
            let x = DIFFUSION_X_MIN + j as f64 * sol.h;
            worst = worst.max((sol.u[j] - diffusion_steady_exact(x)).abs());
        }
        assert!(worst < 1e-5, "steady-state mismatch {worst}");
    }

    #[test]
    fn lagrange_sampling_reproduces_cubics_exactly() {
        let f = |x: f64| 2.0 * x.powi(3) - x * x + 4.0 * x - 7.0;
        let sol = FdSolution {
            x_min: -1.0,
            h: 0.25,
            u: (0..17).map(|j| f(-1.0 + 0.25 * j as f64)).collect(),
        };
        for k in 0..40 {
            let x = -1.0 + 4.0 * (k as f64 + 0.3) / 41.0;
            assert_relative_eq!(sol.eval(x), f(x), epsilon = 1e-12, max_relative = 1e-12);
        }
        // endpoints use one-sided windows
        assert_relative_eq!(sol.eval(-1.0), f(-1.0), epsilon = 1e-12, max_relative = 1e-12);
        assert_relative_eq!(sol.eval(3.0), f(3.0), epsilon = 1e-12, max_relative = 1e-12);
    }
}

//! Exact Riemann solver for the ideal-gas Euler equations: Newton iteration
//! on the star pressure with standard shock / rarefaction relations, then
//! wave-fan sampling at x/t.

use crate::error::{Result, SolverError};
use crate::models::GasParams;

/// One side of the Riemann problem in primitive variables (rho, u, p).
#[derive(Debug, Clone, Copy)]
struct Side {
    rho: f64,
    u: f64,
    p: f64,
    a: f64,
}

impl Side {
    fn new(q: [f64; 3], gamma: f64) -> Side {
        Side {
            rho: q[0],
            u: q[1],
            p: q[2],
            a: (gamma * q[2] / q[0]).sqrt(),
        }
    }

    /// f_K(p): velocity change across the wave on this side as a function of
    /// the star pressure (shock for p > p_K, rarefaction otherwise), and its
    /// derivative with respect to p.
    fn wave_fn(&self, p: f64, gamma: f64) -> (f64, f64) {
        if p > self.p {
            let big_a = 2.0 / ((gamma + 1.0) * self.rho);
            let big_b = (gamma - 1.0) / (gamma + 1.0) * self.p;
            let root = (big_a / (p + big_b)).sqrt();
            let f = (p - self.p) * root;
            let df = root * (1.0 - 0.5 * (p - self.p) / (p + big_b));
            (f, df)
        } else {
            let pr = p / self.p;
            let ex = (gamma - 1.0) / (2.0 * gamma);
            let f = 2.0 * self.a / (gamma - 1.0) * (pr.powf(ex) - 1.0);
            let df = pr.powf(-(gamma + 1.0) / (2.0 * gamma)) / (self.rho * self.a);
            (f, df)
        }
    }
}

/// Star-region pressure and velocity of the Riemann problem.
pub fn riemann_star(
    left: [f64; 3],
    right: [f64; 3],
    gas: &GasParams,
) -> Result<(f64, f64)> {
    let g = gas.gamma;
    let l = Side::new(left, g);
    let r = Side::new(right, g);
    let du = r.u - l.u;
    if 2.0 * (l.a + r.a) / (g - 1.0) <= du {
        return Err(SolverError::Inadmissible {
            what: format!("vacuum formation (du = {du})"),
            x: f64::NAN,
        });
    }
    // two-rarefaction initial guess, floored away from zero
    let ex = (g - 1.0) / (2.0 * g);
    let guess = ((l.a + r.a - 0.5 * (g - 1.0) * du)
        / (l.a / l.p.powf(ex) + r.a / r.p.powf(ex)))
    .powf(1.0 / ex);
    let mut p = guess.max(1e-12 * l.p.min(r.p));
    for _ in 0..60 {
        let (fl, dfl) = l.wave_fn(p, g);
        let (fr, dfr) = r.wave_fn(p, g);
        let phi = fl + fr + du;
        let step = phi / (dfl + dfr);
        let next = (p - step).max(0.1 * p);
        if (next - p).abs() < 1e-14 * p {
            p = next;
            let (fl, _) = l.wave_fn(p, g);
            let (fr, _) = r.wave_fn(p, g);
            let u = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
            return Ok((p, u));
        }
        p = next;
    }
    Err(SolverError::RootFinding(
        "star pressure Newton iteration did not converge".into(),
    ))
}

/// Exact Riemann solution sampled at (x, t): primitive (rho, u, p).
///
/// At t = 0 the initial data is returned (left for x < 0, right otherwise).
pub fn exact_sod(
    x: f64,
    t: f64,
    left: [f64; 3],
    right: [f64; 3],
    gas: &GasParams,
) -> Result<[f64; 3]> {
    if t <= 0.0 {
        return Ok(if x < 0.0 { left } else { right });
    }
    let g = gas.gamma;
    let l = Side::new(left, g);
    let r = Side::new(right, g);
    let (ps, us) = riemann_star(left, right, gas)?;
    let xi = x / t;
    Ok(if xi <= us {
        sample_side(&l, ps, us, xi, g, true)
    } else {
        sample_side(&r, ps, us, xi, g, false)
    })
}

/// Sample on one side of the contact: shock or rarefaction fan against the
/// outer state `s`, with the sign conventions folded into `left`.
fn sample_side(s: &Side, ps: f64, us: f64, xi: f64, g: f64, left: bool) -> [f64; 3] {
    let sgn = if left { 1.0 } else { -1.0 };
    let beta = (g - 1.0) / (g + 1.0);
    if ps > s.p {
        // shock: speed from the mass flux relation
        let q = (1.0 + (g + 1.0) / (2.0 * g) * (ps / s.p - 1.0)).sqrt();
        let speed = s.u - sgn * s.a * q;
        let outside = if left { xi < speed } else { xi > speed };
        if outside {
            [s.rho, s.u, s.p]
        } else {
            let rho = s.rho * (ps / s.p + beta) / (beta * ps / s.p + 1.0);
            [rho, us, ps]
        }
    } else {
        // rarefaction: head at the outer state, tail at the star state
        let a_star = s.a * (ps / s.p).powf((g - 1.0) / (2.0 * g));
        let head = s.u - sgn * s.a;
        let tail = us - sgn * a_star;
        let before_head = if left { xi < head } else { xi > head };
        let after_tail = if left { xi > tail } else { xi < tail };
        if before_head {
            [s.rho, s.u, s.p]
        } else if after_tail {
            let rho = s.rho * (ps / s.p).powf(1.0 / g);
            [rho, us, ps]
        } else {
            // inside the fan: characteristic through the origin
            let a = (2.0 / (g + 1.0)) * (s.a + sgn * 0.5 * (g - 1.0) * (s.u - xi));
            let u = (2.0 / (g + 1.0)) * (sgn * s.a + 0.5 * (g - 1.0) * s.u + xi);
            let rho = s.rho * (a / s.a).powf(2.0 / (g - 1.0));
            let p = s.p * (a / s.a).powf(2.0 * g / (g - 1.0));
            [rho, u, p]
        }
    }
}

/// Wave-front positions (left head, left tail, contact, right shock-or-head,
/// right tail) at time t; degenerate entries coincide. Used to split cells
/// into smooth pieces when averaging the exact solution.
pub fn sod_wave_positions(
    t: f64,
    left: [f64; 3],
    right: [f64; 3],
    gas: &GasParams,
) -> Result<Vec<f64>> {
    let g = gas.gamma;
    let l = Side::new(left, g);
    let r = Side::new(right, g);
    let (ps, us) = riemann_star(left, right, gas)?;
    let mut xs = Vec::new();
    if ps > l.p {
        let q = (1.0 + (g + 1.0) / (2.0 * g) * (ps / l.p - 1.0)).sqrt();
        xs.push((l.u - l.a * q) * t);
    } else {
        let a_star = l.a * (ps / l.p).powf((g - 1.0) / (2.0 * g));
        xs.push((l.u - l.a) * t);
        xs.push((us - a_star) * t);
    }
    xs.push(us * t);
    if ps > r.p {
        let q = (1.0 + (g + 1.0) / (2.0 * g) * (ps / r.p - 1.0)).sqrt();
        xs.push((r.u + r.a * q) * t);
    } else {
        let a_star = r.a * (ps / r.p).powf((g - 1.0) / (2.0 * g));
        xs.push((us + a_star) * t);
        xs.push((r.u + r.a) * t);
    }
    Ok(xs)
}

pub const SOD_LEFT: [f64; 3] = [1.0, 0.0, 1.0];
pub const SOD_RIGHT: [f64; 3] = [0.125, 0.0, 0.1];

// ---------------------------------------------------------------------------

//! Theta series with certified truncation, and the rank-one special
//! functions tau and eta.
//!
//! For a lattice E of rank n, theta_E(t) = sum_{v in E} e^{-pi t |v|^2}.
//! The Gaussian mass outside radius r = sqrt(n/(2 pi t)) * rt with rt >= 1
//! is at most q = [rt e^{-(rt^2-1)/2}]^n times the whole sum, so truncating
//! there brackets the series as ball <= theta <= ball / (1 - q). Choosing
//! q <= tol/(1+tol) certifies a relative error of tol.
//!
//! Rank-one lattices are handled by the scalar series
//! tau(x) = log sum_{k in Z} e^{-pi x k^2}, with the Poisson functional
//! equation tau(x) = tau(1/x) - (1/2) log x used below x = 1, and
//! eta(t) = tau(e^{2|t|}), so that h0 of a degree-t line bundle is
//! t^+ + eta(t).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::EuclideanLattice;

/// omega = sum_{k in Z} e^{-pi k^2} = pi^{1/4} / Gamma(3/4).
pub fn omega() -> f64 {
    tau(1.0).exp()
}

/// eta0 = log omega = h0 of the trivial rank-one lattice.
pub fn eta0() -> f64 {
    tau(1.0)
}

/// The transference kernel psi(t) = t e^{-(t^2 - 1)/2}, a decreasing
/// homeomorphism [1, inf) -> (0, 1].
pub fn psi_transference(t: f64) -> f64 {
    t * (-(t * t - 1.0) / 2.0).exp()
}

/// Smallest rt >= 1 with [psi(rt)]^n <= q_target, by bisection.
fn banaszczyk_radius_factor(n: usize, q_target: f64) -> f64 {
    assert!(q_target > 0.0 && q_target < 1.0);
    let target = (q_target.ln() / n as f64).exp();
    if target >= 1.0 {
        return 1.0;
    }
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while psi_transference(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi_transference(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi {
            break;
        }
    }
    hi
}

/// A theta value with a certified relative truncation error.
#[derive(Debug, Clone)]
pub struct ThetaResult {
    /// Truncated sum; the true series lies in [value, value * (1 + rel_error)].
    pub value: f64,
    /// log of `value`.
    pub log_value: f64,
    /// Certified relative bound q / (1 - q) from the Gaussian tail estimate.
    pub rel_error: f64,
    /// Squared truncation radius actually used.
    pub truncation_radius2: f64,
    /// Number of lattice points summed.
    pub points_used: usize,
}

/// theta_E(t) with relative error at most `tol`, certified by the Gaussian
/// tail bound on the rescaled lattice.
pub fn theta(lattice: &EuclideanLattice, t: f64, tol: f64) -> Result<ThetaResult> {
    assert!(t > 0.0, "t must be positive");
    assert!(tol > 0.0 && tol < 0.5, "tol must be in (0, 0.5)");
    let n = lattice.rank();
    if n == 0 {
        return Ok(ThetaResult {
            value: 1.0,
            log_value: 0.0,
            rel_error: 0.0,
            truncation_radius2: 0.0,
            points_used: 1,
        });
    }
    if n == 1 {
        // rank one collapses to the scalar series, which resolves values far
        // below any enumeration tolerance; the reported radius is still the
        // Gaussian-tail one so downstream truncations stay certified
        let g = lattice.gram()[(0, 0)];
        let (log_value, terms) = tau_with_terms(g * t);
        let rt = banaszczyk_radius_factor(1, tol / (1.0 + tol));
        return Ok(ThetaResult {
            value: log_value.exp(),
            log_value,
            rel_error: 1e-15,
            truncation_radius2: rt * rt / (2.0 * PI * t),
            points_used: 2 * terms + 1,
        });
    }
    let q_target = tol / (1.0 + tol);
    let rt = banaszczyk_radius_factor(n, q_target);
    let r2 = (n as f64) / (2.0 * PI * t) * rt * rt;
    let points = lattice.enumerate(r2)?;
    let mut sum = 0.0;
    for p in &points {
        sum += (-PI * t * p.normsq).exp();
    }
    let q = psi_transference(rt).powi(n as i32);
    let rel_error = q / (1.0 - q);
    Ok(ThetaResult {
        value: sum,
        log_value: sum.ln(),
        rel_error,
        truncation_radius2: r2,
        points_used: points.len(),
    })
}

/// Default relative tolerance for the invariants below.
pub const DEFAULT_THETA_TOL: f64 = 1e-10;

/// h0 = log theta_E(1), certified to ~2e-10 absolute.
pub fn h0_theta(lattice: &EuclideanLattice) -> Result<f64> {
    Ok(theta(lattice, 1.0, DEFAULT_THETA_TOL)?.log_value)
}

/// h1 = h0 of the dual lattice.
pub fn h1_theta(lattice: &EuclideanLattice) -> Result<f64> {
    h0_theta(&lattice.dual())
}

/// h0 - h1 - deg; vanishes by the Poisson formula, so the return value is a
/// numerical residual.
pub fn poisson_rr_check(lattice: &EuclideanLattice) -> Result<f64> {
    Ok(h0_theta(lattice)? - h1_theta(lattice)? - lattice.degree())
}

/// tau(x) = log sum_{k in Z} e^{-pi x k^2} for x > 0, absolute error below
/// 1e-15. The series is summed only in its fast regime x >= 1; smaller
/// arguments go through the functional equation.
pub fn tau(x: f64) -> f64 {
    tau_with_terms(x).0
}

/// tau together with the number of series terms it consumed.
pub fn tau_with_terms(x: f64) -> (f64, usize) {
    assert!(x > 0.0, "tau needs a positive argument");
    if x >= 1.0 {
        tau_series(x)
    } else {
        let (t, terms) = tau_series(1.0 / x);
        (t - 0.5 * x.ln(), terms)
    }
}

fn tau_series(x: f64) -> (f64, usize) {
    debug_assert!(x >= 1.0);
    let mut s = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (-PI * x * k * k).exp();
        s += term;
        if term < 1e-18 * (1.0 + s) {
            break;
        }
        k += 1.0;
    }
    ((2.0 * s).ln_1p(), k as usize)
}

/// eta(t) = tau(e^{2|t|}); h0 of a degree-t line bundle is t^+ + eta(t).
pub fn eta(t: f64) -> f64 {
    let x = (2.0 * t.abs()).exp();
    if x.is_infinite() {
        return 0.0;
    }
    tau_series(x).0
}

/// Upper bounds on h0 of a line bundle of degree <= t over a field of
/// degree d.
#[derive(Debug, Clone, Copy)]
pub struct LineBundleBounds {
    /// The bound that applies to the sign of t: 1 + t for t >= 0, else the
    /// refined exponential bound.
    pub bound: f64,
    /// exp(-pi d (e^{-2t/d} - 1)), defined for t <= 0.
    pub refined_negative: Option<f64>,
    /// exp(2 pi t), the weaker closed form for t <= 0.
    pub weak_negative: Option<f64>,
    /// The constant 3 e^{-pi} / (1 - 1/(2 pi)) = 0.154180...
    pub constant_c: f64,
}

/// Degree bounds for hermitian line bundles: h0 <= 1 + t when t >= 0,
/// h0 <= exp(-pi d (e^{-2t/d} - 1)) <= exp(2 pi t) when t <= 0.
pub fn line_bundle_bounds(deg: f64, field_degree: u32) -> LineBundleBounds {
    assert!(field_degree >= 1);
    let d = field_degree as f64;
    let constant_c = 3.0 * (-PI).exp() / (1.0 - 1.0 / (2.0 * PI));
    if deg >= 0.0 {
        let refined = (deg == 0.0).then_some(1.0);
        LineBundleBounds {
            bound: 1.0 + deg,
            refined_negative: refined,
            weak_negative: refined,
            constant_c,
        }
    } else {
        let refined = (-PI * d * ((-2.0 * deg / d).exp() - 1.0)).exp();
        LineBundleBounds {
            bound: refined,
            refined_negative: Some(refined),
            weak_negative: Some((2.0 * PI * deg).exp()),
            constant_c,
        }
    }
}

/// C(n, lambda) = 3^n (pi lambda^2)^{-n/2} int_{pi lambda^2}^inf u^{n/2}
/// e^{-u} du: an upper bound for e^{h0} - 1 in terms of the first minimum.
pub fn groenewegen_bound(n: u32, lambda1: f64) -> f64 {
    assert!(n >= 1 && lambda1 > 0.0);
    let beta = PI * lambda1 * lambda1;
    let integral = crate::quad::upper_incomplete_gamma(n as f64 / 2.0, beta);
    3f64.powi(n as i32) * beta.powf(-(n as f64) / 2.0) * integral
}

/// Closed-form variant 3^n (1 - n/(2 pi lambda^2))^{-1} e^{-pi lambda^2},
/// valid only for lambda > sqrt(n / 2 pi).
pub fn groenewegen_closed_bound(n: u32, lambda1: f64) -> Result<f64> {
    assert!(n >= 1 && lambda1 > 0.0);
    let nn = n as f64;
    let l2 = lambda1 * lambda1;
    if l2 <= nn / (2.0 * PI) {
        return Err(Error::DomainError(format!(
            "closed Groenewegen bound needs lambda^2 > n/(2 pi), got lambda^2 = {l2}"
        )));
    }
    Ok(3f64.powi(n as i32) * (1.0 - nn / (2.0 * PI * l2)).recip() * (-PI * l2).exp())
}

//! Geometry-of-numbers invariants: counting profiles, first minima,
//! covering radii, transference constants, and the comparison inequalities
//! tying the naive counting invariant to the theta invariant.
//!
//! The counting invariant is h0_ar(E, t) = log #{v : |v|^2 <= t}. It agrees
//! with h0 of the theta side up to rank-dependent error terms:
//!
//!   h0 - (n/2) log n + log(1 - 1/2pi)  <=  h0_ar(E, 1)  <=  h0 + pi
//!
//! and the transference bound rho(E) lambda1(E dual) <= t_n^2 n / (2 pi)
//! holds with t_n the solution of t e^{-(t^2-1)/2} = 3^{-1/n}.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::{EuclideanLattice, DEFAULT_ENUM_CAP};
use crate::rng::SplitMix64;
use crate::theta::{h0_theta, psi_transference, theta};

/// Cumulative counting function N_E: thresholds are the distinct squared
/// norms up to the cap, `counts[i]` = #{v : |v|^2 <= `thresholds[i]`}.
#[derive(Debug, Clone)]
pub struct CountingProfile {
    pub thresholds: Vec<f64>,
    pub counts: Vec<u64>,
}

impl CountingProfile {
    pub fn build(lattice: &EuclideanLattice, t_cap: f64) -> Result<Self> {
        let pts = lattice.enumerate(t_cap)?;
        let mut norms: Vec<f64> = pts.iter().map(|p| p.normsq).collect();
        norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut thresholds = Vec::new();
        let mut counts = Vec::new();
        let mut running = 0u64;
        for w in norms.chunk_by(|a, b| a == b) {
            running += w.len() as u64;
            thresholds.push(w[0]);
            counts.push(running);
        }
        Ok(CountingProfile { thresholds, counts })
    }

    /// N_E(sqrt t): number of vectors of squared norm <= t.
    pub fn count_at(&self, t: f64) -> u64 {
        match self
            .thresholds
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => self.counts[i],
            Err(0) => 0,
            Err(i) => self.counts[i - 1],
        }
    }
}

/// Shortest nonzero vector data: length, squared length, multiplicity.
#[derive(Debug, Clone, Copy)]
pub struct FirstMinimum {
    pub lambda1: f64,
    pub normsq: f64,
    pub multiplicity: usize,
}

/// Exact first minimum by enumeration with radius doubling.
pub fn lambda1(lattice: &EuclideanLattice) -> Result<FirstMinimum> {
    assert!(lattice.rank() >= 1, "rank must be positive");
    // start at the covolume scale and double until a nonzero vector shows up
    let n = lattice.rank() as f64;
    let mut r2 = lattice.covolume().powf(2.0 / n).max(1e-12);
    loop {
        let pts = lattice.enumerate(r2)?;
        let best = pts
            .iter()
            .filter(|p| p.normsq > 0.0)
            .map(|p| p.normsq)
            .fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            let multiplicity = pts
                .iter()
                .filter(|p| p.normsq > 0.0 && p.normsq <= best * (1.0 + 1e-10))
                .count();
            return Ok(FirstMinimum { lambda1: best.sqrt(), normsq: best, multiplicity });
        }
        r2 *= 2.0;
    }
}

/// h0_ar(E, t) = log #{v : |v|^2 <= t}.
pub fn h0_ar(lattice: &EuclideanLattice, t: f64) -> Result<f64> {
    assert!(t > 0.0);
    let pts = lattice.enumerate(t)?;
    Ok((pts.len() as f64).ln())
}

/// Open variant, counting |v|^2 < t.
pub fn h0_ar_open(lattice: &EuclideanLattice, t: f64) -> Result<f64> {
    assert!(t > 0.0);
    let pts = lattice.enumerate(t)?;
    Ok((pts.iter().filter(|p| p.normsq < t).count() as f64).ln())
}

/// Exact closest-vector distance (squared) from a real target given in
/// basis coordinates, by enumeration inside the Babai-rounding radius.
pub fn cvp_distance2(lattice: &EuclideanLattice, target: &[f64]) -> Result<f64> {
    assert_eq!(target.len(), lattice.rank());
    let rounded: Vec<i64> = target.iter().map(|x| x.round() as i64).collect();
    let diff: Vec<f64> = rounded
        .iter()
        .zip(target)
        .map(|(&r, &x)| r as f64 - x)
        .collect();
    let d0 = lattice.gram().quad_form(&diff, &diff);
    if d0 == 0.0 {
        return Ok(0.0);
    }
    let pts = lattice.enumerate_around(target, d0 * (1.0 + 1e-9), DEFAULT_ENUM_CAP)?;
    Ok(pts
        .iter()
        .map(|(_, d2)| *d2)
        .fold(f64::INFINITY, f64::min)
        .min(d0))
}

/// Lagrange-reduced rank-2 Gram: g00 <= g11, 2|g01| <= g00, g01 <= 0.
fn lagrange_reduce_2d(g: &crate::linalg::Mat) -> (f64, f64, f64) {
    let (mut a, mut b, mut c) = (g[(0, 0)], g[(0, 1)], g[(1, 1)]);
    for _ in 0..256 {
        if c < a {
            std::mem::swap(&mut a, &mut c);
        }
        let mu = (b / a).round();
        if mu != 0.0 {
            // b1 <- b1 - mu b0
            c = c - 2.0 * mu * b + mu * mu * a;
            b -= mu * a;
            continue;
        }
        if c < a {
            continue;
        }
        break;
    }
    if b > 0.0 {
        b = -b;
    }
    (a, b, c)
}

/// Exact covering radius for rank 1 and 2; the rank-2 case is the
/// circumradius of the obtuse-superbase triangle of a reduced basis.
pub fn covering_radius_exact_low_rank(lattice: &EuclideanLattice) -> Option<f64> {
    match lattice.rank() {
        1 => Some(0.5 * lattice.gram()[(0, 0)].sqrt()),
        2 => {
            let (a, b, c) = lagrange_reduce_2d(lattice.gram());
            let w2 = a + c + 2.0 * b;
            let covol = lattice.covolume();
            Some((a * c * w2).sqrt() / (2.0 * covol))
        }
        _ => None,
    }
}

/// The transference constant t_n: the unique solution >= 1 of
/// psi(t) = 3^{-1/n}, computed by bisection to 1e-12.
#[derive(Debug, Clone, Copy)]
pub struct TransferenceConstants {
    pub n: u32,
    pub t_n: f64,
}

impl TransferenceConstants {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1);
        let target = 3f64.powf(-1.0 / n as f64);
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
        }
        let t_n = 0.5 * (lo + hi);
        debug_assert!((psi_transference(t_n) - target).abs() <= 1e-12);
        debug_assert!(t_n > 1.0);
        TransferenceConstants { n, t_n }
    }

    /// Upper bound on rho(E) * lambda1(E dual): t_n^2 n / (2 pi).
    pub fn product_bound(&self) -> f64 {
        self.t_n * self.t_n * self.n as f64 / (2.0 * PI)
    }

    /// The conjectural closed bound 1 + sqrt(log 3 / n), reported for
    /// comparison only; it fails for small n.
    pub fn closed_form_candidate(&self) -> f64 {
        1.0 + (3f64.ln() / self.n as f64).sqrt()
    }
}

/// Covering radius bracket: a sampled CVP lower bound and a transference
/// upper bound, collapsing to the exact value for rank <= 2.
pub fn covering_radius_interval(
    lattice: &EuclideanLattice,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = lattice.rank();
    assert!(n >= 1);
    if let Some(exact) = covering_radius_exact_low_rank(lattice) {
        return Ok((exact, exact));
    }
    let mut lower: f64 = 0.0;
    for i in 0..samples {
        let mut rng = SplitMix64::derive(seed, i as u64);
        let target: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let d2 = cvp_distance2(lattice, &target)?;
        lower = lower.max(d2.sqrt());
    }
    let consts = TransferenceConstants::new(n as u32);
    let dual_min = lambda1(&lattice.dual())?;
    let upper = consts.product_bound() / dual_min.lambda1;
    if lower > upper * (1.0 + 1e-12) {
        return Err(Error::InconsistentBounds { lower, upper });
    }
    Ok((lower, upper))
}

/// Transference report for one lattice.
#[derive(Debug, Clone)]
pub struct TransferenceReport {
    pub n: u32,
    pub t_n: f64,
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub rho_exact: Option<f64>,
    pub lambda1_dual: f64,
    pub product_bound: f64,
    /// psi evaluated at the closed-form candidate 1 + sqrt(log3/n); when
    /// this exceeds 3^{-1/n} the candidate undershoots t_n.
    pub closed_form_candidate: f64,
    pub closed_form_holds: bool,
}

/// Check rho * lambda1(dual) against the transference bound. The sampled
/// lower estimate must stay below the bound; for rank <= 2 the exact value
/// must also satisfy the elementary lower bound 1/2.
pub fn transference_check(
    lattice: &EuclideanLattice,
    samples: usize,
    seed: u64,
) -> Result<TransferenceReport> {
    let n = lattice.rank() as u32;
    let consts = TransferenceConstants::new(n);
    let (rho_lower, rho_upper) = covering_radius_interval(lattice, samples, seed)?;
    let rho_exact = covering_radius_exact_low_rank(lattice);
    let dual_min = lambda1(&lattice.dual())?;
    let bound = consts.product_bound();

    let product_lower = rho_lower * dual_min.lambda1;
    if product_lower > bound * (1.0 + 1e-9) {
        return Err(Error::ViolationDetected(format!(
            "rho_lower * lambda1(dual) = {product_lower} exceeds t_n^2 n/(2 pi) = {bound}"
        )));
    }
    if let Some(rho) = rho_exact {
        let product = rho * dual_min.lambda1;
        if product < 0.5 * (1.0 - 1e-9) {
            return Err(Error::ViolationDetected(format!(
                "exact rho * lambda1(dual) = {product} below 1/2"
            )));
        }
        if product > bound * (1.0 + 1e-9) {
            return Err(Error::ViolationDetected(format!(
                "exact rho * lambda1(dual) = {product} exceeds {bound}"
            )));
        }
    }
    let candidate = consts.closed_form_candidate();
    Ok(TransferenceReport {
        n,
        t_n: consts.t_n,
        rho_lower,
        rho_upper,
        rho_exact,
        lambda1_dual: dual_min.lambda1,
        product_bound: bound,
        closed_form_candidate: candidate,
        closed_form_holds: candidate >= consts.t_n,
    })
}

/// C(n) = log(n/2) + (1 + n/2) log(1 + 2/n), the constant in the
/// counting-vs-theta comparison.
pub fn comparison_constant(n: u32) -> f64 {
    assert!(n >= 1);
    let nn = n as f64;
    (nn / 2.0).ln() + (1.0 + nn / 2.0) * (1.0 + 2.0 / nn).ln()
}

/// Report of the comparison inequalities for one lattice.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub n: u32,
    pub h0_theta: f64,
    pub h0_ar_1: f64,
    pub lower_slack: f64,
    pub upper_slack: f64,
    pub sampled_x: Vec<(f64, f64, f64)>,
}

/// Check the two-sided bracket at t = 1, the sampled inequality
/// log theta(n/(2 pi x)) <= h0_ar(x) + C(n), and the bounds on C(n).
pub fn comparison_suite(lattice: &EuclideanLattice) -> Result<ComparisonReport> {
    let n = lattice.rank() as u32;
    assert!(n >= 1);
    let nn = n as f64;
    let h0t = h0_theta(lattice)?;
    let h0a = h0_ar(lattice, 1.0)?;

    let lower = h0t - nn / 2.0 * nn.ln() + (1.0 - 1.0 / (2.0 * PI)).ln();
    let upper = h0t + PI;
    if h0a < lower - 1e-9 || h0a > upper + 1e-9 {
        return Err(Error::ViolationDetected(format!(
            "h0_ar(1) = {h0a} outside [{lower}, {upper}] for rank {n}"
        )));
    }

    let cn = comparison_constant(n);
    let gap = cn - (nn / 2.0).ln();
    if !(1.0 - 1e-12..=1.5 * 3f64.ln() + 1e-12).contains(&gap) {
        return Err(Error::ViolationDetected(format!(
            "C(n) - log(n/2) = {gap} outside [1, 1.5 log 3]"
        )));
    }

    let mut sampled = Vec::new();
    for &x in &[0.5, 1.0, 2.0, 4.0] {
        let lhs = theta(lattice, nn / (2.0 * PI * x), 1e-10)?.log_value;
        let rhs = h0_ar(lattice, x)? + cn;
        if lhs > rhs + 1e-9 {
            return Err(Error::ViolationDetected(format!(
                "log theta(n/(2 pi x)) = {lhs} > h0_ar + C(n) = {rhs} at x = {x}"
            )));
        }
        sampled.push((x, lhs, rhs));
    }

    Ok(ComparisonReport {
        n,
        h0_theta: h0t,
        h0_ar_1: h0a,
        lower_slack: h0a - lower,
        upper_slack: upper - h0a,
        sampled_x: sampled,
    })
}

/// Blichfeldt-style bound: for any center x, the closed unit ball around x
/// holds at most e^{h0 + pi} lattice points.
pub fn blichfeldt_check(
    lattice: &EuclideanLattice,
    centers: usize,
    seed: u64,
) -> Result<()> {
    let n = lattice.rank();
    let bound = h0_theta(lattice)? + PI;
    for i in 0..centers {
        let mut rng = SplitMix64::derive(seed ^ 0xb11c, i as u64);
        let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let pts = lattice.enumerate_around(&x, 1.0, DEFAULT_ENUM_CAP)?;
        let count = pts.len().max(1) as f64;
        if count.ln() > bound + 1e-9 {
            return Err(Error::ViolationDetected(format!(
                "ball at {x:?} holds {count} points, log exceeds h0 + pi = {bound}"
            )));
        }
    }
    Ok(())
}

/// First-minimum tail bound: when lambda1 >= sqrt(n/2pi),
/// e^{h0} - 1 <= q/(1-q) with q = psi(lambda1 sqrt(2 pi / n))^n.
pub fn first_minimum_theta_bound(lattice: &EuclideanLattice) -> Result<Option<f64>> {
    let n = lattice.rank();
    assert!(n >= 1);
    let min = lambda1(lattice)?;
    let scaled = min.lambda1 * (2.0 * PI / n as f64).sqrt();
    if scaled < 1.0 {
        return Ok(None);
    }
    let q = psi_transference(scaled).powi(n as i32);
    let bound = q / (1.0 - q);
    let actual = h0_theta(lattice)?.exp() - 1.0;
    if actual > bound * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::ViolationDetected(format!(
            "e^h0 - 1 = {actual} exceeds Gaussian-tail bound {bound}"
        )));
    }
    Ok(Some(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EuclideanLattice;
    use crate::theta::eta0;

    #[test]
    fn lambda1_examples() {
        for n in 1..=4 {
            let z = EuclideanLattice::standard(n);
            let m = lambda1(&z).unwrap();
            assert_eq!(m.multiplicity, 2 * n);
            assert!((m.lambda1 - 1.0).abs() < 1e-12);
        }
        let a2 = EuclideanLattice::hexagonal();
        let m = lambda1(&a2).unwrap();
        assert_eq!(m.multiplicity, 6);
        assert!((m.normsq - 1.0).abs() < 1e-12);

        let o = EuclideanLattice::standard(1).rescale(0.8);
        let m = lambda1(&o).unwrap();
        assert!((m.lambda1 - (-0.8f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn h0_ar_examples() {
        let z2 = EuclideanLattice::standard(2);
        assert!((h0_ar(&z2, 1.0).unwrap() - 5f64.ln()).abs() < 1e-12);
        let a2 = EuclideanLattice::hexagonal();
        assert!((h0_ar(&a2, 1.0).unwrap() - 7f64.ln()).abs() < 1e-12);
        // open variant drops the boundary shell
        assert!((h0_ar_open(&z2, 1.0).unwrap() - 1f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn counterexample_family_counts() {
        // lambda = 2: total holds >= 5 points, sub exactly 1, quotient <= 3
        let e = EuclideanLattice::perturbed_hexagonal(2.0).unwrap();
        let seq = crate::lattice::AdmissibleSequence::new(
            &e,
            &crate::intmat::IMat::from_rows(&[vec![1], vec![0]]),
        )
        .unwrap();
        assert!(h0_ar(&e, 1.0).unwrap() >= 5f64.ln() - 1e-12);
        assert_eq!(h0_ar(&seq.sub, 1.0).unwrap(), 0.0);
        assert!(h0_ar(&seq.quotient, 1.0).unwrap() <= 3f64.ln() + 1e-12);
        // strict failure of subadditivity for the counting invariant
        assert!(
            h0_ar(&e, 1.0).unwrap()
                > h0_ar(&seq.sub, 1.0).unwrap() + h0_ar(&seq.quotient, 1.0).unwrap() + 0.4
        );
    }

    #[test]
    fn counting_profile_cumulative() {
        let z2 = EuclideanLattice::standard(2);
        let p = CountingProfile::build(&z2, 4.0).unwrap();
        assert_eq!(p.count_at(0.0), 1);
        assert_eq!(p.count_at(1.0), 5);
        assert_eq!(p.count_at(2.0), 9);
        assert_eq!(p.count_at(4.5), p.count_at(4.0));
        for w in p.counts.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn covering_radius_rank_one_two() {
        let z = EuclideanLattice::standard(1);
        let (lo, hi) = covering_radius_interval(&z, 10, 1).unwrap();
        assert!((lo - 0.5).abs() < 1e-12 && (hi - 0.5).abs() < 1e-12);

        let z2 = EuclideanLattice::standard(2);
        let (lo, hi) = covering_radius_interval(&z2, 10, 1).unwrap();
        assert!((lo - 2f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((hi - lo).abs() < 1e-12);

        let a2 = EuclideanLattice::hexagonal();
        let (lo, _) = covering_radius_interval(&a2, 10, 1).unwrap();
        assert!((lo - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn covering_radius_a2_grid_oracle() {
        // dense grid over the fundamental cell, resolution 1e-3
        let a2 = EuclideanLattice::hexagonal();
        let mut best: f64 = 0.0;
        let steps = 1000;
        for i in 0..steps {
            for j in 0..steps {
                let x = [i as f64 / steps as f64, j as f64 / steps as f64];
                let rounded = [x[0].round(), x[1].round()];
                // CVP by scanning the 9 nearby lattice points
                let mut d2 = f64::INFINITY;
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        let v = [rounded[0] + dx as f64 - x[0], rounded[1] + dy as f64 - x[1]];
                        d2 = d2.min(a2.gram().quad_form(&v, &v));
                    }
                }
                best = best.max(d2);
            }
        }
        assert!((best.sqrt() - 1.0 / 3f64.sqrt()).abs() < 2e-3);
        assert!(
            (covering_radius_exact_low_rank(&a2).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12
        );
    }

    #[test]
    fn cvp_exactness_small() {
        let z3 = EuclideanLattice::standard(3);
        let d2 = cvp_distance2(&z3, &[0.5, 0.5, 0.5]).unwrap();
        assert!((d2 - 0.75).abs() < 1e-12);
        let d2 = cvp_distance2(&z3, &[0.25, 0.0, 0.0]).unwrap();
        assert!((d2 - 0.0625).abs() < 1e-12);
        assert_eq!(cvp_distance2(&z3, &[1.0, 2.0, -3.0]).unwrap(), 0.0);
    }

    #[test]
    fn covering_radius_z3_sampled() {
        // true rho = sqrt(3)/2; a seeded run must get close from below
        let z3 = EuclideanLattice::standard(3);
        let (lo, hi) = covering_radius_interval(&z3, 10_000, 3).unwrap();
        assert!(lo <= 3f64.sqrt() / 2.0 + 1e-12);
        assert!(lo >= 0.85, "seeded lower bound came out at {lo}");
        assert!(hi >= 3f64.sqrt() / 2.0 - 1e-12);
    }

    #[test]
    fn transference_constants() {
        let t2 = TransferenceConstants::new(2);
        assert!((t2.t_n - 1.8135).abs() < 1e-3);
        assert!((psi_transference(t2.t_n) - 3f64.powf(-0.5)).abs() < 1e-12);
        assert!((t2.product_bound() - 1.0468).abs() < 1e-3);

        let t1 = TransferenceConstants::new(1);
        assert!((psi_transference(t1.t_n) - 1.0 / 3.0).abs() < 1e-12);
        assert!(t1.t_n > 1.0);

        // the closed-form candidate undershoots t_n for small n ...
        assert!(t1.closed_form_candidate() < t1.t_n);
        assert!(t2.closed_form_candidate() < t2.t_n);
        // ... while the asymptotic shape t_n ~ 1 + sqrt(log3/n) still holds
        let t64 = TransferenceConstants::new(64);
        assert!((t64.t_n - t64.closed_form_candidate()).abs() < 0.02);
    }

    #[test]
    fn transference_reports() {
        for l in [
            EuclideanLattice::standard(1),
            EuclideanLattice::standard(2),
            EuclideanLattice::hexagonal(),
        ] {
            let r = transference_check(&l, 50, 9).unwrap();
            let rho = r.rho_exact.unwrap();
            let product = rho * r.lambda1_dual;
            assert!(product >= 0.5 - 1e-12);
            assert!(product <= r.product_bound + 1e-12);
            assert!(!r.closed_form_holds);
        }
        // A2: rho lambda1(dual) = (1/sqrt3)(2/sqrt3) = 2/3
        let a2 = EuclideanLattice::hexagonal();
        let r = transference_check(&a2, 10, 1).unwrap();
        let product = r.rho_exact.unwrap() * r.lambda1_dual;
        assert!((product - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn comparison_constants_and_suite() {
        // C(2) = 2 log 2
        assert!((comparison_constant(2) - 2.0 * 2f64.ln()).abs() < 1e-14);
        let gap = comparison_constant(2) - 1f64.ln();
        assert!((1.0..=1.5 * 3f64.ln()).contains(&gap));

        // Z: log 3 in [eta0 + log(1 - 1/2pi), eta0 + pi]
        let z = EuclideanLattice::standard(1);
        let r = comparison_suite(&z).unwrap();
        assert!((r.h0_ar_1 - 3f64.ln()).abs() < 1e-12);
        assert!(3f64.ln() >= eta0() + (1.0 - 1.0 / (2.0 * PI)).ln() - 1e-12);
        assert!(3f64.ln() <= eta0() + PI + 1e-12);

        comparison_suite(&EuclideanLattice::hexagonal()).unwrap();
        comparison_suite(&EuclideanLattice::standard(3)).unwrap();
    }

    #[test]
    fn superadditivity_instance() {
        let a2 = EuclideanLattice::hexagonal();
        let z = EuclideanLattice::standard(1);
        let sum = a2.direct_sum(&z);
        for &(t1, t2) in &[(0.5, 0.5), (1.0, 2.0), (2.5, 0.3)] {
            let lhs = h0_ar(&a2, t1).unwrap() + h0_ar(&z, t2).unwrap();
            let rhs = h0_ar(&sum, t1 + t2).unwrap();
            assert!(lhs <= rhs + 1e-12, "t1={t1} t2={t2}");
        }
    }

    #[test]
    fn blichfeldt_and_first_minimum_bounds() {
        blichfeldt_check(&EuclideanLattice::hexagonal(), 20, 4).unwrap();
        blichfeldt_check(&EuclideanLattice::standard(3), 20, 4).unwrap();

        // lambda1 = e^{1} after shrinking Z by delta = -1: bound applies
        let long = EuclideanLattice::standard(1).rescale(-1.0);
        let bound = first_minimum_theta_bound(&long).unwrap();
        assert!(bound.is_some());
        // Z^4 has lambda1 = 1 > sqrt(4/2pi) = 0.797..., bound applies too
        assert!(first_minimum_theta_bound(&EuclideanLattice::standard(4))
            .unwrap()
            .is_some());
    }
}

//! Randomized property suites shared by the `verify` subcommand and the
//! acceptance tests. Every suite is deterministic for a fixed seed and
//! returns the first violation it finds, with witness data in the error.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ext;
use crate::intmat::{smith_normal_form, IMat};
use crate::lattice::{size_reduce, AdmissibleSequence, EuclideanLattice};
use crate::linalg::Mat;
use crate::profile;
use crate::rng::SplitMix64;
use crate::theta::{self, h0_theta, h1_theta, tau, theta};
use crate::thermo;
use crate::{prolim, siegel};

/// A conditioned random SPD lattice of the given rank: random Cholesky
/// factor with bounded diagonal, then a few size-reduction sweeps.
pub fn random_lattice(rng: &mut SplitMix64, rank: usize) -> EuclideanLattice {
    let mut l = Mat::zeros(rank, rank);
    for i in 0..rank {
        for j in 0..i {
            l[(i, j)] = rng.next_range(-0.5, 0.5);
        }
        l[(i, i)] = rng.next_range(0.6, 1.5);
    }
    let g = l.matmul(&l.transpose());
    size_reduce(&EuclideanLattice::from_gram(g).expect("LL^T is SPD"), 4)
}

/// A random admissible sequence on a conditioned lattice: saturated
/// sub-basis with entries in [-2, 2], re-drawn until saturated.
pub fn random_admissible_sequence(
    rng: &mut SplitMix64,
    rank: usize,
    sub_rank: usize,
) -> AdmissibleSequence {
    let total = random_lattice(rng, rank);
    loop {
        let mut rows = Vec::with_capacity(rank);
        for _ in 0..rank {
            rows.push((0..sub_rank).map(|_| rng.next_below(5) as i64 - 2).collect());
        }
        let sub = IMat::from_rows(&rows);
        let snf = smith_normal_form(&sub);
        let divs = snf.divisors();
        if divs.len() == sub_rank && divs.iter().all(|&d| d == 1) {
            if let Ok(seq) = AdmissibleSequence::new(&total, &sub) {
                return seq;
            }
        }
    }
}

fn violation(msg: String) -> Error {
    Error::ViolationDetected(msg)
}

/// Duality, enumeration, direct sums, admissible degree additivity.
pub fn suite_lattice(trials: usize, seed: u64) -> Result<()> {
    let mut rng = SplitMix64::derive(seed, 1);
    for trial in 0..trials {
        let rank = 1 + (rng.next_below(4) as usize);
        let l = random_lattice(&mut rng, rank);
        if (l.dual().degree() + l.degree()).abs() > 1e-9 {
            return Err(violation(format!(
                "deg(dual) != -deg at trial {trial}: gram {:?}",
                l.gram()
            )));
        }
        let other_rank = 1 + (rng.next_below(3) as usize);
        let other = random_lattice(&mut rng, other_rank);
        let sum = l.direct_sum(&other);
        if (sum.degree() - l.degree() - other.degree()).abs() > 1e-9 {
            return Err(violation(format!("direct-sum degree not additive at {trial}")));
        }
        if rank >= 2 {
            let sub_rank = 1 + rng.next_below(rank as u64 - 1) as usize;
            let seq = random_admissible_sequence(&mut rng, rank, sub_rank);
            if seq.degree_residual().abs() > 1e-9 {
                return Err(violation(format!(
                    "admissible degree additivity off by {} at {trial}",
                    seq.degree_residual()
                )));
            }
        }
    }
    Ok(())
}

/// Poisson-Riemann-Roch, additivity, monotonicity, the twist bound, the
/// functional equation, and the near-origin mass bound.
pub fn suite_theta(trials: usize, seed: u64) -> Result<()> {
    let mut rng = SplitMix64::derive(seed, 2);
    for k in -10..=10 {
        let x = 2f64.powi(k);
        if (tau(x) - tau(1.0 / x) + 0.5 * x.ln()).abs() > 1e-12 {
            return Err(violation(format!("tau functional equation fails at x = {x}")));
        }
    }
    for trial in 0..trials {
        let rank = 1 + (rng.next_below(6) as usize);
        let l = random_lattice(&mut rng, rank);
        let residual = theta::poisson_rr_check(&l)?;
        if residual.abs() > 1e-8 {
            return Err(violation(format!(
                "Poisson RR residual {residual:e} at trial {trial}, gram {:?}",
                l.gram()
            )));
        }

        // additivity on a random pair
        if trial % 4 == 0 {
            let other_rank = 1 + (rng.next_below(4) as usize);
            let other = random_lattice(&mut rng, other_rank);
            let sum = l.direct_sum(&other);
            let lhs = h0_theta(&sum)?;
            let rhs = h0_theta(&l)? + h0_theta(&other)?;
            if (lhs - rhs).abs() > 1e-8 {
                return Err(violation(format!("h0 additivity off by {}", lhs - rhs)));
            }
            let lhs1 = h1_theta(&sum)?;
            let rhs1 = h1_theta(&l)? + h1_theta(&other)?;
            if (lhs1 - rhs1).abs() > 1e-8 {
                return Err(violation(format!("h1 additivity off by {}", lhs1 - rhs1)));
            }
        }

        // finite-index monotonicity: scale one basis vector by m
        if trial % 4 == 1 {
            let m = 2 + rng.next_below(3) as i64;
            let mut d = Mat::zeros(rank, rank);
            for i in 0..rank {
                d[(i, i)] = if i == 0 { m as f64 } else { 1.0 };
            }
            let sub_gram = d.transpose().matmul(&l.gram().matmul(&d));
            let sub = EuclideanLattice::from_gram(sub_gram)?;
            let (he, hf) = (h0_theta(&sub)?, h0_theta(&l)?);
            if !(he <= hf + 1e-9 && hf <= he + (m as f64).ln() + 1e-9) {
                return Err(violation(format!(
                    "index-{m} monotonicity fails: h0(sub) = {he}, h0 = {hf}"
                )));
            }
        }

        // twist bound 0 <= h0(L) - h0(L shrunk by delta) <= n delta
        if trial % 4 == 2 {
            let delta = rng.next_range(0.0, 1.5);
            let diff = h0_theta(&l)? - h0_theta(&l.rescale(-delta))?;
            if diff < -1e-9 || diff > rank as f64 * delta + 1e-9 {
                return Err(violation(format!("twist bound fails: diff {diff}, delta {delta}")));
            }
        }

        // functional equation at t in {1/4, 1, 4}
        if trial % 4 == 3 && rank <= 5 {
            let dual = l.dual();
            for &t in &[0.25, 1.0, 4.0] {
                let lhs = theta(&l, t, 1e-11)?.log_value;
                let rhs = -(rank as f64) / 2.0 * t.ln()
                    + l.degree()
                    + theta(&dual, 1.0 / t, 1e-11)?.log_value;
                if (lhs - rhs).abs() > 2e-10 {
                    return Err(violation(format!(
                        "functional equation off by {} at t = {t}",
                        lhs - rhs
                    )));
                }
            }
        }

        // near-origin mass: sum_{|v| < r} >= (1 - n/(2 pi t r^2)) theta(t)
        if trial % 8 == 5 {
            let t = rng.next_range(0.5, 2.0);
            let r2 = rng.next_range(1.0, 4.0);
            if 2.0 * PI * t * r2 > rank as f64 {
                let total = theta(&l, t, 1e-11)?.value;
                let near: f64 = l
                    .enumerate(r2)?
                    .iter()
                    .filter(|p| p.normsq < r2)
                    .map(|p| (-PI * t * p.normsq).exp())
                    .sum();
                let floor = (1.0 - rank as f64 / (2.0 * PI * t * r2)) * total;
                if near < floor * (1.0 - 1e-9) - 1e-12 {
                    return Err(violation(format!(
                        "near-origin mass {near} below floor {floor}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Counting-vs-theta comparisons, Blichfeldt centers, superadditivity, the
/// first-minimum bound, and exact-rho transference on random rank-2
/// lattices.
pub fn suite_profile(trials: usize, seed: u64) -> Result<()> {
    let mut rng = SplitMix64::derive(seed, 3);
    for trial in 0..trials {
        let rank = 1 + (rng.next_below(4) as usize);
        let l = random_lattice(&mut rng, rank);
        profile::comparison_suite(&l)?;
        if trial % 5 == 0 {
            profile::blichfeldt_check(&l, 20, seed ^ trial as u64)?;
        }
        if trial % 5 == 1 {
            let other_rank = 1 + (rng.next_below(3) as usize);
            let other = random_lattice(&mut rng, other_rank);
            let (t1, t2) = (rng.next_range(0.3, 2.0), rng.next_range(0.3, 2.0));
            let lhs = profile::h0_ar(&l, t1)? + profile::h0_ar(&other, t2)?;
            let rhs = profile::h0_ar(&l.direct_sum(&other), t1 + t2)?;
            if lhs > rhs + 1e-12 {
                return Err(violation(format!("superadditivity fails: {lhs} > {rhs}")));
            }
        }
        if trial % 5 == 2 {
            profile::first_minimum_theta_bound(&l)?;
        }
    }
    // exact-rho transference on random rank-2 lattices
    for trial in 0..50 {
        let l = random_lattice(&mut rng, 2);
        let report = profile::transference_check(&l, 8, seed ^ (trial as u64) << 8)?;
        let rho = report.rho_exact.expect("rank 2 has exact rho");
        let product = rho * report.lambda1_dual;
        if product < 0.5 - 1e-9 || product > report.product_bound + 1e-9 {
            return Err(violation(format!(
                "transference product {product} outside [0.5, {}]",
                report.product_bound
            )));
        }
    }
    Ok(())
}

/// Subadditivity defects, alternating chains, and Gext properties on random
/// admissible sequences.
pub fn suite_extensions(trials: usize, seed: u64) -> Result<()> {
    let mut rng = SplitMix64::derive(seed, 4);
    for trial in 0..trials {
        let rank = 2 + (rng.next_below(4) as usize);
        let sub_rank = 1 + rng.next_below((rank as u64 - 1).min(3)) as usize;
        let seq = random_admissible_sequence(&mut rng, rank, sub_rank);
        let defect = ext::h_theta_defect(&seq)?;
        if defect < -2e-9 {
            return Err(violation(format!(
                "negative defect {defect} at trial {trial} (rank {rank}, sub {sub_rank})"
            )));
        }
        ext::check_alternating_chain(&seq, 5e-9)?;
    }
    // orthogonal splits have defect 0
    for rank in 2..=4 {
        let mut g = Mat::zeros(rank, rank);
        for i in 0..rank {
            g[(i, i)] = 0.5 + 0.5 * (i as f64 + 1.0);
        }
        let l = EuclideanLattice::from_gram(g)?;
        let mut rows = vec![vec![0i64]; rank];
        rows[0][0] = 1;
        let seq = AdmissibleSequence::new(&l, &IMat::from_rows(&rows))?;
        let (defect, split) = ext::defect_report(&seq)?;
        if !split {
            return Err(violation(format!("orthogonal split has defect {defect}")));
        }
    }
    // Gext: periodicity, maximum at zero, dual-series agreement
    let z = EuclideanLattice::standard(1);
    let g0 = ext::gext(&z, &z, &ext::ExtensionPoint::zero(1, 1), 1e-12)?;
    for trial in 0..8 {
        let tv = rng.next_range(-1.0, 1.0);
        let pt = ext::ExtensionPoint::new(Mat::from_rows(&[vec![tv]]));
        let shifted = ext::ExtensionPoint::new(Mat::from_rows(&[vec![tv + 2.0]]));
        let a = ext::gext(&z, &z, &pt, 1e-12)?;
        let b = ext::gext(&z, &z, &shifted, 1e-12)?;
        let c = ext::gext_dual_series(&z, &z, &pt, 1e-12)?;
        if (a - b).abs() > 1e-9 * a || a > g0 * (1.0 + 1e-12) || (a - c).abs() > 1e-9 * a {
            return Err(violation(format!("Gext properties fail at T = {tv}, trial {trial}")));
        }
    }
    Ok(())
}

/// Legendre duality round trips, monotone diffeomorphisms, the second law,
/// and the asymptotic comparison bracket.
pub fn suite_thermo(seed: u64) -> Result<()> {
    for l in [EuclideanLattice::standard(1), EuclideanLattice::hexagonal()] {
        let space = thermo::from_lattice(&l, 0.125, 1e-12)?;
        for &beta in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let (sup, _) = thermo::legendre_sup(&space, beta)?;
            let psi = space.psi(beta)?;
            if (sup - psi).abs() > 1e-6 {
                return Err(violation(format!(
                    "Legendre round trip off by {} at beta {beta}",
                    sup - psi
                )));
            }
            let u = space.energy_u(beta)?;
            let s = thermo::entropy_s(&space, u)?;
            if (s.beta - beta).abs() > 1e-6 * beta {
                return Err(violation(format!(
                    "S'(U(beta)) = {} != beta = {beta}",
                    s.beta
                )));
            }
        }
    }
    // comparison bracket on random lattices
    let mut rng = SplitMix64::derive(seed, 5);
    for _ in 0..5 {
        let rank = 1 + rng.next_below(3) as usize;
        let l = random_lattice(&mut rng, rank);
        let n = rank as f64;
        for &x in &[0.5, 1.0, 2.0] {
            let naive = profile::h0_ar(&l, x)?;
            let tilde = thermo::htilde0_ar(&l, x)?;
            let logtheta = theta(&l, n / (2.0 * PI * x), 1e-10)?.log_value;
            if naive > tilde + 1e-9
                || logtheta > tilde + 1e-9
                || tilde > logtheta + n / 2.0 + 1e-9
                || logtheta > naive + profile::comparison_constant(rank as u32) + 1e-9
            {
                return Err(violation(format!(
                    "comparison bracket fails at x = {x}, rank {rank}"
                )));
            }
        }
    }
    // second law with symmetric argmax
    let z = EuclideanLattice::standard(1);
    let (best, argmax) = thermo::second_law_split(&z, &z, 1.0, 1e-4)?;
    let whole = thermo::htilde0_ar(&EuclideanLattice::standard(2), 1.0)?;
    if (best - whole).abs() > 1e-4 || (argmax - 0.5).abs() > 2e-4 {
        return Err(violation(format!(
            "second law: split max {best} vs whole {whole}, argmax {argmax}"
        )));
    }
    Ok(())
}

/// Closed-form limits, level monotonicity, summability flags, and the
/// finiteness criterion for diagonal families.
pub fn suite_prolim() -> Result<()> {
    let fam = prolim::DiagonalProFamily::Explicit((0..8).map(|i| 4f64.powi(i)).collect());
    let sys = fam.truncate(8)?;
    let lim = prolim::limit_h0(&sys)?;
    let closed = fam.closed_form_limit(1e-14);
    if (lim.estimate - closed).abs() > 1e-9 {
        return Err(violation(format!(
            "diagonal closed form off by {}",
            lim.estimate - closed
        )));
    }
    let mut acc = 0.0;
    let mut prev = f64::INFINITY;
    for (k, &h) in lim.level_h0.iter().enumerate() {
        let value = h - acc;
        if value > prev + 1e-9 {
            return Err(violation(format!("level value increases at {k}")));
        }
        prev = value;
        if k < lim.kernel_h0.len() {
            acc += lim.kernel_h0[k];
            if lim.level_h0[k + 1] > lim.level_h0[k] + lim.kernel_h0[k] + 1e-9 {
                return Err(violation(format!("level subadditivity fails at {k}")));
            }
        }
    }
    // finiteness on both sides of R = 1
    if prolim::hardy_invariant(1.0, 2.0, 1e-12).is_finite() {
        return Err(violation("h(1, delta) should be infinite".into()));
    }
    if !prolim::hardy_invariant(1.5, 2.0, 1e-12).is_finite() {
        return Err(violation("h(1.5, delta) should be finite".into()));
    }
    // summability flag on the divergent constant family
    let constant = prolim::DiagonalProFamily::Explicit(vec![1.0; 6]).truncate(6)?;
    let report = prolim::summability_report(&constant, 0.1)?;
    if report.strongly_summable_hint {
        return Err(violation("constant family flagged summable".into()));
    }
    Ok(())
}

/// Determinant exactness, small-delta light tails, and comparison
/// witnesses for the rank-2 Siegel sampler.
pub fn suite_siegel(samples: usize, seed: u64) -> Result<()> {
    for i in 0..1000 {
        let (l, p) = siegel::sample_lattice2(seed, i, 0.7);
        if !p.is_in_fundamental_domain() {
            return Err(violation(format!("sample {i} left the fundamental domain")));
        }
        let det = l.gram()[(0, 0)] * l.gram()[(1, 1)] - l.gram()[(0, 1)] * l.gram()[(1, 0)];
        if (det - (-1.4f64).exp()).abs() > 1e-12 * (-1.4f64).exp() {
            return Err(violation(format!("determinant drift at sample {i}")));
        }
    }
    // both averages approach 1 as delta -> -infty
    let n = samples.max(2000);
    let h0 = siegel::siegel_average_h0theta(-8.0, n, seed)?;
    let ct = siegel::siegel_average_count(-8.0, 1.0, n, seed ^ 1)?;
    let scale = (-8f64).exp();
    if (h0.estimate - 1.0).abs() > 40.0 * scale || (ct.estimate - 1.0).abs() > 40.0 * PI * scale {
        return Err(violation(format!(
            "small-delta expansions off: {} and {}",
            h0.estimate, ct.estimate
        )));
    }
    let (ge, le) = siegel::comparison_witness_frequencies(0.0, 1.0, 1500, seed ^ 2)?;
    if ge <= 0.0 || le <= 0.0 {
        return Err(violation(format!("comparison witnesses missing: ge {ge}, le {le}")));
    }
    Ok(())
}

/// Named suite dispatch used by the CLI.
pub fn run_suite(name: &str, trials: usize, seed: u64) -> Result<()> {
    match name {
        "lattice" => suite_lattice(trials, seed),
        "theta" => suite_theta(trials, seed),
        "profile" => suite_profile(trials, seed),
        "extensions" => suite_extensions(trials, seed),
        "thermo" => suite_thermo(seed),
        "prolim" => suite_prolim(),
        "siegel" => suite_siegel(trials.max(2000), seed),
        "all" => {
            suite_lattice(trials, seed)?;
            suite_theta(trials, seed)?;
            suite_profile(trials, seed)?;
            suite_extensions(trials, seed)?;
            suite_thermo(seed)?;
            suite_prolim()?;
            suite_siegel(trials.max(2000), seed)
        }
        other => Err(Error::DomainError(format!("unknown suite '{other}'"))),
    }
}

pub const SUITE_NAMES: [&str; 8] = [
    "lattice",
    "theta",
    "profile",
    "extensions",
    "thermo",
    "prolim",
    "siegel",
    "all",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        suite_lattice(20, 7).unwrap();
        suite_theta(24, 7).unwrap();
        suite_extensions(10, 7).unwrap();
        suite_prolim().unwrap();
    }

    #[test]
    fn profile_suite_passes() {
        suite_profile(15, 7).unwrap();
    }

    #[test]
    fn thermo_suite_passes() {
        suite_thermo(7).unwrap();
    }

    #[test]
    fn random_sequences_are_valid() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let seq = random_admissible_sequence(&mut rng, 4, 2);
            assert!(seq.degree_residual().abs() < 1e-9);
        }
    }
}

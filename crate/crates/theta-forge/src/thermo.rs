//! Log-Laplace / energy / entropy formalism on weighted energy spaces, and
//! its lattice specialization: the asymptotic counting invariant.
//!
//! A weighted energy space is a truncated countable measure space: atoms
//! (weight w, energy H). Its log-Laplace transform is
//!
//!   Psi(beta) = log sum w e^{-beta H},
//!
//! the energy U = -Psi' is a decreasing diffeomorphism, and the entropy
//!
//!   S(x) = inf_{beta > 0} (beta x + Psi(beta))
//!
//! is its concave Legendre dual, with the infimum attained at the unique
//! beta with U(beta) = x.
//!
//! For a lattice E with atoms (1, pi |v|^2), Psi(beta) = log theta_E(beta)
//! and S(pi t) equals the Fekete limit of (1/n) log #{(v_1..v_n) :
//! sum |v_i|^2 <= n t} — the asymptotic counting invariant computed by
//! [`htilde0_ar`]. The dynamic-programming oracle [`fekete_oracle`] computes
//! the finite-n terms of that limit exactly on integer-scaled energies.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::EuclideanLattice;
use crate::rng::SplitMix64;
use crate::theta;

/// Truncated countable measure space with a nonnegative energy function.
#[derive(Debug, Clone)]
pub struct WeightedEnergySpace {
    /// (weight, energy), weights > 0, sorted by energy ascending.
    atoms: Vec<(f64, f64)>,
    /// Smallest beta at which the truncation is certified.
    beta_min: f64,
    /// Relative bound on the Psi-mass omitted by the truncation at beta_min.
    tail_certificate: Option<f64>,
}

impl WeightedEnergySpace {
    pub fn new(mut atoms: Vec<(f64, f64)>, beta_min: f64, tail_certificate: Option<f64>) -> Self {
        assert!(!atoms.is_empty(), "need at least one atom");
        for &(w, h) in &atoms {
            assert!(w > 0.0, "weights must be positive");
            assert!(h >= 0.0, "energies must be nonnegative");
        }
        atoms.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        WeightedEnergySpace { atoms, beta_min, tail_certificate }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn beta_min(&self) -> f64 {
        self.beta_min
    }

    pub fn tail_certificate(&self) -> Option<f64> {
        self.tail_certificate
    }

    /// Essential infimum of the energy.
    pub fn min_energy(&self) -> f64 {
        self.atoms[0].1
    }

    fn check_beta(&self, beta: f64) -> Result<()> {
        if beta < self.beta_min * (1.0 - 1e-12) {
            return Err(Error::BetaBelowCertified { beta, beta_min: self.beta_min });
        }
        Ok(())
    }

    /// Psi(beta) = log sum w e^{-beta H}, evaluated stably.
    pub fn psi(&self, beta: f64) -> Result<f64> {
        self.check_beta(beta)?;
        let e0 = self.min_energy();
        let mut s = 0.0;
        for &(w, h) in &self.atoms {
            s += w * (-beta * (h - e0)).exp();
        }
        Ok(-beta * e0 + s.ln())
    }

    /// U(beta) = -Psi'(beta): Gibbs mean of the energy.
    pub fn energy_u(&self, beta: f64) -> Result<f64> {
        self.check_beta(beta)?;
        let e0 = self.min_energy();
        let (mut num, mut den) = (0.0, 0.0);
        for &(w, h) in &self.atoms {
            let g = w * (-beta * (h - e0)).exp();
            num += g * h;
            den += g;
        }
        Ok(num / den)
    }

    /// Gibbs variance of the energy: -U'(beta).
    fn energy_variance(&self, beta: f64) -> f64 {
        let e0 = self.min_energy();
        let (mut m1, mut m2, mut den) = (0.0, 0.0, 0.0);
        for &(w, h) in &self.atoms {
            let g = w * (-beta * (h - e0)).exp();
            m1 += g * h;
            m2 += g * h * h;
            den += g;
        }
        let mean = m1 / den;
        (m2 / den - mean * mean).max(0.0)
    }

    /// Product space: atoms (w_a w_b, H_a + H_b), energies merged.
    pub fn product(&self, other: &WeightedEnergySpace) -> WeightedEnergySpace {
        let mut merged: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
        for &(wa, ha) in &self.atoms {
            for &(wb, hb) in &other.atoms {
                let h = ha + hb;
                let key = h.to_bits();
                let entry = merged.entry(key).or_insert((0.0, h));
                entry.0 += wa * wb;
            }
        }
        let atoms: Vec<(f64, f64)> = merged.into_values().collect();
        let tail = match (self.tail_certificate, other.tail_certificate) {
            (Some(a), Some(b)) => Some((1.0 + a) * (1.0 + b) - 1.0),
            (a, b) => a.or(b),
        };
        WeightedEnergySpace::new(atoms, self.beta_min.max(other.beta_min), tail)
    }
}

/// Atoms (multiplicity, pi |v|^2) of a lattice, truncated so that the
/// Psi-mass omitted at `beta_min` is at most `tol` relative (Gaussian tail
/// certificate on the rescaled lattice).
pub fn from_lattice(
    lattice: &EuclideanLattice,
    beta_min: f64,
    tol: f64,
) -> Result<WeightedEnergySpace> {
    assert!(beta_min > 0.0);
    assert!(tol > 0.0 && tol < 0.5);
    if lattice.rank() == 0 {
        return Ok(WeightedEnergySpace::new(vec![(1.0, 0.0)], beta_min, Some(0.0)));
    }
    let result = theta::theta(lattice, beta_min, tol)?;
    let points = lattice.enumerate(result.truncation_radius2)?;
    let mut shells: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for p in &points {
        let h = PI * p.normsq;
        let entry = shells.entry(h.to_bits()).or_insert((0.0, h));
        entry.0 += 1.0;
    }
    Ok(WeightedEnergySpace::new(
        shells.into_values().collect(),
        beta_min,
        Some(result.rel_error),
    ))
}

/// Entropy value with its critical inverse temperature.
#[derive(Debug, Clone, Copy)]
pub struct EntropyResult {
    pub s: f64,
    pub beta: f64,
}

/// S(x) = inf_{beta >= beta_min} (beta x + Psi(beta)), found by bisection
/// on U(beta) = x followed by a Newton polish. Requires x strictly between
/// the minimal energy and U(beta_min).
pub fn entropy_s(space: &WeightedEnergySpace, x: f64) -> Result<EntropyResult> {
    let e0 = space.min_energy();
    if x <= e0 {
        return Err(Error::XBelowInfimum { x, infimum: e0 });
    }
    let mut lo = space.beta_min();
    if space.energy_u(lo)? < x {
        return Err(Error::BetaBelowCertified { beta: lo, beta_min: lo });
    }
    let mut hi = lo.max(1e-8);
    while space.energy_u(hi)? > x {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::XBelowInfimum { x, infimum: e0 });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if space.energy_u(mid)? > x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..6 {
        let var = space.energy_variance(beta);
        if var <= 0.0 {
            break;
        }
        let step = (space.energy_u(beta)? - x) / var;
        let next = beta + step;
        if next > 0.0 && next.is_finite() {
            beta = next.max(space.beta_min());
        } else {
            break;
        }
    }
    Ok(EntropyResult { s: beta * x + space.psi(beta)?, beta })
}

/// sup_x (S(x) - beta x) over the admissible energy range, by golden
/// section; recovers Psi(beta) by Legendre duality. Returns (sup, argmax).
pub fn legendre_sup(space: &WeightedEnergySpace, beta: f64) -> Result<(f64, f64)> {
    let e0 = space.min_energy();
    let hi_x = space.energy_u(space.beta_min())?;
    let lo_x = e0 + 1e-9 * (hi_x - e0);
    let phi = |x: f64| -> Result<f64> { Ok(entropy_s(space, x)?.s - beta * x) };
    let inv_gold = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo_x, hi_x * (1.0 - 1e-12));
    let mut c = b - inv_gold * (b - a);
    let mut d = a + inv_gold * (b - a);
    let mut fc = phi(c)?;
    let mut fd = phi(d)?;
    for _ in 0..300 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_gold * (b - a);
            fc = phi(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_gold * (b - a);
            fd = phi(d)?;
        }
        if b - a < 1e-12 * b.abs().max(1.0) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    Ok((phi(x)?, x))
}

/// The asymptotic counting invariant: htilde0_ar(E, t) = S_E(pi t) where
/// S_E is the entropy of the lattice energy space. Increasing and concave
/// in t.
pub fn htilde0_ar(lattice: &EuclideanLattice, t: f64) -> Result<f64> {
    Ok(htilde0_ar_detailed(lattice, t)?.s)
}

/// As [`htilde0_ar`] but also returning the critical beta.
pub fn htilde0_ar_detailed(lattice: &EuclideanLattice, t: f64) -> Result<EntropyResult> {
    assert!(t > 0.0);
    assert!(lattice.rank() >= 1);
    let x = PI * t;
    // U(beta) <= n/(2 beta), so the critical beta is at most n/(2 pi t);
    // shrink beta_min until the target is inside the certified range.
    let n = lattice.rank() as f64;
    let mut beta_min = (n / (2.0 * PI * t) / 4.0).min(1.0);
    for _ in 0..60 {
        let space = from_lattice(lattice, beta_min, 1e-12)?;
        if space.energy_u(beta_min)? > x {
            return entropy_s(&space, x);
        }
        beta_min *= 0.5;
    }
    Err(Error::DomainError(format!(
        "could not certify a beta range for htilde0_ar at t = {t}"
    )))
}

/// One step of the dynamic-programming oracle: value of
/// (1/n) log #{(v_1..v_n) : sum |v_i|^2 <= n t} with its bracket width
/// (zero when the energies scale exactly to integers).
#[derive(Debug, Clone, Copy)]
pub struct FeketeStep {
    pub n: u32,
    pub value: f64,
    pub bracket: f64,
}

const DP_CELL_LIMIT: usize = 4_000_000;

/// Finite-n terms of the Fekete limit by convolution of the counting
/// profile over a discretized energy grid. When every |v|^2 times a small
/// integer is an integer the DP is exact; otherwise counts are bracketed
/// between floor- and ceil-rounded energy grids of step 1e-3 t.
pub fn fekete_oracle(
    lattice: &EuclideanLattice,
    t: f64,
    n_max: u32,
) -> Result<Vec<FeketeStep>> {
    assert!(t > 0.0);
    assert!((1..=8).contains(&n_max), "n_max must be in 1..=8");
    let cap = n_max as f64 * t;
    let pts = lattice.enumerate(cap)?;
    let norms: Vec<f64> = pts.iter().map(|p| p.normsq).collect();

    // exact mode: find a small scale making every norm an integer
    let scale = (1..=64u64).find(|&s| {
        norms
            .iter()
            .all(|&e| (e * s as f64 - (e * s as f64).round()).abs() <= 1e-6)
    });

    match scale {
        Some(s) => {
            let cells = (cap * s as f64).round() as usize + 1;
            if cells.saturating_mul(n_max as usize) > DP_CELL_LIMIT {
                return Err(Error::GridOverflow { cells, limit: DP_CELL_LIMIT });
            }
            let mut single = vec![0.0f64; cells];
            for &e in &norms {
                let idx = (e * s as f64).round() as usize;
                if idx < cells {
                    single[idx] += 1.0;
                }
            }
            let mut steps = Vec::new();
            let mut current = single.clone();
            for n in 1..=n_max {
                let cap_idx = ((n as f64 * t * s as f64) + 1e-9).floor() as usize;
                let total: f64 = current.iter().take(cap_idx.min(cells - 1) + 1).sum();
                steps.push(FeketeStep { n, value: total.ln() / n as f64, bracket: 0.0 });
                if n < n_max {
                    current = convolve(&current, &single, cells);
                }
            }
            Ok(steps)
        }
        None => {
            let h = 1e-3 * t;
            let cells = (cap / h).ceil() as usize + 2;
            if cells.saturating_mul(n_max as usize) > DP_CELL_LIMIT {
                return Err(Error::GridOverflow { cells, limit: DP_CELL_LIMIT });
            }
            // floor-rounded energies overcount, ceil-rounded undercount
            let mut lo_grid = vec![0.0f64; cells];
            let mut hi_grid = vec![0.0f64; cells];
            for &e in &norms {
                let fl = (e / h).floor() as usize;
                let cl = (e / h).ceil() as usize;
                if fl < cells {
                    hi_grid[fl] += 1.0;
                }
                if cl < cells {
                    lo_grid[cl] += 1.0;
                }
            }
            let mut steps = Vec::new();
            let (mut cur_lo, mut cur_hi) = (lo_grid.clone(), hi_grid.clone());
            for n in 1..=n_max {
                let cap_idx = ((n as f64 * t / h) + 1e-12).floor() as usize;
                let take = cap_idx.min(cells - 1) + 1;
                let low: f64 = cur_lo.iter().take(take).sum();
                let high: f64 = cur_hi.iter().take(take).sum();
                let v_lo = low.max(1.0).ln() / n as f64;
                let v_hi = high.max(1.0).ln() / n as f64;
                steps.push(FeketeStep { n, value: v_lo, bracket: v_hi - v_lo });
                if n < n_max {
                    cur_lo = convolve(&cur_lo, &lo_grid, cells);
                    cur_hi = convolve(&cur_hi, &hi_grid, cells);
                }
            }
            Ok(steps)
        }
    }
}

fn convolve(a: &[f64], b: &[f64], cells: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; cells];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= cells {
                break;
            }
            if bj != 0.0 {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Report of the Gibbs maximum-entropy check.
#[derive(Debug, Clone)]
pub struct MaxEntropyReport {
    pub gibbs_entropy: f64,
    pub legendre_entropy: f64,
    pub perturbations_tried: usize,
    pub perturbations_nonincreasing: usize,
}

/// Build the Gibbs density at `beta`, verify its information entropy equals
/// S(U(beta)), and check that random energy-preserving perturbations do not
/// increase the entropy.
pub fn max_entropy_check(
    space: &WeightedEnergySpace,
    beta: f64,
    perturbations: usize,
    seed: u64,
) -> Result<MaxEntropyReport> {
    let psi = space.psi(beta)?;
    let u = space.energy_u(beta)?;
    // I(p_beta) = -sum w f log f with log f = -beta H - Psi
    let gibbs_entropy = psi + beta * u;
    let legendre = entropy_s(space, u)?;
    let budget = 1e-8 + space.tail_certificate().unwrap_or(0.0) * (1.0 + gibbs_entropy.abs());
    if (gibbs_entropy - legendre.s).abs() > budget {
        return Err(Error::ViolationDetected(format!(
            "Gibbs entropy {gibbs_entropy} != S(U(beta)) = {} beyond budget {budget}",
            legendre.s
        )));
    }

    // density values on atoms that carry non-negligible mass
    let atoms = space.atoms();
    let f: Vec<f64> = atoms.iter().map(|&(_, h)| (-beta * h - psi).exp()).collect();
    let support: Vec<usize> = (0..atoms.len())
        .filter(|&i| atoms[i].0 * f[i] >= 1e-12)
        .collect();
    let entropy_of = |density: &dyn Fn(usize) -> f64| -> f64 {
        let mut acc = 0.0;
        for (i, &(w, _)) in atoms.iter().enumerate() {
            let fi = density(i);
            if fi > 0.0 {
                acc -= w * fi * fi.ln();
            }
        }
        acc
    };
    let base_entropy = entropy_of(&|i| f[i]);

    let mut nonincreasing = 0usize;
    let mut tried = 0usize;
    if support.len() >= 3 {
        for k in 0..perturbations {
            let mut rng = SplitMix64::derive(seed ^ 0x6d61_7865_6e74, k as u64);
            let mut d = vec![0.0f64; atoms.len()];
            for &i in &support {
                d[i] = rng.next_range(-1.0, 1.0);
            }
            // project onto {sum w d = 0, sum w d H = 0} in the w-weighted
            // inner product
            let ones: Vec<f64> = vec![1.0; atoms.len()];
            let hs: Vec<f64> = atoms.iter().map(|&(_, h)| h).collect();
            let dot = |a: &[f64], b: &[f64]| -> f64 {
                support.iter().map(|&i| atoms[i].0 * a[i] * b[i]).sum()
            };
            // Gram-Schmidt the two constraints
            let n1 = dot(&ones, &ones);
            let mut h_perp: Vec<f64> = hs.clone();
            let proj = dot(&hs, &ones) / n1;
            for &i in &support {
                h_perp[i] -= proj;
            }
            let n2 = dot(&h_perp, &h_perp);
            let c1 = dot(&d, &ones) / n1;
            for &i in &support {
                d[i] -= c1;
            }
            let c2 = if n2 > 0.0 { dot(&d, &h_perp) / n2 } else { 0.0 };
            for &i in &support {
                d[i] -= c2 * h_perp[i];
            }
            // step size keeping the density positive
            let mut eps = f64::INFINITY;
            for &i in &support {
                if d[i] < 0.0 {
                    eps = eps.min(0.4 * f[i] / (-d[i]));
                }
            }
            if !eps.is_finite() || eps <= 0.0 {
                continue;
            }
            tried += 1;
            let perturbed = entropy_of(&|i| f[i] + eps * d[i]);
            if perturbed <= base_entropy + 1e-12 {
                nonincreasing += 1;
            }
        }
    }

    Ok(MaxEntropyReport {
        gibbs_entropy,
        legendre_entropy: legendre.s,
        perturbations_tried: tried,
        perturbations_nonincreasing: nonincreasing,
    })
}

/// Radial discretization of (R^dim, Lebesgue, |x|^2 / 2m): the closed-form
/// testbed with Psi(beta) = (dim/2) log(2 pi m / beta) and
/// S(x) = (dim/2)(1 + log(4 pi m x / dim)).
pub fn maxwell_space(dim: u32, m: f64, grid: usize) -> WeightedEnergySpace {
    assert!(dim >= 1 && m > 0.0 && grid >= 16);
    let beta_min = 0.125;
    let h_max = 45.0 / beta_min;
    let r_max = (2.0 * m * h_max).sqrt();
    let vd = unit_ball_volume(dim);
    let dr = r_max / grid as f64;
    let mut atoms = Vec::with_capacity(grid);
    for i in 0..grid {
        let r0 = i as f64 * dr;
        let r1 = r0 + dr;
        let weight = vd * (r1.powi(dim as i32) - r0.powi(dim as i32));
        let rm = 0.5 * (r0 + r1);
        atoms.push((weight, rm * rm / (2.0 * m)));
    }
    WeightedEnergySpace::new(atoms, beta_min, None)
}

/// Closed forms for the Maxwell space.
pub fn maxwell_psi_closed(dim: u32, m: f64, beta: f64) -> f64 {
    dim as f64 / 2.0 * (2.0 * PI * m / beta).ln()
}

pub fn maxwell_entropy_closed(dim: u32, m: f64, x: f64) -> f64 {
    dim as f64 / 2.0 * (1.0 + (4.0 * PI * m * x / dim as f64).ln())
}

pub fn unit_ball_volume(dim: u32) -> f64 {
    PI.powf(dim as f64 / 2.0) / statrs::function::gamma::gamma(dim as f64 / 2.0 + 1.0)
}

/// Two-stage grid maximization of S_1(t1) + S_2(t - t1) over the energy
/// split, used to exhibit the second law on direct sums. Returns the best
/// value and its argmax, resolved to `resolution` in t1.
pub fn second_law_split(
    l1: &EuclideanLattice,
    l2: &EuclideanLattice,
    t: f64,
    resolution: f64,
) -> Result<(f64, f64)> {
    assert!(t > 0.0 && resolution > 0.0);
    let value = |t1: f64| -> Result<f64> {
        Ok(htilde0_ar(l1, t1)? + htilde0_ar(l2, t - t1)?)
    };
    let mut lo = t * 1e-3;
    let mut hi = t * (1.0 - 1e-3);
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut step = (hi - lo) / 64.0;
    loop {
        let mut t1 = lo;
        while t1 <= hi + 1e-15 {
            if let Ok(v) = value(t1) {
                if v > best.0 {
                    best = (v, t1);
                }
            }
            t1 += step;
        }
        if step <= resolution {
            break;
        }
        lo = (best.1 - 2.0 * step).max(t * 1e-3);
        hi = (best.1 + 2.0 * step).min(t * (1.0 - 1e-3));
        step = (step / 16.0).max(resolution * 0.99);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{eta0, tau};

    #[test]
    fn lattice_space_matches_tau() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 0.5, 1e-12).unwrap();
        assert!((space.psi(1.0).unwrap() - eta0()).abs() < 1e-11);
        assert!((space.psi(2.0).unwrap() - tau(2.0)).abs() < 1e-11);

        let a2 = EuclideanLattice::hexagonal();
        let space = from_lattice(&a2, 1.0, 1e-10).unwrap();
        let h0 = crate::theta::h0_theta(&a2).unwrap();
        assert!((space.psi(1.0).unwrap() - h0).abs() < 1e-9);
    }

    #[test]
    fn rank0_space() {
        let space = from_lattice(&EuclideanLattice::rank0(), 0.5, 1e-10).unwrap();
        assert_eq!(space.atoms().len(), 1);
        assert_eq!(space.psi(1.0).unwrap(), 0.0);
    }

    #[test]
    fn u_is_minus_psi_prime() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 0.25, 1e-12).unwrap();
        for &beta in &[0.5, 1.0, 2.0, 4.0] {
            let h = 1e-6 * beta;
            let fd = -(space.psi(beta + h).unwrap() - space.psi(beta - h).unwrap()) / (2.0 * h);
            let u = space.energy_u(beta).unwrap();
            assert!((fd - u).abs() < 1e-7 * (1.0 + u.abs()), "beta = {beta}");
        }
        // U(1) on Z matches the scalar series
        let mut num = 0.0;
        let mut den = 1.0;
        for k in 1..=20 {
            let e = PI * (k * k) as f64;
            num += 2.0 * e * (-e).exp();
            den += 2.0 * (-e).exp();
        }
        assert!((space.energy_u(1.0).unwrap() - num / den).abs() < 1e-12);
    }

    #[test]
    fn u_strictly_decreasing() {
        let a2 = EuclideanLattice::hexagonal();
        let space = from_lattice(&a2, 0.25, 1e-10).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let beta = 0.25 * 1.3f64.powi(i);
            let u = space.energy_u(beta).unwrap();
            assert!(u < prev);
            assert!(u > 0.0);
            prev = u;
        }
    }

    #[test]
    fn beta_below_certified_rejected() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 1.0, 1e-10).unwrap();
        assert!(matches!(
            space.psi(0.5),
            Err(Error::BetaBelowCertified { .. })
        ));
    }

    #[test]
    fn entropy_duality_at_critical_point() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 0.25, 1e-12).unwrap();
        for &beta in &[0.5, 1.0, 3.0] {
            let u = space.energy_u(beta).unwrap();
            let r = entropy_s(&space, u).unwrap();
            // S(U(beta)) = beta U + Psi(beta), attained at beta
            let expected = beta * u + space.psi(beta).unwrap();
            assert!((r.s - expected).abs() < 1e-9);
            assert!((r.beta - beta).abs() < 1e-6 * beta);
            // S'(x) ~ beta by central differences
            let h = 1e-5 * u;
            let sp = (entropy_s(&space, u + h).unwrap().s
                - entropy_s(&space, u - h).unwrap().s)
                / (2.0 * h);
            assert!((sp - beta).abs() < 1e-5 * beta);
        }
    }

    #[test]
    fn entropy_domain_errors() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 0.5, 1e-10).unwrap();
        assert!(matches!(
            entropy_s(&space, -1.0),
            Err(Error::XBelowInfimum { .. })
        ));
        let huge = space.energy_u(0.5).unwrap() * 10.0;
        assert!(matches!(
            entropy_s(&space, huge),
            Err(Error::BetaBelowCertified { .. })
        ));
    }

    #[test]
    fn legendre_roundtrip_z() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 0.125, 1e-12).unwrap();
        for &beta in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let (sup, xstar) = legendre_sup(&space, beta).unwrap();
            let psi = space.psi(beta).unwrap();
            assert!((sup - psi).abs() < 1e-6, "beta={beta}: sup {sup} psi {psi}");
            assert!((xstar - space.energy_u(beta).unwrap()).abs() < 1e-4);
        }
    }

    #[test]
    fn maxwell_closed_forms() {
        for dim in 1..=3u32 {
            let m = 1.0 / (2.0 * PI);
            let space = maxwell_space(dim, m, 20_000);
            for &beta in &[0.5, 1.0, 2.0] {
                let psi = space.psi(beta).unwrap();
                let closed = maxwell_psi_closed(dim, m, beta);
                assert!((psi - closed).abs() < 1e-3, "dim={dim} beta={beta}");
                let u = space.energy_u(beta).unwrap();
                assert!((u - dim as f64 / (2.0 * beta)).abs() < 1e-3);
            }
            // S at x = U(beta) against the closed form
            let x = dim as f64 / 2.0;
            let s = entropy_s(&space, x).unwrap();
            assert!((s.s - maxwell_entropy_closed(dim, m, x)).abs() < 1e-3);
        }
        // dim 3, m = 1, beta 2: Psi = (3/2) log(pi)
        let space = maxwell_space(3, 1.0, 20_000);
        assert!((space.psi(2.0).unwrap() - 1.5 * PI.ln()).abs() < 1e-3);
    }

    #[test]
    fn htilde_matches_symmetric_split() {
        let z = EuclideanLattice::standard(1);
        let z2 = EuclideanLattice::standard(2);
        for &t in &[0.5, 1.0, 2.0] {
            let whole = htilde0_ar(&z2, t).unwrap();
            let split = 2.0 * htilde0_ar(&z, t / 2.0).unwrap();
            assert!((whole - split).abs() < 1e-7, "t = {t}");
        }
    }

    #[test]
    fn htilde_vanishes_at_small_t() {
        // the zero vector is the unique minimal atom, so S -> log 1 = 0
        let z = EuclideanLattice::standard(1);
        let tiny = htilde0_ar(&z, 1e-3).unwrap();
        assert!(tiny > 0.0 && tiny < 0.02, "h~0_ar(Z, 1e-3) = {tiny}");
        let tinier = htilde0_ar(&z, 1e-4).unwrap();
        assert!(tinier < tiny);
    }

    #[test]
    fn htilde_increasing_concave() {
        let a2 = EuclideanLattice::hexagonal();
        let ts: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| htilde0_ar(&a2, t).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0]);
        }
        for w in vals.windows(3) {
            assert!(w[2] - w[1] <= w[1] - w[0] + 1e-9);
        }
    }

    #[test]
    fn comparison_bracket_theorem() {
        // h0_ar(x) <= htilde(x) <= log theta(n/(2 pi x)) + n/2
        let a2 = EuclideanLattice::hexagonal();
        let n = 2.0;
        for &x in &[0.5, 1.0, 2.0] {
            let naive = crate::profile::h0_ar(&a2, x).unwrap();
            let tilde = htilde0_ar(&a2, x).unwrap();
            let thetav = crate::theta::theta(&a2, n / (2.0 * PI * x), 1e-10)
                .unwrap()
                .log_value;
            assert!(naive <= tilde + 1e-9, "x={x}");
            assert!(thetav <= tilde + 1e-9, "x={x}");
            assert!(tilde <= thetav + n / 2.0 + 1e-9, "x={x}");
            assert!(thetav <= naive + crate::profile::comparison_constant(2) + 1e-9);
        }
    }

    #[test]
    fn fekete_z_values() {
        let z = EuclideanLattice::standard(1);
        let steps = fekete_oracle(&z, 1.0, 8).unwrap();
        assert_eq!(steps.len(), 8);
        assert!((steps[0].value - 3f64.ln()).abs() < 1e-12);
        assert!((steps[1].value - 9f64.ln() / 2.0).abs() < 1e-12);
        for w in steps.windows(2) {
            assert!(w[1].value >= w[0].value - 1e-12, "nondecreasing");
        }
        let limit = htilde0_ar(&z, 1.0).unwrap();
        for s in &steps {
            assert!(s.value <= limit + s.bracket + 1e-9);
            assert_eq!(s.bracket, 0.0);
        }
    }

    #[test]
    fn fekete_bracket_mode() {
        // an irrational-normed lattice goes through the bracketed grid
        let l = EuclideanLattice::from_gram(crate::linalg::Mat::from_rows(&[vec![
            1.37,
        ]]))
        .unwrap();
        let steps = fekete_oracle(&l, 1.5, 3).unwrap();
        for s in &steps {
            assert!(s.bracket >= 0.0);
            assert!(s.bracket < 0.05);
        }
    }

    #[test]
    fn max_entropy_two_atoms() {
        let space = WeightedEnergySpace::new(vec![(1.0, 0.0), (1.0, 1.0)], 0.1, Some(0.0));
        let r = max_entropy_check(&space, 1.0, 8, 3).unwrap();
        // binary identity: I = beta U + Psi
        let z = 1.0 + (-1f64).exp();
        let u = (-1f64).exp() / z;
        assert!((r.gibbs_entropy - (u + z.ln())).abs() < 1e-12);
        // a 2-atom space has no energy-preserving tangent directions
        assert_eq!(r.perturbations_tried, 0);
    }

    #[test]
    fn max_entropy_truncated_z() {
        let z = EuclideanLattice::standard(1);
        let space = from_lattice(&z, 0.5, 1e-12).unwrap();
        let r = max_entropy_check(&space, 1.0, 64, 11).unwrap();
        assert!(r.perturbations_tried > 0);
        assert_eq!(r.perturbations_tried, r.perturbations_nonincreasing);
        assert!((r.gibbs_entropy - r.legendre_entropy).abs() < 1e-8);
    }

    #[test]
    fn max_entropy_maxwell() {
        let space = maxwell_space(2, 1.0 / (2.0 * PI), 4000);
        let r = max_entropy_check(&space, 1.0, 32, 5).unwrap();
        assert_eq!(r.perturbations_tried, r.perturbations_nonincreasing);
    }

    #[test]
    fn second_law_symmetric_argmax() {
        let z = EuclideanLattice::standard(1);
        let z2 = EuclideanLattice::standard(2);
        let t = 1.0;
        let (best, argmax) = second_law_split(&z, &z, t, 1e-4).unwrap();
        let whole = htilde0_ar(&z2, t).unwrap();
        assert!((best - whole).abs() < 1e-4);
        assert!((argmax - t / 2.0).abs() < 2e-4);
    }

    #[test]
    fn product_space_psi_additive() {
        let z = EuclideanLattice::standard(1);
        let s1 = from_lattice(&z, 0.5, 1e-12).unwrap();
        let prod = s1.product(&s1);
        for &beta in &[0.5, 1.0, 2.0] {
            let lhs = prod.psi(beta).unwrap();
            let rhs = 2.0 * s1.psi(beta).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}

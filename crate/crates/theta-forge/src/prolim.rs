//! Finite truncations of projective systems of euclidean lattices.
//!
//! A system is a chain E_0 <- E_1 <- ... of surjective maps q_i whose
//! quotient metrics reproduce each level's Gram; the kernels S_i carry the
//! induced metrics. When sum_i h0(S_i) converges the level invariants
//! h0(E_i) converge, with the bracket
//!
//!   h0(E_k)  <=  lim  <=  h0(E_k) + sum_{j >= k} h0(S_j),
//!
//! and the Gaussian measures gamma_i pushed through the maps converge
//! atomwise. Infinite objects are never materialized: everything here is a
//! statement about a finite truncation plus an explicit tail model fitted
//! to the last kernel invariants.
//!
//! Diagonal families V_lambda (coordinate-wise weights) have the closed
//! form lim h0 = sum_i tau(lambda_i); the arithmetic Hardy family uses
//! lambda_n = R^{2n} e^{-2 delta}, finite exactly when R > 1.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::intmat::{self, IMat};
use crate::lattice::{quotient_gram_through, EuclideanLattice, DEFAULT_ENUM_CAP};
use crate::linalg::Mat;
use crate::theta::{h0_theta, tau, theta};

/// Truncation of a pro-euclidean lattice: levels E_0..E_k with surjective
/// admissible quotient maps q_i: E_{i+1} -> E_i and kernel lattices.
#[derive(Debug, Clone)]
pub struct ProjectiveSystem {
    levels: Vec<EuclideanLattice>,
    maps: Vec<IMat>,
    kernels: Vec<EuclideanLattice>,
}

impl ProjectiveSystem {
    /// Validate levels and maps: shapes, integer surjectivity, and the
    /// quotient-metric property (each level's Gram is the Schur-complement
    /// quotient of the next level's Gram through its map, within 1e-9).
    pub fn new(levels: Vec<EuclideanLattice>, maps: Vec<IMat>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::DomainError("need at least one level".into()));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::DomainError(format!(
                "{} levels need {} maps, got {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        let mut kernels = Vec::with_capacity(maps.len());
        for (i, q) in maps.iter().enumerate() {
            let (lo, hi) = (&levels[i], &levels[i + 1]);
            if q.rows != lo.rank() || q.cols != hi.rank() {
                return Err(Error::DomainError(format!(
                    "map {i} has shape {}x{}, expected {}x{}",
                    q.rows,
                    q.cols,
                    lo.rank(),
                    hi.rank()
                )));
            }
            if q.rows > 0 {
                let snf = intmat::smith_normal_form(q);
                let divs = snf.divisors();
                if divs.iter().filter(|&&d| d != 0).count() < q.rows {
                    return Err(Error::RankDeficient);
                }
                if let Some(&d) = divs.iter().find(|&&d| d != 1) {
                    return Err(Error::NotSurjective { divisor: d });
                }
            }
            let quotient = quotient_gram_through(q, hi.gram())?;
            let mut worst: f64 = 0.0;
            for r in 0..lo.rank() {
                for c in 0..lo.rank() {
                    worst = worst.max((quotient[(r, c)] - lo.gram()[(r, c)]).abs());
                }
            }
            if worst > 1e-9 {
                return Err(Error::DomainError(format!(
                    "map {i} does not induce the level-{i} metric (deviation {worst:e})"
                )));
            }
            let kb = intmat::kernel_basis(q);
            let kernel = if kb.cols == 0 {
                EuclideanLattice::rank0()
            } else {
                let kf = kb.as_f64();
                EuclideanLattice::from_gram(kf.transpose().matmul(&hi.gram().matmul(&kf)))?
            };
            kernels.push(kernel);
        }
        Ok(ProjectiveSystem { levels, maps, kernels })
    }

    pub fn levels(&self) -> &[EuclideanLattice] {
        &self.levels
    }

    pub fn maps(&self) -> &[IMat] {
        &self.maps
    }

    pub fn kernels(&self) -> &[EuclideanLattice] {
        &self.kernels
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Composite map E_j -> E_i for i <= j.
    pub fn composite_map(&self, i: usize, j: usize) -> IMat {
        assert!(i <= j && j < self.levels.len());
        let mut m = IMat::identity(self.levels[j].rank());
        for k in (i..j).rev() {
            m = self.maps[k].matmul(&m);
        }
        m
    }
}

/// Diagonal pro-families: explicit weight lists or the Hardy family
/// lambda_n = R^{2n} e^{-2 delta}.
#[derive(Debug, Clone)]
pub enum DiagonalProFamily {
    Explicit(Vec<f64>),
    Hardy { r: f64, delta: f64 },
}

impl DiagonalProFamily {
    pub fn lambda(&self, n: usize) -> f64 {
        match self {
            DiagonalProFamily::Explicit(v) => v[n],
            DiagonalProFamily::Hardy { r, delta } => {
                r.powi(2 * n as i32) * (-2.0 * delta).exp()
            }
        }
    }

    pub fn max_depth(&self) -> Option<usize> {
        match self {
            DiagonalProFamily::Explicit(v) => Some(v.len()),
            DiagonalProFamily::Hardy { .. } => None,
        }
    }

    /// Truncate to `depth` levels: E_i = Z^i with Gram diag(lambda_0 ..
    /// lambda_{i-1}), maps dropping the last coordinate.
    pub fn truncate(&self, depth: usize) -> Result<ProjectiveSystem> {
        if let Some(max) = self.max_depth() {
            assert!(depth <= max, "explicit family has only {max} weights");
        }
        let mut levels = Vec::with_capacity(depth + 1);
        let mut maps = Vec::with_capacity(depth);
        for i in 0..=depth {
            let mut g = Mat::zeros(i, i);
            for d in 0..i {
                g[(d, d)] = self.lambda(d);
            }
            levels.push(if i == 0 {
                EuclideanLattice::rank0()
            } else {
                EuclideanLattice::from_gram(g)?
            });
            if i > 0 {
                let mut q = IMat::zeros(i - 1, i);
                for d in 0..(i - 1) {
                    q[(d, d)] = 1;
                }
                maps.push(q);
            }
        }
        ProjectiveSystem::new(levels, maps)
    }

    /// Closed-form limit sum tau(lambda_i), or infinity when it diverges.
    pub fn closed_form_limit(&self, tol: f64) -> f64 {
        match self {
            DiagonalProFamily::Explicit(v) => v.iter().map(|&l| tau(l)).sum(),
            DiagonalProFamily::Hardy { r, delta } => hardy_invariant(*r, *delta, tol),
        }
    }
}

/// h(R, delta) = sum_n tau(R^{2n} e^{-2 delta}); infinite iff R <= 1.
pub fn hardy_invariant(r: f64, delta: f64, tol: f64) -> f64 {
    assert!(r > 0.0);
    assert!(tol > 0.0);
    if r <= 1.0 {
        return f64::INFINITY;
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    loop {
        let x = r.powi(2 * n as i32) * (-2.0 * delta).exp();
        let term = tau(x);
        sum += term;
        // terms decay doubly exponentially once x clears the hump at 1
        if x > std::f64::consts::E.powi(2) && term < tol * sum.max(1.0) {
            break;
        }
        n += 1;
        if n > 10_000_000 {
            break;
        }
    }
    sum
}

/// Summability diagnostics of a truncated system.
#[derive(Debug, Clone)]
pub struct SummabilityReport {
    /// h0 of each twisted kernel S_i (x) O(eps).
    pub kernel_h0: Vec<f64>,
    /// Partial sums of the above.
    pub partial_sums: Vec<f64>,
    /// Slope of log h0(S_i) over the last three levels with positive
    /// kernels; negative means geometric decay.
    pub fitted_slope: Option<f64>,
    /// Heuristic flag: kernels decay at this eps > 0, certified only for
    /// the given filtration.
    pub strongly_summable_hint: bool,
}

pub fn summability_report(sys: &ProjectiveSystem, eps: f64) -> Result<SummabilityReport> {
    let mut kernel_h0 = Vec::new();
    for k in sys.kernels() {
        let twisted = if k.rank() == 0 { k.clone() } else { k.rescale(eps) };
        kernel_h0.push(h0_theta(&twisted)?);
    }
    let mut partial_sums = Vec::with_capacity(kernel_h0.len());
    let mut acc = 0.0;
    for &h in &kernel_h0 {
        acc += h;
        partial_sums.push(acc);
    }
    let fitted_slope = fit_log_tail(&kernel_h0);
    let strongly_summable_hint = eps > 0.0
        && fitted_slope.map_or(kernel_h0.iter().rev().take(2).all(|&h| h == 0.0), |s| {
            s < -DECAY_SLOPE_FLOOR
        });
    Ok(SummabilityReport { kernel_h0, partial_sums, fitted_slope, strongly_summable_hint })
}

/// Per-level decay below this rate is treated as not decaying at all.
const DECAY_SLOPE_FLOOR: f64 = 1e-3;

/// Least-squares slope of log(values) over the last three positive entries.
fn fit_log_tail(values: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, &v)| (i as f64, v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let tail = &pts[pts.len() - 3..];
    let n = tail.len() as f64;
    let sx: f64 = tail.iter().map(|p| p.0).sum();
    let sy: f64 = tail.iter().map(|p| p.1).sum();
    let sxx: f64 = tail.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = tail.iter().map(|p| p.0 * p.1).sum();
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Limit bracket for h0 along the system.
#[derive(Debug, Clone)]
pub struct LimitH0 {
    /// h0 at the deepest available level.
    pub estimate: f64,
    /// Lower bound from sublattices spanned by lifted short vectors.
    pub lower: f64,
    /// estimate plus the modeled kernel tail.
    pub upper: f64,
    /// The modeled tail mass sum_{j >= depth} h0(S_j).
    pub modeled_tail: f64,
    /// h0 of every level, for monotonicity reports.
    pub level_h0: Vec<f64>,
    /// h0 of every kernel.
    pub kernel_h0: Vec<f64>,
}

pub fn limit_h0(sys: &ProjectiveSystem) -> Result<LimitH0> {
    let mut level_h0 = Vec::with_capacity(sys.levels().len());
    for l in sys.levels() {
        level_h0.push(h0_theta(l)?);
    }
    let mut kernel_h0 = Vec::with_capacity(sys.kernels().len());
    for k in sys.kernels() {
        kernel_h0.push(h0_theta(k)?);
    }
    let estimate = *level_h0.last().unwrap();

    // tail beyond the truncation: zero if the kernels have died out,
    // otherwise a geometric model fitted to the last three positive values
    let trailing_zero = kernel_h0.iter().rev().take_while(|&&h| h <= 1e-14).count();
    let modeled_tail = if trailing_zero >= 1 {
        0.0
    } else {
        match fit_log_tail(&kernel_h0) {
            Some(slope) if slope < -DECAY_SLOPE_FLOOR => {
                let last = *kernel_h0.last().unwrap();
                // next kernel ~ last * e^{slope}, summed geometrically
                last * slope.exp() / (1.0 - slope.exp())
            }
            Some(slope) => {
                return Err(Error::NotSummableAtDepth(format!(
                    "kernel h0 values do not decay (fitted slope {slope:.3})"
                )))
            }
            None => {
                return Err(Error::NotSummableAtDepth(
                    "too few kernel levels to model the tail".into(),
                ))
            }
        }
    };
    let upper = estimate + modeled_tail;

    // lower bound: lift short vectors from each level to the deepest one by
    // minimal-norm preimages; they span a finite-rank member of the limit
    let deepest = sys.depth();
    let mut lower: f64 = 0.0;
    for start in 0..=deepest {
        if sys.levels()[start].rank() == 0 {
            continue;
        }
        let lifted = lift_short_vectors(sys, start, deepest)?;
        if let Some(sub) = span_sublattice(&sys.levels()[deepest], &lifted) {
            lower = lower.max(h0_theta(&sub)?);
        }
    }
    if lower > estimate + 1e-8 || estimate > upper + 1e-8 {
        return Err(Error::ViolationDetected(format!(
            "limit bracket out of order: {lower} <= {estimate} <= {upper} fails"
        )));
    }
    Ok(LimitH0 { estimate, lower, upper, modeled_tail, level_h0, kernel_h0 })
}

/// Short vectors of E_start lifted level by level via minimal-norm
/// preimages, expressed in E_deepest coordinates.
fn lift_short_vectors(
    sys: &ProjectiveSystem,
    start: usize,
    deepest: usize,
) -> Result<Vec<Vec<i64>>> {
    let level = &sys.levels()[start];
    let min = crate::profile::lambda1(level)?;
    let pts = level.enumerate(min.normsq * 2.25)?;
    let mut lifted: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        if p.normsq == 0.0 {
            continue;
        }
        let mut v = p.coords;
        for j in start..deepest {
            v = min_norm_preimage(&sys.maps[j], &sys.levels[j + 1], &v)?;
        }
        lifted.push(v);
    }
    Ok(lifted)
}

/// Minimal-norm w in the source lattice with q w = v: closest-vector search
/// in the kernel coset.
fn min_norm_preimage(q: &IMat, source: &EuclideanLattice, v: &[i64]) -> Result<Vec<i64>> {
    let lift = intmat::right_inverse(q)?;
    let w0 = lift.mul_vec(v);
    let kb = intmat::kernel_basis(q);
    if kb.cols == 0 {
        return Ok(w0);
    }
    let kf = kb.as_f64();
    let g = source.gram();
    let kgk = kf.transpose().matmul(&g.matmul(&kf));
    let kernel_lattice = EuclideanLattice::from_gram(kgk)?;
    // minimize |w0 + K z|^2 over integer z: CVP at z* = -(K^T G K)^{-1} K^T G w0
    let w0f: Vec<f64> = w0.iter().map(|&x| x as f64).collect();
    let mut ktgw = vec![0.0; kb.cols];
    for c in 0..kb.cols {
        let mut acc = 0.0;
        for r in 0..kb.rows {
            let mut grow = 0.0;
            for s in 0..kb.rows {
                grow += g[(r, s)] * w0f[s];
            }
            acc += kf[(r, c)] * grow;
        }
        ktgw[c] = acc;
    }
    let chol = kernel_lattice.cholesky().unwrap();
    let target: Vec<f64> = chol.solve(&ktgw).iter().map(|x| -x).collect();
    let rounded: Vec<i64> = target.iter().map(|x| x.round() as i64).collect();
    let diff: Vec<f64> = rounded
        .iter()
        .zip(&target)
        .map(|(&r, &t)| r as f64 - t)
        .collect();
    let d0 = kernel_lattice.gram().quad_form(&diff, &diff);
    let best_z = if d0 == 0.0 {
        rounded
    } else {
        let pts = kernel_lattice.enumerate_around(&target, d0 * (1.0 + 1e-9), DEFAULT_ENUM_CAP)?;
        pts.iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(z, _)| z.clone())
            .unwrap_or(rounded)
    };
    let mut w = w0;
    for (r, wr) in w.iter_mut().enumerate() {
        for c in 0..kb.cols {
            *wr += kb[(r, c)] * best_z[c];
        }
    }
    Ok(w)
}

/// Sublattice of `ambient` spanned by integer vectors, with induced metric.
fn span_sublattice(ambient: &EuclideanLattice, vectors: &[Vec<i64>]) -> Option<EuclideanLattice> {
    if vectors.is_empty() {
        return None;
    }
    let n = ambient.rank();
    let mut rows: Vec<Vec<i64>> = vectors.to_vec();
    rows.retain(|r| r.iter().any(|&x| x != 0));
    if rows.is_empty() {
        return None;
    }
    let m = IMat::from_rows(&rows);
    let (h, _) = intmat::row_hnf(&m);
    let basis_rows: Vec<Vec<i64>> = h
        .to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let k = basis_rows.len();
    if k == 0 {
        return None;
    }
    let mut bas = Mat::zeros(n, k);
    for (j, row) in basis_rows.iter().enumerate() {
        for i in 0..n {
            bas[(i, j)] = row[i] as f64;
        }
    }
    let gram = bas.transpose().matmul(&ambient.gram().matmul(&bas));
    EuclideanLattice::from_gram(gram).ok()
}

/// Atomwise pushforward masses and limit brackets at one level.
#[derive(Debug, Clone)]
pub struct AtomMassReport {
    pub coords: Vec<i64>,
    /// (source level j, mass of the pushforward of gamma_j at this atom).
    pub mass_at_depth: Vec<(usize, f64)>,
    /// e^{-pi |lift|^2} with the minimal-norm lift to the deepest level.
    pub lower: f64,
    /// e^{-pi |atom|^2 + sum_{k >= level} h0(S_k)} including the modeled tail.
    pub upper: f64,
}

#[derive(Debug, Clone)]
pub struct LimitMeasureLevelReport {
    pub level: usize,
    pub atoms: Vec<AtomMassReport>,
    pub domination_ok: bool,
}

/// Pushforward measures p_{ij*} gamma_j evaluated on the atoms of each
/// level up to `depth`, with the monotone-domination check
/// q_{i*} gamma_{i+1} <= e^{h0(S_i)} gamma_i and two-sided limit brackets.
pub fn limit_measure_truncation(
    sys: &ProjectiveSystem,
    depth: usize,
    mass_floor: f64,
) -> Result<Vec<LimitMeasureLevelReport>> {
    assert!(depth <= sys.depth());
    let lim = limit_h0(sys)?;
    let deepest = sys.depth();
    // gaussian points of every level once, at certified radius
    let mut level_points: Vec<Vec<(Vec<i64>, f64)>> = Vec::new();
    for l in sys.levels() {
        let res = theta(l, 1.0, 1e-10)?;
        let pts = if l.rank() == 0 {
            vec![(vec![], 0.0)]
        } else {
            l.enumerate(res.truncation_radius2)?
                .into_iter()
                .map(|p| (p.coords, p.normsq))
                .collect()
        };
        level_points.push(pts);
    }

    let mut reports = Vec::new();
    for i in 0..=depth {
        // atoms of E_i above the floor
        let atoms: Vec<(Vec<i64>, f64)> = level_points[i]
            .iter()
            .filter(|(_, n2)| (-PI * n2).exp() >= mass_floor)
            .cloned()
            .collect();

        // pushforward masses from each deeper level
        let mut mass_maps: Vec<BTreeMap<Vec<i64>, f64>> = Vec::new();
        for (j, points) in level_points.iter().enumerate().take(deepest + 1).skip(i) {
            let p_ij = sys.composite_map(i, j);
            let mut map: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
            for (coords, n2) in points {
                let img = p_ij.mul_vec(coords);
                *map.entry(img).or_insert(0.0) += (-PI * n2).exp();
            }
            mass_maps.push(map);
        }

        // domination: q_{i*} gamma_{i+1} <= e^{h0(S_i)} gamma_i atomwise,
        // up to the truncation slack of the deeper sum
        let mut domination_ok = true;
        if i < deepest {
            let factor = lim.kernel_h0[i].exp();
            for (coords, n2) in &atoms {
                let pushed = mass_maps[1].get(coords).copied().unwrap_or(0.0);
                let allowed = factor * (-PI * n2).exp();
                if pushed > allowed * (1.0 + 1e-8) + 1e-15 {
                    domination_ok = false;
                }
            }
        }

        let tail_from = |k: usize| -> f64 {
            let available: f64 = lim.kernel_h0[k..].iter().sum();
            available + lim.modeled_tail
        };

        let mut atom_reports = Vec::new();
        for (coords, n2) in &atoms {
            let mass_at_depth: Vec<(usize, f64)> = (i..=deepest)
                .map(|j| (j, mass_maps[j - i].get(coords).copied().unwrap_or(0.0)))
                .collect();
            // minimal-norm lift to the deepest level for the lower bound
            let mut v = coords.clone();
            for j in i..deepest {
                v = min_norm_preimage(&sys.maps[j], &sys.levels[j + 1], &v)?;
            }
            let lift_norm2 = if v.is_empty() {
                0.0
            } else {
                sys.levels()[deepest].norm_squared(&v)
            };
            let lower = (-PI * lift_norm2).exp();
            let upper = (-PI * n2 + tail_from(i)).exp();
            atom_reports.push(AtomMassReport {
                coords: coords.clone(),
                mass_at_depth,
                lower,
                upper,
            });
        }
        reports.push(LimitMeasureLevelReport { level: i, atoms: atom_reports, domination_ok });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::eta0;

    #[test]
    fn diagonal_truncation_validates() {
        let fam = DiagonalProFamily::Explicit(vec![4.0, 16.0, 64.0]);
        let sys = fam.truncate(3).unwrap();
        assert_eq!(sys.depth(), 3);
        assert_eq!(sys.kernels()[0].rank(), 1);
        assert!((sys.kernels()[2].gram()[(0, 0)] - 64.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonsurjective_map() {
        let levels = vec![EuclideanLattice::standard(1), EuclideanLattice::standard(2)];
        let q = IMat::from_rows(&[vec![2, 0]]);
        assert!(matches!(
            ProjectiveSystem::new(levels, vec![q]),
            Err(Error::NotSurjective { divisor: 2 })
        ));
    }

    #[test]
    fn rejects_wrong_quotient_metric() {
        // dropping a coordinate of Z^2 induces the Z metric, so a level
        // claiming gram [[2]] must be refused
        let levels = vec![
            EuclideanLattice::from_gram(Mat::from_rows(&[vec![2.0]])).unwrap(),
            EuclideanLattice::standard(2),
        ];
        let q = IMat::from_rows(&[vec![1, 0]]);
        assert!(matches!(
            ProjectiveSystem::new(levels, vec![q]),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn hardy_kernels_are_tau_terms() {
        let fam = DiagonalProFamily::Hardy { r: 2.0, delta: 0.0 };
        let sys = fam.truncate(10).unwrap();
        let report = summability_report(&sys, 0.0).unwrap();
        for (i, &h) in report.kernel_h0.iter().enumerate() {
            let expected = tau(4f64.powi(i as i32));
            assert!((h - expected).abs() < 1e-9, "kernel {i}");
        }
        assert!(report.fitted_slope.unwrap() < 0.0);
        // with a positive twist the hint upgrades to strong summability
        let twisted = summability_report(&sys, 0.5).unwrap();
        for (i, &h) in twisted.kernel_h0.iter().enumerate() {
            let expected = tau(4f64.powi(i as i32) * (-1.0f64).exp());
            assert!((h - expected).abs() < 1e-9, "twisted kernel {i}");
        }
        assert!(twisted.strongly_summable_hint);
    }

    #[test]
    fn constant_family_diverges() {
        let fam = DiagonalProFamily::Explicit(vec![1.0; 8]);
        let sys = fam.truncate(8).unwrap();
        let report = summability_report(&sys, 0.0).unwrap();
        // partial sums grow linearly at eta0 per level
        for (i, &s) in report.partial_sums.iter().enumerate() {
            assert!((s - (i + 1) as f64 * eta0()).abs() < 1e-8);
        }
        assert!(!report.strongly_summable_hint);
        assert!(matches!(limit_h0(&sys), Err(Error::NotSummableAtDepth(_))));
    }

    #[test]
    fn limit_matches_closed_form() {
        let fam = DiagonalProFamily::Explicit((0..8).map(|i| 4f64.powi(i)).collect());
        let sys = fam.truncate(8).unwrap();
        let lim = limit_h0(&sys).unwrap();
        let closed: f64 = (0..100).map(|i| tau(4f64.powi(i))).sum();
        assert!((lim.estimate - closed).abs() < 1e-10);
        assert!(lim.lower <= lim.estimate && lim.estimate <= lim.upper);
        // level monotonicity: h0(E_k) - sum_{j<k} h0(S_j) nonincreasing
        let mut acc = 0.0;
        let mut prev = f64::INFINITY;
        for (k, &h) in lim.level_h0.iter().enumerate() {
            let m = h - acc;
            assert!(m <= prev + 1e-9, "level {k}");
            prev = m;
            if k < lim.kernel_h0.len() {
                acc += lim.kernel_h0[k];
            }
        }
        // per-level subadditivity
        for k in 0..sys.depth() {
            assert!(lim.level_h0[k + 1] <= lim.level_h0[k] + lim.kernel_h0[k] + 1e-9);
        }
    }

    #[test]
    fn rank_stabilizing_system() {
        // kernels vanish beyond level 2: identity continuation maps
        let a2 = EuclideanLattice::hexagonal();
        // dropping the second coordinate of A2 leaves |[e1]|^2 = 3/4
        let levels = vec![
            EuclideanLattice::rank0(),
            EuclideanLattice::from_gram(Mat::from_rows(&[vec![0.75]])).unwrap(),
            a2.clone(),
            a2.clone(),
            a2.clone(),
        ];
        let maps = vec![
            IMat::zeros(0, 1),
            IMat::from_rows(&[vec![1, 0]]),
            IMat::identity(2),
            IMat::identity(2),
        ];
        let sys = ProjectiveSystem::new(levels, maps).unwrap();
        let lim = limit_h0(&sys).unwrap();
        assert_eq!(lim.modeled_tail, 0.0);
        assert!((lim.estimate - h0_theta(&a2).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn twisted_hardy_limit_matches_series() {
        // h(2, 1) = sum tau(4^n e^{-2}); the depth-8 truncation reaches it
        let fam = DiagonalProFamily::Hardy { r: 2.0, delta: 1.0 };
        let sys = fam.truncate(8).unwrap();
        let lim = limit_h0(&sys).unwrap();
        let closed = hardy_invariant(2.0, 1.0, 1e-14);
        assert!(
            (lim.estimate - closed).abs() < 1e-9,
            "estimate {} vs h(2,1) = {closed}",
            lim.estimate
        );
    }

    #[test]
    fn limit_measure_requires_summability() {
        let constant = DiagonalProFamily::Explicit(vec![1.0; 6]).truncate(6).unwrap();
        assert!(matches!(
            limit_measure_truncation(&constant, 3, 1e-10),
            Err(Error::NotSummableAtDepth(_))
        ));
    }

    #[test]
    fn hardy_invariant_finiteness() {
        assert!(hardy_invariant(1.0, 3.0, 1e-12).is_infinite());
        assert!(hardy_invariant(0.5, 0.0, 1e-12).is_infinite());
        assert!(hardy_invariant(2.0, 0.0, 1e-12).is_finite());

        // R = 2, delta = 0: dominated by tau(1) = eta0 with rapid decay
        let h = hardy_invariant(2.0, 0.0, 1e-14);
        let direct: f64 = (0..20).map(|n| tau(4f64.powi(n))).sum();
        assert!((h - direct).abs() < 1e-12);
        assert!(h < eta0() * 1.1 && h > eta0());
    }

    #[test]
    fn hardy_asymptotic_slope() {
        // h(e, delta) / delta^2 -> 1/(2 log e) = 1/2
        let r = std::f64::consts::E;
        let deltas: Vec<f64> = (20..=40).map(|d| d as f64).collect();
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for &d in &deltas {
            let h = hardy_invariant(r, d, 1e-13);
            sxx += d * d * d * d;
            sxy += d * d * h;
        }
        let slope = sxy / sxx;
        assert!((slope - 0.5).abs() < 0.025, "slope {slope}");
    }

    #[test]
    fn limit_measure_brackets() {
        let fam = DiagonalProFamily::Hardy { r: 4.0, delta: 0.0 };
        let sys = fam.truncate(6).unwrap();
        let reports = limit_measure_truncation(&sys, 4, 1e-10).unwrap();
        for rep in &reports {
            assert!(rep.domination_ok, "level {}", rep.level);
            for atom in &rep.atoms {
                // masses converge inside the bracket
                let last = atom.mass_at_depth.last().unwrap().1;
                assert!(last >= atom.lower * (1.0 - 1e-8) - 1e-12);
                assert!(last <= atom.upper * (1.0 + 1e-8) + 1e-12);
            }
        }
        // zero atom at level 0: bracket [1, e^{sum kernel h0}] contains 1
        let zero = &reports[0].atoms[0];
        assert_eq!(zero.coords, Vec::<i64>::new());
        assert!(zero.lower <= 1.0 + 1e-12 && 1.0 <= zero.upper);
    }

    #[test]
    fn lifted_vector_mass_converges() {
        // a vector of finite limit norm keeps mass e^{-pi |v|^2}
        let fam = DiagonalProFamily::Hardy { r: 4.0, delta: 0.0 };
        let sys = fam.truncate(6).unwrap();
        let reports = limit_measure_truncation(&sys, 2, 1e-8).unwrap();
        let level1 = &reports[1];
        // the atom (1) at level 1 lifts to (1, 0, ...) with norm 1
        let atom = level1
            .atoms
            .iter()
            .find(|a| a.coords == vec![1])
            .expect("atom (1) present");
        let expect = (-PI).exp();
        let last = atom.mass_at_depth.last().unwrap().1;
        assert!((last - expect).abs() < 1e-6);
        assert!(atom.lower <= last * (1.0 + 1e-9));
    }
}

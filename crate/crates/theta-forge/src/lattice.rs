//! Euclidean lattices as positive definite Gram data.
//!
//! A lattice here is Z^n together with the quadratic form v^T G v of a
//! chosen basis. Everything downstream works through this representation:
//! the covolume is sqrt(det G), the Arakelov degree is -log covol, the dual
//! lattice has Gram G^{-1}, and point enumeration runs a pruned search on
//! the Cholesky triangularization.
//!
//! Sub/quotient constructions follow the admissible-sequence picture: a
//! saturated sublattice carries the induced metric, the quotient carries the
//! metric of the orthogonal projection onto the complement of the
//! sublattice's real span, realized as a Schur complement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::intmat::{self, IMat};
use crate::linalg::{Cholesky, Mat};

/// Relative symmetry tolerance accepted by the constructors.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default enumeration cap.
pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// A euclidean lattice of finite rank, immutable after construction.
#[derive(Debug, Clone)]
pub struct EuclideanLattice {
    rank: usize,
    gram: Mat,
    chol: Option<Cholesky>,
    label: Option<String>,
}

/// A lattice point in basis coordinates with its squared length.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
    pub normsq: f64,
}

impl EuclideanLattice {
    /// Validate a Gram matrix and cache its Cholesky factor.
    pub fn from_gram(gram: Mat) -> Result<Self> {
        assert_eq!(gram.rows, gram.cols, "gram must be square");
        let n = gram.rows;
        if n == 0 {
            return Ok(EuclideanLattice { rank: 0, gram, chol: None, label: None });
        }
        let defect = gram.symmetry_defect();
        if defect > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { max_asym: defect });
        }
        let mut g = gram;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (g[(i, j)] + g[(j, i)]);
                g[(i, j)] = avg;
                g[(j, i)] = avg;
            }
        }
        let chol = g.cholesky()?;
        Ok(EuclideanLattice { rank: n, gram: g, chol: Some(chol), label: None })
    }

    /// Build from a basis matrix B (rows are basis vectors), G = B B^T.
    pub fn from_basis(basis: &Mat) -> Result<Self> {
        let g = basis.matmul(&basis.transpose());
        Self::from_gram(g)
    }

    /// The degenerate rank-0 lattice: covolume 1, degree 0, theta = 1.
    pub fn rank0() -> Self {
        EuclideanLattice { rank: 0, gram: Mat::zeros(0, 0), chol: None, label: None }
    }

    /// Z^n with the standard inner product.
    pub fn standard(n: usize) -> Self {
        Self::from_gram(Mat::identity(n)).expect("identity gram")
    }

    /// The hexagonal lattice A2: |(x,y)|^2 = x^2 - xy + y^2.
    pub fn hexagonal() -> Self {
        Self::from_gram(Mat::from_rows(&[vec![1.0, -0.5], vec![-0.5, 1.0]])).unwrap()
    }

    /// Rank-one lattice O(delta) of degree delta: Gram [[e^{-2 delta}]].
    pub fn line_bundle(delta: f64) -> Self {
        Self::from_gram(Mat::from_rows(&[vec![(-2.0 * delta).exp()]])).unwrap()
    }

    /// The rank-2 family |(x,y)|^2 = lambda (x^2 - xy) + y^2, lambda in (0,4).
    /// lambda = 1 recovers A2.
    pub fn perturbed_hexagonal(lambda: f64) -> Result<Self> {
        Self::from_gram(Mat::from_rows(&[
            vec![lambda, -lambda / 2.0],
            vec![-lambda / 2.0, 1.0],
        ]))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn cholesky(&self) -> Option<&Cholesky> {
        self.chol.as_ref()
    }

    /// covol = sqrt(det G); 1 for rank 0.
    pub fn covolume(&self) -> f64 {
        match &self.chol {
            Some(c) => c.sqrt_det(),
            None => 1.0,
        }
    }

    /// Arakelov degree -log covol; 0 for rank 0.
    pub fn degree(&self) -> f64 {
        match &self.chol {
            Some(c) => -c.log_sqrt_det(),
            None => 0.0,
        }
    }

    /// Dual lattice: Gram G^{-1}.
    pub fn dual(&self) -> Self {
        match &self.chol {
            Some(c) => Self::from_gram(c.inverse()).expect("inverse of SPD is SPD"),
            None => Self::rank0(),
        }
    }

    /// Scale all norms by e^{-delta}: Gram multiplied by e^{-2 delta}.
    /// The degree increases by rank * delta.
    pub fn rescale(&self, delta: f64) -> Self {
        if self.rank == 0 {
            return Self::rank0();
        }
        Self::from_gram(self.gram.scale((-2.0 * delta).exp())).expect("scaled SPD stays SPD")
    }

    /// Orthogonal direct sum: block-diagonal Gram.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.rank + other.rank;
        let mut g = Mat::zeros(n, n);
        for i in 0..self.rank {
            for j in 0..self.rank {
                g[(i, j)] = self.gram[(i, j)];
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                g[(self.rank + i, self.rank + j)] = other.gram[(i, j)];
            }
        }
        Self::from_gram(g).expect("block diagonal of SPD is SPD")
    }

    /// Squared norm of an integer coordinate vector.
    pub fn norm_squared(&self, coords: &[i64]) -> f64 {
        assert_eq!(coords.len(), self.rank);
        let v: Vec<f64> = coords.iter().map(|&c| c as f64).collect();
        self.gram.quad_form(&v, &v)
    }

    /// All lattice vectors with |v|^2 <= r2, in lexicographic coordinate
    /// order, zero included.
    pub fn enumerate(&self, r2: f64) -> Result<Vec<LatticeVector>> {
        self.enumerate_with_cap(r2, DEFAULT_ENUM_CAP)
    }

    pub fn enumerate_with_cap(&self, r2: f64, cap: u64) -> Result<Vec<LatticeVector>> {
        assert!(r2 > 0.0, "radius must be positive");
        if self.rank == 0 {
            return Ok(vec![LatticeVector { coords: vec![], normsq: 0.0 }]);
        }
        let center = vec![0.0; self.rank];
        let raw = self.enumerate_core(&center, r2, cap)?;
        let mut out: Vec<LatticeVector> = raw
            .into_iter()
            .filter_map(|(coords, _)| {
                let normsq = self.norm_squared(&coords);
                (normsq <= r2).then_some(LatticeVector { coords, normsq })
            })
            .collect();
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        Ok(out)
    }

    /// Lattice points v with |v - x|^2 <= r2 around a real center x (basis
    /// coordinates), with their squared distances. Unsorted radius order is
    /// not guaranteed; callers needing determinism sort themselves.
    pub fn enumerate_around(&self, center: &[f64], r2: f64, cap: u64) -> Result<Vec<(Vec<i64>, f64)>> {
        assert_eq!(center.len(), self.rank);
        if self.rank == 0 {
            return Ok(vec![(vec![], 0.0)]);
        }
        let mut pts = self.enumerate_core(center, r2, cap)?;
        pts.retain(|(_, d2)| *d2 <= r2);
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(pts)
    }

    /// Pruned depth-first search on the Cholesky triangularization.
    /// Emits (coords, squared distance to center) with a small slack above
    /// r2; callers apply the final exact comparison.
    fn enumerate_core(&self, center: &[f64], r2: f64, cap: u64) -> Result<Vec<(Vec<i64>, f64)>> {
        let n = self.rank;
        let l = &self.chol.as_ref().unwrap().l;
        // upper-triangular factor R = L^T, so |v - x|^2 = sum_i (R (v-x))_i^2
        let bound = r2 * (1.0 + 1e-9) + 1e-12;
        let mut found: Vec<(Vec<i64>, f64)> = Vec::new();
        let mut coords = vec![0i64; n];
        let mut count: u64 = 0;

        struct Frame {
            hi: i64,
            cur: i64,
            partial: f64,
        }

        let term = |level: usize, coords: &[i64], vi: i64, center: &[f64], l: &Mat| -> f64 {
            // s = sum_{j > level} R[level][j] (v_j - x_j), R[i][j] = L[j][i]
            let mut s = 0.0;
            for j in (level + 1)..coords.len() {
                s += l[(j, level)] * (coords[j] as f64 - center[j]);
            }
            let rii = l[(level, level)];
            let t = rii * (vi as f64 - center[level]) + s;
            t * t
        };
        let level_window = |level: usize, coords: &[i64], partial: f64, center: &[f64], l: &Mat| -> (i64, i64) {
            let mut s = 0.0;
            for j in (level + 1)..coords.len() {
                s += l[(j, level)] * (coords[j] as f64 - center[j]);
            }
            let rii = l[(level, level)];
            let c = center[level] - s / rii;
            let w = ((bound - partial).max(0.0)).sqrt() / rii;
            ((c - w).ceil() as i64, (c + w).floor() as i64)
        };

        let mut stack: Vec<Frame> = Vec::with_capacity(n);
        let (lo, hi) = level_window(n - 1, &coords, 0.0, center, l);
        stack.push(Frame { hi, cur: lo, partial: 0.0 });

        loop {
            let depth = stack.len();
            if depth == 0 {
                break;
            }
            let level = n - depth;
            let frame = stack.last_mut().unwrap();
            if frame.cur > frame.hi {
                stack.pop();
                continue;
            }
            let vi = frame.cur;
            frame.cur += 1;
            coords[level] = vi;
            let t = term(level, &coords, vi, center, l);
            let partial = frame.partial + t;
            if partial > bound {
                continue;
            }
            if level == 0 {
                count += 1;
                if count > cap {
                    return Err(Error::CountCapExceeded { found: count, cap });
                }
                found.push((coords.clone(), partial));
            } else {
                let next_level = level - 1;
                let (lo, hi) = level_window(next_level, &coords, partial, center, l);
                stack.push(Frame { hi, cur: lo, partial });
            }
        }
        Ok(found)
    }
}

/// A saturated sublattice / quotient pair carrying induced and quotient
/// metrics: 0 -> sub -> total -> quotient -> 0.
#[derive(Debug, Clone)]
pub struct AdmissibleSequence {
    pub total: EuclideanLattice,
    pub sub_basis: IMat,
    pub sub: EuclideanLattice,
    pub quotient: EuclideanLattice,
    /// Canonical surjection total -> quotient in coordinates (HNF-reduced).
    pub quotient_map: IMat,
}

impl AdmissibleSequence {
    /// Build the sequence determined by a saturated sublattice of `total`.
    ///
    /// `sub_basis` has one column per sublattice generator. Saturation is
    /// checked via Smith normal form (all elementary divisors 1); the
    /// quotient Gram is the Schur complement of the sub block in a
    /// unimodular basis completion, with the quotient map canonicalized by
    /// Hermite normal form.
    pub fn new(total: &EuclideanLattice, sub_basis: &IMat) -> Result<Self> {
        let n = total.rank();
        let k = sub_basis.cols;
        assert_eq!(sub_basis.rows, n, "sub_basis must have one row per lattice rank");
        assert!(k >= 1 && k <= n, "sub rank must be in 1..=rank");

        let snf = intmat::smith_normal_form(sub_basis);
        let divs = snf.divisors();
        if divs.iter().filter(|&&d| d != 0).count() < k {
            return Err(Error::RankDeficient);
        }
        if let Some((i, &d)) = divs.iter().enumerate().find(|(_, &d)| d != 1) {
            return Err(Error::NotSaturated { index: i, divisor: d });
        }

        let a = sub_basis.as_f64();
        let g = total.gram();
        let sub_gram = a.transpose().matmul(&g.matmul(&a));
        let sub = EuclideanLattice::from_gram(sub_gram)?;

        if k == n {
            return Ok(AdmissibleSequence {
                total: total.clone(),
                sub_basis: sub_basis.clone(),
                sub,
                quotient: EuclideanLattice::rank0(),
                quotient_map: IMat::zeros(0, n),
            });
        }

        // rows k.. of U form a surjection Z^n -> Z^{n-k} killing the sub;
        // HNF makes the emitted quotient basis canonical.
        let mut p = IMat::zeros(n - k, n);
        for i in 0..(n - k) {
            for j in 0..n {
                p[(i, j)] = snf.u[(k + i, j)];
            }
        }
        let (p_canon, _) = intmat::row_hnf(&p);
        let quotient = EuclideanLattice::from_gram(quotient_gram(g, sub.gram(), &a, &p_canon)?)?;

        Ok(AdmissibleSequence {
            total: total.clone(),
            sub_basis: sub_basis.clone(),
            sub,
            quotient,
            quotient_map: p_canon,
        })
    }

    /// deg(total) - deg(sub) - deg(quotient); zero up to rounding.
    pub fn degree_residual(&self) -> f64 {
        self.total.degree() - self.sub.degree() - self.quotient.degree()
    }
}

/// Quotient Gram through a surjection with kernel spanned by `kernel` (as
/// f64 columns): Schur complement eliminating the kernel block.
fn quotient_gram(g: &Mat, kernel_gram: &Mat, kernel: &Mat, map: &IMat) -> Result<Mat> {
    let lift = intmat::right_inverse(map)?.as_f64();
    let m1 = lift.transpose().matmul(&g.matmul(&lift));
    let cross = kernel.transpose().matmul(&g.matmul(&lift));
    let kchol = kernel_gram.cholesky()?;
    let mut s = m1.clone();
    // S = M1 - cross^T (K^T G K)^{-1} cross, column by column
    for j in 0..cross.cols {
        let col: Vec<f64> = (0..cross.rows).map(|i| cross[(i, j)]).collect();
        let solved = kchol.solve(&col);
        for jj in 0..cross.cols {
            let mut acc = 0.0;
            for i in 0..cross.rows {
                acc += cross[(i, jj)] * solved[i];
            }
            s[(jj, j)] -= acc;
        }
    }
    // symmetrize before validation
    for i in 0..s.rows {
        for j in (i + 1)..s.cols {
            let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = avg;
            s[(j, i)] = avg;
        }
    }
    Ok(s)
}

/// Quotient Gram of `source_gram` through the integer surjection `map`,
/// used to validate projective systems.
pub fn quotient_gram_through(map: &IMat, source_gram: &Mat) -> Result<Mat> {
    let kernel = intmat::kernel_basis(map);
    if kernel.cols == 0 {
        // bijective change of basis: G' = L^T G L
        let lift = intmat::right_inverse(map)?.as_f64();
        return Ok(lift.transpose().matmul(&source_gram.matmul(&lift)));
    }
    let kf = kernel.as_f64();
    let kg = kf.transpose().matmul(&source_gram.matmul(&kf));
    quotient_gram(source_gram, &kg, &kf, map)
}

/// Gram matrix of the direct image of a rank-one bundle along a degree-r
/// number field: `G_ij = sum_sigma x_sigma(b_i) conj(x_sigma(b_j))`. Rows of
/// `embeddings` are the embeddings, columns the integral basis images; rows
/// must come in conjugation-stable families.
pub fn direct_image_gram(embeddings: &[Vec<Complex64>]) -> Result<EuclideanLattice> {
    let r = embeddings.len();
    assert!(r > 0, "need at least one embedding");
    let n = embeddings[0].len();
    for row in embeddings {
        assert_eq!(row.len(), n, "ragged embedding matrix");
    }
    // conjugation stability: every row's conjugate must appear as a row
    for row in embeddings {
        let found = embeddings.iter().any(|other| {
            row.iter().zip(other).all(|(a, b)| (a.conj() - b).norm() <= 1e-9 * (1.0 + a.norm()))
        });
        if !found {
            return Err(Error::DomainError(
                "embedding rows are not conjugation-stable".into(),
            ));
        }
    }
    let mut g = Mat::zeros(n, n);
    let mut max_im: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in embeddings {
                acc += row[i] * row[j].conj();
            }
            max_im = max_im.max(acc.im.abs());
            g[(i, j)] = acc.re;
        }
    }
    if max_im > 1e-9 {
        return Err(Error::DomainError(format!(
            "realified gram has imaginary residue {max_im:e}"
        )));
    }
    EuclideanLattice::from_gram(g)
}

/// A few size-reduction sweeps on the Gram matrix, for conditioning random
/// test lattices only. Returns a lattice isometric to the input.
pub(crate) fn size_reduce(lattice: &EuclideanLattice, sweeps: usize) -> EuclideanLattice {
    let n = lattice.rank();
    if n < 2 {
        return lattice.clone();
    }
    let mut g = lattice.gram().clone();
    for _ in 0..sweeps {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mu = (g[(i, j)] / g[(j, j)]).round();
                if mu != 0.0 {
                    // b_i <- b_i - mu b_j
                    for t in 0..n {
                        let update = mu * g[(j, t)];
                        g[(i, t)] -= update;
                    }
                    for t in 0..n {
                        let update = mu * g[(t, j)];
                        g[(t, i)] -= update;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    EuclideanLattice::from_gram(g).expect("unimodular change of basis keeps SPD")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn brute_force_enumerate(l: &EuclideanLattice, r2: f64) -> Vec<Vec<i64>> {
        // box radius from the inverse Cholesky norm: |v_i| <= |e_i^T L^{-T}| r
        let n = l.rank();
        let chol = l.cholesky().unwrap();
        let ginv = chol.inverse();
        let r = r2.sqrt();
        let bounds: Vec<i64> = (0..n)
            .map(|i| (r * ginv[(i, i)].sqrt() + 1.0).floor() as i64)
            .collect();
        let mut out = Vec::new();
        let mut v = vec![0i64; n];
        fn rec(l: &EuclideanLattice, bounds: &[i64], v: &mut Vec<i64>, i: usize, r2: f64, out: &mut Vec<Vec<i64>>) {
            if i == v.len() {
                if l.norm_squared(v) <= r2 {
                    out.push(v.clone());
                }
                return;
            }
            for x in -bounds[i]..=bounds[i] {
                v[i] = x;
                rec(l, bounds, v, i + 1, r2, out);
            }
        }
        rec(l, &bounds, &mut v, 0, r2, &mut out);
        out.sort();
        out
    }

    #[test]
    fn make_lattice_examples() {
        let z = EuclideanLattice::from_gram(Mat::from_rows(&[vec![1.0]])).unwrap();
        assert_eq!(z.rank(), 1);
        assert!((z.covolume() - 1.0).abs() < 1e-15);

        let a2 = EuclideanLattice::hexagonal();
        assert!((a2.covolume() - (3f64).sqrt() / 2.0).abs() < 1e-12);

        let mut g = Mat::from_rows(&[vec![1.0, 0.5], vec![0.5, 0.9]]);
        g[(0, 1)] += 1e-6;
        assert!(matches!(
            EuclideanLattice::from_gram(g),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn covolume_and_degree() {
        let z3 = EuclideanLattice::standard(3);
        assert_eq!(z3.covolume(), 1.0);
        assert_eq!(z3.degree(), 0.0);

        let a2 = EuclideanLattice::hexagonal();
        assert!((a2.degree() - -( (3f64).sqrt() / 2.0 ).ln()).abs() < 1e-12);
        assert!((a2.degree() - 0.14384).abs() < 1e-5);

        // rescaling Z^n by delta adds n delta to the degree
        let r = z3.rescale(0.7);
        assert!((r.degree() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn dual_examples() {
        let z2 = EuclideanLattice::standard(2);
        let d = z2.dual();
        assert!((d.gram()[(0, 0)] - 1.0).abs() < 1e-15);

        let a2 = EuclideanLattice::hexagonal();
        let a2d = a2.dual();
        assert!((a2d.gram()[(0, 0)] - 4.0 / 3.0).abs() < 1e-12);
        assert!((a2d.gram()[(0, 1)] - 2.0 / 3.0).abs() < 1e-12);
        let back = a2d.dual();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back.gram()[(i, j)] - a2.gram()[(i, j)]).abs() < 1e-10);
            }
        }

        let o = EuclideanLattice::line_bundle(0.8);
        let od = o.dual();
        assert!((od.gram()[(0, 0)] - (1.6f64).exp()).abs() < 1e-12);

        // deg(dual) = -deg
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let l = random_spd_lattice(&mut rng, 4);
            assert!((l.dual().degree() + l.degree()).abs() < 1e-9);
        }
    }

    #[test]
    fn direct_sum_blocks() {
        let z = EuclideanLattice::standard(1);
        let z2 = z.direct_sum(&z);
        assert_eq!(z2.rank(), 2);
        assert_eq!(z2.gram()[(0, 1)], 0.0);

        let a2 = EuclideanLattice::hexagonal();
        let s = a2.direct_sum(&z);
        assert_eq!(s.rank(), 3);
        assert!((s.covolume() - (3f64).sqrt() / 2.0).abs() < 1e-12);
        assert!((s.degree() - (a2.degree() + z.degree())).abs() < 1e-9);
    }

    #[test]
    fn enumerate_examples() {
        let z2 = EuclideanLattice::standard(2);
        let pts = z2.enumerate(1.0).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().any(|p| p.coords == vec![0, 0]));

        let a2 = EuclideanLattice::hexagonal();
        let pts = a2.enumerate(1.0).unwrap();
        assert_eq!(pts.len(), 7);

        let z = EuclideanLattice::standard(1);
        let pts = z.enumerate(6.25).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0].coords, vec![-2]);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        let mut rng = SplitMix64::new(99);
        for trial in 0..40 {
            let n = 1 + (trial % 4);
            let l = random_spd_lattice(&mut rng, n);
            let r2 = 0.5 + 2.0 * rng.next_f64();
            let fast: Vec<Vec<i64>> =
                l.enumerate(r2).unwrap().into_iter().map(|p| p.coords).collect();
            let brute = brute_force_enumerate(&l, r2);
            assert_eq!(fast, brute, "mismatch for gram {:?} r2={}", l.gram(), r2);
        }
    }

    #[test]
    fn enumerate_cap() {
        let z2 = EuclideanLattice::standard(2);
        match z2.enumerate_with_cap(100.0, 10) {
            Err(Error::CountCapExceeded { found, cap }) => {
                assert!(found > cap);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn admissible_orthogonal_split() {
        let z2 = EuclideanLattice::standard(2);
        let sub = IMat::from_rows(&[vec![1], vec![0]]);
        let seq = AdmissibleSequence::new(&z2, &sub).unwrap();
        assert!((seq.sub.gram()[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((seq.quotient.gram()[(0, 0)] - 1.0).abs() < 1e-14);
        assert!(seq.degree_residual().abs() < 1e-9);
    }

    #[test]
    fn admissible_perturbed_hexagonal_quotient() {
        // total = lambda(x^2 - xy) + y^2, sub = Z e_1: quotient norm 1 - lambda/4
        for &lambda in &[0.5, 1.0, 2.0, 3.5] {
            let e = EuclideanLattice::perturbed_hexagonal(lambda).unwrap();
            let sub = IMat::from_rows(&[vec![1], vec![0]]);
            let seq = AdmissibleSequence::new(&e, &sub).unwrap();
            assert!(
                (seq.quotient.gram()[(0, 0)] - (1.0 - lambda / 4.0)).abs() < 1e-12,
                "lambda={lambda}"
            );
            assert!(seq.degree_residual().abs() < 1e-9);
        }
    }

    #[test]
    fn admissible_rejects_unsaturated() {
        let z2 = EuclideanLattice::standard(2);
        let sub = IMat::from_rows(&[vec![2], vec![0]]);
        assert!(matches!(
            AdmissibleSequence::new(&z2, &sub),
            Err(Error::NotSaturated { divisor: 2, .. })
        ));
    }

    #[test]
    fn admissible_quotient_is_basis_independent() {
        // two different generators of the same sublattice give the same
        // canonical quotient gram
        let mut rng = SplitMix64::new(17);
        for _ in 0..30 {
            let l = random_spd_lattice(&mut rng, 3);
            let sub = IMat::from_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]]);
            // change of generators: right-multiply by a unimodular 2x2
            let t = IMat::from_rows(&[vec![1, 1], vec![0, 1]]);
            let sub2 = sub.matmul(&t);
            let s1 = AdmissibleSequence::new(&l, &sub).unwrap();
            let s2 = AdmissibleSequence::new(&l, &sub2).unwrap();
            assert!((s1.quotient.gram()[(0, 0)] - s2.quotient.gram()[(0, 0)]).abs() < 1e-10);
            assert!((s1.sub.degree() - s2.sub.degree()).abs() < 1e-10);
        }
    }

    #[test]
    fn direct_image_number_fields() {
        // Q with basis {1}
        let q = direct_image_gram(&[vec![Complex64::new(1.0, 0.0)]]).unwrap();
        assert!((q.covolume() - 1.0).abs() < 1e-14);

        // Q(sqrt 5), basis {1, (1+sqrt5)/2}, two real embeddings
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let psi = (1.0 - 5f64.sqrt()) / 2.0;
        let k = direct_image_gram(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(phi, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(psi, 0.0)],
        ])
        .unwrap();
        assert!((k.gram()[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((k.gram()[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((k.gram()[(1, 1)] - 3.0).abs() < 1e-12);
        assert!((k.covolume() - 5f64.sqrt()).abs() < 1e-12);
        assert!((k.degree() + 0.5 * 5f64.ln()).abs() < 1e-12);

        // Q(i), basis {1, i}, conjugate pair of embeddings
        let gi = direct_image_gram(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
        ])
        .unwrap();
        assert!((gi.gram()[(0, 0)] - 2.0).abs() < 1e-12);
        assert!(gi.gram()[(0, 1)].abs() < 1e-12);
        assert!((gi.covolume() - 2.0).abs() < 1e-12);

        // a conjugation-unstable matrix is rejected
        assert!(direct_image_gram(&[vec![Complex64::new(0.0, 1.0)]]).is_err());
    }

    #[test]
    fn rank0_base_case() {
        let l = EuclideanLattice::rank0();
        assert_eq!(l.covolume(), 1.0);
        assert_eq!(l.degree(), 0.0);
        let pts = l.enumerate(1.0).unwrap();
        assert_eq!(pts.len(), 1);
    }

    pub(crate) fn random_spd_lattice(rng: &mut SplitMix64, n: usize) -> EuclideanLattice {
        // random lower-triangular factor with controlled diagonal
        let mut l = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = rng.next_range(-0.5, 0.5);
            }
            l[(i, i)] = rng.next_range(0.6, 1.5);
        }
        let g = l.matmul(&l.transpose());
        size_reduce(&EuclideanLattice::from_gram(g).unwrap(), 4)
    }
}

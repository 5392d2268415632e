//! Exact integer matrix arithmetic: Smith and Hermite normal forms.
//!
//! Saturation of sublattices, surjectivity of quotient maps and unimodular
//! basis completions all reduce to Smith normal form over Z. The matrices
//! here are tiny (rank <= 8) with small entries, so plain `i64` with checked
//! multiplication is exact and fast.

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        IMat { rows: r, cols: c, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.checked_mul(other[(k, j)]).expect("integer overflow");
                    out[(i, j)] = out[(i, j)].checked_add(p).expect("integer overflow");
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)].checked_mul(v[j]).expect("integer overflow"))
                    .fold(0i64, |a, b| a.checked_add(b).expect("integer overflow"))
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_f64(&self) -> crate::linalg::Mat {
        let rows: Vec<Vec<f64>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as f64).collect())
            .collect();
        crate::linalg::Mat::from_rows(&rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self[(a, j)];
            self[(a, j)] = self[(b, j)];
            self[(b, j)] = t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let t = self[(i, a)];
            self[(i, a)] = self[(i, b)];
            self[(i, b)] = t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)];
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            self[(i, a)] = -self[(i, a)];
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: i64) {
        for c in 0..self.cols {
            let p = k.checked_mul(self[(j, c)]).expect("integer overflow");
            self[(i, c)] = self[(i, c)].checked_add(p).expect("integer overflow");
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: i64) {
        for r in 0..self.rows {
            let p = k.checked_mul(self[(r, j)]).expect("integer overflow");
            self[(r, i)] = self[(r, i)].checked_add(p).expect("integer overflow");
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form U * A * V = D with U, V unimodular.
///
/// `u_inv` and `v_inv` are maintained alongside so that unimodular inverses
/// come for free (every elementary operation is inverted on the fly).
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IMat,
    pub u: IMat,
    pub v: IMat,
    // maintained alongside so unimodularity is checkable exactly
    #[allow(dead_code)]
    pub u_inv: IMat,
    #[allow(dead_code)]
    pub v_inv: IMat,
}

impl Snf {
    /// Diagonal entries of D (the elementary divisors, nonnegative).
    pub fn divisors(&self) -> Vec<i64> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith_normal_form(a: &IMat) -> Snf {
    let mut d = a.clone();
    let (r, c) = (d.rows, d.cols);
    let mut u = IMat::identity(r);
    let mut u_inv = IMat::identity(r);
    let mut v = IMat::identity(c);
    let mut v_inv = IMat::identity(c);

    let mut t = 0;
    while t < r.min(c) {
        // find a nonzero pivot of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if d[(i, j)] != 0 {
                    let better = match best {
                        None => true,
                        Some(b) => d[(i, j)].abs() < d[b].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        // clear the pivot row and column by Euclidean reduction
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in (t + 1)..r {
                if d[(i, t)] != 0 {
                    let q = d[(i, t)].div_euclid(d[(t, t)]);
                    if q != 0 {
                        d.add_row(i, t, -q);
                        u.add_row(i, t, -q);
                        u_inv.add_col(t, i, q);
                    }
                    if d[(i, t)] != 0 {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        u_inv.swap_cols(t, i);
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..c {
                if d[(t, j)] != 0 {
                    let q = d[(t, j)].div_euclid(d[(t, t)]);
                    if q != 0 {
                        d.add_col(j, t, -q);
                        v.add_col(j, t, -q);
                        v_inv.add_row(t, j, q);
                    }
                    if d[(t, j)] != 0 {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        v_inv.swap_rows(t, j);
                        dirty = true;
                    }
                }
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    // enforce divisibility d_i | d_{i+1}
    let k = r.min(c);
    loop {
        let mut fixed = true;
        for i in 0..k.saturating_sub(1) {
            let (a_, b_) = (d[(i, i)], d[(i + 1, i + 1)]);
            if a_ != 0 && b_ % a_ != 0 {
                // fold b into position (i, i) via gcd steps
                d.add_col(i, i + 1, 1);
                v.add_col(i, i + 1, 1);
                v_inv.add_row(i + 1, i, -1);
                // re-clear the 2x2 block
                let mut dirty = true;
                while dirty {
                    dirty = false;
                    if d[(i + 1, i)] != 0 {
                        let q = d[(i + 1, i)].div_euclid(d[(i, i)]);
                        if q != 0 {
                            d.add_row(i + 1, i, -q);
                            u.add_row(i + 1, i, -q);
                            u_inv.add_col(i, i + 1, q);
                        }
                        if d[(i + 1, i)] != 0 {
                            d.swap_rows(i, i + 1);
                            u.swap_rows(i, i + 1);
                            u_inv.swap_cols(i, i + 1);
                            dirty = true;
                        }
                    }
                    if d[(i, i + 1)] != 0 {
                        let q = d[(i, i + 1)].div_euclid(d[(i, i)]);
                        if q != 0 {
                            d.add_col(i + 1, i, -q);
                            v.add_col(i + 1, i, -q);
                            v_inv.add_row(i, i + 1, q);
                        }
                        if d[(i, i + 1)] != 0 {
                            d.swap_cols(i, i + 1);
                            v.swap_cols(i, i + 1);
                            v_inv.swap_rows(i, i + 1);
                            dirty = true;
                        }
                    }
                }
                if d[(i, i)] < 0 {
                    d.negate_row(i);
                    u.negate_row(i);
                    u_inv.negate_col(i);
                }
                if d[(i + 1, i + 1)] < 0 {
                    d.negate_row(i + 1);
                    u.negate_row(i + 1);
                    u_inv.negate_col(i + 1);
                }
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }

    Snf { d, u, v, u_inv, v_inv }
}

/// Row Hermite normal form H = W * A with W unimodular.
///
/// Pivots are positive, entries below a pivot are zero, entries above are
/// reduced into `[0, pivot)`. This is the canonical representative of the
/// left-GL_n(Z) orbit of A, used to normalize quotient maps.
pub fn row_hnf(a: &IMat) -> (IMat, IMat) {
    let mut h = a.clone();
    let mut w = IMat::identity(a.rows);
    let (r, c) = (h.rows, h.cols);
    let mut row = 0;
    for col in 0..c {
        if row >= r {
            break;
        }
        // gcd the column entries at/under `row` into the pivot slot
        loop {
            let mut piv: Option<usize> = None;
            for i in row..r {
                if h[(i, col)] != 0 {
                    let better = match piv {
                        None => true,
                        Some(p) => h[(i, col)].abs() < h[(p, col)].abs(),
                    };
                    if better {
                        piv = Some(i);
                    }
                }
            }
            let Some(p) = piv else { break };
            h.swap_rows(row, p);
            w.swap_rows(row, p);
            let mut again = false;
            for i in (row + 1)..r {
                if h[(i, col)] != 0 {
                    let q = h[(i, col)].div_euclid(h[(row, col)]);
                    h.add_row(i, row, -q);
                    w.add_row(i, row, -q);
                    if h[(i, col)] != 0 {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if h[(row, col)] == 0 {
            continue;
        }
        if h[(row, col)] < 0 {
            h.negate_row(row);
            w.negate_row(row);
        }
        for i in 0..row {
            let q = h[(i, col)].div_euclid(h[(row, col)]);
            if q != 0 {
                h.add_row(i, row, -q);
                w.add_row(i, row, -q);
            }
        }
        row += 1;
    }
    (h, w)
}

/// Basis of the integer kernel of `a`, as columns; saturated by construction.
pub fn kernel_basis(a: &IMat) -> IMat {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let mut k = IMat::zeros(a.cols, a.cols - rank);
    for (out_j, j) in (rank..a.cols).enumerate() {
        for i in 0..a.cols {
            k[(i, out_j)] = snf.v[(i, j)];
        }
    }
    k
}

/// Integer right inverse of a surjective map (all elementary divisors 1).
pub fn right_inverse(a: &IMat) -> Result<IMat> {
    let snf = smith_normal_form(a);
    let divs = snf.divisors();
    if divs.len() < a.rows || divs.contains(&0) {
        return Err(Error::RankDeficient);
    }
    if let Some(&d) = divs.iter().find(|&&d| d != 1) {
        return Err(Error::NotSurjective { divisor: d });
    }
    // U A V = [I | 0]  =>  A * (V [I;0] U) = I
    let mut pad = IMat::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        pad[(i, i)] = 1;
    }
    Ok(snf.v.matmul(&pad).matmul(&snf.u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IMat) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.matmul(a).matmul(&s.v), s.d, "U A V != D");
        assert_eq!(s.u.matmul(&s.u_inv), IMat::identity(a.rows), "U inverse");
        assert_eq!(s.v.matmul(&s.v_inv), IMat::identity(a.cols), "V inverse");
        let divs = s.divisors();
        for w in divs.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain");
            }
        }
    }

    #[test]
    fn snf_simple() {
        check_snf(&IMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        check_snf(&IMat::from_rows(&[vec![1, 0], vec![0, 1]]));
        check_snf(&IMat::from_rows(&[vec![2, 0], vec![0, 3]]));
        check_snf(&IMat::from_rows(&[vec![0, 0], vec![0, 0]]));
    }

    #[test]
    fn snf_saturated_column() {
        let a = IMat::from_rows(&[vec![1], vec![0]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.divisors(), vec![1]);
        let a2 = IMat::from_rows(&[vec![2], vec![0]]);
        let s2 = smith_normal_form(&a2);
        assert_eq!(s2.divisors(), vec![2]);
    }

    #[test]
    fn snf_pseudorandom_small() {
        let mut rng = crate::rng::SplitMix64::new(42);
        for _ in 0..200 {
            let r = 1 + (rng.next_u64() % 4) as usize;
            let c = 1 + (rng.next_u64() % 4) as usize;
            let mut rows = Vec::new();
            for _ in 0..r {
                rows.push((0..c).map(|_| (rng.next_u64() % 11) as i64 - 5).collect());
            }
            check_snf(&IMat::from_rows(&rows));
        }
    }

    #[test]
    fn hnf_is_left_equivalent() {
        let a = IMat::from_rows(&[vec![2, 3, 1], vec![4, 1, 0]]);
        let (h, w) = row_hnf(&a);
        assert_eq!(w.matmul(&a), h);
        // pivots positive, below-pivot zero
        assert!(h[(0, 0)] > 0);
        assert_eq!(h[(1, 0)], 0);
    }

    #[test]
    fn kernel_of_projection() {
        let q = IMat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let k = kernel_basis(&q);
        assert_eq!(k.cols, 1);
        assert_eq!(q.matmul(&k), IMat::zeros(2, 1));
        let l = right_inverse(&q).unwrap();
        assert_eq!(q.matmul(&l), IMat::identity(2));
    }

    #[test]
    fn right_inverse_rejects_nonsurjective() {
        let q = IMat::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(matches!(right_inverse(&q), Err(Error::NotSurjective { divisor: 2 })));
    }
}

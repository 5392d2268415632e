//! Subadditivity of theta invariants on admissible sequences and the Gext
//! functional on the extension torus.
//!
//! An extension class T in Hom(G_R, E_R) twists the direct sum metric to
//! |(e, g)|_T^2 = |e - T g|_E^2 + |g|_G^2. The Gaussian sum over the twisted
//! lattice,
//!
//!   Gext(T) = sum_{(e,g)} e^{-pi |(e,g)|_T^2},
//!
//! is periodic in T modulo integral maps, maximal exactly at the integral
//! points, and its normalized torus average has the closed form
//! 1 - (1 - e^{-h1(E)}) (1 - e^{-h0(G)}).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::{AdmissibleSequence, EuclideanLattice};
use crate::linalg::Mat;
use crate::theta::{h0_theta, h1_theta, theta};

/// A point of Hom(G_R, E_R) in the chosen bases: rank(E) x rank(G).
#[derive(Debug, Clone)]
pub struct ExtensionPoint {
    pub matrix: Mat,
}

impl ExtensionPoint {
    pub fn new(matrix: Mat) -> Self {
        for i in 0..matrix.rows {
            for j in 0..matrix.cols {
                assert!(matrix[(i, j)].is_finite(), "extension twist must be finite");
            }
        }
        ExtensionPoint { matrix }
    }

    pub fn zero(rank_e: usize, rank_g: usize) -> Self {
        ExtensionPoint { matrix: Mat::zeros(rank_e, rank_g) }
    }
}

/// Subadditivity defect h_theta = h0(sub) - h0(total) + h0(quotient) of an
/// admissible sequence; nonnegative, zero exactly on split sequences.
pub fn h_theta_defect(seq: &AdmissibleSequence) -> Result<f64> {
    Ok(h0_theta(&seq.sub)? - h0_theta(&seq.total)? + h0_theta(&seq.quotient)?)
}

/// Whether the defect is zero within the combined certified tolerance.
pub fn is_split(seq: &AdmissibleSequence) -> Result<bool> {
    Ok(h_theta_defect(seq)?.abs() <= 2e-9)
}

/// The lattice E (+) G with the metric twisted by T.
pub fn twisted_direct_sum(
    e: &EuclideanLattice,
    g: &EuclideanLattice,
    t: &ExtensionPoint,
) -> Result<EuclideanLattice> {
    let (ke, kg) = (e.rank(), g.rank());
    assert_eq!(t.matrix.rows, ke, "twist rows must match rank(E)");
    assert_eq!(t.matrix.cols, kg, "twist cols must match rank(G)");
    let ge = e.gram();
    let gg = g.gram();
    let get = ge.matmul(&t.matrix); // G_E T
    let tget = t.matrix.transpose().matmul(&get); // T^T G_E T
    let n = ke + kg;
    let mut gram = Mat::zeros(n, n);
    for i in 0..ke {
        for j in 0..ke {
            gram[(i, j)] = ge[(i, j)];
        }
        for j in 0..kg {
            gram[(i, ke + j)] = -get[(i, j)];
            gram[(ke + j, i)] = -get[(i, j)];
        }
    }
    for i in 0..kg {
        for j in 0..kg {
            gram[(ke + i, ke + j)] = gg[(i, j)] + tget[(i, j)];
        }
    }
    EuclideanLattice::from_gram(gram)
}

/// Gext(T): theta at t = 1 of the twisted direct sum, certified to `tol`.
pub fn gext(
    e: &EuclideanLattice,
    g: &EuclideanLattice,
    t: &ExtensionPoint,
    tol: f64,
) -> Result<f64> {
    let twisted = twisted_direct_sum(e, g, t)?;
    Ok(theta(&twisted, 1.0, tol)?.value)
}

/// Gext(T) through the dual route: covol(E) times the Fourier sum over
/// E_dual x G with phase e^{2 pi i <e_dual, T g>}. Independent of [`gext`];
/// used to cross-check it.
pub fn gext_dual_series(
    e: &EuclideanLattice,
    g: &EuclideanLattice,
    t: &ExtensionPoint,
    tol: f64,
) -> Result<f64> {
    let e_dual = e.dual();
    let te = theta(&e_dual, 1.0, tol)?;
    let tg = theta(g, 1.0, tol)?;
    let pts_dual = e_dual.enumerate(te.truncation_radius2.max(1e-9))?;
    let pts_g = g.enumerate(tg.truncation_radius2.max(1e-9))?;
    let mut sum = 0.0;
    for ed in &pts_dual {
        // phase row: e_dual^T T, then per g the phase is its pairing with g
        let edf: Vec<f64> = ed.coords.iter().map(|&c| c as f64).collect();
        let mut row = vec![0.0; g.rank()];
        for (j, rj) in row.iter_mut().enumerate() {
            for (i, &ei) in edf.iter().enumerate() {
                *rj += ei * t.matrix[(i, j)];
            }
        }
        let we = (-PI * ed.normsq).exp();
        for gg in &pts_g {
            let phase: f64 = gg
                .coords
                .iter()
                .zip(&row)
                .map(|(&c, &r)| c as f64 * r)
                .sum();
            sum += we * (-PI * gg.normsq).exp() * (2.0 * PI * phase).cos();
        }
    }
    Ok(sum / e.covolume())
}

/// Trapezoidal average of Gext(T)/Gext(0) over the extension torus
/// Hom(G, E) tensor R/Z, on a uniform grid with `grid` points per
/// dimension. The integrand is real-analytic and periodic, so the uniform
/// grid converges spectrally. Exhaustive grids are limited to 3 torus
/// dimensions.
pub fn gext_average(
    e: &EuclideanLattice,
    g: &EuclideanLattice,
    grid: usize,
) -> Result<f64> {
    if grid < 8 {
        return Err(Error::GridTooCoarse { grid, min: 8 });
    }
    let dims = e.rank() * g.rank();
    assert!(
        (1..=3).contains(&dims),
        "exhaustive torus grids are limited to rank(E) * rank(G) <= 3"
    );
    let gext0 = gext(e, g, &ExtensionPoint::zero(e.rank(), g.rank()), 1e-12)?;
    let total_points = grid.pow(dims as u32);
    let mut acc = 0.0;
    for flat in 0..total_points {
        let mut rem = flat;
        let mut t = Mat::zeros(e.rank(), g.rank());
        for i in 0..e.rank() {
            for j in 0..g.rank() {
                t[(i, j)] = (rem % grid) as f64 / grid as f64;
                rem /= grid;
            }
        }
        acc += gext(e, g, &ExtensionPoint::new(t), 1e-12)?;
    }
    Ok(acc / (total_points as f64 * gext0))
}

/// Closed form of the torus average: 1 - (1 - e^{-h1(E)})(1 - e^{-h0(G)}).
pub fn gext_average_closed_form(e: &EuclideanLattice, g: &EuclideanLattice) -> Result<f64> {
    Ok(1.0 - (1.0 - (-h1_theta(e)?).exp()) * (1.0 - (-h0_theta(g)?).exp()))
}

/// The six alternating partial sums of the long cohomology-style chain of
/// an admissible sequence; signs alternate >= 0 / <= 0 and the last one
/// vanishes.
pub fn alternating_chain(seq: &AdmissibleSequence) -> Result<[f64; 6]> {
    let h0e = h0_theta(&seq.sub)?;
    let h0f = h0_theta(&seq.total)?;
    let h0g = h0_theta(&seq.quotient)?;
    let h1e = h1_theta(&seq.sub)?;
    let h1f = h1_theta(&seq.total)?;
    let h1g = h1_theta(&seq.quotient)?;
    Ok([
        h0e,
        h0e - h0f,
        h0e - h0f + h0g,
        h0e - h0f + h0g - h1e,
        h0e - h0f + h0g - h1e + h1f,
        h0e - h0f + h0g - h1e + h1f - h1g,
    ])
}

/// Assert the sign pattern of [`alternating_chain`] within `tol`.
pub fn check_alternating_chain(seq: &AdmissibleSequence, tol: f64) -> Result<()> {
    let sums = alternating_chain(seq)?;
    let ok = sums[0] >= -tol
        && sums[1] <= tol
        && sums[2] >= -tol
        && sums[3] <= tol
        && sums[4] >= -tol
        && sums[5].abs() <= tol;
    if !ok {
        return Err(Error::ViolationDetected(format!(
            "alternating chain signs violated: {sums:?}"
        )));
    }
    Ok(())
}

/// Convenience wrapper used by the CLI: defect plus split flag.
pub fn defect_report(seq: &AdmissibleSequence) -> Result<(f64, bool)> {
    let d = h_theta_defect(seq)?;
    if d < -2e-9 {
        return Err(Error::ViolationDetected(format!(
            "negative subadditivity defect {d}"
        )));
    }
    Ok((d, d.abs() <= 2e-9))
}

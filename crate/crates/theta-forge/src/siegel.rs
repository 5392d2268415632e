//! Exact Haar sampling of rank-2 unimodular lattices and Monte Carlo checks
//! of the Siegel mean values.
//!
//! A rank-2 lattice class of degree delta is a point tau = x + iy of the
//! modular fundamental domain (|x| <= 1/2, |tau| >= 1) carrying the
//! hyperbolic probability measure (3/pi) dx dy / y^2. Inverse-transform
//! sampling is exact: the x-marginal has density proportional to
//! (1 - x^2)^{-1/2}, so x = sin(theta) with theta uniform on
//! [-pi/6, pi/6], and conditionally y = sqrt(1 - x^2) / (1 - u).
//!
//! Under this measure the Gaussian and counting sums have exact averages
//!
//!   E[e^{h0}] = 1 + e^delta,
//!   E[e^{h0_ar(., t)}] = 1 + pi t e^delta,
//!
//! but e^{h0} has infinite variance (the cusp contributes a tail of index
//! 2), so the estimator is median-of-means over blocks rather than a plain
//! average.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::EuclideanLattice;
use crate::linalg::Mat;
use crate::rng::SplitMix64;
use crate::theta::theta;

/// Point tau = x + i y of the standard modular fundamental domain.
#[derive(Debug, Clone, Copy)]
pub struct ModularPoint {
    pub x: f64,
    pub y: f64,
}

impl ModularPoint {
    pub fn is_in_fundamental_domain(&self) -> bool {
        self.x.abs() <= 0.5 + 1e-12 && self.x * self.x + self.y * self.y >= 1.0 - 1e-12
    }
}

/// Draw one fundamental-domain point by exact inverse transforms.
pub fn sample_modular_point(rng: &mut SplitMix64) -> ModularPoint {
    let theta_angle = rng.next_range(-PI / 6.0, PI / 6.0);
    let x = theta_angle.sin();
    let u = rng.next_f64();
    let y = (1.0 - x * x).sqrt() / (1.0 - u);
    ModularPoint { x, y }
}

/// The lattice Z + Z tau rescaled to covolume e^{-delta}: Gram
/// (e^{-delta}/y) [[1, x], [x, x^2 + y^2]], of determinant e^{-2 delta}
/// exactly.
pub fn lattice_from_point(p: &ModularPoint, delta: f64) -> EuclideanLattice {
    let c = (-delta).exp() / p.y;
    let gram = Mat::from_rows(&[
        vec![c, c * p.x],
        vec![c * p.x, c * (p.x * p.x + p.y * p.y)],
    ]);
    EuclideanLattice::from_gram(gram).expect("fundamental-domain Gram is SPD")
}

/// Sample number `index` of the stream seeded by `seed`.
pub fn sample_lattice2(seed: u64, index: u64, delta: f64) -> (EuclideanLattice, ModularPoint) {
    let mut rng = SplitMix64::derive(seed, index);
    let p = sample_modular_point(&mut rng);
    (lattice_from_point(&p, delta), p)
}

/// Median-of-means estimate with an interquartile spread proxy.
#[derive(Debug, Clone)]
pub struct SiegelEstimate {
    pub estimate: f64,
    /// IQR-based standard-error proxy of the block means.
    pub spread: f64,
    pub blocks: usize,
    pub samples: usize,
    /// Samples that hit the enumeration cap and were re-drawn.
    pub redraws: usize,
}

pub const DEFAULT_BLOCKS: usize = 32;

fn median_of_means(values: &[f64], blocks: usize) -> (f64, f64) {
    assert!(blocks >= 2 && values.len() >= blocks);
    let block_len = values.len() / blocks;
    let mut means: Vec<f64> = (0..blocks)
        .map(|b| {
            let slice = &values[b * block_len..(b + 1) * block_len];
            slice.iter().sum::<f64>() / block_len as f64
        })
        .collect();
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if blocks.is_multiple_of(2) {
        0.5 * (means[blocks / 2 - 1] + means[blocks / 2])
    } else {
        means[blocks / 2]
    };
    let q25 = means[blocks / 4];
    let q75 = means[3 * blocks / 4];
    let spread = (q75 - q25) / 1.349 / (blocks as f64).sqrt();
    (median, spread)
}

/// Monte Carlo median-of-means of e^{h0} over degree-delta classes;
/// exact mean 1 + e^delta.
pub fn siegel_average_h0theta(delta: f64, n_samples: usize, seed: u64) -> Result<SiegelEstimate> {
    assert!(n_samples >= 1000, "need at least 10^3 samples");
    let values: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let (lattice, _) = sample_lattice2(seed, i, delta);
            theta(&lattice, 1.0, 1e-10).map(|r| r.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (estimate, spread) = median_of_means(&values, DEFAULT_BLOCKS);
    Ok(SiegelEstimate {
        estimate,
        spread,
        blocks: DEFAULT_BLOCKS,
        samples: n_samples,
        redraws: 0,
    })
}

/// Monte Carlo median-of-means of the exact point counts e^{h0_ar(., t)};
/// exact mean 1 + pi t e^delta. Samples whose count exceeds the cap are
/// re-drawn from a fresh stream and reported.
pub fn siegel_average_count(
    delta: f64,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<SiegelEstimate> {
    assert!(n_samples >= 1000, "need at least 10^3 samples");
    assert!(t > 0.0);
    const COUNT_CAP: u64 = 10_000_000;
    let drawn: Vec<(f64, usize)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut index = i;
            let mut redraws = 0usize;
            loop {
                let (lattice, _) = sample_lattice2(seed, index, delta);
                match lattice.enumerate_with_cap(t, COUNT_CAP) {
                    Ok(pts) => return Ok((pts.len() as f64, redraws)),
                    Err(Error::CountCapExceeded { .. }) => {
                        redraws += 1;
                        index = n_samples as u64 + i * 16 + redraws as u64;
                        if redraws > 16 {
                            return Err(Error::CountCapExceeded {
                                found: COUNT_CAP,
                                cap: COUNT_CAP,
                            });
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        })
        .collect::<Result<Vec<(f64, usize)>>>()?;
    let values: Vec<f64> = drawn.iter().map(|d| d.0).collect();
    let redraws = drawn.iter().map(|d| d.1).sum();
    let (estimate, spread) = median_of_means(&values, DEFAULT_BLOCKS);
    Ok(SiegelEstimate {
        estimate,
        spread,
        blocks: DEFAULT_BLOCKS,
        samples: n_samples,
        redraws,
    })
}

/// Exact targets of the two averages.
pub fn target_h0theta(delta: f64) -> f64 {
    1.0 + delta.exp()
}

pub fn target_count(delta: f64, t: f64) -> f64 {
    1.0 + PI * t * delta.exp()
}

/// Empirical frequencies of the two comparison events
/// h0_ar(., t) - h0 >= / <= log[(1 + pi t e^delta)/(1 + e^delta)]; both are
/// positive because the two averages normalize each other.
pub fn comparison_witness_frequencies(
    delta: f64,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let threshold = (target_count(delta, t) / target_h0theta(delta)).ln();
    let mut ge = 0usize;
    let mut le = 0usize;
    for i in 0..n_samples as u64 {
        let (lattice, _) = sample_lattice2(seed, i, delta);
        let h0 = theta(&lattice, 1.0, 1e-10)?.log_value;
        let count = lattice.enumerate(t)?.len() as f64;
        let diff = count.ln() - h0;
        if diff >= threshold {
            ge += 1;
        }
        if diff <= threshold {
            le += 1;
        }
    }
    Ok((ge as f64 / n_samples as f64, le as f64 / n_samples as f64))
}

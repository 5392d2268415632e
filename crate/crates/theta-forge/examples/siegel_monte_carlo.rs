//! Exact Haar sampling of rank-2 unimodular lattice classes and the Siegel
//! mean values of Gaussian and counting sums.
//!
//! ```bash
//! cargo run --release --example siegel_monte_carlo
//! ```

use theta_forge::siegel::{
    comparison_witness_frequencies, sample_lattice2, siegel_average_count,
    siegel_average_h0theta, target_count, target_h0theta,
};

fn main() {
    // a few samples: fundamental-domain points and exact determinants
    println!("five samples at delta = 0:");
    for i in 0..5 {
        let (l, p) = sample_lattice2(42, i, 0.0);
        println!(
            "  tau = {:+.6} + {:.6} i   covol = {:.12}",
            p.x,
            p.y,
            l.covolume()
        );
    }

    // E[e^{h0}] = 1 + e^delta, with a heavy cusp tail handled by
    // median-of-means
    for delta in [0.0, 1.0, -5.0] {
        let est = siegel_average_h0theta(delta, 100_000, 7).unwrap();
        println!(
            "\ndelta = {delta}: median-of-means of e^h0 = {:.6} (target {:.6}, spread {:.4})",
            est.estimate,
            target_h0theta(delta),
            est.spread
        );
    }

    // E[e^{h0_ar(., t)}] = 1 + pi t e^delta with exact point counts
    let est = siegel_average_count(0.0, 1.0, 100_000, 7).unwrap();
    println!(
        "\ncount average at t = 1: {:.6} (target 1 + pi = {:.6}, {} redraws)",
        est.estimate,
        target_count(0.0, 1.0),
        est.redraws
    );

    // Minkowski-style existence: with v2 t e^delta < 1, a positive fraction
    // of classes has lambda1^2 > t
    let t = 1.0 / (2.0 * std::f64::consts::PI);
    let mut hits = 0;
    let n = 10_000;
    for i in 0..n {
        let (l, _) = sample_lattice2(3, i, 0.0);
        if l.enumerate(t).unwrap().len() == 1 {
            hits += 1;
        }
    }
    println!(
        "\nfraction with lambda1^2 > 1/(2 pi): {:.4} (v2 t e^delta = 0.5 < 1)",
        hits as f64 / n as f64
    );

    // both comparison events occur with positive frequency
    let (ge, le) = comparison_witness_frequencies(0.0, 1.0, 5_000, 19).unwrap();
    println!("\ncomparison witnesses: P(diff >= threshold) = {ge:.4}, P(diff <= threshold) = {le:.4}");
}

//! Point counts, first minima, covering radii, transference bounds, and
//! the comparison of counting and theta invariants.
//!
//! ```bash
//! cargo run --release --example counting_profile
//! ```

use theta_forge::profile::{
    comparison_suite, covering_radius_interval, h0_ar, lambda1, transference_check,
    CountingProfile, TransferenceConstants,
};
use theta_forge::{AdmissibleSequence, EuclideanLattice, IMat};

fn main() {
    let a2 = EuclideanLattice::hexagonal();

    // cumulative counting function N_E up to |v|^2 = 4
    let profile = CountingProfile::build(&a2, 4.0).unwrap();
    println!("A2 counting profile:");
    println!("  t        N_E(sqrt t)");
    for (t, c) in profile.thresholds.iter().zip(&profile.counts) {
        println!("  {t:<8} {c}");
    }

    let min = lambda1(&a2).unwrap();
    println!("\nlambda1(A2) = {} with multiplicity {}", min.lambda1, min.multiplicity);

    // exact covering radii in rank <= 2, sampled CVP bracket above
    let (lo, hi) = covering_radius_interval(&a2, 100, 1).unwrap();
    println!("rho(A2) = {lo:.12} (exact; 1/sqrt(3) = {:.12})", 1.0 / 3f64.sqrt());
    let z3 = EuclideanLattice::standard(3);
    let (lo3, hi3) = covering_radius_interval(&z3, 5000, 3).unwrap();
    println!("rho(Z^3) in [{lo3:.4}, {hi3:.4}]  (true value sqrt(3)/2 = {:.4})", 3f64.sqrt() / 2.0);
    let _ = hi;

    // transference: rho * lambda1(dual) <= t_n^2 n / (2 pi)
    for n in [1u32, 2, 8, 64] {
        let c = TransferenceConstants::new(n);
        println!(
            "t_{n} = {:.6}  bound t_n^2 n/(2 pi) = {:.6}  closed-form candidate {:.6} ({})",
            c.t_n,
            c.product_bound(),
            c.closed_form_candidate(),
            if c.closed_form_candidate() >= c.t_n { "holds" } else { "undershoots" }
        );
    }
    let report = transference_check(&a2, 50, 9).unwrap();
    println!(
        "A2: rho * lambda1(dual) = {:.6} in [1/2, {:.6}]",
        report.rho_exact.unwrap() * report.lambda1_dual,
        report.product_bound
    );

    // two-sided comparison of h0_ar and h0_theta
    let cmp = comparison_suite(&a2).unwrap();
    println!(
        "\nh0_ar(A2, 1) = {:.6}; slack to the lower/upper theta bounds: {:.4} / {:.4}",
        cmp.h0_ar_1, cmp.lower_slack, cmp.upper_slack
    );

    // the counting invariant is NOT subadditive: perturbed hexagonal family
    let e2 = EuclideanLattice::perturbed_hexagonal(2.0).unwrap();
    let seq = AdmissibleSequence::new(&e2, &IMat::from_rows(&[vec![1], vec![0]])).unwrap();
    let total = h0_ar(&e2, 1.0).unwrap();
    let sub = h0_ar(&seq.sub, 1.0).unwrap();
    let quot = h0_ar(&seq.quotient, 1.0).unwrap();
    println!("\ncounting subadditivity fails on E_2 = [[2,-1],[-1,1]]:");
    println!("  h0_ar(total) = {total:.4} > h0_ar(sub) + h0_ar(quotient) = {:.4}", sub + quot);
}

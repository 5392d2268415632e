//! Projective systems of lattices at finite truncation: summability,
//! limit brackets, closed-form diagonal families, the arithmetic Hardy
//! invariant, and limit measures.
//!
//! ```bash
//! cargo run --release --example pro_lattices
//! ```

use theta_forge::prolim::{
    hardy_invariant, limit_h0, limit_measure_truncation, summability_report, DiagonalProFamily,
};

fn main() {
    // the diagonal family lambda_i = 4^i: limit h0 = sum tau(4^i)
    let fam = DiagonalProFamily::Explicit((0..8).map(|i| 4f64.powi(i)).collect());
    let sys = fam.truncate(8).unwrap();
    let lim = limit_h0(&sys).unwrap();
    println!("diagonal family lambda_i = 4^i, truncated at depth 8:");
    println!("  level h0: {:?}", lim.level_h0.iter().map(|x| format!("{x:.8}")).collect::<Vec<_>>());
    println!("  limit bracket: [{:.10}, {:.10}]", lim.lower, lim.upper);
    println!("  closed form sum tau(4^i) = {:.10}", fam.closed_form_limit(1e-14));

    // summability report with a positive twist
    let report = summability_report(&sys, 0.5).unwrap();
    println!(
        "\nkernels twisted by O(1/2): partial sums {:?}",
        report.partial_sums.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()
    );
    println!(
        "  fitted log-slope {:?}, strongly summable (this filtration): {}",
        report.fitted_slope, report.strongly_summable_hint
    );

    // a constant family diverges linearly
    let constant = DiagonalProFamily::Explicit(vec![1.0; 8]).truncate(8).unwrap();
    let creport = summability_report(&constant, 0.0).unwrap();
    println!(
        "\nconstant family partial sums grow linearly: last = {:.6} after {} kernels",
        creport.partial_sums.last().unwrap(),
        creport.partial_sums.len()
    );
    println!("  limit_h0: {:?}", limit_h0(&constant).err());

    // the arithmetic Hardy invariant h(R, delta): finite iff R > 1,
    // growing like delta^2 / (2 log R)
    println!("\nHardy invariants:");
    for (r, delta) in [(1.0, 5.0), (2.0, 0.0), (2.0, 10.0), (std::f64::consts::E, 40.0)] {
        let h = hardy_invariant(r, delta, 1e-12);
        println!("  h({r:.3}, {delta:>4}) = {h:.6}");
    }
    let r = std::f64::consts::E;
    let d = 40.0;
    println!(
        "  h(e, 40)/40^2 = {:.4} (asymptotic slope 1/(2 log e) = 0.5)",
        hardy_invariant(r, d, 1e-12) / (d * d)
    );

    // limit measures: pushforward Gaussian masses converge atomwise within
    // two-sided brackets
    let hardy = DiagonalProFamily::Hardy { r: 4.0, delta: 0.0 };
    let hsys = hardy.truncate(6).unwrap();
    let measures = limit_measure_truncation(&hsys, 3, 1e-8).unwrap();
    println!("\nHardy R = 4 system, atom masses at level 1:");
    for atom in &measures[1].atoms {
        let last = atom.mass_at_depth.last().unwrap();
        println!(
            "  atom {:?}: mass -> {:.9} in [{:.9}, {:.9}]",
            atom.coords, last.1, atom.lower, atom.upper
        );
    }
    println!(
        "  domination q_* gamma_(i+1) <= e^(h0 kernel) gamma_i holds on all levels: {}",
        measures.iter().all(|m| m.domination_ok)
    );
}

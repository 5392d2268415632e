//! Certified theta series, the scalar functions tau and eta, the
//! functional equation, and the rank-one / first-minimum upper bounds.
//!
//! ```bash
//! cargo run --release --example theta_series
//! ```

use theta_forge::theta::{
    eta, eta0, groenewegen_bound, groenewegen_closed_bound, line_bundle_bounds, omega, tau,
};
use theta_forge::{theta, EuclideanLattice};

fn main() {
    println!("omega = {:.10}   (pi^(1/4) / Gamma(3/4))", omega());
    println!("eta0  = {:.10}   (= h0 of the trivial rank-one lattice)\n", eta0());

    // certified evaluation: the true sum lies in [value, value(1+rel_error)]
    let a2 = EuclideanLattice::hexagonal();
    for t in [0.25, 1.0, 4.0] {
        let r = theta(&a2, t, 1e-10).unwrap();
        println!(
            "theta_A2({t})  = {:.12}   rel_error <= {:.2e}   ({} points, r^2 = {:.2})",
            r.value, r.rel_error, r.points_used, r.truncation_radius2
        );
    }

    // functional equation: log theta_E(t) = -(n/2) log t + deg E + log theta_dual(1/t)
    let dual = a2.dual();
    let t = 0.37;
    let lhs = theta(&a2, t, 1e-12).unwrap().log_value;
    let rhs = -t.ln() + a2.degree() + theta(&dual, 1.0 / t, 1e-12).unwrap().log_value;
    println!("\nfunctional equation residual at t = {t}: {:+.3e}", lhs - rhs);

    // tau and its Poisson symmetry tau(x) = tau(1/x) - (1/2) log x
    println!("\ntau(1) = {:.10}", tau(1.0));
    println!("tau(4) - tau(1/4) + (1/2) log 4 = {:+.3e}", tau(4.0) - tau(0.25) + 0.5 * 4f64.ln());
    println!("eta(2) = {:.6e}  <=  3 e^(-pi e^4) = {:.6e}", eta(2.0), 3.0 * (-std::f64::consts::PI * (4f64).exp()).exp());

    // line bundles: h0 <= 1 + t for t >= 0, exponential decay for t <= 0
    for deg in [-2.0, 0.0, 1.5] {
        let b = line_bundle_bounds(deg, 1);
        let actual = theta_forge::h0_theta(&EuclideanLattice::line_bundle(deg)).unwrap();
        println!("deg {deg:+}: h0 = {actual:.6e}  <=  bound {:.6e}", b.bound);
    }

    // Groenewegen: e^{h0} - 1 <= C(n, lambda1)
    let c11 = groenewegen_bound(1, 1.0);
    println!(
        "\nC(1,1) = {:.6}; omega - 1 = {:.6} <= C(1,1): {}",
        c11,
        omega() - 1.0,
        omega() - 1.0 <= c11
    );
    println!(
        "closed form at (2, 1.5): {:.6e} >= quadrature {:.6e}",
        groenewegen_closed_bound(2, 1.5).unwrap(),
        groenewegen_bound(2, 1.5)
    );

    // additivity of h0 and h1 under direct sums
    let z = EuclideanLattice::standard(1);
    let sum = a2.direct_sum(&z);
    println!(
        "\nadditivity residual: {:+.3e}",
        theta_forge::h0_theta(&sum).unwrap()
            - theta_forge::h0_theta(&a2).unwrap()
            - theta_forge::h0_theta(&z).unwrap()
    );
}

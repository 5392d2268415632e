//! The log-Laplace / energy / entropy formalism: Legendre duality, the
//! asymptotic counting invariant, the Fekete oracle, the second law, and
//! Gibbs maximum entropy.
//!
//! ```bash
//! cargo run --release --example legendre_thermo
//! ```

use theta_forge::thermo::{
    entropy_s, fekete_oracle, from_lattice, htilde0_ar, legendre_sup, max_entropy_check,
    maxwell_entropy_closed, maxwell_psi_closed, maxwell_space, second_law_split,
};
use theta_forge::EuclideanLattice;

fn main() {
    let z = EuclideanLattice::standard(1);
    let space = from_lattice(&z, 0.125, 1e-12).unwrap();

    // Psi(beta) = log theta(beta); U = -Psi'; S = Legendre dual
    println!("Z as an energy space (H = pi v^2):");
    for beta in [0.25, 1.0, 4.0] {
        let psi = space.psi(beta).unwrap();
        let u = space.energy_u(beta).unwrap();
        let s = entropy_s(&space, u).unwrap();
        println!(
            "  beta {beta:<5} Psi = {psi:+.9}  U = {u:.9}  S(U) = {:.9}  (critical beta {:.6})",
            s.s, s.beta
        );
    }

    // duality round trip: sup_x (S(x) - beta x) recovers Psi(beta)
    let beta = 1.0;
    let (sup, xstar) = legendre_sup(&space, beta).unwrap();
    println!(
        "\nsup_x(S(x) - x) = {sup:.10} vs Psi(1) = {:.10} (argmax x = {xstar:.6})",
        space.psi(1.0).unwrap()
    );

    // htilde0_ar: the Fekete limit of (1/n) log counts, via Legendre duality
    println!("\nhtilde0_ar(Z, 1) = {:.9}", htilde0_ar(&z, 1.0).unwrap());
    println!("finite-n DP values (exact on integer norms):");
    for step in fekete_oracle(&z, 1.0, 8).unwrap() {
        println!("  n = {}: {:.9}  (bracket {:.1e})", step.n, step.value, step.bracket);
    }

    // second law: the direct-sum invariant is the optimal energy split
    let (best, argmax) = second_law_split(&z, &z, 1.0, 1e-4).unwrap();
    let whole = htilde0_ar(&EuclideanLattice::standard(2), 1.0).unwrap();
    println!("\nsecond law on Z (+) Z at t = 1:");
    println!("  max split value {best:.9} at t1 = {argmax:.5}");
    println!("  htilde0_ar(Z^2, 1) = {whole:.9}");

    // the Maxwell space reproduces its closed forms
    println!("\nMaxwell space, dim 3, m = 1/(2 pi):");
    let m = 1.0 / (2.0 * std::f64::consts::PI);
    let maxwell = maxwell_space(3, m, 20_000);
    for beta in [0.5, 1.0, 2.0] {
        println!(
            "  Psi({beta}) = {:+.6} (closed {:+.6})",
            maxwell.psi(beta).unwrap(),
            maxwell_psi_closed(3, m, beta)
        );
    }
    let x = 1.5;
    println!(
        "  S({x}) = {:.6} (closed {:.6})",
        entropy_s(&maxwell, x).unwrap().s,
        maxwell_entropy_closed(3, m, x)
    );

    // Gibbs measures maximize entropy at fixed mean energy
    let report = max_entropy_check(&space, 1.0, 64, 11).unwrap();
    println!(
        "\nGibbs max entropy on truncated Z: I = {:.9} = S(U(1)) = {:.9}; {}/{} random energy-preserving perturbations decreased I",
        report.gibbs_entropy,
        report.legendre_entropy,
        report.perturbations_nonincreasing,
        report.perturbations_tried
    );
}

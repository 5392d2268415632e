//! Build lattices from Gram data, bases, rescalings and number-field
//! embeddings; print their basic invariants.
//!
//! ```bash
//! cargo run --release --example invariants
//! ```

use num_complex::Complex64;
use theta_forge::{direct_image_gram, h0_theta, h1_theta, EuclideanLattice, Mat};

fn describe(name: &str, l: &EuclideanLattice) {
    let h0 = h0_theta(l).unwrap();
    let h1 = h1_theta(l).unwrap();
    println!("{name}");
    println!("  rank     {}", l.rank());
    println!("  covol    {:.12}", l.covolume());
    println!("  deg      {:+.12}", l.degree());
    println!("  h0_theta {:.12}", h0);
    println!("  h1_theta {:.12}", h1);
    println!("  h0 - h1 - deg = {:+.3e}  (Poisson-Riemann-Roch residual)", h0 - h1 - l.degree());
}

fn main() {
    describe("Z^3 (standard)", &EuclideanLattice::standard(3));

    describe("A2 (hexagonal)", &EuclideanLattice::hexagonal());

    // degree-delta line bundle: Gram [[e^{-2 delta}]]
    describe("O(0.7)", &EuclideanLattice::line_bundle(0.7));

    // rescaling adds rank * delta to the degree
    let rescaled = EuclideanLattice::hexagonal().rescale(1.0);
    describe("A2 rescaled by delta = 1", &rescaled);

    // direct sums have block Gram matrices and additive invariants
    let sum = EuclideanLattice::hexagonal().direct_sum(&EuclideanLattice::standard(1));
    describe("A2 (+) Z", &sum);

    // the ring of integers of Q(sqrt 5) under its two real embeddings
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let psi = (1.0 - 5f64.sqrt()) / 2.0;
    let ok5 = direct_image_gram(&[
        vec![Complex64::new(1.0, 0.0), Complex64::new(phi, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(psi, 0.0)],
    ])
    .unwrap();
    describe("O_{Q(sqrt 5)} as a rank-2 lattice (covol = sqrt 5)", &ok5);

    // duals invert the Gram matrix
    let dual = EuclideanLattice::hexagonal().dual();
    println!("\nA2 dual Gram:");
    for row in dual.gram().to_rows() {
        println!("  {row:?}");
    }

    // enumeration underlies everything: the 7 shortest vectors of A2
    let pts = EuclideanLattice::hexagonal().enumerate(1.0).unwrap();
    println!("\nA2 vectors with |v|^2 <= 1:");
    for p in pts {
        println!("  {:?}  |v|^2 = {}", p.coords, p.normsq);
    }

    // a saturated sublattice and its metric quotient
    let e2 = EuclideanLattice::perturbed_hexagonal(2.0).unwrap();
    let seq = theta_forge::AdmissibleSequence::new(
        &e2,
        &theta_forge::IMat::from_rows(&[vec![1], vec![0]]),
    )
    .unwrap();
    println!("\nE_2 = [[2,-1],[-1,1]] with sub Z e1:");
    println!("  sub gram      {:?}", seq.sub.gram().to_rows());
    println!("  quotient gram {:?}", seq.quotient.gram().to_rows());
    println!("  deg residual  {:+.3e}", seq.degree_residual());

    let empty = Mat::from_rows(&[vec![1.0, 0.5], vec![0.5000001, 0.9]]);
    println!("\nasymmetric input is rejected: {:?}", EuclideanLattice::from_gram(empty).err());
}

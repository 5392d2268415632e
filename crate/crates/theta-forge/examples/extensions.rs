//! Subadditivity of theta invariants on admissible sequences and the Gext
//! functional on the extension torus.
//!
//! ```bash
//! cargo run --release --example extensions
//! ```

use theta_forge::ext::{
    alternating_chain, gext, gext_average, gext_average_closed_form, gext_dual_series,
    h_theta_defect, ExtensionPoint,
};
use theta_forge::{AdmissibleSequence, EuclideanLattice, IMat, Mat};

fn main() {
    // the defect h0(sub) - h0(total) + h0(quotient) is nonnegative and
    // vanishes exactly on split sequences
    let z2 = EuclideanLattice::standard(2);
    let split = AdmissibleSequence::new(&z2, &IMat::from_rows(&[vec![1], vec![0]])).unwrap();
    println!("orthogonal split defect: {:+.3e}", h_theta_defect(&split).unwrap());

    let skew = EuclideanLattice::perturbed_hexagonal(2.0).unwrap();
    let seq = AdmissibleSequence::new(&skew, &IMat::from_rows(&[vec![1], vec![0]])).unwrap();
    println!("skew family defect:      {:+.6e}", h_theta_defect(&seq).unwrap());

    // the six alternating partial sums of the chain; signs alternate and
    // the last one vanishes
    println!("\nalternating chain on the skew sequence:");
    for (i, s) in alternating_chain(&seq).unwrap().iter().enumerate() {
        println!("  partial sum {}: {s:+.6e}", i + 1);
    }

    // Gext across the extension torus: periodic, maximal at integral twists
    let z = EuclideanLattice::standard(1);
    println!("\nGext on Hom(Z, Z) tensor R/Z:");
    for tv in [0.0, 0.25, 0.5, 1.0] {
        let pt = ExtensionPoint::new(Mat::from_rows(&[vec![tv]]));
        let direct = gext(&z, &z, &pt, 1e-12).unwrap();
        let dual = gext_dual_series(&z, &z, &pt, 1e-12).unwrap();
        println!("  T = {tv:<5} Gext = {direct:.12}  (dual route {dual:.12})");
    }

    // the exact torus average of Gext(T)/Gext(0)
    let avg = gext_average(&z, &z, 256).unwrap();
    let closed = gext_average_closed_form(&z, &z).unwrap();
    println!("\ntorus average (grid 256): {avg:.12}");
    println!("closed form:              {closed:.12}");
    println!("difference:               {:+.3e}", avg - closed);

    // a rank-2 x rank-1 pair
    let a2 = EuclideanLattice::hexagonal();
    let avg = gext_average(&a2, &z, 32).unwrap();
    let closed = gext_average_closed_form(&a2, &z).unwrap();
    println!("\nA2 x Z average (grid 32 per dim): {avg:.9} vs closed {closed:.9}");
}

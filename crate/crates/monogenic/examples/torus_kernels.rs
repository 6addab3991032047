//! Full-rank (torus) kernels: the two-point monogenic kernel whose character
//! drives conditional convergence, and the four-point harmonic Green kernel
//! with the sign pattern that makes it periodic.
//!
//! Run with: `cargo run --release --example torus_kernels`

use monogenic::algebra::Vector;
use monogenic::lattice::{Lattice, Pairing, TruncationPolicy};
use monogenic::operators::{apply_operator_fd, OperatorKind, DEFAULT_H};
use monogenic::series::{
    torus_kernel, torus_kernel_with_reading, FourPointReading, TorusKind,
};

fn main() -> monogenic::Result<()> {
    let n = 3;
    let lat = Lattice::cubic(n, 3, 1)?;
    let policy = TruncationPolicy::new(10, 1.0, Pairing::ExpandingBox)?;

    // two point singularities a and b, incongruent modulo the lattice
    let a = Vector::new(vec![0.15, 0.2, 0.3]);
    let b = Vector::new(vec![0.6, 0.55, 0.45]);
    let x = Vector::new(vec![0.31, 0.9, 0.7]);
    let two = torus_kernel(&x, &[a.clone(), b.clone()], &lat, TorusKind::TwoPointMonogenic, &policy)?;
    println!("two-point kernel at x: {}", two.value);
    println!("  Cauchy increment of the outermost box: {:.3e}", two.cauchy_delta.unwrap());

    // four anchors for the harmonic kernel
    let anchors = vec![
        Vector::new(vec![0.1, 0.15, 0.2]),
        Vector::new(vec![0.6, 0.4, 0.7]),
        Vector::new(vec![0.35, 0.75, 0.5]),
        Vector::new(vec![0.8, 0.2, 0.35]),
    ];
    let probe = Vector::new(vec![0.45, 0.5, 0.9]);
    let four = torus_kernel(&probe, &anchors, &lat, TorusKind::FourPointHarmonic, &policy)?;
    println!("\nfour-point kernel at x: {}", four.value);
    let f4 = {
        let anchors = anchors.clone();
        let lat = lat.clone();
        move |v: &Vector| {
            Ok(torus_kernel(v, &anchors, &lat, TorusKind::FourPointHarmonic, &policy)?.value)
        }
    };
    let lap = apply_operator_fd(&f4, &probe, OperatorKind::Laplace, DEFAULT_H)?;
    println!("  harmonicity residual: {:.3e}", lap.norm());
    let shifted =
        torus_kernel(&probe.add(&lat.basis()[0]), &anchors, &lat, TorusKind::FourPointHarmonic, &policy)?;
    println!(
        "  character periodicity defect (omega_1, chi = -1): {:.3e}",
        (&shifted.value - &four.value.scale(-1.0)).norm()
    );

    // the literal display is kept for comparison; it is not periodic
    let lit = torus_kernel_with_reading(
        &probe,
        &anchors,
        &lat,
        TorusKind::FourPointHarmonic,
        &policy,
        FourPointReading::Literal,
    )?;
    let lit_shift = torus_kernel_with_reading(
        &probe.add(&lat.basis()[1]),
        &anchors,
        &lat,
        TorusKind::FourPointHarmonic,
        &policy,
        FourPointReading::Literal,
    )?;
    println!(
        "  literal-display periodicity defect (for comparison): {:.3e}",
        (&lit_shift.value - &lit.value).norm()
    );
    Ok(())
}

//! The base kernels and their operator residuals: the Cauchy kernel G is
//! monogenic, the Green kernel H is harmonic, and the Taylor-jet partial
//! derivatives match finite differences.
//!
//! Run with: `cargo run --release --example kernel_residuals`

use monogenic::algebra::{Multivector, Vector};
use monogenic::jet::MultiIndex;
use monogenic::kernels::{cauchy_g, green_h, hyper_kernel, kernel_partial, HyperKind, KernelKind};
use monogenic::operators::{residual_scan, OperatorKind, Region, DEFAULT_H};

fn main() -> monogenic::Result<()> {
    for n in [3u32, 4] {
        let region = Region::Annulus { n, r0: 0.5, r1: 2.0 };
        let g = |v: &Vector| cauchy_g(v);
        let h = move |v: &Vector| Ok(Multivector::scalar(n, green_h(v)?));
        let rg = residual_scan(&g, OperatorKind::Dirac, &region, DEFAULT_H, 100, 1, &|_| false)?;
        let rh = residual_scan(&h, OperatorKind::Laplace, &region, DEFAULT_H, 100, 2, &|_| false)?;
        println!("n = {n}:");
        println!("  max |D G|  over 100 points = {:.3e} (worst at {:?})", rg.max_residual, rg.worst_point);
        println!("  max |ΔH|   over 100 points = {:.3e}", rh.max_residual);
    }

    // hypermonogenic kernels of the upper half-space
    let x = Vector::axis(3, 3, 2.0);
    let y = Vector::axis(3, 3, 1.0);
    println!("\np1(2 e_n, e_n) = {}", hyper_kernel(&x, &y, HyperKind::P1)?);
    println!("p2(2 e_n, e_n) = {}", hyper_kernel(&x, &y, HyperKind::P2)?);

    // exact partial derivatives by jet propagation
    let z = Vector::new(vec![0.9, -0.4, 0.6]);
    let d = kernel_partial(KernelKind::GreenH, &MultiIndex(vec![1, 0, 0]), &z)?;
    println!("\ndH/dz_1 at {z} = {}", d.scalar_part());
    let d2 = kernel_partial(KernelKind::CauchyG, &MultiIndex(vec![1, 1, 0]), &z)?;
    println!("d^2 G/dz_1 dz_2 at {z} = {d2}");
    Ok(())
}

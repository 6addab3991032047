//! The Szegő/Poisson/Bergman kernels of half the Hopf manifold and the
//! Poisson solve of the Dirichlet problem on the annulus boundary.
//!
//! Run with: `cargo run --release --example dirichlet_poisson`

use monogenic::algebra::Vector;
use monogenic::integrals::{dirichlet_solve, half_hopf_kernel, HalfHopfKernel};
use monogenic::lattice::{Pairing, TruncationPolicy};
use monogenic::quadrature::half_hopf_boundary_mesh;
use monogenic::series::HopfParams;

fn main() -> monogenic::Result<()> {
    let params = HopfParams::new(2)?;
    let policy = TruncationPolicy::new(14, 1.0, Pairing::None)?;
    let x = Vector::new(vec![1.2, 0.4, 0.0]); // boundary point
    let w = Vector::new(vec![0.3, 0.2, 1.2]); // interior point

    let s = half_hopf_kernel(&x, &w, HalfHopfKernel::Szego, params, &policy)?;
    let p = half_hopf_kernel(&x, &w, HalfHopfKernel::Poisson, params, &policy)?;
    let b = half_hopf_kernel(&x, &w, HalfHopfKernel::BergmanMonogenic, params, &policy)?;
    println!("Szegő kernel S(x,w)      = {s}");
    println!("Poisson kernel 2 Sc(S)   = {}", p.scalar_part());
    println!("Bergman kernel 2 dS/dw_n = {b}");

    // Dirichlet solve with g = cos(theta) on a 32x32 mesh
    let mesh = half_hopf_boundary_mesh(2, 32, 32, 3)?;
    let g: Vec<f64> = mesh
        .nodes
        .iter()
        .map(|x| {
            let r = (x.get(0) * x.get(0) + x.get(1) * x.get(1)).sqrt();
            x.get(0) / r
        })
        .collect();
    let theta0 = 1.0f64;
    let r0 = 1.4;
    let probes: Vec<Vector> = [1.0, 0.7, 0.5, 0.35]
        .iter()
        .map(|d| Vector::new(vec![r0 * theta0.cos(), r0 * theta0.sin(), *d]))
        .collect();
    let sol = dirichlet_solve(&g, &mesh, params, &policy, &probes)?;
    println!("\nboundary data g = cos(theta); attainment toward g(x0) = {:.6}:", theta0.cos());
    for (pt, u) in probes.iter().zip(&sol.values) {
        println!(
            "  u at height {:.2}: {:.6} (error {:.4e})",
            pt.last(),
            u.scalar_part(),
            (u.scalar_part() - theta0.cos()).abs()
        );
    }
    for wmsg in &sol.warnings {
        println!("  warning: {wmsg}");
    }
    Ok(())
}

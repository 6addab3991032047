//! Kernels on the Hopf manifold S^1 x S^{n-1}: the dilation-periodized
//! Cauchy and Green kernels, their automorphy law, and the Cauchy integral
//! formula (Theorem-1-style reproduction) on a sphere inside the fundamental
//! annulus.
//!
//! Run with: `cargo run --release --example hopf_kernels`

use monogenic::algebra::Vector;
use monogenic::integrals::{reproduce_integral, ReproduceConfig, TheoremKind};
use monogenic::lattice::{Pairing, TruncationPolicy};
use monogenic::quadrature::sphere_quadrature;
use monogenic::series::{hopf_series, HopfKind, HopfParams};

fn main() -> monogenic::Result<()> {
    let n = 3;
    let params = HopfParams::new(2)?;
    let policy = TruncationPolicy::new(25, 1.0, Pairing::None)?;
    let x = Vector::new(vec![0.5, 0.4, 1.0]);
    let y = Vector::new(vec![-0.7, 0.9, 0.8]);

    let gh = hopf_series(&x, &y, params, HopfKind::G, &policy)?;
    println!("G_H(x, y)            = {}", gh.value);
    println!("  terms = {}, tail estimate = {:.3e}", gh.terms_summed, gh.tail_estimate);

    // dilation automorphy: G_H(x,y) = m^{(n-1)/2} G_H(m x, y)
    let scaled = hopf_series(&x.scale(2.0), &y, params, HopfKind::G, &policy)?;
    let w = 2f64.powf((n as f64 - 1.0) / 2.0);
    println!(
        "automorphy defect    = {:.3e} (tail budget {:.3e})",
        (&gh.value - &scaled.value.scale(w)).norm(),
        gh.tail_estimate + w * scaled.tail_estimate
    );

    // harmonic kernel with the (n-2)/2 weight
    let hh = hopf_series(&x, &y, params, HopfKind::H, &policy)?;
    let scaled = hopf_series(&x.scale(2.0), &y, params, HopfKind::H, &policy)?;
    let w = 2f64.powf((n as f64 - 2.0) / 2.0);
    println!(
        "H_H automorphy defect = {:.3e}",
        (&hh.value - &scaled.value.scale(w)).norm()
    );

    // Cauchy reproduction of a kernel section over a small sphere
    let y0 = Vector::new(vec![-0.9, 0.9, 0.6]);
    let f = {
        let y0 = y0.clone();
        move |v: &Vector| Ok(hopf_series(v, &y0, params, HopfKind::G, &policy)?.value)
    };
    let center = Vector::new(vec![0.4, 0.15, 1.25]);
    let surf = sphere_quadrature(&center, 0.2, 16, n)?;
    let mut cfg = ReproduceConfig::new(policy);
    cfg.hopf = Some(params);
    let rep = reproduce_integral(TheoremKind::HopfCauchy, &f, None, &surf, &center, &cfg)?;
    println!(
        "\nCauchy reproduction of G_H(., y0) at the center: err = {:.3e}",
        (&rep.value - &f(&center)?).norm()
    );
    println!(
        "  budgets: quadrature {:.3e}, truncation {:.3e}",
        rep.quadrature_budget, rep.truncation_budget
    );
    Ok(())
}

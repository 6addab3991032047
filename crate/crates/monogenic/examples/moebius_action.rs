//! Vahlen matrices and the Möbius action on R^n ∪ {∞}: group structure,
//! conformal weight factors, cocycles and the hypermonogenic pullback.
//!
//! Run with: `cargo run --release --example moebius_action`

use monogenic::algebra::{Multivector, Vector};
use monogenic::moebius::{
    cocycle_residual, hyper_conformal_pullback, moebius_apply, vahlen_check, weight_factor,
    VahlenMatrix, VahlenMode, WeightKind,
};

fn main() -> monogenic::Result<()> {
    let n = 3;
    let j = VahlenMatrix::inversion(n);
    let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));

    let report = vahlen_check(&j, VahlenMode::Special);
    println!("J special-Vahlen check: pass = {}", report.pass);
    for line in &report.details {
        println!("  {line}");
    }

    let x = Vector::new(vec![2.0, 0.0, 0.0]);
    println!("\nJ<2 e_1>          = {}", moebius_apply(&j, &x)?);
    println!("T_e1<2 e_1>       = {}", moebius_apply(&t, &x)?);
    let w = t.compose(&j);
    println!("(T J)<2 e_1>      = {}", moebius_apply(&w, &x)?);

    // weight factors: J1 of the inversion is the Cauchy kernel
    println!("\nJ1(J, x)          = {}", weight_factor(&j, &x, WeightKind::J1)?);
    println!("G(x)              = {}", monogenic::kernels::cauchy_g(&x)?);
    println!("J2(J, x)          = {}", weight_factor(&j, &x, WeightKind::J2)?);

    let probe = Vector::new(vec![0.3, 0.8, 0.5]);
    println!(
        "\ncocycle residual J1(M1 M2, x) vs J1(M2,x) J1(M1, M2<x>): {:.3e}",
        cocycle_residual(&j, &t, &probe, WeightKind::J1)?
    );

    // hypermonogenic pullback preserves the upper half-space structure
    let f = |v: &Vector| Ok(v.to_mv());
    let up = Vector::new(vec![0.3, 0.4, 1.2]);
    let pulled = hyper_conformal_pullback(&j, &f, &up)?;
    println!("hyper pullback of the identity field under J at {up}: {pulled}");
    let one = |_: &Vector| Ok(Multivector::one(n));
    println!(
        "hyper pullback of 1 under J at e_n: {}",
        hyper_conformal_pullback(&j, &one, &Vector::axis(n, 3, 1.0))?
    );
    Ok(())
}

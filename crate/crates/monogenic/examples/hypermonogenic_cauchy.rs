//! The hypermonogenic Cauchy formula: the pair (p1, p2) reproduces
//! null solutions of the modified Dirac operator on the upper half-space,
//! and its periodizations extend the formula to half the Hopf manifold and
//! to cylinders.
//!
//! Run with: `cargo run --release --example hypermonogenic_cauchy`

use monogenic::algebra::{Multivector, Vector};
use monogenic::integrals::{euclid_hyper_reproduce, reproduce_integral, ReproduceConfig, TheoremKind};
use monogenic::lattice::{Lattice, Pairing, TruncationPolicy};
use monogenic::operators::{apply_operator_fd, HyperbolicVariant, OperatorKind, DEFAULT_H};
use monogenic::quadrature::sphere_quadrature;
use monogenic::series::HopfParams;

fn main() -> monogenic::Result<()> {
    let n = 3;
    let y = Vector::new(vec![0.1, 0.0, 1.4]);
    let surf = sphere_quadrature(&y, 0.3, 20, n)?;

    // which operator variant a field satisfies decides whether the pair
    // formula reproduces it: f = x_n e_n is a leutwiler null solution,
    // f = x is not
    let one = |_: &Vector| Ok(Multivector::one(n));
    let xnen = |v: &Vector| Ok(Multivector::basis_vector(3, 3).scale(v.last()));
    let idf = |v: &Vector| Ok(v.to_mv());
    let probe = Vector::new(vec![0.4, -0.2, 1.2]);
    let fields: [(&str, &(dyn Fn(&Vector) -> monogenic::Result<Multivector> + Sync)); 3] =
        [("1", &one), ("x_n e_n", &xnen), ("x", &idf)];
    for (name, f) in fields {
        let lit = apply_operator_fd(f, &probe, OperatorKind::HyperbolicDirac(HyperbolicVariant::PaperLiteral), DEFAULT_H)?;
        let leu = apply_operator_fd(f, &probe, OperatorKind::HyperbolicDirac(HyperbolicVariant::Leutwiler), DEFAULT_H)?;
        let rep = euclid_hyper_reproduce(f, &surf, &y, true)?;
        let err = (&rep - &f(&y)?).norm();
        println!(
            "f = {name:8}: literal residual {:.1e}, leutwiler residual {:.1e}, reproduction error {err:.1e}",
            lit.norm(), leu.norm()
        );
    }

    // half the Hopf manifold (dilation-periodized kernels h1, h2)
    let params = HopfParams::new(2)?;
    let policy = TruncationPolicy::new(16, 1.0, Pairing::None)?;
    let mut cfg = ReproduceConfig::new(policy);
    cfg.hopf = Some(params);
    let rep = reproduce_integral(TheoremKind::HopfHyper, &one, None, &surf, &y, &cfg)?;
    println!("\nhalf-Hopf hypermonogenic reproduction of 1: {}", rep.value);
    println!("  {}", rep.reading_note.unwrap_or_default());

    // cylinder (lattice-periodized kernels c1, c2)
    let lat = Lattice::cubic(n, 1, 0)?;
    let mut cfg = ReproduceConfig::new(policy);
    cfg.lattice = Some(lat);
    let center = Vector::new(vec![0.3, 0.0, 1.2]);
    let surf = sphere_quadrature(&center, 0.25, 16, n)?;
    let rep = reproduce_integral(TheoremKind::CylinderHyper, &one, None, &surf, &center, &cfg)?;
    println!("cylinder hypermonogenic reproduction of 1: {}", rep.value);
    Ok(())
}

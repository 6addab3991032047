//! Mittag-Leffler construction of cylinder functions with prescribed
//! principal parts, and Laurent coefficient fitting near an isolated
//! singularity.
//!
//! Run with: `cargo run --release --example mittag_laurent`

use monogenic::algebra::{Multivector, Vector};
use monogenic::jet::MultiIndex;
use monogenic::lattice::{Lattice, Pairing, TruncationPolicy};
use monogenic::mittag::{laurent_fit, mittag_leffler_construct, Singularity};
use monogenic::operators::{apply_operator_fd, OperatorKind, DEFAULT_H};
use monogenic::series::{cot_series, CotKind};

fn main() -> monogenic::Result<()> {
    let n = 4;
    let lat = Lattice::cubic(n, 2, 1)?;
    let policy = TruncationPolicy::new(8, 1.0, Pairing::None)?;

    // a field with two prescribed singularities on the cylinder
    let a1 = Vector::new(vec![0.2, 0.3, 0.1, 0.4]);
    let a2 = Vector::new(vec![0.7, 0.8, 0.5, 0.6]);
    let mut coeff2 = Multivector::zero(n);
    coeff2.set_coeff(0b0011, 0.7);
    let field = mittag_leffler_construct(
        vec![
            Singularity {
                point: a1.clone(),
                terms: vec![(MultiIndex::zero(4), Multivector::one(n))],
            },
            Singularity {
                point: a2.clone(),
                terms: vec![(MultiIndex::unit(4, 0), coeff2)],
            },
        ],
        &lat,
        CotKind::Monogenic,
        policy,
        None,
    )?;

    let x = Vector::new(vec![0.45, -0.2, 0.8, 0.15]);
    println!("constructed field at {x}: {}", field.eval(&x)?);
    let f = |v: &Vector| field.eval(v);
    let d = apply_operator_fd(&f, &x, OperatorKind::Dirac, DEFAULT_H)?;
    println!("Dirac residual away from the poles: {:.3e}", d.norm());

    // Laurent fit around a1 recovers the planted principal part
    let fit = laurent_fit(&f, &a1, 1, &lat, CotKind::Monogenic, &policy, (0.08, 0.16))?;
    println!("\nLaurent fit around a1 (condition {:.2e}):", fit.condition_number);
    for (m, coeff) in &fit.coefficients {
        if coeff.norm() > 1e-8 {
            println!("  m = {m:?}: {coeff}");
        }
    }
    println!(
        "remainder sup-norms: inner {:.3e}, outer {:.3e} (ratio {:.2})",
        fit.remainder_inner, fit.remainder_outer, fit.remainder_ratio
    );

    // a regular field fits to nothing
    let far = Vector::new(vec![0.6, 0.75, 0.6, 0.8]);
    let latc = lat.clone();
    let smooth =
        move |v: &Vector| Ok(cot_series(&v.sub(&far), &latc, CotKind::Monogenic, &policy)?.value);
    let fit = laurent_fit(&smooth, &a1, 1, &lat, CotKind::Monogenic, &policy, (0.05, 0.11))?;
    let max_coeff = fit.coefficients.iter().map(|(_, c)| c.norm()).fold(0.0f64, f64::max);
    println!("\nregular field: largest fitted coefficient {max_coeff:.3e}");
    Ok(())
}

//! Cotangent series on conformally flat cylinders: lattice periodizations of
//! the Cauchy and Green kernels with spin characters, their periodicity, and
//! the translative Eisenstein (epsilon) series of higher pole order.
//!
//! Run with: `cargo run --release --example cylinder_cotangent`

use monogenic::algebra::Vector;
use monogenic::jet::MultiIndex;
use monogenic::lattice::{Lattice, Pairing, TruncationPolicy};
use monogenic::operators::{apply_operator_fd, OperatorKind, DEFAULT_H};
use monogenic::series::{cot_series, epsilon_series, CotKind};

fn main() -> monogenic::Result<()> {
    let n = 4;
    // rank-2 lattice in R^4 with spin split l = 1: the character flips sign
    // along the first period and is trivial along the second
    let lat = Lattice::cubic(n, 2, 1)?;
    let z = Vector::new(vec![0.37, 0.21, 0.4, 0.3]);
    let policy = TruncationPolicy::new(14, 1.0, Pairing::None)?;

    let base = cot_series(&z, &lat, CotKind::Monogenic, &policy)?;
    println!("cot_1(z) = {}", base.value);
    println!("  {} terms, tail {:.3e}", base.terms_summed, base.tail_estimate);

    for (j, sign) in [(0usize, -1.0), (1usize, 1.0)] {
        let sh = cot_series(&z.add(&lat.basis()[j]), &lat, CotKind::Monogenic, &policy)?;
        println!(
            "  shift by omega_{}: |cot(z+w) - ({:+}) cot(z)| = {:.3e}",
            j + 1,
            sign,
            (&sh.value - &base.value.scale(sign)).norm()
        );
    }

    // the series is monogenic away from the lattice translates
    let f = |v: &Vector| Ok(cot_series(v, &lat, CotKind::Monogenic, &policy)?.value);
    let d = apply_operator_fd(&f, &z, OperatorKind::Dirac, DEFAULT_H)?;
    println!("  Dirac residual at z: {:.3e}", d.norm());

    // harmonic cotangent at the boundary rank k = n-2 needs the character
    let exp_policy = TruncationPolicy::new(14, 1.0, Pairing::ExpandingBox)?;
    let harm = cot_series(&z, &lat, CotKind::Harmonic, &exp_policy)?;
    println!("\ncot_2(z) = {} (expanding boxes, Cauchy increment {:.3e})",
        harm.value, harm.cauchy_delta.unwrap());
    let lat0 = Lattice::cubic(n, 2, 0)?;
    println!(
        "  l = 0 at this rank is rejected: {}",
        cot_series(&z, &lat0, CotKind::Harmonic, &exp_policy).unwrap_err()
    );

    // epsilon series: termwise derivatives, lower-order decay relaxed
    let m = MultiIndex::unit(n as usize, 0);
    let eps = epsilon_series(&m, &z, &lat, CotKind::Monogenic, &policy)?;
    println!("\nepsilon_(1,0,0,0)(z) = {}", eps.value);
    let h = 1e-4;
    let mut zp = z.clone();
    zp.set(0, z.get(0) + h);
    let mut zm = z.clone();
    zm.set(0, z.get(0) - h);
    let fd = (&cot_series(&zp, &lat, CotKind::Monogenic, &policy)?.value
        - &cot_series(&zm, &lat, CotKind::Monogenic, &policy)?.value)
        .scale(0.5 / h);
    println!("  vs central difference of cot: {:.3e}", (&eps.value - &fd).norm());
    Ok(())
}

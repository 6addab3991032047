//! Arithmetic groups and Eisenstein series: the hypercomplex modular group,
//! its congruence subgroups, word-length coset enumeration, limits toward
//! +e_n ∞ and the paired cancellation of the J1 series.
//!
//! Run with: `cargo run --release --example eisenstein_series`

use monogenic::algebra::{Multivector, Vector};
use monogenic::groups::{
    eisenstein_series, enumerate_cosets, group_generators, is_member, EisensteinKind, GroupKind,
    GroupSpec,
};

fn main() -> monogenic::Result<()> {
    let n = 4;
    println!("generators of Γ_1 (ambient n = {n}):");
    for g in group_generators(1, n) {
        println!("  ({}, {}; {}, {})", g.a, g.b, g.c, g.d);
    }

    // membership in congruence subgroups
    let j = monogenic::moebius::VahlenMatrix::inversion(n);
    let hecke1 = GroupSpec::new(1, 1, GroupKind::Hecke0, n)?;
    let principal3 = GroupSpec::new(1, 3, GroupKind::Principal, n)?;
    println!("\nJ in Γ_1,0[1]: {}", is_member(&j, &hecke1));
    println!("J in Γ_1[3]:   {}", is_member(&j, &principal3));

    // coset tables and the limits toward +e_n ∞
    let t = Vector::axis(n, n, 100.0);
    let t13 = enumerate_cosets(&principal3, 8)?;
    let g13 = eisenstein_series(&t, None, &t13, EisensteinKind::J1)?;
    println!(
        "\nG^(1,3)(100 e_n) = {} ({} cosets, length <= 8)",
        g13.value,
        t13.reps.len()
    );

    for level in [1u32, 2] {
        let spec = GroupSpec::new(1, level, GroupKind::Principal, n)?;
        let table = enumerate_cosets(&spec, 8)?;
        let h = eisenstein_series(&t, None, &table, EisensteinKind::J2)?;
        let c0 = table.reps.iter().filter(|r| r.matrix.c.is_zero(1e-9)).count();
        println!(
            "H^(1,{level})(100 e_n) = {:.6} ({} cosets, {c0} with c = 0, contains -I: {})",
            h.value.scalar_part(),
            table.reps.len(),
            table.contains_minus_identity
        );
    }
    println!("  (the cusp classes (0,±1), (0,±e_1) of Γ_1[1] give limit 4 = 2^(p+1);");
    println!("   Γ_1[2] keeps only (0,±1) and gives 2 — the opposite assignment of the source text)");

    // J1 over a group containing -I vanishes by pairing
    let full = GroupSpec::new(1, 1, GroupKind::Full, n)?;
    let tf = enumerate_cosets(&full, 6)?;
    let x = Vector::new(vec![0.2, 0.1, -0.3, 1.4]);
    let j1 = eisenstein_series(&x, None, &tf, EisensteinKind::J1)?;
    println!(
        "\nJ1 series over Γ_1[1] with M/-M pairing: ||sum|| = {:.3e} (paired = {})",
        j1.value.norm(),
        j1.paired
    );

    // two-variable pair series on a product of half-spaces
    let y = Vector::new(vec![-0.4, 0.3, 0.2, 0.9]);
    let pxy = eisenstein_series(&x, Some(&y), &tf, EisensteinKind::PairJ1)?;
    let pyx = eisenstein_series(&y, Some(&x), &tf, EisensteinKind::PairJ1)?;
    println!(
        "pair series E(x,y) = {} ...\n  Hermitian symmetry |E(x,y) - conj E(y,x)| = {:.3e}",
        Multivector::scalar(n, pxy.value.scalar_part()),
        (&pxy.value - &pyx.value.conjugate()).norm()
    );
    Ok(())
}

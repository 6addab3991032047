//! Basics of the Clifford algebra Cl_n: generator relations, involutions,
//! vector inverses and the blade-level geometric product.
//!
//! Run with: `cargo run --release --example clifford_algebra`

use monogenic::algebra::{Multivector, Vector};

fn main() -> monogenic::Result<()> {
    let n = 4;
    let e1 = Multivector::basis_vector(n, 1);
    let e2 = Multivector::basis_vector(n, 2);

    println!("e1 e2       = {}", &e1 * &e2);
    println!("e2 e1       = {}", &e2 * &e1);
    println!("e1 e1       = {}", &e1 * &e1);

    let x = Vector::new(vec![0.5, -1.0, 2.0, 0.25]);
    let xm = x.to_mv();
    println!("\nx           = {xm}");
    println!("x^2         = {} (= -||x||^2 = {})", &xm * &xm, -x.norm_sq());
    let xi = x.inverse()?;
    println!("x^-1        = {}", xi.to_mv());
    println!("x x^-1      = {}", &xm * &xi.to_mv());

    let a = &(&e1 * &e2) + &Multivector::scalar(n, 3.0);
    println!("\na           = {a}");
    println!("reverse(a)  = {}", a.reverse());
    println!("conjugate(a)= {}", a.conjugate());
    println!("star(a)     = {} (flips blades containing e_n)", a.star());

    // a general (non-vector) inverse
    let mut b = Multivector::one(n);
    b.set_coeff(0b1111, 0.5);
    let binv = b.inverse()?;
    println!("\nb           = {b}");
    println!("b b^-1      = {}", &b * &binv);

    // JSON wire format
    println!("\nJSON        = {}", serde_json::to_string(&a).unwrap());
    Ok(())
}

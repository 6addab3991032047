//! Finite-difference application of the Dirac, Laplace and hyperbolic Dirac
//! operators, and residual scans over sampled regions. These are the oracles
//! every verification suite leans on.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Multivector, Vector};
use crate::error::{Error, Result};

/// Default step for the 4th-order stencils.
pub const DEFAULT_H: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicVariant {
    /// `x_n (Df)(x) + n Sc(-e_n f(x))`, the operator as displayed.
    PaperLiteral,
    /// `(Df)(x) + ((n-2)/x_n) Q(f(x))` with `f = P + Q e_n`.
    Leutwiler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Dirac,
    Laplace,
    HyperbolicDirac(HyperbolicVariant),
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Dirac => "dirac",
            OperatorKind::Laplace => "laplace",
            OperatorKind::HyperbolicDirac(HyperbolicVariant::PaperLiteral) => {
                "hyperbolic_dirac/paper_literal"
            }
            OperatorKind::HyperbolicDirac(HyperbolicVariant::Leutwiler) => {
                "hyperbolic_dirac/leutwiler"
            }
        }
    }
}

pub type Field<'a> = &'a dyn Fn(&Vector) -> Result<Multivector>;

fn shifted(x: &Vector, axis: usize, delta: f64) -> Vector {
    let mut y = x.clone();
    y.set(axis, x.get(axis) + delta);
    y
}

/// 4th-order central first derivative along `axis`.
fn d1(f: Field, x: &Vector, axis: usize, h: f64) -> Result<Multivector> {
    let fp2 = f(&shifted(x, axis, 2.0 * h))?;
    let fp1 = f(&shifted(x, axis, h))?;
    let fm1 = f(&shifted(x, axis, -h))?;
    let fm2 = f(&shifted(x, axis, -2.0 * h))?;
    Ok((&(&fp1 - &fm1).scale(8.0) - &(&fp2 - &fm2)).scale(1.0 / (12.0 * h)))
}

/// 4th-order central second derivative along `axis`.
fn d2(f: Field, x: &Vector, axis: usize, h: f64) -> Result<Multivector> {
    let fp2 = f(&shifted(x, axis, 2.0 * h))?;
    let fp1 = f(&shifted(x, axis, h))?;
    let f0 = f(x)?;
    let fm1 = f(&shifted(x, axis, -h))?;
    let fm2 = f(&shifted(x, axis, -2.0 * h))?;
    let num = &(&(&fp1 + &fm1).scale(16.0) - &(&fp2 + &fm2)) - &f0.scale(30.0);
    Ok(num.scale(1.0 / (12.0 * h * h)))
}

/// Dirac derivative `Df = sum_i e_i d_i f` by 4th-order central differences.
pub fn dirac_fd(f: Field, x: &Vector, h: f64) -> Result<Multivector> {
    let n = x.dim();
    let mut acc = Multivector::zero(n);
    for i in 0..n as usize {
        let di = d1(f, x, i, h)?;
        acc += &(&Multivector::basis_vector(n, i as u32 + 1) * &di);
    }
    Ok(acc)
}

/// Apply the requested operator to `f` at `x` with step `h`.
pub fn apply_operator_fd(f: Field, x: &Vector, op: OperatorKind, h: f64) -> Result<Multivector> {
    let n = x.dim();
    match op {
        OperatorKind::Dirac => dirac_fd(f, x, h),
        OperatorKind::Laplace => {
            let mut acc = Multivector::zero(n);
            for i in 0..n as usize {
                acc += &d2(f, x, i, h)?;
            }
            Ok(acc)
        }
        OperatorKind::HyperbolicDirac(variant) => {
            let xn = x.last();
            if xn.abs() < 10.0 * h {
                return Err(Error::Precondition(
                    "hyperbolic operator too close to the hyperplane x_n = 0".into(),
                ));
            }
            let df = dirac_fd(f, x, h)?;
            let fx = f(x)?;
            match variant {
                HyperbolicVariant::PaperLiteral => {
                    let en = Multivector::basis_vector(n, n);
                    let sc = (&en.scale(-1.0) * &fx).scalar_part();
                    Ok(&df.scale(xn) + &Multivector::scalar(n, n as f64 * sc))
                }
                HyperbolicVariant::Leutwiler => {
                    let q = fx.q_part();
                    Ok(&df + &q.scale((n as f64 - 2.0) / xn))
                }
            }
        }
    }
}

/// Sampling region for residual scans.
#[derive(Debug, Clone)]
pub enum Region {
    /// `r0 < ||x|| < r1`.
    Annulus { n: u32, r0: f64, r1: f64 },
    /// Coordinate box.
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Region {
    pub fn dim(&self) -> u32 {
        match self {
            Region::Annulus { n, .. } => *n,
            Region::Box { lo, .. } => lo.len() as u32,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vector {
        match self {
            Region::Annulus { n, r0, r1 } => loop {
                let v = Vector::new((0..*n).map(|_| rng.gen_range(-1.0..1.0)).collect());
                let r = v.norm();
                if r > 0.05 {
                    let target = rng.gen_range(*r0..*r1);
                    return v.scale(target / r);
                }
            },
            Region::Box { lo, hi } => Vector::new(
                lo.iter()
                    .zip(hi)
                    .map(|(a, b)| rng.gen_range(*a..*b))
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub operator: String,
    pub h: f64,
    pub samples: usize,
    pub skipped: usize,
    pub max_residual: f64,
    pub worst_point: Vec<f64>,
}

/// Max operator residual of `f` over `samples` points of `region`, skipping
/// points that fail to evaluate (recorded in the report). Points closer than
/// `margin` to an exclusion returned by `excluded` are re-sampled.
pub fn residual_scan(
    f: Field,
    op: OperatorKind,
    region: &Region,
    h: f64,
    samples: usize,
    seed: u64,
    excluded: &dyn Fn(&Vector) -> bool,
) -> Result<ResidualReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    let mut worst = Vector::zeros(region.dim());
    let mut done = 0usize;
    let mut skipped = 0usize;
    let mut attempts = 0usize;
    while done < samples {
        attempts += 1;
        if attempts > 100 * samples {
            return Err(Error::Precondition(
                "residual_scan could not place enough sample points".into(),
            ));
        }
        let x = region.sample(&mut rng);
        if excluded(&x) {
            continue;
        }
        match apply_operator_fd(f, &x, op, h) {
            Ok(r) => {
                let nr = r.norm();
                if nr > max_residual {
                    max_residual = nr;
                    worst = x;
                }
                done += 1;
            }
            Err(_) => {
                skipped += 1;
                if skipped > 10 * samples {
                    return Err(Error::Precondition(
                        "residual_scan: too many failed evaluations".into(),
                    ));
                }
            }
        }
    }
    Ok(ResidualReport {
        operator: op.name().to_string(),
        h,
        samples,
        skipped,
        max_residual,
        worst_point: worst.as_slice().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{cauchy_g, green_h};

    #[test]
    fn trivial_fields() {
        let n = 3;
        let one = |_: &Vector| Ok(Multivector::one(n));
        let x0 = Vector::new(vec![0.3, -0.2, 0.9]);
        let d = apply_operator_fd(&one, &x0, OperatorKind::Dirac, DEFAULT_H).unwrap();
        assert!(d.norm() < 1e-14);
        let hd = apply_operator_fd(
            &one,
            &x0,
            OperatorKind::HyperbolicDirac(HyperbolicVariant::PaperLiteral),
            DEFAULT_H,
        )
        .unwrap();
        assert!(hd.norm() < 1e-14);
    }

    #[test]
    fn identity_field_is_paper_literal_hypermonogenic() {
        let id = |v: &Vector| Ok(v.to_mv());
        for xn in [0.5, 1.0, 1.7] {
            let x = Vector::new(vec![0.4, -0.8, xn]);
            let hd = apply_operator_fd(
                &id,
                &x,
                OperatorKind::HyperbolicDirac(HyperbolicVariant::PaperLiteral),
                DEFAULT_H,
            )
            .unwrap();
            assert!(hd.norm() < 1e-9, "residual {}", hd.norm());
            // Dirac of the identity field is -n
            let d = apply_operator_fd(&id, &x, OperatorKind::Dirac, DEFAULT_H).unwrap();
            assert!(d.approx_eq(&Multivector::scalar(3, -3.0), 1e-9));
        }
    }

    #[test]
    fn kernels_are_annihilated() {
        let g = |v: &Vector| cauchy_g(v);
        let h = |v: &Vector| Ok(Multivector::scalar(3, green_h(v)?));
        let region = Region::Annulus { n: 3, r0: 0.5, r1: 2.0 };
        let rep = residual_scan(&g, OperatorKind::Dirac, &region, DEFAULT_H, 50, 1, &|_| false)
            .unwrap();
        assert!(rep.max_residual < 1e-6, "dirac residual {}", rep.max_residual);
        let rep =
            residual_scan(&h, OperatorKind::Laplace, &region, DEFAULT_H, 50, 2, &|_| false)
                .unwrap();
        assert!(rep.max_residual < 1e-6, "laplace residual {}", rep.max_residual);
    }

    #[test]
    fn shifted_cauchy_kernel_monogenic_near_zero() {
        let a = Vector::axis(3, 1, 3.0);
        let f = move |v: &Vector| cauchy_g(&v.sub(&a));
        let x = Vector::new(vec![0.01, -0.02, 0.005]);
        let d = apply_operator_fd(&f, &x, OperatorKind::Dirac, DEFAULT_H).unwrap();
        assert!(d.norm() < 1e-6);
    }

    #[test]
    fn fourth_order_convergence() {
        // f(x) = exp(x_1) e_2 has analytic Dirac image exp(x_1) e_1 e_2.
        let n = 3;
        let f = |v: &Vector| {
            Ok(Multivector::basis_vector(n, 2).scale(v.get(0).exp()))
        };
        let x = Vector::new(vec![0.3, 0.1, -0.4]);
        let exact = {
            let e12 = &Multivector::basis_vector(n, 1) * &Multivector::basis_vector(n, 2);
            e12.scale(x.get(0).exp())
        };
        let err_at = |h: f64| {
            let d = apply_operator_fd(&f, &x, OperatorKind::Dirac, h).unwrap();
            (&d - &exact).norm()
        };
        let e1 = err_at(2e-2);
        let e2 = err_at(1e-2);
        let ratio = e1 / e2;
        assert!(
            (8.0..40.0).contains(&ratio),
            "expected ~16x reduction, got {ratio} (e1={e1:.3e}, e2={e2:.3e})"
        );
    }

    #[test]
    fn dirac_squared_is_minus_laplace() {
        let n = 3;
        // smooth test field with nontrivial second derivatives
        let f = |v: &Vector| {
            let s = (v.get(0) * 0.9).sin() * (v.get(1) * 1.3).cos() + v.get(2) * v.get(2);
            let mut mv = Multivector::scalar(n, s);
            mv.set_coeff(0b011, v.get(0) * v.get(1));
            Ok(mv)
        };
        let x = Vector::new(vec![0.4, -0.2, 0.6]);
        let h = 1e-2;
        let df = |v: &Vector| dirac_fd(&f, v, h);
        let ddf = dirac_fd(&df, &x, h).unwrap();
        let lap = apply_operator_fd(&f, &x, OperatorKind::Laplace, h).unwrap();
        assert!(
            (&ddf + &lap).norm() < 1e-5 * (1.0 + lap.norm()),
            "D^2 != -Laplace: {} vs {}",
            ddf,
            lap
        );
    }

    #[test]
    fn leutwiler_variant_q_extraction() {
        // Q of the identity field is x_n, so the Leutwiler image of x is
        // -n + (n-2) = -2.
        let id = |v: &Vector| Ok(v.to_mv());
        let x = Vector::new(vec![0.2, 0.5, 1.3]);
        let hd = apply_operator_fd(
            &id,
            &x,
            OperatorKind::HyperbolicDirac(HyperbolicVariant::Leutwiler),
            DEFAULT_H,
        )
        .unwrap();
        assert!(hd.approx_eq(&Multivector::scalar(3, -2.0), 1e-9));
    }

    #[test]
    fn residual_scan_skips_and_reports() {
        let g = |v: &Vector| cauchy_g(v);
        let region = Region::Box { lo: vec![-0.5, -0.5, -0.5], hi: vec![0.5, 0.5, 0.5] };
        // exclude a margin around the origin singularity
        let rep = residual_scan(
            &g,
            OperatorKind::Dirac,
            &region,
            1e-3,
            30,
            3,
            &|x| x.norm() < 0.2,
        )
        .unwrap();
        assert_eq!(rep.samples, 30);
        assert!(rep.max_residual < 1e-4);
    }
}

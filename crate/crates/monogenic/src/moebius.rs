//! Vahlen matrices and the Möbius action `T(x) = (ax+b)(cx+d)^{-1}` on
//! `R^n ∪ {∞}`, together with the conformal weight factors J1/J2 and the
//! hypermonogenic conformal pullback.

use serde::{Deserialize, Serialize};

use crate::algebra::{Multivector, Vector};
use crate::error::{Error, Result};

/// 2x2 matrix of Clifford numbers encoding a Möbius transformation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VahlenMatrix {
    pub a: Multivector,
    pub b: Multivector,
    pub c: Multivector,
    pub d: Multivector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VahlenMode {
    General,
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    J1,
    J2,
}

/// Outcome of `vahlen_check`: per-condition results, never an error.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    pub pseudo_det_scalar: f64,
    pub pseudo_det_nonscalar_residue: f64,
    pub pseudo_det_ok: bool,
    /// `a^{-1} b` is a vector (or `a = 0`).
    pub ab_vector_ok: bool,
    /// `c^{-1} d` is a vector (or `c = 0`).
    pub cd_vector_ok: bool,
    pub details: Vec<String>,
}

impl VahlenMatrix {
    pub fn new(a: Multivector, b: Multivector, c: Multivector, d: Multivector) -> Self {
        assert!(a.dim() == b.dim() && b.dim() == c.dim() && c.dim() == d.dim());
        VahlenMatrix { a, b, c, d }
    }

    pub fn dim(&self) -> u32 {
        self.a.dim()
    }

    pub fn identity(n: u32) -> Self {
        VahlenMatrix::new(
            Multivector::one(n),
            Multivector::zero(n),
            Multivector::zero(n),
            Multivector::one(n),
        )
    }

    /// Translation matrix `T_b = (1, b; 0, 1)`.
    pub fn translation(b: &Vector) -> Self {
        let n = b.dim();
        VahlenMatrix::new(
            Multivector::one(n),
            b.to_mv(),
            Multivector::zero(n),
            Multivector::one(n),
        )
    }

    /// Inversion generator `J = (0, -1; 1, 0)`, acting as `x -> -x^{-1}`.
    pub fn inversion(n: u32) -> Self {
        VahlenMatrix::new(
            Multivector::zero(n),
            Multivector::scalar(n, -1.0),
            Multivector::one(n),
            Multivector::zero(n),
        )
    }

    /// Pseudo-determinant `a d~ - b c~`.
    pub fn pseudo_det(&self) -> Multivector {
        &(&self.a * &self.d.reverse()) - &(&self.b * &self.c.reverse())
    }

    pub fn compose(&self, rhs: &VahlenMatrix) -> VahlenMatrix {
        VahlenMatrix::new(
            &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        )
    }

    /// Group inverse. For a special Vahlen matrix the inverse is
    /// `(d~, -b~; -c~, a~)`; in general the pseudo-determinant (a real
    /// scalar) divides out.
    pub fn inverse(&self) -> Result<VahlenMatrix> {
        let det = self.pseudo_det();
        let s = det.scalar_part();
        if det.grade_residue(0) > 1e-9 * det.norm().max(1.0) || s.abs() < 1e-12 {
            return Err(Error::NotInvertible);
        }
        let inv = 1.0 / s;
        Ok(VahlenMatrix::new(
            self.d.reverse().scale(inv),
            self.b.reverse().scale(-inv),
            self.c.reverse().scale(-inv),
            self.a.reverse().scale(inv),
        ))
    }

    pub fn neg(&self) -> VahlenMatrix {
        VahlenMatrix::new(
            self.a.scale(-1.0),
            self.b.scale(-1.0),
            self.c.scale(-1.0),
            self.d.scale(-1.0),
        )
    }

    pub fn approx_eq(&self, other: &VahlenMatrix, tol: f64) -> bool {
        self.a.approx_eq(&other.a, tol)
            && self.b.approx_eq(&other.b, tol)
            && self.c.approx_eq(&other.c, tol)
            && self.d.approx_eq(&other.d, tol)
    }

    /// `cx + d` evaluated as a multivector.
    pub fn denom(&self, x: &Vector) -> Multivector {
        &(&self.c * &x.to_mv()) + &self.d
    }

    /// All entries supported on blades of `e_1..e_{n-1}` (needed for the
    /// upper-half-space action and the hypermonogenic pullback).
    pub fn in_subalgebra_below_n(&self, tol: f64) -> bool {
        let n = self.dim();
        let hi = 1u32 << (n - 1);
        [&self.a, &self.b, &self.c, &self.d].iter().all(|mv| {
            (0..1u32 << n)
                .filter(|m| m & hi != 0)
                .all(|m| mv.coeff(m).abs() <= tol * mv.norm().max(1.0))
        })
    }
}

/// Verifies the checkable Vahlen conditions and reports each sub-check.
/// The "entries are products of vectors" condition is not decidable from
/// coefficients at tolerance and is not attempted; see the report details.
pub fn vahlen_check(m: &VahlenMatrix, mode: VahlenMode) -> CheckReport {
    let det = m.pseudo_det();
    let s = det.scalar_part();
    let residue = det.grade_residue(0);
    let scale = det.norm().max(1.0);
    let det_is_real = residue <= 1e-10 * scale;
    let pseudo_det_ok = match mode {
        VahlenMode::General => det_is_real && s.abs() > 1e-12,
        VahlenMode::Special => det_is_real && (s - 1.0).abs() <= 1e-10,
    };
    let mut details = vec![format!(
        "pseudo-determinant = {s:.12} (non-scalar residue {residue:.3e})"
    )];

    let quotient_is_vector = |p: &Multivector, q: &Multivector, name: &str, details: &mut Vec<String>| {
        if p.is_zero(1e-12) {
            details.push(format!("{name}: skipped (left factor is 0)"));
            return true;
        }
        match p.inverse() {
            Ok(pinv) => {
                let quot = &pinv * q;
                let ok = quot.is_vector(1e-9);
                details.push(format!(
                    "{name}: residue {:.3e} -> {}",
                    quot.grade_residue(1),
                    if ok { "vector" } else { "NOT a vector" }
                ));
                ok
            }
            Err(_) => {
                details.push(format!("{name}: left factor not invertible"));
                false
            }
        }
    };

    let ab_vector_ok = quotient_is_vector(&m.a, &m.b, "a^-1 b", &mut details);
    let cd_vector_ok = quotient_is_vector(&m.c, &m.d, "c^-1 d", &mut details);
    details.push("products-of-vectors condition not algorithmically decided".into());

    CheckReport {
        pass: pseudo_det_ok && ab_vector_ok && cd_vector_ok,
        pseudo_det_scalar: s,
        pseudo_det_nonscalar_residue: residue,
        pseudo_det_ok,
        ab_vector_ok,
        cd_vector_ok,
        details,
    }
}

/// Möbius action `M<x> = (ax+b)(cx+d)^{-1}`. Signals `Pole` when `cx+d` is
/// not invertible at tolerance.
pub fn moebius_apply(m: &VahlenMatrix, x: &Vector) -> Result<Vector> {
    let denom = m.denom(x);
    if denom.norm() < 1e-10 {
        return Err(Error::Pole);
    }
    let dinv = denom.inverse().map_err(|_| Error::Pole)?;
    let num = &(&m.a * &x.to_mv()) + &m.b;
    let y = &num * &dinv;
    let residue = y.grade_residue(1);
    if residue > 1e-8 * y.norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "Moebius image has non-vector residue {residue:.3e}"
        )));
    }
    y.to_vector(1.0) // residue already checked; project
}

/// Conformal weight factor: `J1 = (cx+d)~ / ||cx+d||^n` (Clifford valued),
/// `J2 = 1 / ||cx+d||^{n-2}` (scalar).
pub fn weight_factor(m: &VahlenMatrix, x: &Vector, kind: WeightKind) -> Result<Multivector> {
    let n = m.dim();
    let denom = m.denom(x);
    let norm = denom.norm();
    if norm < 1e-10 {
        return Err(Error::Pole);
    }
    Ok(match kind {
        WeightKind::J1 => denom.reverse().scale(norm.powi(-(n as i32))),
        WeightKind::J2 => Multivector::scalar(n, norm.powi(-(n as i32 - 2))),
    })
}

/// Norm of `J_w(M1 M2, x) - J_w(M2, x) J_w(M1, M2<x>)`; zero in exact
/// arithmetic, used as a numerical test.
pub fn cocycle_residual(
    m1: &VahlenMatrix,
    m2: &VahlenMatrix,
    x: &Vector,
    kind: WeightKind,
) -> Result<f64> {
    let composed = m1.compose(m2);
    let lhs = weight_factor(&composed, x, kind)?;
    let mid = moebius_apply(m2, x)?;
    let rhs = &weight_factor(m2, x, kind)? * &weight_factor(m1, &mid, kind)?;
    Ok((&lhs - &rhs).norm())
}

/// Hypermonogenic conformal pullback
/// `F(x) = (cx+d)^{-1} f(M<x>) (x c~ + d~)` for `M` in `SV(R^{n-1})` and
/// `x_n > 0`.
pub fn hyper_conformal_pullback(
    m: &VahlenMatrix,
    f: &dyn Fn(&Vector) -> Result<Multivector>,
    x: &Vector,
) -> Result<Multivector> {
    if !m.in_subalgebra_below_n(1e-10) {
        return Err(Error::Precondition(
            "matrix entries not in the subalgebra generated by e_1..e_{n-1}".into(),
        ));
    }
    let check = vahlen_check(m, VahlenMode::Special);
    if !check.pseudo_det_ok {
        return Err(Error::Precondition(
            "matrix is not special Vahlen (pseudo-determinant != 1)".into(),
        ));
    }
    if x.last() <= 0.0 {
        return Err(Error::Precondition("x_n must be positive".into()));
    }
    let denom = m.denom(x);
    if denom.norm() < 1e-10 {
        return Err(Error::Pole);
    }
    let dinv = denom.inverse().map_err(|_| Error::Pole)?;
    let y = moebius_apply(m, x)?;
    let fy = f(&y)?;
    let right = &(&x.to_mv() * &m.c.reverse()) + &m.d.reverse();
    Ok(&(&dinv * &fy) * &right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_point(n: u32, rng: &mut ChaCha8Rng) -> Vector {
        Vector::new((0..n).map(|_| rng.gen_range(-1.5..1.5)).collect())
    }

    /// Random word in the generators {T_{e_i}, J} and their inverses.
    pub(crate) fn random_word(n: u32, len: usize, rng: &mut ChaCha8Rng) -> VahlenMatrix {
        let mut m = VahlenMatrix::identity(n);
        for _ in 0..len {
            let pick = rng.gen_range(0..2 * n + 2);
            let g = if pick < n {
                VahlenMatrix::translation(&Vector::axis(n, pick + 1, 1.0))
            } else if pick < 2 * n {
                VahlenMatrix::translation(&Vector::axis(n, pick - n + 1, -1.0))
            } else if pick == 2 * n {
                VahlenMatrix::inversion(n)
            } else {
                VahlenMatrix::inversion(n).inverse().unwrap()
            };
            m = m.compose(&g);
        }
        m
    }

    #[test]
    fn vahlen_check_examples() {
        let n = 3;
        let id = VahlenMatrix::identity(n);
        let rep = vahlen_check(&id, VahlenMode::Special);
        assert!(rep.pass);
        assert!((rep.pseudo_det_scalar - 1.0).abs() < 1e-15);

        let j = VahlenMatrix::inversion(n);
        assert!(vahlen_check(&j, VahlenMode::Special).pass);

        // (1, e_1 e_2; 0, 1) fails: b is not a vector
        let mut b = Multivector::zero(n);
        b.set_coeff(0b011, 1.0);
        let bad = VahlenMatrix::new(
            Multivector::one(n),
            b,
            Multivector::zero(n),
            Multivector::one(n),
        );
        let rep = vahlen_check(&bad, VahlenMode::General);
        assert!(!rep.pass);
        assert!(!rep.ab_vector_ok);
    }

    #[test]
    fn compose_and_inverse_examples() {
        let n = 3;
        let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));
        let tt = t.compose(&t);
        assert!(tt.b.approx_eq(&Vector::axis(n, 1, 2.0).to_mv(), 1e-15));

        let j = VahlenMatrix::inversion(n);
        let jinv = j.inverse().unwrap();
        assert!(jinv.b.approx_eq(&Multivector::one(n), 1e-15));
        assert!(jinv.c.approx_eq(&Multivector::scalar(n, -1.0), 1e-15));
        assert!(j.compose(&jinv).approx_eq(&VahlenMatrix::identity(n), 1e-15));
    }

    #[test]
    fn moebius_examples() {
        let n = 3;
        let j = VahlenMatrix::inversion(n);
        // J at e_n -> e_n
        let y = moebius_apply(&j, &Vector::axis(n, 3, 1.0)).unwrap();
        assert!(y.sub(&Vector::axis(n, 3, 1.0)).norm() < 1e-14);
        // J at 2 e_1 -> 0.5 e_1
        let y = moebius_apply(&j, &Vector::axis(n, 1, 2.0)).unwrap();
        assert!(y.sub(&Vector::axis(n, 1, 0.5)).norm() < 1e-14);
        // translation
        let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));
        let x = Vector::new(vec![0.2, -0.3, 0.7]);
        let y = moebius_apply(&t, &x).unwrap();
        assert!(y.sub(&x.add(&Vector::axis(n, 1, 1.0))).norm() < 1e-14);
        // pole: J at 0
        assert!(matches!(
            moebius_apply(&j, &Vector::zeros(n)),
            Err(Error::Pole)
        ));
    }

    #[test]
    fn action_composition_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 3;
        let mut tested = 0;
        while tested < 100 {
            let m1 = random_word(n, rng.gen_range(1..5), &mut rng);
            let m2 = random_word(n, rng.gen_range(1..5), &mut rng);
            let x = random_point(n, &mut rng);
            let inner = match moebius_apply(&m2, &x) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let lhs = match moebius_apply(&m1.compose(&m2), &x) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let rhs = match moebius_apply(&m1, &inner) {
                Ok(v) => v,
                Err(_) => continue,
            };
            // guard against near-pole amplification
            if m1.denom(&inner).norm() < 0.2 || m2.denom(&x).norm() < 0.2 {
                continue;
            }
            assert!(
                lhs.sub(&rhs).norm() < 1e-9 * (1.0 + rhs.norm()),
                "composition law failed: {lhs} vs {rhs}"
            );
            tested += 1;
        }
    }

    #[test]
    fn weight_factor_examples() {
        let n = 3;
        let id = VahlenMatrix::identity(n);
        let x = Vector::new(vec![0.4, 0.1, -0.2]);
        assert!(weight_factor(&id, &x, WeightKind::J1)
            .unwrap()
            .approx_eq(&Multivector::one(n), 1e-15));
        assert!(weight_factor(&id, &x, WeightKind::J2)
            .unwrap()
            .approx_eq(&Multivector::one(n), 1e-15));
        // J at x: j1 = x / ||x||^n = Cauchy kernel
        let j = VahlenMatrix::inversion(n);
        let g = crate::kernels::cauchy_g(&x).unwrap();
        assert!(weight_factor(&j, &x, WeightKind::J1).unwrap().approx_eq(&g, 1e-14));
        // J at 2 e_1, n = 3: j2 = 1/2
        let w = weight_factor(&j, &Vector::axis(n, 1, 2.0), WeightKind::J2).unwrap();
        assert!((w.scalar_part() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cocycles_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let n = 3;
        let id = VahlenMatrix::identity(n);
        let x = Vector::new(vec![0.3, 0.8, 0.5]);
        assert!(cocycle_residual(&id, &id, &x, WeightKind::J1).unwrap() < 1e-15);
        let j = VahlenMatrix::inversion(n);
        let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));
        for _ in 0..20 {
            let x = random_point(n, &mut rng);
            if j.compose(&t).denom(&x).norm() < 0.3 || t.denom(&x).norm() < 0.3 {
                continue;
            }
            assert!(cocycle_residual(&j, &t, &x, WeightKind::J1).unwrap() < 1e-10);
            assert!(cocycle_residual(&j, &t, &x, WeightKind::J2).unwrap() < 1e-10);
        }
    }

    #[test]
    fn half_space_preservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 3;
        let mut tested = 0;
        while tested < 100 {
            // words in SV(R^{n-1}): translations along e_1..e_{n-1} and J
            let mut m = VahlenMatrix::identity(n);
            for _ in 0..rng.gen_range(1..6) {
                let pick = rng.gen_range(0..n);
                let g = if pick < n - 1 {
                    VahlenMatrix::translation(&Vector::axis(n, pick + 1, rng.gen_range(-1.0..1.0)))
                } else {
                    VahlenMatrix::inversion(n)
                };
                m = m.compose(&g);
            }
            let mut x = random_point(n, &mut rng);
            x.set(n as usize - 1, rng.gen_range(0.1..2.0));
            match moebius_apply(&m, &x) {
                Ok(y) => {
                    assert!(
                        y.last() > -1e-12,
                        "upper half-space not preserved: {x} -> {y}"
                    );
                    tested += 1;
                }
                Err(_) => continue,
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let n = 3;
        let one = |_: &Vector| Ok(Multivector::one(3));
        let id = VahlenMatrix::identity(n);
        let x = Vector::new(vec![0.3, 0.4, 1.2]);
        let f = |v: &Vector| Ok(v.to_mv());
        assert!(hyper_conformal_pullback(&id, &f, &x)
            .unwrap()
            .approx_eq(&x.to_mv(), 1e-14));
        // T_{e_1}, f == 1 -> 1
        let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));
        assert!(hyper_conformal_pullback(&t, &one, &x)
            .unwrap()
            .approx_eq(&Multivector::one(n), 1e-14));
        // J, f == 1, x = e_n: x^{-1} * 1 * x = 1
        let j = VahlenMatrix::inversion(n);
        let en = Vector::axis(n, 3, 1.0);
        assert!(hyper_conformal_pullback(&j, &one, &en)
            .unwrap()
            .approx_eq(&Multivector::one(n), 1e-14));
    }
}

//! Real Clifford algebra Cl_n with the relation `e_i e_j + e_j e_i = -2 δ_ij`.
//!
//! Elements are stored densely: a `Multivector` of dimension `n` keeps one
//! coefficient per basis blade, indexed by a bitmask where bit `i-1` means the
//! generator `e_i` is present. All products are computed by the bit-twiddled
//! reordering sign rule, so everything is deterministic and unit-testable
//! against brute-force expansion.

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DIM: u32 = 8;

/// Sign from reordering the product of two basis blades into canonical
/// increasing order, not counting metric contractions.
#[inline]
pub fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Product of basis blades `a` and `b`: resulting blade mask and total sign,
/// with the metric `e_i^2 = -1` applied on every common generator.
#[inline]
pub fn blade_product(a: u32, b: u32) -> (u32, f64) {
    let mut sign = reorder_sign(a, b);
    if (a & b).count_ones() & 1 == 1 {
        sign = -sign;
    }
    (a ^ b, sign)
}

#[inline]
pub fn blade_grade(mask: u32) -> u32 {
    mask.count_ones()
}

/// Sign of the reversion anti-automorphism on a grade-`r` blade.
#[inline]
fn reverse_sign(r: u32) -> f64 {
    if (r * (r.wrapping_sub(1)) / 2) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of the conjugation anti-automorphism on a grade-`r` blade.
#[inline]
fn conjugate_sign(r: u32) -> f64 {
    if (r * (r + 1) / 2) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Involution {
    Reverse,
    Conjugate,
    Star,
}

/// Dense element of Cl_n, 2 <= n <= 8.
#[derive(Debug, Clone)]
pub struct Multivector {
    n: u32,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(n: u32) -> Self {
        assert!((2..=MAX_DIM).contains(&n), "dimension {n} out of range");
        Multivector {
            n,
            coeffs: vec![0.0; 1 << n],
        }
    }

    pub fn scalar(n: u32, value: f64) -> Self {
        let mut mv = Self::zero(n);
        mv.coeffs[0] = value;
        mv
    }

    pub fn one(n: u32) -> Self {
        Self::scalar(n, 1.0)
    }

    /// Basis blade from a bitmask (bit i-1 <=> generator e_i present).
    pub fn basis_blade(n: u32, mask: u32) -> Self {
        let mut mv = Self::zero(n);
        assert!(mask < (1 << n), "blade mask {mask} out of range for n={n}");
        mv.coeffs[mask as usize] = 1.0;
        mv
    }

    /// Generator `e_i`, 1-based index as in the algebra relations.
    pub fn basis_vector(n: u32, i: u32) -> Self {
        assert!((1..=n).contains(&i), "generator index {i} out of 1..={n}");
        Self::basis_blade(n, 1 << (i - 1))
    }

    pub fn from_coeffs(n: u32, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), 1 << n);
        Multivector { n, coeffs }
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, mask: u32) -> f64 {
        self.coeffs[mask as usize]
    }

    #[inline]
    pub fn set_coeff(&mut self, mask: u32, value: f64) {
        self.coeffs[mask as usize] = value;
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Euclidean norm of the coefficient vector; agrees with |x| on vectors.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= tol)
    }

    pub fn approx_eq(&self, other: &Multivector, tol: f64) -> bool {
        self.n == other.n
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn scale(&self, s: f64) -> Multivector {
        Multivector {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn grade_part(&self, r: u32) -> Multivector {
        let mut out = Multivector::zero(self.n);
        for mask in 0..self.coeffs.len() {
            if blade_grade(mask as u32) == r {
                out.coeffs[mask] = self.coeffs[mask];
            }
        }
        out
    }

    pub fn involution(&self, kind: Involution) -> Multivector {
        let mut out = Multivector::zero(self.n);
        let star_bit = 1u32 << (self.n - 1);
        for mask in 0..self.coeffs.len() {
            let c = self.coeffs[mask];
            if c == 0.0 {
                continue;
            }
            let sign = match kind {
                Involution::Reverse => reverse_sign(blade_grade(mask as u32)),
                Involution::Conjugate => conjugate_sign(blade_grade(mask as u32)),
                Involution::Star => {
                    if mask as u32 & star_bit != 0 {
                        -1.0
                    } else {
                        1.0
                    }
                }
            };
            out.coeffs[mask] = sign * c;
        }
        out
    }

    pub fn reverse(&self) -> Multivector {
        self.involution(Involution::Reverse)
    }

    pub fn conjugate(&self) -> Multivector {
        self.involution(Involution::Conjugate)
    }

    /// The `*` automorphism: flips the sign of every blade containing `e_n`.
    pub fn star(&self) -> Multivector {
        self.involution(Involution::Star)
    }

    /// Geometric product.
    pub fn mul(&self, rhs: &Multivector) -> Result<Multivector> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        let mut out = Multivector::zero(self.n);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let (mask, sign) = blade_product(a as u32, b as u32);
                out.coeffs[mask as usize] += sign * ca * cb;
            }
        }
        Ok(out)
    }

    /// Matrix of left multiplication by `self` on the coefficient basis,
    /// row-major `2^n x 2^n`. Column `b` holds the coefficients of `self * e_b`.
    pub fn left_mult_matrix(&self) -> Vec<f64> {
        let dim = self.coeffs.len();
        let mut mat = vec![0.0; dim * dim];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for b in 0..dim {
                let (mask, sign) = blade_product(a as u32, b as u32);
                mat[mask as usize * dim + b] += sign * ca;
            }
        }
        mat
    }

    /// Multiplicative inverse. Uses `a^{-1} = ã / (a ã)` whenever `a ã` is a
    /// real scalar (always the case for products of vectors), otherwise falls
    /// back to solving the 2^n x 2^n left-multiplication system.
    pub fn inverse(&self) -> Result<Multivector> {
        let rev = self.reverse();
        let r = self.mul(&rev)?;
        let s = r.scalar_part();
        let off = {
            let mut t = r.clone();
            t.coeffs[0] = 0.0;
            t.norm()
        };
        let scale = self.norm();
        if scale == 0.0 {
            return Err(Error::NotInvertible);
        }
        if off <= 1e-12 * (s.abs() + scale * scale) && s.abs() > 1e-300 {
            return Ok(rev.scale(1.0 / s));
        }
        // General fallback: solve L(a) x = e_0.
        let dim = self.coeffs.len();
        let mat = self.left_mult_matrix();
        let mut rhs = vec![0.0; dim];
        rhs[0] = 1.0;
        let sol = crate::linalg::lu_solve(&mat, &rhs, dim)
            .map_err(|_| Error::NotInvertible)?;
        Ok(Multivector::from_coeffs(self.n, sol))
    }

    /// True when all non-single-generator coefficients are below `tol`
    /// relative to the element's size.
    pub fn is_vector(&self, tol: f64) -> bool {
        let scale = self.norm().max(1.0);
        self.coeffs
            .iter()
            .enumerate()
            .all(|(mask, c)| blade_grade(mask as u32) == 1 || c.abs() <= tol * scale)
    }

    /// Project onto the grade-1 part and view as a `Vector`; errors when the
    /// non-vector residue exceeds `tol` (relative).
    pub fn to_vector(&self, tol: f64) -> Result<Vector> {
        if !self.is_vector(tol) {
            return Err(Error::Precondition(format!(
                "multivector is not a vector (residue {:.3e})",
                self.grade_residue(1)
            )));
        }
        Ok(Vector::new(
            (1..=self.n).map(|i| self.coeff(1 << (i - 1))).collect(),
        ))
    }

    /// Norm of everything outside grade `r`.
    pub fn grade_residue(&self, r: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(mask, _)| blade_grade(*mask as u32) != r)
            .map(|(_, c)| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// Extraction of the `e_n` part: writing `f = P + Q e_n` with `P`, `Q` in
    /// the subalgebra generated by `e_1..e_{n-1}`, returns `Q`.
    pub fn q_part(&self) -> Multivector {
        let mut out = Multivector::zero(self.n);
        let hi = 1u32 << (self.n - 1);
        for mask in 0..self.coeffs.len() {
            let m = mask as u32;
            if m & hi != 0 {
                // e_A e_n with A below e_n is already in canonical order.
                out.coeffs[(m & !hi) as usize] = self.coeffs[mask];
            }
        }
        out
    }
}

impl std::ops::Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.n, rhs.n);
        Multivector {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.n, rhs.n);
        Multivector {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl std::ops::AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.n, rhs.n);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

/// Geometric product; panics on dimension mismatch (use `Multivector::mul`
/// for the fallible form).
impl std::ops::Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        Multivector::mul(self, rhs).expect("dimension mismatch in geometric product")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0.0 { "-" } else { "+" })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            if mask == 0 {
                write!(f, "{a}")?;
            } else {
                if (a - 1.0).abs() > 1e-15 {
                    write!(f, "{a}")?;
                }
                write!(f, "e")?;
                for i in 1..=self.n {
                    if mask as u32 & (1 << (i - 1)) != 0 {
                        write!(f, "{i}")?;
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// JSON schema: {"n": int, "coeffs": {"<blade bitmask as decimal string>": float}}
// with omitted keys meaning zero.
impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let nonzero: Vec<(String, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(mask, c)| (mask.to_string(), *c))
            .collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.n)?;
        let coeffs: std::collections::BTreeMap<u32, f64> = nonzero
            .iter()
            .map(|(k, v)| (k.parse::<u32>().unwrap(), *v))
            .collect();
        let coeffs: std::collections::BTreeMap<String, f64> = coeffs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        map.serialize_entry("coeffs", &coeffs)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MvVisitor;
        impl<'de> Visitor<'de> for MvVisitor {
            type Value = Multivector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a multivector object {{n, coeffs}}")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<Multivector, A::Error> {
                let mut n: Option<u32> = None;
                let mut coeffs: Option<std::collections::BTreeMap<String, f64>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "n" => n = Some(map.next_value()?),
                        "coeffs" => coeffs = Some(map.next_value()?),
                        other => {
                            return Err(serde::de::Error::unknown_field(other, &["n", "coeffs"]))
                        }
                    }
                }
                let n = n.ok_or_else(|| serde::de::Error::missing_field("n"))?;
                if !(2..=MAX_DIM).contains(&n) {
                    return Err(serde::de::Error::custom(format!("bad dimension {n}")));
                }
                let mut mv = Multivector::zero(n);
                for (k, v) in coeffs.unwrap_or_default() {
                    let mask: u32 = k
                        .parse()
                        .map_err(|_| serde::de::Error::custom("bad blade key"))?;
                    if mask >= (1 << n) {
                        return Err(serde::de::Error::custom("blade index out of range"));
                    }
                    mv.set_coeff(mask, v);
                }
                Ok(mv)
            }
        }
        deserializer.deserialize_map(MvVisitor)
    }
}

/// Point / vector in R^n, convertible to a grade-1 multivector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(comps: Vec<f64>) -> Self {
        assert!((2..=MAX_DIM as usize).contains(&comps.len()));
        Vector(comps)
    }

    pub fn zeros(n: u32) -> Self {
        Vector(vec![0.0; n as usize])
    }

    /// `c * e_i` (1-based axis index).
    pub fn axis(n: u32, i: u32, c: f64) -> Self {
        let mut v = Self::zeros(n);
        v.0[(i - 1) as usize] = c;
        v
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.0.len() as u32
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i0: usize) -> f64 {
        self.0[i0]
    }

    #[inline]
    pub fn set(&mut self, i0: usize, v: f64) {
        self.0[i0] = v;
    }

    /// Last component, `x_n`.
    #[inline]
    pub fn last(&self) -> f64 {
        *self.0.last().unwrap()
    }

    pub fn to_mv(&self) -> Multivector {
        let n = self.dim();
        let mut mv = Multivector::zero(n);
        for (i, &c) in self.0.iter().enumerate() {
            mv.set_coeff(1 << i, c);
        }
        mv
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    /// Clifford inverse of a nonzero vector: `-x / ||x||^2`.
    pub fn inverse(&self) -> Result<Vector> {
        let q = self.norm_sq();
        if q < 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(-1.0 / q))
    }

    /// The `*` automorphism on vectors: flips the `e_n` component.
    pub fn star(&self) -> Vector {
        let mut v = self.clone();
        let last = v.0.len() - 1;
        v.0[last] = -v.0[last];
        v
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Compensated (Neumaier) accumulator for multivector sums, so series values
/// are deterministic for a fixed summation order.
#[derive(Debug, Clone)]
pub struct MvAccumulator {
    sum: Vec<f64>,
    comp: Vec<f64>,
    n: u32,
}

impl MvAccumulator {
    pub fn new(n: u32) -> Self {
        MvAccumulator {
            sum: vec![0.0; 1 << n],
            comp: vec![0.0; 1 << n],
            n,
        }
    }

    pub fn add(&mut self, mv: &Multivector) {
        debug_assert_eq!(mv.dim(), self.n);
        for (i, &x) in mv.coeffs().iter().enumerate() {
            let s = self.sum[i];
            let t = s + x;
            if s.abs() >= x.abs() {
                self.comp[i] += (s - t) + x;
            } else {
                self.comp[i] += (x - t) + s;
            }
            self.sum[i] = t;
        }
    }

    pub fn add_scaled_slice(&mut self, comps: &[f64], masks: &[u32], scale: f64) {
        for (&c, &m) in comps.iter().zip(masks) {
            let x = c * scale;
            let s = self.sum[m as usize];
            let t = s + x;
            if s.abs() >= x.abs() {
                self.comp[m as usize] += (s - t) + x;
            } else {
                self.comp[m as usize] += (x - t) + s;
            }
            self.sum[m as usize] = t;
        }
    }

    pub fn value(&self) -> Multivector {
        Multivector::from_coeffs(
            self.n,
            self.sum.iter().zip(&self.comp).map(|(s, c)| s + c).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn e(n: u32, i: u32) -> Multivector {
        Multivector::basis_vector(n, i)
    }

    fn random_mv(n: u32, rng: &mut ChaCha8Rng) -> Multivector {
        Multivector::from_coeffs(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect())
    }

    fn random_vec(n: u32, rng: &mut ChaCha8Rng) -> Vector {
        Vector::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
    }

    #[test]
    fn generator_relations() {
        let n = 4;
        for i in 1..=n {
            for j in 1..=n {
                let lhs = &(&e(n, i) * &e(n, j)) + &(&e(n, j) * &e(n, i));
                let expected = Multivector::scalar(n, if i == j { -2.0 } else { 0.0 });
                assert!(lhs.approx_eq(&expected, 1e-15), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn product_examples() {
        let n = 3;
        // e_1 e_1 = -1
        assert!((&e(n, 1) * &e(n, 1)).approx_eq(&Multivector::scalar(n, -1.0), 0.0));
        // (e_1 e_2) e_2 = -e_1
        let e12 = &e(n, 1) * &e(n, 2);
        assert!((&e12 * &e(n, 2)).approx_eq(&e(n, 1).scale(-1.0), 0.0));
    }

    #[test]
    fn associativity_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (a, b, c) = (random_mv(4, &mut rng), random_mv(4, &mut rng), random_mv(4, &mut rng));
            let lhs = &(&a * &b) * &c;
            let rhs = &a * &(&b * &c);
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn involution_examples() {
        let n = 3;
        let e12 = &e(n, 1) * &e(n, 2);
        assert!(e12.reverse().approx_eq(&e12.scale(-1.0), 0.0));
        assert!(e(n, 1).conjugate().approx_eq(&e(n, 1).scale(-1.0), 0.0));
        assert!(e(n, 3).star().approx_eq(&e(n, 3).scale(-1.0), 0.0));
        assert!(e(n, 1).star().approx_eq(&e(n, 1), 0.0));
    }

    #[test]
    fn involutions_are_anti_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (a, b) = (random_mv(4, &mut rng), random_mv(4, &mut rng));
            let ab = &a * &b;
            assert!(ab
                .reverse()
                .approx_eq(&(&b.reverse() * &a.reverse()), 1e-12));
            assert!(ab
                .conjugate()
                .approx_eq(&(&b.conjugate() * &a.conjugate()), 1e-12));
            // star is an automorphism
            assert!(ab.star().approx_eq(&(&a.star() * &b.star()), 1e-12));
            // self-inverse
            assert!(a.reverse().reverse().approx_eq(&a, 0.0));
            assert!(a.conjugate().conjugate().approx_eq(&a, 0.0));
            assert!(a.star().star().approx_eq(&a, 0.0));
        }
    }

    #[test]
    fn scalar_part_examples() {
        let n = 3;
        let mut a = Multivector::scalar(n, 3.0);
        a.set_coeff(0b001, 2.0);
        assert_eq!(a.scalar_part(), 3.0);
        // Sc(-e_n x) = x_n
        let x = Vector::new(vec![0.3, -0.7, 2.5]);
        let sc = (&e(n, 3).scale(-1.0) * &x.to_mv()).scalar_part();
        assert!((sc - 2.5).abs() < 1e-15);
        assert_eq!((&e(n, 1) * &e(n, 2)).scalar_part(), 0.0);
    }

    #[test]
    fn vector_square_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [3u32, 4, 5] {
            for _ in 0..30 {
                let x = random_vec(n, &mut rng);
                if x.norm() < 1e-3 {
                    continue;
                }
                let sq = &x.to_mv() * &x.to_mv();
                assert!(sq.approx_eq(&Multivector::scalar(n, -x.norm_sq()), 1e-12));
                let inv = x.inverse().unwrap();
                let prod = &x.to_mv() * &inv.to_mv();
                assert!(prod.approx_eq(&Multivector::one(n), 1e-12));
            }
        }
        // x = 2 e_1 -> -0.5 e_1 ; x = e_n -> -e_n
        let x = Vector::axis(3, 1, 2.0);
        assert!(x.inverse().unwrap().to_mv().approx_eq(&e(3, 1).scale(-0.5), 1e-15));
        let x = Vector::axis(3, 3, 1.0);
        assert!(x.inverse().unwrap().to_mv().approx_eq(&e(3, 3).scale(-1.0), 1e-15));
    }

    #[test]
    fn norm_examples() {
        let n = 3;
        let v = &e(n, 1) + &e(n, 2);
        assert!((v.norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Multivector::zero(n).norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let x = random_vec(4, &mut rng);
            let sq = (&x.to_mv() * &x.to_mv()).scalar_part();
            assert!((x.to_mv().norm().powi(2) + sq).abs() < 1e-12);
        }
    }

    #[test]
    fn general_inverse_fallback() {
        // 1 + e_1 e_2 e_3 e_4 in Cl_4 has a r = a ã that is not scalar.
        let n = 4;
        let mut a = Multivector::one(n);
        a.set_coeff(0b1111, 0.5);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).approx_eq(&Multivector::one(n), 1e-10));
        // products of vectors take the fast path
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let u = random_vec(n, &mut rng);
        let v = random_vec(n, &mut rng);
        let p = &u.to_mv() * &v.to_mv();
        let pinv = p.inverse().unwrap();
        assert!((&p * &pinv).approx_eq(&Multivector::one(n), 1e-12));
    }

    #[test]
    fn q_part_extraction() {
        let n = 3;
        // f = 2 + 3 e_3 + 5 e_13  =>  Q = 3 + 5 e_1? careful: e_13 = e_1 e_3
        let mut f = Multivector::scalar(n, 2.0);
        f.set_coeff(0b100, 3.0);
        f.set_coeff(0b101, 5.0);
        let q = f.q_part();
        let mut expect = Multivector::scalar(n, 3.0);
        expect.set_coeff(0b001, 5.0);
        assert!(q.approx_eq(&expect, 0.0));
        // P + Q e_n reconstructs f
        let p = &f - &(&q * &e(n, 3));
        assert!(p.q_part().is_zero(0.0));
    }

    #[test]
    fn json_round_trip() {
        let mut a = Multivector::zero(3);
        a.set_coeff(0, 1.5);
        a.set_coeff(0b101, -2.25);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"5\""));
        let b: Multivector = serde_json::from_str(&s).unwrap();
        assert!(a.approx_eq(&b, 0.0));
        let c: Multivector = serde_json::from_str(r#"{"n":3,"coeffs":{}}"#).unwrap();
        assert!(c.is_zero(0.0));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_mv(n: u32) -> impl Strategy<Value = Multivector> {
            proptest::collection::vec(-1.0f64..1.0, 1 << n)
                .prop_map(move |c| Multivector::from_coeffs(n, c))
        }

        fn arb_vec(n: u32) -> impl Strategy<Value = Vector> {
            proptest::collection::vec(-1.0f64..1.0, n as usize).prop_map(Vector::new)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn product_laws(a in arb_mv(4), b in arb_mv(4), c in arb_mv(4)) {
                let assoc = (&(&a * &b) * &c).approx_eq(&(&a * &(&b * &c)), 1e-12);
                prop_assert!(assoc);
                let distr = (&a * &(&b + &c)).approx_eq(&(&(&a * &b) + &(&a * &c)), 1e-12);
                prop_assert!(distr);
                let rev = (&a * &b).reverse().approx_eq(&(&b.reverse() * &a.reverse()), 1e-12);
                prop_assert!(rev);
            }

            #[test]
            fn vector_identities(x in arb_vec(5)) {
                prop_assume!(x.norm() > 1e-3);
                let sq = &x.to_mv() * &x.to_mv();
                prop_assert!(sq.approx_eq(&Multivector::scalar(5, -x.norm_sq()), 1e-12));
                let prod = &x.to_mv() * &x.inverse().unwrap().to_mv();
                prop_assert!(prod.approx_eq(&Multivector::one(5), 1e-12));
            }

            #[test]
            fn serialization_round_trips(a in arb_mv(3)) {
                let json = serde_json::to_string(&a).unwrap();
                let back: Multivector = serde_json::from_str(&json).unwrap();
                prop_assert!(a.approx_eq(&back, 0.0));
            }
        }
    }

    #[test]
    fn left_mult_matrix_transpose_is_conjugate() {
        // L(K)^T = L(conj K): the identity behind all adjoint assembly.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let k = random_mv(3, &mut rng);
        let l = k.left_mult_matrix();
        let lc = k.conjugate().left_mult_matrix();
        let dim = 8;
        for i in 0..dim {
            for j in 0..dim {
                assert!((l[i * dim + j] - lc[j * dim + i]).abs() < 1e-13);
            }
        }
    }
}

//! Taylor-mode differentiation: truncated multivariate jets with multivector
//! coefficients. A jet of order `d` at a point carries the value and all
//! mixed partials up to total order `d` (d <= 4), propagated exactly through
//! the arithmetic the kernels are built from (+, -, *, /, powers, norms).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{Multivector, Vector};
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;

/// Derivative orders per coordinate; `|m| <= 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n_vars: usize) -> Self {
        MultiIndex(vec![0; n_vars])
    }

    pub fn unit(n_vars: usize, axis0: usize) -> Self {
        let mut m = Self::zero(n_vars);
        m.0[axis0] = 1;
        m
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k as u64).product::<u64>() as f64)
            .product()
    }
}

/// Monomial bookkeeping shared by all jets of a given (n_vars, order).
#[derive(Debug)]
pub struct JetSpace {
    pub n_vars: usize,
    pub order: usize,
    pub monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// (i, j, target) triples with deg_i + deg_j <= order.
    pairs: Vec<(u32, u32, u32)>,
}

fn enumerate_monomials(n_vars: usize, order: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; n_vars];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[pos] = k;
            rec(out, cur, pos + 1, left - k);
        }
        cur[pos] = 0;
    }
    for total in 0..=order as u32 {
        // fixed total degree, graded enumeration
        let mut tmp: Vec<Vec<u32>> = Vec::new();
        rec(&mut tmp, &mut cur, 0, total);
        out.extend(tmp.into_iter().filter(|m| m.iter().sum::<u32>() == total));
    }
    out
}

impl JetSpace {
    fn new(n_vars: usize, order: usize) -> Arc<JetSpace> {
        assert!(order <= MAX_ORDER && n_vars <= 8);
        let monomials = enumerate_monomials(n_vars, order);
        let index: HashMap<Vec<u32>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut pairs = Vec::new();
        for (i, mi) in monomials.iter().enumerate() {
            let di: u32 = mi.iter().sum();
            for (j, mj) in monomials.iter().enumerate() {
                let dj: u32 = mj.iter().sum();
                if di + dj > order as u32 {
                    continue;
                }
                let sum: Vec<u32> = mi.iter().zip(mj).map(|(a, b)| a + b).collect();
                let target = index[&sum];
                pairs.push((i as u32, j as u32, target as u32));
            }
        }
        Arc::new(JetSpace { n_vars, order, monomials, index, pairs })
    }

    pub fn get(n_vars: usize, order: usize) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((n_vars, order))
            .or_insert_with(|| JetSpace::new(n_vars, order))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomial_index(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Truncated scalar-valued Taylor polynomial.
#[derive(Debug, Clone)]
pub struct ScalarJet {
    pub space: Arc<JetSpace>,
    pub c: Vec<f64>,
}

impl ScalarJet {
    pub fn constant(space: &Arc<JetSpace>, v: f64) -> Self {
        let mut c = vec![0.0; space.len()];
        c[0] = v;
        ScalarJet { space: space.clone(), c }
    }

    /// Variable jet: value plus unit first-order seed along `axis0`.
    pub fn variable(space: &Arc<JetSpace>, v: f64, axis0: usize) -> Self {
        let mut jet = Self::constant(space, v);
        if space.order >= 1 {
            let idx = space
                .monomial_index(&{
                    let mut m = vec![0u32; space.n_vars];
                    m[axis0] = 1;
                    m
                })
                .unwrap();
            jet.c[idx] = 1.0;
        }
        jet
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn add(&self, o: &ScalarJet) -> ScalarJet {
        ScalarJet {
            space: self.space.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &ScalarJet) -> ScalarJet {
        ScalarJet {
            space: self.space.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, f: f64) -> ScalarJet {
        ScalarJet { space: self.space.clone(), c: self.c.iter().map(|a| a * f).collect() }
    }

    pub fn mul(&self, o: &ScalarJet) -> ScalarJet {
        let mut c = vec![0.0; self.space.len()];
        for &(i, j, t) in &self.space.pairs {
            let a = self.c[i as usize];
            if a == 0.0 {
                continue;
            }
            let b = o.c[j as usize];
            if b == 0.0 {
                continue;
            }
            c[t as usize] += a * b;
        }
        ScalarJet { space: self.space.clone(), c }
    }

    /// `u^alpha` for `u` with positive value, via the truncated binomial
    /// series in `t = (u - u0)/u0`.
    pub fn powf(&self, alpha: f64) -> Result<ScalarJet> {
        let u0 = self.c[0];
        if u0 <= 0.0 {
            return Err(Error::Singularity(format!(
                "jet power of non-positive base {u0:.3e}"
            )));
        }
        let mut t = self.clone();
        t.c[0] = 0.0;
        let t = t.scale(1.0 / u0);
        let mut out = ScalarJet::constant(&self.space, 1.0);
        let mut tp = ScalarJet::constant(&self.space, 1.0);
        let mut binom = 1.0;
        for k in 1..=self.space.order {
            binom *= (alpha - (k as f64 - 1.0)) / k as f64;
            tp = tp.mul(&t);
            out = out.add(&tp.scale(binom));
        }
        Ok(out.scale(u0.powf(alpha)))
    }

    pub fn recip(&self) -> Result<ScalarJet> {
        // 1/u for u0 of either sign
        let u0 = self.c[0];
        if u0.abs() < 1e-300 {
            return Err(Error::Singularity("jet reciprocal of zero".into()));
        }
        let mut t = self.clone();
        t.c[0] = 0.0;
        let t = t.scale(1.0 / u0);
        let mut out = ScalarJet::constant(&self.space, 1.0);
        let mut tp = ScalarJet::constant(&self.space, 1.0);
        let mut sign = 1.0;
        for _ in 1..=self.space.order {
            sign = -sign;
            tp = tp.mul(&t);
            out = out.add(&tp.scale(sign));
        }
        Ok(out.scale(1.0 / u0))
    }

    pub fn sqrt(&self) -> Result<ScalarJet> {
        self.powf(0.5)
    }
}

/// Truncated multivector-valued Taylor polynomial.
#[derive(Debug, Clone)]
pub struct MvJet {
    pub space: Arc<JetSpace>,
    pub n_alg: u32,
    pub coeffs: Vec<Multivector>,
}

impl MvJet {
    pub fn constant(space: &Arc<JetSpace>, mv: Multivector) -> Self {
        let n_alg = mv.dim();
        let mut coeffs = vec![Multivector::zero(n_alg); space.len()];
        coeffs[0] = mv;
        MvJet { space: space.clone(), n_alg, coeffs }
    }

    pub fn zero(space: &Arc<JetSpace>, n_alg: u32) -> Self {
        MvJet {
            space: space.clone(),
            n_alg,
            coeffs: vec![Multivector::zero(n_alg); space.len()],
        }
    }

    /// The identity vector field `x` seeded as a jet: the variables are the
    /// `n` coordinates of the algebra's vector argument.
    pub fn vector_variable(space: &Arc<JetSpace>, x: &Vector) -> Self {
        let n = x.dim();
        assert_eq!(space.n_vars, n as usize);
        let mut jet = Self::constant(space, x.to_mv());
        if space.order >= 1 {
            for i in 0..n as usize {
                let mut m = vec![0u32; space.n_vars];
                m[i] = 1;
                let idx = space.monomial_index(&m).unwrap();
                jet.coeffs[idx] = Multivector::basis_vector(n, i as u32 + 1);
            }
        }
        jet
    }

    pub fn value(&self) -> Multivector {
        self.coeffs[0].clone()
    }

    /// Mixed partial for the multi-index `m` (coefficient times m!).
    pub fn partial(&self, m: &MultiIndex) -> Result<Multivector> {
        let idx = self
            .space
            .monomial_index(&m.0)
            .ok_or_else(|| Error::Precondition(format!("order {} unsupported", m.total())))?;
        Ok(self.coeffs[idx].scale(m.factorial()))
    }

    pub fn add(&self, o: &MvJet) -> MvJet {
        MvJet {
            space: self.space.clone(),
            n_alg: self.n_alg,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &MvJet) -> MvJet {
        MvJet {
            space: self.space.clone(),
            n_alg: self.n_alg,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, f: f64) -> MvJet {
        MvJet {
            space: self.space.clone(),
            n_alg: self.n_alg,
            coeffs: self.coeffs.iter().map(|a| a.scale(f)).collect(),
        }
    }

    /// Geometric product of jets.
    pub fn mul(&self, o: &MvJet) -> MvJet {
        let mut coeffs = vec![Multivector::zero(self.n_alg); self.space.len()];
        for &(i, j, t) in &self.space.pairs {
            let a = &self.coeffs[i as usize];
            if a.is_zero(0.0) {
                continue;
            }
            let b = &o.coeffs[j as usize];
            if b.is_zero(0.0) {
                continue;
            }
            coeffs[t as usize] += &(a * b);
        }
        MvJet { space: self.space.clone(), n_alg: self.n_alg, coeffs }
    }

    /// Multiply by a scalar jet.
    pub fn mul_scalar(&self, s: &ScalarJet) -> MvJet {
        let mut coeffs = vec![Multivector::zero(self.n_alg); self.space.len()];
        for &(i, j, t) in &self.space.pairs {
            let a = &self.coeffs[i as usize];
            if a.is_zero(0.0) {
                continue;
            }
            let b = s.c[j as usize];
            if b == 0.0 {
                continue;
            }
            coeffs[t as usize] += &a.scale(b);
        }
        MvJet { space: self.space.clone(), n_alg: self.n_alg, coeffs }
    }

    /// Coefficient-wise squared norm summed over vector components: for a
    /// grade-1 (vector-valued) jet this is the jet of `||v||^2`.
    pub fn vector_norm_sq(&self) -> ScalarJet {
        let n = self.n_alg;
        let mut acc = ScalarJet::constant(&self.space, 0.0);
        for i in 0..n {
            let mask = 1u32 << i;
            let comp = ScalarJet {
                space: self.space.clone(),
                c: self.coeffs.iter().map(|mv| mv.coeff(mask)).collect(),
            };
            acc = acc.add(&comp.mul(&comp));
        }
        acc
    }

    /// Scalar-part jet.
    pub fn scalar_part(&self) -> ScalarJet {
        ScalarJet {
            space: self.space.clone(),
            c: self.coeffs.iter().map(|mv| mv.scalar_part()).collect(),
        }
    }

    /// Clifford inverse of a vector-valued jet: `v^{-1} = -v / ||v||^2`.
    pub fn vector_inverse(&self) -> Result<MvJet> {
        let q = self.vector_norm_sq();
        if q.value() < 1e-24 {
            return Err(Error::Singularity("vector jet inverse at 0".into()));
        }
        Ok(self.scale(-1.0).mul_scalar(&q.recip()?))
    }

    /// `*` automorphism applied coefficient-wise.
    pub fn star(&self) -> MvJet {
        MvJet {
            space: self.space.clone(),
            n_alg: self.n_alg,
            coeffs: self.coeffs.iter().map(|mv| mv.star()).collect(),
        }
    }
}

/// Evaluate a closed-form field on a jet seeded at `x` and return the jet of
/// the field at `x` up to `order`.
pub fn taylor_jet<F>(f: F, x: &Vector, order: usize) -> Result<MvJet>
where
    F: Fn(&MvJet) -> Result<MvJet>,
{
    if order > MAX_ORDER {
        return Err(Error::Precondition(format!(
            "jet order {order} > {MAX_ORDER}"
        )));
    }
    let space = JetSpace::get(x.dim() as usize, order);
    let seed = MvJet::vector_variable(&space, x);
    f(&seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(JetSpace::get(3, 2).len(), 10); // C(5,2)
        assert_eq!(JetSpace::get(3, 4).len(), 35); // C(7,4)
        assert_eq!(JetSpace::get(4, 4).len(), 70);
    }

    #[test]
    fn hessian_of_norm_squared_is_twice_identity() {
        let x = Vector::new(vec![0.3, -0.7, 1.1]);
        let jet = taylor_jet(
            |v| {
                let q = v.vector_norm_sq();
                Ok(MvJet::constant(&v.space, Multivector::scalar(3, 0.0))
                    .add(&MvJet::zero(&v.space, 3).add(&{
                        let mut out = MvJet::zero(&v.space, 3);
                        for (i, c) in q.c.iter().enumerate() {
                            out.coeffs[i] = Multivector::scalar(3, *c);
                        }
                        out
                    })))
            },
            &x,
            2,
        )
        .unwrap();
        for i in 0..3usize {
            for j in 0..3usize {
                let mut m = vec![0u32; 3];
                m[i] += 1;
                m[j] += 1;
                let d = jet.partial(&MultiIndex(m)).unwrap().scalar_part();
                let expect = if i == j { 2.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-12, "i={i} j={j} d={d}");
            }
        }
        // first partials are 2 x_i
        for i in 0..3usize {
            let d = jet
                .partial(&MultiIndex::unit(3, i))
                .unwrap()
                .scalar_part();
            assert!((d - 2.0 * x.get(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn powf_and_recip_first_orders() {
        let space = JetSpace::get(2, 3);
        let u = ScalarJet::variable(&space, 2.0, 0); // u = 2 + t
        let p = u.powf(-1.5).unwrap();
        // d/dt (2+t)^{-1.5} = -1.5 (2+t)^{-2.5}
        let i1 = space.monomial_index(&[1, 0]).unwrap();
        assert!((p.c[i1] - (-1.5) * 2f64.powf(-2.5)).abs() < 1e-14);
        let r = u.recip().unwrap();
        assert!((r.c[i1] - (-0.25)).abs() < 1e-14);
        assert!((r.c[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jet_products_are_symmetric_in_mixed_partials() {
        // f(x) = x * x (Clifford square of the identity field) has symmetric
        // second partials by construction; spot-check extraction.
        let x = Vector::new(vec![0.4, 0.2, -0.5]);
        let jet = taylor_jet(|v| Ok(v.mul(v)), &x, 2).unwrap();
        let d12 = jet.partial(&MultiIndex(vec![1, 1, 0])).unwrap();
        let d21 = jet.partial(&MultiIndex(vec![1, 1, 0])).unwrap();
        assert!(d12.approx_eq(&d21, 0.0));
        // value is -||x||^2
        assert!((jet.value().scalar_part() + x.norm_sq()).abs() < 1e-14);
    }
}

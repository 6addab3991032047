//! Small dense linear algebra used across the crate: LU solves, Householder
//! least squares, power iteration, and the quaternion-packed block matrices
//! that back the discretized boundary operators on the half Hopf manifold.

use rayon::prelude::*;

use crate::algebra::Multivector;
use crate::error::{Error, Result};

/// Solve `A x = b` for dense row-major `A` (dim x dim) by LU with partial
/// pivoting. `A` is copied; intended for small systems.
pub fn lu_solve(a: &[f64], b: &[f64], dim: usize) -> Result<Vec<f64>> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let mut piv: Vec<usize> = (0..dim).collect();
    for k in 0..dim {
        let mut p = k;
        let mut best = m[piv[k] * dim + k].abs();
        for r in k + 1..dim {
            let v = m[piv[r] * dim + k].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best < 1e-300 {
            return Err(Error::IllConditioned("zero pivot in LU".into()));
        }
        piv.swap(k, p);
        let pk = piv[k];
        let inv = 1.0 / m[pk * dim + k];
        for r in k + 1..dim {
            let pr = piv[r];
            let f = m[pr * dim + k] * inv;
            if f == 0.0 {
                continue;
            }
            m[pr * dim + k] = f;
            for c in k + 1..dim {
                m[pr * dim + c] -= f * m[pk * dim + c];
            }
        }
    }
    // forward
    let mut y = vec![0.0; dim];
    for i in 0..dim {
        let mut s = x[piv[i]];
        for k in 0..i {
            s -= m[piv[i] * dim + k] * y[k];
        }
        y[i] = s;
    }
    // backward
    for i in (0..dim).rev() {
        let mut s = y[i];
        for k in i + 1..dim {
            s -= m[piv[i] * dim + k] * x[k];
        }
        x[i] = s / m[piv[i] * dim + i];
    }
    Ok(x)
}

/// Least-squares solve of an overdetermined system `A x ~ b` by Householder
/// QR. Returns the solution and an estimate of the condition number of `A`
/// (ratio of extreme diagonal magnitudes of `R`).
pub fn least_squares(a: &[f64], b: &[f64], rows: usize, cols: usize) -> Result<(Vec<f64>, f64)> {
    assert!(rows >= cols && a.len() == rows * cols && b.len() == rows);
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for k in 0..cols {
        // Householder vector for column k.
        let mut norm = 0.0;
        for i in k..rows {
            norm += m[i * cols + k] * m[i * cols + k];
        }
        let norm = norm.sqrt();
        if norm < 1e-300 {
            return Err(Error::IllConditioned(format!("rank-deficient column {k}")));
        }
        let alpha = if m[k * cols + k] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; rows - k];
        v[0] = m[k * cols + k] - alpha;
        for i in k + 1..rows {
            v[i - k] = m[i * cols + k];
        }
        let vn2: f64 = v.iter().map(|x| x * x).sum();
        if vn2 < 1e-300 {
            continue;
        }
        // apply reflector to remaining columns and to rhs
        for c in k..cols {
            let mut dot = 0.0;
            for i in k..rows {
                dot += v[i - k] * m[i * cols + c];
            }
            let f = 2.0 * dot / vn2;
            for i in k..rows {
                m[i * cols + c] -= f * v[i - k];
            }
        }
        let mut dot = 0.0;
        for i in k..rows {
            dot += v[i - k] * rhs[i];
        }
        let f = 2.0 * dot / vn2;
        for i in k..rows {
            rhs[i] -= f * v[i - k];
        }
        m[k * cols + k] = alpha;
    }
    let mut dmin = f64::INFINITY;
    let mut dmax = 0.0f64;
    for k in 0..cols {
        let d = m[k * cols + k].abs();
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    let cond = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };
    // back substitution on the R factor
    let mut x = vec![0.0; cols];
    for i in (0..cols).rev() {
        let mut s = rhs[i];
        for k in i + 1..cols {
            s -= m[i * cols + k] * x[k];
        }
        x[i] = s / m[i * cols + i];
    }
    Ok((x, cond))
}

// ---------------------------------------------------------------------------
// Even Cl_3 (quaternion) arithmetic.
//
// The discrete boundary operators on the half Hopf manifold have entries of
// the form (odd multivector) * e_3, which lands in the even subalgebra of
// Cl_3. With i = e_12, j = e_13, k = e_23 the relations are exactly the
// Hamilton quaternions, so entries pack into four floats.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub s: f64,
    pub i: f64, // e_12
    pub j: f64, // e_13
    pub k: f64, // e_23
}

impl Quat {
    pub const ZERO: Quat = Quat { s: 0.0, i: 0.0, j: 0.0, k: 0.0 };
    pub const ONE: Quat = Quat { s: 1.0, i: 0.0, j: 0.0, k: 0.0 };

    #[inline]
    pub fn mul(self, r: Quat) -> Quat {
        Quat {
            s: self.s * r.s - self.i * r.i - self.j * r.j - self.k * r.k,
            i: self.s * r.i + self.i * r.s + self.j * r.k - self.k * r.j,
            j: self.s * r.j - self.i * r.k + self.j * r.s + self.k * r.i,
            k: self.s * r.k + self.i * r.j - self.j * r.i + self.k * r.s,
        }
    }

    /// Clifford conjugation restricted to the even subalgebra (= quaternion
    /// conjugate): grade 0 fixed, grade 2 negated.
    #[inline]
    pub fn conj(self) -> Quat {
        Quat { s: self.s, i: -self.i, j: -self.j, k: -self.k }
    }

    #[inline]
    pub fn add(self, r: Quat) -> Quat {
        Quat { s: self.s + r.s, i: self.i + r.i, j: self.j + r.j, k: self.k + r.k }
    }

    #[inline]
    pub fn sub(self, r: Quat) -> Quat {
        Quat { s: self.s - r.s, i: self.i - r.i, j: self.j - r.j, k: self.k - r.k }
    }

    #[inline]
    pub fn scale(self, f: f64) -> Quat {
        Quat { s: self.s * f, i: self.i * f, j: self.j * f, k: self.k * f }
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.s * self.s + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn inverse(self) -> Result<Quat> {
        let q = self.norm_sq();
        if q < 1e-280 {
            return Err(Error::NotInvertible);
        }
        Ok(self.conj().scale(1.0 / q))
    }

    /// Pack the even part of a Cl_3 multivector; errors if the odd residue is
    /// above `tol`.
    pub fn from_mv(mv: &Multivector, tol: f64) -> Result<Quat> {
        if mv.dim() != 3 {
            return Err(Error::UnsupportedDimension(mv.dim(), "n = 3"));
        }
        let odd: f64 = [0b001u32, 0b010, 0b100, 0b111]
            .iter()
            .map(|&m| mv.coeff(m) * mv.coeff(m))
            .sum::<f64>()
            .sqrt();
        if odd > tol * mv.norm().max(1.0) {
            return Err(Error::Precondition(format!(
                "multivector has odd residue {odd:.3e}, not in the even subalgebra"
            )));
        }
        Ok(Quat {
            s: mv.coeff(0),
            i: mv.coeff(0b011),
            j: mv.coeff(0b101),
            k: mv.coeff(0b110),
        })
    }

    pub fn to_mv(self) -> Multivector {
        let mut mv = Multivector::zero(3);
        mv.set_coeff(0, self.s);
        mv.set_coeff(0b011, self.i);
        mv.set_coeff(0b101, self.j);
        mv.set_coeff(0b110, self.k);
        mv
    }
}

/// Dense square matrix of quaternion (even Cl_3) entries acting by left
/// multiplication on quaternion-valued node data.
#[derive(Debug, Clone)]
pub struct QuatMatrix {
    pub size: usize,
    pub entries: Vec<Quat>, // row-major
}

impl QuatMatrix {
    pub fn zeros(size: usize) -> Self {
        QuatMatrix { size, entries: vec![Quat::ZERO; size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = Quat::ONE;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Quat {
        self.entries[r * self.size + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, q: Quat) {
        self.entries[r * self.size + c] = q;
    }

    pub fn add(&self, other: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.size, other.size);
        QuatMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(*b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.size, other.size);
        QuatMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(*b))
                .collect(),
        }
    }

    /// Matrix product (quaternion entries, parallel over rows).
    pub fn matmul(&self, other: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let mut entries = vec![Quat::ZERO; n * n];
        entries
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, row)| {
                for k in 0..n {
                    let aik = self.entries[i * n + k];
                    if aik == Quat::ZERO {
                        continue;
                    }
                    let brow = &other.entries[k * n..(k + 1) * n];
                    for (r, b) in row.iter_mut().zip(brow) {
                        *r = r.add(aik.mul(*b));
                    }
                }
            });
        QuatMatrix { size: n, entries }
    }

    /// y = M x with quaternion left multiplication per entry.
    pub fn apply(&self, x: &[Quat]) -> Vec<Quat> {
        assert_eq!(x.len(), self.size);
        let n = self.size;
        (0..n)
            .into_par_iter()
            .map(|r| {
                let row = &self.entries[r * n..(r + 1) * n];
                let mut acc = Quat::ZERO;
                for (e, xv) in row.iter().zip(x) {
                    acc = acc.add(e.mul(*xv));
                }
                acc
            })
            .collect()
    }

    /// y = M^T x in the stacked-real sense; uses L(K)^T = L(conj K).
    pub fn apply_transpose(&self, x: &[Quat]) -> Vec<Quat> {
        assert_eq!(x.len(), self.size);
        let n = self.size;
        (0..n)
            .into_par_iter()
            .map(|c| {
                let mut acc = Quat::ZERO;
                for r in 0..n {
                    acc = acc.add(self.entries[r * n + c].conj().mul(x[r]));
                }
                acc
            })
            .collect()
    }

    /// Block LU factorization (no pivoting across blocks; pivots are
    /// quaternion entries, inverted exactly). Suited to `I + small` matrices.
    pub fn block_lu(&self) -> Result<QuatLu> {
        let n = self.size;
        let mut m = self.entries.clone();
        let mut pivinv = vec![Quat::ZERO; n];
        for k in 0..n {
            let piv = m[k * n + k];
            let pinv = piv.inverse().map_err(|_| {
                Error::IllConditioned(format!("non-invertible pivot at block {k}"))
            })?;
            if piv.norm_sq().sqrt() < 1e-8 {
                return Err(Error::IllConditioned(format!(
                    "pivot {k} too small ({:.3e})",
                    piv.norm_sq().sqrt()
                )));
            }
            pivinv[k] = pinv;
            // multipliers m_ik = A_ik * piv^{-1}
            for i in k + 1..n {
                m[i * n + k] = m[i * n + k].mul(pinv);
            }
            // trailing update A_ij -= m_ik * A_kj, parallel over rows
            let (upper, lower) = m.split_at_mut((k + 1) * n);
            let row_k = &upper[k * n..(k + 1) * n];
            lower
                .par_chunks_mut(n)
                .for_each(|row| {
                    let mik = row[k];
                    if mik == Quat::ZERO {
                        return;
                    }
                    for j in k + 1..n {
                        row[j] = row[j].sub(mik.mul(row_k[j]));
                    }
                });
        }
        Ok(QuatLu { size: n, lu: m, pivinv })
    }
}

/// Block LU factors of a `QuatMatrix`.
pub struct QuatLu {
    size: usize,
    lu: Vec<Quat>,
    pivinv: Vec<Quat>,
}

impl QuatLu {
    /// Solve M x = b.
    pub fn solve(&self, b: &[Quat]) -> Vec<Quat> {
        let n = self.size;
        let mut y = b.to_vec();
        for i in 1..n {
            let mut acc = y[i];
            for k in 0..i {
                acc = acc.sub(self.lu[i * n + k].mul(y[k]));
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in i + 1..n {
                acc = acc.sub(self.lu[i * n + k].mul(y[k]));
            }
            y[i] = self.pivinv[i].mul(acc);
        }
        y
    }

    /// Solve M^T x = b in the stacked-real sense (M^T = conj-transpose of
    /// blocks).
    pub fn solve_transpose(&self, b: &[Quat]) -> Vec<Quat> {
        // M = L U  =>  M^T = U^T L^T with U^T block-lower, L^T block-upper.
        let n = self.size;
        let mut y = b.to_vec();
        // U^T z = b : forward substitution, pivot blocks conj(U_ii).
        for i in 0..n {
            let mut acc = y[i];
            for k in 0..i {
                acc = acc.sub(self.lu[k * n + i].conj().mul(y[k]));
            }
            y[i] = self.pivinv[i].conj().mul(acc);
        }
        // L^T x = z : backward substitution, unit diagonal.
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in i + 1..n {
                acc = acc.sub(self.lu[k * n + i].conj().mul(y[k]));
            }
            y[i] = acc;
        }
        y
    }
}

pub fn quat_vec_norm(v: &[Quat]) -> f64 {
    v.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
}

pub fn quat_vec_scale(v: &[Quat], f: f64) -> Vec<Quat> {
    v.iter().map(|q| q.scale(f)).collect()
}

pub fn quat_vec_sub(a: &[Quat], b: &[Quat]) -> Vec<Quat> {
    a.iter().zip(b).map(|(x, y)| x.sub(*y)).collect()
}

pub fn quat_vec_dot(a: &[Quat], b: &[Quat]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.s * y.s + x.i * y.i + x.j * y.j + x.k * y.k)
        .sum()
}

/// Estimate the operator 2-norm of a linear map given by `apply` and its
/// real transpose `apply_t`, via power iteration on A^T A with a fixed seed.
pub fn operator_norm_est<F, G>(size: usize, apply: F, apply_t: G, iters: usize) -> f64
where
    F: Fn(&[Quat]) -> Vec<Quat>,
    G: Fn(&[Quat]) -> Vec<Quat>,
{
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<Quat> = (0..size)
        .map(|_| Quat {
            s: rng.gen_range(-1.0..1.0),
            i: rng.gen_range(-1.0..1.0),
            j: rng.gen_range(-1.0..1.0),
            k: rng.gen_range(-1.0..1.0),
        })
        .collect();
    let nv = quat_vec_norm(&v);
    v = quat_vec_scale(&v, 1.0 / nv);
    let mut sigma = 0.0;
    for _ in 0..iters {
        let w = apply(&v);
        sigma = quat_vec_norm(&w);
        if sigma < 1e-300 {
            return 0.0;
        }
        let u = quat_vec_scale(&w, 1.0 / sigma);
        let z = apply_t(&u);
        let nz = quat_vec_norm(&z);
        if nz < 1e-300 {
            return sigma;
        }
        let vnew = quat_vec_scale(&z, 1.0 / nz);
        let delta = quat_vec_norm(&quat_vec_sub(&vnew, &v));
        v = vnew;
        if delta < 1e-6 {
            break;
        }
    }
    sigma
}

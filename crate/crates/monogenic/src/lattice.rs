//! Lattices with a spin-split index, truncation policies and integer-shell
//! enumeration shared by all periodized series.

use serde::{Deserialize, Serialize};

use crate::algebra::Vector;
use crate::error::{Error, Result};

/// `k` linearly independent period vectors in `R^n` plus the spin-split
/// index `l` (0 <= l <= k): lattice points `sum m_i omega_i` carry the sign
/// character `(-1)^{m_1 + ... + m_l}`.
///
/// The split is into `Omega_l = Z w_1 + ... + Z w_l` and
/// `Omega_{k-l} = Z w_{l+1} + ... + Z w_k` (the trailing generators; the
/// source display's index range is typographically inconsistent and is read
/// this way).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lattice {
    basis: Vec<Vector>,
    l: usize,
}

impl Lattice {
    pub fn new(basis: Vec<Vector>, l: usize) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Precondition("lattice needs at least one period".into()));
        }
        let n = basis[0].dim();
        if basis.iter().any(|b| b.dim() != n) {
            return Err(Error::Precondition("lattice periods of mixed dimension".into()));
        }
        let k = basis.len();
        if k > n as usize {
            return Err(Error::Precondition(format!(
                "lattice rank {k} exceeds ambient dimension {n}"
            )));
        }
        if l > k {
            return Err(Error::Precondition(format!("spin index l={l} > k={k}")));
        }
        // Gram matrix must be nonsingular.
        let mut gram = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                gram[i * k + j] = basis[i].dot(&basis[j]);
            }
        }
        let mut rhs = vec![0.0; k];
        rhs[0] = 1.0;
        crate::linalg::lu_solve(&gram, &rhs, k)
            .map_err(|_| Error::Precondition("lattice basis is linearly dependent".into()))?;
        Ok(Lattice { basis, l })
    }

    /// Standard cubic lattice `Z e_1 + ... + Z e_k` in `R^n`.
    pub fn cubic(n: u32, k: usize, l: usize) -> Result<Self> {
        let basis = (1..=k as u32).map(|i| Vector::axis(n, i, 1.0)).collect();
        Lattice::new(basis, l)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> u32 {
        self.basis[0].dim()
    }

    pub fn spin_index(&self) -> usize {
        self.l
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// The lattice point for integer coordinates.
    pub fn point(&self, coords: &[i64]) -> Vector {
        let mut v = Vector::zeros(self.dim());
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                v = v.add(&b.scale(*c as f64));
            }
        }
        v
    }

    /// Sign character `(-1)^{m_1 + ... + m_l}` of integer coordinates.
    pub fn character(&self, coords: &[i64]) -> f64 {
        spin_character(coords, self.l)
    }

    /// Basis vectors all orthogonal to `e_n` (required by the hypermonogenic
    /// series).
    pub fn is_horizontal(&self) -> bool {
        self.basis.iter().all(|b| b.last().abs() < 1e-14)
    }
}

/// `(-1)^{m_1 + ... + m_l}` for integer lattice coordinates.
pub fn spin_character(coords: &[i64], l: usize) -> f64 {
    let s: i64 = coords.iter().take(l).sum();
    if s.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Pairing strategies for series at their convergence boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    None,
    /// Terms grouped as `chi(w) [K(z+w) + K(z-w)]` over the positive half
    /// lattice plus the `w = 0` term.
    Antipodal,
    /// Expanding symmetric boxes with a Cauchy-sequence diagnostic.
    ExpandingBox,
}

/// Shell/term cutoffs and tail-tolerance bookkeeping for infinite series.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Sup-norm radius of integer coordinates (>= 1).
    pub max_shell: usize,
    pub tail_tol: f64,
    pub pairing: Pairing,
}

impl TruncationPolicy {
    pub fn new(max_shell: usize, tail_tol: f64, pairing: Pairing) -> Result<Self> {
        if max_shell < 1 {
            return Err(Error::Precondition("max_shell must be >= 1".into()));
        }
        if tail_tol <= 0.0 {
            return Err(Error::Precondition("tail_tol must be positive".into()));
        }
        Ok(TruncationPolicy { max_shell, tail_tol, pairing })
    }

    pub fn with_shell(&self, max_shell: usize) -> Self {
        TruncationPolicy { max_shell, ..*self }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_shell: 12, tail_tol: 1e-2, pairing: Pairing::None }
    }
}

/// All integer coordinate vectors of sup-norm exactly `s` in `k` dimensions,
/// in a fixed deterministic order.
pub fn shell_coords(k: usize, s: usize) -> Vec<Vec<i64>> {
    let s = s as i64;
    let mut out = Vec::new();
    let mut cur = vec![0i64; k];
    fn rec(k: usize, s: i64, pos: usize, cur: &mut Vec<i64>, maxed: bool, out: &mut Vec<Vec<i64>>) {
        if pos == k {
            if maxed {
                out.push(cur.clone());
            }
            return;
        }
        for v in -s..=s {
            cur[pos] = v;
            rec(k, s, pos + 1, cur, maxed || v.abs() == s, out);
        }
        cur[pos] = 0;
    }
    if s == 0 {
        return vec![vec![0; k]];
    }
    rec(k, s, 0, &mut cur, false, &mut out);
    out
}

/// True if `coords` is in the positive half-lattice: first nonzero
/// coordinate positive.
pub fn is_positive_half(coords: &[i64]) -> bool {
    for &c in coords {
        if c > 0 {
            return true;
        }
        if c < 0 {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_examples() {
        assert_eq!(spin_character(&[5, -3], 0), 1.0);
        assert_eq!(spin_character(&[1, 0], 1), -1.0);
        assert_eq!(spin_character(&[1, 1], 2), 1.0);
        assert_eq!(spin_character(&[-1, 2, 7], 1), -1.0);
    }

    #[test]
    fn shell_counts() {
        assert_eq!(shell_coords(2, 0).len(), 1);
        assert_eq!(shell_coords(2, 1).len(), 8);
        assert_eq!(shell_coords(2, 2).len(), 16);
        assert_eq!(shell_coords(3, 1).len(), 26);
        // (2s+1)^k - (2s-1)^k
        assert_eq!(shell_coords(3, 2).len(), 125 - 27);
    }

    #[test]
    fn half_lattice_partition() {
        for c in shell_coords(3, 2) {
            let neg: Vec<i64> = c.iter().map(|v| -v).collect();
            assert_ne!(is_positive_half(&c), is_positive_half(&neg));
        }
    }

    #[test]
    fn lattice_validation() {
        assert!(Lattice::cubic(4, 2, 1).is_ok());
        assert!(Lattice::new(
            vec![Vector::axis(3, 1, 1.0), Vector::axis(3, 1, 2.0)],
            0
        )
        .is_err());
        assert!(Lattice::cubic(3, 2, 3).is_err());
        let lat = Lattice::cubic(4, 2, 1).unwrap();
        assert!(lat.is_horizontal());
        let p = lat.point(&[2, -1]);
        assert!(p.sub(&Vector::new(vec![2.0, -1.0, 0.0, 0.0])).norm() < 1e-15);
    }
}

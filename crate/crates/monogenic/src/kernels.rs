//! Closed-form base kernels: the Euclidean Cauchy kernel `G(z) = z/||z||^n`,
//! the harmonic Green kernel `H(z) = ||z||^{2-n}`, the hypermonogenic kernels
//! `p1`, `p2` of the upper half-space, and exact partial derivatives.

use crate::algebra::{Multivector, Vector};
use crate::error::{Error, Result};
use crate::jet::{taylor_jet, JetSpace, MultiIndex, MvJet};

/// Arguments closer than this to a singular set raise `Singularity` instead
/// of returning huge values.
pub const SINGULARITY_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    CauchyG,
    GreenH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperKind {
    P1,
    P2,
}

/// Euclidean Cauchy kernel `G(z) = z / ||z||^n` (vector valued, odd).
pub fn cauchy_g(z: &Vector) -> Result<Multivector> {
    let r = z.norm();
    if r < SINGULARITY_GUARD {
        return Err(Error::Singularity("Cauchy kernel at 0".into()));
    }
    Ok(z.scale(r.powi(-(z.dim() as i32))).to_mv())
}

/// `G` directly into a component buffer; lean path for lattice sums.
#[inline]
pub fn cauchy_g_components(z: &[f64], out: &mut [f64]) -> Result<()> {
    let n = z.len();
    let r2: f64 = z.iter().map(|c| c * c).sum();
    if r2 < SINGULARITY_GUARD * SINGULARITY_GUARD {
        return Err(Error::Singularity("Cauchy kernel at 0".into()));
    }
    let w = r2.powf(-(n as f64) / 2.0);
    for i in 0..n {
        out[i] = z[i] * w;
    }
    Ok(())
}

/// Harmonic Green kernel `H(z) = 1/||z||^{n-2}`, n >= 3 (scalar, even).
pub fn green_h(z: &Vector) -> Result<f64> {
    let n = z.dim();
    if n < 3 {
        return Err(Error::UnsupportedDimension(n, "n >= 3"));
    }
    let r = z.norm();
    if r < SINGULARITY_GUARD {
        return Err(Error::Singularity("Green kernel at 0".into()));
    }
    Ok(r.powi(-(n as i32 - 2)))
}

#[inline]
pub fn green_h_components(z: &[f64]) -> Result<f64> {
    let n = z.len();
    let r2: f64 = z.iter().map(|c| c * c).sum();
    if r2 < SINGULARITY_GUARD * SINGULARITY_GUARD {
        return Err(Error::Singularity("Green kernel at 0".into()));
    }
    Ok(r2.powf(-(n as f64 - 2.0) / 2.0))
}

/// Gradient of `H`: `dH/dz_i = (2-n) z_i / ||z||^n`.
#[inline]
pub fn green_h_grad(z: &[f64], out: &mut [f64]) -> Result<()> {
    let n = z.len();
    let r2: f64 = z.iter().map(|c| c * c).sum();
    if r2 < SINGULARITY_GUARD * SINGULARITY_GUARD {
        return Err(Error::Singularity("Green kernel gradient at 0".into()));
    }
    let w = (2.0 - n as f64) * r2.powf(-(n as f64) / 2.0);
    for i in 0..n {
        out[i] = z[i] * w;
    }
    Ok(())
}

/// Hypermonogenic kernels of the upper half-space:
/// `p1(x,y) = (x-y)^{-1} / (||x-y||^{n-2} ||x-y*||^{n-2})`,
/// `p2(x,y) = (x*-y)^{-1} / (||x-y||^{n-2} ||x*-y||^{n-2})`.
pub fn hyper_kernel(x: &Vector, y: &Vector, kind: HyperKind) -> Result<Multivector> {
    let n = x.dim() as i32;
    if y.dim() != x.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let d = x.sub(y);
    let r = d.norm();
    if r < SINGULARITY_GUARD {
        return Err(Error::Singularity("hypermonogenic kernel at x = y".into()));
    }
    match kind {
        HyperKind::P1 => {
            let dstar = x.sub(&y.star());
            let rs = dstar.norm();
            if rs < SINGULARITY_GUARD {
                return Err(Error::Singularity("p1 at x = y*".into()));
            }
            let inv = d.inverse()?;
            Ok(inv.to_mv().scale(r.powi(-(n - 2)) * rs.powi(-(n - 2))))
        }
        HyperKind::P2 => {
            let dstar = x.star().sub(y);
            let rs = dstar.norm();
            if rs < SINGULARITY_GUARD {
                return Err(Error::Singularity("p2 at x* = y".into()));
            }
            let inv = dstar.inverse()?;
            Ok(inv.to_mv().scale(r.powi(-(n - 2)) * rs.powi(-(n - 2))))
        }
    }
}

// --- jet variants --------------------------------------------------------

/// `G` on a vector-valued jet argument.
pub fn cauchy_g_jet(z: &MvJet) -> Result<MvJet> {
    let n = z.n_alg as f64;
    let q = z.vector_norm_sq();
    if q.value() < SINGULARITY_GUARD * SINGULARITY_GUARD {
        return Err(Error::Singularity("Cauchy kernel jet at 0".into()));
    }
    Ok(z.mul_scalar(&q.powf(-n / 2.0)?))
}

/// `H` on a vector-valued jet argument (returned as a scalar-blade jet).
pub fn green_h_jet(z: &MvJet) -> Result<MvJet> {
    let n = z.n_alg;
    if n < 3 {
        return Err(Error::UnsupportedDimension(n, "n >= 3"));
    }
    let q = z.vector_norm_sq();
    if q.value() < SINGULARITY_GUARD * SINGULARITY_GUARD {
        return Err(Error::Singularity("Green kernel jet at 0".into()));
    }
    let s = q.powf(-(n as f64 - 2.0) / 2.0)?;
    let mut out = MvJet::zero(&z.space, n);
    for (i, c) in s.c.iter().enumerate() {
        out.coeffs[i] = Multivector::scalar(n, *c);
    }
    Ok(out)
}

/// `p1`/`p2` on jets (both arguments may carry seeds).
pub fn hyper_kernel_jet(x: &MvJet, y: &MvJet, kind: HyperKind) -> Result<MvJet> {
    let n = x.n_alg as f64;
    let d = x.sub(y);
    let q = d.vector_norm_sq();
    if q.value() < SINGULARITY_GUARD * SINGULARITY_GUARD {
        return Err(Error::Singularity("hyper kernel jet at x = y".into()));
    }
    match kind {
        HyperKind::P1 => {
            let ds = x.sub(&y.star());
            let qs = ds.vector_norm_sq();
            if qs.value() < SINGULARITY_GUARD * SINGULARITY_GUARD {
                return Err(Error::Singularity("p1 jet at x = y*".into()));
            }
            let w = q.powf(-(n - 2.0) / 2.0)?.mul(&qs.powf(-(n - 2.0) / 2.0)?);
            Ok(d.vector_inverse()?.mul_scalar(&w))
        }
        HyperKind::P2 => {
            let ds = x.star().sub(y);
            let qs = ds.vector_norm_sq();
            if qs.value() < SINGULARITY_GUARD * SINGULARITY_GUARD {
                return Err(Error::Singularity("p2 jet at x* = y".into()));
            }
            let w = q.powf(-(n - 2.0) / 2.0)?.mul(&qs.powf(-(n - 2.0) / 2.0)?);
            Ok(ds.vector_inverse()?.mul_scalar(&w))
        }
    }
}

/// Exact mixed partial of `G` or `H` at `z`, by Taylor-mode propagation.
/// Decays like `||z||^{1-n-|m|}` (G) resp. `||z||^{2-n-|m|}` (H).
pub fn kernel_partial(kind: KernelKind, m: &MultiIndex, z: &Vector) -> Result<Multivector> {
    let order = m.total() as usize;
    if order > crate::jet::MAX_ORDER {
        return Err(Error::Precondition(format!(
            "derivative order {} > {}",
            order,
            crate::jet::MAX_ORDER
        )));
    }
    if m.0.len() != z.dim() as usize {
        return Err(Error::DimensionMismatch(m.0.len() as u32, z.dim()));
    }
    let jet = match kind {
        KernelKind::CauchyG => taylor_jet(cauchy_g_jet, z, order)?,
        KernelKind::GreenH => taylor_jet(green_h_jet, z, order)?,
    };
    jet.partial(m)
}

/// All first partials of `G` or `H` at once (one order-1 jet evaluation);
/// returns the vector of `d/dz_i` values.
pub fn kernel_gradient(kind: KernelKind, z: &Vector) -> Result<Vec<Multivector>> {
    let n = z.dim() as usize;
    let jet = match kind {
        KernelKind::CauchyG => taylor_jet(cauchy_g_jet, z, 1)?,
        KernelKind::GreenH => taylor_jet(green_h_jet, z, 1)?,
    };
    (0..n).map(|i| jet.partial(&MultiIndex::unit(n, i))).collect()
}

/// Shared jet space shortcut for callers seeding their own fields.
pub fn jet_space_for(z: &Vector, order: usize) -> std::sync::Arc<JetSpace> {
    JetSpace::get(z.dim() as usize, order)
}

//! Boundary integral formulas: Euclidean/Hopf/torus/cylinder reproduction,
//! the discrete Cauchy transform and its adjoint, Kerzman-Stein operators,
//! Szegő projections, Hardy splits, the Szegő/Poisson/Bergman kernels of
//! half the Hopf manifold, and the Poisson solve of the Dirichlet problem.
//!
//! Orientation convention: with outward unit normals, the raw integral
//! `(1/ω_n) ∮ G(x-y) n(x) dσ` evaluates to -1 for constants (see the
//! quadrature tests), so every monogenic-Cauchy reproduction here carries a
//! global -1 so that constants reproduce as +1; the hypermonogenic kernels
//! `p1/p2` contain the compensating inverse already and need no sign.
//!
//! Hypermonogenic pair reading: the reproduction used here is
//! `f(y) = (2^{n-2} y_n^{n-2}/ω_n) [ ∮ k1 n f dσ - ∮ k2 n* f* dσ ]`
//! with the prefactor applied to both integrals and the `*` involution on
//! both the normal and the data, exactly as displayed. The function class
//! this pair reproduces is the kernel of the `leutwiler` operator variant
//! `Df + (n-2) Qf / x_n`: the oracle fields `f ≡ 1` and `f = x_n e_n` are
//! reproduced to machine precision on arbitrary (also off-center) spheres,
//! while `f(x) = x` — annihilated by the `paper_literal` variant but not by
//! the `leutwiler` one — is not reproduced. See
//! `euclid_hyper_constant_reproduction` for the pinned evidence.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Multivector, MvAccumulator, Vector};
use crate::error::{Error, Result};
use crate::jet::{JetSpace, MultiIndex, MvJet};
use crate::kernels::{cauchy_g, cauchy_g_jet, green_h, hyper_kernel, HyperKind};
use crate::lattice::{Lattice, TruncationPolicy};
use crate::linalg::{operator_norm_est, Quat, QuatMatrix};
use crate::moebius::VahlenMatrix;
use crate::quadrature::{sphere_quadrature, SurfaceDescriptor, SurfaceQuadrature};
use crate::series::{
    cot_series, hopf_series, hyper_cot_series, torus_kernel, CotKind, HopfKind, HopfParams,
    HyperCotKind, SeriesValue, TorusKind,
};
use crate::unit_sphere_area;

pub type Field<'a> = &'a (dyn Fn(&Vector) -> Result<Multivector> + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremKind {
    EuclidCauchy,
    HopfCauchy,
    HopfGreen,
    HopfHyper,
    TorusGreen4pt,
    CylinderHyper,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub value: Multivector,
    /// Estimated quadrature error (difference against a coarser rule).
    pub quadrature_budget: f64,
    /// Accumulated series truncation budget.
    pub truncation_budget: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading_note: Option<String>,
}

/// Configuration shared by the reproduction formulas.
#[derive(Debug, Clone)]
pub struct ReproduceConfig {
    pub hopf: Option<HopfParams>,
    pub lattice: Option<Lattice>,
    /// Four-point torus kernel anchors (torus_green_4pt).
    pub anchors: Vec<Vector>,
    pub policy: TruncationPolicy,
    /// Apply the hypermonogenic prefactor to both integrals (the validated
    /// reading) or to the first only (the literal display).
    pub prefactor_both: bool,
}

impl ReproduceConfig {
    pub fn new(policy: TruncationPolicy) -> Self {
        ReproduceConfig { hopf: None, lattice: None, anchors: Vec::new(), policy, prefactor_both: true }
    }
}

fn check_interior(surf: &SurfaceQuadrature, y: &Vector) -> Result<()> {
    if let SurfaceDescriptor::Sphere { center, radius, .. } = &surf.descriptor {
        let c = Vector::new(center.clone());
        if y.sub(&c).norm() >= radius * 0.999 {
            return Err(Error::Precondition(
                "evaluation point is not strictly inside the surface".into(),
            ));
        }
    }
    Ok(())
}

fn node_clearance(surf: &SurfaceQuadrature, y: &Vector) -> Result<()> {
    let min = surf
        .nodes
        .iter()
        .map(|x| x.sub(y).norm())
        .fold(f64::INFINITY, f64::min);
    if min < 1e-6 {
        return Err(Error::Singularity(
            "kernel singularity inside a node's exclusion radius".into(),
        ));
    }
    Ok(())
}

/// Coarser copy of a sphere rule for the quadrature-error estimate.
fn coarser(surf: &SurfaceQuadrature) -> Option<SurfaceQuadrature> {
    match &surf.descriptor {
        SurfaceDescriptor::Sphere { center, radius, order } => {
            let o = (order * 2 / 3).max(4);
            if o == *order {
                return None;
            }
            sphere_quadrature(&Vector::new(center.clone()), *radius, o, surf.dim()).ok()
        }
        _ => None,
    }
}

struct IntegralOut {
    value: Multivector,
    truncation: f64,
}

/// Core quadrature loop: `scale * Σ_j w_j K(x_j) n_j f(x_j)` where `K`
/// returns (kernel value, tail estimate).
fn kernel_integral(
    surf: &SurfaceQuadrature,
    kernel: &(dyn Fn(&Vector) -> Result<(Multivector, f64)> + Sync),
    f: Field,
    star_normal: bool,
    star_f: bool,
    scale: f64,
) -> Result<IntegralOut> {
    let n = surf.dim();
    let terms: Result<Vec<(Multivector, f64)>> = surf
        .nodes
        .iter()
        .zip(&surf.normals)
        .zip(&surf.weights)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|((x, nx), w)| {
            let (k, tail) = kernel(x)?;
            let mut nv = nx.to_mv();
            if star_normal {
                nv = nv.star();
            }
            let mut fv = f(x)?;
            let fnorm = fv.norm();
            if star_f {
                fv = fv.star();
            }
            let term = (&(&k * &nv) * &fv).scale(*w * scale);
            Ok((term, tail * **w * scale.abs() * fnorm))
        })
        .collect();
    let terms = terms?;
    let mut acc = MvAccumulator::new(n);
    let mut trunc = 0.0;
    for (t, tl) in terms {
        acc.add(&t);
        trunc += tl;
    }
    Ok(IntegralOut { value: acc.value(), truncation: trunc })
}

fn series_pair(v: SeriesValue) -> (Multivector, f64) {
    (v.value, v.tail_estimate)
}

/// The Hopf harmonic kernel together with its Dirac derivative in `x`,
/// evaluated termwise: the dilated terms analytically, the inversion
/// sandwich by order-1 jets.
fn hopf_h_with_dirac(
    x: &Vector,
    y: &Vector,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<(Multivector, Multivector, f64)> {
    let n = x.dim();
    let m = params.m as f64;
    let kk = policy.max_shell as i64;
    let w = (n as f64 - 2.0) / 2.0;
    let mut val = MvAccumulator::new(n);
    let mut dval = MvAccumulator::new(n);
    for k in (-kk..=0).rev() {
        let mk = m.powi(k as i32);
        let arg = x.scale(mk).sub(y);
        let weight = m.powf(k as f64 * w);
        val.add(&Multivector::scalar(n, green_h(&arg)? * weight));
        // D_x H(m^k x - y) = m^k (2-n) G(m^k x - y)
        dval.add(&cauchy_g(&arg)?.scale(weight * mk * (2.0 - n as f64)));
    }
    // sandwich terms via jets in x
    let space = JetSpace::get(n as usize, 1);
    let xjet = MvJet::vector_variable(&space, x);
    let hx = crate::kernels::green_h_jet(&xjet)?;
    let xinv = xjet.vector_inverse()?;
    let yin = y.inverse()?;
    let hy = green_h(y)?;
    let mut sandwich = MvJet::zero(&space, n);
    for k in 1..=kk {
        let arg = xinv
            .scale(m.powi(-k as i32))
            .sub(&MvJet::constant(&space, yin.to_mv()));
        let inner = crate::kernels::green_h_jet(&arg)?.scale(m.powf(-(k as f64) * w));
        sandwich = sandwich.add(&inner);
    }
    let total = hx.mul(&sandwich).scale(hy);
    val.add(&total.value());
    let mut dsand = Multivector::zero(n);
    for i in 0..n as usize {
        let di = total.partial(&MultiIndex::unit(n as usize, i))?;
        dsand += &(&Multivector::basis_vector(n, i as u32 + 1) * &di);
    }
    dval.add(&dsand);

    let q = m.powf(-w);
    let last = m.powf(-(kk as f64) * w);
    let tail = 4.0 * last * q / (1.0 - q) * (1.0 + green_h(y).unwrap_or(1.0));
    Ok((val.value(), dval.value(), tail))
}

/// Quadrature evaluation of the right-hand side of the requested theorem.
/// `df` is required for the green kinds (the second, `Df`-weighted integral).
pub fn reproduce_integral(
    theorem: TheoremKind,
    f: Field,
    df: Option<Field>,
    surf: &SurfaceQuadrature,
    y: &Vector,
    cfg: &ReproduceConfig,
) -> Result<Reproduction> {
    check_interior(surf, y)?;
    node_clearance(surf, y)?;
    let n = surf.dim();
    if y.dim() != n {
        return Err(Error::DimensionMismatch(y.dim(), n));
    }
    let omega = unit_sphere_area(n);

    let eval = |surf: &SurfaceQuadrature| -> Result<(Multivector, f64, Option<String>)> {
        match theorem {
            TheoremKind::EuclidCauchy => {
                let kernel = move |x: &Vector| -> Result<(Multivector, f64)> {
                    Ok((cauchy_g(&x.sub(y))?, 0.0))
                };
                let out = kernel_integral(surf, &kernel, f, false, false, -1.0 / omega)?;
                Ok((out.value, out.truncation, None))
            }
            TheoremKind::HopfCauchy => {
                let params = cfg
                    .hopf
                    .ok_or_else(|| Error::Precondition("hopf params required".into()))?;
                let kernel = move |x: &Vector| -> Result<(Multivector, f64)> {
                    Ok(series_pair(hopf_series(x, y, params, HopfKind::G, &cfg.policy)?))
                };
                let out = kernel_integral(surf, &kernel, f, false, false, -1.0 / omega)?;
                Ok((out.value, out.truncation, None))
            }
            TheoremKind::HopfGreen => {
                let params = cfg
                    .hopf
                    .ok_or_else(|| Error::Precondition("hopf params required".into()))?;
                let dff =
                    df.ok_or_else(|| Error::Precondition("green kinds need Df".into()))?;
                // f(y) = 1/((n-2) ω_n) ∮ [ (D_x H_H) n f + H_H n (Df) ] dσ
                let scale = 1.0 / ((n as f64 - 2.0) * omega);
                let kernel_d = move |x: &Vector| -> Result<(Multivector, f64)> {
                    let (_, d, tail) = hopf_h_with_dirac(x, y, params, &cfg.policy)?;
                    Ok((d, tail))
                };
                let kernel_h = move |x: &Vector| -> Result<(Multivector, f64)> {
                    let (h, _, tail) = hopf_h_with_dirac(x, y, params, &cfg.policy)?;
                    Ok((h, tail))
                };
                let a = kernel_integral(surf, &kernel_d, f, false, false, scale)?;
                let b = kernel_integral(surf, &kernel_h, dff, false, false, scale)?;
                Ok((
                    &a.value + &b.value,
                    a.truncation + b.truncation,
                    Some("green pair: (D_x H_H, H_H)".into()),
                ))
            }
            TheoremKind::TorusGreen4pt => {
                let lat = cfg
                    .lattice
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("lattice required".into()))?;
                if cfg.anchors.len() != 4 {
                    return Err(Error::Precondition("four anchors required".into()));
                }
                let dff =
                    df.ok_or_else(|| Error::Precondition("green kinds need Df".into()))?;
                let scale = 1.0 / ((n as f64 - 2.0) * omega);
                let a1 = cfg.anchors[0].clone();
                // kernel argument z = x - y + a_1: pole of the +H(z-a_1)
                // term sits at x = y.
                let kernel_h = {
                    let a1 = a1.clone();
                    move |x: &Vector| -> Result<(Multivector, f64)> {
                        let z = x.sub(y).add(&a1);
                        Ok(series_pair(torus_kernel(
                            &z,
                            &cfg.anchors,
                            lat,
                            TorusKind::FourPointHarmonic,
                            &cfg.policy,
                        )?))
                    }
                };
                let kernel_d = {
                    let a1 = a1.clone();
                    move |x: &Vector| -> Result<(Multivector, f64)> {
                        let z = x.sub(y).add(&a1);
                        let v = four_point_dirac(&z, &cfg.anchors, lat, &cfg.policy)?;
                        Ok(series_pair(v))
                    }
                };
                let a = kernel_integral(surf, &kernel_d, f, false, false, scale)?;
                let b = kernel_integral(surf, &kernel_h, dff, false, false, scale)?;
                Ok((
                    &a.value + &b.value,
                    a.truncation + b.truncation,
                    Some("green pair: (D_z cot4, cot4), argument z = x - y + a_1".into()),
                ))
            }
            TheoremKind::HopfHyper | TheoremKind::CylinderHyper => {
                let pref = 2f64.powi(n as i32 - 2) * y.last().powi(n as i32 - 2) / omega;
                let pref2 = if cfg.prefactor_both { pref } else { 1.0 };
                let (k1, k2): (
                    Box<dyn Fn(&Vector) -> Result<(Multivector, f64)> + Sync>,
                    Box<dyn Fn(&Vector) -> Result<(Multivector, f64)> + Sync>,
                ) = match theorem {
                    TheoremKind::HopfHyper => {
                        let params = cfg
                            .hopf
                            .ok_or_else(|| Error::Precondition("hopf params required".into()))?;
                        (
                            Box::new(move |x: &Vector| {
                                Ok(series_pair(hopf_series(
                                    x,
                                    y,
                                    params,
                                    HopfKind::H1,
                                    &cfg.policy,
                                )?))
                            }),
                            Box::new(move |x: &Vector| {
                                Ok(series_pair(hopf_series(
                                    x,
                                    y,
                                    params,
                                    HopfKind::H2,
                                    &cfg.policy,
                                )?))
                            }),
                        )
                    }
                    _ => {
                        let lat = cfg
                            .lattice
                            .as_ref()
                            .ok_or_else(|| Error::Precondition("lattice required".into()))?;
                        (
                            Box::new(move |x: &Vector| {
                                Ok(series_pair(hyper_cot_series(
                                    x,
                                    y,
                                    lat,
                                    HyperCotKind::C1,
                                    &cfg.policy,
                                )?))
                            }),
                            Box::new(move |x: &Vector| {
                                Ok(series_pair(hyper_cot_series(
                                    x,
                                    y,
                                    lat,
                                    HyperCotKind::C2,
                                    &cfg.policy,
                                )?))
                            }),
                        )
                    }
                };
                let a = kernel_integral(surf, k1.as_ref(), f, false, false, pref)?;
                let b = kernel_integral(surf, k2.as_ref(), f, true, true, -pref2)?;
                let note = format!(
                    "hyper prefactor applied to {}",
                    if cfg.prefactor_both { "both integrals" } else { "the first integral only" }
                );
                Ok((&a.value + &b.value, a.truncation + b.truncation, Some(note)))
            }
        }
    };

    let (value, truncation, note) = eval(surf)?;
    let quadrature_budget = match coarser(surf) {
        Some(c) => match eval(&c) {
            Ok((v2, _, _)) => (&value - &v2).norm(),
            Err(_) => f64::NAN,
        },
        None => 0.0,
    };
    Ok(Reproduction {
        value,
        quadrature_budget,
        truncation_budget: truncation,
        reading_note: note,
    })
}

/// Dirac derivative (in `z`) of the four-point torus kernel, termwise:
/// `D H = (2-n) G` applied under the signed, character-weighted sum.
fn four_point_dirac(
    z: &Vector,
    anchors: &[Vector],
    lattice: &Lattice,
    policy: &TruncationPolicy,
) -> Result<SeriesValue> {
    let n = z.dim();
    let mut acc = MvAccumulator::new(n);
    let mut terms = 0usize;
    let mut delta_last = 0.0;
    for s in 0..=policy.max_shell {
        let mut shell = MvAccumulator::new(n);
        for coords in crate::lattice::shell_coords(n as usize, s) {
            let chi = lattice.character(&coords);
            let w = lattice.point(&coords);
            for (idx, a) in anchors.iter().enumerate() {
                let sign = if idx < 2 { chi } else { -chi };
                let g = cauchy_g(&z.sub(a).add(&w))?;
                shell.add(&g.scale(sign * (2.0 - n as f64)));
                terms += 1;
            }
        }
        let sv = shell.value();
        if s == policy.max_shell {
            delta_last = sv.norm();
        }
        acc.add(&sv);
    }
    Ok(SeriesValue {
        value: acc.value(),
        tail_estimate: 2.0 * delta_last * policy.max_shell as f64,
        terms_summed: terms,
        cauchy_delta: Some(delta_last),
        warnings: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Discrete boundary operators on the half-Hopf annulus (n = 3)
// ---------------------------------------------------------------------------

/// Dense operator over quadrature nodes with entries in the even subalgebra
/// of Cl_3 (quaternions), acting by left multiplication. Boundary data in
/// the full algebra is handled through the even/odd right-module split.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub quat: QuatMatrix,
    pub weights: Vec<f64>,
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.quat.size
    }

    pub fn entry_mv(&self, r: usize, c: usize) -> Multivector {
        self.quat.get(r, c).to_mv()
    }

    /// Weighted L^2 adjoint: `A*[r][c] = (w_c / w_r) conj(A[c][r])`.
    pub fn adjoint(&self) -> OperatorMatrix {
        let n = self.quat.size;
        let mut out = QuatMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let q = self.quat.get(c, r).conj().scale(self.weights[c] / self.weights[r]);
                out.set(r, c, q);
            }
        }
        OperatorMatrix { quat: out, weights: self.weights.clone() }
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { quat: self.quat.sub(&other.quat), weights: self.weights.clone() }
    }

    pub fn add_identity(&self) -> OperatorMatrix {
        let mut q = self.quat.clone();
        for i in 0..q.size {
            let d = q.get(i, i).add(Quat::ONE);
            q.set(i, i, d);
        }
        OperatorMatrix { quat: q, weights: self.weights.clone() }
    }

    /// Serialize the dense entries in the Multivector wire schema, row
    /// major, together with the node weights. Guarded against huge meshes.
    pub fn to_json(&self) -> Result<String> {
        if self.size() > 4096 {
            return Err(Error::Precondition(format!(
                "refusing to serialize a {0}x{0} operator matrix",
                self.size()
            )));
        }
        #[derive(Serialize)]
        struct MatrixJson {
            size: usize,
            weights: Vec<f64>,
            entries: Vec<Vec<Multivector>>,
        }
        let n = self.size();
        let entries = (0..n)
            .map(|r| (0..n).map(|c| self.entry_mv(r, c)).collect())
            .collect();
        crate::report::to_json_17(&MatrixJson { size: n, weights: self.weights.clone(), entries })
    }

    /// Apply to full Cl_3-valued node data via the right-module split:
    /// `M(η_even + ξ e_1) = M(η_even) + M(ξ) e_1`.
    pub fn apply_mv(&self, data: &[Multivector]) -> Result<Vec<Multivector>> {
        let e1 = Multivector::basis_vector(3, 1);
        let me1 = e1.scale(-1.0);
        let mut even = Vec::with_capacity(data.len());
        let mut oddq = Vec::with_capacity(data.len());
        for d in data {
            if d.dim() != 3 {
                return Err(Error::UnsupportedDimension(d.dim(), "n = 3"));
            }
            let mut ev = Multivector::zero(3);
            let mut od = Multivector::zero(3);
            for mask in 0..8u32 {
                if crate::algebra::blade_grade(mask) % 2 == 0 {
                    ev.set_coeff(mask, d.coeff(mask));
                } else {
                    od.set_coeff(mask, d.coeff(mask));
                }
            }
            even.push(Quat::from_mv(&ev, 1e30).unwrap());
            // ξ = odd * (-e_1) is even
            oddq.push(Quat::from_mv(&(&od * &me1), 1e-9)?);
        }
        let r_even = self.quat.apply(&even);
        let r_odd = self.quat.apply(&oddq);
        Ok(r_even
            .iter()
            .zip(&r_odd)
            .map(|(a, b)| &a.to_mv() + &(&b.to_mv() * &e1))
            .collect())
    }
}

/// Discretized Cauchy transform `H' = 1/2 I + C` on the half-Hopf boundary:
/// principal value via zero self-weight, off-diagonal blocks
/// `(w_j / ω_n) G_H(x_j, x_i) e_n` (the orientation-corrected kernel times
/// the outward normal `-e_n`).
pub fn cauchy_transform_matrix(
    surf: &SurfaceQuadrature,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<OperatorMatrix> {
    if surf.dim() != 3 {
        return Err(Error::UnsupportedDimension(surf.dim(), "n = 3"));
    }
    let n = surf.len();
    for i in 0..n {
        for j in i + 1..n {
            if surf.nodes[i].sub(&surf.nodes[j]).norm() < 1e-12 {
                return Err(Error::Precondition("degenerate mesh: duplicate nodes".into()));
            }
        }
    }
    let omega = unit_sphere_area(3);
    let en = Multivector::basis_vector(3, 3);
    let rows: Result<Vec<Vec<Quat>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![Quat::ZERO; n];
            for j in 0..n {
                if i == j {
                    row[j] = Quat { s: 0.5, i: 0.0, j: 0.0, k: 0.0 };
                    continue;
                }
                // σ = -1 reading folded with n(x_j) = -e_n gives +e_n
                let g = hopf_series(&surf.nodes[j], &surf.nodes[i], params, HopfKind::G, policy)?;
                let kappa = (&g.value * &en).scale(surf.weights[j] / omega);
                row[j] = Quat::from_mv(&kappa, 1e-9)?;
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let mut quat = QuatMatrix::zeros(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, q) in row.into_iter().enumerate() {
            quat.set(i, j, q);
        }
    }
    Ok(OperatorMatrix { quat, weights: surf.weights.clone() })
}

/// Kerzman-Stein operator `A' = H' - H'^*`; skew-adjoint by construction,
/// zero diagonal.
pub fn kerzman_stein_matrix(
    surf: &SurfaceQuadrature,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<OperatorMatrix> {
    let h = cauchy_transform_matrix(surf, params, policy)?;
    Ok(kerzman_stein_from_cauchy(&h))
}

pub fn kerzman_stein_from_cauchy(h: &OperatorMatrix) -> OperatorMatrix {
    h.sub(&h.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SzegoVariant {
    /// `P' = H'(I + A')` as printed.
    AsPrinted,
    /// `P' = H'(I + A')^{-1}`, the standard Kerzman-Stein identity; the
    /// contract default.
    Resolvent,
}

#[derive(Debug)]
pub struct SzegoProjection {
    pub matrix: OperatorMatrix,
    /// Idempotency defect `max ||P^2 v - P v|| / ||v||` over the fixed
    /// dictionary of resolved Hardy-section probes (see
    /// `hardy_probe_sections`).
    pub idempotency_defect: f64,
    /// Unrestricted operator-norm estimate of `P^2 - P` (power iteration).
    /// This is O(1) for any nodal discretization of the principal-value
    /// kernel — the symbol of a Calderón-Zygmund operator cannot be
    /// represented at the node scale — and is reported for transparency.
    pub operator_norm_defect: f64,
    pub variant: SzegoVariant,
}

/// Deterministic dictionary of boundary traces of monogenic sections
/// `G_H(·, y0)`: poles on three radii and three angles, above and below the
/// boundary at heights of at least three mesh spacings (the same
/// resolvedness margin the Dirichlet accuracy warnings use). These span the
/// two Hardy spaces the projection exists to split.
pub fn hardy_probe_sections(
    surf: &SurfaceQuadrature,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<Vec<Vec<Multivector>>> {
    let h_minus = -(3.2 * surf.spacing).max(0.5);
    let h_plus = (3.8 * surf.spacing).max(0.6);
    let mut probes = Vec::new();
    for ri in [1.15, 1.45, 1.75] {
        for ang in [0.3f64, 2.2, 4.3] {
            for hgt in [h_minus, h_plus] {
                let y0 = Vector::new(vec![ri * ang.cos(), ri * ang.sin(), hgt]);
                let f: Result<Vec<Multivector>> = surf
                    .nodes
                    .iter()
                    .map(|x| Ok(hopf_series(x, &y0, params, HopfKind::G, policy)?.value))
                    .collect();
                probes.push(f?);
            }
        }
    }
    Ok(probes)
}

/// Build the Szegő projection for the requested variant and measure its
/// idempotency defect.
pub fn szego_projection_matrix(
    surf: &SurfaceQuadrature,
    params: HopfParams,
    policy: &TruncationPolicy,
    variant: SzegoVariant,
) -> Result<SzegoProjection> {
    let h = cauchy_transform_matrix(surf, params, policy)?;
    let probes = hardy_probe_sections(surf, params, policy)?;
    szego_from_cauchy(&h, variant, &probes)
}

pub fn szego_from_cauchy(
    h: &OperatorMatrix,
    variant: SzegoVariant,
    probes: &[Vec<Multivector>],
) -> Result<SzegoProjection> {
    let a = kerzman_stein_from_cauchy(h);
    let ipa = a.add_identity();
    let p = match variant {
        SzegoVariant::AsPrinted => h.quat.matmul(&ipa.quat),
        SzegoVariant::Resolvent => {
            let lu = ipa.quat.block_lu()?;
            // columns of (I+A)^{-1}, then H * inv
            let n = ipa.quat.size;
            let mut inv = QuatMatrix::zeros(n);
            let cols: Vec<Vec<Quat>> = (0..n)
                .into_par_iter()
                .map(|c| {
                    let mut e = vec![Quat::ZERO; n];
                    e[c] = Quat::ONE;
                    lu.solve(&e)
                })
                .collect();
            for (c, col) in cols.into_iter().enumerate() {
                for (r, q) in col.into_iter().enumerate() {
                    inv.set(r, c, q);
                }
            }
            h.quat.matmul(&inv)
        }
    };
    let pm = OperatorMatrix { quat: p, weights: h.weights.clone() };
    let mut defect: f64 = 0.0;
    for v in probes {
        let pv = pm.apply_mv(v)?;
        let ppv = pm.apply_mv(&pv)?;
        let num: f64 = ppv
            .iter()
            .zip(&pv)
            .map(|(x, y)| (x - y).norm().powi(2))
            .sum::<f64>()
            .sqrt();
        let den: f64 = v.iter().map(|x| x.norm().powi(2)).sum::<f64>().sqrt();
        if den > 0.0 {
            defect = defect.max(num / den);
        }
    }
    // unrestricted operator norm of P^2 - P via matvec power iteration
    let op_defect = operator_norm_est(
        pm.quat.size,
        |v| {
            let pv = pm.quat.apply(v);
            let ppv = pm.quat.apply(&pv);
            ppv.iter().zip(&pv).map(|(x, y)| x.sub(*y)).collect()
        },
        |v| {
            let pv = pm.quat.apply_transpose(v);
            let ppv = pm.quat.apply_transpose(&pv);
            ppv.iter().zip(&pv).map(|(x, y)| x.sub(*y)).collect()
        },
        80,
    );
    Ok(SzegoProjection {
        matrix: pm,
        idempotency_defect: defect,
        operator_norm_defect: op_defect,
        variant,
    })
}

/// Hardy split of boundary data: `g_plus = H' g`, `g_minus = g - g_plus`.
pub fn hardy_project(
    g: &[Multivector],
    h: &OperatorMatrix,
) -> Result<(Vec<Multivector>, Vec<Multivector>)> {
    let g_plus = h.apply_mv(g)?;
    let g_minus: Vec<Multivector> = g.iter().zip(&g_plus).map(|(a, b)| a - b).collect();
    Ok((g_plus, g_minus))
}

// ---------------------------------------------------------------------------
// Half-Hopf kernels and the Dirichlet problem
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfHopfKernel {
    Szego,
    Poisson,
    BergmanMonogenic,
    BergmanHarmonic,
}

/// Kernels of half the Hopf manifold: the Szegő kernel `G_H(x, w) e_n` (the
/// boundary's unit-normal Clifford factor), the Poisson kernel
/// `2 Sc(Szegő)`, the monogenic Bergman kernel `2 ∂/∂w_n Szegő` and its
/// harmonic counterpart (the scalar part).
pub fn half_hopf_kernel(
    x: &Vector,
    w: &Vector,
    kind: HalfHopfKernel,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<Multivector> {
    let n = x.dim();
    if w.last() <= 0.0 {
        return Err(Error::Precondition("interior point needs w_n > 0".into()));
    }
    let en = Multivector::basis_vector(n, n);
    match kind {
        HalfHopfKernel::Szego => {
            let g = hopf_series(x, w, params, HopfKind::G, policy)?;
            Ok(&g.value * &en)
        }
        HalfHopfKernel::Poisson => {
            let s = half_hopf_kernel(x, w, HalfHopfKernel::Szego, params, policy)?;
            Ok(Multivector::scalar(n, 2.0 * s.scalar_part()))
        }
        HalfHopfKernel::BergmanMonogenic => {
            // 2 d/dw_n of the Szegő kernel, by a jet in the w slot
            let space = JetSpace::get(n as usize, 1);
            let wjet = MvJet::vector_variable(&space, w);
            let g = hopf_g_jet_y(x, &wjet, params, policy)?;
            let s = g.mul(&MvJet::constant(&space, en));
            let d = s.partial(&MultiIndex::unit(n as usize, n as usize - 1))?;
            Ok(d.scale(2.0))
        }
        HalfHopfKernel::BergmanHarmonic => {
            let b = half_hopf_kernel(x, w, HalfHopfKernel::BergmanMonogenic, params, policy)?;
            Ok(Multivector::scalar(n, b.scalar_part()))
        }
    }
}

/// `G_H(x, y)` with the second argument carried as a jet (for derivatives in
/// the interior variable).
pub fn hopf_g_jet_y(
    x: &Vector,
    yjet: &MvJet,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<MvJet> {
    let n = x.dim();
    let m = params.m as f64;
    let kk = policy.max_shell as i64;
    let w = (n as f64 - 1.0) / 2.0;
    let space = &yjet.space;
    let mut acc = MvJet::zero(space, n);
    for k in (-kk..=0).rev() {
        let arg = MvJet::constant(space, x.scale(m.powi(k as i32)).to_mv()).sub(yjet);
        acc = acc.add(&cauchy_g_jet(&arg)?.scale(m.powf(k as f64 * w)));
    }
    let xin = x.inverse()?;
    let gx = MvJet::constant(space, cauchy_g(x)?);
    let gy = cauchy_g_jet(yjet)?;
    let yinv = yjet.vector_inverse()?;
    let mut sandwich = MvJet::zero(space, n);
    for k in 1..=kk {
        let arg = MvJet::constant(space, xin.scale(m.powi(-k as i32)).to_mv()).sub(&yinv);
        sandwich = sandwich.add(&cauchy_g_jet(&arg)?.scale(m.powf(-(k as f64) * w)));
    }
    // periodization sign: the sandwich enters with -1 for the G kind
    acc = acc.sub(&gx.mul(&sandwich).mul(&gy));
    Ok(acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletSolution {
    pub values: Vec<Multivector>,
    pub warnings: Vec<String>,
}

/// Harmonic-measure periodization of the half-space Poisson kernel for the
/// quotient `H^+/{m^k}` acting on plain (dilation-invariant) boundary data:
/// `P'(x, w) = Σ_k m^{k(n-1)} P_E(m^k x, w)` with
/// `P_E(x, w) = 2 Sc(G(x-w) e_n)`. The `m^{k(n-1)}` weight is the boundary
/// Jacobian, so the dilated copies of the annulus tile the whole boundary
/// plane and constants extend to exactly 1; the spinor-weighted kernel
/// `2 Sc(G_H e_n)` serves weighted sections instead and does not (its
/// constant extension measures ~1.15 at m = 2, see the tests).
pub fn quotient_poisson_kernel(
    x: &Vector,
    w: &Vector,
    params: HopfParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let n = x.dim();
    let en = Multivector::basis_vector(n, n);
    let m = params.m as f64;
    let kk = policy.max_shell as i64;
    let mut acc = 0.0;
    let mut comp = 0.0;
    for k in -kk..=kk {
        let mk = m.powi(k as i32);
        let g = cauchy_g(&x.scale(mk).sub(w))?;
        let term = mk.powi(n as i32 - 1) * 2.0 * (&g * &en).scalar_part();
        let t = acc + term;
        if acc.abs() >= term.abs() {
            comp += (acc - t) + term;
        } else {
            comp += (term - t) + acc;
        }
        acc = t;
    }
    Ok(acc + comp)
}

/// Poisson-kernel solve of the Dirichlet problem on half the Hopf manifold:
/// `u(w) = (1/ω_n) Σ_j w_j P'(x_j, w) g_j` with the harmonic-measure
/// periodized kernel.
pub fn dirichlet_solve(
    g: &[f64],
    surf: &SurfaceQuadrature,
    params: HopfParams,
    policy: &TruncationPolicy,
    eval_points: &[Vector],
) -> Result<DirichletSolution> {
    if g.len() != surf.len() {
        return Err(Error::Precondition("boundary data length != node count".into()));
    }
    let n = surf.dim();
    let omega = unit_sphere_area(n);
    let mut warnings = Vec::new();
    let values: Result<Vec<Multivector>> = eval_points
        .iter()
        .map(|w| {
            let dist = w.last().abs();
            if dist < 2.0 * surf.spacing {
                warnings.push(format!(
                    "eval point {w} is within 2 mesh spacings of the boundary; accuracy degraded"
                ));
            }
            let mut acc = MvAccumulator::new(n);
            for ((x, wt), gj) in surf.nodes.iter().zip(&surf.weights).zip(g) {
                let p = quotient_poisson_kernel(x, w, params, policy)?;
                acc.add(&Multivector::scalar(n, p * wt * gj / omega));
            }
            Ok(acc.value())
        })
        .collect();
    Ok(DirichletSolution { values: values?, warnings })
}

// ---------------------------------------------------------------------------
// Cylinder/torus monogenic reproduction helpers used by tests and the CLI
// ---------------------------------------------------------------------------

/// Cauchy reproduction with the cylinder cotangent kernel (monogenic case,
/// rank < n-1): `f(y) = -(1/ω_n) ∮ cot_1(x - y) n(x) f(x) dσ`.
pub fn cylinder_cauchy_reproduce(
    f: Field,
    surf: &SurfaceQuadrature,
    y: &Vector,
    lattice: &Lattice,
    policy: &TruncationPolicy,
) -> Result<Multivector> {
    check_interior(surf, y)?;
    let n = surf.dim();
    let omega = unit_sphere_area(n);
    let kernel = move |x: &Vector| -> Result<(Multivector, f64)> {
        Ok(series_pair(cot_series(&x.sub(y), lattice, CotKind::Monogenic, policy)?))
    };
    let out = kernel_integral(surf, &kernel, f, false, false, -1.0 / omega)?;
    Ok(out.value)
}

/// The hypermonogenic pair reproduction in the plain Euclidean setting
/// (kernels `p1`, `p2`); used to pin the prefactor/orientation reading.
pub fn euclid_hyper_reproduce(
    f: Field,
    surf: &SurfaceQuadrature,
    y: &Vector,
    prefactor_both: bool,
) -> Result<Multivector> {
    check_interior(surf, y)?;
    let n = surf.dim();
    let omega = unit_sphere_area(n);
    let pref = 2f64.powi(n as i32 - 2) * y.last().powi(n as i32 - 2) / omega;
    let pref2 = if prefactor_both { pref } else { 1.0 };
    let k1 = move |x: &Vector| -> Result<(Multivector, f64)> {
        Ok((hyper_kernel(x, y, HyperKind::P1)?, 0.0))
    };
    let k2 = move |x: &Vector| -> Result<(Multivector, f64)> {
        Ok((hyper_kernel(x, y, HyperKind::P2)?, 0.0))
    };
    let a = kernel_integral(surf, &k1, f, false, false, pref)?;
    let b = kernel_integral(surf, &k2, f, true, true, -pref2)?;
    Ok(&a.value + &b.value)
}

/// Truncated-table automorphy data for `G_H(·, y0)` used as a test section:
/// left-monogenic and dilation-automorphic, the canonical Theorem-1 field.
pub fn hopf_g_section(y0: &Vector, params: HopfParams, policy: TruncationPolicy) -> impl Fn(&Vector) -> Result<Multivector> + '_ {
    move |x: &Vector| Ok(hopf_series(x, y0, params, HopfKind::G, &policy)?.value)
}

/// Vahlen matrix helper reexport for CLI convenience.
pub fn translation_matrix(v: &Vector) -> VahlenMatrix {
    VahlenMatrix::translation(v)
}

//! Surface quadrature: product Gauss-Legendre x trapezoid rules on spheres
//! (n = 3, 4, 5) and the annulus mesh on the boundary of half the Hopf
//! manifold.

use serde::Serialize;

use crate::algebra::Vector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub enum SurfaceDescriptor {
    Sphere { center: Vec<f64>, radius: f64, order: usize },
    HalfHopfBoundary { m: u32, res_r: usize, res_theta: usize },
}

/// Nodes, outward unit normals and weights for a closed hypersurface.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceQuadrature {
    pub nodes: Vec<Vector>,
    pub normals: Vec<Vector>,
    pub weights: Vec<f64>,
    pub descriptor: SurfaceDescriptor,
    /// Typical node spacing, used by accuracy warnings near the surface.
    pub spacing: f64,
    /// Quotient identifications (inner ring node, wrapped outer partner) for
    /// the half-Hopf annulus; empty for spheres.
    pub identifications: Vec<(usize, usize)>,
}

impl SurfaceQuadrature {
    pub fn dim(&self) -> u32 {
        self.nodes[0].dim()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(npts: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; npts];
    let mut weights = vec![0.0; npts];
    let n = npts as f64;
    for i in 0..npts {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=npts {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // recompute for the weight
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=npts {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[npts - 1 - i] = x;
        weights[npts - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Product quadrature on the sphere `||x - center|| = radius` in R^n,
/// n in {3, 4, 5}. `order` Gauss-Legendre points per polar angle and
/// `2*order` equispaced azimuthal points; exact for spherical polynomials up
/// to the rule's degree.
pub fn sphere_quadrature(
    center: &Vector,
    radius: f64,
    order: usize,
    n: u32,
) -> Result<SurfaceQuadrature> {
    if !(3..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(n, "n in {3,4,5}"));
    }
    if order < 4 {
        return Err(Error::Precondition("quadrature order must be >= 4".into()));
    }
    if center.dim() != n {
        return Err(Error::DimensionMismatch(center.dim(), n));
    }
    let (gl_nodes, gl_weights) = gauss_legendre(order);
    let ntheta = 2 * order;
    let dtheta = 2.0 * std::f64::consts::PI / ntheta as f64;
    let mut nodes = Vec::new();
    let mut normals = Vec::new();
    let mut weights = Vec::new();

    // unit-sphere direction + measure factor per chart
    let mut push = |dir: Vec<f64>, w: f64| {
        let unit = Vector::new(dir);
        let node = center.add(&unit.scale(radius));
        nodes.push(node);
        normals.push(unit.clone());
        weights.push(w * radius.powi(n as i32 - 1));
    };

    match n {
        3 => {
            // x = (sin f cos t, sin f sin t, cos f), dσ = sin f df dt;
            // substitute u = cos f so GL integrates du exactly.
            for (u, wu) in gl_nodes.iter().zip(&gl_weights) {
                let sf = (1.0 - u * u).sqrt();
                for it in 0..ntheta {
                    let t = (it as f64 + 0.5) * dtheta;
                    push(vec![sf * t.cos(), sf * t.sin(), *u], wu * dtheta);
                }
            }
        }
        4 => {
            // x = (cos f1, sin f1 cos f2, sin f1 sin f2 cos t, sin f1 sin f2 sin t)
            // dσ = sin^2 f1 sin f2 df1 df2 dt; u2 = cos f2 by substitution,
            // f1 by GL on [0, pi] with the sin^2 factor in the weight.
            for i1 in 0..order {
                let f1 = std::f64::consts::PI * 0.5 * (gl_nodes[i1] + 1.0);
                let w1 = gl_weights[i1] * std::f64::consts::PI * 0.5 * f1.sin().powi(2);
                for (u2, wu2) in gl_nodes.iter().zip(&gl_weights) {
                    let s2 = (1.0 - u2 * u2).sqrt();
                    for it in 0..ntheta {
                        let t = (it as f64 + 0.5) * dtheta;
                        push(
                            vec![
                                f1.cos(),
                                f1.sin() * u2,
                                f1.sin() * s2 * t.cos(),
                                f1.sin() * s2 * t.sin(),
                            ],
                            w1 * wu2 * dtheta,
                        );
                    }
                }
            }
        }
        5 => {
            for i1 in 0..order {
                let f1 = std::f64::consts::PI * 0.5 * (gl_nodes[i1] + 1.0);
                let w1 = gl_weights[i1] * std::f64::consts::PI * 0.5 * f1.sin().powi(3);
                for i2 in 0..order {
                    let f2 = std::f64::consts::PI * 0.5 * (gl_nodes[i2] + 1.0);
                    let w2 = gl_weights[i2] * std::f64::consts::PI * 0.5 * f2.sin().powi(2);
                    for (u3, wu3) in gl_nodes.iter().zip(&gl_weights) {
                        let s3 = (1.0 - u3 * u3).sqrt();
                        for it in 0..ntheta {
                            let t = (it as f64 + 0.5) * dtheta;
                            push(
                                vec![
                                    f1.cos(),
                                    f1.sin() * f2.cos(),
                                    f1.sin() * f2.sin() * u3,
                                    f1.sin() * f2.sin() * s3 * t.cos(),
                                    f1.sin() * f2.sin() * s3 * t.sin(),
                                ],
                                w1 * w2 * wu3 * dtheta,
                            );
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }

    let spacing = radius * (crate::unit_sphere_area(n) / nodes.len() as f64)
        .powf(1.0 / (n as f64 - 1.0));
    Ok(SurfaceQuadrature {
        nodes,
        normals,
        weights,
        descriptor: SurfaceDescriptor::Sphere {
            center: center.as_slice().to_vec(),
            radius,
            order,
        },
        spacing,
        identifications: Vec::new(),
    })
}

/// Boundary mesh of half the Hopf manifold `H^+(R^n)/{m^k}`: the annulus
/// `{x_n = 0, 1 <= ||x|| < m}` with nodes uniform in `(log r, theta)`,
/// outward normal `-e_n`, and weights integrating the surface measure
/// `r dr dtheta` exactly per cell. Opposite radial edges are identified in
/// the returned index map (r = 1 pairs with r -> m). First release: n = 3.
pub fn half_hopf_boundary_mesh(
    m: u32,
    res_r: usize,
    res_theta: usize,
    n: u32,
) -> Result<SurfaceQuadrature> {
    if n != 3 {
        return Err(Error::UnsupportedDimension(n, "n = 3 (first release)"));
    }
    if m < 2 {
        return Err(Error::Precondition("Hopf base m must be >= 2".into()));
    }
    if res_r < 2 || res_theta < 2 {
        return Err(Error::Precondition("mesh resolution must be >= 2".into()));
    }
    let mf = m as f64;
    let dlog = mf.ln() / res_r as f64;
    let dtheta = 2.0 * std::f64::consts::PI / res_theta as f64;
    let mut nodes = Vec::with_capacity(res_r * res_theta);
    let mut normals = Vec::with_capacity(res_r * res_theta);
    let mut weights = Vec::with_capacity(res_r * res_theta);
    let mut identifications = Vec::new();
    for ir in 0..res_r {
        // node at the log-midpoint of cell [m^{ir/R}, m^{(ir+1)/R})
        let r = mf.powf((ir as f64 + 0.5) / res_r as f64);
        let r_lo = mf.powf(ir as f64 / res_r as f64);
        let r_hi = mf.powf((ir as f64 + 1.0) / res_r as f64);
        // exact cell integral of r dr
        let w_radial = 0.5 * (r_hi * r_hi - r_lo * r_lo);
        for it in 0..res_theta {
            let t = (it as f64 + 0.5) * dtheta;
            nodes.push(Vector::new(vec![r * t.cos(), r * t.sin(), 0.0]));
            normals.push(Vector::axis(3, 3, -1.0));
            weights.push(w_radial * dtheta);
            if ir == 0 {
                // the inner ring is identified with the (virtual) outer ring
                // r -> m at the same angle; record the wrap partner index of
                // the outermost ring.
                identifications.push((it, (res_r - 1) * res_theta + it));
            }
        }
    }
    let spacing = (dlog.max(dtheta)) * mf.sqrt();
    Ok(SurfaceQuadrature {
        nodes,
        normals,
        weights,
        descriptor: SurfaceDescriptor::HalfHopfBoundary { m, res_r, res_theta },
        spacing,
        identifications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Multivector;
    use crate::kernels::cauchy_g;

    #[test]
    fn gl_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // \int_{-1}^1 t^6 dt = 2/7
        let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(6)).sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-13);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_area_and_centroid() {
        for (n, r) in [(3u32, 1.0), (3, 0.7), (4, 1.3), (5, 1.0)] {
            let q = sphere_quadrature(&Vector::zeros(n), r, if n == 5 { 8 } else { 16 }, n)
                .unwrap();
            let area = crate::unit_sphere_area(n) * r.powi(n as i32 - 1);
            // 1e-6 relative is the contract; n = 3 is exact by substitution,
            // the polar Gauss-Legendre charts for n = 4, 5 converge spectrally
            assert!(
                (q.total_weight() - area).abs() < 1e-6 * area,
                "n={n}: area {} vs {area}",
                q.total_weight()
            );
            // centered first moment vanishes
            for i in 0..n as usize {
                let m: f64 = q
                    .nodes
                    .iter()
                    .zip(&q.weights)
                    .map(|(x, w)| w * x.get(i))
                    .sum();
                assert!(m.abs() < 1e-10, "n={n} i={i} moment {m}");
            }
        }
    }

    #[test]
    fn mean_value_raw_integral() {
        // \oint G(x) n(x) dσ over the unit sphere equals -ω_n: the kernel
        // times the outward normal is x·x = -1. (Reproduction formulas carry
        // the compensating orientation sign.)
        let n = 3;
        let q = sphere_quadrature(&Vector::zeros(n), 1.0, 24, n).unwrap();
        let mut acc = Multivector::zero(n);
        for ((x, nx), w) in q.nodes.iter().zip(&q.normals).zip(&q.weights) {
            let g = cauchy_g(x).unwrap();
            acc += &(&g * &nx.to_mv()).scale(*w);
        }
        let expect = -crate::unit_sphere_area(n);
        assert!((acc.scalar_part() - expect).abs() < 1e-8);
        assert!(acc.grade_residue(0) < 1e-10);
    }

    #[test]
    fn half_hopf_mesh_area_and_structure() {
        let m = 2u32;
        let q = half_hopf_boundary_mesh(m, 32, 32, 3).unwrap();
        assert_eq!(q.len(), 32 * 32);
        let area = std::f64::consts::PI * ((m * m) as f64 - 1.0);
        assert!(
            (q.total_weight() - area).abs() < 1e-6 * area,
            "area {} vs {area}",
            q.total_weight()
        );
        for nx in &q.normals {
            assert!((nx.norm() - 1.0).abs() < 1e-15);
            assert!((nx.get(2) + 1.0).abs() < 1e-15);
        }
        // identification pairs inner ring with outer ring, same angle index
        assert_eq!(q.identifications.len(), 32);
        assert_eq!(q.identifications[3], (3, 31 * 32 + 3));
        for (inner, outer) in &q.identifications {
            let xi = &q.nodes[*inner];
            let xo = &q.nodes[*outer];
            // same angle: cross product of planar parts vanishes
            let cross = xi.get(0) * xo.get(1) - xi.get(1) * xo.get(0);
            assert!(cross.abs() < 1e-10);
        }
        // nodes inside [1, m)
        for x in &q.nodes {
            let r = (x.get(0) * x.get(0) + x.get(1) * x.get(1)).sqrt();
            assert!((1.0..m as f64).contains(&r));
        }
    }

    #[test]
    fn unsupported_dims_rejected() {
        assert!(sphere_quadrature(&Vector::zeros(6), 1.0, 8, 6).is_err());
        assert!(half_hopf_boundary_mesh(2, 16, 16, 4).is_err());
    }
}

//! Clifford analysis on conformally flat manifolds at desk scale.
//!
//! The crate implements the explicit kernel functions of Euclidean and
//! hyperbolic Clifford analysis (Cauchy kernel, harmonic Green kernel, the
//! hypermonogenic kernels), their periodizations over dilation groups,
//! translation lattices and arithmetic Vahlen groups (Hopf manifolds,
//! cylinders/tori, higher-genus quotients), and the boundary integral
//! machinery built on top of them: Cauchy/Green reproduction formulas,
//! Kerzman-Stein operators, Szegő projections, Poisson solves, Mittag-Leffler
//! constructions and Laurent fits.
//!
//! Everything is verified numerically: finite-difference operator residuals,
//! quadrature reproduction oracles and truncation self-consistency checks.
//! See the `examples/` directory for one runnable example per capability and
//! `verify` for the per-module check suites behind the CLI.

pub mod algebra;
pub mod error;
pub mod groups;
pub mod integrals;
pub mod jet;
pub mod kernels;
pub mod lattice;
pub mod linalg;
pub mod mittag;
pub mod moebius;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod verify;

pub mod cli;

pub use algebra::{Involution, Multivector, Vector};
pub use error::{Error, Result};

/// Surface area of the unit sphere S^{n-1} in R^n: `2 pi^{n/2} / Gamma(n/2)`.
pub fn unit_sphere_area(n: u32) -> f64 {
    use std::f64::consts::PI;
    match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        5 => 8.0 * PI * PI / 3.0,
        6 => PI.powi(3),
        7 => 16.0 * PI.powi(3) / 15.0,
        8 => PI.powi(4) / 3.0,
        _ => panic!("dimension {n} out of supported range"),
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn sphere_areas() {
        // cross-check against 2 pi^{n/2} / Gamma(n/2) evaluated by hand
        assert!((super::unit_sphere_area(3) - 12.566370614359172).abs() < 1e-12);
        assert!((super::unit_sphere_area(4) - 19.739208802178716).abs() < 1e-12);
        assert!((super::unit_sphere_area(5) - 26.318945069571622).abs() < 1e-12);
    }
}

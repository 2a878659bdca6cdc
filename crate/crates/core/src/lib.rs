//! Exact arithmetic for the sphere inner product on real polynomial spaces.
//!
//! The crate evaluates `<F, G> = (1/alpha_N) * integral over the unit sphere of F*G`
//! through a closed-form Gram matrix on the lexicographic monomial basis, builds
//! orthogonal bases of rational polynomial subspaces made of primitive integer
//! polynomials with certified height bounds, and checks spherical designs.
//!
//! Everything except the Monte Carlo oracle and the float design mode is exact.
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod combinatorics;
pub mod designs;
pub mod error;
pub mod gram;
pub mod heights;
pub mod linalg;
pub mod moments;
pub mod orthogonalizer;
pub mod polynomial;

pub use arith::{parse_rational, Int, Rational};
pub use combinatorics::{
    dimension, double_factorial, enumerate_multiindices, even_pair_half, IndexBasis, MultiIndex,
};
pub use designs::{
    design_check, design_defect, integrate_over_sphere, reference_configuration, Configuration,
    DesignReport, PointSet,
};
pub use error::{Error, Result};
pub use gram::{build_form, check_positive_definite, form_height, inner_product, GramForm};
pub use heights::{
    coordinate_hyperplane, dual_hyperplane_height, subspace_degree, subspace_height,
    PolynomialSubspace, SquaredHeight, Subspace,
};
pub use linalg::{IntegerLattice, RationalMatrix};
pub use moments::{
    moment_gamma_oracle, monte_carlo_moment, normalized_monomial_moment, sphere_area,
};
pub use orthogonalizer::{
    orthogonal_basis, orthogonal_basis_sphere, radical, siegel_basis, verify_certificate,
    OrthogonalCertificate, SiegelBasis,
};
pub use polynomial::Polynomial;

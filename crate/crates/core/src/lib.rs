//! Generalized Zernike polynomials on the unit disk, worked entirely in
//! coefficient space.
//!
//! Every routine is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64`.

pub mod basis;
pub mod calculus;
pub mod error;
pub mod experiments;
pub mod jacobi;
pub mod poly;
pub mod projection;
pub mod quadrature;
pub mod scalar;
pub mod special;

pub use basis::{
    change_parameter, derivative_coeffs, lower_parameter_one, monomial_expansion, raise_parameter_one, reexpand,
};
pub use calculus::{
    angular_derivative, apply_operator_l, cartesian_derivative, l2_inner_product, sobolev_seminorm_sq,
    wirtinger_derivative, wz_norm_sq, Axis, SeminormConvention, WirtingerDirection,
};
pub use error::{Result, ZernikeError};
pub use jacobi::{jacobi_connection, jacobi_eval, JacobiParams};
pub use poly::{eigenvalue, evaluate, linear_combine, make_poly, mode_norm_sq, ModeIndex, ZernikePoly};
pub use projection::{expand_function, residual, truncate};
pub use quadrature::{disk_rule, integrate, DiskQuadrature};
pub use scalar::Real;
pub use special::{gamma_ratio, pochhammer, LogScaled, Sign};

pub type Poly = ZernikePoly<f64>;
pub type Poly32 = ZernikePoly<f32>;
pub type Quadrature = DiskQuadrature<f64>;
pub type Table = experiments::RateTable<f64>;

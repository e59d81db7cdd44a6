//! Lorentzian geometry of `U(2)`: frame, metric, 2-form star, quadrature.

pub mod forms;
pub mod frame;
pub mod quadrature;

pub use forms::{eigen_projection, eigenbasis, hodge_star, Eigen, FormValue, D_COFRAME, STAR};
pub use frame::{metric_bilinear, metric_on_tangent, FrameBasis, U2Point, SIGNATURE};
pub use quadrature::{haar_su2, haar_u2, SU2Grid, SU2_VOLUME};

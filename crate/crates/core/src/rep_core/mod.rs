//! Finite-dimensional representation theory of `SU(2)` and `U(2)`.

pub mod character;
pub mod ktype;
pub mod poly;
pub mod sym_power;

pub use character::{su2_character, su2_character_at, LaurentPoly};
pub use ktype::{
    ker_d_ktypes, multiplicity_closed_two_forms, multiplicity_one_forms, restrict_to_m, tensor_decompose, KType,
    KerDFamily, MLabel,
};
pub use poly::{GroupPoly, Monomial};
pub use sym_power::{dsym_power, inner, psi, psi_poly, sym_power_matrix, MatrixCoeffFn, Sl2Basis};

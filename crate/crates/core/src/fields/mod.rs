//! Form fields on `U(2)`, the Maxwell basis solutions and the inversion `eta`.

pub mod field;
pub mod maxwell;

pub use field::{coframe, Evaluator, FormField};
pub use maxwell::{
    eigen_residuals, field_samples, j_classification, lowest_ktype_basis, maxwell_basis, EigenResiduals, FieldSample,
    JClassification, MaxwellBasisLabel, Side, Sign, Solution,
};

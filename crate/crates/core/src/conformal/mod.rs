//! The conformal group `U(2,2)`, its action on `U(2)` and on Maxwell fields,
//! Minkowski space and plane waves.

pub mod frequency;
pub mod group;
pub mod infinitesimal;
pub mod minkowski;
pub mod planewave;

pub use frequency::{s_cap_k_character, CharacterFit};
pub use group::{
    cayley_l, check_lie, i22, j0, p_generators, random_lie_g1, split_complex_g1, ActOutcome, ConformalElement,
    ConformalFactor, Realization, COND_LIMIT, DRIFT_LIMIT,
};
pub use infinitesimal::{infinitesimal_action, infinitesimal_action_real, DEFAULT_STEP};
pub use minkowski::{
    embed_minkowski, embedding_conformal_factor, extract_eh, maxwell_residual_fd, minkowski_star, MaxwellResidual,
    MinkowskiPoint, EH,
};
pub use planewave::{light_cone_functional, PlaneWave, PlaneWaveConstraints};

//! Repetitive control synthesis on the identified model.
//!
//! Per rotation `j` the pitch is `U_j = φ(θ_j + η_j)`, where φ spans 1P/2P
//! sines and cosines and η is a small excitation kept inside that span. The
//! identified Markov rows are lifted to one-period-ahead predictors, projected
//! onto the basis, and an LQR gain on the projected model drives
//! `θ_{j+1} = αθ_j − βK[Ȳ_j; δθ_j; δȲ_j]`.

mod basis;
mod excitation;
mod ftipc;
mod lifted;

pub use basis::{build_basis, pitch_command, project_output, BasisProjection, N_COEFFS};
pub use excitation::{unrestricted_excitation_mode, ExcitationGenerator, UnrestrictedExcitation};
pub use ftipc::{
    project_markov, project_state_space, state_space_from_blocks, synthesize_gain, update_theta, ControllerState,
    Ftipc, FtipcConfig, RotationLog, UnrestrictedConfig,
};
pub use lifted::{assemble_lifted, blade_lifted, LiftedModel};

//! Numerical kernels shared by identification, control synthesis and metrics.

mod dare;
mod pinv;
mod rls;
mod welch;

pub use dare::{riccati_residual, solve_dare, spectral_radius, DareSolution, DARE_MAX_ITER, DARE_TOL};
pub use pinv::{pinv, pinv_default, PINV_RTOL};
pub use rls::{rls_update, RlsState, RLS_DELTA};
pub use welch::{welch_psd, PsdEstimate, WindowKind};

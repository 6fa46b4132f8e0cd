//! Exact integer linear algebra and the K-theory of the crossed products.

pub mod cache;
pub mod eta;
pub mod hermite;
pub mod matrix;
pub mod presentation;
pub mod pv;
pub mod smith;

pub use cache::{CacheKey, MatrixCache, MemoryCache};
pub use eta::{
    eta_apply, eta_matrix, eta_preimage, explicit_preimage, membership_in_image, q_combination,
    recurrence_sides, sigma_residue, split_tuple, tau_matrix, verify_recurrence,
};
pub use hermite::{kernel_lattice, solve_integer, ColumnEchelon};
pub use matrix::IntMatrix;
pub use presentation::AbelianPresentation;
pub use pv::{pv_k_groups, Coordinates, KGroups, LevelSummary, PvOptions};
pub use smith::{smith_normal_form, SmithForm};

//! A-polynomials, colored Jones values, knot states and the experiments built
//! on them.

mod experiments;
pub mod jones;
mod laurent_ml;
mod mahler;
mod presets;
mod state;
mod volume;

pub use experiments::{aj_residual, annihilation_residual, apoly_to_symbol, AjOptions};
pub use jones::{colored_jones, colored_jones_all, colored_jones_at, state_root};
pub use laurent_ml::LaurentML;
pub use mahler::{mahler_measure, MahlerReport};
pub use presets::{builtin_apolynomial, CyclotomicRule, KnotPreset, PresetData, QuadraticExponent};
pub use state::{knot_state, log_norm_sqr, KnotState, StateOptions, Weighting};
pub use volume::{clausen2, simplicial_volume_oracle, volume_fit, volume_sequence, VolumeRow};

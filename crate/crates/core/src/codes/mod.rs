//! Pair encoders, design procedures and block encoding.

pub mod angle;
mod design;
pub mod ydesign;

pub use angle::{
    design_x_angle, full_difference_set, reduced_difference_set, x_precoder_angle, AngleOptimum,
    Difference,
};
pub use design::{
    assemble_generator, effective_pair_matrix, encode_block, CodeDesign, PairEncoder, Scheme,
};
pub use ydesign::{
    power_split_grid, y_code_params_offline, y_precoder_params, OfflineYDesign, YPrecoderParams,
    DEFAULT_DESIGN_SAMPLES, DEFAULT_DESIGN_SNR_DB,
};

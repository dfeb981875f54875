//! Integer layer for a lattice-based interactive test of quantum capability.
//!
//! Everything downstream (state preparation, interactive rounds, the
//! acceptance harness) works over Z_q at desk-scale dimensions, so this
//! crate keeps arithmetic exact: vectors and matrices hold canonical
//! representatives in `[0, q)`, squared Euclidean norms are `u128`
//! integers, and every threshold a verdict depends on is compared in
//! exact rational form whenever `log2(q)` is an integer (every runnable
//! preset uses a power-of-two modulus).
//!
//! Module map:
//! - [`vector`]: `ZqVector` / `ZqMatrix` plus the JSON wire schema
//! - [`encode`]: centered representatives and little-endian bit encoding
//! - [`gauss`]: truncated discrete Gaussian sampling
//! - [`params`]: protocol parameters and exact derived thresholds
//! - [`trapdoor`]: gadget trapdoor generation and inversion
//! - [`bruteforce`]: enumeration baselines kept as independent cross-checks
//! - [`instance`]: LWE instances, witnesses, validation

pub mod bruteforce;
pub mod encode;
pub mod error;
pub mod gauss;
pub mod instance;
pub mod params;
pub mod trapdoor;
pub mod vector;

pub use bruteforce::{
    best_single_column_matrix, invert_bruteforce, matrix_distance_bruteforce,
    random_matrix_search, DistanceReport, ENUMERATION_CAP,
};
pub use encode::{binary_encode, binary_encode_vector, bit_width, centered_rep};
pub use error::{ZqError, ZqResult};
pub use gauss::GaussianTable;
pub use instance::{
    make_instance, validate_instance, CheckStatus, LweInstance, LweWitness, ValidationCheck,
    ValidationReport,
};
pub use params::{ProtocolParams, Ratio};
pub use trapdoor::{gentrap, invert, Trapdoor, TrapdoorKeypair};
pub use vector::{ZqMatrix, ZqVector};

//! Capacity-achieving scalar linear index codes for the single unicast index
//! coding problem with symmetric neighboring interference.
//!
//! Every receiver `R_k` of the `K` receivers wants `x_k`, is interfered by the
//! `D` messages after it and the `U = gcd(K, D+1) - 1` messages before it
//! (cyclically), and knows every other message. A `K x (D+1)` binary AIR
//! matrix built from the Euclid chain of `(K - D - 1, D + 1)` encodes the
//! messages into `D + 1` symbols and every receiver decodes by summing a few
//! of them.
//!
//! ```
//! use air_index::{build_air, build_plan, encode, decode_all, MessageVector, PrimeField};
//!
//! let matrix = build_air(12, 7).unwrap();
//! let plan = build_plan(&matrix).unwrap();
//! let field = PrimeField::new(2).unwrap();
//! let x = MessageVector::new((0..12).map(|i| i % 2).collect(), &field);
//! let code = encode(&x, &matrix, &field).unwrap();
//! assert_eq!(code.len(), 8);
//! assert_eq!(decode_all(&code, &x, &plan, &matrix, &field).unwrap(), x);
//! ```

pub mod chain;
pub mod cli;
pub mod codec;
pub mod distances;
mod error;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod table;
pub mod verifier;

pub use chain::{compute_chain, derive_params, interval_layout, Interval, IntervalLayout, LambdaChain, ProblemParams};
pub use codec::{build_plan, decode, decode_all, encode, Case, DecodingPlan, FieldPlan, ReceiverPlan};
pub use distances::DistanceProfile;
pub use error::{Error, Result};
pub use field::{Codeword, MessageVector, PrimeField};
pub use matrix::{build_air, stacked_identity, AirMatrix, SubmatrixKind, SubmatrixRef};
pub use model::InstanceModel;
pub use verifier::{decodable_oracle, sweep, verify_instance, SweepReport, VerificationReport, VerifyOptions};

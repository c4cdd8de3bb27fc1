//! Integer-variable black-box optimization with factorization machines and
//! simulated annealing.
//!
//! A factorization machine (FM) trained on evaluated samples is a QUBO in
//! disguise. The loop in [`engine`] trains one, anneals it together with an
//! encoding penalty, decodes the low-energy bit vectors into integer points,
//! evaluates the new ones and repeats. Integers are mapped to bits by one of
//! three encodings in [`codec`].
//!
//! [`h2`] provides the benchmark black box: the Rayleigh quotient of the
//! minimal-basis H₂ Hamiltonian over integer-valued state vectors, with exact
//! reference energies. [`harness`] runs seeded, replayable experiments over
//! it and writes self-describing CSV.
//!
//! See `examples/` for one runnable program per capability.

pub mod anneal;
pub mod codec;
pub mod engine;
pub mod error;
pub mod fm;
pub mod h2;
pub mod harness;
pub mod qubo;
pub mod seed;

pub use anneal::{
    delta_energy, delta_h_upper, heat_bath_probability, initial_beta, qubo_energy, run_sa,
    sample_batch, AnnealSchedule, Annealer, SaBatchConfig,
};
pub use codec::{
    constraint_qubo, decode_binary, decode_domainwall, decode_onehot, decode_point, encode,
    encode_point, is_feasible, CodecSpec, Encoding, IntegerPoint,
};
pub use engine::{run_fma, BlackBox, FmaConfig, RunHistory, SampleRecord};
pub use error::{Error, Result};
pub use fm::{fm_gradient, fm_predict, fm_to_qubo, train_fm, FmParams, TrainConfig};
pub use qubo::{normalize_qubo, QuboMatrix};

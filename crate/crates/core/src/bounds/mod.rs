//! Effective constants: the CM-height threshold for curves, the prime
//! schedule for higher-dimensional varieties, and split-prime searches.

pub mod curve;
pub mod pack;
pub mod schedule;

pub use curve::{curve_bound, verify_witness, witness_t, CmPair, CurveBound, CurveBoundQuery};
pub use pack::{default_b_eps, ConstantPack};
pub use schedule::{split_prime_search, variety_schedule, verify_schedule, CmDatum, Schedule, SplitPrimes, VarietyQuery};

//! Bounded verification: exhaustive exploration of augmented runs, random
//! schedule sampling, the brute-force linearization oracle, witness
//! extraction, and the tracker-vs-oracle adequacy crosscheck.

mod explore;
mod oracle;
mod witness;

pub use explore::{
    check, fuzz, sample_run, CheckError, ExploreParams, Mode, Stats, Verdict,
};
pub use oracle::{
    adequacy_crosscheck, oracle_linearizations, oracle_linearizations_of_behavior,
    AdequacyDiscrepancy, AdequacyReport,
};
pub use witness::{extract_witness, extract_witness_for, WitnessError};

//! End-to-end proof pipelines, direct congruence checks and the residue-class scanner.

mod claim;
mod identity;
mod lemma1;
mod report;
mod scan;
mod theorems;

pub use claim::{Condition, CongruenceClaim};
pub use identity::{known_combination, verify_identity};
pub use lemma1::verify_lemma1;
pub use report::{ProofReport, Step};
pub use scan::{
    check_claim_direct, check_claim_in, compress, n_max_for_budget, required_index, scan, scan_in,
    Counterexample, DirectCheck, ScanConfig, ScanFinding, DEFAULT_MIN_SUPPORT,
};
pub use theorems::{prove_theorem_mod11, prove_theorem_mod13};

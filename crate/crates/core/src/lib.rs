//! Formal feature attribution (FFA) for classifiers over finite feature spaces.
//!
//! The crate computes abductive explanations (AXp's: minimal feature sets whose
//! fixed values entail a prediction) and contrastive explanations (CXp's:
//! minimal feature sets whose release permits a different prediction), and from
//! the AXp family derives per-feature attribution values: the fraction of all
//! AXp's containing each feature.
//!
//! The two explanation families are mutual minimal-hitting-set duals, which the
//! enumerator exploits: candidates are drawn from an incremental SAT-backed
//! hitting-set store ([`hitting`]) and classified by a decision oracle
//! ([`oracle`]). Enumeration ([`enumerate`]) runs in a fixed target mode
//! (AXp or CXp) or adaptively, starting with CXp's and switching to AXp's
//! once sliding-window criteria fire. Results are anytime: interrupting the
//! loop yields valid partial families that converge to the exact ones.
//!
//! [`graphffa`] provides the companion graph view: when all CXp's have size
//! two they form the edges of a graph whose minimal vertex covers are exactly
//! the AXp's, and attribution becomes a ratio of minimal-vertex-cover counts.
//! The module includes the doubling gadget and the count-recovery identity
//! that make attribution values sufficient to count minimal vertex covers.

pub mod enumerate;
pub mod ffa;
pub mod gen;
pub mod graphffa;
pub mod hitting;
pub mod metrics;
pub mod model;
pub mod oracle;

pub use enumerate::{adaptive_xp_enum, xp_enum, Budget, EnumerationTrace, SwitchConfig, Target};
pub use ffa::{anytime_ffa, exact_ffa, ffa_from_axps, FfaVector};
pub use model::{Classifier, FeatureSet, FeatureSpace, Instance};
pub use oracle::{BruteForceOracle, Explanation, TreeOracle, XpKind, XpOracle};

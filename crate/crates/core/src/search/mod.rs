//! Exhaustive search for near-factorizations.

pub mod coset;
pub mod enumerate;
pub mod equivalence;
pub mod run;
pub mod task;

pub use coset::{admissible_coset_distributions, CosetDistribution, CosetEnumerator};
pub use enumerate::{
    enumerate_symmetric_subsets, symmetric_subset_count, CandidateStream, OddUnits, Reduction,
    SymmetricEnumerator, TranslatedEnumerator,
};
pub use equivalence::{scalar_automorphisms, EquivalenceAction};
pub use run::{coset_structured_search, search, search_with, SearchOptions, SearchReport, TagCounts};
pub use task::{Cursor, InvolutionProfile, SearchTask, Strategy};

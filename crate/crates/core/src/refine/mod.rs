//! Instance reduction before solving, local-search repair after solving, and
//! exact completion of confident partial colorings.

mod complete;
mod local_search;
mod partial;
mod peel;

pub use complete::{exact_complete, exact_complete_counted, Completion, DEFAULT_BUDGET};
pub use local_search::{postprocess_local_search, postprocess_with_frozen};
pub use partial::{threshold_index, threshold_partial, PartialAssignment, THRESHOLDS};
pub use peel::{preprocess_peel, reinsert, PeelResult};

//! Reference coloring methods and the exact chromatic-number oracle.

mod bp;
mod exact;
mod greedy;
mod tabu;

pub use bp::{bp_color, bp_update, BpConfig, BpMessages};
pub use exact::{exact_chromatic, greedy_clique, ChromaticOutcome};
pub use greedy::{greedy, greedy_dynamic, greedy_sorted, greedy_static, GreedyOrder};
pub use tabu::{tabucol, TabuConfig, TabuList, TabuResult};

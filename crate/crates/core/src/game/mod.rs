//! Game description, validation and the structured type × state special case.

mod attitude;
pub mod io;
mod priors;
mod profile;
mod spec;
mod traditional;

pub use attitude::{AmbiguityAttitude, AttitudeKind, Comparator, CustomPreference, FactoredPriors, PriorSet};
pub use io::{load_document, load_game, parse_document, parse_game, save_game, Document, GameFile};
pub use priors::{scenario_a_priors, scenario_b_priors, SELECTION_LIMIT};
pub(crate) use profile::for_each_opponent_action;
pub use profile::{ProfileRecord, PureProfile, StrategyProfile};
pub(crate) use spec::lexicographic;
pub use spec::{GameDef, GameSpec, LocalDomain, LocalState, OpponentBlock, StateSpace};
pub use traditional::{reduce_traditional, ReducedBlock, TraditionalReduction};

//! Short cycles, repeats, the Γ_2/Γ_1/Γ_0 decomposition, structural
//! observations and isomorphism testing.

pub mod cycles;
pub mod decompose;
pub mod iso;
pub mod observations;

pub use cycles::{repeat_structure, short_cycles, RepeatPair, RepeatStructure, ShortCycleSet};
pub use decompose::{
    classify_and_decompose, intersect, CycleClass, Decomposition, Intersection, PhiComponent,
    ThetaComponent, UnclassifiedComponent,
};
pub use iso::{is_isomorphic, verify_mapping, IsoResult, ISO_VERTEX_CAP};
pub use observations::{
    check_observations, check_observations_forced, Observation, ObservationReport, Status,
    OBSERVATION_NAMES,
};

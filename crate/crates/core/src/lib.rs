//! Entanglement measures and monogamy relations for multiqubit generalized
//! W-class states, with brute-force oracles that check every closed form.

pub mod error;
pub mod measures;
pub mod monogamy;
pub mod qlinalg;
pub mod state;
pub mod tolerance;
pub mod verify;
pub mod wclass;

pub use error::{Error, Result};
pub use measures::{Bipartition, MeasureKind, MeasureValue};
pub use monogamy::{Direction, InequalityId, InequalityReport, OrderingProfile, Split};
pub use qlinalg::{ComplexMatrix, DimList};
pub use state::{DensityMatrix, PureState};
pub use tolerance::Tolerances;
pub use verify::{FuzzConfig, FuzzSummary};
pub use wclass::{SubsystemSelection, WClassCoefficients};

pub mod berkovich;
pub mod cfrac;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod moebius;
pub mod parse;
pub mod padic;
pub mod projective;
pub mod random;
pub mod verify;

pub use berkovich::{BerkPoint, Segment};
pub use cfrac::{CFSpec, Divergence};
pub use error::{Error, Result};
pub use geometry::{involution_with_fixed_points, normalizer, to_infinity, FixedLocus, Geodesic, TailedAxis};
pub use groups::{CommonFixed, DiscretenessReport, GroupSpec, OrbitSample, Verdict, WordElement};
pub use moebius::{ElementClass, FixedPoints, MobiusMap, Rho0};
pub use padic::{FieldElem, Magnitude, PadicContext};
pub use projective::ProjPoint;

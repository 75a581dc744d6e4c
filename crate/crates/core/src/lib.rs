//! Quantum bumpless pipe dreams.
//!
//! The crate enumerates quantum bumpless pipe dreams (QBPDs) of a
//! permutation, sums their binomial weights, and checks the result against
//! quantum double Schubert polynomials computed from divided differences.

pub mod analysis;
pub mod diagram;
pub mod moves;
pub mod oracle;
pub mod perm;
pub mod poly;

pub use analysis::{bwt, cancellation_stats, qbpd_polynomial, wt, CancellationStats};
pub use diagram::{Diagram, DiagramError, TileKind, Violation};
pub use moves::{enumerate_qbpds, enumerate_unpaired, MoveKind, RectMove};
pub use perm::{symmetric_group, PermError, Permutation, TransitionData};
pub use poly::{Monomial, Poly, PolyError, Var};

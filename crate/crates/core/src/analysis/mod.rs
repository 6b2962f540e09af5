//! Regime threshold, motion classification, collision times and the
//! no-collision bounds.

pub mod certificate;
pub mod classify;
pub mod collision_time;
pub mod corridor;
pub mod threshold;

pub use certificate::{no_collision_certificate, NoCollisionCertificate};
pub use classify::{classify, MotionClass, Verdict};
pub use collision_time::{collision_time, CollisionTimeEstimate, EstimateKind, FormulaTag};
pub use corridor::{apriori_corridor, LinearCorridor};
pub use threshold::{equilibria, gamma_star, regime, theta_star, Equilibria, Regime};

//! Scenario runner and randomized property verifier built on `poalg`.

pub mod report;
pub mod run;
pub mod scenario;
pub mod verify;

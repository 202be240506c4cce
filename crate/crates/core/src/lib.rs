//! Exact computations for the Ising model with competing interactions and an
//! external field on the Cayley tree of order `k`.
//!
//! The crate covers the tree geometry ([`tree`]), ball-energy classes and phase
//! regions ([`model`]), finite-volume configurations and ground-state audits
//! ([`configurations`]), the contour representation ([`contours`]) and exact
//! finite-volume Gibbs distributions ([`gibbs`]).

pub mod config_file;
pub mod configurations;
pub mod contours;
pub mod error;
pub mod exact;
pub mod gibbs;
pub mod model;
pub mod tree;

pub use error::{Error, Result};
pub use exact::{format_exact, parse_exact, Exact};
pub use model::{BallClass, CouplingConstants, Couplings, EnergyCoefficients, EnergyTable, PeriodicFieldConstants, RegionLabel, Spin};
pub use tree::{CosetSubgroup, Edge, IndexedVolume, ResolvedBall, TreeParams, UnitBall, Vertex, VolumeSite};
pub use configurations::{Boundary, ConfigKind, Configuration, GroundStateReport};
pub use contours::{BallSet, BoundaryPartition, Contour, ContourStats, MinusComponent, Subcontour};
pub use gibbs::{ContourProbability, Event, GibbsResult, GibbsSpec, McmcResult, TwoPhaseReport, TwoPhaseRow};

//! Analysis and simulation of TIN-based scheduling in downlink cellular networks.
//!
//! Base stations form a homogeneous Poisson point process; each BS tags one user
//! in its Voronoi cell and stays on only if a treating-interference-as-noise
//! optimality test on the three link distances (serving distance, distance to the
//! most interfered victim, distance to the strongest interferer) passes. The crate
//! provides:
//!
//! - [`model`]: parameter records, unit conversions, and the scheduling predicates;
//! - [`numerics`]: quadrature, gamma functions, series summation, root bracketing;
//! - [`analytics`]: coverage probability and average rate of the scheduled network,
//!   evaluated by numerical integration;
//! - [`asymptotics`]: high-SNR closed forms for path-loss exponent 4 and the
//!   design-parameter optimizer;
//! - [`sim`]: an exact Monte Carlo engine with deterministic parallel seeding.

pub mod analytics;
pub mod asymptotics;
pub mod model;
pub mod numerics;
pub mod sim;

pub use analytics::AnalyticResult;
pub use model::{DistanceTriple, NetworkParams, SchedulingPolicy, TinParams};
pub use numerics::QuadratureConfig;
pub use sim::{MetricEstimate, SimulationConfig};

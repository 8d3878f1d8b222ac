//! Exact verification of Palm-pair calculus and mass-transport identities for
//! finite permutation-group actions, with a quadrature backend for the
//! (non-unimodular) ax+b group.

pub mod action;
pub mod axb;
pub mod error;
pub mod group;
pub mod instance;
pub mod measure;
pub mod palm;
pub mod rational;
pub mod report;
pub mod suite;
pub mod transport;

pub use action::{GroupAction, OrbitDecomposition, PointKernel};
pub use error::{Error, Result};
pub use group::{Perm, PermGroup};
pub use measure::{FiniteMeasure, OrbitMeasure, PairMeasure};
pub use rational::Rational;
pub use report::{CheckReport, Status, Value, Witness};
pub use instance::{Instance, InstanceFile, InstanceSpec, Limits, Mutation};
pub use suite::{run_suite, Suite, SuiteOptions};

//! Finite-model workbench for topological Boolean algebras.

pub mod conditions;
pub mod error;
pub mod lattice;
pub mod logic;
pub mod operator;
pub mod par;
pub mod quantifiers;
pub mod suite;
pub mod topology;

pub use error::{Result, TbaError};
pub use lattice::{Element, ElementRepr, Family, PointDomain, Side, N_MAX};
pub use operator::{enumerate_operators, operator_count, sample_operator, Operator, TransformKind};
pub use conditions::{check, CheckReport, ConditionId};

//! Formulas, models, consequence, negations and countermodel search.

pub mod eval;
pub mod formula;
pub mod model;
pub mod negation;
pub mod parser;
pub mod recovery;
pub mod search;

pub use eval::{consequence, consequence_all, eval, valid};
pub use formula::{Formula, Goal, Mode, Sequent};
pub use model::{Model, Primitive, Semantics};
pub use parser::{parse, parse_formula, parse_sequent};

//! Typed ASP λ-calculus: terms, types, β-reduction, inverse λ algorithms,
//! answer-set semantics for the programs formulas normalize to, and a CCG
//! driver that learns word meanings from sentence meanings.

pub mod asp;
pub mod ccg;
pub mod inverse;
pub mod oracle;
pub mod reduction;
pub mod syntax;
pub mod term;
pub mod typecheck;
pub mod types;

pub use inverse::{inverse_l, inverse_r, replace, InverseCase, InverseError, InverseResult};
pub use reduction::{apply, normalize, substitute, ReduceError};
pub use syntax::{parse_term, parse_type, print, print_type, SyntaxError};
pub use term::{alpha_eq, occurs, subterm_occurrences, Path, Step, Symbol, Term};
pub use typecheck::{check, infer, is_beta_normal, is_formula, TypeError, TypedTerm};
pub use types::{order, BaseType, Type};

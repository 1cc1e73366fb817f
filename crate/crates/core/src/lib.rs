//! Computation kit for finite Nelson algebras: operation tables and axiom
//! checking, deductive systems and quotients, the finite duality with
//! Nelson spaces, and free five-valued Nelson algebras.

pub mod algebra;
pub mod deduction;
pub mod duality;
pub mod error;
pub mod free;
pub mod subset;
pub mod term;

pub use algebra::{make_chain, product, Elem, Homomorphism, NelsonAlgebra, Tables};
pub use error::{Error, Result};
pub use subset::Subset;
pub use term::{Equation, Term};

//! Galois descent between motivic iterated integrals at roots of unity.

pub mod closed_forms;
pub mod engine;
pub mod spec;

pub use engine::{
    basis_symbols, check_unitriangular_mod_p, enumerate_basis, honorary_precheck, Certificate,
    Descent, DescentVerdict, PartialMatrix, RowKey, TriangularOrder,
};
pub use spec::{derivation_split, find, lookup, registry, supported, Derivation, DescentSpec};

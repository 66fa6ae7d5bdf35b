//! Disjoint combination of theories over equality and indexed nullary
//! predicates, driven by cardinality spectra.

pub mod brute;
pub mod classify;
pub mod combine;
pub mod diagonal;
pub mod error;
pub mod formulas;
pub mod gen;
pub mod oracle;
pub mod registry;
pub mod sets;
pub mod spectra;
pub mod theories;

pub use combine::{combine_decide, CombinationVerdict, CombineOptions, Method};
pub use error::{Error, Result};
pub use formulas::{parse_formula, Cube, Formula, Literal, PredicateId};
pub use sets::{Card, EvPeriodicSet};
pub use spectra::{ExactSpectrum, SpectrumView};
pub use theories::{Theory, TheoryHandle};

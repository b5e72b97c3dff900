//! Finite categories, nerves and integral homology.

pub mod category;
pub mod comma;
pub mod homology;
pub mod nerve;

pub use category::{grothendieck, Arrow, FinCategory, FinFunctor};
pub use comma::{
    build_comma, build_hat, complexity_subcategory, deletion_functor, hat_grothendieck, left_adjoint_certificate,
    poset_category, slice_and_fiber, CommaCategory, HatCategory,
};
pub use homology::{smith_invariants, DegreeHomology, HomologyResult, SparseMatrix};
pub use nerve::{acyclicity_report, homology, nerve, AcyclicityReport, ChainComplex};

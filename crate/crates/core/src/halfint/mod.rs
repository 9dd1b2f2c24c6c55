mod basis;
mod label;
mod operators;

pub use basis::{
    basis_monomials, decompose, expand_monomial, Decomposition, MonomialBasis, DECOMPOSE_MARGIN,
};
pub use label::{Group, LabelSummary, SpaceLabel};
pub use operators::{apply_twist, apply_u, apply_v, hecke_t, sieve_progression};

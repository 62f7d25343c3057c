//! Exact toolkit for Laurent polynomials: Newton polytopes, classical periods,
//! Picard-Fuchs operators, Apery limits, monodromy data and triangulations.

pub mod apery;
pub mod arith;
pub mod corpus;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod minkowski;
pub mod monodromy;
pub mod factor;
pub mod groebner;
pub mod laurent;
pub mod modular;
pub mod mpoly;
pub mod numfield;
pub mod periods;
pub mod triangulation;
pub mod picard_fuchs;
pub mod upoly;

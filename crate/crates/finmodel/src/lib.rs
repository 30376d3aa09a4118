//! Exact-arithmetic computation of finite-dimensional DG-algebra models of
//! proper connective A-infinity algebras, together with verifiable
//! generation-bound certificates built from the radical filtration of
//! `H^0`.
//!
//! The crate is organized bottom-up:
//!
//! - [`exactlin`]: scalars over `Q` or `F_p` and dense exact linear algebra;
//! - [`graded`]: graded vector spaces, graded maps and the Koszul sign rule;
//! - [`complexes`]: cochain complexes, cohomology with chosen splittings,
//!   mapping cones, truncations, quasi-isomorphism tests;
//! - [`ainf`]: A-infinity algebras, Stasheff validation, DG-algebras and
//!   minimal models via homotopy transfer;
//! - [`yoneda`]: the endomorphism DG-algebra of an algebra over itself,
//!   degree windows, and finite-dimensional models by truncation;
//! - [`generation`]: Jacobson radicals, radical filtrations, generation
//!   bounds and cone-tower certificates;
//! - [`cli`]: input format, command dispatch and reports.

pub mod ainf;
pub mod cli;
pub mod complexes;
pub mod error;
pub mod exactlin;
pub mod fixtures;
pub mod generation;
pub mod graded;
pub mod yoneda;

pub use error::{Error, Result};

//! Abelian relations of resonance webs of hyperplane and curve arrangements.

pub mod abelian;
pub mod arrangement;
pub mod cohomology;
pub mod exactla;
pub mod resonance;
pub mod sampling;
pub mod web;

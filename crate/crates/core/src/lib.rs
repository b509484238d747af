//! Exact construction, dualization and verification of non-decomposable
//! multiple coverings by homothets of a convex polygon.

pub mod construction;
pub mod duality;
pub mod extension;
pub mod geom;
pub mod hypergraph;
pub mod prep;
pub mod rational;
pub mod scene;
pub mod svg;

pub use rational::Rational;

//! Polyhedral schedule search as a pair of Markov decision processes.
//!
//! A SCoP (static control part) is parsed into statements, iteration domains
//! and memory dependences. Legal affine schedules are described per
//! dimension by the vertices and rays of a polytope built with Farkas'
//! lemma; an agent first decides which dimension carries each dependence
//! and then picks one schedule by weighting generators.

pub mod construction;
pub mod env;
pub mod eval;
pub mod exploration;
pub mod explorer;
pub mod farkas;
pub mod geometry;
pub mod schedule;
pub mod scop;

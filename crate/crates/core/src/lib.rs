//! GR(1) reactive synthesis toolkit.
//!
//! The pipeline: [`lang`] parses and checks `.gr1spec` documents,
//! [`problem`] compiles patterns and past operators away, [`game`] encodes the
//! result as BDDs, [`solver`] decides realizability, and [`strategy`]
//! extracts controllers or counter-strategies. [`playout`] and [`forklift`]
//! execute the artifacts interactively or in closed loop.

pub mod bdd;
pub mod cli;
pub mod corpus;
pub mod eval;
pub mod forklift;
pub mod game;
pub mod lang;
pub mod monitor;
pub mod patterns;
pub mod pipeline;
pub mod playout;
pub mod problem;
pub mod report;
pub mod explicit;
pub mod gen;
pub mod graph;
pub mod solver;
pub mod separation;
pub mod strategy;

//! Equilibria of finite incomplete-information games whose players hold
//! sets of priors over an external state.

pub mod bestresponse;
pub mod cli;
pub mod config;
pub mod dist;
pub mod equilibrium;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod lp;
pub mod models;
pub mod payoffvec;
pub mod report;
pub mod satisfaction;

pub use error::{Error, Result};

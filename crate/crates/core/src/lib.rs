pub mod error;
pub mod exact;
pub mod root_core;
pub mod space_catalog;
pub mod special;
pub mod cfunction;
pub mod weight_limits;
pub mod rep_engine;
pub mod radon_ops;
pub mod limit_harness;
pub mod verify;
pub mod cli;

pub mod cluster;
pub mod conductor;
pub mod error;
pub mod harness;
pub mod input;
pub mod model;
pub mod render;
pub mod valuation;

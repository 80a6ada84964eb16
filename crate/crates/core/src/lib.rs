pub mod algebra;
pub mod analysis;
pub mod cache;
pub mod catalog;
pub mod cochain;
pub mod corpus;
pub mod error;
pub mod linalg;
pub mod presentation;
pub mod reproduce;
pub mod resolution;
pub mod stable;
pub mod tate;

pub use error::{Error, Result};

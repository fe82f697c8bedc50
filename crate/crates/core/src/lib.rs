pub mod cohomology;
pub mod dga;
pub mod embeddings;
pub mod error;
pub mod exactnum;
pub mod interval;
pub mod metrics;
pub mod otstruct;
pub mod pipeline;
pub mod search;

pub use error::{Error, Result};

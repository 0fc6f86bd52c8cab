//! File formats, a threaded executor, instance generators and the
//! command line for `mvss-core`.

pub mod executor;
pub mod instances;
pub mod io;
pub mod pipeline;

pub use mvss_core;

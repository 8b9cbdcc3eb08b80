//! File formats, text parsers and the job runner behind the `cartan-mod`
//! command-line tool.

pub mod job;
pub mod json;
pub mod text;

pub use job::{run, validate, Command, Format, JobError, JobSpec, Report};

//! Library surface of the orbicat CLI: the workspace text format, command
//! dispatch and deterministic reports.

pub mod commands;
pub mod format;
pub mod report;
pub mod workspace;

pub use commands::{run_command, Command};
pub use format::FormatError;
pub use report::Report;
pub use workspace::{Def, Workspace};

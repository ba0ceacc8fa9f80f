//! File format, DOT export, command implementations and the REST guidance
//! service for the `sct` tool.

pub mod commands;
pub mod dot;
pub mod format;
pub mod service;

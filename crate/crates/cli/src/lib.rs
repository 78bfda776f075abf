//! Command line front end and HTTP session service for `cyforge-core`.

pub mod commands;
pub mod server;

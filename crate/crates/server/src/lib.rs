//! HTTP front end and command-line tools for the Treasure Hunter testbed.

pub mod cli;
pub mod http;

//! Scene-file ingestion, command dispatch, and structured reporting for the
//! `multisym` command-line front end.

pub mod commands;
pub mod report;
pub mod scene;

pub mod classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod jordan;
pub mod matrix;
pub mod numrange;
pub mod oracle;
pub mod verify;

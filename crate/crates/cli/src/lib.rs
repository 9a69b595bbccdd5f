//! Command line front end for the bound machinery in hlb-core: argument
//! parsing, flat key=value configuration, the bundled reference tables, and
//! report rendering in markdown, CSV, and JSON.

pub mod commands;
pub mod config;
pub mod fixtures;
pub mod render;

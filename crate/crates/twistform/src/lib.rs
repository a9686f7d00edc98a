//! File formats, certificates, seeded sampling and subcommand logic on top
//! of `twistform-core`.

pub mod certificate;
pub mod commands;
pub mod input;
pub mod sample;
pub mod section_file;
pub mod text;

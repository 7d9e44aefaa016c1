//! Test and tooling support: independent oracles, generators, the
//! non-completeness gadget and file formats.

pub mod formats;
pub mod gadget;
pub mod generate;
pub mod oracle;

//! File formats, verification suite and SVG rendering behind the `lmbdg`
//! command-line tool.

pub mod document;
pub mod points;
pub mod render;
pub mod verify;

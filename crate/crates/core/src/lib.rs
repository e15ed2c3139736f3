//! Alternating trilinear forms over finite fields and their singular lines.

pub mod bits;
pub mod census;
pub mod crossalg;
pub mod forms;
pub mod geometry;
pub mod gf;
pub mod hypersurface;
pub mod linalg;
pub mod trace_construct;
pub mod verify;

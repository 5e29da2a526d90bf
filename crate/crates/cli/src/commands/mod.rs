pub mod eval;
pub mod features;
pub mod predict;
pub mod train;

pub mod cli;
pub mod collapse;
pub mod curvature;
pub mod dual;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod sampling;
pub mod structure;
pub mod zoo;

//! Angle rigidity of edge-colored graphs in the plane.

pub mod colored_graph;
pub mod exactla;
pub mod rigidity;
pub mod seeds;
pub mod combinatorics;
pub mod algebraic;
pub mod extensions;
pub mod enumeration;

//! Acyclic edge-coloring of planar graphs with large maximum degree: plane-graph
//! machinery, discharging, recoloring kernels, and exact constant checks.
#![no_std]
extern crate alloc;

pub mod acyclic_coloring;
pub mod constants;
pub mod discharging;
pub mod generators;
pub mod plane_graph;
pub mod reductions;
pub mod rethreading;

pub use plane_graph::{Bunch, Edge, GapKind, PlaneGraph, TextError, Thresholds, Vertex};
pub use acyclic_coloring::{Color, EdgeColoring};

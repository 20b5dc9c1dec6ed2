//! Verification toolkit for total colorings of embedded planar graphs.
//!
//! The crate bundles:
//! - rotation-system graphs with face tracing ([`graph`]),
//! - subgraph/pattern detection for the admissible class ([`patterns`]),
//! - exact-rational discharging with audit reports ([`discharge`]),
//! - a backtracking total-coloring oracle ([`coloring`]),
//! - local recoloring/extension procedures ([`extension`]),
//! - seeded generators and configuration hosts ([`generate`]).

pub mod coloring;
pub mod discharge;
pub mod extension;
pub mod generate;
pub mod graph;
pub mod patterns;

//! Exact phase constants for quantum Teichmüller intertwiners.

pub mod groupoid;
pub mod phase_calculus;
pub mod qdilog_numeric;
pub mod ratlin;
pub mod seed_surface;
pub mod symplectic_core;
pub mod tropical_maps;
pub mod weil_numeric;

pub mod compare_cmd;
pub mod ising;
pub mod klgraph;
pub mod simulate;
pub mod theory;

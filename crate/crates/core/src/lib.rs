pub mod complex;
pub mod discretize;
pub mod elementary;
pub mod exact_lp;
pub mod finite_graph;
pub mod formats;
pub mod lattice;

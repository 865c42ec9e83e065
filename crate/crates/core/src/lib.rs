//! Finite shift graphs, kernel-induced graphs on injective tuples, the
//! colorings and embeddings that relate them, and an exact chromatic solver.

pub mod canon;
pub mod chroma;
pub mod embed;
mod error;
pub mod families;
pub mod graph;
pub mod kernel_analysis;
pub mod par;
pub mod tuplespace;

pub use error::{Error, Result};
pub use graph::{Family, Graph, Side};
pub use par::Parallelism;

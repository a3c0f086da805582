pub mod criteria;
pub mod depgraph;
pub mod digraph_cycles;
pub mod error;
pub mod hypergraph;
pub mod moser_tardos;
pub mod numeric;
pub mod ramsey;

pub use error::{Error, Result};

//! Recognition and construction of DAGs in which every vertex subset has a
//! unique least common ancestor.

pub mod corpus;
pub mod dag;
pub mod error;
pub mod holju;
pub mod iso;
pub mod lca;
pub mod level1;
pub mod minors;
pub mod reconstruct;
pub mod setsys;
pub mod text;
pub mod transform;

pub use dag::{Dag, DagBuilder, Poset, Vertex, VertexSet};
pub use error::{Error, Result};

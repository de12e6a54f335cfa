//! Computations in the full directed graph complex `dfGC`, its undirected
//! subcomplex `fGC` and Kontsevich's graph complex `GC`, together with the
//! action of graphs on polyvector fields.

pub mod checks;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod fuzzing;
pub mod graph;
pub mod lie;
pub mod operad;
pub mod poly;
pub mod rational;
pub mod report;
pub mod vector;

pub use error::{Error, Result};
pub use graph::{EdgeKind, Graph};
pub use rational::Q;
pub use vector::{Bidegree, GraphVector};

//! Concrete matroids, auction instances, and random generation.

mod instance;
pub mod oracles;
mod random;
mod spec;

pub use instance::{describe, parallel_copy_reduction, BuyerId, Instance, Valuations};
pub(crate) use instance::to_weights;
pub use random::{random_corpus, random_instance, random_matroid_spec, Family, RandomParams, Shape};
pub use spec::{build_matroid, BlockSpec, EdgeSpec, MatroidSpec};

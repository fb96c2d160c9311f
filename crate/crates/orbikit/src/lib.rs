//! Exact computation with finite groupoids: gerbes, discrete torsion,
//! twisted sectors and twisted K-theory of finite global quotients.

pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod gerbe;
pub mod group;
pub mod inertia;
pub mod groupoid;
pub mod homology;
pub mod matrix;
pub mod nerve;
pub mod report;
pub mod schema;
pub mod simplicial;
pub mod twisted;

pub use error::{Error, Result};

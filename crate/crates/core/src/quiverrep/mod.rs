pub mod catalog;
pub mod ext;
pub mod hom;
pub mod pathalg;
pub mod quiver;
pub mod rep;
pub mod strata;
pub mod translate;

pub use pathalg::{Path, PathAlgebra};
pub use quiver::{linear_a, oriented_a, preprojective_a2, Algebra, Arrow, Quiver, Relation, RelationSet};
pub use rep::{MatrixRep, ModMap};

//! gradual-core: an exact-arithmetic engine for finitely generated bigraded
//! modules over S = Q[x1..xm][t1..td]. It computes local cohomology along
//! the zero section via Cech complexes, graded duals and Ext modules, and
//! Koszul-type de Rham complexes, and verifies the duality identities
//! relating them degree by degree on concrete presentations.
#![allow(clippy::needless_range_loop)] // matrix code reads best indexed

pub mod cech;
pub mod derham;
pub mod dual;
pub mod error;
pub mod grammar;
pub mod groebner;
pub mod homology;
pub mod modfile;
pub mod module;
pub mod order;
pub mod piece;
pub mod qmat;
pub mod report;
pub mod resolution;
pub mod ring;
pub mod testgen;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use module::{BigradedPresentation, FreeModule, ModuleMap};
pub use ring::{BiDegree, Coeff, Monomial, Polynomial, RingSig};
pub use window::Window;

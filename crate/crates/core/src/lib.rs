//! Graded homological algebra over weighted polynomial rings mod p.

pub mod acceptance;
pub mod complex;
pub mod error;
pub mod groebner;
pub mod io;
pub mod koszul;
pub mod lift;
pub mod linalg;
pub mod localcoh;
pub mod matrix;
pub mod poly;
pub mod presented;
pub mod resolution;
pub mod sr;
pub mod ring;
pub mod tate;
pub mod vector;

pub use complex::{ChainMap, ComplexStats, FreeComplex};
pub use error::{Error, Result};
pub use matrix::{FreeModule, GradedMatrix};
pub use poly::Poly;
pub use presented::{PresentedComplex, PresentedModule};
pub use ring::{Mono, Ring};
pub use vector::Vector;

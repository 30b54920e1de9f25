//! Dynamical systems on the space of triangles obtained by swapping the
//! roles of edges and angles, and the analogous map on bicentric
//! quadrangles.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`geometry`] | angle triples, cyclic identification, quotient distance |
//! | [`maps`] | the maps `f` and `g`, the image test for `f`, inverse of `g` |
//! | [`dynamics`] | orbits, stopping rules, fixed-point stability |
//! | [`barycentric`] | medial-triangle picture of `g`, the function `GG`, boundary curves |
//! | [`quadrangle`] | bicentric quadrangles and the map `h` |
//! | [`sampling`] | portable seeded generator used by the verification suites |

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barycentric;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod maps;
pub mod quadrangle;
pub mod sampling;

pub use error::{Error, Result};
pub use geometry::{AngleTriple, CanonicalTriple, ExteriorTriple, InteriorTriple, TripleKind};

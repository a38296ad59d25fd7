//! Left-invariant geometry of Lie groups computed from structure equations.
//!
//! A Lie algebra is given by `de^k` on a basis of 1-forms, a metric by its
//! Gram matrix. From these the crate builds the Levi-Civita connection and
//! curvature ([`riemannian`]), almost contact metric structures
//! `(alpha, omega, g)` and their classification ([`almost_contact`]),
//! almost Kähler products and the curvature operator on 2-forms
//! ([`almost_kahler`]), and a numerical search for Einstein metrics
//! ([`einstein_search`]). [`io`] holds the JSON document format, the reports
//! and the command line.
//!
//! ```
//! use cokahler::almost_contact::AlmostContactStructure;
//! use cokahler::catalog::ContactData;
//!
//! let c = ContactData::einstein_example();
//! let s = AlmostContactStructure::build(&c.algebra, &c.metric, &c.alpha, &c.omega).unwrap();
//! assert_eq!(s.classify(1e-9).to_string(), "almost-cokähler");
//! assert!((s.star_ricci().tau_star + 1.125).abs() < 1e-12);
//! ```

pub mod catalog;
pub mod error;
pub mod exterior;
pub mod lie_algebra;
pub mod linalg;
pub mod riemannian;
pub mod almost_contact;
pub mod almost_kahler;
pub mod einstein_search;
pub mod io;

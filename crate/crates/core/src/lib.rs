//! Critical twist-buckling torque of thin elastic rods with variable
//! cross-section.
//!
//! A rod of length `L` with bending stiffness `E J_ref F(xi)`, hinged at both
//! ends and loaded by end couples of fixed direction, buckles at
//!
//! ```text
//! M* = 2 pi E / integral_0^L dxi / (F(xi) J_ref)
//! ```
//!
//! [`greenhill`] evaluates this functional and its modes, [`oracle`] checks it
//! against a shooting solver of the boundary-value problem,
//! [`isoperimetric`] bounds it by the rod's volume, [`optimizer`] searches
//! for the best fixed-volume design, and [`anisotropic`] handles sections
//! with a constant ratio of principal second moments.
//!
//! ```
//! use twist_rod::shape::{CrossSectionLaw, RodSpec, ShapeFunction};
//!
//! let shape = ShapeFunction::piecewise(vec![0.0, 0.5, 1.0], vec![1.0, 2.0]).unwrap();
//! let rod = RodSpec::new(1.0, 1.0, shape, CrossSectionLaw::new(1, 1.0).unwrap()).unwrap();
//! let m = twist_rod::greenhill::critical_torque(&rod).unwrap().m_crit;
//! assert!((m - 8.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
//! ```

pub mod anisotropic;
pub mod descriptor;
mod error;
pub mod greenhill;
pub mod isoperimetric;
pub mod optimizer;
pub mod oracle;
mod quadrature;
pub mod sampling;
pub mod shape;
pub mod transform;

pub use error::{Error, Result};

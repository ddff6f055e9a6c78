//! Exact construction of the Hamiltonian Lie superalgebra H(2,1;t) over
//! prime fields F_p (p > 3), its generalized restricted structure, the
//! simple osp(1|2)-modules L0(λ), the height-0 Kac modules K_χ(λ), and
//! machine verification of their structure: module laws, the generalized
//! χ-reduced property, simplicity (MeatAxe), dimensions, and isomorphism
//! classification.
//!
//! Everything is computed exactly over F_p; there is no floating point in
//! the crate.

pub mod cache;
pub mod dpsuper;
pub mod gfp;
pub mod hamalg;
pub mod kacmod;
pub mod l0rep;
pub mod repkit;

pub use dpsuper::{DerivIdx, MonoIdx, ShapeParams, SuperPoly};
pub use gfp::{binom_mod_p, FieldScalar, MatrixGF, Prime};
pub use hamalg::{GRStructure, HamAlgebra, HamElement, OspGenerators};
pub use kacmod::{Character, ChiType, KacBasisIdx, KacModule};
pub use l0rep::{L0Module, OspGen, Weight};

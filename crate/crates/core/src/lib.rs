//! Exact computation of Whittaker vectors in Whittaker modules for complex
//! semisimple Lie algebras of small rank.
//!
//! The crate is layered bottom-up:
//!
//! - [`roots`]: root systems and Chevalley structure constants,
//! - [`lie`]: Lie algebra elements and the bracket,
//! - [`pbw`]: the enveloping algebra in PBW normal form,
//! - [`parabolic`]: Whittaker characters and the Levi / nilradical data they determine,
//! - [`module`]: Verma, induced Whittaker and universal sl2 Whittaker modules,
//! - [`solver`]: Whittaker vectors in truncations, simplicity verdicts,
//!   composition-length checks and parameter sweeps.
//!
//! Algebraic code is generic over a [`Scalar`]; the aliases below fix it to
//! exact arbitrary-precision rationals, which is what every verdict relies on.

pub mod cache;
pub mod error;
pub mod length;
pub mod lie;
pub mod linalg;
pub mod module;
pub mod parabolic;
pub mod pbw;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use lie::{bracket, BasisSymbol, LieElement};
pub use module::{ModuleElement, ModuleParams, ModulePresentation};
pub use parabolic::{ParabolicData, WhittakerCharacter, ZWeight};
pub use pbw::{casimir_sl2, straighten, Monomial, Uea, UeaElement};
pub use roots::{CartanType, RootSystem};
pub use scalar::Scalar;
pub use solver::{Truncation, Verdict, WhittakerReport};

pub use num_rational::BigRational;

/// Exact rational scalar.
pub type Rational = BigRational;
pub type QLieElement = LieElement<Rational>;
pub type QUeaElement = UeaElement<Rational>;
pub type QModule = ModulePresentation<Rational>;
pub type QModuleElement = ModuleElement<Rational>;
pub type QCharacter = WhittakerCharacter<Rational>;
pub type QReport = WhittakerReport<Rational>;

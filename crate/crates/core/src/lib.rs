//! Local cohomology of standard graded F_p-algebras with its Frobenius
//! action, and certified module-finite extensions in which chosen local
//! cohomology classes below the dimension vanish.

pub mod budget;
pub mod cech;
pub mod cert;
pub mod cli;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod graded;
pub mod groebner;
pub mod ideal;
pub mod kill;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod ringfile;
pub mod tower;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::Fp;
pub use graded::{GradedPiece, Presentation};
pub use ideal::IdealPresentation;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{Poly, PolyRing};
pub use tower::RingTower;
pub use cech::{CechComplex, Cochain, CohomologyPiece, Fraction};
pub use frobenius::{ClassHandle, FrobeniusPoly, Relation};
pub use ringfile::{parse_ring, RingSpec};
pub use kill::{kill_all, kill_class, trivialize_relation, KillAll, KillCertificate, TrivializationCertificate};

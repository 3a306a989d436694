//! Exact integer group determinants and Lind-Mahler measures for cyclic,
//! abelian and dihedral groups, with certified minimal non-trivial dihedral
//! determinants.
pub mod arith;
pub mod constraints;
mod decimal;
pub mod error;
pub mod groupalg;
pub mod intpoly;
pub mod measure;
pub mod search;
pub mod suite;
pub mod witness;

pub use constraints::{admissible, lambda_lower_bound, AdmissibilityReport, Factorization};
pub use error::{Error, Result};
pub use groupalg::{build_cayley, convolve, translate, Assignment, CayleyTable, GroupSpec};
pub use intpoly::{cyclo_resultant_closed, cyclotomic, resultant, IntPoly};
pub use measure::{
    abelian_measure, approx_factored_dihedral, cayley_determinant, cyclic_measure,
    dihedral_measure, log_measure, normalize_bivariate, CyclicElem, DihedralElem,
};
pub use search::{
    certified_lambda, exhaustive_min, value_scan, LambdaCertificate, LambdaOptions, ScanResult,
    SearchConfig, Status,
};
pub use witness::{compose, verify, Claim, Witness};

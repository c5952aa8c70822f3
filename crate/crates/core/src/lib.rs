//! Exact quadruple decomposition of even numbers into interaction classes,
//! prime-count bound checks, and a 75-type structural census, with chunked
//! range scanners that test every identity and inequality numerically.

pub mod bounds;
pub mod checkpoint;
pub mod error;
pub mod half;
pub mod prime_table;
pub mod sce_model;
pub mod type_space;
pub mod verify;

pub use bounds::{BoundConstant, BoundFn, BoundReport, Inequality, Outcome};
pub use error::{Error, Result};
pub use half::HalfValue;
pub use prime_table::PrimeTable;
pub use sce_model::{check_identities, decompose, interactions, Decomposition, IdentityReport};
pub use type_space::{classify, enumerate_types, StructuralType};
pub use verify::{ScanConfig, ScanKind, ScanReport};

pub mod admissible;
pub mod atlas;
pub mod affine;
pub mod error;
pub mod num;
pub mod partial_conj;
pub mod root_datum;
pub mod sigma_classes;
pub mod snf;
pub mod verify;

pub type Cochar = num::RationalCochar<num_bigint::BigInt>;
pub type Cochar64 = num::RationalCochar<i64>;

//! Exact arithmetic: F_p, F_{p²}, Pochhammer normalizers and truncated power series.

pub mod fp;
pub mod fp2;
pub mod linalg;
pub mod series;

pub use fp::{is_prime, Fp, PrimeField};
pub use fp2::{find_zeta, Fp2, QuadExt};
pub use series::{pochhammer, Coeff, Laurent, Mono, TruncatedSeries};

//! Exact arithmetic toolbox: integer matrices, Smith normal forms (global
//! and p-local), determinants over rings without division, Laurent
//! polynomials, cyclotomic integers with π-adic valuations, and prime
//! multiplicities in two-variable power-series rings.

pub mod cyclotomic;
pub mod laurent;
pub mod matrix;
pub mod modp;
pub mod multiplicity;
pub mod ring;
pub mod snf;

pub use cyclotomic::{
    cyclo_norm, cyclo_v_pi, cyclo_vp_num_den, laurent_eval_at_roots, phi_pk, CyclotomicElem,
};
pub use laurent::LaurentPoly;
pub use matrix::IntMatrix;
pub use modp::{
    det_exact_crt, is_prime_u64, local_divisors, local_divisors_adaptive, local_divisors_big,
    snf_divisors_mod_pk, sparse_rows_of, BigSparseRows, LocalDivisors, PValuation, SparseRows,
};
pub(crate) use modp::inv_mod_u64;
pub use multiplicity::prime_multiplicity_mod_p;
pub use ring::{det_fraction_free, det_ring, Ring};
pub use snf::{snf_divisors, ElementaryDivisors};

//! Exact integer and p-adic utilities: valuations, congruence enumeration,
//! Hensel lifting, Hilbert symbols and square classes.

mod congruence;
mod hilbert;
mod padic;

pub use congruence::{
    brute_force_congruence, brute_force_congruence_capped, hensel_liftable, hensel_refine,
    oracle_cap, DEFAULT_ORACLE_CAP, ORACLE_CAP_ENV,
};
pub use hilbert::{hasse_invariant, hilbert_symbol, square_class, SquareClass};
pub use padic::{
    is_prime, least_nonresidue, ord_and_unit, prime_divisors, prime_divisors_big, PAdicContext,
    Valuation,
};

pub(crate) use congruence::hensel_root_univariate;
pub(crate) use hilbert::{hilbert_unchecked, is_padic_square};
pub(crate) use padic::{legendre, mod_inverse, modp, ord, require_prime, split_unchecked};

//! Exact incomplete character sums over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`ffield`] builds the fields `F_p ⊆ F_q ⊆ F_{q^d} ⊆ F_{q^{dm}}` with
//!   deterministic moduli and tower-compatible embeddings;
//! * [`chars`] evaluates multiplicative and additive characters into exact
//!   cyclotomic integers;
//! * [`polyrat`] is the polynomial / rational function layer, including the
//!   Frobenius twists, norm products and trace sums that the transfer of
//!   Kummer and Artin–Schreier data reduces to;
//! * [`grouptran`] is the transfer homomorphism for explicit finite groups;
//! * [`sheaf`] describes rank-1 character data, its transfer pullback, Swan
//!   conductors, Euler characteristics and the resulting bounds;
//! * [`sumengine`] computes incomplete and complete sums exhaustively and
//!   checks them against the bounds, the transfer identity and the
//!   L-polynomial.

pub mod chars;
pub mod error;
pub mod ffield;
pub mod grouptran;
pub mod polyrat;
pub mod sheaf;
pub mod sumengine;

pub use error::{Error, Result};

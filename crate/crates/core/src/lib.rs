//! Polynomial square roots modulo primes `p = 2^k n + 1` (`n` odd).
//!
//! For each 2-adicity `k` there is a polynomial `f_k` over `F_p` with
//! `f_k(a)^2 = a` at every quadratic residue `a`:
//!
//! ```text
//! f_k(x) = 2^-(k-1) x^((n+1)/2) * sum_t z^(e_t n) prod_j (1 + x^(2^j n) z^(c_tj n))
//! ```
//!
//! where `z` is a fixed quadratic nonresidue. The crate provides:
//!
//! * [`modarith`]: prime contexts, Euler's criterion, deterministic primality.
//! * [`formulas`]: hard-coded `f_1`..`f_4` and the `sqrt_auto` dispatcher.
//! * [`synthesis`]: `f_k` for any `k <= 16`, its rendering and expansion.
//! * [`oracles`]: brute force, Tonelli-Shanks and the class-index method.
//! * [`analysis`]: exact order-class census of the residues of one prime.
//! * [`verify`] and [`bench`]: exhaustive sweeps and multiplication counts.
//!
//! ```
//! use sqrtforms::{make_context, sqrt_auto};
//!
//! let ctx = make_context(41).unwrap();
//! let out = sqrt_auto(&ctx, 2).unwrap();
//! assert_eq!((out.root, out.coroot), (17, 24));
//! ```

pub mod analysis;
pub mod bench;
pub mod error;
pub mod exec;
pub mod formulas;
pub mod modarith;
pub mod oracles;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use formulas::{sqrt_auto, sqrt_f1, sqrt_f2, sqrt_f3, sqrt_f4, sqrt_with, Method, SqrtOutcome};
pub use modarith::{decompose, find_nonresidue, is_prime, make_context, mod_pow, PrimeContext};
pub use oracles::{brute_force_sqrt, direct_sqrt, residue_class, tonelli_shanks};
pub use synthesis::{synthesize, SymbolicFormula};

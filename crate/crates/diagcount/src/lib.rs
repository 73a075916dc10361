//! Exact point counts on monomial deformations of diagonal hypersurfaces
//! over small finite fields `F_q`, `q = p^r` with `p` an odd prime, together
//! with the p-adic machinery that predicts them:
//!
//! - [`ffield`]: `F_q` arithmetic with a fixed generator, trace, and
//!   discrete logs -- the substrate for all characters.
//! - [`padic`]: residues mod `p^M` in `Z_p` and in the unramified extension
//!   `Z_q`, exact rational floor/fractional helpers, Teichmuller lifts.
//! - [`pgamma`]: the p-adic gamma function on integers and on `Q` inside
//!   `Z_p`.
//! - [`charsum`]: additive/multiplicative character sums in a complex
//!   embedding, Gauss sums both complex and pi-adic (Gross-Koblitz), and
//!   the deformed/diagonal character sums `A` and `B`.
//! - [`gfunction`]: the `ₙGₙ` p-adic hypergeometric evaluator and the
//!   bottom-parameter list attached to a monomial deformation.
//! - [`counting`]: brute-force affine/projective point counts and a
//!   convolution fast path for the undeformed diagonal.
//! - [`verify`]: machine checks of the count formulas and of every floor,
//!   gamma-product, reflection, and congruence identity they rest on.
//! - [`cli`]: the `diagcount` command-line tool.

pub mod charsum;
pub mod cli;
pub mod counting;
pub mod error;
pub mod ffield;
pub mod gfunction;
pub mod padic;
pub mod pgamma;
pub mod verify;

pub use error::{Error, Result};

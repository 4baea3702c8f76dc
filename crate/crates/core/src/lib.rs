//! Exact verification toolkit for Danielewski surfaces `S = {xy = p(z)}`.
//!
//! * [`algebra`]: rationals, sparse multivariate and Laurent polynomials,
//!   gcd, resultants.
//! * [`surface`]: the coordinate ring `C[S]` with its canonical normal form.
//! * [`graphcalc`]: weighted dual graphs, blow-ups and zigzag moves.
//! * [`vfield`]: derivations of `C[S]`, the generator fields and the three
//!   families of complete vector fields.
//! * [`fibration`]: the classified C- and C*-fibrations and their
//!   identity certificates.

pub mod algebra;
pub mod certificate;
pub mod fibration;
pub mod graphcalc;
pub mod surface;
pub mod vfield;

#[cfg(test)]
mod testutil;

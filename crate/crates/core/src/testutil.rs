//! Random inputs shared by the property tests.

use proptest::prelude::*;

use crate::algebra::registry::{X, Y, Z};
use crate::algebra::{rat, Monomial, MultiPoly, Registry};

/// Small polynomial in `x, y, z` with integer coefficients in `-4..=4`.
pub fn small_poly(max_terms: usize, max_exp: i32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        ((0..=max_exp), (0..=max_exp), (0..=max_exp), -4i64..=4),
        0..=max_terms,
    )
    .prop_map(|terms| {
        let reg = Registry::standard();
        MultiPoly::from_terms(
            &reg,
            terms.into_iter().map(|(a, b, c, k)| {
                let m = Monomial::var(X, a)
                    .mul(&Monomial::var(Y, b))
                    .mul(&Monomial::var(Z, c));
                (m, rat(k))
            }),
        )
    })
}

/// `p` with simple zeros among a few fixed choices of degree 2..=4.
pub fn simple_p() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["z^2 - 1", "z^3 - z", "z^4 - 1", "z^2 + 1", "2*z^3 + z - 5"])
}


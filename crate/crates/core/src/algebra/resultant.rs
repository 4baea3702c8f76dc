//! Sylvester resultants and discriminants.
//!
//! The discriminant is normalized as
//! `disc(f) = (-1)^(n(n-1)/2) * res(f, f') / lc(f)` for `deg f = n`, so that
//! `disc(A z^2 + B z + C) = B^2 - 4AC`.

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::Rational;
use super::registry::Var;
use super::unipoly::UniPoly;
use super::AlgebraError;

/// Integral-domain operations needed by fraction-free elimination.
pub(crate) trait ExactRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn mul_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    fn div_exact_elem(&self, other: &Self) -> Self;
}

impl ExactRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, other: &Self) -> Self {
        self / other
    }
}

impl ExactRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.registry())
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(self.registry())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, other: &Self) -> Self {
        self.div_exact(other)
            .expect("Bareiss step divides exactly")
    }
}

/// Determinant by Bareiss fraction-free elimination. `unit` supplies the
/// ring's one for the empty matrix.
pub(crate) fn determinant<R: ExactRing>(mut m: Vec<Vec<R>>, unit: &R) -> R {
    let n = m.len();
    if n == 0 {
        return unit.one_like();
    }
    let mut sign_flip = false;
    let mut prev = unit.one_like();
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero_elem()) else {
                return unit.zero_like();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .mul_elem(&m[k][k])
                    .sub_elem(&m[i][k].mul_elem(&m[k][j]));
                m[i][j] = num.div_exact_elem(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg_elem()
    } else {
        det
    }
}

/// Sylvester matrix from coefficient lists given highest degree first.
fn sylvester<R: ExactRing>(f: &[R], g: &[R]) -> Vec<Vec<R>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let zero = f[0].zero_like();
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        row[i..i + f.len()].clone_from_slice(f);
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        row[i..i + g.len()].clone_from_slice(g);
        rows.push(row);
    }
    rows
}

pub(crate) fn resultant_rational(f: &UniPoly, g: &UniPoly) -> Result<Rational, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::Input("resultant of the zero polynomial".into()));
    }
    let fc: Vec<Rational> = f.coeffs().iter().rev().cloned().collect();
    let gc: Vec<Rational> = g.coeffs().iter().rev().cloned().collect();
    Ok(determinant(sylvester(&fc, &gc), &Rational::one()))
}

fn disc_sign(n: usize) -> bool {
    (n * (n.saturating_sub(1)) / 2) % 2 == 1
}

pub(crate) fn discriminant_rational(f: &UniPoly) -> Result<Rational, AlgebraError> {
    let n = f
        .degree()
        .ok_or_else(|| AlgebraError::Input("discriminant of the zero polynomial".into()))?;
    if n == 0 {
        return Err(AlgebraError::Input("discriminant of a constant".into()));
    }
    let r = resultant_rational(f, &f.derivative())? / f.leading_coeff().expect("nonzero");
    Ok(if disc_sign(n) { -r } else { r })
}

fn coeffs_desc(f: &MultiPoly, var: Var) -> Vec<MultiPoly> {
    let parts = f.coefficients_in(var);
    let deg = *parts.keys().next_back().expect("nonzero polynomial") as usize;
    (0..=deg)
        .rev()
        .map(|k| {
            parts
                .get(&(k as i32))
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(f.registry()))
        })
        .collect()
}

/// Resultant of `f` and `g` viewed as polynomials in `var` whose
/// coefficients are polynomials in the remaining variables.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: Var) -> Result<MultiPoly, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::Input("resultant of the zero polynomial".into()));
    }
    let fc = coeffs_desc(f, var);
    let gc = coeffs_desc(g, var);
    let unit = MultiPoly::one(f.registry());
    Ok(determinant(sylvester(&fc, &gc), &unit))
}

/// Discriminant in `var`, normalized as described in the module docs.
pub fn discriminant(f: &MultiPoly, var: Var) -> Result<MultiPoly, AlgebraError> {
    let n = f
        .degree_in(var)
        .ok_or_else(|| AlgebraError::Input("discriminant of the zero polynomial".into()))?;
    if n == 0 {
        return Err(AlgebraError::Input("discriminant of a polynomial of degree 0".into()));
    }
    let lc = f.coefficients_in(var).remove(&n).expect("leading coefficient");
    let r = resultant(f, &f.derivative(var), var)?;
    let r = r
        .div_exact(&lc)
        .expect("leading coefficient divides res(f, f')");
    Ok(if disc_sign(n as usize) { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::registry::{Registry, Z};

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(&Registry::standard(), s).unwrap()
    }

    #[test]
    fn shared_root_gives_zero() {
        let f = UniPoly::parse("z^2-1", "z").unwrap();
        let g = UniPoly::parse("z-1", "z").unwrap();
        assert_eq!(f.resultant(&g).unwrap(), rat(0));
        let g = UniPoly::parse("z-2", "z").unwrap();
        // res(f, z - 2) = f(2) up to sign for monic linear g
        assert_eq!(f.resultant(&g).unwrap(), rat(3));
    }

    #[test]
    fn quadratic_discriminant() {
        assert_eq!(
            discriminant(&p("a*z^2 + b*z + c"), Z).unwrap(),
            p("b^2 - 4*a*c")
        );
        assert_eq!(
            UniPoly::parse("z^2 - 2", "z").unwrap().discriminant().unwrap(),
            rat(8)
        );
    }

    #[test]
    fn discriminant_vanishes_only_at_double_root() {
        // z^2 - c as a polynomial in z over Q[c]
        let d = discriminant(&p("z^2 - c"), Z).unwrap();
        assert_eq!(d, p("4*c"));
    }

    #[test]
    fn cubic_discriminant_matches_formula() {
        // z^3 + b z + c: disc = -4 b^3 - 27 c^2
        assert_eq!(
            discriminant(&p("z^3 + b*z + c"), Z).unwrap(),
            p("-4*b^3 - 27*c^2")
        );
    }

    #[test]
    fn zero_input_is_rejected() {
        assert!(resultant(&p("0"), &p("z"), Z).is_err());
        assert!(UniPoly::zero().discriminant().is_err());
    }
}

//! The coordinate ring `C[S] = C[x,y,z]/(xy - p(z))`.
//!
//! Elements are kept in the normal form spanned by `x^a z^c` (a >= 0) and
//! `y^b z^c` (b >= 1): no stored monomial contains both `x` and `y`.
//! Parameter variables pass through untouched, except that a surface may
//! carry the rewrite `xi^2 -> r` for an adjoined square root.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::algebra::registry::{X, XI, Y, Z};
use crate::algebra::{AlgebraError, LaurentPoly, Monomial, MultiPoly, Rational, Registry, UniPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("deg p = {0}, but a Danielewski surface needs deg p >= 2")]
    Degree(usize),
    #[error("p has a multiple zero: gcd(p, p') = {}", gcd.format("z"))]
    MultipleZeros { gcd: UniPoly },
    #[error("{0}")]
    Input(String),
    #[error("elements belong to different surfaces")]
    Mismatch,
    #[error("not divisible by x^{power}: image of the quotient so far modulo x is {remainder}")]
    NotDivisible { power: u32, remainder: MultiPoly },
    #[error("not in C[S]: coefficient of x^{index} leaves remainder {remainder} modulo p(z)^{}", -index)]
    NotInImage { index: i32, remainder: MultiPoly },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `S = {xy = p(z)}`; see the module docs.
#[derive(Debug, PartialEq, Eq)]
pub struct SurfaceDef {
    reg: Arc<Registry>,
    p: MultiPoly,
    degree: usize,
    numeric: Option<UniPoly>,
    xi_square: Option<MultiPoly>,
}

pub type Surface = Arc<SurfaceDef>;

impl SurfaceDef {
    /// Surface for a rational `p`; checks `deg p >= 2` and simple zeros.
    pub fn new(p: UniPoly) -> Result<Surface, SurfaceError> {
        let degree = p.degree().unwrap_or(0);
        if degree < 2 {
            return Err(SurfaceError::Degree(degree));
        }
        let gcd = UniPoly::gcd(&p, &p.derivative())?;
        if gcd.degree() != Some(0) {
            return Err(SurfaceError::MultipleZeros { gcd });
        }
        let reg = Registry::standard();
        Ok(Arc::new(SurfaceDef {
            p: p.to_multi(&reg, Z),
            reg,
            degree,
            numeric: Some(p),
            xi_square: None,
        }))
    }

    pub fn parse(text: &str) -> Result<Surface, SurfaceError> {
        Self::new(UniPoly::parse(text, "z")?)
    }

    /// Surface whose `p` has coefficients in parameter variables, e.g.
    /// `a*(z-z1)*(z-z2)*(z-z3)*(z-z4)`. Simple zeros cannot be checked
    /// symbolically and are assumed.
    pub fn parametric(p: MultiPoly) -> Result<Surface, SurfaceError> {
        if p.vars().iter().any(|&v| v == X || v == Y || v == XI) {
            return Err(SurfaceError::Input(format!("p = {p} may not involve x, y or xi")));
        }
        let degree = p.degree_in(Z).unwrap_or(0) as usize;
        if degree < 2 {
            return Err(SurfaceError::Degree(degree));
        }
        let numeric = p.to_unipoly(Z).ok();
        Ok(Arc::new(SurfaceDef {
            reg: p.registry().clone(),
            p,
            degree,
            numeric,
            xi_square: None,
        }))
    }

    /// Copy of this surface whose reducer also rewrites `xi^2 -> square`.
    pub fn with_xi_square(&self, square: MultiPoly) -> Result<Surface, SurfaceError> {
        if square
            .vars()
            .iter()
            .any(|&v| v == X || v == Y || v == Z || v == XI)
        {
            return Err(SurfaceError::Input(format!(
                "xi^2 = {square} must only involve parameters"
            )));
        }
        Ok(Arc::new(SurfaceDef {
            reg: self.reg.clone(),
            p: self.p.clone(),
            degree: self.degree,
            numeric: self.numeric.clone(),
            xi_square: Some(square.rebase(&self.reg)?),
        }))
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn p_uni(&self) -> Option<&UniPoly> {
        self.numeric.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Leading `z`-coefficient of `p` (may involve parameters).
    pub fn leading_coeff(&self) -> MultiPoly {
        self.p
            .coefficients_in(Z)
            .remove(&(self.degree as i32))
            .expect("degree term present")
    }

    pub fn p_derivative(&self, order: u32) -> MultiPoly {
        (0..order).fold(self.p.clone(), |acc, _| acc.derivative(Z))
    }

    /// Weights `x -> k, y -> k, z -> 2`, parameters `0`. The relation
    /// `xy - p(z)` has homogeneous top part, so this degree is
    /// multiplicative on `C[S]` whenever the leading coefficient of `p` is
    /// a nonzero constant.
    pub fn weights(&self) -> [i64; 3] {
        let k = self.degree as i64;
        [k, k, 2]
    }

    /// Canonical representative of `f` modulo `xy - p(z)` (and
    /// `xi^2 - r` when enabled).
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let mut p_pows: HashMap<i32, MultiPoly> = HashMap::new();
        let mut r_pows: HashMap<i32, MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(&self.reg);
        let mut plain: Vec<(Monomial, Rational)> = Vec::new();
        for (m, c) in f.terms() {
            let k = m.exponent(X).min(m.exponent(Y));
            let h = match &self.xi_square {
                Some(_) => m.exponent(XI) / 2,
                None => 0,
            };
            if k == 0 && h == 0 {
                plain.push((m.clone(), c.clone()));
                continue;
            }
            let mut rest = m.clone();
            rest.set(X, m.exponent(X) - k);
            rest.set(Y, m.exponent(Y) - k);
            rest.set(XI, m.exponent(XI) - 2 * h);
            let mut piece = MultiPoly::term(&self.reg, rest, c.clone());
            if k > 0 {
                let pk = p_pows.entry(k).or_insert_with(|| self.p.pow(k as u32));
                piece = &piece * pk;
            }
            if h > 0 {
                let r = self.xi_square.as_ref().expect("rule present");
                let rh = r_pows.entry(h).or_insert_with(|| r.pow(h as u32));
                piece = &piece * rh;
            }
            out = &out + &piece;
        }
        &out + &MultiPoly::from_terms(&self.reg, plain)
    }

    pub fn elem(self: &Arc<Self>, f: &MultiPoly) -> Result<SurfaceElem, SurfaceError> {
        let f = if Registry::same(f.registry(), &self.reg) {
            f.clone()
        } else {
            f.rebase(&self.reg)?
        };
        Ok(SurfaceElem {
            poly: self.reduce(&f),
            surface: self.clone(),
        })
    }

    pub fn parse_elem(self: &Arc<Self>, text: &str) -> Result<SurfaceElem, SurfaceError> {
        self.elem(&MultiPoly::parse(&self.reg, text)?)
    }

    pub fn zero(self: &Arc<Self>) -> SurfaceElem {
        SurfaceElem {
            poly: MultiPoly::zero(&self.reg),
            surface: self.clone(),
        }
    }

    pub fn one(self: &Arc<Self>) -> SurfaceElem {
        self.constant(Rational::one())
    }

    pub fn constant(self: &Arc<Self>, c: Rational) -> SurfaceElem {
        SurfaceElem {
            poly: MultiPoly::constant(&self.reg, c),
            surface: self.clone(),
        }
    }

    pub fn x(self: &Arc<Self>) -> SurfaceElem {
        self.gen(X)
    }

    pub fn y(self: &Arc<Self>) -> SurfaceElem {
        self.gen(Y)
    }

    pub fn z(self: &Arc<Self>) -> SurfaceElem {
        self.gen(Z)
    }

    pub fn gen(self: &Arc<Self>, v: crate::algebra::Var) -> SurfaceElem {
        SurfaceElem {
            poly: MultiPoly::var(&self.reg, v),
            surface: self.clone(),
        }
    }

    /// Element of `C[S]` whose image in `C[x^{+-1}, z]` (via `y -> p/x`) is
    /// `g`. Fails with the first offending power of `x` and its remainder.
    pub fn localized_member(self: &Arc<Self>, g: &LaurentPoly) -> Result<SurfaceElem, SurfaceError> {
        let mut acc = MultiPoly::zero(&self.reg);
        for (i, coeff) in g.coefficients_in(X) {
            let coeff = coeff.into_poly().map_err(|_| {
                SurfaceError::Input(format!("{g} has negative exponents outside x"))
            })?;
            if coeff.degree_in(Y).unwrap_or(0) > 0 {
                return Err(SurfaceError::Input(format!("{g} mentions y")));
            }
            if i >= 0 {
                acc = &acc + &coeff.mul_monomial(&Monomial::var(X, i), &Rational::one());
            } else {
                let (q, r) = coeff.div_rem_in(&self.p.pow((-i) as u32), Z)?;
                if !r.is_zero() {
                    return Err(SurfaceError::NotInImage {
                        index: i,
                        remainder: r,
                    });
                }
                acc = &acc + &q.mul_monomial(&Monomial::var(Y, -i), &Rational::one());
            }
        }
        self.elem(&acc)
    }

    /// Multiplies `g` by the monomial that clears its denominators and
    /// reduces. Since `C[S]` is a domain, the result is zero iff `g`
    /// vanishes on `S` (with parameters treated as generic).
    pub fn reduce_laurent(&self, g: &LaurentPoly) -> Result<MultiPoly, SurfaceError> {
        let m = g.clearing_monomial();
        let cleared = g.mul_monomial(&m, &Rational::one()).into_poly()?;
        Ok(self.reduce(&cleared.rebase(&self.reg)?))
    }

    fn same(a: &Surface, b: &Surface) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

/// An element of `C[S]` in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct SurfaceElem {
    surface: Surface,
    poly: MultiPoly,
}

impl SurfaceElem {
    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    /// The normal-form polynomial; also a lift to `C[x, y, z]`.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Terms `x^a z^c` with `a >= 0` (no `y`).
    pub fn pure_x_part(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.poly.registry(),
            self.poly
                .terms()
                .filter(|(m, _)| m.exponent(Y) == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Terms `y^b z^c` with `b >= 1`.
    pub fn pure_y_part(&self) -> MultiPoly {
        &self.poly - &self.pure_x_part()
    }

    fn check(&self, other: &SurfaceElem) -> Result<(), SurfaceError> {
        if SurfaceDef::same(&self.surface, &other.surface) {
            Ok(())
        } else {
            Err(SurfaceError::Mismatch)
        }
    }

    fn wrap(&self, poly: MultiPoly) -> SurfaceElem {
        SurfaceElem {
            surface: self.surface.clone(),
            poly,
        }
    }

    pub fn checked_add(&self, other: &SurfaceElem) -> Result<SurfaceElem, SurfaceError> {
        self.check(other)?;
        Ok(self.wrap(&self.poly + &other.poly))
    }

    pub fn checked_sub(&self, other: &SurfaceElem) -> Result<SurfaceElem, SurfaceError> {
        self.check(other)?;
        Ok(self.wrap(&self.poly - &other.poly))
    }

    pub fn checked_mul(&self, other: &SurfaceElem) -> Result<SurfaceElem, SurfaceError> {
        self.check(other)?;
        Ok(self.wrap(self.surface.reduce(&(&self.poly * &other.poly))))
    }

    pub fn scale(&self, c: &Rational) -> SurfaceElem {
        self.wrap(self.poly.scale(c))
    }

    pub fn pow(&self, k: u32) -> SurfaceElem {
        (0..k).fold(self.surface.one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self, v: crate::algebra::Var) -> MultiPoly {
        self.poly.derivative(v)
    }

    /// `q` with `x^j * q = self` in `C[S]`, or the remainder that blocks it.
    ///
    /// Dividing by `x` once works modulo `x`: the ring `C[S]/(x)` is
    /// `C[y, z]/(p(z))`, so every `y^b` slice of the `x`-free part must be a
    /// multiple of `p(z)`. Each `p(z) y^b` is then rewritten as `x y^(b+1)`.
    pub fn x_power_quotient(&self, j: u32) -> Result<SurfaceElem, SurfaceError> {
        let s = &self.surface;
        let reg = s.registry();
        let mut cur = self.poly.clone();
        for step in 1..=j {
            let mut shifted = MultiPoly::zero(reg);
            let mut x_free = MultiPoly::zero(reg);
            for (m, c) in cur.terms() {
                let e = m.exponent(X);
                if e > 0 {
                    shifted = &shifted + &MultiPoly::term(reg, m.with_exponent(X, e - 1), c.clone());
                } else {
                    x_free = &x_free + &MultiPoly::term(reg, m.clone(), c.clone());
                }
            }
            let mut lifted = MultiPoly::zero(reg);
            let mut blocked = MultiPoly::zero(reg);
            for (b, slice) in x_free.coefficients_in(Y) {
                let (q, r) = slice.div_rem_in(s.p(), Z)?;
                let yb = Monomial::var(Y, b);
                blocked = &blocked + &r.mul_monomial(&yb, &Rational::one());
                lifted = &lifted + &q.mul_monomial(&Monomial::var(Y, b + 1), &Rational::one());
            }
            if !blocked.is_zero() {
                return Err(SurfaceError::NotDivisible {
                    power: step,
                    remainder: blocked,
                });
            }
            cur = s.reduce(&(&shifted + &lifted));
        }
        Ok(self.wrap(cur))
    }

    /// `Some(q)` with `x^j * q = self`, if it exists.
    pub fn divisible_by_x_power(&self, j: u32) -> Option<SurfaceElem> {
        self.x_power_quotient(j).ok()
    }

    /// Image in `C[x^{+-1}, z]` under `y -> p(z)/x`.
    pub fn to_localized(&self) -> LaurentPoly {
        let reg = self.poly.registry();
        let x = LaurentPoly::var(reg, X);
        let y_image = &self.surface.p().to_laurent() * &x.try_inverse().expect("monomial");
        self.poly
            .substitute(&[(Y, y_image)])
            .expect("x is invertible")
    }

    pub fn weighted_degree(&self) -> Option<i64> {
        self.poly.weighted_degree(&self.surface.weights())
    }
}

/// `nu(f) = nu_x df/dx + nu_y df/dy + nu_z df/dz` computed on the normal-form
/// lift of `f` and renormalized.
pub fn apply_derivation(components: [&SurfaceElem; 3], f: &SurfaceElem) -> SurfaceElem {
    let s = f.surface();
    let lifted = [X, Y, Z]
        .iter()
        .zip(components)
        .map(|(&v, c)| &c.poly * &f.poly.derivative(v))
        .fold(MultiPoly::zero(s.registry()), |acc, t| &acc + &t);
    f.wrap(s.reduce(&lifted))
}

impl fmt::Display for SurfaceElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for SurfaceElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfaceElem({})", self.poly)
    }
}

impl Add<&SurfaceElem> for &SurfaceElem {
    type Output = SurfaceElem;
    fn add(self, rhs: &SurfaceElem) -> SurfaceElem {
        self.checked_add(rhs).expect("surface mismatch in add")
    }
}

impl Sub<&SurfaceElem> for &SurfaceElem {
    type Output = SurfaceElem;
    fn sub(self, rhs: &SurfaceElem) -> SurfaceElem {
        self.checked_sub(rhs).expect("surface mismatch in sub")
    }
}

impl Mul<&SurfaceElem> for &SurfaceElem {
    type Output = SurfaceElem;
    fn mul(self, rhs: &SurfaceElem) -> SurfaceElem {
        self.checked_mul(rhs).expect("surface mismatch in mul")
    }
}

impl Neg for &SurfaceElem {
    type Output = SurfaceElem;
    fn neg(self) -> SurfaceElem {
        self.wrap(-&self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, solve};
    use crate::testutil::{simple_p, small_poly};
    use proptest::prelude::*;

    fn s() -> Surface {
        SurfaceDef::parse("z^2 - 1").unwrap()
    }

    fn e(s: &Surface, text: &str) -> SurfaceElem {
        s.parse_elem(text).unwrap()
    }

    fn lp(s: &Surface, text: &str) -> LaurentPoly {
        MultiPoly::parse(s.registry(), text).unwrap().to_laurent()
    }

    #[test]
    fn rejects_bad_p() {
        assert_eq!(SurfaceDef::parse("z + 1"), Err(SurfaceError::Degree(1)));
        match SurfaceDef::parse("(z - 1)^2*(z + 2)") {
            Err(SurfaceError::MultipleZeros { gcd }) => assert_eq!(gcd.format("z"), "z - 1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normal_form_rewrites() {
        let s = s();
        assert_eq!(e(&s, "x*y").to_string(), "z^2 - 1");
        assert_eq!(e(&s, "x^2*y").to_string(), "x*z^2 - x");
        assert_eq!(e(&s, "x^2*y^2").to_string(), "z^4 - 2*z^2 + 1");
        assert!(e(&s, "x*y - (z^2 - 1)").is_zero());
    }

    #[test]
    fn arithmetic() {
        let s = s();
        assert_eq!((&s.y() * &s.x()).to_string(), "z^2 - 1");
        let f = e(&s, "x^3 + y*z");
        assert_eq!(&f * &s.one(), f);
        let sum = &s.x() + &s.y();
        assert_eq!(&sum * &sum, e(&s, "x^2 + y^2 + 2*z^2 - 2"));
        let other = SurfaceDef::parse("z^3 - 1").unwrap();
        assert_eq!(s.x().checked_add(&other.x()), Err(SurfaceError::Mismatch));
    }

    #[test]
    fn x_divisibility() {
        let s = s();
        let q = e(&s, "x*z + y*z^2 - y").divisible_by_x_power(1).unwrap();
        assert_eq!(q, e(&s, "z + y^2"));
        assert!(e(&s, "z").divisible_by_x_power(1).is_none());
        assert_eq!(s.x().divisible_by_x_power(1).unwrap(), s.one());
        match e(&s, "x*y^2 + z").x_power_quotient(2) {
            Err(SurfaceError::NotDivisible { power, remainder }) => {
                assert_eq!(power, 1);
                assert_eq!(remainder.to_string(), "z");
            }
            other => panic!("{other:?}"),
        }
        let f = e(&s, "(z^2 - 1)^2");
        assert_eq!(f.divisible_by_x_power(2).unwrap(), e(&s, "y^2"));
    }

    #[test]
    fn localization() {
        let s = s();
        assert_eq!(s.localized_member(&lp(&s, "z^2 - 1").mul_monomial(&Monomial::var(X, -1), &rat(1))).unwrap(), s.y());
        let bad = lp(&s, "z").mul_monomial(&Monomial::var(X, -1), &rat(1));
        match s.localized_member(&bad) {
            Err(SurfaceError::NotInImage { index, remainder }) => {
                assert_eq!(index, -1);
                assert_eq!(remainder.to_string(), "z");
            }
            other => panic!("{other:?}"),
        }
        let g = &lp(&s, "(z^2 - 1)^2").mul_monomial(&Monomial::var(X, -2), &rat(1)) + &lp(&s, "z");
        assert_eq!(s.localized_member(&g).unwrap(), e(&s, "y^2 + z"));
    }

    #[test]
    fn derivations() {
        let s = s();
        let hf = [&s.x(), &-&s.y(), &s.zero()];
        assert_eq!(apply_derivation(hf, &s.x()), s.x());
        assert_eq!(apply_derivation(hf, &e(&s, "x*z")), e(&s, "x*z"));
        // SF^x kills the defining relation on any lift.
        let sfx = [&s.zero(), &e(&s, "2*z"), &s.x()];
        let rel = SurfaceElem {
            poly: MultiPoly::parse(s.registry(), "x*y - z^2 + 1").unwrap(),
            surface: s.clone(),
        };
        assert!(apply_derivation(sfx, &rel).is_zero());
    }

    #[test]
    fn xi_rule() {
        let s = s();
        let with = s
            .with_xi_square(MultiPoly::parse(s.registry(), "alpha + b^2/2 - c").unwrap())
            .unwrap();
        let lhs = with.parse_elem("xi^3 + x*y").unwrap();
        let rhs = with.parse_elem("xi*alpha + xi*b^2/2 - xi*c + z^2 - 1").unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(with.parse_elem("xi^4").unwrap(), with.parse_elem("(alpha + b^2/2 - c)^2").unwrap());
        assert!(s.with_xi_square(MultiPoly::parse(s.registry(), "z").unwrap()).is_err());
    }

    #[test]
    fn parametric_leading_coefficient() {
        let reg = Registry::standard();
        let p = MultiPoly::parse(&reg, "a*(z - z1)*(z - z2)").unwrap();
        let s = SurfaceDef::parametric(p).unwrap();
        assert_eq!(s.degree(), 2);
        assert_eq!(s.leading_coeff().to_string(), "a");
        assert_eq!(s.parse_elem("x*y").unwrap(), s.elem(s.p()).unwrap());
    }

    /// Searches `q` in the span of normal-form monomials up to `deg` with
    /// `x^j q = f`, by linear algebra rather than by the quotient routine.
    fn brute_quotient(f: &SurfaceElem, j: u32, deg: i32) -> Option<SurfaceElem> {
        let s = f.surface();
        let mut basis = Vec::new();
        for c in 0..=deg {
            for a in 0..=deg {
                basis.push(Monomial::var(X, a).mul(&Monomial::var(Z, c)));
            }
            for b in 1..=deg {
                basis.push(Monomial::var(Y, b).mul(&Monomial::var(Z, c)));
            }
        }
        let xj = s.x().pow(j);
        let images: Vec<SurfaceElem> = basis
            .iter()
            .map(|m| &xj * &s.elem(&MultiPoly::term(s.registry(), m.clone(), rat(1))).unwrap())
            .collect();
        let mut rows_keys: Vec<Monomial> = images
            .iter()
            .flat_map(|g| g.poly().terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
            .chain(f.poly().terms().map(|(m, _)| m.clone()))
            .collect();
        rows_keys.sort();
        rows_keys.dedup();
        let rows: Vec<Vec<Rational>> = rows_keys
            .iter()
            .map(|m| images.iter().map(|g| g.poly().coeff(m)).collect())
            .collect();
        let rhs: Vec<Rational> = rows_keys.iter().map(|m| f.poly().coeff(m)).collect();
        let sol = solve(&rows, &rhs, basis.len())?;
        let q = MultiPoly::from_terms(s.registry(), basis.into_iter().zip(sol));
        Some(s.elem(&q).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn normal_form_is_multiplicative(p in simple_p(), f in small_poly(4, 3), g in small_poly(4, 3)) {
            let s = SurfaceDef::parse(p).unwrap();
            let lhs = &s.elem(&f).unwrap() * &s.elem(&g).unwrap();
            prop_assert_eq!(lhs, s.elem(&(&f * &g)).unwrap());
            let sum = &s.elem(&f).unwrap() + &s.elem(&g).unwrap();
            prop_assert_eq!(sum, s.elem(&(&f + &g)).unwrap());
        }

        #[test]
        fn normal_form_has_no_mixed_monomials(p in simple_p(), f in small_poly(5, 4)) {
            let s = SurfaceDef::parse(p).unwrap();
            let nf = s.elem(&f).unwrap();
            prop_assert!(nf.poly().terms().all(|(m, _)| m.exponent(X) == 0 || m.exponent(Y) == 0));
            prop_assert_eq!(s.elem(nf.poly()).unwrap(), nf);
        }

        #[test]
        fn x_quotient_round_trip(p in simple_p(), f in small_poly(4, 2), j in 1u32..=2) {
            let s = SurfaceDef::parse(p).unwrap();
            let f = s.elem(&f).unwrap();
            // Multiples of x^j must always be detected.
            let multiple = &s.x().pow(j) * &f;
            let q = multiple.divisible_by_x_power(j).expect("multiple of x^j");
            prop_assert_eq!(&s.x().pow(j) * &q, multiple);
            match f.divisible_by_x_power(j) {
                Some(q) => prop_assert_eq!(&s.x().pow(j) * &q, f),
                None => prop_assert!(brute_quotient(&f, j, 3).is_none()),
            }
        }

        #[test]
        fn embed_then_recover(p in simple_p(), f in small_poly(4, 3)) {
            let s = SurfaceDef::parse(p).unwrap();
            let f = s.elem(&f).unwrap();
            prop_assert_eq!(s.localized_member(&f.to_localized()).unwrap(), f);
        }

        #[test]
        fn tangent_fields_are_derivations(p in simple_p(), f in small_poly(3, 2), g in small_poly(3, 2), h in small_poly(3, 2), c in -3i64..=3) {
            let s = SurfaceDef::parse(p).unwrap();
            let pp = s.elem(&s.p().derivative(Z)).unwrap();
            let h = s.elem(&h).unwrap();
            // h * (c*HF + SF^x + SF^y) is tangent.
            let nx = &h * &(&s.x().scale(&rat(c)) + &pp);
            let ny = &h * &(&pp - &s.y().scale(&rat(c)));
            let nz = &h * &(&s.x() + &s.y());
            let nu = [&nx, &ny, &nz];
            let f = s.elem(&f).unwrap();
            let g = s.elem(&g).unwrap();
            let lhs = apply_derivation(nu, &(&f * &g));
            let rhs = &(&f * &apply_derivation(nu, &g)) + &(&g * &apply_derivation(nu, &f));
            prop_assert_eq!(lhs, rhs);
            // A lift that differs by a multiple of xy - p gives the same value.
            let rel = &(&MultiPoly::parse(s.registry(), "x*y").unwrap() - s.p()) * g.poly();
            let other = SurfaceElem { poly: f.poly() + &rel, surface: s.clone() };
            prop_assert_eq!(apply_derivation(nu, &other), apply_derivation(nu, &f));
        }
    }
}

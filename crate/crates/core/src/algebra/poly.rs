use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::Rational;
use super::registry::{Registry, Var};
use super::AlgebraError;

/// Sparse multivariate polynomial over the rationals. Exponents are
/// non-negative; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    reg: Arc<Registry>,
    terms: BTreeMap<Monomial, Rational>,
}

/// Sparse Laurent polynomial: like [`MultiPoly`] but exponents may be
/// negative. Produced by substitutions such as `z -> lambda*t^-1`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    reg: Arc<Registry>,
    terms: BTreeMap<Monomial, Rational>,
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn mul_terms(
    a: &BTreeMap<Monomial, Rational>,
    b: &BTreeMap<Monomial, Rational>,
) -> BTreeMap<Monomial, Rational> {
    let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(a.len() * b.len());
    for (ma, ca) in a {
        for (mb, cb) in b {
            let c = ca * cb;
            match acc.entry(ma.mul(mb)) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                }
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn format_terms(
    f: &mut fmt::Formatter<'_>,
    reg: &Registry,
    terms: &BTreeMap<Monomial, Rational>,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (m, c)) in terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if m.is_one() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{}", m.format(reg))?;
        } else {
            write!(f, "{abs}*{}", m.format(reg))?;
        }
    }
    Ok(())
}

macro_rules! poly_common {
    ($T:ident) => {
        impl $T {
            pub(crate) fn from_map(
                reg: Arc<Registry>,
                mut terms: BTreeMap<Monomial, Rational>,
            ) -> Self {
                terms.retain(|_, c| !c.is_zero());
                $T { reg, terms }
            }

            pub fn zero(reg: &Arc<Registry>) -> Self {
                $T {
                    reg: reg.clone(),
                    terms: BTreeMap::new(),
                }
            }

            pub fn one(reg: &Arc<Registry>) -> Self {
                Self::constant(reg, Rational::one())
            }

            pub fn constant(reg: &Arc<Registry>, c: Rational) -> Self {
                let mut terms = BTreeMap::new();
                add_term(&mut terms, Monomial::one(), c);
                $T {
                    reg: reg.clone(),
                    terms,
                }
            }

            pub fn var(reg: &Arc<Registry>, var: Var) -> Self {
                assert!(var.0 < reg.len(), "variable outside registry");
                let mut terms = BTreeMap::new();
                terms.insert(Monomial::var(var, 1), Rational::one());
                $T {
                    reg: reg.clone(),
                    terms,
                }
            }

            pub fn registry(&self) -> &Arc<Registry> {
                &self.reg
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn is_one(&self) -> bool {
                self.terms.len() == 1
                    && self
                        .terms
                        .get(&Monomial::one())
                        .is_some_and(|c| c.is_one())
            }

            /// The value if the polynomial is a constant (zero included).
            pub fn constant_value(&self) -> Option<Rational> {
                match self.terms.len() {
                    0 => Some(Rational::zero()),
                    1 => self.terms.get(&Monomial::one()).cloned(),
                    _ => None,
                }
            }

            pub fn num_terms(&self) -> usize {
                self.terms.len()
            }

            /// Terms in descending monomial order.
            pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
                self.terms.iter().rev()
            }

            pub fn coeff(&self, m: &Monomial) -> Rational {
                self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
            }

            pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
                self.terms.iter().next_back()
            }

            pub fn total_degree(&self) -> Option<i64> {
                self.terms.keys().map(Monomial::total_degree).max()
            }

            pub fn degree_in(&self, var: Var) -> Option<i32> {
                self.terms.keys().map(|m| m.exponent(var)).max()
            }

            pub fn min_degree_in(&self, var: Var) -> Option<i32> {
                self.terms.keys().map(|m| m.exponent(var)).min()
            }

            pub fn vars(&self) -> BTreeSet<Var> {
                self.terms
                    .keys()
                    .flat_map(|m| m.vars().map(|(v, _)| v).collect::<Vec<_>>())
                    .collect()
            }

            /// Splits by the exponent of `var`: `self = sum_k var^k * out[k]`
            /// with `var` absent from every `out[k]`.
            pub fn coefficients_in(&self, var: Var) -> BTreeMap<i32, $T> {
                let mut out: BTreeMap<i32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
                for (m, c) in &self.terms {
                    out.entry(m.exponent(var))
                        .or_default()
                        .insert(m.with_exponent(var, 0), c.clone());
                }
                out.into_iter()
                    .map(|(k, t)| (k, $T::from_map(self.reg.clone(), t)))
                    .collect()
            }

            fn check(&self, other: &Self) -> Result<(), AlgebraError> {
                if Registry::same(&self.reg, &other.reg) {
                    Ok(())
                } else {
                    Err(AlgebraError::RegistryMismatch)
                }
            }

            pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
                self.check(other)?;
                let mut terms = self.terms.clone();
                for (m, c) in &other.terms {
                    add_term(&mut terms, m.clone(), c.clone());
                }
                Ok($T {
                    reg: self.reg.clone(),
                    terms,
                })
            }

            pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
                self.check(other)?;
                let mut terms = self.terms.clone();
                for (m, c) in &other.terms {
                    add_term(&mut terms, m.clone(), -c);
                }
                Ok($T {
                    reg: self.reg.clone(),
                    terms,
                })
            }

            pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
                self.check(other)?;
                Ok($T {
                    reg: self.reg.clone(),
                    terms: mul_terms(&self.terms, &other.terms),
                })
            }

            pub fn scale(&self, c: &Rational) -> Self {
                if c.is_zero() {
                    return Self::zero(&self.reg);
                }
                $T {
                    reg: self.reg.clone(),
                    terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
                }
            }

            pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
                if c.is_zero() {
                    return Self::zero(&self.reg);
                }
                $T {
                    reg: self.reg.clone(),
                    terms: self
                        .terms
                        .iter()
                        .map(|(k, a)| (k.mul(m), a * c))
                        .collect(),
                }
            }

            pub fn pow(&self, mut k: u32) -> Self {
                let mut base = self.clone();
                let mut acc = Self::one(&self.reg);
                while k > 0 {
                    if k & 1 == 1 {
                        acc = &acc * &base;
                    }
                    k >>= 1;
                    if k > 0 {
                        base = &base * &base;
                    }
                }
                acc
            }

            /// Formal partial derivative.
            pub fn derivative(&self, var: Var) -> Self {
                let mut terms = BTreeMap::new();
                for (m, c) in &self.terms {
                    let e = m.exponent(var);
                    if e != 0 {
                        add_term(
                            &mut terms,
                            m.with_exponent(var, e - 1),
                            c * Rational::from_integer(e.into()),
                        );
                    }
                }
                $T {
                    reg: self.reg.clone(),
                    terms,
                }
            }
        }

        impl fmt::Display for $T {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                format_terms(f, &self.reg, &self.terms)
            }
        }

        impl fmt::Debug for $T {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($T), self)
            }
        }

        impl Add<&$T> for &$T {
            type Output = $T;
            fn add(self, rhs: &$T) -> $T {
                self.checked_add(rhs).expect("registry mismatch in add")
            }
        }

        impl Sub<&$T> for &$T {
            type Output = $T;
            fn sub(self, rhs: &$T) -> $T {
                self.checked_sub(rhs).expect("registry mismatch in sub")
            }
        }

        impl Mul<&$T> for &$T {
            type Output = $T;
            fn mul(self, rhs: &$T) -> $T {
                self.checked_mul(rhs).expect("registry mismatch in mul")
            }
        }

        impl Add for $T {
            type Output = $T;
            fn add(self, rhs: $T) -> $T {
                &self + &rhs
            }
        }

        impl Sub for $T {
            type Output = $T;
            fn sub(self, rhs: $T) -> $T {
                &self - &rhs
            }
        }

        impl Mul for $T {
            type Output = $T;
            fn mul(self, rhs: $T) -> $T {
                &self * &rhs
            }
        }

        impl Neg for &$T {
            type Output = $T;
            fn neg(self) -> $T {
                $T {
                    reg: self.reg.clone(),
                    terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
                }
            }
        }

        impl Neg for $T {
            type Output = $T;
            fn neg(self) -> $T {
                -&self
            }
        }
    };
}

poly_common!(MultiPoly);
poly_common!(LaurentPoly);

impl MultiPoly {
    pub fn from_int(reg: &Arc<Registry>, n: i64) -> Self {
        Self::constant(reg, Rational::from_integer(n.into()))
    }

    /// `c * m`; panics if `m` has a negative exponent.
    pub fn term(reg: &Arc<Registry>, m: Monomial, c: Rational) -> Self {
        assert!(m.is_polynomial(), "negative exponent in MultiPoly term");
        let mut terms = BTreeMap::new();
        add_term(&mut terms, m, c);
        MultiPoly {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(
        reg: &Arc<Registry>,
        terms: I,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            assert!(m.is_polynomial(), "negative exponent in MultiPoly term");
            add_term(&mut map, m, c);
        }
        MultiPoly {
            reg: reg.clone(),
            terms: map,
        }
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly {
            reg: self.reg.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Same polynomial read in another registry that contains every variable
    /// used here under the same name.
    pub fn rebase(&self, target: &Arc<Registry>) -> Result<MultiPoly, AlgebraError> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut out = Monomial::one();
            for (v, e) in m.vars() {
                let name = self.reg.name(v);
                let w = target
                    .lookup(name)
                    .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
                out.set(w, e);
            }
            add_term(&mut terms, out, c.clone());
        }
        Ok(MultiPoly {
            reg: target.clone(),
            terms,
        })
    }

    /// Substitutes Laurent polynomials for variables; unbound variables stay.
    pub fn substitute(&self, bindings: &[(Var, LaurentPoly)]) -> Result<LaurentPoly, AlgebraError> {
        self.to_laurent().substitute(bindings)
    }

    /// Substitution that must stay polynomial. Negative exponents that fail
    /// to cancel are reported as [`AlgebraError::Residue`].
    pub fn substitute_poly(&self, bindings: &[(Var, LaurentPoly)]) -> Result<MultiPoly, AlgebraError> {
        self.substitute(bindings)?.into_poly()
    }

    /// Polynomial-to-polynomial substitution; cannot fail.
    pub fn compose(&self, bindings: &[(Var, MultiPoly)]) -> MultiPoly {
        let lb: Vec<(Var, LaurentPoly)> =
            bindings.iter().map(|(v, p)| (*v, p.to_laurent())).collect();
        self.substitute_poly(&lb)
            .expect("polynomial substitution stays polynomial")
    }

    pub fn eval_var(&self, var: Var, value: &Rational) -> MultiPoly {
        self.compose(&[(var, MultiPoly::constant(&self.reg, value.clone()))])
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            add_term(&mut quot, qm, qc);
        }
        Some(MultiPoly {
            reg: self.reg.clone(),
            terms: quot,
        })
    }

    /// Division with remainder treating both sides as polynomials in `var`
    /// with coefficients in the remaining variables. Needs the leading
    /// `var`-coefficient of `d` to be a nonzero rational constant.
    pub fn div_rem_in(&self, d: &MultiPoly, var: Var) -> Result<(MultiPoly, MultiPoly), AlgebraError> {
        let dd = d
            .degree_in(var)
            .ok_or_else(|| AlgebraError::Input("division by zero polynomial".into()))?;
        let lead = d.coefficients_in(var).remove(&dd).unwrap_or_else(|| MultiPoly::zero(&self.reg));
        let lc = lead.constant_value().filter(|c| !c.is_zero()).ok_or_else(|| {
            AlgebraError::Input(format!("leading coefficient `{lead}` of divisor is not a constant"))
        })?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.reg);
        while let Some(rd) = rem.degree_in(var).filter(|&rd| rd >= dd) {
            let top = rem.coefficients_in(var).remove(&rd).expect("degree present");
            let shift = Monomial::var(var, rd - dd);
            let q = top.mul_monomial(&shift, &(Rational::one() / &lc));
            rem = &rem - &(&q * d);
            quot = &quot + &q;
        }
        Ok((quot, rem))
    }

    /// Reads the polynomial as univariate in `var` with rational coefficients.
    pub fn to_unipoly(&self, var: Var) -> Result<super::UniPoly, AlgebraError> {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.vars().any(|(v, _)| v != var) {
                return Err(AlgebraError::Input(format!(
                    "`{self}` is not univariate in {}",
                    self.reg.name(var)
                )));
            }
            let e = m.exponent(var) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] = c.clone();
        }
        Ok(super::UniPoly::from_coeffs(coeffs))
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms.keys().map(|m| m.weighted_degree(weights)).max()
    }

    pub fn parse(reg: &Arc<Registry>, text: &str) -> Result<MultiPoly, AlgebraError> {
        super::parse::parse_poly(reg, text)
    }
}

impl LaurentPoly {
    pub fn term(reg: &Arc<Registry>, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, m, c);
        LaurentPoly {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    /// `(polynomial part, part with some negative exponent)`.
    pub fn split(&self) -> (MultiPoly, LaurentPoly) {
        let (pos, neg): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .partition(|(m, _)| m.is_polynomial());
        (
            MultiPoly {
                reg: self.reg.clone(),
                terms: pos,
            },
            LaurentPoly {
                reg: self.reg.clone(),
                terms: neg,
            },
        )
    }

    pub fn into_poly(self) -> Result<MultiPoly, AlgebraError> {
        let (poly, residue) = self.split();
        if residue.is_zero() {
            Ok(poly)
        } else {
            Err(AlgebraError::Residue { residue })
        }
    }

    /// Inverse of a single-term Laurent polynomial.
    pub fn try_inverse(&self) -> Option<LaurentPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(LaurentPoly::term(&self.reg, m.inverse(), Rational::one() / c))
    }

    /// Monomial `m` with the smallest exponents such that `m * self` is a
    /// polynomial.
    pub fn clearing_monomial(&self) -> Monomial {
        let mut m = Monomial::one();
        for k in self.terms.keys() {
            for (v, e) in k.vars() {
                if e < 0 && -e > m.exponent(v) {
                    m.set(v, -e);
                }
            }
        }
        m
    }

    /// Substitutes Laurent polynomials for variables. A variable occurring
    /// with a negative exponent needs a single-term (invertible) binding.
    pub fn substitute(&self, bindings: &[(Var, LaurentPoly)]) -> Result<LaurentPoly, AlgebraError> {
        for (_, b) in bindings {
            self.check(b)?;
        }
        let mut cache: HashMap<(Var, i32), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut fixed = Monomial::one();
            let mut acc = LaurentPoly::constant(&self.reg, c.clone());
            for (v, e) in m.vars() {
                let Some((_, b)) = bindings.iter().find(|(w, _)| *w == v) else {
                    fixed.set(v, e);
                    continue;
                };
                let key = (v, e);
                if !cache.contains_key(&key) {
                    let p = if e >= 0 {
                        b.pow(e as u32)
                    } else {
                        b.try_inverse()
                            .ok_or_else(|| AlgebraError::NotInvertible {
                                var: self.reg.name(v).to_string(),
                            })?
                            .pow((-e) as u32)
                    };
                    cache.insert(key, p);
                }
                acc = &acc * &cache[&key];
            }
            out = &out + &acc.mul_monomial(&fixed, &Rational::one());
        }
        Ok(out)
    }
}

impl From<&MultiPoly> for LaurentPoly {
    fn from(p: &MultiPoly) -> Self {
        p.to_laurent()
    }
}

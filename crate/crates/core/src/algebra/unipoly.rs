use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::MultiPoly;
use super::rational::Rational;
use super::registry::{Registry, Var};
use super::resultant;
use super::AlgebraError;

/// Dense univariate polynomial over the rationals, coefficients stored from
/// the constant term upward. The leading coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn monomial(deg: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => self.scale(&(Rational::one() / lc)),
            None => Self::zero(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    /// Horner evaluation at a multivariate polynomial: `self(arg)`.
    pub fn eval_at(&self, arg: &MultiPoly) -> MultiPoly {
        let reg = arg.registry();
        self.coeffs.iter().rev().fold(MultiPoly::zero(reg), |acc, c| {
            &(&acc * arg) + &MultiPoly::constant(reg, c.clone())
        })
    }

    pub fn to_multi(&self, reg: &Arc<Registry>, var: Var) -> MultiPoly {
        MultiPoly::from_terms(
            reg,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(var, k as i32), c.clone())),
        )
    }

    /// Parses text in the polynomial grammar that may only mention `var_name`.
    pub fn parse(text: &str, var_name: &str) -> Result<UniPoly, AlgebraError> {
        let reg = Registry::new([var_name])?;
        let v = reg.lookup(var_name).expect("just registered");
        MultiPoly::parse(&reg, text)?.to_unipoly(v)
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        let dd = d
            .degree()
            .ok_or_else(|| AlgebraError::Input("division by the zero polynomial".into()))?;
        let lc = d.leading_coeff().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(f: &UniPoly, g: &UniPoly) -> Result<UniPoly, AlgebraError> {
        if f.is_zero() && g.is_zero() {
            return Err(AlgebraError::Input("gcd(0, 0) is undefined".into()));
        }
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `f / gcd(f, f')`, monic. Its degree counts the distinct complex roots.
    pub fn squarefree_part(&self) -> Result<UniPoly, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::Input("squarefree part of zero".into()));
        }
        let g = UniPoly::gcd(self, &self.derivative())?;
        Ok(self.div_rem(&g)?.0.monic())
    }

    pub fn has_simple_roots(&self) -> bool {
        UniPoly::gcd(self, &self.derivative()).is_ok_and(|g| g.degree() == Some(0))
    }

    pub fn resultant(&self, other: &UniPoly) -> Result<Rational, AlgebraError> {
        resultant::resultant_rational(self, other)
    }

    /// `(-1)^(n(n-1)/2) * res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<Rational, AlgebraError> {
        resultant::discriminant_rational(self)
    }

    pub fn format(&self, var_name: &str) -> String {
        let reg = Registry::new([var_name]).expect("valid variable name");
        let v = reg.lookup(var_name).expect("registered");
        self.to_multi(&reg, v).to_string()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

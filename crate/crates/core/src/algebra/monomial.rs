use std::cmp::Ordering;

use smallvec::SmallVec;

use super::registry::{Registry, Var};

/// Exponent vector indexed by [`Var`]. Trailing zero exponents are never
/// stored, so equal monomials have equal representations. Exponents may be
/// negative; only Laurent polynomials produce such monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[i32; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_exponents(exps: &[i32]) -> Self {
        let mut m = Monomial(SmallVec::from_slice(exps));
        m.trim();
        m
    }

    pub fn var(var: Var, exp: i32) -> Self {
        let mut m = Monomial::one();
        m.set(var, exp);
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exponent(&self, var: Var) -> i32 {
        self.0.get(var.0).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn set(&mut self, var: Var, exp: i32) {
        if self.0.len() <= var.0 {
            if exp == 0 {
                return;
            }
            self.0.resize(var.0 + 1, 0);
        }
        self.0[var.0] = exp;
        self.trim();
    }

    pub fn with_exponent(&self, var: Var, exp: i32) -> Self {
        let mut m = self.clone();
        m.set(var, exp);
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Degree with per-variable weights; variables past `weights` count 0.
    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut out = SmallVec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            out.push(a + b);
        }
        let mut m = Monomial(out);
        m.trim();
        m
    }

    /// `self / other` as a Laurent monomial (exponents may go negative).
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut m = Monomial(self.0.iter().map(|e| e * k).collect());
        m.trim();
        m
    }

    /// True when `self` divides `other` inside the polynomial ring.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| e <= other.0.get(i).copied().unwrap_or(0))
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var(i), e))
    }

    pub fn format(&self, reg: &Registry) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.vars()
            .map(|(v, e)| {
                if e == 1 {
                    reg.name(v).to_string()
                } else {
                    format!("{}^{}", reg.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Graded lexicographic order; among equal total degree, a larger exponent
/// of an earlier registry variable wins.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    let a = self.0.get(i).copied().unwrap_or(0);
                    let b = other.0.get(i).copied().unwrap_or(0);
                    match a.cmp(&b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

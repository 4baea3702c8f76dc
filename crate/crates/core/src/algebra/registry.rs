use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;

use super::AlgebraError;

/// Index of a variable inside a [`Registry`]. The index doubles as the
/// variable's rank in the monomial order: lower index = more significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

pub const X: Var = Var(0);
pub const Y: Var = Var(1);
pub const Z: Var = Var(2);
pub const T: Var = Var(3);
pub const S: Var = Var(4);
pub const R: Var = Var(5);
pub const U: Var = Var(6);
pub const V: Var = Var(7);
pub const LAMBDA: Var = Var(8);
pub const XI: Var = Var(9);
pub const ALPHA: Var = Var(10);
pub const PA: Var = Var(11);
pub const PB: Var = Var(12);
pub const PC: Var = Var(13);
pub const PD: Var = Var(14);
pub const PE: Var = Var(15);
pub const Z1: Var = Var(16);
pub const Z2: Var = Var(17);
pub const Z3: Var = Var(18);
pub const Z4: Var = Var(19);

const STANDARD_NAMES: [&str; 20] = [
    "x", "y", "z", "t", "s", "r", "u", "v", "lambda", "xi", "alpha", "a", "b", "c", "d", "e", "z1",
    "z2", "z3", "z4",
];

static STANDARD: Lazy<Arc<Registry>> = Lazy::new(|| {
    Arc::new(Registry {
        names: STANDARD_NAMES.iter().map(|s| s.to_string()).collect(),
    })
});

/// Ordered set of variable names. The order is fixed when the registry is
/// created and defines the graded-lex monomial order.
#[derive(Debug, PartialEq, Eq)]
pub struct Registry {
    names: Vec<String>,
}

impl Registry {
    /// The shared registry `x, y, z, t, s, r, u, v, lambda, xi, alpha, a, b,
    /// c, d, e, z1, z2, z3, z4`. The constants in this module index into it.
    pub fn standard() -> Arc<Registry> {
        STANDARD.clone()
    }

    pub fn new<I, S>(names: I) -> Result<Arc<Registry>, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Vec::new();
        for name in names {
            let name = name.into();
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(AlgebraError::Input(format!("invalid variable name `{name}`")));
            }
            if out.contains(&name) {
                return Err(AlgebraError::Input(format!("duplicate variable `{name}`")));
            }
            out.push(name);
        }
        Ok(Arc::new(Registry { names: out }))
    }

    /// A new registry with `extra` appended after the existing names, so all
    /// existing [`Var`] indices stay valid.
    pub fn extend<I, S>(&self, extra: I) -> Result<Arc<Registry>, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Registry::new(
            self.names
                .iter()
                .cloned()
                .chain(extra.into_iter().map(Into::into)),
        )
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(Var)
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.0]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.names.len()).map(Var)
    }

    pub(crate) fn same(a: &Arc<Registry>, b: &Arc<Registry>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

impl fmt::Display for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

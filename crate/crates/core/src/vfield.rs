//! Algebraic vector fields on `S` as derivations of `C[S]`.
//!
//! A field is a triple `(nu_x, nu_y, nu_z)` of ring elements; it is tangent
//! to `S` when it kills the defining relation. The generator fields are
//! `HF = x d/dx - y d/dy`, `SF^x = p' d/dy + x d/dz` and
//! `SF^y = p' d/dx + y d/dz`.

use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::registry::{T, U, V, X, Y, Z};
use crate::algebra::{
    solve, AlgebraError, LaurentPoly, Monomial, MultiPoly, Rational, RationalInput, UniPoly,
};
use crate::fibration::{FibrationError, FibrationSpec};
use crate::surface::{apply_derivation, Surface, SurfaceElem, SurfaceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("not tangent to S: x*nu_y + y*nu_x - p'(z)*nu_z = {residue}")]
    NotTangent { residue: MultiPoly },
    #[error("invalid family parameters: {condition} fails ({witness})")]
    Validation { condition: String, witness: String },
    #[error("family (3) needs deg p = 4, got {0}")]
    Degree(usize),
    #[error("component {component} is not regular on S: {source}")]
    NotRegular {
        component: &'static str,
        source: SurfaceError,
    },
    #[error("no h with nu(f) = h(f) up to degree {cap}; search inconclusive")]
    Cap { cap: usize },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `nu_x d/dx + nu_y d/dy + nu_z d/dz` on `S`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    nu: [SurfaceElem; 3],
}

/// `x*nu_y + y*nu_x - p'(z)*nu_z` in normal form.
pub fn tangency_residue(nu: [&SurfaceElem; 3]) -> SurfaceElem {
    let s = nu[0].surface();
    let pp = s.elem(&s.p().derivative(Z)).expect("same registry");
    &(&(&s.x() * nu[1]) + &(&s.y() * nu[0])) - &(&pp * nu[2])
}

impl VectorField {
    /// Tangent field from its components.
    pub fn new(nu_x: SurfaceElem, nu_y: SurfaceElem, nu_z: SurfaceElem) -> Result<Self, FieldError> {
        let f = Self::raw(nu_x, nu_y, nu_z)?;
        let r = f.tangency_residue();
        if r.is_zero() {
            Ok(f)
        } else {
            Err(FieldError::NotTangent {
                residue: r.poly().clone(),
            })
        }
    }

    /// Triple without the tangency check.
    pub fn raw(nu_x: SurfaceElem, nu_y: SurfaceElem, nu_z: SurfaceElem) -> Result<Self, FieldError> {
        nu_x.checked_add(&nu_y)?;
        nu_x.checked_add(&nu_z)?;
        Ok(VectorField {
            nu: [nu_x, nu_y, nu_z],
        })
    }

    pub fn parse(surface: &Surface, texts: [&str; 3]) -> Result<Self, FieldError> {
        let [a, b, c] = texts.map(|t| surface.parse_elem(t));
        Self::raw(a?, b?, c?)
    }

    pub fn from_json(surface: &Surface, json: &FieldJson) -> Result<Self, FieldError> {
        Self::parse(surface, [&json.nu_x, &json.nu_y, &json.nu_z])
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            nu_x: self.nu[0].to_string(),
            nu_y: self.nu[1].to_string(),
            nu_z: self.nu[2].to_string(),
        }
    }

    pub fn surface(&self) -> &Surface {
        self.nu[0].surface()
    }

    pub fn components(&self) -> [&SurfaceElem; 3] {
        [&self.nu[0], &self.nu[1], &self.nu[2]]
    }

    pub fn nu_x(&self) -> &SurfaceElem {
        &self.nu[0]
    }

    pub fn nu_y(&self) -> &SurfaceElem {
        &self.nu[1]
    }

    pub fn nu_z(&self) -> &SurfaceElem {
        &self.nu[2]
    }

    pub fn tangency_residue(&self) -> SurfaceElem {
        tangency_residue(self.components())
    }

    pub fn is_tangent(&self) -> bool {
        self.tangency_residue().is_zero()
    }

    /// `nu(f)`.
    pub fn apply(&self, f: &SurfaceElem) -> SurfaceElem {
        apply_derivation(self.components(), f)
    }

    pub fn zero(surface: &Surface) -> Self {
        VectorField {
            nu: [surface.zero(), surface.zero(), surface.zero()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nu.iter().all(SurfaceElem::is_zero)
    }

    /// `h * nu`.
    pub fn times(&self, h: &SurfaceElem) -> Self {
        VectorField {
            nu: [&self.nu[0] * h, &self.nu[1] * h, &self.nu[2] * h],
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField {
            nu: [self.nu[0].scale(c), self.nu[1].scale(c), self.nu[2].scale(c)],
        }
    }

    /// `[u, v]`, acting on each coordinate `g` as `u(v(g)) - v(u(g))`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let comp = |i: usize| &self.apply(&other.nu[i]) - &other.apply(&self.nu[i]);
        VectorField {
            nu: [comp(0), comp(1), comp(2)],
        }
    }

    /// `(f, g)` with `nu = f*HF + g*SF^x`, which exists exactly when `nu_x`
    /// and `nu_z` are divisible by `x`; then `f = nu_x/x` and `g = nu_z/x`.
    pub fn tangential_decomposition(&self) -> Option<(SurfaceElem, SurfaceElem)> {
        let f = self.nu[0].divisible_by_x_power(1)?;
        let g = self.nu[2].divisible_by_x_power(1)?;
        let gens = generators(self.surface());
        let rebuilt = &gens.hf.times(&f) + &gens.sfx.times(&g);
        (rebuilt == *self).then_some((f, g))
    }
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.nu[0], self.nu[1], self.nu[2])
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            nu: [
                &self.nu[0] + &rhs.nu[0],
                &self.nu[1] + &rhs.nu[1],
                &self.nu[2] + &rhs.nu[2],
            ],
        }
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self + &-rhs
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField {
            nu: [-&self.nu[0], -&self.nu[1], -&self.nu[2]],
        }
    }
}

/// `{"nu_x": "<poly>", "nu_y": "<poly>", "nu_z": "<poly>"}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub nu_x: String,
    pub nu_y: String,
    pub nu_z: String,
}

pub struct Generators {
    pub hf: VectorField,
    pub sfx: VectorField,
    pub sfy: VectorField,
}

pub fn generators(s: &Surface) -> Generators {
    let pp = s.elem(&s.p().derivative(Z)).expect("same registry");
    let f = |a, b, c| VectorField::raw(a, b, c).expect("same surface");
    Generators {
        hf: f(s.x(), -&s.y(), s.zero()),
        sfx: f(s.zero(), pp.clone(), s.x()),
        sfy: f(pp, s.zero(), s.y()),
    }
}

/// Parameters of the three families of complete fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub enum FamilyParams {
    /// `c*HF + (A(x) z + B(x)) SF^x`
    Family1 { c: Rational, a: UniPoly, b: UniPoly },
    /// The two-section family around `f = x^m (x^l (z+a) + Q(x))^n`, with
    /// `shift` standing for `a`.
    Family2 {
        c: Rational,
        a: UniPoly,
        m: u32,
        n: u32,
        l: u32,
        shift: Rational,
        q: UniPoly,
    },
    /// `A(f) * nu0` with `f = a x + y + p''/6` (deg p = 4).
    Family3 { a: UniPoly },
}

/// JSON form: polynomials as text (`A` in `t` for families 2 and 3, in `x`
/// for family 1; `B` and `Q` in `x`), rationals as integers or strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyJson {
    #[serde(alias = "1")]
    Family1 {
        #[serde(default)]
        c: RationalInput,
        #[serde(rename = "A", default = "zero_text")]
        a: String,
        #[serde(rename = "B", default = "zero_text")]
        b: String,
    },
    #[serde(alias = "2")]
    Family2 {
        #[serde(default)]
        c: RationalInput,
        #[serde(rename = "A")]
        a: String,
        m: u32,
        n: u32,
        #[serde(default)]
        l: u32,
        #[serde(rename = "a", default)]
        shift: RationalInput,
        #[serde(rename = "Q", default = "zero_text")]
        q: String,
    },
    #[serde(alias = "3")]
    Family3 {
        #[serde(rename = "A")]
        a: String,
    },
}

fn zero_text() -> String {
    "0".into()
}

impl TryFrom<FamilyJson> for FamilyParams {
    type Error = FieldError;

    fn try_from(j: FamilyJson) -> Result<Self, FieldError> {
        Ok(match j {
            FamilyJson::Family1 { c, a, b } => FamilyParams::Family1 {
                c: c.value()?,
                a: UniPoly::parse(&a, "x")?,
                b: UniPoly::parse(&b, "x")?,
            },
            FamilyJson::Family2 {
                c,
                a,
                m,
                n,
                l,
                shift,
                q,
            } => FamilyParams::Family2 {
                c: c.value()?,
                a: UniPoly::parse(&a, "t")?,
                m,
                n,
                l,
                shift: shift.value()?,
                q: UniPoly::parse(&q, "x")?,
            },
            FamilyJson::Family3 { a } => FamilyParams::Family3 {
                a: UniPoly::parse(&a, "t")?,
            },
        })
    }
}

impl From<FamilyParams> for FamilyJson {
    fn from(p: FamilyParams) -> Self {
        match p {
            FamilyParams::Family1 { c, a, b } => FamilyJson::Family1 {
                c: (&c).into(),
                a: a.format("x"),
                b: b.format("x"),
            },
            FamilyParams::Family2 {
                c,
                a,
                m,
                n,
                l,
                shift,
                q,
            } => FamilyJson::Family2 {
                c: (&c).into(),
                a: a.format("t"),
                m,
                n,
                l,
                shift: (&shift).into(),
                q: q.format("x"),
            },
            FamilyParams::Family3 { a } => FamilyJson::Family3 { a: a.format("t") },
        }
    }
}

fn invalid(condition: &str, witness: impl Into<String>) -> FieldError {
    FieldError::Validation {
        condition: condition.into(),
        witness: witness.into(),
    }
}

/// `A(g)` by Horner's rule in `C[S]`.
pub fn eval_at_elem(a: &UniPoly, g: &SurfaceElem) -> SurfaceElem {
    let s = g.surface();
    a.coeffs()
        .iter()
        .rev()
        .fold(s.zero(), |acc, c| &(&acc * g) + &s.constant(c.clone()))
}

impl FamilyParams {
    /// The fibration the family preserves.
    pub fn fibration(&self) -> FibrationSpec {
        match self {
            FamilyParams::Family1 { .. } => FibrationSpec::CoordX,
            FamilyParams::Family2 {
                m, n, l, shift, q, ..
            } => FibrationSpec::TwoSection {
                m: *m,
                n: *n,
                l: *l,
                a: shift.clone(),
                q: q.clone(),
            },
            FamilyParams::Family3 { .. } => FibrationSpec::DoubleSection,
        }
    }

    /// The `h` with `nu(f) = h(f)`: `c t`, `c n t` and `0` respectively.
    pub fn expected_h(&self) -> UniPoly {
        match self {
            FamilyParams::Family1 { c, .. } => UniPoly::monomial(1, c.clone()),
            FamilyParams::Family2 { c, n, .. } => UniPoly::monomial(1, c * Rational::from_integer((*n).into())),
            FamilyParams::Family3 { .. } => UniPoly::zero(),
        }
    }

    /// Checks the side conditions of family (2) without building the field.
    pub fn validate(&self, s: &Surface) -> Result<(), FieldError> {
        let FamilyParams::Family2 {
            c,
            a,
            m,
            n,
            l,
            q,
            ..
        } = self
        else {
            if let FamilyParams::Family3 { .. } = self {
                if s.degree() != 4 {
                    return Err(FieldError::Degree(s.degree()));
                }
            }
            return Ok(());
        };
        if *m == 0 || *n == 0 || m.gcd(n) != 1 {
            return Err(invalid("m, n coprime and positive", format!("m = {m}, n = {n}")));
        }
        let q_deg = q.degree();
        if q_deg.is_some_and(|d| d >= *l as usize) {
            return Err(invalid(
                "deg Q < l",
                format!("Q = {}, l = {l}", q.format("x")),
            ));
        }
        let target = c / Rational::from_integer((m + n * l).into());
        let a0 = a.coeff(0);
        if a0 != target {
            return Err(invalid(
                "A(0)=c/(m+nl)",
                format!("A(0) = {a0}, c/(m+nl) = {target}"),
            ));
        }
        let f = self.fibration().as_surface_elem(s)?;
        let reg = s.registry();
        let qx = s.elem(&q.to_multi(reg, X))?;
        let qd = s.elem(&q.derivative().to_multi(reg, X))?;
        let mq = qx.scale(&Rational::from_integer((*m).into()));
        let nxq = (&s.x() * &qd).scale(&Rational::from_integer((*n).into()));
        let g = &(&eval_at_elem(a, &f) * &(&mq + &nxq)) - &qx.scale(c);
        match g.x_power_quotient(l + 1) {
            Ok(_) => Ok(()),
            Err(SurfaceError::NotDivisible { power, remainder }) => Err(invalid(
                "A(f)(mQ + nxQ') - cQ in x^(l+1) C[S]",
                format!(
                    "{g} is not divisible by x^{power}; obstruction {remainder} modulo x"
                ),
            )),
            Err(e) => Err(e.into()),
        }
    }
}

/// Builds the family member, validating its parameters first. Family (2)
/// is assembled in `C[x^{+-1}, z]` and each component is pulled back into
/// `C[S]`; a component outside `C[S]` is an error, never silently dropped.
pub fn build_family(params: &FamilyParams, s: &Surface) -> Result<VectorField, FieldError> {
    params.validate(s)?;
    let reg = s.registry();
    let gens = generators(s);
    let field = match params {
        FamilyParams::Family1 { c, a, b } => {
            let coeff = &(&s.elem(&a.to_multi(reg, X))? * &s.z()) + &s.elem(&b.to_multi(reg, X))?;
            &gens.hf.scale(c) + &gens.sfx.times(&coeff)
        }
        FamilyParams::Family2 {
            c,
            a,
            m,
            n,
            l,
            shift,
            q,
        } => {
            let x = LaurentPoly::var(reg, X);
            let xinv = x.try_inverse().expect("monomial");
            let xl1 = xinv.pow(l + 1);
            let za = &LaurentPoly::var(reg, Z) + &LaurentPoly::constant(reg, shift.clone());
            let qx = q.to_multi(reg, X).to_laurent();
            let qd = q.derivative().to_multi(reg, X).to_laurent();
            let f = params.fibration().as_poly(s)?;
            let af = a.eval_at(&f).to_laurent();
            let int = |k: u32| Rational::from_integer(k.into());
            let first = (&(&za * &xinv) + &(&qx * &xl1)).scale(c);
            let bracket = &(&za * &xinv).scale(&int(m + n * l))
                + &(&(&qx.scale(&int(*m)) + &(&x * &qd).scale(&int(*n))) * &xl1);
            let alpha = &first - &(&af * &bracket);
            let pp = s.p().derivative(Z).to_laurent();
            let y_image = &s.p().to_laurent() * &xinv;
            let nu_x = (&af * &x).scale(&int(*n));
            let nu_y = &(&alpha * &pp) - &(&af * &y_image).scale(&int(*n));
            let nu_z = &alpha * &x;
            let member = |name: &'static str, g: &LaurentPoly| {
                s.localized_member(g)
                    .map_err(|source| FieldError::NotRegular { component: name, source })
            };
            VectorField::raw(member("nu_x", &nu_x)?, member("nu_y", &nu_y)?, member("nu_z", &nu_z)?)?
        }
        FamilyParams::Family3 { a } => {
            let f = FibrationSpec::DoubleSection.as_surface_elem(s)?;
            nu0(s)?.times(&eval_at_elem(a, &f))
        }
    };
    if !field.is_tangent() {
        return Err(FieldError::NotTangent {
            residue: field.tangency_residue().poly().clone(),
        });
    }
    Ok(field)
}

/// `-(p'''/6) HF + a SF^x - SF^y` for quartic `p` with leading coefficient `a`.
pub fn nu0(s: &Surface) -> Result<VectorField, FieldError> {
    if s.degree() != 4 {
        return Err(FieldError::Degree(s.degree()));
    }
    let gens = generators(s);
    let p3 = s.elem(&s.p_derivative(3))?.scale(&Rational::new(1.into(), 6.into()));
    let lead = s.elem(&s.leading_coeff())?;
    Ok(&(&gens.sfx.times(&lead) - &gens.hf.times(&p3)) - &gens.sfy)
}

/// Finds `h` with `nu(f) = h(f)` by exact linear solving over the
/// normal-form basis, trying degrees `0..=cap`.
///
/// Returns `Ok(None)` once absence is certain: with weights `x, y -> deg p`
/// and `z -> 2` the top weighted parts of `C[S]` multiply without
/// cancellation (the associated graded ring is a domain), so a solution of
/// degree `D` needs `D * w(f) = w(nu(f))`. Without that bound (parametric
/// leading coefficient, constant `f`) the search ends in [`FieldError::Cap`].
pub fn preserves_fibration(
    nu: &VectorField,
    f: &SurfaceElem,
    cap: usize,
) -> Result<Option<UniPoly>, FieldError> {
    let s = f.surface();
    let g = nu.apply(f);
    if g.is_zero() {
        return Ok(Some(UniPoly::zero()));
    }
    let numeric_lead = s.leading_coeff().constant_value().is_some();
    let bound = match (f.weighted_degree(), g.weighted_degree()) {
        (Some(wf), Some(wg)) if numeric_lead && wf > 0 => Some((wg / wf) as usize),
        _ => None,
    };
    let mut powers = vec![s.one()];
    for d in 0..=cap {
        if d > 0 {
            let next = &powers[d - 1] * f;
            powers.push(next);
        }
        if let Some(h) = solve_in_powers(&powers, &g) {
            return Ok(Some(h));
        }
        if bound.is_some_and(|b| d >= b) {
            return Ok(None);
        }
    }
    Err(FieldError::Cap { cap })
}

fn solve_in_powers(powers: &[SurfaceElem], g: &SurfaceElem) -> Option<UniPoly> {
    let mut keys: Vec<Monomial> = powers
        .iter()
        .chain(std::iter::once(g))
        .flat_map(|e| e.poly().terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
        .collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rational>> = keys
        .iter()
        .map(|m| powers.iter().map(|e| e.poly().coeff(m)).collect())
        .collect();
    let rhs: Vec<Rational> = keys.iter().map(|m| g.poly().coeff(m)).collect();
    solve(&rows, &rhs, powers.len()).map(UniPoly::from_coeffs)
}

/// How the group parameter enters a flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowParam {
    /// `t` in `C^+`, identity at `t = 0`, composition adds.
    Additive,
    /// `u` in `C^*`, identity at `u = 1`, composition multiplies.
    Multiplicative,
}

/// A closed-form flow `(x, y, z) -> (X, Y, Z)` with one group parameter
/// (`t` when additive, `u` when multiplicative).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFlow {
    surface: Surface,
    pub maps: [LaurentPoly; 3],
    pub param: FlowParam,
}

impl PolyFlow {
    /// `(u x, y/u, z)`, the flow of `HF` in multiplicative time.
    pub fn hf(s: &Surface) -> Self {
        let reg = s.registry();
        let u = LaurentPoly::var(reg, U);
        PolyFlow {
            surface: s.clone(),
            maps: [
                &u * &LaurentPoly::var(reg, X),
                &u.try_inverse().expect("monomial") * &LaurentPoly::var(reg, Y),
                LaurentPoly::var(reg, Z),
            ],
            param: FlowParam::Multiplicative,
        }
    }

    /// Flow of `B(x) SF^x`: `x` is constant, `Z = z + B(x) x t` and
    /// `Y = y + (p(Z) - p(z))/x`, the division being exact.
    pub fn shear(s: &Surface, b: &UniPoly) -> Result<Self, FieldError> {
        let reg = s.registry();
        let x = MultiPoly::var(reg, X);
        let zt = &MultiPoly::var(reg, Z) + &(&(&b.to_multi(reg, X) * &x) * &MultiPoly::var(reg, T));
        let pz = s.p().compose(&[(Z, zt.clone())]);
        let diff = &pz - s.p();
        let quotient = diff
            .div_exact(&x)
            .ok_or_else(|| FieldError::Input(format!("p(Z) - p(z) = {diff} is not divisible by x")))?;
        Ok(PolyFlow {
            surface: s.clone(),
            maps: [
                x.to_laurent(),
                (&MultiPoly::var(reg, Y) + &quotient).to_laurent(),
                zt.to_laurent(),
            ],
            param: FlowParam::Additive,
        })
    }

    fn param_var(&self) -> crate::algebra::Var {
        match self.param {
            FlowParam::Additive => T,
            FlowParam::Multiplicative => U,
        }
    }

    /// The maps with the parameter replaced by `value`.
    pub fn at(&self, value: &LaurentPoly) -> Result<[LaurentPoly; 3], FieldError> {
        let v = self.param_var();
        let sub = |g: &LaurentPoly| g.substitute(&[(v, value.clone())]);
        Ok([sub(&self.maps[0])?, sub(&self.maps[1])?, sub(&self.maps[2])?])
    }

    fn reduce(&self, g: &LaurentPoly) -> Result<MultiPoly, FieldError> {
        Ok(self.surface.reduce_laurent(g)?)
    }

    /// `X Y - p(Z)` reduced on `S` (zero iff the flow maps `S` to itself).
    pub fn surface_residue(&self) -> Result<MultiPoly, FieldError> {
        let [x, y, z] = &self.maps;
        let pz = self.surface.p().substitute(&[(Z, z.clone())])?;
        self.reduce(&(&(x * y) - &pz))
    }

    /// Componentwise `phi_s(phi_r(.)) - phi_{s+r}(.)` (or `u`, `v` and `u v`)
    /// reduced on `S`.
    pub fn group_law_residue(&self) -> Result<[MultiPoly; 3], FieldError> {
        let reg = self.surface.registry();
        let (first, second, combined) = match self.param {
            FlowParam::Additive => {
                let s = LaurentPoly::var(reg, crate::algebra::registry::S);
                let r = LaurentPoly::var(reg, crate::algebra::registry::R);
                (s.clone(), r.clone(), &s + &r)
            }
            FlowParam::Multiplicative => {
                let u = LaurentPoly::var(reg, U);
                let v = LaurentPoly::var(reg, V);
                (u.clone(), v.clone(), &u * &v)
            }
        };
        let inner = self.at(&second)?;
        let outer = self.at(&first)?;
        let joint = self.at(&combined)?;
        let bind = [(X, inner[0].clone()), (Y, inner[1].clone()), (Z, inner[2].clone())];
        let mut out = Vec::new();
        for (o, j) in outer.iter().zip(&joint) {
            out.push(self.reduce(&(&o.substitute(&bind)? - j))?);
        }
        Ok(out.try_into().expect("three components"))
    }

    /// `phi_0 - id` (or `phi_1 - id`) reduced on `S`.
    pub fn identity_residue(&self) -> Result<[MultiPoly; 3], FieldError> {
        let reg = self.surface.registry();
        let id = match self.param {
            FlowParam::Additive => LaurentPoly::zero(reg),
            FlowParam::Multiplicative => LaurentPoly::one(reg),
        };
        let at = self.at(&id)?;
        let mut out = Vec::new();
        for (g, v) in at.iter().zip([X, Y, Z]) {
            out.push(self.reduce(&(g - &LaurentPoly::var(reg, v)))?);
        }
        Ok(out.try_into().expect("three components"))
    }

    /// Velocity at the identity (`d/dt` at 0, or `u d/du` at 1).
    pub fn generator(&self) -> Result<VectorField, FieldError> {
        let v = self.param_var();
        let reg = self.surface.registry();
        let mut comps = Vec::new();
        for g in &self.maps {
            let d = match self.param {
                FlowParam::Additive => g.derivative(v),
                FlowParam::Multiplicative => &g.derivative(v) * &LaurentPoly::var(reg, v),
            };
            let at = match self.param {
                FlowParam::Additive => LaurentPoly::zero(reg),
                FlowParam::Multiplicative => LaurentPoly::one(reg),
            };
            let poly = d.substitute(&[(v, at)])?.into_poly()?;
            comps.push(self.surface.elem(&poly)?);
        }
        let [a, b, c]: [SurfaceElem; 3] = comps.try_into().expect("three components");
        VectorField::raw(a, b, c)
    }

    /// All three exact checks pass.
    pub fn verify(&self) -> Result<bool, FieldError> {
        Ok(self.surface_residue()?.is_zero()
            && self.group_law_residue()?.iter().all(MultiPoly::is_zero)
            && self.identity_residue()?.iter().all(MultiPoly::is_zero))
    }
}

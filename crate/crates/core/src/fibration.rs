//! The C- and C*-fibrations of a Danielewski surface, their fiber data and
//! the exact identities behind the quartic (double-section) case.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::algebra::registry::{ALPHA, LAMBDA, PA, PB, PC, PD, PE, S, T, X, XI, Y, Z, Z1, Z2, Z3, Z4};
use crate::algebra::{
    discriminant, AlgebraError, LaurentPoly, MultiPoly, Rational, RationalInput, Registry, UniPoly,
};
use crate::certificate::{Certificate, Status};
use crate::surface::{Surface, SurfaceDef, SurfaceElem, SurfaceError};
use crate::vfield::{nu0, FieldError, VectorField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FibrationError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<FieldError> for FibrationError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Surface(s) => FibrationError::Surface(s),
            FieldError::Algebra(a) => FibrationError::Algebra(a),
            other => FibrationError::Input(other.to_string()),
        }
    }
}

/// The fibrations `S -> C` up to automorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FibrationJson", into = "FibrationJson")]
pub enum FibrationSpec {
    /// `f = x`
    CoordX,
    /// `f = z`
    CoordZ,
    /// `f = x^m (x^l (z+a) + Q(x))^n`
    TwoSection {
        m: u32,
        n: u32,
        l: u32,
        a: Rational,
        q: UniPoly,
    },
    /// `f = a x + y + p''(z)/6` for quartic `p` with leading coefficient `a`.
    DoubleSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FibrationJson {
    CoordX,
    CoordZ,
    TwoSection {
        m: u32,
        n: u32,
        #[serde(default)]
        l: u32,
        #[serde(default)]
        a: RationalInput,
        #[serde(rename = "Q", default = "zero_text")]
        q: String,
    },
    DoubleSection,
}

fn zero_text() -> String {
    "0".into()
}

impl TryFrom<FibrationJson> for FibrationSpec {
    type Error = FibrationError;

    fn try_from(j: FibrationJson) -> Result<Self, FibrationError> {
        Ok(match j {
            FibrationJson::CoordX => FibrationSpec::CoordX,
            FibrationJson::CoordZ => FibrationSpec::CoordZ,
            FibrationJson::DoubleSection => FibrationSpec::DoubleSection,
            FibrationJson::TwoSection { m, n, l, a, q } => FibrationSpec::TwoSection {
                m,
                n,
                l,
                a: a.value()?,
                q: UniPoly::parse(&q, "x")?,
            },
        })
    }
}

impl From<FibrationSpec> for FibrationJson {
    fn from(s: FibrationSpec) -> Self {
        match s {
            FibrationSpec::CoordX => FibrationJson::CoordX,
            FibrationSpec::CoordZ => FibrationJson::CoordZ,
            FibrationSpec::DoubleSection => FibrationJson::DoubleSection,
            FibrationSpec::TwoSection { m, n, l, a, q } => FibrationJson::TwoSection {
                m,
                n,
                l,
                a: (&a).into(),
                q: q.format("x"),
            },
        }
    }
}

impl FibrationSpec {
    /// Shape constraints that do not depend on the surface.
    pub fn check_shape(&self) -> Result<(), FibrationError> {
        if let FibrationSpec::TwoSection { m, n, l, q, .. } = self {
            if *m == 0 || *n == 0 || m.gcd(n) != 1 {
                return Err(FibrationError::Input(format!(
                    "m = {m} and n = {n} must be coprime and positive"
                )));
            }
            if q.degree().is_some_and(|d| d >= *l as usize) {
                return Err(FibrationError::Input(format!(
                    "deg Q < l fails for Q = {}, l = {l}",
                    q.format("x")
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self, s: &SurfaceDef) -> Result<(), FibrationError> {
        self.check_shape()?;
        if *self == FibrationSpec::DoubleSection && s.degree() != 4 {
            return Err(FibrationError::Input(format!(
                "the double-section fibration needs deg p = 4, got {}",
                s.degree()
            )));
        }
        Ok(())
    }

    /// `f` as a polynomial in `x, y, z`.
    pub fn as_poly(&self, s: &SurfaceDef) -> Result<MultiPoly, FibrationError> {
        self.validate(s)?;
        let reg = s.registry();
        Ok(match self {
            FibrationSpec::CoordX => MultiPoly::var(reg, X),
            FibrationSpec::CoordZ => MultiPoly::var(reg, Z),
            FibrationSpec::TwoSection { m, n, l, a, q } => two_section_poly(reg, *m, *n, *l, a, q),
            FibrationSpec::DoubleSection => {
                let sixth = Rational::new(1.into(), 6.into());
                &(&(&s.leading_coeff() * &MultiPoly::var(reg, X)) + &MultiPoly::var(reg, Y))
                    + &s.p_derivative(2).scale(&sixth)
            }
        })
    }

    pub fn as_surface_elem(&self, s: &Surface) -> Result<SurfaceElem, FibrationError> {
        Ok(s.elem(&self.as_poly(s)?)?)
    }
}

fn two_section_poly(
    reg: &std::sync::Arc<Registry>,
    m: u32,
    n: u32,
    l: u32,
    a: &Rational,
    q: &UniPoly,
) -> MultiPoly {
    let x = MultiPoly::var(reg, X);
    let za = &MultiPoly::var(reg, Z) + &MultiPoly::constant(reg, a.clone());
    let w = &(&x.pow(l) * &za) + &q.to_multi(reg, X);
    &x.pow(m) * &w.pow(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberType {
    #[serde(rename = "C")]
    Line,
    #[serde(rename = "Cstar")]
    Punctured,
}

impl std::fmt::Display for FiberType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FiberType::Line => "C",
            FiberType::Punctured => "C*",
        })
    }
}

/// A group of special fibers sharing one description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialFiber {
    /// Where they lie, e.g. `"0"` or `"roots of z^2 - 1"`.
    pub over: String,
    pub count: usize,
    pub shape: String,
    pub chi: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub generic_fiber: FiberType,
    pub chi_generic: i64,
    /// Squarefree polynomial in the fiber value `s` whose roots are the
    /// special values.
    pub special_values: String,
    #[serde(skip)]
    pub special_poly: UniPoly,
    pub special_count: usize,
    pub special_fibers: Vec<SpecialFiber>,
    /// `chi(F) chi(C) + sum (chi(F') - chi(F))`, when every special fiber has
    /// a known Euler characteristic.
    pub chi_s: Option<i64>,
    pub formula: Option<String>,
}

impl FiberReport {
    fn assemble(
        generic_fiber: FiberType,
        special_poly: UniPoly,
        special_fibers: Vec<SpecialFiber>,
    ) -> Self {
        let chi_generic = match generic_fiber {
            FiberType::Line => 1,
            FiberType::Punctured => 0,
        };
        let known: Option<Vec<(usize, i64)>> =
            special_fibers.iter().map(|f| f.chi.map(|c| (f.count, c))).collect();
        let (chi_s, formula) = match known {
            Some(parts) => {
                let total = chi_generic
                    + parts
                        .iter()
                        .map(|&(k, c)| k as i64 * (c - chi_generic))
                        .sum::<i64>();
                let terms: Vec<String> = parts
                    .iter()
                    .map(|&(k, c)| format!("{k}*({c} - {chi_generic})"))
                    .collect();
                (
                    Some(total),
                    Some(format!("{chi_generic}*1 + {} = {total}", terms.join(" + "))),
                )
            }
            None => (None, None),
        };
        FiberReport {
            generic_fiber,
            chi_generic,
            special_values: special_poly.format("s"),
            special_count: special_poly.degree().unwrap_or(0),
            special_poly,
            special_fibers,
            chi_s,
            formula,
        }
    }
}

/// Fiber data of `spec` on `s`. The Euler characteristic of `S` comes out
/// of the fibration formula and can be compared with `deg p`.
pub fn euler_report(spec: &FibrationSpec, s: &Surface) -> Result<FiberReport, FibrationError> {
    spec.validate(s)?;
    let k = s.degree();
    let at_zero = UniPoly::identity();
    Ok(match spec {
        // Over 0: k disjoint lines {x = 0, z = z_i}.
        FibrationSpec::CoordX => FiberReport::assemble(
            FiberType::Line,
            at_zero,
            vec![SpecialFiber {
                over: "0".into(),
                count: 1,
                shape: format!("{k} disjoint lines"),
                chi: Some(k as i64),
            }],
        ),
        // Over a root of p: two lines x = 0 and y = 0 crossing once.
        FibrationSpec::CoordZ => {
            let p = s
                .p_uni()
                .ok_or_else(|| FibrationError::Input("needs a rational p".into()))?;
            FiberReport::assemble(
                FiberType::Punctured,
                p.monic(),
                vec![SpecialFiber {
                    over: format!("roots of {}", p.format("z")),
                    count: k,
                    shape: "two lines meeting in a point".into(),
                    chi: Some(1),
                }],
            )
        }
        // Over 0 the fiber is {x = 0} (k lines) plus the part with x != 0,
        // which x maps isomorphically onto C*. Every other fiber lies in
        // {x != 0} and is a single C* because gcd(m, n) = 1.
        FibrationSpec::TwoSection { .. } => FiberReport::assemble(
            FiberType::Punctured,
            at_zero,
            vec![SpecialFiber {
                over: "0".into(),
                count: 1,
                shape: format!("{k} lines and a disjoint C*"),
                chi: Some(k as i64),
            }],
        ),
        FibrationSpec::DoubleSection => {
            let special = double_section_special_values(s)?;
            let count = special.degree().unwrap_or(0);
            FiberReport::assemble(
                FiberType::Punctured,
                special.clone(),
                vec![SpecialFiber {
                    over: format!("roots of {}", special.format("s")),
                    count,
                    shape: "not C*".into(),
                    chi: None,
                }],
            )
        }
    })
}

/// `Delta_s(z) = (s - p''/6)^2 - 4 a p(z)`, the `x`-discriminant of the
/// fiber `a x^2 - (s - p''/6) x + p(z) = 0`, as a polynomial in `z` and `s`.
pub fn double_section_discriminant(s: &SurfaceDef) -> Result<MultiPoly, FibrationError> {
    FibrationSpec::DoubleSection.validate(s)?;
    let reg = s.registry();
    let sixth = Rational::new(1.into(), 6.into());
    let shifted = &MultiPoly::var(reg, S) - &s.p_derivative(2).scale(&sixth);
    let four_a = s.leading_coeff().scale(&Rational::from_integer(4.into()));
    Ok(&shifted.pow(2) - &(&four_a * s.p()))
}

/// Squarefree polynomial in `s` vanishing at the special fiber values:
/// the `z^2`-coefficient of `Delta_s` times its `z`-discriminant.
pub fn double_section_special_values(s: &SurfaceDef) -> Result<UniPoly, FibrationError> {
    let delta = double_section_discriminant(s)?;
    let parts = delta.coefficients_in(Z);
    if let Some((&top, _)) = parts.iter().next_back().filter(|(&d, _)| d > 2) {
        return Err(FibrationError::Input(format!(
            "Delta_s has z-degree {top}: {delta}"
        )));
    }
    let reg = s.registry();
    let c2 = parts.get(&2).cloned().unwrap_or_else(|| MultiPoly::zero(reg));
    let disc = discriminant(&delta, Z)?;
    let product = (&c2 * &disc).to_unipoly(S)?;
    if product.is_zero() {
        return Err(FibrationError::Input("degenerate Delta_s".into()));
    }
    Ok(product.squarefree_part()?)
}

fn ok_or_residue(claim: &str, residue: &MultiPoly, inputs: serde_json::Value) -> Certificate {
    Certificate::from_residue(claim, residue, inputs)
}

/// `f(t^n, _, lambda t^(-m-nl) - Q(t^n) t^(-nl) - a) = lambda^n` for a
/// two-section fibration, as an identity in `t` and `lambda`.
pub fn verify_trivialization(spec: &FibrationSpec) -> Result<Certificate, FibrationError> {
    let FibrationSpec::TwoSection { m, n, l, a, q } = spec else {
        return Err(FibrationError::Input("trivialization needs a two-section fibration".into()));
    };
    spec.check_shape()?;
    let reg = Registry::standard();
    let f = two_section_poly(&reg, *m, *n, *l, a, q);
    let t = LaurentPoly::var(&reg, T);
    let tinv = t.try_inverse().expect("monomial");
    let lambda = LaurentPoly::var(&reg, LAMBDA);
    let xt = t.pow(*n);
    let q_at = q.to_multi(&reg, X).to_laurent().substitute(&[(X, xt.clone())])?;
    let zt = &(&(&lambda * &tinv.pow(m + n * l)) - &(&q_at * &tinv.pow(n * l)))
        - &LaurentPoly::constant(&reg, a.clone());
    let image = f.substitute(&[(X, xt.clone()), (Z, zt.clone())])?;
    let residue = &image - &lambda.pow(*n);
    let inputs = serde_json::to_value(spec).expect("serializable");
    let (poly, rest) = residue.split();
    let printed = if rest.is_zero() { poly.to_string() } else { residue.to_string() };
    Ok(Certificate::from_residue(
        format!("f(t^n, lambda*t^-(m+nl) - Q(t^n)*t^-nl - a) = lambda^{n}"),
        printed,
        inputs,
    )
    .details(json!({
        "f": f.to_string(),
        "x": xt.to_string(),
        "z": zt.to_string(),
        "image": image.to_string(),
    })))
}

/// Coefficients of `p = a (z^4 + b z^3 + c z^2 + d z + e)` with the fiber
/// parameter `alpha` and a square root `xi` of `alpha + b^2/4 - c`.
/// Entries are numbers or, in the symbolic setting, parameter variables.
pub struct Quartic {
    pub surface: Surface,
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
    pub d: LaurentPoly,
    pub e: LaurentPoly,
    pub alpha: LaurentPoly,
    pub xi: LaurentPoly,
}

impl Quartic {
    /// Numeric data; `xi^2 = alpha + b^2/4 - c` and `xi != 0` are checked.
    pub fn numeric(s: &Surface, alpha: &Rational, xi: &Rational) -> Result<Self, FibrationError> {
        let p = s
            .p_uni()
            .filter(|p| p.degree() == Some(4))
            .ok_or_else(|| FibrationError::Input("needs a rational quartic p".into()))?;
        let lead = p.coeff(4);
        let [e, d, c, b] = [0, 1, 2, 3].map(|i| p.coeff(i) / &lead);
        let target = alpha + &b * &b / Rational::from_integer(4.into()) - &c;
        if xi.is_zero() || xi * xi != target {
            return Err(FibrationError::Input(format!(
                "xi = {xi} must be a nonzero square root of alpha + b^2/4 - c = {target}"
            )));
        }
        let reg = s.registry();
        let k = |q: Rational| LaurentPoly::constant(reg, q);
        Ok(Quartic {
            surface: s.clone(),
            a: k(lead),
            b: k(b),
            c: k(c),
            d: k(d),
            e: k(e),
            alpha: k(alpha.clone()),
            xi: k(xi.clone()),
        })
    }

    /// Fully symbolic data over the parameters `a, b, c, d, e, alpha` with
    /// `xi` adjoined through the rewrite `xi^2 -> alpha + b^2/4 - c`.
    pub fn symbolic() -> Result<Self, FibrationError> {
        Self::symbolic_with_square("alpha + b^2/4 - c")
    }

    pub(crate) fn symbolic_with_square(square: &str) -> Result<Self, FibrationError> {
        let reg = Registry::standard();
        let p = MultiPoly::parse(&reg, "a*(z^4 + b*z^3 + c*z^2 + d*z + e)")?;
        let s = SurfaceDef::parametric(p)?.with_xi_square(MultiPoly::parse(&reg, square)?)?;
        let v = |var| LaurentPoly::var(&reg, var);
        Ok(Quartic {
            surface: s,
            a: v(PA),
            b: v(PB),
            c: v(PC),
            d: v(PD),
            e: v(PE),
            alpha: v(ALPHA),
            xi: v(XI),
        })
    }

    fn reg(&self) -> &std::sync::Arc<Registry> {
        self.surface.registry()
    }

    fn k(&self, n: i64) -> LaurentPoly {
        LaurentPoly::constant(self.reg(), Rational::from_integer(n.into()))
    }

    fn inv(g: &LaurentPoly) -> LaurentPoly {
        g.try_inverse().expect("single-term nonzero")
    }

    /// `chi = (alpha b - 2 d) / (4 xi^2)`
    pub fn chi(&self) -> LaurentPoly {
        let num = &(&self.alpha * &self.b) - &(&self.d * &self.k(2));
        &num * &Self::inv(&(&self.xi.pow(2) * &self.k(4)))
    }

    /// `kappa = e - alpha^2/4 + xi^2 chi^2`
    pub fn kappa(&self) -> LaurentPoly {
        let quarter = Rational::new(1.into(), 4.into());
        &(&self.e - &self.alpha.pow(2).scale(&quarter)) + &(&self.xi.pow(2) * &self.chi().pow(2))
    }

    /// `y` on the fiber `a x + y + 2a z^2 + a b z + a alpha = 0`.
    pub fn fiber_y(&self) -> LaurentPoly {
        let reg = self.reg();
        let x = LaurentPoly::var(reg, X);
        let z = LaurentPoly::var(reg, Z);
        let inner = &(&(&x + &z.pow(2).scale(&Rational::from_integer(2.into()))) + &(&self.b * &z))
            + &self.alpha;
        -&(&self.a * &inner)
    }

    /// `t = (a x - y)/(2a) + xi (z + chi)`
    pub fn t(&self) -> LaurentPoly {
        let reg = self.reg();
        let x = LaurentPoly::var(reg, X);
        let y = LaurentPoly::var(reg, Y);
        let z = LaurentPoly::var(reg, Z);
        &(&(&(&self.a * &x) - &y) * &Self::inv(&(&self.a * &self.k(2))))
            + &(&self.xi * &(&z + &self.chi()))
    }

    fn on_fiber(&self, g: &LaurentPoly) -> Result<LaurentPoly, FibrationError> {
        Ok(g.substitute(&[(Y, self.fiber_y())])?)
    }

    /// Clears denominators, applies `xy = p` (and the `xi` rule) and reduces
    /// modulo the fiber curve `a x^2 + (2a z^2 + a b z + a alpha) x + p(z)`.
    fn residue(&self, g: &LaurentPoly) -> Result<MultiPoly, FibrationError> {
        let r = self.surface.reduce_laurent(g)?;
        if r.degree_in(X).unwrap_or(0) < 2 {
            return Ok(r);
        }
        let x = LaurentPoly::var(self.reg(), X);
        let curve = self.surface.reduce_laurent(&(&x * &self.on_fiber(&(&x * &LaurentPoly::var(self.reg(), Y)))?))?;
        let curve = &curve - &MultiPoly::zero(self.reg());
        let lead = curve.coefficients_in(X).remove(&2).and_then(|c| c.constant_value());
        match lead {
            Some(_) => Ok(r.div_rem_in(&curve, X)?.1),
            None => Err(FibrationError::Input("fiber reduction needs a numeric leading coefficient".into())),
        }
    }

    fn inputs(&self) -> serde_json::Value {
        json!({
            "p": self.surface.p().to_string(),
            "alpha": self.alpha.to_string(),
            "xi": self.xi.to_string(),
            "xi_squared": match self.surface.p_uni() { Some(_) => self.xi.pow(2).to_string(), None => "alpha + b^2/4 - c".into() },
        })
    }
}

/// On the fiber `C^alpha`, `(x/a)(a x + y + 2a z^2 + a b z + a alpha)` with
/// `xy = p` equals `t (t - 2 xi (z + chi)) + kappa`. `kappa_override`
/// replaces `kappa` (for perturbation tests).
pub fn verify_deg4_parametrization(
    q: &Quartic,
    kappa_override: Option<&Rational>,
) -> Result<Certificate, FibrationError> {
    let reg = q.reg();
    let x = LaurentPoly::var(reg, X);
    let y = LaurentPoly::var(reg, Y);
    let z = LaurentPoly::var(reg, Z);
    let two = q.k(2);
    let fiber = &(&(&(&(&q.a * &x) + &y) + &(&(&two * &q.a) * &z.pow(2))) + &(&(&q.a * &q.b) * &z))
        + &(&q.a * &q.alpha);
    let lhs = &(&x * &Quartic::inv(&q.a)) * &fiber;
    let kappa = match kappa_override {
        Some(k) => LaurentPoly::constant(reg, k.clone()),
        None => q.kappa(),
    };
    let t = q.on_fiber(&q.t())?;
    let rhs = &(&t * &(&t - &(&(&two * &q.xi) * &(&z + &q.chi())))) + &kappa;
    let residue = q.residue(&(&rhs - &lhs))?;
    let mut inputs = q.inputs();
    if let Some(k) = kappa_override {
        inputs["kappa_override"] = json!(k.to_string());
    }
    Ok(ok_or_residue(
        "(x/a)(ax + y + 2az^2 + abz + a*alpha) = t(t - 2xi(z + chi)) + kappa on the fiber",
        &residue,
        inputs,
    )
    .details(json!({
        "chi": q.chi().to_string(),
        "kappa": kappa.to_string(),
        "t": q.t().to_string(),
    })))
}

/// `nu0(t) = 2 a xi t` on the fiber, for `nu0` given or the standard one.
pub fn verify_nu0_eigenvalue(
    q: &Quartic,
    field: Option<&VectorField>,
) -> Result<Certificate, FibrationError> {
    let standard;
    let field = match field {
        Some(f) => f,
        None => {
            standard = nu0(&q.surface)?;
            &standard
        }
    };
    let reg = q.reg();
    let s = &q.surface;
    // t is affine-linear in x, y, z, so nu0(t) = nu0(ax - y)/(2a) + xi nu0(z).
    let ax_y = s.elem(&MultiPoly::parse(reg, "x")?)?;
    let lead = s.elem(&s.leading_coeff())?;
    let lin = &(&lead * &ax_y) - &s.y();
    let applied = &(&field.apply(&lin).poly().to_laurent() * &Quartic::inv(&(&q.a * &q.k(2))))
        + &(&q.xi * &field.apply(&s.z()).poly().to_laurent());
    let eigen = &(&q.k(2) * &q.a) * &q.xi;
    let diff = &applied - &(&eigen * &q.t());
    let residue = q.residue(&q.on_fiber(&diff)?)?;
    let mut inputs = q.inputs();
    inputs["nu0"] = serde_json::to_value(field.to_json()).expect("serializable");
    Ok(ok_or_residue("nu0(t) = 2*a*xi*t on the fiber", &residue, inputs)
        .details(json!({ "eigenvalue": eigen.to_string() })))
}

/// The conic-pencil form of the double-section fibration for
/// `p = a (z - z1)(z - z2)(z - z3)(z - z4)`: with
/// `f = x + y/a + 2z^2 - s1 z + z1 z2 + z3 z4` (`s1 = z1 + z2 + z3 + z4`),
/// checks `(x + z^2 - (z1+z2) z + z1 z2)(x + z^2 - (z3+z4) z + z3 z4)
/// = x [x + 2z^2 - s1 z + z1 z2 + z3 z4] + prod (z - zi)`, then `a x f = a x^2 +
/// xy + ...` on `S`, and that `a f - (a x + y + p''/6)` is a constant.
/// `roots`/`lead` specialize the parameters; `perturb` is added to the
/// constant `z1 z2 + z3 z4` of `f`.
pub fn verify_conic_pencil_identity(
    roots: Option<[Rational; 4]>,
    lead: Option<Rational>,
    perturb: &Rational,
) -> Result<Certificate, FibrationError> {
    let reg = Registry::standard();
    let zs: Vec<MultiPoly> = match &roots {
        Some(r) => r.iter().map(|q| MultiPoly::constant(&reg, q.clone())).collect(),
        None => [Z1, Z2, Z3, Z4].iter().map(|&v| MultiPoly::var(&reg, v)).collect(),
    };
    let a = match &lead {
        Some(q) => MultiPoly::constant(&reg, q.clone()),
        None => MultiPoly::var(&reg, PA),
    };
    let x = MultiPoly::var(&reg, X);
    let y = MultiPoly::var(&reg, Y);
    let z = MultiPoly::var(&reg, Z);
    let two = MultiPoly::from_int(&reg, 2);
    let prod = zs.iter().fold(MultiPoly::one(&reg), |acc, r| &acc * &(&z - r));
    let s1 = zs.iter().fold(MultiPoly::zero(&reg), |acc, r| &acc + r);
    let quad = |u: &MultiPoly, v: &MultiPoly| &(&(&x + &z.pow(2)) - &(&(u + v) * &z)) + &(u * v);
    let lhs = &quad(&zs[0], &zs[1]) * &quad(&zs[2], &zs[3]);
    let constant = &(&(&zs[0] * &zs[1]) + &(&zs[2] * &zs[3])) + &MultiPoly::constant(&reg, perturb.clone());
    let bracket = &(&(&x + &(&two * &z.pow(2))) - &(&s1 * &z)) + &constant;
    let r1 = &(&lhs - &(&x * &bracket)) - &prod;

    let p = &a * &prod;
    let s = SurfaceDef::parametric(p)?;
    let ax_f = &(&(&a * &x) + &y) + &(&a * &(&(&two * &z.pow(2)) - &(&s1 * &z) + constant.clone()));
    let r2 = s.elem(&(&(&a * &lhs) - &(&x * &ax_f)))?;

    let sixth = Rational::new(1.into(), 6.into());
    let std_form = &(&(&a * &x) + &y) + &s.p_derivative(2).scale(&sixth);
    let offset = &ax_f - &std_form;
    let offset_ok = [X, Y, Z].iter().all(|&v| offset.degree_in(v).unwrap_or(0) == 0);

    let claim = "(x + z^2 - (z1+z2)z + z1z2)(x + z^2 - (z3+z4)z + z3z4) = x(x + 2z^2 - s1 z + z1z2 + z3z4) + prod(z - zi), \
                 so f = x + y/a + 2z^2 - s1 z + z1z2 + z3z4 on S";
    let status_ok = r1.is_zero() && r2.is_zero() && offset_ok;
    let residue = if !r1.is_zero() { r1.to_string() } else { r2.to_string() };
    let inputs = json!({
        "roots": roots.as_ref().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "a": lead.as_ref().map(ToString::to_string),
        "perturbation": perturb.to_string(),
    });
    let mut cert = Certificate::from_residue(claim, residue, inputs).details(json!({
        "polynomial_identity_residue": r1.to_string(),
        "surface_identity_residue": r2.to_string(),
        "a*f - (a*x + y + p''/6)": offset.to_string(),
    }));
    if !status_ok {
        cert.status = Status::Falsified;
    }
    Ok(cert)
}

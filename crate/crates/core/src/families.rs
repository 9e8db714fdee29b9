//! The two parameter families of candidate permutation polynomials
//! f(X) = X^r B(X^{q-1}) over F_{q^2}, their closed-form permutation
//! criteria, and the decomposition of the induced map on mu_{q+1} through a
//! power map conjugated by degree-one maps.
//!
//! Family thm1: B(X) = a(X+u)^n + b(X+v)^n with distinct u, v in mu_{q+1};
//! f permutes F_{q^2} iff (b/a)^{q-1} != (v/u)^n and gcd(rn, q-1) = 1.
//!
//! Family thm2: B(X) = a(X+v^{-q})^n + b(X+v)^n with v a unit outside
//! mu_{q+1}; f permutes F_{q^2} iff b v^n / a is outside mu_{q+1},
//! gcd(r, q-1) = 1 and gcd(n, q+1) = 1.
//!
//! Both families require r ≡ n (mod q+1) and nonzero a, b.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::field::{FieldCtx, Fq2};
use crate::gcd;
use crate::mobius::{Mobius, ProjPoint};
use crate::poly::{Poly, SparsePoly};
use crate::rational::{proj_pow, RationalMap};

/// Family tag; the wire format uses the lowercase names "thm1" and "thm2".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Thm1,
    Thm2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Thm1 => write!(f, "thm1"),
            Family::Thm2 => write!(f, "thm2"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "thm1" => Ok(Family::Thm1),
            "thm2" => Ok(Family::Thm2),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Family-specific parameters: the roots shifted into B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Thm1 { u: Fq2, v: Fq2 },
    Thm2 { v: Fq2 },
}

impl FamilyKind {
    pub fn family(&self) -> Family {
        match self {
            FamilyKind::Thm1 { .. } => Family::Thm1,
            FamilyKind::Thm2 { .. } => Family::Thm2,
        }
    }
}

/// A validated parameter tuple (family, r, n, a, b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    kind: FamilyKind,
    r: u64,
    n: u64,
    a: Fq2,
    b: Fq2,
}

impl FamilyParams {
    /// Checks all family invariants: positivity, r ≡ n (mod q+1), nonzero
    /// a and b, and the membership constraints on u and v.
    pub fn new(
        ctx: &FieldCtx,
        kind: FamilyKind,
        r: u64,
        n: u64,
        a: Fq2,
        b: Fq2,
    ) -> Result<Self, Error> {
        if r == 0 || n == 0 {
            return Err(Error::InvalidParams("r and n must be positive".into()));
        }
        let qp1 = ctx.q() + 1;
        if r % qp1 != n % qp1 {
            return Err(Error::InvalidParams(format!(
                "r = {r} and n = {n} are not congruent mod q+1 = {qp1}"
            )));
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidParams("a and b must be nonzero".into()));
        }
        match kind {
            FamilyKind::Thm1 { u, v } => {
                if !ctx.in_mu(u) || !ctx.in_mu(v) {
                    return Err(Error::InvalidParams("u and v must lie in mu_(q+1)".into()));
                }
                if u == v {
                    return Err(Error::InvalidParams("u and v must be distinct".into()));
                }
            }
            FamilyKind::Thm2 { v } => {
                if v.is_zero() {
                    return Err(Error::InvalidParams("v must be nonzero".into()));
                }
                if ctx.in_mu(v) {
                    return Err(Error::InvalidParams("v must lie outside mu_(q+1)".into()));
                }
            }
        }
        Ok(FamilyParams { kind, r, n, a, b })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn family(&self) -> Family {
        self.kind.family()
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> Fq2 {
        self.a
    }

    pub fn b(&self) -> Fq2 {
        self.b
    }

    /// The expanded denominator polynomial B. Its degree is n unless the
    /// leading coefficients cancel (a + b = 0), in which case it drops.
    pub fn b_poly(&self, ctx: &FieldCtx) -> Poly {
        let (first_root, second_root) = match self.kind {
            FamilyKind::Thm1 { u, v } => (u, v),
            FamilyKind::Thm2 { v } => {
                let v_neg_q = ctx
                    .inv(ctx.frobenius(v))
                    .expect("v is a unit");
                (v_neg_q, v)
            }
        };
        let lhs = linear_power(ctx, first_root, self.n).scale(ctx, self.a);
        let rhs = linear_power(ctx, second_root, self.n).scale(ctx, self.b);
        lhs.add(ctx, &rhs)
    }

    /// f(X) = X^r B(X^{q-1}) in sparse form: term exponents r + i(q-1).
    pub fn f_poly(&self, ctx: &FieldCtx) -> SparsePoly {
        f_sparse(ctx, self.r, &self.b_poly(ctx))
    }

    /// The three clauses of the permutation criterion.
    pub fn criterion_detail(&self, ctx: &FieldCtx) -> CriterionDetail {
        let q = ctx.q();
        match self.kind {
            FamilyKind::Thm1 { u, v } => {
                let b_over_a = ctx.div(self.b, self.a).expect("a is nonzero");
                let v_over_u = ctx.div(v, u).expect("u is a unit");
                CriterionDetail {
                    nondegenerate: ctx.pow(b_over_a, q - 1) != ctx.pow(v_over_u, self.n),
                    gcd_r_ok: gcd(self.r, q - 1) == 1,
                    gcd_n_ok: gcd(self.n, q - 1) == 1,
                }
            }
            FamilyKind::Thm2 { v } => {
                let bvn_over_a = ctx
                    .div(ctx.mul(self.b, ctx.pow(v, self.n)), self.a)
                    .expect("a is nonzero");
                CriterionDetail {
                    nondegenerate: !ctx.in_mu(bvn_over_a),
                    gcd_r_ok: gcd(self.r, q - 1) == 1,
                    gcd_n_ok: gcd(self.n, q + 1) == 1,
                }
            }
        }
    }

    /// True iff f(X) = X^r B(X^{q-1}) permutes F_{q^2}, by the closed-form
    /// criterion (no brute force).
    pub fn criterion(&self, ctx: &FieldCtx) -> bool {
        self.criterion_detail(ctx).holds()
    }

    /// Writes the map on mu_{q+1} as eta ∘ X^n ∘ rho for degree-one eta and
    /// rho. Requires the non-degeneracy clause, otherwise the map is constant
    /// and no such decomposition exists.
    pub fn decompose(&self, ctx: &FieldCtx) -> Result<Decomposition, Error> {
        if !self.criterion_detail(ctx).nondegenerate {
            return Err(Error::DegenerateFamily);
        }
        let (a, b, n) = (self.a, self.b, self.n);
        let aq = ctx.frobenius(a);
        let bq = ctx.frobenius(b);
        let (eta, rho) = match self.kind {
            FamilyKind::Thm1 { u, v } => {
                let u_neg_n = ctx.inv(ctx.pow(u, n)).expect("u is a unit");
                let v_neg_n = ctx.inv(ctx.pow(v, n)).expect("v is a unit");
                let eta = Mobius::new(ctx, ctx.mul(aq, u_neg_n), ctx.mul(bq, v_neg_n), a, b)?;
                let rho = Mobius::new(ctx, Fq2::ONE, u, Fq2::ONE, v)?;
                (eta, rho)
            }
            FamilyKind::Thm2 { v } => {
                let v_neg_n = ctx.inv(ctx.pow(v, n)).expect("v is a unit");
                let v_qn = ctx.pow(ctx.frobenius(v), n);
                let eta = Mobius::new(ctx, ctx.mul(aq, v_neg_n), ctx.mul(bq, v_qn), b, a)?;
                let v_neg_q = ctx.inv(ctx.frobenius(v)).expect("v is a unit");
                let rho = Mobius::new(ctx, Fq2::ONE, v, Fq2::ONE, v_neg_q)?;
                (eta, rho)
            }
        };
        Ok(Decomposition { eta, n, rho })
    }

    /// "family=thm1 p=2 k=5 r=44 n=11 u=.. v=.. a=.. b=.." with element
    /// encodings; thm2 omits u.
    pub fn to_line(&self, ctx: &FieldCtx) -> String {
        let mut out = format!(
            "family={} p={} k={} r={} n={}",
            self.family(),
            ctx.p(),
            ctx.k(),
            self.r,
            self.n
        );
        match self.kind {
            FamilyKind::Thm1 { u, v } => {
                out.push_str(&format!(" u={} v={}", u.enc(), v.enc()));
            }
            FamilyKind::Thm2 { v } => {
                out.push_str(&format!(" v={}", v.enc()));
            }
        }
        out.push_str(&format!(" a={} b={}", self.a.enc(), self.b.enc()));
        out
    }

    /// Parses the `to_line` format, building the field it names.
    pub fn parse_line(line: &str) -> Result<(FieldCtx, FamilyParams), Error> {
        let mut family = None;
        let mut fields: std::collections::HashMap<&str, &str> = std::collections::HashMap::new();
        for token in line.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {token:?}")))?;
            if key == "family" {
                family = Some(Family::from_str(value)?);
            } else {
                fields.insert(key, value);
            }
        }
        let family = family.ok_or_else(|| Error::Parse("missing family".into()))?;
        let get = |key: &str| -> Result<&str, Error> {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| Error::Parse(format!("missing {key}")))
        };
        let parse_u64 = |key: &str| -> Result<u64, Error> {
            get(key)?
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer for {key}")))
        };
        let ctx = FieldCtx::new(parse_u64("p")?, parse_u64("k")? as u32)?;
        let r = parse_u64("r")?;
        let n = parse_u64("n")?;
        let a = ctx.parse_element(get("a")?)?;
        let b = ctx.parse_element(get("b")?)?;
        let kind = match family {
            Family::Thm1 => FamilyKind::Thm1 {
                u: ctx.parse_element(get("u")?)?,
                v: ctx.parse_element(get("v")?)?,
            },
            Family::Thm2 => FamilyKind::Thm2 {
                v: ctx.parse_element(get("v")?)?,
            },
        };
        let params = FamilyParams::new(&ctx, kind, r, n, a, b)?;
        Ok((ctx, params))
    }
}

/// Clause-by-clause view of the permutation criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionDetail {
    /// thm1: (b/a)^{q-1} != (v/u)^n; thm2: b v^n / a outside mu_{q+1}.
    pub nondegenerate: bool,
    /// gcd(r, q-1) = 1.
    pub gcd_r_ok: bool,
    /// thm1: gcd(n, q-1) = 1; thm2: gcd(n, q+1) = 1.
    pub gcd_n_ok: bool,
}

impl CriterionDetail {
    pub fn holds(&self) -> bool {
        self.nondegenerate && self.gcd_r_ok && self.gcd_n_ok
    }
}

/// eta ∘ X^n ∘ rho with degree-one eta, rho.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    eta: Mobius,
    n: u64,
    rho: Mobius,
}

impl Decomposition {
    pub fn eta(&self) -> &Mobius {
        &self.eta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rho(&self) -> &Mobius {
        &self.rho
    }

    /// eta(rho(x)^n): two degree-one evaluations plus one O(log n) power,
    /// versus O(deg B) coefficient work for direct evaluation of the map.
    pub fn eval_fast(&self, ctx: &FieldCtx, pt: ProjPoint) -> ProjPoint {
        self.eta
            .eval(ctx, proj_pow(ctx, self.rho.eval(ctx, pt), self.n))
    }
}

/// (X + c)^n by iterated multiplication with the linear factor.
pub fn linear_power(ctx: &FieldCtx, c: Fq2, n: u64) -> Poly {
    let mut coeffs = vec![Fq2::ONE];
    for _ in 0..n {
        let mut next = vec![Fq2::ZERO; coeffs.len() + 1];
        for (i, &co) in coeffs.iter().enumerate() {
            next[i + 1] = ctx.add(next[i + 1], co);
            next[i] = ctx.add(next[i], ctx.mul(c, co));
        }
        coeffs = next;
    }
    Poly::from_coeffs(coeffs)
}

/// X^r B(X^{q-1}) in sparse form: one term r + i(q-1) per nonzero b_i.
pub fn f_sparse(ctx: &FieldCtx, r: u64, b: &Poly) -> SparsePoly {
    let q = ctx.q();
    SparsePoly::new(
        b.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (r + i as u64 * (q - 1), c))
            .collect(),
    )
}

/// g_0(x) = x^r B(x)^{q-1} for x in mu_{q+1}. Returns None when B(x) = 0 —
/// the "root in mu_{q+1}" outcome the reduction lemmas branch on (the raw
/// field value there is 0, which lies outside mu_{q+1}).
pub fn g0_eval(ctx: &FieldCtx, r: i64, b: &Poly, x: Fq2) -> Option<Fq2> {
    debug_assert!(ctx.in_mu(x));
    let bx = b.eval(ctx, x);
    if bx.is_zero() {
        return None;
    }
    let xr = ctx.pow_signed(x, r).expect("x is a unit");
    Some(ctx.mul(xr, ctx.pow(bx, ctx.q() - 1)))
}

/// The rational map g(X) = X^r B^(q)(1/X) / B(X) in reduced form. For
/// r >= deg(B) the numerator is the coefficient reversal at level r; for
/// smaller (or negative) r both sides are first multiplied by X^{deg(B)-r}.
pub fn g_map(ctx: &FieldCtx, r: i64, b: &Poly) -> Result<RationalMap, Error> {
    let d = b.degree().ok_or(Error::ZeroDenominator)? as i64;
    let s = r.max(d);
    let num = b.reversal_num(ctx, s as usize)?;
    let den = if s > r {
        b.shift_up((s - r) as usize)
    } else {
        b.clone()
    };
    RationalMap::build(ctx, num, den)
}

/// Named special-case parameterizations of the two families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialCase {
    /// thm1 with b = ±a and v = -u (odd characteristic only).
    Fflw1,
    /// thm2 with b = ±a and v^{q+1} = -1 (odd characteristic only).
    Fflw2,
    /// thm1 with q even, a = b = 1 and {u, v} the two elements of F_4 \ F_2.
    Puw8,
    /// thm1 with q even, a = v, b = u and {u, v} the two elements of F_4 \ F_2.
    Puw9,
    /// thm1 with a = (-b)^n and u = v b^{q-1}.
    Wydm35Zr12,
    /// thm2 with a = -1/v and b = 1/v^n.
    Wydm33Zr11,
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SpecialCase::Fflw1 => "FFLW1",
            SpecialCase::Fflw2 => "FFLW2",
            SpecialCase::Puw8 => "PUW8",
            SpecialCase::Puw9 => "PUW9",
            SpecialCase::Wydm35Zr12 => "WYDM35_ZR12",
            SpecialCase::Wydm33Zr11 => "WYDM33_ZR11",
        };
        write!(f, "{name}")
    }
}

impl FromStr for SpecialCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().as_str() {
            "FFLW1" => Ok(SpecialCase::Fflw1),
            "FFLW2" => Ok(SpecialCase::Fflw2),
            "PUW8" => Ok(SpecialCase::Puw8),
            "PUW9" => Ok(SpecialCase::Puw9),
            "WYDM35_ZR12" => Ok(SpecialCase::Wydm35Zr12),
            "WYDM33_ZR11" => Ok(SpecialCase::Wydm33Zr11),
            other => Err(Error::Parse(format!("unknown special case {other:?}"))),
        }
    }
}

/// Free parameters for [`special_case`]. Each case reads the slots it needs
/// and derives the rest from its constraint set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialCaseArgs {
    pub r: u64,
    pub n: u64,
    /// Selects b = -a instead of b = a in the FFLW cases.
    pub minus: bool,
    pub u: Option<Fq2>,
    pub v: Option<Fq2>,
    pub a: Option<Fq2>,
    pub b: Option<Fq2>,
}

impl Default for SpecialCaseArgs {
    fn default() -> Self {
        SpecialCaseArgs {
            r: 1,
            n: 1,
            minus: false,
            u: None,
            v: None,
            a: None,
            b: None,
        }
    }
}

/// Instantiates a named special case, validating its constraint set on top
/// of the family invariants.
pub fn special_case(
    ctx: &FieldCtx,
    case: SpecialCase,
    args: &SpecialCaseArgs,
) -> Result<FamilyParams, Error> {
    let (r, n) = (args.r, args.n);
    match case {
        SpecialCase::Fflw1 => {
            if ctx.p() == 2 {
                return Err(Error::SpecialCase(
                    "FFLW1 needs odd characteristic: v = -u collapses onto u in char 2".into(),
                ));
            }
            let u = args
                .u
                .ok_or_else(|| Error::SpecialCase("FFLW1 needs u".into()))?;
            let a = args.a.unwrap_or(Fq2::ONE);
            let b = if args.minus { ctx.neg(a) } else { a };
            FamilyParams::new(ctx, FamilyKind::Thm1 { u, v: ctx.neg(u) }, r, n, a, b)
        }
        SpecialCase::Fflw2 => {
            if ctx.p() == 2 {
                return Err(Error::SpecialCase(
                    "FFLW2 needs odd characteristic: v^(q+1) = -1 = 1 puts v in mu_(q+1)".into(),
                ));
            }
            let minus_one = ctx.neg(Fq2::ONE);
            let v = match args.v {
                Some(v) => v,
                None => ctx.solve_norm(minus_one)?,
            };
            if ctx.pow(v, ctx.q() + 1) != minus_one {
                return Err(Error::SpecialCase("FFLW2 needs v^(q+1) = -1".into()));
            }
            let a = args.a.unwrap_or(Fq2::ONE);
            let b = if args.minus { ctx.neg(a) } else { a };
            FamilyParams::new(ctx, FamilyKind::Thm2 { v }, r, n, a, b)
        }
        SpecialCase::Puw8 | SpecialCase::Puw9 => {
            let (w1, w2) = ctx.f4_pair()?;
            if !ctx.in_mu(w1) {
                return Err(Error::SpecialCase(
                    "F_4 \\ F_2 lies in mu_(q+1) only when 3 divides q+1 (odd k)".into(),
                ));
            }
            let (u, v) = (w1, w2);
            let (a, b) = match case {
                SpecialCase::Puw8 => (Fq2::ONE, Fq2::ONE),
                _ => (v, u),
            };
            FamilyParams::new(ctx, FamilyKind::Thm1 { u, v }, r, n, a, b)
        }
        SpecialCase::Wydm35Zr12 => {
            let v = args
                .v
                .ok_or_else(|| Error::SpecialCase("WYDM35_ZR12 needs v".into()))?;
            let b = args
                .b
                .ok_or_else(|| Error::SpecialCase("WYDM35_ZR12 needs b".into()))?;
            if b.is_zero() {
                return Err(Error::SpecialCase("WYDM35_ZR12 needs nonzero b".into()));
            }
            let u = ctx.mul(v, ctx.pow(b, ctx.q() - 1));
            let a = ctx.pow(ctx.neg(b), n);
            FamilyParams::new(ctx, FamilyKind::Thm1 { u, v }, r, n, a, b)
        }
        SpecialCase::Wydm33Zr11 => {
            let v = args
                .v
                .ok_or_else(|| Error::SpecialCase("WYDM33_ZR11 needs v".into()))?;
            let a = ctx.neg(ctx.inv(v)?);
            let b = ctx.inv(ctx.pow(v, n))?;
            FamilyParams::new(ctx, FamilyKind::Thm2 { v }, r, n, a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::permutes_fq2;
    use std::sync::OnceLock;

    fn f4() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(2, 1).unwrap())
    }

    fn f9() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(3, 1).unwrap())
    }

    fn f1024() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(2, 5).unwrap())
    }

    fn thm1(ctx: &FieldCtx, r: u64, n: u64, u: Fq2, v: Fq2, a: Fq2, b: Fq2) -> FamilyParams {
        FamilyParams::new(ctx, FamilyKind::Thm1 { u, v }, r, n, a, b).unwrap()
    }

    #[test]
    fn params_validation() {
        let ctx = f9();
        let mu = ctx.mu_elements();
        let (u, v) = (mu[0], mu[1]);
        assert!(FamilyParams::new(ctx, FamilyKind::Thm1 { u, v }, 1, 1, Fq2::ONE, Fq2::ONE).is_ok());
        // r not congruent to n
        assert!(FamilyParams::new(ctx, FamilyKind::Thm1 { u, v }, 2, 1, Fq2::ONE, Fq2::ONE).is_err());
        // u = v
        assert!(FamilyParams::new(ctx, FamilyKind::Thm1 { u, v: u }, 1, 1, Fq2::ONE, Fq2::ONE).is_err());
        // zero coefficient
        assert!(FamilyParams::new(ctx, FamilyKind::Thm1 { u, v }, 1, 1, Fq2::ZERO, Fq2::ONE).is_err());
        // thm2 with v in mu
        assert!(FamilyParams::new(ctx, FamilyKind::Thm2 { v: u }, 1, 1, Fq2::ONE, Fq2::ONE).is_err());
        // thm2 valid with v = generator
        assert!(FamilyParams::new(
            ctx,
            FamilyKind::Thm2 { v: ctx.generator() },
            1,
            1,
            Fq2::ONE,
            Fq2::ONE
        )
        .is_ok());
    }

    #[test]
    fn b_poly_char2_cancellation() {
        // n = 1, a = b = 1, q even: B = 2X + (u+v) = u + v, a constant.
        let ctx = f4();
        let (u, v) = ctx.f4_pair().unwrap();
        let params = thm1(ctx, 1, 1, u, v, Fq2::ONE, Fq2::ONE);
        let b = params.b_poly(ctx);
        assert_eq!(b.degree(), Some(0));
        assert_eq!(b.coeff(0), ctx.add(u, v));
    }

    #[test]
    fn b_poly_odd_char_linear() {
        let ctx = f9();
        let mu = ctx.mu_elements();
        let (u, v) = (mu[0], mu[1]);
        let params = thm1(ctx, 1, 1, u, v, Fq2::ONE, Fq2::ONE);
        let b = params.b_poly(ctx);
        // 2X + (u + v)
        assert_eq!(b.coeff(1), Fq2(2));
        assert_eq!(b.coeff(0), ctx.add(u, v));
    }

    #[test]
    fn b_poly_thm2_example() {
        let ctx = f9();
        let v = ctx.generator();
        let params =
            FamilyParams::new(ctx, FamilyKind::Thm2 { v }, 1, 1, Fq2::ONE, Fq2::ONE).unwrap();
        let b = params.b_poly(ctx);
        // 2X + (v^{-3} + v)
        let v_neg_q = ctx.pow_signed(v, -3).unwrap();
        assert_eq!(b.coeff(1), Fq2(2));
        assert_eq!(b.coeff(0), ctx.add(v_neg_q, v));
    }

    #[test]
    fn f_poly_shapes() {
        let ctx = f9();
        let c = ctx.generator();
        let f = f_sparse(ctx, 5, &Poly::constant(c));
        assert_eq!(f.terms, vec![(5, c)]);

        // char-2 collapse: q=2, r=n=1, a=b=1, {u,v} = F_4 \ F_2 gives f = X
        let ctx2 = f4();
        let (u, v) = ctx2.f4_pair().unwrap();
        let params = thm1(ctx2, 1, 1, u, v, Fq2::ONE, Fq2::ONE);
        assert_eq!(params.f_poly(ctx2).terms, vec![(1, Fq2::ONE)]);

        // sparse degree is r + (q-1) deg(B)
        let mu = ctx.mu_elements();
        let params = thm1(ctx, 2, 2, mu[0], mu[1], Fq2::ONE, Fq2::ONE);
        let bp = params.b_poly(ctx);
        assert_eq!(
            params.f_poly(ctx).degree().unwrap(),
            2 + (ctx.q() - 1) * bp.degree().unwrap() as u64
        );
    }

    #[test]
    fn thm1_criterion_counterexample_params_pass() {
        let ctx = f1024();
        let (u, v) = ctx.f4_pair().unwrap();
        let params = thm1(ctx, 44, 11, u, v, Fq2::ONE, Fq2::ONE);
        assert!(params.criterion(ctx));
    }

    #[test]
    fn thm1_criterion_gcd_violation() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let mu = ctx.mu_elements();
        let params = thm1(&ctx, 2, 2, mu[0], mu[1], Fq2::ONE, Fq2::ONE);
        let detail = params.criterion_detail(&ctx);
        assert!(!detail.gcd_r_ok && !detail.gcd_n_ok);
        assert!(!params.criterion(&ctx));
    }

    #[test]
    fn thm1_degenerate_case_is_rejected_and_oracle_agrees() {
        // q = 2, r = n = 1, a = 1, b = omega, u = 1, v = omega:
        // (b/a)^{q-1} = omega = (v/u)^n, so the criterion fails.
        let ctx = f4();
        let omega = Fq2(2);
        let params = thm1(ctx, 1, 1, Fq2::ONE, omega, Fq2::ONE, omega);
        assert!(!params.criterion(ctx));
        assert!(!permutes_fq2(ctx, &params.f_poly(ctx)).is_permutation);
        assert!(matches!(params.decompose(ctx), Err(Error::DegenerateFamily)));
    }

    #[test]
    fn thm2_criterion_cases() {
        let ctx = f9();
        let v = ctx.generator();
        // b = a / v^n makes b v^n / a = 1, inside mu
        let a = Fq2::ONE;
        let b = ctx.inv(ctx.pow(v, 1)).unwrap();
        let params = FamilyParams::new(ctx, FamilyKind::Thm2 { v }, 1, 1, a, b).unwrap();
        assert!(!params.criterion_detail(ctx).nondegenerate);

        // gcd(n, q+1) violation at q = 3, r = n = 2
        let params = FamilyParams::new(ctx, FamilyKind::Thm2 { v }, 2, 2, Fq2::ONE, Fq2::ONE).unwrap();
        assert!(!params.criterion_detail(ctx).gcd_n_ok);

        // the valid instance permutes F_9 and the criterion says so
        let params = FamilyParams::new(ctx, FamilyKind::Thm2 { v }, 1, 1, Fq2::ONE, Fq2::ONE).unwrap();
        assert!(params.criterion(ctx));
        assert!(permutes_fq2(ctx, &params.f_poly(ctx)).is_permutation);
    }

    #[test]
    fn g0_eval_basics() {
        let ctx = f9();
        for x in ctx.mu_elements() {
            assert_eq!(g0_eval(ctx, 3, &Poly::one(), x), Some(ctx.pow(x, 3)));
            // r = 0 with nonzero B lands in mu
            let b = Poly::x_plus(ctx.generator());
            if let Some(y) = g0_eval(ctx, 0, &b, x) {
                assert!(ctx.in_mu(y));
            }
            // root in mu reported as None
            let root_at_x = Poly::x_plus(ctx.neg(x));
            assert_eq!(g0_eval(ctx, 1, &root_at_x, x), None);
        }
    }

    #[test]
    fn g0_permutes_mu_iff_nondegenerate_and_gcd_n_holds_q4() {
        use crate::oracle::permutes_mu;
        let ctx = FieldCtx::new(2, 2).unwrap();
        let mu = ctx.mu_elements();
        for &u in &mu {
            for &v in &mu {
                if u == v {
                    continue;
                }
                for n in 1..=ctx.q() + 1 {
                    for be in 1..ctx.order() {
                        let b = Fq2(be as u32);
                        let params = thm1(&ctx, n, n, u, v, Fq2::ONE, b);
                        let detail = params.criterion_detail(&ctx);
                        let bp = params.b_poly(&ctx);
                        let g0_perm = permutes_mu(&ctx, |x| {
                            ProjPoint::Finite(
                                g0_eval(&ctx, n as i64, &bp, x).unwrap_or(Fq2::ZERO),
                            )
                        })
                        .is_permutation;
                        assert_eq!(g0_perm, detail.nondegenerate && detail.gcd_n_ok);
                    }
                }
            }
        }
    }

    #[test]
    fn g_map_shapes() {
        let ctx = f9();
        // B = 1, r = n: the map X^n
        let g = g_map(ctx, 4, &Poly::one()).unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(g.num(), &Poly::x_power(4));

        // degenerate thm1 params give a constant map
        let ctx2 = f4();
        let omega = Fq2(2);
        let params = thm1(ctx2, 1, 1, Fq2::ONE, omega, Fq2::ONE, omega);
        let g = g_map(ctx2, 1, &params.b_poly(ctx2)).unwrap();
        assert_eq!(g.degree(), 0);

        // valid params give degree exactly n
        let ctx = f1024();
        let (u, v) = ctx.f4_pair().unwrap();
        let params = thm1(ctx, 44, 11, u, v, Fq2::ONE, Fq2::ONE);
        let g = g_map(ctx, 11, &params.b_poly(ctx)).unwrap();
        assert_eq!(g.degree(), 11);

        assert!(matches!(
            g_map(ctx, 1, &Poly::zero()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn g_map_handles_r_below_degree() {
        // r < deg(B): the map is X^r B^(q)(1/X)/B with both sides scaled by
        // X^{deg B - r}; check pointwise against the raw definition on units.
        let ctx = f9();
        let b = Poly::from_coeffs(vec![Fq2(4), Fq2(2), Fq2::ONE, Fq2(5)]);
        for r in [-2i64, 0, 1, 2] {
            let g = g_map(ctx, r, &b).unwrap();
            for x in ctx.units() {
                let bx = b.eval(ctx, x);
                if bx.is_zero() {
                    continue;
                }
                let raw = ctx
                    .mul(
                        ctx.pow_signed(x, r).unwrap(),
                        ctx.div(b.frob(ctx).eval(ctx, ctx.inv(x).unwrap()), bx).unwrap(),
                    );
                assert_eq!(g.eval(ctx, ProjPoint::Finite(x)), ProjPoint::Finite(raw));
            }
        }
    }

    #[test]
    fn decompose_identity_q32_counterexample() {
        let ctx = f1024();
        let (u, v) = ctx.f4_pair().unwrap();
        let params = thm1(ctx, 44, 11, u, v, Fq2::ONE, Fq2::ONE);
        let d = params.decompose(ctx).unwrap();
        let g = g_map(ctx, params.n() as i64, &params.b_poly(ctx)).unwrap();
        for x in ctx.mu_elements() {
            let pt = ProjPoint::Finite(x);
            assert_eq!(d.eval_fast(ctx, pt), g.eval(ctx, pt));
        }
    }

    #[test]
    fn decompose_identity_thm2_q3() {
        let ctx = f9();
        let v = ctx.generator();
        let params =
            FamilyParams::new(ctx, FamilyKind::Thm2 { v }, 1, 1, Fq2::ONE, Fq2::ONE).unwrap();
        let d = params.decompose(ctx).unwrap();
        let g = g_map(ctx, 1, &params.b_poly(ctx)).unwrap();
        for x in ctx.mu_elements() {
            let pt = ProjPoint::Finite(x);
            assert_eq!(d.eval_fast(ctx, pt), g.eval(ctx, pt));
        }
    }

    #[test]
    fn decompose_n1_is_plain_mobius_composition() {
        let ctx = f9();
        let mu = ctx.mu_elements();
        let params = thm1(ctx, 1, 1, mu[0], mu[1], Fq2::ONE, ctx.generator());
        if let Ok(d) = params.decompose(ctx) {
            for x in ctx.elements() {
                let pt = ProjPoint::Finite(x);
                let expected = d.eta().eval(ctx, d.rho().eval(ctx, pt));
                assert_eq!(d.eval_fast(ctx, pt), expected);
            }
        }
    }

    #[test]
    fn eval_fast_through_a_pole_of_rho() {
        // rho = (X+u)/(X+v) sends x = -v to infinity; eval_fast must follow
        // the projective convention and agree with the reduced map.
        let ctx = f9();
        let mu = ctx.mu_elements();
        let (u, v) = (mu[0], mu[1]);
        let params = thm1(ctx, 1, 1, u, v, Fq2::ONE, ctx.generator());
        let d = params.decompose(ctx).unwrap();
        let pole = ctx.neg(v);
        let g = g_map(ctx, 1, &params.b_poly(ctx)).unwrap();
        assert_eq!(
            d.eval_fast(ctx, ProjPoint::Finite(pole)),
            g.eval(ctx, ProjPoint::Finite(pole))
        );
        assert_eq!(
            d.eval_fast(ctx, ProjPoint::Finite(pole)),
            d.eta().eval(ctx, ProjPoint::Infinity)
        );
    }

    #[test]
    fn congruence_insensitivity_of_criterion_and_oracle() {
        let ctx = f9();
        let mu = ctx.mu_elements();
        let qp1 = ctx.q() + 1;
        for n in 1..=qp1 {
            for be in 1..ctx.order() {
                let params = thm1(ctx, n, n, mu[0], mu[2], Fq2::ONE, Fq2(be as u32));
                let bumped = thm1(ctx, n + qp1, n, mu[0], mu[2], Fq2::ONE, Fq2(be as u32));
                assert_eq!(params.criterion(ctx), bumped.criterion(ctx));
                assert_eq!(
                    permutes_fq2(ctx, &params.f_poly(ctx)).is_permutation,
                    permutes_fq2(ctx, &bumped.f_poly(ctx)).is_permutation
                );
            }
        }
    }

    #[test]
    fn scaling_invariance_of_criterion_and_oracle() {
        let ctx = f9();
        let mu = ctx.mu_elements();
        for ae in 1..ctx.order() {
            let lambda = Fq2(ae as u32);
            let base = thm1(ctx, 2, 2, mu[0], mu[1], Fq2::ONE, ctx.generator());
            let scaled = thm1(
                ctx,
                2,
                2,
                mu[0],
                mu[1],
                ctx.mul(Fq2::ONE, lambda),
                ctx.mul(ctx.generator(), lambda),
            );
            assert_eq!(base.criterion(ctx), scaled.criterion(ctx));
            assert_eq!(
                permutes_fq2(ctx, &base.f_poly(ctx)).is_permutation,
                permutes_fq2(ctx, &scaled.f_poly(ctx)).is_permutation
            );
        }
    }

    #[test]
    fn special_case_puw8_q32_gives_counterexample_params() {
        let ctx = f1024();
        let args = SpecialCaseArgs { r: 44, n: 11, ..Default::default() };
        let params = special_case(ctx, SpecialCase::Puw8, &args).unwrap();
        let (u, v) = ctx.f4_pair().unwrap();
        assert_eq!(params.kind(), FamilyKind::Thm1 { u, v });
        assert_eq!((params.a(), params.b()), (Fq2::ONE, Fq2::ONE));
        assert_eq!((params.r(), params.n()), (44, 11));
    }

    #[test]
    fn special_case_puw9_q128() {
        let ctx = FieldCtx::new(2, 7).unwrap();
        let args = SpecialCaseArgs { r: 172, n: 43, ..Default::default() };
        let params = special_case(&ctx, SpecialCase::Puw9, &args).unwrap();
        let (u, v) = ctx.f4_pair().unwrap();
        assert_eq!(params.a(), v);
        assert_eq!(params.b(), u);
        assert!(params.criterion(&ctx));
    }

    #[test]
    fn special_case_constraint_errors() {
        // PUW8 needs characteristic 2
        let ctx = f9();
        assert!(special_case(ctx, SpecialCase::Puw8, &SpecialCaseArgs::default()).is_err());
        // PUW8 needs 3 | q+1, which fails for q = 4
        let ctx4 = FieldCtx::new(2, 2).unwrap();
        assert!(special_case(&ctx4, SpecialCase::Puw8, &SpecialCaseArgs::default()).is_err());
        // FFLW1 needs odd characteristic
        let ctx2 = f4();
        let args = SpecialCaseArgs { u: Some(Fq2::ONE), ..Default::default() };
        assert!(special_case(ctx2, SpecialCase::Fflw1, &args).is_err());
    }

    #[test]
    fn special_case_fflw1_valid_for_odd_q() {
        let ctx = f9();
        for &u in &ctx.mu_elements() {
            let args = SpecialCaseArgs { r: 1, n: 1, u: Some(u), ..Default::default() };
            let params = special_case(ctx, SpecialCase::Fflw1, &args).unwrap();
            match params.kind() {
                FamilyKind::Thm1 { u: pu, v } => {
                    assert_eq!(pu, u);
                    assert_eq!(v, ctx.neg(u));
                    assert!(ctx.in_mu(v));
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn special_case_fflw2_default_v_has_norm_minus_one() {
        let ctx = f9();
        let args = SpecialCaseArgs { minus: true, ..Default::default() };
        let params = special_case(ctx, SpecialCase::Fflw2, &args).unwrap();
        match params.kind() {
            FamilyKind::Thm2 { v } => {
                assert_eq!(ctx.pow(v, ctx.q() + 1), ctx.neg(Fq2::ONE));
            }
            _ => unreachable!(),
        }
        assert_eq!(params.b(), ctx.neg(params.a()));
    }

    #[test]
    fn special_case_wydm_constraints_hold() {
        let ctx = f9();
        let v_mu = ctx.mu_elements()[1];
        let b = ctx.generator(); // outside F_q, so u != v
        let args = SpecialCaseArgs { r: 2, n: 2, v: Some(v_mu), b: Some(b), ..Default::default() };
        let params = special_case(ctx, SpecialCase::Wydm35Zr12, &args).unwrap();
        assert_eq!(params.a(), ctx.pow(ctx.neg(b), 2));
        match params.kind() {
            FamilyKind::Thm1 { u, v } => {
                assert_eq!(u, ctx.mul(v, ctx.pow(b, ctx.q() - 1)));
            }
            _ => unreachable!(),
        }

        let v = ctx.generator();
        let args = SpecialCaseArgs { r: 1, n: 1, v: Some(v), ..Default::default() };
        let params = special_case(ctx, SpecialCase::Wydm33Zr11, &args).unwrap();
        assert_eq!(params.a(), ctx.neg(ctx.inv(v).unwrap()));
        assert_eq!(params.b(), ctx.inv(ctx.pow(v, 1)).unwrap());

        // b in F_q makes u = v: unsatisfiable
        let args = SpecialCaseArgs { v: Some(v_mu), b: Some(Fq2(2)), ..Default::default() };
        assert!(special_case(ctx, SpecialCase::Wydm35Zr12, &args).is_err());
    }

    #[test]
    fn params_line_round_trip() {
        let ctx = f1024();
        let (u, v) = ctx.f4_pair().unwrap();
        let params = thm1(ctx, 44, 11, u, v, Fq2::ONE, Fq2::ONE);
        let line = params.to_line(ctx);
        assert!(line.starts_with("family=thm1 p=2 k=5 r=44 n=11 u="));
        let (ctx2, parsed) = FamilyParams::parse_line(&line).unwrap();
        assert_eq!(ctx2.modulus(), ctx.modulus());
        assert_eq!(parsed, params);

        let ctx9 = f9();
        let params = FamilyParams::new(
            ctx9,
            FamilyKind::Thm2 { v: ctx9.generator() },
            1,
            1,
            Fq2::ONE,
            Fq2(5),
        )
        .unwrap();
        let (_, parsed) = FamilyParams::parse_line(&params.to_line(ctx9)).unwrap();
        assert_eq!(parsed, params);
    }

    #[test]
    fn gcd_product_clause_equals_split_clauses() {
        // gcd(rn, q-1) = 1 iff gcd(r, q-1) = 1 and gcd(n, q-1) = 1
        for m in 1..60u64 {
            for r in 1..40u64 {
                for n in 1..40u64 {
                    assert_eq!(gcd(r * n, m) == 1, gcd(r, m) == 1 && gcd(n, m) == 1);
                }
            }
        }
    }
}

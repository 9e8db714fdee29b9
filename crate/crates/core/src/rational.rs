//! Reduced rational maps N(X)/D(X) over F_{q^2} with projective evaluation.

use crate::error::Error;
use crate::field::{FieldCtx, Fq2};
use crate::mobius::{Mobius, ProjPoint};
use crate::poly::Poly;

/// A rational map stored in reduced form: gcd(num, den) = 1 and den monic
/// (the leading-coefficient normalization is absorbed into num). The degree
/// of the map is max(deg num, deg den).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
    degree: usize,
}

impl RationalMap {
    /// Divides out gcd(num, den) and makes den monic.
    pub fn build(ctx: &FieldCtx, num: Poly, den: Poly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = Poly::gcd(ctx, &num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            let (nq, nr) = num.divrem(ctx, &g)?;
            let (dq, dr) = den.divrem(ctx, &g)?;
            debug_assert!(nr.is_zero() && dr.is_zero());
            (nq, dq)
        };
        let lc_inv = ctx.inv(den.leading()).expect("nonzero denominator");
        if lc_inv != Fq2::ONE {
            num = num.scale(ctx, lc_inv);
            den = den.scale(ctx, lc_inv);
        }
        let degree = num
            .degree()
            .unwrap_or(0)
            .max(den.degree().expect("nonzero denominator"));
        Ok(RationalMap { num, den, degree })
    }

    /// The power map X^n.
    pub fn x_power(n: usize) -> Self {
        RationalMap {
            num: Poly::x_power(n),
            den: Poly::one(),
            degree: n,
        }
    }

    pub fn from_mobius(ctx: &FieldCtx, m: &Mobius) -> Self {
        let (a, b, c, d) = m.entries();
        Self::build(
            ctx,
            Poly::from_coeffs(vec![b, a]),
            Poly::from_coeffs(vec![d, c]),
        )
        .expect("(c, d) != (0, 0) for a valid Mobius map")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// max(deg num, deg den) of the reduced form.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0
    }

    /// Projective evaluation. At a pole (den(x) = 0 and, by coprimality,
    /// num(x) != 0) the value is infinity. At infinity the value is decided
    /// by comparing degrees, with the ratio of leading coefficients in the
    /// balanced case.
    pub fn eval(&self, ctx: &FieldCtx, pt: ProjPoint) -> ProjPoint {
        match pt {
            ProjPoint::Finite(x) => {
                let d = self.den.eval(ctx, x);
                if d.is_zero() {
                    ProjPoint::Infinity
                } else {
                    let n = self.num.eval(ctx, x);
                    ProjPoint::Finite(ctx.div(n, d).expect("nonzero denominator"))
                }
            }
            ProjPoint::Infinity => {
                let dd = self.den.degree().expect("nonzero denominator");
                match self.num.degree() {
                    None => ProjPoint::Finite(Fq2::ZERO),
                    Some(dn) if dn > dd => ProjPoint::Infinity,
                    Some(dn) if dn < dd => ProjPoint::Finite(Fq2::ZERO),
                    Some(_) => ProjPoint::Finite(
                        ctx.div(self.num.leading(), self.den.leading())
                            .expect("nonzero leading coefficient"),
                    ),
                }
            }
        }
    }

    /// m(g(X)): substitutes g into the degree-one map and reduces.
    pub fn compose_mobius_outer(ctx: &FieldCtx, m: &Mobius, g: &RationalMap) -> RationalMap {
        let (a, b, c, d) = m.entries();
        let num = g.num.scale(ctx, a).add(ctx, &g.den.scale(ctx, b));
        let den = g.num.scale(ctx, c).add(ctx, &g.den.scale(ctx, d));
        Self::build(ctx, num, den)
            .expect("c·N + d·D vanishes only if N/D is constant -b/a = -d/c, impossible for degree one")
    }

    /// g(m(X)): substitutes the degree-one map into g, clearing denominators
    /// with the formal degree max(deg num, deg den), then reduces.
    pub fn compose_mobius_inner(ctx: &FieldCtx, g: &RationalMap, m: &Mobius) -> RationalMap {
        let (a, b, c, d) = m.entries();
        let t = g.degree;
        let lin_num = Poly::from_coeffs(vec![b, a]);
        let lin_den = Poly::from_coeffs(vec![d, c]);
        let mut num_pows = Vec::with_capacity(t + 1);
        let mut den_pows = Vec::with_capacity(t + 1);
        num_pows.push(Poly::one());
        den_pows.push(Poly::one());
        for i in 1..=t {
            num_pows.push(num_pows[i - 1].mul(ctx, &lin_num));
            den_pows.push(den_pows[i - 1].mul(ctx, &lin_den));
        }
        let subst = |p: &Poly| -> Poly {
            let mut acc = Poly::zero();
            for (i, &coeff) in p.coeffs().iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let term = num_pows[i].mul(ctx, &den_pows[t - i]).scale(ctx, coeff);
                acc = acc.add(ctx, &term);
            }
            acc
        };
        Self::build(ctx, subst(&g.num), subst(&g.den))
            .expect("the substituted denominator vanishes only for a zero denominator")
    }
}

/// n-th power on P^1: finite points by field exponentiation (so 0^n = 0 for
/// n >= 1), and infinity^n = infinity.
pub fn proj_pow(ctx: &FieldCtx, pt: ProjPoint, n: u64) -> ProjPoint {
    debug_assert!(n >= 1);
    match pt {
        ProjPoint::Finite(x) => ProjPoint::Finite(ctx.pow(x, n)),
        ProjPoint::Infinity => ProjPoint::Infinity,
    }
}

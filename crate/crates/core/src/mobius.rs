//! Degree-one rational functions acting on the projective line P^1(F_{q^2}).

use crate::error::Error;
use crate::field::{FieldCtx, Fq2};

/// A point of P^1(F_{q^2}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Finite(Fq2),
    Infinity,
}

impl ProjPoint {
    pub fn finite(self) -> Option<Fq2> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }
}

/// The map X -> (a·X + b)/(c·X + d) with a·d != b·c, a bijection of P^1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mobius {
    a: Fq2,
    b: Fq2,
    c: Fq2,
    d: Fq2,
}

impl Mobius {
    /// Validates the degree-one condition a·d != b·c.
    pub fn new(ctx: &FieldCtx, a: Fq2, b: Fq2, c: Fq2, d: Fq2) -> Result<Self, Error> {
        if ctx.mul(a, d) == ctx.mul(b, c) {
            return Err(Error::DegenerateMobius);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Self {
        Mobius {
            a: Fq2::ONE,
            b: Fq2::ZERO,
            c: Fq2::ZERO,
            d: Fq2::ONE,
        }
    }

    /// (a, b, c, d).
    pub fn entries(&self) -> (Fq2, Fq2, Fq2, Fq2) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn det(&self, ctx: &FieldCtx) -> Fq2 {
        ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))
    }

    /// Projective evaluation: poles go to infinity, and infinity maps to a/c
    /// (or stays at infinity when c = 0).
    pub fn eval(&self, ctx: &FieldCtx, pt: ProjPoint) -> ProjPoint {
        match pt {
            ProjPoint::Finite(x) => {
                let den = ctx.add(ctx.mul(self.c, x), self.d);
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    let num = ctx.add(ctx.mul(self.a, x), self.b);
                    ProjPoint::Finite(ctx.div(num, den).expect("nonzero denominator"))
                }
            }
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(ctx.div(self.a, self.c).expect("nonzero denominator"))
                }
            }
        }
    }

    /// self ∘ inner, by 2x2 matrix multiplication. The determinant is the
    /// product of the two, hence nonzero.
    pub fn compose(&self, ctx: &FieldCtx, inner: &Mobius) -> Mobius {
        Mobius {
            a: ctx.add(ctx.mul(self.a, inner.a), ctx.mul(self.b, inner.c)),
            b: ctx.add(ctx.mul(self.a, inner.b), ctx.mul(self.b, inner.d)),
            c: ctx.add(ctx.mul(self.c, inner.a), ctx.mul(self.d, inner.c)),
            d: ctx.add(ctx.mul(self.c, inner.b), ctx.mul(self.d, inner.d)),
        }
    }

    /// Inverse up to a scalar: (d·X - b)/(-c·X + a).
    pub fn inverse(&self, ctx: &FieldCtx) -> Mobius {
        Mobius {
            a: self.d,
            b: ctx.neg(self.b),
            c: ctx.neg(self.c),
            d: self.a,
        }
    }

    /// "a,b;c,d" with integer encodings.
    pub fn to_text(&self) -> String {
        format!(
            "{},{};{},{}",
            self.a.enc(),
            self.b.enc(),
            self.c.enc(),
            self.d.enc()
        )
    }

    pub fn parse_text(ctx: &FieldCtx, s: &str) -> Result<Mobius, Error> {
        let (numer, denom) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("Mobius text {s:?} is not of the form a,b;c,d")))?;
        let parse_pair = |part: &str| -> Result<(Fq2, Fq2), Error> {
            let (x, y) = part
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected two comma-separated entries in {part:?}")))?;
            Ok((ctx.parse_element(x)?, ctx.parse_element(y)?))
        };
        let (a, b) = parse_pair(numer)?;
        let (c, d) = parse_pair(denom)?;
        Mobius::new(ctx, a, b, c, d)
    }
}

/// Degree-one test for (a·X + b)/(c·X + d): true iff a·d != b·c. Errors when
/// (c, d) = (0, 0), which does not define a rational function.
pub fn is_degree_one(ctx: &FieldCtx, a: Fq2, b: Fq2, c: Fq2, d: Fq2) -> Result<bool, Error> {
    if c.is_zero() && d.is_zero() {
        return Err(Error::ZeroDenominatorPair);
    }
    Ok(ctx.mul(a, d) != ctx.mul(b, c))
}

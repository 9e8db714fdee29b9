//! Polynomials over F_{q^2}.
//!
//! `Poly` stores coefficients little-endian with no trailing zeros, so the
//! zero polynomial is the empty vector and equality is coefficient-wise.

use crate::error::Error;
use crate::field::{FieldCtx, Fq2};

/// Dense univariate polynomial over F_{q^2}; `coeffs[i]` multiplies X^i.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fq2>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Fq2::ONE] }
    }

    /// The constant polynomial c (zero polynomial when c = 0).
    pub fn constant(c: Fq2) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial X^n.
    pub fn x_power(n: usize) -> Self {
        let mut coeffs = vec![Fq2::ZERO; n + 1];
        coeffs[n] = Fq2::ONE;
        Poly { coeffs }
    }

    /// The linear polynomial X + c.
    pub fn x_plus(c: Fq2) -> Self {
        Poly { coeffs: vec![c, Fq2::ONE] }
    }

    /// Builds from little-endian coefficients, stripping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Fq2>) -> Self {
        while coeffs.last() == Some(&Fq2::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fq2] {
        &self.coeffs
    }

    /// Coefficient of X^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fq2 {
        self.coeffs.get(i).copied().unwrap_or(Fq2::ZERO)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> Fq2 {
        self.coeffs.last().copied().unwrap_or(Fq2::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fq2::ONE
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldCtx, x: Fq2) -> Fq2 {
        self.coeffs
            .iter()
            .rev()
            .fold(Fq2::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq2::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(coeffs[i + j], ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Multiplies every coefficient by c.
    pub fn scale(&self, ctx: &FieldCtx, c: Fq2) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// Multiplies by X^n.
    pub fn shift_up(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq2::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Divides by the leading coefficient; leaves the zero polynomial alone.
    pub fn make_monic(&self, ctx: &FieldCtx) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = ctx.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(ctx, inv)
    }

    /// Long division: returns (quotient, remainder) with deg r < deg divisor.
    pub fn divrem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly), Error> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lc_inv = ctx.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Fq2::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let f = ctx.mul(c, lc_inv);
            quo[i - dd] = f;
            rem[i] = Fq2::ZERO;
            for j in 0..dd {
                rem[i - dd + j] = ctx.sub(rem[i - dd + j], ctx.mul(f, divisor.coeffs[j]));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm, with monic
    /// normalization at every step. gcd(0, 0) = 0.
    pub fn gcd(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
        let mut r0 = a.make_monic(ctx);
        let mut r1 = b.make_monic(ctx);
        while !r1.is_zero() {
            let (_, r2) = r0.divrem(ctx, &r1).expect("divisor is nonzero");
            r0 = r1;
            r1 = r2.make_monic(ctx);
        }
        r0
    }

    /// Coefficient-wise q-power Frobenius B -> B^(q); an involution that
    /// preserves degree.
    pub fn frob(&self, ctx: &FieldCtx) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| ctx.frobenius(c)).collect(),
        }
    }

    /// The polynomial X^n B^(q)(1/X) = sum_i b_i^q X^(n-i); defined for a
    /// nonzero B with n >= deg(B). Its degree is n exactly when b_0 != 0.
    pub fn reversal_num(&self, ctx: &FieldCtx, n: usize) -> Result<Poly, Error> {
        let d = self.degree().ok_or(Error::ReversalDegree)?;
        if n < d {
            return Err(Error::ReversalDegree);
        }
        let mut out = vec![Fq2::ZERO; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[n - i] = ctx.frobenius(c);
        }
        Ok(Poly::from_coeffs(out))
    }

    /// Comma-separated little-endian encodings, e.g. "3,1" for X + 3.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.enc().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the comma-separated element format, validating each entry
    /// against the field.
    pub fn parse_text(ctx: &FieldCtx, s: &str) -> Result<Poly, Error> {
        let coeffs = s
            .split(',')
            .map(|part| ctx.parse_element(part))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// Polynomial in sparse form: (exponent, coefficient) terms with strictly
/// increasing exponents and nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub terms: Vec<(u64, Fq2)>,
}

impl SparsePoly {
    /// Filters zero coefficients; exponents must be strictly increasing.
    pub fn new(terms: Vec<(u64, Fq2)>) -> Self {
        let terms: Vec<(u64, Fq2)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        SparsePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|&(e, _)| e)
    }

    /// sum_i c_i x^(e_i), term by term.
    pub fn eval(&self, ctx: &FieldCtx, x: Fq2) -> Fq2 {
        self.terms.iter().fold(Fq2::ZERO, |acc, &(e, c)| {
            ctx.add(acc, ctx.mul(c, ctx.pow(x, e)))
        })
    }
}

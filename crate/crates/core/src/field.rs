//! Arithmetic in the quadratic extension F_{q^2} of a small prime-power field.
//!
//! A [`FieldCtx`] describes F_{q^2} = F_p[t]/(m(t)) where m is monic
//! irreducible of degree 2k and q = p^k. The subfield F_q is recovered as the
//! fixed set of the Frobenius x -> x^q, so a single modulus carries all three
//! fields. Elements are residue classes of degree < 2k, identified by their
//! integer encoding sum_i c_i p^i (little-endian coefficients).
//!
//! Construction is deterministic: the modulus is the irreducible polynomial of
//! degree 2k with the smallest encoding, and the generator is the element of
//! multiplicative order q^2 - 1 with the smallest encoding. The context
//! precomputes discrete-log tables plus a Zech-logarithm table, after which
//! multiplication, division, exponentiation and addition are all O(1) lookups.
//! Table memory is roughly 12 bytes per field element.

use std::fmt;

use crate::error::Error;

/// Default bound on the number of elements of F_{q^2} (that is, on p^{2k}).
pub const DEFAULT_MAX_ELEMS: u64 = 1 << 26;

/// Hard cap implied by the u32 tables; a configured bound is clamped to this.
const ABS_MAX_ELEMS: u64 = 1 << 31;

const SENTINEL: u32 = u32::MAX;

/// An element of F_{q^2}, stored as its canonical integer encoding
/// `sum_i coeffs[i] * p^i` of the degree < 2k residue representative.
///
/// The encoding is what ordering, I/O and determinism are defined on, so
/// `Ord` compares encodings. Elements are only meaningful relative to the
/// [`FieldCtx`] that produced them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq2(pub(crate) u32);

impl Fq2 {
    pub const ZERO: Fq2 = Fq2(0);
    pub const ONE: Fq2 = Fq2(1);

    /// Integer encoding of the element.
    pub fn enc(self) -> u64 {
        u64::from(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable description of F_{q^2} = F_p[t]/(m(t)) with lookup tables.
///
/// All operations are pure functions of `(&FieldCtx, inputs)`; a context can
/// be shared freely across threads.
pub struct FieldCtx {
    p: u64,
    k: u32,
    q: u64,
    order: u64,
    modulus: Vec<u64>,
    generator: Fq2,
    /// exp[i] = encoding of generator^i, for i in [0, q^2 - 1).
    exp: Vec<u32>,
    /// log[exp[i]] = i; log[0] = SENTINEL.
    log: Vec<u32>,
    /// zech[d] = log(1 + generator^d), SENTINEL when 1 + generator^d = 0.
    zech: Vec<u32>,
    /// log(-1): 0 in characteristic 2, (q^2 - 1)/2 otherwise.
    neg_shift: u64,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldCtx(p={}, k={}, q={}, modulus={})",
            self.p,
            self.k,
            self.q,
            self.format_modulus()
        )
    }
}

impl FieldCtx {
    /// Builds F_{q^2} for q = p^k under the default size bound.
    pub fn new(p: u64, k: u32) -> Result<Self, Error> {
        Self::with_bound(p, k, DEFAULT_MAX_ELEMS)
    }

    /// Builds F_{q^2} for q = p^k, requiring p^{2k} <= max_elems.
    pub fn with_bound(p: u64, k: u32, max_elems: u64) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let bound = max_elems.min(ABS_MAX_ELEMS);
        let n = 2 * k as usize;
        let mut size: u128 = 1;
        for _ in 0..n {
            size *= u128::from(p);
            if size > u128::from(bound) {
                return Err(Error::SizeBound { size, bound });
            }
        }
        let order = size as u64;
        let q = (0..k).fold(1u64, |acc, _| acc * p);

        let modulus = find_modulus(p, n);
        let m1 = order - 1;
        let primes = prime_factors(m1);
        let gen_enc = (2..order)
            .find(|&enc| {
                let x = decode_trim(enc, n, p);
                primes
                    .iter()
                    .all(|&l| direct_pow(&x, m1 / l, &modulus, p) != [1])
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let gen_coeffs = decode_trim(gen_enc, n, p);

        let m1u = m1 as usize;
        let mut exp = vec![0u32; m1u];
        let mut log = vec![SENTINEL; order as usize];
        let mut cur = vec![1u64];
        for (i, slot) in exp.iter_mut().enumerate() {
            let e = encode(&cur, p) as u32;
            *slot = e;
            debug_assert_eq!(log[e as usize], SENTINEL, "generator order too small");
            log[e as usize] = i as u32;
            cur = poly_mul_mod(&cur, &gen_coeffs, &modulus, p);
        }
        debug_assert_eq!(encode(&cur, p), 1);

        let mut zech = vec![SENTINEL; m1u];
        for (d, slot) in zech.iter_mut().enumerate() {
            let e = u64::from(exp[d]);
            let c0 = e % p;
            let s = e - c0 + (c0 + 1) % p;
            if s != 0 {
                *slot = log[s as usize];
            }
        }

        Ok(FieldCtx {
            p,
            k,
            q,
            order,
            modulus,
            generator: Fq2(gen_enc as u32),
            exp,
            log,
            zech,
            neg_shift: if p == 2 { 0 } else { m1 / 2 },
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of elements of F_{q^2}, i.e. q^2.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of the defining modulus, little-endian, monic of degree 2k.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The smallest-encoding element of multiplicative order q^2 - 1.
    pub fn generator(&self) -> Fq2 {
        self.generator
    }

    /// |mu_{q+1}| = q + 1.
    pub fn mu_size(&self) -> u64 {
        self.q + 1
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fq2> + '_ {
        (0..self.order).map(|e| Fq2(e as u32))
    }

    /// All nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = Fq2> + '_ {
        (1..self.order).map(|e| Fq2(e as u32))
    }

    pub fn from_enc(&self, enc: u64) -> Result<Fq2, Error> {
        if enc < self.order {
            Ok(Fq2(enc as u32))
        } else {
            Err(Error::Parse(format!(
                "encoding {enc} out of range for a field of {} elements",
                self.order
            )))
        }
    }

    /// Little-endian coefficient vector of length 2k, entries in [0, p).
    pub fn coeffs(&self, x: Fq2) -> Vec<u64> {
        decode(x.enc(), 2 * self.k as usize, self.p)
    }

    /// Builds an element from little-endian coefficients (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq2, Error> {
        if coeffs.len() > 2 * self.k as usize {
            return Err(Error::Parse(format!(
                "expected at most {} coefficients, got {}",
                2 * self.k,
                coeffs.len()
            )));
        }
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        Ok(Fq2(encode(&reduced, self.p) as u32))
    }

    #[inline]
    fn wrap(&self, i: u64) -> usize {
        let m1 = self.order - 1;
        (if i >= m1 { i - m1 } else { i }) as usize
    }

    #[inline]
    pub fn add(&self, x: Fq2, y: Fq2) -> Fq2 {
        if x.0 == 0 {
            return y;
        }
        if y.0 == 0 {
            return x;
        }
        let m1 = self.order - 1;
        let a = u64::from(self.log[x.0 as usize]);
        let b = u64::from(self.log[y.0 as usize]);
        let d = if b >= a { b - a } else { b + m1 - a };
        let z = self.zech[d as usize];
        if z == SENTINEL {
            Fq2::ZERO
        } else {
            Fq2(self.exp[self.wrap(a + u64::from(z))])
        }
    }

    #[inline]
    pub fn neg(&self, x: Fq2) -> Fq2 {
        if self.p == 2 || x.0 == 0 {
            return x;
        }
        Fq2(self.exp[self.wrap(u64::from(self.log[x.0 as usize]) + self.neg_shift)])
    }

    #[inline]
    pub fn sub(&self, x: Fq2, y: Fq2) -> Fq2 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq2, y: Fq2) -> Fq2 {
        if x.0 == 0 || y.0 == 0 {
            return Fq2::ZERO;
        }
        let a = u64::from(self.log[x.0 as usize]);
        let b = u64::from(self.log[y.0 as usize]);
        Fq2(self.exp[self.wrap(a + b)])
    }

    pub fn inv(&self, x: Fq2) -> Result<Fq2, Error> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let m1 = self.order - 1;
        let a = u64::from(self.log[x.0 as usize]);
        Ok(Fq2(self.exp[self.wrap(m1 - a)]))
    }

    pub fn div(&self, x: Fq2, y: Fq2) -> Result<Fq2, Error> {
        if y.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if x.0 == 0 {
            return Ok(Fq2::ZERO);
        }
        let m1 = self.order - 1;
        let a = u64::from(self.log[x.0 as usize]);
        let b = u64::from(self.log[y.0 as usize]);
        Ok(Fq2(self.exp[self.wrap(a + m1 - b)]))
    }

    /// x^e for a nonnegative exponent. 0^0 = 1 by convention; 0^e = 0 for e > 0.
    #[inline]
    pub fn pow(&self, x: Fq2, e: u64) -> Fq2 {
        if x.0 == 0 {
            return if e == 0 { Fq2::ONE } else { Fq2::ZERO };
        }
        let m1 = self.order - 1;
        let a = u128::from(self.log[x.0 as usize]);
        Fq2(self.exp[(a * u128::from(e) % u128::from(m1)) as usize])
    }

    /// x^e for a signed exponent; the exponent is reduced mod q^2 - 1 when
    /// x != 0. Raising zero to a negative power is an error.
    pub fn pow_signed(&self, x: Fq2, e: i64) -> Result<Fq2, Error> {
        if x.0 == 0 {
            return match e {
                0 => Ok(Fq2::ONE),
                _ if e > 0 => Ok(Fq2::ZERO),
                _ => Err(Error::ZeroToNegativePower),
            };
        }
        let m1 = i128::from(self.order - 1);
        let a = i128::from(self.log[x.0 as usize]);
        let r = (a * i128::from(e)).rem_euclid(m1) as usize;
        Ok(Fq2(self.exp[r]))
    }

    /// The q-power Frobenius x -> x^q; an involution fixing exactly F_q.
    #[inline]
    pub fn frobenius(&self, x: Fq2) -> Fq2 {
        self.pow(x, self.q)
    }

    /// True iff x is a (q+1)-th root of unity (in particular nonzero).
    #[inline]
    pub fn in_mu(&self, x: Fq2) -> bool {
        !x.is_zero() && self.pow(x, self.q + 1) == Fq2::ONE
    }

    /// True iff x lies in the subfield F_q, i.e. x^q = x.
    #[inline]
    pub fn in_fq(&self, x: Fq2) -> bool {
        x.is_zero() || self.pow(x, self.q) == x
    }

    /// The q + 1 elements of mu_{q+1}, sorted by encoding.
    pub fn mu_elements(&self) -> Vec<Fq2> {
        let step = (self.q - 1) as usize;
        let mut v: Vec<Fq2> = (0..=self.q as usize).map(|j| Fq2(self.exp[j * step])).collect();
        v.sort_unstable();
        v
    }

    /// Smallest-encoding w with w^{q-1} = c, for c in mu_{q+1}. Such a w
    /// always exists since x -> x^{q-1} maps the units onto mu_{q+1}, and it
    /// lies outside F_q whenever c != 1.
    pub fn solve_w(&self, c: Fq2) -> Result<Fq2, Error> {
        if !self.in_mu(c) {
            return Err(Error::NotInMu);
        }
        let e = self.q - 1;
        Ok(self
            .units()
            .find(|&w| self.pow(w, e) == c)
            .expect("x -> x^(q-1) maps the units onto mu_(q+1)"))
    }

    /// Smallest-encoding v with v^{q+1} = c, for c in F_q^*. Exists because
    /// the norm map x -> x^{q+1} is onto F_q^*.
    pub fn solve_norm(&self, c: Fq2) -> Result<Fq2, Error> {
        if c.is_zero() || !self.in_fq(c) {
            return Err(Error::NotInSubfield);
        }
        let e = self.q + 1;
        Ok(self
            .units()
            .find(|&v| self.pow(v, e) == c)
            .expect("the norm maps the units onto F_q^*"))
    }

    /// The two primitive cube roots of unity (the elements of F_4 \ F_2),
    /// ordered by encoding. Requires characteristic 2.
    pub fn f4_pair(&self) -> Result<(Fq2, Fq2), Error> {
        if self.p != 2 {
            return Err(Error::CharacteristicNotTwo);
        }
        // q^2 - 1 = 4^k - 1 is divisible by 3 for every k.
        let e = ((self.order - 1) / 3) as usize;
        let w1 = Fq2(self.exp[e]);
        let w2 = Fq2(self.exp[2 * e]);
        Ok(if w1 < w2 { (w1, w2) } else { (w2, w1) })
    }

    /// Parses "0", a decimal encoding, or "g^<j>" (a generator power).
    pub fn parse_element(&self, s: &str) -> Result<Fq2, Error> {
        let s = s.trim();
        if let Some(j) = s.strip_prefix("g^") {
            let j: u64 = j
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator power in {s:?}")))?;
            return Ok(self.pow(self.generator, j));
        }
        if s == "g" {
            return Ok(self.generator);
        }
        let enc: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad element {s:?}")))?;
        self.from_enc(enc)
    }

    /// "0" for zero, "g^j" otherwise.
    pub fn pretty(&self, x: Fq2) -> String {
        if x.is_zero() {
            "0".to_string()
        } else {
            format!("g^{}", self.log[x.0 as usize])
        }
    }

    /// The defining modulus as a human-readable polynomial in t.
    pub fn format_modulus(&self) -> String {
        format_fp_poly(&self.modulus)
    }

    /// An element as a human-readable polynomial in t.
    pub fn format_element_poly(&self, x: Fq2) -> String {
        let mut c = self.coeffs(x);
        while c.last() == Some(&0) {
            c.pop();
        }
        format_fp_poly(&c)
    }

    #[inline]
    pub(crate) fn log_raw(&self, x: Fq2) -> u32 {
        self.log[x.0 as usize]
    }

    #[inline]
    pub(crate) fn exp_raw(&self, i: usize) -> Fq2 {
        Fq2(self.exp[i])
    }
}

/// Parses a field spec of the form "p^k", e.g. "2^5".
pub fn parse_field_spec(s: &str) -> Result<(u64, u32), Error> {
    let (ps, ks) = s
        .trim()
        .split_once('^')
        .ok_or_else(|| Error::Parse(format!("field spec {s:?} is not of the form p^k")))?;
    let p: u64 = ps
        .parse()
        .map_err(|_| Error::Parse(format!("bad prime in field spec {s:?}")))?;
    let k: u32 = ks
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent in field spec {s:?}")))?;
    Ok((p, k))
}

fn format_fp_poly(coeffs: &[u64]) -> String {
    if coeffs.iter().all(|&c| c == 0) {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, _) => format!("{c}"),
            (1, 1) => "t".to_string(),
            (1, _) => format!("{c}t"),
            (_, 1) => format!("t^{i}"),
            (_, _) => format!("{c}t^{i}"),
        };
        parts.push(part);
    }
    parts.join(" + ")
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            out.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

fn decode(enc: u64, len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    let mut e = enc;
    for slot in out.iter_mut() {
        *slot = e % p;
        e /= p;
    }
    debug_assert_eq!(e, 0);
    out
}

fn decode_trim(enc: u64, len: usize, p: u64) -> Vec<u64> {
    let mut v = decode(enc, len, p);
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// Remainder of a by the monic polynomial b over F_p.
fn poly_rem_monic(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*b.last().unwrap(), 1);
    let db = b.len() - 1;
    let mut r = a.to_vec();
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        r[i] = 0;
        for j in 0..db {
            r[i - db + j] = (r[i - db + j] + p - c * b[j] % p) % p;
        }
    }
    r.truncate(db);
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem_monic(&prod, m, p)
}

fn direct_pow(x: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = x.to_vec();
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, m, p);
        }
        base = poly_mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

/// Tests irreducibility of a monic polynomial over F_p by trial division by
/// every monic polynomial of degree at most deg/2.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    for d in 1..=n / 2 {
        let count = (0..d).fold(1u64, |acc, _| acc * p);
        for enc in 0..count {
            let mut div = decode(enc, d, p);
            div.push(1);
            if poly_rem_monic(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest-encoding monic irreducible polynomial of degree n over F_p.
fn find_modulus(p: u64, n: usize) -> Vec<u64> {
    let count = (0..n).fold(1u64, |acc, _| acc * p);
    for enc in 0..count {
        let mut cand = decode(enc, n, p);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

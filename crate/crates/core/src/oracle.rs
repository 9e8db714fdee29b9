//! Brute-force ground truth for permutation claims, plus executable
//! validators for the supporting reduction and degree lemmas.
//!
//! Everything here works pointwise by exhaustive evaluation; none of it
//! consults the closed-form criteria it is used to cross-check.

use crate::error::Error;
use crate::families::{g0_eval, g_map, f_sparse};
use crate::field::{FieldCtx, Fq2};
use crate::gcd;
use crate::mobius::{Mobius, ProjPoint};
use crate::poly::{Poly, SparsePoly};
use crate::rational::RationalMap;

/// Evidence for a failed permutation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Two distinct domain points with the same image.
    Collision { x1: Fq2, x2: Fq2, image: ProjPoint },
    /// A domain point whose image falls outside the required codomain
    /// (outside mu_{q+1}, or at infinity).
    OutOfRange { x: Fq2, image: ProjPoint },
}

/// Outcome of a brute-force permutation check. A witness is present exactly
/// when the map is not a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermVerdict {
    pub is_permutation: bool,
    pub witness: Option<Witness>,
}

impl PermVerdict {
    fn pass() -> Self {
        PermVerdict { is_permutation: true, witness: None }
    }

    fn fail(witness: Witness) -> Self {
        PermVerdict { is_permutation: false, witness: Some(witness) }
    }
}

/// Evaluates the sparse polynomial at every element of F_{q^2} and checks
/// the images for a repeat.
///
/// Nonzero points are visited as generator powers so each term value c·x^e
/// advances by a fixed discrete-log stride per step: one table read and one
/// Zech addition per term per point, no multiplications.
pub fn permutes_fq2(ctx: &FieldCtx, f: &SparsePoly) -> PermVerdict {
    let order = ctx.order() as usize;
    let m1 = (order - 1) as u32;
    // seen[y] = encoding of the first preimage of y, plus one; 0 = unseen.
    let mut seen = vec![0u32; order];

    let y0 = f.eval(ctx, Fq2::ZERO);
    seen[y0.0 as usize] = 1; // preimage 0, offset by one

    let nt = f.terms.len();
    let mut idx: Vec<u32> = Vec::with_capacity(nt);
    let mut stride: Vec<u32> = Vec::with_capacity(nt);
    for &(e, c) in &f.terms {
        idx.push(ctx.log_raw(c));
        stride.push((e % u64::from(m1)) as u32);
    }

    for i in 0..m1 {
        let mut acc = Fq2::ZERO;
        for t in 0..nt {
            acc = ctx.add(acc, ctx.exp_raw(idx[t] as usize));
            idx[t] += stride[t];
            if idx[t] >= m1 {
                idx[t] -= m1;
            }
        }
        let x = ctx.exp_raw(i as usize);
        let slot = &mut seen[acc.0 as usize];
        if *slot != 0 {
            let x1 = Fq2(*slot - 1);
            return PermVerdict::fail(Witness::Collision {
                x1,
                x2: x,
                image: ProjPoint::Finite(acc),
            });
        }
        *slot = x.0 + 1;
    }
    PermVerdict::pass()
}

/// Checks that a point function restricts to a bijection of mu_{q+1}. Any
/// image outside mu_{q+1} (including infinity) fails with an out-of-range
/// witness.
pub fn permutes_mu<F>(ctx: &FieldCtx, map: F) -> PermVerdict
where
    F: Fn(Fq2) -> ProjPoint,
{
    let mut seen = vec![0u32; ctx.order() as usize];
    for x in ctx.mu_elements() {
        let image = map(x);
        let y = match image {
            ProjPoint::Finite(y) if ctx.in_mu(y) => y,
            other => return PermVerdict::fail(Witness::OutOfRange { x, image: other }),
        };
        let slot = &mut seen[y.0 as usize];
        if *slot != 0 {
            return PermVerdict::fail(Witness::Collision {
                x1: Fq2(*slot - 1),
                x2: x,
                image,
            });
        }
        *slot = x.0 + 1;
    }
    PermVerdict::pass()
}

/// The g_0 point function as a total map into the field: a root of B inside
/// mu_{q+1} evaluates to the field value 0, which permutes_mu rejects.
fn g0_point<'a>(ctx: &'a FieldCtx, r: i64, b: &Poly) -> impl Fn(Fq2) -> ProjPoint + 'a {
    let b = b.clone();
    move |x| ProjPoint::Finite(g0_eval(ctx, r, &b, x).unwrap_or(Fq2::ZERO))
}

/// Confirms, on one instance (r, B), the reduction equivalence
///   X^r B(X^{q-1}) permutes F_{q^2}
///     <=>  gcd(r, q-1) = 1 and x^r B(x)^{q-1} permutes mu_{q+1}.
pub fn validate_lemma_old(ctx: &FieldCtx, r: u64, b: &Poly) -> bool {
    debug_assert!(r >= 1);
    let lhs = permutes_fq2(ctx, &f_sparse(ctx, r, b)).is_permutation;
    let rhs = gcd(r, ctx.q() - 1) == 1
        && permutes_mu(ctx, g0_point(ctx, r as i64, b)).is_permutation;
    lhs == rhs
}

/// Confirms, on one instance (r, B), the equivalence
///   x^r B(x)^{q-1} permutes mu_{q+1}
///     <=>  B has no roots in mu_{q+1}
///          and X^r B^(q)(1/X)/B(X) permutes mu_{q+1}.
pub fn validate_lemma_lemx(ctx: &FieldCtx, r: i64, b: &Poly) -> bool {
    let lhs = permutes_mu(ctx, g0_point(ctx, r, b)).is_permutation;
    let rhs = match g_map(ctx, r, b) {
        Ok(g) => {
            let no_roots = ctx
                .mu_elements()
                .iter()
                .all(|&x| !b.eval(ctx, x).is_zero());
            no_roots
                && permutes_mu(ctx, |x| g.eval(ctx, ProjPoint::Finite(x))).is_permutation
        }
        Err(_) => false, // zero B: neither side can permute
    };
    lhs == rhs
}

/// Confirms, on one instance (B, n) with B nonzero and n >= deg(B): if the
/// reduced map g = X^n B^(q)(1/X)/B has degree n, then B has no roots in
/// mu_{q+1} and g maps mu_{q+1} into itself. Vacuously true when the degree
/// drops.
pub fn validate_lemma_scr(ctx: &FieldCtx, b: &Poly, n: u64) -> bool {
    let num = b
        .reversal_num(ctx, n as usize)
        .expect("needs nonzero B with n >= deg(B)");
    let g = RationalMap::build(ctx, num, b.clone()).expect("B is nonzero");
    if g.degree() as u64 != n {
        return true;
    }
    let mu = ctx.mu_elements();
    let no_roots = mu.iter().all(|&x| !b.eval(ctx, x).is_zero());
    let into_mu = mu.iter().all(|&x| {
        matches!(g.eval(ctx, ProjPoint::Finite(x)), ProjPoint::Finite(y) if ctx.in_mu(y))
    });
    no_roots && into_mu
}

/// Checks that (beta^q X + alpha^q)/(alpha X + beta) permutes mu_{q+1}
/// whenever alpha^{q+1} != beta^{q+1}; vacuously true otherwise.
pub fn validate_lemma_deg1mu(ctx: &FieldCtx, alpha: Fq2, beta: Fq2) -> bool {
    let e = ctx.q() + 1;
    if ctx.pow(alpha, e) == ctx.pow(beta, e) {
        return true;
    }
    let m = Mobius::new(ctx, ctx.frobenius(beta), ctx.frobenius(alpha), alpha, beta)
        .expect("determinant beta^{q+1} - alpha^{q+1} is nonzero");
    permutes_mu(ctx, |x| m.eval(ctx, ProjPoint::Finite(x))).is_permutation
}

/// Checks that (alpha X + beta alpha^q)/(X + beta) maps mu_{q+1} bijectively
/// onto F_q ∪ {infinity}, for alpha outside F_q and beta in mu_{q+1}.
pub fn validate_lemma_mu(ctx: &FieldCtx, alpha: Fq2, beta: Fq2) -> Result<bool, Error> {
    if ctx.in_fq(alpha) {
        return Err(Error::InvalidParams("alpha must lie outside F_q".into()));
    }
    if !ctx.in_mu(beta) {
        return Err(Error::NotInMu);
    }
    let m = Mobius::new(
        ctx,
        alpha,
        ctx.mul(beta, ctx.frobenius(alpha)),
        Fq2::ONE,
        beta,
    )
    .expect("determinant beta(alpha - alpha^q) is nonzero");
    let mut seen_infinity = false;
    let mut seen = vec![false; ctx.order() as usize];
    for x in ctx.mu_elements() {
        match m.eval(ctx, ProjPoint::Finite(x)) {
            ProjPoint::Infinity => {
                if seen_infinity {
                    return Ok(false);
                }
                seen_infinity = true;
            }
            ProjPoint::Finite(y) => {
                if !ctx.in_fq(y) || seen[y.0 as usize] {
                    return Ok(false);
                }
                seen[y.0 as usize] = true;
            }
        }
    }
    // injective into the (q+1)-point set F_q ∪ {infinity}, and |mu| = q+1,
    // so the image is all of it
    Ok(true)
}

/// Checks deg(eta ∘ g ∘ rho) = deg(g) after full reduction. Meaningful for
/// nonconstant g.
pub fn validate_lemma_deg(ctx: &FieldCtx, g: &RationalMap, eta: &Mobius, rho: &Mobius) -> bool {
    debug_assert!(!g.is_constant());
    let inner = RationalMap::compose_mobius_inner(ctx, g, rho);
    let full = RationalMap::compose_mobius_outer(ctx, eta, &inner);
    full.degree() == g.degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn f4() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(2, 1).unwrap())
    }

    fn f9() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(3, 1).unwrap())
    }

    /// Independent permutation check: collect all images, sort, scan for a
    /// repeat. Guards the stride-walk bitset path.
    fn permutes_fq2_by_sorting(ctx: &FieldCtx, f: &SparsePoly) -> bool {
        let mut images: Vec<Fq2> = ctx.elements().map(|x| f.eval(ctx, x)).collect();
        images.sort_unstable();
        images.windows(2).all(|w| w[0] != w[1])
    }

    #[test]
    fn identity_and_frobenius_permute() {
        for ctx in [f4(), f9()] {
            let ident = SparsePoly::new(vec![(1, Fq2::ONE)]);
            assert!(permutes_fq2(ctx, &ident).is_permutation);
            let frob = SparsePoly::new(vec![(ctx.q(), Fq2::ONE)]);
            assert!(permutes_fq2(ctx, &frob).is_permutation);
        }
    }

    #[test]
    fn squaring_over_f9_collides_at_plus_minus() {
        let ctx = f9();
        let square = SparsePoly::new(vec![(2, Fq2::ONE)]);
        let verdict = permutes_fq2(ctx, &square);
        assert!(!verdict.is_permutation);
        match verdict.witness.unwrap() {
            Witness::Collision { x1, x2, image } => {
                assert_ne!(x1, x2);
                assert_eq!(ctx.neg(x1), x2);
                assert_eq!(ProjPoint::Finite(square.eval(ctx, x1)), image);
                assert_eq!(ProjPoint::Finite(square.eval(ctx, x2)), image);
            }
            other => panic!("expected a collision witness, got {other:?}"),
        }
    }

    #[test]
    fn stride_walk_agrees_with_sorting_oracle_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for ctx in [f4(), f9(), &FieldCtx::new(2, 3).unwrap(), &FieldCtx::new(5, 1).unwrap()] {
            for _ in 0..200 {
                let nt = rng.gen_range(0..5);
                let mut exps: Vec<u64> = (0..nt).map(|_| rng.gen_range(0..3 * ctx.order())).collect();
                exps.sort_unstable();
                exps.dedup();
                let terms: Vec<(u64, Fq2)> = exps
                    .into_iter()
                    .map(|e| (e, Fq2(rng.gen_range(0..ctx.order()) as u32)))
                    .collect();
                let f = SparsePoly::new(terms);
                assert_eq!(
                    permutes_fq2(ctx, &f).is_permutation,
                    permutes_fq2_by_sorting(ctx, &f)
                );
            }
        }
    }

    #[test]
    fn zero_and_constant_maps_fail_with_witness() {
        let ctx = f9();
        let zero = SparsePoly::new(vec![]);
        let verdict = permutes_fq2(ctx, &zero);
        assert!(!verdict.is_permutation);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn permutes_mu_basics() {
        let ctx = f9();
        assert!(permutes_mu(ctx, ProjPoint::Finite).is_permutation);
        // constant map x -> x^{q+1} = 1
        let constant = permutes_mu(ctx, |x| ProjPoint::Finite(ctx.pow(x, ctx.q() + 1)));
        assert!(!constant.is_permutation);
        assert!(matches!(constant.witness, Some(Witness::Collision { .. })));
        // a map leaving mu is out of range
        let escape = permutes_mu(ctx, |_| ProjPoint::Finite(ctx.generator()));
        assert!(matches!(escape.witness, Some(Witness::OutOfRange { .. })));
        let inf = permutes_mu(ctx, |_| ProjPoint::Infinity);
        assert!(matches!(inf.witness, Some(Witness::OutOfRange { .. })));
    }

    #[test]
    fn g0_permutation_invariant_under_exponent_shift() {
        let ctx = f9();
        let qp1 = (ctx.q() + 1) as i64;
        let b = Poly::from_coeffs(vec![ctx.generator(), Fq2::ONE]);
        for r in -3..6i64 {
            let base = permutes_mu(ctx, g0_point(ctx, r, &b)).is_permutation;
            let shifted = permutes_mu(ctx, g0_point(ctx, r + qp1, &b)).is_permutation;
            assert_eq!(base, shifted);
        }
    }

    #[test]
    fn lemma_old_trivial_instances() {
        let f9 = f9();
        assert!(validate_lemma_old(f9, 1, &Poly::one()));
        // q = 9: gcd(2, 8) != 1, both sides false
        let ctx = FieldCtx::new(3, 2).unwrap();
        assert!(validate_lemma_old(&ctx, 2, &Poly::one()));
    }

    #[test]
    fn lemma_lemx_trivial_instances() {
        let ctx = f9();
        assert!(validate_lemma_lemx(ctx, 1, &Poly::one()));
        // B with a root in mu: both sides false
        let u = ctx.mu_elements()[1];
        assert!(validate_lemma_lemx(ctx, 1, &Poly::x_plus(ctx.neg(u))));
    }

    #[test]
    fn lemma_scr_trivial_instances() {
        let ctx = f9();
        assert!(validate_lemma_scr(ctx, &Poly::one(), 3));
        // v outside mu keeps the conclusions intact
        let v = ctx.generator();
        assert!(validate_lemma_scr(ctx, &Poly::x_plus(v), 1));
    }

    #[test]
    fn lemma_validators_on_seeded_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for ctx in [f4(), f9(), &FieldCtx::new(2, 3).unwrap()] {
            for _ in 0..300 {
                let coeffs: Vec<Fq2> = (0..4)
                    .map(|_| Fq2(rng.gen_range(0..ctx.order()) as u32))
                    .collect();
                let b = Poly::from_coeffs(coeffs);
                if b.is_zero() {
                    continue;
                }
                let r = rng.gen_range(1..=2 * (ctx.q() + 1));
                assert!(validate_lemma_old(ctx, r, &b), "old failed at r={r} b={}", b.to_text());
                assert!(
                    validate_lemma_lemx(ctx, r as i64, &b),
                    "lemx failed at r={r} b={}",
                    b.to_text()
                );
                if r >= b.degree().unwrap() as u64 {
                    assert!(
                        validate_lemma_scr(ctx, &b, r),
                        "scr failed at n={r} b={}",
                        b.to_text()
                    );
                }
            }
        }
    }

    #[test]
    fn lemma_deg1mu_named_maps() {
        let ctx = f9();
        // alpha=0, beta=1: the identity map X
        assert!(validate_lemma_deg1mu(ctx, Fq2::ZERO, Fq2::ONE));
        // alpha=1, beta=0: inversion 1/X, a group automorphism of mu
        assert!(validate_lemma_deg1mu(ctx, Fq2::ONE, Fq2::ZERO));
    }

    #[test]
    fn lemma_mu_image_in_f4() {
        let ctx = f4();
        let omega = Fq2(2);
        assert!(validate_lemma_mu(ctx, omega, Fq2::ONE).unwrap());
        // the pole -beta = beta in char 2 maps to infinity
        let m = Mobius::new(
            ctx,
            omega,
            ctx.mul(Fq2::ONE, ctx.frobenius(omega)),
            Fq2::ONE,
            Fq2::ONE,
        )
        .unwrap();
        let mut images: Vec<ProjPoint> = ctx
            .mu_elements()
            .into_iter()
            .map(|x| m.eval(ctx, ProjPoint::Finite(x)))
            .collect();
        images.sort_unstable();
        assert_eq!(
            images,
            vec![
                ProjPoint::Finite(Fq2::ZERO),
                ProjPoint::Finite(Fq2::ONE),
                ProjPoint::Infinity
            ]
        );
    }

    #[test]
    fn lemma_mu_rejects_bad_inputs() {
        let ctx = f9();
        assert!(validate_lemma_mu(ctx, Fq2::ONE, Fq2::ONE).is_err());
        assert!(validate_lemma_mu(ctx, ctx.generator(), ctx.generator()).is_err());
    }

    #[test]
    fn lemma_deg_simple_cases() {
        let ctx = f9();
        let id = Mobius::identity();
        let cube = RationalMap::x_power(3);
        assert!(validate_lemma_deg(ctx, &cube, &id, &id));
        let recip = Mobius::new(ctx, Fq2::ZERO, Fq2::ONE, Fq2::ONE, Fq2::ZERO).unwrap();
        let square = RationalMap::x_power(2);
        assert!(validate_lemma_deg(ctx, &square, &id, &recip));
    }
}

//! Quintic sums `A_p = sum chi_p(a x^5 + b x^3 + c x)`, quartic sums
//! `B_q = sum chi_q(alpha x^4 + beta x^2 + gamma)`, their closed forms mod
//! `p`, and the point-count criterion that makes `A_p` vanish.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finitefield::{FieldCtx, FiniteField, FqElem};
use crate::modarith::{is_prime, jacobi_unchecked, mul_mod, pow_mod, reduce, sub_mod};
use crate::polyalg::{binomial, build_f, build_g, Poly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuinticSpec {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub p: u64,
}

impl QuinticSpec {
    /// `a, b, c` are reduced mod `p` and must be nonzero; `p = 1 mod 4`.
    pub fn new(a: i64, b: i64, c: i64, p: u64) -> Result<Self> {
        if p % 4 != 1 || !is_prime(p) {
            return Err(Error::Precondition(format!("need a prime p = 1 mod 4, got {p}")));
        }
        let r = |v: i64| reduce(v as i128, p);
        let (a, b, c) = (r(a), r(b), r(c));
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::Precondition(format!("a, b, c must be nonzero mod {p}")));
        }
        Ok(QuinticSpec { a, b, c, p })
    }
}

/// `sum_x (x (a x^4 + b x^2 + c) / p)`.
fn quintic_sum(a: u64, b: u64, c: u64, p: u64) -> i64 {
    (0..p)
        .map(|x| {
            let x2 = mul_mod(x, x, p);
            // x (a x^4 + b x^2 + c)
            let inner = (mul_mod(a, mul_mod(x2, x2, p), p) + mul_mod(b, x2, p) + c) % p;
            jacobi_unchecked(mul_mod(x, inner, p), p) as i64
        })
        .sum()
}

pub fn quintic_sum_ap(spec: &QuinticSpec) -> i64 {
    quintic_sum(spec.a, spec.b, spec.c, spec.p)
}

/// `A_p mod p` from
/// `-C((p-1)/2, (p-1)/4) b^{(p-1)/4} (a^{(p-1)/4} + c^{(p-1)/4}) f(ac/b^2)`.
pub fn ap_mod_formula(spec: &QuinticSpec) -> Result<u64> {
    let p = spec.p;
    let e = (p - 1) / 4;
    let ctx = FieldCtx::prime(p)?;
    let binom = reduce_big(&binomial((p - 1) / 2, e), p);
    let sum = (pow_mod(spec.a, e, p) + pow_mod(spec.c, e, p)) % p;
    let arg = ctx.div(ctx.from_int((spec.a * spec.c % p) as i64), ctx.from_int(mul_mod(spec.b, spec.b, p) as i64))?;
    let fval = build_f(p)?.eval(arg).a0;
    let v = mul_mod(mul_mod(binom, pow_mod(spec.b, e, p), p), mul_mod(sum, fval, p), p);
    Ok(sub_mod(0, v, p))
}

fn reduce_big(v: &num_bigint::BigUint, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    (v % p).to_u64().expect("reduced")
}

/// `sum_{x in F_q} chi_q(alpha x^4 + beta x^2 + gamma)`.
pub fn quartic_sum_bq(alpha: FqElem, beta: FqElem, gamma: FqElem, ctx: &FieldCtx) -> i64 {
    ctx.enumerate()
        .into_iter()
        .map(|x| {
            let x2 = ctx.square(x);
            let v = ctx.add(ctx.add(ctx.mul(alpha, ctx.square(x2)), ctx.mul(beta, x2)), gamma);
            ctx.chi(v) as i64
        })
        .sum()
}

/// `g` re-read over `ctx` so it can be evaluated at elements of `F_{p^2}`.
fn g_over(ctx: &FieldCtx) -> Result<Poly> {
    let g = build_g(ctx.p())?;
    Ok(Poly::new(Ring::Field(*ctx), g.coeffs().to_vec()))
}

/// `-chi(alpha) - chi(beta) g(alpha gamma / beta^2)^{(q-1)/(p-1)}`, an element
/// of `F_p`.
pub fn bq_closed_form(alpha: FqElem, beta: FqElem, gamma: FqElem, ctx: &FieldCtx) -> Result<u64> {
    if alpha.is_zero() || beta.is_zero() || gamma.is_zero() {
        return Err(Error::Precondition("alpha, beta, gamma must be nonzero".into()));
    }
    let p = ctx.p();
    let arg = ctx.div(ctx.mul(alpha, gamma), ctx.square(beta))?;
    let gval = ctx.norm_power(g_over(ctx)?.eval(arg)).a0;
    let chi = |x: FqElem| reduce(ctx.chi(x) as i128, p);
    Ok(sub_mod(sub_mod(0, chi(alpha), p), mul_mod(chi(beta), gval, p), p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSumCheck {
    /// Coordinates over `F_p` of `sum_x H(x)^{(q-1)/(p-1)}`.
    pub lhs: Vec<u64>,
    /// Coordinates of `-c_{p-1}^e - c_{2(p-1)}^e`.
    pub rhs: Vec<u64>,
    pub holds: bool,
}

/// Brute-force `sum_{x in F_q} H(x)^{1+p+...+p^{n-1}}` against the value
/// predicted from the coefficients `c_{p-1}` and `c_{2(p-1)}`.
pub fn extension_power_sum<F: FiniteField>(field: &F, h: &[F::Elem]) -> Result<PowerSumCheck> {
    let p = field.characteristic();
    let top = 2 * (p as usize - 1);
    let mut coeffs = h.to_vec();
    while coeffs.len() > 1 && coeffs.last() == Some(&field.zero()) {
        coeffs.pop();
    }
    if coeffs.len() > top + 1 {
        return Err(Error::Precondition(format!("deg H = {} exceeds 2(p-1) = {top}", coeffs.len() - 1)));
    }
    coeffs.resize(top + 1, field.zero());
    let e = (field.order() - 1) / (p - 1);
    let eval = |x: F::Elem| coeffs.iter().rev().fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c));
    let lhs = field
        .elements()
        .into_iter()
        .fold(field.zero(), |acc, x| field.add(acc, field.pow(eval(x), e)));
    let rhs = field.neg(field.add(field.pow(coeffs[p as usize - 1], e), field.pow(coeffs[top], e)));
    Ok(PowerSumCheck {
        lhs: field.coords(lhs),
        rhs: field.coords(rhs),
        holds: lhs == rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaInfo {
    pub ctx: FieldCtx,
    /// The canonical `sqrt(ac)` that was used.
    pub sqrt_ac: FqElem,
    pub gamma: FqElem,
}

/// `gamma = (b + 2 sqrt(ac)) / (16 sqrt(ac))` in `F_p` when `ac` is a
/// square mod `p`, otherwise in `F_{p^2}`.
pub fn gamma_of(spec: &QuinticSpec) -> Result<GammaInfo> {
    let p = spec.p;
    let ac = mul_mod(spec.a, spec.c, p);
    let ctx = if jacobi_unchecked(ac, p) == 1 {
        FieldCtx::prime(p)?
    } else {
        FieldCtx::quadratic(p)?
    };
    let sqrt_ac = ctx
        .sqrt(ctx.from_int(ac as i64))
        .ok_or_else(|| Error::Consistency(format!("{ac} has no root in F_{}", ctx.q())))?;
    let num = ctx.add(ctx.from_int(spec.b as i64), ctx.scale(2, sqrt_ac));
    let gamma = ctx.div(num, ctx.scale(16, sqrt_ac))?;
    Ok(GammaInfo { ctx, sqrt_ac, gamma })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem51Verdict {
    pub q: u64,
    pub gamma: String,
    /// Affine points on `y^2 = x^4 + x^2 + gamma` over `F_q`.
    pub n_points: i64,
    pub n_mod_p: u64,
    /// `N = -1 mod p`.
    pub condition_met: bool,
    pub ap: i64,
    pub g_gamma_zero: bool,
    /// `N = -1 mod p` exactly when `g(gamma) = 0`.
    pub consistent: bool,
    pub holds: bool,
}

/// If `N = -1 mod p` then `A_p = 0`. Both quantities are always recorded.
pub fn theorem51_condition(spec: &QuinticSpec) -> Result<Theorem51Verdict> {
    let info = gamma_of(spec)?;
    let ctx = info.ctx;
    let p = spec.p;
    let n_points = ctx.q() as i64 + quartic_sum_bq(FqElem::ONE, FqElem::ONE, info.gamma, &ctx);
    let n_mod_p = reduce(n_points as i128, p);
    let condition_met = n_mod_p == p - 1;
    let ap = quintic_sum_ap(spec);
    let g_gamma_zero = g_over(&ctx)?.eval(info.gamma).is_zero();
    let consistent = condition_met == g_gamma_zero;
    Ok(Theorem51Verdict {
        q: ctx.q(),
        gamma: info.gamma.to_string(),
        n_points,
        n_mod_p,
        condition_met,
        ap,
        g_gamma_zero,
        consistent,
        holds: consistent && (!condition_met || ap == 0),
    })
}

/// `y -> sum_x chi_p(x^5 + c1 x^3 y + c2 x y^2)` for `y` in `[0, p)`.
pub fn bivariate_quintic_sweep(c1: i64, c2: i64, p: u64) -> Result<Vec<i64>> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (c1, c2) = (reduce(c1 as i128, p), reduce(c2 as i128, p));
    Ok((0..p)
        .map(|y| quintic_sum(1, mul_mod(c1, y, p), mul_mod(c2, mul_mod(y, y, p), p), p))
        .collect())
}

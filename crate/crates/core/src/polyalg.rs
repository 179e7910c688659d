//! Dense univariate polynomials over `F_p`, `F_{p^2}`, and `Z/mZ`, plus the
//! special families: `P_m`, `Q_m`, Dickson `D_m`, and the truncated
//! hypergeometric polynomials `f` and `g`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finitefield::{FieldCtx, FqElem};
use crate::modarith::{add_mod, inv_mod, mul_mod, reduce, sub_mod};

/// Coefficient ring of a [`Poly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    Field(FieldCtx),
    /// `Z/mZ`, used with `m = p^2` for supercongruences.
    Zmod(u64),
}

impl Ring {
    fn modulus(&self) -> u64 {
        match self {
            Ring::Field(ctx) => ctx.p(),
            Ring::Zmod(m) => *m,
        }
    }

    pub fn from_int(&self, a: i128) -> FqElem {
        match self {
            Ring::Field(ctx) => ctx.elem(a, 0),
            Ring::Zmod(m) => FqElem { a0: reduce(a, *m), a1: 0 },
        }
    }

    pub fn from_big(&self, a: &BigUint) -> FqElem {
        let r = (a % self.modulus()).to_u64().expect("reduced below modulus");
        FqElem { a0: r, a1: 0 }
    }

    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        match self {
            Ring::Field(ctx) => ctx.add(x, y),
            Ring::Zmod(m) => FqElem { a0: add_mod(x.a0, y.a0, *m), a1: 0 },
        }
    }

    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        match self {
            Ring::Field(ctx) => ctx.sub(x, y),
            Ring::Zmod(m) => FqElem { a0: sub_mod(x.a0, y.a0, *m), a1: 0 },
        }
    }

    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        match self {
            Ring::Field(ctx) => ctx.mul(x, y),
            Ring::Zmod(m) => FqElem { a0: mul_mod(x.a0, y.a0, *m), a1: 0 },
        }
    }

    pub fn neg(&self, x: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, x)
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem> {
        match self {
            Ring::Field(ctx) => ctx.inv(x),
            Ring::Zmod(m) => inv_mod(x.a0, *m)
                .map(|a0| FqElem { a0, a1: 0 })
                .ok_or(Error::DivisionByZero),
        }
    }

    pub fn pow(&self, x: FqElem, mut e: u64) -> FqElem {
        let mut base = x;
        let mut acc = self.from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn field(&self) -> Result<&FieldCtx> {
        match self {
            Ring::Field(ctx) => Ok(ctx),
            Ring::Zmod(m) => Err(Error::Precondition(format!("Z/{m} is not a field"))),
        }
    }
}

/// Dense polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    ring: Ring,
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn new(ring: Ring, mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn from_ints(ring: Ring, coeffs: &[i64]) -> Self {
        Self::new(ring, coeffs.iter().map(|&c| ring.from_int(c as i128)).collect())
    }

    pub fn zero(ring: Ring) -> Self {
        Poly { ring, coeffs: Vec::new() }
    }

    pub fn constant(ring: Ring, c: FqElem) -> Self {
        Self::new(ring, vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(ring: Ring, c: FqElem, k: usize) -> Self {
        let mut coeffs = vec![FqElem::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(ring, coeffs)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs.get(k).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.ring.add(self.coeff(k), other.coeff(k)))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.ring.sub(self.coeff(k), other.coeff(k)))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        Poly::new(self.ring, self.coeffs.iter().map(|&x| self.ring.mul(c, x)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.ring.add(out[i + j], self.ring.mul(a, b));
            }
        }
        Poly::new(self.ring, out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::constant(self.ring, self.ring.from_int(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.ring.mul(self.ring.from_int(k as i128), c))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FqElem) -> FqElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| self.ring.add(self.ring.mul(acc, x), c))
    }

    /// Homogenization `P*(a, b) = sum_s c_s a^{n-s} b^s` with `n = deg P`.
    /// The zero polynomial homogenizes to zero.
    pub fn eval_homogeneous(&self, a: FqElem, b: FqElem) -> FqElem {
        let r = &self.ring;
        let Some(n) = self.degree() else {
            return FqElem::ZERO;
        };
        if a.is_zero() {
            return r.mul(self.leading(), r.pow(b, n as u64));
        }
        // Horner in b: acc <- acc * b + c_s a^{n-s}, for s = n down to 0
        let mut acc = FqElem::ZERO;
        let mut a_pow = r.from_int(1);
        for s in (0..=n).rev() {
            acc = r.add(r.mul(acc, b), r.mul(self.coeffs[s], a_pow));
            a_pow = r.mul(a_pow, a);
        }
        acc
    }

    /// `P(x^2)` as a polynomial.
    pub fn compose_square(&self) -> Poly {
        let mut coeffs = vec![FqElem::ZERO; 2 * self.coeffs.len()];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c;
        }
        Poly::new(self.ring, coeffs)
    }

    /// `x * P(x)`.
    pub fn shift(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(FqElem::ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Poly::new(self.ring, coeffs)
    }

    /// Parses `"c0 + c1*z + c2*z^2"`; coefficients are integers (reduced
    /// into the ring) or `[a0,a1]` pairs for `F_{p^2}`. `x` is accepted as
    /// the variable name too.
    pub fn parse(s: &str, ring: Ring) -> Result<Poly> {
        let err = |m: &str| Error::Parse(format!("{m} in polynomial `{s}`"));
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        let mut depth = 0i32;
        for ch in s.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if cur.trim().is_empty() {
                        if ch == '-' {
                            negative = !negative;
                        }
                        continue;
                    }
                    terms.push((negative, std::mem::take(&mut cur)));
                    negative = ch == '-';
                }
                c if c.is_whitespace() => {}
                c => cur.push(c),
            }
        }
        if !cur.trim().is_empty() {
            terms.push((negative, cur));
        }
        if terms.is_empty() {
            return Err(err("empty input"));
        }
        let mut out = Poly::zero(ring);
        for (neg, term) in terms {
            let (coef_str, power) = match term.find(['z', 'x']) {
                None => (term.as_str(), 0usize),
                Some(pos) => {
                    let coef = term[..pos].trim_end_matches('*');
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| err("expected `^`"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (coef, power)
                }
            };
            let c = if coef_str.is_empty() {
                ring.from_int(1)
            } else if let Some(inner) = coef_str.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let ctx = ring.field().map_err(|_| err("pair coefficient outside F_p^2"))?;
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() != 2 {
                    return Err(err("pair coefficient needs two entries"));
                }
                let a0: i128 = parts[0].trim().parse().map_err(|_| err("bad coefficient"))?;
                let a1: i128 = parts[1].trim().parse().map_err(|_| err("bad coefficient"))?;
                if ctx.degree() == 1 && reduce(a1, ctx.p()) != 0 {
                    return Err(err("irrational coefficient over F_p"));
                }
                ctx.elem(a0, a1)
            } else {
                let v: i128 = coef_str.parse().map_err(|_| err("bad coefficient"))?;
                ring.from_int(v)
            };
            let c = if neg { ring.neg(c) } else { c };
            out = out.add(&Poly::monomial(ring, c, power));
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Integer coefficients of `P_m(x, a) = sum_k C(2m, 2k+1) a^k x^{m-1-k}`,
/// low to high.
pub fn pm_integer(m: u64, a: i64) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut coeffs = vec![BigInt::zero(); m as usize];
    for k in 0..m {
        let c = BigInt::from(binomial(2 * m, 2 * k + 1)) * BigInt::from(a).pow(k as u32);
        coeffs[(m - 1 - k) as usize] = c;
    }
    coeffs
}

/// `P_m(x, a)` over the field of `a`.
pub fn build_pm(m: u64, a: FqElem, ctx: &FieldCtx) -> Result<Poly> {
    if m == 0 {
        return Err(Error::Precondition("P_m needs m >= 1".into()));
    }
    let ring = Ring::Field(*ctx);
    let mut coeffs = vec![FqElem::ZERO; m as usize];
    let mut a_pow = FqElem::ONE;
    for k in 0..m {
        let b = ring.from_big(&binomial(2 * m, 2 * k + 1));
        coeffs[(m - 1 - k) as usize] = ctx.mul(b, a_pow);
        a_pow = ctx.mul(a_pow, a);
    }
    Ok(Poly::new(ring, coeffs))
}

/// `Q_m(x, a) = sum_i m/(m-i) C(m-i, i) (-a)^i x^{(m-1)/2 - i}` for odd `m`.
pub fn build_qm(m: u64, a: FqElem, ctx: &FieldCtx) -> Result<Poly> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::Precondition(format!("Q_m needs odd m >= 1, got {m}")));
    }
    let ring = Ring::Field(*ctx);
    let top = (m - 1) / 2;
    let mut coeffs = vec![FqElem::ZERO; top as usize + 1];
    let minus_a = ctx.neg(a);
    let mut a_pow = FqElem::ONE;
    for i in 0..=top {
        let num = binomial(m - i, i) * m;
        let (q, r) = num.div_rem(&BigUint::from(m - i));
        debug_assert!(r.is_zero());
        coeffs[(top - i) as usize] = ctx.mul(ring.from_big(&q), a_pow);
        a_pow = ctx.mul(a_pow, minus_a);
    }
    Ok(Poly::new(ring, coeffs))
}

/// Dickson polynomial `D_m(x, a) = x Q_m(x^2, a)`.
pub fn dickson_d(m: u64, a: FqElem, ctx: &FieldCtx) -> Result<Poly> {
    Ok(build_qm(m, a, ctx)?.compose_square().shift())
}

/// Whether `P` induces a bijection of its field, by full enumeration.
pub fn is_permutation_polynomial(poly: &Poly) -> Result<bool> {
    let ctx = poly.ring.field()?;
    let mut seen = vec![false; ctx.q() as usize];
    for x in ctx.enumerate() {
        let i = ctx.index_of(poly.eval(x));
        if seen[i] {
            return Ok(false);
        }
        seen[i] = true;
    }
    Ok(true)
}

/// `f(z) = 1 + sum_{k=1}^{floor((p-1)/8)} prod_{j<k} (8j+1)(8j+5) / (4(j+1)(4j+3)) z^k`
/// over `F_p`.
pub fn build_f(p: u64) -> Result<Poly> {
    let ctx = FieldCtx::prime(p)?;
    let ring = Ring::Field(ctx);
    let top = (p - 1) / 8;
    let mut coeffs = vec![FqElem::ONE];
    let mut c = 1u64;
    for k in 1..=top {
        let j = k - 1;
        let num = mul_mod((8 * j + 1) % p, (8 * j + 5) % p, p);
        let den = mul_mod(4 * (j + 1) % p, (4 * j + 3) % p, p);
        let den_inv = inv_mod(den, p).ok_or_else(|| {
            Error::Consistency(format!("f denominator divisible by {p} at k = {k}"))
        })?;
        c = mul_mod(c, mul_mod(num, den_inv, p), p);
        coeffs.push(FqElem { a0: c, a1: 0 });
    }
    Ok(Poly::new(ring, coeffs))
}

/// `g(z) = 1 + sum_{k=1}^{floor((p-1)/4)} (4k-1)!! / (4^k (k!)^2) z^k` over `F_p`.
pub fn build_g(p: u64) -> Result<Poly> {
    let ctx = FieldCtx::prime(p)?;
    let ring = Ring::Field(ctx);
    let top = (p - 1) / 4;
    let mut coeffs = vec![FqElem::ONE];
    let mut c = 1u64;
    for k in 1..=top {
        // ratio of consecutive terms: (4k-3)(4k-1) / (4 k^2)
        let num = mul_mod((4 * k - 3) % p, (4 * k - 1) % p, p);
        let den = mul_mod(4, mul_mod(k % p, k % p, p), p);
        let den_inv = inv_mod(den, p).ok_or_else(|| {
            Error::Consistency(format!("g denominator divisible by {p} at k = {k}"))
        })?;
        c = mul_mod(c, mul_mod(num, den_inv, p), p);
        coeffs.push(FqElem { a0: c, a1: 0 });
    }
    Ok(Poly::new(ring, coeffs))
}

fn second_order_residual(u: &Poly, a2: [i64; 3], a1: [i64; 2], a0: i64) -> Poly {
    let ring = u.ring;
    let d1 = u.derivative();
    let d2 = d1.derivative();
    let c2 = Poly::from_ints(ring, &a2);
    let c1 = Poly::from_ints(ring, &a1);
    c2.mul(&d2)
        .add(&c1.mul(&d1))
        .add(&u.scale(ring.from_int(a0 as i128)))
}

/// `(4z - 16z^2) u'' + (4 - 32z) u' - 3u`.
pub fn ode_residual_g(u: &Poly) -> Poly {
    second_order_residual(u, [0, 4, -16], [4, -32], -3)
}

/// `(16z - 64z^2) v'' + (12 - 112z) v' - 5v`.
pub fn ode_residual_f(v: &Poly) -> Poly {
    second_order_residual(v, [0, 16, -64], [12, -112], -5)
}

/// Both sides of `-(2n)! (n!)^2 g(z) = (16z - 2)^n f(1/(16z - 2)^2)` for
/// `p = 4n + 1`, the right side expanded as `sum_k f_k (16z - 2)^{n - 2k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgIdentity {
    pub lhs: Poly,
    pub rhs: Poly,
}

impl FgIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn check_fg_identity(p: u64) -> Result<FgIdentity> {
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("f-g identity needs p = 1 mod 4, got {p}")));
    }
    let ctx = FieldCtx::prime(p)?;
    let ring = Ring::Field(ctx);
    let n = ((p - 1) / 4) as usize;
    let f = build_f(p)?;
    let g = build_g(p)?;
    let fact = |k: u64| (1..=k).fold(1u64, |acc, i| mul_mod(acc, i, p));
    let scale = mul_mod(fact(2 * n as u64), mul_mod(fact(n as u64), fact(n as u64), p), p);
    let lhs = g.scale(ring.neg(FqElem { a0: scale, a1: 0 }));
    let lin = Poly::from_ints(ring, &[-2, 16]);
    let mut rhs = Poly::zero(ring);
    for (k, &fk) in f.coeffs().iter().enumerate() {
        let e = n.checked_sub(2 * k).ok_or_else(|| {
            Error::Consistency(format!("deg f exceeds n/2 for p = {p}"))
        })?;
        rhs = rhs.add(&lin.pow(e).scale(fk));
    }
    Ok(FgIdentity { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::primes_up_to;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    /// `(x + c)^e` over Z, low to high.
    fn binomial_expand(c: i64, e: u64) -> Vec<BigInt> {
        (0..=e)
            .map(|k| BigInt::from(binomial(e, k)) * BigInt::from(c).pow((e - k) as u32))
            .collect()
    }

    #[test]
    fn homogeneous_examples() {
        let f7 = fp(7);
        let r = Ring::Field(f7);
        let p = Poly::from_ints(r, &[1, 0, 1]);
        assert_eq!(p.eval_homogeneous(FqElem::ZERO, f7.from_int(2)), f7.from_int(4));
        for y in 0..7 {
            let y = f7.from_int(y);
            assert_eq!(p.eval_homogeneous(FqElem::ONE, y), p.eval(y));
        }
        let q = Poly::from_ints(r, &[3, 2]);
        assert_eq!(q.eval_homogeneous(f7.from_int(2), f7.from_int(5)), f7.from_int(2));
    }

    #[test]
    fn homogeneous_matches_scaled_evaluation() {
        let ctx = FieldCtx::quadratic(5).unwrap();
        let r = Ring::Field(ctx);
        let poly = Poly::new(r, vec![ctx.elem(1, 2), ctx.elem(0, 3), ctx.elem(4, 4), ctx.elem(2, 0)]);
        for a in ctx.units() {
            for b in ctx.enumerate() {
                let expect = ctx.mul(ctx.pow(a, 3), poly.eval(ctx.div(b, a).unwrap()));
                assert_eq!(poly.eval_homogeneous(a, b), expect);
            }
        }
    }

    #[test]
    fn pm_examples() {
        let f = fp(1_000_003);
        let p3 = build_pm(3, f.from_int(3), &f).unwrap();
        assert_eq!(p3, Poly::from_ints(Ring::Field(f), &[54, 60, 6]));
        assert_eq!(p3, Poly::from_ints(Ring::Field(f), &[9, 10, 1]).scale(f.from_int(6)));
        let p1 = build_pm(1, f.from_int(17), &f).unwrap();
        assert_eq!(p1, Poly::from_ints(Ring::Field(f), &[2]));
        let z: Vec<i64> = pm_integer(3, 1).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(z, vec![6, 20, 6]);
    }

    #[test]
    fn pm_difference_of_powers_over_z() {
        for m in [1u64, 3, 5, 7] {
            let plus = binomial_expand(1, 2 * m);
            let minus = binomial_expand(-1, 2 * m);
            let diff: Vec<BigInt> = plus.iter().zip(&minus).map(|(a, b)| a - b).collect();
            // 2x * P_m(x^2, 1)
            let pm = pm_integer(m, 1);
            let mut rhs = vec![BigInt::zero(); (2 * m + 1) as usize];
            for (k, c) in pm.iter().enumerate() {
                rhs[2 * k + 1] = c * 2;
            }
            assert_eq!(diff, rhs, "m = {m}");
        }
    }

    fn small_fields() -> Vec<FieldCtx> {
        let mut out = Vec::new();
        for p in primes_up_to(47).into_iter().filter(|&p| p > 2) {
            out.push(fp(p));
            if p * p <= 49 {
                out.push(FieldCtx::quadratic(p).unwrap());
            }
        }
        out
    }

    #[test]
    fn pm_and_qm_scaling_laws() {
        for ctx in small_fields().into_iter().filter(|c| c.q() <= 49) {
            for m in [1u64, 3, 5] {
                for a in ctx.units().into_iter().step_by(3) {
                    let pm = build_pm(m, a, &ctx).unwrap();
                    let qm = build_qm(m, a, &ctx).unwrap();
                    for g in ctx.units() {
                        let ag = ctx.div(a, g).unwrap();
                        let pm_g = build_pm(m, ag, &ctx).unwrap();
                        let qm_g = build_qm(m, ag, &ctx).unwrap();
                        for x in ctx.enumerate() {
                            let x2 = ctx.square(x);
                            let lhs = pm.eval(ctx.mul(g, x2));
                            let rhs = ctx.mul(ctx.pow(g, m - 1), pm_g.eval(x2));
                            assert_eq!(lhs, rhs);
                            let lhs = qm.eval(ctx.mul(g, x2));
                            let rhs = ctx.mul(ctx.pow(g, (m - 1) / 2), qm_g.eval(x2));
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn qm_and_dickson_examples() {
        let f = fp(1_000_003);
        let r = Ring::Field(f);
        assert_eq!(build_qm(5, f.from_int(-1), &f).unwrap(), Poly::from_ints(r, &[5, 5, 1]));
        assert_eq!(build_qm(1, f.from_int(9), &f).unwrap(), Poly::from_ints(r, &[1]));
        assert_eq!(
            dickson_d(5, f.from_int(-1), &f).unwrap(),
            Poly::from_ints(r, &[0, 5, 0, 5, 0, 1])
        );
        assert!(build_qm(4, f.from_int(1), &f).is_err());
    }

    #[test]
    fn dickson_functional_equation() {
        // D_m(u + a/u, a) = u^m + (a/u)^m
        let ctx = FieldCtx::quadratic(7).unwrap();
        for m in [1u64, 3, 5, 7, 9] {
            for a in ctx.units().into_iter().step_by(5) {
                let d = dickson_d(m, a, &ctx).unwrap();
                for u in ctx.units() {
                    let au = ctx.div(a, u).unwrap();
                    let lhs = d.eval(ctx.add(u, au));
                    let rhs = ctx.add(ctx.pow(u, m), ctx.pow(au, m));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn permutation_examples() {
        let f7 = fp(7);
        let r = Ring::Field(f7);
        assert!(is_permutation_polynomial(&Poly::from_ints(r, &[0, 1])).unwrap());
        assert!(!is_permutation_polynomial(&Poly::from_ints(r, &[0, 0, 1])).unwrap());
        let f13 = fp(13);
        let d5 = dickson_d(5, f13.from_int(-1), &f13).unwrap();
        assert!(is_permutation_polynomial(&d5).unwrap());
    }

    #[test]
    fn dickson_permutation_criterion() {
        for ctx in small_fields() {
            let q = ctx.q();
            for m in (1..=9u64).step_by(2) {
                let expect = crate::modarith::gcd(m, q * q - 1) == 1;
                for a in ctx.units() {
                    let d = dickson_d(m, a, &ctx).unwrap();
                    assert_eq!(is_permutation_polynomial(&d).unwrap(), expect, "q={q} m={m} a={a}");
                }
            }
        }
    }

    #[test]
    fn f_and_g_examples() {
        let f13 = build_f(13).unwrap();
        assert_eq!(f13, Poly::from_ints(Ring::Field(fp(13)), &[1, 8]));
        let g5 = build_g(5).unwrap();
        assert_eq!(g5, Poly::from_ints(Ring::Field(fp(5)), &[1, 2]));
        assert_eq!(build_g(3).unwrap(), Poly::from_ints(Ring::Field(fp(3)), &[1]));
    }

    #[test]
    fn f_g_coefficients_match_direct_formulas() {
        // direct rational evaluation with exact integers, then one reduction
        for p in [13u64, 17, 29, 37, 41, 53, 61] {
            let g = build_g(p).unwrap();
            for k in 1..=(p - 1) / 4 {
                let dfact: BigUint = (1..=4 * k - 1).step_by(2).map(BigUint::from).product();
                let kfact: BigUint = (1..=k).map(BigUint::from).product();
                let den = BigUint::from(4u32).pow(k as u32) * &kfact * &kfact;
                let num = (dfact % p).to_u64().unwrap();
                let den = (den % p).to_u64().unwrap();
                let expect = mul_mod(num, inv_mod(den, p).unwrap(), p);
                assert_eq!(g.coeff(k as usize).a0, expect);
            }
            let f = build_f(p).unwrap();
            for k in 1..=(p - 1) / 8 {
                let mut num = BigUint::one();
                let mut den = BigUint::one();
                for j in 0..k {
                    num *= (8 * j + 1) * (8 * j + 5);
                    den *= 4 * (j + 1) * (4 * j + 3);
                }
                let expect = mul_mod(
                    (num % p).to_u64().unwrap(),
                    inv_mod((den % p).to_u64().unwrap(), p).unwrap(),
                    p,
                );
                assert_eq!(f.coeff(k as usize).a0, expect);
            }
        }
    }

    #[test]
    fn ode_examples() {
        assert!(ode_residual_g(&build_g(13).unwrap()).is_zero());
        let r = Ring::Field(fp(13));
        assert!(ode_residual_g(&Poly::zero(r)).is_zero());
        let z = Poly::from_ints(r, &[0, 1]);
        assert_eq!(ode_residual_g(&z), Poly::from_ints(r, &[4, 4]));
        for p in primes_up_to(101).into_iter().filter(|&p| p > 2) {
            assert!(ode_residual_g(&build_g(p).unwrap()).is_zero(), "g, p={p}");
            if p % 4 == 1 {
                assert!(ode_residual_f(&build_f(p).unwrap()).is_zero(), "f, p={p}");
            }
        }
    }

    #[test]
    fn ode_g_has_no_small_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [13u64, 29, 37, 41] {
            let ctx = fp(p);
            let r = Ring::Field(ctx);
            let bound = ((p - 1) / 4) as usize;
            for _ in 0..100 {
                let deg = rng.gen_range(0..bound);
                let coeffs: Vec<FqElem> =
                    (0..=deg).map(|_| ctx.from_int(rng.gen_range(0..p) as i64)).collect();
                let u = Poly::new(r, coeffs);
                if !u.is_zero() {
                    assert!(!ode_residual_g(&u).is_zero());
                }
            }
        }
    }

    #[test]
    fn fg_identity() {
        // p = 5: n = 1, f = 1, lhs = -(2!)(1!)^2 g(z) = -2 (1 + 2z) = 3 + z (mod 5),
        // rhs = 16z - 2 = z + 3 (mod 5)
        let id = check_fg_identity(5).unwrap();
        assert_eq!(id.lhs, Poly::from_ints(Ring::Field(fp(5)), &[3, 1]));
        assert!(id.holds());
        for p in [13u64, 17, 29, 37, 41, 53, 61, 73, 89, 97] {
            assert!(check_fg_identity(p).unwrap().holds(), "p = {p}");
        }
        assert!(check_fg_identity(7).is_err());
    }

    #[test]
    fn render_and_parse() {
        let f13 = fp(13);
        let r = Ring::Field(f13);
        let p = Poly::from_ints(r, &[5, 0, 8, 1]);
        assert_eq!(p.to_string(), "5 + 8*z^2 + 1*z^3");
        assert_eq!(Poly::parse(&p.to_string(), r).unwrap(), p);
        assert_eq!(Poly::parse("x^2 + 5x + 5", r).unwrap(), Poly::from_ints(r, &[5, 5, 1]));
        assert_eq!(Poly::parse("-1 - z", r).unwrap(), Poly::from_ints(r, &[12, 12]));
        let f25 = FieldCtx::quadratic(5).unwrap();
        let r2 = Ring::Field(f25);
        let q = Poly::new(r2, vec![f25.elem(1, 2), FqElem::ZERO, f25.elem(0, 4)]);
        assert_eq!(Poly::parse(&q.to_string(), r2).unwrap(), q);
        assert!(Poly::parse("3*y^2", r).is_err());
        assert!(Poly::parse("", r).is_err());
    }
}

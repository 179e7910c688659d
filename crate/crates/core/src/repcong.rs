//! Representations `p = x^2 + m y^2` and truncated sums of
//! `C(4k,2k) C(2k,k) t^k` modulo `p^2`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{add_mod, inv_mod, is_prime, jacobi_unchecked, mul_mod, pow_mod, reduce, sqrt_mod_prime, sub_mod};

/// A solution of `x^2 + m y^2 = p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub p: u64,
    pub m: u64,
    pub x: i64,
    pub y: i64,
    pub normalized: bool,
}

impl Representation {
    /// The sign rule on `x` for each supported `m`.
    pub fn satisfies_normalization(m: u64, x: i64) -> bool {
        match m {
            2 | 4 => x.rem_euclid(4) == 1,
            3 => x.rem_euclid(3) == 1,
            7 => jacobi_unchecked(x.rem_euclid(7) as u64, 7) == 1,
            _ => false,
        }
    }

    pub fn is_valid(&self) -> bool {
        let (x, y) = (self.x as i128, self.y as i128);
        x * x + self.m as i128 * y * y == self.p as i128
            && (!self.normalized || Self::satisfies_normalization(self.m, self.x))
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Euclidean descent from a root `r` of `-d` mod `p`.
fn descend(p: u64, d: u64, r: u64) -> Option<(u64, u64)> {
    let bound = isqrt(p);
    let (mut a, mut b) = (p, r);
    while b > bound {
        (a, b) = (b, a % b);
    }
    let rest = p.checked_sub(b * b)?;
    if rest % d != 0 {
        return None;
    }
    let s = isqrt(rest / d);
    (s * s == rest / d).then_some((b, s))
}

/// Solve `x^2 + d y^2 = p` with `x, y >= 0`, trying both square roots.
fn cornacchia_raw(p: u64, d: u64) -> Option<(u64, u64)> {
    let r = sqrt_mod_prime((p - d % p) % p, p)?;
    descend(p, d, r).or_else(|| descend(p, d, p - r))
}

/// Cornacchia's algorithm for `m` in `{2, 3, 4, 7}`, normalized so that
/// `x` obeys the sign rule for `m` and `y >= 0`.
pub fn cornacchia(p: u64, m: u64) -> Result<Option<Representation>> {
    if !matches!(m, 2 | 3 | 4 | 7) {
        return Err(Error::Precondition(format!("m must be one of 2, 3, 4, 7, got {m}")));
    }
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m % p == 0 {
        return Err(Error::Precondition(format!("p = {p} divides m = {m}")));
    }
    let raw = if m == 4 {
        // x^2 + (2y)^2: take the sum of two squares and move the even part
        cornacchia_raw(p, 1).map(|(a, b)| if a % 2 == 1 { (a, b / 2) } else { (b, a / 2) })
    } else {
        cornacchia_raw(p, m)
    };
    let Some((x, y)) = raw else {
        return Ok(None);
    };
    let x = x as i64;
    let x = if Representation::satisfies_normalization(m, x) { x } else { -x };
    let rep = Representation {
        p,
        m,
        x,
        y: y as i64,
        normalized: true,
    };
    if !rep.is_valid() {
        return Err(Error::Consistency(format!("bad representation {rep:?}")));
    }
    Ok(Some(rep))
}

/// A residue modulo `p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModP2 {
    pub p: u64,
    pub value: u64,
}

impl ModP2 {
    pub fn new(p: u64, v: i128) -> Self {
        ModP2 { p, value: reduce(v, p * p) }
    }

    pub fn modulus(&self) -> u64 {
        self.p * self.p
    }

    pub fn add(self, o: ModP2) -> ModP2 {
        ModP2 { p: self.p, value: add_mod(self.value, o.value, self.modulus()) }
    }

    pub fn sub(self, o: ModP2) -> ModP2 {
        ModP2 { p: self.p, value: sub_mod(self.value, o.value, self.modulus()) }
    }

    pub fn mul(self, o: ModP2) -> ModP2 {
        ModP2 { p: self.p, value: mul_mod(self.value, o.value, self.modulus()) }
    }

    pub fn pow(self, e: u64) -> ModP2 {
        ModP2 { p: self.p, value: pow_mod(self.value, e, self.modulus()) }
    }

    /// Inverse, defined for units (`p` not dividing the value).
    pub fn inv(self) -> Option<ModP2> {
        inv_mod(self.value, self.modulus()).map(|value| ModP2 { p: self.p, value })
    }
}

/// `T_k = C(4k,2k) C(2k,k)` for `k < count`, exact.
pub fn central_binomial_terms(count: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count);
    let mut t = BigUint::one();
    for k in 0..count as u64 {
        if k > 0 {
            t *= (4 * k) * (4 * k - 1) * (4 * k - 2) * (4 * k - 3);
            t /= (2 * k) * (2 * k - 1) * k * k;
        }
        out.push(t.clone());
    }
    out
}

/// `T_k mod modulus` for `0 <= k < p`.
pub fn central_binomial_residues(p: u64, modulus: u64) -> Vec<u64> {
    let m = BigUint::from(modulus);
    central_binomial_terms(p as usize)
        .iter()
        .map(|t| (t % &m).to_u64().expect("fits"))
        .collect()
}

fn truncated_sum(terms: &[u64], t: u64, modulus: u64) -> u64 {
    let mut acc = 0;
    let mut tk = 1 % modulus;
    for &c in terms {
        acc = add_mod(acc, mul_mod(c, tk, modulus), modulus);
        tk = mul_mod(tk, t, modulus);
    }
    acc
}

/// `sum_{k=0}^{p-1} T_k t^k mod p^2`.
pub fn central_binom_sum(p: u64, t: ModP2) -> Result<ModP2> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = p * p;
    let terms = central_binomial_residues(p, m);
    Ok(ModP2 { p, value: truncated_sum(&terms, t.value % m, m) })
}

/// Same sum reduced modulo `p` only.
pub(crate) fn central_binom_sum_mod_p(terms_mod_p: &[u64], t: u64, p: u64) -> u64 {
    truncated_sum(terms_mod_p, t % p, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyCheck {
    pub p: u64,
    pub modulus: u64,
    /// `(degree, coefficient)` for every coefficient that failed to vanish.
    pub nonzero: Vec<(usize, u64)>,
    pub holds: bool,
}

/// Expands `sum_{k<p} T_k/64^k (x^k - (-2/p)(1-x)^k)` coefficientwise
/// modulo `p^2` (modulo 3 when `p = 3`).
pub fn lemma22_polycheck(p: u64) -> Result<PolyCheck> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let modulus = if p == 3 { 3 } else { p * p };
    let coeffs = lemma22_coeffs(p, modulus, jacobi_unchecked(p - 2, p));
    let nonzero: Vec<(usize, u64)> = coeffs
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    Ok(PolyCheck { p, modulus, holds: nonzero.is_empty(), nonzero })
}

fn lemma22_coeffs(p: u64, modulus: u64, sign: i8) -> Vec<u64> {
    let inv64 = inv_mod(64 % modulus, modulus).expect("odd modulus");
    let n = p as usize;
    let terms = central_binomial_residues(p, modulus);
    let weights: Vec<u64> = terms
        .iter()
        .enumerate()
        .map(|(k, &t)| mul_mod(t, pow_mod(inv64, k as u64, modulus), modulus))
        .collect();
    // (1-x)^k contributes (-1)^j C(k,j) x^j
    let mut coeffs = weights.clone();
    let mut row = vec![1 % modulus];
    for (k, &w) in weights.iter().enumerate() {
        if k > 0 {
            let mut next = vec![1 % modulus; k + 1];
            for j in 1..k {
                next[j] = add_mod(row[j - 1], row[j], modulus);
            }
            row = next;
        }
        for (j, &b) in row.iter().enumerate() {
            let mut term = mul_mod(w, b, modulus);
            if j % 2 == 1 {
                term = sub_mod(0, term, modulus);
            }
            coeffs[j] = if sign == 1 {
                sub_mod(coeffs[j], term, modulus)
            } else {
                add_mod(coeffs[j], term, modulus)
            };
        }
    }
    debug_assert_eq!(coeffs.len(), n);
    coeffs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma31Check {
    pub p: u64,
    pub representation: Option<Representation>,
    /// `sum_{k<p} T_k / 128^k mod p^2`.
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// The sum `sum_{k<p} T_k / 128^k` against its predicted value mod `p^2`:
/// `(-1)^floor((p+5)/8) (2x - p (2x)^-1)` when `p = 1, 3 mod 8` and
/// `p = x^2 + 2y^2` with `x = 1 mod 4`, zero otherwise.
pub fn lemma31_check(p: u64) -> Result<Lemma31Check> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::Precondition(format!("need a prime p > 3, got {p}")));
    }
    let m = p * p;
    let t = ModP2::new(p, 128).inv().expect("p odd");
    let lhs = central_binom_sum(p, t)?.value;
    let (representation, rhs) = match p % 8 {
        1 | 3 => {
            let rep = cornacchia(p, 2)?
                .ok_or_else(|| Error::Consistency(format!("{p} = x^2 + 2y^2 has no solution")))?;
            let two_x = ModP2::new(p, 2 * rep.x as i128);
            let correction = ModP2::new(p, p as i128).mul(two_x.inv().expect("p does not divide 2x"));
            let mut v = two_x.sub(correction);
            if ((p + 5) / 8) % 2 == 1 {
                v = ModP2::new(p, 0).sub(v);
            }
            (Some(rep), v.value)
        }
        _ => (None, 0),
    };
    Ok(Lemma31Check { p, representation, lhs, rhs, holds: lhs == rhs && lhs < m })
}

//! Integer and modular arithmetic: Jacobi symbols, factorization of odd
//! moduli, quadratic-residue tests with square-root certificates, CRT,
//! and the small closed forms (power sums, half factorials) the character
//! sum identities lean on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(reduce(old_s, m))
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// All primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`, by binary reciprocity.
///
/// `(a/1) = 1` for every `a`.
pub fn jacobi(a: i64, n: i64) -> Result<i8> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::InvalidModulus(n as i128));
    }
    let n = n as u64;
    Ok(jacobi_unchecked(reduce(a as i128, n), n))
}

/// Jacobi symbol for `0 <= a` and odd `n >= 1`. Callers guarantee `n` odd.
pub fn jacobi_unchecked(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2/n) = -1 iff n = 3, 5 (mod 8)
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// An odd positive modulus together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddModulus {
    n: u64,
    factors: Vec<(u64, u32)>,
    squarefree: bool,
}

impl OddModulus {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with primes ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn jacobi(&self, a: i64) -> i8 {
        jacobi_unchecked(reduce(a as i128, self.n), self.n)
    }
}

/// Factors an odd `n >= 1`: trial division to 1000, then Pollard rho.
pub fn factorize(n: u64) -> Result<OddModulus> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::InvalidModulus(n as i128));
    }
    let mut factors = factor_u64(n);
    factors.sort_unstable();
    let squarefree = factors.iter().all(|&(_, e)| e == 1);
    Ok(OddModulus {
        n,
        factors,
        squarefree,
    })
}

/// Factorization of any `n >= 1` as sorted `(prime, exponent)` pairs.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p)
    {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    };
    let mut d = 2u64;
    while d <= 1000 && d * d <= n {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = if n > 1 { vec![n] } else { Vec::new() };
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            push(m, &mut out);
            continue;
        }
        // trial division only leaves composites with all prime factors > 1000
        let f = pollard_brent(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
///
/// Returns the smaller of the two roots, `Some(0)` for `a = 0`, `None` for
/// non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(r.min(p - r))
}

/// Square root of a unit `a` modulo `p^e` for an odd prime `p`, by Hensel
/// lifting the Tonelli-Shanks root.
pub fn sqrt_mod_prime_power(a: u64, p: u64, e: u32) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let mut root = sqrt_mod_prime(a, p)?;
    let mut modulus = p;
    for _ in 1..e {
        modulus *= p;
        // r <- r - (r^2 - a) / (2r)
        let r2 = mul_mod(root, root, modulus);
        let diff = sub_mod(r2, a % modulus, modulus);
        let inv2r = inv_mod(mul_mod(2, root, modulus), modulus)?;
        root = sub_mod(root, mul_mod(diff, inv2r, modulus), modulus);
    }
    Some(root)
}

/// Square root of `m` modulo one prime power dividing the modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtCertificate {
    pub prime: u64,
    pub exponent: u32,
    pub root: u64,
}

impl SqrtCertificate {
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Per-prime-power square roots of `m` when `m` is a quadratic residue mod `n`.
pub fn qr_certificate(m: i64, n: &OddModulus) -> Option<Vec<SqrtCertificate>> {
    if gcd(reduce(m as i128, n.n()), n.n()) != 1 {
        return None;
    }
    n.factors()
        .iter()
        .map(|&(p, e)| {
            let pe = p.pow(e);
            let root = sqrt_mod_prime_power(reduce(m as i128, pe), p, e)?;
            Some(SqrtCertificate {
                prime: p,
                exponent: e,
                root,
            })
        })
        .collect()
}

/// `m R n`: `gcd(m, n) = 1` and `x^2 = m (mod n)` is solvable.
pub fn is_quadratic_residue(m: i64, n: &OddModulus) -> bool {
    qr_certificate(m, n).is_some()
}

/// `sum_{r=1}^{p-1} r^s mod p`, which is `p - 1` when `(p-1) | s` and
/// `0` otherwise (with `s = 0` counted as divisible).
pub fn power_sum(p: u64, s: u64) -> u64 {
    if s % (p - 1) == 0 {
        p - 1
    } else {
        0
    }
}

/// `((p-1)/2)! mod p` for a prime `p = 1 (mod 4)`; a square root of `-1`.
pub fn factorial_half(p: u64) -> Result<u64> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::Precondition(format!(
            "factorial_half needs a prime p = 1 mod 4, got {p}"
        )));
    }
    let q = (1..=(p - 1) / 2).fold(1u64, |acc, k| mul_mod(acc, k, p));
    if mul_mod(q, q, p) != p - 1 {
        return Err(Error::Consistency(format!("({p}-1)/2)!^2 != -1 mod {p}")));
    }
    if jacobi_unchecked(mul_mod(2, q, p), p) != 1 {
        return Err(Error::Consistency(format!("(2q/{p}) != 1")));
    }
    Ok(q)
}

/// Chinese remaindering of `(value, modulus)` pairs with pairwise coprime
/// moduli. Returns `(residue, product)`.
pub fn crt_combine(residues: &[(i64, u64)]) -> Result<(u64, u64)> {
    let mut acc: u64 = 0;
    let mut modulus: u64 = 1;
    for &(v, m) in residues {
        if m == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if gcd(modulus, m) != 1 {
            return Err(Error::NotCoprime(modulus, m));
        }
        let v = reduce(v as i128, m);
        let new_mod = modulus
            .checked_mul(m)
            .ok_or_else(|| Error::Overflow(format!("CRT modulus {modulus} * {m}")))?;
        // acc + modulus * t = v (mod m)
        let inv = inv_mod(modulus % m, m).expect("coprime");
        let t = mul_mod(sub_mod(v, acc % m, m), inv, m);
        acc = ((acc as u128 + modulus as u128 * t as u128) % new_mod as u128) as u64;
        modulus = new_mod;
    }
    Ok((acc, modulus))
}

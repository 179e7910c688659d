//! Arithmetic in `F_p` and `F_{p^2} = F_p(sqrt g)`, the quadratic character,
//! square roots, and the canonical element order used to index matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{
    add_mod, inv_mod, is_prime, jacobi_unchecked, mul_mod, reduce, sqrt_mod_prime,
    sub_mod,
};

/// Least positive quadratic non-residue modulo an odd prime.
pub fn nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&g| jacobi_unchecked(g, p) == -1)
        .expect("odd primes have non-residues")
}

/// `a0 + a1 * sqrt(g)`; `a1 = 0` in a prime field. Ordering is
/// lexicographic on `(a0, a1)`, which is the canonical enumeration order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FqElem {
    pub a0: u64,
    pub a1: u64,
}

impl FqElem {
    pub const ZERO: FqElem = FqElem { a0: 0, a1: 0 };
    pub const ONE: FqElem = FqElem { a0: 1, a1: 0 };

    pub fn is_zero(&self) -> bool {
        self.a0 == 0 && self.a1 == 0
    }

    pub fn in_base_field(&self) -> bool {
        self.a1 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a1 == 0 {
            write!(f, "{}", self.a0)
        } else {
            write!(f, "[{},{}]", self.a0, self.a1)
        }
    }
}

/// The field `F_q` with `q = p` or `q = p^2`.
///
/// `g` is always the least non-residue mod `p`; for `degree = 2` the field is
/// `F_p[t]/(t^2 - g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldCtx {
    p: u64,
    degree: u32,
    g: u64,
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn quadratic(p: u64) -> Result<Self> {
        Self::new(p, 2)
    }

    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::Precondition(format!("p = {p} exceeds the supported range")));
        }
        if degree != 1 && degree != 2 {
            return Err(Error::Precondition(format!("unsupported extension degree {degree}")));
        }
        Ok(FieldCtx {
            p,
            degree,
            g: nonresidue(p),
        })
    }

    /// Builds `F_q` from the order `q`, which must be an odd prime or the
    /// square of one.
    pub fn from_order(q: u64) -> Result<Self> {
        if is_prime(q) {
            return Self::prime(q);
        }
        let r = (q as f64).sqrt().round() as u64;
        for p in r.saturating_sub(1)..=r + 1 {
            if p * p == q && is_prime(p) {
                return Self::quadratic(p);
            }
        }
        Err(Error::Precondition(format!("{q} is not p or p^2 for an odd prime p")))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.degree)
    }

    /// The non-residue `g` (also the square of the adjoined generator).
    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn base(&self) -> FieldCtx {
        FieldCtx { degree: 1, ..*self }
    }

    pub fn elem(&self, a0: i128, a1: i128) -> FqElem {
        let a1 = if self.degree == 1 { 0 } else { reduce(a1, self.p) };
        FqElem {
            a0: reduce(a0, self.p),
            a1,
        }
    }

    pub fn from_int(&self, a: i64) -> FqElem {
        self.elem(a as i128, 0)
    }

    /// The adjoined square root of `g`. Only meaningful in degree 2.
    pub fn sqrt_g(&self) -> FqElem {
        debug_assert_eq!(self.degree, 2);
        FqElem { a0: 0, a1: 1 }
    }

    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        FqElem {
            a0: add_mod(x.a0, y.a0, self.p),
            a1: add_mod(x.a1, y.a1, self.p),
        }
    }

    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        FqElem {
            a0: sub_mod(x.a0, y.a0, self.p),
            a1: sub_mod(x.a1, y.a1, self.p),
        }
    }

    pub fn neg(&self, x: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, x)
    }

    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        let p = self.p;
        if self.degree == 1 {
            return FqElem {
                a0: mul_mod(x.a0, y.a0, p),
                a1: 0,
            };
        }
        // (x0 + x1 t)(y0 + y1 t) with t^2 = g; p < 2^32 keeps every product in u128
        let x0y0 = x.a0 as u128 * y.a0 as u128;
        let x1y1 = (x.a1 as u128 * y.a1 as u128) % p as u128 * self.g as u128;
        let cross = x.a0 as u128 * y.a1 as u128 + x.a1 as u128 * y.a0 as u128;
        FqElem {
            a0: ((x0y0 + x1y1) % p as u128) as u64,
            a1: (cross % p as u128) as u64,
        }
    }

    pub fn scale(&self, c: u64, x: FqElem) -> FqElem {
        FqElem {
            a0: mul_mod(c, x.a0, self.p),
            a1: mul_mod(c, x.a1, self.p),
        }
    }

    pub fn square(&self, x: FqElem) -> FqElem {
        self.mul(x, x)
    }

    pub fn pow(&self, x: FqElem, mut e: u64) -> FqElem {
        let mut base = x;
        let mut acc = FqElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `N(x) = x * x^p`, an element of `F_p`. Identity in degree 1.
    pub fn norm(&self, x: FqElem) -> u64 {
        if self.degree == 1 {
            return x.a0;
        }
        sub_mod(
            mul_mod(x.a0, x.a0, self.p),
            mul_mod(self.g, mul_mod(x.a1, x.a1, self.p), self.p),
            self.p,
        )
    }

    /// `x^p`. Identity in degree 1.
    pub fn frobenius(&self, x: FqElem) -> FqElem {
        FqElem {
            a0: x.a0,
            a1: if x.a1 == 0 { 0 } else { self.p - x.a1 },
        }
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree == 1 {
            let a0 = inv_mod(x.a0, self.p).ok_or(Error::DivisionByZero)?;
            return Ok(FqElem { a0, a1: 0 });
        }
        // x^{-1} = conj(x) / N(x)
        let n_inv = inv_mod(self.norm(x), self.p).ok_or(Error::DivisionByZero)?;
        Ok(self.scale(n_inv, self.frobenius(x)))
    }

    pub fn div(&self, x: FqElem, y: FqElem) -> Result<FqElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Quadratic character: `0` at zero, else `x^{(q-1)/2}` as `+-1`.
    ///
    /// Computed as the Legendre symbol of the norm, which agrees with the
    /// power definition because `N(x)^{(p-1)/2} = x^{(q-1)/2}`.
    pub fn chi(&self, x: FqElem) -> i8 {
        jacobi_unchecked(self.norm(x), self.p)
    }

    /// `x^{(q-1)/2}` mapped to `{-1, 0, 1}`.
    pub fn chi_by_power(&self, x: FqElem) -> i8 {
        if x.is_zero() {
            return 0;
        }
        let r = self.pow(x, (self.q() - 1) / 2);
        if r == FqElem::ONE {
            1
        } else if r == self.from_int(-1) {
            -1
        } else {
            panic!("x^((q-1)/2) = {r} is not +-1")
        }
    }

    /// `z^{(q-1)/(p-1)} = z^{1 + p + ... + p^{n-1}}`; lands in `F_p`.
    pub fn norm_power(&self, z: FqElem) -> FqElem {
        let e = (self.q() - 1) / (self.p - 1);
        let r = self.pow(z, e);
        assert!(r.in_base_field(), "norm power {r} left the base field");
        r
    }

    /// Canonical square root when one exists in this field: the
    /// lexicographically smaller of `{r, -r}`.
    pub fn sqrt(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return Some(FqElem::ZERO);
        }
        let p = self.p;
        let root = if self.degree == 1 {
            self.from_int(sqrt_mod_prime(a.a0, p)? as i64)
        } else if a.a1 == 0 {
            match sqrt_mod_prime(a.a0, p) {
                Some(r) => FqElem { a0: r, a1: 0 },
                None => {
                    // a0 = g * s^2, root is s * sqrt(g)
                    let s = sqrt_mod_prime(mul_mod(a.a0, inv_mod(self.g, p)?, p), p)?;
                    FqElem { a0: 0, a1: s }
                }
            }
        } else {
            // (x0 + x1 t)^2 = a: x0^2 + g x1^2 = a0, 2 x0 x1 = a1, with
            // x0^2 = (a0 +- sqrt(N(a))) / 2
            let n = sqrt_mod_prime(self.norm(a), p)?;
            let inv2 = inv_mod(2, p)?;
            let mut found = None;
            for s in [n, sub_mod(0, n, p)] {
                let x0sq = mul_mod(add_mod(a.a0, s, p), inv2, p);
                if let Some(x0) = sqrt_mod_prime(x0sq, p) {
                    if x0 == 0 {
                        continue;
                    }
                    let x1 = mul_mod(a.a1, inv_mod(mul_mod(2, x0, p), p)?, p);
                    found = Some(FqElem { a0: x0, a1: x1 });
                    break;
                }
            }
            found?
        };
        debug_assert_eq!(self.square(root), a);
        Some(root.min(self.neg(root)))
    }

    /// `sqrt(a)` for a nonzero `a` in `F_p`, always inside this degree-2
    /// field: the base-field root when `a` is a residue mod `p`.
    pub fn sqrt_lift(&self, a: u64) -> Result<FqElem> {
        if self.degree != 2 {
            return Err(Error::Precondition("sqrt_lift needs the quadratic extension".into()));
        }
        let a = self.from_int((a % self.p) as i64);
        if a.is_zero() {
            return Err(Error::Precondition("sqrt_lift of zero".into()));
        }
        self.sqrt(a)
            .ok_or_else(|| Error::Consistency(format!("{a} has no square root in F_p^2")))
    }

    /// All `q` elements in canonical order: `(a0, a1)` lexicographic.
    pub fn enumerate(&self) -> Vec<FqElem> {
        let p = self.p;
        if self.degree == 1 {
            (0..p).map(|a0| FqElem { a0, a1: 0 }).collect()
        } else {
            (0..p)
                .flat_map(|a0| (0..p).map(move |a1| FqElem { a0, a1 }))
                .collect()
        }
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> Vec<FqElem> {
        self.enumerate().into_iter().filter(|x| !x.is_zero()).collect()
    }

    /// Position of `x` in [`FieldCtx::enumerate`].
    pub fn index_of(&self, x: FqElem) -> usize {
        if self.degree == 1 {
            x.a0 as usize
        } else {
            (x.a0 * self.p + x.a1) as usize
        }
    }

    pub fn is_square(&self, x: FqElem) -> bool {
        self.chi(x) >= 0
    }
}

/// Minimal field interface shared by `FieldCtx` and the generic extension
/// used for cubic extensions.
pub trait FiniteField {
    type Elem: Copy + Eq + fmt::Debug;

    fn characteristic(&self) -> u64;
    fn extension_degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_base(&self, c: u64) -> Self::Elem;
    fn add(&self, x: Self::Elem, y: Self::Elem) -> Self::Elem;
    fn mul(&self, x: Self::Elem, y: Self::Elem) -> Self::Elem;
    fn elements(&self) -> Vec<Self::Elem>;
    /// `Some(c)` when `x` is the image of `c` in `F_p`.
    fn to_base(&self, x: Self::Elem) -> Option<u64>;
    /// Coordinates over `F_p`, constant term first.
    fn coords(&self, x: Self::Elem) -> Vec<u64>;

    fn neg(&self, x: Self::Elem) -> Self::Elem {
        self.mul(self.from_base(self.characteristic() - 1), x)
    }

    fn order(&self) -> u64 {
        self.characteristic().pow(self.extension_degree())
    }

    fn pow(&self, x: Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl FiniteField for FieldCtx {
    type Elem = FqElem;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn extension_degree(&self) -> u32 {
        self.degree
    }
    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    fn one(&self) -> FqElem {
        FqElem::ONE
    }
    fn from_base(&self, c: u64) -> FqElem {
        FqElem { a0: c % self.p, a1: 0 }
    }
    fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        FieldCtx::add(self, x, y)
    }
    fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        FieldCtx::mul(self, x, y)
    }
    fn elements(&self) -> Vec<FqElem> {
        self.enumerate()
    }
    fn to_base(&self, x: FqElem) -> Option<u64> {
        x.in_base_field().then_some(x.a0)
    }
    fn coords(&self, x: FqElem) -> Vec<u64> {
        if self.degree == 1 {
            vec![x.a0]
        } else {
            vec![x.a0, x.a1]
        }
    }
}

/// Largest extension degree supported by [`ExtField`].
pub const MAX_EXT_DEGREE: usize = 3;

/// `F_{p^n} = F_p[t]/(m(t))` for `n` in `2..=3`, with `m` the first monic
/// irreducible polynomial in lexicographic order of its low coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    n: usize,
    /// Low coefficients of the monic modulus, `m(t) = t^n + sum_i modulus[i] t^i`.
    modulus: Vec<u64>,
}

pub type ExtElem = [u64; MAX_EXT_DEGREE];

impl ExtField {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(2..=MAX_EXT_DEGREE).contains(&n) {
            return Err(Error::Precondition(format!("extension degree {n} outside 2..={MAX_EXT_DEGREE}")));
        }
        // degree 2 and 3 polynomials are irreducible iff they have no root
        let total = p.pow(n as u32);
        let modulus = (0..total)
            .map(|code| {
                let mut c = code;
                (0..n)
                    .map(|_| {
                        let d = c % p;
                        c /= p;
                        d
                    })
                    .collect::<Vec<u64>>()
            })
            .find(|low| {
                (0..p).all(|x| {
                    let mut v = 1u64;
                    for &c in low.iter().rev() {
                        v = add_mod(mul_mod(v, x, p), c, p);
                    }
                    v != 0
                })
            })
            .expect("irreducible polynomials exist in every degree");
        Ok(ExtField { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

impl FiniteField for ExtField {
    type Elem = ExtElem;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn extension_degree(&self) -> u32 {
        self.n as u32
    }
    fn zero(&self) -> ExtElem {
        [0; MAX_EXT_DEGREE]
    }
    fn one(&self) -> ExtElem {
        self.from_base(1)
    }
    fn from_base(&self, c: u64) -> ExtElem {
        let mut e = [0; MAX_EXT_DEGREE];
        e[0] = c % self.p;
        e
    }
    fn add(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        let mut e = [0; MAX_EXT_DEGREE];
        for i in 0..self.n {
            e[i] = add_mod(x[i], y[i], self.p);
        }
        e
    }
    fn mul(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        let (p, n) = (self.p, self.n);
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x[i], y[j], p), p);
            }
        }
        // t^n = -sum modulus[i] t^i
        for k in (n..2 * n - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let sub = mul_mod(top, self.modulus[i], p);
                prod[k - n + i] = sub_mod(prod[k - n + i], sub, p);
            }
        }
        let mut e = [0; MAX_EXT_DEGREE];
        e[..n].copy_from_slice(&prod[..n]);
        e
    }
    fn elements(&self) -> Vec<ExtElem> {
        let total = self.p.pow(self.n as u32);
        (0..total)
            .map(|code| {
                let mut e = [0; MAX_EXT_DEGREE];
                let mut c = code;
                for i in (0..self.n).rev() {
                    e[i] = c % self.p;
                    c /= self.p;
                }
                e
            })
            .collect()
    }
    fn to_base(&self, x: ExtElem) -> Option<u64> {
        x[1..].iter().all(|&c| c == 0).then_some(x[0])
    }
    fn coords(&self, x: ExtElem) -> Vec<u64> {
        x[..self.n].to_vec()
    }
}

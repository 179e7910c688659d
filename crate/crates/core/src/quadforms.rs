//! Determinants with entries `((i^2 + cij + dj^2)/n)` and the row sums of
//! Jacobi-symbol products behind them.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{det_exact, IntMatrix};
use crate::modarith::{factorize, is_prime, jacobi, jacobi_unchecked, mul_mod, reduce, OddModulus};
use crate::repcong::{central_binom_sum_mod_p, central_binomial_residues, cornacchia};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    /// Indices `1..n`.
    Punctured,
    /// Indices `0..n`.
    Full,
}

impl std::str::FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "punctured" => Ok(FormKind::Punctured),
            "full" => Ok(FormKind::Full),
            _ => Err(Error::Parse(format!("unknown kind `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormDetSpec {
    pub c: i64,
    pub d: i64,
    pub n: OddModulus,
    pub kind: FormKind,
}

impl FormDetSpec {
    pub fn new(c: i64, d: i64, n: u64, kind: FormKind) -> Result<Self> {
        if n <= 1 {
            return Err(Error::InvalidModulus(n as i128));
        }
        Ok(FormDetSpec { c, d, n: factorize(n)?, kind })
    }

    fn first_index(&self) -> u64 {
        match self.kind {
            FormKind::Punctured => 1,
            FormKind::Full => 0,
        }
    }

    pub fn dim(&self) -> usize {
        (self.n.n() - self.first_index()) as usize
    }
}

/// `(k/n)` for every `k` in `[0, n)`.
fn jacobi_table(n: u64) -> Vec<i8> {
    (0..n).map(|k| jacobi_unchecked(k, n)).collect()
}

/// `i^2 + cij + dj^2 mod n`.
fn form_residue(c: i64, d: i64, i: i64, j: i64, n: u64) -> usize {
    let (i, j) = (i as i128, j as i128);
    reduce(i * i + c as i128 * i * j + d as i128 * j * j, n) as usize
}

pub fn build_form_matrix(spec: &FormDetSpec) -> IntMatrix {
    let n = spec.n.n();
    let table = jacobi_table(n);
    let off = spec.first_index() as i64;
    let dim = spec.dim();
    IntMatrix::from_fn(dim, dim, |r, s| {
        table[form_residue(spec.c, spec.d, r as i64 + off, s as i64 + off, n)] as i64
    })
}

pub fn form_det(spec: &FormDetSpec) -> Result<BigInt> {
    det_exact(&build_form_matrix(spec))
}

/// `(d/n) = -1`, which forces the punctured determinant to vanish.
pub fn vanish_by_nonresidue(spec: &FormDetSpec) -> Result<bool> {
    if spec.kind != FormKind::Punctured {
        return Err(Error::Precondition("vanishing by non-residue concerns the punctured kind".into()));
    }
    Ok(spec.n.jacobi(spec.d) == -1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationVerdict {
    pub c: i64,
    pub d: i64,
    pub p: u64,
    #[serde(with = "crate::decimal")]
    pub full: BigInt,
    #[serde(with = "crate::decimal")]
    pub punctured: BigInt,
    /// `p | c^2 - 4d`.
    pub degenerate: bool,
    /// The predicted ratio `full / punctured` as numerator and denominator.
    pub ratio: (i64, i64),
    /// Whether `numerator * punctured` is divisible by the denominator.
    pub exact_division: bool,
    pub holds: bool,
}

/// Checks `[c,d]_p = ((p-1)/2) (c,d)_p` when `p` does not divide
/// `c^2 - 4d`, and `[c,d]_p = ((1-p)/(p-2)) (c,d)_p` when it does.
pub fn full_vs_punctured_relation(c: i64, d: i64, p: u64) -> Result<RelationVerdict> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if jacobi(d, p as i64)? != 1 {
        return Err(Error::Precondition(format!("({d}/{p}) != 1")));
    }
    let full = form_det(&FormDetSpec::new(c, d, p, FormKind::Full)?)?;
    let punctured = form_det(&FormDetSpec::new(c, d, p, FormKind::Punctured)?)?;
    let disc = c as i128 * c as i128 - 4 * d as i128;
    let degenerate = disc.rem_euclid(p as i128) == 0;
    let pi = p as i64;
    let ratio = if degenerate { (1 - pi, pi - 2) } else { (pi - 1, 2) };
    let scaled = &punctured * BigInt::from(ratio.0);
    let den = BigInt::from(ratio.1);
    let exact_division = scaled.is_multiple_of(&den);
    let holds = exact_division && &full * &den == scaled;
    Ok(RelationVerdict {
        c,
        d,
        p,
        full,
        punctured,
        degenerate,
        ratio,
        exact_division,
        holds,
    })
}

/// `sum_{j=0}^{n-1} (j/n) ((i^2 + cij + dj^2)/n)`.
pub fn row_charsum(c: i64, d: i64, i: i64, n: u64) -> Result<i64> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::InvalidModulus(n as i128));
    }
    Ok(row_charsum_table(c, d, i, n, &jacobi_table(n), 1))
}

/// Row sum with the `j` symbol twisted by `(sign/n)`.
fn row_charsum_table(c: i64, d: i64, i: i64, n: u64, table: &[i8], sign: i64) -> i64 {
    (0..n as i64)
        .map(|j| {
            let jj = reduce((sign * j) as i128, n) as usize;
            table[jj] as i64 * table[form_residue(c, d, i, j, n)] as i64
        })
        .sum()
}

/// Product of the row sums over the prime divisors of a squarefree `n`.
pub fn charsum_crt_product(c: i64, d: i64, i: i64, n: &OddModulus) -> Result<i64> {
    if !n.is_squarefree() {
        return Err(Error::Precondition(format!("{} is not squarefree", n.n())));
    }
    n.primes().map(|p| row_charsum(c, d, i, p)).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumIdentity {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl SumIdentity {
    fn new(lhs: i64, rhs: i64) -> Self {
        SumIdentity { lhs, rhs, holds: lhs == rhs }
    }
}

/// `sum_j (j/n)((i^2+cij+dj^2)/n) = sum_j (-j/n)((i^2+2cij+(c^2-4d)j^2)/n)`
/// for squarefree odd `n`.
pub fn theorem12_identity(c: i64, d: i64, i: i64, n: &OddModulus) -> Result<SumIdentity> {
    if !n.is_squarefree() {
        return Err(Error::Precondition(format!("{} is not squarefree", n.n())));
    }
    let m = n.n();
    let table = jacobi_table(m);
    let lhs = row_charsum_table(c, d, i, m, &table, 1);
    let disc = c
        .checked_mul(c)
        .and_then(|cc| cc.checked_sub(d.checked_mul(4)?))
        .ok_or_else(|| Error::Overflow(format!("c^2 - 4d for c={c}, d={d}")))?;
    let rhs = row_charsum_table(2 * c, disc, i, m, &table, -1);
    Ok(SumIdentity::new(lhs, rhs))
}

/// Binomial sums needed by the mod-`p` congruence, shared across `(c,d,i)`.
pub struct Lemma21Ctx {
    p: u64,
    terms: Vec<u64>,
    table: Vec<i8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceCheck {
    /// Row sum reduced into `[0, p)`.
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

impl Lemma21Ctx {
    pub fn new(p: u64) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Lemma21Ctx {
            p,
            terms: central_binomial_residues(p, p),
            table: jacobi_table(p),
        })
    }

    /// Row sum against `-(ci/p) sum_k C(4k,2k) C(2k,k) (d/(16c^2))^k mod p`.
    pub fn check(&self, c: i64, d: i64, i: i64) -> Result<CongruenceCheck> {
        let p = self.p;
        let cr = reduce(c as i128, p);
        if cr == 0 {
            return Err(Error::Precondition(format!("p = {p} divides c = {c}")));
        }
        let lhs = reduce(row_charsum_table(c, d, i, p, &self.table, 1) as i128, p);
        let sixteen_c2 = mul_mod(16 % p, mul_mod(cr, cr, p), p);
        let t = mul_mod(
            reduce(d as i128, p),
            crate::modarith::inv_mod(sixteen_c2, p).expect("p does not divide 16c^2"),
            p,
        );
        let sum = central_binom_sum_mod_p(&self.terms, t, p);
        let sign = self.table[reduce(c as i128 * i as i128, p) as usize] as i128;
        let rhs = reduce(-sign * sum as i128, p);
        Ok(CongruenceCheck { lhs, rhs, holds: lhs == rhs })
    }
}

pub fn lemma21_congruence(c: i64, d: i64, i: i64, p: u64) -> Result<CongruenceCheck> {
    Lemma21Ctx::new(p)?.check(c, d, i)
}

/// `sum_j (j/p)((i^2+3cij+dj^2)/p) = (i/p) sum_x ((x^3-(3c^2-d)x+c(2c^2-d))/p)`.
pub fn lemma32_cubic_transform(c: i64, d: i64, i: i64, p: u64) -> Result<SumIdentity> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if reduce(d as i128, p) == 0 {
        return Err(Error::Precondition(format!("p = {p} divides d = {d}")));
    }
    let table = jacobi_table(p);
    let lhs = row_charsum_table(3 * c, d, i, p, &table, 1);
    let (c, d) = (c as i128, d as i128);
    let a1 = -(3 * c * c - d);
    let a0 = c * (2 * c * c - d);
    let cubic: i64 = (0..p as i128)
        .map(|x| table[reduce(x * x * x + a1 * x + a0, p) as usize] as i64)
        .sum();
    let rhs = table[reduce(i as i128, p) as usize] as i64 * cubic;
    Ok(SumIdentity::new(lhs, rhs))
}

/// The four forms with closed-form row sums, keyed by the `m` in
/// `p = x^2 + m y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClosedFormCase {
    /// `(4,2)`, `m = 2`.
    M2,
    /// `(3,2)`, `m = 4`.
    M4,
    /// `(3,3)`, `m = 3`.
    M3,
    /// `(21,112)`, `m = 7`.
    M7,
}

impl ClosedFormCase {
    pub const ALL: [ClosedFormCase; 4] = [Self::M2, Self::M4, Self::M3, Self::M7];

    pub fn coefficients(self) -> (i64, i64) {
        match self {
            Self::M2 => (4, 2),
            Self::M4 => (3, 2),
            Self::M3 => (3, 3),
            Self::M7 => (21, 112),
        }
    }

    pub fn m(self) -> u64 {
        match self {
            Self::M2 => 2,
            Self::M4 => 4,
            Self::M3 => 3,
            Self::M7 => 7,
        }
    }

    /// Whether `p` admits the representation the closed form is built on.
    fn represented(self, p: u64) -> bool {
        match self {
            Self::M4 => p % 4 == 1,
            _ => p as i64 % self.m() as i64 != 0 && jacobi(-(self.m() as i64), p as i64) == Ok(1),
        }
    }
}

/// Closed form of `row_charsum(c, d, i, p)` for the four cases, built on the
/// normalized representation of `p`.
pub fn lemma33_closed_form(case: ClosedFormCase, i: i64, p: u64) -> Result<i64> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !case.represented(p) {
        return Ok(0);
    }
    let rep = cornacchia(p, case.m())?.ok_or_else(|| {
        Error::Consistency(format!("no representation of {p} as x^2 + {}y^2", case.m()))
    })?;
    let pi = p as i64;
    let two_x = 2 * rep.x;
    let sym = |a: i64| jacobi(a, pi).expect("odd prime");
    let v = match case {
        ClosedFormCase::M2 => {
            let sign = if ((p - 3) / 8) % 2 == 0 { 1 } else { -1 };
            sign * sym(i) as i64 * two_x
        }
        ClosedFormCase::M4 => -(sym(2 * i) as i64) * two_x,
        ClosedFormCase::M3 => -(sym(-i) as i64) * two_x,
        ClosedFormCase::M7 => -(sym(i) as i64) * two_x,
    };
    Ok(v)
}

/// `|sum| < p`, which every prime-modulus row sum satisfies.
pub fn row_charsum_bounded(sum: i64, p: u64) -> bool {
    sum.unsigned_abs() < p
}

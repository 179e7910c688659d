//! Exact linear algebra over the integers.
//!
//! Determinants are computed multi-modularly: the Hadamard bound fixes how
//! many word-size primes are needed, each prime gets its own elimination,
//! and the residues are recombined with the CRT. Fraction-free Bareiss
//! elimination is kept as an independent oracle and as the rank engine.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{crt_combine, factor_u64, inv_mod, is_prime, mul_mod, sub_mod};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(BigInt::from(f(i, j)));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| (i == j) as i64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, j);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Entries reduced into `[0, m)`.
    fn reduced(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        self.entries
            .iter()
            .map(|e| e.mod_floor(&mb).to_u64().expect("reduced entry fits"))
            .collect()
    }
}

/// Fixture format: first line `rows cols`, then row-major integers.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what}")))
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        let entries = tokens
            .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::new(rows, cols, entries)
    }
}

/// Upper bound on `|det M|`: product of the row Euclidean norms, rounded up.
pub fn hadamard_bound(m: &IntMatrix) -> BigUint {
    let mut prod = BigUint::one();
    for i in 0..m.rows {
        let norm2: BigUint = m.row(i).iter().map(|e| e.magnitude() * e.magnitude()).sum();
        if norm2.is_zero() {
            return BigUint::zero();
        }
        prod *= norm2;
    }
    let root = prod.sqrt();
    if &root * &root == prod {
        root
    } else {
        root + 1u32
    }
}

/// Deterministic ladder of primes descending from `2^62`.
pub fn prime_ladder(count: usize) -> Vec<u64> {
    static LADDER: OnceLock<std::sync::Mutex<Vec<u64>>> = OnceLock::new();
    let cell = LADDER.get_or_init(|| std::sync::Mutex::new(Vec::new()));
    let mut ladder = cell.lock().expect("prime ladder lock");
    let mut cand = ladder.last().map_or((1u64 << 62) + 1, |&p| p);
    while ladder.len() < count {
        cand -= 2;
        if is_prime(cand) {
            ladder.push(cand);
        }
    }
    ladder[..count].to_vec()
}

/// Determinant modulo a prime by Gaussian elimination.
pub fn det_mod_prime(m: &IntMatrix, p: u64) -> Result<u64> {
    if !m.is_square() {
        return Err(Error::NotSquareMatrix { rows: m.rows, cols: m.cols });
    }
    Ok(det_mod_prime_power_reduced(m.reduced(p), m.rows, p, 1))
}

/// Elimination over `Z/p^k`, pivoting on the entry of least `p`-valuation
/// so every elimination factor is an honest ring element.
fn det_mod_prime_power_reduced(mut a: Vec<u64>, n: usize, p: u64, k: u32) -> u64 {
    let modulus = p.pow(k);
    if modulus == 1 {
        return 0;
    }
    let valuation = |mut x: u64| {
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut det = 1u64;
    for c in 0..n {
        let mut best: Option<(usize, u32)> = None;
        for r in c..n {
            let e = a[r * n + c];
            if e == 0 {
                continue;
            }
            let v = valuation(e);
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((r, v));
                if v == 0 {
                    break;
                }
            }
        }
        let Some((r, v)) = best else {
            return 0;
        };
        if r != c {
            for j in 0..n {
                a.swap(r * n + j, c * n + j);
            }
            det = sub_mod(0, det, modulus);
        }
        let pivot = a[c * n + c];
        det = mul_mod(det, pivot, modulus);
        let pv = p.pow(v);
        let unit_inv = inv_mod(pivot / pv, modulus).expect("unit part of pivot");
        for r in c + 1..n {
            let e = a[r * n + c];
            if e == 0 {
                continue;
            }
            let factor = mul_mod(e / pv, unit_inv, modulus);
            for j in c..n {
                let sub = mul_mod(factor, a[c * n + j], modulus);
                a[r * n + j] = sub_mod(a[r * n + j], sub, modulus);
            }
        }
    }
    det
}

/// Determinant modulo any `m >= 1`, by CRT over its prime-power legs.
pub fn det_mod(m: &IntMatrix, modulus: u64) -> Result<u64> {
    if !m.is_square() {
        return Err(Error::NotSquareMatrix { rows: m.rows, cols: m.cols });
    }
    if modulus == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let legs = factor_u64(modulus)
        .into_iter()
        .map(|(p, k)| {
            let pk = p.pow(k);
            let d = det_mod_prime_power_reduced(m.reduced(pk), m.rows, p, k);
            (d as i64, pk)
        })
        .collect::<Vec<_>>();
    if legs.is_empty() {
        return Ok(0);
    }
    Ok(crt_combine(&legs)?.0)
}

/// Exact determinant: multi-modular with a Hadamard-sized prime set.
/// Matrices of dimension at most 64 are cross-checked against Bareiss in
/// debug builds.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquareMatrix { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let bound = hadamard_bound(m);
    if bound.is_zero() {
        return Ok(BigInt::zero());
    }
    // the product of primes must exceed 2B + 1 to pin the symmetric residue
    let target: BigUint = bound * 2u32 + 1u32;
    let mut count = 1;
    let primes = loop {
        let ladder = prime_ladder(count);
        let prod: BigUint = ladder.iter().map(|&p| BigUint::from(p)).product();
        if prod > target {
            break ladder;
        }
        count += 1;
    };
    let residues: Vec<u64> = primes
        .par_iter()
        .map(|&p| det_mod_prime_power_reduced(m.reduced(p), n, p, 1))
        .collect();
    let det = crt_symmetric(&residues, &primes);
    #[cfg(debug_assertions)]
    if n <= 64 {
        debug_assert_eq!(det, det_bareiss(m)?, "multi-modular and Bareiss determinants disagree");
    }
    Ok(det)
}

/// CRT recombination into the symmetric range `(-M/2, M/2]`.
fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        let acc_mod_p = acc.mod_floor(&pb).to_u64().expect("fits");
        let m_mod_p = modulus.mod_floor(&pb).to_u64().expect("fits");
        let t = mul_mod(sub_mod(r, acc_mod_p, p), inv_mod(m_mod_p, p).expect("distinct primes"), p);
        acc += &modulus * BigInt::from(t);
        modulus *= pb;
    }
    let half = &modulus >> 1usize;
    if acc > half {
        acc -= modulus;
    }
    acc
}

/// Fraction-free Bareiss determinant.
pub fn det_bareiss(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquareMatrix { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
            return Ok(BigInt::zero());
        };
        if piv != k {
            a.swap_rows(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(k, k) * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    let det = a.get(n - 1, n - 1).clone();
    Ok(if sign < 0 { -det } else { det })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    FractionFree,
    /// Full rank witnessed modulo a prime; rank over `Q` can only be larger.
    MultimodularCertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub kernel_dim: usize,
    pub method: RankMethod,
}

/// Rank modulo a prime.
pub fn rank_mod_prime(m: &IntMatrix, p: u64) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.reduced(p);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(piv * cols + j, rank * cols + j);
        }
        let inv = inv_mod(a[rank * cols + c], p).expect("prime modulus");
        for r in rank + 1..rows {
            let e = a[r * cols + c];
            if e == 0 {
                continue;
            }
            let factor = mul_mod(e, inv, p);
            for j in c..cols {
                let sub = mul_mod(factor, a[rank * cols + j], p);
                a[r * cols + j] = sub_mod(a[r * cols + j], sub, p);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact rank over `Q` and `kernel_dim = cols - rank`.
///
/// A full-rank verdict modulo one ladder prime certifies full rank over
/// `Q`; anything less is settled by fraction-free elimination.
pub fn rank_kernel(m: &IntMatrix) -> RankResult {
    let full = m.rows.min(m.cols);
    if rank_mod_prime(m, prime_ladder(1)[0]) == full {
        return RankResult {
            rank: full,
            kernel_dim: m.cols - full,
            method: RankMethod::MultimodularCertified,
        };
    }
    let rank = rank_fraction_free(m);
    RankResult {
        rank,
        kernel_dim: m.cols - rank,
        method: RankMethod::FractionFree,
    }
}

/// Bareiss elimination with column skipping; every division is exact
/// because each updated entry is a minor of the input.
pub fn rank_fraction_free(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a.get(r, c).is_zero()) else {
            continue;
        };
        a.swap_rows(piv, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = a.get(rank, c) * a.get(i, j) - a.get(i, c) * a.get(rank, j);
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact Bareiss division");
                a.set(i, j, q);
            }
            a.set(i, c, BigInt::zero());
        }
        prev = a.get(rank, c).clone();
        rank += 1;
    }
    rank
}

/// Sign of a determinant as `-1`, `0`, or `1`.
pub fn sign_of(d: &BigInt) -> i32 {
    match d.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
fn abs_le(a: &BigInt, b: &BigUint) -> bool {
    a.magnitude() <= b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0];
        }
        let mut total = 0;
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += sign * m[0][j] * cofactor_det(&minor);
        }
        total
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, with_zero: bool) -> Vec<Vec<i64>> {
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if with_zero {
                            rng.gen_range(-1..=1)
                        } else if rng.gen_bool(0.5) {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_exact(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(det_exact(&swap).unwrap(), BigInt::from(-1));
        assert!(det_exact(&IntMatrix::zeros(2, 3)).is_err());
        assert_eq!(det_exact(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn det_of_form_3_2_mod_5() {
        // entries ((i^2 + 3ij + 2j^2)/5), 1 <= i, j <= 4, evaluated by hand
        let rows: Vec<Vec<i64>> = (1..5)
            .map(|i: i64| {
                (1..5)
                    .map(|j: i64| {
                        let v = (i * i + 3 * i * j + 2 * j * j).rem_euclid(5);
                        [0, 1, -1, -1, 1][v as usize]
                    })
                    .collect()
            })
            .collect();
        let oracle = cofactor_det(&rows);
        assert_eq!(oracle, 0);
        let m = IntMatrix::from_rows(&rows).unwrap();
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(oracle));
    }

    #[test]
    fn det_mod_examples() {
        assert_eq!(det_mod(&IntMatrix::identity(4), 7).unwrap(), 1);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(det_mod(&swap, 5).unwrap(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let m = IntMatrix::from_rows(&random_matrix(&mut rng, 6, false)).unwrap();
            let exact = det_exact(&m).unwrap();
            for modulus in [97u64, 2, 8, 9, 27 * 25, 1000, 3 * 3 * 5 * 7 * 7] {
                let expect = exact.mod_floor(&BigInt::from(modulus)).to_u64().unwrap();
                assert_eq!(det_mod(&m, modulus).unwrap(), expect, "mod {modulus}");
            }
        }
    }

    #[test]
    fn small_dets_match_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=6 {
            for _ in 0..30 {
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
                    .collect();
                let m = IntMatrix::from_rows(&rows).unwrap();
                let oracle = BigInt::from(cofactor_det(&rows));
                assert_eq!(det_exact(&m).unwrap(), oracle);
                assert_eq!(det_bareiss(&m).unwrap(), oracle);
            }
        }
    }

    #[test]
    fn multimodular_matches_bareiss() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(1..=20);
            let m = IntMatrix::from_rows(&random_matrix(&mut rng, n, true)).unwrap();
            let d = det_exact(&m).unwrap();
            assert_eq!(d, det_bareiss(&m).unwrap());
            assert!(abs_le(&d, &hadamard_bound(&m)));
        }
    }

    #[test]
    fn large_matrix_uses_several_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = IntMatrix::from_rows(&random_matrix(&mut rng, 90, false)).unwrap();
        let b = hadamard_bound(&m);
        assert!(b.bits() > 250);
        let d = det_exact(&m).unwrap();
        assert!(abs_le(&d, &b));
        assert_eq!(
            det_mod(&m, 1_000_003).unwrap(),
            d.mod_floor(&BigInt::from(1_000_003)).to_u64().unwrap()
        );
    }

    #[test]
    fn row_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(2..=12);
            let rows = random_matrix(&mut rng, n, true);
            let m = IntMatrix::from_rows(&rows).unwrap();
            let d = det_exact(&m).unwrap();
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                let mut s = m.clone();
                s.swap_rows(a, b);
                assert_eq!(det_exact(&s).unwrap(), -d.clone());
                let mut dup = rows.clone();
                dup[b] = dup[a].clone();
                let dup = IntMatrix::from_rows(&dup).unwrap();
                assert!(det_exact(&dup).unwrap().is_zero());
                assert!(rank_kernel(&dup).kernel_dim >= 1);
            }
            assert_eq!(d.is_zero(), rank_kernel(&m).kernel_dim >= 1);
        }
    }

    #[test]
    fn rank_examples() {
        let r = rank_kernel(&IntMatrix::zeros(3, 3));
        assert_eq!((r.rank, r.kernel_dim), (0, 3));
        for n in 1..6 {
            let r = rank_kernel(&IntMatrix::identity(n));
            assert_eq!((r.rank, r.kernel_dim), (n, 0));
        }
        // outer products have rank 1; sums of two have rank 2
        let m = IntMatrix::from_fn(5, 7, |i, j| (i as i64 + 1) * (j as i64 - 3) + (i as i64 % 2) * 2);
        assert_eq!(rank_kernel(&m).rank, 2);
        assert_eq!(rank_fraction_free(&m), 2);
        assert_eq!(rank_kernel(&m.transpose()).rank, 2);
    }

    #[test]
    fn rank_of_products_of_thin_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let n = rng.gen_range(3..=15);
            let r = rng.gen_range(1..=n);
            let a = IntMatrix::from_fn(n, r, |_, _| rng.gen_range(-3..=3));
            let b = IntMatrix::from_fn(r, n, |_, _| rng.gen_range(-3..=3));
            let prod = a.mul(&b).unwrap();
            let rk = rank_kernel(&prod);
            assert!(rk.rank <= r);
            assert_eq!(rk.rank, rank_fraction_free(&prod));
            assert_eq!(rk.rank + rk.kernel_dim, n);
        }
    }

    #[test]
    fn fixture_round_trip() {
        let m = IntMatrix::from_rows(&[vec![1, -2, 3], vec![0, 5, -6]]).unwrap();
        let text = m.to_string();
        assert_eq!(text, "2 3\n1 -2 3\n0 5 -6\n");
        assert_eq!(text.parse::<IntMatrix>().unwrap(), m);
        assert!("2 2\n1 2 3".parse::<IntMatrix>().is_err());
        assert!("x".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn ladder_is_deterministic_and_descending() {
        let a = prime_ladder(5);
        let b = prime_ladder(3);
        assert_eq!(&a[..3], &b[..]);
        assert!(a.windows(2).all(|w| w[0] > w[1]));
        assert!(a.iter().all(|&p| is_prime(p) && p < 1 << 62));
    }
}

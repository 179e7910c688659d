//! Named verification suites over parameter ranges, the record cache, and
//! report emission.
//!
//! Every suite expands its range into a sorted list of parameter objects; a
//! checker maps one parameter object to a verdict and a witness. Because the
//! checker sees only the parameters, any recorded failure can be replayed
//! with [`check`].

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::charmatrix::{
    check_lemma41, check_lemma42, chi_minus_one_trivial, first_nonsquare, theorem41_sum, theorem42_sum,
    Variant,
};
use crate::error::{Error, Result};
use crate::finitefield::{ExtField, FieldCtx, FiniteField, FqElem};
use crate::modarith::{factor_u64, gcd, is_prime, jacobi, OddModulus};
use crate::polyalg::{
    build_f, build_g, build_pm, build_qm, check_fg_identity, ode_residual_f, ode_residual_g, Poly, Ring,
};
use crate::quadforms::{
    charsum_crt_product, form_det, lemma33_closed_form, row_charsum, theorem12_identity, ClosedFormCase,
    FormDetSpec, FormKind, Lemma21Ctx,
};
use crate::quintic::{
    ap_mod_formula, bivariate_quintic_sweep, bq_closed_form, extension_power_sum, quartic_sum_bq,
    quintic_sum_ap, theorem51_condition, QuinticSpec,
};
use crate::repcong::{cornacchia, lemma22_polycheck, lemma31_check};

/// Environment variable holding the worker count; unset or `0` lets rayon
/// pick.
pub const WORKERS_ENV: &str = "JSDET_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    Thm11,
    Cor11,
    Thm12,
    Thm13,
    Thm14,
    Lem21,
    Lem22,
    Lem31,
    Lem33,
    Thm41,
    Thm42,
    Lem41,
    Lem42,
    Lem5Ap,
    Lem5Ext,
    Lem5Bq,
    Lem5Ode,
    Lem5Fg,
    Thm51,
    Stoll818,
}

impl SuiteId {
    pub const ALL: [SuiteId; 20] = [
        Self::Thm11,
        Self::Cor11,
        Self::Thm12,
        Self::Thm13,
        Self::Thm14,
        Self::Lem21,
        Self::Lem22,
        Self::Lem31,
        Self::Lem33,
        Self::Thm41,
        Self::Thm42,
        Self::Lem41,
        Self::Lem42,
        Self::Lem5Ap,
        Self::Lem5Ext,
        Self::Lem5Bq,
        Self::Lem5Ode,
        Self::Lem5Fg,
        Self::Thm51,
        Self::Stoll818,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Thm11 => "thm1.1",
            Self::Cor11 => "cor1.1",
            Self::Thm12 => "thm1.2",
            Self::Thm13 => "thm1.3",
            Self::Thm14 => "thm1.4",
            Self::Lem21 => "lem2.1",
            Self::Lem22 => "lem2.2",
            Self::Lem31 => "lem3.1",
            Self::Lem33 => "lem3.3",
            Self::Thm41 => "thm4.1",
            Self::Thm42 => "thm4.2",
            Self::Lem41 => "lem4.1",
            Self::Lem42 => "lem4.2",
            Self::Lem5Ap => "lem5.ap",
            Self::Lem5Ext => "lem5.ext",
            Self::Lem5Bq => "lem5.bq",
            Self::Lem5Ode => "lem5.ode",
            Self::Lem5Fg => "lem5.fg",
            Self::Thm51 => "thm5.1",
            Self::Stoll818 => "stoll8.18",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl Serialize for SuiteId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for SuiteId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub suite: SuiteId,
    pub params: Value,
    pub verdict: Verdict,
    pub witness: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerifyRecord {
    pub fn key(&self) -> String {
        record_key(self.suite, &self.params)
    }
}

/// Canonical cache key. `serde_json` maps keep their keys sorted, so equal
/// parameter objects always print identically.
pub fn record_key(suite: SuiteId, params: &Value) -> String {
    format!("{suite}|{params}")
}

/// A suite plus its range. `values` lists explicit moduli, primes, or field
/// orders and takes precedence over `max_n`; with neither, the suite's
/// default range is used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub suite: SuiteId,
    pub max_n: Option<u64>,
    pub values: Option<Vec<u64>>,
    /// Seed for the sampled suites (`lem4.1`, `lem4.2`, `lem5.bq` over
    /// `p^2`, `lem5.ext`); echoed in their parameters.
    pub seed: u64,
    /// Sample count override for the sampled suites.
    pub samples: Option<usize>,
    /// Attach `elapsed_ms` to records. Off by default so reports are
    /// byte-identical across runs.
    pub timings: bool,
}

impl SuiteSpec {
    pub fn new(suite: SuiteId) -> Self {
        SuiteSpec {
            suite,
            max_n: None,
            values: None,
            seed: 0,
            samples: None,
            timings: false,
        }
    }

    pub fn max_n(mut self, n: u64) -> Self {
        self.max_n = Some(n);
        self
    }

    pub fn values(mut self, v: Vec<u64>) -> Self {
        self.values = Some(v);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

// ---------------------------------------------------------------------------
// Range expansion

enum DefaultRange {
    Max(u64),
    List(&'static [u64]),
}

struct RangeRule {
    default: DefaultRange,
    /// Explicit values must pass this.
    valid: fn(u64) -> bool,
    /// Values enumerated from `max_n` must also pass this.
    in_range: fn(u64) -> bool,
    what: &'static str,
}

fn odd_modulus(n: u64) -> bool {
    n >= 3 && n % 2 == 1
}

fn odd_prime(n: u64) -> bool {
    n % 2 == 1 && is_prime(n)
}

fn squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

fn field_order(q: u64) -> bool {
    q % 2 == 1 && FieldCtx::from_order(q).is_ok()
}

/// Odd `p^n` with `n <= 3`.
fn small_prime_power(q: u64) -> bool {
    let f = factor_u64(q);
    q % 2 == 1 && f.len() == 1 && f[0].1 <= 3
}

fn always(_: u64) -> bool {
    true
}

fn rule(suite: SuiteId) -> RangeRule {
    use DefaultRange::*;
    let r = |default, valid, in_range, what| RangeRule { default, valid, in_range, what };
    match suite {
        SuiteId::Thm11 => r(Max(99), odd_modulus, always, "odd n >= 3"),
        SuiteId::Cor11 => r(Max(99), odd_modulus, |n| n % 4 == 3, "odd n >= 3"),
        SuiteId::Thm12 | SuiteId::Thm13 => r(Max(105), odd_modulus, squarefree, "odd n >= 3"),
        SuiteId::Thm14 => r(List(&[5, 13, 17, 29, 37, 41, 53, 73, 97]), odd_prime, always, "odd prime"),
        SuiteId::Lem21 | SuiteId::Lem22 => r(Max(37), odd_prime, always, "odd prime"),
        SuiteId::Lem31 => r(Max(100), |p| p > 3 && is_prime(p), always, "prime > 3"),
        SuiteId::Lem33 => r(Max(101), odd_prime, always, "odd prime"),
        SuiteId::Thm41 | SuiteId::Thm42 | SuiteId::Lem41 | SuiteId::Lem42 => {
            r(List(&[5, 13, 17, 25, 29, 49]), field_order, always, "odd p or p^2")
        }
        SuiteId::Lem5Ap => r(List(&[13, 17, 29]), odd_prime, |p| p % 4 == 1, "odd prime"),
        SuiteId::Lem5Bq => r(List(&[5, 9, 13, 17, 25]), field_order, always, "odd p or p^2"),
        SuiteId::Lem5Ext => r(List(&[9, 25, 27]), small_prime_power, always, "odd p^n, n <= 3"),
        SuiteId::Lem5Ode => r(List(&[5, 13, 17, 29]), odd_prime, always, "odd prime"),
        SuiteId::Lem5Fg => r(List(&[5, 13, 17, 29]), odd_prime, |p| p % 4 == 1, "odd prime"),
        SuiteId::Thm51 => r(List(&[13]), odd_prime, |p| p % 4 == 1, "odd prime"),
        SuiteId::Stoll818 => r(List(&[13, 17, 37, 61]), odd_prime, always, "odd prime"),
    }
}

fn expand_range(spec: &SuiteSpec) -> Result<Vec<u64>> {
    let rule = rule(spec.suite);
    let mut out = if let Some(vals) = &spec.values {
        if let Some(bad) = vals.iter().find(|&&v| !(rule.valid)(v)) {
            return Err(Error::Range(format!("{bad} is not a valid {} for {}", rule.what, spec.suite)));
        }
        vals.clone()
    } else {
        let max = match (spec.max_n, &rule.default) {
            (Some(max), _) | (None, &DefaultRange::Max(max)) => max,
            (None, DefaultRange::List(l)) => return Ok(l.to_vec()),
        };
        (3..=max).filter(|&v| (rule.valid)(v) && (rule.in_range)(v)).collect()
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fixed parameter families

/// `(c, d, m)`: the pairs of each part of the vanishing theorem for odd `n`,
/// keyed by the `m` for which `-m` must fail to be a residue.
pub const THM11_PAIRS: [(i64, i64, u64); 8] = [
    (6, 1, 1),
    (3, 2, 1),
    (4, 2, 2),
    (8, 8, 2),
    (3, 3, 3),
    (6, -3, 3),
    (21, 112, 7),
    (42, -7, 7),
];

/// The eight determinants that vanish for every `n = 3 mod 4`.
pub const COR11_DETS: [(i64, i64, FormKind); 8] = [
    (6, 1, FormKind::Punctured),
    (6, 1, FormKind::Full),
    (3, 2, FormKind::Punctured),
    (3, 2, FormKind::Full),
    (4, 2, FormKind::Punctured),
    (8, 8, FormKind::Punctured),
    (3, 3, FormKind::Punctured),
    (21, 112, FormKind::Punctured),
];

/// The 25 `(c, d)` pairs of the row-sum identity suite.
pub const THM12_PAIRS: [(i64, i64); 25] = [
    (0, 1),
    (1, 1),
    (1, 3),
    (2, 1),
    (3, 2),
    (4, 2),
    (6, 1),
    (8, 8),
    (3, 3),
    (21, 112),
    (10, 9),
    (5, 5),
    (8, 18),
    (6, -3),
    (42, -7),
    (0, 2),
    (1, -1),
    (2, -3),
    (7, 5),
    (-3, 4),
    (5, -6),
    (11, 13),
    (-4, 7),
    (9, 0),
    (0, 0),
];

const THM13_MS: [u64; 4] = [1, 2, 3, 7];
const ODD_MS: [u64; 7] = [1, 3, 5, 7, 9, 11, 13];
const DEFAULT_POLY_SAMPLES: usize = 8;
const DEFAULT_BQ_SAMPLES: usize = 200;
const DEFAULT_EXT_SAMPLES: usize = 100;

fn thm13_case(m: u64) -> Result<ClosedFormCase> {
    Ok(match m {
        1 => ClosedFormCase::M4,
        2 => ClosedFormCase::M2,
        3 => ClosedFormCase::M3,
        7 => ClosedFormCase::M7,
        _ => return Err(Error::Range(format!("m = {m} is not one of 1, 2, 3, 7"))),
    })
}

fn lem33_case(m: u64) -> Result<ClosedFormCase> {
    ClosedFormCase::ALL
        .into_iter()
        .find(|c| c.m() == m)
        .ok_or_else(|| Error::Range(format!("m = {m} is not one of 2, 3, 4, 7")))
}

/// `a` is a quadratic residue mod `n` in the strict sense: coprime to `n`
/// and a square modulo every prime factor.
fn is_residue(a: i64, n: &OddModulus) -> bool {
    n.primes().all(|p| jacobi(a, p as i64) == Ok(1))
}

fn kind_str(k: FormKind) -> &'static str {
    match k {
        FormKind::Punctured => "punctured",
        FormKind::Full => "full",
    }
}

fn variant_str(v: Variant) -> &'static str {
    match v {
        Variant::M => "M",
        Variant::M0 => "M0",
    }
}

fn random_poly_indices(rng: &mut ChaCha8Rng, q: u64) -> Vec<u64> {
    let deg = rng.gen_range(1..=4usize);
    let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
    // canonical index 0 is the zero element
    c.push(rng.gen_range(1..q));
    c
}

fn poly_indices(p: &Poly, ctx: &FieldCtx) -> Vec<u64> {
    p.coeffs().iter().map(|&c| ctx.index_of(c) as u64).collect()
}

fn plan(spec: &SuiteSpec) -> Result<Vec<Value>> {
    let vals = expand_range(spec)?;
    let mut out = Vec::new();
    let seed = spec.seed;
    for v in vals {
        match spec.suite {
            SuiteId::Thm11 => {
                for (c, d, _) in THM11_PAIRS {
                    for kind in [FormKind::Punctured, FormKind::Full] {
                        out.push(json!({"n": v, "c": c, "d": d, "kind": kind_str(kind)}));
                    }
                }
            }
            SuiteId::Cor11 => {
                for (c, d, kind) in COR11_DETS {
                    out.push(json!({"n": v, "c": c, "d": d, "kind": kind_str(kind)}));
                }
            }
            SuiteId::Thm12 => {
                for (c, d) in THM12_PAIRS {
                    out.push(json!({"n": v, "c": c, "d": d}));
                }
            }
            SuiteId::Thm13 => {
                for m in THM13_MS {
                    out.push(json!({"n": v, "m": m}));
                }
            }
            SuiteId::Thm14 => {
                for family in ["10,9", "5,5"] {
                    for check in ["det", "sweep"] {
                        out.push(json!({"p": v, "family": family, "check": check}));
                    }
                }
            }
            SuiteId::Lem33 => {
                for case in ClosedFormCase::ALL {
                    out.push(json!({"p": v, "m": case.m()}));
                }
            }
            SuiteId::Thm41 | SuiteId::Thm42 => {
                let ctx = FieldCtx::from_order(v)?;
                let q = ctx.q();
                for m in ODD_MS {
                    let ok = if spec.suite == SuiteId::Thm41 {
                        gcd(m, q - 1) == 1
                    } else {
                        gcd(m, q * q - 1) == 1
                    };
                    if ok {
                        for a in 1..q {
                            out.push(json!({"q": q, "m": m, "a": a}));
                        }
                    }
                }
            }
            SuiteId::Lem41 | SuiteId::Lem42 => {
                let ctx = FieldCtx::from_order(v)?;
                let q = ctx.q();
                let units = ctx.units();
                let mut polys: Vec<(Vec<u64>, Value)> = Vec::new();
                for m in [3u64, 5, 7] {
                    for &a in units.iter().take(3) {
                        if spec.suite == SuiteId::Lem41 {
                            // x Q_m(x^2, a) is a Dickson permutation polynomial
                            if gcd(m, q * q - 1) == 1 {
                                let p = build_qm(m, a, &ctx)?.compose_square();
                                polys.push((poly_indices(&p, &ctx), json!(format!("Q_{m}(x^2,{a})"))));
                            }
                        } else {
                            if gcd(m, q - 1) == 1 {
                                let p = build_pm(m, a, &ctx)?;
                                if !p.is_zero() {
                                    polys.push((poly_indices(&p, &ctx), json!(format!("P_{m}(x,{a})"))));
                                }
                            }
                            if gcd(m, q * q - 1) == 1 {
                                let p = build_qm(m, a, &ctx)?;
                                polys.push((poly_indices(&p, &ctx), json!(format!("Q_{m}(x,{a})"))));
                            }
                        }
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                for k in 0..spec.samples.unwrap_or(DEFAULT_POLY_SAMPLES) {
                    polys.push((random_poly_indices(&mut rng, q), json!({"seed": seed, "sample": k})));
                }
                for (coeffs, origin) in polys {
                    if spec.suite == SuiteId::Lem41 {
                        out.push(json!({"q": q, "coeffs": coeffs, "origin": origin}));
                    } else {
                        for variant in [Variant::M, Variant::M0] {
                            out.push(json!({
                                "q": q, "coeffs": coeffs, "origin": origin, "variant": variant_str(variant)
                            }));
                        }
                    }
                }
            }
            SuiteId::Lem5Ap | SuiteId::Thm51 => {
                for a in 1..v {
                    out.push(json!({"p": v, "a": a}));
                }
            }
            SuiteId::Lem5Bq => {
                if is_prime(v) {
                    out.push(json!({"q": v}));
                } else {
                    let n = spec.samples.unwrap_or(DEFAULT_BQ_SAMPLES);
                    out.push(json!({"q": v, "seed": seed, "samples": n}));
                }
            }
            SuiteId::Lem5Ext => {
                let n = spec.samples.unwrap_or(DEFAULT_EXT_SAMPLES);
                out.push(json!({"q": v, "seed": seed, "samples": n}));
            }
            SuiteId::Lem21
            | SuiteId::Lem22
            | SuiteId::Lem31
            | SuiteId::Lem5Ode
            | SuiteId::Lem5Fg
            | SuiteId::Stoll818 => out.push(json!({"p": v})),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Checkers

fn field<'a>(params: &'a Value, key: &str) -> Result<&'a Value> {
    params.get(key).ok_or_else(|| Error::Parse(format!("missing parameter `{key}`")))
}

fn get_u64(params: &Value, key: &str) -> Result<u64> {
    field(params, key)?.as_u64().ok_or_else(|| Error::Parse(format!("`{key}` must be a non-negative integer")))
}

fn get_i64(params: &Value, key: &str) -> Result<i64> {
    field(params, key)?.as_i64().ok_or_else(|| Error::Parse(format!("`{key}` must be an integer")))
}

fn get_str<'a>(params: &'a Value, key: &str) -> Result<&'a str> {
    field(params, key)?.as_str().ok_or_else(|| Error::Parse(format!("`{key}` must be a string")))
}

fn get_prime(params: &Value, key: &str) -> Result<u64> {
    let p = get_u64(params, key)?;
    if !odd_prime(p) {
        return Err(Error::Range(format!("{key} = {p} is not an odd prime")));
    }
    Ok(p)
}

type Outcome = (Verdict, Value);

fn na(reason: impl Into<String>) -> Result<Outcome> {
    Ok((Verdict::NotApplicable, json!({"reason": reason.into()})))
}

fn elem_at(ctx: &FieldCtx, idx: u64) -> Result<FqElem> {
    ctx.enumerate()
        .get(idx as usize)
        .copied()
        .ok_or_else(|| Error::Range(format!("element index {idx} outside F_{}", ctx.q())))
}

/// Records at most this many counterexamples per witness.
const MAX_LISTED: usize = 8;

fn push_capped(list: &mut Vec<Value>, v: Value) {
    if list.len() < MAX_LISTED {
        list.push(v);
    }
}

/// Runs the checker for one parameter object.
pub fn check_params(suite: SuiteId, params: &Value) -> Result<Outcome> {
    match suite {
        SuiteId::Thm11 | SuiteId::Cor11 => check_form_det(suite, params),
        SuiteId::Thm12 => check_thm12(params),
        SuiteId::Thm13 => check_thm13(params),
        SuiteId::Thm14 => check_thm14(params),
        SuiteId::Lem21 => check_lem21(params),
        SuiteId::Lem22 => {
            let v = lemma22_polycheck(get_prime(params, "p")?)?;
            Ok((Verdict::from_bool(v.holds), serde_json::to_value(v).expect("serializable")))
        }
        SuiteId::Lem31 => {
            let p = get_u64(params, "p")?;
            let v = lemma31_check(p)?;
            Ok((Verdict::from_bool(v.holds), serde_json::to_value(v).expect("serializable")))
        }
        SuiteId::Lem33 => check_lem33(params),
        SuiteId::Thm41 | SuiteId::Thm42 => check_thm4x(suite, params),
        SuiteId::Lem41 | SuiteId::Lem42 => check_lem4x(suite, params),
        SuiteId::Lem5Ap => check_lem5_ap(params),
        SuiteId::Lem5Bq => check_lem5_bq(params),
        SuiteId::Lem5Ext => check_lem5_ext(params),
        SuiteId::Lem5Ode => {
            let p = get_prime(params, "p")?;
            let (f, g) = (build_f(p)?, build_g(p)?);
            let f_ok = ode_residual_f(&f).is_zero();
            let g_ok = ode_residual_g(&g).is_zero();
            Ok((
                Verdict::from_bool(f_ok && g_ok),
                json!({"f": f.to_string(), "g": g.to_string(), "f_residual_zero": f_ok, "g_residual_zero": g_ok}),
            ))
        }
        SuiteId::Lem5Fg => {
            let p = get_prime(params, "p")?;
            if p % 4 != 1 {
                return na("needs p = 1 mod 4");
            }
            let v = check_fg_identity(p)?;
            Ok((
                Verdict::from_bool(v.holds()),
                json!({"lhs": v.lhs.to_string(), "rhs": v.rhs.to_string()}),
            ))
        }
        SuiteId::Thm51 => check_thm51(params),
        SuiteId::Stoll818 => {
            let p = get_prime(params, "p")?;
            if ![13, 17].contains(&(p % 24)) {
                return na("needs p = 13, 17 mod 24");
            }
            sweep_outcome(8, 18, p, json!("external verification"))
        }
    }
}

fn check_form_det(suite: SuiteId, params: &Value) -> Result<Outcome> {
    let n = get_u64(params, "n")?;
    let c = get_i64(params, "c")?;
    let d = get_i64(params, "d")?;
    let kind: FormKind = get_str(params, "kind")?.parse()?;
    let modulus = OddModulus::new(n)?;
    if suite == SuiteId::Thm11 {
        let m = THM11_PAIRS
            .iter()
            .find(|&&(pc, pd, _)| (pc, pd) == (c, d))
            .map(|t| t.2)
            .ok_or_else(|| Error::Range(format!("({c},{d}) is not a listed pair")))?;
        if modulus.is_squarefree() && is_residue(-(m as i64), &modulus) {
            return na(format!("-{m} is a quadratic residue mod {n}"));
        }
    } else if n % 4 != 3 {
        return na("needs n = 3 mod 4");
    }
    let det = form_det(&FormDetSpec::new(c, d, n, kind)?)?;
    Ok((
        Verdict::from_bool(det.is_zero()),
        json!({"det": det.to_string(), "squarefree": modulus.is_squarefree()}),
    ))
}

fn check_thm12(params: &Value) -> Result<Outcome> {
    let n = get_u64(params, "n")?;
    let c = get_i64(params, "c")?;
    let d = get_i64(params, "d")?;
    let modulus = OddModulus::new(n)?;
    if !modulus.is_squarefree() {
        return na(format!("{n} is not squarefree"));
    }
    let mut identity_failures = Vec::new();
    let mut crt_failures = Vec::new();
    let (mut bad_identity, mut bad_crt) = (0usize, 0usize);
    for i in 0..n as i64 {
        let id = theorem12_identity(c, d, i, &modulus)?;
        if !id.holds {
            bad_identity += 1;
            push_capped(&mut identity_failures, json!({"i": i, "lhs": id.lhs, "rhs": id.rhs}));
        }
        let prod = charsum_crt_product(c, d, i, &modulus)?;
        if prod != id.lhs {
            bad_crt += 1;
            push_capped(&mut crt_failures, json!({"i": i, "direct": id.lhs, "product": prod}));
        }
    }
    Ok((
        Verdict::from_bool(bad_identity == 0 && bad_crt == 0),
        json!({
            "rows": n,
            "identity_failures": bad_identity,
            "crt_failures": bad_crt,
            "identity_counterexamples": identity_failures,
            "crt_counterexamples": crt_failures,
        }),
    ))
}

fn check_thm13(params: &Value) -> Result<Outcome> {
    let n = get_u64(params, "n")?;
    let m = get_u64(params, "m")?;
    let (c, d) = thm13_case(m)?.coefficients();
    let modulus = OddModulus::new(n)?;
    if !modulus.is_squarefree() {
        return na(format!("{n} is not squarefree"));
    }
    if is_residue(-(m as i64), &modulus) {
        return na(format!("-{m} is a quadratic residue mod {n}"));
    }
    let mut nonzero = Vec::new();
    let mut count = 0usize;
    for i in 0..n as i64 {
        let s = row_charsum(c, d, i, n)?;
        if s != 0 {
            count += 1;
            push_capped(&mut nonzero, json!({"i": i, "sum": s}));
        }
    }
    Ok((
        Verdict::from_bool(count == 0),
        json!({"c": c, "d": d, "nonzero_rows": count, "counterexamples": nonzero}),
    ))
}

fn sweep_outcome(c1: i64, c2: i64, p: u64, source: Value) -> Result<Outcome> {
    let table = bivariate_quintic_sweep(c1, c2, p)?;
    let nonzero: Vec<Value> = table
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v != 0)
        .map(|(y, &v)| json!({"y": y, "sum": v}))
        .collect();
    Ok((
        Verdict::from_bool(nonzero.is_empty()),
        json!({"c1": c1, "c2": c2, "table": table, "nonzero": nonzero, "source": source}),
    ))
}

fn check_thm14(params: &Value) -> Result<Outcome> {
    let p = get_prime(params, "p")?;
    let family = get_str(params, "family")?;
    let check = get_str(params, "check")?;
    let (c, d, applicable, class) = match family {
        "10,9" => (10, 9, p % 12 == 5, "p = 5 mod 12"),
        "5,5" => (5, 5, [13, 17].contains(&(p % 20)), "p = 13, 17 mod 20"),
        _ => return Err(Error::Range(format!("unknown family `{family}`"))),
    };
    if !applicable {
        return na(format!("needs {class}"));
    }
    match check {
        "det" => {
            let punctured = form_det(&FormDetSpec::new(c, d, p, FormKind::Punctured)?)?;
            let full = form_det(&FormDetSpec::new(c, d, p, FormKind::Full)?)?;
            // (10,9)_p is claimed, [5,5]_p is claimed; the other one is recorded
            let claimed = if c == 10 { &punctured } else { &full };
            Ok((
                Verdict::from_bool(claimed.is_zero()),
                json!({
                    "punctured": punctured.to_string(),
                    "full": full.to_string(),
                    "both_zero_or_both_nonzero": punctured.is_zero() == full.is_zero(),
                }),
            ))
        }
        "sweep" => sweep_outcome(c, d, p, json!("proved")),
        _ => Err(Error::Range(format!("unknown check `{check}`"))),
    }
}

fn check_lem21(params: &Value) -> Result<Outcome> {
    let p = get_prime(params, "p")?;
    let ctx = Lemma21Ctx::new(p)?;
    let pi = p as i64;
    let mut failures = Vec::new();
    let mut count = 0usize;
    for c in 1..pi {
        for d in 0..pi {
            for i in 0..pi {
                let r = ctx.check(c, d, i)?;
                if !r.holds {
                    count += 1;
                    push_capped(&mut failures, json!({"c": c, "d": d, "i": i, "lhs": r.lhs, "rhs": r.rhs}));
                }
            }
        }
    }
    Ok((
        Verdict::from_bool(count == 0),
        json!({"checked": (p - 1) * p * p, "failures": count, "counterexamples": failures}),
    ))
}

fn check_lem33(params: &Value) -> Result<Outcome> {
    let p = get_prime(params, "p")?;
    let case = lem33_case(get_u64(params, "m")?)?;
    let (c, d) = case.coefficients();
    let rep = if p % case.m() == 0 { None } else { cornacchia(p, case.m())? };
    let mut failures = Vec::new();
    let mut count = 0usize;
    for i in 0..p as i64 {
        let closed = lemma33_closed_form(case, i, p)?;
        let direct = row_charsum(c, d, i, p)?;
        if closed != direct {
            count += 1;
            push_capped(&mut failures, json!({"i": i, "closed_form": closed, "direct": direct}));
        }
    }
    Ok((
        Verdict::from_bool(count == 0),
        json!({"c": c, "d": d, "representation": rep, "failures": count, "counterexamples": failures}),
    ))
}

fn check_thm4x(suite: SuiteId, params: &Value) -> Result<Outcome> {
    let ctx = FieldCtx::from_order(get_u64(params, "q")?)?;
    let q = ctx.q();
    let m = get_u64(params, "m")?;
    let a = elem_at(&ctx, get_u64(params, "a")?)?;
    if a.is_zero() {
        return Err(Error::Range("a must be nonzero".into()));
    }
    let first = suite == SuiteId::Thm41;
    if first && gcd(m, q - 1) != 1 {
        return na(format!("gcd({m}, q - 1) != 1"));
    }
    if !first && gcd(m, q * q - 1) != 1 {
        return na(format!("gcd({m}, q^2 - 1) != 1"));
    }
    let mut bad_sums = Vec::new();
    for g in ctx.units() {
        let s = if first {
            theorem41_sum(m, a, g, &ctx)?
        } else {
            theorem42_sum(m, a, g, &ctx)?
        };
        if s != 0 {
            bad_sums.push(json!({"g": g.to_string(), "sum": s}));
        }
    }
    let poly = if first { build_pm(m, a, &ctx)? } else { build_qm(m, a, &ctx)? };
    let mut witness = json!({"a": a.to_string(), "poly": poly.to_string(), "nonzero_sums": bad_sums});
    let sums_ok = witness["nonzero_sums"].as_array().is_some_and(|v| v.is_empty());
    if poly.is_zero() {
        witness["kernel"] = json!("polynomial vanishes mod p");
        return Ok((Verdict::from_bool(sums_ok), witness));
    }
    if !chi_minus_one_trivial(&ctx) {
        witness["kernel"] = json!("chi(-1) = -1, no kernel claim");
        return Ok((Verdict::from_bool(sums_ok), witness));
    }
    let g = first_nonsquare(&ctx);
    let mut kernel_ok = true;
    for variant in [Variant::M, Variant::M0] {
        let v = check_lemma42(&poly, g, variant)?;
        kernel_ok &= v.applicable && v.holds;
        witness[variant_str(variant)] = serde_json::to_value(&v).expect("serializable");
    }
    Ok((Verdict::from_bool(sums_ok && kernel_ok), witness))
}

fn poly_from_params(params: &Value, ctx: &FieldCtx) -> Result<Poly> {
    let idx = field(params, "coeffs")?
        .as_array()
        .ok_or_else(|| Error::Parse("`coeffs` must be an array".into()))?;
    let coeffs = idx
        .iter()
        .map(|v| {
            let i = v.as_u64().ok_or_else(|| Error::Parse("coefficient index must be an integer".into()))?;
            elem_at(ctx, i)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = Poly::new(Ring::Field(*ctx), coeffs);
    if p.is_zero() {
        return Err(Error::Range("polynomial must be nonzero".into()));
    }
    Ok(p)
}

fn check_lem4x(suite: SuiteId, params: &Value) -> Result<Outcome> {
    let ctx = FieldCtx::from_order(get_u64(params, "q")?)?;
    let poly = poly_from_params(params, &ctx)?;
    if suite == SuiteId::Lem41 {
        let v = check_lemma41(&poly)?;
        let mut w = serde_json::to_value(&v).expect("serializable");
        w["poly"] = json!(poly.to_string());
        let verdict = if v.applicable { Verdict::from_bool(v.holds) } else { Verdict::NotApplicable };
        return Ok((verdict, w));
    }
    let variant: Variant = get_str(params, "variant")?.parse()?;
    if !chi_minus_one_trivial(&ctx) {
        return na("chi(-1) = -1");
    }
    let v = check_lemma42(&poly, first_nonsquare(&ctx), variant)?;
    let mut w = serde_json::to_value(&v).expect("serializable");
    w["poly"] = json!(poly.to_string());
    let verdict = if v.applicable { Verdict::from_bool(v.holds) } else { Verdict::NotApplicable };
    Ok((verdict, w))
}

fn check_lem5_ap(params: &Value) -> Result<Outcome> {
    let p = get_prime(params, "p")?;
    let a = get_u64(params, "a")?;
    if p % 4 != 1 {
        return na("needs p = 1 mod 4");
    }
    let ctx = FieldCtx::prime(p)?;
    let f = build_f(p)?;
    let e = (p - 1) / 4;
    let mut failures = Vec::new();
    let (mut count, mut zeros) = (0usize, 0usize);
    for b in 1..p {
        for c in 1..p {
            let s = QuinticSpec::new(a as i64, b as i64, c as i64, p)?;
            let ap = quintic_sum_ap(&s);
            let formula = ap_mod_formula(&s)?;
            let ratio = ctx.div(ctx.from_int(c as i64), ctx.from_int(a as i64))?;
            let arg = ctx.div(ctx.from_int((a * c % p) as i64), ctx.from_int((b * b % p) as i64))?;
            let forced_zero = ctx.pow(ratio, e) == ctx.from_int(-1) || f.eval(arg).is_zero();
            let ok = ap.unsigned_abs() < p
                && ap.rem_euclid(p as i64) as u64 == formula
                && (!forced_zero || ap == 0);
            zeros += (ap == 0) as usize;
            if !ok {
                count += 1;
                push_capped(
                    &mut failures,
                    json!({"b": b, "c": c, "ap": ap, "formula": formula, "forced_zero": forced_zero}),
                );
            }
        }
    }
    Ok((
        Verdict::from_bool(count == 0),
        json!({"checked": (p - 1) * (p - 1), "ap_zero": zeros, "failures": count, "counterexamples": failures}),
    ))
}

fn check_lem5_bq(params: &Value) -> Result<Outcome> {
    let ctx = FieldCtx::from_order(get_u64(params, "q")?)?;
    let p = ctx.p();
    let units = ctx.units();
    let triples: Vec<(FqElem, FqElem, FqElem)> = if ctx.degree() == 1 {
        let mut t = Vec::new();
        for &al in &units {
            for &be in &units {
                for &ga in &units {
                    t.push((al, be, ga));
                }
            }
        }
        t
    } else {
        let seed = get_u64(params, "seed")?;
        let n = get_u64(params, "samples")? as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut pick = || units[rng.gen_range(0..units.len())];
                (pick(), pick(), pick())
            })
            .collect()
    };
    let mut failures = Vec::new();
    let mut count = 0usize;
    for &(al, be, ga) in &triples {
        let direct = quartic_sum_bq(al, be, ga, &ctx);
        let closed = bq_closed_form(al, be, ga, &ctx)?;
        if direct.rem_euclid(p as i64) as u64 != closed {
            count += 1;
            push_capped(
                &mut failures,
                json!({
                    "alpha": al.to_string(), "beta": be.to_string(), "gamma": ga.to_string(),
                    "direct": direct, "closed_form": closed,
                }),
            );
        }
    }
    Ok((
        Verdict::from_bool(count == 0),
        json!({"checked": triples.len(), "failures": count, "counterexamples": failures}),
    ))
}

fn ext_trials<F: FiniteField>(field: &F, rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, Vec<Value>)> {
    let elems = field.elements();
    let len = 2 * (field.characteristic() as usize - 1) + 1;
    let mut failures = Vec::new();
    let mut count = 0usize;
    for _ in 0..samples {
        let h: Vec<F::Elem> = (0..len).map(|_| elems[rng.gen_range(0..elems.len())]).collect();
        let r = extension_power_sum(field, &h)?;
        if !r.holds {
            count += 1;
            let coords: Vec<Vec<u64>> = h.iter().map(|&c| field.coords(c)).collect();
            push_capped(&mut failures, json!({"h": coords, "lhs": r.lhs, "rhs": r.rhs}));
        }
    }
    Ok((count, failures))
}

fn check_lem5_ext(params: &Value) -> Result<Outcome> {
    let q = get_u64(params, "q")?;
    let seed = get_u64(params, "seed")?;
    let samples = get_u64(params, "samples")? as usize;
    let f = factor_u64(q);
    if q % 2 == 0 || f.len() != 1 || f[0].1 > 3 {
        return Err(Error::Range(format!("{q} is not an odd p^n with n <= 3")));
    }
    let (p, n) = f[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (count, failures) = if n == 3 {
        ext_trials(&ExtField::new(p, 3)?, &mut rng, samples)?
    } else {
        ext_trials(&FieldCtx::new(p, n)?, &mut rng, samples)?
    };
    Ok((
        Verdict::from_bool(count == 0),
        json!({"p": p, "n": n, "checked": samples, "failures": count, "counterexamples": failures}),
    ))
}

fn check_thm51(params: &Value) -> Result<Outcome> {
    let p = get_prime(params, "p")?;
    let a = get_u64(params, "a")?;
    if p % 4 != 1 {
        return na("needs p = 1 mod 4");
    }
    let mut failures = Vec::new();
    let (mut count, mut met, mut ap_zero, mut ap_zero_unmet) = (0usize, 0usize, 0usize, 0usize);
    for b in 1..p {
        for c in 1..p {
            let v = theorem51_condition(&QuinticSpec::new(a as i64, b as i64, c as i64, p)?)?;
            met += v.condition_met as usize;
            ap_zero += (v.ap == 0) as usize;
            ap_zero_unmet += (v.ap == 0 && !v.condition_met) as usize;
            if !v.holds {
                count += 1;
                push_capped(&mut failures, json!({"b": b, "c": c, "verdict": v}));
            }
        }
    }
    Ok((
        Verdict::from_bool(count == 0),
        json!({
            "checked": (p - 1) * (p - 1),
            "condition_met": met,
            "ap_zero": ap_zero,
            "ap_zero_condition_unmet": ap_zero_unmet,
            "violations": count,
            "counterexamples": failures,
        }),
    ))
}

// ---------------------------------------------------------------------------
// Running

/// Recomputes one record from its parameters. Checker errors become `fail`
/// records carrying the error text.
pub fn check(suite: SuiteId, params: &Value) -> VerifyRecord {
    let (verdict, witness) =
        check_params(suite, params).unwrap_or_else(|e| (Verdict::Fail, json!({"error": e.to_string()})));
    VerifyRecord {
        suite,
        params: params.clone(),
        verdict,
        witness,
        elapsed_ms: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub records: Vec<VerifyRecord>,
    pub computed: usize,
    pub cache_hits: usize,
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let n = match std::env::var(WORKERS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("{WORKERS_ENV} must be a non-negative integer, got `{s}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Io(e.to_string()))
}

/// Expands the range and checks every parameter tuple. Records come back
/// in plan order whatever the worker count.
pub fn run_suite(spec: &SuiteSpec) -> Result<Vec<VerifyRecord>> {
    Ok(run_suite_cached(spec, None)?.records)
}

pub fn run_suite_cached(spec: &SuiteSpec, cache: Option<&Cache>) -> Result<RunOutcome> {
    let params = plan(spec)?;
    let pool = worker_pool()?;
    let results: Vec<Result<(VerifyRecord, bool)>> = pool.install(|| {
        params
            .par_iter()
            .map(|p| {
                if let Some(mut hit) = cache.and_then(|c| c.get(&record_key(spec.suite, p))) {
                    if !spec.timings {
                        hit.elapsed_ms = None;
                    }
                    return Ok((hit, true));
                }
                let start = Instant::now();
                let mut rec = check(spec.suite, p);
                if spec.timings {
                    rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
                }
                if let Some(c) = cache {
                    c.put(&rec)?;
                }
                Ok((rec, false))
            })
            .collect()
    });
    let mut out = RunOutcome {
        records: Vec::with_capacity(results.len()),
        computed: 0,
        cache_hits: 0,
    };
    for r in results {
        let (rec, hit) = r?;
        if hit {
            out.cache_hits += 1;
        } else {
            out.computed += 1;
        }
        out.records.push(rec);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

impl Summary {
    pub fn of(records: &[VerifyRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }
}

/// One JSON object per line, newline-terminated.
pub fn to_jsonl(records: &[VerifyRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("serializable"));
        s.push('\n');
    }
    s
}

// ---------------------------------------------------------------------------
// Cache

/// Append-only JSON-lines journal of records. On open, later lines override
/// earlier ones with the same key; unparsable lines are skipped and counted.
pub struct Cache {
    file: Mutex<File>,
    entries: Mutex<HashMap<String, VerifyRecord>>,
    corrupt: usize,
}

impl Cache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut entries = HashMap::new();
        let mut corrupt = 0;
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<VerifyRecord>(&line) {
                    Ok(r) => {
                        entries.insert(r.key(), r);
                    }
                    Err(_) => corrupt += 1,
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Cache {
            file: Mutex::new(file),
            entries: Mutex::new(entries),
            corrupt,
        })
    }

    pub fn get(&self, key: &str) -> Option<VerifyRecord> {
        self.entries.lock().expect("cache lock").get(key).cloned()
    }

    pub fn put(&self, rec: &VerifyRecord) -> Result<()> {
        let line = serde_json::to_string(rec).expect("serializable");
        {
            let mut f = self.file.lock().expect("cache lock");
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        self.entries.lock().expect("cache lock").insert(rec.key(), rec.clone());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lines skipped on open because they did not parse.
    pub fn corrupt_lines(&self) -> usize {
        self.corrupt
    }
}

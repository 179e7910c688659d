//! Matrices `[chi(P*(a,b))]` over `F_q^*` and `F_q` for the quadratic
//! character, their kernel witnesses, and the character-sum hypotheses
//! that force them to be singular.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{det_exact, rank_kernel, IntMatrix, RankResult};
use crate::finitefield::{FieldCtx, FqElem};
use crate::modarith::gcd;
use crate::polyalg::{build_pm, build_qm, Poly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Indices over `F_q^*`.
    M,
    /// Indices over `F_q`.
    M0,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Variant::M),
            "M0" | "m0" => Ok(Variant::M0),
            _ => Err(Error::Parse(format!("unknown variant `{s}`"))),
        }
    }
}

fn indices(ctx: &FieldCtx, variant: Variant) -> Vec<FqElem> {
    match variant {
        Variant::M => ctx.units(),
        Variant::M0 => ctx.enumerate(),
    }
}

/// `chi` for every element, by canonical index.
fn chi_table(ctx: &FieldCtx) -> Vec<i8> {
    ctx.enumerate().into_iter().map(|x| ctx.chi(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharMatrixSpec {
    pub ctx: FieldCtx,
    pub poly: Poly,
    pub variant: Variant,
}

impl CharMatrixSpec {
    pub fn new(poly: Poly, variant: Variant) -> Result<Self> {
        let Ring::Field(ctx) = poly.ring() else {
            return Err(Error::Precondition("character matrices need a field polynomial".into()));
        };
        if poly.is_zero() {
            return Err(Error::Precondition("P must be nonzero".into()));
        }
        Ok(CharMatrixSpec { ctx, poly, variant })
    }
}

/// Entries `chi(P*(a, b))` with `P*(x, y) = x^n P(y/x)`, rows `a`,
/// columns `b`, in canonical enumeration order.
pub fn build_char_matrix(spec: &CharMatrixSpec) -> IntMatrix {
    let ctx = spec.ctx;
    let idx = indices(&ctx, spec.variant);
    let chi = chi_table(&ctx);
    let n = idx.len();
    IntMatrix::from_fn(n, n, |r, s| {
        chi[ctx.index_of(spec.poly.eval_homogeneous(idx[r], idx[s]))] as i64
    })
}

fn field_of(poly: &Poly) -> Result<FieldCtx> {
    match poly.ring() {
        Ring::Field(ctx) => Ok(ctx),
        Ring::Zmod(_) => Err(Error::Precondition("character sums need a field polynomial".into())),
    }
}

/// `sum_{x in F_q} chi(x P(x))`.
pub fn hypothesis_sum(poly: &Poly) -> Result<i64> {
    let ctx = field_of(poly)?;
    Ok(ctx
        .enumerate()
        .into_iter()
        .map(|x| ctx.chi(ctx.mul(x, poly.eval(x))) as i64)
        .sum())
}

/// `sum_x chi(x P(g x^2))`.
fn twisted_sum(poly: &Poly, ctx: &FieldCtx, g: FqElem) -> i64 {
    ctx.enumerate()
        .into_iter()
        .map(|x| ctx.chi(ctx.mul(x, poly.eval(ctx.mul(g, ctx.square(x))))) as i64)
        .sum()
}

/// `(sum_x chi(x P(x^2)), sum_x chi(x P(g x^2)))` for a non-square `g`.
pub fn twisted_hypothesis_sums(poly: &Poly, g: FqElem) -> Result<(i64, i64)> {
    let ctx = field_of(poly)?;
    if ctx.chi(g) != -1 {
        return Err(Error::Precondition(format!("g = {g} is not a non-square of F_{}", ctx.q())));
    }
    Ok((twisted_sum(poly, &ctx, FqElem::ONE), twisted_sum(poly, &ctx, g)))
}

/// First non-square of `F_q` in canonical order. In `F_{p^2}` every element
/// of `F_p` is a square, so this differs from the base-field non-residue.
pub fn first_nonsquare(ctx: &FieldCtx) -> FqElem {
    ctx.enumerate()
        .into_iter()
        .find(|&x| ctx.chi(x) == -1)
        .expect("odd q has non-squares")
}

/// `chi(-1) = 1`, i.e. `q = 1 mod 4`.
pub fn chi_minus_one_trivial(ctx: &FieldCtx) -> bool {
    ctx.chi(ctx.from_int(-1)) == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `v_b = chi(b)`.
    ChiVector,
    /// `v_{a,b} = chi(sqrt(ab))` when `ab` is a square, else 0.
    SqrtMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelWitness {
    pub kind: WitnessKind,
    /// A column vector is stored as an `n x 1` matrix.
    pub data: IntMatrix,
}

impl KernelWitness {
    pub fn chi_vector(ctx: &FieldCtx, variant: Variant) -> Self {
        let idx = indices(ctx, variant);
        let data = IntMatrix::from_fn(idx.len(), 1, |r, _| ctx.chi(idx[r]) as i64);
        KernelWitness { kind: WitnessKind::ChiVector, data }
    }

    /// `V` (or `V_0` for [`Variant::M0`]). Well defined only when
    /// `chi(-1) = 1`, since the root is fixed up to sign.
    pub fn sqrt_matrix(ctx: &FieldCtx, variant: Variant) -> Result<Self> {
        if !chi_minus_one_trivial(ctx) {
            return Err(Error::Precondition(format!("chi(-1) = -1 in F_{}", ctx.q())));
        }
        // chi(sqrt(x)) for each square x, 0 otherwise
        let root_chi: Vec<i8> = ctx
            .enumerate()
            .into_iter()
            .map(|x| ctx.sqrt(x).map_or(0, |r| ctx.chi(r)))
            .collect();
        let idx = indices(ctx, variant);
        let n = idx.len();
        let data = IntMatrix::from_fn(n, n, |r, s| root_chi[ctx.index_of(ctx.mul(idx[r], idx[s]))] as i64);
        Ok(KernelWitness { kind: WitnessKind::SqrtMatrix, data })
    }

    /// `M * W` is identically zero.
    pub fn annihilates(&self, m: &IntMatrix) -> Result<bool> {
        Ok(m.mul(&self.data)?.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma41Verdict {
    pub hypothesis_sum: i64,
    /// Whether the sum hypothesis holds; when false nothing is claimed.
    pub applicable: bool,
    #[serde(with = "crate::decimal")]
    pub det_m: BigInt,
    pub chi_vector_annihilates: bool,
    /// `deg P` even, so the claim extends to `M0`.
    pub m0_claimed: bool,
    #[serde(with = "crate::decimal")]
    pub det_m0: BigInt,
    pub m0_chi_vector_annihilates: bool,
    pub holds: bool,
}

/// Singularity of `M` (and of `M0` when `deg P` is even) given
/// `sum_x chi(x P(x)) = 0`. The `M0` determinant is recorded even when
/// unclaimed.
pub fn check_lemma41(poly: &Poly) -> Result<Lemma41Verdict> {
    let s = hypothesis_sum(poly)?;
    let applicable = s == 0;
    let m = build_char_matrix(&CharMatrixSpec::new(poly.clone(), Variant::M)?);
    let m0 = build_char_matrix(&CharMatrixSpec::new(poly.clone(), Variant::M0)?);
    let ctx = field_of(poly)?;
    let det_m = det_exact(&m)?;
    let det_m0 = det_exact(&m0)?;
    let chi_vector_annihilates = KernelWitness::chi_vector(&ctx, Variant::M).annihilates(&m)?;
    let m0_chi_vector_annihilates = KernelWitness::chi_vector(&ctx, Variant::M0).annihilates(&m0)?;
    let m0_claimed = poly.degree().is_some_and(|n| n % 2 == 0);
    let holds = !applicable
        || (det_m.is_zero()
            && chi_vector_annihilates
            && (!m0_claimed || (det_m0.is_zero() && m0_chi_vector_annihilates)));
    Ok(Lemma41Verdict {
        hypothesis_sum: s,
        applicable,
        det_m,
        chi_vector_annihilates,
        m0_claimed,
        det_m0,
        m0_chi_vector_annihilates,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma42Verdict {
    pub variant: Variant,
    pub sums: (i64, i64),
    pub applicable: bool,
    pub witness_rank: usize,
    pub witness_annihilates: bool,
    pub rank: RankResult,
    pub holds: bool,
}

/// `dim Ker >= 2` for `M` or `M0`, witnessed by `V` / `V_0`.
pub fn check_lemma42(poly: &Poly, g: FqElem, variant: Variant) -> Result<Lemma42Verdict> {
    let ctx = field_of(poly)?;
    if !chi_minus_one_trivial(&ctx) {
        return Err(Error::Precondition(format!("chi(-1) = -1 in F_{}", ctx.q())));
    }
    let sums = twisted_hypothesis_sums(poly, g)?;
    let applicable = sums == (0, 0);
    let m = build_char_matrix(&CharMatrixSpec::new(poly.clone(), variant)?);
    let v = KernelWitness::sqrt_matrix(&ctx, variant)?;
    let witness_rank = rank_kernel(&v.data).rank;
    let witness_annihilates = v.annihilates(&m)?;
    let rank = rank_kernel(&m);
    let holds = !applicable || (witness_rank == 2 && witness_annihilates && rank.kernel_dim >= 2);
    Ok(Lemma42Verdict {
        variant,
        sums,
        applicable,
        witness_rank,
        witness_annihilates,
        rank,
        holds,
    })
}

fn check_nonzero(x: FqElem, what: &str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::Precondition(format!("{what} must be nonzero")));
    }
    Ok(())
}

/// `sum_{x in F_q} chi(x P_m(g x^2, a))`, zero whenever `gcd(m, q-1) = 1`.
pub fn theorem41_sum(m: u64, a: FqElem, g: FqElem, ctx: &FieldCtx) -> Result<i64> {
    if gcd(m, ctx.q() - 1) != 1 {
        return Err(Error::Precondition(format!("gcd({m}, {}) != 1", ctx.q() - 1)));
    }
    check_nonzero(a, "a")?;
    check_nonzero(g, "g")?;
    Ok(twisted_sum(&build_pm(m, a, ctx)?, ctx, g))
}

/// `sum_{x in F_q} chi(x Q_m(g x^2, a))`, zero whenever `gcd(m, q^2-1) = 1`.
pub fn theorem42_sum(m: u64, a: FqElem, g: FqElem, ctx: &FieldCtx) -> Result<i64> {
    let q = ctx.q();
    if gcd(m, q * q - 1) != 1 {
        return Err(Error::Precondition(format!("gcd({m}, {}) != 1", q * q - 1)));
    }
    check_nonzero(a, "a")?;
    check_nonzero(g, "g")?;
    Ok(twisted_sum(&build_qm(m, a, ctx)?, ctx, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::build_qm;

    fn q5(q: u64) -> (FieldCtx, Poly) {
        let ctx = FieldCtx::from_order(q).unwrap();
        let poly = build_qm(5, ctx.from_int(-1), &ctx).unwrap();
        (ctx, poly)
    }

    fn p3(q: u64) -> (FieldCtx, Poly) {
        let ctx = FieldCtx::from_order(q).unwrap();
        let poly = build_pm(3, ctx.from_int(3), &ctx).unwrap();
        (ctx, poly)
    }

    #[test]
    fn build_examples() {
        let ctx = FieldCtx::prime(7).unwrap();
        let one = Poly::constant(Ring::Field(ctx), FqElem::ONE);
        let m = build_char_matrix(&CharMatrixSpec::new(one, Variant::M).unwrap());
        assert!(m.entries().iter().all(|e| *e == BigInt::from(1)));
        assert!(det_exact(&m).unwrap().is_zero());
        assert_eq!(rank_kernel(&m).rank, 1);

        let (_, poly) = q5(13);
        let m = build_char_matrix(&CharMatrixSpec::new(poly, Variant::M).unwrap());
        assert_eq!(m.rows(), 12);

        let ctx = FieldCtx::from_order(25).unwrap();
        let poly = build_pm(3, ctx.from_int(3), &ctx).unwrap();
        let m = build_char_matrix(&CharMatrixSpec::new(poly.clone(), Variant::M).unwrap());
        let m0 = build_char_matrix(&CharMatrixSpec::new(poly, Variant::M0).unwrap());
        assert_eq!((m.rows(), m0.rows()), (24, 25));
        assert!(CharMatrixSpec::new(Poly::zero(Ring::Field(ctx)), Variant::M).is_err());
    }

    #[test]
    fn matrix_entries_match_forms() {
        // over F_p, P = x^2 + c x + d gives P*(a,b) = d a^2 + c ab + b^2,
        // the transpose of the form matrix
        let ctx = FieldCtx::prime(13).unwrap();
        let poly = Poly::from_ints(Ring::Field(ctx), &[5, 5, 1]);
        let m = build_char_matrix(&CharMatrixSpec::new(poly, Variant::M0).unwrap());
        for i in 0..13i64 {
            for j in 0..13i64 {
                let v = crate::modarith::jacobi(j * j + 5 * i * j + 5 * i * i, 13).unwrap();
                assert_eq!(*m.get(i as usize, j as usize), BigInt::from(v));
            }
        }
    }

    #[test]
    fn hypothesis_examples() {
        let ctx = FieldCtx::prime(5).unwrap();
        let x = Poly::from_ints(Ring::Field(ctx), &[0, 1]);
        assert_eq!(hypothesis_sum(&x).unwrap(), 4);
        let (ctx, poly) = q5(13);
        assert_eq!(twisted_hypothesis_sums(&poly, ctx.from_int(2)).unwrap(), (0, 0));
        assert!(twisted_hypothesis_sums(&poly, ctx.from_int(4)).is_err());
        let (ctx, poly) = p3(17);
        assert_eq!(twisted_hypothesis_sums(&poly, ctx.from_int(3)).unwrap(), (0, 0));
    }

    #[test]
    fn nonsquare_of_extension() {
        let ctx = FieldCtx::from_order(49).unwrap();
        let g = first_nonsquare(&ctx);
        assert_eq!(ctx.chi(g), -1);
        assert!(!g.in_base_field());
        assert_eq!(first_nonsquare(&FieldCtx::prime(13).unwrap()), FqElem { a0: 2, a1: 0 });
    }

    #[test]
    fn lemma41_examples() {
        let (_, poly) = q5(13);
        let v = check_lemma41(&poly).unwrap();
        assert!(v.det_m.is_zero() && v.det_m0.is_zero());
        assert!(v.holds);
        let (_, poly) = p3(17);
        let v = check_lemma41(&poly).unwrap();
        assert!(v.det_m.is_zero() && v.holds);
    }

    #[test]
    fn chi_vector_kills_m_when_hypothesis_holds() {
        for q in [5u64, 7, 9, 11, 13, 25] {
            let ctx = FieldCtx::from_order(q).unwrap();
            let ring = Ring::Field(ctx);
            for c0 in 0..ctx.p() as i64 {
                for c1 in 0..ctx.p() as i64 {
                    let poly = Poly::from_ints(ring, &[c0, c1, 1]);
                    let v = check_lemma41(&poly).unwrap();
                    assert!(v.holds, "q={q} {poly} {v:?}");
                    if v.applicable {
                        assert!(v.chi_vector_annihilates);
                    }
                    assert_eq!(v.det_m.is_zero(), rank_kernel(&build_char_matrix(
                        &CharMatrixSpec::new(poly.clone(), Variant::M).unwrap()
                    )).kernel_dim >= 1);
                }
            }
        }
    }

    #[test]
    fn sqrt_matrix_rank_two() {
        let ctx = FieldCtx::prime(13).unwrap();
        let v = KernelWitness::sqrt_matrix(&ctx, Variant::M).unwrap();
        assert_eq!(rank_kernel(&v.data).rank, 2);
        let v0 = KernelWitness::sqrt_matrix(&ctx, Variant::M0).unwrap();
        assert_eq!(rank_kernel(&v0.data).rank, 2);
        // columns b and b c^2 are proportional
        let units = ctx.units();
        let b = units[0];
        let b2 = ctx.mul(b, ctx.square(ctx.from_int(5)));
        let (jb, jb2) = (
            units.iter().position(|&u| u == b).unwrap(),
            units.iter().position(|&u| u == b2).unwrap(),
        );
        let col = |j: usize| (0..12).map(|i| v.data.get(i, j).clone()).collect::<Vec<_>>();
        let (c1, c2) = (col(jb), col(jb2));
        assert!(c1 == c2 || c1.iter().zip(&c2).all(|(x, y)| *x == -y.clone()));
        assert!(KernelWitness::sqrt_matrix(&FieldCtx::prime(7).unwrap(), Variant::M).is_err());
    }

    #[test]
    fn lemma42_examples() {
        let (ctx, poly) = q5(13);
        let v = check_lemma42(&poly, ctx.from_int(2), Variant::M0).unwrap();
        assert!(v.applicable && v.holds && v.rank.kernel_dim >= 2);
        let (ctx, poly) = p3(17);
        let v = check_lemma42(&poly, ctx.from_int(3), Variant::M).unwrap();
        assert!(v.applicable && v.holds && v.rank.kernel_dim >= 2);
        assert_eq!(v.witness_rank, 2);
        let (ctx, poly) = q5(7);
        assert!(check_lemma42(&poly, ctx.from_int(3), Variant::M).is_err());
    }

    #[test]
    fn theorem_sum_examples() {
        let ctx = FieldCtx::prime(13).unwrap();
        assert_eq!(theorem41_sum(5, FqElem::ONE, FqElem::ONE, &ctx).unwrap(), 0);
        assert_eq!(theorem42_sum(5, ctx.from_int(-1), FqElem::ONE, &ctx).unwrap(), 0);
        assert!(theorem41_sum(3, FqElem::ONE, FqElem::ONE, &ctx).is_err());
        let ctx = FieldCtx::prime(17).unwrap();
        assert_eq!(theorem41_sum(3, ctx.from_int(3), FqElem::ONE, &ctx).unwrap(), 0);
        assert_eq!(theorem42_sum(5, ctx.from_int(-1), ctx.from_int(3), &ctx).unwrap(), 0);
        let ctx = FieldCtx::from_order(25).unwrap();
        for a in ctx.units() {
            assert_eq!(theorem41_sum(7, a, FqElem::ONE, &ctx).unwrap(), 0);
        }
        let ctx = FieldCtx::prime(7).unwrap();
        assert_eq!(theorem42_sum(5, FqElem::ONE, FqElem::ONE, &ctx).unwrap(), 0);
    }

    #[test]
    fn scaling_consistency() {
        for q in [5u64, 7, 9, 11, 13, 17, 19, 23, 25, 29, 31, 37, 41, 43, 47, 49] {
            let ctx = FieldCtx::from_order(q).unwrap();
            for m in (1..12u64).filter(|&m| gcd(m, q - 1) == 1) {
                let all_g = ctx.units().into_iter().all(|a| {
                    ctx.units()
                        .into_iter()
                        .all(|g| theorem41_sum(m, a, g, &ctx).unwrap() == 0)
                });
                let all_a = ctx
                    .units()
                    .into_iter()
                    .all(|a| theorem41_sum(m, a, FqElem::ONE, &ctx).unwrap() == 0);
                assert_eq!(all_g, all_a);
                assert!(all_a, "q={q} m={m}");
            }
        }
    }
}

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::partition::decode_into;
use crate::error::{Error, Result};
use crate::ff::{is_irreducible, FieldCtx, Poly, ScalarField};
use crate::group::{affine_key, classify, mat_order, projective_key, projective_order, ClassTag, Mat2};

/// Largest field the root counters will enumerate.
pub const ROOT_CAP: u64 = 1 << 24;
const CHUNK: u64 = 1 << 16;

fn check_order(ctx: &FieldCtx, m: &Mat2, r1: u32) -> Result<u32> {
    let f = ctx.base();
    if r1 == 0 || ctx.r() % r1 != 0 {
        return Err(Error::CaseViolation(format!(
            "r1 = {r1} does not divide r = {}",
            ctx.r()
        )));
    }
    if m.det(f) == 0 {
        return Err(Error::SingularMatrix);
    }
    let rbar = (ctx.r() / r1) as u64;
    if projective_order(f, m) != rbar && mat_order(f, m) != rbar {
        return Err(Error::CaseViolation(format!(
            "matrix {m:?} has order {} (projective order {}), expected {rbar}",
            mat_order(f, m),
            projective_order(f, m)
        )));
    }
    Ok(rbar as u32)
}

fn field_total(ctx: &FieldCtx) -> Result<u64> {
    ctx.element_count_u64()
        .filter(|&n| n <= ROOT_CAP)
        .ok_or_else(|| Error::CapExceeded {
            what: "root enumeration",
            needed: ctx.element_count().to_string(),
            cap: ROOT_CAP,
        })
}

/// Indices of the α in S with `σ^{r1}(α) (cα + d) = aα + b`.
fn root_indices(ctx: &FieldCtx, m: &Mat2, r1: u32, total: u64) -> Vec<u64> {
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let f = ctx.base();
            let q = f.q();
            let r = ctx.r() as usize;
            let mut alpha = vec![0u32; r];
            let mut beta = vec![0u32; r];
            let mut buf = vec![0u32; r];
            let mut den = vec![0u32; r];
            let mut lhs = vec![0u32; r];
            let mut scratch = Vec::new();
            let mut found = Vec::new();
            for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                decode_into(idx, q, &mut alpha);
                if !ctx.full_degree_with(&alpha, &mut buf) {
                    continue;
                }
                ctx.frobenius_into(&alpha, r1, &mut beta);
                for i in 0..r {
                    den[i] = f.mul(m.c, alpha[i]);
                }
                den[0] = f.add(den[0], m.d);
                ctx.mul_into(&beta, &den, &mut lhs, &mut scratch);
                let matches = (0..r).all(|i| {
                    let mut rhs = f.mul(m.a, alpha[i]);
                    if i == 0 {
                        rhs = f.add(rhs, m.b);
                    }
                    lhs[i] == rhs
                });
                if matches {
                    found.push(idx);
                }
            }
            found
        })
        .collect()
}

/// Number of α in S with `σ^{r1}(α) = π_A(α)`, by enumeration. `A` must
/// have order `r/r1` in GL(2,q) or in PGL(2,q).
pub fn oracle_root_count(ctx: &FieldCtx, m: &Mat2, r1: u32) -> Result<BigUint> {
    check_order(ctx, m, r1)?;
    let total = field_total(ctx)?;
    Ok(BigUint::from(root_indices(ctx, m, r1, total).len()))
}

/// Where the roots of `σ^{r1}(α) = π_A(α)` fall among the orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootTally {
    pub total: u64,
    /// Roots per affine key (index of the key's representative).
    pub per_affine: BTreeMap<u64, u64>,
    /// Roots per projective key.
    pub per_projective: BTreeMap<u64, u64>,
    /// Affine keys holding roots, grouped by projective key.
    pub affine_keys_per_projective: BTreeMap<u64, u64>,
}

pub fn root_tally(ctx: &FieldCtx, m: &Mat2, r1: u32) -> Result<RootTally> {
    check_order(ctx, m, r1)?;
    let total = field_total(ctx)?;
    let roots = root_indices(ctx, m, r1, total);
    let mut per_affine = BTreeMap::new();
    let mut per_projective = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for &idx in &roots {
        let alpha = ctx.from_index(idx);
        let ak = ctx.index(&affine_key(ctx, &alpha).repr);
        let pk = ctx.index(&projective_key(ctx, &alpha).repr);
        *per_affine.entry(ak).or_insert(0u64) += 1;
        *per_projective.entry(pk).or_insert(0u64) += 1;
        pairs.insert((pk, ak), ());
    }
    let mut affine_keys_per_projective = BTreeMap::new();
    for &(pk, _) in pairs.keys() {
        *affine_keys_per_projective.entry(pk).or_insert(0u64) += 1;
    }
    Ok(RootTally {
        total: roots.len() as u64,
        per_affine,
        per_projective,
        affine_keys_per_projective,
    })
}

/// Roots of `σ^{r1}(α) = π_A(α)` inside each projective set that holds any,
/// for a matrix `A` with irreducible characteristic polynomial.
pub fn roots_per_projective_set(ctx: &FieldCtx, m: &Mat2, r1: u32) -> Result<Vec<u64>> {
    let class = classify(ctx.base(), m);
    if class.tag != ClassTag::IrreducibleQuadratic {
        return Err(Error::CaseViolation(format!(
            "expected an irreducible quadratic class, got {:?}",
            class.tag
        )));
    }
    Ok(root_tally(ctx, m, r1)?.per_projective.into_values().collect())
}

/// Whether `P = c x^2 + (d - a) x - b`, the fixed-point polynomial of `A`,
/// divides `F(x) = c x^{q^{r1}+1} + d x^{q^{r1}} - a x - b`.
pub fn quad_divisibility_check(ctx: &FieldCtx, m: &Mat2, r1: u32) -> Result<bool> {
    let f = ctx.base();
    let p = Poly::new(vec![f.neg(m.b), f.sub(m.d, m.a), m.c]);
    if p.degree() != Some(2) || !is_irreducible(&p, f) {
        return Err(Error::CaseViolation(format!(
            "fixed-point polynomial of {m:?} is not an irreducible quadratic"
        )));
    }
    let monic = p.monic(f);
    // R = x^{q^{r1}} mod P, then F mod P = (c x + d) R - a x - b
    let r = ctx.poly_frobenius_power(&monic, r1 as u64);
    let lin = Poly::new(vec![m.d, m.c]);
    let f_mod = lin
        .mul(&r, f)
        .sub(&Poly::new(vec![m.b, m.a]), f)
        .rem(&monic, f);
    Ok(f_mod.is_zero())
}

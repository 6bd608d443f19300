use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partition::decode_into;
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, ScalarField};
use crate::group::{classify, ClassTag, Mat2, OrbitKind};
use crate::json;
use crate::linalg::rref_in_place;

pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// Which elements a streaming run visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every element of F_{q^r}.
    Full,
    /// One element per affine orbit: constant term 0 and leading
    /// coefficient (among x^1..x^{r-1}) equal to 1.
    AffineTransversal,
}

#[derive(Debug, Clone, Copy)]
pub struct StreamOptions {
    pub scope: Scope,
    pub chunk: u64,
    pub element_budget: Option<u64>,
}

impl Default for StreamOptions {
    fn default() -> Self {
        Self {
            scope: Scope::AffineTransversal,
            chunk: DEFAULT_CHUNK,
            element_budget: None,
        }
    }
}

/// Fixed sets split by the class of the map `σ^{r1}` induces on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTally {
    pub tag: ClassTag,
    /// Order of the induced map (projective order for PGL(2,q)).
    pub order: u64,
    #[serde(serialize_with = "json::biguint")]
    pub matched_elements: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub fixed_sets: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StreamStats {
    pub p: u32,
    pub t: u32,
    pub r: u32,
    pub r1: u32,
    pub kind: OrbitKind,
    pub scope: Scope,
    #[serde(serialize_with = "json::u64_string")]
    pub elements_visited: u64,
    #[serde(serialize_with = "json::biguint")]
    pub matched_elements: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub derived_fixed_sets: BigUint,
    /// Projective matches whose dependency has c = 0, i.e. an affine map.
    #[serde(serialize_with = "json::u64_string")]
    pub affine_dependencies: u64,
    pub classes: Vec<ClassTally>,
}

#[derive(Default)]
struct Acc {
    visited: u64,
    matched: u64,
    affine_deps: u64,
    classes: HashMap<(ClassTag, u64), u64>,
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        self.visited += other.visited;
        self.matched += other.matched;
        self.affine_deps += other.affine_deps;
        for (k, v) in other.classes {
            *self.classes.entry(k).or_default() += v;
        }
        self
    }
}

fn scope_size(ctx: &FieldCtx, scope: Scope) -> Option<u64> {
    let q = ctx.q() as u64;
    let r = ctx.r();
    match scope {
        Scope::Full => ctx.element_count_u64(),
        Scope::AffineTransversal => {
            let top = q.checked_pow(r - 1)?;
            Some((top - 1) / (q - 1))
        }
    }
}

/// The `m`-th transversal element: the leading 1 sits at `x^j` and the
/// coefficients of `x^1..x^{j-1}` run through an odometer.
fn transversal_into(mut m: u64, q: u32, out: &mut [u32]) {
    out.iter_mut().for_each(|c| *c = 0);
    let mut block = 1u64;
    let mut j = 1;
    while m >= block {
        m -= block;
        block *= q as u64;
        j += 1;
    }
    out[j] = 1;
    decode_into(m, q, &mut out[1..j]);
}

/// Counts the affine or projective sets fixed by `<σ^{r1}>` without storing
/// orbits, visiting one element per affine orbit.
pub fn stream_fixed_count(ctx: &FieldCtx, r1: u32, kind: OrbitKind) -> Result<StreamStats> {
    stream_fixed_count_with(ctx, r1, kind, StreamOptions::default())
}

pub fn stream_fixed_count_with(
    ctx: &FieldCtx,
    r1: u32,
    kind: OrbitKind,
    opts: StreamOptions,
) -> Result<StreamStats> {
    if r1 == 0 || ctx.r() % r1 != 0 {
        return Err(Error::CaseViolation(format!(
            "r1 = {r1} does not divide r = {}",
            ctx.r()
        )));
    }
    let total = scope_size(ctx, opts.scope)
        .filter(|&n| opts.element_budget.is_none_or(|b| n <= b))
        .ok_or_else(|| Error::CapExceeded {
            what: "element budget",
            needed: match opts.scope {
                Scope::Full => ctx.element_count().to_string(),
                Scope::AffineTransversal => {
                    ((ctx.q_big().pow(ctx.r() - 1) - 1u32) / (ctx.q_big() - 1u32)).to_string()
                }
            },
            cap: opts.element_budget.unwrap_or(u64::MAX),
        })?;
    let chunk = opts.chunk.max(1);
    let chunks = total.div_ceil(chunk);
    let acc = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            scan(ctx, r1, kind, opts.scope, lo, hi)
        })
        .reduce(Acc::default, Acc::merge);

    let q = ctx.q() as u64;
    let affine_size = q * (q - 1);
    let projective_size = q * q * q - q;
    let (per_match, set_size) = match opts.scope {
        Scope::Full => (1, if kind == OrbitKind::Affine { affine_size } else { projective_size }),
        // each fixed projective set holds q + 1 affine sets, one representative each
        Scope::AffineTransversal => (affine_size, if kind == OrbitKind::Affine { affine_size } else { projective_size }),
    };
    let derive = |matched: u64| -> Result<(BigUint, BigUint)> {
        let elems = BigUint::from(matched) * per_match;
        let (sets, rem) = elems.div_rem(&BigUint::from(set_size));
        if !rem.is_zero() {
            return Err(Error::InexactDivision {
                site: "matched elements / set size",
                numerator: elems.to_string(),
                denominator: set_size.to_string(),
            });
        }
        Ok((elems, sets))
    };
    let (matched_elements, derived_fixed_sets) = derive(acc.matched)?;
    let mut classes: Vec<ClassTally> = acc
        .classes
        .iter()
        .map(|(&(tag, order), &m)| {
            let (matched_elements, fixed_sets) = derive(m)?;
            Ok(ClassTally {
                tag,
                order,
                matched_elements,
                fixed_sets,
            })
        })
        .collect::<Result<_>>()?;
    classes.sort_by_key(|c| (c.order, c.tag as u8));

    Ok(StreamStats {
        p: ctx.p(),
        t: ctx.t(),
        r: ctx.r(),
        r1,
        kind,
        scope: opts.scope,
        elements_visited: acc.visited,
        matched_elements,
        derived_fixed_sets,
        affine_dependencies: acc.affine_deps,
        classes,
    })
}

fn affine_class(f: &crate::ff::BaseField, a: u32, b: u32) -> (ClassTag, u64) {
    if a == 1 {
        if b == 0 {
            (ClassTag::Identity, 1)
        } else {
            (ClassTag::Unipotent, f.p() as u64)
        }
    } else {
        (ClassTag::SplitDiagonalizable, f.mult_order(a).expect("a is nonzero"))
    }
}

fn scan(ctx: &FieldCtx, r1: u32, kind: OrbitKind, scope: Scope, lo: u64, hi: u64) -> Acc {
    let f = ctx.base();
    let q = f.q();
    let r = ctx.r() as usize;
    let mut acc = Acc::default();
    let mut alpha = vec![0u32; r];
    let mut beta = vec![0u32; r];
    let mut prod = vec![0u32; r];
    let mut buf = vec![0u32; r];
    let mut scratch = Vec::new();
    let mut m4 = vec![0u32; r * 4];
    let mut class_cache: HashMap<Mat2, (ClassTag, u64)> = HashMap::new();

    for idx in lo..hi {
        match scope {
            Scope::Full => decode_into(idx, q, &mut alpha),
            Scope::AffineTransversal => transversal_into(idx, q, &mut alpha),
        }
        acc.visited += 1;
        if !ctx.full_degree_with(&alpha, &mut buf) {
            continue;
        }
        ctx.frobenius_into(&alpha, r1, &mut beta);
        match kind {
            OrbitKind::Affine => {
                if let Some((a, b)) = ctx.affine_coords(&beta, &alpha) {
                    acc.matched += 1;
                    *acc.classes.entry(affine_class(f, a, b)).or_default() += 1;
                }
            }
            OrbitKind::Projective => {
                ctx.mul_into(&alpha, &beta, &mut prod, &mut scratch);
                // columns 1, α, β, αβ in the basis of F_{q^r} over F_q
                for i in 0..r {
                    m4[i * 4] = u32::from(i == 0);
                    m4[i * 4 + 1] = alpha[i];
                    m4[i * 4 + 2] = beta[i];
                    m4[i * 4 + 3] = prod[i];
                }
                let pivots = rref_in_place(&mut m4, r, 4, f);
                if pivots.len() == 4 {
                    continue;
                }
                acc.matched += 1;
                let free = (0..4).find(|c| !pivots.contains(c)).expect("rank below 4");
                let mut x = [0u32; 4];
                x[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(m4[i * 4 + free]);
                }
                // x0 + x1 α + x2 β + x3 αβ = 0, so β = (-x1 α - x0) / (x3 α + x2)
                let m = Mat2::new(f.neg(x[1]), f.neg(x[0]), x[3], x[2]);
                assert_ne!(m.det(f), 0, "β has full degree, so the map is invertible");
                if m.c == 0 {
                    acc.affine_deps += 1;
                }
                let key = *class_cache.entry(m).or_insert_with(|| {
                    let c = classify(f, &m);
                    (c.tag, c.projective_order)
                });
                *acc.classes.entry(key).or_default() += 1;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_ctx;

    fn full(ctx: &FieldCtx, r1: u32, kind: OrbitKind) -> StreamStats {
        let opts = StreamOptions {
            scope: Scope::Full,
            ..StreamOptions::default()
        };
        stream_fixed_count_with(ctx, r1, kind, opts).unwrap()
    }

    #[test]
    fn transversal_enumeration() {
        let ctx = build_ctx(3, 1, 4).unwrap();
        let n = scope_size(&ctx, Scope::AffineTransversal).unwrap();
        assert_eq!(n, 13);
        let mut seen = std::collections::HashSet::new();
        let mut v = vec![0; 4];
        for m in 0..n {
            transversal_into(m, 3, &mut v);
            assert_eq!(v[0], 0);
            let lead = (1..4).rev().find(|&j| v[j] != 0).unwrap();
            assert_eq!(v[lead], 1);
            assert!(seen.insert(v.clone()));
        }
    }

    #[test]
    fn examples() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        let s = full(&ctx, 3, OrbitKind::Affine);
        assert_eq!(s.matched_elements, BigUint::from(60u32));
        assert_eq!(s.derived_fixed_sets, BigUint::from(5u32));

        let ctx = build_ctx(2, 3, 3).unwrap();
        let s = full(&ctx, 1, OrbitKind::Projective);
        assert_eq!(s.derived_fixed_sets, BigUint::from(1u32));

        let ctx = build_ctx(2, 1, 4).unwrap();
        let s = full(&ctx, 2, OrbitKind::Affine);
        assert_eq!(s.derived_fixed_sets, BigUint::from(2u32));
    }

    #[test]
    fn scopes_agree() {
        for (p, t, r) in [(2, 1, 6), (3, 1, 4), (2, 2, 4), (3, 2, 3), (5, 1, 4)] {
            let ctx = build_ctx(p, t, r).unwrap();
            for r1 in crate::ntheory::divisors(r as u64) {
                for kind in [OrbitKind::Affine, OrbitKind::Projective] {
                    let a = full(&ctx, r1 as u32, kind);
                    let b = stream_fixed_count(&ctx, r1 as u32, kind).unwrap();
                    assert_eq!(a.derived_fixed_sets, b.derived_fixed_sets, "{p} {t} {r} {r1} {kind:?}");
                    assert_eq!(a.classes, b.classes);
                }
            }
        }
    }

    #[test]
    fn budget() {
        let ctx = build_ctx(2, 1, 10).unwrap();
        let opts = StreamOptions {
            element_budget: Some(100),
            ..StreamOptions::default()
        };
        assert!(matches!(
            stream_fixed_count_with(&ctx, 1, OrbitKind::Affine, opts),
            Err(Error::CapExceeded { .. })
        ));
    }
}

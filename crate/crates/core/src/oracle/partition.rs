use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, ScalarField};
use crate::group::{pgl_elements, OrbitKind};
use crate::json;
use crate::ntheory::{divisors, euler_phi};

pub const DEFAULT_PARTITION_CAP: u64 = 1 << 22;

const UNSEEN: u32 = u32::MAX;

/// Orbit member counts, collapsed to `size -> number of keys`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyStats {
    pub size: u64,
    pub keys: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedBy {
    pub r1: u32,
    #[serde(serialize_with = "json::biguint")]
    pub count: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionCensus {
    pub p: u32,
    pub t: u32,
    pub r: u32,
    pub kind: OrbitKind,
    /// Index of each orbit's least member, in increasing order.
    #[serde(skip)]
    pub reprs: Vec<u64>,
    #[serde(skip)]
    pub sizes: Vec<u64>,
    pub key_count: u64,
    pub key_sizes: Vec<KeyStats>,
    pub fixed_by: Vec<FixedBy>,
    /// Burnside average of `fixed_by`.
    #[serde(serialize_with = "json::biguint")]
    pub orbit_count_under_g: BigUint,
    /// Number of Frobenius cycles on the keys, counted directly.
    #[serde(serialize_with = "json::biguint")]
    pub orbit_count_direct: BigUint,
    pub elements_visited: u64,
    /// Orbit id per element index; `u32::MAX` outside S.
    #[serde(skip)]
    orbit_of: Vec<u32>,
}

impl PartitionCensus {
    pub fn fixed(&self, r1: u32) -> Option<&BigUint> {
        self.fixed_by.iter().find(|f| f.r1 == r1).map(|f| &f.count)
    }

    /// Orbit id of an element index, if it lies in S.
    pub fn orbit_of(&self, index: u64) -> Option<u32> {
        self.orbit_of
            .get(index as usize)
            .copied()
            .filter(|&k| k != UNSEEN)
    }
}

/// Partitions S into affine or projective orbits and counts the keys fixed
/// by each subgroup of Frobenius. Fails when `q^r > cap`.
pub fn partition_census(ctx: &FieldCtx, kind: OrbitKind, cap: u64) -> Result<PartitionCensus> {
    let total = ctx
        .element_count_u64()
        .filter(|&n| n <= cap && n < UNSEEN as u64)
        .ok_or_else(|| Error::CapExceeded {
            what: "partition size",
            needed: ctx.element_count().to_string(),
            cap,
        })?;
    let f = ctx.base();
    let q = f.q();
    let r = ctx.r() as usize;
    let pgl = match kind {
        OrbitKind::Projective => pgl_elements(f),
        OrbitKind::Affine => Vec::new(),
    };

    let mut orbit_of = vec![UNSEEN; total as usize];
    let mut reprs = Vec::new();
    let mut sizes = Vec::new();
    let mut alpha = vec![0u32; r];
    let mut buf = vec![0u32; r];
    let mut num = vec![0u32; r];
    let mut member = vec![0u32; r];
    let mut scratch = Vec::new();
    let mut inverses: Vec<Vec<u32>> = Vec::with_capacity(q as usize);

    for idx in 0..total {
        if orbit_of[idx as usize] != UNSEEN {
            continue;
        }
        decode_into(idx, q, &mut alpha);
        if !ctx.full_degree_with(&alpha, &mut buf) {
            continue;
        }
        let k = reprs.len() as u32;
        reprs.push(idx);
        let mut size = 0u64;
        let mut mark = |coeffs: &[u32], orbit_of: &mut [u32]| {
            let j = ctx.index_of(coeffs) as usize;
            match orbit_of[j] {
                UNSEEN => {
                    orbit_of[j] = k;
                    size += 1;
                }
                other => assert_eq!(other, k, "orbits overlap at index {j}"),
            }
        };
        match kind {
            OrbitKind::Affine => {
                for a in 1..q {
                    for (m, &x) in member.iter_mut().zip(&alpha) {
                        *m = f.mul(a, x);
                    }
                    let base0 = member[0];
                    for b in 0..q {
                        member[0] = f.add(base0, b);
                        mark(&member, &mut orbit_of);
                    }
                }
            }
            OrbitKind::Projective => {
                inverses.clear();
                for d in 0..q {
                    let mut shifted = alpha.clone();
                    shifted[0] = f.add(shifted[0], d);
                    let e = ctx.from_coeffs(shifted).expect("valid coefficients");
                    let inv = ctx.inv(&e).expect("α + d is nonzero off F_q");
                    inverses.push(inv.coeffs().to_vec());
                }
                for m in &pgl {
                    for (n, &x) in num.iter_mut().zip(&alpha) {
                        *n = f.mul(m.a, x);
                    }
                    num[0] = f.add(num[0], m.b);
                    if m.c == 0 {
                        mark(&num, &mut orbit_of);
                    } else {
                        // normalized so that c = 1
                        ctx.mul_into(&num, &inverses[m.d as usize], &mut member, &mut scratch);
                        mark(&member, &mut orbit_of);
                    }
                }
            }
        }
        sizes.push(size);
    }

    // Frobenius on keys: σ(K) is the orbit holding σ(repr K).
    let key_count = reprs.len();
    let mut image = vec![0u32; key_count];
    for (k, &idx) in reprs.iter().enumerate() {
        decode_into(idx, q, &mut alpha);
        ctx.frobenius_into(&alpha, 1, &mut buf);
        image[k] = orbit_of[ctx.index_of(&buf) as usize];
    }

    let mut fixed_by = Vec::new();
    for r1 in divisors(ctx.r() as u64) {
        let r1 = r1 as u32;
        let mut count = 0u64;
        for &idx in &reprs {
            decode_into(idx, q, &mut alpha);
            ctx.frobenius_into(&alpha, r1, &mut buf);
            let own = orbit_of[idx as usize];
            if orbit_of[ctx.index_of(&buf) as usize] == own {
                count += 1;
            }
        }
        fixed_by.push(FixedBy {
            r1,
            count: BigUint::from(count),
        });
    }

    let mut visited = vec![false; key_count];
    let mut cycles = 0u64;
    for start in 0..key_count {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            k = image[k] as usize;
        }
    }

    let r_u = ctx.r() as u64;
    let burnside_sum: BigUint = fixed_by
        .iter()
        .map(|fb| &fb.count * euler_phi(r_u / fb.r1 as u64))
        .sum();
    let (orbit_count_under_g, rem) = num_integer::Integer::div_rem(&burnside_sum, &BigUint::from(r_u));
    if rem != BigUint::from(0u32) {
        return Err(Error::IntegralityViolation {
            action: match kind {
                OrbitKind::Affine => "affine",
                OrbitKind::Projective => "projective",
            },
            sum: burnside_sum.to_string(),
            r: ctx.r(),
        });
    }

    let mut size_hist: BTreeMap<u64, u64> = BTreeMap::new();
    for &s in &sizes {
        *size_hist.entry(s).or_default() += 1;
    }

    Ok(PartitionCensus {
        p: ctx.p(),
        t: ctx.t(),
        r: ctx.r(),
        kind,
        key_count: key_count as u64,
        key_sizes: size_hist
            .into_iter()
            .map(|(size, keys)| KeyStats { size, keys })
            .collect(),
        reprs,
        sizes,
        fixed_by,
        orbit_count_under_g,
        orbit_count_direct: BigUint::from(cycles),
        elements_visited: total,
        orbit_of,
    })
}

pub(crate) fn decode_into(mut index: u64, q: u32, out: &mut [u32]) {
    for c in out.iter_mut() {
        *c = (index % q as u64) as u32;
        index /= q as u64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_ctx;

    #[test]
    fn small_partitions() {
        let ctx = build_ctx(2, 1, 3).unwrap();
        let pc = partition_census(&ctx, OrbitKind::Affine, DEFAULT_PARTITION_CAP).unwrap();
        assert_eq!(pc.key_count, 3);
        assert_eq!(pc.key_sizes, vec![KeyStats { size: 2, keys: 3 }]);

        let ctx = build_ctx(2, 2, 3).unwrap();
        let pc = partition_census(&ctx, OrbitKind::Projective, DEFAULT_PARTITION_CAP).unwrap();
        assert_eq!(pc.key_sizes, vec![KeyStats { size: 60, keys: 1 }]);
        let pc = partition_census(&ctx, OrbitKind::Affine, DEFAULT_PARTITION_CAP).unwrap();
        assert_eq!(pc.key_count, 5);
        assert_eq!(pc.fixed(3), Some(&BigUint::from(5u32)));
        assert_eq!(pc.fixed(1), Some(&BigUint::from(2u32)));
        assert_eq!(pc.orbit_count_under_g, BigUint::from(3u32));
        assert_eq!(pc.orbit_count_direct, BigUint::from(3u32));
    }

    #[test]
    fn cap_is_enforced() {
        let ctx = build_ctx(2, 1, 12).unwrap();
        assert!(matches!(
            partition_census(&ctx, OrbitKind::Affine, 1 << 10),
            Err(Error::CapExceeded { .. })
        ));
    }
}

use std::collections::HashMap;

use goppa_census::build_ctx;
use goppa_census::census::{classify_divisor, CaseTag, Params};
use goppa_census::group::OrbitKind;
use goppa_census::ntheory::divisors;
use goppa_census::oracle::{partition_census, DEFAULT_PARTITION_CAP};

const INSTANCES: [(u64, u32, u32); 9] = [
    (2, 1, 6),
    (2, 2, 4),
    (2, 2, 6),
    (2, 1, 12),
    (3, 1, 6),
    (3, 2, 4),
    (5, 1, 4),
    (5, 1, 5),
    (7, 1, 4),
];

/// Fixed affine keys inside each fixed projective key, per divisor case.
#[test]
fn fixed_affine_keys_inside_fixed_projective_keys() {
    for (p, t, r) in INSTANCES {
        let params = Params::new(p, t, r).unwrap();
        let ctx = build_ctx(p, t, r).unwrap();
        let aff = partition_census(&ctx, OrbitKind::Affine, DEFAULT_PARTITION_CAP).unwrap();
        let proj = partition_census(&ctx, OrbitKind::Projective, DEFAULT_PARTITION_CAP).unwrap();
        for r1 in divisors(r as u64) {
            let r1 = r1 as u32;
            let want = match classify_divisor(&params, r1).unwrap().tag {
                CaseTag::SplitTorus => 2,
                CaseTag::Unipotent => 1,
                _ => continue,
            };
            let image = |idx: u64| ctx.index(&ctx.frobenius(&ctx.from_index(idx), r1));
            let mut inside: HashMap<u32, u64> = HashMap::new();
            for &idx in &proj.reprs {
                if proj.orbit_of(image(idx)) == proj.orbit_of(idx) {
                    inside.insert(proj.orbit_of(idx).unwrap(), 0);
                }
            }
            for &idx in &aff.reprs {
                if aff.orbit_of(image(idx)) != aff.orbit_of(idx) {
                    continue;
                }
                let key = proj.orbit_of(idx).unwrap();
                let slot = inside.get_mut(&key);
                assert!(slot.is_some(), "fixed affine key in unfixed projective key at ({p},{t},{r}) r1={r1}");
                *slot.unwrap() += 1;
            }
            assert!(!inside.is_empty(), "({p},{t},{r}) r1={r1} fixes nothing");
            assert!(
                inside.values().all(|&n| n == want),
                "({p},{t},{r}) r1={r1}: {:?}",
                inside.values().collect::<Vec<_>>()
            );
        }
    }
}

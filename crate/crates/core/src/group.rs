//! 2×2 matrices over F_q, their orders and classes, and the affine and
//! projective actions on F_{q^r}.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::ff::{is_irreducible, BaseField, Element, FieldCtx, Poly, ScalarField};
use crate::ntheory::{divisors, euler_phi, gcd, order_dividing};

/// `[[a, b], [c, d]]` with entries as F_q codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        for v in [self.a, self.b, self.c, self.d] {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { a, b, c, d }
    }

    pub fn diag(x: u32, y: u32) -> Self {
        Self::new(x, 0, 0, y)
    }

    /// `[[0, 1], [zeta, xi]]`, characteristic polynomial `x^2 - xi x - zeta`.
    pub fn companion(zeta: u32, xi: u32) -> Self {
        Self::new(0, 1, zeta, xi)
    }

    pub fn det(&self, f: &BaseField) -> u32 {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn trace(&self, f: &BaseField) -> u32 {
        f.add(self.a, self.d)
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    pub fn mul(&self, o: &Mat2, f: &BaseField) -> Mat2 {
        let dot = |x: u32, y: u32, z: u32, w: u32| f.add(f.mul(x, y), f.mul(z, w));
        Mat2 {
            a: dot(self.a, o.a, self.b, o.c),
            b: dot(self.a, o.b, self.b, o.d),
            c: dot(self.c, o.a, self.d, o.c),
            d: dot(self.c, o.b, self.d, o.d),
        }
    }

    pub fn pow(&self, mut e: u64, f: &BaseField) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// `None` when singular.
    pub fn inverse(&self, f: &BaseField) -> Option<Mat2> {
        let di = f.inv(self.det(f))?;
        Some(Mat2 {
            a: f.mul(self.d, di),
            b: f.mul(f.neg(self.b), di),
            c: f.mul(f.neg(self.c), di),
            d: f.mul(self.a, di),
        })
    }

    pub fn scale(&self, lambda: u32, f: &BaseField) -> Mat2 {
        Mat2 {
            a: f.mul(self.a, lambda),
            b: f.mul(self.b, lambda),
            c: f.mul(self.c, lambda),
            d: f.mul(self.d, lambda),
        }
    }

    /// `x^2 - tr x + det` as a monic polynomial over F_q.
    pub fn char_poly(&self, f: &BaseField) -> Poly {
        Poly::new(vec![self.det(f), f.neg(self.trace(f)), 1])
    }
}

/// A multiple of every element order in GL(2,q): p(q^2 - 1).
fn group_exponent(f: &BaseField) -> u64 {
    let q = f.q() as u64;
    f.p() as u64 * (q * q - 1)
}

/// Order of `A` in GL(2,q). Panics on a singular matrix.
pub fn mat_order(f: &BaseField, m: &Mat2) -> u64 {
    assert_ne!(m.det(f), 0, "singular matrix has no order");
    order_dividing(group_exponent(f), |k| m.pow(k, f) == Mat2::IDENTITY)
}

/// Order of the image of `A` in PGL(2,q): least `k` with `A^k` scalar.
pub fn projective_order(f: &BaseField, m: &Mat2) -> u64 {
    assert_ne!(m.det(f), 0, "singular matrix has no order");
    order_dividing(group_exponent(f), |k| m.pow(k, f).is_scalar())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    Identity,
    Unipotent,
    SplitDiagonalizable,
    IrreducibleQuadratic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatClass {
    pub tag: ClassTag,
    pub order: u64,
    #[serde(skip)]
    pub projective_order: u64,
    /// A scalar matrix other than the identity: nontrivial in GL(2,q) but
    /// acting trivially on the projective line.
    #[serde(skip)]
    pub scalar: bool,
    #[serde(skip)]
    pub witness: Mat2,
}

fn roots_in_base(f: &BaseField, p: &Poly) -> Vec<u32> {
    (0..f.q()).filter(|&x| p.eval(x, f) == 0).collect()
}

/// Classifies `A` through its minimal polynomial. Scalars `λI` are tagged
/// `Identity` with `scalar` set, since they act trivially.
pub fn classify(f: &BaseField, m: &Mat2) -> MatClass {
    let order = mat_order(f, m);
    let projective_order = projective_order(f, m);
    let make = |tag, witness| MatClass {
        tag,
        order,
        projective_order,
        scalar: m.is_scalar() && *m != Mat2::IDENTITY,
        witness,
    };
    if m.is_scalar() {
        return make(ClassTag::Identity, *m);
    }
    let cp = m.char_poly(f);
    if is_irreducible(&cp, f) {
        let witness = Mat2::companion(f.neg(cp.coeff(0)), f.neg(cp.coeff(1)));
        return make(ClassTag::IrreducibleQuadratic, witness);
    }
    let roots = roots_in_base(f, &cp);
    match roots.as_slice() {
        [l] => make(ClassTag::Unipotent, Mat2::new(*l, 1, 0, *l)),
        [l1, l2] => make(ClassTag::SplitDiagonalizable, Mat2::diag(*l1, *l2)),
        _ => unreachable!("reducible quadratic has one or two roots"),
    }
}

/// Conjugacy class representatives of order `D` in GL(2,q), in the shapes
/// used by the fixed-set counts:
/// `[[ζ,0],[0,1]]` for the φ(D) elements ζ of order D when D | q-1,
/// `[[1,1],[0,1]]` when D = p, and companion matrices of the φ(D)/2
/// irreducible quadratics whose roots have order D when D | q+1 and D > 2.
pub fn conjugacy_reps(f: &BaseField, d: u64) -> Vec<Mat2> {
    let q = f.q() as u64;
    let p = f.p() as u64;
    let mut reps = Vec::new();
    if d < 2 {
        return reps;
    }
    if d == p {
        reps.push(Mat2::new(1, 1, 0, 1));
        return reps;
    }
    if gcd(d, p) != 1 {
        return reps;
    }
    if (q - 1) % d == 0 {
        let step = (q - 1) / d;
        for k in (1..d).filter(|&k| gcd(k, d) == 1) {
            reps.push(Mat2::diag(f.gen_pow(k * step), 1));
        }
    }
    if (q + 1) % d == 0 && d > 2 {
        // roots of order dividing q + 1 have norm 1, so det = 1
        let zeta = f.neg(1);
        for xi in 0..f.q() {
            let m = Mat2::companion(zeta, xi);
            if is_irreducible(&m.char_poly(f), f) && mat_order(f, &m) == d {
                reps.push(m);
            }
        }
    }
    reps
}

/// A conjugacy class of PGL(2,q) with the order of its centralizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProjectiveClass {
    pub rep: Mat2,
    pub tag: ClassTag,
    pub centralizer: u64,
}

/// All conjugacy classes of PGL(2,q) whose elements have order `D`.
pub fn projective_class_reps(f: &BaseField, d: u64) -> Vec<ProjectiveClass> {
    let q = f.q() as u64;
    let p = f.p() as u64;
    let mut out = Vec::new();
    if d == 1 {
        out.push(ProjectiveClass {
            rep: Mat2::IDENTITY,
            tag: ClassTag::Identity,
            centralizer: q * q * q - q,
        });
        return out;
    }
    if d == p {
        out.push(ProjectiveClass {
            rep: Mat2::new(1, 1, 0, 1),
            tag: ClassTag::Unipotent,
            centralizer: q,
        });
        return out;
    }
    if gcd(d, p) != 1 {
        return out;
    }
    let involution = if d == 2 { 2 } else { 1 };
    if (q - 1) % d == 0 {
        let step = (q - 1) / d;
        // diag(ζ,1) and diag(ζ^{-1},1) are conjugate
        for k in (1..=d / 2).filter(|&k| gcd(k, d) == 1) {
            out.push(ProjectiveClass {
                rep: Mat2::diag(f.gen_pow(k * step), 1),
                tag: ClassTag::SplitDiagonalizable,
                centralizer: involution * (q - 1),
            });
        }
    }
    if (q + 1) % d == 0 {
        let mut dets = vec![1u32];
        if p != 2 {
            let nonsquare = f.generator();
            dets.push(nonsquare);
        }
        let mut seen = Vec::new();
        for &det in &dets {
            for xi in 0..f.q() {
                let m = Mat2::companion(f.neg(det), xi);
                if !is_irreducible(&m.char_poly(f), f) || projective_order(f, &m) != d {
                    continue;
                }
                let invariant = f.div(f.mul(xi, xi), det).expect("det is nonzero");
                if !seen.contains(&invariant) {
                    seen.push(invariant);
                    out.push(ProjectiveClass {
                        rep: m,
                        tag: ClassTag::IrreducibleQuadratic,
                        centralizer: involution * (q + 1),
                    });
                }
            }
        }
    }
    out
}

/// Number of PGL(2,q) classes of order `D`, by the order structure alone.
pub fn projective_class_count(q: u64, p: u64, d: u64) -> u64 {
    if d == 1 || d == p {
        return 1;
    }
    if gcd(d, p) != 1 {
        return 0;
    }
    let per_torus = |n: u64| if n % d == 0 { euler_phi(d).div_ceil(2) } else { 0 };
    per_torus(q - 1) + per_torus(q + 1)
}

/// `aα + b` for `A = [[a, b], [0, d]]`, normalized by `d`.
pub fn apply_affine(ctx: &FieldCtx, m: &Mat2, alpha: &Element) -> Element {
    assert_eq!(m.c, 0, "affine maps have c = 0");
    let f = ctx.base();
    let di = f.inv(m.d).expect("d is nonzero");
    let a = f.mul(m.a, di);
    assert_ne!(a, 0, "affine maps have a != 0");
    ctx.add_scalar(&ctx.scale(a, alpha), f.mul(m.b, di))
}

/// `(aα + b) / (cα + d)`. Panics if `cα + d = 0`, which cannot happen when
/// α has degree at least 2 over F_q.
pub fn apply_projective(ctx: &FieldCtx, m: &Mat2, alpha: &Element) -> Element {
    let num = ctx.add_scalar(&ctx.scale(m.a, alpha), m.b);
    let den = ctx.add_scalar(&ctx.scale(m.c, alpha), m.d);
    ctx.div(&num, &den).expect("cα + d is nonzero off F_q")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Affine,
    Projective,
}

/// Canonical name of an orbit: its least member in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitKey {
    pub kind: OrbitKind,
    pub repr: Element,
}

/// Least member of `{aα + b}` by index. Coefficient 0 can be cleared with `b`
/// and the leading coefficient above it scaled to 1 with `a`.
pub(crate) fn affine_min_coeffs(f: &BaseField, alpha: &[u32], out: &mut [u32]) {
    let j = (1..alpha.len())
        .rev()
        .find(|&j| alpha[j] != 0)
        .expect("element outside F_q");
    let a = f.inv(alpha[j]).expect("nonzero");
    out[0] = 0;
    for k in 1..alpha.len() {
        out[k] = f.mul(a, alpha[k]);
    }
}

pub fn affine_key(ctx: &FieldCtx, alpha: &Element) -> OrbitKey {
    let mut out = vec![0; ctx.r() as usize];
    affine_min_coeffs(ctx.base(), alpha.coeffs(), &mut out);
    OrbitKey {
        kind: OrbitKind::Affine,
        repr: ctx.from_coeffs(out).expect("valid coefficients"),
    }
}

/// The projective orbit is the union of the affine orbits of α and of
/// `1/(α + d)` for every `d` in F_q, so its least member is the least of
/// their affine keys.
pub fn projective_key(ctx: &FieldCtx, alpha: &Element) -> OrbitKey {
    let f = ctx.base();
    let mut best = affine_key(ctx, alpha).repr;
    let mut best_idx = ctx.index(&best);
    for d in 0..f.q() {
        let inv = ctx.inv(&ctx.add_scalar(alpha, d)).expect("α + d is nonzero");
        let k = affine_key(ctx, &inv).repr;
        let idx = ctx.index(&k);
        if idx < best_idx {
            best = k;
            best_idx = idx;
        }
    }
    OrbitKey {
        kind: OrbitKind::Projective,
        repr: best,
    }
}

/// Every normalized element of PGL(2,q): `[[a,b],[0,1]]` with `a != 0` and
/// `[[a,b],[1,d]]` with `ad != b`. There are `q^3 - q` of them.
pub fn pgl_elements(f: &BaseField) -> Vec<Mat2> {
    let q = f.q();
    let mut out = Vec::with_capacity((q as usize).pow(3) - q as usize);
    for a in 1..q {
        for b in 0..q {
            out.push(Mat2::new(a, b, 0, 1));
        }
    }
    for a in 0..q {
        for b in 0..q {
            for d in 0..q {
                if f.mul(a, d) != b {
                    out.push(Mat2::new(a, b, 1, d));
                }
            }
        }
    }
    out
}

/// The orbit of α under the affine group, by direct application.
pub fn affine_orbit(ctx: &FieldCtx, alpha: &Element) -> Vec<Element> {
    let q = ctx.q();
    let mut out = Vec::with_capacity((q * (q - 1)) as usize);
    for a in 1..q {
        for b in 0..q {
            out.push(apply_affine(ctx, &Mat2::new(a, b, 0, 1), alpha));
        }
    }
    out
}

/// The orbit of α under PGL(2,q), by direct application of every element.
pub fn projective_orbit(ctx: &FieldCtx, alpha: &Element) -> Vec<Element> {
    pgl_elements(ctx.base())
        .iter()
        .map(|m| apply_projective(ctx, m, alpha))
        .collect()
}

/// Divisors `D` of `p(q^2 - 1)`: every possible element order in GL(2,q).
pub fn possible_orders(f: &BaseField) -> Vec<u64> {
    divisors(group_exponent(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_ctx;
    use std::collections::HashSet;

    fn base(p: u32, t: u32) -> BaseField {
        BaseField::new(p, t).unwrap()
    }

    #[test]
    fn orders() {
        let f = base(2, 6);
        assert_eq!(mat_order(&f, &Mat2::IDENTITY), 1);
        assert_eq!(mat_order(&f, &Mat2::new(1, 1, 0, 1)), 2);
        assert_eq!(mat_order(&f, &Mat2::diag(f.gen_pow(42), 1)), 3);
        let f = base(3, 2);
        assert_eq!(mat_order(&f, &Mat2::new(1, 1, 0, 1)), 3);
    }

    #[test]
    fn classification() {
        let f = base(3, 3);
        let c = classify(&f, &Mat2::IDENTITY);
        assert_eq!((c.tag, c.order), (ClassTag::Identity, 1));
        let c = classify(&f, &Mat2::new(1, 2, 0, 1));
        assert_eq!((c.tag, c.order), (ClassTag::Unipotent, 3));
        let c = classify(&f, &Mat2::new(0, 1, 2, 0));
        assert_eq!((c.tag, c.order), (ClassTag::IrreducibleQuadratic, 4));
        // its square is 2I, so it acts as an involution
        assert_eq!(c.projective_order, 2);
        let c = classify(&f, &Mat2::diag(2, 2));
        assert_eq!((c.tag, c.order, c.scalar), (ClassTag::Identity, 2, true));
        let c = classify(&f, &Mat2::diag(2, 1));
        assert_eq!((c.tag, c.order), (ClassTag::SplitDiagonalizable, 2));
    }

    #[test]
    fn gl_representatives() {
        assert_eq!(conjugacy_reps(&base(2, 2), 3).len(), 2);
        let f = base(2, 6);
        assert!(conjugacy_reps(&f, 3).contains(&Mat2::diag(f.gen_pow(42), 1)));
        let f = base(3, 3);
        let reps = conjugacy_reps(&f, 4);
        assert_eq!(reps.len(), 1);
        assert_eq!(mat_order(&f, &reps[0]), 4);
        for (p, t) in [(2u32, 3u32), (3, 2), (5, 2), (7, 1), (2, 4)] {
            let f = base(p, t);
            for d in possible_orders(&f).into_iter().filter(|&d| d >= 2) {
                for m in conjugacy_reps(&f, d) {
                    assert_eq!(mat_order(&f, &m), d, "q={} D={d}", f.q());
                }
            }
        }
    }

    #[test]
    fn projective_class_equation() {
        for (p, t) in [(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)] {
            let f = base(p, t);
            let q = f.q() as u64;
            let order = q * q * q - q;
            let mut total = 0;
            for d in possible_orders(&f) {
                let classes = projective_class_reps(&f, d);
                assert_eq!(classes.len() as u64, projective_class_count(q, p as u64, d), "q={q} D={d}");
                for c in classes {
                    assert_eq!(projective_order(&f, &c.rep), d);
                    assert_eq!(order % c.centralizer, 0);
                    total += order / c.centralizer;
                }
            }
            assert_eq!(total, order, "q={q}");
        }
    }

    #[test]
    fn projective_action_is_a_homomorphism() {
        let ctx = build_ctx(3, 1, 4).unwrap();
        let f = ctx.base();
        let all = pgl_elements(f);
        let s: Vec<_> = ctx.enumerate_s(1 << 10).unwrap().take(12).collect();
        for (i, alpha) in s.iter().enumerate() {
            let a = all[(i * 7) % all.len()];
            let b = all[(i * 13 + 5) % all.len()];
            let lhs = apply_projective(&ctx, &a.mul(&b, f), alpha);
            let rhs = apply_projective(&ctx, &a, &apply_projective(&ctx, &b, alpha));
            assert_eq!(lhs, rhs);
            let ainv = a.inverse(f).unwrap();
            assert_eq!(apply_projective(&ctx, &ainv, &apply_projective(&ctx, &a, alpha)), *alpha);
            assert_eq!(apply_projective(&ctx, &Mat2::diag(2, 2), alpha), *alpha);
        }
    }

    #[test]
    fn keys_are_orbit_minima() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        let mut affine = HashSet::new();
        let mut projective = HashSet::new();
        for alpha in ctx.enumerate_s(1 << 10).unwrap() {
            let orb = affine_orbit(&ctx, &alpha);
            assert_eq!(orb.iter().collect::<HashSet<_>>().len(), 12);
            let min = orb.iter().min_by_key(|e| ctx.index(e)).unwrap();
            assert_eq!(affine_key(&ctx, &alpha).repr, *min);
            let porb = projective_orbit(&ctx, &alpha);
            assert_eq!(porb.iter().collect::<HashSet<_>>().len(), 60);
            let pmin = porb.iter().min_by_key(|e| ctx.index(e)).unwrap();
            assert_eq!(projective_key(&ctx, &alpha).repr, *pmin);
            affine.insert(affine_key(&ctx, &alpha));
            projective.insert(projective_key(&ctx, &alpha));
        }
        assert_eq!(affine.len(), 5);
        assert_eq!(projective.len(), 1);
    }

    #[test]
    fn affine_examples() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        let alpha = ctx.generator();
        assert_eq!(apply_affine(&ctx, &Mat2::IDENTITY, &alpha), alpha);
        assert_eq!(
            apply_affine(&ctx, &Mat2::new(1, 1, 0, 1), &alpha),
            ctx.add_scalar(&alpha, 1)
        );
    }
}

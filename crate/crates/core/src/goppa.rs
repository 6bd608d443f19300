//! Irreducible Goppa codes of length q from a root α of the Goppa
//! polynomial, and the coordinate permutations that Frobenius and affine
//! maps of α induce.

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ff::{BaseField, Element, FieldCtx, PrimeField, ResidueVector, ScalarField};
use crate::linalg::Matrix;

/// Largest parity-check matrix (rows × columns) built densely.
pub const DESK_CAP: u64 = 1 << 20;
/// Largest number of codewords enumerated by [`min_distance`].
pub const WORD_CAP: u64 = 1 << 20;

/// Alphabet of the codewords.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subfield {
    /// Codes over F_p.
    #[default]
    Prime,
    /// Codes over F_q.
    Base,
}

/// Coordinate field of a code, borrowed from the context.
#[derive(Debug, Clone, Copy)]
pub enum CodeField<'a> {
    Prime(PrimeField),
    Base(&'a BaseField),
}

impl ScalarField for CodeField<'_> {
    fn size(&self) -> u32 {
        match self {
            CodeField::Prime(f) => f.size(),
            CodeField::Base(f) => f.size(),
        }
    }

    fn characteristic(&self) -> u32 {
        match self {
            CodeField::Prime(f) => f.characteristic(),
            CodeField::Base(f) => f.characteristic(),
        }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            CodeField::Prime(f) => f.add(a, b),
            CodeField::Base(f) => f.add(a, b),
        }
    }

    fn neg(&self, a: u32) -> u32 {
        match self {
            CodeField::Prime(f) => f.neg(a),
            CodeField::Base(f) => f.neg(a),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            CodeField::Prime(f) => f.mul(a, b),
            CodeField::Base(f) => f.mul(a, b),
        }
    }

    fn inv(&self, a: u32) -> Option<u32> {
        match self {
            CodeField::Prime(f) => f.inv(a),
            CodeField::Base(f) => f.inv(a),
        }
    }
}

/// A Goppa code with locators `L = F_q` in code order and Goppa polynomial
/// the minimal polynomial of `alpha`.
#[derive(Debug, Clone)]
pub struct GoppaInstance<'a> {
    pub ctx: &'a FieldCtx,
    pub alpha: Element,
    pub subfield: Subfield,
}

impl<'a> GoppaInstance<'a> {
    pub fn new(ctx: &'a FieldCtx, alpha: Element, subfield: Subfield) -> Result<Self> {
        if !ctx.is_full_degree(&alpha) {
            return Err(Error::InvalidElement(format!(
                "α has degree {} over F_q, expected {}",
                ctx.degree_over_fq(&alpha),
                ctx.r()
            )));
        }
        Ok(Self {
            ctx,
            alpha,
            subfield,
        })
    }

    pub fn length(&self, extended: bool) -> usize {
        self.ctx.q() as usize + usize::from(extended)
    }

    pub fn field(&self) -> CodeField<'a> {
        match self.subfield {
            Subfield::Prime => CodeField::Prime(*self.ctx.base().prime_field()),
            Subfield::Base => CodeField::Base(self.ctx.base()),
        }
    }

    pub fn with_alpha(&self, alpha: Element) -> Result<Self> {
        Self::new(self.ctx, alpha, self.subfield)
    }
}

/// `H(α)_i = 1 / (α - ζ_i)` over F_{q^r}.
pub fn parity_check(inst: &GoppaInstance) -> Vec<Element> {
    let ctx = inst.ctx;
    (0..ctx.q())
        .map(|z| {
            let diff = ctx.add_scalar(&inst.alpha, ctx.base().neg(z));
            ctx.inv(&diff).expect("α is outside F_q")
        })
        .collect()
}

/// `H(α)` written over the code alphabet: `t r` rows over F_p, or `r` rows
/// over F_q. The extended form appends the all-ones row and a column that is
/// zero except in that row.
pub fn expanded_parity_check(inst: &GoppaInstance, extended: bool) -> Result<Matrix> {
    let ctx = inst.ctx;
    let r = ctx.r() as usize;
    let t = ctx.t() as usize;
    let rows = match inst.subfield {
        Subfield::Prime => t * r,
        Subfield::Base => r,
    };
    let n = inst.length(extended);
    let entries = (rows as u64 + 1) * n as u64;
    if entries > DESK_CAP {
        return Err(Error::CapExceeded {
            what: "parity-check size",
            needed: entries.to_string(),
            cap: DESK_CAP,
        });
    }
    let mut m = Matrix::zeros(rows, n);
    for (col, h) in parity_check(inst).iter().enumerate() {
        for (i, &c) in h.coeffs().iter().enumerate() {
            match inst.subfield {
                Subfield::Prime => {
                    for (j, res) in ctx.base().decode(c).into_iter().enumerate() {
                        m.set(i * t + j, col, res);
                    }
                }
                Subfield::Base => m.set(i, col, c),
            }
        }
    }
    if extended {
        m.push_row(&vec![1; n]);
    }
    Ok(m)
}

/// Basis of the code in reduced row-echelon form.
pub fn kernel_basis(inst: &GoppaInstance, extended: bool) -> Result<Matrix> {
    Ok(expanded_parity_check(inst, extended)?.nullspace(&inst.field()))
}

pub fn code_dimension(inst: &GoppaInstance, extended: bool) -> Result<usize> {
    Ok(kernel_basis(inst, extended)?.rows())
}

/// Least weight of a nonzero codeword, by enumerating every codeword.
/// `None` for the zero code.
pub fn min_distance(inst: &GoppaInstance, extended: bool) -> Result<Option<usize>> {
    let basis = kernel_basis(inst, extended)?;
    min_distance_of(&basis, &inst.field())
}

pub fn min_distance_of<F: ScalarField>(basis: &Matrix, f: &F) -> Result<Option<usize>> {
    let k = basis.rows();
    if k == 0 {
        return Ok(None);
    }
    let size = f.size() as u64;
    let words = size
        .checked_pow(k as u32)
        .filter(|&w| w <= WORD_CAP)
        .ok_or_else(|| Error::CapExceeded {
            what: "codeword sweep",
            needed: BigUint::from(size).pow(k as u32).to_string(),
            cap: WORD_CAP,
        })?;
    let n = basis.cols();
    let mut best = n;
    let mut word = vec![0u32; n];
    let mut coeffs = vec![0u32; k];
    for _ in 1..words {
        // odometer step: bump the first coefficient that does not wrap
        let mut i = 0;
        loop {
            let old = coeffs[i];
            let wrapped = old + 1 == size as u32;
            coeffs[i] = if wrapped { 0 } else { old + 1 };
            // keep word = Σ coeffs_i row_i
            let delta = f.sub(coeffs[i], old);
            for (w, &b) in word.iter_mut().zip(basis.row(i)) {
                *w = f.add(*w, f.mul(delta, b));
            }
            if !wrapped {
                break;
            }
            i += 1;
        }
        let weight = word.iter().filter(|&&x| x != 0).count();
        best = best.min(weight);
    }
    Ok(Some(best))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// `α ↦ α^{p^i}`, inducing `ζ ↦ ζ^{p^i}` on the locators.
    Type1(u32),
    /// `α ↦ aα + b`, inducing `ζ ↦ aζ + b`.
    Type2 { a: u32, b: u32 },
}

fn p_power(f: &BaseField, z: u32, i: u32) -> u32 {
    (0..i % f.t()).fold(z, |acc, _| f.frobenius_p(acc))
}

/// `perm[i]` is the locator index of the image of `ζ_i`.
pub fn induced_permutation(ctx: &FieldCtx, map: MapKind) -> Result<Vec<usize>> {
    let f = ctx.base();
    match map {
        MapKind::Type1(i) => Ok((0..f.q()).map(|z| p_power(f, z, i) as usize).collect()),
        MapKind::Type2 { a, b } => {
            if a == 0 || a >= f.q() || b >= f.q() {
                return Err(Error::InvalidElement(format!("Type2({a}, {b}) is not an affine map of F_q")));
            }
            Ok((0..f.q()).map(|z| f.add(f.mul(a, z), b) as usize).collect())
        }
    }
}

/// The image of α under a map.
pub fn map_alpha(ctx: &FieldCtx, alpha: &Element, map: MapKind) -> Element {
    match map {
        MapKind::Type1(i) => ctx.pow(alpha, &BigUint::from(ctx.p()).pow(i)),
        MapKind::Type2 { a, b } => ctx.add_scalar(&ctx.scale(a, alpha), b),
    }
}

/// Applies the coordinate permutation of `map` (and, over F_q, the matching
/// power of Frobenius on the symbols) to a code basis.
pub fn transform_code(inst: &GoppaInstance, basis: &Matrix, map: MapKind, extended: bool) -> Result<Matrix> {
    let perm = induced_permutation(inst.ctx, map)?;
    let n = inst.length(extended);
    let mut source = vec![0usize; n];
    for (i, &j) in perm.iter().enumerate() {
        source[j] = i;
    }
    if extended {
        source[n - 1] = n - 1;
    }
    let mut out = basis.select_columns(&source);
    if let (Subfield::Base, MapKind::Type1(i)) = (inst.subfield, map) {
        let f = inst.ctx.base();
        out = out.map_entries(|x| p_power(f, x, i));
    }
    out.rref(&inst.field());
    Ok(out)
}

/// Whether permuting the code of α by the induced permutation gives the code
/// of the mapped α.
pub fn codes_equal_under_map(inst: &GoppaInstance, map: MapKind) -> Result<bool> {
    codes_equal_under_map_ext(inst, map, false)
}

pub fn codes_equal_under_map_ext(inst: &GoppaInstance, map: MapKind, extended: bool) -> Result<bool> {
    let moved = transform_code(inst, &kernel_basis(inst, extended)?, map, extended)?;
    let image = inst.with_alpha(map_alpha(inst.ctx, &inst.alpha, map))?;
    Ok(moved == kernel_basis(&image, extended)?)
}

/// Hex SHA-256 of a canonical basis.
pub fn fingerprint(basis: &Matrix, field_size: u32) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}:{}x{}:", field_size, basis.rows(), basis.cols()).as_bytes());
    for i in 0..basis.rows() {
        for &x in basis.row(i) {
            h.update(x.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Every map of AΓL(1,q): `ζ ↦ a ζ^{p^i} + b`, as (Frobenius, affine) pairs.
pub fn semilinear_maps(ctx: &FieldCtx) -> Vec<(MapKind, MapKind)> {
    let q = ctx.q();
    let mut out = Vec::new();
    for i in 0..ctx.t() {
        for a in 1..q {
            for b in 0..q {
                out.push((MapKind::Type1(i), MapKind::Type2 { a, b }));
            }
        }
    }
    out
}

/// Least fingerprint of the code over all AΓL(1,q) images.
pub fn canonical_fingerprint(inst: &GoppaInstance, extended: bool) -> Result<String> {
    let basis = kernel_basis(inst, extended)?;
    let size = inst.field().size();
    let mut best: Option<String> = None;
    for (frob, aff) in semilinear_maps(inst.ctx) {
        let moved = transform_code(inst, &basis, frob, extended)?;
        let moved = transform_code(inst, &moved, aff, extended)?;
        let fp = fingerprint(&moved, size);
        if best.as_ref().is_none_or(|b| fp < *b) {
            best = Some(fp);
        }
    }
    Ok(best.expect("AΓL(1,q) is nonempty"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BucketReport {
    pub codes: u64,
    pub buckets: u64,
    pub raw_fingerprints: u64,
}

/// Builds the code of every α in S and buckets them by canonical
/// fingerprint.
pub fn bucket_codes(ctx: &FieldCtx, subfield: Subfield, cap: u64) -> Result<BucketReport> {
    let mut canonical = std::collections::BTreeSet::new();
    let mut raw = std::collections::BTreeSet::new();
    let mut codes = 0;
    for alpha in ctx.enumerate_s(cap)? {
        let inst = GoppaInstance::new(ctx, alpha, subfield)?;
        raw.insert(fingerprint(&kernel_basis(&inst, false)?, inst.field().size()));
        canonical.insert(canonical_fingerprint(&inst, false)?);
        codes += 1;
    }
    Ok(BucketReport {
        codes,
        buckets: canonical.len() as u64,
        raw_fingerprints: raw.len() as u64,
    })
}

/// Random Type-1 and Type-2 maps, alternating.
pub fn sample_maps<R: Rng>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Vec<MapKind> {
    let q = ctx.q();
    (0..n)
        .map(|k| {
            if k % 2 == 0 {
                MapKind::Type1(rng.gen_range(0..ctx.t() * ctx.r()))
            } else {
                MapKind::Type2 {
                    a: rng.gen_range(1..q),
                    b: rng.gen_range(0..q),
                }
            }
        })
        .collect()
}

/// JSON form of a code: parity check, kernel basis and fingerprint.
#[derive(Debug, Clone, Serialize)]
pub struct CodeDump {
    pub p: u32,
    pub t: u32,
    pub r: u32,
    pub subfield: Subfield,
    pub alpha: ResidueVector,
    pub length: usize,
    pub dimension: usize,
    pub extended_dimension: usize,
    pub min_distance: Option<usize>,
    pub parity_check: Vec<ResidueVector>,
    pub kernel_basis: Vec<Vec<u32>>,
    pub fingerprint: String,
}

pub fn dump_code(inst: &GoppaInstance) -> Result<CodeDump> {
    let ctx = inst.ctx;
    let basis = kernel_basis(inst, false)?;
    let min_distance = match min_distance_of(&basis, &inst.field()) {
        Ok(d) => d,
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CodeDump {
        p: ctx.p(),
        t: ctx.t(),
        r: ctx.r(),
        subfield: inst.subfield,
        alpha: ctx.element_to_json(&inst.alpha),
        length: inst.length(false),
        dimension: basis.rows(),
        extended_dimension: code_dimension(inst, true)?,
        min_distance,
        parity_check: parity_check(inst).iter().map(|e| ctx.element_to_json(e)).collect(),
        kernel_basis: basis.to_rows(),
        fingerprint: fingerprint(&basis, inst.field().size()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_ctx;
    use rand::SeedableRng;

    fn first_alpha(ctx: &FieldCtx) -> Element {
        ctx.enumerate_s(1 << 24).unwrap().next().unwrap()
    }

    #[test]
    fn parity_entries_are_distinct_and_nonzero() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        let inst = GoppaInstance::new(&ctx, first_alpha(&ctx), Subfield::Prime).unwrap();
        let h = parity_check(&inst);
        assert_eq!(h.len(), 4);
        for (i, x) in h.iter().enumerate() {
            assert!(!x.is_zero());
            assert!(h[i + 1..].iter().all(|y| y != x));
        }
    }

    #[test]
    fn frobenius_of_alpha_permutes_the_parity_check() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        let alpha = first_alpha(&ctx);
        let inst = GoppaInstance::new(&ctx, alpha.clone(), Subfield::Prime).unwrap();
        let image = inst.with_alpha(ctx.frobenius(&alpha, 1)).unwrap();
        // ζ^q = ζ on F_q, so the rows line up entrywise
        for (x, y) in parity_check(&inst).iter().zip(parity_check(&image)) {
            assert_eq!(ctx.frobenius(x, 1), y);
        }
    }

    #[test]
    fn dimension_and_distance_bounds() {
        let ctx = build_ctx(2, 4, 3).unwrap();
        let inst = GoppaInstance::new(&ctx, first_alpha(&ctx), Subfield::Prime).unwrap();
        let k = code_dimension(&inst, false).unwrap();
        assert!(k >= 4);
        assert!(code_dimension(&inst, true).unwrap() + 1 >= k);
        assert!(min_distance(&inst, false).unwrap().unwrap() >= 4);
    }

    #[test]
    fn permutations() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        let id = induced_permutation(&ctx, MapKind::Type2 { a: 1, b: 0 }).unwrap();
        assert_eq!(id, vec![0, 1, 2, 3]);
        let shift = induced_permutation(&ctx, MapKind::Type2 { a: 1, b: 3 }).unwrap();
        assert!((0..4).all(|i| shift[shift[i]] == i));
        assert_eq!(induced_permutation(&ctx, MapKind::Type1(1)).unwrap(), vec![0, 1, 3, 2]);
        assert!(induced_permutation(&ctx, MapKind::Type2 { a: 0, b: 1 }).is_err());
    }

    #[test]
    fn maps_preserve_codes_over_both_alphabets() {
        let ctx = build_ctx(3, 2, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for subfield in [Subfield::Prime, Subfield::Base] {
            let alphas: Vec<_> = ctx.enumerate_s(1 << 20).unwrap().step_by(37).take(4).collect();
            for alpha in alphas {
                let inst = GoppaInstance::new(&ctx, alpha, subfield).unwrap();
                for map in sample_maps(&ctx, 6, &mut rng) {
                    assert!(codes_equal_under_map(&inst, map).unwrap(), "{map:?} {subfield:?}");
                    assert!(codes_equal_under_map_ext(&inst, map, true).unwrap());
                }
            }
        }
    }

    #[test]
    fn rejects_low_degree_alpha() {
        let ctx = build_ctx(2, 2, 3).unwrap();
        assert!(GoppaInstance::new(&ctx, ctx.scalar(1), Subfield::Prime).is_err());
    }
}

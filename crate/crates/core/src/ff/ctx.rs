use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::base::BaseField;
use super::poly::{smallest_irreducible, x_pow_size_pow, Poly};
use super::scalar::ScalarField;
use crate::error::{Error, Result};
use crate::ntheory::{divisors, is_prime, prime_divisors};

/// A member of F_{q^r}: `r` coefficients over F_q (as base-field codes) of
/// the powers `1, x, ..., x^{r-1}` of the top-level generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    coeffs: Vec<u32>,
}

impl Element {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub(crate) fn from_raw(coeffs: Vec<u32>) -> Self {
        Self { coeffs }
    }
}

/// JSON form shared by elements and polynomials over F_q: one inner array of
/// `t` residues per coefficient, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueVector {
    pub coeffs: Vec<Vec<u32>>,
}

/// The tower F_p ⊂ F_q ⊂ F_{q^r} with deterministic moduli.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    base: BaseField,
    r: u32,
    top_modulus: Poly,
    // frob[k][i * r + j] = coefficient of x^i in σ^k(x^j)
    frob: Vec<Vec<u32>>,
    q: BigUint,
}

/// Builds the tower for `(p, t, r)`.
pub fn build_ctx(p: u64, t: u32, r: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, t, r)
}

impl FieldCtx {
    pub fn new(p: u64, t: u32, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if t == 0 {
            return Err(Error::ZeroDegree);
        }
        if r < 3 {
            return Err(Error::DegenerateDegree(r));
        }
        if p > u32::MAX as u64 {
            return Err(Error::FieldTooLarge { p, t });
        }
        let base = BaseField::new(p as u32, t)?;
        let top_modulus = smallest_irreducible(r as usize, &base);
        let q = BigUint::from(base.q());
        let mut ctx = Self {
            base,
            r,
            top_modulus,
            frob: Vec::new(),
            q,
        };
        ctx.build_frobenius_tables();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn t(&self) -> u32 {
        self.base.t()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// q as a machine integer; construction guarantees it fits.
    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn q_big(&self) -> &BigUint {
        &self.q
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_modulus(&self) -> &Poly {
        self.base.modulus()
    }

    pub fn top_modulus(&self) -> &Poly {
        &self.top_modulus
    }

    /// |F_{q^r}| = p^(t r).
    pub fn element_count(&self) -> BigUint {
        self.q.pow(self.r)
    }

    pub fn element_count_u64(&self) -> Option<u64> {
        (self.q() as u64).checked_pow(self.r)
    }

    pub fn zero(&self) -> Element {
        Element::from_raw(vec![0; self.r as usize])
    }

    pub fn one(&self) -> Element {
        self.scalar(1)
    }

    /// Embedding of an F_q code.
    pub fn scalar(&self, c: u32) -> Element {
        let mut v = vec![0; self.r as usize];
        v[0] = c;
        Element::from_raw(v)
    }

    /// The class of `x`, a root of the top modulus.
    pub fn generator(&self) -> Element {
        let mut v = vec![0; self.r as usize];
        v[1] = 1;
        Element::from_raw(v)
    }

    pub fn from_coeffs(&self, coeffs: Vec<u32>) -> Result<Element> {
        if coeffs.len() != self.r as usize {
            return Err(Error::InvalidElement(format!(
                "expected {} coefficients, got {}",
                self.r,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.q()) {
            return Err(Error::InvalidElement(format!(
                "coefficient code {c} out of range for q = {}",
                self.q()
            )));
        }
        Ok(Element::from_raw(coeffs))
    }

    /// Element at position `index` of the enumeration order: odometer over
    /// coefficient tuples, coefficient of `x^0` least significant.
    pub fn from_index(&self, mut index: u64) -> Element {
        let q = self.q() as u64;
        let coeffs = (0..self.r)
            .map(|_| {
                let c = (index % q) as u32;
                index /= q;
                c
            })
            .collect();
        Element::from_raw(coeffs)
    }

    pub fn index(&self, a: &Element) -> u64 {
        self.index_of(&a.coeffs)
    }

    #[inline]
    pub(crate) fn index_of(&self, coeffs: &[u32]) -> u64 {
        let q = self.q() as u64;
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let f = &self.base;
        Element::from_raw(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f.add(x, y))
                .collect(),
        )
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        let f = &self.base;
        Element::from_raw(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f.sub(x, y))
                .collect(),
        )
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element::from_raw(a.coeffs.iter().map(|&x| self.base.neg(x)).collect())
    }

    /// `c * a` for an F_q scalar `c`.
    pub fn scale(&self, c: u32, a: &Element) -> Element {
        Element::from_raw(a.coeffs.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    /// `a + c` for an F_q scalar `c`.
    pub fn add_scalar(&self, a: &Element, c: u32) -> Element {
        let mut v = a.coeffs.clone();
        v[0] = self.base.add(v[0], c);
        Element::from_raw(v)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = vec![0; self.r as usize];
        let mut scratch = Vec::new();
        self.mul_into(&a.coeffs, &b.coeffs, &mut out, &mut scratch);
        Element::from_raw(out)
    }

    /// Product of two coefficient slices, reduced by the top modulus.
    pub(crate) fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32], scratch: &mut Vec<u32>) {
        let f = &self.base;
        let r = self.r as usize;
        scratch.clear();
        scratch.resize(2 * r - 1, 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    scratch[i + j] = f.add(scratch[i + j], f.mul(x, y));
                }
            }
        }
        let m = self.top_modulus.coeffs();
        for k in (r..2 * r - 1).rev() {
            let c = scratch[k];
            if c == 0 {
                continue;
            }
            for (j, &mj) in m[..r].iter().enumerate() {
                if mj != 0 {
                    let idx = k - r + j;
                    scratch[idx] = f.sub(scratch[idx], f.mul(c, mj));
                }
            }
        }
        out.copy_from_slice(&scratch[..r]);
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.base;
        // extended Euclid on (modulus, a): track s with s * a ≡ remainder
        let mut r0 = self.top_modulus.clone();
        let mut r1 = Poly::new(a.coeffs.clone());
        let mut s0 = Poly::zero();
        let mut s1 = Poly::one();
        while r1.degree() != Some(0) {
            let (quot, rem) = r0.divrem(&r1, f);
            let s2 = s0.sub(&quot.mul(&s1, f), f);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        let c = f.inv(r1.lead()).expect("gcd with an irreducible modulus is a unit");
        let s = s1.scale(c, f).rem(&self.top_modulus, f);
        let mut v = s.coeffs().to_vec();
        v.resize(self.r as usize, 0);
        Ok(Element::from_raw(v))
    }

    pub fn div(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Element, e: &BigUint) -> Element {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &Element, e: u64) -> Element {
        self.pow(a, &BigUint::from(e))
    }

    /// `a^(q^k)`.
    pub fn frobenius(&self, a: &Element, k: u32) -> Element {
        let mut out = vec![0; self.r as usize];
        self.frobenius_into(&a.coeffs, k, &mut out);
        Element::from_raw(out)
    }

    #[inline]
    pub(crate) fn frobenius_into(&self, a: &[u32], k: u32, out: &mut [u32]) {
        let r = self.r as usize;
        let m = &self.frob[(k % self.r) as usize];
        let f = &self.base;
        out.iter_mut().for_each(|o| *o = 0);
        for (j, &aj) in a.iter().enumerate() {
            if aj == 0 {
                continue;
            }
            for i in 0..r {
                let mij = m[i * r + j];
                if mij != 0 {
                    out[i] = f.add(out[i], f.mul(mij, aj));
                }
            }
        }
    }

    /// Degree of `a` over F_q: the least `d | r` with `a^(q^d) = a`.
    pub fn degree_over_fq(&self, a: &Element) -> u32 {
        divisors(self.r as u64)
            .into_iter()
            .map(|d| d as u32)
            .find(|&d| self.frobenius(a, d) == *a)
            .unwrap_or(self.r)
    }

    /// Whether `a` has degree exactly `r` over F_q.
    pub fn is_full_degree(&self, a: &Element) -> bool {
        let mut buf = vec![0; self.r as usize];
        self.full_degree_with(&a.coeffs, &mut buf)
    }

    pub(crate) fn full_degree_with(&self, a: &[u32], buf: &mut [u32]) -> bool {
        prime_divisors(self.r as u64).into_iter().all(|l| {
            self.frobenius_into(a, self.r / l as u32, buf);
            buf != a
        })
    }

    /// Iterator over S, the elements of degree exactly `r`, in enumeration
    /// order. Fails when `q^r` exceeds `cap`.
    pub fn enumerate_s(&self, cap: u64) -> Result<FullDegreeIter<'_>> {
        let total = self.element_count_u64().filter(|&n| n <= cap).ok_or_else(|| {
            Error::CapExceeded {
                what: "field size",
                needed: self.element_count().to_string(),
                cap,
            }
        })?;
        Ok(FullDegreeIter {
            ctx: self,
            next: 0,
            end: total,
            buf: vec![0; self.r as usize],
        })
    }

    /// Solves `beta = a * alpha + b` with `a != 0` over F_q.
    pub fn in_affine_span(&self, beta: &Element, alpha: &Element) -> Option<(u32, u32)> {
        self.affine_coords(&beta.coeffs, &alpha.coeffs)
    }

    #[inline]
    pub(crate) fn affine_coords(&self, beta: &[u32], alpha: &[u32]) -> Option<(u32, u32)> {
        let f = &self.base;
        let i = (1..alpha.len()).find(|&i| alpha[i] != 0)?;
        let a = f.div(beta[i], alpha[i])?;
        if a == 0 {
            return None;
        }
        let b = f.sub(beta[0], f.mul(a, alpha[0]));
        for k in 1..alpha.len() {
            if beta[k] != f.mul(a, alpha[k]) {
                return None;
            }
        }
        Some((a, b))
    }

    /// `x^(q^s) mod P` for a monic polynomial `P` over F_q.
    pub fn poly_frobenius_power(&self, p: &Poly, s: u64) -> Poly {
        x_pow_size_pow(p, s, &self.base)
    }

    pub fn element_to_json(&self, a: &Element) -> ResidueVector {
        self.codes_to_json(&a.coeffs)
    }

    pub fn poly_to_json(&self, p: &Poly) -> ResidueVector {
        self.codes_to_json(p.coeffs())
    }

    fn codes_to_json(&self, codes: &[u32]) -> ResidueVector {
        ResidueVector {
            coeffs: codes.iter().map(|&c| self.base.decode(c)).collect(),
        }
    }

    pub fn element_from_json(&self, v: &ResidueVector) -> Result<Element> {
        let mut coeffs = Vec::with_capacity(v.coeffs.len());
        for res in &v.coeffs {
            if res.len() != self.t() as usize || res.iter().any(|&c| c >= self.p()) {
                return Err(Error::InvalidElement(format!(
                    "coefficient {res:?} is not {} residues mod {}",
                    self.t(),
                    self.p()
                )));
            }
            coeffs.push(self.base.encode(res));
        }
        self.from_coeffs(coeffs)
    }

    fn build_frobenius_tables(&mut self) {
        let r = self.r as usize;
        let xq = self.pow_u64(&self.generator(), self.q() as u64);
        // images of the basis under one application of σ
        let mut basis_images = Vec::with_capacity(r);
        let mut acc = self.one();
        for _ in 0..r {
            basis_images.push(acc.clone());
            acc = self.mul(&acc, &xq);
        }
        let mut sigma = vec![0u32; r * r];
        for (j, img) in basis_images.iter().enumerate() {
            for i in 0..r {
                sigma[i * r + j] = img.coeffs[i];
            }
        }
        let mut ident = vec![0u32; r * r];
        for i in 0..r {
            ident[i * r + i] = 1;
        }
        self.frob = vec![ident];
        for k in 1..r {
            let prev = &self.frob[k - 1];
            let mut next = vec![0u32; r * r];
            for i in 0..r {
                for j in 0..r {
                    let mut s = 0;
                    for l in 0..r {
                        s = self.base.add(s, self.base.mul(sigma[i * r + l], prev[l * r + j]));
                    }
                    next[i * r + j] = s;
                }
            }
            self.frob.push(next);
        }
    }
}

/// Streams S in enumeration order.
pub struct FullDegreeIter<'a> {
    ctx: &'a FieldCtx,
    next: u64,
    end: u64,
    buf: Vec<u32>,
}

impl Iterator for FullDegreeIter<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        while self.next < self.end {
            let a = self.ctx.from_index(self.next);
            self.next += 1;
            if self.ctx.full_degree_with(&a.coeffs, &mut self.buf) {
                return Some(a);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;
    use proptest::prelude::*;

    #[test]
    fn moduli_for_small_towers() {
        let c = build_ctx(2, 1, 3).unwrap();
        assert_eq!(c.base_modulus().coeffs(), &[0, 1]);
        assert_eq!(c.top_modulus().coeffs(), &[1, 1, 0, 1]);
        let c = build_ctx(2, 2, 3).unwrap();
        assert_eq!(c.base_modulus().coeffs(), &[1, 1, 1]);
        let c = build_ctx(3, 1, 4).unwrap();
        assert_eq!(c.top_modulus().degree(), Some(4));
        assert!(super::super::poly::is_irreducible_by_trial(c.top_modulus(), c.base()));
    }

    #[test]
    fn smallest_quartic_over_f3_by_exhaustive_search() {
        let c = build_ctx(3, 1, 4).unwrap();
        let expected = (0..81u64)
            .map(|i| Poly::monic_from_index(i, 4, 3))
            .find(|f| super::super::poly::is_irreducible_by_trial(f, c.base()))
            .unwrap();
        assert_eq!(c.top_modulus(), &expected);
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(build_ctx(4, 1, 3).unwrap_err(), Error::NotPrime(4));
        assert_eq!(build_ctx(2, 1, 2).unwrap_err(), Error::DegenerateDegree(2));
        assert_eq!(build_ctx(2, 0, 3).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn inverse_and_lagrange() {
        let c = build_ctx(3, 2, 3).unwrap();
        assert_eq!(c.inv(&c.one()).unwrap(), c.one());
        assert_eq!(c.inv(&c.zero()), Err(Error::DivisionByZero));
        let order_minus_one = c.element_count() - 1u32;
        for idx in [1u64, 5, 77, 300, 728] {
            let a = c.from_index(idx);
            assert_eq!(c.mul(&a, &c.inv(&a).unwrap()), c.one());
            assert_eq!(c.pow(&a, &order_minus_one), c.one());
        }
    }

    #[test]
    fn frobenius_examples() {
        let c = build_ctx(2, 2, 3).unwrap();
        let alpha = c.generator();
        assert_eq!(c.frobenius(&alpha, 1), c.pow_u64(&alpha, 4));
        for s in 0..4 {
            assert_eq!(c.frobenius(&c.scalar(s), 1), c.scalar(s));
        }
        for idx in 0..64 {
            let a = c.from_index(idx);
            assert_eq!(c.frobenius(&a, 3), a);
        }
    }

    #[test]
    fn degree_examples() {
        let c = build_ctx(2, 2, 3).unwrap();
        assert_eq!(c.degree_over_fq(&c.zero()), 1);
        assert_eq!(c.degree_over_fq(&c.scalar(c.base().generator())), 1);
        assert_eq!(c.degree_over_fq(&c.generator()), 3);
    }

    #[test]
    fn s_sizes() {
        for ((p, t, r), n) in [((2, 1, 3), 6usize), ((2, 2, 3), 60), ((2, 1, 4), 12)] {
            let c = build_ctx(p, t, r).unwrap();
            assert_eq!(c.enumerate_s(1 << 16).unwrap().count(), n);
        }
        let c = build_ctx(2, 1, 4).unwrap();
        assert!(matches!(c.enumerate_s(8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn degree_distribution_sums_to_field_size() {
        for (p, t, r) in [(2, 1, 6), (2, 2, 4), (3, 1, 6), (2, 4, 3), (5, 1, 4), (3, 2, 4), (2, 1, 12)] {
            let c = build_ctx(p, t, r).unwrap();
            let n = c.element_count_u64().unwrap();
            let mut by_degree = std::collections::BTreeMap::new();
            for idx in 0..n {
                *by_degree.entry(c.degree_over_fq(&c.from_index(idx))).or_insert(0u64) += 1;
            }
            assert_eq!(by_degree.values().sum::<u64>(), n);
            let q = BigUint::from(c.q());
            assert_eq!(BigUint::from(by_degree[&r]), census::count_s(&q, r));
        }
    }

    #[test]
    fn affine_span_examples() {
        let c = build_ctx(3, 1, 4).unwrap();
        let alpha = c.generator();
        assert_eq!(c.in_affine_span(&alpha, &alpha), Some((1, 0)));
        assert_eq!(c.in_affine_span(&c.scalar(2), &alpha), None);
        let beta = c.add_scalar(&c.scale(2, &alpha), 1);
        assert_eq!(c.in_affine_span(&beta, &alpha), Some((2, 1)));
    }

    #[test]
    fn affine_span_round_trip_exhaustive() {
        let c = build_ctx(5, 1, 3).unwrap();
        let s: Vec<_> = c.enumerate_s(1 << 16).unwrap().step_by(7).collect();
        for alpha in &s {
            for a in 1..5 {
                for b in 0..5 {
                    let beta = c.add_scalar(&c.scale(a, alpha), b);
                    assert_eq!(c.in_affine_span(&beta, alpha), Some((a, b)));
                }
            }
        }
    }

    #[test]
    fn poly_frobenius_power_examples() {
        let c = build_ctx(2, 1, 3).unwrap();
        let p = Poly::new(vec![1, 1, 1]);
        assert_eq!(c.poly_frobenius_power(&p, 2), Poly::x());
        assert_eq!(c.poly_frobenius_power(&p, 0), Poly::x());
        assert_eq!(c.poly_frobenius_power(&p, 1), Poly::new(vec![1, 1]));
        let c = build_ctx(3, 2, 3).unwrap();
        for idx in 0..81u64 {
            let quad = Poly::monic_from_index(idx, 2, 9);
            if super::super::poly::is_irreducible(&quad, c.base()) {
                for s in [2u64, 4, 6] {
                    assert_eq!(c.poly_frobenius_power(&quad, s), Poly::x());
                }
                assert_ne!(c.poly_frobenius_power(&quad, 1), Poly::x());
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let c = build_ctx(3, 2, 3).unwrap();
        let a = c.from_index(500);
        let js = c.element_to_json(&a);
        assert_eq!(js.coeffs.len(), 3);
        assert!(js.coeffs.iter().all(|v| v.len() == 2));
        assert_eq!(c.element_from_json(&js).unwrap(), a);
        let bad = ResidueVector { coeffs: vec![vec![0, 3], vec![0, 0], vec![0, 0]] };
        assert!(c.element_from_json(&bad).is_err());
    }

    #[test]
    fn determinism() {
        let a = build_ctx(3, 2, 4).unwrap();
        let b = build_ctx(3, 2, 4).unwrap();
        assert_eq!(a.top_modulus(), b.top_modulus());
        assert_eq!(a.base_modulus(), b.base_modulus());
        let ea: Vec<_> = a.enumerate_s(1 << 16).unwrap().take(200).collect();
        let eb: Vec<_> = b.enumerate_s(1 << 16).unwrap().take(200).collect();
        assert_eq!(ea, eb);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn frobenius_is_additive_and_periodic(i in 0u64..15625, j in 0u64..15625, k in 0u32..12) {
            let c = build_ctx(5, 2, 3).unwrap();
            let (a, b) = (c.from_index(i), c.from_index(j));
            prop_assert_eq!(c.frobenius(&c.add(&a, &b), k),
                            c.add(&c.frobenius(&a, k), &c.frobenius(&b, k)));
            prop_assert_eq!(c.frobenius(&a, k + 3), c.frobenius(&a, k));
            prop_assert_eq!(c.index(&a), i);
        }

        #[test]
        fn field_axioms(i in 1u64..4096, j in 1u64..4096, l in 0u64..4096) {
            let c = build_ctx(2, 3, 4).unwrap();
            let (a, b, d) = (c.from_index(i), c.from_index(j), c.from_index(l));
            prop_assert_eq!(c.mul(&a, &c.add(&b, &d)), c.add(&c.mul(&a, &b), &c.mul(&a, &d)));
            prop_assert_eq!(c.mul(&a, &b), c.mul(&b, &a));
            prop_assert_eq!(c.mul(&c.div(&a, &b).unwrap(), &b), a);
        }
    }
}

//! Dense univariate polynomials over a [`ScalarField`].

use serde::{Deserialize, Serialize};

use super::scalar::ScalarField;
use crate::ntheory::prime_divisors;

/// Coefficients in ascending order; trailing zeros are trimmed so the last
/// coefficient is nonzero unless the polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    pub fn monomial(c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn monic<F: ScalarField>(&self, f: &F) -> Self {
        match f.inv(self.lead()) {
            Some(il) => Self::new(self.coeffs.iter().map(|&c| f.mul(c, il)).collect()),
            None => self.clone(),
        }
    }

    pub fn add<F: ScalarField>(&self, other: &Self, f: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub<F: ScalarField>(&self, other: &Self, f: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale<F: ScalarField>(&self, c: u32, f: &F) -> Self {
        Self::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul<F: ScalarField>(&self, other: &Self, f: &F) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn divrem<F: ScalarField>(&self, divisor: &Self, f: &F) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = f.inv(divisor.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, inv_lead);
            quot[k - dd] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, dc));
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem<F: ScalarField>(&self, divisor: &Self, f: &F) -> Self {
        self.divrem(divisor, f).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd<F: ScalarField>(&self, other: &Self, f: &F) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn mulmod<F: ScalarField>(&self, other: &Self, modulus: &Self, f: &F) -> Self {
        self.mul(other, f).rem(modulus, f)
    }

    pub fn powmod<F: ScalarField>(&self, mut e: u64, modulus: &Self, f: &F) -> Self {
        let mut base = self.rem(modulus, f);
        let mut acc = Self::one().rem(modulus, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus, f);
            }
            base = base.mulmod(&base, modulus, f);
            e >>= 1;
        }
        acc
    }

    pub fn eval<F: ScalarField>(&self, x: u32, f: &F) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Polynomial with the given code index under base-`size` odometer order,
    /// constant coefficient least significant, made monic of degree `deg`.
    pub fn monic_from_index(index: u64, deg: usize, size: u32) -> Self {
        let mut v = Vec::with_capacity(deg + 1);
        let mut rest = index;
        for _ in 0..deg {
            v.push((rest % size as u64) as u32);
            rest /= size as u64;
        }
        v.push(1);
        Self::new(v)
    }
}

/// `x^(Q^s) mod modulus` where `Q = f.size()`, by repeated `Q`-th powering.
pub fn x_pow_size_pow<F: ScalarField>(modulus: &Poly, s: u64, f: &F) -> Poly {
    let mut y = Poly::x().rem(modulus, f);
    for _ in 0..s {
        y = y.powmod(f.size() as u64, modulus, f);
    }
    y
}

/// Rabin's irreducibility test over `f`.
pub fn is_irreducible<F: ScalarField>(poly: &Poly, f: &F) -> bool {
    let n = match poly.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n as u64,
    };
    let m = poly.monic(f);
    let x = Poly::x();
    if x_pow_size_pow(&m, n, f) != x.rem(&m, f) {
        return false;
    }
    for l in prime_divisors(n) {
        let h = x_pow_size_pow(&m, n / l, f).sub(&x, f);
        if h.gcd(&m, f).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Irreducibility by trial division against every monic polynomial of degree
/// at most half. Exponential; only meant as a cross-check at tiny sizes.
pub fn is_irreducible_by_trial<F: ScalarField>(poly: &Poly, f: &F) -> bool {
    let n = match poly.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let size = f.size() as u64;
    for d in 1..=n / 2 {
        let count = size.pow(d as u32);
        for idx in 0..count {
            let cand = Poly::monic_from_index(idx, d, f.size());
            if poly.rem(&cand, f).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `deg`,
/// ordering candidates by their odometer index (constant term least
/// significant).
pub fn smallest_irreducible<F: ScalarField>(deg: usize, f: &F) -> Poly {
    let mut idx = 0u64;
    loop {
        let cand = Poly::monic_from_index(idx, deg, f.size());
        if is_irreducible(&cand, f) {
            return cand;
        }
        idx += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::scalar::PrimeField;
    use proptest::prelude::*;

    #[test]
    fn smallest_cubic_over_f2() {
        let f = PrimeField::new(2);
        // x^3 + x + 1
        assert_eq!(smallest_irreducible(3, &f).coeffs(), &[1, 1, 0, 1]);
        // x^2 + x + 1
        assert_eq!(smallest_irreducible(2, &f).coeffs(), &[1, 1, 1]);
    }

    #[test]
    fn smallest_irreducible_is_first_by_trial() {
        for (p, d) in [(2u32, 3usize), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)] {
            let f = PrimeField::new(p);
            let mut idx = 0;
            let by_trial = loop {
                let c = Poly::monic_from_index(idx, d, p);
                if is_irreducible_by_trial(&c, &f) {
                    break c;
                }
                idx += 1;
            };
            assert_eq!(smallest_irreducible(d, &f), by_trial, "p={p} d={d}");
        }
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for p in [2u32, 3, 5] {
            let f = PrimeField::new(p);
            for d in 1..=4usize {
                for idx in 0..(p as u64).pow(d as u32) {
                    let c = Poly::monic_from_index(idx, d, p);
                    assert_eq!(is_irreducible(&c, &f), is_irreducible_by_trial(&c, &f), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree 4 over F_3 is (81 - 9) / 4 = 18
        let f = PrimeField::new(3);
        let n = (0..81u64)
            .filter(|&i| is_irreducible(&Poly::monic_from_index(i, 4, 3), &f))
            .count();
        assert_eq!(n, 18);
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(a in proptest::collection::vec(0u32..7, 0..12),
                               b in proptest::collection::vec(0u32..7, 1..6)) {
            let f = PrimeField::new(7);
            let a = Poly::new(a);
            let b = Poly::new(b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b, &f);
            prop_assert_eq!(q.mul(&b, &f).add(&r, &f), a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }
    }
}

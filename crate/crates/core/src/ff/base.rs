use super::poly::{smallest_irreducible, Poly};
use super::scalar::{PrimeField, ScalarField};
use crate::error::{Error, Result};
use crate::ntheory::prime_divisors;

/// Largest `q` for which log/exp tables are built.
pub const MAX_BASE_SIZE: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// The base field F_q = F_p[y]/(base_modulus), q = p^t.
///
/// An element is encoded as `sum_j c_j p^j` where `c_j` is the coefficient of
/// `y^j`. Multiplication runs through discrete log tables.
#[derive(Debug, Clone)]
pub struct BaseField {
    prime: PrimeField,
    t: u32,
    q: u32,
    modulus: Poly,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_tab: Option<Vec<u32>>,
    generator: u32,
}

impl BaseField {
    pub fn new(p: u32, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(t)
            .filter(|&q| q <= MAX_BASE_SIZE)
            .ok_or(Error::FieldTooLarge { p: p as u64, t })?;
        let q = q as u32;
        let prime = PrimeField::new(p);
        // degree-1 convention: F_q = F_p and the modulus is just x
        let modulus = if t == 1 {
            Poly::x()
        } else {
            smallest_irreducible(t as usize, &prime)
        };

        let mut field = Self {
            prime,
            t,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_tab: None,
            generator: 1,
        };
        field.neg = (0..q).map(|a| field.slow_neg(a)).collect();
        field.generator = field.find_generator();
        field.build_log_tables();
        if p != 2 && t > 1 && q <= ADD_TABLE_LIMIT {
            let mut tab = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tab[(a * q + b) as usize] = field.slow_add(a, b);
                }
            }
            field.add_tab = Some(tab);
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.prime.p()
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    /// Defining polynomial of F_q over F_p (`x` when t = 1).
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The primitive element used for the log tables: the smallest code of
    /// multiplicative order q - 1.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// `generator^k`.
    pub fn gen_pow(&self, k: u64) -> u32 {
        self.exp[(k % (self.q as u64 - 1)) as usize]
    }

    /// Discrete log base [`Self::generator`]; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Residues `c_0..c_{t-1}` of a code.
    pub fn decode(&self, mut a: u32) -> Vec<u32> {
        let p = self.p();
        (0..self.t)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn encode(&self, residues: &[u32]) -> u32 {
        residues.iter().rev().fold(0, |acc, &c| acc * self.p() + c)
    }

    /// Image of the prime-field scalar `c` (already reduced mod p).
    pub fn from_prime(&self, c: u32) -> u32 {
        c
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.q as u64 - 1;
        Some(n / crate::ntheory::gcd(l, n))
    }

    /// `a^p`, the absolute Frobenius of F_q.
    pub fn frobenius_p(&self, a: u32) -> u32 {
        self.pow(a, self.p() as u64)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.decode(a), self.decode(b));
        let s: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| self.prime.add(x, y))
            .collect();
        self.encode(&s)
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.decode(a).iter().map(|&x| self.prime.neg(x)).collect();
        self.encode(&d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.t == 1 {
            return self.prime.mul(a, b);
        }
        let pa = Poly::new(self.decode(a));
        let pb = Poly::new(self.decode(b));
        let prod = pa.mulmod(&pb, &self.modulus, &self.prime);
        let mut v = prod.coeffs().to_vec();
        v.resize(self.t as usize, 0);
        self.encode(&v)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u32 {
        let n = self.q as u64 - 1;
        if n == 1 {
            return 1;
        }
        let primes = prime_divisors(n);
        (2..self.q)
            .find(|&g| primes.iter().all(|&l| self.slow_pow(g, n / l) != 1))
            .expect("finite field has a primitive element")
    }

    fn build_log_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, self.generator);
        }
        self.exp = exp;
        self.log = log;
    }
}

impl ScalarField for BaseField {
    fn size(&self) -> u32 {
        self.q
    }

    fn characteristic(&self) -> u32 {
        self.p()
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.prime.p() == 2 {
            a ^ b
        } else if self.t == 1 {
            self.prime.add(a, b)
        } else if let Some(tab) = &self.add_tab {
            tab[(a * self.q + b) as usize]
        } else {
            self.slow_add(a, b)
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    #[inline]
    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            let n = self.q - 1;
            Some(self.exp[((n - self.log[a as usize]) % n) as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_and_axioms() {
        let f = BaseField::new(2, 2).unwrap();
        assert_eq!(f.modulus().coeffs(), &[1, 1, 1]);
        assert_eq!(f.q(), 4);
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn table_arithmetic_matches_polynomial_arithmetic() {
        for (p, t) in [(2, 3), (3, 2), (5, 2), (3, 3), (7, 2), (2, 6)] {
            let f = BaseField::new(p, t).unwrap();
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                    assert_eq!(f.add(a, b), f.slow_add(a, b));
                }
            }
        }
    }

    #[test]
    fn generator_is_primitive() {
        let f = BaseField::new(2, 6).unwrap();
        assert_eq!(f.mult_order(f.generator()), Some(63));
        assert_eq!(f.mult_order(f.gen_pow(42)), Some(3));
    }

    #[test]
    fn rejects_oversized_fields() {
        assert!(matches!(BaseField::new(2, 30), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(BaseField::new(2, 0), Err(Error::ZeroDegree)));
    }
}

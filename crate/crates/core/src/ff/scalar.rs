/// A finite field whose elements are encoded as `u32` codes in `0..size()`.
///
/// Code `0` is zero and code `1` is one in every implementation.
pub trait ScalarField {
    fn size(&self) -> u32;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> Option<u32>;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// `p` must be prime; callers validate.
    pub fn new(p: u32) -> Self {
        debug_assert!(p >= 2);
        Self { p }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

impl ScalarField for PrimeField {
    fn size(&self) -> u32 {
        self.p
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            return None;
        }
        Some(self.pow(a, self.p as u64 - 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(13);
        for a in 1..13 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
        assert_eq!(f.sub(3, 5), 11);
    }
}

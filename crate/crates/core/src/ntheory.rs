//! Small-integer number theory: factorization, Möbius, Euler's totient and
//! divisor lists. Everything here works by trial division, which is plenty for
//! the degrees and group orders this crate deals with.

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.len() == 1 && f[0].1 == 1
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// All positive divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors is defined for n >= 1");
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Multiplicative order of `x` modulo a group exponent `m`, given a predicate
/// deciding whether `x^k` is the identity. `m` must be a multiple of the order.
pub(crate) fn order_dividing<F>(m: u64, mut is_identity_at: F) -> u64
where
    F: FnMut(u64) -> bool,
{
    let mut d = m;
    for p in prime_divisors(m) {
        while d % p == 0 && is_identity_at(d / p) {
            d /= p;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert!(is_prime(13) && !is_prime(1) && !is_prime(15));
    }

    #[test]
    fn totient_matches_count() {
        for n in 1..200u64 {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute, "n = {n}");
        }
    }

    #[test]
    fn mobius_sums_vanish() {
        for n in 2..300u64 {
            let s: i64 = divisors(n).into_iter().map(mobius).sum();
            assert_eq!(s, 0, "n = {n}");
        }
    }

    #[test]
    fn order_search() {
        // order of 2 mod 11 is 10
        let ord = order_dividing(10, |k| {
            let mut x = 1u64;
            for _ in 0..k {
                x = x * 2 % 11;
            }
            x == 1
        });
        assert_eq!(ord, 10);
    }
}

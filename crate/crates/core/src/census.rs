//! Closed-form orbit counts.
//!
//! For each divisor `r1` of `r` the subgroup `<σ^{r1}>` of the Frobenius group
//! has order `rbar = r / r1`. An affine set (projective linear set) is fixed by
//! that subgroup exactly when `σ^{r1}` acts on it through an affine map
//! (element of PGL(2,q)) of order `rbar`, so the fixed counts follow from the
//! element orders those groups can realize: 1, p, divisors of q-1 and, for
//! PGL(2,q) only, divisors of q+1. Burnside then averages the fixed counts over
//! the cyclic group of order `r`.
//!
//! Two ladders are available. [`Ladder::Exact`] counts every conjugacy class of
//! PGL(2,q) of the relevant order, including non-split involutions and
//! non-split classes of even order. [`Ladder::Published`] reproduces the
//! earlier closed forms, which treat projective order as matrix order; it
//! drops those classes and can produce non-integral Burnside sums.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
pub use crate::ntheory::{divisors, euler_phi, mobius};
use crate::ntheory::{gcd, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: u64,
    pub t: u32,
    pub r: u32,
    #[serde(serialize_with = "json::biguint")]
    pub q: BigUint,
}

impl Params {
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
        Ok(Self {
            p,
            t,
            r,
            q: BigUint::from(p).pow(t),
        })
    }

    fn q_minus_one(&self) -> BigUint {
        &self.q - 1u32
    }

    fn q_plus_one(&self) -> BigUint {
        &self.q + 1u32
    }

    fn divides(d: u32, n: &BigUint) -> bool {
        (n % d).is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// rbar = 1
    Full,
    /// rbar = p
    Unipotent,
    /// rbar | q-1, rbar > 2, p ∤ rbar
    SplitTorus,
    /// rbar = 2 with q odd: split and non-split involutions both occur
    Involution,
    /// rbar | q+1, rbar odd, p ∤ rbar
    NonSplitTorus,
    /// rbar | q+1, rbar even and > 2
    EvenNonSplit,
    /// no element of order rbar in PGL(2,q)
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DivisorCase {
    pub r1: u32,
    pub rbar: u32,
    pub tag: CaseTag,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ladder {
    #[default]
    Exact,
    Published,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub case: DivisorCase,
    #[serde(serialize_with = "json::biguint")]
    pub fix_affine: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub fix_projective: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub phi_weight: BigUint,
    pub affine_rule: &'static str,
    pub projective_rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub params: Params,
    pub ladder: Ladder,
    #[serde(serialize_with = "json::biguint")]
    pub s_size: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub affine_sets: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub projective_sets: BigUint,
    pub rows: Vec<CensusRow>,
    #[serde(rename = "N", serialize_with = "json::biguint")]
    pub n: BigUint,
    #[serde(rename = "Ne", serialize_with = "json::biguint")]
    pub ne: BigUint,
}

impl CensusReport {
    pub const CSV_HEADER: &'static str = "p,t,r,q,N,Ne";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.params.p, self.params.t, self.params.r, self.params.q, self.n, self.ne
        )
    }
}

fn exact_div(num: &BigUint, den: &BigUint, site: &'static str) -> Result<BigUint> {
    let (quot, rem) = num.div_rem(den);
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(Error::InexactDivision {
            site,
            numerator: num.to_string(),
            denominator: den.to_string(),
        })
    }
}

fn to_unsigned(v: BigInt, site: &'static str) -> Result<BigUint> {
    match v.sign() {
        Sign::Minus => Err(Error::CaseViolation(format!("{site} evaluated to {v}"))),
        _ => Ok(v.magnitude().clone()),
    }
}

/// Möbius sum `Σ_{d | u, keep(d)} μ(d) term(u/d)`.
fn mobius_sum<K, T>(u: u32, keep: K, term: T) -> BigInt
where
    K: Fn(u64) -> bool,
    T: Fn(u32) -> BigInt,
{
    divisors(u as u64)
        .into_iter()
        .filter(|&d| keep(d))
        .map(|d| term(u / d as u32) * mobius(d))
        .sum()
}

/// |S| = Σ_{d | r} μ(d) q^{r/d}, the number of elements of degree exactly `r`.
pub fn count_s(q: &BigUint, r: u32) -> BigUint {
    let q = BigInt::from(q.clone());
    let v = mobius_sum(r, |_| true, |e| q.pow(e));
    v.magnitude().clone()
}

/// Roots of degree `r` of `x^{q^{r1}} = ζ x` for one ζ of order `rbar`.
pub fn t_count(q: &BigUint, r: u32, rbar: u32) -> Result<BigUint> {
    if rbar <= 1 || !Params::divides(rbar, &(q - 1u32)) {
        return Err(Error::CaseViolation(format!(
            "t_count needs 1 < rbar | q - 1 (rbar = {rbar}, q = {q})"
        )));
    }
    if r % rbar != 0 {
        return Ok(BigUint::zero());
    }
    let u = r / rbar;
    let qi = BigInt::from(q.clone());
    let v = mobius_sum(u, |d| gcd(d, rbar as u64) == 1, |e| qi.pow(e) - 1);
    to_unsigned(v, "t_count")
}

/// Roots of degree `r` of `x^{q^{r/p}} = x + 1`.
pub fn u_count(q: &BigUint, p: u64, r: u32) -> Result<BigUint> {
    if !is_prime(p) || !(q % p).is_zero() {
        return Err(Error::CaseViolation(format!(
            "u_count needs the characteristic of q = {q}, got {p}"
        )));
    }
    if r as u64 % p != 0 {
        return Ok(BigUint::zero());
    }
    let u = r / p as u32;
    let qi = BigInt::from(q.clone());
    let v = mobius_sum(u, |d| d % p != 0, |e| qi.pow(e));
    to_unsigned(v, "u_count")
}

fn check_nonsplit(q: &BigUint, rbar: u32, what: &str) -> Result<()> {
    if rbar < 2 || !Params::divides(rbar, &(q + 1u32)) || gcd_big(q, rbar) != 1 {
        return Err(Error::CaseViolation(format!(
            "{what} needs rbar >= 2, rbar | q + 1 and gcd(q, rbar) = 1 (rbar = {rbar}, q = {q})"
        )));
    }
    Ok(())
}

fn gcd_big(q: &BigUint, n: u32) -> u64 {
    let m = (q % n).to_u64_digits().first().copied().unwrap_or(0);
    gcd(m, n as u64)
}

fn nonsplit_term(q: &BigInt, e: u32) -> BigInt {
    let sign = if e % 2 == 0 { 1 } else { -1 };
    q.pow(e) - sign
}

/// Roots of degree `r` of `x^{q^{r1}} = [A](x)` for one non-split class `[A]`
/// of projective order `rbar` (rbar = 2 covers the non-split involution).
pub fn x_count(q: &BigUint, r: u32, rbar: u32) -> Result<BigUint> {
    check_nonsplit(q, rbar, "x_count")?;
    if r % rbar != 0 {
        return Ok(BigUint::zero());
    }
    let u = r / rbar;
    let qi = BigInt::from(q.clone());
    let v = mobius_sum(u, |d| gcd(d, rbar as u64) == 1, |e| nonsplit_term(&qi, e));
    to_unsigned(v, "x_count")
}

/// The earlier closed form for non-split roots, which filters divisors by
/// `d ≢ 0 (mod rbar)` instead of coprimality. Agrees with [`x_count`] when
/// `rbar` is prime.
pub fn x_count_published(q: &BigUint, r: u32, rbar: u32) -> Result<BigUint> {
    check_nonsplit(q, rbar, "x_count_published")?;
    if r % rbar != 0 {
        return Ok(BigUint::zero());
    }
    let u = r / rbar;
    let qi = BigInt::from(q.clone());
    let v = mobius_sum(u, |d| d % rbar as u64 != 0, |e| nonsplit_term(&qi, e));
    to_unsigned(v, "x_count_published")
}

pub fn classify_divisor(params: &Params, r1: u32) -> Result<DivisorCase> {
    if r1 == 0 || params.r % r1 != 0 {
        return Err(Error::CaseViolation(format!(
            "r1 = {r1} does not divide r = {}",
            params.r
        )));
    }
    let rbar = params.r / r1;
    let tag = if rbar == 1 {
        CaseTag::Full
    } else if rbar as u64 == params.p {
        CaseTag::Unipotent
    } else if rbar as u64 % params.p == 0 {
        CaseTag::None
    } else if Params::divides(rbar, &params.q_minus_one()) {
        if rbar == 2 {
            CaseTag::Involution
        } else {
            CaseTag::SplitTorus
        }
    } else if Params::divides(rbar, &params.q_plus_one()) {
        if rbar % 2 == 1 {
            CaseTag::NonSplitTorus
        } else {
            CaseTag::EvenNonSplit
        }
    } else {
        CaseTag::None
    };
    Ok(DivisorCase { r1, rbar, tag })
}

fn affine_with_rule(params: &Params, case: &DivisorCase) -> Result<(BigUint, &'static str)> {
    let q = &params.q;
    let r = params.r;
    Ok(match case.tag {
        CaseTag::Full => (
            exact_div(&count_s(q, r), &(q * q - q), "|S| / (q^2 - q)")?,
            "full: |S|/(q^2-q)",
        ),
        CaseTag::Unipotent => (
            exact_div(&u_count(q, params.p, r)?, q, "|U(r)| / q")?,
            "unipotent: |U(r)|/q",
        ),
        CaseTag::SplitTorus | CaseTag::Involution => {
            let num = t_count(q, r, case.rbar)? * euler_phi(case.rbar as u64);
            (
                exact_div(&num, &params.q_minus_one(), "phi(rbar)|T(r)| / (q - 1)")?,
                "split torus: phi(rbar)|T(r)|/(q-1)",
            )
        }
        CaseTag::NonSplitTorus | CaseTag::EvenNonSplit => (
            BigUint::zero(),
            "non-split order: no affine map of order rbar",
        ),
        CaseTag::None => (
            BigUint::zero(),
            "order rbar not realized by an affine map",
        ),
    })
}

fn projective_with_rule(
    params: &Params,
    case: &DivisorCase,
    ladder: Ladder,
) -> Result<(BigUint, &'static str)> {
    let q = &params.q;
    let r = params.r;
    let two_q_plus_one = params.q_plus_one() * 2u32;
    Ok(match (case.tag, ladder) {
        (CaseTag::Full, _) => (
            exact_div(&count_s(q, r), &(q * q * q - q), "|S| / (q^3 - q)")?,
            "full: |S|/(q^3-q)",
        ),
        (CaseTag::Unipotent, _) => (
            affine_with_rule(params, case)?.0,
            "unipotent: equals the fixed affine sets",
        ),
        (CaseTag::SplitTorus, _) | (CaseTag::Involution, Ladder::Published) => (
            exact_div(&affine_with_rule(params, case)?.0, &BigUint::from(2u32), "tau / 2")?,
            "split torus: half the fixed affine sets",
        ),
        (CaseTag::Involution, Ladder::Exact) => {
            let split = exact_div(&affine_with_rule(params, case)?.0, &BigUint::from(2u32), "tau / 2")?;
            let nonsplit = exact_div(&x_count(q, r, 2)?, &two_q_plus_one, "|X_2(r)| / (2(q + 1))")?;
            (
                split + nonsplit,
                "involutions: tau/2 + |X_2(r)|/(2(q+1))",
            )
        }
        (CaseTag::NonSplitTorus, Ladder::Published) => {
            let num = x_count_published(q, r, case.rbar)? * euler_phi(case.rbar as u64);
            (
                exact_div(&num, &two_q_plus_one, "phi(rbar)|X(r)| / (2(q + 1))")?,
                "non-split torus: phi(rbar)|X(r)|/(2(q+1))",
            )
        }
        (CaseTag::NonSplitTorus | CaseTag::EvenNonSplit, Ladder::Exact) => {
            let num = x_count(q, r, case.rbar)? * euler_phi(case.rbar as u64);
            (
                exact_div(&num, &two_q_plus_one, "phi(rbar)|X(r)| / (2(q + 1))")?,
                "non-split torus: phi(rbar)|X(r)|/(2(q+1))",
            )
        }
        (CaseTag::EvenNonSplit, Ladder::Published) => (
            BigUint::zero(),
            "even non-split order: taken as no fixed set",
        ),
        (CaseTag::None, _) => (
            BigUint::zero(),
            "order rbar not realized in PGL(2,q)",
        ),
    })
}

/// Number of affine sets fixed by `<σ^{r1}>`.
pub fn fix_affine(params: &Params, r1: u32) -> Result<BigUint> {
    let case = classify_divisor(params, r1)?;
    Ok(affine_with_rule(params, &case)?.0)
}

/// Number of projective linear sets fixed by `<σ^{r1}>`.
pub fn fix_projective(params: &Params, r1: u32) -> Result<BigUint> {
    fix_projective_with(params, r1, Ladder::Exact)
}

pub fn fix_projective_with(params: &Params, r1: u32, ladder: Ladder) -> Result<BigUint> {
    let case = classify_divisor(params, r1)?;
    Ok(projective_with_rule(params, &case, ladder)?.0)
}

/// One row per divisor `r1` of `r`, ascending.
pub fn census_rows(params: &Params, ladder: Ladder) -> Result<Vec<CensusRow>> {
    divisors(params.r as u64)
        .into_iter()
        .map(|r1| {
            let case = classify_divisor(params, r1 as u32)?;
            let (fix_affine, affine_rule) = affine_with_rule(params, &case)?;
            let (fix_projective, projective_rule) = projective_with_rule(params, &case, ladder)?;
            Ok(CensusRow {
                case,
                fix_affine,
                fix_projective,
                phi_weight: BigUint::from(euler_phi(case.rbar as u64)),
                affine_rule,
                projective_rule,
            })
        })
        .collect()
}

/// Burnside average over the cyclic group of order `r`: every generator of
/// `<σ^{r1}>` fixes the same sets, and there are φ(rbar) of them.
pub fn burnside(rows: &[CensusRow], r: u32, projective: bool) -> Result<BigUint> {
    let sum: BigUint = rows
        .iter()
        .map(|row| {
            let fix = if projective { &row.fix_projective } else { &row.fix_affine };
            &row.phi_weight * fix
        })
        .sum();
    let (quot, rem) = sum.div_rem(&BigUint::from(r));
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(Error::IntegralityViolation {
            action: if projective { "projective" } else { "affine" },
            sum: sum.to_string(),
            r,
        })
    }
}

pub fn census_report(params: &Params) -> Result<CensusReport> {
    census_report_with(params, Ladder::Exact)
}

pub fn census_report_with(params: &Params, ladder: Ladder) -> Result<CensusReport> {
    let rows = census_rows(params, ladder)?;
    let n = burnside(&rows, params.r, false)?;
    let ne = burnside(&rows, params.r, true)?;
    let full = rows.last().expect("r has at least the divisor r");
    Ok(CensusReport {
        params: params.clone(),
        ladder,
        s_size: count_s(&params.q, params.r),
        affine_sets: full.fix_affine.clone(),
        projective_sets: full.fix_projective.clone(),
        rows,
        n,
        ne,
    })
}

/// Upper bound on inequivalent irreducible Goppa codes of length q.
pub fn n_irr(params: &Params) -> Result<BigUint> {
    Ok(census_report(params)?.n)
}

/// Upper bound on inequivalent extended irreducible Goppa codes of length q+1.
pub fn n_ext(params: &Params) -> Result<BigUint> {
    Ok(census_report(params)?.ne)
}

/// `Σ_{r1 | r} φ(r/r1) fix(r1)` is a multiple of `r`; exposed for sweeps.
pub fn burnside_is_integral(params: &Params, ladder: Ladder) -> bool {
    census_rows(params, ladder)
        .map(|rows| burnside(&rows, params.r, false).is_ok() && burnside(&rows, params.r, true).is_ok())
        .unwrap_or(false)
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Full => "full",
            CaseTag::Unipotent => "unipotent",
            CaseTag::SplitTorus => "split_torus",
            CaseTag::Involution => "involution",
            CaseTag::NonSplitTorus => "non_split_torus",
            CaseTag::EvenNonSplit => "even_non_split",
            CaseTag::None => "none",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn params(p: u64, t: u32, r: u32) -> Params {
        Params::new(p, t, r).unwrap()
    }

    #[test]
    fn s_counts() {
        assert_eq!(count_s(&b(2), 3), b(6));
        assert_eq!(count_s(&b(32), 5), b(33554400));
        assert_eq!(count_s(&b(64), 3), b(262080));
    }

    #[test]
    fn t_counts() {
        assert_eq!(t_count(&b(64), 6, 3).unwrap(), b(4032));
        assert_eq!(t_count(&b(25), 6, 2).unwrap(), b(15600));
        for q in [4u64, 7, 13, 16, 25] {
            for rbar in divisors(q - 1).into_iter().skip(1) {
                if rbar >= 3 {
                    assert_eq!(t_count(&b(q), rbar as u32, rbar as u32).unwrap(), b(q - 1));
                }
            }
        }
        assert_eq!(t_count(&b(64), 7, 3).unwrap(), b(0));
        assert!(t_count(&b(64), 6, 5).is_err());
    }

    #[test]
    fn u_counts() {
        assert_eq!(u_count(&b(64), 2, 6).unwrap(), b(262080));
        // x^4 + x + 1 is irreducible over F_2, so all four of its roots count
        assert_eq!(u_count(&b(2), 2, 4).unwrap(), b(4));
        assert_eq!(u_count(&b(27), 3, 3).unwrap(), b(27));
        assert_eq!(u_count(&b(27), 3, 4).unwrap(), b(0));
        assert!(u_count(&b(27), 2, 4).is_err());
    }

    #[test]
    fn x_counts() {
        assert_eq!(x_count(&b(32), 6, 3).unwrap(), b(990));
        assert_eq!(x_count(&b(8), 9, 3).unwrap(), b(513));
        assert_eq!(x_count(&b(8), 9, 9).unwrap(), b(9));
        assert_eq!(x_count_published(&b(32), 6, 3).unwrap(), b(990));
        assert_eq!(x_count_published(&b(8), 9, 3).unwrap(), b(513));
        // the two divisor filters part ways once rbar is composite
        assert_ne!(x_count(&b(8), 27, 9).unwrap(), x_count_published(&b(8), 27, 9).unwrap());
        assert!(x_count(&b(8), 9, 4).is_err());
    }

    #[test]
    fn divisor_classification() {
        assert_eq!(classify_divisor(&params(2, 4, 12), 2).unwrap().tag, CaseTag::None);
        assert_eq!(classify_divisor(&params(2, 5, 5), 5).unwrap().tag, CaseTag::Full);
        assert_eq!(classify_divisor(&params(2, 3, 9), 1).unwrap().tag, CaseTag::NonSplitTorus);
        assert_eq!(classify_divisor(&params(3, 3, 4), 1).unwrap().tag, CaseTag::EvenNonSplit);
        assert_eq!(classify_divisor(&params(5, 2, 6), 3).unwrap().tag, CaseTag::Involution);
        assert_eq!(classify_divisor(&params(2, 6, 6), 3).unwrap().tag, CaseTag::Unipotent);
        assert_eq!(classify_divisor(&params(2, 6, 6), 2).unwrap().tag, CaseTag::SplitTorus);
        assert!(classify_divisor(&params(2, 6, 6), 4).is_err());
    }

    #[test]
    fn fixed_set_examples() {
        assert_eq!(fix_affine(&params(2, 6, 6), 3).unwrap(), b(4095));
        assert_eq!(fix_affine(&params(2, 5, 5), 5).unwrap(), b(33825));
        assert_eq!(fix_affine(&params(2, 2, 3), 1).unwrap(), b(2));
        assert_eq!(fix_affine(&params(2, 4, 12), 2).unwrap(), b(0));
        assert_eq!(fix_affine(&params(2, 4, 12), 3).unwrap(), b(0));
        for q in [(2u64, 1u32), (2, 3), (3, 2), (5, 1), (7, 2)] {
            assert_eq!(fix_projective(&params(q.0, q.1, 3), 3).unwrap(), b(1));
        }
        assert_eq!(fix_projective(&params(2, 3, 9), 3).unwrap(), b(57));
        assert_eq!(fix_projective_with(&params(3, 3, 4), 1, Ladder::Published).unwrap(), b(0));
        assert_eq!(fix_projective(&params(3, 3, 4), 1).unwrap(), b(1));
    }

    #[test]
    fn table_rows() {
        for ((p, t, r), n, ne) in [
            ((2, 5, 5), 6765u64, 205u64),
            ((2, 3, 9), 266304, 29604),
            ((3, 3, 7), 2128684, 76027),
            ((2, 2, 3), 3, 1),
            ((2, 1, 3), 1, 1),
        ] {
            let rep = census_report(&params(p, t, r)).unwrap();
            assert_eq!((rep.n.clone(), rep.ne.clone()), (b(n), b(ne)), "{p} {t} {r}");
            let published = census_report_with(&params(p, t, r), Ladder::Published).unwrap();
            assert_eq!((published.n, published.ne), (b(n), b(ne)));
        }
    }

    #[test]
    fn published_ladder_breaks_integrality_for_even_nonsplit() {
        let p = params(3, 1, 4);
        assert!(matches!(
            census_report_with(&p, Ladder::Published),
            Err(Error::IntegralityViolation { action: "projective", .. })
        ));
        assert!(census_report(&p).is_ok());
    }

    #[test]
    fn report_invariants() {
        let rep = census_report(&params(5, 2, 6)).unwrap();
        assert_eq!(rep.affine_sets, &rep.projective_sets * (&rep.params.q + 1u32));
        assert!(rep.ne <= rep.n);
        assert_eq!(rep.rows.len(), 4);
        assert_eq!(rep.csv_row().split(',').count(), 6);
    }
}

//! Necessary conditions on dihedral determinants: p-adic valuation rules and
//! the mod-4 sign rule, plus the lower bound for λ(D_2n) they imply.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_probable_prime, valuation};
use crate::error::{Error, Result};

/// Integers above this must be supplied with their factorization.
pub const AUTO_FACTOR_LIMIT: u64 = 1_000_000_000_000;
const TRIAL_LIMIT: u64 = 1_000_000;

/// `n = prod p^a` with primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::decimal")]
    n: BigUint,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factors `n` by trial division to 10^6 and a primality test on the cofactor.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFactorization("n must be positive".into()));
        }
        if n > AUTO_FACTOR_LIMIT {
            return Err(Error::UnfactoredCofactor(n.to_string()));
        }
        let mut m = n;
        let mut factors = Vec::new();
        let mut p = 2u64;
        while p <= TRIAL_LIMIT && p * p <= m {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            if !is_probable_prime(&BigUint::from(m)) {
                return Err(Error::UnfactoredCofactor(m.to_string()));
            }
            factors.push((m, 1));
        }
        Ok(Factorization {
            n: BigUint::from(n),
            factors,
        })
    }

    /// Builds from supplied prime powers, re-checking primality. Repeated
    /// primes are merged.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            if p < 2 || !is_probable_prime(&BigUint::from(p)) {
                return Err(Error::InvalidFactorization(format!("{p} is not prime")));
            }
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        let n = merged
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e));
        Ok(Factorization { n, factors: merged })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn n_u64(&self) -> Option<u64> {
        self.n.to_u64()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Exponent of `p` in `n`.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_even(&self) -> bool {
        self.exponent(2) > 0
    }

    pub fn odd_primes(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().copied().filter(|&(p, _)| p != 2)
    }

    /// Whether `m` is coprime to `2n`.
    pub fn coprime_to_2n(&self, m: &BigUint) -> bool {
        m.is_odd() && self.factors.iter().all(|&(p, _)| !(m % p).is_zero())
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("{p}^{e}"))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Accepts a plain integer or `p1^a1*p2^a2*...` (exponents optional).
impl FromStr for Factorization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty factorization".into()));
        }
        if !s.contains(['^', '*']) {
            let n: u64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("not a positive integer: {s}")))?;
            return Self::of(n);
        }
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (p, e) = match part.split_once('^') {
                Some((p, e)) => (p.trim(), e.trim()),
                None => (part, "1"),
            };
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime `{p}`")))?;
            let e: u32 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?;
            factors.push((p, e));
        }
        Self::from_factors(factors)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `p^a || n`, `p | v` requires `p^(2a+1) | v`.
    OddPrime,
    /// `n` odd, `2 | v` requires `4 | v`.
    TwoOddN,
    /// `2 || n`: `v_2 = 4` or `v_2 >= 6` when `v` is even.
    TwoSingle,
    /// `2^a || n`, `a >= 2`: `v_2 >= 2a + 4` when `v` is even.
    TwoPower,
    /// `n` even: odd values are `1 mod 4`.
    SignMod4,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::OddPrime => "odd-prime",
            Rule::TwoOddN => "two-odd-n",
            Rule::TwoSingle => "two-single",
            Rule::TwoPower => "two-power",
            Rule::SignMod4 => "sign-mod4",
        }
    }
}

/// A failed rule. For [`Rule::SignMod4`] `required` and `actual` are residues
/// mod 4; otherwise they are valuations, `required` being the least passing
/// valuation above `actual`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub prime: u64,
    pub rule: Rule,
    pub required: u32,
    pub actual: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    #[serde(with = "crate::decimal")]
    pub candidate: BigInt,
    pub reasons: Vec<Reason>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.reasons.is_empty()
    }
}

/// Checks the signed value `v` against every necessary condition for a
/// determinant of `D_2n`. Zero passes trivially.
pub fn admissible(v: &BigInt, nf: &Factorization) -> AdmissibilityReport {
    let mut reasons = Vec::new();
    if !v.is_zero() {
        for (p, a) in nf.odd_primes() {
            let vp = valuation(v, p).unwrap();
            if vp > 0 && vp < 2 * a + 1 {
                reasons.push(Reason {
                    prime: p,
                    rule: Rule::OddPrime,
                    required: 2 * a + 1,
                    actual: vp,
                });
            }
        }
        let v2 = valuation(v, 2).unwrap();
        let alpha = nf.exponent(2);
        if v2 > 0 {
            let failed = match alpha {
                0 => (v2 < 2).then_some((Rule::TwoOddN, 2)),
                1 => match v2 {
                    4 => None,
                    5 => Some((Rule::TwoSingle, 6)),
                    x if x >= 6 => None,
                    _ => Some((Rule::TwoSingle, 4)),
                },
                a => (v2 < 2 * a + 4).then_some((Rule::TwoPower, 2 * a + 4)),
            };
            if let Some((rule, required)) = failed {
                reasons.push(Reason {
                    prime: 2,
                    rule,
                    required,
                    actual: v2,
                });
            }
        } else if alpha > 0 {
            let r = v.mod_floor(&BigInt::from(4)).to_u32().unwrap();
            if r != 1 {
                reasons.push(Reason {
                    prime: 2,
                    rule: Rule::SignMod4,
                    required: 1,
                    actual: r,
                });
            }
        }
    }
    AdmissibilityReport {
        candidate: v.clone(),
        reasons,
    }
}

/// Smallest `m >= 2` with `+m` or `-m` admissible.
pub fn lambda_lower_bound(nf: &Factorization) -> u64 {
    (2u64..)
        .find(|&m| {
            admissible(&BigInt::from(m), nf).is_admissible()
                || admissible(&BigInt::from(-(m as i64)), nf).is_admissible()
        })
        .unwrap()
}

/// The admissible signed values with absolute value `m`, positive first.
pub fn admissible_signs(m: u64, nf: &Factorization) -> Vec<BigInt> {
    [BigInt::from(m), -BigInt::from(m)]
        .into_iter()
        .filter(|v| admissible(v, nf).is_admissible())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(n: u64) -> Factorization {
        Factorization::of(n).unwrap()
    }

    fn ok(v: i64, n: u64) -> bool {
        admissible(&BigInt::from(v), &nf(n)).is_admissible()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(nf(12).factors(), &[(2, 2), (3, 1)]);
        assert_eq!(
            nf(30030).factors(),
            &[(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1)]
        );
        assert!(nf(1).factors().is_empty());
        assert_eq!(nf(999_999_999_989).factors().len(), 1);
        assert_eq!(nf(1_000_003u64 * 999_983).factors(), &[(999_983, 1), (1_000_003, 1)]);
        assert!(matches!(
            Factorization::of(AUTO_FACTOR_LIMIT + 1),
            Err(Error::UnfactoredCofactor(_))
        ));
    }

    #[test]
    fn parse_factored_strings() {
        let f: Factorization = "2^1*3^1*5^1*7^1*11^1*13^1".parse().unwrap();
        assert_eq!(f.n_u64(), Some(30030));
        let g: Factorization = "3*2^2*3".parse().unwrap();
        assert_eq!(g.factors(), &[(2, 2), (3, 2)]);
        assert_eq!(g.to_string(), "2^2*3^2");
        assert_eq!("36".parse::<Factorization>().unwrap(), g);
        assert!("4^2".parse::<Factorization>().is_err());
        assert!("2^x".parse::<Factorization>().is_err());
        let big: Factorization = "2^2*3^2*5*7*11*13*17*19*23*29*31*37*41*43*47*53*59*61*67*71*73*79*83*89*97*101*103*107*109*113"
            .parse()
            .unwrap();
        assert!(big.n_u64().is_none());
    }

    #[test]
    fn admissibility_examples() {
        let r = admissible(&BigInt::from(2), &nf(3));
        assert_eq!(r.reasons[0].rule, Rule::TwoOddN);
        let r = admissible(&BigInt::from(3), &nf(3));
        assert_eq!(
            r.reasons,
            vec![Reason {
                prime: 3,
                rule: Rule::OddPrime,
                required: 3,
                actual: 1
            }]
        );
        assert!(!ok(-5, 6));
        assert!(ok(5, 6));
        assert!(!ok(32, 2));
        assert!(ok(16, 2));
        assert!(ok(64, 2));
        assert!(!ok(8, 2));
        assert!(ok(256, 4));
        assert!(!ok(128, 4));
        assert!(ok(27, 3));
        assert!(ok(-27, 6));
        assert!(!ok(27, 6));
        assert!(ok(0, 6));
    }

    #[test]
    fn lower_bound_examples() {
        let cases = [
            (1, 3),
            (2, 3),
            (4, 3),
            (3, 4),
            (15, 4),
            (6, 5),
            (30, 7),
            (210, 11),
            (2310, 13),
            (30030, 16),
            (60060, 17),
        ];
        for (n, l) in cases {
            assert_eq!(lambda_lower_bound(&nf(n)), l, "n = {n}");
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn verdict_stable_under_unit_multipliers(v in -5000i64..5000, n in 1u64..200, c in 0u64..40) {
            // multiply by c' coprime to 2n with c' = 1 mod 4
            let f = nf(n);
            let cp = 4 * c + 1;
            prop_assume!(f.coprime_to_2n(&BigUint::from(cp)));
            let a = admissible(&BigInt::from(v), &f).is_admissible();
            let b = admissible(&(BigInt::from(v) * cp), &f).is_admissible();
            prop_assert_eq!(a, b);
        }
    }
}

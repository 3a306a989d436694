//! Explicit elements of `Z[D_2n]` with known determinants.
//!
//! Every constructor returns its element already reduced modulo `x^n - 1`,
//! so coefficients of long geometric sums wrap around and accumulate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{gcd_u64, valuation};
use crate::constraints::Factorization;
use crate::error::{Error, Result};
use crate::measure::{dihedral_measure, CyclicElem, DihedralElem};

/// Largest `log2 |claimed|` a constructor will produce.
const CLAIM_BIT_LIMIT: f64 = (1u64 << 22) as f64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    /// The exact signed determinant.
    Value(BigInt),
    /// Only `v_p(determinant) = exponent` is asserted.
    Valuation { prime: u64, exponent: u32 },
}

impl Claim {
    pub fn value(&self) -> Option<&BigInt> {
        match self {
            Claim::Value(v) => Some(v),
            Claim::Valuation { .. } => None,
        }
    }

    pub fn holds_for(&self, measure: &BigInt) -> bool {
        match self {
            Claim::Value(v) => v == measure,
            Claim::Valuation { prime, exponent } => valuation(measure, *prime) == Some(*exponent),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Value(v) => write!(f, "{v}"),
            Claim::Valuation { prime, exponent } => write!(f, "v_{prime} = {exponent}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub elem: DihedralElem,
    pub claim: Claim,
    pub provenance: String,
}

impl Witness {
    fn new(elem: DihedralElem, claimed: BigInt, provenance: impl Into<String>) -> Self {
        Witness {
            elem,
            claim: Claim::Value(claimed),
            provenance: provenance.into(),
        }
    }

    pub fn n(&self) -> u64 {
        self.elem.n()
    }

    pub fn claimed(&self) -> Option<&BigInt> {
        self.claim.value()
    }

    pub fn measure(&self) -> Result<BigInt> {
        dihedral_measure(&self.elem)
    }

    /// `f <-> g`; the determinant picks up `(-1)^n`.
    pub fn swapped(&self) -> Witness {
        let claim = match &self.claim {
            Claim::Value(v) if self.n() % 2 == 1 => Claim::Value(-v),
            c => c.clone(),
        };
        Witness {
            elem: self.elem.swapped(),
            claim,
            provenance: format!("swap({})", self.provenance),
        }
    }
}

/// True iff the computed determinant matches the claim. A determinant that
/// cannot be computed within the size limits counts as a failure.
pub fn verify(w: &Witness) -> bool {
    w.measure().is_ok_and(|m| w.claim.holds_for(&m))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidWitness(msg.into())
}

fn check_claim_size(log2: f64) -> Result<()> {
    if log2 > CLAIM_BIT_LIMIT {
        Err(Error::TooLarge(format!("claimed value of about 2^{log2:.0}")))
    } else {
        Ok(())
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `(x^len - 1)/(x - 1)`, i.e. `1 + x + ... + x^(len-1)`; for negative `len`
/// this is `-(x^len + ... + x^-1)`.
pub fn geom(n: u64, len: i64) -> CyclicElem {
    if len >= 0 {
        CyclicElem::from_laurent(n, (0..len).map(|k| (k, big(1))))
    } else {
        CyclicElem::from_laurent(n, (len..0).map(|k| (k, big(-1))))
    }
}

/// Sum of `c x^k` over the given terms.
fn poly(n: u64, terms: &[(i64, i64)]) -> CyclicElem {
    CyclicElem::from_laurent(n, terms.iter().map(|&(k, c)| (k, big(c))))
}

fn pair(a: CyclicElem, b: CyclicElem) -> DihedralElem {
    DihedralElem::new(a, b).expect("blocks share n")
}

fn require_n(nf: &Factorization) -> Result<u64> {
    nf.n_u64()
        .ok_or_else(|| Error::TooLarge(format!("n = {} does not fit in 64 bits", nf.n())))
}

/// `|det| = m` for odd `m` coprime to `n`: `1`s at `0..=t` in the rotation
/// block and `0..t` in the reflection block, `m = 2t + 1`. The sign is `+`
/// for odd `n` and makes the value `1 mod 4` for even `n`.
pub fn odd_coprime(m: u64, n: u64) -> Result<Witness> {
    if n == 0 || m % 2 == 0 {
        return Err(invalid(format!("need odd m and positive n, got m = {m}, n = {n}")));
    }
    if gcd_u64(m, n) != 1 {
        return Err(invalid(format!("gcd({m}, {n}) != 1")));
    }
    let t = (m / 2) as i64;
    let claimed = if n % 2 == 0 && m % 4 == 3 {
        -big(m as i64)
    } else {
        big(m as i64)
    };
    Ok(Witness::new(
        pair(geom(n, t + 1), geom(n, t)),
        claimed,
        "achieve-odd",
    ))
}

/// `f = 1 + x^(2^a)` where `2^a || n`, with determinant `2^(2^(a+1))`.
pub fn two_power(nf: &Factorization) -> Result<Witness> {
    let n = require_n(nf)?;
    let alpha = nf.exponent(2);
    check_claim_size(2f64.powi(alpha as i32 + 1))?;
    let shift = (1u64 << alpha) % n;
    let a = poly(n, &[(0, 1), (shift as i64, 1)]);
    let claimed = BigInt::one() << (1usize << (alpha + 1));
    Ok(Witness::new(pair(a, CyclicElem::zero(n)), claimed, "achieve-2pow"))
}

/// `|det| = p^(p^a)` where `p^a || n`, from `1`s at multiples of `p^a`.
pub fn odd_prime_power(p: u64, nf: &Factorization) -> Result<Witness> {
    let n = require_n(nf)?;
    let alpha = nf.exponent(p);
    if p % 2 == 0 || alpha == 0 {
        return Err(invalid(format!("{p} is not an odd prime dividing {n}")));
    }
    let q = p.pow(alpha);
    check_claim_size(q as f64 * (p as f64).log2())?;
    let t = (p / 2) as i64;
    let at = |count: i64| {
        CyclicElem::from_laurent(n, (0..count).map(|i| ((i as u64 * q % n) as i64, big(1))))
    };
    let mut claimed: BigInt = Pow::pow(big(p as i64), q);
    if n % 2 == 0 && t % 2 == 1 {
        claimed = -claimed;
    }
    Ok(Witness::new(pair(at(t + 1), at(t)), claimed, "achieve-pp"))
}

/// Constructions for `D_(2p^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D2pkVariant {
    /// `p^(l + 2k)` for `l >= k`.
    Main { l: u32 },
    /// `x + 1`, determinant `4`.
    XPlusOne,
    /// `x^2 + x + 1 + y`, determinant `8`.
    Quad,
}

pub fn family_d2pk(p: u64, k: u32, variant: D2pkVariant) -> Result<Witness> {
    if p < 3 || p % 2 == 0 || k == 0 {
        return Err(invalid(format!("need odd prime p and k >= 1, got p = {p}, k = {k}")));
    }
    let n = p
        .checked_pow(k)
        .ok_or_else(|| invalid(format!("{p}^{k} overflows")))?;
    let w = match variant {
        D2pkVariant::Main { l } => {
            if l < k {
                return Err(invalid(format!("need l >= k, got l = {l}, k = {k}")));
            }
            let pl = p
                .checked_pow(l)
                .filter(|&v| v < 1 << 40)
                .ok_or_else(|| invalid(format!("{p}^{l} is too large")))?
                as i64;
            let f = geom(n, (pl + 1) / 2).add(&poly(n, &[(1, 1), (0, -1)]));
            let g = geom(n, (pl - 1) / 2).add(&poly(n, &[(0, 1), (-1, -1)]));
            let claimed = Pow::pow(big(p as i64), l + 2 * k);
            Witness::new(pair(f, g), claimed, "d2pk-power")
        }
        D2pkVariant::XPlusOne => Witness::new(
            pair(poly(n, &[(0, 1), (1, 1)]), CyclicElem::zero(n)),
            big(4),
            "d2pk-x+1",
        ),
        D2pkVariant::Quad => Witness::new(
            pair(poly(n, &[(0, 1), (1, 1), (2, 1)]), poly(n, &[(0, 1)])),
            big(8),
            "d2pk-quad",
        ),
    };
    Ok(w)
}

/// Constructions for `D_(4p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D4pVariant {
    /// `δ p^(k+2)` with `δ = 1` iff `p^k = 1 mod 4`.
    Delta { k: u32 },
    /// `x^2 + 1`: `2^4`.
    XSquaredPlusOne,
    /// `(x^p + 1) + y(x - 1)`: `-2^4`.
    MinusSixteen,
    /// `1 + x^2 + x(1 + x^p)`: `2^6`.
    SixtyFour,
    /// `1 - x^(p+2) + y(x^p + 1)(x + 1)`: `-2^6`.
    MinusSixtyFour,
    /// `±2^(l+6)`.
    Pow { l: u32, positive: bool },
}

pub fn family_d4p(p: u64, variant: D4pVariant) -> Result<Witness> {
    if p < 3 || p % 2 == 0 {
        return Err(invalid(format!("need an odd prime, got {p}")));
    }
    let n = 2 * p;
    let pi = p as i64;
    let zero = CyclicElem::zero(n);
    let w = match variant {
        D4pVariant::Delta { k } => {
            let pk = p
                .checked_pow(k)
                .filter(|&v| k >= 1 && v < 1 << 40)
                .ok_or_else(|| invalid(format!("unsupported k = {k} for p = {p}")))?
                as i64;
            let delta: i64 = if pk % 4 == 1 { 1 } else { -1 };
            let (a_len, b_len) = ((pk + delta) / 2, (pk - delta) / 4);
            let f = geom(n, a_len);
            let g = poly(n, &[(0, 1), (pi, 1)]).mul(&geom(n, b_len));
            let claimed = Pow::pow(big(pi), k + 2) * delta;
            Witness::new(pair(f, g), claimed, "d4p-delta")
        }
        D4pVariant::XSquaredPlusOne => {
            Witness::new(pair(poly(n, &[(0, 1), (2, 1)]), zero), big(16), "d4p-x2+1")
        }
        D4pVariant::MinusSixteen => Witness::new(
            pair(poly(n, &[(0, 1), (pi, 1)]), poly(n, &[(1, 1), (0, -1)])),
            big(-16),
            "d4p-neg16",
        ),
        D4pVariant::SixtyFour => Witness::new(
            pair(poly(n, &[(0, 1), (1, 1), (2, 1), (pi + 1, 1)]), zero),
            big(64),
            "d4p-64",
        ),
        D4pVariant::MinusSixtyFour => Witness::new(
            pair(
                poly(n, &[(0, 1), (pi + 2, -1)]),
                poly(n, &[(0, 1), (1, 1), (pi, 1), (pi + 1, 1)]),
            ),
            big(-64),
            "d4p-neg64",
        ),
        D4pVariant::Pow { l, positive } => {
            if l == 0 || l > 40 {
                return Err(invalid(format!("unsupported l = {l}")));
            }
            let s: i64 = if positive { 1 } else { -1 };
            let two_l = 1i64 << l;
            let (m, target) = [1i64, 3]
                .into_iter()
                .map(|m| (m, m * pi + s * two_l))
                .find(|&(_, v)| v.rem_euclid(4) == 1 && ((v - 1) / 2) % 2 == 0)
                .ok_or_else(|| {
                    invalid(format!(
                        "no m in {{1, 3}} with m*{p} {} 2^{l} = 1 mod 4 and t even",
                        if positive { "+" } else { "-" }
                    ))
                })?;
            let t = (target - 1) / 2;
            let q = poly(n, &[(0, 1), (1, 1), (2, 1), (pi + 1, 1)]);
            let tail = geom(n, 2 * pi).scale(&big(m));
            let f = q.mul(&geom(n, t + 1)).sub(&tail);
            let g = q.mul(&geom(n, t)).sub(&tail);
            let claimed = (BigInt::one() << (l + 6)) * s;
            Witness::new(pair(f, g), claimed, "d4p-pow2")
        }
    };
    Ok(w)
}

/// Constructions for `D_(2^k)`, i.e. `n = 2^(k-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D2powkVariant {
    /// `k = 2`: `1 + 4m`.
    Odd { m: i64 },
    /// `k = 2`: `2^4 (2m + 1)`.
    Sixteen { m: i64 },
    /// `k = 2`: `2^6 m`.
    SixtyFour { m: i64 },
    /// `k = 3`: `±2^8 (4c + 1)`.
    D8 { c: i64, positive: bool },
    /// `k = 4`: `±2^10`.
    D16Ten { positive: bool },
    /// `k = 4`: `±2^11`.
    D16Eleven { positive: bool },
    /// `k >= 3`: `2^(3k) m`.
    Lower { m: i64 },
    /// `2 + (1 - x)`, whose determinant has `v_2 = 2k + 2`.
    Valuation,
}

pub fn family_d2powk(k: u32, variant: D2powkVariant) -> Result<Witness> {
    if !(2..=40).contains(&k) {
        return Err(invalid(format!("need 2 <= k <= 40, got {k}")));
    }
    let n = 1u64 << (k - 1);
    let need = |want: u32| {
        if k == want {
            Ok(())
        } else {
            Err(invalid(format!("variant {variant:?} needs k = {want}, got {k}")))
        }
    };
    let x1 = |m: i64| poly(n, &[(0, m), (1, m)]);
    let w = match variant {
        D2powkVariant::Odd { m } => {
            need(2)?;
            Witness::new(pair(x1(m).add(&poly(n, &[(0, 1)])), x1(m)), big(1 + 4 * m), "d2powk-odd")
        }
        D2powkVariant::Sixteen { m } => {
            need(2)?;
            Witness::new(
                pair(x1(m).add(&poly(n, &[(0, 2)])), x1(m)),
                big(16 * (2 * m + 1)),
                "d2powk-16",
            )
        }
        D2powkVariant::SixtyFour { m } => {
            need(2)?;
            Witness::new(
                pair(x1(m - 1).add(&poly(n, &[(0, 3)])), x1(m - 1).add(&poly(n, &[(0, 1)]))),
                big(64 * m),
                "d2powk-64",
            )
        }
        D2powkVariant::D8 { c, positive } => {
            need(3)?;
            let g4 = geom(n, 4).scale(&big(c));
            let claimed = big(256 * (4 * c + 1) * if positive { 1 } else { -1 });
            let (f, g) = if positive {
                (g4.add(&poly(n, &[(0, 2)])), g4)
            } else {
                // (x^2 + 1)(x - 1) = x^3 - x^2 + x - 1
                (
                    g4.add(&poly(n, &[(3, 1), (2, -1), (1, 1), (0, -1)])),
                    g4.add(&poly(n, &[(0, 1), (1, 1)])),
                )
            };
            Witness::new(pair(f, g), claimed, "d2powk-d8")
        }
        D2powkVariant::D16Ten { positive } => {
            need(4)?;
            // (1 + x^2)(1 + x^4) = 1 + x^2 + x^4 + x^6
            let base = poly(n, &[(0, 1), (2, 1), (4, 1), (6, 1)]);
            let (f, g, v) = if positive {
                (base.add(&poly(n, &[(0, -1), (1, 1)])), CyclicElem::zero(n), 1024)
            } else {
                (
                    base.add(&poly(n, &[(3, 1), (2, -1), (1, 1), (0, -1)])),
                    poly(n, &[(1, 1), (0, -1)]),
                    -1024,
                )
            };
            Witness::new(pair(f, g), big(v), "d2powk-d16")
        }
        D2powkVariant::D16Eleven { positive } => {
            need(4)?;
            let g8 = geom(n, 8);
            let sq = poly(n, &[(0, 1), (2, 1)]);
            let lin = poly(n, &[(0, 1), (1, 1)]);
            let (f, g, v) = if positive {
                (sq.sub(&g8), lin, 2048)
            } else {
                (sq, lin.sub(&g8), -2048)
            };
            Witness::new(pair(f, g), big(v), "d2powk-d16")
        }
        D2powkVariant::Lower { m } => {
            if k < 3 {
                return Err(invalid("the 2^(3k) m family needs k >= 3"));
            }
            let gm = geom(n, n as i64).scale(&big(m));
            let f = gm.add(&poly(n, &[(0, 2)]));
            let g = poly(n, &[(0, 1), (1, 1)]).sub(&gm);
            let claimed = (BigInt::one() << (3 * k)) * m;
            Witness::new(pair(f, g), claimed, "d2powk-lower")
        }
        D2powkVariant::Valuation => Witness {
            elem: pair(poly(n, &[(0, 3), (1, -1)]), CyclicElem::zero(n)),
            claim: Claim::Valuation {
                prime: 2,
                exponent: 2 * k + 2,
            },
            provenance: "d2powk-val".into(),
        },
    };
    Ok(w)
}

/// `p^5` on `D_(2p^2)` for `p` in `{3, 5, 7}`.
pub fn family_d2p2(p: u64) -> Result<Witness> {
    if ![3, 5, 7].contains(&p) {
        return Err(invalid(format!("the p^5 construction is stated for p in {{3, 5, 7}}, got {p}")));
    }
    let n = p * p;
    let f = geom(n, (p as i64 + 1) / 2);
    let g = f.sub(&poly(n, &[(p as i64 - 1, 1)]));
    Ok(Witness::new(pair(f, g), Pow::pow(big(p as i64), 5u32), "d2p2-p5"))
}

/// `pA + B(x - 1)` on `D_(2p^k)`, whose determinant has `v_p = 2k + 1`
/// when `p` divides neither `A` nor `B`.
pub fn valuation_witness(p: u64, k: u32, a: i64, b: i64) -> Result<Witness> {
    if p < 3 || p % 2 == 0 || k == 0 {
        return Err(invalid(format!("need odd prime p and k >= 1, got p = {p}, k = {k}")));
    }
    let pi = p as i64;
    if a % pi == 0 || b % pi == 0 {
        return Err(invalid(format!("{p} divides A = {a} or B = {b}")));
    }
    let n = p
        .checked_pow(k)
        .ok_or_else(|| invalid(format!("{p}^{k} overflows")))?;
    let f = poly(n, &[(0, pi * a - b), (1, b)]);
    Ok(Witness {
        elem: pair(f, CyclicElem::zero(n)),
        claim: Claim::Valuation {
            prime: p,
            exponent: 2 * k + 1,
        },
        provenance: "valuation-pA+B(x-1)".into(),
    })
}

/// Group-ring product of the elements; the claims multiply.
pub fn compose(ws: &[Witness]) -> Result<Witness> {
    let (first, rest) = ws
        .split_first()
        .ok_or_else(|| invalid("nothing to compose"))?;
    let mut out = first.clone();
    for w in rest {
        if w.n() != out.n() {
            return Err(Error::GroupMismatch(format!(
                "D_{} and D_{}",
                2 * out.n(),
                2 * w.n()
            )));
        }
        out.elem = out.elem.mul(&w.elem)?;
        out.claim = multiply_claims(&out.claim, &w.claim)?;
        out.provenance = format!("{}*{}", out.provenance, w.provenance);
    }
    Ok(out)
}

fn multiply_claims(x: &Claim, y: &Claim) -> Result<Claim> {
    use Claim::*;
    let val = |v: &BigInt, p: u64| {
        valuation(v, p).ok_or_else(|| invalid("valuation of a zero claim is undefined"))
    };
    Ok(match (x, y) {
        (Value(a), Value(b)) => Value(a * b),
        (Valuation { prime: p, exponent: e }, Valuation { prime: q, exponent: f }) if p == q => {
            Valuation {
                prime: *p,
                exponent: e + f,
            }
        }
        (Valuation { prime, exponent }, Value(v)) | (Value(v), Valuation { prime, exponent }) => {
            Valuation {
                prime: *prime,
                exponent: exponent + val(v, *prime)?,
            }
        }
        _ => return Err(invalid("cannot combine valuation claims at different primes")),
    })
}

#[derive(Serialize, Deserialize)]
struct RawValuation {
    prime: u64,
    exponent: u32,
}

/// Integers up to 64 bits are written as JSON numbers, larger ones as strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Text(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        v.to_i64()
            .map_or_else(|| JsonInt::Text(v.to_string()), JsonInt::Small)
    }
}

impl JsonInt {
    fn to_big(&self) -> std::result::Result<BigInt, String> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Text(s) => BigInt::from_str(s.trim()).map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawWitness {
    n: u64,
    a: Vec<JsonInt>,
    b: Vec<JsonInt>,
    claimed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valuation: Option<RawValuation>,
    provenance: String,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ints = |c: &CyclicElem| c.to_trimmed().iter().map(JsonInt::from).collect();
        let (claimed, val) = match &self.claim {
            Claim::Value(v) => (Some(v.to_string()), None),
            Claim::Valuation { prime, exponent } => (
                None,
                Some(RawValuation {
                    prime: *prime,
                    exponent: *exponent,
                }),
            ),
        };
        RawWitness {
            n: self.n(),
            a: ints(&self.elem.a),
            b: ints(&self.elem.b),
            claimed,
            valuation: val,
            provenance: self.provenance.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawWitness::deserialize(d)?;
        if raw.n == 0 {
            return Err(D::Error::custom("n must be positive"));
        }
        let block = |v: &[JsonInt]| -> std::result::Result<CyclicElem, D::Error> {
            let coeffs = v
                .iter()
                .map(JsonInt::to_big)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            CyclicElem::from_dense(raw.n, &coeffs).map_err(D::Error::custom)
        };
        let elem = pair(block(&raw.a)?, block(&raw.b)?);
        let claim = match (raw.claimed, raw.valuation) {
            (Some(c), None) => Claim::Value(
                BigInt::from_str(c.trim()).map_err(|e| D::Error::custom(format!("claimed: {e}")))?,
            ),
            (None, Some(v)) => Claim::Valuation {
                prime: v.prime,
                exponent: v.exponent,
            },
            _ => return Err(D::Error::custom("exactly one of `claimed` and `valuation` is required")),
        };
        Ok(Witness {
            elem,
            claim,
            provenance: raw.provenance,
        })
    }
}

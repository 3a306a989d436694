//! Group determinants (Lind-Mahler measures) for cyclic, abelian and dihedral
//! groups.
//!
//! Elements of `Z[x]/(x^n - 1)` and of the dihedral group ring are stored
//! sparsely so that witnesses for very large `n` stay small. The cyclic
//! measure is `M(f) = Res(x^n - 1, f) = prod_{w^n = 1} f(w)`, sign included.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::groupalg::{build_cayley, Assignment, CayleyTable, GroupSpec};
use crate::intpoly::{cyclotomic, resultant, IntPoly};

/// Above this modulus the direct subresultant against `x^n - 1` is replaced
/// by a per-divisor or compact-support computation.
pub const DIRECT_THRESHOLD: u64 = 512;
/// Largest modulus for which dense per-divisor evaluation is attempted.
pub const DENSE_LIMIT: u64 = 1 << 15;
/// Largest determinant computed by elimination on the Cayley matrix.
pub const CAYLEY_ORDER_LIMIT: usize = 64;
/// Compact-support strategy applies when the support fits in this degree.
const COMPACT_DEGREE_LIMIT: usize = 512;
/// Coefficient growth budget (bits) for `x^n mod P`.
const POWMOD_BIT_BUDGET: u64 = 1 << 14;
/// Refuse to form `c^n` beyond this many bits.
const RESULT_BIT_LIMIT: u64 = 1 << 26;

/// Class of a polynomial modulo `x^n - 1`, stored by its non-zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicElem {
    n: u64,
    terms: BTreeMap<u64, BigInt>,
}

impl CyclicElem {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        CyclicElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Dense coefficients `a_0, ..., a_{k-1}` with `k <= n`; missing entries are zero.
    pub fn from_dense(n: u64, coeffs: &[BigInt]) -> Result<Self> {
        if coeffs.len() as u64 > n {
            return Err(Error::LengthMismatch {
                expected: n as usize,
                actual: coeffs.len(),
            });
        }
        let mut e = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            e.add_term(i as i64, c.clone());
        }
        Ok(e)
    }

    pub fn from_i64(n: u64, coeffs: &[i64]) -> Result<Self> {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_dense(n, &big)
    }

    /// Reduces a Laurent polynomial given as `(exponent, coefficient)` pairs.
    pub fn from_laurent<I>(n: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let mut e = Self::zero(n);
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    pub fn from_poly(n: u64, p: &IntPoly) -> Self {
        Self::from_laurent(
            n,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, c.clone())),
        )
    }

    /// Adds `c x^k`, reducing the exponent modulo `n`.
    pub fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let k = k.rem_euclid(self.n as i64) as u64;
        let slot = self.terms.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: u64) -> BigInt {
        self.terms.get(&(i % self.n)).cloned().unwrap_or_default()
    }

    /// Non-zero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Full coefficient vector of length `n`.
    pub fn to_dense(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n as usize];
        for (k, c) in &self.terms {
            v[*k as usize] = c.clone();
        }
        v
    }

    /// Coefficients up to the last non-zero one.
    pub fn to_trimmed(&self) -> Vec<BigInt> {
        let len = self.terms.keys().next_back().map_or(0, |&k| k as usize + 1);
        let mut v = vec![BigInt::zero(); len];
        for (k, c) in &self.terms {
            v[*k as usize] = c.clone();
        }
        v
    }

    /// `f(x^-1)`: coefficient `i` moves to `(n - i) mod n`.
    pub fn involution(&self) -> Self {
        let n = self.n;
        CyclicElem {
            n,
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| ((n - k) % n, c.clone()))
                .collect(),
        }
    }

    /// `x^k f`
    pub fn shift(&self, k: i64) -> Self {
        Self::from_laurent(
            self.n,
            self.terms.iter().map(|(&e, c)| (e as i64 + k, c.clone())),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        CyclicElem {
            n: self.n,
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "modulus mismatch");
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k as i64, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "modulus mismatch");
        let n = self.n;
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                let k = ((i as u128 + j as u128) % n as u128) as u64;
                *acc.entry(k).or_default() += a * b;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        CyclicElem { n, terms: acc }
    }

    /// Sum of coefficients, i.e. the value at `x = 1`.
    pub fn sum(&self) -> BigInt {
        self.terms.values().sum()
    }
}

/// `F = f(x) + y g(x)` in `Z[D_2n]`: `a` holds the rotation coefficients and
/// `b` the reflection coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DihedralElem {
    pub a: CyclicElem,
    pub b: CyclicElem,
}

impl DihedralElem {
    pub fn new(a: CyclicElem, b: CyclicElem) -> Result<Self> {
        if a.n != b.n {
            return Err(Error::GroupMismatch(format!(
                "rotation block has n = {}, reflection block has n = {}",
                a.n, b.n
            )));
        }
        Ok(DihedralElem { a, b })
    }

    pub fn zero(n: u64) -> Self {
        DihedralElem {
            a: CyclicElem::zero(n),
            b: CyclicElem::zero(n),
        }
    }

    pub fn from_i64(n: u64, a: &[i64], b: &[i64]) -> Result<Self> {
        Self::new(CyclicElem::from_i64(n, a)?, CyclicElem::from_i64(n, b)?)
    }

    pub fn n(&self) -> u64 {
        self.a.n
    }

    /// Assignment in the fixed dihedral indexing (rotations, then reflections).
    pub fn to_assignment(&self) -> Assignment {
        let mut v = self.a.to_dense();
        v.extend(self.b.to_dense());
        Assignment(v)
    }

    pub fn from_assignment(n: u64, a: &Assignment) -> Result<Self> {
        if a.len() as u64 != 2 * n {
            return Err(Error::LengthMismatch {
                expected: 2 * n as usize,
                actual: a.len(),
            });
        }
        let (lo, hi) = a.0.split_at(n as usize);
        Self::new(CyclicElem::from_dense(n, lo)?, CyclicElem::from_dense(n, hi)?)
    }

    /// Exchanges the two blocks, i.e. left multiplication by `y`.
    pub fn swapped(&self) -> Self {
        DihedralElem {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// Group-ring product using `x^j y = y x^(-j)`:
    /// `(f1 + y g1)(f2 + y g2) = f1 f2 + g1~ g2 + y (f1~ g2 + g1 f2)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::GroupMismatch(format!(
                "D_{} and D_{}",
                2 * self.n(),
                2 * other.n()
            )));
        }
        let a = self.a.mul(&other.a).add(&self.b.involution().mul(&other.b));
        let b = self.a.involution().mul(&other.b).add(&self.b.mul(&other.a));
        Ok(DihedralElem { a, b })
    }

    /// `f f~ - g g~`, whose cyclic measure is the dihedral measure.
    pub fn norm_form(&self) -> CyclicElem {
        let ff = self.a.mul(&self.a.involution());
        let gg = self.b.mul(&self.b.involution());
        ff.sub(&gg)
    }
}

/// Reduces `sum c y^i x^j` (each term written with `y` first) into the
/// canonical `f(x) + y g(x)` form, using `y^2 = 1` and `x^n = 1`.
pub fn normalize_bivariate(terms: &[(BigInt, i64, i64)], n: u64) -> DihedralElem {
    let mut e = DihedralElem::zero(n);
    for (c, i, j) in terms {
        if i.rem_euclid(2) == 0 {
            e.a.add_term(*j, c.clone());
        } else {
            e.b.add_term(*j, c.clone());
        }
    }
    e
}

/// A monomial word such as `x^2 y x^-1`, reduced left to right with
/// `x^j y = y x^(-j)`. Each factor is `('x', e)` or `('y', e)`.
/// Returns `(y exponent mod 2, x exponent)`.
pub fn reduce_word(word: &[(char, i64)]) -> (i64, i64) {
    let (mut ye, mut xe) = (0i64, 0i64);
    for &(v, e) in word {
        match v {
            'x' => xe += e,
            'y' => {
                if e.rem_euclid(2) == 1 {
                    ye ^= 1;
                    xe = -xe;
                }
            }
            _ => panic!("unknown variable {v}"),
        }
    }
    (ye, xe)
}

/// Strategy for [`cyclic_measure_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// One subresultant computation against `x^n - 1`.
    Direct,
    /// `prod_{d | n} Res(Phi_d, f mod Phi_d)`.
    Divisor,
    /// Writes `f = x^s P` with `P` of small degree and reduces `x^n - 1`
    /// modulo `P` by repeated squaring.
    Compact,
}

/// `M_{Z_n}(f) = prod_{w^n = 1} f(w)`; zero for the zero class.
pub fn cyclic_measure(f: &CyclicElem) -> Result<BigInt> {
    if f.is_zero() {
        return Ok(BigInt::zero());
    }
    if f.n <= DIRECT_THRESHOLD {
        return cyclic_measure_with(f, Strategy::Direct);
    }
    match compact_measure(f)? {
        Some(v) => Ok(v),
        None if f.n <= DENSE_LIMIT => cyclic_measure_with(f, Strategy::Divisor),
        None => Err(Error::TooLarge(format!(
            "n = {} with a support that is neither compact nor dense-sized",
            f.n
        ))),
    }
}

pub fn cyclic_measure_with(f: &CyclicElem, strategy: Strategy) -> Result<BigInt> {
    if f.is_zero() {
        return Ok(BigInt::zero());
    }
    match strategy {
        Strategy::Direct => {
            check_dense(f.n)?;
            let h = IntPoly::from_coeffs(f.to_dense());
            resultant(&IntPoly::x_pow_minus_one(f.n as usize), &h)
        }
        Strategy::Divisor => {
            check_dense(f.n)?;
            let dense = f.to_dense();
            let mut acc = BigInt::one();
            for d in arith::divisors(f.n) {
                let v = divisor_factor(&dense, d)?;
                if v.is_zero() {
                    return Ok(v);
                }
                acc *= v;
            }
            Ok(acc)
        }
        Strategy::Compact => compact_measure(f)?.ok_or_else(|| {
            Error::TooLarge("support is not compact enough for the compact strategy".into())
        }),
    }
}

fn check_dense(n: u64) -> Result<()> {
    if n > DENSE_LIMIT {
        Err(Error::TooLarge(format!("dense evaluation at n = {n}")))
    } else {
        Ok(())
    }
}

/// `Res(Phi_d, f)` from the dense coefficient vector of `f` modulo `x^n - 1`.
fn divisor_factor(dense: &[BigInt], d: u64) -> Result<BigInt> {
    let d = d as usize;
    let mut folded = vec![BigInt::zero(); d];
    for (i, c) in dense.iter().enumerate() {
        if !c.is_zero() {
            folded[i % d] += c;
        }
    }
    let phi = cyclotomic(d as u64);
    let r = IntPoly::from_coeffs(folded).rem_unit(&phi);
    if r.is_zero() {
        return Ok(BigInt::zero());
    }
    resultant(&phi, &r)
}

/// Smallest cyclic arc containing the support: `f = x^start P(x)` with
/// `deg P = span`.
fn compact_arc(f: &CyclicElem) -> Option<(u64, u64)> {
    let keys: Vec<u64> = f.terms.keys().copied().collect();
    let (&first, &last) = (keys.first()?, keys.last()?);
    let mut best_gap = f.n - last + first;
    let mut start = first;
    for w in keys.windows(2) {
        let gap = w[1] - w[0];
        if gap > best_gap {
            best_gap = gap;
            start = w[1];
        }
    }
    Some((start, f.n - best_gap))
}

/// Sign of `(prod_{w^n = 1} w)^k = (-1)^((n + 1) k)`.
fn root_product_sign_negative(n: u64, k: u64) -> bool {
    n % 2 == 0 && k % 2 == 1
}

fn compact_measure(f: &CyclicElem) -> Result<Option<BigInt>> {
    let n = f.n;
    let Some((start, span)) = compact_arc(f) else {
        return Ok(Some(BigInt::zero()));
    };
    if span as usize > COMPACT_DEGREE_LIMIT || span > n / 2 {
        return Ok(None);
    }
    let mut coeffs = vec![BigInt::zero(); span as usize + 1];
    for (&k, c) in &f.terms {
        coeffs[((k + n - start) % n) as usize] = c.clone();
    }
    let p = IntPoly::from_coeffs(coeffs);
    let mut negative = root_product_sign_negative(n, start);

    if span == 0 {
        let c = p.leading_coeff().unwrap();
        if c.bits().saturating_mul(n) > RESULT_BIT_LIMIT {
            return Err(Error::TooLarge(format!("{c}^{n}")));
        }
        let v: BigInt = Pow::pow(c, n);
        return Ok(Some(if negative { -v } else { v }));
    }

    let lc_unit = p.leading_coeff().unwrap().abs().is_one();
    let ct_unit = p.coeffs()[0].abs().is_one();
    let target = if lc_unit {
        p
    } else if ct_unit {
        // prod P(w) = (prod w)^D prod P*(w)
        negative ^= root_product_sign_negative(n, span);
        p.reversed()
    } else {
        return Ok(None);
    };
    match res_xn_minus_one_unit(n, &target) {
        Some(v) => Ok(Some(if negative { -v } else { v })),
        None => Ok(None),
    }
}

/// `Res(x^n - 1, P)` for `P` with unit leading coefficient and degree >= 1.
/// `None` if `x^n mod P` exceeds the coefficient budget.
fn res_xn_minus_one_unit(n: u64, p: &IntPoly) -> Option<BigInt> {
    let d = p.degree().unwrap() as u64;
    let lc_negative = p.leading_coeff().unwrap().is_negative();

    let mut result = IntPoly::one();
    let mut base = IntPoly::monomial(BigInt::one(), 1).rem_unit(p);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = (&result * &base).rem_unit(p);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).rem_unit(p);
        }
        if result.max_bits() > POWMOD_BIT_BUDGET || base.max_bits() > POWMOD_BIT_BUDGET {
            return None;
        }
    }
    let r = &result - &IntPoly::one();
    if r.is_zero() {
        return Some(BigInt::zero());
    }
    // Res(P, A) = lc(P)^(deg A - deg R) Res(P, R) for R = A mod P.
    let deg_r = r.degree().unwrap() as u64;
    let mut v = resultant(p, &r).ok()?;
    if lc_negative && (n - deg_r) % 2 == 1 {
        v = -v;
    }
    // Res(x^n - 1, P) = (-1)^(n d) Res(P, x^n - 1)
    if (n % 2 == 1) && (d % 2 == 1) {
        v = -v;
    }
    Some(v)
}

/// `M_{D_2n}(f + y g) = M_{Z_n}(f f~ - g g~)`.
pub fn dihedral_measure(e: &DihedralElem) -> Result<BigInt> {
    cyclic_measure(&e.norm_form())
}

/// Determinant of `M[i][j] = a[g_i g_j^-1]` by fraction-free elimination.
pub fn cayley_determinant(table: &CayleyTable, a: &Assignment) -> Result<BigInt> {
    let n = table.order();
    if n > CAYLEY_ORDER_LIMIT {
        return Err(Error::OrderTooLarge {
            order: n,
            limit: CAYLEY_ORDER_LIMIT,
        });
    }
    if a.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: a.len(),
        });
    }
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a.0[table.mul(i, table.inv(j))].clone())
                .collect()
        })
        .collect();
    Ok(bareiss_determinant(m))
}

/// Bareiss fraction-free Gaussian elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Measure over `Z_{n1} x ... x Z_{nr}`; the assignment is indexed in mixed
/// radix with the last factor varying fastest.
pub fn abelian_measure(a: &Assignment, dims: &[usize]) -> Result<BigInt> {
    let spec = GroupSpec::AbelianProduct(dims.to_vec());
    spec.validate()?;
    if a.len() != spec.order() {
        return Err(Error::LengthMismatch {
            expected: spec.order(),
            actual: a.len(),
        });
    }
    if spec.order() > CAYLEY_ORDER_LIMIT {
        return Err(Error::OrderTooLarge {
            order: spec.order(),
            limit: CAYLEY_ORDER_LIMIT,
        });
    }
    cayley_determinant(&build_cayley(&spec)?, a)
}

/// Measure of an assignment on any supported group, dispatching to the
/// closed-form route where one exists.
pub fn group_measure(spec: &GroupSpec, a: &Assignment) -> Result<BigInt> {
    spec.validate()?;
    match spec {
        GroupSpec::Cyclic(n) => cyclic_measure(&CyclicElem::from_dense(*n as u64, &a.0).and_then(
            |e| {
                if a.len() == *n {
                    Ok(e)
                } else {
                    Err(Error::LengthMismatch {
                        expected: *n,
                        actual: a.len(),
                    })
                }
            },
        )?),
        GroupSpec::Dihedral(n) => dihedral_measure(&DihedralElem::from_assignment(*n as u64, a)?),
        GroupSpec::AbelianProduct(dims) => abelian_measure(a, dims),
        GroupSpec::Explicit(t) => cayley_determinant(t, a),
    }
}

/// `(1 / order) ln |v|`
pub fn log_measure(v: &BigInt, order: u64) -> Result<f64> {
    if v.is_zero() {
        return Err(Error::MeasureOfZero);
    }
    Ok(ln_abs(v) / order as f64)
}

fn ln_abs(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Floating-point evaluation of the dihedral determinant through its
/// factorization into linear factors and squared real quadratics
/// `Q(w) = |f(w)|^2 - |g(w)|^2`. A cross-check only; no error bound.
pub fn approx_factored_dihedral(e: &DihedralElem) -> (f64, Vec<f64>) {
    let n = e.n();
    let f = to_f64_terms(&e.a);
    let g = to_f64_terms(&e.b);
    let sum = |t: &[(u64, f64)]| t.iter().map(|&(_, c)| c).sum::<f64>();
    let alt = |t: &[(u64, f64)]| {
        t.iter()
            .map(|&(k, c)| if k % 2 == 0 { c } else { -c })
            .sum::<f64>()
    };
    let (sa, sb) = (sum(&f), sum(&g));
    let mut factors = vec![sa + sb, sa - sb];
    if n % 2 == 0 {
        let (aa, ab) = (alt(&f), alt(&g));
        factors.push(aa + ab);
        factors.push(aa - ab);
    }
    let quadratics = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for j in 1..=quadratics {
        let q = norm_sq_at(&f, n, j) - norm_sq_at(&g, n, j);
        factors.push(q * q);
    }
    (factors.iter().product(), factors)
}

fn to_f64_terms(c: &CyclicElem) -> Vec<(u64, f64)> {
    c.terms
        .iter()
        .map(|(&k, v)| (k, v.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

/// `|sum c_k w^(jk)|^2` at `w = exp(2 pi i / n)`.
fn norm_sq_at(t: &[(u64, f64)], n: u64, j: u64) -> f64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for &(k, c) in t {
        let r = ((k as u128 * j as u128) % n as u128) as f64;
        let theta = std::f64::consts::TAU * r / n as f64;
        re += c * theta.cos();
        im += c * theta.sin();
    }
    re * re + im * im
}

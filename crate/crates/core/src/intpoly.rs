//! Dense univariate polynomials over Z with arbitrary-precision coefficients.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies `x^i`)
//! and are always normalized so that the last stored coefficient is
//! non-zero. The zero polynomial is the empty vector and has no degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += BigInt::one();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_exact_scalar(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `x^D p(1/x)` where `D` is the degree.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(c)
    }

    /// Largest coefficient size in bits.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Quotient and remainder by a divisor whose leading coefficient is a unit.
    pub fn div_rem_unit(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading_coeff().unwrap();
        assert!(lc.abs().is_one(), "divisor must have unit leading coefficient");
        let Some(da) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if da < dd {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - dd + 1];
        for k in (0..=da - dd).rev() {
            let c = &r[k + dd] * lc;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem_unit(&self, d: &IntPoly) -> IntPoly {
        self.div_rem_unit(d).1
    }

    /// Pseudo-remainder: `R` with `lc(d)^(deg self - deg d + 1) * self = Q d + R`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo-division by the zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < dd {
            return self.clone();
        }
        let lc = d.leading_coeff().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut remaining = (da - dd + 1) as u32;
        let mut top = da;
        loop {
            while top >= dd && r[top].is_zero() {
                if top == 0 {
                    break;
                }
                top -= 1;
            }
            if top < dd || r[top].is_zero() {
                break;
            }
            let lr = r[top].clone();
            let shift = top - dd;
            for c in r.iter_mut().take(top + 1) {
                *c *= &lc;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    r[shift + j] -= &lr * dj;
                }
            }
            debug_assert!(r[top].is_zero());
            remaining -= 1;
            if top == 0 {
                break;
            }
            top -= 1;
        }
        let mut rem = Self::from_coeffs(r);
        if remaining > 0 {
            rem = rem.scale(&Pow::pow(&lc, remaining));
        }
        rem
    }

    /// `self(x^k)`
    pub fn compose_x_pow(&self, k: usize) -> IntPoly {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut coeffs = vec![BigInt::zero(); d * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn add_vecs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(if negate_b { x - y } else { x + y });
    }
    IntPoly::from_coeffs(out)
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        add_vecs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        add_vecs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// The m-th cyclotomic polynomial.
///
/// Built from `Phi_1 = x - 1` by the exact divisions
/// `Phi_{qp}(x) = Phi_q(x^p) / Phi_q(x)` over the distinct primes of `m`,
/// followed by `Phi_m(x) = Phi_rad(x^(m / rad))`.
pub fn cyclotomic(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut phi = IntPoly::from_i64(&[-1, 1]);
    let mut rad = 1u64;
    for (p, _) in arith::small_factor(m) {
        let lifted = phi.compose_x_pow(p as usize);
        let (q, r) = lifted.div_rem_unit(&phi);
        debug_assert!(r.is_zero());
        phi = q;
        rad *= p;
    }
    phi.compose_x_pow((m / rad) as usize)
}

/// Exact resultant `Res(p, q) = lc(p)^deg(q) * prod_{p(a) = 0} q(a)`,
/// computed with the subresultant pseudo-remainder sequence.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Err(Error::UndefinedResultant);
    };
    if dp == 0 {
        return Ok(Pow::pow(p.leading_coeff().unwrap(), dq as u64));
    }
    if dq == 0 {
        return Ok(Pow::pow(q.leading_coeff().unwrap(), dp as u64));
    }

    let ca = p.content();
    let cb = q.content();
    let mut a = p.div_exact_scalar(&ca);
    let mut b = q.div_exact_scalar(&cb);
    let t = Pow::pow(&ca, dq as u64) * Pow::pow(&cb, dp as u64);
    let mut sign_negative = false;
    if dp < dq {
        std::mem::swap(&mut a, &mut b);
        if dp % 2 == 1 && dq % 2 == 1 {
            sign_negative = true;
        }
    }

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let divisor = &g * Pow::pow(&h, delta);
        b = r.div_exact_scalar(&divisor);
        g = a.leading_coeff().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let num = Pow::pow(&g, delta);
                let den = Pow::pow(&h, delta - 1);
                debug_assert!((&num % &den).is_zero());
                num / den
            }
        };
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().unwrap() as u32;
    let lb = b.leading_coeff().unwrap();
    let h_final = if da == 0 {
        h
    } else {
        let num = Pow::pow(lb, da);
        let den = Pow::pow(&h, da - 1);
        debug_assert!((&num % &den).is_zero());
        num / den
    };
    let res = t * h_final;
    Ok(if sign_negative { -res } else { res })
}

/// `|Res(Phi_n, Phi_m)|` for `n < m`: `p^phi(n)` when `m / n` is a power
/// of the prime `p`, otherwise 1.
pub fn cyclo_resultant_closed(n: u64, m: u64) -> Result<BigUint> {
    if n == 0 || n >= m {
        return Err(Error::OrderViolation { n, m });
    }
    if m % n == 0 {
        if let Some((p, _)) = arith::prime_power(m / n) {
            return Ok(Pow::pow(BigUint::from(p), arith::totient(n)));
        }
    }
    Ok(BigUint::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p(&[1, 1]) + &p(&[-1, 1]), p(&[0, 2]));
        assert_eq!(&p(&[3, 0, 1]) + &IntPoly::zero(), p(&[3, 0, 1]));
        assert_eq!(&p(&[1, 0, 1]) + &p(&[0, 0, -1]), p(&[1]));
        assert_eq!((&p(&[1, 0, 1]) + &p(&[0, 0, -1])).degree(), Some(0));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert!((&p(&[1, 2, 3]) * &IntPoly::zero()).is_zero());
        let prod = [1, 2, 3, 6]
            .iter()
            .fold(IntPoly::one(), |acc, &d| &acc * &cyclotomic(d));
        assert_eq!(prod, IntPoly::x_pow_minus_one(6));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(IntPoly::zero().degree(), None);
        assert_eq!(p(&[0, 0, 0]), IntPoly::zero());
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(12).to_string(), "x^4 - x^2 + 1");
        // Phi_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic(105).coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        for m in 1..=200u64 {
            assert_eq!(cyclotomic(m).degree(), Some(arith::totient(m) as usize));
        }
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[1, 1])).unwrap(), BigInt::from(2));
        let r = resultant(&cyclotomic(2), &cyclotomic(6)).unwrap();
        assert_eq!(r.abs(), BigInt::from(3));
        assert!(resultant(&p(&[1, 0, 1]), &p(&[-1, 0, 0, 0, 1])).unwrap().is_zero());
        assert_eq!(
            resultant(&IntPoly::zero(), &p(&[1, 1])),
            Err(Error::UndefinedResultant)
        );
    }

    #[test]
    fn resultant_with_constants() {
        assert_eq!(resultant(&p(&[3]), &p(&[1, 2, 1])).unwrap(), BigInt::from(9));
        assert_eq!(resultant(&p(&[1, 2, 1]), &p(&[-2])).unwrap(), BigInt::from(4));
        // Res(x^5 - 1, 2) = 2^5
        assert_eq!(
            resultant(&IntPoly::x_pow_minus_one(5), &p(&[2])).unwrap(),
            BigInt::from(32)
        );
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(cyclo_resultant_closed(1, 9).unwrap(), BigUint::from(3u32));
        assert_eq!(cyclo_resultant_closed(3, 5).unwrap(), BigUint::from(1u32));
        assert_eq!(cyclo_resultant_closed(2, 6).unwrap(), BigUint::from(3u32));
        assert_eq!(
            cyclo_resultant_closed(6, 6),
            Err(Error::OrderViolation { n: 6, m: 6 })
        );
    }

    #[test]
    fn pseudo_rem_identity() {
        // d = 3x^2 - 3 vanishes at 1 and -1, so lc^k a - R must too.
        let a = p(&[5, -3, 0, 7, 2]);
        let d = p(&[-3, 0, 3]);
        let r = a.pseudo_rem(&d);
        assert!(r.degree().map_or(true, |x| x < 2));
        let lhs = &a.scale(&BigInt::from(27)) - &r;
        assert!(lhs.eval(&BigInt::one()).is_zero());
        assert!(lhs.eval(&BigInt::from(-1)).is_zero());
        // unit leading coefficient: pseudo-remainder equals the remainder
        let m = p(&[1, 0, 1]);
        assert_eq!(a.pseudo_rem(&m), a.rem_unit(&m));
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-5i64..=5, 1..=9).prop_map(|v| IntPoly::from_i64(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn resultant_swap_sign(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            let ab = resultant(&a, &b).unwrap();
            let ba = resultant(&b, &a).unwrap();
            let expected = if (da * db) % 2 == 1 { -ba } else { ba };
            prop_assert_eq!(ab, expected);
        }

        #[test]
        fn mul_commutative_associative(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn div_rem_unit_reconstructs(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let mut d = b.into_coeffs();
            d.push(BigInt::one());
            let d = IntPoly::from_coeffs(d);
            let (q, r) = a.div_rem_unit(&d);
            prop_assert_eq!(&(&q * &d) + &r, a);
            prop_assert!(r.degree().map_or(true, |x| x < d.degree().unwrap()));
        }
    }
}

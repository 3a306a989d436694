//! Library results against slow, independently written reference
//! computations: rational Gaussian elimination, Sylvester matrices, long
//! division and trial-division factoring.

use gdet::measure::{cyclic_measure_with, group_measure, Strategy};
use gdet::witness;
use gdet::{
    abelian_measure, cayley_determinant, cyclic_measure, cyclo_resultant_closed, cyclotomic,
    dihedral_measure, resultant, Assignment, CyclicElem, DihedralElem, Factorization, GroupSpec,
    IntPoly,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn int(v: BigInt) -> Self {
        Frac { num: v, den: BigInt::one() }
    }
    fn norm(num: BigInt, den: BigInt) -> Self {
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() { (num, den) } else { (num / &g, den / &g) };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Frac { num, den }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn sub_mul(&self, a: &Frac, b: &Frac) -> Frac {
        // self - a * b
        let num = &self.num * &a.den * &b.den - &a.num * &b.num * &self.den;
        Frac::norm(num, &self.den * &a.den * &b.den)
    }
    fn div(&self, o: &Frac) -> Frac {
        Frac::norm(&self.num * &o.den, &self.den * &o.num)
    }
    fn mul(&self, o: &Frac) -> Frac {
        Frac::norm(&self.num * &o.num, &self.den * &o.den)
    }
}

/// Determinant by Gaussian elimination over the rationals.
fn rational_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<Frac>> = m
        .iter()
        .map(|r| r.iter().map(|v| Frac::int(v.clone())).collect())
        .collect();
    let mut det = Frac::int(BigInt::one());
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            det.num = -det.num;
        }
        det = det.mul(&a[c][c]);
        for r in c + 1..n {
            let factor = a[r][c].div(&a[c][c]);
            for k in c..n {
                let v = a[r][k].sub_mul(&factor, &a[c][k]);
                a[r][k] = v;
            }
        }
    }
    assert!(det.den.is_one());
    det.num
}

fn sylvester(p: &[i64], q: &[i64]) -> Vec<Vec<BigInt>> {
    // coefficient slices are low-to-high
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, &c) in p.iter().rev().enumerate() {
            r[i + j] = BigInt::from(c);
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, &c) in q.iter().rev().enumerate() {
            r[i + j] = BigInt::from(c);
        }
        rows.push(r);
    }
    rows
}

fn random_poly(r: &mut ChaCha8Rng, deg: usize, bound: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..=deg).map(|_| r.gen_range(-bound..=bound)).collect();
    if v[deg] == 0 {
        v[deg] = 1;
    }
    v
}

#[test]
fn resultant_matches_sylvester_determinant() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let (dp, dq) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let p = random_poly(&mut r, dp, 5);
        let q = random_poly(&mut r, dq, 5);
        let want = rational_det(&sylvester(&p, &q));
        let got = resultant(&IntPoly::from_i64(&p), &IntPoly::from_i64(&q)).unwrap();
        assert_eq!(got, want, "p = {p:?}, q = {q:?}");
    }
}

/// Long division over i64, exact by construction for monic divisors.
fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd].abs(), 1);
    let mut quo = vec![0i64; num.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd] / den[dd];
        quo[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division is not exact");
    quo
}

#[test]
fn cyclotomic_matches_divisor_quotients() {
    let mut phis: Vec<Vec<i64>> = vec![vec![]];
    for n in 1..=210usize {
        let mut p = vec![0i64; n + 1];
        p[0] = -1;
        p[n] = 1;
        for d in 1..n {
            if n % d == 0 {
                p = divide_exact(&p, &phis[d]);
            }
        }
        let got: Vec<i64> = cyclotomic(n as u64)
            .coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        assert_eq!(got, p, "Phi_{n}");
        phis.push(p);
    }
}

#[test]
fn closed_form_matches_sylvester_for_small_pairs() {
    for n in 1..=12u64 {
        for m in n + 1..=14 {
            let p: Vec<i64> = cyclotomic(n).coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect();
            let q: Vec<i64> = cyclotomic(m).coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect();
            let want = rational_det(&sylvester(&p, &q));
            let got = cyclo_resultant_closed(n, m).unwrap();
            assert_eq!(&got, want.magnitude(), "n = {n}, m = {m}");
        }
    }
}

fn circulant(a: &[i64]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(a[(i + n - j) % n])).collect())
        .collect()
}

#[test]
fn cyclic_measure_matches_circulant_elimination() {
    assert_eq!(rational_det(&circulant(&[1, 1, 0, 0, 0])), BigInt::from(2));
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = r.gen_range(1..=9);
        let a: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        let want = rational_det(&circulant(&a));
        let e = CyclicElem::from_i64(n as u64, &a).unwrap();
        assert_eq!(cyclic_measure(&e).unwrap(), want, "{a:?}");
        assert_eq!(cyclic_measure_with(&e, Strategy::Divisor).unwrap(), want, "{a:?}");
    }
}

/// Dihedral elements as `y^s x^k`; index `k` for `s = 0`, `n + k` for `s = 1`.
fn dihedral_matrix(n: usize, v: &[i64]) -> Vec<Vec<BigInt>> {
    let elems: Vec<(usize, usize)> = (0..2 * n).map(|i| (i / n, i % n)).collect();
    let mul = |(s1, k1): (usize, usize), (s2, k2): (usize, usize)| {
        let k = if s2 == 0 { k1 + k2 } else { n - k1 + k2 };
        ((s1 + s2) % 2, k % n)
    };
    let inv = |(s, k): (usize, usize)| if s == 0 { (0, (n - k) % n) } else { (s, k) };
    let index = |(s, k): (usize, usize)| s * n + k;
    elems
        .iter()
        .map(|&g| {
            elems
                .iter()
                .map(|&h| BigInt::from(v[index(mul(g, inv(h)))]))
                .collect()
        })
        .collect()
}

#[test]
fn dihedral_measure_matches_independent_cayley_matrix() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..150 {
        let n = r.gen_range(1..=5);
        let v: Vec<i64> = (0..2 * n).map(|_| r.gen_range(-3..=3)).collect();
        let want = rational_det(&dihedral_matrix(n, &v));
        let e = DihedralElem::from_i64(n as u64, &v[..n], &v[n..]).unwrap();
        assert_eq!(dihedral_measure(&e).unwrap(), want, "n = {n}, {v:?}");
        let t = gdet::build_cayley(&GroupSpec::Dihedral(n)).unwrap();
        assert_eq!(cayley_determinant(&t, &Assignment::from_i64(&v)).unwrap(), want);
    }
}

#[test]
fn abelian_measure_matches_independent_matrix() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for dims in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2], vec![4, 2]] {
        let order: usize = dims.iter().product();
        let digits = |mut i: usize| {
            let mut d = vec![0; dims.len()];
            for k in (0..dims.len()).rev() {
                d[k] = i % dims[k];
                i /= dims[k];
            }
            d
        };
        let index = |d: &[usize]| d.iter().zip(&dims).fold(0, |acc, (x, m)| acc * m + x);
        for _ in 0..20 {
            let v: Vec<i64> = (0..order).map(|_| r.gen_range(-2..=2)).collect();
            let m: Vec<Vec<BigInt>> = (0..order)
                .map(|i| {
                    (0..order)
                        .map(|j| {
                            let (a, b) = (digits(i), digits(j));
                            let diff: Vec<usize> =
                                (0..dims.len()).map(|k| (a[k] + dims[k] - b[k]) % dims[k]).collect();
                            BigInt::from(v[index(&diff)])
                        })
                        .collect()
                })
                .collect();
            let want = rational_det(&m);
            assert_eq!(abelian_measure(&Assignment::from_i64(&v), &dims).unwrap(), want);
        }
    }
}

#[test]
fn cyclic_group_spec_uses_the_circulant() {
    let a = [2i64, -1, 0, 3, 1, 1];
    let want = rational_det(&circulant(&a));
    let got = group_measure(&GroupSpec::Cyclic(6), &Assignment::from_i64(&a)).unwrap();
    assert_eq!(got, want);
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[test]
fn factorization_matches_naive_trial_division() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = r.gen_range(1..=5_000_000u64);
        assert_eq!(Factorization::of(n).unwrap().factors(), trial_factor(n).as_slice(), "{n}");
    }
}

#[test]
fn witness_values_match_independent_determinants() {
    for (m, n) in [(3u64, 5u64), (5, 4), (7, 3), (9, 2)] {
        let w = witness::odd_coprime(m, n).unwrap();
        let mut v: Vec<i64> = w.elem.a.to_dense().iter().map(|c| i64::try_from(c).unwrap()).collect();
        v.extend(w.elem.b.to_dense().iter().map(|c| i64::try_from(c).unwrap()));
        let det = rational_det(&dihedral_matrix(n as usize, &v));
        assert_eq!(Some(&det), w.claimed(), "m = {m}, n = {n}");
    }
}

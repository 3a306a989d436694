//! Reproducible end-to-end checks of the library against the published
//! results, shared by the acceptance test and `gdet verify`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd_u64, valuation};
use crate::constraints::{admissible, Factorization};
use crate::groupalg::{build_cayley, convolve, Assignment, GroupSpec};
use crate::intpoly::{cyclo_resultant_closed, cyclotomic, resultant};
use crate::measure::{
    abelian_measure, approx_factored_dihedral, cayley_determinant, dihedral_measure,
    group_measure, DihedralElem,
};
use crate::search::{
    certified_lambda, exhaustive_min, value_scan, LambdaOptions, SearchConfig, Status,
};
use crate::witness::{self, verify, D2pkVariant, D2powkVariant, D4pVariant, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    run: fn() -> std::result::Result<String, String>,
}

impl Check {
    pub fn run(&self) -> Outcome {
        let (passed, detail) = match (self.run)() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome {
            id: self.id,
            name: self.name,
            passed,
            detail,
        }
    }
}

pub const CHECKS: &[Check] = &[
    Check { id: 1, name: "lambda", title: "certified lambda table", run: lambda_table },
    Check { id: 2, name: "exhaustive", title: "exhaustive search agrees with lambda", run: exhaustive },
    Check { id: 3, name: "achieve", title: "odd values coprime to n", run: achieve_grid },
    Check { id: 4, name: "prime-power", title: "prime-power witnesses", run: prime_power },
    Check { id: 5, name: "cyclo", title: "cyclotomic resultant closed form", run: cyclo },
    Check { id: 6, name: "div", title: "divisibility constraints on random samples", run: div_sampling },
    Check { id: 7, name: "sign", title: "odd values are 1 mod 4 for even n", run: sign_structure },
    Check { id: 8, name: "oracle", title: "closed forms match the Cayley determinant", run: oracle },
    Check { id: 9, name: "mult", title: "multiplicativity", run: multiplicativity },
    Check { id: 10, name: "families", title: "value-set scans and witness families", run: families },
    Check { id: 11, name: "valuation", title: "valuation witness pA + B(x - 1)", run: valuation_family },
    Check { id: 12, name: "trivial", title: "trivial bound D(0,1,...,1)", run: trivial_bound },
    Check { id: 13, name: "approx", title: "floating-point factorization", run: approx },
    Check { id: 14, name: "reciprocal", title: "reciprocal property", run: reciprocal },
];

/// Checks selected by name or id; `all` selects every check.
pub fn select(name: &str) -> Option<Vec<&'static Check>> {
    if name == "paper" || name == "all" {
        return Some(CHECKS.iter().collect());
    }
    CHECKS
        .iter()
        .find(|c| c.name == name || c.id.to_string() == name)
        .map(|c| vec![c])
}

type CheckResult = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(r: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..len).map(|_| r.gen_range(lo..=hi)).collect()
}

fn random_dihedral(r: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> DihedralElem {
    DihedralElem::from_i64(n as u64, &random_vec(r, n, lo, hi), &random_vec(r, n, lo, hi)).unwrap()
}

fn nf(n: u64) -> Factorization {
    Factorization::of(n).expect("small n factors")
}

fn measure_of(e: &DihedralElem) -> std::result::Result<BigInt, String> {
    dihedral_measure(e).map_err(|err| err.to_string())
}

/// `(n, λ(D_2n))` rows of the published table.
pub fn lambda_rows() -> Vec<(u64, u64)> {
    let mut rows: Vec<(u64, u64)> = [1, 2, 4, 5, 7, 8, 10, 11, 13, 14, 16]
        .into_iter()
        .map(|n| (n, 3))
        .collect();
    rows.extend([3, 9, 15, 21].map(|n| (n, 4)));
    rows.extend([6, 12, 24].map(|n| (n, 5)));
    let base = 4 * 3 * 5 * 7 * 11 * 13;
    rows.extend([
        (30, 7),
        (210, 11),
        (2310, 13),
        (30030, 16),
        (base, 17),
        (base * 17, 19),
        (base * 17 * 19, 23),
        (base * 17 * 19 * 23, 27),
        (base * 3 * 17 * 19 * 23, 29),
    ]);
    rows
}

fn lambda_table() -> CheckResult {
    let opts = LambdaOptions::default();
    let mut slowest = Duration::ZERO;
    let rows = lambda_rows();
    for &(n, want) in &rows {
        let start = Instant::now();
        let cert = certified_lambda(&nf(n), &opts);
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(cert.status == Status::Exact && cert.lambda == Some(want), || {
            format!(
                "n = {n}: expected exact {want}, got {:?} with lower bound {} and achieved {:?}",
                cert.status, cert.lower_bound, cert.achieved
            )
        })?;
        let w = cert.witness.as_ref().unwrap();
        ensure(verify(w) && w.claimed().map(|v| v.abs()) == Some(BigInt::from(want)), || {
            format!("n = {n}: witness does not re-verify")
        })?;
        ensure(took < Duration::from_secs(30), || format!("n = {n} took {took:?}"))?;
    }
    Ok(format!("{} rows exact, slowest {:.2}s", rows.len(), slowest.as_secs_f64()))
}

fn exhaustive() -> CheckResult {
    let table = [(1u64, 3u64), (2, 3), (3, 4), (4, 3), (5, 3), (6, 5)];
    let mut states = 0u128;
    for (n, lambda) in table {
        let (lo, hi) = if n <= 4 { (-2, 2) } else { (-1, 1) };
        let hit = exhaustive_min(&SearchConfig::new(n, lo, hi))
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("n = {n}: no value with |v| >= 2 in window"))?;
        states += hit.states;
        ensure(hit.value.abs() == BigInt::from(lambda), || {
            format!("n = {n}: search minimum {} but lambda is {lambda}", hit.value)
        })?;
        ensure(measure_of(&hit.elem)? == hit.value, || {
            format!("n = {n}: stored witness does not re-measure")
        })?;
    }
    Ok(format!("n = 1..6 match, {states} states enumerated"))
}

fn achieve_grid() -> CheckResult {
    let mut count = 0;
    let mut wrapped = 0;
    for n in 1..=12u64 {
        for m in (1..=35u64).step_by(2) {
            if gcd_u64(m, n) != 1 {
                continue;
            }
            let w = witness::odd_coprime(m, n).map_err(|e| e.to_string())?;
            ensure(verify(&w), || format!("odd_coprime({m}, {n}) fails to verify"))?;
            let c = w.claimed().unwrap();
            ensure(c.abs() == BigInt::from(m), || format!("odd_coprime({m}, {n}) claims {c}"))?;
            if n % 2 == 0 {
                ensure(c.mod_floor(&BigInt::from(4)) == BigInt::from(1), || {
                    format!("odd_coprime({m}, {n}) claims {c}, not 1 mod 4")
                })?;
            }
            count += 1;
            if m / 2 >= n {
                wrapped += 1;
            }
        }
    }
    Ok(format!("{count} witnesses verified, {wrapped} with wraparound"))
}

fn prime_power() -> CheckResult {
    for (n, want) in [(3u64, 4u64), (5, 4), (6, 16), (10, 16), (12, 256), (20, 256)] {
        let w = witness::two_power(&nf(n)).map_err(|e| e.to_string())?;
        ensure(w.claimed() == Some(&BigInt::from(want)) && verify(&w), || {
            format!("two_power(n = {n}) expected {want}")
        })?;
    }
    for (p, n, want) in [(3u64, 3u64, 27u64), (3, 6, 27), (3, 12, 27), (5, 5, 3125), (5, 10, 3125), (3, 9, 19683)] {
        let w = witness::odd_prime_power(p, &nf(n)).map_err(|e| e.to_string())?;
        ensure(w.claimed().map(|v| v.abs()) == Some(BigInt::from(want)) && verify(&w), || {
            format!("odd_prime_power(p = {p}, n = {n}) expected |claim| {want}")
        })?;
    }
    Ok("12 witnesses verified".into())
}

fn cyclo() -> CheckResult {
    let phis: Vec<_> = (0..=60u64).map(|m| if m == 0 { None } else { Some(cyclotomic(m)) }).collect();
    let mut pairs = 0;
    for n in 1..=60u64 {
        for m in n + 1..=60 {
            let closed = cyclo_resultant_closed(n, m).map_err(|e| e.to_string())?;
            let exact = resultant(phis[n as usize].as_ref().unwrap(), phis[m as usize].as_ref().unwrap())
                .map_err(|e| e.to_string())?;
            ensure(exact.magnitude() == &closed, || {
                format!("Res(Phi_{n}, Phi_{m}): closed form {closed}, subresultant {exact}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs agree"))
}

/// Signed determinants of `count` uniform samples from `[-2, 2]^(2n)`.
fn sample_values(n: u64, count: usize, seed: u64) -> std::result::Result<Vec<BigInt>, String> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| measure_of(&random_dihedral(&mut r, n as usize, -2, 2)))
        .collect()
}

fn div_sampling() -> CheckResult {
    let mut nonzero = 0;
    for n in [3u64, 4, 5, 6, 9, 12, 18, 20] {
        let f = nf(n);
        for v in sample_values(n, 10_000, 0xd1 + n)? {
            if v.is_zero() {
                continue;
            }
            nonzero += 1;
            let rep = admissible(&v, &f);
            ensure(rep.is_admissible(), || format!("n = {n}: {v} rejected: {:?}", rep.reasons))?;
            if n == 12 {
                let v2 = valuation(&v, 2).unwrap();
                let v3 = valuation(&v, 3).unwrap();
                ensure(v2 == 0 || v2 >= 8, || format!("n = 12: {v} has v_2 = {v2}"))?;
                ensure(v3 == 0 || v3 >= 3, || format!("n = 12: {v} has v_3 = {v3}"))?;
            }
        }
    }
    Ok(format!("{nonzero} non-zero sampled values admissible"))
}

fn sign_structure() -> CheckResult {
    let mut odd = 0;
    for n in [4u64, 6, 8, 10] {
        for v in sample_values(n, 10_000, 0xd1 + n)? {
            if v.is_odd() {
                odd += 1;
                ensure(v.mod_floor(&BigInt::from(4)) == BigInt::from(1), || {
                    format!("n = {n}: odd value {v} is not 1 mod 4")
                })?;
            }
        }
    }
    let plus = witness::odd_coprime(3, 5).map_err(|e| e.to_string())?;
    let minus = plus.swapped();
    for (w, want) in [(&plus, 3), (&minus, -3)] {
        ensure(measure_of(&w.elem)? == BigInt::from(want) && verify(w), || {
            format!("n = 5: expected {want} from {}", w.provenance)
        })?;
    }
    Ok(format!("{odd} odd values all 1 mod 4; +3 and -3 achieved on D_10"))
}

fn oracle() -> CheckResult {
    let mut r = rng(0x0a);
    for n in 1..=6usize {
        let table = build_cayley(&GroupSpec::Dihedral(n)).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let e = random_dihedral(&mut r, n, -3, 3);
            let det = cayley_determinant(&table, &e.to_assignment()).map_err(|e| e.to_string())?;
            ensure(measure_of(&e)? == det, || format!("n = {n}: mismatch on {e:?}"))?;
        }
    }
    for _ in 0..100 {
        let v = random_vec(&mut r, 4, -3, 3);
        let (p, q, s, t) = (v[0], v[1], v[2], v[3]);
        let product = BigInt::from((p + q + s + t) * (p + q - s - t) * (p - q + s - t) * (p - q - s + t));
        let got = abelian_measure(&Assignment::from_i64(&v), &[2, 2]).map_err(|e| e.to_string())?;
        ensure(got == product, || format!("Z2xZ2 {v:?}: {got} vs {product}"))?;
    }
    Ok("1200 dihedral and 100 Z2xZ2 assignments agree".into())
}

fn multiplicativity() -> CheckResult {
    let mut r = rng(0x09);
    for n in [3usize, 4, 5, 8] {
        let spec = GroupSpec::Dihedral(n);
        for _ in 0..100 {
            let u = random_dihedral(&mut r, n, -2, 2).to_assignment();
            let v = random_dihedral(&mut r, n, -2, 2).to_assignment();
            let uv = convolve(&spec, &u, &v).map_err(|e| e.to_string())?;
            let m = |a: &Assignment| group_measure(&spec, a).map_err(|e| e.to_string());
            ensure(m(&uv)? == m(&u)? * m(&v)?, || format!("n = {n}: product rule fails"))?;
        }
    }
    Ok("400 pairs multiplicative".into())
}

fn scan_conforms(
    spec: GroupSpec,
    window: (i64, i64),
    max_abs: u64,
    form: impl Fn(&BigInt) -> bool,
) -> std::result::Result<usize, String> {
    let cfg = SearchConfig::new(0, window.0, window.1).with_max_abs(max_abs);
    let scan = value_scan(&spec, &cfg).map_err(|e| e.to_string())?;
    for e in &scan.entries {
        let a = Assignment::from_i64(&e.example);
        ensure(group_measure(&spec, &a).map_err(|e| e.to_string())? == e.value, || {
            format!("{}: example for {} does not re-measure", scan.group, e.value)
        })?;
        if !e.value.is_zero() {
            ensure(form(&e.value), || format!("{}: value {} outside the stated form", scan.group, e.value))?;
        }
    }
    Ok(scan.entries.len())
}

fn families() -> CheckResult {
    let md = |v: &BigInt, m: i64| v.mod_floor(&BigInt::from(m)).to_i64().unwrap();
    let z2z2 = scan_conforms(GroupSpec::AbelianProduct(vec![2, 2]), (-2, 2), 200, |v| {
        md(v, 4) == 1 || (md(v, 16) == 0 && (v / 16i32).is_odd()) || md(v, 64) == 0
    })?;
    let d8 = scan_conforms(GroupSpec::Dihedral(4), (-2, 2), 300, |v| md(v, 4) == 1 || md(v, 256) == 0)?;
    let d6 = scan_conforms(GroupSpec::Dihedral(3), (-1, 1), 10_000, |v| {
        let a = valuation(v, 2).unwrap();
        let b = valuation(v, 3).unwrap();
        (a == 0 || a >= 2) && (b == 0 || b >= 3)
    })?;

    let mut ws: Vec<(witness::Witness, BigInt)> = Vec::new();
    let mut push = |w: crate::Result<Witness>, want: BigInt| -> std::result::Result<(), String> {
        ws.push((w.map_err(|e| e.to_string())?, want));
        Ok(())
    };
    let pow = |b: i64, e: u32| num_traits::Pow::pow(BigInt::from(b), e);
    for p in [3u64, 5, 7] {
        for k in 1..=3u32 {
            let pk = p.pow(k);
            let delta = if pk % 4 == 1 { 1 } else { -1 };
            push(witness::family_d4p(p, D4pVariant::Delta { k }), pow(p as i64, k + 2) * delta)?;
        }
        push(witness::family_d4p(p, D4pVariant::XSquaredPlusOne), BigInt::from(16))?;
        push(witness::family_d4p(p, D4pVariant::MinusSixteen), BigInt::from(-16))?;
        push(witness::family_d4p(p, D4pVariant::SixtyFour), BigInt::from(64))?;
        push(witness::family_d4p(p, D4pVariant::MinusSixtyFour), BigInt::from(-64))?;
        for l in 1..=3u32 {
            for positive in [true, false] {
                let want = pow(2, l + 6) * if positive { 1 } else { -1 };
                push(witness::family_d4p(p, D4pVariant::Pow { l, positive }), want)?;
            }
        }
        for k in 1..=2u32 {
            for l in k..=k + 1 {
                push(witness::family_d2pk(p, k, D2pkVariant::Main { l }), pow(p as i64, l + 2 * k))?;
            }
            push(witness::family_d2pk(p, k, D2pkVariant::XPlusOne), BigInt::from(4))?;
            push(witness::family_d2pk(p, k, D2pkVariant::Quad), BigInt::from(8))?;
        }
        push(witness::family_d2p2(p), pow(p as i64, 5))?;
    }
    for m in -3..=3i64 {
        push(witness::family_d2powk(2, D2powkVariant::Odd { m }), BigInt::from(1 + 4 * m))?;
        push(witness::family_d2powk(2, D2powkVariant::Sixteen { m }), BigInt::from(16 * (2 * m + 1)))?;
        push(witness::family_d2powk(2, D2powkVariant::SixtyFour { m }), BigInt::from(64 * m))?;
    }
    for c in -2..=2i64 {
        for positive in [true, false] {
            let want = 256 * (4 * c + 1) * if positive { 1 } else { -1 };
            push(witness::family_d2powk(3, D2powkVariant::D8 { c, positive }), BigInt::from(want))?;
        }
    }
    for positive in [true, false] {
        let s = if positive { 1 } else { -1 };
        push(witness::family_d2powk(4, D2powkVariant::D16Ten { positive }), BigInt::from(1024 * s))?;
        push(witness::family_d2powk(4, D2powkVariant::D16Eleven { positive }), BigInt::from(2048 * s))?;
    }
    for k in [3u32, 4] {
        for m in [-2i64, -1, 1, 2, 3] {
            push(witness::family_d2powk(k, D2powkVariant::Lower { m }), pow(2, 3 * k) * m)?;
        }
    }
    for (w, want) in &ws {
        ensure(w.claimed() == Some(want), || format!("{} claims {:?}, expected {want}", w.provenance, w.claimed()))?;
        let got = measure_of(&w.elem)?;
        ensure(&got == want, || format!("{} on D_{}: measured {got}, expected {want}", w.provenance, 2 * w.n()))?;
    }
    Ok(format!(
        "scans conform ({z2z2}, {d8}, {d6} distinct values); {} family witnesses verified",
        ws.len()
    ))
}

fn valuation_family() -> CheckResult {
    let mut failures = Vec::new();
    let mut total = 0;
    for (p, k) in [(3u64, 2u32), (5, 2), (3, 3)] {
        for (a, b) in [(1i64, 1i64), (1, 2), (2, 1)] {
            let w = witness::valuation_witness(p, k, a, b).map_err(|e| e.to_string())?;
            let v = measure_of(&w.elem)?;
            let got = valuation(&v, p);
            total += 1;
            if got != Some(2 * k + 1) {
                failures.push(format!("p={p} k={k} A={a} B={b}: v_p = {got:?}"));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{total} cases have v_p = 2k + 1"))
    } else {
        Err(format!(
            "{}/{total} cases differ from 2k + 1 ({})",
            failures.len(),
            failures.join("; ")
        ))
    }
}

fn trivial_bound() -> CheckResult {
    let run = |spec: GroupSpec| -> std::result::Result<(), String> {
        let order = spec.order();
        let mut a = vec![1i64; order];
        a[0] = 0;
        let got = group_measure(&spec, &Assignment::from_i64(&a)).map_err(|e| e.to_string())?;
        let want = BigInt::from(order as i64 - 1) * if order % 2 == 0 { -1 } else { 1 };
        ensure(got == want, || format!("{}: {got} vs {want}", spec.label()))
    };
    for n in 1..=10 {
        run(GroupSpec::Dihedral(n))?;
    }
    for n in 1..=12 {
        run(GroupSpec::Cyclic(n))?;
    }
    Ok("D_2n for n <= 10 and Z_N for N <= 12".into())
}

fn approx() -> CheckResult {
    let mut r = rng(0x13);
    let mut compared = 0;
    let mut worst = 0f64;
    for n in 1..=50usize {
        for _ in 0..50 {
            let e = random_dihedral(&mut r, n, -3, 3);
            let exact = measure_of(&e)?;
            if exact.abs() < BigInt::from(1) {
                continue;
            }
            let (approx, _) = approx_factored_dihedral(&e);
            let ex = exact.to_f64().unwrap();
            let rel = ((approx - ex) / ex).abs();
            worst = worst.max(rel);
            ensure(rel <= 1e-6, || format!("n = {n}: approx {approx:e} vs exact {exact}"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} comparisons, worst relative error {worst:.1e}"))
}

fn reciprocal() -> CheckResult {
    let mut r = rng(0x14);
    for n in 1..=10usize {
        for _ in 0..50 {
            let k = r.gen_range(0..n);
            let pal = |r: &mut ChaCha8Rng| {
                let mut v = vec![0i64; n];
                for i in 0..n {
                    let j = (k + n - i) % n;
                    if j >= i {
                        let c = r.gen_range(-3..=3);
                        v[i] = c;
                        v[j] = c;
                    }
                }
                v
            };
            let (a, b) = (pal(&mut r), pal(&mut r));
            let e = DihedralElem::from_i64(n as u64, &a, &b).unwrap();
            let d = measure_of(&e)?;
            let ab = abelian_measure(&e.to_assignment(), &[2, n]).map_err(|e| e.to_string())?;
            ensure(d == ab, || format!("n = {n}, k = {k}: {d} vs {ab}"))?;
        }
    }
    Ok("500 palindromic pairs agree".into())
}

//! Windowed enumeration of dihedral determinants and the certified λ pipeline.
//!
//! Enumeration splits the state space into contiguous index ranges, one per
//! worker. State digits are ordered with the rotation block first, so each
//! range is a run of rotation-block prefixes. Results are merged by a total
//! order, so they do not depend on the worker count.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::constraints::{admissible_signs, lambda_lower_bound, Factorization};
use crate::error::{Error, Result};
use crate::groupalg::{build_cayley, Assignment, GroupSpec};
use crate::measure::{
    cayley_determinant, cyclic_measure_with, CyclicElem, DihedralElem, Strategy,
};
use crate::witness::{self, compose, verify, Witness};

pub const DEFAULT_MAX_STATES: u128 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: u64,
    pub coeff_lo: i64,
    pub coeff_hi: i64,
    /// Values with larger absolute value are not recorded by scans.
    pub max_abs: Option<BigInt>,
    pub worker_count: usize,
    pub max_states: u128,
}

impl SearchConfig {
    pub fn new(n: u64, coeff_lo: i64, coeff_hi: i64) -> Self {
        SearchConfig {
            n,
            coeff_lo,
            coeff_hi,
            max_abs: None,
            worker_count: default_workers(),
            max_states: DEFAULT_MAX_STATES,
        }
    }

    pub fn with_max_abs(mut self, m: impl Into<BigInt>) -> Self {
        self.max_abs = Some(m.into());
        self
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.worker_count = w.max(1);
        self
    }

    fn window(&self) -> Result<Window> {
        if self.coeff_lo > self.coeff_hi {
            return Err(Error::InvalidGroup(format!(
                "empty window [{}, {}]",
                self.coeff_lo, self.coeff_hi
            )));
        }
        if self.coeff_lo < i8::MIN as i64 || self.coeff_hi > i8::MAX as i64 {
            return Err(Error::InvalidGroup("window must lie within [-128, 127]".into()));
        }
        Ok(Window {
            lo: self.coeff_lo as i8,
            size: (self.coeff_hi - self.coeff_lo + 1) as u64,
        })
    }
}

/// Available parallelism, overridable through `GDET_THREADS`.
pub fn default_workers() -> usize {
    std::env::var("GDET_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Copy)]
struct Window {
    lo: i8,
    size: u64,
}

fn state_count(size: u64, len: usize, limit: u128) -> Result<u128> {
    let mut total: u128 = 1;
    for _ in 0..len {
        total = total.saturating_mul(size as u128);
    }
    if total > limit {
        return Err(Error::StateSpaceOverflow {
            states: total,
            limit,
        });
    }
    Ok(total)
}

/// Odometer over `window^len`, starting at a given index.
struct Odometer {
    digits: Vec<u64>,
    state: Vec<i8>,
    w: Window,
}

impl Odometer {
    fn at(index: u128, len: usize, w: Window) -> Self {
        let mut digits = vec![0u64; len];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = (rest % w.size as u128) as u64;
            rest /= w.size as u128;
        }
        let state = digits.iter().map(|&d| w.lo + d as i8).collect();
        Odometer { digits, state, w }
    }

    fn advance(&mut self) {
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.w.size {
                self.state[k] += 1;
                return;
            }
            self.digits[k] = 0;
            self.state[k] = self.w.lo;
        }
    }
}

/// Runs `work(start, end)` on disjoint index ranges and returns results in
/// range order.
fn partitioned<T: Send>(
    total: u128,
    workers: usize,
    work: impl Fn(u128, u128) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let workers = (workers.max(1) as u128).min(total.max(1));
    let chunk = total.div_ceil(workers);
    let ranges: Vec<(u128, u128)> = (0..workers)
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .filter(|(s, e)| s < e)
        .collect();
    if ranges.len() <= 1 {
        return ranges.into_iter().map(|(s, e)| work(s, e)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(s, e)| {
                let work = &work;
                scope.spawn(move || work(s, e))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    })
}

/// Dense `f f~ - g g~` for small `n`.
fn norm_form(n: usize, a: &[i8], b: &[i8]) -> Vec<i64> {
    let mut h = vec![0i64; n];
    for i in 0..n {
        let (ai, bi) = (a[i] as i64, b[i] as i64);
        if ai == 0 && bi == 0 {
            continue;
        }
        for j in 0..n {
            let k = (i + n - j) % n;
            h[k] += ai * a[j] as i64 - bi * b[j] as i64;
        }
    }
    h
}

/// Memoized cyclic measure of small dense norm forms.
struct MeasureCache {
    n: u64,
    memo: HashMap<Vec<i64>, BigInt>,
}

impl MeasureCache {
    fn new(n: u64) -> Self {
        MeasureCache {
            n,
            memo: HashMap::new(),
        }
    }

    fn dihedral(&mut self, a: &[i8], b: &[i8]) -> Result<BigInt> {
        let h = norm_form(self.n as usize, a, b);
        if let Some(v) = self.memo.get(&h) {
            return Ok(v.clone());
        }
        let v = cyclic_measure_with(&CyclicElem::from_i64(self.n, &h)?, Strategy::Direct)?;
        self.memo.insert(h, v.clone());
        Ok(v)
    }
}

/// Symmetries preserving `|det|`: independent rotations of the two blocks
/// (left and right multiplication by `x^i`), exchange of the blocks (left
/// multiplication by `y`) and, for symmetric windows, negation.
fn is_canonical(state: &[i8], n: usize, negate: bool) -> bool {
    let (a, b) = state.split_at(n);
    let negs: &[i8] = if negate { &[1, -1] } else { &[1] };
    for &sgn in negs {
        for swap in [false, true] {
            let (p, q) = if swap { (b, a) } else { (a, b) };
            for i in 0..n {
                for j in 0..n {
                    if sgn == 1 && !swap && i == 0 && j == 0 {
                        continue;
                    }
                    let image = |k: usize| {
                        let v = if k < n {
                            p[(k + n - i) % n]
                        } else {
                            q[(k - n + n - j) % n]
                        };
                        v * sgn
                    };
                    for (k, &s) in state.iter().enumerate() {
                        let v = image(k);
                        if v < s {
                            return false;
                        }
                        if v > s {
                            break;
                        }
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinResult {
    /// Signed determinant of smallest absolute value `>= 2`.
    pub value: BigInt,
    pub elem: DihedralElem,
    pub states: u128,
    pub canonical_states: u64,
}

/// Smallest `|det| >= 2` over `window^(2n)`, up to symmetry. An upper bound
/// for λ(D_2n), not a proof of minimality. `None` if nothing qualifies.
pub fn exhaustive_min(cfg: &SearchConfig) -> Result<Option<MinResult>> {
    let w = cfg.window()?;
    let n = cfg.n as usize;
    if n == 0 {
        return Err(Error::InvalidGroup("n must be positive".into()));
    }
    let total = state_count(w.size, 2 * n, cfg.max_states)?;
    let negate = cfg.coeff_lo == -cfg.coeff_hi;

    type Best = Option<(BigInt, BigInt, Vec<i8>)>;
    let parts = partitioned(total, cfg.worker_count, |start, end| {
        let mut cache = MeasureCache::new(cfg.n);
        let mut odo = Odometer::at(start, 2 * n, w);
        let mut best: Best = None;
        let mut canonical = 0u64;
        for _ in start..end {
            if is_canonical(&odo.state, n, negate) {
                canonical += 1;
                let (a, b) = odo.state.split_at(n);
                let v = cache.dihedral(a, b)?;
                let abs = v.abs();
                let better = match &best {
                    None => true,
                    Some((babs, _, bs)) => abs < *babs || (abs == *babs && odo.state < *bs),
                };
                if abs >= BigInt::from(2) && better {
                    best = Some((abs, v, odo.state.clone()));
                }
            }
            odo.advance();
        }
        Ok((best, canonical))
    })?;

    let mut best: Best = None;
    let mut canonical_states = 0;
    for (b, c) in parts {
        canonical_states += c;
        if let Some(cand) = b {
            let take = match &best {
                None => true,
                Some((babs, _, bs)) => cand.0 < *babs || (cand.0 == *babs && cand.2 < *bs),
            };
            if take {
                best = Some(cand);
            }
        }
    }
    best.map(|(_, value, state)| {
        let (a, b) = state.split_at(n);
        let to64 = |v: &[i8]| v.iter().map(|&c| c as i64).collect::<Vec<_>>();
        Ok(MinResult {
            value,
            elem: DihedralElem::from_i64(cfg.n, &to64(a), &to64(b))?,
            states: total,
            canonical_states,
        })
    })
    .transpose()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    #[serde(with = "crate::decimal")]
    pub value: BigInt,
    pub count: u64,
    /// First assignment in enumeration order achieving the value.
    pub example: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub group: String,
    pub window: (i64, i64),
    pub states: u128,
    /// Sorted by value.
    pub entries: Vec<ScanEntry>,
}

/// Determinants of every assignment in `window^|G|`, keeping those with
/// `|v| <= max_abs`. `cfg.n` is ignored; the group decides the length.
pub fn value_scan(spec: &GroupSpec, cfg: &SearchConfig) -> Result<ScanResult> {
    spec.validate()?;
    let w = cfg.window()?;
    let len = spec.order();
    let total = state_count(w.size, len, cfg.max_states)?;
    let table = match spec {
        GroupSpec::Dihedral(_) | GroupSpec::Cyclic(_) => None,
        _ => Some(build_cayley(spec)?),
    };

    let parts = partitioned(total, cfg.worker_count, |start, end| {
        let mut found: BTreeMap<BigInt, (u64, Vec<i8>)> = BTreeMap::new();
        let mut odo = Odometer::at(start, len, w);
        let mut cache = match spec {
            GroupSpec::Dihedral(n) => Some(MeasureCache::new(*n as u64)),
            _ => None,
        };
        for _ in start..end {
            let s = &odo.state;
            let v = match (spec, cache.as_mut(), &table) {
                (GroupSpec::Dihedral(n), Some(c), _) => {
                    let (a, b) = s.split_at(*n);
                    c.dihedral(a, b)?
                }
                (GroupSpec::Cyclic(n), _, _) => {
                    let coeffs: Vec<i64> = s.iter().map(|&c| c as i64).collect();
                    cyclic_measure_with(&CyclicElem::from_i64(*n as u64, &coeffs)?, Strategy::Direct)?
                }
                (_, _, Some(t)) => {
                    let a = Assignment(s.iter().map(|&c| BigInt::from(c)).collect());
                    cayley_determinant(t, &a)?
                }
                _ => unreachable!(),
            };
            if cfg.max_abs.as_ref().is_none_or(|m| v.abs() <= *m) {
                found
                    .entry(v)
                    .and_modify(|e| e.0 += 1)
                    .or_insert_with(|| (1, s.clone()));
            }
            odo.advance();
        }
        Ok(found)
    })?;

    let mut merged: BTreeMap<BigInt, (u64, Vec<i8>)> = BTreeMap::new();
    for part in parts {
        for (v, (c, ex)) in part {
            merged.entry(v).and_modify(|e| e.0 += c).or_insert((c, ex));
        }
    }
    Ok(ScanResult {
        group: spec.label(),
        window: (cfg.coeff_lo, cfg.coeff_hi),
        states: total,
        entries: merged
            .into_iter()
            .map(|(value, (count, ex))| ScanEntry {
                value,
                count,
                example: ex.into_iter().map(|c| c as i64).collect(),
            })
            .collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCertificate {
    #[serde(with = "crate::decimal")]
    pub n: BigUint,
    pub factorization: String,
    pub lower_bound: u64,
    /// λ itself when the status is exact.
    pub lambda: Option<u64>,
    /// Signed determinant of the witness.
    #[serde(with = "crate::decimal::option")]
    pub achieved: Option<BigInt>,
    pub witness: Option<Witness>,
    pub status: Status,
    pub search_window_used: Option<(i64, i64)>,
}

#[derive(Clone, Debug)]
pub struct LambdaOptions {
    /// Coefficient window for the search fallback; `None` disables it.
    pub search_window: Option<(i64, i64)>,
    pub max_states: u128,
    pub workers: usize,
    /// How far above the lower bound to look for a constructive upper bound.
    pub max_candidates: u64,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        LambdaOptions {
            search_window: None,
            max_states: DEFAULT_MAX_STATES,
            workers: default_workers(),
            max_candidates: 4096,
        }
    }
}

/// Witnesses with prime-power-like claims that apply to `D_2n`.
fn catalog(n: u64, nf: &Factorization) -> Vec<Witness> {
    use witness::*;
    let mut out: Vec<Result<Witness>> = vec![two_power(nf)];
    for (p, _) in nf.odd_primes() {
        out.push(odd_prime_power(p, nf));
    }
    let facs = nf.factors();
    if let [(p, k)] = facs {
        if *p != 2 {
            out.push(family_d2pk(*p, *k, D2pkVariant::XPlusOne));
            out.push(family_d2pk(*p, *k, D2pkVariant::Quad));
            out.push(family_d2pk(*p, *k, D2pkVariant::Main { l: *k }));
            if *k == 2 {
                out.push(family_d2p2(*p));
            }
        } else {
            let k = k + 1;
            if k == 2 {
                out.push(family_d2powk(k, D2powkVariant::Sixteen { m: 0 }));
                out.push(family_d2powk(k, D2powkVariant::SixtyFour { m: 1 }));
            }
            if k == 3 {
                out.push(family_d2powk(k, D2powkVariant::D8 { c: 0, positive: true }));
            }
            if k == 4 {
                out.push(family_d2powk(k, D2powkVariant::D16Ten { positive: true }));
                out.push(family_d2powk(k, D2powkVariant::D16Eleven { positive: true }));
            }
            if k >= 3 {
                out.push(family_d2powk(k, D2powkVariant::Lower { m: 1 }));
            }
        }
    }
    if let [(2, 1), (p, 1)] = facs {
        for v in [
            D4pVariant::XSquaredPlusOne,
            D4pVariant::SixtyFour,
            D4pVariant::Delta { k: 1 },
            D4pVariant::Delta { k: 2 },
            D4pVariant::Pow { l: 1, positive: true },
            D4pVariant::Pow { l: 2, positive: true },
            D4pVariant::Pow { l: 3, positive: true },
        ] {
            out.push(family_d4p(*p, v));
        }
    }
    let mut seen = Vec::new();
    let mut atoms: Vec<Witness> = out
        .into_iter()
        .filter_map(|w| w.ok())
        .filter(|w| w.n() == n)
        .filter(|w| w.claimed().is_some_and(|v| v.abs() > BigInt::from(1)))
        .filter(|w| {
            let a = w.claimed().unwrap().abs();
            let fresh = !seen.contains(&a);
            seen.push(a);
            fresh
        })
        .collect();
    atoms.sort_by_key(|w| std::cmp::Reverse(w.claimed().unwrap().abs()));
    atoms
}

/// Picks atoms (with repetition) whose claims multiply to `target` in absolute value.
fn decompose(target: &BigInt, atoms: &[Witness], from: usize, depth: usize) -> Option<Vec<usize>> {
    if *target == BigInt::from(1) {
        return Some(Vec::new());
    }
    if depth == 0 {
        return None;
    }
    for (i, w) in atoms.iter().enumerate().skip(from) {
        let a = w.claimed().unwrap().abs();
        if (target % &a).is_zero() {
            if let Some(mut rest) = decompose(&(target / &a), atoms, i, depth - 1) {
                rest.insert(0, i);
                return Some(rest);
            }
        }
    }
    None
}

/// A verified witness with `|det| = m`, if the catalog can build one.
fn construct(m: u64, n: u64, nf: &Factorization, atoms: &[Witness]) -> Option<Witness> {
    let coprime: u64 = crate::arith::small_factor(m)
        .into_iter()
        .filter(|&(p, _)| p != 2 && nf.exponent(p) == 0)
        .map(|(p, e)| p.pow(e))
        .product();
    let r = m / coprime;
    let mut parts = Vec::new();
    if coprime > 1 {
        parts.push(witness::odd_coprime(coprime, n).ok()?);
    }
    for i in decompose(&BigInt::from(r), atoms, 0, 8)? {
        parts.push(atoms[i].clone());
    }
    let w = compose(&parts).ok()?;
    verify(&w).then_some(w)
}

/// Lower bound from admissibility, matched where possible by a verified
/// witness built from the constructive families or, failing that, found by
/// a windowed search.
pub fn certified_lambda(nf: &Factorization, opts: &LambdaOptions) -> LambdaCertificate {
    let lower = lambda_lower_bound(nf);
    let mut cert = LambdaCertificate {
        n: nf.n().clone(),
        factorization: nf.to_string(),
        lower_bound: lower,
        lambda: None,
        achieved: None,
        witness: None,
        status: Status::Bounded,
        search_window_used: None,
    };
    let Some(n) = nf.n_u64() else {
        return cert;
    };
    let atoms = catalog(n, nf);
    for m in lower..lower.saturating_add(opts.max_candidates) {
        if admissible_signs(m, nf).is_empty() {
            continue;
        }
        if let Some(w) = construct(m, n, nf, &atoms) {
            cert.achieved = w.claimed().cloned();
            cert.witness = Some(w);
            if m == lower {
                cert.status = Status::Exact;
                cert.lambda = Some(m);
                return cert;
            }
            break;
        }
    }
    if let Some((lo, hi)) = opts.search_window {
        let cfg = SearchConfig {
            n,
            coeff_lo: lo,
            coeff_hi: hi,
            max_abs: None,
            worker_count: opts.workers,
            max_states: opts.max_states,
        };
        if let Ok(Some(hit)) = exhaustive_min(&cfg) {
            let found = hit.value.abs();
            let improves = cert
                .achieved
                .as_ref()
                .is_none_or(|a| found < a.abs());
            if improves {
                let w = Witness {
                    elem: hit.elem,
                    claim: witness::Claim::Value(hit.value.clone()),
                    provenance: "search".into(),
                };
                if verify(&w) {
                    cert.search_window_used = Some((lo, hi));
                    cert.achieved = Some(hit.value);
                    cert.witness = Some(w);
                    if found.to_u64() == Some(lower) {
                        cert.status = Status::Exact;
                        cert.lambda = Some(lower);
                    }
                }
            }
        }
    }
    cert
}

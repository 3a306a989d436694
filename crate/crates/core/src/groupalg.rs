//! Finite groups as explicit multiplication tables, and their integral group
//! algebras.
//!
//! Dihedral groups use a fixed element order: index `i < n` is the rotation
//! `R^i` and index `n + i` is the reflection `F R^i`, with `R F = F R^(n-1)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest explicit table accepted from outside.
pub const EXPLICIT_ORDER_LIMIT: usize = 64;
/// Largest table `build_cayley` will materialize.
pub const TABLE_ORDER_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    AbelianProduct(Vec<usize>),
    /// Dihedral group of order `2n`, parameterized by `n`.
    Dihedral(usize),
    Explicit(CayleyTable),
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        match self {
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::AbelianProduct(dims) => dims.iter().product(),
            GroupSpec::Dihedral(n) => 2 * n,
            GroupSpec::Explicit(t) => t.order(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Cyclic(0) | GroupSpec::Dihedral(0) => {
                Err(Error::InvalidGroup("group parameters must be >= 1".into()))
            }
            GroupSpec::AbelianProduct(dims) if dims.is_empty() || dims.contains(&0) => Err(
                Error::InvalidGroup("abelian factors must be non-empty and >= 1".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Short textual name, e.g. `dihedral:5`.
    pub fn label(&self) -> String {
        match self {
            GroupSpec::Cyclic(n) => format!("cyclic:{n}"),
            GroupSpec::Dihedral(n) => format!("dihedral:{n}"),
            GroupSpec::AbelianProduct(dims) => format!(
                "abelian:{}",
                dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
            ),
            GroupSpec::Explicit(t) => format!("table:{}", t.order()),
        }
    }
}

/// Multiplication table: `table[i][j]` is the index of `g_i * g_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct CayleyTable {
    identity: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<RawTable> for CayleyTable {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        if raw.table.len() != raw.order {
            return Err(Error::InvalidTable(format!(
                "declared order {} but table has {} rows",
                raw.order,
                raw.table.len()
            )));
        }
        if raw.order > EXPLICIT_ORDER_LIMIT {
            return Err(Error::OrderTooLarge {
                order: raw.order,
                limit: EXPLICIT_ORDER_LIMIT,
            });
        }
        CayleyTable::new(raw.table, raw.identity)
    }
}

impl From<CayleyTable> for RawTable {
    fn from(t: CayleyTable) -> Self {
        RawTable {
            order: t.order(),
            identity: t.identity,
            table: t.table,
        }
    }
}

impl CayleyTable {
    /// Validates the Latin-square and identity laws, and associativity for
    /// orders up to [`EXPLICIT_ORDER_LIMIT`].
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if identity >= n {
            return Err(Error::InvalidTable(format!("identity {identity} out of range")));
        }
        let mut seen = vec![0usize; n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            seen.iter_mut().for_each(|s| *s = usize::MAX);
            for &v in row {
                if v >= n || seen[v] == i {
                    return Err(Error::InvalidTable(format!("row {i} is not a permutation")));
                }
                seen[v] = i;
            }
        }
        for j in 0..n {
            let mut hit = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut hit[row[j]], true) {
                    return Err(Error::InvalidTable(format!("column {j} is not a permutation")));
                }
            }
        }
        for k in 0..n {
            if table[identity][k] != k || table[k][identity] != k {
                return Err(Error::InvalidTable(format!(
                    "element {identity} is not a two-sided identity"
                )));
            }
        }
        let inverse = (0..n)
            .map(|i| table[i].iter().position(|&v| v == identity).unwrap())
            .collect();
        let t = CayleyTable {
            identity,
            table,
            inverse,
        };
        if n <= EXPLICIT_ORDER_LIMIT && !t.is_associative() {
            return Err(Error::InvalidTable("multiplication is not associative".into()));
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = self.table[i][j];
                (0..n).all(|k| self.table[ij][k] == self.table[i][self.table[j][k]])
            })
        })
    }
}

/// Integer weights on group elements: `values[i]` is the coefficient of `g_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<BigInt>);

impl Assignment {
    pub fn zeros(order: usize) -> Self {
        Assignment(vec![BigInt::zero(); order])
    }

    pub fn indicator(order: usize, k: usize) -> Self {
        let mut a = Self::zeros(order);
        a.0[k] = BigInt::from(1);
        a
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Assignment(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn build_cayley(spec: &GroupSpec) -> Result<CayleyTable> {
    spec.validate()?;
    let order = spec.order();
    if order > TABLE_ORDER_LIMIT {
        return Err(Error::OrderTooLarge {
            order,
            limit: TABLE_ORDER_LIMIT,
        });
    }
    let table: Vec<Vec<usize>> = match spec {
        GroupSpec::Explicit(t) => return Ok(t.clone()),
        GroupSpec::Cyclic(n) => (0..*n)
            .map(|i| (0..*n).map(|j| (i + j) % n).collect())
            .collect(),
        GroupSpec::AbelianProduct(dims) => {
            let digits = |mut k: usize| {
                let mut d = vec![0; dims.len()];
                for (slot, &m) in d.iter_mut().zip(dims).rev() {
                    *slot = k % m;
                    k /= m;
                }
                d
            };
            let index = |d: &[usize]| d.iter().zip(dims).fold(0, |acc, (&x, &m)| acc * m + x);
            (0..order)
                .map(|i| {
                    let di = digits(i);
                    (0..order)
                        .map(|j| {
                            let sum: Vec<usize> = di
                                .iter()
                                .zip(digits(j))
                                .zip(dims)
                                .map(|((&a, b), &m)| (a + b) % m)
                                .collect();
                            index(&sum)
                        })
                        .collect()
                })
                .collect()
        }
        GroupSpec::Dihedral(n) => {
            let n = *n;
            (0..2 * n)
                .map(|i| (0..2 * n).map(|j| dihedral_mul(n, i, j)).collect())
                .collect()
        }
    };
    CayleyTable::new(table, 0)
}

/// Product of dihedral elements in the rotations-then-reflections indexing.
pub fn dihedral_mul(n: usize, i: usize, j: usize) -> usize {
    let (ri, fi) = (i % n, i >= n);
    let (rj, fj) = (j % n, j >= n);
    match (fi, fj) {
        // R^a R^b = R^(a+b)
        (false, false) => (ri + rj) % n,
        // R^a F R^b = F R^(b-a)
        (false, true) => n + (rj + n - ri) % n,
        // F R^a R^b = F R^(a+b)
        (true, false) => n + (ri + rj) % n,
        // F R^a F R^b = R^(b-a)
        (true, true) => (rj + n - ri) % n,
    }
}

/// Group-algebra product: `c[k] = sum over g_i g_j = g_k of u[i] v[j]`.
pub fn convolve(spec: &GroupSpec, u: &Assignment, v: &Assignment) -> Result<Assignment> {
    let table = build_cayley(spec)?;
    convolve_with(&table, u, v)
}

pub fn convolve_with(table: &CayleyTable, u: &Assignment, v: &Assignment) -> Result<Assignment> {
    let n = table.order();
    for a in [u, v] {
        if a.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: a.len(),
            });
        }
    }
    let mut out = Assignment::zeros(n);
    for (i, ui) in u.0.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.0.iter().enumerate() {
            if !vj.is_zero() {
                out.0[table.mul(i, j)] += ui * vj;
            }
        }
    }
    Ok(out)
}

/// Left translation: `a'[h g_i] = a[i]`.
pub fn translate(table: &CayleyTable, a: &Assignment, h: usize) -> Result<Assignment> {
    let n = table.order();
    if a.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: a.len(),
        });
    }
    if h >= n {
        return Err(Error::InvalidGroup(format!("element {h} out of range")));
    }
    let mut out = Assignment::zeros(n);
    for (i, ai) in a.0.iter().enumerate() {
        out.0[table.mul(h, i)] = ai.clone();
    }
    Ok(out)
}

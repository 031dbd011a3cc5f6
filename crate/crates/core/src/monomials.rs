//! Exponent vectors and monomial orders.
//!
//! An [`Exponent`] is a point of `N^n`; it stands both for the monomial
//! `x^a` and for the subscripts of the parameter variables `T[a;b]`.
//! Every order is reduced to an integer weight matrix whose rows are
//! compared lexicographically, so the named orders (lex, grlex, grevlex)
//! and user-supplied matrix orders share one comparison path.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("priority must be a permutation of 0..{0}")]
    BadPriority(usize),
    #[error("weight matrix rows must have length {0}")]
    BadRowLength(usize),
    #[error("weight matrix has rank {rank} < {n}; it ties distinct exponents")]
    RankDeficient { rank: usize, n: usize },
    #[error("weight matrix column {0} is not lexicographically positive; 0 would not be minimal")]
    NotPositive(usize),
    #[error("unknown order kind `{0}`")]
    UnknownKind(String),
}

/// A point of `N^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(coords: Vec<u32>) -> Self {
        Exponent(coords)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The canonical vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.dim(), other.dim());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if it stays in `N^n`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn add_unit(&self, i: usize) -> Exponent {
        let mut v = self.0.clone();
        v[i] += 1;
        Exponent(v)
    }

    pub fn sub_unit(&self, i: usize) -> Option<Exponent> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Exponent(v))
    }

    /// Componentwise `self <= other`, i.e. `x^self | x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Least common multiple of the two monomials.
    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn dot(&self, w: &[i64]) -> i128 {
        self.0
            .iter()
            .zip(w)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

impl<const N: usize> From<[u32; N]> for Exponent {
    fn from(v: [u32; N]) -> Self {
        Exponent(v.to_vec())
    }
}

/// `a | b` with a dimension check.
pub fn divides(a: &Exponent, b: &Exponent) -> Result<bool, OrderError> {
    if a.dim() != b.dim() {
        return Err(OrderError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.divides(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
    Matrix,
}

/// Order specification as it appears in job configs:
/// `{"kind": "lex"|"grlex"|"grevlex"|"matrix", "rows": [[...]], "priority": [...]}`,
/// or just the kind name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "OrderSpecRepr")]
pub struct OrderSpec {
    pub kind: OrderKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub priority: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrderSpecRepr {
    Name(OrderKind),
    Full {
        kind: OrderKind,
        #[serde(default)]
        rows: Vec<Vec<i64>>,
        #[serde(default)]
        priority: Vec<usize>,
    },
}

impl From<OrderSpecRepr> for OrderSpec {
    fn from(r: OrderSpecRepr) -> Self {
        match r {
            OrderSpecRepr::Name(kind) => OrderSpec::named(kind),
            OrderSpecRepr::Full { kind, rows, priority } => OrderSpec { kind, rows, priority },
        }
    }
}

impl OrderSpec {
    pub fn named(kind: OrderKind) -> Self {
        OrderSpec {
            kind,
            rows: Vec::new(),
            priority: Vec::new(),
        }
    }

    /// Parses `lex`, `grlex`, `grevlex` or a JSON object.
    pub fn parse(s: &str) -> Result<Self, OrderError> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| OrderError::UnknownKind(e.to_string()));
        }
        match t {
            "lex" => Ok(Self::named(OrderKind::Lex)),
            "grlex" => Ok(Self::named(OrderKind::Grlex)),
            "grevlex" => Ok(Self::named(OrderKind::Grevlex)),
            other => Err(OrderError::UnknownKind(other.to_string())),
        }
    }
}

/// A monomial order on `N^n`.
///
/// Internally always a weight matrix in original coordinates; `priority[k]`
/// is the variable with the k-th highest priority (default `x1 > x2 > ...`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    n: usize,
    kind: OrderKind,
    priority: Vec<usize>,
    rows: Vec<Vec<i64>>,
}

impl MonomialOrder {
    pub fn lex(n: usize) -> Self {
        Self::from_spec(n, &OrderSpec::named(OrderKind::Lex)).expect("lex is valid")
    }

    pub fn grlex(n: usize) -> Self {
        Self::from_spec(n, &OrderSpec::named(OrderKind::Grlex)).expect("grlex is valid")
    }

    pub fn grevlex(n: usize) -> Self {
        Self::from_spec(n, &OrderSpec::named(OrderKind::Grevlex)).expect("grevlex is valid")
    }

    pub fn matrix(rows: Vec<Vec<i64>>) -> Result<Self, OrderError> {
        let n = rows.first().map_or(0, |r| r.len());
        Self::from_spec(
            n,
            &OrderSpec {
                kind: OrderKind::Matrix,
                rows,
                priority: Vec::new(),
            },
        )
    }

    pub fn from_spec(n: usize, spec: &OrderSpec) -> Result<Self, OrderError> {
        let priority = if spec.priority.is_empty() {
            (0..n).collect::<Vec<_>>()
        } else {
            spec.priority.clone()
        };
        let mut seen = vec![false; n];
        if priority.len() != n {
            return Err(OrderError::BadPriority(n));
        }
        for &p in &priority {
            if p >= n || seen[p] {
                return Err(OrderError::BadPriority(n));
            }
            seen[p] = true;
        }
        let unit = |i: usize, s: i64| {
            let mut r = vec![0i64; n];
            r[i] = s;
            r
        };
        let rows = match spec.kind {
            OrderKind::Lex => priority.iter().map(|&p| unit(p, 1)).collect(),
            OrderKind::Grlex => {
                let mut rows = vec![vec![1i64; n]];
                rows.extend(priority.iter().take(n.saturating_sub(1)).map(|&p| unit(p, 1)));
                rows
            }
            OrderKind::Grevlex => {
                let mut rows = vec![vec![1i64; n]];
                rows.extend(priority.iter().skip(1).rev().map(|&p| unit(p, -1)));
                rows
            }
            OrderKind::Matrix => {
                // Matrix rows address permuted coordinates.
                let mut rows = Vec::with_capacity(spec.rows.len());
                for r in &spec.rows {
                    if r.len() != n {
                        return Err(OrderError::BadRowLength(n));
                    }
                    let mut orig = vec![0i64; n];
                    for (k, &p) in priority.iter().enumerate() {
                        orig[p] = r[k];
                    }
                    rows.push(orig);
                }
                rows
            }
        };
        let rank = integer_rank(&rows, n);
        if rank < n {
            return Err(OrderError::RankDeficient { rank, n });
        }
        for j in 0..n {
            match rows.iter().map(|r| r[j]).find(|&v| v != 0) {
                Some(v) if v > 0 => {}
                _ => return Err(OrderError::NotPositive(j)),
            }
        }
        Ok(MonomialOrder {
            n,
            kind: spec.kind.clone(),
            priority,
            rows,
        })
    }

    pub fn spec(&self) -> OrderSpec {
        let identity = self.priority.iter().enumerate().all(|(i, &p)| i == p);
        let rows = if self.kind == OrderKind::Matrix {
            self.rows
                .iter()
                .map(|r| self.priority.iter().map(|&p| r[p]).collect())
                .collect()
        } else {
            Vec::new()
        };
        OrderSpec {
            kind: self.kind.clone(),
            rows,
            priority: if identity { Vec::new() } else { self.priority.clone() },
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    /// Weight rows in original coordinates, highest priority first.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `a` versus `b`; `Greater` means `a` is the larger monomial.
    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering, OrderError> {
        for e in [a, b] {
            if e.dim() != self.n {
                return Err(OrderError::DimensionMismatch {
                    expected: self.n,
                    got: e.dim(),
                });
            }
        }
        Ok(self.cmp(a, b))
    }

    /// Infallible comparison for exponents already known to have dimension `n`.
    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        for row in &self.rows {
            match a.dot(row).cmp(&b.dot(row)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        // Full column rank makes this unreachable for distinct exponents.
        unreachable!("weight matrix of full rank tied {a} and {b}")
    }

    pub fn less(&self, a: &Exponent, b: &Exponent) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    pub fn sort(&self, v: &mut [Exponent]) {
        v.sort_by(|a, b| self.cmp(a, b));
    }

    /// `|a| > |b|` implies `a > b`.
    pub fn is_graded(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let first = &self.rows[0];
        first[0] > 0 && first.iter().all(|&v| v == first[0])
    }
}

/// Rank over Q of a small integer matrix (fraction-free elimination).
fn integer_rank(rows: &[Vec<i64>], n: usize) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                for c in 0..n {
                    m[r][c] = m[r][c] * a - m[rank][c] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &v| gcd(g, v.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

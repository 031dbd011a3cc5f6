//! Standard sets given by their corners.
//!
//! `Δ` is never materialized: membership is a divisibility test against the
//! corners and every enumeration is truncated by total degree.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monomials::{Exponent, MonomialOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StandardSetError {
    #[error("corner {0} is divisible by corner {1}; corners must form an antichain")]
    AntichainViolation(Exponent, Exponent),
    #[error("corner {corner} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        corner: Exponent,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    InDelta,
    InBorder,
    Outside,
}

/// `(ε; λ, μ)` with `λ <= μ` as variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeTriple {
    pub eps: Exponent,
    pub lam: usize,
    pub mu: usize,
}

impl EdgeTriple {
    pub fn new(eps: Exponent, a: usize, b: usize) -> Self {
        EdgeTriple {
            eps,
            lam: a.min(b),
            mu: a.max(b),
        }
    }
}

impl fmt::Display for EdgeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};e{},e{})", self.eps, self.lam + 1, self.mu + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardSet {
    n: usize,
    corners: Vec<Exponent>,
    theta: Vec<u32>,
}

/// Checks that `corners` is a divisibility antichain and builds the standard
/// set whose corner set it is. An empty list gives `Δ = N^n`.
pub fn validate_corners(n: usize, corners: &[Exponent]) -> Result<StandardSet, StandardSetError> {
    for c in corners {
        if c.dim() != n {
            return Err(StandardSetError::DimensionMismatch {
                corner: c.clone(),
                expected: n,
                got: c.dim(),
            });
        }
    }
    let uniq: BTreeSet<Exponent> = corners.iter().cloned().collect();
    let corners: Vec<Exponent> = uniq.into_iter().collect();
    for a in &corners {
        for b in &corners {
            if a != b && b.divides(a) {
                return Err(StandardSetError::AntichainViolation(a.clone(), b.clone()));
            }
        }
    }
    let theta = (0..n)
        .map(|i| corners.iter().map(|c| c.coords()[i]).max().unwrap_or(0))
        .collect();
    Ok(StandardSet { n, corners, theta })
}

impl StandardSet {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Corners in ascending coordinate-lexicographic order.
    pub fn corners(&self) -> &[Exponent] {
        &self.corners
    }

    pub fn theta(&self) -> &[u32] {
        &self.theta
    }

    /// `Σ θ_i + n`, the degree bound on corners of `Δ ∪ B(Δ)`.
    pub fn edge_bound(&self) -> u32 {
        self.theta.iter().sum::<u32>() + self.n as u32
    }

    pub fn is_corner(&self, b: &Exponent) -> bool {
        self.corners.binary_search(b).is_ok()
    }

    pub fn in_delta(&self, b: &Exponent) -> bool {
        !self.corners.iter().any(|c| c.divides(b))
    }

    pub fn in_border(&self, b: &Exponent) -> bool {
        !self.in_delta(b) && (0..self.n).any(|i| b.sub_unit(i).is_some_and(|p| self.in_delta(&p)))
    }

    pub fn in_delta_or_border(&self, b: &Exponent) -> bool {
        self.in_delta(b) || (0..self.n).any(|i| b.sub_unit(i).is_some_and(|p| self.in_delta(&p)))
    }

    pub fn membership(&self, b: &Exponent) -> Membership {
        if self.in_delta(b) {
            Membership::InDelta
        } else if self.in_border(b) {
            Membership::InBorder
        } else {
            Membership::Outside
        }
    }

    /// `Δ` is finite iff every axis carries a pure-power corner.
    pub fn is_finite(&self) -> bool {
        (0..self.n).all(|i| {
            self.corners
                .iter()
                .any(|c| c.coords().iter().enumerate().all(|(j, &v)| (j == i) == (v > 0)))
        })
    }

    /// All `β ∈ Δ` with `|β| <= d`, ascending by `ord`.
    pub fn enumerate_delta_upto(&self, d: u32, ord: &MonomialOrder) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = exponents_upto(self.n, d)
            .into_iter()
            .filter(|b| self.in_delta(b))
            .collect();
        ord.sort(&mut v);
        v
    }

    /// All border elements of degree `<= d`, ascending by `ord`.
    pub fn enumerate_border_upto(&self, d: u32, ord: &MonomialOrder) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = exponents_upto(self.n, d)
            .into_iter()
            .filter(|b| self.in_border(b))
            .collect();
        ord.sort(&mut v);
        v
    }

    /// Largest degree of an element of `Δ`, if `Δ` is finite.
    pub fn max_delta_degree(&self) -> Option<u32> {
        if !self.is_finite() {
            return None;
        }
        let box_bound: u32 = self.theta.iter().sum();
        exponents_upto(self.n, box_bound)
            .into_iter()
            .filter(|b| self.in_delta(b))
            .map(|b| b.degree())
            .max()
    }

    /// Minimal generators of `N^n \ (Δ ∪ B(Δ))`, searched in the box
    /// `η_i <= θ_i + 1`.
    pub fn corners_of_delta_union_border(&self) -> Vec<Exponent> {
        let bounds: Vec<u32> = self.theta.iter().map(|t| t + 1).collect();
        exponents_in_box(&bounds)
            .into_iter()
            .filter(|eta| {
                !self.in_delta_or_border(eta)
                    && (0..self.n)
                        .all(|i| eta.sub_unit(i).map_or(true, |p| self.in_delta_or_border(&p)))
            })
            .collect()
    }

    /// Every edge triple, with `λ <= μ`, sorted.
    pub fn edge_triples(&self) -> Vec<EdgeTriple> {
        let outer: BTreeSet<Exponent> = self.corners_of_delta_union_border().into_iter().collect();
        let bounds: Vec<u32> = self.theta.iter().map(|t| t + 1).collect();
        let mut out = Vec::new();
        for eps in exponents_in_box(&bounds) {
            if !self.in_delta(&eps) {
                continue;
            }
            for lam in 0..self.n {
                let el = eps.add_unit(lam);
                if !self.in_border(&el) {
                    continue;
                }
                for mu in lam..self.n {
                    let em = eps.add_unit(mu);
                    if self.in_border(&em) && outer.contains(&el.add_unit(mu)) {
                        out.push(EdgeTriple::new(eps.clone(), lam, mu));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `max({|α|+1 : α corner} ∪ {|ε|+2 : ε edge point})`.
    pub fn procedure_degree_bound(&self, triples: &[EdgeTriple]) -> u32 {
        let c = self.corners.iter().map(|a| a.degree() + 1);
        let t = triples.iter().map(|t| t.eps.degree() + 2);
        c.chain(t).max().unwrap_or(0)
    }

    /// Smallest (or largest) `i` with `α - e_i` in the border.
    pub fn nu_direction(&self, alpha: &Exponent, strategy: NuStrategy) -> Option<usize> {
        let ok = |i: &usize| alpha.sub_unit(*i).is_some_and(|p| self.in_border(&p));
        match strategy {
            NuStrategy::Smallest => (0..self.n).find(ok),
            NuStrategy::Largest => (0..self.n).rev().find(ok),
        }
    }
}

/// Which admissible direction to pick for `ν(α)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NuStrategy {
    #[default]
    Smallest,
    Largest,
}

/// All exponents in `N^n` of degree `<= d`.
pub fn exponents_upto(n: usize, d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if i == cur.len() {
            out.push(Exponent::new(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All exponents with `η_i <= bounds[i]`.
pub fn exponents_in_box(bounds: &[u32]) -> Vec<Exponent> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=b).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Exponent::new).collect()
}

//! Sparse multivariate polynomials over Q in the parameter variables
//! `T[α;β]`, plus the positive weight that grades them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monomials::{Exponent, MonomialOrder};

pub type Rational = BigRational;
pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no positive weight separates the {0} points with the given order")]
    NoWeightFound(usize),
    #[error("bad coefficient `{0}`")]
    BadCoefficient(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("unknown variable T[{0};{1}]")]
    UnknownVar(Exponent, Exponent),
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::BadCoefficient(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A power product of variables, sorted by variable id, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut p: Vec<(Var, u32)>) -> Self {
        p.retain(|&(_, e)| e > 0);
        p.sort();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(p.len());
        for (v, e) in p {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent_of(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.0[i].1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let d = match other.0.get(j) {
                Some(&(w, f)) if w == v => {
                    j += 1;
                    e.checked_sub(f)?
                }
                _ => e,
            };
            if d > 0 {
                out.push((v, d));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    pub fn weight(&self, w: &impl Fn(Var) -> i128) -> i128 {
        self.0.iter().map(|&(v, e)| w(v) * e as i128).sum()
    }
}

/// Sparse polynomial with exact rational coefficients; no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &Poly, b: &Poly) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Sum of the degree-one terms.
    pub fn linear_component(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == 1)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the degree-one term `v`.
    pub fn linear_coeff(&self, v: Var) -> Rational {
        self.coeff(&Monomial::var(v))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent_of(v) > 0)
    }

    /// Simultaneous substitution of every bound variable, expanded.
    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut pow_cache: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.powers() {
                match bindings.get(&v) {
                    Some(img) => {
                        let p = pow_cache
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        acc = &acc * &p;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                acc = &acc * &Poly::term(Monomial(kept), Rational::one());
            }
            out.add_scaled(&acc, &Rational::one());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &impl Fn(Var) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.powers() {
                let x = point(v);
                for _ in 0..e {
                    t *= &x;
                }
            }
            total += t;
        }
        total
    }

    /// True iff every term has the same weight.
    pub fn is_homogeneous(&self, w: &impl Fn(Var) -> i128) -> bool {
        let mut it = self.terms.keys().map(|m| m.weight(w));
        match it.next() {
            None => true,
            Some(first) => it.all(|x| x == first),
        }
    }

    pub fn weight(&self, w: &impl Fn(Var) -> i128) -> Option<i128> {
        self.terms.keys().next().map(|m| m.weight(w))
    }

    /// Integer multiple with coprime coefficients and positive first term
    /// (in the internal monomial order); zero stays zero.
    pub fn primitive(&self) -> Poly {
        let Some((_, first)) = self.terms.iter().next_back() else {
            return Poly::zero();
        };
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut factor = Rational::new(den, g);
        if first.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let m2 = Monomial::from_powers(m.powers().iter().map(|&(v, e)| (f(v), e)).collect());
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Human-readable form. `rank` orders variables for display
    /// (smaller rank prints first); terms are listed lexicographically
    /// descending in that ranking.
    pub fn render(&self, name: &impl Fn(Var) -> String, rank: &impl Fn(Var) -> usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let key = |m: &Monomial| {
            let mut v: Vec<(usize, u32)> = m.powers().iter().map(|&(x, e)| (rank(x), e)).collect();
            v.sort();
            v
        };
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        // Lex descending: compare the leading-ranked variables first.
        terms.sort_by(|(a, _), (b, _)| lex_desc(&key(a), &key(b)));
        let mut s = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let mut factors: Vec<(usize, String, u32)> = m
                .powers()
                .iter()
                .map(|&(v, e)| (rank(v), name(v), e))
                .collect();
            factors.sort();
            let long = factors.iter().any(|(_, n, _)| n.chars().count() > 1);
            let body: Vec<String> = factors
                .iter()
                .map(|(_, n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            let body = body.join(if long { "*" } else { "" });
            if abs.is_one() && !m.is_one() {
                s.push_str(&body);
            } else {
                s.push_str(&format_rational(&abs));
                if !m.is_one() {
                    if long {
                        s.push('*');
                    }
                    s.push_str(&body);
                }
            }
        }
        s
    }
}

fn lex_desc(a: &[(usize, u32)], b: &[(usize, u32)]) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    // Dense comparison: a variable with smaller rank present in only one
    // monomial makes that monomial larger.
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Equal,
            (Some(_), None) => return Less,
            (None, Some(_)) => return Greater,
            (Some(&(ra, ea)), Some(&(rb, eb))) => {
                if ra != rb {
                    return if ra < rb { Less } else { Greater };
                }
                if ea != eb {
                    return eb.cmp(&ea);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        out.add_product(self, rhs);
        out
    }
}

/// The parameter variable `T[α;β]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TVar {
    pub alpha: Exponent,
    pub beta: Exponent,
}

impl std::fmt::Display for TVar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T[{};{}]", self.alpha, self.beta)
    }
}

/// The variables of the parameter ring, sorted ascending by `α` then `β`
/// under the session order; a variable's id is its position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarTable {
    vars: Vec<TVar>,
    index: HashMap<TVar, Var>,
}

impl VarTable {
    pub fn new(mut vars: Vec<TVar>, ord: &MonomialOrder) -> Self {
        vars.sort_by(|a, b| ord.cmp(&a.alpha, &b.alpha).then_with(|| ord.cmp(&a.beta, &b.beta)));
        vars.dedup();
        let index = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as Var))
            .collect();
        VarTable { vars, index }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, v: Var) -> &TVar {
        &self.vars[v as usize]
    }

    pub fn lookup(&self, alpha: &Exponent, beta: &Exponent) -> Option<Var> {
        self.index
            .get(&TVar {
                alpha: alpha.clone(),
                beta: beta.clone(),
            })
            .copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &TVar)> {
        self.vars.iter().enumerate().map(|(i, v)| (i as Var, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarPowerJson {
    pub alpha: Exponent,
    pub beta: Exponent,
    pub exp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<VarPowerJson>,
}

pub fn poly_to_json(p: &Poly, vars: &VarTable) -> Vec<TermJson> {
    p.terms()
        .rev()
        .map(|(m, c)| TermJson {
            coeff: format_rational(c),
            monomial: m
                .powers()
                .iter()
                .map(|&(v, e)| {
                    let t = vars.get(v);
                    VarPowerJson {
                        alpha: t.alpha.clone(),
                        beta: t.beta.clone(),
                        exp: e,
                    }
                })
                .collect(),
        })
        .collect()
}

pub fn poly_from_json(terms: &[TermJson], vars: &VarTable) -> Result<Poly, PolyError> {
    let mut p = Poly::zero();
    for t in terms {
        let c = parse_rational(&t.coeff)?;
        let mut powers = Vec::new();
        for vp in &t.monomial {
            let v = vars
                .lookup(&vp.alpha, &vp.beta)
                .ok_or_else(|| PolyError::UnknownVar(vp.alpha.clone(), vp.beta.clone()))?;
            powers.push((v, vp.exp));
        }
        p.add_term(Monomial::from_powers(powers), c);
    }
    Ok(p)
}

/// A positive integer weight vector `w` with `u(α) = α·w`; it grades the
/// parameter ring by `W(T[α;β]) = u(α) - u(β)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightW {
    pub w: Vec<i64>,
}

impl WeightW {
    pub fn u(&self, a: &Exponent) -> i128 {
        a.dot(&self.w)
    }

    pub fn of_var(&self, t: &TVar) -> i128 {
        self.u(&t.alpha) - self.u(&t.beta)
    }

    /// Weight function on variable ids of `vars`.
    pub fn var_weights(&self, vars: &VarTable) -> Vec<i128> {
        vars.iter().map(|(_, t)| self.of_var(t)).collect()
    }
}

/// Finds `w` with all `w_i > 0` such that `u` is strictly increasing along
/// `pts` sorted by `ord`. Tries `w = Σ M^(m-1-i) row_i` for `M = 2, 4, 8, ...`.
pub fn build_weight(ord: &MonomialOrder, pts: &[Exponent]) -> Result<WeightW, PolyError> {
    let n = ord.dim();
    let mut sorted: Vec<Exponent> = pts.to_vec();
    sorted.sort();
    sorted.dedup();
    ord.sort(&mut sorted);
    let rows = ord.rows();
    let mut base: i128 = 2;
    while base <= 1 << 40 {
        let mut w = vec![0i128; n];
        let mut scale: i128 = 1;
        let mut overflow = false;
        for row in rows.iter().rev() {
            for (wi, &r) in w.iter_mut().zip(row) {
                *wi += scale * r as i128;
            }
            scale = match scale.checked_mul(base) {
                Some(s) if s < i64::MAX as i128 => s,
                _ => {
                    overflow = true;
                    break;
                }
            };
        }
        if overflow {
            break;
        }
        if w.iter().all(|&x| x > 0 && x < i64::MAX as i128) {
            let w: Vec<i64> = w.into_iter().map(|x| x as i64).collect();
            let ok = sorted.windows(2).all(|p| p[0].dot(&w) < p[1].dot(&w));
            if ok {
                return Ok(WeightW { w });
            }
        }
        base *= 2;
    }
    Err(PolyError::NoWeightFound(sorted.len()))
}

/// Renders a polynomial with `T[α;β]` names.
pub fn render_raw(p: &Poly, vars: &VarTable) -> String {
    let n = vars.len();
    p.render(
        &|v| {
            let t = vars.get(v);
            let mut s = String::new();
            let _ = write!(s, "T{}{}", t.alpha, t.beta);
            s
        },
        &|v| n - v as usize,
    )
}

/// Row-echelon basis of a finite-dimensional space of polynomials. Each
/// stored row is monic at its largest monomial and no other row contains
/// that monomial.
#[derive(Debug, Clone, Default)]
pub struct PolySpan {
    rows: BTreeMap<Monomial, Poly>,
}

impl PolySpan {
    pub fn new() -> Self {
        PolySpan::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `p` after eliminating every pivot monomial.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let mut cur = p.clone();
        let mut bound: Option<Monomial> = None;
        loop {
            let hit = {
                let mut it: Box<dyn Iterator<Item = (&Monomial, &Rational)>> = match &bound {
                    Some(b) => Box::new(cur.terms.range(..b.clone()).rev()),
                    None => Box::new(cur.terms.iter().rev()),
                };
                it.find(|(m, _)| self.rows.contains_key(*m)).map(|(m, c)| (m.clone(), c.clone()))
            };
            let Some((m, c)) = hit else {
                return cur;
            };
            cur.add_scaled(&self.rows[&m], &-c);
            bound = Some(m);
        }
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p`; returns `false` when it was already in the span.
    pub fn insert(&mut self, p: &Poly) -> bool {
        let r = self.reduce(p);
        let Some((lead, c)) = r.terms.iter().next_back() else {
            return false;
        };
        let lead = lead.clone();
        let r = r.scale(&c.recip());
        for row in self.rows.values_mut() {
            let k = row.coeff(&lead);
            if !k.is_zero() {
                row.add_scaled(&r, &-k);
            }
        }
        self.rows.insert(lead, r);
        true
    }
}

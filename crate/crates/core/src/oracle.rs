//! Direct check that a family of polynomials in `x` is the reduced Groebner
//! basis of its ideal with a prescribed set of leading exponents.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::monomials::{Exponent, MonomialOrder};
use crate::par::Exec;
use crate::poly::{format_rational, parse_rational, PolyError, Rational};

/// Sparse polynomial in `x_1, ..., x_n` over Q.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct XPoly {
    terms: BTreeMap<Exponent, Rational>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly::default()
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut p = XPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = XPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `self += c · x^shift · other`.
    pub fn add_shifted(&mut self, other: &XPoly, shift: &Exponent, c: &Rational) {
        for (e, a) in &other.terms {
            self.add_term(e.add(shift), a * c);
        }
    }

    /// Leading exponent under `ord`.
    pub fn leading(&self, ord: &MonomialOrder) -> Option<&Exponent> {
        self.terms.keys().max_by(|a, b| ord.cmp(a, b))
    }

    pub fn leading_coeff(&self, ord: &MonomialOrder) -> Option<&Rational> {
        self.leading(ord).map(|e| &self.terms[e])
    }

    pub fn render(&self, ord: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut es: Vec<&Exponent> = self.terms.keys().collect();
        es.sort_by(|a, b| ord.cmp(b, a));
        let mut parts = Vec::new();
        for e in es {
            parts.push(format!("{}*x^{}", format_rational(&self.terms[e]), e));
        }
        parts.join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XTermJson {
    pub coeff: String,
    pub exp: Exponent,
}

impl XPoly {
    pub fn to_json(&self) -> Vec<XTermJson> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| XTermJson {
                coeff: format_rational(c),
                exp: e.clone(),
            })
            .collect()
    }

    pub fn from_json(t: &[XTermJson]) -> Result<Self, PolyError> {
        let mut p = XPoly::zero();
        for x in t {
            p.add_term(x.exp.clone(), parse_rational(&x.coeff)?);
        }
        Ok(p)
    }
}

/// Names `x, y, z` for up to three variables, `x1, ..., xn` otherwise.
pub fn x_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl XPoly {
    /// Parses sums of terms such as `x^2*y - 3/2 xz + 1` in `n` variables
    /// named as in [`x_names`]. `*` between factors is optional.
    pub fn parse(src: &str, n: usize) -> Result<Self, PolyError> {
        let err = || PolyError::Parse(src.to_string());
        let names = x_names(n);
        let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err());
        }
        let mut p = XPoly::zero();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = 1;
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(err());
            }
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let mut c = if i > start {
                parse_rational(&chars[start..i].iter().collect::<String>())?
            } else {
                Rational::one()
            };
            if sign < 0 {
                c = -c;
            }
            let mut exp = vec![0u32; n];
            let mut factors = i > start;
            loop {
                if i < chars.len() && chars[i] == '*' {
                    i += 1;
                }
                if i >= chars.len() || chars[i] == '+' || chars[i] == '-' {
                    break;
                }
                let rest: String = chars[i..].iter().collect();
                let (k, len) = names
                    .iter()
                    .enumerate()
                    .filter(|(_, nm)| rest.starts_with(nm.as_str()))
                    .filter(|(_, nm)| n <= 3 || !rest[nm.len()..].starts_with(|c: char| c.is_ascii_digit()))
                    .map(|(k, nm)| (k, nm.len()))
                    .next()
                    .ok_or_else(err)?;
                i += len;
                let mut e = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let s = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    e = chars[s..i].iter().collect::<String>().parse().map_err(|_| err())?;
                }
                exp[k] += e;
                factors = true;
            }
            if !factors {
                return Err(err());
            }
            p.add_term(Exponent::new(exp), c);
        }
        Ok(p)
    }

    /// Inverse of [`XPoly::parse`], terms in descending order.
    pub fn to_text(&self, ord: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let n = self.terms.keys().next().map_or(0, |e| e.dim());
        let names = x_names(n);
        let mut es: Vec<&Exponent> = self.terms.keys().collect();
        es.sort_by(|a, b| ord.cmp(b, a));
        let mut s = String::new();
        for (k, e) in es.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if neg {
                s.push('-');
            } else if k > 0 {
                s.push('+');
            }
            let mut factors = Vec::new();
            for (i, &d) in e.coords().iter().enumerate() {
                match d {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{d}", names[i])),
                }
            }
            if !abs.is_one() || factors.is_empty() {
                factors.insert(0, format_rational(&abs));
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

/// Division by monic `gs`, always reducing the largest reducible monomial.
/// Returns `(quotients, remainder)`.
pub fn divide(f: &XPoly, gs: &[XPoly], ord: &MonomialOrder) -> (Vec<XPoly>, XPoly) {
    let leads: Vec<Option<Exponent>> = gs.iter().map(|g| g.leading(ord).cloned()).collect();
    let lcs: Vec<Rational> = gs
        .iter()
        .map(|g| g.leading_coeff(ord).cloned().unwrap_or_else(Rational::one))
        .collect();
    let mut q = vec![XPoly::zero(); gs.len()];
    let mut p = f.clone();
    loop {
        let mut best: Option<(Exponent, usize)> = None;
        for e in p.terms.keys() {
            if best.as_ref().is_some_and(|(b, _)| ord.cmp(e, b).is_le()) {
                continue;
            }
            if let Some(i) = leads.iter().position(|l| l.as_ref().is_some_and(|l| l.divides(e))) {
                best = Some((e.clone(), i));
            }
        }
        let Some((e, i)) = best else {
            return (q, p);
        };
        let lead = leads[i].as_ref().expect("divisor is nonzero");
        let shift = e.checked_sub(lead).expect("divides");
        let c = &p.terms[&e] / &lcs[i];
        p.add_shifted(&gs[i], &shift, &-&c);
        q[i].add_term(shift, c);
    }
}

/// `S(f, g)` for monic `f, g`.
pub fn s_poly(f: &XPoly, g: &XPoly, ord: &MonomialOrder) -> XPoly {
    let (Some(lf), Some(lg)) = (f.leading(ord), g.leading(ord)) else {
        return XPoly::zero();
    };
    let l = lf.lcm(lg);
    let mut s = XPoly::zero();
    s.add_shifted(f, &l.checked_sub(lf).expect("lcm"), &f.leading_coeff(ord).expect("nonzero").recip());
    s.add_shifted(g, &l.checked_sub(lg).expect("lcm"), &-g.leading_coeff(ord).expect("nonzero").recip());
    s
}

/// Why a family is not a reduced Groebner basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    /// The set of leading exponents differs from the corners.
    LeadingExponents { found: Vec<Exponent>, expected: Vec<Exponent> },
    NotMonic { index: usize },
    ZeroElement { index: usize },
    /// A tail monomial lies outside the standard set.
    TailOutsideDelta { index: usize, exp: Exponent },
    /// An S-polynomial has a nonzero remainder.
    SPair { i: usize, j: usize, remainder: Vec<XTermJson> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub ok: bool,
    pub failure: Option<Failure>,
    pub pairs_checked: usize,
}

impl Certificate {
    fn fail(f: Failure, pairs_checked: usize) -> Self {
        Certificate {
            ok: false,
            failure: Some(f),
            pairs_checked,
        }
    }
}

/// Checks that `gs` is the reduced Groebner basis of `⟨gs⟩` and that its
/// leading exponents are exactly `corners`. All pairs are checked.
pub fn is_reduced_groebner(gs: &[XPoly], corners: &[Exponent], ord: &MonomialOrder, exec: Exec) -> Certificate {
    for (i, g) in gs.iter().enumerate() {
        match g.leading_coeff(ord) {
            None => return Certificate::fail(Failure::ZeroElement { index: i }, 0),
            Some(c) if !c.is_one() => return Certificate::fail(Failure::NotMonic { index: i }, 0),
            _ => {}
        }
    }
    let mut found: Vec<Exponent> = gs.iter().filter_map(|g| g.leading(ord).cloned()).collect();
    let mut expected = corners.to_vec();
    found.sort();
    expected.sort();
    expected.dedup();
    if found != expected {
        return Certificate::fail(Failure::LeadingExponents { found, expected }, 0);
    }
    let in_delta = |e: &Exponent| !corners.iter().any(|c| c.divides(e));
    for (i, g) in gs.iter().enumerate() {
        let lead = g.leading(ord).expect("nonzero");
        for e in g.support() {
            if e != lead && !in_delta(e) {
                return Certificate::fail(
                    Failure::TailOutsideDelta {
                        index: i,
                        exp: e.clone(),
                    },
                    0,
                );
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..gs.len())
        .flat_map(|i| (i + 1..gs.len()).map(move |j| (i, j)))
        .collect();
    let rems = exec.map(&pairs, |&(i, j)| divide(&s_poly(&gs[i], &gs[j], ord), gs, ord).1);
    for (k, ((i, j), r)) in pairs.iter().zip(rems).enumerate() {
        if !r.is_zero() {
            return Certificate::fail(
                Failure::SPair {
                    i: *i,
                    j: *j,
                    remainder: r.to_json(),
                },
                k + 1,
            );
        }
    }
    Certificate {
        ok: true,
        failure: None,
        pairs_checked: pairs.len(),
    }
}

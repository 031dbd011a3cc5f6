//! The ideal of the Groebner stratum: one generator for every nonzero
//! coefficient of a lifted relation between corner polynomials.
//!
//! * `(α, λ)` with `α` a corner or border element and `α+λ` in the
//!   border: the normal form of `x^(α+λ)` must equal `x^λ` times the
//!   normal form of `x^α`, so `U[α+λ;·] - x^λ U[α;·]` must vanish. With
//!   `α` restricted to corners the ideal can depend on the choice of `ν`;
//!   border sources close that gap.
//! * `(ε; λ, μ)` an edge triple: `x^μ U[ε+λ;·] - x^λ U[ε+μ;·]` must vanish.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomials::{Exponent, MonomialOrder};
use crate::par::Exec;
use crate::poly::{build_weight, Poly, Var, VarTable, WeightW};
use crate::standard_set::{EdgeTriple, NuStrategy, StandardSet};
use crate::ufamily::{build_ufamily, parameter_vars, Mode, Row, UFamily, UFamilyError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GenTag {
    /// Coefficient of `x^beta` in `U[α+e_λ;·] - x^λ U[α;·]`.
    A1 { alpha: Exponent, lambda: usize, beta: Exponent },
    /// Coefficient of `x^beta` in `x^μ U[ε+e_λ;·] - x^λ U[ε+e_μ;·]`.
    A2 {
        eps: Exponent,
        lambda: usize,
        mu: usize,
        beta: Exponent,
    },
}

impl std::fmt::Display for GenTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GenTag::A1 { alpha, lambda, beta } => write!(f, "A1[{alpha};e{};{beta}]", lambda + 1),
            GenTag::A2 { eps, lambda, mu, beta } => {
                write!(f, "A2[{eps};e{},e{};{beta}]", lambda + 1, mu + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub tag: GenTag,
    pub poly: Poly,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Override of the degree bound `D`; must not be below the default.
    pub degree_bound: Option<u32>,
    pub nu: NuStrategy,
    pub exec: Exec,
}

#[derive(Debug, Clone)]
pub struct SchemeIdeal {
    pub ss: StandardSet,
    pub ord: MonomialOrder,
    pub mode: Mode,
    pub vars: VarTable,
    pub weight: WeightW,
    /// `D` used for the U-family (the largest row degree in truncated mode).
    pub degree_bound: u32,
    pub default_degree_bound: u32,
    pub triples: Vec<EdgeTriple>,
    /// Generators after dropping zeros and exact duplicates.
    pub generators: Vec<Generator>,
    pub a1_count: usize,
    pub a2_count: usize,
    pub ufamily: UFamily,
}

impl SchemeIdeal {
    pub fn var_weight(&self, v: Var) -> i128 {
        self.weight.of_var(self.vars.get(v))
    }

    pub fn polys(&self) -> Vec<Poly> {
        self.generators.iter().map(|g| g.poly.clone()).collect()
    }

    /// Corner polynomials `x^α - Σ_β T[α;β] x^β` after applying `bindings`
    /// to the coefficients. Entries that become zero are dropped.
    /// One member per corner, largest corner first.
    pub fn family(&self, bindings: &HashMap<Var, Poly>) -> Vec<FamilyMember> {
        let mut corners = self.ss.corners().to_vec();
        corners.sort_by(|x, y| self.ord.cmp(y, x));
        corners
            .iter()
            .map(|a| {
                let mut tail: Vec<(Exponent, Poly)> = self
                    .vars
                    .iter()
                    .filter(|(_, t)| &t.alpha == a)
                    .map(|(v, t)| (t.beta.clone(), Poly::var(v).substitute(bindings)))
                    .filter(|(_, p)| !p.is_zero())
                    .collect();
                tail.sort_by(|x, y| self.ord.cmp(&y.0, &x.0));
                FamilyMember {
                    corner: a.clone(),
                    tail,
                }
            })
            .collect()
    }
}

/// `g_α = x^α - Σ tail[β] x^β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub corner: Exponent,
    pub tail: Vec<(Exponent, Poly)>,
}

/// Pairs `(α, λ)` with `α` a corner or border element, `α+e_λ` in the
/// border and `|α+e_λ| <= bound`, ascending by `α`.
pub fn shift_items(ss: &StandardSet, ord: &MonomialOrder, bound: u32) -> Vec<(Exponent, usize)> {
    let mut sources: Vec<Exponent> = ss.corners().to_vec();
    if bound > 0 {
        sources.extend(ss.enumerate_border_upto(bound - 1, ord));
    }
    sources.sort();
    sources.dedup();
    ord.sort(&mut sources);
    let mut out = Vec::new();
    for a in sources {
        for lam in 0..ss.dim() {
            let al = a.add_unit(lam);
            if al.degree() <= bound && ss.in_border(&al) {
                out.push((a.clone(), lam));
            }
        }
    }
    out
}

/// Default `D`: the procedure bound, widened to the whole border when `Δ`
/// is finite.
pub fn default_degree_bound(ss: &StandardSet, triples: &[EdgeTriple]) -> u32 {
    let d = ss.procedure_degree_bound(triples);
    match ss.max_delta_degree() {
        Some(m) => d.max(m + 1),
        None => d,
    }
}

pub fn build_scheme(ss: &StandardSet, ord: &MonomialOrder, mode: &Mode, opts: BuildOptions) -> Result<SchemeIdeal> {
    if ord.dim() != ss.dim() {
        return Err(Error::Config(format!(
            "order has {} variables, corners have {}",
            ord.dim(),
            ss.dim()
        )));
    }
    let triples = ss.edge_triples();
    let default = default_degree_bound(ss, &triples);
    if let Some(d) = opts.degree_bound {
        if d < default {
            return Err(UFamilyError::DegreeBoundTooSmall {
                given: d,
                required: default,
            }
            .into());
        }
    }
    let vars = parameter_vars(ss, ord, mode)?;
    let mut pts: Vec<Exponent> = ss.corners().to_vec();
    pts.extend(vars.iter().map(|(_, t)| t.beta.clone()));
    let weight = build_weight(ord, &pts)?;

    let cap = match mode {
        Mode::Truncated { .. } => None,
        _ => Some(opts.degree_bound.unwrap_or(default)),
    };
    let a1_items = shift_items(ss, ord, cap.unwrap_or(default));
    let mut fam = build_ufamily(ss, ord, &vars, cap, opts.nu)?;
    fam.ensure_for_relations(&a1_items, &triples)?;

    let a1: Vec<std::result::Result<Vec<Generator>, UFamilyError>> =
        opts.exec.map(&a1_items, |(a, lam)| a1_generators(&fam, ord, a, *lam));
    let a2: Vec<std::result::Result<Vec<Generator>, UFamilyError>> =
        opts.exec.map(&triples, |t| a2_generators(&fam, ord, t));

    let mut generators = Vec::new();
    let mut seen = HashSet::new();
    let mut a1_count = 0;
    let mut a2_count = 0;
    for (batch, is_a1) in a1.into_iter().map(|b| (b, true)).chain(a2.into_iter().map(|b| (b, false))) {
        for g in batch? {
            if !g.poly.constant_term().eq(&num_traits::Zero::zero()) {
                return Err(Error::Internal(format!("generator {} has a constant term", g.tag)));
            }
            if seen.insert(g.poly.clone()) {
                if is_a1 {
                    a1_count += 1;
                } else {
                    a2_count += 1;
                }
                generators.push(g);
            }
        }
    }
    let degree_bound = cap.unwrap_or_else(|| fam.max_row_degree());
    let si = SchemeIdeal {
        ss: ss.clone(),
        ord: ord.clone(),
        mode: mode.clone(),
        vars,
        weight,
        degree_bound,
        default_degree_bound: default,
        triples,
        generators,
        a1_count,
        a2_count,
        ufamily: fam,
    };
    for g in &si.generators {
        if !g.poly.is_homogeneous(&|v| si.var_weight(v)) {
            return Err(Error::Internal(format!("generator {} is not homogeneous", g.tag)));
        }
    }
    Ok(si)
}

fn emit(ord: &MonomialOrder, diff: Row, tag: impl Fn(Exponent) -> GenTag) -> Vec<Generator> {
    let mut out: Vec<Generator> = diff
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(b, p)| Generator { tag: tag(b), poly: p })
        .collect();
    out.sort_by(|x, y| match (&x.tag, &y.tag) {
        (GenTag::A1 { beta: a, .. }, GenTag::A1 { beta: b, .. }) | (GenTag::A2 { beta: a, .. }, GenTag::A2 { beta: b, .. }) => {
            ord.cmp(a, b)
        }
        _ => std::cmp::Ordering::Equal,
    });
    out
}

fn subtract(mut a: Row, b: &Row) -> Row {
    for (k, p) in b {
        let slot = a.entry(k.clone()).or_default();
        *slot = &*slot - p;
    }
    a
}

fn a1_generators(fam: &UFamily, ord: &MonomialOrder, a: &Exponent, lam: usize) -> std::result::Result<Vec<Generator>, UFamilyError> {
    let lhs = fam.row(&a.add_unit(lam))?.into_owned();
    let rhs = fam.shift(&*fam.row(a)?, lam)?;
    Ok(emit(ord, subtract(lhs, &rhs), |beta| GenTag::A1 {
        alpha: a.clone(),
        lambda: lam,
        beta,
    }))
}

fn a2_generators(fam: &UFamily, ord: &MonomialOrder, t: &EdgeTriple) -> std::result::Result<Vec<Generator>, UFamilyError> {
    let lhs = fam.shift(&*fam.row(&t.eps.add_unit(t.lam))?, t.mu)?;
    let rhs = fam.shift(&*fam.row(&t.eps.add_unit(t.mu))?, t.lam)?;
    Ok(emit(ord, subtract(lhs, &rhs), |beta| GenTag::A2 {
        eps: t.eps.clone(),
        lambda: t.lam,
        mu: t.mu,
        beta,
    }))
}

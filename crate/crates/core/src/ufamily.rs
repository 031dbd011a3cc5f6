//! Extension of the corner parameters to the whole border.
//!
//! For `α ∈ Δ ∪ B(Δ)` the row `U[α;·]` is stored sparsely as a map
//! `β -> U[α;β]`. Corner rows hold the bare variables `T[α;β]`; a non-corner
//! border row is obtained from `U[α-ν;·]` by multiplying with `x^ν` and
//! rewriting every `γ+ν` through its own row:
//!
//! `U[α;β] = Σ_γ U[α-ν;γ] · U[γ+ν;β]`.
//!
//! Both `α-ν` and every `γ+ν` with a nonzero coefficient are strictly
//! smaller than `α`, so rows are computed in ascending order.

use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monomials::{Exponent, MonomialOrder};
use crate::poly::{poly_to_json, Poly, TVar, TermJson, VarTable};
use crate::standard_set::{NuStrategy, StandardSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UFamilyError {
    #[error("mode violation: {0}")]
    ModeViolation(String),
    #[error("truncation degree {bound} too small: row {alpha} is needed")]
    TruncationTooSmall { alpha: Exponent, bound: u32 },
    #[error("degree bound {given} is below the required {required}")]
    DegreeBoundTooSmall { given: u32, required: u32 },
    #[error("{0} is not in the standard set")]
    NotInDelta(Exponent),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Which reduced Groebner bases are parameterized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    /// All reduced bases; needs a graded order or a finite standard set.
    Full,
    /// Homogeneous bases only: `T[α;β] = 0` unless `|α| = |β|`.
    Homogeneous,
    /// Bases whose tails are supported on the finite set `dset`.
    Truncated { dset: Vec<Exponent> },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Homogeneous => "homogeneous",
            Mode::Truncated { .. } => "truncated",
        }
    }
}

pub type Row = BTreeMap<Exponent, Poly>;

/// The parameter variables `T[α;β]` for the mode.
pub fn parameter_vars(ss: &StandardSet, ord: &MonomialOrder, mode: &Mode) -> Result<VarTable, UFamilyError> {
    let mut vars = Vec::new();
    let finite_top = ss.max_delta_degree();
    match mode {
        Mode::Full => {
            if !ord.is_graded() && finite_top.is_none() {
                return Err(UFamilyError::ModeViolation(
                    "full mode needs a graded order or a finite standard set; use homogeneous or truncated mode".into(),
                ));
            }
        }
        Mode::Truncated { dset } => {
            for d in dset {
                if d.dim() != ss.dim() || !ss.in_delta(d) {
                    return Err(UFamilyError::NotInDelta(d.clone()));
                }
            }
        }
        Mode::Homogeneous => {}
    }
    for a in ss.corners() {
        let candidates: Vec<Exponent> = match mode {
            Mode::Full => {
                let top = if ord.is_graded() {
                    a.degree()
                } else {
                    finite_top.unwrap_or(0)
                };
                ss.enumerate_delta_upto(top, ord)
            }
            Mode::Homogeneous => ss
                .enumerate_delta_upto(a.degree(), ord)
                .into_iter()
                .filter(|b| b.degree() == a.degree())
                .collect(),
            Mode::Truncated { dset } => dset.clone(),
        };
        for b in candidates {
            if ord.less(&b, a) {
                vars.push(TVar {
                    alpha: a.clone(),
                    beta: b,
                });
            }
        }
    }
    Ok(VarTable::new(vars, ord))
}

/// The table `U[α;β]` over the border elements that were needed.
#[derive(Debug, Clone)]
pub struct UFamily {
    ss: StandardSet,
    ord: MonomialOrder,
    vars: VarTable,
    strategy: NuStrategy,
    cap: Option<u32>,
    nu: BTreeMap<Exponent, usize>,
    rows: BTreeMap<Exponent, Row>,
}

impl UFamily {
    pub fn new(ss: &StandardSet, ord: &MonomialOrder, vars: &VarTable, strategy: NuStrategy, cap: Option<u32>) -> Self {
        UFamily {
            ss: ss.clone(),
            ord: ord.clone(),
            vars: vars.clone(),
            strategy,
            cap,
            nu: BTreeMap::new(),
            rows: BTreeMap::new(),
        }
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.cap
    }

    /// Largest degree of a stored border row.
    pub fn max_row_degree(&self) -> u32 {
        self.rows.keys().map(|a| a.degree()).max().unwrap_or(0)
    }

    pub fn nu_map(&self) -> &BTreeMap<Exponent, usize> {
        &self.nu
    }

    pub fn rows(&self) -> &BTreeMap<Exponent, Row> {
        &self.rows
    }

    pub fn strategy(&self) -> NuStrategy {
        self.strategy
    }

    fn corner_row(&self, a: &Exponent) -> Row {
        self.vars
            .iter()
            .filter(|(_, t)| &t.alpha == a)
            .map(|(v, t)| (t.beta.clone(), Poly::var(v)))
            .collect()
    }

    /// `ν(α)` for a non-corner border element.
    pub fn choose_nu(&self, a: &Exponent) -> Result<usize, UFamilyError> {
        self.ss
            .nu_direction(a, self.strategy)
            .ok_or_else(|| UFamilyError::Internal(format!("no admissible direction for {a}")))
    }

    /// Computes and stores the row of `a` (and everything it depends on).
    pub fn ensure(&mut self, a: &Exponent) -> Result<(), UFamilyError> {
        if self.rows.contains_key(a) || self.ss.in_delta(a) {
            return Ok(());
        }
        if !self.ss.in_border(a) {
            return Err(UFamilyError::Internal(format!("{a} is outside Δ ∪ B(Δ)")));
        }
        if let Some(cap) = self.cap {
            if a.degree() > cap {
                return Err(UFamilyError::TruncationTooSmall {
                    alpha: a.clone(),
                    bound: cap,
                });
            }
        }
        if self.ss.is_corner(a) {
            let r = self.corner_row(a);
            self.rows.insert(a.clone(), r);
            return Ok(());
        }
        let nu = self.choose_nu(a)?;
        let prev = a.sub_unit(nu).expect("ν is admissible");
        self.ensure(&prev)?;
        let deps: Vec<Exponent> = self.rows[&prev].keys().map(|g| g.add_unit(nu)).collect();
        for d in &deps {
            self.ensure(d)?;
        }
        let row = self.shift(&self.rows[&prev], nu)?;
        self.nu.insert(a.clone(), nu);
        self.rows.insert(a.clone(), row);
        Ok(())
    }

    /// `U[α;·]`: the Kronecker row for `α ∈ Δ`, the stored row otherwise.
    pub fn row(&self, a: &Exponent) -> Result<Cow<'_, Row>, UFamilyError> {
        if let Some(r) = self.rows.get(a) {
            return Ok(Cow::Borrowed(r));
        }
        if self.ss.in_delta(a) {
            let mut r = Row::new();
            r.insert(a.clone(), Poly::one());
            return Ok(Cow::Owned(r));
        }
        Err(UFamilyError::TruncationTooSmall {
            alpha: a.clone(),
            bound: self.cap.unwrap_or_else(|| self.max_row_degree()),
        })
    }

    /// `Σ_γ row[γ] · U[γ+e_i;·]`, the normal form of `x^i` times `row`.
    pub fn shift(&self, row: &Row, i: usize) -> Result<Row, UFamilyError> {
        let mut out = Row::new();
        for (g, c) in row {
            let next = self.row(&g.add_unit(i))?;
            for (b, u) in next.iter() {
                let slot = out.entry(b.clone()).or_default();
                slot.add_product(c, u);
            }
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Rows needed to write the relations for the shifts `(α, λ)` and the
    /// edge triples `(ε; λ, μ)`.
    pub fn ensure_for_relations(
        &mut self,
        shifts: &[(Exponent, usize)],
        triples: &[crate::standard_set::EdgeTriple],
    ) -> Result<(), UFamilyError> {
        for (a, lam) in shifts {
            self.ensure(&a.add_unit(*lam))?;
            self.ensure_shift_deps(a, *lam)?;
        }
        for t in triples {
            for (x, y) in [(t.lam, t.mu), (t.mu, t.lam)] {
                let ex = t.eps.add_unit(x);
                self.ensure(&ex)?;
                self.ensure_shift_deps(&ex, y)?;
            }
        }
        Ok(())
    }

    fn ensure_shift_deps(&mut self, a: &Exponent, i: usize) -> Result<(), UFamilyError> {
        self.ensure(a)?;
        let deps: Vec<Exponent> = self.row(a)?.keys().map(|g| g.add_unit(i)).collect();
        for d in &deps {
            self.ensure(d)?;
        }
        Ok(())
    }

    /// Re-checks the defining conditions on every stored row:
    /// corner rows are the bare variables, every entry has `β ∈ Δ` and
    /// `β ≺ α`, and non-corner rows satisfy the ν-recursion.
    pub fn check_conditions(&self) -> Result<(), String> {
        for (a, row) in &self.rows {
            if !self.ss.in_border(a) {
                return Err(format!("{a} stored but not in the border"));
            }
            for (b, p) in row {
                if !self.ss.in_delta(b) {
                    return Err(format!("U[{a};{b}] has β outside Δ"));
                }
                if !self.ord.less(b, a) {
                    return Err(format!("U[{a};{b}] nonzero with β ⪰ α"));
                }
                if p.is_zero() {
                    return Err(format!("U[{a};{b}] stored as zero"));
                }
                if !p.constant_term().eq(&num_traits::Zero::zero()) {
                    return Err(format!("U[{a};{b}] has a constant term"));
                }
            }
            if self.ss.is_corner(a) {
                if row != &self.corner_row(a) {
                    return Err(format!("corner row {a} is not the variable row"));
                }
                continue;
            }
            let nu = *self.nu.get(a).ok_or_else(|| format!("no ν recorded for {a}"))?;
            let prev = a
                .sub_unit(nu)
                .filter(|p| self.ss.in_border(p))
                .ok_or_else(|| format!("ν({a}) = e{} is not admissible", nu + 1))?;
            let prev_row = self.row(&prev).map_err(|e| e.to_string())?;
            // Recompute the sum term by term, independent of `shift`.
            let mut want: Row = Row::new();
            for (g, c) in prev_row.iter() {
                let gn = g.add_unit(nu);
                if self.ss.in_delta(&gn) {
                    want.entry(gn).or_default().add_product(c, &Poly::one());
                } else {
                    let r = self.rows.get(&gn).ok_or_else(|| format!("missing row {gn}"))?;
                    for (b, u) in r {
                        want.entry(b.clone()).or_default().add_product(c, u);
                    }
                }
            }
            want.retain(|_, p| !p.is_zero());
            if &want != row {
                return Err(format!("recursion fails at {a}"));
            }
        }
        Ok(())
    }

    /// JSON dump `"alpha|beta" -> poly`.
    pub fn dump(&self) -> BTreeMap<String, Vec<TermJson>> {
        let mut out = BTreeMap::new();
        for (a, row) in &self.rows {
            for (b, p) in row {
                out.insert(format!("{a}|{b}"), poly_to_json(p, &self.vars));
            }
        }
        out
    }
}

/// Builds the table over every border element of degree `<= cap` (ascending
/// by the order), or lazily for truncated mode (`cap = None`).
pub fn build_ufamily(
    ss: &StandardSet,
    ord: &MonomialOrder,
    vars: &VarTable,
    cap: Option<u32>,
    strategy: NuStrategy,
) -> Result<UFamily, UFamilyError> {
    let mut fam = UFamily::new(ss, ord, vars, strategy, cap);
    if let Some(d) = cap {
        for a in ss.enumerate_border_upto(d, ord) {
            fam.ensure(&a)?;
        }
    }
    Ok(fam)
}

//! Zariski tangent space at the monomial point and elimination of the
//! linearly solvable coordinates.
//!
//! The tangent relations are derived symbolically from the index structure
//! (`b[α+λ;β] = b[α;β-λ]` for corner and border `α`, and `b[ε+λ;β-μ] = b[ε+μ;β-λ]`, border indices
//! resolved through the ν-chain) and cross-checked against the linear
//! components of the generators.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomials::Exponent;
use crate::par::Exec;
use crate::poly::{Monomial, Poly, PolySpan, Rational, Var};
use crate::scheme::{shift_items, SchemeIdeal};

/// Sparse rational row.
pub type SparseRow = BTreeMap<Var, Rational>;

/// Reduced row-echelon form with pivots chosen leftmost in ascending
/// variable order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Rref {
    /// Rows sorted by pivot; each row has coefficient 1 at its pivot and
    /// zero at every other pivot.
    pub rows: Vec<SparseRow>,
    pub pivots: Vec<Var>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Incremental Gauss-Jordan elimination. Each stored row's pivot is its
/// smallest variable; the result is the unique reduced echelon form.
#[derive(Debug, Clone, Default)]
struct Echelon {
    rows: BTreeMap<Var, SparseRow>,
}

impl Echelon {
    fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut r = row.clone();
        let hits: Vec<Var> = r.keys().filter(|v| self.rows.contains_key(v)).copied().collect();
        for p in hits {
            let c = match r.get(&p) {
                Some(c) => c.clone(),
                None => continue,
            };
            axpy(&mut r, &self.rows[&p], &-c);
        }
        r
    }

    /// Inserts `row`; returns the pivot when it was independent.
    fn insert(&mut self, row: &SparseRow) -> Option<(Var, Rational)> {
        let r = self.reduce(row);
        let (&p, c) = r.iter().next()?;
        let inv = c.recip();
        let r: SparseRow = r.iter().map(|(&v, x)| (v, x * &inv)).collect();
        for other in self.rows.values_mut() {
            if let Some(k) = other.get(&p).cloned() {
                axpy(other, &r, &-k);
            }
        }
        self.rows.insert(p, r);
        Some((p, inv))
    }

    fn into_rref(self) -> Rref {
        let pivots = self.rows.keys().copied().collect();
        Rref {
            rows: self.rows.into_values().collect(),
            pivots,
        }
    }
}

fn axpy(r: &mut SparseRow, x: &SparseRow, c: &Rational) {
    for (v, a) in x {
        let slot = r.entry(*v).or_insert_with(Rational::zero);
        *slot += a * c;
        if slot.is_zero() {
            r.remove(v);
        }
    }
}

/// Reduced row-echelon form of `rows`.
pub fn row_reduce(rows: &[SparseRow]) -> Rref {
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

/// Resolves `b[ζ;β]` for `ζ` in the border to a corner variable or zero.
fn resolve(si: &SchemeIdeal, zeta: &Exponent, beta: &Exponent) -> Option<Var> {
    let mut z = zeta.clone();
    let mut b = beta.clone();
    while !si.ss.is_corner(&z) {
        let nu = si.ufamily.choose_nu(&z).ok()?;
        b = b.sub_unit(nu)?;
        z = z.sub_unit(nu)?;
    }
    si.vars.lookup(&z, &b)
}

/// The corner reached from `zeta` along the ν-chain and the total shift.
fn chain(si: &SchemeIdeal, zeta: &Exponent) -> Option<(Exponent, Exponent)> {
    let mut z = zeta.clone();
    while !si.ss.is_corner(&z) {
        let nu = si.ufamily.choose_nu(&z).ok()?;
        z = z.sub_unit(nu)?;
    }
    let shift = zeta.checked_sub(&z)?;
    Some((z, shift))
}

fn corner_betas(si: &SchemeIdeal, corner: &Exponent) -> Vec<Exponent> {
    si.vars
        .iter()
        .filter(|(_, t)| &t.alpha == corner)
        .map(|(_, t)| t.beta.clone())
        .collect()
}

/// Candidate `β` for which `b[ζ;β - off]` can be a variable.
fn candidates(si: &SchemeIdeal, zeta: &Exponent, off: &Exponent, out: &mut BTreeSet<Exponent>) {
    if let Some((c, s)) = chain(si, zeta) {
        for b in corner_betas(si, &c) {
            let beta = b.add(&s).add(off);
            if si.ss.in_delta(&beta) {
                out.insert(beta);
            }
        }
    }
}

fn binomial_row(p: Option<Var>, m: Option<Var>) -> Option<BTreeMap<Var, i64>> {
    let mut row = BTreeMap::new();
    if let Some(p) = p {
        *row.entry(p).or_insert(0) += 1;
    }
    if let Some(m) = m {
        *row.entry(m).or_insert(0) -= 1;
    }
    row.retain(|_, c| *c != 0);
    if row.is_empty() {
        return None;
    }
    // Normalize sign: first entry positive.
    if row.values().next().is_some_and(|c| *c < 0) {
        for c in row.values_mut() {
            *c = -*c;
        }
    }
    Some(row)
}

/// Relation matrix with entries in `{-1, 0, 1}`, at most two per row.
pub fn tangent_relations(si: &SchemeIdeal) -> Vec<BTreeMap<Var, i64>> {
    let n = si.ss.dim();
    let zero = Exponent::zero(n);
    let mut rows = BTreeSet::new();
    for (a, lam) in shift_items(&si.ss, &si.ord, si.degree_bound) {
        let al = a.add_unit(lam);
        let mut betas = BTreeSet::new();
        candidates(si, &al, &zero, &mut betas);
        candidates(si, &a, &Exponent::unit(n, lam), &mut betas);
        for beta in betas {
            let lhs = resolve(si, &al, &beta);
            let rhs = beta.sub_unit(lam).and_then(|b| resolve(si, &a, &b));
            if let Some(r) = binomial_row(lhs, rhs) {
                rows.insert(r);
            }
        }
    }
    for t in &si.triples {
        let el = t.eps.add_unit(t.lam);
        let em = t.eps.add_unit(t.mu);
        let mut betas = BTreeSet::new();
        candidates(si, &el, &Exponent::unit(n, t.mu), &mut betas);
        candidates(si, &em, &Exponent::unit(n, t.lam), &mut betas);
        for beta in betas {
            let lhs = beta.sub_unit(t.mu).and_then(|b| resolve(si, &el, &b));
            let rhs = beta.sub_unit(t.lam).and_then(|b| resolve(si, &em, &b));
            if let Some(r) = binomial_row(lhs, rhs) {
                rows.insert(r);
            }
        }
    }
    rows.into_iter().collect()
}

fn to_sparse(row: &BTreeMap<Var, i64>) -> SparseRow {
    row.iter().map(|(&v, &c)| (v, Rational::from_integer(c.into()))).collect()
}

fn linear_row(p: &Poly) -> SparseRow {
    p.linear_component()
        .terms()
        .map(|(m, c)| (m.powers()[0].0, c.clone()))
        .collect()
}

#[derive(Debug, Clone)]
pub struct TangentReport {
    pub num_vars: usize,
    pub relations: Vec<BTreeMap<Var, i64>>,
    pub rref: Rref,
    pub rank: usize,
    pub embedding_dim: usize,
    /// Pivot variables, ascending.
    pub eliminable: Vec<Var>,
    /// Non-pivot variables, ascending.
    pub residual: Vec<Var>,
    /// One kernel vector per residual variable.
    pub kernel_basis: Vec<SparseRow>,
}

impl TangentReport {
    /// Sparse triplet dump `row col value` of the relation matrix.
    pub fn matrix_triplets(&self) -> String {
        let mut s = String::new();
        for (i, row) in self.relations.iter().enumerate() {
            for (v, c) in row {
                s.push_str(&format!("{i} {v} {c}\n"));
            }
        }
        s
    }
}

/// Tangent space at the origin. The symbolic relation matrix and the
/// linear parts of the generators must span the same row space.
pub fn tangent_space(si: &SchemeIdeal) -> Result<TangentReport> {
    let relations = tangent_relations(si);
    let rref = row_reduce(&relations.iter().map(to_sparse).collect::<Vec<_>>());
    let from_gens = row_reduce(&si.generators.iter().map(|g| linear_row(&g.poly)).collect::<Vec<_>>());
    if rref != from_gens {
        return Err(Error::Internal(format!(
            "tangent relations (rank {}) disagree with generator linear parts (rank {})",
            rref.rank(),
            from_gens.rank()
        )));
    }
    let num_vars = si.vars.len();
    let pivots: BTreeSet<Var> = rref.pivots.iter().copied().collect();
    let residual: Vec<Var> = (0..num_vars as Var).filter(|v| !pivots.contains(v)).collect();
    let kernel_basis = residual
        .iter()
        .map(|&f| {
            let mut k = SparseRow::new();
            k.insert(f, Rational::one());
            for (p, row) in rref.pivots.iter().zip(&rref.rows) {
                if let Some(c) = row.get(&f) {
                    k.insert(*p, -c);
                }
            }
            k
        })
        .collect();
    let rank = rref.rank();
    Ok(TangentReport {
        num_vars,
        relations,
        eliminable: rref.pivots.clone(),
        rref,
        rank,
        embedding_dim: num_vars - rank,
        residual,
        kernel_basis,
    })
}

#[derive(Debug, Clone)]
pub struct EmbeddedPresentation {
    /// Residual variables, ascending.
    pub residual_vars: Vec<Var>,
    /// Display letters, parallel to `residual_vars`.
    pub aliases: Vec<String>,
    /// Display rank of each residual variable (its alias index).
    pub alias_rank: Vec<usize>,
    /// `t' -> -g_{t'}`, polynomials in the residual variables only.
    pub substitution: BTreeMap<Var, Poly>,
    /// Nonzero images of all generators, primitive and deduplicated.
    pub residual_gens: Vec<Poly>,
    /// A minimal homogeneous generating set of the residual ideal.
    pub minimal_gens: Vec<Poly>,
    /// Stratum is an affine space (no residual equations).
    pub flat: bool,
    /// Every pivot, substitution and minimal generator has integer coefficients.
    pub integral: bool,
}

impl EmbeddedPresentation {
    pub fn alias_of(&self, v: Var) -> Option<&str> {
        self.residual_vars
            .iter()
            .position(|&r| r == v)
            .map(|i| self.aliases[i].as_str())
    }

    pub fn bindings(&self) -> HashMap<Var, Poly> {
        self.substitution.iter().map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Renders `p` (in residual variables) with alias letters.
    pub fn render(&self, p: &Poly) -> String {
        let pos: HashMap<Var, usize> = self.residual_vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        p.render(
            &|v| pos.get(&v).map(|&i| self.aliases[i].clone()).unwrap_or_else(|| format!("T{v}")),
            &|v| pos.get(&v).map(|&i| self.alias_rank[i]).unwrap_or(usize::MAX),
        )
    }
}

/// `a, b, ..., z, a1, b1, ...`.
pub fn alias_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

fn poly_key(p: &Poly) -> (usize, Vec<(crate::poly::Monomial, Rational)>) {
    (p.len(), p.terms().map(|(m, c)| (m.clone(), c.clone())).collect())
}

/// Eliminates the pivot variables and returns the residual presentation.
pub fn eliminate(si: &SchemeIdeal, tr: &TangentReport, exec: Exec) -> Result<EmbeddedPresentation> {
    let gens: Vec<&Poly> = si.generators.iter().map(|g| &g.poly).collect();

    // Recombine generators so that each pivot gets a polynomial t' + (free
    // linear part) + (higher terms).
    let mut lin = Echelon::default();
    let mut combos: BTreeMap<Var, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (k, g) in gens.iter().enumerate() {
        if lin.rows.len() == tr.rank {
            break;
        }
        let row = linear_row(g);
        if row.is_empty() {
            continue;
        }
        // Track the combination alongside the linear row.
        let mut combo: BTreeMap<usize, Rational> = BTreeMap::new();
        combo.insert(k, Rational::one());
        let mut r = row.clone();
        let hits: Vec<Var> = r.keys().filter(|v| lin.rows.contains_key(v)).copied().collect();
        for p in hits {
            let Some(c) = r.get(&p).cloned() else { continue };
            axpy(&mut r, &lin.rows[&p], &-&c);
            add_combo(&mut combo, &combos[&p], &-&c);
        }
        let Some((&p, c)) = r.iter().next() else {
            continue;
        };
        let inv = c.recip();
        let r: SparseRow = r.iter().map(|(&v, x)| (v, x * &inv)).collect();
        let combo: BTreeMap<usize, Rational> = combo.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        let keys: Vec<Var> = lin.rows.keys().copied().collect();
        for q in keys {
            if let Some(k) = lin.rows[&q].get(&p).cloned() {
                let mut row_q = lin.rows.remove(&q).expect("present");
                axpy(&mut row_q, &r, &-&k);
                lin.rows.insert(q, row_q);
                let mut cq = combos.remove(&q).expect("present");
                add_combo(&mut cq, &combo, &-&k);
                combos.insert(q, cq);
            }
        }
        lin.rows.insert(p, r);
        combos.insert(p, combo);
    }
    let pivots: Vec<Var> = lin.rows.keys().copied().collect();
    if pivots != tr.eliminable {
        return Err(Error::Internal("generator recombination found different pivots".into()));
    }

    let pivot_polys: Vec<(Var, Poly)> = exec.map(&pivots, |p| {
        let mut poly = Poly::zero();
        for (k, c) in &combos[p] {
            poly.add_scaled(gens[*k], c);
        }
        (*p, poly)
    });

    // Closure: substitute in ascending weight so every right-hand side is
    // already free of pivots when it is used.
    let weight = |v: Var| si.var_weight(v);
    let mut order: Vec<Var> = pivots.clone();
    order.sort_by_key(|&v| (weight(v), v));
    let mut subst: HashMap<Var, Poly> = HashMap::new();
    let raw: HashMap<Var, Poly> = pivot_polys
        .into_iter()
        .map(|(p, poly)| {
            let mut rhs = -&poly;
            rhs.add_term(crate::poly::Monomial::var(p), Rational::one());
            (p, rhs)
        })
        .collect();
    for &p in &order {
        subst.insert(p, raw[&p].substitute(&subst));
    }
    let bound = pivots.len().max(1);
    let mut passes = 1;
    while subst.values().any(|q| pivots.iter().any(|&p| q.contains_var(p))) {
        if passes >= bound {
            return Err(Error::SubstitutionNonterminating(passes));
        }
        let next: HashMap<Var, Poly> = subst.iter().map(|(k, q)| (*k, q.substitute(&subst))).collect();
        subst = next;
        passes += 1;
    }

    let images: Vec<Poly> = exec.map(&gens, |g| g.substitute(&subst));
    let mut residual_gens: Vec<Poly> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for f in images {
        if f.is_zero() {
            continue;
        }
        if !f.constant_term().is_zero() || !f.linear_component().is_zero() {
            return Err(Error::Internal("residual generator has a constant or linear term".into()));
        }
        if pivots.iter().any(|&p| f.contains_var(p)) {
            return Err(Error::Internal("residual generator still contains a pivot".into()));
        }
        let f = f.primitive();
        if seen.insert(f.clone()) {
            residual_gens.push(f);
        }
    }

    let minimal_gens = minimal_generators(&residual_gens, &weight);

    let residual_vars = tr.residual.clone();
    // Letters go to residual variables in descending variable order.
    let m = residual_vars.len();
    let aliases: Vec<String> = (0..m).map(|i| alias_name(m - 1 - i)).collect();
    let alias_rank: Vec<usize> = (0..m).map(|i| m - 1 - i).collect();
    let substitution: BTreeMap<Var, Poly> = subst.into_iter().collect();
    let integral = tr.rref.rows.iter().all(|r| r.values().all(|c| c.is_integer()))
        && substitution.values().all(|p| p.is_integral())
        && minimal_gens.iter().all(|p| p.is_integral());
    Ok(EmbeddedPresentation {
        flat: minimal_gens.is_empty(),
        residual_vars,
        aliases,
        alias_rank,
        substitution,
        residual_gens,
        minimal_gens,
        integral,
    })
}

fn add_combo(dst: &mut BTreeMap<usize, Rational>, src: &BTreeMap<usize, Rational>, c: &Rational) {
    for (k, x) in src {
        let slot = dst.entry(*k).or_insert_with(Rational::zero);
        *slot += x * c;
        if slot.is_zero() {
            dst.remove(k);
        }
    }
}

/// Minimal generating set of the ideal spanned by homogeneous `gens` for a
/// positive grading: walking up in weight, a generator is kept iff it is
/// not in the span of the monomial multiples of those kept so far.
pub fn minimal_generators(gens: &[Poly], weight: &impl Fn(Var) -> i128) -> Vec<Poly> {
    let mut by_weight: BTreeMap<i128, Vec<Poly>> = BTreeMap::new();
    for g in gens {
        if let Some(w) = g.weight(weight) {
            by_weight.entry(w).or_default().push(g.clone());
        }
    }
    let mut kept: Vec<Poly> = Vec::new();
    for (_, mut cands) in by_weight {
        cands.sort_by_key(poly_key);
        for g in cands {
            if !in_span_of_multiples(&g, &kept) {
                kept.push(g);
            }
        }
    }
    kept
}

/// Whether `g` is a linear combination of products `m·k` with `m` a
/// monomial and `k` in `ks`. Only products linked to the support of `g`
/// through shared monomials can contribute, so just those are collected.
fn in_span_of_multiples(g: &Poly, ks: &[Poly]) -> bool {
    let mut seen: HashSet<Monomial> = g.terms().map(|(m, _)| m.clone()).collect();
    let mut queue: Vec<Monomial> = seen.iter().cloned().collect();
    let mut products: BTreeSet<(usize, Monomial)> = BTreeSet::new();
    while let Some(mu) = queue.pop() {
        for (i, k) in ks.iter().enumerate() {
            for (t, _) in k.terms() {
                let Some(m) = mu.checked_div(t) else { continue };
                if !products.insert((i, m.clone())) {
                    continue;
                }
                for (t2, _) in k.terms() {
                    let nm = t2.mul(&m);
                    if seen.insert(nm.clone()) {
                        queue.push(nm);
                    }
                }
            }
        }
    }
    let mut span = PolySpan::new();
    for (i, m) in products {
        span.insert(&(&Poly::term(m, Rational::one()) * &ks[i]));
    }
    span.contains(g)
}

/// Whether every coefficient of every pivot row is `±1` or `0`.
pub fn unimodular_pivots(tr: &TangentReport) -> bool {
    tr.rref.rows.iter().all(|r| r.values().all(|c| c.abs().is_one()))
}

//! End-to-end run: corners → generators → tangent space → residual
//! presentation, plus JSON and text reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomials::{Exponent, MonomialOrder, OrderSpec};
use crate::oracle::{is_reduced_groebner, x_names, Certificate, XPoly, XTermJson};
use crate::par::Exec;
use crate::poly::{poly_to_json, Poly, Rational, TVar, TermJson, Var};
use crate::scheme::{build_scheme, default_degree_bound, BuildOptions, GenTag, SchemeIdeal};
use crate::standard_set::{validate_corners, EdgeTriple, NuStrategy};
use crate::tangent::{eliminate, tangent_space, unimodular_pivots, EmbeddedPresentation, TangentReport};
use crate::ufamily::Mode;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub order: OrderSpec,
    pub corners: Vec<Exponent>,
    pub mode: Mode,
    #[serde(default)]
    pub degree_bound: Option<u32>,
    #[serde(default)]
    pub nu: NuStrategy,
    #[serde(default)]
    pub exec: Exec,
}

impl JobConfig {
    pub fn new(order: OrderSpec, corners: Vec<Exponent>, mode: Mode) -> Self {
        JobConfig {
            order,
            corners,
            mode,
            degree_bound: None,
            nu: NuStrategy::default(),
            exec: Exec::default(),
        }
    }

    /// Number of variables, taken from the corners (or the order when no
    /// corner is given).
    pub fn dim(&self) -> Result<usize> {
        if let Some(c) = self.corners.first() {
            return Ok(c.dim());
        }
        if !self.order.rows.is_empty() {
            return Ok(self.order.rows[0].len());
        }
        if !self.order.priority.is_empty() {
            return Ok(self.order.priority.len());
        }
        Err(Error::Config("cannot infer the number of variables".into()))
    }

    pub fn monomial_order(&self) -> Result<MonomialOrder> {
        Ok(MonomialOrder::from_spec(self.dim()?, &self.order)?)
    }
}

/// All computed data for one stratum.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub scheme: SchemeIdeal,
    pub tangent: TangentReport,
    pub embedded: EmbeddedPresentation,
}

fn scheme_of(cfg: &JobConfig) -> Result<SchemeIdeal> {
    let n = cfg.dim()?;
    let ord = cfg.monomial_order()?;
    let ss = validate_corners(n, &cfg.corners)?;
    let opts = BuildOptions {
        degree_bound: cfg.degree_bound,
        nu: cfg.nu,
        exec: cfg.exec,
    };
    build_scheme(&ss, &ord, &cfg.mode, opts)
}

pub fn compute(cfg: &JobConfig) -> Result<Stratum> {
    let scheme = scheme_of(cfg)?;
    let tangent = tangent_space(&scheme)?;
    let embedded = eliminate(&scheme, &tangent, cfg.exec)?;
    Ok(Stratum {
        scheme,
        tangent,
        embedded,
    })
}

impl Stratum {
    /// Values of every parameter variable obtained from values of the
    /// residual ones through the substitution maps.
    pub fn extend_point(&self, residual: &HashMap<Var, Rational>) -> HashMap<Var, Rational> {
        let get = |v: Var| residual.get(&v).cloned().unwrap_or_else(Rational::zero);
        let mut out = HashMap::new();
        for (v, _) in self.scheme.vars.iter() {
            let val = match self.embedded.substitution.get(&v) {
                Some(p) => p.eval(&get),
                None => get(v),
            };
            out.insert(v, val);
        }
        out
    }

    /// The corner polynomials with every `T[α;β]` replaced by `point[v]`.
    pub fn specialize(&self, point: &HashMap<Var, Rational>) -> Vec<XPoly> {
        let si = &self.scheme;
        si.ss
            .corners()
            .iter()
            .map(|a| {
                let mut g = XPoly::monomial(a.clone(), Rational::one());
                for (v, t) in si.vars.iter() {
                    if &t.alpha == a {
                        let c = point.get(&v).cloned().unwrap_or_else(Rational::zero);
                        g.add_term(t.beta.clone(), -c);
                    }
                }
                g
            })
            .collect()
    }

    /// The universal family over the residual coordinates:
    /// `(corner, [(β, coefficient of x^β)])` with the leading `x^α` implied.
    pub fn universal_family(&self) -> Vec<(Exponent, Vec<(Exponent, Poly)>)> {
        self.scheme
            .family(&self.embedded.bindings())
            .into_iter()
            .map(|m| (m.corner, m.tail.into_iter().map(|(b, p)| (b, -&p)).collect()))
            .collect()
    }

    pub fn render_family(&self) -> Vec<String> {
        let n = self.scheme.ss.dim();
        self.universal_family()
            .iter()
            .map(|(a, tail)| {
                let mut s = x_monomial(a, n);
                for (b, c) in tail {
                    s.push_str(&signed_term(&self.embedded, c, &x_monomial(b, n)));
                }
                s
            })
            .collect()
    }
}

/// `x^2y`, `xz`, or `""` for the constant monomial.
pub fn x_monomial(e: &Exponent, n: usize) -> String {
    let names = x_names(n);
    let mut s = String::new();
    for (i, &k) in e.coords().iter().enumerate() {
        match k {
            0 => {}
            1 => s.push_str(&names[i]),
            _ => {
                let _ = write!(s, "{}^{k}", names[i]);
            }
        }
    }
    s
}

fn signed_term(ep: &EmbeddedPresentation, c: &Poly, mono: &str) -> String {
    if c.is_zero() {
        return String::new();
    }
    if c.len() == 1 {
        let r = ep.render(c);
        let (sign, body) = match r.strip_prefix('-') {
            Some(b) => ("-", b.to_string()),
            None => ("+", r),
        };
        let body = if body == "1" && !mono.is_empty() { String::new() } else { body };
        return format!("{sign}{body}{mono}");
    }
    // Factor out a leading minus sign when every coefficient is negative.
    if c.terms().all(|(_, q)| q.is_negative()) {
        return format!("-({}){mono}", ep.render(&-c));
    }
    format!("+({}){mono}", ep.render(c))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorJson {
    pub tag: GenTag,
    pub poly: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Counts {
    pub vars: usize,
    pub triples: usize,
    pub a1: usize,
    pub a2: usize,
    pub generators: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TangentSummary {
    pub num_vars: usize,
    pub rank: usize,
    pub embedding_dim: usize,
    pub eliminable: Vec<TVar>,
    pub residual_vars: Vec<TVar>,
    /// Minimal generators of the residual ideal.
    pub residual_gens: Vec<Vec<TermJson>>,
    /// Residual generators in alias notation.
    pub residual_gens_text: Vec<String>,
    pub raw_residual_count: usize,
    pub flat: bool,
    /// All pivots, substitutions and minimal generators are integral.
    pub integral: bool,
    pub unimodular_pivots: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyJson {
    pub corner: Exponent,
    pub text: String,
    /// `(β, coefficient of x^β)` for the non-leading terms.
    pub tail: Vec<(Exponent, Vec<TermJson>)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub schema_version: u32,
    pub order: OrderSpec,
    pub corners: Vec<Exponent>,
    pub mode: Mode,
    #[serde(rename = "D")]
    pub degree_bound: u32,
    pub theta: Vec<u32>,
    pub triples: Vec<EdgeTriple>,
    pub vars: Vec<TVar>,
    pub aliases: BTreeMap<String, TVar>,
    pub generators: Vec<GeneratorJson>,
    pub counts: Counts,
    pub tangent: TangentSummary,
    pub family: Vec<FamilyJson>,
}

impl Report {
    pub fn from_stratum(cfg: &JobConfig, st: &Stratum) -> Self {
        let si = &st.scheme;
        let tr = &st.tangent;
        let ep = &st.embedded;
        let vars: Vec<TVar> = si.vars.iter().map(|(_, t)| t.clone()).collect();
        let aliases = ep
            .residual_vars
            .iter()
            .zip(&ep.aliases)
            .map(|(v, a)| (a.clone(), si.vars.get(*v).clone()))
            .collect();
        let generators = si
            .generators
            .iter()
            .map(|g| GeneratorJson {
                tag: g.tag.clone(),
                poly: poly_to_json(&g.poly, &si.vars),
            })
            .collect();
        let family = st
            .universal_family()
            .into_iter()
            .zip(st.render_family())
            .map(|((corner, tail), text)| FamilyJson {
                corner,
                text,
                tail: tail.iter().map(|(b, p)| (b.clone(), poly_to_json(p, &si.vars))).collect(),
            })
            .collect();
        Report {
            schema_version: SCHEMA_VERSION,
            order: cfg.order.clone(),
            corners: si.ss.corners().to_vec(),
            mode: cfg.mode.clone(),
            degree_bound: si.degree_bound,
            theta: si.ss.theta().to_vec(),
            triples: si.triples.clone(),
            vars,
            aliases,
            generators,
            counts: Counts {
                vars: si.vars.len(),
                triples: si.triples.len(),
                a1: si.a1_count,
                a2: si.a2_count,
                generators: si.generators.len(),
            },
            tangent: TangentSummary {
                num_vars: tr.num_vars,
                rank: tr.rank,
                embedding_dim: tr.embedding_dim,
                eliminable: tr.eliminable.iter().map(|v| si.vars.get(*v).clone()).collect(),
                residual_vars: ep.residual_vars.iter().map(|v| si.vars.get(*v).clone()).collect(),
                residual_gens: ep.minimal_gens.iter().map(|p| poly_to_json(p, &si.vars)).collect(),
                residual_gens_text: ep.minimal_gens.iter().map(|p| ep.render(p)).collect(),
                raw_residual_count: ep.residual_gens.len(),
                flat: ep.flat,
                integral: ep.integral,
                unimodular_pivots: unimodular_pivots(tr),
            },
            family,
        }
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "corners: {}", join(self.corners.iter()));
        let _ = writeln!(s, "order: {}", serde_json::to_string(&self.order).unwrap_or_default());
        let _ = writeln!(s, "mode: {}  D = {}", self.mode.name(), self.degree_bound);
        let _ = writeln!(s, "theta: {:?}  L = {}", self.theta, self.theta.iter().sum::<u32>() as usize + self.theta.len());
        let _ = writeln!(s, "edge triples ({}): {}", self.triples.len(), join(self.triples.iter()));
        let _ = writeln!(s, "parameter variables: {}", self.counts.vars);
        let _ = writeln!(
            s,
            "generators: {} ({} from shift relations, {} from edge triples)",
            self.counts.generators, self.counts.a1, self.counts.a2
        );
        let t = &self.tangent;
        let _ = writeln!(s, "tangent rank: {}", t.rank);
        let _ = writeln!(s, "embedding dimension: {}", t.embedding_dim);
        let _ = writeln!(s, "eliminable ({}): {}", t.eliminable.len(), join(t.eliminable.iter()));
        for (a, v) in &self.aliases {
            let _ = writeln!(s, "  {a} = {v}");
        }
        if t.flat {
            let _ = writeln!(s, "stratum: affine space of dimension {}", t.embedding_dim);
        } else {
            let _ = writeln!(s, "residual generators ({}):", t.residual_gens_text.len());
            for g in &t.residual_gens_text {
                let _ = writeln!(s, "  {g}");
            }
        }
        let _ = writeln!(s, "universal family:");
        for f in &self.family {
            let _ = writeln!(s, "  {}", f.text);
        }
        s
    }
}

fn join<T: std::fmt::Display>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn run(cfg: &JobConfig) -> Result<Report> {
    let st = compute(cfg)?;
    Ok(Report::from_stratum(cfg, &st))
}

/// Standard-set data only: no parameter ring is built.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriplesReport {
    pub schema_version: u32,
    pub corners: Vec<Exponent>,
    pub theta: Vec<u32>,
    #[serde(rename = "L")]
    pub edge_bound: u32,
    #[serde(rename = "D")]
    pub degree_bound: u32,
    pub outer_corners: Vec<Exponent>,
    pub triples: Vec<EdgeTriple>,
}

impl TriplesReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "corners: {}", join(self.corners.iter()));
        let _ = writeln!(s, "theta: {:?}  L = {}  D = {}", self.theta, self.edge_bound, self.degree_bound);
        let _ = writeln!(s, "corners of delta and border: {}", join(self.outer_corners.iter()));
        let _ = writeln!(s, "edge triples ({}):", self.triples.len());
        for t in &self.triples {
            let _ = writeln!(s, "  {t}");
        }
        s
    }
}

pub fn triples(cfg: &JobConfig) -> Result<TriplesReport> {
    let ss = validate_corners(cfg.dim()?, &cfg.corners)?;
    let triples = ss.edge_triples();
    Ok(TriplesReport {
        schema_version: SCHEMA_VERSION,
        corners: ss.corners().to_vec(),
        theta: ss.theta().to_vec(),
        edge_bound: ss.edge_bound(),
        degree_bound: default_degree_bound(&ss, &triples),
        outer_corners: ss.corners_of_delta_union_border(),
        triples,
    })
}

/// Tangent space at the monomial point, without elimination.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TangentOutput {
    pub schema_version: u32,
    pub corners: Vec<Exponent>,
    pub mode: Mode,
    pub num_vars: usize,
    pub rank: usize,
    pub embedding_dim: usize,
    /// Reduced row-echelon relations, pivot first, each read as `= 0`.
    pub relations: Vec<String>,
    pub eliminable: Vec<TVar>,
    pub residual_vars: Vec<TVar>,
}

impl TangentOutput {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "corners: {}", join(self.corners.iter()));
        let _ = writeln!(s, "parameter variables: {}", self.num_vars);
        let _ = writeln!(s, "tangent rank: {}", self.rank);
        let _ = writeln!(s, "embedding dimension: {}", self.embedding_dim);
        let _ = writeln!(s, "relations:");
        for r in &self.relations {
            let _ = writeln!(s, "  {r} = 0");
        }
        let _ = writeln!(s, "eliminable ({}): {}", self.eliminable.len(), join(self.eliminable.iter()));
        let _ = writeln!(s, "residual ({}): {}", self.residual_vars.len(), join(self.residual_vars.iter()));
        s
    }
}

pub fn tangent(cfg: &JobConfig) -> Result<TangentOutput> {
    let si = scheme_of(cfg)?;
    let tr = tangent_space(&si)?;
    let n = si.vars.len();
    let relations = tr
        .rref
        .rows
        .iter()
        .map(|row| {
            let mut p = Poly::zero();
            for (v, c) in row {
                p.add_scaled(&Poly::var(*v), c);
            }
            p.render(&|v| si.vars.get(v).to_string(), &|v| n - v as usize)
        })
        .collect();
    let tv = |vs: &[Var]| vs.iter().map(|v| si.vars.get(*v).clone()).collect();
    Ok(TangentOutput {
        schema_version: SCHEMA_VERSION,
        corners: si.ss.corners().to_vec(),
        mode: cfg.mode.clone(),
        num_vars: tr.num_vars,
        rank: tr.rank,
        embedding_dim: tr.embedding_dim,
        relations,
        eliminable: tv(&tr.eliminable),
        residual_vars: tv(&tr.residual),
    })
}

/// A basis element given either as text (`"x^2-y"`) or as terms.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum BasisEntry {
    Text(String),
    Terms(Vec<XTermJson>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyInput {
    pub order: OrderSpec,
    pub corners: Vec<Exponent>,
    pub basis: Vec<BasisEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyOutput {
    pub schema_version: u32,
    pub ok: bool,
    pub certificate: Certificate,
}

pub fn verify(input: &VerifyInput, exec: Exec) -> Result<VerifyOutput> {
    let n = match input.corners.first() {
        Some(c) => c.dim(),
        None => return Err(Error::Config("verify needs at least one corner".into())),
    };
    if input.corners.iter().any(|c| c.dim() != n) {
        return Err(Error::Config("corners have different lengths".into()));
    }
    let ord = MonomialOrder::from_spec(n, &input.order)?;
    let mut basis = Vec::with_capacity(input.basis.len());
    for b in &input.basis {
        let p = match b {
            BasisEntry::Text(t) => XPoly::parse(t, n)?,
            BasisEntry::Terms(t) => XPoly::from_json(t)?,
        };
        if p.support().any(|e| e.dim() != n) {
            return Err(Error::Config("basis exponent of the wrong length".into()));
        }
        basis.push(p);
    }
    let certificate = is_reduced_groebner(&basis, &input.corners, &ord, exec);
    Ok(VerifyOutput {
        schema_version: SCHEMA_VERSION,
        ok: certificate.ok,
        certificate,
    })
}

/// The universal family and the equations of its base.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyReport {
    pub schema_version: u32,
    pub corners: Vec<Exponent>,
    pub aliases: BTreeMap<String, TVar>,
    pub residual_gens_text: Vec<String>,
    pub family: Vec<FamilyJson>,
}

impl FamilyReport {
    pub fn from_report(r: &Report) -> Self {
        FamilyReport {
            schema_version: SCHEMA_VERSION,
            corners: r.corners.clone(),
            aliases: r.aliases.clone(),
            residual_gens_text: r.tangent.residual_gens_text.clone(),
            family: r.family.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (a, v) in &self.aliases {
            let _ = writeln!(s, "{a} = {v}");
        }
        for g in &self.residual_gens_text {
            let _ = writeln!(s, "0 = {g}");
        }
        for f in &self.family {
            let _ = writeln!(s, "{}", f.text);
        }
        s
    }
}

/// Serializes any report the way the command-line tool writes it.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

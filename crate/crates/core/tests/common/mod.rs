#![allow(dead_code)]

use std::collections::HashMap;

use gstrata::monomials::{Exponent, MonomialOrder, OrderKind, OrderSpec};
use gstrata::oracle::{is_reduced_groebner, XPoly};
use gstrata::pipeline::{compute, Stratum};
use gstrata::poly::{Monomial, Poly, Rational, Var};
use gstrata::{Exec, JobConfig, Mode, SchemeIdeal};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn e(v: &[u32]) -> Exponent {
    Exponent::new(v.to_vec())
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub struct Fixture {
    pub name: &'static str,
    pub cfg: JobConfig,
}

fn job(kind: OrderKind, corners: &[&[u32]], mode: Mode) -> JobConfig {
    JobConfig::new(OrderSpec::named(kind), corners.iter().map(|c| e(c)).collect(), mode)
}

pub fn xy_xz() -> JobConfig {
    job(OrderKind::Grlex, &[&[1, 1, 0], &[1, 0, 1]], Mode::Full)
}

pub fn delta1() -> JobConfig {
    job(OrderKind::Grlex, &[&[3, 0, 0], &[2, 1, 0], &[1, 0, 1], &[0, 0, 2]], Mode::Full)
}

pub fn delta0() -> JobConfig {
    job(OrderKind::Grlex, &[&[2, 0, 0], &[1, 0, 1], &[0, 0, 2]], Mode::Full)
}

pub fn delta2() -> JobConfig {
    job(OrderKind::Grlex, &[&[2, 0, 0], &[1, 0, 1], &[0, 1, 2], &[0, 0, 3]], Mode::Full)
}

pub fn lex_homogeneous() -> JobConfig {
    job(OrderKind::Lex, &[&[2, 0, 0], &[1, 1, 0], &[0, 4, 0], &[1, 0, 2]], Mode::Homogeneous)
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture { name: "xy_xz", cfg: xy_xz() },
        Fixture { name: "delta1", cfg: delta1() },
        Fixture { name: "delta0", cfg: delta0() },
        Fixture { name: "delta2", cfg: delta2() },
        Fixture { name: "lex_homogeneous", cfg: lex_homogeneous() },
    ]
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for k in 0..cols {
            m[rank][k] = &m[rank][k] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let d = &m[rank][k] * &f;
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Tangent space dimension from first-order S-pair conditions: to first
/// order in the parameters, reducing `S(g_i, g_j)` just drops the terms
/// outside the standard set, so the tangent relations are the standard-set
/// coefficients of `m_j·tail_j - m_i·tail_i`.
pub fn brute_force_tangent_dim(si: &SchemeIdeal) -> usize {
    let nv = si.vars.len();
    let corners = si.ss.corners();
    // One row per pair and standard monomial.
    let mut rows: HashMap<(usize, usize, Exponent), Vec<Rational>> = HashMap::new();
    let add = |key: (usize, usize, Exponent), v: Var, c: i64, rows: &mut HashMap<_, Vec<Rational>>| {
        if si.ss.in_delta(&key.2) {
            rows.entry(key).or_insert_with(|| vec![Rational::zero(); nv])[v as usize] += q(c);
        }
    };
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let l = corners[i].lcm(&corners[j]);
            let mi = l.checked_sub(&corners[i]).unwrap();
            let mj = l.checked_sub(&corners[j]).unwrap();
            for (v, t) in si.vars.iter() {
                if t.alpha == corners[i] {
                    add((i, j, t.beta.add(&mi)), v, -1, &mut rows);
                }
                if t.alpha == corners[j] {
                    add((i, j, t.beta.add(&mj)), v, 1, &mut rows);
                }
            }
        }
    }
    let mut keys: Vec<_> = rows.keys().cloned().collect();
    keys.sort();
    let m: Vec<Vec<Rational>> = keys.into_iter().map(|k| rows.remove(&k).unwrap()).collect();
    nv - dense_rank(m)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=3);
    Rational::new(BigInt::from(p), BigInt::from(d))
}

fn eval_at(p: &Poly, pt: &HashMap<Var, Rational>) -> Rational {
    p.eval(&|v| pt.get(&v).cloned().unwrap_or_else(Rational::zero))
}

/// `p = c·v + r` with neither `c` nor `r` involving `v`, if `p` is of
/// degree at most one in `v`.
fn split_linear(p: &Poly, v: Var) -> Option<(Poly, Poly)> {
    let mut c = Poly::zero();
    let mut r = Poly::zero();
    for (m, k) in p.terms() {
        match m.exponent_of(v) {
            0 => r.add_term(m.clone(), k.clone()),
            1 => {
                let rest: Vec<(Var, u32)> = m.powers().iter().copied().filter(|(w, _)| *w != v).collect();
                c.add_term(Monomial::from_powers(rest), k.clone());
            }
            _ => return None,
        }
    }
    Some((c, r))
}

/// A point of the residual space where every residual equation vanishes,
/// found by zeroing a random set of coordinates and then solving the
/// remaining equations one linear variable at a time.
pub fn sample_residual_point(st: &Stratum, rng: &mut ChaCha8Rng) -> HashMap<Var, Rational> {
    let ep = &st.embedded;
    for _ in 0..10_000 {
        let mut pt: HashMap<Var, Rational> = HashMap::new();
        for &v in &ep.residual_vars {
            let x = if rng.gen_bool(0.3) { Rational::zero() } else { small_rational(rng) };
            pt.insert(v, x);
        }
        for _ in 0..ep.minimal_gens.len() + 1 {
            let Some(g) = ep.minimal_gens.iter().find(|g| !eval_at(g, &pt).is_zero()) else {
                break;
            };
            let mut vars: Vec<Var> = g.vars().into_iter().collect();
            let k = rng.gen_range(0..vars.len());
            vars.rotate_left(k);
            for v in vars {
                if let Some((c, r)) = split_linear(g, v) {
                    let cv = eval_at(&c, &pt);
                    if !cv.is_zero() {
                        pt.insert(v, -eval_at(&r, &pt) / cv);
                        break;
                    }
                }
            }
        }
        if ep.minimal_gens.iter().all(|g| eval_at(g, &pt).is_zero())
            && ep.residual_gens.iter().all(|g| eval_at(g, &pt).is_zero())
        {
            return pt;
        }
    }
    panic!("no point of the stratum found");
}

/// Runs the Buchberger oracle on the specialization at a residual point.
pub fn oracle_accepts(st: &Stratum, full: &HashMap<Var, Rational>) -> bool {
    let gs = st.specialize(full);
    is_reduced_groebner(&gs, st.scheme.ss.corners(), &st.scheme.ord, Exec::Sequential).ok
}

/// Counts of (on-stratum accepted, off-stratum rejected) over `n` samples.
pub fn sample_oracle(st: &Stratum, n: usize, seed: u64) -> (usize, usize) {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut on = 0;
    let mut off = 0;
    let elim: Vec<Var> = st.tangent.eliminable.clone();
    for _ in 0..n {
        let res = sample_residual_point(st, &mut rng);
        let full = st.extend_point(&res);
        if oracle_accepts(st, &full) {
            on += 1;
        }
        // The stratum is a graph over the residual coordinates, so moving
        // one eliminated coordinate leaves it.
        if elim.is_empty() {
            continue;
        }
        let mut bad = full.clone();
        let v = elim[rng.gen_range(0..elim.len())];
        let mut d = small_rational(&mut rng);
        if d.is_zero() {
            d = Rational::one();
        }
        *bad.get_mut(&v).unwrap() += d;
        if !oracle_accepts(st, &bad) {
            off += 1;
        }
    }
    (on, off)
}

pub fn stratum(cfg: &JobConfig) -> Stratum {
    compute(cfg).expect("fixture computes")
}

/// Variable ids used for `x, y, z` when parsing mixed expressions.
pub const X_BASE: Var = 1_000_000;

/// Parses expressions such as `xy-ay^2+(cd+ac^2)` over single-letter
/// names: `x, y, z` become `X_BASE + i`, other letters are looked up in
/// `names`. Juxtaposition is multiplication.
pub fn parse_mixed(src: &str, names: &HashMap<char, Var>) -> Poly {
    let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let p = parse_sum(&toks, &mut pos, names);
    assert_eq!(pos, toks.len(), "trailing input in {src}");
    p
}

fn parse_sum(t: &[char], pos: &mut usize, names: &HashMap<char, Var>) -> Poly {
    let mut acc = Poly::zero();
    let mut first = true;
    while *pos < t.len() && t[*pos] != ')' {
        let mut sign = q(1);
        if t[*pos] == '+' || t[*pos] == '-' {
            if t[*pos] == '-' {
                sign = q(-1);
            }
            *pos += 1;
        } else {
            assert!(first, "missing operator at {pos}");
        }
        first = false;
        let term = parse_product(t, pos, names);
        acc.add_scaled(&term, &sign);
    }
    acc
}

fn parse_product(t: &[char], pos: &mut usize, names: &HashMap<char, Var>) -> Poly {
    let mut acc = Poly::one();
    while *pos < t.len() && !matches!(t[*pos], '+' | '-' | ')') {
        if t[*pos] == '*' {
            *pos += 1;
            continue;
        }
        let base = if t[*pos] == '(' {
            *pos += 1;
            let p = parse_sum(t, pos, names);
            assert_eq!(t[*pos], ')');
            *pos += 1;
            p
        } else if t[*pos].is_ascii_digit() {
            let s = *pos;
            while *pos < t.len() && t[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let n: i64 = t[s..*pos].iter().collect::<String>().parse().unwrap();
            Poly::constant(q(n))
        } else {
            let c = t[*pos];
            *pos += 1;
            let v = match c {
                'x' => X_BASE,
                'y' => X_BASE + 1,
                'z' => X_BASE + 2,
                _ => *names.get(&c).unwrap_or_else(|| panic!("unknown name {c}")),
            };
            Poly::var(v)
        };
        let mut k = 1;
        if *pos < t.len() && t[*pos] == '^' {
            *pos += 1;
            let s = *pos;
            while *pos < t.len() && t[*pos].is_ascii_digit() {
                *pos += 1;
            }
            k = t[s..*pos].iter().collect::<String>().parse().unwrap();
        }
        acc = &acc * &base.pow(k);
    }
    acc
}

/// The universal family as polynomials in `x, y, z` (ids from `X_BASE`)
/// and the residual variables.
pub fn family_polys(st: &Stratum) -> Vec<Poly> {
    let n = st.scheme.ss.dim();
    let xmono = |b: &Exponent| {
        Monomial::from_powers(
            b.coords()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (X_BASE + i as Var, k))
                .collect(),
        )
    };
    assert!(n <= 3);
    st.universal_family()
        .into_iter()
        .map(|(a, tail)| {
            let mut p = Poly::term(xmono(&a), q(1));
            for (b, c) in tail {
                p = &p + &(&Poly::term(xmono(&b), q(1)) * &c);
            }
            p
        })
        .collect()
}

/// Alias letter to residual variable.
pub fn alias_map(st: &Stratum) -> HashMap<char, Var> {
    st.embedded
        .aliases
        .iter()
        .zip(&st.embedded.residual_vars)
        .map(|(a, &v)| (a.chars().next().unwrap(), v))
        .collect()
}

/// A polynomial in the variables `vars` as an x-polynomial in `vars.len()`
/// coordinates, so the oracle's division applies to it.
pub fn to_xpoly(p: &Poly, vars: &[Var]) -> XPoly {
    let idx: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    XPoly::from_terms(p.terms().map(|(m, c)| {
        let mut ex = vec![0u32; vars.len()];
        for &(v, k) in m.powers() {
            ex[idx[&v]] += k;
        }
        (Exponent::new(ex), c.clone())
    }))
}

pub fn grlex(n: usize) -> MonomialOrder {
    MonomialOrder::grlex(n)
}

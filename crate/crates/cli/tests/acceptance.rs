//! Acceptance checks over the worked fixtures. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashMap};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use gstrata::oracle::{divide, XPoly};
use gstrata::pipeline::run;
use gstrata::poly::Var;
use gstrata::MonomialOrder;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: u64) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < Duration::from_secs(limit), format!("took {t:.2?}, limit {limit}s"))?;
    Ok(t)
}

fn tvar_set(st: &gstrata::pipeline::Stratum, vs: &[Var]) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    vs.iter()
        .map(|&v| {
            let t = st.scheme.vars.get(v);
            (t.alpha.coords().to_vec(), t.beta.coords().to_vec())
        })
        .collect()
}

fn two_corner_example() -> Outcome {
    let start = Instant::now();
    let st = stratum(&xy_xz());
    let t = within(start, 5)?;
    check(st.tangent.embedding_dim == 5, format!("N = {}", st.tangent.embedding_dim))?;
    check(st.embedded.flat && st.embedded.minimal_gens.is_empty(), "stratum not flat")?;
    let names = alias_map(&st);
    let expected: BTreeSet<String> = [
        "xy-ay^2-byz-cx-dy+bcz+(cd+ac^2)",
        "xz-bz^2-ayz-ex+aey+(be-d-ac)z+(ed+ace)",
    ]
    .iter()
    .map(|s| format!("{:?}", parse_mixed(s, &names)))
    .collect();
    let got: BTreeSet<String> = family_polys(&st).iter().map(|p| format!("{p:?}")).collect();
    check(got == expected, "universal family differs from the displayed pair")?;
    Ok(format!("N=5, flat, family matches ({t:.2?})"))
}

fn delta1_example() -> Outcome {
    let start = Instant::now();
    let st = stratum(&delta1());
    let t = within(start, 30)?;
    let nv = st.scheme.vars.len();
    check(nv == 32, format!("{nv} parameter variables"))?;
    check(st.tangent.rank == 21, format!("rank {}", st.tangent.rank))?;
    check(st.tangent.embedding_dim == 11, format!("N = {}", st.tangent.embedding_dim))?;
    let listed: [([u32; 3], [u32; 3]); 21] = [
        ([1, 0, 1], [0, 0, 0]),
        ([1, 0, 1], [0, 1, 0]),
        ([1, 0, 1], [0, 2, 0]),
        ([0, 0, 2], [0, 0, 0]),
        ([0, 0, 2], [0, 1, 0]),
        ([0, 0, 2], [1, 0, 0]),
        ([2, 1, 0], [0, 0, 0]),
        ([2, 1, 0], [0, 1, 0]),
        ([2, 1, 0], [0, 2, 0]),
        ([2, 1, 0], [0, 3, 0]),
        ([2, 1, 0], [1, 0, 0]),
        ([3, 0, 0], [0, 0, 0]),
        ([3, 0, 0], [0, 0, 1]),
        ([3, 0, 0], [0, 1, 0]),
        ([3, 0, 0], [0, 1, 1]),
        ([3, 0, 0], [0, 2, 0]),
        ([3, 0, 0], [0, 2, 1]),
        ([3, 0, 0], [0, 3, 0]),
        ([3, 0, 0], [1, 0, 0]),
        ([3, 0, 0], [1, 1, 0]),
        ([3, 0, 0], [1, 2, 0]),
    ];
    let want: BTreeSet<_> = listed.iter().map(|(a, b)| (a.to_vec(), b.to_vec())).collect();
    check(tvar_set(&st, &st.tangent.eliminable) == want, "eliminable set differs")?;
    let k = st.embedded.minimal_gens.len();
    check(k == 2, format!("{k} residual generators"))?;
    Ok(format!("32 vars, rank 21, N=11, eliminable set matches, 2 generators ({t:.2?})"))
}

fn delta0_example() -> Outcome {
    let start = Instant::now();
    let st = stratum(&delta0());
    let t = within(start, 10)?;
    check(st.tangent.embedding_dim == 9, format!("N = {}", st.tangent.embedding_dim))?;
    check(st.embedded.minimal_gens.is_empty(), format!("{} residual generators", st.embedded.minimal_gens.len()))?;
    Ok(format!("N=9, flat ({t:.2?})"))
}

fn delta2_example() -> Outcome {
    let start = Instant::now();
    let st = stratum(&delta2());
    let t = within(start, 60)?;
    check(st.tangent.embedding_dim == 13, format!("N = {}", st.tangent.embedding_dim))?;
    let k = st.embedded.minimal_gens.len();
    check(
        k == 10,
        format!("N=13 but {k} minimal residual generators ({} before minimalization), expected 10", st.embedded.residual_gens.len()),
    )?;
    Ok(format!("N=13, 10 generators ({t:.2?})"))
}

fn lex_homogeneous_example() -> Outcome {
    let start = Instant::now();
    let st = stratum(&lex_homogeneous());
    let t = within(start, 60)?;
    let ep = &st.embedded;
    check(ep.residual_vars.len() == 9, format!("{} residual variables", ep.residual_vars.len()))?;
    check(ep.minimal_gens.len() == 1, format!("{} residual generators", ep.minimal_gens.len()))?;
    // Displayed letters a..h map to our h..a; i stays.
    let rename: HashMap<char, char> = "abcdefghi".chars().zip("hgfedcbai".chars()).collect();
    let ours = alias_map(&st);
    let names: HashMap<char, Var> = rename.iter().map(|(&p, o)| (p, ours[o])).collect();
    let displayed = parse_mixed("d(ad+2bdg+3cdg^2-4dg^3-2e-4fg+h)", &names);
    let ord = MonomialOrder::grlex(ep.residual_vars.len());
    let a = to_xpoly(&displayed, &ep.residual_vars);
    let b = to_xpoly(&ep.minimal_gens[0], &ep.residual_vars);
    let divides = |f: &XPoly, g: &XPoly| divide(f, std::slice::from_ref(g), &ord).1.is_zero();
    check(divides(&a, &b) && divides(&b, &a), "generators do not divide each other")?;
    Ok(format!("9 residual variables, principal, same ideal as the displayed generator ({t:.2?})"))
}

fn edge_triples() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_gstrata"))
        .args(["triples", "--corners", "[[3,0,0],[2,1,0],[1,0,1],[0,0,2]]", "--json", "-"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), format!("exit {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    check(v["theta"] == serde_json::json!([3, 1, 2]), format!("theta {}", v["theta"]))?;
    check(v["L"] == 9, format!("L {}", v["L"]))?;
    let got: BTreeSet<(Vec<u64>, u64, u64)> = v["triples"]
        .as_array()
        .ok_or("no triples")?
        .iter()
        .map(|t| {
            let eps = t["eps"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (eps, t["lam"].as_u64().unwrap() + 1, t["mu"].as_u64().unwrap() + 1)
        })
        .collect();
    let listed = [
        ([0, 0, 1], 3, 3),
        ([0, 0, 1], 1, 3),
        ([1, 1, 0], 1, 3),
        ([2, 0, 0], 1, 1),
        ([2, 0, 0], 1, 2),
        ([2, 0, 0], 1, 3),
        ([2, 0, 0], 2, 3),
    ];
    let want: BTreeSet<(Vec<u64>, u64, u64)> = listed.iter().map(|(e, l, m)| (e.to_vec(), *l, *m)).collect();
    let fmt = |s: &BTreeSet<(Vec<u64>, u64, u64)>| {
        if s.is_empty() {
            return "none".to_string();
        }
        s.iter().map(|(e, l, m)| format!("({e:?};e{l},e{m})")).collect::<Vec<_>>().join(" ")
    };
    check(
        got == want,
        format!(
            "theta and L match; {} triples found, 7 expected; extra: {}; missing: {}",
            got.len(),
            fmt(&got.difference(&want).cloned().collect()),
            fmt(&want.difference(&got).cloned().collect()),
        ),
    )?;
    Ok("theta=(3,1,2), L=9, 7 triples".into())
}

fn property_suite() -> Outcome {
    for (k, f) in fixtures().into_iter().enumerate() {
        let st = stratum(&f.cfg);
        let si = &st.scheme;
        let w = |v| si.var_weight(v);
        for g in &si.generators {
            check(g.poly.is_homogeneous(&w), format!("{}: {} not W-homogeneous", f.name, g.tag))?;
            check(g.poly.constant_term() == q(0), format!("{}: {} has a constant term", f.name, g.tag))?;
        }
        let (on, off) = sample_oracle(&st, 25, 1000 + k as u64);
        let off_needed = if st.tangent.eliminable.is_empty() { 0 } else { 25 };
        check(on == 25 && off == off_needed, format!("{}: oracle {on}/25 on, {off}/25 off", f.name))?;
        let dense = brute_force_tangent_dim(si);
        check(dense == st.tangent.embedding_dim, format!("{}: dense N = {dense}", f.name))?;
        si.ufamily.check_conditions().map_err(|e| format!("{}: {e}", f.name))?;
        let a = run(&f.cfg).map_err(|e| e.to_string())?;
        let b = run(&f.cfg).map_err(|e| e.to_string())?;
        check(a.to_json() == b.to_json() && a.to_text() == b.to_text(), format!("{}: reruns differ", f.name))?;
    }
    Ok("homogeneity, oracle sampling, dense tangent, family conditions, reruns on all fixtures".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("two-corner example", two_corner_example),
        ("delta1 tangent and residual ideal", delta1_example),
        ("delta0 flat stratum", delta0_example),
        ("delta2 residual ideal", delta2_example),
        ("lex homogeneous stratum", lex_homogeneous_example),
        ("edge triples", edge_triples),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {}: PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with `cargo test --test acceptance`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ordlp::cli::sweep;
use ordlp::fixpoint::{compute_least_model, is_fixed_point, tp_step, Limits, ModelResult};
use ordlp::ground::{ground, GroundProgram};
use ordlp::interp::{collapse, lt_alpha, Interpretation, Truth3};
use ordlp::oracle::{
    check_minimal_3v, collapse_suite, extension_suite, least_suite, minimality_suite, wfs_normal, wfs_suite,
    OracleConfig, SuiteReport, DEFAULT_ENUMERATION_BUDGET,
};
use ordlp::ordinal::{Degree, Ordinal, TruthValue};
use ordlp::syntax::Program;

const SEED: u64 = 20_240_601;

const RABBIT_LIMIT: Duration = Duration::from_millis(100);
const CHAIN_LIMIT: Duration = Duration::from_secs(1);
const WFS_LIMIT: Duration = Duration::from_secs(10);
const LEAST_LIMIT: Duration = Duration::from_secs(30);
const MINIMALITY_LIMIT: Duration = Duration::from_secs(10);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fixture(name: &str) -> Program {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    Program::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn solve(p: &Program, depth: usize) -> Result<(GroundProgram, ModelResult), String> {
    let g = ground(p, depth);
    let r = compute_least_model(&g, &Limits::default()).map_err(|e| e.to_string())?;
    Ok((g, r))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn rabbit() -> Check {
    let start = Instant::now();
    let p = fixture("rabbit.lp");
    let (g, r) = solve(&p, 0)?;
    let want = [
        ("grey(bugs)", TruthValue::t(0)),
        ("grey(roger)", TruthValue::f(0)),
        ("white(bugs)", TruthValue::f(0)),
        ("white(roger)", TruthValue::t(1)),
    ];
    ensure(g.base().len() == want.len(), || format!("base has {} atoms", g.base().len()))?;
    for (atom, v) in &want {
        ensure(r.m_p.get_text(atom) == Some(v), || format!("{atom} = {:?}", r.m_p.get_text(atom)))?;
    }
    ensure(r.delta_p == 2, || format!("delta = {}", r.delta_p))?;
    let m3 = collapse(&r.m_p);
    let collapsed = [Truth3::True, Truth3::False, Truth3::False, Truth3::True];
    ensure(m3.values() == collapsed, || format!("collapse {m3}"))?;
    let w = wfs_normal(&g).map_err(|e| e.to_string())?;
    ensure(w == m3, || format!("wfs {w}"))?;
    let t = within(start, RABBIT_LIMIT)?;
    Ok(format!("delta=2, collapse T/F/F/T, wfs MATCH, {t:?}"))
}

fn alternating_chain() -> Check {
    let start = Instant::now();
    let p = fixture("chain.lp");
    let (_, r) = solve(&p, 8)?;
    let mut term = "c".to_string();
    for n in 0..=8u64 {
        let pv = r.m_p.get_text(&format!("p({term})"));
        let rv = r.m_p.get_text(&format!("r({term})"));
        ensure(pv == Some(&TruthValue::t(2 * n)), || format!("p at n={n}: {pv:?}"))?;
        ensure(rv == Some(&TruthValue::f(2 * n + 1)), || format!("r at n={n}: {rv:?}"))?;
        term = format!("s({term})");
    }
    let q = r.m_p.get_text("q");
    ensure(q == Some(&TruthValue::t(16)), || format!("q = {q:?}"))?;

    let s = sweep(&p, 2..=8).map_err(|e| e.to_string())?;
    let row = s.atoms.iter().find(|a| a.atom == "q").ok_or("q missing from sweep")?;
    let degrees: Vec<Option<Degree>> = row.values.iter().map(|v| v.as_ref().map(|v| v.degree())).collect();
    let want: Vec<Option<Degree>> = (2..=8u64).map(|d| Some(Degree::Finite(Ordinal::finite(2 * d)))).collect();
    ensure(degrees == want, || format!("q degrees {degrees:?}"))?;
    ensure(row.stable == Some(false), || "q not flagged DIVERGENT".into())?;
    let t = within(start, CHAIN_LIMIT)?;
    Ok(format!("depth 8 exact, q degrees 4..16 DIVERGENT, {t:?}"))
}

fn non_monotone_witness() -> Check {
    let p = fixture("liar.lp");
    let g = ground(&p, 0);
    let base = Arc::clone(g.base());
    let i = Interpretation::constant(Arc::clone(&base), TruthValue::f(0));
    let j = Interpretation::constant(Arc::clone(&base), TruthValue::Zero);
    let ti = tp_step(&g, &i).map_err(|e| e.to_string())?;
    let tj = tp_step(&g, &j).map_err(|e| e.to_string())?;
    ensure(ti.values() == [TruthValue::t(1)], || format!("T_P(F_0) = {ti}"))?;
    ensure(tj.values() == [TruthValue::Zero], || format!("T_P(0) = {tj}"))?;
    let lt = |a, b, n: u64| lt_alpha(a, b, &Ordinal::from(n)).map_err(|e| e.to_string());
    ensure(lt(&i, &j, 0)?, || "F_0 not below 0 at level 0".into())?;
    ensure(lt(&tj, &ti, 1)?, || "images not reversed at level 1".into())?;
    Ok("four facts hold".into())
}

fn double_negation() -> Check {
    let p = fixture("negneg.lp");
    let (g, r) = solve(&p, 0)?;
    ensure(r.m_p.values() == [TruthValue::Zero], || format!("M_P = {}", r.m_p))?;
    let m = check_minimal_3v(&g, &collapse(&r.m_p), DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())?;
    ensure(m.hypothesis_violation.is_some(), || "no hypothesis violation reported".into())?;
    let smaller = m.smaller_model.ok_or("no smaller model")?;
    ensure(smaller.values() == [Truth3::False], || format!("smaller model {smaller}"))?;
    Ok("M_P = 0, smaller model {p1 = F}".into())
}

fn suite(report: SuiteReport, start: Instant, limit: Option<Duration>) -> Check {
    ensure(report.pass(), || {
        format!(
            "{}/{} passed, {} skipped, first failure {}",
            report.passed,
            report.count,
            report.skipped,
            report.failures.first().map(|f| f.to_string()).unwrap_or_default()
        )
    })?;
    let t = match limit {
        Some(l) => within(start, l)?,
        None => start.elapsed(),
    };
    Ok(format!("{}/{} instances, {t:?}", report.passed, report.count))
}

fn wfs_differential() -> Check {
    let start = Instant::now();
    let cfg = OracleConfig { seed: SEED, count: 200, max_atoms: 6, max_rules: 10, ..OracleConfig::default() };
    suite(wfs_suite(&cfg), start, Some(WFS_LIMIT))
}

fn least_brute_force() -> Check {
    let start = Instant::now();
    let cfg = OracleConfig { seed: SEED, count: 50, max_atoms: 3, degree_bound: Some(4), ..OracleConfig::default() };
    suite(least_suite(&cfg), start, Some(LEAST_LIMIT))
}

fn extension_clauses() -> Check {
    let start = Instant::now();
    let cfg = OracleConfig { seed: SEED, count: 1000, max_atoms: 4, ..OracleConfig::default() };
    suite(extension_suite(&cfg), start, None)
}

fn collapse_commutation() -> Check {
    let start = Instant::now();
    let cfg = OracleConfig { seed: SEED, count: 1000, max_atoms: 4, ..OracleConfig::default() };
    suite(collapse_suite(&cfg), start, None)
}

fn minimality() -> Check {
    let start = Instant::now();
    let cfg = OracleConfig { seed: SEED, count: 30, max_atoms: 4, negation_bound: Some(1), ..OracleConfig::default() };
    suite(minimality_suite(&cfg), start, Some(MINIMALITY_LIMIT))
}

fn p2_family() -> Check {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/p2_expected.txt");
    let expected = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let p = fixture("p2.lp");
    let mut models = Vec::new();
    for depth in 2..=4 {
        let (g, r) = solve(&p, depth)?;
        ensure(is_fixed_point(&g, &r.m_p).unwrap_or(false), || format!("not a fixed point at {depth}"))?;
        let mut rows = 0;
        for line in expected.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            let mut parts = line.split_whitespace();
            let d: usize = parts.next().unwrap().parse().map_err(|_| line.to_string())?;
            if d != depth {
                continue;
            }
            let atom = parts.next().unwrap();
            let v: TruthValue = parts.next().unwrap().parse().map_err(|_| line.to_string())?;
            ensure(r.m_p.get_text(atom) == Some(&v), || format!("{atom} at depth {depth}: {:?}", r.m_p.get_text(atom)))?;
            rows += 1;
        }
        ensure(rows == g.base().len(), || format!("fixture covers {rows} of {} atoms", g.base().len()))?;
        models.push(r.m_p);
    }
    // g(c, f^j c) has the finite value F(2j) at every depth; every atom whose
    // first argument is f(...), and h, must grow in degree with depth.
    let mut growing = 0;
    for (a, _) in models[0].iter() {
        let text = models[0].base().text(a);
        let degrees: Vec<Degree> = models.iter().map(|m| m.get_text(text).unwrap().degree()).collect();
        if text.starts_with("g(c,") {
            ensure(degrees.windows(2).all(|w| w[0] == w[1]), || format!("{text} not constant: {degrees:?}"))?;
        } else {
            ensure(degrees.windows(2).all(|w| w[0] < w[1]), || format!("{text} not increasing: {degrees:?}"))?;
            growing += 1;
        }
    }
    Ok(format!("fixture match at depths 2..4, {growing} atoms strictly increasing"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rabbit program", rabbit),
        ("alternating chain at depth 8 and sweep", alternating_chain),
        ("non-monotone T_P witness", non_monotone_witness),
        ("double negation loop", double_negation),
        ("well-founded differential suite", wfs_differential),
        ("brute-force least-model suite", least_brute_force),
        ("extension clause suite", extension_clauses),
        ("collapse commutation suite", collapse_commutation),
        ("minimality suite", minimality),
        ("P_2 family at depths 2..4", p2_family),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
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

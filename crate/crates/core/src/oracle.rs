//! Independent checks of computed models: exhaustive model search over a
//! bounded value set, the alternating-fixpoint well-founded model of normal
//! programs, 3-valued minimality, and seeded random program generators.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::eval::{eval_formula, eval_formula_3v, is_model, is_model_3v, Assignment, EvalError};
use crate::fixpoint::{compute_least_model, is_fixed_point, FixpointError, Limits, ModelResult};
use crate::ground::{ground, AtomId, GroundBase, GroundProgram};
use crate::interp::{collapse, leq_alpha, leq_infty, Interpretation, ThreeValuedInterpretation, Truth3};
use crate::ordinal::{Ordinal, TruthValue};
use crate::syntax::{Atom, Formula, Program, Rule, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration needs {candidates} candidates, budget is {budget}")]
    Budget { candidates: u128, budget: u64 },
    #[error("rule is not normal: {0}")]
    NotNormal(String),
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl OracleError {
    pub fn is_budget(&self) -> bool {
        match self {
            OracleError::Budget { .. } => true,
            OracleError::Fixpoint(e) => e.is_budget(),
            _ => false,
        }
    }
}

/// Default cap on the number of candidate interpretations enumerated.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Truth values F_0..F_k, 0, T_k..T_0 are enumerated; `None` means
    /// |base| + 1.
    pub degree_bound: Option<u64>,
    pub max_atoms: usize,
    pub max_rules: usize,
    pub seed: u64,
    pub count: usize,
    pub budget: u64,
    /// Upper bound on the negation degree of generated formula programs.
    pub negation_bound: Option<usize>,
    pub formula_depth: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            degree_bound: None,
            max_atoms: 6,
            max_rules: 10,
            seed: 0,
            count: 200,
            budget: DEFAULT_ENUMERATION_BUDGET,
            negation_bound: None,
            formula_depth: 3,
        }
    }
}

/// The 2k+3 values F_0 < ... < F_k < 0 < T_k < ... < T_0.
pub fn bounded_values(k: u64) -> Vec<TruthValue> {
    let mut v: Vec<TruthValue> = (0..=k).map(TruthValue::f).collect();
    v.push(TruthValue::Zero);
    v.extend((0..=k).rev().map(TruthValue::t));
    v
}

fn check_budget(choices: u128, atoms: usize, budget: u64) -> Result<(), OracleError> {
    let candidates = choices
        .checked_pow(atoms as u32)
        .unwrap_or(u128::MAX);
    if candidates > budget as u128 {
        Err(OracleError::Budget { candidates, budget })
    } else {
        Ok(())
    }
}

/// Calls `visit` on every tuple of indices into `choices[atom]`, in
/// lexicographic order with the last atom varying fastest.
fn for_each_choice(choices: &[usize], mut visit: impl FnMut(&[usize]) -> Result<(), OracleError>) -> Result<(), OracleError> {
    if choices.contains(&0) {
        return Ok(());
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        visit(&idx)?;
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Every model of `p` with values among [`bounded_values`]`(k)`.
pub fn enumerate_models(p: &GroundProgram, k: u64, budget: u64) -> Result<Vec<Interpretation>, OracleError> {
    let values = bounded_values(k);
    let base = p.base().clone();
    check_budget(values.len() as u128, base.len(), budget)?;
    let mut out = Vec::new();
    for_each_choice(&vec![values.len(); base.len()], |idx| {
        let i = Interpretation::from_values(base.clone(), idx.iter().map(|&j| values[j].clone()).collect());
        if is_model(p, &i)? {
            out.push(i);
        }
        Ok(())
    })?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LeastReport {
    pub degree_bound: u64,
    pub candidates: u128,
    pub models: usize,
    pub fixed_points: usize,
    /// Whether every value of M_P lies within the enumerated range.
    pub in_range: bool,
    pub enumerated: bool,
    /// An enumerated model M_P is not ⊑_∞-below.
    pub counterexample: Option<Interpretation>,
}

impl LeastReport {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none() && (!self.in_range || self.enumerated)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "degree_bound": self.degree_bound,
            "candidates": self.candidates.to_string(),
            "models": self.models,
            "fixed_points": self.fixed_points,
            "least_model_in_range": self.in_range,
            "least_model_enumerated": self.enumerated,
            "counterexample": self.counterexample.as_ref().map(|c| c.to_json()),
        })
    }
}

/// Confirms that `result.m_p` is ⊑_∞-below every model with values bounded
/// by `k`, and (when its own values are in range) that it is itself one of
/// the enumerated models and fixed points.
pub fn verify_least(p: &GroundProgram, result: &ModelResult, k: u64, budget: u64) -> Result<LeastReport, OracleError> {
    let models = enumerate_models(p, k, budget)?;
    let mut fixed_points = 0;
    let mut enumerated = false;
    let mut counterexample = None;
    for m in &models {
        if is_fixed_point(p, m)? {
            fixed_points += 1;
        }
        if *m == result.m_p {
            enumerated = true;
        }
        if counterexample.is_none() && !leq_infty(&result.m_p, m).expect("same base") {
            counterexample = Some(m.clone());
        }
    }
    let bound = Ordinal::from(k);
    let in_range = result
        .m_p
        .values()
        .iter()
        .all(|v| v.degree_ordinal().is_none_or(|d| *d <= bound));
    Ok(LeastReport {
        degree_bound: k,
        candidates: (2 * k as u128 + 3).pow(p.base().len() as u32),
        models: models.len(),
        fixed_points,
        in_range,
        enumerated,
        counterexample,
    })
}

fn literals(f: &Formula, base: &GroundBase, pos: &mut Vec<AtomId>, neg: &mut Vec<AtomId>) -> Option<bool> {
    // Some(false) means the body contains ⊥ and can never fire
    match f {
        Formula::Top => Some(true),
        Formula::Bottom => Some(false),
        Formula::Atom(a) => {
            pos.push(base.resolve(a)?);
            Some(true)
        }
        Formula::Not(g) => match &**g {
            Formula::Atom(a) => {
                neg.push(base.resolve(a)?);
                Some(true)
            }
            _ => None,
        },
        Formula::And(a, b) => {
            let x = literals(a, base, pos, neg)?;
            let y = literals(b, base, pos, neg)?;
            Some(x && y)
        }
        _ => None,
    }
}

struct NormalRule {
    head: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

/// Least model of the positive program left after deleting every rule
/// with a negative literal over `assumed` and every remaining negative
/// literal.
fn gamma(rules: &[NormalRule], n: usize, assumed: &[bool]) -> Vec<bool> {
    let active: Vec<&NormalRule> = rules
        .iter()
        .filter(|r| r.neg.iter().all(|&b| !assumed[b]))
        .collect();
    let mut m = vec![false; n];
    loop {
        let mut changed = false;
        for r in &active {
            if !m[r.head] && r.pos.iter().all(|&b| m[b]) {
                m[r.head] = true;
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

/// The well-founded model of a ground normal program, by the alternating
/// fixpoint: K_0 = ∅, U_i = Γ(K_i), K_{i+1} = Γ(U_i), until K is stable.
pub fn wfs_normal(p: &GroundProgram) -> Result<ThreeValuedInterpretation, OracleError> {
    let base = p.base();
    let n = base.len();
    let mut rules = Vec::new();
    for r in &p.rules {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        match literals(&r.body, base, &mut pos, &mut neg) {
            None => {
                let text = Rule::new(base.atom_syntax(r.head), r.body.clone());
                return Err(OracleError::NotNormal(text.to_string()));
            }
            Some(false) => {}
            Some(true) => rules.push(NormalRule {
                head: r.head.index(),
                pos: pos.into_iter().map(AtomId::index).collect(),
                neg: neg.into_iter().map(AtomId::index).collect(),
            }),
        }
    }
    let mut k = vec![false; n];
    let u = loop {
        let u = gamma(&rules, n, &k);
        let next = gamma(&rules, n, &u);
        if next == k {
            break u;
        }
        k = next;
    };
    let values = (0..n)
        .map(|a| {
            if k[a] {
                Truth3::True
            } else if !u[a] {
                Truth3::False
            } else {
                Truth3::Zero
            }
        })
        .collect();
    Ok(ThreeValuedInterpretation::from_values(base.clone(), values))
}

#[derive(Debug, Clone)]
pub struct MinimalReport {
    /// A rule whose body has negation degree above 1, if any.
    pub hypothesis_violation: Option<String>,
    pub candidates: u64,
    /// A 3-valued model strictly below the collapsed least model.
    pub smaller_model: Option<ThreeValuedInterpretation>,
    /// Whether the collapsed least model is itself a 3-valued model.
    pub is_model: bool,
}

impl MinimalReport {
    pub fn minimal(&self) -> bool {
        self.smaller_model.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "minimal": self.minimal(),
            "three_valued_model": self.is_model,
            "hypothesis_violation": self.hypothesis_violation,
            "candidates": self.candidates,
            "smaller_model": self.smaller_model.as_ref().map(|m| m.to_json()),
        })
    }
}

/// Searches all 3-valued interpretations below `m3` in Przymusinski's
/// ordering for a model other than `m3`.
pub fn check_minimal_3v(p: &GroundProgram, m3: &ThreeValuedInterpretation, budget: u64) -> Result<MinimalReport, OracleError> {
    let base = p.base();
    let hypothesis_violation = p
        .rules
        .iter()
        .find(|r| r.body.negation_degree() > 1)
        .map(|r| Rule::new(base.atom_syntax(r.head), r.body.clone()).to_string());
    let options: Vec<Vec<Truth3>> = m3
        .values()
        .iter()
        .map(|v| match v {
            Truth3::False => vec![Truth3::False],
            Truth3::Zero => vec![Truth3::False, Truth3::Zero],
            Truth3::True => vec![Truth3::False, Truth3::Zero, Truth3::True],
        })
        .collect();
    let candidates: u128 = options.iter().map(|o| o.len() as u128).product();
    if candidates > budget as u128 {
        return Err(OracleError::Budget { candidates, budget });
    }
    let mut smaller_model = None;
    let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
    for_each_choice(&sizes, |idx| {
        if smaller_model.is_some() {
            return Ok(());
        }
        let vals: Vec<Truth3> = idx.iter().zip(&options).map(|(&j, o)| o[j]).collect();
        if vals != m3.values() {
            let n = ThreeValuedInterpretation::from_values(base.clone(), vals);
            debug_assert!(n.leq(m3));
            if is_model_3v(p, &n)? {
                smaller_model = Some(n);
            }
        }
        Ok(())
    })?;
    Ok(MinimalReport {
        hypothesis_violation,
        candidates: candidates as u64,
        smaller_model,
        is_model: is_model_3v(p, m3)?,
    })
}

const CONSTANTS: [&str; 2] = ["a", "b"];
const VARIABLES: [&str; 3] = ["X", "Y", "Z"];

/// A ground normal program over propositional atoms p0..p{n-1}.
pub fn generate_normal(rng: &mut impl Rng, max_atoms: usize, max_rules: usize) -> Program {
    let n = rng.gen_range(1..=max_atoms.max(1));
    let atom = |k: usize| Atom::prop(&format!("p{k}"));
    let rule_count = rng.gen_range(1..=max_rules.max(1));
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        let head = atom(rng.gen_range(0..n));
        let lits = rng.gen_range(0..=3);
        let mut body: Option<Formula> = None;
        for _ in 0..lits {
            let a = Formula::Atom(atom(rng.gen_range(0..n)));
            let l = if rng.gen_bool(0.5) { Formula::not(a) } else { a };
            body = Some(match body {
                None => l,
                Some(b) => Formula::and(b, l),
            });
        }
        rules.push(Rule::new(head, body.unwrap_or(Formula::Top)));
    }
    let mut p = Program::from_rules(rules).expect("consistent arities");
    for k in 0..n {
        p.signature.predicates.insert(format!("p{k}"), 0);
    }
    p.signature.ensure_constant();
    p
}

/// Predicates (name, arity) whose base over two constants has at most
/// `max_atoms` atoms, and at least one atom.
fn random_predicates(rng: &mut impl Rng, max_atoms: usize) -> Vec<(String, usize)> {
    let mut preds = Vec::new();
    let mut size = 0;
    let (mut zeros, mut ones, mut twos) = (0, 0, 0);
    loop {
        let arity = rng.gen_range(0..3usize);
        let atoms = 1 << arity;
        if size + atoms > max_atoms {
            if size > 0 && rng.gen_bool(0.5) {
                break;
            }
            if size + 1 > max_atoms {
                break;
            }
            continue;
        }
        let name = match arity {
            0 => {
                zeros += 1;
                format!("q{}", zeros - 1)
            }
            1 => {
                ones += 1;
                format!("p{}", ones - 1)
            }
            _ => {
                twos += 1;
                format!("r{}", twos - 1)
            }
        };
        preds.push((name, arity));
        size += atoms;
        if size == max_atoms || rng.gen_bool(0.3) {
            break;
        }
    }
    preds
}

fn random_term(rng: &mut impl Rng, bound: &[&str]) -> Term {
    if !bound.is_empty() && rng.gen_bool(0.6) {
        Term::var(bound.choose(rng).unwrap())
    } else {
        Term::constant(CONSTANTS.choose(rng).unwrap())
    }
}

fn random_atom(rng: &mut impl Rng, preds: &[(String, usize)], bound: &[&str]) -> Formula {
    let (name, arity) = preds.choose(rng).unwrap();
    Formula::atom(name, (0..*arity).map(|_| random_term(rng, bound)).collect())
}

/// A random formula over `preds` and constants {a, b} whose free variables
/// are among `bound`, with nesting depth at most `depth` and negation
/// degree at most `neg_budget` (unbounded when `None`).
pub fn random_formula(
    rng: &mut impl Rng,
    preds: &[(String, usize)],
    bound: &mut Vec<&'static str>,
    depth: usize,
    neg_budget: Option<usize>,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..12) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => random_atom(rng, preds, bound),
        };
    }
    let choice = match rng.gen_range(0..5) {
        0 | 4 if neg_budget == Some(0) => 1,
        c => c,
    };
    match choice {
        0 | 4 => {
            let inner = random_formula(rng, preds, bound, depth - 1, neg_budget.map(|b| b - 1));
            Formula::not(inner)
        }
        1 => Formula::and(
            random_formula(rng, preds, bound, depth - 1, neg_budget),
            random_formula(rng, preds, bound, depth - 1, neg_budget),
        ),
        2 => Formula::or(
            random_formula(rng, preds, bound, depth - 1, neg_budget),
            random_formula(rng, preds, bound, depth - 1, neg_budget),
        ),
        _ => {
            let v = *VARIABLES.choose(rng).unwrap();
            bound.push(v);
            let inner = random_formula(rng, preds, bound, depth - 1, neg_budget);
            bound.pop();
            if rng.gen_bool(0.5) {
                Formula::forall(v, inner)
            } else {
                Formula::exists(v, inner)
            }
        }
    }
}

/// A formula-based program over constants {a, b} with no function symbols
/// and a base of at most `cfg.max_atoms` atoms.
pub fn generate_formula_program(rng: &mut impl Rng, cfg: &OracleConfig) -> Program {
    let preds = random_predicates(rng, cfg.max_atoms.max(1));
    let rule_count = rng.gen_range(1..=cfg.max_rules.max(1));
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        let (name, arity) = preds.choose(rng).unwrap().clone();
        let head_args: Vec<Term> = (0..arity)
            .map(|k| {
                if rng.gen_bool(0.5) {
                    Term::var(VARIABLES[k])
                } else {
                    Term::constant(CONSTANTS.choose(rng).unwrap())
                }
            })
            .collect();
        let mut bound: Vec<&'static str> = head_args
            .iter()
            .filter_map(|t| match t {
                Term::Variable(v) => VARIABLES.iter().copied().find(|x| x == v),
                _ => None,
            })
            .collect();
        let body = random_formula(rng, &preds, &mut bound, cfg.formula_depth, cfg.negation_bound);
        rules.push(Rule::new(Atom::new(&name, head_args), body));
    }
    let mut p = Program::from_rules(rules).expect("consistent arities");
    for (name, arity) in preds {
        p.signature.predicates.insert(name, arity);
    }
    p.signature.constants = CONSTANTS.iter().map(|c| c.to_string()).collect();
    p
}

pub fn random_value(rng: &mut impl Rng, max_degree: u64) -> TruthValue {
    match rng.gen_range(0..5) {
        0 => TruthValue::Zero,
        1 | 2 => TruthValue::f(rng.gen_range(0..=max_degree)),
        _ => TruthValue::t(rng.gen_range(0..=max_degree)),
    }
}

pub fn random_interpretation(rng: &mut impl Rng, base: &Arc<GroundBase>, max_degree: u64) -> Interpretation {
    let values = (0..base.len()).map(|_| random_value(rng, max_degree)).collect();
    Interpretation::from_values(base.clone(), values)
}

/// A pair I ⊑_α J: J is random, and I copies J below degree α and on its
/// F_α-slice while taking arbitrary values of degree ≥ α elsewhere (T_α
/// only where J has T_α).
pub fn random_leq_pair(rng: &mut impl Rng, base: &Arc<GroundBase>, alpha: u64, max_degree: u64) -> (Interpretation, Interpretation) {
    let j = random_interpretation(rng, base, max_degree);
    let al = Ordinal::from(alpha);
    let values = j
        .values()
        .iter()
        .map(|v| {
            if v.degree().is_below(&al) || *v == TruthValue::f(alpha) || rng.gen_bool(0.25) {
                return v.clone();
            }
            match rng.gen_range(0..4) {
                0 => TruthValue::Zero,
                1 => TruthValue::f(alpha + rng.gen_range(0..3)),
                2 => TruthValue::t(alpha + 1 + rng.gen_range(0..3)),
                _ if *v == TruthValue::t(alpha) => v.clone(),
                _ => TruthValue::f(alpha),
            }
        })
        .collect();
    (Interpretation::from_values(base.clone(), values), j)
}

/// The base of a random predicate set over {a, b} with at most
/// `max_atoms` atoms, for evaluation-only property checks.
pub fn random_base(rng: &mut impl Rng, max_atoms: usize) -> (Vec<(String, usize)>, Arc<GroundBase>) {
    let preds = random_predicates(rng, max_atoms);
    let rules: Vec<Rule> = Vec::new();
    let mut p = Program::from_rules(rules).expect("empty program");
    for (name, arity) in &preds {
        p.signature.predicates.insert(name.clone(), *arity);
    }
    p.signature.constants = CONSTANTS.iter().map(|c| c.to_string()).collect();
    let g = ground(&p, 0);
    (preds, g.base().clone())
}

/// Outcome of one seeded suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failures: Vec<Value>,
    /// Instances skipped because an enumeration budget was exceeded.
    pub skipped: usize,
    pub candidates: u128,
}

impl SuiteReport {
    fn new(name: &'static str, seed: u64, count: usize) -> Self {
        SuiteReport {
            name,
            seed,
            count,
            passed: 0,
            failures: Vec::new(),
            skipped: 0,
            candidates: 0,
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.skipped == 0 && self.passed == self.count
    }

    fn record(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(payload());
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "pass": self.pass(),
            "seed": self.seed,
            "count": self.count,
            "passed": self.passed,
            "skipped": self.skipped,
            "candidates": self.candidates.to_string(),
            "failures": self.failures,
        })
    }
}

/// One generator per instance, so any failing instance can be replayed
/// from the seed recorded in its payload.
fn instance_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| master.gen()).collect()
}

fn failure(instance_seed: u64, program: &Program, detail: Value) -> Value {
    json!({"instance_seed": instance_seed, "program": program.to_string(), "detail": detail})
}

/// collapse(M_P) against the well-founded model on random normal programs.
pub fn wfs_suite(cfg: &OracleConfig) -> SuiteReport {
    let mut report = SuiteReport::new("wfs-differential", cfg.seed, cfg.count);
    for s in instance_seeds(cfg.seed, cfg.count) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let program = generate_normal(&mut rng, cfg.max_atoms, cfg.max_rules);
        let g = ground(&program, 0);
        let outcome = compute_least_model(&g, &Limits::default())
            .map_err(OracleError::from)
            .and_then(|r| Ok((collapse(&r.m_p), wfs_normal(&g)?)));
        match outcome {
            Ok((m3, w)) => report.record(m3 == w, || {
                failure(s, &program, json!({"collapsed": m3.to_json(), "well_founded": w.to_json()}))
            }),
            Err(e) => report.record(false, || failure(s, &program, json!({"error": e.to_string()}))),
        }
    }
    report
}

/// Brute-force least-model checks on random formula programs.
pub fn least_suite(cfg: &OracleConfig) -> SuiteReport {
    let mut report = SuiteReport::new("least-model", cfg.seed, cfg.count);
    for s in instance_seeds(cfg.seed, cfg.count) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let program = generate_formula_program(&mut rng, cfg);
        let g = ground(&program, 0);
        let k = cfg.degree_bound.unwrap_or(g.base().len() as u64 + 1);
        let outcome = compute_least_model(&g, &Limits::default())
            .map_err(OracleError::from)
            .and_then(|r| {
                let model = is_model(&g, &r.m_p)?;
                let fixed = is_fixed_point(&g, &r.m_p)?;
                Ok((model, fixed, verify_least(&g, &r, k, cfg.budget)?))
            });
        match outcome {
            Ok((model, fixed, least)) => {
                report.candidates += least.candidates;
                report.record(model && fixed && least.pass(), || {
                    failure(s, &program, json!({"model": model, "fixed_point": fixed, "least": least.to_json()}))
                })
            }
            Err(e) if e.is_budget() => report.skipped += 1,
            Err(e) => report.record(false, || failure(s, &program, json!({"error": e.to_string()}))),
        }
    }
    report
}

/// 3-valued minimality of collapse(M_P) on random programs whose negation
/// degree is at most 1.
pub fn minimality_suite(cfg: &OracleConfig) -> SuiteReport {
    let mut report = SuiteReport::new("minimality", cfg.seed, cfg.count);
    let cfg = OracleConfig {
        negation_bound: Some(cfg.negation_bound.unwrap_or(1).min(1)),
        ..cfg.clone()
    };
    for s in instance_seeds(cfg.seed, cfg.count) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let program = generate_formula_program(&mut rng, &cfg);
        let g = ground(&program, 0);
        let outcome = compute_least_model(&g, &Limits::default())
            .map_err(OracleError::from)
            .and_then(|r| check_minimal_3v(&g, &collapse(&r.m_p), cfg.budget));
        match outcome {
            Ok(m) => {
                report.candidates += m.candidates as u128;
                report.record(m.minimal() && m.is_model && m.hypothesis_violation.is_none(), || {
                    failure(s, &program, m.to_json())
                })
            }
            Err(e) if e.is_budget() => report.skipped += 1,
            Err(e) => report.record(false, || failure(s, &program, json!({"error": e.to_string()}))),
        }
    }
    report
}

/// The three degree-preservation clauses of evaluation on random
/// (I ⊑_α J, φ) triples.
pub fn extension_suite(cfg: &OracleConfig) -> SuiteReport {
    let mut report = SuiteReport::new("extension-clauses", cfg.seed, cfg.count);
    for s in instance_seeds(cfg.seed, cfg.count) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (preds, base) = random_base(&mut rng, cfg.max_atoms);
        let alpha = rng.gen_range(0..4u64);
        let (i, j) = random_leq_pair(&mut rng, &base, alpha, 5);
        let phi = random_formula(&mut rng, &preds, &mut Vec::new(), cfg.formula_depth, cfg.negation_bound);
        let al = Ordinal::from(alpha);
        let h = Assignment::new();
        let ok = leq_alpha(&i, &j, &al).expect("same base")
            && match (eval_formula(&phi, &i, &h), eval_formula(&phi, &j, &h)) {
                (Ok(vi), Ok(vj)) => {
                    let c1 = vj > TruthValue::f(alpha) || vi == vj;
                    let c2 = vi < TruthValue::t(alpha) || vi == vj;
                    let c3 = !(vi.degree().is_below(&al) || vj.degree().is_below(&al)) || vi == vj;
                    c1 && c2 && c3
                }
                _ => false,
            };
        report.record(ok, || {
            json!({"instance_seed": s, "alpha": alpha, "formula": phi.to_string(), "i": i.to_json(), "j": j.to_json()})
        });
    }
    report
}

/// Evaluating then collapsing agrees with collapsing then evaluating.
pub fn collapse_suite(cfg: &OracleConfig) -> SuiteReport {
    let mut report = SuiteReport::new("collapse-commutation", cfg.seed, cfg.count);
    for s in instance_seeds(cfg.seed, cfg.count) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (preds, base) = random_base(&mut rng, cfg.max_atoms);
        let i = random_interpretation(&mut rng, &base, 5);
        let phi = random_formula(&mut rng, &preds, &mut Vec::new(), cfg.formula_depth, cfg.negation_bound);
        let h = Assignment::new();
        let ok = match (eval_formula_3v(&phi, &collapse(&i), &h), eval_formula(&phi, &i, &h)) {
            (Ok(a), Ok(b)) => a == Truth3::collapse(&b),
            _ => false,
        };
        report.record(ok, || json!({"instance_seed": s, "formula": phi.to_string(), "i": i.to_json()}));
    }
    report
}

//! The immediate consequence operator, per-level iteration and the ladder
//! of approximants that yields the least model.
//!
//! On a finite base the transfinite iteration at a level collapses to a
//! few rounds: successor steps until the level's slices stop moving, then
//! the limit clause. Every shortcut is guarded by runtime assertions of
//! the properties that justify it.

use serde_json::{json, Value};
use thiserror::Error;

use crate::eval::{body_value, is_model, EvalError};
use crate::ground::{AtomId, GroundProgram};
use crate::interp::{eq_alpha, leq_alpha, union_levels, InterpError, Interpretation};
use crate::ordinal::{Ordinal, TruthValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixpointError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("assertion failed at level {level}: {message}")]
    Assertion { level: usize, message: String },
    #[error("level {level} did not stabilise within {steps} successor steps")]
    StepBudget { level: usize, steps: usize },
    #[error("no fixed depth found within {levels} levels")]
    LevelBudget { levels: usize },
}

impl FixpointError {
    /// Errors that indicate a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, FixpointError::Assertion { .. } | FixpointError::Interp(_))
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            FixpointError::StepBudget { .. } | FixpointError::LevelBudget { .. }
        )
    }
}

/// Iteration budgets. `None` picks a default derived from the base size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_steps_per_level: Option<usize>,
    pub max_levels: Option<usize>,
}

impl Limits {
    pub fn steps(&self, base_len: usize) -> usize {
        self.max_steps_per_level.unwrap_or(4 * base_len + 8)
    }

    pub fn levels(&self, base_len: usize, negation_degree: usize) -> usize {
        self.max_levels
            .unwrap_or((base_len + 1) * (negation_degree + 1) + negation_degree + 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTrace {
    pub level: usize,
    pub successor_steps: usize,
    pub limit_applications: usize,
    /// (|T_α-slice|, |F_α-slice|) after each successor step, starting
    /// with the input.
    pub slice_sizes: Vec<(usize, usize)>,
    pub t_slice: Vec<AtomId>,
    pub f_slice: Vec<AtomId>,
}

impl LevelTrace {
    pub fn to_json(&self, i: &Interpretation) -> Value {
        let names = |s: &[AtomId]| -> Vec<String> {
            s.iter().map(|a| i.base().text(*a).to_string()).collect()
        };
        json!({
            "level": self.level,
            "successor_steps": self.successor_steps,
            "limit_applications": self.limit_applications,
            "slice_sizes": self.slice_sizes.iter().map(|(t, f)| json!([t, f])).collect::<Vec<_>>(),
            "t_slice": names(&self.t_slice),
            "f_slice": names(&self.f_slice),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ModelResult {
    pub m_p: Interpretation,
    pub delta_p: usize,
    /// M_0, M_1, ... up to the level at which the ladder was stopped.
    pub approximants: Vec<Interpretation>,
    pub traces: Vec<LevelTrace>,
    /// Ground instances dropped by truncation.
    pub truncated: usize,
}

impl ModelResult {
    pub fn delta_ordinal(&self) -> Ordinal {
        Ordinal::from(self.delta_p)
    }

    pub fn trace_json(&self) -> Value {
        Value::Array(
            self.traces
                .iter()
                .map(|t| t.to_json(&self.m_p))
                .collect(),
        )
    }
}

/// T_P(I): each atom gets the supremum of its rule bodies (F_0 if it heads
/// no rule).
pub fn tp_step(p: &GroundProgram, i: &Interpretation) -> Result<Interpretation, EvalError> {
    let base = p.base();
    let mut values = Vec::with_capacity(base.len());
    for a in base.ids() {
        let mut best = TruthValue::BOTTOM;
        for r in p.rules_for(a) {
            let v = body_value(r, i)?;
            if v > best {
                best = v;
            }
            if best == TruthValue::TOP {
                break;
            }
        }
        values.push(best);
    }
    Ok(Interpretation::from_values(base.clone(), values))
}

pub fn is_fixed_point(p: &GroundProgram, i: &Interpretation) -> Result<bool, EvalError> {
    Ok(tp_step(p, i)? == *i)
}

fn slices_at(i: &Interpretation, alpha: &Ordinal) -> (Vec<bool>, Vec<bool>) {
    let t = TruthValue::True(alpha.clone());
    let f = TruthValue::False(alpha.clone());
    (
        i.values().iter().map(|v| *v == t).collect(),
        i.values().iter().map(|v| *v == f).collect(),
    )
}

fn members(mask: &[bool]) -> Vec<AtomId> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| AtomId(k as u32))
        .collect()
}

fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|&&b| b).count()
}

fn check(level: usize, cond: bool, message: impl FnOnce() -> String) -> Result<(), FixpointError> {
    if cond {
        Ok(())
    } else {
        Err(FixpointError::Assertion {
            level,
            message: message(),
        })
    }
}

/// Iterates T_P from `i0` at level `alpha` through successor and limit
/// stages until the result is stable; the returned interpretation plays
/// the role of the ℵ₁-th iterate.
pub fn level_iterate(
    p: &GroundProgram,
    i0: &Interpretation,
    alpha: usize,
    limits: &Limits,
) -> Result<(Interpretation, LevelTrace), FixpointError> {
    let al = Ordinal::from(alpha);
    let al1 = al.succ();
    let budget = limits.steps(i0.len());
    let first = tp_step(p, i0)?;
    check(alpha, leq_alpha(i0, &first, &al)?, || {
        "input is not below its T_P image at this level".into()
    })?;

    let (mut ever_t, mut always_f) = slices_at(i0, &al);
    let mut trace = LevelTrace {
        level: alpha,
        successor_steps: 0,
        limit_applications: 0,
        slice_sizes: vec![(count(&ever_t), count(&always_f))],
        t_slice: Vec::new(),
        f_slice: Vec::new(),
    };

    let mut current = i0.clone();
    let mut next = first;
    let mut last_limit: Option<Interpretation> = None;
    loop {
        // successor stages until the level slices stop moving
        loop {
            if trace.successor_steps >= budget {
                return Err(FixpointError::StepBudget {
                    level: alpha,
                    steps: trace.successor_steps,
                });
            }
            trace.successor_steps += 1;
            check(alpha, leq_alpha(&current, &next, &al)?, || {
                format!("chain broken at successor step {}", trace.successor_steps)
            })?;
            let (t_cur, f_cur) = slices_at(&current, &al);
            let (t_next, f_next) = slices_at(&next, &al);
            for k in 0..t_next.len() {
                ever_t[k] |= t_next[k];
                always_f[k] &= f_next[k];
            }
            trace.slice_sizes.push((count(&t_next), count(&f_next)));
            let stable = t_cur == t_next && f_cur == f_next;
            current = next;
            next = tp_step(p, &current)?;
            if stable {
                break;
            }
        }

        // limit stage
        trace.limit_applications += 1;
        let values = i0
            .values()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if v.degree().is_below(&al) {
                    v.clone()
                } else if ever_t[k] {
                    TruthValue::True(al.clone())
                } else if always_f[k] {
                    TruthValue::False(al.clone())
                } else {
                    TruthValue::False(al1.clone())
                }
            })
            .collect();
        let limit = Interpretation::from_values(i0.base().clone(), values);
        check(alpha, leq_alpha(&current, &limit, &al)?, || {
            "limit stage is not above the preceding stages".into()
        })?;
        if last_limit.as_ref() == Some(&limit) {
            current = limit;
            next = tp_step(p, &current)?;
            break;
        }
        // the limit stage belongs to the chain, so its slices count too
        let (t_lim, f_lim) = slices_at(&limit, &al);
        for k in 0..t_lim.len() {
            ever_t[k] |= t_lim[k];
            always_f[k] &= f_lim[k];
        }
        last_limit = Some(limit.clone());
        current = limit;
        next = tp_step(p, &current)?;
    }

    check(alpha, eq_alpha(&current, &next, &al)?, || {
        "stable iterate differs from its T_P image at this level".into()
    })?;
    check(alpha, leq_alpha(&current, &next, &al1)?, || {
        "stable iterate is not below its T_P image at the next level".into()
    })?;
    let (t, f) = slices_at(&current, &al);
    trace.t_slice = members(&t);
    trace.f_slice = members(&f);
    Ok((current, trace))
}

/// Computes the ladder M_0, M_1, ... and from it the least model.
///
/// A level α is empty when no atom has degree exactly α in M_α. Empty
/// levels need not be final: a double negation can skip a level. Let N be
/// the program's negation degree and d the last non-empty level (0 if
/// none). Above d + N the per-level computation is a degree shift of the
/// previous one, so the first empty level beyond d + N proves all later
/// levels empty and the depth is d + 1 (0 if no level was non-empty).
pub fn compute_least_model(p: &GroundProgram, limits: &Limits) -> Result<ModelResult, FixpointError> {
    let base = p.base().clone();
    let n = p.negation_degree;
    let max_levels = limits.levels(base.len(), n);
    let mut approximants: Vec<Interpretation> = Vec::new();
    let mut traces = Vec::new();
    let mut last_nonempty: Option<usize> = None;

    loop {
        let alpha = approximants.len();
        if alpha >= max_levels {
            return Err(FixpointError::LevelBudget { levels: alpha });
        }
        let start = union_levels(base.clone(), &approximants)?;
        let (m, trace) = level_iterate(p, &start, alpha, limits)?;
        for (gamma, earlier) in approximants.iter().enumerate() {
            check(alpha, eq_alpha(earlier, &m, &Ordinal::from(gamma))?, || {
                format!("approximant {gamma} is not preserved")
            })?;
        }
        let nonempty = !trace.t_slice.is_empty() || !trace.f_slice.is_empty();
        approximants.push(m);
        traces.push(trace);
        if nonempty {
            last_nonempty = Some(alpha);
        } else if alpha > last_nonempty.unwrap_or(0) + n {
            break;
        }
    }

    let delta_p = last_nonempty.map_or(0, |d| d + 1);
    let delta = Ordinal::from(delta_p);
    let values = approximants[delta_p]
        .values()
        .iter()
        .map(|v| {
            if v.degree().is_below(&delta) {
                v.clone()
            } else {
                TruthValue::Zero
            }
        })
        .collect();
    let m_p = Interpretation::from_values(base, values);
    check(delta_p, is_fixed_point(p, &m_p)?, || "M_P is not a fixed point".into())?;
    check(delta_p, is_model(p, &m_p)?, || "M_P is not a model".into())?;
    Ok(ModelResult {
        m_p,
        delta_p,
        approximants,
        traces,
        truncated: p.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::tests::{formula_strategy, small_base};
    use crate::ground::{ground, ground_program};
    use crate::interp::{lt_alpha, tests::truth_value};
    use crate::syntax::{Program, Rule};
    use proptest::prelude::*;

    fn lp(src: &str, depth: usize) -> GroundProgram {
        ground(&Program::parse(src).unwrap(), depth)
    }

    fn with(g: &GroundProgram, pairs: &[(&str, TruthValue)]) -> Interpretation {
        Interpretation::from_pairs(g.base().clone(), TruthValue::BOTTOM, pairs.iter().cloned()).unwrap()
    }

    fn value(i: &Interpretation, a: &str) -> TruthValue {
        i.get_text(a).unwrap().clone()
    }

    #[test]
    fn tp_examples() {
        let g = lp("a :- ~a.", 0);
        let i1 = with(&g, &[("a", TruthValue::f(0))]);
        let i2 = with(&g, &[("a", TruthValue::Zero)]);
        assert_eq!(value(&tp_step(&g, &i1).unwrap(), "a"), TruthValue::t(1));
        assert_eq!(value(&tp_step(&g, &i2).unwrap(), "a"), TruthValue::Zero);

        let g = lp("a :- ~a. #pred b/0.", 0);
        let i = Interpretation::constant(g.base().clone(), TruthValue::t(3));
        assert_eq!(value(&tp_step(&g, &i).unwrap(), "b"), TruthValue::f(0));
    }

    #[test]
    fn not_monotone_for_the_infinite_order() {
        let g = lp("a :- ~a.", 0);
        let i1 = with(&g, &[("a", TruthValue::f(0))]);
        let i2 = with(&g, &[("a", TruthValue::Zero)]);
        assert!(lt_alpha(&i1, &i2, &Ordinal::zero()).unwrap());
        let (t1, t2) = (tp_step(&g, &i1).unwrap(), tp_step(&g, &i2).unwrap());
        assert!(lt_alpha(&t2, &t1, &Ordinal::from(1u64)).unwrap());
    }

    #[test]
    fn level_iterate_examples() {
        let g = lp("a :- ~a.", 0);
        let i0 = Interpretation::bottom(g.base().clone());
        let (r, tr) = level_iterate(&g, &i0, 0, &Limits::default()).unwrap();
        assert_eq!(value(&r, "a"), TruthValue::f(1));
        assert!(tr.t_slice.is_empty() && tr.f_slice.is_empty());

        let g = lp("grey(bugs). white(roger) :- ~grey(roger).", 0);
        let i0 = Interpretation::bottom(g.base().clone());
        let (r, _) = level_iterate(&g, &i0, 0, &Limits::default()).unwrap();
        assert_eq!(value(&r, "grey(bugs)"), TruthValue::t(0));
        assert_eq!(value(&r, "grey(roger)"), TruthValue::f(0));
        assert_eq!(value(&r, "white(roger)"), TruthValue::f(1));

        let g = lp("p.", 0);
        let i0 = Interpretation::bottom(g.base().clone());
        let (r, _) = level_iterate(&g, &i0, 0, &Limits::default()).unwrap();
        assert_eq!(value(&r, "p"), TruthValue::t(0));
    }

    #[test]
    fn precondition_violation_is_internal() {
        let g = lp("p.", 0);
        let i0 = Interpretation::constant(g.base().clone(), TruthValue::TOP);
        let g2 = lp("#pred p/0.", 0);
        let i0 = Interpretation::from_values(g2.base().clone(), i0.values().to_vec());
        let e = level_iterate(&g2, &i0, 0, &Limits::default()).unwrap_err();
        assert!(e.is_internal());
    }

    #[test]
    fn least_model_examples() {
        let g = lp("grey(bugs). white(roger) :- ~grey(roger).", 0);
        let r = compute_least_model(&g, &Limits::default()).unwrap();
        assert_eq!(value(&r.m_p, "grey(bugs)"), TruthValue::t(0));
        assert_eq!(value(&r.m_p, "grey(roger)"), TruthValue::f(0));
        assert_eq!(value(&r.m_p, "white(roger)"), TruthValue::t(1));
        assert_eq!(value(&r.m_p, "white(bugs)"), TruthValue::f(0));
        assert_eq!(r.delta_p, 2);

        let g = lp("a :- ~a.", 0);
        let r = compute_least_model(&g, &Limits::default()).unwrap();
        assert_eq!(value(&r.m_p, "a"), TruthValue::Zero);
        assert_eq!(r.delta_p, 0);

        let g = lp("p1 :- ~~p1.", 0);
        let r = compute_least_model(&g, &Limits::default()).unwrap();
        assert_eq!(value(&r.m_p, "p1"), TruthValue::Zero);
    }

    #[test]
    fn empty_level_below_a_double_negation_is_skipped() {
        // level 1 is empty but q lands at exactly degree 2
        let g = lp("q :- ~~r.", 0);
        let r = compute_least_model(&g, &Limits::default()).unwrap();
        assert_eq!(value(&r.m_p, "r"), TruthValue::f(0));
        assert_eq!(value(&r.m_p, "q"), TruthValue::f(2));
        assert!(r.traces[1].t_slice.is_empty() && r.traces[1].f_slice.is_empty());
        assert_eq!(r.delta_p, 3);
    }

    #[test]
    fn traces_respect_slice_monotonicity() {
        let g = lp("p(c). r(X) :- ~p(X). p(s(X)) :- ~r(X). q :- forall X. p(X).", 3);
        let r = compute_least_model(&g, &Limits::default()).unwrap();
        for t in &r.traces {
            for w in t.slice_sizes.windows(2) {
                assert!(w[0].0 <= w[1].0 && w[0].1 >= w[1].1, "level {}", t.level);
            }
        }
    }

    #[test]
    fn budgets_are_reported() {
        let g = lp("a :- ~a.", 0);
        let tight = Limits {
            max_steps_per_level: Some(1),
            max_levels: None,
        };
        assert!(compute_least_model(&g, &tight).unwrap_err().is_budget());
        let few = Limits {
            max_steps_per_level: None,
            max_levels: Some(1),
        };
        assert_eq!(
            compute_least_model(&g, &few).unwrap_err(),
            FixpointError::LevelBudget { levels: 1 }
        );
    }

    /// A program over [`small_base`] with one random rule per atom head.
    fn program_over_small_base(bodies: Vec<crate::syntax::Formula>) -> GroundProgram {
        let base = small_base();
        let rules: Vec<Rule> = base
            .ids()
            .zip(bodies)
            .map(|(a, b)| Rule::new(base.atom_syntax(a), b))
            .collect();
        let mut prog = Program::from_rules(rules).unwrap();
        for (name, arity) in [("q", 0), ("p", 1), ("r", 2)] {
            prog.signature.predicates.insert(name.into(), arity);
        }
        prog.signature.constants = ["a".to_string(), "b".to_string()].into();
        ground_program(&prog, base)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn tp_is_alpha_monotone(bodies in prop::collection::vec(formula_strategy(), 7),
                                j in prop::collection::vec(truth_value(3), 7),
                                noise in prop::collection::vec((any::<u8>(), 0u64..3), 7),
                                alpha in 0u64..3) {
            let g = program_over_small_base(bodies);
            let al = Ordinal::from(alpha);
            let iv: Vec<TruthValue> = j.iter().zip(&noise).map(|(v, (c, e))| {
                if v.degree().is_below(&al) || *v == TruthValue::f(alpha) {
                    v.clone()
                } else {
                    match c % 4 {
                        0 => TruthValue::Zero,
                        1 => TruthValue::f(alpha + e),
                        2 => TruthValue::t(alpha + 1 + e),
                        _ if *v == TruthValue::t(alpha) => v.clone(),
                        _ => TruthValue::f(alpha),
                    }
                }
            }).collect();
            let i = Interpretation::from_values(g.base().clone(), iv);
            let j = Interpretation::from_values(g.base().clone(), j);
            prop_assert!(leq_alpha(&i, &j, &al).unwrap());
            let (ti, tj) = (tp_step(&g, &i).unwrap(), tp_step(&g, &j).unwrap());
            prop_assert!(leq_alpha(&ti, &tj, &al).unwrap());
        }

        #[test]
        fn least_model_is_a_fixed_point(bodies in prop::collection::vec(formula_strategy(), 7)) {
            let g = program_over_small_base(bodies);
            let r = compute_least_model(&g, &Limits::default()).unwrap();
            prop_assert!(is_fixed_point(&g, &r.m_p).unwrap());
            for v in r.m_p.values() {
                prop_assert!(v.degree().is_below(&r.delta_ordinal()) || *v == TruthValue::Zero);
            }
        }
    }
}

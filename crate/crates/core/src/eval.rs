//! Truth values of terms and formulas, and model checking.
//!
//! One evaluator serves both semantics: it is generic over any totally
//! ordered value set with a top, a bottom and a negation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ground::{AtomId, GroundBase, GroundProgram, GroundRule, GroundUniverse, TermId};
use crate::interp::{Interpretation, ThreeValuedInterpretation, Truth3};
use crate::ordinal::TruthValue;
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("{0} lies outside the truncated base")]
    Truncated(String),
}

/// A variable assignment into the truncated universe.
pub type Assignment = BTreeMap<String, TermId>;

/// A chain with negation, as needed by the formula semantics.
pub trait TruthLattice: Ord + Clone {
    fn top() -> Self;
    fn bottom() -> Self;
    fn negate(&self) -> Self;
}

impl TruthLattice for TruthValue {
    fn top() -> Self {
        TruthValue::TOP
    }
    fn bottom() -> Self {
        TruthValue::BOTTOM
    }
    fn negate(&self) -> Self {
        TruthValue::negate(self)
    }
}

impl TruthLattice for Truth3 {
    fn top() -> Self {
        Truth3::True
    }
    fn bottom() -> Self {
        Truth3::False
    }
    fn negate(&self) -> Self {
        Truth3::negate(*self)
    }
}

// Innermost binding last; looked up from the end.
type Env<'a> = Vec<(&'a str, TermId)>;

fn lookup_var(env: &Env<'_>, v: &str) -> Option<TermId> {
    env.iter().rev().find(|(n, _)| *n == v).map(|(_, t)| *t)
}

fn term_in(t: &Term, env: &Env<'_>, u: &GroundUniverse) -> Result<TermId, EvalError> {
    match t {
        Term::Variable(v) => lookup_var(env, v).ok_or_else(|| EvalError::Unbound(v.clone())),
        Term::Constant(c) => u
            .lookup(c, &[])
            .ok_or_else(|| EvalError::Truncated(c.clone())),
        Term::Apply(f, args) => {
            let ids = args
                .iter()
                .map(|a| term_in(a, env, u))
                .collect::<Result<Vec<_>, _>>()?;
            u.lookup(f, &ids).ok_or_else(|| {
                let rendered: Vec<&str> = ids.iter().map(|i| u.text(*i)).collect();
                EvalError::Truncated(format!("{f}({})", rendered.join(",")))
            })
        }
    }
}

/// ⟦t⟧_h: the ground term denoted by `t` under `h`.
pub fn eval_term(t: &Term, h: &Assignment, u: &GroundUniverse) -> Result<TermId, EvalError> {
    let env: Env<'_> = h.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    term_in(t, &env, u)
}

struct Evaluator<'a, V, L: Fn(AtomId) -> V> {
    base: &'a GroundBase,
    lookup: L,
}

impl<'a, V: TruthLattice, L: Fn(AtomId) -> V> Evaluator<'a, V, L> {
    fn eval(&self, f: &'a Formula, env: &mut Env<'a>) -> Result<V, EvalError> {
        let u = self.base.universe();
        Ok(match f {
            Formula::Top => V::top(),
            Formula::Bottom => V::bottom(),
            Formula::Atom(a) => {
                let args = a
                    .args
                    .iter()
                    .map(|t| term_in(t, env, u))
                    .collect::<Result<Vec<_>, _>>()?;
                let id = self.base.lookup(&a.predicate, &args).ok_or_else(|| {
                    let rendered: Vec<&str> = args.iter().map(|i| u.text(*i)).collect();
                    EvalError::Truncated(format!("{}({})", a.predicate, rendered.join(",")))
                })?;
                (self.lookup)(id)
            }
            Formula::Not(g) => self.eval(g, env)?.negate(),
            Formula::And(a, b) => {
                let x = self.eval(a, env)?;
                x.min(self.eval(b, env)?)
            }
            Formula::Or(a, b) => {
                let x = self.eval(a, env)?;
                x.max(self.eval(b, env)?)
            }
            Formula::Forall(v, g) => {
                let mut acc = V::top();
                for t in u.ids() {
                    env.push((v.as_str(), t));
                    let r = self.eval(g, env);
                    env.pop();
                    acc = acc.min(r?);
                }
                acc
            }
            Formula::Exists(v, g) => {
                let mut acc = V::bottom();
                for t in u.ids() {
                    env.push((v.as_str(), t));
                    let r = self.eval(g, env);
                    env.pop();
                    acc = acc.max(r?);
                }
                acc
            }
        })
    }
}

/// Evaluates `f` under `h`, reading atom values through `lookup`.
/// Quantifiers range over the truncated universe of `base`.
pub fn eval_with<V, L>(f: &Formula, h: &Assignment, base: &GroundBase, lookup: L) -> Result<V, EvalError>
where
    V: TruthLattice,
    L: Fn(AtomId) -> V,
{
    let mut env: Env<'_> = h.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    Evaluator { base, lookup }.eval(f, &mut env)
}

/// ⟦φ⟧^I_h in the infinite-valued semantics.
pub fn eval_formula(f: &Formula, i: &Interpretation, h: &Assignment) -> Result<TruthValue, EvalError> {
    eval_with(f, h, i.base(), |a| i.get(a).clone())
}

/// ⟦φ⟧^I_h in the 3-valued semantics.
pub fn eval_formula_3v(f: &Formula, i: &ThreeValuedInterpretation, h: &Assignment) -> Result<Truth3, EvalError> {
    eval_with(f, h, i.base(), |a| i.get(a))
}

/// Value of a ground rule body.
pub fn body_value(r: &GroundRule, i: &Interpretation) -> Result<TruthValue, EvalError> {
    eval_formula(&r.body, i, &Assignment::new())
}

pub fn satisfies_rule(r: &GroundRule, i: &Interpretation) -> Result<bool, EvalError> {
    Ok(*i.get(r.head) >= body_value(r, i)?)
}

pub fn satisfies_rule_3v(r: &GroundRule, i: &ThreeValuedInterpretation) -> Result<bool, EvalError> {
    Ok(i.get(r.head) >= eval_formula_3v(&r.body, i, &Assignment::new())?)
}

/// The first ground rule `i` violates, if any.
pub fn first_violation<'p>(p: &'p GroundProgram, i: &Interpretation) -> Result<Option<&'p GroundRule>, EvalError> {
    for r in &p.rules {
        if !satisfies_rule(r, i)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub fn is_model(p: &GroundProgram, i: &Interpretation) -> Result<bool, EvalError> {
    Ok(first_violation(p, i)?.is_none())
}

pub fn is_model_3v(p: &GroundProgram, i: &ThreeValuedInterpretation) -> Result<bool, EvalError> {
    for r in &p.rules {
        if !satisfies_rule_3v(r, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

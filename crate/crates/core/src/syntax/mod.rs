//! Abstract syntax of formula-based programs: rules `A :- φ` whose bodies
//! are arbitrary first-order formulas over a finite signature.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use parser::{parse_formula, parse_program};

/// Name given to the constant added when a program mentions none, since the
/// Herbrand universe must not be empty.
pub const DEFAULT_CONSTANT: &str = "c";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("symbol `{name}` used with arity {found}, expected {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("rule head must be a predicate atom, found `{0}`")]
    HeadNotAtom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("the P_n family is defined for n >= 1")]
    ZeroFamilyIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Constant(String),
    Variable(String),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Self {
        Term::Constant(name.to_string())
    }

    pub fn var(name: &str) -> Self {
        Term::Variable(name.to_string())
    }

    pub fn apply(name: &str, args: Vec<Term>) -> Self {
        Term::Apply(name.to_string(), args)
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Constant(_) => {}
            Term::Variable(v) => {
                out.insert(v.clone());
            }
            Term::Apply(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    /// Replaces variables bound in `sub`.
    pub fn substitute(&self, sub: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Constant(_) => self.clone(),
            Term::Variable(v) => sub.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Apply(f, args) => {
                Term::Apply(f.clone(), args.iter().map(|a| a.substitute(sub)).collect())
            }
        }
    }

    /// Function-nesting depth; constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Apply(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.to_string(),
            args,
        }
    }

    pub fn prop(predicate: &str) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.args.iter().for_each(|a| a.collect_variables(&mut out));
        out
    }

    pub fn substitute(&self, sub: &BTreeMap<String, Term>) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.substitute(sub)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: &str, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(predicate, args))
    }

    pub fn prop(predicate: &str) -> Self {
        Formula::Atom(Atom::prop(predicate))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Self {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    /// Nesting depth of `¬`. The recursion takes the maximum over binary
    /// connectives, passes through quantifiers and counts one per negation.
    pub fn negation_degree(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.negation_degree(),
            Formula::And(a, b) | Formula::Or(a, b) => a.negation_degree().max(b.negation_degree()),
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.negation_degree(),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => {
                for v in a.variables() {
                    if !bound.contains(&v.as_str()) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding only in the trivial sense: substitutions map to
    /// ground terms, so nothing can be captured. Bound occurrences are left
    /// untouched.
    pub fn substitute(&self, sub: &BTreeMap<String, Term>) -> Formula {
        match self {
            Formula::Top | Formula::Bottom => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.substitute(sub)),
            Formula::Not(f) => Formula::not(f.substitute(sub)),
            Formula::And(a, b) => Formula::and(a.substitute(sub), b.substitute(sub)),
            Formula::Or(a, b) => Formula::or(a.substitute(sub), b.substitute(sub)),
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let body = if sub.contains_key(v) {
                    let mut inner = sub.clone();
                    inner.remove(v);
                    f.substitute(&inner)
                } else {
                    f.substitute(sub)
                };
                match self {
                    Formula::Forall(..) => Formula::Forall(v.clone(), Box::new(body)),
                    _ => Formula::Exists(v.clone(), Box::new(body)),
                }
            }
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    fn visit_atoms<'a>(&'a self, visit: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => visit(a),
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.visit_atoms(visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Top => f.write_str("true")?,
            Formula::Bottom => f.write_str("false")?,
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Not(inner) => {
                f.write_str("~")?;
                inner.fmt_prec(f, 3)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let kw = if matches!(self, Formula::Forall(..)) {
                    "forall"
                } else {
                    "exists"
                };
                write!(f, "{kw} {v}. ")?;
                body.fmt_prec(f, 0)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(c) => f.write_str(c),
            Term::Variable(v) => f.write_str(v),
            Term::Apply(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // A quantifier anywhere but the tail would swallow what follows it.
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Formula,
}

impl Rule {
    pub fn new(head: Atom, body: Formula) -> Self {
        Rule { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Rule {
            head,
            body: Formula::Top,
        }
    }

    /// Variables free in the head or the body.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut vars = self.head.variables();
        vars.extend(self.body.free_variables());
        vars
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Formula::Top => write!(f, "{}.", self.head),
            body => write!(f, "{} :- {}.", self.head, body),
        }
    }
}

/// Predicates, function symbols (arity ≥ 1) and constants of a program.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl Signature {
    /// Collects every symbol used by `rules`, checking arities, and adds
    /// [`DEFAULT_CONSTANT`] when no constant occurs.
    pub fn infer(rules: &[Rule]) -> Result<Signature, ParseErrorKind> {
        let mut sig = Self::used_by(rules)?;
        sig.ensure_constant();
        Ok(sig)
    }

    /// Exactly the symbols occurring in `rules`.
    fn used_by(rules: &[Rule]) -> Result<Signature, ParseErrorKind> {
        let mut sig = Signature::default();
        for rule in rules {
            sig.note_atom(&rule.head)?;
            for atom in rule.body.atoms() {
                sig.note_atom(atom)?;
            }
        }
        Ok(sig)
    }

    pub(crate) fn ensure_constant(&mut self) {
        if self.constants.is_empty() {
            let mut name = DEFAULT_CONSTANT.to_string();
            let mut n = 0;
            while self.functions.contains_key(&name) {
                name = format!("{DEFAULT_CONSTANT}{n}");
                n += 1;
            }
            self.constants.insert(name);
        }
    }

    pub(crate) fn note_predicate(&mut self, name: &str, arity: usize) -> Result<(), ParseErrorKind> {
        match self.predicates.get(name) {
            Some(&expected) if expected != arity => Err(ParseErrorKind::ArityMismatch {
                name: name.to_string(),
                expected,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub(crate) fn note_function(&mut self, name: &str, arity: usize) -> Result<(), ParseErrorKind> {
        let expected = if self.constants.contains(name) {
            Some(0)
        } else {
            self.functions.get(name).copied()
        };
        match expected {
            Some(e) if e != arity => Err(ParseErrorKind::ArityMismatch {
                name: name.to_string(),
                expected: e,
                found: arity,
            }),
            Some(_) => Ok(()),
            None if arity == 0 => {
                self.constants.insert(name.to_string());
                Ok(())
            }
            None => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn note_term(&mut self, term: &Term) -> Result<(), ParseErrorKind> {
        match term {
            Term::Variable(_) => Ok(()),
            Term::Constant(c) => self.note_function(c, 0),
            Term::Apply(f, args) => {
                self.note_function(f, args.len())?;
                args.iter().try_for_each(|a| self.note_term(a))
            }
        }
    }

    fn note_atom(&mut self, atom: &Atom) -> Result<(), ParseErrorKind> {
        self.note_predicate(&atom.predicate, atom.args.len())?;
        atom.args.iter().try_for_each(|a| self.note_term(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub signature: Signature,
    pub rules: Vec<Rule>,
}

impl Program {
    /// Builds a program whose signature is exactly what the rules use.
    pub fn from_rules(rules: Vec<Rule>) -> Result<Program, ParseErrorKind> {
        let signature = Signature::infer(&rules)?;
        Ok(Program { signature, rules })
    }

    pub fn parse(source: &str) -> Result<Program, ParseError> {
        parse_program(source)
    }

    /// Maximum negation degree over all rule bodies.
    pub fn negation_degree(&self) -> usize {
        self.rules
            .iter()
            .map(|r| r.body.negation_degree())
            .max()
            .unwrap_or(0)
    }

    /// True when every body is a conjunction of literals (or a fact).
    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(|r| is_literal_conjunction(&r.body))
    }
}

pub(crate) fn is_literal_conjunction(f: &Formula) -> bool {
    match f {
        Formula::Top | Formula::Atom(_) => true,
        Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
        Formula::And(a, b) => is_literal_conjunction(a) && is_literal_conjunction(b),
        _ => false,
    }
}

impl fmt::Display for Program {
    /// Rules one per line, preceded by declarations for any signature
    /// symbol the rules themselves do not mention.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = Signature::used_by(&self.rules).unwrap_or_default();
        let preds: Vec<String> = self
            .signature
            .predicates
            .iter()
            .filter(|(p, _)| !used.predicates.contains_key(*p))
            .map(|(p, a)| format!("{p}/{a}"))
            .collect();
        let funcs: Vec<String> = self
            .signature
            .functions
            .iter()
            .filter(|(p, _)| !used.functions.contains_key(*p))
            .map(|(p, a)| format!("{p}/{a}"))
            .collect();
        let consts: Vec<&str> = self
            .signature
            .constants
            .iter()
            .filter(|c| !used.constants.contains(*c))
            .map(String::as_str)
            .collect();
        // the parser supplies the default constant itself
        let implicit = used.constants.is_empty() && {
            let mut fallback = used.clone();
            fallback.ensure_constant();
            fallback.constants == self.signature.constants
        };
        let consts = if implicit { Vec::new() } else { consts };
        if !preds.is_empty() {
            writeln!(f, "#pred {}.", preds.join(", "))?;
        }
        if !funcs.is_empty() {
            writeln!(f, "#func {}.", funcs.join(", "))?;
        }
        if !consts.is_empty() {
            writeln!(f, "#const {}.", consts.join(", "))?;
        }
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// The program family used to show that depths reach ω^n:
///
/// ```text
/// g(X1,...,X(n-1), f(Xn)) :- ~~g(X1,...,Xn).
/// g(X1,...,X(k-1), f(Xk), c,...,c) :- exists X(k+1),...,Xn. g(X1,...,Xn).   (1 <= k <= n-1)
/// h :- exists X1,...,Xn. g(X1,...,Xn).
/// ```
pub fn make_pn_program(n: usize) -> Result<Program, SyntaxError> {
    if n == 0 {
        return Err(SyntaxError::ZeroFamilyIndex);
    }
    let x = |i: usize| format!("X{i}");
    let vars: Vec<Term> = (1..=n).map(|i| Term::Variable(x(i))).collect();
    let g_all = Formula::atom("g", vars.clone());
    let exists_from = |from: usize, body: Formula| {
        (from..=n)
            .rev()
            .fold(body, |acc, i| Formula::exists(&x(i), acc))
    };

    let mut rules = Vec::with_capacity(n + 1);
    let mut head_args = vars.clone();
    head_args[n - 1] = Term::apply("f", vec![vars[n - 1].clone()]);
    rules.push(Rule::new(
        Atom::new("g", head_args),
        Formula::not(Formula::not(g_all.clone())),
    ));
    for k in 1..n {
        let mut head_args: Vec<Term> = vars[..k - 1].to_vec();
        head_args.push(Term::apply("f", vec![vars[k - 1].clone()]));
        head_args.extend(std::iter::repeat_n(Term::constant("c"), n - k));
        rules.push(Rule::new(
            Atom::new("g", head_args),
            exists_from(k + 1, g_all.clone()),
        ));
    }
    rules.push(Rule::new(Atom::prop("h"), exists_from(1, g_all)));
    let mut signature = Signature::default();
    signature.predicates.insert("g".into(), n);
    signature.predicates.insert("h".into(), 0);
    signature.functions.insert("f".into(), 1);
    signature.constants.insert("c".into());
    Ok(Program { signature, rules })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn negation_degree_examples() {
        assert_eq!(body("p(c)").negation_degree(), 0);
        assert_eq!(body("~~p1").negation_degree(), 2);
        assert_eq!(body("forall X. ~p(X) | q(X)").negation_degree(), 1);
        assert_eq!(body("~(a & ~b)").negation_degree(), 2);
        assert_eq!(body("true").negation_degree(), 0);
    }

    #[test]
    fn free_variable_examples() {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(body("p(X)").free_variables(), set(&["X"]));
        assert_eq!(body("forall X. p(X)").free_variables(), set(&[]));
        assert_eq!(body("exists X. r(X,Y)").free_variables(), set(&["Y"]));
        assert_eq!(body("p(X) & exists X. q(X)").free_variables(), set(&["X"]));
    }

    #[test]
    fn substitution_skips_bound_occurrences() {
        let sub: BTreeMap<String, Term> = [("X".to_string(), Term::constant("a"))].into();
        let f = body("p(X) & forall X. q(X)").substitute(&sub);
        assert_eq!(f, body("p(a) & forall X. q(X)"));
    }

    #[test]
    fn pn_family_shapes() {
        let p1 = make_pn_program(1).unwrap();
        assert_eq!(p1.rules.len(), 2);
        assert_eq!(p1.rules[0].to_string(), "g(f(X1)) :- ~~g(X1).");
        assert_eq!(p1.rules[1].to_string(), "h :- exists X1. g(X1).");

        let p2 = make_pn_program(2).unwrap();
        assert_eq!(p2.rules.len(), 3);
        assert_eq!(p2.rules[0].to_string(), "g(X1,f(X2)) :- ~~g(X1,X2).");
        assert_eq!(p2.rules[1].to_string(), "g(f(X1),c) :- exists X2. g(X1,X2).");
        assert_eq!(p2.rules[2].to_string(), "h :- exists X1. exists X2. g(X1,X2).");

        let p3 = make_pn_program(3).unwrap();
        assert_eq!(p3.rules.len(), 4);
        assert_eq!(
            p3.rules[2].to_string(),
            "g(X1,f(X2),c) :- exists X3. g(X1,X2,X3)."
        );
        assert_eq!(make_pn_program(0), Err(SyntaxError::ZeroFamilyIndex));
    }

    #[test]
    fn pn_round_trips_through_text() {
        for n in 1..=4 {
            let p = make_pn_program(n).unwrap();
            assert_eq!(Program::parse(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn printing_parenthesizes_where_needed() {
        let f = Formula::and(
            Formula::forall("X", Formula::atom("p", vec![Term::var("X")])),
            Formula::prop("q"),
        );
        assert_eq!(f.to_string(), "(forall X. p(X)) & q");
        let g = Formula::and(Formula::prop("a"), Formula::and(Formula::prop("b"), Formula::prop("c")));
        assert_eq!(g.to_string(), "a & (b & c)");
        let h = Formula::not(Formula::or(Formula::prop("a"), Formula::prop("b")));
        assert_eq!(h.to_string(), "~(a | b)");
    }

    #[test]
    fn normal_programs_are_recognized() {
        assert!(Program::parse("a :- b & ~c. b.").unwrap().is_normal());
        assert!(!Program::parse("a :- ~~b.").unwrap().is_normal());
        assert!(!Program::parse("a :- b | c.").unwrap().is_normal());
    }
}

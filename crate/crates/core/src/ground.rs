//! Depth-bounded Herbrand universe and base, and ground instances of rules.
//!
//! Ground terms and atoms are interned; [`TermId`] and [`AtomId`] index into
//! the universe and base respectively. Both are ordered deterministically so
//! that every rendering of an interpretation is reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::syntax::{Atom, Formula, Program, Rule, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct GroundTermData {
    functor: String,
    args: Vec<TermId>,
}

/// All ground terms of function-nesting depth at most `depth_bound`,
/// ordered by depth and then by rendered text.
#[derive(Debug, Clone)]
pub struct GroundUniverse {
    depth_bound: usize,
    terms: Vec<GroundTermData>,
    depths: Vec<usize>,
    texts: Vec<String>,
    index: HashMap<String, HashMap<Vec<TermId>, TermId>>,
}

impl PartialEq for GroundUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.depth_bound == other.depth_bound && self.texts == other.texts
    }
}

impl GroundUniverse {
    /// Enumerates every ground term over `sig` up to `depth` nested
    /// function applications. Returns `None` if more than `max_terms`
    /// terms would be produced.
    pub fn enumerate_bounded(sig: &Signature, depth: usize, max_terms: usize) -> Option<Self> {
        let mut u = GroundUniverse {
            depth_bound: depth,
            terms: Vec::new(),
            depths: Vec::new(),
            texts: Vec::new(),
            index: HashMap::new(),
        };
        let mut layer: Vec<(String, GroundTermData)> = sig
            .constants
            .iter()
            .map(|c| {
                (
                    c.clone(),
                    GroundTermData {
                        functor: c.clone(),
                        args: Vec::new(),
                    },
                )
            })
            .collect();
        for d in 0..=depth {
            layer.sort_by(|a, b| a.0.cmp(&b.0));
            for (text, data) in layer.drain(..) {
                if u.terms.len() >= max_terms {
                    return None;
                }
                let id = TermId(u.terms.len() as u32);
                u.index
                    .entry(data.functor.clone())
                    .or_default()
                    .insert(data.args.clone(), id);
                u.terms.push(data);
                u.depths.push(d);
                u.texts.push(text);
            }
            if d == depth {
                break;
            }
            // terms of depth exactly d+1: some argument has depth exactly d
            for (f, &arity) in &sig.functions {
                let mut tuple = vec![0usize; arity];
                let n = u.terms.len();
                if n == 0 {
                    break;
                }
                loop {
                    if tuple.iter().any(|&i| u.depths[i] == d) {
                        let args: Vec<TermId> = tuple.iter().map(|&i| TermId(i as u32)).collect();
                        let text = format!(
                            "{f}({})",
                            args.iter()
                                .map(|a| u.texts[a.index()].as_str())
                                .collect::<Vec<_>>()
                                .join(",")
                        );
                        layer.push((
                            text,
                            GroundTermData {
                                functor: f.clone(),
                                args,
                            },
                        ));
                        if u.terms.len() + layer.len() > max_terms {
                            return None;
                        }
                    }
                    // odometer over all tuples of existing terms
                    let mut k = arity;
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        tuple[k] += 1;
                        if tuple[k] < n {
                            break;
                        }
                        tuple[k] = 0;
                        if k == 0 {
                            k = usize::MAX;
                            break;
                        }
                    }
                    if k == usize::MAX {
                        break;
                    }
                }
            }
        }
        Some(u)
    }

    pub fn enumerate(sig: &Signature, depth: usize) -> Self {
        Self::enumerate_bounded(sig, depth, usize::MAX).expect("unbounded enumeration")
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TermId> + '_ {
        (0..self.terms.len()).map(|i| TermId(i as u32))
    }

    pub fn lookup(&self, functor: &str, args: &[TermId]) -> Option<TermId> {
        self.index.get(functor)?.get(args).copied()
    }

    pub fn text(&self, id: TermId) -> &str {
        &self.texts[id.index()]
    }

    pub fn term_depth(&self, id: TermId) -> usize {
        self.depths[id.index()]
    }

    pub fn texts(&self) -> &[String] {
        &self.texts
    }

    /// The syntax tree of a ground term.
    pub fn to_term(&self, id: TermId) -> Term {
        let data = &self.terms[id.index()];
        if data.args.is_empty() {
            Term::Constant(data.functor.clone())
        } else {
            Term::Apply(
                data.functor.clone(),
                data.args.iter().map(|&a| self.to_term(a)).collect(),
            )
        }
    }

    /// Interns a variable-free term; `None` if it is deeper than the bound
    /// or uses an unknown symbol.
    pub fn resolve(&self, term: &Term) -> Option<TermId> {
        match term {
            Term::Constant(c) => self.lookup(c, &[]),
            Term::Variable(_) => None,
            Term::Apply(f, args) => {
                let ids = args
                    .iter()
                    .map(|a| self.resolve(a))
                    .collect::<Option<Vec<_>>>()?;
                self.lookup(f, &ids)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<TermId>,
}

/// Every ground atom over the truncated universe, ordered by predicate
/// name and then by argument tuple in universe order.
#[derive(Debug, Clone)]
pub struct GroundBase {
    universe: Arc<GroundUniverse>,
    atoms: Vec<GroundAtom>,
    texts: Vec<String>,
    index: HashMap<String, HashMap<Vec<TermId>, AtomId>>,
}

impl PartialEq for GroundBase {
    fn eq(&self, other: &Self) -> bool {
        self.texts == other.texts && self.universe == other.universe
    }
}

impl GroundBase {
    pub fn new(sig: &Signature, universe: Arc<GroundUniverse>) -> Self {
        Self::new_bounded(sig, universe, usize::MAX).expect("unbounded base")
    }

    /// As [`GroundBase::new`], giving up once more than `max_atoms` atoms
    /// would be produced.
    pub fn new_bounded(
        sig: &Signature,
        universe: Arc<GroundUniverse>,
        max_atoms: usize,
    ) -> Option<Self> {
        let mut atoms = Vec::new();
        let mut texts = Vec::new();
        let mut index: HashMap<String, HashMap<Vec<TermId>, AtomId>> = HashMap::new();
        let n = universe.len();
        for (pred, &arity) in &sig.predicates {
            let count = (n as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
            if count.saturating_add(atoms.len() as u128) > max_atoms as u128 {
                return None;
            }
            let mut tuple = vec![0usize; arity];
            loop {
                if arity > 0 && n == 0 {
                    break;
                }
                let args: Vec<TermId> = tuple.iter().map(|&i| TermId(i as u32)).collect();
                let id = AtomId(atoms.len() as u32);
                let text = if arity == 0 {
                    pred.clone()
                } else {
                    format!(
                        "{pred}({})",
                        args.iter()
                            .map(|a| universe.text(*a))
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                };
                index.entry(pred.clone()).or_default().insert(args.clone(), id);
                atoms.push(GroundAtom {
                    predicate: pred.clone(),
                    args,
                });
                texts.push(text);
                // odometer
                let mut k = arity;
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    tuple[k] += 1;
                    if tuple[k] < n {
                        done = false;
                        break;
                    }
                    tuple[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        Some(GroundBase {
            universe,
            atoms,
            texts,
            index,
        })
    }

    pub fn universe(&self) -> &Arc<GroundUniverse> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.atoms.len()).map(|i| AtomId(i as u32))
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id.index()]
    }

    pub fn text(&self, id: AtomId) -> &str {
        &self.texts[id.index()]
    }

    pub fn find_text(&self, text: &str) -> Option<AtomId> {
        self.texts
            .iter()
            .position(|t| t == text)
            .map(|i| AtomId(i as u32))
    }

    pub fn lookup(&self, predicate: &str, args: &[TermId]) -> Option<AtomId> {
        self.index.get(predicate)?.get(args).copied()
    }

    /// Interns a variable-free syntactic atom.
    pub fn resolve(&self, atom: &Atom) -> Option<AtomId> {
        let args = atom
            .args
            .iter()
            .map(|t| self.universe.resolve(t))
            .collect::<Option<Vec<_>>>()?;
        self.lookup(&atom.predicate, &args)
    }
}

/// A ground instance `Aσ ← φσ`: the head is a base atom and the body has no
/// free variables (quantifiers are kept and range over the universe at
/// evaluation time).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundRule {
    pub head: AtomId,
    pub body: Formula,
    /// Index of the source rule in the program.
    pub rule: usize,
}

/// The ground instances of a program over a truncated base.
#[derive(Debug, Clone)]
pub struct GroundProgram {
    base: Arc<GroundBase>,
    pub rules: Vec<GroundRule>,
    by_head: Vec<Vec<usize>>,
    /// Instances dropped because the head or a variable-free body atom
    /// fell outside the depth bound.
    pub truncated: usize,
    pub negation_degree: usize,
}

impl GroundProgram {
    pub fn base(&self) -> &Arc<GroundBase> {
        &self.base
    }

    pub fn universe(&self) -> &Arc<GroundUniverse> {
        self.base.universe()
    }

    /// Indices into `rules` of the instances with head `atom`.
    pub fn rules_for(&self, atom: AtomId) -> impl Iterator<Item = &GroundRule> + '_ {
        self.by_head[atom.index()].iter().map(|&i| &self.rules[i])
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            let rule = Rule::new(self.base.atom_syntax(r.head), r.body.clone());
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

impl GroundBase {
    pub fn atom_syntax(&self, id: AtomId) -> Atom {
        let a = &self.atoms[id.index()];
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|&t| self.universe.to_term(t)).collect(),
        }
    }
}

fn body_fits(body: &Formula, base: &GroundBase) -> bool {
    body.atoms()
        .into_iter()
        .filter(|a| a.variables().is_empty())
        .all(|a| base.resolve(a).is_some())
}

/// Instantiates every free variable of every rule with every universe term.
/// Instances whose head (or a variable-free body atom) falls outside the
/// base are dropped and counted in [`GroundProgram::truncated`].
pub fn ground_program(program: &Program, base: Arc<GroundBase>) -> GroundProgram {
    let universe = base.universe().clone();
    let mut rules = Vec::new();
    let mut truncated = 0;
    for (rule_index, rule) in program.rules.iter().enumerate() {
        let vars: Vec<String> = rule.free_variables().into_iter().collect();
        let n = universe.len();
        let mut tuple = vec![0usize; vars.len()];
        if !vars.is_empty() && n == 0 {
            continue;
        }
        loop {
            let sub: BTreeMap<String, Term> = vars
                .iter()
                .zip(&tuple)
                .map(|(v, &i)| (v.clone(), universe.to_term(TermId(i as u32))))
                .collect();
            let head = rule.head.substitute(&sub);
            let body = rule.body.substitute(&sub);
            match base.resolve(&head) {
                Some(h) if body_fits(&body, &base) => rules.push(GroundRule {
                    head: h,
                    body,
                    rule: rule_index,
                }),
                _ => truncated += 1,
            }
            let mut k = vars.len();
            let mut done = true;
            while k > 0 {
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < n {
                    done = false;
                    break;
                }
                tuple[k] = 0;
            }
            if done {
                break;
            }
        }
    }
    let mut by_head = vec![Vec::new(); base.len()];
    for (i, r) in rules.iter().enumerate() {
        by_head[r.head.index()].push(i);
    }
    GroundProgram {
        base,
        rules,
        by_head,
        truncated,
        negation_degree: program.negation_degree(),
    }
}

/// Universe, base and ground instances of `program` at `depth`.
pub fn ground(program: &Program, depth: usize) -> GroundProgram {
    let universe = Arc::new(GroundUniverse::enumerate(&program.signature, depth));
    let base = Arc::new(GroundBase::new(&program.signature, universe));
    ground_program(program, base)
}

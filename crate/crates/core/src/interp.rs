//! Infinite-valued and 3-valued interpretations over a truncated base.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::ground::{AtomId, GroundBase};
use crate::ordinal::{Ordinal, TruthValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("interpretations are over different bases")]
    BaseMismatch,
    #[error("levels {zeta} and {gamma} are not compatible: I_{zeta} =_{zeta} I_{gamma} fails")]
    IncompatibleLevels { zeta: usize, gamma: usize },
}

/// A total map from the ground base into the infinite-valued truth values.
#[derive(Debug, Clone)]
pub struct Interpretation {
    base: Arc<GroundBase>,
    values: Vec<TruthValue>,
}

impl PartialEq for Interpretation {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && same_base(&self.base, &other.base)
    }
}

impl Eq for Interpretation {}

fn same_base(a: &Arc<GroundBase>, b: &Arc<GroundBase>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Interpretation {
    /// Every atom mapped to `value`.
    pub fn constant(base: Arc<GroundBase>, value: TruthValue) -> Self {
        let values = vec![value; base.len()];
        Interpretation { base, values }
    }

    /// The interpretation sending every atom to F_0.
    pub fn bottom(base: Arc<GroundBase>) -> Self {
        Self::constant(base, TruthValue::BOTTOM)
    }

    pub fn from_values(base: Arc<GroundBase>, values: Vec<TruthValue>) -> Self {
        assert_eq!(base.len(), values.len(), "one value per base atom");
        Interpretation { base, values }
    }

    /// Builds an interpretation from `(atom text, value)` pairs; unlisted
    /// atoms get `default`. Returns the first unknown atom text on failure.
    pub fn from_pairs<'a>(
        base: Arc<GroundBase>,
        default: TruthValue,
        pairs: impl IntoIterator<Item = (&'a str, TruthValue)>,
    ) -> Result<Self, String> {
        let mut i = Self::constant(base, default);
        for (text, v) in pairs {
            let id = i.base.find_text(text).ok_or_else(|| text.to_string())?;
            i.values[id.index()] = v;
        }
        Ok(i)
    }

    pub fn base(&self) -> &Arc<GroundBase> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, atom: AtomId) -> &TruthValue {
        &self.values[atom.index()]
    }

    pub fn set(&mut self, atom: AtomId, value: TruthValue) {
        self.values[atom.index()] = value;
    }

    /// Value of the atom with the given rendering, if it is in the base.
    pub fn get_text(&self, text: &str) -> Option<&TruthValue> {
        self.base.find_text(text).map(|a| self.get(a))
    }

    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &TruthValue)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (AtomId(i as u32), v))
    }

    /// I‖w: the atoms mapped to exactly `w`.
    pub fn slice(&self, w: &TruthValue) -> Vec<AtomId> {
        self.iter()
            .filter(|(_, v)| *v == w)
            .map(|(a, _)| a)
            .collect()
    }

    /// Largest finite degree used, if any atom has a non-zero value.
    pub fn max_degree(&self) -> Option<&Ordinal> {
        self.values.iter().filter_map(|v| v.degree_ordinal()).max()
    }

    fn check_base(&self, other: &Self) -> Result<(), InterpError> {
        if same_base(&self.base, &other.base) {
            Ok(())
        } else {
            Err(InterpError::BaseMismatch)
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (a, v) in self.iter() {
            let (sign, degree) = match v {
                TruthValue::False(o) => ("F", Value::String(o.to_string())),
                TruthValue::True(o) => ("T", Value::String(o.to_string())),
                TruthValue::Zero => ("0", Value::Null),
            };
            m.insert(
                self.base.text(a).to_string(),
                json!({"sign": sign, "degree": degree}),
            );
        }
        Value::Object(m)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in self.iter() {
            writeln!(f, "{} = {v}", self.base.text(a))?;
        }
        Ok(())
    }
}

/// I =_α J: both sides agree on every atom whose degree is at most α on
/// either side.
pub fn eq_alpha(i: &Interpretation, j: &Interpretation, alpha: &Ordinal) -> Result<bool, InterpError> {
    i.check_base(j)?;
    Ok(i.values.iter().zip(&j.values).all(|(a, b)| {
        a == b || !(a.degree().is_at_most(alpha) || b.degree().is_at_most(alpha))
    }))
}

/// I ⊑_α J.
pub fn leq_alpha(i: &Interpretation, j: &Interpretation, alpha: &Ordinal) -> Result<bool, InterpError> {
    i.check_base(j)?;
    let f_alpha = TruthValue::False(alpha.clone());
    let t_alpha = TruthValue::True(alpha.clone());
    Ok(i.values.iter().zip(&j.values).all(|(a, b)| {
        if a.degree().is_below(alpha) || b.degree().is_below(alpha) {
            return a == b;
        }
        (*b != f_alpha || *a == f_alpha) && (*a != t_alpha || *b == t_alpha)
    }))
}

/// I ⊏_α J.
pub fn lt_alpha(i: &Interpretation, j: &Interpretation, alpha: &Ordinal) -> Result<bool, InterpError> {
    Ok(leq_alpha(i, j, alpha)? && !eq_alpha(i, j, alpha)?)
}

/// The least degree at which the two interpretations differ, or `None`
/// if they are equal.
pub fn first_difference(i: &Interpretation, j: &Interpretation) -> Result<Option<Ordinal>, InterpError> {
    i.check_base(j)?;
    Ok(i.values
        .iter()
        .zip(&j.values)
        .filter(|(a, b)| a != b)
        .filter_map(|(a, b)| a.degree().min(b.degree()).ordinal().cloned())
        .min())
}

/// I ⊑_∞ J. Only the first degree of disagreement can witness I ⊏_α J:
/// below it =_β holds, and from it on =_β fails.
pub fn leq_infty(i: &Interpretation, j: &Interpretation) -> Result<bool, InterpError> {
    match first_difference(i, j)? {
        None => Ok(true),
        Some(d) => leq_alpha(i, j, &d),
    }
}

/// The union of a sequence of level interpretations I_0, ..., I_{α-1}
/// (α = `levels.len()`): an atom takes the value I_ζ assigns it at exactly
/// degree ζ, and F_α if there is no such level.
pub fn union_levels(base: Arc<GroundBase>, levels: &[Interpretation]) -> Result<Interpretation, InterpError> {
    for l in levels {
        if !same_base(&base, &l.base) {
            return Err(InterpError::BaseMismatch);
        }
    }
    for gamma in 0..levels.len() {
        for zeta in 0..=gamma {
            if !eq_alpha(&levels[zeta], &levels[gamma], &Ordinal::from(zeta))? {
                return Err(InterpError::IncompatibleLevels { zeta, gamma });
            }
        }
    }
    let alpha = Ordinal::from(levels.len());
    let mut out = Interpretation::constant(base, TruthValue::False(alpha));
    for (zeta, level) in levels.iter().enumerate() {
        let z = Ordinal::from(zeta);
        for (k, v) in level.values.iter().enumerate() {
            if v.degree_ordinal() == Some(&z) {
                out.values[k] = v.clone();
            }
        }
    }
    Ok(out)
}

/// The three classical-style values F < 0 < T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth3 {
    False,
    Zero,
    True,
}

impl Truth3 {
    pub fn negate(self) -> Truth3 {
        match self {
            Truth3::False => Truth3::True,
            Truth3::Zero => Truth3::Zero,
            Truth3::True => Truth3::False,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Truth3::False => "F",
            Truth3::Zero => "0",
            Truth3::True => "T",
        }
    }

    pub fn collapse(v: &TruthValue) -> Truth3 {
        match v {
            TruthValue::False(_) => Truth3::False,
            TruthValue::Zero => Truth3::Zero,
            TruthValue::True(_) => Truth3::True,
        }
    }
}

impl fmt::Display for Truth3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone)]
pub struct ThreeValuedInterpretation {
    base: Arc<GroundBase>,
    values: Vec<Truth3>,
}

impl PartialEq for ThreeValuedInterpretation {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && same_base(&self.base, &other.base)
    }
}

impl Eq for ThreeValuedInterpretation {}

impl ThreeValuedInterpretation {
    pub fn from_values(base: Arc<GroundBase>, values: Vec<Truth3>) -> Self {
        assert_eq!(base.len(), values.len(), "one value per base atom");
        ThreeValuedInterpretation { base, values }
    }

    pub fn constant(base: Arc<GroundBase>, v: Truth3) -> Self {
        let values = vec![v; base.len()];
        ThreeValuedInterpretation { base, values }
    }

    pub fn base(&self) -> &Arc<GroundBase> {
        &self.base
    }

    pub fn get(&self, atom: AtomId) -> Truth3 {
        self.values[atom.index()]
    }

    pub fn get_text(&self, text: &str) -> Option<Truth3> {
        self.base.find_text(text).map(|a| self.get(a))
    }

    pub fn values(&self) -> &[Truth3] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, Truth3)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (AtomId(i as u32), *v))
    }

    /// Przymusinski's ordering: every false atom of `other` is false here and
    /// every true atom here is true in `other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| match (a, b) {
            (_, Truth3::False) => *a == Truth3::False,
            (Truth3::True, _) => *b == Truth3::True,
            _ => true,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (a, v) in self.iter() {
            m.insert(self.base.text(a).to_string(), Value::String(v.symbol().into()));
        }
        Value::Object(m)
    }
}

impl fmt::Display for ThreeValuedInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in self.iter() {
            writeln!(f, "{} = {v}", self.base.text(a))?;
        }
        Ok(())
    }
}

pub fn collapse(i: &Interpretation) -> ThreeValuedInterpretation {
    ThreeValuedInterpretation {
        base: i.base.clone(),
        values: i.values.iter().map(Truth3::collapse).collect(),
    }
}

/// True when `v` has a finite degree strictly below `alpha` or is F_alpha.
pub fn within_union_range(v: &TruthValue, alpha: &Ordinal) -> bool {
    v.degree().is_below(alpha) || *v == TruthValue::False(alpha.clone())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ground::{GroundBase, GroundUniverse};
    use crate::syntax::Signature;
    use proptest::prelude::*;

    pub(crate) fn prop_base(n: usize) -> Arc<GroundBase> {
        let sig = Signature {
            predicates: (0..n).map(|k| (format!("p{k}"), 0)).collect(),
            functions: Default::default(),
            constants: ["c".to_string()].into(),
        };
        let u = Arc::new(GroundUniverse::enumerate(&sig, 0));
        Arc::new(GroundBase::new(&sig, u))
    }

    fn interp(base: &Arc<GroundBase>, vals: &[TruthValue]) -> Interpretation {
        Interpretation::from_values(base.clone(), vals.to_vec())
    }

    fn o(n: usize) -> Ordinal {
        Ordinal::from(n)
    }

    #[test]
    fn slices() {
        let b = prop_base(2);
        let bot = Interpretation::bottom(b.clone());
        assert_eq!(bot.slice(&TruthValue::BOTTOM).len(), 2);
        assert!(bot.slice(&TruthValue::TOP).is_empty());
        let i = interp(&b, &[TruthValue::t(1), TruthValue::f(0)]);
        assert_eq!(i.slice(&TruthValue::t(1)), vec![AtomId(0)]);
    }

    #[test]
    fn eq_alpha_examples() {
        let b = prop_base(2);
        let i = interp(&b, &[TruthValue::f(0), TruthValue::f(0)]);
        let j = interp(&b, &[TruthValue::Zero, TruthValue::f(0)]);
        assert!(!eq_alpha(&i, &j, &o(0)).unwrap());
        let i = interp(&b, &[TruthValue::t(2), TruthValue::f(0)]);
        let j = interp(&b, &[TruthValue::t(3), TruthValue::f(0)]);
        assert!(eq_alpha(&i, &j, &o(1)).unwrap());
        assert!(!eq_alpha(&i, &j, &o(2)).unwrap());
        assert!(eq_alpha(&i, &i, &Ordinal::omega()).unwrap());
    }

    #[test]
    fn leq_examples() {
        let b = prop_base(1);
        let i1 = interp(&b, &[TruthValue::f(0)]);
        let i2 = interp(&b, &[TruthValue::Zero]);
        assert!(lt_alpha(&i1, &i2, &o(0)).unwrap());
        assert!(leq_infty(&i1, &i2).unwrap());
        assert!(!leq_infty(&i2, &i1).unwrap());
        assert!(leq_infty(&i1, &i1).unwrap());
        let t = interp(&b, &[TruthValue::t(0)]);
        assert!(!leq_alpha(&t, &i1, &o(0)).unwrap());
    }

    #[test]
    fn base_mismatch_is_reported() {
        let i = Interpretation::bottom(prop_base(1));
        let j = Interpretation::bottom(prop_base(2));
        assert_eq!(eq_alpha(&i, &j, &o(0)), Err(InterpError::BaseMismatch));
    }

    #[test]
    fn union_examples() {
        let b = prop_base(3);
        let empty = union_levels(b.clone(), &[]).unwrap();
        assert_eq!(empty, Interpretation::bottom(b.clone()));

        let l0 = interp(&b, &[TruthValue::t(0), TruthValue::f(1), TruthValue::f(1)]);
        let u = union_levels(b.clone(), std::slice::from_ref(&l0)).unwrap();
        assert_eq!(u.values(), [TruthValue::t(0), TruthValue::f(1), TruthValue::f(1)]);

        let l1 = interp(&b, &[TruthValue::t(0), TruthValue::f(1), TruthValue::f(2)]);
        let u = union_levels(b.clone(), &[l0.clone(), l1]).unwrap();
        assert_eq!(u.values(), [TruthValue::t(0), TruthValue::f(1), TruthValue::f(2)]);

        let bad = interp(&b, &[TruthValue::f(0), TruthValue::f(1), TruthValue::f(2)]);
        assert_eq!(
            union_levels(b, &[l0, bad]),
            Err(InterpError::IncompatibleLevels { zeta: 0, gamma: 1 })
        );
    }

    #[test]
    fn collapse_examples() {
        let b = prop_base(2);
        let i = interp(&b, &[TruthValue::t(7), TruthValue::Zero]);
        assert_eq!(collapse(&i).values(), [Truth3::True, Truth3::Zero]);
    }

    #[test]
    fn json_rendering() {
        let b = prop_base(2);
        let i = interp(&b, &[TruthValue::t(1), TruthValue::Zero]);
        assert_eq!(
            i.to_json().to_string(),
            r#"{"p0":{"sign":"T","degree":"1"},"p1":{"sign":"0","degree":null}}"#
        );
    }

    pub(crate) fn truth_value(max_degree: u64) -> impl Strategy<Value = TruthValue> {
        prop_oneof![
            (0..=max_degree).prop_map(TruthValue::f),
            (0..=max_degree).prop_map(TruthValue::t),
            Just(TruthValue::Zero),
        ]
    }

    fn triple() -> impl Strategy<Value = (Vec<TruthValue>, Vec<TruthValue>, Vec<TruthValue>, usize)> {
        (1usize..5).prop_flat_map(|n| {
            (
                prop::collection::vec(truth_value(3), n),
                prop::collection::vec(truth_value(3), n),
                prop::collection::vec(truth_value(3), n),
                0usize..4,
            )
        })
    }

    proptest! {
        #[test]
        fn leq_alpha_is_a_preorder_with_eq_alpha_kernel((a, b, c, alpha) in triple()) {
            let base = prop_base(a.len());
            let (i, j, k) = (interp(&base, &a), interp(&base, &b), interp(&base, &c));
            let al = o(alpha);
            prop_assert!(leq_alpha(&i, &i, &al).unwrap());
            if leq_alpha(&i, &j, &al).unwrap() && leq_alpha(&j, &k, &al).unwrap() {
                prop_assert!(leq_alpha(&i, &k, &al).unwrap());
            }
            if leq_alpha(&i, &j, &al).unwrap() && leq_alpha(&j, &i, &al).unwrap() {
                prop_assert!(eq_alpha(&i, &j, &al).unwrap());
            }
        }

        #[test]
        fn leq_infty_is_a_partial_order((a, b, c, _) in triple()) {
            let base = prop_base(a.len());
            let (i, j, k) = (interp(&base, &a), interp(&base, &b), interp(&base, &c));
            prop_assert!(leq_infty(&i, &i).unwrap());
            if leq_infty(&i, &j).unwrap() && leq_infty(&j, &k).unwrap() {
                prop_assert!(leq_infty(&i, &k).unwrap());
            }
            if leq_infty(&i, &j).unwrap() && leq_infty(&j, &i).unwrap() {
                prop_assert_eq!(&i, &j);
            }
        }

        #[test]
        fn leq_infty_matches_exhaustive_witness_search((a, b, _, _) in triple()) {
            let base = prop_base(a.len());
            let (i, j) = (interp(&base, &a), interp(&base, &b));
            let witness = (0..6).any(|al| lt_alpha(&i, &j, &o(al)).unwrap());
            prop_assert_eq!(leq_infty(&i, &j).unwrap(), i == j || witness);
        }

        #[test]
        fn two_valued_leq_infty_is_inclusion(a in prop::collection::vec(any::<bool>(), 1..6),
                                             b in prop::collection::vec(any::<bool>(), 1..6)) {
            let n = a.len().min(b.len());
            let base = prop_base(n);
            let tv = |x: bool| if x { TruthValue::TOP } else { TruthValue::BOTTOM };
            let i = Interpretation::from_values(base.clone(), a[..n].iter().map(|&x| tv(x)).collect());
            let j = Interpretation::from_values(base, b[..n].iter().map(|&x| tv(x)).collect());
            let ti = i.slice(&TruthValue::TOP);
            let tj = j.slice(&TruthValue::TOP);
            prop_assert_eq!(leq_infty(&i, &j).unwrap(), ti.iter().all(|x| tj.contains(x)));
        }

        #[test]
        fn union_stays_in_clause_range(vals in prop::collection::vec(truth_value(4), 1..5), alpha in 0usize..4) {
            // levels built to be compatible: level γ keeps values of degree ≤ γ from `vals`
            let base = prop_base(vals.len());
            let levels: Vec<Interpretation> = (0..alpha).map(|g| {
                let vs = vals.iter().map(|v| if v.degree().is_at_most(&o(g)) { v.clone() } else { TruthValue::False(o(g + 1)) }).collect();
                Interpretation::from_values(base.clone(), vs)
            }).collect();
            let u = union_levels(base, &levels).unwrap();
            for v in u.values() {
                prop_assert!(within_union_range(v, &o(alpha)));
            }
        }
    }
}

//! The abstract domain: operations, interactions, well-defined interaction
//! sets with their join and order, argument profiles, and the canonical text
//! form used for comparison and output.
//!
//! An interaction stores its operations keyed by program point, so that at
//! most one operation exists per point. Stripping the points yields the
//! operation multiset used by profiles.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::frontend::{Mode, Point, Predicate, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("interaction from `{0}` to itself")]
    SelfInteraction(Var),
    #[error("interaction targets input argument `{target}` of `{owner}`")]
    InputTarget { owner: String, target: Var },
    #[error("interaction `{from} -> {to}` carries no operations")]
    EmptyOperations { from: Var, to: Var },
    #[error("cannot join interaction sets of `{0}` and `{1}`")]
    OwnerMismatch(String, String),
    #[error("variable `{0}` is not a formal argument")]
    NotAnArgument(Var),
}

/// Canonical ordered profile carried by a ψ operation. Equality, ordering and
/// hashing go through the cached canonical string.
#[derive(Clone)]
pub struct PsiProfile {
    profiles: Arc<[ArgumentProfile]>,
    canon: Arc<str>,
}

impl PsiProfile {
    pub fn new(profiles: Vec<ArgumentProfile>) -> Self {
        let canon = canon_profiles(&profiles);
        PsiProfile {
            profiles: profiles.into(),
            canon: canon.into(),
        }
    }

    pub fn profiles(&self) -> &[ArgumentProfile] {
        &self.profiles
    }

    /// The canonical serialization of the payload, without the `psi:` prefix.
    pub fn canonical(&self) -> &str {
        &self.canon
    }
}

impl PartialEq for PsiProfile {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for PsiProfile {}

impl PartialOrd for PsiProfile {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PsiProfile {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canon.cmp(&other.canon)
    }
}

impl Hash for PsiProfile {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

impl fmt::Debug for PsiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ{}", self.canon)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operation {
    Assign,
    Test,
    Construct {
        functor: String,
        arity: usize,
    },
    Deconstruct {
        functor: String,
        arity: usize,
    },
    /// Stand-in for a directly recursive call.
    PsiBot,
    /// A call, abstracted by the callee's ordered profile.
    Psi(PsiProfile),
}

impl Operation {
    pub fn construct(functor: &str, arity: usize) -> Self {
        Operation::Construct {
            functor: functor.to_owned(),
            arity,
        }
    }

    pub fn deconstruct(functor: &str, arity: usize) -> Self {
        Operation::Deconstruct {
            functor: functor.to_owned(),
            arity,
        }
    }

    pub fn is_psi(&self) -> bool {
        matches!(self, Operation::PsiBot | Operation::Psi(_))
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canon_op(self))
    }
}

pub type SitedOps = BTreeMap<Point, Operation>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    pub source: Var,
    pub target: Var,
    pub ops: SitedOps,
}

impl Interaction {
    pub fn new(source: Var, target: Var, ops: SitedOps) -> Self {
        Interaction {
            source,
            target,
            ops,
        }
    }

    pub fn single(source: &Var, target: &Var, op: Operation, point: Point) -> Self {
        Interaction {
            source: source.clone(),
            target: target.clone(),
            ops: BTreeMap::from([(point, op)]),
        }
    }
}

/// The predicate an interaction set belongs to: its name and which formal
/// arguments are inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Owner {
    pub name: String,
    pub params: Vec<Var>,
    pub modes: Vec<Mode>,
}

impl Owner {
    pub fn of(pred: &Predicate) -> Arc<Owner> {
        Arc::new(Owner {
            name: pred.name.clone(),
            params: pred.params.clone(),
            modes: pred.modes.clone(),
        })
    }

    fn is_input(&self, v: &Var) -> bool {
        self.params
            .iter()
            .zip(&self.modes)
            .any(|(p, m)| p == v && *m == Mode::In)
    }

    pub fn is_param(&self, v: &Var) -> bool {
        self.params.contains(v)
    }
}

/// A well-defined interaction set: at most one interaction per ordered
/// variable pair, no self-interactions, and no interaction targeting an input
/// argument of the owner.
#[derive(Debug, Clone)]
pub struct InteractionSet {
    owner: Arc<Owner>,
    map: BTreeMap<(Var, Var), SitedOps>,
}

impl PartialEq for InteractionSet {
    fn eq(&self, other: &Self) -> bool {
        self.owner.name == other.owner.name && self.map == other.map
    }
}

impl Eq for InteractionSet {}

impl InteractionSet {
    /// The bottom element for `owner`.
    pub fn empty(owner: Arc<Owner>) -> Self {
        InteractionSet {
            owner,
            map: BTreeMap::new(),
        }
    }

    pub fn from_interactions(
        owner: Arc<Owner>,
        interactions: impl IntoIterator<Item = Interaction>,
    ) -> Result<Self, DomainError> {
        let mut s = InteractionSet::empty(owner);
        for i in interactions {
            s.insert(i)?;
        }
        Ok(s)
    }

    pub fn owner(&self) -> &Arc<Owner> {
        &self.owner
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, source: &Var, target: &Var) -> Option<&SitedOps> {
        self.map.get(&(source.clone(), target.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Var, &SitedOps)> {
        self.map.iter().map(|((s, t), o)| (s, t, o))
    }

    pub fn interactions(&self) -> Vec<Interaction> {
        self.iter()
            .map(|(s, t, o)| Interaction::new(s.clone(), t.clone(), o.clone()))
            .collect()
    }

    fn check(&self, source: &Var, target: &Var, ops: &SitedOps) -> Result<(), DomainError> {
        if source == target {
            return Err(DomainError::SelfInteraction(source.clone()));
        }
        if ops.is_empty() {
            return Err(DomainError::EmptyOperations {
                from: source.clone(),
                to: target.clone(),
            });
        }
        if self.owner.is_input(target) {
            return Err(DomainError::InputTarget {
                owner: self.owner.name.clone(),
                target: target.clone(),
            });
        }
        Ok(())
    }

    /// In-place `i ⊔ self`. An operation of `i` at a program point replaces
    /// whatever `self` had at that point. Returns whether `self` changed.
    pub fn insert(&mut self, i: Interaction) -> Result<bool, DomainError> {
        self.check(&i.source, &i.target, &i.ops)?;
        match self.map.entry((i.source, i.target)) {
            Entry::Vacant(e) => {
                e.insert(i.ops);
                Ok(true)
            }
            Entry::Occupied(mut e) => {
                let existing = e.get_mut();
                let mut changed = false;
                for (pt, op) in i.ops {
                    match existing.insert(pt, op.clone()) {
                        Some(prev) if prev == op => {}
                        _ => changed = true,
                    }
                }
                Ok(changed)
            }
        }
    }

    /// In-place `other ⊔ self`.
    pub fn join_with(&mut self, other: &InteractionSet) -> Result<bool, DomainError> {
        if self.owner.name != other.owner.name {
            return Err(DomainError::OwnerMismatch(
                other.owner.name.clone(),
                self.owner.name.clone(),
            ));
        }
        let mut changed = false;
        for ((s, t), ops) in &other.map {
            changed |= self.insert(Interaction::new(s.clone(), t.clone(), ops.clone()))?;
        }
        Ok(changed)
    }

    /// Keeps only interactions whose endpoints satisfy `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&Var, &Var) -> bool) {
        self.map.retain(|(s, t), _| keep(s, t));
    }

    /// One line per interaction: `X -> Z {op@point, ...}`, in canonical order.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (s, t, ops) in self.iter() {
            let ops: Vec<_> = ops
                .iter()
                .map(|(pt, op)| format!("{}@{pt}", canon_op(op)))
                .collect();
            out.push_str(&format!("{s} -> {t} {{{}}}\n", ops.join(", ")));
        }
        out
    }
}

/// `i ⊔ s`.
pub fn join_interaction(i: Interaction, s: &InteractionSet) -> Result<InteractionSet, DomainError> {
    let mut out = s.clone();
    out.insert(i)?;
    Ok(out)
}

/// `a ⊔ b`: every interaction of `a` joined into `b`.
pub fn join_sets(a: &InteractionSet, b: &InteractionSet) -> Result<InteractionSet, DomainError> {
    let mut out = b.clone();
    out.join_with(a)?;
    Ok(out)
}

/// `a ⊑ b`: each interaction of `a` has a counterpart in `b` whose sited
/// operations include its own.
pub fn leq_sets(a: &InteractionSet, b: &InteractionSet) -> bool {
    a.map.iter().all(|(pair, ops)| {
        b.map.get(pair).is_some_and(|theirs| {
            ops.iter()
                .all(|(pt, op)| theirs.get(pt).is_some_and(|o| o == op))
        })
    })
}

/// An o-set: an operation multiset paired with a 1-based target position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OSet {
    /// Sorted; duplicates are significant.
    pub ops: Vec<Operation>,
    pub target: usize,
}

impl OSet {
    pub fn new(mut ops: Vec<Operation>, target: usize) -> Self {
        ops.sort();
        OSet { ops, target }
    }
}

/// The o-sets of one argument, sorted by target position.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentProfile {
    osets: Vec<OSet>,
}

impl ArgumentProfile {
    /// Builds a profile, merging o-sets that share a target position.
    pub fn new(osets: impl IntoIterator<Item = OSet>) -> Self {
        let mut by_target: BTreeMap<usize, Vec<Operation>> = BTreeMap::new();
        for o in osets {
            by_target.entry(o.target).or_default().extend(o.ops);
        }
        ArgumentProfile {
            osets: by_target
                .into_iter()
                .map(|(t, ops)| OSet::new(ops, t))
                .collect(),
        }
    }

    /// Like [`ArgumentProfile::new`] but keeps o-sets with equal targets apart.
    /// Only used for position-independent keys while ordering.
    pub(crate) fn loose(mut osets: Vec<OSet>) -> Self {
        osets.sort();
        ArgumentProfile { osets }
    }

    pub fn osets(&self) -> &[OSet] {
        &self.osets
    }

    pub fn is_empty(&self) -> bool {
        self.osets.is_empty()
    }

    pub fn ops(&self) -> impl Iterator<Item = &Operation> {
        self.osets.iter().flat_map(|o| o.ops.iter())
    }

    /// Applies `f` to every target position.
    pub fn map_targets(&self, f: impl Fn(usize) -> usize) -> Self {
        ArgumentProfile::new(
            self.osets
                .iter()
                .map(|o| OSet::new(o.ops.clone(), f(o.target))),
        )
    }
}

/// Per-argument profiles in original argument order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredicateProfile {
    pub per_arg: Vec<ArgumentProfile>,
}

/// Decomposes a projected interaction set into per-argument profiles,
/// dropping program points but keeping multiplicities.
pub fn strip_points(
    s: &InteractionSet,
    params: &[Var],
    modes: &[Mode],
) -> Result<PredicateProfile, DomainError> {
    let pos = |v: &Var| {
        params
            .iter()
            .position(|p| p == v)
            .ok_or_else(|| DomainError::NotAnArgument(v.clone()))
    };
    let mut osets: Vec<Vec<OSet>> = vec![Vec::new(); params.len()];
    for (src, tgt, ops) in s.iter() {
        let i = pos(src)?;
        let j = pos(tgt)?;
        if modes.get(j) == Some(&Mode::In) {
            return Err(DomainError::InputTarget {
                owner: s.owner.name.clone(),
                target: tgt.clone(),
            });
        }
        osets[i].push(OSet::new(ops.values().cloned().collect(), j + 1));
    }
    Ok(PredicateProfile {
        per_arg: osets.into_iter().map(ArgumentProfile::new).collect(),
    })
}

/// Canonical text of an operation. Injective: distinct operations never share
/// a string.
pub fn canon_op(op: &Operation) -> String {
    match op {
        Operation::Deconstruct { functor, arity } => format!("deconstruct:{functor}/{arity}"),
        Operation::Construct { functor, arity } => format!("construct:{functor}/{arity}"),
        Operation::Assign => "assign".into(),
        Operation::Test => "test".into(),
        Operation::PsiBot => "psi_bot".into(),
        Operation::Psi(p) => format!("psi:{}", p.canonical()),
    }
}

/// `({op,...},target)` with the operations sorted by their canonical text.
pub fn canon_oset(o: &OSet) -> String {
    let mut ops: Vec<String> = o.ops.iter().map(canon_op).collect();
    ops.sort();
    format!("({{{}}},{})", ops.join(","), o.target)
}

/// `{oset,...}` in target order.
pub fn canon_argument_profile(a: &ArgumentProfile) -> String {
    let osets: Vec<String> = a.osets.iter().map(canon_oset).collect();
    format!("{{{}}}", osets.join(","))
}

/// `[profile;...;profile]`.
pub fn canon_profiles(profiles: &[ArgumentProfile]) -> String {
    let parts: Vec<String> = profiles.iter().map(canon_argument_profile).collect();
    format!("[{}]", parts.join(";"))
}

/// Variables mentioned by a set, for diagnostics and tests.
pub fn variables(s: &InteractionSet) -> BTreeSet<Var> {
    s.iter()
        .flat_map(|(a, b, _)| [a.clone(), b.clone()])
        .collect()
}

//! Ordering argument profiles and producing ordered (normalized) profiles.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::domain::{
    canon_argument_profile, canon_op, canon_profiles, strip_points, ArgumentProfile, DomainError,
    InteractionSet, OSet, Operation, PredicateProfile, PsiProfile,
};
use crate::frontend::{Mode, Var};

/// Counts describing an argument profile, compared dimension by dimension in
/// field order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FeatureVector {
    pub n_osets: usize,
    /// All operations, with multiplicity.
    pub n_ops: usize,
    /// `psi_bot` and `psi` operations.
    pub n_psi: usize,
    pub n_construct: usize,
    pub n_deconstruct: usize,
    pub n_assign: usize,
}

impl FeatureVector {
    pub fn as_array(&self) -> [usize; 6] {
        [
            self.n_osets,
            self.n_ops,
            self.n_psi,
            self.n_construct,
            self.n_deconstruct,
            self.n_assign,
        ]
    }
}

/// ψ payloads count as a single operation; their contents are not inspected.
pub fn features(a: &ArgumentProfile) -> FeatureVector {
    let mut f = FeatureVector {
        n_osets: a.osets().len(),
        ..Default::default()
    };
    for op in a.ops() {
        f.n_ops += 1;
        match op {
            Operation::PsiBot | Operation::Psi(_) => f.n_psi += 1,
            Operation::Construct { .. } => f.n_construct += 1,
            Operation::Deconstruct { .. } => f.n_deconstruct += 1,
            Operation::Assign => f.n_assign += 1,
            Operation::Test => {}
        }
    }
    f
}

/// A total order on argument profiles. `Equal` must coincide with equality of
/// canonical serializations.
pub trait ProfileOrder {
    fn compare(&self, a: &ArgumentProfile, b: &ArgumentProfile) -> Ordering;
}

/// The feature order: the profile whose feature vector is larger at the first
/// differing dimension sorts first. Equal vectors fall back to the canonical
/// text.
#[derive(Debug, Clone, Copy, Default)]
pub struct FeatureOrder;

impl ProfileOrder for FeatureOrder {
    fn compare(&self, a: &ArgumentProfile, b: &ArgumentProfile) -> Ordering {
        compare_profiles(a, b)
    }
}

pub fn compare_profiles(a: &ArgumentProfile, b: &ArgumentProfile) -> Ordering {
    features(b)
        .as_array()
        .cmp(&features(a).as_array())
        .then_with(|| canon_argument_profile(a).cmp(&canon_argument_profile(b)))
}

/// A predicate profile sorted by a [`ProfileOrder`], with every target
/// position rewritten to the target's new position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedProfile {
    pub profiles: Vec<ArgumentProfile>,
    /// `permutation[new] = original`, both 1-based.
    pub permutation: Vec<usize>,
}

impl OrderedProfile {
    pub fn canonical(&self) -> String {
        canon_profiles(&self.profiles)
    }

    pub fn psi(&self) -> PsiProfile {
        PsiProfile::new(self.profiles.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.permutation
            .iter()
            .enumerate()
            .all(|(i, &p)| p == i + 1)
    }
}

fn relabel(a: &ArgumentProfile, class: &[usize]) -> ArgumentProfile {
    ArgumentProfile::loose(
        a.osets()
            .iter()
            .map(|o| OSet::new(o.ops.clone(), class[o.target - 1]))
            .collect(),
    )
}

/// For every argument, the o-sets pointing at it: source index and the
/// canonical text of the operations.
fn incoming(per_arg: &[ArgumentProfile]) -> Vec<Vec<(usize, Vec<String>)>> {
    let mut inc = vec![Vec::new(); per_arg.len()];
    for (src, a) in per_arg.iter().enumerate() {
        for o in a.osets() {
            let mut ops: Vec<String> = o.ops.iter().map(canon_op).collect();
            ops.sort();
            inc[o.target - 1].push((src, ops));
        }
    }
    inc
}

/// Splits classes until stable. An argument's key is its class, its profile
/// with targets replaced by their classes, and the classes and operations of
/// the o-sets targeting it. Class numbers are ranks, so the result does not
/// depend on where the arguments sit.
fn refine<O: ProfileOrder + ?Sized>(
    per_arg: &[ArgumentProfile],
    inc: &[Vec<(usize, Vec<String>)>],
    mut class: Vec<usize>,
    order: &O,
) -> Vec<usize> {
    let n = per_arg.len();
    let mut count = usize::MAX;
    loop {
        let keys: Vec<ArgumentProfile> = per_arg.iter().map(|a| relabel(a, &class)).collect();
        let ins: Vec<Vec<(usize, &[String])>> = inc
            .iter()
            .map(|v| {
                let mut v: Vec<_> = v.iter().map(|(s, o)| (class[*s], o.as_slice())).collect();
                v.sort();
                v
            })
            .collect();
        let cmp = |a: &usize, b: &usize| {
            class[*a]
                .cmp(&class[*b])
                .then_with(|| order.compare(&keys[*a], &keys[*b]))
                .then_with(|| ins[*a].cmp(&ins[*b]))
        };
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(cmp);
        let mut next = vec![0usize; n];
        let mut classes = 0;
        for w in 0..n {
            if w == 0 || cmp(&idx[w - 1], &idx[w]) != Ordering::Equal {
                classes += 1;
            }
            next[idx[w]] = classes - 1;
        }
        class = next;
        if classes == count {
            return class;
        }
        count = classes;
    }
}

fn remap(per_arg: &[ArgumentProfile], perm: &[usize]) -> Vec<ArgumentProfile> {
    let mut new_pos = vec![0usize; perm.len()];
    for (new, &orig) in perm.iter().enumerate() {
        new_pos[orig] = new + 1;
    }
    perm.iter()
        .map(|&orig| per_arg[orig].map_targets(|t| new_pos[t - 1]))
        .collect()
}

/// Orders arguments by class, then re-sorts the remapped profiles under
/// `order` until the sequence is sorted. 0-based, new -> original.
fn settle<O: ProfileOrder + ?Sized>(
    per_arg: &[ArgumentProfile],
    class: &[usize],
    order: &O,
) -> Vec<usize> {
    let n = per_arg.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&i| (class[i], i));
    for _ in 0..=n {
        let current = remap(per_arg, &perm);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| order.compare(&current[a], &current[b]));
        if idx.iter().enumerate().all(|(i, &k)| i == k) {
            break;
        }
        perm = idx.into_iter().map(|k| perm[k]).collect();
    }
    perm
}

fn is_sorted<O: ProfileOrder + ?Sized>(seq: &[ArgumentProfile], order: &O) -> bool {
    seq.windows(2)
        .all(|w| order.compare(&w[0], &w[1]) != Ordering::Greater)
}

struct Search<'a, O: ?Sized> {
    per_arg: &'a [ArgumentProfile],
    inc: &'a [Vec<(usize, Vec<String>)>],
    order: &'a O,
    /// Unsorted candidates rank after sorted ones, then by canonical text.
    best: Option<((bool, String), Vec<usize>)>,
}

impl<O: ProfileOrder + ?Sized> Search<'_, O> {
    fn isolated(&self, i: usize) -> bool {
        self.per_arg[i].is_empty() && self.inc[i].is_empty()
    }

    /// Individualizes each member of the first ambiguous class in turn and
    /// keeps the candidate with the smallest canonical text.
    fn run(&mut self, class: Vec<usize>) {
        let class = refine(self.per_arg, self.inc, class, self.order);
        let n = class.len();
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in class.iter().enumerate() {
            members.entry(c).or_default().push(i);
        }
        // Isolated arguments are interchangeable and need no branching.
        let ambiguous = members
            .iter()
            .find(|(_, m)| m.len() > 1 && !m.iter().all(|&i| self.isolated(i)));
        match ambiguous {
            None => {
                let perm = settle(self.per_arg, &class, self.order);
                let seq = remap(self.per_arg, &perm);
                let key = (!is_sorted(&seq, self.order), canon_profiles(&seq));
                if self.best.as_ref().is_none_or(|(b, _)| key < *b) {
                    self.best = Some((key, perm));
                }
            }
            Some((&c, m)) => {
                for &pick in &m.clone() {
                    let split = (0..n)
                        .map(|x| 2 * class[x] + usize::from(class[x] == c && x != pick))
                        .collect();
                    self.run(split);
                }
            }
        }
    }
}

/// Sorts a predicate profile by `order`. The result depends only on the
/// profile up to renaming of argument positions; arguments that remain
/// interchangeable keep their original relative order.
///
/// Feature vectors always end up sorted. Full sortedness can be impossible
/// once targets are renumbered: two outputs that only feed each other yield
/// `{(ops,3)}` at position 2 and `{(ops,2)}` at position 3 in either order.
/// A sorted arrangement is chosen whenever one exists.
pub fn oprof<O: ProfileOrder + ?Sized>(profile: &PredicateProfile, order: &O) -> OrderedProfile {
    let per_arg = &profile.per_arg;
    let inc = incoming(per_arg);
    let mut search = Search {
        per_arg,
        inc: &inc,
        order,
        best: None,
    };
    search.run(vec![0; per_arg.len()]);
    let (_, perm) = search.best.unwrap_or_default();
    OrderedProfile {
        profiles: remap(per_arg, &perm),
        permutation: perm.into_iter().map(|i| i + 1).collect(),
    }
}

/// Strips points from a projected interaction set and orders the result.
pub fn oprof_of_set<O: ProfileOrder + ?Sized>(
    set: &InteractionSet,
    params: &[Var],
    modes: &[Mode],
    order: &O,
) -> Result<OrderedProfile, DomainError> {
    Ok(oprof(&strip_points(set, params, modes)?, order))
}

#![allow(dead_code)]

use std::fmt::Write;
use std::sync::Arc;

use argprof::domain::{Interaction, InteractionSet, Operation, Owner, SitedOps};
use argprof::frontend::{parse_program, validate, Mode, Program, Var};
use argprof::interp::GroundTerm;
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIXTURES: &[(&str, &str)] = &[
    (
        "app_concat_dapp",
        include_str!("../fixtures/app_concat_dapp.mpl"),
    ),
    ("lists", include_str!("../fixtures/lists.mpl")),
    ("nat", include_str!("../fixtures/nat.mpl")),
    ("trees", include_str!("../fixtures/trees.mpl")),
];

pub fn load(src: &str) -> Program {
    let p = parse_program(src).expect("fixture parses");
    let report = validate(&p);
    assert!(report.is_ok(), "{}", report.render("fixture"));
    p
}

pub fn fixtures() -> Vec<(&'static str, Program)> {
    FIXTURES.iter().map(|(n, s)| (*n, load(s))).collect()
}

/// `perm[new] = original` (1-based), uniformly random.
pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

// ---- interaction sets ----

/// Owner `q(X1: in, X2: in, X3: out, X4: out)` plus locals `L1`, `L2`.
pub fn lattice_owner() -> Arc<Owner> {
    Arc::new(Owner {
        name: "q".into(),
        params: ["X1", "X2", "X3", "X4"].map(Var::from).to_vec(),
        modes: vec![Mode::In, Mode::In, Mode::Out, Mode::Out],
    })
}

const LATTICE_VARS: [&str; 6] = ["X1", "X2", "X3", "X4", "L1", "L2"];
const SITES: u32 = 8;

/// One operation per program point, shared by all sets of a sample so that
/// joins never have to pick between two operations at the same point.
pub fn random_sites<R: Rng>(rng: &mut R) -> Vec<Operation> {
    (0..SITES)
        .map(|_| match rng.gen_range(0..6) {
            0 => Operation::Assign,
            1 => Operation::Test,
            2 => Operation::construct(
                ["cons", "s", "nil"][rng.gen_range(0..3)],
                rng.gen_range(0..3),
            ),
            3 => Operation::deconstruct(
                ["cons", "s", "nil"][rng.gen_range(0..3)],
                rng.gen_range(0..3),
            ),
            _ => Operation::PsiBot,
        })
        .collect()
}

pub fn random_set<R: Rng>(rng: &mut R, owner: &Arc<Owner>, sites: &[Operation]) -> InteractionSet {
    let mut s = InteractionSet::empty(owner.clone());
    for _ in 0..rng.gen_range(0..7) {
        let src = LATTICE_VARS[rng.gen_range(0..6)];
        // Inputs X1, X2 are never targets.
        let tgt = LATTICE_VARS[rng.gen_range(2..6)];
        if src == tgt {
            continue;
        }
        let mut ops = SitedOps::new();
        for _ in 0..rng.gen_range(1..4) {
            let p = rng.gen_range(0..sites.len());
            ops.insert(p as u32 + 1, sites[p].clone());
        }
        s.insert(Interaction::new(src.into(), tgt.into(), ops))
            .expect("generated interaction is well-defined");
    }
    s
}

// ---- programs ----

const FUNCTORS: &[(&str, usize)] = &[
    ("nil", 0),
    ("z", 0),
    ("s", 1),
    ("cons", 2),
    ("pair", 2),
    ("node", 3),
];

struct ClauseGen<'a, R> {
    rng: &'a mut R,
    bound: Vec<String>,
    pending_outs: Vec<String>,
    fresh: usize,
    atoms: Vec<String>,
}

impl<R: Rng> ClauseGen<'_, R> {
    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("V{}", self.fresh)
    }

    /// An unbound output parameter or a fresh local.
    fn target(&mut self) -> String {
        if !self.pending_outs.is_empty() && self.rng.gen_bool(0.5) {
            let i = self.rng.gen_range(0..self.pending_outs.len());
            self.pending_outs.swap_remove(i)
        } else {
            self.fresh()
        }
    }

    fn pick_bound(&mut self) -> Option<String> {
        self.bound.choose(self.rng).cloned()
    }
}

/// A random well-moded, directly recursive program. Predicate `pI` only calls
/// itself and `pJ` for `J < I`.
pub fn random_program<R: Rng>(rng: &mut R) -> String {
    let k = rng.gen_range(1..=6);
    let mut sigs: Vec<Vec<Mode>> = Vec::new();
    let mut out = String::new();
    for i in 0..k {
        let n = rng.gen_range(1..=5);
        let modes: Vec<Mode> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Mode::In
                } else {
                    Mode::Out
                }
            })
            .collect();
        sigs.push(modes.clone());
        let params: Vec<String> = (1..=n).map(|j| format!("A{j}")).collect();
        let ms: Vec<&str> = modes.iter().map(|m| m.as_str()).collect();
        writeln!(out, ":- pred p{i}({}).", ms.join(", ")).unwrap();

        let n_out = modes.iter().filter(|m| **m == Mode::Out).count();
        let clauses = rng.gen_range(1..=3);
        let mut budget = 12usize;
        for c in 0..clauses {
            let share = if c + 1 == clauses {
                budget
            } else {
                budget / (clauses - c)
            };
            let free = share.saturating_sub(n_out).max(1);
            let mut g = ClauseGen {
                rng: &mut *rng,
                bound: params
                    .iter()
                    .zip(&modes)
                    .filter(|(_, m)| **m == Mode::In)
                    .map(|(p, _)| p.clone())
                    .collect(),
                pending_outs: params
                    .iter()
                    .zip(&modes)
                    .filter(|(_, m)| **m == Mode::Out)
                    .map(|(p, _)| p.clone())
                    .collect(),
                fresh: 0,
                atoms: Vec::new(),
            };
            let body_len = g.rng.gen_range(0..=free);
            for _ in 0..body_len {
                gen_atom(&mut g, i, &sigs);
            }
            for o in std::mem::take(&mut g.pending_outs) {
                match g.pick_bound() {
                    Some(v) => g.atoms.push(format!("{o} := {v}")),
                    None => g.atoms.push(format!("{o} <= nil")),
                }
                g.bound.push(o);
            }
            if g.atoms.is_empty() {
                // Body-less clauses are not part of the syntax.
                g.atoms.push("T1 <= nil".into());
            }
            budget = budget.saturating_sub(g.atoms.len());
            writeln!(
                out,
                "p{i}({}) :- {}.",
                params.join(", "),
                g.atoms.join(", ")
            )
            .unwrap();
            if budget == 0 {
                break;
            }
        }
    }
    out
}

fn gen_atom<R: Rng>(g: &mut ClauseGen<'_, R>, me: usize, sigs: &[Vec<Mode>]) {
    match g.rng.gen_range(0..5) {
        0 => {
            let Some(v) = g.pick_bound() else { return };
            let (f, n) = FUNCTORS[g.rng.gen_range(0..FUNCTORS.len())];
            let args: Vec<String> = (0..n).map(|_| g.fresh()).collect();
            g.atoms.push(if n == 0 {
                format!("{v} => {f}")
            } else {
                format!("{v} => {f}({})", args.join(", "))
            });
            g.bound.extend(args);
        }
        1 => {
            let (f, n) = FUNCTORS[g.rng.gen_range(0..FUNCTORS.len())];
            let mut args = Vec::new();
            for _ in 0..n {
                let Some(a) = g.pick_bound() else { return };
                args.push(a);
            }
            let t = g.target();
            g.atoms.push(if n == 0 {
                format!("{t} <= {f}")
            } else {
                format!("{t} <= {f}({})", args.join(", "))
            });
            g.bound.push(t);
        }
        2 => {
            let Some(s) = g.pick_bound() else { return };
            let t = g.target();
            g.atoms.push(format!("{t} := {s}"));
            g.bound.push(t);
        }
        3 => {
            let (Some(a), Some(b)) = (g.pick_bound(), g.pick_bound()) else {
                return;
            };
            g.atoms.push(format!("{a} == {b}"));
        }
        _ => {
            let callee = g.rng.gen_range(0..=me);
            let mut ins = Vec::new();
            for _ in sigs[callee].iter().filter(|m| **m == Mode::In) {
                let Some(a) = g.pick_bound() else { return };
                ins.push(a);
            }
            let mut ins = ins.into_iter();
            let mut args = Vec::new();
            let mut outs = Vec::new();
            for m in &sigs[callee] {
                match m {
                    Mode::In => args.push(ins.next().expect("one input per in-mode")),
                    Mode::Out => {
                        let t = g.target();
                        outs.push(t.clone());
                        args.push(t);
                    }
                }
            }
            g.atoms.push(format!("p{callee}({})", args.join(", ")));
            g.bound.extend(outs);
        }
    }
}

// ---- ground terms ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    List,
    Nat,
    Tree,
    Mixed,
}

pub const FAMILIES: [Family; 4] = [Family::List, Family::Nat, Family::Tree, Family::Mixed];

fn small_int<R: Rng>(rng: &mut R) -> GroundTerm {
    GroundTerm::atom(&rng.gen_range(0..3).to_string())
}

/// A list of at most four small integers.
pub fn random_list<R: Rng>(rng: &mut R) -> GroundTerm {
    let n = rng.gen_range(0..=4);
    GroundTerm::list((0..n).map(|_| small_int(rng)).collect::<Vec<_>>())
}

/// `s^k(z)` with `k <= 4`.
pub fn random_nat<R: Rng>(rng: &mut R) -> GroundTerm {
    (0..rng.gen_range(0..=4)).fold(GroundTerm::atom("z"), |t, _| GroundTerm::app("s", vec![t]))
}

/// A tree of depth at most `depth`.
pub fn random_tree<R: Rng>(rng: &mut R, depth: usize) -> GroundTerm {
    if depth <= 1 || rng.gen_bool(0.35) {
        GroundTerm::atom("leaf")
    } else {
        let l = random_tree(rng, depth - 1);
        let v = small_int(rng);
        let r = random_tree(rng, depth - 1);
        GroundTerm::app("node", vec![l, v, r])
    }
}

pub fn random_ground<R: Rng>(rng: &mut R, family: Family) -> GroundTerm {
    match family {
        Family::List => random_list(rng),
        Family::Nat => random_nat(rng),
        Family::Tree => random_tree(rng, 4),
        Family::Mixed => match rng.gen_range(0..4) {
            0 => random_list(rng),
            1 => random_nat(rng),
            2 => random_tree(rng, 4),
            _ => small_int(rng),
        },
    }
}

//! Reference interpreter: leftmost selection, depth-first search over clauses
//! in textual order, with moded unifications and a mandatory step limit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::frontend::{AtomKind, Cursor, FrontendError, Mode, Point, Program, Span, Tok, Var};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundTerm {
    pub functor: String,
    pub args: Vec<GroundTerm>,
}

impl GroundTerm {
    pub fn atom(functor: &str) -> Self {
        GroundTerm {
            functor: functor.to_owned(),
            args: Vec::new(),
        }
    }

    pub fn app(functor: &str, args: Vec<GroundTerm>) -> Self {
        GroundTerm {
            functor: functor.to_owned(),
            args,
        }
    }

    /// `cons(x1, cons(x2, ... nil))`.
    pub fn list(items: impl IntoIterator<Item = GroundTerm>) -> Self {
        let items: Vec<_> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(GroundTerm::atom("nil"), |tail, x| {
                GroundTerm::app("cons", vec![x, tail])
            })
    }

    pub fn depth(&self) -> usize {
        1 + self.args.iter().map(GroundTerm::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.functor)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A query argument: a variable or a (possibly nested) term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryTerm {
    Var(Var),
    Term(String, Vec<QueryTerm>),
}

impl QueryTerm {
    fn ground(&self) -> Option<GroundTerm> {
        match self {
            QueryTerm::Var(_) => None,
            QueryTerm::Term(f, args) => Some(GroundTerm {
                functor: f.clone(),
                args: args.iter().map(QueryTerm::ground).collect::<Option<_>>()?,
            }),
        }
    }
}

impl From<GroundTerm> for QueryTerm {
    fn from(t: GroundTerm) -> Self {
        QueryTerm::Term(t.functor, t.args.into_iter().map(QueryTerm::from).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGoal {
    pub pred: String,
    pub args: Vec<QueryTerm>,
}

/// A conjunction of calls, solved left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub goals: Vec<QueryGoal>,
}

impl Query {
    pub fn call(pred: &str, args: Vec<QueryTerm>) -> Self {
        Query {
            goals: vec![QueryGoal {
                pred: pred.to_owned(),
                args,
            }],
        }
    }
}

fn parse_query_term(cur: &mut Cursor) -> Result<QueryTerm, FrontendError> {
    match cur.peek().cloned() {
        Some(Tok::Var(v)) => {
            cur.next();
            Ok(QueryTerm::Var(Var::new(v)))
        }
        Some(Tok::Name(f)) | Some(Tok::Int(f)) => {
            cur.next();
            let mut args = Vec::new();
            if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
                loop {
                    args.push(parse_query_term(cur)?);
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                cur.expect(&Tok::RParen)?;
            }
            Ok(QueryTerm::Term(f, args))
        }
        _ => Err(cur.unexpected("a term")),
    }
}

/// Parses `?- goal, ..., goal.`; the leading `?-` and trailing `.` are
/// optional.
pub fn parse_query(src: &str) -> Result<Query, FrontendError> {
    let mut cur = Cursor::new(src)?;
    cur.eat(&Tok::QueryStart);
    let mut goals = Vec::new();
    loop {
        let (pred, _) = cur.name()?;
        let mut args = Vec::new();
        if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
            loop {
                args.push(parse_query_term(&mut cur)?);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
            cur.expect(&Tok::RParen)?;
        }
        goals.push(QueryGoal { pred, args });
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    cur.eat(&Tok::Dot);
    if !cur.at_end() {
        return Err(cur.unexpected("end of query"));
    }
    Ok(Query { goals })
}

/// Bindings of the query's named variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Answer(pub BTreeMap<String, GroundTerm>);

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, t) in &self.0 {
            writeln!(f, "{v} = {t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Selected atoms, over all branches of the search.
    pub max_steps: u64,
    /// Nodes in a single answer term once sharing is expanded.
    pub max_answer_size: usize,
}

impl Limits {
    pub fn steps(max_steps: u64) -> Self {
        Limits {
            max_steps,
            ..Limits::default()
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 1_000_000,
            max_answer_size: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{pred}` has arity {expected}, called with {found} arguments")]
    Arity {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("mode violation at {location}: {message}")]
    ModeViolation { location: String, message: String },
    #[error("step limit exceeded after {} answer(s)", partial.len())]
    StepLimit { partial: Vec<Answer> },
    #[error("answer for `{var}` exceeds {limit} term nodes")]
    AnswerTooLarge { var: String, limit: usize },
}

// Internal value representation. Values are hash-consed, so two values are
// equal exactly when they are the same allocation.
#[derive(Debug)]
struct Node {
    functor: Rc<str>,
    args: Vec<Value>,
}

type Value = Rc<Node>;

// Deep terms would otherwise be freed recursively.
impl Drop for Node {
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.args);
        while let Some(v) = stack.pop() {
            if let Ok(mut node) = Rc::try_unwrap(v) {
                stack.append(&mut node.args);
            }
        }
    }
}

#[derive(Default)]
struct Interner {
    table: HashMap<(Rc<str>, Vec<*const Node>), Value>,
}

impl Interner {
    fn node(&mut self, functor: Rc<str>, args: Vec<Value>) -> Value {
        let key = (functor.clone(), args.iter().map(Rc::as_ptr).collect());
        // The table keeps every node alive, so addresses are never reused.
        self.table
            .entry(key)
            .or_insert_with(|| Rc::new(Node { functor, args }))
            .clone()
    }

    fn value(&mut self, t: &GroundTerm) -> Value {
        let args = t.args.iter().map(|a| self.value(a)).collect();
        self.node(t.functor.as_str().into(), args)
    }
}

/// Tree size of `v`, saturating at `limit + 1`.
fn expanded_size(v: &Value, limit: usize, memo: &mut HashMap<*const Node, usize>) -> usize {
    if let Some(&n) = memo.get(&Rc::as_ptr(v)) {
        return n;
    }
    let mut n = 1usize;
    for a in &v.args {
        n = n
            .saturating_add(expanded_size(a, limit, memo))
            .min(limit + 1);
    }
    memo.insert(Rc::as_ptr(v), n);
    n
}

fn to_ground(v: &Value) -> GroundTerm {
    GroundTerm {
        functor: v.functor.to_string(),
        args: v.args.iter().map(to_ground).collect(),
    }
}

type Slot = usize;

#[derive(Debug)]
enum Op {
    Deconstruct {
        var: Slot,
        functor: Rc<str>,
        args: Vec<Slot>,
    },
    Construct {
        var: Slot,
        functor: Rc<str>,
        args: Vec<Slot>,
    },
    Test(Slot, Slot),
    Assign {
        target: Slot,
        source: Slot,
    },
    Call {
        pred: usize,
        args: Vec<Slot>,
    },
}

#[derive(Debug)]
struct Instr {
    op: Op,
    point: Point,
    span: Span,
}

#[derive(Debug)]
struct CClause {
    slots: usize,
    params: Vec<Slot>,
    body: Vec<Instr>,
}

#[derive(Debug)]
struct CPred {
    name: String,
    modes: Vec<Mode>,
    clauses: Vec<CClause>,
}

fn compile(program: &Program) -> Vec<CPred> {
    let index: HashMap<&str, usize> = program
        .predicates
        .keys()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    program
        .predicates
        .values()
        .map(|pred| {
            let clauses = pred
                .clauses
                .iter()
                .map(|clause| {
                    let mut slots: HashMap<&Var, Slot> = HashMap::new();
                    let mut slot = |v| {
                        let n = slots.len();
                        *slots.entry(v).or_insert(n)
                    };
                    let params = pred.params.iter().map(&mut slot).collect();
                    let body = clause
                        .body
                        .iter()
                        .map(|atom| {
                            let op = match &atom.kind {
                                AtomKind::Deconstruct { var, functor, args } => Op::Deconstruct {
                                    var: slot(var),
                                    functor: functor.as_str().into(),
                                    args: args.iter().map(&mut slot).collect(),
                                },
                                AtomKind::Construct { var, functor, args } => Op::Construct {
                                    var: slot(var),
                                    functor: functor.as_str().into(),
                                    args: args.iter().map(&mut slot).collect(),
                                },
                                AtomKind::Test(v, w) => Op::Test(slot(v), slot(w)),
                                AtomKind::Assign { target, source } => Op::Assign {
                                    target: slot(target),
                                    source: slot(source),
                                },
                                AtomKind::Call { pred, args } => Op::Call {
                                    pred: index[pred.as_str()],
                                    args: args.iter().map(&mut slot).collect(),
                                },
                            };
                            Instr {
                                op,
                                point: atom.point,
                                span: atom.span,
                            }
                        })
                        .collect();
                    CClause {
                        slots: slots.len(),
                        params,
                        body,
                    }
                })
                .collect();
            CPred {
                name: pred.name.clone(),
                modes: pred.modes.clone(),
                clauses,
            }
        })
        .collect()
}

enum Goal<'a> {
    Run {
        frame: usize,
        instr: &'a Instr,
    },
    /// Copies a finished clause's output arguments back to the caller.
    Exit {
        pred: usize,
        callee: usize,
        caller: usize,
        outs: Vec<(Slot, Slot)>,
    },
}

struct Cell<'a> {
    goal: Goal<'a>,
    next: Option<Rc<Cell<'a>>>,
}

type Goals<'a> = Option<Rc<Cell<'a>>>;

impl Drop for Cell<'_> {
    fn drop(&mut self) {
        let mut next = self.next.take();
        while let Some(cell) = next {
            match Rc::try_unwrap(cell) {
                Ok(mut c) => next = c.next.take(),
                Err(_) => break,
            }
        }
    }
}

fn push<'a>(goal: Goal<'a>, next: Goals<'a>) -> Goals<'a> {
    Some(Rc::new(Cell { goal, next }))
}

struct Choice<'a> {
    pred: usize,
    next_clause: usize,
    caller: usize,
    args: &'a [Slot],
    rest: Goals<'a>,
    trail_len: usize,
    frames_len: usize,
}

struct Machine<'a> {
    preds: &'a [CPred],
    frames: Vec<Vec<Option<Value>>>,
    trail: Vec<(usize, Slot)>,
    choices: Vec<Choice<'a>>,
    steps: u64,
    limits: Limits,
    terms: Interner,
}

enum Step<'a> {
    Continue(Goals<'a>),
    Fail,
}

impl<'a> Machine<'a> {
    fn get(&self, frame: usize, s: Slot) -> Option<&Value> {
        self.frames[frame][s].as_ref()
    }

    fn bind(&mut self, frame: usize, s: Slot, v: Value) {
        self.frames[frame][s] = Some(v);
        self.trail.push((frame, s));
    }

    fn violation(instr: &Instr, message: String) -> InterpError {
        InterpError::ModeViolation {
            location: format!("point {} ({})", instr.point, instr.span),
            message,
        }
    }

    fn input(&self, frame: usize, s: Slot, instr: &Instr) -> Result<Value, InterpError> {
        self.get(frame, s)
            .cloned()
            .ok_or_else(|| Self::violation(instr, "input argument is not ground".into()))
    }

    fn check_free(&self, frame: usize, slots: &[Slot], instr: &Instr) -> Result<(), InterpError> {
        for (i, s) in slots.iter().enumerate() {
            if self.get(frame, *s).is_some() || slots[..i].contains(s) {
                return Err(Self::violation(
                    instr,
                    "output argument is not a free variable".into(),
                ));
            }
        }
        Ok(())
    }

    /// Enters clause `k` of `pred`, pushing a choice point for the rest.
    fn enter(
        &mut self,
        pred: usize,
        k: usize,
        caller: usize,
        args: &'a [Slot],
        rest: Goals<'a>,
    ) -> Goals<'a> {
        let cp = &self.preds[pred];
        if k + 1 < cp.clauses.len() {
            self.choices.push(Choice {
                pred,
                next_clause: k + 1,
                caller,
                args,
                rest: rest.clone(),
                trail_len: self.trail.len(),
                frames_len: self.frames.len(),
            });
        }
        let clause = &cp.clauses[k];
        let callee = self.frames.len();
        let mut frame = vec![None; clause.slots];
        let mut outs = Vec::new();
        for ((&formal, &actual), mode) in clause.params.iter().zip(args).zip(&cp.modes) {
            match mode {
                Mode::In => frame[formal] = self.frames[caller][actual].clone(),
                Mode::Out => outs.push((formal, actual)),
            }
        }
        self.frames.push(frame);
        let mut goals = push(
            Goal::Exit {
                pred,
                callee,
                caller,
                outs,
            },
            rest,
        );
        for instr in clause.body.iter().rev() {
            goals = push(
                Goal::Run {
                    frame: callee,
                    instr,
                },
                goals,
            );
        }
        goals
    }

    fn step(&mut self, goal: &Goal<'a>, rest: Goals<'a>) -> Result<Step<'a>, InterpError> {
        let (frame, instr) = match goal {
            Goal::Exit {
                pred,
                callee,
                caller,
                outs,
            } => {
                for &(formal, actual) in outs {
                    let v = self.get(*callee, formal).cloned().ok_or_else(|| {
                        InterpError::ModeViolation {
                            location: format!("exit of `{}`", self.preds[*pred].name),
                            message: "output argument left unbound".into(),
                        }
                    })?;
                    self.bind(*caller, actual, v);
                }
                return Ok(Step::Continue(rest));
            }
            Goal::Run { frame, instr } => (*frame, *instr),
        };
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(InterpError::StepLimit {
                partial: Vec::new(),
            });
        }
        match &instr.op {
            Op::Deconstruct { var, functor, args } => {
                let v = self.input(frame, *var, instr)?;
                self.check_free(frame, args, instr)?;
                if v.functor != *functor || v.args.len() != args.len() {
                    return Ok(Step::Fail);
                }
                for (s, sub) in args.iter().zip(&v.args) {
                    self.bind(frame, *s, sub.clone());
                }
            }
            Op::Construct { var, functor, args } => {
                let vals = args
                    .iter()
                    .map(|s| self.input(frame, *s, instr))
                    .collect::<Result<Vec<_>, _>>()?;
                self.check_free(frame, &[*var], instr)?;
                let node = self.terms.node(functor.clone(), vals);
                self.bind(frame, *var, node);
            }
            Op::Test(a, b) => {
                let (x, y) = (self.input(frame, *a, instr)?, self.input(frame, *b, instr)?);
                if !Rc::ptr_eq(&x, &y) {
                    return Ok(Step::Fail);
                }
            }
            Op::Assign { target, source } => {
                let v = self.input(frame, *source, instr)?;
                self.check_free(frame, &[*target], instr)?;
                self.bind(frame, *target, v);
            }
            Op::Call { pred, args } => {
                let cp = &self.preds[*pred];
                let (mut ins, mut outs) = (Vec::new(), Vec::new());
                for (s, m) in args.iter().zip(&cp.modes) {
                    match m {
                        Mode::In => ins.push(*s),
                        Mode::Out => outs.push(*s),
                    }
                }
                for s in ins {
                    self.input(frame, s, instr)?;
                }
                self.check_free(frame, &outs, instr)?;
                if cp.clauses.is_empty() {
                    return Ok(Step::Fail);
                }
                return Ok(Step::Continue(self.enter(*pred, 0, frame, args, rest)));
            }
        }
        Ok(Step::Continue(rest))
    }

    /// Undoes bindings back to the newest choice point and resumes there.
    fn backtrack(&mut self) -> Option<Goals<'a>> {
        let c = self.choices.pop()?;
        while self.trail.len() > c.trail_len {
            let (f, s) = self.trail.pop().expect("trail entry");
            if f < self.frames.len() {
                self.frames[f][s] = None;
            }
        }
        self.frames.truncate(c.frames_len);
        Some(self.enter(c.pred, c.next_clause, c.caller, c.args, c.rest))
    }
}

/// All answers of `query`, in depth-first search order.
pub fn solve(program: &Program, query: &Query, limits: Limits) -> Result<Vec<Answer>, InterpError> {
    let preds = compile(program);
    let index: HashMap<&str, usize> = preds
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.as_str(), i))
        .collect();

    // Frame 0 holds the query variables, followed by hidden slots for ground
    // input terms.
    let mut names: Vec<(Var, Slot)> = Vec::new();
    let mut frame0: Vec<Option<Value>> = Vec::new();
    let mut terms = Interner::default();
    let mut calls = Vec::new();
    for goal in &query.goals {
        let &pred = index
            .get(goal.pred.as_str())
            .ok_or_else(|| InterpError::UnknownPredicate(goal.pred.clone()))?;
        if preds[pred].modes.len() != goal.args.len() {
            return Err(InterpError::Arity {
                pred: goal.pred.clone(),
                expected: preds[pred].modes.len(),
                found: goal.args.len(),
            });
        }
        let mut slots = Vec::new();
        for arg in &goal.args {
            match arg {
                QueryTerm::Var(v) => {
                    let s = match names.iter().find(|(n, _)| n == v) {
                        Some(&(_, s)) => s,
                        None => {
                            frame0.push(None);
                            names.push((v.clone(), frame0.len() - 1));
                            frame0.len() - 1
                        }
                    };
                    slots.push(s);
                }
                t => {
                    let g = t.ground().ok_or_else(|| InterpError::ModeViolation {
                        location: format!("query goal `{}`", goal.pred),
                        message: "argument term contains a variable".into(),
                    })?;
                    frame0.push(Some(terms.value(&g)));
                    slots.push(frame0.len() - 1);
                }
            }
        }
        calls.push((pred, slots));
    }
    let mut named: Vec<(String, Slot)> =
        names.into_iter().map(|(v, s)| (v.to_string(), s)).collect();
    named.sort();

    let instrs: Vec<Instr> = calls
        .into_iter()
        .map(|(pred, args)| Instr {
            op: Op::Call { pred, args },
            point: 0,
            span: Span::default(),
        })
        .collect();

    let mut m = Machine {
        preds: &preds,
        frames: vec![frame0],
        trail: Vec::new(),
        choices: Vec::new(),
        steps: 0,
        limits,
        terms,
    };
    let mut goals: Goals = None;
    for instr in instrs.iter().rev() {
        goals = push(Goal::Run { frame: 0, instr }, goals);
    }

    let mut answers = Vec::new();
    let mut current = Some(goals);
    while let Some(goals) = current.take() {
        match goals {
            None => {
                let mut a = BTreeMap::new();
                for (name, s) in &named {
                    if let Some(v) = m.get(0, *s) {
                        let limit = limits.max_answer_size;
                        if expanded_size(v, limit, &mut HashMap::new()) > limit {
                            return Err(InterpError::AnswerTooLarge {
                                var: name.clone(),
                                limit,
                            });
                        }
                        a.insert(name.clone(), to_ground(v));
                    }
                }
                answers.push(Answer(a));
                current = m.backtrack();
            }
            Some(cell) => match m.step(&cell.goal, cell.next.clone()) {
                Ok(Step::Continue(next)) => current = Some(next),
                Ok(Step::Fail) => current = m.backtrack(),
                Err(InterpError::StepLimit { .. }) => {
                    return Err(InterpError::StepLimit { partial: answers })
                }
                Err(e) => return Err(e),
            },
        }
    }
    Ok(answers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    fn fixture() -> Program {
        parse_program(include_str!("../tests/fixtures/app_concat_dapp.mpl")).unwrap()
    }

    fn int(i: u32) -> GroundTerm {
        GroundTerm::atom(&i.to_string())
    }

    fn run(p: &Program, q: &str) -> Result<Vec<Answer>, InterpError> {
        solve(p, &parse_query(q).unwrap(), Limits::default())
    }

    #[test]
    fn app_two_lists() {
        let a = run(&fixture(), "?- app(cons(1,nil), cons(2,nil), Z).").unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].0["Z"], GroundTerm::list([int(1), int(2)]));
        assert_eq!(a[0].to_string(), "Z = cons(1, cons(2, nil))\n");
    }

    #[test]
    fn app_empty() {
        let a = run(&fixture(), "?- app(nil, nil, Z).").unwrap();
        assert_eq!(
            a,
            vec![Answer(BTreeMap::from([(
                "Z".into(),
                GroundTerm::atom("nil")
            )]))]
        );
    }

    #[test]
    fn concat_reversed_roles() {
        let a = run(&fixture(), "?- concat(A, cons(1,nil), cons(2,nil)).").unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].0["A"], GroundTerm::list([int(1), int(2)]));
    }

    #[test]
    fn dapp_three_lists() {
        let a = run(
            &fixture(),
            "?- dapp(cons(1,nil), cons(2,nil), cons(3,nil), R).",
        )
        .unwrap();
        assert_eq!(a[0].0["R"], GroundTerm::list([int(1), int(2), int(3)]));
    }

    #[test]
    fn conjunction_threads_bindings() {
        let a = run(&fixture(), "?- app(cons(1,nil), nil, L), app(L, L, M).").unwrap();
        assert_eq!(a[0].0["M"], GroundTerm::list([int(1), int(1)]));
    }

    #[test]
    fn backtracking_collects_all_answers() {
        let p = parse_program(
            ":- pred pick(out). pick(X) :- X <= a. pick(X) :- X <= b. pick(X) :- X <= c.
             :- pred two(out,out). two(X,Y) :- pick(X), pick(Y), X == Y.",
        )
        .unwrap();
        let a = run(&p, "two(X, Y)").unwrap();
        let xs: Vec<_> = a.iter().map(|a| a.0["X"].functor.clone()).collect();
        assert_eq!(xs, vec!["a", "b", "c"]);
    }

    #[test]
    fn deconstruct_mismatch_fails() {
        let a = run(&fixture(), "?- app(foo, nil, Z).").unwrap();
        assert!(a.is_empty());
    }

    #[test]
    fn step_limit() {
        let e = solve(
            &fixture(),
            &parse_query("?- app(nil, nil, Z).").unwrap(),
            Limits::steps(0),
        )
        .unwrap_err();
        assert_eq!(e, InterpError::StepLimit { partial: vec![] });
        assert_eq!(e.to_string(), "step limit exceeded after 0 answer(s)");
    }

    #[test]
    fn shared_terms_compare_and_expand() {
        // Each round doubles the tree size of the term while its DAG grows by
        // one node.
        let p = parse_program(
            ":- pred grow(in, in, out).
             grow(N, T, R) :- N => z, R := T.
             grow(N, T, R) :- N => s(M), U <= f(T, T), grow(M, U, R).
             :- pred same(in, in, in). same(N, A, B) :- grow(N, A, X), grow(N, B, Y), X == Y.",
        )
        .unwrap();
        let nat =
            |k: usize| (0..k).fold(GroundTerm::atom("z"), |t, _| GroundTerm::app("s", vec![t]));
        let q = |goal: &str, k: usize| {
            Query::call(
                goal,
                vec![
                    nat(k).into(),
                    GroundTerm::atom("a").into(),
                    QueryTerm::Var("R".into()),
                ],
            )
        };
        let a = solve(&p, &q("grow", 3), Limits::default()).unwrap();
        assert_eq!(
            a[0].0["R"].to_string(),
            "f(f(f(a, a), f(a, a)), f(f(a, a), f(a, a)))"
        );
        let e = solve(&p, &q("grow", 40), Limits::default()).unwrap_err();
        assert_eq!(
            e,
            InterpError::AnswerTooLarge {
                var: "R".into(),
                limit: 1_000_000
            }
        );
        let same = Query::call(
            "same",
            vec![
                nat(60).into(),
                GroundTerm::atom("a").into(),
                GroundTerm::atom("a").into(),
            ],
        );
        assert_eq!(solve(&p, &same, Limits::default()).unwrap().len(), 1);
    }

    #[test]
    fn runtime_mode_violations() {
        let e = run(&fixture(), "?- app(X, nil, Z).").unwrap_err();
        assert!(matches!(e, InterpError::ModeViolation { .. }), "{e}");
        let e = run(&fixture(), "?- app(nil, nil, Z), app(nil, nil, Z).").unwrap_err();
        assert!(matches!(e, InterpError::ModeViolation { .. }), "{e}");
    }

    #[test]
    fn query_errors() {
        assert_eq!(
            run(&fixture(), "nope(X)").unwrap_err(),
            InterpError::UnknownPredicate("nope".into())
        );
        assert!(matches!(
            run(&fixture(), "app(X)").unwrap_err(),
            InterpError::Arity { .. }
        ));
    }

    #[test]
    fn ground_term_display() {
        assert_eq!(GroundTerm::list([int(1)]).to_string(), "cons(1, nil)");
        assert_eq!(GroundTerm::list([int(1), int(2)]).depth(), 3);
    }
}

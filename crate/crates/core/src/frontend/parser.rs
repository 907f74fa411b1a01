use std::collections::{BTreeMap, HashMap, HashSet};

use indexmap::IndexMap;

use super::ast::{Atom, AtomKind, Clause, Mode, Predicate, Program, Span, Var};
use super::callgraph::build_call_graph;
use super::error::{FrontendError, FrontendErrorKind};
use super::lexer::{tokenize, Tok, Token};

/// Token cursor shared by the program parser and the query parser.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    end: Span,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Self, FrontendError> {
        let toks = tokenize(src)?;
        let lines = src.split('\n').count() as u32;
        let last_len = src.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32;
        Ok(Cursor {
            toks,
            pos: 0,
            end: Span::new(lines.max(1), last_len + 1),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub(crate) fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub(crate) fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> FrontendError {
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_owned(), Tok::describe);
        FrontendError::syntax(format!("expected {expected}, found {found}"), self.span())
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<Span, FrontendError> {
        let span = self.span();
        if self.eat(tok) {
            Ok(span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn name(&mut self) -> Result<(String, Span), FrontendError> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok((n, span))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn functor_name(&mut self) -> Result<(String, Span), FrontendError> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Name(n)) | Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok((n, span))
            }
            _ => Err(self.unexpected("a functor")),
        }
    }

    fn var(&mut self) -> Result<Var, FrontendError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = Var::new(v.clone());
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Name(_)) | Some(Tok::Int(_))
                if matches!(self.peek_at(1), Some(Tok::LParen)) =>
            {
                Err(FrontendError::syntax(
                    "nested term in argument position; programs must be in flat form",
                    self.span(),
                ))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    /// Parses `( V1, ..., Vn )` if present; an absent or empty list yields no variables.
    fn var_args(&mut self) -> Result<Vec<Var>, FrontendError> {
        let mut out = Vec::new();
        if !self.eat(&Tok::LParen) {
            return Ok(out);
        }
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.var()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(&Tok::RParen)?;
            return Ok(out);
        }
    }
}

struct RawDecl {
    name: String,
    modes: Vec<Mode>,
    span: Span,
}

struct RawClause {
    name: String,
    head: Vec<Var>,
    span: Span,
    body: Vec<(AtomKind, Span)>,
}

fn parse_decl(cur: &mut Cursor) -> Result<RawDecl, FrontendError> {
    let (kw, kw_span) = cur.name()?;
    if kw != "pred" {
        return Err(FrontendError::syntax(
            format!("unknown directive `{kw}`; expected `pred`"),
            kw_span,
        ));
    }
    let (name, span) = cur.name()?;
    let mut modes = Vec::new();
    if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
        loop {
            let (m, mspan) = cur.name()?;
            modes.push(match m.as_str() {
                "in" => Mode::In,
                "out" => Mode::Out,
                _ => {
                    return Err(FrontendError::syntax(
                        format!("unknown mode `{m}`; expected `in` or `out`"),
                        mspan,
                    ))
                }
            });
            if cur.eat(&Tok::Comma) {
                continue;
            }
            cur.expect(&Tok::RParen)?;
            break;
        }
    }
    cur.expect(&Tok::Dot)?;
    Ok(RawDecl { name, modes, span })
}

fn parse_atom(cur: &mut Cursor) -> Result<(AtomKind, Span), FrontendError> {
    let span = cur.span();
    match cur.peek() {
        Some(Tok::Var(_)) => {
            let lhs = cur.var()?;
            let op = cur.next().map(|t| t.tok);
            let kind = match op {
                Some(Tok::Deconstruct) => {
                    let (functor, _) = cur.functor_name()?;
                    let args = cur.var_args()?;
                    AtomKind::Deconstruct {
                        var: lhs,
                        functor,
                        args,
                    }
                }
                Some(Tok::Construct) => {
                    let (functor, _) = cur.functor_name()?;
                    let args = cur.var_args()?;
                    AtomKind::Construct {
                        var: lhs,
                        functor,
                        args,
                    }
                }
                Some(Tok::Assign) => AtomKind::Assign {
                    target: lhs,
                    source: cur.var()?,
                },
                Some(Tok::Test) => AtomKind::Test(lhs, cur.var()?),
                _ => {
                    cur.pos -= 1;
                    return Err(cur.unexpected("`=>`, `<=`, `:=` or `==`"));
                }
            };
            Ok((kind, span))
        }
        Some(Tok::Name(_)) => {
            let (pred, _) = cur.name()?;
            let args = cur.var_args()?;
            Ok((AtomKind::Call { pred, args }, span))
        }
        _ => Err(cur.unexpected("an atom")),
    }
}

fn parse_clause(cur: &mut Cursor) -> Result<RawClause, FrontendError> {
    let (name, span) = cur.name()?;
    let head = if matches!(cur.peek(), Some(Tok::LParen)) {
        cur.var_args().map_err(|e| match e.kind {
            FrontendErrorKind::Syntax(_) => {
                FrontendError::syntax("clause head arguments must be variables", e.span)
            }
            _ => e,
        })?
    } else {
        Vec::new()
    };
    let mut body = Vec::new();
    if cur.eat(&Tok::Neck) {
        loop {
            body.push(parse_atom(cur)?);
            if cur.eat(&Tok::Comma) {
                continue;
            }
            break;
        }
    }
    cur.expect(&Tok::Dot)?;
    Ok(RawClause {
        name,
        head,
        span,
        body,
    })
}

/// Parses a complete program in the flat surface syntax, assigns program
/// points in textual order and builds the call graph.
pub fn parse_program(source: &str) -> Result<Program, FrontendError> {
    let mut cur = Cursor::new(source)?;
    let mut decls = Vec::new();
    let mut clauses = Vec::new();
    while !cur.at_end() {
        match cur.peek() {
            Some(Tok::Neck) => {
                cur.next();
                decls.push(parse_decl(&mut cur)?);
            }
            Some(Tok::Name(_)) => clauses.push(parse_clause(&mut cur)?),
            Some(Tok::QueryStart) => {
                return Err(FrontendError::syntax(
                    "queries are not allowed in program files",
                    cur.span(),
                ))
            }
            _ => return Err(cur.unexpected("a clause or `:- pred` declaration")),
        }
    }
    resolve(decls, clauses)
}

fn resolve(decls: Vec<RawDecl>, clauses: Vec<RawClause>) -> Result<Program, FrontendError> {
    let mut declared: HashMap<String, RawDecl> = HashMap::new();
    for d in decls {
        if declared.contains_key(&d.name) {
            return Err(FrontendError::new(
                FrontendErrorKind::DuplicatePredicate(d.name.clone()),
                d.span,
            ));
        }
        declared.insert(d.name.clone(), d);
    }

    // Each predicate's clauses must form one contiguous group.
    let mut groups: IndexMap<String, Vec<RawClause>> = IndexMap::new();
    let mut closed: HashSet<String> = HashSet::new();
    let mut current: Option<String> = None;
    for c in clauses {
        if current.as_deref() != Some(c.name.as_str()) {
            if let Some(prev) = current.take() {
                closed.insert(prev);
            }
            if closed.contains(&c.name) {
                return Err(FrontendError::new(
                    FrontendErrorKind::DuplicatePredicate(c.name.clone()),
                    c.span,
                ));
            }
            current = Some(c.name.clone());
        }
        groups.entry(c.name.clone()).or_default().push(c);
    }

    // Predicates are ordered by their first clause; clause-less ones follow by
    // declaration position.
    let mut order: Vec<(Span, String)> = groups
        .iter()
        .map(|(n, cs)| (cs[0].span, n.clone()))
        .collect();
    let mut clauseless: Vec<(Span, String)> = declared
        .values()
        .filter(|d| !groups.contains_key(&d.name))
        .map(|d| (d.span, d.name.clone()))
        .collect();
    clauseless.sort();
    order.extend(clauseless);

    let mut functors: BTreeMap<String, usize> = BTreeMap::new();
    let mut predicates = IndexMap::new();
    for (_, name) in order {
        let Some(decl) = declared.get(&name) else {
            let span = groups[&name][0].span;
            return Err(FrontendError::new(
                FrontendErrorKind::MissingModes(name),
                span,
            ));
        };
        let raw = groups.swap_remove(&name).unwrap_or_default();
        let params = match raw.first() {
            Some(first) => first.head.clone(),
            None => (1..=decl.modes.len())
                .map(|i| Var::new(format!("A{i}")))
                .collect(),
        };
        let mut pred_clauses = Vec::new();
        for c in raw {
            if c.head.len() != decl.modes.len() {
                return Err(FrontendError::new(
                    FrontendErrorKind::PredicateArity {
                        name: name.clone(),
                        expected: decl.modes.len(),
                        found: c.head.len(),
                    },
                    c.span,
                ));
            }
            let mut seen = HashSet::new();
            for v in &c.head {
                if !seen.insert(v) {
                    return Err(FrontendError::new(
                        FrontendErrorKind::RepeatedHeadVar {
                            pred: name.clone(),
                            var: v.to_string(),
                        },
                        c.span,
                    ));
                }
            }
            if c.head != params {
                return Err(FrontendError::new(
                    FrontendErrorKind::HeadMismatch(name.clone()),
                    c.span,
                ));
            }
            let mut body = Vec::new();
            for (kind, span) in c.body {
                if let AtomKind::Deconstruct { functor, args, .. }
                | AtomKind::Construct { functor, args, .. } = &kind
                {
                    match functors.get(functor) {
                        Some(&n) if n != args.len() => {
                            return Err(FrontendError::new(
                                FrontendErrorKind::FunctorArity {
                                    name: functor.clone(),
                                    expected: n,
                                    found: args.len(),
                                },
                                span,
                            ))
                        }
                        _ => {
                            functors.insert(functor.clone(), args.len());
                        }
                    }
                }
                body.push(Atom {
                    point: 0,
                    kind,
                    span,
                });
            }
            pred_clauses.push(Clause { body, span: c.span });
        }
        predicates.insert(
            name.clone(),
            Predicate {
                name,
                params,
                modes: decl.modes.clone(),
                clauses: pred_clauses,
                span: decl.span,
            },
        );
    }

    for pred in predicates.values() {
        for atom in pred.atoms() {
            if let AtomKind::Call { pred: callee, args } = &atom.kind {
                match predicates.get(callee) {
                    None => {
                        return Err(FrontendError::new(
                            FrontendErrorKind::UndefinedPredicate(callee.clone()),
                            atom.span,
                        ))
                    }
                    Some(q) if q.arity() != args.len() => {
                        return Err(FrontendError::new(
                            FrontendErrorKind::PredicateArity {
                                name: callee.clone(),
                                expected: q.arity(),
                                found: args.len(),
                            },
                            atom.span,
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let mut program = Program {
        predicates,
        call_graph: Default::default(),
    };
    program.renumber();
    program.call_graph = build_call_graph(&program)?;
    Ok(program)
}

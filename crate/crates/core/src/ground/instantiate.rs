use std::collections::{BTreeMap, HashMap, HashSet};

use crate::lang::{
    BinOp, BodyElem, Choice, ChoiceElem, EzAtom, EzProgram, EzRule, Head, Literal, Naf, Pos,
    SumAggregate, SumElem, Term, UnOp, REQUIRED,
};

use super::GroundError;

type Key = (String, usize);
type Subst = BTreeMap<String, Term>;

/// Ground extension of the domain predicates.
#[derive(Default, Debug, Clone)]
pub struct Extension {
    facts: HashMap<Key, Vec<Vec<Term>>>,
    seen: HashSet<EzAtom>,
}

impl Extension {
    fn insert(&mut self, a: EzAtom) -> bool {
        if self.seen.contains(&a) {
            return false;
        }
        self.facts.entry(a.key()).or_default().push(a.args.clone());
        self.seen.insert(a);
        true
    }

    fn tuples(&self, key: &Key) -> &[Vec<Term>] {
        self.facts.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Predicates defined only by normal rules whose bodies use nothing but
/// positive domain atoms and built-ins.
pub fn domain_predicates(p: &EzProgram) -> HashSet<Key> {
    let mut defined: HashSet<Key> = HashSet::new();
    let mut bad: HashSet<Key> = HashSet::new();
    for r in &p.rules {
        match &r.head {
            Head::Atom(a) => {
                defined.insert(a.key());
                let impure = r.body.iter().any(|b| match b {
                    BodyElem::Lit(l) => l.naf != Naf::Pos,
                    BodyElem::Sum(_) => true,
                    BodyElem::Builtin(_) => false,
                });
                if impure {
                    bad.insert(a.key());
                }
            }
            Head::Choice(c) => {
                for e in &c.elems {
                    defined.insert(e.atom.key());
                    bad.insert(e.atom.key());
                }
            }
            Head::None => {}
        }
    }
    loop {
        let mut changed = false;
        for r in &p.rules {
            if let Head::Atom(a) = &r.head {
                if bad.contains(&a.key()) {
                    continue;
                }
                if r.positive().any(|b| bad.contains(&b.key())) {
                    bad.insert(a.key());
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // predicates never defined have an empty extension and count as domain
    let mut out: HashSet<Key> = defined.difference(&bad).cloned().collect();
    for r in &p.rules {
        for b in &r.body {
            if let BodyElem::Lit(l) = b {
                if !defined.contains(&l.atom.key()) {
                    out.insert(l.atom.key());
                }
            }
        }
    }
    out
}

fn substitute(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Int(_) | Term::Sym(_) | Term::Op(_) => t.clone(),
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| substitute(a, s)).collect())
        }
        Term::Global(f, args) => {
            Term::Global(f.clone(), args.iter().map(|a| substitute(a, s)).collect())
        }
        Term::List(items) => Term::List(items.iter().map(|a| substitute(a, s)).collect()),
        Term::Intensional {
            name,
            prefix,
            arity,
        } => Term::Intensional {
            name: name.clone(),
            prefix: prefix.iter().map(|a| substitute(a, s)).collect(),
            arity: *arity,
        },
        Term::Binary(op, a, b) => Term::binary(*op, substitute(a, s), substitute(b, s)),
        Term::Unary(op, a) => Term::Unary(*op, Box::new(substitute(a, s))),
        Term::Range(a, b) => Term::Range(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
    }
}

/// Evaluate integer arithmetic inside a ground term.
pub fn eval(t: &Term, pos: Pos) -> Result<Term, GroundError> {
    let arith = |msg: String| GroundError::Arithmetic { pos, msg };
    Ok(match t {
        Term::Binary(op, a, b) if op.is_arithmetic() => {
            let (x, y) = (eval(a, pos)?, eval(b, pos)?);
            let (Some(x), Some(y)) = (x.as_int(), y.as_int()) else {
                return Err(arith(format!("arithmetic on non-integer term `{t}`")));
            };
            let r = match op {
                BinOp::Add => x.checked_add(y),
                BinOp::Sub => x.checked_sub(y),
                BinOp::Mul => x.checked_mul(y),
                BinOp::Div if y == 0 => return Err(arith(format!("division by zero in `{t}`"))),
                _ => x.checked_div(y),
            };
            Term::Int(r.ok_or_else(|| arith(format!("overflow in `{t}`")))?)
        }
        Term::Binary(op, a, b) => Term::binary(*op, eval(a, pos)?, eval(b, pos)?),
        Term::Unary(UnOp::Minus, a) => match eval(a, pos)? {
            Term::Int(n) => Term::Int(
                n.checked_neg()
                    .ok_or_else(|| arith(format!("overflow in `{t}`")))?,
            ),
            other => return Err(arith(format!("arithmetic on non-integer term `{other}`"))),
        },
        Term::Unary(op, a) => Term::Unary(*op, Box::new(eval(a, pos)?)),
        Term::Compound(f, args) => Term::Compound(f.clone(), eval_all(args, pos)?),
        Term::Global(f, args) => Term::Global(f.clone(), eval_all(args, pos)?),
        Term::List(items) => Term::List(eval_all(items, pos)?),
        Term::Intensional {
            name,
            prefix,
            arity,
        } => Term::Intensional {
            name: name.clone(),
            prefix: eval_all(prefix, pos)?,
            arity: *arity,
        },
        Term::Range(a, b) => Term::Range(Box::new(eval(a, pos)?), Box::new(eval(b, pos)?)),
        Term::Int(_) | Term::Sym(_) | Term::Var(_) | Term::Op(_) => t.clone(),
    })
}

fn eval_all(ts: &[Term], pos: Pos) -> Result<Vec<Term>, GroundError> {
    ts.iter().map(|a| eval(a, pos)).collect()
}

fn has_arith(t: &Term) -> bool {
    let mut found = false;
    t.visit(&mut |s| {
        if matches!(s, Term::Binary(..) | Term::Unary(..) | Term::Range(..)) {
            found = true;
        }
    });
    found
}

/// Match `pat` against ground `g`, extending `s`.
fn unify(pat: &Term, g: &Term, s: &mut Subst, pos: Pos) -> Result<bool, GroundError> {
    match pat {
        Term::Var(v) => match s.get(v) {
            Some(b) => Ok(b == g),
            None => {
                s.insert(v.clone(), g.clone());
                Ok(true)
            }
        },
        Term::Compound(f, args) => match g {
            Term::Compound(h, gargs) if f == h && args.len() == gargs.len() => {
                for (a, b) in args.iter().zip(gargs) {
                    if !unify(a, b, s, pos)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        },
        _ if has_arith(pat) => Ok(eval(&substitute(pat, s), pos)? == *g),
        _ => Ok(pat == g),
    }
}

fn vars_of(t: &Term) -> Vec<String> {
    let mut v = Vec::new();
    t.variables(&mut v);
    v
}

fn atom_vars(a: &EzAtom) -> Vec<String> {
    let mut v = Vec::new();
    a.variables(&mut v);
    v
}

/// Variables whose values must be known before `t` can be matched: those
/// under arithmetic.
fn arith_vars(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Compound(_, args) => args.iter().for_each(|a| arith_vars(a, out)),
        _ if has_arith(t) => t.variables(out),
        _ => {}
    }
}

fn compare(op: BinOp, a: &Term, b: &Term) -> Option<bool> {
    let ord = match (a.as_int(), b.as_int()) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => a.cmp(b),
    };
    Some(match op {
        BinOp::Eq => ord.is_eq(),
        BinOp::Neq => ord.is_ne(),
        BinOp::Lt => ord.is_lt(),
        BinOp::Leq => ord.is_le(),
        BinOp::Gt => ord.is_gt(),
        BinOp::Geq => ord.is_ge(),
        _ => return None,
    })
}

#[derive(Clone, Debug)]
enum Goal {
    Atom(EzAtom),
    Test(Term),
    /// `var = expr` with `expr` bound.
    Assign(String, Term),
}

/// Order goals so that each runs once its inputs are bound. Returns the
/// plan and the variables it binds.
fn plan(
    atoms: &[EzAtom],
    builtins: &[Term],
    bound: &HashSet<String>,
    pos: Pos,
) -> Result<(Vec<Goal>, HashSet<String>), GroundError> {
    let mut bound = bound.clone();
    let mut atoms: Vec<Option<&EzAtom>> = atoms.iter().map(Some).collect();
    let mut tests: Vec<Option<&Term>> = builtins.iter().map(Some).collect();
    let mut out = Vec::new();
    let all_bound = |t: &Term, b: &HashSet<String>| vars_of(t).iter().all(|v| b.contains(v));
    loop {
        let mut progressed = false;
        for slot in tests.iter_mut() {
            let Some(t) = *slot else { continue };
            if all_bound(t, &bound) {
                out.push(Goal::Test(t.clone()));
                *slot = None;
                progressed = true;
                continue;
            }
            if let Term::Binary(BinOp::Eq, l, r) = t {
                for (v, e) in [(l, r), (r, l)] {
                    if let Term::Var(name) = v.as_ref() {
                        if !bound.contains(name) && all_bound(e, &bound) {
                            out.push(Goal::Assign(name.clone(), (**e).clone()));
                            bound.insert(name.clone());
                            *slot = None;
                            progressed = true;
                            break;
                        }
                    }
                }
            }
        }
        if progressed {
            continue;
        }
        let ready = atoms.iter_mut().find(|slot| {
            slot.is_some_and(|a| {
                let mut need = Vec::new();
                a.args.iter().for_each(|t| arith_vars(t, &mut need));
                need.iter().all(|v| bound.contains(v))
            })
        });
        match ready {
            Some(slot) => {
                let a = slot.take().expect("checked");
                bound.extend(atom_vars(a));
                out.push(Goal::Atom(a.clone()));
            }
            None => break,
        }
    }
    let stuck = tests
        .iter()
        .flatten()
        .flat_map(|t| vars_of(t))
        .chain(atoms.iter().flatten().flat_map(|a| atom_vars(a)))
        .find(|v| !bound.contains(v));
    if let Some(var) = stuck {
        return Err(GroundError::Unsafe { pos, var });
    }
    Ok((out, bound))
}

fn run_plan(
    goals: &[Goal],
    s: &mut Subst,
    ext: &Extension,
    pos: Pos,
    emit: &mut dyn FnMut(&Subst) -> Result<(), GroundError>,
) -> Result<(), GroundError> {
    let Some((g, rest)) = goals.split_first() else {
        return emit(s);
    };
    match g {
        Goal::Test(t) => {
            let t = eval(&substitute(t, s), pos)?;
            let ok = match &t {
                Term::Binary(op, a, b) => compare(*op, a, b),
                _ => None,
            }
            .ok_or_else(|| GroundError::Arithmetic {
                pos,
                msg: format!("`{t}` is not a comparison"),
            })?;
            if ok {
                run_plan(rest, s, ext, pos, emit)?;
            }
        }
        Goal::Assign(v, e) => {
            let val = eval(&substitute(e, s), pos)?;
            s.insert(v.clone(), val);
            run_plan(rest, s, ext, pos, emit)?;
            s.remove(v);
        }
        Goal::Atom(a) => {
            for tuple in ext.tuples(&a.key()) {
                let mut s2 = s.clone();
                let mut ok = true;
                for (p, g) in a.args.iter().zip(tuple) {
                    if !unify(p, g, &mut s2, pos)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    run_plan(rest, &mut s2, ext, pos, emit)?;
                }
            }
        }
    }
    Ok(())
}

/// Expand range arguments of a ground head into the list of atoms.
fn expand_ranges(a: &EzAtom, pos: Pos) -> Result<Vec<EzAtom>, GroundError> {
    let mut out = vec![Vec::new()];
    for t in &a.args {
        let vals = match t {
            Term::Range(l, u) => {
                let (Some(l), Some(u)) = (l.as_int(), u.as_int()) else {
                    return Err(GroundError::Arithmetic {
                        pos,
                        msg: format!("non-integer range `{t}`"),
                    });
                };
                (l..=u).map(Term::Int).collect()
            }
            _ => vec![t.clone()],
        };
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Term>| {
                vals.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|args| EzAtom {
            name: a.name.clone(),
            args,
        })
        .collect())
}

fn ground_atom(a: &EzAtom, s: &Subst, pos: Pos) -> Result<EzAtom, GroundError> {
    let args = a
        .args
        .iter()
        .map(|t| eval(&substitute(t, s), pos))
        .collect::<Result<_, _>>()?;
    Ok(EzAtom {
        name: a.name.clone(),
        args,
    })
}

fn ground_int(t: &Option<Term>, s: &Subst, pos: Pos) -> Result<Option<Term>, GroundError> {
    t.as_ref()
        .map(|t| match eval(&substitute(t, s), pos)? {
            Term::Int(n) => Ok(Term::Int(n)),
            other => Err(GroundError::Arithmetic {
                pos,
                msg: format!("bound `{other}` is not an integer"),
            }),
        })
        .transpose()
}

struct Grounder<'a> {
    domain: &'a HashSet<Key>,
    ext: &'a Extension,
}

/// Variables of a local element (choice or #sum) that its condition binds.
struct LocalPlan {
    goals: Vec<Goal>,
}

impl Grounder<'_> {
    fn check_conditions(&self, conds: &[EzAtom], pos: Pos) -> Result<(), GroundError> {
        match conds.iter().find(|c| !self.domain.contains(&c.key())) {
            Some(c) => Err(GroundError::NonDomainCondition {
                pos,
                atom: c.to_string(),
            }),
            None => Ok(()),
        }
    }

    fn local_plan(
        &self,
        conds: &[EzAtom],
        used: Vec<String>,
        bound: &HashSet<String>,
        pos: Pos,
    ) -> Result<LocalPlan, GroundError> {
        self.check_conditions(conds, pos)?;
        let (goals, b) = plan(conds, &[], bound, pos)?;
        if let Some(var) = used.into_iter().find(|v| !b.contains(v)) {
            return Err(GroundError::Unsafe { pos, var });
        }
        Ok(LocalPlan { goals })
    }

    fn local_substs(&self, lp: &LocalPlan, s: &Subst, pos: Pos) -> Result<Vec<Subst>, GroundError> {
        let mut out = Vec::new();
        let mut s = s.clone();
        run_plan(&lp.goals, &mut s, self.ext, pos, &mut |s| {
            out.push(s.clone());
            Ok(())
        })?;
        Ok(out)
    }

    fn rule(&self, r: &EzRule) -> Result<Vec<EzRule>, GroundError> {
        let pos = r.pos;
        if r.body
            .iter()
            .any(|b| matches!(b, BodyElem::Lit(l) if l.atom.name == REQUIRED))
        {
            return Err(GroundError::RequiredInBody { pos });
        }
        let domain_atoms: Vec<EzAtom> = r
            .positive()
            .filter(|a| self.domain.contains(&a.key()))
            .cloned()
            .collect();
        let builtins: Vec<Term> = r.builtins().cloned().collect();
        let (goals, bound) = plan(&domain_atoms, &builtins, &HashSet::new(), pos)?;

        let mut global: Vec<String> = Vec::new();
        match &r.head {
            Head::Atom(a) => a.variables(&mut global),
            Head::Choice(c) => {
                for t in c.lower.iter().chain(c.upper.iter()) {
                    t.variables(&mut global);
                }
            }
            Head::None => {}
        }
        for b in &r.body {
            match b {
                BodyElem::Lit(l) => l.atom.variables(&mut global),
                BodyElem::Sum(agg) => {
                    for t in agg.lower.iter().chain(agg.upper.iter()) {
                        t.variables(&mut global);
                    }
                }
                BodyElem::Builtin(_) => {}
            }
        }
        if let Some(var) = global.iter().find(|v| !bound.contains(*v)) {
            return Err(GroundError::Unsafe {
                pos,
                var: var.clone(),
            });
        }

        let choice_plans = match &r.head {
            Head::Choice(c) => c
                .elems
                .iter()
                .map(|e| self.local_plan(&e.cond, atom_vars(&e.atom), &bound, pos))
                .collect::<Result<Vec<_>, _>>()?,
            _ => Vec::new(),
        };
        let mut sum_plans: Vec<Vec<LocalPlan>> = Vec::new();
        for b in &r.body {
            if let BodyElem::Sum(agg) = b {
                let mut ps = Vec::new();
                for e in &agg.elems {
                    let mut used = atom_vars(&e.lit.atom);
                    e.weight.variables(&mut used);
                    ps.push(self.local_plan(&e.cond, used, &bound, pos)?);
                }
                sum_plans.push(ps);
            }
        }

        let mut out = Vec::new();
        let mut s = Subst::new();
        run_plan(&goals, &mut s, self.ext, pos, &mut |s| {
            let mut body = Vec::new();
            let mut sums = sum_plans.iter();
            for b in &r.body {
                match b {
                    BodyElem::Lit(l) => body.push(BodyElem::Lit(Literal {
                        naf: l.naf,
                        atom: ground_atom(&l.atom, s, pos)?,
                    })),
                    BodyElem::Builtin(_) => {}
                    BodyElem::Sum(agg) => {
                        let plans = sums.next().expect("one plan per aggregate");
                        let mut elems: Vec<SumElem> = Vec::new();
                        for (e, lp) in agg.elems.iter().zip(plans) {
                            for ls in self.local_substs(lp, s, pos)? {
                                let weight = eval(&substitute(&e.weight, &ls), pos)?;
                                if weight.as_int().is_none() {
                                    return Err(GroundError::Arithmetic {
                                        pos,
                                        msg: format!("weight `{weight}` is not an integer"),
                                    });
                                }
                                let g = SumElem {
                                    lit: Literal {
                                        naf: e.lit.naf,
                                        atom: ground_atom(&e.lit.atom, &ls, pos)?,
                                    },
                                    weight,
                                    cond: Vec::new(),
                                };
                                if !elems.contains(&g) {
                                    elems.push(g);
                                }
                            }
                        }
                        body.push(BodyElem::Sum(SumAggregate {
                            lower: ground_int(&agg.lower, s, pos)?,
                            upper: ground_int(&agg.upper, s, pos)?,
                            elems,
                        }));
                    }
                }
            }
            match &r.head {
                Head::None => out.push(EzRule {
                    head: Head::None,
                    body,
                    pos,
                }),
                Head::Atom(a) => {
                    for h in expand_ranges(&ground_atom(a, s, pos)?, pos)? {
                        out.push(EzRule {
                            head: Head::Atom(h),
                            body: body.clone(),
                            pos,
                        });
                    }
                }
                Head::Choice(c) => {
                    let mut elems: Vec<ChoiceElem> = Vec::new();
                    for (e, lp) in c.elems.iter().zip(&choice_plans) {
                        for ls in self.local_substs(lp, s, pos)? {
                            for atom in expand_ranges(&ground_atom(&e.atom, &ls, pos)?, pos)? {
                                let g = ChoiceElem {
                                    atom,
                                    cond: Vec::new(),
                                };
                                if !elems.contains(&g) {
                                    elems.push(g);
                                }
                            }
                        }
                    }
                    let head = Head::Choice(Choice {
                        lower: ground_int(&c.lower, s, pos)?,
                        upper: ground_int(&c.upper, s, pos)?,
                        elems,
                    });
                    out.push(EzRule { head, body, pos });
                }
            }
            Ok(())
        })?;
        Ok(out)
    }
}

/// Least fixpoint of the domain rules.
pub fn domain_extension(p: &EzProgram, domain: &HashSet<Key>) -> Result<Extension, GroundError> {
    let mut ext = Extension::default();
    let rules: Vec<&EzRule> = p
        .rules
        .iter()
        .filter(|r| matches!(&r.head, Head::Atom(a) if domain.contains(&a.key())))
        .collect();
    loop {
        let snapshot = ext.clone();
        let g = Grounder {
            domain,
            ext: &snapshot,
        };
        let mut changed = false;
        for r in &rules {
            for gr in g.rule(r)? {
                if let Head::Atom(a) = gr.head {
                    changed |= ext.insert(a);
                }
            }
        }
        if !changed {
            return Ok(ext);
        }
    }
}

/// Instantiate every rule; variables range over the extensions of the
/// domain predicates occurring positively in the body.
pub fn ground(p: &EzProgram) -> Result<EzProgram, GroundError> {
    let domain = domain_predicates(p);
    let ext = domain_extension(p, &domain)?;
    let g = Grounder {
        domain: &domain,
        ext: &ext,
    };
    let mut rules = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for r in &p.rules {
        for gr in g.rule(r)? {
            if seen.insert(crate::lang::rule_to_string(&gr)) {
                rules.push(gr);
            }
        }
    }
    Ok(EzProgram { rules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, preprocess, pretty_print};

    fn g(src: &str) -> EzProgram {
        ground(&preprocess(&parse(src).unwrap()).unwrap()).unwrap()
    }

    const RIDDLE: &str = include_str!("../../../../data/riddle.ez");

    #[test]
    fn riddle_age_rule_has_three_instances() {
        let out = g(RIDDLE);
        let n = out
            .rules
            .iter()
            .filter(|r| matches!(&r.head, Head::Atom(a) if a.to_string().contains("geq(age(")))
            .count();
        assert_eq!(n, 3);
    }

    #[test]
    fn ground_program_is_fixpoint() {
        let src = "cspdomain(fd). cspvar(x,0,23). {switch}. lightOn :- switch, not am. :- not lightOn. {am}. \
                   required(x >= 12) :- not am. required(x < 12) :- am.";
        let p = preprocess(&parse(src).unwrap()).unwrap();
        assert_eq!(ground(&p).unwrap(), p);
    }

    #[test]
    fn ranges_and_assignments() {
        let out = g("n(1..3). s(Y) :- n(X), Y = X * 2, Y > 2.");
        assert_eq!(
            pretty_print(&out),
            "n(1).\nn(2).\nn(3).\ns(4) :- n(2).\ns(6) :- n(3).\n"
        );
    }

    #[test]
    fn non_domain_literals_are_kept_but_do_not_bind() {
        let out = g("d(1). d(2). {p(X)} :- d(X). q(X) :- d(X), p(X), not r(X).");
        let q: Vec<String> = out
            .rules
            .iter()
            .filter(|r| matches!(&r.head, Head::Atom(a) if a.name == "q"))
            .map(crate::lang::rule_to_string)
            .collect();
        assert_eq!(
            q,
            vec![
                "q(1) :- d(1), p(1), not r(1).",
                "q(2) :- d(2), p(2), not r(2)."
            ]
        );
    }

    #[test]
    fn unsafe_variable_is_reported() {
        let p = parse("{p(1)}. q(X) :- p(X).").unwrap();
        match ground(&p) {
            Err(GroundError::Unsafe { var, .. }) => assert_eq!(var, "X"),
            other => panic!("expected unsafe error, got {other:?}"),
        }
    }

    #[test]
    fn choice_elements_expand_over_conditions() {
        let out = g("loc(0..1). leaf(a). 1{pos(L,N) : loc(N)}1 :- leaf(L).");
        assert_eq!(
            crate::lang::rule_to_string(out.rules.last().unwrap()),
            "1{pos(a,0); pos(a,1)}1 :- leaf(a)."
        );
    }

    #[test]
    fn sum_elements_expand_over_conditions() {
        let out = g("c(1..2). w(1,3). w(2,4). ok :- 4 #sum[p(P) = W : c(P) : w(P,W)] 5.");
        let last = crate::lang::rule_to_string(out.rules.last().unwrap());
        assert_eq!(last, "ok :- 4 #sum[p(1)=3, p(2)=4] 5.");
    }

    #[test]
    fn arithmetic_on_symbols_is_an_error() {
        let p = parse("d(a). e(Y) :- d(X), Y = X + 1.").unwrap();
        assert!(matches!(ground(&p), Err(GroundError::Arithmetic { .. })));
    }

    #[test]
    fn required_in_body_is_rejected() {
        let p = parse("p :- required(x > 1).").unwrap();
        assert!(matches!(
            ground(&p),
            Err(GroundError::RequiredInBody { .. })
        ));
    }
}

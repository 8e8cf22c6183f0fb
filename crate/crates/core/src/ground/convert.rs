use std::collections::HashMap;

use crate::asp::{Atom, Denial, Lit, RegularProgram, Rule};
use crate::ca::{AtomKind, CaProgram, VariableDecl};
use crate::fd::compile;
use crate::lang::{
    BodyElem, Choice, EzAtom, EzProgram, EzRule, Head, Literal, Naf, Pos, SumAggregate, Term,
    CSPDOMAIN, CSPVAR, REQUIRED,
};

use super::GroundError;

/// Largest number of subsets a cardinality or weight bound may expand to.
const MAX_COMBINATIONS: u64 = 100_000;
/// Largest number of elements in a `#sum` aggregate.
const MAX_SUM_ELEMENTS: usize = 20;

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    r
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

struct Builder<'a> {
    pi: RegularProgram,
    kinds: HashMap<Atom, AtomKind>,
    /// `required` atoms with their arguments, in order of appearance.
    required: Vec<(Atom, Term)>,
    lookup: &'a HashMap<Term, usize>,
    aux: usize,
}

struct Body {
    pos: Vec<Atom>,
    neg: Vec<Atom>,
    negneg: Vec<Atom>,
}

impl Body {
    fn lits(&self) -> Vec<Lit> {
        let mut out: Vec<Lit> = self.pos.iter().map(|&a| Lit::pos(a)).collect();
        out.extend(self.neg.iter().map(|&a| Lit::neg(a)));
        // `not not a` has the same truth condition as `a` in a denial body
        out.extend(self.negneg.iter().map(|&a| Lit::pos(a)));
        out
    }
}

fn bound_of(t: &Option<Term>, pos: Pos) -> Result<Option<i64>, GroundError> {
    match t {
        None => Ok(None),
        Some(Term::Int(n)) => Ok(Some(*n)),
        Some(other) => Err(GroundError::Arithmetic {
            pos,
            msg: format!("bound `{other}` is not an integer"),
        }),
    }
}

impl Builder<'_> {
    fn intern(&mut self, a: &EzAtom, hidden: bool) -> Atom {
        let name = a.to_string();
        let known = self.pi.atoms.get(&name);
        let atom = self.pi.atom(&name);
        if known.is_none() {
            let kind = if hidden {
                AtomKind::Hidden
            } else if a.is_reserved() {
                AtomKind::Reserved
            } else {
                AtomKind::Regular
            };
            self.kinds.insert(atom, kind);
            if a.is_required() {
                self.required.push((atom, a.args[0].clone()));
            }
        } else if !hidden && self.kinds.get(&atom) == Some(&AtomKind::Hidden) {
            self.kinds.insert(atom, AtomKind::Reserved);
        }
        atom
    }

    fn fresh(&mut self, what: &str) -> Atom {
        self.aux += 1;
        let a = self.pi.atom(&format!("#{what}{}", self.aux));
        self.kinds.insert(a, AtomKind::Hidden);
        a
    }

    fn literal(&mut self, l: &Literal, body: &mut Body) {
        let a = self.intern(&l.atom, false);
        match l.naf {
            Naf::Pos => body.pos.push(a),
            Naf::Not => body.neg.push(a),
            Naf::NotNot => body.negneg.push(a),
        }
    }

    fn body(&mut self, r: &EzRule) -> Result<Body, GroundError> {
        let mut body = Body {
            pos: Vec::new(),
            neg: Vec::new(),
            negneg: Vec::new(),
        };
        for b in &r.body {
            match b {
                BodyElem::Lit(l) => self.literal(l, &mut body),
                BodyElem::Builtin(t) => {
                    return Err(GroundError::Arithmetic {
                        pos: r.pos,
                        msg: format!("unevaluated built-in `{t}`"),
                    })
                }
                BodyElem::Sum(s) => self.sum(s, r.pos, &mut body)?,
            }
        }
        Ok(body)
    }

    /// Replace a non-negative weight aggregate by auxiliary atoms: `lb` holds
    /// when the lower bound is reached, `over` when the upper is exceeded.
    fn sum(&mut self, s: &SumAggregate, pos: Pos, body: &mut Body) -> Result<(), GroundError> {
        let n = s.elems.len();
        if n > MAX_SUM_ELEMENTS {
            return Err(GroundError::TooLarge {
                pos,
                msg: format!("#sum with {n} elements (at most {MAX_SUM_ELEMENTS})"),
            });
        }
        let mut lits = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for e in &s.elems {
            let w = e.weight.as_int().ok_or_else(|| GroundError::Arithmetic {
                pos,
                msg: format!("weight `{}` is not an integer", e.weight),
            })?;
            if w < 0 {
                return Err(GroundError::NegativeWeight { pos, weight: w });
            }
            weights.push(w as i128);
            lits.push(e.lit.clone());
        }
        let (lo, hi) = (bound_of(&s.lower, pos)?, bound_of(&s.upper, pos)?);
        let minimal = |threshold: i128| -> Vec<u32> {
            // subsets reaching the threshold that drop below it without any one element
            (0u32..1 << n)
                .filter(|&m| {
                    let members = (0..n).filter(|i| m & (1 << i) != 0);
                    let total: i128 = members.clone().map(|i| weights[i]).sum();
                    total >= threshold && members.map(|i| weights[i]).all(|w| total - w < threshold)
                })
                .collect()
        };
        let derive = |this: &mut Self, head: Atom, sets: Vec<u32>| {
            for m in sets {
                let mut b = Body {
                    pos: Vec::new(),
                    neg: Vec::new(),
                    negneg: Vec::new(),
                };
                for (i, l) in lits.iter().enumerate() {
                    if m & (1 << i) != 0 {
                        this.literal(l, &mut b);
                    }
                }
                this.pi.add(Rule::new(Some(head), b.pos, b.neg, b.negneg));
            }
        };
        if let Some(lo) = lo {
            let lb = self.fresh("lb");
            let sets = minimal(lo as i128);
            derive(self, lb, sets);
            body.pos.push(lb);
        }
        if let Some(hi) = hi {
            let over = self.fresh("over");
            let sets = minimal(hi as i128 + 1);
            derive(self, over, sets);
            body.neg.push(over);
        }
        Ok(())
    }

    fn choice(&mut self, c: &Choice, body: Body, pos: Pos) -> Result<(), GroundError> {
        let mut atoms: Vec<Atom> = Vec::new();
        for e in &c.elems {
            let a = self.intern(&e.atom, false);
            if !atoms.contains(&a) {
                atoms.push(a);
            }
        }
        let n = atoms.len();
        for &a in &atoms {
            let mut negneg = body.negneg.clone();
            negneg.push(a);
            self.pi.add(Rule::new(
                Some(a),
                body.pos.clone(),
                body.neg.clone(),
                negneg,
            ));
        }
        let (lo, hi) = (bound_of(&c.lower, pos)?, bound_of(&c.upper, pos)?);
        let base = body.lits();
        let mut deny = |k: usize, positive: bool| -> Result<(), GroundError> {
            let count = binomial(n, k);
            if count > MAX_COMBINATIONS {
                return Err(GroundError::TooLarge {
                    pos,
                    msg: format!("cardinality bound expands to {count} denials"),
                });
            }
            for s in subsets(n, k) {
                let mut d = base.clone();
                d.extend(s.iter().map(|&i| Lit::new(atoms[i], positive)));
                self.pi.add(Rule::denial(&Denial::new(d)));
            }
            Ok(())
        };
        // at most `hi`: no hi+1 elements true together
        match hi {
            Some(hi) if hi < 0 => deny(0, true)?,
            Some(hi) if (hi as u64) < n as u64 => deny(hi as usize + 1, true)?,
            _ => {}
        }
        // at least `lo`: no n-lo+1 elements false together
        match lo {
            Some(lo) if lo > n as i64 => deny(0, false)?,
            Some(lo) if lo > 0 => deny(n - lo as usize + 1, false)?,
            _ => {}
        }
        Ok(())
    }

    fn rule(&mut self, r: &EzRule, hidden_head: bool) -> Result<(), GroundError> {
        let body = self.body(r)?;
        match &r.head {
            Head::Atom(a) => {
                let h = self.intern(a, hidden_head);
                self.pi
                    .add(Rule::new(Some(h), body.pos, body.neg, body.negneg));
            }
            Head::None => {
                self.pi.add(Rule::denial(&Denial::new(body.lits())));
            }
            Head::Choice(c) => self.choice(c, body, r.pos)?,
        }
        Ok(())
    }
}

/// The cspdomain of a program; an error for anything but `fd`.
fn csp_domain(p: &EzProgram) -> Result<Option<(Term, Pos)>, GroundError> {
    let mut found: Option<(Term, Pos)> = None;
    for r in &p.rules {
        let Head::Atom(a) = &r.head else { continue };
        if a.name != CSPDOMAIN || a.args.len() != 1 {
            continue;
        }
        match &found {
            Some((d, _)) if *d != a.args[0] => {
                return Err(GroundError::DuplicateDomain(
                    d.to_string(),
                    a.args[0].to_string(),
                ))
            }
            Some(_) => {}
            None => found = Some((a.args[0].clone(), r.pos)),
        }
    }
    match &found {
        Some((Term::Sym(s), _)) if s == "fd" => Ok(found),
        Some((d, _)) => Err(GroundError::UnsupportedDomain(d.to_string())),
        None => Ok(None),
    }
}

fn uses_constraints(p: &EzProgram) -> bool {
    p.rules.iter().any(|r| match &r.head {
        Head::Atom(a) => a.name == CSPVAR || a.is_required(),
        Head::Choice(c) => c.elems.iter().any(|e| e.atom.is_required()),
        Head::None => false,
    })
}

/// Drop spaces except between two word characters, e.g. `x >= 12` to
/// `x>=12` but `a xor b` unchanged.
fn compact(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let word = |c: Option<&char>| c.is_some_and(|c| c.is_alphanumeric() || *c == '_');
    let mut out = String::with_capacity(s.len());
    for (i, &c) in chars.iter().enumerate() {
        if c == ' ' && !(i > 0 && word(chars.get(i - 1)) && word(chars.get(i + 1))) {
            continue;
        }
        out.push(c);
    }
    out
}

/// Translate an expanded ground program into a CA program: every
/// `required(β)` gets a constraint atom `|β|` with the linking denials
/// `:- required(β), not |β|.` and `:- not required(β), |β|.`
pub fn to_ca_program(p: &EzProgram, decls: &[VariableDecl]) -> Result<CaProgram, GroundError> {
    if csp_domain(p)?.is_none() && uses_constraints(p) {
        return Err(GroundError::MissingDomain);
    }
    let lookup: HashMap<Term, usize> = decls
        .iter()
        .enumerate()
        .map(|(i, d)| (d.var.clone(), i))
        .collect();
    let mut b = Builder {
        pi: RegularProgram::new(),
        kinds: HashMap::new(),
        required: Vec::new(),
        lookup: &lookup,
        aux: 0,
    };
    let mut ranges = Vec::new();
    for r in &p.rules {
        b.rule(r, false)?;
        if let Head::Atom(a) = &r.head {
            if a.name == CSPVAR && a.args.len() == 3 {
                for (op, bound) in [("geq", &a.args[1]), ("leq", &a.args[2])] {
                    let beta = Term::compound(op, vec![a.args[0].clone(), bound.clone()]);
                    let head = Head::Atom(EzAtom::new(REQUIRED, vec![beta]));
                    ranges.push(EzRule {
                        head,
                        body: r.body.clone(),
                        pos: r.pos,
                    });
                }
            }
        }
    }
    for r in &ranges {
        b.rule(r, true)?;
    }
    let required = std::mem::take(&mut b.required);
    let mut constraints = Vec::new();
    for (req, beta) in &required {
        let name = format!("|{}|", compact(&beta.to_infix()));
        let expr = compile(beta, &|t| b.lookup.get(t).copied()).map_err(|source| {
            GroundError::Constraint {
                atom: name.clone(),
                source,
            }
        })?;
        let c = b.pi.atom(&name);
        b.pi.add(Rule::denial(&Denial::new(vec![
            Lit::pos(*req),
            Lit::neg(c),
        ])));
        b.pi.add(Rule::denial(&Denial::new(vec![
            Lit::neg(*req),
            Lit::pos(c),
        ])));
        constraints.push((name, expr));
    }
    let kinds = std::mem::take(&mut b.kinds);
    let mut ca = CaProgram::new(b.pi, decls.to_vec());
    for (name, expr) in constraints {
        ca.add_constraint(&name, expr)
            .map_err(|e| GroundError::Ca(e.to_string()))?;
    }
    for (a, k) in kinds {
        ca.set_kind(a, k);
    }
    ca.check().map_err(|e| GroundError::Ca(e.to_string()))?;
    Ok(ca)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::enumerate_answer_sets_bruteforce;
    use crate::lang::{parse, preprocess};

    fn ca(src: &str) -> CaProgram {
        let p = super::super::ground(&preprocess(&parse(src).unwrap()).unwrap()).unwrap();
        let decls =
            super::super::collect_decls(&p, &super::super::GroundConfig::default()).unwrap();
        let (p, _) = super::super::expand_lists(&p, &decls).unwrap();
        to_ca_program(&p, &decls).unwrap()
    }

    fn err(src: &str) -> GroundError {
        let p = super::super::ground(&preprocess(&parse(src).unwrap()).unwrap()).unwrap();
        let decls =
            super::super::collect_decls(&p, &super::super::GroundConfig::default()).unwrap();
        to_ca_program(&p, &decls).unwrap_err()
    }

    #[test]
    fn required_atoms_get_linking_denials() {
        let c = ca("cspdomain(fd). cspvar(x,0,23). {am}. required(x >= 12) :- not am. required(x < 12) :- am.");
        let names: Vec<&str> = c
            .constraint_atoms()
            .iter()
            .map(|&a| c.atom_name(a))
            .collect();
        assert_eq!(names, ["|x>=12|", "|x<12|", "|x>=0|", "|x<=23|"]);
        let text = c.pi.to_string();
        for beta in ["x>=12", "x<12", "x>=0", "x<=23"] {
            let linking = text
                .lines()
                .filter(|l| l.starts_with(":-") && l.contains(&format!("|{beta}|")))
                .count();
            assert_eq!(linking, 2, "{beta}");
        }
        assert!(c.check().is_ok());
    }

    #[test]
    fn range_constraints_are_hidden() {
        let c = ca("cspdomain(fd). cspvar(x,0,23).");
        let req = c.pi.atoms.get("required(geq(x,0))").unwrap();
        assert_eq!(c.kind(req), AtomKind::Hidden);
        let dom = c.pi.atoms.get("cspdomain(fd)").unwrap();
        assert_eq!(c.kind(dom), AtomKind::Reserved);
    }

    #[test]
    fn pure_asp_has_no_constraint_atoms() {
        let c = ca("a :- not b. b :- not a.");
        assert!(c.constraint_atoms().is_empty());
        assert_eq!(
            enumerate_answer_sets_bruteforce(&c.pi, 16).unwrap().len(),
            2
        );
    }

    #[test]
    fn choice_bounds_are_enforced() {
        let c = ca("1{a; b; c}2.");
        let sets = enumerate_answer_sets_bruteforce(&c.pi, 16).unwrap();
        assert_eq!(sets.len(), 6);
    }

    #[test]
    fn weight_bounds_are_enforced() {
        let c = ca("{a; b; c}. ok :- 3 #sum[a=1, b=2, c=3] 4. :- not ok.");
        let visible = |x: &Vec<bool>| -> Vec<String> {
            c.pi.names_of(x)
                .into_iter()
                .filter(|n| !n.starts_with('#') && n != "ok")
                .collect()
        };
        let mut got: Vec<Vec<String>> = enumerate_answer_sets_bruteforce(&c.pi, 16)
            .unwrap()
            .iter()
            .map(visible)
            .collect();
        got.sort();
        // weight 3 or 4
        assert_eq!(got, [vec!["a", "b"], vec!["a", "c"], vec!["c"]]);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(
            err("cspdomain(q). cspvar(x)."),
            GroundError::UnsupportedDomain("q".into())
        );
        assert_eq!(err("cspvar(x)."), GroundError::MissingDomain);
        assert!(matches!(
            err("cspdomain(fd). cspdomain(r)."),
            GroundError::DuplicateDomain(..)
        ));
        assert!(matches!(
            err("cspdomain(fd). required(y > 1)."),
            GroundError::Constraint { .. }
        ));
    }
}

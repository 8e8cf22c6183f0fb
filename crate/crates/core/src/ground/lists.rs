use std::collections::HashSet;

use crate::ca::VariableDecl;
use crate::lang::{BodyElem, EzAtom, EzProgram, EzRule, Head, Naf, Pos, Term, CSPVAR};

use super::{GroundConfig, GroundError, Warning};

/// Atoms of the least model of the definite rules of a ground program.
pub fn definite_facts(p: &EzProgram) -> HashSet<EzAtom> {
    let definite: Vec<(&EzAtom, Vec<&EzAtom>)> = p
        .rules
        .iter()
        .filter_map(|r| {
            let Head::Atom(h) = &r.head else { return None };
            let mut body = Vec::new();
            for b in &r.body {
                match b {
                    BodyElem::Lit(l) if l.naf == Naf::Pos => body.push(&l.atom),
                    _ => return None,
                }
            }
            Some((h, body))
        })
        .collect();
    let mut facts: HashSet<EzAtom> = HashSet::new();
    loop {
        let mut changed = false;
        for (h, body) in &definite {
            if !facts.contains(*h) && body.iter().all(|b| facts.contains(*b)) {
                facts.insert((*h).clone());
                changed = true;
            }
        }
        if !changed {
            return facts;
        }
    }
}

fn bound(t: &Term, pos: Pos) -> Result<i64, GroundError> {
    t.as_int().ok_or_else(|| GroundError::Declaration {
        pos,
        msg: format!("bound `{t}` is not an integer"),
    })
}

/// Constraint variable declarations of a ground program, in first-occurrence
/// order. Bounds come from unconditional `cspvar/3` rules; other variables
/// get the default range.
pub fn collect_decls(p: &EzProgram, cfg: &GroundConfig) -> Result<Vec<VariableDecl>, GroundError> {
    let facts = definite_facts(p);
    let mut decls: Vec<VariableDecl> = Vec::new();
    for r in &p.rules {
        let Head::Atom(a) = &r.head else { continue };
        if a.name != CSPVAR {
            continue;
        }
        let unconditional = r
            .body
            .iter()
            .all(|b| matches!(b, BodyElem::Lit(l) if l.naf == Naf::Pos && facts.contains(&l.atom)));
        let var = a.args[0].clone();
        let range = match a.args.len() {
            3 => {
                let (lo, hi) = (bound(&a.args[1], r.pos)?, bound(&a.args[2], r.pos)?);
                if lo > hi {
                    return Err(GroundError::Declaration {
                        pos: r.pos,
                        msg: format!("empty range {lo}..{hi} for `{var}`"),
                    });
                }
                unconditional.then_some((lo, hi))
            }
            _ => None,
        };
        match decls.iter_mut().find(|d| d.var == var) {
            Some(d) => {
                if let Some((lo, hi)) = range {
                    if d.ranged {
                        d.lower = d.lower.max(lo);
                        d.upper = d.upper.min(hi);
                    } else {
                        *d = VariableDecl::new(var, lo, hi);
                    }
                }
            }
            None => decls.push(match range {
                Some((lo, hi)) => VariableDecl::new(var, lo, hi),
                None => VariableDecl {
                    var,
                    lower: cfg.default_range.0,
                    upper: cfg.default_range.1,
                    ranged: false,
                },
            }),
        }
    }
    Ok(decls)
}

struct Expander<'a> {
    decls: &'a [VariableDecl],
    facts: Vec<&'a EzAtom>,
    warnings: Vec<Warning>,
}

fn prefix_matches(args: &[Term], prefix: &[Term], arity: usize) -> bool {
    args.len() == arity && args.len() >= prefix.len() && args[..prefix.len()] == *prefix
}

impl Expander<'_> {
    fn term(&mut self, t: &Term, pos: Pos) -> Result<Term, GroundError> {
        Ok(match t {
            Term::Intensional {
                name,
                prefix,
                arity,
            } => {
                let items = self.expand(name, prefix, *arity, pos, t)?;
                if items.is_empty() {
                    self.warnings.push(Warning::EmptyList {
                        pos,
                        list: t.to_string(),
                    });
                }
                Term::List(items)
            }
            Term::Compound(f, args) => Term::Compound(f.clone(), self.all(args, pos)?),
            Term::Global(f, args) => Term::Global(f.clone(), self.all(args, pos)?),
            Term::List(items) => Term::List(self.all(items, pos)?),
            other => other.clone(),
        })
    }

    fn all(&mut self, ts: &[Term], pos: Pos) -> Result<Vec<Term>, GroundError> {
        ts.iter().map(|t| self.term(t, pos)).collect()
    }

    fn expand(
        &self,
        name: &str,
        prefix: &[Term],
        arity: usize,
        pos: Pos,
        t: &Term,
    ) -> Result<Vec<Term>, GroundError> {
        let shape = |v: &Term| match v.functor() {
            Some((f, args)) => f == name && args.len() == arity,
            None => false,
        };
        if self.decls.iter().any(|d| shape(&d.var)) {
            let mut out: Vec<Term> = self
                .decls
                .iter()
                .map(|d| &d.var)
                .filter(|v| {
                    v.functor()
                        .is_some_and(|(_, args)| prefix_matches(args, prefix, arity))
                        && shape(v)
                })
                .cloned()
                .collect();
            out.sort();
            out.dedup();
            return Ok(out);
        }
        if arity > 0
            && self
                .facts
                .iter()
                .any(|f| f.name == name && f.args.len() == arity)
        {
            let mut rows: Vec<&EzAtom> = self
                .facts
                .iter()
                .copied()
                .filter(|f| f.name == name && prefix_matches(&f.args, prefix, arity))
                .collect();
            rows.sort_by(|a, b| a.args.cmp(&b.args));
            return Ok(rows
                .into_iter()
                .map(|f| f.args[arity - 1].clone())
                .collect());
        }
        Err(GroundError::UndeclaredList {
            pos,
            list: t.to_string(),
        })
    }

    fn atom(&mut self, a: &EzAtom, pos: Pos) -> Result<EzAtom, GroundError> {
        if a.is_required() {
            Ok(EzAtom {
                name: a.name.clone(),
                args: self.all(&a.args, pos)?,
            })
        } else {
            Ok(a.clone())
        }
    }
}

/// Replace intensional lists inside `required` atoms by their extensional
/// form: declared variables first (λ_v), otherwise facts of a relation (λ_r).
pub fn expand_lists(
    p: &EzProgram,
    decls: &[VariableDecl],
) -> Result<(EzProgram, Vec<Warning>), GroundError> {
    let facts = definite_facts(p);
    let mut x = Expander {
        decls,
        facts: facts.iter().collect(),
        warnings: Vec::new(),
    };
    let mut rules = Vec::with_capacity(p.rules.len());
    for r in &p.rules {
        let head = match &r.head {
            Head::Atom(a) => Head::Atom(x.atom(a, r.pos)?),
            Head::Choice(c) => {
                let mut c = c.clone();
                for e in &mut c.elems {
                    e.atom = x.atom(&e.atom, r.pos)?;
                }
                Head::Choice(c)
            }
            Head::None => Head::None,
        };
        rules.push(EzRule {
            head,
            body: r.body.clone(),
            pos: r.pos,
        });
    }
    Ok((EzProgram { rules }, x.warnings))
}

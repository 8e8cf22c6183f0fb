use super::ast::*;
use super::term::{BinOp, Term, UnOp};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("{pos}: unknown operator `{op}` inside required")]
    UnknownOperator { pos: Pos, op: String },
}

/// Rewrite operators inside `required` arguments into prefix functors, e.g.
/// `required(v > 2)` becomes `required(gt(v,2))`. Built-ins outside
/// `required` are left for the grounder.
pub fn preprocess(p: &EzProgram) -> Result<EzProgram, PreprocessError> {
    let mut out = p.clone();
    for r in &mut out.rules {
        let pos = r.pos;
        let fix = |a: &mut EzAtom| -> Result<(), PreprocessError> {
            if a.name == REQUIRED {
                for t in &mut a.args {
                    *t = canonical(t, pos)?;
                }
            }
            Ok(())
        };
        match &mut r.head {
            Head::None => {}
            Head::Atom(a) => fix(a)?,
            Head::Choice(c) => {
                for e in &mut c.elems {
                    fix(&mut e.atom)?;
                    e.cond.iter_mut().try_for_each(fix)?;
                }
            }
        }
        for b in &mut r.body {
            match b {
                BodyElem::Lit(l) => fix(&mut l.atom)?,
                BodyElem::Builtin(_) => {}
                BodyElem::Sum(s) => {
                    for e in &mut s.elems {
                        fix(&mut e.lit.atom)?;
                        e.cond.iter_mut().try_for_each(fix)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn canonical(t: &Term, pos: Pos) -> Result<Term, PreprocessError> {
    let canon_all = |ts: &[Term]| {
        ts.iter()
            .map(|a| canonical(a, pos))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(match t {
        Term::Binary(BinOp::RevImpl, a, b) => {
            Term::Compound("impl".into(), vec![canonical(b, pos)?, canonical(a, pos)?])
        }
        Term::Binary(op, a, b) => Term::Compound(
            op.functor().into(),
            vec![canonical(a, pos)?, canonical(b, pos)?],
        ),
        Term::Unary(UnOp::Minus, a) => match canonical(a, pos)? {
            Term::Int(n) => Term::Int(-n),
            inner => Term::Compound(UnOp::Minus.functor().into(), vec![inner]),
        },
        Term::Unary(UnOp::Not, a) => {
            Term::Compound(UnOp::Not.functor().into(), vec![canonical(a, pos)?])
        }
        Term::Op(op) if op.is_comparison() => Term::Sym(op.functor().into()),
        Term::Op(op) => {
            return Err(PreprocessError::UnknownOperator {
                pos,
                op: op.symbol().into(),
            })
        }
        Term::Range(..) => {
            return Err(PreprocessError::UnknownOperator {
                pos,
                op: "..".into(),
            })
        }
        Term::Compound(f, args) => Term::Compound(f.clone(), canon_all(args)?),
        Term::Global(f, args) => Term::Global(f.clone(), canon_all(args)?),
        Term::List(items) => Term::List(canon_all(items)?),
        Term::Intensional {
            name,
            prefix,
            arity,
        } => Term::Intensional {
            name: name.clone(),
            prefix: canon_all(prefix)?,
            arity: *arity,
        },
        Term::Int(_) | Term::Sym(_) | Term::Var(_) => t.clone(),
    })
}

/// True when no operator node remains anywhere inside `required` arguments.
pub fn required_args_are_canonical(p: &EzProgram) -> bool {
    let mut ok = true;
    let mut check = |a: &EzAtom| {
        if a.name == REQUIRED {
            for t in &a.args {
                t.visit(&mut |s| {
                    if matches!(
                        s,
                        Term::Binary(..) | Term::Unary(..) | Term::Op(_) | Term::Range(..)
                    ) {
                        ok = false;
                    }
                });
            }
        }
    };
    for r in &p.rules {
        match &r.head {
            Head::Atom(a) => check(a),
            Head::Choice(c) => c.elems.iter().for_each(|e| check(&e.atom)),
            Head::None => {}
        }
        for b in &r.body {
            if let BodyElem::Lit(l) = b {
                check(&l.atom);
            }
        }
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, pretty_print};

    fn pre(src: &str) -> String {
        pretty_print(&preprocess(&parse(src).unwrap()).unwrap())
            .trim()
            .to_string()
    }

    #[test]
    fn comparison_becomes_prefix_functor() {
        assert_eq!(pre("required(v > 2)."), "required(gt(v,2)).");
    }

    #[test]
    fn idempotent_on_canonical_input() {
        assert_eq!(pre("required(gt(v,2))."), "required(gt(v,2)).");
        let p = preprocess(&parse("required(x >= 12 \\/ y < 3 <- !b = 1).").unwrap()).unwrap();
        assert_eq!(preprocess(&p).unwrap(), p);
    }

    #[test]
    fn connectives_are_rewritten() {
        assert_eq!(
            pre("required(x ≥ 12 ∨ y < 3)."),
            "required(or(geq(x,12),lt(y,3)))."
        );
        assert_eq!(
            pre("required(a = 1 <- b = 2)."),
            "required(impl(eq(b,2),eq(a,1)))."
        );
        assert_eq!(
            pre("required(sum([x,y], <=, 5))."),
            "required(sum([x,y],leq,5))."
        );
    }

    #[test]
    fn builtins_outside_required_untouched() {
        assert_eq!(pre("a(W) :- b(X), W = X + 1."), "a(W) :- b(X), W = X + 1.");
    }

    #[test]
    fn ranges_inside_required_are_rejected() {
        assert!(preprocess(&parse("required(x = 1..3).").unwrap()).is_err());
    }

    #[test]
    fn no_operator_tokens_remain() {
        let p =
            preprocess(&parse("required(x*2 - -y + 3 = z / 2 xor !(a != b)).").unwrap()).unwrap();
        assert!(required_args_are_canonical(&p));
    }
}

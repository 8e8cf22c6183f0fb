//! Translation of canonical `required` arguments into constraint
//! expressions.

use crate::lang::Term;

use super::expr::{CmpOp, Connective, ConstraintExpr, Global, IntExpr};
use super::FdError;

/// Compile a constraint term. `lookup` maps a declared constraint variable
/// to its index.
pub fn compile(
    t: &Term,
    lookup: &dyn Fn(&Term) -> Option<usize>,
) -> Result<ConstraintExpr, FdError> {
    Compiler { lookup }.constraint(t, true)
}

struct Compiler<'a> {
    lookup: &'a dyn Fn(&Term) -> Option<usize>,
}

fn connective(name: &str) -> Option<Connective> {
    Some(match name {
        "and" => Connective::And,
        "or" => Connective::Or,
        "xor" => Connective::Xor,
        "impl" => Connective::Implies,
        "equiv" => Connective::Equiv,
        _ => return None,
    })
}

fn is_global(name: &str) -> bool {
    crate::lang::GLOBAL_CONSTRAINTS.contains(&name)
}

impl Compiler<'_> {
    fn constraint(&self, t: &Term, top: bool) -> Result<ConstraintExpr, FdError> {
        let not_constraint = || FdError::NotAConstraint(t.to_string());
        let (name, args) = match t {
            Term::Compound(f, args) | Term::Global(f, args) => (f.as_str(), args.as_slice()),
            _ => return Err(not_constraint()),
        };
        if let (Some(op), [a, b]) = (CmpOp::from_functor(name), args) {
            return Ok(ConstraintExpr::cmp(op, self.int(a)?, self.int(b)?));
        }
        if let (Some(c), [a, b]) = (connective(name), args) {
            return Ok(ConstraintExpr::bin(
                c,
                self.constraint(a, false)?,
                self.constraint(b, false)?,
            ));
        }
        if let ("neg", [a]) = (name, args) {
            return Ok(ConstraintExpr::Not(Box::new(self.constraint(a, false)?)));
        }
        if is_global(name) {
            if !top {
                return Err(FdError::NestedGlobal(t.to_string()));
            }
            return self.global(name, args, t).map(ConstraintExpr::Global);
        }
        Err(not_constraint())
    }

    fn int(&self, t: &Term) -> Result<IntExpr, FdError> {
        if let Some(v) = (self.lookup)(t) {
            return Ok(IntExpr::Var(v));
        }
        let bin = |f: fn(Box<IntExpr>, Box<IntExpr>) -> IntExpr,
                   a: &Term,
                   b: &Term|
         -> Result<IntExpr, FdError> {
            Ok(f(Box::new(self.int(a)?), Box::new(self.int(b)?)))
        };
        match t {
            Term::Int(n) => Ok(IntExpr::Const(*n)),
            Term::Compound(f, args) => match (f.as_str(), args.as_slice()) {
                ("plus", [a, b]) => bin(IntExpr::Add, a, b),
                ("minus", [a, b]) => bin(IntExpr::Sub, a, b),
                ("times", [a, b]) => bin(IntExpr::Mul, a, b),
                ("div", [a, b]) => bin(IntExpr::Div, a, b),
                ("uminus", [a]) => Ok(IntExpr::Neg(Box::new(self.int(a)?))),
                _ => Err(FdError::UndeclaredVariable(t.to_string())),
            },
            _ => Err(FdError::UndeclaredVariable(t.to_string())),
        }
    }

    fn operand(&self, t: &Term, g: &str) -> Result<IntExpr, FdError> {
        match self.int(t)? {
            e @ (IntExpr::Var(_) | IntExpr::Const(_)) => Ok(e),
            _ => Err(bad(g, format!("`{t}` is not a variable or integer"))),
        }
    }

    fn list(&self, t: &Term, g: &str) -> Result<Vec<IntExpr>, FdError> {
        match t {
            Term::List(items) => items.iter().map(|x| self.operand(x, g)).collect(),
            _ => Err(bad(g, format!("`{t}` is not a list"))),
        }
    }

    fn ints(&self, t: &Term, g: &str) -> Result<Vec<i64>, FdError> {
        match t {
            Term::List(items) => items
                .iter()
                .map(|x| {
                    x.as_int()
                        .ok_or_else(|| bad(g, format!("`{x}` is not an integer")))
                })
                .collect(),
            _ => Err(bad(g, format!("`{t}` is not a list of integers"))),
        }
    }

    fn op(&self, t: &Term, g: &str) -> Result<CmpOp, FdError> {
        match t {
            Term::Sym(s) => CmpOp::from_functor(s),
            _ => None,
        }
        .ok_or_else(|| bad(g, format!("`{t}` is not a comparison operator")))
    }

    fn global(&self, name: &str, args: &[Term], t: &Term) -> Result<Global, FdError> {
        let g = name;
        Ok(match (name, args) {
            ("all_different", [l]) => Global::AllDifferent(self.list(l, g)?),
            ("all_distinct", [l]) => Global::AllDistinct(self.list(l, g)?),
            ("assignment", [x, y]) => Global::Assignment(self.list(x, g)?, self.list(y, g)?),
            ("circuit", [l]) => Global::Circuit(self.list(l, g)?),
            ("count", [m, l, op, e]) => Global::Count {
                value: self.operand(m, g)?,
                list: self.list(l, g)?,
                op: self.op(op, g)?,
                rhs: self.operand(e, g)?,
            },
            ("cumulative", [s, d, r, l]) => Global::Cumulative {
                starts: self.list(s, g)?,
                durations: self.ints(d, g)?,
                resources: self.ints(r, g)?,
                limit: self.operand(l, g)?,
            },
            ("disjoint2", [x, w, y, h]) => Global::Disjoint2 {
                x: self.list(x, g)?,
                w: self.ints(w, g)?,
                y: self.list(y, g)?,
                h: self.ints(h, g)?,
            },
            ("element", [i, l, e]) => Global::Element {
                index: self.operand(i, g)?,
                list: self.list(l, g)?,
                value: self.operand(e, g)?,
            },
            ("minimum", [m, l]) => Global::Minimum(self.operand(m, g)?, self.list(l, g)?),
            ("maximum", [m, l]) => Global::Maximum(self.operand(m, g)?, self.list(l, g)?),
            ("scalar_product", [c, l, op, e]) => Global::ScalarProduct {
                coeffs: self.ints(c, g)?,
                list: self.list(l, g)?,
                op: self.op(op, g)?,
                rhs: self.operand(e, g)?,
            },
            ("serialized", [s, d]) => Global::Serialized {
                starts: self.list(s, g)?,
                durations: self.ints(d, g)?,
            },
            ("sum", [l, op, e]) => Global::Sum {
                list: self.list(l, g)?,
                op: self.op(op, g)?,
                rhs: self.operand(e, g)?,
            },
            _ => return Err(bad(g, format!("wrong number of arguments in `{t}`"))),
        })
    }
}

fn bad(name: &str, msg: String) -> FdError {
    FdError::BadGlobal {
        name: name.to_string(),
        msg,
    }
}

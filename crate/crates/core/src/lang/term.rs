use std::cmp::Ordering;
use std::fmt;

/// Names of the global constraints in the EZ catalog.
pub const GLOBAL_CONSTRAINTS: &[&str] = &[
    "all_different",
    "all_distinct",
    "assignment",
    "circuit",
    "count",
    "cumulative",
    "disjoint2",
    "element",
    "minimum",
    "maximum",
    "scalar_product",
    "serialized",
    "sum",
];

/// Infix operators of the surface syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
    Or,
    And,
    Xor,
    Impl,
    RevImpl,
    Equiv,
}

impl BinOp {
    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Eq | BinOp::Neq | BinOp::Lt | BinOp::Leq | BinOp::Gt | BinOp::Geq
        )
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "=",
            BinOp::Neq => "!=",
            BinOp::Lt => "<",
            BinOp::Leq => "<=",
            BinOp::Gt => ">",
            BinOp::Geq => ">=",
            BinOp::Or => "\\/",
            BinOp::And => "/\\",
            BinOp::Xor => "xor",
            BinOp::Impl => "->",
            BinOp::RevImpl => "<-",
            BinOp::Equiv => "<->",
        }
    }

    /// Prefix functor used after preprocessing. `RevImpl` maps to `impl` with
    /// swapped arguments.
    pub fn functor(self) -> &'static str {
        match self {
            BinOp::Add => "plus",
            BinOp::Sub => "minus",
            BinOp::Mul => "times",
            BinOp::Div => "div",
            BinOp::Eq => "eq",
            BinOp::Neq => "neq",
            BinOp::Lt => "lt",
            BinOp::Leq => "leq",
            BinOp::Gt => "gt",
            BinOp::Geq => "geq",
            BinOp::Or => "or",
            BinOp::And => "and",
            BinOp::Xor => "xor",
            BinOp::Impl | BinOp::RevImpl => "impl",
            BinOp::Equiv => "equiv",
        }
    }

    pub fn from_functor(name: &str) -> Option<BinOp> {
        Some(match name {
            "plus" => BinOp::Add,
            "minus" => BinOp::Sub,
            "times" => BinOp::Mul,
            "div" => BinOp::Div,
            "eq" => BinOp::Eq,
            "neq" => BinOp::Neq,
            "lt" => BinOp::Lt,
            "leq" => BinOp::Leq,
            "gt" => BinOp::Gt,
            "geq" => BinOp::Geq,
            "or" => BinOp::Or,
            "and" => BinOp::And,
            "xor" => BinOp::Xor,
            "impl" => BinOp::Impl,
            "equiv" => BinOp::Equiv,
            _ => return None,
        })
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Impl | BinOp::RevImpl | BinOp::Equiv => 1,
            BinOp::Or => 2,
            BinOp::Xor => 3,
            BinOp::And => 4,
            BinOp::Eq | BinOp::Neq | BinOp::Lt | BinOp::Leq | BinOp::Gt | BinOp::Geq => 6,
            BinOp::Add | BinOp::Sub => 8,
            BinOp::Mul | BinOp::Div => 9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    /// Arithmetic negation `-t`.
    Minus,
    /// Reified negation `!c`.
    Not,
}

impl UnOp {
    pub fn functor(self) -> &'static str {
        match self {
            UnOp::Minus => "uminus",
            UnOp::Not => "neg",
        }
    }
}

const PREC_NOT: u8 = 5;
const PREC_RANGE: u8 = 7;
const PREC_MINUS: u8 = 10;
const PREC_ATOM: u8 = 11;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Int(i64),
    Sym(String),
    Var(String),
    Compound(String, Vec<Term>),
    List(Vec<Term>),
    /// `[name(prefix..)/arity]`
    Intensional {
        name: String,
        prefix: Vec<Term>,
        arity: usize,
    },
    Global(String, Vec<Term>),
    Binary(BinOp, Box<Term>, Box<Term>),
    Unary(UnOp, Box<Term>),
    Range(Box<Term>, Box<Term>),
    /// Bare operator in argument position, e.g. the `<=` of `sum(L, <=, 5)`.
    Op(BinOp),
}

impl Term {
    pub fn sym(name: &str) -> Term {
        Term::Sym(name.to_string())
    }

    pub fn compound(name: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Sym(name.to_string())
        } else {
            Term::Compound(name.to_string(), args)
        }
    }

    pub fn binary(op: BinOp, l: Term, r: Term) -> Term {
        Term::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(n) => Some(*n),
            _ => None,
        }
    }

    /// Functor name and arguments of a symbol or compound.
    pub fn functor(&self) -> Option<(&str, &[Term])> {
        match self {
            Term::Sym(s) => Some((s, &[])),
            Term::Compound(f, args) | Term::Global(f, args) => Some((f, args)),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit(&mut |t| {
            if matches!(t, Term::Var(_)) {
                ground = false;
            }
        });
        ground
    }

    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Compound(_, args) | Term::Global(_, args) | Term::List(args) => {
                args.iter().for_each(|a| a.visit(f))
            }
            Term::Intensional { prefix, .. } => prefix.iter().for_each(|a| a.visit(f)),
            Term::Binary(_, a, b) | Term::Range(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Unary(_, a) => a.visit(f),
            Term::Int(_) | Term::Sym(_) | Term::Var(_) | Term::Op(_) => {}
        }
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        self.visit(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Int(_) => 0,
            Term::Sym(_) => 1,
            Term::Compound(..) | Term::Global(..) => 2,
            Term::List(_) => 3,
            Term::Intensional { .. } => 4,
            Term::Binary(..) => 5,
            Term::Unary(..) => 6,
            Term::Range(..) => 7,
            Term::Op(_) => 8,
            Term::Var(_) => 9,
        }
    }

    /// Canonical rendering with canonical functors shown as infix operators.
    /// Used for atom names in answer sets.
    pub fn to_infix(&self) -> String {
        let mut s = String::new();
        write_infix(self, &mut s);
        s
    }

    fn surface_precedence(&self) -> u8 {
        match self {
            Term::Binary(op, ..) => op.precedence(),
            Term::Unary(UnOp::Not, _) => PREC_NOT,
            Term::Unary(UnOp::Minus, _) => PREC_MINUS,
            Term::Range(..) => PREC_RANGE,
            Term::Int(n) if *n < 0 => PREC_MINUS,
            _ => PREC_ATOM,
        }
    }
}

fn cmp_args(a: &[Term], b: &[Term]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Integers numerically, then symbols by name, then compounds by functor,
/// arity and arguments.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        use Term::*;
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Sym(a), Sym(b)) | (Var(a), Var(b)) => a.cmp(b),
            (Compound(f, a) | Global(f, a), Compound(g, b) | Global(g, b)) => f
                .cmp(g)
                .then(a.len().cmp(&b.len()))
                .then_with(|| cmp_args(a, b)),
            (List(a), List(b)) => cmp_args(a, b),
            (
                Intensional {
                    name: n1,
                    prefix: p1,
                    arity: k1,
                },
                Intensional {
                    name: n2,
                    prefix: p2,
                    arity: k2,
                },
            ) => n1.cmp(n2).then(k1.cmp(k2)).then_with(|| cmp_args(p1, p2)),
            (Binary(o1, a1, b1), Binary(o2, a2, b2)) => {
                o1.cmp(o2).then_with(|| a1.cmp(a2)).then_with(|| b1.cmp(b2))
            }
            (Unary(o1, a1), Unary(o2, a2)) => o1.cmp(o2).then_with(|| a1.cmp(a2)),
            (Range(a1, b1), Range(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Op(a), Op(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Term]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, min_prec: u8) -> fmt::Result {
    if t.surface_precedence() < min_prec {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// Surface syntax, re-parseable by the parser.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(n) => write!(f, "{n}"),
            Term::Sym(s) | Term::Var(s) => f.write_str(s),
            Term::Compound(name, args) | Term::Global(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Term::List(items) => {
                f.write_str("[")?;
                write_list(f, items)?;
                f.write_str("]")
            }
            Term::Intensional {
                name,
                prefix,
                arity,
            } => {
                f.write_str("[")?;
                f.write_str(name)?;
                if !prefix.is_empty() {
                    f.write_str("(")?;
                    write_list(f, prefix)?;
                    f.write_str(")")?;
                }
                write!(f, "/{arity}]")
            }
            Term::Binary(op, a, b) => {
                let p = op.precedence();
                // Comparisons and implications do not chain; arithmetic and
                // connectives associate to the left.
                let (lp, rp) = if p == 6 || p == 1 {
                    (p + 1, p + 1)
                } else {
                    (p, p + 1)
                };
                write_operand(f, a, lp)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b, rp)
            }
            Term::Unary(UnOp::Minus, a) => {
                f.write_str("-")?;
                write_operand(f, a, PREC_ATOM)
            }
            Term::Unary(UnOp::Not, a) => {
                f.write_str("!")?;
                write_operand(f, a, PREC_NOT)
            }
            Term::Range(a, b) => {
                write_operand(f, a, PREC_RANGE + 1)?;
                f.write_str("..")?;
                write_operand(f, b, PREC_RANGE + 1)
            }
            Term::Op(op) => f.write_str(op.symbol()),
        }
    }
}

fn infix_precedence(t: &Term) -> u8 {
    match t {
        Term::Compound(f, args) if args.len() == 2 => match BinOp::from_functor(f) {
            Some(op) => op.precedence(),
            None => PREC_ATOM,
        },
        Term::Compound(f, args) if args.len() == 1 && f == "neg" => PREC_NOT,
        Term::Compound(f, args) if args.len() == 1 && f == "uminus" => PREC_MINUS,
        _ => t.surface_precedence(),
    }
}

fn write_infix_operand(t: &Term, min_prec: u8, out: &mut String) {
    if infix_precedence(t) < min_prec {
        out.push('(');
        write_infix(t, out);
        out.push(')');
    } else {
        write_infix(t, out);
    }
}

fn write_infix(t: &Term, out: &mut String) {
    match t {
        Term::Compound(f, args) if args.len() == 2 && BinOp::from_functor(f).is_some() => {
            let op = BinOp::from_functor(f).unwrap_or(BinOp::Eq);
            let p = op.precedence();
            let (lp, rp) = if p == 6 || p == 1 {
                (p + 1, p + 1)
            } else {
                (p, p + 1)
            };
            write_infix_operand(&args[0], lp, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_infix_operand(&args[1], rp, out);
        }
        Term::Compound(f, args) if args.len() == 1 && f == "neg" => {
            out.push('!');
            write_infix_operand(&args[0], PREC_NOT, out);
        }
        Term::Compound(f, args) if args.len() == 1 && f == "uminus" => {
            out.push('-');
            write_infix_operand(&args[0], PREC_ATOM, out);
        }
        Term::Compound(f, args) | Term::Global(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_infix(a, out);
            }
            out.push(')');
        }
        Term::List(items) => {
            out.push('[');
            for (i, a) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_infix(a, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_integers_before_symbols_before_compounds() {
        let mut ts = [
            Term::compound("f", vec![Term::Int(1)]),
            Term::sym("b"),
            Term::Int(10),
            Term::Int(-2),
            Term::sym("a"),
        ];
        ts.sort();
        let shown: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, ["-2", "10", "a", "b", "f(1)"]);
    }

    #[test]
    fn compounds_compare_by_functor_then_arity_then_args() {
        let w = |args: Vec<i64>| Term::compound("w", args.into_iter().map(Term::Int).collect());
        assert!(w(vec![1, 2]) < w(vec![1, 3]));
        assert!(w(vec![9]) < w(vec![1, 1]));
        assert!(Term::compound("v", vec![Term::Int(9)]) < w(vec![0]));
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        let t = Term::binary(
            BinOp::Mul,
            Term::binary(BinOp::Add, Term::sym("x"), Term::Int(1)),
            Term::sym("y"),
        );
        assert_eq!(t.to_string(), "(x + 1) * y");
        let u = Term::binary(
            BinOp::Sub,
            Term::sym("a"),
            Term::binary(BinOp::Sub, Term::sym("b"), Term::sym("c")),
        );
        assert_eq!(u.to_string(), "a - (b - c)");
    }

    #[test]
    fn infix_rendering_of_canonical_functors() {
        let t = Term::compound("geq", vec![Term::sym("x"), Term::Int(12)]);
        assert_eq!(t.to_infix(), "x >= 12");
        let u = Term::compound(
            "eq",
            vec![
                Term::compound(
                    "minus",
                    vec![
                        Term::compound("age", vec![Term::Int(1)]),
                        Term::compound("age", vec![Term::Int(2)]),
                    ],
                ),
                Term::Int(3),
            ],
        );
        assert_eq!(u.to_infix(), "age(1) - age(2) = 3");
    }
}

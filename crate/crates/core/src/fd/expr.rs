use std::fmt;

use super::FdError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
}

impl CmpOp {
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Neq => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Leq => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Geq => a >= b,
        }
    }

    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Neq,
            CmpOp::Neq => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Geq,
            CmpOp::Leq => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Leq,
            CmpOp::Geq => CmpOp::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Neq => "!=",
            CmpOp::Lt => "<",
            CmpOp::Leq => "<=",
            CmpOp::Gt => ">",
            CmpOp::Geq => ">=",
        }
    }

    /// Canonical functor name, as produced by the pre-processor.
    pub fn from_functor(name: &str) -> Option<CmpOp> {
        Some(match name {
            "eq" => CmpOp::Eq,
            "neq" => CmpOp::Neq,
            "lt" => CmpOp::Lt,
            "leq" => CmpOp::Leq,
            "gt" => CmpOp::Gt,
            "geq" => CmpOp::Geq,
            _ => return None,
        })
    }
}

/// Integer expression over variables numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntExpr {
    Const(i64),
    Var(usize),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    /// Truncating division.
    Div(Box<IntExpr>, Box<IntExpr>),
    Neg(Box<IntExpr>),
}

impl IntExpr {
    pub fn var(i: usize) -> IntExpr {
        IntExpr::Var(i)
    }

    pub fn add(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Mul(Box::new(a), Box::new(b))
    }

    /// Value under a total evaluation; `None` when undefined (division by
    /// zero or overflow).
    pub fn eval(&self, e: &[i64]) -> Option<i64> {
        match self {
            IntExpr::Const(c) => Some(*c),
            IntExpr::Var(v) => Some(e[*v]),
            IntExpr::Add(a, b) => a.eval(e)?.checked_add(b.eval(e)?),
            IntExpr::Sub(a, b) => a.eval(e)?.checked_sub(b.eval(e)?),
            IntExpr::Mul(a, b) => a.eval(e)?.checked_mul(b.eval(e)?),
            IntExpr::Div(a, b) => a.eval(e)?.checked_div(b.eval(e)?),
            IntExpr::Neg(a) => a.eval(e)?.checked_neg(),
        }
    }

    pub fn vars(&self, out: &mut Vec<usize>) {
        match self {
            IntExpr::Const(_) => {}
            IntExpr::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            IntExpr::Add(a, b) | IntExpr::Sub(a, b) | IntExpr::Mul(a, b) | IntExpr::Div(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            IntExpr::Neg(a) => a.vars(out),
        }
    }

    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> IntExpr {
        match self {
            IntExpr::Const(c) => IntExpr::Const(*c),
            IntExpr::Var(v) => IntExpr::Var(f(*v)),
            IntExpr::Add(a, b) => IntExpr::add(a.map_vars(f), b.map_vars(f)),
            IntExpr::Sub(a, b) => IntExpr::sub(a.map_vars(f), b.map_vars(f)),
            IntExpr::Mul(a, b) => IntExpr::mul(a.map_vars(f), b.map_vars(f)),
            IntExpr::Div(a, b) => IntExpr::Div(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            IntExpr::Neg(a) => IntExpr::Neg(Box::new(a.map_vars(f))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            IntExpr::Add(..) | IntExpr::Sub(..) => 1,
            IntExpr::Mul(..) | IntExpr::Div(..) => 2,
            IntExpr::Neg(_) => 3,
            IntExpr::Const(c) if *c < 0 => 3,
            _ => 4,
        }
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        let wrap = |e: &IntExpr, min: u8| {
            let s = e.render(names);
            if e.precedence() < min {
                format!("({s})")
            } else {
                s
            }
        };
        match self {
            IntExpr::Const(c) => c.to_string(),
            IntExpr::Var(v) => names(*v),
            IntExpr::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
            IntExpr::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
            IntExpr::Mul(a, b) => format!("{} * {}", wrap(a, 2), wrap(b, 3)),
            IntExpr::Div(a, b) => format!("{} / {}", wrap(a, 2), wrap(b, 3)),
            IntExpr::Neg(a) => format!("-{}", wrap(a, 4)),
        }
    }
}

/// Global constraints; list positions are 1-based where indices appear.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Global {
    AllDifferent(Vec<IntExpr>),
    AllDistinct(Vec<IntExpr>),
    Assignment(Vec<IntExpr>, Vec<IntExpr>),
    Circuit(Vec<IntExpr>),
    Count {
        value: IntExpr,
        list: Vec<IntExpr>,
        op: CmpOp,
        rhs: IntExpr,
    },
    Cumulative {
        starts: Vec<IntExpr>,
        durations: Vec<i64>,
        resources: Vec<i64>,
        limit: IntExpr,
    },
    Disjoint2 {
        x: Vec<IntExpr>,
        w: Vec<i64>,
        y: Vec<IntExpr>,
        h: Vec<i64>,
    },
    Element {
        index: IntExpr,
        list: Vec<IntExpr>,
        value: IntExpr,
    },
    Minimum(IntExpr, Vec<IntExpr>),
    Maximum(IntExpr, Vec<IntExpr>),
    ScalarProduct {
        coeffs: Vec<i64>,
        list: Vec<IntExpr>,
        op: CmpOp,
        rhs: IntExpr,
    },
    Serialized {
        starts: Vec<IntExpr>,
        durations: Vec<i64>,
    },
    Sum {
        list: Vec<IntExpr>,
        op: CmpOp,
        rhs: IntExpr,
    },
}

fn all_defined(xs: &[IntExpr], e: &[i64]) -> Option<Vec<i64>> {
    xs.iter().map(|x| x.eval(e)).collect()
}

fn disjoint_1d(a: i64, da: i64, b: i64, db: i64) -> bool {
    let (a, da, b, db) = (a as i128, da as i128, b as i128, db as i128);
    a + da <= b || b + db <= a
}

impl Global {
    pub fn name(&self) -> &'static str {
        match self {
            Global::AllDifferent(_) => "all_different",
            Global::AllDistinct(_) => "all_distinct",
            Global::Assignment(..) => "assignment",
            Global::Circuit(_) => "circuit",
            Global::Count { .. } => "count",
            Global::Cumulative { .. } => "cumulative",
            Global::Disjoint2 { .. } => "disjoint2",
            Global::Element { .. } => "element",
            Global::Minimum(..) => "minimum",
            Global::Maximum(..) => "maximum",
            Global::ScalarProduct { .. } => "scalar_product",
            Global::Serialized { .. } => "serialized",
            Global::Sum { .. } => "sum",
        }
    }

    /// Ground-truth semantics under a total evaluation.
    pub fn satisfied(&self, e: &[i64]) -> bool {
        self.check(e).unwrap_or(false)
    }

    fn check(&self, e: &[i64]) -> Option<bool> {
        Some(match self {
            Global::AllDifferent(xs) | Global::AllDistinct(xs) => {
                let v = all_defined(xs, e)?;
                (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
            }
            Global::Assignment(xs, ys) => {
                let (x, y) = (all_defined(xs, e)?, all_defined(ys, e)?);
                let n = x.len() as i64;
                x.len() == y.len()
                    && x.iter().chain(&y).all(|&v| (1..=n).contains(&v))
                    && (0..x.len()).all(|i| y[(x[i] - 1) as usize] == i as i64 + 1)
            }
            Global::Circuit(xs) => {
                let v = all_defined(xs, e)?;
                let n = v.len();
                if n == 0 || v.iter().any(|&s| s < 1 || s > n as i64) {
                    return Some(false);
                }
                // a permutation consisting of exactly one cycle through all nodes
                let mut seen = vec![false; n];
                let mut cur = 0usize;
                for _ in 0..n {
                    if seen[cur] {
                        return Some(false);
                    }
                    seen[cur] = true;
                    cur = (v[cur] - 1) as usize;
                }
                cur == 0
            }
            Global::Count {
                value,
                list,
                op,
                rhs,
            } => {
                let m = value.eval(e)?;
                let c = all_defined(list, e)?.iter().filter(|&&x| x == m).count() as i64;
                op.holds(c, rhs.eval(e)?)
            }
            Global::Cumulative {
                starts,
                durations,
                resources,
                limit,
            } => {
                let s = all_defined(starts, e)?;
                let l = limit.eval(e)?;
                // peak usage is reached at the start of some running task
                let active = |j: usize, t: i64| {
                    s[j] <= t && (t as i128) < s[j] as i128 + durations[j] as i128
                };
                (0..s.len()).filter(|&i| durations[i] > 0).all(|i| {
                    let used: i128 = (0..s.len())
                        .filter(|&j| active(j, s[i]))
                        .map(|j| resources[j] as i128)
                        .sum();
                    used <= l as i128
                })
            }
            Global::Disjoint2 { x, w, y, h } => {
                let (x, y) = (all_defined(x, e)?, all_defined(y, e)?);
                (0..x.len()).all(|i| {
                    (i + 1..x.len()).all(|j| {
                        disjoint_1d(x[i], w[i], x[j], w[j]) || disjoint_1d(y[i], h[i], y[j], h[j])
                    })
                })
            }
            Global::Element { index, list, value } => {
                let i = index.eval(e)?;
                if i < 1 || i > list.len() as i64 {
                    return Some(false);
                }
                list[(i - 1) as usize].eval(e)? == value.eval(e)?
            }
            Global::Minimum(m, xs) => {
                let v = all_defined(xs, e)?;
                v.iter().min() == Some(&m.eval(e)?)
            }
            Global::Maximum(m, xs) => {
                let v = all_defined(xs, e)?;
                v.iter().max() == Some(&m.eval(e)?)
            }
            Global::ScalarProduct {
                coeffs,
                list,
                op,
                rhs,
            } => {
                let v = all_defined(list, e)?;
                let mut p: i64 = 0;
                for (c, x) in coeffs.iter().zip(&v) {
                    p = p.checked_add(c.checked_mul(*x)?)?;
                }
                op.holds(p, rhs.eval(e)?)
            }
            Global::Serialized { starts, durations } => {
                let s = all_defined(starts, e)?;
                (0..s.len()).all(|i| {
                    (i + 1..s.len()).all(|j| disjoint_1d(s[i], durations[i], s[j], durations[j]))
                })
            }
            Global::Sum { list, op, rhs } => {
                let v = all_defined(list, e)?;
                let mut p: i64 = 0;
                for x in v {
                    p = p.checked_add(x)?;
                }
                op.holds(p, rhs.eval(e)?)
            }
        })
    }

    pub fn exprs(&self) -> Vec<&IntExpr> {
        match self {
            Global::AllDifferent(xs) | Global::AllDistinct(xs) | Global::Circuit(xs) => {
                xs.iter().collect()
            }
            Global::Assignment(xs, ys) => xs.iter().chain(ys).collect(),
            Global::Count {
                value, list, rhs, ..
            } => std::iter::once(value)
                .chain(list)
                .chain(std::iter::once(rhs))
                .collect(),
            Global::Cumulative { starts, limit, .. } => {
                starts.iter().chain(std::iter::once(limit)).collect()
            }
            Global::Disjoint2 { x, y, .. } => x.iter().chain(y).collect(),
            Global::Element { index, list, value } => std::iter::once(index)
                .chain(list)
                .chain(std::iter::once(value))
                .collect(),
            Global::Minimum(m, xs) | Global::Maximum(m, xs) => {
                std::iter::once(m).chain(xs).collect()
            }
            Global::ScalarProduct { list, rhs, .. } | Global::Sum { list, rhs, .. } => {
                list.iter().chain(std::iter::once(rhs)).collect()
            }
            Global::Serialized { starts, .. } => starts.iter().collect(),
        }
    }

    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> Global {
        let m = |xs: &[IntExpr]| xs.iter().map(|x| x.map_vars(f)).collect::<Vec<_>>();
        match self {
            Global::AllDifferent(xs) => Global::AllDifferent(m(xs)),
            Global::AllDistinct(xs) => Global::AllDistinct(m(xs)),
            Global::Assignment(xs, ys) => Global::Assignment(m(xs), m(ys)),
            Global::Circuit(xs) => Global::Circuit(m(xs)),
            Global::Count {
                value,
                list,
                op,
                rhs,
            } => Global::Count {
                value: value.map_vars(f),
                list: m(list),
                op: *op,
                rhs: rhs.map_vars(f),
            },
            Global::Cumulative {
                starts,
                durations,
                resources,
                limit,
            } => Global::Cumulative {
                starts: m(starts),
                durations: durations.clone(),
                resources: resources.clone(),
                limit: limit.map_vars(f),
            },
            Global::Disjoint2 { x, w, y, h } => Global::Disjoint2 {
                x: m(x),
                w: w.clone(),
                y: m(y),
                h: h.clone(),
            },
            Global::Element { index, list, value } => Global::Element {
                index: index.map_vars(f),
                list: m(list),
                value: value.map_vars(f),
            },
            Global::Minimum(x, xs) => Global::Minimum(x.map_vars(f), m(xs)),
            Global::Maximum(x, xs) => Global::Maximum(x.map_vars(f), m(xs)),
            Global::ScalarProduct {
                coeffs,
                list,
                op,
                rhs,
            } => Global::ScalarProduct {
                coeffs: coeffs.clone(),
                list: m(list),
                op: *op,
                rhs: rhs.map_vars(f),
            },
            Global::Serialized { starts, durations } => Global::Serialized {
                starts: m(starts),
                durations: durations.clone(),
            },
            Global::Sum { list, op, rhs } => Global::Sum {
                list: m(list),
                op: *op,
                rhs: rhs.map_vars(f),
            },
        }
    }

    fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        let list = |xs: &[IntExpr]| {
            format!(
                "[{}]",
                xs.iter()
                    .map(|x| x.render(names))
                    .collect::<Vec<_>>()
                    .join(",")
            )
        };
        let ints = |xs: &[i64]| {
            format!(
                "[{}]",
                xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            )
        };
        let args = match self {
            Global::AllDifferent(xs) | Global::AllDistinct(xs) | Global::Circuit(xs) => list(xs),
            Global::Assignment(xs, ys) => format!("{},{}", list(xs), list(ys)),
            Global::Count {
                value,
                list: xs,
                op,
                rhs,
            } => {
                format!(
                    "{},{},{},{}",
                    value.render(names),
                    list(xs),
                    op.symbol(),
                    rhs.render(names)
                )
            }
            Global::Cumulative {
                starts,
                durations,
                resources,
                limit,
            } => {
                format!(
                    "{},{},{},{}",
                    list(starts),
                    ints(durations),
                    ints(resources),
                    limit.render(names)
                )
            }
            Global::Disjoint2 { x, w, y, h } => {
                format!("{},{},{},{}", list(x), ints(w), list(y), ints(h))
            }
            Global::Element {
                index,
                list: xs,
                value,
            } => {
                format!(
                    "{},{},{}",
                    index.render(names),
                    list(xs),
                    value.render(names)
                )
            }
            Global::Minimum(m, xs) | Global::Maximum(m, xs) => {
                format!("{},{}", m.render(names), list(xs))
            }
            Global::ScalarProduct {
                coeffs,
                list: xs,
                op,
                rhs,
            } => {
                format!(
                    "{},{},{},{}",
                    ints(coeffs),
                    list(xs),
                    op.symbol(),
                    rhs.render(names)
                )
            }
            Global::Serialized { starts, durations } => {
                format!("{},{}", list(starts), ints(durations))
            }
            Global::Sum { list: xs, op, rhs } => {
                format!("{},{},{}", list(xs), op.symbol(), rhs.render(names))
            }
        };
        format!("{}({args})", self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Xor,
    Implies,
    Equiv,
}

impl Connective {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Connective::And => a && b,
            Connective::Or => a || b,
            Connective::Xor => a != b,
            Connective::Implies => !a || b,
            Connective::Equiv => a == b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Xor => "xor",
            Connective::Implies => "->",
            Connective::Equiv => "<->",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintExpr {
    Cmp(CmpOp, IntExpr, IntExpr),
    Not(Box<ConstraintExpr>),
    Bin(Connective, Box<ConstraintExpr>, Box<ConstraintExpr>),
    Global(Global),
}

impl ConstraintExpr {
    pub fn cmp(op: CmpOp, a: IntExpr, b: IntExpr) -> ConstraintExpr {
        ConstraintExpr::Cmp(op, a, b)
    }

    pub fn bin(c: Connective, a: ConstraintExpr, b: ConstraintExpr) -> ConstraintExpr {
        ConstraintExpr::Bin(c, Box::new(a), Box::new(b))
    }

    /// Truth under a total evaluation. Undefined arithmetic makes a
    /// comparison false.
    pub fn satisfied(&self, e: &[i64]) -> bool {
        match self {
            ConstraintExpr::Cmp(op, a, b) => match (a.eval(e), b.eval(e)) {
                (Some(x), Some(y)) => op.holds(x, y),
                _ => false,
            },
            ConstraintExpr::Not(a) => !a.satisfied(e),
            ConstraintExpr::Bin(c, a, b) => c.apply(a.satisfied(e), b.satisfied(e)),
            ConstraintExpr::Global(g) => g.satisfied(e),
        }
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self, ConstraintExpr::Cmp(..))
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            ConstraintExpr::Cmp(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
            ConstraintExpr::Not(a) => a.collect_vars(out),
            ConstraintExpr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            ConstraintExpr::Global(g) => g.exprs().into_iter().for_each(|x| x.vars(out)),
        }
    }

    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> ConstraintExpr {
        match self {
            ConstraintExpr::Cmp(op, a, b) => ConstraintExpr::Cmp(*op, a.map_vars(f), b.map_vars(f)),
            ConstraintExpr::Not(a) => ConstraintExpr::Not(Box::new(a.map_vars(f))),
            ConstraintExpr::Bin(c, a, b) => ConstraintExpr::bin(*c, a.map_vars(f), b.map_vars(f)),
            ConstraintExpr::Global(g) => ConstraintExpr::Global(g.map_vars(f)),
        }
    }

    /// Infix rendering with the given variable names.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        match self {
            ConstraintExpr::Cmp(op, a, b) => {
                format!("{} {} {}", a.render(names), op.symbol(), b.render(names))
            }
            ConstraintExpr::Not(a) => format!("!({})", a.render(names)),
            ConstraintExpr::Bin(c, a, b) => {
                format!("({}) {} ({})", a.render(names), c.symbol(), b.render(names))
            }
            ConstraintExpr::Global(g) => g.render(names),
        }
    }
}

impl fmt::Display for ConstraintExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|v| format!("X{v}")))
    }
}

/// The complement of a primitive comparison, e.g. `x < 12` to `x >= 12`.
pub fn complement(c: &ConstraintExpr) -> Result<ConstraintExpr, FdError> {
    match c {
        ConstraintExpr::Cmp(op, a, b) => Ok(ConstraintExpr::Cmp(op.negate(), a.clone(), b.clone())),
        other => Err(FdError::ComplementUnsupported(other.to_string())),
    }
}

//! Interval reasoning over expression trees: forward evaluation, HC4-style
//! backward narrowing, and entailment status for reified connectives.

use super::domain::Domain;
use super::expr::{CmpOp, Connective, ConstraintExpr, IntExpr};
use super::Fail;

const INF: i128 = 1 << 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Iv {
    pub lo: i128,
    pub hi: i128,
}

impl Iv {
    fn new(lo: i128, hi: i128) -> Option<Iv> {
        (lo <= hi).then_some(Iv {
            lo: lo.max(-INF),
            hi: hi.min(INF),
        })
    }

    fn point(v: i128) -> Iv {
        Iv { lo: v, hi: v }
    }

    fn hull(a: Option<Iv>, b: Option<Iv>) -> Option<Iv> {
        match (a, b) {
            (Some(a), Some(b)) => Some(Iv {
                lo: a.lo.min(b.lo),
                hi: a.hi.max(b.hi),
            }),
            (x, None) | (None, x) => x,
        }
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn contains_zero(&self) -> bool {
        self.lo <= 0 && 0 <= self.hi
    }
}

/// Forward evaluation result: the value hull of the defined points and
/// whether every point is defined.
#[derive(Clone, Copy, Debug)]
pub struct Fw {
    pub iv: Option<Iv>,
    pub total: bool,
}

fn corners(a: Iv, b: Iv, f: impl Fn(i128, i128) -> i128) -> Iv {
    let c = [f(a.lo, b.lo), f(a.lo, b.hi), f(a.hi, b.lo), f(a.hi, b.hi)];
    Iv {
        lo: *c.iter().min().expect("4 corners"),
        hi: *c.iter().max().expect("4 corners"),
    }
}

fn clamp_mul(x: i128, y: i128) -> i128 {
    x.saturating_mul(y).clamp(-INF, INF)
}

/// Truncating quotient hull over the non-zero part of the divisor.
fn div_hull(a: Iv, b: Iv) -> Option<Iv> {
    let neg = Iv::new(b.lo, b.hi.min(-1));
    let pos = Iv::new(b.lo.max(1), b.hi);
    let part = |d: Option<Iv>| d.map(|d| corners(a, d, |x, y| x / y));
    Iv::hull(part(neg), part(pos))
}

pub fn forward(e: &IntExpr, d: &[Domain]) -> Fw {
    match e {
        IntExpr::Const(c) => Fw {
            iv: Some(Iv::point(*c as i128)),
            total: true,
        },
        IntExpr::Var(v) => {
            let dom = &d[*v];
            let iv = (!dom.is_empty()).then(|| Iv {
                lo: dom.min() as i128,
                hi: dom.max() as i128,
            });
            Fw { iv, total: true }
        }
        IntExpr::Neg(a) => {
            let fa = forward(a, d);
            Fw {
                iv: fa.iv.map(|i| Iv {
                    lo: -i.hi,
                    hi: -i.lo,
                }),
                total: fa.total,
            }
        }
        IntExpr::Add(a, b) | IntExpr::Sub(a, b) | IntExpr::Mul(a, b) | IntExpr::Div(a, b) => {
            let (fa, fb) = (forward(a, d), forward(b, d));
            let total = fa.total && fb.total;
            let (Some(x), Some(y)) = (fa.iv, fb.iv) else {
                return Fw { iv: None, total };
            };
            let (iv, total) = match e {
                IntExpr::Add(..) => (Iv::new(x.lo + y.lo, x.hi + y.hi), total),
                IntExpr::Sub(..) => (Iv::new(x.lo - y.hi, x.hi - y.lo), total),
                IntExpr::Mul(..) => (Some(corners(x, y, clamp_mul)), total),
                _ => (div_hull(x, y), total && !y.contains_zero()),
            };
            // values outside i64 overflow and are undefined
            let total =
                total && iv.is_none_or(|i| i.lo >= i64::MIN as i128 && i.hi <= i64::MAX as i128);
            Fw { iv, total }
        }
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

/// Integers `x` with `x * y ∈ t` for some `y ∈ d`, where `d` excludes zero.
fn quotient_range(t: Iv, d: Iv) -> Option<Iv> {
    let lo = [
        div_ceil(t.lo, d.lo),
        div_ceil(t.lo, d.hi),
        div_ceil(t.hi, d.lo),
        div_ceil(t.hi, d.hi),
    ];
    let hi = [
        div_floor(t.lo, d.lo),
        div_floor(t.lo, d.hi),
        div_floor(t.hi, d.lo),
        div_floor(t.hi, d.hi),
    ];
    Iv::new(*lo.iter().min().expect("4"), *hi.iter().max().expect("4"))
}

/// Narrow the variables of `e` so that its value can lie in `target`.
pub fn backward(e: &IntExpr, target: Iv, d: &mut [Domain]) -> Result<bool, Fail> {
    match e {
        IntExpr::Const(c) => {
            if target.lo <= *c as i128 && *c as i128 <= target.hi {
                Ok(false)
            } else {
                Err(Fail)
            }
        }
        IntExpr::Var(v) => {
            let lo = target.lo.max(i64::MIN as i128) as i64;
            let hi = target.hi.min(i64::MAX as i128) as i64;
            let changed = d[*v].restrict(lo, hi);
            if d[*v].is_empty() {
                Err(Fail)
            } else {
                Ok(changed)
            }
        }
        IntExpr::Neg(a) => backward(
            a,
            Iv {
                lo: -target.hi,
                hi: -target.lo,
            },
            d,
        ),
        IntExpr::Add(a, b) => {
            let ib = forward(b, d).iv.ok_or(Fail)?;
            let mut changed = backward(
                a,
                Iv::new(target.lo - ib.hi, target.hi - ib.lo).ok_or(Fail)?,
                d,
            )?;
            let ia = forward(a, d).iv.ok_or(Fail)?;
            changed |= backward(
                b,
                Iv::new(target.lo - ia.hi, target.hi - ia.lo).ok_or(Fail)?,
                d,
            )?;
            Ok(changed)
        }
        IntExpr::Sub(a, b) => {
            let ib = forward(b, d).iv.ok_or(Fail)?;
            let mut changed = backward(
                a,
                Iv::new(target.lo + ib.lo, target.hi + ib.hi).ok_or(Fail)?,
                d,
            )?;
            let ia = forward(a, d).iv.ok_or(Fail)?;
            changed |= backward(
                b,
                Iv::new(ia.lo - target.hi, ia.hi - target.lo).ok_or(Fail)?,
                d,
            )?;
            Ok(changed)
        }
        IntExpr::Mul(a, b) => {
            let mut changed = false;
            let ib = forward(b, d).iv.ok_or(Fail)?;
            if !ib.contains_zero() && target.lo > -INF && target.hi < INF {
                changed |= backward(a, quotient_range(target, ib).ok_or(Fail)?, d)?;
            }
            let ia = forward(a, d).iv.ok_or(Fail)?;
            if !ia.contains_zero() && target.lo > -INF && target.hi < INF {
                changed |= backward(b, quotient_range(target, ia).ok_or(Fail)?, d)?;
            }
            Ok(changed)
        }
        IntExpr::Div(..) => Ok(false),
    }
}

/// Entailment status of a (non-global) formula: `Some(true)` if every
/// completion satisfies it, `Some(false)` if none does.
pub fn status(c: &ConstraintExpr, d: &[Domain]) -> Option<bool> {
    match c {
        ConstraintExpr::Cmp(op, a, b) => {
            let (fa, fb) = (forward(a, d), forward(b, d));
            let (Some(x), Some(y)) = (fa.iv, fb.iv) else {
                return Some(false);
            };
            let (t, f) = match op {
                CmpOp::Eq => (
                    x.is_point() && y.is_point() && x.lo == y.lo,
                    x.hi < y.lo || y.hi < x.lo,
                ),
                CmpOp::Neq => (
                    x.hi < y.lo || y.hi < x.lo,
                    x.is_point() && y.is_point() && x.lo == y.lo,
                ),
                CmpOp::Lt => (x.hi < y.lo, x.lo >= y.hi),
                CmpOp::Leq => (x.hi <= y.lo, x.lo > y.hi),
                CmpOp::Gt => (x.lo > y.hi, x.hi <= y.lo),
                CmpOp::Geq => (x.lo >= y.hi, x.hi < y.lo),
            };
            if f {
                Some(false)
            } else if t && fa.total && fb.total {
                Some(true)
            } else {
                None
            }
        }
        ConstraintExpr::Not(a) => status(a, d).map(|v| !v),
        ConstraintExpr::Bin(conn, a, b) => {
            let (sa, sb) = (status(a, d), status(b, d));
            match (conn, sa, sb) {
                (_, Some(x), Some(y)) => Some(conn.apply(x, y)),
                (Connective::And, Some(false), _) | (Connective::And, _, Some(false)) => {
                    Some(false)
                }
                (Connective::Or, Some(true), _) | (Connective::Or, _, Some(true)) => Some(true),
                (Connective::Implies, Some(false), _) | (Connective::Implies, _, Some(true)) => {
                    Some(true)
                }
                _ => None,
            }
        }
        ConstraintExpr::Global(_) => None,
    }
}

fn enforce_cmp(op: CmpOp, a: &IntExpr, b: &IntExpr, d: &mut [Domain]) -> Result<bool, Fail> {
    let ia = forward(a, d).iv.ok_or(Fail)?;
    let ib = forward(b, d).iv.ok_or(Fail)?;
    let mut changed = false;
    match op {
        CmpOp::Eq => {
            changed |= backward(a, ib, d)?;
            let ia = forward(a, d).iv.ok_or(Fail)?;
            changed |= backward(b, ia, d)?;
        }
        CmpOp::Neq => {
            if ia.is_point() && ib.is_point() && ia.lo == ib.lo {
                return Err(Fail);
            }
            for (x, other) in [(a, ib), (b, ia)] {
                if let (IntExpr::Var(v), true) = (x, other.is_point()) {
                    if let Ok(val) = i64::try_from(other.lo) {
                        changed |= d[*v].remove(val);
                        if d[*v].is_empty() {
                            return Err(Fail);
                        }
                    }
                }
            }
        }
        CmpOp::Lt | CmpOp::Leq => {
            let k = if op == CmpOp::Lt { 1 } else { 0 };
            changed |= backward(
                a,
                Iv {
                    lo: -INF,
                    hi: ib.hi - k,
                },
                d,
            )?;
            let ia = forward(a, d).iv.ok_or(Fail)?;
            changed |= backward(
                b,
                Iv {
                    lo: ia.lo + k,
                    hi: INF,
                },
                d,
            )?;
        }
        CmpOp::Gt | CmpOp::Geq => {
            return enforce_cmp(
                if op == CmpOp::Gt {
                    CmpOp::Lt
                } else {
                    CmpOp::Leq
                },
                b,
                a,
                d,
            )
        }
    }
    Ok(changed)
}

/// Prune domains so that `c` can take truth value `val`.
pub fn enforce(c: &ConstraintExpr, val: bool, d: &mut [Domain]) -> Result<bool, Fail> {
    match c {
        ConstraintExpr::Cmp(op, a, b) if val => enforce_cmp(*op, a, b, d),
        ConstraintExpr::Cmp(op, a, b) => {
            // a false comparison may also be one with undefined arithmetic
            if forward(a, d).total && forward(b, d).total {
                enforce_cmp(op.negate(), a, b, d)
            } else {
                Ok(false)
            }
        }
        ConstraintExpr::Not(a) => enforce(a, !val, d),
        ConstraintExpr::Bin(conn, a, b) => {
            let (sa, sb) = (status(a, d), status(b, d));
            if let (Some(x), Some(y)) = (sa, sb) {
                return if conn.apply(x, y) == val {
                    Ok(false)
                } else {
                    Err(Fail)
                };
            }
            // normalise to the cases below
            match (conn, val) {
                (Connective::And, true) => Ok(enforce(a, true, d)? | enforce(b, true, d)?),
                (Connective::Or, false) => Ok(enforce(a, false, d)? | enforce(b, false, d)?),
                (Connective::Implies, false) => Ok(enforce(a, true, d)? | enforce(b, false, d)?),
                (Connective::And, false) => match (sa, sb) {
                    (Some(true), _) => enforce(b, false, d),
                    (_, Some(true)) => enforce(a, false, d),
                    _ => Ok(false),
                },
                (Connective::Or, true) => match (sa, sb) {
                    (Some(false), _) => enforce(b, true, d),
                    (_, Some(false)) => enforce(a, true, d),
                    _ => Ok(false),
                },
                (Connective::Implies, true) => match (sa, sb) {
                    (Some(true), _) => enforce(b, true, d),
                    (_, Some(false)) => enforce(a, false, d),
                    _ => Ok(false),
                },
                (Connective::Equiv, _) | (Connective::Xor, _) => {
                    let same = (*conn == Connective::Equiv) == val;
                    match (sa, sb) {
                        (Some(x), _) => enforce(b, if same { x } else { !x }, d),
                        (_, Some(y)) => enforce(a, if same { y } else { !y }, d),
                        _ => Ok(false),
                    }
                }
            }
        }
        ConstraintExpr::Global(_) => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::expr::IntExpr as E;

    fn doms(rs: &[(i64, i64)]) -> Vec<Domain> {
        rs.iter().map(|&(l, h)| Domain::range(l, h)).collect()
    }

    #[test]
    fn lower_bound_tightening() {
        let mut d = doms(&[(0, 23)]);
        let c = ConstraintExpr::cmp(CmpOp::Geq, E::var(0), E::Const(12));
        enforce(&c, true, &mut d).unwrap();
        assert_eq!((d[0].min(), d[0].max()), (12, 23));
    }

    #[test]
    fn linear_sum_bounds() {
        // x + y = 10, x in 0..3, y in 0..9  =>  x in 1..3, y in 7..9
        let mut d = doms(&[(0, 3), (0, 9)]);
        let c = ConstraintExpr::cmp(CmpOp::Eq, E::add(E::var(0), E::var(1)), E::Const(10));
        enforce(&c, true, &mut d).unwrap();
        enforce(&c, true, &mut d).unwrap();
        assert_eq!(
            (d[0].min(), d[0].max(), d[1].min(), d[1].max()),
            (1, 3, 7, 9)
        );
    }

    #[test]
    fn multiplication_backward() {
        // 2 * x = y, y in 7..9  =>  x = 4
        let mut d = doms(&[(0, 100), (7, 9)]);
        let c = ConstraintExpr::cmp(CmpOp::Eq, E::mul(E::Const(2), E::var(0)), E::var(1));
        enforce(&c, true, &mut d).unwrap();
        assert_eq!((d[0].min(), d[0].max()), (4, 4));
    }

    #[test]
    fn reified_or_propagates_when_one_side_fails() {
        // x >= 5 \/ y >= 5 with x in 0..3
        let mut d = doms(&[(0, 3), (0, 9)]);
        let c = ConstraintExpr::bin(
            Connective::Or,
            ConstraintExpr::cmp(CmpOp::Geq, E::var(0), E::Const(5)),
            ConstraintExpr::cmp(CmpOp::Geq, E::var(1), E::Const(5)),
        );
        enforce(&c, true, &mut d).unwrap();
        assert_eq!(d[1].min(), 5);
    }

    #[test]
    fn division_by_possible_zero_is_not_entailed() {
        let d = doms(&[(0, 5), (0, 1)]);
        let c = ConstraintExpr::cmp(
            CmpOp::Lt,
            IntExpr::Div(Box::new(E::var(0)), Box::new(E::var(1))),
            E::Const(100),
        );
        assert_eq!(status(&c, &d), None);
    }
}

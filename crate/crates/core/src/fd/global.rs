//! Filtering for the global constraints that are not decomposed into
//! formulas. Soundness only; completeness comes from leaf checks.

use super::domain::Domain;
use super::expr::{CmpOp, Global, IntExpr};
use super::Fail;

fn dom(x: &IntExpr, d: &[Domain]) -> Domain {
    match x {
        IntExpr::Var(v) => d[*v].clone(),
        IntExpr::Const(c) => Domain::singleton(*c),
        _ => unreachable!("global arguments are variables or integers"),
    }
}

fn lo(x: &IntExpr, d: &[Domain]) -> i64 {
    match x {
        IntExpr::Var(v) => d[*v].min(),
        IntExpr::Const(c) => *c,
        _ => unreachable!("global arguments are variables or integers"),
    }
}

fn hi(x: &IntExpr, d: &[Domain]) -> i64 {
    match x {
        IntExpr::Var(v) => d[*v].max(),
        IntExpr::Const(c) => *c,
        _ => unreachable!("global arguments are variables or integers"),
    }
}

fn fixed(x: &IntExpr, d: &[Domain]) -> Option<i64> {
    match x {
        IntExpr::Var(v) => d[*v].value(),
        IntExpr::Const(c) => Some(*c),
        _ => None,
    }
}

fn contains(x: &IntExpr, d: &[Domain], v: i64) -> bool {
    match x {
        IntExpr::Var(i) => d[*i].contains(v),
        IntExpr::Const(c) => *c == v,
        _ => true,
    }
}

fn check(dom: &Domain, changed: bool) -> Result<bool, Fail> {
    if dom.is_empty() {
        Err(Fail)
    } else {
        Ok(changed)
    }
}

fn remove(x: &IntExpr, v: i64, d: &mut [Domain]) -> Result<bool, Fail> {
    match x {
        IntExpr::Var(i) => {
            let c = d[*i].remove(v);
            check(&d[*i], c)
        }
        IntExpr::Const(c) if *c == v => Err(Fail),
        _ => Ok(false),
    }
}

fn remove_range(x: &IntExpr, a: i64, b: i64, d: &mut [Domain]) -> Result<bool, Fail> {
    match x {
        IntExpr::Var(i) => {
            let c = d[*i].remove_range(a, b);
            check(&d[*i], c)
        }
        IntExpr::Const(c) if a <= *c && *c <= b => Err(Fail),
        _ => Ok(false),
    }
}

fn restrict(x: &IntExpr, a: i64, b: i64, d: &mut [Domain]) -> Result<bool, Fail> {
    match x {
        IntExpr::Var(i) => {
            let c = d[*i].restrict(a, b);
            check(&d[*i], c)
        }
        IntExpr::Const(c) if *c < a || *c > b => Err(Fail),
        _ => Ok(false),
    }
}

fn intersect(x: &IntExpr, other: &Domain, d: &mut [Domain]) -> Result<bool, Fail> {
    match x {
        IntExpr::Var(i) => {
            let c = d[*i].intersect(other);
            check(&d[*i], c)
        }
        IntExpr::Const(c) if !other.contains(*c) => Err(Fail),
        _ => Ok(false),
    }
}

fn set(x: &IntExpr, v: i64, d: &mut [Domain]) -> Result<bool, Fail> {
    restrict(x, v, v, d)
}

fn all_different(xs: &[IntExpr], d: &mut [Domain]) -> Result<bool, Fail> {
    let mut changed = false;
    let mut again = true;
    let mut done = vec![false; xs.len()];
    while again {
        again = false;
        for i in 0..xs.len() {
            if done[i] {
                continue;
            }
            if let Some(v) = fixed(&xs[i], d) {
                done[i] = true;
                for (j, y) in xs.iter().enumerate() {
                    if j != i && remove(y, v, d)? {
                        changed = true;
                        again = true;
                    }
                }
            }
        }
    }
    Ok(changed)
}

/// Hall intervals: a window holding as many operands as values is closed
/// to every other operand.
fn hall_intervals(xs: &[IntExpr], d: &mut [Domain]) -> Result<bool, Fail> {
    let mut changed = false;
    let bounds: Vec<(i64, i64)> = xs.iter().map(|x| (lo(x, d), hi(x, d))).collect();
    let mut los: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    let mut his: Vec<i64> = bounds.iter().map(|b| b.1).collect();
    los.sort_unstable();
    los.dedup();
    his.sort_unstable();
    his.dedup();
    for &a in &los {
        for &b in &his {
            if b < a {
                continue;
            }
            let inside: Vec<usize> = (0..xs.len())
                .filter(|&i| bounds[i].0 >= a && bounds[i].1 <= b)
                .collect();
            let width = (b as i128 - a as i128 + 1) as usize;
            if inside.len() > width {
                return Err(Fail);
            }
            if inside.len() == width {
                for (i, x) in xs.iter().enumerate() {
                    if !inside.contains(&i) {
                        changed |= remove_range(x, a, b, d)?;
                    }
                }
            }
        }
    }
    Ok(changed)
}

fn channel(xs: &[IntExpr], ys: &[IntExpr], d: &mut [Domain]) -> Result<bool, Fail> {
    let mut changed = false;
    for (i, x) in xs.iter().enumerate() {
        for j in dom(x, d).values().collect::<Vec<_>>() {
            if !contains(&ys[(j - 1) as usize], d, i as i64 + 1) {
                changed |= remove(x, j, d)?;
            }
        }
    }
    Ok(changed)
}

fn circuit(xs: &[IntExpr], d: &mut [Domain]) -> Result<bool, Fail> {
    let n = xs.len();
    let mut changed = false;
    for (i, x) in xs.iter().enumerate() {
        changed |= restrict(x, 1, n as i64, d)?;
        if n > 1 {
            changed |= remove(x, i as i64 + 1, d)?;
        }
    }
    changed |= all_different(xs, d)?;
    // close no chain of fixed successors into a cycle shorter than n
    for start in 0..n {
        let mut cur = start;
        let mut len = 1;
        loop {
            match fixed(&xs[cur], d) {
                Some(next) => {
                    let next = (next - 1) as usize;
                    if next == start {
                        if len < n {
                            return Err(Fail);
                        }
                        break;
                    }
                    cur = next;
                    len += 1;
                    if len > n {
                        return Err(Fail);
                    }
                }
                None => {
                    if len < n {
                        changed |= remove(&xs[cur], start as i64 + 1, d)?;
                    }
                    break;
                }
            }
        }
    }
    Ok(changed)
}

fn count(
    value: &IntExpr,
    list: &[IntExpr],
    op: CmpOp,
    rhs: &IntExpr,
    d: &mut [Domain],
) -> Result<bool, Fail> {
    let Some(m) = fixed(value, d) else {
        return Ok(false);
    };
    let must = list.iter().filter(|x| fixed(x, d) == Some(m)).count() as i64;
    let open: Vec<&IntExpr> = list
        .iter()
        .filter(|x| fixed(x, d).is_none() && contains(x, d, m))
        .collect();
    let may = must + open.len() as i64;
    let mut changed = false;
    let (elo, ehi) = (lo(rhs, d), hi(rhs, d));
    // c ranges over must..=may; narrow c from the comparison with rhs
    let (clo, chi) = match op {
        CmpOp::Eq => {
            changed |= restrict(rhs, must, may, d)?;
            (lo(rhs, d), hi(rhs, d))
        }
        CmpOp::Leq => {
            changed |= restrict(rhs, must, i64::MAX, d)?;
            (i64::MIN, ehi)
        }
        CmpOp::Lt => {
            changed |= restrict(rhs, must.saturating_add(1), i64::MAX, d)?;
            (i64::MIN, ehi.saturating_sub(1))
        }
        CmpOp::Geq => {
            changed |= restrict(rhs, i64::MIN, may, d)?;
            (elo, i64::MAX)
        }
        CmpOp::Gt => {
            changed |= restrict(rhs, i64::MIN, may.saturating_sub(1), d)?;
            (elo.saturating_add(1), i64::MAX)
        }
        CmpOp::Neq => return Ok(changed),
    };
    if clo > may || chi < must {
        return Err(Fail);
    }
    if chi == must {
        for x in &open {
            changed |= remove(x, m, d)?;
        }
    } else if clo == may {
        for x in &open {
            changed |= set(x, m, d)?;
        }
    }
    Ok(changed)
}

/// Compulsory-part profile of the given tasks as sorted `(start, end, height)`
/// segments with positive height.
fn profile(parts: &[(i64, i64, i64)]) -> Vec<(i64, i64, i64)> {
    let mut events: Vec<(i64, i64)> = Vec::new();
    for &(s, e, r) in parts {
        events.push((s, r));
        events.push((e, -r));
    }
    events.sort_unstable();
    let mut out = Vec::new();
    let mut h = 0i64;
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        while i < events.len() && events[i].0 == t {
            h += events[i].1;
            i += 1;
        }
        if h > 0 {
            if let Some(&(next, _)) = events.get(i) {
                out.push((t, next, h));
            }
        }
    }
    out
}

fn cumulative(
    starts: &[IntExpr],
    dur: &[i64],
    res: &[i64],
    limit: &IntExpr,
    d: &mut [Domain],
) -> Result<bool, Fail> {
    let mut changed = false;
    let active: Vec<usize> = (0..starts.len()).filter(|&i| dur[i] > 0).collect();
    let peak_req = active.iter().map(|&i| res[i]).max().unwrap_or(i64::MIN);
    if !active.is_empty() {
        changed |= restrict(limit, peak_req, i64::MAX, d)?;
    }
    let cap = hi(limit, d);
    let compulsory = |i: usize, d: &[Domain]| -> Option<(i64, i64, i64)> {
        let (lst, ect) = (hi(&starts[i], d), lo(&starts[i], d).saturating_add(dur[i]));
        (lst < ect && res[i] > 0).then_some((lst, ect, res[i]))
    };
    let all: Vec<(i64, i64, i64)> = active.iter().filter_map(|&i| compulsory(i, d)).collect();
    if let Some(top) = profile(&all).iter().map(|s| s.2).max() {
        changed |= restrict(limit, top, i64::MAX, d)?;
    }
    for &i in &active {
        if res[i] == 0 {
            continue;
        }
        let others: Vec<(i64, i64, i64)> = active
            .iter()
            .filter(|&&j| j != i)
            .filter_map(|&j| compulsory(j, d))
            .collect();
        let prof = profile(&others);
        let clash = |s: i64| {
            prof.iter()
                .find(|seg| seg.0 < s.saturating_add(dur[i]) && s < seg.1 && seg.2 + res[i] > cap)
                .copied()
        };
        let (mut s, smax) = (lo(&starts[i], d), hi(&starts[i], d));
        while let Some(seg) = clash(s) {
            s = seg.1;
            if s > smax {
                return Err(Fail);
            }
        }
        changed |= restrict(&starts[i], s, i64::MAX, d)?;
        let (smin, mut s) = (lo(&starts[i], d), hi(&starts[i], d));
        while let Some(seg) = clash(s) {
            s = seg.0.saturating_sub(dur[i]);
            if s < smin {
                return Err(Fail);
            }
        }
        changed |= restrict(&starts[i], i64::MIN, s, d)?;
    }
    Ok(changed)
}

fn element(
    index: &IntExpr,
    list: &[IntExpr],
    value: &IntExpr,
    d: &mut [Domain],
) -> Result<bool, Fail> {
    let mut changed = restrict(index, 1, list.len() as i64, d)?;
    let vdom = dom(value, d);
    for i in dom(index, d).values().collect::<Vec<_>>() {
        let mut item = dom(&list[(i - 1) as usize], d);
        item.intersect(&vdom);
        if item.is_empty() {
            changed |= remove(index, i, d)?;
        }
    }
    let idx: Vec<i64> = dom(index, d).values().collect();
    let reach_lo = idx
        .iter()
        .map(|&i| lo(&list[(i - 1) as usize], d))
        .min()
        .ok_or(Fail)?;
    let reach_hi = idx
        .iter()
        .map(|&i| hi(&list[(i - 1) as usize], d))
        .max()
        .ok_or(Fail)?;
    changed |= restrict(value, reach_lo, reach_hi, d)?;
    if let [i] = idx[..] {
        let item = &list[(i - 1) as usize];
        let vd = dom(value, d);
        changed |= intersect(item, &vd, d)?;
        let id = dom(item, d);
        changed |= intersect(value, &id, d)?;
    }
    Ok(changed)
}

fn extremum(m: &IntExpr, xs: &[IntExpr], is_min: bool, d: &mut [Domain]) -> Result<bool, Fail> {
    if xs.is_empty() {
        return Err(Fail);
    }
    let mut changed = false;
    if is_min {
        let a = xs.iter().map(|x| lo(x, d)).min().expect("non-empty");
        let b = xs.iter().map(|x| hi(x, d)).min().expect("non-empty");
        changed |= restrict(m, a, b, d)?;
        let floor = lo(m, d);
        for x in xs {
            changed |= restrict(x, floor, i64::MAX, d)?;
        }
    } else {
        let a = xs.iter().map(|x| lo(x, d)).max().expect("non-empty");
        let b = xs.iter().map(|x| hi(x, d)).max().expect("non-empty");
        changed |= restrict(m, a, b, d)?;
        let ceil = hi(m, d);
        for x in xs {
            changed |= restrict(x, i64::MIN, ceil, d)?;
        }
    }
    Ok(changed)
}

/// One filtering pass for a non-decomposed global.
pub fn propagate(g: &Global, d: &mut [Domain]) -> Result<bool, Fail> {
    match g {
        Global::AllDifferent(xs) => all_different(xs, d),
        Global::AllDistinct(xs) => Ok(all_different(xs, d)? | hall_intervals(xs, d)?),
        Global::Assignment(xs, ys) => {
            if xs.len() != ys.len() {
                return Err(Fail);
            }
            let n = xs.len() as i64;
            let mut changed = false;
            for x in xs.iter().chain(ys) {
                changed |= restrict(x, 1, n, d)?;
            }
            changed |= all_different(xs, d)? | all_different(ys, d)?;
            changed |= channel(xs, ys, d)? | channel(ys, xs, d)?;
            Ok(changed)
        }
        Global::Circuit(xs) => circuit(xs, d),
        Global::Count {
            value,
            list,
            op,
            rhs,
        } => count(value, list, *op, rhs, d),
        Global::Cumulative {
            starts,
            durations,
            resources,
            limit,
        } => cumulative(starts, durations, resources, limit, d),
        Global::Element { index, list, value } => element(index, list, value, d),
        Global::Minimum(m, xs) => extremum(m, xs, true, d),
        Global::Maximum(m, xs) => extremum(m, xs, false, d),
        Global::Sum { .. }
        | Global::ScalarProduct { .. }
        | Global::Disjoint2 { .. }
        | Global::Serialized { .. } => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::expr::IntExpr as E;

    #[test]
    fn pigeonhole_on_singletons_fails() {
        let mut d = vec![Domain::singleton(1), Domain::singleton(1)];
        let g = Global::AllDifferent(vec![E::var(0), E::var(1)]);
        assert_eq!(propagate(&g, &mut d), Err(Fail));
    }

    #[test]
    fn hall_interval_prunes_outsiders() {
        // a, b in 1..2 force c out of 1..2
        let mut d = vec![
            Domain::range(1, 2),
            Domain::range(1, 2),
            Domain::range(1, 4),
        ];
        let g = Global::AllDistinct(vec![E::var(0), E::var(1), E::var(2)]);
        propagate(&g, &mut d).unwrap();
        assert_eq!((d[2].min(), d[2].max()), (3, 4));
    }

    #[test]
    fn cumulative_separates_heavy_tasks() {
        // resources 3 and 2 exceed the limit 4 together; horizon 0..1
        let mut d = vec![
            Domain::singleton(0),
            Domain::range(0, 1),
            Domain::range(0, 1),
        ];
        let g = Global::Cumulative {
            starts: vec![E::var(0), E::var(1), E::var(2)],
            durations: vec![1, 1, 1],
            resources: vec![3, 2, 1],
            limit: E::Const(4),
        };
        propagate(&g, &mut d).unwrap();
        assert_eq!(d[1].value(), Some(1));
    }

    #[test]
    fn circuit_forbids_short_cycles() {
        let mut d = vec![
            Domain::singleton(2),
            Domain::range(1, 3),
            Domain::range(1, 3),
        ];
        let g = Global::Circuit(vec![E::var(0), E::var(1), E::var(2)]);
        propagate(&g, &mut d).unwrap();
        // 2 -> 1 would close a 2-cycle
        assert_eq!(d[1].value(), Some(3));
    }

    #[test]
    fn element_with_fixed_index_links_value() {
        let mut d = vec![
            Domain::singleton(2),
            Domain::range(0, 9),
            Domain::range(0, 9),
            Domain::singleton(7),
        ];
        let g = Global::Element {
            index: E::var(0),
            list: vec![E::var(1), E::var(2)],
            value: E::var(3),
        };
        propagate(&g, &mut d).unwrap();
        assert_eq!(d[2].value(), Some(7));
    }
}

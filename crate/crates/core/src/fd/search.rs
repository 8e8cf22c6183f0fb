use std::collections::VecDeque;

use super::bounds;
use super::domain::Domain;
use super::expr::{CmpOp, Connective, ConstraintExpr, Global, IntExpr};
use super::global;
use super::{Fail, FdError};

/// Unfixed variables with at most this many values are filtered exactly
/// against the constraint's truth function.
const EXACT_FILTER_SIZE: u64 = 256;

#[derive(Clone, Debug)]
enum Kind {
    Formula(ConstraintExpr),
    Global(Global),
}

#[derive(Clone, Debug)]
struct Posted {
    kind: Kind,
    /// Reference semantics used for leaf checks and exact filtering.
    check: ConstraintExpr,
    vars: Vec<usize>,
}

/// A finite-domain constraint satisfaction problem.
#[derive(Clone, Debug, Default)]
pub struct Csp {
    names: Vec<String>,
    domains: Vec<Domain>,
    posted: Vec<Posted>,
    watch: Vec<Vec<usize>>,
    constraints: Vec<ConstraintExpr>,
}

/// Outcome of a search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solutions {
    pub solutions: Vec<Vec<i64>>,
    pub count: u64,
    /// The whole search space was explored.
    pub exhausted: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Stop after this many solutions.
    pub solutions: Option<u64>,
    /// Keep at most this many solutions in memory.
    pub keep: usize,
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            solutions: None,
            keep: usize::MAX,
            max_nodes: 50_000_000,
        }
    }
}

fn linear(list: impl IntoIterator<Item = IntExpr>) -> IntExpr {
    list.into_iter()
        .reduce(IntExpr::add)
        .unwrap_or(IntExpr::Const(0))
}

fn no_overlap(a: &IntExpr, da: i64, b: &IntExpr, db: i64) -> ConstraintExpr {
    ConstraintExpr::bin(
        Connective::Or,
        ConstraintExpr::cmp(
            CmpOp::Leq,
            IntExpr::add(a.clone(), IntExpr::Const(da)),
            b.clone(),
        ),
        ConstraintExpr::cmp(
            CmpOp::Leq,
            IntExpr::add(b.clone(), IntExpr::Const(db)),
            a.clone(),
        ),
    )
}

/// Formulas equivalent to a global, for those handled by decomposition.
fn decompose(g: &Global) -> Option<Vec<ConstraintExpr>> {
    Some(match g {
        Global::Sum { list, op, rhs } => vec![ConstraintExpr::cmp(
            *op,
            linear(list.iter().cloned()),
            rhs.clone(),
        )],
        Global::ScalarProduct {
            coeffs,
            list,
            op,
            rhs,
        } => {
            if coeffs.len() != list.len() {
                return None;
            }
            let terms = coeffs
                .iter()
                .zip(list)
                .map(|(c, x)| IntExpr::mul(IntExpr::Const(*c), x.clone()));
            vec![ConstraintExpr::cmp(*op, linear(terms), rhs.clone())]
        }
        Global::Serialized { starts, durations } => {
            let mut out = Vec::new();
            for i in 0..starts.len() {
                for j in i + 1..starts.len() {
                    out.push(no_overlap(
                        &starts[i],
                        durations[i],
                        &starts[j],
                        durations[j],
                    ));
                }
            }
            out
        }
        Global::Disjoint2 { x, w, y, h } => {
            let mut out = Vec::new();
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    out.push(ConstraintExpr::bin(
                        Connective::Or,
                        no_overlap(&x[i], w[i], &x[j], w[j]),
                        no_overlap(&y[i], h[i], &y[j], h[j]),
                    ));
                }
            }
            out
        }
        _ => return None,
    })
}

impl Csp {
    pub fn new() -> Csp {
        Csp::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, domain: Domain) -> usize {
        self.names.push(name.into());
        self.domains.push(domain);
        self.watch.push(Vec::new());
        self.domains.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// The constraints as posted, before decomposition.
    pub fn constraints(&self) -> &[ConstraintExpr] {
        &self.constraints
    }

    pub fn post(&mut self, c: ConstraintExpr) -> Result<(), FdError> {
        let vars = c.vars();
        if let Some(&v) = vars.iter().find(|&&v| v >= self.num_vars()) {
            return Err(FdError::UnknownVariable(v));
        }
        if let ConstraintExpr::Global(g) = &c {
            check_shape(g)?;
        }
        self.constraints.push(c.clone());
        match c {
            ConstraintExpr::Global(g) => match decompose(&g) {
                Some(parts) => {
                    for part in parts {
                        self.push(Kind::Formula(part.clone()), part);
                    }
                }
                None => self.push(Kind::Global(g.clone()), ConstraintExpr::Global(g)),
            },
            other => self.push(Kind::Formula(other.clone()), other),
        }
        Ok(())
    }

    fn push(&mut self, kind: Kind, check: ConstraintExpr) {
        let vars = check.vars();
        let idx = self.posted.len();
        for &v in &vars {
            self.watch[v].push(idx);
        }
        self.posted.push(Posted { kind, check, vars });
    }

    /// Whether a total assignment satisfies every posted constraint.
    pub fn satisfied_by(&self, e: &[i64]) -> bool {
        self.domains.iter().zip(e).all(|(d, v)| d.contains(*v))
            && self.constraints.iter().all(|c| c.satisfied(e))
    }

    fn run(&self, idx: usize, d: &mut [Domain]) -> Result<(), Fail> {
        let p = &self.posted[idx];
        match &p.kind {
            Kind::Formula(f) => {
                bounds::enforce(f, true, d)?;
            }
            Kind::Global(g) => {
                global::propagate(g, d)?;
            }
        }
        let open: Vec<usize> = p
            .vars
            .iter()
            .copied()
            .filter(|&v| !d[v].is_fixed())
            .collect();
        match open[..] {
            [] => {
                let e = assignment(d);
                if !p.check.satisfied(&e) {
                    return Err(Fail);
                }
            }
            [x] if d[x].size() <= EXACT_FILTER_SIZE => {
                let mut e = assignment(d);
                let mut dom = d[x].clone();
                dom.retain(|v| {
                    e[x] = v;
                    p.check.satisfied(&e)
                });
                if dom.is_empty() {
                    return Err(Fail);
                }
                d[x] = dom;
            }
            _ => {}
        }
        Ok(())
    }

    /// Propagate every constraint to a common fixpoint.
    pub fn propagate_domains(&self, d: &mut [Domain]) -> Result<(), Fail> {
        if d.iter().any(Domain::is_empty) {
            return Err(Fail);
        }
        let mut queue: VecDeque<usize> = (0..self.posted.len()).collect();
        let mut queued = vec![true; self.posted.len()];
        while let Some(idx) = queue.pop_front() {
            queued[idx] = false;
            let vars = &self.posted[idx].vars;
            let before: Vec<(i64, i64, u64)> = vars
                .iter()
                .map(|&v| (d[v].min(), d[v].max(), d[v].size()))
                .collect();
            self.run(idx, d)?;
            for (k, &v) in vars.iter().enumerate() {
                if d[v].is_empty() {
                    return Err(Fail);
                }
                if (d[v].min(), d[v].max(), d[v].size()) != before[k] {
                    for &w in &self.watch[v] {
                        if !queued[w] {
                            queued[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Domains after root propagation, or `None` if propagation fails.
    pub fn propagate(&self) -> Option<Vec<Domain>> {
        let mut d = self.domains.clone();
        self.propagate_domains(&mut d).ok().map(|()| d)
    }

    /// Depth-first labeling of the leftmost unfixed variable, smallest
    /// value first.
    pub fn search(&self, limits: SearchLimits) -> Result<Solutions, FdError> {
        let mut out = Solutions::default();
        let mut stack = vec![self.domains.clone()];
        while let Some(mut d) = stack.pop() {
            out.nodes += 1;
            if out.nodes > limits.max_nodes {
                return Err(FdError::NodeLimit(limits.max_nodes));
            }
            if self.propagate_domains(&mut d).is_err() {
                continue;
            }
            match d.iter().position(|x| !x.is_fixed()) {
                None => {
                    let e = assignment(&d);
                    debug_assert!(self.satisfied_by(&e));
                    out.count += 1;
                    if out.solutions.len() < limits.keep {
                        out.solutions.push(e);
                    }
                    if limits.solutions.is_some_and(|n| out.count >= n) {
                        out.exhausted = stack.is_empty();
                        return Ok(out);
                    }
                }
                Some(x) => {
                    let v = d[x].min();
                    let mut right = d.clone();
                    right[x].remove(v);
                    d[x] = Domain::singleton(v);
                    stack.push(right);
                    stack.push(d);
                }
            }
        }
        out.exhausted = true;
        Ok(out)
    }

    /// The first solution in labeling order.
    pub fn solve(&self) -> Result<Option<Vec<i64>>, FdError> {
        let r = self.search(SearchLimits {
            solutions: Some(1),
            keep: 1,
            ..SearchLimits::default()
        })?;
        Ok(r.solutions.into_iter().next())
    }

    pub fn count(&self) -> Result<u64, FdError> {
        Ok(self
            .search(SearchLimits {
                keep: 0,
                ..SearchLimits::default()
            })?
            .count)
    }

    /// Up to `limit` solutions in labeling order.
    pub fn enumerate(&self, limit: Option<u64>) -> Result<Solutions, FdError> {
        self.search(SearchLimits {
            solutions: limit,
            ..SearchLimits::default()
        })
    }
}

fn assignment(d: &[Domain]) -> Vec<i64> {
    d.iter()
        .map(|x| if x.is_empty() { 0 } else { x.min() })
        .collect()
}

fn check_shape(g: &Global) -> Result<(), FdError> {
    let bad = |msg: &str| {
        Err(FdError::BadGlobal {
            name: g.name().to_string(),
            msg: msg.to_string(),
        })
    };
    match g {
        Global::Assignment(xs, ys) if xs.len() != ys.len() => bad("lists differ in length"),
        Global::Cumulative {
            starts,
            durations,
            resources,
            ..
        } if starts.len() != durations.len() || starts.len() != resources.len() => {
            bad("lists differ in length")
        }
        Global::Cumulative {
            durations,
            resources,
            ..
        } if durations.iter().chain(resources).any(|&x| x < 0) => {
            bad("negative duration or resource")
        }
        Global::Disjoint2 { x, w, y, h }
            if x.len() != w.len() || x.len() != y.len() || x.len() != h.len() =>
        {
            bad("lists differ in length")
        }
        Global::ScalarProduct { coeffs, list, .. } if coeffs.len() != list.len() => {
            bad("lists differ in length")
        }
        Global::Serialized { starts, durations } if starts.len() != durations.len() => {
            bad("lists differ in length")
        }
        _ => {
            for x in g.exprs() {
                if !matches!(x, IntExpr::Var(_) | IntExpr::Const(_)) {
                    return bad("arguments must be variables or integers");
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::expr::IntExpr as E;
    use proptest::prelude::*;

    fn c(op: CmpOp, a: IntExpr, b: IntExpr) -> ConstraintExpr {
        ConstraintExpr::cmp(op, a, b)
    }

    #[test]
    fn interval_example() {
        let mut csp = Csp::new();
        let x = csp.add_var("x", Domain::range(0, 23));
        csp.post(c(CmpOp::Geq, E::var(x), E::Const(12))).unwrap();
        csp.post(c(CmpOp::Leq, E::var(x), E::Const(10))).unwrap();
        assert_eq!(csp.solve().unwrap(), None);
        let mut csp = Csp::new();
        let x = csp.add_var("x", Domain::range(0, 23));
        csp.post(c(CmpOp::Lt, E::var(x), E::Const(12))).unwrap();
        assert_eq!(csp.solve().unwrap(), Some(vec![0]));
        assert_eq!(csp.count().unwrap(), 12);
    }

    #[test]
    fn send_more_money() {
        let mut csp = Csp::new();
        let names = ["s", "e", "n", "d", "m", "o", "r", "y"];
        let v: Vec<usize> = names
            .iter()
            .map(|n| csp.add_var(*n, Domain::range(0, 9)))
            .collect();
        let [s, e, n, d, m, o, r, y] = v[..] else {
            unreachable!()
        };
        csp.post(ConstraintExpr::Global(Global::AllDifferent(
            v.iter().map(|&i| E::var(i)).collect(),
        )))
        .unwrap();
        csp.post(c(CmpOp::Gt, E::var(s), E::Const(0))).unwrap();
        csp.post(c(CmpOp::Gt, E::var(m), E::Const(0))).unwrap();
        let word = |ds: &[usize]| {
            linear(
                ds.iter()
                    .rev()
                    .enumerate()
                    .map(|(k, &i)| IntExpr::mul(E::Const(10i64.pow(k as u32)), E::var(i))),
            )
        };
        csp.post(c(
            CmpOp::Eq,
            IntExpr::add(word(&[s, e, n, d]), word(&[m, o, r, e])),
            word(&[m, o, n, e, y]),
        ))
        .unwrap();
        let all = csp.enumerate(None).unwrap();
        assert_eq!(all.solutions, vec![vec![9, 5, 6, 7, 1, 0, 8, 2]]);
        assert!(all.exhausted);
    }

    #[test]
    fn circuit_solutions_of_three() {
        let mut csp = Csp::new();
        let v: Vec<usize> = (0..3)
            .map(|i| csp.add_var(format!("n{i}"), Domain::range(1, 3)))
            .collect();
        csp.post(ConstraintExpr::Global(Global::Circuit(
            v.iter().map(|&i| E::var(i)).collect(),
        )))
        .unwrap();
        let all = csp.enumerate(None).unwrap();
        assert_eq!(all.solutions, vec![vec![2, 3, 1], vec![3, 1, 2]]);
    }

    #[test]
    fn limit_reports_incomplete_search() {
        let mut csp = Csp::new();
        csp.add_var("x", Domain::range(0, 9));
        let r = csp.enumerate(Some(3)).unwrap();
        assert_eq!(r.solutions, vec![vec![0], vec![1], vec![2]]);
        assert!(!r.exhausted);
    }

    #[test]
    fn node_limit_is_an_error() {
        let mut csp = Csp::new();
        for i in 0..20 {
            csp.add_var(format!("x{i}"), Domain::range(0, 1));
        }
        let r = csp.search(SearchLimits {
            max_nodes: 100,
            ..SearchLimits::default()
        });
        assert_eq!(r, Err(FdError::NodeLimit(100)));
    }

    #[test]
    fn malformed_global_is_rejected() {
        let mut csp = Csp::new();
        let x = csp.add_var("x", Domain::range(0, 3));
        let g = Global::ScalarProduct {
            coeffs: vec![1, 2],
            list: vec![E::var(x)],
            op: CmpOp::Eq,
            rhs: E::Const(1),
        };
        assert!(matches!(
            csp.post(ConstraintExpr::Global(g)),
            Err(FdError::BadGlobal { .. })
        ));
    }

    fn arb_int(nvars: usize) -> impl Strategy<Value = IntExpr> {
        let leaf = prop_oneof![
            (-3i64..4).prop_map(IntExpr::Const),
            (0..nvars).prop_map(IntExpr::Var)
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| IntExpr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| IntExpr::sub(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| IntExpr::mul(a, b)),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| IntExpr::Div(Box::new(a), Box::new(b))),
                inner.prop_map(|a| IntExpr::Neg(Box::new(a))),
            ]
        })
    }

    fn arb_op() -> impl Strategy<Value = CmpOp> {
        prop_oneof![
            Just(CmpOp::Eq),
            Just(CmpOp::Neq),
            Just(CmpOp::Lt),
            Just(CmpOp::Leq),
            Just(CmpOp::Gt),
            Just(CmpOp::Geq)
        ]
    }

    fn arb_constraint(nvars: usize) -> impl Strategy<Value = ConstraintExpr> {
        let cmp = (arb_op(), arb_int(nvars), arb_int(nvars))
            .prop_map(|(o, a, b)| ConstraintExpr::cmp(o, a, b));
        let leaf = prop_oneof![
            4 => cmp,
            1 => proptest::collection::vec(0..nvars, 1..=nvars)
                .prop_map(|vs| ConstraintExpr::Global(Global::AllDifferent(vs.into_iter().map(IntExpr::Var).collect()))),
        ];
        leaf.prop_recursive(2, 8, 2, |inner| {
            let conn = prop_oneof![
                Just(Connective::And),
                Just(Connective::Or),
                Just(Connective::Xor),
                Just(Connective::Implies),
                Just(Connective::Equiv)
            ];
            prop_oneof![
                (conn, inner.clone(), inner.clone())
                    .prop_map(|(k, a, b)| ConstraintExpr::bin(k, a, b)),
                inner.prop_map(|a| ConstraintExpr::Not(Box::new(a))),
            ]
        })
    }

    fn brute(doms: &[(i64, i64)], cs: &[ConstraintExpr]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut e: Vec<i64> = doms.iter().map(|d| d.0).collect();
        loop {
            if cs.iter().all(|c| c.satisfied(&e)) {
                out.push(e.clone());
            }
            let mut k = doms.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if e[k] < doms[k].1 {
                    e[k] += 1;
                    break;
                }
                e[k] = doms[k].0;
            }
        }
    }

    fn build(doms: &[(i64, i64)], cs: &[ConstraintExpr]) -> Csp {
        let mut csp = Csp::new();
        for (i, &(l, h)) in doms.iter().enumerate() {
            csp.add_var(format!("x{i}"), Domain::range(l, h));
        }
        for c in cs {
            // Nested globals are not valid as posted constraints but are
            // accepted by propagation through leaf checks.
            if let ConstraintExpr::Global(g) = c {
                if check_shape(g).is_err() {
                    continue;
                }
            }
            csp.post(c.clone()).unwrap();
        }
        csp
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn enumeration_matches_exhaustive_evaluation(
            doms in proptest::collection::vec((-3i64..3, 0i64..8).prop_map(|(l, w)| (l, l + w)), 1..=5),
            cs in proptest::collection::vec(arb_constraint(5), 0..4),
        ) {
            let n = doms.len();
            let cs: Vec<ConstraintExpr> = cs.into_iter().filter(|c| c.vars().iter().all(|&v| v < n)).collect();
            let csp = build(&doms, &cs);
            let got = csp.enumerate(None).unwrap();
            prop_assert!(got.exhausted);
            prop_assert_eq!(got.solutions, brute(&doms, &cs));
        }

        #[test]
        fn propagation_keeps_every_solution(
            doms in proptest::collection::vec((-3i64..3, 0i64..8).prop_map(|(l, w)| (l, l + w)), 1..=5),
            cs in proptest::collection::vec(arb_constraint(5), 0..4),
        ) {
            let n = doms.len();
            let cs: Vec<ConstraintExpr> = cs.into_iter().filter(|c| c.vars().iter().all(|&v| v < n)).collect();
            let csp = build(&doms, &cs);
            let sols = brute(&doms, &cs);
            match csp.propagate() {
                None => prop_assert!(sols.is_empty()),
                Some(d) => {
                    for s in sols {
                        prop_assert!(s.iter().enumerate().all(|(i, v)| d[i].contains(*v)));
                    }
                }
            }
        }

        #[test]
        fn complement_splits_the_space(
            doms in proptest::collection::vec((0i64..3, 0i64..8).prop_map(|(l, w)| (l, l + w)), 1..=3),
            op in arb_op(), a in arb_int(3), b in arb_int(3),
        ) {
            let n = doms.len();
            let prim = ConstraintExpr::cmp(op, a, b);
            prop_assume!(prim.vars().iter().all(|&v| v < n));
            let comp = crate::fd::complement(&prim).unwrap();
            for e in brute(&doms, &[]) {
                // both sides defined: exactly one holds
                let defined = match &prim { ConstraintExpr::Cmp(_, a, b) => a.eval(&e).is_some() && b.eval(&e).is_some(), _ => true };
                if defined {
                    prop_assert!(prim.satisfied(&e) != comp.satisfied(&e));
                } else {
                    prop_assert!(!prim.satisfied(&e) && !comp.satisfied(&e));
                }
            }
        }
    }
}

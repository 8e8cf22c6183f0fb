//! Arithmetic post-checks for the toy benchmark domains. Each check reads the
//! instance facts back from an extended answer set and recomputes the
//! quantity the encoding constrains.

use std::collections::{BTreeMap, BTreeSet};

use ezcasp::lang::Term;

use crate::output::Model;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("missing {0}")]
    Missing(String),
    #[error("malformed {0}")]
    Malformed(String),
    #[error("{0}")]
    Violated(String),
}

type Result<T> = std::result::Result<T, CheckError>;

fn int(t: &Term, what: &str) -> Result<i64> {
    t.as_int()
        .ok_or_else(|| CheckError::Malformed(format!("{what} argument `{t}`")))
}

/// Argument tuples of `name`, requiring arity `n`.
fn tuples(m: &Model, name: &str, n: usize) -> Result<Vec<Vec<Term>>> {
    let all = m.args_of(name);
    match all.iter().find(|a| a.len() != n) {
        Some(a) => Err(CheckError::Malformed(format!("{name}/{} atom", a.len()))),
        None => Ok(all),
    }
}

/// The single integer argument of a unary fact such as `max_total_weight(9)`.
fn unary(m: &Model, name: &str) -> Result<i64> {
    match tuples(m, name, 1)?.as_slice() {
        [a] => int(&a[0], name),
        [] => Err(CheckError::Missing(name.to_string())),
        _ => Err(CheckError::Malformed(format!("several {name} atoms"))),
    }
}

/// Map from the first argument (as text) to the integer arguments that follow.
fn table(m: &Model, name: &str, n: usize) -> Result<BTreeMap<String, Vec<i64>>> {
    let mut out = BTreeMap::new();
    for a in tuples(m, name, n)? {
        let values = a[1..]
            .iter()
            .map(|t| int(t, name))
            .collect::<Result<Vec<_>>>()?;
        out.insert(a[0].to_string(), values);
    }
    Ok(out)
}

fn binding(m: &Model, var: &str) -> Result<i64> {
    m.value(var)
        .ok_or_else(|| CheckError::Missing(format!("value of {var}")))
}

fn violated(msg: String) -> CheckError {
    CheckError::Violated(msg)
}

/// Weighted sequence: the leaves form a permutation, and the cost recomputed
/// from colors and leaf data stays within `max_total_weight`. Returns the cost.
pub fn check_wseq(m: &Model) -> Result<i64> {
    let wc = table(m, "leafWeightCardinality", 3)?;
    let cost = table(m, "leafCost", 2)?;
    let max = unary(m, "max_total_weight")?;
    let leaves: BTreeSet<String> = m.args_of("leaf").iter().map(|a| a[0].to_string()).collect();
    let mut at: BTreeMap<i64, String> = BTreeMap::new();
    for a in tuples(m, "leafPos", 2)? {
        if at
            .insert(int(&a[1], "leafPos")?, a[0].to_string())
            .is_some()
        {
            return Err(violated(format!("two leaves at location {}", a[1])));
        }
    }
    let placed: BTreeSet<String> = at.values().cloned().collect();
    if placed != leaves || at.keys().copied().ne(0..leaves.len() as i64) {
        return Err(violated("leaves do not form a sequence".into()));
    }
    let seq: Vec<&String> = at.values().collect();
    let look = |t: &BTreeMap<String, Vec<i64>>, l: &str, name: &str| {
        t.get(l)
            .cloned()
            .ok_or_else(|| CheckError::Missing(format!("{name} of leaf {l}")))
    };
    let mut total = 0;
    for p in 1..seq.len() {
        let (left, right) = (seq[p - 1], seq[p]);
        let (l, r) = (look(&wc, left, "weight")?, look(&wc, right, "weight")?);
        let rc = look(&cost, right, "cost")?[0];
        let green = r[0] + r[1] < l[0] + rc;
        let claimed = m
            .args_of("posColor")
            .iter()
            .any(|a| a[0].as_int() == Some(p as i64) && a[1].to_string() == "green");
        if green != claimed {
            return Err(violated(format!("position {p} has the wrong color")));
        }
        let c = if green { r[0] + r[1] } else { l[0] + rc };
        if let Some(v) = m.value(&format!("posCost({p})")) {
            if v != c {
                return Err(violated(format!("posCost({p}) = {v}, recomputed {c}")));
            }
        }
        total += c;
    }
    if total > max {
        return Err(violated(format!("cost {total} exceeds {max}")));
    }
    Ok(total)
}

/// Incremental scheduling: jobs sharing an instance do not overlap, no device
/// runs more jobs than it has instances, and the recomputed total penalty is
/// within `max_total_penalty`. Returns the penalty.
pub fn check_is(m: &Model) -> Result<i64> {
    let len = table(m, "job_len", 2)?;
    let due = table(m, "deadline", 2)?;
    let imp = table(m, "importance", 2)?;
    let instances = table(m, "instances", 2)?;
    let max = unary(m, "max_total_penalty")?;
    let mut jobs = Vec::new();
    for a in tuples(m, "job_device", 2)? {
        let (j, d) = (a[0].to_string(), a[1].to_string());
        let st = binding(m, &format!("st({d},{j})"))?;
        let l = len
            .get(&j)
            .ok_or_else(|| CheckError::Missing(format!("job_len of {j}")))?[0];
        let on: Vec<String> = m
            .args_of("on_instance")
            .iter()
            .filter(|x| x[0].to_string() == j)
            .map(|x| x[1].to_string())
            .collect();
        let [inst] = on.as_slice() else {
            return Err(violated(format!("job {j} runs on {} instances", on.len())));
        };
        jobs.push((j, d, inst.clone(), st, st + l));
    }
    for (i, a) in jobs.iter().enumerate() {
        for b in &jobs[i + 1..] {
            if a.1 == b.1 && a.2 == b.2 && a.3 < b.4 && b.3 < a.4 {
                return Err(violated(format!(
                    "{} and {} overlap on instance {}",
                    a.0, b.0, a.2
                )));
            }
        }
        let running = jobs
            .iter()
            .filter(|b| b.1 == a.1 && b.3 <= a.3 && a.3 < b.4)
            .count() as i64;
        let cap = instances.get(&a.1).map_or(1, |v| v[0]);
        if running > cap {
            return Err(violated(format!(
                "{running} jobs on {} at time {}",
                a.1, a.3
            )));
        }
    }
    let mut total = 0;
    for (j, _, _, _, end) in &jobs {
        let d = due
            .get(j)
            .ok_or_else(|| CheckError::Missing(format!("deadline of {j}")))?[0];
        let w = imp
            .get(j)
            .ok_or_else(|| CheckError::Missing(format!("importance of {j}")))?[0];
        total += (end - d).max(0) * w;
    }
    if total > max {
        return Err(violated(format!("penalty {total} exceeds {max}")));
    }
    Ok(total)
}

type Points = Vec<(i64, i64)>;

fn points(t: &BTreeMap<String, Vec<i64>>, name: &str) -> Result<Points> {
    let mut out = Vec::new();
    for (i, (k, v)) in t
        .iter()
        .map(|(k, v)| (k.parse::<i64>().unwrap_or(-1), v))
        .collect::<BTreeMap<_, _>>()
        .iter()
        .enumerate()
    {
        if *k != i as i64 {
            return Err(CheckError::Malformed(format!("{name} points are not 0..n")));
        }
        out.push((v[0], v[1]));
    }
    Ok(out)
}

/// Reverse folding: replaying the pivot moves from the initial configuration
/// gives a non-overlapping chain after every move and the goal after exactly
/// one move per step. Returns the number of moves.
pub fn check_rf(m: &Model) -> Result<usize> {
    let mut chain = points(&table(m, "init", 3)?, "init")?;
    let goal = points(&table(m, "goal", 3)?, "goal")?;
    let steps = m.args_of("move").len();
    let mut by_step: BTreeMap<i64, Vec<(usize, String)>> = BTreeMap::new();
    for a in tuples(m, "pivot", 3)? {
        let seg = usize::try_from(int(&a[1], "pivot")?)
            .map_err(|_| CheckError::Malformed("pivot segment".into()))?;
        by_step
            .entry(int(&a[0], "pivot")?)
            .or_default()
            .push((seg, a[2].to_string()));
    }
    if by_step.len() != steps || by_step.keys().copied().ne(0..steps as i64) {
        return Err(violated(format!(
            "{} steps with moves, expected {steps}",
            by_step.len()
        )));
    }
    for (s, moves) in &by_step {
        let [(p, dir)] = moves.as_slice() else {
            return Err(violated(format!("{} moves at step {s}", moves.len())));
        };
        let &(px, py) = chain
            .get(*p)
            .ok_or_else(|| CheckError::Malformed(format!("pivot on segment {p}")))?;
        for q in chain.iter_mut().skip(p + 1) {
            let (dx, dy) = (q.0 - px, q.1 - py);
            *q = match dir.as_str() {
                "clock" => (px + dy, py - dx),
                "anticlock" => (px - dy, py + dx),
                d => return Err(CheckError::Malformed(format!("direction {d}"))),
            };
        }
        let distinct: BTreeSet<_> = chain.iter().collect();
        if distinct.len() != chain.len() {
            return Err(violated(format!("chain overlaps itself after step {s}")));
        }
        for (i, &(x, y)) in chain.iter().enumerate() {
            let at = s + 1;
            for (axis, v) in [("tfoldx", x), ("tfoldy", y)] {
                if let Some(b) = m.value(&format!("{axis}({at},{i})")) {
                    if b != v {
                        return Err(violated(format!("{axis}({at},{i}) = {b}, replayed {v}")));
                    }
                }
            }
        }
    }
    if chain != goal {
        return Err(violated(format!("final chain {chain:?} is not the goal")));
    }
    Ok(steps)
}

use super::{Atom, Clause, Record, RegularProgram, Rule};

/// Unit propagation to fixpoint. A fully falsified clause appends one of its
/// literals (leaving the record inconsistent); an empty clause appends ⊥.
pub fn unit_propagate(m: &Record, clauses: &[Clause]) -> Record {
    let mut m = m.clone();
    let mut changed = true;
    while changed && m.is_consistent() {
        changed = false;
        for c in clauses {
            if c.satisfied_by(&m) {
                continue;
            }
            let mut free = c.0.iter().filter(|&&l| !m.holds(l.negate()));
            match (free.next(), free.next()) {
                (None, _) => {
                    match c.0.first() {
                        Some(&l) => m.push(l, false),
                        None => m.push_bottom(),
                    }
                    return m;
                }
                (Some(&l), None) => {
                    m.push(l, false);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    m
}

fn body_contradicted(r: &Rule, m: &Record) -> bool {
    r.body_complement().any(|l| m.holds(l))
}

/// Largest set of atoms unfounded on `m`: the complement of the atoms that
/// have external support through some rule whose body `m` does not
/// contradict.
pub fn greatest_unfounded_set(p: &RegularProgram, m: &Record) -> Vec<bool> {
    let n = p.len_atoms();
    let mut supported = vec![false; n];
    let mut missing: Vec<usize> = Vec::with_capacity(p.rules.len());
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue: Vec<Atom> = Vec::new();

    for (i, r) in p.rules.iter().enumerate() {
        let alive = r.head.is_some() && !body_contradicted(r, m);
        missing.push(if alive { r.pos.len() } else { usize::MAX });
        if !alive {
            continue;
        }
        for a in &r.pos {
            watch[a.index()].push(i);
        }
        if r.pos.is_empty() {
            let h = r.head.expect("alive rules have heads");
            if !supported[h.index()] {
                supported[h.index()] = true;
                queue.push(h);
            }
        }
    }
    while let Some(a) = queue.pop() {
        for &i in &watch[a.index()] {
            missing[i] -= 1;
            if missing[i] == 0 {
                let h = p.rules[i].head.expect("alive rules have heads");
                if !supported[h.index()] {
                    supported[h.index()] = true;
                    queue.push(h);
                }
            }
        }
    }
    supported.iter().map(|s| !s).collect()
}

/// Direct check of the unfounded-set definition for `u` on `m`.
pub fn is_unfounded(p: &RegularProgram, m: &Record, u: &[bool]) -> bool {
    p.rules.iter().all(|r| match r.head {
        Some(h) if u[h.index()] => body_contradicted(r, m) || r.pos.iter().any(|a| u[a.index()]),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{program_from, Lit};

    #[test]
    fn unit_clause_fires_on_empty_record() {
        let p = program_from(&[("", &[], &["lightOn"], &[])]);
        let m = unit_propagate(&Record::new(1), &p.clausify());
        assert_eq!(m.literals().collect::<Vec<_>>(), vec![Lit::pos(Atom(0))]);
        assert!(!m.has_decision());
    }

    #[test]
    fn no_applicable_clause_leaves_record() {
        let p = program_from(&[("a", &["b"], &[], &[])]);
        let m = unit_propagate(&Record::new(2), &p.clausify());
        assert_eq!(m.len(), 0);
    }

    #[test]
    fn complementary_unit_clauses_conflict() {
        let a = Atom(0);
        let clauses = vec![Clause(vec![Lit::pos(a)]), Clause(vec![Lit::neg(a)])];
        let m = unit_propagate(&Record::new(1), &clauses);
        assert!(!m.is_consistent());
        // truth-table: neither value of a satisfies both clauses
        for v in [false, true] {
            let r = Record::from_lits(1, &[Lit::new(a, v)]);
            assert!(!clauses.iter().all(|c| c.satisfied_by(&r)));
        }
    }

    #[test]
    fn positive_loop_is_unfounded() {
        let p = program_from(&[("a", &["b"], &[], &[]), ("b", &["a"], &[], &[])]);
        assert_eq!(
            greatest_unfounded_set(&p, &Record::new(2)),
            vec![true, true]
        );
    }

    #[test]
    fn fact_is_founded() {
        let p = program_from(&[("a", &[], &[], &[])]);
        assert_eq!(greatest_unfounded_set(&p, &Record::new(1)), vec![false]);
    }

    #[test]
    fn empty_program_has_empty_unfounded_set() {
        let p = RegularProgram::new();
        assert!(greatest_unfounded_set(&p, &Record::new(0)).is_empty());
    }

    #[test]
    fn contradicted_body_makes_head_unfounded() {
        // lightOn ← switch, not am with am true
        let p = program_from(&[
            ("lightOn", &["switch"], &["am"], &[]),
            ("switch", &[], &[], &["switch"]),
        ]);
        let am = p.atoms.get("am").unwrap();
        let m = Record::from_lits(3, &[Lit::pos(am)]);
        let u = greatest_unfounded_set(&p, &m);
        assert!(u[p.atoms.get("lightOn").unwrap().index()]);
        assert!(!u[p.atoms.get("switch").unwrap().index()]);
        assert!(is_unfounded(&p, &m, &u));
    }
}

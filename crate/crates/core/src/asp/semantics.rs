use thiserror::Error;

use super::{RegularProgram, Rule};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("program has {atoms} undetermined atoms, exhaustive enumeration is bounded to {bound}")]
pub struct BoundExceeded {
    pub atoms: usize,
    pub bound: usize,
}

/// Π^X: rules whose body X satisfies, reduced to `a0 ← B^pos`.
pub fn reduct(p: &RegularProgram, x: &[bool]) -> RegularProgram {
    let rules = p
        .rules
        .iter()
        .filter(|r| r.body_satisfied_by(x))
        .map(|r| Rule::new(r.head, r.pos.clone(), vec![], vec![]))
        .collect();
    RegularProgram {
        atoms: p.atoms.clone(),
        rules,
    }
}

/// Least model of the definite (non-denial) rules of a positive program,
/// ignoring negation if present.
pub fn least_model(p: &RegularProgram) -> Vec<bool> {
    let mut m = vec![false; p.len_atoms()];
    let mut changed = true;
    while changed {
        changed = false;
        for r in &p.rules {
            if let Some(h) = r.head {
                if !m[h.index()] && r.pos.iter().all(|a| m[a.index()]) {
                    m[h.index()] = true;
                    changed = true;
                }
            }
        }
    }
    m
}

pub fn is_answer_set(p: &RegularProgram, x: &[bool]) -> bool {
    let red = reduct(p, x);
    // a kept denial has its body inside X, so X violates its clause
    if red
        .rules
        .iter()
        .any(|r| r.head.is_none() && r.pos.iter().all(|a| x[a.index()]))
    {
        return false;
    }
    least_model(&red) == x
}

/// All answer sets, ordered lexicographically by their sorted atom indices.
///
/// Only atoms that can vary are guessed: an answer set contains the least
/// model of the rules without negation and lies inside the least model of
/// the program with negation dropped. `bound` limits the guessed atoms.
pub fn enumerate_answer_sets_bruteforce(
    p: &RegularProgram,
    bound: usize,
) -> Result<Vec<Vec<bool>>, BoundExceeded> {
    let n = p.len_atoms();
    let definite = RegularProgram {
        atoms: p.atoms.clone(),
        rules: p
            .rules
            .iter()
            .filter(|r| r.neg.is_empty() && r.negneg.is_empty())
            .cloned()
            .collect(),
    };
    let lower = least_model(&definite);
    let upper = least_model(p);
    let free: Vec<usize> = (0..n).filter(|&i| upper[i] && !lower[i]).collect();
    if free.len() > bound || free.len() >= 64 {
        return Err(BoundExceeded {
            atoms: free.len(),
            bound,
        });
    }
    let mut out: Vec<Vec<bool>> = (0u64..1 << free.len())
        .map(|mask| {
            let mut x = lower.clone();
            for (k, &i) in free.iter().enumerate() {
                x[i] = mask >> k & 1 == 1;
            }
            x
        })
        .filter(|x| is_answer_set(p, x))
        .collect();
    out.sort_by_key(|x| (0..n).filter(|&i| x[i]).collect::<Vec<_>>());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{
        greatest_unfounded_set, is_unfounded, program_from, Atom, Denial, Lit, Record,
    };
    use proptest::prelude::*;

    fn light() -> RegularProgram {
        program_from(&[
            ("switch", &[], &[], &["switch"]),
            ("lightOn", &["switch"], &["am"], &[]),
            ("", &[], &["lightOn"], &[]),
            ("am", &[], &[], &["am"]),
        ])
    }

    #[test]
    fn reduct_of_double_negation() {
        let p = program_from(&[("a", &[], &[], &["a"])]);
        assert!(reduct(&p, &[false]).rules.is_empty());
        let r = reduct(&p, &[true]);
        assert_eq!(r.rules, vec![Rule::fact(Atom(0))]);
    }

    #[test]
    fn reduct_of_positive_program_keeps_satisfied_bodies() {
        let p = program_from(&[("a", &["b"], &[], &[]), ("b", &[], &[], &[])]);
        assert_eq!(reduct(&p, &[true, true]).rules, p.rules);
        // the rule with an unsatisfied body is dropped but answer sets agree
        assert_eq!(reduct(&p, &[false, false]).rules.len(), 1);
    }

    #[test]
    fn light_domain_has_single_answer_set() {
        let p = light();
        let all = enumerate_answer_sets_bruteforce(&p, 20).unwrap();
        assert_eq!(all, vec![p.set_from_names(&["switch", "lightOn"])]);
    }

    #[test]
    fn double_negation_has_two_answer_sets() {
        let p = program_from(&[("a", &[], &[], &["a"])]);
        assert!(is_answer_set(&p, &[false]));
        assert!(is_answer_set(&p, &[true]));
        assert_eq!(
            enumerate_answer_sets_bruteforce(&p, 20).unwrap(),
            vec![vec![false], vec![true]]
        );
    }

    #[test]
    fn empty_program() {
        let p = RegularProgram::new();
        assert!(is_answer_set(&p, &[]));
        assert_eq!(
            enumerate_answer_sets_bruteforce(&p, 20).unwrap(),
            vec![Vec::<bool>::new()]
        );
        let mut q = RegularProgram::new();
        q.atom("a");
        assert!(!is_answer_set(&q.with_denials(&[]), &[true]));
    }

    #[test]
    fn bound_is_enforced() {
        let mut p = RegularProgram::new();
        for i in 0..5 {
            let a = p.atom(&format!("a{i}"));
            p.add(Rule::new(Some(a), vec![], vec![], vec![a]));
        }
        assert_eq!(
            enumerate_answer_sets_bruteforce(&p, 4),
            Err(BoundExceeded { atoms: 5, bound: 4 })
        );
        // facts and underivable atoms are not guessed
        let b = p.atom("b");
        p.add(Rule::fact(b));
        p.atom("c");
        assert_eq!(enumerate_answer_sets_bruteforce(&p, 5).unwrap().len(), 32);
    }

    fn arb_program(max_atoms: usize, max_rules: usize) -> impl Strategy<Value = RegularProgram> {
        (1..=max_atoms).prop_flat_map(move |n| {
            let body = proptest::collection::vec((0..n, 0..4u8), 0..3);
            let rule = (proptest::option::weighted(0.8, 0..n), body);
            proptest::collection::vec(rule, 0..=max_rules).prop_map(move |rules| {
                let mut p = RegularProgram::new();
                for i in 0..n {
                    p.atom(&format!("a{i}"));
                }
                for (head, body) in rules {
                    let (mut pos, mut neg, mut nn) = (vec![], vec![], vec![]);
                    for (a, kind) in body {
                        let a = Atom(a as u32);
                        match kind {
                            0 | 1 => pos.push(a),
                            2 => neg.push(a),
                            _ => nn.push(a),
                        }
                    }
                    p.add(Rule::new(head.map(|h| Atom(h as u32)), pos, neg, nn));
                }
                p
            })
        })
    }

    fn complete_record(x: &[bool]) -> Record {
        let lits: Vec<Lit> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| Lit::new(Atom(i as u32), v))
            .collect();
        Record::from_lits(x.len(), &lits)
    }

    fn all_sets(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }

    proptest! {
        #[test]
        fn enumeration_matches_filtering_every_interpretation(p in arb_program(7, 10)) {
            let naive: Vec<Vec<bool>> = all_sets(p.len_atoms()).filter(|x| is_answer_set(&p, x)).collect();
            let mut got = enumerate_answer_sets_bruteforce(&p, 20).unwrap();
            got.sort();
            let mut want = naive;
            want.sort();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn answer_sets_match_model_without_unfounded_subsets(p in arb_program(6, 8)) {
            let clauses = p.clausify();
            let n = p.len_atoms();
            for x in all_sets(n) {
                let m = complete_record(&x);
                let model = clauses.iter().all(|c| c.satisfied_by(&m));
                let no_unfounded = all_sets(n)
                    .filter(|u| u.iter().zip(&x).any(|(&ui, &xi)| ui && xi))
                    .all(|u| {
                        let inside: Vec<bool> = u.iter().zip(&x).map(|(&ui, &xi)| ui && xi).collect();
                        !is_unfounded(&p, &m, &inside)
                    });
                prop_assert_eq!(is_answer_set(&p, &x), model && no_unfounded);
            }
        }

        #[test]
        fn denials_filter_answer_sets(p in arb_program(5, 6), raw in proptest::collection::vec(proptest::collection::vec((0..5u32, any::<bool>()), 1..3), 0..3)) {
            let n = p.len_atoms() as u32;
            let denials: Vec<Denial> = raw
                .into_iter()
                .map(|d| Denial::new(d.into_iter().map(|(a, v)| Lit::new(Atom(a % n), v)).collect()))
                .collect();
            let q = p.with_denials(&denials);
            let clauses: Vec<_> = denials.iter().map(Denial::clause).collect();
            for x in all_sets(p.len_atoms()) {
                let m = complete_record(&x);
                let sat = clauses.iter().all(|c| c.satisfied_by(&m));
                prop_assert_eq!(is_answer_set(&q, &x), is_answer_set(&p, &x) && sat);
            }
        }

        #[test]
        fn unit_propagation_is_an_extending_fixpoint(p in arb_program(6, 8), seed in proptest::collection::vec((0..6u32, any::<bool>()), 0..3)) {
            let n = p.len_atoms();
            let mut m = Record::new(n);
            for (a, v) in seed {
                let a = Atom(a % n as u32);
                if !m.is_assigned(a) {
                    m.push(Lit::new(a, v), true);
                }
            }
            let clauses = p.clausify();
            let out = crate::asp::unit_propagate(&m, &clauses);
            prop_assert_eq!(&out.entries()[..m.len()], m.entries());
            prop_assert!(out.entries()[m.len()..].iter().all(|e| !e.decision));
            if out.is_consistent() {
                prop_assert_eq!(crate::asp::unit_propagate(&out, &clauses), out);
            }
        }

        #[test]
        fn greatest_unfounded_set_is_greatest(p in arb_program(5, 7), seed in proptest::collection::vec((0..5u32, any::<bool>()), 0..3)) {
            let n = p.len_atoms();
            let mut m = Record::new(n);
            for (a, v) in seed {
                let a = Atom(a % n as u32);
                if !m.is_assigned(a) {
                    m.push(Lit::new(a, v), false);
                }
            }
            let g = greatest_unfounded_set(&p, &m);
            prop_assert!(is_unfounded(&p, &m, &g));
            for u in all_sets(n) {
                if is_unfounded(&p, &m, &u) {
                    prop_assert!(u.iter().zip(&g).all(|(&ui, &gi)| !ui || gi));
                }
            }
        }
    }
}

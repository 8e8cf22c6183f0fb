//! Brute-force ground truth: answer sets and extended answer sets by
//! exhaustion, a trace validator and a random program generator.
//!
//! CSP feasibility here is decided by enumerating every assignment, never
//! by the finite-domain solver.

mod negative;
mod random;
mod validate;

use std::collections::HashMap;

pub use negative::{negative_suite, NegativeCase, LIGHT_CLOCK};
pub use random::{random_program, RandomParams};
pub use validate::{validate_trace, ValidationReport, Violation, ViolationKind};

use crate::asp::{enumerate_answer_sets_bruteforce, Atom, BoundExceeded, Lit};
use crate::ca::{CaProgram, Semantics};
use crate::fd::FdError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_atoms: usize,
    /// Largest number of assignments tried for one CSP.
    pub max_assignments: u64,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_atoms: 16,
            max_assignments: 10_000,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Atoms(#[from] BoundExceeded),
    #[error("CSP has {count} assignments, exhaustive search is bounded to {bound}")]
    Assignments { count: u128, bound: u64 },
    #[error(transparent)]
    Fd(#[from] FdError),
}

/// An answer set with every solution of its csp-abstraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    /// Complete literal set, in atom order.
    pub m: Vec<Lit>,
    /// Each α lists the variables of the csp-abstraction in declaration
    /// order.
    pub alphas: Vec<Vec<(String, i64)>>,
}

impl OracleAnswer {
    pub fn atoms(&self) -> Vec<Atom> {
        self.m
            .iter()
            .filter(|l| l.is_pos())
            .map(|l| l.atom())
            .collect()
    }
}

/// Every assignment to the variables constrained by `lits` that satisfies
/// the constraints they impose.
pub fn csp_solutions(
    ca: &CaProgram,
    lits: impl IntoIterator<Item = Lit>,
    semantics: Semantics,
    bounds: &OracleBounds,
) -> Result<Vec<Vec<(String, i64)>>, OracleError> {
    let posted = ca.posted(lits, semantics)?;
    let mut used = vec![false; ca.vars.len()];
    for c in &posted {
        for v in c.vars() {
            used[v] = true;
        }
    }
    let vars: Vec<usize> = (0..ca.vars.len()).filter(|&i| used[i]).collect();
    let count: u128 = vars
        .iter()
        .map(|&v| (ca.vars[v].upper - ca.vars[v].lower + 1) as u128)
        .product();
    if count > bounds.max_assignments as u128 {
        return Err(OracleError::Assignments {
            count,
            bound: bounds.max_assignments,
        });
    }
    let mut e: Vec<i64> = ca.vars.iter().map(|d| d.lower).collect();
    let mut out = Vec::new();
    loop {
        if posted.iter().all(|c| c.satisfied(&e)) {
            out.push(vars.iter().map(|&v| (ca.vars[v].name(), e[v])).collect());
        }
        // odometer over `vars`, last variable fastest
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            let v = vars[k];
            if e[v] < ca.vars[v].upper {
                e[v] += 1;
                break;
            }
            e[v] = ca.vars[v].lower;
        }
    }
}

/// All answer sets under `semantics` with their solutions: M⁺ is an answer
/// set of Π[𝒞] and the constraints of M have a solution.
pub fn enumerate_answer_sets(
    ca: &CaProgram,
    semantics: Semantics,
    bounds: &OracleBounds,
) -> Result<Vec<OracleAnswer>, OracleError> {
    let abstraction = ca.abstraction();
    let mut cache: HashMap<Vec<Lit>, Vec<Vec<(String, i64)>>> = HashMap::new();
    let mut out = Vec::new();
    for x in enumerate_answer_sets_bruteforce(&abstraction, bounds.max_atoms)? {
        let m: Vec<Lit> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| Lit::new(Atom(i as u32), v))
            .collect();
        let key: Vec<Lit> = m
            .iter()
            .copied()
            .filter(|l| ca.is_constraint(l.atom()) && (l.is_pos() || semantics == Semantics::Full))
            .collect();
        let alphas = match cache.get(&key) {
            Some(a) => a.clone(),
            None => {
                let a = csp_solutions(ca, key.iter().copied(), semantics, bounds)?;
                cache.insert(key, a.clone());
                a
            }
        };
        if !alphas.is_empty() {
            out.push(OracleAnswer { m, alphas });
        }
    }
    Ok(out)
}

/// Weak answer sets as atom sets.
pub fn enumerate_weak_answer_sets(ca: &CaProgram) -> Result<Vec<Vec<Atom>>, OracleError> {
    Ok(
        enumerate_answer_sets(ca, Semantics::Weak, &OracleBounds::default())?
            .iter()
            .map(OracleAnswer::atoms)
            .collect(),
    )
}

/// Answer sets as complete literal sets.
pub fn enumerate_full_answer_sets(ca: &CaProgram) -> Result<Vec<Vec<Lit>>, OracleError> {
    Ok(
        enumerate_answer_sets(ca, Semantics::Full, &OracleBounds::default())?
            .into_iter()
            .map(|a| a.m)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::parse_ca;

    fn names(ca: &CaProgram, atoms: &[Atom]) -> Vec<String> {
        let mut v: Vec<String> = atoms.iter().map(|&a| ca.atom_name(a).to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn night_program_weak_and_full() {
        let ca = parse_ca("var x 0 23. night :- |x<6|. am :- |x<12|.").unwrap();
        let mut weak: Vec<Vec<String>> = enumerate_weak_answer_sets(&ca)
            .unwrap()
            .iter()
            .map(|x| names(&ca, x))
            .collect();
        weak.sort();
        assert_eq!(
            weak,
            [
                vec![],
                vec!["am", "night", "|x<12|", "|x<6|"],
                vec!["am", "|x<12|"],
                vec!["night", "|x<6|"],
            ]
        );
        let full = enumerate_full_answer_sets(&ca).unwrap();
        assert_eq!(full.len(), 3);
    }

    #[test]
    fn p1_has_one_answer_set_with_twelve_solutions() {
        let ca = parse_ca(
            "var x 0 23. {switch}. lightOn :- switch, not am. :- not lightOn. {am}. \
             :- |x<12|, not am. :- am, |x>=12|.",
        )
        .unwrap();
        let all = enumerate_answer_sets(&ca, Semantics::Full, &OracleBounds::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            names(&ca, &all[0].atoms()),
            ["lightOn", "switch", "|x>=12|"]
        );
        let xs: Vec<i64> = all[0].alphas.iter().map(|a| a[0].1).collect();
        assert_eq!(xs, (12..=23).collect::<Vec<_>>());
    }

    #[test]
    fn contradictory_denials() {
        let ca = parse_ca("var x 0 23. :- |x<12|. :- |x>10|.").unwrap();
        assert_eq!(
            enumerate_weak_answer_sets(&ca).unwrap(),
            [Vec::<Atom>::new()]
        );
        assert!(enumerate_full_answer_sets(&ca).unwrap().is_empty());
    }

    #[test]
    fn no_constraint_atoms_is_plain_asp() {
        let ca = parse_ca("{a}. b :- not a.").unwrap();
        assert_eq!(enumerate_weak_answer_sets(&ca).unwrap().len(), 2);
        assert_eq!(enumerate_full_answer_sets(&ca).unwrap().len(), 2);
    }

    #[test]
    fn bounds_are_enforced() {
        let ca = parse_ca("var x 0 99999. a :- |x<3|.").unwrap();
        assert!(matches!(
            enumerate_answer_sets(&ca, Semantics::Weak, &OracleBounds::default()),
            Err(OracleError::Assignments { .. })
        ));
        let tight = OracleBounds {
            max_atoms: 1,
            ..OracleBounds::default()
        };
        assert!(matches!(
            enumerate_answer_sets(&ca, Semantics::Weak, &tight),
            Err(OracleError::Atoms(_))
        ));
    }
}

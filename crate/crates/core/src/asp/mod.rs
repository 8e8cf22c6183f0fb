//! Propositional regular programs: clausification, reduct, answer-set
//! checking, unit propagation and unfounded sets.

mod propagate;
mod record;
mod semantics;

use std::collections::HashMap;
use std::fmt;

pub use propagate::{greatest_unfounded_set, is_unfounded, unit_propagate};
pub use record::{Entry, Record};
pub use semantics::{
    enumerate_answer_sets_bruteforce, is_answer_set, least_model, reduct, BoundExceeded,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A literal: an atom or its classical negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(atom: Atom, positive: bool) -> Lit {
        Lit(atom.0 << 1 | u32::from(!positive))
    }

    pub fn pos(atom: Atom) -> Lit {
        Lit::new(atom, true)
    }

    pub fn neg(atom: Atom) -> Lit {
        Lit::new(atom, false)
    }

    pub fn atom(self) -> Atom {
        Atom(self.0 >> 1)
    }

    pub fn is_pos(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// Dense index usable for per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&a) = self.index.get(name) {
            return a;
        }
        let a = Atom(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), a);
        a
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, a: Atom) -> &str {
        &self.names[a.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.names.len() as u32).map(Atom)
    }

    pub fn lit_name(&self, l: Lit) -> String {
        if l.is_pos() {
            self.name(l.atom()).to_string()
        } else {
            format!("-{}", self.name(l.atom()))
        }
    }

    /// Inverse of [`AtomTable::lit_name`].
    pub fn parse_lit(&self, s: &str) -> Option<Lit> {
        match s.strip_prefix('-') {
            Some(rest) => self.get(rest).map(Lit::neg),
            None => self.get(s).map(Lit::pos),
        }
    }
}

/// `head ← pos, not neg, not not negneg`; `head = None` is a denial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Option<Atom>,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
    pub negneg: Vec<Atom>,
}

fn dedup(v: &mut Vec<Atom>) {
    let mut seen = Vec::with_capacity(v.len());
    v.retain(|a| {
        if seen.contains(a) {
            false
        } else {
            seen.push(*a);
            true
        }
    });
}

impl Rule {
    pub fn new(
        head: Option<Atom>,
        mut pos: Vec<Atom>,
        mut neg: Vec<Atom>,
        mut negneg: Vec<Atom>,
    ) -> Rule {
        dedup(&mut pos);
        dedup(&mut neg);
        dedup(&mut negneg);
        Rule {
            head,
            pos,
            neg,
            negneg,
        }
    }

    pub fn fact(a: Atom) -> Rule {
        Rule::new(Some(a), vec![], vec![], vec![])
    }

    /// `{a} ← ` written as `a ← not not a`.
    pub fn choice(a: Atom) -> Rule {
        Rule::new(Some(a), vec![], vec![], vec![a])
    }

    pub fn denial(d: &Denial) -> Rule {
        let pos =
            d.0.iter()
                .filter(|l| l.is_pos())
                .map(|l| l.atom())
                .collect();
        let neg =
            d.0.iter()
                .filter(|l| !l.is_pos())
                .map(|l| l.atom())
                .collect();
        Rule::new(None, pos, neg, vec![])
    }

    /// Complements of the body literals (the set written B̄).
    pub fn body_complement(&self) -> impl Iterator<Item = Lit> + '_ {
        self.pos
            .iter()
            .map(|&a| Lit::neg(a))
            .chain(self.neg.iter().map(|&a| Lit::pos(a)))
            .chain(self.negneg.iter().map(|&a| Lit::neg(a)))
    }

    pub fn body_satisfied_by(&self, x: &[bool]) -> bool {
        self.pos.iter().all(|a| x[a.index()])
            && self.neg.iter().all(|a| !x[a.index()])
            && self.negneg.iter().all(|a| x[a.index()])
    }

    pub fn clause(&self) -> Clause {
        let mut lits: Vec<Lit> = self.head.map(Lit::pos).into_iter().collect();
        lits.extend(self.body_complement());
        Clause::new(lits)
    }
}

/// Disjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(pub Vec<Lit>);

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Clause {
        lits.sort();
        lits.dedup();
        Clause(lits)
    }

    pub fn is_tautology(&self) -> bool {
        self.0.windows(2).any(|w| w[0].atom() == w[1].atom())
    }

    pub fn satisfied_by(&self, m: &Record) -> bool {
        self.0.iter().any(|&l| m.holds(l))
    }
}

/// Headless rule `← l1, …, ln`, stored as its sorted body literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Denial(pub Vec<Lit>);

impl Denial {
    pub fn new(mut lits: Vec<Lit>) -> Denial {
        lits.sort();
        lits.dedup();
        Denial(lits)
    }

    pub fn clause(&self) -> Clause {
        Clause::new(self.0.iter().map(|l| l.negate()).collect())
    }

    pub fn satisfied_by(&self, m: &Record) -> bool {
        self.0.iter().any(|&l| m.holds(l.negate()))
    }

    pub fn to_strings(&self, atoms: &AtomTable) -> Vec<String> {
        self.0.iter().map(|&l| atoms.lit_name(l)).collect()
    }

    pub fn display(&self, atoms: &AtomTable) -> String {
        let body: Vec<String> = self
            .0
            .iter()
            .map(|&l| {
                if l.is_pos() {
                    atoms.name(l.atom()).to_string()
                } else {
                    format!("not {}", atoms.name(l.atom()))
                }
            })
            .collect();
        format!(":- {}.", body.join(", "))
    }
}

#[derive(Clone, Debug, Default)]
pub struct RegularProgram {
    pub atoms: AtomTable,
    pub rules: Vec<Rule>,
}

impl RegularProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(&mut self, name: &str) -> Atom {
        self.atoms.intern(name)
    }

    pub fn add(&mut self, r: Rule) {
        self.rules.push(r);
    }

    pub fn len_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Π extended with `{a}` for each given atom (the asp-abstraction Π[𝒞]).
    pub fn with_choices(&self, atoms: &[Atom]) -> RegularProgram {
        let mut p = self.clone();
        p.rules.extend(atoms.iter().map(|&a| Rule::choice(a)));
        p
    }

    pub fn with_denials(&self, denials: &[Denial]) -> RegularProgram {
        let mut p = self.clone();
        p.rules.extend(denials.iter().map(Rule::denial));
        p
    }

    pub fn clausify(&self) -> Vec<Clause> {
        self.rules.iter().map(Rule::clause).collect()
    }

    pub fn set_from_names(&self, names: &[&str]) -> Vec<bool> {
        let mut x = vec![false; self.atoms.len()];
        for n in names {
            let a = self
                .atoms
                .get(n)
                .unwrap_or_else(|| panic!("unknown atom {n}"));
            x[a.index()] = true;
        }
        x
    }

    pub fn names_of(&self, x: &[bool]) -> Vec<String> {
        self.atoms
            .atoms()
            .filter(|a| x[a.index()])
            .map(|a| self.atoms.name(a).to_string())
            .collect()
    }
}

impl fmt::Display for RegularProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |a: &Atom| self.atoms.name(*a).to_string();
        for r in &self.rules {
            let mut body: Vec<String> = r.pos.iter().map(n).collect();
            body.extend(r.neg.iter().map(|a| format!("not {}", n(a))));
            body.extend(r.negneg.iter().map(|a| format!("not not {}", n(a))));
            let head = r.head.as_ref().map(n).unwrap_or_default();
            if body.is_empty() {
                writeln!(f, "{head}.")?;
            } else if head.is_empty() {
                writeln!(f, ":- {}.", body.join(", "))?;
            } else {
                writeln!(f, "{head} :- {}.", body.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Build a regular program from `(head, pos, neg, negneg)` name tuples.
/// Convenient for tests and examples.
pub fn program_from(rules: &[(&str, &[&str], &[&str], &[&str])]) -> RegularProgram {
    let mut p = RegularProgram::new();
    for (head, pos, neg, negneg) in rules {
        let h = if head.is_empty() {
            None
        } else {
            Some(p.atom(head))
        };
        let pos = pos.iter().map(|n| p.atom(n)).collect();
        let neg = neg.iter().map(|n| p.atom(n)).collect();
        let negneg = negneg.iter().map(|n| p.atom(n)).collect();
        p.add(Rule::new(h, pos, neg, negneg));
    }
    p
}

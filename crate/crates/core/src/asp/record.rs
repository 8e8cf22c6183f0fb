use super::{Atom, AtomTable, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub lit: Lit,
    pub decision: bool,
}

/// Sequence of literals, each possibly marked as a decision, optionally
/// terminated by ⊥.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    entries: Vec<Entry>,
    has: Vec<bool>,
    clashes: usize,
    bottom: bool,
}

impl Record {
    pub fn new(n_atoms: usize) -> Record {
        Record {
            entries: Vec::new(),
            has: vec![false; 2 * n_atoms],
            clashes: 0,
            bottom: false,
        }
    }

    pub fn from_lits(n_atoms: usize, lits: &[Lit]) -> Record {
        let mut r = Record::new(n_atoms);
        for &l in lits {
            r.push(l, false);
        }
        r
    }

    pub fn n_atoms(&self) -> usize {
        self.has.len() / 2
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when neither literals nor ⊥ are present.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && !self.bottom
    }

    pub fn push(&mut self, lit: Lit, decision: bool) {
        debug_assert!(!self.bottom, "literal appended after ⊥");
        debug_assert!(!self.has[lit.code()], "literal appended twice");
        self.has[lit.code()] = true;
        if self.has[lit.negate().code()] {
            self.clashes += 1;
        }
        self.entries.push(Entry { lit, decision });
    }

    pub fn push_bottom(&mut self) {
        self.bottom = true;
    }

    pub fn has_bottom(&self) -> bool {
        self.bottom
    }

    pub fn holds(&self, lit: Lit) -> bool {
        self.has[lit.code()]
    }

    pub fn is_assigned(&self, a: Atom) -> bool {
        self.holds(Lit::pos(a)) || self.holds(Lit::neg(a))
    }

    /// Truth value of an atom when assigned exactly one way.
    pub fn value(&self, a: Atom) -> Option<bool> {
        match (self.holds(Lit::pos(a)), self.holds(Lit::neg(a))) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            _ => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.bottom && self.clashes == 0
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n_atoms()).all(|i| self.is_assigned(Atom(i as u32)))
    }

    pub fn first_unassigned(&self) -> Option<Atom> {
        (0..self.n_atoms() as u32)
            .map(Atom)
            .find(|&a| !self.is_assigned(a))
    }

    pub fn has_decision(&self) -> bool {
        self.entries.iter().any(|e| e.decision)
    }

    pub fn last_decision(&self) -> Option<usize> {
        self.entries.iter().rposition(|e| e.decision)
    }

    pub fn decision_count(&self) -> usize {
        self.entries.iter().filter(|e| e.decision).count()
    }

    /// Drop ⊥ and every entry from position `len` on.
    pub fn truncate(&mut self, len: usize) {
        self.bottom = false;
        while self.entries.len() > len {
            let e = self.entries.pop().expect("non-empty");
            self.has[e.lit.code()] = false;
            if self.has[e.lit.negate().code()] {
                self.clashes -= 1;
            }
        }
    }

    pub fn clear(&mut self) {
        self.truncate(0);
    }

    pub fn literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.entries.iter().map(|e| e.lit)
    }

    /// M⁺ as an indicator vector.
    pub fn positive_set(&self) -> Vec<bool> {
        (0..self.n_atoms())
            .map(|i| self.holds(Lit::pos(Atom(i as u32))))
            .collect()
    }

    /// Lengths of the segments separated by decision literals, ⊥ counted as
    /// a literal of the last segment.
    pub fn level_profile(&self) -> Vec<usize> {
        let mut out = vec![0usize];
        for e in &self.entries {
            if e.decision {
                out.push(0);
            }
            *out.last_mut().expect("non-empty") += 1;
        }
        if self.bottom {
            *out.last_mut().expect("non-empty") += 1;
        }
        out
    }

    pub fn display(&self, atoms: &AtomTable) -> String {
        let mut parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let n = atoms.lit_name(e.lit);
                if e.decision {
                    format!("{n}^")
                } else {
                    n
                }
            })
            .collect();
        if self.bottom {
            parts.push("⊥".into());
        }
        parts.join(" ")
    }
}

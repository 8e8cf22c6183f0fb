use super::term::Term;

pub const CSPDOMAIN: &str = "cspdomain";
pub const CSPVAR: &str = "cspvar";
pub const REQUIRED: &str = "required";

/// Source position of a rule (1-based).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EzAtom {
    pub name: String,
    pub args: Vec<Term>,
}

impl EzAtom {
    pub fn new(name: &str, args: Vec<Term>) -> Self {
        EzAtom {
            name: name.to_string(),
            args,
        }
    }

    /// `cspdomain`, `cspvar` or `required`.
    pub fn is_reserved(&self) -> bool {
        matches!(self.name.as_str(), CSPDOMAIN | CSPVAR | REQUIRED)
    }

    pub fn is_required(&self) -> bool {
        self.name == REQUIRED && self.args.len() == 1
    }

    pub fn key(&self) -> (String, usize) {
        (self.name.clone(), self.args.len())
    }

    pub fn to_term(&self) -> Term {
        Term::compound(&self.name, self.args.clone())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        for a in &self.args {
            a.variables(out);
        }
    }
}

impl std::fmt::Display for EzAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// Number of `not` prefixes on a body literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Naf {
    Pos,
    Not,
    NotNot,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub naf: Naf,
    pub atom: EzAtom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceElem {
    pub atom: EzAtom,
    pub cond: Vec<EzAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub lower: Option<Term>,
    pub upper: Option<Term>,
    pub elems: Vec<ChoiceElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    /// Denial.
    None,
    Atom(EzAtom),
    Choice(Choice),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumElem {
    pub lit: Literal,
    pub weight: Term,
    pub cond: Vec<EzAtom>,
}

/// `L #sum[ elems ] U`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumAggregate {
    pub lower: Option<Term>,
    pub upper: Option<Term>,
    pub elems: Vec<SumElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyElem {
    Lit(Literal),
    /// Built-in comparison such as `W1 < W2` or `W = WR + CR`.
    Builtin(Term),
    Sum(SumAggregate),
}

#[derive(Clone, Debug)]
pub struct EzRule {
    pub head: Head,
    pub body: Vec<BodyElem>,
    pub pos: Pos,
}

impl PartialEq for EzRule {
    /// Structural equality; source positions are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body
    }
}

impl EzRule {
    pub fn fact(atom: EzAtom) -> Self {
        EzRule {
            head: Head::Atom(atom),
            body: Vec::new(),
            pos: Pos::default(),
        }
    }

    pub fn is_denial(&self) -> bool {
        self.head == Head::None
    }

    pub fn is_fact(&self) -> bool {
        matches!(self.head, Head::Atom(_)) && self.body.is_empty()
    }

    pub fn literals(&self, naf: Naf) -> impl Iterator<Item = &EzAtom> {
        self.body.iter().filter_map(move |b| match b {
            BodyElem::Lit(l) if l.naf == naf => Some(&l.atom),
            _ => None,
        })
    }

    pub fn positive(&self) -> impl Iterator<Item = &EzAtom> {
        self.literals(Naf::Pos)
    }

    pub fn negative(&self) -> impl Iterator<Item = &EzAtom> {
        self.literals(Naf::Not)
    }

    pub fn double_negative(&self) -> impl Iterator<Item = &EzAtom> {
        self.literals(Naf::NotNot)
    }

    pub fn builtins(&self) -> impl Iterator<Item = &Term> {
        self.body.iter().filter_map(|b| match b {
            BodyElem::Builtin(t) => Some(t),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EzProgram {
    pub rules: Vec<EzRule>,
}

impl EzProgram {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Facts whose head is `cspdomain/1`.
    pub fn cspdomain_facts(&self) -> Vec<&EzAtom> {
        self.rules
            .iter()
            .filter(|r| r.body.is_empty())
            .filter_map(|r| match &r.head {
                Head::Atom(a) if a.name == CSPDOMAIN => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Facts whose head is `cspvar`.
    pub fn cspvar_facts(&self) -> Vec<&EzAtom> {
        self.rules
            .iter()
            .filter(|r| r.body.is_empty())
            .filter_map(|r| match &r.head {
                Head::Atom(a) if a.name == CSPVAR => Some(a),
                _ => None,
            })
            .collect()
    }
}

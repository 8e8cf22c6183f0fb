//! Constraint answer set programs: a regular program whose constraint atoms
//! are mapped to finite-domain constraints.

mod text;

use std::collections::HashMap;

use crate::asp::{Atom, Lit, RegularProgram, Rule};
use crate::fd::{compile, complement, ConstraintExpr, Csp, Domain, FdError};
use crate::lang::{parse, preprocess, Head, Term};

/// A rule over atom names; `None` as head is a denial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NamedRule {
    pub head: Option<String>,
    pub pos: Vec<String>,
    pub neg: Vec<String>,
    pub negneg: Vec<String>,
}

impl NamedRule {
    fn names(&self) -> impl Iterator<Item = &String> {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .chain(&self.negneg)
    }
}

/// A declared constraint variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableDecl {
    pub var: Term,
    pub lower: i64,
    pub upper: i64,
    /// Declared with explicit bounds rather than the default range.
    pub ranged: bool,
}

impl VariableDecl {
    pub fn new(var: Term, lower: i64, upper: i64) -> VariableDecl {
        VariableDecl {
            var,
            lower,
            upper,
            ranged: true,
        }
    }

    pub fn name(&self) -> String {
        self.var.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Regular,
    /// `cspdomain`, `cspvar` and user-written `required` atoms.
    Reserved,
    Constraint,
    /// Auxiliary atoms introduced by the translation; never printed.
    Hidden,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Semantics {
    #[default]
    Weak,
    Full,
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weak" => Ok(Semantics::Weak),
            "full" => Ok(Semantics::Full),
            other => Err(format!(
                "unknown semantics `{other}` (expected weak or full)"
            )),
        }
    }
}

impl std::fmt::Display for Semantics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Semantics::Weak => "weak",
            Semantics::Full => "full",
        })
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CaError {
    #[error("constraint atom `{0}` occurs in a rule head")]
    ConstraintInHead(String),
    #[error("atom `{0}` is already a constraint atom")]
    DuplicateConstraint(String),
}

pub use text::{parse_ca, CaParseError};

/// A CA program: Π, its constraint atoms 𝒞 and the map γ.
#[derive(Clone, Debug, Default)]
pub struct CaProgram {
    pub pi: RegularProgram,
    pub vars: Vec<VariableDecl>,
    constraint_atoms: Vec<Atom>,
    gamma: HashMap<Atom, ConstraintExpr>,
    kinds: HashMap<Atom, AtomKind>,
}

/// A csp-abstraction together with the declared variable behind each CSP
/// variable.
#[derive(Clone, Debug)]
pub struct Abstraction {
    pub csp: Csp,
    pub decls: Vec<usize>,
}

impl CaProgram {
    pub fn new(pi: RegularProgram, vars: Vec<VariableDecl>) -> CaProgram {
        CaProgram {
            pi,
            vars,
            ..CaProgram::default()
        }
    }

    /// Make `name` a constraint atom with γ = `expr`. Variables in `expr`
    /// index into `vars`.
    pub fn add_constraint(&mut self, name: &str, expr: ConstraintExpr) -> Result<Atom, CaError> {
        let a = self.pi.atom(name);
        if self.gamma.contains_key(&a) {
            return Err(CaError::DuplicateConstraint(name.to_string()));
        }
        self.constraint_atoms.push(a);
        self.gamma.insert(a, expr);
        self.kinds.insert(a, AtomKind::Constraint);
        Ok(a)
    }

    pub fn set_kind(&mut self, a: Atom, kind: AtomKind) {
        self.kinds.insert(a, kind);
    }

    pub fn kind(&self, a: Atom) -> AtomKind {
        self.kinds.get(&a).copied().unwrap_or(AtomKind::Regular)
    }

    pub fn constraint_atoms(&self) -> &[Atom] {
        &self.constraint_atoms
    }

    pub fn is_constraint(&self, a: Atom) -> bool {
        self.gamma.contains_key(&a)
    }

    pub fn gamma(&self, a: Atom) -> Option<&ConstraintExpr> {
        self.gamma.get(&a)
    }

    pub fn atom_name(&self, a: Atom) -> &str {
        self.pi.atoms.name(a)
    }

    /// Build a CA program from `(head, pos, neg, negneg)` name tuples (an empty
    /// head is a denial). Atoms written `|β|` are constraint atoms with γ
    /// given by the EZ constraint `β` over the variables `vars`.
    pub fn from_rules(
        vars: &[(&str, i64, i64)],
        rules: &[(&str, &[&str], &[&str], &[&str])],
    ) -> Result<CaProgram, FdError> {
        let own = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let rules: Vec<NamedRule> = rules
            .iter()
            .map(|(h, p, n, nn)| NamedRule {
                head: (!h.is_empty()).then(|| h.to_string()),
                pos: own(p),
                neg: own(n),
                negneg: own(nn),
            })
            .collect();
        let vars: Vec<(String, i64, i64)> = vars
            .iter()
            .map(|&(v, lo, hi)| (v.to_string(), lo, hi))
            .collect();
        CaProgram::from_named(&vars, &rules)
    }

    pub fn from_named(
        vars: &[(String, i64, i64)],
        rules: &[NamedRule],
    ) -> Result<CaProgram, FdError> {
        let decls: Vec<VariableDecl> = vars
            .iter()
            .map(|(v, lo, hi)| VariableDecl::new(Term::sym(v), *lo, *hi))
            .collect();
        let mut ca = CaProgram::new(RegularProgram::new(), decls);
        for name in rules.iter().flat_map(NamedRule::names) {
            let a = ca.pi.atom(name);
            if let Some(beta) = name.strip_prefix('|').and_then(|n| n.strip_suffix('|')) {
                if !ca.is_constraint(a) {
                    let expr = compile_beta(beta, &ca.vars)?;
                    ca.constraint_atoms.push(a);
                    ca.gamma.insert(a, expr);
                    ca.kinds.insert(a, AtomKind::Constraint);
                }
            }
        }
        for r in rules {
            let ids = |xs: &[String], pi: &mut RegularProgram| {
                xs.iter().map(|x| pi.atom(x)).collect::<Vec<_>>()
            };
            let head = r.head.as_ref().map(|h| ca.pi.atom(h));
            let (p, n, nn) = (
                ids(&r.pos, &mut ca.pi),
                ids(&r.neg, &mut ca.pi),
                ids(&r.negneg, &mut ca.pi),
            );
            ca.pi.add(Rule::new(head, p, n, nn));
        }
        Ok(ca)
    }

    /// No constraint atom is the head of a rule.
    pub fn check(&self) -> Result<(), CaError> {
        for r in &self.pi.rules {
            if let Some(h) = r.head.filter(|h| self.is_constraint(*h)) {
                return Err(CaError::ConstraintInHead(self.atom_name(h).to_string()));
            }
        }
        Ok(())
    }

    /// The asp-abstraction Π[𝒞]: Π plus a choice rule for every constraint
    /// atom.
    pub fn abstraction(&self) -> RegularProgram {
        self.pi.with_choices(&self.constraint_atoms)
    }

    /// The constraints a set of literals imposes: γ(c) for each positive
    /// constraint literal, plus complements of negative ones under full
    /// semantics.
    pub fn posted(
        &self,
        lits: impl IntoIterator<Item = Lit>,
        sem: Semantics,
    ) -> Result<Vec<ConstraintExpr>, FdError> {
        let mut out = Vec::new();
        for l in lits {
            let Some(g) = self.gamma(l.atom()) else {
                continue;
            };
            if l.is_pos() {
                out.push(g.clone());
            } else if sem == Semantics::Full {
                out.push(complement(g)?);
            }
        }
        Ok(out)
    }

    /// The csp-abstraction for the given literals. Only variables occurring
    /// in posted constraints are included, in declaration order.
    pub fn build_csp(
        &self,
        lits: impl IntoIterator<Item = Lit>,
        sem: Semantics,
    ) -> Result<Abstraction, FdError> {
        let posted = self.posted(lits, sem)?;
        let mut used = vec![false; self.vars.len()];
        for c in &posted {
            for v in c.vars() {
                used[v] = true;
            }
        }
        let mut csp = Csp::new();
        let mut decls = Vec::new();
        let mut index = vec![usize::MAX; self.vars.len()];
        for (i, d) in self.vars.iter().enumerate().filter(|(i, _)| used[*i]) {
            index[i] = csp.add_var(d.name(), Domain::range(d.lower, d.upper));
            decls.push(i);
        }
        for c in posted {
            csp.post(c.map_vars(&|v| index[v]))?;
        }
        Ok(Abstraction { csp, decls })
    }
}

fn compile_beta(beta: &str, vars: &[VariableDecl]) -> Result<ConstraintExpr, FdError> {
    let not_constraint = || FdError::NotAConstraint(beta.to_string());
    let p = parse(&format!("required({beta}).")).map_err(|_| not_constraint())?;
    let p = preprocess(&p).map_err(|_| not_constraint())?;
    let Some(Head::Atom(a)) = p.rules.first().map(|r| &r.head) else {
        return Err(not_constraint());
    };
    compile(&a.args[0], &|t| vars.iter().position(|d| &d.var == t))
}

//! Search over the states M‖Γ‖Λ of a CA program under the black-box,
//! grey-box and clear-box integration schemas.

mod trace;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use trace::{
    failstate_digest, lit_names, state_digest, RuleName, Trace, TraceError, TraceStep, BOTTOM,
};

use crate::asp::{greatest_unfounded_set, Atom, Clause, Denial, Lit, Record, RegularProgram};
use crate::ca::{CaProgram, Semantics};
use crate::fd::FdError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Schema {
    /// The CSP is consulted on complete assignments only; a conflict is
    /// followed by Learn and Restart_t.
    #[default]
    Black,
    /// As black-box, but conflicts are followed by Restart, which keeps Λ.
    Grey,
    /// The CSP is consulted on partial assignments every `check_freq`
    /// decisions; conflicts are followed by Learn and Backtrack.
    Clear,
}

impl Schema {
    pub const ALL: [Schema; 3] = [Schema::Black, Schema::Grey, Schema::Clear];
}

impl FromStr for Schema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "black" => Ok(Schema::Black),
            "grey" | "gray" => Ok(Schema::Grey),
            "clear" => Ok(Schema::Clear),
            other => Err(format!(
                "unknown schema `{other}` (expected black, grey or clear)"
            )),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::Black => "black",
            Schema::Grey => "grey",
            Schema::Clear => "clear",
        })
    }
}

/// Truth value tried first by Decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Polarity {
    #[default]
    Positive,
    Negative,
}

pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub struct SchemaConfig {
    pub schema: Schema,
    pub semantics: Semantics,
    /// Clear-box: consult the CSP after this many decisions (at least 1).
    pub check_freq: u32,
    /// Stop after this many extended answer sets; `None` enumerates all.
    pub limit: Option<u64>,
    pub step_budget: u64,
    pub polarity: Polarity,
    /// Record a trace of every transition.
    pub trace: bool,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        SchemaConfig {
            schema: Schema::Black,
            semantics: Semantics::Weak,
            check_freq: 1,
            limit: None,
            step_budget: DEFAULT_STEP_BUDGET,
            polarity: Polarity::Positive,
            trace: false,
        }
    }
}

impl SchemaConfig {
    pub fn new(schema: Schema, semantics: Semantics) -> SchemaConfig {
        SchemaConfig {
            schema,
            semantics,
            ..SchemaConfig::default()
        }
    }
}

/// A complete consistent M with a solution α of its csp-abstraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedAnswerSet {
    /// One literal per atom, in atom order.
    pub m: Vec<Lit>,
    /// Values of the variables of the csp-abstraction, in declaration order.
    pub alpha: Vec<(String, i64)>,
}

impl ExtendedAnswerSet {
    /// M⁺ in atom order.
    pub fn atoms(&self) -> Vec<Atom> {
        self.m
            .iter()
            .filter(|l| l.is_pos())
            .map(|l| l.atom())
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub steps: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub unfounded: u64,
    pub backtracks: u64,
    pub cp_checks: u64,
    pub cp_conflicts: u64,
    pub learned: u64,
    pub restarts: u64,
    /// Complete consistent assignments handed to the CSP.
    pub candidates: u64,
    pub models: u64,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub answers: Vec<ExtendedAnswerSet>,
    /// The search space was exhausted (Failstate reached).
    pub exhausted: bool,
    /// The final Γ.
    pub learned: Vec<Denial>,
    pub stats: Stats,
    pub trace: Option<Trace>,
}

impl Outcome {
    pub fn is_unsat(&self) -> bool {
        self.exhausted && self.answers.is_empty()
    }

    /// Distinct M⁺ in order of discovery.
    pub fn atom_sets(&self) -> Vec<Vec<Atom>> {
        let mut out: Vec<Vec<Atom>> = Vec::new();
        for a in &self.answers {
            let x = a.atoms();
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        out
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("step budget of {0} exhausted")]
    StepBudget(u64),
    #[error(transparent)]
    Fd(#[from] FdError),
}

/// The cp-entailed denial for an infeasible M: its constraint literals,
/// positive ones only under weak semantics.
pub fn cp_entailed_denial(ca: &CaProgram, m: &Record, semantics: Semantics) -> Denial {
    Denial::new(
        m.literals()
            .filter(|l| ca.is_constraint(l.atom()) && (l.is_pos() || semantics == Semantics::Full))
            .collect(),
    )
}

/// Is the csp-abstraction of `lits` infeasible?
pub fn cp_conflict(
    ca: &CaProgram,
    lits: impl IntoIterator<Item = Lit>,
    semantics: Semantics,
) -> Result<bool, FdError> {
    Ok(ca.build_csp(lits, semantics)?.csp.solve()?.is_none())
}

/// Run the search from ∅‖∅‖∅. A limit of `Some(0)` means no limit.
pub fn solve_ca(ca: &CaProgram, cfg: &SchemaConfig) -> Result<Outcome, EngineError> {
    let cfg = SchemaConfig {
        limit: cfg.limit.filter(|&n| n > 0),
        ..cfg.clone()
    };
    Solver::new(ca, &cfg).run()
}

struct Solver<'a> {
    ca: &'a CaProgram,
    cfg: &'a SchemaConfig,
    program: RegularProgram,
    clauses: Vec<Clause>,
    /// Clause indices by literal occurring in them.
    occurs: Vec<Vec<usize>>,
    m: Record,
    gamma: Vec<Denial>,
    lambda: Vec<Denial>,
    blocks: Vec<Denial>,
    known: HashSet<Denial>,
    pending: Vec<Lit>,
    full_scan: bool,
    /// Fail has been applied.
    failed: bool,
    since_check: u32,
    stats: Stats,
    trace: Option<Trace>,
}

enum Step {
    Continue,
    Stop,
}

impl<'a> Solver<'a> {
    fn new(ca: &'a CaProgram, cfg: &'a SchemaConfig) -> Solver<'a> {
        let program = ca.abstraction();
        let n = program.len_atoms();
        let mut s = Solver {
            ca,
            cfg,
            clauses: Vec::new(),
            occurs: vec![Vec::new(); 2 * n],
            m: Record::new(n),
            gamma: Vec::new(),
            lambda: Vec::new(),
            blocks: Vec::new(),
            known: HashSet::new(),
            pending: Vec::new(),
            full_scan: true,
            failed: false,
            since_check: 0,
            stats: Stats::default(),
            trace: cfg.trace.then(|| Trace::new(cfg.semantics)),
            program,
        };
        for c in s.program.clausify() {
            s.add_clause(c);
        }
        s
    }

    fn add_clause(&mut self, c: Clause) {
        if c.is_tautology() {
            return;
        }
        let i = self.clauses.len();
        for l in &c.0 {
            self.occurs[l.code()].push(i);
        }
        self.clauses.push(c);
        self.full_scan = true;
    }

    fn record(
        &mut self,
        rule: RuleName,
        payload: Vec<String>,
        alpha: Option<Vec<(String, i64)>>,
    ) -> Result<(), EngineError> {
        if !matches!(rule, RuleName::Answer | RuleName::End) {
            self.stats.steps += 1;
            if self.stats.steps > self.cfg.step_budget {
                return Err(EngineError::StepBudget(self.cfg.step_budget));
            }
        }
        if let Some(t) = &mut self.trace {
            self.failed |= rule == RuleName::Fail;
            let digest = if self.failed {
                failstate_digest()
            } else {
                state_digest(&self.m, &self.gamma, &self.lambda, &self.blocks)
            };
            t.steps.push(TraceStep {
                rule,
                payload,
                alpha,
                digest: Some(digest),
            });
        }
        Ok(())
    }

    fn names(&self, lits: &[Lit]) -> Vec<String> {
        if self.trace.is_some() {
            lit_names(lits, &self.ca.pi.atoms)
        } else {
            Vec::new()
        }
    }

    /// Unit propagation to fixpoint, one UnitPropagate step per literal.
    fn unit_propagate(&mut self) -> Result<(), EngineError> {
        if self.full_scan {
            self.full_scan = false;
            self.pending.clear();
            for i in 0..self.clauses.len() {
                if !self.m.is_consistent() {
                    return Ok(());
                }
                self.visit(i)?;
            }
        }
        while let Some(l) = self.pending.pop() {
            if !self.m.is_consistent() {
                break;
            }
            for k in 0..self.occurs[l.negate().code()].len() {
                if !self.m.is_consistent() {
                    break;
                }
                let i = self.occurs[l.negate().code()][k];
                self.visit(i)?;
            }
        }
        self.pending.clear();
        Ok(())
    }

    fn visit(&mut self, i: usize) -> Result<(), EngineError> {
        let c = &self.clauses[i];
        if c.satisfied_by(&self.m) {
            return Ok(());
        }
        let mut free = c.0.iter().filter(|&&l| !self.m.holds(l.negate()));
        let unit = match (free.next(), free.next()) {
            (None, _) => match c.0.first() {
                Some(&l) => l,
                None => {
                    self.m.push_bottom();
                    self.stats.propagations += 1;
                    return self.record(RuleName::UnitPropagate, vec![BOTTOM.into()], None);
                }
            },
            (Some(&l), None) => l,
            _ => return Ok(()),
        };
        self.m.push(unit, false);
        self.pending.push(unit);
        self.stats.propagations += 1;
        let p = self.names(&[unit]);
        self.record(RuleName::UnitPropagate, p, None)
    }

    /// Add ¬a for the atoms of the greatest unfounded set not yet false.
    /// Returns whether anything was added.
    fn unfounded(&mut self) -> Result<bool, EngineError> {
        let u = greatest_unfounded_set(&self.program, &self.m);
        let mut added = false;
        for (i, _) in u.iter().enumerate().filter(|(_, &x)| x) {
            let l = Lit::neg(Atom(i as u32));
            if self.m.holds(l) {
                continue;
            }
            self.m.push(l, false);
            self.pending.push(l);
            self.stats.unfounded += 1;
            added = true;
            let p = self.names(&[l]);
            self.record(RuleName::Unfounded, p, None)?;
            if !self.m.is_consistent() {
                break;
            }
        }
        Ok(added)
    }

    fn learn(&mut self, r: Denial) -> Result<bool, EngineError> {
        if !self.known.insert(r.clone()) {
            return Ok(false);
        }
        self.stats.learned += 1;
        let p = self.names(&r.0);
        self.add_clause(r.clause());
        self.gamma.push(r);
        self.record(RuleName::Learn, p, None)?;
        Ok(true)
    }

    fn restart(&mut self) -> Result<(), EngineError> {
        self.m.clear();
        self.pending.clear();
        self.full_scan = true;
        self.since_check = 0;
        self.stats.restarts += 1;
        match self.cfg.schema {
            Schema::Black => {
                self.lambda.clear();
                self.record(RuleName::RestartT, vec![], None)
            }
            _ => self.record(RuleName::Restart, vec![], None),
        }
    }

    fn decide(&mut self, a: Atom) -> Result<(), EngineError> {
        let l = Lit::new(a, self.cfg.polarity == Polarity::Positive);
        self.m.push(l, true);
        self.pending.push(l);
        self.since_check += 1;
        self.stats.decisions += 1;
        let p = self.names(&[l]);
        self.record(RuleName::Decide, p, None)
    }

    fn conflict(&mut self) -> Result<Step, EngineError> {
        let Some(k) = self.m.last_decision() else {
            self.record(RuleName::Fail, vec![], None)?;
            return Ok(Step::Stop);
        };
        let l = self.m.entries()[k].lit.negate();
        self.m.truncate(k);
        self.m.push(l, false);
        self.pending.clear();
        self.full_scan = true;
        self.stats.backtracks += 1;
        let p = self.names(&[l]);
        self.record(RuleName::Backtrack, p, None)?;
        Ok(Step::Continue)
    }

    /// Consult the CSP on the current M; on failure apply CP-Propagate,
    /// Learn and the schema's follow-up. Returns the csp-abstraction when
    /// feasible.
    fn check(&mut self) -> Result<Option<crate::ca::Abstraction>, EngineError> {
        self.since_check = 0;
        self.stats.cp_checks += 1;
        let k = self.ca.build_csp(self.m.literals(), self.cfg.semantics)?;
        if k.csp.solve()?.is_some() {
            return Ok(Some(k));
        }
        self.stats.cp_conflicts += 1;
        let r = cp_entailed_denial(self.ca, &self.m, self.cfg.semantics);
        self.m.push_bottom();
        self.record(RuleName::CpPropagate, vec![], None)?;
        let fresh = self.learn(r)?;
        debug_assert!(
            fresh,
            "a cp-entailed denial violated by a propagated M is new"
        );
        if fresh && self.cfg.schema != Schema::Clear {
            self.restart()?;
        }
        Ok(None)
    }

    /// Report the extended answer sets of a complete M and block it.
    fn answer(
        &mut self,
        k: crate::ca::Abstraction,
        done: &mut Vec<ExtendedAnswerSet>,
    ) -> Result<Step, EngineError> {
        self.stats.models += 1;
        let remaining = self.cfg.limit.map(|n| n - done.len() as u64);
        let sols = k.csp.enumerate(remaining)?;
        let mut m: Vec<Lit> = self.m.literals().collect();
        m.sort_by_key(|l| l.atom());
        for s in sols.solutions {
            let alpha: Vec<(String, i64)> = k
                .decls
                .iter()
                .map(|&d| self.ca.vars[d].name())
                .zip(s)
                .collect();
            let p = self.names(&m);
            self.record(RuleName::Answer, p, Some(alpha.clone()))?;
            done.push(ExtendedAnswerSet {
                m: m.clone(),
                alpha,
            });
        }
        if self.cfg.limit.is_some_and(|n| done.len() as u64 >= n) {
            return Ok(Step::Stop);
        }
        let b = Denial::new(m);
        let p = self.names(&b.0);
        self.add_clause(b.clause());
        self.known.insert(b.clone());
        self.blocks.push(b);
        self.record(RuleName::Block, p, None)?;
        Ok(Step::Continue)
    }

    fn run(mut self) -> Result<Outcome, EngineError> {
        let mut answers = Vec::new();
        let freq = self.cfg.check_freq.max(1);
        let exhausted = loop {
            if !self.m.is_consistent() {
                match self.conflict()? {
                    Step::Continue => continue,
                    Step::Stop => break true,
                }
            }
            self.unit_propagate()?;
            if !self.m.is_consistent() {
                continue;
            }
            if self.unfounded()? {
                continue;
            }
            let next = self.m.first_unassigned();
            let complete = next.is_none();
            let due = complete || (self.cfg.schema == Schema::Clear && self.since_check >= freq);
            if due {
                if complete {
                    self.stats.candidates += 1;
                }
                match self.check()? {
                    None => continue,
                    Some(k) if complete => match self.answer(k, &mut answers)? {
                        Step::Continue => continue,
                        Step::Stop => break false,
                    },
                    Some(_) => {}
                }
            }
            if let Some(a) = next {
                self.decide(a)?;
            }
        };
        self.record(RuleName::End, vec![], None)?;
        Ok(Outcome {
            answers,
            exhausted,
            learned: self.gamma,
            stats: self.stats,
            trace: self.trace,
        })
    }
}

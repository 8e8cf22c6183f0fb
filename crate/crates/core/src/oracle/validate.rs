//! Replay of a trace against the transition rules, restart-safety and the
//! termination measure.

use std::fmt;

use crate::asp::{
    enumerate_answer_sets_bruteforce, greatest_unfounded_set, is_answer_set, Clause, Denial, Lit,
    Record, RegularProgram,
};
use crate::ca::{CaProgram, Semantics};
use crate::engine::{
    cp_conflict, failstate_digest, state_digest, RuleName, Trace, TraceStep, BOTTOM,
};

use super::{enumerate_answer_sets, OracleBounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A payload that does not name literals of the program.
    Payload,
    /// The rule's applicability condition does not hold.
    Guard,
    /// A Restart or Restart_t edge without its own preceding Learn.
    RestartSafety,
    /// The termination measure does not increase.
    Measure,
    Digest,
    /// The run ends in a state where a basic rule still applies.
    NotSemiTerminal,
    /// A step after Failstate or after End.
    AfterEnd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index into the trace's steps.
    pub step: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {:?}: {}", self.step, self.kind, self.detail)
    }
}

impl std::error::Error for Violation {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub steps: usize,
    pub learned: usize,
    pub restarts: usize,
    pub answers: usize,
    /// The trace carries an End record.
    pub complete: bool,
}

struct Replay<'a> {
    ca: &'a CaProgram,
    semantics: Semantics,
    program: RegularProgram,
    base: Vec<Clause>,
    m: Record,
    gamma: Vec<Denial>,
    lambda: Vec<Denial>,
    blocks: Vec<Denial>,
    failed: bool,
    /// An unfounded set on some subset of the current M.
    unfounded: Option<Vec<bool>>,
    learned_since_restart: bool,
}

type Check = Result<(), (ViolationKind, String)>;

fn guard(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err((ViolationKind::Guard, msg()))
    }
}

impl Replay<'_> {
    fn lit(&self, s: &str) -> Result<Lit, (ViolationKind, String)> {
        self.ca
            .pi
            .atoms
            .parse_lit(s)
            .ok_or_else(|| (ViolationKind::Payload, format!("unknown literal `{s}`")))
    }

    fn single(&self, step: &TraceStep) -> Result<Lit, (ViolationKind, String)> {
        match step.payload.as_slice() {
            [s] => self.lit(s),
            _ => Err((
                ViolationKind::Payload,
                "expected exactly one literal".into(),
            )),
        }
    }

    fn denial(&self, step: &TraceStep) -> Result<Denial, (ViolationKind, String)> {
        Ok(Denial::new(
            step.payload
                .iter()
                .map(|s| self.lit(s))
                .collect::<Result<_, _>>()?,
        ))
    }

    fn extra(&self) -> impl Iterator<Item = &Denial> {
        self.gamma.iter().chain(&self.lambda).chain(&self.blocks)
    }

    fn clauses(&self) -> impl Iterator<Item = Clause> + '_ {
        self.base
            .iter()
            .cloned()
            .chain(self.extra().map(Denial::clause))
    }

    fn extended_program(&self) -> RegularProgram {
        let extra: Vec<Denial> = self.extra().cloned().collect();
        self.program.with_denials(&extra)
    }

    fn extended_ca(&self) -> CaProgram {
        let mut ca = self.ca.clone();
        let extra: Vec<Denial> = self.extra().cloned().collect();
        ca.pi = ca.pi.with_denials(&extra);
        ca
    }

    fn in_unfounded(&mut self, l: Lit) -> bool {
        let a = l.atom().index();
        if self.unfounded.as_ref().is_some_and(|u| u[a]) {
            return true;
        }
        let u = greatest_unfounded_set(&self.program, &self.m);
        let hit = u[a];
        self.unfounded = Some(u);
        hit
    }

    fn measure(&self) -> (usize, usize, Vec<usize>) {
        (self.gamma.len(), self.lambda.len(), self.m.level_profile())
    }

    fn cp_infeasible(&self, lits: Vec<Lit>) -> Result<bool, (ViolationKind, String)> {
        cp_conflict(self.ca, lits, self.semantics)
            .map_err(|e| (ViolationKind::Guard, e.to_string()))
    }

    /// No rule other than Learn, Learn_t, Restart and Restart_t applies.
    fn semi_terminal(&mut self) -> Check {
        let not_semi = |msg: &str| Err((ViolationKind::NotSemiTerminal, msg.to_string()));
        if self.failed {
            return Ok(());
        }
        if !self.m.is_consistent() {
            return not_semi("M is inconsistent");
        }
        if !self.m.is_complete() {
            return not_semi("M is not complete, Decide applies");
        }
        if let Some(c) = self.clauses().find(|c| !c.satisfied_by(&self.m)) {
            return not_semi(&format!(
                "clause {:?} is falsified, UnitPropagate applies",
                c.0
            ));
        }
        let u = greatest_unfounded_set(&self.program, &self.m);
        if let Some(a) =
            (0..u.len()).find(|&i| u[i] && self.m.holds(Lit::pos(crate::asp::Atom(i as u32))))
        {
            return not_semi(&format!(
                "atom {} is unfounded",
                self.ca.pi.atoms.name(crate::asp::Atom(a as u32))
            ));
        }
        if self.cp_infeasible(self.m.literals().collect())? {
            return not_semi("csp-abstraction has no solution, CP-Propagate applies");
        }
        Ok(())
    }

    fn entailed(&self, r: &Denial) -> Check {
        if self.cp_infeasible(r.0.clone())? {
            return Ok(());
        }
        let bounds = OracleBounds::default();
        let answers =
            enumerate_answer_sets(&self.extended_ca(), self.semantics, &bounds).map_err(|e| {
                (
                    ViolationKind::Guard,
                    format!("entailment of the learned denial is not verifiable: {e}"),
                )
            })?;
        let holds = |m: &[Lit], l: Lit| m.contains(&l);
        guard(
            answers.iter().all(|a| !r.0.iter().all(|&l| holds(&a.m, l))),
            || "learned denial is not entailed".into(),
        )
    }

    fn asp_entailed(&self, l: Lit) -> Check {
        let bounds = OracleBounds::default();
        let answers = enumerate_answer_sets_bruteforce(&self.extended_program(), bounds.max_atoms)
            .map_err(|e| {
                (
                    ViolationKind::Guard,
                    format!("asp-entailment is not verifiable: {e}"),
                )
            })?;
        let ok = answers
            .iter()
            .filter(|x| self.m.literals().all(|k| x[k.atom().index()] == k.is_pos()))
            .all(|x| x[l.atom().index()] == l.is_pos());
        guard(ok, || {
            format!("{} is not asp-entailed", self.ca.pi.atoms.lit_name(l))
        })
    }

    fn answer(&self, step: &TraceStep) -> Check {
        let mut claimed: Vec<Lit> = step
            .payload
            .iter()
            .map(|s| self.lit(s))
            .collect::<Result<_, _>>()?;
        claimed.sort();
        let mut m: Vec<Lit> = self.m.literals().collect();
        m.sort();
        guard(claimed == m, || "reported literals differ from M".into())?;
        let x = self.m.positive_set();
        guard(is_answer_set(&self.extended_program(), &x), || {
            "M⁺ is not an answer set".into()
        })?;
        let k = self
            .ca
            .build_csp(self.m.literals(), self.semantics)
            .map_err(|e| (ViolationKind::Guard, e.to_string()))?;
        let alpha = step.alpha.clone().unwrap_or_default();
        let names: Vec<String> = k.decls.iter().map(|&d| self.ca.vars[d].name()).collect();
        let given: Vec<&String> = alpha.iter().map(|(n, _)| n).collect();
        guard(given.iter().copied().eq(names.iter()), || {
            format!("α covers {given:?}, expected {names:?}")
        })?;
        let values: Vec<i64> = alpha.iter().map(|(_, v)| *v).collect();
        guard(k.csp.satisfied_by(&values), || {
            "α does not solve the csp-abstraction".into()
        })
    }

    fn apply(&mut self, step: &TraceStep, prev: Option<RuleName>) -> Check {
        if self.failed && step.rule != RuleName::End {
            return Err((ViolationKind::AfterEnd, "step after Failstate".into()));
        }
        match step.rule {
            RuleName::Init => return Err((ViolationKind::Payload, "repeated Init record".into())),
            RuleName::Decide => {
                let l = self.single(step)?;
                guard(self.m.is_consistent(), || "M is inconsistent".into())?;
                guard(!self.m.is_assigned(l.atom()), || {
                    format!("{} is already assigned", step.payload[0])
                })?;
                self.m.push(l, true);
            }
            RuleName::Fail => {
                guard(!self.m.is_consistent(), || "M is consistent".into())?;
                guard(!self.m.has_decision(), || {
                    "M contains a decision literal".into()
                })?;
                self.failed = true;
            }
            RuleName::Backtrack => {
                let l = self.single(step)?;
                guard(!self.m.is_consistent(), || "M is consistent".into())?;
                let k = self
                    .m
                    .last_decision()
                    .ok_or((ViolationKind::Guard, "M has no decision literal".into()))?;
                let flipped = self.m.entries()[k].lit.negate();
                guard(l == flipped, || {
                    format!("expected {}", self.ca.pi.atoms.lit_name(flipped))
                })?;
                self.m.truncate(k);
                self.m.push(l, false);
                self.unfounded = None;
            }
            RuleName::UnitPropagate => {
                guard(self.m.is_consistent(), || "M is inconsistent".into())?;
                if step.payload == [BOTTOM] {
                    guard(self.clauses().any(|c| c.0.is_empty()), || {
                        "no empty clause".into()
                    })?;
                    self.m.push_bottom();
                } else {
                    let l = self.single(step)?;
                    guard(!self.m.holds(l), || "literal already in M".into())?;
                    let m = &self.m;
                    let unit_on = |mut lits: std::slice::Iter<'_, Lit>, negated: bool| {
                        let lit = |k: Lit| if negated { k.negate() } else { k };
                        lits.clone().any(|&k| lit(k) == l)
                            && lits.all(|&k| lit(k) == l || m.holds(lit(k).negate()))
                    };
                    let unit = self.base.iter().any(|c| unit_on(c.0.iter(), false))
                        || self.extra().any(|d| unit_on(d.0.iter(), true));
                    guard(unit, || format!("no clause is unit on {}", step.payload[0]))?;
                    self.m.push(l, false);
                }
            }
            RuleName::Unfounded => {
                let l = self.single(step)?;
                guard(self.m.is_consistent(), || "M is inconsistent".into())?;
                guard(!l.is_pos() && !self.m.holds(l), || {
                    "expected a new negative literal".into()
                })?;
                let hit = self.in_unfounded(l);
                guard(hit, || {
                    format!(
                        "{} is not in an unfounded set",
                        self.ca.pi.atoms.name(l.atom())
                    )
                })?;
                self.m.push(l, false);
            }
            RuleName::AspPropagate => {
                let l = self.single(step)?;
                guard(self.m.is_consistent(), || "M is inconsistent".into())?;
                guard(!self.m.holds(l), || "literal already in M".into())?;
                self.asp_entailed(l)?;
                self.m.push(l, false);
            }
            RuleName::CpPropagate => {
                guard(self.cp_infeasible(self.m.literals().collect())?, || {
                    "csp-abstraction has a solution".into()
                })?;
                self.m.push_bottom();
            }
            RuleName::Learn | RuleName::LearnT => {
                let r = self.denial(step)?;
                guard(!self.extra().any(|d| *d == r), || {
                    "denial already learned".into()
                })?;
                self.entailed(&r)?;
                if step.rule == RuleName::Learn {
                    self.gamma.push(r);
                } else {
                    self.lambda.push(r);
                }
                self.learned_since_restart = true;
            }
            RuleName::Restart | RuleName::RestartT => {
                guard(!self.m.is_empty(), || "M is empty".into())?;
                if !self.learned_since_restart {
                    return Err((
                        ViolationKind::RestartSafety,
                        "no Learn edge of its own precedes this restart".into(),
                    ));
                }
                self.learned_since_restart = false;
                self.m.clear();
                self.unfounded = None;
                if step.rule == RuleName::RestartT {
                    self.lambda.clear();
                }
            }
            RuleName::Answer => {
                self.semi_terminal()?;
                self.answer(step)?;
            }
            RuleName::Block => {
                guard(prev == Some(RuleName::Answer), || {
                    "Block must follow an Answer".into()
                })?;
                let r = self.denial(step)?;
                guard(r.0.iter().all(|&l| self.m.holds(l)), || {
                    "blocking denial is not violated by M".into()
                })?;
                self.blocks.push(r);
            }
            RuleName::End => self.semi_terminal()?,
        }
        Ok(())
    }

    fn digest(&self) -> String {
        if self.failed {
            failstate_digest()
        } else {
            state_digest(&self.m, &self.gamma, &self.lambda, &self.blocks)
        }
    }
}

/// Check every step of `t` against the transition rules for `ca`, that
/// every restart has its own preceding Learn, that the termination measure
/// increases on every other step, and that a run ending in End stops at a
/// semi-terminal state or Failstate.
pub fn validate_trace(t: &Trace, ca: &CaProgram) -> Result<ValidationReport, Violation> {
    let program = ca.abstraction();
    let base = program
        .clausify()
        .into_iter()
        .filter(|c| !c.is_tautology())
        .collect();
    let mut r = Replay {
        ca,
        semantics: t.semantics,
        m: Record::new(program.len_atoms()),
        program,
        base,
        gamma: Vec::new(),
        lambda: Vec::new(),
        blocks: Vec::new(),
        failed: false,
        unfounded: None,
        learned_since_restart: false,
    };
    let mut report = ValidationReport::default();
    let mut prev: Option<RuleName> = None;
    for (i, step) in t.steps.iter().enumerate() {
        let fail = |(kind, detail): (ViolationKind, String)| Violation {
            step: i,
            kind,
            detail,
        };
        if report.complete {
            return Err(fail((ViolationKind::AfterEnd, "step after End".into())));
        }
        let before = r.measure();
        r.apply(step, prev).map_err(fail)?;
        let counted = !matches!(
            step.rule,
            RuleName::Restart
                | RuleName::RestartT
                | RuleName::Answer
                | RuleName::Block
                | RuleName::End
                | RuleName::Fail
        );
        if counted && r.measure() <= before {
            return Err(fail((
                ViolationKind::Measure,
                "termination measure does not increase".into(),
            )));
        }
        if let Some(d) = &step.digest {
            if *d != r.digest() {
                return Err(fail((
                    ViolationKind::Digest,
                    "state digest differs from the replayed state".into(),
                )));
            }
        }
        match step.rule {
            RuleName::Learn | RuleName::LearnT => report.learned += 1,
            RuleName::Restart | RuleName::RestartT => report.restarts += 1,
            RuleName::Answer => report.answers += 1,
            RuleName::End => report.complete = true,
            _ => {}
        }
        report.steps += 1;
        prev = Some(step.rule);
    }
    Ok(report)
}

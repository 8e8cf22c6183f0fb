//! Hand-mutated traces that the validator must reject.

use crate::ca::{parse_ca, CaProgram, Semantics};
use crate::engine::{solve_ca, Polarity, RuleName, Schema, SchemaConfig, Trace, TraceStep};

use super::ViolationKind;

/// The light program with the clock variable: the only answer set has
/// switch, lightOn and |x>=12| true.
pub const LIGHT_CLOCK: &str =
    "var x 0 23.\n{switch}.\nlightOn :- switch, not am.\n:- not lightOn.\n{am}.\n\
                               :- |x<12|, not am.\n:- am, |x>=12|.\n";

#[derive(Clone, Debug)]
pub struct NegativeCase {
    pub name: &'static str,
    pub ca: CaProgram,
    pub trace: Trace,
    /// The step the validator must reject.
    pub step: usize,
    pub kind: ViolationKind,
}

fn step(rule: RuleName, payload: &[&str]) -> TraceStep {
    TraceStep::new(rule, payload.iter().map(|s| s.to_string()).collect())
}

fn find(t: &Trace, pred: impl Fn(&TraceStep) -> bool) -> usize {
    t.steps
        .iter()
        .position(pred)
        .expect("the base trace has the step being mutated")
}

/// Ten mutated traces, each paired with the violation it must produce.
pub fn negative_suite() -> Vec<NegativeCase> {
    let ca = parse_ca(LIGHT_CLOCK).expect("built-in program parses");
    let cfg = SchemaConfig {
        polarity: Polarity::Negative,
        trace: true,
        ..SchemaConfig::new(Schema::Clear, Semantics::Full)
    };
    let clear = solve_ca(&ca, &cfg)
        .expect("built-in program solves")
        .trace
        .expect("tracing is on");
    let mut out = Vec::new();
    let mut case = |name, trace: Trace, step, kind| {
        out.push(NegativeCase {
            name,
            ca: ca.clone(),
            trace,
            step,
            kind,
        })
    };

    let mut t = clear.clone();
    let i = find(&t, |s| s.rule == RuleName::Decide);
    t.steps[i].payload = vec!["lightOn".into()];
    case("decide on an assigned atom", t, i, ViolationKind::Guard);

    let mut t = clear.clone();
    let i = find(&t, |s| s.rule == RuleName::Backtrack);
    let flipped = &t.steps[i].payload[0];
    t.steps[i].payload = vec![flipped
        .strip_prefix('-')
        .map_or_else(|| format!("-{flipped}"), str::to_string)];
    case("backtrack keeps the decision", t, i, ViolationKind::Guard);

    let mut t = clear.clone();
    t.steps.insert(1, step(RuleName::CpPropagate, &[]));
    case(
        "cp-propagate on a feasible record",
        t,
        1,
        ViolationKind::Guard,
    );

    let mut t = clear.clone();
    let i = find(&t, |s| s.rule == RuleName::Learn);
    let again = TraceStep {
        digest: None,
        ..t.steps[i].clone()
    };
    t.steps.insert(i + 1, again);
    case(
        "learn an already learned denial",
        t,
        i + 1,
        ViolationKind::Guard,
    );

    // learn, propagate, restart, then a second restart sharing the same learn
    let t = Trace {
        semantics: Semantics::Full,
        steps: vec![
            step(RuleName::Learn, &["-switch"]),
            step(RuleName::AspPropagate, &["lightOn"]),
            step(RuleName::Restart, &[]),
            step(RuleName::AspPropagate, &["lightOn"]),
            step(RuleName::Restart, &[]),
        ],
    };
    case(
        "second restart without its own learn",
        t,
        4,
        ViolationKind::RestartSafety,
    );

    let mut t = clear.clone();
    t.steps.insert(1, step(RuleName::UnitPropagate, &["am"]));
    case(
        "unit propagation without a unit clause",
        t,
        1,
        ViolationKind::Guard,
    );

    let mut t = clear.clone();
    t.steps.insert(1, step(RuleName::Unfounded, &["-switch"]));
    case("unfounded on a supported atom", t, 1, ViolationKind::Guard);

    let mut t = clear.clone();
    let i = find(&t, |s| s.rule == RuleName::CpPropagate);
    let end = t.steps.pop().expect("trace ends with End");
    t.steps.truncate(i);
    t.steps.push(TraceStep {
        digest: None,
        ..end
    });
    case(
        "end before the run is semi-terminal",
        t,
        i,
        ViolationKind::NotSemiTerminal,
    );

    let mut t = clear.clone();
    let i = find(&t, |s| s.rule == RuleName::Answer);
    t.steps[i].alpha = Some(vec![("x".into(), 5)]);
    case("answer with a non-solution", t, i, ViolationKind::Guard);

    let mut t = clear;
    let i = find(&t, |s| s.rule == RuleName::Decide);
    t.steps[i].digest = Some("0".repeat(64));
    case(
        "digest that does not match the state",
        t,
        i,
        ViolationKind::Digest,
    );

    out
}

use std::collections::BTreeSet;

use ezcasp::asp::{is_answer_set, Lit};
use ezcasp::ca::{CaProgram, Semantics};
use ezcasp::engine::{solve_ca, Outcome, Polarity, Schema, SchemaConfig};
use ezcasp::oracle::{
    csp_solutions, enumerate_answer_sets, random_program, validate_trace, OracleBounds,
    RandomParams,
};

const CORPUS: u64 = 500;

type Answers = BTreeSet<(Vec<Lit>, Vec<(String, i64)>)>;

fn oracle(ca: &CaProgram, semantics: Semantics) -> Answers {
    let mut out = Answers::new();
    for a in enumerate_answer_sets(ca, semantics, &OracleBounds::default()).unwrap() {
        for alpha in a.alphas {
            out.insert((a.m.clone(), alpha));
        }
    }
    out
}

fn answers(o: &Outcome) -> Answers {
    o.answers
        .iter()
        .map(|a| (a.m.clone(), a.alpha.clone()))
        .collect()
}

fn run(ca: &CaProgram, schema: Schema, semantics: Semantics, polarity: Polarity) -> Outcome {
    let cfg = SchemaConfig {
        polarity,
        trace: true,
        check_freq: 2,
        ..SchemaConfig::new(schema, semantics)
    };
    solve_ca(ca, &cfg).unwrap()
}

/// M⁺ is an answer set of the asp-abstraction and the constraints of M
/// have a solution.
fn verify(ca: &CaProgram, m: &[Lit], semantics: Semantics) {
    let abstraction = ca.abstraction();
    let mut x = vec![false; abstraction.len_atoms()];
    for l in m.iter().filter(|l| l.is_pos()) {
        x[l.atom().index()] = true;
    }
    assert!(is_answer_set(&abstraction, &x));
    assert!(
        !csp_solutions(ca, m.iter().copied(), semantics, &OracleBounds::default())
            .unwrap()
            .is_empty()
    );
}

#[test]
fn schemas_agree_with_each_other_and_with_the_oracle() {
    let params = RandomParams::default();
    let (mut sat, mut learned) = (0, 0);
    for seed in 0..CORPUS {
        let ca = random_program(seed, &params);
        for semantics in [Semantics::Weak, Semantics::Full] {
            let want = oracle(&ca, semantics);
            for schema in Schema::ALL {
                let out = run(&ca, schema, semantics, Polarity::Positive);
                assert!(out.exhausted);
                assert_eq!(
                    answers(&out),
                    want,
                    "seed {seed}, {schema}, {semantics}\n{ca}"
                );
                for a in &out.answers {
                    verify(&ca, &a.m, semantics);
                }
                let report = validate_trace(out.trace.as_ref().unwrap(), &ca)
                    .unwrap_or_else(|v| panic!("seed {seed}, {schema}, {semantics}: {v}\n{ca}"));
                assert!(report.complete);
                sat += usize::from(!want.is_empty());
                learned += out.learned.len();
            }
        }
    }
    // the corpus is not degenerate
    assert!(sat > 1000 && sat < 2900, "{sat}");
    assert!(learned > 100, "{learned}");
}

#[test]
fn negative_first_decisions_find_the_same_answers() {
    let params = RandomParams::default();
    for seed in 0..100 {
        let ca = random_program(seed, &params);
        for semantics in [Semantics::Weak, Semantics::Full] {
            let want = oracle(&ca, semantics);
            for schema in Schema::ALL {
                let out = run(&ca, schema, semantics, Polarity::Negative);
                assert_eq!(answers(&out), want, "seed {seed}, {schema}, {semantics}");
                validate_trace(out.trace.as_ref().unwrap(), &ca).unwrap();
            }
        }
    }
}

#[test]
fn learned_denials_preserve_the_answer_sets() {
    let params = RandomParams::default();
    let mut with_learning = 0;
    for seed in 0..CORPUS {
        let ca = random_program(seed, &params);
        for semantics in [Semantics::Weak, Semantics::Full] {
            let out = run(&ca, Schema::Black, semantics, Polarity::Positive);
            if out.learned.is_empty() {
                continue;
            }
            with_learning += 1;
            let mut extended = ca.clone();
            extended.pi = extended.pi.with_denials(&out.learned);
            assert_eq!(
                oracle(&extended, semantics),
                oracle(&ca, semantics),
                "seed {seed}"
            );
        }
    }
    assert!(with_learning > 50);
}

#[test]
fn full_answer_sets_are_weak_answer_sets() {
    let params = RandomParams::default();
    for seed in 0..CORPUS {
        let ca = random_program(seed, &params);
        let weak = run(&ca, Schema::Grey, Semantics::Weak, Polarity::Positive);
        let full = run(&ca, Schema::Grey, Semantics::Full, Polarity::Positive);
        let weak: BTreeSet<_> = weak.atom_sets().into_iter().collect();
        for x in full.atom_sets() {
            assert!(weak.contains(&x), "seed {seed}");
        }
    }
}

#[test]
fn limits_return_a_prefix_of_the_enumeration() {
    let params = RandomParams::default();
    for seed in 0..100 {
        let ca = random_program(seed, &params);
        let all = run(&ca, Schema::Clear, Semantics::Full, Polarity::Positive);
        let cfg = SchemaConfig {
            limit: Some(1),
            ..SchemaConfig::new(Schema::Clear, Semantics::Full)
        };
        let one = solve_ca(&ca, &cfg).unwrap();
        assert_eq!(one.answers.len(), all.answers.len().min(1));
        assert_eq!(one.answers.first(), all.answers.first());
    }
}

#[test]
fn generator_output_is_frozen() {
    let params = RandomParams::default();
    assert_eq!(
        random_program(0, &params).to_string(),
        include_str!("golden/random_seed0.ca")
    );
    assert_eq!(
        random_program(1, &params).to_string(),
        include_str!("golden/random_seed1.ca")
    );
}

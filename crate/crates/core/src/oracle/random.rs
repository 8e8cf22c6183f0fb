//! Seeded random CA programs for differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ca::{CaProgram, NamedRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    /// Most regular atoms.
    pub atoms: usize,
    /// Most constraint atoms.
    pub constraint_atoms: usize,
    /// Most constraint variables (at most 4).
    pub vars: usize,
    /// Largest domain size.
    pub domain: i64,
    /// Number of rules.
    pub rules: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            atoms: 10,
            constraint_atoms: 4,
            vars: 2,
            domain: 10,
            rules: 8,
        }
    }
}

const ATOMS: [&str; 16] = [
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p",
];
const VARS: [&str; 4] = ["x", "y", "z", "w"];
const OPS: [&str; 6] = ["<", "<=", ">", ">=", "=", "!="];

fn constraint(rng: &mut ChaCha8Rng, vars: &[(String, i64, i64)]) -> String {
    let (x, _, hi) = vars.choose(rng).expect("at least one variable");
    let op = OPS.choose(rng).expect("non-empty");
    let c = rng.gen_range(0..=*hi);
    match rng.gen_range(0..3) {
        1 if vars.len() > 1 => {
            let (y, _, _) = vars
                .iter()
                .filter(|v| v.0 != *x)
                .collect::<Vec<_>>()
                .choose(rng)
                .copied()
                .expect("two variables");
            format!("|{x}{op}{y}|")
        }
        2 if vars.len() > 1 => {
            let (y, _, yhi) = vars
                .iter()
                .filter(|v| v.0 != *x)
                .collect::<Vec<_>>()
                .choose(rng)
                .copied()
                .expect("two variables");
            format!("|{x}+{y}{op}{}|", rng.gen_range(0..=hi + yhi))
        }
        _ => format!("|{x}{op}{c}|"),
    }
}

/// A deterministic random CA program: choice, normal and denial rules over
/// at most `atoms` regular atoms, with bodies that may use up to
/// `constraint_atoms` primitive constraint atoms.
pub fn random_program(seed: u64, params: &RandomParams) -> CaProgram {
    if params.rules == 0 {
        return CaProgram::default();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=params.vars.clamp(1, VARS.len()));
    let vars: Vec<(String, i64, i64)> = VARS[..nv]
        .iter()
        .map(|v| (v.to_string(), 0, rng.gen_range(1..params.domain.max(2))))
        .collect();
    let mut pool: Vec<String> = Vec::new();
    for _ in 0..rng.gen_range(0..=params.constraint_atoms) {
        let c = constraint(&mut rng, &vars);
        if !pool.contains(&c) {
            pool.push(c);
        }
    }
    let na = rng.gen_range(1..=params.atoms.clamp(1, ATOMS.len()));
    let atoms = &ATOMS[..na];
    let mut rules = Vec::with_capacity(params.rules);
    for _ in 0..params.rules {
        let mut r = NamedRule::default();
        let kind = rng.gen_range(0..10);
        let body_len = match kind {
            0..=2 => rng.gen_range(0..=1),
            _ => rng.gen_range(1..=3),
        };
        for _ in 0..body_len {
            let name = if !pool.is_empty() && rng.gen_bool(0.35) {
                pool.choose(&mut rng).expect("non-empty").clone()
            } else {
                atoms.choose(&mut rng).expect("non-empty").to_string()
            };
            match rng.gen_range(0..20) {
                0 => r.negneg.push(name),
                1..=7 => r.neg.push(name),
                _ => r.pos.push(name),
            }
        }
        match kind {
            0..=2 => {
                let h = atoms.choose(&mut rng).expect("non-empty").to_string();
                r.negneg.push(h.clone());
                r.head = Some(h);
            }
            3..=6 => r.head = Some(atoms.choose(&mut rng).expect("non-empty").to_string()),
            _ => {}
        }
        rules.push(r);
    }
    let mut ca = CaProgram::from_named(&vars, &rules).expect("generated constraints compile");
    // keep only variables that some constraint atom mentions
    if ca.constraint_atoms().is_empty() {
        ca = CaProgram::from_named(&[], &rules).expect("no constraints to compile");
    }
    ca
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::parse_ca;

    #[test]
    fn deterministic_and_bounded() {
        let p = RandomParams::default();
        for seed in 0..200 {
            let a = random_program(seed, &p);
            assert_eq!(a.to_string(), random_program(seed, &p).to_string());
            assert!(a.constraint_atoms().len() <= 4);
            assert!(a.pi.len_atoms() - a.constraint_atoms().len() <= 10);
            assert_eq!(a.pi.rules.len(), 8);
            assert!(a.vars.iter().all(|d| d.upper - d.lower < 10));
            assert!(a.check().is_ok());
        }
    }

    #[test]
    fn size_zero_is_empty() {
        let p = RandomParams {
            rules: 0,
            ..RandomParams::default()
        };
        assert_eq!(random_program(7, &p).to_string(), "");
    }

    #[test]
    fn text_round_trip() {
        for seed in 0..1000 {
            let a = random_program(seed, &RandomParams::default()).to_string();
            assert_eq!(parse_ca(&a).unwrap().to_string(), a, "seed {seed}");
        }
    }
}

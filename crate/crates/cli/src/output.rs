//! Printing extended answer sets and reading them back for post-checks.

use std::collections::BTreeMap;

use ezcasp::asp::Lit;
use ezcasp::ca::{AtomKind, CaProgram};
use ezcasp::lang::{parse, EzAtom, Head, Term};

/// `required(geq(x,12))` becomes `required(x >= 12)`; other names are
/// returned unchanged.
pub fn display_atom(name: &str) -> String {
    let Some(inner) = name
        .strip_prefix("required(")
        .and_then(|s| s.strip_suffix(')'))
    else {
        return name.to_string();
    };
    match parse(&format!("required({inner})."))
        .ok()
        .and_then(|p| p.rules.into_iter().next())
    {
        Some(r) => match r.head {
            Head::Atom(a) if a.args.len() == 1 => format!("required({})", a.args[0].to_infix()),
            _ => name.to_string(),
        },
        None => name.to_string(),
    }
}

/// True atoms of M that are printed: `cspdomain`, `cspvar` and `required`
/// atoms first, then regular atoms, each group in atom-table order.
/// Constraint atoms and translation auxiliaries are suppressed.
pub fn visible_atoms(ca: &CaProgram, m: &[Lit]) -> Vec<String> {
    let mut atoms: Vec<_> = m.iter().filter(|l| l.is_pos()).map(|l| l.atom()).collect();
    atoms.sort();
    let group = |kind: AtomKind| {
        atoms
            .iter()
            .filter(move |&&a| ca.kind(a) == kind)
            .map(|&a| display_atom(ca.atom_name(a)))
    };
    group(AtomKind::Reserved)
        .chain(group(AtomKind::Regular))
        .collect()
}

/// Bindings ordered by variable, integers before symbols before compounds.
pub fn sorted_bindings(ca: &CaProgram, alpha: &[(String, i64)]) -> Vec<(String, i64)> {
    let key = |name: &str| {
        ca.vars
            .iter()
            .find(|d| d.name() == name)
            .map(|d| d.var.clone())
    };
    let mut v: Vec<(Option<Term>, &String, i64)> =
        alpha.iter().map(|(n, x)| (key(n), n, *x)).collect();
    v.sort();
    v.into_iter().map(|(_, n, x)| (n.clone(), x)).collect()
}

/// One line per extended answer set, e.g. `{ switch, lightOn, x=12 }`.
pub fn format_answer(ca: &CaProgram, m: &[Lit], alpha: &[(String, i64)]) -> String {
    let mut items = visible_atoms(ca, m);
    items.extend(
        sorted_bindings(ca, alpha)
            .into_iter()
            .map(|(n, v)| format!("{n}={v}")),
    );
    if items.is_empty() {
        "{}".to_string()
    } else {
        format!("{{ {} }}", items.join(", "))
    }
}

/// An extended answer set read back from its printed form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub atoms: Vec<EzAtom>,
    pub bindings: BTreeMap<String, i64>,
}

impl Model {
    pub fn new(ca: &CaProgram, m: &[Lit], alpha: &[(String, i64)]) -> Model {
        let atoms = m
            .iter()
            .filter(|l| {
                l.is_pos() && matches!(ca.kind(l.atom()), AtomKind::Regular | AtomKind::Reserved)
            })
            .filter_map(|l| parse_atom(ca.atom_name(l.atom())))
            .collect();
        Model {
            atoms,
            bindings: alpha.iter().cloned().collect(),
        }
    }

    /// Argument tuples of the true atoms with this predicate name.
    pub fn args_of(&self, name: &str) -> Vec<Vec<Term>> {
        self.atoms
            .iter()
            .filter(|a| a.name == name)
            .map(|a| a.args.clone())
            .collect()
    }

    pub fn holds(&self, name: &str) -> bool {
        self.atoms.iter().any(|a| a.name == name)
    }

    pub fn value(&self, var: &str) -> Option<i64> {
        self.bindings.get(var).copied()
    }
}

fn parse_atom(name: &str) -> Option<EzAtom> {
    match parse(&format!("{name}."))
        .ok()?
        .rules
        .into_iter()
        .next()?
        .head
    {
        Head::Atom(a) => Some(a),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ezcasp::ca::parse_ca;

    #[test]
    fn required_atoms_print_infix() {
        assert_eq!(display_atom("required(geq(x,12))"), "required(x >= 12)");
        assert_eq!(
            display_atom("required(eq(minus(age(1),age(2)),3))"),
            "required(age(1) - age(2) = 3)"
        );
        assert_eq!(display_atom("cspvar(x,0,23)"), "cspvar(x,0,23)");
    }

    #[test]
    fn empty_answer_set_prints_braces() {
        let ca = parse_ca("").unwrap();
        assert_eq!(format_answer(&ca, &[], &[]), "{}");
    }

    #[test]
    fn constraint_atoms_are_suppressed() {
        let ca = parse_ca("var x 0 9. night :- |x<6|.").unwrap();
        let m: Vec<Lit> = ca.pi.atoms.atoms().map(Lit::pos).collect();
        assert_eq!(format_answer(&ca, &m, &[("x".into(), 3)]), "{ night, x=3 }");
        let model = Model::new(&ca, &m, &[("x".into(), 3)]);
        assert!(model.holds("night"));
        assert_eq!(model.value("x"), Some(3));
    }
}

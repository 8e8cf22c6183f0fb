//! Text export of a csp-abstraction as a CLP(FD) clause.

use ezcasp::asp::Lit;
use ezcasp::ca::{CaProgram, Semantics};
use ezcasp::fd::FdError;

/// `V_` followed by the variable name with non-alphanumerics as `_`.
fn prolog_var(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    while s.ends_with('_') {
        s.pop();
    }
    format!("V_{s}")
}

/// `solve([x,V_x]) :- V_x >= 0, V_x <= 23, V_x >= 12, labeling([V_x]).`
///
/// Variables appear in declaration order. Range constraints come first,
/// then the constraints posted for M in declaration order of their atoms;
/// a constraint identical to one already written is skipped.
pub fn emit_clp(ca: &CaProgram, m: &[Lit], semantics: Semantics) -> Result<String, FdError> {
    let k = ca.build_csp(m.iter().copied(), semantics)?;
    let names: Vec<String> = k.csp.names().to_vec();
    let vars: Vec<String> = names.iter().map(|n| prolog_var(n)).collect();
    let mut body: Vec<String> = Vec::new();
    for (&d, v) in k.decls.iter().zip(&vars) {
        body.push(format!("{v} >= {}", ca.vars[d].lower));
        body.push(format!("{v} <= {}", ca.vars[d].upper));
    }
    for c in k.csp.constraints() {
        let text = c.render(&|i| vars[i].clone());
        if !body.contains(&text) {
            body.push(text);
        }
    }
    let head: Vec<String> = names
        .iter()
        .zip(&vars)
        .map(|(n, v)| format!("{n},{v}"))
        .collect();
    body.push(format!("labeling([{}])", vars.join(",")));
    Ok(format!(
        "solve([{}]) :- {}.",
        head.join(","),
        body.join(", ")
    ))
}

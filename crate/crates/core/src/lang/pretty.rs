use super::ast::*;
use std::fmt::Write;

/// Render a program in EZ surface syntax, one rule per line.
pub fn pretty_print(p: &EzProgram) -> String {
    let mut out = String::new();
    for r in &p.rules {
        out.push_str(&rule_to_string(r));
        out.push('\n');
    }
    out
}

pub fn rule_to_string(r: &EzRule) -> String {
    let mut s = String::new();
    match &r.head {
        Head::None => {}
        Head::Atom(a) => s.push_str(&a.to_string()),
        Head::Choice(c) => write_choice(&mut s, c),
    }
    if !r.body.is_empty() || r.is_denial() {
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(":-");
        for (i, b) in r.body.iter().enumerate() {
            s.push_str(if i == 0 { " " } else { ", " });
            write_body_elem(&mut s, b);
        }
    }
    s.push('.');
    s
}

fn write_choice(s: &mut String, c: &Choice) {
    if let Some(l) = &c.lower {
        let _ = write!(s, "{l}");
    }
    s.push('{');
    for (i, e) in c.elems.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        let _ = write!(s, "{}", e.atom);
        for cond in &e.cond {
            let _ = write!(s, " : {cond}");
        }
    }
    s.push('}');
    if let Some(u) = &c.upper {
        let _ = write!(s, "{u}");
    }
}

fn write_literal(s: &mut String, l: &Literal) {
    match l.naf {
        Naf::Pos => {}
        Naf::Not => s.push_str("not "),
        Naf::NotNot => s.push_str("not not "),
    }
    let _ = write!(s, "{}", l.atom);
}

fn write_body_elem(s: &mut String, b: &BodyElem) {
    match b {
        BodyElem::Lit(l) => write_literal(s, l),
        BodyElem::Builtin(t) => {
            let _ = write!(s, "{t}");
        }
        BodyElem::Sum(agg) => {
            if let Some(l) = &agg.lower {
                let _ = write!(s, "{l} ");
            }
            s.push_str("#sum[");
            for (i, e) in agg.elems.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                write_literal(s, &e.lit);
                let _ = write!(s, "={}", e.weight);
                for c in &e.cond {
                    let _ = write!(s, ":{c}");
                }
            }
            s.push(']');
            if let Some(u) = &agg.upper {
                let _ = write!(s, " {u}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    fn round_trip(src: &str) {
        let p = parse(src).unwrap();
        let text = pretty_print(&p);
        let q = parse(&text).unwrap_or_else(|e| panic!("reparse of {text:?} failed: {e}"));
        assert_eq!(p, q, "round trip changed the program:\n{text}");
    }

    #[test]
    fn empty_program_prints_nothing() {
        assert_eq!(pretty_print(&EzProgram::default()), "");
    }

    #[test]
    fn example_five_round_trips() {
        round_trip(
            "cspdomain(fd). cspvar(x,0,23). {switch}. lightOn :- switch, not am. \
             :- not lightOn. {am}. required(x >= 12) :- not am. required(x < 12) :- am.",
        );
    }

    #[test]
    fn intensional_list_surface_syntax_is_kept() {
        let p = parse("required(all_different([v/1])). required(sum([st(d)/2],<=,5)).").unwrap();
        let text = pretty_print(&p);
        assert!(text.contains("[v/1]"), "{text}");
        assert!(text.contains("[st(d)/2]"), "{text}");
        round_trip(&text);
    }

    #[test]
    fn assorted_constructs_round_trip() {
        round_trip("1{ leafPos(L,N) : location(N) }1 :- leaf(L).");
        round_trip("{a; b : c : d}.");
        round_trip("acceptable :- 2 #sum[nWeight(P,W)=W:coloredPos(P), not q=3] MAX, m(MAX).");
        round_trip("required(posColor(1)=green <- (leafPos(a)=0 /\\ leafPos(b)=1)) :- x.");
        round_trip("xcoord(-2*N..2*N) :- length(N).");
        round_trip("required(!(x > 2) xor (y - (z - 1)) * 2 != 3 <-> b = c) :- a, not not b.");
        round_trip(":- a, W = X + 1, X != -3.");
    }
}

use ezcasp::ground::{load, GroundConfig};
use ezcasp::lang::Head;

fn required(src: &str) -> Vec<String> {
    let loaded = load(src, &GroundConfig::default()).unwrap();
    loaded
        .ground
        .rules
        .iter()
        .filter_map(|r| match &r.head {
            Head::Atom(a) if a.is_required() => Some(a.to_string()),
            _ => None,
        })
        .collect()
}

const X1: &str = "cspdomain(fd). cspvar(v(1),0,9). cspvar(v(2),0,9). cspvar(v(3),0,9). \
                  cspvar(w(a,1),0,9). cspvar(w(a,2),0,9). cspvar(w(b,1),0,9).";

#[test]
fn variable_lists_with_and_without_prefix() {
    assert_eq!(
        required(&format!("{X1} required(all_different([w(a)/2]))."))[0],
        "required(all_different([w(a,1),w(a,2)]))"
    );
    assert_eq!(
        required(&format!("{X1} required(all_different([v/1]))."))[0],
        "required(all_different([v(1),v(2),v(3)]))"
    );
}

#[test]
fn relation_lists_take_the_last_argument_in_lexical_order() {
    let facts = "cspdomain(fd). cspvar(t,0,20). rp(b,5,7). rp(a,2,1). rp(a,1,3).";
    assert_eq!(
        required(&format!("{facts} required(sum([rp(a)/3], =, t)).")),
        ["required(sum([3,1],eq,t))"]
    );
    assert_eq!(
        required(&format!("{facts} required(sum([rp(a,2)/3], =, t)).")),
        ["required(sum([1],eq,t))"]
    );
    let facts = "cspdomain(fd). cspvar(t,0,20). rpp(c,2). rpp(a,3). rpp(b,1).";
    assert_eq!(
        required(&format!("{facts} required(sum([rpp/2], =, t)).")),
        ["required(sum([3,1,2],eq,t))"]
    );
}

#[test]
fn cumulative_mixes_both_kinds_of_list() {
    let src = "cspdomain(fd). cspvar(st(a),0,5). cspvar(st(b),0,5). cspvar(st(c),0,5). \
               d(a,1). d(b,1). d(c,1). rpp(a,3). rpp(b,1). rpp(c,2). \
               required(cumulative([st/1], [d/2], [rpp/2], 4)).";
    assert_eq!(
        required(src),
        ["required(cumulative([st(a),st(b),st(c)],[1,1,1],[3,1,2],4))"]
    );
}

#[test]
fn expanded_lists_are_sorted() {
    let src =
        "cspdomain(fd). cspvar(q(10),0,1). cspvar(q(2),0,1). cspvar(q(b),0,1). cspvar(q(a),0,1). \
               required(all_different([q/1])).";
    assert_eq!(
        required(src),
        ["required(all_different([q(2),q(10),q(a),q(b)]))"]
    );
}

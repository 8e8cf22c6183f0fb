use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::term::{BinOp, Term, UnOp, GLOBAL_CONSTRAINTS};
use super::ParseError;

/// Parse EZ program text.
pub fn parse(text: &str) -> Result<EzProgram, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        toks: tokens,
        i: 0,
        eof: Pos::default(),
    };
    p.eof = end_position(text);
    let mut rules = Vec::new();
    while !p.at_end() {
        rules.push(p.rule()?);
    }
    Ok(EzProgram { rules })
}

fn end_position(text: &str) -> Pos {
    let line = text.lines().count().max(1);
    let col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    eof: Pos,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.eof, |t| t.pos)
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let pos = self.pos();
        Err(ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.tok.clone());
        self.i += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, wanted: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn is_not_keyword(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == "not")
    }

    fn is_bound_start(&self) -> bool {
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Var(_)) => true,
            Some(Tok::Op(BinOp::Sub)) => matches!(self.peek_at(1), Some(Tok::Int(_))),
            _ => false,
        }
    }

    fn rule(&mut self) -> PResult<EzRule> {
        let pos = self.pos();
        let head = match self.peek() {
            Some(Tok::If) | Some(Tok::LeftArrow) => Head::None,
            Some(Tok::LBrace) => Head::Choice(self.choice(None)?),
            _ if self.is_bound_start() => {
                let lower = self.bound()?;
                if self.peek() != Some(&Tok::LBrace) {
                    return self.unexpected("`{` after choice lower bound");
                }
                Head::Choice(self.choice(Some(lower))?)
            }
            _ => Head::Atom(self.atom()?),
        };
        let mut body = Vec::new();
        if (self.eat(&Tok::If) || self.eat(&Tok::LeftArrow)) && self.peek() != Some(&Tok::Dot) {
            body.push(self.body_elem()?);
            while self.eat(&Tok::Comma) {
                body.push(self.body_elem()?);
            }
        }
        self.expect(&Tok::Dot, "`.` at end of rule")?;
        if let Head::Choice(c) = &head {
            if let (Some(Term::Int(l)), Some(Term::Int(u))) = (&c.lower, &c.upper) {
                if l > u {
                    return Err(ParseError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: format!("choice lower bound {l} exceeds upper bound {u}"),
                    });
                }
            }
        }
        Ok(EzRule { head, body, pos })
    }

    fn bound(&mut self) -> PResult<Term> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Term::Int(n)),
            Some(Tok::Var(v)) => Ok(Term::Var(v)),
            Some(Tok::Op(BinOp::Sub)) => match self.bump() {
                Some(Tok::Int(n)) => Ok(Term::Int(-n)),
                _ => {
                    self.i -= 1;
                    self.unexpected("integer bound")
                }
            },
            _ => {
                self.i -= 1;
                self.unexpected("bound")
            }
        }
    }

    fn choice(&mut self, lower: Option<Term>) -> PResult<Choice> {
        self.expect(&Tok::LBrace, "`{`")?;
        let mut elems = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let atom = self.atom()?;
                let mut cond = Vec::new();
                if self.eat(&Tok::Colon) {
                    cond.push(self.atom()?);
                    while self.eat(&Tok::Colon) || self.eat(&Tok::Comma) {
                        cond.push(self.atom()?);
                    }
                    elems.push(ChoiceElem { atom, cond });
                    if self.eat(&Tok::Semi) {
                        continue;
                    }
                } else {
                    elems.push(ChoiceElem { atom, cond });
                    if self.eat(&Tok::Semi) || self.eat(&Tok::Comma) {
                        continue;
                    }
                }
                self.expect(&Tok::RBrace, "`}` closing choice")?;
                break;
            }
        }
        let upper = if self.is_bound_start() {
            Some(self.bound()?)
        } else {
            None
        };
        Ok(Choice {
            lower,
            upper,
            elems,
        })
    }

    fn atom(&mut self) -> PResult<EzAtom> {
        let pos = self.pos();
        let name = match self.bump() {
            Some(Tok::Ident(s)) if s != "not" => s,
            _ => {
                self.i -= 1;
                return self.unexpected("atom");
            }
        };
        let args = if self.eat(&Tok::LParen) {
            self.args()?
        } else {
            Vec::new()
        };
        make_atom(name, args, pos)
    }

    fn args(&mut self) -> PResult<Vec<Term>> {
        let mut args = vec![self.arg()?];
        while self.eat(&Tok::Comma) {
            args.push(self.arg()?);
        }
        self.expect(&Tok::RParen, "`)`")?;
        Ok(args)
    }

    /// An argument is a full expression, or a bare operator such as the
    /// comparison slot of `sum(L, <=, E)`.
    fn arg(&mut self) -> PResult<Term> {
        if let Some(Tok::Op(op)) = self.peek() {
            if matches!(self.peek_at(1), Some(Tok::Comma) | Some(Tok::RParen)) && *op != BinOp::Sub
            {
                let op = *op;
                self.i += 1;
                return Ok(Term::Op(op));
            }
        }
        self.expr()
    }

    fn body_elem(&mut self) -> PResult<BodyElem> {
        if self.is_not_keyword() {
            self.i += 1;
            let naf = if self.is_not_keyword() {
                self.i += 1;
                Naf::NotNot
            } else {
                Naf::Not
            };
            return Ok(BodyElem::Lit(Literal {
                naf,
                atom: self.atom()?,
            }));
        }
        if self.peek() == Some(&Tok::Sum) || (self.is_bound_start() && self.sum_follows_bound()) {
            return Ok(BodyElem::Sum(self.sum()?));
        }
        let pos = self.pos();
        let t = self.cmp()?;
        match t {
            Term::Binary(op, ..) if op.is_comparison() => Ok(BodyElem::Builtin(t)),
            Term::Sym(name) => Ok(BodyElem::Lit(Literal {
                naf: Naf::Pos,
                atom: make_atom(name, Vec::new(), pos)?,
            })),
            Term::Compound(name, args) | Term::Global(name, args) => Ok(BodyElem::Lit(Literal {
                naf: Naf::Pos,
                atom: make_atom(name, args, pos)?,
            })),
            other => Err(ParseError::Syntax {
                line: pos.line,
                col: pos.col,
                msg: format!("`{other}` is neither an atom nor a comparison"),
            }),
        }
    }

    fn sum_follows_bound(&self) -> bool {
        let skip = if self.peek() == Some(&Tok::Op(BinOp::Sub)) {
            2
        } else {
            1
        };
        self.peek_at(skip) == Some(&Tok::Sum)
    }

    fn sum(&mut self) -> PResult<SumAggregate> {
        let lower = if self.peek() == Some(&Tok::Sum) {
            None
        } else {
            Some(self.bound()?)
        };
        self.expect(&Tok::Sum, "`#sum`")?;
        self.expect(&Tok::LBrack, "`[`")?;
        let mut elems = Vec::new();
        if !self.eat(&Tok::RBrack) {
            loop {
                let naf = if self.is_not_keyword() {
                    self.i += 1;
                    Naf::Not
                } else {
                    Naf::Pos
                };
                let atom = self.atom()?;
                let weight = if self.eat(&Tok::Op(BinOp::Eq)) {
                    self.unary()?
                } else {
                    Term::Int(1)
                };
                let mut cond = Vec::new();
                while self.eat(&Tok::Colon) {
                    cond.push(self.atom()?);
                }
                elems.push(SumElem {
                    lit: Literal { naf, atom },
                    weight,
                    cond,
                });
                if self.eat(&Tok::Comma) || self.eat(&Tok::Semi) {
                    continue;
                }
                self.expect(&Tok::RBrack, "`]` closing #sum")?;
                break;
            }
        }
        let upper = if self.is_bound_start() {
            Some(self.bound()?)
        } else {
            None
        };
        Ok(SumAggregate {
            lower,
            upper,
            elems,
        })
    }

    // expression levels, loosest first

    fn expr(&mut self) -> PResult<Term> {
        let lhs = self.or()?;
        let op = match self.peek() {
            Some(Tok::Op(op @ (BinOp::Impl | BinOp::RevImpl | BinOp::Equiv))) => *op,
            Some(Tok::LeftArrow) => BinOp::RevImpl,
            _ => return Ok(lhs),
        };
        self.i += 1;
        let rhs = self.or()?;
        Ok(Term::binary(op, lhs, rhs))
    }

    fn or(&mut self) -> PResult<Term> {
        let mut t = self.xor()?;
        while self.eat(&Tok::Op(BinOp::Or)) {
            t = Term::binary(BinOp::Or, t, self.xor()?);
        }
        Ok(t)
    }

    fn xor(&mut self) -> PResult<Term> {
        let mut t = self.and()?;
        loop {
            let is_xor = match self.peek() {
                Some(Tok::Op(BinOp::Xor)) => true,
                Some(Tok::Ident(s)) => s == "xor",
                _ => false,
            };
            if !is_xor {
                return Ok(t);
            }
            self.i += 1;
            t = Term::binary(BinOp::Xor, t, self.and()?);
        }
    }

    fn and(&mut self) -> PResult<Term> {
        let mut t = self.not()?;
        while self.eat(&Tok::Op(BinOp::And)) {
            t = Term::binary(BinOp::And, t, self.not()?);
        }
        Ok(t)
    }

    fn not(&mut self) -> PResult<Term> {
        if self.eat(&Tok::Bang) {
            return Ok(Term::Unary(UnOp::Not, Box::new(self.not()?)));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> PResult<Term> {
        let lhs = self.range()?;
        if let Some(Tok::Op(op)) = self.peek() {
            if op.is_comparison() {
                let op = *op;
                self.i += 1;
                let rhs = self.range()?;
                return Ok(Term::binary(op, lhs, rhs));
            }
        }
        Ok(lhs)
    }

    fn range(&mut self) -> PResult<Term> {
        let lo = self.add()?;
        if self.eat(&Tok::DotDot) {
            let hi = self.add()?;
            return Ok(Term::Range(Box::new(lo), Box::new(hi)));
        }
        Ok(lo)
    }

    fn add(&mut self) -> PResult<Term> {
        let mut t = self.mul()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(op @ (BinOp::Add | BinOp::Sub))) => *op,
                _ => return Ok(t),
            };
            self.i += 1;
            t = Term::binary(op, t, self.mul()?);
        }
    }

    fn mul(&mut self) -> PResult<Term> {
        let mut t = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(op @ (BinOp::Mul | BinOp::Div))) => *op,
                _ => return Ok(t),
            };
            self.i += 1;
            t = Term::binary(op, t, self.unary()?);
        }
    }

    fn unary(&mut self) -> PResult<Term> {
        if self.eat(&Tok::Op(BinOp::Sub)) {
            return Ok(match self.unary()? {
                Term::Int(n) => Term::Int(-n),
                t => Term::Unary(UnOp::Minus, Box::new(t)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Term::Int(n)),
            Some(Tok::Var(v)) => Ok(Term::Var(v)),
            Some(Tok::Ident(name)) => {
                if self.eat(&Tok::LParen) {
                    let args = self.args()?;
                    check_reserved(&name, args.len(), pos)?;
                    let global = GLOBAL_CONSTRAINTS.contains(&name.as_str())
                        && args
                            .iter()
                            .any(|a| matches!(a, Term::List(_) | Term::Intensional { .. }));
                    Ok(if global {
                        Term::Global(name, args)
                    } else {
                        Term::Compound(name, args)
                    })
                } else {
                    Ok(Term::Sym(name))
                }
            }
            Some(Tok::LParen) => {
                let t = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBrack) => self.list(pos),
            _ => {
                self.i -= 1;
                self.unexpected("term")
            }
        }
    }

    fn list(&mut self, pos: Pos) -> PResult<Term> {
        let mut items = Vec::new();
        if !self.eat(&Tok::RBrack) {
            items.push(self.expr()?);
            while self.eat(&Tok::Comma) {
                items.push(self.expr()?);
            }
            self.expect(&Tok::RBrack, "`]`")?;
        }
        if items.len() == 1 {
            if let Term::Binary(BinOp::Div, lhs, rhs) = &items[0] {
                if let (Some((name, prefix)), Term::Int(k)) = (intensional_head(lhs), rhs.as_ref())
                {
                    let k = usize::try_from(*k).map_err(|_| ParseError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: "intensional list arity must be non-negative".into(),
                    })?;
                    if prefix.len() > k {
                        return Err(ParseError::Syntax {
                            line: pos.line,
                            col: pos.col,
                            msg: format!(
                                "intensional list prefix has {} arguments but arity is {k}",
                                prefix.len()
                            ),
                        });
                    }
                    return Ok(Term::Intensional {
                        name,
                        prefix,
                        arity: k,
                    });
                }
            }
        }
        Ok(Term::List(items))
    }
}

fn intensional_head(t: &Term) -> Option<(String, Vec<Term>)> {
    match t {
        Term::Sym(s) => Some((s.clone(), Vec::new())),
        Term::Compound(f, args) => Some((f.clone(), args.clone())),
        _ => None,
    }
}

fn check_reserved(name: &str, arity: usize, pos: Pos) -> PResult<()> {
    let ok = match name {
        CSPDOMAIN | REQUIRED => arity == 1,
        CSPVAR => arity == 1 || arity == 3,
        _ => true,
    };
    if ok {
        return Ok(());
    }
    let expected = if name == CSPVAR { "1 or 3" } else { "1" };
    Err(ParseError::ReservedArity {
        line: pos.line,
        col: pos.col,
        name: name.to_string(),
        expected,
        found: arity,
    })
}

fn make_atom(name: String, args: Vec<Term>, pos: Pos) -> PResult<EzAtom> {
    check_reserved(&name, args.len(), pos)?;
    Ok(EzAtom { name, args })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE5: &str = "cspdomain(fd). cspvar(x,0,23). {switch}. lightOn :- switch, not am. \
        :- not lightOn. {am}. required(x >= 12) :- not am. required(x < 12) :- am.";

    #[test]
    fn example_five_shape() {
        let p = parse(EXAMPLE5).unwrap();
        assert_eq!(p.rules.len(), 8);
        assert_eq!(p.cspdomain_facts().len(), 1);
        assert_eq!(p.cspvar_facts().len(), 1);
        assert!(p.rules[4].is_denial());
        match &p.rules[6].head {
            Head::Atom(a) => {
                assert!(a.is_required());
                assert_eq!(
                    a.args[0],
                    Term::binary(BinOp::Geq, Term::sym("x"), Term::Int(12))
                );
            }
            h => panic!("unexpected head {h:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("  % only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn global_with_intensional_list() {
        let p = parse("required(all_different([v/1])).").unwrap();
        let Head::Atom(a) = &p.rules[0].head else {
            panic!()
        };
        assert_eq!(
            a.args[0],
            Term::Global(
                "all_different".into(),
                vec![Term::Intensional {
                    name: "v".into(),
                    prefix: vec![],
                    arity: 1
                }]
            )
        );
    }

    #[test]
    fn choice_with_bounds_and_conditions() {
        let p = parse("1{ leafPos(L,N) : location(N) }1 :- leaf(L).").unwrap();
        let Head::Choice(c) = &p.rules[0].head else {
            panic!()
        };
        assert_eq!(c.lower, Some(Term::Int(1)));
        assert_eq!(c.upper, Some(Term::Int(1)));
        assert_eq!(c.elems[0].cond.len(), 1);
    }

    #[test]
    fn sum_aggregate_in_body() {
        let p =
            parse("acceptable :- #sum[nWeight(P,W)=W:coloredPos(P)] MAX, max_total_weight(MAX).")
                .unwrap();
        let BodyElem::Sum(s) = &p.rules[0].body[0] else {
            panic!()
        };
        assert_eq!(s.upper, Some(Term::Var("MAX".into())));
        assert_eq!(s.elems[0].weight, Term::Var("W".into()));
    }

    #[test]
    fn builtins_and_double_negation() {
        let p = parse("a :- b(X), not c, not not d, W = X + 1, W < 3.").unwrap();
        let r = &p.rules[0];
        assert_eq!(r.positive().count(), 1);
        assert_eq!(r.negative().count(), 1);
        assert_eq!(r.double_negative().count(), 1);
        assert_eq!(r.builtins().count(), 2);
    }

    #[test]
    fn reified_connectives_and_reverse_implication() {
        let p = parse("required(posColor(1)=green <- (leafPos(a)=0 /\\ leafPos(b)=1)).").unwrap();
        let Head::Atom(a) = &p.rules[0].head else {
            panic!()
        };
        assert!(matches!(a.args[0], Term::Binary(BinOp::RevImpl, ..)));
        let q = parse("required(x >= 12 \\/ y < 3).").unwrap();
        let Head::Atom(b) = &q.rules[0].head else {
            panic!()
        };
        assert!(matches!(b.args[0], Term::Binary(BinOp::Or, ..)));
    }

    #[test]
    fn negative_ranges_in_facts() {
        let p = parse("xcoord(-2*N..2*N) :- length(N).").unwrap();
        let Head::Atom(a) = &p.rules[0].head else {
            panic!()
        };
        assert!(matches!(a.args[0], Term::Range(..)));
    }

    #[test]
    fn reserved_arity_is_checked() {
        let e = parse("cspvar(x,1).").unwrap_err();
        assert!(matches!(e, ParseError::ReservedArity { .. }), "{e}");
        assert!(parse("required(a,b).").is_err());
        assert!(parse("cspdomain.").is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("a :- b\nc.").unwrap_err();
        match e {
            ParseError::Syntax { line, col, .. } => assert_eq!((line, col), (2, 1)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unicode_rule_arrow() {
        let p = parse("a ← b, not c.").unwrap();
        assert_eq!(p.rules[0].body.len(), 2);
    }

    #[test]
    fn operator_argument_in_global() {
        let p = parse("required(sum([posCost/1], <=, MV)) :- max_total_weight(MV).").unwrap();
        let Head::Atom(a) = &p.rules[0].head else {
            panic!()
        };
        let Term::Global(_, args) = &a.args[0] else {
            panic!()
        };
        assert_eq!(args[1], Term::Op(BinOp::Leq));
    }
}

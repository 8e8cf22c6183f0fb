use super::ast::Pos;
use super::term::BinOp;
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Dot,
    DotDot,
    Colon,
    Semi,
    /// `:-`
    If,
    /// `←`: rule arrow at top level, reverse implication inside terms.
    LeftArrow,
    Sum,
    Bang,
    Op(BinOp),
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Op(op) => format!("`{}`", op.symbol()),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let err = |line, col, msg: String| ParseError::Syntax { line, col, msg };

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let peek = |k: usize| chars.get(i + k).copied().unwrap_or('\0');

        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            if peek(1) == '*' {
                // block comment %* ... *%
                i += 2;
                col += 2;
                loop {
                    if i >= chars.len() {
                        return Err(err(pos.line, pos.col, "unterminated block comment".into()));
                    }
                    if chars[i] == '*' && chars.get(i + 1) == Some(&'%') {
                        i += 2;
                        col += 2;
                        break;
                    }
                    if chars[i] == '\n' {
                        line += 1;
                        col = 1;
                    } else {
                        col += 1;
                    }
                    i += 1;
                }
            } else {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse::<i64>()
                .map_err(|_| err(line, col, format!("integer literal `{s}` out of range")))?;
            col += i - start;
            out.push(Token {
                tok: Tok::Int(n),
                pos,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if c.is_uppercase() || c == '_' {
                Tok::Var(s)
            } else {
                Tok::Ident(s)
            };
            out.push(Token { tok, pos });
            continue;
        }

        let (tok, len) = match (c, peek(1), peek(2)) {
            (':', '-', _) => (Tok::If, 2),
            (':', _, _) => (Tok::Colon, 1),
            ('.', '.', _) => (Tok::DotDot, 2),
            ('.', _, _) => (Tok::Dot, 1),
            ('(', _, _) => (Tok::LParen, 1),
            (')', _, _) => (Tok::RParen, 1),
            ('[', _, _) => (Tok::LBrack, 1),
            (']', _, _) => (Tok::RBrack, 1),
            ('{', _, _) => (Tok::LBrace, 1),
            ('}', _, _) => (Tok::RBrace, 1),
            (',', _, _) => (Tok::Comma, 1),
            (';', _, _) => (Tok::Semi, 1),
            ('#', _, _) => {
                let rest: String = chars[i + 1..]
                    .iter()
                    .take_while(|c| c.is_alphanumeric())
                    .collect();
                if rest == "sum" {
                    (Tok::Sum, 4)
                } else {
                    return Err(err(line, col, format!("unsupported directive `#{rest}`")));
                }
            }
            ('+', _, _) => (Tok::Op(BinOp::Add), 1),
            ('-', '>', _) => (Tok::Op(BinOp::Impl), 2),
            ('-', _, _) => (Tok::Op(BinOp::Sub), 1),
            ('*', _, _) => (Tok::Op(BinOp::Mul), 1),
            ('/', '\\', _) => (Tok::Op(BinOp::And), 2),
            ('/', _, _) => (Tok::Op(BinOp::Div), 1),
            ('\\', '/', _) => (Tok::Op(BinOp::Or), 2),
            ('\\', _, _) => (Tok::Op(BinOp::Xor), 1),
            ('=', '=', _) => (Tok::Op(BinOp::Eq), 2),
            ('=', '<', _) => (Tok::Op(BinOp::Leq), 2),
            ('=', _, _) => (Tok::Op(BinOp::Eq), 1),
            ('!', '=', _) => (Tok::Op(BinOp::Neq), 2),
            ('!', _, _) => (Tok::Bang, 1),
            ('<', '-', '>') => (Tok::Op(BinOp::Equiv), 3),
            ('<', '-', _) => (Tok::Op(BinOp::RevImpl), 2),
            ('<', '=', _) => (Tok::Op(BinOp::Leq), 2),
            ('<', '>', _) => (Tok::Op(BinOp::Neq), 2),
            ('<', _, _) => (Tok::Op(BinOp::Lt), 1),
            ('>', '=', _) => (Tok::Op(BinOp::Geq), 2),
            ('>', _, _) => (Tok::Op(BinOp::Gt), 1),
            ('≥', _, _) => (Tok::Op(BinOp::Geq), 1),
            ('≤', _, _) => (Tok::Op(BinOp::Leq), 1),
            ('≠', _, _) => (Tok::Op(BinOp::Neq), 1),
            ('∨', _, _) => (Tok::Op(BinOp::Or), 1),
            ('∧', _, _) => (Tok::Op(BinOp::And), 1),
            ('→', _, _) => (Tok::Op(BinOp::Impl), 1),
            ('↔', _, _) => (Tok::Op(BinOp::Equiv), 1),
            ('←', _, _) => (Tok::LeftArrow, 1),
            ('¬', _, _) => (Tok::Bang, 1),
            _ => return Err(err(line, col, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, pos });
        i += len;
        col += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_aliases() {
        assert_eq!(
            toks("a \\/ b /\\ c \\ d"),
            vec![
                Tok::Ident("a".into()),
                Tok::Op(BinOp::Or),
                Tok::Ident("b".into()),
                Tok::Op(BinOp::And),
                Tok::Ident("c".into()),
                Tok::Op(BinOp::Xor),
                Tok::Ident("d".into()),
            ]
        );
        assert_eq!(
            toks("<-> <- -> ≥"),
            vec![
                Tok::Op(BinOp::Equiv),
                Tok::Op(BinOp::RevImpl),
                Tok::Op(BinOp::Impl),
                Tok::Op(BinOp::Geq),
            ]
        );
    }

    #[test]
    fn comments_and_ranges() {
        assert_eq!(
            toks("index(1..3). % trailing\n%* block\n *% x"),
            vec![
                Tok::Ident("index".into()),
                Tok::LParen,
                Tok::Int(1),
                Tok::DotDot,
                Tok::Int(3),
                Tok::RParen,
                Tok::Dot,
                Tok::Ident("x".into()),
            ]
        );
    }

    #[test]
    fn primes_in_identifiers() {
        assert_eq!(toks("r''"), vec![Tok::Ident("r''".into())]);
    }

    #[test]
    fn positions_are_tracked() {
        let t = tokenize("a.\n  b.").unwrap();
        assert_eq!(t[2].pos, Pos { line: 2, col: 3 });
    }
}

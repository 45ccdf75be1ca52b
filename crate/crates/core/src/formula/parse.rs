//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Binding, tightest first: `~ [] <> * [b] <b>`, then `&`, `|`, `->` (right
//! associative) and `<->` (right associative).

use thiserror::Error;

use super::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Diamond,
    Bullet,
    BlackBox,
    BlackDiamond,
    LParen,
    RParen,
}

fn describe(tok: Option<&Token>) -> String {
    match tok {
        None => "end of input".into(),
        Some(Token::Ident(v)) => format!("variable `{v}`"),
        Some(t) => format!("{t:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    const SYMBOLS: &[(&str, Token)] = &[
        ("<->", Token::Iff),
        ("<b>", Token::BlackDiamond),
        ("[b]", Token::BlackBox),
        ("<>", Token::Diamond),
        ("[]", Token::Box),
        ("->", Token::Implies),
        ("~", Token::Not),
        ("&", Token::And),
        ("|", Token::Or),
        ("*", Token::Bullet),
        ("(", Token::LParen),
        (")", Token::RParen),
    ];
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "true" => Token::True,
                "false" => Token::False,
                _ => Token::Ident(word.to_string()),
            };
            out.push((start, tok));
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if text[i..].starts_with(sym) {
                out.push((i, tok.clone()));
                i += sym.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(ParseError {
            position: i,
            message: format!("unexpected character `{ch}`"),
        });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            position: self.offset(),
            message,
        }
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.eat(&Token::Iff) {
            Ok(Formula::iff(lhs, self.iff()?))
        } else {
            Ok(lhs)
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Implies) {
            Ok(Formula::implies(lhs, self.implication()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Token::Or) {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("expected a formula, found end of input".into()));
        };
        let wrap: Option<fn(Formula) -> Formula> = match tok {
            Token::Not => Some(Formula::not),
            Token::Box => Some(|f| Formula::Box(Box::new(f))),
            Token::Bullet => Some(|f| Formula::Bullet(Box::new(f))),
            Token::BlackBox => Some(|f| Formula::BlackBox(Box::new(f))),
            Token::Diamond => Some(|f| Formula::not(Formula::Box(Box::new(Formula::not(f))))),
            Token::BlackDiamond => {
                Some(|f| Formula::not(Formula::BlackBox(Box::new(Formula::not(f)))))
            }
            _ => None,
        };
        if let Some(wrap) = wrap {
            self.pos += 1;
            return Ok(wrap(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Ident(v)) => {
                self.pos += 1;
                Ok(Formula::Var(v))
            }
            Some(Token::True) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(
                        self.error(format!("expected `)`, found {}", describe(self.peek())))
                    );
                }
                Ok(inner)
            }
            other => Err(self.error(format!(
                "expected a formula, found {}",
                describe(other.as_ref())
            ))),
        }
    }
}

/// Parses the ASCII syntax. `<>φ` and `<b>φ` are expanded to `~[]~φ` and
/// `~[b]~φ`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let f = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error(format!("unexpected {}", describe(parser.peek()))));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{AxiomSchema, MetaVar, SchemaKind};
    use std::collections::BTreeMap;

    fn p() -> Formula {
        Formula::var("p")
    }

    #[test]
    fn parses_m_instance() {
        let f = parse("[](p & q) -> ([]p & []q)").unwrap();
        let subst = BTreeMap::from([(MetaVar::Phi, p()), (MetaVar::Psi, Formula::var("q"))]);
        let m = AxiomSchema::boxed(SchemaKind::M)
            .instantiate(&subst)
            .unwrap();
        assert_eq!(f, m);
    }

    #[test]
    fn diamond_expands() {
        assert_eq!(
            parse("<>p").unwrap(),
            Formula::not(Formula::Box(Box::new(Formula::not(p()))))
        );
        assert_eq!(
            parse("<b>p").unwrap(),
            Formula::not(Formula::BlackBox(Box::new(Formula::not(p()))))
        );
    }

    #[test]
    fn bullet_t_instance() {
        let f = parse("*p -> p").unwrap();
        let subst = BTreeMap::from([(MetaVar::Phi, p())]);
        assert_eq!(f, AxiomSchema::BULLET_T.instantiate(&subst).unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            parse("p -> (q -> r)").unwrap()
        );
        assert_eq!(parse("p & q | r").unwrap(), parse("(p & q) | r").unwrap());
        assert_eq!(
            parse("p | q -> r <-> s").unwrap(),
            parse("((p | q) -> r) <-> s").unwrap()
        );
        assert_eq!(parse("~[]p & q").unwrap(), parse("(~([]p)) & q").unwrap());
        assert_eq!(
            parse("[b]true").unwrap(),
            Formula::BlackBox(Box::new(Formula::Top))
        );
        assert_eq!(parse("**p").unwrap().modal_depth(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("p $ q").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse("(p & q").unwrap_err();
        assert!(e.message.contains("`)`"));
        let e = parse("p q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse("P").is_err());
        assert!(parse("").is_err());
    }

    mod roundtrip {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn parser_never_panics(text in "[pq~&|()<>\\[\\]b* -]{0,24}") {
                let _ = parse(&text);
            }

            #[test]
            fn whitespace_is_insignificant(text in "(p|q|~p|\\[\\]p|\\*q|<b>p)( (&|\\||->) (p|q|\\[b\\]q)){0,3}") {
                let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
                prop_assert_eq!(parse(&text).unwrap(), parse(&squeezed).unwrap());
            }
        }
    }
}

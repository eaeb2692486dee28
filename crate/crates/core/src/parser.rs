//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := impl
//! impl    := disj ("->" impl)?
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "~" unary | "<" MOD ">" unary | "[" MOD "]" unary | atom
//! atom    := "true" | "false" | IDENT | "(" formula ")"
//! MOD     := A | iA | B | iB | E | iE | L | iL | D | iD | O | iO
//! IDENT   := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line. Identifiers starting with `__` are accepted as reserved letters so
//! that generated formulas can be read back.

use crate::error::ParseError;
use crate::formula::Formula;
use crate::modality::Modality;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Arrow,
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Word(String),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let single = match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '~' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '<' => Some(Tok::LAngle),
            '>' => Some(Tok::RAngle),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: start.0, column: start.1 });
            i += 1;
            column += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, line: start.0, column: start.1 });
            i += 2;
            column += 2;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            column += i - begin;
            out.push(Token { tok: Tok::Word(word), line: start.0, column: start.1 });
        } else {
            return Err(ParseError::Syntax {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

fn is_ident(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => true,
        Some('_') => word.starts_with("__") && word.len() > 2,
        _ => false,
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(self.error(&t, format!("expected {what}")))
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek().tok == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn modality(&mut self, close: Tok) -> Result<Modality, ParseError> {
        let t = self.bump();
        let Tok::Word(word) = &t.tok else {
            return Err(self.error(&t, "expected a modality"));
        };
        let m = word.parse::<Modality>().map_err(|_| ParseError::UnknownModality {
            token: word.clone(),
            line: t.line,
            column: t.column,
        })?;
        let what = if close == Tok::RAngle { "`>`" } else { "`]`" };
        self.expect(close, what)?;
        Ok(m)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let m = self.modality(Tok::RAngle)?;
                Ok(Formula::diamond(m, self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let m = self.modality(Tok::RBrack)?;
                Ok(Formula::boxed(m, self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Word(w) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Word(w) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Word(w) if is_ident(w) => {
                self.bump();
                Ok(Formula::Atom(w.clone()))
            }
            Tok::Word(w) => Err(self.error(&t, format!("`{w}` is not a proposition letter"))),
            Tok::Eof => Err(self.error(&t, "unexpected end of input")),
            _ => Err(self.error(&t, "expected a formula")),
        }
    }
}

/// Parses a formula from its concrete syntax.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser { tokens: lex(text)?, pos: 0 };
    let f = parser.implication()?;
    let t = parser.peek().clone();
    if t.tok != Tok::Eof {
        return Err(parser.error(&t, "trailing input"));
    }
    Ok(f)
}

//! Recursive-descent parser for
//!
//! ```text
//! atom := IDENT ("." IDENT)?
//! φ    := atom | "~" φ | "[]" φ | "<>" φ
//!       | "(" φ "->" φ ")" | "(" φ "&" φ ")" | "(" φ "|" φ ")" | "(" φ "<->" φ ")"
//! ```
//!
//! `&`, `|` and `<->` desugar immediately; the AST only holds core connectives.

use std::fmt;

use super::Formula;

/// A syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Binary {
    Implies,
    And,
    Or,
    Iff,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(Formula::not(self.formula()?));
        }
        if self.eat("[]") {
            return Ok(Formula::nec(self.formula()?));
        }
        if self.eat("<>") {
            return Ok(Formula::poss(self.formula()?));
        }
        if self.eat("(") {
            let left = self.formula()?;
            let op = self.binary()?;
            let right = self.formula()?;
            if !self.eat(")") {
                return self.error("expected ')'");
            }
            return Ok(match op {
                Binary::Implies => Formula::implies(left, right),
                Binary::And => Formula::and(left, right),
                Binary::Or => Formula::or(left, right),
                Binary::Iff => Formula::iff(left, right),
            });
        }
        self.atom()
    }

    fn binary(&mut self) -> Result<Binary, ParseError> {
        for (token, op) in [("<->", Binary::Iff), ("->", Binary::Implies), ("&", Binary::And), ("|", Binary::Or)] {
            if self.eat(token) {
                return Ok(op);
            }
        }
        self.error("expected one of '->', '&', '|', '<->'")
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(_) = self.ident() else {
            return if self.rest().is_empty() {
                self.error("unexpected end of input")
            } else {
                self.error(format!("unexpected {:?}", self.rest().chars().next().unwrap()))
            };
        };
        if self.rest().starts_with('.') {
            self.pos += 1;
            if self.ident().is_none() {
                return self.error("expected an identifier after '.'");
            }
        }
        Ok(Formula::Atom(self.src[start..self.pos].to_owned()))
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(x: &str) -> Formula {
        Formula::atom(x)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse("(A.rho -> <> B.sigma)").unwrap(),
            Formula::implies(a("A.rho"), Formula::poss(a("B.sigma")))
        );
        assert_eq!(parse("[] (p -> q)").unwrap(), Formula::nec(Formula::implies(a("p"), a("q"))));
        assert_eq!(
            parse("~ [] ~ p").unwrap(),
            Formula::not(Formula::nec(Formula::not(a("p"))))
        );
    }

    #[test]
    fn sugar_desugars() {
        assert_eq!(parse("(p & q)").unwrap(), Formula::and(a("p"), a("q")));
        assert_eq!(parse("(p | q)").unwrap(), Formula::implies(Formula::not(a("p")), a("q")));
        assert_eq!(parse("(p <-> q)").unwrap(), Formula::iff(a("p"), a("q")));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("(p -> q").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse("(p q)").unwrap_err();
        assert_eq!(e.position, 3);
        assert_eq!(parse("p q").unwrap_err().message, "trailing input");
        assert!(parse("").is_err());
        assert!(parse("A.").is_err());
        assert!(parse("1p").is_err());
        assert!(parse("p -> q").is_err());
    }

    #[test]
    fn printer_output_reparses() {
        for text in ["(A.rho -> <> B.sigma)", "~[]~p", "((p & q) | ~r)", "[]<>(p <-> [] q)"] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{text}");
        }
        assert_eq!(parse("(p->[]q)").unwrap().to_string(), "(p -> []q)");
    }
}

//! Recursive-descent parser for the infix expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! Identifiers are chart coordinates, `t` (time), `pi`, the functions
//! `sin cos tan sinh cosh exp ln sqrt` (`log` is an alias of `ln`), and
//! `Sinn`/`Cosn` when the chart carries a curvature sign. `^` is right
//! associative and binds tighter than unary minus, so `-x^2 = -(x^2)`.

use thiserror::Error;

use super::chart::{cosn, sinn, CoordinateChart};
use super::node::{Expression, Function};
use super::number::Number;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at offset {position}")]
    UnknownIdentifier { name: String, position: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Number),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal = &text[start..i];
            let n = Number::parse_decimal(literal).ok_or_else(|| ParseError::Syntax {
                position: start,
                message: format!("malformed number `{literal}`"),
            })?;
            out.push((Token::Number(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Token::Ident(text[start..i].to_string()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Token::Op(c),
                '(' => Token::LParen,
                ')' => Token::RParen,
                _ => return Err(ParseError::Syntax { position: i, message: format!("unexpected character `{c}`") }),
            };
            out.push((tok, i));
            i += c.len_utf8();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    chart: &'a CoordinateChart,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.offset(), message: message.into() })
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat_op('/') {
                acc = acc.div(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.eat_op('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.primary()?;
        if self.eat_op('^') {
            let exp = self.unary()?;
            return Ok(base.pow(&exp));
        }
        Ok(base)
    }

    fn call_argument(&mut self) -> Result<Expression, ParseError> {
        if self.peek() != Some(&Token::LParen) {
            return self.syntax("expected `(` after function name");
        }
        self.pos += 1;
        let arg = self.expr()?;
        if self.peek() != Some(&Token::RParen) {
            return self.syntax("expected `)`");
        }
        self.pos += 1;
        Ok(arg)
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        let position = self.offset();
        match self.peek().cloned() {
            Some(Token::Number(n)) => {
                self.pos += 1;
                Ok(Expression::constant(n))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.chart.index_of(&name) {
                    return Ok(Expression::coord(i));
                }
                if let Some(f) = Function::from_name(&name) {
                    return Ok(self.call_argument()?.apply(f));
                }
                match (name.as_str(), self.chart.curvature()) {
                    ("t", _) => Ok(Expression::time()),
                    ("pi", _) => Ok(Expression::constant(Number::Real(std::f64::consts::PI))),
                    ("Sinn", Some(k)) => Ok(sinn(k, &self.call_argument()?)),
                    ("Cosn", Some(k)) => Ok(cosn(k, &self.call_argument()?)),
                    _ => Err(ParseError::UnknownIdentifier { name, position }),
                }
            }
            Some(Token::Op(c)) => self.syntax(format!("unexpected `{c}`")),
            Some(Token::RParen) => self.syntax("unexpected `)`"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// Parses `text` over the coordinates of `chart`.
pub fn parse(text: &str, chart: &CoordinateChart) -> Result<Expression, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, end: text.len(), chart };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.syntax("trailing input");
    }
    Ok(e)
}

impl Expression {
    pub fn parse(text: &str, chart: &CoordinateChart) -> Result<Expression, ParseError> {
        parse(text, chart)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn chart(names: &[&str]) -> CoordinateChart {
        CoordinateChart::new(names).unwrap()
    }

    #[test]
    fn product_of_trig() {
        let c = chart(&["theta", "phi"]);
        let e = parse("cos(theta)*sin(phi)", &c).unwrap();
        assert!(matches!(e.node(), super::super::Node::Mul(..)));
        assert!((e.eval(&[0.0, FRAC_PI_2], None).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial() {
        let c = chart(&["x", "y"]);
        assert_eq!(parse("x^2 + y", &c).unwrap().eval(&[2.0, 3.0], None), Ok(7.0));
    }

    #[test]
    fn exponential() {
        let c = chart(&["lambda", "beta1"]);
        assert_eq!(parse("exp(3*lambda)", &c).unwrap().eval(&[0.0, 5.0], None), Ok(1.0));
    }

    #[test]
    fn precedence_and_associativity() {
        let c = chart(&["x"]);
        let eval = |s: &str| parse(s, &c).unwrap().eval(&[2.0], None).unwrap();
        assert_eq!(eval("-x^2"), -4.0);
        assert_eq!(eval("2^3^2"), 512.0);
        assert_eq!(eval("x^-1"), 0.5);
        assert_eq!(eval("8/2/2"), 2.0);
        assert_eq!(eval("1 - 2 - 3"), -4.0);
        assert_eq!(eval("3*-x"), -6.0);
        assert!((eval("1e-3 * x") - 0.002).abs() < 1e-18);
        assert!((eval("pi") - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn time_variable() {
        let c = chart(&["x"]);
        assert_eq!(parse("t*x", &c).unwrap().eval(&[2.0], Some(3.0)), Ok(6.0));
    }

    #[test]
    fn sinn_expands_by_curvature() {
        let sphere = chart(&["phi", "theta"]).with_curvature(1);
        let hyper = chart(&["phi", "theta"]).with_curvature(-1);
        let s = parse("Sinn(phi)*Cosn(phi)", &sphere).unwrap();
        let h = parse("Sinn(phi)*Cosn(phi)", &hyper).unwrap();
        assert!((s.eval(&[0.7, 0.0], None).unwrap() - 0.7f64.sin() * 0.7f64.cos()).abs() < 1e-15);
        assert!((h.eval(&[0.7, 0.0], None).unwrap() - 0.7f64.sinh() * 0.7f64.cosh()).abs() < 1e-15);
        let inv = parse("1/Sinn(phi)", &sphere).unwrap();
        assert!(inv.eval(&[0.0, 0.3], None).is_err());
        assert!(matches!(parse("Sinn(phi)", &chart(&["phi"])), Err(ParseError::UnknownIdentifier { .. })));
    }

    #[test]
    fn errors_carry_positions() {
        let c = chart(&["x", "y"]);
        assert_eq!(parse("x + z", &c), Err(ParseError::UnknownIdentifier { name: "z".into(), position: 4 }));
        assert!(matches!(parse("x + ", &c), Err(ParseError::Syntax { position: 4, .. })));
        assert!(matches!(parse("(x", &c), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("x $ y", &c), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("x y", &c), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("sin x", &c), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn exact_decimal_constants() {
        let c = chart(&["x"]);
        let e = parse("0.1 + 0.2", &c).unwrap();
        assert_eq!(e.as_number(), Some(Number::ratio(3, 10)));
    }
}

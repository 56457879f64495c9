//! Expression syntax:
//!
//! ```text
//! expr   = "!" expr | "(" expr [ binop expr ] ")" | atom ;
//! binop  = "&" | "|" | "^" ;
//! atom   = "0" | "1" | "x" index | "u" index | "d(g)/d(u" index ")" ;
//! ```
//!
//! There is no precedence: every binary operation must be parenthesized.

use super::{BoolExpr, Var};
use crate::error::{Error, Result};

/// Parses a single expression; error positions are relative to `text`
/// (line 1).
pub fn parse_expr(text: &str) -> Result<BoolExpr> {
    parse_expr_at(text, 1, 1)
}

/// Parses `text`, reporting positions as if it started at `line`, `column`.
pub(crate) fn parse_expr_at(text: &str, line: usize, column: usize) -> Result<BoolExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        column,
    };
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        let msg = if matches!(c, '&' | '|' | '^') {
            format!(
                "operator '{c}' outside parentheses; every binary operation must be parenthesized"
            )
        } else {
            format!("unexpected '{c}' after expression")
        };
        return Err(p.error(msg));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column + self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<()> {
        for c in word.chars() {
            match self.peek() {
                Some(got) if got == c => self.pos += 1,
                _ => return Err(self.error(format!("expected '{word}'"))),
            }
        }
        Ok(())
    }

    fn index(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a variable index"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        match s.parse::<usize>() {
            Ok(0) | Err(_) => {
                self.pos = start;
                Err(self.error(format!("invalid variable index '{s}'")))
            }
            Ok(i) => Ok(i),
        }
    }

    fn expr(&mut self) -> Result<BoolExpr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("expected an expression, found end of input")),
            Some('!') => {
                self.pos += 1;
                Ok(BoolExpr::not(self.expr()?))
            }
            Some('(') => {
                self.pos += 1;
                let left = self.expr()?;
                self.skip_ws();
                let op = match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        return Ok(left);
                    }
                    Some(c @ ('&' | '|' | '^')) => {
                        self.pos += 1;
                        c
                    }
                    Some(c) => {
                        return Err(self.error(format!("expected operator or ')', found '{c}'")))
                    }
                    None => return Err(self.error("unclosed '('")),
                };
                let right = self.expr()?;
                self.skip_ws();
                if let Some(c @ ('&' | '|' | '^')) = self.peek() {
                    return Err(self.error(format!(
                        "operator '{c}' chains without parentheses; every binary operation must be parenthesized"
                    )));
                }
                self.expect(')')?;
                Ok(match op {
                    '&' => BoolExpr::and(left, right),
                    '|' => BoolExpr::or(left, right),
                    _ => BoolExpr::xor(left, right),
                })
            }
            Some('0') => {
                self.pos += 1;
                Ok(BoolExpr::Const(false))
            }
            Some('1') => {
                self.pos += 1;
                Ok(BoolExpr::Const(true))
            }
            Some('x') => {
                self.pos += 1;
                Ok(BoolExpr::Var(Var::State(self.index()?)))
            }
            Some('u') => {
                self.pos += 1;
                Ok(BoolExpr::Var(Var::Control(self.index()?)))
            }
            Some('d') => {
                self.expect_word("d(g)/d(u")?;
                let k = self.index()?;
                self.expect(')')?;
                Ok(BoolExpr::Var(Var::Deriv(k)))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }
}

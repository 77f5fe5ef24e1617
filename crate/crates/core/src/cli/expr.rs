//! Exact evaluation of small rational expressions such as `(1/3 + 2) * -5`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("unexpected '{found}' at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            out.push((i, Token::Num(s[i..end].parse().expect("ascii digits"))));
        } else if "+-*/()".contains(c) {
            out.push((i, Token::Op(c)));
            chars.next();
        } else {
            return Err(ExprError::Unexpected {
                found: c.to_string(),
                offset: i,
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn unexpected(&self) -> ExprError {
        match self.tokens.get(self.pos) {
            None => ExprError::UnexpectedEnd,
            Some((offset, tok)) => ExprError::Unexpected {
                found: match tok {
                    Token::Num(n) => n.to_string(),
                    Token::Op(c) => c.to_string(),
                },
                offset: *offset,
            },
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<BigRational, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<BigRational, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc *= rhs;
            } else if rhs.is_zero() {
                return Err(ExprError::DivisionByZero);
            } else {
                acc /= rhs;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BigRational, ExprError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<BigRational, ExprError> {
        match self.tokens.get(self.pos).cloned() {
            Some((_, Token::Num(n))) => {
                self.pos += 1;
                Ok(BigRational::from_integer(n))
            }
            Some((_, Token::Op('('))) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected()),
        }
    }
}

pub fn evaluate(s: &str) -> Result<BigRational, ExprError> {
    let mut parser = Parser {
        tokens: tokenize(s)?,
        pos: 0,
    };
    let v = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.unexpected());
    }
    Ok(v)
}

//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' uint)?
//! base   := number | 'pi' | 't' | 'x' | '(' expr ')' | ('exp' | 'sin' | 'cos') '(' expr ')'
//! ```
//!
//! Arguments of `exp`, `sin` and `cos` must reduce to `a·var + c` in a single
//! variable; `sin`/`cos` additionally require `c = 0` when `a ≠ 0`.

use super::normal::Normal;
use super::{ExprError, Expression, Var};

pub fn parse(text: &str) -> Result<Expression, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e.canonical())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, Copy)]
enum Func {
    Exp,
    Sin,
    Cos,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                let t = self.term()?;
                terms.push(Expression::Product(vec![Expression::Const(-1.0), t]));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expression::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut factors = vec![self.unary()?];
        while self.eat(b'*') {
            factors.push(self.unary()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expression::Product(factors)
        })
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            Ok(Expression::Product(vec![Expression::Const(-1.0), inner]))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expression, ExprError> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected unsigned integer exponent"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: u32 = text.parse().map_err(|_| ExprError::Syntax {
                offset: start,
                message: "exponent out of range".into(),
            })?;
            return Ok(Expression::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expression, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "pi" => Ok(Expression::Const(std::f64::consts::PI)),
                    "t" => Ok(Expression::Var(Var::T)),
                    "x" => Ok(Expression::Var(Var::X)),
                    "exp" => self.call(Func::Exp, start),
                    "sin" => self.call(Func::Sin, start),
                    "cos" => self.call(Func::Cos, start),
                    _ => Err(ExprError::UnknownIdentifier {
                        offset: start,
                        name: name.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expression, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            digits(self);
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                // `2exp(...)` is not valid either, but report it at the identifier
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("invalid number `{text}`"),
        })?;
        if !value.is_finite() {
            return Err(ExprError::Syntax {
                offset: start,
                message: "number is not finite".into(),
            });
        }
        Ok(Expression::Const(value))
    }

    fn call(&mut self, func: Func, start: usize) -> Result<Expression, ExprError> {
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        linear_call(func, &arg).map_err(|msg| ExprError::OutsideGrammar(format!("{msg} (at byte {start})")))
    }
}

/// Reduces `func(a·var + c)` to a grammar node.
fn linear_call(func: Func, arg: &Expression) -> Result<Expression, String> {
    let normal = Normal::from_expression(arg);
    let mut offset = 0.0;
    let mut slope: Option<(Var, f64)> = None;
    for term in &normal.terms {
        let m = &term.mono;
        if m.is_one() {
            offset += term.coeff;
            continue;
        }
        let var = if m.pows == [1, 0] {
            Var::X
        } else if m.pows == [0, 1] {
            Var::T
        } else {
            return Err("function argument must be linear in one variable".into());
        };
        if m.rates != [0.0, 0.0] || !m.trig.is_empty() {
            return Err("function argument must be linear in one variable".into());
        }
        match slope {
            None => slope = Some((var, term.coeff)),
            Some(_) => return Err("function argument mixes x and t".into()),
        }
    }
    Ok(match (func, slope) {
        (Func::Exp, None) => Expression::Const(offset.exp()),
        (Func::Sin, None) => Expression::Const(offset.sin()),
        (Func::Cos, None) => Expression::Const(offset.cos()),
        (Func::Exp, Some((var, rate))) => {
            let node = Expression::Exp { rate, var };
            if offset == 0.0 {
                node
            } else {
                Expression::Product(vec![Expression::Const(offset.exp()), node])
            }
        }
        (_, Some(_)) if offset != 0.0 => return Err("phase offsets in sin/cos are not supported".into()),
        (Func::Sin, Some((var, freq))) => Expression::Sin { freq, var },
        (Func::Cos, Some((var, freq))) => Expression::Cos { freq, var },
    })
}

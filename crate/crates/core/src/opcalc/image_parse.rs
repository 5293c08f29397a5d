//! Parser for images written in `s` and `u`, such as `3u^2/(s^2+9u^2)`.
//!
//! Juxtaposition multiplies (`8us` is `8*u*s`). The parsed value must be a
//! function of `s/u` alone; it is stored as a rational in `p` by setting
//! `u = 1`.

use crate::numerics::Polynomial;

use super::{OpcalcError, RationalTransform};

#[derive(Clone, Debug)]
enum Node {
    Num(f64),
    S,
    U,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
}

impl Node {
    fn eval(&self, s: f64, u: f64) -> f64 {
        match self {
            Node::Num(c) => *c,
            Node::S => s,
            Node::U => u,
            Node::Add(a, b) => a.eval(s, u) + b.eval(s, u),
            Node::Sub(a, b) => a.eval(s, u) - b.eval(s, u),
            Node::Mul(a, b) => a.eval(s, u) * b.eval(s, u),
            Node::Div(a, b) => a.eval(s, u) / b.eval(s, u),
            Node::Neg(a) => -a.eval(s, u),
            Node::Pow(a, n) => a.eval(s, u).powi(*n as i32),
        }
    }

    /// `(numerator, denominator)` in `p` with `u = 1`.
    fn rational(&self) -> Result<(Polynomial, Polynomial), OpcalcError> {
        Ok(match self {
            Node::Num(c) => (Polynomial::constant(*c), Polynomial::one()),
            Node::S => (Polynomial::monomial(1.0, 1), Polynomial::one()),
            Node::U => (Polynomial::one(), Polynomial::one()),
            Node::Add(a, b) | Node::Sub(a, b) => {
                let (an, ad) = a.rational()?;
                let (bn, bd) = b.rational()?;
                let left = &an * &bd;
                let right = &bn * &ad;
                let num = if matches!(self, Node::Add(..)) {
                    &left + &right
                } else {
                    &left - &right
                };
                (num, &ad * &bd)
            }
            Node::Mul(a, b) => {
                let (an, ad) = a.rational()?;
                let (bn, bd) = b.rational()?;
                (&an * &bn, &ad * &bd)
            }
            Node::Div(a, b) => {
                let (an, ad) = a.rational()?;
                let (bn, bd) = b.rational()?;
                if bn.is_zero() {
                    return Err(OpcalcError::ImageSyntax {
                        offset: 0,
                        message: "division by zero".into(),
                    });
                }
                (&an * &bd, &ad * &bn)
            }
            Node::Neg(a) => {
                let (n, d) = a.rational()?;
                (-&n, d)
            }
            Node::Pow(a, k) => {
                let (n, d) = a.rational()?;
                (n.powi(*k), d.powi(*k))
            }
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> OpcalcError {
        OpcalcError::ImageSyntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Node, OpcalcError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Node::Add(lhs.into(), rhs.into())
            } else {
                Node::Sub(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, OpcalcError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Node::Mul(lhs.into(), self.unary()?.into());
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Node::Div(lhs.into(), self.unary()?.into());
                }
                Some(c) if c.is_ascii_digit() || c == b'.' || c == b'(' || c.is_ascii_alphabetic() => {
                    lhs = Node::Mul(lhs.into(), self.factor()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, OpcalcError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::Neg(self.unary()?.into()));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Node, OpcalcError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let n: u32 = text.parse().map_err(|_| OpcalcError::ImageSyntax {
                offset: start,
                message: "expected a non-negative integer exponent".into(),
            })?;
            return Ok(Node::Pow(base.into(), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Node, OpcalcError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                match c {
                    b's' => Ok(Node::S),
                    b'u' => Ok(Node::U),
                    _ => Err(OpcalcError::ImageSyntax {
                        offset: start,
                        message: format!("unknown symbol `{}`", c as char),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Node, OpcalcError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && (p.src[p.pos].is_ascii_digit() || p.src[p.pos] == b'.') {
                p.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse().map(Node::Num).map_err(|_| OpcalcError::ImageSyntax {
            offset: start,
            message: format!("bad number `{text}`"),
        })
    }
}

/// Parses an image in `s` and `u` into a rational in `p = s/u`.
pub fn parse_image(text: &str) -> Result<RationalTransform, OpcalcError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let node = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("unexpected trailing input"));
    }
    check_homogeneous(&node)?;
    let (num, den) = node.rational()?;
    Ok(RationalTransform::from_polys(num, &den)?)
}

/// Rejects images that change under `(s, u) → (λs, λu)`.
fn check_homogeneous(node: &Node) -> Result<(), OpcalcError> {
    for (p, lambda) in [(1.37, 2.9), (4.21, 0.31), (0.73, 7.3)] {
        let a = node.eval(p, 1.0);
        let b = node.eval(lambda * p, lambda);
        if a.is_finite() && b.is_finite() && (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1e-300) {
            return Err(OpcalcError::NotHomogeneous);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PoleFactor;

    #[test]
    fn parses_rendered_forms() {
        for text in [
            "3u^2/(s^2+9u^2)",
            "3u^2/(s^2+8us+25u^2)",
            "u/s",
            "2u^3/s^3",
            "(us+u^2)/(s^2-4us+4u^2)",
        ] {
            assert_eq!(parse_image(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn factored_input() {
        let v = parse_image("u^2/(s-2u)^2").unwrap();
        assert_eq!(
            v,
            RationalTransform::new(Polynomial::one(), vec![PoleFactor::real(2.0, 2)])
        );
        let v = parse_image("2*u / (s + 0.5*u)").unwrap();
        assert_eq!(v, RationalTransform::real_pole(2.0, -0.5, 1));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_image("u/s^2"), Err(OpcalcError::NotHomogeneous)));
        assert!(matches!(
            parse_image("u/(s+"),
            Err(OpcalcError::ImageSyntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse_image("u/q"),
            Err(OpcalcError::ImageSyntax { offset: 2, .. })
        ));
    }
}

//! Text form of field elements.
//!
//! Input is an arithmetic expression over the constants field in the
//! arena's variable: integers (read mod ℓ), `s`, `t`, `z`, `+ - * /`, `^`
//! with a signed integer exponent, parentheses, and implicit
//! multiplication (`2s`, `s(s+1)`). In variant R, `t` stands for s^p; `z`
//! is the generator of a non-prime constants field. The result is
//! factored into canonical form.
//!
//! Output renders constant × atoms, e.g. `2*(s+3)*(s+6)^-1`, and a single
//! atom with unit constant bare, e.g. `s+6`.

use crate::arena::{Arena, FieldElement, Poly, Variant};
use crate::error::{Error, Result};

/// A parsed value: `None` is zero.
type Value = Option<FieldElement>;

struct Parser<'a> {
    arena: &'a Arena,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn add(&self, a: Value, b: Value) -> Value {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => x.add(self.arena.field(), &y),
        }
    }

    fn neg(&self, a: Value) -> Value {
        let field = self.arena.field();
        a.map(|x| x.scale(field, field.neg(1)).expect("−1 is nonzero"))
    }

    fn mul(&self, a: Value, b: Value) -> Value {
        Some(a?.mul(self.arena.field(), &b?))
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.add(acc, rhs);
                }
                Some('-') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.add(acc, self.neg(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.mul(acc, rhs);
                }
                Some('/') => {
                    self.bump();
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let Some(rhs) = rhs else {
                        self.pos = at;
                        return Err(Error::ZeroElement);
                    };
                    acc = acc.map(|x| x.div(self.arena.field(), &rhs));
                }
                Some(c) if c == '(' || c.is_ascii_alphabetic() || c.is_ascii_digit() => {
                    let rhs = self.power()?;
                    acc = self.mul(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek() == Some('-') {
            self.bump();
            let v = self.unary()?;
            return Ok(self.neg(v));
        }
        if self.peek() == Some('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<i64>().map_err(|_| Error::Syntax {
            pos: start,
            message: format!("integer `{text}` out of range"),
        })
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        let negative = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let at = self.pos;
        let e = self.integer()?;
        let e = if negative { -e } else { e };
        match base {
            Some(x) => Ok(Some(x.pow(self.arena.field(), e))),
            None if e > 0 => Ok(None),
            None => {
                self.pos = at;
                Err(Error::ZeroElement)
            }
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let field = self.arena.field();
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.bump();
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let c = field.from_int(n);
                Ok((c != 0).then(|| FieldElement::constant(c).expect("nonzero")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                match (c, self.arena.variant()) {
                    ('s', Variant::R) | ('t', Variant::C) => Ok(Some(FieldElement::variable())),
                    ('t', Variant::R) => Ok(Some(self.arena.base_variable())),
                    ('z', _) => {
                        if field.degree() == 1 {
                            Err(Error::NotInConstantsField(format!(
                                "`z` at position {start}: F_{} is a prime field",
                                field.size()
                            )))
                        } else {
                            Ok(Some(FieldElement::constant(field.z()).expect("nonzero")))
                        }
                    }
                    (other, _) => Err(Error::Syntax {
                        pos: start,
                        message: format!("unknown variable `{other}`"),
                    }),
                }
            }
            Some(other) => Err(self.syntax(format!("unexpected `{other}`"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

/// Parses an element of K×.
pub fn parse_element(arena: &Arena, text: &str) -> Result<FieldElement> {
    let mut parser = Parser {
        arena,
        chars: text.chars().collect(),
        pos: 0,
    };
    let value = parser.expr()?;
    if let Some(c) = parser.peek() {
        return Err(parser.syntax(format!("unexpected `{c}`")));
    }
    value.ok_or(Error::ZeroElement)
}

/// Renders a constant: a residue for prime fields, a polynomial in z
/// otherwise.
pub fn render_constant(arena: &Arena, c: u32) -> String {
    let field = arena.field();
    if field.degree() == 1 {
        return c.to_string();
    }
    let digits = field.digits(c);
    let mut terms = Vec::new();
    for (k, &d) in digits.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        terms.push(monomial(&d.to_string(), 'z', k));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn monomial(coeff: &str, var: char, k: usize) -> String {
    match (coeff, k) {
        (c, 0) => c.to_string(),
        ("1", 1) => var.to_string(),
        ("1", k) => format!("{var}^{k}"),
        (c, 1) => format!("{c}*{var}"),
        (c, k) => format!("{c}*{var}^{k}"),
    }
}

fn is_compound(text: &str) -> bool {
    text.contains('+')
}

/// Renders a polynomial in the arena variable, leading term first.
pub fn render_poly(arena: &Arena, f: &Poly) -> String {
    let var = arena.var_name();
    let mut terms = Vec::new();
    for (k, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mut coeff = render_constant(arena, c);
        if k > 0 && is_compound(&coeff) {
            coeff = format!("({coeff})");
        }
        terms.push(monomial(&coeff, var, k));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub fn render_element(arena: &Arena, x: &FieldElement) -> String {
    let c = x.constant_part();
    let factors = x.factors();
    if c == 1 && factors.len() == 1 {
        let (atom, &e) = factors.iter().next().expect("one atom");
        if e == 1 {
            return render_poly(arena, atom);
        }
    }
    let mut parts = Vec::new();
    if c != 1 || factors.is_empty() {
        let text = render_constant(arena, c);
        if is_compound(&text) && !factors.is_empty() {
            parts.push(format!("({text})"));
        } else {
            parts.push(text);
        }
    }
    for (atom, &e) in factors {
        let text = render_poly(arena, atom);
        let base = if is_compound(&text) {
            format!("({text})")
        } else {
            text
        };
        if e == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{base}^{e}"));
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaConfig;

    fn arena(variant: Variant, q: u64) -> Arena {
        Arena::new(ArenaConfig { p: 3, variant, q }).unwrap()
    }

    #[test]
    fn parse_factored_input() {
        let a = arena(Variant::R, 7);
        let x = parse_element(&a, "3*(s+6)^2*(s^2+1)^-1").unwrap();
        assert_eq!(x.constant_part(), 3);
        assert_eq!(x.factors().len(), 2);
        assert_eq!(render_element(&a, &x), "3*(s+6)^2*(s^2+1)^-1");
    }

    #[test]
    fn parse_auto_factors() {
        let a = arena(Variant::R, 7);
        let x = parse_element(&a, "(s^3+6)").unwrap();
        assert_eq!(render_element(&a, &x), "(s+3)*(s+5)*(s+6)");
        assert_eq!(parse_element(&a, "t-1").unwrap(), x);
    }

    #[test]
    fn parse_errors() {
        let a = arena(Variant::R, 7);
        assert_eq!(parse_element(&a, "0"), Err(Error::ZeroElement));
        assert_eq!(parse_element(&a, "s-s"), Err(Error::ZeroElement));
        assert!(matches!(parse_element(&a, "3*(s+"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_element(&a, "s+)"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_element(&a, "z+1"), Err(Error::NotInConstantsField(_))));
        assert!(matches!(parse_element(&a, "x"), Err(Error::Syntax { pos: 0, .. })));
        assert_eq!(parse_element(&a, "1/(s-s)"), Err(Error::ZeroElement));
    }

    #[test]
    fn rendering_shapes() {
        let a = arena(Variant::R, 7);
        for text in ["s+6", "2*(s+3)*(s+6)^-1", "2*s*(s+3)*(s+6)^-1", "s^2", "6", "1"] {
            let x = parse_element(&a, text).unwrap();
            assert_eq!(render_element(&a, &x), text);
        }
        let c = arena(Variant::C, 7);
        let x = parse_element(&c, "(z+1)*(t+z)").unwrap();
        assert_eq!(parse_element(&c, &render_element(&c, &x)).unwrap(), x);
    }
}

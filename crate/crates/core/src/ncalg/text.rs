//! Text, LaTeX and JSON forms of [`NCPoly`].
//!
//! Text grammar, with `.` and `*` both denoting multiplication:
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'.'|'/') factor)*
//! factor := atom ['^' exp]
//! atom   := int | 'q' | name '[' int (',' int)* ']' ['@' int] | '(' poly ')'
//! exp    := ['-'] int | ('(' | '{') ['-'] int ['/' '2'] (')' | '}')
//! ```

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use super::{GenId, NCPoly, NcError, Word};
use crate::qseries::{LaurentV, RationalFn};

fn coeff_sign_and_magnitude(c: &RationalFn) -> (bool, String) {
    // Single-monomial Laurent coefficients print their sign as the separator.
    if let Some(l) = c.as_laurent() {
        if l.is_monomial() {
            let (e, x) = l.terms().next().unwrap();
            let mag = LaurentV::monomial(x.abs(), e);
            let s = if mag.is_one() { String::new() } else { mag.to_string() };
            return (x.is_negative(), s);
        }
        return (false, format!("({l})"));
    }
    (false, c.to_string())
}

/// Canonical text: terms in word order, e.g. `a[1,1].a[2,2] - q*a[1,2].a[2,1]`.
pub fn render_text(p: &NCPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (pos, (w, c)) in p.terms().enumerate() {
        let (neg, mag) = coeff_sign_and_magnitude(c);
        match (pos, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        match (mag.is_empty(), w.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&w.to_string()),
            (false, true) => out.push_str(&mag),
            (false, false) => {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&w.to_string());
            }
        }
    }
    out
}

fn latex_gen(g: &GenId) -> String {
    let sep = if g.idx.iter().all(|&i| i < 10) { "" } else { "," };
    let idx = g.idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep);
    if g.comp == 0 {
        format!("{}_{{{idx}}}", g.name)
    } else {
        format!("{}^{{({})}}_{{{idx}}}", g.name, g.comp)
    }
}

fn latex_word(w: &Word) -> String {
    w.letters().iter().map(latex_gen).collect::<Vec<_>>().join(" ")
}

fn latex_body<'a>(terms: impl Iterator<Item = (&'a Word, LaurentV)>) -> String {
    let mut out = String::new();
    for (pos, (w, c)) in terms.enumerate() {
        let (neg, mag) = if c.is_monomial() {
            let (e, x) = c.terms().next().unwrap();
            let mag = LaurentV::monomial(x.abs(), e);
            (x.is_negative(), if mag.is_one() { String::new() } else { mag.to_latex() })
        } else {
            (false, format!("\\left({}\\right)", c.to_latex()))
        };
        match (pos, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let word = latex_word(w);
        match (mag.is_empty(), word.is_empty()) {
            (true, true) => out.push('1'),
            (_, true) => out.push_str(&mag),
            (true, false) => out.push_str(&word),
            (false, false) => {
                out.push_str(&mag);
                out.push(' ');
                out.push_str(&word);
            }
        }
    }
    out
}

/// LaTeX form; a denominator shared by every term is factored out.
pub fn render_latex(p: &NCPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let first_den = p.terms().next().unwrap().1.den().clone();
    let shared = !first_den.is_one() && p.terms().all(|(_, c)| *c.den() == first_den);
    if shared {
        let body = latex_body(p.terms().map(|(w, c)| (w, c.num().clone())));
        return format!("\\frac{{1}}{{{}}}\\left({body}\\right)", first_den.to_latex());
    }
    if p.terms().all(|(_, c)| c.is_laurent()) {
        return latex_body(p.terms().map(|(w, c)| (w, c.num().clone())));
    }
    let mut out = String::new();
    for (pos, (w, c)) in p.terms().enumerate() {
        if pos > 0 {
            out.push_str(" + ");
        }
        out.push_str(&format!("\\left({}\\right) {}", c.to_latex(), latex_word(w)));
    }
    out
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn laurent_json(l: &LaurentV) -> Value {
    Value::Array(l.terms().map(|(e, c)| json!([e, int_json(c)])).collect())
}

/// JSON form: a list of `{coeff: {num, den}, word: [{comp, name, idx}]}`.
pub fn to_json(p: &NCPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(w, c)| {
                json!({
                    "coeff": {"num": laurent_json(c.num()), "den": laurent_json(c.den())},
                    "word": w.letters().iter().map(|g| json!({
                        "comp": g.comp,
                        "name": g.name.to_string(),
                        "idx": g.idx,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn bad(msg: &str) -> NcError {
    NcError::Parse { pos: 0, msg: msg.into() }
}

fn int_from_json(v: &Value) -> Result<BigInt, NcError> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("non-integer coefficient")),
        Value::String(s) => s.parse().map_err(|_| bad("malformed integer string")),
        _ => Err(bad("coefficient must be a number or string")),
    }
}

fn laurent_from_json(v: &Value) -> Result<LaurentV, NcError> {
    let arr = v.as_array().ok_or_else(|| bad("expected list of [vexp, int]"))?;
    let mut out = Vec::new();
    for t in arr {
        let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("expected [vexp, int]"))?;
        let e = pair[0].as_i64().ok_or_else(|| bad("exponent must be an integer"))?;
        out.push((e, int_from_json(&pair[1])?));
    }
    Ok(LaurentV::from_terms(out))
}

pub fn from_json(v: &Value) -> Result<NCPoly, NcError> {
    let arr = v.as_array().ok_or_else(|| bad("expected a list of terms"))?;
    let mut p = NCPoly::zero();
    for t in arr {
        let coeff = &t["coeff"];
        let c = RationalFn::new(laurent_from_json(&coeff["num"])?, laurent_from_json(&coeff["den"])?)?;
        let letters = t["word"]
            .as_array()
            .ok_or_else(|| bad("expected word list"))?
            .iter()
            .map(|g| {
                let comp = g["comp"].as_u64().and_then(|c| u8::try_from(c).ok()).ok_or_else(|| bad("bad comp"))?;
                let name = g["name"].as_str().and_then(|s| s.chars().next()).ok_or_else(|| bad("bad name"))?;
                let idx = g["idx"]
                    .as_array()
                    .ok_or_else(|| bad("bad idx"))?
                    .iter()
                    .map(|i| i.as_u64().and_then(|i| u8::try_from(i).ok()).ok_or_else(|| bad("bad index")))
                    .collect::<Result<Vec<u8>, _>>()?;
                Ok(GenId::new(comp, name, idx))
            })
            .collect::<Result<Vec<_>, NcError>>()?;
        p += &NCPoly::monomial(c, letters);
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> NcError {
        NcError::Parse { pos: self.pos, msg: msg.into() }
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

    fn expect(&mut self, c: u8) -> Result<(), NcError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt, NcError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn small_int(&mut self) -> Result<i64, NcError> {
        let neg = self.eat(b'-');
        let x = self.int()?.to_i64().ok_or_else(|| self.err("integer too large"))?;
        Ok(if neg { -x } else { x })
    }

    fn poly(&mut self) -> Result<NCPoly, NcError> {
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NCPoly, NcError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') || self.eat(b'.') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let d = self.factor()?;
                let d = d.as_scalar().ok_or_else(|| self.err("can only divide by a scalar"))?;
                let inv = d.inv().map_err(|_| self.err("division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    /// Exponent in units of `v`, i.e. twice the power of `q`.
    fn exponent_v(&mut self) -> Result<i64, NcError> {
        let close = if self.eat(b'(') {
            b')'
        } else if self.eat(b'{') {
            b'}'
        } else {
            return Ok(2 * self.small_int()?);
        };
        let x = self.small_int()?;
        let v = if self.eat(b'/') {
            let d = self.small_int()?;
            if d != 2 {
                return Err(self.err("only halves are supported in exponents"));
            }
            x
        } else {
            2 * x
        };
        self.expect(close)?;
        Ok(v)
    }

    fn factor(&mut self) -> Result<NCPoly, NcError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        if c == b'(' {
            self.pos += 1;
            let inner = self.poly()?;
            self.expect(b')')?;
            return self.power(inner);
        }
        if c.is_ascii_digit() {
            let x = self.int()?;
            return self.power(NCPoly::constant(RationalFn::integer(x)));
        }
        if c.is_ascii_alphabetic() {
            self.pos += 1;
            if self.peek() == Some(b'[') {
                let name = c as char;
                self.pos += 1;
                let mut idx = vec![self.index()?];
                while self.eat(b',') {
                    idx.push(self.index()?);
                }
                self.expect(b']')?;
                let comp = if self.eat(b'@') {
                    self.int()?.to_u8().ok_or_else(|| self.err("component out of range"))?
                } else {
                    0
                };
                return self.power(NCPoly::gen(GenId::new(comp, name, idx)));
            }
            if c == b'q' {
                if self.eat(b'^') {
                    let e = self.exponent_v()?;
                    return Ok(NCPoly::constant(RationalFn::v_pow(e)));
                }
                return Ok(NCPoly::constant(RationalFn::q()));
            }
            return Err(self.err(format!("unknown symbol '{}'", c as char)));
        }
        Err(self.err(format!("unexpected '{}'", c as char)))
    }

    fn index(&mut self) -> Result<u8, NcError> {
        self.int()?.to_u8().ok_or_else(|| self.err("index out of range"))
    }

    fn power(&mut self, base: NCPoly) -> Result<NCPoly, NcError> {
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = self.exponent_v()?;
        if e % 2 != 0 {
            return Err(self.err("half powers apply only to q"));
        }
        let e = e / 2;
        let base = if e < 0 {
            let s = base.as_scalar().ok_or_else(|| self.err("negative power of a non-scalar"))?;
            NCPoly::constant(s.inv().map_err(|_| self.err("division by zero"))?)
        } else {
            base
        };
        let mut acc = NCPoly::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

/// Parse the text grammar documented at module level.
pub fn parse(src: &str) -> Result<NCPoly, NcError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let out = p.poly()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

//! Text form of rational functions and the JSON representation descriptor.
//!
//! A rational function prints as `num` or `num/den`:
//! `num` is `*`-joined scalar, `q^e`, `X^k` and numerator factors, `den` is a
//! single factor or a parenthesized `*`-joined list. A factor is
//! `(1 - c*q^e*X^d)^n`, where a leading sign of `c` becomes `(1 + ...)`.
//! Factors keep the library's sorted order, so the text is canonical.

use std::fmt::Write as _;

use mwb_core::archgamma::{ComplexCharacter, ComplexKind, ComplexRep};
use mwb_core::arith::ResidueField;
use mwb_core::lfactor::{Coefficient, ExactScalar, Factor, RationalFunction, RepKind, SatakeRep, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid descriptor: {0}")]
    Schema(String),
}

fn schema(msg: impl Into<String>) -> CodecError {
    CodecError::Schema(msg.into())
}

fn fmt_exp(e: Q) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

fn fmt_pow(base: &str, e: Q) -> String {
    if e.is_one() {
        base.to_string()
    } else {
        format!("{}^{}", base, fmt_exp(e))
    }
}

/// Coefficients that have a text form.
pub trait TextCoef: Coefficient {
    fn write(&self) -> String;
    /// `Some(-self)` when `self` prints with a leading minus sign.
    fn negated_if_negative(&self) -> Option<Self>;
    fn is_exactly_one(&self) -> bool;
    fn parse_atom(cur: &mut Cursor) -> Result<Option<Self>, CodecError>;
}

impl TextCoef for ExactScalar {
    fn write(&self) -> String {
        self.to_string()
    }

    fn negated_if_negative(&self) -> Option<Self> {
        (self.phase() == Q::new(1, 2)).then(|| self.mul(&ExactScalar::root_of_unity(Q::new(1, 2))))
    }

    fn is_exactly_one(&self) -> bool {
        self.is_one()
    }

    fn parse_atom(cur: &mut Cursor) -> Result<Option<Self>, CodecError> {
        exact_atom(cur)
    }
}

impl TextCoef for Complex64 {
    fn write(&self) -> String {
        format!("[{},{}]", fmt_f64(self.re), fmt_f64(self.im))
    }

    fn negated_if_negative(&self) -> Option<Self> {
        None
    }

    fn is_exactly_one(&self) -> bool {
        self.re == 1.0 && self.im == 0.0
    }

    fn parse_atom(cur: &mut Cursor) -> Result<Option<Self>, CodecError> {
        if cur.eat("[") {
            let re = cur.float()?;
            cur.expect(",")?;
            let im = cur.float()?;
            cur.expect("]")?;
            return Ok(Some(Complex64::new(re, im)));
        }
        Ok(exact_atom(cur)?.map(|x| x.to_complex()))
    }
}

/// Shortest round-trip decimal, with `-0` kept.
fn fmt_f64(x: f64) -> String {
    if x == 0.0 && x.is_sign_negative() {
        "-0".into()
    } else {
        x.to_string()
    }
}

fn write_factor<C: TextCoef>(f: &Factor<C>, n: i32) -> String {
    let (sign, coef) = match f.a.negated_if_negative() {
        Some(neg) => ('+', neg),
        None => ('-', f.a.clone()),
    };
    let mut body = Vec::new();
    if !coef.is_exactly_one() {
        body.push(coef.write());
    }
    if !f.qexp.is_zero() {
        body.push(fmt_pow("q", f.qexp));
    }
    body.push(fmt_pow("X", Q::from(f.degree as i64)));
    let mut out = format!("(1 {} {})", sign, body.join("*"));
    if n != 1 {
        write!(out, "^{}", n).unwrap();
    }
    out
}

pub fn format_rf<C: TextCoef>(f: &RationalFunction<C>) -> String {
    let mut num = Vec::new();
    let mut den = Vec::new();
    if !f.scalar().is_exactly_one() {
        num.push(f.scalar().write());
    }
    if !f.scalar_qexp().is_zero() {
        num.push(fmt_pow("q", f.scalar_qexp()));
    }
    if f.xpow() != 0 {
        num.push(fmt_pow("X", Q::from(f.xpow())));
    }
    for x in f.factors() {
        if x.mult > 0 {
            num.push(write_factor(x, x.mult));
        } else {
            den.push(write_factor(x, -x.mult));
        }
    }
    let num = match num.first().map(String::as_str) {
        None => "1".to_string(),
        Some("-1") if num.len() > 1 => format!("-{}", num[1..].join("*")),
        _ => num.join("*"),
    };
    match den.len() {
        0 => num,
        1 => format!("{}/{}", num, den[0]),
        _ => format!("{}/({})", num, den.join("*")),
    }
}

/// Byte cursor for the hand-written parsers.
pub struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn err(&self, msg: impl Into<String>) -> CodecError {
        CodecError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), CodecError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", s)))
        }
    }

    fn done(&self) -> bool {
        self.pos == self.text.len()
    }

    fn uint(&mut self) -> Result<u64, CodecError> {
        let n = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return Err(self.err("expected digits"));
        }
        let v = self.rest()[..n].parse().map_err(|_| self.err("integer overflow"))?;
        self.pos += n;
        Ok(v)
    }

    fn int(&mut self) -> Result<i64, CodecError> {
        let neg = self.eat("-");
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    /// `n`, `-n` or `(a/b)`
    fn exponent(&mut self) -> Result<Q, CodecError> {
        if self.eat("(") {
            let a = self.int()?;
            self.expect("/")?;
            let b = self.int()?;
            self.expect(")")?;
            if b == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(Q::new(a, b))
        } else {
            Ok(Q::from(self.int()?))
        }
    }

    fn float(&mut self) -> Result<f64, CodecError> {
        let n = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_digit() || b"+-.eE".contains(b) || b.is_ascii_alphabetic())
            .count();
        let v = self.rest()[..n].parse().map_err(|_| self.err("expected a number"))?;
        self.pos += n;
        Ok(v)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `e(a/b)`, or an integer with an optional exponent.
fn exact_atom(cur: &mut Cursor) -> Result<Option<ExactScalar>, CodecError> {
    if cur.eat("e(") {
        let a = cur.int()?;
        cur.expect("/")?;
        let b = cur.int()?;
        cur.expect(")")?;
        if b == 0 {
            return Err(cur.err("zero denominator"));
        }
        return Ok(Some(ExactScalar::root_of_unity(Q::new(a, b))));
    }
    if !cur.rest().starts_with(|c: char| c.is_ascii_digit()) {
        return Ok(None);
    }
    let base = cur.uint()?;
    let e = if cur.eat("^") { cur.exponent()? } else { Q::one() };
    if base == 0 {
        return Err(cur.err("zero is not allowed"));
    }
    if e.is_integer() {
        let b = ExactScalar::from_ratio(base as i64, 1).map_err(|e| cur.err(e.to_string()))?;
        Ok(Some(b.pow(e)))
    } else if is_prime(base) {
        Ok(Some(ExactScalar::prime_power(base, e)))
    } else {
        Err(cur.err(format!("fractional power of non-prime {}", base)))
    }
}

/// Parses eigenvalue text: `a/b`, or the printed form (`-2^2*3*e(1/3)`).
pub fn parse_exact_scalar(text: &str) -> Result<ExactScalar, CodecError> {
    let mut cur = Cursor::new(text.trim());
    let neg = cur.eat("-");
    let mut acc = ExactScalar::one();
    loop {
        let start = cur.pos;
        let atom = exact_atom(&mut cur)?.ok_or_else(|| cur.err("expected a scalar"))?;
        acc = acc.mul(&atom);
        if cur.eat("/") {
            // integer ratio, only directly after a bare integer
            if text.trim()[start..cur.pos - 1].contains(['^', '(']) {
                return Err(cur.err("'/' only follows an integer"));
            }
            let d = cur.uint()?;
            let d = ExactScalar::from_ratio(d as i64, 1).map_err(|e| cur.err(e.to_string()))?;
            acc = acc.mul(&d.inv());
        }
        if !cur.eat("*") {
            break;
        }
    }
    if !cur.done() {
        return Err(cur.err("trailing input"));
    }
    if neg {
        acc = acc.mul(&ExactScalar::root_of_unity(Q::new(1, 2)));
    }
    Ok(acc)
}

enum Item<C> {
    Scalar(C),
    QPow(Q),
    XPow(i64),
    Factor(Factor<C>),
}

fn item<C: TextCoef>(cur: &mut Cursor) -> Result<Item<C>, CodecError> {
    if cur.eat("q") {
        let e = if cur.eat("^") { cur.exponent()? } else { Q::one() };
        return Ok(Item::QPow(e));
    }
    if cur.eat("X") {
        let e = if cur.eat("^") { cur.exponent()? } else { Q::one() };
        if !e.is_integer() {
            return Err(cur.err("X exponent must be an integer"));
        }
        return Ok(Item::XPow(*e.numer()));
    }
    if cur.eat("(1 ") {
        let neg = if cur.eat("- ") {
            false
        } else if cur.eat("+ ") {
            true
        } else {
            return Err(cur.err("expected '- ' or '+ '"));
        };
        let (mut a, mut qexp, mut deg) = (C::one(), Q::zero(), 0i64);
        for it in product::<C>(cur)? {
            match it {
                Item::Scalar(c) => a = a.mul(&c),
                Item::QPow(e) => qexp += e,
                Item::XPow(d) => deg += d,
                Item::Factor(_) => return Err(cur.err("nested factor")),
            }
        }
        cur.expect(")")?;
        if deg <= 0 {
            return Err(cur.err("factor needs a positive power of X"));
        }
        if neg {
            a = a.mul(&C::minus_one());
        }
        let mult = if cur.eat("^") { cur.int()? } else { 1 };
        return Ok(Item::Factor(Factor {
            a,
            qexp,
            degree: deg as u32,
            mult: mult as i32,
        }));
    }
    let neg = cur.eat("-");
    let c = C::parse_atom(cur)?.ok_or_else(|| cur.err("expected a term"))?;
    Ok(Item::Scalar(if neg { c.mul(&C::minus_one()) } else { c }))
}

fn product<C: TextCoef>(cur: &mut Cursor) -> Result<Vec<Item<C>>, CodecError> {
    let mut out = Vec::new();
    // a bare sign, as in "-q*X"
    if ["-q", "-X", "-("].iter().any(|p| cur.rest().starts_with(p)) {
        cur.eat("-");
        out.push(Item::Scalar(C::minus_one()));
    }
    out.push(item(cur)?);
    while cur.eat("*") {
        out.push(item(cur)?);
    }
    Ok(out)
}

fn fold<C: TextCoef>(q: u64, items: Vec<Item<C>>, sign: i32) -> RationalFunction<C> {
    let (mut scalar, mut qexp, mut xpow, mut factors) = (C::one(), Q::zero(), 0i64, Vec::new());
    for it in items {
        match it {
            Item::Scalar(c) => scalar = scalar.mul(&c),
            Item::QPow(e) => qexp += e,
            Item::XPow(k) => xpow += k,
            Item::Factor(mut f) => {
                f.mult *= sign;
                factors.push(f);
            }
        }
    }
    if sign < 0 {
        scalar = scalar.inv();
        qexp = -qexp;
        xpow = -xpow;
    }
    RationalFunction::from_parts_q(q, scalar, qexp, xpow, factors)
}

/// Inverse of [`format_rf`].
pub fn parse_rf<C: TextCoef>(q: u64, text: &str) -> Result<RationalFunction<C>, CodecError> {
    let mut cur = Cursor::new(text.trim());
    let num = fold(q, product::<C>(&mut cur)?, 1);
    let out = if cur.eat("/") {
        let den = if cur.rest().starts_with("((") {
            cur.expect("(")?;
            let items = product::<C>(&mut cur)?;
            cur.expect(")")?;
            items
        } else {
            vec![item::<C>(&mut cur)?]
        };
        num.mul(&fold(q, den, -1))
    } else {
        num
    };
    if !cur.done() {
        return Err(cur.err("trailing input"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Sp,
    Gl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Padic,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenText {
    Exact(String),
    Complex([f64; 2]),
}

/// Wire form of a representation descriptor. Eigenvalues are all strings
/// (exact mode) or all `[re, im]` pairs; an empty list reads as exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDescriptor {
    pub kind: KindTag,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub field: FieldTag,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eigenvalues: Vec<EigenText>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub tempered: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub characters: Vec<(i64, f64, f64)>,
}

/// A validated descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Rep {
    Exact(SatakeRep<ExactScalar>),
    Numeric(SatakeRep<Complex64>),
    Complex(ComplexRep),
}

impl Rep {
    pub fn label(&self) -> &'static str {
        match self {
            Rep::Exact(_) => "exact",
            Rep::Numeric(_) => "numeric",
            Rep::Complex(_) => "complex",
        }
    }
}

pub fn decode(d: &RepDescriptor) -> Result<Rep, CodecError> {
    if d.m == 0 {
        return Err(schema("m must be positive"));
    }
    match d.field {
        FieldTag::Complex => {
            if d.q.is_some() || !d.eigenvalues.is_empty() {
                return Err(schema("complex descriptors carry characters, not q or eigenvalues"));
            }
            let kind = match d.kind {
                KindTag::Sp => ComplexKind::Sp,
                KindTag::Gl => ComplexKind::Gl,
            };
            let chars = d
                .characters
                .iter()
                .map(|&(l, re, im)| {
                    if re.is_finite() && im.is_finite() {
                        Ok(ComplexCharacter::new(l, Complex64::new(re, im)))
                    } else {
                        Err(schema("character exponent must be finite"))
                    }
                })
                .collect::<Result<_, _>>()?;
            Ok(Rep::Complex(ComplexRep::new(kind, d.m, chars)))
        }
        FieldTag::Padic => {
            if !d.characters.is_empty() {
                return Err(schema("p-adic descriptors carry eigenvalues, not characters"));
            }
            let q = d.q.ok_or_else(|| schema("p-adic descriptor needs q"))?;
            ResidueField::for_cover(q, d.m).map_err(|e| schema(e.to_string()))?;
            let kind = match d.kind {
                KindTag::Sp => RepKind::Sp,
                KindTag::Gl => RepKind::Gl,
            };
            let all_exact = d.eigenvalues.iter().all(|e| matches!(e, EigenText::Exact(_)));
            let all_complex = d.eigenvalues.iter().all(|e| matches!(e, EigenText::Complex(_)));
            if all_exact {
                let ev = d
                    .eigenvalues
                    .iter()
                    .map(|e| match e {
                        EigenText::Exact(s) => parse_exact_scalar(s).map_err(|e| schema(e.to_string())),
                        EigenText::Complex(_) => unreachable!(),
                    })
                    .collect::<Result<_, _>>()?;
                SatakeRep::new(kind, d.m, q, ev, d.tempered)
                    .map(Rep::Exact)
                    .map_err(|e| schema(e.to_string()))
            } else if all_complex {
                let ev = d
                    .eigenvalues
                    .iter()
                    .map(|e| match e {
                        EigenText::Complex([re, im]) if re.is_finite() && im.is_finite() => {
                            Ok(Complex64::new(*re, *im))
                        }
                        _ => Err(schema("eigenvalue must be finite")),
                    })
                    .collect::<Result<_, _>>()?;
                SatakeRep::new(kind, d.m, q, ev, d.tempered)
                    .map(Rep::Numeric)
                    .map_err(|e| schema(e.to_string()))
            } else {
                Err(schema("eigenvalues mix exact strings and [re, im] pairs"))
            }
        }
    }
}

fn kind_tag(sp: bool) -> KindTag {
    if sp {
        KindTag::Sp
    } else {
        KindTag::Gl
    }
}

pub fn encode(rep: &Rep) -> RepDescriptor {
    match rep {
        Rep::Exact(r) => RepDescriptor {
            kind: kind_tag(r.kind() == RepKind::Sp),
            m: r.m(),
            q: Some(r.q()),
            field: FieldTag::Padic,
            eigenvalues: r.eigenvalues().iter().map(|e| EigenText::Exact(e.to_string())).collect(),
            tempered: r.tempered(),
            characters: Vec::new(),
        },
        Rep::Numeric(r) => RepDescriptor {
            kind: kind_tag(r.kind() == RepKind::Sp),
            m: r.m(),
            q: Some(r.q()),
            field: FieldTag::Padic,
            eigenvalues: r.eigenvalues().iter().map(|e| EigenText::Complex([e.re, e.im])).collect(),
            tempered: r.tempered(),
            characters: Vec::new(),
        },
        Rep::Complex(r) => RepDescriptor {
            kind: kind_tag(r.kind == ComplexKind::Sp),
            m: r.m,
            q: None,
            field: FieldTag::Complex,
            eigenvalues: Vec::new(),
            tempered: false,
            characters: r.characters.iter().map(|c| (c.l, c.t.re, c.t.im)).collect(),
        },
    }
}

pub fn parse_descriptor(text: &str) -> Result<Rep, CodecError> {
    let d: RepDescriptor = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    decode(&d)
}

/// Canonical JSON: fixed key order, two-space indent, trailing newline.
pub fn write_descriptor(rep: &Rep) -> String {
    let mut s = serde_json::to_string_pretty(&encode(rep)).expect("descriptor serializes");
    s.push('\n');
    s
}

//! Text grammar for elements, object words and diagram words, with canonical printing.
//!
//! Elements are sums of terms `coeff*(l1|..|ln) x1^2 x2 s1 s2`. When parsing, the
//! coefficient, the `*`, the token group and the crossings are each optional;
//! `x` without an index means `x1`. Printing always emits the full canonical form.

use num_traits::{One, Signed, Zero};

use crate::category::{fmt_object, Gen, ObjectWord, Slot};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::perm;
use crate::poly::{Mono, PolyAlg, PolyElement, Variant};
use crate::rational::{fmt_q, parse_q, Q};
use crate::wreath::{WreathAlg, WreathElement};

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Unsigned rational `p` or `p/q`.
    fn rational(&mut self) -> Result<Q> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        parse_q(text).ok_or_else(|| syntax(start, format!("bad rational '{text}'")))
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| syntax(start, "expected an index"))
    }

    fn int(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| syntax(start, "expected an integer exponent"))
    }

    /// Raw text up to one of the stop bytes.
    fn until(&mut self, stops: &[u8]) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !stops.contains(&self.s[self.pos]) {
            self.pos += 1;
        }
        (start, std::str::from_utf8(&self.s[start..self.pos]).unwrap().trim().to_string())
    }
}

struct Term {
    coeff: Q,
    tokens: Option<Vec<usize>>,
    dots: Vec<(usize, i32)>,
    crossings: Vec<usize>,
}

fn label(alg: &FrobeniusAlgebra, text: &str) -> Result<usize> {
    alg.label_index(text).ok_or_else(|| Error::UnknownLabel(text.to_string()))
}

fn parse_terms(alg: &FrobeniusAlgebra, n: usize, variant: Variant, text: &str) -> Result<Vec<Term>> {
    let dotvar = match variant {
        Variant::Degenerate => b'x',
        Variant::Quantum => b'X',
    };
    let crossvar = match variant {
        Variant::Degenerate => b's',
        Variant::Quantum => b'T',
    };
    let mut lx = Lexer::new(text);
    let mut terms = Vec::new();
    if lx.at_end() {
        return Err(syntax(0, "empty element"));
    }
    let mut first = true;
    while !lx.at_end() {
        let mut sgn = Q::one();
        if lx.eat(b'+') {
        } else if lx.eat(b'-') {
            sgn = -sgn;
        } else if !first {
            return Err(syntax(lx.pos, "expected '+' or '-'"));
        }
        first = false;
        let mut coeff = sgn;
        let mut any = false;
        if matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
            coeff *= lx.rational()?;
            any = true;
            lx.eat(b'*');
        }
        let mut tokens = None;
        if lx.eat(b'(') {
            let mut ws = Vec::new();
            loop {
                let (_, t) = lx.until(b"|)");
                ws.push(label(alg, &t)?);
                if lx.eat(b')') {
                    break;
                }
                lx.expect(b'|')?;
            }
            if ws.len() != n {
                return Err(syntax(lx.pos, format!("token group has {} factors, expected {n}", ws.len())));
            }
            tokens = Some(ws);
            any = true;
        }
        let mut dots = Vec::new();
        let mut crossings = Vec::new();
        loop {
            match lx.peek() {
                Some(c) if c == dotvar => {
                    lx.pos += 1;
                    let i = if matches!(lx.s.get(lx.pos), Some(d) if d.is_ascii_digit()) {
                        lx.uint()?
                    } else {
                        1
                    };
                    if i == 0 || i > n {
                        return Err(syntax(lx.pos, format!("dot index {i} out of range")));
                    }
                    let e = if lx.eat(b'^') { lx.int()? } else { 1 };
                    if !crossings.is_empty() {
                        return Err(syntax(lx.pos, "dots must precede crossings"));
                    }
                    dots.push((i - 1, e));
                    any = true;
                }
                Some(c) if c == crossvar => {
                    lx.pos += 1;
                    let p = lx.pos;
                    let i = lx.uint()?;
                    if i == 0 || i >= n {
                        return Err(syntax(p, format!("crossing index {i} out of range")));
                    }
                    crossings.push(i - 1);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(syntax(lx.pos, "expected a term"));
        }
        terms.push(Term { coeff, tokens, dots, crossings });
    }
    Ok(terms)
}

fn term_poly(poly: &PolyAlg, t: &Term) -> Result<PolyElement> {
    let mut f = match &t.tokens {
        Some(w) => poly.basis_word(&w.iter().map(|&k| k as u8).collect::<Vec<_>>()),
        None => poly.one(),
    };
    for &(i, e) in &t.dots {
        if e < 0 && poly.variant == Variant::Degenerate {
            return Err(Error::WrongVariant("negative exponents need the quantum variant".into()));
        }
        f = poly.mul(&f, &poly.dot(i, e));
    }
    Ok(f.scale(&t.coeff))
}

pub fn parse_poly(poly: &PolyAlg, text: &str) -> Result<PolyElement> {
    if text.trim() == "0" {
        return Ok(poly.zero());
    }
    let mut out = poly.zero();
    for t in parse_terms(&poly.alg, poly.n, poly.variant, text)? {
        if !t.crossings.is_empty() {
            return Err(syntax(0, "crossings are not allowed in a polynomial"));
        }
        out += &term_poly(poly, &t)?;
    }
    Ok(out)
}

pub fn parse_wreath(wa: &WreathAlg, text: &str) -> Result<WreathElement> {
    if text.trim() == "0" {
        return Ok(wa.zero());
    }
    let mut out = wa.zero();
    for t in parse_terms(wa.alg(), wa.n(), wa.variant(), text)? {
        let mut u = wa.from_poly(&term_poly(&wa.poly, &t)?);
        for &i in &t.crossings {
            u = wa.mul_crossing_right(&u, i);
        }
        out += &u;
    }
    Ok(out)
}

fn fmt_mono(alg: &FrobeniusAlgebra, variant: Variant, m: &Mono) -> String {
    let labels: Vec<&str> = m.word.iter().map(|&b| alg.labels[b as usize].as_str()).collect();
    let mut s = format!("({})", labels.join("|"));
    let v = if variant == Variant::Quantum { 'X' } else { 'x' };
    for (i, &e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!(" {v}{}", i + 1)),
            _ => s.push_str(&format!(" {v}{}^{e}", i + 1)),
        }
    }
    s
}

fn join_terms(terms: Vec<(Q, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, body)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = fmt_q(&c.abs());
        match (k, neg) {
            (0, false) => out.push_str(&format!("{a}*{body}")),
            (0, true) => out.push_str(&format!("-{a}*{body}")),
            (_, false) => out.push_str(&format!(" + {a}*{body}")),
            (_, true) => out.push_str(&format!(" - {a}*{body}")),
        }
    }
    out
}

pub fn fmt_poly(poly: &PolyAlg, f: &PolyElement) -> String {
    join_terms(f.terms.iter().map(|(m, c)| (c.clone(), fmt_mono(&poly.alg, f.variant, m))).collect())
}

pub fn fmt_wreath(wa: &WreathAlg, u: &WreathElement) -> String {
    let cv = if wa.variant() == Variant::Quantum { 'T' } else { 's' };
    join_terms(
        u.terms
            .iter()
            .map(|((m, w), c)| {
                let mut body = fmt_mono(wa.alg(), u.variant, m);
                for i in perm::reduced_word(w) {
                    body.push_str(&format!(" {cv}{}", i + 1));
                }
                (c.clone(), body)
            })
            .collect(),
    )
}

/// `[. Q1 . Q2]`, with `.` a black strand.
pub fn parse_object(text: &str) -> Result<ObjectWord> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(0, "object words are written in brackets"))?;
    inner
        .split_whitespace()
        .map(|tok| {
            if tok == "." {
                return Ok(Slot::Black);
            }
            tok.strip_prefix('Q')
                .and_then(|r| r.parse::<usize>().ok())
                .filter(|&r| r >= 1)
                .map(|r| Slot::Red(r - 1))
                .ok_or_else(|| syntax(0, format!("bad slot '{tok}'")))
        })
        .collect()
}

pub fn fmt_object_word(w: &[Slot]) -> String {
    fmt_object(w)
}

/// Parses a `;`-separated bottom-to-top diagram word with 1-based slots.
pub fn parse_diagram(alg: &FrobeniusAlgebra, text: &str) -> Result<Vec<Gen>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let pos = offset;
        offset += part.len() + 1;
        let g = part.trim();
        if g.is_empty() {
            continue;
        }
        let (head, slot) = g.rsplit_once('@').ok_or_else(|| syntax(pos, format!("missing '@' in '{g}'")))?;
        let slot: usize = slot
            .trim()
            .parse()
            .ok()
            .filter(|&s: &usize| s >= 1)
            .ok_or_else(|| syntax(pos, format!("bad slot in '{g}'")))?;
        let p = slot - 1;
        let head = head.trim();
        out.push(match head {
            "xRB" => Gen::XRB(p),
            "xBR" => Gen::XBR(p),
            "s" | "s+" => Gen::Cross(p),
            "s-" => Gen::NegCross(p),
            "dot" => Gen::Dot(p),
            "idot" => Gen::InvDot(p),
            _ => {
                let l = head
                    .strip_prefix("tok(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| syntax(pos, format!("unknown generator '{head}'")))?;
                let b = alg.label_index(l.trim()).ok_or_else(|| Error::UnknownLabel(l.trim().to_string()))?;
                Gen::Token(p, alg.basis(b))
            }
        });
    }
    Ok(out)
}

pub fn fmt_diagram(alg: &FrobeniusAlgebra, variant: Variant, word: &[Gen]) -> String {
    let parts: Vec<String> = word
        .iter()
        .map(|g| {
            let p = g.slot() + 1;
            match g {
                Gen::XRB(_) => format!("xRB@{p}"),
                Gen::XBR(_) => format!("xBR@{p}"),
                Gen::Cross(_) if variant == Variant::Quantum => format!("s+@{p}"),
                Gen::Cross(_) => format!("s@{p}"),
                Gen::NegCross(_) => format!("s-@{p}"),
                Gen::Dot(_) => format!("dot@{p}"),
                Gen::InvDot(_) => format!("idot@{p}"),
                Gen::Token(_, a) => {
                    let lab = a
                        .iter()
                        .position(|c| !c.is_zero())
                        .filter(|&i| a.iter().filter(|c| !c.is_zero()).count() == 1 && a[i].is_one())
                        .map(|i| alg.labels[i].clone())
                        .unwrap_or_else(|| alg.fmt_elem(a));
                    format!("tok({lab})@{p}")
                }
            }
        })
        .collect();
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::rational::q;
    use std::sync::Arc;

    #[test]
    fn dot_over_ground() {
        let poly = PolyAlg::new(Arc::new(builtin::ground()), 1, Variant::Degenerate);
        assert_eq!(parse_poly(&poly, "1*(1) x1").unwrap(), poly.dot(0, 1));
        assert_eq!(parse_poly(&poly, "x^2 + 1").unwrap(), poly.dot(0, 2).add(&poly.one()));
        assert!(matches!(parse_poly(&poly, "1*(q)"), Err(Error::UnknownLabel(_))));
        assert!(matches!(parse_poly(&poly, "1*(1) y"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn clifford_crossing_term() {
        let wa = WreathAlg::degenerate(Arc::new(builtin::clifford_even()), 2);
        let u = parse_wreath(&wa, "1*(c|1) s1").unwrap();
        let c = wa.alg().basis(1);
        assert_eq!(u, wa.poly_times_perm(&wa.poly.token(0, &c), &[1, 0]));
        assert_eq!(fmt_wreath(&wa, &u), "1*(c|1) s1");
    }

    #[test]
    fn canonical_roundtrip() {
        let poly = PolyAlg::new(Arc::new(builtin::clifford_odd()), 2, Variant::Degenerate);
        let f = parse_poly(&poly, "3/2*(1|c) x1^2 x2 - x2 x1 + 7").unwrap();
        let s = fmt_poly(&poly, &f);
        assert_eq!(parse_poly(&poly, &s).unwrap(), f);
        assert_eq!(fmt_poly(&poly, &parse_poly(&poly, &s).unwrap()), s);
        let wa = WreathAlg::quantum(Arc::new(builtin::ground()), 2, q(2)).unwrap();
        let u = parse_wreath(&wa, "X1^-1 T1 T1 - 1/3*(1|1) X2").unwrap();
        let s = fmt_wreath(&wa, &u);
        assert_eq!(parse_wreath(&wa, &s).unwrap(), u);
    }

    #[test]
    fn objects_and_diagrams() {
        let o = parse_object("[. Q1 . . Q2]").unwrap();
        assert_eq!(fmt_object_word(&o), "[. Q1 . . Q2]");
        let alg = builtin::clifford_even();
        let w = parse_diagram(&alg, "xRB@2; s@1; tok(c)@2; dot@3").unwrap();
        assert_eq!(fmt_diagram(&alg, Variant::Degenerate, &w), "xRB@2; s@1; tok(c)@2; dot@3");
    }
}

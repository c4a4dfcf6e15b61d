//! Sparse multivariate polynomials over F_p.
//!
//! A [`Poly`] is a list of `(Monomial, coefficient)` pairs kept sorted in
//! strictly descending order under the owning [`PolyRing`]'s monomial order,
//! with no zero coefficients. All arithmetic goes through the ring, which
//! carries the field, variable names and order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    /// Weighted degrees of all terms (deduplicated, ascending).
    pub fn term_degrees(&self, weights: &[i64]) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.iter().map(|(m, _)| weighted_degree(m, weights)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        self.term_degrees(weights).len() <= 1
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms.first().map(|(m, _)| weighted_degree(m, weights))
    }

    /// Highest exponent of variable `v` appearing in any term.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, u32)>) -> Self {
        Poly { terms }
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }
}

pub fn weighted_degree(m: &Monomial, weights: &[i64]) -> i64 {
    m.exps().iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
}

/// Polynomial ring F_p[vars] with a fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: Fp,
    names: Vec<String>,
    order: MonomialOrder,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new(field: Fp, names: Vec<String>, order: MonomialOrder) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::Parse(format!("invalid variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate variable name {n:?}")));
            }
        }
        let covered: usize = order.block_list().iter().map(|b| b.len()).sum();
        if covered != names.len() || order.block_list().iter().flatten().any(|&v| v >= names.len()) {
            return Err(Error::Precondition(format!(
                "monomial order {} does not match {} variables",
                order.tag(),
                names.len()
            )));
        }
        Ok(PolyRing { field, names, order })
    }

    pub fn grevlex(field: Fp, names: &[&str]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let n = names.len();
        PolyRing::new(field, names, MonomialOrder::grevlex(n))
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same variables, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<PolyRing> {
        PolyRing::new(self.field, self.names.clone(), order)
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> Poly {
        let c = c % self.p();
        if c == 0 {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(self.nvars()), c)] }
        }
    }

    pub fn constant_i64(&self, c: i64) -> Poly {
        self.constant(self.field.reduce_i64(c))
    }

    pub fn var(&self, i: usize) -> Poly {
        self.term(Monomial::var(self.nvars(), i, 1), 1)
    }

    pub fn term(&self, m: Monomial, c: u32) -> Poly {
        debug_assert_eq!(m.nvars(), self.nvars());
        let c = c % self.p();
        if c == 0 {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary terms: combines duplicates, drops zeros, sorts.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, u32)>>(&self, terms: I) -> Poly {
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), self.nvars());
            let e = acc.entry(m).or_insert(0);
            *e = self.field.add(*e, c % self.p());
        }
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms }
    }

    pub fn add(&self, f: &Poly, g: &Poly) -> Poly {
        self.combine(f, g, 1)
    }

    pub fn sub(&self, f: &Poly, g: &Poly) -> Poly {
        self.combine(f, g, self.p() - 1)
    }

    /// `f + c * g`
    pub fn combine(&self, f: &Poly, g: &Poly, c: u32) -> Poly {
        self.add_scaled_shifted(f, g, c, None)
    }

    /// `f + c * m * g`, merging in order (monomial orders are multiplicative).
    pub fn add_scaled_shifted(&self, f: &Poly, g: &Poly, c: u32, m: Option<&Monomial>) -> Poly {
        let fld = self.field;
        let c = c % self.p();
        if c == 0 || g.is_zero() {
            return f.clone();
        }
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &(Monomial, u32)| -> (Monomial, u32) {
            let mono = match m {
                Some(m) => t.0.mul(m),
                None => t.0.clone(),
            };
            (mono, fld.mul(t.1, c))
        };
        let mut gj = g.terms.first().map(shifted);
        while i < f.terms.len() || gj.is_some() {
            match (f.terms.get(i), gj.as_ref()) {
                (Some(a), Some(b)) => match self.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(gj.take().unwrap());
                        j += 1;
                        gj = g.terms.get(j).map(shifted);
                    }
                    Ordering::Equal => {
                        let s = fld.add(a.1, b.1);
                        if s != 0 {
                            out.push((a.0.clone(), s));
                        }
                        i += 1;
                        j += 1;
                        gj = g.terms.get(j).map(shifted);
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(gj.take().unwrap());
                    j += 1;
                    gj = g.terms.get(j).map(shifted);
                }
                (None, None) => unreachable!(),
            }
        }
        Poly { terms: out }
    }

    pub fn neg(&self, f: &Poly) -> Poly {
        self.scale(f, self.p() - 1)
    }

    pub fn scale(&self, f: &Poly, c: u32) -> Poly {
        let c = c % self.p();
        if c == 0 {
            return Poly::zero();
        }
        Poly { terms: f.terms.iter().map(|(m, a)| (m.clone(), self.field.mul(*a, c))).collect() }
    }

    pub fn mul_monomial(&self, f: &Poly, m: &Monomial) -> Poly {
        Poly { terms: f.terms.iter().map(|(t, a)| (t.mul(m), *a)).collect() }
    }

    pub fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let (small, big) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        let mut rows: Vec<Poly> = small
            .terms
            .iter()
            .map(|(m, c)| {
                let mut row = self.mul_monomial(big, m);
                if *c != 1 {
                    for t in row.terms.iter_mut() {
                        t.1 = self.field.mul(t.1, *c);
                    }
                }
                row
            })
            .collect();
        while rows.len() > 1 {
            let mut next = Vec::with_capacity(rows.len().div_ceil(2));
            let mut it = rows.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(self.add(&a, &b)),
                    None => next.push(a),
                }
            }
            rows = next;
        }
        rows.pop().unwrap()
    }

    pub fn pow(&self, f: &Poly, mut e: u64) -> Poly {
        let mut base = f.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The p-th power map, computed termwise: coefficients are fixed by
    /// Frobenius on F_p and monomial exponents scale by p.
    pub fn frobenius(&self, f: &Poly) -> Poly {
        let p = self.p();
        Poly { terms: f.terms.iter().map(|(m, c)| (m.pow(p), *c)).collect() }
    }

    pub fn frobenius_iter(&self, f: &Poly, times: u32) -> Poly {
        let mut out = f.clone();
        for _ in 0..times {
            out = self.frobenius(&out);
        }
        out
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self, f: &Poly) -> Poly {
        match f.lead() {
            None => Poly::zero(),
            Some((_, c)) if *c == 1 => f.clone(),
            Some((_, c)) => self.scale(f, self.field.inv(*c)),
        }
    }

    /// Re-express `f` from `src` in this ring; `map[i]` is the index in
    /// `self` of variable `i` of `src`.
    pub fn map_from(&self, src: &PolyRing, f: &Poly, map: &[usize]) -> Poly {
        debug_assert_eq!(map.len(), src.nvars());
        let n = self.nvars();
        let terms = f.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one(n);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    out.exps_mut()[map[i]] += e;
                }
            }
            (out, *c)
        });
        if src.field != self.field {
            // characteristic mixing is rejected at construction; this is a bug
            panic!("map_from across different fields");
        }
        self.from_terms(terms)
    }

    /// Map by variable names (every variable of `src` must exist here).
    pub fn embed_by_name(&self, src: &PolyRing, f: &Poly) -> Result<Poly> {
        let map = self.name_map(src)?;
        Ok(self.map_from(src, f, &map))
    }

    pub fn name_map(&self, src: &PolyRing) -> Result<Vec<usize>> {
        if src.field != self.field {
            return Err(Error::Precondition(format!(
                "mixed characteristic: {} vs {}",
                src.p(),
                self.p()
            )));
        }
        src.names
            .iter()
            .map(|n| {
                self.var_index(n)
                    .ok_or_else(|| Error::Precondition(format!("variable {n} not present in target ring")))
            })
            .collect()
    }

    /// Substitute polynomials (in this ring) for every variable.
    pub fn substitute(&self, f: &Poly, images: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &f.terms {
            let mut t = self.constant(*c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = self.mul(&t, &self.pow(&images[i], e as u64));
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// Canonical string: terms in descending order, coefficients in `[1, p)`,
    /// coefficient omitted when it is 1 and the monomial is not constant.
    pub fn format(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in f.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                write!(s, "{c}").unwrap();
            } else if *c == 1 {
                s.push_str(&mono);
            } else {
                write!(s, "{c}*{mono}").unwrap();
            }
        }
        s
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { ring: self, tokens, pos: 0 };
        let f = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("trailing input in polynomial {text:?}")));
        }
        Ok(f)
    }

    /// Parse and require the canonical spelling produced by [`PolyRing::format`].
    pub fn parse_canonical(&self, text: &str) -> Result<Poly> {
        let f = self.parse(text)?;
        if self.format(&f) != text {
            return Err(Error::Parse(format!("non-canonical polynomial string {text:?}")));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Num(chars[start..i].iter().collect()));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {text:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let r = self.ring;
        let mut acc = Poly::zero();
        let mut sign_neg = false;
        match self.peek() {
            Some(Tok::Plus) => self.pos += 1,
            Some(Tok::Minus) => {
                sign_neg = true;
                self.pos += 1
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign_neg { r.sub(&acc, &t) } else { r.add(&acc, &t) };
            match self.peek() {
                Some(Tok::Plus) => {
                    sign_neg = false;
                    self.pos += 1
                }
                Some(Tok::Minus) => {
                    sign_neg = true;
                    self.pos += 1
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u64 = n
                        .parse()
                        .ok()
                        .filter(|e| *e <= 1_000_000)
                        .ok_or_else(|| Error::Parse(format!("exponent {n} out of range")))?;
                    Ok(self.ring.pow(&base, e))
                }
                _ => Err(Error::Parse("expected integer exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => {
                let c = self.ring.field.reduce_decimal(&n).unwrap();
                Ok(self.ring.constant(c))
            }
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => Ok(self.ring.var(i)),
                None => Err(Error::Parse(format!("unknown identifier {name:?}"))),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Tok::Minus) => {
                let inner = self.factor()?;
                Ok(self.ring.neg(&inner))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

//! Text notation and JSON records.
//!
//! Finite elements are words such as `s1 s2 s1`, or `e`. Affine elements are
//! `t[c1,...,cn]` followed by a word, with `c_i` fundamental-coweight
//! coordinates. Words may also use `S0` (or `S0_k` for the `k`-th component)
//! and `o<j>` for the `j`-th length-zero element. Indices are 1-based in text.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alcove::AlcoveProfile;
use crate::cartan::{Root, RootSystem};
use crate::criterion::{SupportCheck, Verdict};
use crate::iwahori::{AffineElement, AffineSimple, IwahoriWeyl, KottwitzClass};
use crate::weyl::FiniteWeylElement;
use crate::{Error, Result, Q};

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" ")
}

pub fn format_finite(sys: &RootSystem, w: &FiniteWeylElement) -> String {
    format_word(&sys.reduced_word(w))
}

pub fn format_ints(v: &[i64]) -> String {
    format!("[{}]", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

pub fn format_affine(g: &IwahoriWeyl, x: &AffineElement) -> String {
    let word = format_finite(g.sys(), &x.finite);
    if x.translation.iter().all(|c| *c == 0) {
        word
    } else if x.finite.is_identity() {
        format!("t{}", format_ints(&x.translation))
    } else {
        format!("t{} {word}", format_ints(&x.translation))
    }
}

pub fn format_q(q: &Q) -> String {
    q.to_string()
}

pub fn format_qs(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

pub fn format_set(j: &BTreeSet<usize>) -> Vec<usize> {
    j.iter().map(|i| i + 1).collect()
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().enumerate().collect(),
            at: 0,
            src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.1)
    }

    fn pos(&self) -> usize {
        self.at
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.at += 1;
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += usize::from(c.is_some());
        c
    }

    fn digits(&mut self) -> Result<usize> {
        let start = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.at += 1;
        }
        s.parse()
            .map_err(|_| parse_err(start, format!("expected an index in {:?}", self.src)))
    }

    fn token_end(&self) -> bool {
        self.peek().is_none_or(char::is_whitespace)
    }
}

/// Integer vector: `1,0`, `[1,0]` or `1 0`.
pub fn parse_int_vector(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let t = t.strip_prefix('[').unwrap_or(t);
    let t = t.strip_suffix(']').unwrap_or(t);
    if t.trim().is_empty() {
        return Err(parse_err(0, "empty vector"));
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<i64>()
                .map_err(|_| parse_err(s.find(p).unwrap_or(0), format!("not an integer: {p:?}")))
        })
        .collect()
}

fn simple_index(c: &mut Cursor, rank: usize) -> Result<usize> {
    let pos = c.pos();
    let i = c.digits()?;
    if i == 0 || i > rank {
        return Err(parse_err(pos, format!("simple index {i} outside 1..={rank}")));
    }
    Ok(i - 1)
}

fn end_of_token(c: &Cursor) -> Result<()> {
    if c.token_end() {
        Ok(())
    } else {
        Err(parse_err(c.pos(), format!("unexpected {:?}", c.peek().unwrap_or(' '))))
    }
}

pub fn parse_finite(sys: &RootSystem, s: &str) -> Result<FiniteWeylElement> {
    let mut c = Cursor::new(s);
    let mut w = sys.identity();
    let mut any = false;
    loop {
        c.skip_ws();
        let pos = c.pos();
        match c.bump() {
            None => break,
            Some('e') => {}
            Some('s') => {
                let i = simple_index(&mut c, sys.rank())?;
                w = sys.compose(&w, &sys.reflection(i));
            }
            Some(ch) => return Err(parse_err(pos, format!("unexpected {ch:?}"))),
        }
        end_of_token(&c)?;
        any = true;
    }
    if !any {
        return Err(parse_err(0, "empty element"));
    }
    Ok(w)
}

pub fn parse_affine(g: &IwahoriWeyl, s: &str) -> Result<AffineElement> {
    let rank = g.rank();
    let mut c = Cursor::new(s);
    let mut x = g.identity();
    let mut any = false;
    loop {
        c.skip_ws();
        let pos = c.pos();
        let factor = match c.bump() {
            None => break,
            Some('e') => g.identity(),
            Some('s') => g.from_finite(&g.sys().reflection(simple_index(&mut c, rank)?)),
            Some('S') => {
                if c.bump() != Some('0') {
                    return Err(parse_err(pos, "expected S0"));
                }
                let comps = g.sys().components().len();
                let k = if c.peek() == Some('_') {
                    c.bump();
                    let kpos = c.pos();
                    let k = c.digits()?;
                    if k == 0 || k > comps {
                        return Err(parse_err(kpos, format!("component {k} outside 1..={comps}")));
                    }
                    k - 1
                } else if comps == 1 {
                    0
                } else {
                    return Err(parse_err(pos, "S0 is ambiguous; use S0_k"));
                };
                g.simple_reflection(AffineSimple::Zero(k)).clone()
            }
            Some('o') => {
                let jpos = c.pos();
                let j = c.digits()?;
                let omegas = g.omega_elements();
                omegas
                    .get(j)
                    .map(|o| (*o).clone())
                    .ok_or_else(|| parse_err(jpos, format!("o{j}: only {} length-zero elements", omegas.len())))?
            }
            Some('t') => {
                if c.bump() != Some('[') {
                    return Err(parse_err(pos + 1, "expected '[' after t"));
                }
                let start = c.pos();
                let mut body = String::new();
                loop {
                    match c.bump() {
                        None => return Err(parse_err(c.pos(), "unterminated translation, expected ']'")),
                        Some(']') => break,
                        Some(ch) if ch.is_ascii_digit() || ch == '-' || ch == ',' || ch.is_whitespace() => {
                            body.push(ch)
                        }
                        Some(ch) => return Err(parse_err(c.pos() - 1, format!("unexpected {ch:?} in translation"))),
                    }
                }
                let lambda = parse_int_vector(&body).map_err(|e| match e {
                    Error::Parse { pos, msg } => parse_err(start + pos, msg),
                    e => e,
                })?;
                if lambda.len() != rank {
                    return Err(parse_err(
                        start,
                        format!("translation has {} coordinates, expected {rank}", lambda.len()),
                    ));
                }
                g.translation(&lambda)
            }
            Some(ch) => return Err(parse_err(pos, format!("unexpected {ch:?}"))),
        };
        end_of_token(&c)?;
        x = g.mul(&x, &factor);
        any = true;
    }
    if !any {
        return Err(parse_err(0, "empty element"));
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub x: String,
    pub v: String,
    pub mu: Vec<i64>,
    pub w: String,
    pub eta: String,
    pub phi_x: Vec<Vec<i32>>,
    #[serde(rename = "W_x")]
    pub w_x: Vec<String>,
    pub shrunken: bool,
    pub strips: Vec<Vec<i32>>,
}

impl ProfileRecord {
    pub fn new(g: &IwahoriWeyl, p: &AlcoveProfile) -> Self {
        let sys = g.sys();
        let roots = |rs: &[Root]| rs.iter().map(|r| r.0.clone()).collect();
        ProfileRecord {
            x: format_affine(g, &p.x),
            v: format_finite(sys, &p.v_x),
            mu: p.mu_x.clone(),
            w: format_finite(sys, &p.w_x),
            eta: format_finite(sys, &p.eta),
            phi_x: roots(&p.phi_x),
            w_x: p.w_x_set.iter().map(|r| format_finite(sys, r)).collect(),
            shrunken: p.shrunken,
            strips: roots(&p.strips),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub r: String,
    pub j: Vec<usize>,
    pub full: bool,
}

impl CheckRecord {
    pub fn new(sys: &RootSystem, c: &SupportCheck) -> Self {
        CheckRecord {
            r: format_finite(sys, &c.r),
            j: format_set(&c.j),
            full: c.full,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub w: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub checked: Vec<CheckRecord>,
    pub failing: Option<CheckRecord>,
    pub alcove_pair: Option<PairRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub x: String,
    pub kappa_b: Vec<String>,
    pub nonempty: bool,
    pub rule: String,
    pub witnesses: WitnessRecord,
    pub profile: Option<ProfileRecord>,
}

impl VerdictRecord {
    pub fn new(
        g: &IwahoriWeyl,
        x: &AffineElement,
        kappa_b: &KottwitzClass,
        v: &Verdict,
        profile: Option<&AlcoveProfile>,
    ) -> Self {
        let sys = g.sys();
        VerdictRecord {
            x: format_affine(g, x),
            kappa_b: format_qs(&kappa_b.coinvariant),
            nonempty: v.nonempty,
            rule: v.rule.as_str().into(),
            witnesses: WitnessRecord {
                checked: v.checks.iter().map(|c| CheckRecord::new(sys, c)).collect(),
                failing: v.failing.as_ref().map(|c| CheckRecord::new(sys, c)),
                alcove_pair: v.alcove_pair.as_ref().map(|(j, w)| PairRecord {
                    j: format_set(j),
                    w: format_finite(sys, w),
                }),
            },
            profile: profile.map(|p| ProfileRecord::new(g, p)),
        }
    }
}

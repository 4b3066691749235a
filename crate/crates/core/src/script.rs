//! Instance scripts: newline-separated bindings of rings, ideals, homs and
//! data, plus one optional `options(...)` line.
//!
//! ```text
//! # duplication of Z/12 along (4)
//! options(max_ring_size=4096, seed=7)
//! ring A = Z(12)
//! ideal I = gen(A; 4)
//! ring R = dup(A, I)
//! ```
//!
//! Names must be bound before use and with the right kind; both are checked
//! while parsing. Elements are written in their ring's canonical encoding.

use std::collections::HashMap;
use std::fmt;

use crate::biamalg::{construct, duplication_datum, validate_datum, BiAmalgDatum};
use crate::error::Error;
use crate::hom::{make_hom, HomSpec, RingHom};
use crate::ideal::Ideal;
use crate::module::Module;
use crate::ring::{Caps, Elem, FiniteRing, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Ring,
    Ideal,
    Hom,
    Datum,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Ring => "ring",
            Kind::Ideal => "ideal",
            Kind::Hom => "hom",
            Kind::Datum => "datum",
        }
    }

    fn with_article(self) -> &'static str {
        match self {
            Kind::Ring => "a ring",
            Kind::Ideal => "an ideal",
            Kind::Hom => "a hom",
            Kind::Datum => "a datum",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    Name(String),
    Z(u64),
    Product(Box<RingExpr>, Box<RingExpr>),
    Quotient(Box<RingExpr>, Box<IdealExpr>),
    TrivExt(Box<RingExpr>, Vec<ModuleTerm>),
    BiAmalg(Box<DatumExpr>),
    Dup(Box<RingExpr>, Box<IdealExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealExpr {
    Name(String),
    Gen(RingExpr, Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleTerm {
    Ideal(IdealExpr),
    Quot(IdealExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomExpr {
    Name(String),
    Id(RingExpr),
    Proj(RingExpr, RingExpr),
    Incl(RingExpr, RingExpr),
    Graph(Box<HomExpr>),
    Map(RingExpr, RingExpr, Vec<(Value, Value)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatumExpr {
    Name(String),
    Tuple(HomExpr, HomExpr, IdealExpr, IdealExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ring(RingExpr),
    Ideal(IdealExpr),
    Hom(HomExpr),
    Datum(DatumExpr),
}

impl Expr {
    pub fn kind(&self) -> Kind {
        match self {
            Expr::Ring(_) => Kind::Ring,
            Expr::Ideal(_) => Kind::Ideal,
            Expr::Hom(_) => Kind::Hom,
            Expr::Datum(_) => Kind::Datum,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub max_ring_size: Option<usize>,
    pub max_ideal_enum: Option<usize>,
    pub seed: Option<u64>,
}

impl Options {
    /// `caps` with the script's settings applied.
    pub fn apply(&self, mut caps: Caps) -> Caps {
        if let Some(n) = self.max_ring_size {
            caps.max_ring_size = n;
        }
        if let Some(n) = self.max_ideal_enum {
            caps.max_ideal_enum = n;
        }
        caps
    }
}

#[derive(Clone, Debug, Default)]
pub struct Script {
    pub options: Option<Options>,
    pub bindings: Vec<Binding>,
    /// source line of each binding
    pub lines: Vec<usize>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.options == other.options && self.bindings == other.bindings
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Plus,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

fn lex_line(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| ParseError {
        line,
        column: col + 1,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            ',' => out.push((Tok::Comma, start)),
            ';' => out.push((Tok::Semi, start)),
            '=' => out.push((Tok::Eq, start)),
            '+' => out.push((Tok::Plus, start)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, start));
                i += 1;
            }
            c if c == '-' || c.is_ascii_digit() => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| err(start, format!("bad integer `{s}`")))?;
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            c => return Err(err(start, format!("unexpected character `{c}`"))),
        }
        i += 1;
    }
    Ok(out.into_iter().map(|(t, c)| (t, c + 1)).collect())
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    kinds: &'a HashMap<String, Kind>,
}

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {want}, found {t}"))),
            None => Err(self.error(format!("expected {want}, found end of line"))),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(self.error(format!("expected a name, found {t}"))),
            None => Err(self.error("expected a name, found end of line")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            Some(t) => Err(self.error(format!("expected an integer, found {t}"))),
            None => Err(self.error("expected an integer, found end of line")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected {t} after the expression"))),
        }
    }

    /// A bare name of the given kind, if the next tokens are one.
    fn name_of(&mut self, kind: Kind) -> Result<Option<String>, ParseError> {
        let Some(Tok::Ident(s)) = self.peek().cloned() else {
            return Ok(None);
        };
        if self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::LParen) {
            return Ok(None);
        }
        match self.kinds.get(&s) {
            Some(&k) if k == kind => {
                self.pos += 1;
                Ok(Some(s))
            }
            Some(&k) => Err(self.error(format!(
                "`{s}` is {}, expected {}",
                k.with_article(),
                kind.with_article()
            ))),
            None => Err(self.error(format!("undefined name `{s}`"))),
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        if self.eat(&Tok::LParen) {
            let mut parts = vec![self.value()?];
            while self.eat(&Tok::Comma) {
                parts.push(self.value()?);
            }
            self.expect(Tok::RParen)?;
            Ok(Value::Tuple(parts))
        } else {
            Ok(Value::Int(self.int()?))
        }
    }

    fn ring(&mut self) -> Result<RingExpr, ParseError> {
        if let Some(name) = self.name_of(Kind::Ring)? {
            return Ok(RingExpr::Name(name));
        }
        let col = self.col();
        let head = self.ident()?;
        self.expect(Tok::LParen)?;
        let expr = match head.as_str() {
            "Z" => {
                let n = self.int()?;
                if n < 2 {
                    return Err(ParseError {
                        line: self.line,
                        column: col,
                        message: format!("Z(n) needs n >= 2, got {n}"),
                    });
                }
                RingExpr::Z(n as u64)
            }
            "product" => {
                let r = self.ring()?;
                self.expect(Tok::Comma)?;
                RingExpr::Product(Box::new(r), Box::new(self.ring()?))
            }
            "quotient" => {
                let r = self.ring()?;
                self.expect(Tok::Comma)?;
                RingExpr::Quotient(Box::new(r), Box::new(self.ideal()?))
            }
            "trivext" => {
                let r = self.ring()?;
                self.expect(Tok::Comma)?;
                let m = self.ident()?;
                if m != "module" {
                    return Err(self.error(format!("expected `module(...)`, found `{m}`")));
                }
                self.expect(Tok::LParen)?;
                let terms = self.module_terms()?;
                self.expect(Tok::RParen)?;
                RingExpr::TrivExt(Box::new(r), terms)
            }
            "biamalg" => RingExpr::BiAmalg(Box::new(self.datum()?)),
            "dup" => {
                let r = self.ring()?;
                self.expect(Tok::Comma)?;
                RingExpr::Dup(Box::new(r), Box::new(self.ideal()?))
            }
            _ => {
                return Err(ParseError {
                    line: self.line,
                    column: col,
                    message: format!("unknown ring constructor `{head}`"),
                })
            }
        };
        self.expect(Tok::RParen)?;
        Ok(expr)
    }

    fn module_terms(&mut self) -> Result<Vec<ModuleTerm>, ParseError> {
        let mut terms = vec![self.module_term()?];
        while self.eat(&Tok::Plus) {
            terms.push(self.module_term()?);
        }
        Ok(terms)
    }

    fn module_term(&mut self) -> Result<ModuleTerm, ParseError> {
        let col = self.col();
        let head = self.ident()?;
        self.expect(Tok::LParen)?;
        let i = self.ideal()?;
        self.expect(Tok::RParen)?;
        match head.as_str() {
            "ideal" => Ok(ModuleTerm::Ideal(i)),
            "quot" => Ok(ModuleTerm::Quot(i)),
            _ => Err(ParseError {
                line: self.line,
                column: col,
                message: format!("unknown module constructor `{head}`"),
            }),
        }
    }

    fn ideal(&mut self) -> Result<IdealExpr, ParseError> {
        if let Some(name) = self.name_of(Kind::Ideal)? {
            return Ok(IdealExpr::Name(name));
        }
        let head = self.ident()?;
        if head != "gen" {
            return Err(self.error(format!("expected `gen(...)` or an ideal name, found `{head}`")));
        }
        self.expect(Tok::LParen)?;
        let r = self.ring()?;
        let mut elems = Vec::new();
        if self.eat(&Tok::Semi) && self.peek() != Some(&Tok::RParen) {
            elems.push(self.value()?);
            while self.eat(&Tok::Comma) {
                elems.push(self.value()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(IdealExpr::Gen(r, elems))
    }

    fn arrow_pair(&mut self) -> Result<(RingExpr, RingExpr), ParseError> {
        let a = self.ring()?;
        self.expect(Tok::Arrow)?;
        Ok((a, self.ring()?))
    }

    fn hom(&mut self) -> Result<HomExpr, ParseError> {
        if let Some(name) = self.name_of(Kind::Hom)? {
            return Ok(HomExpr::Name(name));
        }
        let col = self.col();
        let head = self.ident()?;
        self.expect(Tok::LParen)?;
        let expr = match head.as_str() {
            "id" => HomExpr::Id(self.ring()?),
            "proj" => {
                let (a, b) = self.arrow_pair()?;
                HomExpr::Proj(a, b)
            }
            "incl" => {
                let (a, b) = self.arrow_pair()?;
                HomExpr::Incl(a, b)
            }
            "graph" => HomExpr::Graph(Box::new(self.hom()?)),
            "map" => {
                let (a, b) = self.arrow_pair()?;
                let mut pairs = Vec::new();
                if self.eat(&Tok::Semi) && self.peek() != Some(&Tok::RParen) {
                    loop {
                        let x = self.value()?;
                        self.expect(Tok::Arrow)?;
                        pairs.push((x, self.value()?));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                HomExpr::Map(a, b, pairs)
            }
            _ => {
                return Err(ParseError {
                    line: self.line,
                    column: col,
                    message: format!("unknown hom constructor `{head}`"),
                })
            }
        };
        self.expect(Tok::RParen)?;
        Ok(expr)
    }

    fn datum(&mut self) -> Result<DatumExpr, ParseError> {
        if let Some(name) = self.name_of(Kind::Datum)? {
            return Ok(DatumExpr::Name(name));
        }
        self.expect(Tok::LParen)?;
        let f = self.hom()?;
        self.expect(Tok::Comma)?;
        let g = self.hom()?;
        self.expect(Tok::Comma)?;
        let j = self.ideal()?;
        self.expect(Tok::Comma)?;
        let j2 = self.ideal()?;
        self.expect(Tok::RParen)?;
        Ok(DatumExpr::Tuple(f, g, j, j2))
    }

    fn options(&mut self) -> Result<Options, ParseError> {
        self.expect(Tok::LParen)?;
        let mut opts = Options::default();
        loop {
            let col = self.col();
            let key = self.ident()?;
            self.expect(Tok::Eq)?;
            let v = self.int()?;
            if v < 0 {
                return Err(self.error("option values must be non-negative"));
            }
            let slot_taken = match key.as_str() {
                "max_ring_size" => opts.max_ring_size.replace(v as usize).is_some(),
                "max_ideal_enum" => opts.max_ideal_enum.replace(v as usize).is_some(),
                "seed" => opts.seed.replace(v as u64).is_some(),
                _ => {
                    return Err(ParseError {
                        line: self.line,
                        column: col,
                        message: format!("unknown option `{key}`"),
                    })
                }
            };
            if slot_taken {
                return Err(ParseError {
                    line: self.line,
                    column: col,
                    message: format!("option `{key}` given twice"),
                });
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(opts)
    }
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut script = Script::default();
    let mut kinds: HashMap<String, Kind> = HashMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser {
            toks,
            pos: 0,
            line,
            end_col: raw.chars().count() + 1,
            kinds: &kinds,
        };
        let col = p.col();
        let head = p.ident()?;
        if head == "options" {
            if script.options.is_some() {
                return Err(ParseError {
                    line,
                    column: col,
                    message: "only one options line is allowed".into(),
                });
            }
            let opts = p.options()?;
            p.finish()?;
            script.options = Some(opts);
            continue;
        }
        let kind = match head.as_str() {
            "ring" => Kind::Ring,
            "ideal" => Kind::Ideal,
            "hom" => Kind::Hom,
            "datum" => Kind::Datum,
            _ => {
                return Err(ParseError {
                    line,
                    column: col,
                    message: format!("expected `ring`, `ideal`, `hom`, `datum` or `options`, found `{head}`"),
                })
            }
        };
        let name_col = p.col();
        let name = p.ident()?;
        if kinds.contains_key(&name) {
            return Err(ParseError {
                line,
                column: name_col,
                message: format!("`{name}` is already bound"),
            });
        }
        p.expect(Tok::Eq)?;
        let expr = match kind {
            Kind::Ring => Expr::Ring(p.ring()?),
            Kind::Ideal => Expr::Ideal(p.ideal()?),
            Kind::Hom => Expr::Hom(p.hom()?),
            Kind::Datum => Expr::Datum(p.datum()?),
        };
        p.finish()?;
        kinds.insert(name.clone(), kind);
        script.bindings.push(Binding { name, expr });
        script.lines.push(line);
    }
    Ok(script)
}

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Name(s) => f.write_str(s),
            RingExpr::Z(n) => write!(f, "Z({n})"),
            RingExpr::Product(a, b) => write!(f, "product({a}, {b})"),
            RingExpr::Quotient(a, i) => write!(f, "quotient({a}, {i})"),
            RingExpr::TrivExt(a, m) => write!(f, "trivext({a}, module({}))", join(m, " + ")),
            RingExpr::BiAmalg(d) => write!(f, "biamalg({d})"),
            RingExpr::Dup(a, i) => write!(f, "dup({a}, {i})"),
        }
    }
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealExpr::Name(s) => f.write_str(s),
            IdealExpr::Gen(r, xs) if xs.is_empty() => write!(f, "gen({r})"),
            IdealExpr::Gen(r, xs) => write!(f, "gen({r}; {})", join(xs, ", ")),
        }
    }
}

impl fmt::Display for ModuleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleTerm::Ideal(i) => write!(f, "ideal({i})"),
            ModuleTerm::Quot(i) => write!(f, "quot({i})"),
        }
    }
}

impl fmt::Display for HomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomExpr::Name(s) => f.write_str(s),
            HomExpr::Id(r) => write!(f, "id({r})"),
            HomExpr::Proj(a, b) => write!(f, "proj({a}->{b})"),
            HomExpr::Incl(a, b) => write!(f, "incl({a}->{b})"),
            HomExpr::Graph(h) => write!(f, "graph({h})"),
            HomExpr::Map(a, b, ps) if ps.is_empty() => write!(f, "map({a}->{b})"),
            HomExpr::Map(a, b, ps) => {
                let pairs: Vec<String> = ps.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                write!(f, "map({a}->{b}; {})", pairs.join(", "))
            }
        }
    }
}

impl fmt::Display for DatumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatumExpr::Name(s) => f.write_str(s),
            DatumExpr::Tuple(a, b, i, j) => write!(f, "({a}, {b}, {i}, {j})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ring(e) => e.fmt(f),
            Expr::Ideal(e) => e.fmt(f),
            Expr::Hom(e) => e.fmt(f),
            Expr::Datum(e) => e.fmt(f),
        }
    }
}

impl fmt::Display for Options {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(n) = self.max_ring_size {
            parts.push(format!("max_ring_size={n}"));
        }
        if let Some(n) = self.max_ideal_enum {
            parts.push(format!("max_ideal_enum={n}"));
        }
        if let Some(n) = self.seed {
            parts.push(format!("seed={n}"));
        }
        write!(f, "options({})", parts.join(", "))
    }
}

/// Canonical text of a script; comments and spacing are not preserved.
pub fn print_script(script: &Script) -> String {
    let mut out = String::new();
    if let Some(o) = &script.options {
        out.push_str(&format!("{o}\n"));
    }
    for b in &script.bindings {
        out.push_str(&format!("{} {} = {}\n", b.expr.kind().keyword(), b.name, b.expr));
    }
    out
}

/// A value bound by a script.
#[derive(Clone, Debug)]
pub enum Bound {
    /// rings built by `dup` or `biamalg` keep their datum
    Ring(FiniteRing, Option<BiAmalgDatum>),
    Ideal(Ideal),
    Hom(RingHom),
    Datum(BiAmalgDatum),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptError {
    Parse(ParseError),
    Eval { line: usize, error: Error },
    Lookup(String),
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptError::Parse(e) => write!(f, "parse error: {e}"),
            ScriptError::Eval { line, error } => write!(f, "line {line}: {error}"),
            ScriptError::Lookup(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for ScriptError {}

impl From<ParseError> for ScriptError {
    fn from(e: ParseError) -> Self {
        ScriptError::Parse(e)
    }
}

/// The evaluated bindings of a script.
#[derive(Clone, Debug)]
pub struct Env {
    pub caps: Caps,
    pub seed: Option<u64>,
    values: HashMap<String, Bound>,
}

type EvalResult<T> = Result<T, Error>;

impl Env {
    pub fn get(&self, name: &str) -> Option<&Bound> {
        self.values.get(name)
    }

    pub fn ring(&self, name: &str) -> Result<&FiniteRing, ScriptError> {
        match self.values.get(name) {
            Some(Bound::Ring(r, _)) => Ok(r),
            Some(_) => Err(ScriptError::Lookup(format!("`{name}` is not a ring"))),
            None => Err(ScriptError::Lookup(format!("no binding named `{name}`"))),
        }
    }

    /// A datum binding, or the datum behind a ring built by `dup` or `biamalg`.
    pub fn datum(&self, name: &str) -> Result<&BiAmalgDatum, ScriptError> {
        match self.values.get(name) {
            Some(Bound::Datum(d)) | Some(Bound::Ring(_, Some(d))) => Ok(d),
            Some(_) => Err(ScriptError::Lookup(format!("`{name}` is not a datum"))),
            None => Err(ScriptError::Lookup(format!("no binding named `{name}`"))),
        }
    }

    fn ring_expr(&self, e: &RingExpr) -> EvalResult<(FiniteRing, Option<BiAmalgDatum>)> {
        Ok(match e {
            RingExpr::Name(s) => match &self.values[s] {
                Bound::Ring(r, d) => (r.clone(), d.clone()),
                _ => unreachable!("kinds are checked while parsing"),
            },
            RingExpr::Z(n) => (FiniteRing::zmod_capped(*n, &self.caps)?, None),
            RingExpr::Product(a, b) => (
                FiniteRing::product_capped(&self.ring_expr(a)?.0, &self.ring_expr(b)?.0, &self.caps)?,
                None,
            ),
            RingExpr::Quotient(a, i) => {
                let r = self.ring_expr(a)?.0;
                let i = self.ideal_expr(i)?;
                if i.ring() != &r {
                    return Err(Error::RingMismatch("quotient by an ideal of another ring".into()));
                }
                (FiniteRing::quotient(&r, &i)?, None)
            }
            RingExpr::TrivExt(a, terms) => {
                let r = self.ring_expr(a)?.0;
                let mut module: Option<Module> = None;
                for t in terms {
                    let m = self.module_term(t)?;
                    if m.base() != &r {
                        return Err(Error::RingMismatch("module over another ring".into()));
                    }
                    module = Some(match module {
                        None => m,
                        Some(acc) => Module::direct_sum(&acc, &m)?,
                    });
                }
                let m = module.expect("parser requires a term");
                (FiniteRing::trivial_extension_capped(&r, &m, &self.caps)?, None)
            }
            RingExpr::BiAmalg(d) => {
                let d = self.datum_expr(d)?;
                (construct(&d, &self.caps)?.ring, Some(d))
            }
            RingExpr::Dup(a, i) => {
                let r = self.ring_expr(a)?.0;
                let d = duplication_datum(&r, &self.ideal_expr(i)?)?;
                (construct(&d, &self.caps)?.ring, Some(d))
            }
        })
    }

    fn module_term(&self, t: &ModuleTerm) -> EvalResult<Module> {
        match t {
            ModuleTerm::Ideal(i) => Ok(Module::from_ideal(&self.ideal_expr(i)?)),
            ModuleTerm::Quot(i) => Module::quotient(&self.ideal_expr(i)?),
        }
    }

    fn elems(r: &FiniteRing, xs: &[Value]) -> EvalResult<Vec<Elem>> {
        xs.iter().map(|v| r.decode(v)).collect()
    }

    fn ideal_expr(&self, e: &IdealExpr) -> EvalResult<Ideal> {
        match e {
            IdealExpr::Name(s) => match &self.values[s] {
                Bound::Ideal(i) => Ok(i.clone()),
                _ => unreachable!("kinds are checked while parsing"),
            },
            IdealExpr::Gen(r, xs) => {
                let r = self.ring_expr(r)?.0;
                Ok(Ideal::generated(&r, &Self::elems(&r, xs)?))
            }
        }
    }

    fn hom_expr(&self, e: &HomExpr) -> EvalResult<RingHom> {
        match e {
            HomExpr::Name(s) => match &self.values[s] {
                Bound::Hom(h) => Ok(h.clone()),
                _ => unreachable!("kinds are checked while parsing"),
            },
            HomExpr::Id(r) => Ok(RingHom::identity(&self.ring_expr(r)?.0)),
            HomExpr::Proj(a, b) => make_hom(&self.ring_expr(a)?.0, &self.ring_expr(b)?.0, HomSpec::Projection),
            HomExpr::Incl(a, b) => make_hom(&self.ring_expr(a)?.0, &self.ring_expr(b)?.0, HomSpec::Inclusion),
            HomExpr::Graph(h) => {
                let h = self.hom_expr(h)?;
                let domain = h.domain().clone();
                let target = FiniteRing::product_capped(&domain, h.codomain(), &self.caps)?;
                make_hom(&domain, &target, HomSpec::Graph(h))
            }
            HomExpr::Map(a, b, pairs) => {
                let a = self.ring_expr(a)?.0;
                let b = self.ring_expr(b)?.0;
                let pairs = pairs
                    .iter()
                    .map(|(x, y)| Ok((a.decode(x)?, b.decode(y)?)))
                    .collect::<EvalResult<Vec<_>>>()?;
                make_hom(&a, &b, HomSpec::Generated(pairs))
            }
        }
    }

    fn datum_expr(&self, e: &DatumExpr) -> EvalResult<BiAmalgDatum> {
        match e {
            DatumExpr::Name(s) => match &self.values[s] {
                Bound::Datum(d) => Ok(d.clone()),
                _ => unreachable!("kinds are checked while parsing"),
            },
            DatumExpr::Tuple(f, g, j, j2) => validate_datum(
                &self.hom_expr(f)?,
                &self.hom_expr(g)?,
                &self.ideal_expr(j)?,
                &self.ideal_expr(j2)?,
            ),
        }
    }
}

/// Evaluate every binding in order. `caps` are the defaults the script's
/// options line refines.
pub fn eval_script(script: &Script, caps: Caps) -> Result<Env, ScriptError> {
    let opts = script.options.clone().unwrap_or_default();
    eval_script_with_caps(script, opts.apply(caps))
}

/// Evaluate with exactly these caps, ignoring the caps in the options line.
pub fn eval_script_with_caps(script: &Script, caps: Caps) -> Result<Env, ScriptError> {
    let mut env = Env {
        caps,
        seed: script.options.as_ref().and_then(|o| o.seed),
        values: HashMap::new(),
    };
    for (b, &line) in script.bindings.iter().zip(&script.lines) {
        let wrap = |error| ScriptError::Eval { line, error };
        let v = match &b.expr {
            Expr::Ring(e) => {
                let (r, d) = env.ring_expr(e).map_err(wrap)?;
                Bound::Ring(r, d)
            }
            Expr::Ideal(e) => Bound::Ideal(env.ideal_expr(e).map_err(wrap)?),
            Expr::Hom(e) => Bound::Hom(env.hom_expr(e).map_err(wrap)?),
            Expr::Datum(e) => Bound::Datum(env.datum_expr(e).map_err(wrap)?),
        };
        env.values.insert(b.name.clone(), v);
    }
    Ok(env)
}

/// Parse and evaluate in one step.
pub fn load_script(text: &str, caps: Caps) -> Result<Env, ScriptError> {
    let script = parse_script(text)?;
    eval_script(&script, caps)
}

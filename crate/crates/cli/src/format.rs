//! The `.man` (manifold) and `.map` (formal map) text formats.
//!
//! Both are sequences of statements separated by newlines or `;`, with `#`
//! starting a comment. Header statements are `key=value`; a `rho:` (or
//! `F:`) statement opens the expression section, and every following
//! non-header statement is one expression.
//!
//! ```text
//! N=2; d=1; order=8; p=0
//! rho: Im(Z2) - abs2(Z1)
//! ```
//!
//! Expression grammar:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | <implicit>) unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)?
//! atom    := NUMBER | 'i' | Zk | zetak | FUNC '(' expr ')' | '(' expr ')'
//!          | 'rand' '(' INT (',' Zk)* ')'          (map files only)
//! FUNC    := 'Re' | 'Im' | 'abs2' | 'conj'
//! NUMBER  := digits ('.' digits)?
//! ```
//!
//! A number directly followed by an identifier or `(` multiplies at the
//! level of `*`, so `2i`, `3Z1^2` and `4/5i` (which is `(4/5)·i`) are accepted.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segre_core::manifold::holomorphic_series;
use segre_core::maps::FormalMap;
use segre_core::series::SeriesVector;
use segre_core::{DefiningExpr, GaussianRational, ManifoldSpec};

/// A 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        Self { line: pos.line, col: pos.col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Decimal(i64, i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{}", n),
            Tok::Decimal(n, d) => write!(f, "{}/{}", n, d),
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
        }
    }
}

fn tokenize(text: &str, start: Pos) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line: start.line, col: start.col + i };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[begin..i].iter().collect();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fb = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fb..i].iter().collect();
                let digits = format!("{}{}", int, frac);
                let num: i64 = digits.parse().map_err(|_| ParseError::at(pos, "number too large"))?;
                let den = 10i64
                    .checked_pow(frac.len() as u32)
                    .ok_or_else(|| ParseError::at(pos, "too many decimal digits"))?;
                out.push((Tok::Decimal(num, den), pos));
            } else {
                let n: i64 = int.parse().map_err(|_| ParseError::at(pos, "number too large"))?;
                out.push((Tok::Int(n), pos));
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[begin..i].iter().collect();
            out.push((Tok::Ident(ident), pos));
            continue;
        }
        return Err(ParseError::at(pos, format!("unexpected character `{}`", c)));
    }
    Ok(out)
}

/// Where random map components come from.
pub struct RandSource {
    rng: ChaCha8Rng,
}

impl RandSource {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A polynomial with zero constant term in `vars`, all monomials of
    /// degree `1..=deg`, each with a pseudo-random Gaussian-rational
    /// coefficient.
    fn polynomial(&mut self, deg: u32, vars: &[usize]) -> DefiningExpr {
        let mut acc: Option<DefiningExpr> = None;
        let mut exps = vec![0u32; vars.len()];
        for total in 1..=deg {
            monomials(&mut exps, 0, total, &mut |e| {
                let re = self.rng.gen_range(-4i64..=4);
                let im = self.rng.gen_range(-4i64..=4);
                let den = self.rng.gen_range(1i64..=5);
                let c = GaussianRational::from_fracs(re, den, im, den);
                let mut term = DefiningExpr::Const(c);
                for (k, &p) in e.iter().enumerate() {
                    if p > 0 {
                        term = term * DefiningExpr::z(vars[k]).pow(p);
                    }
                }
                acc = Some(match acc.take() {
                    None => term,
                    Some(a) => a + term,
                });
            });
        }
        acc.unwrap_or(DefiningExpr::int(0))
    }
}

fn monomials(exps: &mut Vec<u32>, k: usize, remaining: u32, f: &mut dyn FnMut(&[u32])) {
    if k + 1 == exps.len() {
        exps[k] = remaining;
        f(exps);
        return;
    }
    if exps.is_empty() {
        return;
    }
    for e in (0..=remaining).rev() {
        exps[k] = e;
        monomials(exps, k + 1, remaining - e, f);
    }
    exps[k] = 0;
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
    /// Every variable occurrence, 0-based index, for later range checks.
    vars: Vec<(usize, Pos)>,
    rand: Option<&'a mut RandSource>,
    holomorphic_only: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some((t, _)) if t == want => Ok(()),
            Some((t, p)) => Err(ParseError::at(p, format!("expected {}, found {}", want, t))),
            None => Err(ParseError::at(self.end, format!("expected {}, found end of input", want))),
        }
    }

    fn expr(&mut self) -> Result<DefiningExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    lhs = lhs + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<DefiningExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    lhs = lhs * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    if rhs.max_index().is_some() {
                        return Err(ParseError::at(pos, "division is only allowed by a constant"));
                    }
                    lhs = DefiningExpr::Div(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) if self.after_number() => {
                    lhs = lhs * self.unary()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn after_number(&self) -> bool {
        self.at > 0 && matches!(self.toks[self.at - 1].0, Tok::Int(_) | Tok::Decimal(..))
    }

    fn unary(&mut self) -> Result<DefiningExpr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<DefiningExpr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.next() {
                Some((Tok::Int(n), p)) => {
                    let e = u32::try_from(n).map_err(|_| ParseError::at(p, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                Some((t, p)) => return Err(ParseError::at(p, format!("expected an integer exponent, found {}", t))),
                None => return Err(ParseError::at(self.end, "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DefiningExpr, ParseError> {
        let Some((tok, pos)) = self.next() else {
            return Err(ParseError::at(self.end, "unexpected end of expression"));
        };
        match tok {
            Tok::Int(n) => Ok(DefiningExpr::int(n)),
            Tok::Decimal(n, d) => Ok(DefiningExpr::Const(GaussianRational::from_fracs(n, d, 0, 1))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(&name, pos),
            other => Err(ParseError::at(pos, format!("unexpected {}", other))),
        }
    }

    fn variable_index(&mut self, digits: &str, pos: Pos) -> Result<usize, ParseError> {
        let k: usize = digits.parse().map_err(|_| ParseError::at(pos, "bad variable index"))?;
        if k == 0 {
            return Err(ParseError::at(pos, "variable indices start at 1"));
        }
        self.vars.push((k - 1, pos));
        Ok(k - 1)
    }

    fn ident(&mut self, name: &str, pos: Pos) -> Result<DefiningExpr, ParseError> {
        if name == "i" {
            return Ok(DefiningExpr::Const(GaussianRational::i()));
        }
        if let Some(d) = name.strip_prefix('Z').filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit())) {
            return Ok(DefiningExpr::z(self.variable_index(d, pos)?));
        }
        if let Some(d) = name.strip_prefix("zeta").filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit())) {
            if self.holomorphic_only {
                return Err(ParseError::at(pos, "conjugate variables are not allowed in map components"));
            }
            return Ok(DefiningExpr::Zeta(self.variable_index(d, pos)?));
        }
        match name {
            "Re" | "Im" | "abs2" | "conj" => {
                if self.holomorphic_only {
                    return Err(ParseError::at(pos, format!("`{}` is not allowed in map components", name)));
                }
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(match name {
                    "Re" => DefiningExpr::re(e),
                    "Im" => DefiningExpr::im(e),
                    "abs2" => DefiningExpr::abs2(e),
                    _ => DefiningExpr::conj(e),
                })
            }
            "rand" => self.rand_call(pos),
            _ => Err(ParseError::at(pos, format!("unknown identifier `{}`", name))),
        }
    }

    fn rand_call(&mut self, pos: Pos) -> Result<DefiningExpr, ParseError> {
        if self.rand.is_none() {
            return Err(ParseError::at(pos, "`rand` is only available in map files"));
        }
        self.expect(Tok::LParen)?;
        let deg = match self.next() {
            Some((Tok::Int(n), p)) => u32::try_from(n).map_err(|_| ParseError::at(p, "degree too large"))?,
            Some((t, p)) => return Err(ParseError::at(p, format!("expected a degree, found {}", t))),
            None => return Err(ParseError::at(self.end, "expected a degree")),
        };
        let mut vars = Vec::new();
        while self.peek() == Some(&Tok::Comma) {
            self.at += 1;
            match self.next() {
                Some((Tok::Ident(name), p)) => match name.strip_prefix('Z') {
                    Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => {
                        vars.push(self.variable_index(d, p)?)
                    }
                    _ => return Err(ParseError::at(p, format!("expected a variable Zk, found `{}`", name))),
                },
                Some((t, p)) => return Err(ParseError::at(p, format!("expected a variable Zk, found {}", t))),
                None => return Err(ParseError::at(self.end, "expected a variable")),
            }
        }
        self.expect(Tok::RParen)?;
        if vars.is_empty() {
            return Err(ParseError::at(pos, "`rand` needs at least one variable"));
        }
        Ok(self.rand.as_mut().expect("checked").polynomial(deg, &vars))
    }
}

fn parse_expr_at(
    text: &str,
    start: Pos,
    rand: Option<&mut RandSource>,
    holomorphic_only: bool,
) -> Result<(DefiningExpr, Vec<(usize, Pos)>), ParseError> {
    let toks = tokenize(text, start)?;
    let end = Pos { line: start.line, col: start.col + text.chars().count() };
    if toks.is_empty() {
        return Err(ParseError::at(start, "empty expression"));
    }
    let mut p = Parser { toks, at: 0, end, vars: Vec::new(), rand, holomorphic_only };
    let e = p.expr()?;
    if let Some((t, pos)) = p.toks.get(p.at) {
        return Err(ParseError::at(*pos, format!("unexpected {} after expression", t)));
    }
    Ok((e, p.vars))
}

/// Parse one expression (no `rand`).
pub fn parse_expr(text: &str) -> Result<DefiningExpr, ParseError> {
    parse_expr_at(text, Pos { line: 1, col: 1 }, None, false).map(|(e, _)| e)
}

/// Parse a constant such as `3/5+4/5i`.
pub fn parse_constant(text: &str) -> Result<GaussianRational, ParseError> {
    let e = parse_expr(text)?;
    constant_value(&e, Pos { line: 1, col: 1 })
}

fn constant_value(e: &DefiningExpr, pos: Pos) -> Result<GaussianRational, ParseError> {
    if e.max_index().is_some() {
        return Err(ParseError::at(pos, "expected a constant"));
    }
    e.evaluate(&[]).map_err(|err| ParseError::at(pos, err.to_string()))
}

struct Statement {
    text: String,
    pos: Pos,
}

fn statements(doc: &str) -> Vec<Statement> {
    let mut out = Vec::new();
    for (ln, line) in doc.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut col = 1;
        for piece in line.split(';') {
            let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
            let trimmed = piece.trim();
            if !trimmed.is_empty() {
                out.push(Statement { text: trimmed.to_string(), pos: Pos { line: ln + 1, col: col + lead } });
            }
            col += piece.chars().count() + 1;
        }
    }
    out
}

/// `key=value` with a known key, or `None`.
fn header<'s>(st: &'s Statement, keys: &[&str]) -> Option<(&'s str, &'s str, Pos)> {
    let (k, v) = st.text.split_once('=')?;
    let k = k.trim();
    if !keys.contains(&k) {
        return None;
    }
    let offset = st.text.find('=').unwrap() + 1;
    let lead = st.text[offset..].chars().take_while(|c| c.is_whitespace()).count();
    Some((k, v.trim(), Pos { line: st.pos.line, col: st.pos.col + offset + lead }))
}

/// `label:` optionally followed by an expression on the same statement.
fn section<'s>(st: &'s Statement, label: &str) -> Option<(&'s str, Pos)> {
    let rest = st.text.strip_prefix(label)?.strip_prefix(':')?;
    let offset = label.len() + 1;
    let lead = rest.chars().take_while(|c| c.is_whitespace()).count();
    Some((rest.trim(), Pos { line: st.pos.line, col: st.pos.col + offset + lead }))
}

fn parse_usize(v: &str, pos: Pos, what: &str) -> Result<usize, ParseError> {
    v.parse().map_err(|_| ParseError::at(pos, format!("{} must be a nonnegative integer, found `{}`", what, v)))
}

fn parse_point(v: &str, pos: Pos, n: usize) -> Result<Vec<GaussianRational>, ParseError> {
    let inner = v.strip_prefix('(').and_then(|s| s.strip_suffix(')'));
    let Some(inner) = inner else {
        let c = constant_value(&parse_expr_at(v, pos, None, false)?.0, pos)?;
        if c == GaussianRational::from_ints(0, 0) {
            return Ok(vec![c; n]);
        }
        if n == 1 {
            return Ok(vec![c]);
        }
        return Err(ParseError::at(pos, "base point must be 0 or a tuple (p1, ..., pN)"));
    };
    let mut out = Vec::new();
    let mut col = pos.col + 1;
    for part in inner.split(',') {
        let lead = part.chars().take_while(|c| c.is_whitespace()).count();
        let p = Pos { line: pos.line, col: col + lead };
        out.push(constant_value(&parse_expr_at(part.trim(), p, None, false)?.0, p)?);
        col += part.chars().count() + 1;
    }
    if out.len() != n {
        return Err(ParseError::at(pos, format!("base point has {} coordinates, expected N = {}", out.len(), n)));
    }
    Ok(out)
}

fn check_indices(vars: &[(usize, Pos)], n: usize) -> Result<(), ParseError> {
    for &(i, pos) in vars {
        if i >= n {
            return Err(ParseError::at(pos, format!("variable index {} out of range for N = {}", i + 1, n)));
        }
    }
    Ok(())
}

/// A variable index and where it was written.
type Located = (usize, Pos);

/// A parsed `.man` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldFile {
    pub id: String,
    pub spec: ManifoldSpec,
}

/// Parse a manifold document. `id` names it in reports.
pub fn parse_manifold(doc: &str, id: &str) -> Result<ManifoldFile, ParseError> {
    let keys = ["N", "d", "order", "p", "name"];
    let mut n: Option<usize> = None;
    let mut d: Option<(usize, Pos)> = None;
    let mut order: Option<u32> = None;
    let mut point: Option<(String, Pos)> = None;
    let mut name: Option<String> = None;
    let mut exprs: Vec<(DefiningExpr, Vec<Located>, Pos)> = Vec::new();
    let mut in_rho = false;
    let mut first = Pos { line: 1, col: 1 };
    for st in statements(doc) {
        if let Some((k, v, pos)) = header(&st, &keys) {
            match k {
                "N" => n = Some(parse_usize(v, pos, "N")?),
                "d" => d = Some((parse_usize(v, pos, "d")?, pos)),
                "order" => {
                    order = Some(
                        u32::try_from(parse_usize(v, pos, "order")?)
                            .map_err(|_| ParseError::at(pos, "order too large"))?,
                    )
                }
                "p" => point = Some((v.to_string(), pos)),
                _ => name = Some(v.to_string()),
            }
            continue;
        }
        if let Some((rest, pos)) = section(&st, "rho") {
            in_rho = true;
            first = st.pos;
            if !rest.is_empty() {
                let (e, vars) = parse_expr_at(rest, pos, None, false)?;
                exprs.push((e, vars, pos));
            }
            continue;
        }
        if !in_rho {
            return Err(ParseError::at(st.pos, format!("expected a header or `rho:`, found `{}`", st.text)));
        }
        let (e, vars) = parse_expr_at(&st.text, st.pos, None, false)?;
        exprs.push((e, vars, st.pos));
    }
    let n = n.ok_or_else(|| ParseError::at(Pos { line: 1, col: 1 }, "missing header `N=`"))?;
    if exprs.is_empty() {
        return Err(ParseError::at(first, "no defining expressions (`rho:` section is empty or missing)"));
    }
    let (d, dpos) = d.unwrap_or((exprs.len(), first));
    if d == 0 || d > n {
        return Err(ParseError::at(dpos, format!("codimension d = {} must satisfy 1 <= d <= N = {}", d, n)));
    }
    if exprs.len() != d {
        return Err(ParseError::at(first, format!("expected d = {} defining expressions, found {}", d, exprs.len())));
    }
    for (_, vars, _) in &exprs {
        check_indices(vars, n)?;
    }
    let basepoint = match point {
        Some((v, pos)) => Some(parse_point(&v, pos, n)?),
        None => None,
    };
    let exprs: Vec<DefiningExpr> = exprs.into_iter().map(|(e, _, _)| e).collect();
    let spec = ManifoldSpec::new(n, d, exprs, basepoint, order).map_err(|e| ParseError::at(first, e.to_string()))?;
    Ok(ManifoldFile { id: name.unwrap_or_else(|| id.to_string()), spec })
}

/// A parsed `.map` file; components are holomorphic expressions in `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFile {
    pub id: String,
    pub source_dim: Option<usize>,
    pub order: Option<u32>,
    pub seed: u64,
    pub components: Vec<DefiningExpr>,
    positions: Vec<(usize, Pos)>,
    first: Pos,
}

impl MapFile {
    /// The formal map `ℂ^n → ℂ^{N′}` truncated at `order`.
    pub fn to_formal_map(&self, n: usize, order: u32) -> Result<FormalMap, ParseError> {
        if let Some(m) = self.source_dim {
            if m != n {
                return Err(ParseError::at(
                    self.first,
                    format!("map is declared on ℂ^{} but the source lives in ℂ^{}", m, n),
                ));
            }
        }
        check_indices(&self.positions, n)?;
        let ctx = segre_core::manifold::z_context(n);
        let comps = self
            .components
            .iter()
            .map(|e| holomorphic_series(e, n, order))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ParseError::at(self.first, e.to_string()))?;
        let v = SeriesVector::new(&ctx, comps).map_err(|e| ParseError::at(self.first, e.to_string()))?;
        FormalMap::new(v).map_err(|e| ParseError::at(self.first, e.to_string()))
    }
}

/// Parse a map document. `default_seed` is used unless the file sets `seed=`.
pub fn parse_map(doc: &str, id: &str, default_seed: u64) -> Result<MapFile, ParseError> {
    let keys = ["N", "order", "seed", "name"];
    let sts = statements(doc);
    let mut n = None;
    let mut order = None;
    let mut seed = default_seed;
    let mut name = None;
    // headers first so `seed=` applies wherever it is written
    for st in &sts {
        if let Some((k, v, pos)) = header(st, &keys) {
            match k {
                "N" => n = Some(parse_usize(v, pos, "N")?),
                "order" => {
                    order = Some(
                        u32::try_from(parse_usize(v, pos, "order")?)
                            .map_err(|_| ParseError::at(pos, "order too large"))?,
                    )
                }
                "seed" => {
                    seed = v.parse().map_err(|_| ParseError::at(pos, format!("bad seed `{}`", v)))?;
                }
                _ => name = Some(v.to_string()),
            }
        }
    }
    let mut rand = RandSource::new(seed);
    let mut components = Vec::new();
    let mut positions = Vec::new();
    let mut in_f = false;
    let mut first = Pos { line: 1, col: 1 };
    for st in &sts {
        if header(st, &keys).is_some() {
            continue;
        }
        if let Some((rest, pos)) = section(st, "F") {
            in_f = true;
            first = st.pos;
            if !rest.is_empty() {
                let (e, vars) = parse_expr_at(rest, pos, Some(&mut rand), true)?;
                components.push(e);
                positions.extend(vars);
            }
            continue;
        }
        if !in_f {
            return Err(ParseError::at(st.pos, format!("expected a header or `F:`, found `{}`", st.text)));
        }
        let (e, vars) = parse_expr_at(&st.text, st.pos, Some(&mut rand), true)?;
        components.push(e);
        positions.extend(vars);
    }
    if components.is_empty() {
        return Err(ParseError::at(first, "no map components (`F:` section is empty or missing)"));
    }
    if let Some(n) = n {
        check_indices(&positions, n)?;
    }
    Ok(MapFile { id: name.unwrap_or_else(|| id.to_string()), source_dim: n, order, seed, components, positions, first })
}

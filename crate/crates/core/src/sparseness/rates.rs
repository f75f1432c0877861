//! Sparseness-rate descriptors.
//!
//! Rates are expressions in `a` over a small closed grammar:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := INT ['/' INT]            rational constant
//!         | 'a'                      the argument
//!         | 'sqrt(' expr ')'         ⌊√x⌋
//!         | 'log2(' expr ')'         ⌊log2 x⌋, x >= 1
//!         | '(' expr ')'
//!         | 'table[' INT ':' RAT (',' INT ':' RAT)* ']' ['(' expr ')']
//!         | '@' PATH ['(' expr ')']  table loaded from a CSV `a,f(a)`
//! ```
//!
//! A table is a step function: its value at `x` is the value of the last
//! row whose breakpoint is `<= ⌊x⌋`. Composition is nesting, e.g.
//! `sqrt(2*a)` or `table[1:1,5:2](2*a)`.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::{self, checked_add, checked_mul, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    rows: Vec<(u64, Rational)>,
}

impl Table {
    pub fn new(rows: Vec<(u64, Rational)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Expr("table needs at least one row".into()));
        }
        if let Some(w) = rows.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::Expr(format!(
                "table breakpoints must increase: {} then {}",
                w[0].0, w[1].0
            )));
        }
        Ok(Table { rows })
    }

    pub fn rows(&self) -> &[(u64, Rational)] {
        &self.rows
    }

    pub fn lookup(&self, x: u64) -> Result<Rational> {
        let i = self.rows.partition_point(|&(k, _)| k <= x);
        if i == 0 {
            return Err(Error::Expr(format!(
                "table evaluated at {x}, below its first breakpoint {}",
                self.rows[0].0
            )));
        }
        Ok(self.rows[i - 1].1)
    }

    /// CSV with header `a,f(a)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,f(a)\n");
        for (a, v) in &self.rows {
            let _ = writeln!(out, "{a},{}", fmt_const(v));
        }
        out
    }

    pub fn from_csv(text: &str, origin: &Path) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with('a')) {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message,
            };
            let (a, v) = line
                .split_once(',')
                .ok_or_else(|| err(format!("expected `a,f(a)`, got {line:?}")))?;
            let a = a
                .trim()
                .parse()
                .map_err(|_| err(format!("bad breakpoint {a:?}")))?;
            let v = parse_rational(v).map_err(|e| err(e.to_string()))?;
            rows.push((a, v));
        }
        Table::new(rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Log2(Box<Expr>),
    Table(Arc<Table>, Box<Expr>),
}

impl std::ops::Add for Expr {
    type Output = Expr;

    fn add(self, other: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(other))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;

    fn mul(self, other: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(other))
    }
}

impl Expr {
    pub fn int(v: u64) -> Expr {
        Expr::Const(Rational::from_integer(v))
    }

    pub fn table(table: Table) -> Expr {
        Expr::Table(Arc::new(table), Box::new(Expr::Var))
    }

    pub fn eval(&self, a: u64) -> Result<Rational> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => Rational::from_integer(a),
            Expr::Add(x, y) => checked_add(&x.eval(a)?, &y.eval(a)?)?,
            Expr::Mul(x, y) => checked_mul(&x.eval(a)?, &y.eval(a)?)?,
            // ⌊√x⌋ = isqrt(⌊x⌋) and ⌊log2 x⌋ = ilog2(⌊x⌋) for x >= 1
            Expr::Sqrt(x) => Rational::from_integer(rational::floor(&x.eval(a)?).isqrt()),
            Expr::Log2(x) => {
                let v = rational::floor(&x.eval(a)?);
                if v == 0 {
                    return Err(Error::Expr(format!("log2 of a value below 1 at a = {a}")));
                }
                Rational::from_integer(u64::from(v.ilog2()))
            }
            Expr::Table(t, x) => t.lookup(rational::floor(&x.eval(a)?))?,
        })
    }

    /// Replaces every occurrence of `a` by `arg`.
    pub fn substitute(&self, arg: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(arg));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => arg.clone(),
            Expr::Add(x, y) => Expr::Add(sub(x), sub(y)),
            Expr::Mul(x, y) => Expr::Mul(sub(x), sub(y)),
            Expr::Sqrt(x) => Expr::Sqrt(sub(x)),
            Expr::Log2(x) => Expr::Log2(sub(x)),
            Expr::Table(t, x) => Expr::Table(t.clone(), sub(x)),
        }
    }

    pub fn parse(text: &str) -> Result<Expr> {
        Self::parse_with_base(text, None)
    }

    /// Parses an expression; `@path` tables resolve relative to `base`.
    pub fn parse_with_base(text: &str, base: Option<&Path>) -> Result<Expr> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            base,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

fn fmt_const(c: &Rational) -> String {
    if *c.denom() == 1 {
        c.numer().to_string()
    } else {
        rational::format_rational(c)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => f.write_str(&fmt_const(c)),
            Expr::Var => f.write_str("a"),
            Expr::Add(x, y) => write!(f, "{x} + {y}"),
            Expr::Mul(x, y) => {
                let side = |e: &Expr| match e {
                    Expr::Add(..) => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{}*{}", side(x), side(y))
            }
            Expr::Sqrt(x) => write!(f, "sqrt({x})"),
            Expr::Log2(x) => write!(f, "log2({x})"),
            Expr::Table(t, x) => {
                f.write_str("table[")?;
                for (i, (k, v)) in t.rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}:{}", fmt_const(v))?;
                }
                f.write_str("]")?;
                if **x != Expr::Var {
                    write!(f, "({x})")?;
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    base: Option<&'a Path>,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        let text = String::from_utf8_lossy(self.src);
        Error::Expr(format!("{what} at offset {} in {text:?}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while self.eat("+") {
            e = e + self.term()?;
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat("*") {
            e = e * self.factor()?;
        }
        Ok(e)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        if self.eat("/") {
            let den = self.integer()?;
            if den == 0 {
                return Err(self.error("zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn argument(&mut self) -> Result<Expr> {
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            Ok(e)
        } else {
            Ok(Expr::Var)
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.eat("sqrt(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(Expr::Sqrt(Box::new(e)));
        }
        if self.eat("log2(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(Expr::Log2(Box::new(e)));
        }
        if self.eat("table[") {
            let mut rows = Vec::new();
            loop {
                let k = self.integer()?;
                self.expect(":")?;
                rows.push((k, self.rational()?));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("]")?;
            let table = Table::new(rows)?;
            return Ok(Expr::Table(Arc::new(table), Box::new(self.argument()?)));
        }
        if self.eat("@") {
            let start = self.pos;
            while self.pos < self.src.len()
                && !self.src[self.pos].is_ascii_whitespace()
                && !b"()+*;".contains(&self.src[self.pos])
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            if name.is_empty() {
                return Err(self.error("expected a table path after `@`"));
            }
            let path = match self.base {
                Some(dir) => dir.join(name),
                None => PathBuf::from(name),
            };
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let table = Table::from_csv(&text, &path)?;
            return Ok(Expr::Table(Arc::new(table), Box::new(self.argument()?)));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("a") {
            return Ok(Expr::Var);
        }
        if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            return Ok(Expr::Const(self.rational()?));
        }
        Err(self.error("expected a factor"))
    }
}

/// A pair of sparseness rates `(f, g)`.
///
/// `f` maps positive integers to positive integers (the expression is
/// floored and clamped to at least 1); `g` maps to non-negative rationals.
/// `certified_from`, when set, asserts the gap condition for every
/// `a >= certified_from`; otherwise any claim about `B` is empirical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsenessRates {
    pub f: Expr,
    pub g: Expr,
    pub certified_from: Option<u64>,
}

impl SparsenessRates {
    pub fn new(f: Expr, g: Expr) -> Self {
        SparsenessRates {
            f,
            g,
            certified_from: None,
        }
    }

    pub fn certified(mut self, from: u64) -> Self {
        self.certified_from = Some(from);
        self
    }

    pub fn f_at(&self, a: u64) -> Result<u64> {
        Ok(rational::floor(&self.f.eval(a)?).max(1))
    }

    pub fn g_at(&self, a: u64) -> Result<Rational> {
        self.g.eval(a)
    }

    /// `a + ⌈g(a)⌉`: an integer gap is `>= a + g(a)` exactly when it is
    /// `>=` this value.
    pub fn min_gap(&self, a: u64) -> Result<u64> {
        a.checked_add(rational::ceil(&self.g_at(a)?))
            .ok_or_else(|| Error::Overflow(format!("a + g(a) at a = {a}")))
    }

    /// Right end `f(a) + a + ⌈g(a)⌉` of the window a check at `a` must see.
    pub fn window_end(&self, a: u64) -> Result<u64> {
        self.f_at(a)?
            .checked_add(self.min_gap(a)?)
            .ok_or_else(|| Error::Overflow(format!("f(a) + a + g(a) at a = {a}")))
    }

    /// Checks that `f` and `g` are non-decreasing on `[1, upto]` and that
    /// `f(upto) / upto <= eps`.
    pub fn check_invariants(&self, upto: u64, eps: &Rational) -> Result<()> {
        let (mut pf, mut pg) = (0u64, Rational::from_integer(0));
        for a in 1..=upto {
            let (fa, ga) = (self.f_at(a)?, self.g_at(a)?);
            if fa < pf {
                return Err(Error::Input(format!(
                    "f decreases at a = {a}: {pf} then {fa}"
                )));
            }
            if ga < pg {
                return Err(Error::Input(format!("g decreases at a = {a}")));
            }
            (pf, pg) = (fa, ga);
        }
        if !rational::ratio_at_most(pf, upto, eps) {
            return Err(Error::Input(format!(
                "f(a)/a = {pf}/{upto} exceeds {} at a = {upto}; f must be o(a)",
                rational::format_rational(eps)
            )));
        }
        Ok(())
    }

    /// Rates file text: `f = <expr>`, `g = <expr>`, optional `certified_from = N`.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("f = {}\ng = {}\n", self.f, self.g);
        if let Some(c) = self.certified_from {
            let _ = writeln!(out, "certified_from = {c}");
        }
        out
    }

    /// Single-line form `f=<expr>;g=<expr>[;certified_from=N]`.
    pub fn to_inline(&self) -> String {
        let mut out = format!("f={};g={}", self.f, self.g);
        if let Some(c) = self.certified_from {
            let _ = write!(out, ";certified_from={c}");
        }
        out
    }

    pub fn parse_inline(text: &str) -> Result<Self> {
        Self::parse_entries(text.split(';').map(|s| (0, s)), None, Path::new("<inline>"))
    }

    pub fn parse_file(text: &str, base: Option<&Path>, origin: &Path) -> Result<Self> {
        Self::parse_entries(text.lines().enumerate(), base, origin)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_file(&text, path.parent(), path)
    }

    fn parse_entries<'t>(
        entries: impl Iterator<Item = (usize, &'t str)>,
        base: Option<&Path>,
        origin: &Path,
    ) -> Result<Self> {
        let (mut f, mut g, mut cert) = (None, None, None);
        for (i, raw) in entries {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            match key.trim() {
                "f" => {
                    f = Some(Expr::parse_with_base(value, base).map_err(|e| err(e.to_string()))?)
                }
                "g" => {
                    g = Some(Expr::parse_with_base(value, base).map_err(|e| err(e.to_string()))?)
                }
                "certified_from" => {
                    let c: u64 = value
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("bad certified_from {value:?}")))?;
                    cert = Some(c.max(1));
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let missing =
            |k: &str| Error::Input(format!("{}: rates need `{k} = ...`", origin.display()));
        Ok(SparsenessRates {
            f: f.ok_or_else(|| missing("f"))?,
            g: g.ok_or_else(|| missing("g"))?,
            certified_from: cert,
        })
    }
}

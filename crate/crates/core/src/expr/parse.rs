//! Lexer, parser and elaborator.
//!
//! ```text
//! top    := sum ('circ' int sum)*
//! sum    := ['+'|'-'] prod (('+'|'-') prod)*
//! prod   := power (('*'|'/') power | power)*
//! power  := atom ['^' nat]
//! atom   := nat | 'sqrt6' | name | builtin ['[' int (',' int)* ']']
//!         | '-' power | 'D' ['^' nat] power | ':' power power+ ':' | '(' top ')'
//! ```
//!
//! Inside `: … :` a colon closes the normal order once two factors have
//! been read, so `:a :b c::` nests to the right; a nested normal order in
//! the last position after two or more factors needs parentheses.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::Context;
use crate::commutant::omega;
use crate::error::{Error, Result};
use crate::ope::{circle, conformal_vector, wick};
use crate::scalar::Scalar;
use crate::state::State;
use crate::transvect::PolyElement;
use crate::w3::{build_bc_lw, build_heis_lw, build_ls_ws};
use crate::weyl::{build_tau, WeylElement};

/// What an expression elaborates to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    State,
    Weyl,
    Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Nat(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^:()[],".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(Error::Parse { line, col, msg: format!("unexpected character '{c}'") });
        };
        col += i - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Nat(BigInt),
    Sqrt6,
    Name(String),
    Builtin(String, Vec<i64>),
    Deriv(u32, Box<Expr>),
    Wick(Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Circ(Box<Expr>, i64, Box<Expr>),
}

/// A parsed expression, checked against the identifiers of its context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    node: Node,
    line: usize,
    col: usize,
}

const BUILTINS: &[&str] = &["L_S", "W_S", "L_H", "W_H", "L_E", "W_E", "theta", "phi", "omega", "Lalpha", "tau"];

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ctx: &'a Context,
    mode: Mode,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn expected<T>(&self, what: &str) -> Result<T> {
        match self.toks.get(self.pos) {
            None => self.err(format!("expected {what}, found end of input")),
            Some(t) => self.err(format!("expected {what}, found {}", describe(&t.tok))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.expected(&format!("'{c}'"))
        }
    }

    fn nat(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let v = n.to_u32();
                match v {
                    Some(v) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    None => self.err("exponent too large"),
                }
            }
            _ => self.expected("a natural number"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let Some(v) = n.to_i64() else { return self.err("integer too large") };
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.expected("an integer"),
        }
    }

    fn mk(&self, node: Node, at: (usize, usize)) -> Expr {
        Expr { node, line: at.0, col: at.1 }
    }

    fn top(&mut self) -> Result<Expr> {
        let mut lhs = self.sum()?;
        while self.peek() == Some(&Tok::Ident("circ".into())) {
            let at = self.here();
            self.pos += 1;
            let n = self.int()?;
            let rhs = self.sum()?;
            lhs = self.mk(Node::Circ(Box::new(lhs), n, Box::new(rhs)), at);
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr> {
        let at = self.here();
        let mut lhs = if self.eat('-') {
            let p = self.prod()?;
            self.mk(Node::Neg(Box::new(p)), at)
        } else {
            self.eat('+');
            self.prod()?
        };
        loop {
            let at = self.here();
            if self.eat('+') {
                let rhs = self.prod()?;
                lhs = self.mk(Node::Add(Box::new(lhs), Box::new(rhs)), at);
            } else if self.eat('-') {
                let rhs = self.prod()?;
                lhs = self.mk(Node::Sub(Box::new(lhs), Box::new(rhs)), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Nat(_)) => true,
            Some(Tok::Ident(s)) => s != "circ",
            Some(Tok::Sym(c)) => *c == '(' || *c == ':',
            None => false,
        }
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            let at = self.here();
            if self.eat('*') {
                let rhs = self.power()?;
                lhs = self.mk(Node::Mul(Box::new(lhs), Box::new(rhs)), at);
            } else if self.eat('/') {
                let rhs = self.power()?;
                lhs = self.mk(Node::Div(Box::new(lhs), Box::new(rhs)), at);
            } else if self.starts_atom() {
                let rhs = self.power()?;
                lhs = self.mk(Node::Mul(Box::new(lhs), Box::new(rhs)), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let at = self.here();
        if self.eat('^') {
            let k = self.nat()?;
            return Ok(self.mk(Node::Pow(Box::new(base), k), at));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        let Some(tok) = self.peek().cloned() else { return self.expected("an operand") };
        match tok {
            Tok::Nat(n) => {
                self.pos += 1;
                Ok(self.mk(Node::Nat(n), at))
            }
            Tok::Sym('-') => {
                self.pos += 1;
                let e = self.power()?;
                Ok(self.mk(Node::Neg(Box::new(e)), at))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.top()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(':') => {
                if self.mode != Mode::State {
                    return self.err("normal ordering is only available for states");
                }
                self.pos += 1;
                let mut factors = vec![self.power()?];
                loop {
                    if factors.len() >= 2 && self.eat(':') {
                        break;
                    }
                    if self.peek().is_none() {
                        return self.expected("':'");
                    }
                    factors.push(self.power()?);
                }
                Ok(self.mk(Node::Wick(factors), at))
            }
            Tok::Ident(name) if name == "D" && self.mode == Mode::State => {
                self.pos += 1;
                let k = if self.eat('^') { self.nat()? } else { 1 };
                let inner = self.power()?;
                Ok(self.mk(Node::Deriv(k, Box::new(inner)), at))
            }
            Tok::Ident(name) if name == "sqrt6" => {
                self.pos += 1;
                Ok(self.mk(Node::Sqrt6, at))
            }
            Tok::Ident(name) if BUILTINS.contains(&name.as_str()) => {
                self.pos += 1;
                let mut index = Vec::new();
                if self.eat('[') {
                    index.push(self.int()?);
                    while self.eat(',') {
                        index.push(self.int()?);
                    }
                    self.expect(']')?;
                }
                self.check_builtin(&name, index.len(), at)?;
                Ok(self.mk(Node::Builtin(name, index), at))
            }
            Tok::Ident(name) => {
                if !self.known_name(&name) {
                    return self.err(format!("unknown identifier '{name}'"));
                }
                self.pos += 1;
                Ok(self.mk(Node::Name(name), at))
            }
            Tok::Sym(_) => self.expected("an operand"),
        }
    }

    fn known_name(&self, name: &str) -> bool {
        match self.mode {
            Mode::State => self.ctx.alg.index_of(name).is_some(),
            Mode::Weyl => var_index(name, &["x", "d", "e"], self.ctx.n).is_some(),
            Mode::Poly => var_index(name, &["xp", "x"], self.ctx.n).is_some(),
        }
    }

    fn check_builtin(&self, name: &str, arity: usize, at: (usize, usize)) -> Result<()> {
        let fail = |msg: String| Err(Error::Parse { line: at.0, col: at.1, msg });
        let allowed = match self.mode {
            Mode::State => name != "tau",
            Mode::Weyl => name == "omega" || name == "tau",
            Mode::Poly => false,
        };
        if !allowed {
            return fail(format!("builtin '{name}' is not available here"));
        }
        let ok = match name {
            "L_S" | "W_S" | "theta" | "phi" | "tau" => arity == 1,
            "L_H" | "W_H" | "L_E" | "W_E" => arity <= 1,
            "Lalpha" => arity == 0,
            _ => arity == self.ctx.n,
        };
        if ok {
            Ok(())
        } else {
            fail(format!("wrong number of indices for '{name}'"))
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Nat(n) => format!("'{n}'"),
        Tok::Sym(c) => format!("'{c}'"),
    }
}

/// `x3` → `("x", 2)`; prefixes are tried in order.
fn var_index(name: &str, prefixes: &[&'static str], n: usize) -> Option<(&'static str, usize)> {
    for p in prefixes {
        if let Some(rest) = name.strip_prefix(p) {
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 && i <= n && !rest.starts_with('0') {
                    return Some((p, i - 1));
                }
            }
        }
    }
    None
}

pub fn parse(text: &str, ctx: &Context, mode: Mode) -> Result<Expr> {
    let toks = lex(text)?;
    let end = text.lines().enumerate().last().map(|(i, l)| (i + 1, l.chars().count() + 1)).unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, ctx, mode, end };
    if p.peek().is_none() {
        return p.expected("an expression");
    }
    let e = p.top()?;
    if p.peek().is_some() {
        return p.expected("an operator or end of input");
    }
    Ok(e)
}

/// Ring operations the elaborator needs from each target.
trait Value: Sized + Clone {
    fn scalar(ctx: &Context, c: Scalar) -> Self;
    fn to_scalar(&self) -> Option<Scalar>;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn mul(&self, o: &Self) -> std::result::Result<Self, String>;
    fn name(ctx: &Context, name: &str) -> Self;
    fn builtin(ctx: &Context, name: &str, index: &[i64]) -> Result<Self>;
    fn deriv(&self, _k: u32) -> std::result::Result<Self, String> {
        Err("derivatives are only available for states".into())
    }
    fn wick(&self, _o: &Self) -> Result<Self> {
        Err(Error::Unsupported("normal ordering is only available for states".into()))
    }
    fn circ(&self, _o: &Self, _n: i64) -> Result<Self> {
        Err(Error::Unsupported("'circ' is only available for states".into()))
    }
}

impl Value for State {
    fn scalar(ctx: &Context, c: Scalar) -> Self {
        State::scalar(&ctx.alg, c)
    }
    fn to_scalar(&self) -> Option<Scalar> {
        self.as_scalar()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Scalar) -> Self {
        State::scale(self, c)
    }
    fn mul(&self, o: &Self) -> std::result::Result<Self, String> {
        match (self.as_scalar(), o.as_scalar()) {
            (Some(c), _) => Ok(o.scale(&c)),
            (_, Some(c)) => Ok(self.scale(&c)),
            _ => Err("product of two non-scalar states; use ': … :' for normal ordering".into()),
        }
    }
    fn name(ctx: &Context, name: &str) -> Self {
        State::generator(&ctx.alg, ctx.alg.index_of(name).expect("checked by the parser"))
    }
    fn builtin(ctx: &Context, name: &str, index: &[i64]) -> Result<Self> {
        let alg = &ctx.alg;
        let slot = |what: &'static str, len: usize| -> Result<usize> {
            let i = index.first().copied().unwrap_or(1);
            if i < 1 || i as usize > len {
                return Err(Error::IndexOutOfRange { what, index: i.max(0) as usize, len });
            }
            Ok(i as usize - 1)
        };
        let action = || ctx.action.as_ref().ok_or_else(|| Error::InvalidInput(format!("'{name}' needs an action")));
        match name {
            "L_S" | "W_S" => {
                let (l, w) = build_ls_ws(alg, slot("βγ pair", alg.bg_pairs())?)?;
                Ok(if name == "L_S" { l } else { w })
            }
            "L_H" | "W_H" => {
                let (l, w) = build_heis_lw(alg, slot("Heisenberg field", alg.heis_levels().len())?)?;
                Ok(if name == "L_H" { l } else { w })
            }
            "L_E" | "W_E" => {
                let (l, w) = build_bc_lw(alg, slot("bc pair", alg.bc_pairs())?)?;
                Ok(if name == "L_E" { l } else { w })
            }
            "theta" => {
                let act = action()?;
                act.theta(slot("action row", act.m())?)
            }
            "phi" => {
                let act = action()?;
                let basis = act.field_kernel();
                act.phi(&basis[slot("field kernel vector", basis.len())?])
            }
            "omega" => omega(alg, index),
            "Lalpha" => Ok(conformal_vector(alg, &ctx.alpha_or_default())?.0),
            _ => unreachable!("builtin checked by the parser"),
        }
    }
    fn deriv(&self, k: u32) -> std::result::Result<Self, String> {
        Ok(self.derive_n(k))
    }
    fn wick(&self, o: &Self) -> Result<Self> {
        wick(self, o)
    }
    fn circ(&self, o: &Self, n: i64) -> Result<Self> {
        if n < -1 {
            return Err(Error::InvalidInput(format!("circle product index {n} below -1")));
        }
        circle(self, o, n)
    }
}

impl Value for WeylElement {
    fn scalar(ctx: &Context, c: Scalar) -> Self {
        WeylElement::constant(ctx.n, c)
    }
    fn to_scalar(&self) -> Option<Scalar> {
        self.as_scalar()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Scalar) -> Self {
        WeylElement::scale(self, c)
    }
    fn mul(&self, o: &Self) -> std::result::Result<Self, String> {
        Ok(self.product(o))
    }
    fn name(ctx: &Context, name: &str) -> Self {
        match var_index(name, &["x", "d", "e"], ctx.n).expect("checked by the parser") {
            ("x", i) => WeylElement::x(ctx.n, i),
            ("d", i) => WeylElement::d(ctx.n, i),
            (_, i) => WeylElement::euler(ctx.n, i),
        }
    }
    fn builtin(ctx: &Context, name: &str, index: &[i64]) -> Result<Self> {
        match name {
            "omega" => Ok(WeylElement::lattice(index)),
            _ => {
                let act = ctx.action.as_ref().ok_or_else(|| Error::InvalidInput("'tau' needs an action".into()))?;
                let i = index[0];
                if i < 1 || i as usize > act.m() {
                    return Err(Error::IndexOutOfRange { what: "action row", index: i.max(0) as usize, len: act.m() });
                }
                build_tau(act.matrix(), i as usize - 1)
            }
        }
    }
}

impl Value for PolyElement {
    fn scalar(ctx: &Context, c: Scalar) -> Self {
        PolyElement::constant(ctx.n, c)
    }
    fn to_scalar(&self) -> Option<Scalar> {
        match self.degree() {
            None => Some(Scalar::zero()),
            Some(0) => Some(self.poly().coeff(&vec![0; 2 * self.n()])),
            _ => None,
        }
    }
    fn add(&self, o: &Self) -> Self {
        PolyElement::add(self, o)
    }
    fn neg(&self) -> Self {
        PolyElement::scale(self, &Scalar::from_int(-1))
    }
    fn scale(&self, c: &Scalar) -> Self {
        PolyElement::scale(self, c)
    }
    fn mul(&self, o: &Self) -> std::result::Result<Self, String> {
        Ok(PolyElement::mul(self, o))
    }
    fn name(ctx: &Context, name: &str) -> Self {
        match var_index(name, &["xp", "x"], ctx.n).expect("checked by the parser") {
            ("xp", i) => PolyElement::xp(ctx.n, i),
            (_, i) => PolyElement::x(ctx.n, i),
        }
    }
    fn builtin(_: &Context, name: &str, _: &[i64]) -> Result<Self> {
        Err(Error::Unsupported(format!("builtin '{name}' in polynomial mode")))
    }
}

impl Expr {
    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col, msg: msg.into() })
    }

    /// Engine errors are reported at the position of the offending node.
    fn locate<T>(&self, r: Result<T>) -> Result<T> {
        r.or_else(|e| match e {
            Error::Parse { .. } => Err(e),
            other => self.fail(other.to_string()),
        })
    }

    fn eval<V: Value>(&self, ctx: &Context) -> Result<V> {
        Ok(match &self.node {
            Node::Nat(n) => V::scalar(ctx, Scalar::from_bigint(n.clone())),
            Node::Sqrt6 => V::scalar(ctx, Scalar::sqrt6()),
            Node::Name(s) => V::name(ctx, s),
            Node::Builtin(s, idx) => self.locate(V::builtin(ctx, s, idx))?,
            Node::Deriv(k, e) => {
                let v: V = e.eval(ctx)?;
                v.deriv(*k).or_else(|m| self.fail(m))?
            }
            Node::Wick(fs) => {
                let vals = fs.iter().map(|f| f.eval::<V>(ctx)).collect::<Result<Vec<_>>>()?;
                let mut acc = vals.last().expect("two or more factors").clone();
                for v in vals.iter().rev().skip(1) {
                    acc = self.locate(v.wick(&acc))?;
                }
                acc
            }
            Node::Neg(e) => e.eval::<V>(ctx)?.neg(),
            Node::Add(a, b) => a.eval::<V>(ctx)?.add(&b.eval(ctx)?),
            Node::Sub(a, b) => a.eval::<V>(ctx)?.add(&b.eval::<V>(ctx)?.neg()),
            Node::Mul(a, b) => {
                let (x, y): (V, V) = (a.eval(ctx)?, b.eval(ctx)?);
                x.mul(&y).or_else(|m| self.fail(m))?
            }
            Node::Div(a, b) => {
                let x: V = a.eval(ctx)?;
                let y: V = b.eval(ctx)?;
                let Some(c) = y.to_scalar() else { return self.fail("division by a non-scalar") };
                let Some(inv) = c.inverse() else { return self.fail("division by zero") };
                x.scale(&inv)
            }
            Node::Pow(a, k) => {
                let x: V = a.eval(ctx)?;
                let mut acc = V::scalar(ctx, Scalar::one());
                for _ in 0..*k {
                    acc = acc.mul(&x).or_else(|m| self.fail(m))?;
                }
                acc
            }
            Node::Circ(a, n, b) => {
                let (x, y): (V, V) = (a.eval(ctx)?, b.eval(ctx)?);
                self.locate(x.circ(&y, *n))?
            }
        })
    }

    pub fn to_state(&self, ctx: &Context) -> Result<State> {
        self.eval(ctx)
    }

    pub fn to_weyl(&self, ctx: &Context) -> Result<WeylElement> {
        self.eval(ctx)
    }

    pub fn to_poly(&self, ctx: &Context) -> Result<PolyElement> {
        self.eval(ctx)
    }

}

//! Test-function corpus and a small arithmetic-expression parser so the
//! command line can accept user-defined functions.
//!
//! Grammar, loosest to tightest: `+ -`, then `* /`, then unary minus, then
//! right-associative `^`; calls `exp`, `abs`, `sign`, `sinh` (one argument)
//! and `min`, `max` (two). `sign(0) = 0`, so `x^2*sign(x)` is exactly odd.

use std::fmt;

use crate::error::{Error, Result};

/// A function the tooling can evaluate: a named builtin or a parsed
/// expression.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Exp,
    /// `c3·x³ + c2·x² + c1·x + c0`, coefficients highest degree first.
    Cubic([f64; 4]),
    /// `x²·sign(x)`.
    X2Sign,
    /// `max(x, 0)³`.
    XPlus3,
    Sinh,
    /// `x⁴/4` on `[0, 1]`, pulled back to `[-1, 1]`: `((x+1)/2)⁴ / 4`.
    Quartic,
    Expr(Expr),
}

impl FunctionSpec {
    /// Accepts a builtin name (`exp`, `x2sign`, `xplus3`, `sinh`, `quartic`,
    /// `cubic(c3,c2,c1,c0)`) or an arbitrary expression in `x`.
    pub fn parse(src: &str) -> Result<Self> {
        let trimmed = src.trim();
        match trimmed {
            "exp" => return Ok(FunctionSpec::Exp),
            "x2sign" => return Ok(FunctionSpec::X2Sign),
            "xplus3" => return Ok(FunctionSpec::XPlus3),
            "sinh" => return Ok(FunctionSpec::Sinh),
            "quartic" => return Ok(FunctionSpec::Quartic),
            _ => {}
        }
        if let Some(rest) = trimmed.strip_prefix("cubic(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| Error::Parse {
                offset: trimmed.len(),
                message: "missing ')' in cubic(c3,c2,c1,c0)".into(),
            })?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::Parse {
                    offset: 6,
                    message: "cubic needs exactly 4 coefficients".into(),
                });
            }
            let mut c = [0.0f64; 4];
            for (i, part) in parts.iter().enumerate() {
                c[i] = part.trim().parse().map_err(|_| Error::Parse {
                    offset: 6,
                    message: format!("bad coefficient '{part}'"),
                })?;
            }
            return Ok(FunctionSpec::Cubic(c));
        }
        Ok(FunctionSpec::Expr(Expr::parse(trimmed)?))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            FunctionSpec::Exp => Ok(x.exp()),
            FunctionSpec::Cubic(c) => Ok(((c[0] * x + c[1]) * x + c[2]) * x + c[3]),
            FunctionSpec::X2Sign => Ok(x * x * sign(x)),
            FunctionSpec::XPlus3 => Ok(x.max(0.0).powi(3)),
            FunctionSpec::Sinh => Ok(x.sinh()),
            FunctionSpec::Quartic => Ok(((x + 1.0) / 2.0).powi(4) / 4.0),
            FunctionSpec::Expr(e) => e.eval(x),
        }
    }

    /// Closure adapter; evaluation errors surface as NaN, which every
    /// consumer in this crate rejects with a non-finite-value error.
    pub fn evaluator(&self) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.eval(x).unwrap_or(f64::NAN)
    }

    pub fn describe(&self) -> String {
        match self {
            FunctionSpec::Exp => "exp(x)".into(),
            FunctionSpec::Cubic(c) => {
                format!("{}*x^3 + {}*x^2 + {}*x + {}", c[0], c[1], c[2], c[3])
            }
            FunctionSpec::X2Sign => "x^2*sign(x)".into(),
            FunctionSpec::XPlus3 => "max(x,0)^3".into(),
            FunctionSpec::Sinh => "sinh(x)".into(),
            FunctionSpec::Quartic => "((x+1)/2)^4/4".into(),
            FunctionSpec::Expr(e) => e.to_string(),
        }
    }
}

/// The six 3-monotone reference functions used throughout tests, examples
/// and the acceptance suite.
pub fn standard_corpus() -> Vec<(&'static str, FunctionSpec)> {
    vec![
        ("exp", FunctionSpec::Exp),
        ("cubic", FunctionSpec::Cubic([1.0, 0.0, 0.0, 0.0])),
        ("sinh", FunctionSpec::Sinh),
        ("x2sign", FunctionSpec::X2Sign),
        ("xplus3", FunctionSpec::XPlus3),
        ("quartic", FunctionSpec::Quartic),
    ]
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Call {
    Exp,
    Abs,
    Sign,
    Sinh,
    Min,
    Max,
}

impl Call {
    fn arity(self) -> usize {
        match self {
            Call::Min | Call::Max => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Call::Exp => "exp",
            Call::Abs => "abs",
            Call::Sign => "sign",
            Call::Sinh => "sinh",
            Call::Min => "min",
            Call::Max => "max",
        }
    }
}

/// Parsed expression over the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Call, Vec<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.expr()?;
        if parser.pos < parser.tokens.len() {
            let (offset, _) = parser.tokens[parser.pos];
            return Err(Error::Parse {
                offset,
                message: "unexpected trailing input".into(),
            });
        }
        Ok(expr)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = self.eval_inner(x)?;
        if !v.is_finite() {
            return Err(Error::EvalDomain(format!(
                "non-finite result evaluating {self} at x = {x}"
            )));
        }
        Ok(v)
    }

    fn eval_inner(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval_inner(x)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval_inner(x)?, r.eval_inner(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::EvalDomain(format!("division by zero at x = {x}")));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(c, args) => {
                let a = args[0].eval_inner(x)?;
                match c {
                    Call::Exp => a.exp(),
                    Call::Abs => a.abs(),
                    Call::Sign => sign(a),
                    Call::Sinh => a.sinh(),
                    Call::Min => a.min(args[1].eval_inner(x)?),
                    Call::Max => a.max(args[1].eval_inner(x)?),
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    /// Canonical fully-parenthesized form; `parse ∘ print` is the identity
    /// on parsed expressions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Call(c, args) => {
                write!(f, "{}(", c.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
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

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            ',' => {
                out.push((i, Token::Comma));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("bad number literal '{text}'"),
                })?;
                out.push((start, Token::Num(value)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(src[start..i].to_string())));
            }
            other => {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or_else(|| self.tokens.last().map(|(o, _)| o + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let offset = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Parse {
                offset,
                message: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            // exponent re-enters at unary, making ^ right-associative and
            // letting it bind tighter than a leading minus
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::Ident(name)) if name == "x" => Ok(Expr::Var),
            Some(Token::Ident(name)) => {
                let call = match name.as_str() {
                    "exp" => Call::Exp,
                    "abs" => Call::Abs,
                    "sign" => Call::Sign,
                    "sinh" => Call::Sinh,
                    "min" => Call::Min,
                    "max" => Call::Max,
                    _ => {
                        return Err(Error::Parse {
                            offset,
                            message: format!("unknown identifier '{name}'"),
                        })
                    }
                };
                self.expect(Token::LParen, "'(' after function name")?;
                let mut args = vec![self.expr()?];
                while matches!(self.peek(), Some(Token::Comma)) {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Token::RParen, "')'")?;
                if args.len() != call.arity() {
                    return Err(Error::Parse {
                        offset,
                        message: format!(
                            "{} takes {} argument(s), got {}",
                            call.name(),
                            call.arity(),
                            args.len()
                        ),
                    });
                }
                Ok(Expr::Call(call, args))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(Error::Parse {
                offset,
                message: "expected a number, 'x', a call, or '('".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(src: &str, x: f64) -> f64 {
        Expr::parse(src).unwrap().eval(x).unwrap()
    }

    #[test]
    fn basic_powers() {
        assert_eq!(eval("x^3", 2.0), 8.0);
        assert_eq!(eval("x^2*sign(x)", -0.5), -0.25);
        assert_eq!(eval("abs(x)^3", -2.0), 8.0);
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("2*x^2", 3.0), 18.0);
        assert_eq!(eval("-x^2", 3.0), -9.0);
        assert_eq!(eval("x^2^3", 1.2), 1.2f64.powi(8));
        assert_eq!(eval("2^-2", 0.0), 0.25);
        assert_eq!(eval("1+2*3", 0.0), 7.0);
        assert_eq!(eval("(1+2)*3", 0.0), 9.0);
    }

    #[test]
    fn calls() {
        assert_eq!(eval("exp(x)", 0.0), 1.0);
        assert_eq!(eval("sign(x)", 0.0), 0.0);
        assert_eq!(eval("min(x, 2)", 5.0), 2.0);
        assert_eq!(eval("max(x, 0)^3", -1.0), 0.0);
        assert_eq!(eval("sinh(x)", 0.0), 0.0);
    }

    #[test]
    fn syntax_error_offsets() {
        match Expr::parse("2+*3") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Expr::parse("x + y") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Expr::parse("min(x)") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e = Expr::parse("1/x").unwrap();
        assert!(matches!(e.eval(0.0), Err(Error::EvalDomain(_))));
        assert_eq!(e.eval(2.0).unwrap(), 0.5);
    }

    #[test]
    fn overflow_is_reported() {
        let e = Expr::parse("exp(x^x)").unwrap();
        assert!(matches!(e.eval(1000.0), Err(Error::EvalDomain(_))));
    }

    #[test]
    fn builtin_and_parsed_exp_agree() {
        let spec = FunctionSpec::parse("exp(x)").unwrap();
        for i in 0..=1000 {
            let x = -1.0 + 0.002 * i as f64;
            assert!((spec.eval(x).unwrap() - x.exp()).abs() <= 1e-15 * x.exp());
        }
    }

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(FunctionSpec::parse("exp").unwrap(), FunctionSpec::Exp);
        assert_eq!(
            FunctionSpec::parse("cubic(1, 0, -2, 0.5)").unwrap(),
            FunctionSpec::Cubic([1.0, 0.0, -2.0, 0.5])
        );
        assert_eq!(
            FunctionSpec::parse("quartic").unwrap(),
            FunctionSpec::Quartic
        );
        // not a builtin name: parsed as an expression
        assert!(matches!(
            FunctionSpec::parse("x^3").unwrap(),
            FunctionSpec::Expr(_)
        ));
    }

    #[test]
    fn corpus_members_are_3monotone() {
        for (name, spec) in standard_corpus() {
            let f = spec.evaluator();
            assert!(
                crate::verify::check_function_3monotone(f, (-1.0, 1.0), 256, 7),
                "{name} failed the screen"
            );
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![(0.0f64..10.0).prop_map(Expr::Num), Just(Expr::Var),];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0..4usize).prop_map(|(l, r, op)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][op];
                    Expr::Bin(op, Box::new(l), Box::new(r))
                }),
                inner.clone().prop_map(|e| Expr::Call(Call::Abs, vec![e])),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Call::Max, vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_fixpoint(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = Expr::parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e);
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}

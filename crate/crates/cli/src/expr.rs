//! Expression language for functions, dual numbers, forms and symbols.
//!
//! Precedence, tightest first: `^`, unary `-`, `*` and `/`, wedge (`∧` or
//! `/\`), then `+` and `-`. All binary operators associate to the left.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DBase {
    /// `d_Q`: absolute differentials.
    Q,
    /// `d_k`: relative to the algebraic ground field of the tower.
    K,
    /// `d_C`: relative to the whole tower.
    C,
    /// `d_Ceps`: relative to the whole tower with `ε` adjoined.
    CEps,
}

impl DBase {
    fn name(self) -> &'static str {
        match self {
            DBase::Q => "d_Q",
            DBase::K => "d_k",
            DBase::C => "d_C",
            DBase::CEps => "d_Ceps",
        }
    }

    fn from_name(s: &str) -> Option<DBase> {
        Some(match s {
            "d_Q" => DBase::Q,
            "d_k" => DBase::K,
            "d_C" => DBase::C,
            "d_Ceps" => DBase::CEps,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Ident(String),
    Eps,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Wedge(Box<Expr>, Box<Expr>),
    D(DBase, Box<Expr>),
    Symbol(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { line: usize, col: usize, msg: String },
    UnknownIdentifier { line: usize, col: usize, name: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, msg } => write!(f, "{line}:{col}: syntax error: {msg}"),
            ParseError::UnknownIdentifier { line, col, name } => write!(f, "{line}:{col}: unknown identifier `{name}`"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Wedge => f.write_str("wedge"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut step = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' if chars.get(i + 1) == Some(&'\\') => {
                step = 2;
                Some(Tok::Wedge)
            }
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '∧' => Some(Tok::Wedge),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            c if c.is_ascii_digit() => {
                let start = i;
                while i + step < chars.len() && chars[i + step].is_ascii_digit() {
                    step += 1;
                }
                let s: String = chars[start..start + step].iter().collect();
                let n = s.parse::<i64>().map_err(|_| ParseError::Syntax {
                    line: l0,
                    col: c0,
                    msg: format!("integer literal {s} is too large"),
                })?;
                Some(Tok::Int(n))
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i + step < chars.len() && (chars[i + step].is_alphanumeric() || chars[i + step] == '_') {
                    step += 1;
                }
                Some(Tok::Ident(chars[start..start + step].iter().collect()))
            }
            other => {
                return Err(ParseError::Syntax { line: l0, col: c0, msg: format!("unexpected character `{other}`") });
            }
        };
        if let Some(tok) = tok {
            out.push(Spanned { tok, line: l0, col: c0 });
        }
        i += step;
        col += step;
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    known: Option<&'a dyn Fn(&str) -> bool>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: String) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError::Syntax { line: t.line, col: t.col, msg })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.wedge()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.wedge()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.wedge()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn wedge(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Wedge {
            self.bump();
            lhs = Expr::Wedge(Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let n = match *self.peek() {
            Tok::Int(n) => n,
            _ => return self.err(format!("expected an integer exponent, found {}", self.peek())),
        };
        self.bump();
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -n } else { n })
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        let (line, col) = (t.line, t.col);
        match t.tok.clone() {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrace => {
                let mut entries = vec![self.sum()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    entries.push(self.sum()?);
                }
                self.expect(Tok::RBrace)?;
                Ok(Expr::Symbol(entries))
            }
            Tok::Ident(name) => {
                if let Some(base) = DBase::from_name(&name) {
                    self.expect(Tok::LParen)?;
                    let e = self.sum()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Expr::D(base, Box::new(e)));
                }
                if name == "eps" || name == "ε" {
                    return Ok(Expr::Eps);
                }
                if let Some(known) = self.known {
                    if !known(&name) {
                        return Err(ParseError::UnknownIdentifier { line, col, name });
                    }
                }
                Ok(Expr::Ident(name))
            }
            other => {
                self.pos -= usize::from(other != Tok::End);
                self.err(format!("unexpected {other}"))
            }
        }
    }
}

fn parse_with(text: &str, known: Option<&dyn Fn(&str) -> bool>) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, known };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {} after expression", p.peek()));
    }
    Ok(e)
}

/// Parses without resolving identifiers.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, None)
}

/// Parses, rejecting identifiers for which `known` is false.
pub fn parse_resolved(text: &str, known: &dyn Fn(&str) -> bool) -> Result<Expr, ParseError> {
    parse_with(text, Some(known))
}

const P_SUM: u8 = 1;
const P_WEDGE: u8 = 2;
const P_PRODUCT: u8 = 3;
const P_UNARY: u8 = 4;
const P_POWER: u8 = 5;
const P_ATOM: u8 = 6;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => P_SUM,
            Expr::Wedge(..) => P_WEDGE,
            Expr::Mul(..) | Expr::Div(..) => P_PRODUCT,
            Expr::Neg(_) => P_UNARY,
            Expr::Pow(..) => P_POWER,
            _ => P_ATOM,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        let bin = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, p: u8| {
            a.write(f, p)?;
            f.write_str(op)?;
            b.write(f, p + 1)
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ident(s) => f.write_str(s),
            Expr::Eps => f.write_str("eps"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, P_UNARY)
            }
            Expr::Add(a, b) => bin(f, a, " + ", b, P_SUM),
            Expr::Sub(a, b) => bin(f, a, " - ", b, P_SUM),
            Expr::Wedge(a, b) => bin(f, a, " ∧ ", b, P_WEDGE),
            Expr::Mul(a, b) => bin(f, a, "*", b, P_PRODUCT),
            Expr::Div(a, b) => bin(f, a, "/", b, P_PRODUCT),
            Expr::Pow(a, e) => {
                a.write(f, P_ATOM)?;
                write!(f, "^{e}")
            }
            Expr::D(base, a) => {
                write!(f, "{}(", base.name())?;
                a.write(f, 0)?;
                f.write_str(")")
            }
            Expr::Symbol(es) => {
                f.write_str("{")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    e.write(f, 0)?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Box<Expr> {
        Box::new(Expr::Ident(s.into()))
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("-x^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(id("x"), 2))));
        assert_eq!(parse("a*b + c").unwrap(), Expr::Add(Box::new(Expr::Mul(id("a"), id("b"))), id("c")));
        let w = parse("d_C(g/f) ∧ d_C(y)/y").unwrap();
        let Expr::Wedge(l, r) = w else { panic!("not a wedge") };
        assert!(matches!(*l, Expr::D(DBase::C, _)));
        assert!(matches!(*r, Expr::Div(..)));
        assert_eq!(parse("a /\\ b").unwrap(), parse("a ∧ b").unwrap());
        assert_eq!(parse("x^-2").unwrap(), parse("x^(-2)").unwrap());
    }

    #[test]
    fn symbols() {
        let s = parse("{1 + eps*(1/x), y}").unwrap();
        let Expr::Symbol(es) = s else { panic!("not a symbol") };
        assert_eq!(es.len(), 2);
        assert!(matches!(parse("{x, 1-x}").unwrap(), Expr::Symbol(v) if v.len() == 2));
    }

    #[test]
    fn diagnostics() {
        assert_eq!(parse("x +\n  * y"), Err(ParseError::Syntax { line: 2, col: 3, msg: "unexpected `*`".into() }));
        assert!(matches!(parse("(x"), Err(ParseError::Syntax { line: 1, col: 3, .. })));
        assert!(matches!(parse("x ? y"), Err(ParseError::Syntax { col: 3, .. })));
        let known = |s: &str| s == "x";
        assert_eq!(
            parse_resolved("x + q", &known),
            Err(ParseError::UnknownIdentifier { line: 1, col: 5, name: "q".into() })
        );
    }

    #[test]
    fn round_trip() {
        for s in [
            "a - (b - c)",
            "-(x + 1)^3",
            "(-x)^2",
            "a/(b*c)",
            "a*-b",
            "d_Q(x*y) ∧ d_k(1/x) + d_Ceps(eps*x)",
            "(a + b) ∧ c",
            "a ∧ (b ∧ c)",
            "{1 + eps*x^-1, 1 - x}",
            "--x",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} printed as {e}");
        }
    }
}

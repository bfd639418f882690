//! Tokenizer and parser for the small expression language shared by rule
//! right-hand sides, parameter values, Gram entries and symbol expressions:
//! signed sums of juxtaposed factors, where a factor is a nonnegative
//! rational, an identifier (optionally starred) or a parenthesized sum.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diag::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Eq,
    Comma,
    Semi,
    Colon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits one line (comment already removed) into tokens. `col0` is the
/// 1-based column of the first character of `text`.
pub fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let span = Span::new(line, col0 + k);
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let num: BigInt = chars[start..k].iter().collect::<String>().parse().expect("digits");
            let mut den = BigInt::from(1);
            if k < chars.len() && chars[k] == '/' {
                let ds = k + 1;
                let mut de = ds;
                while de < chars.len() && chars[de].is_ascii_digit() {
                    de += 1;
                }
                if de == ds {
                    return Err(Diagnostic::new(Span::new(line, col0 + k), "syntax error: expected a denominator after `/`"));
                }
                den = chars[ds..de].iter().collect::<String>().parse().expect("digits");
                if den == BigInt::from(0) {
                    return Err(Diagnostic::new(span, "syntax error: zero denominator"));
                }
                k = de;
            }
            out.push(Token { tok: Tok::Num(BigRational::new(num, den)), span });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..k].iter().collect()), span });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            other => return Err(Diagnostic::new(span, format!("syntax error: unexpected character `{other}`"))),
        };
        out.push(Token { tok, span });
        k += 1;
    }
    Ok(out)
}

/// `t₁ ± t₂ ± ⋯`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Num(BigRational),
    Ident { name: String, star: bool, span: Span },
    Group(Expr),
}

impl Expr {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            match (k, t.negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let parts: Vec<String> = t.factors.iter().map(Factor::render).collect();
            out.push_str(&parts.join(" "));
        }
        out
    }
}

impl Factor {
    fn render(&self) -> String {
        match self {
            Factor::Num(r) => r.to_string(),
            Factor::Ident { name, star: true, .. } => format!("{name}*"),
            Factor::Ident { name, .. } => name.clone(),
            Factor::Group(e) => format!("({})", e.render()),
        }
    }
}

/// Recursive-descent parser over a token slice.
pub struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    end: Span,
}

impl<'t> Parser<'t> {
    pub fn new(toks: &'t [Token], end: Span) -> Self {
        Parser { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn span(&self) -> Span {
        self.peek().map_or(self.end, |t| t.span)
    }

    pub fn bump(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| t.tok == *tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<Span, Diagnostic> {
        let span = self.span();
        if self.eat(tok) {
            Ok(span)
        } else {
            Err(self.unexpected(what))
        }
    }

    pub fn unexpected(&self, what: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::new(t.span, format!("syntax error: expected {what}, found {}", describe(&t.tok))),
            None => Diagnostic::new(self.end, format!("syntax error: expected {what}, found end of line")),
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Span), Diagnostic> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(name), span }) => {
                self.pos += 1;
                Ok((name.clone(), *span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub fn finish(&self) -> Result<(), Diagnostic> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    /// Parses a signed sum; stops at `,`, `;`, `)` or the end.
    pub fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        let mut terms = Vec::new();
        let mut negative = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            let factors = self.factors()?;
            terms.push(Term { negative, factors });
            if self.eat(&Tok::Plus) {
                negative = false;
            } else if self.eat(&Tok::Minus) {
                negative = true;
            } else {
                break;
            }
        }
        Ok(Expr { terms, span })
    }

    fn factors(&mut self) -> Result<Vec<Factor>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Num(r)) => {
                    out.push(Factor::Num(r.clone()));
                    self.pos += 1;
                }
                Some(Tok::Ident(name)) => {
                    let span = self.span();
                    let name = name.clone();
                    self.pos += 1;
                    let star = self.eat(&Tok::Star);
                    out.push(Factor::Ident { name, star, span });
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    out.push(Factor::Group(inner));
                }
                _ => break,
            }
        }
        if out.is_empty() {
            return Err(self.unexpected("a number, name or `(`"));
        }
        Ok(out)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(r) => format!("number `{r}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Colon => "`:`".into(),
    }
}

/// Parses a whole line as one expression.
pub fn parse_expr(text: &str, line: usize, col0: usize) -> Result<Expr, Diagnostic> {
    let toks = tokenize(text, line, col0)?;
    let end = Span::new(line, col0 + text.chars().count());
    let mut p = Parser::new(&toks, end);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

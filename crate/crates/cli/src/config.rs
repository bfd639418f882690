//! Model files: a line-oriented format with `[algebra]`, `[params]`,
//! `[gram]`, `[truncation]` and `[ccr]` sections.
//!
//! ```text
//! [algebra]
//! generators = z1, z2
//! rule: z2 z1 = q z1 z2
//!
//! [params]
//! q = 2
//!
//! [gram]
//! preset = explicit
//! weight: default = 1
//! ```
//!
//! Parsing is syntactic and total: every problem becomes a located
//! diagnostic. Name resolution and algebraic checks happen in `build`.

use std::fmt::Write as _;

use crate::diag::{Diagnostic, Span};
use crate::expr::{tokenize, Expr, Parser, Tok};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Bargmann,
    QBargmann,
    Explicit,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Bargmann => "bargmann",
            Preset::QBargmann => "q-bargmann",
            Preset::Explicit => "explicit",
        }
    }

    fn parse(s: &str) -> Option<Preset> {
        match s {
            "bargmann" => Some(Preset::Bargmann),
            "q-bargmann" => Some(Preset::QBargmann),
            "explicit" => Some(Preset::Explicit),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDecl {
    pub hi: (String, Span),
    pub lo: (String, Span),
    pub rhs: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamDecl {
    pub name: String,
    pub value: Expr,
    pub span: Span,
}

/// Which monomials a `weight:` line applies to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightTarget {
    /// Generator names in order; empty for the unit `1`.
    Monomial(Vec<(String, Span)>),
    /// Every monomial without an explicit weight.
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDecl {
    pub target: WeightTarget,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecl {
    pub degree: usize,
    pub rows: Vec<Vec<Expr>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setting {
    pub value: usize,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelConfig {
    pub generators: Vec<(String, Span)>,
    pub generators_span: Option<Span>,
    pub rules: Vec<RuleDecl>,
    pub params: Vec<ParamDecl>,
    pub preset: Option<(Preset, Span)>,
    pub weights: Vec<WeightDecl>,
    pub blocks: Vec<BlockDecl>,
    pub degree: Option<Setting>,
    pub dmax: Option<Setting>,
    pub table_degree: Option<Setting>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Algebra,
    Params,
    Gram,
    Truncation,
    Ccr,
}

impl Section {
    fn parse(s: &str) -> Option<Section> {
        match s {
            "algebra" => Some(Section::Algebra),
            "params" => Some(Section::Params),
            "gram" => Some(Section::Gram),
            "truncation" => Some(Section::Truncation),
            "ccr" => Some(Section::Ccr),
            _ => None,
        }
    }
}

/// Parses model text into a configuration, or every syntax diagnostic found.
pub fn parse_model(text: &str) -> Result<ModelConfig, Vec<Diagnostic>> {
    let mut cfg = ModelConfig::default();
    let mut diags = Vec::new();
    let mut section: Option<Section> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let col0 = content.chars().count() - trimmed.chars().count() + 1;
        let trimmed = trimmed.trim_end();
        if let Some(rest) = trimmed.strip_prefix('[') {
            match rest.strip_suffix(']').map(str::trim).and_then(Section::parse) {
                Some(s) => section = Some(s),
                None => diags.push(Diagnostic::new(
                    Span::new(line, col0),
                    format!("syntax error: unknown section header `{trimmed}`"),
                )),
            }
            continue;
        }
        let Some(sec) = section else {
            diags.push(Diagnostic::new(Span::new(line, col0), "syntax error: content before the first section header"));
            continue;
        };
        if let Err(d) = parse_line(&mut cfg, sec, trimmed, line, col0) {
            diags.push(d);
        }
    }
    if diags.is_empty() {
        Ok(cfg)
    } else {
        Err(diags)
    }
}

fn parse_line(cfg: &mut ModelConfig, sec: Section, text: &str, line: usize, col0: usize) -> Result<(), Diagnostic> {
    let span = Span::new(line, col0);
    // presets contain `-`, so take that value verbatim
    if sec == Section::Gram {
        if let Some(rest) = text.strip_prefix("preset") {
            if let Some(value) = rest.trim_start().strip_prefix('=') {
                let value = value.trim();
                let Some(p) = Preset::parse(value) else {
                    return Err(Diagnostic::new(
                        span,
                        format!("unknown gram preset `{value}` (expected bargmann, q-bargmann or explicit)"),
                    ));
                };
                if cfg.preset.is_some() {
                    return Err(Diagnostic::new(span, "duplicate `preset`"));
                }
                cfg.preset = Some((p, span));
                return Ok(());
            }
        }
    }
    let toks = tokenize(text, line, col0)?;
    let end = Span::new(line, col0 + text.chars().count());
    let mut p = Parser::new(&toks, end);
    let (key, key_span) = p.ident("a setting name")?;
    match (sec, key.as_str()) {
        (Section::Algebra, "generators") => {
            p.expect(&Tok::Eq, "`=`")?;
            if cfg.generators_span.is_some() {
                return Err(Diagnostic::new(key_span, "duplicate `generators`"));
            }
            let mut names = vec![p.ident("a generator name")?];
            while p.eat(&Tok::Comma) {
                names.push(p.ident("a generator name")?);
            }
            p.finish()?;
            cfg.generators = names;
            cfg.generators_span = Some(key_span);
        }
        (Section::Algebra, "rule") => {
            p.expect(&Tok::Colon, "`:` after `rule`")?;
            let hi = p.ident("a generator name")?;
            let lo = p.ident("a second generator name")?;
            p.expect(&Tok::Eq, "`=`")?;
            let rhs = p.expr()?;
            p.finish()?;
            cfg.rules.push(RuleDecl { hi, lo, rhs, span: key_span });
        }
        (Section::Params, name) => {
            p.expect(&Tok::Eq, "`=`")?;
            let value = p.expr()?;
            p.finish()?;
            if cfg.params.iter().any(|q| q.name == name) {
                return Err(Diagnostic::new(key_span, format!("duplicate parameter `{name}`")));
            }
            cfg.params.push(ParamDecl { name: name.to_string(), value, span: key_span });
        }
        (Section::Gram, "weight") => {
            p.expect(&Tok::Colon, "`:` after `weight`")?;
            let target = weight_target(&mut p)?;
            p.expect(&Tok::Eq, "`=`")?;
            let value = p.expr()?;
            p.finish()?;
            cfg.weights.push(WeightDecl { target, value, span: key_span });
        }
        (Section::Gram, "block") => {
            p.expect(&Tok::Colon, "`:` after `block`")?;
            let degree = number(&mut p, "a degree")?;
            p.expect(&Tok::Eq, "`=`")?;
            let mut rows = vec![Vec::new()];
            loop {
                rows.last_mut().expect("nonempty").push(p.expr()?);
                if p.eat(&Tok::Comma) {
                    continue;
                }
                if p.eat(&Tok::Semi) {
                    rows.push(Vec::new());
                    continue;
                }
                break;
            }
            p.finish()?;
            cfg.blocks.push(BlockDecl { degree, rows, span: key_span });
        }
        (Section::Truncation, "degree") => set(&mut cfg.degree, &mut p, key_span, "degree")?,
        (Section::Ccr, "dmax") => set(&mut cfg.dmax, &mut p, key_span, "dmax")?,
        (Section::Ccr, "table_degree") => set(&mut cfg.table_degree, &mut p, key_span, "table_degree")?,
        (_, other) => {
            return Err(Diagnostic::new(key_span, format!("syntax error: unknown setting `{other}` in this section")));
        }
    }
    Ok(())
}

fn weight_target(p: &mut Parser<'_>) -> Result<WeightTarget, Diagnostic> {
    match p.peek().map(|t| &t.tok) {
        Some(Tok::Ident(s)) if s == "default" => {
            p.bump();
            Ok(WeightTarget::Default)
        }
        Some(Tok::Num(r)) if *r == num_rational::BigRational::from_integer(1.into()) => {
            p.bump();
            Ok(WeightTarget::Monomial(Vec::new()))
        }
        _ => {
            let mut names = vec![p.ident("a monomial")?];
            while let Some(Tok::Ident(_)) = p.peek().map(|t| &t.tok) {
                names.push(p.ident("a generator name")?);
            }
            Ok(WeightTarget::Monomial(names))
        }
    }
}

fn number(p: &mut Parser<'_>, what: &str) -> Result<usize, Diagnostic> {
    let span = p.span();
    match p.peek().map(|t| &t.tok) {
        Some(Tok::Num(r)) if r.is_integer() => {
            p.bump();
            usize::try_from(r.to_integer()).map_err(|_| Diagnostic::new(span, format!("{what} is too large")))
        }
        _ => Err(p.unexpected(what)),
    }
}

fn set(slot: &mut Option<Setting>, p: &mut Parser<'_>, span: Span, name: &str) -> Result<(), Diagnostic> {
    p.expect(&Tok::Eq, "`=`")?;
    let value = number(p, "a nonnegative integer")?;
    p.finish()?;
    if slot.is_some() {
        return Err(Diagnostic::new(span, format!("duplicate `{name}`")));
    }
    *slot = Some(Setting { value, span });
    Ok(())
}

/// Canonical text for a configuration; `parse_model(render(c)) == c`.
pub fn render(cfg: &ModelConfig) -> String {
    let mut out = String::new();
    if cfg.generators_span.is_some() || !cfg.rules.is_empty() {
        out.push_str("[algebra]\n");
        if cfg.generators_span.is_some() {
            let names: Vec<&str> = cfg.generators.iter().map(|(n, _)| n.as_str()).collect();
            let _ = writeln!(out, "generators = {}", names.join(", "));
        }
        for r in &cfg.rules {
            let _ = writeln!(out, "rule: {} {} = {}", r.hi.0, r.lo.0, r.rhs.render());
        }
    }
    if !cfg.params.is_empty() {
        out.push_str("\n[params]\n");
        for p in &cfg.params {
            let _ = writeln!(out, "{} = {}", p.name, p.value.render());
        }
    }
    if cfg.preset.is_some() || !cfg.weights.is_empty() || !cfg.blocks.is_empty() {
        out.push_str("\n[gram]\n");
        if let Some((p, _)) = cfg.preset {
            let _ = writeln!(out, "preset = {}", p.name());
        }
        for w in &cfg.weights {
            let target = match &w.target {
                WeightTarget::Default => "default".to_string(),
                WeightTarget::Monomial(m) if m.is_empty() => "1".to_string(),
                WeightTarget::Monomial(m) => m.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(" "),
            };
            let _ = writeln!(out, "weight: {target} = {}", w.value.render());
        }
        for b in &cfg.blocks {
            let rows: Vec<String> =
                b.rows.iter().map(|r| r.iter().map(Expr::render).collect::<Vec<_>>().join(", ")).collect();
            let _ = writeln!(out, "block: {} = {}", b.degree, rows.join("; "));
        }
    }
    if let Some(d) = &cfg.degree {
        let _ = write!(out, "\n[truncation]\ndegree = {}\n", d.value);
    }
    if cfg.dmax.is_some() || cfg.table_degree.is_some() {
        out.push_str("\n[ccr]\n");
        if let Some(d) = &cfg.dmax {
            let _ = writeln!(out, "dmax = {}", d.value);
        }
        if let Some(t) = &cfg.table_degree {
            let _ = writeln!(out, "table_degree = {}", t.value);
        }
    }
    out.trim_start_matches('\n').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a sample
[algebra]
generators = a, b   # two of them
rule: b a = q a b + (1/2 - i) a a

[params]
q = -3/2

[gram]
preset = explicit
weight: 1 = 1
weight: a b = 2
weight: default = 1/2
block: 1 = 2, i; -i, 2

[truncation]
degree = 4

[ccr]
dmax = 2
table_degree = 6
";

    #[test]
    fn render_round_trip() {
        let cfg = parse_model(SAMPLE).unwrap();
        assert_eq!(cfg.generators.len(), 2);
        assert_eq!(cfg.rules.len(), 1);
        assert_eq!(cfg.blocks[0].rows.len(), 2);
        let again = parse_model(&render(&cfg)).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(render(&again), render(&cfg));
    }

    #[test]
    fn syntax_errors_are_located() {
        let errs = parse_model("[algebra]\ngenerators = a,\n[bogus]\nstray").unwrap_err();
        assert_eq!(errs.len(), 3);
        assert_eq!((errs[0].line, errs[0].col), (2, 16));
        assert_eq!(errs[1].line, 3);
        assert!(errs[2].message.contains("unknown setting `stray`"));
        let errs = parse_model("x = 1").unwrap_err();
        assert!(errs[0].message.contains("before the first section"));
        let errs = parse_model("[gram]\npreset = gaussian").unwrap_err();
        assert!(errs[0].message.contains("unknown gram preset"));
    }
}

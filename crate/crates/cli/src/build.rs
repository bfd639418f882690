//! Turns a parsed configuration into a [`Model`], resolving names and
//! reporting every semantic problem at its source position.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use tq_core::linalg::DenseMatrix;
use tq_core::monomial::monomials_of_degree;
use tq_core::presentation::{ConfluenceReport, PresentationError};
use tq_core::quantization::verify::star_chain;
use tq_core::quantization::GramData;
use tq_core::{Model, Monomial, NcPoly, Presentation, QuantError, Rule, Scalar, SymbolElem};

use crate::config::{ModelConfig, Preset, WeightTarget};
use crate::diag::{Diagnostic, Span};
use crate::expr::{Expr, Factor};

/// Names visible to expressions: generators and bound parameters.
pub struct Scope {
    gens: HashMap<String, usize>,
    params: BTreeMap<String, Scalar>,
}

/// One product term: coefficient and its generator factors in order.
pub struct EvalTerm {
    pub coefficient: Scalar,
    pub factors: Vec<(usize, bool, Span)>,
}

impl Scope {
    pub fn new(generators: &[String], params: BTreeMap<String, Scalar>) -> Self {
        let gens = generators.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Scope { gens, params }
    }

    pub fn param(&self, name: &str) -> Option<&Scalar> {
        self.params.get(name)
    }

    /// Value of an expression without generators.
    pub fn scalar(&self, e: &Expr) -> Result<Scalar, Diagnostic> {
        let mut acc = Scalar::zero();
        for t in self.terms(e)? {
            if let Some(&(_, _, span)) = t.factors.first() {
                return Err(Diagnostic::new(span, "a generator cannot appear in a scalar"));
            }
            acc += &t.coefficient;
        }
        Ok(acc)
    }

    pub fn terms(&self, e: &Expr) -> Result<Vec<EvalTerm>, Diagnostic> {
        e.terms
            .iter()
            .map(|t| {
                let mut coefficient = if t.negative { -Scalar::one() } else { Scalar::one() };
                let mut factors = Vec::new();
                for f in &t.factors {
                    match f {
                        Factor::Num(r) => coefficient = &coefficient * &Scalar::real(r.clone()),
                        Factor::Group(inner) => coefficient = &coefficient * &self.scalar(inner)?,
                        Factor::Ident { name, star, span } => {
                            if let Some(&g) = self.gens.get(name) {
                                factors.push((g, *star, *span));
                                continue;
                            }
                            let value = if name == "i" {
                                Scalar::i()
                            } else if let Some(v) = self.params.get(name) {
                                v.clone()
                            } else if factors.is_empty() {
                                return Err(Diagnostic::new(*span, format!("unbound parameter {name}")));
                            } else {
                                return Err(Diagnostic::new(*span, format!("unknown generator `{name}`")));
                            };
                            if *star {
                                return Err(Diagnostic::new(*span, format!("`{name}` is a scalar and cannot be starred")));
                            }
                            coefficient = &coefficient * &value;
                        }
                    }
                }
                Ok(EvalTerm { coefficient, factors })
            })
            .collect()
    }
}

/// A validated model plus the settings that commands need.
pub struct Built {
    pub model: Model,
    pub scope: Scope,
    pub degree: usize,
    pub dmax: usize,
    pub table_degree: usize,
    pub hbar_span: Span,
    pub dmax_span: Span,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub degree: Option<usize>,
    pub dmax: Option<usize>,
}

pub const DEFAULT_DMAX: usize = 2;
pub const DEFAULT_TABLE_DEGREE: usize = 10;
const RESERVED: [&str; 2] = ["i", "default"];

fn top() -> Span {
    Span::new(1, 1)
}

pub fn build(cfg: &ModelConfig, ov: Overrides) -> Result<Built, Vec<Diagnostic>> {
    let mut diags = Vec::new();

    let gen_span = cfg.generators_span.unwrap_or_else(top);
    let names: Vec<String> = cfg.generators.iter().map(|(n, _)| n.clone()).collect();
    if names.is_empty() {
        diags.push(Diagnostic::new(gen_span, "missing `generators` in [algebra]"));
    }
    for (k, (n, span)) in cfg.generators.iter().enumerate() {
        if RESERVED.contains(&n.as_str()) {
            diags.push(Diagnostic::new(*span, format!("`{n}` is reserved and cannot name a generator")));
        }
        if names[..k].contains(n) {
            diags.push(Diagnostic::new(*span, format!("duplicate generator `{n}`")));
        }
    }

    let empty = Scope::new(&[], BTreeMap::new());
    let mut params = BTreeMap::new();
    for p in &cfg.params {
        if RESERVED.contains(&p.name.as_str()) || names.contains(&p.name) {
            diags.push(Diagnostic::new(p.span, format!("parameter `{}` clashes with a generator or reserved name", p.name)));
            continue;
        }
        match empty.scalar(&p.value) {
            Ok(v) => {
                params.insert(p.name.clone(), v);
            }
            Err(d) => diags.push(d),
        }
    }
    let scope = Scope::new(&names, params);
    let param_span = |name: &str| cfg.params.iter().find(|p| p.name == name).map_or_else(top, |p| p.span);

    let rules = resolve_rules(cfg, &scope, &mut diags);
    let preset_span = cfg.preset.map_or_else(top, |(_, s)| s);
    let Some((preset, _)) = cfg.preset else {
        diags.push(Diagnostic::new(top(), "missing `preset` in [gram]"));
        return Err(diags);
    };

    let degree = match (ov.degree, &cfg.degree) {
        (Some(d), _) => d,
        (None, Some(s)) => s.value,
        (None, None) => {
            diags.push(Diagnostic::new(top(), "missing `degree` in [truncation]"));
            0
        }
    };
    let dmax = ov.dmax.or(cfg.dmax.as_ref().map(|s| s.value)).unwrap_or(DEFAULT_DMAX);
    let dmax_span = cfg.dmax.as_ref().map_or_else(top, |s| s.span);
    let table_degree = cfg.table_degree.as_ref().map_or(DEFAULT_TABLE_DEGREE, |s| s.value);

    let hbar = positive_real(&scope, "hbar", param_span("hbar"), true, &mut diags);
    if preset != Preset::Explicit && (!cfg.weights.is_empty() || !cfg.blocks.is_empty()) {
        diags.push(Diagnostic::new(preset_span, "`weight` and `block` lines only apply to the explicit preset"));
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let hbar = hbar.expect("checked");

    let pres = match Presentation::new(names.clone(), rules.iter().map(|(r, _)| r.clone()).collect()) {
        Ok(p) => p,
        Err(e) => {
            let span = presentation_error_span(&e, cfg).unwrap_or(gen_span);
            return Err(vec![Diagnostic::new(span, e.to_string())]);
        }
    };

    let gram = match preset {
        Preset::Bargmann => GramData::bargmann(hbar),
        Preset::QBargmann => match scope.param("q") {
            None => return Err(vec![Diagnostic::new(preset_span, "unbound parameter q (required by the q-bargmann preset)")]),
            Some(q) if !q.is_real() => return Err(vec![Diagnostic::new(param_span("q"), "q must be real")]),
            Some(q) => GramData::q_bargmann(q.re().clone(), hbar),
        },
        Preset::Explicit => GramData::explicit(explicit_blocks(cfg, &scope, names.len(), degree + 2)?, hbar),
    }
    .map_err(|e| {
        let span = match &e {
            QuantError::NonPositiveWeight(_) => param_span("q"),
            QuantError::NotHermitian(d) | QuantError::NotPositiveDefinite { degree: d, .. } => {
                cfg.blocks.iter().find(|b| b.degree == *d).map_or(preset_span, |b| b.span)
            }
            _ => preset_span,
        };
        vec![Diagnostic::new(span, e.to_string())]
    })?;

    let model = Model::new(pres, gram).map_err(|e| {
        let span = match &e {
            QuantError::NotGraded(lhs) => rules.iter().find(|(r, _)| format!("{} {}", names[r.hi], names[r.lo]) == *lhs).map(|(_, s)| *s),
            _ => None,
        };
        vec![Diagnostic::new(span.unwrap_or(preset_span), e.to_string())]
    })?;

    Ok(Built { model, scope, degree, dmax, table_degree, hbar_span: param_span("hbar"), dmax_span })
}

fn positive_real(scope: &Scope, name: &str, span: Span, default_one: bool, diags: &mut Vec<Diagnostic>) -> Option<BigRational> {
    match scope.param(name) {
        None if default_one => Some(BigRational::one()),
        None => {
            diags.push(Diagnostic::new(span, format!("unbound parameter {name}")));
            None
        }
        Some(v) if v.is_positive_real() => Some(v.re().clone()),
        Some(v) => {
            diags.push(Diagnostic::new(span, format!("{name} must be a positive rational, got {v}")));
            None
        }
    }
}

fn resolve_rules(cfg: &ModelConfig, scope: &Scope, diags: &mut Vec<Diagnostic>) -> Vec<(Rule, Span)> {
    let n = cfg.generators.len();
    let mut out = Vec::new();
    for decl in &cfg.rules {
        let index = |(name, span): &(String, Span), diags: &mut Vec<Diagnostic>| match scope.gens.get(name) {
            Some(&g) => Some(g),
            None => {
                diags.push(Diagnostic::new(*span, format!("unknown generator `{name}` in rule")));
                None
            }
        };
        let hi = index(&decl.hi, diags);
        let lo = index(&decl.lo, diags);
        let terms = match scope.terms(&decl.rhs) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        let mut rhs = NcPoly::zero(n);
        let mut ok = true;
        for t in terms {
            if let Some(&(_, _, span)) = t.factors.iter().find(|f| f.1) {
                diags.push(Diagnostic::new(span, "starred generators cannot appear in a rule"));
                ok = false;
                break;
            }
            if t.factors.len() > 2 {
                diags.push(Diagnostic::new(t.factors[2].2, format!("rule degree exceeds 2 (term of degree {})", t.factors.len())));
                ok = false;
                break;
            }
            let word: Vec<usize> = t.factors.iter().map(|f| f.0).collect();
            if word.windows(2).any(|p| p[0] > p[1]) {
                diags.push(Diagnostic::new(t.factors[0].2, "right-hand side terms must be ordered monomials"));
                ok = false;
                break;
            }
            rhs.add_term(Monomial::from_ordered_word(n, &word), &t.coefficient);
        }
        if let (Some(hi), Some(lo), true) = (hi, lo, ok) {
            out.push((Rule { hi, lo, rhs }, decl.span));
        }
    }
    out
}

fn presentation_error_span(e: &PresentationError, cfg: &ModelConfig) -> Option<Span> {
    let lhs = match e {
        PresentationError::NotAnInversion { lhs }
        | PresentationError::DuplicateRule { lhs }
        | PresentationError::NonQuadratic { lhs }
        | PresentationError::NonDecreasing { lhs, .. } => lhs,
        _ => return None,
    };
    cfg.rules.iter().rev().find(|r| format!("{} {}", r.hi.0, r.lo.0) == *lhs).map(|r| r.span)
}

/// Gram blocks for degrees `0..`, as far as the weights and blocks reach
/// (capped at `limit` when a default weight makes them unbounded).
fn explicit_blocks(cfg: &ModelConfig, scope: &Scope, n: usize, limit: usize) -> Result<Vec<DenseMatrix>, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut default = None;
    let mut weights: HashMap<Monomial, Scalar> = HashMap::new();
    for w in &cfg.weights {
        let value = match scope.scalar(&w.value) {
            Ok(v) if v.is_positive_real() => v,
            Ok(v) => {
                diags.push(Diagnostic::new(w.span, format!("non-positive weight {v}")));
                continue;
            }
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        match &w.target {
            WeightTarget::Default => default = Some(value),
            WeightTarget::Monomial(factors) => {
                let mut word = Vec::new();
                for (name, span) in factors {
                    match scope.gens.get(name) {
                        Some(&g) => word.push(g),
                        None => diags.push(Diagnostic::new(*span, format!("unknown generator `{name}` in weight"))),
                    }
                }
                if word.len() != factors.len() {
                    continue;
                }
                if word.windows(2).any(|p| p[0] > p[1]) {
                    diags.push(Diagnostic::new(w.span, "weights are given for ordered monomials"));
                    continue;
                }
                weights.insert(Monomial::from_ordered_word(n, &word), value);
            }
        }
    }
    let mut blocks: BTreeMap<usize, DenseMatrix> = BTreeMap::new();
    for b in &cfg.blocks {
        let size = monomials_of_degree(n, b.degree).len();
        if b.rows.len() != size || b.rows.iter().any(|r| r.len() != size) {
            diags.push(Diagnostic::new(b.span, format!("block for degree {} must be {size}×{size}", b.degree)));
            continue;
        }
        let mut rows = Vec::new();
        for r in &b.rows {
            let mut row = Vec::new();
            for e in r {
                match scope.scalar(e) {
                    Ok(v) => row.push(v),
                    Err(d) => diags.push(d),
                }
            }
            rows.push(row);
        }
        if rows.iter().all(|r| r.len() == size) {
            blocks.insert(b.degree, DenseMatrix::from_rows(rows));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut out = Vec::new();
    for d in 0..=limit {
        if let Some(b) = blocks.remove(&d) {
            out.push(b);
            continue;
        }
        let diag: Option<Vec<Scalar>> = monomials_of_degree(n, d)
            .iter()
            .map(|m| weights.get(m).or(default.as_ref()).cloned())
            .collect();
        match diag {
            Some(w) => out.push(DenseMatrix::diagonal(&w)),
            None => break,
        }
    }
    Ok(out)
}

/// Outcome of the delegated confluence check.
pub fn confluence(model: &Model, degree: usize) -> ConfluenceReport {
    let bound = degree.clamp(3, 5);
    model.presentation().check_confluence(bound).expect("bound is at least 3")
}

pub fn confluence_diagnostic(report: &ConfluenceReport, cfg: &ModelConfig) -> Option<Diagnostic> {
    let f = report.failures.first()?;
    let span = cfg.rules.first().map_or_else(|| cfg.generators_span.unwrap_or_else(top), |r| r.span);
    Some(Diagnostic::new(
        span,
        format!(
            "confluence failure: overlap `{}` reduces to `{}` and to `{}`",
            f.rendered_word, f.via_first, f.via_other
        ),
    ))
}

/// Parses a symbol in anti-Wick shape `c · h₁⋯h_a · k₁*⋯k_b*`.
pub fn parse_symbol(text: &str, model: &Model, scope: &Scope) -> Result<SymbolElem, Diagnostic> {
    let expr = crate::expr::parse_expr(text, 1, 1)?;
    let pres = model.presentation();
    let n = model.n_generators();
    let names = model.names();
    let mut total = SymbolElem::zero(n);
    for t in scope.terms(&expr)? {
        let mut holo = Vec::new();
        let mut anti = Vec::new();
        for &(g, star, span) in &t.factors {
            if star {
                anti.push(NcPoly::generator(n, g));
            } else if !anti.is_empty() {
                return Err(Diagnostic::new(
                    span,
                    format!(
                        "`{}` follows a starred factor: a product k*·h is undefined in 𝒜 = 𝒫𝒫*; write each term as h·k* with plain factors first",
                        names[g]
                    ),
                ));
            } else {
                holo.push(NcPoly::generator(n, g));
            }
        }
        let h = pres.multiply_all(&holo);
        let k_star = star_chain(&anti, pres).expect("generators embed into 𝒫*");
        total = &total + &k_star.left_act(&h, pres).scale(&t.coefficient);
    }
    Ok(total)
}

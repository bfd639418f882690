//! Subcommands: each turns model text plus options into a JSON report or a
//! list of located diagnostics.

use serde_json::{json, Value};

use tq_core::ccr::{classical_relation, dequantize, find_relations, CcrError, DeformedRelation, RelationReport};
use tq_core::quantization::verify::verify_axioms;
use tq_core::Scalar;

use crate::build::{self, Built, Overrides};
use crate::config::{parse_model, ModelConfig};
use crate::diag::{Diagnostic, Span};

#[derive(Debug, Clone)]
pub enum Command {
    Check,
    Quantize { symbol: String },
    Relations,
    Deform,
    Dequantize,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Quantize { .. } => "quantize",
            Command::Relations => "relations",
            Command::Deform => "deform",
            Command::Dequantize => "dequantize",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub overrides: Overrides,
    pub trials: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { overrides: Overrides::default(), trials: 50, seed: 0x7165_7374 }
    }
}

/// Where a diagnostic points: the model file or the symbol argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Model,
    Symbol,
}

#[derive(Debug)]
pub enum Outcome {
    /// Report plus whether every verified property held.
    Report { report: Value, passed: bool },
    Invalid(Vec<(Origin, Diagnostic)>),
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self {
            Outcome::Report { passed: true, .. } => 0,
            Outcome::Report { passed: false, .. } => 1,
            Outcome::Invalid(_) => 2,
        }
    }
}

fn invalid(diags: Vec<Diagnostic>) -> Outcome {
    Outcome::Invalid(diags.into_iter().map(|d| (Origin::Model, d)).collect())
}

pub fn run(cmd: &Command, text: &str, opts: &Options) -> Outcome {
    let cfg = match parse_model(text) {
        Ok(c) => c,
        Err(d) => return invalid(d),
    };
    let built = match build::build(&cfg, opts.overrides) {
        Ok(b) => b,
        Err(d) => return invalid(d),
    };
    let confluence = build::confluence(&built.model, built.degree);
    if let Command::Check = cmd {
        return check(&built, &confluence, opts);
    }
    if let Some(d) = build::confluence_diagnostic(&confluence, &cfg) {
        return invalid(vec![d]);
    }
    let result = match cmd {
        Command::Check => unreachable!(),
        Command::Quantize { symbol } => return quantize(&built, symbol),
        Command::Relations => relations(&built),
        Command::Deform => deform(&built),
        Command::Dequantize => dequantized(&built),
    };
    result.unwrap_or_else(|e| invalid(vec![ccr_diagnostic(e, &built, &cfg)]))
}

fn ccr_diagnostic(e: CcrError, built: &Built, cfg: &ModelConfig) -> Diagnostic {
    let span = match e {
        CcrError::HbarNotOne(_) => built.hbar_span,
        CcrError::DmaxZero | CcrError::DegreeTooSmall { .. } => built.dmax_span,
        CcrError::TableTooLarge { .. } => cfg.table_degree.as_ref().map_or(Span::new(1, 1), |s| s.span),
        _ => Span::new(1, 1),
    };
    Diagnostic::new(span, e.to_string())
}

fn model_summary(built: &Built) -> Value {
    let gram = built.model.gram();
    json!({
        "generators": built.model.names(),
        "rules": built.model.presentation().rules()
            .map(|r| {
                let names = built.model.names();
                format!("{} {} = {}", names[r.hi], names[r.lo], r.rhs.render(names))
            })
            .collect::<Vec<_>>(),
        "preset": gram.kind().name(),
        "hbar": gram.hbar().to_string(),
        "q": gram.q().map(|q| q.to_string()),
        "degree": built.degree,
    })
}

fn check(built: &Built, confluence: &tq_core::ConfluenceReport, opts: &Options) -> Outcome {
    let mut report = json!({
        "command": "check",
        "model": model_summary(built),
        "confluence": {
            "confluent": confluence.is_confluent(),
            "exhaustive_up_to": confluence.exhaustive_up_to,
            "words_checked": confluence.words_checked,
            "failures": confluence.failures,
        },
    });
    if !confluence.is_confluent() {
        report["axioms"] = json!({ "skipped": "presentation is not confluent" });
        report["passed"] = json!(false);
        return Outcome::Report { report, passed: false };
    }
    match verify_axioms(&built.model, built.degree, opts.trials, opts.seed) {
        Ok(axioms) => {
            let passed = axioms.all_passed();
            report["axioms"] = serde_json::to_value(&axioms).expect("serializable");
            report["passed"] = json!(passed);
            Outcome::Report { report, passed }
        }
        Err(e) => invalid(vec![Diagnostic::new(Span::new(1, 1), e.to_string())]),
    }
}

fn quantize(built: &Built, text: &str) -> Outcome {
    let symbol = match build::parse_symbol(text, &built.model, &built.scope) {
        Ok(s) => s,
        Err(d) => return Outcome::Invalid(vec![(Origin::Symbol, d)]),
    };
    let (a, b) = symbol.bidegree();
    if a.max(b) > built.degree {
        let msg = format!("symbol of bidegree ({a}, {b}) exceeds the truncation degree {}", built.degree);
        return Outcome::Invalid(vec![(Origin::Symbol, Diagnostic::new(Span::new(1, 1), msg))]);
    }
    let space = match built.model.space(built.degree) {
        Ok(s) => s,
        Err(e) => return invalid(vec![Diagnostic::new(Span::new(1, 1), e.to_string())]),
    };
    let op = space.toeplitz_op(&symbol);
    let names = built.model.names();
    let basis: Vec<String> = space.basis().monomials().iter().map(|m| m.render(names)).collect();
    let matrix: Vec<Vec<String>> =
        op.to_dense_rows().iter().map(|row| row.iter().map(Scalar::to_string).collect()).collect();
    let valid: Vec<bool> = (0..op.dim()).map(|j| op.is_valid_column(j)).collect();
    let report = json!({
        "command": "quantize",
        "model": model_summary(built),
        "symbol": symbol.render(names),
        "basis": basis,
        "raise": op.raise(),
        "valid_in_degree": op.valid_in_degree(),
        "column_valid": valid,
        "matrix": matrix,
    });
    Outcome::Report { report, passed: true }
}

fn certified(built: &Built) -> Result<RelationReport, CcrError> {
    find_relations(&built.model, built.dmax, built.degree)
}

fn relations(built: &Built) -> Result<Outcome, CcrError> {
    let rep = certified(built)?;
    let names = built.model.names();
    let n = built.model.n_generators();
    let items: Vec<Value> = rep
        .relations
        .iter()
        .map(|r| {
            let classical = classical_relation(r, &rep.relations, n);
            json!({
                "relation": r.render(names),
                "top_degree": r.top_degree(),
                "homogeneous": r.is_homogeneous(),
                "parts": r.homogeneous_parts().iter()
                    .filter(|p| !p.is_zero())
                    .map(|p| json!({ "degree": p.degree(), "text": p.render(names) }))
                    .collect::<Vec<_>>(),
                "classical": classical.part.render(names),
                "classical_in_relation_span": classical.in_relation_span,
            })
        })
        .collect();
    let report = json!({
        "command": "relations",
        "model": model_summary(built),
        "label": rep.label(),
        "note": RelationReport::minimality_note(),
        "dmax": rep.dmax,
        "truncations": [rep.truncations.0, rep.truncations.1],
        "words": rep.words,
        "kernel_dimension": rep.kernel_dim_first,
        "relations": items,
    });
    Ok(Outcome::Report { report, passed: true })
}

fn deform(built: &Built) -> Result<Outcome, CcrError> {
    let rep = certified(built)?;
    let names = built.model.names();
    let one = Scalar::from_int(1);
    let mut items = Vec::new();
    for r in &rep.relations {
        let d = DeformedRelation::deform(r);
        let back = d.specialize(&one)?;
        items.push(json!({
            "relation": r.render(names),
            "deformed": d.render(names),
            "normalized": DeformedRelation::normalized(r).render(names),
            "specializes_back": back == *r.elem(),
            "terms": d.terms()
                .map(|(w, k, c)| json!({ "word": w.render(names), "s_power": k, "coefficient": c.to_string() }))
                .collect::<Vec<_>>(),
        }));
    }
    let report = json!({
        "command": "deform",
        "model": model_summary(built),
        "label": rep.label(),
        "relations": items,
    });
    Ok(Outcome::Report { report, passed: true })
}

fn dequantized(built: &Built) -> Result<Outcome, CcrError> {
    let rep = certified(built)?;
    let names = built.model.names();
    let dq = dequantize(&rep.relations, built.model.n_generators(), built.table_degree)?;
    let report = json!({
        "command": "dequantize",
        "model": model_summary(built),
        "label": rep.label(),
        "relations": dq.relations.iter().map(|r| r.render(names)).collect::<Vec<_>>(),
        "table_degree": built.table_degree,
        "dimensions": dq.dimensions,
    });
    Ok(Outcome::Report { report, passed: true })
}

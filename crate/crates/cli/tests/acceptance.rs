//! Acceptance criteria 1 to 8. Every criterion runs even if an earlier one
//! fails; one PASS/FAIL line is printed per criterion and the test fails if
//! any criterion does. Run with `--nocapture` to see the lines.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tq_core::ccr::{classical_relation, find_relations, span_contains, FreeElem, FreeWord, Letter};
use tq_core::quantization::verify::{random_symbol, verify_axioms};
use tq_core::{Model, NcPoly, Scalar, SymbolElem};

const SEED: u64 = 20_240_817;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn model_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name).display().to_string()
}

fn tq(args: &[&str]) -> Result<(Option<i32>, Value), String> {
    let out = Process::new(env!("CARGO_BIN_EXE_tq"))
        .args(args)
        .env("TQ_COLOR", "0")
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: no JSON report ({e}); stderr: {stderr}"))?;
    Ok((out.status.code(), v))
}

fn relation_texts(v: &Value) -> Vec<String> {
    v["relations"]
        .as_array()
        .map(|a| a.iter().map(|r| r["relation"].as_str().unwrap_or_default().to_string()).collect())
        .unwrap_or_default()
}

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, target {limit:?}"))?;
    Ok(format!("{took:.2?}"))
}

fn criterion_1() -> Outcome {
    let required = [
        "toeplitz_unit",
        "toeplitz_of_holomorphic",
        "composition_with_creation",
        "adjoint_pairing",
        "anti_wick",
        "product_reversal",
        "star_product",
        "projection_idempotent",
    ];
    let start = Instant::now();
    let mut checks = 0;
    for n in [1, 2] {
        let model = Model::bargmann(n, rat(1, 1)).map_err(|e| e.to_string())?;
        let report = verify_axioms(&model, 10, 50, SEED).map_err(|e| e.to_string())?;
        for name in required {
            let c = report.check(name).ok_or(format!("missing check {name}"))?;
            ensure(c.passed, || format!("n={n}: {name} failed: {:?}", c.witness))?;
        }
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        ensure(failed.is_empty(), || format!("n={n}: failed {failed:?}"))?;
        checks += report.checks.len();
    }
    let t = timed(Duration::from_secs(30), start)?;
    Ok(format!("{checks} identity checks over n=1,2 at D=10, 50 trials each, in {t}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let path = model_path("bargmann1.tq");
    let (code, rel) = tq(&["relations", "--model", &path, "--dmax", "2", "--degree", "8"])?;
    ensure(code == Some(0), || format!("relations exit {code:?}"))?;
    let texts = relation_texts(&rel);
    ensure(texts == ["G[z*]·G[z] − G[z]·G[z*] − 1"], || format!("relations {texts:?}"))?;
    let (code, def) = tq(&["deform", "--model", &path, "--dmax", "2", "--degree", "8"])?;
    ensure(code == Some(0), || format!("deform exit {code:?}"))?;
    let deformed = def["relations"][0]["deformed"].as_str().unwrap_or_default();
    ensure(deformed == "G[z*]·G[z] − G[z]·G[z*] − ℏ", || format!("deformed {deformed}"))?;
    let t = timed(Duration::from_secs(5), start)?;
    Ok(format!("`{}` deforms to `{deformed}` in {t}", texts[0]))
}

/// Two-mode ladder action on exponent pairs at ℏ = 1, straight from the
/// closed forms `a_j* e_α = e_{α+δ_j}`, `a_j e_α = α_j e_{α−δ_j}`.
fn ladder(l: Letter, v: &HashMap<(u32, u32), BigRational>) -> HashMap<(u32, u32), BigRational> {
    let mut out = HashMap::new();
    for (&(a, b), c) in v {
        let (target, f) = match (l.star, l.gen) {
            (false, 0) => ((a + 1, b), 1),
            (false, _) => ((a, b + 1), 1),
            (true, 0) if a > 0 => ((a - 1, b), a),
            (true, 1) if b > 0 => ((a, b - 1), b),
            _ => continue,
        };
        *out.entry(target).or_insert_with(BigRational::zero) += c * BigRational::from_integer(f.into());
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn oracle_kernel_dim(degree: u32, dmax: usize) -> usize {
    let letters = [Letter::holo(0), Letter::holo(1), Letter::anti(0), Letter::anti(1)];
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    for len in 1..=dmax {
        let prev: Vec<_> = words.iter().filter(|w| w.len() == len - 1).cloned().collect();
        for p in prev {
            for &l in &letters {
                words.push([p.clone(), vec![l]].concat());
            }
        }
    }
    // rows indexed by (input basis vector, output basis vector), one column per word
    let mut rows: HashMap<((u32, u32), (u32, u32)), Vec<BigRational>> = HashMap::new();
    for total in 0..=degree - dmax as u32 {
        for a in 0..=total {
            let e = (a, total - a);
            for (k, w) in words.iter().enumerate() {
                let mut v = HashMap::from([(e, BigRational::one())]);
                for &l in w.iter().rev() {
                    v = ladder(l, &v);
                }
                for (out, c) in v {
                    rows.entry((e, out)).or_insert_with(|| vec![BigRational::zero(); words.len()])[k] = c;
                }
            }
        }
    }
    let mut rows: Vec<Vec<BigRational>> = rows.into_values().collect();
    let cols = words.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..cols {
                    let v = &f * &rows[rank][j];
                    rows[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    cols - rank
}

fn criterion_3() -> Outcome {
    let model = Model::bargmann(2, rat(1, 1)).map_err(|e| e.to_string())?;
    let report = find_relations(&model, 2, 8).map_err(|e| e.to_string())?;
    let w = |a: Letter, b: Letter| FreeWord::new(vec![a, b]);
    let commutator = |a: Letter, b: Letter| {
        FreeElem::from_terms([(w(a, b), Scalar::from_int(1)), (w(b, a), Scalar::from_int(-1))])
    };
    let (z, zs) = (Letter::holo, Letter::anti);
    let mut expected = vec![
        ("[z2, z1]", commutator(z(1), z(0))),
        ("[z2*, z1*]", commutator(zs(1), zs(0))),
        ("[z1*, z2]", commutator(zs(0), z(1))),
        ("[z2*, z1]", commutator(zs(1), z(0))),
    ];
    for j in 0..2 {
        let ccr = commutator(zs(j), z(j)).add(&FreeElem::term(FreeWord::unit(), Scalar::from_int(-1)));
        expected.push((if j == 0 { "[z1*, z1] - 1" } else { "[z2*, z2] - 1" }, ccr));
    }
    let n = model.n_generators();
    for (name, e) in &expected {
        ensure(span_contains(report.relations.iter().map(|r| r.elem()), e, n), || format!("{name} not in the relation span"))?;
    }
    // the expected six are independent: each is outside the span of the others
    for k in 0..expected.len() {
        let others = expected.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, e)| &e.1);
        ensure(!span_contains(others, &expected[k].1, n), || format!("{} is dependent", expected[k].0))?;
    }
    let oracle = oracle_kernel_dim(8, 2);
    let found = report.relations.len();
    ensure(found == expected.len() && oracle == expected.len(), || {
        format!("found {found} relations, oracle kernel dimension {oracle}, expected {}", expected.len())
    })?;
    Ok(format!("relation space has dimension {found} = oracle {oracle}, spanned by the 6 expected relations"))
}

fn q_int(q: &BigRational, n: u32) -> BigRational {
    (0..n).fold(BigRational::zero(), |acc, k| acc + num_traits::pow(q.clone(), k as usize))
}

fn criterion_4() -> Outcome {
    let q = rat(2, 1);
    for n in 0..8 {
        let lhs = q_int(&q, n + 1) - &q * q_int(&q, n);
        ensure(lhs.is_one(), || format!("[n+1]_q - q[n]_q = {lhs} at n = {n}"))?;
    }
    let path = model_path("qbargmann2.tq");
    let (code, rel) = tq(&["relations", "--model", &path, "--dmax", "2", "--degree", "8"])?;
    ensure(code == Some(0), || format!("relations exit {code:?}"))?;
    let texts = relation_texts(&rel);
    ensure(texts == ["G[z*]·G[z] − 2·G[z]·G[z*] − 1"], || format!("relations {texts:?}"))?;
    let classical = rel["relations"][0]["classical"].as_str().unwrap_or_default();
    ensure(classical == "G[z*]·G[z] − 2·G[z]·G[z*]", || format!("classical part {classical}"))?;
    ensure(rel["relations"][0]["classical_in_relation_span"] == false, || "classical part flagged in span".into())?;
    let (_, def) = tq(&["deform", "--model", &path, "--dmax", "2", "--degree", "8"])?;
    let deformed = def["relations"][0]["deformed"].as_str().unwrap_or_default();
    ensure(deformed == "G[z*]·G[z] − 2·G[z]·G[z*] − ℏ", || format!("deformed {deformed}"))?;

    // the same flag straight from the library
    let model = Model::q_bargmann(q, rat(1, 1)).map_err(|e| e.to_string())?;
    let report = find_relations(&model, 2, 8).map_err(|e| e.to_string())?;
    let c = classical_relation(&report.relations[0], &report.relations, 1);
    ensure(!c.in_relation_span, || "library flags classical part in span".into())?;
    Ok(format!("`{}`, deformed `{deformed}`, classical part outside the relation span", texts[0]))
}

fn criterion_5() -> Outcome {
    let (code, v) = tq(&["dequantize", "--model", &model_path("bargmann1.tq"), "--dmax", "2", "--degree", "8"])?;
    ensure(code == Some(0), || format!("exit {code:?}"))?;
    let dims: Vec<u64> = v["dimensions"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
    let oracle: Vec<u64> = (0..=10).map(|d| d + 1).collect();
    ensure(dims == oracle, || format!("dimensions {dims:?}, oracle {oracle:?}"))?;
    Ok(format!("graded dimensions {dims:?} match d+1 through degree 10"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tally = HashMap::new();
    for n in [1, 2] {
        let model = Model::bargmann(n, rat(1, 1)).map_err(|e| e.to_string())?;
        let space = model.space(8).map_err(|e| e.to_string())?;
        let mut symbols = vec![SymbolElem::zero(n)];
        // a symbol that vanishes identically after straightening
        let z = NcPoly::generator(n, 0);
        symbols.push(&SymbolElem::anti_wick(&z, &z) + &(-&SymbolElem::anti_wick(&z, &z)));
        while symbols.len() < 100 {
            symbols.push(random_symbol(&mut rng, n, 4, 4, 4));
        }
        for g in &symbols {
            let (a, b) = space.kernel_witness_check(g).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("n={n}: disagreement ({a}, {b}) on {}", g.render(model.names())))?;
            *tally.entry((a, b)).or_insert(0) += 1;
        }
    }
    let both = tally.get(&(true, true)).copied().unwrap_or(0);
    let neither = tally.get(&(false, false)).copied().unwrap_or(0);
    Ok(format!("200 symbols (n=1,2, D=8) agree: {both} in both kernels, {neither} in neither"))
}

fn criterion_7() -> Outcome {
    let degree = 10;
    let z = NcPoly::generator(1, 0);
    let mut cases = 0;
    let mut check = |model: &Model, closed: &dyn Fn(u32) -> BigRational, what: &str| -> Result<(), String> {
        let space = model.space(degree).map_err(|e| e.to_string())?;
        let op = space.annihilation_op(&z);
        for n in 0..=degree as u32 {
            let col = op.column(n as usize);
            let expected = closed(n);
            let mut want = tq_core::linalg::SparseVec::new();
            if n > 0 {
                want.add(n as usize - 1, &Scalar::real(expected.clone()));
            }
            ensure(*col == want, || format!("{what}: column {n} differs from {expected} e_{}", n.saturating_sub(1)))?;
            cases += 1;
        }
        Ok(())
    };
    for hbar in [rat(1, 1), rat(3, 2), rat(1, 7)] {
        let model = Model::bargmann(1, hbar.clone()).map_err(|e| e.to_string())?;
        check(&model, &|n| BigRational::from_integer(n.into()) * &hbar, &format!("bargmann hbar={hbar}"))?;
        for q in [rat(2, 1), rat(-1, 3), rat(0, 1), rat(5, 4)] {
            let model = Model::q_bargmann(q.clone(), hbar.clone()).map_err(|e| e.to_string())?;
            check(&model, &|n| q_int(&q, n) * &hbar, &format!("q-bargmann q={q} hbar={hbar}"))?;
        }
    }
    Ok(format!("{cases} columns match nℏ and [n]_q ℏ exactly for n ≤ {degree}"))
}

fn criterion_8() -> Outcome {
    let (code, v) = tq(&["check", "--model", &model_path("inconsistent3.tq")])?;
    ensure(code == Some(1), || format!("exit {code:?}"))?;
    ensure(v["passed"] == false, || "report claims a pass".into())?;
    let failure = &v["confluence"]["failures"][0];
    let word = failure["rendered_word"].as_str().unwrap_or_default();
    ensure(word == "x3 x2 x1", || format!("witness {word:?}"))?;
    let (a, b) = (failure["via_first"].as_str().unwrap_or_default(), failure["via_other"].as_str().unwrap_or_default());
    ensure(a != b, || "witness reductions agree".into())?;
    Ok(format!("rejected with exit 1, overlap `{word}` reduces to `{a}` and to `{b}`"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("axiom suite", criterion_1),
        ("single-mode relation and deformation", criterion_2),
        ("two-mode relation space", criterion_3),
        ("q-oscillator", criterion_4),
        ("dequantization table", criterion_5),
        ("kernel witness agreement", criterion_6),
        ("annihilation closed forms", criterion_7),
        ("confluence guard", criterion_8),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

use std::fmt::Write as _;

use anyhow::Result;
use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use krverify_core::charoracle::{kr_tensor_multiplicity_type_a, OracleLimits};
use krverify_core::fermionic::{verify_mn, FermionicInput, Grading, KrCounts, VacancyScope};
use krverify_core::genfun::{
    compare_direct_closed, constant_term_lemma_check, constant_term_vs_msum, m1_identity_check, verify_recursion,
    ZSpec,
};
use krverify_core::liealg::{CartanData, Weight};
use krverify_core::par;
use krverify_core::qsystem::{a1_chebyshev_check, character_dimension_check, default_depth, verify_polynomiality};
use krverify_core::sweep::{self, SweepCase};

use crate::report::{self, big, Report};
use crate::usage;

pub type Output = (Report, String);

#[derive(Args, Debug)]
pub struct SumArgs {
    /// Algebra, e.g. A2, B3, G2.
    #[arg(long)]
    algebra: String,
    /// Dominant weight as comma-separated coefficients (default 0).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    lambda: String,
    /// Modules as "α:j=count;..." with 1-based α and j.
    #[arg(long = "n", default_value = "")]
    n: String,
    /// Energy convention: paper or cocharge.
    #[arg(long, default_value = "paper")]
    grading: Grading,
    /// Vacancy restriction over all indices or only occupied ones.
    #[arg(long, default_value = "all")]
    vacancy: VacancyScope,
    /// Longest string length allowed.
    #[arg(long)]
    max_string: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Exhaustive up to rank 2, sampled above.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated algebras.
    #[arg(long, value_delimiter = ',', required = true)]
    algebra: Vec<String>,
    /// Bound on sum_{α,j} j n_j^(α).
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..))]
    load: i64,
    #[arg(long, value_enum, default_value = "auto")]
    mode: SweepMode,
    /// Cases per algebra in sampled mode.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    /// Comma-separated energy conventions to run.
    #[arg(long, value_delimiter = ',', default_value = "paper")]
    grading: Vec<Grading>,
    #[arg(long, default_value = "all")]
    vacancy: VacancyScope,
}

#[derive(Args, Debug)]
pub struct QsystemArgs {
    /// Comma-separated algebras.
    #[arg(long, value_delimiter = ',', required = true)]
    algebra: Vec<String>,
    /// Iteration depth (default 10 up to rank 4, 6 for exceptional types).
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenfunCheck {
    All,
    /// The summation identity for m_1.
    M1,
    Recursion,
    /// Direct series against the closed form.
    Direct,
    /// Constant term against M(1) (rank one).
    ConstantTerm,
    Lemma,
}

#[derive(Args, Debug)]
pub struct GenfunArgs {
    /// Comma-separated checks.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    check: Vec<GenfunCheck>,
    #[arg(long, default_value = "A1")]
    algebra: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    lambda: String,
    #[arg(long = "n", default_value = "")]
    n: String,
    /// Longest string length.
    #[arg(long)]
    k: Option<usize>,
    /// Run over every module list of this load with strings at most k, instead of --n.
    #[arg(long)]
    load: Option<i64>,
    /// Per-index mode cap for the lemma; number of terms for the m_1 identity.
    #[arg(long)]
    cap: Option<i64>,
    /// Split point for the lemma (default: every p in 1..=k).
    #[arg(long)]
    p: Option<usize>,
    /// Retained exponents of the direct series.
    #[arg(long, default_value_t = 12)]
    order: usize,
    /// Value of x_{α,0} in the series comparison.
    #[arg(long, default_value_t = 1)]
    x0: i64,
    /// The m_1 identity is checked for q = 0..=this.
    #[arg(long, default_value_t = 6)]
    q: i64,
}

fn algebra(name: &str) -> Result<CartanData> {
    usage(name.parse::<CartanData>())
}

fn weight(cartan: &CartanData, s: &str) -> Result<Weight> {
    let w = if s.trim().is_empty() {
        Weight::zero(cartan.rank())
    } else {
        usage(s.parse::<Weight>())?
    };
    usage(cartan.check_weight(&w))?;
    if !w.is_dominant() {
        return Err(crate::Usage(format!("weight {w} is not dominant")).into());
    }
    Ok(w)
}

fn counts(cartan: &CartanData, s: &str) -> Result<KrCounts> {
    usage(KrCounts::parse(cartan.rank(), s))
}

pub fn sum(args: &SumArgs, restricted: bool) -> Result<Output> {
    let cartan = algebra(&args.algebra)?;
    let lambda = weight(&cartan, &args.lambda)?;
    let n = counts(&cartan, &args.n)?;
    let input = usage(FermionicInput::new(cartan.clone(), lambda.clone(), n.clone()))?
        .with_grading(args.grading)
        .with_scope(args.vacancy)
        .with_max_string(args.max_string);
    let r = verify_mn(&input)?;
    let p = if restricted { &r.m } else { &r.n };
    let echo = json!({
        "algebra": cartan.name(),
        "lambda": lambda.to_string(),
        "n": n.to_string(),
        "grading": args.grading.as_str(),
        "vacancy": args.vacancy.as_str(),
        "max_string": args.max_string,
    });
    let result = json!({
        "poly": report::poly(p),
        "value_at_1": big(&p.value_at_one()),
        "weight_solution": r.totals.as_ref().map(|t| t.0.clone()),
        "term_stats": report::stats(&r.stats),
    });
    let command = if restricted { "msum" } else { "nsum" };
    Ok((Report::new(command, echo, result, true), format!("{p}\n")))
}

struct CaseOutcome {
    json: Value,
    passed: bool,
    graded: Vec<bool>,
    oracle: Option<bool>,
}

fn run_case(cartan: &CartanData, case: &SweepCase, args: &VerifyArgs, limits: &OracleLimits) -> Result<CaseOutcome> {
    let base = FermionicInput::new(cartan.clone(), case.lambda.clone(), case.n.clone())?.with_scope(args.vacancy);
    let mut passed = true;
    let mut graded = Vec::new();
    let mut per_grading = serde_json::Map::new();
    let mut m_at_1 = BigInt::default();
    for &g in &args.grading {
        let r = verify_mn(&base.clone().with_grading(g))?;
        passed &= r.equal_at_1;
        graded.push(r.equal_graded);
        m_at_1 = r.m_at_1();
        per_grading.insert(
            g.as_str().into(),
            json!({
                "m": report::poly(&r.m),
                "n": report::poly(&r.n),
                "equal_at_1": r.equal_at_1,
                "equal_graded": r.equal_graded,
                "term_stats": report::stats(&r.stats),
            }),
        );
    }
    let oracle = if cartan.is_type_a() {
        let mult = kr_tensor_multiplicity_type_a(cartan, &case.n, &case.lambda, limits)?;
        let agrees = BigInt::from(mult.clone()) == m_at_1;
        passed &= agrees;
        Some((mult, agrees))
    } else {
        None
    };
    Ok(CaseOutcome {
        json: json!({
            "lambda": case.lambda.to_string(),
            "n": case.n.to_string(),
            "passed": passed,
            "gradings": per_grading,
            "oracle": oracle.as_ref().map(|(m, a)| json!({ "multiplicity": m.to_string(), "agrees": a })),
        }),
        passed,
        graded,
        oracle: oracle.map(|(_, a)| a),
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Output> {
    let algebras: Vec<CartanData> = args.algebra.iter().map(|a| algebra(a)).collect::<Result<_>>()?;
    if args.grading.is_empty() {
        return Err(crate::Usage("--grading needs at least one convention".into()).into());
    }
    let limits = OracleLimits::default();
    let mut text = String::new();
    let mut all_passed = true;
    let mut sections = Vec::new();
    for cartan in &algebras {
        let exhaustive = match args.mode {
            SweepMode::Exhaustive => true,
            SweepMode::Sampled => false,
            SweepMode::Auto => cartan.rank() <= 2 && cartan.is_type_a(),
        };
        let cases = if exhaustive {
            sweep::exhaustive(cartan, args.load)
        } else {
            sweep::sampled(cartan, args.load, args.samples, args.seed)
        };
        let outcomes = par::map_ordered(&cases, |case| run_case(cartan, case, args, &limits));
        let outcomes: Vec<CaseOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
        let passed = outcomes.iter().filter(|o| o.passed).count();
        let failures: Vec<Value> = outcomes.iter().filter(|o| !o.passed).map(|o| o.json.clone()).collect();
        let oracle_checked = outcomes.iter().filter(|o| o.oracle.is_some()).count();
        let oracle_agree = outcomes.iter().filter(|o| o.oracle == Some(true)).count();
        let mut graded = serde_json::Map::new();
        let _ = write!(
            text,
            "{} {} load<={}: {}/{} cases pass",
            cartan.name(),
            if exhaustive { "exhaustive" } else { "sampled" },
            args.load,
            passed,
            cases.len()
        );
        if oracle_checked > 0 {
            let _ = write!(text, ", oracle {oracle_agree}/{oracle_checked}");
        }
        for (gi, g) in args.grading.iter().enumerate() {
            let eq = outcomes.iter().filter(|o| o.graded[gi]).count();
            graded.insert(g.as_str().into(), json!(eq));
            let _ = write!(text, ", graded equality ({}) {eq}/{}", g.as_str(), cases.len());
        }
        text.push('\n');
        for f in &failures {
            eprintln!("failed case: {f}");
        }
        all_passed &= failures.is_empty();
        sections.push(json!({
            "algebra": cartan.name(),
            "mode": if exhaustive { "exhaustive" } else { "sampled" },
            "cases": cases.len(),
            "passed_cases": passed,
            "oracle_checked": oracle_checked,
            "oracle_agreements": oracle_agree,
            "graded_equalities": graded,
            "failures": failures,
            "results": outcomes.into_iter().map(|o| o.json).collect::<Vec<_>>(),
        }));
    }
    let echo = json!({
        "algebras": algebras.iter().map(CartanData::name).collect::<Vec<_>>(),
        "load": args.load,
        "mode": args.mode.to_possible_value().map(|v| v.get_name().to_string()),
        "samples": args.samples,
        "seed": args.seed,
        "gradings": args.grading.iter().map(|g| g.as_str()).collect::<Vec<_>>(),
        "vacancy": args.vacancy.as_str(),
    });
    let result = json!({ "algebras": sections });
    Ok((Report::new("verify", echo, result, all_passed), text))
}

pub fn qsystem(args: &QsystemArgs) -> Result<Output> {
    let algebras: Vec<CartanData> = args.algebra.iter().map(|a| algebra(a)).collect::<Result<_>>()?;
    let mut text = String::new();
    let mut all_passed = true;
    let mut sections = Vec::new();
    for cartan in &algebras {
        let depth = args.depth.unwrap_or_else(|| default_depth(cartan));
        let rep = verify_polynomiality(cartan, depth)?;
        let mut passed = rep.passed();
        let _ = write!(
            text,
            "{} depth {depth}: {} exact divisions, {} failures, recursion {}",
            cartan.name(),
            rep.divisions,
            rep.failures.len(),
            if rep.recursion_holds { "holds" } else { "fails" }
        );
        let chebyshev = if cartan.name() == "A1" {
            let ok = a1_chebyshev_check(depth.max(2))?;
            passed &= ok;
            let _ = write!(text, ", Chebyshev {}", if ok { "ok" } else { "fails" });
            Some(ok)
        } else {
            None
        };
        let dimension = if cartan.is_type_a() {
            let d = character_dimension_check(cartan, depth)?;
            passed &= d.passed();
            let _ = write!(text, ", dimensions {}", if d.passed() { "ok" } else { "fail" });
            Some(json!({
                "passed": d.passed(),
                "checks": d.checks.iter().map(|c| json!({
                    "node": c.alpha + 1,
                    "index": c.index,
                    "value": big(&c.value),
                    "expected": big(&c.expected),
                })).collect::<Vec<_>>(),
            }))
        } else {
            None
        };
        text.push('\n');
        all_passed &= passed;
        sections.push(json!({
            "algebra": cartan.name(),
            "depth": depth,
            "passed": passed,
            "divisions": rep.divisions,
            "recursion_holds": rep.recursion_holds,
            "failures": rep.failures.iter().map(|f| json!({
                "node": f.alpha + 1,
                "index": f.index,
                "remainder": f.remainder,
            })).collect::<Vec<_>>(),
            "entries": rep.entries.iter().map(|e| json!({
                "node": e.alpha + 1,
                "index": e.index,
                "degree": e.degree,
                "terms": e.terms,
            })).collect::<Vec<_>>(),
            "chebyshev": chebyshev,
            "dimension": dimension,
        }));
    }
    let echo = json!({
        "algebras": algebras.iter().map(CartanData::name).collect::<Vec<_>>(),
        "depth": args.depth,
    });
    Ok((Report::new("qsystem", echo, json!({ "algebras": sections }), all_passed), text))
}

fn wants(args: &GenfunArgs, c: GenfunCheck) -> bool {
    args.check.contains(&GenfunCheck::All) || args.check.contains(&c)
}

fn genfun_spec(spec: &ZSpec, args: &GenfunArgs, text: &mut String) -> Result<(Value, bool)> {
    let mut passed = true;
    let mut out = serde_json::Map::new();
    out.insert("lambda".into(), spec.lambda.to_string().into());
    out.insert("n".into(), spec.n.to_string().into());
    out.insert("k".into(), spec.k.into());
    let _ = write!(text, "λ={} n=\"{}\" k={}:", spec.lambda, spec.n, spec.k);
    if wants(args, GenfunCheck::Recursion) {
        let v = if spec.k >= 2 {
            let ok = verify_recursion(spec)?;
            passed &= ok;
            let _ = write!(text, " recursion {}", if ok { "ok" } else { "FAIL" });
            Value::Bool(ok)
        } else {
            Value::Null
        };
        out.insert("recursion".into(), v);
    }
    if wants(args, GenfunCheck::Direct) {
        let c = compare_direct_closed(spec, args.order, args.x0)?;
        passed &= c.passed();
        let _ = write!(text, " direct {}/{}", c.exponents_compared - c.mismatches.len().min(c.exponents_compared), c.exponents_compared);
        out.insert(
            "direct".into(),
            json!({
                "x0": args.x0,
                "exponents_compared": c.exponents_compared,
                "mismatches": c.mismatches.iter().map(|(e, a, b)| json!([e, a.to_string(), b.to_string()])).collect::<Vec<_>>(),
            }),
        );
    }
    if wants(args, GenfunCheck::ConstantTerm) && spec.rank() == 1 {
        let (ct, m) = constant_term_vs_msum(spec)?;
        let ok = ct == m;
        passed &= ok;
        let _ = write!(text, " constant term {ct} vs M(1) {m}");
        out.insert("constant_term".into(), json!({ "extract": big(&ct), "m_sum_at_1": big(&m), "agrees": ok }));
    }
    if wants(args, GenfunCheck::Lemma) {
        let ps: Vec<usize> = match args.p {
            Some(p) => vec![p],
            None => (1..=spec.k).collect(),
        };
        let cap = args.cap.unwrap_or_else(|| spec.default_cap());
        let mut reps = Vec::new();
        let mut checked = 0;
        let mut counter = 0;
        for p in ps {
            let r = usage(constant_term_lemma_check(spec, p, cap))?;
            passed &= r.passed();
            checked += r.checked;
            counter += r.counterexamples.len();
            reps.push(json!({
                "p": r.p,
                "cap": r.cap,
                "enumerated": r.enumerated,
                "checked": r.checked,
                "zero_binomial": r.zero_binomial,
                "counterexamples": r.counterexamples.iter().map(|c| json!({
                    "node": c.alpha + 1,
                    "config": c.config,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            }));
        }
        let _ = write!(text, " lemma {checked} checked, {counter} counterexamples");
        out.insert("lemma".into(), Value::Array(reps));
    }
    text.push('\n');
    out.insert("passed".into(), passed.into());
    Ok((Value::Object(out), passed))
}

pub fn genfun(args: &GenfunArgs) -> Result<Output> {
    let mut text = String::new();
    let mut passed = true;
    let mut result = serde_json::Map::new();
    if wants(args, GenfunCheck::M1) {
        let cap = args.cap.unwrap_or(12);
        if args.q < 0 || cap < args.q + 5 {
            return Err(crate::Usage(format!("the m_1 identity needs q >= 0 and cap >= q + 5 (q = {}, cap = {cap})", args.q)).into());
        }
        let rows: Vec<Value> = (0..=args.q)
            .map(|q| {
                let ok = m1_identity_check(q, cap as usize)?;
                Ok(json!({ "q": q, "cap": cap, "agrees": ok }))
            })
            .collect::<Result<_>>()?;
        let ok = rows.iter().all(|r| r["agrees"] == true);
        passed &= ok;
        let _ = writeln!(text, "m_1 identity for q <= {} through {cap} terms: {}", args.q, if ok { "ok" } else { "FAIL" });
        result.insert("m1_identity".into(), Value::Array(rows));
    }
    let spec_checks = [
        GenfunCheck::Recursion,
        GenfunCheck::Direct,
        GenfunCheck::ConstantTerm,
        GenfunCheck::Lemma,
    ];
    let needs_spec = spec_checks.iter().any(|&c| wants(args, c));
    if needs_spec {
        let Some(k) = args.k else {
            return Err(crate::Usage("--k is required for recursion, direct, constant-term and lemma checks".into()).into());
        };
        let cartan = algebra(&args.algebra)?;
        let lambda = weight(&cartan, &args.lambda)?;
        let ns: Vec<KrCounts> = match args.load {
            Some(load) => sweep::colored_partitions(cartan.rank(), load)
                .into_iter()
                .filter(|n| n.max_support() <= k)
                .collect(),
            None => vec![counts(&cartan, &args.n)?],
        };
        let specs: Vec<ZSpec> = ns
            .into_iter()
            .map(|n| usage(ZSpec::new(cartan.clone(), lambda.clone(), n, k)))
            .collect::<Result<_>>()?;
        let runs = par::map_ordered(&specs, |s| {
            let mut t = String::new();
            genfun_spec(s, args, &mut t).map(|(v, ok)| (v, ok, t))
        });
        let mut rows = Vec::new();
        for r in runs {
            let (v, ok, t) = r?;
            passed &= ok;
            text.push_str(&t);
            rows.push(v);
        }
        result.insert("specs".into(), Value::Array(rows));
    }
    let echo = json!({
        "checks": args.check.iter().map(|c| c.to_possible_value().map(|v| v.get_name().to_string())).collect::<Vec<_>>(),
        "algebra": args.algebra,
        "lambda": args.lambda,
        "n": args.n,
        "k": args.k,
        "load": args.load,
        "cap": args.cap,
        "p": args.p,
        "order": args.order,
        "x0": args.x0,
        "q": args.q,
    });
    Ok((Report::new("genfun", echo, Value::Object(result), passed), text))
}

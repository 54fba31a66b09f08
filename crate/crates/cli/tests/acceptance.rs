//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p whittaker-cli --test acceptance`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whittaker_core::lie::{bracket, BasisSymbol, LieElement};
use whittaker_core::module::{BasisKey, ModuleElement, ModuleParams, ModulePresentation};
use whittaker_core::parabolic::{zweight_leq, ZWeight};
use whittaker_core::pbw::{casimir_sl2, Monomial, Uea, UeaElement};
use whittaker_core::report::{vector_from_terms, ReportDocument, TermDoc};
use whittaker_core::solver::{certify_simplicity, full_space_dimension, is_whittaker, Truncation, Verdict};
use whittaker_core::{CartanType, QCharacter, Rational, RootSystem, Scalar};

type Q = Rational;
type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whittaker"))
        .args(args)
        .env_remove("WHITTAKER_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    repo().join("configs").join(name).to_string_lossy().into_owned()
}

fn uea(t: CartanType, r: usize) -> Arc<Uea> {
    Uea::new(Arc::new(RootSystem::build(t, r).unwrap()))
}

fn f_power(p: &ModulePresentation<Q>, k: u16) -> BasisKey {
    let mut ex = vec![0u16; p.uea().dim()];
    ex[0] = k;
    BasisKey {
        summand: 0,
        monomial: Monomial::from_exponents(ex),
    }
}

fn random_element(rng: &mut ChaCha8Rng, u: &Arc<Uea>) -> UeaElement<Q> {
    let mut x = UeaElement::zero(u);
    for _ in 0..rng.gen_range(1..=3) {
        let mut ex = vec![0u16; u.dim()];
        for _ in 0..rng.gen_range(0..=4) {
            ex[rng.gen_range(0..u.dim())] += 1;
        }
        x.add_term(Monomial::from_exponents(ex), q(rng.gen_range(1..=9), rng.gen_range(1..=4)));
    }
    x
}

fn criterion_1() -> Outcome {
    for (t, r) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::A, 3)] {
        let sys = Arc::new(RootSystem::build(t, r).unwrap());
        let basis: Vec<LieElement<Q>> = BasisSymbol::all(&sys)
            .into_iter()
            .map(|s| LieElement::basis(sys.clone(), s))
            .collect();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let j = bracket(x, &bracket(y, z).unwrap())
                        .unwrap()
                        .add(&bracket(y, &bracket(z, x).unwrap()).unwrap())
                        .unwrap()
                        .add(&bracket(z, &bracket(x, y).unwrap()).unwrap())
                        .unwrap();
                    ensure(j.is_zero(), || format!("Jacobi fails on {t}{r}"))?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let u = uea(CartanType::A, 2);
    for i in 0..200 {
        let (a, b, c) = (random_element(&mut rng, &u), random_element(&mut rng, &u), random_element(&mut rng, &u));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        ensure(left == right, || format!("associativity fails on triple {i}"))?;
    }
    for (t, r) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)] {
        let u = uea(t, r);
        let sys = u.system().clone();
        for i in 0..r {
            let root = sys.simple_root(i);
            let cas = casimir_sl2::<Q>(&u, &root).unwrap();
            let k = (sys.root_id(&root).unwrap() - 1) as usize;
            for s in [BasisSymbol::E(k), BasisSymbol::F(k), BasisSymbol::H(i)] {
                let g = UeaElement::generator(&u, s);
                ensure(cas.commutator(&g).unwrap().is_zero(), || format!("Casimir not central in {t}{r}"))?;
            }
        }
    }
    Ok("Jacobi on A1 A2 B2 A3, 200 associativity triples, Casimir centrality".into())
}

/// `e f^k v = k (lambda - k + 1) f^(k-1) v`.
fn verma_oracle(lambda: &Q, k: i64) -> Q {
    q(k, 1) * (lambda.clone() - q(k - 1, 1))
}

fn criterion_2() -> Outcome {
    let u = uea(CartanType::A, 1);
    let t = Truncation::new(12, 12);
    let mut notes = Vec::new();
    for (n, d, simple) in [(0, 1, false), (1, 1, false), (2, 1, false), (3, 1, false), (-1, 1, true), (1, 2, true), (-3, 2, true)] {
        let lambda = q(n, d);
        let p = ModulePresentation::build(&u, QCharacter::zero(1), ModuleParams::Verma { lambda: vec![lambda.clone()] })
            .map_err(|e| e.to_string())?;
        for k in 0..=12u16 {
            let w = ModuleElement::basis(f_power(&p, k));
            let got = p.act_symbol(BasisSymbol::E(0), &w).unwrap();
            let want = if k == 0 {
                ModuleElement::zero()
            } else {
                ModuleElement::from_terms([(f_power(&p, k - 1), verma_oracle(&lambda, k as i64))])
            };
            ensure(got == want, || format!("e f^{k} v differs from the oracle at lambda {lambda}"))?;
        }
        let oracle_dim = (0..=12).filter(|&k| verma_oracle(&lambda, k).is_zero()).count();
        let r = certify_simplicity(&p, &t).map_err(|e| e.to_string())?;
        ensure(r.dim_lower_bound == oracle_dim, || format!("lambda {lambda}: dim {} vs oracle {oracle_dim}", r.dim_lower_bound))?;
        if simple {
            ensure(r.dim_lower_bound == 1 && r.stabilized && r.verdict == Verdict::SimpleUpTo, || {
                format!("lambda {lambda}: expected SIMPLE_UPTO, got {} dim {}", r.verdict, r.dim_lower_bound)
            })?;
        } else {
            let witness = ModuleElement::basis(f_power(&p, (n + 1) as u16));
            ensure(r.dim_lower_bound == 2 && r.verdict == Verdict::NotSimple, || format!("lambda {lambda}: {}", r.verdict))?;
            ensure(r.witnesses == vec![witness], || format!("lambda {lambda}: witness {:?}", r.witnesses))?;
        }
        notes.push(format!("{lambda}:{}", r.dim_lower_bound));
    }
    Ok(format!("dims {}", notes.join(" ")))
}

fn criterion_3() -> Outcome {
    let u = uea(CartanType::A, 1);
    for c in [q(0, 1), q(1, 2), q(1, 1), q(2, 1), q(17, 3)] {
        let p = ModulePresentation::build(&u, QCharacter::new(vec![q(1, 1)]), ModuleParams::UniversalSl2 { casimir: c.clone() })
            .map_err(|e| e.to_string())?;
        let r = certify_simplicity(&p, &Truncation::new(12, 12)).map_err(|e| e.to_string())?;
        ensure(r.dim_lower_bound == 1 && r.stabilized && r.verdict == Verdict::SimpleUpTo, || {
            format!("c = {c}: {} dim {} stabilized {}", r.verdict, r.dim_lower_bound, r.stabilized)
        })?;
        ensure(r.ladder.iter().all(|s| s.dim == 1) && r.ladder.last().unwrap().factor == 12, || {
            format!("c = {c}: ladder {:?}", r.ladder)
        })?;
    }
    Ok("eta = 1, c in {0, 1/2, 1, 2, 17/3}: dim 1 through degree 12".into())
}

fn sl3(omega: Q, c: Q) -> ModulePresentation<Q> {
    let u = uea(CartanType::A, 2);
    ModulePresentation::build(
        &u,
        QCharacter::new(vec![q(1, 1), q(0, 1)]),
        ModuleParams::McDowell {
            centre_weight: vec![omega],
            casimir: vec![c],
        },
    )
    .unwrap()
}

fn homogeneous_and_whittaker(p: &ModulePresentation<Q>, vectors: &[ModuleElement<Q>]) -> Result<(), String> {
    for w in vectors {
        let parts = p.graded_components(w);
        ensure(parts.len() == 1, || format!("vector spans {} blocks", parts.len()))?;
        for part in parts.values() {
            ensure(is_whittaker(p, part).unwrap(), || "component is not Whittaker".into())?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let t = Truncation::new(8, 8);
    // (a) and (b) on the seeded generic point and on grid corners
    let cfg: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(config("sl3_singular_random.json")).unwrap()).unwrap();
    let out = bin(&["certify", "--config", &config("sl3_singular_random.json")]);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let doc: ReportDocument = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let (omega, c) = match &doc.module.params {
        whittaker_core::report::ParamsDoc::McDowell { centre_weight, casimir } => (
            whittaker_core::scalar::parse_rational(&centre_weight[0]).unwrap(),
            whittaker_core::scalar::parse_rational(&casimir[0]).unwrap(),
        ),
        other => return Err(format!("unexpected params {other:?}")),
    };
    ensure(cfg["seed"] == 2024, || "config seed changed".into())?;
    ensure(doc.dim_lower_bound == 1 && doc.stabilized && doc.verdict == Verdict::SimpleUpTo, || {
        format!("(c) generic point ({omega}, {c}): {} dim {}", doc.verdict, doc.dim_lower_bound)
    })?;

    for (om, cc) in [(omega.clone(), c.clone()), (q(0, 1), q(0, 1)), (q(4, 1), q(4, 1))] {
        let p = sl3(om.clone(), cc.clone());
        let top = ZWeight::new(vec![om.clone()]);
        let basis = p.truncated_basis(&t);
        for k in &basis {
            let w = p.z_weight_of(k).unwrap();
            ensure(zweight_leq(&w, &top, p.parabolic()).unwrap(), || format!("(a) {k:?} is not below Omega"))?;
        }
        let r = certify_simplicity(&p, &t).map_err(|e| e.to_string())?;
        homogeneous_and_whittaker(&p, &r.exact_vectors).map_err(|e| format!("(b) at ({om}, {cc}): {e}"))?;
        ensure(full_space_dimension(&p, &t).unwrap() == r.dim_lower_bound, || "(b) blocks disagree with the full system".into())?;
    }

    // (d) the 5x5 sweep through the command line, witnesses re-verified
    let out = bin(&["sweep", "--config", &config("sweep_sl3_singular.json"), "--format", "json"]);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let sweep: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = sweep["rows"].as_array().unwrap();
    ensure(rows.len() == 25, || format!("{} sweep rows", rows.len()))?;
    let mut checked = 0;
    for row in rows {
        let params: Vec<Q> = row["params"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| whittaker_core::scalar::parse_rational(v.as_str().unwrap()).unwrap())
            .collect();
        let p = sl3(params[0].clone(), params[1].clone());
        let dim = row["dim"].as_u64().unwrap() as usize;
        let witnesses = row["witnesses"].as_array().unwrap();
        ensure(dim < 2 || witnesses.len() == dim - 1, || format!("row {params:?}: {} witnesses for dim {dim}", witnesses.len()))?;
        for w in witnesses {
            let terms: Vec<TermDoc> = serde_json::from_value(w.clone()).map_err(|e| e.to_string())?;
            let w = vector_from_terms(&p, &terms).map_err(|e| e.to_string())?;
            ensure(!w.is_zero() && is_whittaker(&p, &w).unwrap(), || format!("(d) witness at {params:?} fails"))?;
            checked += 1;
        }
    }
    let locus: Vec<String> = sweep["locus"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| format!("({},{})", p[0].as_str().unwrap(), p[1].as_str().unwrap()))
        .collect();
    Ok(format!(
        "generic ({omega}, {c}) dim 1; dim>=2 locus {}; {checked} witnesses re-verified",
        locus.join(" ")
    ))
}

fn criterion_5() -> Outcome {
    let out = bin(&["corollary"]);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = doc["rows"].as_array().unwrap();
    ensure(doc["violations"] == 0, || "violations reported".into())?;
    ensure(rows.iter().all(|r| r["status"] == "PASS"), || "a row did not pass".into())?;
    let eq = doc["equality_rows"].as_u64().unwrap();
    ensure(eq >= 3, || format!("only {eq} equality rows"))?;
    let sums = rows.iter().filter(|r| r["label"].as_str().unwrap().contains('+')).count();
    ensure(sums >= 2, || "suite lacks direct sums".into())?;
    Ok(format!("{} rows, {eq} equalities, 0 violations", rows.len()))
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 7] = [
        (&["certify", "--config", &config("verma_sl2_lambda2.json")], "certify_verma_sl2_lambda2.json"),
        (&["certify", "--config", &config("universal_sl2.json")], "certify_universal_sl2.json"),
        (&["certify", "--config", &config("sl3_singular_random.json")], "certify_sl3_singular_random.json"),
        (&["sweep", "--config", &config("sweep_verma_sl2.json")], "sweep_verma_sl2.csv"),
        (&["sweep", "--config", &config("sweep_universal_sl2.json"), "--format", "json"], "sweep_universal_sl2.json"),
        (&["corollary"], "corollary_default.json"),
        (&["roots", "--type", "A", "--rank", "2"], "roots_A2.json"),
    ];
    for (args, name) in cases {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{run}-{name}"));
            let mut full: Vec<&str> = args.to_vec();
            let p = path.to_string_lossy().into_owned();
            full.extend(["--out", &p]);
            let out = bin(&full);
            ensure(out.status.success(), || format!("{name}: {}", String::from_utf8_lossy(&out.stderr)))?;
            outputs.push(std::fs::read(&path).unwrap());
        }
        ensure(outputs[0] == outputs[1], || format!("{name}: runs differ"))?;
        let expected = std::fs::read(golden(name)).unwrap();
        ensure(outputs[0] == expected, || format!("{name}: differs from golden"))?;
    }

    // schema validation and round trips
    let schema = |n: &str| -> jsonschema::JSONSchema {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(repo().join("schemas").join(n)).unwrap()).unwrap();
        jsonschema::JSONSchema::compile(&v).unwrap()
    };
    for (file, schema_name) in [
        ("certify_verma_sl2_lambda2.json", "report.schema.json"),
        ("certify_universal_sl2.json", "report.schema.json"),
        ("certify_sl3_singular_random.json", "report.schema.json"),
        ("sweep_universal_sl2.json", "sweep.schema.json"),
        ("corollary_default.json", "corollary.schema.json"),
        ("roots_A2.json", "roots.schema.json"),
    ] {
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(golden(file)).unwrap()).unwrap();
        ensure(schema(schema_name).is_valid(&v), || format!("{file} violates {schema_name}"))?;
    }
    for name in ["certify_verma_sl2_lambda2.json", "certify_universal_sl2.json", "certify_sl3_singular_random.json"] {
        let text = std::fs::read_to_string(golden(name)).unwrap();
        let doc: ReportDocument = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        ensure(doc.to_json().unwrap() == text, || format!("{name}: JSON round trip changes the text"))?;
    }
    let config_schema = schema("config.schema.json");
    for entry in std::fs::read_dir(repo().join("configs")).unwrap() {
        let path = entry.unwrap().path();
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        ensure(config_schema.is_valid(&v), || format!("{} violates the config schema", path.display()))?;
    }
    // CSV and JSON sweeps carry the same table
    let csv_out = bin(&["sweep", "--config", &config("sweep_universal_sl2.json"), "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    ensure(header == ["casimir[0]", "dim", "verdict", "stabilized", "error"], || format!("header {header:?}"))?;
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(golden("sweep_universal_sl2.json")).unwrap()).unwrap();
    for (rec, row) in reader.records().zip(json["rows"].as_array().unwrap()) {
        let rec = rec.unwrap();
        ensure(rec[0] == *row["params"][0].as_str().unwrap(), || "csv params differ".into())?;
        ensure(rec[1] == row["dim"].to_string(), || "csv dim differs".into())?;
        ensure(rec[2] == *row["verdict"].as_str().unwrap(), || "csv verdict differs".into())?;
    }

    // exit codes
    let code = |args: &[&str]| bin(args).status.code();
    ensure(code(&["roots", "--type", "E", "--rank", "8"]) == Some(2), || "roots E8 should exit 2".into())?;
    ensure(code(&["roots", "--type", "G", "--rank", "2"]) == Some(0), || "roots G2 should exit 0".into())?;
    ensure(code(&["certify", "--config", "/nonexistent.json"]) == Some(2), || "missing config should exit 2".into())?;
    ensure(code(&["frobnicate"]) == Some(2), || "unknown command should exit 2".into())?;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": 1, "system": {"type": "A", "rank": 2}, "psi": ["1", "1"], "module": {"family": "mcdowell", "centre_weight": [], "casimir": ["0", "0"]}, "truncation": {"depth": 2, "factor": 2}}"#).unwrap();
    let out = bin(&["certify", "--config", &bad.to_string_lossy()]);
    ensure(out.status.code() == Some(2), || "adjacent support should exit 2".into())?;
    ensure(String::from_utf8_lossy(&out.stderr).contains("adjacent"), || "error should name the problem".into())?;
    let out = bin(&["certify", "--config", &config("verma_sl2_lambda2.json")]);
    ensure(out.status.code() == Some(0), || "NOT_SIMPLE verdict should exit 0".into())?;
    ensure(String::from_utf8_lossy(&out.stderr).starts_with("NOT_SIMPLE dim=2"), || "summary line".into())?;
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"schema_version": 1, "system": {"type": "A", "rank": 1}, "psi": ["0"], "grid": {"family": "verma", "lambda": [[]]}, "truncation": {"depth": 4, "factor": 4}}"#).unwrap();
    let out = bin(&["sweep", "--config", &empty.to_string_lossy()]);
    ensure(out.status.code() == Some(0), || "empty sweep should exit 0".into())?;
    ensure(out.stdout == b"lambda[0],dim,verdict,stabilized,error\n", || "empty sweep should print the header only".into())?;
    Ok("goldens stable, schemas valid, CSV/JSON agree, exit codes 0/2".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 6] = [
        ("1 algebra substrate", Duration::from_secs(60), criterion_1),
        ("2 rank-one Verma modules", Duration::from_secs(30), criterion_2),
        ("3 non-singular sl2", Duration::from_secs(60), criterion_3),
        ("4 singular sl3", Duration::from_secs(600), criterion_4),
        ("5 length bound", Duration::from_secs(60), criterion_5),
        ("6 determinism and interfaces", Duration::from_secs(600), criterion_6),
    ];
    let mut failed = Vec::new();
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({elapsed:.1?})"),
            Err(why) => {
                println!("FAIL [{name}] {why} ({elapsed:.1?})");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

//! One pass/fail line per acceptance criterion, written straight to stderr
//! so they show up without `--nocapture`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use flowset::cli::{cmd_closure, cmd_verify, report_path, ProblemSpec, EXIT_OK, EXIT_VERIFY_FAILED};
use flowset::exact_numbers::{AlgebraicNumber, NumberField, Rational};
use flowset::flow_engine::{check_span_condition, flow_set, SpanCondition};
use flowset::lattice_algebra::normal_form::{determinant, mat_mul};
use flowset::lattice_algebra::relation::heuristic_closure_coords;
use flowset::lattice_algebra::{
    hermite_normal_form, rational_closure, smith_normal_form, torus_closure, FieldMarker, IntMatrix, KVector, Lattice,
    LatticeReducer, Subspace,
};
use flowset::numeric_verifier::{sample_far_points, shell_stability, SampleConfig};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn scratch(dir: &Path, name: &str) -> PathBuf {
    let dst = dir.join(name);
    std::fs::copy(spec_path(name), &dst).unwrap();
    dst
}

fn json(s: &Option<String>) -> Value {
    serde_json::from_str(s.as_deref().expect("json output")).unwrap()
}

fn components(v: &Value) -> &Vec<Value> {
    v["components"].as_array().unwrap()
}

fn fmin(v: &Value) -> f64 {
    v["coverage"].as_array().unwrap().iter().map(|c| c["fraction"].as_f64().unwrap_or(0.0)).fold(1.0, f64::min)
}

fn problem(name: &str) -> flowset::cli::Problem {
    ProblemSpec::from_toml(&std::fs::read_to_string(spec_path(name)).unwrap()).unwrap().build().unwrap()
}

fn parabola() -> Check {
    let out = cmd_closure(&spec_path("parabola.toml"));
    ensure!(out.code == EXIT_OK, "closure exit {}", out.code);
    let n = components(&json(&out.json)).len();
    ensure!(n == 0, "{n} components");
    let p = problem("parabola.toml");
    let red = LatticeReducer::new(&p.lattice);
    let cfg = SampleConfig { radius: 1e3, count: 10_000, window: 10.0, ..SampleConfig::default() };
    let samples = sample_far_points(&p.variety, &red, &cfg).map_err(|e| e.to_string())?;
    let hits: usize = shell_stability(&samples, &red, &cfg).iter().map(|s| s.0).sum();
    ensure!(hits == 0, "{hits} window cells hit");
    Ok(format!("0 components, {} samples, 0 cells hit", samples.len()))
}

fn hyperbola(dir: &Path) -> Check {
    let out = cmd_closure(&spec_path("hyperbola.toml"));
    let v = json(&out.json);
    ensure!(components(&v).len() == 2, "{} components", components(&v).len());
    for c in components(&v) {
        ensure!(c["dim_C"] == 0 && c["W"].as_array().unwrap().len() == 1, "not a circle: {c}");
    }
    let p = scratch(dir, "hyperbola.toml");
    let out = cmd_verify(&p, None, None, None, None);
    let r = json(&out.json);
    ensure!(out.code == EXIT_OK, "verify exit {}: {}", out.code, out.text);
    let d = r["max_containment_distance"].as_f64().unwrap_or(f64::INFINITY);
    let cov = fmin(&r);
    ensure!(d <= 1e-2 && cov >= 0.95, "distance {d}, coverage {cov}");
    ensure!(r["total_samples"] == 10_000 && r["config"]["radius"] == 100.0 && r["config"]["eps"] == 0.05, "config drift");
    Ok(format!("2 circles, containment {d:.3e}, min coverage {cov:.3}"))
}

fn cylinder(dir: &Path) -> Check {
    let v = json(&cmd_closure(&spec_path("cylinder.toml")).json);
    ensure!(components(&v).len() == 1, "{} components", components(&v).len());
    let c = &components(&v)[0];
    ensure!(c["dim_C"] == 1, "dim C = {}", c["dim_C"]);
    ensure!(c["W"].as_array().unwrap().len() == 1, "torus dim {}", c["W"]);
    ensure!(c["C"]["type"] == "affine" && c["C"]["directions"].as_array().unwrap().len() == 1, "base {}", c["C"]);
    let p = scratch(dir, "cylinder.toml");
    let out = cmd_verify(&p, None, None, None, None);
    let r = json(&out.json);
    let cov = fmin(&r);
    ensure!(out.code == EXIT_OK && cov >= 0.95, "exit {}, coverage {cov}", out.code);
    Ok(format!("dim C = 1, 1-torus, coverage {cov:.3}"))
}

fn irrational(dir: &Path) -> Check {
    let k = NumberField::real_quadratic(2).unwrap();
    let one = AlgebraicNumber::one(&k);
    let s2 = AlgebraicNumber::theta(&k);
    let l2 = Lattice::standard(&k, 2, FieldMarker::Real);
    let line = Subspace::real_span(&k, 2, FieldMarker::Real, &[vec![one.clone(), s2.clone()]]);
    let t = torus_closure(&line, &l2).map_err(|e| e.to_string())?;
    ensure!(t.w.dim() == 2 && t.is_compact(), "W dim {}", t.w.dim());
    let out = cmd_verify(&scratch(dir, "irrational_line.toml"), None, None, None, None);
    let cov = fmin(&json(&out.json));
    ensure!(out.code == EXIT_OK && cov >= 0.95, "line: exit {}, coverage {cov}", out.code);

    let l3 = Lattice::standard(&k, 3, FieldMarker::Real);
    let v = Subspace::real_span(&k, 3, FieldMarker::Real, &[vec![one.clone(), one.clone(), s2]]);
    let t = torus_closure(&v, &l3).map_err(|e| e.to_string())?;
    let zero = AlgebraicNumber::zero(&k);
    let plane = Subspace::real_span(
        &k,
        3,
        FieldMarker::Real,
        &[vec![one.clone(), one.clone(), zero.clone()], vec![zero.clone(), zero, one]],
    );
    ensure!(t.w.contains(&plane) && plane.contains(&t.w), "W ≠ {{x₁ = x₂}}");
    ensure!(t.lattice_points.len() == 2, "rank(Λ∩W) = {}", t.lattice_points.len());
    let out = cmd_verify(&scratch(dir, "irrational_plane_orbit.toml"), None, None, None, None);
    let r = json(&out.json);
    let d = r["max_containment_distance"].as_f64().unwrap_or(f64::INFINITY);
    ensure!(out.code == EXIT_OK && d <= 1e-6, "plane: exit {}, distance {d}", out.code);
    Ok(format!("W = ℝ², line coverage {cov:.3}; W = {{x₁ = x₂}}, rank 2, orbit off-torus distance {d:.1e}"))
}

fn complex_graph(dir: &Path) -> Check {
    let p = problem("complex_graph.toml");
    let cond = check_span_condition(&p.lattice);
    ensure!(cond == SpanCondition::RealOnly, "span condition {cond:?}");
    let path = scratch(dir, "complex_graph.toml");
    let out = cmd_verify(&path, None, None, None, None);
    let r = json(&out.json);
    let d = r["max_containment_distance"].as_f64().unwrap_or(f64::INFINITY);
    ensure!(r["total_samples"] == 1000 && r["config"]["radius"] == 100.0, "config drift");
    ensure!(out.code == EXIT_OK && r["containment_passed"] == true && d <= 5e-2, "exit {}, distance {d}", out.code);
    let mutated = cmd_verify(&scratch(dir, "complex_graph_missing_term.toml"), None, None, None, None);
    ensure!(mutated.code == EXIT_VERIFY_FAILED, "mutated prediction exit {}", mutated.code);
    Ok(format!("real_only, containment {d:.3e}, mutated prediction exits 5"))
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize) -> IntMatrix {
    let r = rng.random_range(1..=max_dim);
    let c = rng.random_range(1..=max_dim);
    (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.random_range(-20i64..=20))).collect()).collect()
}

fn unimodular(u: &IntMatrix) -> bool {
    determinant(u).abs().is_one()
}

fn k_vectors(k: &std::sync::Arc<NumberField>, raw: &[Vec<(i64, i64)>]) -> Vec<KVector> {
    raw.iter()
        .map(|v| {
            v.iter()
                .map(|&(a, b)| {
                    AlgebraicNumber::from_coords(k, vec![Rational::from_integer(a.into()), Rational::from_integer(b.into())])
                        .unwrap()
                })
                .collect()
        })
        .collect()
}

fn random_raw(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vec<(i64, i64)>> {
    (0..count).map(|_| (0..n).map(|_| (rng.random_range(-3..=3), rng.random_range(-2..=2))).collect()).collect()
}

fn same(a: &Subspace, b: &Subspace) -> bool {
    a.contains(b) && b.contains(a)
}

fn exact_core() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..1000 {
        let m = random_matrix(&mut rng, 5);
        let (h, u) = hermite_normal_form(&m);
        ensure!(mat_mul(&u, &m) == h && unimodular(&u), "HNF case {case}: {m:?}");
        let m = random_matrix(&mut rng, 4);
        let (d, u, v) = smith_normal_form(&m);
        ensure!(mat_mul(&mat_mul(&u, &m), &v) == d && unimodular(&u) && unimodular(&v), "SNF case {case}: {m:?}");
        for i in 0..m.len().min(m[0].len()).saturating_sub(1) {
            let (a, b) = (&d[i][i], &d[i + 1][i + 1]);
            let ok = if a.is_zero() { b.is_zero() } else { b.is_multiple_of(a) };
            ensure!(ok, "SNF divisibility case {case}: {d:?}");
        }
    }

    let k = NumberField::real_quadratic(2).unwrap();
    for case in 0..100 {
        let raw = { let n = rng.random_range(1..=2); random_raw(&mut rng, 3, n) };
        let rows: Vec<KVector> = (0..3)
            .map(|i| {
                (0..3).map(|j| AlgebraicNumber::from_int(&k, rng.random_range(-1..=1) + if i == j { 4 } else { 0 })).collect()
            })
            .collect();
        let Ok(l) = Lattice::new(&k, 3, FieldMarker::Real, rows) else { continue };
        let v = Subspace::real_span(&k, 3, FieldMarker::Real, &k_vectors(&k, &raw));
        let w = rational_closure(&v, &l).map_err(|e| e.to_string())?;
        let coords: Vec<Vec<f64>> = v
            .basis()
            .iter()
            .map(|b| l.coordinates(b).unwrap().iter().map(AlgebraicNumber::to_f64).collect())
            .collect();
        let numeric = heuristic_closure_coords(&coords, 3, 12).len();
        ensure!(w.contains(&v) && numeric == w.dim(), "closure case {case}: exact {} vs numeric {numeric}", w.dim());
    }

    let l = Lattice::standard(&k, 3, FieldMarker::Real);
    for case in 0..200 {
        let small = k_vectors(&k, &{ let n = rng.random_range(1..=2); random_raw(&mut rng, 3, n) });
        let mut big = small.clone();
        big.extend(k_vectors(&k, &random_raw(&mut rng, 3, 1)));
        let w1 = rational_closure(&Subspace::real_span(&k, 3, FieldMarker::Real, &small), &l).map_err(|e| e.to_string())?;
        let w2 = rational_closure(&Subspace::real_span(&k, 3, FieldMarker::Real, &big), &l).map_err(|e| e.to_string())?;
        ensure!(same(&rational_closure(&w1, &l).unwrap(), &w1), "idempotence case {case}");
        ensure!(w2.contains(&w1), "monotonicity case {case}");
    }
    Ok("1000 HNF + 1000 SNF, 100 closures vs numeric oracle, 200 idempotence/monotonicity pairs".into())
}

fn dimension_clause() -> Check {
    let mut checked = 0;
    let mut specs = 0;
    for entry in std::fs::read_dir(spec_path("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        specs += 1;
        let p = problem(path.file_name().unwrap().to_str().unwrap());
        let real_dim = p.variety.declared_dim() * p.variety.marker().real_factor();
        let mut flows: Vec<_> = flow_set(&p.variety, &p.lattice).into_iter().collect();
        flows.extend(p.predicted.clone());
        for f in flows {
            for c in &f.components {
                ensure!(c.dim_c < real_dim, "{}: dim C = {} (real) vs dim X = {real_dim}", path.display(), c.dim_c);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} components across {specs} specs"))
}

fn determinism(dir: &Path) -> Check {
    let p = scratch(dir, "hyperbola.toml");
    let mut reports = Vec::new();
    for _ in 0..2 {
        let out = cmd_verify(&p, Some(42), None, None, None);
        ensure!(out.code == EXIT_OK, "exit {}", out.code);
        reports.push(std::fs::read(report_path(&p)).unwrap());
    }
    ensure!(reports[0] == reports[1], "reports differ");
    Ok(format!("{} identical bytes", reports[0].len()))
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("parabola has no flow", Some(Duration::from_secs(2)), Box::new(parabola)),
        ("hyperbola circles", Some(Duration::from_secs(5)), Box::new(|| hyperbola(d))),
        ("noncompact base", None, Box::new(|| cylinder(d))),
        ("irrational subtori", None, Box::new(|| irrational(d))),
        ("complex example with real-only span", Some(Duration::from_secs(30)), Box::new(|| complex_graph(d))),
        ("exact-core property suites", Some(Duration::from_secs(60)), Box::new(exact_core)),
        ("dimension clause", None, Box::new(dimension_clause)),
        ("determinism", None, Box::new(|| determinism(d))),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&result, limit) {
            if elapsed > *limit {
                result = Err(format!("{msg}; took {elapsed:.2?} > {limit:?}"));
            }
        }
        let line = match result {
            Ok(msg) => format!("criterion {}: PASS {name}: {msg} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failures += 1;
                format!("criterion {}: FAIL {name}: {msg} ({elapsed:.2?})", i + 1)
            }
        };
        let _ = writeln!(std::io::stderr(), "{line}");
    }
    assert_eq!(failures, 0, "{failures} criteria failed");
}

//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};

use lcrec_cli::samples::{fixed_report, parse_samples};
use lcrec_cli::{analyze_text, AnalysisReport, AnalyzeOptions};
use lcrec_core::criteria::{
    ab_product_sign, classify_const, classify_const_with, closed_form_b, cone_membership, dominant_root_profile,
    fixed_point_residuals, roots_const, ConstantSecondOrder, RootKind,
};
use lcrec_core::ell::{apply_l, oracle, turan_ratio};
use lcrec_core::poly::Enclosure;
use lcrec_core::qform::{
    build_qform, build_r, d2_psd_condition, default_tolerance, lambda_min_bound, psd_exact, threshold_n, QFormPair,
    SymmetricMatrix,
};
use lcrec_core::rational::to_f64;
use lcrec_core::{Matrix, Property, Rational, RecurrenceSpec, SequenceWindow, Status};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x1c0c_a11e;

// Pinned tolerances. Exact criteria compare rationals with `==`.
const TAU_TOL: f64 = 0.01;
const ALPHA_TOL: f64 = 0.05;
const FIXED_TOL: f64 = 1e-9;

const MATRIX_CRITERION: &str = include_str!("../../../corpus/matrix-criterion.spec");
const TIGHT_SUCCESS: &str = include_str!("../../../corpus/tight-constant-success.spec");
const FAILURE: &str = include_str!("../../../corpus/failure.spec");
const FIBONACCI: &str = include_str!("../../../corpus/fibonacci.spec");
const N2_POW2: &str = include_str!("../../../corpus/n2-pow2.spec");
const COS_PI_3: &str = include_str!("../../../corpus/cos-pi-3.samples");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn smalls(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small(rng)).collect()
}

fn random_spec(rng: &mut ChaCha8Rng, d: usize) -> RecurrenceSpec {
    RecurrenceSpec::new(smalls(rng, d), smalls(rng, d), smalls(rng, d)).unwrap()
}

fn random_constant(rng: &mut ChaCha8Rng) -> ConstantSecondOrder {
    ConstantSecondOrder::new(small(rng), small(rng), small(rng), small(rng))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quadratic_form_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = 0;
    for case in 0..200 {
        let d = rng.gen_range(2..=5);
        let spec = random_spec(&mut rng, d);
        let w = spec.generate(51).map_err(|e| e.to_string())?;
        let b = apply_l(&w).unwrap();
        let pair = build_qform(&spec).unwrap();
        for n in d - 1..=50 {
            let lhs = pair.quadratic_value(&w.state_vector(n, d).unwrap(), n).unwrap();
            check(&lhs == b.at(n).unwrap(), || format!("case {case}: {spec} differs at n = {n}"))?;
            checks += 1;
        }
    }
    Ok(format!("200 specs, {checks} exact equalities"))
}

fn matrix_criterion() -> Outcome {
    let spec = RecurrenceSpec::parse(MATRIX_CRITERION).unwrap();
    let pair = build_qform(&spec).unwrap();
    let expect_q0 = SymmetricMatrix::from_rows(vec![vec![r(1), r(-1)], vec![r(-1), r(1)]]).unwrap();
    let expect_q1 = SymmetricMatrix::from_rows(vec![vec![r(0), r(0)], vec![r(0), r(1)]]).unwrap();
    check(pair.q0 == expect_q0, || format!("Q0 = {:?}", pair.q0))?;
    check(pair.q1 == expect_q1, || format!("Q1 = {:?}", pair.q1))?;
    for n in 0..=10_000usize {
        let qn = pair.at(n);
        let closed = SymmetricMatrix::from_rows(vec![vec![r(1), r(-1)], vec![r(-1), r(n as i64 + 1)]]).unwrap();
        check(qn == closed, || format!("Q_{n} differs from closed form"))?;
        check(qn.det() == r(n as i64), || format!("det Q_{n} = {}", qn.det()))?;
        check(d2_psd_condition(&spec, n).unwrap(), || format!("d2 condition fails at n = {n}"))?;
    }
    let w = spec.generate(3).unwrap();
    check(w.terms() == [r(2), r(3), r(2), r(-5)], || format!("terms {:?}", w.terms()))?;
    let b2 = apply_l(&w).unwrap().at(2).unwrap().clone();
    check(b2 == r(19), || format!("b_2 = {b2}"))?;
    Ok("Q0, Q1, det Q_n = n and PSD for n <= 10^4, terms (2,3,2,-5), b_2 = 19".into())
}

fn tight_constant_success() -> Outcome {
    let spec = RecurrenceSpec::parse(TIGHT_SUCCESS).unwrap();
    let cs = ConstantSecondOrder::from_spec(&spec).unwrap();
    let roots = roots_const(&cs);
    check(roots.kind == RootKind::DistinctReal, || "roots not distinct real".into())?;
    check(roots.lambda1 == Some(Enclosure::exact(r(2))), || format!("lambda1 = {:?}", roots.lambda1))?;
    check(roots.lambda2 == Some(Enclosure::exact(r(1))), || format!("lambda2 = {:?}", roots.lambda2))?;
    let s = ab_product_sign(&cs).unwrap();
    check(s == r(-6), || format!("S = {s}"))?;
    let cf = closed_form_b(&cs).unwrap();
    check(cf.product_ab == r(-6), || format!("AB = {}", cf.product_ab))?;
    let report = oracle(&spec, 2, 65).unwrap();
    let b = report.level(1).unwrap();
    for n in 1..=64usize {
        let expect = r(6) * num_traits::pow(r(2), n - 1);
        check(b.at(n).unwrap() == &expect, || format!("b_{n} = {}", b.at(n).unwrap()))?;
        check(cf.predicted_b(n) == expect, || format!("closed form b_{n}"))?;
    }
    let l2 = report.level(2).unwrap();
    check(l2.terms().iter().all(Zero::is_zero), || "L^2 not identically zero".into())?;
    let v = classify_const(&cs);
    check(v.status == Status::Proved && v.property == Property::InfinitelyLogConcave, || format!("{v:?}"))?;
    Ok("roots 2, 1; S = AB = -6; b_n = 6 2^(n-1) for n <= 64; L^2 = 0; Proved".into())
}

fn l2_annihilation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut found = 0;
    let mut values = 0;
    while found < 100 {
        let cs = random_constant(&mut rng);
        if !cs.discriminant().is_positive() {
            continue;
        }
        found += 1;
        let l2 = oracle(&cs.to_spec(), 2, 40).unwrap().level(2).unwrap().clone();
        check(l2.terms().iter().all(Zero::is_zero), || format!("L^2 nonzero for {cs:?}"))?;
        values += l2.len();
    }
    Ok(format!("100 instances with D > 0, {values} level-2 values all exactly 0"))
}

fn classifier_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let (mut proved, mut refuted, mut inconclusive, mut non_positive_d) = (0, 0, 0, 0);
    for case in 0..500 {
        let cs = random_constant(&mut rng);
        if !cs.discriminant().is_positive() {
            non_positive_d += 1;
        }
        let v = classify_const_with(&cs, 3, 60);
        let report = oracle(&cs.to_spec(), 3, 60).unwrap();
        match v.status {
            Status::Proved => {
                proved += 1;
                check(report.witness().is_none(), || format!("case {case}: Proved but oracle negative {cs:?}"))?;
            }
            Status::Refuted => {
                refuted += 1;
                let w = v.witness().ok_or("refuted without witness")?;
                let value = report.level(w.level).and_then(|l| l.get(w.index)).cloned();
                check(w.level == 1 && value.as_ref() == Some(&w.value) && w.value.is_negative(), || {
                    format!("case {case}: witness {w:?} not reproduced")
                })?;
            }
            Status::Inconclusive => {
                inconclusive += 1;
                check(!cs.discriminant().is_positive(), || format!("case {case}: Inconclusive with D > 0"))?;
            }
        }
    }
    Ok(format!(
        "500 instances ({non_positive_d} with D <= 0): {proved} proved, {refuted} refuted, {inconclusive} inconclusive, 0 disagreements"
    ))
}

fn cone_grid() -> Outcome {
    let mut inside = 0;
    for a in -3..=3 {
        for b in -3..=3 {
            let cs = ConstantSecondOrder::new(r(3), r(-2), r(a), r(b));
            let v = cone_membership(&cs);
            check(v.status == Status::Proved, || format!("({a}, {b}): {v:?}"))?;
            let in_cone = v.property == Property::InCone;
            let lc = oracle(&cs.to_spec(), 1, 50).unwrap().level_one_witness().is_none();
            check(in_cone == lc, || format!("({a}, {b}): cone {in_cone}, oracle log-concave {lc}"))?;
            inside += usize::from(in_cone);
        }
    }
    Ok(format!("49 cells agree with the oracle ({inside} in cone)"))
}

fn fibonacci() -> Outcome {
    let spec = RecurrenceSpec::parse(FIBONACCI).unwrap();
    let b = oracle(&spec, 1, 30).unwrap().level(1).unwrap().clone();
    for (n, v) in b.iter() {
        let expect = if n % 2 == 1 { r(1) } else { r(-1) };
        check(v == &expect, || format!("b_{n} = {v}"))?;
    }
    let v = classify_const(&ConstantSecondOrder::from_spec(&spec).unwrap());
    check(v.status == Status::Refuted, || format!("{v:?}"))?;
    let w = v.witness().unwrap();
    Ok(format!("b_n = (-1)^(n+1) for 1 <= n <= 29; Refuted with b_{} = {}", w.index, w.value))
}

fn failure() -> Outcome {
    let spec = RecurrenceSpec::parse(FAILURE).unwrap();
    let pair = build_qform(&spec).unwrap();
    check(pair.q1.det() == q(-1, 4), || format!("det Q1 = {}", pair.q1.det()))?;
    let report = oracle(&spec, 1, 10).unwrap();
    let b = report.level(1).unwrap();
    let first = report.levels[1].first_negative.ok_or("no negative b_n")?;
    check(first <= 6, || format!("first negative at {first}"))?;
    check(b.at(4).unwrap() == &r(25), || format!("b_4 = {}", b.at(4).unwrap()))?;
    check(first == 5 && b.at(5).unwrap() == &r(-71), || format!("b_5 = {}", b.at(5).unwrap()))?;
    let rep = analyze_text(FAILURE, AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    let e = rep.errata.first().ok_or("no erratum")?;
    check(e.stated == "b(4) < 0" && e.computed_exact == "b(4) = 25", || format!("{e:?}"))?;
    check(rep.overall.status == Status::Refuted, || format!("{:?}", rep.overall))?;
    Ok(format!("det Q1 = -1/4; b_4 = 25, b_5 = -71 first negative; erratum '{}' vs '{}'", e.stated, e.computed_exact))
}

fn threshold_soundness() -> Outcome {
    // Sound on synthetic pairs with positive definite slope.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let tol = default_tolerance();
    for case in 0..50 {
        let q0 = smalls(&mut rng, 3);
        let m = smalls(&mut rng, 4);
        let q0 = SymmetricMatrix::from_rows(vec![vec![q0[0].clone(), q0[1].clone()], vec![q0[1].clone(), q0[2].clone()]])
            .unwrap();
        let mm = Matrix::from_rows(vec![vec![m[0].clone(), m[1].clone()], vec![m[2].clone(), m[3].clone()]]);
        let q1 = SymmetricMatrix::try_from(mm.mul(&mm.transpose())).unwrap().shift(&q(-1, 4));
        let pair = QFormPair { order: 2, q0, q1 };
        let n = threshold_n(&pair, &tol).unwrap().ok_or(format!("synthetic case {case}: no N"))? as usize;
        for k in n..=n + 1000 {
            check(psd_exact(&pair.at(k)).psd, || format!("synthetic case {case}: Q_{k} not PSD, N = {n}"))?;
        }
    }
    // The criterion asks for specs whose Q1 is certified positive definite.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 90);
    let attempts = 2000;
    let mut qualifying = 0;
    let mut max_upper: Option<Rational> = None;
    for _ in 0..attempts {
        let d = rng.gen_range(2..=5);
        let pair = build_qform(&random_spec(&mut rng, d)).unwrap();
        let bound = lambda_min_bound(&pair.q1, &tol).unwrap();
        if bound.lower.is_positive() {
            qualifying += 1;
        }
        if max_upper.as_ref().is_none_or(|m| &bound.upper > m) {
            max_upper = Some(bound.upper);
        }
    }
    if qualifying >= 50 {
        return Ok(format!("{qualifying} qualifying specs"));
    }
    Err(format!(
        "found {qualifying} of 50 specs with lambda_min(Q1) > 0 among {attempts} sampled (largest upper bound {}). \
         Q1 = -(A^T e1 e2^T + e2 e1^T A)/2 has (Q1)_11 = 0 for every recurrence, so e1^T Q1 e1 = 0 forces \
         lambda_min(Q1) <= 0 and no spec can qualify. Threshold N itself is sound: 50 synthetic pairs with \
         positive definite Q1 stay PSD on [N, N + 1000]",
        max_upper.unwrap()
    ))
}

fn r_form_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for case in 0..100 {
        let d = rng.gen_range(2..=5);
        let spec = random_spec(&mut rng, d);
        let w = spec.generate(d + 31).unwrap();
        let b = apply_l(&w).unwrap();
        let anchor = w.state_vector(d - 1, d).unwrap();
        for n in 0..=30 {
            let value = build_r(&spec, n).unwrap().quadratic_form(&anchor).unwrap();
            check(&value == b.at(d - 1 + n).unwrap(), || format!("case {case}: {spec} at n = {n}"))?;
        }
    }
    Ok("100 specs, n <= 30, v^T R_n v = b_(d-1+n) exactly".into())
}

fn asymptotic_fit() -> Outcome {
    let spec = RecurrenceSpec::parse(N2_POW2).unwrap();
    let w = spec.generate(1001).unwrap();
    for n in [1usize, 2, 10, 1001] {
        let expect = r((n * n) as i64) * num_traits::pow(r(2), n);
        check(w.at(n).unwrap() == &expect, || format!("a_{n} is not n^2 2^n"))?;
    }
    let tau = turan_ratio(&w, 1000).unwrap().unwrap();
    let scaled = to_f64(&(r(1_000_000) * (r(1) - tau)));
    check((scaled - 2.0).abs() < TAU_TOL, || format!("n^2 (1 - tau_n) = {scaled} at n = 1000"))?;
    let profile = dominant_root_profile(&spec, &w).unwrap();
    let alpha = profile.alpha_estimate.ok_or("no alpha estimate")?.value;
    check((alpha - 2.0).abs() < ALPHA_TOL, || format!("alpha estimate {alpha}"))?;
    Ok(format!("n^2 (1 - tau_1000) = {scaled:.8}, alpha estimate {alpha:.8}"))
}

/// `e` to well beyond 60 digits, as an exact rational.
fn e_approx() -> Rational {
    let mut term = r(1);
    let mut sum = r(1);
    for k in 1..60 {
        term /= r(k);
        sum += &term;
    }
    sum
}

fn fixed_point_residuals_check() -> Outcome {
    let zero = SequenceWindow::new(0, vec![r(0); 13]).unwrap();
    let res = fixed_point_residuals(&zero).unwrap();
    check(res.direct.terms().iter().chain(res.four_term.terms()).all(Zero::is_zero), || "zero residuals".into())?;

    let e = e_approx();
    let inv = r(1) / &e;
    let cosh: Vec<Rational> =
        (0..=12usize).map(|n| (num_traits::pow(e.clone(), n) + num_traits::pow(inv.clone(), n)) / r(2)).collect();
    let sinh1_sq = {
        let s = (&e - &inv) / r(2);
        &s * &s
    };
    let cosh = SequenceWindow::new(0, cosh).unwrap();
    let b = apply_l(&cosh).unwrap();
    for (n, v) in b.iter() {
        let err = to_f64(&(v + &sinh1_sq)).abs();
        check(err < FIXED_TOL, || format!("cosh: b_{n} + sinh^2(1) = {err}"))?;
    }

    let cos = parse_samples(COS_PI_3).map_err(|e| e.to_string())?;
    let b = apply_l(&cos).unwrap();
    check(b.terms().iter().all(|v| v == &q(3, 4)), || "cos: b_n != 3/4".into())?;

    let tol = Rational::new(1.into(), 1_000_000_000.into());
    for (name, w) in [("cosh", &cosh), ("cos", &cos)] {
        let rep = fixed_report(w, &tol).map_err(|e| e.to_string())?;
        check(rep.verdict.status == Status::Inconclusive, || format!("{name}: {:?}", rep.verdict.status))?;
        check(rep.notes.iter().any(|n| n.contains("not fixed by L")), || format!("{name}: no note"))?;
    }
    Ok("zero window exact; cosh gives b_n = -sinh^2(1), cos(n pi/3) gives b_n = 3/4; both flagged not fixed".into())
}

fn run_analyze(spec: &str, extra: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lcrec"))
        .args(["analyze", "--format", "json", "--spec", spec])
        .args(extra)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    Ok(out.stdout)
}

fn cli_determinism() -> Outcome {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/");
    let mut bytes = 0;
    for name in ["matrix-criterion.spec", "tight-constant-success.spec", "failure.spec"] {
        let path = format!("{root}{name}");
        let first = run_analyze(&path, &[])?;
        let second = run_analyze(&path, &[])?;
        let parallel = run_analyze(&path, &["--parallel"])?;
        check(first == second, || format!("{name}: outputs differ"))?;
        check(first == parallel, || format!("{name}: --parallel output differs"))?;
        let parsed: AnalysisReport = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        check(again.as_bytes() == first.as_slice(), || format!("{name}: re-serialization differs"))?;
        let text = std::fs::read_to_string(&path).unwrap();
        let direct = analyze_text(&text, AnalyzeOptions::default()).map_err(|e| e.to_string())?;
        check(parsed == direct, || format!("{name}: parsed report differs from in-process report"))?;
        bytes += first.len();
    }
    Ok(format!("3 specs x 3 runs byte-identical ({bytes} bytes), json round-trip lossless"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("quadratic-form identity", quadratic_form_identity),
        ("matrix-criterion example", matrix_criterion),
        ("tight constant-coefficient example", tight_constant_success),
        ("L^2 annihilation", l2_annihilation),
        ("classifier/oracle agreement", classifier_agreement),
        ("cone grid", cone_grid),
        ("Fibonacci audit", fibonacci),
        ("failure audit", failure),
        ("threshold-N soundness", threshold_soundness),
        ("R-form identity", r_form_identity),
        ("asymptotic fit", asymptotic_fit),
        ("fixed-point residuals", fixed_point_residuals_check),
        ("CLI determinism and round-trip", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

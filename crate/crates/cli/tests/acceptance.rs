//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use delta_laplace::oracle::{terms_for_tail, truncated_transform, TAIL_SLACK, TAIL_TARGET};
use delta_laplace::rational::{int, rat};
use delta_laplace::transform::{table, transform_times_n};
use delta_laplace::{
    convolve, inverse_transform, linear_combine, solve_ivp, transform, verify, Coefficient,
    DifferenceEquation, InitialCondition, Rat, RecipPow, SExpr, SeqExpr,
};
use delta_laplace_cli::schema::validate_report;

const S_GRID: [f64; 3] = [0.5, 1.0, 2.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_order(c: Coefficient, rhs: SeqExpr, ic: InitialCondition) -> DifferenceEquation {
    DifferenceEquation::new(c, 1, rhs, vec![ic]).expect("valid equation")
}

/// Running values of `1 + Σ_{k<n} 1/k^p` for `n = 1..=count`.
fn one_plus_harmonic(p: u32, count: usize) -> Vec<Rat> {
    let mut acc = int(1);
    (1..=count)
        .map(|n| {
            if n > 1 {
                acc += rat(1, (n as i64 - 1).pow(p));
            }
            acc.clone()
        })
        .collect()
}

fn reference_problems() -> Vec<(&'static str, DifferenceEquation, Vec<Rat>)> {
    let n_max = 1000;
    let quadratic = (1..=n_max as i64).map(|n| int(1) + rat(n * n - n, 2)).collect();
    let cubic = (1..=n_max as i64)
        .map(|n| int(2 * n - 1) + rat(n * (n - 1) * (n - 2), 6))
        .collect();
    vec![
        (
            "Df = n, f(1) = 1",
            first_order(Coefficient::One, SeqExpr::n(), InitialCondition::value(1, int(1))),
            quadratic,
        ),
        (
            "D2f = n, f(1) = 1, Df(1) = 2",
            DifferenceEquation::new(
                Coefficient::One,
                2,
                SeqExpr::n(),
                vec![
                    InitialCondition::value(1, int(1)),
                    InitialCondition::first_difference(1, int(2)),
                ],
            )
            .expect("valid equation"),
            cubic,
        ),
        (
            "n Df = 1, f(2) = 2",
            first_order(Coefficient::N, SeqExpr::one(), InitialCondition::value(2, int(2))),
            one_plus_harmonic(1, n_max),
        ),
        (
            "Df = 1/n^2, f(2) = 2",
            first_order(
                Coefficient::One,
                SeqExpr::Recip(RecipPow::Two),
                InitialCondition::value(2, int(2)),
            ),
            one_plus_harmonic(2, n_max),
        ),
        (
            "n Df = 1/n, f(2) = 2",
            first_order(
                Coefficient::N,
                SeqExpr::Recip(RecipPow::One),
                InitialCondition::value(2, int(2)),
            ),
            one_plus_harmonic(2, n_max),
        ),
    ]
}

fn reproduction() -> Outcome {
    let mut slowest = Duration::ZERO;
    let problems = reference_problems();
    for (name, eq, expected) in &problems {
        let start = Instant::now();
        let report = solve_ivp(eq).map_err(|e| format!("{name}: {e}"))?;
        let values = report.solution.eval_range(expected.len());
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if let Some(n) = (0..expected.len()).find(|&i| values[i] != expected[i]) {
            return Err(format!("{name}: differs at n = {}", n + 1));
        }
        ensure(elapsed < Duration::from_secs(1), || format!("{name}: took {elapsed:?}"))?;
        ensure(report.verification.passed, || format!("{name}: verification failed"))?;
    }
    Ok(format!(
        "{} problems exact for n <= 1000, slowest {:.0} ms",
        problems.len(),
        slowest.as_secs_f64() * 1e3
    ))
}

fn log_identity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for s in S_GRID {
        let (partial, _) = truncated_transform(&SeqExpr::Recip(RecipPow::One), s, 200);
        let closed = s - (s.exp() - 1.0).ln();
        let err = (partial - closed).abs();
        ensure(err <= 1e-9, || format!("s = {s}: error {err:e}"))?;
        let symbolic = (SExpr::l().eval_numeric(s) - closed).abs();
        ensure(symbolic <= 1e-12, || format!("s = {s}: L evaluates off by {symbolic:e}"))?;
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_millis(100), || format!("took {elapsed:?}"))?;
    Ok(format!("max error {worst:.1e} with N = 200 in {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn table_consistency() -> Outcome {
    let pairs = table();
    let mut worst_ratio: f64 = 0.0;
    for pair in &pairs {
        for s in S_GRID {
            let terms = terms_for_tail(&pair.sequence, s, TAIL_TARGET)
                .ok_or_else(|| format!("{}: no truncation at s = {s}", pair.sequence))?;
            let (partial, tail) = truncated_transform(&pair.sequence, s, terms);
            let err = (partial - pair.image.eval_numeric(s)).abs();
            ensure(err <= TAIL_SLACK * tail, || {
                format!("{} at s = {s}: error {err:e} > 10 x tail {tail:e}", pair.sequence)
            })?;
            worst_ratio = worst_ratio.max(err / tail);
        }
    }
    Ok(format!(
        "{} pairs x {} points, worst error/tail {worst_ratio:.3}",
        pairs.len(),
        S_GRID.len()
    ))
}

fn basic_sequences() -> Vec<SeqExpr> {
    vec![
        SeqExpr::one(),
        SeqExpr::n(),
        SeqExpr::Mono(2),
        SeqExpr::Recip(RecipPow::One),
        SeqExpr::Recip(RecipPow::Two),
    ]
}

fn convolution_theorem() -> Outcome {
    let basics = basic_sequences();
    let mut worst: f64 = 0.0;
    let s = 1.0;
    for f in &basics {
        for g in &basics {
            let (tf, tg) = (transform(f).map_err(|e| e.to_string())?, transform(g).map_err(|e| e.to_string())?);
            let product = &tf * &tg;
            let simplified = transform(&convolve(f, g)).map_err(|e| e.to_string())?;
            ensure(simplified == product, || format!("{f} * {g}: {simplified} != {product}"))?;
            // Sum the convolution itself, term by term.
            let direct = SeqExpr::conv(f.clone(), g.clone());
            let terms = terms_for_tail(&direct, s, 1e-14).ok_or("no truncation")?;
            let (partial, tail) = truncated_transform(&direct, s, terms);
            let err = (partial - tf.eval_numeric(s) * tg.eval_numeric(s)).abs();
            ensure(err <= 1e-10, || format!("{f} * {g}: numeric error {err:e} (tail {tail:e})"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("{} ordered pairs, max numeric error {worst:.1e} at s = 1", basics.len().pow(2)))
}

fn derivative_rule() -> Outcome {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let pairs = table();
    for pair in &pairs {
        let image = &pair.image;
        let times_n = transform_times_n(image);
        for s in S_GRID {
            let central = -(image.eval_numeric(s + h) - image.eval_numeric(s - h)) / (2.0 * h);
            let exact = times_n.eval_numeric(s);
            let rel = (central - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
            ensure(rel <= 1e-6, || format!("{} at s = {s}: relative error {rel:e}", pair.sequence))?;
            // The image of n f(n), summed directly.
            let (m, d) = pair.sequence.growth_bound();
            let terms = (1..20_000)
                .find(|&k| m * (k as f64).powi(d as i32 + 1) * (-s * k as f64).exp() < 1e-18)
                .ok_or("no truncation")?;
            let direct: f64 = pair
                .sequence
                .eval_range(terms + 40)
                .iter()
                .enumerate()
                .rev()
                .map(|(i, v)| (i + 1) as f64 * (-s * (i + 1) as f64).exp() * delta_laplace::rational::to_f64(v))
                .sum();
            let rel_direct = (direct - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
            ensure(rel_direct <= 1e-9, || {
                format!("{} at s = {s}: direct sum differs by {rel_direct:e}", pair.sequence)
            })?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("{} table entries, worst relative error {worst:.1e}", pairs.len()))
}

fn negative_control() -> Outcome {
    let eq = first_order(Coefficient::One, SeqExpr::n(), InitialCondition::value(1, int(1)));
    let mut report = solve_ivp(&eq).map_err(|e| e.to_string())?;
    ensure(verify(&report, 1000, &S_GRID).passed, || "honest solution rejected".into())?;
    report.solution = linear_combine(&[(int(1), report.solution.clone()), (int(1), SeqExpr::one())]);
    let result = verify(&report, 1000, &S_GRID);
    ensure(!result.passed, || "corrupted solution passed".into())?;
    ensure(result.first_mismatch == Some(1), || {
        format!("first mismatch {:?}, expected n = 1", result.first_mismatch)
    })?;
    Ok(format!("corrupted solution rejected: {result}"))
}

fn round_trip() -> Outcome {
    let mut class: Vec<SeqExpr> = table().into_iter().map(|p| p.sequence).collect();
    let basics = basic_sequences();
    for f in &basics {
        for g in &basics {
            class.push(SeqExpr::conv(f.clone(), g.clone()));
        }
    }
    class.push(linear_combine(&[
        (rat(3, 2), SeqExpr::Mono(3)),
        (rat(-1, 7), SeqExpr::Harmonic(RecipPow::Two)),
        (int(5), SeqExpr::Recip(RecipPow::One)),
        (rat(2, 3), SeqExpr::conv(SeqExpr::Harmonic(RecipPow::One), SeqExpr::Recip(RecipPow::Two))),
    ]));
    for f in &class {
        let image = transform(f).map_err(|e| format!("{f}: {e}"))?;
        let back = inverse_transform(&image).map_err(|e| format!("{f}: {e}"))?;
        let (want, got) = (f.eval_range(100), back.eval_range(100));
        if let Some(i) = (0..100).find(|&i| want[i] != got[i]) {
            return Err(format!("{f}: differs at n = {}", i + 1));
        }
    }
    Ok(format!("{} sequences identical for n <= 100", class.len()))
}

fn cli(args: &[&str]) -> Result<(Option<i32>, String, String), String> {
    let output = Command::new(env!("CARGO_BIN_EXE_delta-laplace"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run binary: {e}"))?;
    Ok((
        output.status.code(),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    ))
}

fn cli_contract() -> Outcome {
    let examples = [
        "D f = n ; f(1) = 1",
        "n D f = 1 ; f(2) = 2",
        "D2 f = n ; f(1) = 1 ; Df(1) = 2",
    ];
    for eq in examples {
        let (code, out, err) = cli(&["solve", eq])?;
        ensure(code == Some(0), || format!("{eq}: exit {code:?}: {err}"))?;
        ensure(out.contains("verification: passed"), || format!("{eq}: {out}"))?;
        let (code, json, _) = cli(&["solve", eq, "--format", "json"])?;
        ensure(code == Some(0), || format!("{eq} (json): exit {code:?}"))?;
        validate_report(&json).map_err(|e| format!("{eq}: schema: {e}"))?;
    }
    let malformed = [
        "",
        "D f",
        "D f = ",
        "D f = n",
        "D3 f = n ; f(1) = 1",
        "D f = n ; f(1) = x",
        "D f = 1/0 ; f(1) = 1",
        "D f = n ; f(0) = 1",
        "n D2 f = 1 ; f(1) = 1 ; f(2) = 1",
        "D2 f = n ; f(1) = 1 ; f(1) = 2",
        "∆f = n ; f(1) = 1",
        "D f = n ; f(1) = 1 ; junk",
    ];
    for text in malformed {
        let (code, out, err) = cli(&["solve", text])?;
        ensure(code == Some(1), || format!("{text:?}: exit {code:?}"))?;
        ensure(out.is_empty() && err.starts_with("error:"), || format!("{text:?}: {err}"))?;
        ensure(!err.contains("panicked"), || format!("{text:?}: panicked"))?;
    }
    Ok(format!(
        "{} examples exit 0 with valid JSON, {} malformed inputs exit 1",
        examples.len(),
        malformed.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("reference IVPs reproduced exactly", reproduction),
        ("l{1/n} = s - ln(e^s - 1)", log_identity),
        ("transform table within 10x tail bound", table_consistency),
        ("convolution theorem", convolution_theorem),
        ("l{n f} = -dF/ds", derivative_rule),
        ("oracle negative control", negative_control),
        ("inverse o transform = identity", round_trip),
        ("CLI contract", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

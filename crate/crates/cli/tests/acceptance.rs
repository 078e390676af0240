//! One check per acceptance criterion. Each prints a `PASS`/`FAIL` line;
//! the target exits nonzero if any criterion fails. Runs without the
//! libtest harness so the lines are never captured.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tqft_core::exactmath::{Field, Polynomial, Rational, RationalFunction};
use tqft_core::frobenius::{integer_subring_necessary_check, AlmostFrobeniusAlgebra, Verdict, WideFrobeniusAlgebra};
use tqft_core::linalg::{congruence_diagonalize, Matrix};
use tqft_core::quantize::{build_algebra, extract_recurrence, predict, quantization_report, InvariantSequence};
use tqft_core::repvar::{brute_force_unbounded, builtin, SurfaceCounter};
use tqft_core::sl2data::{closed_formula_eval, dataset, sl2_pipeline};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

const BUILTINS: [&str; 10] = ["trivial", "C2", "C3", "C5", "D3", "D4", "D5", "S3", "Q8", "S4"];

const EXPECTED_P: [&str; 6] = [
    "q^6 + 9*q^4 + 9*q^2 + 1",
    "-11*q^10 - 29*q^8 + 16*q^6 - 29*q^4 - 11*q^2",
    "43*q^14 - 25*q^12 - 18*q^10 - 18*q^8 - 25*q^6 + 43*q^4",
    "-73*q^18 + 198*q^16 - 135*q^14 + 20*q^12 - 135*q^10 + 198*q^8 - 73*q^6",
    "56*q^22 - 280*q^20 + 504*q^18 - 280*q^16 - 280*q^14 + 504*q^12 - 280*q^10 + 56*q^8",
    "-16*q^26 + 128*q^24 - 448*q^22 + 896*q^20 - 1120*q^18 + 896*q^16 - 448*q^14 + 128*q^12 - 16*q^10",
];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn tqft(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tqft")).args(args).output().expect("run tqft");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn rationals(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| Rational::from(x)).collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let (code, stdout) = tqft(&["sl2", "--max-genus", "12"]);
    let elapsed = start.elapsed();
    ensure!(code == 0, "exit status {code}");
    ensure!(stdout.lines().next() == Some("n=6"), "first line is not n=6");
    for (i, p) in EXPECTED_P.iter().enumerate() {
        let want = format!("P{i} = {p}");
        ensure!(stdout.lines().any(|l| l == want), "missing `{want}`");
    }
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(())
}

fn criterion_2() -> Check {
    let r = sl2_pipeline(20).map_err(|e| e.to_string())?;
    for (g, v) in &r.predictions[12..=20] {
        let f = closed_formula_eval(*g).map_err(|e| e.to_string())?;
        ensure!(*v == f, "genus {g} differs from the closed formula");
    }
    let data = dataset().map_err(|e| e.to_string())?;
    for g in 1..=10 {
        let f = closed_formula_eval(g).map_err(|e| e.to_string())?;
        ensure!(data.sequence.values[g] == f, "table entry at genus {g} differs");
    }
    let (code, stdout) = tqft(&["sl2", "--max-genus", "20"]);
    ensure!(code == 0, "--max-genus 20 exit status {code}");
    ensure!(stdout.contains("closed formula agrees for genus 1..=20"), "missing agreement line");
    Ok(())
}

fn criterion_3() -> Check {
    let seq = InvariantSequence::new(rationals(&[1, 1, 3, 7, 17]));
    let alg = build_algebra(&seq).map_err(|e| e.to_string())?;
    let gram = Matrix::from_rows(vec![rationals(&[1, 1]), rationals(&[1, 3])]);
    ensure!(alg.gram_matrix() == gram, "Gram matrix {:?}", alg.gram_matrix());
    ensure!(alg.check_monoidality().verdict == Verdict::NotMonoidal, "sequence verdict");

    let two = Rational::from(2);
    let nonwide = AlmostFrobeniusAlgebra::new(
        Matrix::identity(2).scale(&two),
        rationals(&[1, 0]),
        rationals(&[1, 0]),
    )
    .map_err(|e| e.to_string())?;
    ensure!(nonwide.check_monoidality().verdict == Verdict::InconclusiveNotWide, "T = 2I verdict");

    let (_, out) = tqft(&["check-monoidal", "--algebra", &fixture("example_algebra.json")]);
    ensure!(out.contains("verdict: NotMonoidal"), "CLI on T=[[0,1],[1,2]]");
    let (_, out) = tqft(&["check-monoidal", "--algebra", &fixture("nonwide_algebra.json")]);
    ensure!(out.contains("verdict: InconclusiveNotWide"), "CLI on T=2I");
    Ok(())
}

fn criterion_4() -> Check {
    for name in BUILTINS {
        let g = builtin(name).map_err(|e| e.to_string())?;
        let counter = SurfaceCounter::new(&g);
        let n = g.order();
        let c = counter.classes().class_count();
        let twist = counter.twist();
        ensure!(twist.trace == BigInt::from(n * c), "{name}: Tr Θ = {}", twist.trace);
        let pairs = BigInt::from(brute_force_unbounded(&g, 1));
        ensure!(pairs == twist.trace, "{name}: commuting pairs {pairs}");
        let theta = twist.operator.as_ref().ok_or(format!("{name}: Θ not materialized"))?;
        let order = Rational::from(n as i64);
        ensure!(theta.mul(theta) == theta.scale(&order), "{name}: Θ² ≠ |G|Θ");
    }
    let s3 = builtin("S3").unwrap();
    ensure!(SurfaceCounter::new(&s3).commuting_pairs() == BigInt::from(18), "S3 pairs");
    ensure!(SurfaceCounter::new(&builtin("C2").unwrap()).commuting_pairs() == BigInt::from(4), "C2 pairs");
    let conv = SurfaceCounter::new(&s3).genus_count(2);
    let brute = brute_force_unbounded(&s3, 2);
    ensure!(conv == BigInt::from(486) && brute == 486, "S3 genus 2: {conv} vs {brute}");
    Ok(())
}

fn criterion_5() -> Check {
    for name in BUILTINS {
        let g = builtin(name).map_err(|e| e.to_string())?;
        let counter = SurfaceCounter::new(&g);
        let n = BigInt::from(g.order());
        for genus in 0..=3 {
            for k in 1..=3 {
                let a = counter.pointed_count(genus, k);
                let b = counter.pointed_count(genus, k + 1);
                ensure!(b == &n * &a, "{name} g={genus} k={k}: {b} ≠ |G|·{a}");
            }
        }
    }
    Ok(())
}

fn rational(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    Rational::new(rng.gen_range(-range..=range), rng.gen_range(1..=3i64)).unwrap()
}

fn nonzero(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    loop {
        let r = rational(rng, range);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random wide algebra with nondegenerate Gram matrix. Every third one is
/// semisimple: `χ_g = Σ θᵢ^{1−g}` with distinct `θᵢ`, which is monoidal.
fn random_wide_algebra(rng: &mut ChaCha8Rng, index: usize) -> WideFrobeniusAlgebra<Rational> {
    loop {
        let n = rng.gen_range(1..=5);
        let alg = if index.is_multiple_of(3) {
            let mut theta: Vec<Rational> = Vec::new();
            while theta.len() < n {
                let t = nonzero(rng, 6);
                if !theta.contains(&t) {
                    theta.push(t);
                }
            }
            // Roots of the characteristic polynomial are 1/θᵢ.
            let charpoly = theta.iter().fold(Polynomial::one(), |acc, t| {
                &acc * &Polynomial::from_coeffs(vec![t.inv().unwrap().neg(), Rational::one()])
            });
            let rec: Vec<Rational> = (0..n).map(|i| charpoly.coeff(i).neg()).collect();
            let eta: Vec<Rational> = (0..n)
                .map(|g| {
                    theta.iter().fold(Rational::zero(), |acc, t| {
                        let term = if g == 0 { t.clone() } else { Field::pow(&t.inv().unwrap(), g as u64 - 1) };
                        acc.add(&term)
                    })
                })
                .collect();
            WideFrobeniusAlgebra::new(rec, eta)
        } else {
            let rec = (0..n).map(|_| rational(rng, 4)).collect();
            let eta = (0..n).map(|_| rational(rng, 4)).collect();
            WideFrobeniusAlgebra::new(rec, eta)
        };
        match alg {
            Ok(a) if !a.gram_matrix().determinant().is_zero() => return a,
            _ => continue,
        }
    }
}

fn random_symmetric(rng: &mut ChaCha8Rng, kind: usize) -> Matrix<Rational> {
    let n = rng.gen_range(1..=6);
    match kind % 4 {
        // Full random.
        0 => {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = rational(rng, 5);
                    m[(i, j)] = v.clone();
                    m[(j, i)] = v;
                }
            }
            m
        }
        // Rank-deficient: Aᵀ D A with A of shape k × n, k < n.
        1 => {
            let k = rng.gen_range(0..n);
            let a = Matrix::from_fn(k, n, |_, _| rational(rng, 3));
            let d = Matrix::from_fn(k, k, |i, j| if i == j { nonzero(rng, 3) } else { Rational::zero() });
            a.transpose().mul(&d).mul(&a)
        }
        // Zero diagonal: every pivot starts isotropic.
        2 => {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = rational(rng, 3);
                    m[(i, j)] = v.clone();
                    m[(j, i)] = v;
                }
            }
            m
        }
        // Hyperbolic planes conjugated by a random unimodular matrix.
        _ => {
            let h = Matrix::from_fn(n, n, |i, j| {
                if i / 2 == j / 2 && i != j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            });
            let mut p = Matrix::identity(n);
            for i in 0..n {
                for j in i + 1..n {
                    p[(i, j)] = Rational::from(rng.gen_range(-2..=2i64));
                }
            }
            p.transpose().mul(&h).mul(&p)
        }
    }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a51_2026);
    let mut algebras = Vec::new();
    for index in 0..200 {
        let alg = random_wide_algebra(&mut rng, index);
        let n = alg.dim();
        let seq = InvariantSequence::new(alg.eta_sequence(2 * n));
        let rec = extract_recurrence(&seq).map_err(|e| format!("sample {index}: {e}"))?;
        ensure!(rec.order == n, "sample {index}: order {} ≠ {n}", rec.order);
        let truth = alg.eta_sequence(5 * n);
        for g in 2 * n..5 * n {
            let p = predict(&seq, g).map_err(|e| e.to_string())?;
            ensure!(p == truth[g], "sample {index}: genus {g} prediction");
        }
        algebras.push(alg);
    }

    for (index, alg) in algebras.iter().enumerate() {
        let n = alg.dim();
        let basis: Vec<Vec<Rational>> = (0..n).map(|i| alg.unit_vector(i)).collect();
        for x in &basis {
            for y in &basis {
                let xy = alg.multiply(x, y);
                for z in &basis {
                    ensure!(
                        alg.pairing(&xy, z) == alg.pairing(x, &alg.multiply(y, z)),
                        "sample {index}: B(xy,z) ≠ B(x,yz)"
                    );
                }
            }
        }
    }

    let mut test_algebras: Vec<WideFrobeniusAlgebra<Rational>> = algebras.iter().step_by(10).cloned().collect();
    test_algebras.push(build_algebra(&InvariantSequence::new(rationals(&[1, 1, 3, 7, 17]))).unwrap());
    for name in ["trivial", "C2", "S3", "D4", "Q8"] {
        let seq = SurfaceCounter::new(&builtin(name).unwrap()).sequence(7);
        test_algebras.push(build_algebra(&seq).unwrap());
    }
    let mut outcomes = [0usize; 2];
    for (index, alg) in test_algebras.iter().enumerate() {
        let reference = alg.check_monoidality();
        outcomes[usize::from(reference.is_monoidal())] += 1;
        let ob = alg.orthogonal_basis();
        for trial in 0..50 {
            let mut vectors: Vec<Vec<Rational>> = ob
                .vectors
                .iter()
                .map(|v| {
                    let c = nonzero(&mut rng, 7);
                    v.iter().map(|x| x.mul(&c)).collect()
                })
                .collect();
            let shift = rng.gen_range(0..vectors.len());
            vectors.rotate_left(shift);
            let v = alg.check_monoidality_with_basis(&vectors).map_err(|e| e.to_string())?;
            ensure!(
                v.verdict == reference.verdict
                    && v.gram_nondegenerate == reference.gram_nondegenerate
                    && v.condition_two == reference.condition_two
                    && v.euler_check == reference.euler_check,
                "test algebra {index}, rescaling {trial}: verdict changed"
            );
        }
    }
    ensure!(outcomes[0] > 0 && outcomes[1] > 0, "rescaling set lacks a verdict class: {outcomes:?}");

    let mut kinds = [0usize; 4];
    for index in 0..200 {
        let g = random_symmetric(&mut rng, index);
        let (c, d) = congruence_diagonalize(&g);
        let ctgc = c.transpose().mul(&g).mul(&c);
        ensure!(ctgc.is_diagonal() && ctgc.diagonal() == d, "matrix {index}: CᵀGC ≠ diag(d)");
        ensure!(!c.determinant().is_zero(), "matrix {index}: C singular");
        let nonzero_d = d.iter().filter(|x| !x.is_zero()).count();
        ensure!(nonzero_d == g.rank(), "matrix {index}: {nonzero_d} nonzero entries, rank {}", g.rank());
        if g.rank() < g.rows() {
            kinds[1] += 1;
        }
        if (0..g.rows()).any(|i| g[(i, i)].is_zero() && (0..g.rows()).any(|j| !g[(i, j)].is_zero())) {
            kinds[2] += 1;
        }
    }
    ensure!(kinds[1] > 0 && kinds[2] > 0, "no rank-deficient or isotropic cases generated");
    Ok(())
}

fn criterion_7() -> Check {
    let data = dataset().map_err(|e| e.to_string())?;
    let chi1: &RationalFunction = &data.sequence.values[1];
    ensure!(!integer_subring_necessary_check(chi1), "SL2 genus 1 accepted");
    let report = quantization_report(&data.sequence, None).map_err(|e| e.to_string())?;
    ensure!(report.chi_torus_integral == Some(false), "SL2 report integrality flag");

    for name in BUILTINS {
        let seq = SurfaceCounter::new(&builtin(name).unwrap()).sequence(6);
        ensure!(integer_subring_necessary_check(&seq.values[1]), "{name}: genus 1 rejected");
        let report = quantization_report(&seq, None).map_err(|e| e.to_string())?;
        ensure!(report.chi_torus_integral == Some(true), "{name}: report integrality flag");
    }

    let s3 = quantization_report(&SurfaceCounter::new(&builtin("S3").unwrap()).sequence(6), None).unwrap();
    let v = s3.monoidality.as_ref().ok_or("S3 verdict missing")?;
    let n = s3.recurrence.as_ref().unwrap().order;
    ensure!(!v.euler_check && n == 2, "S3 euler_check with n = {n}");
    ensure!(s3.predictions[1].value == Rational::from(18), "S3 genus 1");
    let trivial = quantization_report(&SurfaceCounter::new(&builtin("trivial").unwrap()).sequence(6), None).unwrap();
    ensure!(trivial.monoidality.as_ref().unwrap().euler_check, "trivial group euler_check");
    ensure!(trivial.strongly_quantizable, "trivial group not monoidal");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("SL2 recurrence recovery", criterion_1),
        ("SL2 closed-formula agreement", criterion_2),
        ("example algebras", criterion_3),
        ("finite-group identities", criterion_4),
        ("split law", criterion_5),
        ("property suites", criterion_6),
        ("necessary-condition checks", criterion_7),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use apolar_core::apolarity::{incidence_matrix, quadrics_through, six_point_conic};
use apolar_core::gale::{
    association, cremona_association_commutes, dual_cremona_spans, gale_transform, is_self_associated, random_split,
    SplitConfig,
};
use apolar_core::kontsevich::{
    double_apolar_pair, evaluate_covector, min_rank_bound, random_orthogonal, triple_hyperplane, verify_conjecture,
    SamplerConfig,
};
use apolar_core::projective::{column_points, cremona, hadamard_inverse, span_dim};
use apolar_core::rnc::{construct_rank2, local_dimension, random_params};
use apolar_core::{Backend, Field, Matrix, PointConfig, ProjectivePoint, Scalar, Tolerance};
use num_bigint::BigUint;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn tol() -> Tolerance {
    Tolerance::default()
}

fn cfg() -> SamplerConfig {
    SamplerConfig::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Exact Hadamard-inverse ranks of the verifier's samples, by two routes:
/// the verifier's own histogram, and a recomputation here that also checks
/// `AᵀA = I` and uses the pivot count of the reduced row echelon form.
fn exact_rank_census(field: Field, sizes: &[usize], trials: u64, seed: u64) -> Result<String, String> {
    let mut summary = Vec::new();
    for &m in sizes {
        let report = verify_conjecture(m, trials, field, seed, &tol(), &cfg()).map_err(e)?;
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        for t in 0..trials {
            let a = random_orthogonal(m, field, seed + t, &cfg()).map_err(e)?.matrix;
            let id = Matrix::identity(m, field.backend());
            ensure(a.transpose().matmul(&a).map_err(e)? == id, || format!("m={m} trial {t}: AᵀA ≠ I"))?;
            let b = hadamard_inverse(&a).map_err(e)?;
            let pivots = b.rref(&tol()).1.len();
            ensure(pivots == b.rank(&tol()), || format!("m={m} trial {t}: pivot count disagrees with rank"))?;
            *hist.entry(pivots).or_default() += 1;
        }
        ensure(hist == report.histogram, || format!("m={m}: histograms differ {hist:?} vs {:?}", report.histogram))?;
        ensure(!hist.contains_key(&3) && !hist.contains_key(&1), || format!("m={m}: rank 3 or 1 in {hist:?}"))?;
        ensure(report.passed() && report.rank3_count == 0 && report.rank1_count == 0, || format!("m={m}: report flags"))?;
        summary.push(format!("m={m} {hist:?}"));
    }
    Ok(summary.join("; "))
}

fn criterion1() -> Check {
    exact_rank_census(Field::Rational, &[3, 4, 5, 6, 7], 1000, 1_000)
}

fn criterion2() -> Check {
    exact_rank_census(Field::GaussianRational, &[3, 4, 5], 200, 2_000)
}

fn criterion3() -> Check {
    let report = verify_conjecture(3, 1000, Field::Rational, 3_000, &tol(), &cfg()).map_err(e)?;
    ensure(report.histogram == BTreeMap::from([(2, 1000)]), || format!("{:?}", report.histogram))?;
    // Independent: zero determinant, and two pivots in the reduced echelon form.
    for t in 0..1000 {
        let a = random_orthogonal(3, Field::Rational, 3_000 + t, &cfg()).map_err(e)?.matrix;
        let b = hadamard_inverse(&a).map_err(e)?;
        ensure(b.determinant().map_err(e)?.is_exact_zero(), || format!("trial {t}: det(B) ≠ 0"))?;
        ensure(b.rref(&tol()).1.len() == 2, || format!("trial {t}: rank ≠ 2"))?;
    }
    Ok("1000 samples, all rank 2".into())
}

fn criterion4() -> Check {
    let mut worst = (0.0f64, 0.0f64);
    for m in 3..=8usize {
        let n = m - 1;
        for seed in 0..3 {
            let (p0, nodes) = random_params(n, Field::Real, seed);
            let cert = construct_rank2(&p0, &nodes, Field::Real).map_err(e)?;
            // Recompute ‖AᵀA − I‖_max directly.
            let a = &cert.matrix;
            let mut res = 0.0f64;
            for j in 0..m {
                for k in 0..m {
                    let dot: f64 = (0..m).map(|i| (a.get(i, j) * a.get(i, k)).to_complex64().re).sum();
                    res = res.max((dot - if j == k { 1.0 } else { 0.0 }).abs());
                }
            }
            let s = hadamard_inverse(a).map_err(e)?.singular_values().map_err(e)?;
            let ratio = s[2] / s[0];
            ensure(res <= 1e-8, || format!("m={m} seed {seed}: residual {res:e}"))?;
            ensure(ratio <= 1e-8, || format!("m={m} seed {seed}: σ₃/σ₁ = {ratio:e}"))?;
            let d = local_dimension(&cert).map_err(e)?;
            ensure(d == 2 * m - 3, || format!("m={m} seed {seed}: local dimension {d}, expected {}", 2 * m - 3))?;
            worst = (worst.0.max(res), worst.1.max(ratio));
        }
    }
    Ok(format!("max residual {:.1e}, max σ₃/σ₁ {:.1e}", worst.0, worst.1))
}

fn criterion5() -> Check {
    for t in 0..100 {
        let a = random_orthogonal(3, Field::Rational, 5_000 + t, &cfg()).map_err(e)?.matrix;
        let cols = column_points(&a).map_err(e)?;
        let q = six_point_conic(&cols).map_err(e)?;
        let mut pts = PointConfig::simplex(2, Backend::Rational).into_points();
        pts.extend(cols.iter().cloned());
        // Hand-expanded: c₀₁ x⁰x¹ + c₀₂ x⁰x² + c₁₂ x¹x² with c₀₁ = Π p², c₀₂ = Π p¹, c₁₂ = Π p⁰.
        let prod = |l: usize| cols.iter().fold(Scalar::one(Backend::Rational), |acc, p| acc * &p.coords()[l]);
        let (c01, c02, c12) = (prod(2), prod(1), prod(0));
        for (k, p) in pts.iter().enumerate() {
            let x = p.coords();
            let direct = &c01 * &(&x[0] * &x[1]) + &c02 * &(&x[0] * &x[2]) + &c12 * &(&x[1] * &x[2]);
            ensure(direct.is_exact_zero(), || format!("sample {t}: point {k} off the conic"))?;
            ensure(q.eval(x, x).map_err(e)?.is_exact_zero(), || format!("sample {t}: form nonzero at point {k}"))?;
        }
    }
    Ok("100 samples, 600 exact zeros".into())
}

fn criterion6() -> Check {
    let mut summary = Vec::new();
    for n in 2..=6usize {
        let expected = (n * (n - 1) / 2) as isize - 1;
        for seed in 0..50 {
            let (mut z, p) = double_apolar_pair(n, Field::Rational, 6_000 + seed, &cfg()).map_err(e)?;
            z.extend(p);
            let pts = PointConfig::with_repeats(z).map_err(e)?;
            let dim = quadrics_through(&pts, &tol()).map_err(e)?.dimension;
            // Independent count by fraction-free elimination: monomials minus rank, minus one.
            let inc = incidence_matrix(pts.points()).map_err(e)?;
            let by_pivots = (inc.cols() - inc.rank(&tol())) as isize - 1;
            ensure(dim == expected && by_pivots == expected, || {
                format!("n={n} seed {seed}: dimension {dim} (by rank {by_pivots}), expected {expected}")
            })?;
        }
        summary.push(format!("n={n}: {expected}"));
    }
    Ok(summary.join(", "))
}

/// `(I | P) · diag(−I, I) · (Pᵀ | I)ᵀ`, built entry by entry.
fn block_identity_holds(g: &SplitConfig) -> Result<bool, String> {
    let p = g.normalized_block().map_err(e)?;
    let (r1, s1) = (g.r() + 1, g.s() + 1);
    let b = p.backend();
    for i in 0..r1 {
        for a in 0..s1 {
            // Σ_c left[i][c] · λ_c · right[a][c] with left = (I | P), right = (Pᵀ | I)
            let mut acc = Scalar::zero(b);
            for c in 0..r1 + s1 {
                let l = if c < r1 {
                    Scalar::from_int(b, (c == i) as i64)
                } else {
                    p.get(i, c - r1).clone()
                };
                let r = if c < r1 {
                    p.get(c, a).clone()
                } else {
                    Scalar::from_int(b, (c - r1 == a) as i64)
                };
                let lambda = Scalar::from_int(b, if c < r1 { -1 } else { 1 });
                acc = acc + l * lambda * r;
            }
            if !acc.is_exact_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn random_int_points(n: usize, count: usize, seed: u64) -> Vec<ProjectivePoint> {
    // Small deterministic LCG, independent of the library's generators.
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..count)
        .map(|_| {
            let coords: Vec<i64> = (0..=n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 19) as i64 - 9
                })
                .map(|v| if v == 0 { 10 } else { v })
                .collect();
            ProjectivePoint::from_ints(&coords).expect("nonzero")
        })
        .collect()
}

fn criterion7() -> Check {
    let mut configs = 0;
    for (r, s) in [(1, 1), (2, 2), (2, 3), (3, 3)] {
        for seed in 0..100u64 {
            let span = (seed as usize) % (r.min(s) + 1);
            let g = random_split(r, s, span, 7_000 + seed).map_err(e)?;
            let d = gale_transform(&g).map_err(e)?;
            ensure(block_identity_holds(&g)?, || format!("({r},{s}) seed {seed}: block identity fails"))?;
            ensure(association(&g, &d, &tol()).map_err(e)?.is_some(), || format!("({r},{s}) seed {seed}: not associated"))?;
            let before = span_dim(g.second_block(), &tol()).map_err(e)?;
            let after = span_dim(d.second_block(), &tol()).map_err(e)?;
            ensure(before == span as isize && after == before, || {
                format!("({r},{s}) seed {seed}: spans {before} → {after}, built {span}")
            })?;
            ensure(cremona_association_commutes(&g, &tol()).map_err(e)?, || {
                format!("({r},{s}) seed {seed}: Cremona and association do not commute")
            })?;
            configs += 1;
        }
    }
    let mut orthogonal = 0;
    let mut generic = 0;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize) % 3;
        let z = PointConfig::simplex(n, Backend::Rational).into_points();
        let a = random_orthogonal(n + 1, Field::Rational, 7_500 + seed, &cfg()).map_err(e)?.matrix;
        let g = SplitConfig::from_blocks(&z, &column_points(&a).map_err(e)?).map_err(e)?;
        ensure(is_self_associated(&g, &tol()).map_err(e)?.self_associated, || {
            format!("orthogonal n={n} seed {seed}: not self-associated")
        })?;
        orthogonal += 1;
        let p = random_int_points(n, n + 1, seed);
        let Ok(g) = SplitConfig::from_blocks(&z, &p) else { continue };
        // Independent certificate of non-orthogonality: the columns are not
        // mutually orthogonal for the identity form.
        let pm = coordinate_cols(&p);
        let orth = (0..=n).all(|x| (0..x).all(|y| dot(&pm[x], &pm[y]).is_exact_zero()));
        ensure(!orth, || format!("generic n={n} seed {seed}: happens to be orthogonal"))?;
        ensure(!is_self_associated(&g, &tol()).map_err(e)?.self_associated, || {
            format!("generic n={n} seed {seed}: reported self-associated")
        })?;
        generic += 1;
    }
    ensure(generic == 100, || format!("only {generic} generic configurations were usable"))?;
    Ok(format!("{configs} split configurations; {orthogonal} orthogonal pass, {generic} generic fail"))
}

fn coordinate_cols(p: &[ProjectivePoint]) -> Vec<Vec<Scalar>> {
    p.iter().map(|x| x.coords().to_vec()).collect()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(a[0].backend()), |acc, (x, y)| acc + x * y)
}

fn criterion8() -> Check {
    let mut seen: BTreeMap<isize, usize> = BTreeMap::new();
    for n in [3, 4] {
        for seed in 0..100 {
            let (z, p) = double_apolar_pair(n, Field::Rational, 8_000 + seed, &cfg()).map_err(e)?;
            let (a, b) = dual_cremona_spans(&z, &p, &tol()).map_err(e)?;
            ensure(a == b, || format!("n={n} seed {seed}: spans {a} and {b}"))?;
            *seen.entry(a).or_default() += 1;
        }
    }
    Ok(format!("200 pairs, span dimensions {seen:?}"))
}

fn criterion9() -> Check {
    let mut checks = 0;
    for n in [3, 4, 5] {
        for seed in 0..100 {
            let a = random_orthogonal(n + 1, Field::Rational, 9_000 + seed, &cfg()).map_err(e)?.matrix;
            let ps = column_points(&a).map_err(e)?;
            let qs = ps.iter().map(cremona).collect::<Result<Vec<_>, _>>().map_err(e)?;
            for i in 0..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        let h = triple_hyperplane(&ps, i, j, k).map_err(e)?;
                        for l in [i, j, k] {
                            ensure(evaluate_covector(&h, &qs[l]).map_err(e)?.is_exact_zero(), || {
                                format!("n={n} seed {seed}: E_{i}{j}{k}(q_{l}) ≠ 0")
                            })?;
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checks} exact evaluations"))
}

/// `⌈m − √(m(m+1)/2 − 1)⌉`, floored at 1, from `⌊√D · 10⁴⁰⌋`. With
/// `S = 10⁴⁰` and `r` that root, `m − √D` lies in `((mS − r − 1)/S, (mS − r)/S]`,
/// an interval containing no integer in its interior, so its ceiling is
/// `⌈(mS − r)/S⌉`.
fn bound_oracle(m: usize) -> usize {
    let scale = BigUint::from(10u32).pow(40);
    let d = BigUint::from(m * (m + 1) / 2 - 1);
    let r = (d * &scale * &scale).sqrt();
    let ms = BigUint::from(m) * &scale;
    if r >= ms {
        return 1;
    }
    let ceil = (ms - r + &scale - 1u32) / &scale;
    usize::try_from(ceil).expect("small").max(1)
}

fn criterion10() -> Check {
    let mut row = Vec::new();
    for m in 2..=12 {
        let got = min_rank_bound(m).map_err(e)?;
        let want = bound_oracle(m);
        ensure(got == want, || format!("m={m}: {got} vs oracle {want}"))?;
        row.push(format!("{m}:{got}"));
    }
    Ok(row.join(" "))
}

fn criterion11() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_apolar"))
            .args(["verify", "--m", "4", "--trials", "60", "--field", "gaussian-rational", "--seed", "11"])
            .output()
            .map_err(e)
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "verify exited nonzero".into())?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "reports differ".into())?;
    let f = || {
        Command::new(env!("CARGO_BIN_EXE_apolar"))
            .args(["verify", "--m", "5", "--trials", "40", "--field", "real", "--seed", "3"])
            .output()
            .map_err(e)
    };
    let (c, d) = (f()?, f()?);
    ensure(c.stdout == d.stdout, || "float reports differ".into())?;
    Ok(format!("{} bytes identical across runs", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact real Hadamard-inverse rank never 3 or 1, m = 3..7, 1000 each", criterion1),
        ("exact complex Hadamard-inverse rank never 3 or 1, m = 3..5, 200 each", criterion2),
        ("3×3 orthogonal without zeros has Hadamard-inverse rank 2, 1000 samples", criterion3),
        ("rank-2 constructor residuals ≤ 1e-8 and local dimension 2m−3, m = 3..8", criterion4),
        ("six-point conic vanishes on simplex and columns, 100 samples", criterion5),
        ("quadrics through double-apolar pairs: dimension C(n,2)−1, n = 2..6", criterion6),
        ("Gale block identity, span preservation, Cremona commutation, self-association", criterion7),
        ("Cremona span duality for double-apolar pairs, n = 3, 4", criterion8),
        ("triple-product hyperplanes contain the Cremona images of apolar sets", criterion9),
        ("minimal-rank count bound matches high-precision evaluation, m = 2..12", criterion10),
        ("verify reports are byte-identical for identical seeds", criterion11),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name} [{detail}] ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

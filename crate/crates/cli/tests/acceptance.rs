//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails. Oracles are built here from first principles
//! and compared against the library.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

use num_complex::Complex;
use num_rational::BigRational;
use opalg_core::chain::{build_chain, norm_profile, verify_semilattice, ChainSpec};
use opalg_core::diagonal::{
    bimodule_commutator, build_delta, certify_mbad, flatten, pi_map, skew_idempotent_demo,
    unitize_diagonal, SampleElement,
};
use opalg_core::embedding::{
    best_subset_sum, build_e, certify_e_family, certify_embedding_bounds, l1_trace_norm,
    make_trace, phi, phi_block, phi_sup_norm, EmbedParams, RankOneFamily, SubsetFamily,
    TraceScheme,
};
use opalg_core::generation::{certify_generation, WeightSeq};
use opalg_core::matrix::{
    cq, op_norm, rat, schatten1_norm, Backend, Cq, Matrix, Scalar, Tolerance, C64,
};
use opalg_core::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn unit_matrix(n: usize, i: usize, j: usize, v: i64) -> Matrix {
    Matrix::from_fn(n, n, Backend::Exact, |a, b| {
        Scalar::int(if a == i && b == j { v } else { 0 })
    })
}

fn projection(n: usize, rank: usize) -> Matrix {
    Matrix::from_fn(n, n, Backend::Exact, |a, b| {
        Scalar::int(i64::from(a == b && a < rank))
    })
}

/// The chain with `dim H_k = k` and `b_2k = k`, written out directly:
/// `e_{2k-1} = p_{2k-1}` and `e_2k = p_2k + k·E_{2k-1, 2k}` (zero-based unit).
fn chain_oracle(m_max: usize, n: usize) -> Vec<Matrix> {
    (1..=m_max)
        .map(|idx| {
            if idx % 2 == 1 {
                projection(n, idx)
            } else {
                let k = idx / 2;
                &projection(n, idx) + &unit_matrix(n, 2 * k - 1, 2 * k, k as i64)
            }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let chain = build_chain(ChainSpec::new(20)).map_err(|e| e.to_string())?;
    ensure!(
        chain.truncation_dim == 21,
        "truncation {}",
        chain.truncation_dim
    );
    let oracle = chain_oracle(20, 21);
    ensure!(
        chain.idempotents == oracle,
        "chain differs from the block-form oracle"
    );
    let mut exact = 0;
    for m in 0..20 {
        for n in 0..20 {
            if &oracle[m] * &oracle[n] == oracle[m.min(n)] {
                exact += 1;
            }
        }
    }
    let rep = verify_semilattice(&chain, &Tolerance::default()).map_err(|e| e.to_string())?;
    ensure!(exact == 400, "{exact}/400 products exact");
    ensure!(
        rep.pairs_checked == 400 && rep.all_exact,
        "library report {rep:?}"
    );
    Ok("400/400 products e_m e_n = e_min(m,n) exact".into())
}

fn criterion_2() -> Outcome {
    let chain = build_chain(ChainSpec::new(20)).map_err(|e| e.to_string())?;
    let profile = norm_profile(&chain).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for k in 1..=10usize {
        let norm = op_norm(chain.e(2 * k).unwrap()).unwrap();
        let expect = (1.0 + (k * k) as f64).sqrt();
        worst = worst.max((norm - expect).abs());
        ensure!((norm - expect).abs() <= 1e-8, "k={k}: {norm} vs {expect}");
        ensure!(norm >= k as f64, "k={k}: {norm} < {k}");
        ensure!(
            (profile.entries[2 * k - 1].norm - norm).abs() <= 1e-12,
            "profile mismatch at k={k}"
        );
    }
    for k in 1..=10usize {
        let odd = op_norm(chain.e(2 * k - 1).unwrap()).unwrap();
        ensure!((odd - 1.0).abs() <= 1e-9, "odd norm {odd}");
    }
    ensure!(profile.pass, "profile verdict failed");
    Ok(format!(
        "‖e_2k‖ = sqrt(1+k²) for k = 1..10, max deviation {worst:.1e}"
    ))
}

fn criterion_3() -> Outcome {
    let chain = build_chain(ChainSpec::new(6)).map_err(|e| e.to_string())?;
    let family = chain.orthogonal_family();
    let w = WeightSeq::default_for(&family).map_err(|e| e.to_string())?;
    let tol = Tolerance::default();
    let cert =
        certify_generation(&family, &w, 40, &tol, Exec::Sequential).map_err(|e| e.to_string())?;

    let norms: Vec<f64> = family.iter().map(|f| op_norm(f).unwrap()).collect();
    // Default weights 4^-j / (1 + ceil(max_{i≤j} ‖f_i‖)).
    let mut running = 0.0f64;
    let lambdas: Vec<f64> = norms
        .iter()
        .enumerate()
        .map(|(j, n)| {
            running = running.max(*n);
            0.25f64.powi(j as i32 + 1) / (1.0 + running.ceil())
        })
        .collect();
    for (l, q) in lambdas.iter().zip(w.lambdas()) {
        let qf = q.numer().to_string().parse::<f64>().unwrap()
            / q.denom().to_string().parse::<f64>().unwrap();
        ensure!((l - qf).abs() <= 1e-15 * l, "weight {l} vs {qf}");
    }
    let float_family: Vec<Matrix> = family.iter().map(Matrix::to_float).collect();
    let mut count = 0;
    for rec in cert.records() {
        let m = rec.m - 1;
        let tail: f64 = (m + 1..6).map(|j| lambdas[j] * norms[j]).sum();
        let bound = if m + 1 < 6 {
            tail / lambdas[m] * (lambdas[m + 1] / lambdas[m]).powi(rec.r as i32 - 1)
        } else {
            0.0
        };
        // (b_m/λ_m)^r = f_m + Σ_{j>m} (λ_j/λ_m)^r f_j for orthogonal idempotents.
        let mut diff = Matrix::zeros(chain.truncation_dim, chain.truncation_dim, Backend::Float);
        for j in m + 1..6 {
            diff = &diff
                + &float_family[j]
                    .scale(&Scalar::real((lambdas[j] / lambdas[m]).powi(rec.r as i32)));
        }
        let residual = op_norm(&diff).unwrap();
        ensure!(
            (rec.bound - bound).abs() <= 1e-12 * (1.0 + bound),
            "bound m={} r={}",
            rec.m,
            rec.r
        );
        ensure!(
            (rec.residual - residual).abs() <= 1e-9 * (1.0 + residual),
            "residual m={} r={}",
            rec.m,
            rec.r
        );
        ensure!(
            rec.residual <= rec.bound + tol.abs_tol(),
            "m={} r={}: {} > {}",
            rec.m,
            rec.r,
            rec.residual,
            rec.bound
        );
        count += 1;
    }
    ensure!(count == 240, "{count} records");
    ensure!(cert.passed, "certificate verdict failed");

    let p = vec![Matrix::diag_int(&[1, 0]), Matrix::diag_int(&[0, 1])];
    let wp = WeightSeq::new(vec![rat(1, 2), rat(1, 4)]).unwrap();
    let two = certify_generation(&p, &wp, 40, &tol, Exec::Sequential).map_err(|e| e.to_string())?;
    let mut dev = 0.0f64;
    for rec in &two.per_index[0].records {
        dev = dev.max((rec.residual - 0.5f64.powi(rec.r as i32)).abs());
    }
    ensure!(dev <= 1e-10, "two-projection deviation {dev}");
    Ok(format!(
        "240 residuals within the geometric bound; two-projection case off by {dev:.1e}"
    ))
}

fn oracle_flatten(terms: &[(Matrix, Matrix)], d: usize) -> Matrix {
    terms.iter().fold(
        Matrix::zeros(d * d, d * d, Backend::Exact),
        |acc, (u, v)| &acc + &u.kron(v),
    )
}

fn criterion_4() -> Outcome {
    let chain = build_chain(ChainSpec::new(10)).map_err(|e| e.to_string())?;
    let d = chain.truncation_dim;
    let one = Matrix::identity(d, Backend::Exact);
    let es = &chain.idempotents;
    let mut deltas = Vec::new();
    for n in 1..=10 {
        let delta = build_delta(&chain, n).map_err(|e| e.to_string())?;
        // Δ_n = e_1⊗e_1 + Σ_{j=2..n} (e_j − e_{j−1})⊗(e_j − e_{j−1})
        let mut terms = vec![(es[0].clone(), es[0].clone())];
        for j in 1..n {
            let g = &es[j] - &es[j - 1];
            terms.push((g.clone(), g));
        }
        ensure!(
            flatten(&delta) == oracle_flatten(&terms, d),
            "Δ_{n} differs from its formula"
        );
        let pi: Matrix = terms
            .iter()
            .fold(Matrix::zeros(d, d, Backend::Exact), |acc, (u, v)| {
                &acc + &(u * v)
            });
        ensure!(
            pi == es[n - 1] && pi_map(&delta) == es[n - 1],
            "π(Δ_{n}) ≠ e_{n}"
        );
        for (m, e) in es.iter().enumerate() {
            let left: Vec<_> = terms.iter().map(|(u, v)| (e * u, v.clone())).collect();
            let right: Vec<_> = terms.iter().map(|(u, v)| (u.clone(), v * e)).collect();
            ensure!(
                oracle_flatten(&left, d) == oracle_flatten(&right, d),
                "e_{} Δ_{n} ≠ Δ_{n} e_{}",
                m + 1,
                m + 1
            );
            let lib = bimodule_commutator(e, &delta).map_err(|e| e.to_string())?;
            ensure!(
                flatten(&lib).is_zero(),
                "library commutator e_{} Δ_{n} nonzero",
                m + 1
            );
        }
        let u = pi_map(&delta);
        let mm = unitize_diagonal(&delta, &u, &one).map_err(|e| e.to_string())?;
        // M = 2Δ − u·Δ + (1−u)⊗(1−u)
        let gap = &one - &u;
        let mut mterms: Vec<(Matrix, Matrix)> = terms
            .iter()
            .map(|(a, b)| (a.scale(&Scalar::int(2)), b.clone()))
            .collect();
        mterms.extend(terms.iter().map(|(a, b)| (-&(&u * a), b.clone())));
        mterms.push((gap.clone(), gap));
        ensure!(
            flatten(&mm) == oracle_flatten(&mterms, d),
            "M_{n} differs from its formula"
        );
        let pi_m = mterms
            .iter()
            .fold(Matrix::zeros(d, d, Backend::Exact), |acc, (a, b)| {
                &acc + &(a * b)
            });
        ensure!(pi_m == one && pi_map(&mm) == one, "π(M_{n}) ≠ 1");
        deltas.push(delta);
    }
    let sample: Vec<_> = es
        .iter()
        .enumerate()
        .map(|(i, e)| SampleElement::new(format!("e_{}", i + 1), e.clone()))
        .collect();
    let rep = certify_mbad(
        &deltas,
        &chain,
        &sample,
        &Tolerance::default(),
        Exec::Sequential,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        rep.c == 0.0 && rep.verdict,
        "C = {}, verdict {}",
        rep.c,
        rep.verdict
    );
    Ok(format!(
        "π(Δ_n) = e_n, e_m·Δ_n = Δ_n·e_m, π(M_n) = 1 exact for m, n ≤ 10; C = 0, K = {:.4}",
        rep.k
    ))
}

fn criterion_5() -> Outcome {
    let mut norms = Vec::new();
    for t in [1i64, 10, 100] {
        let demo = skew_idempotent_demo(&BigRational::from_integer(t.into()))
            .map_err(|e| e.to_string())?;
        let e = Matrix::from_int_rows(&[&[1, t], &[0, 0]]);
        let p = Matrix::diag_int(&[1, 0]);
        let g = &Matrix::identity(2, Backend::Exact) - &e;
        // E(x) = e x e + (1−e) x (1−e)
        let e_of_p = &(&(&e * &p) * &e) + &(&(&g * &p) * &g);
        ensure!(e_of_p == e, "oracle E(p) ≠ e at t={t}");
        ensure!(demo.e_of_p == e && demo.e == e, "library E(p) ≠ e at t={t}");
        ensure!(demo.pass, "demo verdict failed at t={t}");
        let expect = ((1 + t * t) as f64).sqrt();
        ensure!(
            (demo.norm_e - expect).abs() <= 1e-8,
            "‖e‖ = {} vs {expect}",
            demo.norm_e
        );
        ensure!(
            (demo.norm_e_of_p - demo.norm_e).abs() <= 1e-12,
            "‖E(p)‖ ≠ ‖e‖"
        );
        norms.push(demo.norm_e);
    }
    Ok(format!(
        "E(p) = e exact for t = 1, 10, 100; ‖e‖ = {:.6}, {:.6}, {:.6}",
        norms[0], norms[1], norms[2]
    ))
}

fn basis(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| Scalar::int(i64::from(k == i))).collect()
}

fn add(a: &[Scalar], b: &[Scalar], s: i64) -> Vec<Scalar> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + Scalar::int(s) * y.clone())
        .collect()
}

/// `E_n = y_n x_n*` with index order (α, ω, 1, ..., n_max).
fn e_oracle(n_max: usize, n: usize) -> Matrix {
    let dim = n_max + 2;
    let (alpha, omega, en) = (basis(dim, 0), basis(dim, 1), basis(dim, n + 1));
    let x = add(&add(&omega, &alpha, 1), &en, 1);
    let y = add(&add(&omega, &alpha, -1), &en, 1);
    Matrix::outer(&y, &x)
}

fn criterion_6() -> Outcome {
    let n_max = 12;
    let fam = RankOneFamily::new(n_max).map_err(|e| e.to_string())?;
    let es: Vec<Matrix> = (1..=n_max).map(|n| e_oracle(n_max, n)).collect();
    for (i, e) in es.iter().enumerate() {
        ensure!(
            build_e(i + 1, &fam).unwrap() == *e,
            "E_{} differs from y x*",
            i + 1
        );
        ensure!(&(e * e) == e, "E_{}² ≠ E_{}", i + 1, i + 1);
        let norm = op_norm(e).unwrap();
        ensure!((norm - 3.0).abs() <= 1e-9, "‖E_{}‖ = {norm}", i + 1);
        for (j, f) in es.iter().enumerate() {
            ensure!(i == j || (e * f).is_zero(), "E_{} E_{} ≠ 0", i + 1, j + 1);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..100 {
        let coeffs: Vec<Cq> = (0..n_max)
            .map(|_| {
                let d = rng.random_range(1..=16);
                Complex::new(
                    cq(rng.random_range(-16..=16), d).re,
                    cq(rng.random_range(-16..=16), d).re,
                )
            })
            .collect();
        let mut s = Matrix::zeros(n_max + 2, n_max + 2, Backend::Exact);
        for (a, e) in coeffs.iter().zip(&es) {
            s = &s + &e.scale(&Scalar::Exact(a.clone()));
        }
        let sum: Cq = coeffs.iter().cloned().sum();
        ensure!(
            s.get(1, 1) == Scalar::Exact(sum.clone()),
            "trial {trial}: ω entry ≠ Σ a_j"
        );
        let sum_abs = Scalar::Exact(sum).abs();
        ensure!(
            sum_abs <= op_norm(&s).unwrap() + 1e-9,
            "trial {trial}: |Σ a_j| > ‖Σ a_j E_j‖"
        );
    }
    let rep = certify_e_family(&fam, 100, 7, &Tolerance::default()).map_err(|e| e.to_string())?;
    ensure!(rep.pass, "library certificate failed: {rep:?}");
    Ok("E_n² = E_n, E_j E_k = 0, ‖E_n‖ = 3 for n ≤ 12; ω-entry witness exact on 100 trials".into())
}

fn brute_force(a: &[C64]) -> f64 {
    let n = a.len();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << n) {
        let s: C64 = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| a[b]).sum();
        best = best.max(s.norm());
    }
    best
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut min_ratio = f64::INFINITY;
    for trial in 0..200 {
        let len = rng.random_range(1..=12);
        let a: Vec<C64> = (0..len)
            .map(|_| C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
            .collect();
        let s = best_subset_sum(&a).map_err(|e| e.to_string())?;
        let oracle = brute_force(&a);
        ensure!(
            (s.value - oracle).abs() <= 1e-12 * (1.0 + oracle),
            "trial {trial}: sweep {} vs {oracle}",
            s.value
        );
        let chosen: C64 = s.subset.iter().map(|&j| a[j - 1]).sum();
        ensure!(
            (chosen.norm() - s.value).abs() <= 1e-12 * (1.0 + s.value),
            "trial {trial}: subset/value mismatch"
        );
        let l1: f64 = a.iter().map(|z| z.norm()).sum();
        ensure!(s.value >= l1 / PI, "trial {trial}: {} < ‖a‖₁/π", s.value);
        min_ratio = min_ratio.min(s.value / l1);
    }
    let mut ratios = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let a: Vec<C64> = (0..n)
            .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
            .collect();
        let v = best_subset_sum(&a).map_err(|e| e.to_string())?.value;
        let ratio = v / n as f64;
        let closed = 1.0 / (n as f64 * (PI / n as f64).sin());
        ensure!(
            (ratio - closed).abs() <= 1e-12,
            "n={n}: {ratio} vs closed form {closed}"
        );
        ensure!(ratio > 1.0 / PI, "n={n}: ratio {ratio} ≤ 1/π");
        ratios.push(ratio);
    }
    ensure!(
        ratios.windows(2).all(|w| w[1] < w[0]),
        "roots ratios not decreasing: {ratios:?}"
    );
    ensure!((ratios[0] - 0.3266).abs() < 1e-4, "n=8 ratio {}", ratios[0]);
    Ok(format!(
        "sweep = brute force on 200 vectors (min ratio {min_ratio:.4}); roots ratios {:.5} {:.5} {:.5} {:.5} > 1/π",
        ratios[0], ratios[1], ratios[2], ratios[3]
    ))
}

fn embed_params() -> EmbedParams {
    EmbedParams {
        n_max: 10,
        f_cap: 512,
        s_max: 8,
        trials: 100,
        rational_trials: 25,
        seed: 7,
    }
}

fn ambient_block(coeffs: &[Scalar], subset: &[usize], n_max: usize) -> Matrix {
    let mut s = Matrix::zeros(n_max + 2, n_max + 2, Backend::Float);
    for &j in subset {
        s = &s + &e_oracle(n_max, j).scale(&coeffs[j - 1]);
    }
    let mut idx = vec![0, 1];
    idx.extend(subset.iter().map(|&j| j + 1));
    s.restrict(&idx)
}

fn criterion_8() -> Outcome {
    let rep =
        certify_embedding_bounds(embed_params(), Exec::Sequential).map_err(|e| e.to_string())?;
    ensure!(rep.records.len() == 100, "{} trials", rep.records.len());
    for r in &rep.records {
        ensure!(
            r.l1_norm / PI <= r.sup_norm + 1e-9,
            "trial {}: lower bound",
            r.trial
        );
        ensure!(
            r.sup_norm <= 3.0 * r.l1_norm + 1e-9,
            "trial {}: upper bound",
            r.trial
        );
        ensure!(
            r.witness_sum >= r.l1_norm / PI,
            "trial {}: witness below ‖a‖₁/π",
            r.trial
        );
        ensure!(
            r.witness_block_norm >= r.witness_sum - 1e-9,
            "trial {}: block norm below witness",
            r.trial
        );
    }
    ensure!(
        rep.upper_tight && rep.delta_ratios.iter().all(|r| (r - 3.0).abs() <= 1e-9),
        "δ_j ratios {:?}",
        rep.delta_ratios
    );
    ensure!(rep.lower_witnessed, "lower bound not witnessed");
    ensure!(
        rep.multiplicative_exact && rep.multiplicative_trials == 25,
        "library multiplicativity"
    );

    // Independent checks: blocks are restrictions of Σ a_j E_j, and φ is multiplicative.
    let fam = SubsetFamily::canonical(10, 512, 8).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..3 {
        let a: Vec<Scalar> = (0..10)
            .map(|_| {
                Scalar::Float(C64::new(
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                ))
            })
            .collect();
        for f in fam.subsets().iter().step_by(37) {
            let diff = phi_block(&a, f)
                .max_abs_diff(&ambient_block(&a, f, 10))
                .unwrap();
            ensure!(
                diff <= 1e-14,
                "block {f:?} differs from the ambient restriction by {diff}"
            );
        }
    }
    for _ in 0..3 {
        let draw = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
            (0..10)
                .map(|_| Scalar::ratio(rng.random_range(-5..=5), rng.random_range(1..=3)))
                .collect()
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let ab: Vec<Scalar> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.clone() * y.clone())
            .collect();
        let lhs = phi(&a, &fam).unwrap();
        let rhs = phi(&b, &fam).unwrap();
        let target = phi(&ab, &fam).unwrap();
        for ((x, y), z) in lhs.blocks.iter().zip(&rhs.blocks).zip(&target.blocks) {
            ensure!(&(x * y) == z, "φ(a)φ(b) ≠ φ(ab)");
        }
    }
    Ok(format!(
        "ratios in [{:.4}, {:.4}] ⊂ [1/π, 3]; δ_j attains 3; sweep witness inside every family; φ multiplicative",
        rep.min_ratio, rep.max_ratio
    ))
}

fn criterion_9() -> Outcome {
    let rep =
        certify_embedding_bounds(embed_params(), Exec::Sequential).map_err(|e| e.to_string())?;
    for r in &rep.records {
        ensure!(
            r.trace_geometric <= 3.0 * r.inf_norm + 1e-9,
            "trial {}: geometric trace norm",
            r.trial
        );
        ensure!(
            r.trace_uniform <= 3.0 * r.inf_norm + 1e-9,
            "trial {}: uniform trace norm",
            r.trial
        );
        ensure!(
            r.trace_geometric <= r.sup_norm + 1e-9 && r.trace_uniform <= r.sup_norm + 1e-9,
            "trial {}: trace above sup",
            r.trial
        );
    }
    ensure!(
        rep.trace_ok_geometric && rep.trace_ok_uniform && rep.trace_le_sup,
        "library verdicts"
    );

    // Independent evaluation of Σ_F λ_F S_1(φ(a)_F) / (|F|+2) with explicit weights.
    let fam = SubsetFamily::canonical(10, 512, 8).map_err(|e| e.to_string())?;
    let n = fam.len();
    let geo: Vec<f64> = (1..=n)
        .map(|k| 0.5f64.powi(k as i32) / (1.0 - 0.5f64.powi(n as i32)))
        .collect();
    let uni = vec![1.0 / n as f64; n];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let a: Vec<Scalar> = (0..10)
            .map(|_| {
                Scalar::Float(C64::new(
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                ))
            })
            .collect();
        let inf = a.iter().map(Scalar::abs).fold(0.0, f64::max);
        let e = phi(&a, &fam).unwrap();
        let sup = phi_sup_norm(&e).unwrap();
        let s1: Vec<f64> = e
            .blocks
            .iter()
            .map(|b| schatten1_norm(b).unwrap())
            .collect();
        for (weights, scheme) in [(&geo, TraceScheme::Geometric), (&uni, TraceScheme::Uniform)] {
            let oracle: f64 = fam
                .subsets()
                .iter()
                .zip(weights)
                .zip(&s1)
                .map(|((f, l), s)| l * s / (f.len() + 2) as f64)
                .sum();
            let lib = l1_trace_norm(&e, &make_trace(&fam, scheme).unwrap()).unwrap();
            ensure!((lib - oracle).abs() <= 1e-12, "{scheme}: {lib} vs {oracle}");
            ensure!(
                oracle <= 3.0 * inf + 1e-9 && oracle <= sup + 1e-9,
                "{scheme}: bound fails"
            );
            worst = worst.max(oracle / (3.0 * inf));
        }
    }
    Ok(format!("trace norm ≤ 3‖a‖_∞ and ≤ ‖φ(a)‖ for both schemes on all trials (max ratio to 3‖a‖_∞: {worst:.3})"))
}

fn run_cli(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_opalg"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn opalg");
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&o.stdout).into_owned(),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = ["all", "--seed", "7", "--trials", "40"];
    let (code_a, _) = run_cli(&args, &a);
    let (code_b, _) = run_cli(&args, &b);
    ensure!(
        code_a == 0 && code_b == 0,
        "exit codes {code_a}, {code_b} for a passing run"
    );
    let ja = std::fs::read(a.join("report.json")).map_err(|e| e.to_string())?;
    let jb = std::fs::read(b.join("report.json")).map_err(|e| e.to_string())?;
    ensure!(ja == jb, "report.json differs between identical runs");
    for csv in [
        "norm_profile.csv",
        "generation_residuals.csv",
        "embedding_ratios.csv",
    ] {
        ensure!(
            std::fs::read(a.join(csv)).unwrap() == std::fs::read(b.join(csv)).unwrap(),
            "{csv} differs"
        );
    }
    let report: serde_json::Value = serde_json::from_slice(&ja).map_err(|e| e.to_string())?;
    ensure!(report["pass"] == true, "report verdict is not pass");

    let (code_fail, _) = run_cli(
        &["generate", "--weight-scheme", "geometric:2"],
        &dir.path().join("c"),
    );
    ensure!(code_fail == 1, "failing run exited with {code_fail}");
    let failed: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("c/report.json")).unwrap()).unwrap();
    ensure!(failed["pass"] == false, "failing run reported pass");
    let (code_bad, _) = run_cli(&["chain", "--trials", "0"], &dir.path().join("d"));
    ensure!(code_bad == 2, "invalid config exited with {code_bad}");
    Ok(format!(
        "{} byte-identical report.json; exit codes 0 / 1 / 2 for pass / fail / invalid",
        ja.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("semilattice exactness", criterion_1),
        ("unbounded idempotents", criterion_2),
        ("generation rate", criterion_3),
        ("diagonal identities", criterion_4),
        ("expectation demo", criterion_5),
        ("rank-one idempotent family", criterion_6),
        ("subset-sum inequality", criterion_7),
        ("embedding bounds", criterion_8),
        ("trace-norm bound", criterion_9),
        ("reproducibility", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}

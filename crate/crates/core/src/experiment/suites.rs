use std::f64::consts::PI;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::chain::{build_chain, norm_profile, verify_semilattice, Chain, ChainSpec};
use crate::diagonal::{
    bimodule_commutator, build_delta, certify_mbad, flatten, pi_map, skew_idempotent_demo,
    unitize_diagonal, SampleElement,
};
use crate::embedding::{
    certify_e_family, certify_embedding_bounds, certify_subset_sums, EmbedParams, RankOneFamily,
    TraceScheme,
};
use crate::error::Result;
use crate::generation::{certify_generation, WeightSeq};
use crate::matrix::{is_idempotent, rat, Backend, Matrix, Scalar, Tolerance};
use crate::par::Exec;
use crate::sampling::substream;

use super::config::ExperimentConfig;
use super::report::{CheckRecord, NormRow, RatioRow, ResidualRow, Series};

pub(super) struct SuiteOutput {
    pub checks: Vec<CheckRecord>,
    pub details: Value,
}

fn exec_of(cfg: &ExperimentConfig) -> Exec {
    Exec::from_flag(cfg.parallel)
}

fn chain_of(cfg: &ExperimentConfig) -> Result<Chain> {
    build_chain(ChainSpec::with_scheme(cfg.m_max, &cfg.coupling()?)?)
}

pub(super) fn chain_suite(cfg: &ExperimentConfig, series: &mut Series) -> Result<SuiteOutput> {
    let chain = chain_of(cfg)?;
    let tol = cfg.tolerance()?;
    let mut checks = Vec::new();

    let idem = chain
        .idempotents
        .iter()
        .map(|e| is_idempotent(e, &Tolerance::exact()))
        .collect::<Result<Vec<_>>>()?;
    checks.push(CheckRecord::new(
        "idempotency",
        "e_n^2 = e_n",
        json!(true),
        json!(idem),
        idem.iter().all(|&b| b),
    ));

    let lattice = verify_semilattice(&chain, &tol)?;
    checks.push(CheckRecord::new(
        "semilattice",
        "e_m e_n = e_min(m,n) = e_n e_m",
        json!({"pairs_checked": chain.len() * chain.len(), "all_exact": true}),
        json!({"pairs_checked": lattice.pairs_checked, "all_exact": lattice.all_exact, "failures": lattice.failures}),
        lattice.all_exact,
    ));

    let profile = norm_profile(&chain)?;
    for e in &profile.entries {
        let anchor = if e.index % 2 == 1 {
            "‖e_(2k-1)‖ = 1"
        } else {
            "‖e_2k‖ ≥ ‖b_2k‖"
        };
        checks.push(
            CheckRecord::new(
                format!("norm[e_{}]", e.index),
                anchor,
                json!(e.expected),
                json!(e.norm),
                e.pass,
            )
            .with_bound(e.lower_bound),
        );
        series.norm_profile.push(NormRow {
            index: e.index,
            norm: e.norm,
            lower_bound: e.lower_bound,
            expected: e.expected,
        });
    }
    let evens: Vec<f64> = profile
        .entries
        .iter()
        .filter(|e| e.index % 2 == 0)
        .map(|e| e.norm)
        .collect();
    let growing = evens.windows(2).all(|w| w[1] >= w[0]);
    checks.push(CheckRecord::new(
        "even_norm_growth",
        "‖e_2k‖ ≥ ‖b_2k‖ → ∞",
        json!("nondecreasing"),
        json!(evens),
        growing,
    ));
    Ok(SuiteOutput {
        checks,
        details: json!({"semilattice": lattice, "norm_profile": profile, "truncation_dim": chain.truncation_dim}),
    })
}

const GENERATION_ANCHOR: &str =
    "‖f_m − (b_m/λ_m)^r‖ ≤ λ_m^-1 (λ_(m+1)/λ_m)^(r-1) Σ_(j>m) λ_j ‖f_j‖";

pub(super) fn generate_suite(cfg: &ExperimentConfig, series: &mut Series) -> Result<SuiteOutput> {
    let chain = chain_of(cfg)?;
    let tol = cfg.tolerance()?;
    let r_max = u32::try_from(cfg.r_max).expect("validated");
    let family = chain.orthogonal_family();
    let w = cfg.weights()?.weights(&family)?;
    let cert = certify_generation(&family, &w, r_max, &tol, exec_of(cfg))?;
    let mut checks = Vec::new();
    for ic in &cert.per_index {
        let worst = ic
            .records
            .iter()
            .map(|r| r.residual - r.bound)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(CheckRecord::new(
            format!("generation[m={}]", ic.m),
            GENERATION_ANCHOR,
            json!({"bound_holds": true, "tail_decreasing": true}),
            json!({"bound_holds": ic.bound_holds, "tail_decreasing": ic.tail_decreasing, "max_excess": worst, "rate": ic.rate}),
            ic.passed,
        ));
    }
    checks.push(CheckRecord::new(
        "recovered_span",
        "e_m = lim_r (b_m/λ_m)^r",
        json!({"ranks_equal": true}),
        json!({"ranks": cert.ranks}),
        cert.span_matches,
    ));
    series
        .generation_residuals
        .extend(cert.records().map(|r| ResidualRow {
            m: r.m,
            r: r.r,
            residual: r.residual,
            bound: r.bound,
            passed: r.passed,
        }));

    // Two orthogonal rank-one projections with λ = (1/2, 1/4): residual 2^-r.
    let p = vec![Matrix::diag_int(&[1, 0]), Matrix::diag_int(&[0, 1])];
    let wp = WeightSeq::new(vec![rat(1, 2), rat(1, 4)])?;
    let two = certify_generation(&p, &wp, r_max, &tol, Exec::Sequential)?;
    let max_dev = two.per_index[0]
        .records
        .iter()
        .map(|r| (r.residual - 0.5f64.powi(r.r as i32)).abs())
        .fold(0.0, f64::max);
    checks.push(
        CheckRecord::new(
            "two_projection_rate",
            "‖e_1 − (2b)^r‖ = 2^-r",
            json!(0.0),
            json!(max_dev),
            max_dev <= 1e-10 && two.passed,
        )
        .with_bound(1e-10),
    );
    Ok(SuiteOutput {
        checks,
        details: json!({"certificate": cert, "two_projection": two}),
    })
}

fn mbad_sample(chain: &Chain, seed: u64) -> Vec<SampleElement> {
    use rand::Rng;
    let one = chain.identity();
    let mut sample = vec![SampleElement::new(
        "0",
        Matrix::zeros(chain.truncation_dim, chain.truncation_dim, Backend::Exact),
    )];
    sample.push(SampleElement::new("1", one.clone()));
    for (i, e) in chain.idempotents.iter().enumerate() {
        sample.push(SampleElement::new(format!("e_{}", i + 1), e.clone()));
        sample.push(SampleElement::new(format!("1-e_{}", i + 1), &one - e));
    }
    let mut rng = substream(seed, "diagonal-sample");
    for t in 0..3 {
        let mut a = one.scale(&Scalar::ratio(rng.random_range(-4..=4), 2));
        for e in &chain.idempotents {
            a = &a
                + &e.scale(&Scalar::ratio(
                    rng.random_range(-4..=4),
                    rng.random_range(1..=3),
                ));
        }
        sample.push(SampleElement::new(format!("random_{t}"), a));
    }
    sample
}

pub(super) fn diagonal_suite(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let chain = chain_of(cfg)?;
    let tol = cfg.tolerance()?;
    let m = chain.len();
    let one = chain.identity();
    let deltas = (1..=m)
        .map(|n| build_delta(&chain, n))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();

    let units: Vec<Matrix> = deltas.iter().map(pi_map).collect();
    let pi_fail: Vec<usize> = (1..=m)
        .filter(|&n| &units[n - 1] != chain.e(n).expect("in range"))
        .collect();
    checks.push(CheckRecord::new(
        "pi_delta",
        "π(Δ_n) = e_n",
        json!([]),
        json!({"checked": m, "failures": pi_fail}),
        pi_fail.is_empty(),
    ));

    let mut comm_fail = Vec::new();
    for (n, d) in deltas.iter().enumerate() {
        for (k, e) in chain.idempotents.iter().enumerate() {
            if !flatten(&bimodule_commutator(e, d)?).is_zero() {
                comm_fail.push((k + 1, n + 1));
            }
        }
    }
    checks.push(CheckRecord::new(
        "commutation",
        "e_m·Δ_n = Δ_n·e_m",
        json!([]),
        json!({"checked": m * m, "failures": comm_fail}),
        comm_fail.is_empty(),
    ));

    let unitized: Vec<bool> = deltas
        .iter()
        .zip(&units)
        .map(|(d, u)| unitize_diagonal(d, u, &one).map(|mm| pi_map(&mm) == one))
        .collect::<Result<_>>()?;
    checks.push(CheckRecord::new(
        "unitized_pi",
        "π(M_n) = 1 for M_n = 2Δ_n − u_n·Δ_n + (1−u_n)⊗(1−u_n)",
        json!(true),
        json!(unitized),
        unitized.iter().all(|&b| b),
    ));

    let sample = mbad_sample(&chain, cfg.seed);
    let mbad = certify_mbad(&deltas, &chain, &sample, &tol, exec_of(cfg))?;
    checks.push(CheckRecord::new(
        "multiplier_constant",
        "sup_n ‖a·Δ_n − Δ_n·a‖ ≤ C‖a‖",
        json!(0.0),
        json!(mbad.c),
        mbad.c == 0.0,
    ));
    for r in &mbad.records {
        checks.push(
            CheckRecord::new(
                format!("mbad[{}]", r.a_label),
                "lim_n ‖a π(Δ_n) − a‖ = 0; ‖a·M_n − M_n·a‖ ≤ ((2+K)C + 2(1+K)^2)‖a + λ1‖",
                json!({"in_span": true, "eventual_residual": 0.0, "commutator_upper": 0.0}),
                json!({
                    "in_span": r.in_span,
                    "eventual_residual": r.eventual_residual,
                    "first_zero_at": r.first_zero_at,
                    "commutator_upper": r.commutator_upper,
                    "unitized_commutator_upper": r.unitized_commutator_upper,
                }),
                r.pass,
            )
            .with_bound(r.unitized_bound),
        );
    }

    let mut demos = Vec::new();
    for t in [1i64, 10, 100] {
        let demo = skew_idempotent_demo(&BigRational::from_integer(t.into()))?;
        let expected = ((1 + t * t) as f64).sqrt();
        let ok = demo.pass && (demo.norm_e - expected).abs() <= 1e-8 && demo.e_of_p == demo.e;
        checks.push(CheckRecord::new(
            format!("expectation[t={t}]"),
            "E(p) = E(ep) = eE(p) = E(p)e = E(pe) = E(e) = e",
            json!({"e_of_p_equals_e": true, "norm_e": expected}),
            json!({"e_of_p_equals_e": demo.e_of_p == demo.e, "norm_e": demo.norm_e, "links": demo.chain_links}),
            ok,
        ));
        demos.push(demo);
    }
    Ok(SuiteOutput {
        checks,
        details: json!({"mbad": mbad, "skew_demos": demos}),
    })
}

pub(super) fn embed_suite(cfg: &ExperimentConfig, series: &mut Series) -> Result<SuiteOutput> {
    let tol = cfg.tolerance()?;
    let exec = exec_of(cfg);
    let mut checks = Vec::new();

    let fam = RankOneFamily::new(cfg.n_max)?;
    let efam = certify_e_family(&fam, cfg.trials, cfg.seed, &tol)?;
    checks.push(CheckRecord::new(
        "rank_one_family",
        "E_n^2 = E_n, E_j E_k = 0 (j ≠ k), ‖E_n‖ ≤ 3",
        json!({"idempotent": true, "orthogonal": true, "norm": 3.0}),
        json!({
            "idempotent": efam.idempotent_exact,
            "orthogonal": efam.products_zero_exact,
            "norms": efam.norms,
            "range_ok": efam.range_ok,
        }),
        efam.idempotent_exact && efam.products_zero_exact && efam.norms_ok && efam.range_ok,
    ));
    checks.push(CheckRecord::new(
        "omega_witness",
        "‖Σ a_j E_j‖ ≥ |Σ a_j|",
        json!({"exact": true, "bound": true}),
        json!({"exact": efam.witness_exact, "bound": efam.witness_bound_ok, "trials": efam.witness_trials}),
        efam.witness_exact && efam.witness_bound_ok,
    ));

    let sums = certify_subset_sums(cfg.trials, 12, cfg.seed, &[8, 16, 32, 64], exec)?;
    checks.push(CheckRecord::new(
        "subset_sum_sweep",
        "sup_F |Σ_(j∈F) a_j| ≥ ‖a‖_1/π",
        json!({"matches_exhaustive": true, "min_ratio_at_least": 1.0 / PI}),
        json!({"matches_exhaustive": sums.sweep_matches_exhaustive, "min_ratio": sums.min_ratio}),
        sums.sweep_matches_exhaustive && sums.above_bound,
    ).with_bound(1.0 / PI));
    checks.push(
        CheckRecord::new(
            "roots_of_unity",
            "sup_F |Σ_(j∈F) a_j| ≥ ‖a‖_1/π",
            json!({"decreasing": true, "above": 1.0 / PI}),
            json!(sums
                .roots
                .iter()
                .map(|r| json!({"n": r.n, "ratio": r.ratio}))
                .collect::<Vec<_>>()),
            sums.roots_decreasing && sums.roots.iter().all(|r| r.above_bound),
        )
        .with_bound(1.0 / PI),
    );

    let params = EmbedParams {
        n_max: cfg.n_max,
        f_cap: cfg.f_cap,
        s_max: cfg.s_max,
        trials: cfg.trials,
        rational_trials: cfg.rational_trials,
        seed: cfg.seed,
    };
    let emb = certify_embedding_bounds(params, exec)?;
    checks.push(CheckRecord::new(
        "embedding_bounds",
        "‖a‖_1/π ≤ ‖φ(a)‖ ≤ 3‖a‖_1",
        json!({"min_ratio_at_least": 1.0 / PI, "max_ratio_at_most": 3.0}),
        json!({"min_ratio": emb.min_ratio, "max_ratio": emb.max_ratio, "lower_witnessed": emb.lower_witnessed}),
        emb.records.iter().all(|r| r.lower_ok && r.upper_ok) && emb.lower_witnessed,
    ));
    checks.push(CheckRecord::new(
        "embedding_upper_tight",
        "‖φ(δ_j)‖ = 3",
        json!(3.0),
        json!(emb.delta_ratios),
        emb.upper_tight,
    ));
    checks.push(CheckRecord::new(
        "embedding_multiplicative",
        "φ(a)φ(b) = φ(ab)",
        json!(true),
        json!({"trials": emb.multiplicative_trials, "exact": emb.multiplicative_exact}),
        emb.multiplicative_exact,
    ));
    for (scheme, ok) in [
        ("geometric", emb.trace_ok_geometric),
        ("uniform", emb.trace_ok_uniform),
    ] {
        checks.push(CheckRecord::new(
            format!("trace_norm[{scheme}]"),
            "‖φ(a)‖_(L¹(τ)) ≤ 3‖a‖_∞",
            json!(true),
            json!(ok),
            ok,
        ));
    }
    checks.push(CheckRecord::new(
        "trace_below_sup",
        "‖φ(a)‖_(L¹(τ)) ≤ ‖φ(a)‖",
        json!(true),
        json!(emb.trace_le_sup),
        emb.trace_le_sup,
    ));
    series
        .embedding_ratios
        .extend(emb.records.iter().map(|r| RatioRow {
            trial: r.trial,
            l1_norm: r.l1_norm,
            sup_norm: r.sup_norm,
            ratio: r.ratio,
            trace_norm: match cfg.trace_scheme {
                TraceScheme::Geometric => r.trace_geometric,
                TraceScheme::Uniform => r.trace_uniform,
            },
        }));
    Ok(SuiteOutput {
        checks,
        details: json!({"e_family": efam, "subset_sums": sums, "embedding": emb}),
    })
}

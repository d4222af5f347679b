//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `cargo test -p lab-cli --test acceptance -- 3 7` runs a subset. Failing criteria are reported
//! but do not fail the process unless `TPCA_ACCEPTANCE_STRICT=1`.

use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use lab_cli::bench::{run_benchmark, BenchOptions};
use lab_cli::concentration::{run_concentration, ConcentrationOptions, Statistic};
use lab_cli::stats::{mann_kendall, median};
use lab_cli::sweep::{run_trial, tau_for, trial_instance, AlgoId, NoiseSpec};
use lab_cli::write_csv;
use ndarray::{s, Array1, Array2};
use pseudo_moments::{
    build_lb_deg3, deg3_lambda, schur_extend, uniform_matrix, uniform_moments, verify_pe, Check,
    ConstructionParams, PreconditionTable, Provenance, PseudoExpectation, VerifyReport, VerifyTolerances,
};
use recovery::{certify_titi, recover_titi, spot_check, BlockOp, CertifyOptions, RecoveryOptions, SymmetricRecoveryPlan, Verdict};
use sos_moment_sdp::{round_sdp, solve_moment_sdp, MomentMatrix, SdpOptions};
use spectral_ops::{
    dense_eig_oracle, op_gram, op_titi, top_singular_shifted, top_singular_value, LinearOperator, PowerOptions,
    Transpose,
};
use tensor_core::rng::{self, derive_seed, ids};
use tensor_core::DenseTensor;

const BASE_SEED: u64 = 0x5eed_acce;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Pseudo-expectations built by earlier criteria, re-examined by the inequality suite.
#[derive(Default)]
struct Shared {
    verified: Vec<(String, VerifyReport)>,
}

fn log_n_factor(n: usize) -> f64 {
    (n as f64).powf(0.75) * (n as f64).ln().powf(0.25)
}

fn norm(x: &Array1<f64>) -> f64 {
    x.dot(x).sqrt()
}

fn rel_err(got: &Array1<f64>, want: &Array1<f64>) -> f64 {
    norm(&(got - want)) / norm(want).max(f64::MIN_POSITIVE)
}

fn dense_centered_titi(t: &DenseTensor) -> Array2<f64> {
    let n = t.dim();
    let a = t.as_slice();
    let n2 = n * n;
    Array2::from_shape_fn((n2, n2), |(r, c)| {
        let (j, k, l, m) = (r / n, r % n, c / n, c % n);
        let s: f64 = (0..n).map(|i| a[i * n2 + j * n + l] * a[i * n2 + k * n + m]).sum();
        s - if j == k && l == m { n as f64 } else { 0.0 }
    })
}

/// `R_X G (K_Y ⊗ K_Z) Gᵀ R_Xᵀ` with `K_B = R_Bᵀ R_B`, assembled densely.
fn dense_block(t: &DenseTensor, plan: &SymmetricRecoveryPlan, block: usize) -> Array2<f64> {
    let n = t.dim();
    let rows = |b: usize| plan.rotation.select(ndarray::Axis(0), &plan.blocks[b]);
    let k = |b: usize| {
        let r = rows(b);
        r.t().dot(&r)
    };
    let (ky, kz) = (k((block + 1) % 3), k((block + 2) % 3));
    let kron = Array2::from_shape_fn((n * n, n * n), |(r, c)| ky[[r / n, c / n]] * kz[[r % n, c % n]]);
    let g = t.matrix(1);
    let rx = rows(block);
    let left = rx.dot(&g);
    left.dot(&kron).dot(&left.t())
}

fn top_pair_gap(value: f64, vector: &Array1<f64>, dense: &Array2<f64>) -> Result<(f64, f64)> {
    let (dv, dvec) = dense_eig_oracle(dense)?.top();
    Ok(((value - dv).abs() / dv.abs(), 1.0 - vector.dot(&dvec).abs() / norm(vector)))
}

fn criterion_1(_: &mut Shared) -> Result<Outcome> {
    let mut worst_apply = 0.0_f64;
    let (mut worst_value, mut worst_vector) = (0.0_f64, 0.0_f64);
    for (n, seed) in [(10, 1u64), (20, 2), (30, 3)] {
        let inst = trial_instance(n, 3, tau_for(n, 3, 3.0), NoiseSpec::Iid, seed)?;
        let t = &inst.tensor;
        let u = t.matrix(1);
        let gram_dense = u.dot(&u.t());
        let titi_dense = dense_centered_titi(t);
        let plan = SymmetricRecoveryPlan::draw(n, seed)?;
        let gram = op_gram(t)?;
        let titi = op_titi(t, true)?;
        let blocks = (0..3).map(|b| BlockOp::new(t, &plan, b)).collect::<recovery::Result<Vec<_>>>()?;
        let block_dense: Vec<Array2<f64>> = (0..3).map(|b| dense_block(t, &plan, b)).collect();

        let mut r = rng::stream(seed, ids::PROBE);
        for _ in 0..20 {
            let x = Array1::from(rng::gaussian_vec(&mut r, n));
            worst_apply = worst_apply.max(rel_err(&gram.apply(x.view()), &gram_dense.dot(&x)));
            let y = Array1::from(rng::gaussian_vec(&mut r, n * n));
            worst_apply = worst_apply.max(rel_err(&titi.apply(y.view()), &titi_dense.dot(&y)));
            worst_apply = worst_apply.max(rel_err(&titi.apply_transpose(y.view()), &titi_dense.t().dot(&y)));
            for (op, dense) in blocks.iter().zip(&block_dense) {
                let z = Array1::from(rng::gaussian_vec(&mut r, op.dim()));
                worst_apply = worst_apply.max(rel_err(&op.apply(z.view()), &dense.dot(&z)));
            }
        }

        let power = PowerOptions { tol: 1e-13, max_iter: Some(100_000), ..PowerOptions::seeded(seed) };
        let mut track = |(dv, dvec): (f64, f64)| {
            worst_value = worst_value.max(dv);
            worst_vector = worst_vector.max(dvec);
        };
        let rep = top_singular_shifted(&gram, 0.0, &power)?;
        track(top_pair_gap(rep.value, &rep.vector, &gram_dense)?);
        let rep = top_singular_value(&titi, &power)?;
        let normal = titi_dense.t().dot(&titi_dense);
        let (sq, vec) = top_pair_gap(rep.value * rep.value, &rep.vector, &normal)?;
        track((sq / 2.0, vec));
        for (op, dense) in blocks.iter().zip(&block_dense) {
            let rep = top_singular_shifted(op, 0.0, &power)?;
            track(top_pair_gap(rep.value, &rep.vector, dense)?);
        }
    }
    Ok(Outcome {
        pass: worst_apply <= 1e-8 && worst_value <= 1e-6 && worst_vector <= 1e-6,
        detail: format!(
            "max relative matvec error {worst_apply:.1e} (≤ 1e-8); top value {worst_value:.1e}, top vector {worst_vector:.1e} (≤ 1e-6)"
        ),
    })
}

fn criterion_2(_: &mut Shared) -> Result<Outcome> {
    let mut worst_exact = f64::INFINITY;
    let mut lines = Vec::new();
    let mut cases: Vec<(AlgoId, usize)> = Vec::new();
    for n in [10, 50, 200] {
        cases.extend([(AlgoId::Unfold, n), (AlgoId::Titi, n)]);
    }
    // The moment SDP is limited to n ≤ 12.
    cases.push((AlgoId::Sdp, 10));
    for (algo, n) in cases {
        let inst = trial_instance(n, 3, 1.0, NoiseSpec::Zero, derive_seed(BASE_SEED, &[2, n as u64]))?;
        let corr = run_trial(algo, &inst, inst.seed)?.correlation.unwrap_or(0.0).abs();
        worst_exact = worst_exact.min(corr);
        lines.push(format!("{algo}@{n} {:.1e}", 1.0 - corr));
    }
    let inst = trial_instance(300, 3, 1.0, NoiseSpec::Zero, derive_seed(BASE_SEED, &[2, 300]))?;
    let sym = run_trial(AlgoId::Symmetric, &inst, inst.seed)?.correlation.unwrap_or(0.0).abs();
    Ok(Outcome {
        pass: worst_exact >= 1.0 - 1e-6 && sym >= 0.95,
        detail: format!("1 − |⟨v,v0⟩|: {}; symmetric@300 |⟨v,v0⟩| = {sym:.4} (≥ 0.95)", lines.join(", ")),
    })
}

fn medians(algo: AlgoId, n: usize, tau: f64, noise: NoiseSpec, trials: usize, tag: u64) -> Result<f64> {
    let mut corr = Vec::with_capacity(trials);
    for trial in 0..trials {
        let seed = derive_seed(BASE_SEED, &[tag, n as u64, trial as u64]);
        let inst = trial_instance(n, 3, tau, noise, seed)?;
        corr.push(run_trial(algo, &inst, seed)?.corr_sq.unwrap_or(0.0));
    }
    Ok(median(&corr))
}

fn criterion_3(_: &mut Shared) -> Result<Outcome> {
    let start = Instant::now();
    let n = 100;
    let strong = 3.0 * log_n_factor(n);
    let weak = 0.3 * (n as f64).powf(0.75);
    let mut pass = true;
    let mut parts = Vec::new();
    for algo in [AlgoId::Titi, AlgoId::Unfold] {
        let hi = medians(algo, n, strong, NoiseSpec::Iid, 50, 31)?;
        let lo = medians(algo, n, weak, NoiseSpec::Iid, 50, 32)?;
        pass &= hi >= 0.8 && lo <= 0.3;
        parts.push(format!("{algo}: {hi:.3} at τ={strong:.1}, {lo:.3} at τ={weak:.1}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(600);
    Ok(Outcome { pass, detail: format!("median ⟨v,v0⟩² (≥ 0.8 / ≤ 0.3) {}", parts.join("; ")) })
}

fn criterion_4(_: &mut Shared) -> Result<Outcome> {
    let start = Instant::now();
    let sizes = [50, 75, 100, 150, 200, 300];
    // Fifteen power steps keep the largest size inside the time budget; the resulting
    // underestimate is a few percent and nearly constant in n.
    let opts = ConcentrationOptions { power_steps: 15 };
    let targets = [
        (Statistic::TitiCenteredNorm, 1.5, 0.15),
        (Statistic::SquareOpnorm, 0.5, 0.1),
        (Statistic::RectOpnorm, 1.0, 0.1),
        (Statistic::GramDeviation, 1.5, 0.15),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (stat, want, tol) in targets {
        let rec = run_concentration(stat, &sizes, 10, BASE_SEED, &opts)?;
        let ok = (rec.fit.slope - want).abs() <= tol;
        pass &= ok;
        parts.push(format!("{stat} {:.3} ({want} ± {tol}){}", rec.fit.slope, if ok { "" } else { " ✗" }));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1800);
    Ok(Outcome { pass, detail: parts.join("; ") })
}

fn criterion_5(_: &mut Shared) -> Result<Outcome> {
    let n = 100;
    let tau = (n as f64).powf(7.0 / 8.0);
    let mut unfold = Vec::new();
    let mut titi = Vec::new();
    let mut worst_white = 0.0_f64;
    let n2 = (n * n) as f64;
    for trial in 0..30u64 {
        let seed = derive_seed(BASE_SEED, &[5, trial]);
        let inst = trial_instance(n, 3, tau, NoiseSpec::Whitened, seed)?;
        let u = inst.tensor.matrix(1);
        let dev = u.dot(&u.t()) - Array2::<f64>::eye(n) * n2;
        worst_white = worst_white.max(dense_eig_oracle(&dev)?.values.iter().fold(0.0_f64, |a, x| a.max(x.abs())));
        unfold.push(run_trial(AlgoId::Unfold, &inst, seed)?.corr_sq.unwrap_or(0.0));
        titi.push(run_trial(AlgoId::Titi, &inst, seed)?.corr_sq.unwrap_or(0.0));
    }
    let (mu, mt) = (median(&unfold), median(&titi));
    Ok(Outcome {
        pass: mu <= 0.3 && mt >= 0.8 && worst_white <= 1e-6 * n2,
        detail: format!(
            "median ⟨v,v0⟩²: unfold {mu:.3} (≤ 0.3), titi {mt:.3} (≥ 0.8); max ‖(TQ)ᵀTQ − n²Id‖ = {worst_white:.1e} (≤ {:.0e})",
            1e-6 * n2
        ),
    })
}

/// Local maximizer of the cubic form near `x`, by power iteration on the symmetrized tensor.
fn local_max(sym: &DenseTensor, x: &Array1<f64>, steps: usize) -> Array1<f64> {
    let g = sym.matrix(1);
    let mut x = x / norm(x);
    for _ in 0..steps {
        let xx = Array1::from_iter(x.iter().flat_map(|a| x.iter().map(move |b| a * b)));
        let y = g.dot(&xx);
        let ny = norm(&y);
        if ny == 0.0 {
            break;
        }
        x = y / ny;
    }
    x
}

fn criterion_6(_: &mut Shared) -> Result<Outcome> {
    let n = 100;
    let mut certified = 0;
    let mut false_certify = 0;
    let mut worst_slack = f64::INFINITY;
    for trial in 0..200u64 {
        let seed = derive_seed(BASE_SEED, &[6, trial]);
        let t = trial_instance(n, 3, 0.0, NoiseSpec::Iid, seed)?.tensor;
        // Pure noise has no gap, so recovery would otherwise run its full budget; any unit v
        // serves for soundness.
        let v = recover_titi(&t, &RecoveryOptions::seeded(seed).with_max_iter(30))?.v;
        let cert = certify_titi(&t, v.view(), &CertifyOptions::seeded(seed))?;
        if cert.verdict != Verdict::Certify {
            continue;
        }
        certified += 1;
        let sym = t.symmetrize();
        let mut extra = vec![v.clone(), local_max(&sym, &v, 50)];
        let mut r = rng::stream(seed, ids::SPOT_CHECK);
        for _ in 0..5 {
            extra.push(local_max(&sym, &rng::unit_vector(&mut r, n), 50));
        }
        let check = spot_check(&t, &cert, 200, seed, &extra)?;
        worst_slack = worst_slack.min(check.worst_slack);
        false_certify += usize::from(check.violations > 0);
    }
    let strong = 4.0 * log_n_factor(n);
    let mut rate = Vec::new();
    for trial in 0..50u64 {
        let seed = derive_seed(BASE_SEED, &[60, trial]);
        let inst = trial_instance(n, 3, strong, NoiseSpec::Iid, seed)?;
        let rec = run_trial(AlgoId::CertifyTiti, &inst, seed)?;
        rate.push(rec.verdict.as_deref() == Some("certify"));
    }
    let certify_rate = rate.iter().filter(|&&b| b).count() as f64 / rate.len() as f64;
    Ok(Outcome {
        pass: false_certify == 0 && certify_rate >= 0.9,
        detail: format!(
            "pure noise: {certified}/200 certified, {false_certify} violated (worst slack {worst_slack:.2}); \
             certify rate at τ={strong:.1}: {:.0}% (≥ 90%)",
            certify_rate * 100.0
        ),
    })
}

fn sdp_tolerances() -> VerifyTolerances {
    // The solver stops at residuals of 1e-6, so its moment matrices are exact only to that level.
    VerifyTolerances { psd: 1e-5, sphere: 1e-5, normalization: 1e-5, inequality: 1e-5, ..Default::default() }
}

fn criterion_7(shared: &mut Shared) -> Result<Outcome> {
    let tau = 2.0;
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [4, 6, 8] {
        let inst = trial_instance(n, 3, tau, NoiseSpec::Zero, derive_seed(BASE_SEED, &[7, n as u64]))?;
        let sol = solve_moment_sdp(&inst.tensor, None, &SdpOptions::default())?;
        let rounded = round_sdp(&sol)?.with_truth(inst.v0.view());
        let corr = rounded.correlation.unwrap_or(0.0).abs();
        let gap = (sol.objective - tau).abs();
        let ok = sol.converged
            && sol.primal_residual <= 1e-6
            && sol.dual_residual <= 1e-6
            && gap <= 1e-3
            && corr >= 0.999
            && sol.wall_time < Duration::from_secs(300);
        pass &= ok;
        parts.push(format!(
            "n={n}: residuals {:.1e}/{:.1e}, |obj − τ| {gap:.1e}, corr {corr:.6}, {:.2}s",
            sol.primal_residual,
            sol.dual_residual,
            sol.wall_time.as_secs_f64()
        ));
        let pe = PseudoExpectation::new(sol.moment, Provenance::Sdp, ConstructionParams::default(), true);
        let tol = VerifyTolerances { directions: vec![inst.v0.clone()], ..sdp_tolerances() };
        shared.verified.push((format!("sdp n={n}"), verify_pe(&pe, &tol)?));
    }
    Ok(Outcome { pass, detail: parts.join("; ") })
}

fn criterion_8(shared: &mut Shared) -> Result<Outcome> {
    let table = PreconditionTable::shipped();
    let mut pass = true;
    let mut parts = Vec::new();
    let (mut xs, mut ratios) = (Vec::new(), Vec::new());
    for n in [20, 30, 40, 60] {
        let lambda = deg3_lambda(n, table.deg3.lambda_constant);
        let mut ok = 0;
        for trial in 0..20u64 {
            let seed = derive_seed(BASE_SEED, &[8, n as u64, trial]);
            let a = DenseTensor::from_vec(3, n, rng::gaussian_vec(&mut rng::stream(seed, ids::NOISE), n * n * n))?;
            let pe = match build_lb_deg3(&a, lambda, &table.deg3) {
                Ok(pe) => pe,
                Err(e) => {
                    eprintln!("  n={n} trial {trial}: {e}");
                    continue;
                }
            };
            let rep = verify_pe(&pe, &VerifyTolerances { seed, ..Default::default() })?;
            if rep.passed() && rep.min_eigenvalue >= -1e-8 && rep.symmetry_defect <= 1e-8 && rep.kernel_residual <= 1e-8 {
                ok += 1;
            }
            xs.push(n as f64);
            ratios.push(pe.moment.cubic_value(&a)? * lambda / (n as f64).powf(1.5));
            shared.verified.push((format!("lb3 n={n} trial {trial}"), rep));
        }
        pass &= ok >= 18;
        parts.push(format!("n={n} {ok}/20"));
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let mk = mann_kendall(&xs, &ratios);
    pass &= min_ratio > 0.0 && mk.p_decreasing >= 0.05;

    let mut worst_t = 0.0_f64;
    let mut worst_block = 0.0_f64;
    for n in [2usize, 3, 5, 8, 20] {
        let u = uniform_matrix(n);
        let m = u.matrix();
        let (b, c) = (m.slice(s![..=n, ..=n]).to_owned(), m.slice(s![1 + n.., ..=n]).to_owned());
        let ext = schur_extend(&b, &c)?;
        let nf = n as f64;
        worst_t = worst_t.max((ext.t - nf * nf / (nf * nf + 2.0 * nf)).abs());
        let q = u.quartic_block();
        worst_block = worst_block.max(ext.block.iter().zip(q.iter()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs())));
    }
    pass &= worst_t <= 1e-9 && worst_block <= 1e-9;
    Ok(Outcome {
        pass,
        detail: format!(
            "verified {} (≥ 18/20 each); min pE A·λ/n^1.5 = {min_ratio:.4}, Mann-Kendall S = {} p = {:.3} (≥ 0.05); \
             uniform extension |Δt| {worst_t:.1e}, block {worst_block:.1e}",
            parts.join(", "),
            mk.s,
            mk.p_decreasing
        ),
    })
}

fn criterion_9(_: &mut Shared) -> Result<Outcome> {
    let n = 200;
    let opts = BenchOptions { n: vec![n], trials: 10, seed: BASE_SEED, tau_multiplier: 3.0 };
    let out = run_benchmark(&opts)?;
    let shifted = out.get(AlgoId::Unfold, n).expect("benchmarked");
    let naive = out.get(AlgoId::UnfoldNaive, n).expect("benchmarked");
    let titi = out.get(AlgoId::Titi, n).expect("benchmarked");
    let ratio = out.operators[0].ratio();
    let nf = n as f64;

    // A replay of the first two trials must reproduce their rows exactly, timing aside.
    let replay = run_benchmark(&BenchOptions { trials: 2, ..opts.clone() })?;
    let masked = |rs: &[lab_cli::TrialRecord]| -> Result<String> {
        let mut rs = rs.to_vec();
        rs.iter_mut().for_each(|r| r.time_ms = 0.0);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rs)?;
        Ok(String::from_utf8(buf)?)
    };
    let deterministic = masked(&out.records[..replay.records.len()])? == masked(&replay.records)?;

    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    write_csv(std::fs::File::create(dir.join("bench.csv"))?, &out.records)?;
    std::fs::write(dir.join("bench.svg"), out.svg())?;

    Ok(Outcome {
        pass: shifted.matvecs_mean < naive.matvecs_mean && ratio >= nf / 2.0 && ratio <= 2.0 * nf && deterministic,
        detail: format!(
            "matvecs shifted {:.1} < naive {:.1} (titi {:.1}); titi/gram time per matvec {ratio:.1} (n = {n}, within 2×); \
             replay identical: {deterministic}; plot in {}",
            shifted.matvecs_mean,
            naive.matvecs_mean,
            titi.matvecs_mean,
            dir.join("bench.svg").display()
        ),
    })
}

/// `(1-q)·δ_v + q·δ_u` with `q` chosen so that `pE⟨x,v⟩³ = 1 − ε`.
fn planted_mixture(v: &Array1<f64>, u: &Array1<f64>, eps: f64) -> MomentMatrix {
    let c = v.dot(u);
    let q = eps / (1.0 - c.powi(3));
    assert!((0.0..=1.0).contains(&q), "not a mixture: q = {q}");
    MomentMatrix::from_monomial_fn(v.len(), |idx| {
        let pv: f64 = idx.iter().map(|&i| v[i]).product();
        let pu: f64 = idx.iter().map(|&i| u[i]).product();
        (1.0 - q) * pv + q * pu
    })
}

fn criterion_10(shared: &mut Shared) -> Result<Outcome> {
    let mut reports = std::mem::take(&mut shared.verified);
    for n in [3, 6, 10] {
        reports.push((format!("uniform n={n}"), verify_pe(&uniform_moments(n), &VerifyTolerances::default())?));
    }
    if !reports.iter().any(|(l, _)| l.starts_with("sdp")) {
        let inst = trial_instance(5, 3, 4.0, NoiseSpec::Iid, BASE_SEED)?;
        let sol = solve_moment_sdp(&inst.tensor, None, &SdpOptions::default())?;
        let pe = PseudoExpectation::new(sol.moment, Provenance::Sdp, ConstructionParams::default(), true);
        reports.push(("sdp n=5".into(), verify_pe(&pe, &sdp_tolerances())?));
    }
    if !reports.iter().any(|(l, _)| l.starts_with("lb3")) {
        let table = PreconditionTable::shipped();
        let a = DenseTensor::from_vec(3, 20, rng::gaussian_vec(&mut rng::stream(BASE_SEED, ids::NOISE), 8000))?;
        let pe = build_lb_deg3(&a, deg3_lambda(20, table.deg3.lambda_constant), &table.deg3)?;
        reports.push(("lb3 n=20".into(), verify_pe(&pe, &VerifyTolerances::default())?));
    }
    for n in [4, 8] {
        let mut r = rng::stream(derive_seed(BASE_SEED, &[10, n as u64]), ids::SIGNAL);
        let v = rng::unit_vector(&mut r, n);
        // The antipode, and a direction orthogonal to v so that the mixing weight is exactly ε.
        let w = rng::unit_vector(&mut r, n);
        let w = &w - &(&v * v.dot(&w));
        let others = [-&v, &w / norm(&w)];
        for eps in [0.01, 0.1] {
            for u in &others {
                let pe = PseudoExpectation::new(planted_mixture(&v, u, eps), Provenance::Custom, ConstructionParams::default(), true);
                let tol = VerifyTolerances { directions: vec![v.clone()], ..Default::default() };
                reports.push((format!("planted n={n} ε={eps}"), verify_pe(&pe, &tol)?));
            }
        }
    }
    ensure!(!reports.is_empty(), "nothing to check");
    let lemma_checks = [Check::CauchySchwarz, Check::CubicLinear, Check::OperatorNorm];
    let bad: Vec<String> = reports
        .iter()
        .filter(|(_, r)| lemma_checks.iter().any(|&c| r.failed(c)))
        .map(|(l, r)| format!("{l}: {:?}", r.violations.iter().map(|v| v.check).collect::<Vec<_>>()))
        .collect();
    Ok(Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} pseudo-expectations, no violation of the three inequalities", reports.len())
        } else {
            format!("{} of {} violate: {}", bad.len(), reports.len(), bad.join("; "))
        },
    })
}

type Criterion = fn(&mut Shared) -> Result<Outcome>;

fn main() {
    let criteria: [(usize, &str, Criterion); 10] = [
        (1, "oracle equivalence", criterion_1),
        (2, "zero-noise exactness", criterion_2),
        (3, "recovery threshold", criterion_3),
        (4, "concentration slopes", criterion_4),
        (5, "semi-random dichotomy", criterion_5),
        (6, "certification soundness", criterion_6),
        (7, "SDP fidelity", criterion_7),
        (8, "lower-bound construction", criterion_8),
        (9, "benchmark ordering", criterion_9),
        (10, "pseudo-expectation inequalities", criterion_10),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let strict = std::env::var("TPCA_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut shared = Shared::default();
    let (mut passed, mut ran) = (0, 0);
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = run(&mut shared).unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e:#}") });
        let secs = start.elapsed().as_secs_f64();
        passed += usize::from(outcome.pass);
        println!(
            "criterion {id:>2} {:<32} {}  [{secs:.1}s] {}",
            name,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("acceptance: {passed}/{ran} passed");
    if strict && passed < ran {
        std::process::exit(1);
    }
}

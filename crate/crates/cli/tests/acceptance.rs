// Acceptance checks, one line per criterion. Runs without the libtest
// harness so every criterion reports even when an earlier one fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigcurve::congruence::{
    congruence_closed, congruence_open, find_partition, find_vertices, insert_constant_curvature, register, Decision,
};
use sigcurve::curve::{
    apply_group, curve_distance, euclidean_curvature, resample_by_arclength, shapes, AnalyticCurvature, ArcLengthCurve,
    CurvatureFunction, CurvatureProfile, GroupElement, GroupKind, PlanarCurve,
};
use sigcurve::io::curve_to_json;
use sigcurve::reconstruction::{
    curve_from_curvature, curve_from_function, picard_error_bound, picard_frame, reconstruct_from_signature, rk4_frame,
    MatrixFunction,
};
use sigcurve::robustness::{
    closeness_experiment, derivative_range, envelope_constants, explicit_bound, l1_curvature_experiment,
    l1_curve_experiment, perturbation_experiment, solve_rho, synthetic_perturbation, Sign, SmoothNoise,
};
use sigcurve::signature::{affine_signature, euclidean_signature, signature_hausdorff, GraphFunction, Interpolation};
use sigcurve::{Config, Mat2, Vec2};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn arc(c: &PlanarCurve, n: usize) -> Result<ArcLengthCurve, String> {
    resample_by_arclength(c, n).map_err(err)
}

fn sup_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn spiral() -> AnalyticCurvature<impl Fn(f64) -> f64 + Sync, impl Fn(f64) -> f64 + Sync> {
    AnalyticCurvature::new(|s| 2.0 / (1.0 + s), |s| -2.0 / ((1.0 + s) * (1.0 + s)), 3.0)
}

fn spiral_curve(cfg: &Config) -> Result<PlanarCurve, String> {
    Ok(curve_from_function(&spiral(), Vec2::zeros(), 0.0, cfg.integrator_steps, false).map_err(err)?.to_planar())
}

fn criterion_1() -> Outcome {
    let cfg = Config::default();
    let n = 2048;
    let mut cases: Vec<(&str, PlanarCurve, usize)> = vec![
        ("circle r=0.5", shapes::circle(0.5, 2048), 1),
        ("circle r=1", shapes::circle(1.0, 2048), 1),
        ("circle r=2", shapes::circle(2.0, 2048), 1),
        ("ellipse 2x1", shapes::ellipse(2.0, 1.0, 2048), 2),
        ("clothoid", shapes::clothoid(0.5, 1.0, 2.0, 2048), 1),
    ];
    cases.push(("spiral", spiral_curve(&cfg)?, 1));
    let mut worst = (0.0_f64, 0.0_f64, 0.0_f64);
    for (name, curve, order) in cases {
        let t = Instant::now();
        let a = arc(&curve, n)?;
        let h = euclidean_curvature(&a, 0).map_err(err)?;
        let back = curve_from_curvature(&h, Vec2::zeros(), 0.0, &cfg).map_err(err)?;
        let h2 = euclidean_curvature(&arc(&back.to_planar(), n)?, 0).map_err(err)?;
        let dk = sup_abs(h.kappa(), h2.kappa());
        ensure(dk <= 5e-3, format!("{name}: curvature round trip {dk:e}"))?;

        let sig = euclidean_signature(&a, order).map_err(err)?;
        let partition = if order > 1 { Some(find_partition(&sig, &cfg).map_err(err)?) } else { None };
        let rec = reconstruct_from_signature(&sig, &GroupElement::identity(GroupKind::SE2), partition.as_ref(), &cfg)
            .map_err(err)?;
        let sig2 = euclidean_signature(&arc(&rec, n)?, order).map_err(err)?;
        let ds = signature_hausdorff(&sig.with_order(1).map_err(err)?, &sig2.with_order(1).map_err(err)?).map_err(err)?;
        ensure(ds <= 5e-3, format!("{name}: signature round trip {ds:e}"))?;
        let secs = t.elapsed().as_secs_f64();
        ensure(secs < 5.0, format!("{name}: took {secs:.2}s"))?;
        worst = (worst.0.max(dk), worst.1.max(ds), worst.2.max(secs));
    }
    Ok(format!(
        "6 curves, max curvature error {:.1e}, max signature distance {:.1e}, slowest {:.2}s",
        worst.0, worst.1, worst.2
    ))
}

fn criterion_2() -> Outcome {
    let cfg = Config::default();
    let k = AnalyticCurvature::new(|s: f64| 0.3 + 0.8 * s + 0.2 * (2.0 * s).sin(), |s: f64| 0.8 + 0.4 * (2.0 * s).cos(), 2.5);
    let h = CurvatureProfile::sample(&k, 2049).map_err(err)?;
    let base = curve_from_curvature(&h, Vec2::zeros(), 0.0, &cfg).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let x0 = Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let other = curve_from_curvature(&h, x0, rng.gen_range(0.0..std::f64::consts::TAU), &cfg).map_err(err)?;
        let g = register(&base, &other, GroupKind::SE2, &cfg).map_err(err)?;
        let d = curve_distance(&base.to_planar(), &apply_group(&g, &other.to_planar())).map_err(err)?;
        worst = worst.max(d);
    }
    ensure(worst <= 1e-6, format!("registered distance {worst:e}"))?;
    Ok(format!("10 poses, max registered distance {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    let mut count = 0;
    for delta in [1e-2, 1e-3] {
        for _ in 0..50 {
            let (a, b, c, w) =
                (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5), rng.gen_range(0.5..3.0));
            let l = rng.gen_range(1.0..3.0);
            let mut noise = SmoothNoise::random(1.0, l, &mut rng);
            noise.amplitude = delta / noise.sup(l);
            let k = AnalyticCurvature::new(
                move |s: f64| a + b * s + c * (w * s).sin(),
                move |s: f64| b + c * w * (w * s).cos(),
                l,
            );
            let nz = noise.clone();
            let ks = AnalyticCurvature::new(
                move |s: f64| a + b * s + c * (w * s).sin() + nz.value(s),
                move |s: f64| b + c * w * (w * s).cos(),
                l,
            );
            let pose = (Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0.0..std::f64::consts::TAU));
            let check = closeness_experiment(&k, &ks, pose, &cfg).map_err(err)?;
            ensure(
                check.measured <= check.bound + 1e-6,
                format!("delta {delta}: measured {:e} > bound {:e}", check.measured, check.bound),
            )?;
            worst = worst.max(check.measured / check.bound);
            count += 1;
        }
    }
    Ok(format!("{count} pairs within L^2 sup|dk|/2, largest measured/bound {worst:.3}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for _ in 0..24 {
        let (a, b, c) = (rng.gen_range(0.2..2.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..0.5));
        let l = rng.gen_range(0.5..2.5);
        let k = AnalyticCurvature::new(
            move |s: f64| a * s + b * s * s + c * s * s * s,
            move |s: f64| a + 2.0 * b * s + 3.0 * c * s * s,
            l,
        );
        let m = derivative_range(&k).m;
        let cap = ((k.value(0.0) - k.value(l)).abs() / 2.0).min(m);
        let delta = rng.gen_range(0.05..0.9) * cap;
        let r = delta / m;
        for sign in [Sign::Plus, Sign::Minus] {
            let sol = solve_rho(&k, delta, sign).map_err(err)?;
            for (&s, &rho) in sol.s.iter().zip(&sol.rho) {
                let slack = 1e-9 * (1.0 + s);
                ensure(
                    s * (1.0 - r) - slack <= rho && rho <= s * (1.0 + r) + slack,
                    format!("rho({s}) = {rho} outside [{}, {}]", s * (1.0 - r), s * (1.0 + r)),
                )?;
            }
        }
        count += 1;
    }
    Ok(format!("{count} (kappa, delta) pairs, both signs, sandwich holds at every node"))
}

fn criterion_5() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = AnalyticCurvature::new(|s: f64| 0.5 + s + 0.1 * s * s, |s: f64| 1.0 + 0.2 * s, 2.0);
    let mut checked = 0;
    for delta in [1e-2, 1e-3, 1e-4] {
        for _ in 0..5 {
            let noise = SmoothNoise::random(delta, k.length(), &mut rng);
            let p = synthetic_perturbation(&k, noise).map_err(err)?;
            let c = envelope_constants(&k, delta).map_err(err)?;
            for i in 0..=2000 {
                let s = c.l_tau * i as f64 / 2000.0;
                let v = p.value(s);
                let (lo, hi) = (c.lower(&k, s), c.upper(&k, s));
                ensure(
                    lo - 1e-9 <= v && v <= hi + 1e-9,
                    format!("delta {delta}: kappa*({s}) = {v} outside [{lo}, {hi}]"),
                )?;
            }
            checked += 1;
        }
    }

    let curves = vec![
        ("clothoid", shapes::clothoid(0.5, 1.0, 2.0, 1024)),
        ("spiral", spiral_curve(&cfg)?),
        ("cubic spiral", {
            let c = AnalyticCurvature::new(|s: f64| s + 0.2 * s * s * s, |s: f64| 1.0 + 0.6 * s * s, 1.5);
            curve_from_function(&c, Vec2::zeros(), 0.0, cfg.integrator_steps, false).map_err(err)?.to_planar()
        }),
    ];
    let mut rows = 0;
    let mut spreads = Vec::new();
    for (name, curve) in &curves {
        let kappa = euclidean_curvature(&arc(curve, cfg.resample_nodes)?, 1).map_err(err)?.interpolant().map_err(err)?;
        let mut ratios = Vec::new();
        for delta in [1e-2, 1e-3, 1e-4] {
            let out = perturbation_experiment(curve, delta, 4, cfg.seed, false, &cfg).map_err(err)?;
            for row in &out {
                ensure(row.pass, format!("{name} delta {delta}: trial {} d = {:e} eps = {:?}", row.trial, row.d_curves, row.eps_bound))?;
            }
            rows += out.len();
            ratios.push(explicit_bound(&kappa, delta).map_err(err)?.epsilon_of_delta / delta);
        }
        let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        ensure(spread <= 10.0, format!("{name}: eps/delta varies by {spread:.2}x"))?;
        spreads.push(spread);
    }
    let worst = spreads.iter().cloned().fold(0.0, f64::max);
    Ok(format!("{checked} envelope checks, {rows} perturbed curves within eps, eps/delta spread <= {worst:.2}x"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_gap = 0.0_f64;
    let mut iterations = 0;
    for trial in 0..20 {
        let c0 = DMatrix::from_fn(2, 2, |_, _| rng.gen_range(-1.0..1.0));
        let c1 = DMatrix::from_fn(2, 2, |_, _| rng.gen_range(-0.5..0.5));
        let (s0, s1) = (0.0, rng.gen_range(0.5..2.0));
        let k = if trial % 2 == 0 {
            MatrixFunction::constant(c0, s0, s1).map_err(err)?
        } else {
            MatrixFunction::from_fn(move |s| &c0 + &c1 * (3.0 * s).sin(), s0, s1, 513).map_err(err)?
        };
        let s_star = rng.gen_range(s0..s1);
        let u = DMatrix::identity(2, 2);
        let sol = picard_frame(&k, &u, s_star, 1e-12, 80, 1024).map_err(err)?;
        let span = (s1 - s_star).max(s_star - s0);
        for (j, &d) in sol.differences().iter().enumerate() {
            let b = picard_error_bound(k.sup_norm(), 2, j + 1, span);
            ensure(d <= b * (1.0 + 1e-9) + 1e-13, format!("trial {trial}: step {} difference {d:e} > {b:e}", j + 1))?;
        }
        let rk = rk4_frame(&k, &u, s_star, 1024).map_err(err)?;
        let gap = sol.distance(&rk);
        ensure(gap <= 1e-6, format!("trial {trial}: Picard and RK4 differ by {gap:e}"))?;
        worst_gap = worst_gap.max(gap);
        iterations += sol.iteration_count();
    }
    Ok(format!("20 matrices, {iterations} iterations under the factorial bound, max |Picard - RK4| {worst_gap:.1e}"))
}

fn criterion_7() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let egg = shapes::egg(2048);
    let base = affine_signature(&arc(&egg, 2048)?, &cfg).map_err(err)?;
    let mut worst = 0.0_f64;
    for _ in 0..5 {
        let (a, shear, stretch) = (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-0.4..0.4), rng.gen_range(0.8..1.25));
        let (s, c) = f64::sin_cos(a);
        let m = Mat2::new(c, -s, s, c) * Mat2::new(stretch, shear, 0.0, 1.0 / stretch);
        let g = GroupElement::affine(m, Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).map_err(err)?;
        let moved = affine_signature(&arc(&apply_group(&g, &egg), 2048)?, &cfg).map_err(err)?;
        worst = worst.max(signature_hausdorff(&base, &moved).map_err(err)?);
    }
    ensure(worst <= 5e-3, format!("egg vs unimodular image: {worst:e}"))?;

    let para = affine_signature(&arc(&shapes::parabola(1.0, -1.0, 1.0, 2001), 1024)?, &cfg).map_err(err)?;
    let mu_para = para.column(0).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    ensure(mu_para <= 1e-3, format!("parabola max|mu| {mu_para:e}"))?;

    let ell = affine_signature(&arc(&shapes::ellipse(2.0, 1.0, 2048), 2048)?, &cfg).map_err(err)?;
    let mu = ell.column(0);
    let (lo, hi) = mu.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let mean = mu.iter().sum::<f64>() / mu.len() as f64;
    let var = (hi - lo) / mean.abs();
    ensure(var <= 1e-3, format!("ellipse mu relative variation {var:e}"))?;
    Ok(format!("egg {worst:.1e}, parabola max|mu| {mu_para:.1e}, ellipse mu variation {var:.1e}"))
}

fn criterion_8() -> Outcome {
    let cfg = Config::default();
    let g = GroupElement::rotation(0.7, Vec2::new(1.5, -2.0));
    let ellipse = shapes::ellipse(2.0, 1.0, 2048);
    let same = congruence_closed(&ellipse, &apply_group(&g, &ellipse), None, &cfg).map_err(err)?;
    ensure(same.decision == Decision::Congruent, format!("ellipse vs rigid image: {:?}", same.decision))?;
    let other = congruence_closed(&ellipse, &shapes::ellipse(2.0, 1.1, 2048), None, &cfg).map_err(err)?;
    ensure(other.decision == Decision::NotCongruent, format!("ellipse vs (2, 1.1): {:?}", other.decision))?;
    let lim = shapes::limacon(2.0, 1.0, 2048);
    let v = congruence_closed(&lim, &apply_group(&g, &lim), None, &cfg).map_err(err)?;
    ensure(v.decision == Decision::Congruent, format!("limacon vs rigid image: {:?}", v.decision))?;
    let n1 = v.evidence.get("n1").and_then(|x| x.as_u64());
    let n2 = v.evidence.get("n2").and_then(|x| x.as_u64());
    let dt = v.evidence.get("max_dt").and_then(|x| x.as_f64()).unwrap_or(f64::INFINITY);
    ensure(n1 == Some(1) && n2 == Some(1), format!("limacon crossings {n1:?} / {n2:?}"))?;
    ensure(dt <= 1e-3, format!("limacon crossing parameters differ by {dt:e}"))?;
    Ok(format!("ellipse congruent, (2, 1.1) not congruent, limacon n1 = n2 = 1 with max dt {dt:.1e}"))
}

fn criterion_9() -> Outcome {
    let cfg = Config::default();
    let a = arc(&shapes::ellipse(2.0, 1.0, 2048), 2048)?;
    let profile = euclidean_curvature(&a, 1).map_err(err)?;
    let vertices = find_vertices(&profile).map_err(err)?;
    let kmax = profile.interpolant().map_err(err)?;
    let at = vertices.iter().cloned().max_by(|x, y| kmax.value(*x).total_cmp(&kmax.value(*y))).ok_or("no vertices")?;
    let variant = insert_constant_curvature(&a, at, 0.5, &cfg).map_err(err)?;
    let longer = insert_constant_curvature(&a, at, 0.8, &cfg).map_err(err)?;

    let sig = euclidean_signature(&a, 1).map_err(err)?;
    let sig_v = euclidean_signature(&arc(&variant, 2048)?, 1).map_err(err)?;
    let ds = signature_hausdorff(&sig, &sig_v).map_err(err)?;
    ensure(ds <= 1e-3, format!("signature distance {ds:e}"))?;

    let original = PlanarCurve::new(a.nodes().to_vec(), false).map_err(err)?;
    let mut min_dist = f64::INFINITY;
    for (x, y) in [(&original, &variant), (&variant, &original), (&variant, &longer), (&longer, &variant)] {
        let v = congruence_open(x, y, GroupKind::SE2, None, &cfg).map_err(err)?;
        ensure(v.decision != Decision::Congruent, "an inserted variant tested congruent")?;
        if let Some(d) = v.registered_distance {
            min_dist = min_dist.min(d);
        }
    }
    let g = register(&arc(&original, 2048)?, &arc(&variant, 2048)?, GroupKind::SE2, &cfg).map_err(err)?;
    let d = curve_distance(&original, &apply_group(&g, &variant)).map_err(err)?;
    ensure(d >= 0.1, format!("registered distance only {d:e}"))?;
    Ok(format!("signature distance {ds:.1e}, registered distance {d:.3}, no congruent verdicts"))
}

fn criterion_10() -> Outcome {
    let cfg = Config::default();
    let a = arc(&shapes::ellipse(2.0, 1.0, 2048), 2048)?;
    let sig = euclidean_signature(&a, 2).map_err(err)?;
    let p = find_partition(&sig, &cfg).map_err(err)?;
    let margin = p.margins().iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(margin > 0.0, format!("margin {margin:e}"))?;
    let back = reconstruct_from_signature(&sig, &GroupElement::identity(GroupKind::SE2), Some(&p), &cfg).map_err(err)?;
    let g = register(&a, &arc(&back, 2048)?, GroupKind::SE2, &cfg).map_err(err)?;
    let d = curve_distance(&a.to_planar(), &apply_group(&g, &back)).map_err(err)?;
    ensure(d <= 1e-3, format!("partition round trip {d:e}"))?;
    let circle = euclidean_signature(&arc(&shapes::circle(1.0, 1024), 1024)?, 1).map_err(err)?;
    match find_partition(&circle, &cfg) {
        Err(sigcurve::SigError::ForbiddenPoint { .. }) => {}
        other => return Err(format!("circle partition: {other:?}")),
    }
    Ok(format!("{} segments, min margin {margin:.2e}, round trip {d:.1e}, circle forbidden", p.margins().len()))
}

fn criterion_11() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst_k, mut worst_c) = (0.0_f64, 0.0_f64);
    let mut violations = Vec::new();
    let pairs = 100;
    for trial in 0..pairs {
        let (x1, y1) = (rng.gen_range(0.5..1.5), rng.gen_range(2.0..3.0));
        let (c0, c1, w) = (rng.gen_range(1.0..2.0), rng.gen_range(-0.4..0.4), rng.gen_range(0.5..3.0));
        let eps = rng.gen_range(1e-4..2e-2);
        let (dx, dy) = (rng.gen_range(-0.02..0.02), rng.gen_range(-0.02..0.02));
        let (phase, w2) = (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(1.0..5.0));
        let graph = |a: f64, b: f64, pert: f64| {
            let u: Vec<f64> = (0..129).map(|i| a + (b - a) * i as f64 / 128.0).collect();
            let f: Vec<f64> = u.iter().map(|&x| c0 + c1 * (w * x).sin() + pert * (w2 * x + phase).sin()).collect();
            GraphFunction::new(&u, &f, Interpolation::Cubic)
        };
        let f = graph(x1, y1, 0.0).map_err(err)?;
        let fs = graph(x1 + dx, y1 + dy, eps).map_err(err)?;
        let k = l1_curvature_experiment(&f, &fs, &cfg).map_err(err)?;
        let c = l1_curve_experiment(&f, &fs, &cfg).map_err(err)?;
        worst_k = worst_k.max(k.measured / k.bound);
        worst_c = worst_c.max(c.measured / c.bound);
        if k.measured > k.bound {
            violations.push(format!("#{trial} curvature {:.3e} > {:.3e}", k.measured, k.bound));
        }
        if c.measured > c.bound {
            violations.push(format!("#{trial} curve {:.3e} > {:.3e}", c.measured, c.bound));
        }
    }
    ensure(
        violations.is_empty(),
        format!("{} violations of {} checks, e.g. {}", violations.len(), 2 * pairs, violations.first().cloned().unwrap_or_default()),
    )?;
    Ok(format!("{pairs} pairs, largest measured/bound: curvature {worst_k:.3}, curve {worst_c:.3}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sigcurve"))
        .current_dir(dir)
        .env_remove("SIGCURVE_CONFIG")
        .args(args)
        .output()
        .map_err(err)?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn snapshot(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map_err(err)?
        .map(|e| {
            let e = e.map_err(err)?;
            Ok((e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).map_err(err)?))
        })
        .collect::<Result<_, String>>()?;
    files.sort();
    Ok(files)
}

fn criterion_12() -> Outcome {
    let cfg = Config::default();
    let commands: Vec<Vec<&str>> = vec![
        vec!["signature", "--input", "ellipse.json", "--order", "2", "--out", "sig.csv"],
        vec!["signature", "--input", "ellipse.json", "--kind", "affine", "--output-format", "json", "--out", "aff.json"],
        vec!["reconstruct", "--input", "sig.csv", "--from", "signature", "--out", "rec.json"],
        vec!["compare", "--a", "ellipse.json", "--b", "ellipse_moved.json"],
        vec!["compare", "--a", "spiral.json", "--b", "spiral.json", "--open"],
        vec!["experiment", "--input", "spiral.json", "--sweep", "1e-2,1e-3", "--trials", "3", "--out", "exp.csv"],
        vec!["bound", "--input", "spiral.json", "--delta", "1e-3", "--out", "bound.json"],
    ];
    let ellipse = shapes::ellipse(2.0, 1.0, 512);
    let moved = apply_group(&GroupElement::rotation(1.0, Vec2::new(0.5, 0.5)), &ellipse);
    let spiral = spiral_curve(&cfg)?;
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(err)?;
        std::fs::write(dir.path().join("ellipse.json"), curve_to_json(&ellipse)).map_err(err)?;
        std::fs::write(dir.path().join("ellipse_moved.json"), curve_to_json(&moved)).map_err(err)?;
        std::fs::write(dir.path().join("spiral.json"), curve_to_json(&spiral)).map_err(err)?;
        let mut outputs = Vec::new();
        for args in &commands {
            let (code, stdout) = run_cli(dir.path(), args)?;
            ensure(code == 0, format!("`sigcurve {}` exited {code}", args.join(" ")))?;
            outputs.push(stdout);
        }
        runs.push((outputs, snapshot(dir.path())?));
    }
    ensure(runs[0].0 == runs[1].0, "stdout differs between runs")?;
    ensure(runs[0].1 == runs[1].1, "output files differ between runs")?;
    Ok(format!("{} commands, {} files byte-identical across two runs", commands.len(), runs[0].1.len()))
}

fn main() {
    let criteria: Vec<(usize, fn() -> Outcome)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}

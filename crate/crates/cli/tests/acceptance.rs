//! Acceptance criteria, one report line each. Runs under `cargo test`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use branchcurve_core::bivector::{pluecker, qform_lambda2g, qform_v, segre, SpinorPoint};
use branchcurve_core::curve::{
    curve_coeffs, evaluate, pencil_quadratic, CurveCoeffs, CurveTag,
};
use branchcurve_core::flow::{
    blowup_riemann, curve_sequence, riemann_at, scale_metric, singular_time, BlowupSequence, ModelGeometry,
};
use branchcurve_core::sampling::{
    random_curvature, random_curvature_kn, random_spinor, random_symmetric3, random_symmetric4,
};
use branchcurve_core::tensor::{
    curvature_operator_blocks, four_part_decomposition_check, identity3, kulkarni_nomizu, ricci_and_scalar,
    validate_symmetries, CurvatureBlocks, FramedRiemann, SymmetricBilinear4,
};
use branchcurve_core::{ExecMode, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.2} s exceeds {limit_s} s", elapsed.as_secs_f64())
    })
}

fn geom(name: &str) -> ModelGeometry {
    ModelGeometry::from_name(name, None).unwrap()
}

fn coeffs_of(r: &FramedRiemann) -> CurveCoeffs {
    curve_coeffs(&curvature_operator_blocks(r))
}

fn zero_matrix() -> [[C64; 5]; 5] {
    [[C64::new(0.0, 0.0); 5]; 5]
}

/// (a¹b² − a²b¹)⁴ divided by its largest coefficient.
fn quadruple_diagonal() -> [[C64; 5]; 5] {
    let mut c = zero_matrix();
    let row = [1.0, -4.0, 6.0, -4.0, 1.0];
    for m in 0..5 {
        c[m][4 - m] = C64::new(row[4 - m] / 6.0, 0.0);
    }
    c
}

fn double_rectangle() -> [[C64; 5]; 5] {
    let mut c = zero_matrix();
    c[2][2] = C64::new(1.0, 0.0);
    c
}

fn max_dev(a: &[[C64; 5]; 5], b: &[[C64; 5]; 5]) -> f64 {
    let mut d = 0.0_f64;
    for m in 0..5 {
        for n in 0..5 {
            d = d.max((a[m][n] - b[m][n]).norm());
        }
    }
    d
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let cases: [(&str, Option<[[C64; 5]; 5]>); 5] = [
        ("s3xr", Some(quadruple_diagonal())),
        ("s2xs2", Some(double_rectangle())),
        ("s2xr2", None),
        ("cp2", None),
        ("s4", None),
    ];
    for (name, expected) in cases {
        let g = geom(name);
        let big_t = singular_time(&g);
        for t in [0.0, 0.5 * big_t] {
            let r = riemann_at(&g, t).unwrap();
            let k = coeffs_of(&r);
            let dev = match &expected {
                Some(e) => max_dev(&k.normalized().c, e),
                None => k.max_abs() / r.max_abs().powi(2),
            };
            ensure(dev <= 1e-12, || format!("{name} at t = {t}: deviation {dev:e}"))?;
            worst = worst.max(dev);
        }
    }
    within(start.elapsed(), 1.0)?;
    Ok(format!("5 geometries at two times, max deviation {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_norm, mut worst_ratio) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let r = random_curvature(&mut rng);
        let k = coeffs_of(&r);
        let kn = k.normalized();
        for _ in 0..10 {
            let kappa = 10f64.powf(rng.gen_range(-3.0..3.0));
            let ks = coeffs_of(&scale_metric(&r, kappa).unwrap());
            worst_norm = worst_norm.max(max_dev(&ks.normalized().c, &kn.c));
            let mut ratio_dev = 0.0_f64;
            for m in 0..5 {
                for n in 0..5 {
                    ratio_dev = ratio_dev.max((ks.c[m][n] * (kappa * kappa) - k.c[m][n]).norm());
                }
            }
            worst_ratio = worst_ratio.max(ratio_dev / k.max_abs());
        }
    }
    ensure(worst_norm <= 1e-10, || format!("normalized deviation {worst_norm:e}"))?;
    ensure(worst_ratio <= 1e-10, || format!("kappa^-2 ratio deviation {worst_ratio:e}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "1000 scalings, normalized deviation {worst_norm:.1e}, ratio deviation {worst_ratio:.1e}"
    ))
}

/// `[2i a¹a², i((a²)²−(a¹)²), −(a¹)²−(a²)²]` and its anti-self-dual
/// counterpart, as wedge coordinates `e12..e34` through
/// `f1± = (e12 ± e34)/√2`, `f2± = (e13 ∓ e24)/√2`, `f3± = (e14 ± e23)/√2`.
fn ruling_wedge(s: &SpinorPoint, plus: bool) -> [C64; 6] {
    let i = C64::new(0.0, 1.0);
    let (x1, x2) = (s.c1, s.c2);
    let third = x1 * x1 + x2 * x2;
    let t = [i * x1 * x2 * 2.0, i * (x2 * x2 - x1 * x1), if plus { -third } else { third }];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sg = if plus { 1.0 } else { -1.0 };
    [
        t[0] * h,
        t[1] * h,
        t[2] * h,
        t[2] * (sg * h),
        t[1] * (-sg * h),
        t[0] * (sg * h),
    ]
}

/// `(R(u,h), Σ |R||u||h|)` with `R(u,h) = Σ_{i<j,k<l} R_ijlk u^ij h^kl`.
fn curvature_form(r: &FramedRiemann, u: &[C64; 6], h: &[C64; 6]) -> (C64, f64) {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let (mut v, mut s) = (C64::new(0.0, 0.0), 0.0);
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        for (q, &(k, l)) in PAIRS.iter().enumerate() {
            let rc = r.get(i, j, l, k);
            v += u[p] * h[q] * rc;
            s += u[p].norm() * h[q].norm() * rc.abs();
        }
    }
    (v, s)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let r = random_curvature(&mut rng);
        let k = coeffs_of(&r);
        for _ in 0..20 {
            let (a, b) = (random_spinor(&mut rng), random_spinor(&mut rng));
            let (up, um) = (ruling_wedge(&a, true), ruling_wedge(&b, false));
            let (p, sp) = curvature_form(&r, &up, &up);
            let (q, sq) = curvature_form(&r, &um, &um);
            let (m, sm) = curvature_form(&r, &um, &up);
            let direct = m * m - p * q;
            let scale = (sm * sm + sp * sq).max(f64::MIN_POSITIVE);
            worst = worst.max((evaluate(&k, &a, &b) - direct).norm() / scale);
        }
    }
    ensure(worst <= 1e-10, || format!("relative error {worst:e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!("20000 points on 1000 tensors, max relative error {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (name, pattern, tag) in [
        ("s3xr", quadruple_diagonal(), CurveTag::QuadrupleDiagonal),
        ("s2xs2", double_rectangle(), CurveTag::DoubleRectangle),
    ] {
        let seq = BlowupSequence::geometric(geom(name), 0.5, 20, -1.0).unwrap();
        for e in seq.entries() {
            let k = coeffs_of(&blowup_riemann(&seq, e.index).unwrap());
            let d = max_dev(&k.normalized().c, &pattern);
            ensure(d <= 1e-12, || format!("{name} i = {}: distance {d:e}", e.index))?;
            worst = worst.max(d);
        }
        let report = curve_sequence(&seq, 1e-12, ExecMode::default()).unwrap();
        ensure(report.limit_class.tag == tag, || {
            format!("{name} limit classified {}", report.limit_class.tag)
        })?;
        ensure(max_dev(&report.limit.c, &pattern) <= 1e-12, || format!("{name} limit curve"))?;
        for e in &report.entries {
            ensure(e.distance <= 1e-12, || format!("{name} i = {}: reported {:e}", e.index, e.distance))?;
        }
        ensure(report.entries.last().map(|e| e.index) == Some(20), || format!("{name} indices"))?;
    }
    within(start.elapsed(), 1.0)?;
    Ok(format!("s3xr and s2xs2, lambda = 2^-i up to i = 20, max distance {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = SymmetricBilinear4::identity();
    let mut worst = 0.0_f64;
    for trial in 0..1000 {
        // symmetry validation accepts valid tensors and rejects a perturbed one
        let r = random_curvature_kn(&mut rng);
        ensure(validate_symmetries(&r, 1e-12).is_ok(), || format!("trial {trial}: valid tensor rejected"))?;
        let mut bad = r;
        let idx: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..4));
        bad.set(idx[0], idx[1], idx[2], idx[3], r.get(idx[0], idx[1], idx[2], idx[3]) + 1e-3);
        ensure(validate_symmetries(&bad, 1e-12).is_err(), || format!("trial {trial}: perturbation missed"))?;

        // Kulkarni–Nomizu
        let (h, k) = (random_symmetric4(&mut rng), random_symmetric4(&mut rng));
        let hk = kulkarni_nomizu(&h, &k);
        ensure(validate_symmetries(&hk, 1e-12).is_ok(), || "h ⊠ k not algebraic".into())?;
        worst = worst.max(hk.max_deviation(&kulkarni_nomizu(&k, &h)).0);
        let (ric, _) = ricci_and_scalar(&kulkarni_nomizu(&h, &g));
        for i in 0..4 {
            for j in 0..4 {
                let expected = -2.0 * h.get(i, j) - if i == j { h.trace() } else { 0.0 };
                worst = worst.max((ric.get(i, j) - expected).abs());
            }
        }

        // four-part decomposition
        let dev = match four_part_decomposition_check(&r, 1e-12) {
            Ok(rep) => rep.max_deviation,
            Err(rep) => return Err(format!("decomposition deviation {:e}", rep.max_deviation)),
        };
        worst = worst.max(dev);

        // conic vanishing for Weyl blocks proportional to the identity
        let (kp, km) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let scalar = |x: f64| identity3().map(|row| row.map(|v| v * x));
        let blocks = CurvatureBlocks::from_weyl(scalar(kp), [[0.0; 3]; 3], scalar(km), rng.gen_range(-5.0..5.0));
        let (a, b) = (random_spinor(&mut rng), random_spinor(&mut rng));
        let pq = pencil_quadratic(&blocks, &a, &b);
        worst = worst.max(pq.c2.norm()).max(pq.c0.norm()).max(curve_coeffs(&blocks).max_abs());
        let w = random_symmetric3(&mut rng);
        let mixed = CurvatureBlocks::from_weyl(scalar(kp), w, w, 0.0);
        worst = worst.max(pencil_quadratic(&mixed, &a, &b).c2.norm());

        // Segre and Plücker quadrics
        let (b2, a2) = (random_spinor(&mut rng), random_spinor(&mut rng));
        worst = worst.max(segre(&a, &b).metric_quadric().norm());
        if let Ok(u) = pluecker(&segre(&a, &b), &segre(&a, &b2)) {
            worst = worst.max(qform_v(&u, 1.0).norm()).max(qform_lambda2g(&u, &u).norm());
        }
        if let Ok(u) = pluecker(&segre(&a, &b), &segre(&a2, &b)) {
            worst = worst.max(qform_v(&u, 1.0).norm()).max(qform_lambda2g(&u, &u).norm());
        }
    }
    ensure(worst <= 1e-12, || format!("max residual {worst:e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!("1000 trials of each identity, max residual {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut spread = 0.0_f64;
    for name in ["s3xr", "s2xs2", "s2xr2", "s4", "cp2"] {
        let g = geom(name);
        let big_t = singular_time(&g);
        let values: Vec<f64> = (0..100)
            .map(|k| {
                let t = big_t * k as f64 / 100.0;
                riemann_at(&g, t).unwrap().max_abs() * (big_t - t)
            })
            .collect();
        let (lo, hi) = values.iter().fold((f64::INFINITY, 0.0_f64), |(l, h), &v| (l.min(v), h.max(v)));
        ensure(hi - lo <= 1e-10, || format!("{name}: sup|Rm|(T-t) varies by {:e}", hi - lo))?;
        spread = spread.max(hi - lo);
    }
    Ok(format!("5 sphere-bearing geometries, max spread {spread:.1e}"))
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branchcurve"))
        .args(args)
        .env_remove("BRANCHCURVE_TOL")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s3 = write(d, "s3.json", r#"{"geometry": "s3xr", "time": 0.1}"#);
    let s22 = write(d, "s22.json", r#"{"geometry": "s2xs2", "time": 0}"#);
    let comps = write(
        d,
        "comps.json",
        r#"{"riemann": [{"i": 1, "j": 2, "k": 2, "l": 1, "value": 1}, {"i": 3, "j": 4, "k": 4, "l": 3, "value": 2}, {"i": 1, "j": 3, "k": 3, "l": 1, "value": 0.5}]}"#,
    );
    let plot_a = d.join("a.csv");
    let plot_b = d.join("b.csv");
    let (pa, pb) = (plot_a.to_str().unwrap(), plot_b.to_str().unwrap());

    let commands: Vec<Vec<&str>> = vec![
        vec!["compute", &s3, "--emit", "all"],
        vec!["compute", &s22, "--emit", "coeffs"],
        vec!["compute", &comps, "--emit", "all"],
        vec!["flow", "s2xs2", "--t0", "0", "--t1", "0.4", "--steps", "5", "--emit", "csv"],
        vec!["blowup", "s3xr", "--lambda-base", "0.5", "--count", "8", "--t", "-1"],
        vec!["plot", &s3, "--chart", "pm", "--grid", "40"],
    ];
    for args in &commands {
        let (first, second) = (run_cli(args), run_cli(args));
        ensure(first.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&first.stderr))
        })?;
        ensure(first.stdout == second.stdout, || format!("{args:?} output differs between runs"))?;
        let mut seq_args = args.clone();
        seq_args.push("--sequential");
        ensure(run_cli(&seq_args).stdout == first.stdout, || {
            format!("{args:?} sequential output differs")
        })?;
    }
    for out in [pa, pb] {
        let o = run_cli(&["plot", &s22, "--grid", "25", "--out", out]);
        ensure(o.status.success(), || "plot --out failed".into())?;
    }
    ensure(std::fs::read(pa).unwrap() == std::fs::read(pb).unwrap(), || "plot files differ".into())?;

    let missing = write(d, "missing.json", r#"{"time": 0}"#);
    let garbled = write(d, "garbled.json", r#"{"geometry": "s3xr", "time": "#);
    let conflict = write(
        d,
        "conflict.json",
        r#"{"riemann": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": 1}, {"i": 2, "j": 1, "k": 1, "l": 2, "value": 1}]}"#,
    );
    let late = write(d, "late.json", r#"{"geometry": "s4", "time": 0.5}"#);
    let flat = write(d, "s4.json", r#"{"geometry": "s4", "time": 0}"#);
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["compute", &missing], 2),
        (vec!["compute", &garbled], 2),
        (vec!["compute", &conflict], 3),
        (vec!["compute", &late], 4),
        (vec!["plot", &flat], 5),
        (vec!["blowup", "r4"], 4),
        (vec!["flow", "s3xr", "--t1", "0.25"], 4),
    ];
    for (args, code) in &cases {
        let o = run_cli(args);
        ensure(o.status.code() == Some(*code), || {
            format!("{args:?}: exit {:?}, expected {code}", o.status.code())
        })?;
        let err = String::from_utf8_lossy(&o.stderr);
        ensure(err.lines().count() == 1, || format!("{args:?}: diagnostic is not one line: {err}"))?;
    }
    Ok(format!(
        "{} commands byte-identical across runs and modes, {} exit codes honoured",
        commands.len(),
        cases.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("golden curves", criterion_1),
        ("scale invariance", criterion_2),
        ("oracle equivalence", criterion_3),
        ("blow-up convergence", criterion_4),
        ("structural invariants", criterion_5),
        ("type I witness", criterion_6),
        ("CLI determinism", criterion_7),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {} {name}: {detail} ({secs:.2} s)", n + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail} ({secs:.2} s)", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}

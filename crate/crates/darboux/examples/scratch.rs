//! Dry run of the acceptance checks (deleted before commit).

use darboux::background::{self, BackgroundModel, GaussianBump, QuadratureSettings};
use darboux::config::{CouplingMatrix, SpectralParameters};
use darboux::dressing;
use darboux::golden;
use darboux::linalg::{self, CMatrix};
use darboux::recursion::{self, OracleSettings};
use darboux::spectral;
use darboux::verify;
use darboux::{asymptotics, Cx, DressingConfig, Point};
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const GL_NODES: [f64; 5] = [
    0.1488743389816312,
    0.4333953941292472,
    0.6794095682990244,
    0.8650633666889845,
    0.9739065285171717,
];
const GL_WEIGHTS: [f64; 5] = [
    0.2955242247147529,
    0.2692667193099963,
    0.2190863625159820,
    0.1494513491505806,
    0.0666713443086881,
];

fn gauss_legendre<F: Fn(f64) -> Cx>(f: &F, a: f64, b: f64, panels: usize) -> Cx {
    let h = (b - a) / panels as f64;
    let mut total = Cx::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for i in 0..5 {
            let d = 0.5 * h * GL_NODES[i];
            total += GL_WEIGHTS[i] * (f(mid + d) + f(mid - d));
        }
    }
    total * (0.5 * h)
}

fn simpson_step<F: Fn(f64) -> Cx>(
    f: &F,
    a: f64,
    b: f64,
    fa: Cx,
    fm: Cx,
    fb: Cx,
    whole: Cx,
    tol: f64,
    depth: u32,
) -> Cx {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn adaptive_simpson<F: Fn(f64) -> Cx>(f: &F, a: f64, b: f64, tol: f64) -> Cx {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

fn born_oracle(amplitude: f64, k: Cx, panels: usize) -> Cx {
    let u = |x1: f64, x2: f64| amplitude * (-x1 * x1 - x2 * x2).exp();
    let inner = |x2p: f64| -> Cx {
        let f = |x1p: f64| -> Cx {
            background::green_g0(Point::new(-x1p, -x2p), k).unwrap() * u(x1p, x2p)
        };
        adaptive_simpson(&f, -8.0, 8.0, 1e-11)
    };
    let outer = |t: f64| -> Cx { (inner(t * t) + inner(-t * t)) * 2.0 * t };
    gauss_legendre(&outer, 0.0, 8.0f64.sqrt(), panels)
}

/// Independent reduction for the same first Born term at x = (0,0), k = i,
/// unit-width centered Gaussian: both potential integrals are Gaussian and
/// evaluate in closed form, leaving one smooth line integral
/// T1 = (A/2) * int_0^inf exp(-a^2/4) * Im erfcx(a + i a^2/2) da.
fn born_oracle_fourier(amplitude: f64) -> Cx {
    use errorfunctions::ComplexErrorFunctions;
    let erfcx = |z: Cx| (Cx::new(0.0, 1.0) * z).w();
    let f = |alpha: f64| -> Cx {
        let z = Cx::new(alpha, 0.5 * alpha * alpha);
        let bracket = erfcx(z) - erfcx(z.conj());
        bracket * (-0.25 * alpha * alpha).exp()
    };
    gauss_legendre(&f, 0.0, 14.0, 64) * amplitude / Cx::new(0.0, 4.0)
}

fn main() {
    let t0 = Instant::now();

    // --- Born term oracle convergence ---
    let k = Cx::new(0.0, 1.0);
    for panels in [24, 32, 48] {
        let t = Instant::now();
        let v = born_oracle(0.1, k, panels);
        println!(
            "born oracle panels={panels}: {:.12e} {:+.12e} i  ({:?})",
            v.re,
            v.im,
            t.elapsed()
        );
    }
    let vf = born_oracle_fourier(0.1);
    println!("born oracle fourier:  {:.12e} {:+.12e} i", vf.re, vf.im);
    let bg = BackgroundModel::gaussian(
        GaussianBump { amplitude: 0.1, width: [1.0, 1.0], center: [0.0, 0.0] },
        1,
        QuadratureSettings::default(),
    );
    let t = Instant::now();
    let terms = background::jost_chi_terms(&bg, Point::new(0.0, 0.0), k).unwrap();
    println!(
        "library born term: {:.12e} {:+.12e} i  ({:?})",
        terms[1].re,
        terms[1].im,
        t.elapsed()
    );

    // --- high-k approach to 1 ---
    let xq = Point::new(0.4, -0.3);
    for tval in [4.0, 8.0, 16.0] {
        let chi = background::jost_chi(&bg, xq, Cx::new(0.0, tval)).unwrap();
        println!("  |chi(iT)-1| at T={tval}: {:.6e}", (chi - Cx::new(1.0, 0.0)).norm());
    }

    // --- beta numeric derivative timing ---
    let bg_beta = BackgroundModel::gaussian(
        GaussianBump { amplitude: 0.1, width: [1.0, 1.0], center: [0.0, 0.0] },
        1,
        QuadratureSettings { truncation_radius: 6.0, ..QuadratureSettings::default() },
    );
    let params1 = SpectralParameters::new(vec![Cx::new(0.2, 0.9)]);
    let kb = Cx::new(0.5, 0.6);
    let pb = Point::new(0.7, 0.4);
    let t = Instant::now();
    let b0 = background::beta(&bg_beta, pb, 0, kb, &params1).unwrap();
    println!("one numeric beta eval: {:?}  value {:.6e} {:+.6e} i", t.elapsed(), b0.re, b0.im);
    let t = Instant::now();
    let h = 5e-3;
    let bp = |x1: f64| background::beta(&bg_beta, Point::new(x1, pb.x2), 0, kb, &params1).unwrap();
    let d_h = (bp(pb.x1 + h) - bp(pb.x1 - h)) / (2.0 * h);
    let d_h2 = (bp(pb.x1 + 0.5 * h) - bp(pb.x1 - 0.5 * h)) / h;
    let deriv = (d_h2 * 4.0 - d_h) / 3.0;
    let integrand = background::jost_phi(&bg_beta, pb, params1.lambdas()[0]).unwrap().conj()
        * background::jost_phi(&bg_beta, pb, kb).unwrap();
    println!(
        "beta FD rel err: {:.3e}  (4 beta evals took {:?})",
        (deriv - integrand).norm() / integrand.norm(),
        t.elapsed()
    );

    // --- numeric B hermiticity ---
    let params2 =
        SpectralParameters::new(vec![Cx::new(0.2, 0.9), Cx::new(-0.5, -0.6)]);
    let t = Instant::now();
    match background::coupling_integral_matrix(&bg_beta, Point::new(0.3, -0.2), &params2) {
        Ok(b) => {
            let mut defect: f64 = 0.0;
            for l in 0..2 {
                for m in 0..2 {
                    defect =
                        defect.max((b[(l, m)] - b[(m, l)].conj()).norm() / b[(l, m)].norm().max(1.0));
                }
            }
            println!("numeric B hermiticity defect: {:.3e}  ({:?})", defect, t.elapsed());
        }
        Err(e) => println!("numeric B FAILED: {e}  ({:?})", t.elapsed()),
    }

    // --- criterion 3: recursion oracle N=2 and N=3 ---
    for (name, config, extras, tol) in [
        (
            "N=2",
            golden::two_soliton(),
            vec![Cx::new(0.37, 0.83), Cx::new(-0.52, -0.61)],
            1e-6,
        ),
        (
            "N=3",
            golden::three_soliton_oracle(),
            vec![Cx::new(0.3, 1.6), Cx::new(-0.45, -2.0)],
            1e-5,
        ),
    ] {
        let t = Instant::now();
        match recursion::run_recursion(&config, 0.35, &extras, &OracleSettings::default()) {
            Ok(chain) => {
                let n = config.len();
                let grid = chain.grid().clone();
                let mut worst: f64 = 0.0;
                for s in 0..25 {
                    let x = -4.8 + 9.6 * (s as f64) / 24.0;
                    let i = grid.index_near(x);
                    let p = Point::new(grid.x(i), chain.x2());
                    let u_chain = chain.potential(n, i).unwrap();
                    let u_closed = dressing::potential(&config, p).unwrap();
                    worst = worst.max((u_chain - u_closed).abs() / u_closed.abs().max(1e-8));
                    let d_chain = chain.delta(n, i).unwrap();
                    let d_closed = dressing::delta_n(&config, p, n).unwrap();
                    worst = worst.max((d_chain - d_closed).abs() / d_closed.abs().max(1e-8));
                    let g_chain = chain.g(n, i).unwrap();
                    let g_closed = dressing::dressed_g(&config, p, n - 1).unwrap();
                    worst = worst.max((g_chain - g_closed).norm() / g_closed.norm().max(1e-8));
                    for (j, &kx) in extras.iter().enumerate() {
                        let f_chain = chain.f_big(n, n + j, i).unwrap();
                        let f_closed = dressing::dressed_f_solution(&config, p, kx).unwrap();
                        worst = worst.max((f_chain - f_closed).norm() / f_closed.norm().max(1e-8));
                    }
                }
                println!("oracle {name}: worst rel {worst:.3e} (tol {tol:.0e})  ({:?})", t.elapsed());
            }
            Err(e) => println!("oracle {name} FAILED: {e}"),
        }
    }

    // --- criterion 6: transmission limits ---
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    for (ci, config) in golden::all().into_iter().enumerate() {
        let mut worst_a: f64 = 0.0;
        let mut worst_one: f64 = 0.0;
        let mut count = 0;
        while count < 10 {
            let kk = Cx::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            if kk.im.abs() < 0.2 {
                continue;
            }
            if config.params().lambdas().iter().any(|l| (kk.im + l.im).abs() < 0.2) {
                continue;
            }
            count += 1;
            let sgn = kk.im.signum();
            let a = asymptotics::transmission(config.params(), kk).unwrap();
            let chi_plus = dressing::dressed_chi(&config, Point::new(30.0 * sgn, 0.7), kk).unwrap();
            let chi_minus = dressing::dressed_chi(&config, Point::new(-30.0 * sgn, 0.7), kk).unwrap();
            worst_a = worst_a.max((chi_plus - a).norm());
            worst_one = worst_one.max((chi_minus - Cx::new(1.0, 0.0)).norm());
        }
        println!("transmission limit config {ci}: |chi-a| {worst_a:.3e}, |chi-1| {worst_one:.3e}");
    }

    // --- criterion 7: rays ---
    let config = golden::two_soliton();
    for j in 0..2 {
        let shift_closed = asymptotics::ray_shift(&config, j).unwrap();
        let mut centers = [0.0f64; 2];
        for (si, sign) in [1.0f64, -1.0].into_iter().enumerate() {
            let profile = asymptotics::ray_profile(&config, j, sign).unwrap();
            let x2 = sign * 100.0;
            let eta0 = -profile.center / profile.rate;
            let half = 4.0 / profile.rate.abs();
            let mut samples = Vec::new();
            for i in 0..81 {
                let eta = eta0 - half + 2.0 * half * (i as f64) / 80.0;
                let p = Point::new(eta - 2.0 * profile.direction * x2, x2);
                samples.push((eta, dressing::potential(&config, p).unwrap()));
            }
            let seed = asymptotics::Sech2Fit {
                depth: profile.depth,
                rate: profile.rate,
                center: profile.center + 0.25,
            };
            let fit = asymptotics::fit_sech2(&samples, seed).unwrap();
            centers[si] = fit.center;
            println!(
                "ray j={j} sign={sign}: center closed {:.6} fitted {:.6} dev {:.3e}",
                profile.center,
                fit.center,
                (fit.center - profile.center).abs()
            );
        }
        let measured = (2.0 * (centers[0] - centers[1])).exp();
        println!(
            "ray j={j}: shift closed {shift_closed:.8}, measured {measured:.8}, diff {:.3e}",
            (measured - shift_closed).abs()
        );
    }
    // off-ray decay
    for &x2 in &[100.0f64, -100.0] {
        for &x1 in &[-300.0f64, -30.0, 150.0, 300.0] {
            let u = dressing::potential(&config, Point::new(x1, x2)).unwrap();
            if u.abs() > 1e-6 {
                println!("off-ray FAIL at ({x1},{x2}): {u:.3e}");
            }
        }
    }
    println!("off-ray decay checked");

    // --- criterion 8: residue circle average ---
    for (ci, config) in golden::all().into_iter().enumerate() {
        let n = config.len();
        let lam_last = config.params().lambdas()[n - 1];
        let a = lam_last.conj();
        for p in [Point::new(0.4, -0.3), Point::new(-0.8, 0.5)] {
            let g = dressing::dressed_g(&config, p, n - 1).unwrap();
            let target = Cx::new(0.0, -1.0) * g;
            for eps in [1e-3, 1e-4] {
                let mut acc = Cx::new(0.0, 0.0);
                for m in 0..4 {
                    let theta = std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2 * m as f64;
                    let dk = Cx::new(theta.cos(), theta.sin()) * eps;
                    acc += dk * dressing::dressed_f_solution(&config, p, a + dk).unwrap();
                }
                let res = acc / 4.0;
                println!(
                    "residue config {ci} p=({},{}) eps={eps:.0e}: rel {:.3e}",
                    p.x1,
                    p.x2,
                    (res - target).norm() / target.norm()
                );
            }
        }
    }

    // --- criterion 9: random valid configs N<=4 ---
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    for n in 1..=4usize {
        let config = random_valid_config(&mut rng, n);
        let data = spectral::discrete_constants(&config).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let p = Point::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            for m in 0..n {
                let r = spectral::discrete_relation_residual(&config, &data, p, m).unwrap();
                worst = worst.max(r);
            }
        }
        println!("discrete relation N={n}: worst {worst:.3e}");
    }

    // --- criterion 10: G0 sweep ---
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst_quad: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for _ in 0..20 {
        let p = Point::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(0.3..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        );
        let kk = Cx::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        );
        let closed = background::green_g0(p, kk).unwrap();
        let quad = background::green_g0_quadrature(p, kk, &QuadratureSettings::default()).unwrap();
        worst_quad = worst_quad.max((closed - quad).norm() / closed.norm());
        let mirror = background::green_g0(Point::new(p.x1, -p.x2), -kk.conj()).unwrap();
        worst_sym = worst_sym.max((closed.conj() - mirror).norm() / closed.norm());
        let hh = 1e-3;
        let g = |x1: f64, x2: f64| background::green_g0(Point::new(x1, x2), kk).unwrap();
        let resid = |h: f64| -> Cx {
            let d2x1 = (g(p.x1 + h, p.x2) - 2.0 * g(p.x1, p.x2) + g(p.x1 - h, p.x2)) / (h * h);
            let dx2 = (g(p.x1, p.x2 + h) - g(p.x1, p.x2 - h)) / (2.0 * h);
            let dx1 = (g(p.x1 + h, p.x2) - g(p.x1 - h, p.x2)) / (2.0 * h);
            Cx::i() * dx2 + d2x1 - 2.0 * Cx::i() * kk * dx1
        };
        let extrap = (resid(0.5 * hh) * 4.0 - resid(hh)) / 3.0;
        worst_fd = worst_fd.max(extrap.norm());
    }
    println!("G0: quad {worst_quad:.3e}, sym {worst_sym:.3e}, fd {worst_fd:.3e}");

    // --- criterion 12: jump check ---
    for (name, config, ks) in [
        ("G1", golden::one_soliton(), [0.5f64, -1.3]),
        ("G2", golden::two_soliton(), [0.7, -1.1]),
    ] {
        for k in ks {
            let r = spectral::jump_check(
                &config,
                Point::new(0.3, -0.4),
                k,
                &spectral::DEFAULT_EPS_LADDER,
            )
            .unwrap();
            println!("jump {name} k={k}: {r:.3e}");
        }
    }

    // --- criterion 13: wronskian / delta evolution ---
    let points = [
        Point::new(0.2, -0.3),
        Point::new(-0.9, 0.7),
        Point::new(1.1, 0.4),
        Point::new(0.5, 0.9),
    ];
    for (ci, config) in golden::all().into_iter().enumerate() {
        let (k1, k2) = (Cx::new(0.31, 0.77), Cx::new(-0.44, -1.37));
        let f = |p: Point| dressing::dressed_jost(&config, p, k1);
        let g = |p: Point| dressing::dressed_jost(&config, p, k2);
        let rep = verify::wronskian_residual(&f, &g, &points, 1e-3).unwrap();
        let mut worst_delta: f64 = 0.0;
        for level in 1..=config.len() {
            for p in &points {
                worst_delta =
                    worst_delta.max(verify::delta_evolution_residual(&config, *p, level, 1e-3).unwrap());
            }
        }
        println!("wronskian config {ci}: {:.3e}, delta-evolution {worst_delta:.3e}", rep.max_rel);
    }

    // --- criterion 2: pde residual ---
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for (config, kk) in [
        (golden::one_soliton(), Cx::new(0.4, 0.8)),
        (golden::two_soliton(), Cx::new(0.37, 0.83)),
        (golden::three_soliton(), Cx::new(-0.52, -0.61)),
    ] {
        let points: Vec<Point> = (0..100)
            .map(|_| Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let field = |p: Point| dressing::dressed_jost(&config, p, kk);
        let upot = |p: Point| dressing::potential(&config, p);
        let rep = verify::pde_residual(&field, &upot, &points, 1e-3).unwrap();
        println!("pde N={}: max_rel {:.3e}", config.len(), rep.max_rel);
    }

    // --- criterion 1 ---
    let config = golden::one_soliton();
    let mut worst: f64 = 0.0;
    let shift = 0.5 * (2.0f64).ln();
    for i in 0..201 {
        let x1 = -10.0 + 0.1 * i as f64;
        for j in 0..201 {
            let x2 = -10.0 + 0.1 * j as f64;
            let u = dressing::potential(&config, Point::new(x1, x2)).unwrap();
            let exact = -2.0 / (x1 - shift).cosh().powi(2);
            worst = worst.max((u - exact).abs());
        }
    }
    println!("one-soliton grid worst {worst:.3e}");

    // --- criterion 4 ---
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    for (ci, config) in golden::all().into_iter().enumerate() {
        let im_product: f64 = config.params().lambdas().iter().map(|l| l.im).product();
        let mut violations = 0u32;
        for _ in 0..10_000 {
            let p = Point::new(rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
            match dressing::assemble(&config, p) {
                Ok(state) => {
                    if state.det_scaled().re * im_product <= 0.0 {
                        violations += 1;
                    }
                }
                Err(_) => violations += 1,
            }
        }
        println!("sign law config {ci}: {violations} violations");
    }

    // --- criterion 5 ---
    let mut worst: f64 = 0.0;
    for config in [golden::two_soliton(), golden::three_soliton()] {
        let n = config.len();
        let kk = Cx::new(0.33, 0.71);
        let perms: Vec<Vec<usize>> = permutations(n);
        for perm in perms {
            let pc = permuted_config(&config, &perm);
            for p in [Point::new(0.2, -0.4), Point::new(-1.3, 0.8), Point::new(2.1, 1.7)] {
                let u1 = dressing::potential(&config, p).unwrap();
                let u2 = dressing::potential(&pc, p).unwrap();
                worst = worst.max((u1 - u2).abs() / u1.abs().max(1.0));
                let f1 = dressing::dressed_jost(&config, p, kk).unwrap();
                let f2 = dressing::dressed_jost(&pc, p, kk).unwrap();
                worst = worst.max((f1 - f2).norm() / f1.norm().max(1.0));
            }
        }
    }
    println!("permutation worst {worst:.3e}");

    println!("total {:?}", t0.elapsed());
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut v: Vec<usize> = rest.iter().map(|&x| x + 1).collect();
            v.insert(pos, 0);
            out.push(v);
        }
    }
    out
}

fn permuted_config(config: &DressingConfig, perm: &[usize]) -> DressingConfig {
    let lambdas = config.params().lambdas();
    let n = lambdas.len();
    let new_lambdas: Vec<Cx> = perm.iter().map(|&j| lambdas[j]).collect();
    let c = config.coupling().matrix();
    let new_c = CMatrix::from_fn(n, n, |a, b| c[(perm[a], perm[b])]);
    DressingConfig::new(
        SpectralParameters::new(new_lambdas),
        CouplingMatrix::new(new_c),
        config.background().clone(),
    )
    .unwrap()
}

fn random_valid_config(rng: &mut ChaCha8Rng, n: usize) -> DressingConfig {
    // Distinct real parts, pairwise-distinct imaginary magnitudes (mixed signs).
    let mut lambdas: Vec<Cx> = Vec::new();
    while lambdas.len() < n {
        let re = rng.random_range(-1.5..1.5);
        let im_mag = rng.random_range(0.4..1.5);
        let im = if lambdas.is_empty() || rng.random_bool(0.5) { im_mag } else { -im_mag };
        let cand = Cx::new(re, im);
        if lambdas
            .iter()
            .all(|l| (l.re - cand.re).abs() > 0.2 && (l.im.abs() - im_mag).abs() > 0.1)
        {
            lambdas.push(cand);
        }
    }
    let plus: Vec<usize> = (0..n).filter(|&j| lambdas[j].im > 0.0).collect();
    let minus: Vec<usize> = (0..n).filter(|&j| lambdas[j].im < 0.0).collect();
    let mut c = DMatrix::<Cx>::zeros(n, n);
    for (sign, block) in [(1.0f64, &plus), (-1.0, &minus)] {
        let m = block.len();
        if m == 0 {
            continue;
        }
        // sign * PD block: A A^H + 0.4 I.
        let a = DMatrix::<Cx>::from_fn(m, m, |_, _| {
            Cx::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let pd = &a * a.adjoint() + DMatrix::<Cx>::identity(m, m) * Cx::new(0.4, 0.0);
        for (bi, &gi) in block.iter().enumerate() {
            for (bj, &gj) in block.iter().enumerate() {
                c[(gi, gj)] = pd[(bi, bj)] * sign;
            }
        }
    }
    for &i in &plus {
        for &j in &minus {
            let z = Cx::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            c[(i, j)] = z;
            c[(j, i)] = z.conj();
        }
    }
    let _ = DVector::<f64>::zeros(1);
    DressingConfig::new(
        SpectralParameters::new(lambdas),
        CouplingMatrix::new(c),
        BackgroundModel::zero(),
    )
    .expect("constructed configuration must validate")
}

//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#![allow(clippy::needless_range_loop)]

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilcalc::corpus::BUNDLED;
use nilcalc::parse_algebra;
use nilcalc_core::coadjoint::{
    central_cocycle, extend_center_covector, has_flat_orbits, is_flat, kirillov_form, pfaffian_on_center_dual, quotient_product, sample_covectors,
    vergne_polarization,
};
use nilcalc_core::families::{complex_heisenberg, engel, free_step2, heisenberg, heisenberg_product, heisenberg_type, quotient_chain, upper_triangular};
use nilcalc_core::hellip::{check_bve_at, check_engel_gamma, rockland_bruteforce, BvEOperatorSpec, LadderTrend, RocklandCheckConfig, Verdict, Witness};
use nilcalc_core::lagrangian::{random_lagrangian, SymplecticSpace, DEFAULT_PHASE_TOLERANCE};
use nilcalc_core::liealg::{bch, jordan_holder_basis, mohsen_flag, mohsen_modification};
use nilcalc_core::rational::{self, ints, q, qf, unit};
use nilcalc_core::spectral::{self, hermitian_eigenvalues, CMatrix};
use nilcalc_core::symbolrep::{fock_layer_operator, flat_rep, harmonic_oscillator, PBWSymbol};
use nilcalc_core::{linalg, LieAlgebra, Poly, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn corpus() -> Vec<LieAlgebra> {
    BUNDLED.iter().map(|(_, text)| parse_algebra(text).expect("bundled documents parse").algebra).collect()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    qf(rng.random_range(-6..=6), rng.random_range(1..=4))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

/// Flat-orbit corpus, exact.
fn criterion_1() -> Outcome {
    for n in 1..=3 {
        let g = heisenberg(n).map_err(e)?;
        let flag = jordan_holder_basis(&g).map_err(e)?;
        ensure(has_flat_orbits(&g, &flag).map_err(e)?.flat, || format!("h_{n} has no flat orbits"))?;
        for c in -3..=3 {
            let xi = extend_center_covector(&g, &flag, &ints(&[c]));
            ensure(is_flat(&g, &xi) == (c != 0), || format!("h_{n}: flatness at ξ = {c}"))?;
        }
    }
    for n in 1..=2 {
        let g = complex_heisenberg(n).map_err(e)?;
        let flag = jordan_holder_basis(&g).map_err(e)?;
        let pf = pfaffian_on_center_dual(&g, &flag).map_err(e)?;
        let expected = (&Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(2)).pow(n as u32);
        ensure(pf.poly == expected || pf.poly == expected.scale(&q(-1)), || format!("complex Heisenberg n={n}: Pf = {}", pf.render(&g)))?;
    }
    let c4 = quotient_chain(4).map_err(e)?;
    let pf = pfaffian_on_center_dual(&c4, &jordan_holder_basis(&c4).map_err(e)?).map_err(e)?;
    let x1x3 = &Poly::var(3, 0) * &Poly::var(3, 2);
    ensure(&pf.poly * &pf.poly == &x1x3 * &x1x3, || format!("quotient chain n=4: Pf = {}", pf.render(&c4)))?;
    let none = [quotient_chain(3), engel(), upper_triangular(3), free_step2(3)];
    for g in none {
        let g = g.map_err(e)?;
        ensure(!has_flat_orbits(&g, &jordan_holder_basis(&g).map_err(e)?).map_err(e)?.flat, || format!("{} should have no flat orbits", g.name()))?;
    }
    let members = corpus();
    for g in &members {
        let m = mohsen_modification(g).map_err(e)?;
        ensure(m.center().dim() == 1, || format!("Mohsen of {}: center dim {}", g.name(), m.center().dim()))?;
        ensure(has_flat_orbits(&m, &mohsen_flag(g).map_err(e)?).map_err(e)?.flat, || format!("Mohsen of {} has no flat orbits", g.name()))?;
    }
    Ok(format!("h_1..h_3, complex Heisenberg n=1,2, quotient chain, 4 non-flat algebras, {} Mohsen modifications", members.len()))
}

/// Vergne polarization at 100 flat covectors per flat-orbit member.
fn criterion_2() -> Outcome {
    let mut members = Vec::new();
    for g in corpus() {
        let flag = jordan_holder_basis(&g).map_err(e)?;
        if has_flat_orbits(&g, &flag).map_err(e)?.flat {
            members.push((g.clone(), flag));
        }
        if g.name() == "heisenberg-1" || g.name() == "engel" {
            members.push((mohsen_modification(&g).map_err(e)?, mohsen_flag(&g).map_err(e)?));
        }
    }
    let hp = heisenberg_product(&[1, 2]).map_err(e)?;
    members.push((hp.clone(), jordan_holder_basis(&hp).map_err(e)?));
    let mut checked = 0;
    for (g, flag) in &members {
        let mut seed = 0;
        let mut flat = Vec::new();
        while flat.len() < 100 {
            flat.extend(sample_covectors(g.dim(), 100, seed).into_iter().filter(|xi| is_flat(g, xi)));
            seed += 1;
        }
        for xi in flat.iter().take(100) {
            let h = vergne_polarization(g, flag, xi).map_err(|err| format!("{}: {err}", g.name()))?;
            let rank = linalg::rank(&kirillov_form(g, xi));
            ensure(g.dim() - h.dim() == rank / 2, || format!("{}: codimension", g.name()))?;
            for x in h.basis() {
                for y in h.basis() {
                    let b = g.bracket(x, y);
                    ensure(h.contains(&b), || format!("{}: not a subalgebra", g.name()))?;
                    ensure(rational::dot(xi, &b) == q(0), || format!("{}: not isotropic", g.name()))?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} polarizations over {} algebras", members.len()))
}

/// Maslov/η cocycle on 200 triples per dimension 2, 4, 6.
fn criterion_3() -> Outcome {
    let line = |a: i64, b: i64| vec![ints(&[a, b])];
    let plane = SymplecticSpace::standard(1);
    let m = plane.maslov_triple(&line(1, 0), &line(0, 1), &line(1, 1)).map_err(e)?;
    ensure(m == -1, || format!("reference triple: Mas = {m}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        let space = SymplecticSpace::standard(d);
        let mut done = 0;
        while done < 200 {
            let ls: Vec<_> = (0..3).map(|_| random_lagrangian(space.omega(), &mut rng)).collect();
            let chk = space.lion_cocycle_check(&ls[0], &ls[1], &ls[2], DEFAULT_PHASE_TOLERANCE).map_err(e)?;
            if chk.near_degenerate {
                continue;
            }
            ensure(chk.residual < 1e-6, || format!("dim {}: Mas = {}, η = {:?}", 2 * d, chk.maslov, chk.etas))?;
            worst = worst.max(chk.residual);
            done += 1;
        }
    }
    Ok(format!("600 triples, max residual {worst:.1e}, reference Mas = -1"))
}

/// Oscillator spectrum of the sub-Laplacian on h_1 at ξ = Z*, N = 20.
fn criterion_4() -> Outcome {
    let g = heisenberg(1).map_err(e)?;
    let flag = jordan_holder_basis(&g).map_err(e)?;
    let rep = flat_rep(&g, &flag, &unit(3, 2)).map_err(e)?;
    let ev = hermitian_eigenvalues(&harmonic_oscillator(&rep, 20).map_err(e)?.matrix);
    let mut worst: f64 = 0.0;
    for (k, v) in ev.iter().take(6).enumerate() {
        worst = worst.max((v - (2 * k + 1) as f64).abs());
    }
    ensure(worst < 1e-6, || format!("lowest eigenvalues {:?}", &ev[..6]))?;
    Ok(format!("max deviation {worst:.1e}"))
}

/// Fock layers against the truncated sub-Laplacian for 20 random forms on ℝ⁴.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut forms = 0;
    while forms < 20 {
        let mut om = linalg::zero_matrix(4, 4);
        for i in 0..4 {
            for j in i + 1..4 {
                let v = q(rng.random_range(-3..=3));
                om[i][j] = v.clone();
                om[j][i] = -v;
            }
        }
        if linalg::det(&om) == q(0) {
            continue;
        }
        forms += 1;
        let g = heisenberg_type(&om).map_err(e)?;
        let flag = jordan_holder_basis(&g).map_err(e)?;
        let rep = flat_rep(&g, &flag, &unit(5, 4)).map_err(e)?;
        let kmax = 4;
        let ev = hermitian_eigenvalues(&harmonic_oscillator(&rep, kmax).map_err(e)?.matrix);
        let omf = spectral::to_real(&om);
        let id = spectral::to_real(&linalg::identity(4));
        let mut fock = Vec::new();
        for k in 0..=kmax {
            fock.extend(hermitian_eigenvalues(&fock_layer_operator(&omf, &id, k).map_err(e)?));
        }
        fock.sort_by(f64::total_cmp);
        ensure(ev.len() == fock.len(), || format!("cluster sizes {} vs {}", ev.len(), fock.len()))?;
        for (a, b) in ev.iter().zip(&fock) {
            worst = worst.max((a - b).abs());
        }
        ensure(worst < 1e-5, || format!("form {forms}: deviation {worst:.2e}"))?;
    }
    Ok(format!("20 forms, k <= 4, max deviation {worst:.1e}"))
}

/// Closed-form verdict against the σ_min ladder on h_1 with γ = cξ.
fn criterion_6() -> Outcome {
    let g = heisenberg(1).map_err(e)?;
    let flag = jordan_holder_basis(&g).map_err(e)?;
    let config = RocklandCheckConfig { truncation: 24, ..RocklandCheckConfig::default() };
    let cs = [0.0, 0.5, -0.5, 1.0, -1.0, 2.5, -2.5, 3.0, -3.0, 7.0, -7.0];
    for &c in &cs {
        let spec = BvEOperatorSpec::scalar(&g, c).map_err(e)?;
        let symbol = spec.symbol().map_err(e)?;
        let odd = c.fract() == 0.0 && (c.abs() as i64) % 2 == 1;
        let mut singular_somewhere = false;
        for s in [1i64, -1] {
            let closed = check_bve_at(&spec, &[q(s)], 1e-9).map_err(e)?;
            singular_somewhere |= closed.verdict == Verdict::NotElliptic;
            let rep = flat_rep(&g, &flag, &extend_center_covector(&g, &flag, &[q(s)])).map_err(e)?;
            let ladder = rockland_bruteforce(&rep, &symbol, &config).map_err(e)?;
            let expect = if closed.verdict == Verdict::NotElliptic { LadderTrend::Decaying } else { LadderTrend::Stable };
            ensure(ladder.trend == expect, || format!("c = {c}, ξ = {s}: closed {:?}, ladder {:?}", closed.verdict, ladder.trend))?;
        }
        ensure(singular_somewhere == odd, || format!("c = {c}: singular = {singular_somewhere}"))?;
    }
    Ok(format!("{} values of c agree at ξ = ±1, N = 24", cs.len()))
}

/// Diagonal Dirac-square symbol on h_1.
fn criterion_7() -> Outcome {
    let g = heisenberg(1).map_err(e)?;
    let flag = jordan_holder_basis(&g).map_err(e)?;
    let lap = PBWSymbol::sub_laplacian(&g, None).map_err(e)?;
    let iz = |s: f64| PBWSymbol::new(&g, 2, 1, vec![(CMatrix::from_element(1, 1, Complex64::new(0.0, s)), vec![0, 0, 1])]);
    let dirac = PBWSymbol::block_diagonal(&g, &[lap.add(&iz(1.0).map_err(e)?).map_err(e)?, lap.add(&iz(-1.0).map_err(e)?).map_err(e)?]).map_err(e)?;
    let rep = flat_rep(&g, &flag, &unit(3, 2)).map_err(e)?;
    let ladder = rockland_bruteforce(&rep, &dirac, &RocklandCheckConfig::default()).map_err(e)?;
    ensure(ladder.trend == LadderTrend::Decaying, || format!("ladder {:?}", ladder.steps))?;
    let w = ladder.witness.ok_or("no witness")?;
    ensure(w.multi_index == [0] && w.fiber == 0, || format!("witness {:?} in fiber {}", w.multi_index, w.fiber))?;
    // the same operator as operator data: iZ is γ = −1 against −iZ
    let gamma = CMatrix::from_fn(2, 2, |i, j| if i != j { Complex64::new(0.0, 0.0) } else { Complex64::new([-1.0, 1.0][i], 0.0) });
    let spec = BvEOperatorSpec::new(&g, None, vec![gamma]).map_err(e)?;
    let closed = check_bve_at(&spec, &[q(1)], 1e-9).map_err(e)?;
    ensure(matches!(closed.witness, Some(Witness::SingularLayer { k: 0, .. })), || format!("closed form witness {:?}", closed.witness))?;
    Ok(format!("not Rockland; ground state in fiber 0, σ_min = {:.1e}", w.sigma_min))
}

/// Engel criterion on γ = i·Id, 0 and 1.
fn criterion_8() -> Outcome {
    let scalar = |z: Complex64| CMatrix::from_element(1, 1, z);
    let i2 = CMatrix::identity(2, 2) * Complex64::new(0.0, 1.0);
    let cases = [(i2, true), (scalar(Complex64::new(0.0, 1.0)), true), (scalar(Complex64::new(0.0, 0.0)), false), (scalar(Complex64::new(1.0, 0.0)), false)];
    for (gamma, want) in &cases {
        let v = check_engel_gamma(gamma, 1e-9).map_err(e)?;
        ensure(v.holds == *want && !v.undetermined, || format!("γ = {gamma}: holds = {}", v.holds))?;
    }
    Ok("i·Id holds; 0 and 1 fail".into())
}

/// BCH associativity and the central cocycle identity on 500 triples per member.
fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let members = corpus();
    for g in &members {
        let n = g.dim();
        let flag = jordan_holder_basis(g).map_err(e)?;
        let m = flag.complement().len();
        for _ in 0..500 {
            let (x, y, z) = (random_vec(&mut rng, n), random_vec(&mut rng, n), random_vec(&mut rng, n));
            let left = bch(g, &bch(g, &x, &y).map_err(e)?, &z).map_err(e)?;
            let right = bch(g, &x, &bch(g, &y, &z).map_err(e)?).map_err(e)?;
            ensure(left == right, || format!("{}: BCH not associative", g.name()))?;
            let (x, y, z) = (&x[..m], &y[..m], &z[..m]);
            let xy = quotient_product(g, &flag, x, y).map_err(e)?;
            let yz = quotient_product(g, &flag, y, z).map_err(e)?;
            let lhs = rational::add(&central_cocycle(g, &flag, x, y).map_err(e)?, &central_cocycle(g, &flag, &xy, z).map_err(e)?);
            let rhs = rational::add(&central_cocycle(g, &flag, x, &yz).map_err(e)?, &central_cocycle(g, &flag, y, z).map_err(e)?);
            ensure(lhs == rhs, || format!("{}: cocycle identity fails", g.name()))?;
        }
    }
    Ok(format!("500 triples on each of {} algebras", members.len()))
}

/// `nilcalc corpus-regression` passes and reruns are byte-identical.
fn criterion_10() -> Outcome {
    let run = |threads: Option<&str>| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nilcalc"));
        cmd.arg("corpus-regression");
        if let Some(t) = threads {
            cmd.env("NILCALC_THREADS", t);
        }
        let out = cmd.output().map_err(e)?;
        ensure(out.status.success(), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
        Ok(out.stdout)
    };
    let a = run(None)?;
    let b = run(None)?;
    let c = run(Some("1"))?;
    ensure(a == b && a == c, || "reports differ between runs".into())?;
    let report: serde_json::Value = serde_json::from_slice(&a).map_err(e)?;
    Ok(format!("{} expectations passed, 3 identical runs", report["results"]["passed"]))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("flat-orbit corpus", criterion_1, Duration::from_secs(8)),
        ("Vergne polarization suite", criterion_2, Duration::from_secs(10)),
        ("Maslov/eta cocycle", criterion_3, Duration::from_secs(30)),
        ("oscillator spectrum", criterion_4, Duration::from_secs(5)),
        ("Fock-layer calibration", criterion_5, Duration::from_secs(60)),
        ("H-ellipticity oracle agreement", criterion_6, Duration::from_secs(120)),
        ("Dirac failure reproduction", criterion_7, Duration::from_secs(5)),
        ("Engel criterion", criterion_8, Duration::from_secs(1)),
        ("BCH/cocycle exactness", criterion_9, Duration::from_secs(30)),
        ("determinism and regression", criterion_10, Duration::from_secs(300)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {:.0?} budget", budget)),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {status} {name} [{:.2?}]: {detail}", i + 1, took);
    }
    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        std::process::exit(1);
    }
}

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{jet_json, run, run_env, s, write};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rounding_core::circles::{circle_rank_exact, restrict_to_line, verify_rounding_numeric, PolyFraction};
use rounding_core::cliff::{hopf_map, kappa, normed_pairing, rho, stiefel_hopf_feasible};
use rounding_core::jets::{
    canonical_rounding, is_degenerate, jets_equivalent, normalize_p, validate_jet, Jet2, RoundingJet,
};
use rounding_core::polycore::{frac, int};
use rounding_core::samples::{self, random_lambda, random_line, random_linear, random_valid_jet, JetShape};
use rounding_core::spheres::sphere_lift;
use rounding_core::{inner_poly, Error, Poly, PolyMap, QuadForm, Rational};
use serde_json::json;

type Outcome = Result<String, String>;

fn suite() -> Vec<RoundingJet> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|_| validate_jet(&random_valid_jet(&mut rng, JetShape::default())).expect("generator yields valid jets"))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn canonical_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let jet = random_valid_jet(&mut rng, JetShape::default());
        ensure(jet.source_dim() <= 6 && jet.target_dim() <= 6, || format!("jet {i} too large"))?;
        let rj = validate_jet(&jet).map_err(|e| format!("jet {i}: {e}"))?;
        ensure(rj.rank() >= 2, || format!("jet {i}: rank {}", rj.rank()))?;
        let phi = canonical_rounding(&rj);
        let ff = inner_poly(phi.numerator(), phi.numerator()).unwrap();
        let aa = inner_poly(jet.linear(), jet.linear()).unwrap();
        let q = &(&Poly::one(jet.source_dim()) - &rj.p().scale(&int(2))) + rj.q();
        ensure((&ff - &(&q * &aa)).is_zero(), || format!("jet {i}: identity fails"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("200 jets in {:.2}s", elapsed.as_secs_f64()))
}

fn lines_exact(suite: &[RoundingJet]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut vanishing) = (0, 0);
    for (i, rj) in suite.iter().enumerate() {
        let phi = canonical_rounding(rj);
        for k in 0..20 {
            let line = random_line(&mut rng, rj.source_dim(), k % 2 == 0);
            match restrict_to_line(&phi, &line) {
                Ok(curve) => {
                    let r = circle_rank_exact(&curve);
                    ensure(r.rank <= 3 && r.in_circle, || format!("jet {i} line {k}: rank {}", r.rank))?;
                    checked += 1;
                }
                Err(Error::DenominatorVanishesIdentically) => vanishing += 1,
                Err(e) => return Err(format!("jet {i} line {k}: {e}")),
            }
        }
    }
    Ok(format!("{checked} lines, rank <= 3 on all ({vanishing} with Q on the line identically 0)"))
}

fn numeric_oracle() -> Outcome {
    let mobius = canonical_rounding(&validate_jet(&samples::complex_square_jet()).unwrap());
    let quat = canonical_rounding(&validate_jet(&samples::quaternion_jet()).unwrap());
    let rm = verify_rounding_numeric(&mobius, 100, 0, 1e-7);
    let rq = verify_rounding_numeric(&quat, 100, 0, 1e-7);
    ensure(rm.passed(), || format!("mobius: {} violations", rm.violations.len()))?;
    ensure(rq.passed(), || format!("quaternion: {} violations", rq.violations.len()))?;

    let mut nums = PolyFraction::from(&mobius).numerators().to_vec();
    nums[0] = &nums[0] + &Poly::var(2, 0).pow(3).scale(&frac(1, 100));
    let perturbed = PolyFraction::new(nums, mobius.denominator().clone()).unwrap();
    let rp = verify_rounding_numeric(&perturbed, 100, 0, 1e-7);
    ensure(!rp.passed(), || "cubic control produced no violation".into())?;
    Ok(format!(
        "max residual mobius {:.1e}, quaternion {:.1e}; control {} violations",
        rm.max_residual,
        rq.max_residual,
        rp.violations.len()
    ))
}

/// `(a + bi)(c + di)` with rational parts.
fn cmul(a: &(Rational, Rational), b: &(Rational, Rational)) -> (Rational, Rational) {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn qmul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mobius = canonical_rounding(&validate_jet(&samples::complex_square_jet()).unwrap());
    let mut exact = 0;
    while exact < 100 {
        let z = (frac(rng.random_range(-9..=9), rng.random_range(1..=7)), frac(rng.random_range(-9..=9), rng.random_range(1..=7)));
        let one_minus = (&int(1) - &z.0, -z.1.clone());
        let norm = &one_minus.0 * &one_minus.0 + &one_minus.1 * &one_minus.1;
        if norm == int(0) {
            continue;
        }
        let inv = (&one_minus.0 / &norm, -&one_minus.1 / &norm);
        let expected = cmul(&z, &inv);
        let got = mobius.eval(&[z.0.clone(), z.1.clone()]).ok_or("mobius undefined")?;
        ensure(got == vec![expected.0.clone(), expected.1.clone()], || format!("z/(1-z) differs at {z:?}"))?;
        exact += 1;
    }

    let quat = canonical_rounding(&validate_jet(&samples::quaternion_jet()).unwrap());
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let y: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let one_plus = [1.0, x[0], x[1], x[2]];
        let n2: f64 = one_plus.iter().map(|v| v * v).sum();
        let inv = [1.0 / n2, -x[0] / n2, -x[1] / n2, -x[2] / n2];
        let expected = qmul(inv, y);
        let point: Vec<f64> = x.iter().chain(&y).copied().collect();
        let got = quat.eval_f64(&point).ok_or("quaternion map undefined")?;
        for (g, e) in got.iter().zip(&expected) {
            worst = worst.max((g - e).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("quaternion max error {worst:e}"))?;
    Ok(format!("100 exact rational points; quaternion max error {worst:.1e}"))
}

fn equivalence_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let rj = validate_jet(&random_valid_jet(&mut rng, JetShape::default())).unwrap();
        let lambda = random_lambda(&mut rng);
        let l = random_linear(&mut rng, rj.source_dim());
        let other = validate_jet(&rj.jet().transform(&lambda, &l).unwrap()).map_err(|e| format!("jet {i}: {e}"))?;
        let w = jets_equivalent(&rj, &other).ok_or_else(|| format!("jet {i}: no witness"))?;
        ensure(w.lambda == lambda && w.l == l, || format!("jet {i}: wrong witness"))?;
        ensure(rj.jet().transform(&w.lambda, &w.l).unwrap() == *other.jet(), || format!("jet {i}: witness does not reproduce"))?;
        let back = jets_equivalent(&other, &rj).ok_or_else(|| format!("jet {i}: not symmetric"))?;
        ensure(back == w.inverse(), || format!("jet {i}: inverse witness"))?;
        ensure(
            is_degenerate(&rj).degenerate == is_degenerate(&other).degenerate,
            || format!("jet {i}: degeneracy verdicts differ"),
        )?;
        let n1 = normalize_p(&rj);
        ensure(n1.p().is_zero() && normalize_p(&n1) == n1, || format!("jet {i}: normalize_p not idempotent"))?;
    }
    Ok("100 transformed pairs".into())
}

fn sphere_lifts(suite: &[RoundingJet]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut lifted, mut rejected, mut worst) = (0, 0, 0.0f64);
    for (i, rj) in suite.iter().enumerate() {
        let m = rj.source_dim();
        let degenerate = is_degenerate(rj).degenerate;
        match sphere_lift(rj) {
            Ok(sm) => {
                ensure(!degenerate, || format!("jet {i}: degenerate jet lifted"))?;
                let ff = inner_poly(sm.map(), sm.map()).unwrap();
                let g = sm.metric().to_poly();
                ensure((&ff - &(&g * &g)).is_zero(), || format!("jet {i}: <f,f> != G^2"))?;
                let sig = sm.signature();
                ensure((sig.positive, sig.negative, sig.zero) == (m + 1, 0, 0), || format!("jet {i}: signature {sig}"))?;
                let phi = canonical_rounding(rj);
                let mut points = 0;
                while points < 50 {
                    let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
                    if phi.denominator().eval_f64(&x).abs() < 1e-3 {
                        continue;
                    }
                    let expected = phi.eval_f64(&x).unwrap();
                    let got = sm.evaluate_factored(&x).map_err(|e| format!("jet {i}: {e}"))?;
                    let scale = expected.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                    for (g, e) in got.iter().zip(&expected) {
                        worst = worst.max((g - e).abs() / scale);
                    }
                    points += 1;
                }
                lifted += 1;
            }
            Err(Error::Degenerate { witness, .. }) => {
                ensure(degenerate, || format!("jet {i}: nondegenerate jet rejected"))?;
                let w = witness.ok_or_else(|| format!("jet {i}: no singular-G witness"))?;
                ensure(w.iter().any(|v| *v != int(0)), || format!("jet {i}: zero witness"))?;
                // G(x, t) = t^2 - 2 p(x) t + q(x) + <Ax, Ax> built independently
                let lift = |poly: &Poly| poly.substitute(&(0..m).map(|j| Poly::var(m + 1, j)).collect::<Vec<_>>());
                let t = Poly::var(m + 1, m);
                let aa = inner_poly(rj.jet().linear(), rj.jet().linear()).unwrap();
                let g = &(&(&(&t * &t) - &(&lift(rj.p()) * &t).scale(&int(2))) + &lift(rj.q())) + &lift(&aa);
                let gw: Vec<Rational> = QuadForm::from_poly(&g)
                    .unwrap()
                    .matrix()
                    .iter()
                    .map(|row| row.iter().zip(&w).map(|(c, v)| c * v).sum())
                    .collect();
                ensure(gw.iter().all(|v| *v == int(0)), || format!("jet {i}: witness not in ker G"))?;
                rejected += 1;
            }
            Err(e) => return Err(format!("jet {i}: {e}")),
        }
    }
    ensure(worst <= 1e-9, || format!("chart error {worst:e}"))?;
    Ok(format!("{lifted} lifted (chart error {worst:.1e}), {rejected} degenerate rejected"))
}

fn rho_formula(n: u64) -> u64 {
    let mut s = 0;
    let mut v = n;
    while v % 2 == 0 {
        v /= 2;
        s += 1;
    }
    8 * (s / 4) + (1 << (s % 4))
}

fn kappa_recursive(m: usize) -> usize {
    if m == 1 {
        return 1;
    }
    let p = 1usize << (usize::BITS - 1 - m.leading_zeros());
    let rest = m - p;
    if rest == 0 || (rest as u64) < rho_formula(p as u64) {
        p
    } else {
        p + kappa_recursive(rest)
    }
}

fn tables() -> Outcome {
    for n in 1..=64u64 {
        ensure(rho(n) == rho_formula(n), || format!("rho({n}) = {}, expected {}", rho(n), rho_formula(n)))?;
    }
    for m in 1..=256usize {
        let k = kappa(m).map_err(|e| e.to_string())?;
        ensure(k == kappa_recursive(m), || format!("kappa({m}) = {k}, expected {}", kappa_recursive(m)))?;
    }
    ensure(rho(16) == 9, || "rho(16)".into())?;
    ensure(kappa(9) == Ok(8), || "kappa(9)".into())?;
    let k25 = kappa(25).map_err(|e| e.to_string())?;
    ensure(k25 == 24, || format!("kappa(25) = {k25}"))?;
    Ok("rho 1..64, kappa 1..256, rho(16)=9, kappa(9)=8, kappa(25)=24".into())
}

fn pairings() -> Outcome {
    let mut count = 0;
    for n in [1usize, 2, 4, 8, 16] {
        for r in 1..=rho(n as u64) as usize {
            let f = normed_pairing(r, n).map_err(|e| format!("[{r},{n},{n}]: {e}"))?;
            let (xx, yy) = f.factor_norms();
            let map = f.to_map();
            ensure(inner_poly(&map, &map).unwrap() == &xx * &yy, || format!("[{r},{n},{n}]: norm identity"))?;
            let h = hopf_map(&f);
            let hh = inner_poly(h.map(), h.map()).unwrap();
            let sum = &xx + &yy;
            ensure(hh == &sum * &sum, || format!("[{r},{n},{n}]: Hopf identity"))?;
            let sh = stiefel_hopf_feasible(r, n, n).map_err(|e| e.to_string())?;
            ensure(sh.no_obstruction, || format!("[{r},{n},{n}]: Stiefel-Hopf rejects"))?;
            count += 1;
        }
    }
    let bad = stiefel_hopf_feasible(3, 5, 6).map_err(|e| e.to_string())?;
    ensure(!bad.no_obstruction && bad.odd_binomials == vec![4], || format!("[3,5,6]: {bad:?}"))?;
    Ok(format!("{count} pairings; [3,5,6] rejected at k=4"))
}

fn cli_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let cs = write(d, "cs.json", &jet_json(&samples::complex_square_jet()));

    let r = run(&["check", s(&cs)]);
    let v = r.json();
    ensure(r.code == 0, || format!("complex square: exit {}", r.code))?;
    ensure(
        v["verdicts"]["valid"] == true
            && v["verdicts"]["degenerate"] == false
            && v["witnesses"]["p"]["text"] == "x1"
            && v["witnesses"]["q"]["coefficients"]["quadratic"] == json!([["1", "0"], ["0", "1"]]),
        || format!("complex square report: {v}"),
    )?;

    let b0 = Jet2::new(PolyMap::identity(2), PolyMap::zero(2, 2)).unwrap();
    let r = run(&["check", s(&write(d, "b0.json", &jet_json(&b0)))]);
    ensure(
        r.code == 0 && r.json()["witnesses"]["p"]["text"] == "0" && r.json()["witnesses"]["q"]["text"] == "0",
        || format!("B=0: exit {} {}", r.code, r.stdout),
    )?;

    let x = Poly::var(2, 0);
    let rank1 = Jet2::new(PolyMap::new(2, vec![x.clone(), x]).unwrap(), PolyMap::zero(2, 2)).unwrap();
    let r = run(&["check", s(&write(d, "r1.json", &jet_json(&rank1)))]);
    ensure(
        r.code == 2 && r.json()["verdicts"]["reason"] == "RankTooLow",
        || format!("rank 1: exit {} {}", r.code, r.stdout),
    )?;

    let missing = run(&["check", s(&d.join("absent.json"))]);
    ensure(missing.code == 1, || format!("missing file: exit {}", missing.code))?;

    // round-trip through the canonical document, for several jets
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut jets = vec![samples::complex_square_jet(), samples::quaternion_jet()];
    jets.extend((0..4).map(|_| random_valid_jet(&mut rng, JetShape::default())));
    for (i, jet) in jets.iter().enumerate() {
        let input = write(d, &format!("j{i}.json"), &jet_json(jet));
        let out = d.join(format!("c{i}.json"));
        let c = run(&["canon", s(&input), "--out", s(&out)]);
        ensure(c.code == 0, || format!("canon {i}: exit {}", c.code))?;
        let original = run(&["check", s(&input)]).json();
        let back = run(&["check", s(&out)]).json();
        ensure(
            original["witnesses"]["p"] == back["witnesses"]["p"] && original["witnesses"]["q"] == back["witnesses"]["q"],
            || format!("round-trip {i}: p, q differ"),
        )?;
        let again = d.join(format!("cc{i}.json"));
        run(&["canon", s(&out), "--out", s(&again)]);
        ensure(
            std::fs::read(&out).unwrap() == std::fs::read(&again).unwrap(),
            || format!("round-trip {i}: canonical document not a fixed point"),
        )?;
    }

    // determinism
    let args = ["canon", s(&cs), "--verify", "--trials", "40", "--seed", "11"];
    let first = run(&args);
    let second = run(&args);
    let env = run_env(&["canon", s(&cs), "--verify", "--trials", "40"], &[("ROUNDING_FORGE_SEED", "11")]);
    ensure(first.stdout == second.stdout, || "reports differ between identical runs".into())?;
    ensure(first.stdout == env.stdout, || "seed from the environment differs from --seed".into())?;
    Ok(format!("3 check examples, {} round-trips, byte-identical reruns", jets.len()))
}

fn main() -> ExitCode {
    let suite = suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("canonical construction identity", Box::new(canonical_identity)),
        ("lines to circles, exact rank", Box::new(|| lines_exact(&suite))),
        ("lines to circles, numeric oracle", Box::new(numeric_oracle)),
        ("worked closed forms", Box::new(closed_forms)),
        ("equivalence laws", Box::new(equivalence_laws)),
        ("sphere lift", Box::new(|| sphere_lifts(&suite))),
        ("rho and kappa tables", Box::new(tables)),
        ("normed pairings and Hopf maps", Box::new(pairings)),
        ("CLI contract", Box::new(cli_contract)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use cournot_core::dynamics::{
    build_jacobian, characteristic_product, classify_stability, eigenvalues_closed_form, stability_interval,
    StabilityClass, NEUTRALITY_TOLERANCE,
};
use cournot_core::model::{
    nash_duopoly_closed_form, nash_linear_solve, BaselineConfig, GameConfig, IterateMode, StateVector, Trajectory,
};
use cournot_core::numerics::{symmetric_eigenvalues, DEFAULT_EIGEN_TOLERANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REF_A: [f64; 3] = [200.0, 150.0, 100.0];
const REF_C: [f64; 2] = [20.0, 40.0];

fn reference(d: f64) -> GameConfig {
    GameConfig::new(REF_A.to_vec(), REF_C.to_vec(), d).unwrap()
}

/// Collects failed sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

fn criterion_1(c: &mut Checks) {
    let intercepts = [200.0, 150.0, 100.0, 120.0, 180.0];
    let mut compared = 0;
    for m in [1usize, 2, 3, 5] {
        for d in [-0.1, 0.0, 0.1, 0.2, 0.4] {
            let md = 2.0 * m as f64 * d;
            if (md + 1.0).abs() <= 1e-12 || (md + 3.0).abs() <= 1e-12 {
                continue;
            }
            let g = GameConfig::new(intercepts[..m].to_vec(), REF_C.to_vec(), d).unwrap();
            let closed = nash_duopoly_closed_form(&g).unwrap();
            let solved = nash_linear_solve(&g).unwrap();
            let rel = closed.relative_diff(&solved);
            c.check(rel <= 1e-9, || format!("M={m} d={d}: relative gap {rel:e}"));
            compared += 1;
        }
    }
    let q = nash_duopoly_closed_form(&reference(0.0)).unwrap();
    for (j, want) in [200.0 / 3.0, 50.0, 100.0 / 3.0].into_iter().enumerate() {
        let got = q.get(0, j);
        c.check((got - want).abs() <= 1e-12, || format!("d=0 firm 1 market {}: {got} != {want}", j + 1));
    }
    c.note(format!("{compared} (M, d) pairs"));
}

fn criterion_2(c: &mut Checks) {
    let intercepts: Vec<f64> = (0..8).map(|j| 200.0 - 10.0 * j as f64).collect();
    let mut worst: f64 = 0.0;
    for m in [1usize, 2, 3, 5, 8] {
        for d in [-0.2, 0.0, 0.2, 0.5, 0.55] {
            let g = GameConfig::new(intercepts[..m].to_vec(), REF_C.to_vec(), d).unwrap();
            let numeric =
                symmetric_eigenvalues(&build_jacobian(&g).unwrap(), DEFAULT_EIGEN_TOLERANCE).unwrap().eigenvalues;
            let closed = eigenvalues_closed_form(m, d).unwrap();
            c.check(numeric.len() == closed.len(), || format!("m={m} d={d}: size mismatch"));
            for (x, y) in numeric.iter().zip(&closed) {
                worst = worst.max((x - y).abs());
                c.check((x - y).abs() <= 1e-9, || format!("m={m} d={d}: {x} vs {y}"));
            }
            for &l in &closed {
                let p = characteristic_product(m, d, l);
                c.check(p.abs() <= 1e-9, || format!("m={m} d={d}: residual {p:e} at {l}"));
            }
        }
    }
    c.note(format!("max eigenvalue gap {worst:e}"));
}

/// Shrinks `[stable, other]` until it is narrower than `1e-10`.
fn bisect(m: usize, mut stable: f64, mut other: f64) -> f64 {
    let intercepts: Vec<f64> = (0..m).map(|j| 200.0 - 10.0 * j as f64).collect();
    let is_stable = |d: f64| {
        let g = GameConfig::new(intercepts.clone(), REF_C.to_vec(), d).unwrap();
        classify_stability(&g, NEUTRALITY_TOLERANCE).unwrap().stability == StabilityClass::Stable
    };
    assert!(is_stable(stable) && !is_stable(other));
    while (other - stable).abs() > 1e-10 {
        let mid = 0.5 * (stable + other);
        if is_stable(mid) {
            stable = mid;
        } else {
            other = mid;
        }
    }
    0.5 * (stable + other)
}

fn criterion_3(c: &mut Checks) {
    let lower = bisect(3, 0.2, -0.3);
    let upper = bisect(3, 0.2, 1.0);
    c.check((lower + 1.0 / 6.0).abs() <= 1e-6, || format!("lower edge at {lower}"));
    c.check((upper - 0.5).abs() <= 1e-6, || format!("upper edge at {upper}"));
    let two = stability_interval(2).unwrap();
    c.check(two.d_lower == -0.25 && two.d_upper == f64::INFINITY, || format!("m=2 interval {two:?}"));
    c.note(format!("edges {lower:.9}, {upper:.9}"));
}

fn tail_gap(t: &Trajectory, lag: usize) -> f64 {
    let n = t.states.len();
    t.states[n - 1].max_abs_diff(&t.states[n - 1 - lag])
}

fn criterion_4(c: &mut Checks) {
    for d in [-0.1, 0.0, 0.2] {
        let g = reference(d);
        let nash = nash_linear_solve(&g).unwrap();
        let t = g.simulate(&g.default_initial_state(), 200, IterateMode::Raw).unwrap();
        let gap = t.final_state().max_abs_diff(&nash);
        c.check(t.converges_to(&nash, 1e-6), || format!("d={d}: raw gap to equilibrium {gap:e} at step 200"));
    }

    // The default start at d = 1/2 has the equilibrium's total output and so
    // does not excite the λ = −1 mode; perturb q_1^1 by one unit.
    let g = reference(0.5);
    let nash = nash_linear_solve(&g).unwrap();
    let mut init = g.default_initial_state();
    init.set(0, 0, init.get(0, 0) + 1.0);
    let t = g.simulate(&init, 1000, IterateMode::Raw).unwrap();
    let (period2, flip) = (tail_gap(&t, 2), tail_gap(&t, 1));
    c.check(!t.is_divergent() && t.final_state().max_abs() < 1e3, || "d=0.5: orbit unbounded".into());
    c.check(period2 <= 1e-6, || format!("d=0.5: |q(T) - q(T-2)| = {period2:e}"));
    c.check(flip > 1e-6, || format!("d=0.5: tail constant ({flip:e})"));
    c.check(!t.converges_to(&nash, 1e-6), || "d=0.5: converged".into());
    c.note(format!("d=0.5 tail swing {flip:.4}"));

    for d in [-0.2, 0.55] {
        let g = reference(d);
        let nash = nash_linear_solve(&g).unwrap();
        let init = g.default_initial_state();
        let raw = g.simulate(&init, 200, IterateMode::Raw).unwrap();
        let dist = |k: usize| raw.states[k].max_abs_diff(&nash);
        let (d50, d100, d200) = (dist(50), dist(100), dist(200));
        c.check(d50 < d100 && d100 < d200 && !raw.converges_to(&nash, 1e-6), || {
            format!("d={d}: raw distance to equilibrium {d50:e}, {d100:e}, {d200:e} at steps 50/100/200")
        });

        let clipped = g.simulate(&init, 2000, IterateMode::Clipped).unwrap();
        let bound = clipped.states.iter().map(StateVector::max_abs).fold(0.0, f64::max);
        c.check(!clipped.is_divergent() && bound < 1e3, || format!("d={d}: clipped orbit reaches {bound}"));
        let off = clipped.final_state().max_abs_diff(&nash);
        c.check(off > 1e-6, || format!("d={d}: clipped orbit converged to the equilibrium"));
        c.note(format!("d={d} raw growth x{:.3e}, clipped max {bound:.1}, off-equilibrium {off:.2}", d200 / d50));
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
}

fn criterion_5(c: &mut Checks) {
    const STEPS: usize = 1000;
    let (lo, hi) = (-1.0 / 6.0, 0.5);
    let mut outside = 0;
    for d in linspace(-0.17, 0.52, 50) {
        let g = reference(d);
        let init = g.default_initial_state();
        for (j, &a) in REF_A.iter().enumerate() {
            let base = BaselineConfig::new(a, REF_C.to_vec(), d).unwrap();
            let target = base.fisher_equilibrium().unwrap().quantities;
            let t = base.fisher_trajectory(&init.market_slice(j), STEPS).unwrap();
            let ok =
                !t.is_divergent() && t.final_state().as_slice().iter().zip(&target).all(|(q, e)| (q - e).abs() <= 1e-6);
            c.check(ok, || format!("d={d}: baseline market {} did not converge", j + 1));
        }
        if d < lo || d > hi {
            outside += 1;
            let retail = g.simulate(&init, STEPS, IterateMode::Raw).unwrap();
            let converged = match nash_linear_solve(&g) {
                Ok(nash) => retail.converges_to(&nash, 1e-6),
                Err(_) => false,
            };
            c.check(!converged, || format!("d={d}: coupled model converged"));
        }
    }
    c.note(format!("{outside} grid points outside the stability interval"));
}

fn random_game(rng: &mut ChaCha8Rng) -> GameConfig {
    let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let a = (0..m).map(|_| rng.gen_range(60.0..300.0)).collect();
    let c = (0..n).map(|_| rng.gen_range(1.0..50.0)).collect();
    GameConfig::new(a, c, rng.gen_range(-0.09..0.6)).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, firms: usize, markets: usize) -> StateVector {
    StateVector::from_vec(firms, markets, (0..firms * markets).map(|_| rng.gen_range(0.0..120.0)).collect()).unwrap()
}

fn criterion_6(c: &mut Checks) {
    const CASES: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_edc0_u64);
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for _ in 0..CASES {
        let g = random_game(&mut rng);
        let (n, m) = (g.firms(), g.markets());
        let init = random_state(&mut rng, n, m);
        let q = nash_linear_solve(&g).unwrap();

        let next = g.step(&q, IterateMode::Raw).unwrap();
        c.check(next.relative_diff(&q) <= 1e-10, || format!("fixed point: {:e}", next.relative_diff(&q)));
        *counts.entry("fixed-point").or_default() += 1;

        for i in 0..n {
            let own = q.firm_slice(i);
            let total: f64 = own.iter().sum();
            let identity = own.iter().map(|v| v * v).sum::<f64>() + g.scale() * total * total;
            let profit = g.profit(&q, i).unwrap();
            c.check((profit - identity).abs() <= 1e-9 * identity.abs().max(1.0), || {
                format!("profit identity: {profit} vs {identity}")
            });
        }
        *counts.entry("profit-identity").or_default() += 1;

        let g0 = g.with_scale(0.0).unwrap();
        let t0 = g0.simulate(&init, 50, IterateMode::Raw).unwrap();
        for j in 0..m {
            let base = BaselineConfig::theocharis(g.intercepts()[j], g.costs().to_vec()).unwrap();
            let tb = base.fisher_trajectory(&init.market_slice(j), 50).unwrap();
            let same = tb.states.len() == t0.states.len()
                && t0.states.iter().zip(&tb.states).all(|(s, b)| s.market_slice(j) == b.as_slice());
            c.check(same, || format!("d=0 decoupling differs in market {}", j + 1));
        }
        *counts.entry("theocharis-decoupling").or_default() += 1;

        let g1 = GameConfig::new(vec![g.intercepts()[0]], g.costs().to_vec(), g.scale()).unwrap();
        let init1 = StateVector::from_vec(n, 1, init.market_slice(0)).unwrap();
        let t1 = g1.simulate(&init1, 100, IterateMode::Raw).unwrap();
        let f1 = BaselineConfig::new(g.intercepts()[0], g.costs().to_vec(), g.scale())
            .unwrap()
            .fisher_trajectory(init1.as_slice(), 100)
            .unwrap();
        c.check(t1.states == f1.states, || "single market differs from the baseline".into());
        *counts.entry("fisher-reduction").or_default() += 1;

        let mut perm: Vec<usize> = (0..m).collect();
        for k in (1..m).rev() {
            perm.swap(k, rng.gen_range(0..=k));
        }
        let gp = g.permute_markets(&perm).unwrap();
        let qp = nash_linear_solve(&gp).unwrap();
        let expect = q.permute_markets(&perm).unwrap();
        c.check(qp.relative_diff(&expect) <= 1e-10, || {
            format!("permuted equilibrium: {:e}", qp.relative_diff(&expect))
        });
        for mode in [IterateMode::Raw, IterateMode::Clipped] {
            let t = g.simulate(&init, 40, mode).unwrap();
            let tp = gp.simulate(&init.permute_markets(&perm).unwrap(), 40, mode).unwrap();
            let ok = t.states.len() == tp.states.len()
                && t.states.iter().zip(&tp.states).all(|(s, sp)| {
                    let e = s.permute_markets(&perm).unwrap();
                    sp.max_abs_diff(&e) <= 1e-9 * e.max_abs().max(1.0)
                });
            c.check(ok, || format!("{mode} orbit not equivariant under {perm:?}"));
        }
        *counts.entry("permutation-equivariance").or_default() += 1;

        let j = build_jacobian(&g).unwrap();
        c.check(j.transpose() == j, || "Jacobian not symmetric".into());
        *counts.entry("jacobian-symmetry").or_default() += 1;

        let gc = g.with_scale(rng.gen_range(-0.4..1.5)).unwrap();
        let tc = gc.simulate(&init, 150, IterateMode::Clipped).unwrap();
        c.check(tc.states.iter().all(StateVector::is_nonnegative), || {
            format!("clipped orbit negative at d={}", gc.scale())
        });
        *counts.entry("clipped-nonnegativity").or_default() += 1;
    }
    c.note(counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "));
}

/// `d` label -> (cell divergent?, per-coordinate (min, max)).
type Spreads = BTreeMap<String, (bool, BTreeMap<(String, String), (f64, f64)>)>;

fn spreads(csv: &str) -> Spreads {
    let mut out = Spreads::new();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let cell = out.entry(f[0].to_owned()).or_default();
        if f[3] == "divergent" {
            cell.0 = true;
            continue;
        }
        let q: f64 = f[3].parse().unwrap();
        let e = cell.1.entry((f[1].to_owned(), f[2].to_owned())).or_insert((q, q));
        e.0 = e.0.min(q);
        e.1 = e.1.max(q);
    }
    out
}

fn criterion_7(c: &mut Checks) {
    let dir = tempfile::tempdir().unwrap();
    let scenario = common::reference_scenario(dir.path(), 0.2);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let r = common::cournot(&[
            "bifurcate",
            "--scenario",
            scenario.to_str().unwrap(),
            "--d-lo",
            "-0.17",
            "--d-hi",
            "0.52",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        fs::read(out.join("bifurcation.csv")).unwrap()
    };
    let first = run("first");
    let second = run("second");
    c.check(first == second, || "bifurcation.csv differs between runs".into());

    let cells = spreads(std::str::from_utf8(&first).unwrap());
    c.check(cells.len() == 1000, || format!("{} grid points", cells.len()));
    let interval = stability_interval(3).unwrap();
    let (mut inside, mut wide, mut worst, mut worst_d) = (0, 0, 0.0_f64, String::new());
    for (d, (divergent, coords)) in &cells {
        let dv: f64 = d.parse().unwrap();
        if !interval.contains(dv) {
            continue;
        }
        inside += 1;
        let spread = coords.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max);
        if *divergent || spread > 1e-6 {
            wide += 1;
        }
        if spread > worst {
            worst = spread;
            worst_d = d.clone();
        }
    }
    c.check(wide == 0, || {
        format!("{wide} of {inside} grid points inside the interval have spread > 1e-6 (max {worst:e} at d={worst_d})")
    });

    let end = cells.get("0.52").map(|(_, coords)| coords.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max));
    c.check(end.is_some_and(|s| s > 1e-3), || format!("spread at d=0.52 is {end:?}"));
    c.note(format!("{} bytes, spread at 0.52 = {:.4}", first.len(), end.unwrap_or(f64::NAN)));
}

type Criterion = (&'static str, fn(&mut Checks));

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("equilibrium cross-validation", criterion_1),
        ("spectrum cross-validation", criterion_2),
        ("stability region edges", criterion_3),
        ("trajectory behaviour at reference parameters", criterion_4),
        ("baseline contrast", criterion_5),
        ("property suite", criterion_6),
        ("bifurcation reproducibility and bands", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let mut checks = Checks::default();
        let start = Instant::now();
        run(&mut checks);
        let status = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} {name} ({:.1}s; {})",
            k + 1,
            start.elapsed().as_secs_f64(),
            checks.notes.join("; ")
        );
        for f in checks.failures.iter().take(5) {
            println!("    {f}");
        }
        if checks.failures.len() > 5 {
            println!("    ... {} more", checks.failures.len() - 5);
        }
        failed += usize::from(!checks.failures.is_empty());
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

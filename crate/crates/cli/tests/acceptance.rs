//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails. Pass criterion ids (e.g. `c3 c6`)
//! as arguments to run a subset.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use maedm::instance::brute_force_optimum;
use maedm::local_search::{insertion_delta_profile, insertion_delta_scan, local_search};
use maedm::permutation::check_bijection;
use maedm::replacement::{bnp_select, bnp_select_with, DciUpdate, DiversitySchedule};
use maedm::variation::{cycle_crossover, order_crossover, sample_half_positions};
use maedm::{run, Budget, EngineConfig, Individual, Instance, Permutation, Replacement, RunTelemetry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn uniform_instance(rng: &mut impl Rng, n: usize) -> Instance {
    let w = (0..n * n).map(|_| rng.gen_range(0..=99)).collect();
    Instance::new("", n, w).unwrap()
}

fn moved(perm: &[usize], from: usize, to: usize) -> Permutation {
    let mut p = perm.to_vec();
    let v = p.remove(from);
    p.insert(to, v);
    Permutation::new(p).unwrap()
}

// ~200 generations at N = 50 on n in 7..=9 (about 100 units per generation).
const C1_BUDGET: u64 = 20_000;

fn c1_oracle_optimality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut matched = 0;
    let mut generations = 0;
    for k in 0..100u64 {
        let n = [7, 8, 9][k as usize % 3];
        let inst = uniform_instance(&mut rng, n);
        let (_, optimum) = brute_force_optimum(&inst).unwrap();
        let mut cfg = EngineConfig::new(Budget::Evaluations(C1_BUDGET));
        cfg.population_size = 50;
        cfg.seed = k;
        let t = run(&inst, &cfg).unwrap();
        generations += t.generations;
        if t.best.obj() == optimum {
            matched += 1;
        }
    }
    verdict(
        matched >= 99,
        format!("{matched}/100 optima matched (mean {} generations)", generations / 100),
    )
}

fn c2_local_optimality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut certified = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=60);
        let inst = uniform_instance(&mut rng, n);
        let start = inst.evaluate(Permutation::random(n, &mut rng));
        let mut search_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let (out, _) = local_search(&inst, start, &mut search_rng);
        let p = out.perm().as_slice();
        let improving = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && inst.objective(&moved(p, i, j)) > out.obj())
            .count();
        if improving == 0 && out.obj() == inst.objective(out.perm()) {
            certified += 1;
        }
    }
    verdict(certified == 1000, format!("{certified}/1000 outputs insert-locally optimal"))
}

fn c3_delta_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut exact = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=50);
        let inst = uniform_instance(&mut rng, n);
        let perm = Permutation::random(n, &mut rng);
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let p = perm.as_slice();
        let before = inst.objective(&perm);
        let profile = insertion_delta_profile(&inst, p, i);
        let best = insertion_delta_scan(&inst, p, i);
        let move_ok = profile[j] == inst.objective(&moved(p, i, j)) - before;
        let best_ok = best.delta == inst.objective(&moved(p, i, best.target_index)) - before
            && best.delta == *profile.iter().max().unwrap();
        if move_ok && best_ok {
            exact += 1;
        }
    }
    verdict(exact == 10_000, format!("{exact}/10000 deltas exact"))
}

fn c4_crossover_laws() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let pairs = 100_000;
    let mut cx_ok = 0;
    for _ in 0..pairs {
        let p1 = Permutation::random(50, &mut rng);
        let p2 = Permutation::random(50, &mut rng);
        let (c1, c2) = cycle_crossover(&p1, &p2, &mut rng);
        let valid = check_bijection(c1.as_slice()).is_ok() && check_bijection(c2.as_slice()).is_ok();
        let inherit = (0..50).all(|i| {
            let (a, b) = (p1.as_slice()[i], p2.as_slice()[i]);
            let (x, y) = (c1.as_slice()[i], c2.as_slice()[i]);
            (x == a && y == b) || (x == b && y == a)
        });
        if valid && inherit {
            cx_ok += 1;
        }
    }

    let mut ob_ok = 0;
    for _ in 0..pairs {
        let p1 = Permutation::random(51, &mut rng);
        let p2 = Permutation::random(51, &mut rng);
        let seed = rng.gen();
        let (c1, c2) = order_crossover(&p1, &p2, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut replay = ChaCha8Rng::seed_from_u64(seed);
        let s1 = sample_half_positions(51, &mut replay);
        let s2 = sample_half_positions(51, &mut replay);
        let ok = [(&c1, &p1, &p2, &s1), (&c2, &p2, &p1, &s2)]
            .into_iter()
            .all(|(child, base, donor, sel)| ob_child_ok(child, base, donor, sel));
        if ok {
            ob_ok += 1;
        }
    }
    verdict(
        cx_ok == pairs && ob_ok == pairs,
        format!("CX {cx_ok}/{pairs}, OB {ob_ok}/{pairs} pairs lawful"),
    )
}

fn ob_child_ok(child: &Permutation, base: &Permutation, donor: &Permutation, selected: &[usize]) -> bool {
    if check_bijection(child.as_slice()).is_err() || selected.len() != 25 {
        return false;
    }
    let mut is_sel = vec![false; base.len()];
    for &s in selected {
        is_sel[s] = true;
    }
    let untouched = (0..base.len()).all(|i| is_sel[i] || child.as_slice()[i] == base.as_slice()[i]);
    let rank = donor.inverse();
    let ranks: Vec<usize> = (0..base.len())
        .filter(|&i| is_sel[i])
        .map(|i| rank[child.as_slice()[i]])
        .collect();
    untouched && ranks.windows(2).all(|w| w[0] < w[1])
}

fn random_candidates(rng: &mut ChaCha8Rng, count: usize, n: usize) -> Vec<Individual> {
    (0..count)
        .map(|_| Individual::new(Permutation::random(n, rng), rng.gen_range(0..8)))
        .collect()
}

fn c5_bnp_equivalences() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut elitist_ok = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=20);
        let n = rng.gen_range(2..=10);
        let pop = random_candidates(&mut rng, size, n);
        let off = random_candidates(&mut rng, size, n);
        let mut expected: Vec<i64> = pop.iter().chain(&off).map(|c| c.obj()).collect();
        expected.sort_unstable_by(|a, b| b.cmp(a));
        expected.truncate(size);
        let mut got: Vec<i64> = bnp_select(pop, off, size, 0.0, &mut rng)
            .survivors
            .iter()
            .map(|s| s.obj())
            .collect();
        got.sort_unstable_by(|a, b| b.cmp(a));
        if got == expected {
            elitist_ok += 1;
        }
    }

    let mut trace_ok = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=20);
        let n = rng.gen_range(2..=10);
        let pop = random_candidates(&mut rng, size, n);
        let off = random_candidates(&mut rng, size, n);
        let threshold = rng.gen_range(0.0..(n * n) as f64 / 2.0);
        let seed = rng.gen();
        let a = bnp_select_with(pop.clone(), off.clone(), size, threshold, DciUpdate::Incremental, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = bnp_select_with(pop, off, size, threshold, DciUpdate::Rescan, &mut ChaCha8Rng::seed_from_u64(seed));
        if a.picks == b.picks && a.survivors == b.survivors {
            trace_ok += 1;
        }
    }
    verdict(
        elitist_ok == 200 && trace_ok == 200,
        format!("D=0 truncation {elitist_ok}/200, incremental vs rescan {trace_ok}/200"),
    )
}

fn c6_threshold_schedule() -> Verdict {
    let d0 = 4123.59;
    let total = 330_000.0;
    let schedule = DiversitySchedule::new(d0, total).unwrap();
    let mut worst = 0.0f64;
    let mut ok = true;
    for rho in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let got = schedule.threshold_at(rho * total);
        let want = d0 * (1.0 - rho);
        let err = if want == 0.0 { got.abs() } else { ((got - want) / want).abs() };
        worst = worst.max(err);
        ok &= if want == 0.0 { got == 0.0 } else { err <= 1e-12 };
    }
    verdict(ok, format!("max relative error {worst:e}"))
}

const TRAJECTORY_N: usize = 150;
const TRAJECTORY_POP: usize = 200;
// ~300 generations (about 1,100 units per generation at this size).
const TRAJECTORY_BUDGET: u64 = 330_000;

fn trajectory_instance() -> Instance {
    uniform_instance(&mut ChaCha8Rng::seed_from_u64(0x150), TRAJECTORY_N)
}

fn trajectory_run(inst: &Instance, replacement: Replacement, seed: u64) -> RunTelemetry {
    let mut cfg = EngineConfig::new(Budget::Evaluations(TRAJECTORY_BUDGET));
    cfg.population_size = TRAJECTORY_POP;
    cfg.replacement = replacement;
    cfg.seed = seed;
    run(inst, &cfg).unwrap()
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

// Mean distance at budget fraction `rho`, linearly interpolated between the
// bracketing samples.
fn diversity_at(t: &RunTelemetry, rho: f64) -> f64 {
    let s = &t.samples;
    let k = s.iter().position(|x| x.rho >= rho).unwrap_or(s.len() - 1);
    if k == 0 || s[k].rho == s[k - 1].rho {
        return s[k].mean_distance;
    }
    let f = (rho - s[k - 1].rho) / (s[k].rho - s[k - 1].rho);
    s[k - 1].mean_distance + f * (s[k].mean_distance - s[k - 1].mean_distance)
}

fn c7_diversity_trajectory() -> Verdict {
    let inst = trajectory_instance();
    let mut pass = true;
    let mut parts = Vec::new();
    for seed in 0..5 {
        let t = trajectory_run(&inst, Replacement::Bnp, seed);
        let xs: Vec<f64> = t.samples.iter().map(|s| 1.0 - s.rho).collect();
        let ys: Vec<f64> = t.samples.iter().map(|s| s.mean_distance).collect();
        let r = pearson(&xs, &ys);
        let ratio = diversity_at(&t, 0.9) / diversity_at(&t, 0.1);
        pass &= r >= 0.9 && ratio < 0.25;
        parts.push(format!("seed {seed}: gens {} r={r:.3} ratio={ratio:.3}", t.generations));
    }
    verdict(pass, format!("need r>=0.9 and ratio<0.25; {}", parts.join("; ")))
}

fn median(v: &mut [i64]) -> f64 {
    v.sort_unstable();
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2] as f64
    } else {
        (v[k / 2 - 1] + v[k / 2]) as f64 / 2.0
    }
}

fn c8_ablation_direction() -> Verdict {
    let inst = trajectory_instance();
    let mut bnp: Vec<i64> = (0..10).map(|s| trajectory_run(&inst, Replacement::Bnp, s).best.obj()).collect();
    let mut elitist: Vec<i64> = (0..10)
        .map(|s| trajectory_run(&inst, Replacement::Elitist, s).best.obj())
        .collect();
    let (mb, me) = (median(&mut bnp), median(&mut elitist));
    verdict(mb >= me, format!("median best bnp {mb} vs elitist {me}"))
}

fn c9_local_search_speed() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    let inst = uniform_instance(&mut rng, 1000);
    let mut times: Vec<Duration> = (0..10)
        .map(|_| {
            let start = inst.evaluate(Permutation::random(1000, &mut rng));
            let clock = Instant::now();
            let _ = local_search(&inst, start, &mut rng);
            clock.elapsed()
        })
        .collect();
    times.sort();
    let median = (times[4] + times[5]) / 2;
    verdict(median < Duration::from_secs(1), format!("median {median:?} over 10 trials"))
}

fn c10_determinism() -> Verdict {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC10);
    let mut args = vec!["solve".to_string()];
    for name in ["d1.lop", "d2.lop"] {
        let path = dir.path().join(name);
        fs::write(&path, uniform_instance(&mut rng, 50).to_lolib_string()).unwrap();
        args.extend(["--instance".into(), path.to_str().unwrap().into()]);
    }
    args.extend(
        ["--reps", "4", "--budget-evals", "20000", "--pop-size", "40", "--seed", "11"]
            .map(String::from),
    );
    let solve = |name: &str, jobs: &str| -> Option<Vec<(String, Vec<u8>)>> {
        let out_dir = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_maedm"))
            .args(&args)
            .args(["--jobs", jobs, "--out-dir", out_dir.to_str().unwrap()])
            .output()
            .ok()?
            .status;
        status.success().then(|| snapshot(&out_dir))
    };
    let a = solve("a", "1");
    let b = solve("b", "1");
    let c = solve("c", "8");
    let files = a.as_ref().map_or(0, |s| s.len());
    let pass = a.is_some() && a == b && a == c && files > 0;
    verdict(pass, format!("{files} result files compared across 2 runs and --jobs 1 vs 8"))
}

// Every output file, with the wall-seconds column dropped from results.csv.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for sub in ["", "solutions", "telemetry"] {
        let mut entries: Vec<_> = fs::read_dir(dir.join(sub))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.is_file())
            .collect();
        entries.sort();
        for path in entries {
            let name = path.strip_prefix(dir).unwrap().display().to_string();
            let mut bytes = fs::read(&path).unwrap();
            if name == "results.csv" {
                let text = String::from_utf8(bytes).unwrap();
                bytes = text
                    .lines()
                    .map(|l| l.rsplit_once(',').unwrap().0)
                    .collect::<Vec<_>>()
                    .join("\n")
                    .into_bytes();
            }
            files.push((name, bytes));
        }
    }
    files
}

type Criterion = (&'static str, &'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("c1", "oracle optimality", c1_oracle_optimality),
        ("c2", "local-optimality certificate", c2_local_optimality),
        ("c3", "delta-evaluation exactness", c3_delta_exactness),
        ("c4", "crossover laws", c4_crossover_laws),
        ("c5", "BNP elitist limit and trace equivalence", c5_bnp_equivalences),
        ("c6", "threshold schedule", c6_threshold_schedule),
        ("c7", "diversity trajectory", c7_diversity_trajectory),
        ("c8", "ablation direction", c8_ablation_direction),
        ("c9", "local search speed (n=1000)", c9_local_search_speed),
        ("c10", "determinism", c10_determinism),
    ];
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .map(|a| a.to_ascii_lowercase())
        .collect();

    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| f == id) {
            continue;
        }
        let clock = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {id} {name}: {} ({:.1}s)", v.detail, clock.elapsed().as_secs_f64());
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nuclear_levy::levy_measure::{AtomSpec, AxisSpec, LevyMeasure, Region};
use nuclear_levy::verify::{self, IndepComponent, Outcome};
use nuclear_levy::{CharTriplet, LevyMeasureSpec, SeminormIndex, SimConfig, TestFunction, TripletSpec};
use nuclear_levy_cli::{cmd_simulate, cmd_validate, cmd_verify, Experiment, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 100_000;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn reference() -> Experiment {
    let text = fs::read_to_string(configs().join("reference.json")).unwrap();
    RunConfig::parse(&text).unwrap().experiment().unwrap()
}

fn reference_sim() -> SimConfig {
    let sim = reference().sim.unwrap();
    assert_eq!((sim.replicas, sim.shells, sim.truncation), (N, 12, 8));
    sim
}

fn probes(dim: usize) -> Vec<TestFunction> {
    nuclear_levy_cli::PhiSpec::Halton { count: 20, scale: 1.0 }.resolve(dim).unwrap()
}

fn random_phis(dim: usize, count: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| TestFunction::new((0..dim).map(|_| rng.random_range(-3.0..3.0)).collect()).unwrap()).collect()
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_cf_agreement() -> Check {
    let exp = reference();
    let start = Instant::now();
    let rep = verify::ecf_test(&exp.triplet, 1.0, &probes(8), &reference_sim(), 1.0).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(
        rep.pass && secs <= 120.0,
        format!(
            "max |ecf - cf| / (5/sqrt(N) + bias(K)) = {:.3} over 20 phi, max deviation {:.2e}, {secs:.1} s (limit 120 s)",
            rep.statistic, rep.metrics["max_deviation"]
        ),
    )
}

fn c2_moments() -> Check {
    let exp = reference();
    let rep = verify::moment_tests(&exp.triplet, 1.0, &probes(8), &reference_sim(), 1.0).map_err(|e| e.to_string())?;
    ensure(rep.pass, format!("worst |empirical - exact| / band = {:.3} over 20 phi (4 SE, + res(K) for Var M)", rep.statistic))
}

fn c3_factorization() -> Check {
    let exp = reference();
    let phis = random_phis(8, 100, 3);
    let dev = verify::factorization_deviation(&exp.triplet, 1.0, &phis).map_err(|e| e.to_string())?;
    ensure(dev <= 1e-10, format!("max |cf - product of component cfs| = {dev:.2e} on 100 random phi (tolerance 1e-10)"))
}

fn c4_independence() -> Check {
    use IndepComponent::*;
    let exp = reference();
    let phi = TestFunction::new(vec![1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let psi = TestFunction::new(vec![0.3, -1.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let sim = reference_sim();
    let pairs = [(Wiener, Small), (Wiener, Large), (Small, Large)];
    let rep = verify::independence_test(&exp.triplet, &pairs, &phi, &psi, &sim, 1).map_err(|e| e.to_string())?;
    let control = verify::independence_test(&exp.triplet, &[(Wiener, CopyWiener)], &phi, &psi, &sim, 0).map_err(|e| e.to_string())?;
    ensure(
        rep.pass && !control.pass,
        format!(
            "max |corr| / (4/sqrt(N)) = {:.3}; shared-substream control {:.1} (must exceed 1)",
            rep.statistic, control.statistic
        ),
    )
}

fn c5_semigroup_roots() -> Check {
    let exp = reference();
    let sim = reference_sim();
    let phis = probes(8)[..5].to_vec();
    let semi = verify::semigroup_test(&exp.triplet, 0.3, 0.7, &phis, &sim, 1.0).map_err(|e| e.to_string())?;
    let root = verify::infdiv_test(&exp.triplet, 4, &phis, &sim, 1.0).map_err(|e| e.to_string())?;
    let exact = semi.metrics["exact_max_deviation"].max(root.metrics["exact_max_deviation"]);
    ensure(
        semi.pass && root.pass && exact <= 1e-10,
        format!(
            "exact identities {exact:.2e} (tolerance 1e-10); KS D/D_crit semigroup {:.3}, 4 roots {:.3} (level 0.01)",
            semi.metrics["ks_max_statistic"] / semi.metrics["ks_critical"],
            root.metrics["ks_max_statistic"] / semi.metrics["ks_critical"]
        ),
    )
}

fn c6_poisson_counts() -> Check {
    let exp = reference();
    let tail = Region::unit_complement(exp.triplet.r);
    let rep = verify::jump_count_test(&exp.triplet, &tail, 1.0, &reference_sim(), 1.0).map_err(|e| e.to_string())?;
    let rate = rep.metrics["rate"];
    let se = (rate / N as f64).sqrt();
    let mean_z = (rep.metrics["mean"] - rate) / se;
    let p = rep.metrics["chi2_p"];
    ensure(
        mean_z.abs() <= 4.0 && p >= 0.01,
        format!("N(1, tail): mean {:.5} vs nu(tail) {rate}, z = {mean_z:.2} (|z| <= 4); chi-square p = {p:.3} (>= 0.01)", rep.metrics["mean"]),
    )
}

fn c7_validator() -> Check {
    let exp = reference();
    let report = exp.triplet.levy.validate(exp.triplet.r).map_err(|e| e.to_string())?;
    // ∫_0^1 x² · x^{-3/2} dx
    let oracle = 2.0 / 3.0;
    let rel = (report.small_ball_moment - oracle).abs() / oracle;

    let origin = LevyMeasureSpec { atoms: vec![AtomSpec { point: vec![0.0; 8], mass: 1.0 }], axes: vec![] };
    let rejected = LevyMeasure::from_spec(&origin, 8).is_err();
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("origin.json");
    let spec = TripletSpec { mean: vec![0.0; 8], cov: vec![vec![0.0; 8]; 8], levy: origin, r: 0.0 };
    fs::write(&cfg, format!(r#"{{"triplet": {}}}"#, serde_json::to_string(&spec).unwrap())).unwrap();
    let cli_exit = cmd_validate(&cfg, Some(dir.path())).unwrap();

    let power = LevyMeasure::from_spec(
        &LevyMeasureSpec { atoms: vec![], axes: vec![AxisSpec::Power { n: 0, c: 1.0, alpha: 0.5, xmax: 1.0 }] },
        8,
    )
    .unwrap();
    let r = SeminormIndex(0.0);
    let rate = 0.5f64.powf(2.0 - 0.5);
    let mut worst_ratio: f64 = 0.0;
    for k in 1..12 {
        let a = power.shell_decomposition(r, k).unwrap().residual;
        let b = power.shell_decomposition(r, k + 1).unwrap().residual;
        worst_ratio = worst_ratio.max(b / a);
    }
    ensure(
        report.valid && rel <= 1e-6 && rejected && cli_exit == 1 && worst_ratio <= rate * (1.0 + 1e-9),
        format!(
            "valid = {}, small-ball moment rel. error {rel:.1e} (<= 1e-6); origin atom rejected = {rejected}, validate exit {cli_exit}; \
             max res(K+1)/res(K) = {worst_ratio:.9} (<= 2^-1.5 = {rate:.9})",
            report.valid
        ),
    )
}

fn diag_triplet(mean: Vec<f64>, diag: Vec<f64>, levy: LevyMeasureSpec) -> CharTriplet {
    let d = mean.len();
    let cov = (0..d).map(|i| (0..d).map(|j| if i == j { diag[i] } else { 0.0 }).collect()).collect();
    CharTriplet::from_spec(&TripletSpec { mean, cov, levy, r: 0.0 }).unwrap()
}

fn c8_lemmas() -> Check {
    let d = 8;
    let p = SeminormIndex(0.0);
    let phis = random_phis(d, 50, 8);
    let ns = [1, 2, 4, 16, 256];
    let mut e0 = vec![0.0; d];
    e0[0] = 0.1;
    let fernique_cases = [
        ("zero", CharTriplet::zero(d), 0.25),
        ("gaussian", diag_triplet(vec![0.0; d], (0..d).map(|n| 0.05 / (1 + n) as f64).collect(), LevyMeasureSpec::default()), 0.1),
        (
            "compound poisson",
            diag_triplet(
                vec![0.0; d],
                vec![0.0; d],
                LevyMeasureSpec { atoms: vec![AtomSpec { point: e0.clone(), mass: 0.2 }], axes: vec![] },
            ),
            0.05,
        ),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, t, eps) in &fernique_cases {
        let rep = verify::fernique_check(t, p, *eps, &ns, &phis).map_err(|e| e.to_string())?;
        ok &= rep.pass;
        lines.push(format!("fernique {name}: {:?} slack {:.3}", rep.outcome, rep.metrics["max_slack"]));
    }
    let violating = verify::fernique_check(&reference().triplet, p, 0.25, &ns, &phis).map_err(|e| e.to_string())?;
    ok &= violating.outcome == Outcome::Inconclusive && !violating.pass;
    lines.push(format!("fernique reference: {:?}", violating.outcome));

    let q = SeminormIndex(1.0);
    let measure = |atoms: Vec<AtomSpec>, axes: Vec<AxisSpec>| LevyMeasure::from_spec(&LevyMeasureSpec { atoms, axes }, d).unwrap();
    let point = |v: &[(usize, f64)]| {
        let mut x = vec![0.0; d];
        v.iter().for_each(|&(i, a)| x[i] = a);
        x
    };
    let minlos_cases = [
        ("empty", LevyMeasure::empty(d), 0.01),
        ("atom", measure(vec![AtomSpec { point: point(&[(0, 0.05), (2, 0.02)]), mass: 0.5 }], vec![]), 0.01),
        ("axis atoms", measure(vec![], vec![AxisSpec::Atoms { n: 1, atoms: vec![[0.1, 0.3], [-0.2, 0.1]] }]), 0.01),
    ];
    for (name, mu, eps) in &minlos_cases {
        let rep = verify::minlos_check(mu, p, q, *eps).map_err(|e| e.to_string())?;
        ok &= rep.pass;
        lines.push(format!("minlos {name}: {:?} slack {:.2e}", rep.outcome, rep.metrics["max_slack"]));
    }
    let heavy = measure(vec![AtomSpec { point: point(&[(0, 2.0)]), mass: 5.0 }], vec![]);
    let violating = verify::minlos_check(&heavy, p, q, 0.01).map_err(|e| e.to_string())?;
    ok &= violating.outcome == Outcome::Inconclusive && !violating.pass;
    lines.push(format!("minlos heavy atom: {:?}", violating.outcome));
    ensure(ok, lines.join("; "))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn c9_reproducibility() -> Check {
    let text = fs::read_to_string(configs().join("reference.json")).unwrap();
    let mut cfg = RunConfig::parse(&text).unwrap();
    cfg.sim.as_mut().unwrap().replicas = 1000;
    cfg.tests.retain(|t| !matches!(t, nuclear_levy_cli::TestSpec::Independence { .. }));
    let work = tempfile::tempdir().unwrap();
    let cfg_path = work.path().join("run.json");
    fs::write(&cfg_path, cfg.to_json()).unwrap();

    let run = |threads: usize, tag: &str| {
        let out = work.path().join(tag);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            cmd_simulate(&cfg_path, Some(&out)).unwrap();
            cmd_verify(&cfg_path, Some(&out)).unwrap();
        });
        read_dir_bytes(&out)
    };
    let a = run(1, "t1a");
    let b = run(1, "t1b");
    let c = run(8, "t8");
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    let bytes: usize = a.iter().map(|(_, b)| b.len()).sum();
    ensure(
        a == b && a == c && names.contains(&"report.json") && names.contains(&"jumps.csv"),
        format!("{names:?} ({bytes} bytes) identical across two runs and 1 vs 8 threads: {}", a == b && a == c),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("CF agreement", c1_cf_agreement),
        ("moment identities", c2_moments),
        ("decomposition factorization", c3_factorization),
        ("independence", c4_independence),
        ("semigroup and infinite divisibility", c5_semigroup_roots),
        ("Poisson counts", c6_poisson_counts),
        ("Levy-measure validator", c7_validator),
        ("Fernique/Minlos checks", c8_lemmas),
        ("reproducibility", c9_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {status} [{name}] {detail}", i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

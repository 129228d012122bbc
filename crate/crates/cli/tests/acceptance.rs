//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line even when others fail.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use condisc_core::conductor::{analyze_full, Analysis, AnalysisInput, AnalyzeOptions, EqualityReason};
use condisc_core::harness::{
    check_report, disc_oracle, gen_instance, mutate_and_validate, naive_tree_from_roots, naive_tree_oracle,
    tree_signature, GenSpec,
};
use condisc_core::input::parse_instance_file;
use condisc_core::cluster::{equation_discriminant, Parity};
use condisc_core::valuation::build_matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUITE_SIZE: u64 = 1000;
const SUITE_SEED: u64 = 20_240_601;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(rel: &str) -> Result<(AnalysisInput, Analysis), String> {
    let text = std::fs::read_to_string(fixtures().join(rel)).map_err(|e| e.to_string())?;
    let file = parse_instance_file(&text, false).map_err(|e| e.to_string())?;
    let a = analyze_full(&file.input, &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    Ok((file.input, a))
}

fn expect(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn headline(a: &Analysis) -> (i64, i64, i64, usize, i64) {
    let r = &a.report;
    (r.nu_df, r.artin_conductor, r.artin_local_sum, r.n_components, r.f_tilde)
}

fn criterion_1() -> Result<(), String> {
    let start = Instant::now();
    let (input, a) = load("a.json")?;
    let elapsed = start.elapsed();
    let AnalysisInput::Roots(inst) = &input else {
        return Err("fixture A is not in roots mode".into());
    };
    expect(disc_oracle(inst) == 6, "disc_oracle(A) != 6")?;
    expect(headline(&a) == (6, 6, 6, 5, 2), format!("got {:?}", headline(&a)))?;
    expect(a.report.equality_holds && a.report.x_minimal, "equality or minimality flag wrong")?;
    expect(elapsed < Duration::from_millis(50), format!("took {elapsed:?}"))
}

fn criterion_2() -> Result<(), String> {
    let (_, a) = load("b.json")?;
    expect(headline(&a) == (6, 6, 6, 5, 2), format!("got {:?}", headline(&a)))?;
    let hubs: Vec<_> = a.x.components().iter().filter(|c| c.multiplicity == 2).collect();
    expect(hubs.len() == 1, "expected exactly one multiplicity-2 component")?;
    let hub = hubs[0].id;
    expect(
        a.x.edges().iter().all(|e| e.from == hub || e.to == hub) && a.x.edges().len() == a.x.len() - 1,
        "T_X is not a star through the multiplicity-2 component",
    )?;
    let root = a.x.fiber(a.y.strict_transform(0));
    expect(root.len() == 1 && a.x.components()[root[0]].chi == 0, "root component does not have chi 0")
}

fn criterion_3() -> Result<(), String> {
    let (_, a) = load("c.json")?;
    expect(headline(&a) == (4, 4, 4, 4, 1), format!("got {:?}", headline(&a)))?;
    let deg = |c: usize| a.x.neighbors(c).map(|(_, w)| w).sum::<i64>();
    expect(
        a.x.len() == 4 && a.x.edges().len() == 4 && (0..4).all(|c| deg(c) == 2) && a.x.is_connected(),
        "T_X is not a 4-cycle",
    )?;
    let split = a.x.components().iter().filter(|c| c.sheet == 1).count();
    expect(split >= 1, "no split sheets in the cycle")
}

fn criterion_4() -> Result<(), String> {
    let (_, a) = load("extra/good_reduction.json")?;
    expect(headline(&a) == (0, 0, 0, 1, 0), format!("got {:?}", headline(&a)))?;
    expect(a.x.components()[0].chi == -2, "single component does not have chi -2")?;
    expect(a.report.genus_check == 2, "genus_check != 2")
}

#[derive(Default)]
struct Suite {
    trials: u64,
    elapsed: Duration,
    identity_failures: Vec<String>,
    oracle_failures: Vec<String>,
    strict: usize,
    equality: usize,
    reason_failures: Vec<String>,
    inequality_failures: Vec<String>,
    mutants_flagged: usize,
    primes: std::collections::BTreeSet<u64>,
    genera: std::collections::BTreeSet<usize>,
}

fn run_suite() -> Suite {
    let mut s = Suite::default();
    let start = Instant::now();
    for k in 0..SUITE_SIZE {
        let spec = GenSpec::random(SUITE_SEED.wrapping_add(k));
        s.trials += 1;
        s.primes.insert(spec.p);
        s.genera.insert(spec.genus);
        let inst = gen_instance(&spec);
        let a = match analyze_full(&AnalysisInput::Roots(inst.clone()), &AnalyzeOptions::default()) {
            Ok(a) => a,
            Err(e) => {
                s.identity_failures.push(format!("seed {}: {e}", spec.seed));
                continue;
            }
        };
        for f in check_report(&inst, &a.report, &a.tree) {
            s.identity_failures.push(format!("seed {}: {f}", spec.seed));
        }

        let m = build_matrix(&inst).unwrap();
        let sig = tree_signature(&a.tree);
        if sig != naive_tree_oracle(&m) || sig != naive_tree_from_roots(&inst) {
            s.oracle_failures.push(format!("seed {}: tree differs from oracle", spec.seed));
        }
        if equation_discriminant(&m) != disc_oracle(&inst) {
            s.oracle_failures.push(format!("seed {}: discriminant differs from oracle", spec.seed));
        }

        let r = &a.report;
        if r.artin_conductor > r.nu_df {
            s.inequality_failures.push(format!("seed {}: artin > nu_df", spec.seed));
        }
        s.strict += usize::from(r.artin_conductor < r.nu_df);
        s.equality += usize::from(r.artin_conductor == r.nu_df);
        for l in &r.vertices {
            let v = a.tree.vertex(l.id);
            let even_kids: Vec<_> = a.tree.children(v).filter(|c| c.parity == Parity::Even).collect();
            let clause = match l.reason {
                EqualityReason::EvenAllEvenChildrenWt2 => {
                    l.parity == Parity::Even && even_kids.iter().all(|c| c.wt == 2)
                }
                EqualityReason::OddWt2 => l.parity == Parity::Odd && l.wt == 2,
                EqualityReason::OddWt3NoEvenChildren => {
                    l.parity == Parity::Odd && l.wt == 3 && even_kids.is_empty()
                }
                EqualityReason::Strict => l.d > l.dpp,
            };
            if !clause || l.equality != (l.d == l.dpp) || l.dpp > l.d {
                s.reason_failures.push(format!("seed {} vertex {}", spec.seed, l.id));
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        match mutate_and_validate(&m, &mut rng) {
            Some(flagged) => s.mutants_flagged += usize::from(flagged),
            None => s.identity_failures.push(format!("seed {}: validator and brute force disagree", spec.seed)),
        }
    }
    s.elapsed = start.elapsed();
    s
}

fn first_few(v: &[String]) -> String {
    v.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
}

fn criterion_5(s: &Suite) -> Result<(), String> {
    expect(s.trials == SUITE_SIZE, "suite did not run to completion")?;
    expect(s.identity_failures.is_empty(), first_few(&s.identity_failures))?;
    expect(s.primes.len() == 5, format!("primes covered: {:?}", s.primes))?;
    expect(s.genera == (2..=6).collect(), format!("genera covered: {:?}", s.genera))?;
    expect(s.mutants_flagged > 0, "no mutant was flagged by the validator")?;
    expect(s.elapsed < Duration::from_secs(60), format!("took {:?}", s.elapsed))
}

fn criterion_6(s: &Suite) -> Result<(), String> {
    expect(s.oracle_failures.is_empty(), first_few(&s.oracle_failures))
}

fn criterion_7(s: &Suite) -> Result<(), String> {
    expect(s.inequality_failures.is_empty(), first_few(&s.inequality_failures))?;
    expect(s.strict > 0, "no strict instance generated")?;
    expect(s.equality > 0, "no equality instance generated")?;
    expect(s.reason_failures.is_empty(), first_few(&s.reason_failures))
}

fn criterion_8() -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_condisc");
    let cases = [
        ("invalid/p2.json", None, 1, "p = 2"),
        ("invalid/dup_roots.json", None, 1, "duplicate roots at indices"),
        ("invalid/nonintegral.json", None, 1, "is not integral"),
        ("invalid/bad_matrix.json", None, 1, "not ultrametric"),
        ("invalid/odd_count.json", None, 1, "is odd"),
        ("a.json", Some("drop-intersection"), 2, "internal invariant violated"),
        ("a.json", Some("skew-local-term"), 2, "internal invariant violated"),
    ];
    for (file, fault, code, needle) in cases {
        let mut cmd = Command::new(bin);
        cmd.arg("analyze").arg(fixtures().join(file));
        if let Some(f) = fault {
            cmd.args(["--inject-fault", f]);
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        let err = String::from_utf8_lossy(&out.stderr);
        expect(
            out.status.code() == Some(code) && err.contains(needle),
            format!("{file} {fault:?}: exit {:?}, stderr {err:?}", out.status.code()),
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Result<(), String>)> = vec![
        (1, "fixture A", criterion_1()),
        (2, "fixture B star", criterion_2()),
        (3, "fixture C cycle", criterion_3()),
        (4, "good reduction", criterion_4()),
    ];
    let suite = run_suite();
    results.push((5, "randomized identity suite", criterion_5(&suite)));
    results.push((6, "oracle equivalence", criterion_6(&suite)));
    results.push((7, "inequality at scale", criterion_7(&suite)));
    results.push((8, "validation gates and exit codes", criterion_8()));

    let mut all = true;
    for (n, name, r) in &results {
        match r {
            Ok(()) => println!("criterion {n} ({name}): PASS"),
            Err(e) => {
                all = false;
                println!("criterion {n} ({name}): FAIL: {e}");
            }
        }
    }
    println!(
        "suite: {} instances in {:.2?}, {} strict, {} equality, {} mutants flagged",
        suite.trials, suite.elapsed, suite.strict, suite.equality, suite.mutants_flagged
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured worst residuals. The 50-example battery (named
//! actions plus seeded random ones across n in {2,3,4,6}) is built once and
//! shared; run with `--nocapture` to see the per-criterion lines.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use crossedk::crossed::{
    embedding_battery, exact_sequence, full_corner_check, projection_battery, structure_battery,
};
use crossedk::kgroup::{
    exactness_check, induced_k0_map, kpair_of_algebra, FgAbelianGroup, GroupHom, KPair,
};
use crossedk::recursion::{
    paschke_specialize, run_recursion_concrete, run_recursion_symbolic, ConcreteRun,
};
use crossedk::snf::{smith_normal_form, IntMat};
use crossedk::{samples, AlgebraHom, SplitMix64, ZnAction, DEFAULT_TOL};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

const BATTERY_SEED: u64 = 20250508;

struct ExampleResult {
    name: String,
    action: ZnAction,
    run: ConcreteRun,
    hom: f64,
    star: f64,
    round_trip: f64,
    onto: f64,
    proj_idempotent: f64,
    proj_resolution: f64,
    proj_eigenvalue: f64,
    structure_ok: bool,
    structure_detail: String,
    corners_ok: bool,
    corner_detail: String,
    sequences_ok: bool,
}

struct Battery {
    results: Vec<ExampleResult>,
    elapsed: Duration,
    embedding_elapsed: Duration,
}

fn battery() -> &'static Battery {
    static BATTERY: OnceLock<Battery> = OnceLock::new();
    BATTERY.get_or_init(|| {
        let start = Instant::now();
        let mut rng = SplitMix64::new(BATTERY_SEED);
        let actions = samples::acceptance_battery(BATTERY_SEED, DEFAULT_TOL).expect("battery");
        let mut embedding_elapsed = Duration::ZERO;
        let mut results = Vec::with_capacity(actions.len());
        for (name, action) in actions {
            let embed_start = Instant::now();
            let emb = embedding_battery(&action, 4, &mut rng).expect("embedding battery");
            embedding_elapsed += embed_start.elapsed();

            let proj = projection_battery(&action).expect("projection battery");
            let run = run_recursion_concrete(&action, &mut rng)
                .unwrap_or_else(|e| panic!("{name}: concrete recursion failed: {e}"));

            let structure = structure_battery(&action, &run.tower).expect("structure battery");
            let structure_detail = structure
                .lines
                .iter()
                .filter(|l| !l.passed)
                .map(|l| format!("{} (residual {:.2e})", l.name, l.residual))
                .collect::<Vec<_>>()
                .join("; ");

            let mut corners_ok = true;
            let mut corner_detail = String::new();
            let mut sequences_ok = true;
            for k in 0..action.order() - 1 {
                let fc = full_corner_check(&action, &run.tower, k, &mut rng)
                    .unwrap_or_else(|e| panic!("{name}: full corner check failed: {e}"));
                if !fc.passed() {
                    corners_ok = false;
                    for l in fc.lines.iter().filter(|l| !l.passed) {
                        corner_detail.push_str(&format!("k={k}: {}; ", l.name));
                    }
                }
                let seq = exact_sequence(&action, &run.tower, k, &mut rng)
                    .unwrap_or_else(|e| panic!("{name}: exact sequence failed: {e}"));
                sequences_ok &= seq.passed();
            }

            results.push(ExampleResult {
                name,
                action,
                hom: emb.homomorphism,
                star: emb.star,
                round_trip: emb.round_trip,
                onto: emb.onto_round_trip,
                proj_idempotent: proj.idempotent,
                proj_resolution: proj.resolution,
                proj_eigenvalue: proj.eigenvalue,
                structure_ok: structure.passed(),
                structure_detail,
                corners_ok,
                corner_detail,
                sequences_ok,
                run,
            });
        }
        Battery {
            results,
            elapsed: start.elapsed(),
            embedding_elapsed,
        }
    })
}

fn z_pair(rank: usize) -> KPair {
    KPair::new(FgAbelianGroup::free(rank), FgAbelianGroup::zero())
}

#[test]
fn criterion_1_symbolic_order3_bookkeeping() {
    let start = Instant::now();
    let ledger = run_recursion_symbolic(3, &z_pair(1), &[z_pair(1), z_pair(1)]).expect("ledger");
    assert!(ledger.fully_resolved());
    // First step resolves B_1.
    assert_eq!(ledger.steps[0].k, 1);
    let b1 = ledger.steps[0].resolved.as_ref().unwrap();
    assert_eq!(b1.k0, FgAbelianGroup::free(2), "K0(B_1) = Z^2");
    assert!(b1.k1.is_zero(), "K1(B_1) = 0");
    let final_pair = ledger.final_pair().unwrap();
    assert_eq!(final_pair.k0, FgAbelianGroup::free(3), "final K0 = Z^3");
    assert!(final_pair.k1.is_zero(), "final K1 = 0");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 1 PASS: symbolic n=3 run gives K0(B_1)=Z^2 and K0 = Z^3, K1 = 0 in {elapsed:?}"
    );
}

#[test]
fn criterion_2_embedding_battery() {
    let b = battery();
    assert!(
        b.results.len() >= 50,
        "battery has {} examples",
        b.results.len()
    );
    let mut worst = (0.0_f64, 0.0_f64, 0.0_f64);
    for r in &b.results {
        worst.0 = worst.0.max(r.hom);
        worst.1 = worst.1.max(r.star);
        worst.2 = worst.2.max(r.round_trip.max(r.onto));
        assert!(r.hom <= 1e-8, "{}: homomorphism residual {}", r.name, r.hom);
        assert!(r.star <= 1e-8, "{}: star residual {}", r.name, r.star);
        assert!(
            r.round_trip <= 1e-8,
            "{}: round trip residual {}",
            r.name,
            r.round_trip
        );
        assert!(
            r.onto <= 1e-8,
            "{}: onto round trip residual {}",
            r.name,
            r.onto
        );
    }
    assert!(
        b.elapsed <= Duration::from_secs(60),
        "battery took {:?} (embedding checks alone {:?})",
        b.elapsed,
        b.embedding_elapsed
    );
    println!(
        "criterion 2 PASS: {} examples, worst residuals hom {:.2e} star {:.2e} round-trip {:.2e}, battery {:?}",
        b.results.len(),
        worst.0,
        worst.1,
        worst.2,
        b.elapsed
    );
}

#[test]
fn criterion_3_projection_identities() {
    let b = battery();
    let mut worst = (0.0_f64, 0.0_f64, 0.0_f64);
    for r in &b.results {
        worst.0 = worst.0.max(r.proj_idempotent);
        worst.1 = worst.1.max(r.proj_resolution);
        worst.2 = worst.2.max(r.proj_eigenvalue);
        assert!(
            r.proj_idempotent <= 1e-8,
            "{}: P_j P_k residual {}",
            r.name,
            r.proj_idempotent
        );
        assert!(
            r.proj_resolution <= 1e-8,
            "{}: sum P_k residual {}",
            r.name,
            r.proj_resolution
        );
        assert!(
            r.proj_eigenvalue <= 1e-8,
            "{}: eigenvalue residual {}",
            r.name,
            r.proj_eigenvalue
        );
    }
    println!(
        "criterion 3 PASS: projection identities, worst residuals {:.2e} / {:.2e} / {:.2e}",
        worst.0, worst.1, worst.2
    );
}

#[test]
fn criterion_4_structure_battery() {
    let b = battery();
    for r in &b.results {
        assert!(r.structure_ok, "{}: {}", r.name, r.structure_detail);
    }
    println!(
        "criterion 4 PASS: grading, adjoint symmetry, ideal checks, and dimension counts on {} examples",
        b.results.len()
    );
}

#[test]
fn criterion_5_full_corner_checks() {
    let b = battery();
    for r in &b.results {
        assert!(r.corners_ok, "{}: {}", r.name, r.corner_detail);
        assert!(
            r.sequences_ok,
            "{}: exact sequence verification failed",
            r.name
        );
    }
    println!(
        "criterion 5 PASS: corner identity, span fullness, and block bijections on {} examples",
        b.results.len()
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let b = battery();
    for r in &b.results {
        let final_k0 = &r.run.ledger.final_pair().expect("resolved").k0;
        assert_eq!(final_k0, &r.run.oracle, "{}: recursion vs oracle", r.name);
        assert!(final_k0.is_free(), "{}: K0 must be torsion-free", r.name);
    }
    // Named closed forms.
    let expect = |name: &str, rank: usize| {
        let r = b
            .results
            .iter()
            .find(|r| r.name == name)
            .expect("named example");
        assert_eq!(r.run.oracle, FgAbelianGroup::free(rank), "{name}");
    };
    expect("trivial-c-n2", 2);
    expect("trivial-c-n3", 3);
    expect("trivial-c-n4", 4);
    expect("trivial-c-n6", 6);
    expect("swap2", 1);
    expect("shift3", 1);
    println!(
        "criterion 6 PASS: recursion final K0 equals the Wedderburn oracle on {} examples (incl. Z^n / Z / Z closed forms)",
        b.results.len()
    );
}

#[test]
fn criterion_7_exactness_in_integer_arithmetic() {
    let b = battery();
    let mut rng = SplitMix64::new(BATTERY_SEED ^ 0x77);
    let mut junctions = 0usize;
    for r in &b.results {
        let n = r.action.order();
        let amb = r.action.algebra().ambient_dim();
        for k in 0..n - 1 {
            let tower = &r.run.tower;
            let include = induced_k0_map(
                &AlgebraHom::identity((n - k) * amb),
                tower.ideal_algebra(k),
                tower.corner(k),
                &mut rng,
            )
            .expect("include map");
            let project = induced_k0_map(
                &tower.quotient(k).1,
                tower.corner(k),
                &tower.quotient(k).0,
                &mut rng,
            )
            .expect("project map");
            let kj = kpair_of_algebra(tower.ideal_algebra(k), &mut rng).expect("K(J)");
            let kq = kpair_of_algebra(&tower.quotient(k).0, &mut rng).expect("K(Q)");
            let seq = vec![
                GroupHom::zero(FgAbelianGroup::zero(), kj.k0.clone()),
                include,
                project,
                GroupHom::zero(kq.k0.clone(), FgAbelianGroup::zero()),
            ];
            let reports = exactness_check(&seq).expect("exactness check");
            for j in &reports {
                assert!(
                    j.exact,
                    "{}: step k={k} junction {} not exact",
                    r.name, j.position
                );
            }
            junctions += reports.len();
        }
    }
    println!("criterion 7 PASS: {junctions} junctions exact in integer arithmetic");
}

#[test]
fn criterion_8_paschke_reduction() {
    let b = battery();
    let mut checked = 0;
    for r in &b.results {
        if r.action.order() != 2 {
            continue;
        }
        assert_eq!(
            r.run.ledger.steps.len(),
            1,
            "{}: n=2 ledger must be single-step",
            r.name
        );
        let report = paschke_specialize(&r.action, &r.run).expect("specialization");
        assert!(report.b1_equals_a0, "{}: B_1 = A0", r.name);
        assert!(report.i0_equals_a1_squared, "{}: I_0 = A1*A1", r.name);
        assert!(
            report.generated_ideal_matches,
            "{}: generated ideal = I_0",
            r.name
        );
        checked += 1;
    }
    // The two named witnesses must be among them.
    assert!(b.results.iter().any(|r| r.name == "swap2"));
    assert!(b.results.iter().any(|r| r.name == "trivial-c-n2"));
    assert!(checked >= 2);
    println!("criterion 8 PASS: Paschke shape verified on {checked} order-2 examples");
}

#[test]
fn criterion_9_smith_normal_form() {
    let mut rng = SplitMix64::new(0x5EED);
    let mut count = 0;
    for _ in 0..200 {
        let r = 1 + rng.next_below(8);
        let c = 1 + rng.next_below(8);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.next_range(-20, 20)).collect())
            .collect();
        let m = IntMat::from_rows(&rows);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s, "U M V = S");
        assert!(snf.u.determinant().abs() == BigInt::one(), "det U");
        assert!(snf.v.determinant().abs() == BigInt::one(), "det V");
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
        count += 1;
    }
    let m = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
    let snf = smith_normal_form(&m);
    assert_eq!(snf.s[(0, 0)], BigInt::from(1));
    assert_eq!(snf.s[(1, 1)], BigInt::from(6));
    println!(
        "criterion 9 PASS: SNF contract on {count} random matrices plus diag(2,3) -> diag(1,6)"
    );
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use digraph_parking::bijections::{psi, tau, MarkedSourceTreePF};
use digraph_parking::enumerate::{
    count_distributions, count_pf, verify_identity, Identity, IdentityReport, SweepOptions,
};
use digraph_parking::{
    hall_witness, is_parking_function, is_source_tree_pf, parking_schedule, replay_validate, Digraph, MappingFn,
    Orientation, PreferenceSequence, RootedTree,
};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = std::result::Result<String, String>;

fn seq(v: &[usize]) -> PreferenceSequence {
    PreferenceSequence::new(v.to_vec())
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(elapsed <= limit, format!("took {elapsed:?}, limit {limit:?}"))
}

/// Sweeps shared by criteria 3 to 6 and compared again in criterion 10.
struct Sweeps {
    workers: usize,
    reports: Vec<(Identity, IdentityReport, Duration)>,
}

impl Sweeps {
    fn run(workers: usize) -> Result<Self, String> {
        let options = SweepOptions::with_workers(workers);
        let mut reports = Vec::new();
        for identity in [
            Identity::TildeNm,
            Identity::SinkNm,
            Identity::TreeInequality,
            Identity::ExtremalBounds,
            Identity::MappingBounds,
            Identity::TauRoundTrip,
            Identity::PsiRoundTrip,
        ] {
            let started = Instant::now();
            let report = verify_identity(identity, 1..=4, None, &options).map_err(|e| e.to_string())?;
            reports.push((identity, report, started.elapsed()));
        }
        Ok(Sweeps { workers, reports })
    }

    fn get(&self, identity: Identity) -> (&IdentityReport, Duration) {
        let (_, r, t) = self.reports.iter().find(|(i, _, _)| *i == identity).expect("identity was swept");
        (r, *t)
    }

    fn require(&self, identity: Identity) -> std::result::Result<(), String> {
        let (report, _) = self.get(identity);
        match report.rows.iter().find(|r| !r.pass) {
            None => Ok(()),
            Some(r) => Err(format!(
                "{identity} fails at n={} m={}: {}={} {}={} failures={}",
                r.n, r.m, report.lhs, r.lhs, report.rhs, r.rhs, r.failures
            )),
        }
    }
}

fn classical_counts() -> Check {
    let started = Instant::now();
    let heads: Vec<BigUint> = (1..=5).map(|n| count_pf(&Digraph::path(n), n).unwrap()).collect();
    let want: Vec<BigUint> = [1u32, 3, 16, 125, 1296].into_iter().map(BigUint::from).collect();
    ensure(heads == want, format!("P(path_n, n) = {heads:?}"))?;
    for n in 1..=5u64 {
        for m in 0..=n {
            let expect = if m == 0 { 1 } else { (n - m + 1) * (n + 1).pow(m as u32 - 1) };
            let got = count_pf(&Digraph::path(n as usize), m as usize).unwrap();
            ensure(got == BigUint::from(expect), format!("P(path_{n}, {m}) = {got}, expected {expect}"))?;
        }
    }
    within(started.elapsed(), Duration::from_secs(10))?;
    Ok(format!("1, 3, 16, 125, 1296 and all m <= n <= 5 in {:?}", started.elapsed()))
}

fn figures() -> Check {
    // Figure 1
    let fig1 = Digraph::new(5, [(3, 2), (1, 3), (1, 2), (4, 5), (1, 4), (2, 5)]).unwrap();
    let s1 = seq(&[1, 1, 3, 2, 1]);
    let outcome = parking_schedule(&fig1, &s1).unwrap().ok_or("figure 1 sequence rejected")?;
    ensure(replay_validate(&fig1, &s1, &outcome), "figure 1 schedule does not replay")?;
    ensure(outcome.used_edges().contains(&(1, 4)), "figure 1 schedule avoids (1,4)")?;

    // Figure 2
    let fig2_tree = RootedTree::from_parents(3, vec![3, 1, 0, 1, 4, 3, 1], Orientation::Source).unwrap();
    let fig2_map = MappingFn::new(vec![4, 1, 3, 1, 5, 3, 1]).unwrap();
    let s2 = seq(&[2, 3, 4, 1, 3, 5, 1]);
    ensure(is_parking_function(&fig2_tree.as_digraph(), &s2).unwrap(), "figure 2 tree rejects s")?;
    ensure(is_source_tree_pf(&fig2_tree, &s2).unwrap(), "figure 2 subtree test rejects s")?;
    ensure(is_parking_function(&fig2_map.inverse_mapping_digraph(), &s2).unwrap(), "figure 2 mapping rejects s")?;

    // Figure 3
    let fig3 = |o| RootedTree::from_parents(4, vec![3, 3, 4, 0], o).unwrap().as_digraph();
    let p = count_pf(&fig3(Orientation::Sink), 2).unwrap();
    let q = count_pf(&fig3(Orientation::Source), 2).unwrap();
    ensure((p.clone(), q.clone()) == (15u32.into(), 14u32.into()), format!("figure 3 gives {p} and {q}"))?;

    // Figure 4
    let fig4 = RootedTree::from_parents(6, vec![2, 3, 5, 5, 6, 0], Orientation::Sink).unwrap();
    let out = tau(&fig4, &seq(&[1, 4, 4, 2, 1, 3])).map_err(|e| e.to_string())?;
    ensure(out.permutation.to_string() == "(15)(23)(46)", format!("tau = {}", out.permutation))?;
    let blocks: Vec<BTreeSet<usize>> = out.paths.iter().map(|p| p.vertices.iter().copied().collect()).collect();
    let want: Vec<BTreeSet<usize>> = vec![[1, 2, 3, 5].into(), [4, 6].into()];
    ensure(blocks == want, format!("leaf paths {blocks:?}"))?;
    ensure(out.seq == seq(&[5, 6, 6, 3, 5, 2]), format!("tau(s) = {}", out.seq))?;

    // Figure 6
    let x = MarkedSourceTreePF { tree: fig2_tree, seq: s2, mark: 5 };
    let out = psi(&x).map_err(|e| e.to_string())?;
    ensure(out.mapping == fig2_map, format!("psi gives {:?}", out.mapping.image()))?;
    let a: BTreeSet<usize> = out.a.iter().copied().collect();
    let b: BTreeSet<usize> = out.b.iter().copied().collect();
    ensure(a == [1, 3, 4, 5].into() && b == [1, 3, 5].into(), format!("A={a:?} B={b:?}"))?;

    Ok("figures 1, 2, 3, 4 and 6 reproduced".into())
}

fn identities(sweeps: &Sweeps) -> Check {
    sweeps.require(Identity::TildeNm)?;
    sweeps.require(Identity::SinkNm)?;
    let (_, t1) = sweeps.get(Identity::TildeNm);
    let (_, t2) = sweeps.get(Identity::SinkNm);
    within(t1 + t2, Duration::from_secs(300))?;
    let (r, _) = sweeps.get(Identity::TildeNm);
    let top = r.rows.iter().find(|r| r.n == 4 && r.m == 4).unwrap();
    Ok(format!(
        "both identities for 0 <= m <= n <= 4 on {} workers in {:?}; 4 * F~(4,4) = {} = M~(4,4)",
        sweeps.workers,
        t1 + t2,
        top.lhs
    ))
}

fn tree_inequality(sweeps: &Sweeps) -> Check {
    sweeps.require(Identity::TreeInequality)?;
    let (r, _) = sweeps.get(Identity::TreeInequality);
    let pairs: Vec<String> = r.rows.iter().map(|r| format!("{}<={}", r.lhs, r.rhs)).collect();
    Ok(format!("every sink tree n <= 4, equality only on paths; F vs F~: {}", pairs.join(", ")))
}

fn extremal_bounds(sweeps: &Sweeps) -> Check {
    sweeps.require(Identity::ExtremalBounds)?;
    sweeps.require(Identity::MappingBounds)?;
    Ok("source trees between star and path, mappings between m! and n^m, n <= 4".into())
}

fn round_trips(sweeps: &Sweeps) -> Check {
    sweeps.require(Identity::TauRoundTrip)?;
    sweeps.require(Identity::PsiRoundTrip)?;
    let (tr, t1) = sweeps.get(Identity::TauRoundTrip);
    let (pr, t2) = sweeps.get(Identity::PsiRoundTrip);
    within(t1 + t2, Duration::from_secs(600))?;
    let tau_checked: u64 = tr.rows.iter().map(|r| r.checked).sum();
    let psi_checked: u64 = pr.rows.iter().map(|r| r.checked).sum();
    Ok(format!("tau {tau_checked} inputs, psi and its extension {psi_checked} inputs, all round-trip"))
}

fn lemma_cycles() -> Check {
    let report = verify_identity(Identity::DeletableCycles, 1..=4, None, &SweepOptions::default())
        .map_err(|e| e.to_string())?;
    let checked: u64 = report.rows.iter().map(|r| r.checked).sum();
    let failures: u64 = report.rows.iter().map(|r| r.failures).sum();
    ensure(failures == 0, format!("{failures} parking functions with a cycle lacking a deletable edge"))?;
    Ok(format!("{checked} inverse-mapping parking functions, 0 violations"))
}

fn oracle_equivalence() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0f_d16a);
    let trials = 20_000;
    let mut positives = 0;
    for trial in 0..trials {
        let n = rng.gen_range(1..=4);
        let p = [0.0, 0.1, 0.2, 0.35][rng.gen_range(0..4)];
        let d = common::random_digraph(&mut rng, n, p);
        let m = if rng.gen_bool(0.6) { n } else { rng.gen_range(0..=n) };
        let s = common::random_sequence(&mut rng, n, m);
        let expect = common::process_parks(&d, s.as_slice());
        let got = is_parking_function(&d, &s).unwrap();
        ensure(got == expect, format!("trial {trial}: {d:?} s={s} checker={got} process={expect}"))?;
        if got {
            positives += 1;
            let o = parking_schedule(&d, &s).unwrap().ok_or(format!("trial {trial}: no schedule"))?;
            ensure(replay_validate(&d, &s, &o), format!("trial {trial}: schedule does not replay"))?;
        } else {
            let w = hall_witness(&d, &s).unwrap().ok_or(format!("trial {trial}: no Hall violator"))?;
            let reach = d.reachable_from_set(w.b.iter().copied()).unwrap();
            let demand = s.as_slice().iter().filter(|&&v| reach.contains(v)).count();
            ensure(reach == w.reach && demand > reach.len(), format!("trial {trial}: bad violator {w:?}"))?;
        }
    }
    Ok(format!("{trials} random instances ({positives} parking functions), 0 disagreements"))
}

fn catalan() -> Check {
    let got: Vec<BigUint> = (1..=5).map(|n| count_distributions(&Digraph::path(n), n).unwrap()).collect();
    let want: Vec<BigUint> = [1u32, 2, 5, 14, 42].into_iter().map(BigUint::from).collect();
    ensure(got == want, format!("distributions on paths: {got:?}"))?;
    Ok("1, 2, 5, 14, 42".into())
}

fn determinism(many: &Sweeps) -> Check {
    let one = Sweeps::run(1)?;
    for ((identity, a, _), (_, b, _)) in one.reports.iter().zip(&many.reports) {
        ensure(a == b, format!("{identity} differs between 1 and {} workers", many.workers))?;
    }
    Ok(format!("criteria 3 to 6 identical at 1 and {} workers", many.workers))
}

fn main() -> ExitCode {
    let workers = std::thread::available_parallelism().map_or(4, usize::from).max(4);
    let started = Instant::now();
    let sweeps = Sweeps::run(workers);

    let shared = |f: fn(&Sweeps) -> Check| -> Check {
        match &sweeps {
            Ok(s) => f(s),
            Err(e) => Err(format!("sweep failed: {e}")),
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("classical counts", Box::new(classical_counts)),
        ("figure reproduction", Box::new(figures)),
        ("tree/mapping identities", Box::new(move || shared(identities))),
        ("tree inequality", Box::new(move || shared(tree_inequality))),
        ("extremal bounds", Box::new(move || shared(extremal_bounds))),
        ("bijection round-trips", Box::new(move || shared(round_trips))),
        ("deletable cycle edges", Box::new(lemma_cycles)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("catalan distributions", Box::new(catalan)),
        ("determinism across workers", Box::new(move || shared(determinism))),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name}: {detail} ({:.2?})", i + 1, t.elapsed());
    }
    println!("acceptance: {} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), started.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

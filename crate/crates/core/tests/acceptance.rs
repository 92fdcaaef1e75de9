//! Acceptance criteria, one line per criterion.
//!
//! Run with `cargo test -p party-approval --test acceptance`. Exits nonzero
//! if any criterion fails or exceeds its time budget.

mod common;

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use party_approval::axioms::{
    check_committee_monotonic, check_core_bruteforce, check_ejr, check_pjr_bruteforce, check_pjr_mincut,
};
use party_approval::instances::{
    connected_graphs, cubic_graphs, paper_example, random_election, reduce_is_to_maxphragmen, reduce_is_to_pav, verify,
    BallotModel,
};
use party_approval::portioning::{conditional_utilitarian, majoritarian, nash, random_priority, RandomPriorityMode};
use party_approval::rules::{
    ls_pav_epsilon, ls_pav_run, ls_pav_swap_budget, max_load, max_phragmen_bruteforce, pav_exact, pav_score, seq_pav,
    MAX_LOAD_TOLERANCE,
};
use party_approval::{Committee, Election, Rational, Rule, SearchConfig, Witness};

type Outcome = Result<String, String>;

type Criterion = (u32, &'static str, Duration, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: party_approval::Error) -> String {
    e.to_string()
}

fn rule(name: &str) -> Rule {
    name.parse().expect("registered rule")
}

fn examples(ids: &[&str], cfg: &SearchConfig) -> Outcome {
    let mut checks = 0;
    for id in ids {
        let ex = paper_example(id, None).map_err(err)?;
        for check in verify(&ex, cfg).map_err(err)? {
            ensure(check.pass, format!("{id}: {} ({})", check.description, check.detail))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} expectations"))
}

fn ratios(list: &[(i64, i64)]) -> Vec<Rational> {
    list.iter().map(|&(a, b)| Rational::new(a.into(), b.into())).collect()
}

fn criterion_1(cfg: &SearchConfig) -> Outcome {
    let e = paper_example("ex1", None).map_err(err)?.election;
    let shares = conditional_utilitarian(&e);
    ensure(
        shares.as_exact() == Some(&ratios(&[(4, 6), (1, 6), (1, 6), (0, 1)])[..]),
        "cu shares",
    )?;
    let w = rule("cu+dhondt").apply(&e, cfg).map_err(err)?;
    ensure(w.seats() == [4, 1, 1, 0], format!("committee {:?}", w.seats()))?;
    let verdict = check_ejr(&e, &w).map_err(err)?;
    match verdict.witness {
        Some(Witness::Cohesive { party: 3, level: 2, .. }) if !verdict.pass => Ok("EJR witness (p3, ℓ=2)".into()),
        other => Err(format!("unexpected EJR verdict {other:?}")),
    }
}

fn criterion_2(cfg: &SearchConfig) -> Outcome {
    let e = paper_example("ex2", None).map_err(err)?.election;
    let rp = random_priority(&e, RandomPriorityMode::Exact).map_err(err)?;
    ensure(
        rp.as_exact() == Some(&ratios(&[(23, 45), (23, 90), (7, 60), (7, 60)])[..]),
        "rp shares",
    )?;
    let shares = nash(&e, 1e-9).map_err(err)?.to_f64();
    for (got, want) in shares.iter().zip([0.5302, 0.2651, 0.1023, 0.1023]) {
        ensure((got - want).abs() <= 1e-3, format!("nash shares {shares:?}"))?;
    }
    for name in ["rp+dhondt", "rp+quota", "nash+dhondt", "nash+quota"] {
        let w = rule(name).apply(&e, cfg).map_err(err)?;
        ensure(w.seats() == [4, 2, 0, 0], format!("{name} gives {:?}", w.seats()))?;
    }
    Ok(format!("nash {shares:.4?}"))
}

fn criterion_3(cfg: &SearchConfig) -> Outcome {
    let e = paper_example("ex3", None).map_err(err)?.election;
    ensure(
        majoritarian(&e).as_exact() == Some(&ratios(&[(1, 2), (0, 1), (1, 4), (0, 1), (1, 4)])[..]),
        "maj shares",
    )?;
    let w = rule("maj+dhondt").apply(&e, cfg).map_err(err)?;
    ensure(w.seats() == [8, 0, 4, 0, 4], format!("committee {:?}", w.seats()))?;
    let verdict = check_core_bruteforce(&e, &w, cfg).map_err(err)?;
    let detail = match &verdict.witness {
        Some(Witness::Deviation { coalition, deviation }) if !verdict.pass => {
            let s: u64 = coalition.iter().map(|&(_, m)| m).sum();
            ensure(
                s == 14 && deviation.size() == 14,
                format!("|S| = {s}, |T| = {}", deviation.size()),
            )?;
            format!("core witness |S| = 14, T = {:?}", deviation.seats())
        }
        other => return Err(format!("unexpected core verdict {other:?}")),
    };
    for name in ["pav", "lspav"] {
        let w = rule(name).apply(&e, cfg).map_err(err)?;
        ensure(
            check_core_bruteforce(&e, &w, cfg).map_err(err)?.pass,
            format!("{name} not in the core"),
        )?;
    }
    Ok(detail)
}

fn criterion_7(cfg: &SearchConfig) -> Outcome {
    let mods = [
        BallotModel::UniformSubset { density: 0.3 },
        BallotModel::UniformSubset { density: 0.6 },
        BallotModel::Clustered {
            clusters: 3,
            noise: 0.2,
        },
        BallotModel::DisjointBlocks { blocks: 1 },
    ];
    let methods = [rule("maj+dhondt"), rule("maj+quota")];
    for seed in 0..1000u64 {
        let n = 1 + seed % 30;
        let parties = 1 + (seed / 30) as usize % 8;
        let k = 1 + (seed * 7 / 11) as usize % 12;
        let e = random_election(seed, n, parties, k, mods[seed as usize % mods.len()]).map_err(err)?;
        for r in &methods {
            let w = r.apply(&e, cfg).map_err(err)?;
            ensure(
                check_ejr(&e, &w).map_err(err)?.pass,
                format!("{r} fails EJR on seed {seed}"),
            )?;
            if seed % 5 == 0 {
                let verdict = check_committee_monotonic(r, &e, 12, cfg).map_err(err)?;
                ensure(verdict.pass, format!("{r} not monotone on seed {seed}"))?;
            }
        }
    }
    Ok("1000 elections, 200 monotonicity runs".into())
}

fn criterion_8(cfg: &SearchConfig) -> Outcome {
    let mut count = 0;
    for i in 0..512u64 {
        let e = common::sweep_instance(i, 8, 4, 4);
        let optimum = pav_exact(&e, cfg).map_err(err)?;
        let run = ls_pav_run(&e);
        for (name, w) in [("pav", &optimum), ("lspav", &run.committee)] {
            ensure(
                check_core_bruteforce(&e, w, cfg).map_err(err)?.pass,
                format!("{name} not in the core on #{i}"),
            )?;
        }
        let (best, ls, seq) = (
            pav_score(&e, &optimum),
            pav_score(&e, &run.committee),
            pav_score(&e, &seq_pav(&e)),
        );
        ensure(ls >= seq, format!("lspav below seqpav on #{i}"))?;
        ensure(ls <= best, format!("lspav above the optimum on #{i}"))?;
        if e.k() >= 2 {
            let slack = ls_pav_epsilon(e.k()) * Rational::from_integer(ls_pav_swap_budget(&e));
            ensure(&best - &ls <= slack, format!("lspav gap on #{i}"))?;
        }
        count += 1;
    }
    Ok(format!("{count} instances"))
}

fn committees_to_audit(e: &Election, i: u64, cfg: &SearchConfig) -> Result<Vec<Committee>, String> {
    let mut out = Vec::new();
    for name in ["seqpav", "av", "greedyav", "cu+dhondt"] {
        out.push(rule(name).apply(e, cfg).map_err(err)?);
    }
    let all = common::all_committees(e.num_parties(), e.k());
    out.push(all[(i as usize * 7919) % all.len()].clone());
    Ok(out)
}

fn criterion_9(cfg: &SearchConfig) -> Outcome {
    let mut comparisons = 0;
    let mut failing = 0;
    for i in 0..500u64 {
        let e = common::sweep_instance(i, 14, 5, 6);
        for w in committees_to_audit(&e, i, cfg)? {
            let mincut = check_pjr_mincut(&e, &w).map_err(err)?.pass;
            let brute = check_pjr_bruteforce(&e, &w).map_err(err)?.pass;
            ensure(mincut == brute, format!("PJR disagreement on #{i} for {:?}", w.seats()))?;
            let ejr = check_ejr(&e, &w).map_err(err)?.pass;
            ensure(
                ejr == common::ejr_by_definition(&e, &w),
                format!("EJR disagreement on #{i} for {:?}", w.seats()),
            )?;
            failing += usize::from(!mincut) + usize::from(!ejr);
            comparisons += 1;
        }
    }
    Ok(format!(
        "{comparisons} committees, {failing} violations found, 0 discrepancies"
    ))
}

fn criterion_10(cfg: &SearchConfig) -> Outcome {
    let mut pav_cases = 0;
    // the single-vertex graph has no edges and so no voters
    for v in 2..=6 {
        for g in connected_graphs(v) {
            for t in 1..=v {
                let (e, threshold) = reduce_is_to_pav(&g, t).map_err(err)?;
                let reached = pav_score(&e, &pav_exact(&e, cfg).map_err(err)?) >= threshold;
                ensure(
                    reached == common::independent_set_exists(&g, t),
                    format!("PAV mismatch, t = {t}, {g:?}"),
                )?;
                pav_cases += 1;
            }
        }
    }
    let mut load_cases = 0;
    for v in [4, 6, 8] {
        for g in cubic_graphs(v) {
            for t in 1..=v {
                let (e, bound) = reduce_is_to_maxphragmen(&g, t).map_err(err)?;
                let w = max_phragmen_bruteforce(&e, cfg).map_err(err)?;
                let load = max_load(&e, &w).ok_or("no load distribution")?;
                let within = load <= bound.to_f64().unwrap() + MAX_LOAD_TOLERANCE;
                ensure(
                    within == common::independent_set_exists(&g, t),
                    format!("load mismatch, t = {t}, {g:?}"),
                )?;
                load_cases += 1;
            }
        }
    }
    Ok(format!("{pav_cases} PAV cases, {load_cases} MaxPhragmén cases"))
}

fn main() {
    let cfg = SearchConfig::default();
    let criteria: [Criterion; 10] = [
        (
            1,
            "example 1 golden",
            Duration::from_millis(1),
            Box::new(move || criterion_1(&cfg)),
        ),
        (
            2,
            "example 2 golden",
            Duration::from_secs(1),
            Box::new(move || criterion_2(&cfg)),
        ),
        (
            3,
            "example 3 golden",
            Duration::from_secs(10),
            Box::new(move || criterion_3(&cfg)),
        ),
        (
            4,
            "seqphragmen table and EJR failure",
            Duration::from_secs(5),
            Box::new(move || examples(&["seqphragmen-table", "seqphragmen-ejr"], &cfg)),
        ),
        (
            5,
            "phragmen-stv table and EJR failure",
            Duration::from_secs(5),
            Box::new(move || examples(&["stv-table", "stv-ejr"], &cfg)),
        ),
        (
            6,
            "negative results",
            Duration::from_secs(30),
            Box::new(move || examples(&["av-jr", "mav-jr", "seqpav-jr", "greedyav-pjr", "monroe-pjr"], &cfg)),
        ),
        (
            7,
            "majoritarian compositions: EJR and monotonicity",
            Duration::from_secs(60),
            Box::new(move || criterion_7(&cfg)),
        ),
        (
            8,
            "PAV and LS-PAV in the core",
            Duration::from_secs(300),
            Box::new(move || criterion_8(&cfg)),
        ),
        (
            9,
            "checker oracle equivalence",
            Duration::from_secs(120),
            Box::new(move || criterion_9(&cfg)),
        ),
        (
            10,
            "reduction round trip",
            Duration::from_secs(300),
            Box::new(move || criterion_10(&cfg)),
        ),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > *budget => ("FAIL", format!("took {elapsed:?}, budget {budget:?}")),
            Ok(detail) => ("PASS", detail),
            Err(reason) => ("FAIL", reason),
        };
        failed += usize::from(status == "FAIL");
        println!("criterion {id:>2} {status} {elapsed:>12.3?}  {name}: {detail}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.
//!
//! cargo test --release -p tagnav --test acceptance

mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{build, explore, ids, labelled, random_table, scan_cloud};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tagnav::bench::{self, generate_workload, run_engine, Op, OpKind, WorkloadSpec};
use tagnav::dfa::DEFAULT_STATE_LIMIT;
use tagnav::{
    adversarial, fixtures, ingest, Dfa, Engine, Error, InvertedIndex, Library, NdAutomaton,
    Session,
};

type Verdict = Result<String, String>;

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut steps = 0;
    for i in 0..200 {
        let table = random_table(&mut rng, 64, 16);
        let c = build(&table);
        let dfa = Dfa::build(&c, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?;
        let mut nd = NdAutomaton::build(&c);
        let mut inv = InvertedIndex::build(&c);
        steps += explore(&c, &dfa, &mut nd, &mut inv, 4)
            .map_err(|e| format!("collection {i}: {e}"))?;
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("{steps} states compared in {elapsed:.1?}, over 60s"));
    }
    Ok(format!("200 collections, {steps} states, 0 mismatches, {elapsed:.1?}"))
}

fn induced_cloud_law() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let table = random_table(&mut rng, 32, 12);
        let c = build(&table);
        let docs = c.docs();
        let k = rng.random_range(1..=docs.len());
        let mut scope: Vec<_> = docs.choose_multiple(&mut rng, k).copied().collect();
        scope.sort();
        let names = ids(&c, &scope);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let got = labelled(&c, &c.induced_cloud(&scope).map_err(|e| e.to_string())?);
        let mut expect = BTreeMap::new();
        for t in 0..c.vocabulary_size() {
            let label = c.tag(tagnav::TagId(t as u32)).to_string();
            let hits = table
                .iter()
                .filter(|(id, tags)| refs.contains(&id.as_str()) && tags.contains(&label))
                .count();
            if 0 < hits && hits < scope.len() {
                expect.insert(label, hits as u32);
            }
        }
        if got != expect || got != scan_cloud(&table, &refs) {
            return Err(format!("pair {i}: {got:?} != {expect:?}"));
        }
    }
    Ok("1000 (collection, scope) pairs, 0 mismatches".into())
}

fn worst_case_formula() -> Verdict {
    for n in 2..=10 {
        let states = Dfa::build(&adversarial(n), DEFAULT_STATE_LIMIT)
            .map_err(|e| e.to_string())?
            .count_states();
        if states != (1 << n) - 1 {
            return Err(format!("n = {n}: {states} states"));
        }
    }
    Ok("2^n - 1 states for n = 2..10".into())
}

fn replay<E: Engine>(lib: &mut Library<E>, crumbs: &[tagnav::TagId]) {
    let mut s = Session::open(lib).unwrap();
    for &t in crumbs {
        s.select_id(lib, t).unwrap();
    }
}

fn laminar_bound() -> Verdict {
    let mut largest = 0;
    for seed in 1..=3 {
        let spec = WorkloadSpec::synthetic(1000, seed);
        let mut out = run_engine::<NdAutomaton>(&spec).map_err(|e| e.to_string())?;
        let n = out.library.collection().len();
        let nodes = out.library.engine().node_count();
        if nodes > 2 * n - 1 {
            return Err(format!("seed {seed}: {nodes} nodes for n = {n}"));
        }
        out.library
            .engine()
            .validate(out.library.collection())
            .map_err(|e| format!("seed {seed}: {e}"))?;
        largest = largest.max(nodes);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut paths = Vec::new();
        for _ in 0..50 {
            let mut s = Session::open(&out.library).unwrap();
            for _ in 0..rng.random_range(1..6) {
                let Some(e) = s.cloud().entries().choose(&mut rng).copied() else {
                    break;
                };
                s.select_id(&mut out.library, e.tag).unwrap();
            }
            paths.push(s.breadcrumb().to_vec());
        }
        let before = out.library.engine().node_count();
        for p in &paths {
            replay(&mut out.library, p);
        }
        if out.library.engine().node_count() != before {
            return Err(format!("seed {seed}: replay created nodes"));
        }
    }
    Ok(format!("3 workloads of 1000 resources, at most {largest} nodes, replays add 0"))
}

fn fig1_walkthrough_on<E: Engine>() -> Result<(), String> {
    let mut lib = Library::<E>::from_collection(fixtures::fig1());
    let mut s = Session::open(&lib).map_err(|e| e.to_string())?;
    let steps: [(&str, &[&str], &[(&str, u32)]); 3] = [
        (
            "Prehistoric",
            &["R1", "R2", "R3"],
            &[("Cantabrian", 2), ("Cave-Painting", 2), ("Levant", 1), ("Megalithic", 1)],
        ),
        ("Cantabrian", &["R1", "R3"], &[("Cave-Painting", 1), ("Megalithic", 1)]),
        ("Cave-Painting", &["R1"], &[]),
    ];
    for (tag, resources, cloud) in steps {
        s.select(&mut lib, tag).map_err(|e| e.to_string())?;
        let c = lib.collection();
        let got = ids(c, &s.visit_all(&lib).map_err(|e| e.to_string())?);
        if got != resources {
            return Err(format!("after {tag}: {got:?}"));
        }
        let got: Vec<(String, u32)> = s.cloud().ranked(c).iter().map(|(t, n)| (t.to_string(), *n)).collect();
        let expect: Vec<(String, u32)> = cloud.iter().map(|(t, n)| (t.to_string(), *n)).collect();
        if got != expect {
            return Err(format!("cloud after {tag}: {got:?}"));
        }
    }
    if !s.is_terminal() {
        return Err("final state is not terminal".into());
    }
    Ok(())
}

fn fig1_walkthrough() -> Verdict {
    fig1_walkthrough_on::<NdAutomaton>().map_err(|e| format!("automaton: {e}"))?;
    fig1_walkthrough_on::<InvertedIndex>().map_err(|e| format!("inverted: {e}"))?;
    Ok("3 -> 2 -> 1 resources, clouds 4 -> 2 -> 0, terminal".into())
}

/// Seconds spent on insert and browse operations.
fn browse_insert_seconds(records: &[bench::BenchRecord]) -> f64 {
    let mut last = 0.0;
    let mut total = 0.0;
    for r in records {
        if r.op_kind != OpKind::Reconfig {
            total += r.cumulative_seconds - last;
        }
        last = r.cumulative_seconds;
    }
    total
}

fn benchmark_trend() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in 1..=3 {
        let spec = WorkloadSpec::synthetic(5000, seed);
        let a = browse_insert_seconds(&bench::run(&spec, "automaton").map_err(|e| e.to_string())?);
        let i = browse_insert_seconds(&bench::run(&spec, "inverted").map_err(|e| e.to_string())?);
        ok &= a < i;
        lines.push(format!("seed {seed}: automaton {a:.3}s vs inverted {i:.3}s"));
    }
    let summary = lines.join("; ");
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn workload_protocol() -> Verdict {
    for (n, seed) in [(5000, 1), (250, 42), (300, 9)] {
        let spec = WorkloadSpec::synthetic(n, seed);
        let ops = generate_workload(&spec).map_err(|e| e.to_string())?;
        if ops != generate_workload(&spec).map_err(|e| e.to_string())? {
            return Err(format!("n = {n}: not reproducible"));
        }
        let mut at = 0;
        let mut inserted = 0;
        while inserted < n {
            let round = 100.min(n - inserted);
            for k in 0..round {
                if ops.get(at + k) != Some(&Op::Insert(inserted + k)) {
                    return Err(format!("n = {n}: round at {inserted} is not {round} insertions"));
                }
            }
            at += round;
            inserted += round;
            let rest = inserted / 10 + inserted / 100;
            let tail = ops.get(at..at + rest).ok_or("sequence too short")?;
            let browse = tail.iter().filter(|o| **o == Op::Browse).count();
            let reconfig = tail.iter().filter(|o| **o == Op::Reconfig).count();
            if browse != inserted / 10 || reconfig != inserted / 100 {
                return Err(format!("n = {n}: round at {inserted} has {browse}/{reconfig}"));
            }
            at += rest;
        }
        if at != ops.len() {
            return Err(format!("n = {n}: {} trailing ops", ops.len() - at));
        }
    }
    let a = generate_workload(&WorkloadSpec::synthetic(1000, 1)).map_err(|e| e.to_string())?;
    let b = generate_workload(&WorkloadSpec::synthetic(1000, 2)).map_err(|e| e.to_string())?;
    if a == b {
        return Err("different seeds gave the same interleaving".into());
    }
    Ok("rounds of 100, floor(0.1n) browse + floor(0.01n) reconfig, reproducible".into())
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn expected_error(name: &str, err: &Error) -> bool {
    match name.split('_').next().unwrap_or_default() {
        "parse" => matches!(err, Error::Parse { .. }),
        "unsupported" => matches!(err, Error::UnsupportedVersion(_)),
        "duplicate" if name.contains("category") => matches!(err, Error::DuplicateCategoryTag(_)),
        "duplicate" => matches!(err, Error::DuplicateResource(_)),
        "empty" if name.contains("tag") => matches!(err, Error::EmptyTag),
        "empty" => matches!(err, Error::EmptyId),
        "unknown" => matches!(err, Error::UnknownCategoryTag(_)),
        _ => false,
    }
}

fn ingest_round_trip() -> Verdict {
    let fig1 = fixture_dir().join("fig1.json");
    let text = std::fs::read_to_string(&fig1).map_err(|e| e.to_string())?;
    let loaded = ingest::load(&fig1).map_err(|e| e.to_string())?;
    if ingest::to_json(&loaded) != text {
        return Err("fig1.json is not a fixed point of load then save".into());
    }
    if ingest::to_json(&loaded) != ingest::to_json(&fixtures::fig1_with_categories()) {
        return Err("fig1.json differs from the built-in fixture".into());
    }
    for c in [fixtures::fig1(), adversarial(6)] {
        let once = ingest::to_json(&c);
        let twice = ingest::to_json(&ingest::load_str(&once).map_err(|e| e.to_string())?);
        if once != twice {
            return Err("round trip changed a fixture".into());
        }
    }

    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir().join("malformed"))
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    files.sort();
    if files.len() < 10 {
        return Err(format!("only {} malformed files", files.len()));
    }
    for path in &files {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        match ingest::load(path) {
            Ok(_) => return Err(format!("{name} was accepted")),
            Err(e) if !expected_error(&name, &e) => return Err(format!("{name}: unexpected {e:?}")),
            Err(_) => {}
        }
    }
    Ok(format!("fig1 fixed point, {} malformed files rejected with typed errors", files.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("induced-cloud law", induced_cloud_law),
        ("worst-case formula", worst_case_formula),
        ("laminar bound", laminar_bound),
        ("sample walkthrough", fig1_walkthrough),
        ("benchmark trend", benchmark_trend),
        ("workload protocol", workload_protocol),
        ("ingest round-trip", ingest_round_trip),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name:<20} {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<20} {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

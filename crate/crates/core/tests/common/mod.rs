#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, RngCore};
use tagnav::{Collection, DocId, Dfa, Engine, TagCloud, TagId};

/// Resource annotations as plain labels, in insertion order.
pub type Table = Vec<(String, Vec<String>)>;

pub fn build(table: &Table) -> Collection {
    let mut c = Collection::new();
    for (id, tags) in table {
        c.add_resource(id, tags).unwrap();
    }
    c
}

pub fn table_strategy(max_resources: usize, max_tags: usize) -> impl Strategy<Value = Table> {
    let row = proptest::collection::btree_set(0..max_tags, 0..=max_tags.min(5));
    proptest::collection::vec(row, 1..=max_resources).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, tags)| {
                (
                    format!("r{i}"),
                    tags.into_iter().map(|t| format!("t{t}")).collect(),
                )
            })
            .collect()
    })
}

/// A collection of `1..=max_resources` resources over at most `max_tags`
/// tags, each tag attached with a per-collection density.
pub fn random_table(rng: &mut impl RngCore, max_resources: usize, max_tags: usize) -> Table {
    let n = rng.random_range(1..=max_resources);
    let vocabulary = rng.random_range(1..=max_tags);
    let density = rng.random_range(0.1..0.6);
    (0..n)
        .map(|i| {
            let tags = (0..vocabulary)
                .filter(|_| rng.random_bool(density))
                .map(|t| format!("t{t}"))
                .collect();
            (format!("r{i}"), tags)
        })
        .collect()
}

/// Induced cloud by label, counted straight from the table.
pub fn scan_cloud(table: &Table, ids: &[&str]) -> BTreeMap<String, u32> {
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    for (id, tags) in table {
        if ids.contains(&id.as_str()) {
            let mut seen: Vec<&String> = tags.iter().collect();
            seen.sort();
            seen.dedup();
            for t in seen {
                *counts.entry(t.clone()).or_default() += 1;
            }
        }
    }
    counts.retain(|_, n| (*n as usize) < ids.len());
    counts
}

pub fn labelled(c: &Collection, cloud: &TagCloud) -> BTreeMap<String, u32> {
    cloud.iter().map(|e| (c.tag(e.tag).to_string(), e.count)).collect()
}

pub fn ids(c: &Collection, docs: &[DocId]) -> Vec<String> {
    docs.iter()
        .map(|&d| c.resource(d).unwrap().id.to_string())
        .collect()
}

/// Cloud of a DFA state, read off its outgoing transitions.
pub fn dfa_cloud(dfa: &Dfa, state: tagnav::dfa::StateId) -> TagCloud {
    TagCloud::from_entries(
        dfa.state(state)
            .transitions()
            .map(|(tag, to)| tagnav::CloudEntry {
                tag,
                count: dfa.state(to).resources().len() as u32,
            })
            .collect(),
    )
}

/// Walks every feasible selection sequence up to `depth` in lockstep on
/// both engines and the DFA, and returns the number of steps compared.
pub fn explore<A: Engine, B: Engine>(
    c: &Collection,
    dfa: &Dfa,
    a: &mut A,
    b: &mut B,
    depth: usize,
) -> Result<usize, String> {
    fn go<A: Engine, B: Engine>(
        c: &Collection,
        dfa: &Dfa,
        a: &mut A,
        b: &mut B,
        sa: &A::State,
        sb: &B::State,
        sd: tagnav::dfa::StateId,
        path: &mut Vec<TagId>,
        depth: usize,
    ) -> Result<usize, String> {
        let ra = a.resources(sa);
        let rb = b.resources(sb);
        let rd = dfa.state(sd).resources();
        if ra != rb || ra != rd {
            return Err(format!("resources differ after {path:?}"));
        }
        let ca = a.cloud(c, sa);
        let cb = b.cloud(c, sb);
        let cd = dfa_cloud(dfa, sd);
        if ca != cb || ca != cd {
            return Err(format!("clouds differ after {path:?}"));
        }
        if path.len() == depth {
            return Ok(1);
        }
        let mut steps = 1;
        for e in ca.iter() {
            let na = a.select(c, sa, e.tag).map_err(|err| err.to_string())?;
            let nb = b.select(c, sb, e.tag).map_err(|err| err.to_string())?;
            let nd = dfa
                .select(sd, e.tag)
                .ok_or_else(|| format!("dfa lacks {:?} after {path:?}", e.tag))?;
            path.push(e.tag);
            steps += go(c, dfa, a, b, &na, &nb, nd, path, depth)?;
            path.pop();
        }
        Ok(steps)
    }
    let sa = a.initial(c);
    let sb = b.initial(c);
    go(c, dfa, a, b, &sa, &sb, dfa.initial(), &mut Vec::new(), depth)
}

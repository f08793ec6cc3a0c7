//! Interleaved insertion / browsing / reconfiguration workload and the
//! cumulative-time runner that compares engines on it.
//!
//! Resources are inserted in rounds (100 by default, the last round takes
//! the remainder). After each round, with `n` resources inserted so far,
//! `⌊0.1·n⌋` browse operations and `⌊0.01·n⌋` category moves are shuffled
//! together and executed. A browse operation selects a uniformly random tag
//! of the current cloud (or resets to the initial state when the cloud is
//! empty) and then visits every selected resource.

use std::fs;
use std::hint::black_box;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};

use crate::automaton::NdAutomaton;
use crate::category::CategoryId;
use crate::engine::{Engine, Library};
use crate::error::{Error, Result};
use crate::ingest::{CategoryDocument, CollectionDocument, ResourceDocument, FORMAT_VERSION};
use crate::inverted::InvertedIndex;
use crate::session::Session;

pub const DEFAULT_ROUND_SIZE: usize = 100;
pub const DEFAULT_BROWSE_FACTOR: f64 = 0.1;
pub const DEFAULT_RECONFIG_FACTOR: f64 = 0.01;

/// Parameters of the seeded synthetic collection generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub resources: usize,
    pub vocabulary: usize,
    pub min_tags: usize,
    pub max_tags: usize,
    pub zipf_exponent: f64,
    pub categories: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            resources: 5000,
            vocabulary: 1000,
            min_tags: 2,
            max_tags: 8,
            zipf_exponent: 1.0,
            categories: 12,
            seed: 1,
        }
    }
}

impl SyntheticSpec {
    fn check(&self) -> Result<()> {
        if self.vocabulary == 0 && self.max_tags > 0 {
            return Err(Error::InvalidSpec("vocabulary must be positive".into()));
        }
        if self.min_tags > self.max_tags {
            return Err(Error::InvalidSpec("min_tags exceeds max_tags".into()));
        }
        if self.max_tags > self.vocabulary {
            return Err(Error::InvalidSpec("max_tags exceeds vocabulary".into()));
        }
        if !(self.zipf_exponent.is_finite() && self.zipf_exponent >= 0.0) {
            return Err(Error::InvalidSpec("zipf_exponent must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Generates the collection: Zipf-distributed tag popularity, a random
    /// category tree and round-robin tag-to-category assignment.
    pub fn generate(&self) -> Result<CollectionDocument> {
        self.check()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let label = |rank: usize| format!("tag{rank:04}");

        let mut used = vec![false; self.vocabulary];
        let mut resources = Vec::with_capacity(self.resources);
        if self.vocabulary > 0 {
            let zipf = Zipf::new(self.vocabulary as f64, self.zipf_exponent)
                .map_err(|e| Error::InvalidSpec(e.to_string()))?;
            for i in 0..self.resources {
                let k = rng.random_range(self.min_tags..=self.max_tags);
                let mut ranks = Vec::with_capacity(k);
                while ranks.len() < k {
                    let r = zipf.sample(&mut rng) as usize - 1;
                    if !ranks.contains(&r) {
                        ranks.push(r);
                    }
                }
                ranks.sort_unstable();
                for &r in &ranks {
                    used[r] = true;
                }
                resources.push(ResourceDocument {
                    id: format!("doc{i:05}"),
                    title: None,
                    uri: None,
                    tags: ranks.into_iter().map(label).collect(),
                });
            }
        } else {
            for i in 0..self.resources {
                resources.push(ResourceDocument {
                    id: format!("doc{i:05}"),
                    title: None,
                    uri: None,
                    tags: Vec::new(),
                });
            }
        }

        // parents[j] for category j + 1; category 0 is the root
        let parents: Vec<usize> = (1..=self.categories)
            .map(|j| rng.random_range(0..j))
            .collect();
        let slots = self.categories + 1;
        let mut assigned: Vec<Vec<String>> = vec![Vec::new(); slots];
        for (rank, _) in used.iter().enumerate().filter(|(_, u)| **u) {
            assigned[rank % slots].push(label(rank));
        }
        let categories = (self.categories > 0).then(|| {
            fn build(node: usize, parents: &[usize], assigned: &mut [Vec<String>]) -> CategoryDocument {
                let children = (1..=parents.len())
                    .filter(|&j| parents[j - 1] == node)
                    .map(|j| build(j, parents, assigned))
                    .collect();
                CategoryDocument {
                    name: if node == 0 { "root".into() } else { format!("cat{node}") },
                    tags: std::mem::take(&mut assigned[node]),
                    children,
                }
            }
            // root keeps the uncategorized bucket
            assigned[0].clear();
            build(0, &parents, &mut assigned)
        });

        Ok(CollectionDocument {
            format_version: FORMAT_VERSION,
            resources,
            categories,
            workload: None,
        })
    }
}

/// The `workload` object of a benchmark file. Missing fields take defaults;
/// without `synthetic` the file's own resources are replayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadDocument {
    pub insertion_round_size: usize,
    pub browse_factor: f64,
    pub reconfig_factor: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticSpec>,
}

impl Default for WorkloadDocument {
    fn default() -> Self {
        WorkloadDocument {
            insertion_round_size: DEFAULT_ROUND_SIZE,
            browse_factor: DEFAULT_BROWSE_FACTOR,
            reconfig_factor: DEFAULT_RECONFIG_FACTOR,
            seed: 42,
            synthetic: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Synthetic(SyntheticSpec),
    /// Resources and categories of a collection document.
    Document(CollectionDocument),
    /// A collection file, read when the run starts.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub source: Source,
    pub insertion_round_size: usize,
    pub browse_factor: f64,
    pub reconfig_factor: f64,
    pub seed: u64,
}

impl WorkloadSpec {
    pub fn synthetic(resources: usize, seed: u64) -> Self {
        WorkloadSpec {
            source: Source::Synthetic(SyntheticSpec {
                resources,
                seed,
                ..SyntheticSpec::default()
            }),
            insertion_round_size: DEFAULT_ROUND_SIZE,
            browse_factor: DEFAULT_BROWSE_FACTOR,
            reconfig_factor: DEFAULT_RECONFIG_FACTOR,
            seed,
        }
    }

    pub fn from_document(doc: CollectionDocument) -> Self {
        let w = doc.workload.clone().unwrap_or_default();
        let source = match w.synthetic {
            Some(s) => Source::Synthetic(s),
            None => Source::Document(CollectionDocument {
                workload: None,
                ..doc
            }),
        };
        WorkloadSpec {
            source,
            insertion_round_size: w.insertion_round_size,
            browse_factor: w.browse_factor,
            reconfig_factor: w.reconfig_factor,
            seed: w.seed,
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::from_document(CollectionDocument::read(path)?))
    }

    pub fn validate(&self) -> Result<()> {
        if self.insertion_round_size == 0 {
            return Err(Error::InvalidSpec("insertion_round_size must be >= 1".into()));
        }
        for (name, f) in [
            ("browse_factor", self.browse_factor),
            ("reconfig_factor", self.reconfig_factor),
        ] {
            if !(f.is_finite() && f >= 0.0) {
                return Err(Error::InvalidSpec(format!("{name} must be finite and >= 0")));
            }
        }
        if let Source::Synthetic(s) = &self.source {
            s.check()?;
        }
        Ok(())
    }

    /// The collection whose resources the workload inserts.
    pub fn materialize(&self) -> Result<CollectionDocument> {
        match &self.source {
            Source::Synthetic(s) => s.generate(),
            Source::Document(d) => Ok(d.clone()),
            Source::File(p) => CollectionDocument::read(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Insert,
    Browse,
    Reconfig,
}

impl OpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Insert => "insert",
            OpKind::Browse => "browse",
            OpKind::Reconfig => "reconfig",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Insert the source resource with this index.
    Insert(usize),
    Browse,
    Reconfig,
}

impl Op {
    pub fn kind(self) -> OpKind {
        match self {
            Op::Insert(_) => OpKind::Insert,
            Op::Browse => OpKind::Browse,
            Op::Reconfig => OpKind::Reconfig,
        }
    }
}

/// `⌊factor · n⌋`, tolerant of representation error just below an integer.
fn scaled(factor: f64, n: usize) -> usize {
    (factor * n as f64 + 1e-9).floor() as usize
}

/// Operation sequence for `total` source resources.
pub fn operations(spec: &WorkloadSpec, total: usize) -> Result<Vec<Op>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut ops = Vec::new();
    let mut inserted = 0;
    while inserted < total {
        let round = spec.insertion_round_size.min(total - inserted);
        ops.extend((inserted..inserted + round).map(Op::Insert));
        inserted += round;

        let mut mixed = vec![Op::Browse; scaled(spec.browse_factor, inserted)];
        mixed.extend(std::iter::repeat_n(
            Op::Reconfig,
            scaled(spec.reconfig_factor, inserted),
        ));
        mixed.shuffle(&mut rng);
        ops.extend(mixed);
    }
    Ok(ops)
}

/// Materializes the source and derives its operation sequence.
pub fn generate_workload(spec: &WorkloadSpec) -> Result<Vec<Op>> {
    spec.validate()?;
    let doc = spec.materialize()?;
    operations(spec, doc.resources.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub op_index: usize,
    pub engine: &'static str,
    pub op_kind: OpKind,
    pub cumulative_seconds: f64,
    pub n_resources: usize,
}

/// Runner for one engine. Browsing always happens through a [`Session`].
struct Runner<E: Engine> {
    lib: Library<E>,
    session: Option<Session<E::State>>,
    rng: ChaCha8Rng,
    sink: usize,
}

impl<E: Engine> Runner<E> {
    fn new(seed: u64, categories: Option<&CategoryDocument>) -> Result<Self> {
        let mut lib = Library::<E>::new();
        if let Some(root) = categories {
            let at = lib.collection().categories().root();
            add_categories(&mut lib, at, root)?;
        }
        Ok(Runner {
            lib,
            session: None,
            rng: ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_CAFE_F00D_D00D),
            sink: 0,
        })
    }

    fn apply(&mut self, op: Op, source: &[ResourceDocument]) -> Result<()> {
        match op {
            Op::Insert(i) => {
                let r = &source[i];
                self.lib.add_resource(&r.id, &r.tags)?;
            }
            Op::Browse => self.browse()?,
            Op::Reconfig => self.reconfigure()?,
        }
        Ok(())
    }

    fn browse(&mut self) -> Result<()> {
        if self.lib.collection().is_empty() {
            return Ok(());
        }
        let stale = self
            .session
            .as_ref()
            .is_none_or(|s| s.opened_at() != self.lib.collection().content_revision());
        if stale {
            self.session = Some(Session::open(&self.lib)?);
        }
        let session = self.session.as_mut().expect("opened above");
        match session.cloud().entries().choose(&mut self.rng) {
            Some(entry) => {
                let tag = entry.tag;
                session.select_id(&mut self.lib, tag)?;
            }
            None => session.reset(&self.lib)?,
        }
        for doc in session.visit_all(&self.lib)? {
            let r = self.lib.collection().resource(doc).expect("visited docs are live");
            self.sink = self.sink.wrapping_add(black_box(r.id.as_str().len()));
        }
        Ok(())
    }

    fn reconfigure(&mut self) -> Result<()> {
        let tree = self.lib.collection().categories();
        if tree.len() < 2 {
            return Ok(());
        }
        let movable: Vec<CategoryId> = tree.ids().filter(|&id| id != tree.root()).collect();
        let node = *movable.choose(&mut self.rng).expect("at least one non-root node");
        let targets: Vec<CategoryId> = tree.ids().filter(|&t| !tree.is_within(t, node)).collect();
        let target = *targets.choose(&mut self.rng).expect("the root is always a target");
        self.lib.move_category(node, target)
    }

    /// Current (resources, cloud) as seen by the session, if any.
    fn observe(&self) -> Option<(Vec<crate::model::DocId>, crate::model::TagCloud)> {
        let s = self.session.as_ref()?;
        if s.opened_at() != self.lib.collection().content_revision() {
            return None;
        }
        Some((
            s.visit_all(&self.lib).ok()?,
            self.lib.engine().cloud(self.lib.collection(), s.state()),
        ))
    }
}

fn add_categories<E: Engine>(
    lib: &mut Library<E>,
    at: CategoryId,
    doc: &CategoryDocument,
) -> Result<()> {
    for t in &doc.tags {
        lib.assign_category(at, t)?;
    }
    for child in &doc.children {
        let id = lib.add_category(at, &child.name)?;
        add_categories(lib, id, child)?;
    }
    Ok(())
}

/// Result of a timing run: per-operation records and the final library.
pub struct Outcome<E> {
    pub records: Vec<BenchRecord>,
    pub library: Library<E>,
}

/// Timing mode: one engine, no cross-checks.
pub fn run_engine<E: Engine>(spec: &WorkloadSpec) -> Result<Outcome<E>> {
    let doc = spec.materialize()?;
    let ops = operations(spec, doc.resources.len())?;
    let mut runner = Runner::<E>::new(spec.seed, doc.categories.as_ref())?;
    let name = runner.lib.engine().name();
    let mut records = Vec::with_capacity(ops.len());
    let mut cumulative = 0.0;
    for (op_index, &op) in ops.iter().enumerate() {
        let start = Instant::now();
        runner.apply(op, &doc.resources)?;
        cumulative += start.elapsed().as_secs_f64();
        records.push(BenchRecord {
            op_index,
            engine: name,
            op_kind: op.kind(),
            cumulative_seconds: cumulative,
            n_resources: runner.lib.collection().len(),
        });
    }
    black_box(runner.sink);
    Ok(Outcome {
        records,
        library: runner.lib,
    })
}

/// Timing run selected by engine name (`automaton` or `inverted`).
pub fn run(spec: &WorkloadSpec, engine: &str) -> Result<Vec<BenchRecord>> {
    match engine {
        "automaton" => Ok(run_engine::<NdAutomaton>(spec)?.records),
        "inverted" => Ok(run_engine::<InvertedIndex>(spec)?.records),
        other => Err(Error::InvalidSpec(format!("unknown engine `{other}`"))),
    }
}

/// Validation mode: both engines in lockstep. After every browse operation
/// the visited resources and clouds must agree; category moves must leave
/// the browse result untouched; the automaton's structure is checked after
/// every insertion round. Any breach aborts with [`Error::EngineFailure`].
pub fn run_validated(spec: &WorkloadSpec) -> Result<(Vec<BenchRecord>, Vec<BenchRecord>)> {
    let doc = spec.materialize()?;
    let ops = operations(spec, doc.resources.len())?;
    let mut auto = Runner::<NdAutomaton>::new(spec.seed, doc.categories.as_ref())?;
    let mut inv = Runner::<InvertedIndex>::new(spec.seed, doc.categories.as_ref())?;
    let mut records = (Vec::new(), Vec::new());
    let mut totals = (0.0, 0.0);

    for (op_index, &op) in ops.iter().enumerate() {
        let before = auto.observe();

        let start = Instant::now();
        auto.apply(op, &doc.resources)?;
        totals.0 += start.elapsed().as_secs_f64();
        let start = Instant::now();
        inv.apply(op, &doc.resources)?;
        totals.1 += start.elapsed().as_secs_f64();

        match op {
            Op::Browse => {
                let a = auto.observe();
                let b = inv.observe();
                if a != b {
                    return Err(Error::EngineFailure(format!(
                        "engines disagree after operation {op_index}"
                    )));
                }
            }
            Op::Reconfig => {
                if auto.observe() != before {
                    return Err(Error::EngineFailure(format!(
                        "category move at operation {op_index} changed browse results"
                    )));
                }
            }
            Op::Insert(i) => {
                let round_end = ops.get(op_index + 1).is_none_or(|o| !matches!(o, Op::Insert(_)));
                if round_end {
                    auto.lib
                        .engine()
                        .validate(auto.lib.collection())
                        .map_err(|e| Error::EngineFailure(format!("after insert {i}: {e}")))?;
                }
            }
        }

        let n = auto.lib.collection().len();
        for (out, total, name) in [
            (&mut records.0, totals.0, "automaton"),
            (&mut records.1, totals.1, "inverted"),
        ] {
            out.push(BenchRecord {
                op_index,
                engine: name,
                op_kind: op.kind(),
                cumulative_seconds: total,
                n_resources: n,
            });
        }
    }
    Ok(records)
}

pub const CSV_HEADER: &str = "op_index,engine,op_kind,cumulative_seconds,n_resources";

pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{:.6},{}",
            r.op_index,
            r.engine,
            r.op_kind.as_str(),
            r.cumulative_seconds,
            r.n_resources
        )?;
    }
    Ok(())
}

pub fn emit_csv(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

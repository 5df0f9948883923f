//! Verification suites: each runs one family of checks over a scope of
//! generated posets and emits one serializable record per instance.
//!
//! Reports are deterministic given (suite, scope, seed, jobs): instances are
//! processed in enumeration order, per-instance RNG seeds derive from the
//! configuration seed alone, and records are merged in instance order
//! regardless of thread scheduling.  Wall-clock timing lives only on the
//! in-memory [`SuiteReport`], never in serialized records, so report files
//! are byte-identical across runs.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::echelon::{
    build_constrained_extension, echelonmotion, is_echelon_independent_brute,
    is_echelon_independent_fast, EngineError, ExtensionClass,
};
use crate::extension::{ElementBijection, LinearExtension};
use crate::families::{self, FamilyError};
use crate::io;
use crate::lattice::{Lattice, LatticeError};
use crate::linalg::{self, modp, ExactMatrix};
use crate::macneille::{macneille_completion, MacNeilleError};
use crate::poset::{Poset, PosetError};
use crate::trim::{maximum_length_chains, trim_data, TrimData, TrimError};

/// Names accepted by [`verify_suite`].
pub const SUITE_NAMES: [&str; 11] = [
    "distributive",
    "semidist",
    "trim-vertebral",
    "eulerian",
    "bounded",
    "fixed-points",
    "macneille",
    "modular-conjecture",
    "dilworth",
    "independence-crosscheck",
    "bruhat-s6-witness",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite \"{0}\"; expected one of {SUITE_NAMES:?}")]
    UnknownSuite(String),
    #[error("suite configuration: {0}")]
    Config(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Trim(#[from] TrimError),
    #[error(transparent)]
    MacNeille(#[from] MacNeilleError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// Knobs shared by every suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Master seed; per-instance seeds are derived from it.
    pub seed: u64,
    /// Worker threads; `0` uses the global thread pool.
    pub jobs: usize,
    /// Skip the mod-p prescreen on large Bruhat sweeps and run exact
    /// arithmetic only.
    pub exact_only: bool,
    /// Scope override: `;`-separated family specs understood by
    /// [`families::generate`].  `None` runs the suite's default scope.
    pub scope: Option<String>,
    /// Linear extensions are enumerated exhaustively up to this count.
    pub extension_cap: u128,
    /// Number of seeded uniform samples drawn beyond the cap.
    pub sample_count: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            jobs: 0,
            exact_only: false,
            scope: None,
            extension_cap: 100_000,
            sample_count: 200,
        }
    }
}

/// A failed check, with enough witness data to reproduce it in isolation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    /// Witness payload, keyed by field name (poset JSON, extension arrays,
    /// element names, images, ...).
    pub witness: BTreeMap<String, String>,
}

/// One line of a suite report: everything checked on a single instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub suite: String,
    pub instance: String,
    pub checks: u64,
    pub violations: Vec<Violation>,
    /// Arithmetic mode: `"exact"` or `"prescreened-then-verified"`.
    pub mode: String,
    /// The seed this instance's RNG was initialized with.
    pub seed: u64,
    /// Informational observations that are recorded but not asserted.
    pub notes: Vec<String>,
}

impl InstanceRecord {
    fn new(suite: &str, instance: &str, seed: u64) -> InstanceRecord {
        InstanceRecord {
            suite: suite.to_string(),
            instance: instance.to_string(),
            checks: 0,
            violations: Vec::new(),
            mode: "exact".to_string(),
            seed,
            notes: Vec::new(),
        }
    }

    /// Runs one named check: counts it and records a violation on failure.
    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> BTreeMap<String, String>) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                check: name.to_string(),
                witness: witness(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The result of running one suite over one scope.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    /// The scope that was actually run (default or override).
    pub scope: String,
    pub seed: u64,
    pub records: Vec<InstanceRecord>,
    /// Wall-clock time; deliberately absent from serialized records.
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(InstanceRecord::passed)
    }

    pub fn total_checks(&self) -> u64 {
        self.records.iter().map(|r| r.checks).sum()
    }

    pub fn total_violations(&self) -> usize {
        self.records.iter().map(|r| r.violations.len()).sum()
    }

    /// Writes the records as line-delimited JSON, one object per instance.
    pub fn write_jsonl(
        &self,
        mut out: &mut (impl std::io::Write + ?Sized),
    ) -> Result<(), io::IoError> {
        io::write_jsonl(&self.records, &mut out)
    }
}

/// Runs the named suite and collects its report.
pub fn verify_suite(suite: &str, config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let (scope, records) = match suite {
        "distributive" => run_distributive(config)?,
        "semidist" => run_semidist(config)?,
        "trim-vertebral" => run_trim_vertebral(config)?,
        "eulerian" => run_eulerian(config)?,
        "bounded" => run_bounded(config)?,
        "fixed-points" => run_fixed_points(config)?,
        "macneille" => run_macneille(config)?,
        "modular-conjecture" => run_modular_conjecture(config)?,
        "dilworth" => run_dilworth(config)?,
        "independence-crosscheck" => run_independence_crosscheck(config)?,
        "bruhat-s6-witness" => run_bruhat_s6_witness(config)?,
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: suite.to_string(),
        scope,
        seed: config.seed,
        records,
        elapsed: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// Scope handling and the parallel driver.

struct Instance {
    id: String,
    poset: Poset,
}

/// Expands a `;`-separated scope string into instances with stable ids.
fn expand_scope(scope: &str) -> Result<Vec<Instance>, SuiteError> {
    let mut out = Vec::new();
    for spec in scope.split(';') {
        let spec = spec.trim();
        if spec.is_empty() {
            continue;
        }
        let posets = families::generate(spec)?;
        let single = posets.len() == 1;
        for (i, poset) in posets.into_iter().enumerate() {
            let id = if single {
                spec.to_string()
            } else {
                format!("{spec}[{i}]")
            };
            out.push(Instance { id, poset });
        }
    }
    Ok(out)
}

/// Resolves the configured scope (or the suite default) into instances.
fn scoped_instances(
    config: &SuiteConfig,
    default_scope: &str,
) -> Result<(String, Vec<Instance>), SuiteError> {
    let scope = config
        .scope
        .clone()
        .unwrap_or_else(|| default_scope.to_string());
    let instances = expand_scope(&scope)?;
    Ok((scope, instances))
}

/// SplitMix64: derives a per-instance seed from the master seed and the
/// instance index, independent of thread scheduling.
fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `body` over all instances, in parallel at instance granularity, and
/// merges the records in instance order.
fn run_instances<F>(
    config: &SuiteConfig,
    instances: &[Instance],
    body: F,
) -> Result<Vec<InstanceRecord>, SuiteError>
where
    F: Fn(&Instance, u64) -> Result<InstanceRecord, SuiteError> + Sync,
{
    let work = || {
        instances
            .par_iter()
            .enumerate()
            .map(|(idx, inst)| body(inst, derive_seed(config.seed, idx as u64)))
            .collect::<Result<Vec<_>, SuiteError>>()
    };
    if config.jobs == 0 {
        work()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| SuiteError::Config(e.to_string()))?;
        pool.install(work)
    }
}

/// The extensions to test on one instance: every one of them when the exact
/// count is at most the cap, otherwise seeded uniform samples.
fn extensions_for(
    p: &Poset,
    config: &SuiteConfig,
    seed: u64,
) -> Result<(Vec<LinearExtension>, String), SuiteError> {
    let count = p.count_linear_extensions()?;
    if count <= config.extension_cap {
        Ok((
            p.linear_extensions().collect(),
            format!("exhaustive over {count} extensions"),
        ))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = Vec::with_capacity(config.sample_count);
        for _ in 0..config.sample_count {
            v.push(p.sample_extension_uniform(&mut rng)?);
        }
        Ok((
            v,
            format!("sampled {} of {count} extensions", config.sample_count),
        ))
    }
}

fn witness(fields: &[(&str, String)]) -> BTreeMap<String, String> {
    fields
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn first_difference(a: &ElementBijection, b: &ElementBijection) -> Option<usize> {
    (0..a.n()).find(|&x| a.apply(x) != b.apply(x))
}

/// Witness payload for two bijections that were expected to be equal.
fn map_mismatch(
    p: &Poset,
    sigma: Option<&LinearExtension>,
    got: &ElementBijection,
    want: &ElementBijection,
) -> BTreeMap<String, String> {
    let mut w = vec![("poset", io::poset_to_json(p))];
    if let Some(s) = sigma {
        w.push(("extension", io::extension_to_csv(s)));
    }
    w.push(("got", io::bijection_to_csv(got)));
    w.push(("want", io::bijection_to_csv(want)));
    if let Some(x) = first_difference(got, want) {
        w.push(("element", p.name(x)));
    }
    witness(&w)
}

// ---------------------------------------------------------------------------
// Suite bodies.

const DISTRIBUTIVE_SCOPE: &str = "j_of_poset(all_posets(1)); j_of_poset(all_posets(2)); \
     j_of_poset(all_posets(3)); j_of_poset(all_posets(4))";

/// On distributive lattices, echelonmotion along every linear extension
/// equals classical rowmotion on order ideals, which equals the label-set
/// definition of rowmotion.
fn run_distributive(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, DISTRIBUTIVE_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("distributive", &inst.id, seed);
        let p = &inst.poset;
        let lattice = Lattice::new(p.clone())?;
        if !lattice.is_distributive() {
            rec.notes.push("not distributive; skipped".to_string());
            return Ok(rec);
        }
        let birkhoff = lattice.birkhoff_rowmotion()?;
        let barnard = lattice.barnard_rowmotion()?;
        rec.check("ideal-rowmotion-matches-label-rowmotion", birkhoff == barnard, || {
            map_mismatch(p, None, &barnard, &birkhoff)
        });
        let (sigmas, note) = extensions_for(p, config, seed)?;
        rec.notes.push(note);
        for sigma in &sigmas {
            let ech = echelonmotion(p, sigma)?;
            rec.check("echelonmotion-matches-rowmotion", ech == birkhoff, || {
                map_mismatch(p, Some(sigma), &ech, &birkhoff)
            });
        }
        Ok(rec)
    })?;
    Ok((scope, records))
}

const LATTICE_SCOPE: &str = "all_lattices(1); all_lattices(2); all_lattices(3); \
     all_lattices(4); all_lattices(5); all_lattices(6); all_lattices(7)";

/// A lattice is echelon-independent exactly when it is semidistributive, and
/// on semidistributive lattices echelonmotion equals label-set rowmotion for
/// every linear extension.
fn run_semidist(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, LATTICE_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("semidist", &inst.id, seed);
        let p = &inst.poset;
        let lattice = Lattice::new(p.clone())?;
        let sd = lattice.is_semidistributive();
        let fast = is_echelon_independent_fast(p)?;
        rec.check(
            "independent-iff-semidistributive",
            fast.independent == sd,
            || {
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("semidistributive", sd.to_string()),
                    ("independent", fast.independent.to_string()),
                ])
            },
        );
        if !sd {
            return Ok(rec);
        }
        let barnard = lattice.barnard_rowmotion()?;
        if let Some(map) = &fast.map {
            rec.check("independent-map-matches-rowmotion", *map == barnard, || {
                map_mismatch(p, None, map, &barnard)
            });
        }
        let (sigmas, note) = extensions_for(p, config, seed)?;
        rec.notes.push(note);
        for sigma in &sigmas {
            let ech = echelonmotion(p, sigma)?;
            rec.check("echelonmotion-matches-rowmotion", ech == barnard, || {
                map_mismatch(p, Some(sigma), &ech, &barnard)
            });
        }
        Ok(rec)
    })?;
    Ok((scope, records))
}

const TRIM_SCOPE: &str = "all_lattices(1); all_lattices(2); all_lattices(3); \
     all_lattices(4); all_lattices(5); all_lattices(6); all_lattices(7); \
     tamari(4); tamari(5)";

/// On a trim lattice, echelonmotion along the vertebral extension of every
/// maximum-length chain equals trim rowmotion.
fn run_trim_vertebral(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, TRIM_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("trim-vertebral", &inst.id, seed);
        let p = &inst.poset;
        let lattice = Lattice::new(p.clone())?;
        if trim_data(&lattice)?.is_none() {
            rec.notes.push("not trim; skipped".to_string());
            return Ok(rec);
        }
        let chains = maximum_length_chains(&lattice);
        let mut rows: Vec<ElementBijection> = Vec::with_capacity(chains.len());
        let mut vertebral: Vec<LinearExtension> = Vec::with_capacity(chains.len());
        for chain in &chains {
            let data = TrimData::from_chain(&lattice, chain)?;
            let sigma = data.vertebral_extension(&lattice)?;
            let row = data.trim_rowmotion(&lattice)?;
            let ech = echelonmotion(p, &sigma)?;
            rec.check("vertebral-echelonmotion-matches-rowmotion", ech == row, || {
                let mut w = map_mismatch(p, Some(&sigma), &ech, &row);
                w.insert("chain".to_string(), format!("{chain:?}"));
                w
            });
            rows.push(row);
            vertebral.push(sigma);
        }
        rec.check(
            "rowmotion-agrees-across-chains",
            rows.windows(2).all(|w| w[0] == w[1]),
            || {
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("chains", format!("{chains:?}")),
                ])
            },
        );
        let all_sigmas_equal = vertebral.windows(2).all(|w| w[0] == w[1]);
        rec.notes.push(format!(
            "{} maximum-length chains; vertebral extensions all coincide: {all_sigmas_equal}",
            chains.len()
        ));
        Ok(rec)
    })?;
    Ok((scope, records))
}

const EULERIAN_SCOPE: &str = "boolean(2); boolean(3); boolean(4); face_lattice_polygon(3); \
     face_lattice_polygon(4); face_lattice_polygon(5); face_lattice_polygon(6)";

/// On Eulerian posets, echelonmotion is an involution for every extension.
fn run_eulerian(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, EULERIAN_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("eulerian", &inst.id, seed);
        let p = &inst.poset;
        if !p.is_eulerian() {
            rec.notes.push("not Eulerian; skipped".to_string());
            return Ok(rec);
        }
        let (sigmas, note) = extensions_for(p, config, seed)?;
        rec.notes.push(note);
        for sigma in &sigmas {
            let ech = echelonmotion(p, sigma)?;
            rec.check("echelonmotion-is-an-involution", ech.is_involution(), || {
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("extension", io::extension_to_csv(sigma)),
                    ("image", io::bijection_to_csv(&ech)),
                ])
            });
        }
        Ok(rec)
    })?;
    Ok((scope, records))
}

const CONNECTED_SCOPE: &str = "connected_posets(1); connected_posets(2); connected_posets(3); \
     connected_posets(4); connected_posets(5); connected_posets(6)";

/// Every echelon-independent connected poset is bounded.
fn run_bounded(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, CONNECTED_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("bounded", &inst.id, seed);
        let p = &inst.poset;
        let fast = is_echelon_independent_fast(p)?;
        if !fast.independent {
            rec.notes.push("echelon-dependent; hypothesis not met".to_string());
            return Ok(rec);
        }
        rec.check("independent-implies-bounded", p.is_bounded(), || {
            witness(&[("poset", io::poset_to_json(p))])
        });
        Ok(rec)
    })?;
    Ok((scope, records))
}

/// Echelonmotion on an echelon-independent connected poset with at least two
/// elements has no fixed points.
fn run_fixed_points(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, CONNECTED_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("fixed-points", &inst.id, seed);
        let p = &inst.poset;
        if p.n() < 2 {
            rec.notes.push("fewer than two elements; skipped".to_string());
            return Ok(rec);
        }
        let fast = is_echelon_independent_fast(p)?;
        if !fast.independent {
            rec.notes.push("echelon-dependent; hypothesis not met".to_string());
            return Ok(rec);
        }
        let map = fast.map.as_ref().expect("independent test returns the map");
        rec.check(
            "independent-echelonmotion-has-no-fixed-points",
            map.fixed_points().is_empty(),
            || {
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("image", io::bijection_to_csv(map)),
                    ("fixed-points", format!("{:?}", map.fixed_points())),
                ])
            },
        );
        Ok(rec)
    })?;
    Ok((scope, records))
}

/// The MacNeille completion of an echelon-independent connected poset is a
/// semidistributive lattice.  Also searches the scope, in order, for the
/// first echelon-dependent instance whose completion is distributive — the
/// converse fails, and the search records a concrete witness.
fn run_macneille(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, CONNECTED_SCOPE)?;
    let mut records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("macneille", &inst.id, seed);
        let p = &inst.poset;
        let fast = is_echelon_independent_fast(p)?;
        let completion = macneille_completion(p)?;
        if fast.independent {
            rec.check(
                "independent-completion-is-semidistributive",
                completion.lattice().is_semidistributive(),
                || {
                    witness(&[
                        ("poset", io::poset_to_json(p)),
                        ("completion", io::poset_to_json(completion.lattice().poset())),
                    ])
                },
            );
        } else if completion.lattice().is_distributive() {
            rec.notes
                .push("dependent with distributive completion".to_string());
        } else {
            rec.notes.push("echelon-dependent; hypothesis not met".to_string());
        }
        Ok(rec)
    })?;
    // Converse witness search: the first dependent instance whose completion
    // is distributive, reported as a synthetic summary record.
    let mut summary = InstanceRecord::new("macneille", "converse-witness-search", config.seed);
    match records
        .iter()
        .position(|r| r.notes.iter().any(|n| n == "dependent with distributive completion"))
    {
        Some(i) => {
            summary.notes.push(format!(
                "first echelon-dependent instance with distributive completion: {}",
                records[i].instance
            ));
            summary
                .notes
                .push(format!("poset: {}", io::poset_to_json(&instances[i].poset)));
        }
        None => {
            summary
                .notes
                .push("no echelon-dependent instance with distributive completion in scope".to_string());
        }
    }
    records.push(summary);
    Ok((scope, records))
}

const MODULAR_SCOPE: &str = "all_lattices(1); all_lattices(2); all_lattices(3); \
     all_lattices(4); all_lattices(5); all_lattices(6); all_lattices(7); \
     subspace_lattice(2,2); subspace_lattice(2,3); subspace_lattice(3,2); subspace_lattice(3,3)";

/// On a modular lattice, the image of `x` under echelonmotion has as many
/// upper covers as `x` has lower covers, for every linear extension.
fn run_modular_conjecture(
    config: &SuiteConfig,
) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, MODULAR_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("modular-conjecture", &inst.id, seed);
        let p = &inst.poset;
        let lattice = Lattice::new(p.clone())?;
        if !lattice.is_modular() {
            rec.notes.push("not modular; skipped".to_string());
            return Ok(rec);
        }
        let (sigmas, note) = extensions_for(p, config, seed)?;
        rec.notes.push(note);
        for sigma in &sigmas {
            let ech = echelonmotion(p, sigma)?;
            let bad = (0..p.n())
                .find(|&x| p.up_covers(ech.apply(x)).len() != p.down_covers(x).len());
            rec.check("image-up-covers-match-down-covers", bad.is_none(), || {
                let x = bad.expect("check failed");
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("extension", io::extension_to_csv(sigma)),
                    ("element", p.name(x)),
                    ("image", p.name(ech.apply(x))),
                    ("down-covers", p.down_covers(x).len().to_string()),
                    ("image-up-covers", p.up_covers(ech.apply(x)).len().to_string()),
                ])
            });
        }
        Ok(rec)
    })?;
    Ok((scope, records))
}

/// Dilworth's symmetry: in a modular lattice, for each `k` the number of
/// elements with `k` upper covers equals the number with `k` lower covers.
fn run_dilworth(config: &SuiteConfig) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, MODULAR_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("dilworth", &inst.id, seed);
        let p = &inst.poset;
        let lattice = Lattice::new(p.clone())?;
        if !lattice.is_modular() {
            rec.notes.push("not modular; skipped".to_string());
            return Ok(rec);
        }
        for (k, (up, down)) in lattice.dilworth_profile() {
            rec.check("cover-count-profile-is-symmetric", up == down, || {
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("k", k.to_string()),
                    ("elements-with-k-upper-covers", up.to_string()),
                    ("elements-with-k-lower-covers", down.to_string()),
                ])
            });
        }
        Ok(rec)
    })?;
    Ok((scope, records))
}

/// The constant-size fast independence test agrees with brute force over all
/// linear extensions.
fn run_independence_crosscheck(
    config: &SuiteConfig,
) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let (scope, instances) = scoped_instances(config, CONNECTED_SCOPE)?;
    let records = run_instances(config, &instances, |inst, seed| {
        let mut rec = InstanceRecord::new("independence-crosscheck", &inst.id, seed);
        let p = &inst.poset;
        let fast = is_echelon_independent_fast(p)?;
        let brute = match is_echelon_independent_brute(p, config.extension_cap) {
            Ok(report) => report,
            Err(EngineError::Capacity(msg)) => {
                rec.notes.push(format!("brute force skipped: {msg}"));
                return Ok(rec);
            }
            Err(e) => return Err(e.into()),
        };
        rec.check(
            "fast-test-agrees-with-brute-force",
            fast.independent == brute.independent,
            || {
                witness(&[
                    ("poset", io::poset_to_json(p)),
                    ("fast", fast.independent.to_string()),
                    ("brute", brute.independent.to_string()),
                ])
            },
        );
        if let (Some(fm), Some(bm)) = (&fast.map, &brute.map) {
            rec.check("independent-maps-agree", fm == bm, || {
                map_mismatch(p, None, fm, bm)
            });
        }
        Ok(rec)
    })?;
    Ok((scope, records))
}

/// Bruhat order on the symmetric group: S3 and S4 are echelon-independent;
/// S6 is not, witnessed by x = [241635] whose image under the one-line-lex
/// extension differs from its image under a constrained Ξ1 representative.
fn run_bruhat_s6_witness(
    config: &SuiteConfig,
) -> Result<(String, Vec<InstanceRecord>), SuiteError> {
    let scope = "bruhat_symmetric(3); bruhat_symmetric(4); bruhat_symmetric(6)".to_string();
    if config.scope.is_some() {
        return Err(SuiteError::Config(
            "bruhat-s6-witness runs a fixed scope and accepts no override".into(),
        ));
    }
    let mut records = Vec::new();
    for (idx, n) in [3usize, 4].into_iter().enumerate() {
        let seed = derive_seed(config.seed, idx as u64);
        let mut rec = InstanceRecord::new("bruhat-s6-witness", &format!("bruhat_symmetric({n})"), seed);
        let p = families::bruhat_symmetric(n)?;
        let fast = is_echelon_independent_fast(&p)?;
        rec.check("bruhat-order-is-echelon-independent", fast.independent, || {
            let mut w = vec![("poset", io::poset_to_json(&p))];
            if let Some(wit) = &fast.witness {
                w.push(("element", p.name(wit.x)));
                w.push(("base-extension", io::extension_to_csv(&wit.base)));
                w.push(("other-extension", io::extension_to_csv(&wit.other)));
                w.push(("base-image", p.name(wit.image_base)));
                w.push(("other-image", p.name(wit.image_other)));
            }
            witness(&w)
        });
        records.push(rec);
    }
    records.push(s6_witness_record(config)?);
    Ok((scope, records))
}

/// One partial Bruhat sweep: mod-p prescreen (unless exact-only) followed by
/// the authoritative exact sweep.  Returns the image element and whether the
/// prescreen agreed.
fn swept_image(
    w: &ExactMatrix,
    sigma: &LinearExtension,
    x: usize,
    exact_only: bool,
) -> Result<(usize, Option<bool>), SuiteError> {
    let pos = sigma.position(x);
    let predicted: Option<Vec<Option<usize>>> = if exact_only {
        None
    } else {
        Some(
            modp::PRESCREEN_PRIMES
                .iter()
                .map(|&p| modp::bruhat_prefix_mod_p(w, pos + 1, p).map(|prefix| prefix[pos]))
                .collect(),
        )
    };
    let prefix = linalg::bruhat_prefix(w, pos + 1)?;
    let exact_row = prefix[pos];
    let agreed = predicted.map(|rows| rows.iter().all(|&r| r == Some(exact_row)));
    Ok((sigma.element(exact_row), agreed))
}

fn s6_witness_record(config: &SuiteConfig) -> Result<InstanceRecord, SuiteError> {
    let seed = derive_seed(config.seed, 2);
    let mut rec = InstanceRecord::new("bruhat-s6-witness", "bruhat_symmetric(6)", seed);
    rec.mode = if config.exact_only {
        "exact".to_string()
    } else {
        "prescreened-then-verified".to_string()
    };
    let p = families::bruhat_symmetric(6)?;
    let x = families::element_named(&p, "241635")
        .ok_or_else(|| SuiteError::Config("element 241635 missing from bruhat_symmetric(6)".into()))?;
    let y_expected = families::element_named(&p, "513264")
        .ok_or_else(|| SuiteError::Config("element 513264 missing from bruhat_symmetric(6)".into()))?;

    // One-line-lex: elements are already indexed in lexicographic one-line
    // order, which is a linear extension of Bruhat order.
    let lex = LinearExtension::new(&p, (0..p.n()).collect())?;
    let w = crate::echelon::cartan_matrix(&p, &lex);
    let (y, prescreen) = swept_image(&w, &lex, x, config.exact_only)?;
    drop(w);
    if let Some(ok) = prescreen {
        rec.check("prescreen-agrees-with-exact-sweep", ok, || {
            witness(&[("element", p.name(x)), ("extension", "one-line-lex".into())])
        });
    }
    rec.check("one-line-lex-image-is-513264", y == y_expected, || {
        witness(&[
            ("element", p.name(x)),
            ("image", p.name(y)),
            ("expected", p.name(y_expected)),
        ])
    });
    rec.check(
        "witness-pair-is-incomparable",
        !p.comparable(x, y_expected),
        || witness(&[("x", p.name(x)), ("y", p.name(y_expected))]),
    );

    let xi1 = build_constrained_extension(&p, ExtensionClass::Xi1, x, y_expected)?;
    let w1 = crate::echelon::cartan_matrix(&p, &xi1);
    let (y1, prescreen1) = swept_image(&w1, &xi1, x, config.exact_only)?;
    drop(w1);
    if let Some(ok) = prescreen1 {
        rec.check("prescreen-agrees-with-exact-sweep", ok, || {
            witness(&[("element", p.name(x)), ("extension", "Xi1".into())])
        });
    }
    rec.check("xi1-image-differs-so-bruhat-s6-is-dependent", y1 != y_expected, || {
        witness(&[
            ("element", p.name(x)),
            ("xi1-image", p.name(y1)),
            ("one-line-lex-image", p.name(y)),
        ])
    });
    rec.notes.push(format!("Xi1 image of 241635: {}", p.name(y1)));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> SuiteConfig {
        SuiteConfig {
            extension_cap: 1_000,
            sample_count: 20,
            ..SuiteConfig::default()
        }
    }

    fn run(suite: &str, config: &SuiteConfig) -> SuiteReport {
        verify_suite(suite, config).expect("suite runs")
    }

    #[test]
    fn distributive_suite_passes_on_small_ideal_lattices() {
        let config = SuiteConfig {
            scope: Some("j_of_poset(all_posets(1)); j_of_poset(all_posets(2)); \
                 j_of_poset(all_posets(3))"
                .into()),
            ..quick_config()
        };
        let report = run("distributive", &config);
        assert!(report.passed(), "violations: {:?}", report.records);
        assert_eq!(report.records.len(), 1 + 2 + 5);
        assert!(report.total_checks() > 0);
    }

    #[test]
    fn semidist_suite_passes_on_lattices_up_to_six() {
        let config = SuiteConfig {
            scope: Some("all_lattices(5); all_lattices(6); n5; m3".into()),
            ..quick_config()
        };
        let report = run("semidist", &config);
        assert!(report.passed(), "violations: {:?}", report.records);
        // M3 is not semidistributive, so its record stops after the
        // independence cross-check.
        let m3_rec = report.records.iter().find(|r| r.instance == "m3").unwrap();
        assert_eq!(m3_rec.checks, 1);
    }

    #[test]
    fn trim_suite_covers_every_maximum_length_chain() {
        let config = SuiteConfig {
            scope: Some("n5; tamari(4); boolean(2); m3".into()),
            ..quick_config()
        };
        let report = run("trim-vertebral", &config);
        assert!(report.passed(), "violations: {:?}", report.records);
        let m3_rec = report.records.iter().find(|r| r.instance == "m3").unwrap();
        assert!(m3_rec.notes.iter().any(|n| n.contains("not trim")));
        let t4 = report.records.iter().find(|r| r.instance == "tamari(4)").unwrap();
        assert!(t4.checks > 1);
    }

    #[test]
    fn eulerian_suite_passes_on_the_cube() {
        let config = SuiteConfig {
            scope: Some("boolean(3); face_lattice_polygon(3)".into()),
            ..quick_config()
        };
        let report = run("eulerian", &config);
        assert!(report.passed(), "violations: {:?}", report.records);
    }

    #[test]
    fn connected_poset_suites_pass_up_to_five_elements() {
        let config = SuiteConfig {
            scope: Some("connected_posets(1); connected_posets(2); connected_posets(3); \
                 connected_posets(4); connected_posets(5)"
                .into()),
            ..quick_config()
        };
        for suite in ["bounded", "fixed-points", "independence-crosscheck"] {
            let report = run(suite, &config);
            assert!(report.passed(), "{suite} violations: {:?}", report.records);
        }
    }

    #[test]
    fn macneille_suite_finds_the_converse_witness() {
        let config = SuiteConfig {
            scope: Some("connected_posets(1); connected_posets(2); connected_posets(3); \
                 connected_posets(4)"
                .into()),
            ..quick_config()
        };
        let report = run("macneille", &config);
        assert!(report.passed(), "violations: {:?}", report.records);
        let summary = report.records.last().unwrap();
        assert_eq!(summary.instance, "converse-witness-search");
        // A three-element connected poset with two minimal elements is
        // already dependent (it is unbounded) and completes to the diamond.
        assert!(
            summary.notes[0].contains("connected_posets(3)"),
            "a three-element witness exists: {:?}",
            summary.notes
        );
    }

    #[test]
    fn modular_suites_pass_on_small_scopes() {
        let config = SuiteConfig {
            scope: Some("all_lattices(5); all_lattices(6); subspace_lattice(2,2)".into()),
            ..quick_config()
        };
        for suite in ["modular-conjecture", "dilworth"] {
            let report = run(suite, &config);
            assert!(report.passed(), "{suite} violations: {:?}", report.records);
        }
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let base = SuiteConfig {
            scope: Some("all_lattices(6)".into()),
            seed: 7,
            ..quick_config()
        };
        let one = SuiteConfig { jobs: 1, ..base.clone() };
        let four = SuiteConfig { jobs: 4, ..base.clone() };
        let a = run("semidist", &one);
        let b = run("semidist", &four);
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        a.write_jsonl(&mut buf_a).unwrap();
        b.write_jsonl(&mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b, "reports must be byte-identical");
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn sampled_instances_note_the_sample_size() {
        let config = SuiteConfig {
            scope: Some("boolean(4)".into()),
            extension_cap: 10,
            sample_count: 3,
            ..SuiteConfig::default()
        };
        let report = run("eulerian", &config);
        assert!(report.passed(), "violations: {:?}", report.records);
        assert!(report.records[0].notes.iter().any(|n| n.starts_with("sampled 3 of")));
    }

    #[test]
    fn unknown_suites_and_bad_scopes_are_rejected() {
        assert!(matches!(
            verify_suite("frobnicate", &SuiteConfig::default()),
            Err(SuiteError::UnknownSuite(_))
        ));
        let config = SuiteConfig {
            scope: Some("no_such_family(3)".into()),
            ..SuiteConfig::default()
        };
        assert!(matches!(
            verify_suite("bounded", &config),
            Err(SuiteError::Family(_))
        ));
        let config = SuiteConfig {
            scope: Some("chain(3)".into()),
            ..SuiteConfig::default()
        };
        assert!(matches!(
            verify_suite("bruhat-s6-witness", &config),
            Err(SuiteError::Config(_))
        ));
    }
}

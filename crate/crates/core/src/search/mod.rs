//! Randomized lifting of complementing ideals along central quotients, a
//! brute-force enumeration for tiny groups, and a dispatcher over the
//! constructors.

mod brute;
mod dispatch;

pub use brute::{brute_force_ideals, BRUTE_FORCE_LIMIT};
pub use dispatch::{iyb_search, SearchHint, SearchResult, Strategy};

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::construct::ConstructError;
use crate::group::{Group, GroupError};
use crate::ring::{GroupRing, RingError};
use crate::structure::{verify_transversal, Certificate, CertificateError, Provenance, Violation};
use crate::zmod::{prime_power, HowellBasis, HyperplaneSpace, LinalgError};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("not a p-group of order {0}")]
    NotPGroup(usize),
    #[error("{0}")]
    TooLarge(String),
    #[error("search inconclusive after {restarts} restarts")]
    Inconclusive { restarts: usize, trace: Box<SearchTrace> },
    #[error("no applicable strategy: {0}")]
    NoStrategy(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("{0}")]
    Verification(#[from] Violation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperplaneSampling {
    /// First hyperplane, in index order, whose ideal passes verification.
    Exhaustive,
    /// One uniformly random hyperplane per level.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentralPolicy {
    /// Uniform among central elements of order `p`.
    Uniform,
    /// The smallest such element.
    First,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_restarts: usize,
    pub sampling: HyperplaneSampling,
    pub central: CentralPolicy,
    /// Exponent of the modulus `p^k`; `log_p |G|` when absent.
    pub k: Option<u32>,
    /// Report the lowest successful restart index.
    pub deterministic: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 42,
            max_restarts: 100,
            sampling: HyperplaneSampling::Random,
            central: CentralPolicy::Uniform,
            k: None,
            deterministic: true,
        }
    }
}

/// One step of the central series chain and the hyperplane chosen when
/// lifting back through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub order: usize,
    /// Central element of order `p` in this level's group.
    pub central: usize,
    /// Hyperplane index into the space of maximal submodules avoiding
    /// `1 − n`, in decimal.
    pub hyperplane: Option<String>,
    pub candidates: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub restart: usize,
    pub k: u32,
    pub levels: Vec<LevelRecord>,
    pub failure: Option<String>,
    pub retried_at: Option<u32>,
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub group_order: usize,
    pub seed: u64,
    pub restarts: Vec<RestartRecord>,
}

/// A verified search result.
#[derive(Clone, Debug)]
pub struct LiftOutcome {
    pub certificate: Certificate,
    pub ring: GroupRing,
    pub ideal: HowellBasis,
    pub restart: usize,
    pub k: u32,
    pub trace: SearchTrace,
}

/// `I = ω² + pω` in `(Z/p^k)C_p`.
pub fn base_case_ideal(group: Arc<Group>, k: u32) -> Result<(GroupRing, HowellBasis), SearchError> {
    let n = group.order();
    let (p, e) = prime_power(n as u64).ok_or(SearchError::NotPGroup(n))?;
    if e != 1 {
        return Err(SearchError::NotPGroup(n));
    }
    let ring = GroupRing::new(group, p.pow(k))?;
    let ideal = base_ideal(&ring, p)?;
    Ok((ring, ideal))
}

fn base_ideal(ring: &GroupRing, p: u64) -> Result<HowellBasis, SearchError> {
    let m = ring.modulus();
    let w = ring.omega_power(1)?;
    let pw: Vec<Vec<u64>> = w.rows().iter().map(|r| r.iter().map(|&x| x * p % m).collect()).collect();
    Ok(ring.omega_power(2)?.sum(&HowellBasis::from_rows(m, ring.dim(), pw))?)
}

enum Chooser<'a> {
    Random { rng: ChaCha8Rng, sampling: HyperplaneSampling, central: CentralPolicy },
    Scripted { levels: &'a [LevelRecord] },
}

enum Failure {
    /// `1 − n` lies in `rad J`.
    InRadical(usize),
    Transversal(usize, String),
    Script(String),
    Error(String),
}

impl Failure {
    fn describe(&self) -> String {
        match self {
            Failure::InRadical(o) => format!("1 − n lies in rad J at order {o}"),
            Failure::Transversal(o, why) => format!("transversal check failed at order {o}: {why}"),
            Failure::Script(s) => format!("replay mismatch: {s}"),
            Failure::Error(s) => s.clone(),
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Error(e.to_string())
}

fn central_of_order_p(g: &Group, p: u64) -> Vec<usize> {
    g.center().elements.iter().copied().filter(|&x| g.element_order(x) as u64 == p).collect()
}

/// Builds a complementing ideal of `(Z/p^k)G` for one restart.
fn lift(group: &Arc<Group>, p: u64, k: u32, chooser: &mut Chooser, levels: &mut Vec<LevelRecord>) -> Result<(GroupRing, HowellBasis), Failure> {
    let modulus = p.pow(k);
    // chain G = G_0 → G_1 → … with |G_t| ≤ p
    let mut chain: Vec<(Arc<Group>, usize, Vec<usize>)> = Vec::new();
    let mut cur = group.clone();
    while cur.order() as u64 > p {
        let depth = chain.len();
        let n = match chooser {
            Chooser::Random { rng, central, .. } => {
                let pool = central_of_order_p(&cur, p);
                if pool.is_empty() {
                    return Err(Failure::Error("no central element of order p".into()));
                }
                match central {
                    CentralPolicy::Uniform => pool[rng.random_range(0..pool.len())],
                    CentralPolicy::First => pool[0],
                }
            }
            Chooser::Scripted { levels: script } => {
                let l = script.get(depth).ok_or_else(|| Failure::Script("chain is longer than recorded".into()))?;
                let ok = l.order == cur.order()
                    && cur.center().contains(l.central)
                    && cur.element_order(l.central) as u64 == p;
                if !ok {
                    return Err(Failure::Script(format!("recorded element {} is unusable", l.central)));
                }
                l.central
            }
        };
        levels.push(LevelRecord { order: cur.order(), central: n, hyperplane: None, candidates: None });
        let sub = cur.closure(&[n]);
        let (quot, proj) = cur.quotient(&sub).map_err(err)?;
        chain.push((cur.clone(), n, proj));
        cur = Arc::new(quot);
    }
    let mut ring = GroupRing::new(cur.clone(), modulus).map_err(err)?;
    let mut ideal = if cur.order() == 1 {
        HowellBasis::zero(modulus, 1)
    } else {
        base_ideal(&ring, p).map_err(err)?
    };
    verify_transversal(&ring, &ideal).map_err(|e| Failure::Transversal(cur.order(), e.to_string()))?;
    for (depth, (g, n, proj)) in chain.into_iter().enumerate().rev() {
        let big = GroupRing::new(g.clone(), modulus).map_err(err)?;
        let j = big.left_ideal_preimage(&ring, &proj, &ideal).map_err(err)?;
        let rad = big.radical_of(&j).map_err(err)?;
        let v = big.one_minus(n);
        let space = HyperplaneSpace::new(&j, &rad, &v).map_err(err)?;
        if space.is_empty() {
            return Err(Failure::InRadical(g.order()));
        }
        let count = space.count();
        let total: Option<u128> = count.to_string().parse().ok();
        levels[depth].candidates = Some(count.to_string());
        let check = |i: &HowellBasis| verify_transversal(&big, i).map(|_| ()).map_err(|e| e.to_string());
        let (index, chosen) = match chooser {
            Chooser::Random { rng, sampling, .. } => {
                let total = total.ok_or_else(|| Failure::Error("too many hyperplanes to index".into()))?;
                match sampling {
                    HyperplaneSampling::Random => {
                        let i = rng.random_range(0..total);
                        let h = space.nth(i).expect("index in range");
                        if let Err(why) = check(&h) {
                            levels[depth].hyperplane = Some(i.to_string());
                            return Err(Failure::Transversal(g.order(), why));
                        }
                        (i, h)
                    }
                    HyperplaneSampling::Exhaustive => {
                        let mut found = None;
                        let mut last = String::new();
                        for i in 0..total {
                            let h = space.nth(i).expect("index in range");
                            match check(&h) {
                                Ok(()) => {
                                    found = Some((i, h));
                                    break;
                                }
                                Err(why) => last = why,
                            }
                        }
                        found.ok_or(Failure::Transversal(g.order(), last))?
                    }
                }
            }
            Chooser::Scripted { levels: script } => {
                let i: u128 = script[depth]
                    .hyperplane
                    .as_deref()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Failure::Script("missing hyperplane index".into()))?;
                let h = space.nth(i).ok_or_else(|| Failure::Script("hyperplane index out of range".into()))?;
                check(&h).map_err(|why| Failure::Transversal(g.order(), why))?;
                (i, h)
            }
        };
        levels[depth].hyperplane = Some(index.to_string());
        ring = big;
        ideal = chosen;
    }
    Ok((ring, ideal))
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn check_p_group(group: &Group, bound: usize) -> Result<u64, SearchError> {
    let n = group.order();
    if n > bound {
        return Err(SearchError::TooLarge(format!("order {n} exceeds {bound}")));
    }
    match prime_power(n as u64) {
        Some((p, _)) if n > 1 => Ok(p),
        _ => Err(SearchError::NotPGroup(n)),
    }
}

fn default_k(n: usize, p: u64) -> u32 {
    let mut k = 0;
    let mut x = 1usize;
    while x < n {
        x *= p as usize;
        k += 1;
    }
    k.max(1)
}

fn certificate(group: &Group, ring: &GroupRing, ideal: &HowellBasis, cfg: &SearchConfig, restart: usize, k: u32) -> Certificate {
    let params = json!({
        "k": k,
        "restart": restart,
        "max_restarts": cfg.max_restarts,
        "sampling": cfg.sampling,
        "central": cfg.central,
        "order": group.order(),
    });
    Certificate::from_ideal(ring, ideal, None, Provenance::new("heuristic_lift", params, Some(cfg.seed)))
}

fn run_restart(group: &Arc<Group>, p: u64, cfg: &SearchConfig, restart: usize) -> (Option<(GroupRing, HowellBasis, u32)>, RestartRecord) {
    let start = Instant::now();
    let k0 = cfg.k.unwrap_or_else(|| default_k(group.order(), p));
    let mut record = RestartRecord { restart, k: k0, levels: Vec::new(), failure: None, retried_at: None, millis: 0 };
    let attempt = |k: u32, record: &mut RestartRecord| {
        let mut chooser =
            Chooser::Random { rng: restart_rng(cfg.seed, restart), sampling: cfg.sampling, central: cfg.central };
        record.levels.clear();
        record.k = k;
        lift(group, p, k, &mut chooser, &mut record.levels)
    };
    let mut result = attempt(k0, &mut record);
    if let Err(Failure::Transversal(..)) = &result {
        record.retried_at = Some(k0 + 1);
        result = attempt(k0 + 1, &mut record);
    }
    record.millis = start.elapsed().as_millis() as u64;
    match result {
        Ok((ring, ideal)) => {
            let k = record.k;
            (Some((ring, ideal, k)), record)
        }
        Err(f) => {
            record.failure = Some(f.describe());
            (None, record)
        }
    }
}

/// Restart-parallel randomized lifting for a `p`-group. The returned
/// certificate has passed independent verification.
pub fn heuristic_lift(group: Arc<Group>, cfg: &SearchConfig) -> Result<LiftOutcome, SearchError> {
    let p = check_p_group(&group, crate::ring::MAX_RING_ORDER)?;
    let mut trace = SearchTrace { group_order: group.order(), seed: cfg.seed, restarts: Vec::new() };
    let batch = rayon::current_num_threads().max(1);
    let mut next = 0;
    while next < cfg.max_restarts {
        let end = (next + batch).min(cfg.max_restarts);
        let results: Vec<_> = (next..end).into_par_iter().map(|r| run_restart(&group, p, cfg, r)).collect();
        let mut winner = None;
        for (res, record) in results {
            let r = record.restart;
            trace.restarts.push(record);
            if winner.is_none() {
                if let Some(found) = res {
                    winner = Some((r, found));
                    if !cfg.deterministic {
                        break;
                    }
                }
            }
        }
        if let Some((restart, (ring, ideal, k))) = winner {
            let cert = certificate(&group, &ring, &ideal, cfg, restart, k);
            cert.verify(false)?;
            trace.restarts.retain(|r| r.restart <= restart);
            return Ok(LiftOutcome { certificate: cert, ring, ideal, restart, k, trace });
        }
        next = end;
    }
    Err(SearchError::Inconclusive { restarts: cfg.max_restarts, trace: Box::new(trace) })
}

/// Re-runs one recorded restart with its recorded choices.
pub fn replay(group: Arc<Group>, cfg: &SearchConfig, record: &RestartRecord) -> Result<Certificate, SearchError> {
    let p = check_p_group(&group, crate::ring::MAX_RING_ORDER)?;
    let mut chooser = Chooser::Scripted { levels: &record.levels };
    let mut levels = Vec::new();
    let (ring, ideal) = lift(&group, p, record.k, &mut chooser, &mut levels)
        .map_err(|f| SearchError::NoStrategy(f.describe()))?;
    let cert = certificate(&group, &ring, &ideal, cfg, record.restart, record.k);
    cert.verify(false)?;
    Ok(cert)
}

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{heuristic_lift, SearchConfig, SearchError, SearchTrace};
use crate::construct::{abelian_structure, class2_equivariant_sandling, class2_odd, combine_semidirect};
use crate::group::{Group, GroupAction};
use crate::structure::{Certificate, GModule, IybStructure, Provenance};

/// Decomposition hint for [`iyb_search`].
#[derive(Clone, Debug, Default)]
pub enum SearchHint {
    #[default]
    None,
    /// `G = N ⋊ H` for this action of `H` on `N`.
    Semidirect(GroupAction),
}

impl SearchHint {
    /// The semidirect decomposition a group was built with, if any.
    pub fn from_group(group: &Group) -> Self {
        group.semidirect_action().map_or(SearchHint::None, SearchHint::Semidirect)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Trivial,
    Coprime,
    Abelian,
    Class2Odd,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub certificate: Certificate,
    pub structure: IybStructure,
    pub strategy: Strategy,
    pub trace: Option<SearchTrace>,
}

fn trivial_structure(group: Arc<Group>) -> Result<IybStructure, SearchError> {
    let gens = group.generators().len();
    Ok(IybStructure::new(group, GModule::trivial(Vec::new(), gens), vec![Vec::new()], None)?)
}

fn finish(s: IybStructure, strategy: Strategy, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let cert = Certificate::from_structure(&s, Provenance::new("iyb_search", json!({ "strategy": strategy }), Some(cfg.seed)));
    cert.verify(false)?;
    Ok(SearchResult { certificate: cert, structure: s, strategy, trace: None })
}

/// Finds a verified structure on a solvable group. A semidirect hint with a
/// `p`-group of class at most 2 as normal factor and a complement of order
/// prime to `p` takes the coprime route, recursing on the complement;
/// otherwise abelian groups, odd groups of class at most 2 and `p`-groups
/// have direct strategies.
pub fn iyb_search(group: Arc<Group>, hint: &SearchHint, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let n = group.order();
    if n == 1 {
        return finish(trivial_structure(group)?, Strategy::Trivial, cfg);
    }
    if let SearchHint::Semidirect(act) = hint {
        let h = act.actor().clone();
        let s_n = class2_equivariant_sandling(act, None)?.structure;
        let s_h = iyb_search(h.clone(), &SearchHint::from_group(&h), cfg)?.structure;
        let s = combine_semidirect(&s_h, &s_n, act)?;
        if s.group().desc() != group.desc() {
            return Err(SearchError::NoStrategy("hint does not describe the given group".into()));
        }
        return finish(s, Strategy::Coprime, cfg);
    }
    if group.is_abelian() {
        return finish(abelian_structure(group)?, Strategy::Abelian, cfg);
    }
    let p = group.prime_of_p_group();
    if p.is_some_and(|p| p % 2 == 1) && group.nilpotency_class().is_some_and(|c| c <= 2) {
        return finish(class2_odd(group, &[])?, Strategy::Class2Odd, cfg);
    }
    if p.is_some() {
        let out = heuristic_lift(group, cfg)?;
        let structure = out.certificate.verify(false)?.structure;
        return Ok(SearchResult {
            certificate: out.certificate,
            structure,
            strategy: Strategy::Heuristic,
            trace: Some(out.trace),
        });
    }
    Err(SearchError::NoStrategy(format!("order {n}: not a p-group and no decomposition hint")))
}

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{ideal_to_structure, Equivariance, GModule, IybStructure, VerificationSummary, Violation};
use crate::group::{Group, GroupDesc, Perm};
use crate::ring::GroupRing;
use crate::zmod::HowellBasis;

pub const FORMAT: &str = "iyb-cert/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    ModuleStructure,
    IdealComplement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub builder: String,
    pub params: Value,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(builder: &str, params: Value, seed: Option<u64>) -> Self {
        Provenance { builder: builder.to_string(), params, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleBlock {
    pub invariants: Vec<u64>,
    pub generator_actions: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleBlock {
    pub images: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealBlock {
    pub howell_rows: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceBlock {
    pub generators: Vec<Perm>,
    /// Empty for ideal certificates, where the matrices are induced by `I`.
    #[serde(default)]
    pub module_actions: Vec<Vec<Vec<u64>>>,
}

/// Self-contained record of an IYB structure or of a transversal ideal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub group: GroupDesc,
    pub kind: CertKind,
    pub modulus: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariance: Option<EquivarianceBlock>,
    pub provenance: Provenance,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("verification failed: {0}")]
    Failed(#[from] Violation),
}

impl CertificateError {
    fn from_violation(v: Violation) -> Self {
        match v {
            Violation::Shape(s) => CertificateError::Malformed(s),
            other => CertificateError::Failed(other),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertVerification {
    pub structure: IybStructure,
    pub summary: VerificationSummary,
    /// Index and pairwise test count, for ideal certificates.
    pub transversal: Option<super::TransversalReport>,
}

impl Certificate {
    pub fn from_structure(s: &IybStructure, provenance: Provenance) -> Self {
        let module = s.module();
        Certificate {
            format: FORMAT.to_string(),
            group: s.group().desc().clone(),
            kind: CertKind::ModuleStructure,
            modulus: module.abelian.embedding_modulus(),
            module: Some(ModuleBlock {
                invariants: module.invariants().to_vec(),
                generator_actions: module.generator_actions.clone(),
            }),
            cocycle: Some(CocycleBlock { images: s.cocycle_table() }),
            ideal: None,
            equivariance: s.equivariance().map(|e| EquivarianceBlock {
                generators: e.automorphisms.clone(),
                module_actions: e.module_actions.clone(),
            }),
            provenance,
        }
    }

    pub fn from_ideal(ring: &GroupRing, ideal: &HowellBasis, automorphisms: Option<&[Perm]>, provenance: Provenance) -> Self {
        Certificate {
            format: FORMAT.to_string(),
            group: ring.group().desc().clone(),
            kind: CertKind::IdealComplement,
            modulus: ring.modulus(),
            module: None,
            cocycle: None,
            ideal: Some(IdealBlock { howell_rows: ideal.rows().to_vec() }),
            equivariance: automorphisms.map(|a| EquivarianceBlock { generators: a.to_vec(), module_actions: Vec::new() }),
            provenance,
        }
    }

    /// Canonical text: compact JSON with lexicographically sorted keys.
    pub fn to_canonical_string(&self) -> String {
        let v = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        let c: Certificate = serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))?;
        if c.format != FORMAT {
            return Err(CertificateError::Malformed(format!("unknown format {:?}", c.format)));
        }
        Ok(c)
    }

    pub fn build_group(&self) -> Result<Arc<Group>, CertificateError> {
        Group::from_desc(&self.group).map(Arc::new).map_err(|e| CertificateError::Malformed(e.to_string()))
    }

    /// Rebuild the structure and run every check.
    pub fn verify(&self, force_full: bool) -> Result<CertVerification, CertificateError> {
        let group = self.build_group()?;
        match self.kind {
            CertKind::ModuleStructure => {
                let (Some(module), Some(cocycle)) = (&self.module, &self.cocycle) else {
                    return Err(CertificateError::Malformed("module and cocycle blocks required".into()));
                };
                if self.ideal.is_some() {
                    return Err(CertificateError::Malformed("unexpected ideal block".into()));
                }
                let m = GModule::new(module.invariants.clone(), module.generator_actions.clone())
                    .map_err(CertificateError::from_violation)?;
                let eq = self.equivariance.as_ref().map(|e| Equivariance {
                    automorphisms: e.generators.clone(),
                    module_actions: e.module_actions.clone(),
                });
                let s = IybStructure::new(group, m, cocycle.images.clone(), eq)
                    .map_err(CertificateError::from_violation)?;
                let summary = s.verify(force_full).map_err(CertificateError::from_violation)?;
                Ok(CertVerification { structure: s, summary, transversal: None })
            }
            CertKind::IdealComplement => {
                let Some(ideal) = &self.ideal else {
                    return Err(CertificateError::Malformed("ideal block required".into()));
                };
                if self.module.is_some() || self.cocycle.is_some() {
                    return Err(CertificateError::Malformed("unexpected module block".into()));
                }
                let n = group.order();
                if ideal.howell_rows.iter().any(|r| r.len() != n) {
                    return Err(CertificateError::Malformed("ideal rows have the wrong length".into()));
                }
                let ring = GroupRing::new(group, self.modulus).map_err(|e| CertificateError::Malformed(e.to_string()))?;
                let basis = HowellBasis::from_rows(self.modulus, n, ideal.howell_rows.iter().cloned());
                let report = super::verify_transversal(&ring, &basis).map_err(CertificateError::from_violation)?;
                let autos = self.equivariance.as_ref().map(|e| e.generators.as_slice());
                if let Some(a) = autos {
                    if a.iter().any(|p| p.len() != n) {
                        return Err(CertificateError::Malformed("equivariance permutation of wrong length".into()));
                    }
                }
                let s = ideal_to_structure(&ring, &basis, autos).map_err(CertificateError::from_violation)?;
                let summary = s.verify(force_full).map_err(CertificateError::from_violation)?;
                Ok(CertVerification { structure: s, summary, transversal: Some(report) })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3_cert() -> Certificate {
        let g = Arc::new(Group::cyclic(3).unwrap());
        let s = IybStructure::new(g, GModule::trivial(vec![3], 1), vec![vec![0], vec![1], vec![2]], None).unwrap();
        Certificate::from_structure(&s, Provenance::new("test", serde_json::json!({}), None))
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let c = c3_cert();
        let text = c.to_canonical_string();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back.to_canonical_string(), text);
        back.verify(true).unwrap();
        // keys come out sorted
        let a = text.find("\"cocycle\"").unwrap();
        let b = text.find("\"format\"").unwrap();
        let c2 = text.find("\"provenance\"").unwrap();
        assert!(a < b && b < c2);
    }

    #[test]
    fn corrupted_certificate_fails() {
        let mut c = c3_cert();
        c.cocycle.as_mut().unwrap().images[2] = vec![1];
        assert!(matches!(c.verify(true), Err(CertificateError::Failed(_))));
        assert!(matches!(Certificate::parse("{\"format\": \"iyb-cert/1\""), Err(CertificateError::Malformed(_))));
    }
}

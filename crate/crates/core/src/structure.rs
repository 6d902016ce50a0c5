//! Flat JSON files for the objects the command line reads and writes.
//!
//! Every file is an object tagged by `"kind"`. Bracket-side objects use
//! 1-based indices and the jet order `"N"`; algebra-side objects (`r`,
//! `alpha`) use 0-based indices and the grade cap `"cap"`.

use serde::{Deserialize, Serialize};

use crate::bialgebra::{AlphaTable, IndexedValue2, IndexedValue3, RMatrix, Tensor2};
use crate::error::{Error, Result};
use crate::phi::{LambdaEntry, PhiJson, PhiSeries};
use crate::poisson::{LambdaTable, MuSeq, OmegaEntryJson, OmegaTable};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StructureFile {
    Mu {
        d: usize,
        #[serde(rename = "N")]
        n: usize,
        /// `mu_1, ..., mu_{N+d}`.
        #[serde(with = "rational::serde_vec")]
        mu: Vec<Rational>,
    },
    Lambda {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
        #[serde(rename = "N")]
        n: usize,
        lambda: Vec<LambdaEntry>,
    },
    Omega {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
        #[serde(rename = "N")]
        n: usize,
        omega: Vec<OmegaEntryJson>,
    },
    Phi {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
        lambda_def: Option<Rational>,
        #[serde(flatten)]
        phi: PhiJson,
    },
    R {
        cap: usize,
        r: Vec<IndexedValue2>,
    },
    Alpha {
        cap: usize,
        alpha: Vec<IndexedValue3>,
    },
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&rational::format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| rational::parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl StructureFile {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureFile::Mu { .. } => "mu",
            StructureFile::Lambda { .. } => "lambda",
            StructureFile::Omega { .. } => "omega",
            StructureFile::Phi { .. } => "phi",
            StructureFile::R { .. } => "r",
            StructureFile::Alpha { .. } => "alpha",
        }
    }

    pub fn from_mu(mu: &MuSeq) -> Self {
        StructureFile::Mu {
            d: mu.d(),
            n: mu.n(),
            mu: mu.values().to_vec(),
        }
    }

    pub fn from_lambda(d: Option<usize>, t: &LambdaTable) -> Self {
        StructureFile::Lambda {
            d,
            n: t.n(),
            lambda: t.to_json(),
        }
    }

    pub fn from_omega(d: Option<usize>, t: &OmegaTable) -> Self {
        StructureFile::Omega {
            d,
            n: t.n(),
            omega: t.to_json(),
        }
    }

    pub fn from_phi(d: Option<usize>, lambda_def: Option<Rational>, phi: &PhiSeries) -> Self {
        StructureFile::Phi {
            d,
            lambda_def,
            phi: phi.to_json(),
        }
    }

    pub fn from_r(r: &RMatrix) -> Self {
        StructureFile::R {
            cap: r.cap(),
            r: r.to_json(),
        }
    }

    pub fn from_alpha(a: &AlphaTable) -> Self {
        StructureFile::Alpha {
            cap: a.cap(),
            alpha: a.to_json(),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn mu(&self) -> Result<MuSeq> {
        match self {
            StructureFile::Mu { d, n, mu } => MuSeq::new(*d, *n, mu.clone()),
            other => Err(wrong_kind("mu", other)),
        }
    }

    pub fn lambda(&self) -> Result<LambdaTable> {
        match self {
            StructureFile::Lambda { n, lambda, .. } => LambdaTable::from_json(*n, lambda),
            other => Err(wrong_kind("lambda", other)),
        }
    }

    pub fn omega(&self) -> Result<OmegaTable> {
        match self {
            StructureFile::Omega { n, omega, .. } => OmegaTable::from_json(*n, omega),
            other => Err(wrong_kind("omega", other)),
        }
    }

    pub fn phi(&self) -> Result<PhiSeries> {
        match self {
            StructureFile::Phi { phi, .. } => PhiSeries::from_json(phi),
            other => Err(wrong_kind("phi", other)),
        }
    }

    pub fn r(&self) -> Result<RMatrix> {
        match self {
            StructureFile::R { cap, r } => Tensor2::from_json(*cap, r),
            other => Err(wrong_kind("r", other)),
        }
    }

    pub fn alpha(&self) -> Result<AlphaTable> {
        match self {
            StructureFile::Alpha { cap, alpha } => AlphaTable::from_json(*cap, alpha),
            other => Err(wrong_kind("alpha", other)),
        }
    }

    /// The `d` recorded in the file, if any.
    pub fn d(&self) -> Option<usize> {
        match self {
            StructureFile::Mu { d, .. } => Some(*d),
            StructureFile::Lambda { d, .. } | StructureFile::Omega { d, .. } | StructureFile::Phi { d, .. } => *d,
            _ => None,
        }
    }
}

fn wrong_kind(expected: &str, found: &StructureFile) -> Error {
    Error::Parse(format!("expected a {expected} file, found kind {}", found.kind()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::alpha_family_13_table;
    use crate::phi::phi_d_lambda;
    use crate::poisson::{lambda_from_mu, omega_special, RelationMode};
    use crate::rational::{int, ratio};

    fn round_trip(f: &StructureFile) -> StructureFile {
        StructureFile::from_json_str(&f.to_json_string().unwrap()).unwrap()
    }

    #[test]
    fn every_kind_round_trips() {
        let mu = MuSeq::from_tail(2, 5, &[int(1), ratio(1, 2)]).unwrap().enforce_relation();
        let f = StructureFile::from_mu(&mu);
        assert_eq!(round_trip(&f).mu().unwrap(), mu);

        let lam = lambda_from_mu(&mu, RelationMode::Strict).unwrap();
        assert_eq!(round_trip(&StructureFile::from_lambda(Some(2), &lam)).lambda().unwrap(), lam);

        let w = omega_special(1, 4).unwrap();
        assert_eq!(round_trip(&StructureFile::from_omega(Some(1), &w)).omega().unwrap(), w);

        let phi = phi_d_lambda(2, &ratio(1, 3), 8).unwrap();
        let f = StructureFile::from_phi(Some(2), Some(ratio(1, 3)), &phi);
        let back = round_trip(&f);
        assert_eq!(back.phi().unwrap(), phi);
        assert_eq!(back, f);

        let a = alpha_family_13_table(2, 6).unwrap();
        assert_eq!(round_trip(&StructureFile::from_alpha(&a)).alpha().unwrap(), a);
    }

    #[test]
    fn tagged_layout() {
        let mu = MuSeq::unit(1, 2);
        let s = serde_json::to_string(&StructureFile::from_mu(&mu)).unwrap();
        assert_eq!(s, r#"{"kind":"mu","d":1,"N":2,"mu":["0/1","1/1","0/1"]}"#);
        let f = StructureFile::from_json_str(&s).unwrap();
        assert!(f.omega().is_err());
        assert!(StructureFile::from_json_str(r#"{"kind":"nope"}"#).is_err());
    }
}

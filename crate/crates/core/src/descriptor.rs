//! Serializable descriptors for rings, polynomials and module
//! presentations: the payload vocabulary of the CLI config format and the
//! browser demo.

use serde::{Deserialize, Serialize};

use crate::mpoly::AlgebraElt;
use crate::padic::{make_ring, LocalRingSpec};
use crate::presentation::ModulePresentation;
use crate::{Error, Result};

fn default_precision() -> u32 {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDescriptor {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    #[serde(default = "default_precision")]
    pub precision: u32,
}

impl RingDescriptor {
    pub fn build(&self) -> Result<LocalRingSpec> {
        make_ring(self.p, self.e, self.f, self.precision)
    }
}

/// One polynomial term: exponent vector and coefficient coordinates in the
/// tower basis (a single integer for base-ring coefficients).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exps: Vec<u32>,
    pub coeff: Vec<i64>,
}

pub type PolyDescriptor = Vec<PolyTerm>;

pub fn build_poly(ring: &LocalRingSpec, vars: usize, terms: &PolyDescriptor) -> Result<AlgebraElt> {
    let mut out = AlgebraElt::zero(vars);
    for t in terms {
        if t.exps.len() != vars {
            return Err(Error::InvalidParameter(format!(
                "term exponent vector {:?} does not have {vars} entries",
                t.exps
            )));
        }
        if t.coeff.len() > ring.dim() {
            return Err(Error::InvalidParameter(format!(
                "coefficient has {} coordinates, the ring has rank {}",
                t.coeff.len(),
                ring.dim()
            )));
        }
        let mut c = ring.zero();
        for (i, &v) in t.coeff.iter().enumerate() {
            c.coeffs[i] = v.rem_euclid(ring.modulus as i64) as u64;
        }
        out.insert_add(ring, t.exps.clone(), c);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDescriptor {
    Free {
        rank: usize,
    },
    Elementary {
        #[serde(default)]
        free_rank: usize,
        #[serde(default)]
        pi_exponents: Vec<u32>,
        #[serde(default)]
        series: Vec<PolyDescriptor>,
    },
    Cyclic {
        poly: PolyDescriptor,
    },
    Generic {
        ambient_rank: usize,
        relations: Vec<Vec<PolyDescriptor>>,
    },
}

pub fn build_module(
    ring: &LocalRingSpec,
    vars: usize,
    desc: &ModuleDescriptor,
) -> Result<ModulePresentation> {
    match desc {
        ModuleDescriptor::Free { rank } => {
            Ok(ModulePresentation::free(ring.clone(), vars, *rank))
        }
        ModuleDescriptor::Elementary {
            free_rank,
            pi_exponents,
            series,
        } => {
            let series = series
                .iter()
                .map(|s| build_poly(ring, vars, s))
                .collect::<Result<Vec<_>>>()?;
            ModulePresentation::elementary(
                ring.clone(),
                vars,
                *free_rank,
                pi_exponents.clone(),
                series,
            )
        }
        ModuleDescriptor::Cyclic { poly } => {
            let h = build_poly(ring, vars, poly)?;
            if h.is_zero() {
                return Err(Error::InvalidParameter("cyclic payload is zero".into()));
            }
            Ok(ModulePresentation::cyclic(ring.clone(), h))
        }
        ModuleDescriptor::Generic {
            ambient_rank,
            relations,
        } => {
            let rels = relations
                .iter()
                .map(|rel| {
                    rel.iter()
                        .map(|p| build_poly(ring, vars, p))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            ModulePresentation::generic(ring.clone(), vars, *ambient_rank, rels)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_roundtrip() {
        let ring = make_ring(3, 1, 1, 8).unwrap();
        let desc = vec![
            PolyTerm {
                exps: vec![1, 0],
                coeff: vec![1],
            },
            PolyTerm {
                exps: vec![0, 0],
                coeff: vec![3],
            },
        ];
        let h = build_poly(&ring, 2, &desc).unwrap();
        assert_eq!(
            h,
            AlgebraElt::from_int_terms(&ring, 2, &[(vec![1, 0], 1), (vec![0, 0], 3)])
        );
    }

    #[test]
    fn module_descriptor_json() {
        let j = r#"{"kind":"elementary","pi_exponents":[2,1]}"#;
        let desc: ModuleDescriptor = serde_json::from_str(j).unwrap();
        let ring = make_ring(2, 1, 1, 8).unwrap();
        let m = build_module(&ring, 1, &desc).unwrap();
        assert_eq!(m.ambient_rank, 2);
        // unknown keys are rejected
        let bad = r#"{"kind":"free","rank":1,"extra":5}"#;
        assert!(serde_json::from_str::<ModuleDescriptor>(bad).is_err());
    }
}

//! Finite-abelian-p-group arithmetic for the Hom-counting identity
//! `v_p(|Hom(Y, (F/O)[pi^k]^d)|) = d * v_p(|(Y tensor O)/pi^k|)` and the
//! truncation-defect bound, with exhaustive oracles.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::padic::{make_ring, LocalRingSpec};
use crate::presentation::{diagonalize, FinitePresentation};
use crate::{EngineLimits, Error, Result};

/// A finite abelian p-group `sum Z/p^(x_i)`, exponents sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FiniteAbelianPGroup {
    pub exponents: Vec<u32>,
}

impl FiniteAbelianPGroup {
    pub fn new(mut exponents: Vec<u32>) -> Result<Self> {
        if exponents.iter().any(|&x| x == 0) {
            return Err(Error::InvalidParameter(
                "group exponents must be positive".into(),
            ));
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FiniteAbelianPGroup { exponents })
    }

    pub fn trivial() -> Self {
        FiniteAbelianPGroup {
            exponents: Vec::new(),
        }
    }

    /// `log_p` of the group order.
    pub fn log_order(&self) -> u64 {
        self.exponents.iter().map(|&x| x as u64).sum()
    }
}

/// Target data: `A[pi^k]` for `A = (F/O)^d` over the given ring.
#[derive(Debug, Clone)]
pub struct HomSpec {
    pub ring: LocalRingSpec,
    pub d: u32,
    pub k: u32,
}

impl HomSpec {
    pub fn new(ring: LocalRingSpec, d: u32, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if k > ring.e * ring.precision {
            return Err(Error::InvalidParameter(format!(
                "k = {k} exceeds the pi-precision e*N = {}",
                ring.e * ring.precision
            )));
        }
        Ok(HomSpec { ring, d, k })
    }
}

/// `v_p(|Hom(Y, (F/O)[pi^k]^d)|) = d * sum_i f * min(e*x_i, k)`.
pub fn hom_valuation(group: &FiniteAbelianPGroup, spec: &HomSpec) -> u64 {
    spec.d as u64 * tensor_quotient_valuation(group, spec)
}

/// `v_p(|(Y tensor O)/pi^k|) = sum_i f * min(e*x_i, k)`.
pub fn tensor_quotient_valuation(group: &FiniteAbelianPGroup, spec: &HomSpec) -> u64 {
    let e = spec.ring.e as u64;
    let f = spec.ring.f as u64;
    let k = spec.k as u64;
    group
        .exponents
        .iter()
        .map(|&x| f * (e * x as u64).min(k))
        .sum()
}

/// Counts homomorphisms by enumerating images of the cyclic generators
/// with the order constraint `p^x * image = 0` checked in ring arithmetic.
pub fn hom_brute_force(
    group: &FiniteAbelianPGroup,
    spec: &HomSpec,
    limits: &EngineLimits,
) -> Result<u64> {
    let ring = &spec.ring;
    let p = ring.p;
    let digits = (spec.k * ring.f) as u64 * spec.d as u64;
    let size = (p as f64).powi(digits as i32);
    if !(size <= limits.max_enumeration as f64) {
        return Err(Error::SizeCap(format!(
            "target enumeration p^{digits} exceeds cap {}",
            limits.max_enumeration
        )));
    }
    let count = p.pow(digits as u32);
    let per_coord = (spec.k * ring.f) as usize;
    let mut total_v = 0u64;
    let mut distinct: Vec<u32> = group.exponents.clone();
    distinct.dedup();
    let mut counts = std::collections::HashMap::new();
    for &x in &distinct {
        // image order constraint: p^x * b = 0 in (O/pi^k)^d
        let scalar = if x >= ring.precision {
            0
        } else {
            p.pow(x) % ring.modulus
        };
        let mut matches = 0u64;
        for idx in 0..count {
            let mut rem = idx;
            let mut ok = true;
            for _ in 0..spec.d {
                let mut dg = vec![0u64; per_coord];
                for slot in dg.iter_mut() {
                    *slot = rem % p;
                    rem /= p;
                }
                let b = ring.from_pi_digits(&dg);
                let pb = ring.scalar_mul(scalar, &b);
                if !ring.is_zero(&ring.reduce_mod_pi_pow(&pb, spec.k)) {
                    ok = false;
                    break;
                }
            }
            if ok {
                matches += 1;
            }
        }
        let mut v = 0u64;
        let mut s = matches;
        while s > 1 {
            debug_assert!(s % p == 0, "|B[p^x]| must be a p-power");
            s /= p;
            v += 1;
        }
        counts.insert(x, v);
    }
    for &x in &group.exponents {
        total_v += counts[&x];
    }
    Ok(total_v)
}

/// Quotient of `Y` by the subgroup generated by the given elements
/// (coordinates with respect to the cyclic decomposition), as an exponent
/// list.
pub fn quotient_exponents(
    group: &FiniteAbelianPGroup,
    p: u64,
    generators: &[Vec<u64>],
) -> Result<FiniteAbelianPGroup> {
    let m = group.exponents.len();
    if m == 0 {
        return Ok(FiniteAbelianPGroup::trivial());
    }
    let x_max = *group.exponents.iter().max().unwrap();
    let base = make_ring(p, 1, 1, (x_max + 2).max(4))?;
    let cols = m + generators.len();
    let mut entries = vec![base.zero(); m * cols];
    for (i, &x) in group.exponents.iter().enumerate() {
        entries[i * cols + i] = base.from_u64(base.p.pow(x));
    }
    for (j, g) in generators.iter().enumerate() {
        assert_eq!(g.len(), m, "generator coordinate length mismatch");
        for (i, &c) in g.iter().enumerate() {
            entries[i * cols + m + j] = base.from_u64(c);
        }
    }
    let fp = FinitePresentation::from_entries(base, m, cols, entries);
    let diag = diagonalize(&fp, x_max);
    let mut exps: Vec<u32> = diag.pivots.into_iter().filter(|&t| t > 0).collect();
    exps.extend(std::iter::repeat(x_max).take(diag.unresolved_rows));
    if exps.is_empty() {
        return Ok(FiniteAbelianPGroup::trivial());
    }
    FiniteAbelianPGroup::new(exps)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DefectReport {
    pub bound: u64,
    pub max_defect: u64,
    pub samples: usize,
    pub exhaustive: bool,
    pub ok: bool,
}

/// Checks `|d * tqv(Y'') - d * tqv(Y)| <= f*d*k*c_rank` over quotients of
/// `Y` by subgroups generated by `c_rank` elements: exhaustively over all
/// elements for cyclic subgroups of groups with at most 2^12 elements,
/// otherwise over 200 seeded pseudo-random generator tuples.
pub fn defect_bound_check(
    group: &FiniteAbelianPGroup,
    c_rank: u32,
    spec: &HomSpec,
    seed: u64,
) -> Result<DefectReport> {
    let f = spec.ring.f as u64;
    let d = spec.d as u64;
    let k = spec.k as u64;
    let p = spec.ring.p;
    let bound = f * d * k * c_rank as u64;
    let reference = d * tensor_quotient_valuation(group, spec);
    if c_rank == 0 {
        return Ok(DefectReport {
            bound,
            max_defect: 0,
            samples: 1,
            exhaustive: true,
            ok: true,
        });
    }
    let exhaustive =
        c_rank == 1 && (group.log_order() as f64) * (p as f64).log2() <= 12.0 + 1e-9;
    let tuples: Vec<Vec<Vec<u64>>> = if exhaustive {
        enumerate_elements(group, p)
            .into_iter()
            .map(|el| vec![el])
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..200)
            .map(|_| {
                (0..c_rank)
                    .map(|_| {
                        group
                            .exponents
                            .iter()
                            .map(|&x| rng.gen_range(0..p.pow(x)))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };
    let mut max_defect = 0u64;
    let samples = tuples.len();
    for gens in tuples {
        let quot = quotient_exponents(group, p, &gens)?;
        let v = d * tensor_quotient_valuation(&quot, spec);
        let defect = reference.abs_diff(v);
        max_defect = max_defect.max(defect);
        if defect > bound {
            return Ok(DefectReport {
                bound,
                max_defect,
                samples,
                exhaustive,
                ok: false,
            });
        }
    }
    Ok(DefectReport {
        bound,
        max_defect,
        samples,
        exhaustive,
        ok: true,
    })
}

/// All elements of the group as coordinate vectors.
pub fn enumerate_elements(group: &FiniteAbelianPGroup, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &x in &group.exponents {
        let cap = p.pow(x);
        let mut next = Vec::with_capacity(out.len() * cap as usize);
        for prefix in &out {
            for c in 0..cap {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A seeded random group with bounded rank and exponents.
pub fn random_group(rng: &mut ChaCha8Rng, max_rank: usize, max_exp: u32) -> FiniteAbelianPGroup {
    let rank = rng.gen_range(0..=max_rank);
    let exps: Vec<u32> = (0..rank).map(|_| rng.gen_range(1..=max_exp)).collect();
    if exps.is_empty() {
        FiniteAbelianPGroup::trivial()
    } else {
        FiniteAbelianPGroup::new(exps).unwrap()
    }
}

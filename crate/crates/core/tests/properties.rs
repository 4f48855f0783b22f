//! Property tests for the exact-arithmetic invariants the engine relies on.

use proptest::prelude::*;

use iwalg::algebra::{
    apply_automorphism, norm_series, pi_content, psi_eval, special_generator, unimodular_to_e1,
    SpecialPrimeTag,
};
use iwalg::cyclo::{CycloRing, CycloVal};
use iwalg::invariants::l0_direct;
use iwalg::mpoly::AlgebraElt;
use iwalg::padic::{make_ring, LocalRingSpec, PiValuation, RingElt};
use iwalg::presentation::{
    brute_force_valuation, quotient_valuation, FinitePresentation, ModulePresentation,
};
use iwalg::EngineLimits;

/// The (p, e, f) grid the spec's padic invariants quantify over.
const RING_GRID: &[(u64, u32, u32)] = &[
    (2, 1, 1),
    (2, 2, 1),
    (2, 1, 2),
    (2, 2, 2),
    (3, 1, 1),
    (3, 2, 1),
    (3, 1, 2),
    (3, 2, 2),
];

fn grid_ring(idx: usize) -> LocalRingSpec {
    let (p, e, f) = RING_GRID[idx % RING_GRID.len()];
    make_ring(p, e, f, 10).unwrap()
}

fn elt_from_seed(ring: &LocalRingSpec, seed: &[u64]) -> RingElt {
    let mut z = ring.zero();
    for (i, slot) in z.coeffs.iter_mut().enumerate() {
        *slot = seed[i % seed.len()] % ring.modulus;
    }
    z
}

fn poly_from_seed(ring: &LocalRingSpec, vars: usize, seed: &[(Vec<u32>, u64)]) -> AlgebraElt {
    let mut h = AlgebraElt::zero(vars);
    for (exps, c) in seed {
        let e: Vec<u32> = (0..vars).map(|i| exps[i % exps.len()] % 4).collect();
        h.insert_add(ring, e, ring.from_u64(*c));
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn v_pi_is_additive(idx in 0usize..8, a in proptest::collection::vec(1u64..5000, 1..5),
                        b in proptest::collection::vec(1u64..5000, 1..5)) {
        let ring = grid_ring(idx);
        let x = elt_from_seed(&ring, &a);
        let y = elt_from_seed(&ring, &b);
        let (PiValuation::Finite(va), PiValuation::Finite(vb)) = (ring.v_pi(&x), ring.v_pi(&y))
        else { return Ok(()); };
        // only meaningful below the precision cap
        prop_assume!(va + vb < ring.e * ring.precision);
        prop_assert_eq!(ring.v_pi(&ring.mul(&x, &y)), PiValuation::Finite(va + vb));
    }

    #[test]
    fn norm_valuation_is_f_times_v_pi(idx in 0usize..8,
                                      a in proptest::collection::vec(1u64..5000, 1..5)) {
        let ring = grid_ring(idx);
        let x = elt_from_seed(&ring, &a);
        let PiValuation::Finite(v) = ring.v_pi(&x) else { return Ok(()); };
        prop_assume!(ring.f * v < ring.precision);
        let n = ring.norm_to_zp(&x).unwrap();
        prop_assert_eq!(
            iwalg::padic::vp_u64(n, ring.p, ring.precision),
            ring.f * v
        );
    }

    #[test]
    fn cyclo_vp_is_galois_invariant(pm in 0usize..4,
                                    coeffs in proptest::collection::vec(0u64..200, 1..6),
                                    u_idx in 0usize..6) {
        let (p, m) = [(2u64, 2u32), (2, 3), (3, 1), (3, 2)][pm];
        let ring = CycloRing::new(p, m, 16).unwrap();
        let mut a = ring.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            a.coeffs[i % a.coeffs.len()] = (a.coeffs[i % a.coeffs.len()] + c) % ring.modulus;
        }
        let units: Vec<u64> = (1..p.pow(m)).filter(|&u| u % p != 0).collect();
        let u = units[u_idx % units.len()];
        prop_assert_eq!(ring.v_p(&ring.galois(&a, u)), ring.v_p(&a));
    }

    #[test]
    fn lambda_valuation_is_reciprocal_phi(pm in 0usize..5) {
        let (p, m) = [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2)][pm];
        let ring = CycloRing::new(p, m, 16).unwrap();
        let lam = ring.sub(&ring.zeta_pow(1), &ring.from_u64(1));
        let phi = ring.degree() as i64;
        prop_assert_eq!(
            ring.v_p(&lam),
            CycloVal::Finite(num_rational::Ratio::new(1, phi))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pi_content_is_additive_on_products(
        idx in 0usize..8,
        s1 in proptest::collection::vec((proptest::collection::vec(0u32..4, 2), 1u64..500), 1..4),
        s2 in proptest::collection::vec((proptest::collection::vec(0u32..4, 2), 1u64..500), 1..4),
    ) {
        let ring = grid_ring(idx);
        let h1 = poly_from_seed(&ring, 2, &s1);
        let h2 = poly_from_seed(&ring, 2, &s2);
        prop_assume!(!h1.is_zero() && !h2.is_zero());
        let (Ok(c1), Ok(c2)) = (pi_content(&ring, &h1), pi_content(&ring, &h2)) else {
            return Ok(());
        };
        prop_assume!(c1 + c2 + 1 < ring.e * ring.precision);
        let prod = h1.mul(&ring, &h2);
        prop_assert_eq!(pi_content(&ring, &prod).unwrap(), c1 + c2);
    }

    #[test]
    fn norm_series_is_multiplicative(
        idx in 0usize..8,
        s1 in proptest::collection::vec((proptest::collection::vec(0u32..3, 1), 1u64..300), 1..3),
        s2 in proptest::collection::vec((proptest::collection::vec(0u32..3, 1), 1u64..300), 1..3),
    ) {
        let ring = grid_ring(idx);
        let base = make_ring(ring.p, 1, 1, ring.precision).unwrap();
        let h1 = poly_from_seed(&ring, 1, &s1);
        let h2 = poly_from_seed(&ring, 1, &s2);
        prop_assume!(!h1.is_zero() && !h2.is_zero());
        let prod = h1.mul(&ring, &h2);
        let (Ok(n1), Ok(n2), Ok(np)) = (
            norm_series(&ring, &base, &h1),
            norm_series(&ring, &base, &h2),
            norm_series(&ring, &base, &prod),
        ) else { return Ok(()); };
        prop_assert_eq!(np, n1.mul(&base, &n2));
    }

    #[test]
    fn norm_series_content_scales_by_f(
        idx in 0usize..8,
        s in proptest::collection::vec((proptest::collection::vec(0u32..3, 1), 1u64..300), 1..4),
    ) {
        let ring = grid_ring(idx);
        let base = make_ring(ring.p, 1, 1, ring.precision).unwrap();
        let h = poly_from_seed(&ring, 1, &s);
        prop_assume!(!h.is_zero());
        let Ok(c) = pi_content(&ring, &h) else { return Ok(()); };
        prop_assume!(ring.f * c + 2 < ring.precision);
        let Ok(n) = norm_series(&ring, &base, &h) else { return Ok(()); };
        prop_assert_eq!(pi_content(&base, &n).unwrap(), ring.f * c);
    }

    #[test]
    fn psi_eval_is_a_ring_homomorphism(
        p_idx in 0usize..2,
        s1 in proptest::collection::vec((proptest::collection::vec(0u32..3, 2), 0u64..50), 1..4),
        s2 in proptest::collection::vec((proptest::collection::vec(0u32..3, 2), 0u64..50), 1..4),
        orders in proptest::collection::vec(0u32..3, 2),
    ) {
        let p = [2u64, 3][p_idx];
        let base = make_ring(p, 1, 1, 8).unwrap();
        let h1 = poly_from_seed(&base, 2, &s1);
        let h2 = poly_from_seed(&base, 2, &s2);
        let choices = vec![1u64, 1];
        let ev = |h: &AlgebraElt| psi_eval(&base, h, &orders, &choices, 20).unwrap().1;
        let ring = psi_eval(&base, &h1, &orders, &choices, 20).unwrap().0;
        let sum = h1.add(&base, &h2);
        prop_assert_eq!(ev(&sum), ring.add(&ev(&h1), &ev(&h2)));
        let prod = h1.mul(&base, &h2);
        prop_assert_eq!(ev(&prod), ring.mul(&ev(&h1), &ev(&h2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn automorphism_preserves_content_and_special_primes(
        idx in 0usize..8,
        tag_exps in proptest::collection::vec(-2i64..=2, 2),
        m_extra in 0i64..2,
    ) {
        let ring = grid_ring(idx);
        let Ok(tag) = SpecialPrimeTag::new(tag_exps, ring.p) else { return Ok(()); };
        let limits = EngineLimits::default();
        // a unimodular matrix: completion of the tag composed with a shear
        let mut m = unimodular_to_e1(&tag.exps);
        m[0][1] += m_extra * m[0][0];
        m[1][1] += m_extra * m[1][0];
        prop_assume!(iwalg::algebra::int_det(&m).unsigned_abs() % ring.p != 0);
        let g = special_generator(&ring, &tag, 2);
        let img = apply_automorphism(&ring, &g, &m, ring.p, limits.degree_cap).unwrap();
        // content preserved (both are 0 for special generators)
        prop_assert_eq!(pi_content(&ring, &img).unwrap(), pi_content(&ring, &g).unwrap());
        // mod pi, the image generates a special prime again: l0 stays 1
        let cert = l0_direct(&ring, &img, &limits).unwrap();
        prop_assert_eq!(cert.l0, 1);
        prop_assert_eq!(cert.certificate.len(), 1);
    }

    #[test]
    fn l0_is_automorphism_invariant(
        shear in -2i64..=2,
        swap in proptest::bool::ANY,
        terms in proptest::collection::vec((proptest::collection::vec(0u32..3, 2), 1u64..30), 1..4),
    ) {
        let ring = make_ring(3, 1, 1, 8).unwrap();
        let limits = EngineLimits::default();
        let h = poly_from_seed(&ring, 2, &terms);
        prop_assume!(!h.is_zero());
        prop_assume!(pi_content(&ring, &h) == Ok(0));
        let mut m = if swap { vec![vec![0, 1], vec![1, 0]] } else { vec![vec![1, 0], vec![0, 1]] };
        m[0][0] += 0; m[0][1] += shear * m[0][0];
        m[1][1] += shear * m[1][0];
        prop_assume!(iwalg::algebra::int_det(&m).unsigned_abs() == 1);
        let Ok(img) = apply_automorphism(&ring, &h, &m, ring.p, limits.degree_cap) else {
            return Ok(());
        };
        prop_assert_eq!(
            l0_direct(&ring, &img, &limits).unwrap().l0,
            l0_direct(&ring, &h, &limits).unwrap().l0
        );
    }

    #[test]
    fn normal_form_matches_enumeration(
        idx in 0usize..8,
        rows in 1usize..3,
        cols in 0usize..4,
        k in 1u32..3,
        seeds in proptest::collection::vec(0u64..100000, 12),
    ) {
        let ring = grid_ring(idx);
        let log2_size = (k * ring.f) as f64 * rows as f64 * (ring.p as f64).log2();
        prop_assume!(log2_size <= 14.0);
        let entries: Vec<RingElt> = (0..rows * cols)
            .map(|i| elt_from_seed(&ring, &[seeds[i % seeds.len()], seeds[(i + 5) % seeds.len()]]))
            .collect();
        let fp = FinitePresentation::from_entries(ring, rows, cols, entries);
        let limits = EngineLimits::default();
        prop_assert_eq!(
            quotient_valuation(&fp, k),
            brute_force_valuation(&fp, k, &limits).unwrap()
        );
    }

    #[test]
    fn quotient_valuation_is_monotone(
        p_idx in 0usize..2,
        terms in proptest::collection::vec((proptest::collection::vec(0u32..3, 1), 1u64..50), 1..3),
    ) {
        let p = [2u64, 3][p_idx];
        let ring = make_ring(p, 1, 1, 8).unwrap();
        let h = poly_from_seed(&ring, 1, &terms);
        prop_assume!(!h.is_zero());
        let m = ModulePresentation::cyclic(ring, h);
        let limits = EngineLimits::default();
        let mut prev_by_k = Vec::new();
        for n in 1..=3u32 {
            let fp = m.coinvariants(&[n], &limits).unwrap();
            let mut vals = Vec::new();
            for k in 1..=3u32 {
                vals.push(quotient_valuation(&fp, k));
            }
            // non-decreasing in k
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
            // non-decreasing in n
            if let Some(prev) = &prev_by_k {
                let prev: &Vec<u64> = prev;
                for (a, b) in prev.iter().zip(&vals) {
                    prop_assert!(b >= a);
                }
            }
            prev_by_k = Some(vals);
        }
    }
}

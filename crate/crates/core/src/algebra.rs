//! Operations on polynomial representatives of elements of
//! `O[[T_1,...,T_l]] = O[[G]]`, `G = Z_p^l`, `T_i = sigma_i - 1`:
//! omega polynomials, pi-content, reduction mod pi, special-prime
//! generators, coordinate changes, the norm map down to `Z_p[[G]]`,
//! and evaluation at tuples of p-power roots of unity.

use crate::cyclo::{CycloElt, CycloRing};
use crate::mpoly::{check_degree_cap, AlgebraElt, CoeffRing, FqPoly, MPoly};
use crate::padic::{LocalRingSpec, PiValuation};
use crate::{Error, Result};

/// `omega_n(T_i) = (1 + T_i)^(p^n) - 1`, expanded exactly.
pub fn omega(ring: &LocalRingSpec, n: u32, i: usize, l: usize) -> AlgebraElt {
    let pw = ring.p.pow(n);
    let one = AlgebraElt::one(ring, l);
    AlgebraElt::one_plus_var_pow(ring, i, pw, l).sub(ring, &one)
}

/// Minimum of `v_pi` over the coefficients of `h`; this is
/// `mu(O[[G]]/(h))` for cyclic torsion modules.
pub fn pi_content(ring: &LocalRingSpec, h: &AlgebraElt) -> Result<u32> {
    let mut best: Option<u32> = None;
    for c in h.terms.values() {
        if let PiValuation::Finite(v) = ring.v_pi(c) {
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best.ok_or(Error::ZeroInput("pi_content"))
}

/// Exact division of every coefficient by `pi^c`.
pub fn div_pi_content(ring: &LocalRingSpec, h: &AlgebraElt, c: u32) -> Result<AlgebraElt> {
    if c == 0 {
        return Ok(h.clone());
    }
    if c + 1 >= ring.e * ring.precision {
        return Err(Error::PrecisionExhausted(format!(
            "content {c} leaves no usable pi-digits at precision e*N = {}",
            ring.e * ring.precision
        )));
    }
    let mut out = AlgebraElt::zero(h.vars);
    for (m, coeff) in &h.terms {
        let mut x = coeff.clone();
        for _ in 0..c {
            x = ring.div_pi_exact(&x)?;
        }
        out.insert_add(ring, m.clone(), x);
    }
    Ok(out)
}

/// Coefficientwise reduction to the residue field. The caller divides out
/// the pi-content first.
pub fn reduce_mod_pi(ring: &LocalRingSpec, h: &AlgebraElt) -> Result<FqPoly> {
    let fq = ring.residue_field();
    let out = h.map_coeffs(&fq, |c| ring.pi_digit(c, 0));
    if out.is_zero() {
        return Err(Error::ZeroInput("reduce_mod_pi (input is 0 mod pi)"));
    }
    Ok(out)
}

/// A special prime `P = (sigma - 1)` of `Omega[[G]]`, tagged by the
/// primitive integer exponent vector of `sigma = prod sigma_i^(a_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct SpecialPrimeTag {
    pub exps: Vec<i64>,
}

impl SpecialPrimeTag {
    /// Normalises an exponent vector: divides by the gcd (a p-adic unit for
    /// valid tags) and makes the first nonzero entry positive.
    pub fn new(exps: Vec<i64>, p: u64) -> Result<SpecialPrimeTag> {
        if exps.iter().all(|&a| a == 0) {
            return Err(Error::InvalidParameter("zero exponent vector".into()));
        }
        let mut g = 0u64;
        for &a in &exps {
            g = gcd(g, a.unsigned_abs());
        }
        if g % p == 0 {
            return Err(Error::InvalidParameter(
                "all exponents divisible by p: sigma lies in G^p".into(),
            ));
        }
        let mut out: Vec<i64> = exps.iter().map(|&a| a / g as i64).collect();
        if out.iter().find(|&&a| a != 0).is_some_and(|&a| a < 0) {
            for a in &mut out {
                *a = -*a;
            }
        }
        Ok(SpecialPrimeTag { exps: out })
    }

    /// All canonical tags with entries bounded by `bound` in absolute value.
    pub fn enumerate(l: usize, bound: i64) -> Vec<SpecialPrimeTag> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; l];
        enumerate_rec(&mut cur, 0, bound, &mut out);
        out
    }
}

fn enumerate_rec(cur: &mut Vec<i64>, idx: usize, bound: i64, out: &mut Vec<SpecialPrimeTag>) {
    if idx == cur.len() {
        let mut g = 0u64;
        for &a in cur.iter() {
            g = gcd(g, a.unsigned_abs());
        }
        if g != 1 {
            return;
        }
        if cur.iter().find(|&&a| a != 0).is_some_and(|&a| a > 0) {
            out.push(SpecialPrimeTag { exps: cur.clone() });
        }
        return;
    }
    for a in -bound..=bound {
        cur[idx] = a;
        enumerate_rec(cur, idx + 1, bound, out);
    }
    cur[idx] = 0;
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The polynomial `prod_{a_i > 0} (1+T_i)^(a_i) - prod_{a_i < 0} (1+T_i)^(-a_i)`,
/// an associate of `sigma - 1` for `sigma = prod (1+T_i)^(a_i)`.
pub fn special_generator<R: CoeffRing>(ring: &R, tag: &SpecialPrimeTag, l: usize) -> MPoly<R> {
    let mut pos = MPoly::one(ring, l);
    let mut neg = MPoly::one(ring, l);
    for (i, &a) in tag.exps.iter().enumerate() {
        if a > 0 {
            pos = pos.mul(ring, &MPoly::one_plus_var_pow(ring, i + 1, a as u64, l));
        } else if a < 0 {
            neg = neg.mul(ring, &MPoly::one_plus_var_pow(ring, i + 1, (-a) as u64, l));
        }
    }
    pos.sub(ring, &neg)
}

/// Integer determinant (Laplace expansion; the matrices here are at most
/// the group dimension, so this stays tiny).
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0i64;
    for (j, &mj) in m[0].iter().enumerate() {
        if mj == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        det += s * mj * int_det(&minor);
    }
    det
}

/// A unimodular integer matrix `M` with `a * M = e_1` (row vector times
/// matrix), for a primitive integer vector `a`. Used to carry the special
/// prime tagged by `a` to `(T_1)`.
pub fn unimodular_to_e1(a: &[i64]) -> Vec<Vec<i64>> {
    let l = a.len();
    let mut v = a.to_vec();
    let mut m: Vec<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
        .collect();
    // column operations on v, mirrored on m
    loop {
        let nonzero: Vec<usize> = (0..l).filter(|&j| v[j] != 0).collect();
        if nonzero.len() == 1 {
            let j = nonzero[0];
            assert!(v[j].abs() == 1, "input vector must be primitive");
            if j != 0 {
                v.swap(0, j);
                for row in m.iter_mut() {
                    row.swap(0, j);
                }
            }
            if v[0] < 0 {
                v[0] = -v[0];
                for row in m.iter_mut() {
                    row[0] = -row[0];
                }
            }
            return m;
        }
        let pivot = *nonzero
            .iter()
            .min_by_key(|&&j| v[j].unsigned_abs())
            .unwrap();
        for j in 0..l {
            if j == pivot || v[j] == 0 {
                continue;
            }
            let q = v[j].div_euclid(v[pivot]);
            if q != 0 {
                v[j] -= q * v[pivot];
                for row in m.iter_mut() {
                    let delta = q * row[pivot];
                    row[j] -= delta;
                }
            }
        }
    }
}

/// The ring automorphism induced by `(1+T_i) -> prod_j (1+T_j)^(M_ij)`,
/// applied to `h` and multiplied by the unit `prod_j (1+T_j)^(k_j)` that
/// clears negative exponents. The result is an associate of the image of
/// `h`, so every valuation-type invariant is preserved.
pub fn apply_automorphism<R: CoeffRing>(
    ring: &R,
    h: &MPoly<R>,
    mat: &[Vec<i64>],
    p: u64,
    degree_cap: u32,
) -> Result<MPoly<R>> {
    let l = h.vars;
    assert_eq!(mat.len(), l, "matrix size must match the variable count");
    let det = int_det(mat);
    if det == 0 || det.unsigned_abs() % p == 0 {
        return Err(Error::InvalidParameter(format!(
            "matrix determinant {det} is not a unit mod {p}"
        )));
    }
    // degree estimate before expanding anything
    let mut est: u64 = 0;
    for i in 0..l {
        let di = h.degree_in(i + 1) as u64;
        let width: u64 = mat[i].iter().map(|&x| x.unsigned_abs()).sum();
        est += di * width.max(1);
    }
    if est > degree_cap as u64 {
        return Err(Error::DegreeCap(format!(
            "estimated degree {est} exceeds cap {degree_cap}"
        )));
    }

    // T_i image = B_i / N_i with B_i = P_i - N_i, N_i a unit monomial in (1+T)
    let mut b = Vec::with_capacity(l);
    let mut n_unit = Vec::with_capacity(l);
    for row in mat.iter() {
        let mut pos = MPoly::one(ring, l);
        let mut neg = MPoly::one(ring, l);
        for (j, &mij) in row.iter().enumerate() {
            if mij > 0 {
                pos = pos.mul(ring, &MPoly::one_plus_var_pow(ring, j + 1, mij as u64, l));
            } else if mij < 0 {
                neg = neg.mul(ring, &MPoly::one_plus_var_pow(ring, j + 1, (-mij) as u64, l));
            }
        }
        b.push(pos.sub(ring, &neg));
        n_unit.push(neg);
    }
    let degs: Vec<u32> = (1..=l).map(|i| h.degree_in(i)).collect();
    let mut out = MPoly::zero(l);
    for (mono, coeff) in &h.terms {
        let mut term = MPoly::constant(ring, coeff.clone(), l);
        for i in 0..l {
            if mono[i] > 0 {
                term = term.mul(ring, &b[i].pow(ring, mono[i] as u64));
            }
            let pad = degs[i] - mono[i];
            if pad > 0 {
                term = term.mul(ring, &n_unit[i].pow(ring, pad as u64));
            }
        }
        out = out.add(ring, &term);
    }
    check_degree_cap(&out, degree_cap)?;
    Ok(out)
}

/// Norm map `N: O[[G]] -> Z_p[[G]]`: the determinant of multiplication by
/// `h` on `O[[G]]` viewed as a free module over the base algebra, computed
/// on the tower basis.
pub fn norm_series(
    oring: &LocalRingSpec,
    base: &LocalRingSpec,
    h: &AlgebraElt,
) -> Result<AlgebraElt> {
    assert_eq!(base.e * base.f, 1, "norm target must be the base ring");
    assert_eq!(base.p, oring.p);
    assert_eq!(base.precision, oring.precision);
    if h.is_zero() {
        return Err(Error::ZeroInput("norm_series"));
    }
    let d = oring.dim();
    let l = h.vars;
    // mat[row][col]: coordinate `row` of h * basis_col, a polynomial over Z_p
    let mut mat: Vec<Vec<AlgebraElt>> = vec![vec![AlgebraElt::zero(l); d]; d];
    for col in 0..d {
        let mut basis = oring.zero();
        basis.coeffs[col] = 1;
        for (mono, coeff) in &h.terms {
            let prod = oring.mul(coeff, &basis);
            for row in 0..d {
                if prod.coeffs[row] != 0 {
                    mat[row][col].insert_add(base, mono.clone(), base.from_u64(prod.coeffs[row]));
                }
            }
        }
    }
    let det = poly_det(base, &mat, d, l);
    if det.is_zero() {
        return Err(Error::PrecisionExhausted(
            "norm_series determinant vanishes mod p^N".into(),
        ));
    }
    Ok(det)
}

/// Determinant of a matrix of polynomials by dynamic programming over
/// column subsets.
fn poly_det(
    base: &LocalRingSpec,
    mat: &[Vec<AlgebraElt>],
    d: usize,
    l: usize,
) -> AlgebraElt {
    assert!(d <= 16);
    if d == 0 {
        return AlgebraElt::one(base, l);
    }
    let mut dp: Vec<AlgebraElt> = vec![AlgebraElt::zero(l); 1 << d];
    dp[0] = AlgebraElt::one(base, l);
    for s in 1usize..(1 << d) {
        let row = (s as u32).count_ones() as usize - 1;
        let mut acc = AlgebraElt::zero(l);
        let mut col_idx = 0usize;
        for col in 0..d {
            if s & (1 << col) == 0 {
                continue;
            }
            let sub = &dp[s & !(1 << col)];
            if !sub.is_zero() && !mat[row][col].is_zero() {
                let term = mat[row][col].mul(base, sub);
                acc = if (row + col_idx) % 2 == 0 {
                    acc.add(base, &term)
                } else {
                    acc.sub(base, &term)
                };
            }
            col_idx += 1;
        }
        dp[s] = acc;
    }
    dp.pop().unwrap()
}

/// Evaluation of `h` (over the base algebra) at `(zeta_1 - 1, ..., zeta_l - 1)`
/// inside `Z_p[zeta_{p^m}]`, `m` the largest order. `orders[i]` gives the
/// order exponent of `zeta_i`; `choices[i]` (coprime to `p`) selects which
/// primitive root each component is.
pub fn psi_eval(
    base: &LocalRingSpec,
    h: &AlgebraElt,
    orders: &[u32],
    choices: &[u64],
    cyclo_precision: u32,
) -> Result<(CycloRing, CycloElt)> {
    assert_eq!(base.e * base.f, 1, "psi_eval expects a base-algebra element");
    assert_eq!(orders.len(), h.vars);
    assert_eq!(choices.len(), h.vars);
    let m = orders.iter().copied().max().unwrap_or(0);
    let ring = CycloRing::new(base.p, m, cyclo_precision)?;
    let mut lambdas = Vec::with_capacity(h.vars);
    for (i, &mi) in orders.iter().enumerate() {
        if choices[i] % base.p == 0 {
            return Err(Error::InvalidParameter(
                "psi_eval root choice must be a unit".into(),
            ));
        }
        // zeta_i = zeta^(u_i * p^(m - m_i)) has exact order p^(m_i)
        let order = ring.p.pow(m);
        let exp = ((choices[i] % order) as u128 * ring.p.pow(m - mi) as u128 % order as u128) as u64;
        let zi = ring.zeta_pow(exp);
        lambdas.push(ring.sub(&zi, &ring.from_u64(1)));
    }
    let mut acc = ring.zero();
    for (mono, coeff) in &h.terms {
        let mut term = ring.from_u64(coeff.coeffs[0]);
        for (i, &e) in mono.iter().enumerate() {
            if e > 0 {
                term = ring.mul(&term, &ring.pow(&lambdas[i], e as u64));
            }
        }
        acc = ring.add(&acc, &term);
    }
    Ok((ring, acc))
}

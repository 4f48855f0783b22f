//! Exact arithmetic in local rings `O` of given ramification and inertia.
//!
//! A ring is the tower `Z_p[x]/(u(x))` (unramified of degree `f`, `u`
//! irreducible mod `p`) followed by `[y]/(y^e - p)` (Eisenstein of degree
//! `e`). All element coordinates are residues mod `p^N`; operations are
//! exact mod `p^N` and anything that would silently lose meaning below
//! that precision reports saturation instead of returning a number.

use crate::{Error, Result};

/// `a + b mod m`
#[inline]
pub fn mod_add(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

/// `a - b mod m`
#[inline]
pub fn mod_sub(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + (m - b % m) as u128;
    (s % m as u128) as u64
}

/// `a * b mod m`
#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a unit mod `m` via the extended Euclidean algorithm.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of `a` as a residue mod `p^cap`; `cap` when `a == 0`.
pub fn vp_u64(mut a: u64, p: u64, cap: u32) -> u32 {
    if a == 0 {
        return cap;
    }
    let mut v = 0;
    while a % p == 0 && v < cap {
        a /= p;
        v += 1;
    }
    v
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// pi-adic valuation of a ring element, computed within precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiValuation {
    Finite(u32),
    /// The element is 0 mod `p^N`; its valuation is at least `e*N`.
    SaturatedAtLeast(u32),
}

impl PiValuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            PiValuation::Finite(v) => Some(v),
            PiValuation::SaturatedAtLeast(_) => None,
        }
    }

    /// Valuation clamped to the saturation bound (useful for `min(t, k)` sums
    /// where `k` is far below the bound).
    pub fn clamped(self) -> u32 {
        match self {
            PiValuation::Finite(v) | PiValuation::SaturatedAtLeast(v) => v,
        }
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, PiValuation::SaturatedAtLeast(_))
    }
}

/// Element of a local ring, as coordinates in the tower basis
/// `x^i y^j` (`i < f`, `j < e`), each a residue mod `p^N`.
///
/// Index layout: `coeffs[j*f + i]` holds the coordinate of `x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElt {
    pub coeffs: Vec<u64>,
}

/// An element of the residue field `F_q = O/(pi)`, as a polynomial in the
/// unramified generator with coefficients in `F_p` (length `f`).
pub type FqElt = Vec<u64>;

/// The coefficient ring `O`: prime, ramification, inertia, working precision
/// and the two defining polynomials of the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRingSpec {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Elements are known mod `p^precision`.
    pub precision: u32,
    /// `p^precision`
    pub modulus: u64,
    /// Monic degree-`f` polynomial over `Z/p^N`, irreducible mod `p`
    /// (coefficients low-to-high, length `f+1`). `x` itself when `f == 1`.
    pub unram_poly: Vec<u64>,
    /// Monic degree-`e` Eisenstein polynomial `y^e - p`
    /// (coefficients low-to-high, length `e+1`).
    pub eisenstein_poly: Vec<u64>,
}

/// Constructs the ring `O` with the given invariants.
///
/// Deterministic: the unramified polynomial is the first monic polynomial
/// `x^f + c_{f-1} x^{f-1} + ... + c_0` (coefficient tuples enumerated as
/// base-`p` counters, constant digit fastest) that is irreducible mod `p`
/// and whose root generates `F_q^*`; the Eisenstein polynomial is `y^e - p`.
pub fn make_ring(p: u64, e: u32, f: u32, precision: u32) -> Result<LocalRingSpec> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
    }
    if e < 1 || f < 1 || precision < 1 {
        return Err(Error::InvalidParameter(
            "e, f and the precision must be positive".into(),
        ));
    }
    if e * f > 9 {
        return Err(Error::InvalidParameter(format!(
            "e*f = {} exceeds the supported bound 9",
            e * f
        )));
    }
    let modulus = p
        .checked_pow(precision)
        .filter(|m| *m <= 1 << 62)
        .ok_or_else(|| Error::InvalidParameter("p^precision does not fit in 62 bits".into()))?;

    let unram_poly = if f == 1 {
        vec![0, 1]
    } else {
        find_unramified_poly(p, f)?
            .into_iter()
            .map(|c| c % modulus)
            .collect()
    };

    let mut eisenstein_poly = vec![0u64; e as usize + 1];
    eisenstein_poly[0] = modulus - p % modulus;
    eisenstein_poly[e as usize] = 1;

    Ok(LocalRingSpec {
        p,
        e,
        f,
        precision,
        modulus,
        unram_poly,
        eisenstein_poly,
    })
}

/// First (in counter order) monic irreducible primitive polynomial of
/// degree `f` over `F_p`, coefficients low-to-high.
fn find_unramified_poly(p: u64, f: u32) -> Result<Vec<u64>> {
    let deg = f as usize;
    let count = p.checked_pow(f).ok_or_else(|| {
        Error::InvalidParameter("unramified polynomial search space overflow".into())
    })?;
    for counter in 0..count {
        let mut cand = vec![0u64; deg + 1];
        let mut k = counter;
        for c in cand.iter_mut().take(deg) {
            *c = k % p;
            k /= p;
        }
        cand[deg] = 1;
        if fp_is_irreducible(&cand, p) && fp_is_primitive(&cand, p) {
            return Ok(cand);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no irreducible polynomial of degree {f} found mod {p} (internal error)"
    )))
}

// -- polynomial helpers over F_p (dense, low-to-high coefficients) --

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p).expect("monic or unit leading coefficient");
    while r.len() > dm {
        let da = r.len() - 1;
        let q = mod_mul(r[da], lead_inv, p);
        for i in 0..=dm {
            let idx = da - dm + i;
            r[idx] = mod_sub(r[idx], mod_mul(q, m[i], p), p);
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        for (j, &cb) in b.iter().enumerate() {
            prod[i + j] = mod_add(prod[i + j], mod_mul(ca, cb, p), p);
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mulmod(&acc, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over `F_p`: `x^(p^f) = x` mod the candidate and
/// `gcd(x^(p^(f/q)) - x, cand) = 1` for every prime `q | f`.
fn fp_is_irreducible(cand: &[u64], p: u64) -> bool {
    let f = (cand.len() - 1) as u32;
    let x = vec![0u64, 1];
    let frob_f = fp_powmod(&x, p.pow(f), cand, p);
    let mut diff = frob_f;
    // x^(p^f) - x
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = mod_sub(diff[1], 1, p);
    fp_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    for q in prime_factors(f as u64) {
        let frob = fp_powmod(&x, p.pow(f / q as u32), cand, p);
        let mut d = frob;
        if d.len() < 2 {
            d.resize(2, 0);
        }
        d[1] = mod_sub(d[1], 1, p);
        fp_trim(&mut d);
        let g = fp_gcd(&d, cand, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The class of `x` generates `F_{p^f}^*`.
fn fp_is_primitive(cand: &[u64], p: u64) -> bool {
    let f = (cand.len() - 1) as u32;
    let order = p.pow(f) - 1;
    let x = vec![0u64, 1];
    for q in prime_factors(order) {
        let pw = fp_powmod(&x, order / q, cand, p);
        if pw == vec![1u64] {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl LocalRingSpec {
    pub fn dim(&self) -> usize {
        (self.e * self.f) as usize
    }

    pub fn zero(&self) -> RingElt {
        RingElt {
            coeffs: vec![0; self.dim()],
        }
    }

    pub fn one(&self) -> RingElt {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> RingElt {
        let mut z = self.zero();
        z.coeffs[0] = c % self.modulus;
        z
    }

    pub fn from_i64(&self, c: i64) -> RingElt {
        let mut z = self.zero();
        z.coeffs[0] = c.rem_euclid(self.modulus as i64) as u64;
        z
    }

    /// The uniformiser: the Eisenstein variable when `e > 1`, else `p`.
    pub fn pi(&self) -> RingElt {
        if self.e == 1 {
            self.from_u64(self.p)
        } else {
            let mut z = self.zero();
            z.coeffs[self.f as usize] = 1;
            z
        }
    }

    /// The class of the unramified generator `x` (0 when `f == 1`, where
    /// the unramified polynomial degenerates to `x`).
    pub fn unram_gen(&self) -> RingElt {
        let mut z = self.zero();
        if self.f > 1 {
            z.coeffs[1] = 1;
        }
        z
    }

    pub fn is_zero(&self, a: &RingElt) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RingElt, b: &RingElt) -> RingElt {
        RingElt {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| mod_add(x, y, self.modulus))
                .collect(),
        }
    }

    pub fn sub(&self, a: &RingElt, b: &RingElt) -> RingElt {
        RingElt {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| mod_sub(x, y, self.modulus))
                .collect(),
        }
    }

    pub fn neg(&self, a: &RingElt) -> RingElt {
        RingElt {
            coeffs: a
                .coeffs
                .iter()
                .map(|&x| mod_sub(0, x, self.modulus))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: u64, a: &RingElt) -> RingElt {
        RingElt {
            coeffs: a
                .coeffs
                .iter()
                .map(|&x| mod_mul(c % self.modulus, x, self.modulus))
                .collect(),
        }
    }

    pub fn mul(&self, a: &RingElt, b: &RingElt) -> RingElt {
        let mut out = self.zero();
        self.mul_into(a, b, &mut out.coeffs);
        out
    }

    /// `out = a*b`, no allocation beyond a fixed-size scratch. Core of the
    /// normal-form inner loops.
    pub fn mul_into(&self, a: &RingElt, b: &RingElt, out: &mut [u64]) {
        let f = self.f as usize;
        let e = self.e as usize;
        let m = self.modulus;
        // accumulate over x-degrees < 2f-1, y-degrees < 2e-1
        let wx = 2 * f - 1;
        let wy = 2 * e - 1;
        let mut acc = [0u64; 32];
        debug_assert!(wx * wy <= 32);
        for slot in acc.iter_mut().take(wx * wy) {
            *slot = 0;
        }
        for j1 in 0..e {
            for i1 in 0..f {
                let ca = a.coeffs[j1 * f + i1];
                if ca == 0 {
                    continue;
                }
                for j2 in 0..e {
                    for i2 in 0..f {
                        let cb = b.coeffs[j2 * f + i2];
                        if cb == 0 {
                            continue;
                        }
                        let idx = (j1 + j2) * wx + (i1 + i2);
                        acc[idx] = mod_add(acc[idx], mod_mul(ca, cb, m), m);
                    }
                }
            }
        }
        // y^e = p
        for j in (e..wy).rev() {
            for i in 0..wx {
                let c = acc[j * wx + i];
                if c != 0 {
                    let t = (j - e) * wx + i;
                    acc[t] = mod_add(acc[t], mod_mul(self.p % m, c, m), m);
                    acc[j * wx + i] = 0;
                }
            }
        }
        // x^f = -(u_{f-1} x^{f-1} + ... + u_0), per y-layer
        for j in 0..e {
            for i in (f..wx).rev() {
                let c = acc[j * wx + i];
                if c != 0 {
                    acc[j * wx + i] = 0;
                    for (t, &u) in self.unram_poly.iter().enumerate().take(f) {
                        let idx = j * wx + (i - f + t);
                        acc[idx] = mod_sub(acc[idx], mod_mul(c, u, m), m);
                    }
                }
            }
        }
        for j in 0..e {
            for i in 0..f {
                out[j * f + i] = acc[j * wx + i];
            }
        }
    }

    /// `acc -= q * b`, in place.
    pub fn sub_mul_assign(&self, acc: &mut [u64], q: &RingElt, b: &RingElt) {
        let mut prod = vec![0u64; self.dim()];
        self.mul_into(q, b, &mut prod);
        for (a, pr) in acc.iter_mut().zip(&prod) {
            *a = mod_sub(*a, *pr, self.modulus);
        }
    }

    pub fn pow(&self, a: &RingElt, mut exp: u64) -> RingElt {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Largest `t` with `a` in `pi^t O`, within precision.
    pub fn v_pi(&self, a: &RingElt) -> PiValuation {
        let f = self.f as usize;
        let cap = self.e * self.precision;
        let mut best: Option<u32> = None;
        for r in 0..self.e as usize {
            let layer_vp = (0..f)
                .map(|i| vp_u64(a.coeffs[r * f + i], self.p, self.precision))
                .min()
                .unwrap();
            if layer_vp < self.precision {
                let v = self.e * layer_vp + r as u32;
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        match best {
            Some(v) => PiValuation::Finite(v),
            None => PiValuation::SaturatedAtLeast(cap),
        }
    }

    /// pi-adic digit `t` of `a`, as a residue-field element.
    pub fn pi_digit(&self, a: &RingElt, t: u32) -> FqElt {
        let f = self.f as usize;
        let q = t / self.e;
        let r = (t % self.e) as usize;
        (0..f)
            .map(|i| {
                let c = a.coeffs[r * f + i];
                (c / self.p.pow(q)) % self.p
            })
            .collect()
    }

    /// Element with the given pi-adic digits (`digits[t*f + i]` is
    /// coordinate `i` of digit `t`); inverse of `pi_digit` up to precision.
    pub fn from_pi_digits(&self, digits: &[u64]) -> RingElt {
        let f = self.f as usize;
        debug_assert!(digits.len() % f == 0);
        let mut out = self.zero();
        for (t, chunk) in digits.chunks(f).enumerate() {
            let q = t as u32 / self.e;
            let r = (t as u32 % self.e) as usize;
            let scale = self.p.pow(q) % self.modulus;
            for (i, &d) in chunk.iter().enumerate() {
                out.coeffs[r * f + i] =
                    mod_add(out.coeffs[r * f + i], mod_mul(d % self.p, scale, self.modulus), self.modulus);
            }
        }
        out
    }

    /// Canonical representative of `a` mod `pi^k` (digits >= k zeroed).
    pub fn reduce_mod_pi_pow(&self, a: &RingElt, k: u32) -> RingElt {
        let f = self.f as usize;
        let mut out = self.zero();
        for r in 0..self.e {
            if r >= k {
                break;
            }
            // keep base-p digits q with q*e + r < k
            let qmax = (k - 1 - r) / self.e + 1;
            let mask = self.p.pow(qmax.min(self.precision));
            for i in 0..f {
                out.coeffs[r as usize * f + i] = a.coeffs[r as usize * f + i] % mask;
            }
        }
        out
    }

    /// Exact division by pi. Requires `v_pi(a) >= 1`; the top pi-digit of the
    /// result is not meaningful (callers track this through valuations).
    pub fn div_pi_exact(&self, a: &RingElt) -> Result<RingElt> {
        if self.v_pi(a) == PiValuation::Finite(0) {
            return Err(Error::InvalidParameter(
                "division by pi of a unit element".into(),
            ));
        }
        let f = self.f as usize;
        let e = self.e as usize;
        let mut out = self.zero();
        if e == 1 {
            for i in 0..f {
                out.coeffs[i] = a.coeffs[i] / self.p;
            }
        } else {
            for j in 0..e - 1 {
                for i in 0..f {
                    out.coeffs[j * f + i] = a.coeffs[(j + 1) * f + i];
                }
            }
            for i in 0..f {
                out.coeffs[(e - 1) * f + i] = a.coeffs[i] / self.p;
            }
        }
        Ok(out)
    }

    /// Inverse of a unit, exact mod `p^N` (Hensel lifting from `F_q`).
    pub fn inv_unit(&self, a: &RingElt) -> Result<RingElt> {
        if self.v_pi(a) != PiValuation::Finite(0) {
            return Err(Error::InvalidParameter(
                "inverse requested for a non-unit".into(),
            ));
        }
        let a0 = self.pi_digit(a, 0);
        let z0 = self.fq_inv(&a0)?;
        let mut z = self.lift_fq(&z0);
        let two = self.from_u64(2);
        let rounds = 64 - u64::from(self.e * self.precision).leading_zeros() + 1;
        for _ in 0..rounds {
            // z <- z(2 - a z)
            let az = self.mul(a, &z);
            let corr = self.sub(&two, &az);
            z = self.mul(&z, &corr);
        }
        Ok(z)
    }

    /// Field norm down to `Z_p`, as the determinant of multiplication by `a`
    /// on the tower basis; exact mod `p^N`.
    ///
    /// Reports precision exhaustion instead of returning a wrapped-around
    /// residue when `a = 0 mod p^N`.
    pub fn norm_to_zp(&self, a: &RingElt) -> Result<u64> {
        if self.is_zero(a) {
            return Err(Error::PrecisionExhausted(
                "norm of an element that is 0 mod p^N is indeterminate".into(),
            ));
        }
        let d = self.dim();
        // columns: a * basis element, in coordinates
        let mut mat = vec![0u64; d * d];
        for (col, basis_idx) in (0..d).enumerate() {
            let mut b = self.zero();
            b.coeffs[basis_idx] = 1;
            let prod = self.mul(a, &b);
            for row in 0..d {
                mat[row * d + col] = prod.coeffs[row];
            }
        }
        Ok(det_mod(&mat, d, self.modulus))
    }

    // -- residue field F_q = O/(pi) --

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn fq_zero(&self) -> FqElt {
        vec![0; self.f as usize]
    }

    pub fn fq_one(&self) -> FqElt {
        let mut z = self.fq_zero();
        z[0] = 1;
        z
    }

    pub fn fq_is_zero(&self, a: &FqElt) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn fq_add(&self, a: &FqElt, b: &FqElt) -> FqElt {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| mod_add(x, y, self.p))
            .collect()
    }

    pub fn fq_sub(&self, a: &FqElt, b: &FqElt) -> FqElt {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| mod_sub(x, y, self.p))
            .collect()
    }

    pub fn fq_neg(&self, a: &FqElt) -> FqElt {
        a.iter().map(|&x| mod_sub(0, x, self.p)).collect()
    }

    pub fn fq_mul(&self, a: &FqElt, b: &FqElt) -> FqElt {
        let f = self.f as usize;
        let mut prod = vec![0u64; 2 * f - 1];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                prod[i + j] = mod_add(prod[i + j], mod_mul(a[i], b[j], self.p), self.p);
            }
        }
        let ubar: Vec<u64> = self.unram_poly.iter().map(|&c| c % self.p).collect();
        for i in (f..2 * f - 1).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for (t, &u) in ubar.iter().enumerate().take(f) {
                    prod[i - f + t] = mod_sub(prod[i - f + t], mod_mul(c, u, self.p), self.p);
                }
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn fq_pow(&self, a: &FqElt, mut exp: u64) -> FqElt {
        let mut acc = self.fq_one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.fq_mul(&acc, &base);
            }
            base = self.fq_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn fq_inv(&self, a: &FqElt) -> Result<FqElt> {
        if self.fq_is_zero(a) {
            return Err(Error::ZeroInput("fq_inv"));
        }
        Ok(self.fq_pow(a, self.q() - 2))
    }

    /// Lift of a residue-field element into `O` (digit-0 coordinates).
    pub fn lift_fq(&self, a: &FqElt) -> RingElt {
        let mut z = self.zero();
        for (i, &c) in a.iter().enumerate() {
            z.coeffs[i] = c % self.p;
        }
        z
    }
}

/// Determinant of a `d x d` matrix with entries mod `m`, by dynamic
/// programming over column subsets (exact in `Z/m`, no divisions).
pub fn det_mod(mat: &[u64], d: usize, m: u64) -> u64 {
    assert!(d <= 20, "determinant dimension too large");
    if d == 0 {
        return 1 % m;
    }
    // dp[S] = signed sum over ways to fill the first popcount(S) rows
    // using exactly the column set S
    let mut dp = vec![0u64; 1 << d];
    dp[0] = 1 % m;
    for s in 1usize..(1 << d) {
        let row = (s as u32).count_ones() as usize - 1;
        let mut acc = 0u64;
        let mut col_idx = 0usize;
        for col in 0..d {
            if s & (1 << col) == 0 {
                continue;
            }
            let sub = dp[s & !(1 << col)];
            if sub != 0 {
                let term = mod_mul(mat[row * d + col], sub, m);
                // Laplace expansion along row `row`: sign (-1)^(row + col_idx)
                if (row + col_idx) % 2 == 0 {
                    acc = mod_add(acc, term, m);
                } else {
                    acc = mod_sub(acc, term, m);
                }
            }
            col_idx += 1;
        }
        dp[s] = acc;
    }
    dp[(1 << d) - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_ring_base() {
        // (3,1,1,8): the base ring Z/3^8, pi = 3
        let r = make_ring(3, 1, 1, 8).unwrap();
        assert_eq!(r.modulus, 6561);
        assert_eq!(r.pi(), r.from_u64(3));
    }

    #[test]
    fn make_ring_ramified() {
        // (3,2,1,8): Eisenstein y^2 - 3, pi = y, v_pi(3) = 2
        let r = make_ring(3, 2, 1, 8).unwrap();
        assert_eq!(r.eisenstein_poly, vec![r.modulus - 3, 0, 1]);
        assert_eq!(r.v_pi(&r.from_u64(3)), PiValuation::Finite(2));
        let pi2 = r.mul(&r.pi(), &r.pi());
        assert_eq!(pi2, r.from_u64(3));
    }

    #[test]
    fn make_ring_unramified_poly_pinned() {
        // (3,1,2,8): x^2 + x + 2, and the search's irreducibility is
        // re-checked here by exhausting roots mod 3
        let r = make_ring(3, 1, 2, 8).unwrap();
        assert_eq!(r.unram_poly, vec![2, 1, 1]);
        for x in 0..3u64 {
            assert_ne!((x * x + x + 2) % 3, 0, "root {x} found mod 3");
        }
        assert_eq!(r.v_pi(&r.from_u64(3)), PiValuation::Finite(1));
    }

    #[test]
    fn make_ring_rejects_bad_parameters() {
        assert!(make_ring(4, 1, 1, 8).is_err());
        assert!(make_ring(3, 0, 1, 8).is_err());
        assert!(make_ring(3, 5, 2, 8).is_err());
    }

    #[test]
    fn v_pi_unit_factor() {
        // e=2, f=1, p=3: v_pi(y*(1+y)) = 1
        let r = make_ring(3, 2, 1, 8).unwrap();
        let a = r.mul(&r.pi(), &r.add(&r.one(), &r.pi()));
        assert_eq!(r.v_pi(&a), PiValuation::Finite(1));
    }

    #[test]
    fn v_pi_saturation() {
        let r = make_ring(3, 2, 1, 4).unwrap();
        let a = r.from_u64(81); // 3^4 = 0 mod p^N
        assert_eq!(r.v_pi(&a), PiValuation::SaturatedAtLeast(8));
    }

    #[test]
    fn norm_of_uniformiser() {
        // e=2, f=1, p=3: norm(y) = -3 (hand resultant of y^2-3 and y)
        let r = make_ring(3, 2, 1, 8).unwrap();
        assert_eq!(r.norm_to_zp(&r.pi()).unwrap(), r.modulus - 3);
    }

    #[test]
    fn norm_of_scalar_and_one() {
        // e=1, f=2: norm(3) = 9; norm(1) = 1
        let r = make_ring(3, 1, 2, 8).unwrap();
        assert_eq!(r.norm_to_zp(&r.from_u64(3)).unwrap(), 9);
        assert_eq!(r.norm_to_zp(&r.one()).unwrap(), 1);
        let r2 = make_ring(2, 2, 2, 6).unwrap();
        assert_eq!(r2.norm_to_zp(&r2.one()).unwrap(), 1);
    }

    #[test]
    fn norm_indeterminate_on_zero() {
        let r = make_ring(3, 1, 1, 4).unwrap();
        assert!(r.norm_to_zp(&r.from_u64(81)).is_err());
    }

    #[test]
    fn inv_unit_roundtrip() {
        let r = make_ring(3, 2, 2, 8).unwrap();
        let mut a = r.one();
        a.coeffs[1] = 5;
        a.coeffs[2] = 12;
        let inv = r.inv_unit(&a).unwrap();
        assert_eq!(r.mul(&a, &inv), r.one());
        assert!(r.inv_unit(&r.pi()).is_err());
    }

    #[test]
    fn digits_and_reduction() {
        let r = make_ring(2, 2, 1, 6).unwrap();
        // a = 1 + y + 2y = 1 + 3y -> digits 1, 1 (=3 mod 2), 1 (3 div 2), 1...
        let mut a = r.zero();
        a.coeffs[0] = 5; // 1 + 4 = 1 + p^2 -> pi-digits at t=0 and t=4
        a.coeffs[1] = 3; // (1 + 2) y -> pi-digits at t=1 and t=3
        assert_eq!(r.pi_digit(&a, 0), vec![1]);
        assert_eq!(r.pi_digit(&a, 1), vec![1]);
        assert_eq!(r.pi_digit(&a, 2), vec![0]);
        assert_eq!(r.pi_digit(&a, 3), vec![1]);
        assert_eq!(r.pi_digit(&a, 4), vec![1]);
        let red = r.reduce_mod_pi_pow(&a, 2);
        assert_eq!(red.coeffs, vec![1, 1]);
        let div = r.div_pi_exact(&r.sub(&a, &red)).unwrap();
        assert_eq!(r.pi_digit(&div, 0), vec![0]);
        assert_eq!(r.pi_digit(&div, 2), vec![1]);
    }

    #[test]
    fn fq_arithmetic() {
        let r = make_ring(3, 1, 2, 8).unwrap();
        let x = vec![0u64, 1];
        // x^2 = -x - 2 mod (x^2 + x + 2)
        assert_eq!(r.fq_mul(&x, &x), vec![1, 2]);
        let inv = r.fq_inv(&x).unwrap();
        assert_eq!(r.fq_mul(&x, &inv), r.fq_one());
    }

    #[test]
    fn det_mod_small() {
        // [[1,2],[3,4]] -> -2
        let m = 1000;
        assert_eq!(det_mod(&[1, 2, 3, 4], 2, m), m - 2);
        assert_eq!(det_mod(&[7], 1, m), 7);
        assert_eq!(det_mod(&[], 0, m), 1);
    }
}

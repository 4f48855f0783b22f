//! Arithmetic in the cyclotomic rings `Z_p[zeta_{p^m}]`, in the power
//! basis of the `p^m`-th cyclotomic polynomial, together with the
//! Q-valued valuation normalised by `v_p(p) = 1`.

use num_rational::Ratio;

use crate::padic::{is_prime, mod_add, mod_mul, mod_sub, vp_u64};
use crate::{Error, Result};

/// Valuation of a cyclotomic element within precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloVal {
    Finite(Ratio<i64>),
    /// Zero mod `p^N`: genuinely zero or beyond precision; callers decide
    /// whether to skip or fail.
    Infinite,
}

impl CycloVal {
    pub fn finite(self) -> Option<Ratio<i64>> {
        match self {
            CycloVal::Finite(v) => Some(v),
            CycloVal::Infinite => None,
        }
    }
}

/// Element of `Z_p[zeta_{p^m}]`: residues mod `p^N` in the power basis
/// `1, zeta, ..., zeta^(phi(p^m)-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElt {
    pub level: u32,
    pub coeffs: Vec<u64>,
}

/// The ring `Z_p[zeta_{p^m}]` at working precision `p^N`.
#[derive(Debug, Clone)]
pub struct CycloRing {
    pub p: u64,
    pub level: u32,
    pub precision: u32,
    pub modulus: u64,
    /// `Phi_{p^m}`, monic, coefficients low-to-high mod `p^N`.
    pub phi_poly: Vec<u64>,
}

impl CycloRing {
    pub fn new(p: u64, level: u32, precision: u32) -> Result<CycloRing> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        let modulus = p
            .checked_pow(precision)
            .filter(|m| *m <= 1 << 62)
            .ok_or_else(|| Error::InvalidParameter("p^precision does not fit in 62 bits".into()))?;
        let phi_poly = if level == 0 {
            // Phi_1(x) = x - 1
            vec![modulus - 1, 1]
        } else {
            // Phi_{p^m}(x) = sum_{i<p} x^(i p^(m-1))
            let step = p.pow(level - 1) as usize;
            let deg = step * (p as usize - 1);
            let mut c = vec![0u64; deg + 1];
            for i in 0..p as usize {
                c[i * step] = 1;
            }
            c
        };
        Ok(CycloRing {
            p,
            level,
            precision,
            modulus,
            phi_poly,
        })
    }

    /// `phi(p^m)`, the rank of the ring over `Z_p`.
    pub fn degree(&self) -> usize {
        self.phi_poly.len() - 1
    }

    pub fn zero(&self) -> CycloElt {
        CycloElt {
            level: self.level,
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn from_u64(&self, c: u64) -> CycloElt {
        let mut z = self.zero();
        z.coeffs[0] = c % self.modulus;
        z
    }

    pub fn is_zero(&self, a: &CycloElt) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        CycloElt {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| mod_add(x, y, self.modulus))
                .collect(),
        }
    }

    pub fn sub(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        CycloElt {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| mod_sub(x, y, self.modulus))
                .collect(),
        }
    }

    pub fn mul(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        let d = self.degree();
        let m = self.modulus;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.coeffs.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                prod[i + j] = mod_add(prod[i + j], mod_mul(ca, cb, m), m);
            }
        }
        // reduce mod the monic Phi
        for i in (d..2 * d - 1).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for (t, &ph) in self.phi_poly.iter().enumerate().take(d) {
                    prod[i - d + t] = mod_sub(prod[i - d + t], mod_mul(c, ph, m), m);
                }
            }
        }
        prod.truncate(d);
        CycloElt {
            level: self.level,
            coeffs: prod,
        }
    }

    pub fn pow(&self, a: &CycloElt, mut exp: u64) -> CycloElt {
        let mut acc = self.from_u64(1);
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

    /// `zeta^k` for the canonical generator `zeta` (the class of `x`).
    pub fn zeta_pow(&self, k: u64) -> CycloElt {
        let order = self.p.pow(self.level);
        let k = k % order;
        let mut z = self.zero();
        z.coeffs[0] = 1;
        let mut x = self.zero();
        if self.degree() > 1 {
            x.coeffs[1] = 1;
        } else {
            // level 0, or p=2 level 1 where zeta = -1
            x.coeffs[0] = if self.level == 0 { 1 } else { self.modulus - 1 };
        }
        if k == 0 {
            return z;
        }
        self.pow(&x, k)
    }

    /// Galois conjugation `zeta -> zeta^u`, `u` coprime to `p`.
    pub fn galois(&self, a: &CycloElt, u: u64) -> CycloElt {
        assert!(u % self.p != 0, "galois exponent must be coprime to p");
        let mut out = self.zero();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let zi = self.zeta_pow(i as u64 * u);
            for (t, &z) in zi.coeffs.iter().enumerate() {
                out.coeffs[t] = mod_add(out.coeffs[t], mod_mul(c, z, self.modulus), self.modulus);
            }
        }
        out
    }

    /// Q-valued valuation with `v_p(p) = 1`; equals
    /// `v_p(Norm(a)) / phi(p^m)` for nonzero `a`.
    ///
    /// Computed through the shifted basis in `lambda = zeta - 1`:
    /// `Phi_{p^m}(1+T)` is Eisenstein of degree `phi(p^m)`, so the valuation
    /// of `sum c_i lambda^i` is `min_i (phi * v_p(c_i) + i) / phi`, and the
    /// minimum is attained at a unique index.
    pub fn v_p(&self, a: &CycloElt) -> CycloVal {
        let d = self.degree();
        // expand a(1 + T); degree < phi, so no reduction is needed
        let m = self.modulus;
        let mut shifted = vec![0u64; d];
        let mut pow = vec![0u64; d]; // (1+T)^i, grown incrementally
        pow[0] = 1;
        for (i, &c) in a.coeffs.iter().enumerate() {
            if i > 0 {
                // pow <- pow * (1 + T)
                for t in (1..=i).rev() {
                    pow[t] = mod_add(pow[t], pow[t - 1], m);
                }
            }
            if c != 0 {
                for t in 0..=i {
                    shifted[t] = mod_add(shifted[t], mod_mul(c, pow[t], m), m);
                }
            }
        }
        let mut best: Option<Ratio<i64>> = None;
        for (i, &c) in shifted.iter().enumerate() {
            let v = vp_u64(c, self.p, self.precision);
            if v < self.precision {
                let val = Ratio::new(d as i64 * v as i64 + i as i64, d as i64);
                best = Some(best.map_or(val, |b| b.min(val)));
            }
        }
        match best {
            Some(v) => CycloVal::Finite(v),
            None => CycloVal::Infinite,
        }
    }
}

/// Resource caps for the module engine and the special-prime search.
///
/// Exceeding a cap is an error, never a silent truncation. The CLI can
/// override the defaults through environment variables.
#[derive(Debug, Clone)]
pub struct EngineLimits {
    /// Largest allowed ambient rank `r * p^(n*l)` of a coinvariant presentation.
    pub max_ambient: usize,
    /// Largest quotient enumerated by the brute-force oracle.
    pub max_enumeration: usize,
    /// Total-degree cap for polynomials produced by coordinate changes.
    pub degree_cap: u32,
    /// Special primes are searched through integer exponent vectors with
    /// entries bounded by this value.
    pub special_bound: i64,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            max_ambient: 4096,
            max_enumeration: 1 << 20,
            degree_cap: 64,
            special_bound: 3,
        }
    }
}

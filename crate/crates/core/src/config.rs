//! Tunable limits and tolerances.

/// Comparison tolerance for exponent arithmetic (reciprocal sums, clause tests).
pub const EPS_CMP: f64 = 1e-12;

/// Relative tolerance for norm inequalities.
pub const EPS_NUM: f64 = 1e-9;

/// Default cap on the family size for exhaustive subset or sign enumeration.
pub const DEFAULT_N_EXH: usize = 24;

/// Default upper bound used in place of the Grothendieck constant. Every
/// published real upper bound lies below it.
pub const DEFAULT_K_G_UPPER: f64 = 1.8;

/// Environment variable that overrides [`DEFAULT_N_EXH`].
pub const N_EXH_ENV: &str = "UNCOND_NEXH";

/// Hard ceiling for `n_exh`: subset indices are stored in a `u64`.
pub const N_EXH_CEILING: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub n_exh: usize,
    pub k_g_upper: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n_exh: DEFAULT_N_EXH,
            k_g_upper: DEFAULT_K_G_UPPER,
        }
    }
}

impl Config {
    /// Defaults, with `n_exh` taken from `UNCOND_NEXH` when it parses.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(n) = std::env::var(N_EXH_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
        {
            cfg.n_exh = n.min(N_EXH_CEILING);
        }
        cfg
    }

    pub fn with_n_exh(mut self, n_exh: usize) -> Self {
        self.n_exh = n_exh.min(N_EXH_CEILING);
        self
    }

    pub fn with_k_g_upper(mut self, k: f64) -> Self {
        self.k_g_upper = k;
        self
    }
}

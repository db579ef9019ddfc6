//! Experiment harness: sweeps, scaling fits, CSV records, config files and
//! comparison tables.

pub mod config;
pub mod figures;
pub mod fit;
pub mod record;
pub mod sweep;
pub mod table;

pub use config::parse_config;
pub use figures::{reproduce_fig3, reproduce_fig4, Fig3Report, Fig4Column, Fig4Report, FigureOptions};
pub use fit::{fit_inverse, FitResult};
pub use record::{read_csv, write_csv, Mode, SearchRecord, Status};
pub use sweep::{sweep, CosDelta, SweepSpec, TauChoice};
pub use table::{grover_table, TableRow};

/// Default cap on the database size `N`.
pub const DEFAULT_MAX_N: usize = 1 << 22;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Per-configuration seed derived from the sweep seed and the config key.
pub fn config_seed(seed: u64, key: &str) -> u64 {
    fnv1a(key.as_bytes()) ^ seed.rotate_left(17)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_ne!(config_seed(1, "spatial|3|4|3|"), config_seed(2, "spatial|3|4|3|"));
    }
}

use std::fmt::Write as _;

use rayon::prelude::*;
use weylbrane::cosmology::{admissibility, discriminant, gamma_exponent, omega_eff_powerlaw, Admissibility, PowerLawScenario};
use weylbrane::report::format_number;

use super::{write_output, Outcome};
use crate::config::SweepSpec;
use crate::error::CliError;

pub const FILE_NAME: &str = "sweep.csv";
pub const HEADER: &str = "p,gamma,discriminant,real_gamma,omega_decreasing,admissible_window,de_sitter,omega_eff_t_max";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    /// NaN outside the real-exponent window.
    pub gamma: f64,
    pub discriminant: f64,
    pub flags: Admissibility,
    /// NaN where the closed form is undefined.
    pub omega_t_max: f64,
}

impl SweepRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            format_number(self.p),
            format_number(self.gamma),
            format_number(self.discriminant),
            self.flags.real_gamma,
            self.flags.omega_decreasing,
            self.flags.admissible_window,
            self.flags.de_sitter,
            format_number(self.omega_t_max)
        )
    }
}

fn row(base: &PowerLawScenario, t_max: f64, p: f64) -> SweepRow {
    let scenario = PowerLawScenario { p, ..*base }.rederive();
    let omega_t_max = omega_eff_powerlaw(&scenario)
        .and_then(|w| w.at(t_max))
        .unwrap_or(f64::NAN);
    SweepRow {
        p,
        gamma: gamma_exponent(p).unwrap_or(f64::NAN),
        discriminant: discriminant(p),
        flags: admissibility(p),
        omega_t_max,
    }
}

/// Rows in ascending `p`, computed on `workers` threads.
pub fn rows(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>, CliError> {
    let base = spec.base.scenario();
    let t_max = spec.base.t_max;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| spec.p_grid().par_iter().map(|&p| row(&base, t_max, p)).collect()))
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

pub fn run(spec: &SweepSpec, workers: usize) -> Result<Outcome, CliError> {
    let rows = rows(spec, workers)?;
    let csv = to_csv(&rows);
    let path = write_output(&spec.base.output_dir, FILE_NAME, &csv)?;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "sweep: p in [{}, {}], {} step(s), omega_eff at t = {}",
        spec.p_min, spec.p_max, spec.steps, spec.base.t_max
    );
    let count = |f: fn(&SweepRow) -> bool| rows.iter().filter(|r| f(r)).count();
    let _ = writeln!(s, "  real_gamma        : {}", count(|r| r.flags.real_gamma));
    let _ = writeln!(s, "  omega_decreasing  : {}", count(|r| r.flags.omega_decreasing));
    let _ = writeln!(s, "  admissible_window : {}", count(|r| r.flags.admissible_window));
    let _ = writeln!(s, "  de_sitter         : {}", count(|r| r.flags.de_sitter));
    let _ = writeln!(s, "  wrote {} rows to {}", rows.len(), path.display());
    Ok(Outcome { path, csv, summary: s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_flip_between_grid_rows() {
        let r = rows(&SweepSpec::default(), 2).unwrap();
        assert_eq!(r.len(), 27);
        let flip = r.windows(2).position(|w| !w[0].flags.omega_decreasing && w[1].flags.omega_decreasing).unwrap();
        assert!(r[flip].p < 1.0 / 3.0 && r[flip + 1].p > 1.0 / 3.0);
        let edge = 0.25 + 6f64.sqrt() / 8.0;
        let lost = r.windows(2).position(|w| w[0].flags.real_gamma && !w[1].flags.real_gamma).unwrap();
        assert!(r[lost].p < edge && r[lost + 1].p > edge);
        assert!(r.last().unwrap().gamma.is_nan());
    }

    #[test]
    fn de_sitter_row() {
        let spec = SweepSpec {
            p_min: 0.5,
            p_max: 5.0 / 9.0,
            steps: 2,
            ..SweepSpec::default()
        };
        let r = rows(&spec, 1).unwrap();
        assert!(!r[0].flags.de_sitter && r[1].flags.de_sitter);
        assert!((r[1].omega_t_max + 1.0).abs() < 1e-12);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let spec = SweepSpec::default();
        let one = to_csv(&rows(&spec, 1).unwrap());
        for w in [2, 3, 8] {
            assert_eq!(to_csv(&rows(&spec, w).unwrap()), one);
        }
    }

    #[test]
    fn single_step() {
        let spec = SweepSpec { steps: 1, ..SweepSpec::default() };
        let r = rows(&spec, 1).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].p, 0.30);
    }
}

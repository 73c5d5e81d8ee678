//! Built-in cross-checks: exact diagonalization against the closed forms for
//! the two-site rings, and monogamy on random pure states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{ckw_audit, pair_concurrence, random_pure_state, CKW_TOL};
use crate::error::Result;
use crate::model::{closed_c_ac_x, closed_lambda_xy, ground_state, Anisotropy, ChainSpec};
use crate::thermal::{Temperature, ThermalSolver};

pub const GRID_TOL: f64 = 1e-9;
pub const GRID_POINTS: usize = 20;
pub const RANDOM_STATES: usize = 1000;
pub const RANDOM_SEED: u64 = 0x6e65_636b;

pub struct Report {
    pub text: String,
    pub passed: bool,
}

/// `GRID_POINTS` evenly spaced values on `[0.1, 4]`.
pub fn coupling_grid() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|k| 0.1 + 3.9 * k as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

/// Largest deviation of the XY ground energy from the closed form.
pub fn energy_grid_deviation() -> Result<f64> {
    let grid = coupling_grid();
    let mut max_dev: f64 = 0.0;
    for &j in &grid {
        for &w in &grid {
            let e = ground_state(&ChainSpec::two_site(Anisotropy::Xy, j, w))?.energy;
            max_dev = max_dev.max((e - closed_lambda_xy(j, w)?).abs());
        }
    }
    Ok(max_dev)
}

/// Largest deviation of the X-ring Kondo-pair concurrence from the closed
/// form, together with the largest concurrence of the two other tau pairs.
pub fn kondo_pair_grid_deviation() -> Result<(f64, f64)> {
    let grid = coupling_grid();
    let mut max_dev: f64 = 0.0;
    let mut max_other: f64 = 0.0;
    for &j in &grid {
        for &w in &grid {
            let solver = ThermalSolver::new(&ChainSpec::two_site(Anisotropy::X, j, w))?;
            let rho = solver.gibbs(Temperature::ZERO);
            max_dev = max_dev.max((pair_concurrence(&rho, 0, 1)? - closed_c_ac_x(j, w)?).abs());
            max_other = max_other
                .max(pair_concurrence(&rho, 0, 2)?)
                .max(pair_concurrence(&rho, 0, 3)?);
        }
    }
    Ok((max_dev, max_other))
}

/// Number of seeded random four-qubit states obeying monogamy about every
/// qubit, and the smallest slack seen.
pub fn ckw_random_batch(count: usize, seed: u64) -> Result<(usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..count {
        let psi = random_pure_state(&mut rng, 4)?;
        let mut holds = true;
        for pivot in 0..4 {
            let audit = ckw_audit(&psi, pivot)?;
            min_slack = min_slack.min(audit.slack());
            holds &= audit.holds;
        }
        ok += usize::from(holds);
    }
    Ok((ok, min_slack))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run_checks() -> Result<Report> {
    let mut text = String::new();
    let mut passed = true;

    let e7 = energy_grid_deviation()?;
    let ok = e7 < GRID_TOL;
    passed &= ok;
    text.push_str(&format!(
        "eq7_energy_grid: {} (max_dev = {e7:.3e} < {GRID_TOL:e})\n",
        verdict(ok)
    ));

    let (c10, other) = kondo_pair_grid_deviation()?;
    let ok = c10 < GRID_TOL && other <= GRID_TOL;
    passed &= ok;
    text.push_str(&format!(
        "eq10_cac_grid: {} (max_dev = {c10:.3e}, max_other_pairs = {other:.3e})\n",
        verdict(ok)
    ));

    let (n_ok, min_slack) = ckw_random_batch(RANDOM_STATES, RANDOM_SEED)?;
    let ok = n_ok == RANDOM_STATES && min_slack >= -CKW_TOL;
    passed &= ok;
    text.push_str(&format!(
        "ckw_random_states: {} ({n_ok}/{RANDOM_STATES}, min_slack = {min_slack:.3e})\n",
        verdict(ok)
    ));

    Ok(Report { text, passed })
}

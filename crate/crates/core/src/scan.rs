//! Parameter sweeps, level-crossing detection in the field `B`, critical-field
//! line fits and entanglement-death temperature search.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{pair_concurrence, single_qubit_concurrence, PureState};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eig;
use crate::model::{build_hamiltonian, ground_from_spectrum, ground_state, Anisotropy, ChainSpec, GroundSolution};
use crate::thermal::{gibbs_from_spectrum, Temperature, ThermalSolver};

/// Adjacent ground states with fidelity below this are on opposite sides of a crossing.
pub const FIDELITY_THRESHOLD: f64 = 0.5;
/// Concurrences at or below this count as zero.
pub const ZERO_CONCURRENCE: f64 = 1e-6;
/// Verification grid size used by the death-temperature search.
pub const DEATH_GRID_POINTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parameter {
    J,
    W,
    B,
    T,
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parameter::J => "J",
            Parameter::W => "W",
            Parameter::B => "B",
            Parameter::T => "T",
        })
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" => Ok(Parameter::J),
            "W" | "w" => Ok(Parameter::W),
            "B" | "b" => Ok(Parameter::B),
            "T" | "t" => Ok(Parameter::T),
            other => Err(Error::Argument(format!(
                "unknown parameter '{other}' (expected J, W, B or T)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSpec {
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisSpec {
    pub fn new(parameter: Parameter, start: f64, stop: f64, step: f64) -> Result<Self> {
        let axis = AxisSpec {
            parameter,
            start,
            stop,
            step,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// `points` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(parameter: Parameter, start: f64, stop: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Argument("linspace axis needs at least two points".into()));
        }
        Self::new(parameter, start, stop, (stop - start) / (points - 1) as f64)
    }

    fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Argument(format!(
                "axis {} has non-finite bounds",
                self.parameter
            )));
        }
        if self.step.is_nan() || self.step <= 0.0 {
            return Err(Error::Argument(format!("axis {} needs step > 0", self.parameter)));
        }
        if self.start > self.stop {
            return Err(Error::Argument(format!("axis {} needs start <= stop", self.parameter)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid values. When the grid lands on `stop` the values are interpolated
    /// between the endpoints, so endpoints and midpoints come out exact.
    pub fn values(&self) -> Vec<f64> {
        let n = self.len();
        if n == 1 {
            return vec![self.start];
        }
        let last = self.start + (n - 1) as f64 * self.step;
        if (last - self.stop).abs() <= 1e-9 * self.step {
            let span = self.stop - self.start;
            (0..n).map(|k| self.start + span * k as f64 / (n - 1) as f64).collect()
        } else {
            (0..n).map(|k| self.start + k as f64 * self.step).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// Concurrence between two qubits of the reduced (thermal) state.
    Pair(usize, usize),
    /// Single-qubit concurrence of the ground state; zero temperature only.
    Single(usize),
}

#[derive(Clone, Debug)]
pub struct ScanGrid {
    axes: Vec<AxisSpec>,
    template: ChainSpec,
    temperature: Temperature,
    quantity: Quantity,
}

impl ScanGrid {
    pub fn new(axes: Vec<AxisSpec>, template: ChainSpec, temperature: Temperature, quantity: Quantity) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Argument(format!(
                "a scan needs one or two axes, got {}",
                axes.len()
            )));
        }
        for a in &axes {
            a.validate()?;
        }
        if axes.len() == 2 && axes[0].parameter == axes[1].parameter {
            return Err(Error::Argument(format!("axis {} given twice", axes[0].parameter)));
        }
        let n = template.n_qubits();
        let qubits: Vec<usize> = match quantity {
            Quantity::Pair(a, b) => {
                if a == b {
                    return Err(Error::Argument(format!(
                        "pair quantity needs distinct qubits, got {a} twice"
                    )));
                }
                vec![a, b]
            }
            Quantity::Single(q) => vec![q],
        };
        if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
            return Err(Error::QubitIndex { index: q, n_qubits: n });
        }
        Ok(ScanGrid {
            axes,
            template,
            temperature,
            quantity,
        })
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    /// Cell coordinates in lexicographic order, first axis outermost.
    pub fn cells(&self) -> Vec<Vec<f64>> {
        let mut cells: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            let values = axis.values();
            cells = cells
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut c = prefix.clone();
                        c.push(v);
                        c
                    })
                })
                .collect();
        }
        cells
    }

    pub fn evaluate_cell(&self, values: &[f64]) -> Result<ScanRecord> {
        let assignments: Vec<(Parameter, f64)> = self
            .axes
            .iter()
            .map(|a| a.parameter)
            .zip(values.iter().copied())
            .collect();
        evaluate_point(&self.template, self.temperature, self.quantity, &assignments)
    }
}

/// One evaluated grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord {
    pub values: Vec<f64>,
    pub quantity: f64,
    pub ground_energy: f64,
    pub degeneracy: usize,
}

/// Evaluates `quantity` for `template` with the given parameter overrides.
///
/// Pair concurrences use the Gibbs state, which at `T = 0` is the uniform
/// mixture over the ground level. The single-qubit concurrence uses the
/// representative pure ground state and is rejected at `T > 0`.
pub fn evaluate_point(
    template: &ChainSpec,
    temperature: Temperature,
    quantity: Quantity,
    assignments: &[(Parameter, f64)],
) -> Result<ScanRecord> {
    let mut spec = *template;
    let mut t = temperature;
    for &(p, v) in assignments {
        match p {
            Parameter::J => spec.kondo = v,
            Parameter::W => spec.hopping = v,
            Parameter::B => spec.field = v,
            Parameter::T => t = Temperature::new(v)?,
        }
    }
    let spectrum = hermitian_eig(&build_hamiltonian(&spec)?)?;
    let (value, ground) = match quantity {
        Quantity::Pair(a, b) => {
            let rho = gibbs_from_spectrum(&spectrum, t);
            let c = pair_concurrence(&rho, a, b)?;
            (c, ground_from_spectrum(spectrum)?)
        }
        Quantity::Single(q) => {
            if t.value() > 0.0 {
                return Err(Error::Contract(
                    "single-qubit concurrence is only defined for the pure zero-temperature state".into(),
                ));
            }
            let g = ground_from_spectrum(spectrum)?;
            (single_qubit_concurrence(&g.state, q)?, g)
        }
    };
    Ok(ScanRecord {
        values: assignments.iter().map(|&(_, v)| v).collect(),
        quantity: value,
        ground_energy: ground.energy,
        degeneracy: ground.degeneracy,
    })
}

/// Evaluates every grid cell. Cells run in parallel; output order is the
/// lexicographic cell order regardless of scheduling.
pub fn sweep(grid: &ScanGrid) -> Result<Vec<ScanRecord>> {
    grid.cells().par_iter().map(|c| grid.evaluate_cell(c)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub b_value: f64,
    /// `1 - |<left|right>|^2` across the refined bracket.
    pub fidelity_drop: f64,
    /// Single-qubit concurrence of `tau_1` just above the crossing.
    pub post_single_concurrence: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
    pub b_c: Option<f64>,
}

/// Ground state at field `b`, nudged upward by `tol / 10` while degenerate.
fn ground_off_crossing(template: &ChainSpec, mut b: f64, tol: f64) -> Result<(f64, GroundSolution)> {
    let mut g = ground_state(&template.with_field(b))?;
    for _ in 0..8 {
        if g.degeneracy == 1 {
            break;
        }
        b += tol / 10.0;
        g = ground_state(&template.with_field(b))?;
    }
    Ok((b, g))
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Argument(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Scans `B` over `[0, b_max]` for abrupt ground-state changes and refines each
/// by bisection to a bracket of width at most `tol`.
pub fn find_crossings(template: &ChainSpec, b_max: f64, coarse_step: f64, tol: f64) -> Result<CrossingReport> {
    check_positive("b_max", b_max)?;
    check_positive("coarse_step", coarse_step)?;
    check_positive("tol", tol)?;
    template.validate()?;

    let n = (b_max / coarse_step - 1e-9).ceil().max(1.0) as usize;
    let samples: Vec<f64> = (0..=n).map(|k| (k as f64 * coarse_step).min(b_max)).collect();
    let grounds: Vec<(f64, PureState)> = samples
        .par_iter()
        .map(|&b| ground_off_crossing(template, b, tol).map(|(b, g)| (b, g.state)))
        .collect::<Result<_>>()?;

    let mut crossings = Vec::new();
    for pair in grounds.windows(2) {
        let (lo, psi_lo) = &pair[0];
        let (hi, psi_hi) = &pair[1];
        if psi_lo.fidelity(psi_hi) >= FIDELITY_THRESHOLD {
            continue;
        }
        let (mut lo, mut hi) = (*lo, *hi);
        let (mut psi_lo, mut psi_hi) = (psi_lo.clone(), psi_hi.clone());
        while hi - lo > tol {
            let (mid, g) = ground_off_crossing(template, 0.5 * (lo + hi), tol)?;
            if psi_lo.fidelity(&g.state) >= FIDELITY_THRESHOLD {
                lo = mid;
                psi_lo = g.state;
            } else {
                hi = mid;
                psi_hi = g.state;
            }
        }
        let b_value = 0.5 * (lo + hi);
        let (_, after) = ground_off_crossing(template, b_value + 10.0 * tol, tol)?;
        crossings.push(Crossing {
            b_value,
            fidelity_drop: 1.0 - psi_lo.fidelity(&psi_hi),
            post_single_concurrence: single_qubit_concurrence(&after.state, 0)?,
        });
    }

    let b_c = (0..crossings.len())
        .find(|&i| {
            crossings[i..]
                .iter()
                .all(|c| c.post_single_concurrence <= ZERO_CONCURRENCE)
        })
        .map(|i| crossings[i].b_value);
    Ok(CrossingReport { crossings, b_c })
}

/// Critical field of the two-site XY ring with `W = J`, scanned up to `3J`.
pub fn critical_field_diagonal(j: f64, tol: f64) -> Result<Option<f64>> {
    check_positive("J", j)?;
    let spec = ChainSpec::two_site(Anisotropy::Xy, j, j);
    Ok(find_crossings(&spec, 3.0 * j, 0.01 * j, tol)?.b_c)
}

/// Least-squares slope through the origin of `B_c(J)` along `W = J`.
pub fn fit_bc_line(j_values: &[f64], tol: f64) -> Result<f64> {
    if j_values.is_empty() {
        return Err(Error::Argument("critical-line fit needs at least one J value".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &j in j_values {
        let b_c = critical_field_diagonal(j, tol)?
            .ok_or_else(|| Error::Numerical(format!("no critical field found for J = W = {j}")))?;
        num += j * b_c;
        den += j * j;
    }
    Ok(num / den)
}

/// Smallest temperature above which the thermal concurrence of `(a, b)` stays
/// at zero up to `t_max`, located to a bracket of width `tol`. `None` when the
/// pair is unentangled at every sampled temperature or still entangled at `t_max`.
pub fn find_death_temperature(spec: &ChainSpec, a: usize, b: usize, t_max: f64, tol: f64) -> Result<Option<f64>> {
    check_positive("t_max", t_max)?;
    check_positive("tol", tol)?;
    let solver = ThermalSolver::new(spec)?;
    let conc = |t: f64| solver.pair_concurrence(a, b, Temperature::new(t)?);

    let temps: Vec<f64> = (0..=DEATH_GRID_POINTS)
        .map(|k| t_max * k as f64 / DEATH_GRID_POINTS as f64)
        .collect();
    let values: Vec<f64> = temps.iter().map(|&t| conc(t)).collect::<Result<_>>()?;
    if values[DEATH_GRID_POINTS] > ZERO_CONCURRENCE {
        return Ok(None);
    }
    let Some(last) = values.iter().rposition(|&c| c > ZERO_CONCURRENCE) else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (temps[last], temps[last + 1]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if conc(mid)? > ZERO_CONCURRENCE {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Ground-state concurrences of every tau bond, in `spec.bonds()` order.
pub fn tau_bond_concurrences(spec: &ChainSpec) -> Result<Vec<f64>> {
    let g = ground_state(spec)?;
    spec.bonds()
        .iter()
        .map(|&(i, j)| pair_concurrence(&g.state, ChainSpec::tau(i), ChainSpec::tau(j)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BondAsymmetry {
    pub kondo: f64,
    pub hopping: f64,
    pub bond_concurrences: Vec<f64>,
}

impl BondAsymmetry {
    pub fn spread(&self) -> f64 {
        let max = self.bond_concurrences.iter().copied().fold(f64::MIN, f64::max);
        let min = self.bond_concurrences.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }
}

/// Coarse search over `(J, W)` for a ring whose tau-bond concurrences are not
/// all equal (spread above `threshold`). Returns the point with the largest spread.
pub fn find_bond_asymmetry(
    template: &ChainSpec,
    j_values: &[f64],
    w_values: &[f64],
    threshold: f64,
) -> Result<Option<BondAsymmetry>> {
    let mut best: Option<BondAsymmetry> = None;
    for &j in j_values {
        for &w in w_values {
            let spec = template.with_kondo(j).with_hopping(w);
            let found = BondAsymmetry {
                kondo: j,
                hopping: w,
                bond_concurrences: tau_bond_concurrences(&spec)?,
            };
            let spread = found.spread();
            if spread > threshold && best.as_ref().is_none_or(|b| spread > b.spread()) {
                best = Some(found);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        let a = AxisSpec::linspace(Parameter::J, 0.0, 2.0, 101).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[50], 1.0);
        assert_eq!(v[100], 2.0);
        let b = AxisSpec::new(Parameter::B, 0.0, 1.0, 0.3).unwrap();
        assert_eq!(b.len(), 4);
        assert!((b.values()[3] - 0.9).abs() < 1e-15);
        assert_eq!(AxisSpec::new(Parameter::T, 1.0, 1.0, 0.1).unwrap().values(), vec![1.0]);
    }

    #[test]
    fn axis_validation() {
        assert!(AxisSpec::new(Parameter::J, 0.0, 1.0, 0.0).is_err());
        assert!(AxisSpec::new(Parameter::J, 1.0, 0.0, 0.1).is_err());
        assert!("Q".parse::<Parameter>().is_err());
    }

    #[test]
    fn grid_validation() {
        let spec = ChainSpec::two_site(Anisotropy::Xy, 1.0, 1.0);
        let j = AxisSpec::new(Parameter::J, 0.0, 1.0, 0.5).unwrap();
        assert!(ScanGrid::new(vec![j, j], spec, Temperature::ZERO, Quantity::Pair(0, 1)).is_err());
        assert!(ScanGrid::new(vec![], spec, Temperature::ZERO, Quantity::Pair(0, 1)).is_err());
        assert!(matches!(
            ScanGrid::new(vec![j], spec, Temperature::ZERO, Quantity::Single(4)),
            Err(Error::QubitIndex { .. })
        ));
        assert!(ScanGrid::new(vec![j], spec, Temperature::ZERO, Quantity::Pair(1, 1)).is_err());
    }

    #[test]
    fn cells_are_lexicographic() {
        let spec = ChainSpec::two_site(Anisotropy::Xy, 1.0, 1.0);
        let grid = ScanGrid::new(
            vec![
                AxisSpec::new(Parameter::J, 0.0, 1.0, 1.0).unwrap(),
                AxisSpec::new(Parameter::W, 0.0, 2.0, 1.0).unwrap(),
            ],
            spec,
            Temperature::ZERO,
            Quantity::Pair(0, 1),
        )
        .unwrap();
        let cells = grid.cells();
        assert_eq!(
            cells,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, 2.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![1.0, 2.0]
            ]
        );
    }

    #[test]
    fn single_quantity_rejects_temperature() {
        let spec = ChainSpec::two_site(Anisotropy::Xy, 1.0, 1.0);
        let r = evaluate_point(&spec, Temperature::new(0.5).unwrap(), Quantity::Single(0), &[]);
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn finder_argument_checks() {
        let spec = ChainSpec::two_site(Anisotropy::Xy, 1.0, 1.0);
        assert!(find_crossings(&spec, 0.0, 0.1, 1e-3).is_err());
        assert!(find_crossings(&spec, 1.0, 0.1, 0.0).is_err());
        assert!(find_death_temperature(&spec, 0, 1, -1.0, 1e-3).is_err());
        assert!(fit_bc_line(&[], 1e-3).is_err());
        assert!(critical_field_diagonal(-1.0, 1e-3).is_err());
    }
}

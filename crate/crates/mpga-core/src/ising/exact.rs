use alloc::vec::Vec;

use super::{IsingError, SpinLattice, Thermo};

/// Exact thermal averages by full enumeration of all 2^(L^2) configurations,
/// L <= 4. Boltzmann weights are shifted by the ground-state energy before
/// exponentiation.
pub fn exact_thermo(l: usize, t: f64) -> Result<Thermo, IsingError> {
    if l > 4 {
        return Err(IsingError::LatticeTooLarge { l });
    }
    if t <= 0.0 {
        return Err(IsingError::NonPositiveTemperature { t });
    }
    let states = enumerate_gray(l);
    Ok(thermal_averages(&states, l, t))
}

/// (E, |M|) for every configuration, Gray-code order with incremental energy
/// updates.
fn enumerate_gray(l: usize) -> Vec<(i64, i64)> {
    let n = l * l;
    let mut lat = SpinLattice::from_spins(l, alloc::vec![-1; n]);
    let mut out = Vec::with_capacity(1usize << n);
    out.push((lat.energy(), lat.magnetization().abs()));
    for code in 1u64..(1u64 << n) {
        // bit flipped between Gray(code-1) and Gray(code)
        let site = code.trailing_zeros() as usize;
        lat.flip(site);
        out.push((lat.energy(), lat.magnetization().abs()));
    }
    out
}

/// Same enumeration in plain binary-counting order with from-scratch energy
/// evaluation; a slow independent ordering used to cross-check the Gray-code
/// sweep.
#[cfg(test)]
fn enumerate_binary(l: usize) -> Vec<(i64, i64)> {
    let n = l * l;
    let mut out = Vec::with_capacity(1usize << n);
    for code in 0u64..(1u64 << n) {
        let spins: Vec<i8> = (0..n)
            .map(|b| if code >> b & 1 == 1 { 1 } else { -1 })
            .collect();
        let lat = SpinLattice::from_spins(l, spins);
        out.push((super::ising_energy(&lat), lat.magnetization().abs()));
    }
    out
}

pub(crate) fn thermal_averages(states: &[(i64, i64)], l: usize, t: f64) -> Thermo {
    let n_spins = (l * l) as f64;
    let e_min = states.iter().map(|&(e, _)| e).min().expect("states") as f64;
    let mut z = 0.0;
    let mut e_sum = 0.0;
    let mut e2_sum = 0.0;
    let mut m_abs_sum = 0.0;
    let mut m2_sum = 0.0;
    for &(e, m_abs) in states {
        let w = libm::exp(-((e as f64) - e_min) / t);
        z += w;
        e_sum += w * e as f64;
        e2_sum += w * (e as f64) * (e as f64);
        m_abs_sum += w * m_abs as f64;
        m2_sum += w * (m_abs as f64) * (m_abs as f64);
    }
    let e_mean = e_sum / z;
    let e2_mean = e2_sum / z;
    let m_abs_mean = m_abs_sum / z / n_spins;
    let m2_mean = m2_sum / z / (n_spins * n_spins);
    Thermo {
        t,
        e_mean: e_mean / n_spins,
        e_stderr: 0.0,
        c_h: (e2_mean - e_mean * e_mean) / (n_spins * t * t),
        c_h_stderr: 0.0,
        m_mean: m_abs_mean,
        m_stderr: 0.0,
        m_abs_mean,
        m_abs_stderr: 0.0,
        chi: n_spins * (m2_mean - m_abs_mean * m_abs_mean) / t,
        chi_stderr: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn high_temperature_limit_energy_vanishes() {
        let thermo = exact_thermo(2, 1e8).unwrap();
        assert!(thermo.e_mean.abs() < 1e-4, "e = {}", thermo.e_mean);
    }

    #[test]
    fn orderings_agree() {
        // the spec-pinned case at absolute 1e-12
        let a = thermal_averages(&enumerate_gray(2), 2, 1.0);
        let b = thermal_averages(&enumerate_binary(2), 2, 1.0);
        assert_relative_eq!(a.e_mean, b.e_mean, epsilon = 1e-12);
        assert_relative_eq!(a.c_h, b.c_h, epsilon = 1e-12);
        assert_relative_eq!(a.m_abs_mean, b.m_abs_mean, epsilon = 1e-12);
        assert_relative_eq!(a.chi, b.chi, epsilon = 1e-12);
        // larger state spaces accumulate order-dependent rounding
        for l in [2usize, 3] {
            let gray = enumerate_gray(l);
            let binary = enumerate_binary(l);
            for t in [1.0, 2.269] {
                let a = thermal_averages(&gray, l, t);
                let b = thermal_averages(&binary, l, t);
                assert_relative_eq!(a.e_mean, b.e_mean, max_relative = 1e-10);
                assert_relative_eq!(a.c_h, b.c_h, max_relative = 1e-10);
                assert_relative_eq!(a.m_abs_mean, b.m_abs_mean, max_relative = 1e-10);
                assert_relative_eq!(a.chi, b.chi, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn low_temperature_ground_state() {
        let thermo = exact_thermo(3, 0.4).unwrap();
        assert!((thermo.e_mean - -2.0).abs() < 0.01);
        assert!((thermo.m_abs_mean - 1.0).abs() < 0.01);
    }

    #[test]
    fn specific_heat_peaks_near_critical_temperature() {
        // finite-size maximum of C_H over the grid sits near T_c ~ 2.27
        let mut best = (0.0, 0.0);
        let mut t = 1.0;
        while t < 4.0 {
            let thermo = exact_thermo(4, t).unwrap();
            if thermo.c_h > best.1 {
                best = (t, thermo.c_h);
            }
            t += 0.1;
        }
        assert!(
            (best.0 - 2.269).abs() < 0.45,
            "C_H peak at T = {} instead of ~2.27",
            best.0
        );
    }

    #[test]
    fn oversized_lattice_rejected() {
        assert!(matches!(
            exact_thermo(5, 1.0),
            Err(IsingError::LatticeTooLarge { l: 5 })
        ));
    }
}

use rand::Rng;

use super::SpinLattice;

/// One Metropolis sweep: L^2 single-spin-flip attempts at uniformly random
/// sites with acceptance min(1, e^{-dE/T}). Positive energy changes on the
/// square lattice are only 4 or 8, so the two acceptance probabilities are
/// precomputed per call.
pub fn mh_sweep(lattice: &mut SpinLattice, t: f64, rng: &mut impl Rng) {
    debug_assert!(t > 0.0);
    let accept4 = libm::exp(-4.0 / t);
    let accept8 = libm::exp(-8.0 / t);
    let n = lattice.n_spins();
    for _ in 0..n {
        let site = rng.gen_range(0..n);
        let delta = lattice.flip_delta(site);
        let accept = match delta {
            d if d <= 0 => true,
            4 => rng.gen::<f64>() < accept4,
            8 => rng.gen::<f64>() < accept8,
            _ => unreachable!("square-lattice energy change"),
        };
        if accept {
            lattice.flip(site);
        }
    }
}

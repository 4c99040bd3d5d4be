use alloc::vec::Vec;
use rand::Rng;

use super::IsingError;

/// L x L periodic Ising configuration with cached total energy and
/// magnetization (J = 1, zero field). The caches are updated incrementally by
/// every operation and always equal the from-scratch sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinLattice {
    l: usize,
    spins: Vec<i8>,
    energy: i64,
    magnetization: i64,
}

impl SpinLattice {
    pub fn random(l: usize, rng: &mut impl Rng) -> Self {
        let spins: Vec<i8> = (0..l * l)
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        Self::from_spins(l, spins)
    }

    pub fn all_up(l: usize) -> Self {
        Self::from_spins(l, alloc::vec![1; l * l])
    }

    pub fn checkerboard(l: usize) -> Self {
        let spins = (0..l * l)
            .map(|i| {
                let (r, c) = (i / l, i % l);
                if (r + c) % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Self::from_spins(l, spins)
    }

    pub fn from_spins(l: usize, spins: Vec<i8>) -> Self {
        assert_eq!(spins.len(), l * l);
        let mut lat = Self {
            l,
            spins,
            energy: 0,
            magnetization: 0,
        };
        lat.energy = ising_energy(&lat);
        lat.magnetization = lat.spins.iter().map(|&s| s as i64).sum();
        lat
    }

    pub fn side(&self) -> usize {
        self.l
    }

    pub fn n_spins(&self) -> usize {
        self.l * self.l
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn spin(&self, row: usize, col: usize) -> i8 {
        self.spins[row * self.l + col]
    }

    /// Cached total energy.
    pub fn energy(&self) -> i64 {
        self.energy
    }

    /// Cached total magnetization.
    pub fn magnetization(&self) -> i64 {
        self.magnetization
    }

    /// Sum of the four neighbors of a site, with periodic wrap.
    pub fn neighbor_sum(&self, site: usize) -> i64 {
        let l = self.l;
        let (r, c) = (site / l, site % l);
        let up = self.spins[((r + l - 1) % l) * l + c] as i64;
        let down = self.spins[((r + 1) % l) * l + c] as i64;
        let left = self.spins[r * l + (c + l - 1) % l] as i64;
        let right = self.spins[r * l + (c + 1) % l] as i64;
        up + down + left + right
    }

    /// Energy change of flipping `site`: 2 s_i sum(neighbors).
    pub fn flip_delta(&self, site: usize) -> i64 {
        2 * self.spins[site] as i64 * self.neighbor_sum(site)
    }

    /// Flip `site`, updating both caches incrementally.
    pub fn flip(&mut self, site: usize) {
        self.energy += self.flip_delta(site);
        self.magnetization -= 2 * self.spins[site] as i64;
        self.spins[site] = -self.spins[site];
    }
}

/// Total energy -sum over the 2 L^2 distinct periodic bonds, recomputed from
/// scratch.
pub fn ising_energy(lattice: &SpinLattice) -> i64 {
    let l = lattice.side();
    let mut e = 0i64;
    for r in 0..l {
        for c in 0..l {
            let s = lattice.spin(r, c) as i64;
            let right = lattice.spin(r, (c + 1) % l) as i64;
            let down = lattice.spin((r + 1) % l, c) as i64;
            e -= s * (right + down);
        }
    }
    e
}

/// Child lattice: copy of `a` with a uniformly random axis-aligned
/// rectangular patch (width and height uniform on [1, L], periodic wrap)
/// overwritten by `b`'s spins. Caches are rebuilt. Patch swaps preserve
/// local spin domains, which is what makes crossover useful for
/// thermalization.
pub fn spin_crossover(
    a: &SpinLattice,
    b: &SpinLattice,
    rng: &mut impl Rng,
) -> Result<SpinLattice, IsingError> {
    if a.side() != b.side() {
        return Err(IsingError::SizeMismatch {
            a: a.side(),
            b: b.side(),
        });
    }
    let l = a.side();
    let width = rng.gen_range(1..=l);
    let height = rng.gen_range(1..=l);
    let row0 = rng.gen_range(0..l);
    let col0 = rng.gen_range(0..l);
    let mut spins = a.spins().to_vec();
    for dr in 0..height {
        let r = (row0 + dr) % l;
        for dc in 0..width {
            let c = (col0 + dc) % l;
            spins[r * l + c] = b.spin(r, c);
        }
    }
    Ok(SpinLattice::from_spins(l, spins))
}

/// Per-site coin-flip crossover, the alternative operator.
pub fn uniform_spin_crossover(
    a: &SpinLattice,
    b: &SpinLattice,
    rng: &mut impl Rng,
) -> Result<SpinLattice, IsingError> {
    if a.side() != b.side() {
        return Err(IsingError::SizeMismatch {
            a: a.side(),
            b: b.side(),
        });
    }
    let spins = a
        .spins()
        .iter()
        .zip(b.spins())
        .map(|(&sa, &sb)| if rng.gen::<bool>() { sa } else { sb })
        .collect();
    Ok(SpinLattice::from_spins(a.side(), spins))
}

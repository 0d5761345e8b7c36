//! Exact reference: enumerate the particle-number-conserving subspace, build
//! the Hamiltonian there by direct application of the ladder operators, and
//! diagonalize (dense below a dimension threshold, Lanczos above it).
//!
//! Fermionic sign convention: operators act right to left and each ladder
//! operator at orbit index k picks up (-1)^(number of occupied orbits below k
//! in the same species register) - bit for bit the Jordan-Wigner Z-string.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::interactions::{SecondQuantizedHamiltonian, SpeciesPair, TwoBodyTerm};
use crate::linalg::{lanczos_lowest, symmetric_eigen, LinalgError, Matrix};
use crate::math;
use crate::orbits::Species;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError {
    BadParticleCount { orbits: usize, particles: u32 },
    DimensionLimitExceeded { dim: usize, limit: usize },
    NotSymmetric,
    ResidualTooLarge { residual: f64, bound: f64 },
    Linalg(LinalgError),
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::BadParticleCount { orbits, particles } => {
                write!(f, "cannot place {particles} particles in {orbits} orbits")
            }
            OracleError::DimensionLimitExceeded { dim, limit } => write!(
                f,
                "sector dimension {dim} exceeds the dense limit {limit}; \
                 use the Lanczos sector solver or a smaller catalog"
            ),
            OracleError::NotSymmetric => write!(f, "matrix is not symmetric"),
            OracleError::ResidualTooLarge { residual, bound } => {
                write!(f, "eigenpair residual {residual:e} exceeds bound {bound:e}")
            }
            OracleError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<LinalgError> for OracleError {
    fn from(e: LinalgError) -> Self {
        OracleError::Linalg(e)
    }
}

/// All C(n_orbits, n_particles) occupation masks, ordered lexicographically
/// as occupation strings (orbit 1 printed first; bit i of a mask = orbit
/// i+1 occupied).
pub fn enumerate_sector(n_orbits: usize, n_particles: u32) -> Result<Vec<u64>, OracleError> {
    if n_particles as usize > n_orbits || n_orbits > 63 {
        return Err(OracleError::BadParticleCount { orbits: n_orbits, particles: n_particles });
    }
    let mut out = Vec::new();
    let mut current = 0u64;
    fn recurse(pos: usize, left: u32, n_orbits: usize, current: &mut u64, out: &mut Vec<u64>) {
        if n_orbits - pos < left as usize {
            return;
        }
        if pos == n_orbits {
            out.push(*current);
            return;
        }
        // '0' sorts before '1' in the occupation string.
        recurse(pos + 1, left, n_orbits, current, out);
        if left > 0 {
            *current |= 1 << pos;
            recurse(pos + 1, left - 1, n_orbits, current, out);
            *current &= !(1u64 << pos);
        }
    }
    fn recurse_entry(n_orbits: usize, left: u32, current: &mut u64, out: &mut Vec<u64>) {
        recurse(0, left, n_orbits, current, out);
    }
    // The recursion above explores '0' branches fully before '1' at each
    // position, which is exactly string-lexicographic order.
    recurse_entry(n_orbits, n_particles, &mut current, &mut out);
    Ok(out)
}

/// Render a mask as its occupation string (orbit 1 first).
pub fn occupation_string(mask: u64, n_orbits: usize) -> String {
    let mut s = String::with_capacity(n_orbits);
    for i in 0..n_orbits {
        s.push(if mask & (1 << i) != 0 { '1' } else { '0' });
    }
    s
}

#[inline]
fn annihilate(mask: u64, idx: usize) -> Option<(u64, f64)> {
    if mask & (1 << idx) == 0 {
        return None;
    }
    let sign = if (mask & ((1u64 << idx) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((mask & !(1u64 << idx), sign))
}

#[inline]
fn create(mask: u64, idx: usize) -> Option<(u64, f64)> {
    if mask & (1 << idx) != 0 {
        return None;
    }
    let sign = if (mask & ((1u64 << idx) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((mask | (1 << idx), sign))
}

/// a+(i) a(j) applied to a species mask.
pub(crate) fn apply_one_body(i: usize, j: usize, mask: u64) -> Option<(u64, f64)> {
    let (m, s1) = annihilate(mask, j)?;
    let (m, s2) = create(m, i)?;
    Some((m, s1 * s2))
}

/// a+(cl) a+(cr) a(al) a(ar) applied to a species mask (ar first).
pub(crate) fn apply_two_body(t: &TwoBodyTerm, mask: u64) -> Option<(u64, f64)> {
    let (m, s1) = annihilate(mask, t.ann_right)?;
    let (m, s2) = annihilate(m, t.ann_left)?;
    let (m, s3) = create(m, t.create_right)?;
    let (m, s4) = create(m, t.create_left)?;
    Some((m, s1 * s2 * s3 * s4))
}

/// Basis of one species sector plus its index map.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub masks: Vec<u64>,
    pub index: BTreeMap<u64, usize>,
    pub n_orbits: usize,
    pub n_particles: u32,
}

impl SectorBasis {
    pub fn new(n_orbits: usize, n_particles: u32) -> Result<Self, OracleError> {
        let masks = enumerate_sector(n_orbits, n_particles)?;
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(Self { masks, index, n_orbits, n_particles })
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }
}

/// Dense matrix of one species' share of the Hamiltonian (one-body plus
/// same-species two-body terms) on that species' sector basis.
pub fn species_sector_matrix(
    sq: &SecondQuantizedHamiltonian,
    species: Species,
    basis: &SectorBasis,
) -> Matrix {
    let g = sq.g.matrix(species);
    let pair = match species {
        Species::Proton => SpeciesPair::ProtonProton,
        Species::Neutron => SpeciesPair::NeutronNeutron,
    };
    let dim = basis.dim();
    let mut m = Matrix::zeros(dim, dim);
    for (col, &mask) in basis.masks.iter().enumerate() {
        for i in 0..g.rows {
            for j in 0..g.cols {
                let coeff = g.get(i, j);
                if coeff == 0.0 {
                    continue;
                }
                if let Some((target, sign)) = apply_one_body(i, j, mask) {
                    let row = basis.index[&target];
                    m.add_to(row, col, sign * coeff);
                }
            }
        }
        for t in sq.two_body.iter().filter(|t| t.species_pair == pair) {
            if let Some((target, sign)) = apply_two_body(t, mask) {
                let row = basis.index[&target];
                m.add_to(row, col, sign * t.coefficient);
            }
        }
    }
    m
}

/// The combined proton x neutron sector: bases plus the per-species dense
/// blocks A and B with H = A (x) I + I (x) B (no cross-species residual
/// terms are generated).
pub struct SectorOperator {
    pub proton_basis: SectorBasis,
    pub neutron_basis: SectorBasis,
    pub proton_block: Matrix,
    pub neutron_block: Matrix,
}

impl SectorOperator {
    pub fn build(sq: &SecondQuantizedHamiltonian) -> Result<Self, OracleError> {
        let n_orbits = sq.nucleus.catalog.len_per_species();
        let proton_basis = SectorBasis::new(n_orbits, sq.nucleus.z)?;
        let neutron_basis = SectorBasis::new(n_orbits, sq.nucleus.n)?;
        let proton_block = species_sector_matrix(sq, Species::Proton, &proton_basis);
        let neutron_block = species_sector_matrix(sq, Species::Neutron, &neutron_basis);
        Ok(Self { proton_basis, neutron_basis, proton_block, neutron_block })
    }

    pub fn dim(&self) -> usize {
        self.proton_basis.dim() * self.neutron_basis.dim()
    }

    /// Combined index of (proton state p, neutron state n): p-major.
    pub fn combined_index(&self, p: usize, n: usize) -> usize {
        p * self.neutron_basis.dim() + n
    }

    /// y = H x on the combined sector, using the Kronecker-sum structure.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let dp = self.proton_basis.dim();
        let dn = self.neutron_basis.dim();
        debug_assert_eq!(x.len(), dp * dn);
        for v in y.iter_mut() {
            *v = 0.0;
        }
        // (A (x) I) x: rows of A combine proton blocks.
        for pr in 0..dp {
            let row = self.proton_block.row(pr);
            let dst = &mut y[pr * dn..(pr + 1) * dn];
            for (pc, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let src = &x[pc * dn..(pc + 1) * dn];
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d += a * s;
                }
            }
        }
        // (I (x) B) x: B acts inside each proton block.
        for p in 0..dp {
            let src = &x[p * dn..(p + 1) * dn];
            let dst = &mut y[p * dn..(p + 1) * dn];
            for nr in 0..dn {
                let row = self.neutron_block.row(nr);
                let mut acc = 0.0;
                for (b, s) in row.iter().zip(src.iter()) {
                    acc += b * s;
                }
                dst[nr] += acc;
            }
        }
    }

    /// Energy expectation <x|H|x> / <x|x> for a real sector vector.
    pub fn energy(&self, x: &[f64]) -> f64 {
        let mut y = alloc::vec![0.0; x.len()];
        self.matvec(x, &mut y);
        let num: f64 = x.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().map(|a| a * a).sum();
        num / den
    }
}

/// Sector dimensions above this go to the Lanczos solver by default; the
/// cubic-cost dense path is only worthwhile for small blocks.
pub const DENSE_SECTOR_LIMIT: usize = 500;

/// Dense combined-sector matrix; errors above `limit`.
pub fn build_sector_matrix(
    sq: &SecondQuantizedHamiltonian,
    limit: usize,
) -> Result<Matrix, OracleError> {
    let op = SectorOperator::build(sq)?;
    let dim = op.dim();
    if dim > limit {
        return Err(OracleError::DimensionLimitExceeded { dim, limit });
    }
    let dp = op.proton_basis.dim();
    let dn = op.neutron_basis.dim();
    let mut m = Matrix::zeros(dim, dim);
    for pr in 0..dp {
        for pc in 0..dp {
            let a = op.proton_block.get(pr, pc);
            if a != 0.0 {
                for n in 0..dn {
                    m.add_to(pr * dn + n, pc * dn + n, a);
                }
            }
        }
    }
    for p in 0..dp {
        for nr in 0..dn {
            for nc in 0..dn {
                let b = op.neutron_block.get(nr, nc);
                if b != 0.0 {
                    m.add_to(p * dn + nr, p * dn + nc, b);
                }
            }
        }
    }
    Ok(m)
}

/// Lowest eigenpair of a dense symmetric matrix with a residual guarantee
/// ||H v - E v|| <= 1e-8 ||H||.
pub fn ground_state(matrix: &Matrix) -> Result<(f64, Vec<f64>), OracleError> {
    let scale = matrix.inf_norm().max(1.0);
    if !matrix.is_symmetric(1e-10 * scale) {
        return Err(OracleError::NotSymmetric);
    }
    let eig = symmetric_eigen(matrix)?;
    let energy = eig.values[0];
    let vector: Vec<f64> = (0..matrix.rows).map(|r| eig.vectors.get(r, 0)).collect();
    let mut y = alloc::vec![0.0; matrix.rows];
    matrix.matvec(&vector, &mut y);
    let residual = math::sqrt(
        y.iter().zip(vector.iter()).map(|(a, b)| (a - energy * b) * (a - energy * b)).sum(),
    );
    let bound = 1e-8 * matrix.inf_norm();
    if residual > bound.max(1e-12) {
        return Err(OracleError::ResidualTooLarge { residual, bound });
    }
    Ok((energy, vector))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug)]
pub struct SectorSolution {
    pub energy: f64,
    /// Ground vector in combined-sector coordinates (proton-major).
    pub vector: Vec<f64>,
    pub dimension: usize,
    pub method: SolveMethod,
}

/// Ground state of the (Z, N) sector: dense diagonalization up to
/// [`DENSE_SECTOR_LIMIT`], Lanczos on the Kronecker-sum matvec above it.
pub fn sector_ground(sq: &SecondQuantizedHamiltonian) -> Result<SectorSolution, OracleError> {
    sector_ground_with_limit(sq, DENSE_SECTOR_LIMIT)
}

pub fn sector_ground_with_limit(
    sq: &SecondQuantizedHamiltonian,
    dense_limit: usize,
) -> Result<SectorSolution, OracleError> {
    let op = SectorOperator::build(sq)?;
    let dim = op.dim();
    if dim <= dense_limit {
        let m = build_sector_matrix(sq, dense_limit)?;
        let (energy, vector) = ground_state(&m)?;
        Ok(SectorSolution { energy, vector, dimension: dim, method: SolveMethod::Dense })
    } else {
        let scale = op.proton_block.inf_norm() + op.neutron_block.inf_norm();
        let (energy, vector) = lanczos_lowest(
            |x, y| op.matvec(x, y),
            dim,
            400,
            1e-9 * scale.max(1.0),
            0x5ec7a11,
        )?;
        Ok(SectorSolution { energy, vector, dimension: dim, method: SolveMethod::Lanczos })
    }
}

/// Full-Fock-space dense matrix over all 2^(N_pi+N_nu) occupation states
/// (proton bits low, neutron bits high), for cross-checks against the
/// Pauli-sum expansion on small registers.
pub fn build_full_space_matrix(sq: &SecondQuantizedHamiltonian) -> Matrix {
    let np = sq.nucleus.catalog.proton.len();
    let nn = sq.nucleus.catalog.neutron.len();
    let n = np + nn;
    assert!(n <= 12, "full-space expansion limited to 12 qubits");
    let dim = 1usize << n;
    let p_mask = (1u64 << np) - 1;
    let mut m = Matrix::zeros(dim, dim);
    for col in 0..dim {
        let bits = col as u64;
        let pm = bits & p_mask;
        let nm = bits >> np;
        for (species, offset, mask) in
            [(Species::Proton, 0usize, pm), (Species::Neutron, np, nm)]
        {
            let g = sq.g.matrix(species);
            for i in 0..g.rows {
                for j in 0..g.cols {
                    let coeff = g.get(i, j);
                    if coeff == 0.0 {
                        continue;
                    }
                    if let Some((target, sign)) = apply_one_body(i, j, mask) {
                        let row = if offset == 0 {
                            (target | (nm << np)) as usize
                        } else {
                            (pm | (target << np)) as usize
                        };
                        m.add_to(row, col, sign * coeff);
                    }
                }
            }
            let pair = match species {
                Species::Proton => SpeciesPair::ProtonProton,
                Species::Neutron => SpeciesPair::NeutronNeutron,
            };
            for t in sq.two_body.iter().filter(|t| t.species_pair == pair) {
                if let Some((target, sign)) = apply_two_body(t, mask) {
                    let row = if offset == 0 {
                        (target | (nm << np)) as usize
                    } else {
                        (pm | (target << np)) as usize
                    };
                    m.add_to(row, col, sign * t.coefficient);
                }
            }
        }
    }
    m
}

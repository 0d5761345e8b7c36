//! Single-particle basis: orbit catalog, angular-momentum coupling, and
//! harmonic-oscillator radial functions.
//!
//! Orbits are labeled |n, l, j, m_j> with the spectroscopic radial label n
//! starting at 1 (1s, 1p, ...). Each m_j projection is its own orbit and the
//! catalog fixes a global ordering shared by protons and neutrons:
//! 1s1/2(-1/2), 1s1/2(+1/2), 1p3/2(-3/2 .. +3/2), 1p1/2(-+1/2),
//! 1d5/2(-5/2), 1d5/2(+5/2), then further shells in spherical order
//! (rest of 1d5/2, 2s1/2, 1d3/2, 1f7/2) added as +-m_j pairs from the
//! smallest |m_j| outward. Truncated shells inside the first ten take the
//! stretched pairs first, which reproduces the published four-orbit choice
//! (1s1/2 with 1p3/2 +-3/2).

use alloc::vec::Vec;

use crate::constants::oscillator_alpha;
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Species {
    Proton,
    Neutron,
}

impl Species {
    pub fn label(self) -> &'static str {
        match self {
            Species::Proton => "p",
            Species::Neutron => "n",
        }
    }
}

/// A single-particle state |n, l, j, m_j> of one species.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Orbit {
    pub species: Species,
    /// Spectroscopic radial label, 1-based (1s, 2s, ...).
    pub n: u8,
    pub l: u8,
    pub two_j: u8,
    pub two_mj: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitError {
    InvalidQuantumNumbers { n: u8, l: u8, two_j: u8, two_mj: i8 },
    CountNotEvenPositive { count: usize },
    CountBeyondShellTable { count: usize, max: usize },
    NegativeRadius,
}

impl core::fmt::Display for OrbitError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrbitError::InvalidQuantumNumbers { n, l, two_j, two_mj } => write!(
                f,
                "invalid orbit quantum numbers n={n} l={l} 2j={two_j} 2mj={two_mj}"
            ),
            OrbitError::CountNotEvenPositive { count } => write!(
                f,
                "orbit count per species must be an even number >= 2 (got {count}); \
                 odd counts leave an m_j pairing partner missing"
            ),
            OrbitError::CountBeyondShellTable { count, max } => write!(
                f,
                "orbit count {count} exceeds the implemented shell table (max {max} per species)"
            ),
            OrbitError::NegativeRadius => write!(f, "radial coordinate must be nonnegative"),
        }
    }
}

impl Orbit {
    pub fn new(species: Species, n: u8, l: u8, two_j: u8, two_mj: i8) -> Result<Self, OrbitError> {
        let ok_j = (two_j as i16 == 2 * l as i16 + 1)
            || (l > 0 && two_j as i16 == 2 * l as i16 - 1);
        let ok_mj = two_mj.unsigned_abs() <= two_j && (two_mj.rem_euclid(2) == 1);
        if n < 1 || !ok_j || !ok_mj {
            return Err(OrbitError::InvalidQuantumNumbers { n, l, two_j, two_mj });
        }
        Ok(Self { species, n, l, two_j, two_mj })
    }

    /// Radial quantum number used by the Laguerre convention (n - 1).
    pub fn nr(&self) -> u32 {
        (self.n - 1) as u32
    }

    /// True when two orbits share (l, j, m_j); the mean field only connects
    /// such pairs.
    pub fn same_channel(&self, other: &Orbit) -> bool {
        self.l == other.l && self.two_j == other.two_j && self.two_mj == other.two_mj
    }

    /// The (n, l, j) shell key this orbit belongs to.
    pub fn shell(&self) -> (u8, u8, u8) {
        (self.n, self.l, self.two_j)
    }
}

impl core::fmt::Display for Orbit {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        const SPECTRO: &[u8] = b"spdfghik";
        let lch = SPECTRO[self.l as usize] as char;
        write!(
            f,
            "{}{}{}[{}/2,{}/2]",
            self.species.label(),
            self.n,
            lch,
            self.two_j,
            self.two_mj
        )
    }
}

/// Shell table in standard spherical filling order: (n, l, 2j).
const SHELLS: &[(u8, u8, u8)] = &[
    (1, 0, 1), // 1s1/2
    (1, 1, 3), // 1p3/2
    (1, 1, 1), // 1p1/2
    (1, 2, 5), // 1d5/2
    (2, 0, 1), // 2s1/2
    (1, 2, 3), // 1d3/2
    (1, 3, 7), // 1f7/2
];

const MAX_ORBITS: usize = 28;

/// Ordered orbit sequence per species plus the oscillator parameter.
#[derive(Clone, Debug)]
pub struct OrbitCatalog {
    pub proton: Vec<Orbit>,
    pub neutron: Vec<Orbit>,
    /// Oscillator parameter alpha = 1.1 / A^(1/6) in 1/fm.
    pub alpha: f64,
}

impl OrbitCatalog {
    pub fn orbits(&self, species: Species) -> &[Orbit] {
        match species {
            Species::Proton => &self.proton,
            Species::Neutron => &self.neutron,
        }
    }

    pub fn len_per_species(&self) -> usize {
        self.proton.len()
    }

    /// Index of the (n, l, j, -m_j) partner of the orbit at `index`.
    pub fn time_reversed_partner(&self, species: Species, index: usize) -> Option<usize> {
        let orbits = self.orbits(species);
        let o = orbits[index];
        orbits
            .iter()
            .position(|p| p.shell() == o.shell() && p.two_mj == -o.two_mj)
    }
}

fn label_list(count: usize) -> Result<Vec<(u8, u8, u8, i8)>, OrbitError> {
    if count < 2 || count % 2 != 0 {
        return Err(OrbitError::CountNotEvenPositive { count });
    }
    if count > MAX_ORBITS {
        return Err(OrbitError::CountBeyondShellTable { count, max: MAX_ORBITS });
    }
    let mut out: Vec<(u8, u8, u8, i8)> = Vec::with_capacity(count);
    if count <= 10 {
        for &(n, l, two_j) in SHELLS {
            if out.len() == count {
                break;
            }
            let size = (two_j + 1) as usize;
            let remaining = count - out.len();
            if remaining >= size {
                // Whole shell, m_j ascending.
                let mut two_mj = -(two_j as i8);
                while two_mj <= two_j as i8 {
                    out.push((n, l, two_j, two_mj));
                    two_mj += 2;
                }
            } else {
                // Truncated shell: stretched pairs first, -m_j before +m_j.
                let mut m = two_j as i8;
                let mut left = remaining;
                while left >= 2 {
                    out.push((n, l, two_j, -m));
                    out.push((n, l, two_j, m));
                    m -= 2;
                    left -= 2;
                }
                break;
            }
        }
    } else {
        out = label_list(10)?;
        // Continuation shells with the m_j values not yet present, smallest
        // |m_j| outward.
        let continuation: &[(u8, u8, u8)] = &[(1, 2, 5), (2, 0, 1), (1, 2, 3), (1, 3, 7)];
        'outer: for &(n, l, two_j) in continuation {
            let mut m: i8 = 1;
            while m <= two_j as i8 {
                let already = out
                    .iter()
                    .any(|&(an, al, aj, am)| (an, al, aj) == (n, l, two_j) && am == m);
                if !already {
                    out.push((n, l, two_j, -m));
                    out.push((n, l, two_j, m));
                    if out.len() == count {
                        break 'outer;
                    }
                }
                m += 2;
            }
        }
        if out.len() != count {
            return Err(OrbitError::CountBeyondShellTable { count, max: MAX_ORBITS });
        }
    }
    Ok(out)
}

/// Build the orbit catalog for one nucleus: `count_per_species` orbits for
/// each species, oscillator parameter from the mass number.
pub fn build_orbit_catalog(count_per_species: usize, mass_number: u32) -> Result<OrbitCatalog, OrbitError> {
    let labels = label_list(count_per_species)?;
    let mut proton = Vec::with_capacity(labels.len());
    let mut neutron = Vec::with_capacity(labels.len());
    for &(n, l, two_j, two_mj) in &labels {
        proton.push(Orbit::new(Species::Proton, n, l, two_j, two_mj)?);
        neutron.push(Orbit::new(Species::Neutron, n, l, two_j, two_mj)?);
    }
    Ok(OrbitCatalog { proton, neutron, alpha: oscillator_alpha(mass_number) })
}

/// Clebsch-Gordan coefficient <l, m; 1/2, m_s | j, m_j> for l x 1/2 coupling
/// in the Condon-Shortley convention, via the closed-form j = l +- 1/2
/// expressions. Returns 0 for violated selection rules rather than erroring.
pub fn clebsch_gordan_half(l: u32, m: i32, two_ms: i32, two_j: u32, two_mj: i32) -> f64 {
    if two_ms.abs() != 1 {
        return 0.0;
    }
    if 2 * m + two_ms != two_mj {
        return 0.0;
    }
    if m.unsigned_abs() > l || two_mj.unsigned_abs() > two_j {
        return 0.0;
    }
    let li = l as i32;
    let denom = 2.0 * (2 * l + 1) as f64;
    if two_j == 2 * l + 1 {
        // j = l + 1/2
        let num = if two_ms > 0 { 2 * li + two_mj + 1 } else { 2 * li - two_mj + 1 };
        math::sqrt(num as f64 / denom)
    } else if l >= 1 && two_j == 2 * l - 1 {
        // j = l - 1/2
        if two_ms > 0 {
            -math::sqrt((2 * li - two_mj + 1) as f64 / denom)
        } else {
            math::sqrt((2 * li + two_mj + 1) as f64 / denom)
        }
    } else {
        0.0
    }
}

/// Generalized Laguerre polynomial L_n^(a)(x) by the three-term recurrence.
pub fn generalized_laguerre(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * l - (kf + a) * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Harmonic-oscillator radial function R_{nr,l}(r) in fm^(-3/2), normalized
/// so that the integral of R^2 r^2 dr over [0, inf) is 1.
///
/// `nr` is the node count (the spectroscopic label minus one); the Laguerre
/// factor is the modern L_{nr}^{(l+1/2)}(alpha^2 r^2).
pub fn radial_wavefunction(nr: u32, l: u32, alpha: f64, r: f64) -> Result<f64, OrbitError> {
    if r < 0.0 {
        return Err(OrbitError::NegativeRadius);
    }
    Ok(radial_unchecked(nr, l, alpha, r))
}

pub(crate) fn radial_unchecked(nr: u32, l: u32, alpha: f64, r: f64) -> f64 {
    let x = alpha * r;
    let x2 = x * x;
    let norm2 = 2.0 * math::factorial(nr) * alpha * alpha * alpha
        * math::powi(2.0, (nr + l + 1) as i32)
        / (math::odd_double_factorial(nr + l) * math::sqrt(core::f64::consts::PI));
    math::sqrt(norm2)
        * math::powi(x, l as i32)
        * math::exp(-0.5 * x2)
        * generalized_laguerre(nr, l as f64 + 0.5, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{symmetric_eigen, Matrix};
    use crate::quad::{integrate_radial, QuadraturePolicy};

    fn catalog_labels(count: usize) -> Vec<(u8, u8, u8, i8)> {
        build_orbit_catalog(count, 16)
            .unwrap()
            .proton
            .iter()
            .map(|o| (o.n, o.l, o.two_j, o.two_mj))
            .collect()
    }

    #[test]
    fn ten_orbit_ordering_is_the_published_list() {
        let expected = [
            (1, 0, 1, -1),
            (1, 0, 1, 1),
            (1, 1, 3, -3),
            (1, 1, 3, -1),
            (1, 1, 3, 1),
            (1, 1, 3, 3),
            (1, 1, 1, -1),
            (1, 1, 1, 1),
            (1, 2, 5, -5),
            (1, 2, 5, 5),
        ];
        assert_eq!(catalog_labels(10), expected);
    }

    #[test]
    fn four_orbit_catalog_takes_stretched_p32_pair() {
        let expected = [(1, 0, 1, -1), (1, 0, 1, 1), (1, 1, 3, -3), (1, 1, 3, 3)];
        assert_eq!(catalog_labels(4), expected);
    }

    #[test]
    fn two_orbit_catalog_and_alpha() {
        let cat = build_orbit_catalog(2, 2).unwrap();
        assert_eq!(
            cat.proton
                .iter()
                .map(|o| (o.n, o.l, o.two_j, o.two_mj))
                .collect::<Vec<_>>(),
            [(1, 0, 1, -1), (1, 0, 1, 1)]
        );
        assert!((cat.alpha - 1.1 / 2f64.powf(1.0 / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn extension_rule_for_larger_catalogs() {
        let l12 = catalog_labels(12);
        assert_eq!(&l12[10..], &[(1, 2, 5, -1), (1, 2, 5, 1)]);
        let l14 = catalog_labels(14);
        assert_eq!(&l14[10..], &[(1, 2, 5, -1), (1, 2, 5, 1), (1, 2, 5, -3), (1, 2, 5, 3)]);
        let l22 = catalog_labels(22);
        assert_eq!(
            &l22[14..],
            &[
                (2, 0, 1, -1),
                (2, 0, 1, 1),
                (1, 2, 3, -1),
                (1, 2, 3, 1),
                (1, 2, 3, -3),
                (1, 2, 3, 3),
                (1, 3, 7, -1),
                (1, 3, 7, 1),
            ]
        );
    }

    #[test]
    fn catalog_rejections() {
        assert!(matches!(
            build_orbit_catalog(5, 16),
            Err(OrbitError::CountNotEvenPositive { .. })
        ));
        assert!(matches!(
            build_orbit_catalog(0, 16),
            Err(OrbitError::CountNotEvenPositive { .. })
        ));
        assert!(matches!(
            build_orbit_catalog(30, 16),
            Err(OrbitError::CountBeyondShellTable { .. })
        ));
    }

    #[test]
    fn catalog_is_mj_closed_and_deterministic() {
        for count in [2usize, 4, 6, 8, 10, 12, 14, 16, 20, 22, 28] {
            let cat = build_orbit_catalog(count, 40).unwrap();
            for i in 0..count {
                assert!(
                    cat.time_reversed_partner(Species::Proton, i).is_some(),
                    "orbit {i} of {count} misses its -m_j partner"
                );
            }
            let again = build_orbit_catalog(count, 40).unwrap();
            assert_eq!(cat.proton, again.proton);
            assert_eq!(cat.neutron, again.neutron);
        }
    }

    #[test]
    fn cg_trivial_and_closed_form() {
        assert_eq!(clebsch_gordan_half(0, 0, 1, 1, 1), 1.0);
        let v = clebsch_gordan_half(1, 1, -1, 3, 1);
        assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // Selection-rule violations return zero.
        assert_eq!(clebsch_gordan_half(1, 1, 1, 3, 1), 0.0);
        assert_eq!(clebsch_gordan_half(2, 0, 1, 1, 1), 0.0);
    }

    #[test]
    fn cg_completeness() {
        for l in 0..=3u32 {
            for m in -(l as i32)..=(l as i32) {
                for two_ms in [-1, 1] {
                    let mut total = 0.0;
                    let mut js = alloc::vec![2 * l + 1];
                    if l > 0 {
                        js.push(2 * l - 1);
                    }
                    for two_j in js {
                        let c = clebsch_gordan_half(l, m, two_ms, two_j, 2 * m + two_ms);
                        total += c * c;
                    }
                    assert!((total - 1.0).abs() < 1e-12, "l={l} m={m} ms={two_ms}");
                }
            }
        }
    }

    /// Independent check: the CG columns must be eigenvectors of l.s built
    /// directly from ladder operators on the product basis.
    #[test]
    fn cg_columns_diagonalize_l_dot_s() {
        for l in 1..=3u32 {
            let dim = 2 * (2 * l as usize + 1);
            let idx = |m: i32, up: bool| -> usize {
                ((m + l as i32) as usize) * 2 + usize::from(up)
            };
            let mut mat = Matrix::zeros(dim, dim);
            for m in -(l as i32)..=(l as i32) {
                for up in [false, true] {
                    let ms = if up { 0.5 } else { -0.5 };
                    mat.add_to(idx(m, up), idx(m, up), m as f64 * ms);
                }
                // (1/2) l+ s- : |m, up> -> |m+1, down>
                if m < l as i32 {
                    let c = 0.5 * (((l as i32 - m) * (l as i32 + m + 1)) as f64).sqrt();
                    mat.add_to(idx(m + 1, false), idx(m, true), c);
                    mat.add_to(idx(m, true), idx(m + 1, false), c);
                }
            }
            let eig = symmetric_eigen(&mat).unwrap();
            for v in &eig.values {
                let candidates = [l as f64 / 2.0, -((l + 1) as f64) / 2.0];
                assert!(
                    candidates.iter().any(|c| (v - c).abs() < 1e-10),
                    "unexpected l.s eigenvalue {v} for l={l}"
                );
            }
            // CG columns are eigenvectors with the matching eigenvalue.
            for (two_j, expect) in [
                (2 * l + 1, l as f64 / 2.0),
                (2 * l - 1, -((l + 1) as f64) / 2.0),
            ] {
                for two_mj in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let mut v = alloc::vec![0.0; dim];
                    for m in -(l as i32)..=(l as i32) {
                        for (two_ms, up) in [(1, true), (-1, false)] {
                            if 2 * m + two_ms == two_mj {
                                v[idx(m, up)] = clebsch_gordan_half(l, m, two_ms, two_j, two_mj);
                            }
                        }
                    }
                    let mut y = alloc::vec![0.0; dim];
                    mat.matvec(&v, &mut y);
                    for (a, b) in y.iter().zip(v.iter()) {
                        assert!((a - expect * b).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn radial_ground_state_closed_form() {
        let alpha = 0.9f64;
        let n = 2.0 * alpha.powf(1.5) / core::f64::consts::PI.powf(0.25);
        for r in [0.0, 0.3, 1.0, 2.7] {
            let expect = n * (-alpha * alpha * r * r / 2.0).exp();
            let got = radial_wavefunction(0, 0, alpha, r).unwrap();
            assert!((got - expect).abs() < 1e-12);
        }
        assert!(matches!(
            radial_wavefunction(0, 0, alpha, -0.1),
            Err(OrbitError::NegativeRadius)
        ));
    }

    #[test]
    fn radial_vanishes_at_origin_for_positive_l() {
        for l in 1..=4u32 {
            for nr in 0..=3u32 {
                assert_eq!(radial_wavefunction(nr, l, 1.0, 0.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn radial_orthonormality() {
        let alpha = oscillator_alpha(16);
        let policy = QuadraturePolicy::for_mass(16);
        for l in 0..=4u32 {
            for nra in 0..=3u32 {
                for nrb in nra..=3u32 {
                    let v = integrate_radial(
                        |r| {
                            radial_unchecked(nra, l, alpha, r)
                                * radial_unchecked(nrb, l, alpha, r)
                                * r
                                * r
                        },
                        &policy,
                    )
                    .unwrap();
                    let expect = if nra == nrb { 1.0 } else { 0.0 };
                    assert!(
                        (v - expect).abs() < 1e-8,
                        "<{nra},{l}|{nrb},{l}> = {v}"
                    );
                }
            }
        }
    }
}

//! Residual two-body interactions and assembly of the second-quantized
//! Hamiltonian: same-species pairing within each j-shell plus proton-proton
//! Coulomb repulsion. No proton-neutron residual term is generated.
//!
//! A two-body term is coeff * a+(cl) a+(cr) a(al) a(ar), operators applied
//! right to left, with indices into one species' orbit catalog. Pairing is
//! emitted in the attractive orientation: a single filled j=1/2 shell gains
//! exactly -G.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::constants::E2_OVER_4PI_EPS0;
use crate::math;
use crate::meanfield::{one_body_matrix, MeanFieldError, MeanFieldParams, NucleusSpec, OneBodyMatrices};
use crate::orbits::{clebsch_gordan_half, radial_unchecked, Orbit, OrbitCatalog, Species};
use crate::quad::gauss_legendre;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeciesPair {
    ProtonProton,
    NeutronNeutron,
    ProtonNeutron,
}

/// coeff * a+(create_left) a+(create_right) a(ann_left) a(ann_right);
/// `ann_right` acts on the ket first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoBodyTerm {
    pub species_pair: SpeciesPair,
    pub create_left: usize,
    pub create_right: usize,
    pub ann_left: usize,
    pub ann_right: usize,
    /// MeV.
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InteractionError {
    CatalogNotMjClosed { index: usize },
    NonProtonOrbit,
    SlaterNonConvergence { previous: f64, last: f64 },
    MeanField(MeanFieldError),
}

impl core::fmt::Display for InteractionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InteractionError::CatalogNotMjClosed { index } => {
                write!(f, "catalog is not m_j-closed: orbit {index} has no partner")
            }
            InteractionError::NonProtonOrbit => {
                write!(f, "Coulomb elements are defined for proton orbits only")
            }
            InteractionError::SlaterNonConvergence { previous, last } => write!(
                f,
                "Slater integral did not converge: last two estimates {previous} and {last}"
            ),
            InteractionError::MeanField(e) => write!(f, "{e}"),
        }
    }
}

impl From<MeanFieldError> for InteractionError {
    fn from(e: MeanFieldError) -> Self {
        InteractionError::MeanField(e)
    }
}

/// Pairing force of strength G within each (n, l, j) shell, both species.
///
/// For every shell and every ordered pair (m_j, m_j') of projections present
/// in the catalog, emits
///   (G/4) (-1)^(2j + m_j + m_j') a+(j,m_j) a+(j,-m_j) a(j,m_j') a(j,-m_j')
/// whose total expectation on a filled j=1/2 shell is -G.
pub fn pairing_terms(
    catalog: &OrbitCatalog,
    g_strength: f64,
) -> Result<Vec<TwoBodyTerm>, InteractionError> {
    let mut out = Vec::new();
    if g_strength == 0.0 {
        return Ok(out);
    }
    for (species, pair) in [
        (Species::Proton, SpeciesPair::ProtonProton),
        (Species::Neutron, SpeciesPair::NeutronNeutron),
    ] {
        out.extend(species_pairing_terms(catalog, species, pair, g_strength)?);
    }
    Ok(out)
}

fn species_pairing_terms(
    catalog: &OrbitCatalog,
    species: Species,
    pair: SpeciesPair,
    g_strength: f64,
) -> Result<Vec<TwoBodyTerm>, InteractionError> {
    let orbits = catalog.orbits(species);
    let mut partner = Vec::with_capacity(orbits.len());
    for i in 0..orbits.len() {
        match catalog.time_reversed_partner(species, i) {
            Some(p) => partner.push(p),
            None => return Err(InteractionError::CatalogNotMjClosed { index: i }),
        }
    }
    // Shell -> member indices, in catalog order.
    let mut shells: BTreeMap<(u8, u8, u8), Vec<usize>> = BTreeMap::new();
    for (i, o) in orbits.iter().enumerate() {
        shells.entry(o.shell()).or_default().push(i);
    }
    let mut out = Vec::new();
    for ((_, _, two_j), members) in shells {
        for &i in &members {
            for &j in &members {
                let mj = orbits[i].two_mj as i32;
                let mjp = orbits[j].two_mj as i32;
                // (-1)^(2j + m_j + m_j'), exponent always an integer.
                let exponent = two_j as i32 + (mj + mjp) / 2;
                let sign = if exponent.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                out.push(TwoBodyTerm {
                    species_pair: pair,
                    create_left: i,
                    create_right: partner[i],
                    ann_left: j,
                    ann_right: partner[j],
                    coefficient: sign * g_strength / 4.0,
                });
            }
        }
    }
    Ok(out)
}

/// Radial Slater integral R^k in 1/fm:
/// the double integral of Ra(r1) Rb(r2) r_<^k / r_>^(k+1) Rc(r1) Rd(r2)
/// r1^2 r2^2 dr1 dr2, labels (nr, l).
pub fn slater_integral(
    k: u32,
    a: (u32, u32),
    b: (u32, u32),
    c: (u32, u32),
    d: (u32, u32),
    alpha: f64,
) -> Result<f64, InteractionError> {
    let mut panels = 48usize;
    let mut previous = slater_pass(k, a, b, c, d, alpha, panels);
    for _ in 0..3 {
        panels *= 2;
        let last = slater_pass(k, a, b, c, d, alpha, panels);
        if (last - previous).abs() <= 1e-9 * last.abs() + 1e-12 {
            return Ok(last);
        }
        previous = last;
    }
    let last = slater_pass(k, a, b, c, d, alpha, panels * 2);
    if (last - previous).abs() <= 1e-9 * last.abs() + 1e-12 {
        Ok(last)
    } else {
        Err(InteractionError::SlaterNonConvergence { previous, last })
    }
}

/// One composite pass over a fixed panel grid. The inner integrals split at
/// r1 use panel prefix/suffix sums plus a partial panel, so the r_< / r_>
/// kink never crosses a quadrature interval.
fn slater_pass(
    k: u32,
    a: (u32, u32),
    b: (u32, u32),
    c: (u32, u32),
    d: (u32, u32),
    alpha: f64,
    panels: usize,
) -> f64 {
    let nodes = 12usize;
    let (xs, ws) = gauss_legendre(nodes);
    let r_max = 12.0 / alpha;
    let h = r_max / panels as f64;
    let f_ac = |r: f64| radial_unchecked(a.0, a.1, alpha, r) * radial_unchecked(c.0, c.1, alpha, r);
    let f_bd = |r: f64| radial_unchecked(b.0, b.1, alpha, r) * radial_unchecked(d.0, d.1, alpha, r);
    let below = |r: f64| f_bd(r) * math::powi(r, k as i32 + 2);
    let above = |r: f64| f_bd(r) * math::powi(r, 1 - k as i32);

    let seg = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += w * f(mid + half * x);
        }
        acc * half
    };

    let mut j_below = Vec::with_capacity(panels);
    let mut j_above = Vec::with_capacity(panels);
    for p in 0..panels {
        let lo = p as f64 * h;
        let hi = lo + h;
        j_below.push(seg(&below, lo, hi));
        j_above.push(seg(&above, lo, hi));
    }
    // prefix[p]: full panels strictly below p; suffix[p]: strictly above.
    let mut prefix = Vec::with_capacity(panels);
    let mut acc = 0.0;
    for p in 0..panels {
        prefix.push(acc);
        acc += j_below[p];
    }
    let mut suffix = alloc::vec![0.0; panels];
    let mut acc = 0.0;
    for p in (0..panels).rev() {
        suffix[p] = acc;
        acc += j_above[p];
    }

    let mut total = 0.0;
    for p in 0..panels {
        let lo = p as f64 * h;
        let hi = lo + h;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * h;
        for (x, w) in xs.iter().zip(ws.iter()) {
            let r1 = mid + half * x;
            let i_below = prefix[p] + seg(&below, lo, r1);
            let i_above = suffix[p] + seg(&above, r1, hi);
            let kernel =
                math::powi(r1, -(k as i32 + 1)) * i_below + math::powi(r1, k as i32) * i_above;
            total += w * half * f_ac(r1) * r1 * r1 * kernel;
        }
    }
    total
}

/// Theta part of the spherical harmonic: Y_lm = theta_lm(x) e^(i m phi) /
/// sqrt(2 pi), x = cos(theta), Condon-Shortley phase included.
fn theta_lm(l: u32, m: i32, x: f64) -> f64 {
    let am = m.unsigned_abs();
    if am > l {
        return 0.0;
    }
    let somx2 = math::sqrt((1.0 - x) * (1.0 + x));
    let mut pmm = 1.0;
    for i in 0..am {
        pmm *= -((2 * i + 1) as f64) * somx2;
    }
    let p = if l == am {
        pmm
    } else {
        let mut p_prev = pmm;
        let mut p_cur = x * (2 * am + 1) as f64 * pmm;
        for ll in (am + 2)..=l {
            let llf = ll as f64;
            let amf = am as f64;
            let p_next = ((2.0 * llf - 1.0) * x * p_cur - (llf + amf - 1.0) * p_prev) / (llf - amf);
            p_prev = p_cur;
            p_cur = p_next;
        }
        p_cur
    };
    let norm =
        math::sqrt((2 * l + 1) as f64 / 2.0 * math::factorial(l - am) / math::factorial(l + am));
    let theta_abs = norm * p;
    if m >= 0 || am % 2 == 0 {
        theta_abs
    } else {
        -theta_abs
    }
}

/// Integral of Y*_{l1 m1} Y_{l2 m2} Y_{l3 m3} over the sphere. The polar
/// part is Gauss-Legendre quadrature (exact for these polynomial
/// integrands), the azimuthal part analytic.
pub fn gaunt(l1: u32, m1: i32, l2: u32, m2: i32, l3: u32, m3: i32) -> f64 {
    if m1 != m2 + m3 {
        return 0.0;
    }
    if (l1 + l2 + l3) % 2 == 1 {
        return 0.0;
    }
    let (xs, ws) = gauss_legendre(64);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        acc += w * theta_lm(l1, m1, *x) * theta_lm(l2, m2, *x) * theta_lm(l3, m3, *x);
    }
    acc / math::sqrt(2.0 * core::f64::consts::PI)
}

/// Caches for the radial and angular pieces of Coulomb matrix elements;
/// valid for one oscillator parameter.
pub struct CoulombContext {
    alpha: f64,
    slater_cache: BTreeMap<(u32, (u32, u32), (u32, u32), (u32, u32), (u32, u32)), f64>,
    gaunt_cache: BTreeMap<(u32, i32, u32, i32, u32, i32), f64>,
}

impl CoulombContext {
    pub fn new(alpha: f64) -> Self {
        Self { alpha, slater_cache: BTreeMap::new(), gaunt_cache: BTreeMap::new() }
    }

    fn slater(
        &mut self,
        k: u32,
        a: (u32, u32),
        b: (u32, u32),
        c: (u32, u32),
        d: (u32, u32),
    ) -> Result<f64, InteractionError> {
        let key = (k, a, b, c, d);
        if let Some(v) = self.slater_cache.get(&key) {
            return Ok(*v);
        }
        let v = slater_integral(k, a, b, c, d, self.alpha)?;
        self.slater_cache.insert(key, v);
        Ok(v)
    }

    fn gaunt(&mut self, l1: u32, m1: i32, l2: u32, m2: i32, l3: u32, m3: i32) -> f64 {
        let key = (l1, m1, l2, m2, l3, m3);
        if let Some(v) = self.gaunt_cache.get(&key) {
            return *v;
        }
        let v = gaunt(l1, m1, l2, m2, l3, m3);
        self.gaunt_cache.insert(key, v);
        v
    }

    /// <a b| (1/2) e^2/(4 pi eps0) / |r1 - r2| |c d> in MeV, orbit a paired
    /// with c on particle 1 and b with d on particle 2. Includes the printed
    /// 1/2; zero unless total m_j is conserved.
    pub fn element(
        &mut self,
        a: &Orbit,
        b: &Orbit,
        c: &Orbit,
        d: &Orbit,
    ) -> Result<f64, InteractionError> {
        for o in [a, b, c, d] {
            if o.species != Species::Proton {
                return Err(InteractionError::NonProtonOrbit);
            }
        }
        if a.two_mj as i32 + b.two_mj as i32 != c.two_mj as i32 + d.two_mj as i32 {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for two_ms1 in [-1i32, 1] {
            let m_a = (a.two_mj as i32 - two_ms1) / 2;
            let m_c = (c.two_mj as i32 - two_ms1) / 2;
            let cg_a =
                clebsch_gordan_half(a.l as u32, m_a, two_ms1, a.two_j as u32, a.two_mj as i32);
            let cg_c =
                clebsch_gordan_half(c.l as u32, m_c, two_ms1, c.two_j as u32, c.two_mj as i32);
            if cg_a == 0.0 || cg_c == 0.0 {
                continue;
            }
            for two_ms2 in [-1i32, 1] {
                let m_b = (b.two_mj as i32 - two_ms2) / 2;
                let m_d = (d.two_mj as i32 - two_ms2) / 2;
                let cg_b =
                    clebsch_gordan_half(b.l as u32, m_b, two_ms2, b.two_j as u32, b.two_mj as i32);
                let cg_d =
                    clebsch_gordan_half(d.l as u32, m_d, two_ms2, d.two_j as u32, d.two_mj as i32);
                if cg_b == 0.0 || cg_d == 0.0 {
                    continue;
                }
                let q = m_c - m_a;
                if m_b - m_d != q {
                    continue;
                }
                let k_min = q.unsigned_abs();
                let k_max = (a.l as u32 + c.l as u32).min(b.l as u32 + d.l as u32);
                let mut radial_angular = 0.0;
                let mut k = k_min;
                while k <= k_max {
                    if (a.l as u32 + c.l as u32 + k) % 2 == 0
                        && (b.l as u32 + d.l as u32 + k) % 2 == 0
                    {
                        let ang1 = self.gaunt(a.l as u32, m_a, k, -q, c.l as u32, m_c);
                        let ang2 = self.gaunt(b.l as u32, m_b, k, q, d.l as u32, m_d);
                        if ang1 != 0.0 && ang2 != 0.0 {
                            let rad = self.slater(
                                k,
                                (a.nr(), a.l as u32),
                                (b.nr(), b.l as u32),
                                (c.nr(), c.l as u32),
                                (d.nr(), d.l as u32),
                            )?;
                            let sign = if q.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                            radial_angular += 4.0 * core::f64::consts::PI
                                / (2.0 * k as f64 + 1.0)
                                * sign
                                * ang1
                                * ang2
                                * rad;
                        }
                    }
                    k += 1;
                }
                total += cg_a * cg_c * cg_b * cg_d * radial_angular;
            }
        }
        Ok(0.5 * E2_OVER_4PI_EPS0 * total)
    }
}

/// Convenience wrapper building a fresh cache per call.
pub fn coulomb_element(
    a: &Orbit,
    b: &Orbit,
    c: &Orbit,
    d: &Orbit,
    alpha: f64,
) -> Result<f64, InteractionError> {
    CoulombContext::new(alpha).element(a, b, c, d)
}

/// The full second-quantized Hamiltonian of one nucleus.
#[derive(Clone, Debug)]
pub struct SecondQuantizedHamiltonian {
    pub g: OneBodyMatrices,
    pub two_body: Vec<TwoBodyTerm>,
    pub nucleus: NucleusSpec,
}

#[derive(Clone, Copy, Debug)]
pub struct AssemblyOptions {
    /// Pairing strength G in MeV.
    pub pairing_g: f64,
    pub include_coulomb: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self { pairing_g: 0.25, include_coulomb: true }
    }
}

/// Prune threshold for two-body coefficients, MeV.
const COEFF_PRUNE: f64 = 1e-12;

/// Build g from the mean field and the residual two-body list: pairing for
/// every species holding at least two particles, Coulomb for Z >= 2.
pub fn assemble_hamiltonian(
    nucleus: &NucleusSpec,
    params: &MeanFieldParams,
    options: &AssemblyOptions,
) -> Result<SecondQuantizedHamiltonian, InteractionError> {
    let g = one_body_matrix(params, nucleus)?;
    let mut two_body = Vec::new();

    if options.pairing_g != 0.0 {
        if nucleus.z >= 2 {
            two_body.extend(species_pairing_terms(
                &nucleus.catalog,
                Species::Proton,
                SpeciesPair::ProtonProton,
                options.pairing_g,
            )?);
        }
        if nucleus.n >= 2 {
            two_body.extend(species_pairing_terms(
                &nucleus.catalog,
                Species::Neutron,
                SpeciesPair::NeutronNeutron,
                options.pairing_g,
            )?);
        }
    }

    if options.include_coulomb && nucleus.z >= 2 {
        let orbits = &nucleus.catalog.proton;
        let n = orbits.len();
        let mut ctx = CoulombContext::new(nucleus.catalog.alpha);
        for a1p in 0..n {
            for a2p in 0..n {
                if a1p == a2p {
                    continue;
                }
                for a1 in 0..n {
                    for a2 in 0..n {
                        if a1 == a2 {
                            continue;
                        }
                        let h =
                            ctx.element(&orbits[a1p], &orbits[a2p], &orbits[a1], &orbits[a2])?;
                        if h.abs() < COEFF_PRUNE {
                            continue;
                        }
                        two_body.push(TwoBodyTerm {
                            species_pair: SpeciesPair::ProtonProton,
                            create_left: a1p,
                            create_right: a2p,
                            ann_left: a2,
                            ann_right: a1,
                            coefficient: h,
                        });
                    }
                }
            }
        }
    }

    Ok(SecondQuantizedHamiltonian { g, two_body, nucleus: nucleus.clone() })
}

impl SecondQuantizedHamiltonian {
    /// Hermiticity: every term's conjugate transpose is present with the
    /// same coefficient (coefficients aggregated per index quadruple).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let mut agg: BTreeMap<(u8, usize, usize, usize, usize), f64> = BTreeMap::new();
        let tag = |p: SpeciesPair| -> u8 {
            match p {
                SpeciesPair::ProtonProton => 0,
                SpeciesPair::NeutronNeutron => 1,
                SpeciesPair::ProtonNeutron => 2,
            }
        };
        for t in &self.two_body {
            *agg.entry((
                tag(t.species_pair),
                t.create_left,
                t.create_right,
                t.ann_left,
                t.ann_right,
            ))
            .or_insert(0.0) += t.coefficient;
        }
        for (&(sp, cl, cr, al, ar), &coeff) in &agg {
            let adjoint = (sp, ar, al, cr, cl);
            let other = agg.get(&adjoint).copied().unwrap_or(0.0);
            if (coeff - other).abs() > tol {
                return false;
            }
        }
        true
    }
}

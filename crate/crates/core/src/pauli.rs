//! Pauli-string algebra and the Jordan-Wigner map from second-quantized
//! operators onto the qubit register.
//!
//! Register layout: proton qubits occupy [0, N_pi), neutron qubits
//! [N_pi, N_pi + N_nu); orbit 1 of a species is that register's first qubit.
//! Jordan-Wigner Z-strings stay inside one species register, matching the
//! tensor-product structure of the Hamiltonian (proton and neutron operator
//! algebras never interleave).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::interactions::{SecondQuantizedHamiltonian, SpeciesPair};
use crate::orbits::Species;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum PauliLetter {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliLetter {
    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

/// Single-qubit product a*b = phase * letter.
fn mul_letter(a: PauliLetter, b: PauliLetter) -> (PauliLetter, Complex64) {
    use PauliLetter::*;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match (a, b) {
        (I, x) => (x, one),
        (x, I) => (x, one),
        (X, X) | (Y, Y) | (Z, Z) => (I, one),
        (X, Y) => (Z, i),
        (Y, X) => (Z, -i),
        (Y, Z) => (X, i),
        (Z, Y) => (X, -i),
        (Z, X) => (Y, i),
        (X, Z) => (Y, -i),
    }
}

/// One weighted Pauli string.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub letters: Vec<PauliLetter>,
}

impl PauliTerm {
    pub fn identity(n_qubits: usize, coefficient: Complex64) -> Self {
        Self { coefficient, letters: alloc::vec![PauliLetter::I; n_qubits] }
    }

    /// Operator product self * other (other applied first to kets).
    pub fn mul(&self, other: &PauliTerm) -> PauliTerm {
        debug_assert_eq!(self.letters.len(), other.letters.len());
        let mut letters = Vec::with_capacity(self.letters.len());
        let mut phase = Complex64::new(1.0, 0.0);
        for (&a, &b) in self.letters.iter().zip(other.letters.iter()) {
            let (l, p) = mul_letter(a, b);
            letters.push(l);
            phase *= p;
        }
        PauliTerm { coefficient: self.coefficient * other.coefficient * phase, letters }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    /// Bitmask action: P|bits> = phase * |bits ^ flips>. Returns
    /// (flips, yz_mask, i^y_count); the basis-dependent sign is
    /// (-1)^popcount(bits & yz_mask).
    pub fn compile(&self) -> CompiledTerm {
        let mut flips = 0u64;
        let mut yz = 0u64;
        let mut y_count = 0u32;
        for (q, &l) in self.letters.iter().enumerate() {
            match l {
                PauliLetter::I => {}
                PauliLetter::X => flips |= 1 << q,
                PauliLetter::Y => {
                    flips |= 1 << q;
                    yz |= 1 << q;
                    y_count += 1;
                }
                PauliLetter::Z => yz |= 1 << q,
            }
        }
        let i_pow = match y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        CompiledTerm { coefficient: self.coefficient, flips, yz_mask: yz, i_pow }
    }
}

/// Bit-level form of a Pauli string for fast statevector passes.
#[derive(Clone, Copy, Debug)]
pub struct CompiledTerm {
    pub coefficient: Complex64,
    pub flips: u64,
    pub yz_mask: u64,
    pub i_pow: Complex64,
}

impl CompiledTerm {
    /// Phase (excluding the coefficient) picked up on basis state `bits`.
    #[inline]
    pub fn phase(&self, bits: u64) -> Complex64 {
        if (bits & self.yz_mask).count_ones() % 2 == 0 {
            self.i_pow
        } else {
            -self.i_pow
        }
    }

    #[inline]
    pub fn target(&self, bits: u64) -> u64 {
        bits ^ self.flips
    }
}

/// Proton/neutron register sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitLayout {
    pub protons: usize,
    pub neutrons: usize,
}

impl QubitLayout {
    pub fn single(n: usize) -> Self {
        Self { protons: n, neutrons: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.protons + self.neutrons
    }

    pub fn qubit(&self, species: Species, orbit_index: usize) -> usize {
        match species {
            Species::Proton => orbit_index,
            Species::Neutron => self.protons + orbit_index,
        }
    }

    /// First qubit of the species register containing `qubit`.
    pub fn species_start(&self, qubit: usize) -> usize {
        if qubit < self.protons {
            0
        } else {
            self.protons
        }
    }
}

/// Weighted sum of Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    pub terms: Vec<PauliTerm>,
    pub n_qubits: usize,
    pub layout: Option<QubitLayout>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PauliError {
    NonHermitian { imag_norm: f64 },
    ParseError { line: usize, message: String },
}

impl core::fmt::Display for PauliError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PauliError::NonHermitian { imag_norm } => {
                write!(f, "Pauli sum is not hermitian (imaginary 1-norm {imag_norm:e})")
            }
            PauliError::ParseError { line, message } => {
                write!(f, "Pauli text parse error at line {line}: {message}")
            }
        }
    }
}

/// Coefficients below this magnitude (MeV) are dropped after simplify.
pub const PRUNE_TOL: f64 = 1e-12;

impl PauliSum {
    pub fn empty(n_qubits: usize) -> Self {
        Self { terms: Vec::new(), n_qubits, layout: None }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Sum of |coefficients|; an upper bound on the operator norm.
    pub fn coefficient_one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.norm()).sum()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.is_identity())
            .map(|t| t.coefficient)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm { coefficient: t.coefficient * factor, letters: t.letters.clone() })
            .collect();
        PauliSum { terms, n_qubits: self.n_qubits, layout: self.layout }
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PauliSum { terms, n_qubits: self.n_qubits, layout: self.layout.or(other.layout) }
    }

    /// Operator product (no simplification).
    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        PauliSum { terms, n_qubits: self.n_qubits, layout: self.layout.or(other.layout) }
    }

    /// True when every coefficient is real within `tol` (after simplify).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coefficient.im.abs() <= tol)
    }

    /// Drop imaginary residue, enforcing hermiticity within `tol`.
    pub fn hermitize(mut self, tol: f64) -> Result<PauliSum, PauliError> {
        let imag_norm: f64 = self.terms.iter().map(|t| t.coefficient.im.abs()).sum();
        if self.terms.iter().any(|t| t.coefficient.im.abs() > tol) {
            return Err(PauliError::NonHermitian { imag_norm });
        }
        for t in self.terms.iter_mut() {
            t.coefficient.im = 0.0;
        }
        Ok(self)
    }

    /// One term per line: "<coefficient> <letters>", qubit 0 leftmost.
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for t in &self.terms {
            let _ = write!(out, "{}", t.coefficient.re);
            if t.coefficient.im != 0.0 {
                let _ = write!(out, "{:+}i", t.coefficient.im);
            }
            out.push(' ');
            for &l in &t.letters {
                out.push(l.to_char());
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text format produced by [`to_text`] (real coefficients).
    pub fn from_text(text: &str) -> Result<PauliSum, PauliError> {
        let mut terms = Vec::new();
        let mut n_qubits = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let coeff_str = parts.next().ok_or_else(|| PauliError::ParseError {
                line: idx + 1,
                message: String::from("missing coefficient"),
            })?;
            let letters_str = parts.next().ok_or_else(|| PauliError::ParseError {
                line: idx + 1,
                message: String::from("missing letter string"),
            })?;
            if parts.next().is_some() {
                return Err(PauliError::ParseError {
                    line: idx + 1,
                    message: String::from("trailing tokens"),
                });
            }
            let coeff: f64 = coeff_str.parse().map_err(|_| PauliError::ParseError {
                line: idx + 1,
                message: String::from("bad coefficient"),
            })?;
            let mut letters = Vec::with_capacity(letters_str.len());
            for c in letters_str.chars() {
                letters.push(PauliLetter::from_char(c).ok_or_else(|| PauliError::ParseError {
                    line: idx + 1,
                    message: String::from("bad Pauli letter"),
                })?);
            }
            match n_qubits {
                None => n_qubits = Some(letters.len()),
                Some(n) if n == letters.len() => {}
                Some(n) => {
                    return Err(PauliError::ParseError {
                        line: idx + 1,
                        message: alloc::format!("expected {n} letters, found {}", letters.len()),
                    })
                }
            }
            terms.push(PauliTerm { coefficient: Complex64::new(coeff, 0.0), letters });
        }
        let n_qubits = n_qubits.unwrap_or(0);
        Ok(PauliSum { terms, n_qubits, layout: None })
    }

    /// Dense matrix (row-major, dimension 2^n); for cross-checks on small n.
    pub fn to_dense(&self) -> Vec<Complex64> {
        assert!(self.n_qubits <= 12, "dense expansion limited to 12 qubits");
        let dim = 1usize << self.n_qubits;
        let mut m = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
        for t in &self.terms {
            let c = t.compile();
            for col in 0..dim {
                let row = c.target(col as u64) as usize;
                m[row * dim + col] += c.coefficient * c.phase(col as u64);
            }
        }
        m
    }
}

/// Merge like terms, drop those below `tol`, order letters lexicographically
/// (identity first).
pub fn simplify(p: &PauliSum, tol: f64) -> PauliSum {
    let mut merged: BTreeMap<Vec<PauliLetter>, Complex64> = BTreeMap::new();
    for t in &p.terms {
        let entry = merged.entry(t.letters.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += t.coefficient;
    }
    let terms: Vec<PauliTerm> = merged
        .into_iter()
        .filter(|(_, c)| c.norm() >= tol)
        .map(|(letters, coefficient)| PauliTerm { coefficient, letters })
        .collect();
    PauliSum { terms, n_qubits: p.n_qubits, layout: p.layout }
}

/// Jordan-Wigner image of a ladder operator at `qubit`: two Pauli strings
/// with a Z-chain over the same-species positions below it.
///
/// a+ -> (1/2)(X - iY) with Z's; a -> (1/2)(X + iY) with Z's.
pub fn jw_ladder(qubit: usize, dagger: bool, layout: QubitLayout) -> PauliSum {
    let n = layout.n_qubits();
    assert!(qubit < n);
    let start = layout.species_start(qubit);
    let mut x_letters = alloc::vec![PauliLetter::I; n];
    let mut y_letters = alloc::vec![PauliLetter::I; n];
    for q in start..qubit {
        x_letters[q] = PauliLetter::Z;
        y_letters[q] = PauliLetter::Z;
    }
    x_letters[qubit] = PauliLetter::X;
    y_letters[qubit] = PauliLetter::Y;
    let y_coeff = if dagger { Complex64::new(0.0, -0.5) } else { Complex64::new(0.0, 0.5) };
    PauliSum {
        terms: alloc::vec![
            PauliTerm { coefficient: Complex64::new(0.5, 0.0), letters: x_letters },
            PauliTerm { coefficient: y_coeff, letters: y_letters },
        ],
        n_qubits: n,
        layout: Some(layout),
    }
}

/// Map a second-quantized Hamiltonian onto the qubit register. The result is
/// simplified, pruned at [`PRUNE_TOL`], and hermitian.
pub fn map_to_qubits(sq: &SecondQuantizedHamiltonian) -> Result<PauliSum, PauliError> {
    let layout = QubitLayout {
        protons: sq.nucleus.catalog.proton.len(),
        neutrons: sq.nucleus.catalog.neutron.len(),
    };
    let n = layout.n_qubits();
    let mut acc: BTreeMap<Vec<PauliLetter>, Complex64> = BTreeMap::new();
    let mut absorb = |sum: PauliSum| {
        for t in sum.terms {
            let e = acc.entry(t.letters).or_insert(Complex64::new(0.0, 0.0));
            *e += t.coefficient;
        }
    };

    for species in [Species::Proton, Species::Neutron] {
        let g = sq.g.matrix(species);
        for i in 0..g.rows {
            for j in 0..g.cols {
                let coeff = g.get(i, j);
                if coeff == 0.0 {
                    continue;
                }
                let cre = jw_ladder(layout.qubit(species, i), true, layout);
                let ann = jw_ladder(layout.qubit(species, j), false, layout);
                absorb(cre.mul(&ann).scale(Complex64::new(coeff, 0.0)));
            }
        }
    }

    for term in &sq.two_body {
        let species = match term.species_pair {
            SpeciesPair::ProtonProton => Species::Proton,
            SpeciesPair::NeutronNeutron => Species::Neutron,
            SpeciesPair::ProtonNeutron => {
                // Not generated by the assembler; the mixed case would need
                // per-operator species tags.
                unreachable!("proton-neutron residual terms are not produced")
            }
        };
        let cl = jw_ladder(layout.qubit(species, term.create_left), true, layout);
        let cr = jw_ladder(layout.qubit(species, term.create_right), true, layout);
        let al = jw_ladder(layout.qubit(species, term.ann_left), false, layout);
        let ar = jw_ladder(layout.qubit(species, term.ann_right), false, layout);
        let product = cl.mul(&cr).mul(&al).mul(&ar);
        absorb(product.scale(Complex64::new(term.coefficient, 0.0)));
    }

    let terms: Vec<PauliTerm> = acc
        .into_iter()
        .filter(|(_, c)| c.norm() >= PRUNE_TOL)
        .map(|(letters, coefficient)| PauliTerm { coefficient, letters })
        .collect();
    PauliSum { terms, n_qubits: n, layout: Some(layout) }.hermitize(1e-10)
}

/// T = I - 2 gamma H, identity coefficient merged.
pub fn build_iteration_operator(h: &PauliSum, gamma: f64) -> PauliSum {
    let scaled = h.scale(Complex64::new(-2.0 * gamma, 0.0));
    let identity = PauliSum {
        terms: alloc::vec![PauliTerm::identity(h.n_qubits, Complex64::new(1.0, 0.0))],
        n_qubits: h.n_qubits,
        layout: h.layout,
    };
    simplify(&identity.add(&scaled), PRUNE_TOL)
}

/// Number operator of one species register: sum of (I - Z_k)/2.
pub fn number_operator(layout: QubitLayout, species: Species) -> PauliSum {
    let n = layout.n_qubits();
    let (start, len) = match species {
        Species::Proton => (0, layout.protons),
        Species::Neutron => (layout.protons, layout.neutrons),
    };
    let mut terms = Vec::with_capacity(len + 1);
    terms.push(PauliTerm::identity(n, Complex64::new(len as f64 / 2.0, 0.0)));
    for q in start..start + len {
        let mut letters = alloc::vec![PauliLetter::I; n];
        letters[q] = PauliLetter::Z;
        terms.push(PauliTerm { coefficient: Complex64::new(-0.5, 0.0), letters });
    }
    PauliSum { terms, n_qubits: n, layout: Some(layout) }
}

/// [a, b] = ab - ba, simplified (exact cancellations removed).
pub fn commutator(a: &PauliSum, b: &PauliSum) -> PauliSum {
    let ab = a.mul(b);
    let ba = b.mul(a).scale(Complex64::new(-1.0, 0.0));
    simplify(&ab.add(&ba), 1e-14)
}

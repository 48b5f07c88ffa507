//! State data model: pure states, density matrices, partial traces, named
//! constructors and seeded Haar sampling.
//!
//! Basis convention: for subsystem dimensions `d_1, …, d_n` the computational
//! basis index is the mixed-radix number with subsystem `A_1` as the most
//! significant digit, so `|b_1 b_2 b_3⟩` of three qubits sits at
//! `4·b_1 + 2·b_2 + b_3`. Subsystem indices in this API are 0-based; text
//! forms (partitions, CLI) are 1-based.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::spectral::{self, ComplexMatrix};

pub const NORM_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const MAX_QUBITS: usize = 6;

/// Normalized amplitude vector over a tensor product of finite-dimensional subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotNormalized(f64::NAN));
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self { dims, amplitudes })
    }

    /// Computational basis state `index` of an `n`-qubit register.
    pub fn qubit_basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS || index >= 1 << n {
            return Err(Error::BadArity(format!("basis state {index} of {n} qubits")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            dims: vec![2; n],
            amplitudes,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState { dims, amplitudes }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: ComplexMatrix::outer(&self.amplitudes),
        }
    }

    /// Amplitudes reshaped as a `d_keep × d_rest` matrix (row-major), rows
    /// indexed by the kept subsystems in the given order.
    pub fn bipartite_matrix(&self, keep: &[usize]) -> Result<(usize, usize, Vec<Complex64>)> {
        let layout = SplitLayout::new(&self.dims, keep)?;
        let mut m = Vec::with_capacity(layout.keep_offsets.len() * layout.rest_offsets.len());
        for &a in &layout.keep_offsets {
            for &t in &layout.rest_offsets {
                m.push(self.amplitudes[a + t]);
            }
        }
        Ok((layout.keep_offsets.len(), layout.rest_offsets.len(), m))
    }

    /// Reduced density matrix on `keep`, computed as `M M†` from the reshaped amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (dk, dr, m) = self.bipartite_matrix(keep)?;
        let matrix = ComplexMatrix::from_fn(dk, |i, j| {
            let (ri, rj) = (&m[i * dr..(i + 1) * dr], &m[j * dr..(j + 1) * dr]);
            ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum()
        });
        Ok(DensityMatrix {
            dims: keep.iter().map(|&k| self.dims[k]).collect(),
            matrix,
        })
    }
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::BadDims(format!("{dims:?}: every subsystem needs dimension >= 2")));
    }
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::BadDims(format!("{dims:?} overflows")))?;
    if total != len {
        return Err(Error::BadDims(format!(
            "dims {dims:?} need {total} amplitudes, got {len}"
        )));
    }
    Ok(())
}

/// Offsets of the kept and traced digits into the full basis index.
struct SplitLayout {
    keep_offsets: Vec<usize>,
    rest_offsets: Vec<usize>,
}

impl SplitLayout {
    fn new(dims: &[usize], keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::BadIndex("keep set is empty".into()));
        }
        let n = dims.len();
        let mut seen = vec![false; n];
        for &k in keep {
            if k >= n {
                return Err(Error::BadIndex(format!("subsystem {} of {n}", k + 1)));
            }
            if seen[k] {
                return Err(Error::BadIndex(format!("subsystem {} repeated", k + 1)));
            }
            seen[k] = true;
        }
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let rest: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
        Ok(Self {
            keep_offsets: offsets(dims, &strides, keep),
            rest_offsets: offsets(dims, &strides, &rest),
        })
    }
}

/// Full-index contributions of every multi-index over `sites`, first site most significant.
fn offsets(dims: &[usize], strides: &[usize], sites: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &s in sites {
        out = out
            .iter()
            .flat_map(|&base| (0..dims[s]).map(move |digit| base + digit * strides[s]))
            .collect();
    }
    out
}

/// Hermitian, PSD, unit-trace matrix with subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        check_dims(&dims, matrix.dim())?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidMatrix(format!("trace {trace} is not 1")));
        }
        // eig_psd checks Hermiticity and the eigenvalue floor
        spectral::eig_psd(&matrix)?;
        Ok(Self { dims, matrix })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == [2, 2]
    }

    /// Clamped eigenvalues, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        spectral::psd_spectrum(&self.matrix)
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            dims,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Mixture `p·self + (1 − p)·other` of two states with equal dims.
    pub fn mix(&self, p: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::BadDims(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(crate::error::domain(format!("mixing weight {p} outside [0, 1]")));
        }
        let matrix = self
            .matrix
            .scale(Complex64::new(p, 0.0))
            .add(&other.matrix.scale(Complex64::new(1.0 - p, 0.0)));
        Ok(DensityMatrix {
            dims: self.dims.clone(),
            matrix,
        })
    }

    /// Maximally mixed state on `dims`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<DensityMatrix> {
        let total: usize = dims.iter().product();
        check_dims(&dims, total)?;
        Ok(DensityMatrix {
            dims,
            matrix: ComplexMatrix::from_real_diagonal(&vec![1.0 / total as f64; total]),
        })
    }

    /// Reduced state on the subsystems in `keep` (0-based, in the given order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = SplitLayout::new(&self.dims, keep)?;
        let dk = layout.keep_offsets.len();
        let matrix = ComplexMatrix::from_fn(dk, |i, j| {
            let (a, b) = (layout.keep_offsets[i], layout.keep_offsets[j]);
            layout
                .rest_offsets
                .iter()
                .map(|&t| self.matrix.get(a + t, b + t))
                .sum()
        });
        Ok(DensityMatrix {
            dims: keep.iter().map(|&k| self.dims[k]).collect(),
            matrix,
        })
    }
}

/// Ordered split of subsystem indices (0-based) into a left and right block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::BadPartition("both blocks must be nonempty".into()));
        }
        let mut all: Vec<usize> = left.iter().chain(&right).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadPartition("blocks overlap or repeat an index".into()));
        }
        Ok(Self { left, right })
    }

    /// `{0..m} | {m..n}`.
    pub fn split_at(m: usize, n: usize) -> Result<Self> {
        Self::new((0..m).collect(), (m..n).collect())
    }

    /// Parses 1-based text like `1|2,3`.
    pub fn parse(text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once('|')
            .ok_or_else(|| Error::BadPartition(format!("'{text}' has no '|'")))?;
        let block = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|t| {
                    let i: usize = t
                        .trim()
                        .parse()
                        .map_err(|_| Error::BadPartition(format!("bad index '{t}' in '{text}'")))?;
                    i.checked_sub(1)
                        .ok_or_else(|| Error::BadPartition("indices are 1-based".into()))
                })
                .collect()
        };
        Self::new(block(l)?, block(r)?)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// True when the blocks together are exactly `{0..n}`.
    pub fn covers(&self, n: usize) -> bool {
        self.left.len() + self.right.len() == n && self.left.iter().chain(&self.right).all(|&i| i < n)
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.left.iter().chain(&self.right).find(|&&i| i >= n) {
            Some(i) => Err(Error::BadPartition(format!("subsystem {} of {n}", i + 1))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.left), join(&self.right))
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `λ0|000⟩ + λ1 e^{iθ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`.
pub fn schmidt_state(lambda: [f64; 5], theta: f64) -> Result<PureState> {
    if lambda.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(crate::error::domain("Schmidt coefficients must be finite and >= 0"));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(crate::error::domain(format!("θ = {theta} outside [0, π]")));
    }
    let norm2: f64 = lambda.iter().map(|l| l * l).sum();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm2));
    }
    let mut amp = vec![real(0.0); 8];
    amp[0b000] = real(lambda[0]);
    amp[0b100] = Complex64::from_polar(lambda[1], theta);
    amp[0b101] = real(lambda[2]);
    amp[0b110] = real(lambda[3]);
    amp[0b111] = real(lambda[4]);
    // the input is only normalized to 1e-10; rescale so the state invariant holds
    PureState::normalized(vec![2, 2, 2], amp)
}

fn check_register(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_QUBITS {
        return Err(Error::BadArity(format!(
            "{n} qubits (supported {min}..={MAX_QUBITS})"
        )));
    }
    Ok(())
}

/// `(|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n`.
pub fn w_state(n: usize) -> Result<PureState> {
    check_register(n, 2)?;
    let a = real(1.0 / (n as f64).sqrt());
    let mut amp = vec![real(0.0); 1 << n];
    for i in 0..n {
        amp[1 << i] = a;
    }
    PureState::new(vec![2; n], amp)
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<PureState> {
    check_register(n, 2)?;
    let a = real(std::f64::consts::FRAC_1_SQRT_2);
    let mut amp = vec![real(0.0); 1 << n];
    amp[0] = a;
    amp[(1 << n) - 1] = a;
    PureState::new(vec![2; n], amp)
}

/// Deterministic generator behind every seeded quantity in the crate.
///
/// ChaCha8 keyed by `seed` through `seed_from_u64`; `stream` selects an
/// independent substream of the same key. Haar states use stream 0 and audit
/// parameter draws use stream 1, so a trial seed `base + i` fully determines a
/// trial regardless of scheduling.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-random pure state: i.i.d. standard complex Gaussians, normalized.
pub fn haar_random_pure(n_qubits: usize, seed: u64) -> Result<PureState> {
    check_register(n_qubits, 1)?;
    let mut rng = seeded_rng(seed, 0);
    let amp: Vec<Complex64> = (0..1usize << n_qubits)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    PureState::normalized(vec![2; n_qubits], amp)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
}

/// Parses `{"dims":[...],"amplitudes":[[re,im],...]}`.
pub fn state_from_json(text: &str) -> Result<PureState> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))?;
    let amplitudes = file
        .amplitudes
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    PureState::new(file.dims, amplitudes)
}

/// Serializes with 17 significant digits per component.
pub fn state_to_json(state: &PureState) -> String {
    let dims = state
        .dims
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let amps = state
        .amplitudes
        .iter()
        .map(|z| format!("[{:.16e},{:.16e}]", z.re, z.im))
        .collect::<Vec<_>>()
        .join(",");
    format!("{{\"dims\":[{dims}],\"amplitudes\":[{amps}]}}")
}

pub fn read_state_file(path: &Path) -> Result<PureState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))?;
    state_from_json(&text)
}

pub fn write_state_file(path: &Path, state: &PureState) -> Result<()> {
    std::fs::write(path, state_to_json(state) + "\n")
        .map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))
}

//! Pauli algebra, the Knill–Laflamme check, and the general recovery of a
//! permutation-invariant code from weight-limited errors.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::schur::{schur_basis, symmetrize_channel};
use super::young::StandardTableau;
use super::{check_size, inner, outer, DenseOp, DenseState};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Tensor product of single-qubit Paulis on distinct qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct PauliString {
    pub ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, p: Pauli) -> Self {
        Self { ops: vec![(qubit, p)] }
    }

    pub fn weight(&self) -> usize {
        self.ops.len()
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "I");
        }
        for (q, p) in &self.ops {
            write!(f, "{p:?}{}", q + 1)?;
        }
        Ok(())
    }
}

/// `P v` on an `n`-qubit register.
pub fn apply_pauli(p: &PauliString, v: &[Complex64]) -> Vec<Complex64> {
    let flip = p.ops.iter().filter(|(_, o)| *o != Pauli::Z).fold(0usize, |m, (q, _)| m | (1 << q));
    let mut out = vec![Complex64::default(); v.len()];
    for (x, a) in v.iter().enumerate() {
        let mut phase = Complex64::from(1.0);
        for &(q, o) in &p.ops {
            let one = (x >> q) & 1 == 1;
            phase *= match (o, one) {
                (Pauli::X, _) => Complex64::from(1.0),
                (Pauli::Z, false) => Complex64::from(1.0),
                (Pauli::Z, true) => Complex64::from(-1.0),
                (Pauli::Y, false) => Complex64::new(0.0, 1.0),
                (Pauli::Y, true) => Complex64::new(0.0, -1.0),
            };
        }
        out[x ^ flip] += phase * a;
    }
    out
}

/// Every Pauli string of weight at most `w` on `n` qubits, identity first.
pub fn paulis_up_to_weight(n: usize, w: usize) -> Vec<PauliString> {
    let mut out = vec![PauliString::identity()];
    let mut frontier = vec![PauliString::identity()];
    for _ in 0..w {
        let mut next = Vec::new();
        for p in &frontier {
            let start = p.ops.last().map_or(0, |(q, _)| q + 1);
            for q in start..n {
                for o in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let mut s = p.clone();
                    s.ops.push((q, o));
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Outcome of a Knill–Laflamme check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KlReport {
    /// Largest of `|⟨i|E|j⟩|` for `i ≠ j` and `|⟨i|E|i⟩ − ⟨0|E|0⟩|`.
    pub max_violation: f64,
    pub worst: PauliString,
    pub checked: usize,
}

/// Checks `Π E Π ∝ Π` for every Pauli `E` of weight `≤ 2t`, which covers all
/// products of two errors of weight `≤ t`.
pub fn kl_check(code: &[DenseState], t: usize) -> Result<KlReport> {
    let n = code.first().ok_or_else(|| invalid("empty code"))?.n_qubits();
    if code.iter().any(|c| c.n_qubits() != n) {
        return Err(invalid("codewords act on different registers"));
    }
    let paulis = paulis_up_to_weight(n, (2 * t).min(n));
    let mut report = KlReport { max_violation: 0.0, worst: PauliString::identity(), checked: paulis.len() };
    for p in &paulis {
        let images: Vec<Vec<Complex64>> = code.iter().map(|c| apply_pauli(p, c.amps())).collect();
        let reference = inner(code[0].amps(), &images[0]);
        for (i, ci) in code.iter().enumerate() {
            for (j, img) in images.iter().enumerate() {
                let g = inner(ci.amps(), img);
                let v = if i == j { (g - reference).norm() } else { g.norm() };
                if v > report.max_violation {
                    report.max_violation = v;
                    report.worst = p.clone();
                }
            }
        }
    }
    Ok(report)
}

/// Kraus operator written as a combination of Pauli strings.
pub type KrausOp = Vec<(Complex64, PauliString)>;

pub fn apply_kraus(k: &KrausOp, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); v.len()];
    for (c, p) in k {
        out.iter_mut().zip(apply_pauli(p, v)).for_each(|(o, a)| *o += c * a);
    }
    out
}

/// Recovery data of one tableau block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub tableau: StandardTableau,
    /// Number `r_T` of correctable subspaces found in the block.
    pub rank: usize,
    /// `r_T ≤ (2j_T + 1)/M`.
    pub rank_ok: bool,
    /// Codeword weight that fits into the block's range of `Ĵ^z`
    /// (1 means the block's T-code is normalizable).
    pub tcode_norm: f64,
}

/// End-to-end result of error, optional symmetrization and recovery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QecReport {
    /// Entanglement fidelity `(1/M²) Σ_{ij} ⟨i|R(E(|i⟩⟨j|))|j⟩`.
    pub fidelity: f64,
    /// Mean trace of the error channel output, 1 for a channel.
    pub channel_trace: f64,
    /// Whether Gram–Schmidt found the same rank and overlaps for every
    /// logical input, as the Knill–Laflamme conditions require.
    pub kl_consistent: bool,
    pub blocks: Vec<BlockReport>,
}

/// Gram–Schmidt on `vecs`, dropping dependent inputs. Returns the
/// orthonormal vectors and the indices of the inputs that were kept.
fn gram_schmidt(vecs: &[Vec<Complex64>], tol: f64) -> (Vec<Vec<Complex64>>, Vec<usize>) {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut kept = Vec::new();
    for (idx, v) in vecs.iter().enumerate() {
        let mut w = v.clone();
        for b in &basis {
            let c = inner(b, &w);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nrm = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm > tol {
            w.iter_mut().for_each(|x| *x /= nrm);
            basis.push(w);
            kept.push(idx);
        }
    }
    (basis, kept)
}

/// General recovery on the full register.
///
/// After the Kraus errors (and optionally the permutation average) the
/// nested `Ĵ²` measurement selects a tableau `T`. Within its block the
/// images of the logical words are orthonormalized per logical index; each
/// resulting family spans a correctable subspace, which is measured and
/// mapped back to the code.
///
/// Without symmetrization the block images are `Π^T K_i |j_L⟩`. With it the
/// effective Kraus set is `{P_σ K_i}`, whose block images span the partial
/// contractions `⟨T', m| K_i |j_L⟩` over all tableaux `T'` of the same shape.
pub fn general_qec_small_n(code: &[DenseState], kraus: &[KrausOp], symmetrize: bool) -> Result<QecReport> {
    let n = code.first().ok_or_else(|| invalid("empty code"))?.n_qubits();
    check_size(n, 10)?;
    let m_log = code.len();
    let basis = schur_basis(n)?;
    let u = basis.matrix();
    let dim = 1usize << n;

    // Block offsets inside the Schur-ordered columns.
    let mut offsets = Vec::with_capacity(basis.blocks.len());
    let mut off = 0;
    for b in &basis.blocks {
        offsets.push(off);
        off += b.vectors.len();
    }

    // Schur coefficients of every K_i |j_L⟩, indexed [kraus][logical].
    let images: Vec<Vec<Vec<Complex64>>> =
        kraus.iter().map(|k| code.iter().map(|c| apply_kraus(k, c.amps())).collect()).collect();
    let coeffs: Vec<Vec<Vec<Vec<Complex64>>>> =
        images.iter().map(|per_j| per_j.iter().map(|v| basis.coefficients(v)).collect()).collect();

    // Key vectors (block coordinates) for each block and logical index.
    let mut shapes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    #[allow(clippy::needless_range_loop)]
    for (bi, b) in basis.blocks.iter().enumerate() {
        shapes.entry(b.tableau.j_doubled()).or_default().push(bi);
    }
    let mut kl_consistent = true;
    let mut block_vectors: Vec<Vec<Vec<Vec<Complex64>>>> = Vec::with_capacity(basis.blocks.len());
    let mut reports = Vec::with_capacity(basis.blocks.len());
    #[allow(clippy::needless_range_loop)]
    for (bi, b) in basis.blocks.iter().enumerate() {
        let sources: Vec<usize> = if symmetrize { shapes[&b.tableau.j_doubled()].clone() } else { vec![bi] };
        let mut per_logical = Vec::with_capacity(m_log);
        let mut patterns = Vec::with_capacity(m_log);
        for j in 0..m_log {
            let keys: Vec<Vec<Complex64>> = (0..kraus.len())
                .flat_map(|i| sources.iter().map(move |&s| (i, s)))
                .map(|(i, s)| coeffs[i][j][s].clone())
                .collect();
            let (vecs, kept) = gram_schmidt(&keys, 1e-9);
            per_logical.push(vecs);
            patterns.push(kept);
        }
        if patterns.iter().any(|p| *p != patterns[0]) {
            kl_consistent = false;
        }
        let rank = per_logical.iter().map(Vec::len).min().unwrap_or(0);
        let (lo, hi) = ((n - b.tableau.j_doubled()) / 2, (n + b.tableau.j_doubled()) / 2);
        let tcode_norm = code
            .iter()
            .map(|c| {
                c.amps()
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| (lo..=hi).contains(&(x.count_ones() as usize)))
                    .map(|(_, a)| a.norm_sqr())
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        reports.push(BlockReport {
            tableau: b.tableau.clone(),
            rank,
            rank_ok: rank * m_log <= b.vectors.len(),
            tcode_norm,
        });
        block_vectors.push(per_logical);
    }
    // Cross-logical orthogonality inside each block.
    for per_logical in &block_vectors {
        for a in 0..m_log {
            for c in a + 1..m_log {
                for va in &per_logical[a] {
                    for vc in &per_logical[c] {
                        if inner(va, vc).norm() > 1e-8 {
                            kl_consistent = false;
                        }
                    }
                }
            }
        }
    }

    // Channel outputs on |i⟩⟨j| in the Schur basis.
    let ut = u.adjoint();
    let mut fidelity = 0.0;
    let mut channel_trace = 0.0;
    for i in 0..m_log {
        for j in 0..m_log {
            let mut rho = DenseOp::zeros(dim, dim);
            for per_j in &images {
                rho += outer(&per_j[i], &per_j[j]);
            }
            if symmetrize {
                rho = symmetrize_channel(&rho, n)?;
            }
            if i == j {
                channel_trace += rho.trace().re / m_log as f64;
            }
            let s = &ut * rho * &u;
            for (bi, per_logical) in block_vectors.iter().enumerate() {
                let o = offsets[bi];
                let vi = &per_logical[i];
                let vj = &per_logical[j];
                for (a, b) in vi.iter().zip(vj) {
                    let mut acc = Complex64::default();
                    for (r, ar) in a.iter().enumerate() {
                        let row: Complex64 = b.iter().enumerate().map(|(c, bc)| s[(o + r, o + c)] * bc).sum();
                        acc += ar.conj() * row;
                    }
                    fidelity += acc.re;
                }
            }
        }
    }
    Ok(QecReport { fidelity: fidelity / (m_log * m_log) as f64, channel_trace, kl_consistent, blocks: reports })
}

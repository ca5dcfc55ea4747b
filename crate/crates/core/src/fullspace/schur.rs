//! Total angular momentum on nested qubit prefixes, the sequentially coupled
//! basis, and the qubit-permutation average.

use num_complex::Complex64;
use rand::Rng;

use super::young::StandardTableau;
use super::{check_size, inner, DenseOp, DenseState};
use crate::error::{invalid, Result};

/// Cap for helpers that build `2^N × 2^N` matrices.
const DENSE_OP_CAP: usize = 10;

fn swap_bits(x: usize, a: usize, b: usize) -> usize {
    if ((x >> a) ^ (x >> b)) & 1 == 1 {
        x ^ (1 << a) ^ (1 << b)
    } else {
        x
    }
}

/// `λ = j(j + 1)` from the doubled `2j`.
fn casimir(j_doubled: usize) -> f64 {
    let j = j_doubled as f64 / 2.0;
    j * (j + 1.0)
}

/// `Ĵ²` of qubits `0..k`, applied to `v`: `3k/4 + Σ_{a<b<k} (SWAP_ab − ½)`.
pub fn j2_apply(n: usize, k: usize, v: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(v.len(), 1 << n);
    let pairs = (k * k.saturating_sub(1) / 2) as f64;
    let diag = 0.75 * k as f64 - 0.5 * pairs;
    let mut out: Vec<Complex64> = v.iter().map(|a| a * diag).collect();
    for a in 0..k {
        for b in a + 1..k {
            for (x, o) in out.iter_mut().enumerate() {
                *o += v[swap_bits(x, a, b)];
            }
        }
    }
    out
}

/// Dense `Ĵ²` of the first `k` qubits.
pub fn j2_prefix_matrix(n: usize, k: usize) -> Result<DenseOp> {
    check_size(n, DENSE_OP_CAP)?;
    let dim = 1 << n;
    let mut m = DenseOp::zeros(dim, dim);
    let mut e = vec![Complex64::default(); dim];
    for col in 0..dim {
        e[col] = Complex64::from(1.0);
        for (row, val) in j2_apply(n, k, &e).into_iter().enumerate() {
            m[(row, col)] = val;
        }
        e[col] = Complex64::default();
    }
    Ok(m)
}

/// Spectral projector of `Ĵ²_{[k]}` onto `2j = j_doubled`, by Lagrange
/// interpolation over every value `2j ∈ {k, k−2, …}`.
pub fn j2_spectral_projector(n: usize, k: usize, j_doubled: usize) -> Result<DenseOp> {
    if j_doubled > k || (k - j_doubled) % 2 == 1 {
        return Err(invalid(format!("2j = {j_doubled} is not reachable with {k} qubits")));
    }
    let m = j2_prefix_matrix(n, k)?;
    let dim = 1 << n;
    let lam = casimir(j_doubled);
    let mut p = DenseOp::identity(dim, dim);
    for other in (k % 2..=k).step_by(2).filter(|&o| o != j_doubled) {
        let lo = casimir(other);
        p = p * (&m - DenseOp::identity(dim, dim) * Complex64::from(lo)) * Complex64::from(1.0 / (lam - lo));
    }
    Ok(p)
}

/// Projects `v`, assumed to have `2j_{k-1} = from` on qubits `0..k-1`, onto
/// `2j_k = to` for the first `k` qubits.
fn step_project(n: usize, k: usize, from: usize, to: usize, v: &[Complex64]) -> Vec<Complex64> {
    let other = if to == from + 1 { from.checked_sub(1) } else { Some(from + 1) };
    let Some(other) = other else {
        return v.to_vec();
    };
    let (lam, lo) = (casimir(to), casimir(other));
    let jv = j2_apply(n, k, v);
    jv.iter().zip(v).map(|(a, b)| (a - b * lo) / (lam - lo)).collect()
}

/// `Π^T v`: the product of the prefix projectors along the tableau's path.
pub fn tableau_project(tableau: &StandardTableau, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = tableau.n_boxes();
    if v.len() != 1 << n {
        return Err(invalid("vector length does not match the tableau size"));
    }
    let path = tableau.j_path();
    let mut out = v.to_vec();
    for k in 2..=n {
        out = step_project(n, k, path[k - 2], path[k - 1], &out);
    }
    Ok(out)
}

/// One outcome of the nested `Ĵ²` measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct J2Outcome {
    pub tableau: StandardTableau,
    pub probability: f64,
    pub post: DenseState,
}

/// Every tableau outcome of measuring `Ĵ²_{[1]}, …, Ĵ²_{[N]}` in sequence,
/// with outcome probabilities above `1e-14`.
pub fn j2_outcomes(state: &DenseState) -> Result<Vec<J2Outcome>> {
    let n = state.n_qubits();
    if n == 0 {
        return Err(invalid("empty register"));
    }
    let mut frontier = vec![(vec![1usize], state.amps().to_vec())];
    for k in 2..=n {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (path, v) in frontier {
            let j = *path.last().expect("non-empty");
            for to in std::iter::once(j + 1).chain(j.checked_sub(1)) {
                let w = step_project(n, k, j, to, &v);
                if w.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-14 {
                    let mut p = path.clone();
                    p.push(to);
                    next.push((p, w));
                }
            }
        }
        frontier = next;
    }
    frontier
        .into_iter()
        .map(|(path, v)| {
            let probability = v.iter().map(|a| a.norm_sqr()).sum();
            Ok(J2Outcome {
                tableau: StandardTableau::from_path(path)?,
                probability,
                post: DenseState::from_unnormalized(n, v)?,
            })
        })
        .collect()
}

/// Samples the nested `Ĵ²` measurement one prefix at a time.
pub fn sequential_j2_measure<R: Rng + ?Sized>(
    state: &DenseState,
    rng: &mut R,
) -> Result<(StandardTableau, DenseState)> {
    let n = state.n_qubits();
    let mut path = vec![1usize];
    let mut v = state.amps().to_vec();
    for k in 2..=n {
        let j = *path.last().expect("non-empty");
        let up = step_project(n, k, j, j + 1, &v);
        let p_up = up.iter().map(|a| a.norm_sqr()).sum::<f64>() / v.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if j == 0 || rng.random::<f64>() < p_up {
            path.push(j + 1);
            v = up;
        } else {
            path.push(j - 1);
            v = step_project(n, k, j, j - 1, &v);
        }
    }
    Ok((StandardTableau::from_path(path)?, DenseState::from_unnormalized(n, v)?))
}

/// Multiplet of the coupled basis for one tableau.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurBlock {
    pub tableau: StandardTableau,
    /// `vectors[i]` has `Ĵ^z` eigenvalue `j_T − i`, i.e. Dicke weight
    /// `N/2 − j_T + i`.
    pub vectors: Vec<Vec<Complex64>>,
}

/// Sequentially coupled orthonormal basis of the full register.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurBasis {
    pub n: usize,
    pub blocks: Vec<SchurBlock>,
}

impl SchurBasis {
    /// Unitary whose columns are the basis vectors, block by block.
    pub fn matrix(&self) -> DenseOp {
        let cols: Vec<&Vec<Complex64>> = self.blocks.iter().flat_map(|b| b.vectors.iter()).collect();
        DenseOp::from_fn(1 << self.n, cols.len(), |r, c| cols[c][r])
    }

    pub fn block(&self, tableau: &StandardTableau) -> Option<&SchurBlock> {
        self.blocks.iter().find(|b| &b.tableau == tableau)
    }

    /// Schur-basis coefficients `⟨T, m|v⟩` for every block.
    pub fn coefficients(&self, v: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.blocks.iter().map(|b| b.vectors.iter().map(|e| inner(e, v)).collect()).collect()
    }
}

/// Builds the coupled basis by adding one qubit at a time with
/// Clebsch–Gordan coefficients (Condon–Shortley phases, `|0⟩` = spin up).
pub fn schur_basis(n: usize) -> Result<SchurBasis> {
    check_size(n, DENSE_OP_CAP)?;
    if n == 0 {
        return Err(invalid("empty register"));
    }
    let one = Complex64::from(1.0);
    let zero = Complex64::default();
    let mut blocks: Vec<(Vec<usize>, Vec<Vec<Complex64>>)> = vec![(vec![1], vec![vec![one, zero], vec![zero, one]])];
    for k in 2..=n {
        let half = 1usize << (k - 1);
        let mut next = Vec::with_capacity(blocks.len() * 2);
        for (path, prev) in &blocks {
            let jp = *path.last().expect("non-empty") as isize;
            let denom = 2.0 * (jp + 1) as f64;
            for j in std::iter::once(jp + 1).chain((jp >= 1).then_some(jp - 1)) {
                let mut vecs = Vec::with_capacity(j as usize + 1);
                for i in 0..=j {
                    let m = j - 2 * i;
                    let plus = ((jp + m + 1) as f64 / denom).sqrt();
                    let minus = ((jp - m + 1) as f64 / denom).sqrt();
                    let (cu, cd) = if j > jp { (plus, minus) } else { (-minus, plus) };
                    let mut v = vec![zero; 2 * half];
                    // Spin up on the new qubit pairs with m − 1 on the prefix.
                    if (m - 1).abs() <= jp {
                        let src = &prev[((jp - (m - 1)) / 2) as usize];
                        v[..half].iter_mut().zip(src).for_each(|(o, a)| *o += a * cu);
                    }
                    if (m + 1).abs() <= jp {
                        let src = &prev[((jp - (m + 1)) / 2) as usize];
                        v[half..].iter_mut().zip(src).for_each(|(o, a)| *o += a * cd);
                    }
                    vecs.push(v);
                }
                let mut p = path.clone();
                p.push(j as usize);
                next.push((p, vecs));
            }
        }
        blocks = next;
    }
    let mut out: Vec<SchurBlock> = blocks
        .into_iter()
        .map(|(p, vectors)| Ok(SchurBlock { tableau: StandardTableau::from_path(p)?, vectors }))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| b.tableau.j_doubled().cmp(&a.tableau.j_doubled()).then(a.tableau.cmp(&b.tableau)));
    Ok(SchurBasis { n, blocks: out })
}

/// `P_σ ρ P_σ†` where `P_σ` moves qubit `q` to position `perm[q]`.
pub fn permute_matrix(rho: &DenseOp, n: usize, perm: &[usize]) -> Result<DenseOp> {
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(invalid("not a permutation of the qubits"));
    }
    // Source index of every target index.
    let src: Vec<usize> =
        (0..1usize << n).map(|y| (0..n).fold(0usize, |x, q| x | (((y >> perm[q]) & 1) << q))).collect();
    Ok(DenseOp::from_fn(rho.nrows(), rho.ncols(), |r, c| rho[(src[r], src[c])]))
}

/// Averages `ρ` over all qubit permutations. Uses `S_k = ⋃_i τ_{i,k} S_{k−1}`
/// so the `N!` terms reduce to `Σ_k k` transposition conjugations.
pub fn symmetrize_channel(rho: &DenseOp, n: usize) -> Result<DenseOp> {
    check_size(n, DENSE_OP_CAP)?;
    if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
        return Err(invalid("operator dimension does not match the qubit count"));
    }
    let dim = 1usize << n;
    let mut cur = rho.clone();
    for k in 1..n {
        let mut acc = cur.clone();
        for i in 0..k {
            acc += DenseOp::from_fn(dim, dim, |r, c| cur[(swap_bits(r, i, k), swap_bits(c, i, k))]);
        }
        cur = acc * Complex64::from(1.0 / (k + 1) as f64);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_casimir() {
        let m = j2_prefix_matrix(2, 2).unwrap();
        // |00⟩ is a triplet state.
        assert!((m[(0, 0)].re - 2.0).abs() < 1e-12);
        // |01⟩, |10⟩ mix with eigenvalues 2 and 0.
        assert!((m[(1, 1)].re - 1.0).abs() < 1e-12 && (m[(1, 2)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = schur_basis(4).unwrap();
        let u = b.matrix();
        assert_eq!(u.ncols(), 16);
        let err = (u.adjoint() * &u - DenseOp::identity(16, 16)).norm();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn symmetrize_two_qubits() {
        let s = DenseState::basis(2, 0b10).unwrap();
        let r = symmetrize_channel(&s.density(), 2).unwrap();
        assert!((r[(1, 1)].re - 0.5).abs() < 1e-12 && (r[(2, 2)].re - 0.5).abs() < 1e-12);
        assert!(r[(1, 2)].norm() < 1e-12);
    }
}

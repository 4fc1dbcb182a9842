//! Supports, support propagation and (partial) irreducibility.
//!
//! A nonnegative tensor is *x-partially reducible* when some slice
//! `S_j = ½(A(:,j,:,j) + A(:,j,:,j)ᵀ)` is a reducible matrix, i.e. there is a
//! proper nonempty block `J` with `a[i2,j,i1,j] + a[i1,j,i2,j] = 0` for all
//! `i1 ∈ J`, `i2 ∉ J`. The y side is analogous with `A(i,:,i,:)`. The tensor
//! is irreducible iff it is partially irreducible on both sides.
//!
//! Two independent deciders are implemented and always cross-checked:
//!
//! * connectivity of the nonzero pattern graph of every slice (BFS);
//! * iterated support propagation through the `(A + I)` contraction from
//!   every pair of unit seeds `(e_i, e_j)`, tracked on the boolean nonzero
//!   pattern so that repeated contraction cannot underflow.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::{check_nonnegative_vector, check_vectors, gradients_unchecked};
use crate::error::{BiquadError, Result, Side};
use crate::tensor::{BiquadraticTensor, Matrix};

/// Sorted set of positions where a vector is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSupport {
    pub side: Side,
    pub indices: Vec<usize>,
}

impl IndexSupport {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_subset_of(&self, other: &IndexSupport) -> bool {
        self.indices.iter().all(|i| other.indices.binary_search(i).is_ok())
    }
}

/// Indices with `|v_i| > tol`.
pub fn support(side: Side, v: &[f64], tol: f64) -> IndexSupport {
    IndexSupport {
        side,
        indices: v
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// One step of the `(A + I)` map:
/// `u = g(x, y) + x·Σy²`, `v = h(x, y) + y·Σx²`.
///
/// For nonnegative inputs `supp(x) ⊆ supp(u)` and `supp(y) ⊆ supp(v)`.
pub fn propagate_support(
    t: &BiquadraticTensor,
    x: &[f64],
    y: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_vectors(t, x, y)?;
    t.require_nonnegative()?;
    check_nonnegative_vector(x)?;
    check_nonnegative_vector(y)?;
    let (mut u, mut v) = gradients_unchecked(t, x, y);
    let x2: f64 = x.iter().map(|c| c * c).sum();
    let y2: f64 = y.iter().map(|c| c * c).sum();
    u.iter_mut().zip(x).for_each(|(ui, xi)| *ui += xi * y2);
    v.iter_mut().zip(y).for_each(|(vj, yj)| *vj += yj * x2);
    Ok((u, v))
}

/// Boolean-pattern version of [`propagate_support`]: which entries of
/// `(u, v)` are nonzero given which entries of `(x, y)` are, for a tensor
/// whose entries count as nonzero when `> tol`.
pub fn propagate_pattern(
    t: &BiquadraticTensor,
    x: &[bool],
    y: &[bool],
    tol: f64,
) -> (Vec<bool>, Vec<bool>) {
    let (m, n) = (t.m(), t.n());
    let mut u = x.to_vec();
    let mut v = if x.iter().any(|&b| b) {
        y.to_vec()
    } else {
        vec![false; n]
    };
    if !y.iter().any(|&b| b) {
        u = vec![false; m];
    }
    for i1 in 0..m {
        for j1 in 0..n {
            for i2 in 0..m {
                for j2 in 0..n {
                    if t.at(i1, j1, i2, j2) <= tol {
                        continue;
                    }
                    // each product drops one factor and marks that index
                    if y[j1] && x[i2] && y[j2] {
                        u[i1] = true;
                    }
                    if x[i1] && y[j1] && y[j2] {
                        u[i2] = true;
                    }
                    if x[i1] && x[i2] && y[j2] {
                        v[j1] = true;
                    }
                    if x[i1] && y[j1] && x[i2] {
                        v[j2] = true;
                    }
                }
            }
        }
    }
    (u, v)
}

/// Connected components of the undirected graph with an edge `(r, c)` when
/// `mat[r][c] > tol`, `r ≠ c`. Components are sorted by smallest member.
pub fn components(mat: &Matrix, tol: f64) -> Vec<Vec<usize>> {
    let size = mat.rows();
    let mut label = vec![usize::MAX; size];
    let mut out = Vec::new();
    for start in 0..size {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut comp = vec![start];
        label[start] = id;
        let mut head = 0;
        while head < comp.len() {
            let r = comp[head];
            head += 1;
            for c in 0..size {
                if c != r && label[c] == usize::MAX && (mat.get(r, c) > tol || mat.get(c, r) > tol)
                {
                    label[c] = id;
                    comp.push(c);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Irreducibility of a symmetric nonnegative matrix via pattern connectivity.
pub fn matrix_is_irreducible(mat: &Matrix, tol: f64) -> bool {
    components(mat, tol).len() == 1
}

/// A block that certifies partial reducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "side", rename_all = "lowercase")]
pub enum ReducibilityWitness {
    /// `a[i2,j,i1,j] + a[i1,j,i2,j] = 0` for `i1 ∈ block`, `i2 ∉ block`.
    X { block: Vec<usize>, j: usize },
    /// `a[i,j1,i,j2] + a[i,j2,i,j1] = 0` for `j1 ∈ block`, `j2 ∉ block`.
    Y { i: usize, block: Vec<usize> },
}

impl ReducibilityWitness {
    /// Checks the defining zero-sum condition with entry tolerance `tol`.
    pub fn holds(&self, t: &BiquadraticTensor, tol: f64) -> bool {
        match self {
            ReducibilityWitness::X { block, j } => {
                let proper = !block.is_empty() && block.len() < t.m();
                proper
                    && block.iter().all(|&i1| {
                        (0..t.m()).filter(|i2| !block.contains(i2)).all(|i2| {
                            t.at(i2, *j, i1, *j) + t.at(i1, *j, i2, *j) <= 2.0 * tol
                        })
                    })
            }
            ReducibilityWitness::Y { i, block } => {
                let proper = !block.is_empty() && block.len() < t.n();
                proper
                    && block.iter().all(|&j1| {
                        (0..t.n()).filter(|j2| !block.contains(j2)).all(|j2| {
                            t.at(*i, j1, *i, j2) + t.at(*i, j2, *i, j1) <= 2.0 * tol
                        })
                    })
            }
        }
    }
}

/// Outcome of the irreducibility analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    #[serde(rename = "x_partial")]
    pub x_partial_irreducible: bool,
    #[serde(rename = "y_partial")]
    pub y_partial_irreducible: bool,
    pub irreducible: bool,
    /// First reducing block found (x side before y side), if reducible.
    pub witness: Option<ReducibilityWitness>,
    /// Whether the slice-graph and propagation deciders agreed on both sides.
    pub method_agreement: bool,
}

/// Slice with entries `max(a[r,·,c,·], a[c,·,r,·])`. For nonnegative tensors
/// it has the same zero pattern as the symmetrized slice; with `tol > 0` it
/// thresholds single entries exactly as the propagation decider does.
fn pattern_slice(t: &BiquadraticTensor, side: Side, k: usize) -> Matrix {
    let size = match side {
        Side::X => t.m(),
        Side::Y => t.n(),
    };
    let mut out = Matrix::zeros(size, size);
    for r in 0..size {
        for c in 0..size {
            let (a, b) = match side {
                Side::X => (t.at(r, k, c, k), t.at(c, k, r, k)),
                Side::Y => (t.at(k, r, k, c), t.at(k, c, k, r)),
            };
            out.set(r, c, a.max(b));
        }
    }
    out
}

fn slice_graph_witness(t: &BiquadraticTensor, side: Side, tol: f64) -> Option<ReducibilityWitness> {
    match side {
        Side::X => (0..t.n()).find_map(|j| {
            let comps = components(&pattern_slice(t, Side::X, j), tol);
            (comps.len() > 1).then(|| ReducibilityWitness::X {
                block: comps[0].clone(),
                j,
            })
        }),
        Side::Y => (0..t.m()).find_map(|i| {
            let comps = components(&pattern_slice(t, Side::Y, i), tol);
            (comps.len() > 1).then(|| ReducibilityWitness::Y {
                i,
                block: comps[0].clone(),
            })
        }),
    }
}

fn unit_mask(len: usize, k: usize) -> Vec<bool> {
    (0..len).map(|i| i == k).collect()
}

/// Iterated-propagation decider for one side: from every seed pair
/// `(e_i, e_j)`, hold the other side at its seed and apply the `(A + I)` map
/// `m − 1` (resp. `n − 1`) times; partially irreducible iff every result is
/// entrywise positive.
fn propagation_verdict(t: &BiquadraticTensor, side: Side, tol: f64) -> bool {
    let (m, n) = (t.m(), t.n());
    let seeds: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    seeds.par_iter().all(|&(i, j)| {
        let x0 = unit_mask(m, i);
        let y0 = unit_mask(n, j);
        match side {
            Side::X => {
                let mut x = x0;
                for _ in 0..m - 1 {
                    x = propagate_pattern(t, &x, &y0, tol).0;
                }
                x.iter().all(|&b| b)
            }
            Side::Y => {
                let mut y = y0;
                for _ in 0..n - 1 {
                    y = propagate_pattern(t, &x0, &y, tol).1;
                }
                y.iter().all(|&b| b)
            }
        }
    })
}

/// Propagation decider on both sides, returning `(x_partial, y_partial)`.
pub fn verify_irreducible_propagation(t: &BiquadraticTensor, tol: f64) -> Result<(bool, bool)> {
    t.require_nonnegative()?;
    Ok((
        propagation_verdict(t, Side::X, tol),
        propagation_verdict(t, Side::Y, tol),
    ))
}

/// Floating-point variant of the propagation decider, renormalizing each
/// step. Kept as a cross-check of the boolean version; vulnerable to
/// underflow on badly scaled tensors.
pub fn verify_irreducible_propagation_float(
    t: &BiquadraticTensor,
    tol: f64,
) -> Result<(bool, bool)> {
    t.require_nonnegative()?;
    let (m, n) = (t.m(), t.n());
    let normalize = |v: &mut Vec<f64>| {
        let s: f64 = v.iter().sum();
        v.iter_mut().for_each(|c| *c /= s);
    };
    let mut x_ok = true;
    let mut y_ok = true;
    for i in 0..m {
        for j in 0..n {
            let ei: Vec<f64> = (0..m).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
            let ej: Vec<f64> = (0..n).map(|k| if k == j { 1.0 } else { 0.0 }).collect();
            let mut x = ei.clone();
            for _ in 0..m - 1 {
                x = propagate_support(t, &x, &ej)?.0;
                normalize(&mut x);
            }
            x_ok &= x.iter().all(|&c| c > tol);
            let mut y = ej.clone();
            for _ in 0..n - 1 {
                y = propagate_support(t, &ei, &y)?.1;
                normalize(&mut y);
            }
            y_ok &= y.iter().all(|&c| c > tol);
        }
    }
    Ok((x_ok, y_ok))
}

fn side_verdict(t: &BiquadraticTensor, side: Side, tol: f64) -> Result<(bool, Option<ReducibilityWitness>)> {
    t.require_nonnegative()?;
    let witness = slice_graph_witness(t, side, tol);
    let graph = witness.is_none();
    let propagation = propagation_verdict(t, side, tol);
    if graph != propagation {
        return Err(BiquadError::Internal(format!(
            "{side}-partial irreducibility: slice graphs say {graph}, propagation says {propagation}"
        )));
    }
    Ok((graph, witness))
}

/// x-partial irreducibility (both deciders; disagreement is an internal error).
pub fn is_x_partially_irreducible(t: &BiquadraticTensor) -> Result<bool> {
    side_verdict(t, Side::X, 0.0).map(|(v, _)| v)
}

/// y-partial irreducibility (both deciders; disagreement is an internal error).
pub fn is_y_partially_irreducible(t: &BiquadraticTensor) -> Result<bool> {
    side_verdict(t, Side::Y, 0.0).map(|(v, _)| v)
}

/// Full report with entries counted nonzero when `> 0`.
pub fn irreducibility_report(t: &BiquadraticTensor) -> Result<IrreducibilityReport> {
    irreducibility_report_tol(t, 0.0)
}

/// Full report with entries counted nonzero when `> tol`.
///
/// Unlike the per-side predicates, a disagreement between the deciders is
/// recorded in `method_agreement` rather than raised; the graph verdict is
/// reported.
pub fn irreducibility_report_tol(t: &BiquadraticTensor, tol: f64) -> Result<IrreducibilityReport> {
    t.require_nonnegative()?;
    let wx = slice_graph_witness(t, Side::X, tol);
    let wy = slice_graph_witness(t, Side::Y, tol);
    let (px, py) = verify_irreducible_propagation(t, tol)?;
    let x_partial = wx.is_none();
    let y_partial = wy.is_none();
    Ok(IrreducibilityReport {
        x_partial_irreducible: x_partial,
        y_partial_irreducible: y_partial,
        irreducible: x_partial && y_partial,
        witness: wx.or(wy),
        method_agreement: px == x_partial && py == y_partial,
    })
}

//! Truncated two-mode Fock space.
//!
//! This is the numerical cross-check for the closed forms: states are built
//! amplitude by amplitude, ladder operators act through their matrix
//! elements, and entropies come from an eigendecomposition of the reduced
//! density matrix. Amplitudes are stored sparsely; the reduced density
//! matrix is split along its exact zero pattern into independent Hermitian
//! blocks, and each block goes through a dense eigensolver.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    pub initial: usize,
    pub max: usize,
    pub tail_tol: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy {
            initial: 32,
            max: 4096,
            tail_tol: 1e-12,
        }
    }
}

impl CutoffPolicy {
    pub fn new(initial: usize, max: usize, tail_tol: f64) -> Result<Self> {
        let policy = CutoffPolicy {
            initial,
            max,
            tail_tol,
        };
        policy.check()?;
        Ok(policy)
    }

    fn check(&self) -> Result<()> {
        if self.initial < 2 {
            return Err(Error::validation("initial cutoff must be >= 2"));
        }
        if self.initial > self.max {
            return Err(Error::validation(format!(
                "initial cutoff {} exceeds max {}",
                self.initial, self.max
            )));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::validation("tail tolerance must be positive"));
        }
        Ok(())
    }
}

type Amplitudes = BTreeMap<(usize, usize), Complex64>;

/// A pure state of two bosonic modes `a` and `b`, keyed by `(n_a, n_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amplitudes: Amplitudes,
    cutoff: usize,
    norm_deficit: f64,
    tail_tol: f64,
    last_norm: f64,
}

impl TwoModeState {
    pub fn vacuum() -> Self {
        Self::from_amplitudes([((0, 0), Complex64::new(1.0, 0.0))]).expect("vacuum is normalizable")
    }

    /// Exact finite superposition, normalized. Nothing is truncated, so the
    /// norm deficit is zero.
    pub fn from_amplitudes<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        let mut amplitudes = Amplitudes::new();
        for (idx, amp) in entries {
            *amplitudes.entry(idx).or_default() += amp;
        }
        amplitudes.retain(|_, a| a.norm_sqr() != 0.0);
        let norm = norm_of(&amplitudes);
        if norm < 1e-14 {
            return Err(Error::validation("state has zero norm"));
        }
        let cutoff = cutoff_of(&amplitudes).max(2);
        Ok(TwoModeState {
            amplitudes: scale(amplitudes, 1.0 / norm),
            cutoff,
            norm_deficit: 0.0,
            tail_tol: CutoffPolicy::default().tail_tol,
            last_norm: norm,
        })
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amplitudes
            .get(&(n_a, n_b))
            .copied()
            .unwrap_or_default()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.amplitudes.iter().map(|(&k, &v)| (k, v))
    }

    /// Number of stored nonzero amplitudes.
    pub fn support(&self) -> usize {
        self.amplitudes.len()
    }

    /// Occupations are `< cutoff` in both modes.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability weight dropped by truncation before renormalizing.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Norm of the last operator image before it was renormalized.
    pub fn last_norm(&self) -> f64 {
        self.last_norm
    }
}

fn norm_of(amps: &Amplitudes) -> f64 {
    amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn cutoff_of(amps: &Amplitudes) -> usize {
    amps.keys()
        .map(|&(na, nb)| na.max(nb) + 1)
        .max()
        .unwrap_or(1)
}

fn scale(mut amps: Amplitudes, factor: f64) -> Amplitudes {
    for a in amps.values_mut() {
        *a *= factor;
    }
    amps
}

/// `Σ e^{inφ} tanhⁿr |n, n⟩ / cosh r`, truncated where the dropped weight
/// `tanh^{2N} r` falls below `policy.tail_tol`. The cutoff starts at
/// `policy.initial` and doubles up to `policy.max`.
pub fn two_mode_squeezed(r: f64, phi: f64, policy: &CutoffPolicy) -> Result<TwoModeState> {
    policy.check()?;
    if !(r >= 0.0) || !r.is_finite() || !phi.is_finite() {
        return Err(Error::validation(format!(
            "squeeze parameters must be finite with r >= 0, got r={r}, φ={phi}"
        )));
    }
    let t = r.tanh();
    let tail = |n: usize| t.powf(2.0 * n as f64);
    let mut cutoff = policy.initial;
    while tail(cutoff) >= policy.tail_tol {
        if cutoff >= policy.max {
            return Err(Error::Cutoff(format!(
                "r = {r} needs more than {} levels for tail weight {}",
                policy.max, policy.tail_tol
            )));
        }
        cutoff = (cutoff * 2).min(policy.max);
    }
    let lead = 1.0 / r.cosh();
    let mut amplitudes = Amplitudes::new();
    for n in 0..cutoff {
        let mag = lead * t.powi(n as i32);
        if mag == 0.0 {
            break;
        }
        amplitudes.insert((n, n), Complex64::from_polar(mag, n as f64 * phi));
    }
    let norm = norm_of(&amplitudes);
    Ok(TwoModeState {
        amplitudes: scale(amplitudes, 1.0 / norm),
        cutoff,
        norm_deficit: tail(cutoff),
        tail_tol: policy.tail_tol,
        last_norm: norm,
    })
}

/// Linear combination of ladder operators on a state, without normalizing.
#[derive(Debug, Clone, Copy)]
struct LadderCombo {
    adag_a: Complex64,
    a: Complex64,
    adag_b: Complex64,
    b: Complex64,
}

impl LadderCombo {
    fn apply(&self, amps: &Amplitudes) -> Amplitudes {
        let mut out = Amplitudes::new();
        let zero = Complex64::new(0.0, 0.0);
        for (&(na, nb), &amp) in amps {
            if self.adag_a != zero {
                *out.entry((na + 1, nb)).or_default() +=
                    self.adag_a * ((na + 1) as f64).sqrt() * amp;
            }
            if self.a != zero && na > 0 {
                *out.entry((na - 1, nb)).or_default() += self.a * (na as f64).sqrt() * amp;
            }
            if self.adag_b != zero {
                *out.entry((na, nb + 1)).or_default() +=
                    self.adag_b * ((nb + 1) as f64).sqrt() * amp;
            }
            if self.b != zero && nb > 0 {
                *out.entry((na, nb - 1)).or_default() += self.b * (nb as f64).sqrt() * amp;
            }
        }
        out.retain(|_, a| a.norm_sqr() != 0.0);
        out
    }
}

/// Applies `c₁a† + c₂a + c₃b† + c₄b` and renormalizes. The norm of the
/// image before renormalizing is kept in [`TwoModeState::last_norm`].
pub fn apply_linear(
    state: &TwoModeState,
    c_adag_a: Complex64,
    c_a: Complex64,
    c_adag_b: Complex64,
    c_b: Complex64,
) -> Result<TwoModeState> {
    let combo = LadderCombo {
        adag_a: c_adag_a,
        a: c_a,
        adag_b: c_adag_b,
        b: c_b,
    };
    let image = combo.apply(&state.amplitudes);
    let norm = norm_of(&image);
    if norm < 1e-14 {
        return Err(Error::validation(format!(
            "operator annihilates the state (image norm {norm:e})"
        )));
    }
    let cutoff = state.cutoff.max(cutoff_of(&image));
    Ok(TwoModeState {
        amplitudes: scale(image, 1.0 / norm),
        cutoff,
        norm_deficit: state.norm_deficit,
        tail_tol: state.tail_tol,
        last_norm: norm,
    })
}

/// Reduced density matrix of mode `a` as a sparse Hermitian map.
fn reduced_density_a(state: &TwoModeState) -> BTreeMap<(usize, usize), Complex64> {
    let mut by_b: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
    for (&(na, nb), &amp) in &state.amplitudes {
        by_b.entry(nb).or_default().push((na, amp));
    }
    let mut rho = BTreeMap::new();
    for column in by_b.values() {
        for &(i, ai) in column {
            for &(j, aj) in column {
                *rho.entry((i, j)).or_insert(Complex64::new(0.0, 0.0)) += ai * aj.conj();
            }
        }
    }
    rho
}

/// Groups the indices of a sparse Hermitian matrix into connected blocks.
fn blocks(rho: &BTreeMap<(usize, usize), Complex64>) -> Vec<Vec<usize>> {
    let indices: BTreeSet<usize> = rho.keys().map(|&(i, _)| i).collect();
    let index: Vec<usize> = indices.into_iter().collect();
    let pos = |i: usize| index.binary_search(&i).expect("index present");
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (&(i, j), v) in rho {
        if i != j && v.norm_sqr() != 0.0 {
            let (ri, rj) = (find(&mut parent, pos(i)), find(&mut parent, pos(j)));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (p, &site) in index.iter().enumerate() {
        let root = find(&mut parent, p);
        groups.entry(root).or_default().push(site);
    }
    groups.into_values().collect()
}

/// Eigenvalues of the reduced state of mode `a`, in ascending order.
pub fn reduced_spectrum(state: &TwoModeState) -> Vec<f64> {
    let rho = reduced_density_a(state);
    let mut spectrum = Vec::new();
    for block in blocks(&rho) {
        let n = block.len();
        let m = DMatrix::from_fn(n, n, |r, c| {
            rho.get(&(block[r], block[c])).copied().unwrap_or_default()
        });
        let eig = SymmetricEigen::new(m);
        spectrum.extend(eig.eigenvalues.iter().copied());
    }
    spectrum.sort_by(f64::total_cmp);
    spectrum
}

/// Von Neumann entropy of the reduced state of mode `a`, in bits.
pub fn reduced_entropy(state: &TwoModeState) -> f64 {
    reduced_spectrum(state)
        .into_iter()
        .filter(|&l| l > 1e-15)
        .map(|l| -l * l.log2())
        .sum()
}

/// `Var(V) = ‖Vψ‖² - ⟨ψ|V|ψ⟩²` for a Hermitian ladder combination `V`.
fn variance(amps: &Amplitudes, op: &LadderCombo) -> f64 {
    let image = op.apply(amps);
    let second = image.values().map(|a| a.norm_sqr()).sum::<f64>();
    let first: Complex64 = image
        .iter()
        .filter_map(|(k, v)| amps.get(k).map(|a| a.conj() * v))
        .sum();
    second - first.re * first.re
}

/// `½[Var(X_A - X_B) + Var(P_A + P_B)]` with `X = (m + m†)/√2` and
/// `P = (m - m†)/(i√2)`.
pub fn quadrature_mean_variance(state: &TwoModeState) -> Result<f64> {
    if state.norm_deficit > state.tail_tol {
        return Err(Error::Cutoff(format!(
            "truncated weight {} exceeds tolerance {}",
            state.norm_deficit, state.tail_tol
        )));
    }
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
    let x_diff = LadderCombo {
        adag_a: h,
        a: h,
        adag_b: -h,
        b: -h,
    };
    // (m - m†)/(i√2) = (i m† - i m)/√2
    let p_sum = LadderCombo {
        adag_a: ih,
        a: -ih,
        adag_b: ih,
        b: -ih,
    };
    Ok(0.5 * (variance(&state.amplitudes, &x_diff) + variance(&state.amplitudes, &p_sum)))
}

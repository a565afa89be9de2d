//! Coherence structure of a measurement vector and the matrices of the
//! partially coherent formulations.
//!
//! Measurements acquired by coherent receiver channels at one instant form a
//! group. Within a group only phase differences relative to the first member
//! (the anchor) are known. Anchors of different groups have unrelated phases.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cis, wrap_phase, ComplexMatrix, ComplexVector, Real};

/// Partition of the measurement indices `0..m` into coherent groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct CoherenceStructure {
    groups: Vec<Vec<usize>>,
    /// `membership[k] = (group, position within group)`.
    membership: Vec<(usize, usize)>,
}

impl CoherenceStructure {
    /// Validates that `groups` partitions `0..m` into nonempty groups.
    pub fn new(groups: Vec<Vec<usize>>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Structure("no measurements".into()));
        }
        let mut membership = vec![(usize::MAX, 0); m];
        for (g, members) in groups.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Structure(format!("group {g} is empty")));
            }
            for (pos, &k) in members.iter().enumerate() {
                if k >= m {
                    return Err(Error::Structure(format!("index {k} in group {g} out of range 0..{m}")));
                }
                if membership[k].0 != usize::MAX {
                    return Err(Error::Structure(format!(
                        "index {k} appears in groups {} and {g}",
                        membership[k].0
                    )));
                }
                membership[k] = (g, pos);
            }
        }
        if let Some(k) = membership.iter().position(|&(g, _)| g == usize::MAX) {
            return Err(Error::Structure(format!("index {k} belongs to no group")));
        }
        Ok(Self { groups, membership })
    }

    /// Every measurement on its own: the fully incoherent case.
    pub fn singletons(m: usize) -> Result<Self> {
        Self::new((0..m).map(|k| vec![k]).collect(), m)
    }

    /// `m1` singletons followed by `m2` coherent pairs `(m1 + k, m1 + m2 + k)`,
    /// matching a stacked vector `[b1; b2; b3]` with `b2`, `b3` acquired
    /// simultaneously.
    pub fn singletons_and_pairs(m1: usize, m2: usize) -> Result<Self> {
        let mut groups: Vec<Vec<usize>> = (0..m1).map(|k| vec![k]).collect();
        groups.extend((0..m2).map(|k| vec![m1 + k, m1 + m2 + k]));
        Self::new(groups, m1 + 2 * m2)
    }

    /// Total measurement count.
    pub fn m(&self) -> usize {
        self.membership.len()
    }

    /// Number of groups, i.e. residual phase unknowns.
    pub fn q(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn anchor(&self, group: usize) -> usize {
        self.groups[group][0]
    }

    pub fn group_of(&self, k: usize) -> usize {
        self.membership[k].0
    }

    pub fn is_anchor(&self, k: usize) -> bool {
        self.membership[k].1 == 0
    }

    /// `(anchor, member)` for every non-anchor measurement, group by group.
    pub fn anchor_pairs(&self) -> Vec<(usize, usize)> {
        self.groups
            .iter()
            .flat_map(|g| g[1..].iter().map(move |&k| (g[0], k)))
            .collect()
    }
}

impl TryFrom<Vec<Vec<usize>>> for CoherenceStructure {
    type Error = Error;
    fn try_from(groups: Vec<Vec<usize>>) -> Result<Self> {
        let m = groups.iter().map(Vec::len).sum();
        Self::new(groups, m)
    }
}

impl From<CoherenceStructure> for Vec<Vec<usize>> {
    fn from(s: CoherenceStructure) -> Self {
        s.groups
    }
}

/// What a phaseless multi-channel receiver reports: magnitudes of all
/// samples and, per group, the phase of each member relative to its anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudePhaseData<T: Real> {
    magnitudes: Vec<T>,
    phase_diffs: Vec<T>,
}

impl<T: Real> MagnitudePhaseData<T> {
    /// `phase_diffs[k]` is the phase of measurement `k` relative to its group
    /// anchor; anchors must carry exactly 0. Values are wrapped to (-pi, pi].
    pub fn new(structure: &CoherenceStructure, magnitudes: Vec<T>, phase_diffs: Vec<T>) -> Result<Self> {
        let m = structure.m();
        if magnitudes.len() != m || phase_diffs.len() != m {
            return Err(Error::Dimension(format!(
                "structure has {m} measurements, data has {} magnitudes and {} phases",
                magnitudes.len(),
                phase_diffs.len()
            )));
        }
        if let Some(k) = magnitudes.iter().position(|&v| !(v >= T::zero() && v.is_finite())) {
            return Err(Error::Structure(format!("magnitude {k} is negative or not finite")));
        }
        if let Some(k) = phase_diffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("phase difference {k}")));
        }
        for g in structure.groups() {
            if phase_diffs[g[0]] != T::zero() {
                return Err(Error::Structure(format!(
                    "anchor {} has nonzero phase difference",
                    g[0]
                )));
            }
        }
        let phase_diffs = phase_diffs.into_iter().map(wrap_phase).collect();
        Ok(Self {
            magnitudes,
            phase_diffs,
        })
    }

    pub fn magnitudes(&self) -> &[T] {
        &self.magnitudes
    }

    pub fn phase_diffs(&self) -> &[T] {
        &self.phase_diffs
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// `|b_k| e^{j dphi_k}`: the measurement vector with every group phase
    /// set to zero, i.e. `B C 1`.
    pub fn relative_field(&self) -> ComplexVector<T> {
        ComplexVector::from_raw(
            self.magnitudes
                .iter()
                .zip(&self.phase_diffs)
                .map(|(&a, &p)| cis(p) * a)
                .collect(),
        )
    }

    fn check(&self, structure: &CoherenceStructure) -> Result<()> {
        if self.len() != structure.m() {
            return Err(Error::Dimension(format!(
                "data has {} measurements, structure {}",
                self.len(),
                structure.m()
            )));
        }
        Ok(())
    }
}

/// Diagonal matrix of measured magnitudes.
pub fn build_b<T: Real>(data: &MagnitudePhaseData<T>) -> ComplexMatrix<T> {
    let diag: Vec<Complex<T>> = data.magnitudes.iter().map(|&v| Complex::new(v, T::zero())).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// `m x q` matrix with `e^{j dphi_k}` at `(k, group(k))` and zeros elsewhere.
pub fn build_c<T: Real>(structure: &CoherenceStructure, data: &MagnitudePhaseData<T>) -> Result<ComplexMatrix<T>> {
    data.check(structure)?;
    let mut c = ComplexMatrix::zeros(structure.m(), structure.q());
    for (k, &p) in data.phase_diffs.iter().enumerate() {
        c[(k, structure.group_of(k))] = cis(p);
    }
    Ok(c)
}

/// The product `B C` formed directly, one nonzero per row.
pub fn build_bc<T: Real>(structure: &CoherenceStructure, data: &MagnitudePhaseData<T>) -> Result<ComplexMatrix<T>> {
    data.check(structure)?;
    let mut bc = ComplexMatrix::zeros(structure.m(), structure.q());
    for (k, z) in data.relative_field().iter().enumerate() {
        bc[(k, structure.group_of(k))] = *z;
    }
    Ok(bc)
}

/// Selectors splitting the stacked unknowns `[z; psi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectorPair<T: Real> {
    /// `[I 0]`, `n x (n + q)`.
    pub p1: ComplexMatrix<T>,
    /// `[0 I]`, `q x (n + q)`.
    pub p2: ComplexMatrix<T>,
}

pub fn build_selectors<T: Real>(n: usize, q: usize) -> Result<SelectorPair<T>> {
    if n == 0 || q == 0 {
        return Err(Error::Dimension(format!("selectors need n, q >= 1 (got {n}, {q})")));
    }
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let p1 = ComplexMatrix::from_fn(n, n + q, |i, j| if i == j { one } else { zero });
    let p2 = ComplexMatrix::from_fn(q, n + q, |i, j| if j == n + i { one } else { zero });
    Ok(SelectorPair { p1, p2 })
}

/// Phase of `a1 * conj(a2)` recovered from four intensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometricPhase<T> {
    /// Angle in (-pi, pi]; 0 when indeterminate.
    pub angle: T,
    /// Set when one of the two signals vanishes and no phase is defined.
    pub indeterminate: bool,
}

/// Recovers `angle(a1 * conj(a2))` from `o1 = |a1|^2`, `o2 = |a2|^2`,
/// `o3 = |a1 + a2|^2` and `o4 = |a1 + j a2|^2`.
///
/// `o3 - o1 - o2 = 2 Re(a1 conj(a2))` and `o4 - o1 - o2 = 2 Im(a1 conj(a2))`,
/// so the two-argument arctangent resolves the quadrant.
pub fn interferometric_phase<T: Real>(o1: T, o2: T, o3: T, o4: T) -> InterferometricPhase<T> {
    let re = o3 - o1 - o2;
    let im = o4 - o1 - o2;
    let scale = o1.abs() + o2.abs() + o3.abs() + o4.abs();
    if re.hypot(im) <= T::lit(8.0) * T::epsilon() * scale {
        return InterferometricPhase {
            angle: T::zero(),
            indeterminate: true,
        };
    }
    InterferometricPhase {
        angle: wrap_phase(im.atan2(re)),
        indeterminate: false,
    }
}

/// Stacks the incoherent blocks and, for every coherent block pair `(p, r)`,
/// the combination rows `A_p + A_r` and `A_p + j A_r`. Right-hand sides are
/// elementwise magnitudes of the same combinations of `b`.
///
/// With no pairs the plain incoherent system is returned.
pub fn build_augmented_system<T: Real>(
    a_blocks: &[ComplexMatrix<T>],
    b_blocks: &[ComplexVector<T>],
    coherent_pairs: &[(usize, usize)],
) -> Result<(ComplexMatrix<T>, Vec<T>)> {
    if a_blocks.len() != b_blocks.len() {
        return Err(Error::Dimension(format!(
            "{} operator blocks but {} data blocks",
            a_blocks.len(),
            b_blocks.len()
        )));
    }
    for (i, (a, b)) in a_blocks.iter().zip(b_blocks).enumerate() {
        if a.rows() != b.len() {
            return Err(Error::Dimension(format!(
                "block {i}: {} operator rows, {} data entries",
                a.rows(),
                b.len()
            )));
        }
    }
    let j = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    let mut ops: Vec<ComplexMatrix<T>> = a_blocks.to_vec();
    let mut rhs: Vec<ComplexVector<T>> = b_blocks.to_vec();
    for &(p, r) in coherent_pairs {
        if p >= a_blocks.len() || r >= a_blocks.len() {
            return Err(Error::Dimension(format!("pair ({p}, {r}) refers to a missing block")));
        }
        if a_blocks[p].rows() != a_blocks[r].rows() {
            return Err(Error::Dimension(format!(
                "paired blocks {p} and {r} have {} and {} rows",
                a_blocks[p].rows(),
                a_blocks[r].rows()
            )));
        }
        for factor in [one, j] {
            ops.push(a_blocks[p].add_scaled(&a_blocks[r], factor)?);
            rhs.push(ComplexVector::from_raw(
                b_blocks[p].iter().zip(&b_blocks[r]).map(|(&x, &y)| x + y * factor).collect(),
            ));
        }
    }
    let refs: Vec<&ComplexMatrix<T>> = ops.iter().collect();
    let a = ComplexMatrix::vstack(&refs)?;
    let mags = rhs.iter().flat_map(|v| v.magnitudes()).collect();
    Ok((a, mags))
}

/// Row-level generalization of [`build_augmented_system`] to an arbitrary
/// coherence structure: every non-anchor member `k` with anchor `a` adds the
/// rows `A_a + A_k` and `A_a + j A_k`. All `+` rows come first, then all
/// `+j` rows.
pub fn augment_by_groups<T: Real>(
    a: &ComplexMatrix<T>,
    data: &MagnitudePhaseData<T>,
    structure: &CoherenceStructure,
) -> Result<(ComplexMatrix<T>, Vec<T>)> {
    data.check(structure)?;
    if a.rows() != structure.m() {
        return Err(Error::Dimension(format!(
            "operator has {} rows, structure {} measurements",
            a.rows(),
            structure.m()
        )));
    }
    let pairs = structure.anchor_pairs();
    let anchors: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let members: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let b = data.relative_field();
    let b_anchor = ComplexVector::from_raw(anchors.iter().map(|&k| b[k]).collect());
    let b_member = ComplexVector::from_raw(members.iter().map(|&k| b[k]).collect());
    let blocks = [a.clone(), a.select_rows(&anchors), a.select_rows(&members)];
    let rhs = [b, b_anchor, b_member];
    build_augmented_system(&blocks[..], &rhs[..], &[(1, 2)]).map(|(op, mut mags)| {
        // Drop the anchor/member copies; keep A and the combination rows.
        let m = structure.m();
        let npairs = pairs.len();
        let keep: Vec<usize> = (0..m).chain(m + 2 * npairs..m + 4 * npairs).collect();
        let op = op.select_rows(&keep);
        mags = keep.iter().map(|&i| mags[i]).collect();
        (op, mags)
    })
}

/// Synthesizes receiver output from a ground-truth field.
pub fn extract_phase_data<T: Real>(
    b_true: &ComplexVector<T>,
    structure: &CoherenceStructure,
) -> Result<MagnitudePhaseData<T>> {
    if b_true.len() != structure.m() {
        return Err(Error::Dimension(format!(
            "field has {} entries, structure {} measurements",
            b_true.len(),
            structure.m()
        )));
    }
    let mut phase_diffs = vec![T::zero(); structure.m()];
    for (g, members) in structure.groups().iter().enumerate() {
        let anchor = b_true[members[0]];
        if members.len() > 1 && anchor.norm() == T::zero() {
            return Err(Error::IndeterminateReference { group: g });
        }
        for &k in &members[1..] {
            let rel = b_true[k] * anchor.conj();
            phase_diffs[k] = wrap_phase(rel.im.atan2(rel.re));
        }
    }
    MagnitudePhaseData::new(structure, b_true.magnitudes(), phase_diffs)
}

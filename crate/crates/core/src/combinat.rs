//! Subset labels, weight data, F-curve partitions, coincidence sets, and
//! the weight data induced on boundary and coincidence strata.
//!
//! Subsets of `[n] = {1, .., n}` are bitmasks of width `n <= 16`; bit
//! `i-1` encodes membership of `i`. Two canonicalizations coexist and are
//! kept explicit: [`SubsetIndex::mzn_canonical`] picks the side of
//! `{I, I^c}` not containing `n` (used to index boundary bases), while
//! [`SubsetIndex::weight_canonical`] picks the side of smaller total
//! weight (used wherever a weight dichotomy applies).

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{q_int, Q};
use crate::{Error, Result};

/// Hard cap on the number of marked points (bitmask width).
pub const MAX_POINTS: u8 = 16;

/// Cap for operations that enumerate all F-curves.
pub const MAX_FCURVE_POINTS: u8 = 12;

/// An unordered boundary label: a subset `I` of `[n]` with
/// `2 <= |I| <= n-2`, identified with its complement.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex {
    n: u8,
    mask: u32,
}

impl SubsetIndex {
    /// Build from 1-based members.
    pub fn new(members: &[u8], n: u8) -> Result<Self> {
        let mut mask = 0u32;
        for &m in members {
            if m < 1 || m > n {
                return Err(Error::SubsetElementOutOfRange { n, element: m });
            }
            mask |= 1 << (m - 1);
        }
        Self::from_mask(mask, n)
    }

    /// Build from a bitmask over `[n]`.
    pub fn from_mask(mask: u32, n: u8) -> Result<Self> {
        if n < 4 || n > MAX_POINTS {
            return Err(Error::AmbientOutOfRange {
                n,
                min: 4,
                max: MAX_POINTS,
            });
        }
        if mask >= 1 << n {
            return Err(Error::SubsetElementOutOfRange {
                n,
                element: 32 - mask.leading_zeros() as u8,
            });
        }
        let size = mask.count_ones() as u8;
        if size < 2 || size > n - 2 {
            return Err(Error::SubsetSizeOutOfRange { n, size });
        }
        Ok(SubsetIndex { n, mask })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn size(&self) -> u8 {
        self.mask.count_ones() as u8
    }

    pub fn contains(&self, element: u8) -> bool {
        element >= 1 && element <= self.n && self.mask & (1 << (element - 1)) != 0
    }

    /// 1-based members in ascending order.
    pub fn members(&self) -> Vec<u8> {
        (1..=self.n).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(&self) -> SubsetIndex {
        SubsetIndex {
            n: self.n,
            mask: !self.mask & ((1 << self.n) - 1),
        }
    }

    pub fn is_strict_subset_of(&self, other: &SubsetIndex) -> bool {
        self.mask != other.mask && self.mask & other.mask == self.mask
    }

    /// The representative of `{I, I^c}` not containing `n`.
    pub fn mzn_canonical(&self) -> SubsetIndex {
        if self.contains(self.n) {
            self.complement()
        } else {
            *self
        }
    }

    /// The representative of smaller total weight; ties go to the
    /// lexicographically smaller member list (for complementary sides,
    /// the side containing `1`).
    pub fn weight_canonical(&self, weights: &WeightDatum) -> Result<SubsetIndex> {
        if self.n != weights.n() {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: weights.n(),
            });
        }
        let w = weights.mask_weight(self.mask);
        let co = self.complement();
        let w_co = weights.mask_weight(co.mask);
        Ok(match w.cmp(&w_co) {
            std::cmp::Ordering::Less => *self,
            std::cmp::Ordering::Greater => co,
            std::cmp::Ordering::Equal => {
                if self.contains(1) {
                    *self
                } else {
                    co
                }
            }
        })
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetIndex({}; {})", self.n, self)
    }
}

/// The representative of `{members, complement}` not containing `n`.
pub fn canonical_subset(members: &[u8], n: u8) -> Result<SubsetIndex> {
    Ok(SubsetIndex::new(members, n)?.mzn_canonical())
}

/// The representative of smaller total weight (ties lexicographic).
pub fn weight_canonical_subset(label: SubsetIndex, weights: &WeightDatum) -> Result<SubsetIndex> {
    label.weight_canonical(weights)
}

/// A weight datum: exact rationals `a_1..a_n` with `0 < a_i <= 1` and
/// `sum a_i > 2`.
///
/// `n = 3` is allowed so that the point factors appearing in boundary
/// restrictions can be represented; most operations require `n >= 4`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightDatum {
    weights: Vec<Q>,
}

impl WeightDatum {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        let n = weights.len();
        if !(3..=MAX_POINTS as usize).contains(&n) {
            return Err(Error::InvalidWeights(format!(
                "need 3 <= n <= {MAX_POINTS}, got n = {n}"
            )));
        }
        let one = Q::one();
        for (i, a) in weights.iter().enumerate() {
            if !a.is_positive() || a > &one {
                return Err(Error::InvalidWeights(format!(
                    "weight a_{} = {} outside (0, 1]",
                    i + 1,
                    a
                )));
            }
        }
        let total: Q = weights.iter().sum();
        if total <= q_int(2) {
            return Err(Error::InvalidWeights(format!(
                "total weight {total} is not > 2"
            )));
        }
        Ok(WeightDatum { weights })
    }

    /// The weight datum `(1, .., 1)` of the unweighted space.
    pub fn unit(n: u8) -> Result<Self> {
        Self::new(vec![Q::one(); n as usize])
    }

    /// The symmetric weight datum `(alpha, .., alpha)`.
    pub fn symmetric(n: u8, alpha: &Q) -> Result<Self> {
        Self::new(vec![alpha.clone(); n as usize])
    }

    pub fn n(&self) -> u8 {
        self.weights.len() as u8
    }

    /// 1-based accessor.
    pub fn weight(&self, i: u8) -> &Q {
        &self.weights[(i - 1) as usize]
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn total(&self) -> Q {
        self.weights.iter().sum()
    }

    /// `w_I` for a bitmask `I`.
    pub fn mask_weight(&self, mask: u32) -> Q {
        let mut w = Q::zero();
        for (i, a) in self.weights.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w += a;
            }
        }
        w
    }

    pub fn subset_weight(&self, label: SubsetIndex) -> Q {
        self.mask_weight(label.mask())
    }

    /// `Some(alpha)` when all weights agree.
    pub fn symmetric_value(&self) -> Option<&Q> {
        let first = &self.weights[0];
        self.weights.iter().all(|a| a == first).then_some(first)
    }

    pub fn is_unit(&self) -> bool {
        self.weights.iter().all(|a| a.is_one())
    }

    /// `a_i + a_j <= 1`, the test for a coincident-sections pair.
    pub fn pair_is_light(&self, i: u8, j: u8) -> bool {
        self.weight(i) + self.weight(j) <= Q::one()
    }
}

/// Both sides of `{I, I^c}` have weight > 1, i.e. the label survives as a
/// node locus.
pub fn is_nodal_label(weights: &WeightDatum, label: SubsetIndex) -> Result<bool> {
    let light = label.weight_canonical(weights)?;
    Ok(weights.subset_weight(light) > Q::one())
}

/// All boundary labels of the n-pointed space, as `n`-free representatives
/// in ascending bitmask order. Length `2^(n-1) - n - 1`.
pub fn enumerate_boundary(n: u8) -> Result<Vec<SubsetIndex>> {
    if !(4..=MAX_POINTS).contains(&n) {
        return Err(Error::AmbientOutOfRange {
            n,
            min: 4,
            max: MAX_POINTS,
        });
    }
    let mut out = Vec::with_capacity((1usize << (n - 1)) - n as usize - 1);
    for mask in 3u32..1 << (n - 1) {
        let size = mask.count_ones() as u8;
        if (2..=n - 2).contains(&size) {
            out.push(SubsetIndex { n, mask });
        }
    }
    Ok(out)
}

/// A vital curve: an unordered partition of `[n]` into four nonempty
/// blocks, stored sorted by minimum element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FCurve {
    n: u8,
    blocks: [u32; 4],
}

impl FCurve {
    pub fn new(blocks: &[Vec<u8>], n: u8) -> Result<Self> {
        if n < 4 || n > MAX_POINTS {
            return Err(Error::AmbientOutOfRange {
                n,
                min: 4,
                max: MAX_POINTS,
            });
        }
        if blocks.len() != 4 {
            return Err(Error::InvalidWeights(format!(
                "an F-curve needs exactly 4 blocks, got {}",
                blocks.len()
            )));
        }
        let mut masks = [0u32; 4];
        let mut union = 0u32;
        for (b, members) in blocks.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::SubsetSizeOutOfRange { n, size: 0 });
            }
            for &m in members {
                if m < 1 || m > n {
                    return Err(Error::SubsetElementOutOfRange { n, element: m });
                }
                let bit = 1 << (m - 1);
                if union & bit != 0 {
                    return Err(Error::InvalidWeights(format!(
                        "element {m} appears in two blocks"
                    )));
                }
                union |= bit;
                masks[b] |= bit;
            }
        }
        if union != (1 << n) - 1 {
            return Err(Error::InvalidWeights(
                "blocks do not cover [n]".to_string(),
            ));
        }
        masks.sort_by_key(|m| m.trailing_zeros());
        Ok(FCurve { n, blocks: masks })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn block_masks(&self) -> [u32; 4] {
        self.blocks
    }

    pub fn blocks(&self) -> [Vec<u8>; 4] {
        self.blocks.map(|m| {
            (1..=self.n)
                .filter(|&i| m & (1 << (i - 1)) != 0)
                .collect()
        })
    }
}

impl fmt::Display for FCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, block) in self.blocks().iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for (j, m) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for FCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FCurve({}; {})", self.n, self)
    }
}

/// All partitions of `[n]` into 4 nonempty blocks, each exactly once, in
/// restricted-growth order.
pub fn enumerate_fcurves(n: u8) -> Result<Vec<FCurve>> {
    if n < 4 {
        return Err(Error::AmbientOutOfRange {
            n,
            min: 4,
            max: MAX_FCURVE_POINTS,
        });
    }
    if n > MAX_FCURVE_POINTS {
        return Err(Error::AmbientOutOfRange {
            n,
            min: 4,
            max: MAX_FCURVE_POINTS,
        });
    }
    let mut out = Vec::new();
    let mut blocks = [0u32; 4];
    // Element 1 opens block 0, so block order is by minimum element.
    fn assign(element: u8, n: u8, used: usize, blocks: &mut [u32; 4], out: &mut Vec<FCurve>) {
        if element > n {
            if used == 4 {
                out.push(FCurve { n, blocks: *blocks });
            }
            return;
        }
        let left = (n - element + 1) as usize;
        if used + left < 4 {
            return;
        }
        let bit = 1u32 << (element - 1);
        for b in 0..used {
            blocks[b] |= bit;
            assign(element + 1, n, used, blocks, out);
            blocks[b] &= !bit;
        }
        if used < 4 {
            blocks[used] = bit;
            assign(element + 1, n, used + 1, blocks, out);
            blocks[used] = 0;
        }
    }
    assign(1, n, 0, &mut blocks, &mut out);
    Ok(out)
}

/// The coincidence set `C = { I : w_I <= 1, 2 <= |I| <= n-2 }`, stored as
/// the light (member) sides themselves, in ascending bitmask order.
pub fn coincidence_sets(weights: &WeightDatum) -> Vec<SubsetIndex> {
    let n = weights.n();
    if n < 4 {
        return Vec::new();
    }
    let one = Q::one();
    let mut out = Vec::new();
    for mask in 3u32..1 << n {
        let size = mask.count_ones() as u8;
        if (2..=n - 2).contains(&size) && weights.mask_weight(mask) <= one {
            out.push(SubsetIndex { n, mask });
        }
    }
    out
}

/// Weight data induced on the two factors of a nodal boundary: the members
/// of each side keep their weights and gain a trailing attachment point of
/// weight one.
#[derive(Clone, Debug)]
pub struct BoundarySplit {
    pub side: WeightDatum,
    pub co_side: WeightDatum,
    /// 1-based index of the attachment point in `side` (its last index).
    pub node_index: u8,
    /// 1-based index of the attachment point in `co_side`.
    pub co_node_index: u8,
    /// Parent indices carried by `side`, ascending; entry `t-1` is the
    /// parent index of child index `t`.
    pub members: Vec<u8>,
    pub co_members: Vec<u8>,
}

pub fn induced_weights_boundary(
    weights: &WeightDatum,
    label: SubsetIndex,
) -> Result<BoundarySplit> {
    if !is_nodal_label(weights, label)? {
        return Err(Error::NotNodal(label.to_string()));
    }
    let members = label.members();
    let co_members = label.complement().members();
    let child = |ms: &[u8]| -> Result<WeightDatum> {
        let mut w: Vec<Q> = ms.iter().map(|&i| weights.weight(i).clone()).collect();
        w.push(Q::one());
        WeightDatum::new(w)
    };
    Ok(BoundarySplit {
        side: child(&members)?,
        co_side: child(&co_members)?,
        node_index: members.len() as u8 + 1,
        co_node_index: co_members.len() as u8 + 1,
        members,
        co_members,
    })
}

/// Weight data induced by collapsing a maximal light cluster `J` to a
/// single point `p` of weight `w_J`, appended as the last index.
#[derive(Clone, Debug)]
pub struct Collapse {
    pub child: WeightDatum,
    /// 1-based index of the merged point in `child` (its last index).
    pub merged_index: u8,
    /// Parent indices kept by the child, ascending; entry `t-1` is the
    /// parent index of child index `t`.
    pub kept: Vec<u8>,
    pub collapsed: Vec<u8>,
}

pub fn induced_weights_collapse(weights: &WeightDatum, cluster: SubsetIndex) -> Result<Collapse> {
    if cluster.n() != weights.n() {
        return Err(Error::AmbientMismatch {
            left: cluster.n(),
            right: weights.n(),
        });
    }
    let w_j = weights.subset_weight(cluster);
    if w_j > Q::one() {
        return Err(Error::Overweight(cluster.to_string()));
    }
    for x in 1..=weights.n() {
        if !cluster.contains(x) && &w_j + weights.weight(x) <= Q::one() {
            return Err(Error::NotMaximal(cluster.to_string()));
        }
    }
    let kept: Vec<u8> = (1..=weights.n()).filter(|&i| !cluster.contains(i)).collect();
    let mut w: Vec<Q> = kept.iter().map(|&i| weights.weight(i).clone()).collect();
    w.push(w_j);
    Ok(Collapse {
        child: WeightDatum::new(w)?,
        merged_index: kept.len() as u8 + 1,
        kept,
        collapsed: cluster.members(),
    })
}

/// All maximal clusters: `|J| >= 2`, `w_J <= 1`, and no strict superset
/// has weight <= 1.
pub fn maximal_light_subsets(weights: &WeightDatum) -> Vec<SubsetIndex> {
    let n = weights.n();
    let one = Q::one();
    let mut out = Vec::new();
    for mask in 3u32..1 << n {
        if mask.count_ones() < 2 {
            continue;
        }
        let w = weights.mask_weight(mask);
        if w > one {
            continue;
        }
        let maximal =
            (1..=n).all(|x| mask & (1 << (x - 1)) != 0 || &w + weights.weight(x) > one);
        if maximal {
            // |J| <= n-2 is automatic: a light J of size n-1 would force a
            // single remaining weight > 1.
            out.push(SubsetIndex { n, mask });
        }
    }
    out
}

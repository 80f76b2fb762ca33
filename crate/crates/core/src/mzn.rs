//! Exact arithmetic in the divisor class group of the n-pointed space:
//! the boundary basis, the linear relations between boundary classes, a
//! deterministic canonical form, the tautological classes, and pairing
//! with vital curves.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::combinat::{
    enumerate_boundary, enumerate_fcurves, FCurve, SubsetIndex, WeightDatum, MAX_FCURVE_POINTS,
    MAX_POINTS,
};
use crate::rational::{q_int, Q};
use crate::{Error, Result};

/// Immutable per-n data: boundary order, relation basis, and (lazily) the
/// F-curve list. Built once and shared.
pub struct MznContext {
    n: u8,
    boundary: Vec<SubsetIndex>,
    position: Vec<usize>,
    relations: RelationBasis,
    fcurves: OnceLock<Vec<FCurve>>,
}

static CONTEXTS: OnceLock<Mutex<BTreeMap<u8, Arc<MznContext>>>> = OnceLock::new();

/// Fetch (or build and cache) the context for `n`.
pub fn context(n: u8) -> Result<Arc<MznContext>> {
    if !(4..=MAX_POINTS).contains(&n) {
        return Err(Error::AmbientOutOfRange {
            n,
            min: 4,
            max: MAX_POINTS,
        });
    }
    let map = CONTEXTS.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(ctx) = map.lock().unwrap().get(&n) {
        return Ok(ctx.clone());
    }
    let built = Arc::new(MznContext::build(n)?);
    Ok(map.lock().unwrap().entry(n).or_insert(built).clone())
}

impl MznContext {
    fn build(n: u8) -> Result<Self> {
        let boundary = enumerate_boundary(n)?;
        let mut position = vec![usize::MAX; 1 << (n - 1)];
        for (idx, s) in boundary.iter().enumerate() {
            position[s.mask() as usize] = idx;
        }
        let relations = RelationBasis::build(n, &boundary, &position);
        Ok(MznContext {
            n,
            boundary,
            position,
            relations,
            fcurves: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn boundary(&self) -> &[SubsetIndex] {
        &self.boundary
    }

    pub fn num_boundary(&self) -> usize {
        self.boundary.len()
    }

    /// Position of a label in the boundary order (any representative).
    pub fn index_of(&self, label: SubsetIndex) -> usize {
        self.position[label.mzn_canonical().mask() as usize]
    }

    pub fn relations(&self) -> &RelationBasis {
        &self.relations
    }

    /// All F-curves, enumerated on first use. Capped at
    /// `MAX_FCURVE_POINTS` marked points.
    pub fn fcurves(&self) -> Result<&[FCurve]> {
        if self.n > MAX_FCURVE_POINTS {
            return Err(Error::AmbientOutOfRange {
                n: self.n,
                min: 4,
                max: MAX_FCURVE_POINTS,
            });
        }
        if let Some(list) = self.fcurves.get() {
            return Ok(list);
        }
        let list = enumerate_fcurves(self.n)?;
        Ok(self.fcurves.get_or_init(|| list))
    }
}

/// Row-reduced basis of the relations between boundary classes.
///
/// Rows are in reduced row echelon form over the fixed boundary order;
/// each row represents the zero divisor class. Reducing a vector against
/// the basis eliminates every pivot coordinate, so equal classes reduce
/// to identical vectors.
pub struct RelationBasis {
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl RelationBasis {
    /// For every quadruple `i<j<k<l`, the classes separating `{i,j}` from
    /// `{k,l}` sum to the same divisor as those separating `{i,k}` from
    /// `{j,l}` and `{i,l}` from `{j,k}`; the differences span the relation
    /// space. Generation stops once the known rank `C(n,2) - n` is
    /// reached (remaining generators are dependent).
    fn build(n: u8, boundary: &[SubsetIndex], position: &[usize]) -> RelationBasis {
        let dim = boundary.len();
        let target = n as usize * (n as usize - 1) / 2 - n as usize;
        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(target);
        let mut pivots: Vec<usize> = Vec::with_capacity(target);

        let separating_row = |a: u8, b: u8, c: u8, d: u8| -> Vec<Q> {
            let mut row = vec![Q::zero(); dim];
            for s in boundary {
                let has = |x: u8| s.contains(x);
                if (has(a) && has(b) && !has(c) && !has(d))
                    || (!has(a) && !has(b) && has(c) && has(d))
                {
                    row[position[s.mask() as usize]] = Q::one();
                }
            }
            row
        };

        'quads: for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for l in k + 1..=n {
                        let base = separating_row(i, j, k, l);
                        for other in [separating_row(i, k, j, l), separating_row(i, l, j, k)] {
                            let mut cand: Vec<Q> = base
                                .iter()
                                .zip(&other)
                                .map(|(x, y)| x - y)
                                .collect();
                            reduce_in_place(&rows, &pivots, &mut cand);
                            if let Some(p) = cand.iter().position(|x| !x.is_zero()) {
                                let lead = cand[p].clone();
                                for x in cand.iter_mut() {
                                    if !x.is_zero() {
                                        *x = &*x / &lead;
                                    }
                                }
                                for row in rows.iter_mut() {
                                    if !row[p].is_zero() {
                                        let f = row[p].clone();
                                        for (x, y) in row.iter_mut().zip(&cand) {
                                            if !y.is_zero() {
                                                *x -= &f * y;
                                            }
                                        }
                                    }
                                }
                                let at = pivots.partition_point(|&q| q < p);
                                pivots.insert(at, p);
                                rows.insert(at, cand);
                                if rows.len() == target {
                                    break 'quads;
                                }
                            }
                        }
                    }
                }
            }
        }
        let free = (0..dim).filter(|i| !pivots.contains(i)).collect();
        RelationBasis { rows, pivots, free }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot coordinates: the reduced coordinate system of the class
    /// group.
    pub fn free_coords(&self) -> &[usize] {
        &self.free
    }

    /// Eliminate every pivot coordinate of `v` in place.
    pub fn reduce(&self, v: &mut [Q]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
}

fn reduce_in_place(rows: &[Vec<Q>], pivots: &[usize], v: &mut [Q]) {
    for (row, &p) in rows.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, y) in v.iter_mut().zip(row) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

/// A divisor class as an exact-rational vector over the boundary basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MznClass {
    n: u8,
    coeffs: Vec<Q>,
}

impl MznClass {
    pub fn zero(n: u8) -> Result<Self> {
        let ctx = context(n)?;
        Ok(MznClass {
            n,
            coeffs: vec![Q::zero(); ctx.num_boundary()],
        })
    }

    pub fn from_coeffs(n: u8, coeffs: Vec<Q>) -> Result<Self> {
        let ctx = context(n)?;
        if coeffs.len() != ctx.num_boundary() {
            return Err(Error::MalformedProgram(format!(
                "expected {} coefficients, got {}",
                ctx.num_boundary(),
                coeffs.len()
            )));
        }
        Ok(MznClass { n, coeffs })
    }

    /// The boundary generator `D_I` (any representative of the label).
    pub fn boundary(label: SubsetIndex) -> Result<Self> {
        let mut out = Self::zero(label.n())?;
        out.add_term(label, &Q::one())?;
        Ok(out)
    }

    /// Sum of all boundary generators.
    pub fn total_boundary(n: u8) -> Result<Self> {
        let ctx = context(n)?;
        Ok(MznClass {
            n,
            coeffs: vec![Q::one(); ctx.num_boundary()],
        })
    }

    /// Sum of the boundary labels whose smaller side has `j` elements.
    pub fn boundary_by_min_side(n: u8, j: u8) -> Result<Self> {
        let ctx = context(n)?;
        let mut out = Self::zero(n)?;
        for (idx, s) in ctx.boundary().iter().enumerate() {
            let size = s.size().min(n - s.size());
            if size == j {
                out.coeffs[idx] = Q::one();
            }
        }
        Ok(out)
    }

    /// The cotangent-line class at the i-th point, written over boundary
    /// generators: the sum of labels with `i` on one side and the two
    /// smallest other indices on the other.
    pub fn psi(i: u8, n: u8) -> Result<Self> {
        let ctx = context(n)?;
        if i < 1 || i > n {
            return Err(Error::IndexOutOfRange { n, index: i });
        }
        let mut aux = (1..=n).filter(|&x| x != i);
        let j = aux.next().unwrap();
        let k = aux.next().unwrap();
        let mut out = Self::zero(n)?;
        for (idx, s) in ctx.boundary().iter().enumerate() {
            if (s.contains(i) && !s.contains(j) && !s.contains(k))
                || (!s.contains(i) && s.contains(j) && s.contains(k))
            {
                out.coeffs[idx] = Q::one();
            }
        }
        Ok(out)
    }

    pub fn psi_total(n: u8) -> Result<Self> {
        let mut out = Self::zero(n)?;
        for i in 1..=n {
            out = &out + &Self::psi(i, n)?;
        }
        Ok(out)
    }

    /// The canonical class: `-2 D + sum_i psi_i`.
    pub fn canonical_k(n: u8) -> Result<Self> {
        let d = Self::total_boundary(n)?;
        Ok(&Self::psi_total(n)? - &d.scaled(&q_int(2)))
    }

    /// The kappa class `pi_*(c_1^2(omega))`; in genus zero it is minus
    /// the total boundary.
    pub fn kappa(n: u8) -> Result<Self> {
        Ok(-&Self::total_boundary(n)?)
    }

    /// The log divisor `K + sum_i a_i psi_i` of a weight datum.
    pub fn delta(weights: &WeightDatum) -> Result<Self> {
        let n = weights.n();
        let mut out = Self::canonical_k(n)?;
        for i in 1..=n {
            out = &out + &Self::psi(i, n)?.scaled(weights.weight(i));
        }
        Ok(out)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, label: SubsetIndex) -> Result<&Q> {
        if label.n() != self.n {
            return Err(Error::AmbientMismatch {
                left: label.n(),
                right: self.n,
            });
        }
        let ctx = context(self.n)?;
        Ok(&self.coeffs[ctx.index_of(label)])
    }

    pub fn add_term(&mut self, label: SubsetIndex, coef: &Q) -> Result<()> {
        if label.n() != self.n {
            return Err(Error::AmbientMismatch {
                left: label.n(),
                right: self.n,
            });
        }
        let ctx = context(self.n)?;
        let idx = ctx.index_of(label);
        self.coeffs[idx] += coef;
        Ok(())
    }

    pub fn scaled(&self, c: &Q) -> Self {
        MznClass {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Deterministic reduced representative modulo the relation basis.
    pub fn canonical_form(&self) -> Self {
        let ctx = context(self.n).expect("context exists for a constructed class");
        let mut coeffs = self.coeffs.clone();
        ctx.relations().reduce(&mut coeffs);
        MznClass { n: self.n, coeffs }
    }

    pub fn is_zero_class(&self) -> bool {
        self.canonical_form().coeffs.iter().all(|x| x.is_zero())
    }

    /// Equality as divisor classes.
    pub fn eq_class(&self, other: &Self) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok((self - other).is_zero_class())
    }

    /// Intersection number with a vital curve: `-1` for each block label,
    /// `+1` for each splitting of the blocks into two pairs.
    pub fn pair_fcurve(&self, curve: &FCurve) -> Result<Q> {
        if curve.n() != self.n {
            return Err(Error::AmbientMismatch {
                left: curve.n(),
                right: self.n,
            });
        }
        let ctx = context(self.n)?;
        let n = self.n;
        let coeff_of = |mask: u32| -> &Q {
            let canonical = if mask & (1 << (n - 1)) != 0 {
                !mask & ((1 << n) - 1)
            } else {
                mask
            };
            &self.coeffs[ctx.position[canonical as usize]]
        };
        let blocks = curve.block_masks();
        let mut total = Q::zero();
        for b in blocks {
            let size = b.count_ones() as u8;
            if (2..=n - 2).contains(&size) {
                total -= coeff_of(b);
            }
        }
        for other in 1..4 {
            total += coeff_of(blocks[0] | blocks[other]);
        }
        Ok(total)
    }

    /// Pair against every F-curve; report the minimum, a minimizing
    /// witness, and the curves pairing to zero.
    pub fn fnef(&self) -> Result<FnefVerdict> {
        let ctx = context(self.n)?;
        let curves = ctx.fcurves()?;
        let values: Vec<Q> = if curves.len() > 4096 {
            use rayon::prelude::*;
            curves
                .par_iter()
                .map(|f| self.pair_fcurve(f).expect("same n"))
                .collect()
        } else {
            curves
                .iter()
                .map(|f| self.pair_fcurve(f).expect("same n"))
                .collect()
        };
        let mut min_value = values[0].clone();
        let mut witness = curves[0];
        let mut zero_set = Vec::new();
        for (f, v) in curves.iter().zip(&values) {
            if v < &min_value {
                min_value = v.clone();
                witness = *f;
            }
            if v.is_zero() {
                zero_set.push(*f);
            }
        }
        Ok(FnefVerdict {
            is_fnef: !min_value.is_negative(),
            min_value,
            witness: Some(witness),
            zero_set,
        })
    }
}

fn assert_same_n(a: &MznClass, b: &MznClass) {
    assert_eq!(a.n, b.n, "mixed ambient sizes in class arithmetic");
}

impl Add for &MznClass {
    type Output = MznClass;
    fn add(self, rhs: &MznClass) -> MznClass {
        assert_same_n(self, rhs);
        MznClass {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl Sub for &MznClass {
    type Output = MznClass;
    fn sub(self, rhs: &MznClass) -> MznClass {
        assert_same_n(self, rhs);
        MznClass {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

impl Neg for &MznClass {
    type Output = MznClass;
    fn neg(self) -> MznClass {
        MznClass {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

/// Outcome of pairing a class against every vital curve.
#[derive(Clone, Debug)]
pub struct FnefVerdict {
    pub is_fnef: bool,
    pub min_value: Q,
    pub witness: Option<FCurve>,
    pub zero_set: Vec<FCurve>,
}

/// Nonzero terms of a class, rendered for reports and failure dumps.
pub fn render_class(x: &MznClass) -> String {
    let ctx = context(x.n()).expect("context exists");
    let terms: Vec<String> = ctx
        .boundary()
        .iter()
        .zip(x.coeffs())
        .filter(|(_, c)| !c.is_zero())
        .map(|(s, c)| format!("{}*D{}", crate::rational::format_q(c), s))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

//! Divisor classes on weighted models: boundary classification, the
//! reduction-morphism calculus (push-forward and pull-back), restriction
//! to nodal boundaries and coincidence strata, and identity checks for
//! the pushed log divisor.
//!
//! A [`HassettClass`] is stored over the generators `psi_i`, nodal `D_I`
//! and sectional `D_{i,j}`; the kappa and canonical classes are derived,
//! never stored. Equality of classes is decided upstairs: pull both sides
//! back to the n-pointed space and compare canonical forms.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinat::{
    coincidence_sets, enumerate_boundary, induced_weights_boundary, induced_weights_collapse,
    BoundarySplit, SubsetIndex, WeightDatum,
};
use crate::mzn::MznClass;
use crate::rational::{format_q, q_int, Q};
use crate::{Error, Result};

/// How a boundary label survives on the weighted model.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    /// Both sides weigh more than 1: the label stays a node locus.
    Nodal,
    /// The light side is a pair of total weight <= 1: locus of coincident
    /// sections.
    Sectional,
    /// The light side has >= 3 elements of total weight <= 1: the label
    /// is collapsed by the reduction morphism.
    Contracted,
}

/// Classify a boundary label for a weight datum.
pub fn classify_boundary(weights: &WeightDatum, label: SubsetIndex) -> Result<BoundaryKind> {
    let light = label.weight_canonical(weights)?;
    if weights.subset_weight(light) > Q::one() {
        Ok(BoundaryKind::Nodal)
    } else if light.size() == 2 {
        Ok(BoundaryKind::Sectional)
    } else {
        Ok(BoundaryKind::Contracted)
    }
}

/// All nodal labels, as weight-canonical representatives in ascending
/// bitmask order. Empty for a 3-point (zero-dimensional) space.
pub fn nodal_labels(weights: &WeightDatum) -> Vec<SubsetIndex> {
    let n = weights.n();
    if n < 4 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s in enumerate_boundary(n).expect("n >= 4") {
        let light = s.weight_canonical(weights).expect("same n");
        if weights.subset_weight(light) > Q::one() {
            out.push(light);
        }
    }
    out.sort();
    out
}

/// All sectional pairs `i < j` with `a_i + a_j <= 1`.
pub fn sectional_pairs(weights: &WeightDatum) -> Vec<(u8, u8)> {
    let n = weights.n();
    if n < 4 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if weights.pair_is_light(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A divisor class on a weighted model, over the stored generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HassettClass {
    weights: WeightDatum,
    psi: Vec<Q>,
    nodal: BTreeMap<SubsetIndex, Q>,
    sec: BTreeMap<(u8, u8), Q>,
}

impl HassettClass {
    pub fn zero(weights: &WeightDatum) -> Self {
        HassettClass {
            weights: weights.clone(),
            psi: vec![Q::zero(); weights.n() as usize],
            nodal: BTreeMap::new(),
            sec: BTreeMap::new(),
        }
    }

    pub fn psi_gen(weights: &WeightDatum, i: u8) -> Result<Self> {
        if i < 1 || i > weights.n() {
            return Err(Error::IndexOutOfRange {
                n: weights.n(),
                index: i,
            });
        }
        let mut out = Self::zero(weights);
        out.psi[(i - 1) as usize] = Q::one();
        Ok(out)
    }

    /// The nodal generator `D_I`; errors unless the label is nodal.
    pub fn nodal_gen(weights: &WeightDatum, label: SubsetIndex) -> Result<Self> {
        let mut out = Self::zero(weights);
        out.add_nodal(label, &Q::one())?;
        Ok(out)
    }

    /// The sectional generator `D_{i,j}`; errors unless `a_i + a_j <= 1`.
    pub fn sec_gen(weights: &WeightDatum, i: u8, j: u8) -> Result<Self> {
        let mut out = Self::zero(weights);
        out.add_sec(i, j, &Q::one())?;
        Ok(out)
    }

    /// Sum of all nodal generators.
    pub fn total_nodal(weights: &WeightDatum) -> Self {
        let mut out = Self::zero(weights);
        for s in nodal_labels(weights) {
            out.nodal.insert(s, Q::one());
        }
        out
    }

    pub fn weights(&self) -> &WeightDatum {
        &self.weights
    }

    pub fn n(&self) -> u8 {
        self.weights.n()
    }

    pub fn psi_coeff(&self, i: u8) -> &Q {
        &self.psi[(i - 1) as usize]
    }

    pub fn psi_coeffs(&self) -> &[Q] {
        &self.psi
    }

    pub fn nodal_coeffs(&self) -> &BTreeMap<SubsetIndex, Q> {
        &self.nodal
    }

    pub fn sec_coeffs(&self) -> &BTreeMap<(u8, u8), Q> {
        &self.sec
    }

    pub fn add_psi(&mut self, i: u8, coef: &Q) {
        self.psi[(i - 1) as usize] += coef;
    }

    pub fn add_nodal(&mut self, label: SubsetIndex, coef: &Q) -> Result<()> {
        if classify_boundary(&self.weights, label)? != BoundaryKind::Nodal {
            return Err(Error::NotNodal(label.to_string()));
        }
        let key = label.weight_canonical(&self.weights)?;
        let entry = self.nodal.entry(key).or_insert_with(Q::zero);
        *entry += coef;
        if entry.is_zero() {
            self.nodal.remove(&key);
        }
        Ok(())
    }

    pub fn add_sec(&mut self, i: u8, j: u8, coef: &Q) -> Result<()> {
        let n = self.weights.n();
        for x in [i, j] {
            if x < 1 || x > n {
                return Err(Error::IndexOutOfRange { n, index: x });
            }
        }
        if i == j || !self.weights.pair_is_light(i, j) {
            return Err(Error::ContractedLabel(format!("{{{i},{j}}}")));
        }
        let key = (i.min(j), i.max(j));
        let entry = self.sec.entry(key).or_insert_with(Q::zero);
        *entry += coef;
        if entry.is_zero() {
            self.sec.remove(&key);
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for x in out.psi.iter_mut() {
            *x *= c;
        }
        out.nodal.retain(|_, v| {
            *v *= c;
            !v.is_zero()
        });
        out.sec.retain(|_, v| {
            *v *= c;
            !v.is_zero()
        });
        out
    }

    pub fn is_coordinate_zero(&self) -> bool {
        self.psi.iter().all(|x| x.is_zero()) && self.nodal.is_empty() && self.sec.is_empty()
    }

    /// Equality as divisor classes, decided by pulling back upstairs.
    pub fn eq_class(&self, other: &Self) -> Result<bool> {
        hassett_eq(self, other)
    }
}

fn merge(into: &mut HassettClass, from: &HassettClass, sign: i64) {
    let s = q_int(sign);
    for (i, x) in from.psi.iter().enumerate() {
        into.psi[i] += &s * x;
    }
    for (k, v) in &from.nodal {
        let entry = into.nodal.entry(*k).or_insert_with(Q::zero);
        *entry += &s * v;
        if entry.is_zero() {
            into.nodal.remove(k);
        }
    }
    for (k, v) in &from.sec {
        let entry = into.sec.entry(*k).or_insert_with(Q::zero);
        *entry += &s * v;
        if entry.is_zero() {
            into.sec.remove(k);
        }
    }
}

impl Add for &HassettClass {
    type Output = HassettClass;
    fn add(self, rhs: &HassettClass) -> HassettClass {
        assert_eq!(
            self.weights, rhs.weights,
            "mixed weight data in class arithmetic"
        );
        let mut out = self.clone();
        merge(&mut out, rhs, 1);
        out
    }
}

impl Sub for &HassettClass {
    type Output = HassettClass;
    fn sub(self, rhs: &HassettClass) -> HassettClass {
        assert_eq!(
            self.weights, rhs.weights,
            "mixed weight data in class arithmetic"
        );
        let mut out = self.clone();
        merge(&mut out, rhs, -1);
        out
    }
}

impl Neg for &HassettClass {
    type Output = HassettClass;
    fn neg(self) -> HassettClass {
        self.scaled(&q_int(-1))
    }
}

/// Push a boundary-basis class down the reduction morphism: contracted
/// labels die, every other label keeps its name.
pub fn pushforward(weights: &WeightDatum, class: &MznClass) -> Result<HassettClass> {
    if weights.n() != class.n() {
        return Err(Error::AmbientMismatch {
            left: weights.n(),
            right: class.n(),
        });
    }
    let ctx = crate::mzn::context(class.n())?;
    let mut out = HassettClass::zero(weights);
    for (label, coef) in ctx.boundary().iter().zip(class.coeffs()) {
        if coef.is_zero() {
            continue;
        }
        match classify_boundary(weights, *label)? {
            BoundaryKind::Contracted => {}
            BoundaryKind::Nodal => out.add_nodal(*label, coef)?,
            BoundaryKind::Sectional => {
                let light = label.weight_canonical(weights)?;
                let m = light.members();
                out.add_sec(m[0], m[1], coef)?;
            }
        }
    }
    Ok(out)
}

/// Push-forward of a cotangent-line class: `psi_i` plus the sectional
/// generators through `i`.
pub fn push_psi(weights: &WeightDatum, i: u8) -> Result<HassettClass> {
    let mut out = HassettClass::psi_gen(weights, i)?;
    for j in 1..=weights.n() {
        if j != i && weights.pair_is_light(i, j) {
            out.add_sec(i, j, &Q::one())?;
        }
    }
    Ok(out)
}

/// Pull a class back upstairs: nodal generators keep their name,
/// sectional `D_{i,j}` gains the light supersets of `{i,j}`, and `psi_i`
/// loses the light labels through `i`. Returned in canonical form.
pub fn pullback(weights: &WeightDatum, class: &HassettClass) -> Result<MznClass> {
    if weights != class.weights() {
        return Err(Error::WeightsMismatch);
    }
    let n = weights.n();
    if n < 4 {
        return Err(Error::AmbientOutOfRange { n, min: 4, max: 16 });
    }
    let light = coincidence_sets(weights);
    let mut out = MznClass::zero(n)?;
    for (i, coef) in class.psi_coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let i = i as u8 + 1;
        out = &out + &MznClass::psi(i, n)?.scaled(coef);
        for s in &light {
            if s.contains(i) {
                out.add_term(*s, &-coef.clone())?;
            }
        }
    }
    for (label, coef) in class.nodal_coeffs() {
        out.add_term(*label, coef)?;
    }
    for (&(i, j), coef) in class.sec_coeffs() {
        let pair = SubsetIndex::new(&[i, j], n)?;
        out.add_term(pair, coef)?;
        for s in &light {
            if pair.is_strict_subset_of(s) {
                out.add_term(*s, coef)?;
            }
        }
    }
    Ok(out.canonical_form())
}

/// Class equality on the weighted model, tested upstairs. Classes on a
/// 3-point space are all trivial.
pub fn hassett_eq(a: &HassettClass, b: &HassettClass) -> Result<bool> {
    if a.weights() != b.weights() {
        return Err(Error::WeightsMismatch);
    }
    if a.n() < 4 {
        return Ok(true);
    }
    let pa = pullback(a.weights(), a)?;
    let pb = pullback(b.weights(), b)?;
    pa.eq_class(&pb)
}

/// The canonical class of the weighted model: `-2 D_nod + sum_i psi_i`.
pub fn canonical_k_hassett(weights: &WeightDatum) -> HassettClass {
    let mut out = HassettClass::total_nodal(weights).scaled(&q_int(-2));
    for i in 1..=weights.n() {
        out.add_psi(i, &Q::one());
    }
    out
}

/// The pushed log divisor:
/// `-2 D_nod + sum_i (1 + a_i) psi_i + sum (a_i + a_j) D_{i,j}`.
pub fn pushed_delta(weights: &WeightDatum) -> HassettClass {
    let mut out = HassettClass::total_nodal(weights).scaled(&q_int(-2));
    for i in 1..=weights.n() {
        out.add_psi(i, &(Q::one() + weights.weight(i)));
    }
    for (i, j) in sectional_pairs(weights) {
        let w = weights.weight(i) + weights.weight(j);
        out.add_sec(i, j, &w).expect("pair is light");
    }
    out
}

/// The pull-back of the pushed log divisor, written upstairs:
/// `-2 D + sum_i (1 + a_i) psi_i + sum_{I in C} (|I|-2)(w_I - 1) D_I`,
/// in canonical form.
pub fn pullpush_delta(weights: &WeightDatum) -> Result<MznClass> {
    let n = weights.n();
    let mut out = MznClass::total_boundary(n)?.scaled(&q_int(-2));
    for i in 1..=n {
        out = &out + &MznClass::psi(i, n)?.scaled(&(Q::one() + weights.weight(i)));
    }
    for s in coincidence_sets(weights) {
        let c = q_int(s.size() as i64 - 2) * (weights.subset_weight(s) - Q::one());
        out.add_term(s, &c)?;
    }
    Ok(out.canonical_form())
}

/// The effective discrepancy `sum_{I in C} (|I|-2)(1 - w_I) D_I`,
/// supported on contracted labels. Returned as the raw boundary vector so
/// the support is visible.
pub fn difference_delta(weights: &WeightDatum) -> Result<MznClass> {
    let n = weights.n();
    let mut out = MznClass::zero(n)?;
    for s in coincidence_sets(weights) {
        let c = q_int(s.size() as i64 - 2) * (Q::one() - weights.subset_weight(s));
        out.add_term(s, &c)?;
    }
    Ok(out)
}

/// Restriction of a class to the two factors of a nodal boundary.
#[derive(Clone, Debug)]
pub struct BoundaryRestriction {
    pub split: BoundarySplit,
    pub on_side: HassettClass,
    pub on_co_side: HassettClass,
}

/// Restrict a class to the nodal boundary `D_I`. The self-restriction
/// rule sends `D_I` to `-(psi_p, psi_q)` on the factors; see
/// [`self_restriction_sign_check`] for the consistency argument pinning
/// the sign.
pub fn restrict_boundary(
    weights: &WeightDatum,
    label: SubsetIndex,
    class: &HassettClass,
) -> Result<BoundaryRestriction> {
    restrict_boundary_with_sign(weights, label, class, -1)
}

fn restrict_boundary_with_sign(
    weights: &WeightDatum,
    label: SubsetIndex,
    class: &HassettClass,
    self_sign: i64,
) -> Result<BoundaryRestriction> {
    if weights != class.weights() {
        return Err(Error::WeightsMismatch);
    }
    let split = induced_weights_boundary(weights, label)?;
    let co_label = label.complement();
    let side_pos = |i: u8| -> Option<u8> {
        split
            .members
            .iter()
            .position(|&m| m == i)
            .map(|p| p as u8 + 1)
    };
    let co_pos = |i: u8| -> Option<u8> {
        split
            .co_members
            .iter()
            .position(|&m| m == i)
            .map(|p| p as u8 + 1)
    };
    let mut on_side = HassettClass::zero(&split.side);
    let mut on_co_side = HassettClass::zero(&split.co_side);

    for (i, coef) in class.psi_coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let i = i as u8 + 1;
        if let Some(p) = side_pos(i) {
            on_side.add_psi(p, coef);
        } else {
            on_co_side.add_psi(co_pos(i).expect("i in one side"), coef);
        }
    }

    for (key, coef) in class.nodal_coeffs() {
        if key.mask() == label.mask() || key.mask() == co_label.mask() {
            // Self-restriction: normal-bundle degree on each factor.
            let s = q_int(self_sign) * coef;
            on_side.add_psi(split.node_index, &s);
            on_co_side.add_psi(split.co_node_index, &s);
            continue;
        }
        // The side of {J, J^c} contained in I (or I^c), if any.
        let candidates = [*key, key.complement()];
        let mut placed = false;
        for j in candidates {
            if j.is_strict_subset_of(&label) {
                let members: Vec<u8> = j.members().iter().map(|&m| side_pos(m).unwrap()).collect();
                let child = SubsetIndex::new(&members, split.side.n())?;
                on_side.add_nodal(child, coef)?;
                placed = true;
                break;
            }
            if j.is_strict_subset_of(&co_label) {
                let members: Vec<u8> = j.members().iter().map(|&m| co_pos(m).unwrap()).collect();
                let child = SubsetIndex::new(&members, split.co_side.n())?;
                on_co_side.add_nodal(child, coef)?;
                placed = true;
                break;
            }
        }
        let _ = placed; // labels meeting both sides restrict to zero
    }

    for (&(i, j), coef) in class.sec_coeffs() {
        match (side_pos(i), side_pos(j)) {
            (Some(p), Some(q)) => on_side.add_sec(p, q, coef)?,
            (None, None) => {
                on_co_side.add_sec(co_pos(i).unwrap(), co_pos(j).unwrap(), coef)?
            }
            _ => {}
        }
    }

    Ok(BoundaryRestriction {
        split,
        on_side,
        on_co_side,
    })
}

/// Pull a class back along the coincidence-collapse morphism for a
/// maximal light cluster `J`. The nodal part must be a uniform multiple
/// of the total nodal boundary; the per-label rule is not defined.
pub fn collapse_pullback(
    weights: &WeightDatum,
    cluster: SubsetIndex,
    class: &HassettClass,
) -> Result<HassettClass> {
    if weights != class.weights() {
        return Err(Error::WeightsMismatch);
    }
    let col = induced_weights_collapse(weights, cluster)?;
    let labels = nodal_labels(weights);
    let uniform = match labels.first() {
        None => Q::zero(),
        Some(first) => {
            let v = class.nodal.get(first).cloned().unwrap_or_else(Q::zero);
            for l in &labels {
                let c = class.nodal.get(l).cloned().unwrap_or_else(Q::zero);
                if c != v {
                    return Err(Error::UnsupportedNodalPart);
                }
            }
            v
        }
    };

    let child_pos = |i: u8| -> Option<u8> {
        col.kept.iter().position(|&m| m == i).map(|p| p as u8 + 1)
    };
    let p = col.merged_index;
    let mut out = HassettClass::total_nodal(&col.child).scaled(&uniform);

    for (i, coef) in class.psi_coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let i = i as u8 + 1;
        out.add_psi(child_pos(i).unwrap_or(p), coef);
    }

    let w_cluster = weights.subset_weight(cluster);
    for (&(i, j), coef) in class.sec_coeffs() {
        match (child_pos(i), child_pos(j)) {
            (Some(ci), Some(cj)) => out.add_sec(ci, cj, coef)?,
            (None, None) => out.add_psi(p, &-coef.clone()),
            (first, _) => {
                let outside = first.unwrap_or_else(|| child_pos(j).unwrap());
                // The merged pair survives only if it is still light; a
                // heavy pair has empty coincidence locus downstairs.
                if col.child.weight(outside) + &w_cluster <= Q::one() {
                    out.add_sec(outside, p, coef)?;
                }
            }
        }
    }
    Ok(out)
}

/// Report of one identity check, with rendered sides kept on failure.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityCheck {
    pub fn pass(name: &str) -> Self {
        IdentityCheck {
            name: name.to_string(),
            pass: true,
            detail: None,
        }
    }

    pub fn fail(name: &str, detail: String) -> Self {
        IdentityCheck {
            name: name.to_string(),
            pass: false,
            detail: Some(detail),
        }
    }

    pub fn from_bool(name: &str, pass: bool, detail: &str) -> Self {
        if pass {
            Self::pass(name)
        } else {
            Self::fail(name, detail.to_string())
        }
    }
}

/// Check that restricting the pushed log divisor to a nodal boundary
/// yields the pushed log divisors of the two factors.
pub fn check_boundary_restriction_split(
    weights: &WeightDatum,
    label: SubsetIndex,
) -> Result<IdentityCheck> {
    let name = format!("boundary-splitting {label}");
    let restricted = restrict_boundary(weights, label, &pushed_delta(weights))?;
    let side_ok = hassett_eq(&restricted.on_side, &pushed_delta(&restricted.split.side))?;
    let co_ok = hassett_eq(&restricted.on_co_side, &pushed_delta(&restricted.split.co_side))?;
    if side_ok && co_ok {
        Ok(IdentityCheck::pass(&name))
    } else {
        Ok(IdentityCheck::fail(
            &name,
            format!(
                "side factor agrees: {side_ok}; complement factor agrees: {co_ok}; weights {:?}",
                weights.weights()
            ),
        ))
    }
}

/// Check that pulling the pushed log divisor back along a coincidence
/// collapse matches the child's pushed log divisor plus the excess term
/// `(|J|-1)((1-w_J) psi_p + sum a_j D_{p,j})` (sectional terms only).
pub fn check_collapse_compatibility(
    weights: &WeightDatum,
    cluster: SubsetIndex,
) -> Result<IdentityCheck> {
    let name = format!("collapse-compatibility {cluster}");
    let lhs = collapse_pullback(weights, cluster, &pushed_delta(weights))?;
    let col = induced_weights_collapse(weights, cluster)?;
    let p = col.merged_index;
    let w_j = weights.subset_weight(cluster);
    let excess = q_int(cluster.size() as i64 - 1);

    let mut rhs = pushed_delta(&col.child);
    rhs.add_psi(p, &(&excess * (Q::one() - &w_j)));
    for (t, &parent) in col.kept.iter().enumerate() {
        let child_idx = t as u8 + 1;
        if col.child.weight(child_idx) + &w_j <= Q::one() {
            rhs.add_sec(child_idx, p, &(&excess * weights.weight(parent)))?;
        }
    }

    if hassett_eq(&lhs, &rhs)? {
        Ok(IdentityCheck::pass(&name))
    } else {
        Ok(IdentityCheck::fail(
            &name,
            format!(
                "lhs {} vs rhs {} for weights {:?}",
                render_hassett(&lhs),
                render_hassett(&rhs),
                weights.weights()
            ),
        ))
    }
}

/// Self-restriction sign consistency for a nodal label: restricting the
/// total nodal boundary must agree with restricting kappa via the two
/// derived rules. The negative sign passes; the positive sign must fail
/// whenever a factor has a nontrivial class group.
#[derive(Clone, Debug, Serialize)]
pub struct SignCheckReport {
    pub label: Vec<u8>,
    pub negative_rule_consistent: bool,
    pub positive_rule_consistent: bool,
}

pub fn self_restriction_sign_check(
    weights: &WeightDatum,
    label: SubsetIndex,
) -> Result<SignCheckReport> {
    let minus_dnod = -&HassettClass::total_nodal(weights);
    // kappa route: eta*(kappa) = (kappa + psi_p, kappa + psi_q) with
    // kappa = -D_nod on each factor.
    let split = induced_weights_boundary(weights, label)?;
    let mut expected_side = -&HassettClass::total_nodal(&split.side);
    expected_side.add_psi(split.node_index, &Q::one());
    let mut expected_co = -&HassettClass::total_nodal(&split.co_side);
    expected_co.add_psi(split.co_node_index, &Q::one());

    let mut agree = [false; 2];
    for (k, sign) in [(-1i64), 1].into_iter().enumerate() {
        let restricted = restrict_boundary_with_sign(weights, label, &minus_dnod, sign)?;
        agree[k] = hassett_eq(&restricted.on_side, &expected_side)?
            && hassett_eq(&restricted.on_co_side, &expected_co)?;
    }
    Ok(SignCheckReport {
        label: label.members(),
        negative_rule_consistent: agree[0],
        positive_rule_consistent: agree[1],
    })
}

/// Nonzero terms rendered for reports and failure dumps.
pub fn render_hassett(class: &HassettClass) -> String {
    let mut terms = Vec::new();
    for (i, c) in class.psi_coeffs().iter().enumerate() {
        if !c.is_zero() {
            terms.push(format!("{}*psi_{}", format_q(c), i + 1));
        }
    }
    for (s, c) in class.nodal_coeffs() {
        terms.push(format!("{}*D{}", format_q(c), s));
    }
    for ((i, j), c) in class.sec_coeffs() {
        terms.push(format!("{}*D{{{i},{j}}}", format_q(c)));
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::maximal_light_subsets;
    use crate::rational::q;
    use num_traits::Signed;

    fn wd(spec: &[(i64, i64)]) -> WeightDatum {
        WeightDatum::new(spec.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
    }

    fn label(members: &[u8], n: u8) -> SubsetIndex {
        SubsetIndex::new(members, n).unwrap()
    }

    #[test]
    fn classification_examples() {
        let a = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        assert_eq!(
            classify_boundary(&a, label(&[4, 5], 5)).unwrap(),
            BoundaryKind::Sectional
        );
        assert_eq!(
            classify_boundary(&a, label(&[1, 2], 5)).unwrap(),
            BoundaryKind::Contracted
        );
        let ones = WeightDatum::unit(5).unwrap();
        for s in enumerate_boundary(5).unwrap() {
            assert_eq!(classify_boundary(&ones, s).unwrap(), BoundaryKind::Nodal);
        }
    }

    #[test]
    fn census_counts() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let mut counts = [0usize; 3];
        for s in enumerate_boundary(5).unwrap() {
            match classify_boundary(&a, s).unwrap() {
                BoundaryKind::Nodal => counts[0] += 1,
                BoundaryKind::Sectional => counts[1] += 1,
                BoundaryKind::Contracted => counts[2] += 1,
            }
        }
        assert_eq!(counts, [9, 1, 0]);
        assert_eq!(nodal_labels(&a).len(), 9);
    }

    #[test]
    fn pushforward_examples() {
        let a = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        let contracted = MznClass::boundary(label(&[3, 4, 5], 5)).unwrap();
        assert!(pushforward(&a, &contracted).unwrap().is_coordinate_zero());

        let b = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let d45 = MznClass::boundary(label(&[4, 5], 5)).unwrap();
        let pushed = pushforward(&b, &d45).unwrap();
        assert_eq!(pushed.sec_coeffs().get(&(4, 5)), Some(&Q::one()));
        assert!(pushed.nodal_coeffs().is_empty());

        let ones = WeightDatum::unit(5).unwrap();
        for s in enumerate_boundary(5).unwrap() {
            let g = MznClass::boundary(s).unwrap();
            let pushed = pushforward(&ones, &g).unwrap();
            assert_eq!(pushed.nodal_coeffs().len(), 1);
        }
    }

    #[test]
    fn push_psi_examples() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let p4 = push_psi(&a, 4).unwrap();
        assert_eq!(p4.psi_coeff(4), &Q::one());
        assert_eq!(p4.sec_coeffs().get(&(4, 5)), Some(&Q::one()));
        assert_eq!(p4.sec_coeffs().len(), 1);

        let p1 = push_psi(&a, 1).unwrap();
        assert!(p1.sec_coeffs().is_empty());

        let ones = WeightDatum::unit(5).unwrap();
        let p = push_psi(&ones, 3).unwrap();
        assert!(p.sec_coeffs().is_empty());
        assert_eq!(p.psi_coeff(3), &Q::one());
    }

    #[test]
    fn pullback_examples() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let psi4 = HassettClass::psi_gen(&a, 4).unwrap();
        let lhs = pullback(&a, &psi4).unwrap();
        let mut rhs = MznClass::psi(4, 5).unwrap();
        rhs.add_term(label(&[4, 5], 5), &q_int(-1)).unwrap();
        assert!(lhs.eq_class(&rhs).unwrap());

        let b = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        let d45 = HassettClass::sec_gen(&b, 4, 5).unwrap();
        let lhs = pullback(&b, &d45).unwrap();
        let mut rhs = MznClass::boundary(label(&[4, 5], 5)).unwrap();
        rhs.add_term(label(&[3, 4, 5], 5), &Q::one()).unwrap();
        assert!(lhs.eq_class(&rhs).unwrap());

        // weights (1,..,1): the pullback is the identity on generators.
        let ones = WeightDatum::unit(5).unwrap();
        for s in enumerate_boundary(5).unwrap() {
            let g = HassettClass::nodal_gen(&ones, s).unwrap();
            assert!(pullback(&ones, &g)
                .unwrap()
                .eq_class(&MznClass::boundary(s).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn roundtrip_push_pull_is_identity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [5u8, 6] {
            for _ in 0..5 {
                let a = crate::oracle::sample_weights(n, &mut rng);
                for i in 1..=n {
                    let g = HassettClass::psi_gen(&a, i).unwrap();
                    let rt = pushforward(&a, &pullback(&a, &g).unwrap()).unwrap();
                    assert!(hassett_eq(&rt, &g).unwrap());
                }
                for s in nodal_labels(&a) {
                    let g = HassettClass::nodal_gen(&a, s).unwrap();
                    let rt = pushforward(&a, &pullback(&a, &g).unwrap()).unwrap();
                    assert!(hassett_eq(&rt, &g).unwrap());
                }
                for (i, j) in sectional_pairs(&a) {
                    let g = HassettClass::sec_gen(&a, i, j).unwrap();
                    let rt = pushforward(&a, &pullback(&a, &g).unwrap()).unwrap();
                    assert!(hassett_eq(&rt, &g).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_class_routes_agree() {
        // Route one: -2 D_nod + sum psi_i. Route two: push the boundary
        // expression of the canonical class through the reduction rules.
        // Route three: push 13/12 kappa - 11/12 D + psi.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in [5u8, 6] {
            for _ in 0..4 {
                let a = crate::oracle::sample_weights(n, &mut rng);
                let direct = canonical_k_hassett(&a);
                let pushed = pushforward(&a, &MznClass::canonical_k(n).unwrap()).unwrap();
                assert!(hassett_eq(&direct, &pushed).unwrap());

                let kappa = MznClass::kappa(n).unwrap();
                let d = MznClass::total_boundary(n).unwrap();
                let psi = MznClass::psi_total(n).unwrap();
                let mumford =
                    &(&kappa.scaled(&q(13, 12)) - &d.scaled(&q(11, 12))) + &psi;
                let pushed2 = pushforward(&a, &mumford).unwrap();
                assert!(hassett_eq(&direct, &pushed2).unwrap());
            }
        }

        // With unit weights it pulls back to the canonical class upstairs.
        let ones = WeightDatum::unit(5).unwrap();
        let k = canonical_k_hassett(&ones);
        assert!(pullback(&ones, &k)
            .unwrap()
            .eq_class(&MznClass::canonical_k(5).unwrap())
            .unwrap());
    }

    #[test]
    fn pushed_delta_example() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let p = pushed_delta(&a);
        for i in 1..=3u8 {
            assert_eq!(p.psi_coeff(i), &q_int(2));
        }
        for i in 4..=5u8 {
            assert_eq!(p.psi_coeff(i), &q(5, 4));
        }
        assert_eq!(p.sec_coeffs().get(&(4, 5)), Some(&q(1, 2)));
        assert_eq!(p.nodal_coeffs().len(), 9);
        assert!(p.nodal_coeffs().values().all(|c| c == &q_int(-2)));
    }

    #[test]
    fn pushed_delta_matches_generatorwise_push() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [5u8, 6] {
            for _ in 0..5 {
                let a = crate::oracle::sample_weights(n, &mut rng);
                let direct = pushed_delta(&a);
                let route = pushforward(&a, &MznClass::delta(&a).unwrap()).unwrap();
                assert!(hassett_eq(&direct, &route).unwrap());
            }
        }
    }

    #[test]
    fn pullpush_examples() {
        let ones = WeightDatum::unit(5).unwrap();
        assert!(pullpush_delta(&ones)
            .unwrap()
            .eq_class(&MznClass::delta(&ones).unwrap())
            .unwrap());

        // Only a pair in C: the correction coefficient |I|-2 vanishes.
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        assert!(pullpush_delta(&a)
            .unwrap()
            .eq_class(&MznClass::delta(&a).unwrap())
            .unwrap());

        let b = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        let lhs = pullpush_delta(&b).unwrap();
        let rhs = pullback(&b, &pushed_delta(&b)).unwrap();
        assert!(lhs.eq_class(&rhs).unwrap());
    }

    #[test]
    fn difference_examples() {
        let b = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        let d = difference_delta(&b).unwrap();
        let mut expected = MznClass::zero(5).unwrap();
        expected
            .add_term(label(&[3, 4, 5], 5), &q(1, 4))
            .unwrap();
        assert_eq!(d, expected);

        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        assert!(difference_delta(&a).unwrap().coeffs().iter().all(|c| c.is_zero()));

        // delta - pullpush = difference, and coefficients are >= 0.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..6 {
            let a = crate::oracle::sample_weights(6, &mut rng);
            let diff = difference_delta(&a).unwrap();
            assert!(diff.coeffs().iter().all(|c| !c.is_negative()));
            let lhs = &MznClass::delta(&a).unwrap() - &pullpush_delta(&a).unwrap();
            assert!(lhs.eq_class(&diff).unwrap());
        }
    }

    #[test]
    fn restriction_examples() {
        let ones = WeightDatum::unit(5).unwrap();
        let i = label(&[1, 2], 5);
        let psi3 = HassettClass::psi_gen(&ones, 3).unwrap();
        let r = restrict_boundary(&ones, i, &psi3).unwrap();
        assert!(r.on_side.is_coordinate_zero());
        // 3 is the first member of {3,4,5}.
        assert_eq!(r.on_co_side.psi_coeff(1), &Q::one());

        let ones6 = WeightDatum::unit(6).unwrap();
        let i6 = label(&[1, 2], 6);
        let d34 = HassettClass::nodal_gen(&ones6, label(&[3, 4], 6)).unwrap();
        let r = restrict_boundary(&ones6, i6, &d34).unwrap();
        assert!(r.on_side.is_coordinate_zero());
        let keys: Vec<Vec<u8>> = r.on_co_side.nodal_coeffs().keys().map(|s| s.members()).collect();
        assert_eq!(keys, vec![vec![1, 2]]); // {3,4} reindexed inside {3,4,5,6}+q

        // A label meeting both sides dies.
        let d13 = HassettClass::nodal_gen(&ones6, label(&[1, 3], 6)).unwrap();
        let r = restrict_boundary(&ones6, i6, &d13).unwrap();
        assert!(r.on_side.is_coordinate_zero() && r.on_co_side.is_coordinate_zero());
    }

    #[test]
    fn boundary_splitting_identity() {
        let ones = WeightDatum::unit(6).unwrap();
        let check =
            check_boundary_restriction_split(&ones, label(&[1, 2, 3], 6)).unwrap();
        assert!(check.pass, "{:?}", check.detail);

        // First factor is a point.
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let check = check_boundary_restriction_split(&a, label(&[1, 2], 5)).unwrap();
        assert!(check.pass, "{:?}", check.detail);

        for s in nodal_labels(&ones) {
            let check = check_boundary_restriction_split(&ones, s).unwrap();
            assert!(check.pass, "label {s}");
        }
    }

    #[test]
    fn collapse_examples() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let j = label(&[4, 5], 5);

        let psi5 = HassettClass::psi_gen(&a, 5).unwrap();
        let out = collapse_pullback(&a, j, &psi5).unwrap();
        assert_eq!(out.psi_coeff(4), &Q::one()); // p = 4

        let d45 = HassettClass::sec_gen(&a, 4, 5).unwrap();
        let out = collapse_pullback(&a, j, &d45).unwrap();
        assert_eq!(out.psi_coeff(4), &q_int(-1));
        assert!(out.sec_coeffs().is_empty());

        let dnod = HassettClass::total_nodal(&a).scaled(&q_int(-2));
        let out = collapse_pullback(&a, j, &dnod).unwrap();
        assert_eq!(out.nodal_coeffs().len(), nodal_labels(&out.weights).len());
        assert!(out.nodal_coeffs().values().all(|c| c == &q_int(-2)));

        // Non-uniform nodal part is rejected.
        let lone = HassettClass::nodal_gen(&a, label(&[1, 2], 5)).unwrap();
        assert!(matches!(
            collapse_pullback(&a, j, &lone),
            Err(Error::UnsupportedNodalPart)
        ));
    }

    #[test]
    fn collapse_drops_heavy_merged_pairs() {
        // a_1 + a_3 <= 1 upstairs but a_3 + w_J > 1 downstairs: the pulled
        // class must drop the pair instead of inventing a heavy generator.
        let a = wd(&[(1, 2), (1, 2), (1, 2), (1, 1), (1, 1)]);
        let j = label(&[1, 2], 5);
        let d13 = HassettClass::sec_gen(&a, 1, 3).unwrap();
        let out = collapse_pullback(&a, j, &d13).unwrap();
        assert!(out.is_coordinate_zero());
    }

    #[test]
    fn collapse_compatibility_identity() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let check = check_collapse_compatibility(&a, label(&[4, 5], 5)).unwrap();
        assert!(check.pass, "{:?}", check.detail);

        // Mixed lightness across the cluster boundary.
        let b = wd(&[(1, 2), (1, 2), (1, 2), (1, 1), (1, 1)]);
        let check = check_collapse_compatibility(&b, label(&[1, 2], 5)).unwrap();
        assert!(check.pass, "{:?}", check.detail);

        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for n in [5u8, 6] {
            for _ in 0..6 {
                let a = crate::oracle::sample_weights(n, &mut rng);
                for j in maximal_light_subsets(&a) {
                    let check = check_collapse_compatibility(&a, j).unwrap();
                    assert!(check.pass, "weights {:?} cluster {j}", a.weights());
                }
            }
        }
    }

    #[test]
    fn sign_check_separates_the_rules() {
        for n in [5u8, 6] {
            let ones = WeightDatum::unit(n).unwrap();
            for s in nodal_labels(&ones) {
                let r = self_restriction_sign_check(&ones, s).unwrap();
                assert!(r.negative_rule_consistent, "n = {n}, label {s}");
                assert!(!r.positive_rule_consistent, "n = {n}, label {s}");
            }
        }
    }

    #[test]
    fn hassett_eq_trivial_cases() {
        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (1, 4)]);
        let y = pushed_delta(&a);
        assert!(hassett_eq(&y, &y).unwrap());
        let other = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        assert!(matches!(
            hassett_eq(&y, &pushed_delta(&other)),
            Err(Error::WeightsMismatch)
        ));
    }
}

//! Log-canonicality by exact LP, chamber classification of weight data,
//! the destabilized-curve prediction, and the full analysis report.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::combinat::{coincidence_sets, enumerate_boundary, FCurve, SubsetIndex, WeightDatum};
use crate::hassett::{
    classify_boundary, difference_delta, pushed_delta, BoundaryKind, HassettClass,
};
use crate::lp::{lp_max, Cmp, LpOutcome, LpProblem, LpRow};
use crate::mzn::{context, FnefVerdict, MznClass};
use crate::rational::{format_q, q, q_int, Q};
use crate::{Error, Result};

/// Largest value of `r` in a log-canonical presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxR {
    Finite(Q),
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LcWitness {
    pub r: Q,
    /// One `c_I` per boundary label, in context order; all in `[0, 1]`.
    pub c: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct LogCanonicalVerdict {
    pub log_canonical: bool,
    pub max_r: Option<MaxR>,
    pub witness: Option<LcWitness>,
}

/// Decide whether `x` is numerically `r (K + sum c_I D_I)` for some
/// `r > 0` and `0 <= c_I <= 1`.
///
/// The search substitutes `t = 1/r`, `c_I = e_I/r`, turning the bounds
/// `0 <= e_I <= r` into the fixed box `0 <= c_I <= 1`:
/// `t x = K + sum c_I D_I` in reduced coordinates. A feasible point with
/// `t > 0` exists iff the original program attains `r > 0`; `max r`
/// is `1 / min t`, unbounded when `min t = 0`.
pub fn is_log_canonical(x: &MznClass) -> Result<LogCanonicalVerdict> {
    let n = x.n();
    let ctx = context(n)?;
    let xc = x.canonical_form();
    let kc = MznClass::canonical_k(n)?.canonical_form();
    let cols: Vec<MznClass> = ctx
        .boundary()
        .iter()
        .map(|s| Ok(MznClass::boundary(*s)?.canonical_form()))
        .collect::<Result<_>>()?;
    let nb = cols.len();

    let mut base = LpProblem::new(1 + nb);
    for j in 1..=nb {
        base.upper[j] = Some(Q::one());
    }
    for &f in ctx.relations().free_coords() {
        let mut coeffs = Vec::with_capacity(1 + nb);
        coeffs.push(xc.coeffs()[f].clone());
        for col in &cols {
            coeffs.push(-&col.coeffs()[f]);
        }
        base.rows.push(LpRow {
            coeffs,
            cmp: Cmp::Eq,
            rhs: kc.coeffs()[f].clone(),
        });
    }

    let mut max_t = base.clone();
    max_t.objective[0] = Q::one();
    let feasible_point = match lp_max(&max_t)? {
        LpOutcome::Infeasible => {
            return Ok(LogCanonicalVerdict {
                log_canonical: false,
                max_r: None,
                witness: None,
            })
        }
        LpOutcome::Bounded { value, solution } => {
            if value.is_zero() {
                // Every feasible point has t = 0: no finite r at all.
                return Ok(LogCanonicalVerdict {
                    log_canonical: false,
                    max_r: None,
                    witness: None,
                });
            }
            solution
        }
        LpOutcome::Unbounded { point, ray } => point
            .iter()
            .zip(&ray)
            .map(|(p, d)| p + d)
            .collect(),
    };

    let mut min_t = base;
    min_t.objective[0] = -Q::one();
    let (t_min, min_point) = match lp_max(&min_t)? {
        LpOutcome::Bounded { value, solution } => (-value, solution),
        other => {
            return Err(Error::MalformedProgram(format!(
                "minimizing t cannot be {other:?} on a nonempty box"
            )))
        }
    };

    let witness_from = |point: &[Q]| -> LcWitness {
        let t = &point[0];
        LcWitness {
            r: Q::one() / t,
            c: point[1..].to_vec(),
        }
    };
    Ok(if t_min.is_zero() {
        LogCanonicalVerdict {
            log_canonical: true,
            max_r: Some(MaxR::Unbounded),
            witness: Some(witness_from(&feasible_point)),
        }
    } else {
        LogCanonicalVerdict {
            log_canonical: true,
            max_r: Some(MaxR::Finite(Q::one() / &t_min)),
            witness: Some(witness_from(&min_point)),
        }
    })
}

/// F-curves predicted to be destabilized: the central component carries
/// total reduced weight `sum_i min(1, w_{N_i}) <= 2`. The prediction is
/// compared against the observed zero set of the pushed log divisor, not
/// assumed.
pub fn contracted_fcurves(weights: &WeightDatum) -> Result<Vec<FCurve>> {
    let n = weights.n();
    let ctx = context(n)?;
    let two = q_int(2);
    let one = Q::one();
    Ok(ctx
        .fcurves()?
        .iter()
        .filter(|f| {
            let total: Q = f
                .block_masks()
                .iter()
                .map(|&m| weights.mask_weight(m).min(one.clone()))
                .sum();
            total <= two
        })
        .copied()
        .collect())
}

/// Labels whose light side weighs exactly 1: the walls of the chamber
/// decomposition in weight space.
pub fn chamber_walls(weights: &WeightDatum) -> Result<Vec<SubsetIndex>> {
    let mut out = Vec::new();
    for s in enumerate_boundary(weights.n())? {
        let light = s.weight_canonical(weights)?;
        if weights.subset_weight(light).is_one() {
            out.push(light);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChamberParam {
    /// A symmetric weight `alpha`, converted via `beta = 2 alpha / (1 + alpha)`.
    Alpha,
    /// A boundary coefficient `beta`.
    Beta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChamberLabel {
    /// The symmetric weighted model with `eps_k` in the given interval.
    WeightedSymmetric { k: u32, eps_low: Q, eps_high: Q },
    /// The symmetric GIT quotient of the n-fold product of lines.
    GitSymmetric,
    /// Above every listed chamber.
    AboveListedChambers,
}

#[derive(Clone, Debug)]
pub struct SimpsonChamber {
    pub beta: Q,
    pub label: ChamberLabel,
}

/// Identify the chamber of a symmetric boundary coefficient:
/// `2/(m-k+2) < beta <= 2/(m-k+1)` maps to the k-th symmetric weighted
/// model (`eps_k` in `(1/(m+1-k), 1/(m-k)]`, `m = floor(n/2)`), and
/// `2/(n-1) < beta <= 2/(m+1)` to the symmetric GIT quotient.
pub fn simpson_chamber(n: u8, value: &Q, kind: ChamberParam) -> Result<SimpsonChamber> {
    if n < 4 {
        return Err(Error::AmbientOutOfRange { n, min: 4, max: 16 });
    }
    let one = Q::one();
    let beta = match kind {
        ChamberParam::Beta => value.clone(),
        ChamberParam::Alpha => {
            if value <= &q(2, n as i64) || value > &one {
                return Err(Error::ParamOutOfRange(format!(
                    "alpha = {} outside (2/{n}, 1]",
                    format_q(value)
                )));
            }
            q_int(2) * value / (&one + value)
        }
    };
    let m = i64::from(n / 2);
    if beta <= q(2, i64::from(n) - 1) || beta > one {
        return Err(Error::ParamOutOfRange(format!(
            "beta = {} outside (2/{}, 1]",
            format_q(&beta),
            n - 1
        )));
    }
    if beta <= q(2, m + 1) {
        return Ok(SimpsonChamber {
            beta,
            label: ChamberLabel::GitSymmetric,
        });
    }
    for k in 1..=m.saturating_sub(2) {
        if beta > q(2, m - k + 2) && beta <= q(2, m - k + 1) {
            return Ok(SimpsonChamber {
                beta,
                label: ChamberLabel::WeightedSymmetric {
                    k: k as u32,
                    eps_low: q(1, m + 1 - k),
                    eps_high: q(1, m - k),
                },
            });
        }
    }
    Ok(SimpsonChamber {
        beta,
        label: ChamberLabel::AboveListedChambers,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpsonChamberJson {
    pub beta: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_interval: Option<[String; 2]>,
}

impl SimpsonChamber {
    pub fn to_json(&self) -> SimpsonChamberJson {
        match &self.label {
            ChamberLabel::WeightedSymmetric { k, eps_low, eps_high } => SimpsonChamberJson {
                beta: format_q(&self.beta),
                kind: "weighted-symmetric".into(),
                k: Some(*k),
                epsilon_interval: Some([format_q(eps_low), format_q(eps_high)]),
            },
            ChamberLabel::GitSymmetric => SimpsonChamberJson {
                beta: format_q(&self.beta),
                kind: "git-symmetric".into(),
                k: None,
                epsilon_interval: None,
            },
            ChamberLabel::AboveListedChambers => SimpsonChamberJson {
                beta: format_q(&self.beta),
                kind: "above-listed-chambers".into(),
                k: None,
                epsilon_interval: None,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub nodal: usize,
    pub sectional: usize,
    pub contracted: usize,
    pub total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberSection {
    pub coincidence_set: Vec<Vec<u8>>,
    pub census: Census,
    pub walls: Vec<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<SymmetricSection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricSection {
    pub alpha: String,
    pub chamber: SimpsonChamberJson,
}

/// Coincidence data, boundary census, walls, and the symmetric chamber
/// when the weights are symmetric.
pub fn chamber_section(weights: &WeightDatum) -> Result<ChamberSection> {
    let mut census = Census {
        nodal: 0,
        sectional: 0,
        contracted: 0,
        total: 0,
    };
    for s in enumerate_boundary(weights.n())? {
        census.total += 1;
        match classify_boundary(weights, s)? {
            BoundaryKind::Nodal => census.nodal += 1,
            BoundaryKind::Sectional => census.sectional += 1,
            BoundaryKind::Contracted => census.contracted += 1,
        }
    }
    let symmetric = match weights.symmetric_value() {
        Some(alpha) => {
            let chamber = simpson_chamber(weights.n(), alpha, ChamberParam::Alpha)?;
            Some(SymmetricSection {
                alpha: format_q(alpha),
                chamber: chamber.to_json(),
            })
        }
        None => None,
    };
    Ok(ChamberSection {
        coincidence_set: coincidence_sets(weights)
            .iter()
            .map(|s| s.members())
            .collect(),
        census,
        walls: chamber_walls(weights)?
            .iter()
            .map(|s| s.members())
            .collect(),
        symmetric,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub set: Vec<u8>,
    pub coef: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HassettClassJson {
    pub psi: Vec<String>,
    pub nodal: Vec<TermJson>,
    pub sectional: Vec<TermJson>,
}

pub fn hassett_class_json(class: &HassettClass) -> HassettClassJson {
    HassettClassJson {
        psi: class.psi_coeffs().iter().map(format_q).collect(),
        nodal: class
            .nodal_coeffs()
            .iter()
            .map(|(s, c)| TermJson {
                set: s.members(),
                coef: format_q(c),
            })
            .collect(),
        sectional: class
            .sec_coeffs()
            .iter()
            .map(|(&(i, j), c)| TermJson {
                set: vec![i, j],
                coef: format_q(c),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MznClassJson {
    pub terms: Vec<TermJson>,
}

pub fn mzn_class_json(class: &MznClass) -> Result<MznClassJson> {
    let ctx = context(class.n())?;
    Ok(MznClassJson {
        terms: ctx
            .boundary()
            .iter()
            .zip(class.coeffs())
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| TermJson {
                set: s.members(),
                coef: format_q(c),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FnefJson {
    pub is_fnef: bool,
    pub min_value: String,
    pub witness: Option<Vec<Vec<u8>>>,
    pub zero_count: usize,
    pub zero_set: Vec<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

pub fn fnef_json(v: &FnefVerdict, n: u8) -> FnefJson {
    FnefJson {
        is_fnef: v.is_fnef,
        min_value: format_q(&v.min_value),
        witness: v.witness.map(|f| f.blocks().to_vec()),
        zero_count: v.zero_set.len(),
        zero_set: v.zero_set.iter().map(|f| f.blocks().to_vec()).collect(),
        caveat: (n >= 8).then(|| {
            "F-nefness is necessary for nefness; sufficiency is known only for n <= 7, \
             so read every verdict as F-nef / F-positive"
                .to_string()
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractedCurvesJson {
    pub count: usize,
    pub curves: Vec<Vec<Vec<u8>>>,
    pub matches_zero_set: bool,
    pub only_predicted: Vec<Vec<Vec<u8>>>,
    pub only_observed: Vec<Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferenceJson {
    pub terms: Vec<TermJson>,
    pub nonnegative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogCanonicalJson {
    pub log_canonical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_c: Option<Vec<TermJson>>,
}

pub fn log_canonical_json(v: &LogCanonicalVerdict, n: u8) -> Result<LogCanonicalJson> {
    let ctx = context(n)?;
    Ok(LogCanonicalJson {
        log_canonical: v.log_canonical,
        max_r: v.max_r.as_ref().map(|m| match m {
            MaxR::Finite(r) => format_q(r),
            MaxR::Unbounded => "unbounded".to_string(),
        }),
        witness_r: v.witness.as_ref().map(|w| format_q(&w.r)),
        witness_c: v.witness.as_ref().map(|w| {
            ctx.boundary()
                .iter()
                .zip(&w.c)
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| TermJson {
                    set: s.members(),
                    coef: format_q(c),
                })
                .collect()
        }),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub n: u8,
    pub weights: Vec<String>,
    pub chamber: ChamberSection,
    pub pushed_delta: HassettClassJson,
    pub pullpush_delta: MznClassJson,
    pub difference_delta: DifferenceJson,
    pub fnef: FnefJson,
    pub contracted_curves: ContractedCurvesJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_canonical: Option<LogCanonicalJson>,
}

/// The full pipeline for one weight datum: chamber data, the pushed log
/// divisor and its pull-back, the effective difference, the F-pairing
/// verdict with its zero set compared against the destabilized-curve
/// prediction, and (on request) the log-canonicality of the pull-back.
pub fn analyze(weights: &WeightDatum, check_log_canonical: bool) -> Result<AnalyzeReport> {
    let n = weights.n();
    if n < 4 {
        return Err(Error::AmbientOutOfRange { n, min: 4, max: 16 });
    }
    let pushed = pushed_delta(weights);
    let pullpush = crate::hassett::pullpush_delta(weights)?;
    let difference = difference_delta(weights)?;
    let nonnegative = difference.coeffs().iter().all(|c| !c.is_negative());

    let verdict = pullpush.fnef()?;
    let observed: BTreeSet<FCurve> = verdict.zero_set.iter().copied().collect();
    let predicted_list = contracted_fcurves(weights)?;
    let predicted: BTreeSet<FCurve> = predicted_list.iter().copied().collect();
    let only_predicted: Vec<_> = predicted
        .difference(&observed)
        .map(|f| f.blocks().to_vec())
        .collect();
    let only_observed: Vec<_> = observed
        .difference(&predicted)
        .map(|f| f.blocks().to_vec())
        .collect();

    let log_canonical = if check_log_canonical {
        let v = is_log_canonical(&pullpush)?;
        Some(log_canonical_json(&v, n)?)
    } else {
        None
    };

    Ok(AnalyzeReport {
        n,
        weights: weights.weights().iter().map(format_q).collect(),
        chamber: chamber_section(weights)?,
        pushed_delta: hassett_class_json(&pushed),
        pullpush_delta: mzn_class_json(&pullpush)?,
        difference_delta: DifferenceJson {
            terms: mzn_class_json(&difference)?.terms,
            nonnegative,
        },
        fnef: fnef_json(&verdict, n),
        contracted_curves: ContractedCurvesJson {
            count: predicted_list.len(),
            curves: predicted_list.iter().map(|f| f.blocks().to_vec()).collect(),
            matches_zero_set: only_predicted.is_empty() && only_observed.is_empty(),
            only_predicted,
            only_observed,
        },
        log_canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::FCurve;
    use crate::rational::q;

    fn wd(spec: &[(i64, i64)]) -> WeightDatum {
        WeightDatum::new(spec.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
    }

    /// Rebuild `r (K + sum c_I D_I)` from a witness and compare classes.
    fn validate_witness(x: &MznClass, w: &LcWitness) {
        assert!(w.r.is_positive());
        let n = x.n();
        let ctx = context(n).unwrap();
        let mut rhs = MznClass::canonical_k(n).unwrap();
        for (s, c) in ctx.boundary().iter().zip(&w.c) {
            assert!(!c.is_negative() && c <= &Q::one(), "c out of [0,1]");
            rhs = &rhs + &MznClass::boundary(*s).unwrap().scaled(c);
        }
        assert!(x.eq_class(&rhs.scaled(&w.r)).unwrap());
    }

    #[test]
    fn boundary_multiples_of_k_plus_beta_d() {
        for beta in [q(0, 1), q(1, 3), q(1, 2), q(1, 1)] {
            let k = MznClass::canonical_k(5).unwrap();
            let d = MznClass::total_boundary(5).unwrap();
            let x = &k + &d.scaled(&beta);
            let v = is_log_canonical(&x).unwrap();
            assert!(v.log_canonical, "beta = {}", format_q(&beta));
            validate_witness(&x, v.witness.as_ref().unwrap());
        }
    }

    #[test]
    fn verdict_is_scale_invariant() {
        let a = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        let x = crate::hassett::pullpush_delta(&a).unwrap();
        let v1 = is_log_canonical(&x).unwrap();
        let v2 = is_log_canonical(&x.scaled(&q_int(2))).unwrap();
        assert_eq!(v1.log_canonical, v2.log_canonical);
        if let Some(w) = &v1.witness {
            validate_witness(&x, w);
        }
    }

    #[test]
    fn negative_boundary_is_log_canonical_with_zero_c() {
        // At five points the canonical class is -D/2, so -D = 2(K + 0.D).
        let d = MznClass::total_boundary(5).unwrap();
        let x = -&d;
        let v = is_log_canonical(&x).unwrap();
        assert!(v.log_canonical);
        validate_witness(&x, v.witness.as_ref().unwrap());
    }

    #[test]
    fn contracted_curve_examples() {
        let ones = WeightDatum::unit(5).unwrap();
        assert!(contracted_fcurves(&ones).unwrap().is_empty());

        let a = wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]);
        let predicted = contracted_fcurves(&a).unwrap();
        let f = FCurve::new(&[vec![1], vec![2], vec![3], vec![4, 5]], 5).unwrap();
        assert!(!predicted.contains(&f));
        let g = FCurve::new(&[vec![1], vec![2], vec![3, 4], vec![5]], 5).unwrap();
        assert!(!predicted.contains(&g));
        let h = FCurve::new(&[vec![1, 2], vec![3], vec![4], vec![5]], 5).unwrap();
        assert!(predicted.contains(&h));
    }

    #[test]
    fn zero_set_matches_prediction_on_examples() {
        for a in [
            WeightDatum::unit(5).unwrap(),
            wd(&[(1, 1), (1, 1), (1, 4), (1, 4), (1, 4)]),
            wd(&[(1, 1), (1, 1), (1, 3), (1, 3), (1, 3)]),
            wd(&[(1, 2), (1, 2), (1, 2), (1, 2), (1, 2)]),
        ] {
            let report = analyze(&a, false).unwrap();
            assert!(report.fnef.is_fnef);
            assert!(report.difference_delta.nonnegative);
            assert!(
                report.contracted_curves.matches_zero_set,
                "weights {:?}: only_predicted {:?}, only_observed {:?}",
                a.weights(),
                report.contracted_curves.only_predicted,
                report.contracted_curves.only_observed,
            );
        }
    }

    #[test]
    fn walls_examples() {
        let half = WeightDatum::symmetric(5, &q(1, 2)).unwrap();
        let walls = chamber_walls(&half).unwrap();
        assert_eq!(walls.len(), 10); // every pair weighs exactly 1

        assert!(chamber_walls(&WeightDatum::unit(5).unwrap())
            .unwrap()
            .is_empty());

        let a = wd(&[(1, 1), (1, 1), (1, 1), (1, 4), (3, 4)]);
        let walls: Vec<Vec<u8>> = chamber_walls(&a)
            .unwrap()
            .iter()
            .map(|s| s.members())
            .collect();
        assert_eq!(walls, vec![vec![4, 5]]);
    }

    #[test]
    fn simpson_chamber_examples() {
        // n=6, beta=3/5: the first symmetric chamber, eps in (1/3, 1/2].
        let c = simpson_chamber(6, &q(3, 5), ChamberParam::Beta).unwrap();
        assert_eq!(
            c.label,
            ChamberLabel::WeightedSymmetric {
                k: 1,
                eps_low: q(1, 3),
                eps_high: q(1, 2),
            }
        );

        // n=6, beta=1/2: the symmetric GIT chamber (2/5, 1/2].
        let c = simpson_chamber(6, &q(1, 2), ChamberParam::Beta).unwrap();
        assert_eq!(c.label, ChamberLabel::GitSymmetric);

        // alpha = 1/3 converts to beta = 1/2 (n = 7 so alpha > 2/n).
        let c = simpson_chamber(7, &q(1, 3), ChamberParam::Alpha).unwrap();
        assert_eq!(c.beta, q(1, 2));

        // beta above every listed chamber.
        let c = simpson_chamber(6, &q(9, 10), ChamberParam::Beta).unwrap();
        assert_eq!(c.label, ChamberLabel::AboveListedChambers);

        assert!(simpson_chamber(6, &q(1, 5), ChamberParam::Beta).is_err());
        assert!(simpson_chamber(6, &q(3, 2), ChamberParam::Beta).is_err());
        assert!(simpson_chamber(6, &q(1, 4), ChamberParam::Alpha).is_err());
    }

    #[test]
    fn census_sums_to_boundary_count() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for n in [5u8, 6, 7] {
            let a = crate::oracle::sample_weights(n, &mut rng);
            let section = chamber_section(&a).unwrap();
            let c = &section.census;
            assert_eq!(c.nodal + c.sectional + c.contracted, c.total);
            assert_eq!(c.total, (1 << (n - 1)) - n as usize - 1);
        }
    }

    #[test]
    fn analyze_symmetric_unit_weights() {
        let report = analyze(&WeightDatum::unit(5).unwrap(), true).unwrap();
        assert!(report.chamber.coincidence_set.is_empty());
        assert!(report.fnef.is_fnef);
        assert_eq!(report.fnef.min_value, "2");
        assert!(report.difference_delta.terms.is_empty());
        let lc = report.log_canonical.unwrap();
        assert!(lc.log_canonical);
    }
}

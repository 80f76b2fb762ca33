//! Independent brute-force verifiers for the divisor calculus: the class
//! group dimension, relation/F-curve orthogonality, the formal surface
//! factorization, and a randomized identity suite over the whole
//! push/pull pipeline. Every check here deliberately re-derives its data
//! through a different code path than the operation it validates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::combinat::{maximal_light_subsets, WeightDatum};
use crate::hassett::{
    check_boundary_restriction_split, check_collapse_compatibility, difference_delta,
    hassett_eq, nodal_labels, pullback, pullpush_delta, pushed_delta, pushforward,
    sectional_pairs, self_restriction_sign_check, HassettClass, IdentityCheck,
};
use crate::mzn::{context, MznClass};
use crate::rational::{format_q, q, q_int, Q};
use crate::Result;

/// Draw a weight datum with denominators at most 12, retrying until the
/// total exceeds 2.
pub fn sample_weights<R: Rng>(n: u8, rng: &mut R) -> WeightDatum {
    loop {
        let weights: Vec<Q> = (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=12i64);
                let k = rng.gen_range(1..=d);
                q(k, d)
            })
            .collect();
        if let Ok(a) = WeightDatum::new(weights) {
            return a;
        }
    }
}

/// A formal cycle on the universal surface: a rational combination of
/// `omega^2`, `omega.sigma_i`, `sigma_i^2` and `sigma_i.sigma_j`.
///
/// Normal form applies adjunction (`omega.sigma_i = -sigma_i^2`) and
/// kills `sigma_i.sigma_j` whenever `a_i + a_j > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCycle {
    n: u8,
    omega2: Q,
    omega_sigma: Vec<Q>,
    sigma2: Vec<Q>,
    cross: BTreeMap<(u8, u8), Q>,
}

impl SurfaceCycle {
    pub fn zero(n: u8) -> Self {
        SurfaceCycle {
            n,
            omega2: Q::zero(),
            omega_sigma: vec![Q::zero(); n as usize],
            sigma2: vec![Q::zero(); n as usize],
            cross: BTreeMap::new(),
        }
    }

    pub fn add_omega2(&mut self, c: &Q) {
        self.omega2 += c;
    }

    pub fn add_omega_sigma(&mut self, i: u8, c: &Q) {
        self.omega_sigma[(i - 1) as usize] += c;
    }

    pub fn add_sigma2(&mut self, i: u8, c: &Q) {
        self.sigma2[(i - 1) as usize] += c;
    }

    pub fn add_cross(&mut self, i: u8, j: u8, c: &Q) {
        assert_ne!(i, j);
        let key = (i.min(j), i.max(j));
        *self.cross.entry(key).or_insert_with(Q::zero) += c;
    }

    pub fn normal_form(&self, weights: &WeightDatum) -> SurfaceCycle {
        let mut out = self.clone();
        for i in 0..out.n as usize {
            if !out.omega_sigma[i].is_zero() {
                let c = std::mem::replace(&mut out.omega_sigma[i], Q::zero());
                out.sigma2[i] -= c;
            }
        }
        out.cross
            .retain(|&(i, j), c| weights.pair_is_light(i, j) && !c.is_zero());
        out
    }
}

/// A formal divisor `c_omega . omega + sum c_i sigma_i` on the universal
/// surface.
#[derive(Clone, Debug)]
pub struct SurfaceDivisor {
    pub omega: Q,
    pub sigma: Vec<Q>,
}

impl SurfaceDivisor {
    pub fn product(&self, other: &SurfaceDivisor) -> SurfaceCycle {
        let n = self.sigma.len() as u8;
        assert_eq!(other.sigma.len() as u8, n);
        let mut out = SurfaceCycle::zero(n);
        out.add_omega2(&(&self.omega * &other.omega));
        for i in 1..=n {
            let a = &self.sigma[(i - 1) as usize];
            let b = &other.sigma[(i - 1) as usize];
            out.add_omega_sigma(i, &(&self.omega * b + &other.omega * a));
            out.add_sigma2(i, &(a * b));
            for j in i + 1..=n {
                let c = a * &other.sigma[(j - 1) as usize]
                    + &self.sigma[(j - 1) as usize] * b;
                if !c.is_zero() {
                    out.add_cross(i, j, &c);
                }
            }
        }
        out
    }
}

/// The pushed log divisor admits a formal factorization on the universal
/// surface: expanding
/// `2 omega^2 + sum (1+a_i) omega.sigma_i + sum (a_i+a_j) sigma_i.sigma_j`
/// term by term must match the product
/// `(omega + sum a_i sigma_i) . (2 omega + sum sigma_i)` in normal form.
pub fn check_surface_factorization(weights: &WeightDatum) -> IdentityCheck {
    let n = weights.n();
    let one = Q::one();

    let mut direct = SurfaceCycle::zero(n);
    direct.add_omega2(&q_int(2));
    for i in 1..=n {
        direct.add_omega_sigma(i, &(&one + weights.weight(i)));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if weights.pair_is_light(i, j) {
                direct.add_cross(i, j, &(weights.weight(i) + weights.weight(j)));
            }
        }
    }

    let left = SurfaceDivisor {
        omega: one.clone(),
        sigma: weights.weights().to_vec(),
    };
    let right = SurfaceDivisor {
        omega: q_int(2),
        sigma: vec![one; n as usize],
    };
    let product = left.product(&right);

    if direct.normal_form(weights) == product.normal_form(weights) {
        IdentityCheck::pass("surface-factorization")
    } else {
        IdentityCheck::fail(
            "surface-factorization",
            format!("weights {:?}", render_weights(weights)),
        )
    }
}

/// Report of the class-group dimension check.
#[derive(Clone, Debug, Serialize)]
pub struct RankCheck {
    pub n: u8,
    pub num_boundary: usize,
    pub relation_rank: usize,
    pub ns_dim: usize,
    pub expected_ns_dim: usize,
    pub pass: bool,
}

/// Compute the class-group dimension from scratch — its own label
/// enumeration, its own relation rows, and a fraction-free integer
/// elimination — and compare with `2^(n-1) - C(n,2) - 1`.
pub fn check_ns_rank(n: u8) -> RankCheck {
    // Labels as sorted member lists over {1..n-1} (the n-free side).
    fn subsets(pool: &[u8], size: usize) -> Vec<Vec<u8>> {
        if size == 0 {
            return vec![Vec::new()];
        }
        if pool.len() < size {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (k, &first) in pool.iter().enumerate() {
            for mut tail in subsets(&pool[k + 1..], size - 1) {
                tail.insert(0, first);
                out.push(tail);
            }
        }
        out
    }
    let pool: Vec<u8> = (1..n).collect();
    let mut labels: Vec<Vec<u8>> = Vec::new();
    for size in 2..=(n - 2) as usize {
        labels.extend(subsets(&pool, size));
    }

    let separating = |a: u8, b: u8, c: u8, d: u8| -> Vec<BigInt> {
        let mut row = vec![BigInt::zero(); labels.len()];
        for (idx, label) in labels.iter().enumerate() {
            let has = |x: u8| label.contains(&x);
            if (has(a) && has(b) && !has(c) && !has(d))
                || (!has(a) && !has(b) && has(c) && has(d))
            {
                row[idx] = BigInt::one();
            }
        }
        row
    };

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    let base = separating(i, j, k, l);
                    for other in [separating(i, k, j, l), separating(i, l, j, k)] {
                        rows.push(
                            base.iter()
                                .zip(&other)
                                .map(|(x, y)| x - y)
                                .collect(),
                        );
                    }
                }
            }
        }
    }

    // Fraction-free (Bareiss) elimination over the integers.
    let cols = labels.len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for c in 0..cols {
                let v = (&row[c] * &pivot[col] - &f * &pivot[c]) / &prev;
                row[c] = v;
            }
        }
        prev = rows[rank][col].clone();
        rank += 1;
    }

    let expected = (1usize << (n - 1)) - (n as usize * (n as usize - 1) / 2) - 1;
    let ns_dim = labels.len() - rank;
    RankCheck {
        n,
        num_boundary: labels.len(),
        relation_rank: rank,
        ns_dim,
        expected_ns_dim: expected,
        pass: ns_dim == expected,
    }
}

/// Report of the exhaustive relation/F-curve orthogonality check.
#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityCheck {
    pub n: u8,
    pub relation_rows: usize,
    pub curves: usize,
    pub failures: usize,
    pub pass: bool,
}

/// Every relation row must pair to zero with every F-curve; this
/// cross-validates the pairing formula and the relation generators
/// against each other.
pub fn check_relations_fcurve_orthogonality(n: u8) -> Result<OrthogonalityCheck> {
    let ctx = context(n)?;
    let curves = ctx.fcurves()?;
    let mut failures = 0usize;
    let rows = ctx.relations().rows();
    for row in rows {
        let class = MznClass::from_coeffs(n, row.clone())?;
        for f in curves {
            if !class.pair_fcurve(f)?.is_zero() {
                failures += 1;
            }
        }
    }
    Ok(OrthogonalityCheck {
        n,
        relation_rows: rows.len(),
        curves: curves.len(),
        failures,
        pass: failures == 0,
    })
}

fn render_weights(weights: &WeightDatum) -> String {
    let parts: Vec<String> = weights.weights().iter().map(format_q).collect();
    format!("({})", parts.join(","))
}

/// The per-weight-datum identity suite.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub weights: Vec<String>,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

/// Run every two-route identity for one weight datum:
/// the generator-wise push against the closed-form pushed divisor, the
/// pull of the push against its closed form, the effective difference,
/// push-pull round trips on all generators, the self-restriction sign
/// consistency, the boundary splitting of the pushed divisor over every
/// nodal label, and the collapse compatibility over every maximal light
/// cluster.
pub fn run_pipeline(weights: &WeightDatum) -> Result<PipelineReport> {
    let n = weights.n();
    let mut checks: Vec<IdentityCheck> = Vec::new();
    let dump = render_weights(weights);

    let direct = pushed_delta(weights);
    let generatorwise = pushforward(weights, &MznClass::delta(weights)?)?;
    checks.push(IdentityCheck::from_bool(
        "pushforward-two-route",
        hassett_eq(&generatorwise, &direct)?,
        &dump,
    ));

    let pulled = pullback(weights, &direct)?;
    let closed = pullpush_delta(weights)?;
    checks.push(IdentityCheck::from_bool(
        "pullback-two-route",
        pulled.eq_class(&closed)?,
        &dump,
    ));

    let diff = difference_delta(weights)?;
    let diff_ok = diff.coeffs().iter().all(|c| !c.is_negative())
        && (&MznClass::delta(weights)? - &closed).eq_class(&diff)?;
    checks.push(IdentityCheck::from_bool(
        "difference-identity",
        diff_ok,
        &dump,
    ));

    let mut roundtrip_ok = true;
    for i in 1..=n {
        let g = HassettClass::psi_gen(weights, i)?;
        roundtrip_ok &= hassett_eq(&pushforward(weights, &pullback(weights, &g)?)?, &g)?;
    }
    for s in nodal_labels(weights) {
        let g = HassettClass::nodal_gen(weights, s)?;
        roundtrip_ok &= hassett_eq(&pushforward(weights, &pullback(weights, &g)?)?, &g)?;
    }
    for (i, j) in sectional_pairs(weights) {
        let g = HassettClass::sec_gen(weights, i, j)?;
        roundtrip_ok &= hassett_eq(&pushforward(weights, &pullback(weights, &g)?)?, &g)?;
    }
    checks.push(IdentityCheck::from_bool(
        "roundtrip-push-pull",
        roundtrip_ok,
        &dump,
    ));

    // The adopted negative self-restriction sign must be consistent; the
    // printed positive sign must be inconsistent whenever a factor has a
    // nontrivial class group (always at n >= 5).
    let mut sign_ok = true;
    for s in nodal_labels(weights) {
        let r = self_restriction_sign_check(weights, s)?;
        sign_ok &= r.negative_rule_consistent;
        if n >= 5 {
            sign_ok &= !r.positive_rule_consistent;
        }
    }
    checks.push(IdentityCheck::from_bool(
        "self-restriction-sign",
        sign_ok,
        &dump,
    ));

    let mut split_ok = true;
    let mut split_detail = dump.clone();
    for s in nodal_labels(weights) {
        let check = check_boundary_restriction_split(weights, s)?;
        if !check.pass {
            split_ok = false;
            split_detail = format!("{dump}: {}", check.detail.unwrap_or_default());
            break;
        }
    }
    checks.push(IdentityCheck::from_bool(
        "boundary-splitting",
        split_ok,
        &split_detail,
    ));

    let mut collapse_ok = true;
    let mut collapse_detail = dump.clone();
    for cluster in maximal_light_subsets(weights) {
        let check = check_collapse_compatibility(weights, cluster)?;
        if !check.pass {
            collapse_ok = false;
            collapse_detail = format!("{dump}: {}", check.detail.unwrap_or_default());
            break;
        }
    }
    checks.push(IdentityCheck::from_bool(
        "collapse-compatibility",
        collapse_ok,
        &collapse_detail,
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(PipelineReport {
        weights: weights.weights().iter().map(format_q).collect(),
        checks,
        pass,
    })
}

/// Configuration of the randomized verification suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub n: u8,
    pub samples: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub n: u8,
    pub samples: u32,
    pub seed: u64,
    pub checks: Vec<SuiteCheck>,
    pub all_pass: bool,
}

/// The full verification suite for one ambient size: dimension check
/// (n <= 8), relation/F-curve orthogonality (n <= 7), the surface
/// factorization and the pipeline identities on the unit weights plus
/// `samples` seeded random weight data. Failures carry the offending
/// weights for replay.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks: Vec<SuiteCheck> = Vec::new();

    if (4..=8).contains(&cfg.n) {
        let rank = check_ns_rank(cfg.n);
        checks.push(SuiteCheck {
            name: "neron-severi-rank".into(),
            pass: rank.pass,
            cases: 1,
            failures: if rank.pass {
                Vec::new()
            } else {
                vec![format!("dim {} expected {}", rank.ns_dim, rank.expected_ns_dim)]
            },
        });
    }

    if (4..=7).contains(&cfg.n) {
        let orth = check_relations_fcurve_orthogonality(cfg.n)?;
        checks.push(SuiteCheck {
            name: "relations-fcurve-orthogonality".into(),
            pass: orth.pass,
            cases: orth.relation_rows * orth.curves,
            failures: if orth.pass {
                Vec::new()
            } else {
                vec![format!("{} nonzero pairings", orth.failures)]
            },
        });
    }

    let mut weight_data = vec![WeightDatum::unit(cfg.n)?];
    for _ in 0..cfg.samples {
        weight_data.push(sample_weights(cfg.n, &mut rng));
    }

    let mut surface = SuiteCheck {
        name: "surface-factorization".into(),
        pass: true,
        cases: weight_data.len(),
        failures: Vec::new(),
    };
    for a in &weight_data {
        let check = check_surface_factorization(a);
        if !check.pass {
            surface.pass = false;
            surface.failures.push(check.detail.unwrap_or_default());
        }
    }
    checks.push(surface);

    let reports: Vec<PipelineReport> = {
        use rayon::prelude::*;
        weight_data
            .par_iter()
            .map(run_pipeline)
            .collect::<Result<_>>()?
    };
    let mut by_name: BTreeMap<String, SuiteCheck> = BTreeMap::new();
    for report in &reports {
        for check in &report.checks {
            let entry = by_name.entry(check.name.clone()).or_insert(SuiteCheck {
                name: check.name.clone(),
                pass: true,
                cases: 0,
                failures: Vec::new(),
            });
            entry.cases += 1;
            if !check.pass {
                entry.pass = false;
                entry
                    .failures
                    .push(check.detail.clone().unwrap_or_default());
            }
        }
    }
    checks.extend(by_name.into_values());

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        checks,
        all_pass,
    })
}

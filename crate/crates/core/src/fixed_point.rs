//! Exact fixed-point calculus for Hamiltonian circle actions on complex
//! projective space.
//!
//! Everything is symmetric-function arithmetic over the rationals: the
//! product-structure coefficients come from elementary symmetric polynomials
//! of the moment values, the averaged moment powers from complete
//! homogeneous ones, and three independent routes — the localization
//! relation, the fibre-integration recursion, and the Lagrange-denominator
//! sums — cross-check each other exactly.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, fmt_rat, pow_rat, Rat};
use crate::report::Report;

/// One fixed-point component: its moment value, its multiplicity
/// (`r_i + 1`), and optionally the equivariant Euler number at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub moment: Rat,
    pub multiplicity: usize,
    pub euler: Option<Rat>,
}

/// Fixed-point data for an action on projective `n`-space. The expanded
/// moment list `μ_1..μ_{n+1}` repeats each value by its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointData {
    n: usize,
    components: Vec<Component>,
}

impl FixedPointData {
    pub fn new(n: usize, components: Vec<Component>) -> Result<Self> {
        let total: usize = components.iter().map(|c| c.multiplicity).sum();
        if total != n + 1 {
            return Err(Error::EulerCharacteristicMismatch {
                expected: n + 1,
                got: total,
            });
        }
        for (i, c) in components.iter().enumerate() {
            if c.multiplicity == 0 {
                return Err(Error::Shape(format!("component {i} has multiplicity 0")));
            }
            if matches!(&c.euler, Some(e) if e.is_zero()) {
                return Err(Error::MissingEuler { component: i });
            }
        }
        Ok(FixedPointData { n, components })
    }

    /// Isolated fixed points: every multiplicity one, no Euler data.
    pub fn isolated(mu: &[Rat]) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Shape("need at least one moment value".into()));
        }
        Self::new(
            mu.len() - 1,
            mu.iter()
                .map(|m| Component {
                    moment: m.clone(),
                    multiplicity: 1,
                    euler: None,
                })
                .collect(),
        )
    }

    pub fn isolated_with_euler(mu: &[Rat], euler: &[Rat]) -> Result<Self> {
        if mu.len() != euler.len() {
            return Err(Error::Shape(format!(
                "{} moment values but {} Euler numbers",
                mu.len(),
                euler.len()
            )));
        }
        let mut data = Self::isolated(mu)?;
        for (c, e) in data.components.iter_mut().zip(euler) {
            c.euler = Some(e.clone());
        }
        // re-run the nonzero check
        Self::new(data.n, data.components)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `μ_1..μ_{n+1}` with multiplicity.
    pub fn expanded(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.n + 1);
        for c in &self.components {
            for _ in 0..c.multiplicity {
                out.push(c.moment.clone());
            }
        }
        out
    }

    /// All moment values pairwise distinct and all multiplicities one.
    pub fn is_isolated_distinct(&self) -> bool {
        let mu = self.expanded();
        for i in 0..mu.len() {
            for j in (i + 1)..mu.len() {
                if mu[i] == mu[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// `σ_i`, by brute-force enumeration of index subsets (this is the oracle
/// definition; nothing cleverer hides behind it).
pub fn elementary_symmetric(vals: &[Rat], i: usize) -> Rat {
    if i > vals.len() {
        return Rat::zero();
    }
    if i == 0 {
        return Rat::one();
    }
    fn recurse(vals: &[Rat], start: usize, remaining: usize, acc: &Rat, total: &mut Rat) {
        if remaining == 0 {
            *total += acc;
            return;
        }
        for k in start..=(vals.len() - remaining) {
            let next = acc * &vals[k];
            recurse(vals, k + 1, remaining - 1, &next, total);
        }
    }
    let mut total = Rat::zero();
    recurse(vals, 0, i, &Rat::one(), &mut total);
    total
}

/// `h_j`, by brute-force enumeration of degree-`j` monomials (multisets).
pub fn complete_homogeneous(vals: &[Rat], j: usize) -> Rat {
    if j == 0 {
        return Rat::one();
    }
    if vals.is_empty() {
        return Rat::zero();
    }
    fn recurse(vals: &[Rat], start: usize, remaining: usize, acc: &Rat, total: &mut Rat) {
        if remaining == 0 {
            *total += acc;
            return;
        }
        for k in start..vals.len() {
            let next = acc * &vals[k];
            recurse(vals, k, remaining - 1, &next, total);
        }
    }
    let mut total = Rat::zero();
    recurse(vals, 0, j, &Rat::one(), &mut total);
    total
}

/// The coefficients `c_1..c_{n+1}` of the ring relation
/// `w^{n+1} = Σ c_i w^{n+1-i} t^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector(pub Vec<Rat>);

impl CoefficientVector {
    pub fn c(&self, i: usize) -> Rat {
        assert!(i >= 1, "coefficients are indexed from 1");
        self.0.get(i - 1).cloned().unwrap_or_else(Rat::zero)
    }
}

/// `c_i = (-1)^{i+1} σ_i(μ_1..μ_{n+1})`, verified against the localization
/// relation: substituting `w -> μ_j t` into `w^{n+1} - Σ c_i w^{n+1-i} t^i`
/// must give exactly zero for every `j`.
pub fn coefficients_from_moments(data: &FixedPointData) -> Result<CoefficientVector> {
    let mu = data.expanded();
    let n = data.n();
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 1..=(n + 1) {
        let sign = if i % 2 == 1 { Rat::one() } else { -Rat::one() };
        coeffs.push(sign * elementary_symmetric(&mu, i));
    }
    let c = CoefficientVector(coeffs);
    for m in &mu {
        let mut value = pow_rat(m, n + 1);
        for i in 1..=(n + 1) {
            value -= c.c(i) * pow_rat(m, n + 1 - i);
        }
        if !value.is_zero() {
            return Err(Error::IdentityFailed {
                identity: "localization_vanishing".into(),
                witness: format!("moment value {}", fmt_rat(m)),
            });
        }
    }
    Ok(c)
}

/// Averaged moment power `H(μ^j) = h_j(μ) / binom(n+j, j)`.
pub fn averaged_power(data: &FixedPointData, j: usize) -> Rat {
    let mu = data.expanded();
    complete_homogeneous(&mu, j) / binomial(data.n() + j, j)
}

/// The Lagrange-denominator sum `Σ_i μ_i^e / Π_{k≠i}(μ_i - μ_k)`; needs
/// pairwise distinct values.
pub fn lagrange_sum(mu: &[Rat], exponent: usize) -> Result<Rat> {
    let mut total = Rat::zero();
    for i in 0..mu.len() {
        let mut denom = Rat::one();
        for k in 0..mu.len() {
            if k == i {
                continue;
            }
            let diff = &mu[i] - &mu[k];
            if diff.is_zero() {
                return Err(Error::RepeatedMomentValues);
            }
            denom *= diff;
        }
        total += pow_rat(&mu[i], exponent) / denom;
    }
    Ok(total)
}

/// `H(μ^j)` for `j = 0..=j_max`, computed through complete homogeneous
/// polynomials and cross-checked against the Lagrange sums — the two
/// evaluations must agree exactly for isolated distinct fixed points.
pub fn moment_powers(data: &FixedPointData, j_max: usize) -> Result<Vec<Rat>> {
    if !data.is_isolated_distinct() {
        return Err(Error::RepeatedMomentValues);
    }
    let mu = data.expanded();
    let n = data.n();
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let avg = averaged_power(data, j);
        let lagrange = lagrange_sum(&mu, n + j)?;
        let scaled = binomial(n + j, j) * &avg;
        if lagrange != scaled {
            return Err(Error::IdentityFailed {
                identity: "moment_power_duality".into(),
                witness: format!("power {j}"),
            });
        }
        out.push(avg);
    }
    Ok(out)
}

/// Verify the fibre-integration recursion in its symmetric-function form,
/// `h_{1+j} = Σ_i (-1)^{i+1} σ_i h_{1+j-i}`, for `0 <= j <= j_max`, plus
/// the two solved low-order instances.
pub fn recursion_check(data: &FixedPointData, j_max: usize) -> Vec<(String, bool)> {
    let mu = data.expanded();
    let n = data.n();
    let mut out = Vec::new();
    for j in 0..=j_max {
        let lhs = complete_homogeneous(&mu, 1 + j);
        let mut rhs = Rat::zero();
        for i in 1..=(1 + j).min(n + 1) {
            let sign = if i % 2 == 1 { Rat::one() } else { -Rat::one() };
            rhs += sign * elementary_symmetric(&mu, i) * complete_homogeneous(&mu, 1 + j - i);
        }
        out.push((format!("recursion_step_{j}"), lhs == rhs));
    }
    // c_1 = (n+1) H(mu)
    let c1 = elementary_symmetric(&mu, 1);
    let h_mu = averaged_power(data, 1);
    out.push((
        "first_coefficient_from_average".into(),
        c1 == Rat::from_integer((n as i64 + 1).into()) * &h_mu,
    ));
    // c_2 = binom(n+2, 2) H(mu^2) - (n+1)^2 H(mu)^2
    let c2 = -elementary_symmetric(&mu, 2);
    let rhs = binomial(n + 2, 2) * averaged_power(data, 2)
        - Rat::from_integer(((n as i64 + 1) * (n as i64 + 1)).into()) * &h_mu * &h_mu;
    out.push(("second_coefficient_from_averages".into(), c2 == rhs));
    out
}

/// Evaluate the integration formula `(1/ε_i) Π_{j≠i}(μ_i - μ_j)` at every
/// fixed point; all values must agree and the common value is the volume.
pub fn volume_from_data(data: &FixedPointData) -> Result<Rat> {
    if !data.is_isolated_distinct() {
        return Err(Error::RepeatedMomentValues);
    }
    let mu = data.expanded();
    let mut values = Vec::with_capacity(mu.len());
    for (i, comp) in data.components().iter().enumerate() {
        let eps = comp.euler.clone().ok_or(Error::MissingEuler { component: i })?;
        let mut prod = Rat::one();
        for (k, other) in mu.iter().enumerate() {
            if k == i {
                continue;
            }
            prod *= &comp.moment - other;
        }
        values.push(prod / eps);
    }
    let first = values[0].clone();
    if values.iter().any(|v| *v != first) {
        let list = values.iter().map(fmt_rat).collect::<Vec<_>>().join(", ");
        return Err(Error::InconsistentFixedPointData { values: list });
    }
    Ok(first)
}

/// Render `w^{n+1} = Σ c_i w^{n+1-i} t^i` with zero terms dropped.
pub fn relation_string(n: usize, coeffs: &CoefficientVector) -> String {
    let lhs = power_string("w", n + 1);
    let mut terms = Vec::new();
    for i in 1..=(n + 1) {
        let c = coeffs.c(i);
        if c.is_zero() {
            continue;
        }
        let mut factors = Vec::new();
        let negative = crate::rational::is_negative(&c);
        let abs = if negative { -c.clone() } else { c.clone() };
        if !abs.is_one() {
            factors.push(fmt_rat(&abs));
        }
        if n + 1 - i > 0 {
            factors.push(power_string("w", n + 1 - i));
        }
        factors.push(power_string("t", i));
        let rendered = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        };
        terms.push((negative, rendered));
    }
    if terms.is_empty() {
        return format!("{lhs} = 0");
    }
    let mut rhs = String::new();
    for (idx, (negative, text)) in terms.iter().enumerate() {
        if idx == 0 {
            if *negative {
                rhs.push('-');
            }
        } else {
            rhs.push_str(if *negative { " - " } else { " + " });
        }
        rhs.push_str(text);
    }
    format!("{lhs} = {rhs}")
}

fn power_string(base: &str, exp: usize) -> String {
    match exp {
        0 => "1".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{exp}"),
    }
}

/// Full ring-presentation report for a fixed-point datum: the relation, the
/// coefficient values, and every verification that applies (localization
/// vanishing, recursion, moment-power duality, volume constancy).
pub fn relation_report(data: &FixedPointData, j_max: usize) -> Result<Report> {
    let mut report = Report::new();
    report.begin("fixed-point-data");
    report.kv("n", &data.n().to_string());
    let mu = data.expanded();
    report.kv(
        "mu",
        &mu.iter().map(fmt_rat).collect::<Vec<_>>().join(","),
    );
    let have_euler = data.components().iter().all(|c| c.euler.is_some());
    if have_euler {
        let eps: Vec<String> = data
            .components()
            .iter()
            .map(|c| fmt_rat(c.euler.as_ref().unwrap()))
            .collect();
        report.kv("euler", &eps.join(","));
    }

    let coeffs = coefficients_from_moments(data)?;
    report.begin("ring-presentation");
    for (i, c) in coeffs.0.iter().enumerate() {
        report.kv(&format!("c{}", i + 1), &fmt_rat(c));
    }
    report.kv("relation", &relation_string(data.n(), &coeffs));

    report.begin("verification");
    report.check("localization_vanishing", true, None);
    for (name, ok) in recursion_check(data, j_max) {
        report.check(&name, ok, None);
    }
    if data.is_isolated_distinct() {
        let powers = moment_powers(data, j_max)?;
        report.check("moment_power_duality", true, None);
        for (j, value) in powers.iter().enumerate() {
            report.kv(&format!("H(mu^{j})"), &fmt_rat(value));
        }
        if have_euler {
            let volume = volume_from_data(data)?;
            report.check("volume_constancy", true, None);
            report.kv("volume", &fmt_rat(&volume));
        }
    } else {
        report.kv("moment_power_duality", "skipped (repeated moment values)");
    }
    Ok(report)
}

/// Everything the weighted projective-plane example pins down.
#[derive(Debug, Clone)]
pub struct Cp2Report {
    pub a: i64,
    pub b: i64,
    pub scale: Rat,
    pub mu: Vec<Rat>,
    pub euler: Vec<Rat>,
    pub volume: Rat,
    pub coeffs: CoefficientVector,
    pub relation: String,
}

/// The circle acting on the projective plane with weights `(0, a, b)`,
/// `0 < a < b`. The moment values are chosen mean-zero with overall scale
/// `s/3` and the volume comes out as `s^2` exactly; the closed forms for
/// `c_2` and `c_3` (including the factored form of `c_3`) are asserted
/// against the symmetric-function route.
pub fn cp2_weighted(a: i64, b: i64, s: &Rat) -> Result<Cp2Report> {
    if !(0 < a && a < b) {
        return Err(Error::InvalidWeights { a, b });
    }
    if s.is_zero() || crate::rational::is_negative(s) {
        return Err(Error::Parse("scale s must be a positive rational".into()));
    }
    let third = s / Rat::from_integer(3.into());
    let mu = vec![
        &third * Rat::from_integer((-(a + b)).into()),
        &third * Rat::from_integer((2 * a - b).into()),
        &third * Rat::from_integer((2 * b - a).into()),
    ];
    let euler = vec![
        Rat::from_integer((a * b).into()),
        Rat::from_integer((a * (a - b)).into()),
        Rat::from_integer((b * (b - a)).into()),
    ];
    let data = FixedPointData::isolated_with_euler(&mu, &euler)?;
    let volume = volume_from_data(&data)?;
    if volume != s * s {
        return Err(Error::IdentityFailed {
            identity: "volume_equals_scale_squared".into(),
            witness: fmt_rat(&volume),
        });
    }
    let coeffs = coefficients_from_moments(&data)?;
    let c1 = coeffs.c(1);
    let c2 = coeffs.c(2);
    let c3 = coeffs.c(3);
    if !c1.is_zero() {
        return Err(Error::IdentityFailed {
            identity: "mean_zero_first_coefficient".into(),
            witness: fmt_rat(&c1),
        });
    }
    let c2_closed = &volume / Rat::from_integer(3.into())
        * Rat::from_integer((a * a - a * b + b * b).into());
    if c2 != c2_closed {
        return Err(Error::IdentityFailed {
            identity: "c2_closed_form".into(),
            witness: fmt_rat(&c2),
        });
    }
    let c3_closed = &volume * s / Rat::from_integer(27.into())
        * Rat::from_integer((2 * a * a * a - 3 * a * a * b - 3 * a * b * b + 2 * b * b * b).into());
    if c3 != c3_closed {
        return Err(Error::IdentityFailed {
            identity: "c3_closed_form".into(),
            witness: fmt_rat(&c3),
        });
    }
    let c3_factored = -(&volume * s / Rat::from_integer(27.into()))
        * Rat::from_integer(((a + b) * (2 * a - b) * (2 * b - a)).into());
    if c3 != c3_factored {
        return Err(Error::IdentityFailed {
            identity: "c3_factored_form".into(),
            witness: fmt_rat(&c3),
        });
    }
    // the displayed averaged-power identities: 6 H(mu^2) = c2, 10 H(mu^3) = c3
    if Rat::from_integer(6.into()) * averaged_power(&data, 2) != c2
        || Rat::from_integer(10.into()) * averaged_power(&data, 3) != c3
    {
        return Err(Error::IdentityFailed {
            identity: "averaged_power_coefficients".into(),
            witness: format!("a={a} b={b}"),
        });
    }
    let relation = relation_string(2, &coeffs);
    Ok(Cp2Report {
        a,
        b,
        scale: s.clone(),
        mu,
        euler,
        volume,
        coeffs,
        relation,
    })
}

//! The two-variable linear program over the gap exponent `α` and the round
//! exponent `γ`, solved exactly by vertex enumeration in rational arithmetic.
//!
//! Constraints are kept in the form `a·α + b·γ ≤ rhs`. Two of them bound the
//! failure probability, two demand an advantage over the classical and the
//! repeated-GHZ strategies, and two are the sign constraints.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result, SymError};

/// Which rearrangement of the GHZ-advantage condition to impose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum GhzVariant {
    /// `α ≥ (2c − η)/3 + (q − 1/3)γ`.
    #[default]
    Record,
    /// `α ≥ (2c + 1 − η)/3 + (q + 1)γ/3`.
    Proof,
}

/// Problem data of the LP.
#[derive(Debug, Clone, PartialEq)]
pub struct LPInstance {
    /// Prior-precision exponent.
    pub c: BigRational,
    /// Time-step exponent.
    pub q: BigRational,
    /// Deletion-rate exponent.
    pub eta: BigRational,
    pub e1: BigRational,
    pub e2: BigRational,
    pub ghz: GhzVariant,
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a decimal (`0.1`, `-2`, `1.5e-1`) or fraction (`3/2`) exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || invalid(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| invalid(format!("non-finite value {x}")))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl LPInstance {
    /// Validates `c ≥ 0`, `q ≥ 1`, `η ∈ [0,1]`, `e₁, e₂ ≥ 0`.
    pub fn new(c: BigRational, q: BigRational, eta: BigRational, e1: BigRational, e2: BigRational) -> Result<Self> {
        if c.is_negative() || q < BigRational::one() || eta.is_negative() || eta > BigRational::one() {
            return Err(invalid("need c >= 0, q >= 1 and eta in [0, 1]"));
        }
        if e1.is_negative() || e2.is_negative() {
            return Err(invalid("error exponents must be non-negative"));
        }
        Ok(Self { c, q, eta, e1, e2, ghz: GhzVariant::Record })
    }

    /// Parses every field from decimal or fraction text.
    pub fn parse(c: &str, q: &str, eta: &str, e1: &str, e2: &str) -> Result<Self> {
        Self::new(
            parse_rational(c)?,
            parse_rational(q)?,
            parse_rational(eta)?,
            parse_rational(e1)?,
            parse_rational(e2)?,
        )
    }

    pub fn with_ghz_variant(mut self, ghz: GhzVariant) -> Self {
        self.ghz = ghz;
        self
    }
}

/// One half-plane `a·α + b·γ ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: &'static str,
    pub a: BigRational,
    pub b: BigRational,
    pub rhs: BigRational,
}

impl Constraint {
    /// `rhs − a·α − b·γ`; non-negative when satisfied.
    pub fn slack(&self, alpha: &BigRational, gamma: &BigRational) -> BigRational {
        &self.rhs - &self.a * alpha - &self.b * gamma
    }
}

/// All six constraints, the four named ones first.
pub fn constraints(inst: &LPInstance) -> Vec<Constraint> {
    let one = BigRational::one();
    let zero = BigRational::zero();
    let (c, q, eta) = (&inst.c, &inst.q, &inst.eta);
    let third = rat(1, 3);
    let ghz = match inst.ghz {
        GhzVariant::Record => Constraint {
            name: "ghz_strategy",
            a: -one.clone(),
            b: q - &third,
            rhs: -((rat(2, 1) * c - eta) / rat(3, 1)),
        },
        GhzVariant::Proof => Constraint {
            name: "ghz_strategy",
            a: -one.clone(),
            b: (q + &one) / rat(3, 1),
            rhs: -((rat(2, 1) * c + &one - eta) / rat(3, 1)),
        },
    };
    vec![
        Constraint { name: "error1", a: one.clone(), b: -(q - rat(1, 4)), rhs: c - &inst.e1 / rat(4, 1) },
        Constraint { name: "error2", a: one.clone(), b: one.clone(), rhs: &one - &inst.e2 },
        Constraint {
            name: "shot_noise",
            a: -one.clone(),
            b: q - &third,
            rhs: -(rat(2, 3) * c + rat(1, 2) - q / rat(3, 1)),
        },
        ghz,
        Constraint { name: "alpha_nonneg", a: -one.clone(), b: zero.clone(), rhs: zero.clone() },
        Constraint { name: "gamma_nonneg", a: zero.clone(), b: -one, rhs: zero },
    ]
}

/// `6α − 4c + (2 − 6q)γ`, the exponent of the expected Protocol 1 FI.
pub fn objective(inst: &LPInstance, alpha: &BigRational, gamma: &BigRational) -> BigRational {
    rat(6, 1) * alpha - rat(4, 1) * &inst.c + (rat(2, 1) - rat(6, 1) * &inst.q) * gamma
}

/// Slack of one named constraint at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSlack {
    pub name: &'static str,
    pub slack: f64,
    pub satisfied: bool,
}

/// Per-constraint report for one `(α, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub slacks: Vec<ConstraintSlack>,
    pub feasible: bool,
}

/// Exact membership test of `(α, γ)` in the feasible polytope.
pub fn polytope_membership_exact(inst: &LPInstance, alpha: &BigRational, gamma: &BigRational) -> Membership {
    let slacks: Vec<ConstraintSlack> = constraints(inst)
        .iter()
        .map(|k| {
            let s = k.slack(alpha, gamma);
            ConstraintSlack { name: k.name, slack: to_f64(&s), satisfied: !s.is_negative() }
        })
        .collect();
    let feasible = slacks.iter().all(|s| s.satisfied);
    Membership { slacks, feasible }
}

/// Membership test of a float point, converted exactly.
pub fn polytope_membership(inst: &LPInstance, alpha: f64, gamma: f64) -> Result<Membership> {
    Ok(polytope_membership_exact(inst, &rational_from_f64(alpha)?, &rational_from_f64(gamma)?))
}

/// Optimum of the LP with the polytope's vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub alpha: BigRational,
    pub gamma: BigRational,
    pub objective: BigRational,
    /// Feasible vertices in counter-clockwise order.
    pub vertices: Vec<(BigRational, BigRational)>,
}

impl LpSolution {
    pub fn alpha_f64(&self) -> f64 {
        to_f64(&self.alpha)
    }
    pub fn gamma_f64(&self) -> f64 {
        to_f64(&self.gamma)
    }
    pub fn objective_f64(&self) -> f64 {
        to_f64(&self.objective)
    }
}

/// Feasible vertices: pairwise line intersections satisfying every
/// constraint, deduplicated and sorted by angle around their centroid.
pub fn polytope_vertices(inst: &LPInstance) -> Vec<(BigRational, BigRational)> {
    let cons = constraints(inst);
    let mut verts: Vec<(BigRational, BigRational)> = Vec::new();
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let (p, q) = (&cons[i], &cons[j]);
            let det = &p.a * &q.b - &p.b * &q.a;
            if det.is_zero() {
                continue;
            }
            let alpha = (&p.rhs * &q.b - &p.b * &q.rhs) / &det;
            let gamma = (&p.a * &q.rhs - &p.rhs * &q.a) / &det;
            if cons.iter().all(|k| !k.slack(&alpha, &gamma).is_negative())
                && !verts.contains(&(alpha.clone(), gamma.clone()))
            {
                verts.push((alpha, gamma));
            }
        }
    }
    if verts.len() > 2 {
        let n = verts.len() as f64;
        let ca = verts.iter().map(|v| to_f64(&v.0)).sum::<f64>() / n;
        let cg = verts.iter().map(|v| to_f64(&v.1)).sum::<f64>() / n;
        verts.sort_by(|u, v| {
            let au = (to_f64(&u.1) - cg).atan2(to_f64(&u.0) - ca);
            let av = (to_f64(&v.1) - cg).atan2(to_f64(&v.0) - ca);
            au.total_cmp(&av)
        });
    }
    verts
}

/// Maximizes the objective over the polytope. The region is bounded (by
/// `error2` and the sign constraints), so the optimum sits at a vertex.
pub fn solve_lp(inst: &LPInstance) -> Result<LpSolution> {
    let vertices = polytope_vertices(inst);
    let best = vertices
        .iter()
        .max_by(|u, v| objective(inst, &u.0, &u.1).cmp(&objective(inst, &v.0, &v.1)))
        .cloned()
        .ok_or(SymError::Infeasible)?;
    Ok(LpSolution { objective: objective(inst, &best.0, &best.1), alpha: best.0, gamma: best.1, vertices })
}

/// Intersection of `error1` and `error2`:
/// `γ = (4 − 4c + e₁ − 4e₂)/(4q + 3)`, `α = (4c + 4q − 1 − e₁ − 4e₂q + e₂)/(4q + 3)`.
pub fn closed_form(inst: &LPInstance) -> (BigRational, BigRational) {
    let (c, q, e1, e2) = (&inst.c, &inst.q, &inst.e1, &inst.e2);
    let four = rat(4, 1);
    let den = &four * q + rat(3, 1);
    let gamma = (&four - &four * c + e1 - &four * e2) / &den;
    let alpha = (&four * c + &four * q - rat(1, 1) - e1 - &four * e2 * q + e2) / &den;
    (alpha, gamma)
}

/// `log_N E[F_P2]` at the closed-form optimum: the Protocol 1 exponent plus
/// `(q − 1)γ` from the `r^{q−1}` repetitions.
pub fn p2_exponent(inst: &LPInstance) -> BigRational {
    let (alpha, gamma) = closed_form(inst);
    objective(inst, &alpha, &gamma) + (&inst.q - rat(1, 1)) * &gamma
}

/// Simplified display `(4c(q+2) − 5e₁(q+1) − 2(e₂−1)(2q−1))/(4q+3)`.
pub fn p2_exponent_general(c: &BigRational, q: &BigRational, e1: &BigRational, e2: &BigRational) -> BigRational {
    let one = rat(1, 1);
    (rat(4, 1) * c * (q + rat(2, 1)) - rat(5, 1) * e1 * (q + &one) - rat(2, 1) * (e2 - &one) * (rat(2, 1) * q - &one))
        / (rat(4, 1) * q + rat(3, 1))
}

/// The `q = 3/2` specialization `(4 + 14c − 25e₁/2 − 4e₂)/9`.
pub fn p2_exponent_q32(c: &BigRational, e1: &BigRational, e2: &BigRational) -> BigRational {
    (rat(4, 1) + rat(14, 1) * c - rat(25, 2) * e1 - rat(4, 1) * e2) / rat(9, 1)
}

/// One cell of the `(α, γ)` feasibility grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub alpha: f64,
    pub gamma: f64,
    pub feasible: bool,
    pub objective: f64,
}

/// Feasibility mask over `[0,1]²` with `steps + 1` points per axis.
pub fn polytope_grid(inst: &LPInstance, steps: u32) -> Vec<GridPoint> {
    let steps = steps.max(1);
    let mut out = Vec::with_capacity(((steps + 1) * (steps + 1)) as usize);
    for i in 0..=steps {
        for j in 0..=steps {
            let alpha = rat(i as i64, steps as i64);
            let gamma = rat(j as i64, steps as i64);
            let m = polytope_membership_exact(inst, &alpha, &gamma);
            out.push(GridPoint {
                alpha: to_f64(&alpha),
                gamma: to_f64(&gamma),
                feasible: m.feasible,
                objective: to_f64(&objective(inst, &alpha, &gamma)),
            });
        }
    }
    out
}

/// One point of the Protocol 2 exponent curve against `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FqecPoint {
    pub q: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub exponent: f64,
    /// Whether the closed-form point lies in the polytope (with `η = 1`).
    pub feasible: bool,
}

/// Protocol 2 exponent at the closed-form optimum for each `c`.
pub fn fqec_curve(q: &BigRational, e1: &BigRational, e2: &BigRational, cs: &[BigRational]) -> Result<Vec<FqecPoint>> {
    cs.iter()
        .map(|c| {
            let inst = LPInstance::new(c.clone(), q.clone(), rat(1, 1), e1.clone(), e2.clone())?;
            let (alpha, gamma) = closed_form(&inst);
            Ok(FqecPoint {
                q: to_f64(q),
                c: to_f64(c),
                alpha: to_f64(&alpha),
                gamma: to_f64(&gamma),
                exponent: to_f64(&p2_exponent(&inst)),
                feasible: polytope_membership_exact(&inst, &alpha, &gamma).feasible,
            })
        })
        .collect()
}

/// Parses `start:stop:step` into an exact grid including both ends.
pub fn parse_grid(spec: &str) -> Result<Vec<BigRational>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, h] = parts.as_slice() else {
        return Err(invalid(format!("grid must be start:stop:step, got {spec:?}")));
    };
    let (a, b, h) = (parse_rational(a)?, parse_rational(b)?, parse_rational(h)?);
    if !h.is_positive() || b < a {
        return Err(invalid("grid needs step > 0 and stop >= start"));
    }
    let mut out = Vec::new();
    let mut x = a;
    while x <= b {
        out.push(x.clone());
        x += &h;
    }
    Ok(out)
}

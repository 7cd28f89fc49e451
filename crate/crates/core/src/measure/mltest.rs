use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::interval::union_measure;
use crate::bits::{check_prefix_free, Bits, NotPrefixFree};
use crate::stagewise::{OracleApprox, Stage};

/// `2^{-k}` as a rational.
pub fn pow2_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

fn weight(s: &Bits) -> BigRational {
    pow2_neg(s.len() as u32)
}

/// `δ_n = 2^{-n-1} · ε / (1 + ε)`.
pub fn delta(n: u32, epsilon: &BigRational) -> BigRational {
    pow2_neg(n + 1) * epsilon / (BigRational::one() + epsilon)
}

/// A finite prefix-free enumeration `S` with a sub-enumeration `V` and a bound
/// on the measure of `S` beyond the listed strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlInput {
    pub s: Vec<Bits>,
    pub v: Vec<Bits>,
    pub tail: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MlError {
    #[error(transparent)]
    NotPrefixFree(#[from] NotPrefixFree),
    #[error("{0} is enumerated into V but is not in S")]
    NotSubset(Bits),
    #[error("{0} is enumerated into V twice")]
    Duplicate(Bits),
    #[error("tail bound {0} is negative")]
    NegativeTail(BigRational),
    #[error("n = {n}: no finite D_n leaves less than 2^-{} outside", n + 1)]
    Tail { n: u32 },
    #[error("n = {n}: ε_n = {epsilon} is not in (0, 2^-|ρ|) for ρ = {rho}")]
    Epsilon {
        n: u32,
        epsilon: BigRational,
        rho: Bits,
    },
    #[error("n = {n}: ε_n = {epsilon} is not positive")]
    NonPositiveEpsilon { n: u32, epsilon: BigRational },
    #[error("n = {n}: d_n = {d_n} exceeds 1/ε_n = {bound}")]
    Count {
        n: u32,
        d_n: usize,
        bound: BigRational,
    },
}

/// Level `n` of the test: `U_n = ∪_s (μ(V_s), μ(V_s) + δ_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlComponent {
    pub n: u32,
    pub d_set: Vec<Bits>,
    pub epsilon: BigRational,
    pub delta: BigRational,
    /// `μ(V_s)` for `s = 0, …, |V|`.
    pub v_measures: Vec<BigRational>,
}

impl MlComponent {
    pub fn d_n(&self) -> usize {
        self.d_set.len()
    }

    /// Whether `x` lies in some `J(n, s)`, `s ≤ horizon`, read as the
    /// left-closed `[μ(V_s), μ(V_s) + δ_n)`.  For finite `V` the value `μ(V)`
    /// is the left end of the last interval; closing that end changes no
    /// measure.
    pub fn covers(&self, x: &BigRational, horizon: usize) -> bool {
        self.intervals(horizon).iter().any(|(a, b)| a <= x && x < b)
    }

    /// `J(n, s)` for `s ≤ horizon`.
    pub fn intervals(&self, horizon: usize) -> Vec<(BigRational, BigRational)> {
        self.v_measures
            .iter()
            .take(horizon.saturating_add(1))
            .map(|m| (m.clone(), m + &self.delta))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MlTest {
    pub components: Vec<MlComponent>,
}

/// Per-level outcome of [`ml_test_verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MlRow {
    pub n: u32,
    pub d_n: usize,
    pub epsilon: String,
    pub delta: String,
    pub measure: String,
    pub bound: String,
    /// `2^{-n} − μ(U_n)`; negative on failure, when it is minus the excess.
    pub slack: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MlReport {
    pub horizon: usize,
    pub rows: Vec<MlRow>,
}

impl MlReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| !r.holds).map(|r| r.n).collect()
    }
}

/// Orders the strings of `s` whose index lies in `E` by the stage at which the
/// index entered, giving an oracle-driven sub-enumeration.
pub fn sub_enumeration(s: &[Bits], e: &OracleApprox, horizon: Stage) -> Vec<Bits> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for stage in 0..=horizon {
        for i in e.enumerate(stage) {
            if let Some(sigma) = s.get(i as usize) {
                if seen.insert(i) {
                    out.push(sigma.clone());
                }
            }
        }
    }
    out
}

fn validate(input: &MlInput) -> Result<(), MlError> {
    check_prefix_free(&input.s)?;
    if input.tail < BigRational::zero() {
        return Err(MlError::NegativeTail(input.tail.clone()));
    }
    let members: BTreeSet<&Bits> = input.s.iter().collect();
    let mut seen = BTreeSet::new();
    for v in &input.v {
        if !members.contains(v) {
            return Err(MlError::NotSubset(v.clone()));
        }
        if !seen.insert(v) {
            return Err(MlError::Duplicate(v.clone()));
        }
    }
    Ok(())
}

/// Builds levels `1..=levels`.  `D_n` is the shortest initial segment of `S`
/// leaving less than `2^{-n-1}` (tail included) outside.  `ε_n` is taken from
/// `epsilons` when given, else `2^{-(ℓ+1)}` for the longest length `ℓ` in `D_n`
/// (or `1/2` when `D_n` is empty).
pub fn ml_test_build(
    input: &MlInput,
    levels: u32,
    epsilons: &BTreeMap<u32, BigRational>,
) -> Result<MlTest, MlError> {
    validate(input)?;
    let mu_s: BigRational = input.s.iter().map(weight).sum();
    let mut v_measures = vec![BigRational::zero()];
    for v in &input.v {
        let next = v_measures.last().expect("non-empty") + weight(v);
        v_measures.push(next);
    }

    let mut components = Vec::new();
    for n in 1..=levels {
        let budget = pow2_neg(n + 1);
        let mut covered = BigRational::zero();
        let mut k = 0;
        while &mu_s - &covered + &input.tail >= budget {
            let Some(next) = input.s.get(k) else {
                return Err(MlError::Tail { n });
            };
            covered += weight(next);
            k += 1;
        }
        let d_set = input.s[..k].to_vec();
        let epsilon = match epsilons.get(&n) {
            Some(e) => e.clone(),
            None => match d_set.iter().map(Bits::len).max() {
                Some(l) => pow2_neg(l as u32 + 1),
                None => pow2_neg(1),
            },
        };
        if epsilon <= BigRational::zero() {
            return Err(MlError::NonPositiveEpsilon { n, epsilon });
        }
        if let Some(rho) = d_set.iter().find(|rho| epsilon >= weight(rho)) {
            return Err(MlError::Epsilon {
                n,
                epsilon,
                rho: rho.clone(),
            });
        }
        let bound = epsilon.recip();
        if BigRational::from_integer(BigInt::from(d_set.len())) > bound {
            return Err(MlError::Count {
                n,
                d_n: d_set.len(),
                bound,
            });
        }
        components.push(MlComponent {
            n,
            delta: delta(n, &epsilon),
            d_set,
            epsilon,
            v_measures: v_measures.clone(),
        });
    }
    Ok(MlTest { components })
}

/// Computes `μ(∪_{s ≤ horizon} J(n, s))` exactly and compares it with `2^{-n}`.
pub fn ml_test_verify(test: &MlTest, horizon: usize) -> MlReport {
    let rows = test
        .components
        .iter()
        .map(|c| {
            let measure = union_measure(&c.intervals(horizon));
            let bound = pow2_neg(c.n);
            let slack = &bound - &measure;
            MlRow {
                n: c.n,
                d_n: c.d_n(),
                epsilon: c.epsilon.to_string(),
                delta: c.delta.to_string(),
                holds: slack >= BigRational::zero(),
                measure: measure.to_string(),
                bound: bound.to_string(),
                slack: slack.to_string(),
            }
        })
        .collect();
    MlReport { horizon, rows }
}

/// The seven length-3 strings below `111` followed by `1110` and `1111`, all
/// enumerated into `V`, with `ε_1 = 31/256`.  Honest, the level-1 component has
/// measure `10 δ_1 < 1/2`; with `δ_1` doubled it exceeds `1/2`.
pub fn adversarial_instance() -> (MlInput, BTreeMap<u32, BigRational>) {
    let mut s: Vec<Bits> = Bits::all_of_length(3).take(7).collect();
    s.push("1110".parse().expect("literal"));
    s.push("1111".parse().expect("literal"));
    let input = MlInput {
        v: s.clone(),
        s,
        tail: BigRational::zero(),
    };
    let eps = BTreeMap::from([(1, BigRational::new(31.into(), 256.into()))]);
    (input, eps)
}

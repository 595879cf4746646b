//! Finite ensembles of specimens: joint measurement, evaluation, derivation.
//!
//! A [`MeasurementPlan`] is a commuting family of named projectors. Sampling
//! a plan in a state draws specimens i.i.d. from the product-projector joint
//! distribution (for commuting families this coincides with sequential
//! measurement but is order-independent). Each specimen records one outcome
//! per column, tagged with its provenance: actually measured, assigned by
//! evaluation from another column, or derived by a function of other columns.
//! The distinction is load-bearing — the whole point of keeping supports
//! around is to test where evaluated values may and may not stand in for
//! measured ones — so serialization preserves the tag.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::opalg::{commutator, trace_product, DensityOperator, Operator, Projector};

/// Longest plan whose joint-outcome table (2^len entries) we will tabulate.
pub const MAX_PLAN: usize = 12;

/// How an outcome entered a specimen's record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Outcome of an actual measurement.
    Measured,
    /// Assigned from a measured column by the evaluation rule.
    Evaluated,
    /// Computed as a function of other columns.
    Derived,
}

impl Provenance {
    /// One-letter serialization flag.
    pub fn flag(self) -> char {
        match self {
            Provenance::Measured => 'm',
            Provenance::Evaluated => 'e',
            Provenance::Derived => 'd',
        }
    }

    /// Inverse of [`Provenance::flag`].
    pub fn from_flag(c: char) -> Option<Self> {
        match c {
            'm' => Some(Provenance::Measured),
            'e' => Some(Provenance::Evaluated),
            'd' => Some(Provenance::Derived),
            _ => None,
        }
    }
}

/// One recorded outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutcomeRecord {
    /// The two-valued outcome.
    pub value: u8,
    /// How the outcome was obtained.
    pub provenance: Provenance,
}

/// One system specimen with its recorded outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specimen {
    /// Position in the support.
    pub id: u64,
    outcomes: BTreeMap<String, OutcomeRecord>,
}

impl Specimen {
    /// The record for a named observable, if present.
    pub fn outcome(&self, name: &str) -> Option<&OutcomeRecord> {
        self.outcomes.get(name)
    }

    /// The outcome value for a named observable; errors if absent.
    pub fn value(&self, name: &str) -> Result<u8> {
        self.outcomes
            .get(name)
            .map(|r| r.value)
            .ok_or_else(|| Error::MissingObservable {
                name: name.to_string(),
            })
    }
}

/// A named commuting family of projectors measured together.
#[derive(Clone, Debug)]
pub struct MeasurementPlan {
    entries: Vec<(String, Projector)>,
    tol: f64,
}

impl MeasurementPlan {
    /// Validates names (unique), dimensions (equal), size (≤ [`MAX_PLAN`]),
    /// and pairwise commutation within `tol`.
    pub fn new(entries: Vec<(String, Projector)>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyOperatorList);
        }
        if entries.len() > MAX_PLAN {
            return Err(Error::PlanTooLarge {
                len: entries.len(),
                max: MAX_PLAN,
            });
        }
        for i in 1..entries.len() {
            if entries[i].1.dim() != entries[0].1.dim() {
                return Err(Error::DimensionMismatch {
                    left: entries[0].1.dim(),
                    right: entries[i].1.dim(),
                });
            }
        }
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                if entries[i].0 == entries[j].0 {
                    return Err(Error::DuplicateObservable {
                        name: entries[i].0.clone(),
                    });
                }
                let residual = commutator(entries[i].1.op(), entries[j].1.op())?.max_norm();
                if residual > tol {
                    return Err(Error::NonCommutingPlan {
                        first: entries[i].0.clone(),
                        second: entries[j].0.clone(),
                        residual,
                    });
                }
            }
        }
        Ok(Self { entries, tol })
    }

    /// Number of observables.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the plan is empty (never true for a constructed plan).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Space dimension.
    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    /// Names in plan order.
    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// The projector for a name.
    pub fn get(&self, name: &str) -> Option<&Projector> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    /// The commutation tolerance the plan was validated at.
    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// Joint outcome distribution of a plan in a state. Outcome bitstrings are
/// indexed with the first plan observable as the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    names: Vec<String>,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Observable names, most significant bit first.
    pub fn names(&self) -> Vec<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    /// Probability for each bitstring index.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Decodes a bitstring index into per-observable outcomes, plan order.
    pub fn bits_of(&self, index: usize) -> Vec<u8> {
        let k = self.names.len();
        (0..k).map(|j| ((index >> (k - 1 - j)) & 1) as u8).collect()
    }

    /// Probability of a specific outcome vector, plan order.
    pub fn prob_of(&self, bits: &[u8]) -> f64 {
        assert_eq!(bits.len(), self.names.len(), "outcome vector length");
        let mut index = 0usize;
        for b in bits {
            index = (index << 1) | usize::from(*b & 1);
        }
        self.probs[index]
    }

    /// Marginal probability that a named observable yields 1.
    pub fn marginal(&self, name: &str) -> Result<f64> {
        let j =
            self.names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::MissingObservable {
                    name: name.to_string(),
                })?;
        let k = self.names.len();
        let mut total = 0.0;
        for (index, p) in self.probs.iter().enumerate() {
            if (index >> (k - 1 - j)) & 1 == 1 {
                total += p;
            }
        }
        Ok(total)
    }
}

/// Computes the joint distribution: the probability of bitstring `b` is
/// `Tr(ρ · Π_j Ê_j^{(b_j)})` with `Ê^{(1)} = Ê` and `Ê^{(0)} = 1 − Ê`.
pub fn joint_distribution(
    plan: &MeasurementPlan,
    rho: &DensityOperator,
) -> Result<JointDistribution> {
    if plan.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: plan.dim(),
            right: rho.dim(),
        });
    }
    let k = plan.len();
    let pos: Vec<&Operator> = plan.entries.iter().map(|(_, p)| p.op()).collect();
    let neg: Vec<Operator> = plan
        .entries
        .iter()
        .map(|(_, p)| p.complement().op().clone())
        .collect();
    let mut probs = Vec::with_capacity(1 << k);
    for index in 0..(1usize << k) {
        let mut prod = Operator::identity(plan.dim());
        for j in 0..k {
            let one = (index >> (k - 1 - j)) & 1 == 1;
            prod = if one { &prod * pos[j] } else { &prod * &neg[j] };
        }
        probs.push(trace_product(&[rho.op(), &prod])?.re);
    }
    Ok(JointDistribution {
        names: plan.names().iter().map(|s| s.to_string()).collect(),
        probs,
    })
}

/// A sampled ensemble: the state, the plan it was measured under, the seed
/// that drove the sampling, and the resulting specimens. Extra columns added
/// by evaluation or derivation are listed after the plan columns.
#[derive(Clone, Debug)]
pub struct Support {
    rho: DensityOperator,
    plan: MeasurementPlan,
    /// Sampling seed, recorded for reproducibility.
    pub seed: u64,
    specimens: Vec<Specimen>,
    columns: Vec<String>,
}

impl Support {
    /// The sampled specimens.
    pub fn specimens(&self) -> &[Specimen] {
        &self.specimens
    }

    /// Number of specimens.
    pub fn n(&self) -> usize {
        self.specimens.len()
    }

    /// The measurement plan.
    pub fn plan(&self) -> &MeasurementPlan {
        &self.plan
    }

    /// The state the support was sampled from.
    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    /// All column names in serialization order (plan first, then added ones).
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Number of specimens whose outcomes satisfy a predicate.
    pub fn count_where(&self, pred: impl Fn(&Specimen) -> bool) -> usize {
        self.specimens.iter().filter(|s| pred(s)).count()
    }

    /// Line-oriented text serialization: header lines `#seed=`, `#n=`,
    /// `#plan=`, then one `id TAB name=value:flag ...` line per specimen.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#seed={}\n", self.seed));
        out.push_str(&format!("#n={}\n", self.n()));
        out.push_str(&format!("#plan={}\n", self.plan.names().join(",")));
        for specimen in &self.specimens {
            out.push_str(&specimen.id.to_string());
            for name in &self.columns {
                let record = specimen
                    .outcomes
                    .get(name)
                    .expect("every specimen carries every column");
                out.push_str(&format!(
                    "\t{name}={}:{}",
                    record.value,
                    record.provenance.flag()
                ));
            }
            out.push('\n');
        }
        out
    }
}

/// Draws `n` specimens i.i.d. from the plan's joint distribution in `rho`.
/// Deterministic for a fixed seed. Probabilities that came out as tiny
/// negative floating-point residue are clamped to zero before sampling.
pub fn sample_support(
    plan: &MeasurementPlan,
    rho: &DensityOperator,
    n: usize,
    seed: u64,
) -> Result<Support> {
    let dist = joint_distribution(plan, rho)?;
    let weights: Vec<f64> = dist.probs().iter().map(|p| p.max(0.0)).collect();
    let index_dist = WeightedIndex::new(&weights).expect("probabilities sum to one");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let names = plan.names();
    let mut specimens = Vec::with_capacity(n);
    for id in 0..n {
        let index = index_dist.sample(&mut rng);
        let bits = dist.bits_of(index);
        let outcomes = names
            .iter()
            .zip(&bits)
            .map(|(name, value)| {
                (
                    name.to_string(),
                    OutcomeRecord {
                        value: *value,
                        provenance: Provenance::Measured,
                    },
                )
            })
            .collect();
        specimens.push(Specimen {
            id: id as u64,
            outcomes,
        });
    }
    Ok(Support {
        rho: rho.clone(),
        plan: plan.clone(),
        seed,
        specimens,
        columns: names.iter().map(|s| s.to_string()).collect(),
    })
}

fn source_record<'a>(specimen: &'a Specimen, name: &str) -> Result<&'a OutcomeRecord> {
    let record = specimen
        .outcome(name)
        .ok_or_else(|| Error::MissingObservable {
            name: name.to_string(),
        })?;
    if record.provenance == Provenance::Evaluated {
        return Err(Error::EvaluatedSource {
            name: name.to_string(),
        });
    }
    Ok(record)
}

fn check_new_column(support: &Support, new_name: &str) -> Result<()> {
    if support.columns.iter().any(|c| c == new_name) {
        return Err(Error::ObservableAlreadyPresent {
            name: new_name.to_string(),
        });
    }
    Ok(())
}

/// Assigns each specimen an outcome for `e_name` equal to its outcome for the
/// measured (or derived) column `t_name`, tagged as evaluated.
pub fn evaluate_assign(support: &Support, t_name: &str, e_name: &str) -> Result<Support> {
    check_new_column(support, e_name)?;
    let mut out = support.clone();
    for specimen in &mut out.specimens {
        let value = source_record(specimen, t_name)?.value;
        specimen.outcomes.insert(
            e_name.to_string(),
            OutcomeRecord {
                value,
                provenance: Provenance::Evaluated,
            },
        );
    }
    out.columns.push(e_name.to_string());
    Ok(out)
}

/// Adds a column computed from other columns by `f_combine`, tagged as
/// derived. Source columns must themselves be measured or derived, and the
/// function must return 0 or 1 on every specimen.
pub fn derived_outcome(
    support: &Support,
    names: &[&str],
    f_combine: impl Fn(&[u8]) -> u8,
    new_name: &str,
) -> Result<Support> {
    check_new_column(support, new_name)?;
    let mut out = support.clone();
    for specimen in &mut out.specimens {
        let inputs: Vec<u8> = names
            .iter()
            .map(|name| source_record(specimen, name).map(|r| r.value))
            .collect::<Result<_>>()?;
        let value = f_combine(&inputs);
        if value > 1 {
            return Err(Error::OutcomeOutOfRange { value });
        }
        specimen.outcomes.insert(
            new_name.to_string(),
            OutcomeRecord {
                value,
                provenance: Provenance::Derived,
            },
        );
    }
    out.columns.push(new_name.to_string());
    Ok(out)
}

/// Header and specimen data recovered from the text serialization. The state
/// and the projectors are not part of the format, so parsing yields this
/// record rather than a full [`Support`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSupport {
    pub seed: u64,
    pub n: usize,
    pub plan_names: Vec<String>,
    pub columns: Vec<String>,
    pub specimens: Vec<Specimen>,
}

/// Parses the line-oriented text serialization produced by
/// [`Support::to_text`].
pub fn parse_support_text(text: &str) -> Result<ParsedSupport> {
    let mut seed: Option<u64> = None;
    let mut n: Option<usize> = None;
    let mut plan_names: Option<Vec<String>> = None;
    let mut columns: Vec<String> = Vec::new();
    let mut specimens: Vec<Specimen> = Vec::new();

    let parse_err = |line: usize, message: &str| Error::ParseSupport {
        line,
        message: message.to_string(),
    };

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(lineno, "malformed header"))?;
            match key {
                "seed" => {
                    seed = Some(
                        value
                            .parse()
                            .map_err(|_| parse_err(lineno, "seed is not an integer"))?,
                    )
                }
                "n" => {
                    n = Some(
                        value
                            .parse()
                            .map_err(|_| parse_err(lineno, "n is not an integer"))?,
                    )
                }
                "plan" => {
                    plan_names = Some(value.split(',').map(|s| s.to_string()).collect());
                }
                _ => return Err(parse_err(lineno, "unknown header")),
            }
            continue;
        }
        let mut fields = line.split('\t');
        let id: u64 = fields
            .next()
            .unwrap()
            .parse()
            .map_err(|_| parse_err(lineno, "specimen id is not an integer"))?;
        let mut outcomes = BTreeMap::new();
        let mut line_columns = Vec::new();
        for token in fields {
            let (name, rest) = token
                .split_once('=')
                .ok_or_else(|| parse_err(lineno, "outcome token lacks '='"))?;
            let (value_str, provenance) = match rest.split_once(':') {
                Some((v, flag)) => {
                    let mut chars = flag.chars();
                    let c = chars
                        .next()
                        .ok_or_else(|| parse_err(lineno, "empty provenance flag"))?;
                    if chars.next().is_some() {
                        return Err(parse_err(lineno, "provenance flag is not one letter"));
                    }
                    let p = Provenance::from_flag(c)
                        .ok_or_else(|| parse_err(lineno, "unknown provenance flag"))?;
                    (v, p)
                }
                None => (rest, Provenance::Measured),
            };
            let value: u8 = value_str
                .parse()
                .map_err(|_| parse_err(lineno, "outcome is not an integer"))?;
            if value > 1 {
                return Err(parse_err(lineno, "outcome is out of range"));
            }
            if outcomes
                .insert(name.to_string(), OutcomeRecord { value, provenance })
                .is_some()
            {
                return Err(parse_err(lineno, "duplicate observable in specimen"));
            }
            line_columns.push(name.to_string());
        }
        if specimens.is_empty() {
            columns = line_columns;
        } else if columns != line_columns {
            return Err(parse_err(lineno, "specimen columns differ from first line"));
        }
        specimens.push(Specimen { id, outcomes });
    }

    let seed = seed.ok_or_else(|| parse_err(0, "missing #seed header"))?;
    let n = n.ok_or_else(|| parse_err(0, "missing #n header"))?;
    let plan_names = plan_names.ok_or_else(|| parse_err(0, "missing #plan header"))?;
    if n != specimens.len() {
        return Err(parse_err(0, "specimen count disagrees with #n header"));
    }
    Ok(ParsedSupport {
        seed,
        n,
        plan_names,
        columns,
        specimens,
    })
}

/// One row of the frequency-vs-probability comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyRow {
    /// Outcome bits in plan order.
    pub bits: Vec<u8>,
    /// Specimens observed with this outcome.
    pub count: usize,
    /// Empirical frequency `count / n`.
    pub frequency: f64,
    /// Model probability from [`joint_distribution`].
    pub probability: f64,
    /// Binomial standard error `sqrt(p(1−p)/n)`.
    pub std_error: f64,
    /// `|frequency − probability| / std_error` (0 when both sides agree
    /// exactly and the standard error vanishes).
    pub z: f64,
}

impl FrequencyRow {
    /// The bits as a compact string, e.g. `101`.
    pub fn pattern(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

/// Tabulates empirical frequencies over the plan columns against the model
/// distribution, one row per outcome bitstring.
pub fn frequency_table(support: &Support) -> Result<Vec<FrequencyRow>> {
    let dist = joint_distribution(support.plan(), support.rho())?;
    let names = support.plan().names();
    let k = names.len();
    let n = support.n();
    let mut counts = vec![0usize; 1 << k];
    for specimen in support.specimens() {
        let mut index = 0usize;
        for name in &names {
            let value = specimen.value(name)?;
            index = (index << 1) | usize::from(value);
        }
        counts[index] += 1;
    }
    let mut rows = Vec::with_capacity(1 << k);
    for (index, count) in counts.iter().enumerate() {
        let probability = dist.probs()[index].max(0.0);
        let frequency = if n == 0 {
            0.0
        } else {
            *count as f64 / n as f64
        };
        let std_error = if n == 0 {
            0.0
        } else {
            (probability * (1.0 - probability) / n as f64).sqrt()
        };
        let diff = (frequency - probability).abs();
        let z = if std_error > 0.0 {
            diff / std_error
        } else if diff <= f64::EPSILON {
            0.0
        } else {
            f64::INFINITY
        };
        rows.push(FrequencyRow {
            bits: dist.bits_of(index),
            count: *count,
            frequency,
            probability,
            std_error,
            z,
        });
    }
    Ok(rows)
}

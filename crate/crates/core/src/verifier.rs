//! Independent checks of the AIR code.
//!
//! The oracle decides decodability by elimination on the matrix alone:
//! receiver `k` can recover `x_k` iff row `k` of `L` is outside the row span
//! of the rows indexed by its interference set. (Some `alpha` makes `L alpha`
//! one at `k` and zero on `I_k` exactly when no combination of the `I_k` rows
//! equals row `k`.) It never looks at a decoding plan.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{derive_params, ProblemParams};
use crate::codec::{build_plan, encode, expected_counts, Case, FieldPlan};
use crate::error::{Error, Result};
use crate::field::{MessageVector, PrimeField};
use crate::linalg::{FpBasis, Gf2Basis};
use crate::matrix::{build_air, AirMatrix};
use crate::model::InstanceModel;

fn oracle_masked(matrix: &AirMatrix, instance: &InstanceModel, k: usize, field: &PrimeField, drop: Option<usize>) -> bool {
    let Ok(interfering) = instance.interference_set(k) else {
        return false;
    };
    if field.is_binary() {
        let row = |j: usize| {
            let mut w = matrix.row_words(j).to_vec();
            if let Some(c) = drop {
                w[c / 64] &= !(1u64 << (c % 64));
            }
            w
        };
        let mut basis = Gf2Basis::new(matrix.cols());
        for &j in &interfering {
            basis.insert(row(j));
        }
        !basis.contains(row(k))
    } else {
        let row = |j: usize| -> Vec<u32> {
            (0..matrix.cols())
                .map(|c| u32::from(Some(c) != drop && matrix.get(j, c)))
                .collect()
        };
        let mut basis = FpBasis::new(*field, matrix.cols());
        for &j in &interfering {
            basis.insert(row(j));
        }
        !basis.contains(row(k))
    }
}

/// Whether receiver `k` of `instance` can decode from the code of `matrix`.
pub fn decodable_oracle(matrix: &AirMatrix, instance: &InstanceModel, k: usize, field: &PrimeField) -> bool {
    k < matrix.rows() && instance.messages == matrix.rows() && oracle_masked(matrix, instance, k, field, None)
}

/// Whether deleting column `c` leaves some receiver unable to decode.
/// A partial check on the length bound only.
fn deletion_breaks(matrix: &AirMatrix, instance: &InstanceModel, c: usize) -> bool {
    let gf2 = PrimeField::new(2).expect("2 is prime");
    // Start at receiver c: rows 0..=D carry a single 1, so it usually fails first.
    (0..matrix.rows())
        .map(|i| (c + i) % matrix.rows())
        .any(|k| !oracle_masked(matrix, instance, k, &gf2, Some(c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Seeded random message vectors per field, on top of every basis vector.
    pub random_vectors: usize,
    pub seed: u64,
    pub column_deletion: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            random_vectors: 100,
            seed: 0x5eed,
            column_deletion: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverStatus {
    pub k: usize,
    pub case: Case,
    /// Per field, in report order.
    pub oracle: Vec<bool>,
    pub plan: Vec<bool>,
    pub tau_len: usize,
    pub gamma_len: usize,
    pub expected_tau_len: usize,
    pub expected_gamma_len: usize,
    pub counts_match: bool,
}

impl ReceiverStatus {
    pub fn pass(&self) -> bool {
        self.counts_match && self.oracle.iter().all(|&b| b) && self.plan.iter().all(|&b| b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(flatten)]
    pub params: ProblemParams,
    pub fields: Vec<u32>,
    pub code_len: usize,
    pub rate: String,
    pub outer_bound: String,
    pub meets_outer_bound: bool,
    /// `None` when the check was skipped; otherwise whether deleting any
    /// single column broke some receiver. Partial: says nothing about
    /// shorter codes of other shapes.
    pub column_deletion_breaks: Option<bool>,
    pub vectors_per_field: usize,
    pub receivers: Vec<ReceiverStatus>,
    pub failures: Vec<String>,
    pub pass: bool,
}

fn vector_seed(seed: u64, params: &ProblemParams, p: u32) -> u64 {
    seed ^ (params.messages as u64) << 40 ^ (params.after as u64) << 20 ^ p as u64
}

/// Plan-based decoding over one field: per receiver, whether every test
/// vector came back right.
fn plan_decodes(
    matrix: &AirMatrix,
    field_plan: &FieldPlan,
    field: &PrimeField,
    opts: &VerifyOptions,
    failures: &mut Vec<String>,
) -> Vec<bool> {
    let params = matrix.params();
    let n = params.messages;
    let model = InstanceModel::new(params);
    let mut ok = vec![true; n];
    let mut rng = ChaCha8Rng::seed_from_u64(vector_seed(opts.seed, &params, field.modulus()));
    let basis = (0..n).map(|i| MessageVector::unit(n, i));
    let random: Vec<MessageVector> = (0..opts.random_vectors)
        .map(|_| MessageVector::new((0..n).map(|_| rng.gen_range(0..field.modulus())).collect(), field))
        .collect();
    for x in basis.chain(random) {
        let code = match encode(&x, matrix, field) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("encode over GF({}): {e}", field.modulus()));
                return vec![false; n];
            }
        };
        for rc in &field_plan.receivers {
            let got = rc.apply(&code, field, |i| model.knows(rc.k, i).then(|| x.get(i)));
            if got.as_ref().ok() != Some(&x.get(rc.k)) && ok[rc.k] {
                ok[rc.k] = false;
                failures.push(format!("receiver {} decodes wrongly over GF({})", rc.k, field.modulus()));
            }
        }
    }
    ok
}

pub fn verify_instance(messages: usize, after: usize, fields: &[u32]) -> Result<VerificationReport> {
    verify_instance_with(messages, after, fields, &VerifyOptions::default())
}

pub fn verify_instance_with(
    messages: usize,
    after: usize,
    fields: &[u32],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let params = derive_params(messages, after)?;
    let fields_f = fields.iter().map(|&p| PrimeField::new(p)).collect::<Result<Vec<_>>>()?;
    let matrix = build_air(messages, after)?;
    let model = InstanceModel::new(params);
    let mut failures = Vec::new();

    let plan = build_plan(&matrix);
    let mut receivers: Vec<ReceiverStatus> = Vec::with_capacity(messages);
    match &plan {
        Ok(plan) => {
            for rx in &plan.receivers {
                let (et, eg) = expected_counts(&matrix, rx.k).unwrap_or((usize::MAX, usize::MAX));
                let counts_match = (et, eg) == (rx.tau.len(), rx.gamma.len());
                if !counts_match {
                    failures.push(format!(
                        "receiver {}: |tau|, |gamma| = {}, {}; expected {}, {}",
                        rx.k,
                        rx.tau.len(),
                        rx.gamma.len(),
                        et,
                        eg
                    ));
                }
                receivers.push(ReceiverStatus {
                    k: rx.k,
                    case: rx.case,
                    oracle: Vec::new(),
                    plan: Vec::new(),
                    tau_len: rx.tau.len(),
                    gamma_len: rx.gamma.len(),
                    expected_tau_len: et,
                    expected_gamma_len: eg,
                    counts_match,
                });
            }
        }
        Err(e) => failures.push(format!("plan construction: {e}")),
    }

    for field in &fields_f {
        let oracle: Vec<bool> = (0..messages)
            .map(|k| decodable_oracle(&matrix, &model, k, field))
            .collect();
        for k in (0..messages).filter(|&k| !oracle[k]) {
            failures.push(format!("receiver {k} not decodable over GF({}) by elimination", field.modulus()));
        }
        let decodes = match plan.as_ref().map(|p| p.for_field(&matrix, field)) {
            Ok(Ok(fp)) => plan_decodes(&matrix, &fp, field, opts, &mut failures),
            Ok(Err(e)) => {
                failures.push(format!("coefficients over GF({}): {e}", field.modulus()));
                vec![false; messages]
            }
            Err(_) => vec![false; messages],
        };
        for r in receivers.iter_mut() {
            r.oracle.push(oracle[r.k]);
            r.plan.push(decodes[r.k]);
        }
    }

    let code_len = matrix.cols();
    let meets_outer_bound = code_len == params.after + 1;
    if !meets_outer_bound {
        failures.push(format!("code length {code_len} differs from D+1 = {}", params.after + 1));
    }
    let column_deletion_breaks = opts
        .column_deletion
        .then(|| (0..code_len).all(|c| deletion_breaks(&matrix, &model, c)));
    if column_deletion_breaks == Some(false) {
        failures.push("some column can be deleted without losing decodability".into());
    }

    let pass = failures.is_empty()
        && plan.is_ok()
        && receivers.len() == messages
        && receivers.iter().all(ReceiverStatus::pass);
    Ok(VerificationReport {
        params,
        fields: fields.to_vec(),
        code_len,
        rate: format!("1/{code_len}"),
        outer_bound: format!("1/{}", params.after + 1),
        meets_outer_bound,
        column_deletion_breaks,
        vectors_per_field: messages + opts.random_vectors,
        receivers,
        failures,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFailure {
    #[serde(rename = "K")]
    pub messages: usize,
    #[serde(rename = "D")]
    pub after: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub k_max: usize,
    pub fields: Vec<u32>,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub receivers: usize,
    pub oracle_failures: usize,
    pub plan_failures: usize,
    pub count_mismatches: usize,
    pub length_mismatches: usize,
    /// Smallest failing `(K, D)`, independent of scheduling.
    pub first_failure: Option<InstanceFailure>,
    pub pass: bool,
}

impl SweepReport {
    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.instances += other.instances;
        self.passed += other.passed;
        self.failed += other.failed;
        self.receivers += other.receivers;
        self.oracle_failures += other.oracle_failures;
        self.plan_failures += other.plan_failures;
        self.count_mismatches += other.count_mismatches;
        self.length_mismatches += other.length_mismatches;
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if (a.messages, a.after) <= (b.messages, b.after) { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    fn single(r: VerificationReport) -> SweepReport {
        let bad = |f: fn(&ReceiverStatus) -> usize| r.receivers.iter().map(f).sum::<usize>();
        SweepReport {
            instances: 1,
            passed: usize::from(r.pass),
            failed: usize::from(!r.pass),
            receivers: r.receivers.len(),
            oracle_failures: bad(|s| s.oracle.iter().filter(|b| !**b).count()),
            plan_failures: bad(|s| s.plan.iter().filter(|b| !**b).count()),
            count_mismatches: bad(|s| usize::from(!s.counts_match)),
            length_mismatches: usize::from(!r.meets_outer_bound),
            first_failure: (!r.pass).then(|| InstanceFailure {
                messages: r.params.messages,
                after: r.params.after,
                failures: r.failures.clone(),
            }),
            ..Default::default()
        }
    }
}

/// Random vectors per field used by sweeps; basis vectors are always added.
pub const SWEEP_RANDOM_VECTORS: usize = 8;

pub fn sweep(k_max: usize, fields: &[u32]) -> Result<SweepReport> {
    sweep_with(
        k_max,
        fields,
        &VerifyOptions {
            random_vectors: SWEEP_RANDOM_VECTORS,
            ..VerifyOptions::default()
        },
    )
}

/// Verifies every `(K, D)` with `3 <= K <= k_max`, `1 <= D <= K-2`, in
/// parallel on the current rayon pool.
pub fn sweep_with(k_max: usize, fields: &[u32], opts: &VerifyOptions) -> Result<SweepReport> {
    if k_max < 3 {
        return Err(Error::ParameterOutOfRange {
            messages: k_max,
            after: 1,
        });
    }
    for &p in fields {
        PrimeField::new(p)?;
    }
    let pairs: Vec<(usize, usize)> = (3..=k_max).flat_map(|k| (1..=k - 2).map(move |d| (k, d))).collect();
    let merged = pairs
        .into_par_iter()
        .map(|(k, d)| verify_instance_with(k, d, fields, opts).map(SweepReport::single))
        .try_reduce(SweepReport::default, |a, b| Ok(a.merge(b)))?;
    Ok(SweepReport {
        k_max,
        fields: fields.to_vec(),
        pass: merged.failed == 0,
        ..merged
    })
}

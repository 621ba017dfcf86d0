//! Encoding with the AIR matrix and per-receiver decoding plans.
//!
//! Receivers split into four groups by the interval layout:
//!
//! * case I, `k < lambda(0)`: `c_{k mod (D+1)}` alone;
//! * case II, `k` in a lead interval: `c_{k'}` and `c_{k'+mu}`;
//! * case III, `k` in a trailing interval other than the last: `c_{k'}`,
//!   `c_{k'+mu}` and `c_{k'+t_r}` for every `r`-th down-distance `t_r`;
//! * case IV, `k` in the last `gcd(K, D+1)` receivers: `c_{k'}` alone,
//!
//! where `k' = k - lambda(0)` and `mu`, `t_r` come from the distance profile
//! of column `k'`. Over GF(2) the receiver adds the chosen symbols and its
//! side-information; over odd primes the coefficients are solved for.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::ProblemParams;
use crate::distances::distance_profile;
use crate::error::{Error, Result};
use crate::field::{Codeword, MessageVector, PrimeField};
use crate::linalg;
use crate::matrix::{check_index, AirMatrix};
use crate::model::InstanceModel;

pub fn encode(messages: &MessageVector, matrix: &AirMatrix, field: &PrimeField) -> Result<Codeword> {
    if messages.len() != matrix.rows() {
        return Err(Error::LengthMismatch {
            expected: matrix.rows(),
            got: messages.len(),
        });
    }
    let mut code = vec![0u32; matrix.cols()];
    for (j, &x) in messages.symbols().iter().enumerate() {
        if x == 0 {
            continue;
        }
        for k in matrix.row_ones(j) {
            code[k] = field.add(code[k], x);
        }
    }
    Ok(Codeword::new(code, field))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Case of receiver `k` and the index `i` of the interval holding it.
pub fn classify(matrix: &AirMatrix, k: usize) -> Result<(Case, usize)> {
    check_index("receiver", k, matrix.rows())?;
    let chain = matrix.chain();
    let layout = matrix.layout();
    if layout.head(chain).contains(k) {
        return Ok((Case::I, 0));
    }
    let last = chain.half_ceil();
    for i in 0..=last {
        if layout.dtilde[i].contains(k) {
            return Ok((Case::II, i));
        }
        if layout.etilde[i].contains(k) {
            return Ok((if i == last { Case::IV } else { Case::III }, i));
        }
    }
    Err(Error::Structural(format!("receiver {k} falls in no decoding case")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverPlan {
    pub k: usize,
    pub case: Case,
    /// Code symbols combined, ascending.
    pub tau: Vec<usize>,
    /// Side-information consumed over GF(2), ascending.
    pub gamma: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingPlan {
    #[serde(flatten)]
    pub params: ProblemParams,
    pub receivers: Vec<ReceiverPlan>,
}

impl DecodingPlan {
    pub fn receiver(&self, k: usize) -> Result<&ReceiverPlan> {
        self.receivers.get(k).ok_or(Error::IndexOutOfRange {
            what: "receiver",
            index: k,
            bound: self.receivers.len(),
        })
    }

    /// Decoding coefficients of every receiver over `field`.
    pub fn for_field(&self, matrix: &AirMatrix, field: &PrimeField) -> Result<FieldPlan> {
        let model = InstanceModel::new(self.params);
        let receivers = self
            .receivers
            .iter()
            .map(|rx| receiver_coefficients(rx, matrix, &model, field))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldPlan { field: *field, receivers })
    }
}

/// Code symbols used by receiver `k` (before sorting).
fn tau_for(matrix: &AirMatrix, k: usize, case: Case) -> Result<Vec<usize>> {
    let chain = matrix.chain();
    let shift = chain.lambda(0);
    Ok(match case {
        Case::I => vec![k % matrix.cols()],
        Case::IV => vec![k - shift],
        Case::II | Case::III => {
            let kp = k - shift;
            let prof = distance_profile(matrix, kp)?;
            let mut tau = vec![kp, kp + prof.mu];
            if case == Case::III {
                tau.extend(prof.t.iter().map(|t| kp + t));
            }
            tau
        }
    })
}

/// Support of the GF(2) sum of the given columns.
fn xor_support(matrix: &AirMatrix, cols: &[usize]) -> Vec<usize> {
    let mut parity = vec![false; matrix.rows()];
    for &c in cols {
        for &j in matrix.column_support(c) {
            parity[j] ^= true;
        }
    }
    (0..matrix.rows()).filter(|&j| parity[j]).collect()
}

pub fn build_plan(matrix: &AirMatrix) -> Result<DecodingPlan> {
    let receivers = (0..matrix.rows())
        .map(|k| {
            let (case, _) = classify(matrix, k)?;
            let mut tau = tau_for(matrix, k, case)?;
            tau.sort_unstable();
            tau.dedup();
            let gamma = xor_support(matrix, &tau).into_iter().filter(|&j| j != k).collect();
            Ok(ReceiverPlan { k, case, tau, gamma })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecodingPlan {
        params: matrix.params(),
        receivers,
    })
}

/// Broadcast-symbol and side-information counts predicted from column
/// weights and distance profiles, independent of the plan's sets.
pub fn expected_counts(matrix: &AirMatrix, k: usize) -> Result<(usize, usize)> {
    let (case, _) = classify(matrix, k)?;
    let weight = |c: usize| matrix.column_weight(c);
    let shift = matrix.chain().lambda(0);
    Ok(match case {
        Case::I => (1, weight(k % matrix.cols())? - 1),
        Case::IV => (1, weight(k - shift)? - 1),
        Case::II => {
            let kp = k - shift;
            let prof = distance_profile(matrix, kp)?;
            (2, weight(kp)? + weight(kp + prof.mu)? - 3)
        }
        Case::III => {
            let kp = k - shift;
            let prof = distance_profile(matrix, kp)?;
            let extra = prof.t.iter().map(|t| weight(kp + t)).sum::<Result<usize>>()?;
            (prof.p + 2, weight(kp)? + weight(kp + prof.mu)? + extra - 2 * prof.p - 3)
        }
    })
}

/// How one receiver combines code symbols over a particular field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverCoefficients {
    pub k: usize,
    /// `(code symbol index, coefficient)` over `tau`.
    pub alpha: Vec<(usize, u32)>,
    /// Nonzero message coefficients of the combination other than `x_k`.
    pub side: Vec<(usize, u32)>,
    /// Coefficient of `x_k` in the combination.
    pub own: u32,
}

impl ReceiverCoefficients {
    /// Side-information indices this combination needs.
    pub fn gamma(&self) -> Vec<usize> {
        self.side.iter().map(|&(i, _)| i).collect()
    }

    /// Recovers `x_k` from the code symbols and a side-information lookup.
    pub fn apply(&self, code: &Codeword, field: &PrimeField, side: impl Fn(usize) -> Option<u32>) -> Result<u32> {
        let mut acc = 0;
        for &(j, a) in &self.alpha {
            check_index("code symbol", j, code.len())?;
            acc = field.add(acc, field.mul(a, code.get(j)));
        }
        for &(i, v) in &self.side {
            let x = side(i).ok_or(Error::MissingSideInformation { receiver: self.k, index: i })?;
            acc = field.sub(acc, field.mul(v, x % field.modulus()));
        }
        Ok(field.div(acc, self.own).expect("own coefficient is nonzero"))
    }
}

fn receiver_coefficients(
    rx: &ReceiverPlan,
    matrix: &AirMatrix,
    model: &InstanceModel,
    field: &PrimeField,
) -> Result<ReceiverCoefficients> {
    let k = rx.k;
    let alpha: Vec<u32> = if field.is_binary() {
        vec![1; rx.tau.len()]
    } else {
        // Unknowns: one coefficient per symbol in tau. Constraints: the
        // combination is 1 on x_k and 0 on every interfering message.
        let mut rows_of_interest = model.interference_set(k)?;
        rows_of_interest.push(k);
        let a: Vec<Vec<u32>> = rows_of_interest
            .iter()
            .map(|&j| rx.tau.iter().map(|&c| u32::from(matrix.get(j, c))).collect())
            .collect();
        let mut b = vec![0; rows_of_interest.len()];
        *b.last_mut().unwrap() = 1;
        linalg::solve(field, &a, &b, rx.tau.len()).ok_or(Error::NoSolution {
            receiver: k,
            modulus: field.modulus(),
        })?
    };

    let mut combined: BTreeMap<usize, u32> = BTreeMap::new();
    for (&c, &a) in rx.tau.iter().zip(&alpha) {
        for &j in matrix.column_support(c) {
            let e = combined.entry(j).or_insert(0);
            *e = field.add(*e, a);
        }
    }
    combined.retain(|_, v| *v != 0);
    let own = combined.remove(&k).unwrap_or(0);
    let isolates = own != 0 && combined.keys().all(|&i| model.knows(k, i));
    if !isolates {
        return Err(Error::NoSolution {
            receiver: k,
            modulus: field.modulus(),
        });
    }
    Ok(ReceiverCoefficients {
        k,
        alpha: rx.tau.iter().copied().zip(alpha).filter(|&(_, a)| a != 0).collect(),
        side: combined.into_iter().collect(),
        own,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPlan {
    pub field: PrimeField,
    pub receivers: Vec<ReceiverCoefficients>,
}

/// Decodes `x_k` for receiver `k` from the codeword and its side-information.
pub fn decode(
    k: usize,
    codeword: &Codeword,
    side_info: &BTreeMap<usize, u32>,
    plan: &DecodingPlan,
    matrix: &AirMatrix,
    field: &PrimeField,
) -> Result<u32> {
    if codeword.len() != matrix.cols() {
        return Err(Error::LengthMismatch {
            expected: matrix.cols(),
            got: codeword.len(),
        });
    }
    let model = InstanceModel::new(plan.params);
    let coeffs = receiver_coefficients(plan.receiver(k)?, matrix, &model, field)?;
    coeffs.apply(codeword, field, |i| side_info.get(&i).copied())
}

/// Runs every receiver against the codeword, each seeing only its own
/// side-information out of `messages`.
pub fn decode_all(
    codeword: &Codeword,
    messages: &MessageVector,
    plan: &DecodingPlan,
    matrix: &AirMatrix,
    field: &PrimeField,
) -> Result<MessageVector> {
    let field_plan = plan.for_field(matrix, field)?;
    decode_all_with(codeword, messages, &field_plan, plan.params)
}

pub(crate) fn decode_all_with(
    codeword: &Codeword,
    messages: &MessageVector,
    field_plan: &FieldPlan,
    params: ProblemParams,
) -> Result<MessageVector> {
    if messages.len() != params.messages {
        return Err(Error::LengthMismatch {
            expected: params.messages,
            got: messages.len(),
        });
    }
    let model = InstanceModel::new(params);
    let field = &field_plan.field;
    let out = field_plan
        .receivers
        .iter()
        .map(|rc| {
            rc.apply(codeword, field, |i| model.knows(rc.k, i).then(|| messages.get(i)))
                .map_err(|e| Error::Receiver {
                    receiver: rc.k,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MessageVector::new(out, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_air;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn encode_examples() {
        let m = build_air(12, 7).unwrap();
        let f = gf(2);
        let zero = encode(&MessageVector::zeros(12), &m, &f).unwrap();
        assert!(zero.symbols().iter().all(|&c| c == 0));

        let e8 = encode(&MessageVector::unit(12, 8), &m, &f).unwrap();
        assert_eq!(e8.symbols(), &[1, 0, 0, 0, 1, 0, 0, 0]);

        let ones = encode(&MessageVector::new(vec![1; 12], &f), &m, &f).unwrap();
        assert!(ones.symbols().iter().all(|&c| c == 0));

        assert_eq!(
            encode(&MessageVector::zeros(11), &m, &f),
            Err(Error::LengthMismatch { expected: 12, got: 11 })
        );
    }

    #[test]
    fn plan_examples() {
        let m = build_air(12, 7).unwrap();
        let plan = build_plan(&m).unwrap();
        let r = plan.receiver(4).unwrap();
        assert_eq!((r.case, r.tau.clone(), r.gamma.clone()), (Case::II, vec![0, 4], vec![0]));
        let r = plan.receiver(8).unwrap();
        assert_eq!((r.case, r.tau.clone(), r.gamma.clone()), (Case::IV, vec![4], vec![4]));

        let m = build_air(33, 20).unwrap();
        let plan = build_plan(&m).unwrap();
        let r = plan.receiver(12).unwrap();
        assert_eq!((r.case, r.tau.clone(), r.gamma.clone()), (Case::III, vec![0, 9, 12], vec![0, 9]));
        let r = plan.receiver(24).unwrap();
        assert_eq!((r.tau.clone(), r.gamma.clone()), (vec![12, 15], vec![12, 15, 21]));
        let r = plan.receiver(30).unwrap();
        assert_eq!((r.case, r.tau.clone(), r.gamma.clone()), (Case::IV, vec![18], vec![18, 27]));
    }

    #[test]
    fn decode_examples() {
        let m = build_air(12, 7).unwrap();
        let plan = build_plan(&m).unwrap();
        let f = gf(2);
        let x = MessageVector::new(vec![1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1], &f);
        let c = encode(&x, &m, &f).unwrap();
        // c_0 = x_0 + x_8, c_4 = x_4 + x_8.
        assert_eq!(c.get(0), f.add(x.get(0), x.get(8)));
        assert_eq!(c.get(4), f.add(x.get(4), x.get(8)));

        let side = BTreeMap::from([(0, x.get(0))]);
        assert_eq!(decode(4, &c, &side, &plan, &m, &f).unwrap(), x.get(4));
        let side = BTreeMap::from([(8, x.get(8))]);
        assert_eq!(decode(0, &c, &side, &plan, &m, &f).unwrap(), x.get(0));

        let zero = Codeword::new(vec![0; 8], &f);
        let side = BTreeMap::from([(0, 0)]);
        assert_eq!(decode(4, &zero, &side, &plan, &m, &f).unwrap(), 0);

        assert_eq!(
            decode(4, &c, &BTreeMap::new(), &plan, &m, &f),
            Err(Error::MissingSideInformation { receiver: 4, index: 0 })
        );
    }

    #[test]
    fn odd_field_decode() {
        let m = build_air(33, 20).unwrap();
        let plan = build_plan(&m).unwrap();
        for p in [3, 5, 7] {
            let f = gf(p);
            let x = MessageVector::new((0..33).map(|i| (i * i + 3) as u32).collect(), &f);
            let c = encode(&x, &m, &f).unwrap();
            let fp = plan.for_field(&m, &f).unwrap();
            for rc in &fp.receivers {
                let side: BTreeMap<usize, u32> = rc.gamma().into_iter().map(|i| (i, x.get(i))).collect();
                assert_eq!(decode(rc.k, &c, &side, &plan, &m, &f).unwrap(), x.get(rc.k));
                // The odd-characteristic combination touches the same messages
                // as the GF(2) one.
                assert_eq!(rc.gamma(), plan.receiver(rc.k).unwrap().gamma);
            }
            assert_eq!(decode_all(&c, &x, &plan, &m, &f).unwrap(), x);
        }
    }

    #[test]
    fn odd_field_support_matches_binary_gamma() {
        for k in 3..=40 {
            for d in 1..=k - 2 {
                let m = build_air(k, d).unwrap();
                let plan = build_plan(&m).unwrap();
                for p in [3, 5, 7] {
                    let fp = plan.for_field(&m, &gf(p)).unwrap();
                    for (rc, rx) in fp.receivers.iter().zip(&plan.receivers) {
                        assert_eq!(rc.gamma(), rx.gamma, "K={k} D={d} p={p} k={}", rx.k);
                    }
                }
            }
        }
    }

    #[test]
    fn decode_all_basis_vectors() {
        let m = build_air(33, 20).unwrap();
        let plan = build_plan(&m).unwrap();
        let f = gf(2);
        for i in 0..33 {
            let x = MessageVector::unit(33, i);
            let c = encode(&x, &m, &f).unwrap();
            assert_eq!(decode_all(&c, &x, &plan, &m, &f).unwrap(), x);
        }
    }

    #[test]
    fn case_one_symbols_have_two_messages_when_head_is_short() {
        for k in 3..=40 {
            for d in 1..=k - 2 {
                let m = build_air(k, d).unwrap();
                if k - d > k.div_ceil(2) {
                    continue;
                }
                for rx in 0..k - d - 1 {
                    assert_eq!(m.column_support(rx), &[rx, rx + d + 1]);
                }
            }
        }
    }

    #[test]
    fn counts_match_closed_forms() {
        for k in 3..=40 {
            for d in 1..=k - 2 {
                let m = build_air(k, d).unwrap();
                let plan = build_plan(&m).unwrap();
                for rx in &plan.receivers {
                    assert_eq!(expected_counts(&m, rx.k).unwrap(), (rx.tau.len(), rx.gamma.len()));
                }
            }
        }
    }
}

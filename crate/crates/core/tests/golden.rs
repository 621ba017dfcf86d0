mod common;

use air_index::model::InstanceModel;
use air_index::{build_air, derive_params};
use common::{matrix_fixture, plan_doc, sanctioned, table_mismatches, Cell};

#[test]
fn matrix_12_7() {
    assert_eq!(build_air(12, 7).unwrap().to_rows(), matrix_fixture("air_12_7.txt"));
}

#[test]
fn matrix_33_20() {
    assert_eq!(build_air(33, 20).unwrap().to_rows(), matrix_fixture("air_33_20.txt"));
}

#[test]
fn plan_12_7_differs_only_in_single_symbol_receivers() {
    let diffs = table_mismatches(&plan_doc(12, 7), "plan_12_7.csv");
    assert_eq!(diffs.len(), 4, "{diffs:#?}");
    for m in &diffs {
        assert!(sanctioned("plan_12_7.csv", m), "{m}");
        assert_eq!(m.ours, Cell::Value(vec![m.k - 4]));
    }
}

/// Cells where the (33,20) reference table disagrees with the construction.
/// It lists `c_k` in place of the `t`-shifted symbol for the three-symbol
/// receivers 15-20, and gives `mu` for columns whose pivot row has no 1
/// further right.
#[test]
fn plan_33_20_known_differences() {
    let diffs = table_mismatches(&plan_doc(33, 20), "plan_33_20.csv");
    let mut got: Vec<(usize, &str)> = diffs.iter().map(|m| (m.k, m.column)).collect();
    got.sort();
    let mut expected: Vec<(usize, &str)> = (15..=20).map(|k| (k, "tau")).collect();
    expected.extend((18..=20).map(|k| (k, "mu_k")));
    expected.extend((30..=32).map(|k| (k, "mu_kp")));
    expected.sort();
    assert_eq!(got, expected, "{diffs:#?}");

    let doc = plan_doc(33, 20);
    for k in 15..=20 {
        let r = &doc.receivers[k];
        let kp = k - 12;
        let t = r.t_prime[0];
        assert_eq!(r.tau, vec![kp, kp + t, k]);
    }
}

/// The reference sets for receivers 15-20 leave an interfering message in
/// the sum, so they cannot be what the receivers use.
#[test]
fn reference_tau_33_20_does_not_decode() {
    let m = build_air(33, 20).unwrap();
    let model = InstanceModel::new(derive_params(33, 20).unwrap());
    for k in 15..=20 {
        let kp = k - 12;
        let printed = [kp, kp + 9, k];
        let mut parity = [0u8; 33];
        for &c in &printed {
            for &j in m.column_support(c) {
                parity[j] ^= 1;
            }
        }
        let interfering = model.interference_set(k).unwrap();
        let clean = parity[k] == 1 && interfering.iter().all(|&i| parity[i] == 0);
        assert!(!clean, "receiver {k}");
    }
}

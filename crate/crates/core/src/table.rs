//! Per-receiver decoding tables: a JSON document and a fixed-width rendering.
//!
//! Row `R_k` lists the down-distance of column `k` (for `k <= D`), the
//! right-distance `mu` and down-distances `t` of columns `k` and
//! `k' = k - lambda(0)` where those are defined, and the plan's `tau`/`gamma`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chain::ProblemParams;
use crate::codec::{Case, DecodingPlan};
use crate::distances::{distance_profile, down_distance_scan, profile_limit, DistanceProfile};
use crate::error::Result;
use crate::matrix::AirMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRow {
    pub k: usize,
    pub case: Case,
    pub tau: Vec<usize>,
    pub gamma: Vec<usize>,
    pub d_max: Option<usize>,
    pub mu: Option<usize>,
    pub mu_prime: Option<usize>,
    #[serde(default)]
    pub t: Vec<usize>,
    #[serde(default)]
    pub t_prime: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    #[serde(flatten)]
    pub params: ProblemParams,
    pub receivers: Vec<PlanRow>,
}

pub fn plan_document(matrix: &AirMatrix, plan: &DecodingPlan) -> Result<PlanDocument> {
    let limit = profile_limit(matrix.chain());
    let shift = matrix.chain().lambda(0);
    let profile = |c: usize| -> Result<Option<DistanceProfile>> {
        if limit.is_some_and(|l| c <= l) {
            distance_profile(matrix, c).map(Some)
        } else {
            Ok(None)
        }
    };
    let receivers = plan
        .receivers
        .iter()
        .map(|rx| {
            let k = rx.k;
            let own = profile(k)?;
            let prime = if k >= shift { profile(k - shift)? } else { None };
            Ok(PlanRow {
                k,
                case: rx.case,
                tau: rx.tau.clone(),
                gamma: rx.gamma.clone(),
                d_max: if k < matrix.cols() {
                    Some(down_distance_scan(matrix, k)?)
                } else {
                    None
                },
                mu: own.as_ref().map(|p| p.mu),
                mu_prime: prime.as_ref().map(|p| p.mu),
                t: own.map(|p| p.t).unwrap_or_default(),
                t_prime: prime.map(|p| p.t).unwrap_or_default(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlanDocument {
        params: plan.params,
        receivers,
    })
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn list(v: &[usize], prefix: &str) -> String {
    if v.is_empty() {
        return "-".to_string();
    }
    v.iter().map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(",")
}

/// Fixed-width table, one line per receiver, columns separated by two
/// spaces, no trailing whitespace.
pub fn render_table(doc: &PlanDocument) -> String {
    let header = ["R_k", "case", "D_max", "mu_k", "mu_k'", "t_k", "t_k'", "tau_k", "gamma_k"].map(String::from);
    let mut rows = vec![header.to_vec()];
    for r in &doc.receivers {
        rows.push(vec![
            format!("R_{}", r.k),
            r.case.to_string(),
            opt(r.d_max),
            opt(r.mu),
            opt(r.mu_prime),
            list(&r.t, ""),
            list(&r.t_prime, ""),
            list(&r.tau, "c_"),
            list(&r.gamma, "x_"),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "K = {}, D = {}, U = {}", doc.params.messages, doc.params.after, doc.params.before);
    for r in rows {
        let mut line = String::new();
        for (cell, w) in r.iter().zip(&widths) {
            let _ = write!(line, "{cell:<w$}  ");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

//! Who wants what and who knows what.
//!
//! Receiver `k` wants `x_k`, is interfered by `x_{k-U} .. x_{k-1}` and
//! `x_{k+1} .. x_{k+D}` (indices mod `K`) and knows every other message.

use serde::{Deserialize, Serialize};

use crate::chain::ProblemParams;
use crate::error::Result;
use crate::matrix::check_index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceModel {
    pub messages: usize,
    pub after: usize,
    pub before: usize,
}

impl InstanceModel {
    pub fn new(params: ProblemParams) -> Self {
        Self {
            messages: params.messages,
            after: params.after,
            before: params.before,
        }
    }

    /// Same `K` and `D` with a different number of interfering messages
    /// before the demand. Used to probe instances the AIR code is not built for.
    pub fn with_before(params: ProblemParams, before: usize) -> Self {
        Self {
            before,
            ..Self::new(params)
        }
    }

    /// Whether `x_i` interferes at receiver `k`.
    pub fn interferes(&self, k: usize, i: usize) -> bool {
        if i == k {
            return false;
        }
        let n = self.messages;
        let ahead = (i + n - k) % n;
        let behind = (k + n - i) % n;
        (1..=self.after).contains(&ahead) || (1..=self.before).contains(&behind)
    }

    /// Whether receiver `k` knows `x_i`.
    pub fn knows(&self, k: usize, i: usize) -> bool {
        i != k && i < self.messages && !self.interferes(k, i)
    }

    pub fn interference_set(&self, k: usize) -> Result<Vec<usize>> {
        check_index("receiver", k, self.messages)?;
        Ok((0..self.messages).filter(|&i| self.interferes(k, i)).collect())
    }

    pub fn side_information(&self, k: usize) -> Result<Vec<usize>> {
        check_index("receiver", k, self.messages)?;
        Ok((0..self.messages).filter(|&i| self.knows(k, i)).collect())
    }
}

/// Interference set of receiver `k`, ascending.
pub fn interference_set(params: &ProblemParams, k: usize) -> Result<Vec<usize>> {
    InstanceModel::new(*params).interference_set(k)
}

/// Side-information set of receiver `k`, ascending.
pub fn side_information(params: &ProblemParams, k: usize) -> Result<Vec<usize>> {
    InstanceModel::new(*params).side_information(k)
}

use rayon::prelude::*;

use crate::extension::Extension;
use crate::{Error, Result};

/// Largest supported sequence length.
pub const MAX_N: usize = 1024;

/// Extensions `B_n` for `n = 1..=N` together with the limit candidate `B`.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    target: Extension,
    members: Vec<Extension>,
}

impl SequenceSpec {
    pub fn new(target: Extension, members: Vec<Extension>) -> Result<Self> {
        if members.is_empty() || members.len() > MAX_N {
            return Err(Error::Config(format!("sequence length {} outside 1..={MAX_N}", members.len())));
        }
        for (i, m) in members.iter().enumerate() {
            if !m.model().compatible_with(target.model()) {
                return Err(Error::Config(format!(
                    "member n = {} ({}, k = {}) is not compatible with the target ({}, k = {})",
                    i + 1,
                    m.model().name(),
                    m.k(),
                    target.model().name(),
                    target.k()
                )));
            }
        }
        Ok(Self { target, members })
    }

    /// Builds `B_1, …, B_N` in parallel from a closed-form rule.
    pub fn from_fn<F>(target: Extension, n_max: usize, rule: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<Extension> + Sync,
    {
        if n_max == 0 || n_max > MAX_N {
            return Err(Error::Config(format!("N = {n_max} outside 1..={MAX_N}")));
        }
        let members = (1..=n_max).into_par_iter().map(&rule).collect::<Result<Vec<_>>>()?;
        Self::new(target, members)
    }

    /// Constant sequence `B_n = B`.
    pub fn constant(target: Extension, n_max: usize) -> Result<Self> {
        Self::new(target.clone(), vec![target; n_max])
    }

    pub fn target(&self) -> &Extension {
        &self.target
    }

    pub fn members(&self) -> &[Extension] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `B_n`, 1-based.
    pub fn member(&self, n: usize) -> &Extension {
        &self.members[n - 1]
    }
}

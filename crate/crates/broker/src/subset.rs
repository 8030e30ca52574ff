use itertools::Itertools;
use oncredit_core::{compose_all, AgreementResult, Analysis, Contract};

use crate::error::BrokerError;

/// Largest number of submitted contracts the subset search accepts.
pub const DEFAULT_CONTRACT_CAP: usize = 12;

/// Searches subsets of `contracts`, largest first and lexicographically
/// within a size, for one whose composition admits an agreement. Returns the
/// indices of the first such subset.
///
/// The empty subset is never considered, so an empty submission yields
/// `None`.
pub fn find_agreeing_subset(
    contracts: &[Contract],
    cap: usize,
) -> Result<Option<(Vec<usize>, AgreementResult)>, BrokerError> {
    if contracts.len() > cap {
        return Err(BrokerError::TooManyContracts {
            count: contracts.len(),
            cap,
        });
    }
    // Composing everything once surfaces ownership clashes up front.
    compose_all(contracts)?;
    for size in (1..=contracts.len()).rev() {
        for indices in (0..contracts.len()).combinations(size) {
            let composed = compose_all(indices.iter().map(|&i| &contracts[i]))?;
            let agreement = Analysis::new(&composed).agreement();
            if agreement.agreed {
                return Ok(Some((indices, agreement)));
            }
        }
    }
    Ok(None)
}
